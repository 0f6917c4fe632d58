//! Acceptance suite: every criterion is one test printing a single
//! PASS/FAIL line (run with --nocapture to see them). All comparisons are
//! exact; run under --release to stay inside the stated time budgets.

use num_bigint::BigUint;
use rigidity_core::congruence::{
    congruence_spectrum, identify_quotient, reconstruct_field_data, reduction_hom,
    synthetic_spectrum, SpectrumEntry,
};
use rigidity_core::corpus;
use rigidity_core::fuchsian::{
    conjugator, modular_embedding_obstruction, trace_field, FuchsianRep, Mat2, ObstructionOutcome,
    Word,
};
use rigidity_core::intpoly::{int_poly_from_i64, splitmix64};
use rigidity_core::local::{composition_account, crt_quotient_check, local_ramified, local_unramified};
use rigidity_core::numfield::{factor_prime, NumberField};
use rigidity_core::order::order_basis;
use rigidity_core::psl2::{psl2_order, Psl2Ctx, Psl2Elem};
use rigidity_core::rigidity::rigidity_report;
use std::time::Instant;

struct Criterion {
    number: u32,
    name: &'static str,
    start: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: u32, name: &'static str) -> Self {
        Criterion { number, name, start: Instant::now(), failures: vec![] }
    }
    fn check(&mut self, ok: bool, what: &str) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }
    fn finish(self) {
        let elapsed = self.start.elapsed();
        if self.failures.is_empty() {
            println!(
                "criterion {}: PASS - {} ({:.2?})",
                self.number, self.name, elapsed
            );
        } else {
            println!(
                "criterion {}: FAIL - {} ({:.2?}): {}",
                self.number,
                self.name,
                elapsed,
                self.failures.join("; ")
            );
            panic!(
                "criterion {} failed: {}",
                self.number,
                self.failures.join("; ")
            );
        }
    }
}

#[test]
fn criterion_1_finite_group_suite() {
    let mut c = Criterion::new(1, "PSL(2,q) orders and simplicity");
    let expected: [(u64, usize, u128); 5] =
        [(5, 1, 60), (7, 1, 168), (3, 2, 360), (11, 1, 660), (13, 1, 1092)];
    for (p, f, order) in expected {
        let ctx = Psl2Ctx::new(p, f).unwrap();
        c.check(ctx.order() == order, &format!("order formula at q = {}^{}", p, f));
        let set = ctx.closure(&ctx.standard_generators(), 2 * order as usize).unwrap();
        c.check(
            set.len() as u128 == order,
            &format!("closure order at q = {}^{}", p, f),
        );
    }
    for (p, f) in [(5u64, 1usize), (7, 1), (3, 2)] {
        let ctx = Psl2Ctx::new(p, f).unwrap();
        let simple = ctx.simplicity_certificate(1_000).unwrap();
        c.check(simple, &format!("simplicity certificate at q = {}^{}", p, f));
    }
    c.finish();
}

#[test]
fn criterion_2_local_structure() {
    let mut c = Criterion::new(2, "local structure of congruence quotients");
    // ramified head quotients cyclic of order q + 1
    for q in [3u64, 5, 7] {
        let rep = local_ramified(q, 1).unwrap();
        c.check(
            rep.head_cyclic && rep.head_order == q as u128 + 1,
            &format!("ramified head cyclic of order {} at q = {}", q + 1, q),
        );
    }
    // ramified step quotients of order q
    for q in [3u64, 5] {
        let rep = local_ramified(q, 4).unwrap();
        for s in &rep.steps {
            c.check(
                s.order == q as u128,
                &format!(
                    "ramified step M^{} -> M^{} at q = {} has order {} (expected {}; enumeration gives alternating orders {:?} by level)",
                    s.from_level,
                    s.from_level + 1,
                    q,
                    s.order,
                    q,
                    rep.level_orders
                ),
            );
        }
    }
    // unramified step kernels (Z/p)^3 for q in {3, 5}, r <= 3
    for p in [3u64, 5] {
        let rep = local_unramified(p, 1, 3).unwrap();
        c.check(rep.steps.len() == 2, &format!("two step kernels at p = {}", p));
        for s in &rep.steps {
            c.check(
                s.kernel_order == (p as u128).pow(3)
                    && s.elementary_abelian
                    && s.exponent_p
                    && s.matches_trace_zero_count,
                &format!("unramified step kernel (Z/{})^3 at level {}", p, s.from_level),
            );
        }
    }
    // unramified orders match enumeration for (3,2) and (5,2)
    for (p, r, order) in [(3u64, 2u32, 648u128), (5, 2, 15_000)] {
        let rep = local_unramified(p, 1, r).unwrap();
        c.check(
            rep.order_formula == BigUint::from(order) && rep.order_enumerated == Some(order),
            &format!("unramified order {} at (q, r) = ({}, {})", order, p, r),
        );
    }
    // composition accounting for q = 5, r = 2
    let acc = composition_account(5, 1, 2, false).unwrap();
    c.check(
        acc.factor_orders == vec![2, 5, 5, 5, 60] && acc.product_matches_group_order,
        "composition factors {2, 60, 5, 5, 5} with product 15000",
    );
    c.finish();
}

#[test]
fn criterion_3_crt() {
    let mut c = Criterion::new(3, "Chinese remainder decomposition of SL(2, Z/15)");
    let rep = crt_quotient_check(&[(3, 1), (5, 1)]).unwrap();
    c.check(rep.sl2_order == 2880, "order 2880");
    c.check(rep.componentwise_bijective, "componentwise map bijective");
    c.check(
        rep.psl_kernel_order == 2 && rep.psl_kernel_rank == 1 && rep.psl_kernel_elementary_two_group,
        "PSL kernel (Z/2)^1",
    );
    c.finish();
}

fn order_capable_builtins() -> Vec<(&'static str, FuchsianRep)> {
    vec![
        ("modular", corpus::modular().unwrap()),
        ("takeuchi-A2", corpus::takeuchi_a2().unwrap()),
        ("takeuchi-B2", corpus::takeuchi_b2().unwrap()),
    ]
}

#[test]
fn criterion_4_reduction_surjectivity() {
    let mut c = Criterion::new(4, "surjective reductions with image order q(q^2-1)/2");
    for (name, rep) in order_capable_builtins() {
        let tf = trace_field(&rep).unwrap();
        let ord = order_basis(&rep, &tf).unwrap();
        c.check(
            ord.bad_primes.contains(&2) && ord.bad_primes.contains(&3),
            &format!("{} bad set contains 2 and 3", name),
        );
        if name == "takeuchi-A2" {
            c.check(
                ord.bad_primes.contains(&5),
                &format!("{} bad set contains 5", name),
            );
        }
        for p in 5..=31u64 {
            if !rigidity_core::finfld::is_prime_u64(p) || ord.is_bad_prime(p) {
                continue;
            }
            for prime in factor_prime(tf.field(), p).unwrap() {
                let hom = reduction_hom(&rep, &ord, &prime).unwrap();
                let expected = psl2_order(prime.norm());
                c.check(
                    hom.surjective == Some(true) && hom.image_order == Some(expected),
                    &format!("{} mod {} surjective with order {}", name, prime.label(), expected),
                );
            }
        }
    }
    c.finish();
}

/// Conjugation by an arbitrary invertible matrix (a PGL element).
fn conj_gl(ctx: &Psl2Ctx, g: [u64; 4], x: &Psl2Elem) -> Psl2Elem {
    use rigidity_core::poly::FieldCtx;
    let fq = &ctx.fq;
    let gm: [Vec<u64>; 4] = [
        fq.from_u64(g[0]),
        fq.from_u64(g[1]),
        fq.from_u64(g[2]),
        fq.from_u64(g[3]),
    ];
    let det = fq.sub(&fq.mul(&gm[0], &gm[3]), &fq.mul(&gm[1], &gm[2]));
    let det_inv = fq.inv(&det).expect("invertible twist");
    // adjugate scaled by 1/det
    let inv = [
        fq.mul(&gm[3], &det_inv),
        fq.mul(&fq.neg(&gm[1]), &det_inv),
        fq.mul(&fq.neg(&gm[2]), &det_inv),
        fq.mul(&gm[0], &det_inv),
    ];
    let mul = |a: &[Vec<u64>; 4], b: &[Vec<u64>; 4]| -> [Vec<u64>; 4] {
        [
            fq.add(&fq.mul(&a[0], &b[0]), &fq.mul(&a[1], &b[2])),
            fq.add(&fq.mul(&a[0], &b[1]), &fq.mul(&a[1], &b[3])),
            fq.add(&fq.mul(&a[2], &b[0]), &fq.mul(&a[3], &b[2])),
            fq.add(&fq.mul(&a[2], &b[1]), &fq.mul(&a[3], &b[3])),
        ]
    };
    let m = mul(&mul(&gm, &x.m), &inv);
    ctx.canonical(m).expect("conjugation preserves the determinant")
}

#[test]
fn criterion_5_identify_quotients() {
    let mut c = Criterion::new(5, "congruence quotient identification round trip");
    let mut seed = 0x1d3a_f00du64;
    for (name, rep) in order_capable_builtins() {
        let tf = trace_field(&rep).unwrap();
        let ord = order_basis(&rep, &tf).unwrap();
        for p in 5..=31u64 {
            if !rigidity_core::finfld::is_prime_u64(p) || ord.is_bad_prime(p) {
                continue;
            }
            for prime in factor_prime(tf.field(), p).unwrap() {
                let hom = reduction_hom(&rep, &ord, &prime).unwrap();
                // twist by a pseudo-random invertible matrix
                let g = loop {
                    seed = splitmix64(seed);
                    let cand = [
                        seed % p,
                        (seed >> 16) % p,
                        (seed >> 32) % p,
                        (seed >> 48) % p,
                    ];
                    let det =
                        ((cand[0] * cand[3]) % p + p - (cand[1] * cand[2]) % p) % p;
                    if det != 0 {
                        break cand;
                    }
                };
                let twisted: Vec<Psl2Elem> =
                    hom.images.iter().map(|x| conj_gl(&hom.ctx, g, x)).collect();
                match identify_quotient(&rep, &ord, &twisted, &hom.ctx) {
                    Ok((found, _)) => c.check(
                        found.p == prime.p && found.local_factor == prime.local_factor,
                        &format!("{} at {} uniquely recovered", name, prime.label()),
                    ),
                    Err(e) => c.check(false, &format!("{} at {}: {}", name, prime.label(), e)),
                }
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_6_example_demonstration() {
    let mut c = Criterion::new(6, "signature-(1;2) pair: relators, arithmeticity, rigidity witness");
    let a = corpus::takeuchi_a().unwrap();
    let b = corpus::takeuchi_b().unwrap();
    // relators hold exactly (checked again here, not only on load)
    for (name, rep) in [("takeuchi-A", &a), ("takeuchi-B", &b)] {
        for r in &rep.relators {
            c.check(
                rep.eval(r).is_projective_identity(),
                &format!("relator of {} evaluates to the identity", name),
            );
        }
    }
    // both arithmetic, invariant trace field Q
    for (name, rep) in [("takeuchi-A", &a), ("takeuchi-B", &b)] {
        let report = rigidity_core::fuchsian::is_arithmetic_auto(rep).unwrap();
        c.check(report.arithmetic, &format!("{} arithmetic", name));
        c.check(
            report.trace_field.degree() == 1,
            &format!("{} invariant trace field Q", name),
        );
    }
    // rigidity: word a^2 has char polys x - 9 vs x - 36, disagreeing at
    // every good prime >= 5
    let report = rigidity_report(&a, &b, &[0, 1], 2, 31).unwrap();
    let target = Word::from_pairs(&[(0, 2)]);
    let row = report.rows.iter().find(|r| r.word == target);
    match row {
        None => c.check(false, "word a^2 missing from the table"),
        Some(row) => {
            c.check(
                row.chi_first == int_poly_from_i64(&[-9, 1])
                    && row.chi_second == int_poly_from_i64(&[-36, 1]),
                "char polys x - 9 vs x - 36 at a^2",
            );
            c.check(
                row.disagreeing_primes == report.good_primes && !report.good_primes.is_empty(),
                "disagreement at every good prime >= 5",
            );
        }
    }
    c.check(report.contradiction.is_some(), "congruence preservation contradicted");
    c.finish();
}

#[test]
fn criterion_7_conjugator_suite() {
    let mut c = Criterion::new(7, "conjugacy solver: recovery, obstructions, trace recursion");
    let g = corpus::modular().unwrap();
    let q = g.field.clone();
    let mut state = 0x5eed_cafeu64;
    let mut done = 0usize;
    while done < 100 {
        state = splitmix64(state);
        let e = |s: u64, shift: u32| ((s >> shift) % 7) as i64 - 3;
        let (ca, cb, cc, cd) = (e(state, 0), e(state, 8), e(state, 16), e(state, 24));
        if ca * cd - cb * cc == 0 {
            continue;
        }
        let cm = Mat2::new(q.from_i64(ca), q.from_i64(cb), q.from_i64(cc), q.from_i64(cd));
        let det = cm.det();
        let det_inv = det.inv().unwrap();
        let cm_inv = Mat2::new(
            cm.d.mul(&det_inv),
            cm.b.neg().mul(&det_inv),
            cm.c.neg().mul(&det_inv),
            cm.a.mul(&det_inv),
        );
        let gens2: Vec<Mat2> = g.gens.iter().map(|m| cm.mul(m).mul(&cm_inv)).collect();
        let rep2 = FuchsianRep {
            field: q.clone(),
            gens: gens2,
            labels: g.labels.clone(),
            relators: vec![],
            tfc_by_construction: false,
        };
        let found = conjugator(&g, &rep2, &[0, 1]).unwrap();
        match found {
            None => c.check(false, "recovery returned none for a constructed conjugate"),
            Some(am) => {
                // projective agreement with the constructed conjugator
                let pivot = cm.entries().iter().position(|x| !x.is_zero()).unwrap();
                let lam = am.entries()[pivot].div(cm.entries()[pivot]).unwrap();
                let ok = (0..4).all(|i| *am.entries()[i] == cm.entries()[i].mul(&lam));
                c.check(ok, "recovered conjugator equals the constructed one up to scalar");
            }
        }
        done += 1;
    }
    // trace mismatch: replacing t by t^2 admits no conjugator
    let t2 = Mat2::new(q.from_i64(1), q.from_i64(2), q.from_i64(0), q.from_i64(1));
    let rep2 = FuchsianRep {
        field: q.clone(),
        gens: vec![t2, g.gens[1].clone()],
        labels: g.labels.clone(),
        relators: vec![],
        tfc_by_construction: false,
    };
    c.check(
        conjugator(&g, &rep2, &[0, 1]).unwrap().is_none(),
        "trace mismatch returns none",
    );
    // reducible first representation is rejected
    let f2 = NumberField::real_quadratic(2).unwrap();
    let s2 = f2.gen();
    let diag = Mat2::new(s2.add(&f2.one()), f2.zero(), f2.zero(), s2.sub(&f2.one()));
    let red = rigidity_core::fuchsian::load_group(&f2, vec![diag], vec![], vec![]).unwrap();
    c.check(
        matches!(conjugator(&red, &red, &[0]), Err(rigidity_core::Error::ReducibleRep)),
        "reducible input rejected",
    );
    // trace recursion tr(AB) + tr(AB^-1) = tr(A) tr(B) on 500 random pairs
    let words = g.random_words(1000, 1, 6, 0xabcd);
    let mut pairs = 0;
    for chunk in words.chunks(2) {
        if pairs >= 500 {
            break;
        }
        let (u, v) = (&chunk[0], &chunk[1]);
        let lhs = g.trace(&u.concat(v)).add(&g.trace(&u.concat(&v.inverse())));
        let rhs = g.trace(u).mul(&g.trace(v));
        if lhs != rhs {
            c.check(false, "trace recursion identity");
            break;
        }
        pairs += 1;
    }
    c.check(pairs >= 500, "500 trace recursion pairs checked");
    c.finish();
}

#[test]
fn criterion_8_splitting_reconstruction() {
    let mut c = Criterion::new(8, "splitting reconstruction from congruence spectra");
    for (name, rep) in order_capable_builtins() {
        let tf = trace_field(&rep).unwrap();
        let ord = order_basis(&rep, &tf).unwrap();
        let spec = congruence_spectrum(&rep, &ord, 31).unwrap();
        let rec = reconstruct_field_data(&spec, None).unwrap();
        c.check(
            rec.degree == 1 && rec.degree_consistent,
            &format!("{} reconstructs degree 1", name),
        );
        // census agrees with direct factorisation in the trace field
        for (p, fs) in &rec.census {
            let oracle: Vec<usize> = factor_prime(tf.field(), *p)
                .unwrap()
                .iter()
                .map(|pr| pr.residue_degree)
                .collect();
            c.check(fs == &oracle, &format!("{} census at p = {}", name, p));
        }
    }
    // synthetic Q(sqrt5) spectrum against the quadratic-residue rule
    let f5 = NumberField::real_quadratic(5).unwrap();
    let spec = synthetic_spectrum(&f5, 100);
    let rec = reconstruct_field_data(&spec, None).unwrap();
    c.check(rec.degree == 2, "synthetic quadratic spectrum has degree 2");
    for (p, fs) in &rec.census {
        let split = p % 5 == 1 || p % 5 == 4;
        let expected = if split { vec![1, 1] } else { vec![2] };
        c.check(fs == &expected, &format!("splitting type at p = {}", p));
    }
    let again = reconstruct_field_data(&spec, Some(&spec)).unwrap();
    c.check(again.similar == Some(true), "identical spectra are similar");
    c.finish();
}

#[test]
fn criterion_9_obstruction_check() {
    let mut c = Criterion::new(9, "modular-embedding trace obstruction");
    // the demo group yields an equality violation on a hyperbolic element
    let demo = corpus::conj_sqrt2_demo().unwrap();
    let tf = trace_field(&demo).unwrap();
    let mut sample = vec![];
    demo.for_each_word(2, |w, _| sample.push(w.clone()));
    match modular_embedding_obstruction(&demo, &tf, &sample).unwrap() {
        ObstructionOutcome::Violation { strict_reverse, .. } => {
            c.check(!strict_reverse, "violation is an equality of absolute traces");
        }
        ObstructionOutcome::Pass { .. } => c.check(false, "expected a violation witness"),
    }
    // arithmetic built-ins with k = Q pass vacuously
    for (name, rep) in order_capable_builtins() {
        let tf = trace_field(&rep).unwrap();
        let words = rep.random_words(25, 1, 4, 11);
        match modular_embedding_obstruction(&rep, &tf, &words).unwrap() {
            ObstructionOutcome::Pass { .. } => {}
            _ => c.check(false, &format!("{} should pass vacuously", name)),
        }
    }
    c.finish();
}
