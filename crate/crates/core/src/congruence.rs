//! Reduction of a quaternion order modulo good primes: explicit splitting
//! of the residue algebra as M(2, F_q), the induced homomorphisms onto
//! PSL(2, q), principal congruence subgroup membership, identification of
//! congruence quotients, and the splitting-behaviour spectrum with its
//! reconstruction.

use crate::error::{Error, Result};
use crate::finfld::FqElem;
use crate::fuchsian::{FuchsianRep, Word};
use crate::numfield::{factor_prime, residue_reduce, PrimeIdealData};
use crate::order::QuaternionOrderData;
use crate::poly::FieldCtx;
use crate::psl2::{psl2_order, MatchedAutomorphism, Psl2Ctx, Psl2Elem};
use serde::Serialize;

pub const CLOSURE_CAP: u128 = 1_000_000;

/// An explicit algebra isomorphism O/pO -> M(2, F_q), given by the images
/// of the four order basis elements.
pub struct SplitOrder {
    pub prime: PrimeIdealData,
    pub basis_images: [[FqElem; 4]; 4],
    /// All 16 basis products were verified against the structure constants.
    pub verified: bool,
}

/// Splits the residue algebra of the order at a good prime: finds a nonzero
/// nilpotent z, forms the left module (O/pO) z and reads the action of the
/// algebra on it as 2x2 matrices.
pub fn split_order_mod_p(
    order: &QuaternionOrderData,
    prime: &PrimeIdealData,
) -> Result<SplitOrder> {
    if order.is_bad_prime(prime.p) {
        return Err(Error::BadPrime {
            p: prime.p,
            reason: "prime lies in the bad set S of the order".into(),
        });
    }
    let fq = prime.residue_field.ctx();
    // structure constants mod p
    let mut table = vec![vec![vec![fq.zero(); 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                table[i][j][k] = residue_reduce(&order.mult_table[i][j][k], prime)?;
            }
        }
    }
    let one: Vec<FqElem> = order
        .one_coords
        .iter()
        .map(|c| residue_reduce(c, prime))
        .collect::<Result<_>>()?;

    let mul_vec = |x: &[FqElem], y: &[FqElem]| -> Vec<FqElem> {
        let mut out = vec![fq.zero(); 4];
        for i in 0..4 {
            if fq.is_zero(&x[i]) {
                continue;
            }
            for j in 0..4 {
                if fq.is_zero(&y[j]) {
                    continue;
                }
                let c = fq.mul(&x[i], &y[j]);
                for k in 0..4 {
                    let t = fq.mul(&c, &table[i][j][k]);
                    out[k] = fq.add(&out[k], &t);
                }
            }
        }
        out
    };

    // nonzero nilpotent by projective enumeration
    let elems = fq.all_elements();
    let q = elems.len();
    let mut nilpotent: Option<Vec<FqElem>> = None;
    'outer: for lead in 0..4usize {
        let free = 3 - lead;
        let mut idx = vec![0usize; free];
        loop {
            let mut z = vec![fq.zero(); 4];
            z[lead] = fq.one();
            for (t, pos) in (lead + 1..4).enumerate() {
                z[pos] = elems[idx[t]].clone();
            }
            let z2 = mul_vec(&z, &z);
            if z2.iter().all(|c| fq.is_zero(c)) {
                nilpotent = Some(z);
                break 'outer;
            }
            let mut carry = 0usize;
            loop {
                if carry == free {
                    break;
                }
                idx[carry] += 1;
                if idx[carry] == q {
                    idx[carry] = 0;
                    carry += 1;
                } else {
                    break;
                }
            }
            if carry == free {
                break;
            }
        }
    }
    let z = nilpotent.ok_or_else(|| {
        Error::InternalConsistency(format!(
            "no nonzero nilpotent in the residue algebra at p = {}; \
             the prime should have been in S",
            prime.p
        ))
    })?;

    // left module (O/pO) z: span of b_i z
    let images: Vec<Vec<FqElem>> = (0..4)
        .map(|i| {
            let mut e = vec![fq.zero(); 4];
            e[i] = fq.one();
            mul_vec(&e, &z)
        })
        .collect();
    // row-reduce to a 2-dimensional basis (u1, u2)
    let mut basis: Vec<Vec<FqElem>> = vec![];
    for v in &images {
        let mut w = v.clone();
        for b in &basis {
            let pc = b.iter().position(|c| !fq.is_zero(c)).unwrap();
            if !fq.is_zero(&w[pc]) {
                let factor = fq.div(&w[pc], &b[pc]);
                for j in 0..4 {
                    let t = fq.mul(&factor, &b[j]);
                    w[j] = fq.sub(&w[j], &t);
                }
            }
        }
        if w.iter().any(|c| !fq.is_zero(c)) {
            basis.push(w);
        }
    }
    if basis.len() != 2 {
        return Err(Error::InternalConsistency(format!(
            "left module by a nilpotent has dimension {} (expected 2) at p = {}",
            basis.len(),
            prime.p
        )));
    }
    // rho(b_i): action on the module in the (u1, u2) basis
    let solve2 = |target: &[FqElem]| -> Result<(FqElem, FqElem)> {
        let u1 = &basis[0];
        let u2 = &basis[1];
        let p1 = u1.iter().position(|c| !fq.is_zero(c)).unwrap();
        let c1 = fq.div(&target[p1], &u1[p1]);
        let mut rem = target.to_vec();
        for j in 0..4 {
            let t = fq.mul(&c1, &u1[j]);
            rem[j] = fq.sub(&rem[j], &t);
        }
        let p2 = u2.iter().position(|c| !fq.is_zero(c)).unwrap();
        let c2 = fq.div(&rem[p2], &u2[p2]);
        for j in 0..4 {
            let t = fq.mul(&c2, &u2[j]);
            rem[j] = fq.sub(&rem[j], &t);
        }
        if rem.iter().any(|c| !fq.is_zero(c)) {
            return Err(Error::InternalConsistency(
                "left-regular action does not preserve the nilpotent module".into(),
            ));
        }
        Ok((c1, c2))
    };
    let mut basis_images: [[FqElem; 4]; 4] = Default::default();
    for i in 0..4 {
        let mut e = vec![fq.zero(); 4];
        e[i] = fq.one();
        let col1 = solve2(&mul_vec(&e, &basis[0]))?;
        let col2 = solve2(&mul_vec(&e, &basis[1]))?;
        basis_images[i] = [col1.0, col2.0, col1.1, col2.1];
    }
    // verification: unital, multiplicative on all 16 products, bijective
    let mat_mul = |x: &[FqElem; 4], y: &[FqElem; 4]| -> [FqElem; 4] {
        [
            fq.add(&fq.mul(&x[0], &y[0]), &fq.mul(&x[1], &y[2])),
            fq.add(&fq.mul(&x[0], &y[1]), &fq.mul(&x[1], &y[3])),
            fq.add(&fq.mul(&x[2], &y[0]), &fq.mul(&x[3], &y[2])),
            fq.add(&fq.mul(&x[2], &y[1]), &fq.mul(&x[3], &y[3])),
        ]
    };
    let lin_comb = |coords: &[FqElem]| -> [FqElem; 4] {
        let mut acc = [fq.zero(), fq.zero(), fq.zero(), fq.zero()];
        for (i, c) in coords.iter().enumerate() {
            for t in 0..4 {
                let v = fq.mul(c, &basis_images[i][t]);
                acc[t] = fq.add(&acc[t], &v);
            }
        }
        acc
    };
    let id = lin_comb(&one);
    if id != [fq.one(), fq.zero(), fq.zero(), fq.one()] {
        return Err(Error::InternalConsistency(
            "image of 1 is not the identity matrix".into(),
        ));
    }
    for i in 0..4 {
        for j in 0..4 {
            let lhs = mat_mul(&basis_images[i], &basis_images[j]);
            let rhs = lin_comb(&table[i][j]);
            if lhs != rhs {
                return Err(Error::InternalConsistency(
                    "splitting map is not multiplicative".into(),
                ));
            }
        }
    }
    // bijectivity: images span M(2, F_q), i.e. trivial nullspace of the
    // coordinate matrix
    {
        let cols: Vec<[FqElem; 4]> = basis_images.to_vec();
        let mut rows = vec![[fq.zero(), fq.zero(), fq.zero(), fq.zero()]; 4];
        for (i, col) in cols.iter().enumerate() {
            for j in 0..4 {
                rows[j][i] = col[j].clone();
            }
        }
        if !crate::poly::nullspace4(&fq, &rows).is_empty() {
            return Err(Error::InternalConsistency(
                "splitting map is not bijective".into(),
            ));
        }
    }
    Ok(SplitOrder { prime: prime.clone(), basis_images, verified: true })
}

/// Evaluates a word on given generator images.
pub fn eval_word_images(ctx: &Psl2Ctx, images: &[Psl2Elem], w: &Word) -> Psl2Elem {
    let mut acc = ctx.identity();
    for &(i, e) in &w.0 {
        let base = if e > 0 { images[i].clone() } else { ctx.inv(&images[i]) };
        for _ in 0..e.unsigned_abs() {
            acc = ctx.mul(&acc, &base);
        }
    }
    acc
}

/// The reduction homomorphism Gamma -> PSL(2, q) at a good prime.
pub struct ReductionHom {
    pub prime: PrimeIdealData,
    pub ctx: Psl2Ctx,
    pub images: Vec<Psl2Elem>,
    /// None when the closure cap prevented the check.
    pub surjective: Option<bool>,
    pub image_order: Option<u128>,
}

impl ReductionHom {
    pub fn eval(&self, w: &Word) -> Psl2Elem {
        eval_word_images(&self.ctx, &self.images, w)
    }
}

/// Reduces every generator through the order and the splitting map,
/// canonicalises in PSL(2, q), verifies the relators and decides
/// surjectivity by closure when within the cap.
pub fn reduction_hom(
    rep: &FuchsianRep,
    order: &QuaternionOrderData,
    prime: &PrimeIdealData,
) -> Result<ReductionHom> {
    let split = split_order_mod_p(order, prime)?;
    let fq = prime.residue_field.ctx();
    let ctx = Psl2Ctx::new(prime.p, prime.residue_degree)?;
    let mut images = vec![];
    for coords in &order.gen_coords {
        let mut acc = [fq.zero(), fq.zero(), fq.zero(), fq.zero()];
        for (i, c) in coords.iter().enumerate() {
            let cbar = residue_reduce(c, prime)?;
            for t in 0..4 {
                let v = fq.mul(&cbar, &split.basis_images[i][t]);
                acc[t] = fq.add(&acc[t], &v);
            }
        }
        let elem = ctx.canonical(acc).map_err(|_| {
            Error::InternalConsistency(
                "norm-one generator image does not have determinant one".into(),
            )
        })?;
        images.push(elem);
    }
    let mut hom =
        ReductionHom { prime: prime.clone(), ctx, images, surjective: None, image_order: None };
    for r in &rep.relators {
        if hom.eval(r) != hom.ctx.identity() {
            return Err(Error::InternalConsistency(format!(
                "relator {} does not map to the identity mod p = {}",
                r.display(&rep.labels),
                prime.p
            )));
        }
    }
    if hom.ctx.order() <= CLOSURE_CAP {
        let set = hom.ctx.closure(&hom.images, CLOSURE_CAP as usize + 1)?;
        hom.image_order = Some(set.len() as u128);
        hom.surjective = Some(set.len() as u128 == hom.ctx.order());
    }
    Ok(hom)
}

/// Principal congruence subgroup membership: the word reduces to the
/// identity of PSL(2, q).
pub fn in_congruence_subgroup(hom: &ReductionHom, w: &Word) -> bool {
    hom.eval(w) == hom.ctx.identity()
}

/// Given generator images of a surjection onto PSL(2, q), recovers the
/// unique prime ideal of norm q whose reduction homomorphism matches up to
/// an automorphism of PSL(2, q). Checking all candidates certifies
/// uniqueness.
pub fn identify_quotient(
    rep: &FuchsianRep,
    order: &QuaternionOrderData,
    hom_images: &[Psl2Elem],
    target: &Psl2Ctx,
) -> Result<(PrimeIdealData, MatchedAutomorphism)> {
    let p = target.spec.p;
    let f = target.spec.f;
    if order.is_bad_prime(p) {
        return Err(Error::BadPrime {
            p,
            reason: "prime lies in the bad set S of the order".into(),
        });
    }
    if hom_images.len() != rep.rank() {
        return Err(Error::InvalidInput("one image per generator is required".into()));
    }
    // the images must define a homomorphism (relators) and a surjection
    for r in &rep.relators {
        if eval_word_images(target, hom_images, r) != target.identity() {
            return Err(Error::InvalidInput(format!(
                "relator {} does not map to the identity; not a homomorphism",
                r.display(&rep.labels)
            )));
        }
    }
    if target.order() <= CLOSURE_CAP {
        let set = target.closure(hom_images, CLOSURE_CAP as usize + 1)?;
        if set.len() as u128 != target.order() {
            return Err(Error::InvalidInput(
                "the given images do not generate PSL(2, q)".into(),
            ));
        }
    }
    let ideals = factor_prime(order.trace_field.field(), p)?;
    let mut matches = vec![];
    for prime in ideals.iter().filter(|pr| pr.residue_degree == f) {
        let red = reduction_hom(rep, order, prime)?;
        if let Some(auto) = target.match_automorphism(&red.images, hom_images) {
            matches.push((prime.clone(), auto));
        }
    }
    match matches.len() {
        0 => Err(Error::NoQuotientCandidate),
        1 => Ok(matches.into_iter().next().unwrap()),
        n => Err(Error::InternalConsistency(format!(
            "{} distinct primes match the same congruence quotient",
            n
        ))),
    }
}

// ---------------------------------------------------------------------------
// Spectra and reconstruction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumIdealEntry {
    pub residue_degree: usize,
    pub ideal: String,
    pub surjective: Option<bool>,
    pub image_order: Option<u128>,
    pub full_order: u128,
}

#[derive(Debug, Clone, Serialize)]
pub enum SpectrumEntry {
    Bad { p: u64, reason: String },
    Good { p: u64, ideals: Vec<SpectrumIdealEntry>, degree_sum: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub field_degree: usize,
    /// Surjectivity is decided by closure only up to this group order.
    pub closure_cap: u128,
    pub entries: Vec<SpectrumEntry>,
}

/// Residue degrees and surjectivity verdicts at every good prime up to the
/// bound; bad primes are kept in the report with the reason they were
/// skipped.
pub fn congruence_spectrum(
    rep: &FuchsianRep,
    order: &QuaternionOrderData,
    p_max: u64,
) -> Result<SpectrumReport> {
    let k = order.trace_field.field().clone();
    let mut entries = vec![];
    for p in 2..=p_max {
        if !crate::finfld::is_prime_u64(p) {
            continue;
        }
        if order.is_bad_prime(p) {
            let reason = if order.bad_primes.contains(&p) {
                format!("{} lies in S", p)
            } else {
                format!("{} divides the field discriminant", p)
            };
            entries.push(SpectrumEntry::Bad { p, reason });
            continue;
        }
        let ideals = factor_prime(&k, p)?;
        let mut rows = vec![];
        let mut degree_sum = 0usize;
        for prime in &ideals {
            degree_sum += prime.residue_degree;
            let red = reduction_hom(rep, order, prime)?;
            rows.push(SpectrumIdealEntry {
                residue_degree: prime.residue_degree,
                ideal: prime.label(),
                surjective: red.surjective,
                image_order: red.image_order,
                full_order: psl2_order(prime.norm()),
            });
        }
        if degree_sum != k.degree() {
            return Err(Error::InternalConsistency(
                "residue degrees do not sum to the field degree".into(),
            ));
        }
        entries.push(SpectrumEntry::Good { p, ideals: rows, degree_sum });
    }
    Ok(SpectrumReport { field_degree: k.degree(), closure_cap: CLOSURE_CAP, entries })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    /// Degree sum f_1 + ... + f_n, consistent across all good primes.
    pub degree: usize,
    pub degree_consistent: bool,
    /// Per good prime: the sorted multiset of residue degrees.
    pub census: Vec<(u64, Vec<usize>)>,
    /// When two spectra were compared: splitting types agree at all
    /// commonly good primes.
    pub similar: Option<bool>,
    pub compared_primes: Option<usize>,
}

/// Reconstructs the field degree and per-prime splitting census from a
/// spectrum; with a second spectrum, reports arithmetic similarity away
/// from the bad primes.
pub fn reconstruct_field_data(
    first: &SpectrumReport,
    second: Option<&SpectrumReport>,
) -> Result<ReconstructionReport> {
    let census = census_of(first);
    if census.is_empty() {
        return Err(Error::InvalidInput("spectrum has no good primes".into()));
    }
    let degrees: Vec<usize> = census.iter().map(|(_, fs)| fs.iter().sum()).collect();
    let degree = degrees[0];
    let degree_consistent = degrees.iter().all(|&d| d == degree);
    if !degree_consistent {
        return Err(Error::InternalConsistency(
            "residue degree sums disagree across primes".into(),
        ));
    }
    let (similar, compared) = match second {
        None => (None, None),
        Some(s2) => {
            let c2 = census_of(s2);
            let mut agree = true;
            let mut count = 0usize;
            for (p, fs) in &census {
                if let Some((_, fs2)) = c2.iter().find(|(p2, _)| p2 == p) {
                    count += 1;
                    if fs != fs2 {
                        agree = false;
                    }
                }
            }
            (Some(agree), Some(count))
        }
    };
    Ok(ReconstructionReport { degree, degree_consistent, census, similar, compared_primes: compared })
}

fn census_of(spec: &SpectrumReport) -> Vec<(u64, Vec<usize>)> {
    spec.entries
        .iter()
        .filter_map(|e| match e {
            SpectrumEntry::Good { p, ideals, .. } => {
                let mut fs: Vec<usize> = ideals.iter().map(|i| i.residue_degree).collect();
                fs.sort_unstable();
                Some((*p, fs))
            }
            SpectrumEntry::Bad { .. } => None,
        })
        .collect()
}

/// Builds a spectrum directly from prime factorisation in a number field;
/// serves as the oracle for splitting reconstruction.
pub fn synthetic_spectrum(field: &crate::numfield::NumberField, p_max: u64) -> SpectrumReport {
    let mut entries = vec![];
    for p in 3..=p_max {
        if !crate::finfld::is_prime_u64(p) {
            continue;
        }
        match factor_prime(field, p) {
            Ok(ideals) => {
                let rows: Vec<SpectrumIdealEntry> = ideals
                    .iter()
                    .map(|pr| SpectrumIdealEntry {
                        residue_degree: pr.residue_degree,
                        ideal: pr.label(),
                        surjective: None,
                        image_order: None,
                        full_order: psl2_order(pr.norm()),
                    })
                    .collect();
                let degree_sum = ideals.iter().map(|i| i.residue_degree).sum();
                entries.push(SpectrumEntry::Good { p, ideals: rows, degree_sum });
            }
            Err(e) => entries.push(SpectrumEntry::Bad { p, reason: e.to_string() }),
        }
    }
    SpectrumReport { field_degree: field.degree(), closure_cap: CLOSURE_CAP, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{load_group, trace_field, Mat2};
    use crate::numfield::NumberField;
    use crate::order::order_basis;

    fn modular_group() -> FuchsianRep {
        let q = NumberField::rationals();
        let t = Mat2::new(q.from_i64(1), q.from_i64(1), q.from_i64(0), q.from_i64(1));
        let s = Mat2::new(q.from_i64(0), q.from_i64(-1), q.from_i64(1), q.from_i64(0));
        load_group(
            &q,
            vec![t, s],
            vec!["t".into(), "s".into()],
            vec![
                Word::from_pairs(&[(1, 2)]),
                Word::from_pairs(&[(1, 1), (0, 1), (1, 1), (0, 1), (1, 1), (0, 1)]),
            ],
        )
        .unwrap()
    }

    fn modular_order() -> (FuchsianRep, QuaternionOrderData) {
        let rep = modular_group();
        let tf = trace_field(&rep).unwrap();
        let ord = order_basis(&rep, &tf).unwrap();
        (rep, ord)
    }

    #[test]
    fn split_modular_at_5() {
        let (_, ord) = modular_order();
        let primes = factor_prime(ord.trace_field.field(), 5).unwrap();
        let split = split_order_mod_p(&ord, &primes[0]).unwrap();
        assert!(split.verified);
    }

    #[test]
    fn split_rejects_bad_prime() {
        let (_, ord) = modular_order();
        let q = NumberField::rationals();
        let primes = factor_prime(&q, 3).unwrap();
        assert!(matches!(
            split_order_mod_p(&ord, &primes[0]),
            Err(Error::BadPrime { p: 3, .. })
        ));
    }

    #[test]
    fn reduction_modular_mod5_surjective() {
        let (rep, ord) = modular_order();
        let primes = factor_prime(ord.trace_field.field(), 5).unwrap();
        let hom = reduction_hom(&rep, &ord, &primes[0]).unwrap();
        assert_eq!(hom.image_order, Some(60));
        assert_eq!(hom.surjective, Some(true));
    }

    #[test]
    fn reduction_is_homomorphism_on_samples() {
        let (rep, ord) = modular_order();
        let primes = factor_prime(ord.trace_field.field(), 7).unwrap();
        let hom = reduction_hom(&rep, &ord, &primes[0]).unwrap();
        let words = rep.random_words(100, 1, 6, 99);
        for pair in words.chunks(2) {
            let (u, v) = (&pair[0], &pair[1]);
            let lhs = hom.eval(&u.concat(v));
            let rhs = hom.ctx.mul(&hom.eval(u), &hom.eval(v));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn congruence_membership_t_power() {
        let (rep, ord) = modular_order();
        let primes = factor_prime(ord.trace_field.field(), 5).unwrap();
        let hom = reduction_hom(&rep, &ord, &primes[0]).unwrap();
        assert!(in_congruence_subgroup(&hom, &Word::empty()));
        assert!(!in_congruence_subgroup(&hom, &Word::gen(0)));
        assert!(in_congruence_subgroup(&hom, &Word::from_pairs(&[(0, 5)])));
        let _ = rep;
    }

    #[test]
    fn kernel_membership_matches_scalar_reduction() {
        // w lies in the congruence kernel iff its order coordinates reduce
        // to a scalar matrix mod p
        let (rep, ord) = modular_order();
        let primes = factor_prime(ord.trace_field.field(), 5).unwrap();
        let prime = &primes[0];
        let hom = reduction_hom(&rep, &ord, prime).unwrap();
        let split = split_order_mod_p(&ord, prime).unwrap();
        let fq = prime.residue_field.ctx();
        for w in [
            Word::from_pairs(&[(0, 5)]),
            Word::from_pairs(&[(0, 1)]),
            Word::from_pairs(&[(1, 2)]),
            Word::from_pairs(&[(0, 5), (1, 2)]),
            Word::from_pairs(&[(0, 2), (1, 1)]),
        ] {
            let coords = ord.express(&rep.eval(&w)).expect("group word lies in the order");
            let mut acc = [fq.zero(), fq.zero(), fq.zero(), fq.zero()];
            for (i, c) in coords.iter().enumerate() {
                let cbar = residue_reduce(c, prime).unwrap();
                for t in 0..4 {
                    let v = fq.mul(&cbar, &split.basis_images[i][t]);
                    acc[t] = fq.add(&acc[t], &v);
                }
            }
            let scalar = fq.is_zero(&acc[1]) && fq.is_zero(&acc[2]) && acc[0] == acc[3];
            assert_eq!(in_congruence_subgroup(&hom, &w), scalar, "word {:?}", w);
        }
    }

    #[test]
    fn identify_roundtrip_mod5() {
        let (rep, ord) = modular_order();
        let primes = factor_prime(ord.trace_field.field(), 5).unwrap();
        let hom = reduction_hom(&rep, &ord, &primes[0]).unwrap();
        let (found, auto) = identify_quotient(&rep, &ord, &hom.images, &hom.ctx).unwrap();
        assert_eq!(found.p, 5);
        assert_eq!(auto.frobenius_power, 0);
    }

    #[test]
    fn identify_twisted_roundtrip() {
        let (rep, ord) = modular_order();
        let primes = factor_prime(ord.trace_field.field(), 7).unwrap();
        let hom = reduction_hom(&rep, &ord, &primes[0]).unwrap();
        let c = hom.ctx.from_u64s([1, 3, 0, 1]).unwrap();
        let twisted: Vec<Psl2Elem> = hom.images.iter().map(|x| hom.ctx.conj(&c, x)).collect();
        let (found, _) = identify_quotient(&rep, &ord, &twisted, &hom.ctx).unwrap();
        assert_eq!(found.p, 7);
    }

    #[test]
    fn identify_rejects_non_homomorphism() {
        let (rep, ord) = modular_order();
        let primes = factor_prime(ord.trace_field.field(), 5).unwrap();
        let hom = reduction_hom(&rep, &ord, &primes[0]).unwrap();
        // break the relator s^2 = 1 by replacing the image of s
        let bad = vec![hom.images[0].clone(), hom.images[0].clone()];
        assert!(identify_quotient(&rep, &ord, &bad, &hom.ctx).is_err());
    }

    #[test]
    fn spectrum_of_modular_group() {
        let (rep, ord) = modular_order();
        let spec = congruence_spectrum(&rep, &ord, 31).unwrap();
        for e in &spec.entries {
            match e {
                SpectrumEntry::Bad { p, .. } => assert!(*p == 2 || *p == 3),
                SpectrumEntry::Good { ideals, degree_sum, .. } => {
                    assert_eq!(*degree_sum, 1);
                    assert_eq!(ideals.len(), 1);
                    assert_eq!(ideals[0].surjective, Some(true));
                }
            }
        }
        let rec = reconstruct_field_data(&spec, None).unwrap();
        assert_eq!(rec.degree, 1);
        assert!(rec.degree_consistent);
    }

    #[test]
    fn synthetic_quadratic_spectrum_matches_oracle() {
        // Q(sqrt5): p splits iff p = +-1 mod 5
        let f = NumberField::real_quadratic(5).unwrap();
        let spec = synthetic_spectrum(&f, 100);
        let rec = reconstruct_field_data(&spec, None).unwrap();
        assert_eq!(rec.degree, 2);
        for (p, fs) in &rec.census {
            let split = p % 5 == 1 || p % 5 == 4;
            if split {
                assert_eq!(fs, &vec![1, 1], "p = {}", p);
            } else {
                assert_eq!(fs, &vec![2], "p = {}", p);
            }
        }
        let rec2 = reconstruct_field_data(&spec, Some(&spec)).unwrap();
        assert_eq!(rec2.similar, Some(true));
        let q = NumberField::rationals();
        let spec_q = synthetic_spectrum(&q, 100);
        let rec3 = reconstruct_field_data(&spec, Some(&spec_q)).unwrap();
        assert_eq!(rec3.similar, Some(false));
    }
}
