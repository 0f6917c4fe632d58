//! Exact integer and rational polynomial arithmetic: resultants, Sturm
//! real-root isolation, Hensel lifting and Zassenhaus factorisation over Z.

use crate::error::Error;
use crate::finfld::FpCtx;
use crate::poly::{self, FieldCtx, Poly};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The rational field as a polynomial coefficient context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QQCtx;

impl FieldCtx for QQCtx {
    type El = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

pub type RatPoly = Poly<QQCtx>;

/// Integer polynomials as plain coefficient vectors (no trailing zeros).
pub type IntPoly = Vec<BigInt>;

pub fn int_trim(mut p: IntPoly) -> IntPoly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn int_deg(p: &IntPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    int_trim(out)
}

pub fn int_to_rat(p: &IntPoly) -> RatPoly {
    p.iter().map(|c| BigRational::from(c.clone())).collect()
}

/// Clears denominators and the content; returns the primitive integer
/// polynomial with positive leading coefficient.
pub fn rat_to_int_primitive(p: &RatPoly) -> IntPoly {
    if p.is_empty() {
        return vec![];
    }
    let mut den = BigInt::one();
    for c in p {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() {
        return vec![];
    }
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    let div = content * sign;
    int_trim(ints.iter().map(|c| c / &div).collect())
}

pub fn int_is_monic(p: &IntPoly) -> bool {
    p.last().map_or(false, |c| c.is_one())
}

pub fn int_eval(p: &IntPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from(c.clone());
    }
    acc
}

pub fn int_derivative(p: &IntPoly) -> IntPoly {
    if p.len() <= 1 {
        return vec![];
    }
    int_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

/// Reduction mod p (coefficients into F_p).
pub fn int_mod_p(p: &IntPoly, fp: &FpCtx) -> Poly<FpCtx> {
    let m = BigInt::from(fp.p);
    let out: Vec<u64> = p
        .iter()
        .map(|c| {
            let r = c.mod_floor(&m);
            r.try_into().unwrap()
        })
        .collect();
    poly::trim(fp, out)
}

/// Resultant of two integer polynomials via fraction-free Gaussian
/// elimination (Bareiss) on the Sylvester matrix.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let da = match int_deg(a) {
        None => return BigInt::zero(),
        Some(d) => d,
    };
    let db = match int_deg(b) {
        None => return BigInt::zero(),
        Some(d) => d,
    };
    if da == 0 {
        return a[0].clone().pow(db as u32);
    }
    if db == 0 {
        return b[0].clone().pow(da as u32);
    }
    let n = da + db;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..db {
        for (j, c) in a.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.iter().rev().enumerate() {
            m[db + i][i + j] = c.clone();
        }
    }
    bareiss_det(m)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Discriminant of a monic integer polynomial.
pub fn discriminant(f: &IntPoly) -> BigInt {
    let d = int_deg(f).expect("discriminant of zero polynomial");
    if d == 1 {
        return BigInt::one();
    }
    let r = resultant(f, &int_derivative(f));
    let sign_flips = (d * (d - 1) / 2) % 2;
    if sign_flips == 1 {
        -r
    } else {
        r
    }
}

// ---------------------------------------------------------------------------
// Sturm sequences and real root isolation
// ---------------------------------------------------------------------------

/// Location of one real root: either an exact rational value or an open
/// interval (lo, hi) with irrational endpoint-free content.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn exact(v: BigRational) -> Self {
        RootInterval { hi: v.clone(), lo: v }
    }
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from(BigInt::from(2))
    }
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

pub struct Sturm {
    chain: Vec<RatPoly>,
}

impl Sturm {
    pub fn new(f: &RatPoly) -> Self {
        let qq = QQCtx;
        let mut chain = vec![f.clone(), poly::derivative(&qq, f)];
        loop {
            let n = chain.len();
            if chain[n - 1].is_empty() {
                chain.pop();
                break;
            }
            let r = poly::rem(&qq, &chain[n - 2], &chain[n - 1]);
            chain.push(poly::neg(&qq, &r));
        }
        Sturm { chain }
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        let mut signs = vec![];
        for p in &self.chain {
            let v = int_eval(&rat_poly_to_scaled_ints(p), x);
            if !v.is_zero() {
                signs.push(v.is_positive());
            }
        }
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_halfopen(&self, a: &BigRational, b: &BigRational) -> usize {
        let va = self.variations_at(a);
        let vb = self.variations_at(b);
        va.saturating_sub(vb)
    }
}

fn rat_poly_to_scaled_ints(p: &RatPoly) -> IntPoly {
    // sign pattern only cares about a positive rescaling
    if p.is_empty() {
        return vec![];
    }
    let mut den = BigInt::one();
    for c in p {
        den = den.lcm(c.denom());
    }
    p.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect()
}

/// A bound B such that all real roots of f lie in (-B, B).
pub fn cauchy_bound(f: &IntPoly) -> BigRational {
    let lead = f.last().expect("zero polynomial").clone();
    let mut m = BigRational::zero();
    for c in &f[..f.len() - 1] {
        let q = BigRational::new(c.abs(), lead.abs());
        if q > m {
            m = q;
        }
    }
    m + BigRational::from(BigInt::from(2))
}

/// Isolates all real roots of a squarefree integer polynomial. Returns
/// disjoint root locations sorted in increasing order; exact rational roots
/// come back as width-zero intervals.
pub fn isolate_real_roots(f: &IntPoly) -> Vec<RootInterval> {
    let d = match int_deg(f) {
        None | Some(0) => return vec![],
        Some(d) => d,
    };
    if d == 1 {
        let r = BigRational::new(-f[0].clone(), f[1].clone());
        return vec![RootInterval::exact(r)];
    }
    let mut work = f.clone();
    let mut exact: Vec<BigRational> = vec![];
    'restart: loop {
        let rat = int_to_rat(&work);
        let sturm = Sturm::new(&rat);
        let bound = cauchy_bound(&work);
        let mut stack = vec![(-bound.clone(), bound.clone())];
        let mut found: Vec<RootInterval> = vec![];
        while let Some((a, b)) = stack.pop() {
            let n = sturm.count_halfopen(&a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                found.push(RootInterval { lo: a, hi: b });
                continue;
            }
            let m = (&a + &b) / BigRational::from(BigInt::from(2));
            if int_eval(&work, &m).is_zero() {
                // deflate at the exact rational root and start over
                exact.push(m.clone());
                let qq = QQCtx;
                let lin: RatPoly = vec![-m, BigRational::one()];
                let (quo, r) = poly::divrem(&qq, &int_to_rat(&work), &lin);
                debug_assert!(r.is_empty());
                work = rat_to_int_primitive(&quo);
                continue 'restart;
            }
            stack.push((a, m.clone()));
            stack.push((m, b));
        }
        let mut out: Vec<RootInterval> = found;
        out.extend(exact.iter().cloned().map(RootInterval::exact));
        out.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));
        return out;
    }
}

/// Halves an isolating interval while keeping its unique root inside.
pub fn refine_interval(f: &IntPoly, iv: &RootInterval) -> RootInterval {
    if iv.is_exact() {
        return iv.clone();
    }
    let m = iv.mid();
    if int_eval(f, &m).is_zero() {
        return RootInterval::exact(m);
    }
    let sturm = Sturm::new(&int_to_rat(f));
    if sturm.count_halfopen(&iv.lo, &m) == 1 {
        RootInterval { lo: iv.lo.clone(), hi: m }
    } else {
        RootInterval { lo: m, hi: iv.hi.clone() }
    }
}

pub fn count_real_roots(f: &IntPoly) -> usize {
    isolate_real_roots(f).len()
}

// ---------------------------------------------------------------------------
// Factorisation over F_p and Zassenhaus over Z
// ---------------------------------------------------------------------------

/// Distinct-degree then equal-degree (Cantor–Zassenhaus) factorisation of a
/// squarefree monic polynomial over F_p. Splitting elements are drawn from a
/// fixed-seed generator so results are deterministic.
pub fn fp_factor_squarefree(fp: &FpCtx, f: &Poly<FpCtx>) -> Vec<Poly<FpCtx>> {
    let mut out = vec![];
    let mut rest = poly::monic(fp, f);
    let x: Poly<FpCtx> = vec![0, 1];
    let mut xp = x.clone();
    let mut d = 1usize;
    while int_deg_fp(&rest) >= 2 * d {
        xp = poly::pow_mod(fp, &xp, fp.p as u128, &rest);
        let g = poly::gcd(fp, &poly::sub(fp, &xp, &x), &rest);
        if poly::deg(&g).map_or(false, |dg| dg > 0) {
            equal_degree_split(fp, &g, d, &mut out);
            let (q, r) = poly::divrem(fp, &rest, &g);
            debug_assert!(r.is_empty());
            rest = q;
            xp = poly::rem(fp, &xp, &rest);
        }
        d += 1;
    }
    if poly::deg(&rest).map_or(false, |dr| dr > 0) {
        out.push(rest);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn int_deg_fp(p: &Poly<FpCtx>) -> usize {
    p.len().saturating_sub(1)
}

fn equal_degree_split(fp: &FpCtx, f: &Poly<FpCtx>, d: usize, out: &mut Vec<Poly<FpCtx>>) {
    let n = int_deg_fp(f);
    if n == d {
        out.push(poly::monic(fp, f));
        return;
    }
    // probe with (deterministically) pseudo-random polynomials of degree < n
    let mut seed = 0x9e3779b97f4a7c15u64 ^ (fp.p.wrapping_mul(n as u64 + 1));
    let e = (pow_u128(fp.p as u128, d as u32) - 1) / 2;
    loop {
        seed = splitmix64(seed);
        let mut probe: Poly<FpCtx> = vec![];
        let mut s = seed;
        for _ in 0..n {
            s = splitmix64(s);
            probe.push(s % fp.p);
        }
        probe = poly::trim(fp, probe);
        if poly::deg(&probe).is_none() {
            continue;
        }
        let powed = poly::pow_mod(fp, &probe, e, f);
        let shifted = poly::sub(fp, &powed, &poly::constant(fp, 1));
        let g = poly::gcd(fp, &shifted, f);
        if let Some(dg) = poly::deg(&g) {
            if dg > 0 && dg < n {
                let (q, r) = poly::divrem(fp, f, &g);
                debug_assert!(r.is_empty());
                equal_degree_split(fp, &g, d, out);
                equal_degree_split(fp, &q, d, out);
                return;
            }
        }
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn pow_u128(b: u128, e: u32) -> u128 {
    let mut acc = 1u128;
    for _ in 0..e {
        acc *= b;
    }
    acc
}

// --- Hensel lifting ---------------------------------------------------------

fn zmod(c: &BigInt, m: &BigInt) -> BigInt {
    c.mod_floor(m)
}

fn zpoly_mod(p: &IntPoly, m: &BigInt) -> IntPoly {
    int_trim(p.iter().map(|c| zmod(c, m)).collect())
}

fn zpoly_mul_mod(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    zpoly_mod(&int_mul(a, b), m)
}

fn zpoly_sub_mod(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        *o = zmod(&(x - y), m);
    }
    int_trim(out)
}

fn zpoly_add_mod(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        *o = zmod(&(x + y), m);
    }
    int_trim(out)
}

/// Division with remainder mod m; divisor must be monic.
fn zpoly_divrem_mod(a: &IntPoly, b: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
    assert!(int_is_monic(b), "modular division needs a monic divisor");
    let db = int_deg(b).unwrap();
    let mut rem = zpoly_mod(a, m);
    let mut quo = vec![BigInt::zero(); rem.len().saturating_sub(db)];
    while let Some(dr) = int_deg(&rem) {
        if dr < db {
            break;
        }
        let c = rem.last().unwrap().clone();
        let shift = dr - db;
        quo[shift] = zmod(&(&quo[shift] + &c), m);
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] = zmod(&(&rem[shift + i] - &c * bc), m);
        }
        rem = int_trim(rem);
    }
    (int_trim(quo), rem)
}

struct HenselPair {
    g: IntPoly,
    h: IntPoly,
    s: IntPoly,
    t: IntPoly,
}

/// One quadratic Hensel step: from f = g h (mod m) to modulus m^2.
fn hensel_step(f: &IntPoly, pair: &HenselPair, m: &BigInt) -> HenselPair {
    let m2 = m * m;
    let e = zpoly_sub_mod(f, &int_mul(&pair.g, &pair.h), &m2);
    let se = zpoly_mul_mod(&pair.s, &e, &m2);
    let (q, r) = zpoly_divrem_mod(&se, &pair.h, &m2);
    let g_new = zpoly_add_mod(
        &pair.g,
        &zpoly_add_mod(&zpoly_mul_mod(&pair.t, &e, &m2), &int_mul(&q, &pair.g), &m2),
        &m2,
    );
    let h_new = zpoly_add_mod(&pair.h, &r, &m2);
    let b = zpoly_sub_mod(
        &zpoly_add_mod(
            &zpoly_mul_mod(&pair.s, &g_new, &m2),
            &zpoly_mul_mod(&pair.t, &h_new, &m2),
            &m2,
        ),
        &vec![BigInt::one()],
        &m2,
    );
    let sb = zpoly_mul_mod(&pair.s, &b, &m2);
    let (c, d) = zpoly_divrem_mod(&sb, &h_new, &m2);
    let s_new = zpoly_sub_mod(&pair.s, &d, &m2);
    let t_new = zpoly_sub_mod(
        &pair.t,
        &zpoly_add_mod(&zpoly_mul_mod(&pair.t, &b, &m2), &int_mul(&c, &g_new), &m2),
        &m2,
    );
    HenselPair { g: g_new, h: h_new, s: s_new, t: t_new }
}

fn fp_to_int(p: &Poly<FpCtx>) -> IntPoly {
    p.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts a pairwise-coprime monic factorisation of f mod p to modulus
/// p^(2^k) >= target, recursing over a factor tree.
fn hensel_multifactor(
    f: &IntPoly,
    factors: &[Poly<FpCtx>],
    fp: &FpCtx,
    target: &BigInt,
) -> Vec<IntPoly> {
    if factors.len() == 1 {
        return vec![zpoly_mod(f, target)];
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let mut g0: Poly<FpCtx> = poly::constant(fp, 1);
    for fac in left {
        g0 = poly::mul(fp, &g0, fac);
    }
    let mut h0: Poly<FpCtx> = poly::constant(fp, 1);
    for fac in right {
        h0 = poly::mul(fp, &h0, fac);
    }
    let (one, s0, t0) = poly::xgcd(fp, &g0, &h0);
    debug_assert_eq!(poly::deg(&one), Some(0));
    let mut m = BigInt::from(fp.p);
    let mut pair = HenselPair {
        g: fp_to_int(&g0),
        h: fp_to_int(&h0),
        s: fp_to_int(&s0),
        t: fp_to_int(&t0),
    };
    while &m < target {
        pair = hensel_step(f, &pair, &m);
        m = &m * &m;
    }
    let mut out = hensel_multifactor(&zpoly_mod(&pair.g, target), left, fp, target);
    out.extend(hensel_multifactor(&zpoly_mod(&pair.h, target), right, fp, target));
    out
}

fn symmetric_rep(p: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / BigInt::from(2);
    int_trim(
        p.iter()
            .map(|c| {
                let r = zmod(c, m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn l2_norm_ceil(f: &IntPoly) -> BigInt {
    let sum: BigInt = f.iter().map(|c| c * c).sum();
    // integer square root, rounded up
    let mut lo = BigInt::zero();
    let mut hi = sum.clone() + BigInt::one();
    while &lo < &hi {
        let mid: BigInt = (&lo + &hi) / BigInt::from(2);
        if &mid * &mid >= sum {
            hi = mid;
        } else {
            lo = mid + BigInt::one();
        }
    }
    hi + BigInt::one()
}

/// Exact division over Z; returns None if it does not divide.
fn int_divide_exact(f: &IntPoly, g: &IntPoly) -> Option<IntPoly> {
    if !int_is_monic(g) {
        return None;
    }
    let qq = QQCtx;
    let (q, r) = poly::divrem(&qq, &int_to_rat(f), &int_to_rat(g));
    if !r.is_empty() {
        return None;
    }
    if q.iter().any(|c| !c.denom().is_one()) {
        return None;
    }
    Some(q.iter().map(|c| c.to_integer()).collect())
}

/// Full factorisation of a monic squarefree integer polynomial into monic
/// irreducible integer factors (Zassenhaus).
pub fn factor_monic_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let d = int_deg(f).expect("zero polynomial");
    if d == 1 {
        return vec![f.clone()];
    }
    // pick the least odd prime where f stays squarefree
    let mut p = 3u64;
    let fp = loop {
        if crate::finfld::is_prime_u64(p) {
            let fp = FpCtx::new(p);
            let fbar = int_mod_p(f, &fp);
            if poly::deg(&fbar) == Some(d) {
                let der = poly::derivative(&fp, &fbar);
                let g = poly::gcd(&fp, &fbar, &der);
                if poly::deg(&g) == Some(0) {
                    break fp;
                }
            }
        }
        p += 2;
    };
    let fbar = int_mod_p(f, &fp);
    let modular = fp_factor_squarefree(&fp, &fbar);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // coefficient bound for any monic factor (Landau–Mignotte)
    let bound = l2_norm_ceil(f) << d;
    let mut target = BigInt::from(fp.p);
    while target <= &bound * BigInt::from(2) {
        target = &target * BigInt::from(fp.p);
    }
    let lifted = hensel_multifactor(&zpoly_mod(f, &target), &modular, &fp, &target);

    let mut remaining: Vec<IntPoly> = lifted;
    let mut current = f.clone();
    let mut found = vec![];
    let mut subset_size = 1usize;
    'outer: while 2 * subset_size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, subset_size) {
            let mut prod = vec![BigInt::one()];
            for &i in &combo {
                prod = zpoly_mod(&int_mul(&prod, &remaining[i]), &target);
            }
            let cand = symmetric_rep(&prod, &target);
            if !int_is_monic(&cand) {
                continue;
            }
            if let Some(quo) = int_divide_exact(&current, &cand) {
                found.push(cand);
                current = quo;
                let keep: Vec<IntPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                remaining = keep;
                continue 'outer;
            }
        }
        subset_size += 1;
    }
    if int_deg(&current).map_or(false, |dc| dc > 0) {
        found.push(current);
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = vec![];
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

/// Irreducibility over Q of a monic integer polynomial.
pub fn is_irreducible(f: &IntPoly) -> Result<bool, Error> {
    let d = match int_deg(f) {
        None | Some(0) => return Ok(false),
        Some(d) => d,
    };
    if !int_is_monic(f) {
        return Err(Error::NotMonic);
    }
    if d == 1 {
        return Ok(true);
    }
    // non-squarefree monic of degree >= 2 is reducible
    let qq = QQCtx;
    let fr = int_to_rat(f);
    let g = poly::gcd(&qq, &fr, &poly::derivative(&qq, &fr));
    if poly::deg(&g).map_or(false, |dg| dg > 0) {
        return Ok(false);
    }
    Ok(factor_monic_squarefree(f).len() == 1)
}

/// Squarefree part of a monic rational polynomial (f / gcd(f, f')),
/// returned monic.
pub fn squarefree_part(f: &RatPoly) -> RatPoly {
    let qq = QQCtx;
    let g = poly::gcd(&qq, f, &poly::derivative(&qq, f));
    if poly::deg(&g) == Some(0) || g.is_empty() {
        return poly::monic(&qq, f);
    }
    let (q, r) = poly::divrem(&qq, f, &g);
    debug_assert!(r.is_empty());
    poly::monic(&qq, &q)
}

pub fn bigint_from_i64(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn int_poly_from_i64(coeffs: &[i64]) -> IntPoly {
    int_trim(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

pub fn rat_from_i64(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn bigint_sign(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
