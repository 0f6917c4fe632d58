//! Local quotient structure of quaternion orders at finite precision:
//! norm-one unit groups of M(2, o/p^r) in the split case, the pair model
//! for the ramified case, composition-factor accounting and the
//! Chinese-remainder decomposition of SL(2, Z/n).
//!
//! Everything here is certified by explicit enumeration against closed
//! formulas; every enumerative claim records its cap.

use crate::error::{Error, Result};
use crate::finfld::prime_divisors;
use crate::galois::{mat_det, mat_mul, GaloisRingSpec, GrElem, MatZpm, Zpm};
use crate::psl2::psl2_order;
use num_bigint::BigUint;
use serde::Serialize;
use std::sync::Arc;

pub const ENUMERATION_CAP: u128 = 10_000_000;

// ---------------------------------------------------------------------------
// Unramified case: SL(2, o/p^r)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct UnramifiedStep {
    /// Kernel of level r+1 -> level r.
    pub from_level: u32,
    pub kernel_order: u128,
    pub expected_order: u128,
    pub elementary_abelian: bool,
    pub exponent_p: bool,
    /// Kernel elements biject with trace-zero matrices over the residue field.
    pub matches_trace_zero_count: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnramifiedReport {
    pub p: u64,
    pub f: usize,
    pub r: u32,
    pub order_formula: BigUint,
    pub order_enumerated: Option<u128>,
    pub steps: Vec<UnramifiedStep>,
    pub enumeration_cap: u128,
}

/// |SL(2, o/p^r)| = q^{3(r-1)} * q(q^2-1) for residue field size q.
pub fn sl2_local_order_formula(p: u64, f: usize, r: u32) -> BigUint {
    let q = BigUint::from(p).pow(f as u32);
    let q3 = q.pow(3);
    let base = &q3 - &q; // q(q^2-1)
    base * q.pow(3 * (r - 1))
}

/// Enumerates and certifies SL(2, o_K/p^r) for the unramified local algebra.
/// Enumeration covers r = 1 for any residue degree and all r for f = 1;
/// outside that range only the formula is reported.
pub fn local_unramified(p: u64, f: usize, r: u32) -> Result<UnramifiedReport> {
    if r == 0 {
        return Err(Error::InvalidInput("level r must be at least 1".into()));
    }
    if p < 3 || !crate::finfld::is_prime_u64(p) {
        return Err(Error::BadPrime { p, reason: "odd prime required".into() });
    }
    let order_formula = sl2_local_order_formula(p, f, r);
    let mut order_enumerated = None;

    if r == 1 {
        let q = (p as u128).pow(f as u32);
        if q * q * q * q <= ENUMERATION_CAP {
            order_enumerated = Some(count_sl2_fq(p, f)? as u128);
        }
    } else if f == 1 {
        let n = (p as u128).pow(4 * r);
        if n <= ENUMERATION_CAP {
            order_enumerated = Some(count_sl2_zpm(p, r)? as u128);
        }
    }
    if let Some(e) = order_enumerated {
        if BigUint::from(e) != order_formula {
            return Err(Error::InternalConsistency(format!(
                "enumerated order {} != formula {}",
                e, order_formula
            )));
        }
    }

    let mut steps = vec![];
    if f == 1 {
        for s in 1..r {
            steps.push(unramified_step_kernel(p, s)?);
        }
    }
    Ok(UnramifiedReport {
        p,
        f,
        r,
        order_formula,
        order_enumerated,
        steps,
        enumeration_cap: ENUMERATION_CAP,
    })
}

fn count_sl2_fq(p: u64, f: usize) -> Result<usize> {
    use crate::finfld::FiniteFieldSpec;
    use crate::poly::FieldCtx;
    let spec = FiniteFieldSpec::new(p, f)?;
    let fq = spec.ctx();
    let elems = fq.all_elements();
    let mut count = 0usize;
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    let det = fq.sub(&fq.mul(a, d), &fq.mul(b, c));
                    if det == fq.one() {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

fn count_sl2_zpm(p: u64, r: u32) -> Result<usize> {
    let ring = Zpm::new(p, r)?;
    let m = ring.modulus;
    let mut count = 0usize;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    if mat_det(&ring, &[a, b, c, d]) == 1 {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Certifies the kernel of SL(2, Z/p^{s+1}) -> SL(2, Z/p^s): elementary
/// abelian of order p^3, realised by A |-> 1 + p^s A on trace-zero A mod p.
fn unramified_step_kernel(p: u64, s: u32) -> Result<UnramifiedStep> {
    let high = Zpm::new(p, s + 1)?;
    let ps = high.modulus / p; // p^s
    let mut kernel: Vec<MatZpm> = vec![];
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let x: MatZpm = [
                        high.add(1, high.mul(ps, a)),
                        high.mul(ps, b),
                        high.mul(ps, c),
                        high.add(high.mul(ps, d), 0),
                    ];
                    let x = [x[0], x[1], x[2], high.add(x[3], 1)];
                    if mat_det(&high, &x) == 1 {
                        kernel.push(x);
                    }
                }
            }
        }
    }
    let expected = (p as u128).pow(3);
    let trace_zero = (p as u128).pow(3); // choices of A mod p with tr A = 0
    let mut exponent_p = true;
    let mut elementary_abelian = true;
    for x in &kernel {
        let mut acc: MatZpm = [1, 0, 0, 1];
        for _ in 0..p {
            acc = mat_mul(&high, &acc, x);
        }
        if acc != [1, 0, 0, 1] {
            exponent_p = false;
        }
    }
    for x in &kernel {
        for y in &kernel {
            if mat_mul(&high, x, y) != mat_mul(&high, y, x) {
                elementary_abelian = false;
            }
        }
    }
    Ok(UnramifiedStep {
        from_level: s,
        kernel_order: kernel.len() as u128,
        expected_order: expected,
        elementary_abelian,
        exponent_p,
        matches_trace_zero_count: kernel.len() as u128 == trace_zero,
    })
}

// ---------------------------------------------------------------------------
// Ramified case: the pair model
// ---------------------------------------------------------------------------

/// An element of O^1/O^1(M^m) in the pair model: x = [[a, b], [p b', a']]
/// with a kept modulo p^ceil(m/2) and b modulo p^floor(m/2).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RamifiedLocalElement {
    pub a: GrElem,
    pub b: GrElem,
}

/// The group O^1/O^1(M^m) for the ramified quaternion algebra over Q_p.
pub struct RamifiedLevel {
    pub p: u64,
    pub m: u32,
    pub ring_a: Arc<GaloisRingSpec>,
    /// Precision floor(m/2); zero precision is represented by m = 0 checks.
    pub ring_b: Option<Arc<GaloisRingSpec>>,
}

impl RamifiedLevel {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("level m must be at least 1".into()));
        }
        let sa = (m + 1) / 2;
        let sb = m / 2;
        let ring_a = GaloisRingSpec::new(p, sa)?;
        let ring_b = if sb == 0 {
            None
        } else {
            Some(GaloisRingSpec::new(p, sb)?)
        };
        Ok(RamifiedLevel { p, m, ring_a, ring_b })
    }

    pub fn identity(&self) -> RamifiedLocalElement {
        RamifiedLocalElement { a: self.ring_a.one(), b: [0, 0] }
    }

    /// (a,b)(c,d) = (ac + p b d', ad + b c'), each component at its own
    /// precision; the p-multiple makes the mixed terms well-defined.
    pub fn mul(&self, x: &RamifiedLocalElement, y: &RamifiedLocalElement) -> RamifiedLocalElement {
        let ra = &self.ring_a;
        let ac = ra.mul(&x.a, &y.a);
        let a_new = match &self.ring_b {
            None => ac,
            Some(_) => {
                let bdp = ra.mul(&x.b, &ra.frobenius(&y.b));
                let p_bdp = ra.mul(&ra.from_u64(self.p), &bdp);
                ra.add(&ac, &p_bdp)
            }
        };
        let b_new = match &self.ring_b {
            None => [0, 0],
            Some(rb) => {
                let ad = ra.mul(&x.a, &y.b);
                let bc = ra.mul(&x.b, &ra.frobenius(&y.a));
                let sum = ra.add(&ad, &bc);
                rb.reduce_to(rb, &[sum[0] % rb.base.modulus, sum[1] % rb.base.modulus])
            }
        };
        RamifiedLocalElement { a: a_new, b: b_new }
    }

    /// Reduced norm condition at this precision: N(a) - p N(b) = 1 mod p^sa.
    pub fn is_member(&self, x: &RamifiedLocalElement) -> bool {
        let ra = &self.ring_a;
        let na = ra.norm(&x.a);
        let val = match &self.ring_b {
            None => na,
            Some(_) => {
                let nb = ra.norm(&x.b);
                ra.base.sub(na, ra.base.mul(self.p % ra.base.modulus, nb))
            }
        };
        val == 1 % ra.base.modulus
    }

    pub fn enumerate(&self) -> Result<Vec<RamifiedLocalElement>> {
        let count_a = (self.ring_a.base.modulus as u128).pow(2);
        let count_b = match &self.ring_b {
            None => 1u128,
            Some(rb) => (rb.base.modulus as u128).pow(2),
        };
        if count_a * count_b > ENUMERATION_CAP {
            return Err(Error::CapExceeded(format!(
                "ramified pair model would enumerate {} candidates (cap {})",
                count_a * count_b,
                ENUMERATION_CAP
            )));
        }
        let mut out = vec![];
        let bs: Vec<GrElem> = match &self.ring_b {
            None => vec![[0, 0]],
            Some(rb) => rb.all_elements(),
        };
        for a in self.ring_a.all_elements() {
            for b in &bs {
                let x = RamifiedLocalElement { a, b: *b };
                if self.is_member(&x) {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }

    /// Truncation to a lower level.
    pub fn reduce_to(&self, target: &RamifiedLevel, x: &RamifiedLocalElement) -> RamifiedLocalElement {
        let a = [x.a[0] % target.ring_a.base.modulus, x.a[1] % target.ring_a.base.modulus];
        let b = match &target.ring_b {
            None => [0, 0],
            Some(rb) => [x.b[0] % rb.base.modulus, x.b[1] % rb.base.modulus],
        };
        RamifiedLocalElement { a, b }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RamifiedStep {
    /// Kernel of level j+1 -> level j in the M-adic filtration.
    pub from_level: u32,
    pub order: u128,
    pub exponent_p: bool,
    pub abelian: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RamifiedReport {
    pub p: u64,
    pub m: u32,
    /// |O^1/O^1(M^j)| for j = 1..=m, by enumeration.
    pub level_orders: Vec<u128>,
    pub head_order: u128,
    pub head_cyclic: bool,
    pub steps: Vec<RamifiedStep>,
    pub enumeration_cap: u128,
}

/// Enumerates the ramified local quotients O^1/O^1(M^j) for j <= m via the
/// pair model, certifying the head quotient cyclic of order q+1 and
/// reporting the order and exponent of every filtration step.
pub fn local_ramified(p: u64, m: u32) -> Result<RamifiedReport> {
    if p < 3 || !crate::finfld::is_prime_u64(p) {
        return Err(Error::BadPrime { p, reason: "odd prime required".into() });
    }
    let levels: Vec<RamifiedLevel> = (1..=m)
        .map(|j| RamifiedLevel::new(p, j))
        .collect::<Result<_>>()?;
    let enumerations: Vec<Vec<RamifiedLocalElement>> = levels
        .iter()
        .map(|l| l.enumerate())
        .collect::<Result<_>>()?;
    let level_orders: Vec<u128> = enumerations.iter().map(|e| e.len() as u128).collect();

    // head quotient: multiplicative orders in the norm-one subgroup of lambda
    let head = &levels[0];
    let head_elems = &enumerations[0];
    let head_order = head_elems.len() as u128;
    let mut head_cyclic = false;
    for x in head_elems {
        let mut acc = head.identity();
        let mut ord = 0u128;
        loop {
            acc = head.mul(&acc, x);
            ord += 1;
            if acc == head.identity() {
                break;
            }
            if ord > head_order {
                return Err(Error::InternalConsistency("element order exceeds group order".into()));
            }
        }
        if ord == head_order {
            head_cyclic = true;
            break;
        }
    }

    let mut steps = vec![];
    for j in 1..m as usize {
        let hi = &levels[j];
        let lo = &levels[j - 1];
        let kernel: Vec<&RamifiedLocalElement> = enumerations[j]
            .iter()
            .filter(|x| hi.reduce_to(lo, x) == lo.identity())
            .collect();
        let mut exponent_p = true;
        for x in &kernel {
            let mut acc = hi.identity();
            for _ in 0..p {
                acc = hi.mul(&acc, x);
            }
            if acc != hi.identity() {
                exponent_p = false;
                break;
            }
        }
        let mut abelian = true;
        'outer: for x in &kernel {
            for y in &kernel {
                if hi.mul(x, y) != hi.mul(y, x) {
                    abelian = false;
                    break 'outer;
                }
            }
        }
        steps.push(RamifiedStep {
            from_level: j as u32,
            order: kernel.len() as u128,
            exponent_p,
            abelian,
        });
    }

    Ok(RamifiedReport {
        p,
        m,
        level_orders,
        head_order,
        head_cyclic,
        steps,
        enumeration_cap: ENUMERATION_CAP,
    })
}

// ---------------------------------------------------------------------------
// Composition-factor accounting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct CompositionAccount {
    pub q: u64,
    pub r: u32,
    pub ramified: bool,
    /// Orders of the composition factors (with multiplicity), sorted.
    pub factor_orders: Vec<u128>,
    pub product_matches_group_order: bool,
    pub group_order: BigUint,
    /// Set when PSL(2,q) is not simple (q = 3) and was replaced by its own
    /// composition factors.
    pub caveat: Option<String>,
}

/// Composition factors of O^1/O^1(p^r) and its PSL quotient.
pub fn composition_account(p: u64, f: usize, r: u32, ramified: bool) -> Result<CompositionAccount> {
    let q128 = (p as u128).pow(f as u32);
    let q = u64::try_from(q128).map_err(|_| Error::CapExceeded("q exceeds u64".into()))?;
    if !ramified {
        let group_order = sl2_local_order_formula(p, f, r);
        let mut factor_orders: Vec<u128> = vec![2];
        let mut caveat = None;
        if q == 3 {
            // PSL(2,3) is solvable with factors 2, 2, 3
            factor_orders.extend_from_slice(&[2, 2, 3]);
            caveat = Some(
                "PSL(2,q) is not simple for q = 3; it contributes its own composition factors"
                    .into(),
            );
        } else {
            factor_orders.push(psl2_order(q as u128));
            if q % 3 == 0 {
                caveat = Some("q is not coprime to 6; PSL(2,q) simplicity requires q > 3".into());
            }
        }
        for _ in 0..(3 * f as u32 * (r - 1)) {
            factor_orders.push(p as u128);
        }
        factor_orders.sort_unstable();
        let product: BigUint = factor_orders.iter().map(|&o| BigUint::from(o)).product();
        Ok(CompositionAccount {
            q,
            r,
            ramified,
            product_matches_group_order: product == group_order,
            group_order,
            factor_orders,
            caveat,
        })
    } else {
        if f != 1 {
            return Err(Error::InvalidInput(
                "ramified accounting is implemented for residue degree 1".into(),
            ));
        }
        // enumerate O^1/O^1(M^{2r}) and account its solvable factors:
        // the cyclic head contributes the prime factors of q+1, the
        // filtration steps contribute copies of p
        let report = local_ramified(p, 2 * r)?;
        let total = *report.level_orders.last().unwrap();
        let mut factor_orders: Vec<u128> = vec![];
        let mut head = q as u128 + 1;
        for l in prime_divisors(q + 1) {
            while head % l as u128 == 0 {
                factor_orders.push(l as u128);
                head /= l as u128;
            }
        }
        let mut p_part = total / (q as u128 + 1);
        while p_part > 1 {
            if p_part % p as u128 != 0 {
                return Err(Error::InternalConsistency(
                    "ramified group order is not (q+1) times a p-power".into(),
                ));
            }
            factor_orders.push(p as u128);
            p_part /= p as u128;
        }
        factor_orders.sort_unstable();
        let product: BigUint = factor_orders.iter().map(|&o| BigUint::from(o)).product();
        let group_order = BigUint::from(total);
        Ok(CompositionAccount {
            q,
            r,
            ramified,
            product_matches_group_order: product == group_order,
            group_order,
            factor_orders,
            caveat: None,
        })
    }
}

// ---------------------------------------------------------------------------
// Chinese remainder decomposition over Z
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct CrtReport {
    /// The modulus n and its prime-power parts.
    pub modulus: u64,
    pub parts: Vec<(u64, u32)>,
    pub sl2_order: u128,
    pub componentwise_bijective: bool,
    /// Order of the kernel of PSL(2, Z/n) -> prod PSL(2, Z/p^r).
    pub psl_kernel_order: u128,
    pub psl_kernel_rank: u32,
    pub psl_kernel_elementary_two_group: bool,
}

/// Certifies SL(2, Z/n) -> prod SL(2, Z/p_i^{r_i}) bijective and computes
/// the kernel of the PSL-level comparison map.
pub fn crt_quotient_check(parts: &[(u64, u32)]) -> Result<CrtReport> {
    if parts.is_empty() {
        return Err(Error::InvalidInput("at least one prime power is required".into()));
    }
    let mut n: u64 = 1;
    for &(p, r) in parts {
        if p < 3 || !crate::finfld::is_prime_u64(p) {
            return Err(Error::BadPrime { p, reason: "odd prime required".into() });
        }
        for _ in 0..r {
            n = n
                .checked_mul(p)
                .ok_or_else(|| Error::CapExceeded("modulus exceeds u64".into()))?;
        }
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if parts[i].0 == parts[j].0 {
                return Err(Error::InvalidInput("primes must be pairwise distinct".into()));
            }
        }
    }
    if (n as u128).pow(4) > ENUMERATION_CAP {
        return Err(Error::CapExceeded(format!(
            "SL(2, Z/{}) enumeration needs {} candidates",
            n,
            (n as u128).pow(4)
        )));
    }
    let ring = Zpm { p: n, m: 1, modulus: n }; // plain Z/n arithmetic
    let mut elements: Vec<MatZpm> = vec![];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let x = [a, b, c, d];
                    if mat_det(&ring, &x) == 1 {
                        elements.push(x);
                    }
                }
            }
        }
    }
    let sl2_order = elements.len() as u128;
    let expected: u128 = parts
        .iter()
        .map(|&(p, r)| {
            let q = p as u128;
            q.pow(3 * (r - 1)) * q * (q * q - 1)
        })
        .product();

    // componentwise reduction; bijectivity = order match + injectivity
    let mut seen = std::collections::HashSet::new();
    let mut injective = true;
    for x in &elements {
        let tuple: Vec<MatZpm> = parts
            .iter()
            .map(|&(p, r)| {
                let m = (0..r).fold(1u64, |acc, _| acc * p);
                [x[0] % m, x[1] % m, x[2] % m, x[3] % m]
            })
            .collect();
        if !seen.insert(tuple) {
            injective = false;
        }
    }
    let componentwise_bijective = injective && sl2_order == expected;

    // PSL-level kernel: classes of x with x = +-1 mod every part, modulo
    // the global sign
    let mut kernel_size = 0u128;
    let mut all_square_to_identity = true;
    for x in &elements {
        let mut ok = true;
        for &(p, r) in parts {
            let m = (0..r).fold(1u64, |acc, _| acc * p);
            let xm = [x[0] % m, x[1] % m, x[2] % m, x[3] % m];
            let id = [1 % m, 0, 0, 1 % m];
            let neg_id = [(m - 1) % m, 0, 0, (m - 1) % m];
            if xm != id && xm != neg_id {
                ok = false;
                break;
            }
        }
        if ok {
            kernel_size += 1;
            let sq = mat_mul(&ring, x, x);
            // in PSL the square must be the class of +-identity
            let idm = [1 % n, 0, 0, 1 % n];
            let neg = [(n - 1) % n, 0, 0, (n - 1) % n];
            if sq != idm && sq != neg {
                all_square_to_identity = false;
            }
        }
    }
    let psl_kernel_order = kernel_size / 2; // quotient by the global sign
    let rank = psl_kernel_order.trailing_zeros();
    let is_two_power = psl_kernel_order == (1u128 << rank);
    Ok(CrtReport {
        modulus: n,
        parts: parts.to_vec(),
        sl2_order,
        componentwise_bijective,
        psl_kernel_order,
        psl_kernel_rank: rank,
        psl_kernel_elementary_two_group: is_two_power && all_square_to_identity,
    })
}
