//! Prime fields F_p and their extensions F_{p^f} for odd p.
//!
//! Extension fields use the lexicographically least monic irreducible
//! modulus of the requested degree, so that two specs with the same (p, f)
//! are identical. Elements are coefficient vectors of fixed length f,
//! totally ordered lexicographically from the constant coefficient up;
//! this order is what canonical PSL(2,q) representatives are built on.

use crate::error::Error;
use crate::poly::{self, FieldCtx, Poly};
use std::sync::Arc;

/// The prime field F_p, p an odd prime fitting in u32.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FpCtx {
    pub p: u64,
}

impl FpCtx {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2);
        FpCtx { p }
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut base: u64, mut e: u128) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl FieldCtx for FpCtx {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (*a as i128 % self.p as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            let r = r0 - q * r1;
            r0 = r1;
            r1 = r;
            let s = s0 - q * s1;
            s0 = s1;
            s1 = s;
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }
}

/// Tests irreducibility of a monic polynomial over F_p by the
/// distinct-degree criterion: x^{p^n} = x mod g and gcd(x^{p^{n/l}} - x, g) = 1
/// for every prime l dividing n.
pub fn fp_poly_irreducible(fp: &FpCtx, g: &Poly<FpCtx>) -> bool {
    let n = match poly::deg(g) {
        Some(0) | None => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let x: Poly<FpCtx> = vec![0, 1];
    let q_n = self_pow(fp.p as u128, n as u32);
    let xq = poly::pow_mod(fp, &x, q_n, g);
    if poly::sub(fp, &xq, &x) != Vec::<u64>::new() {
        return false;
    }
    for l in prime_divisors(n as u64) {
        let e = self_pow(fp.p as u128, (n as u64 / l) as u32);
        let xql = poly::pow_mod(fp, &x, e, g);
        let d = poly::sub(fp, &xql, &x);
        if poly::deg(&poly::gcd(fp, &d, g)).map_or(false, |dg| dg > 0) {
            return false;
        }
    }
    true
}

fn self_pow(b: u128, e: u32) -> u128 {
    let mut acc = 1u128;
    for _ in 0..e {
        acc *= b;
    }
    acc
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A finite field F_{p^f} with its deterministic modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFieldSpec {
    pub p: u64,
    pub f: usize,
    /// Monic irreducible of degree f over F_p, length f+1; the
    /// lexicographically least one when coefficient vectors are read from
    /// the top coefficient downwards.
    pub modulus: Vec<u64>,
}

impl FiniteFieldSpec {
    pub fn new(p: u64, f: usize) -> Result<Arc<Self>, Error> {
        if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
            return Err(Error::BadPrime {
                p,
                reason: "characteristic must be an odd prime".into(),
            });
        }
        if f == 0 {
            return Err(Error::BadPrime {
                p,
                reason: "extension degree must be positive".into(),
            });
        }
        let fp = FpCtx::new(p);
        let modulus = if f == 1 {
            vec![0, 1] // x itself: F_p = F_p[x]/(x)
        } else {
            find_least_irreducible(&fp, f)
        };
        Ok(Arc::new(FiniteFieldSpec { p, f, modulus }))
    }

    pub fn q(&self) -> u128 {
        let mut acc = 1u128;
        for _ in 0..self.f {
            acc *= self.p as u128;
        }
        acc
    }

    pub fn fp(&self) -> FpCtx {
        FpCtx::new(self.p)
    }

    pub fn ctx(self: &Arc<Self>) -> FqCtx {
        FqCtx { spec: self.clone() }
    }
}

fn find_least_irreducible(fp: &FpCtx, f: usize) -> Vec<u64> {
    // enumerate lower coefficients as base-p digits, constant coefficient
    // least significant, and take the first irreducible hit
    let total = self_pow(fp.p as u128, f as u32);
    for n in 0..total {
        let mut g = vec![0u64; f + 1];
        g[f] = 1;
        let mut m = n;
        for coeff in g.iter_mut().take(f) {
            *coeff = (m % fp.p as u128) as u64;
            m /= fp.p as u128;
        }
        if fp_poly_irreducible(fp, &g) {
            return g;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of F_{p^f}: coefficient vector of fixed length f.
pub type FqElem = Vec<u64>;

/// Field context for F_{p^f}; elements are fixed-length vectors.
#[derive(Clone)]
pub struct FqCtx {
    pub spec: Arc<FiniteFieldSpec>,
}

impl FqCtx {
    fn pad(&self, mut v: Vec<u64>) -> FqElem {
        v.resize(self.spec.f, 0);
        v
    }

    pub fn from_u64(&self, c: u64) -> FqElem {
        self.pad(vec![c % self.spec.p])
    }

    pub fn gen(&self) -> FqElem {
        if self.spec.f == 1 {
            self.from_u64(0)
        } else {
            self.pad(vec![0, 1])
        }
    }

    pub fn pow(&self, a: &FqElem, mut e: u128) -> FqElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius x -> x^{p^e}.
    pub fn frobenius(&self, a: &FqElem, e: usize) -> FqElem {
        let mut exp = 1u128;
        for _ in 0..(e % self.spec.f) {
            exp *= self.spec.p as u128;
        }
        self.pow(a, exp)
    }

    /// Frobenius orbit of an element, sorted in the field's total order.
    pub fn frobenius_orbit(&self, a: &FqElem) -> Vec<FqElem> {
        let mut orbit = vec![];
        let mut cur = a.clone();
        for _ in 0..self.spec.f {
            if !orbit.contains(&cur) {
                orbit.push(cur.clone());
            }
            cur = self.frobenius(&cur, 1);
        }
        orbit.sort();
        orbit
    }

    /// True when x precedes -x in the lexicographic element order; exactly
    /// one of {x, -x} satisfies this for x != 0 and odd p.
    pub fn is_low(&self, a: &FqElem) -> bool {
        let na = self.neg(a);
        *a < na
    }

    /// All elements, in lexicographic order (only sane for small q).
    pub fn all_elements(&self) -> Vec<FqElem> {
        let q = self.spec.q();
        assert!(q <= 1 << 24, "field too large to enumerate");
        let mut out = Vec::with_capacity(q as usize);
        let mut cur = vec![0u64; self.spec.f];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.spec.f {
                    out.sort();
                    return out;
                }
                cur[i] += 1;
                if cur[i] == self.spec.p {
                    cur[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// Roots in F_q of a polynomial with F_q coefficients, sorted.
    /// Uses gcd with x^q - x followed by deterministic equal-degree splits.
    pub fn roots(&self, g: &Poly<FqCtx>) -> Vec<FqElem> {
        let x: Poly<FqCtx> = vec![self.zero(), self.one()];
        let xq = poly::pow_mod(self, &x, self.spec.q(), g);
        let lin = poly::gcd(self, &poly::sub(self, &xq, &x), g);
        let mut roots = vec![];
        self.split_linear(&lin, &mut roots, 0);
        roots.sort();
        roots
    }

    fn split_linear(&self, g: &Poly<FqCtx>, out: &mut Vec<FqElem>, depth: u128) {
        match poly::deg(g) {
            None | Some(0) => {}
            Some(1) => {
                // root of c0 + c1 x
                let r = self.neg(&self.div(&g[0], &g[1]));
                out.push(r);
            }
            Some(_) => {
                // (x + c)^{(q-1)/2} - 1 splits the roots into two camps
                let q = self.spec.q();
                let mut c_idx = depth;
                loop {
                    let shift = self.element_by_index(c_idx % q);
                    let base: Poly<FqCtx> = vec![shift, self.one()];
                    let powed = poly::pow_mod(self, &base, (q - 1) / 2, g);
                    let minus_one =
                        poly::sub(self, &powed, &poly::constant(self, self.one()));
                    let h = poly::gcd(self, &minus_one, g);
                    if let Some(dh) = poly::deg(&h) {
                        if dh > 0 && dh < poly::deg(g).unwrap() {
                            let (rest, r) = poly::divrem(self, g, &h);
                            debug_assert!(r.is_empty());
                            self.split_linear(&h, out, c_idx + 1);
                            self.split_linear(&rest, out, c_idx + 1);
                            return;
                        }
                    }
                    c_idx += 1;
                }
            }
        }
    }

    /// The n-th element in base-p digit order (not the sorted order).
    fn element_by_index(&self, mut n: u128) -> FqElem {
        let mut v = vec![0u64; self.spec.f];
        for c in v.iter_mut() {
            *c = (n % self.spec.p as u128) as u64;
            n /= self.spec.p as u128;
        }
        v
    }
}

impl FieldCtx for FqCtx {
    type El = FqElem;

    fn zero(&self) -> FqElem {
        vec![0; self.spec.f]
    }
    fn one(&self) -> FqElem {
        self.from_u64(1)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.spec.p;
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.spec.p;
        a.iter().zip(b).map(|(x, y)| (x + p - y % p) % p).collect()
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.spec.p;
        a.iter().map(|x| (p - x % p) % p).collect()
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let fp = self.spec.fp();
        let pa = poly::trim(&fp, a.clone());
        let pb = poly::trim(&fp, b.clone());
        let prod = poly::mul(&fp, &pa, &pb);
        let red = poly::rem(&fp, &prod, &self.spec.modulus);
        self.pad(red)
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        let fp = self.spec.fp();
        let pa = poly::trim(&fp, a.clone());
        let (g, s, _) = poly::xgcd(&fp, &pa, &self.spec.modulus);
        debug_assert_eq!(poly::deg(&g), Some(0));
        Some(self.pad(s))
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.iter().all(|&x| x % self.spec.p == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_modulus_deg2_mod3() {
        let spec = FiniteFieldSpec::new(3, 2).unwrap();
        // x^2 + 1 is the least irreducible monic quadratic over F_3
        assert_eq!(spec.modulus, vec![1, 0, 1]);
    }

    #[test]
    fn fq_inverse_and_order() {
        let spec = FiniteFieldSpec::new(5, 2).unwrap();
        let fq = spec.ctx();
        let g = fq.gen();
        let gi = fq.inv(&g).unwrap();
        assert_eq!(fq.mul(&g, &gi), fq.one());
        // multiplicative order of the full group
        assert_eq!(fq.pow(&g, 24), fq.one());
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let spec = FiniteFieldSpec::new(3, 2).unwrap();
        let fq = spec.ctx();
        let two = fq.from_u64(2);
        assert_eq!(fq.frobenius(&two, 1), two);
        let g = fq.gen();
        let fg = fq.frobenius(&g, 1);
        assert_ne!(fg, g);
        assert_eq!(fq.frobenius(&fg, 1), g);
    }

    #[test]
    fn roots_of_squares() {
        // x^2 - 5 over F_11 has roots 4 and 7
        let spec = FiniteFieldSpec::new(11, 1).unwrap();
        let fq = spec.ctx();
        let g: Poly<FqCtx> = vec![fq.from_u64(6), fq.zero(), fq.one()]; // x^2 + 6 = x^2 - 5
        let r = fq.roots(&g);
        assert_eq!(r, vec![vec![4], vec![7]]);
    }

    #[test]
    fn roots_in_extension() {
        // x^2 + 1 over F_9 = F_3[t]/(t^2+1): roots are +-t
        let spec = FiniteFieldSpec::new(3, 2).unwrap();
        let fq = spec.ctx();
        let g: Poly<FqCtx> = vec![fq.one(), fq.zero(), fq.one()];
        let r = fq.roots(&g);
        assert_eq!(r.len(), 2);
        for root in &r {
            let sq = fq.mul(root, root);
            assert_eq!(fq.add(&sq, &fq.one()), fq.zero());
        }
    }

    #[test]
    fn is_low_partition() {
        let spec = FiniteFieldSpec::new(7, 1).unwrap();
        let fq = spec.ctx();
        for c in 1..7u64 {
            let e = fq.from_u64(c);
            assert!(fq.is_low(&e) != fq.is_low(&fq.neg(&e)));
        }
    }
}
