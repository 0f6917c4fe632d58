//! Truncated local rings: Z/p^m, the quadratic Galois ring GR(p^m, 2) with
//! its Frobenius involution, and determinant-one lifting of SL(2) matrices
//! between precisions.

use crate::error::{Error, Result};
use crate::finfld::{is_prime_u64, FiniteFieldSpec};
use std::sync::Arc;

/// The ring Z/p^m with u64 representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zpm {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
}

impl Zpm {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime_u64(p) || p % 2 == 0 {
            return Err(Error::BadPrime { p, reason: "odd prime required".into() });
        }
        let mut modulus = 1u64;
        for _ in 0..m {
            modulus = modulus
                .checked_mul(p)
                .ok_or_else(|| Error::CapExceeded("p^m exceeds u64".into()))?;
        }
        Ok(Zpm { p, m, modulus })
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    /// Inverse of a unit (a not divisible by p).
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        let (mut r0, mut r1) = (a as i128 % self.modulus as i128, self.modulus as i128);
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
        debug_assert_eq!(r0.abs(), 1);
        let mut inv = s0.rem_euclid(self.modulus as i128) as u64;
        if r0 == -1 {
            inv = self.neg(inv);
        }
        Some(inv)
    }
}

pub type MatZpm = [u64; 4]; // row-major [[a, b], [c, d]]

pub fn mat_mul(r: &Zpm, x: &MatZpm, y: &MatZpm) -> MatZpm {
    [
        r.add(r.mul(x[0], y[0]), r.mul(x[1], y[2])),
        r.add(r.mul(x[0], y[1]), r.mul(x[1], y[3])),
        r.add(r.mul(x[2], y[0]), r.mul(x[3], y[2])),
        r.add(r.mul(x[2], y[1]), r.mul(x[3], y[3])),
    ]
}

pub fn mat_det(r: &Zpm, x: &MatZpm) -> u64 {
    r.sub(r.mul(x[0], x[3]), r.mul(x[1], x[2]))
}

pub fn mat_reduce(from: &Zpm, to: &Zpm, x: &MatZpm) -> MatZpm {
    debug_assert_eq!(from.p, to.p);
    debug_assert!(to.m <= from.m);
    [x[0] % to.modulus, x[1] % to.modulus, x[2] % to.modulus, x[3] % to.modulus]
}

/// Lifts a matrix with det = 1 at precision r to an exact det-1 matrix at
/// precision r+s, keeping the reduction to precision r fixed: the entries
/// are reused and the first row is divided by the determinant.
pub fn sl2_lift(p: u64, r: u32, s: u32, x: &MatZpm) -> Result<MatZpm> {
    let low = Zpm::new(p, r)?;
    let high = Zpm::new(p, r + s)?;
    if mat_det(&low, &mat_reduce(&high, &low, x)) != 1 % low.modulus {
        return Err(Error::DeterminantNotOne);
    }
    let lifted: MatZpm = [
        x[0] % high.modulus,
        x[1] % high.modulus,
        x[2] % high.modulus,
        x[3] % high.modulus,
    ];
    let delta = mat_det(&high, &lifted);
    let delta_inv = high
        .inv(delta)
        .ok_or_else(|| Error::InternalConsistency("determinant is not a unit".into()))?;
    let out = [
        high.mul(lifted[0], delta_inv),
        high.mul(lifted[1], delta_inv),
        lifted[2],
        lifted[3],
    ];
    debug_assert_eq!(mat_det(&high, &out), 1);
    Ok(out)
}

/// The Galois ring GR(p^m, 2) = (Z/p^m)[x]/(h), where h lifts the standard
/// modulus of F_{p^2} coefficientwise, together with its Frobenius: the
/// unique ring automorphism of order two fixing Z/p^m and reducing to
/// x -> x^p modulo p.
#[derive(Clone, Debug)]
pub struct GaloisRingSpec {
    pub base: Zpm,
    /// Monic quadratic modulus, coefficients in Z/p^m (length 3).
    pub modulus: [u64; 3],
    /// Image of the ring generator under the Frobenius.
    pub frobenius_gen: GrElem,
}

pub type GrElem = [u64; 2]; // c0 + c1 * xi

impl GaloisRingSpec {
    pub fn new(p: u64, m: u32) -> Result<Arc<Self>> {
        let base = Zpm::new(p, m)?;
        let ff = FiniteFieldSpec::new(p, 2)?;
        let modulus = [ff.modulus[0], ff.modulus[1], 1];
        let mut spec = GaloisRingSpec { base, modulus, frobenius_gen: [0, 0] };
        // seed: x^p in F_{p^2}, then Newton-lift to a root of h mod p^m
        let fq = ff.ctx();
        let seed = fq.frobenius(&fq.gen(), 1);
        let mut root: GrElem = [seed[0], seed[1]];
        loop {
            let val = spec.eval_modulus(&root);
            if val == [0, 0] {
                break;
            }
            let der = spec.eval_modulus_derivative(&root);
            let der_inv = spec
                .inv_with(&der)
                .ok_or_else(|| Error::InternalConsistency("Frobenius Newton step not invertible".into()))?;
            let step = spec.mul_raw(&val, &der_inv);
            root = [base.sub(root[0], step[0]), base.sub(root[1], step[1])];
        }
        spec.frobenius_gen = root;
        // the Newton lift must agree with the other-root involution, and
        // the involution must square to the identity
        if root != spec.frobenius_raw(&[0, 1]) {
            return Err(Error::InternalConsistency(
                "Newton-lifted Frobenius root disagrees with the conjugate-root formula".into(),
            ));
        }
        let again = spec.frobenius(&spec.frobenius(&[0, 1]));
        if again != [0, 1] {
            return Err(Error::InternalConsistency("Frobenius does not square to the identity".into()));
        }
        Ok(Arc::new(spec))
    }

    pub fn zero(&self) -> GrElem {
        [0, 0]
    }
    pub fn one(&self) -> GrElem {
        [1 % self.base.modulus, 0]
    }
    pub fn from_u64(&self, c: u64) -> GrElem {
        [c % self.base.modulus, 0]
    }
    pub fn add(&self, a: &GrElem, b: &GrElem) -> GrElem {
        [self.base.add(a[0], b[0]), self.base.add(a[1], b[1])]
    }
    pub fn sub(&self, a: &GrElem, b: &GrElem) -> GrElem {
        [self.base.sub(a[0], b[0]), self.base.sub(a[1], b[1])]
    }
    pub fn neg(&self, a: &GrElem) -> GrElem {
        [self.base.neg(a[0]), self.base.neg(a[1])]
    }
    fn mul_raw(&self, a: &GrElem, b: &GrElem) -> GrElem {
        let r = &self.base;
        let c0 = r.mul(a[0], b[0]);
        let c1 = r.add(r.mul(a[0], b[1]), r.mul(a[1], b[0]));
        let c2 = r.mul(a[1], b[1]);
        // reduce c2 * x^2 = c2 * (-h1 x - h0)
        [
            r.sub(c0, r.mul(c2, self.modulus[0])),
            r.sub(c1, r.mul(c2, self.modulus[1])),
        ]
    }
    pub fn mul(&self, a: &GrElem, b: &GrElem) -> GrElem {
        self.mul_raw(a, b)
    }

    fn eval_modulus(&self, x: &GrElem) -> GrElem {
        let sq = self.mul_raw(x, x);
        let lin = [self.base.mul(self.modulus[1], x[0]), self.base.mul(self.modulus[1], x[1])];
        let mut out = self.add(&sq, &lin);
        out[0] = self.base.add(out[0], self.modulus[0]);
        out
    }

    fn eval_modulus_derivative(&self, x: &GrElem) -> GrElem {
        // 2x + h1
        let two_x = self.add(x, x);
        [self.base.add(two_x[0], self.modulus[1]), two_x[1]]
    }

    /// Inverse of a unit (nonzero mod p).
    pub fn inv_with(&self, a: &GrElem) -> Option<GrElem> {
        // a * conj(a) = N(a) lies in Z/p^m; invert there
        let conj = self.frobenius_raw(a);
        let n = self.mul_raw(a, &conj);
        debug_assert_eq!(n[1], 0, "norm must be scalar");
        let n_inv = self.base.inv(n[0])?;
        Some([self.base.mul(conj[0], n_inv), self.base.mul(conj[1], n_inv)])
    }

    fn frobenius_raw(&self, a: &GrElem) -> GrElem {
        // works even before frobenius_gen is set, via the other-root formula:
        // for monic x^2 + h1 x + h0 the conjugate of c0 + c1 x is
        // c0 + c1 (-h1 - x)
        let r = &self.base;
        [r.sub(a[0], r.mul(a[1], self.modulus[1])), r.neg(a[1])]
    }

    /// The Frobenius automorphism.
    pub fn frobenius(&self, a: &GrElem) -> GrElem {
        // evaluate at the lifted Frobenius image of the generator when
        // available; it agrees with the other-root involution on GR(p^m, 2)
        self.frobenius_raw(a)
    }

    /// The relative norm a * frobenius(a), landing in Z/p^m.
    pub fn norm(&self, a: &GrElem) -> u64 {
        let n = self.mul_raw(a, &self.frobenius(a));
        debug_assert_eq!(n[1], 0);
        n[0]
    }

    /// Reduce an element to a lower-precision copy of the same ring.
    pub fn reduce_to(&self, target: &GaloisRingSpec, a: &GrElem) -> GrElem {
        [a[0] % target.base.modulus, a[1] % target.base.modulus]
    }

    /// All ring elements (for enumeration at desk scale).
    pub fn all_elements(&self) -> Vec<GrElem> {
        let m = self.base.modulus;
        let mut out = Vec::with_capacity((m * m) as usize);
        for c0 in 0..m {
            for c1 in 0..m {
                out.push([c0, c1]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zpm_inverse() {
        let r = Zpm::new(5, 2).unwrap();
        for a in 1..25u64 {
            if a % 5 == 0 {
                assert!(r.inv(a).is_none());
            } else {
                assert_eq!(r.mul(a, r.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn sl2_lift_identity_like() {
        // [[1,1],[0,1]] from Z/5 to Z/25 stays itself
        let out = sl2_lift(5, 1, 1, &[1, 1, 0, 1]).unwrap();
        assert_eq!(out, [1, 1, 0, 1]);
    }

    #[test]
    fn sl2_lift_roundtrip_and_det() {
        let low = Zpm::new(5, 1).unwrap();
        let high = Zpm::new(5, 2).unwrap();
        // enumerate a few SL(2, Z/5) elements and lift
        let mut count = 0;
        for a in 0..5u64 {
            for b in 0..5u64 {
                for c in 0..5u64 {
                    for d in 0..5u64 {
                        let m = [a, b, c, d];
                        if mat_det(&low, &m) != 1 {
                            continue;
                        }
                        count += 1;
                        let lifted = sl2_lift(5, 1, 1, &m).unwrap();
                        assert_eq!(mat_det(&high, &lifted), 1);
                        assert_eq!(mat_reduce(&high, &low, &lifted), m);
                    }
                }
            }
        }
        assert_eq!(count, 120);
    }

    #[test]
    fn preimage_counts_under_reduction() {
        // each element of SL(2, Z/5) has exactly 125 preimages in SL(2, Z/25)
        let low = Zpm::new(5, 1).unwrap();
        let high = Zpm::new(5, 2).unwrap();
        let mut counts = std::collections::HashMap::new();
        for a in 0..25u64 {
            for b in 0..25u64 {
                for c in 0..25u64 {
                    for d in 0..25u64 {
                        let m = [a, b, c, d];
                        if mat_det(&high, &m) == 1 {
                            *counts.entry(mat_reduce(&high, &low, &m)).or_insert(0u32) += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(counts.len(), 120);
        assert!(counts.values().all(|&c| c == 125));
    }

    #[test]
    fn galois_ring_frobenius_involution() {
        let gr = GaloisRingSpec::new(3, 2).unwrap();
        let xi: GrElem = [0, 1];
        let fx = gr.frobenius(&xi);
        assert_ne!(fx, xi);
        assert_eq!(gr.frobenius(&fx), xi);
        // frobenius fixes the base ring
        for c in 0..9u64 {
            assert_eq!(gr.frobenius(&gr.from_u64(c)), gr.from_u64(c));
        }
        // frobenius image is a root of the modulus
        assert_eq!(gr.eval_modulus(&fx), [0, 0]);
        // norm multiplicativity on a sample
        let a: GrElem = [2, 5];
        let b: GrElem = [7, 1];
        assert_eq!(
            gr.norm(&gr.mul(&a, &b)),
            gr.base.mul(gr.norm(&a), gr.norm(&b))
        );
    }
}
