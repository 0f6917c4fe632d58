//! The finite groups PSL(2, q) for odd prime powers q: canonical
//! representatives of {M, -M}, breadth-first closures, squared traces up to
//! Frobenius, automorphism matching and the factorisation of epimorphisms
//! from direct products.

use crate::error::{Error, Result};
use crate::finfld::{FiniteFieldSpec, FqCtx, FqElem};
use crate::poly::FieldCtx;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

/// Context for PSL(2, q) over a fixed finite field.
#[derive(Clone)]
pub struct Psl2Ctx {
    pub spec: Arc<FiniteFieldSpec>,
    pub fq: FqCtx,
}

/// A group element: the canonical representative of {M, -M}. The first
/// nonzero entry in row-major order is "low", i.e. precedes its negative in
/// the field's lexicographic element order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Psl2Elem {
    pub m: [FqElem; 4],
}

pub fn psl2_order(q: u128) -> u128 {
    q * (q * q - 1) / 2
}

impl Psl2Ctx {
    pub fn new(q_p: u64, q_f: usize) -> Result<Self> {
        let spec = FiniteFieldSpec::new(q_p, q_f)?;
        if spec.q() <= 3 {
            return Err(Error::BadPrime {
                p: q_p,
                reason: "PSL(2,q) requires q > 3 and odd".into(),
            });
        }
        let fq = spec.ctx();
        Ok(Psl2Ctx { spec, fq })
    }

    /// Like `new` but allows q = 3 (needed by local structure reports).
    pub fn new_allow_small(q_p: u64, q_f: usize) -> Result<Self> {
        let spec = FiniteFieldSpec::new(q_p, q_f)?;
        let fq = spec.ctx();
        Ok(Psl2Ctx { spec, fq })
    }

    pub fn q(&self) -> u128 {
        self.spec.q()
    }

    pub fn order(&self) -> u128 {
        psl2_order(self.q())
    }

    fn det(&self, m: &[FqElem; 4]) -> FqElem {
        let fq = &self.fq;
        fq.sub(&fq.mul(&m[0], &m[3]), &fq.mul(&m[1], &m[2]))
    }

    /// Canonicalises a determinant-one matrix as a PSL element.
    pub fn canonical(&self, m: [FqElem; 4]) -> Result<Psl2Elem> {
        if self.det(&m) != self.fq.one() {
            return Err(Error::DeterminantNotOne);
        }
        Ok(self.canonical_unchecked(m))
    }

    fn canonical_unchecked(&self, m: [FqElem; 4]) -> Psl2Elem {
        let fq = &self.fq;
        for e in &m {
            if !fq.is_zero(e) {
                if fq.is_low(e) {
                    return Psl2Elem { m };
                }
                let neg = [fq.neg(&m[0]), fq.neg(&m[1]), fq.neg(&m[2]), fq.neg(&m[3])];
                return Psl2Elem { m: neg };
            }
        }
        unreachable!("zero matrix has determinant 0")
    }

    pub fn from_u64s(&self, entries: [u64; 4]) -> Result<Psl2Elem> {
        let m = entries.map(|e| self.fq.from_u64(e));
        self.canonical(m)
    }

    pub fn identity(&self) -> Psl2Elem {
        let fq = &self.fq;
        self.canonical_unchecked([fq.one(), fq.zero(), fq.zero(), fq.one()])
    }

    pub fn mul(&self, x: &Psl2Elem, y: &Psl2Elem) -> Psl2Elem {
        let fq = &self.fq;
        let a = &x.m;
        let b = &y.m;
        let m = [
            fq.add(&fq.mul(&a[0], &b[0]), &fq.mul(&a[1], &b[2])),
            fq.add(&fq.mul(&a[0], &b[1]), &fq.mul(&a[1], &b[3])),
            fq.add(&fq.mul(&a[2], &b[0]), &fq.mul(&a[3], &b[2])),
            fq.add(&fq.mul(&a[2], &b[1]), &fq.mul(&a[3], &b[3])),
        ];
        self.canonical_unchecked(m)
    }

    pub fn inv(&self, x: &Psl2Elem) -> Psl2Elem {
        let fq = &self.fq;
        let m = [
            x.m[3].clone(),
            fq.neg(&x.m[1]),
            fq.neg(&x.m[2]),
            x.m[0].clone(),
        ];
        self.canonical_unchecked(m)
    }

    pub fn conj(&self, g: &Psl2Elem, x: &Psl2Elem) -> Psl2Elem {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    /// Squared trace, a well-defined function on PSL.
    pub fn tr2(&self, x: &Psl2Elem) -> FqElem {
        let t = self.fq.add(&x.m[0], &x.m[3]);
        self.fq.mul(&t, &t)
    }

    /// The Frobenius orbit of tr2, the conjugation-and-field-automorphism
    /// invariant for q = p^f.
    pub fn tr2_orbit(&self, x: &Psl2Elem) -> Vec<FqElem> {
        self.fq.frobenius_orbit(&self.tr2(x))
    }

    /// Entrywise Frobenius power, a group automorphism.
    pub fn frobenius(&self, x: &Psl2Elem, e: usize) -> Psl2Elem {
        let m = [
            self.fq.frobenius(&x.m[0], e),
            self.fq.frobenius(&x.m[1], e),
            self.fq.frobenius(&x.m[2], e),
            self.fq.frobenius(&x.m[3], e),
        ];
        self.canonical_unchecked(m)
    }

    /// Breadth-first closure of a generating set. Errors out when the
    /// closure would exceed `cap` elements.
    pub fn closure(&self, gens: &[Psl2Elem], cap: usize) -> Result<HashSet<Psl2Elem>> {
        let mut seen: HashSet<Psl2Elem> = HashSet::new();
        let mut queue: VecDeque<Psl2Elem> = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded(format!(
                            "group closure exceeded {} elements",
                            cap
                        )));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    /// A verified generating set built from elementary matrices over a
    /// spanning set of F_q.
    pub fn standard_generators(&self) -> Vec<Psl2Elem> {
        let fq = &self.fq;
        let mut basis = vec![fq.one()];
        let mut pw = fq.one();
        for _ in 1..self.spec.f {
            pw = fq.mul(&pw, &fq.gen());
            basis.push(pw.clone());
        }
        let mut gens = vec![];
        for a in &basis {
            gens.push(
                self.canonical([fq.one(), a.clone(), fq.zero(), fq.one()])
                    .unwrap(),
            );
            gens.push(
                self.canonical([fq.one(), fq.zero(), a.clone(), fq.one()])
                    .unwrap(),
            );
        }
        gens
    }

    /// Verifies |PSL(2,q)| by closure and checks simplicity: the normal
    /// closure of every nontrivial element is the whole group.
    pub fn simplicity_certificate(&self, cap: usize) -> Result<bool> {
        let gens = self.standard_generators();
        let set = self.closure(&gens, cap)?;
        let order = set.len();
        if order as u128 != self.order() {
            return Err(Error::InternalConsistency(format!(
                "closure order {} does not match the formula {}",
                order,
                self.order()
            )));
        }
        // index the elements and build the multiplication table
        let elems: Vec<Psl2Elem> = set.into_iter().collect();
        let index: HashMap<&Psl2Elem, u32> =
            elems.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = self.mul(&elems[i], &elems[j]);
                table[i * n + j] = index[&prod];
            }
        }
        let inv_idx: Vec<u32> = elems.iter().map(|e| index[&self.inv(e)]).collect();
        let id = index[&self.identity()];
        for x in 0..n as u32 {
            if x == id {
                continue;
            }
            // conjugacy class of x
            let mut class = vec![false; n];
            let mut work = vec![x];
            class[x as usize] = true;
            let mut class_list = vec![x];
            while let Some(y) = work.pop() {
                for g in 0..n as u32 {
                    let gy = table[g as usize * n + y as usize];
                    let gyg = table[gy as usize * n + inv_idx[g as usize] as usize];
                    if !class[gyg as usize] {
                        class[gyg as usize] = true;
                        class_list.push(gyg);
                        work.push(gyg);
                    }
                }
            }
            // subgroup generated by the class
            let mut sub = vec![false; n];
            sub[id as usize] = true;
            let mut frontier = vec![id];
            let mut count = 1usize;
            while let Some(y) = frontier.pop() {
                for &g in &class_list {
                    let z = table[y as usize * n + g as usize];
                    if !sub[z as usize] {
                        sub[z as usize] = true;
                        count += 1;
                        frontier.push(z);
                    }
                }
            }
            if count != n {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Finds an automorphism alpha = conj o frobenius^e with
    /// alpha(h1[i]) = h2[i] for all i, by trying each Frobenius power and
    /// solving the linear conjugacy system over F_q with all sign choices.
    pub fn match_automorphism(
        &self,
        h1: &[Psl2Elem],
        h2: &[Psl2Elem],
    ) -> Option<MatchedAutomorphism> {
        if h1.len() != h2.len() {
            return None;
        }
        let m = h1.len();
        if m == 0 {
            return Some(MatchedAutomorphism {
                frobenius_power: 0,
                conjugator: [
                    self.fq.one(),
                    self.fq.zero(),
                    self.fq.zero(),
                    self.fq.one(),
                ],
            });
        }
        let orbits2: Vec<Vec<FqElem>> = h2.iter().map(|x| self.tr2_orbit(x)).collect();
        for e in 0..self.spec.f {
            let h1e: Vec<Psl2Elem> = h1.iter().map(|x| self.frobenius(x, e)).collect();
            // invariant screen: tr2 orbits must agree generator by generator
            if h1e
                .iter()
                .zip(&orbits2)
                .any(|(x, o2)| &self.tr2_orbit(x) != o2)
            {
                continue;
            }
            if m > 16 {
                return None; // sign search limit; generating sets are small
            }
            for signs in 0..(1u32 << m) {
                if let Some(c) = self.solve_conjugacy(&h1e, h2, signs) {
                    // verify exactly in PSL
                    let cd = self.det(&c);
                    if self.fq.is_zero(&cd) {
                        continue;
                    }
                    let ok = h1e.iter().zip(h2).all(|(a, b)| {
                        let ca = mat_mul_raw(&self.fq, &c, &a.m);
                        let bc = mat_mul_raw(&self.fq, &b.m, &c);
                        proportional(&self.fq, &ca, &bc)
                    });
                    if ok {
                        return Some(MatchedAutomorphism { frobenius_power: e, conjugator: c });
                    }
                }
            }
        }
        None
    }

    /// Solves c * A_i = s_i * B_i * c over F_q; returns c when the solution
    /// space is one-dimensional and spanned by an invertible matrix.
    fn solve_conjugacy(
        &self,
        h1: &[Psl2Elem],
        h2: &[Psl2Elem],
        signs: u32,
    ) -> Option<[FqElem; 4]> {
        let fq = &self.fq;
        let mut rows: Vec<[FqElem; 4]> = vec![];
        for (i, (a, b)) in h1.iter().zip(h2).enumerate() {
            let bm = if (signs >> i) & 1 == 1 {
                [
                    fq.neg(&b.m[0]),
                    fq.neg(&b.m[1]),
                    fq.neg(&b.m[2]),
                    fq.neg(&b.m[3]),
                ]
            } else {
                b.m.clone()
            };
            // unknowns c = (c0,c1,c2,c3) as [[c0,c1],[c2,c3]]
            // equation matrix rows of (cA - Bc) entrywise
            let a = &a.m;
            // entry (0,0): c0 a0 + c1 a2 - (b0 c0 + b1 c2)
            rows.push([
                fq.sub(&a[0], &bm[0]),
                a[2].clone(),
                fq.neg(&bm[1]),
                fq.zero(),
            ]);
            // entry (0,1): c0 a1 + c1 a3 - (b0 c1 + b1 c3)
            rows.push([
                a[1].clone(),
                fq.sub(&a[3], &bm[0]),
                fq.zero(),
                fq.neg(&bm[1]),
            ]);
            // entry (1,0): c2 a0 + c3 a2 - (b2 c0 + b3 c2)
            rows.push([
                fq.neg(&bm[2]),
                fq.zero(),
                fq.sub(&a[0], &bm[3]),
                a[2].clone(),
            ]);
            // entry (1,1): c2 a1 + c3 a3 - (b2 c1 + b3 c3)
            rows.push([
                fq.zero(),
                fq.neg(&bm[2]),
                a[1].clone(),
                fq.sub(&a[3], &bm[3]),
            ]);
        }
        let ns = crate::poly::nullspace4(fq, &rows);
        if ns.len() != 1 {
            return None;
        }
        let c = ns.into_iter().next().unwrap();
        Some([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()])
    }
}

/// Descriptor of an automorphism of PSL(2,q): conjugation by an invertible
/// matrix composed with a Frobenius power.
#[derive(Clone, Debug)]
pub struct MatchedAutomorphism {
    pub frobenius_power: usize,
    pub conjugator: [FqElem; 4],
}

fn mat_mul_raw(fq: &FqCtx, a: &[FqElem; 4], b: &[FqElem; 4]) -> [FqElem; 4] {
    [
        fq.add(&fq.mul(&a[0], &b[0]), &fq.mul(&a[1], &b[2])),
        fq.add(&fq.mul(&a[0], &b[1]), &fq.mul(&a[1], &b[3])),
        fq.add(&fq.mul(&a[2], &b[0]), &fq.mul(&a[3], &b[2])),
        fq.add(&fq.mul(&a[2], &b[1]), &fq.mul(&a[3], &b[3])),
    ]
}

fn proportional(fq: &FqCtx, a: &[FqElem; 4], b: &[FqElem; 4]) -> bool {
    // a = lambda * b for some scalar lambda != 0
    let pivot = (0..4).find(|&i| !fq.is_zero(&b[i]));
    let pivot = match pivot {
        Some(p) => p,
        None => return a.iter().all(|e| fq.is_zero(e)),
    };
    if fq.is_zero(&a[pivot]) {
        return false;
    }
    let lambda = fq.div(&a[pivot], &b[pivot]);
    (0..4).all(|i| a[i] == fq.mul(&lambda, &b[i]))
}

/// One factor of a product of PSL(2, q_i)'s together with the images of its
/// generators under a homomorphism to PSL(2, q').
pub struct ProductFactor {
    pub ctx: Psl2Ctx,
    pub generators: Vec<Psl2Elem>,
    pub images: Vec<Psl2Elem>,
}

/// Identifies the unique factor of a product through which an epimorphism
/// onto PSL(2, q') factors, together with the automorphism it induces.
pub fn factor_product_epimorphism(
    factors: &[ProductFactor],
    target: &Psl2Ctx,
    closure_cap: usize,
) -> Result<(usize, MatchedAutomorphism)> {
    let target_q = target.q();
    if !factors.iter().any(|f| f.ctx.q() == target_q) {
        return Err(Error::InvalidInput(format!(
            "no factor has order parameter q = {}; a simple-quotient obstruction",
            target_q
        )));
    }
    // surjectivity of the whole map
    let all_images: Vec<Psl2Elem> = factors.iter().flat_map(|f| f.images.clone()).collect();
    let img = target.closure(&all_images, closure_cap)?;
    if img.len() as u128 != target.order() {
        return Err(Error::InvalidInput("the map is not surjective".into()));
    }
    let mut hit = None;
    for (j, f) in factors.iter().enumerate() {
        let trivial = f.images.iter().all(|x| *x == target.identity());
        if trivial {
            continue;
        }
        if hit.is_some() {
            return Err(Error::InvalidInput(
                "more than one factor maps nontrivially; not a homomorphism from the product".into(),
            ));
        }
        hit = Some(j);
    }
    let j = hit.ok_or_else(|| Error::InvalidInput("all factors map trivially".into()))?;
    if factors[j].ctx.q() != target_q {
        return Err(Error::InvalidInput(
            "the nontrivial factor has the wrong order; not a homomorphism".into(),
        ));
    }
    let auto = target
        .match_automorphism(&factors[j].generators, &factors[j].images)
        .ok_or_else(|| {
            Error::InvalidInput("no automorphism matches the factor map".into())
        })?;
    Ok((j, auto))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, f: usize) -> Psl2Ctx {
        Psl2Ctx::new(p, f).unwrap()
    }

    #[test]
    fn canonical_identifies_negatives() {
        let g = ctx(5, 1);
        let a = g.from_u64s([0, 4, 1, 0]).unwrap();
        let b = g.from_u64s([0, 1, 4, 0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.m[1], vec![1]); // first nonzero entry is low
        let id = g.identity();
        let neg_id = g.from_u64s([4, 0, 0, 4]).unwrap();
        assert_eq!(id, neg_id);
    }

    #[test]
    fn canonical_idempotent_and_det_checked() {
        let g = ctx(7, 1);
        for seed in 0..100u64 {
            // pseudo-random SL(2,7) elements via [[1,a],[0,1]][[1,0],[b,1]][[1,c],[0,1]]
            let a = seed % 7;
            let b = (seed / 7) % 7;
            let c = (seed / 49) % 7;
            let m1 = g.from_u64s([1, a, 0, 1]).unwrap();
            let m2 = g.from_u64s([1, 0, b, 1]).unwrap();
            let m3 = g.from_u64s([1, c, 0, 1]).unwrap();
            let x = g.mul(&g.mul(&m1, &m2), &m3);
            let re = g.canonical(x.m.clone()).unwrap();
            assert_eq!(re, x);
        }
        assert!(g.from_u64s([1, 1, 0, 2]).is_err());
    }

    #[test]
    fn orders_by_closure() {
        for (p, f, expected) in [(5u64, 1usize, 60u128), (7, 1, 168), (3, 2, 360)] {
            let g = ctx(p, f);
            assert_eq!(g.order(), expected);
            let set = g.closure(&g.standard_generators(), 2_000).unwrap();
            assert_eq!(set.len() as u128, expected);
        }
    }

    #[test]
    fn closure_of_modular_generators_mod5() {
        let g = ctx(5, 1);
        let t = g.from_u64s([1, 1, 0, 1]).unwrap();
        let s = g.from_u64s([0, 4, 1, 0]).unwrap(); // [[0,-1],[1,0]]
        let set = g.closure(&[t, s], 100).unwrap();
        assert_eq!(set.len(), 60);
    }

    #[test]
    fn closure_cap_exceeded() {
        let g = ctx(11, 1);
        assert!(matches!(
            g.closure(&g.standard_generators(), 10),
            Err(crate::error::Error::CapExceeded(_))
        ));
    }

    #[test]
    fn tr2_values_and_conjugation_invariance() {
        let g = ctx(7, 1);
        assert_eq!(g.tr2(&g.identity()), vec![4]);
        let s = g.from_u64s([0, 6, 1, 0]).unwrap();
        assert_eq!(g.tr2(&s), vec![0]);
        let t = g.from_u64s([1, 1, 0, 1]).unwrap();
        let set: Vec<Psl2Elem> = g.closure(&[t.clone(), s], 200).unwrap().into_iter().collect();
        for i in 0..100 {
            let x = &set[i % set.len()];
            let u = &set[(7 * i + 3) % set.len()];
            assert_eq!(g.tr2(x), g.tr2(&g.conj(u, x)));
        }
    }

    #[test]
    fn match_automorphism_recovers_conjugation() {
        let g = ctx(7, 1);
        let t = g.from_u64s([1, 1, 0, 1]).unwrap();
        let s = g.from_u64s([0, 6, 1, 0]).unwrap();
        let h1 = vec![t.clone(), s.clone()];
        // conjugate by an element of PGL: use [[1,2],[0,1]] (det 1, also PGL)
        let c = g.from_u64s([1, 2, 0, 1]).unwrap();
        let h2: Vec<Psl2Elem> = h1.iter().map(|x| g.conj(&c, x)).collect();
        let auto = g.match_automorphism(&h1, &h2).unwrap();
        assert_eq!(auto.frobenius_power, 0);
        // mismatched tr2 orbits: no automorphism
        let bad = vec![t.clone(), t.clone()];
        assert!(g.match_automorphism(&h1, &bad).is_none());
    }

    #[test]
    fn match_automorphism_recovers_frobenius() {
        let g = ctx(3, 2);
        let gens = g.standard_generators();
        let h2: Vec<Psl2Elem> = gens.iter().map(|x| g.frobenius(x, 1)).collect();
        let auto = g.match_automorphism(&gens, &h2).unwrap();
        assert_eq!(auto.frobenius_power, 1);
    }

    #[test]
    fn factor_product_projection() {
        let g5 = ctx(5, 1);
        let g7 = ctx(7, 1);
        let gens5 = g5.standard_generators();
        let gens7 = g7.standard_generators();
        // projection onto the first factor
        let factors = vec![
            ProductFactor {
                ctx: g5.clone(),
                generators: gens5.clone(),
                images: gens5.clone(),
            },
            ProductFactor {
                ctx: g7.clone(),
                generators: gens7.clone(),
                images: vec![g5.identity(); gens7.len()],
            },
        ];
        let (j, auto) = factor_product_epimorphism(&factors, &g5, 100).unwrap();
        assert_eq!(j, 0);
        assert_eq!(auto.frobenius_power, 0);
        // inner-twisted projection onto the second factor
        let c = g7.from_u64s([1, 3, 0, 1]).unwrap();
        let factors2 = vec![
            ProductFactor {
                ctx: g5.clone(),
                generators: gens5.clone(),
                images: vec![g7.identity(); gens5.len()],
            },
            ProductFactor {
                ctx: g7.clone(),
                generators: gens7.clone(),
                images: gens7.iter().map(|x| g7.conj(&c, x)).collect(),
            },
        ];
        let (j2, _) = factor_product_epimorphism(&factors2, &g7, 200).unwrap();
        assert_eq!(j2, 1);
        // PSL(2,11) is not a quotient of PSL(2,5) x PSL(2,7)
        let g11 = ctx(11, 1);
        let factors3 = vec![
            ProductFactor {
                ctx: g5.clone(),
                generators: gens5.clone(),
                images: vec![g11.identity(); gens5.len()],
            },
        ];
        assert!(factor_product_epimorphism(&factors3, &g11, 700).is_err());
    }

    #[test]
    fn order_formula_injective_on_range() {
        let qs = [5u128, 7, 9, 11, 13];
        for w in qs.windows(2) {
            assert!(psl2_order(w[0]) < psl2_order(w[1]));
        }
    }

    #[test]
    fn simplicity_small_cases() {
        for (p, f) in [(5u64, 1usize), (7, 1)] {
            let g = ctx(p, f);
            assert!(g.simplicity_certificate(50_000).unwrap());
        }
    }
}
