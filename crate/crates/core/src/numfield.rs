//! Totally real number fields with exact element arithmetic.
//!
//! A field is Q(theta) for theta an algebraic integer with monic integer
//! minimal polynomial; its real embeddings are carried as isolating
//! rational intervals, one of which is distinguished (the identity
//! embedding). Elements are rational coordinate vectors in the power basis.
//! Every comparison bottoms out in an exact zero test on reduced
//! coordinates, so interval refinement is only ever used to separate
//! values already known to be distinct.

use crate::error::{Error, Result};
use crate::finfld::{FiniteFieldSpec, FpCtx, FqElem};
use crate::intpoly::{
    self, int_deg, int_eval, int_mod_p, int_to_rat, isolate_real_roots, rat_to_int_primitive,
    refine_interval, IntPoly, QQCtx, RatPoly, RootInterval,
};
use crate::linalg;
use crate::poly::{self, FieldCtx};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
struct FieldData {
    minpoly: IntPoly,
    degree: usize,
    /// Isolating intervals for the real roots, in increasing order.
    real_roots: Vec<RootInterval>,
    /// Index into `real_roots` of the distinguished embedding.
    identity_index: usize,
    totally_real: bool,
}

/// A number field Q(theta) with a distinguished real embedding.
#[derive(Clone, Debug)]
pub struct NumberField(Arc<FieldData>);

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.minpoly == other.0.minpoly
                && self.0.identity_index == other.0.identity_index)
    }
}
impl Eq for NumberField {}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            return write!(f, "Q");
        }
        write!(f, "Q(theta), theta^{} + ...", self.degree())
    }
}

impl NumberField {
    /// Builds a field from a monic integer polynomial and an interval
    /// isolating the distinguished real root.
    pub fn create(minpoly: &IntPoly, selector_lo: BigRational, selector_hi: BigRational) -> Result<Self> {
        let d = int_deg(minpoly).ok_or(Error::NotMonic)?;
        if d == 0 || !intpoly::int_is_monic(minpoly) {
            return Err(Error::NotMonic);
        }
        if !intpoly::is_irreducible(minpoly)? {
            return Err(Error::Reducible);
        }
        let real_roots = isolate_real_roots(minpoly);
        if real_roots.is_empty() {
            return Err(Error::NoRealRoot);
        }
        if selector_lo > selector_hi {
            return Err(Error::SelectorEmpty);
        }
        // count roots inside the selector and locate the isolating interval
        let sturm = intpoly::Sturm::new(&int_to_rat(minpoly));
        let mut inside = sturm.count_halfopen(&selector_lo, &selector_hi);
        if int_eval(minpoly, &selector_lo).is_zero() {
            inside += 1;
        }
        match inside {
            0 => return Err(Error::SelectorEmpty),
            1 => {}
            _ => return Err(Error::SelectorAmbiguous),
        }
        let identity_index = Self::locate_root(minpoly, &real_roots, &selector_lo, &selector_hi)?;
        let totally_real = real_roots.len() == d;
        Ok(NumberField(Arc::new(FieldData {
            minpoly: minpoly.clone(),
            degree: d,
            real_roots,
            identity_index,
            totally_real,
        })))
    }

    fn locate_root(
        minpoly: &IntPoly,
        roots: &[RootInterval],
        lo: &BigRational,
        hi: &BigRational,
    ) -> Result<usize> {
        let sturm = intpoly::Sturm::new(&int_to_rat(minpoly));
        for (i, iv) in roots.iter().enumerate() {
            if iv.is_exact() {
                if &iv.lo >= lo && &iv.lo <= hi {
                    return Ok(i);
                }
                continue;
            }
            // refine the isolating interval until it is inside or outside
            let mut cur = iv.clone();
            loop {
                if &cur.lo >= lo && &cur.hi <= hi {
                    return Ok(i);
                }
                if &cur.hi <= lo || &cur.lo >= hi {
                    break;
                }
                // straddling a selector endpoint: check which side the root is on
                let n = sturm.count_halfopen(&cur.lo.clone().max(lo.clone()), &cur.hi.clone().min(hi.clone()));
                let at_left = int_eval(minpoly, &cur.lo.clone().max(lo.clone())).is_zero();
                if n + usize::from(at_left) == 1 {
                    return Ok(i);
                }
                if n == 0 && !at_left {
                    break;
                }
                cur = refine_interval(minpoly, &cur);
            }
        }
        Err(Error::SelectorEmpty)
    }

    /// The rational field, as the degree-1 case.
    pub fn rationals() -> Self {
        let minpoly = intpoly::int_poly_from_i64(&[0, 1]); // x
        NumberField::create(&minpoly, intpoly::rat_from_i64(-1), intpoly::rat_from_i64(1)).unwrap()
    }

    /// Q(sqrt(m)) with the positive square root distinguished.
    pub fn real_quadratic(m: i64) -> Result<Self> {
        let minpoly = intpoly::int_poly_from_i64(&[-m, 0, 1]);
        let bound = BigRational::from(BigInt::from(m.abs() + 1));
        NumberField::create(&minpoly, BigRational::zero(), bound)
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.0.minpoly
    }
    pub fn degree(&self) -> usize {
        self.0.degree
    }
    pub fn is_totally_real(&self) -> bool {
        self.0.totally_real
    }
    pub fn real_embedding_count(&self) -> usize {
        self.0.real_roots.len()
    }
    pub fn identity_embedding(&self) -> usize {
        self.0.identity_index
    }
    pub fn root_interval(&self, i: usize) -> &RootInterval {
        &self.0.real_roots[i]
    }

    pub fn zero(&self) -> AlgebraicNumber {
        AlgebraicNumber {
            field: self.clone(),
            coords: vec![BigRational::zero(); self.degree()],
        }
    }
    pub fn one(&self) -> AlgebraicNumber {
        self.from_rational(BigRational::one())
    }
    pub fn from_rational(&self, c: BigRational) -> AlgebraicNumber {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = c;
        AlgebraicNumber { field: self.clone(), coords }
    }
    pub fn from_i64(&self, n: i64) -> AlgebraicNumber {
        self.from_rational(intpoly::rat_from_i64(n))
    }
    /// The power-basis generator theta.
    pub fn gen(&self) -> AlgebraicNumber {
        let mut coords = vec![BigRational::zero(); self.degree()];
        if self.degree() == 1 {
            // theta is the rational root itself
            coords[0] = BigRational::new(-self.0.minpoly[0].clone(), self.0.minpoly[1].clone());
        } else {
            coords[1] = BigRational::one();
        }
        AlgebraicNumber { field: self.clone(), coords }
    }
    pub fn element(&self, coords: Vec<BigRational>) -> Result<AlgebraicNumber> {
        if coords.len() != self.degree() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                self.degree(),
                coords.len()
            )));
        }
        Ok(AlgebraicNumber { field: self.clone(), coords })
    }

    /// Discriminant of the defining polynomial.
    pub fn minpoly_discriminant(&self) -> BigInt {
        intpoly::discriminant(&self.0.minpoly)
    }
}

/// Field context over a number field, for generic polynomial arithmetic.
#[derive(Clone)]
pub struct NfCtx(pub NumberField);

impl FieldCtx for NfCtx {
    type El = AlgebraicNumber;
    fn zero(&self) -> AlgebraicNumber {
        self.0.zero()
    }
    fn one(&self) -> AlgebraicNumber {
        self.0.one()
    }
    fn add(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        a.add(b)
    }
    fn sub(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        a.sub(b)
    }
    fn neg(&self, a: &AlgebraicNumber) -> AlgebraicNumber {
        a.neg()
    }
    fn mul(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        a.mul(b)
    }
    fn inv(&self, a: &AlgebraicNumber) -> Option<AlgebraicNumber> {
        a.inv().ok()
    }
    fn is_zero(&self, a: &AlgebraicNumber) -> bool {
        a.is_zero()
    }
}

/// An element of a number field in power-basis coordinates.
#[derive(Clone, PartialEq)]
pub struct AlgebraicNumber {
    pub field: NumberField,
    pub coords: Vec<BigRational>,
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicNumber{:?}", self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*theta", c)?,
                _ => write!(f, "{}*theta^{}", c, i)?,
            }
        }
        Ok(())
    }
}

impl AlgebraicNumber {
    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_field(other).expect("field mismatch");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        AlgebraicNumber { field: self.field.clone(), coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        AlgebraicNumber {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        AlgebraicNumber {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other).expect("field mismatch");
        let qq = QQCtx;
        let minpoly = int_to_rat(self.field.minpoly());
        let a = poly::trim(&qq, self.coords.clone());
        let b = poly::trim(&qq, other.coords.clone());
        let prod = poly::mul(&qq, &a, &b);
        let red = poly::rem(&qq, &prod, &minpoly);
        let mut coords = red;
        coords.resize(self.field.degree(), BigRational::zero());
        AlgebraicNumber { field: self.field.clone(), coords }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let qq = QQCtx;
        let minpoly = int_to_rat(self.field.minpoly());
        let a = poly::trim(&qq, self.coords.clone());
        let (g, s, _) = poly::xgcd(&qq, &a, &minpoly);
        debug_assert_eq!(poly::deg(&g), Some(0));
        let mut coords = s;
        coords.resize(self.field.degree(), BigRational::zero());
        Ok(AlgebraicNumber { field: self.field.clone(), coords })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by this element in the power basis.
    pub fn mult_matrix(&self) -> linalg::Mat {
        let d = self.field.degree();
        let mut m = vec![vec![BigRational::zero(); d]; d];
        let mut col = self.clone();
        for j in 0..d {
            for i in 0..d {
                m[i][j] = col.coords[i].clone();
            }
            if j + 1 < d {
                col = col.mul(&self.field.gen());
            }
        }
        m
    }

    /// Field trace Tr_{k/Q}, read off the multiplication matrix.
    pub fn field_trace(&self) -> BigRational {
        let m = self.mult_matrix();
        let mut t = BigRational::zero();
        for (i, row) in m.iter().enumerate() {
            t += row[i].clone();
        }
        t
    }

    /// Field norm N_{k/Q} via the characteristic polynomial constant term.
    pub fn field_norm(&self) -> BigRational {
        let chi = self.char_poly();
        let d = self.field.degree();
        let c0 = chi[0].clone();
        if d % 2 == 1 {
            -c0
        } else {
            c0
        }
    }

    /// Characteristic polynomial of multiplication by this element: the
    /// monic degree-d rational polynomial prod_sigma (x - sigma(a)).
    /// Computed by Faddeev–LeVerrier on the multiplication matrix.
    pub fn char_poly(&self) -> RatPoly {
        let d = self.field.degree();
        let m = self.mult_matrix();
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[d] = BigRational::one();
        let mut aux = identity_mat(d);
        for k in 1..=d {
            aux = mat_mul(&m, &aux);
            let tr = mat_trace(&aux);
            let c = -tr / BigRational::from(BigInt::from(k as i64));
            coeffs[d - k] = c.clone();
            for (i, row) in aux.iter_mut().enumerate() {
                row[i] += &c;
            }
        }
        coeffs
    }

    /// Minimal polynomial over Q: the squarefree part of the characteristic
    /// polynomial, as a primitive integer polynomial when integral.
    pub fn min_poly_rational(&self) -> RatPoly {
        intpoly::squarefree_part(&self.char_poly())
    }

    /// Whether this element is an algebraic integer.
    pub fn is_integral(&self) -> bool {
        self.char_poly().iter().all(|c| c.denom().is_one())
    }

    /// (field totally real, element integral).
    pub fn is_totally_real_integral(&self) -> (bool, bool) {
        (self.field.is_totally_real(), self.is_integral())
    }

    /// A rational interval certainly containing sigma_i(a), computed from
    /// the current precision of the root interval.
    fn embed_interval_at(&self, root: &RootInterval) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        // Horner over intervals
        for c in self.coords.iter().rev() {
            let (nlo, nhi) = iv_mul(&lo, &hi, &root.lo, &root.hi);
            lo = nlo + c;
            hi = nhi + c;
        }
        (lo, hi)
    }

    /// An interval around sigma_i(a) of width at most `eps` (exact for
    /// rational values).
    pub fn embed_interval(&self, i: usize, eps: &BigRational) -> (BigRational, BigRational) {
        let f = self.field.minpoly();
        let mut root = self.field.root_interval(i).clone();
        loop {
            let (lo, hi) = self.embed_interval_at(&root);
            if &(&hi - &lo) <= eps {
                return (lo, hi);
            }
            root = refine_interval(f, &root);
        }
    }

    /// Exact sign of sigma_i(a): zero is decided symbolically, the rest by
    /// interval refinement. The answer does not depend on refinement depth.
    pub fn sign_at(&self, i: usize) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let f = self.field.minpoly();
        let mut root = self.field.root_interval(i).clone();
        loop {
            let (lo, hi) = self.embed_interval_at(&root);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            root = refine_interval(f, &root);
        }
    }

    pub fn sign_identity(&self) -> i32 {
        self.sign_at(self.field.identity_embedding())
    }

    /// Exact comparison of sigma_i(self) with sigma_j(other) as real
    /// numbers (the two elements may live in different fields).
    pub fn compare_embedded(&self, i: usize, other: &Self, j: usize) -> Ordering {
        if embedded_values_equal(self, i, other, j) {
            return Ordering::Equal;
        }
        let fa = self.field.minpoly();
        let fb = other.field.minpoly();
        let mut ra = self.field.root_interval(i).clone();
        let mut rb = other.field.root_interval(j).clone();
        loop {
            let (alo, ahi) = self.embed_interval_at(&ra);
            let (blo, bhi) = other.embed_interval_at(&rb);
            if ahi < blo {
                return Ordering::Less;
            }
            if bhi < alo {
                return Ordering::Greater;
            }
            ra = refine_interval(fa, &ra);
            rb = refine_interval(fb, &rb);
        }
    }

    /// Compares |sigma_i(self)| with |sigma_j(other)| exactly.
    pub fn compare_abs(&self, i: usize, other: &Self, j: usize) -> Ordering {
        let sa = self.sign_at(i);
        let sb = other.sign_at(j);
        match (sa, sb) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Less,
            (_, 0) => Ordering::Greater,
            _ => {
                let a = if sa < 0 { self.neg() } else { self.clone() };
                let b = if sb < 0 { other.neg() } else { other.clone() };
                a.compare_embedded(i, &b, j)
            }
        }
    }
}

/// Decides sigma_i(a) = sigma_j(b) symbolically: both must be roots of the
/// gcd of the two characteristic polynomials, and then they are equal iff
/// they fall into the same isolating interval of that gcd.
fn embedded_values_equal(a: &AlgebraicNumber, i: usize, b: &AlgebraicNumber, j: usize) -> bool {
    // sigma_i(a) is a root of chi_b iff chi_b(a) = 0 in a's field (sigma_i injective)
    let chi_b = b.char_poly();
    if !eval_rat_poly_at(&chi_b, a).is_zero() {
        return false;
    }
    let chi_a = a.char_poly();
    if !eval_rat_poly_at(&chi_a, b).is_zero() {
        return false;
    }
    let qq = QQCtx;
    let g = poly::gcd(&qq, &chi_a, &chi_b);
    let g = intpoly::squarefree_part(&g);
    let gi = rat_to_int_primitive(&g);
    let g_roots = isolate_real_roots(&gi);
    let ia = locate_value_in_roots(a, i, &gi, &g_roots);
    let ib = locate_value_in_roots(b, j, &gi, &g_roots);
    ia == ib
}

/// Which isolating interval of `roots` (of polynomial g) contains
/// sigma_i(a)? Assumes sigma_i(a) is a root of g.
fn locate_value_in_roots(
    a: &AlgebraicNumber,
    i: usize,
    g: &IntPoly,
    roots: &[RootInterval],
) -> usize {
    let mut own = a.field.root_interval(i).clone();
    let mut gl: Vec<RootInterval> = roots.to_vec();
    loop {
        let (lo, hi) = a.embed_interval_at(&own);
        let mut candidates = vec![];
        for (idx, r) in gl.iter().enumerate() {
            if !(r.hi < lo || r.lo > hi) {
                candidates.push(idx);
            }
        }
        if candidates.len() == 1 {
            return candidates[0];
        }
        own = refine_interval(a.field.minpoly(), &own);
        gl = gl.iter().map(|r| refine_interval(g, r)).collect();
    }
}

fn eval_rat_poly_at(p: &RatPoly, x: &AlgebraicNumber) -> AlgebraicNumber {
    let mut acc = x.field.zero();
    for c in p.iter().rev() {
        acc = acc.mul(x).add(&x.field.from_rational(c.clone()));
    }
    acc
}

/// Evaluates an integer polynomial at a field element.
pub fn eval_int_poly_at(p: &IntPoly, x: &AlgebraicNumber) -> AlgebraicNumber {
    eval_rat_poly_at(&int_to_rat(p), x)
}

fn identity_mat(d: usize) -> linalg::Mat {
    let mut m = vec![vec![BigRational::zero(); d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    m
}

fn mat_mul(a: &linalg::Mat, b: &linalg::Mat) -> linalg::Mat {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let v = &a[i][k] * &b[k][j];
                out[i][j] += v;
            }
        }
    }
    out
}

fn mat_trace(a: &linalg::Mat) -> BigRational {
    let mut t = BigRational::zero();
    for (i, row) in a.iter().enumerate() {
        t += row[i].clone();
    }
    t
}

fn iv_mul(
    alo: &BigRational,
    ahi: &BigRational,
    blo: &BigRational,
    bhi: &BigRational,
) -> (BigRational, BigRational) {
    let c1 = alo * blo;
    let c2 = alo * bhi;
    let c3 = ahi * blo;
    let c4 = ahi * bhi;
    let mut lo = c1.clone();
    let mut hi = c1;
    for c in [c2, c3, c4] {
        if c < lo {
            lo = c.clone();
        }
        if c > hi {
            hi = c;
        }
    }
    (lo, hi)
}

// ---------------------------------------------------------------------------
// Field joins and subfields
// ---------------------------------------------------------------------------

/// Result of adjoining a root of g to a field: the composite field together
/// with the images of the old generator and of the new root.
pub struct FieldJoin {
    pub field: NumberField,
    pub old_gen: AlgebraicNumber,
    pub new_root: AlgebraicNumber,
}

/// Adjoins the root of `g` isolated by `root` to `base`, producing a
/// composite field with a primitive generator found by a deterministic
/// small-integer-combination search.
pub fn field_join(base: &NumberField, g: &IntPoly, root: &RootInterval) -> Result<FieldJoin> {
    let d2 = int_deg(g).ok_or(Error::NotMonic)?;
    if !intpoly::int_is_monic(g) {
        return Err(Error::NotMonic);
    }
    if d2 == 1 {
        // adjoining a rational: nothing to do
        let val = BigRational::new(-g[0].clone(), g[1].clone());
        return Ok(FieldJoin {
            field: base.clone(),
            old_gen: base.gen(),
            new_root: base.from_rational(val),
        });
    }
    let d1 = base.degree();
    if d1 == 1 {
        let field = NumberField::create(g, root.lo.clone(), root.hi.clone())?;
        let old_gen = field.from_rational(base.gen().coords[0].clone());
        let new_root = field.gen();
        return Ok(FieldJoin { field, old_gen, new_root });
    }
    let n = d1 * d2;
    // multiplication matrices of alpha and beta on the tensor basis a^i b^j
    let f = base.minpoly();
    for c_abs in 1i64..=24 {
        for c in [c_abs, -c_abs] {
            let m = tensor_mult_matrix(f, g, c);
            let chi = char_poly_of_matrix(&m);
            let mp = intpoly::squarefree_part(&chi);
            if poly::deg(&mp) != Some(n) {
                continue;
            }
            let mpi = rat_to_int_primitive(&mp);
            if !intpoly::int_is_monic(&mpi) {
                continue; // candidate not integral; try another multiplier
            }
            if !intpoly::is_irreducible(&mpi)? {
                continue;
            }
            // distinguished value: alpha_id + c * beta_root
            let sel = isolate_sum_root(base, root, g, c, &mpi)?;
            let field = NumberField::create(&mpi, sel.lo.clone(), sel.hi.clone())?;
            // recover beta inside the new field: gcd(g(y), f(tau - c y)) is linear
            let nf = NfCtx(field.clone());
            let tau = field.gen();
            let g_in = int_to_rat(g)
                .iter()
                .map(|q| field.from_rational(q.clone()))
                .collect::<Vec<_>>();
            let lin: Vec<AlgebraicNumber> = vec![tau.clone(), field.from_i64(-c)];
            let f_shift = poly::compose(&nf, &int_to_rat(f)
                .iter()
                .map(|q| field.from_rational(q.clone()))
                .collect::<Vec<_>>(), &lin);
            let gc = poly::gcd(&nf, &g_in, &f_shift);
            if poly::deg(&gc) != Some(1) {
                return Err(Error::InternalConsistency(
                    "primitive element gcd was not linear".into(),
                ));
            }
            let beta = gc[0].neg().div(&gc[1])?;
            let alpha = tau.sub(&beta.scale(&intpoly::rat_from_i64(c)));
            return Ok(FieldJoin { field, old_gen: alpha, new_root: beta });
        }
    }
    Err(Error::SearchExhausted(
        "no primitive element among small integer combinations".into(),
    ))
}

/// Multiplication matrix of alpha + c*beta on Q[y]/(f) (x) Q[z]/(g).
fn tensor_mult_matrix(f: &IntPoly, g: &IntPoly, c: i64) -> linalg::Mat {
    let qq = QQCtx;
    let d1 = int_deg(f).unwrap();
    let d2 = int_deg(g).unwrap();
    let n = d1 * d2;
    let fr = int_to_rat(f);
    let gr = int_to_rat(g);
    let idx = |i: usize, j: usize| i * d2 + j;
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for i in 0..d1 {
        for j in 0..d2 {
            // (alpha + c beta) * a^i b^j = a^{i+1} b^j + c a^i b^{j+1}, reduced
            let mut ya = vec![BigRational::zero(); i + 2];
            ya[i + 1] = BigRational::one();
            let ya = poly::rem(&qq, &ya, &fr);
            let mut zb = vec![BigRational::zero(); j + 2];
            zb[j + 1] = BigRational::one();
            let zb = poly::rem(&qq, &zb, &gr);
            let col = idx(i, j);
            for (ii, cf) in ya.iter().enumerate() {
                if !cf.is_zero() {
                    m[idx(ii, j)][col] += cf;
                }
            }
            let cq = intpoly::rat_from_i64(c);
            for (jj, cg) in zb.iter().enumerate() {
                if !cg.is_zero() {
                    m[idx(i, jj)][col] += cg * &cq;
                }
            }
        }
    }
    m
}

fn char_poly_of_matrix(m: &linalg::Mat) -> RatPoly {
    let n = m.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut aux = identity_mat(n);
    for k in 1..=n {
        aux = mat_mul(m, &aux);
        let tr = mat_trace(&aux);
        let c = -tr / BigRational::from(BigInt::from(k as i64));
        coeffs[n - k] = c.clone();
        for (i, row) in aux.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    coeffs
}

/// Finds the isolating interval of alpha_id + c*beta among the roots of mp.
fn isolate_sum_root(
    base: &NumberField,
    beta_root: &RootInterval,
    g: &IntPoly,
    c: i64,
    mp: &IntPoly,
) -> Result<RootInterval> {
    let mut a_iv = base.root_interval(base.identity_embedding()).clone();
    let mut b_iv = beta_root.clone();
    let alpha_poly = base.gen();
    let sturm = intpoly::Sturm::new(&int_to_rat(mp));
    let cq = intpoly::rat_from_i64(c);
    loop {
        let (alo, ahi) = alpha_poly.embed_interval_at(&a_iv);
        let (blo, bhi) = (&b_iv.lo * &cq, &b_iv.hi * &cq);
        let (blo, bhi) = if blo <= bhi { (blo, bhi) } else { (bhi, blo) };
        let lo = &alo + &blo;
        let hi = &ahi + &bhi;
        let mut count = sturm.count_halfopen(&lo, &hi);
        if int_eval(mp, &lo).is_zero() {
            count += 1;
        }
        if count == 1 {
            return Ok(RootInterval { lo, hi });
        }
        a_iv = refine_interval(base.minpoly(), &a_iv);
        b_iv = refine_interval(g, &b_iv);
    }
}

/// A subfield k of a parent field L, with exact maps in both directions.
#[derive(Clone)]
pub struct SubfieldMap {
    pub sub: NumberField,
    pub gen_in_parent: AlgebraicNumber,
    powers: Vec<AlgebraicNumber>,
}

impl SubfieldMap {
    /// Builds the subfield Q(gen) of gen's field, with the distinguished
    /// embedding induced by the parent's.
    pub fn generated_by(gen: &AlgebraicNumber) -> Result<SubfieldMap> {
        let mp = gen.min_poly_rational();
        let dk = poly::deg(&mp).unwrap();
        // ensure an integral primitive generator by rescaling if necessary
        let mut scaled = gen.clone();
        let mut mpi = rat_to_int_primitive(&mp);
        if !intpoly::int_is_monic(&mpi) {
            let mut denom = BigInt::one();
            for c in &mp {
                denom = denom.lcm(c.denom());
            }
            scaled = gen.scale(&BigRational::from(denom));
            mpi = rat_to_int_primitive(&scaled.min_poly_rational());
            debug_assert!(intpoly::int_is_monic(&mpi));
        }
        // isolate the identity-embedding value of the generator
        let sturm = intpoly::Sturm::new(&int_to_rat(&mpi));
        let parent = &scaled.field;
        let mut root = parent.root_interval(parent.identity_embedding()).clone();
        let (lo, hi) = loop {
            let (lo, hi) = scaled.embed_interval_at(&root);
            let mut count = sturm.count_halfopen(&lo, &hi);
            if int_eval(&mpi, &lo).is_zero() {
                count += 1;
            }
            if count == 1 {
                break (lo, hi);
            }
            root = refine_interval(parent.minpoly(), &root);
        };
        let sub = NumberField::create(&mpi, lo, hi)?;
        let mut powers = Vec::with_capacity(dk);
        let mut cur = parent.one();
        for _ in 0..dk {
            powers.push(cur.clone());
            cur = cur.mul(&scaled);
        }
        Ok(SubfieldMap { sub, gen_in_parent: scaled, powers })
    }

    /// Trivial map Q -> parent.
    pub fn rational(parent: &NumberField) -> SubfieldMap {
        SubfieldMap {
            sub: NumberField::rationals(),
            gen_in_parent: parent.one(),
            powers: vec![parent.one()],
        }
    }

    pub fn degree(&self) -> usize {
        self.sub.degree()
    }

    /// Embeds a subfield element into the parent.
    pub fn lift(&self, a: &AlgebraicNumber) -> AlgebraicNumber {
        let mut acc = self.gen_in_parent.field.zero();
        for (c, p) in a.coords.iter().zip(&self.powers) {
            acc = acc.add(&p.scale(c));
        }
        acc
    }

    /// Expresses a parent element in the subfield, if it lies there.
    pub fn express(&self, x: &AlgebraicNumber) -> Option<AlgebraicNumber> {
        let dpar = self.gen_in_parent.field.degree();
        let dk = self.sub.degree();
        let mut rows = vec![vec![BigRational::zero(); dk]; dpar];
        for (j, p) in self.powers.iter().enumerate() {
            for i in 0..dpar {
                rows[i][j] = p.coords[i].clone();
            }
        }
        let sol = linalg::solve(&rows, &x.coords)?;
        Some(AlgebraicNumber { field: self.sub.clone(), coords: sol })
    }

    pub fn contains(&self, x: &AlgebraicNumber) -> bool {
        self.express(x).is_some()
    }
}

// ---------------------------------------------------------------------------
// Prime ideals and residue maps
// ---------------------------------------------------------------------------

/// A prime of o_k above a good rational prime, with its residue field.
#[derive(Clone, Debug)]
pub struct PrimeIdealData {
    pub field: NumberField,
    pub p: u64,
    /// Monic irreducible factor of the minimal polynomial mod p.
    pub local_factor: Vec<u64>,
    pub residue_degree: usize,
    pub residue_field: Arc<FiniteFieldSpec>,
    /// Image of theta in the residue field: the least root of the local
    /// factor under the field's element order.
    pub theta_image: FqElem,
}

impl PrimeIdealData {
    pub fn norm(&self) -> u128 {
        self.residue_field.q()
    }

    pub fn label(&self) -> String {
        if self.field.degree() == 1 {
            format!("({})", self.p)
        } else {
            let fp = FpCtx::new(self.p);
            let terms: Vec<String> = self
                .local_factor
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &c)| c % fp.p != 0)
                .map(|(i, &c)| match i {
                    0 => format!("{}", c),
                    1 if c == 1 => "theta".into(),
                    1 => format!("{}*theta", c),
                    _ if c == 1 => format!("theta^{}", i),
                    _ => format!("{}*theta^{}", c, i),
                })
                .collect();
            format!("({}, {})", self.p, terms.join(" + "))
        }
    }
}

/// Whether p is a "good" rational prime for the field: odd and coprime to
/// the discriminant of the defining polynomial.
pub fn is_good_prime(field: &NumberField, p: u64) -> bool {
    if p < 3 || !crate::finfld::is_prime_u64(p) {
        return false;
    }
    let disc = field.minpoly_discriminant();
    !(disc % BigInt::from(p)).is_zero()
}

/// Factors a good rational prime in o_k by factoring the minimal polynomial
/// mod p. Returns one prime ideal per irreducible factor, in a
/// deterministic order; the residue degrees sum to the field degree.
pub fn factor_prime(field: &NumberField, p: u64) -> Result<Vec<PrimeIdealData>> {
    if p == 2 {
        return Err(Error::BadPrime { p, reason: "2 is excluded".into() });
    }
    if !crate::finfld::is_prime_u64(p) {
        return Err(Error::BadPrime { p, reason: "not a prime".into() });
    }
    if !is_good_prime(field, p) {
        return Err(Error::BadPrime {
            p,
            reason: "divides the discriminant of the minimal polynomial".into(),
        });
    }
    let fp = FpCtx::new(p);
    let fbar = int_mod_p(field.minpoly(), &fp);
    let factors = intpoly::fp_factor_squarefree(&fp, &fbar);
    let mut out = vec![];
    let mut degree_sum = 0usize;
    for g in factors {
        let f_deg = poly::deg(&g).unwrap();
        degree_sum += f_deg;
        let residue_field = FiniteFieldSpec::new(p, f_deg)?;
        let fq = residue_field.ctx();
        let g_in_fq: Vec<FqElem> = g.iter().map(|&c| fq.from_u64(c)).collect();
        let roots = fq.roots(&g_in_fq);
        let theta_image = roots
            .first()
            .cloned()
            .ok_or_else(|| Error::InternalConsistency("local factor has no root in its residue field".into()))?;
        let mut local_factor = g.clone();
        local_factor.resize(f_deg + 1, 0);
        out.push(PrimeIdealData {
            field: field.clone(),
            p,
            local_factor,
            residue_degree: f_deg,
            residue_field,
            theta_image,
        });
    }
    if degree_sum != field.degree() {
        return Err(Error::InternalConsistency(
            "residue degrees do not sum to the field degree".into(),
        ));
    }
    out.sort_by(|a, b| {
        a.residue_degree
            .cmp(&b.residue_degree)
            .then_with(|| a.local_factor.cmp(&b.local_factor))
    });
    Ok(out)
}

/// The residue homomorphism o_{k,(p)} -> F_{p^f} at a prime ideal,
/// determined by theta |-> (chosen root of the local factor).
pub fn residue_reduce(a: &AlgebraicNumber, prime: &PrimeIdealData) -> Result<FqElem> {
    if a.field != prime.field {
        return Err(Error::FieldMismatch);
    }
    let fq = prime.residue_field.ctx();
    let p_big = BigInt::from(prime.p);
    let mut acc = fq.zero();
    let mut pw = fq.one();
    for c in &a.coords {
        let den = c.denom().mod_floor(&p_big);
        if den.is_zero() {
            return Err(Error::DenominatorAtPrime { p: prime.p });
        }
        let num = c.numer().mod_floor(&p_big);
        let fp = FpCtx::new(prime.p);
        let num_u: u64 = num.to_u64().unwrap();
        let den_u: u64 = den.to_u64().unwrap();
        let c_bar = fp.mul(&num_u, &fp.inv(&den_u).unwrap());
        acc = fq.add(&acc, &fq.mul(&fq.from_u64(c_bar), &pw));
        pw = fq.mul(&pw, &prime.theta_image);
    }
    Ok(acc)
}
