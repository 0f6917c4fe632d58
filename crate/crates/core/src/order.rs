//! Quaternion orders generated by a Fuchsian group: the o_k-module
//! spanned by the group's words inside the quaternion algebra k[Gamma],
//! Hermite-reduced until multiplicatively closed, with its structure
//! constants, trace-form discriminant and bad-prime set.
//!
//! Order arithmetic needs gcds in o_k, so the base field is restricted to
//! Q and to norm-Euclidean real quadratic fields.

use crate::error::{Error, Result};
use crate::fuchsian::{quaternion_symbol, FuchsianRep, Mat2, TraceField, Word};
use crate::intpoly::rat_from_i64;
use crate::linalg;
use crate::numfield::{AlgebraicNumber, NumberField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Square-free m for which Q(sqrt m) is norm-Euclidean.
const NORM_EUCLIDEAN_M: [i64; 16] = [2, 3, 5, 6, 7, 11, 13, 17, 19, 21, 29, 33, 37, 41, 57, 73];

/// The ring of integers of a supported base field, with Euclidean division.
#[derive(Clone)]
pub struct OkCtx {
    pub field: NumberField,
    /// Second element of the integral basis {1, omega}; None over Q.
    pub omega: Option<AlgebraicNumber>,
}

impl OkCtx {
    pub fn new(field: &NumberField) -> Result<OkCtx> {
        match field.degree() {
            1 => Ok(OkCtx { field: field.clone(), omega: None }),
            2 => {
                let mp = field.minpoly();
                let b = mp[1].clone();
                let c = mp[0].clone();
                let disc = &b * &b - BigInt::from(4) * &c;
                if disc <= BigInt::zero() {
                    return Err(Error::UnsupportedBaseField(
                        "imaginary quadratic field".into(),
                    ));
                }
                let (m, f) = squarefree_decompose(&disc);
                let m_i64: i64 = i64::try_from(&m).map_err(|_| {
                    Error::UnsupportedBaseField("field discriminant too large".into())
                })?;
                if !NORM_EUCLIDEAN_M.contains(&m_i64) {
                    return Err(Error::UnsupportedBaseField(format!(
                        "Q(sqrt {}) is not norm-Euclidean",
                        m_i64
                    )));
                }
                // sqrt(m) = (2 theta + b)/f, sign fixed by the embedding
                let theta = field.gen();
                let sqrt_m_raw = theta
                    .scale(&rat_from_i64(2))
                    .add(&field.from_rational(BigRational::from(b)))
                    .scale(&BigRational::new(BigInt::one(), f.clone()));
                let sqrt_m = if sqrt_m_raw.sign_identity() >= 0 {
                    sqrt_m_raw
                } else {
                    sqrt_m_raw.neg()
                };
                let omega = if m_i64.rem_euclid(4) == 1 {
                    sqrt_m
                        .add(&field.one())
                        .scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
                } else {
                    sqrt_m
                };
                debug_assert!(omega.is_integral());
                Ok(OkCtx { field: field.clone(), omega: Some(omega) })
            }
            d => Err(Error::UnsupportedBaseField(format!(
                "degree-{} base fields are outside order arithmetic scope",
                d
            ))),
        }
    }

    /// Coordinates in the integral basis {1, omega} (or {1} over Q).
    pub fn integral_coords(&self, x: &AlgebraicNumber) -> Vec<BigRational> {
        match &self.omega {
            None => vec![x.coords[0].clone()],
            Some(om) => {
                let a = vec![
                    vec![BigRational::one(), om.coords[0].clone()],
                    vec![BigRational::zero(), om.coords[1].clone()],
                ];
                linalg::solve(&a, &x.coords).expect("integral basis spans the field")
            }
        }
    }

    pub fn is_integral(&self, x: &AlgebraicNumber) -> bool {
        self.integral_coords(x).iter().all(|c| c.denom().is_one())
    }

    fn from_integral_coords(&self, coords: &[BigRational]) -> AlgebraicNumber {
        match &self.omega {
            None => self.field.from_rational(coords[0].clone()),
            Some(om) => self
                .field
                .from_rational(coords[0].clone())
                .add(&om.scale(&coords[1])),
        }
    }

    pub fn norm_abs(&self, x: &AlgebraicNumber) -> BigInt {
        let n = x.field_norm();
        debug_assert!(n.denom().is_one(), "norm of an integral element");
        n.numer().abs()
    }

    /// Euclidean division: q with |N(a - q b)| < |N(b)|, found by rounding
    /// the exact quotient in the integral basis and searching unit offsets.
    pub fn divmod(
        &self,
        a: &AlgebraicNumber,
        b: &AlgebraicNumber,
    ) -> Result<(AlgebraicNumber, AlgebraicNumber)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let exact = a.div(b)?;
        let coords = self.integral_coords(&exact);
        let rounded: Vec<BigRational> = coords.iter().map(round_nearest).collect();
        let nb = self.norm_abs(b);
        let mut best: Option<(BigInt, AlgebraicNumber, AlgebraicNumber)> = None;
        let offsets: Vec<Vec<i64>> = match &self.omega {
            None => vec![vec![0], vec![1], vec![-1]],
            Some(_) => {
                let mut v = vec![];
                for d0 in [0i64, 1, -1] {
                    for d1 in [0i64, 1, -1] {
                        v.push(vec![d0, d1]);
                    }
                }
                v
            }
        };
        for off in &offsets {
            let shifted: Vec<BigRational> = rounded
                .iter()
                .zip(off)
                .map(|(c, &d)| c + rat_from_i64(d))
                .collect();
            let q = self.from_integral_coords(&shifted);
            let r = a.sub(&q.mul(b));
            let nr = self.norm_abs(&r);
            if nr < nb {
                match &best {
                    Some((bn, _, _)) if *bn <= nr => {}
                    _ => best = Some((nr, q, r)),
                }
            }
        }
        match best {
            Some((_, q, r)) => Ok((q, r)),
            None => Err(Error::InternalConsistency(
                "Euclidean division failed in a norm-Euclidean ring".into(),
            )),
        }
    }
}

fn round_nearest(x: &BigRational) -> BigRational {
    // floor(x + 1/2)
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    BigRational::from((x + half).floor().to_integer())
}

fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    // n = m * f^2 with m squarefree
    let mut m = BigInt::one();
    let mut f = BigInt::one();
    let mut rest = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        let mut count = 0;
        while (&rest % &d).is_zero() {
            rest /= &d;
            count += 1;
        }
        if count % 2 == 1 {
            m *= &d;
        }
        for _ in 0..count / 2 {
            f *= &d;
        }
        d += 1;
    }
    (m * rest, f)
}

// ---------------------------------------------------------------------------
// Hermite-reduced modules over o_k inside k^4
// ---------------------------------------------------------------------------

/// An o_k-module in k^4, held as a common denominator and a triangular
/// basis of integral rows.
pub struct OkModule {
    pub ctx: OkCtx,
    pub denom: BigInt,
    /// Triangular rows over o_k, pivot columns strictly increasing.
    pub rows: Vec<[AlgebraicNumber; 4]>,
}

fn pivot_col(row: &[AlgebraicNumber; 4]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

impl OkModule {
    pub fn new(ctx: OkCtx) -> Self {
        OkModule { ctx, denom: BigInt::one(), rows: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rescales the internal denominator so the given vectors become
    /// integral, then inserts them. Returns whether the module grew.
    pub fn insert_all(&mut self, vectors: &[[AlgebraicNumber; 4]]) -> Result<bool> {
        let mut needed = self.denom.clone();
        for v in vectors {
            for x in v {
                for c in self.ctx.integral_coords(x) {
                    needed = needed.lcm(c.denom());
                }
            }
        }
        if needed != self.denom {
            let factor = BigRational::from(&needed / &self.denom);
            for row in &mut self.rows {
                for x in row.iter_mut() {
                    *x = x.scale(&factor);
                }
            }
            self.denom = needed;
        }
        let scale = BigRational::from(self.denom.clone());
        let mut changed = false;
        for v in vectors {
            let scaled: [AlgebraicNumber; 4] = [
                v[0].scale(&scale),
                v[1].scale(&scale),
                v[2].scale(&scale),
                v[3].scale(&scale),
            ];
            if self.insert_integral(scaled)? {
                changed = true;
            }
        }
        Ok(changed)
    }

    /// Inserts one integral row; returns whether the module grew.
    fn insert_integral(&mut self, mut v: [AlgebraicNumber; 4]) -> Result<bool> {
        debug_assert!(v.iter().all(|x| self.ctx.is_integral(x)));
        let mut grew = false;
        let mut guard = 0usize;
        loop {
            guard += 1;
            if guard > 2000 {
                return Err(Error::InternalConsistency(
                    "Hermite reduction did not terminate".into(),
                ));
            }
            let pc = match pivot_col(&v) {
                None => return Ok(grew),
                Some(pc) => pc,
            };
            let slot = self.rows.iter().position(|r| pivot_col(r) == Some(pc));
            match slot {
                None => {
                    let at = self
                        .rows
                        .iter()
                        .position(|r| pivot_col(r).unwrap() > pc)
                        .unwrap_or(self.rows.len());
                    self.rows.insert(at, v);
                    return Ok(true);
                }
                Some(ri) => {
                    let (q, r) = self.ctx.divmod(&v[pc], &self.rows[ri][pc])?;
                    for j in 0..4 {
                        v[j] = v[j].sub(&q.mul(&self.rows[ri][j]));
                    }
                    debug_assert_eq!(v[pc], r);
                    if !r.is_zero() {
                        // the smaller-norm remainder becomes the new pivot row
                        std::mem::swap(&mut self.rows[ri], &mut v);
                        grew = true;
                    }
                }
            }
        }
    }

    /// Membership of a k^4 vector in the module, with o_k coefficients over
    /// the triangular basis when it is a member.
    pub fn express(&self, v: &[AlgebraicNumber; 4]) -> Option<Vec<AlgebraicNumber>> {
        let scale = BigRational::from(self.denom.clone());
        let mut w: Vec<AlgebraicNumber> = v.iter().map(|x| x.scale(&scale)).collect();
        if w.iter().any(|x| !self.ctx.is_integral(x)) {
            return None;
        }
        let mut coeffs = vec![self.ctx.field.zero(); self.rows.len()];
        for (ri, row) in self.rows.iter().enumerate() {
            let pc = pivot_col(row).unwrap();
            if w[pc].is_zero() {
                continue;
            }
            let (q, r) = self.ctx.divmod(&w[pc], &row[pc]).ok()?;
            if !r.is_zero() {
                return None;
            }
            for j in 0..4 {
                w[j] = w[j].sub(&q.mul(&row[j]));
            }
            coeffs[ri] = q;
        }
        if w.iter().all(|x| x.is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[AlgebraicNumber; 4]) -> bool {
        self.express(v).is_some()
    }
}

// ---------------------------------------------------------------------------
// The generated order o_k[Gamma~]
// ---------------------------------------------------------------------------

pub struct QuaternionOrderData {
    /// The base field k (trace field) with its embedding into the entry field.
    pub trace_field: TraceField,
    pub ok: OkCtx,
    /// Basis of the order as matrices over the entry field.
    pub basis_mats: Vec<Mat2>,
    /// Structure constants: basis_i basis_j = sum_k mult_table[i][j][k] basis_k.
    pub mult_table: Vec<Vec<Vec<AlgebraicNumber>>>,
    /// Coordinates of 1 in the order basis.
    pub one_coords: Vec<AlgebraicNumber>,
    /// Coordinates of each group generator and its inverse.
    pub gen_coords: Vec<Vec<AlgebraicNumber>>,
    pub gen_inv_coords: Vec<Vec<AlgebraicNumber>>,
    /// Determinant of the reduced-trace form, an element of o_k.
    pub discriminant: AlgebraicNumber,
    pub disc_norm: BigInt,
    /// Bad rational primes S: 2, 3, divisors of |N(disc)| and of the
    /// defining-polynomial discriminant of k.
    pub bad_primes: Vec<u64>,
    /// Word length at which the module stabilised.
    pub stabilized_at: usize,
    /// Words framing the algebra coordinates: 1, x, y, xy.
    pub frame_words: (Word, Word),
}

const ORDER_MAX_WORD_LEN: usize = 6;

/// Builds the order o_k[Gamma~]: spans words of increasing length,
/// Hermite-reduces after each batch, and stops once the module is
/// multiplicatively closed and no new words enlarge it.
pub fn order_basis(rep: &FuchsianRep, tf: &TraceField) -> Result<QuaternionOrderData> {
    let ok = OkCtx::new(tf.field())?;
    // a k-basis frame 1, x, y, xy with x, y not commuting
    let symbol = quaternion_symbol(rep, tf)?;
    let x = rep.eval(&symbol.x_word);
    let y = rep.eval(&symbol.y_word);
    let frame = [Mat2::identity(&rep.field), x.clone(), y.clone(), x.mul(&y)];
    let coords_of = |m: &Mat2| -> Result<[AlgebraicNumber; 4]> {
        b_coordinates(m, &frame, tf).ok_or_else(|| {
            Error::InternalConsistency("matrix outside the quaternion algebra frame".into())
        })
    };

    let mut module = OkModule::new(ok.clone());
    module.insert_all(&[coords_of(&Mat2::identity(&rep.field))?])?;
    let mut stabilized_at = 0usize;
    for len in 1..=ORDER_MAX_WORD_LEN {
        let mut batch: Vec<[AlgebraicNumber; 4]> = vec![];
        let mut err: Option<Error> = None;
        rep.for_each_word(len, |w, m| {
            if w.len() == len && err.is_none() {
                match b_coordinates(m, &frame, tf) {
                    Some(c) => batch.push(c),
                    None => {
                        err = Some(Error::InternalConsistency(
                            "group word lies outside the algebra frame".into(),
                        ))
                    }
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let changed = module.insert_all(&batch)?;
        if module.rank() == 4 && !changed && len >= 2 && order_is_closed(&module, &frame, tf)? {
            stabilized_at = len;
            break;
        }
    }
    if stabilized_at == 0 {
        return Err(Error::OrderNotStabilized(ORDER_MAX_WORD_LEN));
    }

    // materialise the basis
    let scale = BigRational::new(BigInt::one(), module.denom.clone());
    let basis_mats: Vec<Mat2> = module
        .rows
        .iter()
        .map(|row| frame_combination(row, &frame, tf).scale_rat(&scale))
        .collect();
    let express_mat = |m: &Mat2| -> Result<Vec<AlgebraicNumber>> {
        let coords = b_coordinates(m, &frame, tf)
            .ok_or_else(|| Error::InternalConsistency("element outside the algebra".into()))?;
        module
            .express(&coords)
            .ok_or_else(|| Error::InternalConsistency("element outside the order module".into()))
    };

    let mut mult_table = vec![vec![vec![]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let prod = basis_mats[i].mul(&basis_mats[j]);
            mult_table[i][j] = express_mat(&prod)?;
        }
    }
    let one_coords = express_mat(&Mat2::identity(&rep.field))?;
    let mut gen_coords = vec![];
    let mut gen_inv_coords = vec![];
    for g in &rep.gens {
        gen_coords.push(express_mat(g)?);
        gen_inv_coords.push(express_mat(&g.inv_det1())?);
    }

    // reduced-trace Gram matrix over k and its determinant
    let mut gram: Vec<Vec<AlgebraicNumber>> = vec![vec![tf.field().zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let tr_l = basis_mats[i].mul(&basis_mats[j]).trace();
            gram[i][j] = tf.map.express(&tr_l).ok_or_else(|| {
                Error::InternalConsistency("reduced trace outside the trace field".into())
            })?;
        }
    }
    let discriminant = det4_in_field(&gram, tf.field());
    if !ok.is_integral(&discriminant) {
        return Err(Error::InternalConsistency(
            "trace-form determinant is not integral".into(),
        ));
    }
    let disc_norm = ok.norm_abs(&discriminant);
    let mut bad: Vec<u64> = vec![2, 3];
    for p in factor_u64(&disc_norm) {
        if !bad.contains(&p) {
            bad.push(p);
        }
    }
    let field_disc = tf.field().minpoly_discriminant();
    for p in factor_u64(&field_disc.abs()) {
        if !bad.contains(&p) {
            bad.push(p);
        }
    }
    bad.sort_unstable();

    Ok(QuaternionOrderData {
        trace_field: TraceField {
            map: tf.map.clone(),
            stabilization_checked: tf.stabilization_checked,
        },
        ok,
        basis_mats,
        mult_table,
        one_coords,
        gen_coords,
        gen_inv_coords,
        discriminant,
        disc_norm,
        bad_primes: bad,
        stabilized_at,
        frame_words: (symbol.x_word.clone(), symbol.y_word.clone()),
    })
}

impl QuaternionOrderData {
    /// Good primes are odd, outside S and unramified in k.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        self.bad_primes.contains(&p)
            || !crate::numfield::is_good_prime(&self.trace_field.map.sub, p)
    }

    /// Coordinates of an algebra element over the order basis, when they
    /// exist in k; integrality certifies membership in the order.
    pub fn express(&self, m: &Mat2) -> Option<Vec<AlgebraicNumber>> {
        let tf = &self.trace_field;
        let l_dim = m.a.field.degree();
        let k_dim = tf.field().degree();
        let mut a = vec![vec![BigRational::zero(); 4 * k_dim]; 4 * l_dim];
        let mut rhs = vec![BigRational::zero(); 4 * l_dim];
        for (ei, entry) in m.entries().iter().enumerate() {
            for li in 0..l_dim {
                rhs[ei * l_dim + li] = entry.coords[li].clone();
            }
        }
        for (bi, bmat) in self.basis_mats.iter().enumerate() {
            for kj in 0..k_dim {
                let k_pow = power_of_k_gen(tf, kj);
                for (ei, bentry) in bmat.entries().iter().enumerate() {
                    let scaled = k_pow.mul(bentry);
                    for li in 0..l_dim {
                        a[ei * l_dim + li][bi * k_dim + kj] = scaled.coords[li].clone();
                    }
                }
            }
        }
        let sol = linalg::solve(&a, &rhs)?;
        let k = tf.field();
        Some(
            (0..4)
                .map(|bi| AlgebraicNumber {
                    field: k.clone(),
                    coords: sol[bi * k_dim..(bi + 1) * k_dim].to_vec(),
                })
                .collect(),
        )
    }
}

trait ScaleRat {
    fn scale_rat(&self, s: &BigRational) -> Mat2;
}
impl ScaleRat for Mat2 {
    fn scale_rat(&self, s: &BigRational) -> Mat2 {
        Mat2::new(self.a.scale(s), self.b.scale(s), self.c.scale(s), self.d.scale(s))
    }
}

fn order_is_closed(module: &OkModule, frame: &[Mat2; 4], tf: &TraceField) -> Result<bool> {
    let scale = BigRational::new(BigInt::one(), module.denom.clone());
    let basis: Vec<Mat2> = module
        .rows
        .iter()
        .map(|row| frame_combination(row, frame, tf).scale_rat(&scale))
        .collect();
    for bi in &basis {
        for bj in &basis {
            let prod = bi.mul(bj);
            let coords = match b_coordinates(&prod, frame, tf) {
                Some(c) => c,
                None => return Ok(false),
            };
            if !module.contains(&coords) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coordinates of a matrix in the frame {1, x, y, xy} with coefficients in
/// the trace field, solved as one rational linear system over the entry
/// field's power basis.
fn b_coordinates(m: &Mat2, frame: &[Mat2; 4], tf: &TraceField) -> Option<[AlgebraicNumber; 4]> {
    let l_dim = m.a.field.degree();
    let k_dim = tf.field().degree();
    let mut a = vec![vec![BigRational::zero(); 4 * k_dim]; 4 * l_dim];
    let mut rhs = vec![BigRational::zero(); 4 * l_dim];
    for (ei, entry) in m.entries().iter().enumerate() {
        for li in 0..l_dim {
            rhs[ei * l_dim + li] = entry.coords[li].clone();
        }
    }
    for fi in 0..4 {
        for kj in 0..k_dim {
            let k_pow = power_of_k_gen(tf, kj);
            for (ei, fentry) in frame[fi].entries().iter().enumerate() {
                let scaled = k_pow.mul(fentry);
                for li in 0..l_dim {
                    a[ei * l_dim + li][fi * k_dim + kj] = scaled.coords[li].clone();
                }
            }
        }
    }
    let sol = linalg::solve(&a, &rhs)?;
    let k = tf.field();
    let mut out = vec![];
    for fi in 0..4 {
        let coords = sol[fi * k_dim..(fi + 1) * k_dim].to_vec();
        out.push(AlgebraicNumber { field: k.clone(), coords });
    }
    Some([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
}

fn power_of_k_gen(tf: &TraceField, j: usize) -> AlgebraicNumber {
    let mut acc = tf.map.gen_in_parent.field.one();
    for _ in 0..j {
        acc = acc.mul(&tf.map.gen_in_parent);
    }
    acc
}

fn frame_combination(coords: &[AlgebraicNumber; 4], frame: &[Mat2; 4], tf: &TraceField) -> Mat2 {
    let l = tf.map.gen_in_parent.field.clone();
    let mut acc = Mat2::new(l.zero(), l.zero(), l.zero(), l.zero());
    for i in 0..4 {
        let lifted = tf.map.lift(&coords[i]);
        let term = frame[i].scale(&lifted);
        acc = Mat2::new(
            acc.a.add(&term.a),
            acc.b.add(&term.b),
            acc.c.add(&term.c),
            acc.d.add(&term.d),
        );
    }
    acc
}

fn det4_in_field(m: &[Vec<AlgebraicNumber>], k: &NumberField) -> AlgebraicNumber {
    let mut a: Vec<Vec<AlgebraicNumber>> = m.to_vec();
    let n = 4;
    let mut acc = k.one();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return k.zero(),
        };
        if piv != c {
            a.swap(c, piv);
            acc = acc.neg();
        }
        acc = acc.mul(&a[c][c]);
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let factor = a[i][c].mul(&inv);
                for j in c..n {
                    let t = factor.mul(&a[c][j]);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
    }
    acc
}

pub fn factor_u64(n: &BigInt) -> Vec<u64> {
    let mut out = vec![];
    let mut rest = n.abs();
    if rest.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        if (&rest % &d).is_zero() {
            out.push(u64::try_from(&d).expect("prime factor fits u64"));
            while (&rest % &d).is_zero() {
                rest /= &d;
            }
        }
        d += 1;
    }
    if rest > BigInt::one() {
        out.push(u64::try_from(&rest).expect("prime factor fits u64"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::load_group;

    fn modular_group() -> FuchsianRep {
        let q = NumberField::rationals();
        let t = Mat2::new(q.from_i64(1), q.from_i64(1), q.from_i64(0), q.from_i64(1));
        let s = Mat2::new(q.from_i64(0), q.from_i64(-1), q.from_i64(1), q.from_i64(0));
        load_group(&q, vec![t, s], vec!["t".into(), "s".into()], vec![]).unwrap()
    }

    #[test]
    fn okctx_quadratic_euclidean() {
        let f = NumberField::real_quadratic(2).unwrap();
        let ok = OkCtx::new(&f).unwrap();
        let s2 = f.gen();
        let a = s2.scale(&rat_from_i64(7)).add(&f.from_i64(3));
        let b = s2.add(&f.from_i64(2));
        let (q, r) = ok.divmod(&a, &b).unwrap();
        assert_eq!(a, q.mul(&b).add(&r));
        assert!(ok.norm_abs(&r) < ok.norm_abs(&b));
    }

    #[test]
    fn okctx_golden_ratio_field() {
        // x^2 - x - 1: disc 5, omega = (1 + sqrt5)/2
        let f = NumberField::create(
            &crate::intpoly::int_poly_from_i64(&[-1, -1, 1]),
            rat_from_i64(1),
            rat_from_i64(2),
        )
        .unwrap();
        let ok = OkCtx::new(&f).unwrap();
        let om = ok.omega.clone().unwrap();
        assert!(om.is_integral());
        assert!(ok.is_integral(&f.gen()));
    }

    #[test]
    fn okctx_rejects_class_number_two() {
        let f = NumberField::real_quadratic(10).unwrap();
        assert!(matches!(OkCtx::new(&f), Err(Error::UnsupportedBaseField(_))));
    }

    #[test]
    fn module_membership_over_z() {
        let q = NumberField::rationals();
        let ok = OkCtx::new(&q).unwrap();
        let mut m = OkModule::new(ok);
        let e = |a: i64, b: i64, c: i64, d: i64| {
            [q.from_i64(a), q.from_i64(b), q.from_i64(c), q.from_i64(d)]
        };
        // span{(2,0), (3,1)} = {(x,y) : x = y mod 2}
        m.insert_all(&[e(2, 0, 0, 0), e(3, 1, 0, 0)]).unwrap();
        assert!(m.contains(&e(1, 1, 0, 0)));
        assert!(m.contains(&e(1, -1, 0, 0)));
        assert!(!m.contains(&e(1, 2, 0, 0)));
        assert!(!m.contains(&[
            q.from_rational(crate::intpoly::rat(1, 2)),
            q.zero(),
            q.zero(),
            q.zero()
        ]));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn modular_order_is_m2z() {
        let rep = modular_group();
        let tf = crate::fuchsian::trace_field(&rep).unwrap();
        let ord = order_basis(&rep, &tf).unwrap();
        // the order of the modular group is all of M(2, Z): discriminant
        // norm 1 and bad primes exactly {2, 3}
        assert_eq!(ord.disc_norm, BigInt::one());
        assert_eq!(ord.bad_primes, vec![2, 3]);
        for g in ord.gen_coords.iter().chain(&ord.gen_inv_coords) {
            for c in g {
                assert!(ord.ok.is_integral(c));
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                for c in &ord.mult_table[i][j] {
                    assert!(ord.ok.is_integral(c));
                }
            }
        }
    }

    #[test]
    fn stabilization_under_longer_words() {
        let rep = modular_group();
        let tf = crate::fuchsian::trace_field(&rep).unwrap();
        let ord = order_basis(&rep, &tf).unwrap();
        // adding length-5 words changes nothing
        let x = rep.eval(&ord.frame_words.0);
        let y = rep.eval(&ord.frame_words.1);
        let frame = [Mat2::identity(&rep.field), x.clone(), y.clone(), x.mul(&y)];
        let mut module = OkModule::new(ord.ok.clone());
        let rows: Vec<[AlgebraicNumber; 4]> = ord
            .basis_mats
            .iter()
            .map(|m| b_coordinates(m, &frame, &tf).unwrap())
            .collect();
        module.insert_all(&rows).unwrap();
        let mut all_in = true;
        rep.for_each_word(5, |w, m| {
            if w.len() == 5 {
                let c = b_coordinates(m, &frame, &tf).unwrap();
                if !module.contains(&c) {
                    all_in = false;
                }
            }
        });
        assert!(all_in);
    }

    #[test]
    fn quadratic_group_order() {
        // the Q(sqrt2) test group: order arithmetic over Z[sqrt2]
        let f = NumberField::real_quadratic(2).unwrap();
        let s2 = f.gen();
        let a = Mat2::new(s2.clone(), f.one(), f.one(), s2.clone());
        let b = Mat2::new(s2.clone(), s2.add(&f.one()), s2.sub(&f.one()), s2.clone());
        let rep = load_group(&f, vec![a, b], vec![], vec![]).unwrap();
        let tf = crate::fuchsian::trace_field(&rep).unwrap();
        assert_eq!(tf.degree(), 2);
        let ord = order_basis(&rep, &tf).unwrap();
        assert!(ord.bad_primes.contains(&2));
        for g in &ord.gen_coords {
            for c in g {
                assert!(ord.ok.is_integral(c));
            }
        }
    }
}
