//! Dense univariate polynomial arithmetic over an arbitrary field,
//! parameterised by a context object carrying the field structure.
//!
//! A polynomial is a coefficient vector with no trailing zeros; the empty
//! vector is the zero polynomial. The same engine serves the rationals,
//! prime fields, their extensions and number fields.

use std::fmt::Debug;

/// Field operations parameterised by a context value (modulus, minimal
/// polynomial, ...). All operations are total except `inv` on zero.
pub trait FieldCtx {
    type El: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
    fn is_zero(&self, a: &Self::El) -> bool;

    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }
    /// `a` times a small nonnegative integer.
    fn mul_usize(&self, a: &Self::El, n: usize) -> Self::El {
        let mut acc = self.zero();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            n >>= 1;
        }
        acc
    }
}

pub type Poly<F> = Vec<<F as FieldCtx>::El>;

pub fn trim<F: FieldCtx>(f: &F, mut p: Poly<F>) -> Poly<F> {
    while let Some(last) = p.last() {
        if f.is_zero(last) {
            p.pop();
        } else {
            break;
        }
    }
    p
}

pub fn deg<T>(p: &[T]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn is_zero_poly<T>(p: &[T]) -> bool {
    p.is_empty()
}

pub fn constant<F: FieldCtx>(f: &F, c: F::El) -> Poly<F> {
    trim(f, vec![c])
}

pub fn add<F: FieldCtx>(f: &F, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
        out.push(f.add(&x, &y));
    }
    trim(f, out)
}

pub fn sub<F: FieldCtx>(f: &F, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
        out.push(f.sub(&x, &y));
    }
    trim(f, out)
}

pub fn neg<F: FieldCtx>(f: &F, a: &Poly<F>) -> Poly<F> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn mul<F: FieldCtx>(f: &F, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn scale<F: FieldCtx>(f: &F, a: &Poly<F>, s: &F::El) -> Poly<F> {
    trim(f, a.iter().map(|c| f.mul(c, s)).collect())
}

/// Euclidean division; requires the divisor's leading coefficient invertible.
pub fn divrem<F: FieldCtx>(f: &F, a: &Poly<F>, b: &Poly<F>) -> (Poly<F>, Poly<F>) {
    let db = deg(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b.last().unwrap()).expect("leading coefficient not invertible");
    let mut rem = a.clone();
    let mut quo = vec![f.zero(); a.len().saturating_sub(db)];
    while let Some(dr) = deg(&rem) {
        if dr < db {
            break;
        }
        let c = f.mul(rem.last().unwrap(), &lead_inv);
        let shift = dr - db;
        quo[shift] = f.add(&quo[shift], &c);
        for (i, bc) in b.iter().enumerate() {
            let t = f.mul(&c, bc);
            rem[shift + i] = f.sub(&rem[shift + i], &t);
        }
        rem = trim(f, rem);
    }
    (trim(f, quo), rem)
}

pub fn rem<F: FieldCtx>(f: &F, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    divrem(f, a, b).1
}

pub fn monic<F: FieldCtx>(f: &F, a: &Poly<F>) -> Poly<F> {
    match a.last() {
        None => vec![],
        Some(l) => {
            let inv = f.inv(l).expect("zero leading coefficient");
            scale(f, a, &inv)
        }
    }
}

/// Monic gcd by the Euclidean algorithm.
pub fn gcd<F: FieldCtx>(f: &F, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended gcd: returns (g, s, t) monic with s*a + t*b = g.
pub fn xgcd<F: FieldCtx>(f: &F, a: &Poly<F>, b: &Poly<F>) -> (Poly<F>, Poly<F>, Poly<F>) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = constant(f, f.one());
    let mut s1: Poly<F> = vec![];
    let mut t0: Poly<F> = vec![];
    let mut t1 = constant(f, f.one());
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let ns = sub(f, &s0, &mul(f, &q, &s1));
        let nt = sub(f, &t0, &mul(f, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    if let Some(l) = r0.last().cloned() {
        let inv = f.inv(&l).unwrap();
        r0 = scale(f, &r0, &inv);
        s0 = scale(f, &s0, &inv);
        t0 = scale(f, &t0, &inv);
    }
    (r0, s0, t0)
}

pub fn eval<F: FieldCtx>(f: &F, p: &Poly<F>, x: &F::El) -> F::El {
    let mut acc = f.zero();
    for c in p.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

pub fn derivative<F: FieldCtx>(f: &F, p: &Poly<F>) -> Poly<F> {
    if p.len() <= 1 {
        return vec![];
    }
    let out = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul_usize(c, i))
        .collect();
    trim(f, out)
}

/// `base^e mod m` with a u128 exponent.
pub fn pow_mod<F: FieldCtx>(f: &F, base: &Poly<F>, mut e: u128, m: &Poly<F>) -> Poly<F> {
    let mut acc = constant(f, f.one());
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// Composition p(q(x)).
pub fn compose<F: FieldCtx>(f: &F, p: &Poly<F>, q: &Poly<F>) -> Poly<F> {
    let mut acc: Poly<F> = vec![];
    for c in p.iter().rev() {
        acc = mul(f, &acc, q);
        acc = add(f, &acc, &constant(f, c.clone()));
    }
    acc
}

/// Nullspace basis of a linear system with four unknowns over any field,
/// by Gauss-Jordan elimination. Used by the conjugacy solvers.
pub fn nullspace4<F: FieldCtx>(f: &F, rows: &[[F::El; 4]]) -> Vec<[F::El; 4]> {
    let mut m: Vec<Vec<F::El>> = rows.iter().map(|r| r.to_vec()).collect();
    let cols = 4;
    let rows_n = m.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let piv = (r..rows_n).find(|&i| !f.is_zero(&m[i][c]));
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(r, piv);
        let inv = f.inv(&m[r][c]).unwrap();
        for j in 0..cols {
            m[r][j] = f.mul(&m[r][j], &inv);
        }
        for i in 0..rows_n {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows_n {
            break;
        }
    }
    let mut basis = vec![];
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = [f.zero(), f.zero(), f.zero(), f.zero()];
        v[free] = f.one();
        for c in 0..cols {
            if let Some(row) = pivot_of_col[c] {
                v[c] = f.neg(&m[row][free]);
            }
        }
        basis.push(v);
    }
    basis
}
