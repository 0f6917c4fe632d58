//! Small exact linear algebra over the rationals: solving, nullspaces and
//! determinants by fraction-free-enough Gaussian elimination at desk scale.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Mat = Vec<Vec<BigRational>>;

/// Solves A x = b (A given row-major, possibly rectangular with rows >=
/// cols). Returns None when the system is inconsistent or underdetermined.
pub fn solve(a: &Mat, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    if rows == 0 {
        return if b.iter().all(|x| x.is_zero()) { Some(vec![]) } else { None };
    }
    let cols = a[0].len();
    let mut m: Mat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = vec![];
    let mut r = 0usize;
    for c in 0..cols {
        let piv = (r..rows).find(|&i| !m[i][c].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(r, piv);
        let inv = m[r][c].clone().recip();
        for j in c..=cols {
            let v = &m[r][j] * &inv;
            m[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..=cols {
                    let v = &m[i][j] - &factor * &m[r][j];
                    m[i][j] = v;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency: rows of zeros must have zero rhs
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    if pivot_cols.len() != cols {
        return None; // underdetermined
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[row][cols].clone();
    }
    Some(x)
}

/// Basis of the right nullspace of A.
pub fn nullspace(a: &Mat, cols: usize) -> Vec<Vec<BigRational>> {
    let rows = a.len();
    let mut m: Mat = a.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let piv = (r..rows).find(|&i| !m[i][c].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(r, piv);
        let inv = m[r][c].clone().recip();
        for j in 0..cols {
            let v = &m[r][j] * &inv;
            m[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let v = &m[i][j] - &factor * &m[r][j];
                    m[i][j] = v;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = vec![];
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for c in 0..cols {
            if let Some(row) = pivot_of_col[c] {
                v[c] = -m[row][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

pub fn det(a: &Mat) -> BigRational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut acc = BigRational::one();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if piv != c {
            m.swap(c, piv);
            acc = -acc;
        }
        acc *= m[c][c].clone();
        let inv = m[c][c].clone().recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let factor = &m[i][c] * &inv;
                for j in c..n {
                    let v = &m[i][j] - &factor * &m[c][j];
                    m[i][j] = v;
                }
            }
        }
    }
    acc
}

pub fn rank(a: &Mat, cols: usize) -> usize {
    cols - nullspace(a, cols).len()
}
