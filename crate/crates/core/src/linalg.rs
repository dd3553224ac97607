//! Dense exact linear algebra over the rationals: row reduction, rank,
//! kernels, determinants and inverses. Matrices are small (graded pieces of
//! cohomology rings, torus-rank bases), so row-major `Vec<Vec<_>>` is enough.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::ExactRational;

pub type Matrix = Vec<Vec<ExactRational>>;
pub type Vector = Vec<ExactRational>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![ExactRational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ExactRational::one();
    }
    m
}

pub fn cols(m: &Matrix) -> usize {
    m.first().map_or(0, Vec::len)
}

pub fn transpose(m: &Matrix) -> Matrix {
    let c = cols(m);
    (0..c).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if cols(a) != b.len() && !(a.is_empty() || b.is_empty()) {
        return Err(Error::Shape(format!("{}x{} * {}x{}", a.len(), cols(a), b.len(), cols(b))));
    }
    let n = cols(b);
    Ok(a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .filter(|(x, _)| !x.is_zero())
                        .fold(ExactRational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect())
}

pub fn mat_vec(m: &Matrix, v: &[ExactRational]) -> Vector {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, _)| !x.is_zero())
                .fold(ExactRational::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn dot(a: &[ExactRational], b: &[ExactRational]) -> ExactRational {
    a.iter().zip(b).fold(ExactRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form; returns the pivot column of each nonzero row.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let ncols = cols(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of `{ v : m v = 0 }`, with `ncols` the width of `m` (needed when
/// `m` has no rows).
pub fn kernel(m: &Matrix, ncols: usize) -> Vec<Vector> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ExactRational::zero(); ncols];
            v[f] = ExactRational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Basis of the span of the given vectors (as a list of independent vectors).
pub fn span_basis(vectors: &[Vector]) -> Vec<Vector> {
    let mut m: Matrix = vectors.to_vec();
    rref(&mut m);
    m
}

pub fn determinant(m: &Matrix) -> Result<ExactRational> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    let mut a = m.clone();
    let mut det = ExactRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(ExactRational::zero());
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    Ok(det)
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Shape("inverse of a non-square matrix".into()));
    }
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { ExactRational::one() } else { ExactRational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::NonInvertible);
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
