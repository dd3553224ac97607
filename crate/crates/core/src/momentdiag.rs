//! Floating-point moment-map diagnostics for linear actions on projective
//! space. Results here are advisory and never feed the exact pipeline.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Vec<Vec<Complex64>>;

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Tangency tolerance on `|<x, ξ>|` relative to `|ξ|`.
const TANGENT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearActionSample {
    /// A lift `x` of the point `[x]`.
    pub point: Vec<Complex64>,
    /// `ρ_*(a)`.
    pub lie_element: CMatrix,
    /// Rational character twist, added to the value.
    pub shift: f64,
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

/// `Σ conj(a_i) b_i`.
fn hermitian(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn apply(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

impl LinearActionSample {
    fn validate(&self) -> Result<()> {
        let n = self.point.len();
        if self.lie_element.len() != n || self.lie_element.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("action matrix must be {n}x{n}")));
        }
        if norm_sqr(&self.point) == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(())
    }

    fn value_at(&self, x: &[Complex64]) -> Complex64 {
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        hermitian(x, &apply(&self.lie_element, x)) / (two_pi_i * norm_sqr(x)) + self.shift
    }

    fn unit_point(&self) -> Vec<Complex64> {
        let n = norm_sqr(&self.point).sqrt();
        self.point.iter().map(|c| c / n).collect()
    }
}

/// `x̄ᵀ ρ_*(a) x / (2πi |x|²)` plus the shift.
pub fn moment_value(s: &LinearActionSample) -> Result<Complex64> {
    s.validate()?;
    Ok(s.value_at(&s.point))
}

/// `(x̄ᵀ A ξ + ξ̄ᵀ A x) / 2πi` at the unit representative of `x`.
pub fn moment_derivative(s: &LinearActionSample, tangent: &[Complex64]) -> Result<Complex64> {
    s.validate()?;
    let x = s.unit_point();
    check_tangent(&x, tangent)?;
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let a = &s.lie_element;
    Ok((hermitian(&x, &apply(a, tangent)) + hermitian(tangent, &apply(a, &x))) / two_pi_i)
}

fn check_tangent(x: &[Complex64], tangent: &[Complex64]) -> Result<()> {
    if tangent.len() != x.len() {
        return Err(Error::Shape(format!("tangent must have length {}", x.len())));
    }
    let overlap = hermitian(x, tangent).norm();
    if overlap > TANGENT_TOL * norm_sqr(tangent).sqrt().max(1.0) {
        return Err(Error::NonTangent(overlap));
    }
    Ok(())
}

/// `|analytic derivative - central difference|` at step `h`.
pub fn moment_derivative_check_with_step(s: &LinearActionSample, tangent: &[Complex64], h: f64) -> Result<f64> {
    let analytic = moment_derivative(s, tangent)?;
    let x = s.unit_point();
    let plus: Vec<Complex64> = x.iter().zip(tangent).map(|(a, b)| a + b * h).collect();
    let minus: Vec<Complex64> = x.iter().zip(tangent).map(|(a, b)| a - b * h).collect();
    let numeric = (s.value_at(&plus) - s.value_at(&minus)) / (2.0 * h);
    Ok((numeric - analytic).norm())
}

pub fn moment_derivative_check(s: &LinearActionSample, tangent: &[Complex64]) -> Result<f64> {
    moment_derivative_check_with_step(s, tangent, DEFAULT_STEP)
}

/// Ratio of residuals at steps `h` and `h/10`; close to 100 for a
/// second-order difference.
pub fn residual_scaling(s: &LinearActionSample, tangent: &[Complex64], h: f64) -> Result<f64> {
    let coarse = moment_derivative_check_with_step(s, tangent, h)?;
    let fine = moment_derivative_check_with_step(s, tangent, h / 10.0)?;
    Ok(coarse / fine)
}

/// `2πi · diag(w)`, the infinitesimal action of a one-parameter subgroup
/// with integer weights `w`.
pub fn diagonal_action(weights: &[f64]) -> CMatrix {
    let n = weights.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Complex64::new(0.0, 2.0 * PI * weights[i]) } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect()
}

/// `U A U*`.
pub fn conjugate(u: &CMatrix, a: &CMatrix) -> CMatrix {
    let n = u.len();
    let ua: CMatrix = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| u[i][k] * a[k][j]).sum()).collect()).collect();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| ua[i][k] * u[j][k].conj()).sum()).collect()).collect()
}

/// Gram–Schmidt on the rows of `m`; fails on a rank-deficient input.
pub fn orthonormalize(m: &CMatrix) -> Result<CMatrix> {
    let mut out: CMatrix = Vec::with_capacity(m.len());
    for row in m {
        let mut v = row.clone();
        for q in &out {
            let c = hermitian(q, &v);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
        let n = norm_sqr(&v).sqrt();
        if n < 1e-12 {
            return Err(Error::NonInvertible);
        }
        out.push(v.into_iter().map(|x| x / n).collect());
    }
    Ok(out)
}

/// Projects `v` onto the orthogonal complement of `x`.
pub fn tangent_projection(x: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let c = hermitian(x, v) / norm_sqr(x);
    v.iter().zip(x).map(|(a, b)| a - c * b).collect()
}

/// `|value - declared| / max(|declared|, 1)`.
pub fn relative_error(value: Complex64, declared: f64) -> f64 {
    (value - declared).norm() / declared.abs().max(1.0)
}
