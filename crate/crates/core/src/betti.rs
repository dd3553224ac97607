//! Poincaré series of quotients, Morse assembly and perfection checks.
//!
//! Dimensions are complex throughout; the doubling to `t`-exponents happens
//! only inside this module.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::TruncSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumDatum {
    /// Complex codimension `d(β)`.
    pub codim: usize,
    pub series: TruncSeries,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QuotientDims {
    pub dim_x: usize,
    pub dim_u: usize,
    pub dim_zmin: usize,
    /// Dimension of the residual torus `R/λ` acting on `Z_min`; only
    /// `poincare_h` subtracts it.
    pub dim_residual: usize,
}

impl QuotientDims {
    pub fn new(dim_x: usize, dim_u: usize, dim_zmin: usize) -> Self {
        Self { dim_x, dim_u, dim_zmin, dim_residual: 0 }
    }

    pub fn with_residual(mut self, dim_residual: usize) -> Self {
        self.dim_residual = dim_residual;
        self
    }

    /// `d = dim X - dim U - dim Z_min`.
    pub fn fibre_dimension(&self) -> i64 {
        self.dim_x as i64 - self.dim_u as i64 - self.dim_zmin as i64
    }
}

fn fibre_factor(d: i64, bound: usize) -> Result<TruncSeries> {
    if d < 1 {
        return Err(Error::NonPositiveFibreDimension(d));
    }
    Ok(TruncSeries::geometric_sum(2, d as usize, bound))
}

fn checked(s: TruncSeries) -> Result<TruncSeries> {
    s.ensure_nonnegative()?;
    Ok(s)
}

/// `P_t(Z_min) (1 - t^{2d}) / (1 - t^2)`.
pub fn poincare_uhat(p_zmin: &TruncSeries, dims: &QuotientDims) -> Result<TruncSeries> {
    let factor = fibre_factor(dims.fibre_dimension(), p_zmin.bound())?;
    checked(p_zmin.series_mul(&factor))
}

/// `P_t(Z_min // (R/λ)) (1 - t^{2d}) / (1 - t^2)` with the residual torus
/// dimension removed from `d`.
pub fn poincare_h(p_zmin_quotient: &TruncSeries, dims: &QuotientDims) -> Result<TruncSeries> {
    let d = dims.fibre_dimension() - dims.dim_residual as i64;
    let factor = fibre_factor(d, p_zmin_quotient.bound())?;
    checked(p_zmin_quotient.series_mul(&factor))
}

/// `Σ_β t^{2 d(β)} P_t(S_β)`.
pub fn morse_assemble(strata: &[StratumDatum], bound: usize) -> TruncSeries {
    strata
        .iter()
        .fold(TruncSeries::zero(bound), |acc, s| &acc + &s.series.shift(2 * s.codim))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectionReport {
    pub perfect: bool,
    /// `R(t)` with `strata_sum - total = (1 + t) R(t)`.
    pub remainder: TruncSeries,
    /// First negative coefficient of `R(t)`, which breaks the Morse
    /// inequalities.
    pub violation: Option<(usize, BigInt)>,
}

pub fn check_perfect(total: &TruncSeries, strata_sum: &TruncSeries) -> Result<PerfectionReport> {
    let remainder = (strata_sum - total).div_one_plus_t()?;
    let violation = remainder.first_negative().map(|(i, c)| (i, c.clone()));
    Ok(PerfectionReport { perfect: remainder.is_zero(), remainder, violation })
}

/// `P_t(Y) / (1 - t^2)`, the `S^1`-equivariant series.
pub fn equivariant_circle_series(p: &TruncSeries) -> TruncSeries {
    p.series_geom_div(2).expect("ratio exponent is positive")
}

/// Rational Betti series of a weighted projective space with the given
/// weights.
pub fn weighted_projective_poincare(weights: &[u64], bound: usize) -> Result<TruncSeries> {
    if weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    if weights.contains(&0) {
        return Err(Error::InvalidArgument("weights must be positive".into()));
    }
    Ok(TruncSeries::geometric_sum(2, weights.len(), bound))
}
