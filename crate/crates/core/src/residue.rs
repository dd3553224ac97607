//! One-variable residues and the iterated Jeffrey–Kirwan residue.
//!
//! Every residue here is a sum of residues at finite poles `z_i = p(z')`,
//! with the remaining variables treated as parameters. For a rational
//! function this sum equals the coefficient of `z_i^{-1}` in the expansion
//! at infinity, which is what `Res⁺` returns.
//!
//! The iterated residue keeps one exponent direction `ε` per term. After
//! taking the residue at `z_1 = p(z')` the direction becomes
//! `ε'_j = ε_j + ε_1 p_j`, and the next `Res⁺` step uses `ε'_1` to decide
//! whether that term contributes.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, rational_sqrt, ExactRational};
use crate::groupdata::ConeChoice;
use crate::linalg::{self, Matrix};
use crate::polyring::{LinearForm, Monomial, MultiPoly, RationalFn};

/// A rational integrand together with its exponent direction `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTerm {
    pub integrand: RationalFn,
    pub epsilon: Vec<ExactRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueProblem {
    pub integrand: RationalFn,
    pub cone: ConeChoice,
    /// Coordinates `z_1..z_r`; empty selects the default basis adapted to `ξ`.
    pub basis: Vec<LinearForm>,
    /// Defaults to `ξ` when absent.
    pub epsilon_direction: Option<Vec<ExactRational>>,
    pub inner_product: Matrix,
    pub sign_flip: bool,
}

impl ResidueProblem {
    /// Standard inner product, default basis, `ε = ξ`.
    pub fn new(integrand: RationalFn, cone: ConeChoice) -> Self {
        let r = integrand.nvars();
        Self {
            integrand,
            cone,
            basis: Vec::new(),
            epsilon_direction: None,
            inner_product: linalg::identity(r),
            sign_flip: false,
        }
    }
}

/// `p` as a form in `n` variables with a zero coefficient at position `i`.
fn insert_coeff(p: &LinearForm, i: usize) -> LinearForm {
    let mut c = p.coeffs().to_vec();
    c.insert(i, ExactRational::zero());
    LinearForm::new(c)
}

/// Drops every term whose degree in variable `i` exceeds `max`.
fn truncate_in_var(p: &MultiPoly, i: usize, max: u32) -> MultiPoly {
    MultiPoly::from_terms(
        p.nvars(),
        p.terms().filter(|(m, _)| m.0[i] <= max).map(|(m, c)| (m.clone(), c.clone())),
    )
    .expect("terms come from a polynomial of the same ring")
}

/// The pole `z_i = p(z')` of a denominator factor, if it involves `z_i`.
fn pole_of(form: &LinearForm, i: usize) -> Option<LinearForm> {
    let c = form.coeff(i);
    if c.is_zero() {
        return None;
    }
    Some(form.remove_var(i).scale(&(-c.recip())))
}

fn check_var(f: &RationalFn, i: usize) -> Result<()> {
    if i >= f.nvars() {
        return Err(Error::InvalidArgument(format!("variable index {i} out of range for {} variables", f.nvars())));
    }
    Ok(())
}

/// Distinct finite poles of `f` in the variable `z_i`.
pub fn poles(f: &RationalFn, i: usize) -> Result<Vec<LinearForm>> {
    check_var(f, i)?;
    let set: BTreeSet<LinearForm> = f.denominator().iter().filter_map(|(form, _)| pole_of(form, i)).collect();
    Ok(set.into_iter().collect())
}

/// Residue of `f` in `z_i` at `z_i = pole(z')`, as a function of the
/// remaining variables.
pub fn residue_at_pole(f: &RationalFn, i: usize, pole: &LinearForm) -> Result<RationalFn> {
    check_var(f, i)?;
    let n = f.nvars();
    if pole.nvars() + 1 != n {
        return Err(Error::VarCountMismatch { expected: n - 1, found: pole.nvars() });
    }
    let mut order = 0u32;
    let mut lead = ExactRational::one();
    let mut others = Vec::new();
    for (form, k) in f.denominator() {
        match pole_of(form, i) {
            Some(p) if &p == pole => {
                order += k;
                lead *= num_traits::pow(form.coeff(i).clone(), *k as usize);
            }
            _ => others.push((form, *k)),
        }
    }
    if order == 0 {
        return RationalFn::new(MultiPoly::zero(n - 1), Vec::new());
    }
    let top = order - 1;
    let u = MultiPoly::var(n, i);
    let shift = insert_coeff(pole, i).to_poly();
    let images: Vec<MultiPoly> = (0..n).map(|j| if j == i { &u + &shift } else { MultiPoly::var(n, j) }).collect();
    let mut acc = truncate_in_var(&f.numerator().substitute(&images)?, i, top);
    let mut denominator = Vec::new();
    for (form, k) in others {
        let c = form.coeff(i);
        let rest = form.remove_var(i);
        if c.is_zero() {
            denominator.push((rest, k));
            continue;
        }
        // 1/(c u + M)^k to order u^top, over the common denominator M^(k+top)
        let m = rest.add(&pole.scale(c));
        let m_poly = insert_coeff(&m, i).to_poly();
        let mut s = MultiPoly::zero(n);
        let mut u_pow = MultiPoly::one(n);
        let neg_c = -c.clone();
        for t in 0..=top {
            let coeff = ExactRational::from_integer(binomial(u64::from(k + t) - 1, u64::from(t)))
                * num_traits::pow(neg_c.clone(), t as usize);
            s = &s + &(&u_pow * &m_poly.pow(top - t)).scale(&coeff);
            u_pow = &u_pow * &u;
        }
        acc = truncate_in_var(&(&acc * &s), i, top);
        denominator.push((m, k + top));
    }
    let coefficient = acc.split_var(i).remove(&top).unwrap_or_else(|| MultiPoly::zero(n - 1));
    RationalFn::new(coefficient.scale(&lead.recip()), denominator)
}

/// Coefficient of `z_i^{-1}` in the Laurent expansion around `z_i = 0`.
pub fn residue_at_zero(f: &RationalFn, i: usize) -> Result<RationalFn> {
    check_var(f, i)?;
    residue_at_pole(f, i, &LinearForm::new(vec![ExactRational::zero(); f.nvars() - 1]))
}

/// Coefficient of `z_i^{-1}` in the expansion around `z_i = ∞`, i.e. the
/// sum of the residues at all finite poles.
pub fn coefficient_at_infinity(f: &RationalFn, i: usize) -> Result<RationalFn> {
    let mut total = RationalFn::new(MultiPoly::zero(f.nvars() - 1), Vec::new())?;
    for p in poles(f, i)? {
        total = total.add(&residue_at_pole(f, i, &p)?)?;
    }
    Ok(total)
}

/// `Res⁺`: the coefficient at infinity when `ε_i ≥ 0`, zero otherwise.
pub fn res_plus(f: &RationalFn, i: usize, epsilon_component: &ExactRational) -> Result<RationalFn> {
    check_var(f, i)?;
    if epsilon_component.is_negative() {
        return RationalFn::new(MultiPoly::zero(f.nvars() - 1), Vec::new());
    }
    coefficient_at_infinity(f, i)
}

/// Basis `z_1 = e_k/ξ_k`, `z_j = e_j - (ξ_j/ξ_k) e_k` with `k` the first
/// index where `ξ` is nonzero; satisfies `z_1(ξ) = 1`, `z_j(ξ) = 0`.
pub fn default_basis(xi: &[ExactRational]) -> Result<Vec<LinearForm>> {
    let r = xi.len();
    let k = xi.iter().position(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
    let mut basis = vec![LinearForm::unit(r, k).scale(&xi[k].recip())];
    for j in (0..r).filter(|&j| j != k) {
        basis.push(LinearForm::unit(r, j).add(&LinearForm::unit(r, k).scale(&(-(&xi[j] / &xi[k])))));
    }
    Ok(basis)
}

/// Checks `z_1(ξ) = 1`, `z_j(ξ) = 0` and invertibility; returns the basis
/// matrix (rows are the forms).
pub fn validate_basis(basis: &[LinearForm], xi: &[ExactRational]) -> Result<Matrix> {
    let r = xi.len();
    if basis.len() != r {
        return Err(Error::InvalidBasis(format!("expected {r} forms, got {}", basis.len())));
    }
    for (j, z) in basis.iter().enumerate() {
        if z.nvars() != r {
            return Err(Error::VarCountMismatch { expected: r, found: z.nvars() });
        }
        let want = if j == 0 { ExactRational::one() } else { ExactRational::zero() };
        if z.eval(xi) != want {
            return Err(Error::InvalidBasis(format!("z{}(xi) = {}, expected {want}", j + 1, z.eval(xi))));
        }
    }
    let b: Matrix = basis.iter().map(|z| z.coeffs().to_vec()).collect();
    if linalg::determinant(&b)?.is_zero() {
        return Err(Error::InvalidBasis("forms are linearly dependent".into()));
    }
    Ok(b)
}

/// `sqrt(det[(z_i, z_j)])` for the basis rows under the inner product.
pub fn gram_normalization(b: &Matrix, inner_product: &Matrix) -> Result<ExactRational> {
    let gram = linalg::mat_mul(&linalg::mat_mul(b, inner_product)?, &linalg::transpose(b))?;
    let det = linalg::determinant(&gram)?;
    rational_sqrt(&det).ok_or_else(|| Error::IrrationalNormalization(crate::exactnum::format_pq(&det)))
}

/// The change of variables shared by every term of one residue evaluation.
#[derive(Clone, Debug)]
pub struct ResidueFrame {
    inverse: Matrix,
    normalization: ExactRational,
    sign_flip: bool,
}

impl ResidueFrame {
    pub fn new(
        cone: &ConeChoice,
        basis: &[LinearForm],
        inner_product: &Matrix,
        sign_flip: bool,
    ) -> Result<Self> {
        let basis = if basis.is_empty() { default_basis(&cone.xi)? } else { basis.to_vec() };
        let b = validate_basis(&basis, &cone.xi)?;
        Ok(Self {
            inverse: linalg::inverse(&b)?,
            normalization: gram_normalization(&b, inner_product)?,
            sign_flip,
        })
    }

    pub fn rank(&self) -> usize {
        self.inverse.len()
    }

    /// Rewrites an integrand and its direction in basis coordinates.
    fn to_basis(&self, term: &ResidueTerm) -> Result<ResidueTerm> {
        let r = self.rank();
        let f = &term.integrand;
        if f.nvars() != r || term.epsilon.len() != r {
            return Err(Error::VarCountMismatch { expected: r, found: f.nvars().max(term.epsilon.len()) });
        }
        let images: Vec<MultiPoly> = self
            .inverse
            .iter()
            .map(|row| LinearForm::new(row.clone()).to_poly())
            .collect();
        let numerator = selected_component(f, r).substitute(&images)?;
        let denominator = f.denominator().iter().map(|(form, k)| (form.pull_back(&self.inverse), *k)).collect();
        let epsilon = LinearForm::new(term.epsilon.clone()).pull_back(&self.inverse).coeffs().to_vec();
        Ok(ResidueTerm { integrand: RationalFn::new(numerator, denominator)?, epsilon })
    }
}

/// Only the homogeneous part of total degree `-r` can contribute.
fn selected_component(f: &RationalFn, r: usize) -> MultiPoly {
    let d = i64::from(f.denominator_degree()) - r as i64;
    if d < 0 {
        MultiPoly::zero(f.nvars())
    } else {
        f.numerator().component(d as u32)
    }
}

/// One `Res⁺` step in the first variable, splitting the term per pole.
fn step(term: &ResidueTerm) -> Result<Vec<ResidueTerm>> {
    let f = &term.integrand;
    if term.epsilon[0].is_negative() || f.is_zero() {
        return Ok(Vec::new());
    }
    let rest = &term.epsilon[1..];
    poles(f, 0)?
        .into_iter()
        .map(|p| {
            let integrand = residue_at_pole(f, 0, &p)?;
            let epsilon = rest.iter().zip(p.coeffs()).map(|(e, c)| e + &term.epsilon[0] * c).collect();
            Ok(ResidueTerm { integrand, epsilon })
        })
        .collect()
}

/// `JKRes` of a sum of terms, each with its own direction `ε`.
pub fn jk_residue_terms(terms: &[ResidueTerm], cone: &ConeChoice, frame: &ResidueFrame) -> Result<ExactRational> {
    for t in terms {
        cone.validate(t.integrand.denominator().iter().map(|(f, _)| f))?;
    }
    let r = frame.rank();
    let mut live: Vec<ResidueTerm> = terms.iter().map(|t| frame.to_basis(t)).collect::<Result<_>>()?;
    live.retain(|t| !t.integrand.is_zero());
    for _ in 0..r {
        let mut next = Vec::new();
        for t in &live {
            next.extend(step(t)?.into_iter().filter(|t| !t.integrand.is_zero()));
        }
        live = next;
    }
    let mut total = ExactRational::zero();
    for t in live {
        let f = &t.integrand;
        if !f.denominator().is_empty() || !f.numerator().is_constant() {
            return Err(Error::NonScalarResidue);
        }
        total += f.numerator().constant_term();
    }
    if frame.sign_flip && r % 2 == 1 {
        total = -total;
    }
    Ok(total / &frame.normalization)
}

pub fn jk_residue(p: &ResidueProblem) -> Result<ExactRational> {
    let frame = ResidueFrame::new(&p.cone, &p.basis, &p.inner_product, p.sign_flip)?;
    let epsilon = p.epsilon_direction.clone().unwrap_or_else(|| p.cone.xi.clone());
    jk_residue_terms(&[ResidueTerm { integrand: p.integrand.clone(), epsilon }], &p.cone, &frame)
}

/// Iterated residue at zero in the order `z_1, …, z_r`.
pub fn iterated_residue_at_zero(f: &RationalFn) -> Result<ExactRational> {
    let mut g = f.clone();
    while g.nvars() > 0 {
        g = residue_at_zero(&g, 0)?;
    }
    if !g.denominator().is_empty() {
        return Err(Error::NonScalarResidue);
    }
    Ok(g.numerator().constant_term())
}

/// Extracts `z^k` coefficients of a one-variable Laurent polynomial
/// `numerator / z^shift`, used by tests and diagnostics.
pub fn laurent_coefficient(numerator: &MultiPoly, shift: u32, exponent: i64) -> ExactRational {
    let e = exponent + i64::from(shift);
    if e < 0 {
        return ExactRational::zero();
    }
    numerator.coefficient_of(&Monomial(vec![e as u32]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio};

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn scalar(f: &RationalFn) -> ExactRational {
        assert!(f.denominator().is_empty());
        f.numerator().constant_term()
    }

    #[test]
    fn residue_at_zero_examples() {
        let x = LinearForm::from_ints(&[1]);
        let f = RationalFn::new(MultiPoly::one(1), vec![(x.clone(), 1)]).unwrap();
        assert_eq!(scalar(&residue_at_zero(&f, 0).unwrap()), rat(1));
        let f = RationalFn::new(&z(1, 0) + &MultiPoly::constant(1, rat(2)), vec![(x, 2)]).unwrap();
        assert_eq!(scalar(&residue_at_zero(&f, 0).unwrap()), rat(1));
        let f = RationalFn::from_poly(z(1, 0).pow(2));
        assert!(residue_at_zero(&f, 0).unwrap().is_zero());
    }

    #[test]
    fn res_plus_examples() {
        let f = RationalFn::new(MultiPoly::one(1), vec![(LinearForm::from_ints(&[1]), 1)]).unwrap();
        assert_eq!(scalar(&res_plus(&f, 0, &rat(1)).unwrap()), rat(1));
        assert_eq!(scalar(&res_plus(&f, 0, &rat(0)).unwrap()), rat(1));
        assert!(res_plus(&f, 0, &rat(-1)).unwrap().is_zero());
        assert!(res_plus(&RationalFn::from_poly(z(1, 0)), 0, &rat(1)).unwrap().is_zero());
    }

    #[test]
    fn finite_poles_sum_to_infinity_coefficient() {
        // residues of 1/((z-w)(z+2w)) cancel; z/((z-w)(z+2w)) ~ 1/z at infinity
        let x = LinearForm::new(vec![rat(1), rat(-1)]);
        let y = LinearForm::new(vec![rat(1), rat(2)]);
        let f = RationalFn::new(MultiPoly::one(2), vec![(x.clone(), 1), (y.clone(), 1)]).unwrap();
        assert!(coefficient_at_infinity(&f, 0).unwrap().is_zero());
        let g = RationalFn::new(z(2, 0), vec![(x, 1), (y, 1)]).unwrap();
        let c = coefficient_at_infinity(&g, 0).unwrap();
        assert_eq!(c.numerator(), &c.denominator_poly());
    }

    #[test]
    fn double_pole_with_parameter() {
        // 1/(z^2 (z + w)) at z = 0: d/dz (z+w)^{-1} at 0 = -1/w^2
        let f = RationalFn::new(
            MultiPoly::one(2),
            vec![(LinearForm::from_ints(&[1, 0]), 2), (LinearForm::from_ints(&[1, 1]), 1)],
        )
        .unwrap();
        let r = residue_at_zero(&f, 0).unwrap();
        assert_eq!(r, RationalFn::new(MultiPoly::constant(1, rat(-1)), vec![(LinearForm::from_ints(&[1]), 2)]).unwrap());
    }

    #[test]
    fn projective_space_calibration() {
        for n in 1..=8u32 {
            let f = RationalFn::new(z(1, 0).pow(n - 1), vec![(LinearForm::from_ints(&[1]), n)]).unwrap();
            let p = ResidueProblem::new(f, ConeChoice::new(vec![rat(1)]));
            assert_eq!(jk_residue(&p).unwrap(), rat(1));
        }
    }

    #[test]
    fn sign_flip_flips_odd_rank() {
        let f = RationalFn::new(MultiPoly::one(1), vec![(LinearForm::from_ints(&[1]), 1)]).unwrap();
        let mut p = ResidueProblem::new(f, ConeChoice::new(vec![rat(1)]));
        p.sign_flip = true;
        assert_eq!(jk_residue(&p).unwrap(), rat(-1));
    }

    fn grassmannian_integrand(phi: &MultiPoly) -> RationalFn {
        let d = &z(2, 0) - &z(2, 1);
        let num = &(phi * &d) * &(-&d);
        RationalFn::new(num, vec![(LinearForm::from_ints(&[1, 0]), 4), (LinearForm::from_ints(&[0, 1]), 4)]).unwrap()
    }

    #[test]
    fn grassmannian_pieri() {
        let s = &z(2, 0) + &z(2, 1);
        let cone = ConeChoice::new(vec![rat(1), rat(2)]);
        let p = ResidueProblem::new(grassmannian_integrand(&s.pow(4)), cone.clone());
        assert_eq!(jk_residue(&p).unwrap() * ratio(1, 2), rat(2));
        let phi = &s.pow(2) * &(&z(2, 0) * &z(2, 1));
        let p = ResidueProblem::new(grassmannian_integrand(&phi), cone.clone());
        assert_eq!(jk_residue(&p).unwrap() * ratio(1, 2), rat(1));
        let p = ResidueProblem::new(grassmannian_integrand(&s.pow(3)), cone);
        assert_eq!(jk_residue(&p).unwrap(), rat(0));
    }

    #[test]
    fn explicit_basis_matches_default() {
        let s = &z(2, 0) + &z(2, 1);
        let cone = ConeChoice::new(vec![rat(1), rat(2)]);
        let mut p = ResidueProblem::new(grassmannian_integrand(&s.pow(4)), cone);
        let a = jk_residue(&p).unwrap();
        p.basis = vec![LinearForm::new(vec![ratio(1, 5), ratio(2, 5)]), LinearForm::from_ints(&[2, -1])];
        assert_eq!(jk_residue(&p).unwrap(), a);
    }

    #[test]
    fn invalid_cone_and_basis() {
        let f = RationalFn::new(MultiPoly::one(2), vec![(LinearForm::from_ints(&[1, -1]), 2)]).unwrap();
        let p = ResidueProblem::new(f.clone(), ConeChoice::new(vec![rat(1), rat(1)]));
        assert!(matches!(jk_residue(&p), Err(Error::InvalidCone { .. })));
        let mut p = ResidueProblem::new(f, ConeChoice::new(vec![rat(1), rat(0)]));
        p.basis = vec![LinearForm::from_ints(&[1, 0]), LinearForm::from_ints(&[1, 1])];
        assert!(matches!(jk_residue(&p), Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn irrational_gram_is_rejected() {
        let f = RationalFn::new(MultiPoly::one(1), vec![(LinearForm::from_ints(&[1]), 1)]).unwrap();
        let mut p = ResidueProblem::new(f, ConeChoice::new(vec![rat(1)]));
        p.inner_product = vec![vec![rat(2)]];
        assert!(matches!(jk_residue(&p), Err(Error::IrrationalNormalization(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn laurent(coeffs: &[i64]) -> MultiPoly {
            MultiPoly::from_terms(1, coeffs.iter().enumerate().map(|(e, &c)| (Monomial(vec![e as u32]), rat(c)))).unwrap()
        }

        proptest! {
            #[test]
            fn derivative_has_no_residue(coeffs in prop::collection::vec(-20i64..20, 1..8), shift in 0u32..6) {
                // f = N(z)/z^s, f' = (z N' - s N)/z^{s+1}
                let n = laurent(&coeffs);
                let num = &(&z(1, 0) * &n.derivative(0)) - &n.scale(&rat(i64::from(shift)));
                let f = RationalFn::new(num, vec![(LinearForm::from_ints(&[1]), shift + 1)]).unwrap();
                prop_assert!(residue_at_zero(&f, 0).unwrap().is_zero());
            }

            #[test]
            fn residue_at_zero_is_the_laurent_coefficient(coeffs in prop::collection::vec(-20i64..20, 1..8), shift in 0u32..6) {
                let n = laurent(&coeffs);
                let f = RationalFn::new(n.clone(), vec![(LinearForm::from_ints(&[1]), shift)]).unwrap();
                let r = residue_at_zero(&f, 0).unwrap();
                prop_assert_eq!(scalar(&r), laurent_coefficient(&n, shift, -1));
            }
        }
    }
}
