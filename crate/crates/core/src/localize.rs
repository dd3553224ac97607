//! Intersection pairings on quotients by localisation to torus fixed points.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, ExactRational};
use crate::groupdata::{ConeChoice, GroupData};
use crate::linalg;
use crate::polyring::{LinearForm, MultiPoly, RationalFn, WeylElement};
use crate::residue::{self, ResidueFrame, ResidueTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointComponent {
    pub name: String,
    /// `i_F^* η`-independent part of the contribution; `1` for isolated points,
    /// the already-integrated fibre class otherwise.
    pub restriction: RationalFn,
    /// Torus weights on the normal bundle with multiplicities.
    pub normal_weights: Vec<(LinearForm, u32)>,
    pub lambda_weight: ExactRational,
    pub is_min: bool,
    /// Torus moment-map image of `F`, shifted by the linearisation. The
    /// residue direction at `F` is `-moment`; when absent, `ε = Mξ`.
    pub moment: Option<Vec<ExactRational>>,
}

impl FixedPointComponent {
    /// An isolated fixed point with trivial restriction.
    pub fn point(name: impl Into<String>, normal_weights: Vec<(LinearForm, u32)>, lambda_weight: ExactRational) -> Self {
        let r = normal_weights.first().map_or(0, |(f, _)| f.nvars());
        Self {
            name: name.into(),
            restriction: RationalFn::from_poly(MultiPoly::one(r)),
            normal_weights,
            lambda_weight,
            is_min: false,
            moment: None,
        }
    }

    pub fn with_moment(mut self, moment: Vec<ExactRational>) -> Self {
        self.moment = Some(moment);
        self
    }

    pub fn with_restriction(mut self, restriction: RationalFn) -> Self {
        self.restriction = restriction;
        self
    }

    pub fn minimal(mut self, is_min: bool) -> Self {
        self.is_min = is_min;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingProblem {
    pub group: GroupData,
    pub fixed_points: Vec<FixedPointComponent>,
    pub class_eta: MultiPoly,
    pub cone: ConeChoice,
    /// `n_K`; defaults to `generic_stabilizer / |W|`.
    pub normalization: Option<ExactRational>,
    pub generic_stabilizer: u64,
    /// Residue coordinates; empty means the default basis adapted to `ξ`.
    pub basis: Vec<LinearForm>,
    pub sign_flip: bool,
}

impl PairingProblem {
    pub fn new(group: GroupData, fixed_points: Vec<FixedPointComponent>, class_eta: MultiPoly, cone: ConeChoice) -> Self {
        Self {
            group,
            fixed_points,
            class_eta,
            cone,
            normalization: None,
            generic_stabilizer: 1,
            basis: Vec::new(),
            sign_flip: false,
        }
    }

    pub fn n_k(&self) -> ExactRational {
        self.normalization.clone().unwrap_or_else(|| {
            ExactRational::new(self.generic_stabilizer.into(), (self.group.weyl_order as u64).into())
        })
    }

    fn validate(&self) -> Result<()> {
        self.group.validate()?;
        let r = self.group.rank;
        if self.fixed_points.is_empty() {
            return Err(Error::EmptyFixedPoints);
        }
        if self.class_eta.nvars() != r {
            return Err(Error::VarCountMismatch { expected: r, found: self.class_eta.nvars() });
        }
        if self.cone.xi.len() != r {
            return Err(Error::VarCountMismatch { expected: r, found: self.cone.xi.len() });
        }
        for f in &self.fixed_points {
            if f.restriction.nvars() != r {
                return Err(Error::VarCountMismatch { expected: r, found: f.restriction.nvars() });
            }
            for (w, _) in &f.normal_weights {
                if w.nvars() != r {
                    return Err(Error::VarCountMismatch { expected: r, found: w.nvars() });
                }
                if w.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
            }
            if let Some(m) = &f.moment {
                if m.len() != r {
                    return Err(Error::VarCountMismatch { expected: r, found: m.len() });
                }
            }
        }
        Ok(())
    }

    fn epsilon(&self, f: &FixedPointComponent) -> Vec<ExactRational> {
        match &f.moment {
            Some(m) => m.iter().map(|x| -x.clone()).collect(),
            None => linalg::mat_vec(&self.group.inner_product, &self.cone.xi),
        }
    }

    /// `factor · restriction_F / Euler_F` for every fixed component.
    fn terms(&self, factor: &MultiPoly) -> Result<Vec<ResidueTerm>> {
        self.fixed_points
            .iter()
            .map(|f| {
                let integrand = f.restriction.mul_poly(factor).div_factors(&f.normal_weights)?;
                Ok(ResidueTerm { integrand, epsilon: self.epsilon(f) })
            })
            .collect()
    }

    fn jk_sum(&self, terms: &[ResidueTerm]) -> Result<ExactRational> {
        let frame = ResidueFrame::new(&self.cone, &self.basis, &self.group.inner_product, self.sign_flip)?;
        residue::jk_residue_terms(terms, &self.cone, &frame)
    }

    fn require_weyl_invariant(&self) -> Result<()> {
        match self.group.weyl_witness(&self.class_eta)? {
            Some(generator) => Err(Error::NotWeylInvariant { generator }),
            None => Ok(()),
        }
    }
}

/// `n_K · JKRes(∏_{α∈Δ} α · Σ_F i_F^*η / Euler_F)`.
pub fn integrate_reductive(p: &PairingProblem) -> Result<ExactRational> {
    p.validate()?;
    if !p.group.unipotent_weights.is_empty() {
        return Err(Error::InvalidArgument("reductive pairing requires an empty unipotent weight list".into()));
    }
    let factor = &p.group.root_product() * &p.class_eta;
    Ok(p.n_k() * p.jk_sum(&p.terms(&factor)?)?)
}

/// `n_K · JKRes(Σ_F i_F^*η · Euler(V_{u ⊕ r⁻ ⊕ r⁺}) / Euler_F)`.
pub fn integrate_nonreductive(p: &PairingProblem) -> Result<ExactRational> {
    p.validate()?;
    p.require_weyl_invariant()?;
    let factor = &p.group.euler_class_nonreductive() * &p.class_eta;
    Ok(p.n_k() * p.jk_sum(&p.terms(&factor)?)?)
}

/// Components with minimal `λ`-weight, after checking the `is_min` flags.
pub fn minimal_components(fixed_points: &[FixedPointComponent]) -> Result<Vec<&FixedPointComponent>> {
    let min = fixed_points.iter().map(|f| &f.lambda_weight).min().ok_or(Error::EmptyFixedPoints)?;
    if !fixed_points.iter().any(|f| f.is_min) {
        return Err(Error::NoMinimalComponent);
    }
    for f in fixed_points {
        if f.is_min != (&f.lambda_weight == min) {
            return Err(Error::InconsistentMinimality(f.name.clone()));
        }
    }
    Ok(fixed_points.iter().filter(|f| f.is_min).collect())
}

/// `n · Res⁺_{z=∞} Σ_{F ⊂ Z_min} i_F^*(η · Euler(V_u)) / Euler_F` for the
/// grading circle.
pub fn integrate_uhat(p: &PairingProblem) -> Result<ExactRational> {
    p.validate()?;
    if p.group.rank != 1 {
        return Err(Error::InvalidArgument(format!("Û pairing needs a rank-1 torus, got rank {}", p.group.rank)));
    }
    let factor = &p.group.unipotent_euler_class() * &p.class_eta;
    let mut total = RationalFn::from_poly(MultiPoly::zero(1));
    for f in minimal_components(&p.fixed_points)? {
        total = total.add(&f.restriction.mul_poly(&factor).div_factors(&f.normal_weights)?)?;
    }
    let r = residue::res_plus(&total, 0, &ExactRational::one())?;
    if !r.denominator().is_empty() || !r.numerator().is_constant() {
        return Err(Error::NonScalarResidue);
    }
    let mut value = r.numerator().constant_term();
    if p.sign_flip {
        value = -value;
    }
    Ok(p.n_k() * value)
}

/// `(1/|W|) · torus_pairing(ã · e)`.
pub fn integrate_abelianized<F>(torus_pairing: F, a_tilde: &MultiPoly, e: &MultiPoly, weyl_order: usize) -> Result<ExactRational>
where
    F: Fn(&MultiPoly) -> Result<ExactRational>,
{
    if weyl_order == 0 {
        return Err(Error::InvalidArgument("Weyl group order must be at least 1".into()));
    }
    let product = a_tilde.checked_binop(e, crate::polyring::PolyOp::Mul)?;
    Ok(torus_pairing(&product)? / ExactRational::from_integer((weyl_order as u64).into()))
}

/// The torus-quotient pairing of the problem's fixed-point data, with no
/// Euler correction and `n = 1`.
pub fn torus_pairing(p: &PairingProblem, class: &MultiPoly) -> Result<ExactRational> {
    p.validate()?;
    let terms = p.terms(class)?;
    p.jk_sum(&terms)
}

fn check_kn(k: usize, n: usize) -> Result<()> {
    if k == 0 || n < k {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(())
}

fn residue_at_origin(k: usize, n: usize, numerator: MultiPoly) -> Result<ExactRational> {
    let den = (0..k).map(|i| (LinearForm::unit(k, i), n as u32)).collect();
    residue::iterated_residue_at_zero(&RationalFn::new(numerator, den)?)
}

/// `Res_{z=0} φ ∏_{i<j}(z_i - z_j) / ∏ z_i^n`.
pub fn flag_pairing(k: usize, n: usize, phi: &MultiPoly) -> Result<ExactRational> {
    check_kn(k, n)?;
    if phi.nvars() != k {
        return Err(Error::VarCountMismatch { expected: k, found: phi.nvars() });
    }
    let mut num = phi.clone();
    for i in 0..k {
        for j in i + 1..k {
            num = &num * &(&MultiPoly::var(k, i) - &MultiPoly::var(k, j));
        }
    }
    residue_at_origin(k, n, num)
}

/// First adjacent transposition that moves `p`.
pub fn symmetry_witness(p: &MultiPoly) -> Result<Option<(usize, usize)>> {
    let k = p.nvars();
    for i in 0..k.saturating_sub(1) {
        if &crate::polyring::weyl_act(p, &WeylElement::transposition(k, i, i + 1))? != p {
            return Ok(Some((i, i + 1)));
        }
    }
    Ok(None)
}

/// `(1/k!) Res_{z=0} φ ∏_{i≠j}(z_i - z_j) / ∏ z_i^n`.
pub fn grassmannian_pairing(k: usize, n: usize, phi: &MultiPoly) -> Result<ExactRational> {
    check_kn(k, n)?;
    if phi.nvars() != k {
        return Err(Error::VarCountMismatch { expected: k, found: phi.nvars() });
    }
    if let Some((i, j)) = symmetry_witness(phi)? {
        return Err(Error::NotSymmetric(i, j));
    }
    let mut num = phi.clone();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                num = &num * &(&MultiPoly::var(k, i) - &MultiPoly::var(k, j));
            }
        }
    }
    Ok(residue_at_origin(k, n, num)? / ExactRational::from_integer(factorial(k as u32)))
}

/// Fixed-point data of `Hom(C^k, C^n)` at the origin, as used for
/// `Gr_k(C^n)` with `GL(k)`: one point with Euler class `∏ z_i^n` and
/// moment `(-1, …, -1)`.
pub fn grassmannian_problem(k: usize, n: usize, class_eta: MultiPoly) -> PairingProblem {
    let group = GroupData::general_linear(k);
    let weights = (0..k).map(|i| (LinearForm::unit(k, i), n as u32)).collect();
    let origin = FixedPointComponent::point("origin", weights, ExactRational::zero())
        .minimal(true)
        .with_moment(vec![-ExactRational::one(); k]);
    let xi = (1..=k as i64).map(|i| ExactRational::from_integer(i.into())).collect();
    PairingProblem::new(group, vec![origin], class_eta, ConeChoice::new(xi))
}

/// Sign relating `∏_{α∈Δ} α` to `e²`.
pub fn root_sign(group: &GroupData) -> ExactRational {
    if group.positive_roots.len() % 2 == 0 {
        ExactRational::one()
    } else {
        -ExactRational::one()
    }
}
