//! Mode dispatch. Each problem file becomes an `Outcome` or a `Failure`.

use ngit_core::betti::{self, StratumDatum};
use ngit_core::cohring::{self, GradedRing};
use ngit_core::exactnum::{format_pq, ExactRational, TruncSeries};
use ngit_core::groupdata::check_well_adapted;
use ngit_core::localize::{self, PairingProblem};
use ngit_core::momentdiag::{self, LinearActionSample};
use ngit_core::residue::{self, ResidueFrame, ResidueTerm};
use ngit_core::{Error, GroupData, QuotientDims, ResidueProblem};
use num_complex::Complex64;
use serde_json::{json, Map, Value as Json};

use crate::convert::{self, at, invalid, require, Conv, Invalid};
use crate::schema::{Mode, ProblemFile};

/// Tolerances for the advisory moment diagnostics.
const MOMENT_VALUE_TOL: f64 = 1e-10;
const FD_RESIDUAL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default)]
pub struct Flags {
    pub truncate: Option<usize>,
    pub sign_flip: bool,
    pub check_invariants: bool,
    pub check_moment: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Number(ExactRational),
    Series(TruncSeries),
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub mode: Mode,
    pub value: Value,
    /// Extra result fields, e.g. invariant dimensions.
    pub extra: Map<String, Json>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Failure {
    Invalid(Invalid),
    Compute(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Compute(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(i) => write!(f, "invalid input: {i}"),
            Failure::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

impl From<Invalid> for Failure {
    fn from(i: Invalid) -> Self {
        Failure::Invalid(i)
    }
}

/// Input-shaped core errors count as validation failures.
fn classify(e: Error) -> Failure {
    match e {
        Error::VarCountMismatch { .. }
        | Error::Shape(_)
        | Error::InvalidCone { .. }
        | Error::InvalidBasis(_)
        | Error::InvalidArgument(_)
        | Error::WeylOrderMismatch { .. }
        | Error::EmptyFixedPoints
        | Error::NoMinimalComponent
        | Error::InconsistentMinimality(_)
        | Error::NotWeylInvariant { .. }
        | Error::NotSymmetric(..)
        | Error::Inhomogeneous
        | Error::ZeroDenominator
        | Error::EmptyWeights
        | Error::TooFewWeights => Failure::Invalid(invalid("", e.to_string())),
        other => Failure::Compute(other.to_string()),
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn core<T>(r: ngit_core::Result<T>) -> Run<T> {
    r.map_err(classify)
}

impl Value {
    pub fn to_json(&self) -> Json {
        match self {
            Value::Number(q) => json!({ "kind": "number", "value": format_pq(q) }),
            Value::Series(s) => json!({
                "kind": "series",
                "coefficients": s.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "text": s.to_string(),
            }),
        }
    }
}

impl Outcome {
    fn new(mode: Mode, value: Value) -> Self {
        Self { mode, value, extra: Map::new(), checks: Vec::new(), warnings: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }

    pub fn result_json(&self) -> Json {
        let mut v = self.value.to_json();
        if let Json::Object(m) = &mut v {
            m.extend(self.extra.clone());
        }
        v
    }
}

fn number_of_vars(p: &ProblemFile) -> Option<usize> {
    p.variables.as_ref().map(Vec::len).or(p.group.as_ref().map(|g| g.rank)).or(p.k)
}

fn check_variable_count(p: &ProblemFile, rank: usize) -> Conv<()> {
    match &p.variables {
        Some(v) if v.len() != rank => {
            Err(invalid("variables", Error::VarCountMismatch { expected: rank, found: v.len() }.to_string()))
        }
        _ => Ok(()),
    }
}

fn series_bound(p: &ProblemFile, flags: &Flags, default: usize) -> usize {
    flags.truncate.or(p.options.truncate).unwrap_or(default)
}

fn series(v: &[crate::schema::Rat], bound: usize, path: &str) -> Conv<TruncSeries> {
    TruncSeries::from_rationals(&convert::rationals(v), bound).map_err(at(path))
}

pub fn run(p: &ProblemFile, flags: &Flags) -> Run<Outcome> {
    let mut out = match p.mode {
        Mode::PairReductive | Mode::PairUhat | Mode::PairNonreductive | Mode::PairAbelianized => pairing(p, flags)?,
        Mode::BettiUhat | Mode::BettiH => betti_mode(p, flags)?,
        Mode::Morse => morse(p, flags)?,
        Mode::Ring => ring(p, flags)?,
        Mode::Residue => residue_mode(p, flags)?,
        Mode::Grassmannian | Mode::Flag => schubert(p, flags)?,
    };
    if flags.check_moment {
        moment_diagnostics(p, &mut out)?;
    }
    if let Some(expected) = &p.expect {
        let got = out.result_json();
        if &got != expected {
            return Err(Failure::Compute(format!("result {got} differs from expect {expected}")));
        }
    }
    Ok(out)
}

fn pairing_problem(p: &ProblemFile, flags: &Flags) -> Conv<PairingProblem> {
    let g = convert::group(require(&p.group, "group")?)?;
    let r = g.rank;
    check_variable_count(p, r)?;
    let fixed = convert::fixed_points(&p.fixed_points, r)?;
    let class = convert::poly(require(&p.class, "class")?, r, "class")?;
    let cone = convert::cone(&p.cone, r)?;
    let mut problem = PairingProblem::new(g, fixed, class, cone);
    problem.basis = convert::basis(&p.basis, r)?;
    problem.normalization = p.options.normalization.as_ref().map(|q| q.0.clone());
    problem.generic_stabilizer = p.options.generic_stabilizer.unwrap_or(1);
    problem.sign_flip = flags.sign_flip || p.options.sign_flip;
    if p.mode != Mode::PairUhat {
        let forms = problem.fixed_points.iter().flat_map(|f| f.normal_weights.iter().map(|(w, _)| w));
        problem.cone.validate(forms).map_err(at("cone"))?;
    }
    Ok(problem)
}

fn pairing(p: &ProblemFile, flags: &Flags) -> Run<Outcome> {
    let problem = pairing_problem(p, flags)?;
    let value = match p.mode {
        Mode::PairReductive => core(localize::integrate_reductive(&problem))?,
        Mode::PairNonreductive => core(localize::integrate_nonreductive(&problem))?,
        Mode::PairUhat => core(localize::integrate_uhat(&problem))?,
        _ => abelianized(p, &problem)?,
    };
    let mut out = Outcome::new(p.mode, Value::Number(value.clone()));
    out.extra.insert("n_k".into(), json!(format_pq(&problem.n_k())));
    if flags.check_invariants {
        group_checks(p, &problem.group, &mut out)?;
        pairing_checks(p, &problem, &value, &mut out)?;
    }
    Ok(out)
}

fn abelianized(p: &ProblemFile, problem: &PairingProblem) -> Run<ExactRational> {
    let r = problem.group.rank;
    let lift = match &p.lift {
        Some(l) => convert::poly(l, r, "lift")?,
        None => problem.class_eta.clone(),
    };
    let e = problem.group.euler_class_nonreductive();
    core(localize::integrate_abelianized(
        |c| localize::torus_pairing(problem, c),
        &lift,
        &e,
        problem.group.weyl_order,
    ))
}

fn group_checks(p: &ProblemFile, g: &GroupData, out: &mut Outcome) -> Run<()> {
    let report = g.check_grading();
    if !g.unipotent_weights.is_empty() {
        let shown: Vec<String> = report.projections.iter().map(format_pq).collect();
        out.check("grading", report.graded, format!("<w, lambda> = [{}]", shown.join(", ")));
    }
    let elements = core(g.weyl_elements())?;
    out.check("weyl order", true, format!("{} elements", elements.len()));
    if let (Some(chi), Some(schema_group)) = (&g.chi_over_c, &p.group) {
        let weights: Vec<ExactRational> = if schema_group.fixed_weights.is_empty() {
            p.fixed_points.iter().map(|f| f.lambda_weight.0.clone()).collect()
        } else {
            convert::rationals(&schema_group.fixed_weights)
        };
        match check_well_adapted(&weights, chi) {
            Ok(v) => out.check(
                "well adapted",
                v.in_interval,
                format!(
                    "chi/c = {} in ({}, {}), margin {}",
                    format_pq(chi),
                    format_pq(&v.interval.0),
                    format_pq(&v.interval.1),
                    format_pq(&v.epsilon_margin)
                ),
            ),
            Err(e) => out.warnings.push(format!("well-adaptedness not checked: {e}")),
        }
    }
    Ok(())
}

/// Cross-method and basis-independence checks for the pairing modes.
fn pairing_checks(p: &ProblemFile, problem: &PairingProblem, value: &ExactRational, out: &mut Outcome) -> Run<()> {
    if p.mode == Mode::PairUhat {
        return Ok(());
    }
    let recompute = |q: &PairingProblem| match p.mode {
        Mode::PairReductive => core(localize::integrate_reductive(q)),
        Mode::PairNonreductive => core(localize::integrate_nonreductive(q)),
        _ => abelianized(p, q),
    };
    if !problem.basis.is_empty() {
        let mut q = problem.clone();
        q.basis.clear();
        let other = recompute(&q)?;
        out.check("basis independence", &other == value, format!("default basis gives {}", format_pq(&other)));
    }
    if problem.group.unipotent_weights.is_empty() && p.mode != Mode::PairReductive {
        let other = core(localize::integrate_reductive(problem))?;
        out.check("reductive agreement", &other == value, format!("reductive formula gives {}", format_pq(&other)));
    }
    if p.mode == Mode::PairReductive && p.lift.is_none() {
        let other = abelianized(p, problem)?;
        out.check("abelianized agreement", &other == value, format!("abelianized formula gives {}", format_pq(&other)));
    }
    Ok(())
}

fn dims(p: &ProblemFile) -> Conv<QuotientDims> {
    let d = require(&p.dims, "dims")?;
    Ok(QuotientDims::new(d.dim_x, d.dim_u, d.dim_zmin).with_residual(d.dim_residual))
}

fn betti_mode(p: &ProblemFile, flags: &Flags) -> Run<Outcome> {
    let d = dims(p)?;
    let bound = series_bound(p, flags, 2 * d.dim_x);
    let zmin = match &p.zmin_series {
        Some(s) => series(s, bound, "zmin_series")?,
        None => TruncSeries::one(bound),
    };
    let s = match p.mode {
        Mode::BettiUhat => core(betti::poincare_uhat(&zmin, &d))?,
        _ => core(betti::poincare_h(&zmin, &d))?,
    };
    let mut out = Outcome::new(p.mode, Value::Series(s.clone()));
    let fibre = d.fibre_dimension() - if p.mode == Mode::BettiH { d.dim_residual as i64 } else { 0 };
    out.extra.insert("fibre_dimension".into(), json!(fibre));
    if flags.check_invariants {
        if let Some(g) = &p.group {
            group_checks(p, &convert::group(g)?, &mut out)?;
        }
        let even = s.coeffs().iter().enumerate().all(|(i, c)| i % 2 == 0 || num_traits::Zero::is_zero(c));
        out.check("odd Betti numbers vanish", even || p.zmin_series.is_some(), s.to_string());
        if p.zmin_series.is_none() {
            let weights = vec![1u64; fibre.max(1) as usize];
            let wp = core(betti::weighted_projective_poincare(&weights, bound))?;
            out.check("weighted projective agreement", wp == s, wp.to_string());
        }
    }
    Ok(out)
}

fn morse(p: &ProblemFile, flags: &Flags) -> Run<Outcome> {
    let strata = require(&p.strata, "strata")?;
    let longest = strata.iter().map(|s| s.series.len() + 2 * s.codim).max().unwrap_or(1);
    let bound = series_bound(p, flags, longest.saturating_sub(1).max(p.total.as_ref().map_or(0, |t| t.len())));
    let data = strata
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(StratumDatum { codim: s.codim, series: series(&s.series, bound, &format!("strata[{i}].series"))? })
        })
        .collect::<Conv<Vec<_>>>()?;
    let sum = betti::morse_assemble(&data, bound);
    let mut out = Outcome::new(p.mode, Value::Series(sum.clone()));
    if let Some(total) = &p.total {
        let total = series(total, bound, "total")?;
        let report = core(betti::check_perfect(&total, &sum))?;
        out.extra.insert("perfect".into(), json!(report.perfect));
        out.extra.insert("remainder".into(), json!(report.remainder.to_string()));
        if let Some((i, c)) = &report.violation {
            out.extra.insert("violation".into(), json!({ "exponent": i, "coefficient": c.to_string() }));
        }
        if flags.check_invariants {
            out.check("Morse inequalities", report.violation.is_none(), format!("R(t) = {}", report.remainder));
        }
    }
    Ok(out)
}

fn ring(p: &ProblemFile, flags: &Flags) -> Run<Outcome> {
    let pres = convert::ring(require(&p.ring, "ring")?)?;
    let group = p.group.as_ref().map(convert::group).transpose()?;
    let weyl = group.as_ref().map(|g| g.weyl_generators.clone()).unwrap_or_default();
    let ring = core(GradedRing::new(&pres, &weyl))?;
    let (value, extra) = match &group {
        Some(g) => {
            let b = core(cohring::quotient_presentation_betti(&ring, g))?;
            let mut m = Map::new();
            m.insert("invariant_dims".into(), json!(b.invariant_dims));
            m.insert("annihilator_dims".into(), json!(b.annihilator_dims));
            (b.series, m)
        }
        None => {
            let d = ring.dims().to_vec();
            let bound = 2 * ring.top_degree();
            let coeffs: Vec<i64> = (0..=bound).map(|k| if k % 2 == 1 { 0 } else { d[k / 2] as i64 }).collect();
            (TruncSeries::from_coeffs(coeffs, bound), Map::new())
        }
    };
    let mut out = Outcome::new(p.mode, Value::Series(value.clone()));
    out.extra.insert("dims".into(), json!(ring.dims()));
    out.extra.extend(extra);
    if flags.check_invariants {
        let top = ring.top_degree();
        let palindromic = (0..=top).all(|d| ring.dim(d) == ring.dim(top - d));
        out.check("Poincare duality of the ring", palindromic, format!("dims {:?}", ring.dims()));
        let nonneg = value.first_negative().is_none();
        out.check("nonnegative series", nonneg, value.to_string());
    }
    Ok(out)
}

fn residue_mode(p: &ProblemFile, flags: &Flags) -> Run<Outcome> {
    let n = number_of_vars(p).or(p.cone.as_ref().map(Vec::len)).ok_or_else(|| invalid("cone", "missing field"))?;
    let integrand = require(&p.integrand, "integrand")?;
    let f = convert::rational_fn(&integrand.numerator, &integrand.denominator, n, "integrand.numerator", "integrand.denominator")?;
    let cone = convert::cone(&p.cone, n)?;
    cone.validate(f.denominator().iter().map(|(w, _)| w)).map_err(at("cone"))?;
    let mut problem = ResidueProblem::new(f, cone);
    problem.basis = convert::basis(&p.basis, n)?;
    if let Some(eps) = &p.epsilon {
        problem.epsilon_direction = Some(convert::vector(eps, n, "epsilon")?);
    }
    if let Some(ip) = p.group.as_ref().and_then(|g| g.inner_product.as_ref()) {
        problem.inner_product = convert::matrix(ip, n, n, "group.inner_product")?;
    }
    problem.sign_flip = flags.sign_flip || p.options.sign_flip;
    let value = core(residue::jk_residue(&problem))?;
    let mut out = Outcome::new(p.mode, Value::Number(value.clone()));
    if flags.check_invariants {
        if !problem.basis.is_empty() {
            let mut q = problem.clone();
            q.basis.clear();
            let other = core(residue::jk_residue(&q))?;
            out.check("basis independence", other == value, format!("default basis gives {}", format_pq(&other)));
        }
        let doubled = problem.integrand.scale(&ExactRational::from_integer(2.into()));
        let frame = core(ResidueFrame::new(&problem.cone, &problem.basis, &problem.inner_product, problem.sign_flip))?;
        let eps = problem.epsilon_direction.clone().unwrap_or_else(|| problem.cone.xi.clone());
        let terms = [
            ResidueTerm { integrand: problem.integrand.clone(), epsilon: eps.clone() },
            ResidueTerm { integrand: problem.integrand.clone(), epsilon: eps.clone() },
        ];
        let split = core(residue::jk_residue_terms(&terms, &problem.cone, &frame))?;
        let whole = core(residue::jk_residue_terms(&[ResidueTerm { integrand: doubled, epsilon: eps }], &problem.cone, &frame))?;
        out.check("additivity", split == whole && split == &value * ExactRational::from_integer(2.into()), format_pq(&split));
    }
    Ok(out)
}

fn schubert(p: &ProblemFile, flags: &Flags) -> Run<Outcome> {
    let k = *require(&p.k, "k")?;
    let n = *require(&p.n, "n")?;
    check_variable_count(p, k)?;
    let phi = convert::poly(require(&p.phi, "phi")?, k, "phi")?;
    let value = match p.mode {
        Mode::Grassmannian => core(localize::grassmannian_pairing(k, n, &phi))?,
        _ => core(localize::flag_pairing(k, n, &phi))?,
    };
    let mut out = Outcome::new(p.mode, Value::Number(value.clone()));
    if flags.check_invariants && p.mode == Mode::Grassmannian {
        let problem = localize::grassmannian_problem(k, n, phi.clone());
        let jk = core(localize::integrate_reductive(&problem))?;
        out.check("residue at origin vs JK localization", jk == value, format_pq(&jk));
        let e = problem.group.root_product();
        let abel = core(localize::integrate_abelianized(|c| localize::torus_pairing(&problem, c), &phi, &e, problem.group.weyl_order))?;
        out.check("abelianized agreement", abel == value, format_pq(&abel));
    }
    if flags.check_invariants && p.mode == Mode::Flag {
        let deg = phi.homogeneous_degree();
        let expected = (k * (n - 1) - k * (k - 1) / 2) as u32;
        let ok = deg.map_or(phi.is_zero(), |d| d == expected || value == ExactRational::from_integer(0.into()));
        out.check("degree", ok, format!("deg phi = {deg:?}, dimension {expected}"));
    }
    Ok(out)
}

fn complex(c: &[f64; 2]) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn moment_diagnostics(p: &ProblemFile, out: &mut Outcome) -> Run<()> {
    for (i, s) in p.moment_samples.iter().enumerate() {
        let path = format!("moment_samples[{i}]");
        let sample = LinearActionSample {
            point: s.point.iter().map(complex).collect(),
            lie_element: s.matrix.iter().map(|r| r.iter().map(complex).collect()).collect(),
            shift: s.shift,
        };
        let value = momentdiag::moment_value(&sample).map_err(at(&path))?;
        if let Some(name) = &s.fixed_point {
            let fp = p
                .fixed_points
                .iter()
                .find(|f| &f.name == name)
                .ok_or_else(|| invalid(format!("{path}.fixed_point"), format!("no fixed point named {name:?}")))?;
            let declared = num_traits::ToPrimitive::to_f64(&fp.lambda_weight.0).unwrap_or(f64::NAN);
            let err = momentdiag::relative_error(value, declared);
            if err > MOMENT_VALUE_TOL {
                out.warnings.push(format!("{path}: moment value {value} disagrees with lambda_weight {declared} ({err:e})"));
            }
        }
        if let Some(t) = &s.tangent {
            let tangent: Vec<Complex64> = t.iter().map(complex).collect();
            let r = momentdiag::moment_derivative_check(&sample, &tangent).map_err(at(format!("{path}.tangent")))?;
            if r > FD_RESIDUAL_TOL {
                out.warnings.push(format!("{path}: finite-difference residual {r:e}"));
            }
        }
    }
    Ok(())
}
