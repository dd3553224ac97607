//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ngit-core --test acceptance -- --nocapture`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ngit_core::betti::{equivariant_circle_series, morse_assemble, poincare_h, poincare_uhat};
use ngit_core::cohring::{quotient_presentation_betti, QuotientRing};
use ngit_core::exactnum::{rat, ratio};
use ngit_core::localize::{
    flag_pairing, grassmannian_pairing, grassmannian_problem, integrate_abelianized, integrate_nonreductive,
    integrate_reductive, integrate_uhat, torus_pairing,
};
use ngit_core::momentdiag::{
    conjugate, diagonal_action, moment_derivative_check_with_step, moment_value, orthonormalize, relative_error,
    tangent_projection, LinearActionSample,
};
use ngit_core::residue::{residue_at_zero, ResidueProblem};
use ngit_core::*;

/// Relative error allowed between a numeric moment value and its weight.
const MOMENT_VALUE_TOL: f64 = 1e-10;
/// Finite-difference residual bound and step.
const FD_RESIDUAL_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const RESIDUE_SAMPLES: usize = 100;
const MOMENT_SAMPLES: usize = 20;
const SEED: u64 = 0x5eed_2024;

// ---- independent oracles -------------------------------------------------

/// Dense integer polynomials in two variables, `coeffs[(a, b)]` of `x^a y^b`.
type Dense2 = BTreeMap<(u32, u32), i64>;

fn dense_mul(p: &Dense2, q: &Dense2) -> Dense2 {
    let mut out = Dense2::new();
    for (&(a, b), &c) in p {
        for (&(d, e), &f) in q {
            *out.entry((a + d, b + e)).or_insert(0) += c * f;
        }
    }
    out
}

fn dense(terms: &[(i64, u32, u32)]) -> Dense2 {
    terms.iter().map(|&(c, a, b)| ((a, b), c)).collect()
}

fn dense_pow(p: &Dense2, k: u32) -> Dense2 {
    (0..k).fold(dense(&[(1, 0, 0)]), |acc, _| dense_mul(&acc, p))
}

/// `(1/2) [x^{n-1} y^{n-1}] φ · (-(x - y)^2)`, the Gr(2, n) pairing by
/// coefficient extraction.
fn pieri_oracle(phi: &Dense2, n: u32) -> ExactRational {
    let minus_sq = dense(&[(-1, 2, 0), (2, 1, 1), (-1, 0, 2)]);
    let c = dense_mul(phi, &minus_sq).get(&(n - 1, n - 1)).copied().unwrap_or(0);
    ratio(c, 2)
}

/// Number of standard Young tableaux of a `k x m` rectangle, by hooks;
/// equals `∫ σ_1^{km}` over `Gr(k, k + m)`.
fn rectangle_tableaux(k: u64, m: u64) -> u64 {
    let mut hooks = 1u128;
    for i in 0..k {
        for j in 0..m {
            hooks *= u128::from((k - i) + (m - j) - 1);
        }
    }
    let fact: u128 = (1..=u128::from(k * m)).product();
    (fact / hooks) as u64
}

/// Gaussian binomial `[n choose k]_q` coefficients.
fn gaussian_binomial(n: usize, k: usize) -> Vec<i64> {
    // count partitions in a k x (n - k) box by size
    let m = n - k;
    fn rec(parts_left: usize, max_part: usize, size: usize, out: &mut Vec<i64>) {
        out[size] += 1;
        if parts_left == 0 {
            return;
        }
        for p in 1..=max_part {
            rec(parts_left - 1, p, size + p, out);
        }
    }
    let mut out = vec![0i64; k * m + 1];
    rec(k, m, 0, &mut out);
    out
}

/// Orbit counts of `S_2` on monomials `x^a y^b`, `a, b < n`, per degree.
fn swap_orbit_counts(n: u32) -> Vec<usize> {
    (0..=2 * (n - 1))
        .map(|d| (0..n).filter(|&a| d >= a && d - a < n && a <= d - a).count())
        .collect()
}

// ---- helpers -------------------------------------------------------------

fn z(n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(n, i)
}

fn from_dense(p: &Dense2) -> MultiPoly {
    MultiPoly::from_terms(2, p.iter().map(|(&(a, b), &c)| (Monomial(vec![a, b]), rat(c)))).unwrap()
}

fn truncated_ring(k: usize, n: u32) -> GradedRingPresentation {
    GradedRingPresentation::Quotient(QuotientRing { nvars: k, relations: (0..k).map(|i| z(k, i).pow(n)).collect(), top_degree: None })
}

fn series_of(coeffs: &[i64], bound: usize) -> TruncSeries {
    TruncSeries::from_coeffs(coeffs.iter().copied(), bound)
}

fn random_rational(rng: &mut ChaCha8Rng) -> ExactRational {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

/// Random homogeneous polynomial of the given degree in `nvars` variables.
fn random_homogeneous(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> MultiPoly {
    let monos = polyring::monomials_of_degree(nvars, degree);
    MultiPoly::from_terms(nvars, monos.into_iter().map(|m| (m, random_rational(rng)))).unwrap()
}

/// A random nonzero form not vanishing on `xi`.
fn random_form(rng: &mut ChaCha8Rng, xi: &[ExactRational]) -> LinearForm {
    loop {
        let f = LinearForm::from_ints(&(0..xi.len()).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>());
        if !f.is_zero() && !f.eval(xi).is_zero() {
            return f;
        }
    }
}

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn record(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        self.lines.push((ok, format!("{tag} [{id:>2}] {name}: {detail}")));
    }
}

// ---- criteria --------------------------------------------------------------

fn criterion_grassmannian(r: &mut Report) {
    let s = dense(&[(1, 1, 0), (1, 0, 1)]);
    let phi_a = dense_pow(&s, 4);
    let phi_b = dense_mul(&dense_pow(&s, 2), &dense(&[(1, 1, 1)]));
    let oracle_a = pieri_oracle(&phi_a, 4);
    let oracle_b = pieri_oracle(&phi_b, 4);
    let tableaux = rat(rectangle_tableaux(2, 2) as i64);
    let got_a = grassmannian_pairing(2, 4, &from_dense(&phi_a)).unwrap();
    let got_b = grassmannian_pairing(2, 4, &from_dense(&phi_b)).unwrap();
    let ok = got_a == rat(2) && got_b == rat(1) && got_a == oracle_a && got_a == tableaux && got_b == oracle_b;
    r.record(1, "Grassmannian pairings", ok, format!("σ1^4 = {got_a}, σ1^2σ2 = {got_b} (oracle {oracle_a}, {oracle_b})"));
}

fn criterion_projective(r: &mut Report) {
    let values: Vec<ExactRational> = (1..=8).map(|n| flag_pairing(1, n, &z(1, 0).pow(n as u32 - 1)).unwrap()).collect();
    let ok = values.iter().all(|v| *v == rat(1));
    let shown: Vec<String> = values.iter().map(ToString::to_string).collect();
    r.record(2, "projective-space calibration", ok, format!("n = 1..8 -> [{}]", shown.join(", ")));
}

fn criterion_flag(r: &mut Report) {
    // brute force: [x y] of (x - y) x
    let oracle = dense_mul(&dense(&[(1, 1, 0), (-1, 0, 1)]), &dense(&[(1, 1, 0)])).get(&(1, 1)).copied().unwrap_or(0);
    let got = flag_pairing(2, 2, &z(2, 0)).unwrap();
    r.record(3, "flag pairing", got == rat(-1) && got == rat(oracle), format!("flag_pairing(2,2,z1) = {got}, oracle {oracle}"));
}

fn criterion_section_chain(r: &mut Report) {
    let bound = 12;
    let one = TruncSeries::one(bound);
    let uhat = poincare_uhat(&one, &QuotientDims::new(6, 3, 0)).unwrap();
    let strata = [
        StratumDatum { codim: 1, series: series_of(&[1, 0, 1], bound) },
        StratumDatum { codim: 2, series: one.clone() },
    ];
    let unstable = morse_assemble(&strata, bound);
    let numerator = series_of(&[1, 0, 0, 0, 0, 0, -1], bound).series_geom_div(2).unwrap();
    let chain = equivariant_circle_series(&(&numerator - &unstable));
    let ok = uhat == series_of(&[1, 0, 1, 0, 1], bound)
        && unstable == series_of(&[0, 0, 1, 0, 2], bound)
        && chain == series_of(&[1, 0, 1], bound);
    r.record(4, "Betti chain", ok, format!("P(X//Û) = {uhat}; strata = {unstable}; quotient = {chain}"));
}

fn criterion_n_points(r: &mut Report) {
    let mut ok = true;
    let mut details = Vec::new();
    for n in 2..=6usize {
        let bound = 4 * n + 4;
        let one = TruncSeries::one(bound);
        let uhat = poincare_uhat(&one, &QuotientDims::new(2 * n + 2, 3, 0)).unwrap();
        let h = poincare_h(&one, &QuotientDims::new(2 * n + 2, 3, 0).with_residual(1)).unwrap();
        let want_uhat: Vec<i64> = (0..=4 * n - 4).map(|i| i64::from(i % 2 == 0)).collect();
        let want_h: Vec<i64> = (0..=4 * n - 6).map(|i| i64::from(i % 2 == 0)).collect();
        ok &= uhat == series_of(&want_uhat, bound) && h == series_of(&want_h, bound);
        details.push(format!("n={n}: deg {} / {}", uhat.degree().unwrap_or(0), h.degree().unwrap_or(0)));
    }
    r.record(5, "n-points family", ok, details.join(", "));
}

fn criterion_ring(r: &mut Report) {
    let swap = [WeylElement::transposition(2, 0, 1)];
    let ring = GradedRing::new(&truncated_ring(2, 3), &swap).unwrap();
    let b = quotient_presentation_betti(&ring, &GroupData::general_linear(2)).unwrap();
    let oracle_inv = swap_orbit_counts(3);
    let p2: Vec<i64> = gaussian_binomial(3, 2).iter().flat_map(|&c| [c, 0]).collect();
    let ok = b.invariant_dims == oracle_inv
        && b.invariant_dims == vec![1, 1, 2, 1, 1]
        && b.series == series_of(&p2, 8)
        && b.series.to_string() == "1 + t^2 + t^4";
    r.record(6, "ring-vs-series", ok, format!("invariants {:?}, series {}", b.invariant_dims, b.series));
}

fn criterion_cross_method(r: &mut Report) {
    let s = &z(2, 0) + &z(2, 1);
    let classes = [s.pow(4), &s.pow(2) * &(&z(2, 0) * &z(2, 1)), s.pow(3), (&z(2, 0).pow(2) + &z(2, 1).pow(2)).pow(2)];
    let mut ok = true;
    let mut values = Vec::new();
    for eta in classes {
        let p = grassmannian_problem(2, 4, eta.clone());
        let red = integrate_reductive(&p).unwrap();
        let e = p.group.root_product();
        let abel = integrate_abelianized(|c| torus_pairing(&p, c), &eta, &e, p.group.weyl_order).unwrap();
        let nonred = integrate_nonreductive(&p).unwrap();
        ok &= red == abel && red == nonred;
        values.push(format!("{red}/{abel}/{nonred}"));
    }
    r.record(7, "cross-method equality", ok, format!("reductive/abelianized/non-reductive = {}", values.join(", ")));
}

fn criterion_uhat(r: &mut Report) {
    let pts = vec![
        FixedPointComponent::point("p0", vec![(LinearForm::from_ints(&[1]), 1)], rat(0)).minimal(true),
        FixedPointComponent::point("p1", vec![(LinearForm::from_ints(&[-1]), 1)], rat(1)),
    ];
    let p = PairingProblem::new(GroupData::torus(1), pts, MultiPoly::one(1), ConeChoice::new(vec![rat(1)]));
    let got = integrate_uhat(&p).unwrap();
    r.record(8, "Û calibration", got == rat(1), format!("∫ 1 over the P^1 quotient = {got}"));
}

fn criterion_residue_properties(r: &mut Report, rng: &mut ChaCha8Rng) {
    let xi = vec![rat(1), rat(3)];
    let cone = ConeChoice::new(xi.clone());

    // linearity on shared denominators
    let mut linear = 0;
    for _ in 0..RESIDUE_SAMPLES {
        let forms: Vec<(LinearForm, u32)> = (0..rng.gen_range(2..=4)).map(|_| (random_form(rng, &xi), rng.gen_range(1..=2))).collect();
        let den: u32 = forms.iter().map(|(_, m)| m).sum();
        let f = random_homogeneous(rng, 2, den - 2);
        let g = random_homogeneous(rng, 2, den - 2);
        let (a, b) = (random_rational(rng), random_rational(rng));
        let jk = |num: MultiPoly| jk_residue(&ResidueProblem::new(RationalFn::new(num, forms.clone()).unwrap(), cone.clone())).unwrap();
        let combo = &f.scale(&a) + &g.scale(&b);
        if jk(combo) == a * jk(f) + b * jk(g) {
            linear += 1;
        }
    }

    // derivative annihilation in one variable
    let mut deriv = 0;
    for _ in 0..RESIDUE_SAMPLES {
        let shift = rng.gen_range(0..=6u32);
        let n = MultiPoly::from_terms(1, (0..rng.gen_range(1..=8u32)).map(|e| (Monomial(vec![e]), random_rational(rng)))).unwrap();
        let num = &(&z(1, 0) * &n.derivative(0)) - &n.scale(&rat(i64::from(shift)));
        let f = RationalFn::new(num, vec![(LinearForm::from_ints(&[1]), shift + 1)]).unwrap();
        if residue_at_zero(&f, 0).unwrap().is_zero() {
            deriv += 1;
        }
    }

    // degree selection
    let mut degree = 0;
    for _ in 0..RESIDUE_SAMPLES {
        let forms: Vec<(LinearForm, u32)> = (0..rng.gen_range(1..=4)).map(|_| (random_form(rng, &xi), rng.gen_range(1..=2))).collect();
        let den: i64 = forms.iter().map(|(_, m)| i64::from(*m)).sum();
        let d = loop {
            let d = rng.gen_range(0..=den + 2);
            if d - den != -2 {
                break d;
            }
        };
        let f = RationalFn::new(random_homogeneous(rng, 2, d as u32), forms).unwrap();
        if jk_residue(&ResidueProblem::new(f, cone.clone())).unwrap().is_zero() {
            degree += 1;
        }
    }

    // basis covariance on Grassmannian integrands
    let mut covariant = 0;
    let default = residue::default_basis(&xi).unwrap();
    for _ in 0..RESIDUE_SAMPLES {
        let n = rng.gen_range(2..=5u32);
        let phi = random_homogeneous(rng, 2, 2 * n - 4);
        let sym = &phi + &polyring::weyl_act(&phi, &WeylElement::transposition(2, 0, 1)).unwrap();
        let d = &z(2, 0) - &z(2, 1);
        let num = &sym * &(-&d.pow(2));
        let f = RationalFn::new(num, vec![(LinearForm::unit(2, 0), n), (LinearForm::unit(2, 1), n)]).unwrap();
        let mut p = ResidueProblem::new(f, cone.clone());
        let a = jk_residue(&p).unwrap();
        let c = random_rational(rng);
        let k = loop {
            let k = random_rational(rng);
            if !k.is_zero() {
                break k;
            }
        };
        p.basis = vec![default[0].add(&default[1].scale(&c)), default[1].scale(&k)];
        if jk_residue(&p).unwrap() == a {
            covariant += 1;
        }
    }
    let n = RESIDUE_SAMPLES;
    let ok = linear == n && deriv == n && degree == n && covariant == n;
    r.record(
        9,
        "residue properties",
        ok,
        format!("linearity {linear}/{n}, derivative {deriv}/{n}, degree {degree}/{n}, basis covariance {covariant}/{n}"),
    );
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Complex64>> {
    loop {
        let m: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| random_complex(rng)).collect()).collect();
        if let Ok(u) = orthonormalize(&m) {
            return u;
        }
    }
}

fn criterion_moment(r: &mut Report, rng: &mut ChaCha8Rng) {
    let mut worst_value = 0.0f64;
    let mut worst_fd = 0.0f64;
    for _ in 0..MOMENT_SAMPLES {
        let n = rng.gen_range(2..=5);
        let weights: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(-6..=6))).collect();
        let u = random_unitary(rng, n);
        let a = conjugate(&u, &diagonal_action(&weights));
        // fixed points of the conjugated action are the columns of U
        for j in 0..n {
            let col: Vec<Complex64> = (0..n).map(|i| u[i][j]).collect();
            let s = LinearActionSample { point: col, lie_element: a.clone(), shift: 0.0 };
            worst_value = worst_value.max(relative_error(moment_value(&s).unwrap(), weights[j]));
        }
        let x: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
        let norm = x.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        let x: Vec<Complex64> = x.iter().map(|c| c / norm).collect();
        let v: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
        let xi = tangent_projection(&x, &v);
        let s = LinearActionSample { point: x, lie_element: a, shift: 0.0 };
        worst_fd = worst_fd.max(moment_derivative_check_with_step(&s, &xi, FD_STEP).unwrap());
    }
    let ok = worst_value < MOMENT_VALUE_TOL && worst_fd < FD_RESIDUAL_TOL;
    r.record(
        10,
        "moment diagnostics",
        ok,
        format!("max weight error {worst_value:.2e} (< {MOMENT_VALUE_TOL:e}), max FD residual {worst_fd:.2e} (< {FD_RESIDUAL_TOL:e}) over {MOMENT_SAMPLES} samples"),
    );
}

#[test]
fn acceptance() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut report = Report { lines: Vec::new() };
    criterion_grassmannian(&mut report);
    criterion_projective(&mut report);
    criterion_flag(&mut report);
    criterion_section_chain(&mut report);
    criterion_n_points(&mut report);
    criterion_ring(&mut report);
    criterion_cross_method(&mut report);
    criterion_uhat(&mut report);
    criterion_residue_properties(&mut report, &mut rng);
    criterion_moment(&mut report, &mut rng);
    for (_, line) in &report.lines {
        println!("{line}");
    }
    let failed: Vec<&String> = report.lines.iter().filter(|(ok, _)| !ok).map(|(_, l)| l).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn oracles_are_sane() {
    assert_eq!(rectangle_tableaux(2, 2), 2);
    assert_eq!(rectangle_tableaux(1, 4), 1);
    assert_eq!(gaussian_binomial(4, 2), vec![1, 1, 2, 1, 1]);
    assert_eq!(swap_orbit_counts(3), vec![1, 1, 2, 1, 1]);
    let s = dense(&[(1, 1, 0), (1, 0, 1)]);
    assert_eq!(pieri_oracle(&dense_pow(&s, 4), 4), rat(2));
}
