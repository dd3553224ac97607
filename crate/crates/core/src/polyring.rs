//! Sparse multivariate polynomials over the rationals, linear forms, and
//! rational functions whose denominators stay factored into linear forms.
//!
//! Variables are positional (`0..nvars`); names only appear when rendering.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat, ExactRational};
use crate::linalg::{self, Matrix};

/// Exponent vector `z_1^{a_1} ... z_r^{a_r}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// All exponent vectors of `nvars` variables with total degree `degree`,
/// in lexicographically decreasing order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, ExactRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, ExactRational::one())
    }

    pub fn constant(nvars: usize, c: ExactRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), ExactRational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ExactRational)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(Error::VarCountMismatch { expected: nvars, found: m.len() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        Self::from_terms(nvars, terms.iter().map(|(c, e)| (Monomial(e.to_vec()), rat(*c))))
            .expect("exponent vectors must match nvars")
    }

    pub fn add_term(&mut self, m: Monomial, c: ExactRational) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> ExactRational {
        self.coefficient_of(&Monomial::one(self.nvars))
    }

    pub fn coefficient_of(&self, m: &Monomial) -> ExactRational {
        self.terms.get(m).cloned().unwrap_or_else(ExactRational::zero)
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(d)` when every term has total degree `d` (zero counts as
    /// homogeneous of every degree and reports `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Homogeneous component of the given degree.
    pub fn component(&self, degree: u32) -> MultiPoly {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &ExactRational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut e = m.clone();
            e.0[i] -= 1;
            out.add_term(e, c * rat(i64::from(m.0[i])));
        }
        out
    }

    /// Replaces variable `i` by `images[i]`; all images must share a ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars {
            return Err(Error::VarCountMismatch { expected: self.nvars, found: images.len() });
        }
        let target = images.first().map_or(0, MultiPoly::nvars);
        if images.iter().any(|p| p.nvars != target) {
            return Err(Error::InvalidArgument("substitution images live in different rings".into()));
        }
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![Self::one(p.nvars), p.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Writes `self = sum_k coeff_k * x_i^k` and returns the coefficients as
    /// polynomials in the remaining `nvars - 1` variables.
    pub fn split_var(&self, i: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(i);
            out.entry(k)
                .or_insert_with(|| Self::zero(self.nvars - 1))
                .add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Inserts a fresh variable at position `i` (the polynomial does not
    /// depend on it).
    pub fn insert_var(&self, i: usize) -> MultiPoly {
        Self {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.insert(i, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Exact division by a nonzero linear form; fails with a remainder.
    pub fn div_linear(&self, form: &LinearForm) -> Result<MultiPoly> {
        if form.nvars() != self.nvars {
            return Err(Error::VarCountMismatch { expected: self.nvars, found: form.nvars() });
        }
        let k = form.coeffs().iter().position(|c| !c.is_zero()).ok_or(Error::ZeroDenominator)?;
        let a_inv = form.coeff(k).recip();
        let rest = {
            let mut c = form.coeffs().to_vec();
            c[k] = ExactRational::zero();
            LinearForm::new(c).to_poly()
        };
        // peel off the top power of x_k until nothing depends on it
        let mut remainder = self.clone();
        let mut quotient = Self::zero(self.nvars);
        while let Some((&top, lead)) = remainder.split_var(k).iter().next_back().map(|(d, p)| (d, p.clone())) {
            if top == 0 {
                break;
            }
            let lead = lead.insert_var(k);
            let step = &lead.scale(&a_inv) * &Self::var(self.nvars, k).pow(top - 1);
            quotient = &quotient + &step;
            remainder = &remainder - &(&step * &(&Self::var(self.nvars, k).scale(form.coeff(k)) + &rest));
        }
        if !remainder.is_zero() {
            return Err(Error::NotExpressible(format!("{remainder} remains after dividing by {form}")));
        }
        Ok(quotient)
    }

    pub fn checked_binop(&self, other: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
        poly_arith(self, other, op)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        format_poly(self, names)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Exact sparse arithmetic with a variable-count check.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    if a.nvars != b.nvars {
        return Err(Error::VarCountMismatch { expected: a.nvars, found: b.nvars });
    }
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

pub fn coefficient_of(p: &MultiPoly, m: &Monomial) -> ExactRational {
    p.coefficient_of(m)
}

// Operators panic on mismatched variable counts; use `poly_arith` for a
// checked version.
impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Monomial, ExactRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(ExactRational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { nvars: self.nvars, terms: acc }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-ExactRational::one())
    }
}

pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars == 1 {
        vec!["z".to_string()]
    } else {
        (1..=nvars).map(|i| format!("z{i}")).collect()
    }
}

/// Plain-text rendering, highest degree first: `z1^2 - 2*z1*z2 + 1/2`.
pub fn format_poly(p: &MultiPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<_> = p.terms.iter().collect();
    terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then(b.cmp(a)));
    let mut out = String::new();
    for (k, (m, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        let vars: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if vars.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&vars.join("*"));
        }
    }
    out
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, &default_var_names(self.nvars)))
    }
}

/// Degree-one form `c_1 z_1 + ... + c_r z_r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: Vec<ExactRational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<ExactRational>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut c = vec![ExactRational::zero(); nvars];
        c[i] = ExactRational::one();
        Self::new(c)
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &ExactRational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Value of the form on a vector of the torus Lie algebra.
    pub fn eval(&self, v: &[ExactRational]) -> ExactRational {
        linalg::dot(&self.coeffs, v)
    }

    pub fn to_poly(&self) -> MultiPoly {
        let n = self.nvars();
        let mut p = MultiPoly::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn neg(&self) -> LinearForm {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &ExactRational) -> LinearForm {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    /// Splits off the first nonzero coefficient: `self = lead * monic`.
    pub fn normalize(&self) -> Option<(ExactRational, LinearForm)> {
        let lead = self.coeffs.iter().find(|c| !c.is_zero())?.clone();
        let inv = lead.recip();
        Some((lead, self.scale(&inv)))
    }

    pub fn remove_var(&self, i: usize) -> LinearForm {
        let mut c = self.coeffs.clone();
        c.remove(i);
        Self::new(c)
    }

    /// Coordinates after the change of variables `x = T w`: the form
    /// `a . x` becomes `(a^T T) . w`.
    pub fn pull_back(&self, t: &Matrix) -> LinearForm {
        let n = linalg::cols(t);
        Self::new(
            (0..n)
                .map(|j| {
                    self.coeffs
                        .iter()
                        .zip(t)
                        .fold(ExactRational::zero(), |acc, (a, row)| acc + a * &row[j])
                })
                .collect(),
        )
    }

    pub fn display_with(&self, names: &[String]) -> String {
        format_poly(&self.to_poly(), names)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// `numerator / prod_i form_i^{mult_i}` with the denominator kept factored.
///
/// Factors are stored monic (first nonzero coefficient 1), sorted and
/// merged, with the leading constants folded into the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    numerator: MultiPoly,
    denominator: Vec<(LinearForm, u32)>,
}

impl RationalFn {
    pub fn new(numerator: MultiPoly, factors: Vec<(LinearForm, u32)>) -> Result<Self> {
        let n = numerator.nvars();
        let mut scale = ExactRational::one();
        let mut merged: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (form, mult) in factors {
            if form.nvars() != n {
                return Err(Error::VarCountMismatch { expected: n, found: form.nvars() });
            }
            if mult == 0 {
                continue;
            }
            let (lead, monic) = form.normalize().ok_or(Error::ZeroDenominator)?;
            scale *= num_traits::pow(lead, mult as usize);
            *merged.entry(monic).or_insert(0) += mult;
        }
        Ok(Self { numerator: numerator.scale(&scale.recip()), denominator: merged.into_iter().collect() })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self { numerator: p, denominator: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &[(LinearForm, u32)] {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn denominator_degree(&self) -> u32 {
        self.denominator.iter().map(|(_, m)| m).sum()
    }

    /// Homogeneity degree (numerator degree minus denominator degree), when
    /// the numerator is homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        self.numerator
            .homogeneous_degree()
            .map(|d| i64::from(d) - i64::from(self.denominator_degree()))
    }

    /// The expanded product of the denominator factors.
    pub fn denominator_poly(&self) -> MultiPoly {
        self.denominator
            .iter()
            .fold(MultiPoly::one(self.nvars()), |acc, (f, m)| &acc * &f.to_poly().pow(*m))
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> RationalFn {
        Self { numerator: &self.numerator * p, denominator: self.denominator.clone() }
    }

    pub fn scale(&self, c: &ExactRational) -> RationalFn {
        Self { numerator: self.numerator.scale(c), denominator: self.denominator.clone() }
    }

    /// Divides by further linear factors.
    pub fn div_factors(&self, factors: &[(LinearForm, u32)]) -> Result<RationalFn> {
        let mut all = self.denominator.clone();
        all.extend(factors.iter().cloned());
        Self::new(self.numerator.clone(), all)
    }

    /// Sum over the least common multiple of the factored denominators.
    pub fn add(&self, other: &RationalFn) -> Result<RationalFn> {
        if self.nvars() != other.nvars() {
            return Err(Error::VarCountMismatch { expected: self.nvars(), found: other.nvars() });
        }
        let mut lcm: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (f, m) in self.denominator.iter().chain(&other.denominator) {
            let slot = lcm.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(*m);
        }
        let lift = |r: &RationalFn| {
            let mut num = r.numerator.clone();
            for (f, m) in &lcm {
                let have = r.denominator.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                if have < *m {
                    num = &num * &f.to_poly().pow(m - have);
                }
            }
            num
        };
        let numerator = &lift(self) + &lift(other);
        Ok(Self { numerator, denominator: lcm.into_iter().collect() })
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.denominator.is_empty() {
            return format_poly(&self.numerator, names);
        }
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|(f, m)| {
                let s = format!("({})", f.display_with(names));
                if *m == 1 {
                    s
                } else {
                    format!("{s}^{m}")
                }
            })
            .collect();
        format!("({}) / ({})", format_poly(&self.numerator, names), den.join("*"))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.nvars())))
    }
}

/// A Weyl group element acting on the torus variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeylElement {
    /// `z_i -> z_{perm[i]}`.
    Permutation(Vec<usize>),
    /// `z_i -> sum_j m[i][j] z_j`.
    Matrix(Matrix),
}

impl WeylElement {
    pub fn transposition(nvars: usize, i: usize, j: usize) -> Self {
        let mut p: Vec<usize> = (0..nvars).collect();
        p.swap(i, j);
        WeylElement::Permutation(p)
    }

    pub fn nvars(&self) -> usize {
        match self {
            WeylElement::Permutation(p) => p.len(),
            WeylElement::Matrix(m) => m.len(),
        }
    }

    /// Substitution matrix (row `i` is the image of `z_i`).
    pub fn matrix(&self) -> Result<Matrix> {
        match self {
            WeylElement::Permutation(p) => {
                let n = p.len();
                let mut seen = vec![false; n];
                let mut m = linalg::zeros(n, n);
                for (i, &j) in p.iter().enumerate() {
                    if j >= n || seen[j] {
                        return Err(Error::NonInvertible);
                    }
                    seen[j] = true;
                    m[i][j] = ExactRational::one();
                }
                Ok(m)
            }
            WeylElement::Matrix(m) => {
                if m.iter().any(|row| row.len() != m.len()) {
                    return Err(Error::Shape("Weyl matrix must be square".into()));
                }
                if linalg::determinant(m)?.is_zero() {
                    return Err(Error::NonInvertible);
                }
                Ok(m.clone())
            }
        }
    }

    pub fn images(&self) -> Result<Vec<MultiPoly>> {
        let m = self.matrix()?;
        Ok(m.into_iter().map(|row| LinearForm::new(row).to_poly()).collect())
    }

    /// Image of a linear form under the substitution.
    pub fn act_on_form(&self, f: &LinearForm) -> Result<LinearForm> {
        let m = self.matrix()?;
        if m.len() != f.nvars() {
            return Err(Error::VarCountMismatch { expected: m.len(), found: f.nvars() });
        }
        Ok(f.pull_back(&m))
    }
}

/// Substitutes every variable by its image under `g`.
pub fn weyl_act(p: &MultiPoly, g: &WeylElement) -> Result<MultiPoly> {
    if g.nvars() != p.nvars() {
        return Err(Error::VarCountMismatch { expected: p.nvars(), found: g.nvars() });
    }
    p.substitute(&g.images()?)
}
