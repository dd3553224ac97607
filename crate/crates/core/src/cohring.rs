//! Finite-dimensional graded rings, their Weyl-invariant subrings and
//! annihilator ideals.
//!
//! Ring degree `k` sits in cohomological degree `2k`. Every graded piece is
//! handled by explicit linear algebra over a fixed basis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{ExactRational, TruncSeries};
use crate::groupdata::{group_closure, GroupData};
use crate::linalg::{self, Matrix, Vector};
use crate::polyring::{monomials_of_degree, weyl_act, Monomial, MultiPoly, WeylElement};

/// Degrees are probed up to this bound when no top degree is declared.
const MAX_PROBE_DEGREE: usize = 64;

/// `ℚ[z_1..z_r] / (relations)`, relations homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    pub nvars: usize,
    pub relations: Vec<MultiPoly>,
    pub top_degree: Option<usize>,
}

/// A graded ring given by its basis dimensions and structure constants.
///
/// Degree 0 must be one-dimensional with basis element the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitRing {
    pub dims: Vec<usize>,
    /// `(deg a, index i, deg b, index j) -> coordinates of e_i e_j` in
    /// degree `a + b`; missing products are zero.
    pub products: BTreeMap<(usize, usize, usize, usize), Vector>,
    /// `weyl[g][d]` is the matrix of generator `g` on degree `d`, acting on
    /// coordinate columns.
    pub weyl: Vec<Vec<Matrix>>,
    /// Degree-1 coordinates of each torus variable `z_i`.
    pub generators: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradedRingPresentation {
    Quotient(QuotientRing),
    Explicit(ExplicitRing),
}

/// A homogeneous ring element in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    pub degree: usize,
    pub coords: Vector,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// One graded piece of a polynomial quotient.
#[derive(Clone, Debug)]
struct Piece {
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    rows: Matrix,
    pivots: Vec<usize>,
    /// Columns (monomials) that survive as basis elements.
    basis: Vec<usize>,
}

impl Piece {
    fn new(nvars: usize, degree: usize, relations: &[(usize, MultiPoly)]) -> Self {
        let monomials = monomials_of_degree(nvars, degree as u32);
        let index: BTreeMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Matrix = Vec::new();
        for (deg, rel) in relations {
            if *deg > degree {
                continue;
            }
            for m in monomials_of_degree(nvars, (degree - deg) as u32) {
                let mut row = vec![ExactRational::zero(); monomials.len()];
                for (mono, c) in rel.terms() {
                    row[index[&mono.mul(&m)]] += c;
                }
                rows.push(row);
            }
        }
        let pivots = linalg::rref(&mut rows);
        let basis = (0..monomials.len()).filter(|c| !pivots.contains(c)).collect();
        Self { monomials, index, rows, pivots, basis }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Normal-form coordinates of a homogeneous polynomial of this degree.
    fn reduce(&self, p: &MultiPoly) -> Vector {
        let mut v = vec![ExactRational::zero(); self.monomials.len()];
        for (m, c) in p.terms() {
            v[self.index[m]] += c;
        }
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        self.basis.iter().map(|&c| v[c].clone()).collect()
    }

    fn lift(&self, coords: &[ExactRational], nvars: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        for (&c, x) in self.basis.iter().zip(coords) {
            p.add_term(self.monomials[c].clone(), x.clone());
        }
        p
    }
}

#[derive(Clone, Debug)]
enum Backend {
    Quotient { nvars: usize, pieces: Vec<Piece> },
    Explicit(ExplicitRing),
}

/// A presentation compiled into per-degree bases and Weyl matrices.
#[derive(Clone, Debug)]
pub struct GradedRing {
    backend: Backend,
    dims: Vec<usize>,
    /// `weyl[g][d]`.
    weyl: Vec<Vec<Matrix>>,
}

fn homogeneous_relations(relations: &[MultiPoly]) -> Result<Vec<(usize, MultiPoly)>> {
    relations
        .iter()
        .filter(|r| !r.is_zero())
        .map(|r| r.homogeneous_degree().map(|d| (d as usize, r.clone())).ok_or(Error::Inhomogeneous))
        .collect()
}

impl GradedRing {
    /// For the quotient form the Weyl group acts through `weyl_generators`;
    /// the explicit form carries its own matrices.
    pub fn new(presentation: &GradedRingPresentation, weyl_generators: &[WeylElement]) -> Result<Self> {
        match presentation {
            GradedRingPresentation::Quotient(q) => Self::from_quotient(q, weyl_generators),
            GradedRingPresentation::Explicit(e) => Self::from_explicit(e),
        }
    }

    fn from_quotient(q: &QuotientRing, weyl_generators: &[WeylElement]) -> Result<Self> {
        for r in &q.relations {
            if r.nvars() != q.nvars {
                return Err(Error::VarCountMismatch { expected: q.nvars, found: r.nvars() });
            }
        }
        let relations = homogeneous_relations(&q.relations)?;
        let limit = q.top_degree.map_or(MAX_PROBE_DEGREE, |t| t + 1);
        let mut pieces = Vec::new();
        for d in 0..=limit {
            let piece = Piece::new(q.nvars, d, &relations);
            if piece.dim() == 0 {
                break;
            }
            if d == limit {
                return Err(Error::NonFinite(d));
            }
            pieces.push(piece);
        }
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("relations generate the unit ideal".into()));
        }
        if let Some(t) = q.top_degree {
            if pieces.len() != t + 1 {
                return Err(Error::InvalidArgument(format!(
                    "declared top degree {t}, but the ring vanishes from degree {}",
                    pieces.len()
                )));
            }
        }
        let dims = pieces.iter().map(Piece::dim).collect();
        let mut ring = Self { backend: Backend::Quotient { nvars: q.nvars, pieces }, dims, weyl: Vec::new() };
        for g in weyl_generators {
            if g.nvars() != q.nvars {
                return Err(Error::VarCountMismatch { expected: q.nvars, found: g.nvars() });
            }
            for (_, r) in &relations {
                let image = weyl_act(r, g)?;
                if !ring.element_from_poly(&image)?.is_zero() {
                    return Err(Error::InvalidArgument(format!("Weyl generator does not preserve relation {r}")));
                }
            }
            let per_degree = (0..ring.dims.len()).map(|d| ring.quotient_weyl_matrix(g, d)).collect::<Result<_>>()?;
            ring.weyl.push(per_degree);
        }
        Ok(ring)
    }

    fn quotient_weyl_matrix(&self, g: &WeylElement, d: usize) -> Result<Matrix> {
        let Backend::Quotient { nvars, pieces } = &self.backend else {
            unreachable!("only called for quotient rings");
        };
        let piece = &pieces[d];
        let columns: Vec<Vector> = piece
            .basis
            .iter()
            .map(|&c| {
                let m = MultiPoly::from_terms(*nvars, [(piece.monomials[c].clone(), ExactRational::one())])?;
                Ok(piece.reduce(&weyl_act(&m, g)?))
            })
            .collect::<Result<_>>()?;
        Ok(linalg::transpose(&columns))
    }

    fn from_explicit(e: &ExplicitRing) -> Result<Self> {
        if e.dims.first() != Some(&1) {
            return Err(Error::InvalidArgument("degree 0 must be one-dimensional".into()));
        }
        if e.dims.iter().skip(1).any(|&d| d == 0) {
            return Err(Error::InvalidArgument("interior graded pieces must be nonzero".into()));
        }
        for (&(a, i, b, j), v) in &e.products {
            let ok = a < e.dims.len() && b < e.dims.len() && i < e.dims[a] && j < e.dims[b];
            if !ok {
                return Err(Error::Shape(format!("product ({a},{i})*({b},{j}) is out of range")));
            }
            let target = e.dims.get(a + b).copied().unwrap_or(0);
            if v.len() != target {
                return Err(Error::Shape(format!("product ({a},{i})*({b},{j}) needs {target} coordinates")));
            }
        }
        for (g, mats) in e.weyl.iter().enumerate() {
            if mats.len() != e.dims.len() {
                return Err(Error::Shape(format!("Weyl generator {g} needs one matrix per degree")));
            }
            for (m, &d) in mats.iter().zip(&e.dims) {
                if m.len() != d || m.iter().any(|row| row.len() != d) {
                    return Err(Error::Shape(format!("Weyl generator {g} has a matrix of the wrong size")));
                }
            }
        }
        let deg1 = e.dims.get(1).copied().unwrap_or(0);
        if e.generators.iter().any(|v| v.len() != deg1) {
            return Err(Error::Shape(format!("generator images need {deg1} coordinates")));
        }
        Ok(Self { dims: e.dims.clone(), weyl: e.weyl.clone(), backend: Backend::Explicit(e.clone()) })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.dims.get(degree).copied().unwrap_or(0)
    }

    pub fn weyl_matrices(&self) -> &[Vec<Matrix>] {
        &self.weyl
    }

    pub fn zero(&self, degree: usize) -> RingElement {
        RingElement { degree, coords: vec![ExactRational::zero(); self.dim(degree)] }
    }

    pub fn basis_element(&self, degree: usize, i: usize) -> RingElement {
        let mut e = self.zero(degree);
        e.coords[i] = ExactRational::one();
        e
    }

    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let degree = a.degree + b.degree;
        if degree > self.top_degree() {
            return self.zero(degree);
        }
        match &self.backend {
            Backend::Quotient { nvars, pieces } => {
                let pa = pieces[a.degree].lift(&a.coords, *nvars);
                let pb = pieces[b.degree].lift(&b.coords, *nvars);
                RingElement { degree, coords: pieces[degree].reduce(&(&pa * &pb)) }
            }
            Backend::Explicit(e) => {
                let mut out = self.zero(degree);
                for (i, x) in a.coords.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, y) in b.coords.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        let xy = x * y;
                        let unit = if a.degree == 0 {
                            Some(self.basis_element(degree, j).coords)
                        } else if b.degree == 0 {
                            Some(self.basis_element(degree, i).coords)
                        } else {
                            None
                        };
                        let prod = unit.or_else(|| {
                            e.products
                                .get(&(a.degree, i, b.degree, j))
                                .or_else(|| e.products.get(&(b.degree, j, a.degree, i)))
                                .cloned()
                        });
                        if let Some(v) = prod {
                            for (o, c) in out.coords.iter_mut().zip(&v) {
                                *o += &xy * c;
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// The class of a homogeneous polynomial in the torus variables.
    pub fn element_from_poly(&self, p: &MultiPoly) -> Result<RingElement> {
        if p.is_zero() {
            return Ok(self.zero(0));
        }
        let degree = p.homogeneous_degree().ok_or(Error::Inhomogeneous)? as usize;
        if degree > self.top_degree() {
            return Ok(self.zero(degree));
        }
        match &self.backend {
            Backend::Quotient { nvars, pieces } => {
                if p.nvars() != *nvars {
                    return Err(Error::VarCountMismatch { expected: *nvars, found: p.nvars() });
                }
                Ok(RingElement { degree, coords: pieces[degree].reduce(p) })
            }
            Backend::Explicit(e) => {
                if p.nvars() != e.generators.len() {
                    return Err(Error::NotExpressible(format!(
                        "{} generator images for a polynomial in {} variables",
                        e.generators.len(),
                        p.nvars()
                    )));
                }
                let gens: Vec<RingElement> =
                    e.generators.iter().map(|v| RingElement { degree: 1, coords: v.clone() }).collect();
                let mut out = self.zero(degree);
                for (m, c) in p.terms() {
                    let mut term = self.basis_element(0, 0);
                    for (g, &k) in gens.iter().zip(&m.0) {
                        for _ in 0..k {
                            term = self.multiply(&term, g);
                        }
                    }
                    for (o, t) in out.coords.iter_mut().zip(&term.coords) {
                        *o += c * t;
                    }
                }
                Ok(out)
            }
        }
    }

    /// Matrix of `x ↦ e·x` from degree `d` to degree `d + deg e`.
    pub fn multiplication_matrix(&self, e: &RingElement, d: usize) -> Matrix {
        let columns: Vec<Vector> =
            (0..self.dim(d)).map(|i| self.multiply(e, &self.basis_element(d, i)).coords).collect();
        let rows = self.dim(d + e.degree);
        (0..rows).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect()
    }

    /// The image of the Weyl group acting on the whole ring, as block
    /// matrices per degree. Its order must divide `weyl_order`.
    pub fn weyl_image(&self, weyl_order: usize) -> Result<Vec<Vec<Matrix>>> {
        let total: usize = self.dims.iter().sum();
        let offsets: Vec<usize> = self.dims.iter().scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        }).collect();
        let gens: Vec<Matrix> = self
            .weyl
            .iter()
            .map(|per_degree| {
                let mut m = linalg::zeros(total, total);
                for (block, &o) in per_degree.iter().zip(&offsets) {
                    for (i, row) in block.iter().enumerate() {
                        for (j, x) in row.iter().enumerate() {
                            m[o + i][o + j] = x.clone();
                        }
                    }
                }
                m
            })
            .collect();
        let group = group_closure(total, &gens)?;
        if weyl_order == 0 || weyl_order % group.len() != 0 {
            return Err(Error::WeylOrderMismatch { declared: weyl_order, found: group.len() });
        }
        Ok(group
            .iter()
            .map(|g| {
                offsets
                    .iter()
                    .zip(&self.dims)
                    .map(|(&o, &d)| g[o..o + d].iter().map(|row| row[o..o + d].to_vec()).collect())
                    .collect()
            })
            .collect())
    }

    /// Averaging projector `(1/|W|) Σ_w w` on each degree.
    pub fn reynolds(&self, weyl_order: usize) -> Result<Vec<Matrix>> {
        let group = self.weyl_image(weyl_order)?;
        let scale = ExactRational::new(1.into(), (group.len() as u64).into());
        Ok((0..self.dims.len())
            .map(|d| {
                let mut acc = linalg::zeros(self.dims[d], self.dims[d]);
                for g in &group {
                    for (a, row) in acc.iter_mut().zip(&g[d]) {
                        for (x, y) in a.iter_mut().zip(row) {
                            *x += y;
                        }
                    }
                }
                acc.into_iter().map(|row| row.into_iter().map(|x| x * &scale).collect()).collect()
            })
            .collect())
    }

    pub fn is_weyl_invariant(&self, e: &RingElement) -> Option<usize> {
        if e.degree > self.top_degree() {
            return None;
        }
        self.weyl.iter().position(|per_degree| linalg::mat_vec(&per_degree[e.degree], &e.coords) != e.coords)
    }
}

pub fn graded_dims(presentation: &GradedRingPresentation) -> Result<Vec<usize>> {
    Ok(GradedRing::new(presentation, &[])?.dims().to_vec())
}

/// Basis of the invariant subring in every degree, from the columns of the
/// averaging projector.
pub fn invariant_basis(ring: &GradedRing, weyl_order: usize) -> Result<Vec<Vec<Vector>>> {
    Ok(ring
        .reynolds(weyl_order)?
        .iter()
        .map(|p| linalg::span_basis(&linalg::transpose(p)))
        .collect())
}

/// Kernel dimension of multiplication by `e` in every degree.
pub fn annihilator_dims(ring: &GradedRing, e: &RingElement) -> Vec<usize> {
    (0..ring.dims().len())
        .map(|d| {
            let m = ring.multiplication_matrix(e, d);
            ring.dim(d) - linalg::rank(&m)
        })
        .collect()
}

/// Kernel dimension of multiplication by `e` restricted to the invariants.
pub fn invariant_annihilator_dims(ring: &GradedRing, invariants: &[Vec<Vector>], e: &RingElement) -> Vec<usize> {
    invariants
        .iter()
        .enumerate()
        .map(|(d, basis)| {
            let images: Vec<Vector> = basis
                .iter()
                .map(|v| ring.multiply(e, &RingElement { degree: d, coords: v.clone() }).coords)
                .collect();
            basis.len() - linalg::rank(&images)
        })
        .collect()
}

/// Per-degree dimensions of invariants, their annihilator, and the
/// resulting Poincaré series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBetti {
    pub invariant_dims: Vec<usize>,
    pub annihilator_dims: Vec<usize>,
    pub series: TruncSeries,
}

/// Poincaré series of `(ring)^W / ann(e)`.
pub fn quotient_betti_with_class(ring: &GradedRing, weyl_order: usize, e: &RingElement) -> Result<QuotientBetti> {
    if let Some(generator) = ring.is_weyl_invariant(e) {
        return Err(Error::NotWeylInvariant { generator });
    }
    let invariants = invariant_basis(ring, weyl_order)?;
    let invariant_dims: Vec<usize> = invariants.iter().map(Vec::len).collect();
    let ann = invariant_annihilator_dims(ring, &invariants, e);
    let bound = 2 * ring.top_degree();
    let coeffs: Vec<i64> = (0..=bound)
        .map(|k| if k % 2 == 1 { 0 } else { (invariant_dims[k / 2] - ann[k / 2]) as i64 })
        .collect();
    Ok(QuotientBetti { invariant_dims, annihilator_dims: ann, series: TruncSeries::from_coeffs(coeffs, bound) })
}

/// The same with `e` the Euler class of roots and unipotent weights.
pub fn quotient_presentation_betti(ring: &GradedRing, group: &GroupData) -> Result<QuotientBetti> {
    let e = group.euler_class_nonreductive();
    let element = ring.element_from_poly(&e).map_err(|err| match err {
        Error::VarCountMismatch { .. } | Error::NotExpressible(_) => Error::NotExpressible(e.to_string()),
        other => other,
    })?;
    quotient_betti_with_class(ring, group.weyl_order, &element)
}
