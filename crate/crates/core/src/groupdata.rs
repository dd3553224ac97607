//! Torus, root and unipotent-weight data for `H = U ⋊ R`, the grading
//! one-parameter subgroup `λ`, and the combinatorial checks built on them.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::ExactRational;
use crate::linalg::{self, Matrix};
use crate::polyring::{LinearForm, MultiPoly, WeylElement};

/// Group elements are enumerated up to this order before giving up.
const MAX_WEYL_ORDER: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    pub rank: usize,
    /// Positive roots of the Levi factor `R`.
    pub positive_roots: Vec<LinearForm>,
    /// Adjoint torus weights on `Lie(U)`.
    pub unipotent_weights: Vec<LinearForm>,
    pub weyl_generators: Vec<WeylElement>,
    pub weyl_order: usize,
    /// Derivative of the grading one-parameter subgroup.
    pub lambda: Vec<ExactRational>,
    pub inner_product: Matrix,
    /// Character shift `χ/c` of the linearisation, when known.
    pub chi_over_c: Option<ExactRational>,
}

impl GroupData {
    /// A torus of the given rank: no roots, no unipotent radical, trivial
    /// Weyl group, `λ = e_1`, identity inner product.
    pub fn torus(rank: usize) -> Self {
        let mut lambda = vec![ExactRational::zero(); rank];
        if rank > 0 {
            lambda[0] = ExactRational::one();
        }
        Self {
            rank,
            positive_roots: Vec::new(),
            unipotent_weights: Vec::new(),
            weyl_generators: Vec::new(),
            weyl_order: 1,
            lambda,
            inner_product: linalg::identity(rank),
            chi_over_c: None,
        }
    }

    /// `GL(k)` acting through its maximal torus: roots `z_i - z_j` (`i < j`),
    /// Weyl group `S_k` generated by adjacent transpositions.
    pub fn general_linear(k: usize) -> Self {
        let mut g = Self::torus(k);
        for i in 0..k {
            for j in i + 1..k {
                let mut c = vec![0; k];
                c[i] = 1;
                c[j] = -1;
                g.positive_roots.push(LinearForm::from_ints(&c));
            }
        }
        g.weyl_generators = (0..k.saturating_sub(1)).map(|i| WeylElement::transposition(k, i, i + 1)).collect();
        g.weyl_order = (1..=k).product();
        g
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rank;
        let check_form = |f: &LinearForm| {
            if f.nvars() == r {
                Ok(())
            } else {
                Err(Error::VarCountMismatch { expected: r, found: f.nvars() })
            }
        };
        for f in self.positive_roots.iter().chain(&self.unipotent_weights) {
            check_form(f)?;
            if f.is_zero() {
                return Err(Error::InvalidArgument("roots and unipotent weights must be nonzero".into()));
            }
        }
        for g in &self.weyl_generators {
            if g.nvars() != r {
                return Err(Error::VarCountMismatch { expected: r, found: g.nvars() });
            }
            g.matrix()?;
        }
        if self.weyl_order == 0 {
            return Err(Error::InvalidArgument("Weyl group order must be at least 1".into()));
        }
        if self.lambda.len() != r {
            return Err(Error::VarCountMismatch { expected: r, found: self.lambda.len() });
        }
        if self.inner_product.len() != r || self.inner_product.iter().any(|row| row.len() != r) {
            return Err(Error::Shape(format!("inner product must be {r}x{r}")));
        }
        if !is_positive_definite(&self.inner_product)? {
            return Err(Error::InvalidArgument("inner product must be symmetric positive-definite".into()));
        }
        Ok(())
    }

    /// All roots `Δ = Δ⁺ ∪ -Δ⁺`.
    pub fn roots(&self) -> Vec<LinearForm> {
        self.positive_roots.iter().cloned().chain(self.positive_roots.iter().map(LinearForm::neg)).collect()
    }

    /// `e(z) = ∏_{γ ∈ Δ⁺} γ(z)`.
    pub fn positive_root_product(&self) -> MultiPoly {
        product_of_forms(self.rank, &self.positive_roots)
    }

    /// `∏_{α ∈ Δ} α(z) = (-1)^{|Δ⁺|} e(z)^2`.
    pub fn root_product(&self) -> MultiPoly {
        product_of_forms(self.rank, &self.roots())
    }

    /// Euler class of the bundle attached to `u ⊕ r⁻ ⊕ r⁺`: every root and
    /// every unipotent weight.
    pub fn euler_class_nonreductive(&self) -> MultiPoly {
        &self.root_product() * &product_of_forms(self.rank, &self.unipotent_weights)
    }

    /// Euler class of `V_u` alone (the Û case).
    pub fn unipotent_euler_class(&self) -> MultiPoly {
        product_of_forms(self.rank, &self.unipotent_weights)
    }

    /// `⟨w, λ⟩` under the stored inner product.
    pub fn lambda_projection(&self, w: &LinearForm) -> ExactRational {
        let m_lambda = linalg::mat_vec(&self.inner_product, &self.lambda);
        w.eval(&m_lambda)
    }

    /// Checks that `λ` pairs strictly positively with every unipotent weight.
    pub fn check_grading(&self) -> GradingReport {
        let projections: Vec<ExactRational> =
            self.unipotent_weights.iter().map(|w| self.lambda_projection(w)).collect();
        let offending = projections
            .iter()
            .enumerate()
            .filter(|(_, p)| **p <= ExactRational::zero())
            .map(|(i, _)| i)
            .collect::<Vec<_>>();
        GradingReport { graded: offending.is_empty(), projections, offending }
    }

    /// Enumerates the Weyl group as substitution matrices and checks the
    /// declared order.
    pub fn weyl_elements(&self) -> Result<Vec<Matrix>> {
        let gens: Vec<Matrix> = self.weyl_generators.iter().map(WeylElement::matrix).collect::<Result<_>>()?;
        let elements = group_closure(self.rank, &gens)?;
        if elements.len() != self.weyl_order {
            return Err(Error::WeylOrderMismatch { declared: self.weyl_order, found: elements.len() });
        }
        Ok(elements)
    }

    /// Index of the first Weyl generator that moves `p`, if any.
    pub fn weyl_witness(&self, p: &MultiPoly) -> Result<Option<usize>> {
        for (i, g) in self.weyl_generators.iter().enumerate() {
            if &crate::polyring::weyl_act(p, g)? != p {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

pub fn product_of_forms(nvars: usize, forms: &[LinearForm]) -> MultiPoly {
    forms.iter().fold(MultiPoly::one(nvars), |acc, f| &acc * &f.to_poly())
}

/// Closure of a set of invertible matrices under multiplication.
pub fn group_closure(n: usize, gens: &[Matrix]) -> Result<Vec<Matrix>> {
    let mut seen: BTreeSet<Matrix> = BTreeSet::new();
    let id = linalg::identity(n);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = linalg::mat_mul(&x, g)?;
            if seen.insert(y.clone()) {
                if seen.len() > MAX_WEYL_ORDER {
                    return Err(Error::InvalidArgument(format!(
                        "Weyl generators generate more than {MAX_WEYL_ORDER} elements"
                    )));
                }
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Symmetry plus Sylvester's criterion.
fn is_positive_definite(m: &Matrix) -> Result<bool> {
    let n = m.len();
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Ok(false);
            }
        }
    }
    for k in 1..=n {
        let minor: Matrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        if linalg::determinant(&minor)? <= ExactRational::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingReport {
    pub graded: bool,
    /// `⟨w, λ⟩` for every unipotent weight, in input order.
    pub projections: Vec<ExactRational>,
    /// Indices of weights with `⟨w, λ⟩ <= 0`.
    pub offending: Vec<usize>,
}

/// Outcome of the well-adaptedness test for a character shift `χ/c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellAdaptedVerdict {
    /// The open interval `(ω_min, ω_1)` of admissible shifts.
    pub interval: (ExactRational, ExactRational),
    pub in_interval: bool,
    /// Distance from `χ/c` down to `ω_min`. How small this must be is a
    /// property of the variety, so it is reported rather than decided.
    pub epsilon_margin: ExactRational,
}

/// `ω_min < χ/c < ω_1` for the two smallest distinct fixed-point weights.
pub fn check_well_adapted(fixed_weights: &[ExactRational], chi_over_c: &ExactRational) -> Result<WellAdaptedVerdict> {
    let distinct: BTreeSet<&ExactRational> = fixed_weights.iter().collect();
    let mut it = distinct.into_iter();
    let (Some(w0), Some(w1)) = (it.next(), it.next()) else {
        return Err(Error::TooFewWeights);
    };
    Ok(WellAdaptedVerdict {
        interval: (w0.clone(), w1.clone()),
        in_interval: w0 < chi_over_c && chi_over_c < w1,
        epsilon_margin: chi_over_c - w0,
    })
}

pub fn lambda_projection(w: &LinearForm, g: &GroupData) -> ExactRational {
    g.lambda_projection(w)
}

pub fn check_grading(g: &GroupData) -> GradingReport {
    g.check_grading()
}

pub fn euler_class_nonreductive(g: &GroupData) -> MultiPoly {
    g.euler_class_nonreductive()
}

/// A point `ξ` of the chamber `Λ` used by the residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeChoice {
    pub xi: Vec<ExactRational>,
}

impl ConeChoice {
    pub fn new(xi: Vec<ExactRational>) -> Self {
        Self { xi }
    }

    /// Every form must be nonzero on `ξ`.
    pub fn validate<'a, I>(&self, forms: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a LinearForm>,
    {
        for f in forms {
            if f.nvars() != self.xi.len() {
                return Err(Error::VarCountMismatch { expected: self.xi.len(), found: f.nvars() });
            }
            if f.eval(&self.xi).is_zero() {
                return Err(Error::InvalidCone { form: f.to_string() });
            }
        }
        Ok(())
    }
}
