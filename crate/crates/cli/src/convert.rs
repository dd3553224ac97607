//! Schema values to core types, with field paths on every shape error.

use ngit_core::exactnum::ExactRational;
use ngit_core::linalg::Matrix;
use ngit_core::{
    ConeChoice, Error, FixedPointComponent, GradedRingPresentation, GroupData, LinearForm, Monomial, MultiPoly,
    RationalFn, WeylElement,
};
use ngit_core::cohring::{ExplicitRing, QuotientRing};

use crate::schema::{self, Factor, Poly, Rat};

/// A failure tied to an input location; exit code 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Invalid {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

pub type Conv<T> = std::result::Result<T, Invalid>;

pub fn invalid(path: impl Into<String>, message: impl Into<String>) -> Invalid {
    Invalid { path: path.into(), message: message.into() }
}

pub fn at(path: impl Into<String>) -> impl FnOnce(Error) -> Invalid {
    let path = path.into();
    move |e| invalid(path, e.to_string())
}

pub fn require<'a, T>(v: &'a Option<T>, path: &str) -> Conv<&'a T> {
    v.as_ref().ok_or_else(|| invalid(path, "missing field"))
}

pub fn rationals(v: &[Rat]) -> Vec<ExactRational> {
    v.iter().map(|r| r.0.clone()).collect()
}

pub fn vector(v: &[Rat], n: usize, path: &str) -> Conv<Vec<ExactRational>> {
    if v.len() != n {
        return Err(invalid(path, Error::VarCountMismatch { expected: n, found: v.len() }.to_string()));
    }
    Ok(rationals(v))
}

pub fn form(v: &[Rat], n: usize, path: &str) -> Conv<LinearForm> {
    Ok(LinearForm::new(vector(v, n, path)?))
}

pub fn forms(v: &[Vec<Rat>], n: usize, path: &str) -> Conv<Vec<LinearForm>> {
    v.iter().enumerate().map(|(i, f)| form(f, n, &format!("{path}[{i}]"))).collect()
}

pub fn matrix(v: &[Vec<Rat>], rows: usize, cols: usize, path: &str) -> Conv<Matrix> {
    if v.len() != rows {
        return Err(invalid(path, format!("expected {rows} rows, found {}", v.len())));
    }
    v.iter().enumerate().map(|(i, r)| vector(r, cols, &format!("{path}[{i}]"))).collect()
}

pub fn poly(p: &Poly, n: usize, path: &str) -> Conv<MultiPoly> {
    let mut out = MultiPoly::zero(n);
    for (i, t) in p.iter().enumerate() {
        if t.exp.len() != n {
            return Err(invalid(
                format!("{path}[{i}].exp"),
                Error::VarCountMismatch { expected: n, found: t.exp.len() }.to_string(),
            ));
        }
        out.add_term(Monomial(t.exp.clone()), t.coeff.0.clone());
    }
    Ok(out)
}

pub fn factors(v: &[Factor], n: usize, path: &str) -> Conv<Vec<(LinearForm, u32)>> {
    v.iter()
        .enumerate()
        .map(|(i, f)| {
            let p = format!("{path}[{i}].form");
            let lf = form(&f.form, n, &p)?;
            if lf.is_zero() {
                return Err(invalid(p, Error::ZeroDenominator.to_string()));
            }
            Ok((lf, f.mult))
        })
        .collect()
}

pub fn rational_fn(num: &Poly, den: &[Factor], n: usize, path: &str, den_path: &str) -> Conv<RationalFn> {
    let numerator = poly(num, n, path)?;
    let den = factors(den, n, den_path)?;
    RationalFn::new(numerator, den).map_err(at(den_path))
}

pub fn cone(v: &Option<Vec<Rat>>, n: usize) -> Conv<ConeChoice> {
    Ok(ConeChoice::new(vector(require(v, "cone")?, n, "cone")?))
}

pub fn weyl_generator(g: &schema::WeylGen, n: usize, path: &str) -> Conv<WeylElement> {
    match g {
        schema::WeylGen::Perm(p) => {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                return Err(invalid(format!("{path}.perm"), format!("not a permutation of 0..{n}")));
            }
            Ok(WeylElement::Permutation(p.clone()))
        }
        schema::WeylGen::Matrix(m) => Ok(WeylElement::Matrix(matrix(m, n, n, &format!("{path}.matrix"))?)),
    }
}

pub fn group(g: &schema::Group) -> Conv<GroupData> {
    let n = g.rank;
    let mut out = GroupData::torus(n);
    out.positive_roots = forms(&g.positive_roots, n, "group.positive_roots")?;
    out.unipotent_weights = forms(&g.unipotent_weights, n, "group.unipotent_weights")?;
    out.weyl_generators = g
        .weyl_generators
        .iter()
        .enumerate()
        .map(|(i, w)| weyl_generator(w, n, &format!("group.weyl_generators[{i}]")))
        .collect::<Conv<_>>()?;
    out.weyl_order = g.weyl_order;
    if let Some(l) = &g.lambda {
        out.lambda = vector(l, n, "group.lambda")?;
    }
    if let Some(ip) = &g.inner_product {
        out.inner_product = matrix(ip, n, n, "group.inner_product")?;
    }
    out.chi_over_c = g.chi_over_c.as_ref().map(|r| r.0.clone());
    out.validate().map_err(at("group"))?;
    Ok(out)
}

pub fn fixed_points(v: &[schema::FixedPoint], n: usize) -> Conv<Vec<FixedPointComponent>> {
    v.iter()
        .enumerate()
        .map(|(i, fp)| {
            let base = format!("fixed_points[{i}]");
            let name = if fp.name.is_empty() { format!("F{i}") } else { fp.name.clone() };
            let weights = factors(&fp.normal_weights, n, &format!("{base}.normal_weights"))?;
            let mut c = FixedPointComponent::point(name, weights, fp.lambda_weight.0.clone()).minimal(fp.is_min);
            c.restriction = match &fp.restriction {
                Some(num) => rational_fn(
                    num,
                    &fp.restriction_denominator,
                    n,
                    &format!("{base}.restriction"),
                    &format!("{base}.restriction_denominator"),
                )?,
                None => RationalFn::from_poly(MultiPoly::one(n)),
            };
            if let Some(m) = &fp.moment {
                c.moment = Some(vector(m, n, &format!("{base}.moment"))?);
            }
            Ok(c)
        })
        .collect()
}

pub fn basis(v: &Option<Vec<Vec<Rat>>>, n: usize) -> Conv<Vec<LinearForm>> {
    match v {
        None => Ok(Vec::new()),
        Some(rows) => {
            if rows.len() != n {
                return Err(invalid("basis", format!("expected {n} forms, found {}", rows.len())));
            }
            forms(rows, n, "basis")
        }
    }
}

pub fn ring(r: &schema::Ring) -> Conv<GradedRingPresentation> {
    if let Some(e) = &r.explicit {
        return explicit_ring(e).map(GradedRingPresentation::Explicit);
    }
    let n = *require(&r.variables, "ring.variables")?;
    let relations = r
        .relations
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let path = format!("ring.relations[{i}]");
            let q = poly(p, n, &path)?;
            if !q.is_homogeneous() {
                return Err(invalid(path, Error::Inhomogeneous.to_string()));
            }
            Ok(q)
        })
        .collect::<Conv<_>>()?;
    Ok(GradedRingPresentation::Quotient(QuotientRing { nvars: n, relations, top_degree: r.top_degree }))
}

fn explicit_ring(e: &schema::Explicit) -> Conv<ExplicitRing> {
    let dims = e.dims.clone();
    if dims.first() != Some(&1) {
        return Err(invalid("ring.explicit.dims[0]", "degree 0 must be one-dimensional"));
    }
    let mut products = std::collections::BTreeMap::new();
    for (k, p) in e.products.iter().enumerate() {
        let base = format!("ring.explicit.products[{k}]");
        for (side, [d, i]) in [("left", p.left), ("right", p.right)] {
            if d >= dims.len() || i >= dims[d] {
                return Err(invalid(format!("{base}.{side}"), format!("no basis element {i} in degree {d}")));
            }
        }
        let d = p.left[0] + p.right[0];
        let len = dims.get(d).copied().unwrap_or(0);
        let result = vector(&p.result, len, &format!("{base}.result"))?;
        products.insert((p.left[0], p.left[1], p.right[0], p.right[1]), result);
    }
    let weyl = e
        .weyl
        .iter()
        .enumerate()
        .map(|(g, per_degree)| {
            if per_degree.len() != dims.len() {
                return Err(invalid(format!("ring.explicit.weyl[{g}]"), format!("expected {} matrices", dims.len())));
            }
            per_degree
                .iter()
                .enumerate()
                .map(|(d, m)| matrix(m, dims[d], dims[d], &format!("ring.explicit.weyl[{g}][{d}]")))
                .collect::<Conv<Vec<_>>>()
        })
        .collect::<Conv<Vec<_>>>()?;
    let d1 = dims.get(1).copied().unwrap_or(0);
    let generators = e
        .generators
        .iter()
        .enumerate()
        .map(|(i, v)| vector(v, d1, &format!("ring.explicit.generators[{i}]")))
        .collect::<Conv<_>>()?;
    Ok(ExplicitRing { dims, products, weyl, generators })
}
