//! Serde model of a problem file. Rationals are `"p/q"` strings or
//! integers; polynomials are term lists.

use std::fmt;

use ngit_core::exactnum::{parse_rational, ExactRational};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub struct Rat(pub ExactRational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\" or an integer")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat(ExactRational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat(ExactRational::from_integer(v.into())))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                parse_rational(v).map(Rat).map_err(E::custom)
            }
        }

        d.deserialize_any(RatVisitor)
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    PairReductive,
    PairUhat,
    PairNonreductive,
    PairAbelianized,
    BettiUhat,
    #[serde(rename = "betti_H")]
    BettiH,
    Morse,
    Ring,
    Residue,
    Grassmannian,
    Flag,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: Rat,
    pub exp: Vec<u32>,
}

pub type Poly = Vec<Term>;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub form: Vec<Rat>,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum WeylGen {
    Perm(Vec<usize>),
    Matrix(Vec<Vec<Rat>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Group {
    pub rank: usize,
    #[serde(default)]
    pub positive_roots: Vec<Vec<Rat>>,
    #[serde(default)]
    pub unipotent_weights: Vec<Vec<Rat>>,
    #[serde(default)]
    pub weyl_generators: Vec<WeylGen>,
    #[serde(default = "one_usize")]
    pub weyl_order: usize,
    pub lambda: Option<Vec<Rat>>,
    pub inner_product: Option<Vec<Vec<Rat>>>,
    pub chi_over_c: Option<Rat>,
    /// λ-weights at the fixed points, for the well-adaptedness check.
    #[serde(default)]
    pub fixed_weights: Vec<Rat>,
}

fn one_usize() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPoint {
    #[serde(default)]
    pub name: String,
    pub restriction: Option<Poly>,
    #[serde(default)]
    pub restriction_denominator: Vec<Factor>,
    pub normal_weights: Vec<Factor>,
    pub lambda_weight: Rat,
    #[serde(default)]
    pub is_min: bool,
    pub moment: Option<Vec<Rat>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Integrand {
    pub numerator: Poly,
    #[serde(default)]
    pub denominator: Vec<Factor>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dims {
    pub dim_x: usize,
    pub dim_u: usize,
    pub dim_zmin: usize,
    #[serde(default)]
    pub dim_residual: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    pub codim: usize,
    pub series: Vec<Rat>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Product {
    /// `[degree, index]`.
    pub left: [usize; 2],
    pub right: [usize; 2],
    pub result: Vec<Rat>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Explicit {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub products: Vec<Product>,
    /// Per generator, one matrix per degree.
    #[serde(default)]
    pub weyl: Vec<Vec<Vec<Vec<Rat>>>>,
    #[serde(default)]
    pub generators: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ring {
    pub variables: Option<usize>,
    #[serde(default)]
    pub relations: Vec<Poly>,
    pub top_degree: Option<usize>,
    pub explicit: Option<Explicit>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub normalization: Option<Rat>,
    pub generic_stabilizer: Option<u64>,
    pub truncate: Option<usize>,
    #[serde(default)]
    pub sign_flip: bool,
}

/// Complex numbers as `[re, im]`.
pub type Complex = [f64; 2];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSample {
    pub point: Vec<Complex>,
    pub matrix: Vec<Vec<Complex>>,
    #[serde(default)]
    pub shift: f64,
    pub tangent: Option<Vec<Complex>>,
    /// Name of the fixed point whose `lambda_weight` the value should match.
    pub fixed_point: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub mode: Mode,
    pub variables: Option<Vec<String>>,
    pub group: Option<Group>,
    #[serde(default)]
    pub fixed_points: Vec<FixedPoint>,
    pub class: Option<Poly>,
    pub cone: Option<Vec<Rat>>,
    pub basis: Option<Vec<Vec<Rat>>>,
    pub epsilon: Option<Vec<Rat>>,
    pub integrand: Option<Integrand>,
    pub dims: Option<Dims>,
    pub zmin_series: Option<Vec<Rat>>,
    pub strata: Option<Vec<Stratum>>,
    pub total: Option<Vec<Rat>>,
    pub ring: Option<Ring>,
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub phi: Option<Poly>,
    /// The lift `ã` for the abelianised pairing; defaults to `class`.
    pub lift: Option<Poly>,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub moment_samples: Vec<MomentSample>,
    /// A previous JSON `result` object; the run fails unless it is reproduced.
    pub expect: Option<serde_json::Value>,
    /// Free-form note, ignored.
    #[serde(default)]
    #[allow(dead_code)]
    pub description: Option<String>,
}

pub fn parse(text: &str) -> Result<ProblemFile, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        format!("{path}: {}", e.into_inner())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_accept_strings_and_integers() {
        let v: Vec<Rat> = serde_json::from_str(r#"["3/6", -2, "7"]"#).unwrap();
        assert_eq!(v[0].0, ExactRational::new(1.into(), 2.into()));
        assert_eq!(v[1].0, ExactRational::from_integer((-2).into()));
        assert_eq!(v[2].0, ExactRational::from_integer(7.into()));
        assert!(serde_json::from_str::<Rat>(r#""1/0""#).is_err());
    }

    #[test]
    fn errors_carry_paths() {
        let err = parse(r#"{"mode": "flag", "phi": [{"coeff": "x", "exp": [1]}]}"#).unwrap_err();
        assert!(err.starts_with("phi[0].coeff"), "{err}");
        let err = parse(r#"{"mode": "nope"}"#).unwrap_err();
        assert!(err.starts_with("mode"), "{err}");
    }
}
