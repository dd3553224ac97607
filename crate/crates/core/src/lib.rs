//! Exact intersection pairings, residues and Betti numbers for GIT quotients
//! by reductive groups and by graded unipotent extensions.

pub mod betti;
pub mod cohring;
pub mod error;
pub mod exactnum;
pub mod groupdata;
pub mod linalg;
pub mod localize;
pub mod momentdiag;
pub mod polyring;
pub mod residue;

pub use betti::{QuotientDims, StratumDatum};
pub use cohring::{GradedRing, GradedRingPresentation};
pub use error::{Error, Result};
pub use exactnum::{ExactRational, TruncSeries};
pub use groupdata::{ConeChoice, GroupData};
pub use localize::{FixedPointComponent, PairingProblem};
pub use polyring::{LinearForm, Monomial, MultiPoly, RationalFn, WeylElement};
pub use residue::{jk_residue, ResidueProblem};
