//! Exact computational algebra over GF(2) for the cooperations of the
//! second truncated Brown-Peterson spectrum: Milnor-primitive actions on
//! monomial bases, Margolis homology and freeness detection, Brown-Gitler
//! comodules with their exact sequences, a trigraded Koszul Ext engine
//! with v0/v1/v2 module structure, and the inductive generator tables
//! with hidden v2-extensions.
//!
//! Start from the `examples/` directory for runnable tours of each
//! capability, or the `coopalg` binary for the command-line surface.

pub mod cli;
pub mod comod;
pub mod ext;
pub mod gf2;
pub mod margolis;
pub mod milnor;
pub mod svg;
pub mod tables;
pub mod verify;

pub use comod::{ChainMap, Label, ModulePres, Ring};
pub use gf2::{BitVec, Mat2};
pub use milnor::{AlgebraId, Element, Monomial};
