//! Exact symbolic engine for inflectional loci of scrolls.

pub mod base;
pub mod chern;
pub mod closed_forms;
pub mod jet;
mod error;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod regression;
pub mod scroll;
pub mod search;
pub mod symmetric;

pub use base::{ChowModel, NumericalBaseData, Preset};
pub use chern::{ClassRecord, FormalBundle, GradedClass, GradedVariable, Ring};
pub use error::{Error, Result};
pub use poly::{Poly, Rat};
pub use symmetric::Strategy;
pub use scroll::{inflection_class, max_rank, ScrollSetup};
