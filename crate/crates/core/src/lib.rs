//! Exact arithmetic in iterated Ore extensions over fields and matrix rings.
//!
//! Towers are parsed from tower files with [`parse_tower_file`]. [`erase_all`] removes
//! every derivation; [`haynal_report`] decides whether a tower satisfies a polynomial identity.

pub mod erase;
pub mod error;
pub mod format;
pub mod graded;
pub mod matrix;
pub mod pi;
pub mod presets;
pub mod ringmap;
pub mod scalar;
pub mod skewpoly;
pub mod tower;

pub use erase::{
    erase_all, erase_top, swap_adjacent, Erasure, ErasureBranch, ErasureResult, ErasureWitness, Swapped, Verification,
};
pub use error::{Error, Result};
pub use format::{parse_element, parse_field, parse_tower_file, render_tower_file};
pub use graded::{
    associated_graded_tower, leading_form, rees_closure_check, GradedPresentation, GradedStep, ReesClosure,
};
pub use matrix::{solve_linear_system, BaseElement, Matrix};
pub use pi::{centrality_witness, haynal_report, CentralPower, PIReport, Verdict};
pub use ringmap::RingMap;
pub use scalar::{canonicalize, root_of_unity_order, Field, Scalar};
pub use skewpoly::{Centrality, Degree, Generator, Monomial, SkewPoly};
pub use tower::{
    check_swap_compatibility, map_order, validate_tower, BaseMap, BaseRing, Check, CheckFailure, LevelMap, LevelReport,
    OreTower, SwapCheck, TowerLevel, Validation, ValidationReport, VarImage,
};
