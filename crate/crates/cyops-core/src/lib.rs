//! Exact-arithmetic engine for hypergeometric periods, Picard-Fuchs operators
//! and Weierstrass models of iterated twist constructions.

pub mod catalog;
pub mod error;
pub mod hypergeom;
pub mod linalg;
pub mod multipoly;
pub mod operator;
pub mod periods;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;
pub mod weierstrass;

pub use catalog::{build_catalog, emit_table, verify_catalog, CatalogEntry, Case, TableFormat, VerificationReport};
pub use error::{CyError, Result};
pub use hypergeom::{hypergeom_series, HypergeomSpec};
pub use multipoly::{MultiPoly, Var};
pub use operator::{hypergeom_operator, DOperator, ThetaOperator, TwistFactor};
pub use periods::{
    mirror_period, reduce_parameters, twist_period_params, verify_clausen, verify_extra_case_identity,
    verify_f2_system, verify_fuchsian_system, verify_kummer_quadratic, verify_mirror_factorizations,
    verify_monodromy_relations, verify_sasaki_yoshida_quadric, AppellParams, CheckRecord, Sl2zMatrix,
    TwistPeriodFormula,
};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::Q;
pub use series::{BiSeries, Series};
pub use weierstrass::{discriminant, fiber_configuration, kodaira_at, surface_catalog, KodairaType, WeierstrassModel};
