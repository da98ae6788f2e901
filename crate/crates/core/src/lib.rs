//! Generic identifiability of linear structural equation models on mixed
//! graphs, decided with elimination ideals and reduced Gröbner bases.

pub use semident_algebra as algebra;

pub mod census;
pub mod criteria;
pub mod graph;
pub mod identify;
pub mod linalg;
pub mod parametrize;

pub use census::{
    enumerate_graphs, load_records, load_store, run_census, CensusConfig, CensusError,
    CensusRecord, CensusSummary, GraphId,
};
pub use criteria::{
    back_door, criteria_table, instrumental_variable, is_bow_free, single_door, CriteriaTable,
    Criterion, CriterionResult, Witness,
};
pub use graph::{DirectedPath, GraphError, MixedGraph, Vertex};
pub use identify::{
    analyze_parameter, classify_graph, classify_parameter, classify_selected, sample_parameters,
    verify_numeric, ClassifyOptions, GraphReport, IdentStatus, IdentifyError, ParameterAnalysis,
    Presentation, RationalFormula, TargetReport, Verdict, VerificationReport,
};
pub use linalg::RationalMatrix;
pub use parametrize::{
    omega_backsolve_numeric, sigma_numeric, ParamError, ParamRing, ParameterPoint, ParameterTarget,
    Parametrization, SigmaMap, TargetKind,
};
