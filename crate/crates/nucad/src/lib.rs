//! Tree files, verification oracles, a multi-threaded builder and SVG
//! plots for open NuCADs built by [`nucad_core`].

pub mod oracle;
pub mod parallel;
pub mod plot;
pub mod treefile;

pub use oracle::{
    build_open_cad, projection_closure, sturm_count, verify_bpolys_in_closure, verify_truth_invariance,
    verify_weak_decomposition, OracleError, VerificationReport,
};
pub use parallel::{build_parallel, ParallelBuildError};
pub use plot::{render_svg, PlotError, PlotSpec};
