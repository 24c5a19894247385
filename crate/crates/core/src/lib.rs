//! Array XOR erasure codes built on discrete projections of a symbol grid.
//!
//! A payload is laid out as a `b x k` grid of fixed-width symbols and
//! encoded into `n` projections, each a vector of XOR bins taken along
//! lines of an integer direction `(p, q)`. Any sufficiently large subset
//! of projections rebuilds the grid by iterative peeling: a bin covering
//! exactly one unknown cell reveals that cell, which is then cancelled
//! from every other bin containing it.
//!
//! Two systematic direction families are provided, one with `q = 1`
//! (reconstruction from any `k` projections) and one with even `q`
//! (reconstruction from any `ceil(k/q_e)`). The analytics half of the
//! crate quantifies their retrieval overhead exactly as rationals, gives
//! the matching closed forms and asymptotics, and evaluates the known
//! upper and lower bounds on how many projections such codes support.
//!
//! ```
//! use ambx_core::{encode, decode, CodeSpec, Construction, DataGrid, DecodeStatus};
//!
//! let spec = CodeSpec::new(Construction::C33, 5, 3, 4, 8).unwrap();
//! let grid = DataGrid::from_bytes(b"hello projections", 4, 3, 8).unwrap();
//! let projections = encode(&grid, &spec).unwrap();
//! // Lose two of five projections, then rebuild from the rest.
//! let survivors = vec![projections[0].clone(), projections[2].clone(), projections[3].clone()];
//! let out = decode(&spec, &survivors).unwrap();
//! assert_eq!(out.report.status, DecodeStatus::Success);
//! assert_eq!(out.grid.to_data_grid().unwrap(), grid);
//! ```

mod bounds;
mod code;
mod construction;
mod decoder;
mod direction;
mod encoder;
mod error;
mod grid;
mod overhead;
mod rat;
mod symbol;

pub use bounds::{
    bound_classical_k_eq_sigma, bound_classical_limit, bound_amds_rhs, bound_amds_rhs_forms,
    epsilon_model, min_rate_curve, n_lower_bound_c33, solve_n_max, bound_amds_hypotheses,
    BoundConstruction, BoundQuery, BoundResult, HypothesisCheck, MinRatePoint, NMax,
    SolveFormula, DEFAULT_SCAN_CAP, HYP_DENOMINATOR_POSITIVE, HYP_SIGMA_BELOW_RATIO,
    HYP_SIGMA_GT_2,
};
pub use code::CodeSpec;
pub use construction::{
    code_sigma, directions_c33, directions_c35, max_degree, measured_max_degree, validate,
    Construction, Finding, FindingCode,
};
pub use decoder::{
    decodable, decode, decode_with, DecodeOptions, DecodeOutput, DecodeReport, DecodeStatus,
    PartialGrid, PeelStep,
};
pub use direction::Direction;
pub use encoder::{bin_degree_map, bin_index, encode, projection_length, Projection};
pub use error::CodecError;
pub use grid::DataGrid;
pub use overhead::{
    coded_volume_relative_error, overhead_asymptotic_c33, overhead_asymptotic_c35,
    overhead_exact, overhead_exact_enumerated, phi, sum_abs_p_c33, sum_abs_p_c35,
    OverheadReport,
};
pub use rat::Rat;
pub use symbol::SymbolBuf;
