//! Experiment drivers: theorem verification runs, exact sieve identities,
//! `2 delta` comparisons for the sieve lemmas, the lower-bound construction,
//! and deterministic CSV/JSON reports.

mod config;
mod identities;
mod lower_bound;
mod report;
mod theorem;

pub use config::{parse_count, DegreePolicy, ExperimentConfig, WindowSpec, XPoint, XSource};
pub use identities::{
    run_buchstab_check, run_role_reversal_check, run_sieve_lemma_check, DecompositionReport, SetChoice, SieveRegion,
    ROLE_REVERSAL_X_LIMIT, SIEVE_LEMMA_X_LIMIT,
};
pub use lower_bound::{run_lower_bound_demo, LowerBoundReport, LOWER_BOUND_X_LIMIT};
pub use report::{emit_report, format_real, render_report, Cell, ReportFormat, Tabular};
pub use theorem::{run_squarefree_theorem, run_theorem, theorem_row, TheoremRow, BRACKET_X_LIMIT};
