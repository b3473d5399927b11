//! End-to-end checks of the stability inequality, its Neumann limit and the
//! sharpness of the squared asymmetry, with CSV reporting.

mod corpus;
mod ladder;
mod report;
mod sharpness;
mod verify;

pub use corpus::{load_domain_file, run_corpus, CorpusReport, CorpusRow};
pub use ladder::{FemSettings, Richardson};
pub use report::{write_csv, CaseRow, CSV_COLUMNS};
pub use sharpness::{fit_power_law, sharpness_sweep, SharpnessRow, SharpnessTable};
pub use verify::{neumann_limit_check, verify_main_inequality, verify_with, NeumannLimitReport, StabilityReport};
