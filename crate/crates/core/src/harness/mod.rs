//! Scenario files, runs, comparisons, sweeps, and output.

pub mod emit;
pub mod run;
pub mod scenario;

pub use emit::{emit, read_json, row, write_csv, write_json, EmitFormat, EmittedTable, COLUMNS};
pub use run::{
    analytic_trajectory, compare, compare_scenario, run_scenario, sweep, ComparisonReport,
    ObservableDeviation, RunOutput, SmallParameters, SweepPoint,
};
pub use scenario::{from_document, parse_scenario, with_leaf, Mode, Scenario, ScenarioDocument};
