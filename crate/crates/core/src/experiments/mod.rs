//! Sweeps over graphs, sizes and round counts, written as CSV.
//!
//! A sweep visits every `(n, p, graph_index)` in that order and produces one
//! [`RunRecord`] per graph. [`run_sweep_to`] streams records to disk as they
//! finish:
//!
//! * `<out>.csv`: one summary row per record, columns [`CSV_HEADER`];
//! * `<out>.json`: the [`SweepConfig`] that produced it;
//! * `<out>.endpoints.csv`: every descent endpoint;
//! * `<out>.radii.csv`: every probe radius (basin modes only).
//!
//! Results depend only on the configuration, never on the thread count.

mod config;
mod records;
mod sweep;

pub use config::{Mode, PRule, SweepConfig};
pub use records::{
    coefficient_of_variation, read_endpoints, read_records, read_sidecar, write_sidecar, Endpoint, OutputPaths,
    ProbedMinimum, RecordKey, RecordSink, RunRecord, CSV_HEADER, CSV_SCHEMA_VERSION, ENDPOINT_HEADER, RADII_HEADER,
};
pub use sweep::{
    analyze_objective, instance_seed, run_instance, run_quality_sweep, run_quantity_sweep, run_radius_stats,
    run_sweep, run_sweep_to, sweep_graph, sweep_keys, InstanceAnalysis, SweepSummary,
};
