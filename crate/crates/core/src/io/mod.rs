//! Configuration files, CSV tables, manifests and artifact comparison.

mod artifacts;
mod compare;
mod config;
mod manifest;
mod tables;

pub use artifacts::{
    execute_run, execute_sweep, write_tables, HISTOGRAMS_FILE, PROFILES_FILE, SWEEP_FILE,
    TIMESERIES_FILE,
};
pub use compare::{
    compare_artifacts, judge, measure_run, Comparison, ComparisonSpec, Quantity, COMPARISON_HEADER,
};
pub use config::{KickName, Overrides, RunConfig, DEFAULT_F};
pub use manifest::{
    digest_file, timestamp, ArtifactKind, FileDigest, RunManifest, SweepInfo, MANIFEST_FILE,
};
pub use tables::{
    histogram_rows, profiles_from_stats, read_profiles, read_rows, read_timeseries, write_profiles,
    write_rows, write_timeseries, HistogramRow, SweepRow, Timeseries, HISTOGRAM_HEADER,
    PROFILES_HEADER, SWEEP_HEADER, TIMESERIES_HEADER,
};
