//! Serialization, size accounting, presets and benchmarks.

pub mod bench;
pub mod document;
pub mod presets;
pub mod size;

pub use bench::{bench, BenchReport, BenchScheme, SizeStats, Stats};
pub use document::{deserialize, serialize, Artifact};
pub use presets::{ParamSet, Preset};
pub use size::{size_metric, SizeMetric, SizeReport};
