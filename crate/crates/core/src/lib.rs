//! Bidirectional people counting over 8-bit grayscale frame sequences.
//!
//! Frames pass through a running-average background model, morphological
//! opening and shape-filtered blob detection. The surviving blobs are
//! tracked by greedy nearest-centroid association, and every track is
//! counted once per full traversal between two horizontal lines.
//!
//! ```
//! use people_counter::{pipeline, synthetic::CrossingPlan, PipelineConfig};
//!
//! let plan = CrossingPlan { down: 1, up: 1, frames: 120, ..CrossingPlan::default() };
//! let scene = plan.scene();
//! let report = pipeline::run(scene.frames()?.map(Ok), &PipelineConfig::default(), None)?;
//! assert_eq!((report.counters.in_count(), report.counters.out_count()), (1, 1));
//! # Ok::<(), people_counter::Error>(())
//! ```

pub mod background;
pub mod blob;
pub mod cli;
pub mod config;
pub mod error;
pub mod frame_io;
pub mod line_counter;
pub mod mask;
pub mod metrics;
pub mod pipeline;
pub mod synthetic;
pub mod tracker;

pub use background::{BackgroundModel, BackgroundParams};
pub use blob::{detect_blobs, BlobFilterParams, BlobKeypoint, BlobMeasurements, Connectivity};
pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use frame_io::{Frame, FrameSequence, SequenceSpec};
pub use line_counter::{Counters, CrossEvent, Direction, LinePair, Zone};
pub use mask::{morph_open, BinaryMask};
pub use metrics::{accuracy_pct, Accuracies, CountReport, GroundTruth};
pub use pipeline::Pipeline;
pub use synthetic::{ActorSpec, CrossingPlan, SceneSpec};
pub use tracker::{Tracker, TrackerConfig};
