use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::background::BackgroundParams;
use crate::blob::{BlobFilterParams, Connectivity};
use crate::error::{Error, Result};
use crate::line_counter::LinePair;
use crate::tracker::TrackerConfig;

/// Smallest frame edge the pipeline accepts.
pub const MIN_FRAME_DIM: usize = 8;

/// Every tunable of the counting pipeline. Also the JSON config-file schema;
/// missing keys take their defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub background: BackgroundParams,
    pub blob: BlobFilterParams,
    pub connectivity: Connectivity,
    pub tracker: TrackerConfig,
    /// `None` places the lines at one and two thirds of the frame height.
    pub lines: Option<LinePair>,
    /// Count increasing-y traversals as OUT instead of IN.
    pub invert_direction: bool,
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Checks everything that does not depend on the frame geometry.
    pub fn validate(&self) -> Result<()> {
        self.background.validate()?;
        self.blob.validate()?;
        self.tracker.validate()?;
        Ok(())
    }

    /// Fills frame-dependent defaults and checks the result against the
    /// frame geometry. An unset `max_area` becomes a quarter of the frame
    /// area, raised to `min_area` on small frames.
    pub fn resolve(&self, width: usize, height: usize) -> Result<Self> {
        self.validate()?;
        if width < MIN_FRAME_DIM || height < MIN_FRAME_DIM {
            return Err(Error::Config(format!(
                "frames of {width}x{height} are below the {MIN_FRAME_DIM}x{MIN_FRAME_DIM} minimum"
            )));
        }
        let lines = match self.lines {
            Some(lines) => lines,
            None => LinePair::thirds(height)?,
        };
        lines.check_within(height)?;
        let mut resolved = self.clone();
        resolved.lines = Some(lines);
        let quarter = (width * height / 4).max(self.blob.min_area);
        resolved.blob.max_area = Some(self.blob.max_area.unwrap_or(quarter));
        resolved.blob.validate()?;
        Ok(resolved)
    }
}
