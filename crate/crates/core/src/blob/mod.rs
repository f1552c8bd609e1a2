//! Blob analysis: connected components, shape metrics and head keypoints.

mod labeling;
mod measure;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

pub use labeling::{label_components, ComponentLabels, Connectivity};
pub use measure::{
    circularity, circularity_of, convexity, inertia_ratio, measure, measure_all, BlobMeasurements,
    BoundingBox, SecondMoments,
};

/// A detected blob reduced to its center `(x, y)` and equivalent-circle
/// diameter `s`, with the shape metrics it passed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlobKeypoint {
    pub centroid: (f64, f64),
    pub diameter_s: f64,
    pub circularity: f64,
    pub convexity: f64,
    pub inertia_ratio: f64,
}

/// Diameter of the circle with the same area.
pub fn equivalent_diameter(area: usize) -> f64 {
    2.0 * (area as f64 / PI).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlobFilterParams {
    pub min_area: usize,
    /// `None` means unbounded. The pipeline resolves it to a quarter of the
    /// frame area.
    pub max_area: Option<usize>,
    pub min_circularity: f64,
    pub min_convexity: f64,
    pub min_inertia_ratio: f64,
}

impl Default for BlobFilterParams {
    fn default() -> Self {
        Self {
            min_area: 80,
            max_area: None,
            min_circularity: 0.5,
            min_convexity: 0.7,
            min_inertia_ratio: 0.3,
        }
    }
}

impl BlobFilterParams {
    /// Filters that keep every blob.
    pub fn permissive() -> Self {
        Self {
            min_area: 1,
            max_area: None,
            min_circularity: 0.0,
            min_convexity: 0.0,
            min_inertia_ratio: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_area < 1 {
            return Err(Error::Config("min_area must be at least 1".into()));
        }
        if let Some(max) = self.max_area {
            if max < self.min_area {
                return Err(Error::Config(format!(
                    "max_area {max} below min_area {}",
                    self.min_area
                )));
            }
        }
        for (name, v) in [
            ("min_circularity", self.min_circularity),
            ("min_convexity", self.min_convexity),
            ("min_inertia_ratio", self.min_inertia_ratio),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} {v} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Applies the filters to one measured blob. Metrics that are undefined
    /// for the blob (zero perimeter, collinear pixels, single pixel) count
    /// as 0.
    pub fn keypoint(&self, m: &BlobMeasurements) -> Option<BlobKeypoint> {
        if m.area < self.min_area || self.max_area.is_some_and(|max| m.area > max) {
            return None;
        }
        let circularity = m.circularity().unwrap_or(0.0);
        let convexity = m.convexity().unwrap_or(0.0);
        let inertia_ratio = m.inertia_ratio().unwrap_or(0.0);
        if circularity < self.min_circularity
            || convexity < self.min_convexity
            || inertia_ratio < self.min_inertia_ratio
        {
            return None;
        }
        Some(BlobKeypoint {
            centroid: m.centroid,
            diameter_s: equivalent_diameter(m.area),
            circularity,
            convexity,
            inertia_ratio,
        })
    }
}

/// Keypoints for the components passing every filter, in label order.
pub fn detect_blobs(
    mask: &BinaryMask,
    params: &BlobFilterParams,
    connectivity: Connectivity,
) -> Result<Vec<BlobKeypoint>> {
    params.validate()?;
    let labels = label_components(mask, connectivity);
    Ok(measure_all(&labels)
        .iter()
        .filter_map(|m| params.keypoint(m))
        .collect())
}
