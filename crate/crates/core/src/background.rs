//! Running-average background model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame_io::Frame;
use crate::mask::BinaryMask;

/// Tunables of the background stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackgroundParams {
    /// Learning rate in (0, 1).
    pub alpha: f64,
    /// Absolute intensity difference above which a pixel is foreground.
    pub threshold: f64,
    /// Frames used only to settle the model.
    pub warmup: u64,
    /// Radius of the square opening applied to each mask.
    pub morph_radius: usize,
}

impl Default for BackgroundParams {
    fn default() -> Self {
        Self {
            alpha: 0.02,
            threshold: 25.0,
            warmup: 30,
            morph_radius: 1,
        }
    }
}

impl BackgroundParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha {} outside (0, 1)",
                self.alpha
            )));
        }
        if !(self.threshold > 0.0 && self.threshold <= 255.0) {
            return Err(Error::Config(format!(
                "threshold {} outside (0, 255]",
                self.threshold
            )));
        }
        if self.morph_radius == 0 {
            return Err(Error::Config("morph radius must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-pixel exponential moving average of the scene.
///
/// Every frame is blended in, foreground included, so the update stays a
/// pure linear recurrence: `estimate' = estimate + alpha * (frame - estimate)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundModel {
    width: usize,
    height: usize,
    estimate: Vec<f64>,
    alpha: f64,
    threshold: f64,
    warmup: u64,
}

impl BackgroundModel {
    /// Seeds the estimate with `first` exactly.
    pub fn init(first: &Frame, alpha: f64, threshold: f64, warmup: u64) -> Result<Self> {
        BackgroundParams {
            alpha,
            threshold,
            warmup,
            morph_radius: 1,
        }
        .validate()?;
        Ok(Self {
            width: first.width(),
            height: first.height(),
            estimate: first.pixels().iter().map(|&p| f64::from(p)).collect(),
            alpha,
            threshold,
            warmup,
        })
    }

    pub fn from_params(first: &Frame, params: &BackgroundParams) -> Result<Self> {
        params.validate()?;
        Self::init(first, params.alpha, params.threshold, params.warmup)
    }

    pub fn estimate(&self) -> &[f64] {
        &self.estimate
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn warmup(&self) -> u64 {
        self.warmup
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Whether a mask computed for the frame at `index` should be discarded.
    pub fn in_warmup(&self, index: u64) -> bool {
        index < self.warmup
    }

    fn check_shape(&self, frame: &Frame) -> Result<()> {
        if frame.dimensions() != (self.width, self.height) {
            return Err(Error::shape((self.width, self.height), frame.dimensions()));
        }
        Ok(())
    }

    pub fn update(&mut self, frame: &Frame) -> Result<()> {
        self.check_shape(frame)?;
        let alpha = self.alpha;
        for (e, &p) in self.estimate.iter_mut().zip(frame.pixels()) {
            *e = (*e + alpha * (f64::from(p) - *e)).clamp(0.0, 255.0);
        }
        Ok(())
    }

    /// Foreground where `|frame - estimate| > threshold`.
    pub fn subtract(&self, frame: &Frame) -> Result<BinaryMask> {
        self.check_shape(frame)?;
        let threshold = self.threshold;
        let bits = self
            .estimate
            .iter()
            .zip(frame.pixels())
            .map(|(&e, &p)| (f64::from(p) - e).abs() > threshold)
            .collect();
        BinaryMask::new(self.width, self.height, bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frame(w: usize, h: usize, v: u8) -> Frame {
        Frame::filled(w, h, 0, v).unwrap()
    }

    #[test]
    fn init_copies_first_frame() {
        let m = BackgroundModel::init(&frame(8, 8, 128), 0.02, 25.0, 30).unwrap();
        assert!(m.estimate().iter().all(|&e| e == 128.0));
    }

    #[test]
    fn init_rejects_bad_parameters() {
        let f = frame(8, 8, 0);
        assert!(matches!(
            BackgroundModel::init(&f, 0.0, 25.0, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            BackgroundModel::init(&f, 1.5, 25.0, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            BackgroundModel::init(&f, 0.5, 0.0, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            BackgroundModel::init(&f, 0.5, 256.0, 0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn half_alpha_averages() {
        let mut m = BackgroundModel::init(&frame(8, 8, 100), 0.5, 25.0, 0).unwrap();
        m.update(&frame(8, 8, 200)).unwrap();
        assert!(m.estimate().iter().all(|&e| e == 150.0));
    }

    #[test]
    fn matching_frame_is_a_fixed_point() {
        let pixels: Vec<u8> = (0..64).map(|i| (i * 4) as u8).collect();
        let f = Frame::new(8, 8, 0, pixels).unwrap();
        let mut m = BackgroundModel::init(&f, 0.02, 25.0, 0).unwrap();
        let before = m.estimate().to_vec();
        for _ in 0..50 {
            m.update(&f).unwrap();
        }
        assert_eq!(m.estimate(), &before[..]);
    }

    #[test]
    fn two_hundred_updates_toward_constant() {
        // Scalar recurrence iterated independently of the model.
        let mut oracle = 0.0f64;
        for _ in 0..200 {
            oracle = 0.98 * oracle + 0.02 * 200.0;
        }
        // 200 * 0.98^200 ≈ 3.52 remains.
        assert!((200.0 - oracle - 3.5175).abs() < 1e-3, "{oracle}");

        let mut m = BackgroundModel::init(&frame(8, 8, 0), 0.02, 25.0, 0).unwrap();
        for _ in 0..200 {
            m.update(&frame(8, 8, 200)).unwrap();
        }
        for &e in m.estimate() {
            assert!((e - oracle).abs() < 1e-9, "{e} vs {oracle}");
        }
    }

    #[test]
    fn subtract_marks_only_the_changed_pixel() {
        let m = BackgroundModel::init(&frame(8, 8, 100), 0.02, 25.0, 0).unwrap();
        assert!(m.subtract(&frame(8, 8, 100)).unwrap().is_empty());
        let mut pixels = vec![100u8; 64];
        pixels[19] = 126;
        let mask = m.subtract(&Frame::new(8, 8, 1, pixels).unwrap()).unwrap();
        assert_eq!(mask.count_ones(), 1);
        assert!(mask.bits()[19]);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut m = BackgroundModel::init(&frame(8, 8, 0), 0.02, 25.0, 0).unwrap();
        assert!(matches!(
            m.update(&frame(9, 8, 0)),
            Err(Error::Shape { .. })
        ));
        assert!(matches!(
            m.subtract(&frame(8, 9, 0)),
            Err(Error::Shape { .. })
        ));
    }

    fn frame_pair() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
        (
            proptest::collection::vec(any::<u8>(), 64),
            proptest::collection::vec(any::<u8>(), 64),
        )
    }

    proptest! {
        #[test]
        fn subtract_matches_per_pixel_definition((a, b) in frame_pair(), t in 1u8..=255) {
            let bg = Frame::new(8, 8, 0, a.clone()).unwrap();
            let fr = Frame::new(8, 8, 1, b.clone()).unwrap();
            let m = BackgroundModel::init(&bg, 0.1, f64::from(t), 0).unwrap();
            let mask = m.subtract(&fr).unwrap();
            for i in 0..64 {
                let expected = (i32::from(a[i]) - i32::from(b[i])).abs() > i32::from(t);
                prop_assert_eq!(mask.bits()[i], expected);
            }
            // Swapping roles leaves the mask unchanged.
            let swapped = BackgroundModel::init(&fr, 0.1, f64::from(t), 0).unwrap();
            prop_assert_eq!(swapped.subtract(&bg).unwrap(), mask);
        }

        #[test]
        fn estimate_stays_in_range(frames in proptest::collection::vec(any::<u8>(), 1..40), alpha in 0.001f64..0.999) {
            let mut m = BackgroundModel::init(&frame(8, 8, frames[0]), alpha, 25.0, 0).unwrap();
            for &v in &frames {
                m.update(&frame(8, 8, v)).unwrap();
                prop_assert!(m.estimate().iter().all(|&e| (0.0..=255.0).contains(&e)));
            }
        }
    }
}
