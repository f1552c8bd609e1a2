//! Per-frame orchestration: subtract, clean, detect, track, count.

use crate::background::BackgroundModel;
use crate::blob::{detect_blobs, BlobKeypoint};
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::frame_io::Frame;
use crate::line_counter::{Counters, CrossEvent, LinePair};
use crate::mask::{morph_open, BinaryMask};
use crate::metrics::{build_report, CountReport, GroundTruth};
use crate::tracker::{Track, Tracker};

/// Streaming state for one frame sequence.
///
/// The first frame seeds the background model and fixes the geometry.
/// Frames counted against the warmup only update the model; every later
/// frame is subtracted against the estimate from before its own update.
#[derive(Debug, Clone)]
pub struct Pipeline {
    requested: PipelineConfig,
    stream: Option<Stream>,
    tracker: Tracker,
    counters: Counters,
    events: Vec<CrossEvent>,
    processed: u64,
    last_index: Option<u64>,
    last_mask: Option<BinaryMask>,
    last_keypoints: Vec<BlobKeypoint>,
}

#[derive(Debug, Clone)]
struct Stream {
    config: PipelineConfig,
    lines: LinePair,
    model: BackgroundModel,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        let tracker = Tracker::new(config.tracker)?;
        Ok(Self {
            requested: config,
            stream: None,
            tracker,
            counters: Counters::default(),
            events: Vec::new(),
            processed: 0,
            last_index: None,
            last_mask: None,
            last_keypoints: Vec::new(),
        })
    }

    /// Feeds one frame and returns the events it produced, ordered by track id.
    pub fn process_frame(&mut self, frame: &Frame) -> Result<Vec<CrossEvent>> {
        if let Some(last) = self.last_index {
            if frame.index() <= last {
                return Err(Error::Order {
                    last,
                    got: frame.index(),
                });
            }
        }
        let stream = match &mut self.stream {
            Some(stream) => {
                let expected = stream.model.dimensions();
                if frame.dimensions() != expected {
                    return Err(Error::shape(expected, frame.dimensions()));
                }
                stream
            }
            None => {
                let config = self.requested.resolve(frame.width(), frame.height())?;
                let model = BackgroundModel::from_params(frame, &config.background)?;
                let lines = config.lines.expect("resolved config carries lines");
                self.stream.insert(Stream {
                    config,
                    lines,
                    model,
                })
            }
        };
        self.last_index = Some(frame.index());
        self.processed += 1;

        if self.processed <= stream.config.background.warmup {
            stream.model.update(frame)?;
            self.last_mask = None;
            self.last_keypoints.clear();
            return Ok(Vec::new());
        }

        let raw = stream.model.subtract(frame)?;
        stream.model.update(frame)?;
        let mask = morph_open(&raw, stream.config.background.morph_radius)?;
        let keypoints = detect_blobs(&mask, &stream.config.blob, stream.config.connectivity)?;
        let outcome = self.tracker.step(&keypoints, frame.index())?;

        let mut emitted = Vec::new();
        for id in outcome.updated {
            let track = self.tracker.track_mut(id).expect("updated track is live");
            let (state, event) =
                track
                    .zone_state
                    .advance(track.last_centroid(), &stream.lines, frame.index(), id);
            track.zone_state = state;
            if let Some(mut event) = event {
                if stream.config.invert_direction {
                    event.direction = event.direction.flipped();
                }
                self.counters = self.counters.apply_event(&event);
                emitted.push(event);
            }
        }
        self.events.extend_from_slice(&emitted);
        self.last_mask = Some(mask);
        self.last_keypoints = keypoints;
        Ok(emitted)
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    /// Every event so far, in frame order.
    pub fn events(&self) -> &[CrossEvent] {
        &self.events
    }

    pub fn tracks(&self) -> &[Track] {
        self.tracker.tracks()
    }

    /// Cleaned mask of the last frame; `None` during warmup.
    pub fn last_mask(&self) -> Option<&BinaryMask> {
        self.last_mask.as_ref()
    }

    /// Keypoints of the last frame; empty during warmup.
    pub fn last_keypoints(&self) -> &[BlobKeypoint] {
        &self.last_keypoints
    }

    pub fn frames_processed(&self) -> u64 {
        self.processed
    }

    /// Configuration with frame-dependent defaults filled in, once the first
    /// frame has been seen.
    pub fn resolved_config(&self) -> Option<&PipelineConfig> {
        self.stream.as_ref().map(|s| &s.config)
    }

    pub fn background(&self) -> Option<&BackgroundModel> {
        self.stream.as_ref().map(|s| &s.model)
    }

    pub fn into_report(self, ground_truth: Option<GroundTruth>) -> Result<CountReport> {
        let params = self
            .stream
            .map(|s| s.config)
            .ok_or_else(|| Error::EmptySequence("no frames processed".into()))?;
        build_report(self.counters, self.events, ground_truth, params)
    }
}

/// Folds a whole sequence through a fresh pipeline.
pub fn run<I>(
    frames: I,
    config: &PipelineConfig,
    ground_truth: Option<GroundTruth>,
) -> Result<CountReport>
where
    I: IntoIterator<Item = Result<Frame>>,
{
    run_with(frames, config, ground_truth, |_, _| Ok(()))
}

/// [`run`] with a callback invoked after each frame is processed.
pub fn run_with<I, F>(
    frames: I,
    config: &PipelineConfig,
    ground_truth: Option<GroundTruth>,
    mut after_frame: F,
) -> Result<CountReport>
where
    I: IntoIterator<Item = Result<Frame>>,
    F: FnMut(&Pipeline, &Frame) -> Result<()>,
{
    let mut pipeline = Pipeline::new(config.clone())?;
    for frame in frames {
        let frame = frame?;
        pipeline.process_frame(&frame)?;
        after_frame(&pipeline, &frame)?;
    }
    pipeline.into_report(ground_truth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_counter::Direction;
    use crate::synthetic::{ActorSpec, SceneSpec};

    fn crosser(dy: f64, start_y: f64) -> ActorSpec {
        ActorSpec {
            radius: 8.0,
            start: (48.0, start_y),
            velocity: (0.0, dy),
            spawn_frame: 12,
            despawn_frame: 12 + 30,
            intensity: 200,
        }
    }

    fn scene(actors: Vec<ActorSpec>) -> SceneSpec {
        SceneSpec {
            width: 96,
            height: 120,
            frames: 60,
            background_intensity: 40,
            noise_amplitude: 0,
            seed: 3,
            actors,
        }
    }

    fn config() -> PipelineConfig {
        let mut cfg = PipelineConfig::default();
        cfg.background.warmup = 10;
        cfg
    }

    fn frames(s: &SceneSpec) -> impl Iterator<Item = Result<Frame>> + '_ {
        s.frames().unwrap().map(Ok)
    }

    #[test]
    fn warmup_frames_emit_nothing() {
        let s = scene(vec![crosser(4.0, 10.0)]);
        let mut p = Pipeline::new(config()).unwrap();
        for i in 0..10 {
            assert!(p.process_frame(&s.render_frame(i)).unwrap().is_empty());
            assert!(p.last_mask().is_none());
        }
        assert!(p.process_frame(&s.render_frame(10)).unwrap().is_empty());
        assert!(p.last_mask().is_some());
    }

    #[test]
    fn single_down_crosser_counts_one_in() {
        let s = scene(vec![crosser(4.0, 10.0)]);
        let report = run(frames(&s), &config(), None).unwrap();
        assert_eq!(report.counters, Counters::new(1, 0));
        assert_eq!(report.events.len(), 1);
        assert_eq!(report.events[0].direction, Direction::In);
    }

    #[test]
    fn invert_direction_flips_the_count() {
        let s = scene(vec![crosser(4.0, 10.0)]);
        let cfg = PipelineConfig {
            invert_direction: true,
            ..config()
        };
        assert_eq!(
            run(frames(&s), &cfg, None).unwrap().counters,
            Counters::new(0, 1)
        );
    }

    #[test]
    fn single_up_crosser_counts_one_out() {
        let s = scene(vec![crosser(-4.0, 110.0)]);
        let report = run(frames(&s), &config(), None).unwrap();
        assert_eq!(report.counters, Counters::new(0, 1));
    }

    #[test]
    fn empty_sequence_is_an_error() {
        let none: Vec<Result<Frame>> = Vec::new();
        assert!(matches!(
            run(none, &config(), None),
            Err(Error::EmptySequence(_))
        ));
    }

    #[test]
    fn geometry_change_is_a_shape_error() {
        let mut p = Pipeline::new(config()).unwrap();
        p.process_frame(&Frame::filled(32, 32, 0, 9).unwrap())
            .unwrap();
        let err = p
            .process_frame(&Frame::filled(32, 31, 1, 9).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }

    #[test]
    fn repeated_index_is_an_order_error() {
        let mut p = Pipeline::new(config()).unwrap();
        p.process_frame(&Frame::filled(32, 32, 4, 9).unwrap())
            .unwrap();
        let err = p
            .process_frame(&Frame::filled(32, 32, 4, 9).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::Order { last: 4, got: 4 }));
    }

    #[test]
    fn tiny_frames_are_rejected() {
        let mut p = Pipeline::new(config()).unwrap();
        let err = p
            .process_frame(&Frame::filled(4, 4, 0, 9).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn report_carries_resolved_params() {
        let s = scene(vec![]);
        let report = run(frames(&s), &config(), None).unwrap();
        assert_eq!(report.params.lines, Some(LinePair::new(40, 80).unwrap()));
        assert_eq!(report.params.blob.max_area, Some(96 * 120 / 4));
    }
}
