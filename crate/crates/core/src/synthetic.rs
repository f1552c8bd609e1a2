//! Deterministic synthetic scenes of moving disk "heads" with exact
//! ground-truth crossing counts.
//!
//! Frame `f` is the background intensity plus uniform integer noise in
//! `[-noise_amplitude, noise_amplitude]` (drawn from a ChaCha stream keyed by
//! the seed and `f`), with every live actor painted on top as a filled disk.
//! An actor is live on `spawn_frame <= f < despawn_frame` and centered at
//! `start + (f - spawn_frame) * velocity`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame_io::Frame;
use crate::line_counter::{Direction, LinePair};
use crate::metrics::GroundTruth;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActorSpec {
    pub radius: f64,
    pub start: (f64, f64),
    /// Pixels per frame.
    pub velocity: (f64, f64),
    pub spawn_frame: u64,
    /// Exclusive.
    pub despawn_frame: u64,
    pub intensity: u8,
}

impl ActorSpec {
    pub fn is_live(&self, frame: u64) -> bool {
        self.spawn_frame <= frame && frame < self.despawn_frame
    }

    pub fn center(&self, frame: u64) -> (f64, f64) {
        let t = frame.saturating_sub(self.spawn_frame) as f64;
        (
            self.start.0 + t * self.velocity.0,
            self.start.1 + t * self.velocity.1,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub frames: u64,
    pub background_intensity: u8,
    #[serde(default)]
    pub noise_amplitude: u8,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub actors: Vec<ActorSpec>,
}

impl SceneSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("scene spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serialization is infallible")
    }

    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 {
            return Err(Error::Config("scene has zero frames".into()));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::Config(format!(
                "scene geometry {}x{} has a zero dimension",
                self.width, self.height
            )));
        }
        for (i, a) in self.actors.iter().enumerate() {
            if !(a.radius >= 2.0 && a.radius.is_finite()) {
                return Err(Error::Config(format!(
                    "actor {i}: radius {} below 2",
                    a.radius
                )));
            }
            if a.despawn_frame <= a.spawn_frame {
                return Err(Error::Config(format!(
                    "actor {i}: despawns before it spawns"
                )));
            }
            let finite = [a.start.0, a.start.1, a.velocity.0, a.velocity.1]
                .iter()
                .all(|v| v.is_finite());
            if !finite {
                return Err(Error::Config(format!("actor {i}: non-finite motion")));
            }
        }
        Ok(())
    }

    pub fn render_frame(&self, index: u64) -> Frame {
        let (w, h) = (self.width, self.height);
        let mut pixels = vec![self.background_intensity; w * h];
        if self.noise_amplitude > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(index);
            let amp = i16::from(self.noise_amplitude);
            for p in pixels.iter_mut() {
                let v = i16::from(*p) + rng.gen_range(-amp..=amp);
                *p = v.clamp(0, 255) as u8;
            }
        }
        for actor in self.actors.iter().filter(|a| a.is_live(index)) {
            paint_disk(
                &mut pixels,
                w,
                h,
                actor.center(index),
                actor.radius,
                actor.intensity,
            );
        }
        Frame::new(w, h, index, pixels).expect("geometry validated")
    }

    /// Streams every frame of the scene in order.
    pub fn frames(&self) -> Result<impl Iterator<Item = Frame> + '_> {
        self.validate()?;
        Ok((0..self.frames).map(move |i| self.render_frame(i)))
    }
}

/// Fills pixels whose centers lie within `radius` of `center`, clipped to
/// the frame.
pub fn paint_disk(
    pixels: &mut [u8],
    width: usize,
    height: usize,
    center: (f64, f64),
    radius: f64,
    value: u8,
) {
    let (cx, cy) = center;
    let r2 = radius * radius;
    let x0 = (cx - radius).floor().max(0.0) as usize;
    let y0 = (cy - radius).floor().max(0.0) as usize;
    let x1 = ((cx + radius).ceil().max(-1.0) as i64).min(width as i64 - 1);
    let y1 = ((cy + radius).ceil().max(-1.0) as i64).min(height as i64 - 1);
    if x1 < 0 || y1 < 0 {
        return;
    }
    for y in y0..=y1 as usize {
        for x in x0..=x1 as usize {
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            if dx * dx + dy * dy <= r2 {
                pixels[y * width + x] = value;
            }
        }
    }
}

pub fn render_scene(spec: &SceneSpec) -> Result<Vec<Frame>> {
    Ok(spec.frames()?.collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCrossing {
    pub frame: u64,
    pub actor: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneTruth {
    pub truth: GroundTruth,
    /// Ordered by frame, then actor index.
    pub crossings: Vec<ExpectedCrossing>,
}

/// Exact IN/OUT counts from the actors' analytic trajectories.
///
/// Each actor's center is classified per live frame into a zone string
/// (`'A'` above `line_in_y`, `'B'` below `line_out_y`, `'M'` otherwise) and
/// the string is scanned for completed A→B and B→A legs.
pub fn ground_truth_events(spec: &SceneSpec, lines: &LinePair) -> SceneTruth {
    let mut crossings = Vec::new();
    for (actor_idx, actor) in spec.actors.iter().enumerate() {
        let first = actor.spawn_frame;
        let last = actor.despawn_frame.min(spec.frames);
        let zones: String = (first..last)
            .map(|f| {
                let y = actor.center(f).1;
                if y < lines.line_in_y as f64 {
                    'A'
                } else if y > lines.line_out_y as f64 {
                    'B'
                } else {
                    'M'
                }
            })
            .collect();
        for (offset, direction) in scan_legs(&zones) {
            crossings.push(ExpectedCrossing {
                frame: first + offset as u64,
                actor: actor_idx,
                direction,
            });
        }
    }
    crossings.sort_by_key(|c| (c.frame, c.actor));
    let true_in = crossings
        .iter()
        .filter(|c| c.direction == Direction::In)
        .count() as u64;
    let true_out = crossings.len() as u64 - true_in;
    SceneTruth {
        truth: GroundTruth::new(true_in, true_out),
        crossings,
    }
}

/// Positions in a zone string where a leg completes. Middle-zone characters
/// are dropped first; a leg is then any change between `A` and `B`.
fn scan_legs(zones: &str) -> Vec<(usize, Direction)> {
    let ends: Vec<(usize, char)> = zones.char_indices().filter(|&(_, c)| c != 'M').collect();
    ends.windows(2)
        .filter_map(|w| match (w[0].1, w[1].1) {
            ('A', 'B') => Some((w[1].0, Direction::In)),
            ('B', 'A') => Some((w[1].0, Direction::Out)),
            _ => None,
        })
        .collect()
}

/// Paired vertical crossings: `down` actors walk top to bottom in the left
/// lane and `up` actors bottom to top in the right lane, one pair per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingPlan {
    pub width: usize,
    pub height: usize,
    pub frames: u64,
    pub down: usize,
    pub up: usize,
    pub first_frame: u64,
    pub slot_frames: u64,
    pub radius: f64,
    /// Pixels per frame.
    pub speed: f64,
    /// Distance from the top and bottom edges of the path's end points.
    pub margin: f64,
    pub background_intensity: u8,
    pub actor_intensity: u8,
    pub noise_amplitude: u8,
    pub seed: u64,
}

impl Default for CrossingPlan {
    fn default() -> Self {
        Self {
            width: 320,
            height: 240,
            frames: 600,
            down: 8,
            up: 8,
            first_frame: 40,
            slot_frames: 65,
            radius: 10.0,
            speed: 4.0,
            margin: 20.0,
            background_intensity: 60,
            actor_intensity: 160,
            noise_amplitude: 5,
            seed: 7,
        }
    }
}

impl CrossingPlan {
    pub fn scene(&self) -> SceneSpec {
        let travel = self.height as f64 - 2.0 * self.margin;
        let lifetime = (travel / self.speed).floor() as u64 + 1;
        let top = self.margin;
        let bottom = self.height as f64 - self.margin;
        let mut actors = Vec::new();
        for slot in 0..self.down.max(self.up) {
            let spawn_frame = self.first_frame + slot as u64 * self.slot_frames;
            let actor = |x: f64, y: f64, dy: f64| ActorSpec {
                radius: self.radius,
                start: (x, y),
                velocity: (0.0, dy),
                spawn_frame,
                despawn_frame: spawn_frame + lifetime,
                intensity: self.actor_intensity,
            };
            if slot < self.down {
                actors.push(actor((self.width / 4) as f64, top, self.speed));
            }
            if slot < self.up {
                actors.push(actor((3 * self.width / 4) as f64, bottom, -self.speed));
            }
        }
        SceneSpec {
            width: self.width,
            height: self.height,
            frames: self.frames,
            background_intensity: self.background_intensity,
            noise_amplitude: self.noise_amplitude,
            seed: self.seed,
            actors,
        }
    }
}
