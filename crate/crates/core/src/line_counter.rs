//! Two-line IN/OUT counting.
//!
//! Two horizontal lines split the frame into zone A (above `line_in_y`),
//! zone M (between the lines, both lines included) and zone B (below
//! `line_out_y`). A track counts only when it completes a traversal from A
//! to B (IN) or from B to A (OUT); touching or oscillating over a single
//! line never counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLinePair", deny_unknown_fields)]
pub struct LinePair {
    pub line_in_y: usize,
    pub line_out_y: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLinePair {
    line_in_y: usize,
    line_out_y: usize,
}

impl TryFrom<RawLinePair> for LinePair {
    type Error = Error;

    fn try_from(raw: RawLinePair) -> Result<Self> {
        LinePair::new(raw.line_in_y, raw.line_out_y)
    }
}

impl LinePair {
    pub fn new(line_in_y: usize, line_out_y: usize) -> Result<Self> {
        if line_in_y >= line_out_y {
            return Err(Error::Config(format!(
                "line_in_y {line_in_y} must lie above line_out_y {line_out_y}"
            )));
        }
        Ok(Self {
            line_in_y,
            line_out_y,
        })
    }

    /// Lines at one and two thirds of the frame height.
    pub fn thirds(height: usize) -> Result<Self> {
        Self::new(height / 3, 2 * height / 3)
    }

    pub fn check_within(&self, height: usize) -> Result<()> {
        if self.line_out_y >= height {
            return Err(Error::Config(format!(
                "line_out_y {} outside frame of height {height}",
                self.line_out_y
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Zone {
    A,
    M,
    B,
}

pub fn classify_zone(centroid: (f64, f64), lines: &LinePair) -> Zone {
    let y = centroid.1;
    if y < lines.line_in_y as f64 {
        Zone::A
    } else if y > lines.line_out_y as f64 {
        Zone::B
    } else {
        Zone::M
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "OUT")]
    Out,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::In => Direction::Out,
            Direction::Out => Direction::In,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossEvent {
    pub frame: u64,
    pub track_id: u64,
    pub direction: Direction,
}

/// Per-track traversal state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LineZoneState {
    pub origin_zone: Option<Zone>,
    pub current_zone: Option<Zone>,
}

impl LineZoneState {
    /// Feeds the next zone of a track. An event fires on the frame the far
    /// zone is entered, after which the origin restarts from there. A track
    /// first seen between the lines takes its origin from the first end zone
    /// it reaches.
    pub fn step_zone(self, zone: Zone) -> (Self, Option<Direction>) {
        let origin = match self.origin_zone {
            None | Some(Zone::M) => zone,
            Some(origin) => origin,
        };
        let direction = match (origin, zone) {
            (Zone::A, Zone::B) => Some(Direction::In),
            (Zone::B, Zone::A) => Some(Direction::Out),
            _ => None,
        };
        let origin_zone = if direction.is_some() { zone } else { origin };
        (
            Self {
                origin_zone: Some(origin_zone),
                current_zone: Some(zone),
            },
            direction,
        )
    }

    pub fn advance(
        self,
        centroid: (f64, f64),
        lines: &LinePair,
        frame: u64,
        track_id: u64,
    ) -> (Self, Option<CrossEvent>) {
        let (next, direction) = self.step_zone(classify_zone(centroid, lines));
        let event = direction.map(|direction| CrossEvent {
            frame,
            track_id,
            direction,
        });
        (next, event)
    }
}

/// Free-function form of [`LineZoneState::advance`].
pub fn advance(
    state: LineZoneState,
    centroid: (f64, f64),
    lines: &LinePair,
    frame: u64,
    track_id: u64,
) -> (LineZoneState, Option<CrossEvent>) {
    state.advance(centroid, lines, frame, track_id)
}

/// Running IN/OUT/total counts. Only [`Counters::apply_event`] changes
/// them, so `total == in + out` always holds and no counter ever decreases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Counters {
    in_count: u64,
    out_count: u64,
    total_count: u64,
}

impl Counters {
    pub fn new(in_count: u64, out_count: u64) -> Self {
        Self {
            in_count,
            out_count,
            total_count: in_count + out_count,
        }
    }

    pub fn in_count(&self) -> u64 {
        self.in_count
    }

    pub fn out_count(&self) -> u64 {
        self.out_count
    }

    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    #[must_use]
    pub fn apply_event(self, event: &CrossEvent) -> Self {
        let next = match event.direction {
            Direction::In => Self {
                in_count: self.in_count + 1,
                total_count: self.total_count + 1,
                ..self
            },
            Direction::Out => Self {
                out_count: self.out_count + 1,
                total_count: self.total_count + 1,
                ..self
            },
        };
        debug_assert_eq!(next.total_count, next.in_count + next.out_count);
        next
    }
}

pub fn apply_event(counters: Counters, event: &CrossEvent) -> Counters {
    counters.apply_event(event)
}
