//! Greedy nearest-neighbour centroid tracking.

use serde::{Deserialize, Serialize};

use crate::blob::BlobKeypoint;
use crate::error::{Error, Result};
use crate::line_counter::LineZoneState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerConfig {
    /// Largest centroid displacement, in pixels, accepted as the same object.
    pub max_match_distance: f64,
    /// Consecutive unmatched frames a track survives.
    pub max_missed: u32,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            max_match_distance: 50.0,
            max_missed: 5,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_match_distance > 0.0 && self.max_match_distance.is_finite()) {
            return Err(Error::Config(format!(
                "max_match_distance {} must be positive",
                self.max_match_distance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub id: u64,
    /// `(frame index, centroid)`, frame indices strictly increasing.
    pub history: Vec<(u64, (f64, f64))>,
    pub missed: u32,
    pub zone_state: LineZoneState,
    pub alive: bool,
}

impl Track {
    fn spawn(id: u64, frame: u64, centroid: (f64, f64)) -> Self {
        Self {
            id,
            history: vec![(frame, centroid)],
            missed: 0,
            zone_state: LineZoneState::default(),
            alive: true,
        }
    }

    pub fn last_centroid(&self) -> (f64, f64) {
        self.history
            .last()
            .expect("tracks are spawned with one entry")
            .1
    }

    pub fn last_frame(&self) -> u64 {
        self.history
            .last()
            .expect("tracks are spawned with one entry")
            .0
    }
}

/// Result of [`associate`]; indices refer to the input slices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    /// `(track index, keypoint index)` in the order they were matched.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_tracks: Vec<usize>,
    pub unmatched_keypoints: Vec<usize>,
}

fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Repeatedly pairs the globally closest remaining (track, keypoint) within
/// `max_match_distance`. Ties go to the lower track id, then the earlier
/// keypoint.
pub fn associate(tracks: &[Track], keypoints: &[BlobKeypoint], cfg: &TrackerConfig) -> Assignment {
    let mut candidates: Vec<(f64, u64, usize, usize)> = Vec::new();
    for (ti, track) in tracks.iter().enumerate() {
        let from = track.last_centroid();
        for (ki, kp) in keypoints.iter().enumerate() {
            let d = distance(from, kp.centroid);
            if d <= cfg.max_match_distance {
                candidates.push((d, track.id, ki, ti));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut track_used = vec![false; tracks.len()];
    let mut kp_used = vec![false; keypoints.len()];
    let mut pairs = Vec::new();
    for (_, _, ki, ti) in candidates {
        if !track_used[ti] && !kp_used[ki] {
            track_used[ti] = true;
            kp_used[ki] = true;
            pairs.push((ti, ki));
        }
    }
    Assignment {
        pairs,
        unmatched_tracks: (0..tracks.len()).filter(|&i| !track_used[i]).collect(),
        unmatched_keypoints: (0..keypoints.len()).filter(|&i| !kp_used[i]).collect(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepOutcome {
    /// Ids of tracks that received a keypoint this frame, spawned ones included.
    pub updated: Vec<u64>,
    pub spawned: Vec<u64>,
    pub expired: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct Tracker {
    cfg: TrackerConfig,
    tracks: Vec<Track>,
    next_id: u64,
    last_frame: Option<u64>,
}

impl Tracker {
    pub fn new(cfg: TrackerConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            tracks: Vec::new(),
            next_id: 1,
            last_frame: None,
        })
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.cfg
    }

    /// Live tracks in ascending id order.
    pub fn tracks(&self) -> &[Track] {
        &self.tracks
    }

    pub fn track_mut(&mut self, id: u64) -> Option<&mut Track> {
        self.tracks.iter_mut().find(|t| t.id == id)
    }

    pub fn step(&mut self, keypoints: &[BlobKeypoint], frame_index: u64) -> Result<StepOutcome> {
        if let Some(last) = self.last_frame {
            if frame_index <= last {
                return Err(Error::Order {
                    last,
                    got: frame_index,
                });
            }
        }
        self.last_frame = Some(frame_index);

        let assignment = associate(&self.tracks, keypoints, &self.cfg);
        let mut outcome = StepOutcome::default();
        for &(ti, ki) in &assignment.pairs {
            let track = &mut self.tracks[ti];
            track.history.push((frame_index, keypoints[ki].centroid));
            track.missed = 0;
            outcome.updated.push(track.id);
        }
        for &ti in &assignment.unmatched_tracks {
            let track = &mut self.tracks[ti];
            track.missed += 1;
            if track.missed > self.cfg.max_missed {
                track.alive = false;
                outcome.expired.push(track.id);
            }
        }
        self.tracks.retain(|t| t.alive);
        for &ki in &assignment.unmatched_keypoints {
            let id = self.next_id;
            self.next_id += 1;
            self.tracks
                .push(Track::spawn(id, frame_index, keypoints[ki].centroid));
            outcome.spawned.push(id);
            outcome.updated.push(id);
        }
        outcome.updated.sort_unstable();
        outcome.expired.sort_unstable();
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kp(x: f64, y: f64) -> BlobKeypoint {
        BlobKeypoint {
            centroid: (x, y),
            diameter_s: 10.0,
            circularity: 1.0,
            convexity: 1.0,
            inertia_ratio: 1.0,
        }
    }

    fn track(id: u64, x: f64, y: f64) -> Track {
        Track::spawn(id, 0, (x, y))
    }

    fn cfg(max: f64, missed: u32) -> TrackerConfig {
        TrackerConfig {
            max_match_distance: max,
            max_missed: missed,
        }
    }

    #[test]
    fn near_keypoint_matches() {
        let a = associate(&[track(1, 10.0, 10.0)], &[kp(12.0, 10.0)], &cfg(20.0, 5));
        assert_eq!(a.pairs, vec![(0, 0)]);
    }

    #[test]
    fn far_keypoint_does_not_match() {
        let a = associate(&[track(1, 10.0, 10.0)], &[kp(35.0, 10.0)], &cfg(20.0, 5));
        assert!(a.pairs.is_empty());
        assert_eq!(a.unmatched_tracks, vec![0]);
        assert_eq!(a.unmatched_keypoints, vec![0]);
    }

    #[test]
    fn ties_prefer_lower_track_id_then_earlier_keypoint() {
        let tracks = [track(7, 0.0, 0.0), track(3, 0.0, 0.0)];
        let a = associate(&tracks, &[kp(5.0, 0.0), kp(0.0, 5.0)], &cfg(20.0, 5));
        assert_eq!(a.pairs, vec![(1, 0), (0, 1)]);
    }

    #[test]
    fn empty_tracker_spawns() {
        let mut t = Tracker::new(cfg(50.0, 5)).unwrap();
        let out = t.step(&[kp(1.0, 1.0), kp(100.0, 1.0)], 0).unwrap();
        assert_eq!(out.spawned, vec![1, 2]);
        assert_eq!(t.tracks().len(), 2);
    }

    #[test]
    fn unmatched_track_expires_at_zero_tolerance() {
        let mut t = Tracker::new(cfg(50.0, 0)).unwrap();
        t.step(&[kp(1.0, 1.0)], 0).unwrap();
        let out = t.step(&[], 1).unwrap();
        assert_eq!(out.expired, vec![1]);
        assert!(t.tracks().is_empty());
    }

    #[test]
    fn frames_must_increase() {
        let mut t = Tracker::new(cfg(50.0, 0)).unwrap();
        t.step(&[], 4).unwrap();
        assert!(matches!(t.step(&[], 4), Err(Error::Order { .. })));
        assert!(matches!(t.step(&[], 2), Err(Error::Order { .. })));
    }

    #[test]
    fn ids_are_never_reused() {
        let mut t = Tracker::new(cfg(5.0, 0)).unwrap();
        t.step(&[kp(0.0, 0.0)], 0).unwrap();
        t.step(&[], 1).unwrap();
        let out = t.step(&[kp(0.0, 0.0)], 2).unwrap();
        assert_eq!(out.spawned, vec![2]);
    }

    #[test]
    fn bad_config_is_rejected() {
        assert!(Tracker::new(cfg(0.0, 1)).is_err());
        assert!(Tracker::new(cfg(f64::NAN, 1)).is_err());
    }

    // Exhaustive reference: repeatedly scan all remaining pairs for the
    // smallest (distance, track id, keypoint index).
    fn greedy_oracle(tracks: &[Track], kps: &[BlobKeypoint], max: f64) -> Vec<(usize, usize)> {
        let mut t_left: Vec<usize> = (0..tracks.len()).collect();
        let mut k_left: Vec<usize> = (0..kps.len()).collect();
        let mut out = Vec::new();
        loop {
            let mut best: Option<(f64, u64, usize, usize)> = None;
            for &ti in &t_left {
                for &ki in &k_left {
                    let c = tracks[ti].last_centroid();
                    let d = (c.0 - kps[ki].centroid.0).hypot(c.1 - kps[ki].centroid.1);
                    if d > max {
                        continue;
                    }
                    let key = (d, tracks[ti].id, ki, ti);
                    let better = match best {
                        None => true,
                        Some(b) => (key.0, key.1, key.2) < (b.0, b.1, b.2),
                    };
                    if better {
                        best = Some(key);
                    }
                }
            }
            let Some((_, _, ki, ti)) = best else { break };
            out.push((ti, ki));
            t_left.retain(|&x| x != ti);
            k_left.retain(|&x| x != ki);
        }
        out
    }

    proptest! {
        #[test]
        fn greedy_matches_exhaustive_oracle(
            ts in proptest::collection::vec((0.0f64..60.0, 0.0f64..60.0), 0..5),
            ks in proptest::collection::vec((0.0f64..60.0, 0.0f64..60.0), 0..5),
            max in 5.0f64..40.0,
        ) {
            let tracks: Vec<Track> = ts.iter().enumerate().map(|(i, &(x, y))| track(i as u64 + 1, x, y)).collect();
            let kps: Vec<BlobKeypoint> = ks.iter().map(|&(x, y)| kp(x, y)).collect();
            let a = associate(&tracks, &kps, &cfg(max, 3));
            prop_assert_eq!(&a.pairs, &greedy_oracle(&tracks, &kps, max));
            prop_assert!(a.pairs.len() <= tracks.len().min(kps.len()));
            prop_assert_eq!(a.pairs.len() + a.unmatched_tracks.len(), tracks.len());
            prop_assert_eq!(a.pairs.len() + a.unmatched_keypoints.len(), kps.len());
        }

        #[test]
        fn separated_objects_keep_identity(
            k in 1usize..5,
            steps in proptest::collection::vec((-9.0f64..9.0, -9.0f64..9.0), 1..30),
        ) {
            // Objects 200 px apart; every step is shorter than the match distance.
            let mut t = Tracker::new(cfg(20.0, 2)).unwrap();
            let mut pos: Vec<(f64, f64)> = (0..k).map(|i| (200.0 * i as f64, 0.0)).collect();
            t.step(&pos.iter().map(|&(x, y)| kp(x, y)).collect::<Vec<_>>(), 0).unwrap();
            for (f, &(dx, dy)) in steps.iter().enumerate() {
                for p in pos.iter_mut() {
                    p.0 += dx;
                    p.1 += dy;
                }
                let out = t.step(&pos.iter().map(|&(x, y)| kp(x, y)).collect::<Vec<_>>(), f as u64 + 1).unwrap();
                prop_assert!(out.spawned.is_empty());
                prop_assert!(out.expired.is_empty());
            }
            prop_assert_eq!(t.tracks().len(), k);
            prop_assert!(t.tracks().iter().all(|tr| tr.history.len() == steps.len() + 1));
        }
    }
}
