//! Greedy nearest-centroid tracking of two heads passing each other, one of
//! which drops out for a few frames.

use people_counter::{BlobKeypoint, Tracker, TrackerConfig};

fn kp(x: f64, y: f64) -> BlobKeypoint {
    BlobKeypoint {
        centroid: (x, y),
        diameter_s: 20.0,
        circularity: 1.0,
        convexity: 1.0,
        inertia_ratio: 1.0,
    }
}

fn main() -> people_counter::Result<()> {
    let mut tracker = Tracker::new(TrackerConfig {
        max_match_distance: 30.0,
        max_missed: 3,
    })?;
    for f in 0..20u64 {
        let t = f as f64;
        let mut kps = vec![kp(50.0, 10.0 + 8.0 * t)];
        // The second head is missed on frames 8..10.
        if !(8..10).contains(&f) {
            kps.push(kp(150.0, 170.0 - 8.0 * t));
        }
        let out = tracker.step(&kps, f)?;
        let live: Vec<String> = tracker
            .tracks()
            .iter()
            .map(|tr| {
                format!(
                    "#{} ({:.0},{:.0}) missed={}",
                    tr.id,
                    tr.last_centroid().0,
                    tr.last_centroid().1,
                    tr.missed
                )
            })
            .collect();
        println!(
            "frame {f:>2}: spawned {:?} expired {:?} | {}",
            out.spawned,
            out.expired,
            live.join("  ")
        );
    }
    Ok(())
}
