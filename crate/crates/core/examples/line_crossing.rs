//! Two-line traversal counting on hand-written centroid paths. Only a full
//! pass from one outer zone to the other counts; hovering in the middle band
//! or turning back does not.

use people_counter::line_counter::{classify_zone, LineZoneState};
use people_counter::{Counters, LinePair};

fn main() -> people_counter::Result<()> {
    let lines = LinePair::new(100, 200)?;
    let paths: [(&str, &[f64]); 4] = [
        ("walks down", &[50.0, 90.0, 130.0, 170.0, 210.0, 250.0]),
        ("walks up", &[260.0, 190.0, 150.0, 120.0, 60.0]),
        ("turns back", &[50.0, 120.0, 180.0, 150.0, 80.0]),
        ("down, then up", &[40.0, 150.0, 230.0, 150.0, 40.0]),
    ];

    let mut counters = Counters::default();
    for (track_id, (name, ys)) in paths.iter().enumerate() {
        let mut state = LineZoneState::default();
        let mut zones = String::new();
        for (frame, &y) in ys.iter().enumerate() {
            zones.push_str(&format!("{:?}", classify_zone((0.0, y), &lines)));
            let (next, event) = state.advance((0.0, y), &lines, frame as u64, track_id as u64 + 1);
            state = next;
            if let Some(e) = event {
                counters = counters.apply_event(&e);
                println!(
                    "{name:<14} {zones:<6} -> {:?} at frame {}",
                    e.direction, e.frame
                );
            }
        }
    }
    println!(
        "in={} out={} total={}",
        counters.in_count(),
        counters.out_count(),
        counters.total_count()
    );
    Ok(())
}
