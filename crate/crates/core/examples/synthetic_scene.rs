//! Builds the default crossing scene, prints its analytic ground truth and
//! writes the frames as PGM files.
//!
//! Usage: cargo run --example synthetic_scene -- [OUT_DIR]

use std::path::PathBuf;

use people_counter::frame_io::write_frame;
use people_counter::synthetic::ground_truth_events;
use people_counter::{CrossingPlan, LinePair};

fn main() -> people_counter::Result<()> {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("people-counter-scene"));
    let plan = CrossingPlan {
        down: 3,
        up: 2,
        frames: 260,
        ..CrossingPlan::default()
    };
    let scene = plan.scene();
    let lines = LinePair::thirds(scene.height)?;
    let truth = ground_truth_events(&scene, &lines);

    println!(
        "{} actors, truth in={} out={}",
        scene.actors.len(),
        truth.truth.true_in,
        truth.truth.true_out
    );
    for c in &truth.crossings {
        println!(
            "  actor {} crosses {:?} at frame {}",
            c.actor, c.direction, c.frame
        );
    }

    std::fs::create_dir_all(&out).map_err(|e| people_counter::Error::Io {
        path: out.clone(),
        source: e,
    })?;
    for frame in scene.frames()? {
        write_frame(&frame, out.join(format!("{:05}.pgm", frame.index())))?;
    }
    println!("wrote {} frames to {}", scene.frames, out.display());
    Ok(())
}
