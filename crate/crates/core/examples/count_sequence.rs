//! Runs the full pipeline over a PGM directory, or over a generated scene
//! when no directory is given, and prints the report.
//!
//! Usage: cargo run --release --example count_sequence -- [PGM_DIR]

use people_counter::frame_io::{open_sequence, SequenceSpec};
use people_counter::synthetic::ground_truth_events;
use people_counter::{pipeline, CrossingPlan, LinePair, PipelineConfig};

fn main() -> people_counter::Result<()> {
    let config = PipelineConfig::default();
    let report = match std::env::args_os().nth(1) {
        Some(dir) => pipeline::run(open_sequence(&SequenceSpec::directory(dir))?, &config, None)?,
        None => {
            let scene = CrossingPlan::default().scene();
            let truth = ground_truth_events(&scene, &LinePair::thirds(scene.height)?).truth;
            let frames = scene.frames()?.map(Ok);
            pipeline::run(frames, &config, Some(truth))?
        }
    };
    for e in &report.events {
        println!(
            "frame {:>4}  track {:>3}  {:?}",
            e.frame, e.track_id, e.direction
        );
    }
    let c = report.counters;
    println!(
        "in={} out={} total={}",
        c.in_count(),
        c.out_count(),
        c.total_count()
    );
    if let Some(a) = report.accuracies {
        println!("accuracy {}", a.to_display_json());
    }
    Ok(())
}
