//! Frames per second of the full pipeline on a 640x480 synthetic stream.
//!
//! Usage: cargo run --release --example throughput

use std::time::Instant;

use people_counter::{CrossingPlan, Pipeline, PipelineConfig};

fn main() -> people_counter::Result<()> {
    let plan = CrossingPlan {
        width: 640,
        height: 480,
        frames: 300,
        down: 3,
        up: 3,
        slot_frames: 80,
        speed: 6.0,
        radius: 14.0,
        ..CrossingPlan::default()
    };
    let frames: Vec<_> = plan.scene().frames()?.collect();
    let mut pipeline = Pipeline::new(PipelineConfig::default())?;
    let start = Instant::now();
    for frame in &frames {
        pipeline.process_frame(frame)?;
    }
    let secs = start.elapsed().as_secs_f64();
    let c = pipeline.counters();
    println!(
        "{} frames of 640x480 in {secs:.3} s: {:.1} fps",
        frames.len(),
        frames.len() as f64 / secs
    );
    println!("in={} out={}", c.in_count(), c.out_count());
    Ok(())
}
