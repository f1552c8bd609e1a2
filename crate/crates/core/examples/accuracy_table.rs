//! Count accuracy for a handful of count/truth pairs, including an
//! overcount and the empty scene.

use people_counter::{accuracy_pct, Accuracies, Counters, GroundTruth};

fn main() -> people_counter::Result<()> {
    let runs = [
        ("balanced", Counters::new(8, 8), GroundTruth::new(8, 8)),
        ("uneven", Counters::new(9, 12), GroundTruth::new(9, 12)),
        ("overcount", Counters::new(25, 28), GroundTruth::new(20, 28)),
        ("empty", Counters::new(0, 0), GroundTruth::new(0, 0)),
    ];
    println!(
        "{:<10} {:>8} {:>8} {:>8}",
        "run", "in %", "out %", "total %"
    );
    for (name, counters, truth) in runs {
        let a = Accuracies::compute(&counters, &truth)?;
        println!(
            "{name:<10} {:>8.2} {:>8.2} {:>8.2}",
            a.in_accuracy, a.out_accuracy, a.tc_accuracy
        );
    }
    let tc = accuracy_pct(45, 48)?;
    println!(
        "45 of 48: {tc} (rounded {}, floored {})",
        tc.round(),
        tc.floor()
    );
    match accuracy_pct(3, 0) {
        Err(e) => println!("3 of 0: {e}"),
        Ok(v) => println!("3 of 0: {v}"),
    }
    Ok(())
}
