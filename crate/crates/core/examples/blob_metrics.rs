//! Shape metrics for a few rasterized shapes and which ones survive the
//! default head filters.

use people_counter::blob::{label_components, measure_all};
use people_counter::{BinaryMask, BlobFilterParams, Connectivity};

fn main() {
    let shapes: [(&str, BinaryMask); 4] = [
        (
            "disk r12",
            BinaryMask::from_fn(40, 40, |x, y| sq(x, 20) + sq(y, 20) <= 144),
        ),
        (
            "ellipse 16x6",
            BinaryMask::from_fn(40, 40, |x, y| sq(x, 20) * 36 + sq(y, 20) * 256 <= 36 * 256),
        ),
        (
            "plus",
            BinaryMask::from_fn(40, 40, |x, y| {
                (15..25).contains(&x) && (5..35).contains(&y)
                    || (15..25).contains(&y) && (5..35).contains(&x)
            }),
        ),
        (
            "bar 1x30",
            BinaryMask::from_fn(40, 40, |x, y| y == 20 && (5..35).contains(&x)),
        ),
    ];
    let filters = BlobFilterParams::default();

    println!(
        "{:<13} {:>5} {:>9} {:>11} {:>10} {:>8} {:>5}",
        "shape", "area", "perimeter", "circularity", "convexity", "inertia", "kept"
    );
    for (name, mask) in &shapes {
        let labels = label_components(mask, Connectivity::Eight);
        for m in measure_all(&labels) {
            let show =
                |v: people_counter::Result<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.3}"));
            println!(
                "{name:<13} {:>5} {:>9.2} {:>11} {:>10} {:>8} {:>5}",
                m.area,
                m.perimeter,
                show(m.circularity()),
                show(m.convexity()),
                show(m.inertia_ratio()),
                filters.keypoint(&m).is_some()
            );
        }
    }
}

fn sq(v: usize, c: usize) -> usize {
    v.abs_diff(c).pow(2)
}
