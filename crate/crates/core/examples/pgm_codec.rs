//! Writes a frame as binary PGM, reads it back and saves an annotated copy
//! with the counting lines and a keypoint circle.

use people_counter::frame_io::{annotate, decode_pgm, encode_pgm, write_frame};
use people_counter::{BlobKeypoint, Frame, LinePair};

fn main() -> people_counter::Result<()> {
    let (w, h) = (32, 24);
    let pixels: Vec<u8> = (0..w * h).map(|i| ((i % w) * 8) as u8).collect();
    let frame = Frame::new(w, h, 0, pixels)?;

    let bytes = encode_pgm(&frame);
    println!(
        "header: {:?}",
        String::from_utf8_lossy(&bytes[..bytes.len() - w * h])
    );
    let back = decode_pgm(&bytes, 0)?;
    println!("round trip identical: {}", back == frame);

    let kp = BlobKeypoint {
        centroid: (16.0, 12.0),
        diameter_s: 10.0,
        circularity: 1.0,
        convexity: 1.0,
        inertia_ratio: 1.0,
    };
    let marked = annotate(&frame, &[kp], &LinePair::thirds(h)?)?;
    let path = std::env::temp_dir().join("people-counter-annotated.pgm");
    write_frame(&marked, &path)?;
    println!("annotated frame written to {}", path.display());
    Ok(())
}
