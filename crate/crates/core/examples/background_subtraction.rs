//! Running-average background model on a scene where a bright square
//! appears and then stays put: the foreground fades as the model absorbs it.

use people_counter::{morph_open, BackgroundModel, Frame};

fn main() -> people_counter::Result<()> {
    let (w, h) = (64, 48);
    let empty = Frame::filled(w, h, 0, 40)?;
    let mut model = BackgroundModel::init(&empty, 0.02, 25.0, 0)?;

    let square: Vec<u8> = (0..w * h)
        .map(|i| {
            if (20..36).contains(&(i % w)) && (16..32).contains(&(i / w)) {
                200
            } else {
                40
            }
        })
        .collect();

    println!("frame  foreground_px  estimate_at_center");
    for k in 1..=120u64 {
        let frame = Frame::new(w, h, k, square.clone())?;
        let mask = morph_open(&model.subtract(&frame)?, 1)?;
        model.update(&frame)?;
        if k == 1 || k % 15 == 0 {
            let center = model.estimate()[24 * w + 28];
            println!("{k:>5}  {:>13}  {center:>18.2}", mask.count_ones());
        }
    }
    Ok(())
}
