//! Binary foreground masks and square-element morphology.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::Config(format!(
                "{} bits supplied for a {width}x{height} mask",
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Erosion with a (2r+1)×(2r+1) square; the neighbourhood is clipped to
    /// the image, so pixels beyond the border never erode the foreground.
    pub fn erode(&self, radius: usize) -> BinaryMask {
        self.square_filter(radius, Reduce::All)
    }

    /// Dilation with a (2r+1)×(2r+1) square, clipped to the image.
    pub fn dilate(&self, radius: usize) -> BinaryMask {
        self.square_filter(radius, Reduce::Any)
    }

    fn square_filter(&self, radius: usize, reduce: Reduce) -> BinaryMask {
        let (w, h) = self.dimensions();
        let mut rows = vec![false; w * h];
        for y in 0..h {
            window_pass(
                &self.bits[y * w..(y + 1) * w],
                &mut rows[y * w..(y + 1) * w],
                radius,
                reduce,
            );
        }
        let mut out = vec![false; w * h];
        let mut column = vec![false; h];
        let mut filtered = vec![false; h];
        for x in 0..w {
            for y in 0..h {
                column[y] = rows[y * w + x];
            }
            window_pass(&column, &mut filtered, radius, reduce);
            for y in 0..h {
                out[y * w + x] = filtered[y];
            }
        }
        BinaryMask {
            width: w,
            height: h,
            bits: out,
        }
    }
}

#[derive(Clone, Copy)]
enum Reduce {
    All,
    Any,
}

// Sliding-window count over a 1-D line, window [i-r, i+r] clipped to the line.
fn window_pass(src: &[bool], dst: &mut [bool], radius: usize, reduce: Reduce) {
    let n = src.len();
    let mut count = src[..radius.min(n)].iter().filter(|&&b| b).count();
    for i in 0..n {
        if i + radius < n && src[i + radius] {
            count += 1;
        }
        if i > radius && src[i - radius - 1] {
            count -= 1;
        }
        let lo = i.saturating_sub(radius);
        let hi = (i + radius).min(n - 1);
        dst[i] = match reduce {
            Reduce::All => count == hi - lo + 1,
            Reduce::Any => count > 0,
        };
    }
}

/// Morphological opening (erosion then dilation) with a (2r+1)×(2r+1)
/// square structuring element.
pub fn morph_open(mask: &BinaryMask, radius: usize) -> Result<BinaryMask> {
    if radius == 0 {
        return Err(Error::Config("morphology radius must be at least 1".into()));
    }
    Ok(mask.erode(radius).dilate(radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Direct definition: a pixel survives erosion iff every in-bounds pixel in
    // its square is set; dilation sets it iff any is.
    fn brute(mask: &BinaryMask, r: usize, all: bool) -> BinaryMask {
        let (w, h) = mask.dimensions();
        BinaryMask::from_fn(w, h, |x, y| {
            let mut any = false;
            let mut every = true;
            for yy in y.saturating_sub(r)..=(y + r).min(h - 1) {
                for xx in x.saturating_sub(r)..=(x + r).min(w - 1) {
                    any |= mask.get(xx, yy);
                    every &= mask.get(xx, yy);
                }
            }
            if all {
                every
            } else {
                any
            }
        })
    }

    fn brute_open(mask: &BinaryMask, r: usize) -> BinaryMask {
        brute(&brute(mask, r, true), r, false)
    }

    #[test]
    fn isolated_pixel_is_removed() {
        let mut m = BinaryMask::empty(9, 9);
        m.set(4, 4, true);
        assert!(morph_open(&m, 1).unwrap().is_empty());
    }

    #[test]
    fn solid_block_survives_opening() {
        let m = BinaryMask::from_fn(20, 20, |x, y| (5..15).contains(&x) && (5..15).contains(&y));
        let opened = morph_open(&m, 1).unwrap();
        assert_eq!(opened, brute_open(&m, 1));
        assert_eq!(opened, m);
    }

    #[test]
    fn empty_stays_empty() {
        assert!(morph_open(&BinaryMask::empty(12, 7), 2).unwrap().is_empty());
    }

    #[test]
    fn zero_radius_is_config_error() {
        assert!(matches!(
            morph_open(&BinaryMask::empty(4, 4), 0),
            Err(Error::Config(_))
        ));
    }

    fn arb_mask() -> impl Strategy<Value = BinaryMask> {
        (1usize..20, 1usize..20).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<bool>(), w * h)
                .prop_map(move |bits| BinaryMask::new(w, h, bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn separable_filters_match_brute_force(m in arb_mask(), r in 1usize..4) {
            prop_assert_eq!(m.erode(r), brute(&m, r, true));
            prop_assert_eq!(m.dilate(r), brute(&m, r, false));
        }

        #[test]
        fn opening_is_idempotent_and_bounded(m in arb_mask(), r in 1usize..3) {
            let once = morph_open(&m, r).unwrap();
            prop_assert_eq!(morph_open(&once, r).unwrap(), once.clone());
            let dilated = m.dilate(r);
            for (o, d) in once.bits().iter().zip(dilated.bits()) {
                prop_assert!(!o || *d);
            }
        }
    }
}
