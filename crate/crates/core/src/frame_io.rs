//! Grayscale frames and the on-disk formats they travel in.
//!
//! The only image format is binary PGM (`P5`, maxval 255). Sequences come
//! either from a directory of numbered PGM files or from a headerless raw
//! file of concatenated frames whose geometry is supplied by the caller.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::blob::BlobKeypoint;
use crate::error::{Error, Result};
use crate::line_counter::LinePair;

/// Intensity used for every annotation mark.
pub const ANNOTATION_INTENSITY: u8 = 255;

/// An immutable 8-bit grayscale frame in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    index: u64,
    pixels: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, index: u64, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config(format!(
                "frame geometry {width}x{height} has a zero dimension"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::Config(format!(
                "{} pixels supplied for a {width}x{height} frame",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            index,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, index: u64, value: u8) -> Result<Self> {
        Self::new(width, height, index, vec![value; width * height])
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

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn with_index(mut self, index: u64) -> Self {
        self.index = index;
        self
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

/// Where a frame sequence comes from.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    pub source: PathBuf,
    /// Required for raw files, ignored for directories.
    pub raw_geometry: Option<(usize, usize)>,
    /// Metadata only; the pipeline is frame-indexed.
    pub fps: f64,
}

impl SequenceSpec {
    pub const DEFAULT_FPS: f64 = 25.0;

    pub fn directory(source: impl Into<PathBuf>) -> Self {
        Self {
            source: source.into(),
            raw_geometry: None,
            fps: Self::DEFAULT_FPS,
        }
    }

    pub fn raw(source: impl Into<PathBuf>, width: usize, height: usize) -> Self {
        Self {
            source: source.into(),
            raw_geometry: Some((width, height)),
            fps: Self::DEFAULT_FPS,
        }
    }
}

/// Encodes a frame as binary PGM.
pub fn encode_pgm(frame: &Frame) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", frame.width, frame.height);
    let mut out = Vec::with_capacity(header.len() + frame.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&frame.pixels);
    out
}

/// Decodes a binary PGM. `#` comments between header fields are accepted.
pub fn decode_pgm(bytes: &[u8], index: u64) -> Result<Frame> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos)?;
    match magic {
        b"P5" => {}
        b"P2" => return Err(Error::Parse("ASCII PGM (P2) is not supported".into())),
        other => {
            return Err(Error::Parse(format!(
                "bad magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    }
    let width = header_number(bytes, &mut pos, "width")?;
    let height = header_number(bytes, &mut pos, "height")?;
    let maxval = header_number(bytes, &mut pos, "maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Parse(format!("zero dimension {width}x{height}")));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!(
            "maxval {maxval} (only 255 is supported)"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Parse("missing whitespace after maxval".into())),
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::Parse(format!("geometry {width}x{height} overflows")))?;
    let raster = bytes.get(pos..pos + len).ok_or_else(|| {
        Error::Parse(format!("raster holds {} of {len} bytes", bytes.len() - pos))
    })?;
    Frame::new(width, height, index, raster.to_vec())
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse("unexpected end of header".into()));
    }
    Ok(&bytes[start..*pos])
}

fn header_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let token = next_token(bytes, pos)?;
    std::str::from_utf8(token)
        .ok()
        .filter(|s| s.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad {what} {:?}", String::from_utf8_lossy(token))))
}

/// Reads one PGM file. The returned frame has index 0; callers assign
/// the real ordinal with [`Frame::with_index`].
pub fn load_frame(path: impl AsRef<Path>) -> Result<Frame> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes, 0)
}

pub fn write_frame(frame: &Frame, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let write = || -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(&encode_pgm(frame))?;
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

/// Ordered, lazily-read stream of frames.
#[derive(Debug)]
pub struct FrameSequence {
    inner: SequenceInner,
    next_index: u64,
    len: usize,
}

#[derive(Debug)]
enum SequenceInner {
    Files(std::vec::IntoIter<PathBuf>),
    Raw {
        path: PathBuf,
        reader: BufReader<File>,
        width: usize,
        height: usize,
        remaining: usize,
    },
}

impl FrameSequence {
    /// Number of frames the sequence will yield in total.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl Iterator for FrameSequence {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        let index = self.next_index;
        let frame = match &mut self.inner {
            SequenceInner::Files(paths) => {
                let path = paths.next()?;
                load_frame(&path).map(|f| f.with_index(index))
            }
            SequenceInner::Raw {
                path,
                reader,
                width,
                height,
                remaining,
            } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                let mut buf = vec![0u8; *width * *height];
                reader
                    .read_exact(&mut buf)
                    .map_err(|e| Error::io(path.as_path(), e))
                    .and_then(|()| Frame::new(*width, *height, index, buf))
            }
        };
        self.next_index += 1;
        Some(frame)
    }
}

/// Opens a directory of `*.pgm` files (ordered by their numeric file stem)
/// or a raw concatenated file.
pub fn open_sequence(spec: &SequenceSpec) -> Result<FrameSequence> {
    let meta = fs::metadata(&spec.source).map_err(|e| Error::io(&spec.source, e))?;
    if meta.is_dir() {
        let paths = sorted_pgm_paths(&spec.source)?;
        if paths.is_empty() {
            return Err(Error::EmptySequence(format!(
                "no .pgm files in {}",
                spec.source.display()
            )));
        }
        let len = paths.len();
        return Ok(FrameSequence {
            inner: SequenceInner::Files(paths.into_iter()),
            next_index: 0,
            len,
        });
    }

    let (width, height) = spec.raw_geometry.ok_or_else(|| {
        Error::Config(format!(
            "{} is a file; raw input needs an explicit WxH geometry",
            spec.source.display()
        ))
    })?;
    if width == 0 || height == 0 {
        return Err(Error::Config(format!(
            "raw geometry {width}x{height} has a zero dimension"
        )));
    }
    let frame_len = width * height;
    let len = meta.len();
    if len % frame_len as u64 != 0 {
        return Err(Error::TruncatedStream { len, frame_len });
    }
    let count = (len / frame_len as u64) as usize;
    if count == 0 {
        return Err(Error::EmptySequence(format!(
            "{} is empty",
            spec.source.display()
        )));
    }
    let file = File::open(&spec.source).map_err(|e| Error::io(&spec.source, e))?;
    Ok(FrameSequence {
        inner: SequenceInner::Raw {
            path: spec.source.clone(),
            reader: BufReader::new(file),
            width,
            height,
            remaining: count,
        },
        next_index: 0,
        len: count,
    })
}

fn sorted_pgm_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut keyed = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_pgm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
        if !is_pgm || !path.is_file() {
            continue;
        }
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_owned();
        // Numeric stems first in numeric order, anything else after by name.
        let numeric = stem.parse::<u64>().ok();
        keyed.push((numeric.is_none(), numeric.unwrap_or(0), stem, path));
    }
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, _, _, p)| p).collect())
}

/// Offsets of the midpoint-circle ring of the given radius around the origin.
pub fn circle_offsets(radius: i64) -> Vec<(i64, i64)> {
    if radius <= 0 {
        return vec![(0, 0)];
    }
    let mut out = Vec::new();
    let (mut x, mut y) = (0i64, radius);
    let mut decision = 1 - radius;
    while x <= y {
        for (dx, dy) in [
            (x, y),
            (y, x),
            (-x, y),
            (-y, x),
            (x, -y),
            (y, -x),
            (-x, -y),
            (-y, -x),
        ] {
            out.push((dx, dy));
        }
        x += 1;
        if decision < 0 {
            decision += 2 * x + 1;
        } else {
            y -= 1;
            decision += 2 * (x - y) + 1;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Draws keypoint circles and both counting lines onto a copy of `frame`.
pub fn annotate(frame: &Frame, keypoints: &[BlobKeypoint], lines: &LinePair) -> Result<Frame> {
    let (w, h) = frame.dimensions();
    for kp in keypoints {
        let (x, y) = kp.centroid;
        if !(x >= 0.0 && y >= 0.0 && x < w as f64 && y < h as f64) {
            return Err(Error::Precondition(format!(
                "keypoint centroid ({x}, {y}) outside {w}x{h} frame"
            )));
        }
    }
    for row in [lines.line_in_y, lines.line_out_y] {
        if row >= h {
            return Err(Error::Precondition(format!(
                "line at row {row} outside frame of height {h}"
            )));
        }
    }

    let mut pixels = frame.pixels.clone();
    for kp in keypoints {
        let cx = kp.centroid.0.round() as i64;
        let cy = kp.centroid.1.round() as i64;
        let radius = (kp.diameter_s / 2.0).round() as i64;
        for (dx, dy) in circle_offsets(radius) {
            let (px, py) = (cx + dx, cy + dy);
            if px >= 0 && py >= 0 && (px as usize) < w && (py as usize) < h {
                pixels[py as usize * w + px as usize] = ANNOTATION_INTENSITY;
            }
        }
    }
    for row in [lines.line_in_y, lines.line_out_y] {
        pixels[row * w..(row + 1) * w].fill(ANNOTATION_INTENSITY);
    }
    Frame::new(w, h, frame.index, pixels)
}

/// Writes an annotated copy of `frame` to `path`; `frame` itself is untouched.
pub fn write_annotated(
    frame: &Frame,
    keypoints: &[BlobKeypoint],
    lines: &LinePair,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_frame(&annotate(frame, keypoints, lines)?, path)
}
