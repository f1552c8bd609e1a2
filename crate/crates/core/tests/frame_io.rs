use std::fs;

use people_counter::frame_io::{encode_pgm, load_frame, open_sequence, write_frame, SequenceSpec};
use people_counter::{Error, Frame};

fn gradient(w: usize, h: usize, tag: u8) -> Frame {
    let pixels = (0..w * h).map(|i| (i as u8).wrapping_add(tag)).collect();
    Frame::new(w, h, 0, pixels).unwrap()
}

#[test]
fn directory_is_read_in_numeric_order() {
    let dir = tempfile::tempdir().unwrap();
    for n in [10u8, 2, 1] {
        write_frame(&gradient(9, 8, n), dir.path().join(format!("{n}.pgm"))).unwrap();
    }
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();

    let seq = open_sequence(&SequenceSpec::directory(dir.path())).unwrap();
    assert_eq!(seq.len(), 3);
    let frames: Vec<Frame> = seq.collect::<Result<_, _>>().unwrap();
    let tags: Vec<u8> = frames.iter().map(|f| f.pixels()[0]).collect();
    assert_eq!(tags, vec![1, 2, 10]);
    let indices: Vec<u64> = frames.iter().map(Frame::index).collect();
    assert_eq!(indices, vec![0, 1, 2]);
}

#[test]
fn empty_directory_is_empty_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let err = open_sequence(&SequenceSpec::directory(dir.path())).unwrap_err();
    assert!(matches!(err, Error::EmptySequence(_)));
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn raw_stream_splits_into_frames() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clip.raw");
    let bytes: Vec<u8> = (0..3 * 12 * 10).map(|i| (i / 120) as u8).collect();
    fs::write(&path, &bytes).unwrap();

    let frames: Vec<Frame> = open_sequence(&SequenceSpec::raw(&path, 12, 10))
        .unwrap()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(frames.len(), 3);
    for (i, f) in frames.iter().enumerate() {
        assert_eq!(f.index(), i as u64);
        assert!(f.pixels().iter().all(|&p| p == i as u8));
    }
}

#[test]
fn raw_stream_with_partial_frame_is_truncated() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clip.raw");
    fs::write(&path, vec![0u8; 12 * 10 + 7]).unwrap();
    let err = open_sequence(&SequenceSpec::raw(&path, 12, 10)).unwrap_err();
    assert!(matches!(
        err,
        Error::TruncatedStream {
            len: 127,
            frame_len: 120
        }
    ));
}

#[test]
fn raw_file_without_geometry_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clip.raw");
    fs::write(&path, vec![0u8; 64]).unwrap();
    let err = open_sequence(&SequenceSpec::directory(&path)).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn missing_input_is_io_error() {
    let err = open_sequence(&SequenceSpec::directory("/nonexistent/frames")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
}

#[test]
fn ascii_pgm_is_rejected_when_loading() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("0.pgm");
    fs::write(&path, "P2\n2 2\n255\n0 1 2 3\n").unwrap();
    assert!(matches!(load_frame(&path), Err(Error::Parse(_))));
}

#[test]
fn bad_frame_surfaces_mid_sequence() {
    let dir = tempfile::tempdir().unwrap();
    write_frame(&gradient(9, 8, 0), dir.path().join("0.pgm")).unwrap();
    let mut bytes = encode_pgm(&gradient(9, 8, 1));
    bytes.truncate(bytes.len() - 5);
    fs::write(dir.path().join("1.pgm"), bytes).unwrap();

    let mut seq = open_sequence(&SequenceSpec::directory(dir.path())).unwrap();
    assert!(seq.next().unwrap().is_ok());
    assert!(seq.next().unwrap().is_err());
}
