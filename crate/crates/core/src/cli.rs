//! Command-line front end: `count`, `synth` and `eval`.
//!
//! Each command writes exactly one JSON document to stdout on success and
//! diagnostics to stderr. Exit codes: 0 success, 1 I/O, 2 configuration or
//! validation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::frame_io::{open_sequence, write_annotated, write_frame, SequenceSpec};
use crate::line_counter::LinePair;
use crate::metrics::{Accuracies, CountReport, GroundTruth};
use crate::pipeline::run_with;
use crate::synthetic::{ground_truth_events, CrossingPlan, SceneSpec};

#[derive(Debug, Parser)]
#[command(
    name = "people-counter",
    version,
    about = "Bidirectional people counting over grayscale frame sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count IN/OUT crossings in a frame sequence and print the report.
    Count(Box<CountArgs>),
    /// Render a synthetic scene as PGM frames plus truth.json.
    Synth(SynthArgs),
    /// Compare a saved report against ground truth.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Directory of PGM frames, or a raw 8-bit file with --raw.
    #[arg(long)]
    pub input: PathBuf,
    /// Geometry of a raw input file.
    #[arg(long, value_name = "WxH", value_parser = parse_geometry)]
    pub raw: Option<(usize, usize)>,
    #[arg(long, value_name = "Y1,Y2", value_parser = parse_lines)]
    pub lines: Option<LinePair>,
    #[arg(long)]
    pub invert_direction: bool,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub warmup: Option<u64>,
    #[arg(long)]
    pub morph_radius: Option<usize>,
    #[arg(long)]
    pub min_area: Option<usize>,
    #[arg(long)]
    pub min_circularity: Option<f64>,
    #[arg(long)]
    pub min_convexity: Option<f64>,
    #[arg(long)]
    pub min_inertia: Option<f64>,
    #[arg(long)]
    pub max_match_dist: Option<f64>,
    #[arg(long)]
    pub max_missed: Option<u32>,
    /// Ground truth JSON; adds accuracies to the report.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Write annotated frames here.
    #[arg(long, value_name = "DIR")]
    pub annotate: Option<PathBuf>,
    /// Pipeline configuration JSON. Flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scene JSON. Defaults to eight down and eight up crossers on 320x240.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Overrides the scene seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Lines used for truth.json; defaults to frame-height thirds.
    #[arg(long, value_name = "Y1,Y2", value_parser = parse_lines)]
    pub lines: Option<LinePair>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Report JSON written by `count`.
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
}

fn parse_geometry(s: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let w = w.trim().parse().map_err(|e| format!("width: {e}"))?;
    let h = h.trim().parse().map_err(|e| format!("height: {e}"))?;
    Ok((w, h))
}

fn parse_lines(s: &str) -> std::result::Result<LinePair, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected Y1,Y2, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("Y1: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("Y2: {e}"))?;
    LinePair::new(a, b).map_err(|e| e.to_string())
}

impl CountArgs {
    /// The config file (or defaults) with every given flag applied on top.
    pub fn pipeline_config(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        let bg = &mut cfg.background;
        set(&mut bg.alpha, self.alpha);
        set(&mut bg.threshold, self.threshold);
        set(&mut bg.warmup, self.warmup);
        set(&mut bg.morph_radius, self.morph_radius);
        let blob = &mut cfg.blob;
        set(&mut blob.min_area, self.min_area);
        set(&mut blob.min_circularity, self.min_circularity);
        set(&mut blob.min_convexity, self.min_convexity);
        set(&mut blob.min_inertia_ratio, self.min_inertia);
        set(&mut cfg.tracker.max_match_distance, self.max_match_dist);
        set(&mut cfg.tracker.max_missed, self.max_missed);
        if self.lines.is_some() {
            cfg.lines = self.lines;
        }
        cfg.invert_direction |= self.invert_direction;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                2
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Eval(args) => cmd_eval(args),
    };
    match result {
        Ok(json) => match writeln!(stdout, "{json}") {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: writing stdout: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the pipeline and returns the report JSON.
pub fn cmd_count(args: &CountArgs) -> Result<String> {
    let config = args.pipeline_config()?;
    let truth = args.truth.as_ref().map(GroundTruth::load).transpose()?;
    let spec = match args.raw {
        Some((w, h)) => SequenceSpec::raw(&args.input, w, h),
        None => SequenceSpec::directory(&args.input),
    };
    let sequence = open_sequence(&spec)?;
    if let Some(dir) = &args.annotate {
        create_dir(dir)?;
    }
    let report = run_with(sequence, &config, truth, |pipeline, frame| {
        let Some(dir) = &args.annotate else {
            return Ok(());
        };
        let lines = pipeline
            .resolved_config()
            .and_then(|c| c.lines)
            .expect("lines resolved after the first frame");
        let path = dir.join(format!("{:05}.pgm", frame.index()));
        write_annotated(frame, pipeline.last_keypoints(), &lines, path)
    })?;
    Ok(report.to_json_pretty())
}

/// Renders the scene to `--out` and returns a summary JSON.
pub fn cmd_synth(args: &SynthArgs) -> Result<String> {
    let mut scene = match &args.spec {
        Some(path) => SceneSpec::load(path)?,
        None => CrossingPlan::default().scene(),
    };
    set(&mut scene.seed, args.seed);
    scene.validate()?;
    let lines = match args.lines {
        Some(lines) => lines,
        None => LinePair::thirds(scene.height)?,
    };
    lines.check_within(scene.height)?;
    let truth = ground_truth_events(&scene, &lines).truth;

    create_dir(&args.out)?;
    for frame in scene.frames()? {
        write_frame(&frame, args.out.join(format!("{:05}.pgm", frame.index())))?;
    }
    let truth_json = serde_json::to_string(&truth).expect("truth serialization is infallible");
    let truth_path = args.out.join("truth.json");
    std::fs::write(&truth_path, format!("{truth_json}\n"))
        .map_err(|e| Error::io(&truth_path, e))?;

    let summary = serde_json::json!({
        "out": args.out,
        "frames": scene.frames,
        "width": scene.width,
        "height": scene.height,
        "seed": scene.seed,
        "lines": lines,
        "true_in": truth.true_in,
        "true_out": truth.true_out,
        "true_total": truth.true_total,
    });
    Ok(serde_json::to_string_pretty(&summary).expect("summary serialization is infallible"))
}

/// Returns the three accuracies rounded to two decimals.
pub fn cmd_eval(args: &EvalArgs) -> Result<String> {
    let text = std::fs::read_to_string(&args.report).map_err(|e| Error::io(&args.report, e))?;
    let report = CountReport::from_json(&text)?;
    let truth = GroundTruth::load(&args.truth)?;
    Ok(Accuracies::compute(&report.counters, &truth)?.to_display_json())
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}
