//! The post-detection pipeline: parse, filter, resolve, lay out, emit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sketch2ui_core::layout::LayoutOptions;
use sketch2ui_core::{
    build_ui_representation, class_histogram, emit, filter_by_confidence, infer_layout, parse_class_map,
    parse_detection_csv, resolve_all, serialize_ui, ClassHistogram, ElementClass, EmitOptions, ResolutionRules, Target,
};

use crate::error::CliError;
use crate::fsio::{atomic_write, read_text, sketch_stem};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub detections_path: PathBuf,
    pub classes_path: PathBuf,
    pub rules_path: Option<PathBuf>,
    pub confidence_threshold: f64,
    pub target: Target,
    pub out_dir: PathBuf,
    pub serve_port: u16,
}

impl PipelineConfig {
    pub fn new(detections_path: impl Into<PathBuf>, classes_path: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            detections_path: detections_path.into(),
            classes_path: classes_path.into(),
            rules_path: None,
            confidence_threshold: 0.5,
            target: Target::Html,
            out_dir: out_dir.into(),
            serve_port: 8080,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.detections_path.as_os_str().is_empty() || self.classes_path.as_os_str().is_empty() {
            return Err(CliError::input("--detections and --classes are required"));
        }
        if self.out_dir.as_os_str().is_empty() {
            return Err(CliError::input("--out must not be empty"));
        }
        if !(0.0..=1.0).contains(&self.confidence_threshold) {
            return Err(CliError::input(format!(
                "--confidence {} outside [0, 1]",
                self.confidence_threshold
            )));
        }
        if self.serve_port == 0 {
            return Err(CliError::input("--port must be in 1..=65535"));
        }
        Ok(())
    }

    /// Input files whose modification triggers a rebuild in serve mode.
    pub fn watched_paths(&self) -> Vec<PathBuf> {
        let mut paths = vec![self.detections_path.clone(), self.classes_path.clone()];
        paths.extend(self.rules_path.clone());
        paths
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// IR and target document.
    Compile,
    /// IR only.
    Resolve,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct StageTimes {
    pub parse_ms: f64,
    pub resolve_ms: f64,
    pub layout_ms: f64,
    pub emit_ms: f64,
    pub total_ms: f64,
}

impl StageTimes {
    fn add(&mut self, other: &StageTimes) {
        self.parse_ms += other.parse_ms;
        self.resolve_ms += other.resolve_ms;
        self.layout_ms += other.layout_ms;
        self.emit_ms += other.emit_ms;
        self.total_ms += other.total_ms;
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RemovalEntry {
    pub class: String,
    pub bbox: [f64; 4],
    pub confidence: f64,
    pub reason: String,
    pub kept_class: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SketchReport {
    pub sketch: String,
    pub source: String,
    /// Detections at or above the confidence threshold.
    pub elements_in: usize,
    /// Detections dropped by the confidence threshold.
    pub below_threshold: usize,
    pub retained: usize,
    pub removed: usize,
    pub groups: usize,
    pub outputs: Vec<String>,
    pub timings: StageTimes,
    pub removals: Vec<RemovalEntry>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub sketches: usize,
    pub elements_in: usize,
    pub retained: usize,
    pub removed: usize,
    /// Whole-file parse time; per-sketch `parse_ms` is this split evenly.
    pub file_parse_ms: f64,
    pub timings: StageTimes,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub sketches: Vec<SketchReport>,
    pub histogram: BTreeMap<String, usize>,
    pub histogram_total: usize,
    pub summary: Summary,
}

fn histogram_map(hist: &ClassHistogram) -> BTreeMap<String, usize> {
    hist.iter().map(|(c, n)| (c.name().to_string(), n)).collect()
}

impl RunReport {
    /// Line-oriented `key=value` rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sketches {
            let t = &s.timings;
            let _ = writeln!(
                out,
                "sketch={} source={} elements_in={} below_threshold={} retained={} removed={} groups={} \
                 parse_ms={:.3} resolve_ms={:.3} layout_ms={:.3} emit_ms={:.3} total_ms={:.3}",
                s.sketch,
                s.source,
                s.elements_in,
                s.below_threshold,
                s.retained,
                s.removed,
                s.groups,
                t.parse_ms,
                t.resolve_ms,
                t.layout_ms,
                t.emit_ms,
                t.total_ms
            );
            for r in &s.removals {
                let [x0, y0, x1, y1] = r.bbox;
                let _ = writeln!(
                    out,
                    "removed sketch={} class={} bbox={x0},{y0},{x1},{y1} confidence={} reason=\"{}\" kept={}",
                    s.sketch, r.class, r.confidence, r.reason, r.kept_class
                );
            }
        }
        out.push_str("histogram");
        for class in ElementClass::ALL.map(ElementClass::name) {
            let _ = write!(out, " {class}={}", self.histogram.get(class).copied().unwrap_or(0));
        }
        let _ = writeln!(out, " total={}", self.histogram_total);
        let m = &self.summary;
        let t = &m.timings;
        let _ = writeln!(
            out,
            "summary sketches={} elements_in={} retained={} removed={} file_parse_ms={:.3} \
             parse_ms={:.3} resolve_ms={:.3} layout_ms={:.3} emit_ms={:.3} total_ms={:.3}",
            m.sketches,
            m.elements_in,
            m.retained,
            m.removed,
            m.file_parse_ms,
            t.parse_ms,
            t.resolve_ms,
            t.layout_ms,
            t.emit_ms,
            t.total_ms
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// A finished run: the report plus the files to write, keyed by output path.
pub struct RunOutput {
    pub report: RunReport,
    pub files: Vec<(PathBuf, String)>,
}

/// Runs the pipeline in memory without touching the output directory.
pub fn run(config: &PipelineConfig, mode: Mode, opts: &EmitOptions) -> Result<RunOutput, CliError> {
    config.validate()?;
    let classes_text = read_text(&config.classes_path)?;
    let detections_text = read_text(&config.detections_path)?;
    let rules = match &config.rules_path {
        Some(path) => ResolutionRules::from_json(&read_text(path)?).map_err(|e| CliError::in_file(path, e))?,
        None => ResolutionRules::default(),
    };

    let parse_start = Instant::now();
    let classes = parse_class_map(&classes_text).map_err(|e| CliError::in_file(&config.classes_path, e))?;
    let sets = parse_detection_csv(&detections_text, &classes)
        .map_err(|e| CliError::in_file(&config.detections_path, e))?;
    let file_parse_ms = ms(parse_start);
    let parse_share = file_parse_ms / sets.len() as f64;

    let mut stems: BTreeMap<String, &str> = BTreeMap::new();
    for set in &sets {
        let stem = sketch_stem(&set.source_file);
        if let Some(other) = stems.insert(stem.clone(), &set.source_file) {
            return Err(CliError::in_file(
                &config.detections_path,
                format!("sketches `{other}` and `{}` would both write `{stem}.*`", set.source_file),
            ));
        }
    }

    let layout_opts = LayoutOptions::default();
    let mut files = Vec::new();
    let mut sketches = Vec::new();
    let mut summary_times = StageTimes::default();
    for set in &sets {
        let stem = sketch_stem(&set.source_file);
        let sketch_start = Instant::now();

        let t = Instant::now();
        let kept = filter_by_confidence(set, config.confidence_threshold);
        let scene = resolve_all(&kept, &rules);
        let resolve_ms = ms(t);
        assert_eq!(kept.len(), scene.elements.len() + scene.removed.len());

        let t = Instant::now();
        let tree = infer_layout(&scene, &layout_opts);
        let root = build_ui_representation(&tree);
        let layout_ms = ms(t);

        let t = Instant::now();
        let ir_text = serialize_ui(&root);
        let document = match mode {
            Mode::Compile => Some(
                emit(&root, config.target, opts).map_err(|e| CliError::input(format!("{}: {e}", set.source_file)))?,
            ),
            Mode::Resolve => None,
        };
        let emit_ms = ms(t);

        let timings = StageTimes {
            parse_ms: parse_share,
            resolve_ms,
            layout_ms,
            emit_ms,
            total_ms: parse_share + ms(sketch_start),
        };
        summary_times.add(&timings);

        let mut outputs = vec![format!("{stem}.ir.json")];
        files.push((config.out_dir.join(&outputs[0]), ir_text));
        if let Some(doc) = document {
            let ext = doc.suggested_filename.rsplit('.').next().unwrap_or("out");
            outputs.push(format!("{stem}.{ext}"));
            files.push((config.out_dir.join(&outputs[1]), doc.content));
        }

        sketches.push(SketchReport {
            sketch: stem,
            source: set.source_file.clone(),
            elements_in: kept.len(),
            below_threshold: set.len() - kept.len(),
            retained: scene.elements.len(),
            removed: scene.removed.len(),
            groups: scene.groups.len(),
            outputs,
            timings,
            removals: scene
                .removed
                .iter()
                .map(|r| RemovalEntry {
                    class: r.element.class.name().to_string(),
                    bbox: r.element.bbox.to_array(),
                    confidence: r.element.confidence,
                    reason: r.reason.to_string(),
                    kept_class: kept.elements[r.kept_index].class.name().to_string(),
                })
                .collect(),
        });
    }

    let hist = class_histogram(&sets);
    let report = RunReport {
        summary: Summary {
            sketches: sketches.len(),
            elements_in: sketches.iter().map(|s| s.elements_in).sum(),
            retained: sketches.iter().map(|s| s.retained).sum(),
            removed: sketches.iter().map(|s| s.removed).sum(),
            file_parse_ms,
            timings: summary_times,
        },
        sketches,
        histogram: histogram_map(&hist),
        histogram_total: hist.total(),
    };
    Ok(RunOutput { report, files })
}

/// Runs the pipeline and writes every output file into `out_dir`.
pub fn run_and_write(config: &PipelineConfig, mode: Mode, opts: &EmitOptions) -> Result<RunReport, CliError> {
    let output = run(config, mode, opts)?;
    std::fs::create_dir_all(&config.out_dir).map_err(|e| CliError::io(&config.out_dir, e))?;
    for (path, contents) in &output.files {
        atomic_write(path, contents.as_bytes())?;
    }
    Ok(output.report)
}

pub fn out_path(config: &PipelineConfig, name: &str) -> PathBuf {
    Path::new(&config.out_dir).join(name)
}
