//! Detector output: annotation CSV parsing, confidence filtering and class histograms.
//!
//! Each record is `file-location,x-min,y-min,x-max,y-max,class[,confidence]`.
//! The class may be a canonical name or an integer id resolved through a
//! [`ClassMap`]. A missing confidence defaults to `1.0`, so training-style
//! annotation files load unchanged.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;
use core::ops::Index;

use crate::class::{ClassMap, ElementClass};
use crate::geometry::{BoundingBox, BoxError};

/// One detector output: class, box and confidence score.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectedElement {
    pub class: ElementClass,
    pub bbox: BoundingBox,
    pub confidence: f64,
}

impl DetectedElement {
    /// Panics if `confidence` is outside `[0, 1]`.
    pub fn new(class: ElementClass, bbox: BoundingBox, confidence: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&confidence),
            "confidence {confidence} outside [0, 1]"
        );
        Self {
            class,
            bbox,
            confidence,
        }
    }
}

/// All detections for one sketch, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionSet {
    pub source_file: String,
    pub elements: Vec<DetectedElement>,
}

impl DetectionSet {
    pub fn new(source_file: impl Into<String>, elements: Vec<DetectedElement>) -> Self {
        Self {
            source_file: source_file.into(),
            elements,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LineError {
    #[error("expected {expected} fields, found {found}")]
    FieldCount { expected: &'static str, found: usize },
    #[error("malformed integer `{0}`")]
    MalformedInteger(String),
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error("duplicate class id {0}")]
    DuplicateId(u32),
    #[error("duplicate class `{0}`")]
    DuplicateClass(ElementClass),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class `{0}` is neither a class name nor an id in the class map")]
    UnresolvableClass(String),
    #[error("empty file location")]
    EmptyLocation,
    #[error("inverted or degenerate box")]
    InvertedBox,
    #[error("negative coordinate")]
    NegativeCoordinate,
    #[error("non-finite coordinate")]
    NonFiniteCoordinate,
    #[error("confidence {0} outside [0, 1]")]
    ConfidenceOutOfRange(f64),
}

impl From<BoxError> for LineError {
    fn from(err: BoxError) -> Self {
        match err {
            BoxError::NonFinite => LineError::NonFiniteCoordinate,
            BoxError::Negative => LineError::NegativeCoordinate,
            BoxError::Inverted => LineError::InvertedBox,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("class map is empty")]
    EmptyClassMap,
    #[error("no detection records")]
    EmptyDetections,
    #[error("line {line}: {kind}")]
    Line { line: usize, kind: LineError },
}

impl ParseError {
    pub fn at(line: usize, kind: LineError) -> Self {
        ParseError::Line { line, kind }
    }

    /// 1-based line number, when the error is tied to a line.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Line { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_number(field: &str) -> Result<f64, LineError> {
    // `f64::from_str` also accepts "inf" and "NaN"; only plain decimals are allowed here.
    let plain = !field.is_empty()
        && field
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    match field.parse::<f64>() {
        Ok(v) if plain && v.is_finite() => Ok(v),
        _ => Err(LineError::MalformedNumber(field.to_string())),
    }
}

fn resolve_class(field: &str, classes: &ClassMap) -> Result<ElementClass, LineError> {
    if let Some(class) = ElementClass::from_name(field) {
        return Ok(class);
    }
    field
        .parse::<u32>()
        .ok()
        .and_then(|id| classes.class(id))
        .ok_or_else(|| LineError::UnresolvableClass(field.to_string()))
}

fn parse_record(line: &str, classes: &ClassMap) -> Result<(String, DetectedElement), LineError> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != 6 && fields.len() != 7 {
        return Err(LineError::FieldCount {
            expected: "6 or 7",
            found: fields.len(),
        });
    }
    if fields[0].is_empty() {
        return Err(LineError::EmptyLocation);
    }
    let mut coords = [0.0; 4];
    for (slot, field) in coords.iter_mut().zip(&fields[1..5]) {
        *slot = parse_number(field)?;
    }
    let bbox = BoundingBox::new(coords[0], coords[1], coords[2], coords[3])?;
    let class = resolve_class(fields[5], classes)?;
    let confidence = match fields.get(6) {
        Some(field) => {
            let c = parse_number(field)?;
            if !(0.0..=1.0).contains(&c) {
                return Err(LineError::ConfidenceOutOfRange(c));
            }
            c
        }
        None => 1.0,
    };
    Ok((
        fields[0].to_string(),
        DetectedElement {
            class,
            bbox,
            confidence,
        },
    ))
}

/// Parses an annotation CSV into one [`DetectionSet`] per distinct file location.
///
/// Sets are ordered by first appearance of their file location; elements keep
/// file order. LF and CRLF endings are accepted, `#` lines are comments.
pub fn parse_detection_csv(text: &str, classes: &ClassMap) -> Result<Vec<DetectionSet>, ParseError> {
    let mut sets: Vec<DetectionSet> = Vec::new();
    for (line_no, line) in records(text) {
        let (source, element) =
            parse_record(line, classes).map_err(|kind| ParseError::at(line_no, kind))?;
        match sets.iter_mut().find(|s| s.source_file == source) {
            Some(set) => set.elements.push(element),
            None => sets.push(DetectionSet::new(source, alloc::vec![element])),
        }
    }
    if sets.is_empty() {
        return Err(ParseError::EmptyDetections);
    }
    Ok(sets)
}

/// Writes sets back out in the seven-column form accepted by [`parse_detection_csv`].
pub fn write_detection_csv(sets: &[DetectionSet]) -> String {
    let mut out = String::new();
    for set in sets {
        for e in &set.elements {
            let [x0, y0, x1, y1] = e.bbox.to_array();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                set.source_file, x0, y0, x1, y1, e.class, e.confidence
            );
        }
    }
    out
}

/// Keeps the elements with `confidence >= threshold`, preserving order.
pub fn filter_by_confidence(dets: &DetectionSet, threshold: f64) -> DetectionSet {
    DetectionSet {
        source_file: dets.source_file.clone(),
        elements: dets
            .elements
            .iter()
            .filter(|e| e.confidence >= threshold)
            .cloned()
            .collect(),
    }
}

/// Occurrence count per [`ElementClass`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassHistogram([usize; ElementClass::COUNT]);

impl ClassHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: [usize; ElementClass::COUNT]) -> Self {
        Self(counts)
    }

    pub fn add(&mut self, class: ElementClass) {
        self.0[class.index()] += 1;
    }

    pub fn get(&self, class: ElementClass) -> usize {
        self.0[class.index()]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementClass, usize)> + '_ {
        ElementClass::ALL.into_iter().map(|c| (c, self.get(c)))
    }
}

impl Index<ElementClass> for ClassHistogram {
    type Output = usize;

    fn index(&self, class: ElementClass) -> &usize {
        &self.0[class.index()]
    }
}

pub fn class_histogram(dets: &[DetectionSet]) -> ClassHistogram {
    let mut hist = ClassHistogram::new();
    for e in dets.iter().flat_map(|s| &s.elements) {
        hist.add(e.class);
    }
    hist
}
