#![allow(dead_code)]

use proptest::prelude::*;
use sketch2ui_core::{BoundingBox, DetectedElement, DetectionSet, ElementClass};

pub fn class() -> impl Strategy<Value = ElementClass> {
    (0..ElementClass::COUNT).prop_map(|i| ElementClass::ALL[i])
}

/// Integer-cornered box inside `[0, extent]^2` with positive width and height.
pub fn int_box(extent: u32) -> impl Strategy<Value = BoundingBox> {
    (0..extent, 0..extent, 0..extent, 0..extent).prop_map(|(a, b, c, d)| {
        let (x0, x1) = if a == c { (a, a + 1) } else { (a.min(c), a.max(c)) };
        let (y0, y1) = if b == d { (b, b + 1) } else { (b.min(d), b.max(d)) };
        BoundingBox::new(x0 as f64, y0 as f64, x1 as f64, y1 as f64).unwrap()
    })
}

/// Confidences in `(0, 0.5]` so that doubling stays a valid confidence.
pub fn confidence() -> impl Strategy<Value = f64> {
    (1u32..=50).prop_map(|k| k as f64 / 100.0)
}

pub fn element(extent: u32) -> impl Strategy<Value = DetectedElement> {
    (class(), int_box(extent), confidence()).prop_map(|(c, b, p)| DetectedElement::new(c, b, p))
}

pub fn scene(max: usize) -> impl Strategy<Value = DetectionSet> {
    prop::collection::vec(element(120), 0..=max).prop_map(|els| DetectionSet::new("scene.jpg", els))
}

pub fn scaled(set: &DetectionSet, c: f64) -> DetectionSet {
    let elements = set
        .elements
        .iter()
        .map(|e| DetectedElement::new(e.class, e.bbox, e.confidence * c))
        .collect();
    DetectionSet::new(set.source_file.clone(), elements)
}
