//! Sketch-to-UI compiler core.
//!
//! Turns object-detection output over hand-drawn UI sketches into a
//! platform-independent UI representation object and then into HTML or
//! Android layout code:
//!
//! 1. [`detection`] parses annotation CSVs and class maps.
//! 2. [`resolve`] removes duplicate detections and groups related neighbours.
//! 3. [`layout`] bands the scene into rows and builds the [`ir::UiNode`] tree.
//! 4. [`codegen`] renders the tree for a [`codegen::Target`].
//!
//! [`focal`] holds the focal-loss numerics used to train the detector.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod class;
pub mod codegen;
pub mod detection;
pub mod focal;
pub mod geometry;
pub mod ir;
pub mod layout;
pub mod resolve;
pub mod rules;

pub use class::{parse_class_map, ClassMap, ElementClass};
pub use codegen::{emit, generate_android_xml, generate_html, EmitOptions, GeneratedDocument, Target};
pub use detection::{
    class_histogram, filter_by_confidence, parse_detection_csv, ClassHistogram, DetectedElement, DetectionSet,
    ParseError,
};
pub use geometry::{overlap_area, overlap_lengths, overlap_ratio, overlap_ratio_with, BoundingBox, RatioMode};
pub use ir::{parse_ui, serialize_ui, NodeType, UiNode};
pub use layout::{build_ui_representation, infer_layout, LayoutOptions, LayoutTree};
pub use resolve::{classify_overlap, resolve_all, GroupDirective, OverlapKind, ResolvedScene};
pub use rules::ResolutionRules;
