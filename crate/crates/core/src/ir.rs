//! The platform-independent UI representation object and its canonical JSON form.
//!
//! Canonical serialization is byte-exact: keys in the order `type`, `id`,
//! `props`, `bbox`, `children`; `props` keys sorted; `bbox` written inline as
//! `[x_min, y_min, x_max, y_max]` and omitted when absent; two-space indent;
//! trailing newline. Integral numbers are written without a fraction, others
//! in the shortest form that parses back to the same value.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use serde_json::Value;

use crate::class::ElementClass;
use crate::geometry::BoundingBox;

/// Type of a node: a detected element or a container.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeType {
    Element(ElementClass),
    Page,
    Row,
    Form,
    LabeledControl,
}

impl NodeType {
    pub fn name(self) -> &'static str {
        match self {
            NodeType::Element(class) => class.type_name(),
            NodeType::Page => "Page",
            NodeType::Row => "Row",
            NodeType::Form => "Form",
            NodeType::LabeledControl => "LabeledControl",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "Page" => Some(NodeType::Page),
            "Row" => Some(NodeType::Row),
            "Form" => Some(NodeType::Form),
            "LabeledControl" => Some(NodeType::LabeledControl),
            _ => ElementClass::ALL
                .into_iter()
                .find(|c| c.type_name() == name)
                .map(NodeType::Element),
        }
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, NodeType::Element(_))
    }

    pub fn class(self) -> Option<ElementClass> {
        match self {
            NodeType::Element(class) => Some(class),
            _ => None,
        }
    }
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UiNode {
    pub node_type: NodeType,
    pub id: String,
    pub props: BTreeMap<String, String>,
    pub bbox: Option<BoundingBox>,
    pub children: Vec<UiNode>,
}

impl UiNode {
    pub fn new(node_type: NodeType, id: impl Into<String>) -> Self {
        Self {
            node_type,
            id: id.into(),
            props: BTreeMap::new(),
            bbox: None,
            children: Vec::new(),
        }
    }

    pub fn prop(&self, key: &str) -> Option<&str> {
        self.props.get(key).map(String::as_str)
    }

    /// Leaves in document order.
    pub fn leaves(&self) -> Vec<&UiNode> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if n.node_type.is_leaf() {
                out.push(n);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a UiNode)) {
        visit(self);
        for child in &self.children {
            child.walk(visit);
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(UiNode::node_count).sum::<usize>()
    }

    /// Checks tree invariants: unique ids, leaves carry a box and no children,
    /// non-page containers are non-empty, `Page` only at the root.
    pub fn validate(&self) -> Result<(), IrError> {
        let mut ids = BTreeSet::new();
        self.validate_at(String::from("$"), true, &mut ids)
    }

    fn validate_at(&self, path: String, is_root: bool, ids: &mut BTreeSet<String>) -> Result<(), IrError> {
        if self.id.is_empty() {
            return Err(IrError::EmptyId { path });
        }
        if !ids.insert(self.id.clone()) {
            return Err(IrError::DuplicateId {
                path,
                id: self.id.clone(),
            });
        }
        match self.node_type {
            NodeType::Element(_) => {
                if !self.children.is_empty() {
                    return Err(IrError::LeafWithChildren { path });
                }
                if self.bbox.is_none() {
                    return Err(IrError::LeafWithoutBbox { path });
                }
            }
            NodeType::Page => {
                if !is_root {
                    return Err(IrError::NestedPage { path });
                }
            }
            _ => {
                if self.children.is_empty() {
                    return Err(IrError::EmptyContainer { path });
                }
            }
        }
        for (i, child) in self.children.iter().enumerate() {
            child.validate_at(format!("{path}.children[{i}]"), false, ids)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IrError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error("{path}: unknown node type `{found}`")]
    UnknownType { path: String, found: String },
    #[error("{path}: duplicate id `{id}`")]
    DuplicateId { path: String, id: String },
    #[error("{path}: empty id")]
    EmptyId { path: String },
    #[error("{path}: element node has children")]
    LeafWithChildren { path: String },
    #[error("{path}: element node has no bbox")]
    LeafWithoutBbox { path: String },
    #[error("{path}: container has no children")]
    EmptyContainer { path: String },
    #[error("{path}: Page may only appear at the root")]
    NestedPage { path: String },
    #[error("{path}: missing field `{field}`")]
    MissingField { path: String, field: &'static str },
    #[error("{path}: unexpected field `{field}`")]
    UnknownField { path: String, field: String },
    #[error("{path}: invalid `{field}`: {reason}")]
    InvalidField {
        path: String,
        field: &'static str,
        reason: String,
    },
}

fn write_indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Formats a finite number with minimal digits.
pub fn format_number(v: f64) -> String {
    if v == libm::trunc(v) && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn write_node(out: &mut String, node: &UiNode, depth: usize) {
    out.push_str("{\n");
    write_indent(out, depth + 1);
    out.push_str("\"type\": ");
    write_string(out, node.node_type.name());
    out.push_str(",\n");
    write_indent(out, depth + 1);
    out.push_str("\"id\": ");
    write_string(out, &node.id);
    out.push_str(",\n");
    write_indent(out, depth + 1);
    out.push_str("\"props\": ");
    if node.props.is_empty() {
        out.push_str("{}");
    } else {
        out.push_str("{\n");
        for (i, (k, v)) in node.props.iter().enumerate() {
            write_indent(out, depth + 2);
            write_string(out, k);
            out.push_str(": ");
            write_string(out, v);
            if i + 1 < node.props.len() {
                out.push(',');
            }
            out.push('\n');
        }
        write_indent(out, depth + 1);
        out.push('}');
    }
    out.push_str(",\n");
    if let Some(b) = &node.bbox {
        write_indent(out, depth + 1);
        let [x0, y0, x1, y1] = b.to_array().map(format_number);
        let _ = writeln!(out, "\"bbox\": [{x0}, {y0}, {x1}, {y1}],");
    }
    write_indent(out, depth + 1);
    out.push_str("\"children\": ");
    if node.children.is_empty() {
        out.push_str("[]");
    } else {
        out.push_str("[\n");
        for (i, child) in node.children.iter().enumerate() {
            write_indent(out, depth + 2);
            write_node(out, child, depth + 2);
            if i + 1 < node.children.len() {
                out.push(',');
            }
            out.push('\n');
        }
        write_indent(out, depth + 1);
        out.push(']');
    }
    out.push('\n');
    write_indent(out, depth);
    out.push('}');
}

/// Canonical JSON text of a tree.
pub fn serialize_ui(node: &UiNode) -> String {
    let mut out = String::new();
    write_node(&mut out, node, 0);
    out.push('\n');
    out
}

/// Parses and validates a UI representation document.
pub fn parse_ui(text: &str) -> Result<UiNode, IrError> {
    let value: Value = serde_json::from_str(text).map_err(|e| IrError::Malformed(e.to_string()))?;
    let node = node_from_value(&value, String::from("$"))?;
    node.validate()?;
    Ok(node)
}

fn node_from_value(value: &Value, path: String) -> Result<UiNode, IrError> {
    let invalid = |field, reason: &str| IrError::InvalidField {
        path: path.clone(),
        field,
        reason: reason.to_string(),
    };
    let obj = value.as_object().ok_or_else(|| invalid("node", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "type" | "id" | "props" | "bbox" | "children") {
            return Err(IrError::UnknownField {
                path,
                field: key.clone(),
            });
        }
    }
    let field = |name: &'static str| {
        obj.get(name).ok_or_else(|| IrError::MissingField {
            path: path.clone(),
            field: name,
        })
    };

    let type_name = field("type")?.as_str().ok_or_else(|| invalid("type", "expected a string"))?;
    let node_type = NodeType::from_name(type_name).ok_or_else(|| IrError::UnknownType {
        path: path.clone(),
        found: type_name.to_string(),
    })?;
    let id = field("id")?.as_str().ok_or_else(|| invalid("id", "expected a string"))?;

    let mut props = BTreeMap::new();
    for (k, v) in field("props")?.as_object().ok_or_else(|| invalid("props", "expected an object"))? {
        let v = v.as_str().ok_or_else(|| invalid("props", "values must be strings"))?;
        props.insert(k.clone(), v.to_string());
    }

    let bbox = match obj.get("bbox") {
        None => None,
        Some(v) => {
            let arr = v
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| invalid("bbox", "expected [x_min, y_min, x_max, y_max]"))?;
            let mut c = [0.0; 4];
            for (slot, n) in c.iter_mut().zip(arr) {
                *slot = n.as_f64().ok_or_else(|| invalid("bbox", "expected numbers"))?;
            }
            Some(BoundingBox::new(c[0], c[1], c[2], c[3]).map_err(|e| invalid("bbox", &e.to_string()))?)
        }
    };

    let raw_children = field("children")?
        .as_array()
        .ok_or_else(|| invalid("children", "expected an array"))?;
    if node_type.is_leaf() && !raw_children.is_empty() {
        return Err(IrError::LeafWithChildren { path });
    }
    let children = raw_children
        .iter()
        .enumerate()
        .map(|(i, child)| node_from_value(child, format!("{path}.children[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(UiNode {
        node_type,
        id: id.to_string(),
        props,
        bbox,
        children,
    })
}
