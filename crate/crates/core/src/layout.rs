//! Layout inference: band a resolved scene into rows and build the UI tree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::class::ElementClass;
use crate::detection::DetectedElement;
use crate::geometry::interval_overlap;
use crate::ir::{NodeType, UiNode};
use crate::resolve::ResolvedScene;

pub const PARAGRAPH_TEXT: &str = "Lorem ipsum dolor sit amet, consectetur adipiscing elit.";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutOptions {
    /// Two elements share a row when their vertical overlap reaches this
    /// fraction of the smaller height.
    pub row_overlap: f64,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        Self { row_overlap: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LayoutItem {
    Leaf(DetectedElement),
    Group {
        node_type: NodeType,
        relation: String,
        members: Vec<DetectedElement>,
    },
}

impl LayoutItem {
    pub fn leaf_count(&self) -> usize {
        match self {
            LayoutItem::Leaf(_) => 1,
            LayoutItem::Group { members, .. } => members.len(),
        }
    }
}

/// Rows top to bottom, items left to right.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayoutTree {
    pub rows: Vec<Vec<LayoutItem>>,
}

impl LayoutTree {
    pub fn leaf_count(&self) -> usize {
        self.rows.iter().flatten().map(LayoutItem::leaf_count).sum()
    }
}

/// The pairwise banding rule.
pub fn same_row(a: &DetectedElement, b: &DetectedElement, opts: &LayoutOptions) -> bool {
    let overlap = interval_overlap(a.bbox.y_min(), a.bbox.y_max(), b.bbox.y_min(), b.bbox.y_max());
    overlap > 0.0 && overlap >= opts.row_overlap * a.bbox.height().min(b.bbox.height())
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Row label per element: the transitive closure of [`same_row`].
/// Labels are dense and ordered top to bottom.
pub fn band_rows(elements: &[DetectedElement], opts: &LayoutOptions) -> Vec<usize> {
    let n = elements.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if same_row(&elements[i], &elements[j], opts) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();

    // Order clusters by their top edge, then by earliest member.
    let mut top: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (i, root) in roots.iter().enumerate() {
        let y = elements[i].bbox.y_min();
        top.entry(*root)
            .and_modify(|(ty, first)| {
                if y < *ty {
                    *ty = y;
                }
                *first = (*first).min(i);
            })
            .or_insert((y, i));
    }
    let mut order: Vec<(usize, f64, usize)> = top.into_iter().map(|(r, (y, first))| (r, y, first)).collect();
    order.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.2.cmp(&b.2)));
    let label: BTreeMap<usize, usize> = order.iter().enumerate().map(|(k, (r, _, _))| (*r, k)).collect();
    roots.iter().map(|r| label[r]).collect()
}

fn reading_order(elements: &[DetectedElement], a: usize, b: usize) -> Ordering {
    let (ea, eb) = (&elements[a].bbox, &elements[b].bbox);
    ea.x_min()
        .total_cmp(&eb.x_min())
        .then(ea.y_min().total_cmp(&eb.y_min()))
        .then(a.cmp(&b))
}

fn group_type(parent_type: &str) -> NodeType {
    match NodeType::from_name(parent_type) {
        Some(t @ (NodeType::Form | NodeType::LabeledControl)) => t,
        _ => NodeType::Form,
    }
}

/// Bands elements into rows and realises group directives as containers placed
/// at their left-most member.
pub fn infer_layout(scene: &ResolvedScene, opts: &LayoutOptions) -> LayoutTree {
    let elements = &scene.elements;
    let row_of = band_rows(elements, opts);
    let row_count = row_of.iter().map(|r| r + 1).max().unwrap_or(0);

    let mut group_of: Vec<Option<usize>> = alloc::vec![None; elements.len()];
    for (g, directive) in scene.groups.iter().enumerate() {
        for m in &directive.members {
            group_of[*m] = Some(g);
        }
    }

    // Each unit is anchored by one element: itself, or a group's left-most member.
    let mut units: Vec<(usize, LayoutItem)> = Vec::new();
    for (i, element) in elements.iter().enumerate() {
        if group_of[i].is_none() {
            units.push((i, LayoutItem::Leaf(element.clone())));
        }
    }
    for directive in &scene.groups {
        let mut members = directive.members.clone();
        members.sort_by(|a, b| reading_order(elements, *a, *b));
        units.push((
            members[0],
            LayoutItem::Group {
                node_type: group_type(&directive.parent_type),
                relation: directive.relation.clone(),
                members: members.iter().map(|m| elements[*m].clone()).collect(),
            },
        ));
    }
    units.sort_by(|a, b| row_of[a.0].cmp(&row_of[b.0]).then(reading_order(elements, a.0, b.0)));

    let mut rows: Vec<Vec<LayoutItem>> = (0..row_count).map(|_| Vec::new()).collect();
    for (anchor, item) in units {
        rows[row_of[anchor]].push(item);
    }
    rows.retain(|r| !r.is_empty());
    LayoutTree { rows }
}

/// Placeholder properties for a freshly detected element.
pub fn default_props(class: ElementClass) -> BTreeMap<String, String> {
    let pairs: &[(&str, &str)] = match class {
        ElementClass::Heading => &[("text", "Heading")],
        ElementClass::Button => &[("text", "Button")],
        ElementClass::TextBox => &[("placeholder", "Text")],
        ElementClass::Image => &[("alt", "Image")],
        ElementClass::Checkbox | ElementClass::Radio => &[("checked", "false")],
        ElementClass::Link => &[("href", "#")],
        ElementClass::SelectBox => &[("options", "Option 1;Option 2")],
        ElementClass::Label => &[("text", "Label")],
        ElementClass::Paragraph => &[("text", PARAGRAPH_TEXT)],
    };
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

struct IdGen(usize);

impl IdGen {
    fn next(&mut self) -> String {
        let id = format!("el-{}", self.0);
        self.0 += 1;
        id
    }
}

fn leaf_node(element: &DetectedElement, ids: &mut IdGen) -> UiNode {
    let mut node = UiNode::new(NodeType::Element(element.class), ids.next());
    node.props = default_props(element.class);
    node.bbox = Some(element.bbox);
    node
}

/// Converts a layout tree into the UI representation object, numbering ids in pre-order.
pub fn build_ui_representation(tree: &LayoutTree) -> UiNode {
    let mut ids = IdGen(0);
    let mut page = UiNode::new(NodeType::Page, ids.next());
    for row in &tree.rows {
        let mut row_node = UiNode::new(NodeType::Row, ids.next());
        for item in row {
            let child = match item {
                LayoutItem::Leaf(element) => leaf_node(element, &mut ids),
                LayoutItem::Group {
                    node_type,
                    relation,
                    members,
                } => {
                    let mut group = UiNode::new(*node_type, ids.next());
                    group.props.insert("relation".into(), relation.clone());
                    group.children = members.iter().map(|m| leaf_node(m, &mut ids)).collect();
                    group
                }
            };
            row_node.children.push(child);
        }
        page.children.push(row_node);
    }
    page
}
