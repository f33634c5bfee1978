//! Overlap resolution over one sketch's detections.
//!
//! Pairs whose overlap ratio reaches the duplicate threshold are one sketched
//! component read twice; the loser is removed. Smaller overlaps are distinct
//! neighbours, and related neighbours are collected into group directives.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::detection::{DetectedElement, DetectionSet};
use crate::geometry::overlap_ratio_with;
use crate::rules::ResolutionRules;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapKind {
    None,
    Proximity,
    Duplicate,
}

fn ratio(e1: &DetectedElement, e2: &DetectedElement, rules: &ResolutionRules) -> f64 {
    overlap_ratio_with(&e1.bbox, &e2.bbox, rules.ratio_mode)
}

fn kind_for_ratio(ratio: f64, rules: &ResolutionRules) -> OverlapKind {
    if ratio == 0.0 {
        OverlapKind::None
    } else if ratio >= rules.duplicate_threshold {
        OverlapKind::Duplicate
    } else {
        OverlapKind::Proximity
    }
}

pub fn classify_overlap(e1: &DetectedElement, e2: &DetectedElement, rules: &ResolutionRules) -> OverlapKind {
    kind_for_ratio(ratio(e1, e2, rules), rules)
}

/// Which rule settled a duplicate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalReason {
    /// Conflicting classes; the higher-priority class won.
    Priority,
    Confidence,
    Area,
    /// Everything tied; the earlier element won.
    Order,
}

impl RemovalReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RemovalReason::Priority => "duplicate: priority",
            RemovalReason::Confidence => "duplicate: confidence",
            RemovalReason::Area => "duplicate: area",
            RemovalReason::Order => "duplicate: order",
        }
    }
}

impl fmt::Display for RemovalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterOutcome {
    pub keep: Keep,
    pub reason: RemovalReason,
}

/// Decides which of two duplicate detections survives. `e1` is the earlier one in input order.
pub fn overlap_filter(e1: &DetectedElement, e2: &DetectedElement, rules: &ResolutionRules) -> FilterOutcome {
    let outcome = |first_wins: bool, reason| FilterOutcome {
        keep: if first_wins { Keep::First } else { Keep::Second },
        reason,
    };
    if e1.class != e2.class && rules.conflicts.contains(e1.class, e2.class) {
        let first_wins = rules.priority.rank(e1.class) < rules.priority.rank(e2.class);
        return outcome(first_wins, RemovalReason::Priority);
    }
    match e1.confidence.total_cmp(&e2.confidence) {
        Ordering::Greater => return outcome(true, RemovalReason::Confidence),
        Ordering::Less => return outcome(false, RemovalReason::Confidence),
        Ordering::Equal => {}
    }
    match e1.bbox.area().total_cmp(&e2.bbox.area()) {
        Ordering::Greater => outcome(true, RemovalReason::Area),
        Ordering::Less => outcome(false, RemovalReason::Area),
        Ordering::Equal => outcome(true, RemovalReason::Order),
    }
}

/// Instruction to wrap related neighbours in a container node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDirective {
    /// Indices into [`ResolvedScene::elements`], ascending.
    pub members: Vec<usize>,
    pub parent_type: String,
    pub relation: String,
}

/// Returns the grouping for a proximal pair when the relation table knows the class pair.
pub fn group_proximal(
    e1: &DetectedElement,
    e2: &DetectedElement,
    rules: &ResolutionRules,
    indices: (usize, usize),
) -> Option<GroupDirective> {
    let relation = rules.relations.get(e1.class, e2.class)?;
    let (a, b) = indices;
    let mut members = alloc::vec![a, b];
    members.sort_unstable();
    members.dedup();
    Some(GroupDirective {
        members,
        parent_type: relation.parent_type.clone(),
        relation: relation.relation.clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Removal {
    pub element: DetectedElement,
    /// Index of the removed element in the input set.
    pub input_index: usize,
    pub reason: RemovalReason,
    /// Input index of the element that won the pair.
    pub kept_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedScene {
    pub source_file: String,
    pub elements: Vec<DetectedElement>,
    pub groups: Vec<GroupDirective>,
    pub removed: Vec<Removal>,
}

impl ResolvedScene {
    /// A scene with nothing removed or grouped.
    pub fn passthrough(dets: &DetectionSet) -> Self {
        Self {
            source_file: dets.source_file.clone(),
            elements: dets.elements.clone(),
            groups: Vec::new(),
            removed: Vec::new(),
        }
    }
}

struct Candidate {
    i: usize,
    j: usize,
    ratio: f64,
}

/// Pairs `i < j` of the given kind, sorted by descending ratio, then by `(i, j)`.
fn candidates(elements: &[DetectedElement], rules: &ResolutionRules, kind: OverlapKind) -> Vec<Candidate> {
    let mut pairs = Vec::new();
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            let r = ratio(&elements[i], &elements[j], rules);
            if kind_for_ratio(r, rules) == kind {
                pairs.push(Candidate { i, j, ratio: r });
            }
        }
    }
    pairs.sort_by(|a, b| b.ratio.total_cmp(&a.ratio).then((a.i, a.j).cmp(&(b.i, b.j))));
    pairs
}

/// Runs duplicate removal followed by proximity grouping.
pub fn resolve_all(dets: &DetectionSet, rules: &ResolutionRules) -> ResolvedScene {
    let input = &dets.elements;
    let mut removed_by: Vec<Option<(RemovalReason, usize)>> = alloc::vec![None; input.len()];

    for Candidate { i, j, .. } in candidates(input, rules, OverlapKind::Duplicate) {
        if removed_by[i].is_some() || removed_by[j].is_some() {
            continue;
        }
        let outcome = overlap_filter(&input[i], &input[j], rules);
        let (winner, loser) = match outcome.keep {
            Keep::First => (i, j),
            Keep::Second => (j, i),
        };
        removed_by[loser] = Some((outcome.reason, winner));
    }

    let mut elements = Vec::new();
    let mut removed = Vec::new();
    for (index, (element, fate)) in input.iter().zip(&removed_by).enumerate() {
        match fate {
            None => elements.push(element.clone()),
            Some((reason, kept_index)) => removed.push(Removal {
                element: element.clone(),
                input_index: index,
                reason: *reason,
                kept_index: *kept_index,
            }),
        }
    }

    let groups = collect_groups(&elements, rules);
    ResolvedScene {
        source_file: dets.source_file.clone(),
        elements,
        groups,
        removed,
    }
}

/// Gathers proximity directives; an element joins at most one group, and
/// directives sharing a member with the same parent type are merged.
fn collect_groups(elements: &[DetectedElement], rules: &ResolutionRules) -> Vec<GroupDirective> {
    let mut groups: Vec<Option<GroupDirective>> = Vec::new();
    let mut group_of: Vec<Option<usize>> = alloc::vec![None; elements.len()];

    for Candidate { i, j, .. } in candidates(elements, rules, OverlapKind::Proximity) {
        let Some(directive) = group_proximal(&elements[i], &elements[j], rules, (i, j)) else {
            continue;
        };
        let same_parent =
            |g: usize, groups: &[Option<GroupDirective>]| groups[g].as_ref().is_some_and(|d| d.parent_type == directive.parent_type);
        match (group_of[i], group_of[j]) {
            (None, None) => {
                group_of[i] = Some(groups.len());
                group_of[j] = Some(groups.len());
                groups.push(Some(directive));
            }
            (Some(g), None) | (None, Some(g)) => {
                if same_parent(g, &groups) {
                    let newcomer = if group_of[i].is_none() { i } else { j };
                    groups[g].as_mut().unwrap().members.push(newcomer);
                    group_of[newcomer] = Some(g);
                }
            }
            (Some(g), Some(h)) if g != h && same_parent(g, &groups) && same_parent(h, &groups) => {
                let absorbed = groups[h].take().unwrap();
                for m in &absorbed.members {
                    group_of[*m] = Some(g);
                }
                groups[g].as_mut().unwrap().members.extend(absorbed.members);
            }
            _ => {}
        }
    }

    let mut groups: Vec<GroupDirective> = groups.into_iter().flatten().collect();
    for g in &mut groups {
        g.members.sort_unstable();
    }
    groups.sort_by_key(|g| g.members[0]);
    groups
}
