//! Tables that drive overlap resolution: class priority, duplicate conflicts
//! and proximity relations, plus the JSON rules-file loader.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Deserialize;

use crate::class::ElementClass;
use crate::geometry::RatioMode;

/// Container types a proximity relation may create.
pub const GROUP_TYPES: [&str; 2] = ["Form", "LabeledControl"];

/// Total order over classes; rank 0 is the highest priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityTable {
    ranks: [u8; ElementClass::COUNT],
}

impl PriorityTable {
    /// Builds the table from a highest-first ordering that names every class exactly once.
    pub fn from_order(order: &[ElementClass]) -> Result<Self, RulesError> {
        let mut ranks = [u8::MAX; ElementClass::COUNT];
        for (rank, class) in order.iter().enumerate() {
            if ranks[class.index()] != u8::MAX {
                return Err(RulesError::DuplicatePriority(*class));
            }
            ranks[class.index()] = rank as u8;
        }
        if let Some(missing) = ElementClass::ALL.into_iter().find(|c| ranks[c.index()] == u8::MAX) {
            return Err(RulesError::MissingPriority(missing));
        }
        Ok(Self { ranks })
    }

    pub fn rank(&self, class: ElementClass) -> u8 {
        self.ranks[class.index()]
    }

    /// Classes from highest to lowest priority.
    pub fn order(&self) -> Vec<ElementClass> {
        let mut order = ElementClass::ALL.to_vec();
        order.sort_by_key(|c| self.rank(*c));
        order
    }
}

impl Default for PriorityTable {
    fn default() -> Self {
        use ElementClass::*;
        Self::from_order(&[
            SelectBox, TextBox, Checkbox, Radio, Button, Image, Heading, Link, Paragraph, Label,
        ])
        .expect("default order covers every class")
    }
}

fn unordered(a: ElementClass, b: ElementClass) -> (ElementClass, ElementClass) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Class pairs that are treated as one physical component when they duplicate each other.
///
/// Pairs are stored unordered, so membership is symmetric.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConflictTable(BTreeSet<(ElementClass, ElementClass)>);

impl ConflictTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: ElementClass, b: ElementClass) {
        self.0.insert(unordered(a, b));
    }

    pub fn contains(&self, a: ElementClass, b: ElementClass) -> bool {
        self.0.contains(&unordered(a, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl ConflictTable {
    pub fn defaults() -> Self {
        use ElementClass::*;
        let mut table = Self::new();
        for (a, b) in [
            (Checkbox, Label),
            (Radio, Label),
            (TextBox, Label),
            (SelectBox, TextBox),
            (Button, Label),
            (Link, Label),
            (Heading, Label),
            (Heading, Paragraph),
        ] {
            table.insert(a, b);
        }
        table
    }
}

/// Composite grouping created when two related classes sit close together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub parent_type: String,
    pub relation: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationTable(BTreeMap<(ElementClass, ElementClass), Relation>);

impl RelationTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        a: ElementClass,
        b: ElementClass,
        parent_type: &str,
        relation: &str,
    ) -> Result<(), RulesError> {
        if !GROUP_TYPES.contains(&parent_type) {
            return Err(RulesError::UnknownParentType(parent_type.to_string()));
        }
        self.0.insert(
            unordered(a, b),
            Relation {
                parent_type: parent_type.to_string(),
                relation: relation.to_string(),
            },
        );
        Ok(())
    }

    pub fn get(&self, a: ElementClass, b: ElementClass) -> Option<&Relation> {
        self.0.get(&unordered(a, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn defaults() -> Self {
        use ElementClass::*;
        let mut table = Self::new();
        for (a, b, parent, relation) in [
            (Button, TextBox, "Form", "validation"),
            (Checkbox, Label, "LabeledControl", "caption"),
            (Radio, Label, "LabeledControl", "caption"),
        ] {
            table.insert(a, b, parent, relation).expect("default parent types are known");
        }
        table
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionRules {
    pub priority: PriorityTable,
    pub conflicts: ConflictTable,
    pub relations: RelationTable,
    /// Ratios at or above this value are duplicates.
    pub duplicate_threshold: f64,
    pub ratio_mode: RatioMode,
}

impl Default for ResolutionRules {
    fn default() -> Self {
        Self {
            priority: PriorityTable::default(),
            conflicts: ConflictTable::defaults(),
            relations: RelationTable::defaults(),
            duplicate_threshold: 0.5,
            ratio_mode: RatioMode::MinArea,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RulesError {
    #[error("malformed rules file: {0}")]
    Json(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class `{0}` appears twice in priority")]
    DuplicatePriority(ElementClass),
    #[error("class `{0}` missing from priority")]
    MissingPriority(ElementClass),
    #[error("relation parent_type `{0}` is not one of Form, LabeledControl")]
    UnknownParentType(String),
    #[error("relation `relation` must be non-empty")]
    EmptyRelation,
    #[error("duplicate_threshold {0} outside (0, 1]")]
    Threshold(f64),
    #[error("unknown ratio_mode `{0}` (expected \"min-area\" or \"iou\")")]
    RatioMode(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RulesFile {
    priority: Option<Vec<String>>,
    conflicts: Option<Vec<[String; 2]>>,
    relations: Option<Vec<RelationEntry>>,
    duplicate_threshold: Option<f64>,
    ratio_mode: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    pair: [String; 2],
    parent_type: String,
    relation: String,
}

fn class(name: &str) -> Result<ElementClass, RulesError> {
    ElementClass::from_name(name).ok_or_else(|| RulesError::UnknownClass(name.to_string()))
}

impl ResolutionRules {
    /// Loads a rules document. Absent keys keep their defaults; a present key
    /// replaces the corresponding default table entirely.
    pub fn from_json(text: &str) -> Result<Self, RulesError> {
        let file: RulesFile =
            serde_json::from_str(text).map_err(|e| RulesError::Json(e.to_string()))?;
        let mut rules = Self::default();
        if let Some(order) = file.priority {
            let order = order.iter().map(|n| class(n)).collect::<Result<Vec<_>, _>>()?;
            rules.priority = PriorityTable::from_order(&order)?;
        }
        if let Some(pairs) = file.conflicts {
            let mut table = ConflictTable::new();
            for [a, b] in &pairs {
                table.insert(class(a)?, class(b)?);
            }
            rules.conflicts = table;
        }
        if let Some(entries) = file.relations {
            let mut table = RelationTable::new();
            for entry in &entries {
                if entry.relation.trim().is_empty() {
                    return Err(RulesError::EmptyRelation);
                }
                table.insert(
                    class(&entry.pair[0])?,
                    class(&entry.pair[1])?,
                    &entry.parent_type,
                    &entry.relation,
                )?;
            }
            rules.relations = table;
        }
        if let Some(t) = file.duplicate_threshold {
            if !(t > 0.0 && t <= 1.0) {
                return Err(RulesError::Threshold(t));
            }
            rules.duplicate_threshold = t;
        }
        if let Some(mode) = file.ratio_mode {
            rules.ratio_mode = RatioMode::from_name(&mode).ok_or(RulesError::RatioMode(mode))?;
        }
        Ok(rules)
    }
}
