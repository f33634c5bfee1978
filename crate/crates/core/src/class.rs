//! The ten sketchable UI element classes and the integer class map.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::detection::{LineError, ParseError};

/// A UI component category recognised by the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementClass {
    Heading,
    Checkbox,
    Radio,
    SelectBox,
    Label,
    Link,
    Button,
    Image,
    Paragraph,
    TextBox,
}

impl ElementClass {
    pub const COUNT: usize = 10;

    pub const ALL: [ElementClass; Self::COUNT] = [
        ElementClass::Heading,
        ElementClass::Checkbox,
        ElementClass::Radio,
        ElementClass::SelectBox,
        ElementClass::Label,
        ElementClass::Link,
        ElementClass::Button,
        ElementClass::Image,
        ElementClass::Paragraph,
        ElementClass::TextBox,
    ];

    /// Lowercase name used in CSV files and reports.
    pub const fn name(self) -> &'static str {
        match self {
            ElementClass::Heading => "heading",
            ElementClass::Checkbox => "checkbox",
            ElementClass::Radio => "radio",
            ElementClass::SelectBox => "selectbox",
            ElementClass::Label => "label",
            ElementClass::Link => "link",
            ElementClass::Button => "button",
            ElementClass::Image => "image",
            ElementClass::Paragraph => "paragraph",
            ElementClass::TextBox => "textbox",
        }
    }

    /// Node type name used in the UI representation object.
    pub const fn type_name(self) -> &'static str {
        match self {
            ElementClass::Heading => "Heading",
            ElementClass::Checkbox => "Checkbox",
            ElementClass::Radio => "Radio",
            ElementClass::SelectBox => "SelectBox",
            ElementClass::Label => "Label",
            ElementClass::Link => "Link",
            ElementClass::Button => "Button",
            ElementClass::Image => "Image",
            ElementClass::Paragraph => "Paragraph",
            ElementClass::TextBox => "TextBox",
        }
    }

    /// Position in [`ElementClass::ALL`].
    pub const fn index(self) -> usize {
        self as usize
    }

    /// Case-insensitive lookup of the canonical name.
    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(name.trim()))
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown element class `{0}`")]
pub struct UnknownClass(pub String);

impl FromStr for ElementClass {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_name(s).ok_or_else(|| UnknownClass(s.to_string()))
    }
}

/// Bijective integer id <-> class association read from the class-map CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassMap {
    by_id: BTreeMap<u32, ElementClass>,
    by_class: BTreeMap<ElementClass, u32>,
}

impl ClassMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a pair, rejecting any id or class already present.
    pub fn insert(&mut self, id: u32, class: ElementClass) -> Result<(), LineError> {
        if self.by_id.contains_key(&id) {
            return Err(LineError::DuplicateId(id));
        }
        if self.by_class.contains_key(&class) {
            return Err(LineError::DuplicateClass(class));
        }
        self.by_id.insert(id, class);
        self.by_class.insert(class, id);
        Ok(())
    }

    pub fn class(&self, id: u32) -> Option<ElementClass> {
        self.by_id.get(&id).copied()
    }

    pub fn id(&self, class: ElementClass) -> Option<u32> {
        self.by_class.get(&class).copied()
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, ElementClass)> + '_ {
        self.by_id.iter().map(|(id, c)| (*id, *c))
    }

    /// Map with ids `0..10` in [`ElementClass::ALL`] order.
    pub fn canonical() -> Self {
        let mut map = Self::new();
        for (id, class) in ElementClass::ALL.into_iter().enumerate() {
            map.insert(id as u32, class).expect("canonical classes are distinct");
        }
        map
    }
}

/// Parses `<id>,<class-name>` lines. Blank lines and `#` comments are skipped.
pub fn parse_class_map(text: &str) -> Result<ClassMap, ParseError> {
    let mut map = ClassMap::new();
    for (line_no, line) in crate::detection::records(text) {
        let at = |kind| ParseError::at(line_no, kind);
        let fields: alloc::vec::Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(at(LineError::FieldCount {
                expected: "2",
                found: fields.len(),
            }));
        }
        let id: u32 = fields[0]
            .parse()
            .map_err(|_| at(LineError::MalformedInteger(fields[0].to_string())))?;
        let class = ElementClass::from_name(fields[1])
            .ok_or_else(|| at(LineError::UnknownClass(fields[1].to_string())))?;
        map.insert(id, class).map_err(at)?;
    }
    if map.is_empty() {
        return Err(ParseError::EmptyClassMap);
    }
    Ok(map)
}
