//! Code emitters that render a UI tree for a concrete platform.
//!
//! Output is flow layout in tree order. Every document ends with a newline and
//! uses LF line endings; identical input always yields identical bytes.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::class::ElementClass;
use crate::ir::{NodeType, UiNode};

pub const DEFAULT_TITLE: &str = "Generated UI";
pub const DEFAULT_RELOAD_ENDPOINT: &str = "/reload";

/// Inline placeholder shown for image elements.
pub const IMAGE_PLACEHOLDER: &str = "data:image/svg+xml,%3Csvg xmlns=%22http://www.w3.org/2000/svg%22 width=%22120%22 height=%2280%22%3E%3Crect width=%22100%25%22 height=%22100%25%22 fill=%22%23cccccc%22/%3E%3C/svg%3E";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Html,
    AndroidXml,
}

impl Target {
    pub const ALL: [Target; 2] = [Target::Html, Target::AndroidXml];

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "html" => Some(Target::Html),
            "android" => Some(Target::AndroidXml),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::Html => "html",
            Target::AndroidXml => "android",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitOptions {
    pub title: String,
    pub live_reload: bool,
    reload_endpoint: String,
}

impl EmitOptions {
    pub fn with_live_reload(mut self, on: bool) -> Self {
        self.live_reload = on;
        self
    }

    pub fn with_reload_endpoint(mut self, endpoint: &str) -> Result<Self, CodegenError> {
        let allowed = |c: char| c.is_ascii_alphanumeric() || matches!(c, '/' | '-' | '_' | '.');
        if !endpoint.starts_with('/') || !endpoint.chars().all(allowed) {
            return Err(CodegenError::ReloadEndpoint(endpoint.to_string()));
        }
        self.reload_endpoint = endpoint.to_string();
        Ok(self)
    }

    pub fn reload_endpoint(&self) -> &str {
        &self.reload_endpoint
    }
}

impl Default for EmitOptions {
    fn default() -> Self {
        Self {
            title: DEFAULT_TITLE.to_string(),
            live_reload: false,
            reload_endpoint: DEFAULT_RELOAD_ENDPOINT.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedDocument {
    pub target: Target,
    pub content: String,
    pub suggested_filename: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodegenError {
    #[error("root node must be a Page, found {0}")]
    RootNotPage(String),
    #[error("Page node nested below the root")]
    NestedPage,
    #[error("reload endpoint `{0}` must begin with `/` and use only [A-Za-z0-9/._-]")]
    ReloadEndpoint(String),
}

/// A backend rendering a UI tree for one target.
pub trait Emitter: Sync {
    fn target(&self) -> Target;
    fn suggested_filename(&self) -> &'static str;
    fn render(&self, root: &UiNode, opts: &EmitOptions) -> Result<String, CodegenError>;
}

pub struct HtmlEmitter;
pub struct AndroidEmitter;

static EMITTERS: [&dyn Emitter; 2] = [&HtmlEmitter, &AndroidEmitter];

/// The registered emitter for `target`.
pub fn emitter(target: Target) -> &'static dyn Emitter {
    *EMITTERS
        .iter()
        .find(|e| e.target() == target)
        .expect("every target has an emitter")
}

pub fn emit(root: &UiNode, target: Target, opts: &EmitOptions) -> Result<GeneratedDocument, CodegenError> {
    let emitter = emitter(target);
    Ok(GeneratedDocument {
        target,
        content: emitter.render(root, opts)?,
        suggested_filename: emitter.suggested_filename().to_string(),
    })
}

pub fn generate_html(root: &UiNode, opts: &EmitOptions) -> Result<GeneratedDocument, CodegenError> {
    emit(root, Target::Html, opts)
}

pub fn generate_android_xml(root: &UiNode, opts: &EmitOptions) -> Result<GeneratedDocument, CodegenError> {
    emit(root, Target::AndroidXml, opts)
}

fn check_root(root: &UiNode) -> Result<(), CodegenError> {
    if root.node_type != NodeType::Page {
        return Err(CodegenError::RootNotPage(root.node_type.name().to_string()));
    }
    let mut nested = false;
    for child in &root.children {
        child.walk(&mut |n| nested |= n.node_type == NodeType::Page);
    }
    if nested {
        return Err(CodegenError::NestedPage);
    }
    Ok(())
}

/// Escapes text for use in markup content or double-quoted attribute values.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn text_or<'a>(node: &'a UiNode, key: &str, fallback: &'a str) -> &'a str {
    node.prop(key).unwrap_or(fallback)
}

fn is_checked(node: &UiNode) -> bool {
    node.prop("checked") == Some("true")
}

fn options(node: &UiNode) -> Vec<&str> {
    node.prop("options")
        .unwrap_or("")
        .split(';')
        .map(str::trim)
        .filter(|o| !o.is_empty())
        .collect()
}

/// Ids of the text boxes a form's buttons wait on, space separated.
fn validation_targets(form: &UiNode) -> Option<String> {
    if form.node_type != NodeType::Form || form.prop("relation") != Some("validation") {
        return None;
    }
    let mut ids = Vec::new();
    form.walk(&mut |n| {
        if n.node_type == NodeType::Element(ElementClass::TextBox) {
            ids.push(n.id.as_str());
        }
    });
    (!ids.is_empty()).then(|| ids.join(" "))
}

#[derive(Clone, Default)]
struct Scope {
    form_id: Option<String>,
    validates: Option<String>,
}

impl Scope {
    fn enter(&self, node: &UiNode) -> Scope {
        if node.node_type != NodeType::Form {
            return self.clone();
        }
        Scope {
            form_id: Some(node.id.clone()),
            validates: validation_targets(node),
        }
    }
}

fn reload_script(endpoint: &str) -> String {
    format!(
        "<script>\n\
         (function () {{\n\
         \x20 var scheme = location.protocol === \"https:\" ? \"wss://\" : \"ws://\";\n\
         \x20 var socket = new WebSocket(scheme + location.host + \"{}\");\n\
         \x20 socket.onmessage = function () {{ location.reload(); }};\n\
         }})();\n\
         </script>\n",
        endpoint
    )
}

impl Emitter for HtmlEmitter {
    fn target(&self) -> Target {
        Target::Html
    }

    fn suggested_filename(&self) -> &'static str {
        "index.html"
    }

    fn render(&self, root: &UiNode, opts: &EmitOptions) -> Result<String, CodegenError> {
        check_root(root)?;
        let mut out = String::new();
        out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\" />\n");
        let _ = writeln!(out, "<title>{}</title>", escape(&opts.title));
        out.push_str("</head>\n");
        let _ = writeln!(out, "<body id=\"{}\">", escape(&root.id));
        for child in &root.children {
            html_node(&mut out, child, 1, &Scope::default());
        }
        if opts.live_reload {
            out.push_str(&reload_script(opts.reload_endpoint()));
        }
        out.push_str("</body>\n</html>\n");
        Ok(out)
    }
}

fn html_node(out: &mut String, node: &UiNode, depth: usize, scope: &Scope) {
    indent(out, depth);
    let id = escape(&node.id);
    let class = match node.node_type {
        NodeType::Element(class) => class,
        NodeType::Page | NodeType::Row | NodeType::Form | NodeType::LabeledControl => {
            let (open, close) = match node.node_type {
                NodeType::Row => (format!("<div id=\"{id}\" class=\"row\">"), "</div>"),
                NodeType::Form => (
                    format!("<form id=\"{id}\" data-relation=\"{}\">", escape(text_or(node, "relation", ""))),
                    "</form>",
                ),
                NodeType::LabeledControl => (format!("<label id=\"{id}\" class=\"labeled-control\">"), "</label>"),
                _ => (format!("<div id=\"{id}\" class=\"page\">"), "</div>"),
            };
            out.push_str(&open);
            out.push('\n');
            let inner = scope.enter(node);
            for child in &node.children {
                html_node(out, child, depth + 1, &inner);
            }
            indent(out, depth);
            out.push_str(close);
            out.push('\n');
            return;
        }
    };
    let text = |key, fallback| escape(text_or(node, key, fallback));
    let checked = if is_checked(node) { " checked=\"checked\"" } else { "" };
    let _ = match class {
        ElementClass::Heading => write!(out, "<h1 id=\"{id}\">{}</h1>", text("text", "Heading")),
        ElementClass::Paragraph => write!(out, "<p id=\"{id}\">{}</p>", text("text", "")),
        ElementClass::Label => write!(out, "<label id=\"{id}\">{}</label>", text("text", "Label")),
        ElementClass::Link => write!(
            out,
            "<a id=\"{id}\" href=\"{}\">{}</a>",
            text("href", "#"),
            text("text", "Link")
        ),
        ElementClass::Image => write!(
            out,
            "<img id=\"{id}\" src=\"{IMAGE_PLACEHOLDER}\" alt=\"{}\" />",
            text("alt", "Image")
        ),
        ElementClass::Button => {
            let marker = match &scope.validates {
                Some(targets) => format!(" data-validates=\"{}\" disabled=\"disabled\"", escape(targets)),
                None => String::new(),
            };
            write!(out, "<button id=\"{id}\" type=\"button\"{marker}>{}</button>", text("text", "Button"))
        }
        ElementClass::TextBox => {
            let required = if scope.validates.is_some() { " required=\"required\"" } else { "" };
            write!(
                out,
                "<input id=\"{id}\" type=\"text\" placeholder=\"{}\"{required} />",
                text("placeholder", "Text")
            )
        }
        ElementClass::Checkbox => write!(out, "<input id=\"{id}\" type=\"checkbox\"{checked} />"),
        ElementClass::Radio => {
            let name = match &scope.form_id {
                Some(form) => format!("{form}-radio"),
                None => node.id.clone(),
            };
            write!(
                out,
                "<input id=\"{id}\" type=\"radio\" name=\"{}\"{checked} />",
                escape(&name)
            )
        }
        ElementClass::SelectBox => {
            out.push_str(&format!("<select id=\"{id}\">\n"));
            for option in options(node) {
                indent(out, depth + 1);
                let _ = writeln!(out, "<option>{}</option>", escape(option));
            }
            indent(out, depth);
            write!(out, "</select>")
        }
    };
    out.push('\n');
}

/// Android ids allow `[A-Za-z0-9_]`; other characters become `_`.
pub fn android_id(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

impl Emitter for AndroidEmitter {
    fn target(&self) -> Target {
        Target::AndroidXml
    }

    fn suggested_filename(&self) -> &'static str {
        "layout.xml"
    }

    fn render(&self, root: &UiNode, _opts: &EmitOptions) -> Result<String, CodegenError> {
        check_root(root)?;
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n");
        out.push_str("<LinearLayout xmlns:android=\"http://schemas.android.com/apk/res/android\"\n");
        let _ = writeln!(out, "    android:id=\"@+id/{}\"", android_id(&root.id));
        out.push_str("    android:layout_width=\"match_parent\"\n");
        out.push_str("    android:layout_height=\"match_parent\"\n");
        if root.children.is_empty() {
            out.push_str("    android:orientation=\"vertical\" />\n");
            return Ok(out);
        }
        out.push_str("    android:orientation=\"vertical\">\n");
        for child in &root.children {
            xml_node(&mut out, child, 1, &Scope::default());
        }
        out.push_str("</LinearLayout>\n");
        Ok(out)
    }
}

fn contains_radio(node: &UiNode) -> bool {
    let mut found = false;
    node.walk(&mut |n| found |= n.node_type == NodeType::Element(ElementClass::Radio));
    found
}

struct XmlElement<'a> {
    out: &'a mut String,
    depth: usize,
}

impl<'a> XmlElement<'a> {
    fn open(out: &'a mut String, depth: usize, tag: &str, id: &str) -> Self {
        indent(out, depth);
        let _ = write!(out, "<{tag}");
        let mut el = XmlElement { out, depth };
        el.attr("android:id", &format!("@+id/{}", android_id(id)));
        el
    }

    fn attr(&mut self, name: &str, value: &str) -> &mut Self {
        self.out.push('\n');
        indent(self.out, self.depth + 2);
        let _ = write!(self.out, "{name}=\"{}\"", escape(value));
        self
    }

    fn wrap(&mut self) -> &mut Self {
        self.attr("android:layout_width", "wrap_content")
            .attr("android:layout_height", "wrap_content")
    }

    fn close_empty(self) {
        self.out.push_str(" />\n");
    }

    fn close_start(self) {
        self.out.push_str(">\n");
    }
}

fn xml_node(out: &mut String, node: &UiNode, depth: usize, scope: &Scope) {
    let text = |key, fallback| text_or(node, key, fallback).to_string();
    let class = match node.node_type {
        NodeType::Element(class) => class,
        container => {
            let (tag, orientation) = match container {
                NodeType::Row => ("LinearLayout", "horizontal"),
                NodeType::Form if contains_radio(node) => ("RadioGroup", "horizontal"),
                NodeType::LabeledControl | NodeType::Form => ("LinearLayout", "horizontal"),
                _ => ("LinearLayout", "vertical"),
            };
            let mut el = XmlElement::open(out, depth, tag, &node.id);
            el.attr(
                "android:layout_width",
                if container == NodeType::Row { "match_parent" } else { "wrap_content" },
            )
            .attr("android:layout_height", "wrap_content")
            .attr("android:orientation", orientation);
            if let Some(relation) = node.prop("relation") {
                el.attr("android:tag", &format!("relation:{relation}"));
            }
            el.close_start();
            let inner = scope.enter(node);
            for child in &node.children {
                xml_node(out, child, depth + 1, &inner);
            }
            indent(out, depth);
            let _ = writeln!(out, "</{tag}>");
            return;
        }
    };
    let tag = match class {
        ElementClass::Heading | ElementClass::Label | ElementClass::Paragraph | ElementClass::Link => "TextView",
        ElementClass::TextBox => "EditText",
        ElementClass::Checkbox => "CheckBox",
        ElementClass::Radio => "RadioButton",
        ElementClass::Button => "Button",
        ElementClass::Image => "ImageView",
        ElementClass::SelectBox => "Spinner",
    };
    let mut el = XmlElement::open(out, depth, tag, &node.id);
    el.wrap();
    match class {
        ElementClass::Heading => {
            el.attr("android:text", &text("text", "Heading"))
                .attr("android:textAppearance", "?android:attr/textAppearanceLarge");
        }
        ElementClass::Label => {
            el.attr("android:text", &text("text", "Label"));
        }
        ElementClass::Paragraph => {
            el.attr("android:text", &text("text", ""));
        }
        ElementClass::Link => {
            el.attr("android:text", &text("text", "Link"))
                .attr("android:autoLink", "web")
                .attr("android:linksClickable", "true")
                .attr("android:tag", &format!("href:{}", text("href", "#")));
        }
        ElementClass::TextBox => {
            el.attr("android:hint", &text("placeholder", "Text"))
                .attr("android:inputType", "text");
        }
        ElementClass::Checkbox | ElementClass::Radio => {
            el.attr("android:checked", if is_checked(node) { "true" } else { "false" });
        }
        ElementClass::Button => {
            el.attr("android:text", &text("text", "Button"));
            if let Some(targets) = &scope.validates {
                let ids: Vec<String> = targets.split(' ').map(android_id).collect();
                el.attr("android:enabled", "false")
                    .attr("android:tag", &format!("validates:{}", ids.join(" ")));
            }
        }
        ElementClass::Image => {
            el.attr("android:contentDescription", &text("alt", "Image"))
                .attr("android:background", "#CCCCCC")
                .attr("android:minWidth", "120dp")
                .attr("android:minHeight", "80dp");
        }
        ElementClass::SelectBox => {
            el.attr("android:tag", &format!("options:{}", options(node).join(";")));
        }
    }
    el.close_empty();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundingBox;
    use alloc::vec;

    fn leaf(class: ElementClass, id: &str) -> UiNode {
        let mut n = UiNode::new(NodeType::Element(class), id);
        n.props = crate::layout::default_props(class);
        n.bbox = Some(BoundingBox::new(0.0, 0.0, 10.0, 10.0).unwrap());
        n
    }

    fn page(rows: Vec<Vec<UiNode>>) -> UiNode {
        let mut p = UiNode::new(NodeType::Page, "el-0");
        for (next, items) in (100..).zip(rows) {
            let mut row = UiNode::new(NodeType::Row, format!("row-{next}"));
            row.children = items;
            p.children.push(row);
        }
        p
    }

    #[test]
    fn single_button_html() {
        let doc = generate_html(&page(vec![vec![leaf(ElementClass::Button, "el-2")]]), &EmitOptions::default()).unwrap();
        assert_eq!(doc.target, Target::Html);
        assert_eq!(doc.suggested_filename, "index.html");
        assert_eq!(doc.content.matches("<button").count(), 1);
        assert!(doc.content.contains("<button id=\"el-2\" type=\"button\">Button</button>"));
        assert!(doc.content.ends_with("</html>\n"));
    }

    #[test]
    fn empty_page_and_reload_toggle() {
        let root = UiNode::new(NodeType::Page, "el-0");
        let plain = generate_html(&root, &EmitOptions::default()).unwrap().content;
        assert!(plain.contains("<body id=\"el-0\">\n</body>"));
        assert!(!plain.contains("WebSocket"));
        let opts = EmitOptions {
            live_reload: true,
            ..EmitOptions::default()
        };
        let live = generate_html(&root, &opts).unwrap().content;
        assert_eq!(live.matches("new WebSocket(").count(), 1);
        assert!(live.contains("location.host + \"/reload\""));
    }

    #[test]
    fn form_marks_button_with_validation_target() {
        let mut form = UiNode::new(NodeType::Form, "el-2");
        form.props.insert("relation".into(), "validation".into());
        form.children = vec![leaf(ElementClass::TextBox, "el-3"), leaf(ElementClass::Button, "el-4")];
        let html = generate_html(&page(vec![vec![form]]), &EmitOptions::default()).unwrap().content;
        assert_eq!(html.matches("<form").count(), 1);
        assert!(html.contains("<input id=\"el-3\" type=\"text\" placeholder=\"Text\" required=\"required\" />"));
        assert!(html.contains("<button id=\"el-4\" type=\"button\" data-validates=\"el-3\" disabled=\"disabled\">Button</button>"));
    }

    #[test]
    fn radios_in_a_form_share_a_name() {
        let mut form = UiNode::new(NodeType::Form, "el-5");
        form.props.insert("relation".into(), "choice".into());
        form.children = vec![leaf(ElementClass::Radio, "el-6"), leaf(ElementClass::Radio, "el-7")];
        let root = page(vec![vec![form], vec![leaf(ElementClass::Radio, "el-9")]]);
        let html = generate_html(&root, &EmitOptions::default()).unwrap().content;
        assert_eq!(html.matches("name=\"el-5-radio\"").count(), 2);
        assert!(html.contains("name=\"el-9\""));
        let xml = generate_android_xml(&root, &EmitOptions::default()).unwrap().content;
        assert_eq!(xml.matches("<RadioGroup").count(), 1);
        assert_eq!(xml.matches("<RadioButton").count(), 3);
    }

    #[test]
    fn select_options_and_escaping() {
        let mut select = leaf(ElementClass::SelectBox, "el-2");
        select.props.insert("options".into(), "A & B;<C>".into());
        let html = generate_html(&page(vec![vec![select]]), &EmitOptions::default()).unwrap().content;
        assert!(html.contains("<option>A &amp; B</option>"));
        assert!(html.contains("<option>&lt;C&gt;</option>"));
    }

    #[test]
    fn android_single_textbox() {
        let doc = generate_android_xml(&page(vec![vec![leaf(ElementClass::TextBox, "el-2")]]), &EmitOptions::default())
            .unwrap();
        assert_eq!(doc.suggested_filename, "layout.xml");
        assert_eq!(doc.content.matches("<EditText").count(), 1);
        assert!(doc.content.contains("android:id=\"@+id/el_2\""));
    }

    #[test]
    fn android_rows_are_horizontal_children_of_root() {
        let root = page(vec![
            vec![leaf(ElementClass::Heading, "el-2")],
            vec![leaf(ElementClass::Image, "el-4")],
        ]);
        let xml = generate_android_xml(&root, &EmitOptions::default()).unwrap().content;
        assert_eq!(xml.matches("android:orientation=\"horizontal\"").count(), 2);
        assert!(xml.find("@+id/row_100").unwrap() < xml.find("@+id/row_101").unwrap());
    }

    #[test]
    fn root_must_be_page() {
        let row = UiNode::new(NodeType::Row, "el-1");
        for target in Target::ALL {
            assert_eq!(
                emit(&row, target, &EmitOptions::default()),
                Err(CodegenError::RootNotPage("Row".into()))
            );
        }
    }

    #[test]
    fn reload_endpoint_must_be_absolute() {
        assert!(EmitOptions::default().with_reload_endpoint("reload").is_err());
        assert!(EmitOptions::default().with_reload_endpoint("/a\"<b").is_err());
        assert_eq!(
            EmitOptions::default().with_reload_endpoint("/live").unwrap().reload_endpoint(),
            "/live"
        );
    }

    #[test]
    fn dispatch_matches_direct_calls() {
        let root = page(vec![vec![leaf(ElementClass::Link, "el-2"), leaf(ElementClass::Checkbox, "el-3")]]);
        let opts = EmitOptions::default();
        assert_eq!(emit(&root, Target::Html, &opts), generate_html(&root, &opts));
        assert_eq!(emit(&root, Target::AndroidXml, &opts), generate_android_xml(&root, &opts));
        assert_eq!(emit(&root, Target::Html, &opts), emit(&root, Target::Html, &opts));
    }
}
