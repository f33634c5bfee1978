mod common;

use proptest::prelude::*;
use sketch2ui_core::{parse_ui, serialize_ui, BoundingBox, ElementClass, NodeType, UiNode};

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![
        (0u32..4000).prop_map(f64::from),
        (0.0f64..5000.0),
        (1u32..1000, -12i32..20).prop_map(|(m, e)| f64::from(m) * 10f64.powi(e)),
    ]
}

fn bbox() -> impl Strategy<Value = BoundingBox> {
    (coord(), coord(), coord(), coord())
        .prop_filter("non-degenerate", |(a, b, c, d)| a != c && b != d)
        .prop_map(|(a, b, c, d)| BoundingBox::new(a.min(c), b.min(d), a.max(c), b.max(d)).unwrap())
}

fn props() -> impl Strategy<Value = std::collections::BTreeMap<String, String>> {
    prop::collection::btree_map("[a-z_]{1,8}", "(.|\n){0,12}", 0..4)
}

fn leaf() -> impl Strategy<Value = UiNode> {
    (common::class(), bbox(), props()).prop_map(|(c, b, p)| {
        let mut n = UiNode::new(NodeType::Element(c), "");
        n.bbox = Some(b);
        n.props = p;
        n
    })
}

fn container_type() -> impl Strategy<Value = NodeType> {
    prop_oneof![Just(NodeType::Row), Just(NodeType::Form), Just(NodeType::LabeledControl)]
}

fn subtree() -> impl Strategy<Value = UiNode> {
    leaf().prop_recursive(3, 40, 5, |inner| {
        (container_type(), props(), prop::option::of(bbox()), prop::collection::vec(inner, 1..5)).prop_map(
            |(t, p, b, children)| {
                let mut n = UiNode::new(t, "");
                n.props = p;
                n.bbox = b;
                n.children = children;
                n
            },
        )
    })
}

fn number_ids(node: &mut UiNode, next: &mut usize) {
    node.id = format!("n-{next}");
    *next += 1;
    for c in &mut node.children {
        number_ids(c, next);
    }
}

fn tree() -> impl Strategy<Value = UiNode> {
    (props(), prop::collection::vec(subtree(), 0..6))
        .prop_map(|(p, children)| {
            let mut root = UiNode::new(NodeType::Page, "");
            root.props = p;
            root.children = children;
            number_ids(&mut root, &mut 0);
            root
        })
        .prop_filter("at most 50 nodes", |t| t.node_count() <= 50)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trips(t in tree()) {
        let text = serialize_ui(&t);
        let back = parse_ui(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize_ui(&back), text);
    }

    #[test]
    fn serialization_is_byte_stable(t in tree()) {
        prop_assert_eq!(serialize_ui(&t), serialize_ui(&t.clone()));
    }

    #[test]
    fn output_is_plain_json(t in tree()) {
        let text = serialize_ui(&t);
        prop_assert!(text.ends_with("}\n"), "missing trailing newline");
        prop_assert!(!text.contains('\r') && !text.contains('\t'));
        prop_assert!(serde_json::from_str::<serde_json::Value>(&text).is_ok());
    }
}

#[test]
fn key_order_is_fixed() {
    let mut leaf = UiNode::new(NodeType::Element(ElementClass::Button), "el-1");
    leaf.bbox = Some(BoundingBox::new(1.0, 2.5, 3.0, 4.0).unwrap());
    leaf.props.insert("text".into(), "Go".into());
    let mut root = UiNode::new(NodeType::Page, "el-0");
    root.children.push(leaf);
    let text = serialize_ui(&root);
    let pos = |k: &str| text.rfind(&format!("\"{k}\"")).unwrap();
    assert!(pos("type") < pos("id") && pos("id") < pos("props") && pos("props") < pos("bbox"));
    assert!(pos("bbox") < pos("children"));
    assert!(text.contains("\"bbox\": [1, 2.5, 3, 4],"));
}
