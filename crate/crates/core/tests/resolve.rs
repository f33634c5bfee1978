mod common;

use common::{scaled, scene};
use proptest::prelude::*;
use sketch2ui_core::{classify_overlap, resolve_all, DetectionSet, OverlapKind, ResolutionRules};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn no_duplicate_pair_survives(set in scene(15)) {
        let rules = ResolutionRules::default();
        let out = resolve_all(&set, &rules);
        for (i, a) in out.elements.iter().enumerate() {
            for b in &out.elements[i + 1..] {
                prop_assert_ne!(classify_overlap(a, b, &rules), OverlapKind::Duplicate);
            }
        }
    }

    #[test]
    fn conserves_and_preserves_order(set in scene(15)) {
        let out = resolve_all(&set, &ResolutionRules::default());
        prop_assert_eq!(out.elements.len() + out.removed.len(), set.len());
        let removed: Vec<usize> = out.removed.iter().map(|r| r.input_index).collect();
        let survivors: Vec<_> = set
            .elements
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        prop_assert_eq!(&survivors, &out.elements);
        for r in &out.removed {
            prop_assert!(r.kept_index < set.len() && r.kept_index != r.input_index);
        }
    }

    #[test]
    fn idempotent(set in scene(15)) {
        let rules = ResolutionRules::default();
        let once = resolve_all(&set, &rules);
        let again = resolve_all(&DetectionSet::new(set.source_file.clone(), once.elements.clone()), &rules);
        prop_assert!(again.removed.is_empty());
        prop_assert_eq!(&again.elements, &once.elements);
        prop_assert_eq!(&again.groups, &once.groups);
    }

    #[test]
    fn deterministic(set in scene(15)) {
        let rules = ResolutionRules::default();
        prop_assert_eq!(resolve_all(&set, &rules), resolve_all(&set, &rules));
    }

    #[test]
    fn invariant_under_confidence_scaling(set in scene(15)) {
        let rules = ResolutionRules::default();
        let base = resolve_all(&set, &rules);
        let kept: Vec<usize> = base.removed.iter().map(|r| r.input_index).collect();
        for c in [0.5, 2.0] {
            let out = resolve_all(&scaled(&set, c), &rules);
            let removed: Vec<usize> = out.removed.iter().map(|r| r.input_index).collect();
            prop_assert_eq!(&removed, &kept);
            prop_assert_eq!(&out.groups, &base.groups);
        }
    }

    #[test]
    fn groups_are_disjoint_and_in_range(set in scene(15)) {
        let out = resolve_all(&set, &ResolutionRules::default());
        let mut seen = vec![false; out.elements.len()];
        for g in &out.groups {
            prop_assert!(g.members.len() >= 2);
            prop_assert!(g.members.windows(2).all(|w| w[0] < w[1]));
            for &m in &g.members {
                prop_assert!(!seen[m]);
                seen[m] = true;
            }
        }
    }
}
