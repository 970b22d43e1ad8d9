mod common;

use bass_serre::boundary::{
    act_exact, act_truncated, classify_fixed, inverse, parse_point, render_point, BoundaryPoint,
    FixedStatus,
};
use bass_serre::graph::GraphOfGroups;
use bass_serre::words::{Letter, Word};
use common::{bs23, closed_walk};
use proptest::prelude::*;

/// `prefix | period` built from transversal choices; `None` when the pieces do not join.
fn point(g: &GraphOfGroups, pre: &[(bool, u8)], per: &[(bool, u8)]) -> Option<BoundaryPoint> {
    let build = |choices: &[(bool, u8)]| {
        let letters = choices
            .iter()
            .map(|&(fwd, k)| {
                let e = if fwd { bass_serre::graph::OEdge::fwd(0) } else { bass_serre::graph::OEdge::fwd(0).bar() };
                let reps: Vec<_> = g.emb(e).reps().collect();
                Letter { elem: reps[k as usize % reps.len()].clone(), edge: e }
            })
            .collect();
        Word { base: 0, letters, tail: g.group(0).identity() }
    };
    BoundaryPoint::new(g, build(pre), build(per)).ok()
}

fn choices(lo: usize, hi: usize) -> impl Strategy<Value = Vec<(bool, u8)>> {
    prop::collection::vec((any::<bool>(), 0u8..3), lo..hi)
}

fn steps() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..2, -6i64..=6), 0..5)
}

proptest! {
    #[test]
    fn inverse_undoes_action(pre in choices(0, 4), per in choices(1, 4), s in steps(), t in -6i64..=6) {
        let g = bs23();
        let Some(xi) = point(&g, &pre, &per) else { return Ok(()) };
        let s = closed_walk(&g, 0, &s, t);
        let out = act_exact(&g, &s, &xi, 2_000).unwrap();
        if let Some(y) = out.exact {
            let back = act_truncated(&g, &inverse(&g, &s), &y, 10).unwrap();
            prop_assert_eq!(&back[..10], &xi.expand(10)[..]);
        }
    }

    #[test]
    fn exact_image_agrees_with_truncation(pre in choices(0, 4), per in choices(1, 4), s in steps()) {
        let g = bs23();
        let Some(xi) = point(&g, &pre, &per) else { return Ok(()) };
        let s = closed_walk(&g, 0, &s, 1);
        let trunc = act_truncated(&g, &s, &xi, 12).unwrap();
        let out = act_exact(&g, &s, &xi, 2_000).unwrap();
        let k = out.letters.len().min(12);
        prop_assert_eq!(&out.letters[..k], &trunc[..k]);
        if let Some(y) = out.exact {
            prop_assert_eq!(&y.expand(12)[..], &trunc[..12]);
        }
    }

    #[test]
    fn identity_fixes_every_point(pre in choices(0, 4), per in choices(1, 4)) {
        let g = bs23();
        let Some(xi) = point(&g, &pre, &per) else { return Ok(()) };
        let st = classify_fixed(&g, &Word::identity(&g, 0), &xi, 12, 100).unwrap();
        let fixed = matches!(st, FixedStatus::Fixed { .. });
        prop_assert!(fixed, "{:?}", st);
    }

    #[test]
    fn point_literals_round_trip(pre in choices(0, 4), per in choices(1, 4)) {
        let g = bs23();
        let Some(xi) = point(&g, &pre, &per) else { return Ok(()) };
        prop_assert_eq!(parse_point(&g, &render_point(&g, &xi)).unwrap(), xi);
    }
}

#[test]
fn period_is_made_primitive() {
    let g = bs23();
    let a = parse_point(&g, "v:(0) | v:(1) . e . v:(1) . e").unwrap();
    let b = parse_point(&g, "v:(0) | v:(1) . e").unwrap();
    assert_eq!(a, b);
    assert_eq!(a.period().len(), 1);
}
