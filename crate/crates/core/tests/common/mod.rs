//! Word builders shared by the property suites.
#![allow(dead_code)]

use bass_serre::exactmath::int;
use bass_serre::families::outbs_graph;
use bass_serre::graph::{gbs_loop, Builder, GraphOfGroups, VId};
use bass_serre::groups::{Elem, GroupDesc};
use bass_serre::words::{Letter, Word};

pub fn bs23() -> GraphOfGroups {
    gbs_loop(3, 2).unwrap()
}

/// Two `Z` vertices, two parallel edges and a loop.
pub fn gbs_pair() -> GraphOfGroups {
    Builder::new()
        .vertex("a", GroupDesc::FreeAbelian(1))
        .vertex("b", GroupDesc::FreeAbelian(1))
        .label_edge("e", "a", "b", 2, 3)
        .label_edge("f", "a", "b", 5, -1)
        .label_edge("l", "b", "b", 3, -2)
        .build()
        .unwrap()
}

pub fn outbs24() -> GraphOfGroups {
    outbs_graph(2, 2, 2).unwrap()
}

pub fn graphs() -> Vec<GraphOfGroups> {
    vec![bs23(), gbs_pair(), outbs24()]
}

/// Some element of `G_v` picked by `k`.
pub fn elem(g: &GraphOfGroups, v: VId, k: i64) -> Elem {
    let grp = g.group(v);
    match grp {
        GroupDesc::FreeAbelian(n) => Elem::Vector((0..*n).map(|i| int(if i == 0 { k } else { k / 3 })).collect()),
        _ => {
            let all = grp.elements().expect("finite group");
            all[k.rem_euclid(all.len() as i64) as usize].clone()
        }
    }
}

/// A walk from `base` picking out-edges by index; not reduced or normalized.
pub fn walk(g: &GraphOfGroups, base: VId, steps: &[(usize, i64)], tail: i64) -> Word {
    let mut v = base;
    let mut letters = Vec::new();
    for &(i, k) in steps {
        let outs = g.out_edges(v);
        let edge = outs[i % outs.len()];
        letters.push(Letter { elem: elem(g, v, k), edge });
        v = g.terminus(edge);
    }
    Word {
        base,
        letters,
        tail: elem(g, v, tail),
    }
}

/// A closed walk at `base`: the walk followed by the way home in a spanning tree.
pub fn closed_walk(g: &GraphOfGroups, base: VId, steps: &[(usize, i64)], tail: i64) -> Word {
    let mut w = walk(g, base, steps, 0);
    let mut v = w.terminus(g);
    for oe in g.tree_path(v, base) {
        w.letters.push(Letter { elem: elem(g, v, tail), edge: oe });
        v = g.terminus(oe);
    }
    w.tail = elem(g, v, tail);
    w
}
