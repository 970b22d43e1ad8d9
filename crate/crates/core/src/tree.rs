//! Finite balls in the Bass-Serre tree, modelled by path words.

use std::fmt::Write as _;

use crate::error::Result;
use crate::graph::{GraphOfGroups, Index, VId};
use crate::words::{concat, normalize, path_part, render_word, Letter, Word};

pub const DEFAULT_BUDGET: usize = 50_000;

#[derive(Clone, Debug)]
pub struct BallNode {
    pub word: Word,
    pub depth: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TreeBall {
    pub base: VId,
    pub radius: usize,
    pub nodes: Vec<BallNode>,
    /// The node budget ran out before the ball was complete.
    pub truncated: bool,
}

impl TreeBall {
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.radius + 1];
        for n in &self.nodes {
            s[n.depth] += 1;
        }
        s
    }

    /// Number of tree neighbours present in the ball.
    pub fn degree(&self, i: usize) -> usize {
        self.nodes[i].children.len() + usize::from(self.nodes[i].parent.is_some())
    }

    /// Nodes strictly inside the ball.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(move |&i| self.nodes[i].depth < self.radius)
    }

    pub fn find(&self, w: &Word) -> Option<usize> {
        self.nodes.iter().position(|n| n.word == *w)
    }
}

/// Children of a path word: `w σ e` for `o(e) = t(w)` and `σ ∈ Σ_e`, except the parent.
fn children<'g>(g: &'g GraphOfGroups, w: &Word) -> impl Iterator<Item = Word> + 'g {
    let v = w.terminus(g);
    let back = w.letters.last().map(|l| l.edge.bar());
    let w = w.clone();
    g.out_edges(v).into_iter().flat_map(move |oe| {
        let w = w.clone();
        let grp = g.group(v);
        g.emb(oe)
            .reps()
            .filter(move |s| !(Some(oe) == back && grp.is_identity(s)))
            .map(move |s| {
                let mut c = w.clone();
                c.letters.push(Letter { elem: s, edge: oe });
                c.tail = g.group(g.terminus(oe)).identity();
                c
            })
    })
}

/// Breadth-first ball of path words around the base vertex, in canonical child order.
pub fn ball(g: &GraphOfGroups, base: VId, radius: usize, budget: usize) -> TreeBall {
    let mut nodes = vec![BallNode {
        word: Word::identity(g, base),
        depth: 0,
        parent: None,
        children: Vec::new(),
    }];
    let mut truncated = false;
    let mut i = 0;
    'outer: while i < nodes.len() {
        if nodes[i].depth < radius {
            let kids: Box<dyn Iterator<Item = Word>> = Box::new(children(g, &nodes[i].word));
            for c in kids {
                if nodes.len() >= budget {
                    truncated = true;
                    break 'outer;
                }
                let j = nodes.len();
                nodes.push(BallNode {
                    word: c,
                    depth: nodes[i].depth + 1,
                    parent: Some(i),
                    children: Vec::new(),
                });
                nodes[i].children.push(j);
            }
        }
        i += 1;
    }
    TreeBall {
        base,
        radius,
        nodes,
        truncated,
    }
}

/// Tree valence of a vertex of type `v`.
pub fn valence(g: &GraphOfGroups, v: VId) -> Index {
    g.valence(v)
}

/// `s · w = P(N(s w))`.
pub fn act_vertex(g: &GraphOfGroups, s: &Word, w: &Word) -> Result<Word> {
    Ok(path_part(g, &normalize(g, &concat(g, s, w)?)))
}

/// Tree distance between two path words with the same base.
pub fn distance(a: &Word, b: &Word) -> usize {
    let common = a
        .letters
        .iter()
        .zip(&b.letters)
        .take_while(|(x, y)| x == y)
        .count();
    a.len() + b.len() - 2 * common
}

/// `min d(w, s·w)` over the ball of the given radius, with a minimizing vertex.
pub fn translation_length(
    g: &GraphOfGroups,
    s: &Word,
    radius: usize,
    budget: usize,
) -> Result<(usize, Word)> {
    let b = ball(g, s.base, radius, budget);
    let mut best: Option<(usize, Word)> = None;
    for n in &b.nodes {
        let d = distance(&n.word, &act_vertex(g, s, &n.word)?);
        if best.as_ref().is_none_or(|(x, _)| d < *x) {
            best = Some((d, n.word.clone()));
        }
    }
    Ok(best.expect("a ball contains its centre"))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz export; node ids are canonical word literals.
pub fn export_dot(g: &GraphOfGroups, b: &TreeBall) -> String {
    let mut out = String::from("digraph tree {\n  node [shape=box, fontsize=10];\n");
    for n in &b.nodes {
        let id = dot_escape(&render_word(g, &n.word));
        let _ = writeln!(
            out,
            "  \"{id}\" [label=\"{id}\\n{}\"];",
            g.vertex_name(n.word.terminus(g))
        );
    }
    for n in &b.nodes {
        if let Some(p) = n.parent {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\";",
                dot_escape(&render_word(g, &b.nodes[p].word)),
                dot_escape(&render_word(g, &n.word))
            );
        }
    }
    out.push_str("}\n");
    out
}
