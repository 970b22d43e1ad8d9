//! Words `g_1 e_1 g_2 e_2 ... g_n e_n g` in the path group of a graph of groups.
//!
//! Reduction removes every subword `e α_ē(h) ē`, replacing it by `α_e(h)`.
//! Normalization reduces first and then sweeps left to right, writing each
//! element as `σ α_e(h)` with `σ ∈ Σ_e` and pushing `α_ē(h)` past the edge.
//! A path word is a normal word whose trailing element is the identity; path
//! words starting at `v` are the vertices of the Bass-Serre tree.

use crate::error::{Error, Result};
use crate::graph::{GraphOfGroups, OEdge, VId};
use crate::groups::{render_elem, Elem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub elem: Elem,
    pub edge: OEdge,
}

/// `elem` sits in `G_{o(edge)}`; `tail` in the terminal vertex group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub base: VId,
    pub letters: Vec<Letter>,
    pub tail: Elem,
}

impl Word {
    pub fn identity(g: &GraphOfGroups, v: VId) -> Word {
        Word {
            base: v,
            letters: Vec::new(),
            tail: g.group(v).identity(),
        }
    }

    pub fn vertex_elem(v: VId, elem: Elem) -> Word {
        Word {
            base: v,
            letters: Vec::new(),
            tail: elem,
        }
    }

    /// `(elem, edge)` pairs followed by the identity.
    pub fn path(g: &GraphOfGroups, base: VId, letters: Vec<(Elem, OEdge)>) -> Word {
        let end = letters.last().map_or(base, |(_, e)| g.terminus(*e));
        Word {
            base,
            letters: letters
                .into_iter()
                .map(|(elem, edge)| Letter { elem, edge })
                .collect(),
            tail: g.group(end).identity(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn terminus(&self, g: &GraphOfGroups) -> VId {
        self.letters.last().map_or(self.base, |l| g.terminus(l.edge))
    }

    pub fn is_closed(&self, g: &GraphOfGroups) -> bool {
        self.terminus(g) == self.base
    }

    pub fn edges(&self) -> impl Iterator<Item = OEdge> + '_ {
        self.letters.iter().map(|l| l.edge)
    }

    /// Checks that consecutive edges connect and every element lies in its group.
    pub fn validate(&self, g: &GraphOfGroups) -> Result<()> {
        let mut v = self.base;
        for (i, l) in self.letters.iter().enumerate() {
            if g.origin(l.edge) != v {
                return Err(Error::Word(format!(
                    "letter {i}: `{}` does not start at `{}`",
                    g.oedge_name(l.edge),
                    g.vertex_name(v)
                )));
            }
            if !g.group(v).contains(&l.elem) {
                return Err(Error::Word(format!("letter {i}: element outside {}", g.group(v))));
            }
            v = g.terminus(l.edge);
        }
        if !g.group(v).contains(&self.tail) {
            return Err(Error::Word(format!("tail outside {}", g.group(v))));
        }
        Ok(())
    }
}

/// `a · b`, merging `a`'s tail into `b`'s first element. No reduction.
pub fn concat(g: &GraphOfGroups, a: &Word, b: &Word) -> Result<Word> {
    let t = a.terminus(g);
    if t != b.base {
        return Err(Error::Word(format!(
            "cannot multiply: word ends at `{}` but the next starts at `{}`",
            g.vertex_name(t),
            g.vertex_name(b.base)
        )));
    }
    let grp = g.group(t);
    let mut letters = a.letters.clone();
    let tail = match b.letters.split_first() {
        None => grp.mul(&a.tail, &b.tail),
        Some((first, rest)) => {
            letters.push(Letter {
                elem: grp.mul(&a.tail, &first.elem),
                edge: first.edge,
            });
            letters.extend(rest.iter().cloned());
            b.tail.clone()
        }
    };
    Ok(Word {
        base: a.base,
        letters,
        tail,
    })
}

/// Removes all reversals with a left-to-right stack.
pub fn reduce(g: &GraphOfGroups, w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.letters.len());
    let mut cur = g.group(w.base).identity();
    for l in &w.letters {
        let grp = g.group(g.origin(l.edge));
        let c = grp.mul(&cur, &l.elem);
        if let Some(top) = out.last() {
            if top.edge == l.edge.bar() {
                if let Some(h) = g.emb(l.edge).preimage(&c) {
                    let top = out.pop().expect("nonempty");
                    let below = g.group(g.origin(top.edge));
                    cur = below.mul(&top.elem, &g.emb(top.edge).apply(&h));
                    continue;
                }
            }
        }
        out.push(Letter {
            elem: c,
            edge: l.edge,
        });
        cur = g.group(g.terminus(l.edge)).identity();
    }
    let end = out.last().map_or(w.base, |l| g.terminus(l.edge));
    Word {
        base: w.base,
        letters: out,
        tail: g.group(end).mul(&cur, &w.tail),
    }
}

/// `N(w)`: reduce, then move every element into its transversal left to right.
pub fn normalize(g: &GraphOfGroups, w: &Word) -> Word {
    let mut r = reduce(g, w);
    let mut carry = g.group(r.base).identity();
    for l in r.letters.iter_mut() {
        let grp = g.group(g.origin(l.edge));
        let x = grp.mul(&carry, &l.elem);
        let (sigma, h) = g.emb(l.edge).decompose(&x);
        l.elem = sigma;
        carry = g.emb(l.edge.bar()).apply(&h);
    }
    let end = r.terminus(g);
    r.tail = g.group(end).mul(&carry, &r.tail);
    r
}

pub fn is_reduced(g: &GraphOfGroups, w: &Word) -> bool {
    w.letters
        .windows(2)
        .all(|p| !(p[1].edge == p[0].edge.bar() && g.emb(p[1].edge).in_image(&p[1].elem)))
}

pub fn is_normal(g: &GraphOfGroups, w: &Word) -> bool {
    is_reduced(g, w) && w.letters.iter().all(|l| g.emb(l.edge).is_rep(&l.elem))
}

pub fn is_path_word(g: &GraphOfGroups, w: &Word) -> bool {
    is_normal(g, w) && g.group(w.terminus(g)).is_identity(&w.tail)
}

/// `P(w)`: drops the trailing element.
pub fn path_part(g: &GraphOfGroups, w: &Word) -> Word {
    Word {
        base: w.base,
        letters: w.letters.clone(),
        tail: g.group(w.terminus(g)).identity(),
    }
}

/// Formal inverse `g^{-1} ē_n g_n^{-1} ... ē_1 g_1^{-1}` (not normalized).
pub fn invert(g: &GraphOfGroups, w: &Word) -> Word {
    let mut letters = Vec::with_capacity(w.letters.len());
    let mut prev = w.tail.clone();
    for l in w.letters.iter().rev() {
        let grp = g.group(g.terminus(l.edge));
        letters.push(Letter {
            elem: grp.inv(&prev),
            edge: l.edge.bar(),
        });
        prev = l.elem.clone();
    }
    Word {
        base: w.terminus(g),
        letters,
        tail: g.group(w.base).inv(&prev),
    }
}

/// Normal form of `a · b`.
pub fn multiply(g: &GraphOfGroups, a: &Word, b: &Word) -> Result<Word> {
    Ok(normalize(g, &concat(g, a, b)?))
}

/// Normal form of `w^k` for a closed word; negative `k` uses the inverse.
pub fn power(g: &GraphOfGroups, w: &Word, k: i64) -> Result<Word> {
    if !w.is_closed(g) {
        return Err(Error::Word("power of a word that is not closed".into()));
    }
    let base = if k < 0 { normalize(g, &invert(g, w)) } else { normalize(g, w) };
    let mut acc = Word::identity(g, w.base);
    for _ in 0..k.unsigned_abs() {
        acc = multiply(g, &acc, &base)?;
    }
    Ok(acc)
}

/// `g^{-1} h g`, normalized.
pub fn conjugate(g: &GraphOfGroups, by: &Word, h: &Word) -> Result<Word> {
    let inv = invert(g, by);
    multiply(g, &concat(g, &inv, h)?, by)
}

/// A closed path word `g_1 e_1 ... g_n e_n` with `g_1 e_1 ≠ 1 ē_n`; its powers are
/// path words.
pub fn is_repeatable(g: &GraphOfGroups, w: &Word) -> bool {
    let (Some(first), Some(last)) = (w.letters.first(), w.letters.last()) else {
        return false;
    };
    is_path_word(g, w)
        && w.is_closed(g)
        && !(first.edge == last.edge.bar() && g.group(w.base).is_identity(&first.elem))
}

/// `g e h ē` over a non-loop edge with two nontrivial transversals, else `1 e` over
/// the first loop.
pub fn find_repeatable(g: &GraphOfGroups) -> Option<Word> {
    for id in 0..g.edge_count() {
        if g.is_loop(id) {
            continue;
        }
        let e = OEdge::fwd(id);
        if let (Some(s), Some(h)) = (g.emb(e).nontrivial_rep(), g.emb(e.bar()).nontrivial_rep()) {
            return Some(Word::path(g, g.origin(e), vec![(s, e), (h, e.bar())]));
        }
    }
    let id = (0..g.edge_count()).find(|&id| g.is_loop(id))?;
    let e = OEdge::fwd(id);
    Some(Word::path(g, g.origin(e), vec![(g.group(g.origin(e)).identity(), e)]))
}

/// Splits on `.` tokens surrounded by whitespace.
fn split_tokens(s: &str) -> Vec<&str> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..b.len() {
        let sep = b[i] == b'.'
            && (i == 0 || b[i - 1].is_ascii_whitespace())
            && (i + 1 == b.len() || b[i + 1].is_ascii_whitespace());
        if sep {
            out.push(s[start..i].trim());
            start = i + 1;
        }
    }
    out.push(s[start..].trim());
    out
}

/// Word literal: tokens separated by ` . `; `v:elem` is an element of `G_v`
/// (`v` alone is its identity), `e` and `~e` are oriented edges.
/// Example: `v0:(1) . e0 . v1:(2)`.
pub fn parse_word(g: &GraphOfGroups, s: &str) -> Result<Word> {
    let toks = split_tokens(s);
    if toks.iter().any(|t| t.is_empty()) {
        return Err(Error::Word(format!("empty token in `{s}`")));
    }
    let vertex_tok = |t: &str| -> Result<Option<(VId, Elem)>> {
        let (name, elem) = match t.split_once(':') {
            Some((n, e)) => (n.trim(), Some(e.trim())),
            None => (t, None),
        };
        let Some(v) = g.vertex_id(name) else {
            return if elem.is_some() {
                Err(Error::Word(format!("unknown vertex `{name}`")))
            } else {
                Ok(None)
            };
        };
        let elem = match elem {
            Some(e) if !e.is_empty() => g.group(v).parse_elem(e)?,
            _ => g.group(v).identity(),
        };
        Ok(Some((v, elem)))
    };
    let mut cur: Option<VId> = None;
    let mut pending: Option<Elem> = None;
    let mut base = None;
    let mut letters = Vec::new();
    for t in toks {
        if let Some((v, elem)) = vertex_tok(t)? {
            if let Some(c) = cur {
                if c != v {
                    return Err(Error::Word(format!(
                        "`{t}`: expected an element of `{}`",
                        g.vertex_name(c)
                    )));
                }
            }
            if pending.is_some() {
                return Err(Error::Word(format!("two elements in a row at `{t}`")));
            }
            cur = Some(v);
            base.get_or_insert(v);
            pending = Some(elem);
            continue;
        }
        let e = g
            .oedge(t)
            .ok_or_else(|| Error::Word(format!("unknown token `{t}`")))?;
        let o = g.origin(e);
        if let Some(c) = cur {
            if c != o {
                return Err(Error::Word(format!(
                    "`{t}` starts at `{}`, not `{}`",
                    g.vertex_name(o),
                    g.vertex_name(c)
                )));
            }
        }
        base.get_or_insert(o);
        letters.push(Letter {
            elem: pending.take().unwrap_or_else(|| g.group(o).identity()),
            edge: e,
        });
        cur = Some(g.terminus(e));
    }
    let end = cur.expect("at least one token");
    Ok(Word {
        base: base.expect("at least one token"),
        letters,
        tail: pending.unwrap_or_else(|| g.group(end).identity()),
    })
}

/// Canonical literal; the tail is omitted when it is the identity of a nonempty word.
pub fn render_word(g: &GraphOfGroups, w: &Word) -> String {
    let mut parts = Vec::new();
    for l in &w.letters {
        let v = g.origin(l.edge);
        parts.push(format!("{}:{}", g.vertex_name(v), render_elem(&l.elem)));
        parts.push(g.oedge_name(l.edge));
    }
    let end = w.terminus(g);
    if w.letters.is_empty() || !g.group(end).is_identity(&w.tail) {
        parts.push(format!("{}:{}", g.vertex_name(end), render_elem(&w.tail)));
    }
    parts.join(" . ")
}
