//! Boundary points of the Bass-Serre tree as eventually periodic infinite path
//! words, and the action of the fundamental group on them.
//!
//! The action `s · ξ = N(s ξ)` is computed by a left-to-right transducer: a finite
//! cancellation phase against the letters of `s`, then a streaming phase in which
//! each input letter produces one output letter and a carried element. A repeated
//! streaming state `(phase in the period, carry)` proves that the output is
//! eventually periodic and yields the image point exactly.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{index_at_least, GraphOfGroups, OEdge, VId};
use crate::groups::Elem;
use crate::words::{
    concat, invert, is_path_word, is_repeatable, normalize, parse_word, power, reduce,
    render_word, Letter, Word,
};

pub const DEFAULT_STATE_CAP: usize = 10_000;

/// `prefix · period^∞`, kept canonical: the period is primitive and the prefix
/// does not end with the period's last letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryPoint {
    prefix: Word,
    period: Word,
}

fn word_from_letters(g: &GraphOfGroups, base: VId, letters: Vec<Letter>) -> Word {
    let end = letters.last().map_or(base, |l| g.terminus(l.edge));
    Word {
        base,
        letters,
        tail: g.group(end).identity(),
    }
}

impl BoundaryPoint {
    pub fn new(g: &GraphOfGroups, prefix: Word, period: Word) -> Result<Self> {
        if !is_path_word(g, &prefix) {
            return Err(Error::Word("the prefix of a boundary point must be a path word".into()));
        }
        if !is_repeatable(g, &period) {
            return Err(Error::Word("the period of a boundary point must be repeatable".into()));
        }
        if prefix.terminus(g) != period.base {
            return Err(Error::Word("the period does not start where the prefix ends".into()));
        }
        if !is_path_word(g, &concat(g, &prefix, &period)?) {
            return Err(Error::Word("prefix and period do not join into a path word".into()));
        }
        Ok(Self::canonical(g, prefix.letters, period.letters, prefix.base))
    }

    fn canonical(g: &GraphOfGroups, mut pre: Vec<Letter>, mut per: Vec<Letter>, base: VId) -> Self {
        let n = per.len();
        if let Some(d) = (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| per[i] == per[i % d])) {
            per.truncate(d);
        }
        while let (Some(a), Some(b)) = (pre.last(), per.last()) {
            if a != b {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        let prefix = word_from_letters(g, base, pre);
        let pbase = prefix.terminus(g);
        BoundaryPoint {
            prefix,
            period: word_from_letters(g, pbase, per),
        }
    }

    /// `s^∞` for a repeatable word `s`.
    pub fn periodic(g: &GraphOfGroups, s: &Word) -> Result<Self> {
        Self::new(g, Word::identity(g, s.base), s.clone())
    }

    pub fn base(&self) -> VId {
        self.prefix.base
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn letter(&self, i: usize) -> &Letter {
        let p = self.prefix.len();
        if i < p {
            &self.prefix.letters[i]
        } else {
            &self.period.letters[(i - p) % self.period.len()]
        }
    }

    /// First `d` letters.
    pub fn expand(&self, d: usize) -> Vec<Letter> {
        (0..d).map(|i| self.letter(i).clone()).collect()
    }

    /// First `d` letters as a path word.
    pub fn truncation(&self, g: &GraphOfGroups, d: usize) -> Word {
        word_from_letters(g, self.base(), self.expand(d))
    }

    /// Index of the first letter where two points differ, `None` if equal.
    pub fn first_difference(&self, other: &BoundaryPoint) -> Option<usize> {
        if self == other {
            return None;
        }
        let bound = self.prefix.len().max(other.prefix.len())
            + self.period.len() * other.period.len()
            + 1;
        (0..bound).find(|&i| self.letter(i) != other.letter(i))
    }
}

/// `"<prefix word> | <period word>"`.
pub fn parse_point(g: &GraphOfGroups, s: &str) -> Result<BoundaryPoint> {
    let (p, q) = s
        .split_once('|')
        .ok_or_else(|| Error::Word(format!("expected `prefix | period`, got `{s}`")))?;
    let period = parse_word(g, q)?;
    let prefix = if p.trim().is_empty() {
        Word::identity(g, period.base)
    } else {
        parse_word(g, p)?
    };
    BoundaryPoint::new(g, prefix, period)
}

pub fn render_point(g: &GraphOfGroups, x: &BoundaryPoint) -> String {
    format!("{} | {}", render_word(g, &x.prefix), render_word(g, &x.period))
}

pub fn render_letters(g: &GraphOfGroups, base: VId, letters: &[Letter]) -> String {
    render_word(g, &word_from_letters(g, base, letters.to_vec()))
}

#[derive(Clone, Debug)]
pub struct ActOutcome {
    /// Output letters produced so far (at least the requested number).
    pub letters: Vec<Letter>,
    /// The image point, when a streaming state repeated within the cap.
    pub exact: Option<BoundaryPoint>,
    /// Streaming states examined.
    pub states: usize,
}

fn run_transducer(
    g: &GraphOfGroups,
    s: &Word,
    xi: &BoundaryPoint,
    min_letters: usize,
    want_exact: bool,
    cap: usize,
) -> Result<ActOutcome> {
    if s.terminus(g) != xi.base() {
        return Err(Error::Word(format!(
            "the element ends at `{}` but the point is based at `{}`",
            g.vertex_name(s.terminus(g)),
            g.vertex_name(xi.base())
        )));
    }
    let plen = xi.prefix.len();
    let qlen = xi.period.len();

    // cancellation phase
    let r = reduce(g, s);
    let mut stack = r.letters;
    let mut cur = r.tail;
    let mut pos = 0;
    loop {
        let l = xi.letter(pos);
        let grp = g.group(g.origin(l.edge));
        let c = grp.mul(&cur, &l.elem);
        pos += 1;
        if let Some(top) = stack.last() {
            if top.edge == l.edge.bar() {
                if let Some(h) = g.emb(l.edge).preimage(&c) {
                    let top = stack.pop().expect("nonempty");
                    let below = g.group(g.origin(top.edge));
                    cur = below.mul(&top.elem, &g.emb(top.edge).apply(&h));
                    continue;
                }
            }
        }
        stack.push(Letter { elem: c, edge: l.edge });
        break;
    }

    // normalize the head
    let mut carry = g.group(s.base).identity();
    let mut out = Vec::with_capacity(stack.len() + min_letters);
    for l in stack {
        let grp = g.group(g.origin(l.edge));
        let x = grp.mul(&carry, &l.elem);
        let (sigma, h) = g.emb(l.edge).decompose(&x);
        out.push(Letter { elem: sigma, edge: l.edge });
        carry = g.emb(l.edge.bar()).apply(&h);
    }

    // streaming phase
    let oblivious = xi
        .period
        .letters
        .iter()
        .all(|l| g.emb(l.edge).is_surjective());
    let mut seen: HashMap<(usize, Option<Elem>), usize> = HashMap::new();
    let mut states = 0;
    let mut exact = None;
    let mut searching = want_exact;
    loop {
        if searching && pos >= plen {
            let key = ((pos - plen) % qlen, (!oblivious).then(|| carry.clone()));
            if let Some(&j) = seen.get(&key) {
                let period: Vec<Letter> = out[j..].to_vec();
                let prefix: Vec<Letter> = out[..j].to_vec();
                exact = Some(BoundaryPoint::canonical(g, prefix, period, s.base));
                searching = false;
            } else {
                seen.insert(key, out.len());
                states += 1;
                if states >= cap {
                    searching = false;
                }
            }
        }
        if !searching && out.len() >= min_letters {
            break;
        }
        let l = xi.letter(pos);
        let grp = g.group(g.origin(l.edge));
        let x = grp.mul(&carry, &l.elem);
        let (sigma, h) = g.emb(l.edge).decompose(&x);
        out.push(Letter { elem: sigma, edge: l.edge });
        carry = g.emb(l.edge.bar()).apply(&h);
        pos += 1;
    }
    Ok(ActOutcome {
        letters: out,
        exact,
        states,
    })
}

/// First `d` letters of `s · ξ`.
pub fn act_truncated(g: &GraphOfGroups, s: &Word, xi: &BoundaryPoint, d: usize) -> Result<Vec<Letter>> {
    let mut out = run_transducer(g, s, xi, d, false, 0)?.letters;
    out.truncate(d);
    Ok(out)
}

/// `s · ξ` exactly, if the transducer recurs within `cap` states.
pub fn act_exact(
    g: &GraphOfGroups,
    s: &Word,
    xi: &BoundaryPoint,
    cap: usize,
) -> Result<ActOutcome> {
    run_transducer(g, s, xi, 0, true, cap)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedStatus {
    /// `s · ξ = ξ`, certified by a recurring transducer state.
    Fixed { states: usize },
    /// `s · ξ` and `ξ` first differ at this letter.
    Moved(usize),
    /// No difference in the examined letters and no recurrence within the cap.
    Unknown(usize),
}

pub fn classify_fixed(
    g: &GraphOfGroups,
    s: &Word,
    xi: &BoundaryPoint,
    depth: usize,
    cap: usize,
) -> Result<FixedStatus> {
    let o = run_transducer(g, s, xi, depth, true, cap)?;
    if let Some(i) = (0..o.letters.len()).find(|&i| o.letters[i] != *xi.letter(i)) {
        return Ok(FixedStatus::Moved(i));
    }
    match &o.exact {
        Some(p) => match p.first_difference(xi) {
            None => Ok(FixedStatus::Fixed { states: o.states }),
            Some(i) => Ok(FixedStatus::Moved(i)),
        },
        None => Ok(FixedStatus::Unknown(o.letters.len())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowRoute {
    /// Built along the spanning tree.
    Recipe,
    /// Found by breadth-first search over edge successions.
    Search,
}

/// `f` flows to `e`: `1 · e · ν · f` is a path word, with `ν` ending in an element of `Σ_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowWitness {
    pub from: OEdge,
    pub to: OEdge,
    pub nu: Word,
    pub route: FlowRoute,
}

impl FlowWitness {
    /// `1 · e · ν · f`.
    pub fn full_word(&self, g: &GraphOfGroups) -> Word {
        let mut letters = vec![Letter {
            elem: g.group(g.origin(self.to)).identity(),
            edge: self.to,
        }];
        letters.extend(self.nu.letters.iter().cloned());
        letters.push(Letter {
            elem: self.nu.tail.clone(),
            edge: self.from,
        });
        word_from_letters(g, g.origin(self.to), letters)
    }

    pub fn verify(&self, g: &GraphOfGroups) -> bool {
        self.nu.base == g.terminus(self.to)
            && self.nu.terminus(g) == g.origin(self.from)
            && self.nu.validate(g).is_ok()
            && is_path_word(g, &self.full_word(g))
    }
}

/// The element to place between `prev` and `next` so that no reversal occurs.
fn junction(g: &GraphOfGroups, prev: OEdge, next: OEdge) -> Option<Elem> {
    if next == prev.bar() {
        g.emb(next).nontrivial_rep()
    } else {
        Some(g.group(g.origin(next)).identity())
    }
}

fn flow_recipe(g: &GraphOfGroups, f: OEdge, e: OEdge) -> Option<Word> {
    let start = g.terminus(e);
    let c = g.tree_path(start, g.origin(f));
    if c.is_empty() {
        if f != e.bar() {
            return Some(Word::identity(g, start));
        }
        if let Some(h) = g.emb(f).nontrivial_rep() {
            return Some(Word::vertex_elem(start, h));
        }
        let other = g
            .out_edges(start)
            .into_iter()
            .find(|&x| x != f && x != e)?;
        let one = g.group(start).identity();
        let letters = if g.is_loop(other.id) {
            vec![Letter { elem: one, edge: other }]
        } else {
            vec![
                Letter { elem: one, edge: other },
                Letter {
                    elem: g.emb(other.bar()).nontrivial_rep()?,
                    edge: other.bar(),
                },
            ]
        };
        return Some(word_from_letters(g, start, letters));
    }
    let mut letters = Vec::new();
    let mut prev = e;
    for &x in &c {
        letters.push(Letter {
            elem: junction(g, prev, x)?,
            edge: x,
        });
        prev = x;
    }
    let mut w = word_from_letters(g, start, letters);
    w.tail = junction(g, prev, f)?;
    Some(w)
}

fn flow_search(g: &GraphOfGroups, f: OEdge, e: OEdge, bound: usize) -> Option<Word> {
    let allowed = |x: OEdge, y: OEdge| {
        g.terminus(x) == g.origin(y) && (y != x.bar() || index_at_least(g.index(y), 2))
    };
    let mut parent: HashMap<OEdge, OEdge> = HashMap::new();
    let mut depth: HashMap<OEdge, usize> = HashMap::from([(e, 0)]);
    let mut queue = VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        if allowed(x, f) {
            let mut chain = vec![x];
            while let Some(&p) = parent.get(chain.last().expect("nonempty")) {
                chain.push(p);
            }
            chain.reverse();
            let mut letters = Vec::new();
            for p in chain.windows(2) {
                letters.push(Letter {
                    elem: junction(g, p[0], p[1])?,
                    edge: p[1],
                });
            }
            let mut w = word_from_letters(g, g.terminus(e), letters);
            w.tail = junction(g, x, f)?;
            return Some(w);
        }
        let d = depth[&x];
        if d >= bound {
            continue;
        }
        for y in g.out_edges(g.terminus(x)) {
            if allowed(x, y) && !depth.contains_key(&y) {
                depth.insert(y, d + 1);
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}

/// Finds `ν` showing that `f` flows to `e`: the tree recipe first, then search.
pub fn flows_to(g: &GraphOfGroups, f: OEdge, e: OEdge, bound: usize) -> Option<FlowWitness> {
    let mk = |nu, route| FlowWitness {
        from: f,
        to: e,
        nu,
        route,
    };
    if let Some(nu) = flow_recipe(g, f, e) {
        let w = mk(nu, FlowRoute::Recipe);
        if w.verify(g) {
            return Some(w);
        }
    }
    flow_search(g, f, e, bound)
        .map(|nu| mk(nu, FlowRoute::Search))
        .filter(|w| w.verify(g))
}

#[derive(Clone, Debug)]
pub struct FlowsReport {
    /// `(f, e, witness that f flows to e)` for all ordered pairs `f ≠ e`.
    pub pairs: Vec<(OEdge, OEdge, Option<FlowWitness>)>,
    pub all: bool,
    pub reduced: bool,
    /// For a reduced graph, success is expected exactly when it is not a single ascending loop.
    pub predicted: bool,
}

impl FlowsReport {
    pub fn consistent(&self) -> bool {
        !self.reduced || self.all == self.predicted
    }

    pub fn failures(&self) -> impl Iterator<Item = (OEdge, OEdge)> + '_ {
        self.pairs
            .iter()
            .filter(|p| p.2.is_none())
            .map(|p| (p.0, p.1))
    }
}

pub fn flows_all(g: &GraphOfGroups, bound: usize) -> FlowsReport {
    let oes = g.oriented_edges();
    let mut pairs = Vec::new();
    for &f in &oes {
        for &e in &oes {
            if f != e {
                pairs.push((f, e, flows_to(g, f, e, bound)));
            }
        }
    }
    let all = pairs.iter().all(|p| p.2.is_some());
    let c = g.classify();
    FlowsReport {
        pairs,
        all,
        reduced: c.reduced,
        predicted: !c.single_ascending_loop,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaithfulPattern {
    /// Leave the base vertex along an edge avoided by the words and whose image
    /// misses their vertex elements.
    EdgeAvoidance,
    /// Octopus graphs: the tentacle whose label is the least admissible prime.
    OctopusPrime,
    /// `(g e h ē)^∞` with `g ∈ Σ_e` chosen to avoid the words.
    TransversalAvoidance(OEdge),
}

#[derive(Clone, Debug)]
pub struct FaithfulWitness {
    pub point: BoundaryPoint,
    pub edge: OEdge,
    /// The prime chosen by [`FaithfulPattern::OctopusPrime`].
    pub prime: Option<u64>,
    pub detail: String,
    pub proofs: Vec<(Word, FixedStatus)>,
}

impl FaithfulWitness {
    pub fn all_moved(&self) -> bool {
        self.proofs
            .iter()
            .all(|(_, s)| matches!(s, FixedStatus::Moved(_)))
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Builds a boundary point moved by every word in `words` (closed, nontrivial,
/// based at `base`) whose first letter avoids the edges in `avoid`, and proves
/// each move with [`classify_fixed`].
pub fn strong_faithful_witness(
    g: &GraphOfGroups,
    base: VId,
    words: &[Word],
    avoid: &[OEdge],
    pattern: FaithfulPattern,
    depth: usize,
    cap: usize,
) -> Result<Option<FaithfulWitness>> {
    let mut normal = Vec::new();
    for w in words {
        w.validate(g)?;
        if w.base != base || !w.is_closed(g) {
            return Err(Error::Word(format!(
                "`{}` is not a closed word at `{}`",
                render_word(g, w),
                g.vertex_name(base)
            )));
        }
        let n = normalize(g, w);
        if n == Word::identity(g, base) {
            return Err(Error::Word("the identity fixes every point".into()));
        }
        normal.push(n);
    }
    let vertex_elems: Vec<&Elem> = normal
        .iter()
        .filter(|w| w.is_empty())
        .map(|w| &w.tail)
        .collect();
    let avoided: HashSet<OEdge> = avoid
        .iter()
        .copied()
        .chain(normal.iter()
        .filter(|w| !w.is_empty())
        .flat_map(|w| {
            [
                w.letters[0].edge,
                w.letters.last().expect("nonempty").edge.bar(),
            ]
        }))
        .collect();

    let bounce = |f: OEdge| -> Option<(BoundaryPoint, String)> {
        let s = g.emb(f).nontrivial_rep()?;
        let h = g.emb(f.bar()).nontrivial_rep()?;
        let one = g.group(base).identity();
        let prefix = word_from_letters(g, base, vec![Letter { elem: one, edge: f }]);
        let period = word_from_letters(
            g,
            g.terminus(f),
            vec![
                Letter { elem: h, edge: f.bar() },
                Letter { elem: s, edge: f },
            ],
        );
        BoundaryPoint::new(g, prefix, period)
            .ok()
            .map(|p| (p, g.oedge_name(f)))
    };
    let edge_ok = |f: OEdge| {
        g.origin(f) == base
            && !avoided.contains(&f)
            && vertex_elems.iter().all(|x| !g.emb(f).in_image(x))
    };

    let mut prime = None;
    let found: Option<(BoundaryPoint, OEdge, String)> = match pattern {
        FaithfulPattern::EdgeAvoidance => g
            .out_edges(base)
            .into_iter()
            .filter(|&f| edge_ok(f))
            .find_map(|f| bounce(f).map(|(p, d)| (p, f, format!("edge {d}")))),
        FaithfulPattern::OctopusPrime => {
            let ints: Vec<i64> = vertex_elems
                .iter()
                .map(|x| match x {
                    Elem::Vector(v) if v.len() == 1 => {
                        i64::try_from(&v[0]).map_err(|_| Error::Unsupported("huge element".into()))
                    }
                    _ => Err(Error::Unsupported("octopus words live in Z".into())),
                })
                .collect::<Result<_>>()?;
            let mut hit = None;
            for p in (2..=(g.edge_count() as u64 + 1)).filter(|&p| is_prime(p)) {
                if ints.iter().any(|&m| m % p as i64 == 0) {
                    continue;
                }
                let Some(id) = g.edge_id(&format!("e{}", p - 1)) else {
                    continue;
                };
                let f = OEdge::fwd(id);
                if !edge_ok(f) {
                    continue;
                }
                if let Some((pt, d)) = bounce(f) {
                    prime = Some(p);
                    hit = Some((pt, f, format!("prime {p}, tentacle {d}")));
                    break;
                }
            }
            hit
        }
        FaithfulPattern::TransversalAvoidance(e) => {
            if g.origin(e) != base {
                return Err(Error::Word("the edge must start at the base vertex".into()));
            }
            let grp = g.group(base);
            let firsts: HashSet<&Elem> = normal
                .iter()
                .filter(|w| w.letters.first().map(|l| l.edge) == Some(e))
                .map(|w| &w.letters[0].elem)
                .collect();
            let h = g.emb(e.bar()).nontrivial_rep();
            let pick = g.emb(e).reps().take(10_000).skip(1).find(|x| {
                !firsts.contains(x)
                    && vertex_elems.iter().all(|f| {
                        !g.emb(e).in_image(&grp.mul(f, x)) && !g.emb(e).in_image(&grp.conj(x, f))
                    })
            });
            match (pick, h) {
                (Some(x), Some(h)) => {
                    let period = word_from_letters(
                        g,
                        base,
                        vec![
                            Letter { elem: x.clone(), edge: e },
                            Letter { elem: h, edge: e.bar() },
                        ],
                    );
                    BoundaryPoint::new(g, Word::identity(g, base), period)
                        .ok()
                        .map(|p| (p, e, format!("g = {}", crate::groups::render_elem(&x))))
                }
                _ => None,
            }
        }
    };
    let Some((point, edge, detail)) = found else {
        return Ok(None);
    };
    let mut proofs = Vec::new();
    for w in &normal {
        proofs.push((w.clone(), classify_fixed(g, w, &point, depth, cap)?));
    }
    Ok(Some(FaithfulWitness {
        point,
        edge,
        prime,
        detail,
        proofs,
    }))
}

#[derive(Clone, Debug)]
pub struct NorthSouth {
    /// `a_i`: agreement of `s^i · ξ` with `s^∞` over the first `d` letters, `i = 1..=k`.
    pub profile: Vec<usize>,
    /// `ξ` differs from `s^{-∞}` within the first `d` letters.
    pub away_from_repeller: bool,
    pub pass: bool,
}

/// Checks that `s^i · ξ` approaches the attracting point `s^∞`.
pub fn north_south_check(
    g: &GraphOfGroups,
    s: &Word,
    xi: &BoundaryPoint,
    k: usize,
    d: usize,
) -> Result<NorthSouth> {
    if !is_repeatable(g, s) {
        return Err(Error::Word(format!("`{}` is not repeatable", render_word(g, s))));
    }
    let attract = BoundaryPoint::periodic(g, s)?;
    let target = attract.expand(d);
    let m = (d / s.len() + 2) as i64;
    let inv = power(g, s, -m)?;
    let repel: Vec<&Letter> = inv.letters.iter().take(d).collect();
    let away = repel.len() < d
        || (0..d).any(|i| xi.letter(i) != repel[i]);
    let mut profile = Vec::with_capacity(k);
    let s_norm = normalize(g, s);
    let mut si = Word::identity(g, s.base);
    for _ in 0..k {
        si = normalize(g, &concat(g, &si, &s_norm)?);
        let img = act_truncated(g, &si, xi, d)?;
        profile.push(img.iter().zip(&target).take_while(|(a, b)| a == b).count());
    }
    let monotone = profile.windows(2).all(|p| p[0] <= p[1]);
    let pass = away && monotone && profile.last().is_some_and(|&a| 2 * a > d);
    Ok(NorthSouth {
        profile,
        away_from_repeller: away,
        pass,
    })
}

/// `s^{-1}` as a normal word (convenience for callers building inverse actions).
pub fn inverse(g: &GraphOfGroups, s: &Word) -> Word {
    normalize(g, &invert(g, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gbs_loop;

    #[test]
    fn point_literals_and_canonical_form() {
        let g = gbs_loop(3, 2).unwrap();
        let p = parse_point(&g, "v:(1) . e | v:(1) . e").unwrap();
        assert_eq!(render_point(&g, &p), "v:(0) | v:(1) . e");
        let q = parse_point(&g, "v:(0) | v:(1) . e . v:(1) . e").unwrap();
        assert_eq!(p, q);
        assert!(parse_point(&g, "v:(0) | v:(0) . e . v:(0) . ~e").is_err());
    }

    #[test]
    fn truncated_action_matches_finite_normal_form() {
        let g = gbs_loop(3, 2).unwrap();
        let xi = parse_point(&g, "v:(0) | v:(2) . e . v:(1) . ~e").unwrap();
        let s = parse_word(&g, "v:(5) . ~e . v:(7)").unwrap();
        let d = 10;
        let direct = act_truncated(&g, &s, &xi, d).unwrap();
        let long = xi.truncation(&g, d + 4);
        let fin = normalize(&g, &concat(&g, &s, &long).unwrap());
        assert_eq!(direct, fin.letters[..d].to_vec());
    }

    #[test]
    fn ascending_loop_fixed_point() {
        let g = gbs_loop(1, 3).unwrap();
        let xi = parse_point(&g, "v:(0) | v:(0) . e").unwrap();
        let s = parse_word(&g, "v:(0) . e . v:(1)").unwrap();
        let st = classify_fixed(&g, &s, &xi, 20, 1000).unwrap();
        assert!(matches!(st, FixedStatus::Fixed { .. }));
    }

    #[test]
    fn moved_point() {
        let g = gbs_loop(3, 2).unwrap();
        let xi = parse_point(&g, "v:(0) | v:(1) . e . v:(1) . ~e").unwrap();
        let s = parse_word(&g, "v:(1)").unwrap();
        assert_eq!(classify_fixed(&g, &s, &xi, 8, 1000).unwrap(), FixedStatus::Moved(0));
    }

    #[test]
    fn bs23_loop_flows_to_itself() {
        let g = gbs_loop(3, 2).unwrap();
        let e = OEdge::fwd(0);
        let w = flows_to(&g, e, e, 6).unwrap();
        assert_eq!(w.nu, Word::identity(&g, 0));
        assert!(flows_all(&g, 6).all);
    }

    #[test]
    fn ascending_loop_fails_one_direction() {
        let g = gbs_loop(1, 3).unwrap();
        let r = flows_all(&g, 8);
        assert!(!r.all && r.consistent());
        let e = OEdge::fwd(0);
        assert!(flows_to(&g, e.bar(), e, 8).is_some());
        assert!(flows_to(&g, e, e.bar(), 8).is_none());
    }

    #[test]
    fn north_south_bs23() {
        let g = gbs_loop(3, 2).unwrap();
        let s = parse_word(&g, "v:(1) . e . v:(1) . ~e").unwrap();
        let xi = parse_point(&g, "v:(0) | v:(2) . e . v:(1) . ~e").unwrap();
        let ns = north_south_check(&g, &s, &xi, 6, 12).unwrap();
        assert_eq!(ns.profile, vec![2, 4, 6, 8, 10, 12]);
        assert!(ns.pass);
    }
}
