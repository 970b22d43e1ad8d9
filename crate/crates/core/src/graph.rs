//! Finite graphs of groups: validation, per-edge flags, classification and
//! collapse of collapsible edges.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::groups::{Elem, Embedding, GroupDesc, Mono};

pub type VId = usize;

/// An oriented edge: `rev == false` is the stored orientation `e`, `true` is `ē`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OEdge {
    pub id: usize,
    pub rev: bool,
}

impl OEdge {
    pub fn fwd(id: usize) -> Self {
        OEdge { id, rev: false }
    }

    pub fn bar(self) -> Self {
        OEdge {
            id: self.id,
            rev: !self.rev,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSpec {
    pub name: String,
    pub group: GroupDesc,
}

/// `fwd` is `α_e: G_e -> G_origin`, `rev` is `α_ē: G_e -> G_terminus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub name: String,
    pub origin: VId,
    pub terminus: VId,
    pub group: GroupDesc,
    pub fwd: Mono,
    pub rev: Mono,
}

#[derive(Clone, Debug)]
pub struct GraphOfGroups {
    vertices: Vec<VertexSpec>,
    edges: Vec<EdgeSpec>,
    emb: Vec<[Embedding; 2]>,
}

impl PartialEq for GraphOfGroups {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for GraphOfGroups {}

/// `None` stands for infinite index.
pub type Index = Option<u64>;

pub fn index_at_least(i: Index, k: u64) -> bool {
    i.is_none_or(|x| x >= k)
}

pub fn fmt_index(i: Index) -> String {
    i.map_or_else(|| "inf".to_string(), |x| x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFlags {
    pub is_loop: bool,
    /// `|Σ_e|`
    pub index_fwd: Index,
    /// `|Σ_ē|`
    pub index_rev: Index,
    pub is_ascending_loop: bool,
    pub is_non_degenerate: bool,
    /// `e` can be contracted into `o(e)`.
    pub is_collapsible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub locally_finite: bool,
    pub non_singular: bool,
    pub reduced: bool,
    /// The reduced form is one of the two graphs whose tree is a line.
    pub is_line: bool,
    /// The reduced form is a single ascending loop.
    pub single_ascending_loop: bool,
    /// All vertex and edge groups are `Z` (a generalized Baumslag-Solitar graph).
    pub is_gbs: bool,
}

/// One contraction performed by [`GraphOfGroups::collapse_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseMove {
    pub edge: String,
    pub removed_vertex: String,
    pub into_vertex: String,
    pub rerouted: Vec<String>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('~')
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl GraphOfGroups {
    pub fn new(vertices: Vec<VertexSpec>, edges: Vec<EdgeSpec>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::graph("E_EMPTY", "a graph needs at least one vertex"));
        }
        let mut names = HashSet::new();
        for n in vertices.iter().map(|v| &v.name).chain(edges.iter().map(|e| &e.name)) {
            if !valid_name(n) {
                return Err(Error::graph("E_BAD_ID", format!("`{n}` is not a valid identifier")));
            }
            if !names.insert(n.clone()) {
                return Err(Error::graph("E_DUPLICATE_ID", format!("`{n}` is declared twice")));
            }
        }
        let mut emb = Vec::with_capacity(edges.len());
        for e in &edges {
            for v in [e.origin, e.terminus] {
                if v >= vertices.len() {
                    return Err(Error::graph(
                        "E_UNKNOWN_VERTEX",
                        format!("edge `{}` refers to vertex #{v}", e.name),
                    ));
                }
            }
            let ctx = |err: Error, side: &str| match err {
                Error::Graph { code, msg } => {
                    Error::graph(code, format!("edge `{}` {side}: {msg}", e.name))
                }
                other => Error::graph("E_MONO_DOMAIN", format!("edge `{}` {side}: {other}", e.name)),
            };
            let f = Embedding::new(&e.group, &vertices[e.origin].group, &e.fwd)
                .map_err(|x| ctx(x, "fwd"))?;
            let r = Embedding::new(&e.group, &vertices[e.terminus].group, &e.rev)
                .map_err(|x| ctx(x, "rev"))?;
            emb.push([f, r]);
        }
        let g = GraphOfGroups {
            vertices,
            edges,
            emb,
        };
        if !g.is_connected() {
            return Err(Error::graph("E_DISCONNECTED", "the underlying graph is not connected"));
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for oe in self.out_edges(v) {
                let w = self.terminus(oe);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertices(&self) -> &[VertexSpec] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, name: &str) -> Option<VId> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// Parses `e` or `~e`.
    pub fn oedge(&self, name: &str) -> Option<OEdge> {
        match name.strip_prefix('~') {
            Some(n) => self.edge_id(n).map(|id| OEdge::fwd(id).bar()),
            None => self.edge_id(name).map(OEdge::fwd),
        }
    }

    pub fn oedge_name(&self, oe: OEdge) -> String {
        let n = &self.edges[oe.id].name;
        if oe.rev {
            format!("~{n}")
        } else {
            n.clone()
        }
    }

    pub fn vertex_name(&self, v: VId) -> &str {
        &self.vertices[v].name
    }

    pub fn group(&self, v: VId) -> &GroupDesc {
        &self.vertices[v].group
    }

    pub fn edge_group(&self, id: usize) -> &GroupDesc {
        &self.edges[id].group
    }

    pub fn origin(&self, oe: OEdge) -> VId {
        let e = &self.edges[oe.id];
        if oe.rev {
            e.terminus
        } else {
            e.origin
        }
    }

    pub fn terminus(&self, oe: OEdge) -> VId {
        self.origin(oe.bar())
    }

    /// `α_e: G_e -> G_{o(e)}` with its transversal `Σ_e`.
    pub fn emb(&self, oe: OEdge) -> &Embedding {
        &self.emb[oe.id][usize::from(oe.rev)]
    }

    pub fn index(&self, oe: OEdge) -> Index {
        self.emb(oe).index()
    }

    pub fn is_loop(&self, id: usize) -> bool {
        self.edges[id].origin == self.edges[id].terminus
    }

    /// Both orientations of every edge, in edge order, `e` before `ē`.
    pub fn oriented_edges(&self) -> Vec<OEdge> {
        (0..self.edges.len())
            .flat_map(|id| [OEdge::fwd(id), OEdge::fwd(id).bar()])
            .collect()
    }

    /// Oriented edges starting at `v`, in edge order.
    pub fn out_edges(&self, v: VId) -> Vec<OEdge> {
        self.oriented_edges()
            .into_iter()
            .filter(|&oe| self.origin(oe) == v)
            .collect()
    }

    /// Tree valence at a vertex of type `v`: the sum of `|Σ_e|` over `o(e) = v`.
    pub fn valence(&self, v: VId) -> Index {
        self.out_edges(v)
            .into_iter()
            .map(|oe| self.index(oe))
            .try_fold(0u64, |acc, i| i.map(|x| acc + x))
    }

    pub fn flags(&self, oe: OEdge) -> EdgeFlags {
        let is_loop = self.is_loop(oe.id);
        let index_fwd = self.index(oe);
        let index_rev = self.index(oe.bar());
        EdgeFlags {
            is_loop,
            index_fwd,
            index_rev,
            is_ascending_loop: is_loop && (index_fwd == Some(1) || index_rev == Some(1)),
            is_non_degenerate: !is_loop
                && index_at_least(index_fwd, 3)
                && index_at_least(index_rev, 2),
            is_collapsible: !is_loop && index_rev == Some(1),
        }
    }

    pub fn is_gbs(&self) -> bool {
        let z = GroupDesc::FreeAbelian(1);
        self.vertices.iter().all(|v| v.group == z) && self.edges.iter().all(|e| e.group == z)
    }

    pub fn is_reduced(&self) -> bool {
        self.oriented_edges()
            .into_iter()
            .all(|oe| !self.flags(oe).is_collapsible)
    }

    pub fn classify(&self) -> Classification {
        let locally_finite = self
            .oriented_edges()
            .into_iter()
            .all(|oe| self.index(oe).is_some());
        let non_singular = (0..self.vertices.len()).all(|v| {
            let out = self.out_edges(v);
            out.len() != 1 || !self.emb(out[0]).is_surjective()
        });
        let reduced = self.is_reduced();
        let r = if reduced {
            self.clone()
        } else {
            self.collapse_reduce().0
        };
        let (is_line, single_ascending_loop) = match r.edges.len() {
            1 => {
                let f = r.flags(OEdge::fwd(0));
                let line = if f.is_loop {
                    f.index_fwd == Some(1) && f.index_rev == Some(1)
                } else {
                    f.index_fwd == Some(2) && f.index_rev == Some(2)
                };
                (line, f.is_ascending_loop)
            }
            _ => (false, false),
        };
        Classification {
            locally_finite,
            non_singular,
            reduced,
            is_line,
            single_ascending_loop,
            is_gbs: self.is_gbs(),
        }
    }

    fn collapsible_edge(&self) -> Option<OEdge> {
        (0..self.edges.len())
            .flat_map(|id| [OEdge::fwd(id), OEdge::fwd(id).bar()])
            .find(|&oe| self.flags(oe).is_collapsible)
    }

    /// Repeatedly contracts the collapsible edge of smallest id into its origin.
    pub fn collapse_reduce(&self) -> (GraphOfGroups, Vec<CollapseMove>) {
        let mut g = self.clone();
        let mut moves = Vec::new();
        while let Some(oe) = g.collapsible_edge() {
            let (next, mv) = g.collapse(oe).expect("collapse of a valid graph is valid");
            moves.push(mv);
            g = next;
        }
        (g, moves)
    }

    /// Contracts `e` (with `α_ē` an isomorphism) into `o(e)`, removing `t(e)`.
    pub fn collapse(&self, e: OEdge) -> Result<(GraphOfGroups, CollapseMove)> {
        if !self.flags(e).is_collapsible {
            return Err(Error::graph(
                "E_NOT_COLLAPSIBLE",
                format!("`{}` is not collapsible", self.oedge_name(e)),
            ));
        }
        let keep = self.origin(e);
        let gone = self.terminus(e);
        let through = |x: &Elem| -> Elem {
            let h = self.emb(e.bar()).preimage(x).expect("α_ē is onto");
            self.emb(e).apply(&h)
        };
        let renum = |v: VId| -> VId {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let mut edges = Vec::new();
        let mut rerouted = Vec::new();
        for (id, spec) in self.edges.iter().enumerate() {
            if id == e.id {
                continue;
            }
            let mut s = spec.clone();
            for side in [false, true] {
                let f = OEdge { id, rev: side };
                if self.origin(f) != gone {
                    continue;
                }
                let imgs: Vec<Elem> = self.emb(f).generator_images().iter().map(through).collect();
                let new = Embedding::from_generator_images(&spec.group, self.group(keep), imgs)?;
                if side {
                    s.rev = new.mono().clone();
                } else {
                    s.fwd = new.mono().clone();
                }
                rerouted.push(self.oedge_name(f));
            }
            s.origin = renum(s.origin);
            s.terminus = renum(s.terminus);
            edges.push(s);
        }
        let vertices: Vec<VertexSpec> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != gone)
            .map(|(_, s)| s.clone())
            .collect();
        let mv = CollapseMove {
            edge: self.oedge_name(e),
            removed_vertex: self.vertices[gone].name.clone(),
            into_vertex: self.vertices[keep].name.clone(),
            rerouted,
        };
        Ok((GraphOfGroups::new(vertices, edges)?, mv))
    }

    /// Breadth-first spanning tree over non-loop edges: the tree edge into each vertex.
    pub fn spanning_tree(&self, root: VId) -> Vec<Option<OEdge>> {
        let mut parent = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for oe in self.out_edges(v) {
                let w = self.terminus(oe);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(oe);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// The path from `a` to `b` in the spanning tree rooted at vertex 0.
    pub fn tree_path(&self, a: VId, b: VId) -> Vec<OEdge> {
        let parent = self.spanning_tree(0);
        let up = |mut v: VId| {
            let mut path = Vec::new();
            while let Some(oe) = parent[v] {
                path.push(oe);
                v = self.origin(oe);
            }
            path
        };
        let pa = up(a);
        let pb = up(b);
        // strip the common part near the root
        let mut i = pa.len();
        let mut j = pb.len();
        while i > 0 && j > 0 && pa[i - 1] == pb[j - 1] {
            i -= 1;
            j -= 1;
        }
        let mut path: Vec<OEdge> = pa[..i].iter().map(|oe| oe.bar()).collect();
        path.extend(pb[..j].iter().rev());
        path
    }
}

impl fmt::Display for GraphOfGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::render_spec(self))
    }
}

/// Incremental construction by vertex and edge names.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    vertices: Vec<VertexSpec>,
    edges: Vec<(String, String, String, GroupDesc, Mono, Mono)>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, name: &str, group: GroupDesc) -> Self {
        self.vertices.push(VertexSpec {
            name: name.into(),
            group,
        });
        self
    }

    pub fn edge(
        mut self,
        name: &str,
        from: &str,
        to: &str,
        group: GroupDesc,
        fwd: Mono,
        rev: Mono,
    ) -> Self {
        self.edges
            .push((name.into(), from.into(), to.into(), group, fwd, rev));
        self
    }

    /// An edge with group `Z` and labels `λ(e) = fwd`, `λ(ē) = rev`.
    pub fn label_edge(self, name: &str, from: &str, to: &str, fwd: i64, rev: i64) -> Self {
        self.edge(
            name,
            from,
            to,
            GroupDesc::FreeAbelian(1),
            Mono::scalar(fwd),
            Mono::scalar(rev),
        )
    }

    pub fn build(self) -> Result<GraphOfGroups> {
        let find = |n: &str| {
            self.vertices
                .iter()
                .position(|v| v.name == n)
                .ok_or_else(|| Error::graph("E_UNKNOWN_VERTEX", format!("no vertex `{n}`")))
        };
        let mut edges = Vec::new();
        for (name, from, to, group, fwd, rev) in &self.edges {
            edges.push(EdgeSpec {
                name: name.clone(),
                origin: find(from)?,
                terminus: find(to)?,
                group: group.clone(),
                fwd: fwd.clone(),
                rev: rev.clone(),
            });
        }
        GraphOfGroups::new(self.vertices.clone(), edges)
    }
}

/// A single vertex `Z` with one loop labelled `λ(e) = fwd`, `λ(ē) = rev`.
pub fn gbs_loop(fwd: i64, rev: i64) -> Result<GraphOfGroups> {
    Builder::new()
        .vertex("v", GroupDesc::FreeAbelian(1))
        .label_edge("e", "v", "v", fwd, rev)
        .build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::IMatrix;

    fn bs23() -> GraphOfGroups {
        gbs_loop(3, 2).unwrap()
    }

    #[test]
    fn bs23_flags() {
        let g = bs23();
        let f = g.flags(OEdge::fwd(0));
        assert!(f.is_loop);
        assert_eq!((f.index_fwd, f.index_rev), (Some(3), Some(2)));
        assert!(!f.is_ascending_loop && !f.is_collapsible && !f.is_non_degenerate);
        assert_eq!(g.valence(0), Some(5));
        let c = g.classify();
        assert!(c.reduced && c.non_singular && c.locally_finite && c.is_gbs && !c.is_line);
    }

    #[test]
    fn ascending_loop_flags() {
        let g = gbs_loop(1, 3).unwrap();
        assert!(g.flags(OEdge::fwd(0)).is_ascending_loop);
        assert!(g.classify().single_ascending_loop);
    }

    #[test]
    fn line_shapes() {
        assert!(gbs_loop(1, -1).unwrap().classify().is_line);
        let amalgam = Builder::new()
            .vertex("a", GroupDesc::Cyclic(4))
            .vertex("b", GroupDesc::Cyclic(4))
            .edge(
                "e",
                "a",
                "b",
                GroupDesc::Cyclic(2),
                Mono::Images(vec![Elem::Residue(2)]),
                Mono::Images(vec![Elem::Residue(2)]),
            )
            .build()
            .unwrap();
        assert!(amalgam.classify().is_line);
    }

    #[test]
    fn validation_errors() {
        let err = Builder::new()
            .vertex("v", GroupDesc::FreeAbelian(1))
            .vertex("w", GroupDesc::FreeAbelian(1))
            .build()
            .unwrap_err();
        assert_eq!(err.code(), "E_DISCONNECTED");
        let err = Builder::new()
            .vertex("v", GroupDesc::FreeAbelian(1))
            .label_edge("v", "v", "v", 1, 2)
            .build()
            .unwrap_err();
        assert_eq!(err.code(), "E_DUPLICATE_ID");
        let err = Builder::new()
            .vertex("v", GroupDesc::FreeAbelian(2))
            .edge(
                "e",
                "v",
                "v",
                GroupDesc::FreeAbelian(2),
                Mono::Matrix(IMatrix::from_rows(&[vec![1, 2], vec![2, 4]])),
                Mono::scalar(1),
            )
            .build()
            .unwrap_err();
        assert_eq!(err.code(), "E_NOT_INJECTIVE");
    }

    #[test]
    fn collapse_pendant_gbs_edge() {
        let g = Builder::new()
            .vertex("v", GroupDesc::FreeAbelian(1))
            .vertex("w", GroupDesc::FreeAbelian(1))
            .label_edge("f", "v", "w", 5, 1)
            .label_edge("e", "w", "w", 3, 2)
            .build()
            .unwrap();
        assert!(!g.is_reduced());
        let (r, moves) = g.collapse_reduce();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].removed_vertex, "w");
        assert_eq!(r.vertex_count(), 1);
        assert_eq!(r.edges()[0].fwd, Mono::scalar(15));
        assert_eq!(r.edges()[0].rev, Mono::scalar(10));
        let (again, none) = r.collapse_reduce();
        assert!(none.is_empty());
        assert_eq!(again, r);
    }

    #[test]
    fn tree_paths() {
        let g = Builder::new()
            .vertex("a", GroupDesc::FreeAbelian(1))
            .vertex("b", GroupDesc::FreeAbelian(1))
            .vertex("c", GroupDesc::FreeAbelian(1))
            .label_edge("x", "a", "b", 2, 3)
            .label_edge("y", "a", "c", 2, 3)
            .build()
            .unwrap();
        let p = g.tree_path(1, 2);
        assert_eq!(p, vec![OEdge::fwd(0).bar(), OEdge::fwd(1)]);
        assert!(g.tree_path(2, 2).is_empty());
    }
}
