//! Text format for graphs of groups.
//!
//! ```text
//! file      = { line } ;
//! line      = [ directive ] [ "#" comment ] ;
//! directive = "vertex" id group
//!           | "edge" id id id [ group ]          (* name, origin, terminus, edge group *)
//!           | "mono" id side mono
//!           | "label" id side int ;               (* shorthand for Z -> Z, x ↦ int·x *)
//! side      = "fwd" | "rev" ;                     (* α_e into the origin, α_ē into the terminus *)
//! group     = "Z^" n | "Z" | "Z/" m | "Z/" m ":Z2" | "F" r ;
//! mono      = "scalar" int
//!           | "matrix" "[[" int { "," int } "]" { ",[" ... "]" } "]"   (* columns are generator images *)
//!           | "images" elem { ";" elem } ;        (* one image per domain generator *)
//! ```
//!
//! When the edge group is omitted it is inferred: `Z` for labels, the vertex group
//! for `scalar`, `Z^k` for a matrix with `k` columns, `Z` for a single image in a
//! free group. Finite edge groups must be declared.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactmath::{IMatrix, Int};
use crate::groups::{render_elem, Elem, Embedding, GroupDesc, Mono};
use crate::graph::{EdgeSpec, GraphOfGroups, VertexSpec};

fn perr(code: &'static str, line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        code,
        line,
        col,
        msg: msg.into(),
    }
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

#[derive(Clone, Debug)]
enum RawMono {
    Scalar(Int),
    Matrix(IMatrix),
    Images(Vec<String>),
    Label(Int),
}

struct RawEdge {
    name: String,
    from: (usize, usize, String),
    to: (usize, usize, String),
    group: Option<GroupDesc>,
    line: usize,
    sides: [Option<(usize, usize, RawMono)>; 2],
}

fn parse_matrix(s: &str) -> Option<IMatrix> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
    let mut rows = Vec::new();
    for part in inner.split(']') {
        let part = part.trim().trim_start_matches(',').trim();
        if part.is_empty() {
            continue;
        }
        let body = part.strip_prefix('[')?;
        let row: Option<Vec<Int>> = body.split(',').map(|x| x.trim().parse().ok()).collect();
        rows.push(row?);
    }
    IMatrix::from_int_rows(rows).ok().filter(|m| m.rows() > 0 && m.cols() > 0)
}

pub fn parse_spec(text: &str) -> Result<GraphOfGroups> {
    let mut vertices: Vec<VertexSpec> = Vec::new();
    let mut vindex: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    let mut eindex: HashMap<String, usize> = HashMap::new();
    let mut pending: Vec<(usize, usize, String, usize, usize, RawMono)> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(c0, kw)) = toks.first() else { continue };
        let need = |n: usize| {
            if toks.len() < n {
                Err(perr("E_SYNTAX", ln, c0, format!("`{kw}` needs {} arguments", n - 1)))
            } else {
                Ok(())
            }
        };
        match kw {
            "vertex" => {
                need(3)?;
                if toks.len() > 3 {
                    return Err(perr("E_SYNTAX", ln, toks[3].0, "unexpected token"));
                }
                let (cn, name) = toks[1];
                let group: GroupDesc = toks[2]
                    .1
                    .parse()
                    .map_err(|e: Error| perr("E_GROUP_SPEC", ln, toks[2].0, e.to_string()))?;
                if vindex.contains_key(name) || eindex.contains_key(name) {
                    return Err(perr("E_DUPLICATE_ID", ln, cn, format!("`{name}` is declared twice")));
                }
                vindex.insert(name.to_string(), vertices.len());
                vertices.push(VertexSpec {
                    name: name.to_string(),
                    group,
                });
            }
            "edge" => {
                need(4)?;
                if toks.len() > 5 {
                    return Err(perr("E_SYNTAX", ln, toks[5].0, "unexpected token"));
                }
                let (cn, name) = toks[1];
                if vindex.contains_key(name) || eindex.contains_key(name) {
                    return Err(perr("E_DUPLICATE_ID", ln, cn, format!("`{name}` is declared twice")));
                }
                let group = match toks.get(4) {
                    Some(&(c, s)) => Some(
                        s.parse::<GroupDesc>()
                            .map_err(|e| perr("E_GROUP_SPEC", ln, c, e.to_string()))?,
                    ),
                    None => None,
                };
                eindex.insert(name.to_string(), edges.len());
                edges.push(RawEdge {
                    name: name.to_string(),
                    from: (ln, toks[2].0, toks[2].1.to_string()),
                    to: (ln, toks[3].0, toks[3].1.to_string()),
                    group,
                    line: ln,
                    sides: [None, None],
                });
            }
            "mono" | "label" => {
                need(4)?;
                let (ce, ename) = toks[1];
                let (cs, side) = toks[2];
                let side = match side {
                    "fwd" => 0,
                    "rev" => 1,
                    _ => return Err(perr("E_SYNTAX", ln, cs, "expected `fwd` or `rev`")),
                };
                let (cm, first) = toks[3];
                let mono = if kw == "label" {
                    if toks.len() > 4 {
                        return Err(perr("E_SYNTAX", ln, toks[4].0, "unexpected token"));
                    }
                    RawMono::Label(
                        first
                            .parse()
                            .map_err(|_| perr("E_SYNTAX", ln, cm, "expected an integer label"))?,
                    )
                } else {
                    let rest_col = toks.get(4).map_or(cm, |t| t.0);
                    let rest = toks[4..].iter().map(|t| t.1).collect::<Vec<_>>().join(" ");
                    match first {
                        "scalar" => RawMono::Scalar(
                            rest.trim()
                                .parse()
                                .map_err(|_| perr("E_SYNTAX", ln, rest_col, "expected an integer"))?,
                        ),
                        "matrix" => RawMono::Matrix(parse_matrix(&rest).ok_or_else(|| {
                            perr("E_SYNTAX", ln, rest_col, "expected a matrix like [[1,0],[0,1]]")
                        })?),
                        "images" => {
                            let imgs: Vec<String> =
                                rest.split(';').map(|s| s.trim().to_string()).collect();
                            if imgs.iter().any(String::is_empty) {
                                return Err(perr("E_SYNTAX", ln, rest_col, "empty image"));
                            }
                            RawMono::Images(imgs)
                        }
                        _ => {
                            return Err(perr(
                                "E_SYNTAX",
                                ln,
                                cm,
                                "expected `scalar`, `matrix` or `images`",
                            ))
                        }
                    }
                };
                pending.push((ln, ce, ename.to_string(), side, cm, mono));
            }
            _ => return Err(perr("E_SYNTAX", ln, c0, format!("unknown directive `{kw}`"))),
        }
    }

    for (ln, ce, ename, side, cm, mono) in pending {
        let &i = eindex
            .get(&ename)
            .ok_or_else(|| perr("E_UNKNOWN_EDGE", ln, ce, format!("no edge `{ename}`")))?;
        if edges[i].sides[side].is_some() {
            return Err(perr(
                "E_DUPLICATE_MONO",
                ln,
                ce,
                format!("second monomorphism for `{ename}` {}", ["fwd", "rev"][side]),
            ));
        }
        edges[i].sides[side] = Some((ln, cm, mono));
    }

    let vlookup = |(ln, c, name): &(usize, usize, String)| {
        vindex
            .get(name)
            .copied()
            .ok_or_else(|| perr("E_UNKNOWN_VERTEX", *ln, *c, format!("no vertex `{name}`")))
    };
    let mut specs = Vec::new();
    for e in &edges {
        let origin = vlookup(&e.from)?;
        let terminus = vlookup(&e.to)?;
        let ends = [origin, terminus];
        let mut sides = Vec::new();
        for (s, side) in e.sides.iter().enumerate() {
            let side = side.as_ref().ok_or_else(|| {
                perr(
                    "E_MONO_MISSING",
                    e.line,
                    1,
                    format!("edge `{}` has no {} monomorphism", e.name, ["fwd", "rev"][s]),
                )
            })?;
            sides.push((side.clone(), &vertices[ends[s]].group));
        }
        let group = match &e.group {
            Some(g) => g.clone(),
            None => infer_edge_group(&sides).ok_or_else(|| {
                perr(
                    "E_EDGE_GROUP",
                    e.line,
                    1,
                    format!("cannot infer the group of edge `{}`; declare it", e.name),
                )
            })?,
        };
        let mut monos = Vec::new();
        for ((ln, c, raw), target) in &sides {
            let mono = match raw {
                RawMono::Scalar(k) | RawMono::Label(k) => Mono::Scalar(k.clone()),
                RawMono::Matrix(m) => Mono::Matrix(m.clone()),
                RawMono::Images(list) => Mono::Images(
                    list.iter()
                        .map(|s| target.parse_elem(s))
                        .collect::<Result<Vec<Elem>>>()
                        .map_err(|x| perr("E_ELEMENT", *ln, *c, x.to_string()))?,
                ),
            };
            if matches!(raw, RawMono::Label(_)) && group != GroupDesc::FreeAbelian(1) {
                return Err(perr("E_MONO_DOMAIN", *ln, *c, "labels need edge group Z"));
            }
            Embedding::new(&group, target, &mono).map_err(|x| {
                let msg = match &x {
                    Error::Graph { msg, .. } => msg.clone(),
                    other => other.to_string(),
                };
                perr(x.code(), *ln, *c, msg)
            })?;
            monos.push(mono);
        }
        let rev = monos.pop().expect("two sides");
        let fwd = monos.pop().expect("two sides");
        specs.push(EdgeSpec {
            name: e.name.clone(),
            origin,
            terminus,
            group,
            fwd,
            rev,
        });
    }
    GraphOfGroups::new(vertices, specs).map_err(|x| {
        let msg = match &x {
            Error::Graph { msg, .. } => msg.clone(),
            other => other.to_string(),
        };
        perr(x.code(), 1, 1, msg)
    })
}

fn infer_edge_group(sides: &[((usize, usize, RawMono), &GroupDesc)]) -> Option<GroupDesc> {
    sides.iter().find_map(|((_, _, raw), target)| match (raw, target) {
        (RawMono::Label(_), _) => Some(GroupDesc::FreeAbelian(1)),
        (RawMono::Scalar(_), GroupDesc::FreeAbelian(n)) => Some(GroupDesc::FreeAbelian(*n)),
        (RawMono::Matrix(m), _) => Some(GroupDesc::FreeAbelian(m.cols())),
        (RawMono::Images(v), GroupDesc::Free(_)) if v.len() == 1 => Some(GroupDesc::FreeAbelian(1)),
        _ => None,
    })
}

fn render_mono(group: &GroupDesc, target: &GroupDesc, m: &Mono) -> (bool, String) {
    match m {
        Mono::Scalar(k)
            if *group == GroupDesc::FreeAbelian(1) && *target == GroupDesc::FreeAbelian(1) =>
        {
            (true, k.to_string())
        }
        Mono::Scalar(k) => (false, format!("scalar {k}")),
        Mono::Matrix(a) => (false, format!("matrix {a}")),
        Mono::Images(v) => (
            false,
            format!(
                "images {}",
                v.iter().map(render_elem).collect::<Vec<_>>().join(";")
            ),
        ),
    }
}

/// Canonical text; `parse_spec(render_spec(g)) == g`.
pub fn render_spec(g: &GraphOfGroups) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {} {}\n", v.name, v.group));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "edge {} {} {} {}\n",
            e.name,
            g.vertex_name(e.origin),
            g.vertex_name(e.terminus),
            e.group
        ));
        for (side, mono, v) in [("fwd", &e.fwd, e.origin), ("rev", &e.rev, e.terminus)] {
            let (is_label, body) = render_mono(&e.group, g.group(v), mono);
            let kw = if is_label { "label" } else { "mono" };
            out.push_str(&format!("{kw} {} {side} {body}\n", e.name));
        }
    }
    out
}
