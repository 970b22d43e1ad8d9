//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export has a native twin returning `Result<String, String>` so the
//! logic is testable without a browser.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use bass_serre::boundary::{north_south_check, parse_point};
use bass_serre::families::{analyze, bs_verdict, outbs_verdict, TheoremAOptions};
use bass_serre::format::parse_spec;
use bass_serre::graph::fmt_index;
use bass_serre::tree::{ball, TreeBall};
use bass_serre::words::{parse_word, render_word};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Node cap for the demo; balls in infinite-valence trees are cut here.
pub const WEB_BUDGET: usize = 4_000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Sphere sizes and nodes of the ball of radius `depth` around the first vertex.
pub fn tree_ball_json_native(spec: &str, depth: usize) -> Result<String, String> {
    let g = parse_spec(spec).map_err(err)?;
    let b = ball(&g, 0, depth, WEB_BUDGET);
    let nodes: Vec<_> = b
        .nodes
        .iter()
        .map(|n| json!({"word": render_word(&g, &n.word), "depth": n.depth, "parent": n.parent}))
        .collect();
    Ok(json!({
        "spheres": b.sphere_sizes(),
        "valence": fmt_index(g.valence(0)),
        "truncated": b.truncated,
        "nodes": nodes,
    })
    .to_string())
}

fn leaf_counts(b: &TreeBall) -> Vec<usize> {
    let mut c = vec![1; b.nodes.len()];
    for i in (0..b.nodes.len()).rev() {
        if !b.nodes[i].children.is_empty() {
            c[i] = b.nodes[i].children.iter().map(|&j| c[j]).sum();
        }
    }
    c
}

/// Radial drawing: each node gets an angular sector proportional to its leaf count.
pub fn tree_ball_svg_native(spec: &str, depth: usize) -> Result<String, String> {
    let g = parse_spec(spec).map_err(err)?;
    let b = ball(&g, 0, depth, WEB_BUDGET);
    let leaves = leaf_counts(&b);
    let ring = 70.0;
    let half = ring * depth.max(1) as f64 + 20.0;
    let mut pos = vec![(0.0f64, 0.0f64); b.nodes.len()];
    let mut sector = vec![(0.0f64, TAU); b.nodes.len()];
    for i in 0..b.nodes.len() {
        let (lo, hi) = sector[i];
        let mut start = lo;
        for &j in &b.nodes[i].children {
            let w = (hi - lo) * leaves[j] as f64 / leaves[i] as f64;
            sector[j] = (start, start + w);
            let a = start + w / 2.0;
            let r = ring * b.nodes[j].depth as f64;
            pos[j] = (r * a.cos(), r * a.sin());
            start += w;
        }
    }
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        -half,
        -half,
        2.0 * half,
        2.0 * half
    );
    for (j, n) in b.nodes.iter().enumerate() {
        if let Some(p) = n.parent {
            let _ = write!(
                s,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#789\" stroke-width=\"0.6\"/>",
                pos[p].0, pos[p].1, pos[j].0, pos[j].1
            );
        }
    }
    for (j, n) in b.nodes.iter().enumerate() {
        let label = render_word(&g, &n.word)
            .replace('&', "&amp;")
            .replace('<', "&lt;");
        let _ = write!(
            s,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"{}\" fill=\"#{}\"><title>{label}</title></circle>",
            pos[j].0,
            pos[j].1,
            if n.depth == 0 { 4 } else { 2 },
            if n.depth == 0 { "c33" } else { "246" }
        );
    }
    s.push_str("</svg>");
    Ok(s)
}

pub fn ns_profile_native(spec: &str, element: &str, point: &str, k: usize, d: usize) -> Result<String, String> {
    let g = parse_spec(spec).map_err(err)?;
    let s = parse_word(&g, element).map_err(err)?;
    let xi = parse_point(&g, point).map_err(err)?;
    let ns = north_south_check(&g, &s, &xi, k, d).map_err(err)?;
    Ok(json!({
        "profile": ns.profile,
        "away_from_repeller": ns.away_from_repeller,
        "pass": ns.pass,
        "depth": d,
    })
    .to_string())
}

pub fn analyze_native(spec: &str) -> Result<String, String> {
    let g = parse_spec(spec).map_err(err)?;
    let v = analyze(&g, &TheoremAOptions::default()).map_err(err)?;
    Ok(v.to_json().to_string())
}

/// `rows[i][j]` is the verdict for `(p, q) = (i + 1, j + 1)`, both from 1 to `max`.
pub fn verdict_table_native(kind: &str, max: i64) -> Result<String, String> {
    let mut rows = Vec::new();
    for p in 1..=max {
        let mut row = Vec::new();
        for q in 1..=max {
            let v = match kind {
                "bs" => bs_verdict(p, q),
                "outbs" => outbs_verdict(p, q),
                _ => return Err(format!("unknown table `{kind}`")),
            }
            .map_err(err)?;
            row.push(v.to_string());
        }
        rows.push(row);
    }
    Ok(json!({"kind": kind, "max": max, "rows": rows}).to_string())
}

#[wasm_bindgen]
pub fn tree_ball_json(spec: &str, depth: usize) -> Result<String, JsValue> {
    tree_ball_json_native(spec, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn tree_ball_svg(spec: &str, depth: usize) -> Result<String, JsValue> {
    tree_ball_svg_native(spec, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ns_profile(spec: &str, element: &str, point: &str, k: usize, d: usize) -> Result<String, JsValue> {
    ns_profile_native(spec, element, point, k, d).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze_spec(spec: &str) -> Result<String, JsValue> {
    analyze_native(spec).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verdict_table(kind: &str, max: i64) -> Result<String, JsValue> {
    verdict_table_native(kind, max).map_err(|e| JsValue::from_str(&e))
}
