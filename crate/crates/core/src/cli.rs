//! The `gog` command dispatcher. Exit codes: 0 success, 1 inconclusive verdict,
//! 2 input error, 64 usage error.

use std::fmt::Write as _;

use clap::{error::ErrorKind, Parser, Subcommand};

use crate::boundary::{
    act_exact, act_truncated, north_south_check, parse_point, render_letters, render_point,
    strong_faithful_witness, FaithfulPattern, DEFAULT_STATE_CAP,
};
use crate::error::Error;
use crate::families::{
    analyze, bs_verdict, octopus_build, outbs_graph, outbs_verdict, tubular_verdict, Outcome, TheoremAOptions,
    Verdict,
};
use crate::format::{parse_spec, render_spec};
use crate::graph::{fmt_index, GraphOfGroups, OEdge};
use crate::tree::{ball, export_dot, DEFAULT_BUDGET};
use crate::words::{parse_word, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "gog", version, about = "Graphs of groups: normal forms, Bass-Serre trees, boundary dynamics and C*-simplicity verdicts")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a graph file and print its classification.
    Validate { file: String },
    /// Collapse edges until the graph is reduced and print the result.
    Reduce { file: String },
    /// Run the verdict engine on a graph file.
    Analyze {
        file: String,
        #[arg(long)]
        json: bool,
        /// Assert that the free group at this vertex is acylindrically hyperbolic
        /// with no nontrivial finite normal subgroup.
        #[arg(long = "assume-acyl", value_name = "VERTEX")]
        assume_acyl: Vec<String>,
    },
    /// Sphere sizes of a ball in the Bass-Serre tree.
    Tree {
        file: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_name = "PATH")]
        dot: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        base: Option<String>,
    },
    /// Act by a word on an eventually periodic boundary point.
    Act {
        file: String,
        #[arg(long)]
        element: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        depth: usize,
    },
    /// North-south agreement profile of `s^i · ξ` against `s^∞`.
    Ns {
        file: String,
        #[arg(long)]
        element: String,
        #[arg(long)]
        point: String,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'd')]
        d: usize,
    },
    /// Verdict for BS(p,q).
    #[command(allow_negative_numbers = true)]
    Bs {
        p: i64,
        q: i64,
        #[arg(long)]
        json: bool,
    },
    /// Verdict for Out(BS(p,q)).
    #[command(allow_negative_numbers = true)]
    Outbs {
        p: i64,
        q: i64,
        #[arg(long)]
        json: bool,
        /// Print the ray graph for q = np truncated at v_K instead of a verdict.
        #[arg(long, value_name = "K")]
        graph: Option<usize>,
    },
    /// Verdict for the tubular loop with columns (m1,n1) and (m2,n2).
    #[command(allow_negative_numbers = true)]
    Tubular {
        m1: i64,
        n1: i64,
        m2: i64,
        n2: i64,
        #[arg(long)]
        json: bool,
    },
    /// Print the octopus graph with N tentacles; optionally a faithfulness witness.
    Octopus {
        #[arg(long)]
        n: usize,
        /// Integers at the centre that the witness must move.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        elements: Vec<i64>,
        /// Tentacles the witness must avoid.
        #[arg(long, value_delimiter = ',')]
        avoid: Vec<String>,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn input_error(e: &Error) -> RunOutput {
    RunOutput {
        code: EXIT_INPUT,
        stdout: String::new(),
        stderr: format!("error[{}]: {e}\n", e.code()),
    }
}

fn load(file: &str) -> Result<GraphOfGroups, RunOutput> {
    let text = std::fs::read_to_string(file).map_err(|e| RunOutput {
        code: EXIT_INPUT,
        stdout: String::new(),
        stderr: format!("error[E_IO]: {file}: {e}\n"),
    })?;
    parse_spec(&text).map_err(|e| input_error(&e))
}

fn verdict_output(v: &Verdict, json: bool) -> RunOutput {
    let mut out = String::new();
    if json {
        out = serde_json::to_string_pretty(&v.to_json()).expect("json") + "\n";
    } else {
        let _ = writeln!(out, "{v}");
        if let Some(c) = &v.certificate {
            if let Some(s) = &c.structure {
                let _ = writeln!(out, "structure: {s}");
            }
            if let Some(r) = &c.route {
                let _ = writeln!(out, "route: {r}");
            }
            if let Some(g) = &c.graph {
                if let Some(w) = &c.repeatable {
                    let _ = writeln!(out, "repeatable: {}", crate::words::render_word(g, w));
                }
                if let Some(cw) = &c.conjugator {
                    let _ = writeln!(out, "conjugator: {}", crate::words::render_word(g, &cw.conjugator));
                }
                if let Some((w, d)) = &c.modular {
                    let _ = writeln!(out, "modular: Δ({}) = {d}", crate::words::render_word(g, w));
                }
            }
            if let Some(p) = &c.exponent {
                let _ = writeln!(out, "exponent: m = {}", p.m);
            }
            if let Some(i) = c.i0 {
                let _ = writeln!(out, "i0: {i}");
            }
        }
        for f in &v.assumed_flags {
            let _ = writeln!(out, "assumed: {f}");
        }
        for n in &v.notes {
            let _ = writeln!(out, "note: {n}");
        }
    }
    RunOutput {
        code: if v.outcome == Outcome::Inconclusive {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        },
        stdout: out,
        stderr: String::new(),
    }
}

fn ok(stdout: String) -> RunOutput {
    RunOutput {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}

fn validate(g: &GraphOfGroups) -> String {
    let c = g.classify();
    let mut out = format!(
        "valid: {} vertices, {} edges\n",
        g.vertex_count(),
        g.edge_count()
    );
    for (k, v) in [
        ("gbs", c.is_gbs),
        ("locally_finite", c.locally_finite),
        ("non_singular", c.non_singular),
        ("reduced", c.reduced),
        ("line", c.is_line),
        ("single_ascending_loop", c.single_ascending_loop),
    ] {
        let _ = writeln!(out, "{k}: {v}");
    }
    for oe in g.oriented_edges() {
        let _ = writeln!(out, "index {}: {}", g.oedge_name(oe), fmt_index(g.index(oe)));
    }
    for v in 0..g.vertex_count() {
        let _ = writeln!(out, "valence {}: {}", g.vertex_name(v), fmt_index(g.valence(v)));
    }
    out
}

fn dispatch(cmd: Cmd) -> Result<RunOutput, RunOutput> {
    let inp = |e: Error| input_error(&e);
    Ok(match cmd {
        Cmd::Validate { file } => ok(validate(&load(&file)?)),
        Cmd::Reduce { file } => {
            let (r, moves) = load(&file)?.collapse_reduce();
            let mut out = String::new();
            for m in moves {
                let _ = writeln!(out, "# collapsed {}: {} into {}", m.edge, m.removed_vertex, m.into_vertex);
            }
            out.push_str(&render_spec(&r));
            ok(out)
        }
        Cmd::Analyze {
            file,
            json,
            assume_acyl,
        } => {
            let g = load(&file)?;
            let opts = TheoremAOptions {
                assume_acyl,
                ..TheoremAOptions::default()
            };
            verdict_output(&analyze(&g, &opts).map_err(inp)?, json)
        }
        Cmd::Tree {
            file,
            depth,
            dot,
            budget,
            base,
        } => {
            let g = load(&file)?;
            let v = match base {
                Some(b) => g.vertex_id(&b).ok_or_else(|| {
                    inp(Error::Word(format!("no vertex `{b}`")))
                })?,
                None => 0,
            };
            let b = ball(&g, v, depth, budget);
            let mut out = String::new();
            let sizes: Vec<String> = b.sphere_sizes().iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "spheres: {}", sizes.join(" "));
            let _ = writeln!(out, "nodes: {}", b.nodes.len());
            let _ = writeln!(out, "valence {}: {}", g.vertex_name(v), fmt_index(g.valence(v)));
            if b.truncated {
                let _ = writeln!(out, "truncated: budget {budget} reached");
            }
            if let Some(path) = dot {
                std::fs::write(&path, export_dot(&g, &b)).map_err(|e| RunOutput {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: format!("error[E_IO]: {path}: {e}\n"),
                })?;
                let _ = writeln!(out, "dot: {path}");
            }
            ok(out)
        }
        Cmd::Act {
            file,
            element,
            point,
            depth,
        } => {
            let g = load(&file)?;
            let (s, xi) = word_and_point(&g, &element, &point).map_err(inp)?;
            let head = act_truncated(&g, &s, &xi, depth).map_err(inp)?;
            let mut out = format!("prefix: {}\n", render_letters(&g, s.base, &head));
            match act_exact(&g, &s, &xi, DEFAULT_STATE_CAP).map_err(inp)?.exact {
                Some(p) => {
                    let _ = writeln!(out, "image: {}", render_point(&g, &p));
                }
                None => {
                    let _ = writeln!(out, "image: unknown within {DEFAULT_STATE_CAP} states");
                }
            }
            ok(out)
        }
        Cmd::Ns {
            file,
            element,
            point,
            k,
            d,
        } => {
            let g = load(&file)?;
            let (s, xi) = word_and_point(&g, &element, &point).map_err(inp)?;
            let ns = north_south_check(&g, &s, &xi, k, d).map_err(inp)?;
            let prof: Vec<String> = ns.profile.iter().map(ToString::to_string).collect();
            ok(format!(
                "profile: {}\naway_from_repeller: {}\nresult: {}\n",
                prof.join(" "),
                ns.away_from_repeller,
                if ns.pass { "pass" } else { "fail" }
            ))
        }
        Cmd::Bs { p, q, json } => verdict_output(&bs_verdict(p, q).map_err(inp)?, json),
        Cmd::Outbs { p, q, graph: Some(k), .. } => {
            if p < 1 || q % p != 0 {
                return Err(inp(Error::Unsupported(format!(
                    "the ray graph needs p ≥ 1 dividing q, got ({p},{q})"
                ))));
            }
            ok(render_spec(&outbs_graph(p, q / p, k).map_err(inp)?))
        }
        Cmd::Outbs { p, q, json, .. } => verdict_output(&outbs_verdict(p, q).map_err(inp)?, json),
        Cmd::Tubular {
            m1,
            n1,
            m2,
            n2,
            json,
        } => verdict_output(&tubular_verdict(m1, n1, m2, n2).map_err(inp)?, json),
        Cmd::Octopus { n, elements, avoid } => {
            let g = octopus_build(n).map_err(inp)?;
            let mut out = render_spec(&g);
            let _ = writeln!(out, "# valence c: {}", fmt_index(g.valence(0)));
            if !elements.is_empty() || !avoid.is_empty() {
                let words: Vec<Word> = elements
                    .iter()
                    .map(|x| parse_word(&g, &format!("c:({x})")))
                    .collect::<crate::error::Result<_>>()
                    .map_err(inp)?;
                let avoid: Vec<OEdge> = avoid
                    .iter()
                    .map(|e| g.oedge(e).ok_or_else(|| inp(Error::Word(format!("no edge `{e}`")))))
                    .collect::<Result<_, _>>()?;
                let w = strong_faithful_witness(&g, 0, &words, &avoid, FaithfulPattern::OctopusPrime, 16, DEFAULT_STATE_CAP)
                    .map_err(inp)?;
                match w {
                    Some(w) => {
                        let _ = writeln!(out, "# witness: {} point {}", w.detail, render_point(&g, &w.point));
                    }
                    None => {
                        let _ = writeln!(out, "# witness: none (add tentacles)");
                    }
                }
            }
            ok(out)
        }
    })
}

fn word_and_point(
    g: &GraphOfGroups,
    element: &str,
    point: &str,
) -> crate::error::Result<(Word, crate::boundary::BoundaryPoint)> {
    Ok((parse_word(g, element)?, parse_point(g, point)?))
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ok(text),
                _ => RunOutput {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    dispatch(cli.cmd).unwrap_or_else(|e| e)
}
