//! Command-line front end. Every subcommand prints one JSON report to
//! standard output; reports are byte-identical across runs unless
//! `--timing` is passed. Exit status: 0 on success, 1 when a checked
//! certificate turns out invalid, 2 on parse, precondition, or budget
//! errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use arbo::budget::Budget;
use arbo::colouring::{arbp_exact, colour_arbp, verify_colouring, EdgeColouring};
use arbo::completion::complete_to_depth;
use arbo::cycles::Cycle;
use arbo::density::{min_indegree_orientation, Denominator};
use arbo::dual::{arbstar_exact, check_dual_proposition, tree_packing};
use arbo::expansion::{check_blowup_lemma, shallow_minor_density, top_minor_density};
use arbo::gen;
use arbo::io;
use arbo::treedepth::{check_td_cycle_bounds, treedepth_exact};
use arbo::{Error, Multigraph, Result};

#[derive(Parser)]
#[command(name = "arbo", version, about = "Rainbow-cycle edge colourings and sparsity measurements on multigraphs")]
struct Cli {
    /// Append wall-clock timing to the report (no longer byte-identical).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Colourings making every cycle wear many colours.
    #[command(subcommand)]
    Arbp(ArbpCmd),
    /// Exact tree-depth and its cycle-length bounds.
    #[command(subcommand)]
    Td(TdCmd),
    /// Exact density measurements.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Structural inequalities, checked on one instance.
    #[command(subcommand)]
    Lemma(LemmaCmd),
    /// Dual problem: colourings making every cut wear many colours.
    #[command(subcommand)]
    Dual(DualCmd),
    /// Dump a fraternal completion layer by layer.
    Inspect(InspectArgs),
    /// Basic graph facts and DOT export.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Generate graph files from named parameter grids.
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Subcommand)]
enum ArbpCmd {
    /// Run the orientation-completion-conflict pipeline.
    Colour {
        #[arg(long)]
        p: usize,
        /// Also keep edges sharing an endpoint apart.
        #[arg(long)]
        proper: bool,
        graph: PathBuf,
    },
    /// Check a colouring file against the cycle condition.
    Verify {
        #[arg(long)]
        p: usize,
        /// One line per edge: `<edge-index> <colour>`.
        #[arg(long)]
        colours: PathBuf,
        graph: PathBuf,
    },
    /// Brute-force minimum palette.
    Exact {
        #[arg(long)]
        p: usize,
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum TdCmd {
    /// Exact tree-depth with a witness forest.
    Exact { graph: PathBuf },
    /// Tree-depth against the longest-cycle sandwich (2-connected input).
    Bounds { graph: PathBuf },
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Topological-minor density at half-integer depth r = two_r / 2.
    Mtr {
        #[arg(long = "r", value_name = "TWO_R")]
        two_r: usize,
        graph: PathBuf,
    },
    /// Shallow-minor density at integer depth (simple graphs).
    Minor {
        #[arg(long)]
        r: usize,
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum LemmaCmd {
    /// Density of the m-fold blow-up against its base-graph bound.
    Blowup {
        #[arg(long)]
        m: usize,
        #[arg(long = "r", value_name = "TWO_R")]
        two_r: usize,
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum DualCmd {
    /// Brute-force minimum cut palette.
    Exact {
        #[arg(long)]
        p: usize,
        graph: PathBuf,
    },
    /// Pack k edge-disjoint spanning trees.
    Pack {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
    },
    /// Growth of the cut palette on fat cycles, plus the dense case.
    Prop {
        #[arg(long)]
        p: usize,
        /// Fat-cycle lengths to test.
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5])]
        lengths: Vec<usize>,
    },
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    depth: usize,
    graph: PathBuf,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Vertex, edge, and connectivity facts.
    Info { graph: PathBuf },
    /// DOT text on standard output, optionally coloured.
    Dot {
        #[arg(long)]
        colours: Option<PathBuf>,
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Write graph files; default grid unless --spec strings are given.
    Generate {
        #[arg(long)]
        out: PathBuf,
        /// Instance descriptions like "multicycle L=4 p=2".
        #[arg(long)]
        spec: Vec<String>,
        /// Worker threads for file generation.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    match run(&cli.command) {
        Ok(outcome) => {
            let mut report = Map::new();
            report.insert("schema".into(), json!("arbo-report/1"));
            report.insert("command".into(), json!(argv));
            report.insert("budget".into(), budget_value(&Budget::default()));
            if let Some(input) = outcome.input {
                report.insert("input".into(), input);
            }
            report.insert("result".into(), outcome.result);
            if cli.timing {
                report.insert("timing_ms".into(), json!(started.elapsed().as_millis() as u64));
            }
            println!("{}", serde_json::to_string_pretty(&Value::Object(report)).unwrap());
            std::process::exit(outcome.code);
        }
        Err(e) => {
            let kind = match &e {
                Error::Parse { .. } => "parse",
                Error::Budget(_) => "budget",
                Error::Precondition(_) => "precondition",
                Error::Internal(_) => "internal",
            };
            let report = json!({
                "schema": "arbo-report/1",
                "command": argv,
                "error": { "kind": kind, "message": e.to_string() },
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            eprintln!("error: {e}");
            std::process::exit(match e {
                Error::Internal(_) => 1,
                _ => 2,
            });
        }
    }
}

struct Outcome {
    input: Option<Value>,
    result: Value,
    code: i32,
}

fn run(cmd: &Command) -> Result<Outcome> {
    let b = Budget::default();
    match cmd {
        Command::Arbp(c) => run_arbp(c, &b),
        Command::Td(c) => run_td(c, &b),
        Command::Density(c) => run_density(c, &b),
        Command::Lemma(c) => run_lemma(c, &b),
        Command::Dual(c) => run_dual(c, &b),
        Command::Inspect(a) => run_inspect(a, &b),
        Command::Graph(c) => run_graph(c),
        Command::Corpus(c) => run_corpus(c),
    }
}

/// Reads and parses a graph file, returning it with its report entry:
/// path, digest of the exact bytes, and the two size counts.
fn load_graph(path: &Path) -> Result<(Multigraph, Value)> {
    let bytes = fs::read(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    let g = io::parse_multigraph(&String::from_utf8_lossy(&bytes))?;
    let input = json!({
        "path": path.display().to_string(),
        "sha256": sha256_hex(&bytes),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
    });
    Ok((g, input))
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn budget_value(b: &Budget) -> Value {
    json!({
        "max_cycles": b.max_cycles,
        "max_cut_sides": b.max_cut_sides,
        "max_td_vertices": b.max_td_vertices,
        "max_completion_arcs": b.max_completion_arcs,
        "max_search_nodes": b.max_search_nodes,
        "max_generated_vertices": b.max_generated_vertices,
    })
}

fn cycle_value(c: &Cycle) -> Value {
    json!({ "edges": c.edges, "vertices": c.vertices })
}

fn run_arbp(cmd: &ArbpCmd, b: &Budget) -> Result<Outcome> {
    match cmd {
        ArbpCmd::Colour { p, proper, graph } => {
            let (g, input) = load_graph(graph)?;
            let (col, report) = colour_arbp(&g, *p, *proper, b)?;
            let fc = complete_to_depth(min_indegree_orientation(&g), *p, b)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "p": p,
                    "proper": proper,
                    "palette": col.palette_size,
                    "colours": col.colours,
                    "valid": report.valid,
                    "conflict_degree_bound": fc.conflict_degree_bound().to_string(),
                }),
                code: 0,
            })
        }
        ArbpCmd::Verify { p, colours, graph } => {
            let (g, input) = load_graph(graph)?;
            let text = fs::read_to_string(colours).map_err(|e| Error::Parse {
                line: 0,
                message: format!("{}: {e}", colours.display()),
            })?;
            let col = EdgeColouring::new(io::parse_colouring(&text, g.edge_count())?)?;
            let report = verify_colouring(&g, &col, *p, b)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "p": p,
                    "valid": report.valid,
                    "colours_on_cycle": report.colours_on_cycle,
                    "violating_cycle": report.violating_cycle.as_ref().map(cycle_value),
                }),
                code: i32::from(!report.valid),
            })
        }
        ArbpCmd::Exact { p, graph } => {
            let (g, input) = load_graph(graph)?;
            let value = arbp_exact(&g, *p, b)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({ "p": p, "value": value }),
                code: 0,
            })
        }
    }
}

fn run_td(cmd: &TdCmd, b: &Budget) -> Result<Outcome> {
    match cmd {
        TdCmd::Exact { graph } => {
            let (g, input) = load_graph(graph)?;
            let (value, decomp) = treedepth_exact(&g, b)?;
            decomp.verify(&g)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "value": value,
                    "height": decomp.height,
                    "parent": decomp.parent,
                }),
                code: 0,
            })
        }
        TdCmd::Bounds { graph } => {
            let (g, input) = load_graph(graph)?;
            let r = check_td_cycle_bounds(&g, b)?;
            let (_, decomp) = treedepth_exact(&g, b)?;
            decomp.verify(&g)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "treedepth": r.treedepth,
                    "longest_cycle": r.longest_cycle,
                    "lower": r.lower,
                    "upper": r.upper,
                    "lower_slack": r.lower_slack,
                    "upper_slack": r.upper_slack,
                    "parent": decomp.parent,
                }),
                code: 0,
            })
        }
    }
}

fn run_density(cmd: &DensityCmd, b: &Budget) -> Result<Outcome> {
    match cmd {
        DensityCmd::Mtr { two_r, graph } => {
            let (g, input) = load_graph(graph)?;
            let (value, emb) = top_minor_density(&g, *two_r, Denominator::Vertices, b)?;
            emb.verify(&g, *two_r)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "two_r": two_r,
                    "value": value.to_string(),
                    "witness": {
                        "branch_vertices": emb.branch_vertices,
                        "paths": emb.branch_paths,
                    },
                }),
                code: 0,
            })
        }
        DensityCmd::Minor { r, graph } => {
            let (g, input) = load_graph(graph)?;
            let (value, blocks) = shallow_minor_density(&g, *r, b)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "r": r,
                    "value": value.to_string(),
                    "blocks": blocks,
                }),
                code: 0,
            })
        }
    }
}

fn run_lemma(cmd: &LemmaCmd, b: &Budget) -> Result<Outcome> {
    match cmd {
        LemmaCmd::Blowup { m, two_r, graph } => {
            let (g, input) = load_graph(graph)?;
            let check = check_blowup_lemma(&g, *m, *two_r, b)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "m": check.m,
                    "two_r": check.two_r,
                    "blowup_density": check.lhs.to_string(),
                    "base_top_density": check.base_top_density.to_string(),
                    "base_max_density": check.base_max_density.to_string(),
                    "bound": check.rhs.to_string(),
                    "holds": check.holds,
                }),
                code: i32::from(!check.holds),
            })
        }
    }
}

fn run_dual(cmd: &DualCmd, b: &Budget) -> Result<Outcome> {
    match cmd {
        DualCmd::Exact { p, graph } => {
            let (g, input) = load_graph(graph)?;
            let value = arbstar_exact(&g, *p, b)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({ "p": p, "value": value }),
                code: 0,
            })
        }
        DualCmd::Pack { k, graph } => {
            let (g, input) = load_graph(graph)?;
            let trees = tree_packing(&g, *k)?;
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "k": k,
                    "found": trees.is_some(),
                    "trees": trees,
                }),
                code: 0,
            })
        }
        DualCmd::Prop { p, lengths } => {
            // The dense witness is the triangle with every edge (p+1)-fold,
            // which is exactly (2p+2)-edge-connected.
            let dense = gen::multicycle(3, p + 1)?;
            let r = check_dual_proposition(*p, lengths, Some(&dense), b)?;
            let ok = r.growth_holds && r.dense_holds != Some(false);
            Ok(Outcome {
                input: None,
                result: json!({
                    "p": p,
                    "cycle_values": r.cycle_values,
                    "growth_holds": r.growth_holds,
                    "dense_connectivity": r.dense_connectivity,
                    "dense_value": r.dense_value,
                    "dense_holds": r.dense_holds,
                }),
                code: i32::from(!ok),
            })
        }
    }
}

fn run_inspect(args: &InspectArgs, b: &Budget) -> Result<Outcome> {
    let (g, input) = load_graph(&args.graph)?;
    let fc = complete_to_depth(min_indegree_orientation(&g), args.depth, b)?;
    fc.audit()?;
    let cg = fc.conflicts(b)?;
    let layers: Vec<Value> = (1..=fc.depth())
        .map(|w| {
            let arcs: Vec<Value> = fc.layer(w)
                .map(|id| {
                    let a = &fc.arcs[id];
                    json!({
                        "id": id,
                        "tail": a.tail,
                        "head": a.head,
                        "weight": a.weight,
                        "kappa": a.kappa,
                    })
                })
                .collect();
            json!({ "weight": w, "arcs": arcs })
        })
        .collect();
    Ok(Outcome {
        input: Some(input),
        result: json!({
            "depth": fc.depth(),
            "layers": layers,
            "layer_max_indegree": fc.layer_max_indegree,
            "cone_bound": fc.cone_bound().to_string(),
            "conflict_degree_bound": fc.conflict_degree_bound().to_string(),
            "conflict_degree_bound_last_layer": fc.conflict_degree_bound_last_layer().to_string(),
            "max_conflict_in_degree": cg.max_in_degree(),
        }),
        code: 0,
    })
}

fn run_graph(cmd: &GraphCmd) -> Result<Outcome> {
    match cmd {
        GraphCmd::Info { graph } => {
            let (g, input) = load_graph(graph)?;
            let simple = g.simplified();
            Ok(Outcome {
                input: Some(input),
                result: json!({
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "simple_edges": simple.edge_count(),
                    "connected": g.is_connected(),
                }),
                code: 0,
            })
        }
        GraphCmd::Dot { colours, graph } => {
            let (g, _) = load_graph(graph)?;
            let cols = match colours {
                None => None,
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
                        line: 0,
                        message: format!("{}: {e}", path.display()),
                    })?;
                    Some(io::parse_colouring(&text, g.edge_count())?)
                }
            };
            print!("{}", io::to_dot(&g, cols.as_deref()));
            Ok(Outcome {
                input: None,
                result: json!({ "emitted": "dot" }),
                code: 0,
            })
        }
    }
}

/// One corpus instance: a file stem and its graph.
fn parse_spec(spec: &str) -> Result<(String, Multigraph)> {
    let mut words = spec.split_whitespace();
    let family = words.next().ok_or_else(|| Error::Precondition("empty spec".into()))?;
    let mut kv = std::collections::BTreeMap::new();
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| {
            Error::Precondition(format!("expected key=value, got {w:?}"))
        })?;
        let n: usize = v.parse().map_err(|_| {
            Error::Precondition(format!("bad number {v:?} in spec"))
        })?;
        kv.insert(k.to_string(), n);
    }
    let get = |k: &str| {
        kv.get(k).copied().ok_or_else(|| {
            Error::Precondition(format!("spec {family:?} needs {k}="))
        })
    };
    let stem: String = std::iter::once(family.to_string())
        .chain(kv.iter().map(|(k, v)| format!("{k}{v}")))
        .collect::<Vec<_>>()
        .join("_");
    let g = match family {
        "treeclosure" => gen::tree_closure(get("q")?, get("p")?)?,
        "multicycle" => gen::multicycle(get("L")?, get("p")?)?,
        "clique" => gen::clique(get("n")?)?,
        "cycle" => gen::cycle(get("n")?)?,
        "path" => gen::path(get("n")?)?,
        "star" => gen::star(get("k")?)?,
        "theta" => gen::theta(get("paths")?, get("len")?)?,
        "random" => gen::random_multigraph(get("n")?, get("m")?, get("seed")? as u64)?,
        other => {
            return Err(Error::Precondition(format!("unknown family {other:?}")));
        }
    };
    Ok((stem, g))
}

/// The default generation grid, as spec strings.
fn default_grid() -> Vec<String> {
    let mut out = Vec::new();
    for p in 2..=3 {
        out.push(format!("treeclosure q=2 p={p}"));
    }
    for l in 3..=5 {
        for p in 2..=3 {
            out.push(format!("multicycle L={l} p={p}"));
        }
    }
    for n in 4..=5 {
        out.push(format!("clique n={n}"));
    }
    for n in 3..=8 {
        out.push(format!("cycle n={n}"));
    }
    for len in 1..=2 {
        out.push(format!("theta paths=3 len={len}"));
    }
    for seed in 1..=4 {
        out.push(format!("random n=8 m=14 seed={seed}"));
    }
    out
}

fn run_corpus(cmd: &CorpusCmd) -> Result<Outcome> {
    match cmd {
        CorpusCmd::Generate { out, spec, jobs } => {
            let specs = if spec.is_empty() { default_grid() } else { spec.clone() };
            let instances: Vec<(String, Multigraph)> =
                specs.iter().map(|s| parse_spec(s)).collect::<Result<_>>()?;
            fs::create_dir_all(out).map_err(|e| Error::Parse {
                line: 0,
                message: format!("{}: {e}", out.display()),
            })?;
            // Workers split the list by index stride; the report keeps
            // generation order, so --jobs never changes the output.
            let jobs = (*jobs).max(1).min(instances.len().max(1));
            let written: Vec<(String, String, usize, usize)> = std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for worker in 0..jobs {
                    let instances = &instances;
                    let out = out.clone();
                    handles.push(scope.spawn(move || {
                        let mut part = Vec::new();
                        for (i, (stem, g)) in instances.iter().enumerate() {
                            if i % jobs != worker {
                                continue;
                            }
                            let text = io::write_multigraph(g);
                            let path = out.join(format!("{stem}.mg"));
                            fs::write(&path, &text).map_err(|e| Error::Parse {
                                line: 0,
                                message: format!("{}: {e}", path.display()),
                            })?;
                            part.push((i, stem.clone(), sha256_hex(text.as_bytes()),
                                       g.vertex_count(), g.edge_count()));
                        }
                        Ok::<_, Error>(part)
                    }));
                }
                let mut all = Vec::new();
                for h in handles {
                    all.extend(h.join().expect("worker panicked")?);
                }
                all.sort_by_key(|e| e.0);
                Ok::<_, Error>(all.into_iter().map(|(_, s, d, n, m)| (s, d, n, m)).collect())
            })?;
            let files: Vec<Value> = written
                .iter()
                .map(|(stem, digest, n, m)| {
                    json!({
                        "name": stem,
                        "file": format!("{stem}.mg"),
                        "sha256": digest,
                        "vertices": n,
                        "edges": m,
                    })
                })
                .collect();
            Ok(Outcome {
                input: None,
                result: json!({
                    "out": out.display().to_string(),
                    "count": files.len(),
                    "files": files,
                }),
                code: 0,
            })
        }
    }
}
