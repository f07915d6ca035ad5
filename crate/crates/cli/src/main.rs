//! `tlkit`: command-line front end for tlkit-core.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tlkit_core::generate::{generate, parse_corpus, GeneratorSpec};
use tlkit_core::layering::{canonical_tree, cluster_metrics, layering_partition, tree_additive_deviation};
use tlkit_core::params::cycles::{
    bridging_geodesic_constant, cbc_exact, cycle_bridging_constant, enumerate_simple_cycles, glc_oracle, CycleCaps,
    GlcCaps,
};
use tlkit_core::params::fatminor::{fat_minor_construct, fat_minor_verify};
use tlkit_core::params::mccarty::{balanced_separator_for_set, SeparatorMethod};
use tlkit_core::report::{compute_report, run_corpus, Caps, Group, ReportOptions, Verdict};
use tlkit_core::treedec::{
    decomposition_metrics, expanded_cluster_decomposition, tl_tb_oracle, validate_decomposition,
};
use tlkit_core::{DistanceMatrix, Graph, Vertex};

#[derive(Parser)]
#[command(name = "tlkit", version, about = "Tree-likeness parameters of graphs")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct CapFlags {
    /// Largest graph handed to the tree-length oracle.
    #[arg(long, default_value_t = tlkit_core::treedec::DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    /// Cycles enumerated before bgc/glc degrade to lower bounds.
    #[arg(long, default_value_t = CycleCaps::default().max_cycles)]
    cycle_cap: usize,
    /// Subsets examined per McCarty order.
    #[arg(long, default_value_t = tlkit_core::params::mccarty::DEFAULT_SUBSET_CAP)]
    subset_cap: u64,
    /// Skip the classical ledger rows.
    #[arg(long)]
    no_prior: bool,
    /// Skip the cluster, bottleneck and cycle ledger rows.
    #[arg(long)]
    no_main: bool,
}

impl CapFlags {
    fn options(&self, seed: u64) -> ReportOptions {
        let mut groups = Vec::new();
        if !self.no_prior {
            groups.push(Group::Prior);
        }
        if !self.no_main {
            groups.push(Group::Main);
        }
        ReportOptions {
            caps: Caps {
                oracle: self.oracle_cap,
                subset: self.subset_cap,
                cycles: CycleCaps { max_cycles: self.cycle_cap, ..CycleCaps::default() },
                ..Caps::default()
            },
            groups,
            seed,
            ..ReportOptions::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Layering,
    Exhaustive,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a parameter report and evaluate the bound ledger.
    Compute {
        /// Edge-list file, or `-` for standard input.
        graph: String,
        /// Restrict per-source quantities to this vertex.
        #[arg(long)]
        source: Option<u64>,
        /// Comma-separated entry names.
        #[arg(long, value_delimiter = ',')]
        params: Option<Vec<String>>,
        #[command(flatten)]
        caps: CapFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Exact tree-length and tree-breadth with witness orderings.
    Oracle {
        graph: String,
        #[arg(long, default_value_t = tlkit_core::treedec::DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Expanded cluster decomposition from a source.
    Decompose {
        graph: String,
        #[arg(long)]
        source: u64,
        /// Write the decomposition JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Balanced disk separator for a vertex set.
    Separator {
        graph: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long, value_enum)]
        method: Method,
        /// Layering source (layering method only, default: smallest vertex).
        #[arg(long)]
        source: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Canonical spanning tree of a layering partition.
    Canonical {
        graph: String,
        #[arg(long)]
        source: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Construct and verify a fat triangle-minor witness.
    Fatminor {
        graph: String,
        #[arg(long)]
        source: u64,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Cycle constants from simple-cycle enumeration.
    Cycles {
        graph: String,
        #[arg(long, default_value_t = CycleCaps::default().max_cycles)]
        max_cycles: usize,
        /// Longest cycle to enumerate (0: no limit).
        #[arg(long, default_value_t = 0)]
        max_len: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the ledger on a graph or a generated corpus; exits 2 on a violation.
    Verify {
        #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
        graph: Option<String>,
        /// Corpus spec, e.g. `random:count=100,maxn=10,seed=7;cycles:max=12`.
        #[arg(long)]
        corpus: Option<String>,
        #[command(flatten)]
        caps: CapFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Print a generated graph as an edge list.
    Generate {
        /// Family name, e.g. `cycle`, `random-connected`, `double-cycle`.
        family: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        blocks: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

fn read_graph(path: &str) -> Result<Graph, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| input_error(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))?
    };
    Graph::parse(&text).map_err(|e| input_error(format!("{path}: {e}")))
}

fn vertex(g: &Graph, label: u64) -> Result<Vertex, Failure> {
    g.labels().binary_search(&label).map_err(|_| input_error(format!("vertex {label} is not in the graph")))
}

fn labels(g: &Graph, vs: &[Vertex]) -> Vec<u64> {
    vs.iter().map(|&v| g.label(v)).collect()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes") + "\n"
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let mut out = String::new();
    let mut code = 0;
    match cli.command {
        Command::Compute { graph, source, params, caps, common } => {
            let g = read_graph(&graph)?;
            let mut opts = caps.options(common.seed);
            opts.params = params;
            let unknown = opts.unknown_params();
            if !unknown.is_empty() {
                return Err(input_error(format!("unknown parameters: {}", unknown.join(", "))));
            }
            if let Some(s) = source {
                opts.sources = Some(vec![vertex(&g, s)?]);
            }
            let r = compute_report(&g, &opts);
            if common.json {
                out = r.to_json() + "\n";
            } else {
                let _ = writeln!(out, "graph: n={} m={} sha256={}", r.graph.n, r.graph.m, r.graph.hash);
                for e in &r.params {
                    let value = e.value.map_or("-".into(), |v| v.to_string());
                    let hi = e.hi.map_or("inf".into(), |h| h.to_string());
                    let _ = writeln!(
                        out,
                        "{:<10} {:>5}  {:<8} [{}, {}]",
                        e.name,
                        value,
                        format!("{:?}", e.status).to_lowercase(),
                        e.lo,
                        hi
                    );
                }
                let count = |v| r.ledger.iter().filter(|l| l.verdict == v).count();
                let _ = writeln!(
                    out,
                    "ledger: {} hold, {} violated, {} not evaluable",
                    count(Verdict::Holds),
                    count(Verdict::Violated),
                    count(Verdict::NotEvaluable)
                );
            }
        }
        Command::Oracle { graph, oracle_cap, common } => {
            let g = read_graph(&graph)?;
            let dist = DistanceMatrix::new(&g);
            let o = tl_tb_oracle(&g, &dist, oracle_cap).map_err(input_error)?;
            if common.json {
                out = pretty(&json!({
                    "tl": o.tl, "tb": o.tb,
                    "tl_order": labels(&g, &o.tl_order), "tb_order": labels(&g, &o.tb_order),
                }));
            } else {
                let _ = writeln!(out, "tl = {} (order {:?})", o.tl, labels(&g, &o.tl_order));
                let _ = writeln!(out, "tb = {} (order {:?})", o.tb, labels(&g, &o.tb_order));
            }
        }
        Command::Decompose { graph, source, out: path, common } => {
            let g = read_graph(&graph)?;
            let dist = DistanceMatrix::new(&g);
            let s = vertex(&g, source)?;
            let mut td = expanded_cluster_decomposition(&g, &dist, s);
            validate_decomposition(&g, &td).expect("expanded cluster decompositions are valid");
            let m = decomposition_metrics(&g, &dist, &td);
            for bag in &mut td.bags {
                *bag = bag.iter().map(|&v| g.label(v) as Vertex).collect();
            }
            let td_json = serde_json::to_string(&td).expect("json serializes") + "\n";
            match &path {
                Some(p) => std::fs::write(p, &td_json).map_err(|e| input_error(format!("{}: {e}", p.display())))?,
                None if common.json => out.push_str(&td_json),
                None => {
                    for (i, bag) in td.bags.iter().enumerate() {
                        let _ = writeln!(out, "bag {i}: {bag:?}");
                    }
                    for (a, b) in &td.tree {
                        let _ = writeln!(out, "edge {a} {b}");
                    }
                }
            }
            if !common.json || path.is_some() {
                let opt = |x: Option<u32>| x.map_or("disconnected bag".into(), |v| v.to_string());
                let _ = writeln!(
                    out,
                    "length {} breadth {} inner length {} inner breadth {}",
                    m.length,
                    m.breadth,
                    opt(m.inner_length),
                    opt(m.inner_breadth)
                );
            }
        }
        Command::Separator { graph, set, method, source, common } => {
            let g = read_graph(&graph)?;
            let dist = DistanceMatrix::new(&g);
            let set: Vec<Vertex> = set.iter().map(|&x| vertex(&g, x)).collect::<Result<_, _>>()?;
            let method = match method {
                Method::Exhaustive => SeparatorMethod::Exhaustive,
                Method::Layering => SeparatorMethod::Layering(source.map_or(Ok(0), |s| vertex(&g, s))?),
            };
            let c = balanced_separator_for_set(&g, &dist, &set, method).map_err(input_error)?;
            let v = json!({
                "center": g.label(c.center), "radius": c.radius,
                "set": labels(&g, &c.set), "component_loads": c.component_loads,
                "balanced": c.recertify(&g, &dist),
            });
            if common.json {
                out = pretty(&v);
            } else {
                let _ = writeln!(out, "disk of radius {} around {}", c.radius, g.label(c.center));
                let _ = writeln!(out, "component loads {:?} of {}", c.component_loads, c.set.len());
            }
        }
        Command::Canonical { graph, source, common } => {
            let g = read_graph(&graph)?;
            let dist = DistanceMatrix::new(&g);
            let s = vertex(&g, source)?;
            let lp = layering_partition(&g, &dist, s);
            let h = canonical_tree(&g, &lp);
            let dev = tree_additive_deviation(&dist, &h.edges()).expect("canonical trees span");
            let delta_s = cluster_metrics(&dist, &lp).diameter;
            if common.json {
                let edges: Vec<[u64; 2]> = h.edges().iter().map(|&(p, c)| [g.label(p), g.label(c)]).collect();
                out = pretty(&json!({
                    "root": g.label(s), "edges": edges, "delta_s": delta_s,
                    "max_over": dev.max_over, "max_under": dev.max_under,
                }));
            } else {
                out = h.to_edge_list(&g);
                let _ = writeln!(out, "# delta_s {delta_s} max_over {} max_under {}", dev.max_over, dev.max_under);
            }
        }
        Command::Fatminor { graph, source, k, common } => {
            let g = read_graph(&graph)?;
            let dist = DistanceMatrix::new(&g);
            let s = vertex(&g, source)?;
            let w = fat_minor_construct(&g, &dist, s, k).map_err(input_error)?;
            let verdict = fat_minor_verify(&g, &dist, &w, k);
            let v = json!({
                "k": k,
                "h1": labels(&g, &w.h1), "h2": labels(&g, &w.h2), "h3": labels(&g, &w.h3),
                "p12": labels(&g, &w.p12), "p23": labels(&g, &w.p23), "p13": labels(&g, &w.p13),
                "verified": verdict.is_ok(),
                "violation": verdict.as_ref().err().map(|e| e.to_string()),
            });
            if common.json {
                out = pretty(&v);
            } else {
                for key in ["h1", "h2", "h3", "p12", "p23", "p13"] {
                    let _ = writeln!(out, "{key}: {}", v[key]);
                }
                match &verdict {
                    Ok(()) => {
                        let _ = writeln!(out, "verified at K = {k}");
                    }
                    Err(e) => {
                        let _ = writeln!(out, "not verified: {e}");
                    }
                }
            }
        }
        Command::Cycles { graph, max_cycles, max_len, common } => {
            let g = read_graph(&graph)?;
            let dist = DistanceMatrix::new(&g);
            let caps = CycleCaps { max_cycles, max_len, ..CycleCaps::default() };
            let e = enumerate_simple_cycles(&g, caps);
            let (cbc_enum, cbc_status) = cycle_bridging_constant(&g, &dist, caps);
            let (bgc, bgc_status) = bridging_geodesic_constant(&g, &dist, caps);
            let (glc, _, glc_status) = glc_oracle(&g, &dist, GlcCaps { cycles: caps, ..GlcCaps::default() });
            let status = |s: tlkit_core::Status| format!("{s:?}").to_lowercase();
            let v = json!({
                "cycles": e.cycles.len(), "truncated": e.truncated,
                "cbc": cbc_exact(&g, &dist),
                "cbc_enumerated": {"value": cbc_enum, "status": status(cbc_status)},
                "bgc": {"value": bgc, "status": status(bgc_status)},
                "glc": {"value": glc, "status": status(glc_status)},
            });
            if common.json {
                out = pretty(&v);
            } else {
                let _ = writeln!(out, "{} cycles{}", e.cycles.len(), if e.truncated { " (truncated)" } else { "" });
                let _ = writeln!(out, "cbc {} (enumeration {cbc_enum}, {})", v["cbc"], status(cbc_status));
                let _ = writeln!(out, "bgc {bgc} ({})", status(bgc_status));
                let _ = writeln!(out, "glc {glc} ({})", status(glc_status));
            }
        }
        Command::Verify { graph, corpus, caps, common } => {
            let opts = caps.options(common.seed);
            if let Some(spec) = corpus {
                let specs = parse_corpus(&spec).map_err(input_error)?;
                let s = run_corpus(&specs, &opts);
                if s.violated > 0 {
                    code = 2;
                }
                if common.json {
                    out = s.to_json() + "\n";
                } else {
                    let _ = writeln!(
                        out,
                        "{} graphs, {} errors: {} hold, {} violated, {} not evaluable",
                        s.graphs, s.errors, s.holds, s.violated, s.not_evaluable
                    );
                    for e in s.entries.iter().filter(|e| e.error.is_some()) {
                        let _ = writeln!(out, "error in {}: {}", e.spec, e.error.as_ref().unwrap());
                    }
                    if let Some(v) = &s.first_violation {
                        let at = v.instance.as_deref().map(|i| format!(" at {i}")).unwrap_or_default();
                        let _ = writeln!(
                            out,
                            "first violation: {} on {}{at}: {} vs {}",
                            v.id, v.spec, v.lhs_value, v.rhs_value
                        );
                        out.push_str(&v.edge_list);
                    }
                }
            } else {
                let g = read_graph(graph.as_deref().expect("clap enforces graph or corpus"))?;
                let r = compute_report(&g, &opts);
                if r.ledger.iter().any(|l| l.verdict == Verdict::Violated) {
                    code = 2;
                }
                if common.json {
                    out = serde_json::to_string_pretty(&r.ledger).expect("json serializes") + "\n";
                } else {
                    for l in &r.ledger {
                        let at = l.instance.as_deref().map(|i| format!(" [{i}]")).unwrap_or_default();
                        let _ = writeln!(
                            out,
                            "{:<13} {:<26} {} {} {} : {} vs {}{at}",
                            format!("{:?}", l.verdict).to_lowercase(),
                            l.id,
                            l.lhs,
                            l.relation,
                            l.rhs,
                            l.lhs_value,
                            l.rhs_value
                        );
                    }
                }
            }
        }
        Command::Generate { family, n, m, p, q, k, blocks, common } => {
            let params: Vec<(&str, u64)> = [("n", n), ("m", m), ("p", p), ("q", q), ("k", k), ("blocks", blocks)]
                .into_iter()
                .filter_map(|(name, v)| v.map(|v| (name, v)))
                .collect();
            let spec = GeneratorSpec::from_parts(&family, &params, common.seed).map_err(input_error)?;
            let g = generate(&spec).map_err(input_error)?;
            if common.json {
                let edges: Vec<[u64; 2]> = g.edges().map(|(u, v)| [g.label(u), g.label(v)]).collect();
                out = pretty(&json!({ "spec": spec.to_string(), "n": g.n(), "edges": edges }));
            } else {
                out = format!("# {spec}\n") + &g.to_edge_list();
            }
        }
    }
    Ok((out, code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("tlkit: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok((out, code)) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("tlkit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
