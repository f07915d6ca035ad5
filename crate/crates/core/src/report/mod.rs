//! Parameter reports, ledger verification and corpus runs.

pub mod ledger;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::generate::{generate, GeneratorSpec};
use crate::graph::{DistanceMatrix, Graph, Vertex};
use crate::layering::cluster_metrics_all;
use crate::params::adt::{adt_oracle, adt_upper, DEFAULT_ADT_CAP};
use crate::params::bottleneck::{bottleneck, BottleneckMode};
use crate::params::cycles::{bridging_geodesic_constant, cbc_exact, glc_oracle, CycleCaps, GlcCaps};
use crate::params::fatminor::{fat_minor_construct, fat_minor_verify};
use crate::params::mccarty::{binomial, mccarty_width, mccarty_width_k, DEFAULT_SUBSET_CAP};
use crate::params::DiskComponents;
use crate::treedec::{
    decomposition_from_ordering, decomposition_metrics, expanded_cluster_decomposition, tl_tb_oracle,
    DEFAULT_ORACLE_CAP,
};
use crate::Status;
pub use ledger::{builtin_ledger, Group, Interval, LedgerEnv, LedgerResult, Verdict};

pub const SCHEMA: u32 = 1;

/// Every entry kind, in report order. `mcw_k` stands for the family of
/// `mcw_3`, `mcw_4`, … entries.
pub const PARAM_NAMES: &[&str] = &[
    "delta",
    "delta_hat",
    "rho",
    "rho_hat",
    "tl",
    "tb",
    "itl",
    "itb",
    "bnc",
    "BNC",
    "mcw",
    "mcw_k",
    "cbc",
    "bgc",
    "glc",
    "adt",
    "ad",
    "td",
    "mf",
    "br",
    "sh",
    "ph",
    "stb",
];

/// Default vertex count up to which `bnc`, `BNC`, `mcw` and `mcw_k` are computed.
pub const DEFAULT_PARAM_CAP: usize = 120;
pub const DEFAULT_FAT_K_MAX: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub oracle: usize,
    pub adt: usize,
    pub param: usize,
    pub subset: u64,
    pub cycles: CycleCaps,
    pub glc_max_len: usize,
    pub fat_k_max: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            oracle: DEFAULT_ORACLE_CAP,
            adt: DEFAULT_ADT_CAP,
            param: DEFAULT_PARAM_CAP,
            subset: DEFAULT_SUBSET_CAP,
            cycles: CycleCaps::default(),
            glc_max_len: GlcCaps::default().max_len,
            fat_k_max: DEFAULT_FAT_K_MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub caps: Caps,
    /// Entry kinds to compute; `None` computes all of them.
    pub params: Option<Vec<String>>,
    /// Sources quantified over by the ledger and used for fat minors;
    /// `None` means every vertex.
    pub sources: Option<Vec<Vertex>>,
    pub groups: Vec<Group>,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            caps: Caps::default(),
            params: None,
            sources: None,
            groups: vec![Group::Prior, Group::Main],
            seed: 0,
        }
    }
}

impl ReportOptions {
    /// Names in `params` that are not entry kinds.
    pub fn unknown_params(&self) -> Vec<String> {
        self.params.iter().flatten().filter(|p| !PARAM_NAMES.contains(&p.as_str())).cloned().collect()
    }

    fn wants(&self, name: &str) -> bool {
        self.params.as_ref().is_none_or(|ps| ps.iter().any(|p| p == name))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamEntry {
    pub name: String,
    pub value: Option<u32>,
    pub status: Status,
    /// Known interval for the parameter; `hi = None` is unbounded.
    pub lo: u32,
    pub hi: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Interval obtained from other entries through proven bounds; the
    /// ledger does not use it.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub derived: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ParamEntry {
    fn exact(name: &str, v: u32) -> Self {
        ParamEntry {
            name: name.into(),
            value: Some(v),
            status: Status::Exact,
            lo: v,
            hi: Some(v),
            witness: None,
            derived: false,
            wall_time: Duration::ZERO,
        }
    }

    fn upper(name: &str, v: u32) -> Self {
        ParamEntry { status: Status::Upper, lo: 0, ..Self::exact(name, v) }
    }

    fn lower(name: &str, v: u32) -> Self {
        ParamEntry { status: Status::Lower, hi: None, ..Self::exact(name, v) }
    }

    fn skipped(name: &str) -> Self {
        ParamEntry { value: None, status: Status::Skipped, lo: 0, hi: None, ..Self::exact(name, 0) }
    }

    fn with_status(name: &str, v: u32, status: Status) -> Self {
        match status {
            Status::Exact => Self::exact(name, v),
            Status::Upper => Self::upper(name, v),
            Status::Lower => Self::lower(name, v),
            Status::Skipped => Self::skipped(name),
        }
    }

    fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn interval(&self) -> Interval {
        if self.derived || self.status == Status::Skipped {
            return Interval::unknown();
        }
        Interval::between(self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub n: usize,
    pub m: usize,
    /// SHA-256 of the vertex count followed by the edge list in original ids.
    pub hash: String,
    /// Original id of each internal vertex.
    pub remap: Vec<u64>,
}

impl Fingerprint {
    pub fn of(g: &Graph) -> Self {
        let mut h = Sha256::new();
        h.update(format!("{}\n", g.n()));
        h.update(g.to_edge_list());
        let hash = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        Fingerprint { n: g.n(), m: g.m(), hash, remap: g.labels().to_vec() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceMetrics {
    pub source: Vertex,
    pub delta: u32,
    pub rho: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterReport {
    pub schema: u32,
    pub graph: Fingerprint,
    pub params: Vec<ParamEntry>,
    pub sources: Vec<SourceMetrics>,
    pub ledger: Vec<LedgerResult>,
    pub caps: Caps,
    pub seed: u64,
}

impl ParameterReport {
    pub fn get(&self, name: &str) -> Option<&ParamEntry> {
        self.params.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<u32> {
        self.get(name).and_then(|e| e.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn ledger_env(&self) -> LedgerEnv {
        let mut env = LedgerEnv {
            delta_s: self.sources.iter().map(|s| s.delta).collect(),
            rho_s: self.sources.iter().map(|s| s.rho).collect(),
            ..Default::default()
        };
        for e in &self.params {
            if let Some(k) = e.name.strip_prefix("mcw_").and_then(|k| k.parse::<usize>().ok()) {
                if e.status == Status::Exact {
                    env.mcw_k.insert(k, e.value.unwrap());
                }
            } else {
                env.scalars.insert(e.name.clone(), e.interval());
            }
        }
        env
    }
}

/// Evaluates every built-in ledger row against `report`.
pub fn verify_ledger(report: &ParameterReport) -> Vec<LedgerResult> {
    verify_ledger_groups(report, &[Group::Prior, Group::Main])
}

pub fn verify_ledger_groups(report: &ParameterReport, groups: &[Group]) -> Vec<LedgerResult> {
    ledger::evaluate(builtin_ledger(), &report.ledger_env(), groups)
}

fn timed(f: impl FnOnce() -> ParamEntry) -> ParamEntry {
    let start = Instant::now();
    let mut e = f();
    e.wall_time = start.elapsed();
    e
}

/// Computes every requested entry; caps only degrade statuses.
pub fn compute_report(g: &Graph, opts: &ReportOptions) -> ParameterReport {
    let n = g.n();
    let caps = &opts.caps;
    let dist = DistanceMatrix::new(g);
    let lm = cluster_metrics_all(g, &dist);
    let sources: Vec<Vertex> = match &opts.sources {
        Some(s) => s.iter().copied().filter(|&v| v < n).collect(),
        None => (0..n).collect(),
    };
    let mut params = Vec::new();
    let mut push = |e: ParamEntry| {
        if opts.wants(if e.name.starts_with("mcw_") { "mcw_k" } else { &e.name }) {
            params.push(e);
        }
    };

    for (name, (v, s)) in [("delta", lm.delta), ("delta_hat", lm.delta_hat), ("rho", lm.rho), ("rho_hat", lm.rho_hat)] {
        push(ParamEntry::exact(name, v).witness(json!({ "source": s })));
    }

    let oracle = (opts.wants("tl") || opts.wants("tb") || opts.wants("itl") || opts.wants("itb"))
        .then(|| tl_tb_oracle(g, &dist, caps.oracle).ok())
        .flatten();
    let start = Instant::now();
    match &oracle {
        Some(o) => {
            let t = start.elapsed();
            push(ParamEntry { wall_time: t, ..ParamEntry::exact("tl", o.tl).witness(json!({ "order": o.tl_order })) });
            push(ParamEntry { wall_time: t, ..ParamEntry::exact("tb", o.tb).witness(json!({ "order": o.tb_order })) });
        }
        None => {
            push(ParamEntry::skipped("tl"));
            push(ParamEntry::skipped("tb"));
        }
    }

    if opts.wants("itl") || opts.wants("itb") {
        let start = Instant::now();
        let mut best_l: Option<(u32, Value)> = None;
        let mut best_b: Option<(u32, Value)> = None;
        let mut consider = |td: crate::treedec::TreeDecomposition, origin: Value| {
            let m = decomposition_metrics(g, &dist, &td);
            if let Some(l) = m.inner_length {
                if best_l.as_ref().is_none_or(|b| l < b.0) {
                    best_l = Some((l, origin.clone()));
                }
            }
            if let Some(b) = m.inner_breadth {
                if best_b.as_ref().is_none_or(|x| b < x.0) {
                    best_b = Some((b, origin));
                }
            }
        };
        if let Some(o) = &oracle {
            consider(decomposition_from_ordering(g, &o.tl_order), json!({ "order": o.tl_order }));
            consider(decomposition_from_ordering(g, &o.tb_order), json!({ "order": o.tb_order }));
        }
        for &s in &sources {
            consider(expanded_cluster_decomposition(g, &dist, s), json!({ "expanded_source": s }));
        }
        let t = start.elapsed();
        for (name, best) in [("itl", best_l), ("itb", best_b)] {
            let e = match best {
                Some((v, w)) => ParamEntry::upper(name, v).witness(w),
                None => ParamEntry::skipped(name),
            };
            push(ParamEntry { wall_time: t, ..e });
        }
    }

    let small = n <= caps.param;
    let needs_dc = small && ["bnc", "BNC", "mcw", "mcw_k"].iter().any(|p| opts.wants(p));
    let dc = needs_dc.then(|| DiskComponents::new(g, &dist));
    for (name, mode) in [("bnc", BottleneckMode::EvenMiddles), ("BNC", BottleneckMode::AllShortestPathVertices)] {
        if !opts.wants(name) {
            continue;
        }
        push(timed(|| match &dc {
            Some(dc) => {
                let b = bottleneck(&dist, dc, mode);
                let e = ParamEntry::exact(name, b.value);
                match b.witness {
                    Some((u, v, w)) => e.witness(json!({ "u": u, "v": v, "w": w })),
                    None => e,
                }
            }
            None => ParamEntry::skipped(name),
        }));
    }
    if opts.wants("mcw") {
        push(timed(|| match &dc {
            Some(dc) => {
                let w = mccarty_width(&dist, dc);
                ParamEntry::exact("mcw", w.value).witness(json!({ "set": w.witness }))
            }
            None => ParamEntry::upper("mcw", lm.rho.0).witness(json!({ "bound": "rho" })),
        }));
    }
    if let (Some(dc), true) = (&dc, opts.wants("mcw_k")) {
        for k in 3..=n {
            if binomial(n as u64, k as u64) > caps.subset {
                continue;
            }
            let start = Instant::now();
            let w = mccarty_width_k(&dist, dc, k, caps.subset).expect("binomial checked against the cap");
            let mut e = ParamEntry::exact(&format!("mcw_{k}"), w.value).witness(json!({ "set": w.witness }));
            e.wall_time = start.elapsed();
            push(e);
        }
    }

    if opts.wants("cbc") {
        push(timed(|| ParamEntry::exact("cbc", cbc_exact(g, &dist))));
    }
    if opts.wants("bgc") {
        push(timed(|| {
            let (v, status) = bridging_geodesic_constant(g, &dist, caps.cycles);
            ParamEntry::with_status("bgc", v, status)
        }));
    }
    if opts.wants("glc") {
        push(timed(|| {
            let (v, w, status) = glc_oracle(g, &dist, GlcCaps { cycles: caps.cycles, max_len: caps.glc_max_len });
            let e = ParamEntry::with_status("glc", v, status);
            match w {
                Some(lc) => e.witness(json!({ "cycle": lc.cycle, "loaded": lc.loaded })),
                None => e,
            }
        }));
    }

    let mut adt_hi = None;
    if opts.wants("adt") || opts.wants("ad") {
        let e = timed(|| match adt_oracle(g, &dist, caps.adt) {
            Ok(t) => ParamEntry::exact("adt", t.value).witness(json!({ "edges": t.edges })),
            Err(_) => {
                let u = adt_upper(g, &dist);
                ParamEntry::upper("adt", u.value).witness(json!({ "source": u.source, "edges": u.edges }))
            }
        });
        adt_hi = e.value;
        push(e);
    }
    if opts.wants("ad") {
        push(match adt_hi {
            Some(h) => ParamEntry::upper("ad", h).witness(json!({ "bound": "adt" })),
            None => ParamEntry::skipped("ad"),
        });
    }
    if opts.wants("td") {
        let hi = 2 * lm.delta.0 + 2;
        let lo = oracle.as_ref().map_or(0, |o| o.tl);
        push(ParamEntry { lo, derived: true, ..ParamEntry::upper("td", hi) });
    }
    if opts.wants("mf") {
        push(timed(|| {
            let mut best: Option<(u32, Vertex)> = None;
            for &s in &sources {
                let ds = lm.per_source[s].diameter;
                for k in (1..=caps.fat_k_max.min(ds / 5)).rev() {
                    if best.is_some_and(|b| b.0 >= k) {
                        break;
                    }
                    let ok = fat_minor_construct(g, &dist, s, k)
                        .map(|w| fat_minor_verify(g, &dist, &w, k).is_ok())
                        .unwrap_or(false);
                    if ok {
                        best = Some((k, s));
                        break;
                    }
                }
            }
            match best {
                Some((k, s)) => ParamEntry::lower("mf", k).witness(json!({ "source": s, "k": k })),
                None => ParamEntry::lower("mf", 0),
            }
        }));
    }
    for name in ["br", "sh", "ph", "stb"] {
        push(ParamEntry::skipped(name));
    }

    let mut report = ParameterReport {
        schema: SCHEMA,
        graph: Fingerprint::of(g),
        params,
        sources: sources
            .iter()
            .map(|&s| SourceMetrics { source: s, delta: lm.per_source[s].diameter, rho: lm.per_source[s].radius })
            .collect(),
        ledger: Vec::new(),
        caps: caps.clone(),
        seed: opts.seed,
    };
    report.ledger = verify_ledger_groups(&report, &opts.groups);
    report
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub spec: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ParameterReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub spec: String,
    pub id: String,
    pub instance: Option<String>,
    pub lhs_value: String,
    pub rhs_value: String,
    /// The offending graph in edge-list format.
    pub edge_list: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub graphs: usize,
    pub errors: usize,
    pub holds: usize,
    pub violated: usize,
    pub not_evaluable: usize,
    pub first_violation: Option<Violation>,
    pub entries: Vec<CorpusEntry>,
}

impl CorpusSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Reports for every spec, computed in parallel; the summary does not
/// depend on scheduling.
pub fn run_corpus(specs: &[GeneratorSpec], opts: &ReportOptions) -> CorpusSummary {
    let results: Vec<(CorpusEntry, Option<String>)> = specs
        .par_iter()
        .map(|spec| match generate(spec) {
            Ok(g) => {
                let r = compute_report(&g, opts);
                (CorpusEntry { spec: spec.to_string(), report: Some(r), error: None }, Some(g.to_edge_list()))
            }
            Err(e) => (CorpusEntry { spec: spec.to_string(), report: None, error: Some(e.to_string()) }, None),
        })
        .collect();
    let mut s = CorpusSummary {
        graphs: specs.len(),
        errors: 0,
        holds: 0,
        violated: 0,
        not_evaluable: 0,
        first_violation: None,
        entries: Vec::with_capacity(results.len()),
    };
    for (entry, edge_list) in results {
        match &entry.report {
            None => s.errors += 1,
            Some(r) => {
                for l in &r.ledger {
                    match l.verdict {
                        Verdict::Holds => s.holds += 1,
                        Verdict::NotEvaluable => s.not_evaluable += 1,
                        Verdict::Violated => {
                            s.violated += 1;
                            if s.first_violation.is_none() {
                                s.first_violation = Some(Violation {
                                    spec: entry.spec.clone(),
                                    id: l.id.clone(),
                                    instance: l.instance.clone(),
                                    lhs_value: l.lhs_value.clone(),
                                    rhs_value: l.rhs_value.clone(),
                                    edge_list: edge_list.clone().unwrap_or_default(),
                                });
                            }
                        }
                    }
                }
            }
        }
        s.entries.push(entry);
    }
    s
}
