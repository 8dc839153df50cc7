//! The `braess` command-line tool as a library: argument parsing, command
//! dispatch, and the result document written to stdout.

use std::collections::BTreeMap;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use braess::constructions::{
    build_gap_network, build_witness_flows, default_eps, rebuild_gap, good_subnetwork_ids, GapNetwork, TwoDDPInstance,
};
use braess::equilibrium::{is_nash_flow, optimal_bottleneck_cost, price_of_anarchy, worst_nash_flow};
use braess::io::{emit_document, export_dot, parse_document, InstanceDocument};
use braess::model::{normalize_flow, normalize_rate};
use braess::rational::{parse_q, to_pq, Q};
use braess::search::{
    approx_best_subnetwork, classify_paradox, exhaustive_best_subnetwork, sparsify_flow_with, ApproxParams, LogBase,
};
use braess::topology::{enumerate_paths, enumerate_st_cuts};
use braess::{Error, Flow, RoutingInstance};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "BRAESS_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "braess", version, about = "Equilibria and Braess's paradox in bottleneck routing games")]
struct Cli {
    /// Instance document (JSON).
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Also print a table of the outputs.
    #[arg(long, global = true, value_enum)]
    table: Option<TableFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Md,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlowChoice {
    None,
    Opt,
    WorstNash,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal bottleneck cost and an optimal flow.
    SolveOpt,
    /// Worst Nash flow and its cost.
    WorstNash,
    /// Price of anarchy B(G, r) / B*(G).
    Poa,
    /// Paradox-free, paradox-ridden or intermediate.
    Classify,
    /// Exhaustive best subnetwork.
    BestSubnet,
    /// Best subnetwork by enumerating sparse candidate flows (rate 1).
    ApproxBestSubnet {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        delta: String,
        /// Defaults to the largest slope of the instance.
        #[arg(long)]
        xi: Option<String>,
        /// Recorded for reproducibility; the enumeration itself is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sparse approximation of a flow of the instance.
    Sparsify {
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FlowChoice::WorstNash)]
        flow: FlowChoice,
        #[arg(long, value_enum, default_value_t = LogChoice::Natural)]
        log: LogChoice,
    },
    /// Builds a gap gadget from a 2DDP instance and optionally amplifies it.
    GenGap {
        /// `yes`, `no`, or a JSON file `{nodes, edges: [[id, tail, head]], s1, s2, t1, t2}`.
        #[arg(long)]
        ddp: String,
        /// Comma-separated eps per level; missing levels use the default.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 0)]
        levels: u32,
        #[arg(long, default_value = "1")]
        rate: String,
        /// Writes the instance document here instead of embedding it.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The explicit flows of a gadget document.
    WitnessFlows {
        /// Defaults to the document's rate.
        #[arg(long)]
        rate: Option<String>,
    },
    /// Enumerates the simple s-t paths.
    Paths,
    /// Enumerates the s-t cuts.
    Cuts,
    /// Graphviz rendering, optionally labelled with a flow.
    ExportDot {
        #[arg(long, value_enum, default_value_t = FlowChoice::None)]
        flow: FlowChoice,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LogChoice {
    Natural,
    Two,
}

/// What a command reports on stdout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultDocument {
    pub command: String,
    /// SHA-256 of the input file, hex.
    pub input_digest: Option<String>,
    pub parameters: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub counts: BTreeMap<String, u128>,
    pub wall_time_ms: u128,
}

/// Result of [`run_command`].
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub document: Option<ResultDocument>,
    /// Everything destined for stdout: the document, then the table.
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    parameters: Map<String, Value>,
    outputs: Map<String, Value>,
    counts: BTreeMap<String, u128>,
    rows: Vec<(String, String)>,
}

impl Report {
    fn new() -> Self {
        Self { parameters: Map::new(), outputs: Map::new(), counts: BTreeMap::new(), rows: Vec::new() }
    }

    fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.parameters.insert(key.into(), v.into());
    }

    fn out(&mut self, key: &str, v: impl Into<Value>) {
        self.outputs.insert(key.into(), v.into());
    }

    /// Output that also shows up in the table.
    fn scalar(&mut self, key: &str, v: impl Into<String>) {
        let v = v.into();
        self.rows.push((key.into(), v.clone()));
        self.outputs.insert(key.into(), Value::String(v));
    }

    fn count(&mut self, key: &str, n: u128) {
        self.rows.push((key.into(), n.to_string()));
        self.counts.insert(key.into(), n);
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<braess::io::ParseError> for Failure {
    fn from(e: braess::io::ParseError) -> Self {
        Failure::Lib(Error::Parse(e))
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Parse(_) => EXIT_USAGE,
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::Feasibility(_)
        | Error::Structure(_)
        | Error::UnsupportedModel(_)
        | Error::SearchFailure { .. }
        | Error::Infeasible(_)
        | Error::Degenerate(_) => EXIT_INFEASIBLE,
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK { (text, String::new()) } else { (String::new(), text) };
            return Outcome { exit_code: code, document: None, stdout, stderr };
        }
    };
    let pool = match threads() {
        Ok(p) => p,
        Err(msg) => return failure(EXIT_USAGE, msg),
    };
    let start = Instant::now();
    let result = pool.install(|| execute(&cli));
    let elapsed = start.elapsed().as_millis();
    match result {
        Ok((digest, report)) => {
            let doc = ResultDocument {
                command: command_name(&cli.command).into(),
                input_digest: digest,
                parameters: report.parameters,
                outputs: report.outputs,
                counts: report.counts,
                wall_time_ms: elapsed,
            };
            let mut stdout = serde_json::to_string_pretty(&doc).expect("result documents serialize");
            stdout.push('\n');
            if let Some(fmt) = cli.table {
                stdout.push_str(&render_table(fmt, &report.rows));
            }
            Outcome { exit_code: EXIT_OK, document: Some(doc), stdout, stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => failure(EXIT_USAGE, msg),
        Err(Failure::Lib(e)) => failure(exit_code(&e), e.to_string()),
    }
}

fn failure(code: i32, msg: String) -> Outcome {
    Outcome { exit_code: code, document: None, stdout: String::new(), stderr: format!("error: {msg}\n") }
}

fn threads() -> Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
        if n == 0 {
            return Err(format!("{THREADS_ENV} must be positive"));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| e.to_string())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::SolveOpt => "solve-opt",
        Command::WorstNash => "worst-nash",
        Command::Poa => "poa",
        Command::Classify => "classify",
        Command::BestSubnet => "best-subnet",
        Command::ApproxBestSubnet { .. } => "approx-best-subnet",
        Command::Sparsify { .. } => "sparsify",
        Command::GenGap { .. } => "gen-gap",
        Command::WitnessFlows { .. } => "witness-flows",
        Command::Paths => "paths",
        Command::Cuts => "cuts",
        Command::ExportDot { .. } => "export-dot",
    }
}

fn rational(flag: &str, text: &str) -> Result<Q, Failure> {
    parse_q(text).ok_or_else(|| Failure::Usage(format!("{flag}: `{text}` is not a rational of the form p/q")))
}

fn read(path: &FsPath) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &FsPath, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn load(cli: &Cli) -> Result<(String, InstanceDocument), Failure> {
    let path = cli.input.as_ref().ok_or_else(|| Failure::Usage("this command needs an instance: -i FILE".into()))?;
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Usage(format!("{} is not UTF-8", path.display())))?;
    Ok((digest(&bytes), parse_document(&text)?))
}

fn path_key(g: &RoutingInstance, p: &[usize]) -> String {
    g.path_ids(p).join(",")
}

fn flow_value(f: &Flow) -> Value {
    let g = f.instance();
    let paths: Map<String, Value> = f.paths().iter().map(|(p, x)| (path_key(g, p), Value::String(to_pq(x)))).collect();
    let loads: Map<String, Value> = f.edge_loads_by_id().into_iter().map(|(id, x)| (id, Value::String(to_pq(&x)))).collect();
    json!({ "paths": paths, "edge_loads": loads })
}

fn ids(g: &RoutingInstance, edges: impl IntoIterator<Item = usize>) -> Value {
    Value::from(edges.into_iter().map(|e| g.edge(e).id.clone()).collect::<Vec<_>>())
}

fn pick_flow(g: &RoutingInstance, choice: FlowChoice) -> Result<Option<Flow>, Failure> {
    Ok(match choice {
        FlowChoice::None => None,
        FlowChoice::Opt => Some(optimal_bottleneck_cost(g)?.1),
        FlowChoice::WorstNash => Some(worst_nash_flow(g)?.flow),
    })
}

fn flow_choice_name(c: FlowChoice) -> &'static str {
    match c {
        FlowChoice::None => "none",
        FlowChoice::Opt => "opt",
        FlowChoice::WorstNash => "worst-nash",
    }
}

fn parse_ddp(arg: &str) -> Result<(Option<String>, TwoDDPInstance), Failure> {
    match arg {
        "yes" => Ok((None, TwoDDPInstance::from_edges(&[("a", "s1", "t1"), ("b", "s2", "t2"), ("c", "s1", "t2"), ("d", "s2", "t1")])?)),
        "no" => Ok((None, TwoDDPInstance::from_edges(&[("a", "s1", "w"), ("b", "s2", "w"), ("c", "w", "t1"), ("d", "w", "t2")])?)),
        file => {
            #[derive(serde::Deserialize)]
            struct RawDdp {
                nodes: Vec<String>,
                edges: Vec<(String, String, String)>,
                s1: String,
                s2: String,
                t1: String,
                t2: String,
            }
            let bytes = read(FsPath::new(file))?;
            let raw: RawDdp = serde_json::from_slice(&bytes).map_err(|e| Failure::Usage(format!("--ddp {file}: {e}")))?;
            let edges: Vec<(&str, &str, &str)> = raw.edges.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
            let nodes: Vec<&str> = raw.nodes.iter().map(String::as_str).collect();
            let d = TwoDDPInstance::new(&nodes, &edges, [&raw.s1, &raw.s2, &raw.t1, &raw.t2])?;
            Ok((Some(digest(&bytes)), d))
        }
    }
}

fn gap_outputs(r: &mut Report, gap: &GapNetwork) {
    r.scalar("gamma1", to_pq(&gap.gamma1));
    r.scalar("gamma2", to_pq(&gap.gamma2));
    r.scalar("level", gap.level.to_string());
}

fn execute(cli: &Cli) -> Result<(Option<String>, Report), Failure> {
    let mut r = Report::new();
    let needs_input = !matches!(cli.command, Command::GenGap { .. });
    let (digest, doc) = if needs_input {
        let (d, doc) = load(cli)?;
        (Some(d), Some(doc))
    } else {
        (None, None)
    };
    let g = doc.as_ref().map(|d| d.instance.clone());
    let g = || g.as_ref().expect("loaded above");
    if let Some(doc) = &doc {
        r.param("rate", to_pq(doc.instance.rate()));
    }

    let mut digest = digest;
    match &cli.command {
        Command::SolveOpt => {
            let (cost, flow) = optimal_bottleneck_cost(g())?;
            r.scalar("optimal_cost", to_pq(&cost));
            r.out("flow", flow_value(&flow));
        }
        Command::WorstNash => {
            let w = worst_nash_flow(g())?;
            let cert = is_nash_flow(&w.flow);
            r.scalar("worst_nash_cost", to_pq(&w.cost));
            r.out("flow", flow_value(&w.flow));
            r.out("cut", ids(g(), w.cut.iter().copied()));
            r.out("blocking_cut", ids(g(), cert.blocking_cut.unwrap_or_default()));
            r.count("cuts_examined", w.cuts_examined as u128);
        }
        Command::Poa => {
            let (opt, _) = optimal_bottleneck_cost(g())?;
            let w = worst_nash_flow(g())?;
            let poa = price_of_anarchy(g())?;
            r.scalar("optimal_cost", to_pq(&opt));
            r.scalar("worst_nash_cost", to_pq(&w.cost));
            r.scalar("poa", to_pq(&poa));
        }
        Command::Classify | Command::BestSubnet => {
            let classify = matches!(cli.command, Command::Classify);
            let rep = if classify { classify_paradox(g())? } else { exhaustive_best_subnetwork(g())? };
            if classify {
                r.scalar("classification", rep.classification.name());
            }
            r.scalar("best_worst_cost", to_pq(&rep.worst_cost));
            r.scalar("full_worst_cost", to_pq(&rep.full_worst_cost));
            r.scalar("optimal_cost", to_pq(&rep.optimal_cost));
            r.scalar("improvement", to_pq(&rep.improvement));
            r.out("best_subnetwork", Value::from(rep.subnetwork.clone()));
            if !classify {
                r.scalar("classification", rep.classification.name());
                r.out("witness", flow_value(&rep.witness));
            }
            if let Some(gap) = doc.as_ref().and_then(|d| d.gadget.as_ref()) {
                let good = gap.contains_good_copy(&rep.subnetwork);
                r.scalar("contains_good_subnetwork", good.to_string());
            }
            r.count("subnetworks_considered", rep.subnetworks_considered as u128);
            r.count("subnetworks_solved", rep.subnetworks_solved as u128);
        }
        Command::ApproxBestSubnet { eps, delta, xi, seed } => {
            let eps = rational("--eps", eps)?;
            let delta = rational("--delta", delta)?;
            let xi = match xi {
                Some(x) => rational("--xi", x)?,
                None => g().max_xi(),
            };
            r.param("eps", to_pq(&eps));
            r.param("delta", to_pq(&delta));
            r.param("xi", to_pq(&xi));
            r.param("seed", *seed);
            let params = ApproxParams::new(eps, delta, xi)?;
            let res = approx_best_subnetwork(g(), &params)?;
            r.out("subnetwork", Value::from(res.subnetwork.clone()));
            r.scalar("b_tilde", to_pq(&res.b_tilde));
            r.scalar("eps1", to_pq(&res.eps1));
            r.scalar("eps2", to_pq(&res.eps2));
            r.out("flow", flow_value(&res.flow));
            let ms: Map<String, Value> = res.multiset.iter().map(|(p, c)| (p.join(","), Value::from(*c))).collect();
            r.out("multiset", ms);
            r.count("k", res.k as u128);
            r.count("candidates", res.candidates);
            r.count("candidate_classes", res.candidate_classes as u128);
            r.count("candidate_subnetworks", res.candidate_subnetworks as u128);
        }
        Command::Sparsify { eps, seed, flow, log } => {
            let eps = rational("--eps", eps)?;
            r.param("eps", to_pq(&eps));
            r.param("seed", *seed);
            r.param("flow", flow_choice_name(*flow));
            let base = match log {
                LogChoice::Natural => LogBase::Natural,
                LogChoice::Two => LogBase::Two,
            };
            r.param("log", base.name());
            let f = pick_flow(g(), *flow)?.ok_or_else(|| Failure::Usage("sparsify needs a flow: --flow opt|worst-nash".into()))?;
            let normalized = *g().rate() != braess::rational::one();
            let f = if normalized { normalize_flow(&f, &normalize_rate(g())?)? } else { f };
            r.param("normalized_to_rate_one", normalized);
            let c = sparsify_flow_with(&f, &eps, *seed, base)?;
            r.scalar("deviation", to_pq(&c.deviation(&f)));
            r.out("source_flow", flow_value(&f));
            r.out("sparse_flow", flow_value(&c.flow));
            let ms: Map<String, Value> =
                c.counts.iter().map(|(p, n)| (path_key(f.instance(), p), Value::from(*n))).collect();
            r.out("multiset", ms);
            r.count("k", braess::search::k_of_eps(&eps, g().edge_count(), base)? as u128);
            r.count("multiset_size", c.size as u128);
            r.count("support", c.flow.support_size() as u128);
        }
        Command::GenGap { ddp, eps, levels, rate, out } => {
            let (ddp_digest, d) = parse_ddp(ddp)?;
            digest = ddp_digest;
            let rate = rational("--rate", rate)?;
            let given: Vec<Q> = match eps {
                Some(list) => list.split(',').map(|e| rational("--eps", e)).collect::<Result<_, _>>()?,
                None => vec![],
            };
            if given.len() > *levels as usize + 1 {
                return Err(Failure::Usage(format!("--eps lists {} values for {} levels", given.len(), levels + 1)));
            }
            let mut gap = build_gap_network(&d, given.first().unwrap_or(&braess::rational::q(1, 8)))?;
            let mut used = vec![gap.eps[0].clone()];
            for level in 1..=*levels as usize {
                let e = given.get(level).cloned().unwrap_or_else(|| default_eps(&gap.gamma1));
                used.push(e);
                gap = rebuild_gap(&d, &used)?;
            }
            r.param("ddp", ddp.as_str());
            r.param("levels", *levels);
            r.param("eps", Value::from(used.iter().map(to_pq).collect::<Vec<_>>()));
            r.param("rate", to_pq(&rate));
            let document = InstanceDocument::from_gap(&gap, rate)?;
            gap_outputs(&mut r, &gap);
            r.scalar("ddp_yes", braess::constructions::classify_2ddp(&d)?.is_yes().to_string());
            r.count("nodes", document.instance.node_count() as u128);
            r.count("edges", document.instance.edge_count() as u128);
            let text = emit_document(&document);
            match out {
                Some(path) => {
                    write(path, &text)?;
                    r.out("written_to", path.display().to_string());
                }
                None => r.out("instance", serde_json::from_str::<Value>(&text).expect("emitted JSON parses")),
            }
        }
        Command::WitnessFlows { rate } => {
            let doc = doc.as_ref().expect("loaded above");
            let gap = doc.gadget.as_ref().ok_or_else(|| Failure::Usage("witness-flows needs a gadget document (with metadata)".into()))?;
            let rate = match rate {
                Some(x) => rational("--rate", x)?,
                None => doc.instance.rate().clone(),
            };
            r.param("rate", to_pq(&rate));
            gap_outputs(&mut r, gap);
            let mut list = Vec::new();
            for w in build_witness_flows(gap, &rate)? {
                let cert = is_nash_flow(&w.flow);
                r.rows.push((format!("{}.cost", w.role), to_pq(&w.flow.cost())));
                r.rows.push((format!("{}.nash", w.role), cert.verdict.to_string()));
                list.push(json!({
                    "role": w.role.name(),
                    "expected_cost": to_pq(&w.expected_cost),
                    "cost": to_pq(&w.flow.cost()),
                    "is_nash": cert.verdict,
                    "subnetwork_edges": w.subnetwork.len(),
                    "flow": flow_value(&w.flow),
                }));
            }
            r.out("witnesses", list);
            if let Some(good) = good_subnetwork_ids(gap)? {
                r.out("good_subnetwork", Value::from(good));
            }
        }
        Command::Paths => {
            let ps = enumerate_paths(g())?;
            let list: Vec<Value> = ps.iter().map(|p| Value::from(g().path_ids(p))).collect();
            r.count("paths", ps.len() as u128);
            r.out("path_list", list);
        }
        Command::Cuts => {
            let cuts = enumerate_st_cuts(g())?;
            let list: Vec<Value> = cuts.iter().map(|c| ids(g(), c.iter().copied())).collect();
            r.count("cuts", cuts.len() as u128);
            r.out("cut_list", list);
        }
        Command::ExportDot { flow, out } => {
            r.param("flow", flow_choice_name(*flow));
            let f = pick_flow(g(), *flow)?;
            let dot = export_dot(g(), f.as_ref());
            match out {
                Some(path) => {
                    write(path, &dot)?;
                    r.out("written_to", path.display().to_string());
                }
                None => r.out("dot", dot),
            }
        }
    }
    Ok((digest, r))
}

fn render_table(fmt: TableFormat, rows: &[(String, String)]) -> String {
    match fmt {
        TableFormat::Md => {
            let mut s = String::from("| quantity | value |\n|---|---|\n");
            for (k, v) in rows {
                s.push_str(&format!("| {k} | {v} |\n"));
            }
            s
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["quantity", "value"]).expect("in-memory writes succeed");
            for (k, v) in rows {
                w.write_record([k, v]).expect("in-memory writes succeed");
            }
            String::from_utf8(w.into_inner().expect("in-memory writes succeed")).expect("CSV of UTF-8 is UTF-8")
        }
    }
}
