//! Command-line surface: `bound`, `ged`, `search`, `bench`, `selftest`.
//!
//! Exit codes: 0 ok, 1 usage error, 2 data error, 3 at least one result was
//! cut off by a budget.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gedsearch::bb::{
    extract_edit_path, ilp_solve, Budget, EditOp, IlpSolution, IlpStatus, SolveMode,
};
use gedsearch::bounds::{bm_bound, fori_lp_bound, gap, ls_bound, BoundResult};
use gedsearch::costs::{cost, cost_model_by_name, Cost, CostModel};
use gedsearch::graph::{star_cycle_instance, Alphabets, LabeledGraph};
use gedsearch::ilp::build_fori;
use gedsearch::io::{
    cost_to_f64, load_dir_with, load_graph_file, write_report, GxlAttrMap, ReportFormat,
    DATA_DIR_ENV,
};
use gedsearch::oracle::brute_force_ged;
use gedsearch::search::{fori_sim, SearchConfig};

#[derive(Parser)]
#[command(name = "gedsearch", version, about = "Graph edit distance similarity search")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Ls,
    Bm,
    Forilp,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a lower bound on the edit distance between two graphs.
    Bound {
        #[arg(long, value_enum)]
        alg: Alg,
        g: PathBuf,
        h: PathBuf,
        #[arg(long, default_value = "unit")]
        costs: String,
        /// Write the LP model (objective + rows) to this path.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        /// Fix the run's randomness and suppress wall-clock fields so the
        /// output is byte-reproducible.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compute the exact edit distance between two graphs.
    Ged {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, default_value = "unit")]
        costs: String,
        /// Use the brute-force reference instead of the solver (small graphs
        /// only; test tooling).
        #[arg(long)]
        oracle: bool,
        /// Abort the solve after this many milliseconds.
        #[arg(long)]
        budget_ms: Option<u64>,
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Return every dataset graph within edit distance tau of the query.
    Search {
        #[arg(long)]
        query: PathBuf,
        /// Directory of .json/.gxl graph files; defaults to $GEDSEARCH_DATA_DIR.
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Threshold in raw cost units (decimal).
        #[arg(long)]
        tau: Option<String>,
        /// Threshold as a multiple of the cost model's dataset constant
        /// (3.575 for aids-muta, 8.375 for protein).
        #[arg(long)]
        tau_mult: Option<String>,
        #[arg(long, default_value = "unit")]
        costs: String,
        /// Dataset-parallel worker count (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Per-graph verification budget in milliseconds.
        #[arg(long)]
        budget_ms: Option<u64>,
        /// Also write a per-graph CSV report to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Bound-quality and match-count benchmark over a dataset, CSV output.
    Bench {
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Graph ids (file stems) to use as queries; default: first three.
        #[arg(long, value_delimiter = ',')]
        queries: Vec<String>,
        /// Thresholds (decimal), e.g. --taus 1,2,3.
        #[arg(long, value_delimiter = ',')]
        taus: Vec<String>,
        #[arg(long, default_value = "unit")]
        costs: String,
        /// Per-pair exact-solve budget in milliseconds (gap columns are left
        /// empty for pairs that exceed it).
        #[arg(long)]
        budget_ms: Option<u64>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Ignore the dataset and emit the star/cycle closed-form table for
        /// n = 3..12.
        #[arg(long)]
        star_cycle: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the acceptance suite; nonzero exit on any failure.
    Selftest,
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

/// Parses a non-negative decimal cost string ("3", "3.575") exactly.
fn parse_cost(s: &str) -> Result<Cost, CliError> {
    let bad = || CliError::Usage(format!("invalid cost value `{s}`"));
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = |t: &str| t.is_empty() || t.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || !digits(frac) || frac.len() > 12 {
        return Err(bad());
    }
    let whole: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let mut v = Cost::from(whole);
    if !frac.is_empty() {
        let num: i64 = frac.parse().map_err(|_| bad())?;
        v += cost(num, 10i64.pow(frac.len() as u32));
    }
    Ok(v)
}

/// Dataset constant for `--tau-mult` (per cost model).
fn tau_constant(model: &str) -> Result<Cost, CliError> {
    match model {
        "aids-muta" => Ok(cost(143, 40)), // 3.575
        "protein" => Ok(cost(67, 8)),     // 8.375
        other => Err(CliError::Usage(format!(
            "--tau-mult has no dataset constant for cost model `{other}`"
        ))),
    }
}

fn load_costs(name: &str) -> Result<Box<dyn CostModel>, CliError> {
    cost_model_by_name(name).map_err(|e| CliError::Usage(e.to_string()))
}

fn load_pair(
    g: &Path,
    h: &Path,
    c: &dyn CostModel,
) -> Result<(LabeledGraph, LabeledGraph), CliError> {
    let attrs = GxlAttrMap::default();
    let mut alph = Alphabets::new();
    let g = load_graph_file(g, &attrs, &mut alph).map_err(data)?;
    let h = load_graph_file(h, &attrs, &mut alph).map_err(data)?;
    c.validate(&g, "G").map_err(data)?;
    c.validate(&h, "H").map_err(data)?;
    Ok((g, h))
}

fn dataset_dir(flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
    flag.or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)).ok_or_else(|| {
        CliError::Usage(format!("no dataset: pass --dataset or set ${DATA_DIR_ENV}"))
    })
}

/// With --seed fixed the output must be byte-reproducible, so wall-clock
/// fields are reported as 0 in that mode.
fn elapsed_ms(seed: Option<u64>, ms: f64) -> f64 {
    if seed.is_some() {
        0.0
    } else {
        ms
    }
}

fn maybe_dump_lp(
    path: &Option<PathBuf>,
    g: &LabeledGraph,
    h: &LabeledGraph,
    c: &dyn CostModel,
) -> Result<(), CliError> {
    if let Some(p) = path {
        std::fs::write(p, build_fori(g, h, c).dump_lp()).map_err(data)?;
    }
    Ok(())
}

fn edit_path_json(ops: &[EditOp]) -> serde_json::Value {
    let op = |kind: &str, fields: Vec<(&str, serde_json::Value)>, c: Cost| {
        let mut m = serde_json::Map::new();
        m.insert("op".into(), kind.into());
        for (k, v) in fields {
            m.insert(k.into(), v);
        }
        m.insert("cost".into(), cost_to_f64(c).into());
        serde_json::Value::Object(m)
    };
    ops.iter()
        .map(|o| match *o {
            EditOp::NodeRelabel { i, k, cost } => {
                op("node-relabel", vec![("i", i.into()), ("k", k.into())], cost)
            }
            EditOp::NodeDel { i, cost } => op("node-del", vec![("i", i.into())], cost),
            EditOp::NodeIns { k, cost } => op("node-ins", vec![("k", k.into())], cost),
            EditOp::EdgeRelabel { e, f, cost } => {
                op("edge-relabel", vec![("e", e.into()), ("f", f.into())], cost)
            }
            EditOp::EdgeDel { e, cost } => op("edge-del", vec![("e", e.into())], cost),
            EditOp::EdgeIns { f, cost } => op("edge-ins", vec![("f", f.into())], cost),
        })
        .collect()
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_bound(
    alg: Alg,
    g: &Path,
    h: &Path,
    costs: &str,
    dump_lp: &Option<PathBuf>,
    seed: Option<u64>,
) -> Result<u8, CliError> {
    let c = load_costs(costs)?;
    let (g, h) = load_pair(g, h, c.as_ref())?;
    maybe_dump_lp(dump_lp, &g, &h, c.as_ref())?;
    let r: BoundResult = match alg {
        Alg::Ls => ls_bound(&g, &h, c.as_ref()).map_err(data)?,
        Alg::Bm => bm_bound(&g, &h, c.as_ref()),
        Alg::Forilp => fori_lp_bound(&g, &h, c.as_ref(), &[]).map_err(data)?,
    };
    print_json(&serde_json::json!({
        "algorithm": r.algorithm.name(),
        "value": cost_to_f64(r.value),
        "elapsed_ms": elapsed_ms(seed, r.elapsed.as_secs_f64() * 1e3),
        "certificate": r.certificate.map(|cert| serde_json::json!({
            "primal_objective": cost_to_f64(cert.primal_objective),
            "dual_objective": cost_to_f64(cert.dual_objective),
        })),
    }));
    Ok(0)
}

fn cmd_ged(
    g: &Path,
    h: &Path,
    costs: &str,
    oracle: bool,
    budget_ms: Option<u64>,
    dump_lp: &Option<PathBuf>,
    seed: Option<u64>,
) -> Result<u8, CliError> {
    let c = load_costs(costs)?;
    let (g, h) = load_pair(g, h, c.as_ref())?;
    maybe_dump_lp(dump_lp, &g, &h, c.as_ref())?;
    let start = std::time::Instant::now();
    let (sol, nodes_explored) = if oracle {
        let (d, mapping) = brute_force_ged(&g, &h, c.as_ref()).map_err(data)?;
        let sol = IlpSolution {
            status: IlpStatus::Optimal,
            objective: Some(d),
            var_values: None,
            node_mapping: Some(mapping),
            node_count: 0,
        };
        (sol, serde_json::Value::Null)
    } else {
        let budget = budget_ms.map_or_else(Budget::unlimited, Budget::with_time);
        let sol =
            ilp_solve(&build_fori(&g, &h, c.as_ref()), SolveMode::Optimize, &budget).map_err(data)?;
        let n = sol.node_count;
        (sol, n.into())
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    if sol.status == IlpStatus::Aborted {
        print_json(&serde_json::json!({
            "ged": sol.objective.map(cost_to_f64),
            "aborted": true,
            "nodes_explored": nodes_explored,
            "elapsed_ms": elapsed_ms(seed, ms),
        }));
        return Ok(3);
    }
    let path = extract_edit_path(&g, &h, c.as_ref(), &sol).map_err(data)?;
    print_json(&serde_json::json!({
        "ged": cost_to_f64(path.total),
        "edit_path": edit_path_json(&path.ops),
        "nodes_explored": nodes_explored,
        "elapsed_ms": elapsed_ms(seed, ms),
    }));
    Ok(0)
}

fn resolve_tau(
    tau: &Option<String>,
    tau_mult: &Option<String>,
    costs: &str,
) -> Result<Cost, CliError> {
    match (tau, tau_mult) {
        (Some(t), None) => parse_cost(t),
        (None, Some(m)) => Ok(parse_cost(m)? * tau_constant(costs)?),
        _ => Err(CliError::Usage("pass exactly one of --tau / --tau-mult".into())),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    query: &Path,
    dataset: Option<PathBuf>,
    tau: &Option<String>,
    tau_mult: &Option<String>,
    costs: &str,
    jobs: usize,
    budget_ms: Option<u64>,
    csv: &Option<PathBuf>,
    seed: Option<u64>,
) -> Result<u8, CliError> {
    let c = load_costs(costs)?;
    let tau = resolve_tau(tau, tau_mult, costs)?;
    let dir = dataset_dir(dataset)?;
    let attrs = GxlAttrMap::default();
    let mut alph = Alphabets::new();
    let q = load_graph_file(query, &attrs, &mut alph).map_err(data)?;
    let entries = load_dir_with(&dir, &attrs, &mut alph).map_err(data)?;
    if entries.is_empty() {
        return Err(CliError::Data(format!("no graph files in {}", dir.display())));
    }
    c.validate(&q, "query").map_err(data)?;
    for (id, g) in &entries {
        c.validate(g, id).map_err(data)?;
    }
    let ids: Vec<String> = entries.iter().map(|(id, _)| id.clone()).collect();
    let graphs: Vec<LabeledGraph> = entries.into_iter().map(|(_, g)| g).collect();

    let mut cfg = SearchConfig::for_model(tau, c.as_ref());
    cfg.jobs = jobs;
    cfg.budget_ms = budget_ms;
    let mut report = fori_sim(&q, &graphs, c.as_ref(), &cfg).map_err(data)?;
    if seed.is_some() {
        for o in &mut report.outcomes {
            o.elapsed_ms = 0.0;
        }
    }
    if let Some(path) = csv {
        std::fs::write(path, write_report(&report, &ids, ReportFormat::Csv)).map_err(data)?;
    }
    let aborted = report.aborted;
    print!("{}", String::from_utf8(write_report(&report, &ids, ReportFormat::Json)).expect("utf8"));
    Ok(if aborted > 0 { 3 } else { 0 })
}

fn star_cycle_table() -> Result<String, CliError> {
    let u = gedsearch::costs::unit_costs();
    let mut out = String::from("n,forilp_bound,bm_bound,k\n");
    for n in 3..=12usize {
        let (s, c) = star_cycle_instance(n).map_err(data)?;
        let lp = fori_lp_bound(&s, &c, &u, &[]).map_err(data)?.value;
        let bm = bm_bound(&s, &c, &u).value;
        let k = gedsearch::ilp::reduced_costs(&s, &c, &u).k;
        out.push_str(&format!(
            "{n},{:.4},{:.4},{:.4}\n",
            cost_to_f64(lp),
            cost_to_f64(bm),
            cost_to_f64(k)
        ));
    }
    Ok(out)
}

struct GapStats {
    values: Vec<Cost>,
}

impl GapStats {
    fn new() -> Self {
        GapStats { values: Vec::new() }
    }

    fn mean_max(&self) -> (String, String) {
        if self.values.is_empty() {
            return (String::new(), String::new());
        }
        let sum: Cost = self.values.iter().cloned().sum();
        let mean = sum / Cost::from(self.values.len() as i64);
        let max = self.values.iter().cloned().max().expect("nonempty");
        (format!("{:.4}", cost_to_f64(mean)), format!("{:.4}", cost_to_f64(max)))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    dataset: Option<PathBuf>,
    queries: &[String],
    taus: &[String],
    costs: &str,
    budget_ms: Option<u64>,
    out: &Option<PathBuf>,
    star_cycle: bool,
    seed: Option<u64>,
) -> Result<u8, CliError> {
    if star_cycle {
        let table = star_cycle_table()?;
        match out {
            Some(p) => std::fs::write(p, table).map_err(data)?,
            None => print!("{table}"),
        }
        return Ok(0);
    }
    let c = load_costs(costs)?;
    let taus: Vec<Cost> = taus.iter().map(|t| parse_cost(t)).collect::<Result<_, _>>()?;
    if taus.is_empty() {
        return Err(CliError::Usage("--taus is required (or use --star-cycle)".into()));
    }
    let dir = dataset_dir(dataset)?;
    let entries = load_dir_with(&dir, &GxlAttrMap::default(), &mut Alphabets::new()).map_err(data)?;
    if entries.is_empty() {
        return Err(CliError::Data(format!("no graph files in {}", dir.display())));
    }
    for (id, g) in &entries {
        c.validate(g, id).map_err(data)?;
    }
    let query_ids: Vec<String> = if queries.is_empty() {
        entries.iter().take(3).map(|(id, _)| id.clone()).collect()
    } else {
        queries.to_vec()
    };

    let mut csv = String::from(
        "query_id,tau,matches,solved,mean_gap_ls,max_gap_ls,mean_gap_bm,max_gap_bm,\
         mean_gap_forilp,max_gap_forilp,elapsed_ms\n",
    );
    let mut any_aborted = false;
    for qid in &query_ids {
        let q = &entries
            .iter()
            .find(|(id, _)| id == qid)
            .ok_or_else(|| CliError::Data(format!("query id `{qid}` not in dataset")))?
            .1;
        let start = std::time::Instant::now();
        let mut geds: Vec<Option<Cost>> = Vec::with_capacity(entries.len());
        let mut gaps_ls = GapStats::new();
        let mut gaps_bm = GapStats::new();
        let mut gaps_lp = GapStats::new();
        for (_, h) in &entries {
            let lb_ls = if c.is_unit() {
                Some(ls_bound(q, h, c.as_ref()).map_err(data)?.value)
            } else {
                None
            };
            let lb_bm = bm_bound(q, h, c.as_ref()).value;
            let lb_lp = fori_lp_bound(q, h, c.as_ref(), &[]).map_err(data)?.value;
            let budget = budget_ms.map_or_else(Budget::unlimited, Budget::with_time);
            let sol = ilp_solve(&build_fori(q, h, c.as_ref()), SolveMode::Optimize, &budget)
                .map_err(data)?;
            if sol.status != IlpStatus::Optimal {
                any_aborted = true;
                geds.push(None);
                continue;
            }
            let d = sol.objective.expect("optimal solve carries an objective");
            if let Some(ls) = lb_ls {
                gaps_ls.values.push(gap(d, ls).map_err(data)?);
            }
            gaps_bm.values.push(gap(d, lb_bm).map_err(data)?);
            gaps_lp.values.push(gap(d, lb_lp).map_err(data)?);
            geds.push(Some(d));
        }
        let solved = geds.iter().filter(|d| d.is_some()).count();
        let ms = elapsed_ms(seed, start.elapsed().as_secs_f64() * 1e3);
        let (mls, xls) = gaps_ls.mean_max();
        let (mbm, xbm) = gaps_bm.mean_max();
        let (mlp, xlp) = gaps_lp.mean_max();
        for tau in &taus {
            let matches =
                geds.iter().filter(|d| d.as_ref().is_some_and(|d| d <= tau)).count();
            csv.push_str(&format!(
                "{qid},{:.4},{matches},{solved},{mls},{xls},{mbm},{xbm},{mlp},{xlp},{ms:.3}\n",
                cost_to_f64(tau.clone()),
            ));
        }
    }
    match out {
        Some(p) => std::fs::write(p, csv).map_err(data)?,
        None => print!("{csv}"),
    }
    Ok(if any_aborted { 3 } else { 0 })
}

fn cmd_selftest() -> u8 {
    let outcomes = gedsearch::selftest::run_all_with(|o| println!("{}", o.line()));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        println!("all {} criteria passed", outcomes.len());
        0
    } else {
        println!("{failed} of {} criteria FAILED", outcomes.len());
        2
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Cmd::Bound { alg, g, h, costs, dump_lp, seed } => {
            cmd_bound(alg, &g, &h, &costs, &dump_lp, seed)
        }
        Cmd::Ged { g, h, costs, oracle, budget_ms, dump_lp, seed } => {
            cmd_ged(&g, &h, &costs, oracle, budget_ms, &dump_lp, seed)
        }
        Cmd::Search { query, dataset, tau, tau_mult, costs, jobs, budget_ms, csv, seed } => {
            cmd_search(&query, dataset, &tau, &tau_mult, &costs, jobs, budget_ms, &csv, seed)
        }
        Cmd::Bench { dataset, queries, taus, costs, budget_ms, out, star_cycle, seed } => {
            cmd_bench(dataset, &queries, &taus, &costs, budget_ms, &out, star_cycle, seed)
        }
        Cmd::Selftest => Ok(cmd_selftest()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
