//! The acceptance suite: nine checks tying the implementation to its
//! closed-form and oracle ground truths. Used by the `selftest` CLI command
//! and by the acceptance integration test.

use num_traits::Zero;

use crate::bb::{
    extract_edit_path, ilp_solve, ilp_solve_thresholded, Budget, IlpStatus, SolveMode,
};
use crate::bounds::{bm_bound, fori_lp_bound, ls_bound};
use crate::costs::{aids_muta_costs, cost, protein_costs, unit_costs, Cost, CostModel};
use crate::graph::{star_cycle_instance, Alphabets, EdgePayload, EdgeSpec, LabeledGraph, NodePayload};
use crate::ilp::{add_threshold, build_f1, build_fori, reduced_costs, RowKind};
use crate::oracle::brute_force_ged;
use crate::search::{fori_sim, SearchConfig};
use crate::simplex::{big_to_cost, check_dual_certificate, lp_solve_exact};
use crate::testutil::{fig2_pair, random_alphabets, random_graph, rng, RandomGraphSpec};

pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {} ({}): {} — {}",
            self.index,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

type Check = Result<String, String>;

pub fn run_all() -> Vec<CriterionOutcome> {
    run_all_with(|_| {})
}

/// Runs the suite, invoking `observe` on every outcome as it completes (the
/// CLI streams progress through this).
pub fn run_all_with(mut observe: impl FnMut(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    let checks: Vec<(&'static str, fn() -> Check)> = vec![
        ("closed-form star/cycle values", c1_closed_form),
        ("constructed dual certificate", c2_dual_certificate),
        ("worked example agreement", c3_worked_example),
        ("bound hierarchy on random pairs", c4_hierarchy),
        ("oracle equivalence of the exact solver", c5_oracle_equivalence),
        ("threshold verification correctness", c6_threshold_sweep),
        ("end-to-end search vs oracle filter", c7_search_end_to_end),
        ("non-uniform cost constants", c8_cost_constants),
        ("scale statement / optional dataset smoke", c9_scale),
    ];
    checks
        .into_iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            let outcome = CriterionOutcome { index: i + 1, name, passed, detail };
            observe(&outcome);
            outcome
        })
        .collect()
}

/// For every n in 3..=12: LP bound = 2n−5 and branch bound = n−2, exactly.
fn c1_closed_form() -> Check {
    let u = unit_costs();
    let start = std::time::Instant::now();
    for n in 3..=12usize {
        let (s, c) = star_cycle_instance(n).map_err(|e| e.to_string())?;
        let lp = fori_lp_bound(&s, &c, &u, &[]).map_err(|e| e.to_string())?;
        if lp.value != Cost::from(2 * n as i64 - 5) {
            return Err(format!("n={n}: LP bound {} ≠ {}", lp.value, 2 * n - 5));
        }
        let cert = lp.certificate.ok_or("missing certificate")?;
        if cert.primal_objective != cert.dual_objective {
            return Err(format!("n={n}: strong duality violated"));
        }
        let bm = bm_bound(&s, &c, &u).value;
        if bm != Cost::from(n as i64 - 2) {
            return Err(format!("n={n}: branch bound {bm} ≠ {}", n - 2));
        }
    }
    Ok(format!("n=3..12 exact in rational mode, {:.2?}", start.elapsed()))
}

/// The hand-built dual (center multiplier 6, other node multipliers 2, arc
/// multipliers 2 on the center's linking rows, zero elsewhere) certifies the
/// LP value 2n−5 for every n in 3..=12.
fn c2_dual_certificate() -> Check {
    let u = unit_costs();
    for n in 3..=12usize {
        let (s, c) = star_cycle_instance(n).map_err(|e| e.to_string())?;
        let model = build_fori(&s, &c, &u);
        let dual: Vec<Cost> = model
            .rows
            .iter()
            .map(|row| match row.kind {
                RowKind::AssignG(0) => Cost::from(6),
                RowKind::AssignG(_) => Cost::from(2),
                RowKind::TopoT { i: 0, .. } => Cost::from(2),
                _ => Cost::zero(),
            })
            .collect();
        let sol = lp_solve_exact(&model).map_err(|e| e.to_string())?;
        let primal: Vec<Cost> = sol
            .primal
            .iter()
            .map(big_to_cost)
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let obj = big_to_cost(&sol.objective).map_err(|e| e.to_string())?;
        if obj != Cost::from(2 * n as i64 - 5) {
            return Err(format!("n={n}: LP objective {obj} off the closed form"));
        }
        match check_dual_certificate(&model, &primal, &dual) {
            Ok(true) => {}
            Ok(false) => return Err(format!("n={n}: constructed dual rejected")),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok("constructed dual certifies 2n−5 for n=3..12".into())
}

/// Exact solver on both formulations, the brute-force oracle, and the
/// threshold boundary all agree that the worked example pair has distance 5.
fn c3_worked_example() -> Check {
    let (g, h) = fig2_pair();
    let u = unit_costs();
    let budget = Budget::unlimited();
    let five = Cost::from(5);

    let fori = ilp_solve(&build_fori(&g, &h, &u), SolveMode::Optimize, &budget)
        .map_err(|e| e.to_string())?;
    if fori.objective != Some(five) {
        return Err(format!("arc formulation optimum {:?} ≠ 5", fori.objective));
    }
    let f1 = ilp_solve(&build_f1(&g, &h, &u), SolveMode::Optimize, &budget)
        .map_err(|e| e.to_string())?;
    if f1.objective != Some(five) {
        return Err(format!("cross-check formulation optimum {:?} ≠ 5", f1.objective));
    }
    let (oracle, _) = brute_force_ged(&g, &h, &u).map_err(|e| e.to_string())?;
    if oracle != five {
        return Err(format!("oracle {oracle} ≠ 5"));
    }
    let path = extract_edit_path(&g, &h, &u, &fori).map_err(|e| e.to_string())?;
    if path.total != five {
        return Err(format!("edit path re-sums to {} ≠ 5", path.total));
    }
    let base = build_fori(&g, &h, &u);
    let r4 = ilp_solve_thresholded(
        &add_threshold(&base, Cost::from(4)),
        SolveMode::FeasibilityOnly,
        &budget,
    )
    .map_err(|e| e.to_string())?;
    let r5 = ilp_solve_thresholded(&add_threshold(&base, five), SolveMode::FeasibilityOnly, &budget)
        .map_err(|e| e.to_string())?;
    if r4.status != IlpStatus::Infeasible {
        return Err("threshold 4 not proven infeasible".into());
    }
    if r5.status != IlpStatus::Feasible {
        return Err("threshold 5 not found feasible".into());
    }
    Ok("both formulations, oracle, edit path, and τ∈{4,5} boundary agree on 5".into())
}

/// On 500 random unit-cost pairs the bounds are ordered LP ≥ branch ≥
/// label-set with zero violations (exact arithmetic), and all are ≤ the
/// oracle distance.
fn c4_hierarchy() -> Check {
    let spec = RandomGraphSpec { max_nodes: 7, max_edges: 10, node_labels: 3, edge_labels: 2 };
    let alph = random_alphabets(&spec);
    let mut r = rng(0xc4);
    let u = unit_costs();
    let start = std::time::Instant::now();
    for trial in 0..500 {
        let g = random_graph(&mut r, &alph, &spec);
        let h = random_graph(&mut r, &alph, &spec);
        let ls = ls_bound(&g, &h, &u).map_err(|e| e.to_string())?.value;
        let bm = bm_bound(&g, &h, &u).value;
        let lp = fori_lp_bound(&g, &h, &u, &[]).map_err(|e| e.to_string())?.value;
        if !(lp >= bm && bm >= ls) {
            return Err(format!("trial {trial}: hierarchy broken (lp={lp}, bm={bm}, ls={ls})"));
        }
        let (ged, _) = brute_force_ged(&g, &h, &u).map_err(|e| e.to_string())?;
        if lp > ged {
            return Err(format!("trial {trial}: LP bound {lp} exceeds distance {ged}"));
        }
    }
    Ok(format!("500 pairs, zero violations, {:.2?}", start.elapsed()))
}

/// The exact solver reproduces the brute-force distance on 200 random pairs
/// under both unit and non-uniform molecular costs, and the extracted edit
/// path re-sums to the objective.
fn c5_oracle_equivalence() -> Check {
    let spec = RandomGraphSpec { max_nodes: 6, max_edges: 9, node_labels: 3, edge_labels: 2 };
    let alph = random_alphabets(&spec);
    let mut r = rng(0xc5);
    let unit = unit_costs();
    let aids = aids_muta_costs();
    let budget = Budget::unlimited();
    let start = std::time::Instant::now();
    for trial in 0..200 {
        let g = random_graph(&mut r, &alph, &spec);
        let h = random_graph(&mut r, &alph, &spec);
        for c in [&unit as &dyn CostModel, &aids] {
            let (expect, _) = brute_force_ged(&g, &h, c).map_err(|e| e.to_string())?;
            let sol = ilp_solve(&build_fori(&g, &h, c), SolveMode::Optimize, &budget)
                .map_err(|e| e.to_string())?;
            if sol.status != IlpStatus::Optimal || sol.objective != Some(expect) {
                return Err(format!(
                    "trial {trial} ({}): solver {:?} ≠ oracle {expect}",
                    c.name(),
                    sol.objective
                ));
            }
            let path = extract_edit_path(&g, &h, c, &sol).map_err(|e| e.to_string())?;
            if path.total != expect {
                return Err(format!("trial {trial} ({}): path cost off", c.name()));
            }
        }
    }
    Ok(format!("200 pairs × 2 cost models, all equal, {:.2?}", start.elapsed()))
}

/// Threshold verification agrees with (oracle distance ≤ τ) for τ swept
/// over an 8-point grid spanning [0, K], on 50 random pairs.
fn c6_threshold_sweep() -> Check {
    let spec = RandomGraphSpec { max_nodes: 5, max_edges: 7, node_labels: 3, edge_labels: 2 };
    let alph = random_alphabets(&spec);
    let mut r = rng(0xc6);
    let u = unit_costs();
    let budget = Budget::unlimited();
    let start = std::time::Instant::now();
    let mut checked = 0;
    for trial in 0..50 {
        let g = random_graph(&mut r, &alph, &spec);
        let h = random_graph(&mut r, &alph, &spec);
        let k = reduced_costs(&g, &h, &u).k;
        let (ged, _) = brute_force_ged(&g, &h, &u).map_err(|e| e.to_string())?;
        let model = build_fori(&g, &h, &u);
        for j in 0..8i64 {
            let tau = k * cost(j, 7);
            let sol = ilp_solve_thresholded(
                &add_threshold(&model, tau),
                SolveMode::FeasibilityOnly,
                &budget,
            )
            .map_err(|e| e.to_string())?;
            let feasible = match sol.status {
                IlpStatus::Feasible | IlpStatus::Optimal => true,
                IlpStatus::Infeasible => false,
                IlpStatus::Aborted => return Err(format!("trial {trial}: aborted")),
            };
            if feasible != (ged <= tau) {
                return Err(format!(
                    "trial {trial}: τ={tau}, oracle distance {ged}, verdict feasible={feasible}"
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} verdicts match the oracle, {:.2?}", start.elapsed()))
}

/// The full pipeline returns exactly the oracle-filtered accepted set for
/// every τ in 1..=10, the accepted sets are monotone in τ, and worker count
/// does not change the result.
fn c7_search_end_to_end() -> Check {
    let spec = RandomGraphSpec { max_nodes: 5, max_edges: 6, node_labels: 2, edge_labels: 2 };
    let alph = random_alphabets(&spec);
    let mut r = rng(0xc7);
    let u = unit_costs();
    let dataset: Vec<LabeledGraph> = (0..30).map(|_| random_graph(&mut r, &alph, &spec)).collect();
    let queries: Vec<LabeledGraph> = (0..3).map(|_| random_graph(&mut r, &alph, &spec)).collect();
    let start = std::time::Instant::now();
    for (qi, q) in queries.iter().enumerate() {
        let mut previous: Vec<usize> = Vec::new();
        for tau in 1..=10i64 {
            let mut cfg = SearchConfig::for_model(Cost::from(tau), &u);
            cfg.jobs = 1;
            let report = fori_sim(q, &dataset, &u, &cfg).map_err(|e| e.to_string())?;
            if report.aborted > 0 {
                return Err(format!("query {qi} τ={tau}: aborted graphs"));
            }
            let expect: Vec<usize> = dataset
                .iter()
                .enumerate()
                .filter_map(|(i, h)| {
                    let (d, _) = brute_force_ged(q, h, &u).unwrap();
                    (d <= Cost::from(tau)).then_some(i)
                })
                .collect();
            if report.accepted != expect {
                return Err(format!(
                    "query {qi} τ={tau}: accepted {:?} ≠ oracle {:?}",
                    report.accepted, expect
                ));
            }
            if !previous.iter().all(|i| report.accepted.contains(i)) {
                return Err(format!("query {qi} τ={tau}: not monotone in τ"));
            }
            previous = report.accepted.clone();
            cfg.jobs = 4;
            let report4 = fori_sim(q, &dataset, &u, &cfg).map_err(|e| e.to_string())?;
            if report4.accepted != report.accepted {
                return Err(format!("query {qi} τ={tau}: worker count changed the result"));
            }
        }
    }
    Ok(format!("3 queries × τ=1..10 × 30 graphs match the oracle filter, {:.2?}", start.elapsed()))
}

/// Table-driven spot checks of the non-uniform cost constants.
fn c8_cost_constants() -> Check {
    let aids = aids_muta_costs();
    let alph = std::sync::Arc::new(Alphabets::from_tokens(&["C", "N"], &["1", "2"]));
    let c = alph.node_label("C").unwrap();
    let n = alph.node_label("N").unwrap();
    let one = alph.edge_label("1").unwrap();
    let two = alph.edge_label("2").unwrap();
    let g = LabeledGraph::build(alph.clone(), vec![c, n], vec![EdgeSpec::new(0, 1, one)]).unwrap();
    let h = LabeledGraph::build(alph.clone(), vec![n, c], vec![EdgeSpec::new(0, 1, two)]).unwrap();
    let aids_table: Vec<(&str, Cost, Cost)> = vec![
        ("node subst C→N", aids.node_subst(&g, 0, &h, 0), cost(11, 2)),
        ("node subst C→C", aids.node_subst(&g, 0, &h, 1), Cost::zero()),
        ("node del", aids.node_del(&g, 0), cost(11, 4)),
        ("node ins", aids.node_ins(&h, 0), cost(11, 4)),
        ("edge subst 1→2", aids.edge_subst(&g, 0, &h, 0), cost(33, 20)),
        ("edge del", aids.edge_del(&g, 0), cost(33, 40)),
        ("edge ins", aids.edge_ins(&h, 0), cost(33, 40)),
    ];
    for (what, got, want) in aids_table {
        if got != want {
            return Err(format!("molecular model, {what}: {got} ≠ {want}"));
        }
    }

    let prot = protein_costs();
    let palph = std::sync::Arc::new(Alphabets::from_tokens(&["n"], &["e"]));
    let nl = palph.node_label("n").unwrap();
    let el = palph.edge_label("e").unwrap();
    let pay = |t: &str, s: &str| {
        Some(NodePayload { struct_type: t.into(), sequence: s.into() })
    };
    let mk = |payloads: Vec<Option<NodePayload>>, edge: Option<EdgePayload>| {
        let n = payloads.len();
        let edges = if edge.is_some() {
            let mut e = EdgeSpec::new(0, 1, el);
            e.payload = edge;
            vec![e]
        } else {
            Vec::new()
        };
        LabeledGraph::build(palph.clone(), vec![nl; n], edges)
            .unwrap()
            .with_node_payloads(payloads)
    };
    let ep = |t1: &str, t2: Option<&str>| {
        Some(EdgePayload { t1: t1.into(), t2: t2.map(Into::into) })
    };
    let ga = mk(vec![pay("helix", "AA"), pay("helix", "AB")], ep("s", None));
    let gb = mk(vec![pay("sheet", "AA"), pay("helix", "AB")], ep("t", Some("u")));
    let prot_table: Vec<(&str, Cost, Cost)> = vec![
        ("type mismatch", prot.node_subst(&ga, 0, &gb, 0), cost(33, 2)),
        ("sequence distance ×0.75", prot.node_subst(&ga, 0, &gb, 1), cost(3, 4)),
        ("node del", prot.node_del(&ga, 0), cost(33, 4)),
        ("node ins", prot.node_ins(&gb, 0), cost(33, 4)),
        ("edge del, single tuple", prot.edge_del(&ga, 0), cost(1, 4)),
        ("edge ins, double tuple", prot.edge_ins(&gb, 0), cost(1, 2)),
        ("edge subst all-mismatch", prot.edge_subst(&ga, 0, &gb, 0), cost(3, 4)),
    ];
    for (what, got, want) in prot_table {
        if got != want {
            return Err(format!("protein model, {what}: {got} ≠ {want}"));
        }
    }
    if crate::costs::levenshtein("kitten", "sitting") != 3 {
        return Err("string edit distance spot check failed".into());
    }
    Ok("molecular and protein constants match the published table".into())
}

/// The paper-scale experiments (thousands of graphs, hour budgets, tens of
/// GB) are out of scope at desk scale; criteria 1–8 substitute closed-form
/// and oracle-equivalence checks. If a dataset directory is available via
/// the environment, run a smoke search over up to 100 GXL files.
fn c9_scale() -> Check {
    let Some(dir) = std::env::var_os(crate::io::DATA_DIR_ENV) else {
        return Ok("full-scale runs not reproducible at desk scale; no dataset \
                   directory configured, smoke run skipped"
            .into());
    };
    let dir = std::path::PathBuf::from(dir);
    let graphs = crate::io::load_dir(&dir, &crate::io::GxlAttrMap::default())
        .map_err(|e| format!("dataset smoke load failed: {e}"))?;
    if graphs.is_empty() {
        return Ok("dataset directory empty, smoke run skipped".into());
    }
    let sample: Vec<LabeledGraph> = graphs.iter().take(100).map(|(_, g)| g.clone()).collect();
    let q = sample[0].clone();
    let u = unit_costs();
    for mult in [1i64, 5, 10] {
        let tau = Cost::from(mult) * cost(143, 40); // dataset constant 3.575
        let mut cfg = SearchConfig::for_model(tau, &u);
        cfg.budget_ms = Some(10_000);
        let report = fori_sim(&q, &sample, &u, &cfg).map_err(|e| e.to_string())?;
        if report.aborted > 0 {
            return Err(format!("smoke run τ-mult {mult}: coverage below 100%"));
        }
        if mult == 1 && report.filtered_per_stage.iter().any(|(_, n)| *n == 0) {
            return Err("smoke run τ-mult 1: a filter stage discarded nothing".into());
        }
    }
    Ok(format!("smoke search over {} dataset graphs completed with full coverage", sample.len()))
}
