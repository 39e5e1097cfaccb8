//! The filter-and-verify similarity search pipeline: a hierarchy of lower
//! bounds discards dataset graphs whose bound already exceeds the threshold,
//! and the survivors go through exact threshold verification.

use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::bb::{ilp_solve_thresholded, Budget, IlpStatus, SolveMode};
use crate::bounds::{bm_bound, fori_lp_bound, ls_bound, BoundAlgorithm, BoundError};
use crate::costs::{Cost, CostModel};
use crate::graph::LabeledGraph;
use crate::ilp::{add_threshold, build_fori};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("filter chain stage `{0}` is not applicable under cost model `{1}`")]
    InvalidChain(&'static str, String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Bb(#[from] crate::bb::BbError),
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub tau: Cost,
    pub filter_chain: Vec<BoundAlgorithm>,
    /// Per-graph verification budget in milliseconds (None = unlimited).
    pub budget_ms: Option<u64>,
    /// Dataset-parallel worker count (0 = let the thread pool decide).
    pub jobs: usize,
}

impl SearchConfig {
    /// Default filter chain per cost model: the label-set bound only applies
    /// under unit costs, and the branch bound is skipped for the
    /// payload-heavy protein model.
    pub fn for_model(tau: Cost, c: &dyn CostModel) -> Self {
        let filter_chain = match c.name() {
            "unit" => vec![BoundAlgorithm::Ls, BoundAlgorithm::Bm, BoundAlgorithm::ForiLp],
            "protein" => vec![BoundAlgorithm::ForiLp],
            _ => vec![BoundAlgorithm::Bm, BoundAlgorithm::ForiLp],
        };
        Self { tau, filter_chain, budget_ms: None, jobs: 0 }
    }

    pub fn validate(&self, c: &dyn CostModel) -> Result<(), SearchError> {
        if self.filter_chain.contains(&BoundAlgorithm::Ls) && !c.is_unit() {
            return Err(SearchError::InvalidChain("ls", c.name().to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageOutcome {
    Pass(Cost),
    Discard(Cost),
}

/// One filter stage: discard iff the bound strictly exceeds the threshold
/// (a bound equal to τ is kept for verification, since distance = τ accepts).
pub fn filter_stage(
    q: &LabeledGraph,
    h: &LabeledGraph,
    alg: BoundAlgorithm,
    tau: Cost,
    c: &dyn CostModel,
) -> Result<StageOutcome, BoundError> {
    let value = match alg {
        BoundAlgorithm::Ls => ls_bound(q, h, c)?.value,
        BoundAlgorithm::Bm => bm_bound(q, h, c).value,
        BoundAlgorithm::ForiLp => fori_lp_bound(q, h, c, &[])?.value,
    };
    Ok(if value > tau { StageOutcome::Discard(value) } else { StageOutcome::Pass(value) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Filtered(BoundAlgorithm),
    VerifiedInfeasible,
    Aborted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Accepted => "accepted",
            Verdict::Filtered(a) => match a {
                BoundAlgorithm::Ls => "filtered-ls",
                BoundAlgorithm::Bm => "filtered-bm",
                BoundAlgorithm::ForiLp => "filtered-forilp",
            },
            Verdict::VerifiedInfeasible => "verified-infeasible",
            Verdict::Aborted => "aborted",
        }
    }
}

/// Per-dataset-graph record: which stage decided, the bound values computed
/// along the way, and the wall time spent.
#[derive(Debug, Clone)]
pub struct GraphOutcome {
    pub id: usize,
    pub verdict: Verdict,
    /// Last stage that ran ("ls"/"bm"/"forilp"/"verify").
    pub stage_reached: &'static str,
    pub ls: Option<Cost>,
    pub bm: Option<Cost>,
    pub forilp: Option<Cost>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    /// Ids (dataset positions) of accepted graphs, ascending.
    pub accepted: Vec<usize>,
    pub outcomes: Vec<GraphOutcome>,
    pub filtered_per_stage: Vec<(BoundAlgorithm, usize)>,
    pub verified_infeasible: usize,
    pub aborted: usize,
}

impl SearchReport {
    pub fn matches_fraction(&self) -> f64 {
        if self.outcomes.is_empty() {
            return 0.0;
        }
        self.accepted.len() as f64 / self.outcomes.len() as f64
    }
}

fn evaluate_one(
    q: &LabeledGraph,
    h: &LabeledGraph,
    id: usize,
    c: &dyn CostModel,
    cfg: &SearchConfig,
    cancel: &Arc<AtomicBool>,
) -> Result<GraphOutcome, SearchError> {
    let start = Instant::now();
    let mut out = GraphOutcome {
        id,
        verdict: Verdict::Accepted,
        stage_reached: "verify",
        ls: None,
        bm: None,
        forilp: None,
        elapsed_ms: 0.0,
    };
    for &alg in &cfg.filter_chain {
        let stage = filter_stage(q, h, alg, cfg.tau, c)?;
        let (value, discarded) = match stage {
            StageOutcome::Pass(v) => (v, false),
            StageOutcome::Discard(v) => (v, true),
        };
        match alg {
            BoundAlgorithm::Ls => out.ls = Some(value),
            BoundAlgorithm::Bm => out.bm = Some(value),
            BoundAlgorithm::ForiLp => out.forilp = Some(value),
        }
        if discarded {
            out.verdict = Verdict::Filtered(alg);
            out.stage_reached = alg.name();
            out.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            return Ok(out);
        }
    }
    let tm = add_threshold(&build_fori(q, h, c), cfg.tau);
    let mut budget = match cfg.budget_ms {
        Some(ms) => Budget::with_time(ms),
        None => Budget::unlimited(),
    };
    budget.cancel = Some(Arc::clone(cancel));
    let sol = ilp_solve_thresholded(&tm, SolveMode::FeasibilityOnly, &budget)?;
    out.verdict = match sol.status {
        IlpStatus::Feasible | IlpStatus::Optimal => Verdict::Accepted,
        IlpStatus::Infeasible => Verdict::VerifiedInfeasible,
        IlpStatus::Aborted => Verdict::Aborted,
    };
    out.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

/// Runs the full pipeline for one query over a dataset. Dataset-parallel;
/// the accepted set and all recorded values are independent of the worker
/// count (the reduction is keyed on dataset position).
pub fn fori_sim(
    q: &LabeledGraph,
    dataset: &[LabeledGraph],
    c: &dyn CostModel,
    cfg: &SearchConfig,
) -> Result<SearchReport, SearchError> {
    cfg.validate(c)?;
    let cancel = Arc::new(AtomicBool::new(false));

    let run = || -> Result<Vec<GraphOutcome>, SearchError> {
        use rayon::prelude::*;
        dataset
            .par_iter()
            .enumerate()
            .map(|(id, h)| evaluate_one(q, h, id, c, cfg, &cancel))
            .collect()
    };
    let outcomes = if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .expect("thread pool")
            .install(run)?
    } else {
        run()?
    };

    let accepted: Vec<usize> =
        outcomes.iter().filter(|o| o.verdict == Verdict::Accepted).map(|o| o.id).collect();
    let mut filtered_per_stage: Vec<(BoundAlgorithm, usize)> =
        cfg.filter_chain.iter().map(|&a| (a, 0)).collect();
    let mut verified_infeasible = 0;
    let mut aborted = 0;
    for o in &outcomes {
        match o.verdict {
            Verdict::Filtered(a) => {
                if let Some(slot) = filtered_per_stage.iter_mut().find(|(b, _)| *b == a) {
                    slot.1 += 1;
                }
            }
            Verdict::VerifiedInfeasible => verified_infeasible += 1,
            Verdict::Aborted => aborted += 1,
            Verdict::Accepted => {}
        }
    }
    Ok(SearchReport { accepted, outcomes, filtered_per_stage, verified_infeasible, aborted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::unit_costs;
    use crate::graph::star_cycle_instance;
    use crate::oracle::brute_force_ged;
    use crate::testutil::{random_alphabets, random_graph, rng, RandomGraphSpec};

    fn small_dataset(count: usize, seed: u64) -> (Vec<LabeledGraph>, LabeledGraph) {
        let spec = RandomGraphSpec { max_nodes: 5, max_edges: 6, ..RandomGraphSpec::default() };
        let alph = random_alphabets(&spec);
        let mut r = rng(seed);
        let q = random_graph(&mut r, &alph, &spec);
        let ds = (0..count).map(|_| random_graph(&mut r, &alph, &spec)).collect();
        (ds, q)
    }

    #[test]
    fn empty_dataset_empty_report() {
        let (_, q) = small_dataset(0, 1);
        let u = unit_costs();
        let cfg = SearchConfig::for_model(Cost::from(3), &u);
        let report = fori_sim(&q, &[], &u, &cfg).unwrap();
        assert!(report.accepted.is_empty());
        assert!(report.outcomes.is_empty());
    }

    #[test]
    fn ls_stage_rejected_for_non_unit() {
        let (ds, q) = small_dataset(1, 2);
        let c = crate::costs::aids_muta_costs();
        let cfg = SearchConfig {
            tau: Cost::from(3),
            filter_chain: vec![BoundAlgorithm::Ls],
            budget_ms: None,
            jobs: 0,
        };
        assert!(matches!(fori_sim(&q, &ds, &c, &cfg), Err(SearchError::InvalidChain(..))));
    }

    #[test]
    fn matches_oracle_filter() {
        let (ds, q) = small_dataset(10, 3);
        let u = unit_costs();
        for tau in 0..=6i64 {
            let cfg = SearchConfig::for_model(Cost::from(tau), &u);
            let report = fori_sim(&q, &ds, &u, &cfg).unwrap();
            let expect: Vec<usize> = ds
                .iter()
                .enumerate()
                .filter(|(_, h)| brute_force_ged(&q, h, &u).unwrap().0 <= Cost::from(tau))
                .map(|(i, _)| i)
                .collect();
            assert_eq!(report.accepted, expect, "tau={tau}");
            assert_eq!(report.aborted, 0);
        }
    }

    #[test]
    fn deterministic_across_jobs() {
        let (ds, q) = small_dataset(8, 4);
        let u = unit_costs();
        let mut cfg = SearchConfig::for_model(Cost::from(4), &u);
        cfg.jobs = 1;
        let one = fori_sim(&q, &ds, &u, &cfg).unwrap();
        cfg.jobs = 4;
        let four = fori_sim(&q, &ds, &u, &cfg).unwrap();
        assert_eq!(one.accepted, four.accepted);
        let verdicts: Vec<_> = one.outcomes.iter().map(|o| o.verdict).collect();
        let verdicts4: Vec<_> = four.outcomes.iter().map(|o| o.verdict).collect();
        assert_eq!(verdicts, verdicts4);
    }

    #[test]
    fn filter_stage_boundary_semantics() {
        let (s, c5) = star_cycle_instance(5).unwrap();
        let u = unit_costs();
        // LP bound is 5 > 4: discard; branch bound is 3 ≤ 4: pass
        assert!(matches!(
            filter_stage(&s, &c5, BoundAlgorithm::ForiLp, Cost::from(4), &u).unwrap(),
            StageOutcome::Discard(v) if v == Cost::from(5)
        ));
        assert!(matches!(
            filter_stage(&s, &c5, BoundAlgorithm::Bm, Cost::from(4), &u).unwrap(),
            StageOutcome::Pass(v) if v == Cost::from(3)
        ));
        // bound exactly τ passes
        assert!(matches!(
            filter_stage(&s, &c5, BoundAlgorithm::ForiLp, Cost::from(5), &u).unwrap(),
            StageOutcome::Pass(_)
        ));
    }
}
