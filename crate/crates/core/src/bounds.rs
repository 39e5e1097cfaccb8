//! Global lower bounds on the edit distance: the label-set bound, the
//! branch-match bound, and the LP-relaxation bound with its strong-duality
//! certificate, plus the relative gap metric.

use std::time::{Duration, Instant};

use num_traits::Zero;
use thiserror::Error;

use crate::assignment::{lsap_cost, pad_for_insert_delete};
use crate::costs::{Cost, CostModel};
use crate::graph::LabeledGraph;
use crate::ilp::{build_fori, ForiLayout, IlpModel};
use crate::simplex::{big_to_cost, lp_solve_exact_fast, LpError, LpStatus};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("the label-set bound is defined for unit costs only (got model `{0}`)")]
    UnsupportedCostModel(String),
    #[error("anchor fixings admit no feasible mapping")]
    InfeasibleFixings,
    #[error("fixing refers to node outside the graph pair")]
    FixingOutOfRange,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("relative gap is undefined for edit distance 0 with a nonzero bound")]
    DivisionByZeroGed,
    #[error("bound {lb} exceeds edit distance {ged}")]
    BoundExceedsGed { ged: Cost, lb: Cost },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundAlgorithm {
    Ls,
    Bm,
    ForiLp,
}

impl BoundAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            BoundAlgorithm::Ls => "ls",
            BoundAlgorithm::Bm => "bm",
            BoundAlgorithm::ForiLp => "forilp",
        }
    }
}

/// Strong-duality evidence for an LP-based bound: both objectives, which must
/// coincide (exactly in rational mode).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub primal_objective: Cost,
    pub dual_objective: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub value: Cost,
    pub algorithm: BoundAlgorithm,
    pub elapsed: Duration,
    pub certificate: Option<Certificate>,
}

/// Label-set bound: multiset edit distance between the node-label multisets
/// plus the same over edge labels. Sound for unit costs only.
pub fn ls_bound(
    g: &LabeledGraph,
    h: &LabeledGraph,
    c: &dyn CostModel,
) -> Result<BoundResult, BoundError> {
    if !c.is_unit() {
        return Err(BoundError::UnsupportedCostModel(c.name().to_string()));
    }
    let start = Instant::now();
    let gv: Vec<&str> = g.node_labels().iter().map(|&l| g.alphabets().node_token(l)).collect();
    let hv: Vec<&str> = h.node_labels().iter().map(|&l| h.alphabets().node_token(l)).collect();
    let ge: Vec<&str> = g.edge_labels().iter().map(|&l| g.alphabets().edge_token(l)).collect();
    let he: Vec<&str> = h.edge_labels().iter().map(|&l| h.alphabets().edge_token(l)).collect();
    let v = crate::assignment::multiset_edit_distance(&gv, &hv)
        + crate::assignment::multiset_edit_distance(&ge, &he);
    Ok(BoundResult {
        value: Cost::from(v as i64),
        algorithm: BoundAlgorithm::Ls,
        elapsed: start.elapsed(),
        certificate: None,
    })
}

/// Branch-match bound: an assignment between vertices (with ε padding) priced
/// by node substitution cost plus half the optimal ε-padded matching of the
/// incident edge labels. Edge terms are halved because each edge contributes
/// to the branches of both endpoints.
pub fn bm_bound(g: &LabeledGraph, h: &LabeledGraph, c: &dyn CostModel) -> BoundResult {
    let start = Instant::now();
    let n = g.n();
    let m = h.n();
    let half = crate::costs::cost(1, 2);

    let inner = |i: u32, k: u32| -> Cost {
        let ge = g.incident_edges(i);
        let he = h.incident_edges(k);
        if ge.is_empty() && he.is_empty() {
            return Cost::zero();
        }
        let c_map: Vec<Vec<Cost>> =
            ge.iter().map(|&e| he.iter().map(|&f| c.edge_subst(g, e, h, f)).collect()).collect();
        let del: Vec<Cost> = ge.iter().map(|&e| c.edge_del(g, e)).collect();
        let ins: Vec<Cost> = he.iter().map(|&f| c.edge_ins(h, f)).collect();
        let padded = pad_for_insert_delete(&c_map, &del, &ins).expect("consistent dims");
        lsap_cost(&padded).expect("nonnegative square matrix")
    };

    let c_map: Vec<Vec<Cost>> = (0..n as u32)
        .map(|i| {
            (0..m as u32).map(|k| c.node_subst(g, i, h, k) + half * inner(i, k)).collect()
        })
        .collect();
    let del: Vec<Cost> = (0..n as u32)
        .map(|i| {
            let edges: Cost = g.incident_edges(i).iter().map(|&e| c.edge_del(g, e)).sum();
            c.node_del(g, i) + half * edges
        })
        .collect();
    let ins: Vec<Cost> = (0..m as u32)
        .map(|k| {
            let edges: Cost = h.incident_edges(k).iter().map(|&f| c.edge_ins(h, f)).sum();
            c.node_ins(h, k) + half * edges
        })
        .collect();
    let padded = pad_for_insert_delete(&c_map, &del, &ins).expect("consistent dims");
    let value = lsap_cost(&padded).expect("nonnegative square matrix");
    BoundResult { value, algorithm: BoundAlgorithm::Bm, elapsed: start.elapsed(), certificate: None }
}

/// The arc-oriented model with the given anchor fixings applied as pinned
/// variables. Fixings must be injective on both sides.
pub fn fori_with_fixings(
    g: &LabeledGraph,
    h: &LabeledGraph,
    c: &dyn CostModel,
    fixed: &[(u32, u32)],
) -> Result<IlpModel, BoundError> {
    let mut model = build_fori(g, h, c);
    let layout = ForiLayout::new(g, h);
    for &(i, k) in fixed {
        if i as usize >= g.n() || k as usize >= h.n() {
            return Err(BoundError::FixingOutOfRange);
        }
        model.fix_variable(layout.x_index(i, k), Cost::from(1));
    }
    Ok(model)
}

/// LP-relaxation bound, solved exactly in rational arithmetic. The
/// certificate carries the primal and dual objectives, which strong duality
/// forces to be equal.
pub fn fori_lp_bound(
    g: &LabeledGraph,
    h: &LabeledGraph,
    c: &dyn CostModel,
    fixed: &[(u32, u32)],
) -> Result<BoundResult, BoundError> {
    let start = Instant::now();
    let model = fori_with_fixings(g, h, c, fixed)?;
    let sol = lp_solve_exact_fast(&model)?;
    match sol.status {
        LpStatus::Infeasible { .. } => Err(BoundError::InfeasibleFixings),
        LpStatus::Optimal => {
            let primal = big_to_cost(&sol.objective)?;
            let dual = big_to_cost(&sol.dual_objective)?;
            Ok(BoundResult {
                value: primal,
                algorithm: BoundAlgorithm::ForiLp,
                elapsed: start.elapsed(),
                certificate: Some(Certificate { primal_objective: primal, dual_objective: dual }),
            })
        }
    }
}

/// Relative gap (ged − lb) / ged ∈ [0,1]. For ged = 0 the formula is
/// undefined; a zero bound reports gap 0 by convention, anything else errors.
pub fn gap(ged: Cost, lb: Cost) -> Result<Cost, BoundError> {
    if ged.is_zero() {
        return if lb.is_zero() { Ok(Cost::zero()) } else { Err(BoundError::DivisionByZeroGed) };
    }
    if lb > ged {
        return Err(BoundError::BoundExceedsGed { ged, lb });
    }
    Ok((ged - lb) / ged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{aids_muta_costs, cost, unit_costs};
    use crate::graph::star_cycle_instance;
    use crate::testutil::fig2_pair;

    #[test]
    fn ls_identical_graphs() {
        let (g, _) = fig2_pair();
        assert_eq!(ls_bound(&g, &g, &unit_costs()).unwrap().value, Cost::zero());
    }

    #[test]
    fn ls_star_cycle() {
        let (s, c) = star_cycle_instance(5).unwrap();
        assert_eq!(ls_bound(&s, &c, &unit_costs()).unwrap().value, Cost::from(1));
    }

    #[test]
    fn ls_fig2() {
        let (g, h) = fig2_pair();
        assert_eq!(ls_bound(&g, &h, &unit_costs()).unwrap().value, Cost::from(3));
    }

    #[test]
    fn ls_rejects_non_unit() {
        let (g, h) = fig2_pair();
        assert!(matches!(
            ls_bound(&g, &h, &aids_muta_costs()),
            Err(BoundError::UnsupportedCostModel(_))
        ));
    }

    #[test]
    fn bm_identical_graphs() {
        let (g, _) = fig2_pair();
        assert_eq!(bm_bound(&g, &g, &unit_costs()).value, Cost::zero());
    }

    #[test]
    fn bm_star_cycle_closed_form() {
        for n in [5usize, 8] {
            let (s, c) = star_cycle_instance(n).unwrap();
            assert_eq!(bm_bound(&s, &c, &unit_costs()).value, Cost::from(n as i64 - 2));
        }
    }

    #[test]
    fn forilp_single_node_same_label() {
        let mut alph = crate::graph::Alphabets::new();
        let (g, _) = LabeledGraph::from_tokens(&mut alph, &["A"], &[]).unwrap();
        let r = fori_lp_bound(&g, &g, &unit_costs(), &[]).unwrap();
        assert_eq!(r.value, Cost::zero());
        let cert = r.certificate.unwrap();
        assert_eq!(cert.primal_objective, cert.dual_objective);
    }

    #[test]
    fn forilp_star_cycle_closed_form() {
        for n in [5usize, 10] {
            let (s, c) = star_cycle_instance(n).unwrap();
            let r = fori_lp_bound(&s, &c, &unit_costs(), &[]).unwrap();
            assert_eq!(r.value, Cost::from(2 * n as i64 - 5));
            let cert = r.certificate.unwrap();
            assert_eq!(cert.primal_objective, cert.dual_objective);
        }
    }

    #[test]
    fn forilp_anchor_monotone() {
        let (g, h) = fig2_pair();
        let base = fori_lp_bound(&g, &h, &unit_costs(), &[]).unwrap().value;
        for i in 0..g.n() as u32 {
            for k in 0..h.n() as u32 {
                let v = fori_lp_bound(&g, &h, &unit_costs(), &[(i, k)]).unwrap().value;
                assert!(v >= base, "fixing ({i},{k}) lowered the bound: {v} < {base}");
            }
        }
    }

    #[test]
    fn forilp_contradictory_fixings() {
        let (g, h) = fig2_pair();
        let r = fori_lp_bound(&g, &h, &unit_costs(), &[(0, 0), (1, 0)]);
        assert!(matches!(r, Err(BoundError::InfeasibleFixings)));
    }

    #[test]
    fn gap_conventions() {
        assert_eq!(gap(Cost::from(10), Cost::from(10)).unwrap(), Cost::zero());
        assert_eq!(gap(Cost::from(10), Cost::from(5)).unwrap(), cost(1, 2));
        assert_eq!(gap(Cost::from(5), Cost::from(2)).unwrap(), cost(3, 5));
        assert_eq!(gap(Cost::zero(), Cost::zero()).unwrap(), Cost::zero());
        assert!(matches!(gap(Cost::zero(), Cost::from(1)), Err(BoundError::DivisionByZeroGed)));
        assert!(matches!(
            gap(Cost::from(1), Cost::from(2)),
            Err(BoundError::BoundExceedsGed { .. })
        ));
    }

    #[test]
    fn hierarchy_on_random_unit_pairs() {
        let spec = crate::testutil::RandomGraphSpec::default();
        let alph = crate::testutil::random_alphabets(&spec);
        let mut rng = crate::testutil::rng(0xb0);
        let u = unit_costs();
        for _ in 0..25 {
            let g = crate::testutil::random_graph(&mut rng, &alph, &spec);
            let h = crate::testutil::random_graph(&mut rng, &alph, &spec);
            let ls = ls_bound(&g, &h, &u).unwrap().value;
            let bm = bm_bound(&g, &h, &u).value;
            let lp = fori_lp_bound(&g, &h, &u, &[]).unwrap().value;
            assert!(lp >= bm, "lp {lp} < bm {bm} on {g} vs {h}");
            assert!(bm >= ls, "bm {bm} < ls {ls} on {g} vs {h}");
        }
    }
}
