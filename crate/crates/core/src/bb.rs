//! Branch-and-bound over the exact formulation: optimization (minimum edit
//! distance) and threshold-feasibility verification.
//!
//! Node LPs run on the f64 simplex for speed; every pruning decision and
//! every incumbent is validated in exact arithmetic. Pruning uses a safe
//! bound derived from the float duals: for any multipliers that are
//! nonnegative on ≤ rows, `constant − μ'b + Σ_j min(0, c_j + (A'μ)_j)` is a
//! valid lower bound over the [0,1] box, so a slightly perturbed dual still
//! certifies — exactly — that a subtree cannot beat the incumbent.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::costs::{Cost, CostModel};
use crate::graph::LabeledGraph;
use crate::ilp::{IlpModel, Relation, Row, RowKind, ThresholdedModel, VarKind};
use crate::simplex::{lp_solve_exact_fast, lp_solve_f64, LpError, LpSolution, LpStatus};

#[derive(Debug, Error)]
pub enum BbError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("solution is not integral; no edit path can be extracted")]
    NonIntegralSolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Prove the minimum objective.
    Optimize,
    /// Stop at the first incumbent within the threshold, or prove there is
    /// none.
    FeasibilityOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IlpStatus {
    Optimal,
    /// An incumbent was found but optimality was not proven (always the case
    /// for a successful feasibility-only run).
    Feasible,
    Infeasible,
    /// Budget exhausted before a verdict.
    Aborted,
}

/// Node/time limits for one solve. The cancel flag allows a search pipeline
/// to stop outstanding verifications cooperatively.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    pub max_nodes: Option<usize>,
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_time(ms: u64) -> Self {
        Self { deadline: Some(Instant::now() + Duration::from_millis(ms)), ..Self::default() }
    }

    fn exhausted(&self, nodes: usize) -> bool {
        if self.max_nodes.is_some_and(|m| nodes >= m) {
            return true;
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return true;
        }
        self.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

#[derive(Debug, Clone)]
pub struct IlpSolution {
    pub status: IlpStatus,
    /// Incumbent objective (exact), present for Optimal/Feasible and for
    /// Aborted runs that found an incumbent before the budget ran out.
    pub objective: Option<Cost>,
    /// Integral variable vector of the incumbent.
    pub var_values: Option<Vec<Cost>>,
    /// Node mapping read off the incumbent's assignment variables.
    pub node_mapping: Option<Vec<Option<u32>>>,
    pub node_count: usize,
}

/// Solves a model to proven optimality or verifies threshold feasibility.
pub fn ilp_solve(
    model: &IlpModel,
    mode: SolveMode,
    budget: &Budget,
) -> Result<IlpSolution, BbError> {
    solve(model, None, mode, budget)
}

/// Same over a thresholded model: the threshold row is enforced exactly on
/// incumbents and as a `> τ` cut on subtree bounds.
pub fn ilp_solve_thresholded(
    tm: &ThresholdedModel,
    mode: SolveMode,
    budget: &Budget,
) -> Result<IlpSolution, BbError> {
    solve(&tm.model, Some(tm.tau), mode, budget)
}

const INTEGRALITY_TOL: f64 = 1e-6;

struct SearchNode {
    /// (variable, value) branching decisions along the path from the root.
    fixings: Vec<(usize, bool)>,
    /// Parent's LP bound, used only for ordering.
    est: f64,
}

/// Best-first frontier keyed on the parent bound (min-heap).
struct HeapEntry(Reverse<(OrdF64, usize)>, SearchNode);

#[derive(PartialEq, PartialOrd)]
struct OrdF64(f64);
impl Eq for OrdF64 {}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.partial_cmp(other).unwrap_or(std::cmp::Ordering::Equal)
    }
}
impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

enum Frontier {
    Heap(BinaryHeap<HeapEntry>),
    Stack(Vec<SearchNode>),
}

impl Frontier {
    fn push(&mut self, node: SearchNode, counter: usize) {
        match self {
            Frontier::Heap(h) => h.push(HeapEntry(Reverse((OrdF64(node.est), counter)), node)),
            Frontier::Stack(s) => s.push(node),
        }
    }

    fn pop(&mut self) -> Option<SearchNode> {
        match self {
            Frontier::Heap(h) => h.pop().map(|e| e.1),
            Frontier::Stack(s) => s.pop(),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Frontier::Heap(h) => h.is_empty(),
            Frontier::Stack(s) => s.is_empty(),
        }
    }
}

fn big(c: &Cost) -> BigRational {
    BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))
}

/// Dyadic rational approximation of an f64 multiplier (denominator 2^24);
/// small enough to keep the exact bound computation fast, close enough that
/// the bound loses far less than the 1/40 cost grid.
fn dyadic(v: f64, clamp_nonneg: bool) -> BigRational {
    let v = if clamp_nonneg && v < 0.0 { 0.0 } else { v };
    let scaled = (v * (1u64 << 24) as f64).round();
    if !scaled.is_finite() {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(scaled as i128), BigInt::from(1u64 << 24))
}

/// Exact subtree lower bound from a float dual vector.
fn safe_bound(model: &IlpModel, duals: &[f64]) -> BigRational {
    let mut mu: Vec<BigRational> = Vec::with_capacity(model.rows.len());
    for (row, &d) in model.rows.iter().zip(duals) {
        mu.push(dyadic(d, row.rel == Relation::Le));
    }
    let mut bound = big(&model.constant);
    let mut reduced: Vec<BigRational> = model.obj.iter().map(big).collect();
    for (row, m) in model.rows.iter().zip(&mu) {
        if m.is_zero() {
            continue;
        }
        bound -= m * big(&row.rhs);
        for &(j, ref a) in &row.coeffs {
            reduced[j] += m * big(a);
        }
    }
    for r in &reduced {
        if r.is_negative() {
            bound += r;
        }
    }
    bound
}

fn round_integral(primal: &[f64]) -> Option<Vec<Cost>> {
    let mut out = Vec::with_capacity(primal.len());
    for &v in primal {
        let r = v.round();
        if (v - r).abs() > INTEGRALITY_TOL || !(0.0..=1.0).contains(&r) {
            return None;
        }
        out.push(Cost::from(r as i64));
    }
    Some(out)
}

/// Most fractional variable, preferring assignment variables over arc/edge
/// variables (the node mapping determines the rest almost everywhere).
fn branch_variable(model: &IlpModel, primal: &[f64], fixed: &[(usize, bool)]) -> Option<usize> {
    let is_fixed = |j: usize| fixed.iter().any(|&(f, _)| f == j);
    let frac = |v: f64| (v - v.round()).abs();
    let pick = |node_vars: bool| -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (j, var) in model.vars.iter().enumerate() {
            if matches!(var.kind, VarKind::NodeMap { .. }) != node_vars || is_fixed(j) {
                continue;
            }
            let f = frac(primal[j]);
            if f > INTEGRALITY_TOL && best.as_ref().is_none_or(|&(_, bf)| f > bf) {
                best = Some((j, f));
            }
        }
        best.map(|(j, _)| j)
    };
    pick(true).or_else(|| pick(false))
}

/// A `x_j = 1` child is structurally infeasible if the assignment row of its
/// G node or H node already carries a 1-fixing.
fn conflicts(model: &IlpModel, j: usize, fixed: &[(usize, bool)]) -> bool {
    let VarKind::NodeMap { i, k } = model.vars[j].kind else { return false };
    fixed.iter().any(|&(f, v)| {
        if !v || f == j {
            return false;
        }
        match model.vars[f].kind {
            VarKind::NodeMap { i: fi, k: fk } => {
                (i.is_some() && fi == i) || (k.is_some() && fk == k)
            }
            _ => false,
        }
    })
}

fn with_fixings(base: &IlpModel, fixings: &[(usize, bool)]) -> IlpModel {
    let mut m = base.clone();
    for &(j, v) in fixings {
        m.rows.push(Row {
            coeffs: vec![(j, Cost::from(1))],
            rel: Relation::Eq,
            rhs: Cost::from(v as i64),
            kind: RowKind::Fixing,
        });
    }
    m
}

fn node_mapping_of(model: &IlpModel, values: &[Cost]) -> Vec<Option<u32>> {
    let n = model
        .vars
        .iter()
        .filter_map(|v| match v.kind {
            VarKind::NodeMap { i: Some(i), .. } => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut map = vec![None; n as usize];
    for (j, var) in model.vars.iter().enumerate() {
        if let VarKind::NodeMap { i: Some(i), k: Some(k) } = var.kind {
            if !values[j].is_zero() {
                map[i as usize] = Some(k);
            }
        }
    }
    map
}

fn solve(
    full: &IlpModel,
    tau: Option<Cost>,
    mode: SolveMode,
    budget: &Budget,
) -> Result<IlpSolution, BbError> {
    // LP relaxations run without the threshold row; τ is enforced by the
    // exact `bound > τ` cut and by exact incumbent verification against the
    // full model.
    let mut base = full.clone();
    base.rows.retain(|r| r.kind != RowKind::Threshold);

    let mut incumbent: Option<(Cost, Vec<Cost>)> = None;
    let mut node_count = 0usize;
    let mut counter = 0usize;

    let mut frontier = match mode {
        SolveMode::Optimize => Frontier::Heap(BinaryHeap::new()),
        SolveMode::FeasibilityOnly => Frontier::Stack(Vec::new()),
    };
    frontier.push(SearchNode { fixings: Vec::new(), est: f64::NEG_INFINITY }, counter);

    let finish = |status: IlpStatus, inc: Option<(Cost, Vec<Cost>)>, nodes: usize| {
        let (objective, var_values, node_mapping) = match inc {
            Some((obj, vals)) => {
                let map = node_mapping_of(full, &vals);
                (Some(obj), Some(vals), Some(map))
            }
            None => (None, None, None),
        };
        Ok(IlpSolution { status, objective, var_values, node_mapping, node_count: nodes })
    };

    // Subtree is dead if its exact bound cannot beat the incumbent or fit
    // under the threshold.
    let dead = |bound: &BigRational, incumbent: &Option<(Cost, Vec<Cost>)>| -> bool {
        if let Some((inc, _)) = incumbent {
            if *bound >= big(inc) {
                return true;
            }
        }
        if let Some(t) = tau {
            if *bound > big(&t) {
                return true;
            }
        }
        false
    };

    while let Some(node) = frontier.pop() {
        if budget.exhausted(node_count) {
            return finish(IlpStatus::Aborted, incumbent, node_count);
        }
        node_count += 1;

        let model = with_fixings(&base, &node.fixings);
        let sol = lp_solve_f64(&model);

        // The float path answers; anything ambiguous is re-resolved exactly.
        enum NodeOutcome {
            Prune,
            Incumbent(Cost, Vec<Cost>),
            Branch(usize, Vec<f64>, f64),
        }

        let outcome = match sol {
            Ok(LpSolution { status: LpStatus::Optimal, primal, duals, objective, .. }) => {
                let bound = safe_bound(&model, &duals);
                if dead(&bound, &incumbent) {
                    NodeOutcome::Prune
                } else if let Some(vals) = round_integral(&primal) {
                    if full.is_feasible(&vals) {
                        NodeOutcome::Incumbent(full.objective_value(&vals), vals)
                    } else {
                        resolve_exact(&model, full, &node, &dead, &incumbent)?
                    }
                } else if let Some(j) = branch_variable(&model, &primal, &node.fixings) {
                    NodeOutcome::Branch(j, primal, objective)
                } else {
                    // integral per-variable but not integral as a vector
                    // (rounding drift) — decide exactly
                    resolve_exact(&model, full, &node, &dead, &incumbent)?
                }
            }
            Ok(LpSolution { status: LpStatus::Infeasible { .. }, .. }) | Err(_) => {
                resolve_exact(&model, full, &node, &dead, &incumbent)?
            }
        };

        fn resolve_exact(
            model: &IlpModel,
            full: &IlpModel,
            node: &SearchNode,
            dead: &dyn Fn(&BigRational, &Option<(Cost, Vec<Cost>)>) -> bool,
            incumbent: &Option<(Cost, Vec<Cost>)>,
        ) -> Result<NodeOutcome, BbError> {
            let sol = lp_solve_exact_fast(model)?;
            if sol.status != LpStatus::Optimal {
                return Ok(NodeOutcome::Prune);
            }
            if dead(&sol.objective, incumbent) {
                return Ok(NodeOutcome::Prune);
            }
            let integral = sol.primal.iter().all(|v| v.is_integer());
            if integral {
                let vals: Vec<Cost> = sol
                    .primal
                    .iter()
                    .map(|v| crate::simplex::big_to_cost(v))
                    .collect::<Result<_, _>>()?;
                if full.is_feasible(&vals) {
                    let obj = full.objective_value(&vals);
                    return Ok(NodeOutcome::Incumbent(obj, vals));
                }
                // feasible for the relaxation but not the full model: the
                // threshold row cuts it off — treat as fractional and branch
            }
            let primal_f64: Vec<f64> = sol.primal.iter().map(|v| v.to_f64().unwrap()).collect();
            match branch_variable(model, &primal_f64, &node.fixings) {
                Some(j) => {
                    Ok(NodeOutcome::Branch(j, primal_f64, sol.objective.to_f64().unwrap()))
                }
                None => Ok(NodeOutcome::Prune),
            }
        }

        match outcome {
            NodeOutcome::Prune => {}
            NodeOutcome::Incumbent(obj, vals) => {
                let better = incumbent.as_ref().is_none_or(|(cur, _)| obj < *cur);
                let under_tau = tau.is_none_or(|t| obj <= t);
                if better && under_tau {
                    incumbent = Some((obj, vals));
                    if mode == SolveMode::FeasibilityOnly {
                        return finish(IlpStatus::Feasible, incumbent, node_count);
                    }
                }
            }
            NodeOutcome::Branch(j, _primal, est) => {
                let mut zero = node.fixings.clone();
                zero.push((j, false));
                counter += 1;
                frontier.push(SearchNode { fixings: zero, est }, counter);
                if !conflicts(&base, j, &node.fixings) {
                    let mut one = node.fixings.clone();
                    one.push((j, true));
                    counter += 1;
                    frontier.push(SearchNode { fixings: one, est }, counter);
                }
            }
        }
    }

    debug_assert!(frontier.is_empty());
    match (mode, incumbent) {
        (SolveMode::Optimize, Some(inc)) => finish(IlpStatus::Optimal, Some(inc), node_count),
        (_, None) => finish(IlpStatus::Infeasible, None, node_count),
        (SolveMode::FeasibilityOnly, Some(inc)) => {
            finish(IlpStatus::Feasible, Some(inc), node_count)
        }
    }
}

/// One edit operation with its cost under the model that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOp {
    NodeRelabel { i: u32, k: u32, cost: Cost },
    NodeDel { i: u32, cost: Cost },
    NodeIns { k: u32, cost: Cost },
    EdgeRelabel { e: u32, f: u32, cost: Cost },
    EdgeDel { e: u32, cost: Cost },
    EdgeIns { f: u32, cost: Cost },
}

impl EditOp {
    pub fn cost(&self) -> Cost {
        match *self {
            EditOp::NodeRelabel { cost, .. }
            | EditOp::NodeDel { cost, .. }
            | EditOp::NodeIns { cost, .. }
            | EditOp::EdgeRelabel { cost, .. }
            | EditOp::EdgeDel { cost, .. }
            | EditOp::EdgeIns { cost, .. } => cost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditPath {
    pub ops: Vec<EditOp>,
    pub total: Cost,
}

/// Reads the edit path off an integral solution's node mapping: mapped nodes
/// substitute (an op only when it costs something), unmapped elements delete,
/// uncovered elements insert, and the edge mapping is the one induced by the
/// node mapping.
pub fn extract_edit_path(
    g: &LabeledGraph,
    h: &LabeledGraph,
    c: &dyn CostModel,
    sol: &IlpSolution,
) -> Result<EditPath, BbError> {
    let map = sol.node_mapping.as_ref().ok_or(BbError::NonIntegralSolution)?;
    let mut ops = Vec::new();
    let mut total = Cost::zero();
    let mut used_h = vec![false; h.n()];
    for (i, target) in map.iter().enumerate() {
        let i = i as u32;
        match *target {
            Some(k) => {
                used_h[k as usize] = true;
                let cost = c.node_subst(g, i, h, k);
                if !cost.is_zero() {
                    ops.push(EditOp::NodeRelabel { i, k, cost });
                    total += cost;
                }
            }
            None => {
                let cost = c.node_del(g, i);
                ops.push(EditOp::NodeDel { i, cost });
                total += cost;
            }
        }
    }
    for k in 0..h.n() as u32 {
        if !used_h[k as usize] {
            let cost = c.node_ins(h, k);
            ops.push(EditOp::NodeIns { k, cost });
            total += cost;
        }
    }
    let mut covered_h = vec![false; h.m()];
    for e in 0..g.m() as u32 {
        let (i, j) = g.edge(e);
        let target = match (map[i as usize], map[j as usize]) {
            (Some(k), Some(l)) => h.find_edge(k, l),
            _ => None,
        };
        match target {
            Some(f) => {
                covered_h[f as usize] = true;
                let cost = c.edge_subst(g, e, h, f);
                if !cost.is_zero() {
                    ops.push(EditOp::EdgeRelabel { e, f, cost });
                    total += cost;
                }
            }
            None => {
                let cost = c.edge_del(g, e);
                ops.push(EditOp::EdgeDel { e, cost });
                total += cost;
            }
        }
    }
    for f in 0..h.m() as u32 {
        if !covered_h[f as usize] {
            let cost = c.edge_ins(h, f);
            ops.push(EditOp::EdgeIns { f, cost });
            total += cost;
        }
    }
    Ok(EditPath { ops, total })
}
