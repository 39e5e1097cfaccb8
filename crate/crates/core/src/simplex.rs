//! Bounded LP solving for the relaxations: a dense two-phase primal simplex
//! with Dantzig pricing, a Bland's-rule fallback against cycling, and dual
//! value extraction for strong-duality certificates.
//!
//! Two arithmetic backends share the implementation: an `f64` fast path used
//! inside branch-and-bound, and an exact big-rational path used wherever
//! closed-form values are asserted. Models produced by the builders imply
//! `x ≤ 1` through their rows, so the solver works over `x ≥ 0` only.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::costs::Cost;
use crate::ilp::{IlpModel, Relation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("simplex failed to make progress within the pivot budget")]
    NumericalFailure,
    #[error("objective is unbounded below")]
    Unbounded,
    #[error("dual vector has {got} entries, model has {expected} rows")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("exact solution value does not fit the 64-bit cost type")]
    CostOverflow,
}

/// Arithmetic backend for the simplex.
pub trait LpScalar:
    Clone
    + PartialOrd
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
    + std::ops::AddAssign
    + std::ops::SubAssign
    + std::fmt::Debug
{
    fn from_cost(c: &Cost) -> Self;
    fn to_f64(&self) -> f64;
    /// Comparison tolerance; zero for exact arithmetic.
    fn eps() -> Self;

    fn is_pos(&self) -> bool {
        let e = Self::eps();
        *self > e
    }
    fn is_neg(&self) -> bool {
        *self < -Self::eps()
    }
    fn is_negligible(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

impl LpScalar for f64 {
    fn from_cost(c: &Cost) -> Self {
        *c.numer() as f64 / *c.denom() as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn eps() -> Self {
        1e-9
    }
}

impl LpScalar for BigRational {
    fn from_cost(c: &Cost) -> Self {
        BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))
    }
    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
    fn eps() -> Self {
        BigRational::zero()
    }
}

/// Converts an exact value back to the 64-bit cost type.
pub fn big_to_cost(v: &BigRational) -> Result<Cost, LpError> {
    let n = v.numer().to_i64().ok_or(LpError::CostOverflow)?;
    let d = v.denom().to_i64().ok_or(LpError::CostOverflow)?;
    Ok(Rational64::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    /// Infeasible; carries the index of a model row whose artificial variable
    /// remained positive (a witness of the inconsistency).
    Infeasible { witness_row: usize },
}

/// An LP solve outcome: primal values per variable, one dual multiplier per
/// model row (sign convention: multipliers of ≤ rows are nonnegative), and
/// the objective including the model constant. The dual objective equals
/// `constant − Σ dual_i · rhs_i`.
#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub primal: Vec<T>,
    pub duals: Vec<T>,
    pub objective: T,
    pub dual_objective: T,
    pub pivots: usize,
}

impl<T: LpScalar> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves the LP relaxation of a model (integrality ignored).
pub fn lp_solve<T: LpScalar>(model: &IlpModel) -> Result<LpSolution<T>, LpError> {
    Tableau::build(model).solve(model)
}

/// f64 fast path.
pub fn lp_solve_f64(model: &IlpModel) -> Result<LpSolution<f64>, LpError> {
    lp_solve(model)
}

/// Exact rational path.
pub fn lp_solve_exact(model: &IlpModel) -> Result<LpSolution<BigRational>, LpError> {
    lp_solve(model)
}

/// Best rational approximation of `v` with denominator ≤ `max_den`, via
/// continued fractions; `None` when no convergent lands within `tol`.
fn rationalize(v: f64, max_den: i128, tol: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    let target = v.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, target.floor() as i128, 1i128);
    let mut x = target;
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (target - approx).abs() <= tol {
            let mut r = BigRational::new(BigInt::from(p1), BigInt::from(q1));
            if v < 0.0 {
                r = -r;
            }
            return Some(r);
        }
        let frac = x - x.floor();
        if frac < 1e-13 {
            break;
        }
        x = 1.0 / frac;
        let a = x.floor();
        if a >= 1e18 {
            break;
        }
        let (p2, q2) = (a as i128 * p1 + p0, a as i128 * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

/// Exact LP solve with a float warm path: solve in f64, lift the primal/dual
/// pair to small rationals, and accept it when exact feasibility of both
/// sides plus equal objectives certify joint optimality. Degenerate or
/// ill-conditioned instances fall back to the exact simplex. Orders of
/// magnitude faster than [`lp_solve_exact`] on typical models, with the same
/// exactness guarantee.
pub fn lp_solve_exact_fast(model: &IlpModel) -> Result<LpSolution<BigRational>, LpError> {
    const MAX_DEN: i128 = 1 << 24;
    const TOL: f64 = 1e-7;

    let Ok(f) = lp_solve_f64(model) else {
        return lp_solve_exact(model);
    };
    if !f.is_optimal() {
        // float-level infeasibility must be confirmed exactly
        return lp_solve_exact(model);
    }
    let lift = |vals: &[f64]| -> Option<Vec<BigRational>> {
        vals.iter().map(|&v| rationalize(v, MAX_DEN, TOL)).collect()
    };
    let (Some(primal), Some(duals)) = (lift(&f.primal), lift(&f.duals)) else {
        return lp_solve_exact(model);
    };
    if certifies(model, &primal, &duals) {
        let constant = BigRational::from_cost(&model.constant);
        let mut objective = constant.clone();
        for (x, c) in primal.iter().zip(&model.obj) {
            objective += x * BigRational::from_cost(c);
        }
        return Ok(LpSolution {
            status: LpStatus::Optimal,
            primal,
            duals,
            objective: objective.clone(),
            dual_objective: objective,
            pivots: f.pivots,
        });
    }
    lp_solve_exact(model)
}

/// Exact check that (primal, dual) is a jointly optimal pair: primal
/// feasible, dual feasible (≤-row multipliers nonnegative, equality-row
/// multipliers free), objectives equal.
fn certifies(model: &IlpModel, primal: &[BigRational], duals: &[BigRational]) -> bool {
    if primal.iter().any(|x| x.is_neg()) {
        return false;
    }
    for (row, mu) in model.rows.iter().zip(duals) {
        let lhs: BigRational = row
            .coeffs
            .iter()
            .map(|&(j, ref a)| &primal[j] * BigRational::from_cost(a))
            .sum();
        let rhs = BigRational::from_cost(&row.rhs);
        let ok = match row.rel {
            Relation::Le => lhs <= rhs && !mu.is_neg(),
            Relation::Eq => lhs == rhs,
        };
        if !ok {
            return false;
        }
    }
    let mut reduced: Vec<BigRational> = model.obj.iter().map(BigRational::from_cost).collect();
    for (row, mu) in model.rows.iter().zip(duals) {
        if mu.is_zero() {
            continue;
        }
        for &(j, ref a) in &row.coeffs {
            reduced[j] += mu * BigRational::from_cost(a);
        }
    }
    if reduced.iter().any(|r| r.is_neg()) {
        return false;
    }
    let mut p_obj = BigRational::from_cost(&model.constant);
    for (x, c) in primal.iter().zip(&model.obj) {
        p_obj += x * BigRational::from_cost(c);
    }
    let mut d_obj = BigRational::from_cost(&model.constant);
    for (row, mu) in model.rows.iter().zip(duals) {
        d_obj -= mu * BigRational::from_cost(&row.rhs);
    }
    p_obj == d_obj
}

/// Verifies a structured dual certificate against a model whose rows are all
/// ≤ (the arc-oriented relaxation): the dual is feasible iff every
/// multiplier is nonnegative and every variable's reduced cost
/// `c_j + Σ_i dual_i · a_{i,j}` is nonnegative. Returns true iff the dual is
/// feasible and its objective `K − Σ dual_i · rhs_i` matches the objective of
/// the given primal point exactly.
pub fn check_dual_certificate(
    model: &IlpModel,
    primal: &[Cost],
    dual: &[Cost],
) -> Result<bool, LpError> {
    if dual.len() != model.rows.len() {
        return Err(LpError::DimensionMismatch { got: dual.len(), expected: model.rows.len() });
    }
    if dual.iter().any(|d| *d < Cost::zero()) {
        return Ok(false);
    }
    let mut reduced: Vec<Cost> = model.obj.clone();
    for (row, d) in model.rows.iter().zip(dual) {
        if d.is_zero() {
            continue;
        }
        for &(j, ref a) in &row.coeffs {
            reduced[j] += *d * *a;
        }
    }
    if reduced.iter().any(|r| *r < Cost::zero()) {
        return Ok(false);
    }
    let mut dual_obj = model.constant;
    for (row, d) in model.rows.iter().zip(dual) {
        dual_obj -= *d * row.rhs;
    }
    Ok(dual_obj == model.objective_value(primal))
}

/// Dense simplex tableau over scalar type T.
struct Tableau<T> {
    /// rows × cols coefficient matrix (structural, slack, artificial cols).
    a: Vec<Vec<T>>,
    rhs: Vec<T>,
    /// Phase-2 reduced cost row and its objective (negated running value).
    cost: Vec<T>,
    cost_val: T,
    /// Phase-1 reduced cost row (sum of artificials), if any artificials.
    p1cost: Vec<T>,
    p1val: T,
    basis: Vec<usize>,
    n_struct: usize,
    n_cols: usize,
    /// unit column of each row (slack or artificial) for dual extraction
    unit_col: Vec<usize>,
    /// row orientation: true if the stored row is the negated original
    negated: Vec<bool>,
    artificial_cols: Vec<usize>,
    is_artificial: Vec<bool>,
    /// original model row per tableau row
    orig_row: Vec<usize>,
}

impl<T: LpScalar> Tableau<T> {
    fn build(model: &IlpModel) -> Self {
        let m = model.rows.len();
        let n = model.vars.len();
        // count extra columns
        let mut n_cols = n;
        let mut slack_of = vec![usize::MAX; m];
        let mut art_of = vec![usize::MAX; m];
        for (i, row) in model.rows.iter().enumerate() {
            let rhs_neg = row.rhs < Cost::zero();
            match (row.rel, rhs_neg) {
                (Relation::Le, false) => {
                    slack_of[i] = n_cols;
                    n_cols += 1;
                }
                (Relation::Le, true) => {
                    // negate to ≥ with positive rhs: surplus + artificial
                    slack_of[i] = n_cols;
                    art_of[i] = n_cols + 1;
                    n_cols += 2;
                }
                (Relation::Eq, _) => {
                    art_of[i] = n_cols;
                    n_cols += 1;
                }
            }
        }

        let mut a = vec![vec![T::zero(); n_cols]; m];
        let mut rhs = vec![T::zero(); m];
        let mut basis = vec![0usize; m];
        let mut unit_col = vec![0usize; m];
        let mut negated = vec![false; m];
        let mut is_artificial = vec![false; n_cols];
        let mut artificial_cols = Vec::new();

        for (i, row) in model.rows.iter().enumerate() {
            let flip = match row.rel {
                Relation::Le => row.rhs < Cost::zero(),
                Relation::Eq => row.rhs < Cost::zero(),
            };
            negated[i] = flip;
            let s = if flip { -T::one() } else { T::one() };
            for &(j, ref c) in &row.coeffs {
                a[i][j] = s.clone() * T::from_cost(c);
            }
            rhs[i] = s.clone() * T::from_cost(&row.rhs);
            match row.rel {
                Relation::Le if !flip => {
                    a[i][slack_of[i]] = T::one();
                    basis[i] = slack_of[i];
                    unit_col[i] = slack_of[i];
                }
                Relation::Le => {
                    // stored as ≥: surplus −1, artificial +1
                    a[i][slack_of[i]] = -T::one();
                    a[i][art_of[i]] = T::one();
                    basis[i] = art_of[i];
                    unit_col[i] = art_of[i];
                    is_artificial[art_of[i]] = true;
                    artificial_cols.push(art_of[i]);
                }
                Relation::Eq => {
                    a[i][art_of[i]] = T::one();
                    basis[i] = art_of[i];
                    unit_col[i] = art_of[i];
                    is_artificial[art_of[i]] = true;
                    artificial_cols.push(art_of[i]);
                }
            }
        }

        // phase-2 reduced costs start as the raw objective (basis of slacks
        // and artificials has zero cost)
        let mut cost = vec![T::zero(); n_cols];
        for (j, c) in model.obj.iter().enumerate() {
            cost[j] = T::from_cost(c);
        }
        // phase-1 cost: minimize Σ artificials ⇒ reduced costs are
        // -(sum of artificial rows) on non-artificial columns
        let mut p1cost = vec![T::zero(); n_cols];
        let mut p1val = T::zero();
        for i in 0..m {
            if is_artificial[basis[i]] {
                for j in 0..n_cols {
                    if !is_artificial[j] && !a[i][j].is_negligible() {
                        let v = a[i][j].clone();
                        p1cost[j] -= v;
                    }
                }
                p1val += rhs[i].clone();
            }
        }

        Tableau {
            a,
            rhs,
            cost,
            cost_val: T::zero(),
            p1cost,
            p1val,
            basis,
            n_struct: n,
            n_cols,
            unit_col,
            negated,
            artificial_cols,
            is_artificial,
            orig_row: (0..m).collect(),
        }
    }

    fn pivot(&mut self, prow: usize, pcol: usize, phase1: bool) {
        let m = self.a.len();
        // normalize pivot row
        let piv = self.a[prow][pcol].clone();
        let inv = T::one() / piv;
        let nz: Vec<usize> = (0..self.n_cols)
            .filter(|&j| !self.a[prow][j].is_negligible() || j == pcol)
            .collect();
        for &j in &nz {
            let v = self.a[prow][j].clone() * inv.clone();
            self.a[prow][j] = v;
        }
        self.rhs[prow] = self.rhs[prow].clone() * inv.clone();
        self.a[prow][pcol] = T::one();

        for r in 0..m {
            if r == prow {
                continue;
            }
            let f = self.a[r][pcol].clone();
            if f.is_negligible() {
                self.a[r][pcol] = T::zero();
                continue;
            }
            for &j in &nz {
                let delta = f.clone() * self.a[prow][j].clone();
                self.a[r][j] -= delta;
            }
            self.a[r][pcol] = T::zero();
            let d = f.clone() * self.rhs[prow].clone();
            self.rhs[r] -= d;
        }
        // cost rows
        for costrow in [false, true] {
            if costrow && !phase1 {
                continue;
            }
            let (row, val) = if costrow {
                (&mut self.p1cost, &mut self.p1val)
            } else {
                (&mut self.cost, &mut self.cost_val)
            };
            let f = row[pcol].clone();
            if f.is_negligible() {
                row[pcol] = T::zero();
                continue;
            }
            for &j in &nz {
                let delta = f.clone() * self.a[prow][j].clone();
                row[j] -= delta;
            }
            row[pcol] = T::zero();
            let d = f * self.rhs[prow].clone();
            *val += d; // cost_val tracks −objective of current basis
        }
        self.basis[prow] = pcol;
    }

    /// Runs simplex iterations on the given cost row until optimal.
    /// Returns Err(Unbounded) if a cost-reducing ray exists.
    fn optimize(&mut self, phase1: bool, pivots: &mut usize) -> Result<(), LpError> {
        let m = self.a.len();
        let stall_threshold = 10 * m.max(1);
        let hard_cap = 2000 + 200 * (m + self.n_cols);
        let mut stall = 0usize;
        let mut last_obj = if phase1 { self.p1val.clone() } else { self.cost_val.clone() };
        loop {
            if *pivots > hard_cap {
                return Err(LpError::NumericalFailure);
            }
            let bland = stall > stall_threshold;
            let enter = self.choose_entering(phase1, bland);
            let Some(pcol) = enter else {
                return Ok(());
            };
            let prow = self.ratio_test(pcol, bland)?;
            self.pivot(prow, pcol, true);
            *pivots += 1;
            let obj = if phase1 { self.p1val.clone() } else { self.cost_val.clone() };
            // the tracked objective decreases on every non-degenerate pivot
            if obj < last_obj.clone() - T::eps() {
                stall = 0;
                last_obj = obj;
            } else {
                stall += 1;
            }
        }
    }

    fn choose_entering(&self, phase1: bool, bland: bool) -> Option<usize> {
        let costs = if phase1 { &self.p1cost } else { &self.cost };
        let mut best: Option<(usize, T)> = None;
        let _ = phase1;
        for j in 0..self.n_cols {
            // artificials may leave but never re-enter
            if self.is_artificial[j] {
                continue;
            }
            if costs[j].is_neg() {
                if bland {
                    return Some(j);
                }
                match &best {
                    Some((_, c)) if costs[j] >= *c => {}
                    _ => best = Some((j, costs[j].clone())),
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn ratio_test(&self, pcol: usize, bland: bool) -> Result<usize, LpError> {
        let m = self.a.len();
        // Ties on the minimum ratio are broken by the largest pivot element
        // (numerical stability, fewer degenerate stalls); under Bland's rule
        // by the lowest basis index (finiteness).
        let mut best: Option<(usize, T)> = None;
        for i in 0..m {
            if self.a[i][pcol].is_pos() {
                let ratio = self.rhs[i].clone() / self.a[i][pcol].clone();
                match &best {
                    None => best = Some((i, ratio)),
                    Some((bi, br)) => {
                        let better_tie = if bland {
                            self.basis[i] < self.basis[*bi]
                        } else {
                            self.a[i][pcol] > self.a[*bi][pcol]
                        };
                        if ratio < br.clone() - T::eps()
                            || (!(ratio > br.clone() + T::eps()) && better_tie)
                        {
                            best = Some((i, ratio));
                        }
                    }
                }
            }
        }
        best.map(|(i, _)| i).ok_or(LpError::Unbounded)
    }

    fn solve(mut self, model: &IlpModel) -> Result<LpSolution<T>, LpError> {
        let mut pivots = 0usize;
        if !self.artificial_cols.is_empty() {
            self.optimize(true, &mut pivots)?;
            // p1val holds the remaining sum of artificials
            let infeas = self.p1val.clone();
            if infeas.is_pos() {
                // witness: a basic artificial with positive value
                let witness = (0..self.a.len())
                    .find(|&i| self.is_artificial[self.basis[i]] && self.rhs[i].is_pos())
                    .map(|i| self.orig_row[i])
                    .unwrap_or(0);
                return Ok(LpSolution {
                    status: LpStatus::Infeasible { witness_row: witness },
                    primal: vec![],
                    duals: vec![],
                    objective: T::zero(),
                    dual_objective: T::zero(),
                    pivots,
                });
            }
            // drive any remaining basic artificials (at value 0) out
            for i in 0..self.a.len() {
                if self.is_artificial[self.basis[i]] {
                    if let Some(j) =
                        (0..self.n_cols).find(|&j| !self.is_artificial[j] && !self.a[i][j].is_negligible())
                    {
                        self.pivot(i, j, true);
                        pivots += 1;
                    }
                    // if no pivot is possible the row is redundant; the
                    // artificial stays basic at zero and is never priced in
                }
            }
        }
        self.optimize(false, &mut pivots)?;

        let n = self.n_struct;
        let mut primal = vec![T::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                primal[b] = self.rhs[i].clone();
            }
        }
        // duals: μ_r = −σ_r · y_i with y_i = −cost[unit col of row i]
        let m = model.rows.len();
        let mut duals = vec![T::zero(); m];
        for i in 0..m {
            let z = self.cost[self.unit_col[i]].clone();
            // y_i = −z; μ = −σ·y = σ·z
            duals[self.orig_row[i]] = if self.negated[i] { -z } else { z };
        }
        let constant = T::from_cost(&model.constant);
        let objective = constant.clone() + self.cost_val.clone();
        let mut dual_objective = constant;
        for (row, d) in model.rows.iter().zip(&duals) {
            dual_objective -= d.clone() * T::from_cost(&row.rhs);
        }
        Ok(LpSolution {
            status: LpStatus::Optimal,
            primal,
            duals,
            objective,
            dual_objective,
            pivots,
        })
    }
}
