//! Integer-program model construction for graph edit distance: the
//! arc-oriented formulation used throughout (node-map variables x, arc-map
//! variables z, reduced costs, constant offset K), the classical
//! edge-assignment formulation used as a cross-check, its relaxed
//! branch-match polytope, and the threshold-feasibility variant.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::costs::{Cost, CostModel};
use crate::graph::{orient, LabeledGraph, OrientedArcSet};

/// What a model variable stands for. `None` indices denote the dummy element
/// ε in the edge-assignment formulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// x_{i,k}: node i of G mapped to node k of H (ε on either side for F1).
    NodeMap { i: Option<u32>, k: Option<u32> },
    /// z_{ij,kl}: arc (i,j) of oriented G mapped to arc (k,l) of bidirected H.
    ArcMap { gi: u32, gj: u32, hk: u32, hl: u32 },
    /// y_{ij,kl}: edge e of G mapped to edge f of H (ε on either side).
    EdgeMap { e: Option<u32>, f: Option<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub kind: VarKind,
    /// Integrality flag; relaxations treat every variable as continuous.
    pub integral: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

/// Which structural family a row belongs to. Indices refer to the graph pair
/// the model was built from; `arc_g`/`arc_h` index the oriented arc lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Assignment row over the G side (one per i ∈ V_G).
    AssignG(u32),
    /// Assignment row over the H side (one per k ∈ V_H).
    AssignH(u32),
    /// Out-arc linking row (per k ∈ V_H, per arc of G); dual r.
    TopoR { arc_g: u32, k: u32 },
    /// In-arc linking row (per k ∈ V_H, per arc of G); dual s.
    TopoS { arc_g: u32, k: u32 },
    /// Node-side linking row (per i ∈ V_G, per arc of H); dual t.
    TopoT { i: u32, arc_h: u32 },
    /// Edge-assignment rows of the cross-check formulation.
    EdgeAssignG(u32),
    EdgeAssignH(u32),
    /// Topological rows of the cross-check formulation / relaxed polytope.
    Topo,
    /// Objective ≤ τ.
    Threshold,
    /// Pinned variable (anchor fixing or branching decision).
    Fixing,
}

/// A sparse constraint row: Σ coeff·var {≤,=} rhs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Cost)>,
    pub rel: Relation,
    pub rhs: Cost,
    pub kind: RowKind,
}

/// A linear model over [0,1]-bounded variables with a constant objective
/// offset. Shared by the exact formulation, its LP relaxation, the
/// cross-check formulation, and the thresholded variant.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    pub vars: Vec<Variable>,
    /// Objective coefficient per variable.
    pub obj: Vec<Cost>,
    /// Constant objective offset (K for the reduced-cost formulation).
    pub constant: Cost,
    pub rows: Vec<Row>,
}

impl IlpModel {
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Objective value (including the constant) of a variable vector.
    pub fn objective_value(&self, x: &[Cost]) -> Cost {
        debug_assert_eq!(x.len(), self.vars.len());
        let mut v = self.constant;
        for (j, c) in self.obj.iter().enumerate() {
            if !c.is_zero() && !x[j].is_zero() {
                v += *c * x[j];
            }
        }
        v
    }

    /// Checks feasibility of a point (bounds and rows), exactly.
    pub fn is_feasible(&self, x: &[Cost]) -> bool {
        if x.len() != self.vars.len() {
            return false;
        }
        if x.iter().any(|v| *v < Cost::zero() || *v > Cost::from(1)) {
            return false;
        }
        self.rows.iter().all(|row| {
            let lhs: Cost = row.coeffs.iter().map(|&(j, c)| c * x[j]).sum();
            match row.rel {
                Relation::Le => lhs <= row.rhs,
                Relation::Eq => lhs == row.rhs,
            }
        })
    }

    /// Appends `x_j = value` as an explicit row.
    pub fn fix_variable(&mut self, j: usize, value: Cost) {
        self.rows.push(Row {
            coeffs: vec![(j, Cost::from(1))],
            rel: Relation::Eq,
            rhs: value,
            kind: RowKind::Fixing,
        });
    }

    /// Variable name for dumps and diagnostics.
    pub fn var_name(&self, j: usize) -> String {
        match self.vars[j].kind {
            VarKind::NodeMap { i, k } => format!(
                "x_{}_{}",
                i.map_or("eps".into(), |v| v.to_string()),
                k.map_or("eps".into(), |v| v.to_string())
            ),
            VarKind::ArcMap { gi, gj, hk, hl } => format!("z_{gi}{gj}_{hk}{hl}"),
            VarKind::EdgeMap { e, f } => format!(
                "y_{}_{}",
                e.map_or("eps".into(), |v| v.to_string()),
                f.map_or("eps".into(), |v| v.to_string())
            ),
        }
    }

    /// Renders the model in a human-readable LP interchange format
    /// (objective, rows, bounds, integrality) for cross-checking against
    /// external solvers.
    pub fn dump_lp(&self) -> String {
        fn frac(c: &Cost) -> String {
            if c.is_integer() {
                format!("{}", c.numer())
            } else {
                format!("{:.6}", *c.numer() as f64 / *c.denom() as f64)
            }
        }
        let mut out = String::new();
        out.push_str("Minimize\n obj:");
        for (j, c) in self.obj.iter().enumerate() {
            if !c.is_zero() {
                let _ = write!(out, " {} {}", sign_term(c), self.var_name(j));
            }
        }
        if !self.constant.is_zero() {
            let _ = write!(out, " + {}", frac(&self.constant));
        }
        out.push_str("\nSubject To\n");
        for (r, row) in self.rows.iter().enumerate() {
            let _ = write!(out, " c{r}:");
            for (j, c) in &row.coeffs {
                let _ = write!(out, " {} {}", sign_term(c), self.var_name(*j));
            }
            let rel = match row.rel {
                Relation::Le => "<=",
                Relation::Eq => "=",
            };
            let _ = writeln!(out, " {rel} {}", frac(&row.rhs));
        }
        out.push_str("Bounds\n");
        for j in 0..self.vars.len() {
            let _ = writeln!(out, " 0 <= {} <= 1", self.var_name(j));
        }
        out.push_str("Binary\n");
        for (j, v) in self.vars.iter().enumerate() {
            if v.integral {
                let _ = writeln!(out, " {}", self.var_name(j));
            }
        }
        out.push_str("End\n");
        return out;

        fn sign_term(c: &Cost) -> String {
            let num = *c.numer() as f64 / *c.denom() as f64;
            if num < 0.0 {
                format!("- {}", fmt_abs(-num))
            } else {
                format!("+ {}", fmt_abs(num))
            }
        }
        fn fmt_abs(v: f64) -> String {
            if v.fract() == 0.0 {
                format!("{}", v as i64)
            } else {
                format!("{v:.6}")
            }
        }
    }
}

/// A model extended with the single row `objective ≤ τ`; feasible iff the
/// edit distance is at most τ.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdedModel {
    pub model: IlpModel,
    pub tau: Cost,
}

/// Reduced mapping costs and the constant offset K for a graph pair.
///
/// K is the cumulative cost of deleting every element of G and inserting
/// every element of H; `node[i][k] = c_{i,k} − c_{i,ε} − c_{ε,k}` and
/// `edge[e][f]` likewise over the underlying undirected edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCosts {
    pub node: Vec<Vec<Cost>>,
    pub edge: Vec<Vec<Cost>>,
    pub k: Cost,
}

pub fn reduced_costs(g: &LabeledGraph, h: &LabeledGraph, c: &dyn CostModel) -> ReducedCosts {
    let mut k = Cost::zero();
    let node_del: Vec<Cost> = (0..g.n() as u32).map(|i| c.node_del(g, i)).collect();
    let node_ins: Vec<Cost> = (0..h.n() as u32).map(|j| c.node_ins(h, j)).collect();
    let edge_del: Vec<Cost> = (0..g.m() as u32).map(|e| c.edge_del(g, e)).collect();
    let edge_ins: Vec<Cost> = (0..h.m() as u32).map(|f| c.edge_ins(h, f)).collect();
    for v in node_del.iter().chain(&node_ins).chain(&edge_del).chain(&edge_ins) {
        k += *v;
    }
    let node = (0..g.n() as u32)
        .map(|i| {
            (0..h.n() as u32)
                .map(|kk| c.node_subst(g, i, h, kk) - node_del[i as usize] - node_ins[kk as usize])
                .collect()
        })
        .collect();
    let edge = (0..g.m() as u32)
        .map(|e| {
            (0..h.m() as u32)
                .map(|f| c.edge_subst(g, e, h, f) - edge_del[e as usize] - edge_ins[f as usize])
                .collect()
        })
        .collect();
    ReducedCosts { node, edge, k }
}

/// Indexing helper shared by the model builder and solution extraction.
pub struct ForiLayout {
    pub n_g: usize,
    pub n_h: usize,
    pub arcs: OrientedArcSet,
}

impl ForiLayout {
    pub fn new(g: &LabeledGraph, h: &LabeledGraph) -> Self {
        Self { n_g: g.n(), n_h: h.n(), arcs: orient(g, h) }
    }

    pub fn x_index(&self, i: u32, k: u32) -> usize {
        i as usize * self.n_h + k as usize
    }

    pub fn num_x(&self) -> usize {
        self.n_g * self.n_h
    }

    pub fn z_index(&self, g_arc: usize, h_arc: usize) -> usize {
        self.num_x() + g_arc * self.arcs.h_arcs.len() + h_arc
    }

    pub fn num_vars(&self) -> usize {
        self.num_x() + self.arcs.g_arcs.len() * self.arcs.h_arcs.len()
    }

    /// The undirected H edge index behind a bidirected arc index.
    pub fn h_edge_of_arc(&self, h_arc: usize) -> usize {
        h_arc / 2
    }
}

/// Builds the arc-oriented exact model: optimal integer value equals the edit
/// distance. All variables binary, all rows ≤.
pub fn build_fori(g: &LabeledGraph, h: &LabeledGraph, c: &dyn CostModel) -> IlpModel {
    let layout = ForiLayout::new(g, h);
    let rc = reduced_costs(g, h, c);

    let mut vars = Vec::with_capacity(layout.num_vars());
    let mut obj = Vec::with_capacity(layout.num_vars());
    for i in 0..g.n() as u32 {
        for k in 0..h.n() as u32 {
            vars.push(Variable { kind: VarKind::NodeMap { i: Some(i), k: Some(k) }, integral: true });
            obj.push(rc.node[i as usize][k as usize]);
        }
    }
    for (ge, &(gi, gj)) in layout.arcs.g_arcs.iter().enumerate() {
        for (ha, &(hk, hl)) in layout.arcs.h_arcs.iter().enumerate() {
            vars.push(Variable {
                kind: VarKind::ArcMap { gi, gj, hk, hl },
                integral: true,
            });
            obj.push(rc.edge[ge][layout.h_edge_of_arc(ha)]);
        }
    }

    let one = Cost::from(1);
    let mut rows = Vec::new();
    for i in 0..g.n() as u32 {
        let coeffs = (0..h.n() as u32).map(|k| (layout.x_index(i, k), one)).collect();
        rows.push(Row { coeffs, rel: Relation::Le, rhs: one, kind: RowKind::AssignG(i) });
    }
    for k in 0..h.n() as u32 {
        let coeffs = (0..g.n() as u32).map(|i| (layout.x_index(i, k), one)).collect();
        rows.push(Row { coeffs, rel: Relation::Le, rhs: one, kind: RowKind::AssignH(k) });
    }
    // out-arc rows: Σ_{l ∈ δ+(k)} z_{ij,kl} ≤ x_{i,k}
    for k in 0..h.n() as u32 {
        for (ge, &(gi, _gj)) in layout.arcs.g_arcs.iter().enumerate() {
            let mut coeffs = Vec::new();
            for (ha, &(hk, _hl)) in layout.arcs.h_arcs.iter().enumerate() {
                if hk == k {
                    coeffs.push((layout.z_index(ge, ha), one));
                }
            }
            coeffs.push((layout.x_index(gi, k), -one));
            rows.push(Row {
                coeffs,
                rel: Relation::Le,
                rhs: Cost::zero(),
                kind: RowKind::TopoR { arc_g: ge as u32, k },
            });
        }
    }
    // in-arc rows: Σ_{l ∈ δ−(k)} z_{ij,lk} ≤ x_{j,k}
    for k in 0..h.n() as u32 {
        for (ge, &(_gi, gj)) in layout.arcs.g_arcs.iter().enumerate() {
            let mut coeffs = Vec::new();
            for (ha, &(_hk, hl)) in layout.arcs.h_arcs.iter().enumerate() {
                if hl == k {
                    coeffs.push((layout.z_index(ge, ha), one));
                }
            }
            coeffs.push((layout.x_index(gj, k), -one));
            rows.push(Row {
                coeffs,
                rel: Relation::Le,
                rhs: Cost::zero(),
                kind: RowKind::TopoS { arc_g: ge as u32, k },
            });
        }
    }
    // node-side rows: Σ_{j ∈ δ+(i)} z_{ij,kl} + Σ_{j ∈ δ−(i)} z_{ji,lk} ≤ x_{i,k}
    for i in 0..g.n() as u32 {
        for (ha, &(hk, hl)) in layout.arcs.h_arcs.iter().enumerate() {
            let mut coeffs = Vec::new();
            for (ge, &(gi, gj)) in layout.arcs.g_arcs.iter().enumerate() {
                if gi == i {
                    // arc (i,j) mapped to (k,l)
                    coeffs.push((layout.z_index(ge, ha), one));
                } else if gj == i {
                    // arc (j,i) mapped to (l,k): the reverse of h arc `ha`
                    let rev = ha ^ 1;
                    coeffs.push((layout.z_index(ge, rev), one));
                }
            }
            coeffs.push((layout.x_index(i, hk), -one));
            let _ = hl;
            rows.push(Row {
                coeffs,
                rel: Relation::Le,
                rhs: Cost::zero(),
                kind: RowKind::TopoT { i, arc_h: ha as u32 },
            });
        }
    }

    IlpModel { vars, obj, constant: rc.k, rows }
}

/// Indexing for the edge-assignment cross-check formulation.
struct F1Layout {
    n_g: usize,
    n_h: usize,
    m_g: usize,
    m_h: usize,
}

impl F1Layout {
    fn x(&self, i: u32, k: u32) -> usize {
        i as usize * self.n_h + k as usize
    }
    fn x_del(&self, i: u32) -> usize {
        self.n_g * self.n_h + i as usize
    }
    fn x_ins(&self, k: u32) -> usize {
        self.n_g * self.n_h + self.n_g + k as usize
    }
    fn y_base(&self) -> usize {
        self.n_g * self.n_h + self.n_g + self.n_h
    }
    fn y(&self, e: u32, f: u32) -> usize {
        self.y_base() + e as usize * self.m_h + f as usize
    }
    fn y_del(&self, e: u32) -> usize {
        self.y_base() + self.m_g * self.m_h + e as usize
    }
    fn y_ins(&self, f: u32) -> usize {
        self.y_base() + self.m_g * self.m_h + self.m_g + f as usize
    }
    fn total(&self) -> usize {
        self.y_base() + self.m_g * self.m_h + self.m_g + self.m_h
    }
}

fn build_f1_base(g: &LabeledGraph, h: &LabeledGraph, c: &dyn CostModel) -> (IlpModel, F1Layout) {
    let l = F1Layout { n_g: g.n(), n_h: h.n(), m_g: g.m(), m_h: h.m() };
    let mut vars = Vec::with_capacity(l.total());
    let mut obj = Vec::with_capacity(l.total());
    for i in 0..g.n() as u32 {
        for k in 0..h.n() as u32 {
            vars.push(Variable { kind: VarKind::NodeMap { i: Some(i), k: Some(k) }, integral: true });
            obj.push(c.node_subst(g, i, h, k));
        }
    }
    for i in 0..g.n() as u32 {
        vars.push(Variable { kind: VarKind::NodeMap { i: Some(i), k: None }, integral: true });
        obj.push(c.node_del(g, i));
    }
    for k in 0..h.n() as u32 {
        vars.push(Variable { kind: VarKind::NodeMap { i: None, k: Some(k) }, integral: true });
        obj.push(c.node_ins(h, k));
    }
    for e in 0..g.m() as u32 {
        for f in 0..h.m() as u32 {
            vars.push(Variable { kind: VarKind::EdgeMap { e: Some(e), f: Some(f) }, integral: true });
            obj.push(c.edge_subst(g, e, h, f));
        }
    }
    for e in 0..g.m() as u32 {
        vars.push(Variable { kind: VarKind::EdgeMap { e: Some(e), f: None }, integral: true });
        obj.push(c.edge_del(g, e));
    }
    for f in 0..h.m() as u32 {
        vars.push(Variable { kind: VarKind::EdgeMap { e: None, f: Some(f) }, integral: true });
        obj.push(c.edge_ins(h, f));
    }

    let one = Cost::from(1);
    let mut rows = Vec::new();
    for i in 0..g.n() as u32 {
        let mut coeffs: Vec<(usize, Cost)> =
            (0..h.n() as u32).map(|k| (l.x(i, k), one)).collect();
        coeffs.push((l.x_del(i), one));
        rows.push(Row { coeffs, rel: Relation::Eq, rhs: one, kind: RowKind::AssignG(i) });
    }
    for k in 0..h.n() as u32 {
        let mut coeffs: Vec<(usize, Cost)> =
            (0..g.n() as u32).map(|i| (l.x(i, k), one)).collect();
        coeffs.push((l.x_ins(k), one));
        rows.push(Row { coeffs, rel: Relation::Eq, rhs: one, kind: RowKind::AssignH(k) });
    }
    for e in 0..g.m() as u32 {
        let mut coeffs: Vec<(usize, Cost)> =
            (0..h.m() as u32).map(|f| (l.y(e, f), one)).collect();
        coeffs.push((l.y_del(e), one));
        rows.push(Row { coeffs, rel: Relation::Eq, rhs: one, kind: RowKind::EdgeAssignG(e) });
    }
    for f in 0..h.m() as u32 {
        let mut coeffs: Vec<(usize, Cost)> =
            (0..g.m() as u32).map(|e| (l.y(e, f), one)).collect();
        coeffs.push((l.y_ins(f), one));
        rows.push(Row { coeffs, rel: Relation::Eq, rhs: one, kind: RowKind::EdgeAssignH(f) });
    }
    (IlpModel { vars, obj, constant: Cost::zero(), rows }, l)
}

/// Builds the edge-assignment formulation with explicit ε variables; its
/// integer optimum equals the edit distance and serves as a cross-check of
/// the arc-oriented model.
pub fn build_f1(g: &LabeledGraph, h: &LabeledGraph, c: &dyn CostModel) -> IlpModel {
    let (mut m, l) = build_f1_base(g, h, c);
    let one = Cost::from(1);
    for e in 0..g.m() as u32 {
        let (i, j) = g.edge(e);
        for f in 0..h.m() as u32 {
            let (k, lq) = h.edge(f);
            m.rows.push(Row {
                coeffs: vec![(l.y(e, f), one), (l.x(i, k), -one), (l.x(j, k), -one)],
                rel: Relation::Le,
                rhs: Cost::zero(),
                kind: RowKind::Topo,
            });
            m.rows.push(Row {
                coeffs: vec![(l.y(e, f), one), (l.x(i, lq), -one), (l.x(j, lq), -one)],
                rel: Relation::Le,
                rhs: Cost::zero(),
                kind: RowKind::Topo,
            });
        }
    }
    m
}

/// The relaxed polytope containing every branch-match solution: the paired
/// topological rows are replaced by their averaged combination
/// y ≤ ½(x_{i,k} + x_{j,k} + x_{i,l} + x_{j,l}).
pub fn build_bm_polytope(g: &LabeledGraph, h: &LabeledGraph, c: &dyn CostModel) -> IlpModel {
    let (mut m, l) = build_f1_base(g, h, c);
    let one = Cost::from(1);
    let half = Cost::new(1, 2);
    for e in 0..g.m() as u32 {
        let (i, j) = g.edge(e);
        for f in 0..h.m() as u32 {
            let (k, lq) = h.edge(f);
            m.rows.push(Row {
                coeffs: vec![
                    (l.y(e, f), one),
                    (l.x(i, k), -half),
                    (l.x(j, k), -half),
                    (l.x(i, lq), -half),
                    (l.x(j, lq), -half),
                ],
                rel: Relation::Le,
                rhs: Cost::zero(),
                kind: RowKind::Topo,
            });
        }
    }
    m
}

/// Extends a model with the constraint `objective ≤ τ`: the result is
/// feasible iff the edit distance is at most τ. The comparison is exact in
/// the cost scale; no epsilon.
pub fn add_threshold(m: &IlpModel, tau: Cost) -> ThresholdedModel {
    let mut model = m.clone();
    let coeffs: Vec<(usize, Cost)> = m
        .obj
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, *c))
        .collect();
    model.rows.push(Row {
        coeffs,
        rel: Relation::Le,
        rhs: tau - m.constant,
        kind: RowKind::Threshold,
    });
    ThresholdedModel { model, tau }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::unit_costs;
    use crate::graph::star_cycle_instance;
    use crate::testutil::{fig2_pair, random_alphabets, random_graph, rng, RandomGraphSpec};

    #[test]
    fn star_cycle_constant() {
        // K = 4n−1 under unit costs
        for n in [3usize, 5, 10] {
            let (s, c) = star_cycle_instance(n).unwrap();
            let rc = reduced_costs(&s, &c, &unit_costs());
            assert_eq!(rc.k, Cost::from(4 * n as i64 - 1));
        }
    }

    #[test]
    fn fig2_constant_and_reduced_node_cost() {
        let (g, h) = fig2_pair();
        let rc = reduced_costs(&g, &h, &unit_costs());
        assert_eq!(rc.k, Cost::from(18)); // 5+4+4+5
        // same-label pair: 0 − 1 − 1 = −2
        assert_eq!(rc.node[0][1], Cost::from(-2)); // both A
        assert_eq!(rc.node[0][0], Cost::from(-1)); // A vs B
    }

    #[test]
    fn fori_dimensions_fig2() {
        let (g, h) = fig2_pair();
        let m = build_fori(&g, &h, &unit_costs());
        assert_eq!(m.num_vars(), 20 + 40); // 5·4 x-vars, 4·2·5 z-vars
        // |V_G|+|V_H| + 2·|V_H|·|E_G| + |V_G|·2·|E_H|
        assert_eq!(m.num_rows(), 9 + 2 * 4 * 4 + 5 * 10);
    }

    #[test]
    fn dimension_formulas_on_random_pairs() {
        let spec = RandomGraphSpec::default();
        let alph = random_alphabets(&spec);
        let mut r = rng(7);
        for _ in 0..50 {
            let g = random_graph(&mut r, &alph, &spec);
            let h = random_graph(&mut r, &alph, &spec);
            let m = build_fori(&g, &h, &unit_costs());
            assert_eq!(m.num_vars(), g.n() * h.n() + g.m() * 2 * h.m());
            assert_eq!(
                m.num_rows(),
                g.n() + h.n() + 2 * h.n() * g.m() + g.n() * 2 * h.m()
            );
            let f1 = build_f1(&g, &h, &unit_costs());
            assert_eq!(
                f1.num_vars(),
                g.n() * h.n() + g.n() + h.n() + g.m() * h.m() + g.m() + h.m()
            );
        }
    }

    #[test]
    fn reduced_costs_nonpositive_for_shipped_models() {
        let (g, h) = fig2_pair();
        for rc in [
            reduced_costs(&g, &h, &unit_costs()),
            reduced_costs(&g, &h, &crate::costs::aids_muta_costs()),
        ] {
            assert!(rc.k >= Cost::zero());
            for row in rc.node.iter().chain(&rc.edge) {
                assert!(row.iter().all(|v| *v <= Cost::zero()));
            }
        }
    }

    #[test]
    fn threshold_row_appended() {
        let (g, h) = fig2_pair();
        let m = build_fori(&g, &h, &unit_costs());
        let t = add_threshold(&m, Cost::from(5));
        assert_eq!(t.model.num_rows(), m.num_rows() + 1);
        let last = t.model.rows.last().unwrap();
        assert_eq!(last.kind, RowKind::Threshold);
        assert_eq!(last.rhs, Cost::from(5) - m.constant);
    }

    #[test]
    fn empty_mapping_is_feasible_and_costs_k() {
        let (g, h) = fig2_pair();
        let m = build_fori(&g, &h, &unit_costs());
        let zero = vec![Cost::zero(); m.num_vars()];
        assert!(m.is_feasible(&zero));
        assert_eq!(m.objective_value(&zero), m.constant);
    }

    #[test]
    fn dump_lp_mentions_all_rows() {
        let (g, h) = fig2_pair();
        let m = build_fori(&g, &h, &unit_costs());
        let text = m.dump_lp();
        assert!(text.contains("Minimize"));
        assert!(text.contains("Subject To"));
        assert!(text.contains(&format!("c{}", m.num_rows() - 1)));
    }
}
