//! Brute-force ground truth for small instances. Everything here enumerates
//! mappings exhaustively and is deliberately independent of the assignment,
//! LP, and branch-and-bound code paths it is used to check.

use num_traits::Zero;
use thiserror::Error;

use crate::costs::{Cost, CostModel};
use crate::graph::LabeledGraph;

/// Enumeration is capped at this many nodes per graph.
pub const MAX_ORACLE_NODES: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limited to {MAX_ORACLE_NODES} nodes per graph, got {n} and {m}")]
    TooLarge { n: usize, m: usize },
}

fn check_size(g: &LabeledGraph, h: &LabeledGraph) -> Result<(), OracleError> {
    if g.n() > MAX_ORACLE_NODES || h.n() > MAX_ORACLE_NODES {
        return Err(OracleError::TooLarge { n: g.n(), m: h.n() });
    }
    Ok(())
}

/// Exact edit distance by exhaustion over all injective partial node mappings
/// V_G ⇀ V_H, with the edge mapping induced by the node mapping. Returns the
/// minimum cost and one optimal mapping (`None` = node deleted).
pub fn brute_force_ged(
    g: &LabeledGraph,
    h: &LabeledGraph,
    c: &dyn CostModel,
) -> Result<(Cost, Vec<Option<u32>>), OracleError> {
    check_size(g, h)?;
    let mut best = Cost::zero();
    // the empty mapping: delete all of G, insert all of H
    for i in 0..g.n() as u32 {
        best += c.node_del(g, i);
    }
    for e in 0..g.m() as u32 {
        best += c.edge_del(g, e);
    }
    for k in 0..h.n() as u32 {
        best += c.node_ins(h, k);
    }
    for f in 0..h.m() as u32 {
        best += c.edge_ins(h, f);
    }
    let mut best_map: Vec<Option<u32>> = vec![None; g.n()];
    let mut map: Vec<Option<u32>> = vec![None; g.n()];
    let mut used = vec![false; h.n()];

    // Running cost covers decided nodes (delete or substitute) and G edges
    // whose endpoints are both decided; both contributions are nonnegative,
    // so `running ≥ best` is a sound cut. Insertions for untouched H
    // elements are added only at the leaves.
    fn leaf_extra(
        g: &LabeledGraph,
        h: &LabeledGraph,
        c: &dyn CostModel,
        map: &[Option<u32>],
        used: &[bool],
    ) -> Cost {
        let mut extra = Cost::zero();
        for k in 0..h.n() as u32 {
            if !used[k as usize] {
                extra += c.node_ins(h, k);
            }
        }
        for f in 0..h.m() as u32 {
            let (k, l) = h.edge(f);
            let covered = map.iter().enumerate().any(|(i, mi)| {
                mi == &Some(k)
                    && map.iter().enumerate().any(|(j, mj)| {
                        j != i && mj == &Some(l) && g.has_edge(i as u32, j as u32)
                    })
            });
            if !covered {
                extra += c.edge_ins(h, f);
            }
        }
        extra
    }

    fn recurse(
        g: &LabeledGraph,
        h: &LabeledGraph,
        c: &dyn CostModel,
        i: u32,
        running: Cost,
        map: &mut Vec<Option<u32>>,
        used: &mut Vec<bool>,
        best: &mut Cost,
        best_map: &mut Vec<Option<u32>>,
    ) {
        if running >= *best {
            return;
        }
        if i as usize == g.n() {
            let total = running + leaf_extra(g, h, c, map, used);
            if total < *best {
                *best = total;
                best_map.clone_from(map);
            }
            return;
        }
        // edges {j,i} with j < i become decided once i is assigned
        let edge_step = |map: &Vec<Option<u32>>, target: Option<u32>| -> Cost {
            let mut s = Cost::zero();
            for j in 0..i {
                let Some(e) = g.find_edge(j, i) else { continue };
                match (map[j as usize], target) {
                    (Some(k), Some(l)) => {
                        if let Some(f) = h.find_edge(k, l) {
                            s += c.edge_subst(g, e, h, f);
                        } else {
                            s += c.edge_del(g, e);
                        }
                    }
                    _ => s += c.edge_del(g, e),
                }
            }
            s
        };

        for k in 0..h.n() as u32 {
            if used[k as usize] {
                continue;
            }
            let step = c.node_subst(g, i, h, k) + edge_step(map, Some(k));
            map[i as usize] = Some(k);
            used[k as usize] = true;
            recurse(g, h, c, i + 1, running + step, map, used, best, best_map);
            used[k as usize] = false;
            map[i as usize] = None;
        }
        let step = c.node_del(g, i) + edge_step(map, None);
        recurse(g, h, c, i + 1, running + step, map, used, best, best_map);
    }

    recurse(g, h, c, 0, Cost::zero(), &mut map, &mut used, &mut best, &mut best_map);
    Ok((best, best_map))
}

/// Branch-match bound by exhaustion: minimum over all injective partial node
/// mappings of the summed branch costs, with exact inner edge matchings via
/// small-matrix enumeration. Edge terms halved as in the bound definition.
pub fn brute_force_bm(
    g: &LabeledGraph,
    h: &LabeledGraph,
    c: &dyn CostModel,
) -> Result<Cost, OracleError> {
    check_size(g, h)?;
    let half = crate::costs::cost(1, 2);

    let branch_subst = |i: u32, k: u32| -> Cost {
        let ge = g.incident_edges(i);
        let he = h.incident_edges(k);
        let p = ge.len();
        let q = he.len();
        let mut mat = vec![vec![Cost::zero(); q + 1]; p + 1];
        for (a, &e) in ge.iter().enumerate() {
            for (b, &f) in he.iter().enumerate() {
                mat[a][b] = c.edge_subst(g, e, h, f);
            }
            mat[a][q] = c.edge_del(g, e);
        }
        for (b, &f) in he.iter().enumerate() {
            mat[p][b] = c.edge_ins(h, f);
        }
        c.node_subst(g, i, h, k)
            + half * crate::costs::lsape_small(&mat).expect("well-shaped matrix")
    };
    let branch_del = |i: u32| -> Cost {
        let edges: Cost = g.incident_edges(i).iter().map(|&e| c.edge_del(g, e)).sum();
        c.node_del(g, i) + half * edges
    };
    let branch_ins = |k: u32| -> Cost {
        let edges: Cost = h.incident_edges(k).iter().map(|&f| c.edge_ins(h, f)).sum();
        c.node_ins(h, k) + half * edges
    };

    let mut best: Cost = (0..g.n() as u32).map(branch_del).sum::<Cost>()
        + (0..h.n() as u32).map(branch_ins).sum::<Cost>();
    let mut used = vec![false; h.n()];

    fn recurse(
        g: &LabeledGraph,
        h: &LabeledGraph,
        i: u32,
        running: Cost,
        used: &mut Vec<bool>,
        best: &mut Cost,
        branch_subst: &dyn Fn(u32, u32) -> Cost,
        branch_del: &dyn Fn(u32) -> Cost,
        branch_ins: &dyn Fn(u32) -> Cost,
    ) {
        if running >= *best {
            return;
        }
        if i as usize == g.n() {
            let mut total = running;
            for k in 0..h.n() as u32 {
                if !used[k as usize] {
                    total += branch_ins(k);
                }
            }
            if total < *best {
                *best = total;
            }
            return;
        }
        for k in 0..h.n() as u32 {
            if used[k as usize] {
                continue;
            }
            used[k as usize] = true;
            recurse(g, h, i + 1, running + branch_subst(i, k), used, best, branch_subst, branch_del, branch_ins);
            used[k as usize] = false;
        }
        recurse(g, h, i + 1, running + branch_del(i), used, best, branch_subst, branch_del, branch_ins);
    }

    recurse(g, h, 0, Cost::zero(), &mut used, &mut best, &branch_subst, &branch_del, &branch_ins);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{aids_muta_costs, unit_costs};
    use crate::graph::{star_cycle_instance, Alphabets};
    use crate::testutil::{fig2_pair, random_alphabets, random_graph, rng, RandomGraphSpec};
    use crate::ilp::reduced_costs;

    #[test]
    fn identical_graphs_distance_zero() {
        let (g, _) = fig2_pair();
        let (v, map) = brute_force_ged(&g, &g, &unit_costs()).unwrap();
        assert_eq!(v, Cost::zero());
        assert_eq!(map, (0..g.n() as u32).map(Some).collect::<Vec<_>>());
    }

    #[test]
    fn fig2_distance_is_five() {
        let (g, h) = fig2_pair();
        let (v, _) = brute_force_ged(&g, &h, &unit_costs()).unwrap();
        assert_eq!(v, Cost::from(5));
    }

    #[test]
    fn single_node_relabel_beats_del_ins() {
        let alph = std::sync::Arc::new(Alphabets::from_tokens(&["A", "B"], &[]));
        let a = alph.node_label("A").unwrap();
        let b = alph.node_label("B").unwrap();
        let g = crate::graph::LabeledGraph::build(alph.clone(), vec![a], vec![]).unwrap();
        let h = crate::graph::LabeledGraph::build(alph.clone(), vec![b], vec![]).unwrap();
        let (v, _) = brute_force_ged(&g, &h, &unit_costs()).unwrap();
        assert_eq!(v, Cost::from(1));
    }

    #[test]
    fn rejects_large_graphs() {
        let (s, c) = star_cycle_instance(9).unwrap();
        assert!(matches!(brute_force_ged(&s, &c, &unit_costs()), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn symmetric_and_below_k() {
        let spec = RandomGraphSpec::default();
        let alph = random_alphabets(&spec);
        let mut r = rng(0x0c);
        for model in [&unit_costs() as &dyn crate::costs::CostModel, &aids_muta_costs()] {
            for _ in 0..10 {
                let g = random_graph(&mut r, &alph, &spec);
                let h = random_graph(&mut r, &alph, &spec);
                let (gh, _) = brute_force_ged(&g, &h, model).unwrap();
                let (hg, _) = brute_force_ged(&h, &g, model).unwrap();
                assert_eq!(gh, hg);
                assert!(gh <= reduced_costs(&g, &h, model).k);
            }
        }
    }

    #[test]
    fn bm_oracle_star_cycle() {
        let (s, c) = star_cycle_instance(5).unwrap();
        assert_eq!(brute_force_bm(&s, &c, &unit_costs()).unwrap(), Cost::from(3));
        assert_eq!(brute_force_bm(&s, &s, &unit_costs()).unwrap(), Cost::zero());
    }

    #[test]
    fn bm_oracle_matches_assignment_bound() {
        let spec = RandomGraphSpec { max_nodes: 5, ..RandomGraphSpec::default() };
        let alph = random_alphabets(&spec);
        let mut r = rng(0xbb);
        for model in [&unit_costs() as &dyn crate::costs::CostModel, &aids_muta_costs()] {
            for _ in 0..15 {
                let g = random_graph(&mut r, &alph, &spec);
                let h = random_graph(&mut r, &alph, &spec);
                let oracle = brute_force_bm(&g, &h, model).unwrap();
                let fast = crate::bounds::bm_bound(&g, &h, model).value;
                assert_eq!(oracle, fast, "{g} vs {h}");
            }
        }
    }
}
