//! Linear sum assignment (Hungarian algorithm) and multiset edit distance:
//! the combinatorial kernels behind the label-set and branch-match bounds.

use num_traits::Zero;
use thiserror::Error;

use crate::costs::Cost;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AssignmentError {
    #[error("cost matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("negative entry at ({0},{1})")]
    NegativeEntry(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// An optimal assignment: `row_to_col[i]` is the column matched to row `i`.
/// After ε-padding, columns `>= m` represent deletion slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentResult {
    pub row_to_col: Vec<usize>,
    pub total_cost: Cost,
}

/// Minimum-cost perfect matching on a square nonnegative matrix, with a
/// deterministic tie-break: among optimal assignments, the lexicographically
/// smallest `row_to_col` vector is returned.
pub fn lsap_solve(c: &[Vec<Cost>]) -> Result<AssignmentResult, AssignmentError> {
    let n = c.len();
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(AssignmentError::NonSquare { rows: n, cols: row.len() });
        }
        for (j, v) in row.iter().enumerate() {
            if *v < Cost::zero() {
                return Err(AssignmentError::NegativeEntry(i, j));
            }
        }
    }
    if n == 0 {
        return Ok(AssignmentResult { row_to_col: vec![], total_cost: Cost::zero() });
    }

    let optimum = hungarian_cost(c, &(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());

    // Lexicographic refinement: fix rows in order to the smallest column that
    // preserves the optimal total.
    let mut avail_cols: Vec<usize> = (0..n).collect();
    let mut fixed = Cost::zero();
    let mut row_to_col = Vec::with_capacity(n);
    let mut remaining_rows: Vec<usize> = (0..n).collect();
    for i in 0..n {
        remaining_rows.remove(0);
        let mut chosen = None;
        for (pos, &j) in avail_cols.iter().enumerate() {
            let sub = hungarian_cost(c, &remaining_rows, &cols_without(&avail_cols, pos));
            let total = fixed + c[i][j] + sub;
            if total == optimum {
                chosen = Some((pos, j));
                break;
            }
        }
        let (pos, j) = chosen.expect("optimal completion exists");
        fixed += c[i][j];
        row_to_col.push(j);
        avail_cols.remove(pos);
    }
    Ok(AssignmentResult { row_to_col, total_cost: optimum })
}

/// Optimal assignment cost only, skipping the lexicographic tie-break pass.
/// Use this on hot paths where the mapping itself is not needed.
pub fn lsap_cost(c: &[Vec<Cost>]) -> Result<Cost, AssignmentError> {
    let n = c.len();
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(AssignmentError::NonSquare { rows: n, cols: row.len() });
        }
        for (j, v) in row.iter().enumerate() {
            if *v < Cost::zero() {
                return Err(AssignmentError::NegativeEntry(i, j));
            }
        }
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(hungarian_cost(c, &idx, &idx))
}

fn cols_without(cols: &[usize], skip: usize) -> Vec<usize> {
    cols.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &c)| c).collect()
}

/// Optimal assignment cost on the submatrix `rows × cols` (equal sizes),
/// via the O(n³) potentials form of the Hungarian algorithm.
fn hungarian_cost(c: &[Vec<Cost>], rows: &[usize], cols: &[usize]) -> Cost {
    let n = rows.len();
    debug_assert_eq!(n, cols.len());
    if n == 0 {
        return Cost::zero();
    }
    // a large finite value exceeding any feasible assignment total
    let mut inf = Cost::from(1);
    for &r in rows {
        for &cl in cols {
            inf += c[r][cl];
        }
    }

    let mut u = vec![Cost::zero(); n + 1];
    let mut v = vec![Cost::zero(); n + 1];
    let mut p = vec![0usize; n + 1]; // p[j]: row (1-based) assigned to col j
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = c[rows[i0 - 1]][cols[j - 1]] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut total = Cost::zero();
    for j in 1..=n {
        total += c[rows[p[j] - 1]][cols[j - 1]];
    }
    total
}

/// ε-pads an n×m mapping-cost matrix into an (n+m)×(n+m) square matrix:
/// top-left is the mapping block, the top-right diagonal carries deletion
/// costs, the bottom-left diagonal insertion costs, and the bottom-right
/// block is zero. Off-diagonal del/ins slots get a finite sentinel larger
/// than any feasible assignment total.
pub fn pad_for_insert_delete(
    c_map: &[Vec<Cost>],
    del_costs: &[Cost],
    ins_costs: &[Cost],
) -> Result<Vec<Vec<Cost>>, AssignmentError> {
    let n = del_costs.len();
    let m = ins_costs.len();
    if c_map.len() != n {
        return Err(AssignmentError::DimensionMismatch(format!(
            "expected {n} mapping rows, got {}",
            c_map.len()
        )));
    }
    for row in c_map {
        if row.len() != m {
            return Err(AssignmentError::DimensionMismatch(format!(
                "expected {m} mapping columns, got {}",
                row.len()
            )));
        }
    }
    let mut sentinel = Cost::from(1);
    for row in c_map {
        for v in row {
            sentinel += *v;
        }
    }
    for v in del_costs.iter().chain(ins_costs) {
        sentinel += *v;
    }
    let size = n + m;
    let mut out = vec![vec![Cost::zero(); size]; size];
    for i in 0..n {
        for k in 0..m {
            out[i][k] = c_map[i][k];
        }
        for j in 0..n {
            out[i][m + j] = if i == j { del_costs[i] } else { sentinel };
        }
    }
    for j in 0..m {
        for k in 0..m {
            out[n + j][k] = if j == k { ins_costs[k] } else { sentinel };
        }
        // bottom-right stays zero
    }
    Ok(out)
}

/// Multiset edit distance Υ(S1, S2) = max(|S1|, |S2|) − |S1 ∩ S2|.
pub fn multiset_edit_distance<T: Ord + Clone>(s1: &[T], s2: &[T]) -> usize {
    let mut a: Vec<T> = s1.to_vec();
    let mut b: Vec<T> = s2.to_vec();
    a.sort();
    b.sort();
    let mut i = 0;
    let mut j = 0;
    let mut common = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len().max(b.len()) - common
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::cost;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Cost>> {
        rows.iter().map(|r| r.iter().map(|&v| Cost::from(v)).collect()).collect()
    }

    #[test]
    fn zero_matrix_identity() {
        for n in 1..5 {
            let c = vec![vec![Cost::zero(); n]; n];
            let r = lsap_solve(&c).unwrap();
            assert_eq!(r.total_cost, Cost::zero());
            assert_eq!(r.row_to_col, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn two_by_two() {
        let r = lsap_solve(&mat(&[&[1, 2], &[3, 0]])).unwrap();
        assert_eq!(r.total_cost, cost(1, 1));
        assert_eq!(r.row_to_col, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            lsap_solve(&mat(&[&[1, 2]])),
            Err(AssignmentError::NonSquare { .. })
        ));
        assert_eq!(
            lsap_solve(&mat(&[&[1, -2], &[3, 0]])).unwrap_err(),
            AssignmentError::NegativeEntry(0, 1)
        );
    }

    fn brute_force_min(c: &[Vec<Cost>]) -> Cost {
        fn rec(c: &[Vec<Cost>], row: usize, used: &mut Vec<bool>, acc: Cost, best: &mut Option<Cost>) {
            if row == c.len() {
                if best.as_ref().map_or(true, |b| acc < *b) {
                    *best = Some(acc);
                }
                return;
            }
            for j in 0..c.len() {
                if !used[j] {
                    used[j] = true;
                    rec(c, row + 1, used, acc + c[row][j], best);
                    used[j] = false;
                }
            }
        }
        let mut best = None;
        rec(c, 0, &mut vec![false; c.len()], Cost::zero(), &mut best);
        best.unwrap()
    }

    proptest! {
        #[test]
        fn matches_brute_force(entries in proptest::collection::vec(0i64..50, 36)) {
            let c: Vec<Vec<Cost>> = entries
                .chunks(6)
                .map(|r| r.iter().map(|&v| Cost::from(v)).collect())
                .collect();
            let r = lsap_solve(&c).unwrap();
            prop_assert_eq!(r.total_cost, brute_force_min(&c));
            // assignment sums to the reported cost and is a permutation
            let mut seen = vec![false; 6];
            let mut total = Cost::zero();
            for (i, &j) in r.row_to_col.iter().enumerate() {
                prop_assert!(!seen[j]);
                seen[j] = true;
                total += c[i][j];
            }
            prop_assert_eq!(total, r.total_cost);
        }

        #[test]
        fn cost_invariant_under_permutation(
            entries in proptest::collection::vec(0i64..30, 25),
            rperm in Just(()),
        ) {
            let _ = rperm;
            let c: Vec<Vec<Cost>> = entries
                .chunks(5)
                .map(|r| r.iter().map(|&v| Cost::from(v)).collect())
                .collect();
            let base = lsap_solve(&c).unwrap().total_cost;
            // rotate rows and reverse columns
            let mut rot = c.clone();
            rot.rotate_left(2);
            for row in &mut rot {
                row.reverse();
            }
            prop_assert_eq!(lsap_solve(&rot).unwrap().total_cost, base);
        }

        #[test]
        fn upsilon_properties(
            s1 in proptest::collection::vec(0u8..4, 0..8),
            s2 in proptest::collection::vec(0u8..4, 0..8),
        ) {
            let d12 = multiset_edit_distance(&s1, &s2);
            let d21 = multiset_edit_distance(&s2, &s1);
            prop_assert_eq!(d12, d21);
            prop_assert!(d12 <= s1.len().max(s2.len()));
        }
    }

    #[test]
    fn upsilon_examples() {
        let s: Vec<u8> = vec![1, 2, 3];
        assert_eq!(multiset_edit_distance(&s, &s), 0);
        assert_eq!(multiset_edit_distance(&[1u8, 1, 2], &[1u8, 2, 2]), 1);
        assert_eq!(multiset_edit_distance::<u8>(&[], &[1, 2]), 2);
    }

    #[test]
    fn padding_shapes() {
        let c = pad_for_insert_delete(&mat(&[&[5]]), &[cost(2, 1)], &[cost(3, 1)]).unwrap();
        assert_eq!(c, mat(&[&[5, 2], &[3, 0]]));

        let c = pad_for_insert_delete(&[], &[], &[cost(1, 1), cost(2, 1)]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0][0], cost(1, 1));
        assert_eq!(c[1][1], cost(2, 1));

        // n=2, m=1: one off-diagonal delete slot gets the sentinel
        let c =
            pad_for_insert_delete(&mat(&[&[1], &[1]]), &[cost(1, 1), cost(1, 1)], &[cost(1, 1)])
                .unwrap();
        assert_eq!(c.len(), 3);
        let sentinel = c[0][2];
        assert!(sentinel > cost(5, 1));
        assert_eq!(c[1][1], sentinel);
        assert_eq!(c[0][1], cost(1, 1));
        assert_eq!(c[1][2], cost(1, 1));
    }

    #[test]
    fn padding_dimension_mismatch() {
        assert!(matches!(
            pad_for_insert_delete(&mat(&[&[1, 2]]), &[Cost::zero(); 2], &[Cost::zero()]),
            Err(AssignmentError::DimensionMismatch(_))
        ));
    }
}
