//! Sparse integer elimination for large boundary matrices.
//!
//! Boundary matrices of triangulated surfaces reduce almost entirely by
//! +-1 pivots, which are fill-friendly and keep entries small. Whatever
//! survives unit-pivot elimination is handed to the dense arbitrary-precision
//! Smith routine; for the complexes in this crate that residue is tiny.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use num::bigint::BigInt;

use super::mat::IntMat;
use super::snf::smith_normal_form;

pub struct SparseIntMat {
    nrows: usize,
    cols: Vec<HashMap<usize, i64>>,
    rows: Vec<HashSet<usize>>,
}

impl SparseIntMat {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseIntMat {
            nrows,
            cols: vec![HashMap::new(); ncols],
            rows: vec![HashSet::new(); nrows],
        }
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            return;
        }
        let e = self.cols[c].entry(r).or_insert(0);
        *e += v;
        if *e == 0 {
            self.cols[c].remove(&r);
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c);
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(HashMap::len).sum()
    }

    /// Rank and invariant factors via unit-pivot elimination with a dense
    /// Smith fallback on the residue.
    pub fn rank_and_factors(mut self) -> (usize, Vec<BigInt>) {
        let mut live_col = vec![true; self.cols.len()];
        let mut live_row = vec![true; self.nrows];
        let mut unit_pivots = 0usize;

        // Lazy Markowitz heap over +-1 entries: cheapest fill first.
        let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();
        let cost = |rows: &Vec<HashSet<usize>>,
                    cols: &Vec<HashMap<usize, i64>>,
                    r: usize,
                    c: usize| {
            ((cols[c].len() - 1) as u64) * ((rows[r].len() - 1) as u64)
        };
        for (c, col) in self.cols.iter().enumerate() {
            for (&r, &v) in col {
                if v.abs() == 1 {
                    heap.push(Reverse((cost(&self.rows, &self.cols, r, c), r, c)));
                }
            }
        }

        'outer: while let Some(Reverse((popped_cost, r, c))) = heap.pop() {
            if !live_col[c] || !live_row[r] {
                continue;
            }
            let Some(&pv) = self.cols[c].get(&r) else {
                continue;
            };
            if pv.abs() != 1 {
                continue;
            }
            let now = cost(&self.rows, &self.cols, r, c);
            if now > popped_cost {
                heap.push(Reverse((now, r, c)));
                continue;
            }

            // Pre-compute the new values of every other column touching row
            // r; bail out of this pivot entirely on (unlikely) overflow so
            // the matrix is never left half-updated.
            let pivot_col: Vec<(usize, i64)> = self.cols[c].iter().map(|(&k, &v)| (k, v)).collect();
            let other_cols: Vec<usize> = self.rows[r].iter().copied().filter(|&x| x != c).collect();
            let mut updates: Vec<(usize, Vec<(usize, i64)>)> = Vec::with_capacity(other_cols.len());
            for &c2 in &other_cols {
                let f = self.cols[c2][&r] * pv;
                let mut new_vals = Vec::with_capacity(pivot_col.len());
                for &(r2, v2) in &pivot_col {
                    let old = self.cols[c2].get(&r2).copied().unwrap_or(0);
                    let nv = f
                        .checked_mul(v2)
                        .and_then(|p| old.checked_sub(p));
                    match nv {
                        Some(nv) => new_vals.push((r2, nv)),
                        None => continue 'outer,
                    }
                }
                updates.push((c2, new_vals));
            }

            for (c2, new_vals) in updates {
                for (r2, nv) in new_vals {
                    if nv == 0 {
                        self.cols[c2].remove(&r2);
                        self.rows[r2].remove(&c2);
                    } else {
                        self.cols[c2].insert(r2, nv);
                        self.rows[r2].insert(c2);
                        if nv.abs() == 1 {
                            heap.push(Reverse((
                                cost(&self.rows, &self.cols, r2, c2),
                                r2,
                                c2,
                            )));
                        }
                    }
                }
            }

            // Row r is now supported only on column c; retire both.
            for (r2, _) in pivot_col {
                self.rows[r2].remove(&c);
            }
            self.cols[c].clear();
            live_col[c] = false;
            live_row[r] = false;
            unit_pivots += 1;
        }

        // Dense residue.
        let res_rows: Vec<usize> = (0..self.nrows)
            .filter(|&r| live_row[r] && !self.rows[r].is_empty())
            .collect();
        let res_cols: Vec<usize> = (0..self.cols.len())
            .filter(|&c| live_col[c] && !self.cols[c].is_empty())
            .collect();
        let mut factors = vec![BigInt::from(1); unit_pivots];
        if !res_rows.is_empty() && !res_cols.is_empty() {
            let rmap: HashMap<usize, usize> =
                res_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
            let mut dense = IntMat::zero(res_rows.len(), res_cols.len());
            for (j, &c) in res_cols.iter().enumerate() {
                for (&r, &v) in &self.cols[c] {
                    dense[(rmap[&r], j)] = BigInt::from(v);
                }
            }
            let s = smith_normal_form(&dense);
            let extra: Vec<BigInt> = s
                .d
                .diagonal()
                .into_iter()
                .filter(|x| !num::Zero::is_zero(x))
                .collect();
            factors.extend(extra);
        }
        let rank = factors.len();
        (rank, factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_snf() {
        // A few fixed matrices, compared against the dense route.
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 4], vec![-2, 6]],
            vec![vec![1, 0, -1], vec![0, 1, -1]],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![2, 0], vec![0, 2], vec![1, 1]],
        ];
        for rows in cases {
            let dense = IntMat::from_rows(&rows);
            let s = smith_normal_form(&dense);
            let want_rank = s.rank();
            let want: Vec<BigInt> = s
                .d
                .diagonal()
                .into_iter()
                .filter(|x| !num::Zero::is_zero(x))
                .collect();
            let mut sp = SparseIntMat::new(rows.len(), rows[0].len());
            for (i, row) in rows.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    sp.add(i, j, v);
                }
            }
            let (rank, factors) = sp.rank_and_factors();
            assert_eq!(rank, want_rank);
            assert_eq!(factors, want);
        }
    }
}
