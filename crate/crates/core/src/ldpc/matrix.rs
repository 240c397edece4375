use crate::error::{check_len, Error, Result};
use crate::gf2::DenseGf2;

/// Sparse binary parity-check matrix with row and column adjacency.
///
/// Edges are numbered in row-major order; `var_edges` maps each column entry
/// back to its edge id so message-passing can address both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    check_ptr: Vec<usize>,
    check_vars: Vec<u32>,
    var_ptr: Vec<usize>,
    var_checks: Vec<u32>,
    var_edges: Vec<u32>,
}

impl ParityCheckMatrix {
    /// Builds from per-check variable lists. Rows are sorted; duplicates and
    /// out-of-range indices are rejected.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let m = rows.len();
        let mut check_ptr = Vec::with_capacity(m + 1);
        let mut check_vars = Vec::new();
        check_ptr.push(0);
        let mut col_counts = vec![0usize; n];
        for (c, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Construction(format!("check {c} lists a variable twice")));
            }
            if let Some(&v) = row.last() {
                if v >= n {
                    return Err(Error::Construction(format!(
                        "check {c} references variable {v} >= n = {n}"
                    )));
                }
            }
            for v in row {
                col_counts[v] += 1;
                check_vars.push(v as u32);
            }
            check_ptr.push(check_vars.len());
        }

        let mut var_ptr = Vec::with_capacity(n + 1);
        var_ptr.push(0);
        for &count in &col_counts {
            var_ptr.push(var_ptr.last().unwrap() + count);
        }
        let mut fill = var_ptr[..n].to_vec();
        let mut var_checks = vec![0u32; check_vars.len()];
        let mut var_edges = vec![0u32; check_vars.len()];
        for c in 0..m {
            for e in check_ptr[c]..check_ptr[c + 1] {
                let v = check_vars[e] as usize;
                var_checks[fill[v]] = c as u32;
                var_edges[fill[v]] = e as u32;
                fill[v] += 1;
            }
        }
        Ok(Self {
            n,
            check_ptr,
            check_vars,
            var_ptr,
            var_checks,
            var_edges,
        })
    }

    /// Builds from per-variable check lists.
    pub fn from_columns(m: usize, cols: &[Vec<usize>]) -> Result<Self> {
        let mut rows = vec![Vec::new(); m];
        for (v, col) in cols.iter().enumerate() {
            for &c in col {
                if c >= m {
                    return Err(Error::Construction(format!(
                        "variable {v} references check {c} >= m = {m}"
                    )));
                }
                rows[c].push(v);
            }
        }
        Self::from_rows(cols.len(), rows)
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        let sparse = rows
            .iter()
            .map(|r| {
                check_len(n, r.len())?;
                Ok(r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i).collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Self::from_rows(n, sparse)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn n_edges(&self) -> usize {
        self.check_vars.len()
    }

    pub fn check_neighbors(&self, c: usize) -> &[u32] {
        &self.check_vars[self.check_ptr[c]..self.check_ptr[c + 1]]
    }

    pub fn var_neighbors(&self, v: usize) -> &[u32] {
        &self.var_checks[self.var_ptr[v]..self.var_ptr[v + 1]]
    }

    pub(crate) fn check_edge_range(&self, c: usize) -> std::ops::Range<usize> {
        self.check_ptr[c]..self.check_ptr[c + 1]
    }

    /// Edge ids (row-major) incident to variable `v`.
    pub(crate) fn var_edge_ids(&self, v: usize) -> &[u32] {
        &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]]
    }

    #[cfg(test)]
    pub(crate) fn edge_var(&self, e: usize) -> usize {
        self.check_vars[e] as usize
    }

    pub fn column_weights(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.var_ptr[v + 1] - self.var_ptr[v]).collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.m()).map(|c| self.check_ptr[c + 1] - self.check_ptr[c]).collect()
    }

    /// `(dv, dc)` when every column and every row has uniform weight.
    pub fn regular_degrees(&self) -> Option<(usize, usize)> {
        let cols = self.column_weights();
        let rows = self.row_weights();
        let dv = *cols.first()?;
        let dc = *rows.first()?;
        (cols.iter().all(|&w| w == dv) && rows.iter().all(|&w| w == dc)).then_some((dv, dc))
    }

    /// H x over GF(2).
    pub fn syndrome(&self, x: &[u8]) -> Result<Vec<u8>> {
        check_len(self.n, x.len())?;
        Ok(self.syndrome_unchecked(x))
    }

    pub(crate) fn syndrome_unchecked(&self, x: &[u8]) -> Vec<u8> {
        (0..self.m())
            .map(|c| {
                self.check_neighbors(c)
                    .iter()
                    .fold(0u8, |acc, &v| acc ^ x[v as usize])
            })
            .collect()
    }

    pub(crate) fn unsatisfied(&self, x: &[u8], z: &[u8]) -> usize {
        (0..self.m())
            .filter(|&c| {
                let parity = self
                    .check_neighbors(c)
                    .iter()
                    .fold(0u8, |acc, &v| acc ^ x[v as usize]);
                parity != z[c]
            })
            .count()
    }

    pub fn to_dense(&self) -> DenseGf2 {
        let mut d = DenseGf2::zeros(self.m(), self.n);
        for c in 0..self.m() {
            for &v in self.check_neighbors(c) {
                d.set(c, v as usize);
            }
        }
        d
    }

    /// GF(2) rank of H.
    pub fn rank(&self) -> usize {
        self.to_dense().rank()
    }

    /// 1 - m/n, assuming full rank.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.m() as f64 / self.n as f64
    }

    /// 1 - rank/n.
    pub fn actual_rate(&self) -> f64 {
        1.0 - self.rank() as f64 / self.n as f64
    }

    /// Number of length-4 cycles in the Tanner graph.
    pub fn four_cycle_count(&self) -> usize {
        let m = self.m();
        let mut shared = vec![0usize; m];
        let mut touched = Vec::new();
        let mut total = 0;
        for c in 0..m {
            for &v in self.check_neighbors(c) {
                for &c2 in self.var_neighbors(v as usize) {
                    let c2 = c2 as usize;
                    if c2 > c {
                        if shared[c2] == 0 {
                            touched.push(c2);
                        }
                        shared[c2] += 1;
                    }
                }
            }
            for &c2 in &touched {
                let k = shared[c2];
                total += k * (k - 1) / 2;
                shared[c2] = 0;
            }
            touched.clear();
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming74() -> ParityCheckMatrix {
        ParityCheckMatrix::from_dense(&[
            vec![1, 0, 1, 0, 1, 0, 1],
            vec![0, 1, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ])
        .unwrap()
    }

    #[test]
    fn unit_vectors_give_columns() {
        let h = hamming74();
        let dense = h.to_dense();
        for j in 0..7 {
            let mut e = vec![0u8; 7];
            e[j] = 1;
            let s = h.syndrome(&e).unwrap();
            let col: Vec<u8> = (0..3).map(|r| dense.get(r, j) as u8).collect();
            assert_eq!(s, col);
        }
        assert_eq!(h.syndrome(&[0; 7]).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn syndrome_length_mismatch() {
        assert!(matches!(
            hamming74().syndrome(&[0; 6]),
            Err(Error::LengthMismatch { expected: 7, actual: 6 })
        ));
    }

    #[test]
    fn adjacency_is_consistent() {
        let h = hamming74();
        for c in 0..h.m() {
            for &v in h.check_neighbors(c) {
                assert!(h.var_neighbors(v as usize).contains(&(c as u32)));
            }
        }
        for v in 0..h.n() {
            for &e in h.var_edge_ids(v) {
                assert_eq!(h.edge_var(e as usize), v);
            }
        }
        assert_eq!(h.rank(), 3);
        assert_eq!(h.regular_degrees(), None);
    }

    #[test]
    fn counts_four_cycles() {
        // Two checks sharing three variables: C(3,2) = 3 four-cycles.
        let h = ParityCheckMatrix::from_rows(4, vec![vec![0, 1, 2], vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(h.four_cycle_count(), 3);
        assert_eq!(hamming74().four_cycle_count(), 3);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(ParityCheckMatrix::from_rows(3, vec![vec![0, 3]]).is_err());
        assert!(ParityCheckMatrix::from_rows(3, vec![vec![1, 1]]).is_err());
        assert!(ParityCheckMatrix::from_columns(1, &[vec![1]]).is_err());
    }
}
