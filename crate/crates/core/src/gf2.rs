//! Small GF(2) helpers over `u8` bit vectors (one bit per byte, values 0/1)
//! and a bit-packed dense matrix used for rank computations.

/// XOR of two equal-length bit strings.
pub fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn xor_in_place(acc: &mut [u8], other: &[u8]) {
    debug_assert_eq!(acc.len(), other.len());
    for (x, y) in acc.iter_mut().zip(other) {
        *x ^= y;
    }
}

pub fn weight(a: &[u8]) -> usize {
    a.iter().filter(|&&b| b != 0).count()
}

pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Dense GF(2) matrix with rows packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseGf2 {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl DenseGf2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self {
            cols,
            words,
            rows: vec![vec![0; words]; rows],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &bit) in row.iter().enumerate() {
                if bit != 0 {
                    m.set(r, c);
                }
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] |= 1 << (c % 64);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] ^= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & bit != 0 {
                    for (a, b) in row[w..].iter_mut().zip(&pivot_row[w..]) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        let mut packed = vec![0u64; self.words];
        for (c, &bit) in x.iter().enumerate() {
            if bit != 0 {
                packed[c / 64] |= 1 << (c % 64);
            }
        }
        self.rows
            .iter()
            .map(|row| {
                let ones: u32 = row.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
                (ones & 1) as u8
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_dependent_rows() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        assert_eq!(DenseGf2::from_rows(&rows, 3).rank(), 2);
        let eye: Vec<Vec<u8>> = (0..70)
            .map(|i| (0..70).map(|j| (i == j) as u8).collect())
            .collect();
        assert_eq!(DenseGf2::from_rows(&eye, 70).rank(), 70);
    }

    #[test]
    fn mul_vec_matches_manual_parity() {
        let rows = vec![vec![1, 1, 0, 1], vec![0, 1, 1, 1]];
        let m = DenseGf2::from_rows(&rows, 4);
        assert_eq!(m.mul_vec(&[1, 0, 0, 1]), vec![0, 1]);
    }

    #[test]
    fn weight_and_distance() {
        assert_eq!(weight(&[1, 0, 1, 1]), 3);
        assert_eq!(hamming_distance(&[1, 0, 1], &[0, 0, 1]), 1);
        assert_eq!(xor(&[1, 0, 1], &[1, 1, 0]), vec![0, 1, 1]);
    }
}
