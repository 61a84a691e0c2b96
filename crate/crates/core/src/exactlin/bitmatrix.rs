//! Dense bit-packed matrices over F₂.
//!
//! Rows are stored contiguously, `words_per_row` 64-bit words each. Bit `j` of
//! row `i` lives in word `i * words_per_row + j / 64` at position `j % 64`.
//! Padding bits past `cols` are always zero.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD);
        Self {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of booleans. All rows must have length `cols`.
    pub fn from_bool_rows(cols: usize, rows: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, &b) in row.iter().enumerate() {
                if b {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix whose rows are the low `cols` bits of each mask (`cols ≤ 64`).
    pub fn from_masks(cols: usize, masks: &[u64]) -> Self {
        assert!(cols <= WORD);
        let mut m = Self::zeros(masks.len(), cols);
        let keep = if cols == WORD {
            u64::MAX
        } else {
            (1u64 << cols) - 1
        };
        for (i, &mask) in masks.iter().enumerate() {
            if m.words_per_row > 0 {
                m.data[i * m.words_per_row] = mask & keep;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        (self.data[i * self.words_per_row + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        let w = &mut self.data[i * self.words_per_row + j / WORD];
        let bit = 1u64 << (j % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        self.data[i * self.words_per_row + j / WORD] ^= 1u64 << (j % WORD);
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row_words(i).iter().all(|&w| w == 0)
    }

    /// Appends a row given as packed words (padding must be clear).
    pub fn push_row_words(&mut self, words: &[u64]) {
        assert_eq!(words.len(), self.words_per_row);
        self.data.extend_from_slice(words);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    t.set(wi * WORD + b, i, true);
                    bits &= bits - 1;
                }
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            words_per_row: self.words_per_row,
            data,
        }
    }

    /// Matrix product over F₂.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let base = i * out.words_per_row;
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = other.row_words(k);
                    for (o, s) in out.data[base..base + out.words_per_row].iter_mut().zip(src) {
                        *o ^= s;
                    }
                }
            }
        }
        out
    }

    /// Computes `M · v` for `v` given as packed words of length `cols`.
    pub fn mul_vec_words(&self, v: &[u64]) -> Vec<bool> {
        assert_eq!(v.len(), self.words_per_row);
        (0..self.rows)
            .map(|i| {
                self.row_words(i)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1
                    == 1
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Reduces a private copy to row echelon form; returns it with the pivot columns.
    fn echelon(&self, full: bool) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let wpr = m.words_per_row;
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.cols {
            if next == m.rows {
                break;
            }
            let wi = col / WORD;
            let bit = 1u64 << (col % WORD);
            let Some(p) = (next..m.rows).find(|&r| m.data[r * wpr + wi] & bit != 0) else {
                continue;
            };
            if p != next {
                for w in 0..wpr {
                    m.data.swap(p * wpr + w, next * wpr + w);
                }
            }
            let (head, tail) = m.data.split_at_mut(next * wpr);
            let (pivot_row, below) = tail.split_at_mut(wpr);
            let pivot_row = &pivot_row[wi..];
            for r in 0..below.len() / wpr {
                let row = &mut below[r * wpr + wi..(r + 1) * wpr];
                if row[0] & bit != 0 {
                    for (a, b) in row.iter_mut().zip(pivot_row) {
                        *a ^= b;
                    }
                }
            }
            if full {
                for r in 0..next {
                    let row = &mut head[r * wpr + wi..(r + 1) * wpr];
                    if row[0] & bit != 0 {
                        for (a, b) in row.iter_mut().zip(pivot_row) {
                            *a ^= b;
                        }
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon(false).1.len()
    }

    /// Basis of `{v : M vᵀ = 0}` as the rows of a matrix with `cols` columns.
    pub fn kernel(&self) -> Self {
        let (rref, pivots) = self.echelon(true);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.set(k, f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if rref.get(r, f) {
                    basis.set(k, p, true);
                }
            }
        }
        basis
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: String = (0..self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Dimension of the row space of `m` over F₂.
pub fn rank_f2(m: &BitMatrix) -> usize {
    m.rank()
}

/// Null-space basis of `m`, one basis vector per row.
pub fn kernel_f2(m: &BitMatrix) -> BitMatrix {
    m.kernel()
}
