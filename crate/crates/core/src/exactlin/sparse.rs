//! Sparse F₂ matrices stored by column, for boundary maps too large for dense
//! elimination. Rank is computed by left-to-right column reduction on the
//! largest row index ("low" pivot), the standard scheme for cellular boundaries.

use super::BitMatrix;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseF2Matrix {
    rows: usize,
    columns: Vec<Vec<u32>>,
}

impl SparseF2Matrix {
    pub fn new(rows: usize) -> Self {
        Self {
            rows,
            columns: Vec::new(),
        }
    }

    pub fn with_capacity(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            columns: Vec::with_capacity(cols),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Appends a column from arbitrary row indices; repeated indices cancel mod 2.
    pub fn push_column(&mut self, mut entries: Vec<u32>) {
        entries.sort_unstable();
        let mut out: Vec<u32> = Vec::with_capacity(entries.len());
        for e in entries {
            assert!((e as usize) < self.rows, "row index {e} out of range");
            if out.last() == Some(&e) {
                out.pop();
            } else {
                out.push(e);
            }
        }
        self.columns.push(out);
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for &i in col {
                m.set(i as usize, j, true);
            }
        }
        m
    }

    pub fn from_dense(m: &BitMatrix) -> Self {
        let mut s = Self::with_capacity(m.rows(), m.cols());
        for j in 0..m.cols() {
            s.columns.push(
                (0..m.rows())
                    .filter(|&i| m.get(i, j))
                    .map(|i| i as u32)
                    .collect(),
            );
        }
        s
    }

    /// Triplets `(row, col, 1)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&i| (i as usize, j)))
    }

    pub fn rank(&self) -> usize {
        let mut pivot_of: Vec<u32> = vec![u32::MAX; self.rows];
        let mut reduced: Vec<Vec<u32>> = Vec::new();
        let mut scratch = Vec::new();
        for col in &self.columns {
            let mut cur = col.clone();
            while let Some(&low) = cur.last() {
                let p = pivot_of[low as usize];
                if p == u32::MAX {
                    break;
                }
                xor_sorted(&cur, &reduced[p as usize], &mut scratch);
                std::mem::swap(&mut cur, &mut scratch);
            }
            if let Some(&low) = cur.last() {
                pivot_of[low as usize] = reduced.len() as u32;
                reduced.push(cur);
            }
        }
        reduced.len()
    }
}

fn xor_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    out.reserve(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}
