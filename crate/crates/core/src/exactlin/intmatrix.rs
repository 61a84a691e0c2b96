//! Integer matrices with arbitrary-precision entries and Smith normal form.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::BitMatrix;

/// Row-sparse integer matrix; each row holds `(column, nonzero value)` sorted by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(u32, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row_entries(&self, i: usize) -> &[(u32, BigInt)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        assert!(i < self.rows && j < self.cols);
        match self.data[i].binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        assert!(i < self.rows && j < self.cols);
        let row = &mut self.data[i];
        match row.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(k) if value.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = value,
            Err(_) if value.is_zero() => {}
            Err(k) => row.insert(k, (j as u32, value)),
        }
    }

    /// Adds `value` to entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, value: &BigInt) {
        let cur = self.get(i, j);
        self.set(i, j, cur + value);
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                out[i][*j as usize] = v.clone();
            }
        }
        out
    }

    fn from_dense(d: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(d.len(), cols);
        for (i, row) in d.iter().enumerate() {
            m.data[i] = row
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j as u32, v.clone()))
                .collect();
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = vec![BigInt::zero(); other.cols];
            for (k, a) in &self.data[i] {
                for (j, b) in &other.data[*k as usize] {
                    acc[*j as usize] += a * b;
                }
            }
            out.data[i] = acc
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j as u32, v))
                .collect();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// Entrywise reduction mod 2.
    pub fn mod2(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                if v.is_odd() {
                    m.set(i, *j as usize, true);
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                t.data[*j as usize].push((i as u32, v.clone()));
            }
        }
        t
    }
}

/// Smith normal form diagonal `d₁ | d₂ | … ` of length `min(rows, cols)`, zeros last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors different from 0 and 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    pub fn has_two_torsion(&self) -> bool {
        self.torsion().iter().any(|d| d.is_even())
    }
}

/// Smith form together with unimodular `left`, `right` such that `left · M · right = diag`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub form: SmithForm,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

/// Invariant factors of `m`.
///
/// Unit pivots are eliminated sparsely first; the residual block, which has
/// no ±1 entries, is diagonalised densely.
pub fn snf(m: &IntMatrix) -> SmithForm {
    let k = m.rows.min(m.cols);
    let mut units = 0usize;
    let mut rows: Vec<Vec<(u32, BigInt)>> = m.data.clone();
    let mut col_rows: Vec<HashSet<u32>> = vec![HashSet::new(); m.cols];
    for (i, row) in rows.iter().enumerate() {
        for (j, _) in row {
            col_rows[*j as usize].insert(i as u32);
        }
    }
    let mut alive = vec![true; m.rows];

    loop {
        // smallest row holding a unit; within it, the unit whose column is shortest
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !alive[i] || row.is_empty() {
                continue;
            }
            if let Some((_, _, len)) = best {
                if row.len() >= len {
                    continue;
                }
            }
            let unit = row
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .min_by_key(|(j, _)| col_rows[*j as usize].len());
            if let Some((j, _)) = unit {
                best = Some((i, *j as usize, row.len()));
                if row.len() == 1 {
                    break;
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pi]);
        alive[pi] = false;
        let pv = pivot_row
            .iter()
            .find(|(j, _)| *j as usize == pj)
            .map(|(_, v)| v.clone())
            .unwrap();
        for (j, _) in &pivot_row {
            col_rows[*j as usize].remove(&(pi as u32));
        }
        let targets: Vec<u32> = col_rows[pj].iter().copied().collect();
        for r in targets {
            let r = r as usize;
            let a = rows[r]
                .iter()
                .find(|(j, _)| *j as usize == pj)
                .map(|(_, v)| v.clone())
                .unwrap();
            // row_r -= (a / pv) * pivot_row, pv = ±1
            let factor = &a * &pv;
            let old = std::mem::take(&mut rows[r]);
            let merged = axpy_row(&old, &pivot_row, &(-factor));
            for (j, _) in &old {
                col_rows[*j as usize].remove(&(r as u32));
            }
            for (j, _) in &merged {
                col_rows[*j as usize].insert(r as u32);
            }
            rows[r] = merged;
        }
        // Column pj is now confined to the pivot row; the row itself is
        // cleared by column operations that touch nothing else.
        col_rows[pj].clear();
        units += 1;
    }

    // residual dense block
    let live_rows: Vec<usize> = (0..m.rows)
        .filter(|&i| alive[i] && !rows[i].is_empty())
        .collect();
    let mut live_cols: Vec<u32> = live_rows
        .iter()
        .flat_map(|&i| rows[i].iter().map(|(j, _)| *j))
        .collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let mut diagonal: Vec<BigInt> = vec![BigInt::one(); units];
    if !live_rows.is_empty() {
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (ri, &i) in live_rows.iter().enumerate() {
            for (j, v) in &rows[i] {
                let cj = live_cols.binary_search(j).unwrap();
                dense[ri][cj] = v.clone();
            }
        }
        let d = dense_smith(&mut dense, None, None);
        diagonal.extend(d.into_iter().filter(|x| !x.is_zero()));
    }
    diagonal.resize(k, BigInt::zero());
    SmithForm { diagonal }
}

/// Smith normal form by dense elimination, tracking the unimodular transforms.
pub fn snf_with_transforms(m: &IntMatrix) -> SmithDecomposition {
    let mut a = m.to_dense();
    let mut u = IntMatrix::identity(m.rows).to_dense();
    let mut v = IntMatrix::identity(m.cols).to_dense();
    let diagonal = dense_smith(&mut a, Some(&mut u), Some(&mut v));
    SmithDecomposition {
        form: SmithForm { diagonal },
        left: IntMatrix::from_dense(&u, m.rows),
        right: IntMatrix::from_dense(&v, m.cols),
    }
}

fn axpy_row(x: &[(u32, BigInt)], y: &[(u32, BigInt)], c: &BigInt) -> Vec<(u32, BigInt)> {
    // x + c*y
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let s = &x[i].1 + c * &y[j].1;
            if !s.is_zero() {
                out.push((x[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let add = c * &row[src];
            row[dst] += add;
        }
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Diagonalises `a` in place into Smith form, returning the diagonal.
fn dense_smith(
    a: &mut [Vec<BigInt>],
    mut u: Option<&mut Vec<Vec<BigInt>>>,
    mut v: Option<&mut Vec<Vec<BigInt>>>,
) -> Vec<BigInt> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let k = m.min(n);
    for t in 0..k {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows_all(a, u.as_deref_mut(), t, bi);
        swap_cols_all(a, v.as_deref_mut(), t, bj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let negq = -q;
                row_axpy(a, i, t, &negq);
                if let Some(u) = u.as_deref_mut() {
                    row_axpy(u, i, t, &negq);
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                let negq = -q;
                col_axpy(a, j, t, &negq);
                if let Some(v) = v.as_deref_mut() {
                    col_axpy(v, j, t, &negq);
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // bring the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                swap_rows_all(a, u.as_deref_mut(), t, best.0);
                swap_cols_all(a, v.as_deref_mut(), t, best.1);
                continue;
            }
            // pivot must divide the trailing block
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !a[i][j].is_zero() && !a[i][j].is_multiple_of(&a[t][t]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(a, t, i, &one);
                    if let Some(u) = u.as_deref_mut() {
                        row_axpy(u, t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
    }
    (0..k).map(|t| a[t][t].clone()).collect()
}

fn swap_rows_all(a: &mut [Vec<BigInt>], u: Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        if let Some(u) = u {
            u.swap(i, j);
        }
    }
}

fn swap_cols_all(a: &mut [Vec<BigInt>], v: Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
    if i != j {
        swap_cols(a, i, j);
        if let Some(v) = v {
            swap_cols(v, i, j);
        }
    }
}

/// Homology `ker(outgoing) / im(incoming)` of a free middle module of rank `mid`.
///
/// `incoming` is `mid × a`, `outgoing` is `b × mid`; their composite must vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntHomology {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn homology(incoming: &IntMatrix, outgoing: &IntMatrix) -> IntHomology {
    assert_eq!(incoming.rows, outgoing.cols, "maps are not composable");
    let sin = snf(incoming);
    let sout = snf(outgoing);
    IntHomology {
        free_rank: incoming.rows - sin.rank() - sout.rank(),
        torsion: sin.torsion(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let m = IntMatrix::from_rows(2, &[vec![2i64, 0], vec![0, 3]]);
        assert_eq!(snf(&m).diagonal, ints(&[1, 6]));
        assert_eq!(snf_with_transforms(&m).form.diagonal, ints(&[1, 6]));
    }

    #[test]
    fn identity_is_its_own_form() {
        let m = IntMatrix::identity(5);
        assert_eq!(snf(&m).diagonal, ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let m = IntMatrix::from_rows(3, &[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let dec = snf_with_transforms(&m);
        assert_eq!(dec.form.diagonal, ints(&[2, 6, 12]));
        let prod = dec.left.mul(&m).mul(&dec.right);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    dec.form.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(prod.get(i, j), want);
            }
        }
    }

    #[test]
    fn zero_and_rectangular() {
        let m = IntMatrix::zeros(3, 2);
        assert_eq!(snf(&m).diagonal, ints(&[0, 0]));
        let m = IntMatrix::from_rows(3, &[vec![0i64, 4, 0], vec![0, 0, 6]]);
        assert_eq!(snf(&m).diagonal, ints(&[2, 12]));
    }

    #[test]
    fn homology_of_projective_plane_chain() {
        // cellular chains of RP²: Z --2--> Z --0--> Z
        let d2 = IntMatrix::from_rows(1, &[vec![2i64]]);
        let d1 = IntMatrix::from_rows(1, &[vec![0i64]]);
        let h1 = homology(&d2, &d1);
        assert_eq!(h1.free_rank, 0);
        assert_eq!(h1.torsion, ints(&[2]));
    }
}
