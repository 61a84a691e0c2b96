//! Symmetric `p`-hook Young diagrams and `GL_n` dimension counts.
//!
//! A symmetric diagram with `p` diagonal boxes is given by its principal arm
//! lengths `a₁ > … > a_p ≥ 0` (Frobenius notation `(a | a)`); it has
//! `p + 2Σa_i` boxes. Shapes are stored in row convention. Since every diagram
//! here is self-transpose, reading them column-wise gives the same values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricHookDiagram {
    arms: Vec<usize>,
    shape: Vec<usize>,
}

impl SymmetricHookDiagram {
    /// Builds the diagram from strictly decreasing arm lengths.
    pub fn from_arms(arms: Vec<usize>) -> Result<Self> {
        if arms.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidInput(format!(
                "arms {arms:?} are not strictly decreasing"
            )));
        }
        let p = arms.len();
        let mut shape: Vec<usize> = arms.iter().enumerate().map(|(i, a)| a + i + 1).collect();
        // rows below the diagonal block: column j (≤ p) has length a_j + j
        let mut row = p + 1;
        loop {
            let len = arms
                .iter()
                .enumerate()
                .filter(|(j, a)| *a + j + 1 >= row)
                .count();
            if len == 0 {
                break;
            }
            shape.push(len);
            row += 1;
        }
        Ok(Self { arms, shape })
    }

    pub fn arms(&self) -> &[usize] {
        &self.arms
    }

    /// Row lengths `λ₁ ≥ λ₂ ≥ …`.
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn p(&self) -> usize {
        self.arms.len()
    }

    pub fn q(&self) -> usize {
        self.arms.iter().sum()
    }

    pub fn boxes(&self) -> usize {
        self.shape.iter().sum()
    }

    fn column_len(&self, j: usize) -> usize {
        self.shape.iter().take_while(|&&l| l > j).count()
    }

    /// Hook length of box `(i, j)`, 0-based.
    pub fn hook(&self, i: usize, j: usize) -> usize {
        (self.shape[i] - j - 1) + (self.column_len(j) - i - 1) + 1
    }

    /// `(row, column)` of every box, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.shape
            .iter()
            .enumerate()
            .flat_map(|(i, &l)| (0..l).map(move |j| (i, j)))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.shape.first().copied().unwrap_or(0)).all(|j| self.column_len(j) == self.shape[j])
            && self.shape.len() == self.shape.first().copied().unwrap_or(0)
    }
}

/// All diagrams with `p` distinct arms summing to `q`, arms in decreasing lexicographic order.
pub fn enumerate(p: usize, q: usize) -> Vec<SymmetricHookDiagram> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    arms_rec(p, q, usize::MAX, &mut cur, &mut out);
    out.into_iter()
        .map(|arms| SymmetricHookDiagram::from_arms(arms).expect("strictly decreasing"))
        .collect()
}

fn arms_rec(
    left: usize,
    sum: usize,
    bound: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if left == 0 {
        if sum == 0 {
            out.push(cur.clone());
        }
        return;
    }
    // the remaining left-1 parts are distinct and below the next one: at least C(left-1, 2)
    let min_rest = (left - 1) * left.saturating_sub(2) / 2;
    let hi = sum.min(bound.saturating_sub(1));
    for a in (0..=hi).rev() {
        if a + 1 < left {
            break;
        }
        if sum - a < min_rest {
            continue;
        }
        cur.push(a);
        arms_rec(left - 1, sum - a, a, cur, out);
        cur.pop();
    }
}

/// `dim S_λ(Fⁿ) = Π (n + j - i) / h(i,j)`, evaluated exactly.
pub fn dimension(d: &SymmetricHookDiagram, n: usize) -> BigInt {
    assert!(n >= 1);
    if d.shape.len() > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (i, j) in d.cells() {
        num *= BigInt::from(n + j - i);
        den *= BigInt::from(d.hook(i, j));
    }
    let (quot, rem) = num.div_rem(&den);
    assert!(
        rem.is_zero(),
        "hook-content product not integral for {:?}",
        d.shape
    );
    quot
}

pub const SSYT_MAX_BOXES: usize = 10;
pub const SSYT_MAX_ENTRIES: usize = 6;

/// Semistandard fillings with entries in `1..=n`, counted by brute force.
pub fn ssyt_count(d: &SymmetricHookDiagram, n: usize) -> Result<u64> {
    if d.boxes() > SSYT_MAX_BOXES || n > SSYT_MAX_ENTRIES {
        return Err(Error::BudgetExceeded {
            what: format!("tableau enumeration of {} boxes with n={n}", d.boxes()),
            needed: d.boxes() as u64,
            budget: SSYT_MAX_BOXES as u64,
        });
    }
    let cells: Vec<(usize, usize)> = d.cells().collect();
    let mut grid: Vec<Vec<usize>> = d.shape.iter().map(|&l| vec![0; l]).collect();
    Ok(fill_ssyt(&cells, 0, n, &mut grid))
}

fn fill_ssyt(cells: &[(usize, usize)], k: usize, n: usize, grid: &mut [Vec<usize>]) -> u64 {
    if k == cells.len() {
        return 1;
    }
    let (i, j) = cells[k];
    let lo_row = if j > 0 { grid[i][j - 1] } else { 1 };
    let lo_col = if i > 0 { grid[i - 1][j] + 1 } else { 1 };
    let lo = lo_row.max(lo_col);
    let mut total = 0;
    for v in lo..=n {
        grid[i][j] = v;
        total += fill_ssyt(cells, k + 1, n, grid);
    }
    grid[i][j] = 0;
    total
}

/// `Σ_{p+q=k} Σ_{diagrams} dim S_λ(Fⁿ)`.
pub fn coefficient_lower_bound(n: usize, k: usize) -> Result<BigInt> {
    let top = n + n * n.saturating_sub(1) / 2;
    if k > top {
        return Err(Error::InvalidInput(format!("degree {k} exceeds {top}")));
    }
    let mut total = BigInt::zero();
    for p in 0..=k {
        for d in enumerate(p, k - p) {
            total += dimension(&d, n);
        }
    }
    Ok(total)
}
