//! Graded pieces of `k_*F = F₂[x₁..xₙ]/I_F`, where `I_F` is generated by the
//! k-invariants, together with nilpotence heights and the top degree.
//!
//! Each degree is handled by explicit linear algebra on the lexicographic
//! monomial basis; the ideal's degree-`d` piece is spanned by `m·κ_t` for all
//! monomials `m` of degree `d-2`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactlin::BitMatrix;
use crate::forms::{KInvariantSet, LinearForm, QuadraticForm};

/// Monomials of one degree as sorted variable multisets, in lexicographic order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    degree: usize,
    monomials: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        let mut monomials = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        fill(n, degree, 0, &mut cur, &mut monomials);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Self {
            n,
            degree,
            monomials,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<u8>] {
        &self.monomials
    }

    pub fn index_of(&self, m: &[u8]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

fn fill(n: usize, left: usize, start: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for v in start..n {
        cur.push(v as u8);
        fill(n, left - 1, v, cur, out);
        cur.pop();
    }
}

fn times(m: &[u8], vars: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(m.len() + vars.len());
    out.extend_from_slice(m);
    out.extend_from_slice(vars);
    out.sort_unstable();
    out
}

/// Monomials of `m·q` (no cancellation can occur: distinct terms of `q` give distinct products).
pub fn monomial_times_quadric(m: &[u8], q: &QuadraticForm) -> Vec<Vec<u8>> {
    let n = q.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            if q.coeff(i, j) {
                out.push(times(m, &[i as u8, j as u8]));
            }
        }
    }
    out
}

/// Rows spanning the degree-`d` piece of the ideal, over the degree-`d` basis.
pub fn ideal_piece(kinv: &KInvariantSet, basis: &MonomialBasis) -> BitMatrix {
    let d = basis.degree();
    let mut m = BitMatrix::zeros(0, basis.len());
    if d < 2 {
        return m;
    }
    let lower = MonomialBasis::new(kinv.n(), d - 2);
    for mono in lower.monomials() {
        for q in kinv.forms() {
            let mut row = BitMatrix::zeros(1, basis.len());
            for p in monomial_times_quadric(mono, q) {
                row.flip(0, basis.index_of(&p).expect("product stays in degree"));
            }
            m.push_row_words(row.row_words(0));
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedQuotient {
    pub n: usize,
    pub kinv: KInvariantSet,
    pub dims: Vec<usize>,
}

/// `dim_d k_*F` for `d = 0..=cutoff`.
pub fn graded_dims(kinv: &KInvariantSet, cutoff: usize) -> Vec<usize> {
    (0..=cutoff)
        .map(|d| {
            let basis = MonomialBasis::new(kinv.n(), d);
            basis.len() - ideal_piece(kinv, &basis).rank()
        })
        .collect()
}

pub fn graded_quotient(kinv: &KInvariantSet, cutoff: usize) -> GradedQuotient {
    GradedQuotient {
        n: kinv.n(),
        kinv: kinv.clone(),
        dims: graded_dims(kinv, cutoff),
    }
}

/// Default cutoff for non-formally-real inputs.
pub fn default_cutoff(kinv: &KInvariantSet) -> usize {
    kinv.n() + 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotence {
    /// Smallest `m ≥ 1` with `ℓ^m ∈ I_F`.
    Height(usize),
    NotNilpotentUpTo(usize),
}

/// Coefficients of `ℓ^m` over the degree-`m` basis.
fn linear_power(l: &LinearForm, basis: &MonomialBasis) -> Vec<bool> {
    let m = basis.degree();
    let vars: Vec<u8> = (0..l.n())
        .filter(|&i| l.coeffs() >> i & 1 == 1)
        .map(|i| i as u8)
        .collect();
    // ℓ^m = Σ over words of length m; a multiset appears (multinomial coefficient) times
    let mut poly: HashMap<Vec<u8>, bool> = HashMap::from([(Vec::new(), true)]);
    for _ in 0..m {
        let mut next: HashMap<Vec<u8>, bool> = HashMap::new();
        for (mono, _) in poly.into_iter().filter(|(_, c)| *c) {
            for &v in &vars {
                let e = next.entry(times(&mono, &[v])).or_insert(false);
                *e = !*e;
            }
        }
        poly = next;
    }
    let mut out = vec![false; basis.len()];
    for (mono, c) in poly {
        if c {
            out[basis.index_of(&mono).unwrap()] = true;
        }
    }
    out
}

pub fn nilpotence_height(kinv: &KInvariantSet, l: &LinearForm, cutoff: usize) -> Nilpotence {
    assert_eq!(l.n(), kinv.n());
    for m in 1..=cutoff {
        let basis = MonomialBasis::new(kinv.n(), m);
        let power = linear_power(l, &basis);
        if power.iter().all(|&b| !b) {
            return Nilpotence::Height(m);
        }
        let ideal = ideal_piece(kinv, &basis);
        let with = ideal.vstack(&BitMatrix::from_bool_rows(basis.len(), &[power]));
        if with.rank() == ideal.rank() {
            return Nilpotence::Height(m);
        }
    }
    Nilpotence::NotNilpotentUpTo(cutoff)
}

/// Level `s(F) = 2^{h-1}` from the nilpotence height `h` of `[-1]`.
pub fn level(kinv: &KInvariantSet, minus_one: &LinearForm, cutoff: usize) -> Option<u64> {
    match nilpotence_height(kinv, minus_one, cutoff) {
        Nilpotence::Height(h) => Some(1u64 << (h - 1)),
        Nilpotence::NotNilpotentUpTo(_) => None,
    }
}

/// Largest degree `≤ cutoff` with a nonzero piece, for non-formally-real inputs.
pub fn top_degree(kinv: &KInvariantSet, cutoff: usize) -> Result<usize> {
    if kinv.has_nonzero_common_zero() {
        return Err(Error::FormallyRealInput);
    }
    let dims = graded_dims(kinv, cutoff);
    Ok(dims.iter().rposition(|&d| d > 0).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, forms: &[&str]) -> KInvariantSet {
        KInvariantSet::parse(n, forms).unwrap()
    }

    fn q2() -> KInvariantSet {
        set(3, &["x2*x2", "x3*x3", "x1*x2", "x1*x3", "x1*x1 + x2*x3"])
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(MonomialBasis::new(3, 0).len(), 1);
        assert_eq!(MonomialBasis::new(3, 2).len(), 6);
        assert_eq!(MonomialBasis::new(4, 3).len(), 20);
        assert_eq!(MonomialBasis::new(2, 2).monomials()[1], vec![0, 1]);
    }

    #[test]
    fn universal_quotient_vanishes_in_degree_two() {
        let w3 = set(3, &["x1*x1", "x2*x2", "x3*x3", "x1*x2", "x1*x3", "x2*x3"]);
        assert_eq!(graded_dims(&w3, 5), vec![1, 3, 0, 0, 0, 0]);
        assert_eq!(top_degree(&w3, 5).unwrap(), 1);
        let l = LinearForm::parse("x1 + x2", 3).unwrap();
        assert_eq!(nilpotence_height(&w3, &l, 5), Nilpotence::Height(2));
    }

    #[test]
    fn q2_dims_and_level() {
        assert_eq!(graded_dims(&q2(), 5), vec![1, 3, 1, 0, 0, 0]);
        let minus_one = LinearForm::parse("x1", 3).unwrap();
        assert_eq!(
            nilpotence_height(&q2(), &minus_one, 5),
            Nilpotence::Height(3)
        );
        assert_eq!(level(&q2(), &minus_one, 5), Some(4));
        assert_eq!(top_degree(&q2(), 5).unwrap(), 2);
    }

    #[test]
    fn pythagorean_quotient_is_wedge_of_polynomial_rings() {
        let t3 = set(3, &["x1*x2", "x1*x3", "x2*x3"]);
        assert_eq!(graded_dims(&t3, 6), vec![1, 3, 3, 3, 3, 3, 3]);
        let x1 = LinearForm::var(3, 0);
        assert_eq!(
            nilpotence_height(&t3, &x1, 8),
            Nilpotence::NotNilpotentUpTo(8)
        );
        assert_eq!(top_degree(&t3, 6), Err(Error::FormallyRealInput));
    }

    #[test]
    fn degree_two_matches_rank_formula() {
        let s = q2();
        assert_eq!(graded_dims(&s, 2)[2], 6 - s.r());
    }
}
