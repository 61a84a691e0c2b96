//! Koszul complexes.
//!
//! [`NilpotentKoszul`] is `K^{p,q} = Λ^p V ⊗ Λ^q(Λ²V)` with
//! `d(θ ⊗ ω₁∧…∧ω_q) = Σ_i (-1)^{i+1} (θ∧ω_i) ⊗ (ω₁∧…ω̂_i…∧ω_q)`, of bidegree
//! `(+2, -1)`. Its homology in total degree `p + q` computes the cohomology of
//! the free 2-step nilpotent group modulo the regular sequence.
//!
//! [`tor_dims`] computes `Tor^{F₂[b₁..b_r]}(F₂[x₁..xₙ], F₂)` for `b_t ↦ κ_t`, via
//! the Koszul complex `Λ(u₁..u_r) ⊗ F₂[x]` with `d u_t = κ_t`.
//!
//! Subsets are bit masks listed in increasing numeric order, which is colex
//! order; the pairs `{i<j}` are numbered lexicographically.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::{
    rank_f2_auto, rank_mod_p, snf, IntMatrix, SmithForm, SparseF2Matrix, LARGE_PRIME,
};
use crate::forms::KInvariantSet;
use crate::milnor::{monomial_times_quadric, MonomialBasis};

pub const INTEGER_MAX_N: usize = 5;
pub const FIELD_MAX_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    /// Ranks over ℚ, evaluated modulo the prime `2⁶¹ - 1`.
    Rationals,
    F2,
}

fn subsets(universe: usize, size: usize) -> Vec<u64> {
    // Gosper's hack enumerates fixed-popcount masks in increasing order
    if size == 0 {
        return vec![0];
    }
    if size > universe {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut x: u64 = (1 << size) - 1;
    let limit = 1u64 << universe;
    while x < limit {
        out.push(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn indexed(list: Vec<u64>) -> (Vec<u64>, HashMap<u64, usize>) {
    let index = list.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    (list, index)
}

#[derive(Clone, Debug)]
pub struct NilpotentKoszul {
    n: usize,
    pairs: Vec<(u32, u32)>,
    exterior: Vec<(Vec<u64>, HashMap<u64, usize>)>,
    pair_sets: Vec<(Vec<u64>, HashMap<u64, usize>)>,
}

impl NilpotentKoszul {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > FIELD_MAX_N {
            return Err(Error::BudgetExceeded {
                what: format!("Koszul complex for n={n}"),
                needed: n as u64,
                budget: FIELD_MAX_N as u64,
            });
        }
        let pairs: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|i| (i + 1..n as u32).map(move |j| (i, j)))
            .collect();
        let exterior = (0..=n).map(|p| indexed(subsets(n, p))).collect();
        let pair_sets = (0..=pairs.len())
            .map(|q| indexed(subsets(pairs.len(), q)))
            .collect();
        Ok(Self {
            n,
            pairs,
            exterior,
            pair_sets,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `dim Λ²V`.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        if p > self.n || q > self.pairs.len() {
            return 0;
        }
        self.exterior[p].0.len() * self.pair_sets[q].0.len()
    }

    fn index(&self, p: usize, q: usize, theta: u64, omega: u64) -> usize {
        self.exterior[p].1[&theta] * self.pair_sets[q].0.len() + self.pair_sets[q].1[&omega]
    }

    /// `d : K^{p,q} → K^{p+2,q-1}` as a `dim(p+2,q-1) × dim(p,q)` matrix.
    pub fn differential(&self, p: usize, q: usize) -> IntMatrix {
        let rows = self.dim(p + 2, q.wrapping_sub(1));
        let cols = self.dim(p, q);
        let mut m = IntMatrix::zeros(if q == 0 { 0 } else { rows }, cols);
        if q == 0 || p + 2 > self.n {
            return m;
        }
        for &theta in &self.exterior[p].0 {
            for &omega in &self.pair_sets[q].0 {
                let col = self.index(p, q, theta, omega);
                let mut rest = omega;
                let mut i = 0usize;
                while rest != 0 {
                    let t = rest.trailing_zeros();
                    rest &= rest - 1;
                    let (a, b) = self.pairs[t as usize];
                    let position_sign = i % 2 == 1;
                    i += 1;
                    if theta >> a & 1 == 1 || theta >> b & 1 == 1 {
                        continue;
                    }
                    let above_a = (theta >> (a + 1)).count_ones();
                    let above_b = (theta >> (b + 1)).count_ones();
                    let negative = position_sign ^ ((above_a + above_b) % 2 == 1);
                    let row = self.index(p + 2, q - 1, theta | 1 << a | 1 << b, omega & !(1 << t));
                    m.add_to(row, col, &BigInt::from(if negative { -1 } else { 1 }));
                }
            }
        }
        m
    }

    /// Every composite `d∘d` vanishes.
    pub fn check_d_squared(&self) -> bool {
        (0..=self.n).all(|p| {
            (2..=self.pairs.len()).all(|q| {
                p + 4 > self.n
                    || self
                        .differential(p + 2, q - 1)
                        .mul(&self.differential(p, q))
                        .is_zero()
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidegreeHomology {
    pub p: usize,
    pub q: usize,
    pub free_rank: usize,
    /// Invariant factors greater than 1 (integer coefficients only).
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulTable {
    pub n: usize,
    pub coefficients: Coefficients,
    pub entries: Vec<BidegreeHomology>,
}

impl KoszulTable {
    pub fn get(&self, p: usize, q: usize) -> Option<&BidegreeHomology> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }

    /// `Σ_{p+q=k}` of the ranks, for `k = 0..=n + C(n,2)`.
    pub fn total_degree_dims(&self) -> Vec<u64> {
        let top = self.n + self.n * (self.n - 1) / 2;
        let mut out = vec![0u64; top + 1];
        for e in &self.entries {
            out[e.p + e.q] += e.free_rank as u64;
        }
        out
    }

    pub fn two_torsion_at(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|e| e.torsion.iter().any(|d| d % 2u32 == BigInt::from(0)))
            .map(|e| (e.p, e.q))
            .collect()
    }

    /// CSV with columns `p,q,free_rank,torsion`, torsion factors separated by `;`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,free_rank,torsion\n");
        for e in &self.entries {
            let t: Vec<String> = e.torsion.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(s, "{},{},{},{}", e.p, e.q, e.free_rank, t.join(";"));
        }
        s
    }
}

fn to_sparse_f2(m: &IntMatrix) -> SparseF2Matrix {
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); m.cols()];
    for i in 0..m.rows() {
        for (j, v) in m.row_entries(i) {
            if v % 2u32 != BigInt::from(0) {
                cols[*j as usize].push(i as u32);
            }
        }
    }
    let mut s = SparseF2Matrix::with_capacity(m.rows(), m.cols());
    for c in cols {
        s.push_column(c);
    }
    s
}

enum MapData {
    Smith(SmithForm),
    Rank(usize),
}

impl MapData {
    fn rank(&self) -> usize {
        match self {
            MapData::Smith(s) => s.rank(),
            MapData::Rank(r) => *r,
        }
    }
}

/// Homology at every bidegree `(p, q)` accepted by `filter`.
pub fn koszul_homology_where<F>(
    n: usize,
    coefficients: Coefficients,
    filter: F,
) -> Result<KoszulTable>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    if coefficients == Coefficients::Integers && n > INTEGER_MAX_N {
        return Err(Error::BudgetExceeded {
            what: format!("integral Koszul homology for n={n}"),
            needed: n as u64,
            budget: INTEGER_MAX_N as u64,
        });
    }
    let k = NilpotentKoszul::new(n)?;
    let m = k.pair_count();
    let bidegrees: Vec<(usize, usize)> = (0..=m)
        .flat_map(|q| (0..=n).map(move |p| (p, q)))
        .filter(|&(p, q)| filter(p, q))
        .collect();
    // maps d_{p,q} needed: outgoing from each bidegree and incoming into it
    let mut needed: Vec<(usize, usize)> = Vec::new();
    for &(p, q) in &bidegrees {
        if q >= 1 && p + 2 <= n {
            needed.push((p, q));
        }
        if p >= 2 && q < m {
            needed.push((p - 2, q + 1));
        }
    }
    needed.sort_unstable();
    needed.dedup();
    let maps: HashMap<(usize, usize), MapData> = needed
        .par_iter()
        .map(|&(p, q)| {
            let d = k.differential(p, q);
            let data = match coefficients {
                Coefficients::Integers => MapData::Smith(snf(&d)),
                Coefficients::Rationals => MapData::Rank(rank_mod_p(&d, LARGE_PRIME)),
                Coefficients::F2 => MapData::Rank(rank_f2_auto(&to_sparse_f2(&d))),
            };
            ((p, q), data)
        })
        .collect();
    let entries = bidegrees
        .into_iter()
        .map(|(p, q)| {
            let out_rank = maps.get(&(p, q)).map_or(0, MapData::rank);
            let incoming = if p >= 2 {
                maps.get(&(p - 2, q + 1))
            } else {
                None
            };
            let in_rank = incoming.map_or(0, MapData::rank);
            let torsion = match incoming {
                Some(MapData::Smith(s)) => s.torsion(),
                _ => Vec::new(),
            };
            BidegreeHomology {
                p,
                q,
                free_rank: k.dim(p, q) - in_rank - out_rank,
                torsion,
            }
        })
        .collect();
    Ok(KoszulTable {
        n,
        coefficients,
        entries,
    })
}

pub fn koszul_homology(n: usize, coefficients: Coefficients) -> Result<KoszulTable> {
    koszul_homology_where(n, coefficients, |_, _| true)
}

/// Dimensions of `Tor_q` by internal degree, and the series they assemble to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorTable {
    /// `dims[q][d]` for internal degree `d ≤ cutoff + r`.
    pub dims: Vec<Vec<u64>>,
    /// `Σ_{d - q = i} dims[q][d]` for `i ≤ cutoff`.
    pub total: Vec<u64>,
    pub cutoff: usize,
}

struct TorComplex<'a> {
    kinv: &'a KInvariantSet,
    exterior: Vec<(Vec<u64>, HashMap<u64, usize>)>,
    monomials: Vec<MonomialBasis>,
}

impl<'a> TorComplex<'a> {
    fn dim(&self, q: usize, e: usize) -> usize {
        self.exterior[q].0.len() * self.monomials[e].len()
    }

    /// `d : Λ^q ⊗ F₂[x]_e → Λ^{q-1} ⊗ F₂[x]_{e+2}`.
    fn differential(&self, q: usize, e: usize) -> SparseF2Matrix {
        let target = &self.monomials[e + 2];
        let mut m = SparseF2Matrix::with_capacity(self.dim(q - 1, e + 2), self.dim(q, e));
        let forms = self.kinv.forms();
        for &set in &self.exterior[q].0 {
            for mono in self.monomials[e].monomials() {
                let mut col = Vec::new();
                let mut rest = set;
                while rest != 0 {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let base = self.exterior[q - 1].1[&(set & !(1 << t))] * target.len();
                    for term in monomial_times_quadric(mono, &forms[t]) {
                        col.push((base + target.index_of(&term).unwrap()) as u32);
                    }
                }
                m.push_column(col);
            }
        }
        m
    }
}

/// `Tor` of `F₂[x]` over the polynomial ring on the k-invariants; a class of
/// `Tor_q` in internal degree `d` is placed in degree `d - q`.
pub fn tor_dims(kinv: &KInvariantSet, cutoff: usize) -> TorTable {
    let r = kinv.r();
    let max_d = cutoff + r;
    let exterior = (0..=r).map(|q| indexed(subsets(r, q))).collect();
    let monomials = (0..=max_d + 2)
        .map(|e| MonomialBasis::new(kinv.n(), e))
        .collect();
    let cx = TorComplex {
        kinv,
        exterior,
        monomials,
    };
    // ranks of d out of (q, e), internal degree 2q + e
    let keys: Vec<(usize, usize)> = (1..=r)
        .flat_map(|q| (0..=max_d.saturating_sub(2 * q) + 2).map(move |e| (q, e)))
        .filter(|&(q, e)| 2 * q + e <= max_d + 2)
        .collect();
    let ranks: HashMap<(usize, usize), usize> = keys
        .par_iter()
        .map(|&(q, e)| ((q, e), rank_f2_auto(&cx.differential(q, e))))
        .collect();
    let mut dims = vec![vec![0u64; max_d + 1]; r + 1];
    for (q, row) in dims.iter_mut().enumerate() {
        for (d, slot) in row.iter_mut().enumerate() {
            if d < 2 * q {
                continue;
            }
            let e = d - 2 * q;
            let out = if q >= 1 { ranks[&(q, e)] } else { 0 };
            let inc = if q < r && e >= 2 {
                ranks[&(q + 1, e - 2)]
            } else {
                0
            };
            *slot = (cx.dim(q, e) - out - inc) as u64;
        }
    }
    let mut total = vec![0u64; cutoff + 1];
    for (q, row) in dims.iter().enumerate() {
        for (d, &v) in row.iter().enumerate() {
            if d >= q && d - q <= cutoff {
                total[d - q] += v;
            }
        }
    }
    TorTable {
        dims,
        total,
        cutoff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::graded_dims;

    #[test]
    fn subsets_in_colex_order() {
        assert_eq!(
            subsets(4, 2),
            vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
        );
        assert_eq!(subsets(3, 0), vec![0]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn complex_dims_and_square() {
        for n in 2..=4 {
            let k = NilpotentKoszul::new(n).unwrap();
            assert!(k.check_d_squared(), "n={n}");
            assert_eq!(
                k.dim(1, 2),
                n * (n * (n - 1) / 2) * (n * (n - 1) / 2 - 1) / 2
            );
        }
    }

    #[test]
    fn n2_and_n3() {
        let t = koszul_homology(2, Coefficients::Integers).unwrap();
        assert_eq!(t.total_degree_dims(), vec![1, 2, 2, 1]);
        let t = koszul_homology(3, Coefficients::Integers).unwrap();
        assert_eq!(t.total_degree_dims(), vec![1, 3, 8, 12, 8, 3, 1]);
        assert!(t.two_torsion_at().is_empty());
        for c in [Coefficients::Rationals, Coefficients::F2] {
            assert_eq!(
                koszul_homology(3, c).unwrap().total_degree_dims(),
                vec![1, 3, 8, 12, 8, 3, 1]
            );
        }
    }

    #[test]
    fn csv_header() {
        let t = koszul_homology(2, Coefficients::Integers).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("p,q,free_rank,torsion\n0,0,1,\n"));
    }

    #[test]
    fn budget() {
        assert!(matches!(
            koszul_homology(6, Coefficients::Integers),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn tor_zero_row_is_milnor() {
        let q2 = KInvariantSet::parse(3, &["x2*x2", "x3*x3", "x1*x2", "x1*x3", "x1*x1 + x2*x3"])
            .unwrap();
        let t = tor_dims(&q2, 6);
        let milnor = graded_dims(&q2, t.dims[0].len() - 1);
        assert_eq!(
            t.dims[0],
            milnor.iter().map(|&d| d as u64).collect::<Vec<_>>()
        );
        assert_eq!(t.dims[1][3], 5);
        assert_eq!(t.total, vec![1, 3, 6, 6, 3, 1, 0]);
    }

    #[test]
    fn tor_universal_and_pythagorean() {
        let w2 = KInvariantSet::parse(2, &["x1*x1", "x2*x2", "x1*x2"]).unwrap();
        assert_eq!(tor_dims(&w2, 5).total, vec![1, 2, 2, 1, 0, 0]);
        let t3 = KInvariantSet::parse(3, &["x1*x2", "x1*x3", "x2*x3"]).unwrap();
        assert_eq!(tor_dims(&t3, 8).total, vec![1, 3, 5, 6, 6, 6, 6, 6, 6]);
    }
}
