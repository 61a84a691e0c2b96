//! Equivariant cellular chains on the torus model and the cohomology of its
//! quotient and Borel construction, all over F₂.
//!
//! Each circle has the 8-cell structure with vertices `i^k` and arcs from
//! `i^k` to `i^{k+1}`, which every symbol `z, -z, z̄, -z̄` permutes. A cell of
//! `(S¹)^r` packs three bits per coordinate: bit 2 marks an arc, bits 0–1 give
//! its position. Boundaries follow the Leibniz rule without signs.
//!
//! For the Borel construction we first divide by a subgroup `K` that acts
//! freely (`X ×_G EG ≃ (X/K) ×_{G/K} E(G/K)`), then resolve over the remaining
//! elementary abelian quotient `Q` with the tensor product of periodic
//! resolutions. After untwisting `F₂Q ⊗ M ≅ F₂Q ⊗ M_triv`, the complex
//! `Hom_Q(R ⊗ C(Y), F₂)` has basis `(b, c)` for resolution multi-indices `b`
//! and cells `c` of `Y = X/K`, with
//!
//! `∂(b, c) = Σ_i [(b - e_i, c) + (b - e_i, s_i c)] + Σ_{c' ∈ ∂c} (b, c')`.

use std::collections::HashMap;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::{rank_f2_auto, SparseF2Matrix};
use crate::series::{one_plus_t_pow, PoincareSeries};
use crate::torus::{CircleSymbol, TorusModel};
use num_bigint::BigInt;

/// Largest torus dimension for which the full cell table is built (`8^r` cells).
pub const MAX_TORUS_DIM: usize = 8;
/// Quotient computations are limited to this torus dimension by default.
pub const QUOTIENT_MAX_DIM: usize = 7;
/// Default cap on the number of Borel cochains summed over all degrees.
pub const DEFAULT_BUDGET_CELLS: u64 = 8_000_000;
/// Group elements are tabulated, so `n` is bounded.
pub const MAX_GROUP_RANK: usize = 12;

const ARC: u8 = 4;

#[derive(Clone, Debug)]
pub struct EquivariantChainComplex {
    n: usize,
    r: usize,
    /// `maps[g][t][code]`: image of a cell code on coordinate `t` under `g`.
    maps: Vec<Vec<[u8; 8]>>,
}

fn code_table(s: CircleSymbol) -> [u8; 8] {
    let mut out = [0u8; 8];
    for k in 0..4u8 {
        out[k as usize] = s.act_on_vertex(k);
        out[(ARC | k) as usize] = ARC | s.act_on_arc(k);
    }
    out
}

impl EquivariantChainComplex {
    pub fn new(model: &TorusModel) -> Result<Self> {
        let (n, r) = (model.n(), model.r());
        if n > MAX_GROUP_RANK {
            return Err(Error::InputTooLarge {
                what: format!("equivariant complex with n={n}"),
                limit: MAX_GROUP_RANK,
            });
        }
        if r > MAX_TORUS_DIM {
            return Err(Error::InputTooLarge {
                what: format!("cell table for a {r}-torus"),
                limit: MAX_TORUS_DIM,
            });
        }
        let maps = (0..1u64 << n)
            .map(|g| model.symbols(g).into_iter().map(code_table).collect())
            .collect();
        Ok(Self { n, r, maps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cell_count(&self) -> u64 {
        1 << (3 * self.r)
    }

    pub fn dim(&self, cell: u64) -> usize {
        (0..self.r).filter(|t| cell >> (3 * t + 2) & 1 == 1).count()
    }

    /// Faces of a cell, each listed once (they are distinct).
    pub fn boundary(&self, cell: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for t in 0..self.r {
            let shift = 3 * t;
            let code = (cell >> shift & 7) as u8;
            if code & ARC != 0 {
                let k = code & 3;
                let clear = cell & !(7 << shift);
                out.push(clear | (k as u64) << shift);
                out.push(clear | (((k + 1) & 3) as u64) << shift);
            }
        }
        out
    }

    pub fn act(&self, g: u64, cell: u64) -> u64 {
        let maps = &self.maps[g as usize];
        let mut out = 0;
        for (t, m) in maps.iter().enumerate() {
            let shift = 3 * t;
            out |= (m[(cell >> shift & 7) as usize] as u64) << shift;
        }
        out
    }

    fn boundary_mod2(&self, cells: &[u64]) -> Vec<u64> {
        let mut all: Vec<u64> = cells.iter().flat_map(|&c| self.boundary(c)).collect();
        all.sort_unstable();
        let mut out: Vec<u64> = Vec::new();
        for c in all {
            if out.last() == Some(&c) {
                out.pop();
            } else {
                out.push(c);
            }
        }
        out
    }

    /// `∂∂ = 0` on every cell.
    pub fn check_boundary_squared(&self) -> bool {
        (0..self.cell_count())
            .into_par_iter()
            .all(|c| self.boundary_mod2(&self.boundary(c)).is_empty())
    }

    /// `g∂ = ∂g` for every element and cell, and the action is a group action.
    pub fn check_equivariance(&self) -> bool {
        let order = 1u64 << self.n;
        (0..self.cell_count()).into_par_iter().all(|c| {
            (0..order).all(|g| {
                let mut lhs: Vec<u64> = self.boundary(c).iter().map(|&f| self.act(g, f)).collect();
                let mut rhs = self.boundary(self.act(g, c));
                lhs.sort_unstable();
                rhs.sort_unstable();
                lhs == rhs && (0..order).all(|h| self.act(g, self.act(h, c)) == self.act(g ^ h, c))
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySeries {
    /// `dims[i]` for `0 ≤ i ≤ cutoff`.
    pub dims: Vec<u64>,
    pub cutoff: usize,
    /// Whether the group acted freely, so that the series is a polynomial of degree `≤ r`.
    pub free: bool,
    pub torus_dim: usize,
}

impl CohomologySeries {
    /// The common value of `dims[i]` for `r < i ≤ cutoff`, if there are at least two such degrees and they agree.
    pub fn eventual_constant(&self) -> Option<u64> {
        let tail = self.dims.get(self.torus_dim + 1..)?;
        if tail.len() >= 2 && tail.iter().all(|&d| d == tail[0]) {
            Some(tail[0])
        } else {
            None
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Cells of `Y = X/K`, with boundaries and the action of the chosen generators of `G/K`.
#[derive(Clone, Debug)]
struct OrbitCells {
    by_dim: Vec<Vec<u64>>,
    /// `(dim, position)` of the orbit containing each cell of `X`.
    orbit_of: Vec<(u8, u32)>,
}

impl OrbitCells {
    fn new(cx: &EquivariantChainComplex, subgroup: &[u64]) -> Self {
        let total = cx.cell_count() as usize;
        let mut orbit_of = vec![(u8::MAX, 0u32); total];
        let mut by_dim: Vec<Vec<u64>> = vec![Vec::new(); cx.r + 1];
        for c in 0..total as u64 {
            if orbit_of[c as usize].0 != u8::MAX {
                continue;
            }
            let d = cx.dim(c);
            let id = (d as u8, by_dim[d].len() as u32);
            by_dim[d].push(c);
            for &k in subgroup {
                orbit_of[cx.act(k, c) as usize] = id;
            }
        }
        Self { by_dim, orbit_of }
    }

    fn orbit(&self, cell: u64) -> (usize, usize) {
        let (d, p) = self.orbit_of[cell as usize];
        (d as usize, p as usize)
    }
}

fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64];
    for &b in basis {
        let ext: Vec<u64> = out.iter().map(|&x| x ^ b).collect();
        out.extend(ext);
    }
    out
}

/// Greedy maximal subgroup meeting none of `avoid`, returned as a basis.
fn free_subgroup(n: usize, avoid: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    let mut elems = vec![0u64];
    for g in 1u64..(1u64 << n) {
        if elems.contains(&g) {
            continue;
        }
        if elems.iter().any(|&x| avoid.contains(&(x ^ g))) {
            continue;
        }
        basis.push(g);
        elems = span(&basis);
    }
    basis
}

/// Standard basis vectors completing `basis` to a basis of F₂ⁿ.
fn complement(n: usize, basis: &[u64]) -> Vec<u64> {
    let mut cur = basis.to_vec();
    let mut out = Vec::new();
    for i in 0..n {
        let e = 1u64 << i;
        if !span(&cur).contains(&e) {
            cur.push(e);
            out.push(e);
        }
    }
    out
}

/// Multi-indices `b ∈ ℕ^parts` with `|b| = m`, lexicographic.
fn compositions(m: usize, parts: usize) -> Vec<Vec<u8>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() + 1 == parts {
            cur.push(left as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x as u8);
            rec(left - x, parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, parts, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Copy, Debug)]
pub struct BorelOptions {
    pub cutoff: usize,
    pub budget_cells: u64,
    /// Divide out a freely acting subgroup before resolving.
    pub reduce: bool,
}

impl BorelOptions {
    pub fn new(cutoff: usize) -> Self {
        Self {
            cutoff,
            budget_cells: DEFAULT_BUDGET_CELLS,
            reduce: true,
        }
    }
}

/// Default Borel cutoff `r + n + 4`.
pub fn default_cutoff(model: &TorusModel) -> usize {
    model.r() + model.n() + 4
}

/// Multi-indices of one total degree and their positions.
type Compositions = (Vec<Vec<u8>>, HashMap<Vec<u8>, usize>);

/// The untwisted cochain complex computing `H^*_G(X)` in degrees `≤ cutoff`.
#[derive(Clone, Debug)]
pub struct BorelComplex {
    cx: EquivariantChainComplex,
    cells: OrbitCells,
    /// Representatives in `G` of the generators `s_i` of `G/K`.
    quotient_gens: Vec<u64>,
    subgroup_rank: usize,
    compositions: Vec<Compositions>,
    cutoff: usize,
}

impl BorelComplex {
    pub fn new(model: &TorusModel, opts: BorelOptions) -> Result<Self> {
        let cx = EquivariantChainComplex::new(model)?;
        let n = cx.n;
        let k_basis = if opts.reduce {
            free_subgroup(n, &model.isotropy_elements())
        } else {
            Vec::new()
        };
        Self::with_subgroup(cx, &k_basis, opts)
    }

    fn with_subgroup(
        cx: EquivariantChainComplex,
        k_basis: &[u64],
        opts: BorelOptions,
    ) -> Result<Self> {
        let n = cx.n;
        let r = cx.r;
        let q = n - k_basis.len();
        let per_dim = |j: usize| binomial(r as u64, j as u64) << (2 * r - k_basis.len().min(2 * r));
        let needed: u64 = (0..=opts.cutoff + 1)
            .map(|k| {
                (0..=k.min(r))
                    .map(|j| {
                        let m = (k - j) as u64;
                        let bs = if q == 0 {
                            (m == 0) as u64
                        } else {
                            binomial(m + q as u64 - 1, q as u64 - 1)
                        };
                        bs.saturating_mul(per_dim(j))
                    })
                    .sum::<u64>()
            })
            .sum();
        if needed > opts.budget_cells {
            return Err(Error::BudgetExceeded {
                what: format!("Borel cochains through degree {}", opts.cutoff + 1),
                needed,
                budget: opts.budget_cells,
            });
        }
        let subgroup = span(k_basis);
        let cells = OrbitCells::new(&cx, &subgroup);
        let quotient_gens = complement(n, k_basis);
        let compositions = (0..=opts.cutoff + 1)
            .map(|m| {
                let list = compositions(m, q);
                let index = list
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (b.clone(), i))
                    .collect();
                (list, index)
            })
            .collect();
        Ok(Self {
            cx,
            cells,
            quotient_gens,
            subgroup_rank: k_basis.len(),
            compositions,
            cutoff: opts.cutoff,
        })
    }

    pub fn subgroup_rank(&self) -> usize {
        self.subgroup_rank
    }

    pub fn quotient_rank(&self) -> usize {
        self.quotient_gens.len()
    }

    /// Number of cells of `Y` in each dimension.
    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.by_dim.iter().map(Vec::len).collect()
    }

    fn block_offset(&self, k: usize, j: usize) -> usize {
        (0..j)
            .filter(|&jj| jj <= k)
            .map(|jj| self.compositions[k - jj].0.len() * self.cells.by_dim[jj].len())
            .sum()
    }

    /// Cochain count in degree `k ≤ cutoff + 1`.
    pub fn chains(&self, k: usize) -> usize {
        (0..=k.min(self.cx.r))
            .map(|j| self.compositions[k - j].0.len() * self.cells.by_dim[j].len())
            .sum()
    }

    /// `∂_k : C_k → C_{k-1}` for `1 ≤ k ≤ cutoff + 1`.
    pub fn boundary_matrix(&self, k: usize) -> SparseF2Matrix {
        assert!(k >= 1 && k <= self.cutoff + 1);
        let rows = self.chains(k - 1);
        let mut m = SparseF2Matrix::with_capacity(rows, self.chains(k));
        let offsets_below: Vec<usize> = (0..=self.cx.r)
            .map(|j| self.block_offset(k - 1, j))
            .collect();
        for j in 0..=k.min(self.cx.r) {
            let (bs, _) = &self.compositions[k - j];
            for b in bs {
                for &cell in &self.cells.by_dim[j] {
                    let mut col: Vec<u32> = Vec::new();
                    if j < k {
                        let lower_index = &self.compositions[k - j - 1].1;
                        let width = self.cells.by_dim[j].len();
                        let mut b2 = b.clone();
                        for (i, &s) in self.quotient_gens.iter().enumerate() {
                            if b[i] == 0 {
                                continue;
                            }
                            b2[i] -= 1;
                            let bi = lower_index[&b2];
                            b2[i] += 1;
                            let base = offsets_below[j] + bi * width;
                            let (_, p) = self.cells.orbit(cell);
                            let (_, ps) = self.cells.orbit(self.cx.act(s, cell));
                            col.push((base + p) as u32);
                            col.push((base + ps) as u32);
                        }
                    }
                    if j >= 1 {
                        let (_, index) = &self.compositions[k - j];
                        let bi = index[b];
                        let width = self.cells.by_dim[j - 1].len();
                        let base = offsets_below[j - 1] + bi * width;
                        for face in self.cx.boundary(cell) {
                            let (_, p) = self.cells.orbit(face);
                            col.push((base + p) as u32);
                        }
                    }
                    m.push_column(col);
                }
            }
        }
        m
    }

    /// `dim H^k` for `0 ≤ k ≤ cutoff`.
    pub fn dims(&self) -> Vec<u64> {
        let ranks: Vec<usize> = (1..=self.cutoff + 1)
            .into_par_iter()
            .map(|k| rank_f2_auto(&self.boundary_matrix(k)))
            .collect();
        (0..=self.cutoff)
            .map(|k| {
                let incoming = if k == 0 { 0 } else { ranks[k - 1] };
                (self.chains(k) - incoming - ranks[k]) as u64
            })
            .collect()
    }

    /// Writes `∂_k` as a header line `rows cols nnz` followed by one `row col 1` line per entry.
    pub fn export_triplets<W: Write>(&self, k: usize, out: &mut W) -> io::Result<()> {
        let m = self.boundary_matrix(k);
        writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
        for (i, j) in m.triplets() {
            writeln!(out, "{i} {j} 1")?;
        }
        Ok(())
    }
}

/// Mod-2 Betti numbers of `X_F/Eₙ` for a free action.
pub fn quotient_cohomology(model: &TorusModel) -> Result<CohomologySeries> {
    quotient_cohomology_with_limit(model, QUOTIENT_MAX_DIM)
}

pub fn quotient_cohomology_with_limit(
    model: &TorusModel,
    max_dim: usize,
) -> Result<CohomologySeries> {
    if !model.is_free() {
        return Err(Error::NotFree);
    }
    let r = model.r();
    if r > max_dim.min(MAX_TORUS_DIM) {
        return Err(Error::BudgetExceeded {
            what: "quotient cells 8^r / 2^n".into(),
            needed: (1u64 << (3 * r)) >> model.n(),
            budget: (1u64 << (3 * max_dim.min(MAX_TORUS_DIM))) >> model.n(),
        });
    }
    let cx = EquivariantChainComplex::new(model)?;
    let all: Vec<u64> = (0..model.n()).map(|i| 1u64 << i).collect();
    let mut opts = BorelOptions::new(r);
    opts.budget_cells = u64::MAX;
    let bc = BorelComplex::with_subgroup(cx, &all, opts)?;
    Ok(CohomologySeries {
        dims: bc.dims(),
        cutoff: r,
        free: true,
        torus_dim: r,
    })
}

/// `dim H^i_{Eₙ}(X_F)` for `i ≤ cutoff`.
pub fn borel_cohomology(model: &TorusModel, cutoff: usize) -> Result<CohomologySeries> {
    borel_cohomology_with(model, BorelOptions::new(cutoff))
}

pub fn borel_cohomology_with(model: &TorusModel, opts: BorelOptions) -> Result<CohomologySeries> {
    let bc = BorelComplex::new(model, opts)?;
    Ok(CohomologySeries {
        dims: bc.dims(),
        cutoff: opts.cutoff,
        free: model.is_free(),
        torus_dim: model.r(),
    })
}

/// `n(1+t)^{C(n-1,2)} / (1-t)`.
pub fn singular_series_t(n: usize) -> PoincareSeries {
    assert!(n >= 2);
    let c = (n - 1) * (n - 2) / 2;
    let num: Vec<BigInt> = one_plus_t_pow(c).into_iter().map(|x| x * n).collect();
    PoincareSeries::new(num, &[(1, 1)])
}
