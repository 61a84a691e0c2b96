//! W-groups as explicit central extensions `1 → (ℤ/2)^r → G → (ℤ/2)^n → 1`.
//!
//! Elements are pairs `(a, b)` with `a ∈ F₂ⁿ` and `b ∈ F₂^r`, one `b`-slot per
//! k-invariant in the order of the defining set. The group law uses the
//! upper-triangular cocycle of each k-invariant:
//!
//! `(a,b)·(a',b') = (a+a', b+b'+F(a,a'))`, `F_t(a,a') = Σ d_i a_i a'_i + Σ_{i<j} c_ij a_i a'_j`.
//!
//! Then `(a,b)² = (0, Q(a))` and commutators are `(0, B(a,a'))`, where `Q_t`
//! is the value of the t-th quadric and `B_t` its polarization.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::forms::KInvariantSet;

pub const MAX_FRATTINI_RANK: usize = 64;
pub const SUBGROUP_SCAN_MAX_VARS: usize = 10;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct WGroup {
    id: u64,
    kinv: KInvariantSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WElement {
    group: u64,
    pub a: u64,
    pub b: u64,
}

/// A maximal elementary abelian subgroup `⟨A, Φ⟩` described by its image `A ⊂ F₂ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryAbelianSubgroup {
    pub rank: usize,
    /// Elements of `A`, i.e. representatives of the Φ-cosets it contains, sorted.
    pub cosets: Vec<u64>,
}

impl WGroup {
    pub fn new(kinv: KInvariantSet) -> Result<Self> {
        if kinv.r() > MAX_FRATTINI_RANK {
            return Err(Error::InputTooLarge {
                what: format!("Frattini rank {}", kinv.r()),
                limit: MAX_FRATTINI_RANK,
            });
        }
        Ok(Self {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            kinv,
        })
    }

    pub fn kinvariants(&self) -> &KInvariantSet {
        &self.kinv
    }

    pub fn n(&self) -> usize {
        self.kinv.n()
    }

    pub fn r(&self) -> usize {
        self.kinv.r()
    }

    /// `log₂ |G| = n + r`.
    pub fn order_log2(&self) -> usize {
        self.n() + self.r()
    }

    pub fn order(&self) -> Option<u128> {
        1u128.checked_shl(self.order_log2() as u32)
    }

    /// Two W-groups define the same extension iff their k-invariants span the same subspace.
    pub fn same_extension(&self, other: &Self) -> bool {
        self.kinv.same_span(&other.kinv)
    }

    pub fn element(&self, a: u64, b: u64) -> Result<WElement> {
        let n = self.n();
        let r = self.r();
        if (n < 64 && a >> n != 0) || (r < 64 && b >> r != 0) {
            return Err(Error::InvalidInput(format!(
                "element ({a:#b}, {b:#b}) outside group with n={n}, r={r}"
            )));
        }
        Ok(WElement {
            group: self.id,
            a,
            b,
        })
    }

    pub fn identity(&self) -> WElement {
        WElement {
            group: self.id,
            a: 0,
            b: 0,
        }
    }

    /// Lift of the basis vector `e_{i+1}` with zero Frattini coordinate.
    pub fn generator(&self, i: usize) -> WElement {
        assert!(i < self.n());
        WElement {
            group: self.id,
            a: 1 << i,
            b: 0,
        }
    }

    fn check(&self, g: &WElement) -> Result<()> {
        if g.group != self.id {
            Err(Error::MixedGroups)
        } else {
            Ok(())
        }
    }

    fn cocycle(&self, a: u64, a2: u64) -> u64 {
        self.kinv
            .forms()
            .iter()
            .enumerate()
            .fold(0, |acc, (t, q)| acc | (q.cocycle(a, a2) as u64) << t)
    }

    /// Values `(B_t(a, a'))_t` packed into a mask.
    pub fn commutator_pairing(&self, a: u64, a2: u64) -> u64 {
        self.kinv
            .forms()
            .iter()
            .enumerate()
            .fold(0, |acc, (t, q)| acc | (q.polarize(a, a2) as u64) << t)
    }

    /// Values `(Q_t(a))_t` packed into a mask.
    pub fn square_map(&self, a: u64) -> u64 {
        self.kinv.square_map(a)
    }

    pub fn multiply(&self, g: &WElement, h: &WElement) -> Result<WElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(WElement {
            group: self.id,
            a: g.a ^ h.a,
            b: g.b ^ h.b ^ self.cocycle(g.a, h.a),
        })
    }

    pub fn inverse(&self, g: &WElement) -> Result<WElement> {
        self.check(g)?;
        Ok(WElement {
            group: self.id,
            a: g.a,
            b: g.b ^ self.square_map(g.a),
        })
    }

    pub fn power(&self, g: &WElement, k: u32) -> Result<WElement> {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.multiply(&acc, g)?;
        }
        Ok(acc)
    }

    /// `g h g⁻¹ h⁻¹`.
    pub fn commutator(&self, g: &WElement, h: &WElement) -> Result<WElement> {
        let gh = self.multiply(g, h)?;
        let x = self.multiply(&gh, &self.inverse(g)?)?;
        self.multiply(&x, &self.inverse(h)?)
    }

    /// Every element, `a` major; only for small groups.
    pub fn elements(&self) -> Result<Vec<WElement>> {
        let bits = self.order_log2();
        if bits > 20 {
            return Err(Error::InputTooLarge {
                what: format!("listing 2^{bits} elements"),
                limit: 20,
            });
        }
        let mut out = Vec::with_capacity(1 << bits);
        for a in 0..1u64 << self.n() {
            for b in 0..1u64 << self.r() {
                out.push(WElement {
                    group: self.id,
                    a,
                    b,
                });
            }
        }
        Ok(out)
    }

    /// Nonzero `a` whose lifts are involutions (`Q(a) = 0` in every slot).
    pub fn singular_cosets(&self) -> Vec<u64> {
        self.kinv.common_zeros()
    }

    /// Every element of order 2 is central.
    pub fn is_2c(&self) -> bool {
        let n = self.n();
        self.singular_cosets()
            .into_iter()
            .all(|a| (0..n).all(|i| self.commutator_pairing(a, 1 << i) == 0))
    }

    /// Some involution lies outside Φ.
    pub fn is_formally_real(&self) -> Result<bool> {
        if self.order_log2() <= 1 {
            return Err(Error::GroupTooSmall);
        }
        Ok(self.kinv.has_nonzero_common_zero())
    }

    /// Number of nontrivial Φ-cosets carrying involutions.
    pub fn count_orderings(&self) -> usize {
        self.singular_cosets().len()
    }

    /// Maximal elementary abelian subgroups containing Φ.
    ///
    /// These are the preimages of maximal subspaces `A ⊂ F₂ⁿ` on which every `Q_t`
    /// vanishes; `B_t` then vanishes on `A` as well, so the lifts commute.
    pub fn maximal_elementary_abelian(&self) -> Result<Vec<ElementaryAbelianSubgroup>> {
        let n = self.n();
        if n > SUBGROUP_SCAN_MAX_VARS {
            return Err(Error::InputTooLarge {
                what: format!("subgroup scan with n={n}"),
                limit: SUBGROUP_SCAN_MAX_VARS,
            });
        }
        let singular = self.singular_cosets();
        let mut maximal: Vec<Vec<u64>> = Vec::new();
        let mut level: HashSet<Vec<u64>> = HashSet::from([vec![0u64]]);
        while !level.is_empty() {
            let mut next = HashSet::new();
            for space in &level {
                let mut extended = false;
                for &s in &singular {
                    if space.binary_search(&s).is_ok() {
                        continue;
                    }
                    if space.iter().any(|&x| self.commutator_pairing(s, x) != 0) {
                        continue;
                    }
                    extended = true;
                    let mut bigger: Vec<u64> = space.iter().flat_map(|&x| [x, x ^ s]).collect();
                    bigger.sort_unstable();
                    next.insert(bigger);
                }
                if !extended {
                    maximal.push(space.clone());
                }
            }
            level = next;
        }
        maximal.sort();
        let r = self.r();
        Ok(maximal
            .into_iter()
            .map(|cosets| ElementaryAbelianSubgroup {
                rank: r + cosets.len().trailing_zeros() as usize,
                cosets,
            })
            .collect())
    }
}
