//! The torus model `X_F = (S¹)^r` with its `Eₙ = (ℤ/2)ⁿ`-action.
//!
//! Coordinate `t` carries the factor pair `(u_t, v_t)` of the t-th product-basis
//! element. An element `g ∈ F₂ⁿ` acts on that circle by the sign `(-1)^{u(g)}`,
//! composed with complex conjugation when `u(g) ≠ v(g)`. So `g` has no fixed
//! point on the circle exactly when `u(g) = v(g) = 1`, i.e. when it acts as `-z`.
//!
//! Swapping `u` and `v` on a coordinate exchanges `z̄` and `-z̄`; the resulting
//! models are equivariantly homeomorphic, and this module always uses the
//! factor order returned by [`product_basis`].

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{product_basis, KInvariantSet, LinearForm, QuadraticForm};
use crate::wgroup::WGroup;

pub const MODEL_MAX_VARS: usize = 20;

/// How one element acts on one circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircleSymbol {
    /// `z`
    Identity,
    /// `-z`
    Negate,
    /// `z̄`
    Conjugate,
    /// `-z̄`
    NegConjugate,
}

/// Fixed set of a circle symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedSet {
    Circle,
    PlusMinusOne,
    PlusMinusI,
    Empty,
}

impl CircleSymbol {
    pub fn from_flags(sign: bool, conj: bool) -> Self {
        match (sign, conj) {
            (false, false) => Self::Identity,
            (true, false) => Self::Negate,
            (false, true) => Self::Conjugate,
            (true, true) => Self::NegConjugate,
        }
    }

    pub fn sign(self) -> bool {
        matches!(self, Self::Negate | Self::NegConjugate)
    }

    pub fn conj(self) -> bool {
        matches!(self, Self::Conjugate | Self::NegConjugate)
    }

    /// Composition in the group `{±1} × ⟨conj⟩`, which is abelian here.
    pub fn compose(self, other: Self) -> Self {
        Self::from_flags(self.sign() ^ other.sign(), self.conj() ^ other.conj())
    }

    pub fn fixed_set(self) -> FixedSet {
        match self {
            Self::Identity => FixedSet::Circle,
            Self::Negate => FixedSet::Empty,
            Self::Conjugate => FixedSet::PlusMinusOne,
            Self::NegConjugate => FixedSet::PlusMinusI,
        }
    }

    /// Image of the point `i^k`.
    pub fn act_on_vertex(self, k: u8) -> u8 {
        match self {
            Self::Identity => k & 3,
            Self::Negate => (k + 2) & 3,
            Self::Conjugate => (4 - k) & 3,
            Self::NegConjugate => (6 - k) & 3,
        }
    }

    /// Image of the arc from `i^k` to `i^{k+1}`.
    pub fn act_on_arc(self, k: u8) -> u8 {
        match self {
            Self::Identity => k & 3,
            Self::Negate => (k + 2) & 3,
            Self::Conjugate => (7 - k) & 3,
            Self::NegConjugate => (5 - k) & 3,
        }
    }
}

impl fmt::Display for CircleSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Identity => "z",
            Self::Negate => "-z",
            Self::Conjugate => "z̄",
            Self::NegConjugate => "-z̄",
        })
    }
}

impl FixedSet {
    pub fn intersect(self, other: Self) -> Self {
        use FixedSet::*;
        match (self, other) {
            (Circle, x) | (x, Circle) => x,
            (Empty, _) | (_, Empty) => Empty,
            (a, b) if a == b => a,
            _ => Empty,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleAction {
    pub u: LinearForm,
    pub v: LinearForm,
}

impl CircleAction {
    pub fn new(u: LinearForm, v: LinearForm) -> Self {
        assert_eq!(u.n(), v.n());
        Self { u, v }
    }

    pub fn symbol(&self, g: u64) -> CircleSymbol {
        let (a, b) = (self.u.evaluate(g), self.v.evaluate(g));
        CircleSymbol::from_flags(a, a != b)
    }

    /// The quadric `u·v` this coordinate transgresses to.
    pub fn kinvariant(&self) -> QuadraticForm {
        QuadraticForm::product(&self.u, &self.v)
    }
}

/// Components of the fixed set of one isotropy element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularComponent {
    pub element: u64,
    pub symbols: Vec<CircleSymbol>,
    /// Number of connected components, `2^{point coordinates}`.
    pub components: u64,
    /// Dimension of each component, the number of circles fixed pointwise.
    pub dimension: usize,
}

#[derive(Clone, Debug)]
pub struct TorusModel {
    n: usize,
    coords: Vec<CircleAction>,
}

impl TorusModel {
    /// Model built from an explicit list of factor pairs.
    pub fn from_factors(n: usize, factors: Vec<(LinearForm, LinearForm)>) -> Result<Self> {
        if n == 0 || n > MODEL_MAX_VARS {
            return Err(Error::InputTooLarge {
                what: format!("torus model with n={n}"),
                limit: MODEL_MAX_VARS,
            });
        }
        if factors.len() > 64 {
            return Err(Error::InputTooLarge {
                what: format!("torus of dimension {}", factors.len()),
                limit: 64,
            });
        }
        if factors.iter().any(|(u, v)| u.n() != n || v.n() != n) {
            return Err(Error::InvalidInput(
                "factor in wrong number of variables".into(),
            ));
        }
        Ok(Self {
            n,
            coords: factors
                .into_iter()
                .map(|(u, v)| CircleAction::new(u, v))
                .collect(),
        })
    }

    /// Model of a k-invariant set, through its product basis.
    pub fn from_kinvariants(kinv: &KInvariantSet) -> Result<Self> {
        let pb = product_basis(kinv)?;
        Self::from_factors(kinv.n(), pb.factors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[CircleAction] {
        &self.coords
    }

    /// The quadrics `u_t·v_t`.
    pub fn kinvariants(&self) -> Result<KInvariantSet> {
        KInvariantSet::new(self.n, self.coords.iter().map(|c| c.kinvariant()).collect())
    }

    pub fn group(&self) -> Result<WGroup> {
        WGroup::new(self.kinvariants()?)
    }

    pub fn symbols(&self, g: u64) -> Vec<CircleSymbol> {
        self.coords.iter().map(|c| c.symbol(g)).collect()
    }

    /// Coordinates on which `g` acts as `-z`, as a mask.
    pub fn fixed_point_free_mask(&self, g: u64) -> u64 {
        self.coords.iter().enumerate().fold(0, |acc, (t, c)| {
            acc | ((c.u.evaluate(g) && c.v.evaluate(g)) as u64) << t
        })
    }

    fn nonzero_elements(&self) -> impl Iterator<Item = u64> {
        1u64..(1u64 << self.n)
    }

    pub fn is_free(&self) -> bool {
        self.nonzero_elements()
            .all(|g| self.fixed_point_free_mask(g) != 0)
    }

    /// Nonzero elements with a fixed point, in increasing order.
    pub fn isotropy_elements(&self) -> Vec<u64> {
        self.nonzero_elements()
            .filter(|&g| self.fixed_point_free_mask(g) == 0)
            .collect()
    }

    /// Whether every point stabilizer has order at most 2.
    pub fn stabilizer_cyclicity_check(&self) -> bool {
        let iso = self.isotropy_elements();
        let fixed: Vec<Vec<FixedSet>> = iso
            .iter()
            .map(|&g| {
                self.symbols(g)
                    .into_iter()
                    .map(CircleSymbol::fixed_set)
                    .collect()
            })
            .collect();
        for i in 0..fixed.len() {
            for j in i + 1..fixed.len() {
                let disjoint = fixed[i]
                    .iter()
                    .zip(&fixed[j])
                    .any(|(a, b)| a.intersect(*b) == FixedSet::Empty);
                if !disjoint {
                    return false;
                }
            }
        }
        true
    }

    pub fn singular_components(&self) -> Vec<SingularComponent> {
        self.isotropy_elements()
            .into_iter()
            .map(|g| {
                let symbols = self.symbols(g);
                let points = symbols
                    .iter()
                    .filter(|s| matches!(s, CircleSymbol::Conjugate | CircleSymbol::NegConjugate))
                    .count();
                let dimension = symbols
                    .iter()
                    .filter(|s| **s == CircleSymbol::Identity)
                    .count();
                SingularComponent {
                    element: g,
                    symbols,
                    components: 1u64 << points,
                    dimension,
                }
            })
            .collect()
    }

    /// Lexicographically first `n` coordinates on which the action is already free.
    pub fn free_direct_factor(&self) -> Result<Vec<usize>> {
        if !self.is_free() {
            return Err(Error::NotFree);
        }
        let masks: Vec<u64> = self
            .nonzero_elements()
            .map(|g| self.fixed_point_free_mask(g))
            .collect();
        let r = self.r();
        let mut chosen = Vec::with_capacity(self.n);
        if subset_search(&masks, r, self.n, 0, 0, &mut chosen) {
            Ok(chosen)
        } else {
            Err(Error::NoSubsetFound { n: self.n })
        }
    }
}

fn subset_search(
    masks: &[u64],
    r: usize,
    k: usize,
    start: usize,
    acc: u64,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == k {
        return masks.iter().all(|m| m & acc != 0);
    }
    let need = k - chosen.len();
    for t in start..=r.saturating_sub(need) {
        chosen.push(t);
        if subset_search(masks, r, k, t + 1, acc | 1 << t, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize, forms: &[&str]) -> TorusModel {
        TorusModel::from_kinvariants(&KInvariantSet::parse(n, forms).unwrap()).unwrap()
    }

    fn t3() -> TorusModel {
        model(3, &["x1*x2", "x1*x3", "x2*x3"])
    }

    #[test]
    fn symbols_compose_like_the_group() {
        let c = CircleAction::new(
            LinearForm::parse("x1", 2).unwrap(),
            LinearForm::parse("x1 + x2", 2).unwrap(),
        );
        for g in 0..4u64 {
            for h in 0..4u64 {
                assert_eq!(c.symbol(g ^ h), c.symbol(g).compose(c.symbol(h)));
            }
        }
    }

    #[test]
    fn cell_maps_are_involutions_matching_endpoints() {
        use CircleSymbol::*;
        for s in [Identity, Negate, Conjugate, NegConjugate] {
            for k in 0..4u8 {
                assert_eq!(s.act_on_vertex(s.act_on_vertex(k)), k);
                assert_eq!(s.act_on_arc(s.act_on_arc(k)), k);
                let ends = [s.act_on_vertex(k), s.act_on_vertex((k + 1) & 3)];
                let a = s.act_on_arc(k);
                let mut image = [a, (a + 1) & 3];
                image.sort();
                let mut e = ends;
                e.sort();
                assert_eq!(e, image);
            }
        }
        assert_eq!(Conjugate.act_on_vertex(0), 0);
        assert_eq!(Conjugate.act_on_vertex(2), 2);
        assert_eq!(NegConjugate.act_on_vertex(1), 1);
        assert_eq!(NegConjugate.act_on_vertex(3), 3);
    }

    #[test]
    fn pythagorean_three_isotropy() {
        let m = t3();
        assert!(!m.is_free());
        assert_eq!(m.isotropy_elements(), vec![1, 2, 4]);
        assert!(m.stabilizer_cyclicity_check());
        let comps = m.singular_components();
        assert_eq!(comps.len(), 3);
        for c in comps {
            assert_eq!((c.components, c.dimension), (4, 1));
        }
        assert_eq!(m.free_direct_factor(), Err(Error::NotFree));
    }

    #[test]
    fn universal_models_are_free() {
        let w2 = model(2, &["x1*x1", "x2*x2", "x1*x2"]);
        assert!(w2.is_free());
        assert!(w2.isotropy_elements().is_empty());
        assert_eq!(w2.free_direct_factor().unwrap(), vec![0, 1]);
        let w3 = model(3, &["x1*x1", "x2*x2", "x3*x3", "x1*x2", "x1*x3", "x2*x3"]);
        assert_eq!(w3.free_direct_factor().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn superpythagorean_two() {
        let m = model(2, &["x2*x2 + x1*x2"]);
        let c = &m.coords()[0];
        assert_eq!(c.symbol(0b01), CircleSymbol::Conjugate);
        assert_eq!(m.isotropy_elements(), vec![0b01, 0b11]);
        assert!(m.stabilizer_cyclicity_check());
        let comps = m.singular_components();
        assert_eq!((comps[0].components, comps[0].dimension), (2, 0));
    }

    #[test]
    fn q2_direct_factor() {
        let m = model(3, &["x2*x2", "x3*x3", "x1*x2", "x1*x3", "x1*x1 + x2*x3"]);
        assert!(m.is_free());
        assert!(m.singular_components().is_empty());
        let t = m.free_direct_factor().unwrap();
        assert_eq!(t.len(), 3);
        let picked: Vec<QuadraticForm> = t.iter().map(|&i| m.coords()[i].kinvariant()).collect();
        let sub = KInvariantSet::new(3, picked).unwrap();
        assert!(!sub.has_nonzero_common_zero());
    }

    #[test]
    fn transgression_recovers_kinvariants() {
        let m = t3();
        let k = m.kinvariants().unwrap();
        assert!(k.same_span(&KInvariantSet::parse(3, &["x1*x2", "x1*x3", "x2*x3"]).unwrap()));
    }
}
