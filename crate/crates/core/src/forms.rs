//! Linear and quadratic forms over F₂ in `n` variables.
//!
//! Points of F₂ⁿ and linear forms are `u64` masks with bit `i` standing for the
//! variable `x_{i+1}`. Quadrics live in the polynomial ring, so `x_i²` is kept
//! distinct from `x_i`; evaluation uses `a_i² = a_i`.
//!
//! Coefficient vectors of quadrics follow the lexicographic monomial order
//! `x1x1, x1x2, …, x1xn, x2x2, …, xnxn`. Whenever forms have to be ordered
//! deterministically they are compared as binary numbers whose least
//! significant digit is the first coordinate (`x1` for linear forms, `x1x1`
//! for quadrics).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::BitMatrix;

pub const MAX_VARS: usize = 64;
pub const FACTOR_MAX_VARS: usize = 16;
pub const PRODUCT_BASIS_MAX_VARS: usize = 12;

#[inline]
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Number of quadratic monomials in `n` variables.
pub fn quadric_space_dim(n: usize) -> usize {
    n + n * n.saturating_sub(1) / 2
}

/// Position of `x_i x_j` (0-based, `i ≤ j`) in the lexicographic monomial order.
pub fn monomial_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    n: usize,
    coeffs: u64,
}

impl LinearForm {
    pub fn new(n: usize, coeffs: u64) -> Self {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables");
        assert_eq!(
            coeffs & !low_mask(n),
            0,
            "coefficient outside {n} variables"
        );
        Self { n, coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, 0)
    }

    /// The coordinate form `x_{i+1}`.
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n);
        Self::new(n, 1 << i)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> u64 {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == 0
    }

    #[inline]
    pub fn evaluate(&self, a: u64) -> bool {
        parity(self.coeffs & a)
    }

    /// Same form viewed in `m ≥ n` variables.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n);
        Self::new(m, self.coeffs)
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty linear form".into()));
        }
        let mut coeffs = 0u64;
        if compact == "0" {
            return Ok(Self::zero(n));
        }
        for term in compact.split('+') {
            let i = parse_var(term, n)?;
            coeffs ^= 1 << i;
        }
        Ok(Self::new(n, coeffs))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs == 0 {
            return write!(f, "0");
        }
        let terms: Vec<String> = (0..self.n)
            .filter(|&i| self.coeffs >> i & 1 == 1)
            .map(|i| format!("x{}", i + 1))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn parse_var(term: &str, n: usize) -> Result<usize> {
    let idx = term
        .strip_prefix('x')
        .ok_or_else(|| Error::Parse(format!("expected variable, got `{term}`")))?;
    let k: usize = idx
        .parse()
        .map_err(|_| Error::Parse(format!("bad variable index in `{term}`")))?;
    if k == 0 || k > n {
        return Err(Error::Parse(format!("variable x{k} outside 1..={n}")));
    }
    Ok(k - 1)
}

/// A quadratic form `Σ diag_i x_i² + Σ_{i<j} c_ij x_i x_j`.
///
/// `upper[i]` holds the mask of `j > i` with `c_ij = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    n: usize,
    diag: u64,
    upper: Vec<u64>,
}

impl QuadraticForm {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables");
        Self {
            n,
            diag: 0,
            upper: vec![0; n],
        }
    }

    /// The monomial `x_{i+1} x_{j+1}` (0-based indices, any order).
    pub fn monomial(n: usize, i: usize, j: usize) -> Self {
        let mut q = Self::zero(n);
        q.toggle(i, j);
        q
    }

    pub fn product(u: &LinearForm, v: &LinearForm) -> Self {
        assert_eq!(u.n, v.n);
        let n = u.n;
        let mut q = Self::zero(n);
        for i in 0..n {
            if u.coeffs >> i & 1 == 0 {
                continue;
            }
            for j in 0..n {
                if v.coeffs >> j & 1 == 1 {
                    q.toggle(i, j);
                }
            }
        }
        q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diag(&self) -> u64 {
        self.diag
    }

    pub fn upper(&self) -> &[u64] {
        &self.upper
    }

    /// Coefficient of `x_i x_j` (0-based).
    pub fn coeff(&self, i: usize, j: usize) -> bool {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == j {
            self.diag >> i & 1 == 1
        } else {
            self.upper[i] >> j & 1 == 1
        }
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n);
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == j {
            self.diag ^= 1 << i;
        } else {
            self.upper[i] ^= 1 << j;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.diag == 0 && self.upper.iter().all(|&w| w == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            diag: self.diag ^ other.diag,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Value at `a ∈ F₂ⁿ` (the squaring obstruction `Q(a)`).
    #[inline]
    pub fn evaluate(&self, a: u64) -> bool {
        let mut acc = parity(self.diag & a);
        let mut bits = a;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= parity(self.upper[i] & a);
            bits &= bits - 1;
        }
        acc
    }

    /// Associated bilinear form `B(a,b) = Σ_{i<j} c_ij (a_i b_j + a_j b_i)`.
    #[inline]
    pub fn polarize(&self, a: u64, b: u64) -> bool {
        self.cocycle(a, b) ^ self.cocycle(b, a)
    }

    /// Upper-triangular cocycle `Σ diag_i a_i b_i + Σ_{i<j} c_ij a_i b_j`.
    #[inline]
    pub fn cocycle(&self, a: u64, b: u64) -> bool {
        let mut acc = parity(self.diag & a & b);
        let mut bits = a;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= parity(self.upper[i] & b);
            bits &= bits - 1;
        }
        acc
    }

    /// Coefficient vector in the lexicographic monomial order.
    pub fn coefficient_vector(&self) -> Vec<bool> {
        let n = self.n;
        let mut v = Vec::with_capacity(quadric_space_dim(n));
        for i in 0..n {
            for j in i..n {
                v.push(self.coeff(i, j));
            }
        }
        v
    }

    pub fn from_coefficient_vector(n: usize, v: &[bool]) -> Self {
        assert_eq!(v.len(), quadric_space_dim(n));
        let mut q = Self::zero(n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                if v[k] {
                    q.toggle(i, j);
                }
                k += 1;
            }
        }
        q
    }

    pub fn weight(&self) -> u32 {
        self.diag.count_ones() + self.upper.iter().map(|w| w.count_ones()).sum::<u32>()
    }

    /// Same form in `m ≥ n` variables.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n);
        let mut q = Self::zero(m);
        q.diag = self.diag;
        q.upper[..self.n].copy_from_slice(&self.upper);
        q
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty quadratic form".into()));
        }
        let mut q = Self::zero(n);
        if compact == "0" {
            return Ok(q);
        }
        for term in compact.split('+') {
            let (i, j) = if let Some((a, b)) = term.split_once('*') {
                (parse_var(a, n)?, parse_var(b, n)?)
            } else if let Some(a) = term.strip_suffix("^2") {
                let i = parse_var(a, n)?;
                (i, i)
            } else {
                return Err(Error::Parse(format!(
                    "`{term}` is not a quadratic monomial"
                )));
            };
            q.toggle(i, j);
        }
        Ok(q)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                if self.coeff(i, j) {
                    terms.push(format!("x{}*x{}", i + 1, j + 1));
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Ordering of coefficient vectors as binary numbers, first coordinate least significant.
fn coefficient_order(a: &[bool], b: &[bool]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Factors `q = u·v` into linear forms, `u ≤ v`.
///
/// Once `u` is fixed, with lowest variable `x_i`, the product coefficients force
/// `v_i = diag_i` and `v_k = c_ik + u_k v_i`, so only `u` is enumerated.
pub fn factor_quadric(q: &QuadraticForm) -> Result<Option<(LinearForm, LinearForm)>> {
    let n = q.n;
    if n > FACTOR_MAX_VARS {
        return Err(Error::InputTooLarge {
            what: format!("factor_quadric with {n} variables"),
            limit: FACTOR_MAX_VARS,
        });
    }
    if q.is_zero() {
        return Ok(Some((LinearForm::zero(n), LinearForm::zero(n))));
    }
    for u in 1u64..(1u64 << n) {
        let i = u.trailing_zeros() as usize;
        let vi = q.diag >> i & 1;
        let mut v = vi << i;
        for k in 0..n {
            if k == i {
                continue;
            }
            let cik = q.coeff(i, k) as u64;
            let uk = u >> k & 1;
            v |= (cik ^ (uk & vi)) << k;
        }
        let (lu, lv) = (LinearForm::new(n, u), LinearForm::new(n, v));
        if v != 0 && QuadraticForm::product(&lu, &lv) == *q {
            return Ok(Some(if u <= v { (lu, lv) } else { (lv, lu) }));
        }
    }
    Ok(None)
}

/// An ordered, linearly independent list of quadrics: the k-invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KInvariantSet {
    n: usize,
    forms: Vec<QuadraticForm>,
}

impl KInvariantSet {
    pub fn new(n: usize, forms: Vec<QuadraticForm>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::InvalidInput(format!(
                "variable count {n} out of range"
            )));
        }
        if let Some(q) = forms.iter().find(|q| q.n != n) {
            return Err(Error::InvalidInput(format!(
                "form `{q}` has {} variables, expected {n}",
                q.n
            )));
        }
        if forms.len() > quadric_space_dim(n) {
            return Err(Error::DependentForms);
        }
        let set = Self { n, forms };
        if set.coefficient_matrix().rank() != set.forms.len() {
            return Err(Error::DependentForms);
        }
        Ok(set)
    }

    pub fn parse(n: usize, texts: &[&str]) -> Result<Self> {
        let forms = texts
            .iter()
            .map(|t| QuadraticForm::parse(t, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, forms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of k-invariants (rank of the Frattini subgroup).
    pub fn r(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QuadraticForm] {
        &self.forms
    }

    pub fn coefficient_matrix(&self) -> BitMatrix {
        let rows: Vec<Vec<bool>> = self.forms.iter().map(|q| q.coefficient_vector()).collect();
        BitMatrix::from_bool_rows(quadric_space_dim(self.n), &rows)
    }

    /// Whether both sets span the same subspace of quadrics.
    pub fn same_span(&self, other: &Self) -> bool {
        if self.n != other.n || self.r() != other.r() {
            return false;
        }
        let a = self.coefficient_matrix();
        let b = other.coefficient_matrix();
        a.vstack(&b).rank() == a.rank()
    }

    /// Vector of values `(κ_t(a))_t` packed into a mask.
    #[inline]
    pub fn square_map(&self, a: u64) -> u64 {
        self.forms
            .iter()
            .enumerate()
            .fold(0u64, |acc, (t, q)| acc | (q.evaluate(a) as u64) << t)
    }

    /// Nonzero points where every k-invariant vanishes.
    pub fn common_zeros(&self) -> Vec<u64> {
        (1u64..(1u64 << self.n))
            .filter(|&a| self.forms.iter().all(|q| !q.evaluate(a)))
            .collect()
    }

    pub fn has_nonzero_common_zero(&self) -> bool {
        (1u64..(1u64 << self.n)).any(|a| self.forms.iter().all(|q| !q.evaluate(a)))
    }

    /// Same forms in `m ≥ n` variables.
    pub fn embed(&self, m: usize) -> Self {
        Self {
            n: m,
            forms: self.forms.iter().map(|q| q.embed(m)).collect(),
        }
    }
}

impl fmt::Display for KInvariantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|q| q.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A spanning set in which every member is a product of two linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductBasis {
    pub set: KInvariantSet,
    pub factors: Vec<(LinearForm, LinearForm)>,
}

/// Replaces non-factorable k-invariants with factorable span elements.
///
/// Factorable originals are kept in their order; the remaining slots are
/// filled from the span by increasing weight, ties broken by coefficient order.
/// Greedy selection is exact here: independent factorable elements form a
/// matroid, so it reaches full rank whenever any factorable basis exists.
pub fn product_basis(s: &KInvariantSet) -> Result<ProductBasis> {
    let n = s.n;
    let r = s.r();
    if n > PRODUCT_BASIS_MAX_VARS {
        return Err(Error::InputTooLarge {
            what: format!("product_basis with {n} variables"),
            limit: PRODUCT_BASIS_MAX_VARS,
        });
    }
    if r > 24 {
        return Err(Error::InputTooLarge {
            what: format!("product_basis span of {r} forms"),
            limit: 24,
        });
    }
    let dim = quadric_space_dim(n);
    let mut chosen = BitMatrix::zeros(0, dim);
    let mut forms = Vec::with_capacity(r);
    let mut factors = Vec::with_capacity(r);

    let try_add = |q: &QuadraticForm,
                   chosen: &mut BitMatrix,
                   forms: &mut Vec<QuadraticForm>,
                   factors: &mut Vec<(LinearForm, LinearForm)>|
     -> Result<bool> {
        if q.is_zero() {
            return Ok(false);
        }
        let Some(pair) = factor_quadric(q)? else {
            return Ok(false);
        };
        let row = BitMatrix::from_bool_rows(dim, &[q.coefficient_vector()]);
        let stacked = chosen.vstack(&row);
        if stacked.rank() > chosen.rows() {
            *chosen = stacked;
            forms.push(q.clone());
            factors.push(pair);
            Ok(true)
        } else {
            Ok(false)
        }
    };

    for q in &s.forms {
        try_add(q, &mut chosen, &mut forms, &mut factors)?;
    }
    if forms.len() < r {
        let mut span: Vec<QuadraticForm> = (1u64..(1u64 << r))
            .map(|mask| {
                s.forms
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| mask >> t & 1 == 1)
                    .fold(QuadraticForm::zero(n), |acc, (_, q)| acc.add(q))
            })
            .collect();
        span.sort_by(|a, b| {
            a.weight()
                .cmp(&b.weight())
                .then_with(|| coefficient_order(&a.coefficient_vector(), &b.coefficient_vector()))
        });
        for q in &span {
            if forms.len() == r {
                break;
            }
            try_add(q, &mut chosen, &mut forms, &mut factors)?;
        }
    }
    if forms.len() < r {
        return Err(Error::NoProductBasis);
    }
    Ok(ProductBasis {
        set: KInvariantSet::new(n, forms)?,
        factors,
    })
}
