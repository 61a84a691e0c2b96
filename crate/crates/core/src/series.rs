//! Exact Poincaré series: an integer numerator over a product of factors `(1 - t^m)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

/// Integer polynomial, lowest degree first.
pub type Polynomial = Vec<BigInt>;

pub fn poly<T: Into<BigInt> + Copy>(coeffs: &[T]) -> Polynomial {
    coeffs.iter().map(|&c| c.into()).collect()
}

fn trim(mut p: Polynomial) -> Polynomial {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Polynomial {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn poly_add(a: &[BigInt], b: &[BigInt]) -> Polynomial {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

/// `(1 + t)^k`.
pub fn one_plus_t_pow(k: usize) -> Polynomial {
    let mut p = poly(&[1]);
    for _ in 0..k {
        p = poly_mul(&p, &poly(&[1, 1]));
    }
    p
}

/// `(1 - t^m)^k`.
pub fn one_minus_t_pow(m: usize, k: usize) -> Polynomial {
    let mut factor = vec![BigInt::zero(); m + 1];
    factor[0] = BigInt::one();
    factor[m] = -BigInt::one();
    let mut p = poly(&[1]);
    for _ in 0..k {
        p = poly_mul(&p, &factor);
    }
    p
}

/// Whether `a_i = a_{d-i}` for `0 ≤ i ≤ d`, missing coefficients read as zero.
pub fn is_palindromic(q: &[BigInt], degree: usize) -> bool {
    if q.iter().skip(degree + 1).any(|c| !c.is_zero()) {
        return false;
    }
    let zero = BigInt::zero();
    let at = |i: usize| q.get(i).unwrap_or(&zero);
    (0..=degree).all(|i| at(i) == at(degree - i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareSeries {
    numerator: Polynomial,
    /// `m ↦ multiplicity` of the factor `(1 - t^m)`.
    denominator: BTreeMap<usize, usize>,
}

impl PoincareSeries {
    pub fn new(numerator: Polynomial, denominator: &[(usize, usize)]) -> Self {
        let mut den = BTreeMap::new();
        for &(m, k) in denominator {
            assert!(m >= 1, "denominator factors are 1 - t^m with m ≥ 1");
            if k > 0 {
                *den.entry(m).or_insert(0) += k;
            }
        }
        Self {
            numerator: trim(numerator),
            denominator: den,
        }
    }

    pub fn polynomial(q: Polynomial) -> Self {
        Self::new(q, &[])
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> Vec<(usize, usize)> {
        self.denominator.iter().map(|(&m, &k)| (m, k)).collect()
    }

    /// Coefficients of `t^0..=t^d`.
    pub fn expand(&self, d: usize) -> Vec<BigInt> {
        let mut c: Vec<BigInt> = (0..=d)
            .map(|i| self.numerator.get(i).cloned().unwrap_or_default())
            .collect();
        for (&m, &k) in &self.denominator {
            for _ in 0..k {
                for i in m..=d {
                    let prev = c[i - m].clone();
                    c[i] += prev;
                }
            }
        }
        c
    }

    /// Expansion as machine integers; panics if a coefficient does not fit.
    pub fn expand_u64(&self, d: usize) -> Vec<u64> {
        self.expand(d)
            .iter()
            .map(|c| c.to_u64().expect("coefficient fits in u64"))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num": self.numerator.iter().map(int_json).collect::<Vec<_>>(),
            "den": self.denominator.iter().map(|(m, k)| json!([m, k])).collect::<Vec<_>>(),
        })
    }
}

/// JSON number when it fits in `i64`, decimal string otherwise.
pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// `q(t) / (1 - t²)^r`.
pub fn recover_p_from_q(q: &[BigInt], r: usize) -> PoincareSeries {
    PoincareSeries::new(q.to_vec(), &[(2, r)])
}

/// `((1-t) s(t) + n·2^{C(n-1,2)} t^{C(n,2)+1}) / ((1-t²)^{C(n,2)} (1-t))`.
pub fn pythagorean_series(n: usize, s: &[BigInt]) -> PoincareSeries {
    let c2 = n * (n - 1) / 2;
    let c1 = (n - 1) * n.saturating_sub(2) / 2;
    let mut tail = vec![BigInt::zero(); c2 + 2];
    tail[c2 + 1] = BigInt::from(n) << c1;
    let num = poly_add(&poly_mul(&poly(&[1, -1]), s), &tail);
    PoincareSeries::new(num, &[(2, c2), (1, 1)])
}

fn fmt_poly(p: &[BigInt], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        let coeff = if mag.is_one() && i > 0 {
            String::new()
        } else {
            mag.to_string()
        };
        match i {
            0 => write!(f, "{mag}")?,
            1 => write!(f, "{coeff}t")?,
            _ => write!(f, "{coeff}t^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return fmt_poly(&self.numerator, f);
        }
        write!(f, "(")?;
        fmt_poly(&self.numerator, f)?;
        write!(f, ")/(")?;
        for (&m, &k) in &self.denominator {
            if m == 1 {
                write!(f, "(1-t)")?;
            } else {
                write!(f, "(1-t^{m})")?;
            }
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        write!(f, ")")
    }
}
