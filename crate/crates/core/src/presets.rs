//! Named k-invariant sets and the Laurent-series constructor.
//!
//! Families: `W(n)` (all quadrics, the universal W-group), `T(n)` (the
//! products `x_i x_j`, pythagorean fields with n orderings), `S(n)`
//! (`x_t² + x_1 x_t`, superpythagorean fields) and `Q2` (the 2-adic numbers).
//! Wherever a field's square-class basis starts with `[-1]`, that class is `x1`;
//! for `Q2` the variables `x1, x2, x3` stand for `[-1], [2], [5]`.
//!
//! The data files in `presets/` carry the same forms together with the values
//! the verification suite expects.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{KInvariantSet, LinearForm, QuadraticForm};

/// A rational series `num / Π (1 - t^m)^k` in file form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalData {
    pub num: Vec<i64>,
    #[serde(default)]
    pub den: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formally_real: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orderings: Option<usize>,
    /// Betti numbers of the quotient manifold, for free actions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<Vec<u64>>,
    /// Borel series of the torus model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub borel: Option<RationalData>,
    /// `(degree, value)` pairs of the Borel dimensions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub borel_values: Vec<(usize, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetFile {
    pub name: String,
    pub n: usize,
    pub forms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_one: Option<String>,
    #[serde(default)]
    pub expected: Expected,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPreset {
    pub name: String,
    pub kinv: KInvariantSet,
    pub minus_one: Option<LinearForm>,
    pub expected: Expected,
}

impl FieldPreset {
    pub fn n(&self) -> usize {
        self.kinv.n()
    }

    pub fn from_file(file: &PresetFile) -> Result<Self> {
        let texts: Vec<&str> = file.forms.iter().map(String::as_str).collect();
        let kinv = KInvariantSet::parse(file.n, &texts)?;
        let minus_one = file
            .minus_one
            .as_deref()
            .map(|s| LinearForm::parse(s, file.n))
            .transpose()?;
        Ok(Self {
            name: file.name.clone(),
            kinv,
            minus_one,
            expected: file.expected.clone(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresetFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> PresetFile {
        PresetFile {
            name: self.name.clone(),
            n: self.n(),
            forms: self.kinv.forms().iter().map(|q| q.to_string()).collect(),
            minus_one: self.minus_one.as_ref().map(|l| l.to_string()),
            expected: self.expected.clone(),
            description: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("preset serializes")
    }
}

fn preset(
    name: String,
    n: usize,
    forms: Vec<QuadraticForm>,
    minus_one: Option<LinearForm>,
) -> Result<FieldPreset> {
    Ok(FieldPreset {
        name,
        kinv: KInvariantSet::new(n, forms)?,
        minus_one,
        expected: Expected::default(),
    })
}

/// `W(n)`: every `x_i²` and `x_i x_j`.
pub fn universal(n: usize) -> Result<FieldPreset> {
    let mut forms: Vec<QuadraticForm> = (0..n).map(|i| QuadraticForm::monomial(n, i, i)).collect();
    forms.extend((0..n).flat_map(|i| (i + 1..n).map(move |j| QuadraticForm::monomial(n, i, j))));
    preset(format!("W{n}"), n, forms, None)
}

/// `T(n)`: the products `x_i x_j`, `i < j`.
pub fn pythagorean(n: usize) -> Result<FieldPreset> {
    if n < 2 {
        return Err(Error::InvalidInput("T(n) needs n ≥ 2".into()));
    }
    let forms = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| QuadraticForm::monomial(n, i, j)))
        .collect();
    preset(format!("T{n}"), n, forms, None)
}

/// `S(n)`: `x_t² + x_1 x_t` for `t = 2..n`, with `x_1 = [-1]`.
pub fn superpythagorean(n: usize) -> Result<FieldPreset> {
    if n < 2 {
        return Err(Error::InvalidInput("S(n) needs n ≥ 2".into()));
    }
    let forms = (1..n)
        .map(|t| QuadraticForm::monomial(n, t, t).add(&QuadraticForm::monomial(n, 0, t)))
        .collect();
    preset(format!("S{n}"), n, forms, Some(LinearForm::var(n, 0)))
}

/// The 2-adic numbers in the basis `[-1], [2], [5]`.
pub fn dyadic() -> Result<FieldPreset> {
    let kinv = KInvariantSet::parse(3, &["x2*x2", "x3*x3", "x1*x2", "x1*x3", "x1*x1 + x2*x3"])?;
    Ok(FieldPreset {
        name: "Q2".into(),
        kinv,
        minus_one: Some(LinearForm::var(3, 0)),
        expected: Expected::default(),
    })
}

/// `F_p` with `p ≡ 3 (mod 4)`: one square class `x1 = [-1]` and `x1² ≠ 0`.
pub fn finite_field() -> Result<FieldPreset> {
    Ok(FieldPreset {
        name: "Fp".into(),
        kinv: KInvariantSet::parse(1, &["x1*x1"])?,
        minus_one: Some(LinearForm::var(1, 0)),
        expected: Expected::default(),
    })
}

/// A real closed field: one class `x1 = [-1]`, no relations.
pub fn real_closed() -> Result<FieldPreset> {
    preset("R".into(), 1, Vec::new(), Some(LinearForm::var(1, 0)))
}

/// The field whose W-group is the free product: both sets of relations,
/// every cross product `x_i y_j`, and `[-1]` taken diagonally.
pub fn free_product(a: &FieldPreset, b: &FieldPreset) -> Result<FieldPreset> {
    let (na, nb) = (a.n(), b.n());
    let m = na + nb;
    let shift = |q: &QuadraticForm| {
        let mut out = QuadraticForm::zero(m);
        for i in 0..nb {
            for j in i..nb {
                if q.coeff(i, j) {
                    out.toggle(na + i, na + j);
                }
            }
        }
        out
    };
    let mut forms: Vec<QuadraticForm> = a.kinv.forms().iter().map(|q| q.embed(m)).collect();
    forms.extend(b.kinv.forms().iter().map(shift));
    forms.extend((0..na).flat_map(|i| (na..m).map(move |j| QuadraticForm::monomial(m, i, j))));
    let minus_one = match (&a.minus_one, &b.minus_one) {
        (Some(x), Some(y)) => Some(LinearForm::new(m, x.coeffs() | y.coeffs() << na)),
        _ => None,
    };
    preset(format!("{}*{}", a.name, b.name), m, forms, minus_one)
}

/// `F((t))`: one new class `x_{n+1} = [t]` and the relation `[t][t] = [t][-1]`.
pub fn laurent_extension(p: &FieldPreset, minus_one: &LinearForm) -> Result<FieldPreset> {
    let n = p.n();
    if minus_one.n() != n {
        return Err(Error::InvalidInput(format!(
            "[-1] given in {} variables, preset has {n}",
            minus_one.n()
        )));
    }
    let m = n + 1;
    let t = LinearForm::var(m, n);
    let new = QuadraticForm::product(&t, &t).add(&QuadraticForm::product(&t, &minus_one.embed(m)));
    let mut forms: Vec<QuadraticForm> = p.kinv.forms().iter().map(|q| q.embed(m)).collect();
    forms.push(new);
    Ok(FieldPreset {
        name: format!("{}((t))", p.name),
        kinv: KInvariantSet::new(m, forms)?,
        minus_one: Some(minus_one.embed(m)),
        expected: Expected::default(),
    })
}

/// Repeated Laurent extensions of a preset that knows its `[-1]`.
pub fn laurent_tower(p: &FieldPreset, times: usize) -> Result<FieldPreset> {
    let mut cur = p.clone();
    for _ in 0..times {
        let m1 = cur
            .minus_one
            .ok_or_else(|| Error::InvalidInput(format!("{} has no [-1] form", cur.name)))?;
        cur = laurent_extension(&cur, &m1)?;
    }
    Ok(cur)
}

/// `K((t))` for a field `K` with W-group `W(2)`, whose `[-1]` the caller supplies.
///
/// The square class of `-1` in `K` is not determined by the group, so no
/// default is assumed; the known quotient series of this field
/// is recorded as the expectation.
pub fn laurent_over_universal_two(minus_one: &LinearForm) -> Result<FieldPreset> {
    let mut k = universal(2)?;
    k.minus_one = Some(*minus_one);
    let mut f = laurent_extension(&k, minus_one)?;
    f.name = "W2((t))".into();
    f.expected = Expected {
        r: Some(4),
        formally_real: Some(false),
        orderings: Some(0),
        quotient: Some(vec![1, 3, 4, 3, 1]),
        ..Expected::default()
    };
    Ok(f)
}

const CATALOG: &[(&str, &str)] = &[
    ("W2", include_str!("../presets/W2.json")),
    ("W3", include_str!("../presets/W3.json")),
    ("W4", include_str!("../presets/W4.json")),
    ("W5", include_str!("../presets/W5.json")),
    ("T2", include_str!("../presets/T2.json")),
    ("T3", include_str!("../presets/T3.json")),
    ("T4", include_str!("../presets/T4.json")),
    ("S2", include_str!("../presets/S2.json")),
    ("S3", include_str!("../presets/S3.json")),
    ("S4", include_str!("../presets/S4.json")),
    ("Q2", include_str!("../presets/Q2.json")),
    ("Fp", include_str!("../presets/Fp.json")),
    ("Fp1", include_str!("../presets/Fp1.json")),
    ("Fp2", include_str!("../presets/Fp2.json")),
    ("Fp3", include_str!("../presets/Fp3.json")),
];

/// Every shipped preset, in catalog order.
pub fn catalog() -> Result<Vec<FieldPreset>> {
    CATALOG
        .iter()
        .map(|(_, text)| FieldPreset::from_json(text))
        .collect()
}

pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(k, _)| *k).collect()
}

/// A catalog entry by key (`"T3"`), or a family member by letter and `n` (`"T"`, 5).
pub fn get(name: &str, n: Option<usize>) -> Result<FieldPreset> {
    let key = match (name, n) {
        ("W" | "T" | "S", Some(n)) => format!("{name}{n}"),
        _ => name.to_string(),
    };
    if let Some((_, text)) = CATALOG.iter().find(|(k, _)| *k == key) {
        return FieldPreset::from_json(text);
    }
    match (name, n) {
        ("W", Some(n)) => universal(n),
        ("T", Some(n)) => pythagorean(n),
        ("S", Some(n)) => superpythagorean(n),
        _ => Err(Error::UnknownPreset(key)),
    }
}
