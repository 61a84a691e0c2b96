use num_bigint::BigInt;
use num_traits::ToPrimitive;
use wittlab::cellular::{borel_cohomology, default_cutoff};
use wittlab::koszul::{koszul_homology, Coefficients};
use wittlab::milnor::graded_dims;
use wittlab::presets::{self, FieldPreset};
use wittlab::series::is_palindromic;
use wittlab::torus::TorusModel;
use wittlab::verify::{quotient_series, random_elementary_fields};
use wittlab::young::{coefficient_lower_bound, dimension, enumerate, ssyt_count};

fn cohomology_dims(p: &FieldPreset) -> Vec<u64> {
    let m = TorusModel::from_kinvariants(&p.kinv).unwrap();
    if m.is_free() {
        quotient_series(p).unwrap()
    } else {
        borel_cohomology(&m, default_cutoff(&m)).unwrap().dims
    }
}

fn bigs(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

#[test]
fn free_series_are_palindromic() {
    let mut seen = 0;
    for p in presets::catalog().unwrap() {
        let m = TorusModel::from_kinvariants(&p.kinv).unwrap();
        if !m.is_free() {
            continue;
        }
        let q = quotient_series(&p).unwrap();
        assert_eq!(q.len(), p.kinv.r() + 1, "{}", p.name);
        assert!(is_palindromic(&bigs(&q), p.kinv.r()), "{}: {q:?}", p.name);
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn random_free_fields_have_palindromic_series() {
    let mut seen = 0;
    for f in random_elementary_fields(21, 300, 4).unwrap() {
        if f.kinv.r() > 6 || f.kinv.has_nonzero_common_zero() {
            continue;
        }
        let q = quotient_series(&f).unwrap();
        assert!(is_palindromic(&bigs(&q), f.kinv.r()), "{}: {q:?}", f.name);
        assert_eq!(q[0], 1);
        assert_eq!(q[1] as usize, f.n(), "{}", f.name);
        seen += 1;
    }
    assert!(seen >= 20, "seen={seen}");
}

#[test]
fn milnor_dims_bounded_by_cohomology() {
    for p in presets::catalog().unwrap() {
        let dims = cohomology_dims(&p);
        let cutoff = (dims.len() - 1).min(10);
        let milnor = graded_dims(&p.kinv, cutoff);
        for (k, (&a, &h)) in milnor.iter().zip(&dims).enumerate() {
            assert!(a as u64 <= h, "{} degree {k}: {a} > {h}", p.name);
        }
        assert_eq!(milnor[1], p.n(), "{}", p.name);
        assert_eq!(dims[1] as usize, p.n(), "{}", p.name);
    }
}

#[test]
fn young_bound_equals_rational_koszul() {
    for n in 1..=5 {
        let dims = koszul_homology(n, Coefficients::Rationals)
            .unwrap()
            .total_degree_dims();
        assert_eq!(dims.len(), n + n * (n - 1) / 2 + 1);
        for (k, &d) in dims.iter().enumerate() {
            let bound = coefficient_lower_bound(n, k).unwrap();
            assert_eq!(bound, BigInt::from(d), "n={n}, k={k}");
        }
        let top = dims.len() - 1;
        for k in 0..=top {
            assert_eq!(
                coefficient_lower_bound(n, k).unwrap(),
                coefficient_lower_bound(n, top - k).unwrap(),
                "symmetry n={n} k={k}"
            );
        }
    }
}

#[test]
fn ssyt_matches_hook_content() {
    let mut checked = 0;
    for p in 0..=8 {
        for q in 0..=4 {
            if p + 2 * q > 8 {
                continue;
            }
            for d in enumerate(p, q) {
                assert!(d.is_symmetric());
                for n in 1..=5 {
                    let count = ssyt_count(&d, n).unwrap();
                    assert_eq!(
                        BigInt::from(count),
                        dimension(&d, n),
                        "{:?} n={n}",
                        d.shape()
                    );
                    checked += 1;
                }
            }
        }
    }
    // nine self-conjugate partitions of sizes 0..=8, five values of n
    assert_eq!(checked, 45);
}

fn falling(n: usize, k: usize) -> f64 {
    // (n+k-1)(n+k-2)…(n-k+1) / ((2k-1)·((k-1)!)²)
    let num: f64 = (0..2 * k - 1).map(|i| (n + k - 1 - i) as f64).product();
    let fact: f64 = (1..k).map(|i| i as f64).product();
    num / ((2 * k - 1) as f64 * fact * fact)
}

#[test]
fn asymptotic_lower_bound() {
    for k in 1..=4 {
        for n in (2 * k).max(2)..=14 {
            let a = coefficient_lower_bound(n, k).unwrap().to_f64().unwrap();
            assert!(
                a >= falling(n, k) - 1e-6,
                "n={n} k={k}: {a} < {}",
                falling(n, k)
            );
        }
    }
}
