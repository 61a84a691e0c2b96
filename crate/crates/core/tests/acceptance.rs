//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use wittlab::cellular::{
    borel_cohomology, borel_cohomology_with, default_cutoff, quotient_cohomology, BorelComplex,
    BorelOptions, EquivariantChainComplex,
};
use wittlab::forms::LinearForm;
use wittlab::koszul::{koszul_homology, koszul_homology_where, Coefficients};
use wittlab::milnor::graded_dims;
use wittlab::presets::{self, FieldPreset};
use wittlab::series::{is_palindromic, poly, PoincareSeries};
use wittlab::torus::TorusModel;
use wittlab::verify::{self, passed, quotient_series, VerifyOptions};
use wittlab::wgroup::WGroup;
use wittlab::young::{coefficient_lower_bound, dimension, enumerate, ssyt_count};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const Q4: [u64; 11] = [1, 4, 20, 56, 84, 90, 84, 56, 20, 4, 1];
const Q5: [u64; 16] = [
    1, 5, 40, 176, 440, 835, 1423, 1980, 1980, 1423, 835, 440, 176, 40, 5, 1,
];

fn model(key: &str) -> TorusModel {
    TorusModel::from_kinvariants(&presets::get(key, None).unwrap().kinv).unwrap()
}

fn within(label: &str, limit: Duration, run: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = run()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{out}; {label} took {took:.2?} > {limit:?}"));
    }
    Ok(format!("{out} [{took:.2?}, limit {limit:?}]"))
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn expansion(num: &[i64], den: &[(usize, usize)], d: usize) -> Vec<u64> {
    PoincareSeries::new(poly(num), den).expand_u64(d)
}

fn c1() -> Outcome {
    within("q2", Duration::from_secs(1), || {
        let dims = quotient_cohomology(&model("W2"))
            .map_err(|e| e.to_string())?
            .dims;
        expect_eq("q2", dims.clone(), vec![1, 2, 2, 1])?;
        Ok(format!("q2 = {dims:?}"))
    })
}

fn c2() -> Outcome {
    within("q3", Duration::from_secs(60), || {
        let m = model("W3");
        let cells = EquivariantChainComplex::new(&m)
            .map_err(|e| e.to_string())?
            .cell_count();
        expect_eq("cells", cells, 8u64.pow(6))?;
        let dims = quotient_cohomology(&m).map_err(|e| e.to_string())?.dims;
        expect_eq("q3", dims.clone(), vec![1, 3, 8, 12, 8, 3, 1])?;
        Ok(format!("q3 = {dims:?} from {cells} cells"))
    })
}

fn c3() -> Outcome {
    within("Q2", Duration::from_secs(10), || {
        let dims = quotient_cohomology(&model("Q2"))
            .map_err(|e| e.to_string())?
            .dims;
        expect_eq("Q2", dims.clone(), vec![1, 3, 6, 6, 3, 1])?;
        Ok(format!("Q2 quotient = {dims:?}"))
    })
}

fn c4() -> Outcome {
    within("q4/q5 with SNF scans", Duration::from_secs(30 * 60), || {
        let q4 = koszul_homology(4, Coefficients::Rationals).map_err(|e| e.to_string())?;
        expect_eq("q4", q4.total_degree_dims(), Q4.to_vec())?;
        let q5 = koszul_homology(5, Coefficients::Rationals).map_err(|e| e.to_string())?;
        expect_eq("q5", q5.total_degree_dims(), Q5.to_vec())?;
        for (n, want) in [(4, &Q4[..]), (5, &Q5[..])] {
            let z = koszul_homology(n, Coefficients::Integers).map_err(|e| e.to_string())?;
            expect_eq(
                &format!("integral free ranks n={n}"),
                z.total_degree_dims(),
                want.to_vec(),
            )?;
            expect_eq(
                &format!("2-torsion bidegrees n={n}"),
                z.two_torsion_at(),
                vec![],
            )?;
        }
        Ok("q4, q5 match; integral homology 2-torsion-free at n=4, 5".into())
    })
}

fn c5() -> Outcome {
    for n in 1..=5 {
        let t = koszul_homology_where(n, Coefficients::Integers, |p, q| p + q <= 4 && q <= 3)
            .map_err(|e| e.to_string())?;
        expect_eq(&format!("2-torsion n={n}"), t.two_torsion_at(), vec![])?;
    }
    Ok("no 2-torsion at p+q <= 4, q <= 3 for n <= 5".into())
}

fn c6() -> Outcome {
    for n in 1..=5 {
        let dims = koszul_homology(n, Coefficients::Rationals)
            .map_err(|e| e.to_string())?
            .total_degree_dims();
        let bound: Vec<BigInt> = (0..dims.len())
            .map(|k| coefficient_lower_bound(n, k).unwrap())
            .collect();
        let dims: Vec<BigInt> = dims.into_iter().map(BigInt::from).collect();
        expect_eq(&format!("Young vs Koszul n={n}"), bound, dims)?;
    }
    for n in 1..=10i64 {
        let a2 = BigInt::from(n * (n + 1) * (n - 1) / 3);
        let a3 = BigInt::from(n * (n * n - 1) * (3 * n - 4) * (n + 3) / 60);
        expect_eq(
            &format!("a2 n={n}"),
            coefficient_lower_bound(n as usize, 2).unwrap_or_default(),
            a2,
        )?;
        expect_eq(
            &format!("a3 n={n}"),
            coefficient_lower_bound(n as usize, 3).unwrap_or_default(),
            a3,
        )?;
    }
    Ok("Young bound = Koszul for n <= 5; a2, a3 closed forms for n = 1..10".into())
}

fn c7() -> Outcome {
    let t3 = borel_cohomology(&model("T3"), 10).map_err(|e| e.to_string())?;
    expect_eq(
        "T3",
        t3.dims.clone(),
        expansion(&[1, 2, 2, 1], &[(1, 1)], 10),
    )?;
    expect_eq("T3 constant", t3.eventual_constant(), Some(3 * 2u64.pow(1)))?;
    let t2 = borel_cohomology(&model("T2"), 10).map_err(|e| e.to_string())?;
    let p: Vec<u64> =
        PoincareSeries::new(t2.dims.iter().map(|&d| d.into()).collect(), &[(2, 1)]).expand_u64(10);
    expect_eq("T2 with (1-t^2)^-1", p, expansion(&[1], &[(1, 2)], 10))?;
    Ok(format!("T3 = {:?}; T2 gives 1/(1-t)^2", t3.dims))
}

fn c8() -> Outcome {
    let t4 = borel_cohomology(&model("T4"), 8).map_err(|e| e.to_string())?;
    expect_eq("T4 degree 7", t4.dims[7], 32)?;
    Ok(format!("T4 through degree 8 = {:?}", t4.dims))
}

fn c9() -> Outcome {
    let mut out = Vec::new();
    for n in 2..=4 {
        let m = TorusModel::from_kinvariants(&presets::superpythagorean(n).unwrap().kinv).unwrap();
        let cutoff = default_cutoff(&m);
        let dims = borel_cohomology(&m, cutoff)
            .map_err(|e| e.to_string())?
            .dims;
        let binom: Vec<i64> = (0..n)
            .map(|k| (0..k).fold(1, |acc, i| acc * (n - 1 - i) as i64 / (i + 1) as i64))
            .collect();
        expect_eq(
            &format!("S{n}"),
            dims.clone(),
            expansion(&binom, &[(1, 1)], cutoff),
        )?;
        out.push(format!("S{n} to degree {cutoff}"));
    }
    Ok(out.join(", "))
}

fn c10() -> Outcome {
    let catalog = presets::catalog().unwrap();
    for p in &catalog {
        let m = TorusModel::from_kinvariants(&p.kinv).map_err(|e| e.to_string())?;
        let real = WGroup::new(p.kinv.clone())
            .unwrap()
            .is_formally_real()
            .unwrap();
        expect_eq(&format!("{} free", p.name), m.is_free(), !real)?;
        expect_eq(
            &format!("{} cyclic", p.name),
            m.stabilizer_cyclicity_check(),
            true,
        )?;
    }
    let checks = verify::random_freeness_checks(2024, 500).map_err(|e| e.to_string())?;
    if !passed(&checks) {
        return Err(format!("{checks:?}"));
    }
    Ok(format!(
        "{} catalog presets; 500 random product sets (freeness); 500 random elementary-type fields (freeness, cyclicity)",
        catalog.len()
    ))
}

fn c11() -> Outcome {
    let catalog = presets::catalog().unwrap();
    let free_of_dim = |r: usize| -> Result<BTreeSet<Vec<u64>>, String> {
        let mut s = BTreeSet::new();
        for p in catalog.iter().filter(|p| p.kinv.r() == r) {
            let m = TorusModel::from_kinvariants(&p.kinv).map_err(|e| e.to_string())?;
            if m.is_free() {
                s.insert(quotient_series(p).map_err(|e| e.to_string())?);
            }
        }
        Ok(s)
    };
    expect_eq(
        "dim 3",
        free_of_dim(3)?,
        BTreeSet::from([vec![1, 2, 2, 1], vec![1, 3, 3, 1]]),
    )?;
    let mut dim4 = free_of_dim(4)?;
    expect_eq(
        "dim 4 catalog",
        dim4.clone(),
        BTreeSet::from([vec![1, 4, 6, 4, 1]]),
    )?;
    for m in 0..4u64 {
        let f: FieldPreset = presets::laurent_over_universal_two(&LinearForm::new(2, m)).unwrap();
        let q = quotient_series(&f).map_err(|e| e.to_string())?;
        expect_eq(
            &format!("K((t)) with [-1] = {m:02b}"),
            Some(q.clone()),
            f.expected.quotient.clone(),
        )?;
        dim4.insert(q);
    }
    expect_eq(
        "dim 4",
        dim4,
        BTreeSet::from([vec![1, 3, 4, 3, 1], vec![1, 4, 6, 4, 1]]),
    )?;
    Ok("dim 3: W2, Fp2; dim 4: Fp3, K((t)) for every supplied [-1]".into())
}

fn c12() -> Outcome {
    let mut names = Vec::new();
    for key in ["W2", "W3", "Q2", "T3", "S3"] {
        let c = verify::conjecture_check(
            &presets::get(key, None).unwrap(),
            true,
            VerifyOptions::default(),
        )
        .map_err(|e| e.to_string())?;
        expect_eq(&c.name, &c.computed, &c.expected)?;
        names.push(key);
    }
    Ok(format!("Tor series = cohomology for {}", names.join(", ")))
}

fn c13() -> Outcome {
    let catalog = presets::catalog().unwrap();
    for p in catalog.iter().filter(|p| p.kinv.r() <= 5) {
        let m = TorusModel::from_kinvariants(&p.kinv).unwrap();
        let cx = EquivariantChainComplex::new(&m).map_err(|e| e.to_string())?;
        expect_eq(
            &format!("{} cellular d^2", p.name),
            cx.check_boundary_squared(),
            true,
        )?;
        let b = BorelComplex::new(&m, BorelOptions::new(5)).map_err(|e| e.to_string())?;
        for k in 2..=6 {
            let zero = b
                .boundary_matrix(k - 1)
                .to_dense()
                .mul(&b.boundary_matrix(k).to_dense())
                .is_zero();
            expect_eq(&format!("{} Borel d^2 at {k}", p.name), zero, true)?;
        }
    }
    for n in 2..=5 {
        let k = wittlab::koszul::NilpotentKoszul::new(n).map_err(|e| e.to_string())?;
        expect_eq(&format!("Koszul d^2 n={n}"), k.check_d_squared(), true)?;
    }
    common::f2_rank_cases(101, 200)?;
    common::f2_kernel_cases(102, 200)?;
    common::snf_divisor_cases(103, 100)?;
    common::snf_unimodular_cases(104, 100)?;
    for p in &catalog {
        let m = TorusModel::from_kinvariants(&p.kinv).unwrap();
        let dims = if m.is_free() {
            let q = quotient_series(p).map_err(|e| e.to_string())?;
            let big: Vec<BigInt> = q.iter().map(|&x| x.into()).collect();
            expect_eq(
                &format!("{} palindromic", p.name),
                is_palindromic(&big, p.kinv.r()),
                true,
            )?;
            q
        } else {
            borel_cohomology_with(&m, BorelOptions::new(default_cutoff(&m)))
                .map_err(|e| e.to_string())?
                .dims
        };
        let milnor = graded_dims(&p.kinv, (dims.len() - 1).min(10));
        for (i, (&a, &h)) in milnor.iter().zip(&dims).enumerate() {
            if a as u64 > h {
                return Err(format!(
                    "{} degree {i}: Milnor {a} > cohomology {h}",
                    p.name
                ));
            }
        }
    }
    let mut diagrams = 0;
    for p in 0..=8 {
        for q in 0..=(8 - p) / 2 {
            for d in enumerate(p, q) {
                for n in 1..=5 {
                    let c = ssyt_count(&d, n).map_err(|e| e.to_string())?;
                    expect_eq(
                        &format!("ssyt {:?} n={n}", d.shape()),
                        BigInt::from(c),
                        dimension(&d, n),
                    )?;
                }
                diagrams += 1;
            }
        }
    }
    Ok(format!(
        "d^2 = 0; 200+200 F2 and 100+100 SNF oracle cases; palindromic free series; Milnor <= cohomology on {} presets; ssyt = hook-content on {diagrams} diagrams",
        catalog.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("q2 exact", c1),
        ("q3 exact", c2),
        ("Q2 exact", c3),
        ("q4, q5 exact, 2-torsion-free", c4),
        ("2-torsion in low bidegrees", c5),
        ("Young bound = Koszul, closed forms", c6),
        ("T(3) and T(2) Borel series", c7),
        ("T(4) degree 7 = 32", c8),
        ("S(n) Borel series, n <= 4", c9),
        ("freeness and cyclic isotropy", c10),
        ("dimension 3 and 4 space forms", c11),
        ("conjecture suite on known examples", c12),
        ("property suites", c13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
