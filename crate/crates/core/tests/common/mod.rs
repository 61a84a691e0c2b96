//! Independent oracles shared by the linear-algebra tests and the acceptance suite.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wittlab::exactlin::{
    kernel_f2, rank_f2, rank_f2_auto, snf, BitMatrix, IntMatrix, SparseF2Matrix,
};

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn random_bits(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Vec<Vec<bool>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_bool(density)).collect())
        .collect()
}

/// Textbook Gaussian elimination on a byte matrix.
pub fn naive_rank(mut a: Vec<Vec<bool>>) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c]) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && a[i][c] {
                let pivot = a[rank].clone();
                for (x, p) in a[i].iter_mut().zip(pivot) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn random_int(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(cols, &data)
}

pub fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    // Bareiss fraction-free elimination
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `d_k` = gcd of the k×k minors.
pub fn determinantal_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let a = m.to_dense();
    let top = m.rows().min(m.cols());
    (1..=top)
        .map(|k| {
            let mut g = BigInt::zero();
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let minor: Vec<Vec<BigInt>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect())
                        .collect();
                    g = g.gcd(&det(minor));
                }
            }
            g
        })
        .collect()
}

pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c: i64 = rng.gen_range(-2..=2);
        let mut e = IntMatrix::identity(n);
        e.set(i, j, c.into());
        u = e.mul(&u);
    }
    if rng.gen_bool(0.5) {
        let mut e = IntMatrix::identity(n);
        e.set(0, 0, (-1).into());
        u = e.mul(&u);
    }
    u
}

/// Dense, sparse and automatic F₂ ranks against naive elimination on random 20×30 matrices.
pub fn f2_rank_cases(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let density = [0.05, 0.2, 0.5][case % 3];
        let rows = random_bits(&mut rng, 20, 30, density);
        let expected = naive_rank(rows.clone());
        let dense = BitMatrix::from_bool_rows(30, &rows);
        let sparse = SparseF2Matrix::from_dense(&dense);
        ensure!(rank_f2(&dense) == expected, "dense rank, case {case}");
        ensure!(sparse.rank() == expected, "sparse rank, case {case}");
        ensure!(rank_f2_auto(&sparse) == expected, "auto rank, case {case}");
        ensure!(
            rank_f2(&dense.transpose()) == expected,
            "transpose rank, case {case}"
        );
    }
    Ok(())
}

/// Kernel bases: right size, independent, annihilated.
pub fn f2_kernel_cases(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let rows = random_bits(&mut rng, 20, 30, 0.3);
        let m = BitMatrix::from_bool_rows(30, &rows);
        let k = kernel_f2(&m);
        ensure!(k.cols() == 30, "kernel width, case {case}");
        ensure!(
            k.rows() == 30 - naive_rank(rows.clone()),
            "nullity, case {case}"
        );
        ensure!(k.rank() == k.rows(), "kernel basis dependent, case {case}");
        ensure!(
            m.mul(&k.transpose()).is_zero(),
            "kernel not annihilated, case {case}"
        );
    }
    Ok(())
}

/// Smith forms of random 8×10 matrices with entries in [-5, 5] against gcds of minors.
pub fn snf_divisor_cases(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let m = random_int(&mut rng, 8, 10, 5);
        let diag = snf(&m).diagonal;
        ensure!(diag.len() == 8, "diagonal length, case {case}");
        let divisors = determinantal_divisors(&m);
        let mut prod = BigInt::one();
        for (k, d) in diag.iter().enumerate() {
            ensure!(!d.is_negative(), "negative factor, case {case}");
            prod *= d;
            ensure!(prod == divisors[k], "d_{} mismatch, case {case}", k + 1);
            if k > 0 && !d.is_zero() {
                ensure!(d.is_multiple_of(&diag[k - 1]), "divisibility, case {case}");
            }
        }
    }
    Ok(())
}

/// `snf(UMV) = snf(M)` for random unimodular `U`, `V`.
pub fn snf_unimodular_cases(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let m = random_int(&mut rng, 8, 10, 5);
        let u = random_unimodular(&mut rng, 8);
        let v = random_unimodular(&mut rng, 10);
        ensure!(snf(&u.mul(&m).mul(&v)) == snf(&m), "case {case}");
    }
    Ok(())
}
