//! Ranks of integer matrices modulo a prime, by sparse row reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::IntMatrix;

/// The Mersenne prime `2⁶¹ - 1`.
pub const LARGE_PRIME: u64 = (1 << 61) - 1;

fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Rank of `m` over `F_p`; `p` must be prime.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    // pivot rows keyed by leading column, normalised to leading coefficient 1
    let mut pivots: Vec<Option<Vec<(u32, u64)>>> = vec![None; m.cols()];
    let mut rank = 0;
    let mut scratch: Vec<(u32, u64)> = Vec::new();
    for i in 0..m.rows() {
        let mut row: Vec<(u32, u64)> = m
            .row_entries(i)
            .iter()
            .map(|(j, v)| (*j, reduce(v, p)))
            .filter(|(_, v)| *v != 0)
            .collect();
        row.sort_unstable_by_key(|(j, _)| *j);
        while let Some(&(lead, c)) = row.first() {
            let Some(piv) = &pivots[lead as usize] else {
                break;
            };
            // row -= c * piv
            scratch.clear();
            let (mut a, mut b) = (0, 0);
            while a < row.len() || b < piv.len() {
                let ja = row.get(a).map_or(u32::MAX, |e| e.0);
                let jb = piv.get(b).map_or(u32::MAX, |e| e.0);
                if ja < jb {
                    scratch.push(row[a]);
                    a += 1;
                } else if jb < ja {
                    scratch.push((jb, (p - mul_mod(c, piv[b].1, p)) % p));
                    b += 1;
                } else {
                    let v = (row[a].1 + p - mul_mod(c, piv[b].1, p)) % p;
                    if v != 0 {
                        scratch.push((ja, v));
                    }
                    a += 1;
                    b += 1;
                }
            }
            std::mem::swap(&mut row, &mut scratch);
        }
        if let Some(&(lead, c)) = row.first() {
            let inv = pow_mod(c, p - 2, p);
            for e in row.iter_mut() {
                e.1 = mul_mod(e.1, inv, p);
            }
            pivots[lead as usize] = Some(row);
            rank += 1;
        }
    }
    rank
}
