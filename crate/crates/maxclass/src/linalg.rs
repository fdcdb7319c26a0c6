//! Echelon forms over `Z/p^k` and kernels over `F_p`.

use crate::modular::{inv_mod, mul_mod, vp};

/// Hermite normal form of the row span of `rows` over `Z/p^k`.
///
/// Returned rows are sorted by pivot column; each pivot entry is a power of p
/// and entries above a pivot `p^v` lie in `[0, p^v)`. The span is taken as a
/// `Z/p^k`-module, so `p^{k-v}` times a pivot row is fed back in.
pub fn hermite_form(rows: &[Vec<u64>], ncols: usize, p: u64, k: u32) -> Vec<Vec<u64>> {
    let m = p.pow(k);
    let mut work: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&a| a % m).collect())
        .filter(|r: &Vec<u64>| r.iter().any(|&a| a != 0))
        .collect();
    let mut done: Vec<Vec<u64>> = Vec::new();
    for col in 0..ncols {
        let best = work
            .iter()
            .enumerate()
            .filter(|(_, r)| r[col] != 0)
            .min_by_key(|(_, r)| vp(r[col], p))
            .map(|(i, _)| i);
        let Some(best) = best else { continue };
        let mut pivot = work.swap_remove(best);
        let v = vp(pivot[col], p);
        let pv = p.pow(v);
        let unit_inv = inv_mod((pivot[col] / pv) % m, m);
        for a in pivot.iter_mut() {
            *a = mul_mod(*a, unit_inv, m);
        }
        for row in work.iter_mut() {
            if row[col] != 0 {
                let f = row[col] / pv;
                axpy(row, &pivot, m - f % m, m);
            }
        }
        if v > 0 {
            let mut sat: Vec<u64> = pivot.iter().map(|&a| mul_mod(a, p.pow(k - v), m)).collect();
            sat[col] = 0;
            if sat.iter().any(|&a| a != 0) {
                work.push(sat);
            }
        }
        work.retain(|r| r.iter().any(|&a| a != 0));
        for row in done.iter_mut() {
            let f = row[col] / pv;
            if f != 0 {
                axpy(row, &pivot, m - f % m, m);
            }
        }
        done.push(pivot);
    }
    done
}

/// `row += f * other (mod m)`.
pub fn axpy(row: &mut [u64], other: &[u64], f: u64, m: u64) {
    for (a, &b) in row.iter_mut().zip(other) {
        *a = (*a + mul_mod(f, b, m)) % m;
    }
}

/// Pivot column of an echelon row.
pub fn pivot_col(row: &[u64]) -> Option<usize> {
    row.iter().position(|&a| a != 0)
}

/// Basis of `{c : Σ c_i vectors[i] = 0}` over `F_p`.
pub fn fp_kernel(vectors: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let r = vectors.len();
    if r == 0 {
        return Vec::new();
    }
    let width = vectors[0].len();
    let mut aug: Vec<Vec<u64>> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row: Vec<u64> = v.iter().map(|a| a % p).collect();
            row.extend((0..r).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..r).find(|&i| aug[i][col] != 0) else { continue };
        aug.swap(rank, piv);
        let inv = inv_mod(aug[rank][col], p);
        for a in aug[rank].iter_mut() {
            *a = *a * inv % p;
        }
        let pivot = aug[rank].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = p - row[col];
                axpy(row, &pivot, f, p);
            }
        }
        rank += 1;
    }
    aug[rank..].iter().map(|row| row[width..].to_vec()).collect()
}

/// Rank over `F_p`.
pub fn fp_rank(vectors: &[Vec<u64>], p: u64) -> usize {
    vectors.len() - fp_kernel(vectors, p).len()
}
