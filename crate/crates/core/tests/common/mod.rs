//! Independent oracles: direct O(N²) sums and exhaustive searches written
//! from the definitions, sharing no code with the library.

#![allow(dead_code)]

use proptest::prelude::*;
use spfft_core::Complex64;
use std::f64::consts::PI;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Σ_j x_j e^{sign·2πi jk/N}`, scaled by `scale`, with the exponent
/// reduced mod N into a table of roots.
fn direct_sum(x: &[Complex64], sign: f64, scale: f64) -> Vec<Complex64> {
    let n = x.len();
    let roots: Vec<Complex64> = (0..n)
        .map(|e| {
            let angle = sign * 2.0 * PI * e as f64 / n as f64;
            c(angle.cos(), angle.sin())
        })
        .collect();
    (0..n)
        .map(|k| {
            let mut acc = c(0.0, 0.0);
            for (j, v) in x.iter().enumerate() {
                acc += v * roots[j * k % n];
            }
            acc * scale
        })
        .collect()
}

pub fn dft(x: &[Complex64]) -> Vec<Complex64> {
    direct_sum(x, -1.0, 1.0)
}

pub fn idft(s: &[Complex64]) -> Vec<Complex64> {
    direct_sum(s, 1.0, 1.0 / s.len() as f64)
}

pub fn periodize(x: &[Complex64], j: u32) -> Vec<Complex64> {
    let p = 1usize << j;
    let mut out = vec![c(0.0, 0.0); p];
    for (k, v) in x.iter().enumerate() {
        out[k % p] += v;
    }
    out
}

pub fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest window energy over every cyclic start, earliest start on ties.
pub fn best_window(p: &[Complex64], m: usize) -> usize {
    let n = p.len();
    let energies: Vec<f64> = (0..n)
        .map(|k| (0..m).map(|l| p[(k + l) % n].norm_sqr()).sum())
        .collect();
    let top = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    energies.iter().position(|&e| e == top).unwrap()
}

/// Shortest cyclic window holding every nonzero entry, by trying all
/// `(start, length)` pairs in order of length.
pub fn shortest_support(x: &[Complex64]) -> Option<(usize, usize)> {
    let n = x.len();
    if x.iter().all(|v| *v == c(0.0, 0.0)) {
        return None;
    }
    for len in 1..=n {
        for start in 0..n {
            let covers = (0..n)
                .filter(|&k| x[k] != c(0.0, 0.0))
                .all(|k| (k + n - start) % n < len);
            if covers {
                return Some((start, len));
            }
        }
    }
    unreachable!("the full window covers everything")
}

/// Cyclic shift `y_k = x_{(k + s) mod N}`.
pub fn rotate(x: &[Complex64], s: usize) -> Vec<Complex64> {
    let n = x.len();
    (0..n).map(|k| x[(k + s) % n]).collect()
}

pub fn complex_in(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| c(re, im))
}

/// Vector of length `2^j` for `j` in `log2_range`.
pub fn pow2_vector(
    log2_range: std::ops::RangeInclusive<u32>,
    bound: f64,
) -> impl Strategy<Value = Vec<Complex64>> {
    log2_range.prop_flat_map(move |j| prop::collection::vec(complex_in(bound), 1usize << j))
}

/// Gaussian integers, so sums of squared moduli are exact in f64 and ties
/// are real ties.
pub fn integer_vector(log2_range: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = Vec<Complex64>> {
    log2_range.prop_flat_map(|j| {
        prop::collection::vec((-3i32..=3, -3i32..=3).prop_map(|(a, b)| c(a as f64, b as f64)), 1usize << j)
    })
}

/// A length-`n` vector carrying `values` on the cyclic window starting at
/// `mu`; endpoints of modulus below 0.5 are pushed out by 1, so the support
/// length is exactly `values.len()`.
pub fn windowed(n: usize, mu: usize, values: &[Complex64]) -> Vec<Complex64> {
    let mut x = vec![c(0.0, 0.0); n];
    for (r, v) in values.iter().enumerate() {
        x[(mu + r) % n] = *v;
    }
    for r in [0, values.len() - 1] {
        let k = (mu + r) % n;
        if x[k].norm() < 0.5 {
            x[k] += c(1.0, 0.0);
        }
    }
    x
}

/// Pool of support values; callers take a prefix.
pub fn support_values(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex_in(10.0), len)
}

/// `(J, m, μ)` with `m ≤ N/8`, `J` in `log2_range`.
pub fn sparse_shape(log2_range: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = (u32, usize, usize)> {
    log2_range.prop_flat_map(|j| {
        let n = 1usize << j;
        (Just(j), 1..=n / 8, 0..n)
    })
}
