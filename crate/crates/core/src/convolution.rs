//! Exact cyclic convolution of nonnegative integer sequences.
//!
//! Large inputs go through three NTT primes and are recombined by CRT, which
//! is exact while every output stays below the product of the primes
//! (about `2^86`).

use crate::field::{mul_mod, pow_mod};

const NTT_PRIMES: [(u64, u64); 3] = [
    (998_244_353, 3), // 119 * 2^23 + 1
    (167_772_161, 3), // 5 * 2^25 + 1
    (469_762_049, 3), // 7 * 2^26 + 1
];

/// Largest transform length supported by every prime.
const MAX_NTT_LEN: usize = 1 << 23;

/// Below this length the quadratic loop is faster.
const DIRECT_CUTOFF: usize = 256;

/// `out[s] = Σ_t a[t] b[(s - t) mod n]`, computed by the quadratic loop.
pub fn cyclic_convolution_direct(a: &[u64], b: &[u64]) -> Vec<u128> {
    assert_eq!(a.len(), b.len(), "cyclic convolution needs equal lengths");
    let n = a.len();
    let mut out = vec![0u128; n];
    for (t, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (u, &y) in b.iter().enumerate() {
            let s = if t + u >= n { t + u - n } else { t + u };
            out[s] += x as u128 * y as u128;
        }
    }
    out
}

/// Exact cyclic convolution; picks the direct or NTT path by length.
///
/// Panics if an output could exceed the CRT range.
pub fn cyclic_convolution(a: &[u64], b: &[u64]) -> Vec<u128> {
    assert_eq!(a.len(), b.len(), "cyclic convolution needs equal lengths");
    let n = a.len();
    if n <= DIRECT_CUTOFF {
        return cyclic_convolution_direct(a, b);
    }
    let sum_a: u128 = a.iter().map(|&x| x as u128).sum();
    let max_b = b.iter().copied().max().unwrap_or(0) as u128;
    let modulus: f64 = NTT_PRIMES.iter().map(|&(q, _)| q as f64).product();
    assert!(
        (sum_a as f64) * (max_b as f64) < modulus / 2.0,
        "convolution outputs exceed the CRT range"
    );
    let len = (2 * n).next_power_of_two();
    assert!(len <= MAX_NTT_LEN, "convolution length {n} too large");

    let residues: Vec<Vec<u64>> = NTT_PRIMES
        .iter()
        .map(|&(q, root)| {
            let mut fa: Vec<u64> = a.iter().map(|&x| x % q).collect();
            let mut fb: Vec<u64> = b.iter().map(|&x| x % q).collect();
            fa.resize(len, 0);
            fb.resize(len, 0);
            ntt(&mut fa, q, root, false);
            ntt(&mut fb, q, root, false);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = mul_mod(*x, *y, q);
            }
            ntt(&mut fa, q, root, true);
            // fold the linear convolution back onto length n
            let mut folded = fa[..n].to_vec();
            for (s, &v) in fa[n..2 * n - 1].iter().enumerate() {
                folded[s] = (folded[s] + v) % q;
            }
            folded
        })
        .collect();

    let crt = Crt3::new();
    (0..n)
        .map(|s| crt.combine([residues[0][s], residues[1][s], residues[2][s]]))
        .collect()
}

/// Garner recombination of residues modulo the three NTT primes.
struct Crt3 {
    inv_q0_mod_q1: u64,
    inv_q01_mod_q2: u64,
}

impl Crt3 {
    fn new() -> Self {
        let [(q0, _), (q1, _), (q2, _)] = NTT_PRIMES;
        let q01 = q0 as u128 * q1 as u128;
        Self {
            inv_q0_mod_q1: pow_mod(q0 % q1, q1 - 2, q1),
            inv_q01_mod_q2: pow_mod((q01 % q2 as u128) as u64, q2 - 2, q2),
        }
    }

    fn combine(&self, r: [u64; 3]) -> u128 {
        let [(q0, _), (q1, _), (q2, _)] = NTT_PRIMES;
        let (inv_q0_mod_q1, inv_q01_mod_q2) = (self.inv_q0_mod_q1, self.inv_q01_mod_q2);
        let q01 = q0 as u128 * q1 as u128;
        let x0 = r[0];
        let x1 = mul_mod((r[1] + q1 - x0 % q1) % q1, inv_q0_mod_q1, q1);
        let partial = x0 as u128 + x1 as u128 * q0 as u128;
        let x2 = mul_mod(
            (r[2] + q2 - (partial % q2 as u128) as u64) % q2,
            inv_q01_mod_q2,
            q2,
        );
        partial + x2 as u128 * q01
    }
}

fn ntt(a: &mut [u64], q: u64, root: u64, invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(root, (q - 1) / len as u64, q);
        if invert {
            w_len = pow_mod(w_len, q - 2, q);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(len / 2);
            let mut w = 1u64;
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let x = *u;
                let y = mul_mod(*v, w, q);
                *u = if x + y >= q { x + y - q } else { x + y };
                *v = if x >= y { x - y } else { x + q - y };
                w = mul_mod(w, w_len, q);
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, q - 2, q);
        for x in a.iter_mut() {
            *x = mul_mod(*x, n_inv, q);
        }
    }
}
