//! Power-sum algebra over `Z/pZ` for homomorphism witnesses.
//!
//! For witness values `x_1, ..., x_n` the even power sums
//! `S_{2k} = sum_i x_i^{2k}` satisfy a master identity
//!
//! ```text
//! (4^k + 4n + 2) S_{2k} + 2 sum_{t=1}^{k-1} C(2k,2t) S_{2t} S_{2(k-t)}
//!     = 0   if p-1 does not divide 2k,
//!     = -1  if p-1 divides 2k,
//! ```
//!
//! because the sphere values `0, ±x_i, ±2x_i, ±x_i±x_j` run over all of
//! `Z/pZ` exactly once. Combined with the semigroup
//! `X = {ax + by : x >= 1, y >= 0}` this forces `S_{2k} = 0` for
//! `k < (p-1)/2` outside `X`, then via Newton's identities `e_k = 0` for
//! `k <= n` outside `X`, and finally `n in X` since
//! `e_n = (x_1 ... x_n)^2 != 0`. This module checks all of these on
//! concrete witnesses.

use serde_json::json;

use crate::criterion::{x_set_member, ExponentA};
use crate::modular::{mul_mod, pow_mod, Modulus};
use crate::witness::Witness;
use crate::{Error, Result};

/// Even power sums `S_{2k} mod p` for `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSums {
    pub p: u64,
    pub n: usize,
    /// `s[k-1] = S_{2k}`.
    pub s: Vec<u64>,
}

impl PowerSums {
    /// `S_{2k}`; panics if `k` is out of the computed range.
    pub fn s2k(&self, k: usize) -> u64 {
        self.s[k - 1]
    }

    pub fn k_max(&self) -> usize {
        self.s.len()
    }
}

/// Elementary symmetric polynomials `e_k` of `x_1^2, ..., x_n^2` mod `p`,
/// for `k = 0..=n` (`e_0 = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementarySymmetric {
    pub p: u64,
    pub n: usize,
    pub e: Vec<u64>,
}

/// `S_{2k} = sum_i x_i^{2k}` for `k = 1..=k_max`, by iterated multiplication
/// with each `x_i^2`.
pub fn power_sums(x: &[u64], p: u64, k_max: usize) -> Result<PowerSums> {
    let m = Modulus::new(p)?;
    let squares: Vec<u64> = x.iter().map(|&xi| mul_mod(xi % p, xi % p, m)).collect();
    let mut current = squares.clone();
    let mut s = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        s.push(current.iter().fold(0u64, |acc, &v| (acc + v) % p));
        for (c, &sq) in current.iter_mut().zip(&squares) {
            *c = mul_mod(*c, sq, m);
        }
    }
    Ok(PowerSums { p, n: x.len(), s })
}

// Binomial coefficients mod p by the Pascal recurrence, rows 0..=max_top.
// Avoids inverse factorials, which degenerate when the top approaches p.
fn pascal_mod(max_top: usize, p: u64) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(max_top + 1);
    rows.push(vec![1]);
    for top in 1..=max_top {
        let prev = &rows[top - 1];
        let mut row = vec![1u64; top + 1];
        for j in 1..top {
            row[j] = (prev[j - 1] + prev[j]) % p;
        }
        rows.push(row);
    }
    rows
}

/// Evaluate the master identity for each `k` in `1..=k_max`; returns
/// `(k, holds)` pairs. `ps` must cover `k_max`.
pub fn check_master_identity(
    ps: &PowerSums,
    n: usize,
    p: u64,
    k_max: usize,
) -> Result<Vec<(usize, bool)>> {
    if k_max > ps.k_max() {
        return Err(Error::InvalidInput(format!(
            "power sums cover k <= {}, need {k_max}",
            ps.k_max()
        )));
    }
    let m = Modulus::new(p)?;
    let binom = pascal_mod(2 * k_max, p);
    let mut results = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let coeff = (pow_mod(4, k as u64, m) + (4 * n as u64 + 2) % p) % p;
        let mut lhs = mul_mod(coeff, ps.s2k(k), m);
        for t in 1..k {
            let term = mul_mod(
                binom[2 * k][2 * t],
                mul_mod(ps.s2k(t), ps.s2k(k - t), m),
                m,
            );
            lhs = (lhs + 2 * term % p) % p;
        }
        let rhs = if (2 * k as u64) % (p - 1) == 0 { p - 1 } else { 0 };
        results.push((k, lhs == rhs));
    }
    Ok(results)
}

/// `e_k` for `k = 0..=n` via Newton's identities on `x_1^2, ..., x_n^2`:
/// `k e_k = sum_{t=1}^{k} (-1)^{t-1} e_{k-t} S_{2t}`. Valid since `p > n`.
pub fn newton_elementary(ps: &PowerSums, n: usize, p: u64) -> Result<ElementarySymmetric> {
    if ps.k_max() < n {
        return Err(Error::InvalidInput(format!(
            "power sums cover k <= {}, need {n}",
            ps.k_max()
        )));
    }
    let m = Modulus::new(p)?;
    let mut e = vec![0u64; n + 1];
    e[0] = 1 % p;
    for k in 1..=n {
        let mut acc = 0u64;
        for t in 1..=k {
            let term = mul_mod(e[k - t], ps.s2k(t), m);
            if t % 2 == 1 {
                acc = (acc + term) % p;
            } else {
                acc = (acc + p - term) % p;
            }
        }
        let k_inv = pow_mod(k as u64 % p, p - 2, m);
        e[k] = mul_mod(acc, k_inv, m);
    }
    Ok(ElementarySymmetric { p, n, e })
}

/// Instance check of the lemma chain on a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaChainReport {
    /// `(k, S_{2k} == 0)` for each checked `k < (p-1)/2` outside `X`.
    pub lemma6: Vec<(u64, bool)>,
    /// `(k, e_k == 0)` for each `k <= n` outside `X`.
    pub lemma7: Vec<(u64, bool)>,
    pub e_n_nonzero: bool,
    pub n_in_x: bool,
}

impl LemmaChainReport {
    pub fn all_pass(&self) -> bool {
        self.lemma6.iter().all(|&(_, ok)| ok)
            && self.lemma7.iter().all(|&(_, ok)| ok)
            && self.e_n_nonzero
            && self.n_in_x
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "lemma6": self.lemma6.iter()
                .map(|&(k, ok)| (k.to_string(), serde_json::Value::Bool(ok)))
                .collect::<serde_json::Map<_, _>>(),
            "lemma7": self.lemma7.iter()
                .map(|&(k, ok)| (k.to_string(), serde_json::Value::Bool(ok)))
                .collect::<serde_json::Map<_, _>>(),
            "e_n_nonzero": self.e_n_nonzero,
            "n_in_X": self.n_in_x,
        })
    }
}

/// Check, on a concrete witness with criterion exponents `a` and `b`:
/// `S_{2k} = 0` for `k` outside `X` up to `min((p-1)/2 - 1, k_cap)`,
/// `e_k = 0` for `k <= n` outside `X`, `e_n != 0`, and `n in X`. All four
/// hold for every valid witness; a failure indicates an implementation bug.
///
/// `k_cap` defaults to `2n + 4`; the full range `k < (p-1)/2` is `O(p)` and
/// exercised in tests for small `p`.
pub fn check_lemma_chain(
    w: &Witness,
    a: ExponentA,
    b: u64,
    k_cap: Option<u64>,
) -> Result<LemmaChainReport> {
    let w = Witness::new(w.n, w.x.clone())?; // reject invalid witnesses
    let n = w.n as u64;
    let p = w.p;
    let cap = k_cap.unwrap_or(2 * n + 4).min((p - 1) / 2 - 1);
    let k_max = cap.max(n) as usize;
    let ps = power_sums(&w.x, p, k_max)?;
    let es = newton_elementary(&ps, w.n, p)?;

    let lemma6 = (1..=cap)
        .filter(|&k| !x_set_member(k, a, b))
        .map(|k| (k, ps.s2k(k as usize) == 0))
        .collect();
    let lemma7 = (1..=n)
        .filter(|&k| !x_set_member(k, a, b))
        .map(|k| (k, es.e[k as usize] == 0))
        .collect();
    Ok(LemmaChainReport {
        lemma6,
        lemma7,
        e_n_nonzero: es.e[w.n] != 0,
        n_in_x: x_set_member(n, a, b),
    })
}
