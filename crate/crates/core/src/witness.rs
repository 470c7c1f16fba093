//! Exhaustive, symmetry-reduced backtracking search for homomorphism
//! witnesses: vectors `x = (x_1, ..., x_n)` over `Z/pZ`, `p = 2n^2+2n+1`
//! prime, such that `{0}, {±x_i}, {±2x_i}, {±x_i±x_j}` partition `Z/pZ`.
//!
//! A completed traversal with no witness is a certificate that no tiling of
//! `Z^n` by the radius-2 Lee sphere exists, independently of the modular
//! criterion.

use crate::codes::{verify_homomorphism_bijective, CodeSpec, Repr};
use crate::criterion::p_of_n;
use crate::modular::is_prime;
use crate::{Error, Result};

/// A verified witness vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub n: usize,
    pub p: u64,
    pub x: Vec<u64>,
}

impl Witness {
    pub fn new(n: usize, x: Vec<u64>) -> Result<Self> {
        let p = p_of_n(n as u64);
        if !is_prime(p) {
            return Err(Error::CompositeModulus { n: n as u64, p });
        }
        if x.len() != n {
            return Err(Error::DimensionMismatch(x.len(), n));
        }
        if x.iter().any(|&v| v % p == 0) {
            return Err(Error::InvalidWitness("zero coordinate".into()));
        }
        if !verify_homomorphism_bijective(p, n, &x) {
            return Err(Error::InvalidWitness(format!(
                "values collide mod {p}: {x:?}"
            )));
        }
        Ok(Witness {
            n,
            p,
            x: x.into_iter().map(|v| v % p).collect(),
        })
    }
}

/// Result of a search run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Canonical forms, deduplicated, sorted.
    pub witnesses: Vec<Witness>,
    /// True iff the whole (symmetry-reduced) space was traversed without
    /// hitting a node limit or an early stop.
    pub exhausted: bool,
    pub nodes_explored: u64,
    pub symmetry_note: String,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Keep searching after the first witness.
    pub find_all: bool,
    /// Abort (with `exhausted = false`) after this many placement attempts.
    pub node_limit: Option<u64>,
    /// Apply scaling / permutation / sign-flip reduction. Disable for
    /// brute-force cross-checks.
    pub use_symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            find_all: true,
            node_limit: None,
            use_symmetry: true,
        }
    }
}

struct SearchState {
    n: usize,
    p: u64,
    opts: SearchOptions,
    occupied: Vec<bool>,
    x: Vec<u64>,
    found: Vec<Vec<u64>>,
    nodes: u64,
    truncated: bool,
    stop: bool,
}

impl SearchState {
    // Residues marked when x_i = v is placed at depth i, in fixed order:
    // ±v, ±2v, then ±x_j ± v for j < i ascending. Fixed order keeps node
    // counts reproducible.
    fn marks_for(&self, depth: usize, v: u64) -> Vec<u64> {
        let p = self.p;
        let mut marks = Vec::with_capacity(4 + 4 * depth);
        marks.push(v);
        marks.push(p - v);
        marks.push(2 * v % p);
        marks.push((p - 2 * v % p) % p);
        for j in 0..depth {
            let xj = self.x[j];
            marks.push((xj + v) % p);
            marks.push((xj + p - v) % p);
            marks.push((p - xj + v) % p);
            marks.push((2 * p - xj - v) % p);
        }
        marks
    }

    // Collision check precedes any mutation, so a failed placement leaves
    // the mask untouched.
    fn try_place(&mut self, depth: usize, v: u64) -> Option<Vec<u64>> {
        let marks = self.marks_for(depth, v);
        for (i, &m) in marks.iter().enumerate() {
            if self.occupied[m as usize] || marks[..i].contains(&m) {
                return None;
            }
        }
        for &m in &marks {
            self.occupied[m as usize] = true;
        }
        Some(marks)
    }

    fn unplace(&mut self, marks: &[u64]) {
        for &m in marks {
            self.occupied[m as usize] = false;
        }
    }

    fn dfs(&mut self, depth: usize) {
        if self.stop {
            return;
        }
        if depth == self.n {
            self.found.push(self.x[..self.n].to_vec());
            if !self.opts.find_all {
                self.stop = true;
            }
            return;
        }
        let (lo, hi) = if self.opts.use_symmetry {
            match depth {
                0 => (1, 1),                             // scaling: x_1 = 1
                1 => (2, (self.p - 1) / 2),              // sign fold + order
                _ => (self.x[depth - 1] + 1, (self.p - 1) / 2),
            }
        } else {
            (1, self.p - 1)
        };
        for v in lo..=hi {
            if let Some(limit) = self.opts.node_limit {
                if self.nodes >= limit {
                    self.truncated = true;
                    self.stop = true;
                    return;
                }
            }
            self.nodes += 1;
            if let Some(marks) = self.try_place(depth, v) {
                self.x[depth] = v;
                self.dfs(depth + 1);
                self.unplace(&marks);
                if self.stop {
                    return;
                }
            }
        }
    }
}

/// Depth-first search over witness vectors for dimension `n`.
///
/// With symmetry reduction on, the traversal fixes `x_1 = 1` (global
/// scaling), keeps each coordinate in `[1, (p-1)/2]` (sign flips), and
/// requires `x_2 < x_3 < ... < x_n` (coordinate permutations); every
/// equivalence class of witnesses contains a vector of this shape, so a
/// completed traversal finding none certifies that no witness exists at
/// all. Returned witnesses are canonicalized and deduplicated either way.
pub fn search(n: usize, opts: &SearchOptions) -> Result<SearchOutcome> {
    if n == 0 {
        return Err(Error::NOutOfRange);
    }
    let p = p_of_n(n as u64);
    if !is_prime(p) {
        return Err(Error::CompositeModulus { n: n as u64, p });
    }
    let mut occupied = vec![false; p as usize];
    occupied[0] = true; // 0 is its own partition class
    let mut state = SearchState {
        n,
        p,
        opts: *opts,
        occupied,
        x: vec![0; n],
        found: Vec::new(),
        nodes: 0,
        truncated: false,
        stop: false,
    };
    state.dfs(0);

    let mut witnesses = Vec::with_capacity(state.found.len());
    for x in state.found {
        let w = Witness::new(n, x)?; // independent re-verification
        witnesses.push(canonicalize(&w));
    }
    witnesses.sort();
    witnesses.dedup();
    Ok(SearchOutcome {
        witnesses,
        exhausted: !state.truncated,
        nodes_explored: state.nodes,
        symmetry_note: if opts.use_symmetry {
            format!(
                "reduced: x_1 = 1 (scaling), x_i <= (p-1)/2 (sign flips), \
                 x_2 < ... < x_n (permutations); p = {p}"
            )
        } else {
            format!("no symmetry reduction; full ({})^{n} space", p - 1)
        },
    })
}

fn fold(v: u64, p: u64) -> u64 {
    let v = v % p;
    v.min(p - v)
}

/// The unique orbit representative under scaling, coordinate permutation
/// and per-coordinate sign flips: the lexicographically least sorted
/// sign-folded vector over all nonzero scalings. Idempotent.
pub fn canonicalize(w: &Witness) -> Witness {
    let p = w.p;
    let mut best: Option<Vec<u64>> = None;
    for c in 1..p {
        let mut scaled: Vec<u64> = w
            .x
            .iter()
            .map(|&xi| fold((c as u128 * xi as u128 % p as u128) as u64, p))
            .collect();
        scaled.sort_unstable();
        if best.as_ref().map_or(true, |b| &scaled < b) {
            best = Some(scaled);
        }
    }
    Witness {
        n: w.n,
        p,
        x: best.expect("p >= 2"),
    }
}

/// Turn a witness into its homomorphism code in `(Z/pZ)^n`.
pub fn witness_to_code(w: &Witness) -> Result<CodeSpec> {
    // reject anything that does not re-verify
    let w = Witness::new(w.n, w.x.clone())?;
    Ok(CodeSpec {
        n: w.n,
        e: 2,
        q: w.p,
        repr: Repr::Homomorphism { p: w.p, x: w.x },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{verify, VerificationResult};

    #[test]
    fn n1_forced_witness() {
        let outcome = search(1, &SearchOptions::default()).unwrap();
        assert!(outcome.exhausted);
        assert_eq!(outcome.witnesses.len(), 1);
        assert_eq!(outcome.witnesses[0].x, vec![1]); // {0,±1,±2} = Z/5
    }

    #[test]
    fn n2_finds_witness() {
        let outcome = search(2, &SearchOptions::default()).unwrap();
        assert!(outcome.exhausted);
        assert!(!outcome.witnesses.is_empty());
        let canonical_15 = canonicalize(&Witness::new(2, vec![1, 5]).unwrap());
        assert!(outcome.witnesses.contains(&canonical_15));
    }

    #[test]
    fn n2_brute_force_cross_check() {
        // independent double loop over all of ((Z/13Z) \ {0})^2
        let mut brute = Vec::new();
        for x1 in 1..13u64 {
            for x2 in 1..13u64 {
                if verify_homomorphism_bijective(13, 2, &[x1, x2]) {
                    brute.push(canonicalize(&Witness::new(2, vec![x1, x2]).unwrap()));
                }
            }
        }
        brute.sort();
        brute.dedup();
        assert!(!brute.is_empty());

        let no_sym = SearchOptions {
            use_symmetry: false,
            ..SearchOptions::default()
        };
        let raw = search(2, &no_sym).unwrap();
        assert!(raw.exhausted);
        assert_eq!(raw.witnesses, brute);

        let reduced = search(2, &SearchOptions::default()).unwrap();
        assert_eq!(reduced.witnesses, brute);
    }

    #[test]
    fn n3_exhausted_no_witness() {
        let outcome = search(3, &SearchOptions::default());
        // p = 25 composite: search must refuse
        assert!(matches!(outcome, Err(Error::CompositeModulus { .. })));
    }

    #[test]
    fn n4_exhausted_zero_witnesses() {
        let outcome = search(4, &SearchOptions::default()).unwrap();
        assert!(outcome.exhausted);
        assert!(outcome.witnesses.is_empty());
    }

    #[test]
    fn node_limit_reports_truncation() {
        let outcome = search(5, &SearchOptions {
            node_limit: Some(3),
            ..SearchOptions::default()
        })
        .unwrap();
        assert!(!outcome.exhausted);
        assert!(outcome.nodes_explored <= 3);
    }

    #[test]
    fn node_counts_reproducible() {
        let a = search(4, &SearchOptions::default()).unwrap();
        let b = search(4, &SearchOptions::default()).unwrap();
        assert_eq!(a.nodes_explored, b.nodes_explored);
    }

    #[test]
    fn canonicalize_orbit_examples() {
        let w15 = canonicalize(&Witness::new(2, vec![1, 5]).unwrap());
        for x in [vec![5u64, 1], vec![12, 5], vec![2, 10]] {
            let w = Witness::new(2, x.clone()).unwrap();
            assert_eq!(canonicalize(&w), w15, "orbit member {x:?}");
        }
    }

    #[test]
    fn canonicalize_idempotent() {
        for x1 in 1..13u64 {
            for x2 in 1..13u64 {
                if let Ok(w) = Witness::new(2, vec![x1, x2]) {
                    let c = canonicalize(&w);
                    assert_eq!(canonicalize(&c), c);
                }
            }
        }
    }

    #[test]
    fn witness_to_code_round_trip() {
        let w = Witness::new(2, vec![1, 5]).unwrap();
        let code = witness_to_code(&w).unwrap();
        assert_eq!(verify(&code).unwrap(), VerificationResult::Perfect);

        let w1 = Witness::new(1, vec![1]).unwrap();
        let code1 = witness_to_code(&w1).unwrap();
        assert_eq!(verify(&code1).unwrap(), VerificationResult::Perfect);
    }

    #[test]
    fn invalid_witness_rejected() {
        assert!(Witness::new(2, vec![1, 1]).is_err());
        assert!(Witness::new(2, vec![0, 5]).is_err());
        assert!(Witness::new(2, vec![1]).is_err());
        assert!(Witness::new(3, vec![1, 2, 3]).is_err()); // p = 25 composite
    }
}
