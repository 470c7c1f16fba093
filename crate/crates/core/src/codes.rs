//! Lee code representations, exact tiling verification, lift/projection
//! between `(Z/qZ)^n` and `Z^n`, and the Golomb-Welch constructions.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::lee::{enumerate_sphere, lee_distance_torus, Point};
use crate::{Error, Result};

/// Default ceiling on `q^n` for full coverage verification.
pub const DEFAULT_VERIFY_GUARD: u64 = 1_000_000_000;

/// A candidate code in `(Z/qZ)^n` with sphere radius `e`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    pub e: u32,
    pub q: u64,
    pub repr: Repr,
}

/// The three code representations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Repr {
    /// `C = { v : sum_i v_i x_i = 0 (mod p) }` with `q = p`.
    Homomorphism { p: u64, x: Vec<u64> },
    /// Explicit center list.
    Centers { points: Vec<Point> },
    /// Row-basis lattice: `C` is the mod-`q` image of the integer row span
    /// of `basis`; valid only when `q Z^n` is contained in that span.
    Lattice { basis: Vec<Vec<i64>> },
}

/// Outcome of tiling verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerificationResult {
    /// Every torus point covered exactly once.
    Perfect,
    /// Spheres pairwise disjoint but some point uncovered; carries the
    /// lexicographically least uncovered point.
    PackingOnly { uncovered: Point },
    /// Some point covered at least twice; carries the lexicographically
    /// least such point and two centers whose spheres both contain it.
    NotPacking { point: Point, centers: [Point; 2] },
}

impl VerificationResult {
    pub fn status(&self) -> &'static str {
        match self {
            VerificationResult::Perfect => "perfect",
            VerificationResult::PackingOnly { .. } => "packing_only",
            VerificationResult::NotPacking { .. } => "not_packing",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            VerificationResult::Perfect => json!({"status": "perfect", "witness": null}),
            VerificationResult::PackingOnly { uncovered } => json!({
                "status": "packing_only",
                "witness": {"uncovered": uncovered},
            }),
            VerificationResult::NotPacking { point, centers } => json!({
                "status": "not_packing",
                "witness": {"point": point, "centers": centers},
            }),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// inverse of a mod q for gcd(a, q) = 1, by extended Euclid
fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (t0, t1) = (t1, t0 - quot * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(q as i128) as u64)
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0i128;
    for col in 0..n {
        let minor: Vec<Vec<i128>> = (1..n)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != col)
                    .map(|c| m[r][c])
                    .collect()
            })
            .collect();
        let term = m[0][col] * det_i128(&minor);
        if col % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn checked_pow(q: u64, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

fn validate_dims(code: &CodeSpec) -> Result<()> {
    if code.n == 0 {
        return Err(Error::NOutOfRange);
    }
    if code.q < 2 * code.e as u64 + 1 {
        return Err(Error::ModulusTooSmall {
            q: code.q,
            min: 2 * code.e as u64 + 1,
        });
    }
    Ok(())
}

/// Expand a code to its explicit, sorted, deduplicated center list in
/// `(Z/qZ)^n`, coordinates canonical in `[0, q)`.
pub fn materialize(code: &CodeSpec) -> Result<Vec<Point>> {
    validate_dims(code)?;
    let n = code.n;
    let q = code.q;
    let mut centers = match &code.repr {
        Repr::Centers { points } => {
            for p in points {
                if p.len() != n {
                    return Err(Error::DimensionMismatch(p.len(), n));
                }
            }
            points
                .iter()
                .map(|p| p.iter().map(|&c| c.rem_euclid(q as i64)).collect())
                .collect()
        }
        Repr::Homomorphism { p, x } => {
            if *p != q {
                return Err(Error::InvalidInput(format!(
                    "homomorphism modulus p={p} must equal q={q}"
                )));
            }
            if x.len() != n {
                return Err(Error::DimensionMismatch(x.len(), n));
            }
            materialize_homomorphism(n, q, x)?
        }
        Repr::Lattice { basis } => materialize_lattice(n, q, basis)?,
    };
    centers.sort();
    centers.dedup();
    if centers.is_empty() {
        return Err(Error::InvalidInput("empty code".into()));
    }
    Ok(centers)
}

// Solutions of sum v_i x_i = 0 (mod q). With an invertible coordinate the
// others range freely (q^{n-1} centers); otherwise fall back to filtering
// the whole torus.
fn materialize_homomorphism(n: usize, q: u64, x: &[u64]) -> Result<Vec<Point>> {
    let pivot = x.iter().position(|&xi| gcd(xi % q, q) == 1);
    match pivot {
        Some(i) => {
            let count = checked_pow(q, n - 1);
            if count > DEFAULT_VERIFY_GUARD as u128 {
                return Err(Error::VerificationTooLarge {
                    size: count,
                    guard: DEFAULT_VERIFY_GUARD,
                });
            }
            let inv = inv_mod(x[i], q).expect("pivot is invertible");
            let mut centers = Vec::with_capacity(count as usize);
            let mut free = vec![0u64; n - 1];
            loop {
                let mut acc = 0u64;
                let mut fi = 0;
                for (j, &xj) in x.iter().enumerate() {
                    if j != i {
                        acc = (acc + free[fi] % q * (xj % q)) % q;
                        fi += 1;
                    }
                }
                let vi = (q - acc % q) % q * inv % q;
                let mut point = Vec::with_capacity(n);
                let mut fi = 0;
                for j in 0..n {
                    if j == i {
                        point.push(vi as i64);
                    } else {
                        point.push(free[fi] as i64);
                        fi += 1;
                    }
                }
                centers.push(point);
                // odometer over the free coordinates
                let mut k = n - 1;
                loop {
                    if k == 0 {
                        return Ok(centers);
                    }
                    k -= 1;
                    free[k] += 1;
                    if free[k] < q {
                        break;
                    }
                    free[k] = 0;
                    if k == 0 {
                        return Ok(centers);
                    }
                }
            }
        }
        None => {
            // no invertible coefficient; enumerate the full torus
            let size = checked_pow(q, n);
            if size > DEFAULT_VERIFY_GUARD as u128 {
                return Err(Error::VerificationTooLarge {
                    size,
                    guard: DEFAULT_VERIFY_GUARD,
                });
            }
            let mut centers = Vec::new();
            let mut v = vec![0u64; n];
            'outer: loop {
                let acc = v
                    .iter()
                    .zip(x)
                    .fold(0u64, |acc, (&vi, &xi)| (acc + vi * (xi % q)) % q);
                if acc == 0 {
                    centers.push(v.iter().map(|&c| c as i64).collect());
                }
                let mut k = n;
                loop {
                    if k == 0 {
                        break 'outer;
                    }
                    k -= 1;
                    v[k] += 1;
                    if v[k] < q {
                        break;
                    }
                    v[k] = 0;
                    if k == 0 {
                        break 'outer;
                    }
                }
            }
            Ok(centers)
        }
    }
}

// Mod-q image of the row span of `basis`. Coefficient vectors range over
// [0, q)^n since q * row = 0 on the torus. The image is a valid code
// representation only if q Z^n lies inside the row span, which holds
// exactly when the image has q^n / |det| elements.
fn materialize_lattice(n: usize, q: u64, basis: &[Vec<i64>]) -> Result<Vec<Point>> {
    if basis.len() != n || basis.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput(format!("basis must be {n}x{n}")));
    }
    let m: Vec<Vec<i128>> = basis
        .iter()
        .map(|row| row.iter().map(|&v| v as i128).collect())
        .collect();
    let det = det_i128(&m).unsigned_abs();
    if det == 0 {
        return Err(Error::InvalidInput("lattice basis is singular".into()));
    }
    let size = checked_pow(q, n);
    if size > DEFAULT_VERIFY_GUARD as u128 {
        return Err(Error::VerificationTooLarge {
            size,
            guard: DEFAULT_VERIFY_GUARD,
        });
    }
    if size % det != 0 {
        return Err(Error::InvalidInput(format!(
            "|det B| = {det} does not divide q^n = {size}; q Z^n is not a sublattice"
        )));
    }
    let expected = (size / det) as usize;

    let mut seen = std::collections::BTreeSet::new();
    let mut coeff = vec![0i64; n];
    'outer: loop {
        let mut point = vec![0i64; n];
        for (c, row) in coeff.iter().zip(basis) {
            for (pc, &rv) in point.iter_mut().zip(row) {
                *pc = (*pc + (c * rv).rem_euclid(q as i64)).rem_euclid(q as i64);
            }
        }
        seen.insert(point);
        let mut k = n;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            coeff[k] += 1;
            if (coeff[k] as u64) < q {
                break;
            }
            coeff[k] = 0;
            if k == 0 {
                break 'outer;
            }
        }
    }
    if seen.len() != expected {
        return Err(Error::InvalidInput(format!(
            "lattice image has {} points, expected q^n/|det| = {expected}; \
             q Z^n is not contained in the row span",
            seen.len()
        )));
    }
    Ok(seen.into_iter().collect())
}

fn point_index(point: &[i64], q: u64) -> usize {
    point
        .iter()
        .fold(0usize, |acc, &c| acc * q as usize + c as usize)
}

fn index_point(mut idx: usize, n: usize, q: u64) -> Point {
    let mut point = vec![0i64; n];
    for c in point.iter_mut().rev() {
        *c = (idx % q as usize) as i64;
        idx /= q as usize;
    }
    point
}

/// Exact tiling verification with the default size guard.
pub fn verify(code: &CodeSpec) -> Result<VerificationResult> {
    verify_with_guard(code, DEFAULT_VERIFY_GUARD)
}

/// Exact tiling verification by counting, per torus point, how many
/// translated spheres cover it. Needs `q^n` bytes of bookkeeping; inputs
/// beyond `guard` are rejected with an error rather than a verdict.
pub fn verify_with_guard(code: &CodeSpec, guard: u64) -> Result<VerificationResult> {
    validate_dims(code)?;
    let size = checked_pow(code.q, code.n);
    if size > guard as u128 {
        return Err(Error::VerificationTooLarge { size, guard });
    }
    let size = size as usize;
    let centers = materialize(code)?;
    let offsets = enumerate_sphere(code.n, code.e, None)?.points;
    let q = code.q as i64;

    // counts saturate at 2; only 0 / 1 / >=2 matter
    let mut coverage = vec![0u8; size];
    for center in &centers {
        let mut shifted = vec![0i64; code.n];
        for offset in &offsets {
            for ((s, &c), &o) in shifted.iter_mut().zip(center).zip(offset) {
                *s = (c + o).rem_euclid(q);
            }
            let slot = &mut coverage[point_index(&shifted, code.q)];
            *slot = (*slot).saturating_add(1).min(2);
        }
    }

    // point indexing is lexicographic, so the first hit is the least witness
    if let Some(idx) = coverage.iter().position(|&c| c >= 2) {
        let point = index_point(idx, code.n, code.q);
        let mut hits = Vec::with_capacity(2);
        for center in &centers {
            if lee_distance_torus(center, &point, code.q)? <= code.e as u64 {
                hits.push(center.clone());
                if hits.len() == 2 {
                    break;
                }
            }
        }
        let [first, second] = <[Point; 2]>::try_from(hits).expect("two covering centers exist");
        return Ok(VerificationResult::NotPacking {
            point,
            centers: [first, second],
        });
    }
    if let Some(idx) = coverage.iter().position(|&c| c == 0) {
        return Ok(VerificationResult::PackingOnly {
            uncovered: index_point(idx, code.n, code.q),
        });
    }
    Ok(VerificationResult::Perfect)
}

/// True iff the `2n^2 + 2n + 1` values `0, ±x_i, ±2x_i, ±x_i±x_j (i < j)`
/// are pairwise distinct mod `p`, i.e. the homomorphism sending the `i`-th
/// unit vector to `x_i` is bijective on the radius-2 Lee sphere.
///
/// This is the `O(n^2)` surrogate for full tiling verification when `q^n`
/// is infeasible: for `p = |S(n,2)|` prime, bijectivity on the sphere is
/// equivalent to the induced code tiling the torus.
pub fn verify_homomorphism_bijective(p: u64, n: usize, x: &[u64]) -> bool {
    debug_assert_eq!(p, 2 * (n as u64) * (n as u64) + 2 * n as u64 + 1);
    let mut seen = vec![false; p as usize];
    let mut mark = |v: u64| -> bool {
        let v = (v % p) as usize;
        if seen[v] {
            return false;
        }
        seen[v] = true;
        true
    };
    if !mark(0) {
        return false;
    }
    for &xi in x {
        let xi = xi % p;
        for v in [xi, p - xi, 2 * xi % p, (p - 2 * xi % p) % p] {
            if !mark(v % p) {
                return false;
            }
        }
    }
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            let (a, b) = (x[i] % p, x[j] % p);
            for v in [a + b, a + p - b, p - a + b, 2 * p - a - b] {
                if !mark(v % p) {
                    return false;
                }
            }
        }
    }
    true
}

/// The three classical Golomb-Welch constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GwKind {
    /// `PL(1, e, 2e+1)`: the single center 0 in `Z/(2e+1)`.
    Dim1 { e: u32 },
    /// `PL(2, e, 2e^2+2e+1)`: lattice with basis rows `(e+1, e)`, `(-e, e+1)`.
    Dim2 { e: u32 },
    /// `PL(n, 1, 2n+1)`: kernel of `v -> sum i * v_i mod (2n+1)`.
    Radius1 { n: usize },
}

/// Build a Golomb-Welch code. Perfectness is established by [`verify`],
/// never assumed.
pub fn construct_gw(kind: GwKind) -> CodeSpec {
    match kind {
        GwKind::Dim1 { e } => CodeSpec {
            n: 1,
            e,
            q: 2 * e as u64 + 1,
            repr: Repr::Centers {
                points: vec![vec![0]],
            },
        },
        GwKind::Dim2 { e } => {
            let e64 = e as i64;
            CodeSpec {
                n: 2,
                e,
                q: (2 * e64 * e64 + 2 * e64 + 1) as u64,
                repr: Repr::Lattice {
                    basis: vec![vec![e64 + 1, e64], vec![-e64, e64 + 1]],
                },
            }
        }
        GwKind::Radius1 { n } => CodeSpec {
            n,
            e: 1,
            q: 2 * n as u64 + 1,
            repr: Repr::Homomorphism {
                p: 2 * n as u64 + 1,
                x: (1..=n as u64).collect(),
            },
        },
    }
}

/// A `Z^n` code described by finitely many coset representatives of
/// `q Z^n`: the code is the union of their `q`-translates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedCode {
    pub n: usize,
    pub e: u32,
    pub q: u64,
    pub representatives: Vec<Point>,
}

/// Lift a torus code to `Z^n` (canonical coset representatives of `q Z^n`).
pub fn lift_code(code: &CodeSpec) -> Result<LiftedCode> {
    let representatives = materialize(code)?;
    Ok(LiftedCode {
        n: code.n,
        e: code.e,
        q: code.q,
        representatives,
    })
}

/// Project coset representatives back to an explicit torus code.
pub fn project_code(representatives: &[Point], q: u64, n: usize, e: u32) -> CodeSpec {
    CodeSpec {
        n,
        e,
        q,
        repr: Repr::Centers {
            points: representatives.to_vec(),
        },
    }
}
