//! Lee metric geometry in `Z^n` and `(Z/qZ)^n`, and Lee sphere enumeration.

use crate::{Error, Result};

/// A point of `Z^n` or, with a modulus in scope, of `(Z/qZ)^n` with
/// coordinates stored as canonical residues in `[0, q)`.
pub type Point = Vec<i64>;

/// An enumerated Lee sphere: all points of norm (or toroidal distance to
/// the origin) at most `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeeSphere {
    pub n: usize,
    pub e: u32,
    /// `None` for the `Z^n` sphere, `Some(q)` for its mod-`q` image.
    pub q: Option<u64>,
    /// Lexicographically sorted, no duplicates.
    pub points: Vec<Point>,
}

/// `sum_i |x_i|`.
pub fn lee_norm_z(x: &[i64]) -> u64 {
    x.iter().map(|&v| v.unsigned_abs()).sum()
}

/// `sum_i min(|x_i - y_i|, q - |x_i - y_i|)` on the torus `(Z/qZ)^n`.
pub fn lee_distance_torus(x: &[i64], y: &[i64], q: u64) -> Result<u64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(x.len(), y.len()));
    }
    Ok(x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            let d = (a - b).unsigned_abs() % q;
            d.min(q - d)
        })
        .sum())
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut result = 1u128;
    for i in 0..k.min(n - k) {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result as u64
}

/// `|S(n,e)| = sum_{k=0}^{min(n,e)} 2^k C(n,k) C(e,k)`.
///
/// For `e = 1` this is `2n + 1`, for `e = 2` it is `2n^2 + 2n + 1`.
pub fn sphere_size(n: u64, e: u64) -> u64 {
    (0..=n.min(e))
        .map(|k| (1u64 << k) * binomial(n, k) * binomial(e, k))
        .sum()
}

fn enumerate_rec(dims_left: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Point>) {
    if dims_left == 0 {
        out.push(prefix.clone());
        return;
    }
    for v in -budget..=budget {
        prefix.push(v);
        enumerate_rec(dims_left - 1, budget - v.abs(), prefix, out);
        prefix.pop();
    }
}

/// Enumerate `S(n,e)` or, when `q` is given, its image in `(Z/qZ)^n`.
///
/// Enumeration descends coordinate by coordinate with the remaining radius
/// budget, so cost is proportional to the sphere size and the `Z^n` output
/// is lexicographically sorted by construction. Requires `q >= 2e + 1`,
/// where the projection of `S(n,e)` onto the torus is injective.
pub fn enumerate_sphere(n: usize, e: u32, q: Option<u64>) -> Result<LeeSphere> {
    if n == 0 {
        return Err(Error::NOutOfRange);
    }
    if let Some(q) = q {
        if q < 2 * e as u64 + 1 {
            return Err(Error::ModulusTooSmall {
                q,
                min: 2 * e as u64 + 1,
            });
        }
    }
    let mut points = Vec::with_capacity(sphere_size(n as u64, e as u64) as usize);
    enumerate_rec(n, e as i64, &mut Vec::with_capacity(n), &mut points);
    if let Some(q) = q {
        let q = q as i64;
        for point in &mut points {
            for c in point.iter_mut() {
                *c = c.rem_euclid(q);
            }
        }
        points.sort();
    }
    Ok(LeeSphere { n, e, q, points })
}

impl LeeSphere {
    /// One point per line, space-separated coordinates, lexicographic order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for point in &self.points {
            let coords: Vec<String> = point.iter().map(|c| c.to_string()).collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        assert_eq!(lee_norm_z(&[0, 0, 0]), 0);
        assert_eq!(lee_norm_z(&[1, -1, 2]), 4);
    }

    #[test]
    fn torus_distance_examples() {
        assert_eq!(lee_distance_torus(&[0, 0], &[1, 4], 5).unwrap(), 2);
        assert_eq!(lee_distance_torus(&[3, 4], &[3, 4], 13).unwrap(), 0);
        assert_eq!(lee_distance_torus(&[0], &[6], 13).unwrap(), 6);
        assert!(lee_distance_torus(&[0], &[1, 2], 5).is_err());
    }

    #[test]
    fn norm_agrees_with_distance_for_large_q() {
        // projection: for q > 2*norm the toroidal distance to 0 equals the norm
        for x in [vec![1i64, -2, 0], vec![3, 3], vec![-4], vec![2, -1, 1, 0]] {
            let norm = lee_norm_z(&x);
            let q = 2 * norm + 5;
            let zero = vec![0i64; x.len()];
            assert_eq!(lee_distance_torus(&x, &zero, q).unwrap(), norm);
        }
    }

    #[test]
    fn sphere_size_closed_forms() {
        for n in 1..=10u64 {
            assert_eq!(sphere_size(n, 1), 2 * n + 1);
            assert_eq!(sphere_size(n, 2), 2 * n * n + 2 * n + 1);
        }
        assert_eq!(sphere_size(3, 3), 63);
    }

    // independent oracle: filter the whole box [-e, e]^n
    fn box_brute_force(n: usize, e: u32) -> Vec<Point> {
        let mut points = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &points {
                for v in -(e as i64)..=e as i64 {
                    let mut p2 = p.clone();
                    p2.push(v);
                    next.push(p2);
                }
            }
            points = next;
        }
        points.retain(|p| lee_norm_z(p) <= e as u64);
        points.sort();
        points
    }

    #[test]
    fn enumeration_matches_box_brute_force() {
        for n in 1..=6usize {
            for e in 0..=4u32 {
                let sphere = enumerate_sphere(n, e, None).unwrap();
                let brute = box_brute_force(n, e);
                assert_eq!(sphere.points, brute, "n={n} e={e}");
                assert_eq!(
                    sphere.points.len() as u64,
                    sphere_size(n as u64, e as u64),
                    "n={n} e={e}"
                );
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_and_symmetric() {
        for (n, e) in [(2usize, 2u32), (3, 3), (4, 2), (5, 2)] {
            let sphere = enumerate_sphere(n, e, None).unwrap();
            assert!(sphere.points.windows(2).all(|w| w[0] < w[1]));
            for p in &sphere.points {
                let neg: Point = p.iter().map(|&c| -c).collect();
                assert!(sphere.points.binary_search(&neg).is_ok());
            }
        }
    }

    #[test]
    fn small_sphere_examples() {
        assert_eq!(enumerate_sphere(2, 2, None).unwrap().points.len(), 13);
        let s = enumerate_sphere(1, 0, None).unwrap();
        assert_eq!(s.points, vec![vec![0]]);
        assert_eq!(enumerate_sphere(5, 2, None).unwrap().points.len(), 61);
    }

    #[test]
    fn torus_projection_is_injective() {
        for n in 1..=4usize {
            for e in 0..=3u32 {
                for q in [2 * e as u64 + 1, 2 * e as u64 + 2, 13] {
                    let z_sphere = enumerate_sphere(n, e, None).unwrap();
                    let t_sphere = enumerate_sphere(n, e, Some(q)).unwrap();
                    assert_eq!(z_sphere.points.len(), t_sphere.points.len());
                    assert!(t_sphere.points.windows(2).all(|w| w[0] < w[1]));
                    for p in &t_sphere.points {
                        assert!(p.iter().all(|&c| c >= 0 && (c as u64) < q));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_small_modulus() {
        assert!(enumerate_sphere(2, 2, Some(4)).is_err());
        assert!(enumerate_sphere(2, 2, Some(5)).is_ok());
    }

    #[test]
    fn dump_format() {
        let s = enumerate_sphere(2, 1, None).unwrap();
        assert_eq!(s.dump(), "-1 0\n0 -1\n0 0\n0 1\n1 0\n");
    }

    #[test]
    fn metric_properties_on_sampled_triples() {
        let q = 11u64;
        let points: Vec<Point> = (0..q as i64)
            .flat_map(|a| (0..q as i64).map(move |b| vec![a, b]))
            .collect();
        // sampled triples with a fixed stride
        for (i, x) in points.iter().enumerate().step_by(7) {
            for (j, y) in points.iter().enumerate().step_by(11) {
                let dxy = lee_distance_torus(x, y, q).unwrap();
                assert_eq!(dxy, lee_distance_torus(y, x, q).unwrap());
                assert_eq!(dxy == 0, i == j);
                for z in points.iter().step_by(13) {
                    let dxz = lee_distance_torus(x, z, q).unwrap();
                    let dzy = lee_distance_torus(z, y, q).unwrap();
                    assert!(dxy <= dxz + dzy);
                }
            }
        }
    }
}
