//! Dihedral angles of a hyper-ideal tetrahedron and the derivative matrices
//! entering the curvature Hessian.
//!
//! The dihedral angle at edge `ab` equals the angle of the vertex triangle at
//! `a` between its sides on the hexagons `abq` and `abs`. Everything is
//! evaluated in cosh-space (hexagon law, then the triangle cosine law on the
//! cosines), which keeps the chain rule for `∂β/∂l` short.

use super::{complement, slot, TetLengths, TetRadii, TetWeights, SLOTS};
use crate::hyptrig::{self, EPS_GEOM};
use crate::{Error, Result};
use nalgebra::{Matrix2, Matrix6, SMatrix};

/// Agreement required between the apex-`a` and apex-`b` evaluations of the
/// dihedral angle at edge `ab`.
pub const CROSS_CHECK_TOL: f64 = 1e-7;

struct LengthCache {
    len: [f64; 6],
    cosh: [f64; 6],
    sinh: [f64; 6],
}

impl LengthCache {
    fn new(lengths: &TetLengths) -> Self {
        let l = lengths.values();
        Self {
            len: l,
            cosh: l.map(f64::cosh),
            sinh: l.map(f64::sinh),
        }
    }

    /// `cosh x^nu_pq − 1` and the gradient of `cosh x^nu_pq` in the three
    /// lengths it depends on. Large radii make vertex triangles tiny, so the
    /// offset from 1 is formed without cancellation.
    fn vertex_side(&self, nu: usize, p: usize, q: usize) -> (f64, [(usize, f64); 3]) {
        let (s1, s2, s3) = (slot(nu, p), slot(nu, q), slot(p, q));
        let (c1, c2, c3) = (self.cosh[s1], self.cosh[s2], self.cosh[s3]);
        let (sh1, sh2, sh3) = (self.sinh[s1], self.sinh[s2], self.sinh[s3]);
        let u = ((self.len[s1] - self.len[s2]).cosh() + c3) / (sh1 * sh2);
        let grad = [
            (s1, -(c2 + c1 * c3) / (sh1 * sh1 * sh2)),
            (s2, -(c1 + c2 * c3) / (sh2 * sh2 * sh1)),
            (s3, sh3 / (sh1 * sh2)),
        ];
        (u, grad)
    }

    /// Dihedral angle at edge `ab` evaluated in the vertex triangle at `a`,
    /// plus (optionally) its gradient with respect to all six lengths.
    fn angle_at(&self, a: usize, b: usize, want_grad: bool) -> Result<(f64, [f64; 6])> {
        let (q, s) = complement(a, b);
        let (u1, g1) = self.vertex_side(a, b, q);
        let (u2, g2) = self.vertex_side(a, b, s);
        let (u3, g3) = self.vertex_side(a, q, s);
        // triangle_gram(1 + u1, 1 + u2, 1 + u3) with the constant terms cancelled
        let gram =
            2.0 * (u1 * u2 + u2 * u3 + u3 * u1) + 2.0 * u1 * u2 * u3 - u1 * u1 - u2 * u2 - u3 * u3;
        let sh1_sq = u1 * (u1 + 2.0);
        let sh2_sq = u2 * (u2 + 2.0);
        if !(gram > EPS_GEOM * sh1_sq * sh2_sq) {
            return Err(Error::DegenerateTetrahedron { apex: a });
        }
        let numer = u1 + u2 + u1 * u2 - u3;
        let angle = gram.sqrt().atan2(numer);

        let mut grad = [0.0; 6];
        if want_grad {
            let (sh1, sh2) = (sh1_sq.sqrt(), sh2_sq.sqrt());
            let sin = gram.sqrt() / (sh1 * sh2);
            let du = [
                (u1 + u3 + u1 * u3 - u2) / (sh1_sq * sh1 * sh2),
                (u2 + u3 + u2 * u3 - u1) / (sh2_sq * sh2 * sh1),
                -1.0 / (sh1 * sh2),
            ];
            for (k, g) in [g1, g2, g3].iter().enumerate() {
                for &(slot, dx) in g {
                    grad[slot] -= du[k] * dx / sin;
                }
            }
        }
        Ok((angle, grad))
    }
}

/// The six dihedral angles in slot order.
///
/// Each angle is evaluated at both of its apexes; a disagreement beyond
/// [`CROSS_CHECK_TOL`] is reported as [`Error::CrossCheckFailure`].
pub fn dihedral_angles(lengths: &TetLengths) -> Result<[f64; 6]> {
    dihedral_angles_checked(lengths).map(|(angles, _)| angles)
}

/// Dihedral angles together with the largest apex-to-apex discrepancy.
pub fn dihedral_angles_checked(lengths: &TetLengths) -> Result<([f64; 6], f64)> {
    let cache = LengthCache::new(lengths);
    let mut angles = [0.0; 6];
    let mut worst: f64 = 0.0;
    for (s, &(a, b)) in SLOTS.iter().enumerate() {
        let (first, _) = cache.angle_at(a, b, false)?;
        let (second, _) = cache.angle_at(b, a, false)?;
        let gap = (first - second).abs();
        if gap > CROSS_CHECK_TOL {
            return Err(Error::CrossCheckFailure {
                slot: s,
                first,
                second,
            });
        }
        worst = worst.max(gap);
        angles[s] = first;
    }
    Ok((angles, worst))
}

/// `(∂β/∂l)`: row `s` is the gradient of the dihedral angle at slot `s`.
pub fn dbeta_dl(lengths: &TetLengths) -> Result<Matrix6<f64>> {
    let cache = LengthCache::new(lengths);
    let mut m = Matrix6::zeros();
    for (s, &(a, b)) in SLOTS.iter().enumerate() {
        // the apex-b triangle must be valid too
        cache.angle_at(b, a, false)?;
        let (_, grad) = cache.angle_at(a, b, true)?;
        for (col, g) in grad.iter().enumerate() {
            m[(s, col)] = *g;
        }
    }
    Ok(m)
}

/// `(∂l/∂r)`: a 4×6 matrix with `cosh θ_ab` (the factor at the `ν` end) at
/// row `ν`, column `ab` whenever `ν ∈ {a, b}`.
pub fn dl_dr(radii: &TetRadii, weights: &TetWeights) -> Result<SMatrix<f64, 4, 6>> {
    let r = radii.values();
    let cos = weights.cosines();
    let mut m = SMatrix::<f64, 4, 6>::zeros();
    for (s, &(a, b)) in SLOTS.iter().enumerate() {
        m[(a, s)] = hyptrig::pentagon_cosh_theta_cos(r[a], r[b], cos[s])?;
        m[(b, s)] = hyptrig::pentagon_cosh_theta_cos(r[b], r[a], cos[s])?;
    }
    Ok(m)
}

/// Hessian of `l_ij` in `(r_i, r_j)`:
/// `−sin²Φ / sinh³l · [[cosh l cosh² r_j, cosh r_i cosh r_j], [·, cosh l cosh² r_i]]`.
pub fn hess_edge_length(r_i: f64, r_j: f64, phi: f64) -> Result<Matrix2<f64>> {
    let l = hyptrig::pentagon_edge_length(r_i, r_j, phi)?;
    let sin2 = phi.sin().powi(2);
    let scale = -sin2 / l.sinh().powi(3);
    let (ci, cj, cl) = (r_i.cosh(), r_j.cosh(), l.cosh());
    Ok(Matrix2::new(cl * cj * cj, ci * cj, ci * cj, cl * ci * ci) * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trunctet::lengths_from_radii;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    const BETA_REGULAR_2: f64 = 0.956_191_756_566_071_1;

    fn fd_dihedral(lengths: &TetLengths, h: f64) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        let l = lengths.values();
        for col in 0..6 {
            let mut plus = l;
            let mut minus = l;
            plus[col] += h;
            minus[col] -= h;
            let bp = dihedral_angles(&TetLengths::new(plus).unwrap()).unwrap();
            let bm = dihedral_angles(&TetLengths::new(minus).unwrap()).unwrap();
            for row in 0..6 {
                m[(row, col)] = (bp[row] - bm[row]) / (2.0 * h);
            }
        }
        m
    }

    #[test]
    fn regular_dihedral_angles() {
        let l = TetLengths::new([2.0; 6]).unwrap();
        let (angles, gap) = dihedral_angles_checked(&l).unwrap();
        for b in angles {
            assert_abs_diff_eq!(b, BETA_REGULAR_2, epsilon = 1e-12);
        }
        assert!(gap < 1e-12);
    }

    #[test]
    fn vertex_triangle_angle_sums_below_pi() {
        let l = TetLengths::new([1.3, 0.9, 2.1, 1.6, 1.1, 0.8]).unwrap();
        let beta = dihedral_angles(&l).unwrap();
        for apex in 0..4 {
            let sum: f64 = (0..4)
                .filter(|&v| v != apex)
                .map(|v| beta[slot(apex, v)])
                .sum();
            assert!(sum < PI);
        }
    }

    #[test]
    fn apex_evaluations_agree() {
        let l = TetLengths::new([0.7, 1.9, 1.2, 2.4, 0.6, 1.5]).unwrap();
        let cache = LengthCache::new(&l);
        for &(a, b) in &SLOTS {
            let (x, _) = cache.angle_at(a, b, false).unwrap();
            let (y, _) = cache.angle_at(b, a, false).unwrap();
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn dbeta_dl_matches_finite_differences() {
        let l = TetLengths::new([1.3, 0.9, 2.1, 1.6, 1.1, 0.8]).unwrap();
        let m = dbeta_dl(&l).unwrap();
        let fd = fd_dihedral(&l, 1e-6);
        for (x, y) in m.iter().zip(fd.iter()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-7 * (1.0 + y.abs()));
        }
        assert!((m - m.transpose()).amax() < 1e-10);
        assert!(m.symmetric_eigenvalues().min() > 0.0);
    }

    #[test]
    fn degenerate_lengths_are_rejected() {
        let l = TetLengths::new([2.57, 1.12, 0.21, 0.12, 3.26, 3.66]).unwrap();
        assert!(crate::trunctet::q1_from_cosh(l.cosh()) < 0.0);
        assert!(matches!(
            dihedral_angles(&l),
            Err(Error::DegenerateTetrahedron { .. })
        ));
        assert!(dbeta_dl(&l).is_err());
    }

    #[test]
    fn dl_dr_incidence_pattern_at_zero_weight() {
        let r = TetRadii::new([0.4, 1.1, 2.0, 0.7]).unwrap();
        let m = dl_dr(&r, &TetWeights::zero()).unwrap();
        for (s, &(a, b)) in SLOTS.iter().enumerate() {
            for v in 0..4 {
                let want = if v == a || v == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(m[(v, s)], want, epsilon = 1e-12);
            }
        }
        assert_eq!(m.rank(1e-9), 4);
    }

    #[test]
    fn dl_dr_matches_finite_differences() {
        let r = TetRadii::new([1.4, 1.1, 2.0, 0.9]).unwrap();
        let w = TetWeights::from_angles([0.3, 1.0, 0.2, FRAC_PI_2, 0.7, 1.2]).unwrap();
        let m = dl_dr(&r, &w).unwrap();
        let h = 1e-6;
        for v in 0..4 {
            let mut plus = r.values();
            let mut minus = r.values();
            plus[v] += h;
            minus[v] -= h;
            let lp = lengths_from_radii(&TetRadii::new(plus).unwrap(), &w)
                .unwrap()
                .values();
            let lm = lengths_from_radii(&TetRadii::new(minus).unwrap(), &w)
                .unwrap()
                .values();
            for s in 0..6 {
                assert_abs_diff_eq!(m[(v, s)], (lp[s] - lm[s]) / (2.0 * h), epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn edge_hessian_examples() {
        assert_eq!(hess_edge_length(1.2, 0.7, 0.0).unwrap(), Matrix2::zeros());
        for phi in [0.2, 1.0, FRAC_PI_2] {
            let m = hess_edge_length(1.2, 1.4, phi).unwrap();
            assert_abs_diff_eq!(m[(0, 1)], m[(1, 0)]);
            let eig = m.symmetric_eigenvalues();
            assert!(eig.max() < 0.0, "phi = {phi}: {eig:?}");
        }
    }

    #[test]
    fn edge_hessian_matches_finite_differences() {
        let (ri, rj, phi) = (1.3, 0.9, 0.8);
        let m = hess_edge_length(ri, rj, phi).unwrap();
        let l = |a: f64, b: f64| hyptrig::pentagon_edge_length(a, b, phi).unwrap();
        let h = 1e-4;
        let dii = (l(ri + h, rj) - 2.0 * l(ri, rj) + l(ri - h, rj)) / (h * h);
        let djj = (l(ri, rj + h) - 2.0 * l(ri, rj) + l(ri, rj - h)) / (h * h);
        let dij = (l(ri + h, rj + h) - l(ri + h, rj - h) - l(ri - h, rj + h) + l(ri - h, rj - h))
            / (4.0 * h * h);
        assert_abs_diff_eq!(m[(0, 0)], dii, epsilon = 1e-6);
        assert_abs_diff_eq!(m[(1, 1)], djj, epsilon = 1e-6);
        assert_abs_diff_eq!(m[(0, 1)], dij, epsilon = 1e-6);
    }
}
