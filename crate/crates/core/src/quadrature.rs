//! Product quadrature on the unit sphere.
//!
//! Gauss–Legendre in `cos θ` crossed with the uniform (trapezoidal) rule in
//! `φ`. With `m` Legendre nodes and `k` azimuthal nodes the rule integrates
//! every polynomial in `n` of degree `< min(2m, k)` exactly.

use crate::direction::Direction3;
use crate::error::{GhostError, Result};
use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`,
/// nodes in ascending order.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nt = T::lit(n as f64);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root
        let mut x = (T::PI() * (T::lit(i as f64) + T::lit(0.75)) / (nt + T::half())).cos();
        let mut deriv = T::one();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            deriv = dp;
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        if dp.is_finite() {
            deriv = dp;
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * deriv * deriv);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    for k in 2..=n {
        let kt = T::lit(k as f64);
        let p2 = ((T::lit(2.0) * kt - T::one()) * x * p1 - (kt - T::one()) * p0) / kt;
        p0 = p1;
        p1 = p2;
    }
    let dp = T::lit(n as f64) * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Weighted nodes on the sphere whose weights sum to `4π`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereQuadrature<T> {
    nodes: Vec<Direction3<T>>,
    weights: Vec<T>,
}

impl<T: Real> SphereQuadrature<T> {
    pub fn nodes(&self) -> &[Direction3<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_{S²} f(n) dn`.
    pub fn integrate<F: Fn(&Direction3<T>) -> T>(&self, f: F) -> T {
        self.nodes.iter().zip(&self.weights).map(|(n, &w)| w * f(n)).sum()
    }
}

/// Product rule with `order_theta ≥ 2` Legendre nodes and `order_phi ≥ 4`
/// azimuthal nodes.
pub fn build_quadrature<T: Real>(order_theta: usize, order_phi: usize) -> Result<SphereQuadrature<T>> {
    if order_theta < 2 || order_phi < 4 {
        return Err(GhostError::QuadratureOrder { theta: order_theta, phi: order_phi });
    }
    let (zs, ws) = gauss_legendre::<T>(order_theta);
    let dphi = T::lit(std::f64::consts::TAU) / T::lit(order_phi as f64);
    let mut nodes = Vec::with_capacity(order_theta * order_phi);
    let mut weights = Vec::with_capacity(order_theta * order_phi);
    for (&z, &w) in zs.iter().zip(&ws) {
        let r = (T::one() - z * z).sqrt();
        for j in 0..order_phi {
            let (s, c) = (dphi * T::lit(j as f64)).sin_cos();
            nodes.push(Direction3::new_unchecked(r * c, r * s, z));
            weights.push(w * dphi);
        }
    }
    Ok(SphereQuadrature { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_rule_small_orders() {
        let (x, w) = gauss_legendre::<f64>(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);

        let (x, w) = gauss_legendre::<f64>(3);
        let r = (3.0f64 / 5.0).sqrt();
        assert!((x[0] + r).abs() < 1e-15 && x[1].abs() < 1e-15 && (x[2] - r).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15 && (w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn legendre_rule_exact_for_polynomials() {
        // ∫_{-1}^{1} x^k dx = 2/(k+1) for even k, 0 for odd k
        for n in [4usize, 16, 32, 64] {
            let (x, w) = gauss_legendre::<f64>(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            for k in 0..(2 * n).min(40) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let expected = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
                assert!((got - expected).abs() < 1e-13, "n={n} k={k} got={got}");
            }
        }
    }

    #[test]
    fn rejects_low_orders() {
        assert_eq!(
            build_quadrature::<f64>(1, 8),
            Err(GhostError::QuadratureOrder { theta: 1, phi: 8 })
        );
        assert!(build_quadrature::<f64>(2, 3).is_err());
        assert!(build_quadrature::<f64>(2, 4).is_ok());
    }

    #[test]
    fn integrates_constants_and_moments() {
        let q = build_quadrature::<f64>(16, 32).unwrap();
        assert_eq!(q.len(), 16 * 32);
        assert!(q.weights().iter().all(|&w| w > 0.0));
        assert!((q.integrate(|_| 1.0) - 4.0 * PI).abs() < 1e-10);
        assert!((q.integrate(|n| n.z() * n.z()) - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!((q.integrate(|n| n.x() * n.y())).abs() < 1e-12);
        for i in 0..3 {
            assert!(q.integrate(|n| n.components()[i]).abs() < 1e-10);
        }

        let small = build_quadrature::<f64>(2, 4).unwrap();
        assert!(small.integrate(|n| n.z()).abs() < 1e-12);
        assert!(small.nodes().iter().all(|n| (n.dot(n) - 1.0).abs() < 1e-15));
    }

    #[test]
    fn higher_degree_moment() {
        // ∫ n_z^4 dn = 4π/5, ∫ n_x^2 n_y^2 dn = 4π/15
        let q = build_quadrature::<f64>(8, 16).unwrap();
        assert!((q.integrate(|n| n.z().powi(4)) - 4.0 * PI / 5.0).abs() < 1e-12);
        assert!((q.integrate(|n| (n.x() * n.y()).powi(2)) - 4.0 * PI / 15.0).abs() < 1e-12);
    }

    #[test]
    fn single_precision_rule() {
        let q = build_quadrature::<f32>(8, 16).unwrap();
        assert!((q.integrate(|_| 1.0) - 4.0 * std::f32::consts::PI).abs() < 1e-4);
    }
}
