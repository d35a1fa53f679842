//! Local ghost field: Malus-law correlations averaged over hidden spin
//! directions `(n_a, n_b) ∈ S² × S²`.
//!
//! The distributions handled here are signed mixtures of two normalized
//! components on `S² × S²`:
//!
//! * the antiparallel atom `δ²(n_a + n_b) / 4π` (uniform `n_a`, `n_b = −n_a`);
//! * the independent uniform density `1 / (4π)²`.
//!
//! The correlation functional is
//! `E(a, b) = ∫∫ P(n_a, n_b) (a·n_a)(b·n_b)`. On the atom it equals `−a·b/3`,
//! on the uniform component it vanishes, so weights `(1, 0)` give a positive
//! field that is off by a factor three and `(3, −2)` give the quantum `−a·b`
//! at the price of a negative density away from the antiparallel set.

use rand::Rng;
use serde::Serialize;

use crate::direction::Direction3;
use crate::error::{GhostError, Result};
use crate::quadrature::SphereQuadrature;
use crate::sampling::{run_plan, uniform_direction, MCEstimate, McPlan, RunningStats};
use crate::scalar::Real;

/// Minimum sample count for [`signed_mc_correlation`].
pub const MIN_MC_SAMPLES: u64 = 1000;

/// Signed measure on `S² × S²` as `atom_weight · atom + uniform_weight · uniform`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignedSphereDistribution<T> {
    atom_weight: T,
    uniform_weight: T,
}

/// Value of a distribution at a point of `S² × S²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointDensity<T> {
    /// Ordinary density (the pair is not antiparallel).
    Regular(T),
    /// On the antiparallel set: `singular` multiplies `δ²(n_a + n_b)`, and
    /// `regular` is the bounded part added to it.
    Singular { singular: T, regular: T },
}

impl<T: Real> SignedSphereDistribution<T> {
    pub fn new(atom_weight: T, uniform_weight: T) -> Result<Self> {
        let mass = atom_weight + uniform_weight;
        if !mass.approx_eq(T::one()) {
            return Err(GhostError::InvalidMass { mass: mass.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { atom_weight, uniform_weight })
    }

    pub fn atom_weight(&self) -> T {
        self.atom_weight
    }

    pub fn uniform_weight(&self) -> T {
        self.uniform_weight
    }

    pub fn total_mass(&self) -> T {
        self.atom_weight + self.uniform_weight
    }

    /// `|atom_weight| + |uniform_weight|`; equals 1 exactly when the measure is positive.
    pub fn total_variation(&self) -> T {
        self.atom_weight.abs() + self.uniform_weight.abs()
    }

    /// Density away from the antiparallel set: `uniform_weight / (4π)²`.
    pub fn off_atom_density(&self) -> T {
        let four_pi = T::four_pi();
        self.uniform_weight / (four_pi * four_pi)
    }

    /// Density at `(n_a, n_b)`. Pairs with `n_a·n_b = −1` within tolerance
    /// count as antiparallel.
    pub fn density_at(&self, n_a: &Direction3<T>, n_b: &Direction3<T>) -> PointDensity<T> {
        let regular = self.off_atom_density();
        if n_a.dot(n_b).approx_eq(-T::one()) {
            PointDensity::Singular { singular: self.atom_weight / T::four_pi(), regular }
        } else {
            PointDensity::Regular(regular)
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.atom_weight >= T::zero() && self.uniform_weight >= T::zero()
    }
}

/// Antiparallel field `δ²(n_a + n_b) / 4π`.
pub fn naive_field<T: Real>() -> SignedSphereDistribution<T> {
    SignedSphereDistribution { atom_weight: T::one(), uniform_weight: T::zero() }
}

/// Quasi-distribution `3 δ²(n_a + n_b) / 4π − 2 / (4π)²`.
pub fn quasi_field<T: Real>() -> SignedSphereDistribution<T> {
    SignedSphereDistribution { atom_weight: T::lit(3.0), uniform_weight: T::lit(-2.0) }
}

/// One-fold marginal density over either sphere, `(atom + uniform) / 4π`.
///
/// Both components have uniform marginals, so the marginal is constant.
pub fn marginal_density<T: Real>(dist: &SignedSphereDistribution<T>) -> T {
    dist.total_mass() / T::four_pi()
}

/// Closed form of the correlation integral: `atom_weight · (−a·b/3)`.
pub fn malus_correlation_closed<T: Real>(
    dist: &SignedSphereDistribution<T>,
    a: &Direction3<T>,
    b: &Direction3<T>,
) -> T {
    -dist.atom_weight * a.dot(b) / T::lit(3.0)
}

/// Single-spin average `∫ marginal(n) (a·n) dn`. The marginal is isotropic,
/// so this is zero for every member of the family.
pub fn single_malus_expectation<T: Real>(_dist: &SignedSphereDistribution<T>, _a: &Direction3<T>) -> T {
    T::zero()
}

/// Same average evaluated numerically against the marginal density.
pub fn single_malus_expectation_quadrature<T: Real>(
    dist: &SignedSphereDistribution<T>,
    a: &Direction3<T>,
    quad: &SphereQuadrature<T>,
) -> T {
    marginal_density(dist) * quad.integrate(|n| a.dot(n))
}

/// The correlation integral evaluated with a sphere quadrature.
///
/// The atom collapses to `(1/4π) ∫ (a·n)(b·(−n)) dn`; the uniform part
/// factorizes into two single-sphere integrals of directional cosines.
pub fn malus_correlation_quadrature<T: Real>(
    dist: &SignedSphereDistribution<T>,
    a: &Direction3<T>,
    b: &Direction3<T>,
    quad: &SphereQuadrature<T>,
) -> T {
    let four_pi = T::four_pi();
    let atom = quad.integrate(|n| a.dot(n) * b.dot(&-*n)) / four_pi;
    let uniform = (quad.integrate(|n| a.dot(n)) / four_pi) * (quad.integrate(|n| b.dot(n)) / four_pi);
    dist.atom_weight * atom + dist.uniform_weight * uniform
}

/// Signed-weight Monte Carlo estimate of the correlation integral.
///
/// Component `k` is chosen with probability `|w_k| / W`, `W = Σ|w_k|`, and each
/// sample contributes `sign(w_k) · W · (a·n_a)(b·n_b)`.
pub fn signed_mc_correlation<T: Real>(
    dist: &SignedSphereDistribution<T>,
    a: &Direction3<T>,
    b: &Direction3<T>,
    n: u64,
    seed: u64,
) -> Result<MCEstimate<T>> {
    signed_mc_correlation_with(dist, a, b, &McPlan::new(n, seed))
}

/// [`signed_mc_correlation`] split across `plan.workers` streams.
pub fn signed_mc_correlation_with<T: Real>(
    dist: &SignedSphereDistribution<T>,
    a: &Direction3<T>,
    b: &Direction3<T>,
    plan: &McPlan,
) -> Result<MCEstimate<T>> {
    plan.check(MIN_MC_SAMPLES)?;
    let total = dist.total_variation();
    let p_atom = (dist.atom_weight.abs() / total).to_f64().unwrap_or(1.0);
    let atom_scale = sign(dist.atom_weight) * total;
    let uniform_scale = sign(dist.uniform_weight) * total;
    Ok(run_plan(plan, |rng, count| {
        let mut stats = RunningStats::new();
        for _ in 0..count {
            let n_a: Direction3<T> = uniform_direction(rng);
            let value = if rng.gen::<f64>() < p_atom {
                atom_scale * a.dot(&n_a) * b.dot(&-n_a)
            } else {
                let n_b: Direction3<T> = uniform_direction(rng);
                uniform_scale * a.dot(&n_a) * b.dot(&n_b)
            };
            stats.push(value);
        }
        stats
    }))
}

fn sign<T: Real>(x: T) -> T {
    if x < T::zero() {
        -T::one()
    } else {
        T::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_quadrature;
    use std::f64::consts::PI;

    #[test]
    fn built_in_fields() {
        let naive = naive_field::<f64>();
        assert_eq!((naive.atom_weight(), naive.uniform_weight()), (1.0, 0.0));
        assert_eq!(naive.total_mass(), 1.0);
        let quasi = quasi_field::<f64>();
        assert_eq!((quasi.atom_weight(), quasi.uniform_weight()), (3.0, -2.0));
        assert_eq!(quasi.total_mass(), 1.0);
        assert_eq!(quasi.total_variation(), 5.0);
    }

    #[test]
    fn mass_checked_on_construction() {
        assert!(SignedSphereDistribution::new(0.25, 0.75).is_ok());
        assert!(matches!(
            SignedSphereDistribution::new(3.0, -1.0),
            Err(GhostError::InvalidMass { .. })
        ));
    }

    #[test]
    fn pointwise_density() {
        let a = Direction3::<f64>::from_spherical(0.4, 0.9);
        let b = Direction3::<f64>::from_spherical(1.4, -0.2);
        assert_eq!(naive_field::<f64>().density_at(&a, &b), PointDensity::Regular(0.0));
        let q = quasi_field::<f64>().density_at(&a, &b);
        let expected = -2.0 / ((4.0 * PI) * (4.0 * PI));
        assert_eq!(q, PointDensity::Regular(expected));
        assert!((expected + 0.012665).abs() < 1e-6);
        match quasi_field::<f64>().density_at(&a, &-a) {
            PointDensity::Singular { singular, regular } => {
                assert!((singular - 3.0 / (4.0 * PI)).abs() < 1e-15);
                assert_eq!(regular, expected);
            }
            other => panic!("expected singular density, got {other:?}"),
        }
        assert!(naive_field::<f64>().is_nonnegative());
        assert!(!quasi_field::<f64>().is_nonnegative());
    }

    #[test]
    fn marginals() {
        let target = 1.0 / (4.0 * PI);
        assert!((marginal_density(&naive_field::<f64>()) - target).abs() < 1e-15);
        assert!((marginal_density(&quasi_field::<f64>()) - target).abs() < 1e-15);
        let other = SignedSphereDistribution::new(-0.5, 1.5).unwrap();
        assert!((marginal_density(&other) - target).abs() < 1e-15);
    }

    #[test]
    fn closed_form_correlations() {
        let a = Direction3::<f64>::from_spherical(0.3, 0.1);
        let b = Direction3::<f64>::from_spherical(2.3, 1.9);
        let ab = a.dot(&b);
        assert!((malus_correlation_closed(&naive_field(), &a, &b) + ab / 3.0).abs() < 1e-15);
        assert!((malus_correlation_closed(&quasi_field(), &a, &b) + ab).abs() < 1e-15);
        let x = Direction3::<f64>::unit_x();
        let z = Direction3::<f64>::unit_z();
        assert_eq!(malus_correlation_closed(&quasi_field(), &x, &z), 0.0);
    }

    #[test]
    fn single_averages_vanish() {
        let quad = build_quadrature::<f64>(16, 32).unwrap();
        for a in [Direction3::<f64>::unit_z(), Direction3::<f64>::from_spherical(1.0, 2.0)] {
            for dist in [naive_field(), quasi_field()] {
                assert_eq!(single_malus_expectation(&dist, &a), 0.0);
                assert!(single_malus_expectation_quadrature(&dist, &a, &quad).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let quad = build_quadrature::<f64>(16, 32).unwrap();
        let a = Direction3::<f64>::in_xz_plane(0.0);
        let b = Direction3::<f64>::in_xz_plane(2.0 * PI / 3.0);
        assert!((malus_correlation_quadrature(&quasi_field(), &a, &b, &quad) - 0.5).abs() < 1e-8);
        assert!((malus_correlation_quadrature(&naive_field(), &a, &a, &quad) + 1.0 / 3.0).abs() < 1e-8);

        // the lowest admissible rule is already exact for this quadratic integrand
        let tiny = build_quadrature::<f64>(2, 4).unwrap();
        let c = Direction3::<f64>::from_spherical(0.8, -2.4);
        let closed = malus_correlation_closed(&quasi_field(), &a, &c);
        assert!((malus_correlation_quadrature(&quasi_field(), &a, &c, &tiny) - closed).abs() < 1e-12);
    }

    #[test]
    fn mc_rejects_small_n() {
        let z = Direction3::<f64>::unit_z();
        assert_eq!(
            signed_mc_correlation(&quasi_field::<f64>(), &z, &z, 999, 1),
            Err(GhostError::TooFewSamples { requested: 999, minimum: 1000 })
        );
    }

    #[test]
    fn mc_is_deterministic() {
        let a = Direction3::<f64>::in_xz_plane(0.0);
        let b = Direction3::<f64>::in_xz_plane(2.0 * PI / 3.0);
        let x = signed_mc_correlation(&quasi_field::<f64>(), &a, &b, 20_000, 17).unwrap();
        let y = signed_mc_correlation(&quasi_field::<f64>(), &a, &b, 20_000, 17).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.mean.to_bits(), y.mean.to_bits());
        let z = signed_mc_correlation(&quasi_field::<f64>(), &a, &b, 20_000, 18).unwrap();
        assert_ne!(x.mean, z.mean);
        assert_eq!((x.n_samples, x.seed), (20_000, 17));
    }

    #[test]
    fn naive_mc_has_no_sign_cancellation() {
        // with a positive field every sample has |value| ≤ 1
        let a = Direction3::<f64>::in_xz_plane(0.0);
        let est = signed_mc_correlation(&naive_field::<f64>(), &a, &a, 100_000, 5).unwrap();
        assert!(est.within(-1.0 / 3.0, 4.0), "{est:?}");
        assert!(est.stderr < 1.0 / (100_000f64).sqrt());
    }
}
