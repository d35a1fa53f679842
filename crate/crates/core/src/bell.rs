//! Three-setting Bell test under perfect anticorrelation.
//!
//! For analyzers `a, b, c` every local model with perfectly anticorrelated
//! outcomes satisfies `E(a,b) + E(a,c) + E(b,c) ≤ 1`. The bound comes from the
//! deterministic strategies: with `s_b = −s_a` a strategy scores
//! `S = (3 − (Σ_i s_a(i))²) / 2`, which is `1` or `−3`.
//! Local models are mixtures of strategies, and since `S` is linear in the
//! mixture weights its supremum is the maximum over the eight extremes. Values
//! `|σ| ≤ 1` between the extremes are again convex combinations of ±1 values,
//! so they add nothing beyond the enumeration.
//!
//! The singlet in the trine configuration gives `S = 3/2`.

use serde::Serialize;

use crate::direction::Direction3;
use crate::error::{GhostError, Result};
use crate::local::{
    malus_correlation_closed, malus_correlation_quadrature, naive_field, quasi_field,
    signed_mc_correlation_with, SignedSphereDistribution,
};
use crate::nonlocal::{
    conditional_from_state, correlation_from_matrix, empirical_correlation, generate_sequences_with,
    ConditionalMatrix,
};
use crate::quadrature::SphereQuadrature;
use crate::quantum::{joint_expectation, Outcome, TwoSpinState};
use crate::sampling::{derive_seed, McPlan};
use crate::scalar::Real;

/// A correlation value, with its standard error when it was estimated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlation<T> {
    pub value: T,
    pub stderr: Option<T>,
}

impl<T> Correlation<T> {
    pub fn exact(value: T) -> Self {
        Self { value, stderr: None }
    }
}

/// Anything that assigns a correlation `E(a, b) ∈ [−1, 1]` to a pair of analyzers.
pub trait CorrelationModel<T: Real> {
    fn name(&self) -> String;

    fn correlation(&self, a: &Direction3<T>, b: &Direction3<T>) -> Result<Correlation<T>>;
}

/// `⟨Ψ| σ(a) ⊗ σ(b) |Ψ⟩` for a fixed two-spin state.
#[derive(Clone, Debug)]
pub struct ExactQuantum<T> {
    pub state: TwoSpinState<T>,
}

impl<T: Real> ExactQuantum<T> {
    pub fn singlet() -> Self {
        Self { state: TwoSpinState::singlet() }
    }
}

impl<T: Real> CorrelationModel<T> for ExactQuantum<T> {
    fn name(&self) -> String {
        "quantum".into()
    }

    fn correlation(&self, a: &Direction3<T>, b: &Direction3<T>) -> Result<Correlation<T>> {
        Ok(Correlation::exact(joint_expectation(&self.state, a, b)))
    }
}

/// Local ghost field, closed-form correlation integral.
#[derive(Clone, Debug)]
pub struct LocalGhost<T> {
    pub dist: SignedSphereDistribution<T>,
    pub label: String,
}

impl<T: Real> LocalGhost<T> {
    pub fn naive() -> Self {
        Self { dist: naive_field(), label: "naive-local".into() }
    }

    pub fn quasi() -> Self {
        Self { dist: quasi_field(), label: "quasi-local".into() }
    }
}

impl<T: Real> CorrelationModel<T> for LocalGhost<T> {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn correlation(&self, a: &Direction3<T>, b: &Direction3<T>) -> Result<Correlation<T>> {
        Ok(Correlation::exact(malus_correlation_closed(&self.dist, a, b)))
    }
}

/// Local ghost field, correlation integral by sphere quadrature.
#[derive(Clone, Debug)]
pub struct LocalGhostQuadrature<T> {
    pub dist: SignedSphereDistribution<T>,
    pub quad: SphereQuadrature<T>,
    pub label: String,
}

impl<T: Real> CorrelationModel<T> for LocalGhostQuadrature<T> {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn correlation(&self, a: &Direction3<T>, b: &Direction3<T>) -> Result<Correlation<T>> {
        Ok(Correlation::exact(malus_correlation_quadrature(&self.dist, a, b, &self.quad)))
    }
}

/// Local ghost field, signed-weight Monte Carlo.
///
/// Each analyzer pair gets its own seed derived from `plan.seed` and the pair's
/// coordinates (order-independent), so repeated calls are reproducible.
#[derive(Clone, Debug)]
pub struct LocalGhostMonteCarlo<T> {
    pub dist: SignedSphereDistribution<T>,
    pub plan: McPlan,
    pub label: String,
}

impl<T: Real> CorrelationModel<T> for LocalGhostMonteCarlo<T> {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn correlation(&self, a: &Direction3<T>, b: &Direction3<T>) -> Result<Correlation<T>> {
        let plan = McPlan { seed: pair_seed(self.plan.seed, a, b), ..self.plan };
        let est = signed_mc_correlation_with(&self.dist, a, b, &plan)?;
        Ok(Correlation { value: est.mean, stderr: Some(est.stderr) })
    }
}

/// Nonlocal ghost field: Bayes-factorized conditional of a quantum state.
#[derive(Clone, Debug)]
pub struct NonlocalGhost<T> {
    pub state: TwoSpinState<T>,
}

impl<T: Real> NonlocalGhost<T> {
    pub fn singlet() -> Self {
        Self { state: TwoSpinState::singlet() }
    }
}

impl<T: Real> CorrelationModel<T> for NonlocalGhost<T> {
    fn name(&self) -> String {
        "nonlocal".into()
    }

    fn correlation(&self, a: &Direction3<T>, b: &Direction3<T>) -> Result<Correlation<T>> {
        let q = conditional_from_state(&self.state, a, b)?;
        Ok(Correlation::exact(correlation_from_matrix(&q)))
    }
}

/// Nonlocal ghost field sampled as two correlated ±1 sequences.
#[derive(Clone, Debug)]
pub struct NonlocalEmpirical<T> {
    pub state: TwoSpinState<T>,
    pub plan: McPlan,
}

impl<T: Real> CorrelationModel<T> for NonlocalEmpirical<T> {
    fn name(&self) -> String {
        "nonlocal-empirical".into()
    }

    fn correlation(&self, a: &Direction3<T>, b: &Direction3<T>) -> Result<Correlation<T>> {
        let q = conditional_from_state(&self.state, a, b)?;
        let plan = McPlan { seed: pair_seed(self.plan.seed, a, b), ..self.plan };
        let est = empirical_correlation(&generate_sequences_with(&q, &plan)?);
        Ok(Correlation { value: est.mean, stderr: Some(est.stderr) })
    }
}

/// The same conditional matrix for every analyzer pair.
#[derive(Clone, Debug)]
pub struct FixedMatrix<T> {
    pub q: ConditionalMatrix<T>,
    pub label: String,
}

impl<T: Real> FixedMatrix<T> {
    pub fn counterexample_5_12() -> Self {
        Self { q: ConditionalMatrix::counterexample_5_12(), label: "counterexample-5-12".into() }
    }
}

impl<T: Real> CorrelationModel<T> for FixedMatrix<T> {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn correlation(&self, _a: &Direction3<T>, _b: &Direction3<T>) -> Result<Correlation<T>> {
        Ok(Correlation::exact(correlation_from_matrix(&self.q)))
    }
}

fn direction_key<T: Real>(d: &Direction3<T>) -> u64 {
    d.components()
        .iter()
        .fold(0, |h, c| derive_seed(h, c.to_f64().unwrap_or(0.0).to_bits()))
}

fn pair_seed<T: Real>(seed: u64, a: &Direction3<T>, b: &Direction3<T>) -> u64 {
    let (ka, kb) = (direction_key(a), direction_key(b));
    derive_seed(derive_seed(seed, ka.min(kb)), ka.max(kb))
}

/// Three analyzer directions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellConfig<T: Real + Serialize> {
    pub a: Direction3<T>,
    pub b: Direction3<T>,
    pub c: Direction3<T>,
}

impl<T: Real + Serialize> BellConfig<T> {
    /// Rejects configurations where two directions coincide.
    pub fn new(a: Direction3<T>, b: Direction3<T>, c: Direction3<T>) -> Result<Self> {
        for (u, v) in [(&a, &b), (&a, &c), (&b, &c)] {
            if u.dot(v).approx_eq(T::one()) {
                return Err(GhostError::InvalidConfig("directions must be pairwise distinct"));
            }
        }
        Ok(Self { a, b, c })
    }
}

/// Three coplanar directions at mutual 120°: polar angles 0°, 120°, 240° in the x–z plane.
pub fn trine_config<T: Real + Serialize>() -> BellConfig<T> {
    let third = T::lit(2.0) * T::PI() / T::lit(3.0);
    BellConfig {
        a: Direction3::in_xz_plane(T::zero()),
        b: Direction3::in_xz_plane(third),
        c: Direction3::in_xz_plane(third + third),
    }
}

/// Result of evaluating `E(a,b) + E(a,c) + E(b,c)` against the local bound 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellReport<T: Real + Serialize> {
    pub e_ab: T,
    pub e_ac: T,
    pub e_bc: T,
    pub s: T,
    pub bound: T,
    pub violated: bool,
    pub model_name: String,
    pub config: BellConfig<T>,
    /// Combined standard error of `s` for sampled models.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_stderr: Option<T>,
}

pub fn bell_sum<T, M>(model: &M, config: &BellConfig<T>) -> Result<BellReport<T>>
where
    T: Real + Serialize,
    M: CorrelationModel<T> + ?Sized,
{
    let ab = model.correlation(&config.a, &config.b)?;
    let ac = model.correlation(&config.a, &config.c)?;
    let bc = model.correlation(&config.b, &config.c)?;
    let s = ab.value + ac.value + bc.value;
    let s_stderr = match (ab.stderr, ac.stderr, bc.stderr) {
        (None, None, None) => None,
        (x, y, z) => {
            let sq = |e: Option<T>| e.map_or(T::zero(), |e| e * e);
            Some((sq(x) + sq(y) + sq(z)).sqrt())
        }
    };
    Ok(BellReport {
        e_ab: ab.value,
        e_ac: ac.value,
        e_bc: bc.value,
        s,
        bound: T::one(),
        violated: s > T::one(),
        model_name: model.name(),
        config: *config,
        s_stderr,
    })
}

/// `2 E(120°) + E(240°)` for a model that only depends on the analyzer angle.
pub fn reduced_trine_expression<T, M>(model: &M) -> Result<T>
where
    T: Real,
    M: CorrelationModel<T> + ?Sized,
{
    let third = T::lit(2.0) * T::PI() / T::lit(3.0);
    let a = Direction3::in_xz_plane(T::zero());
    let e120 = model.correlation(&a, &Direction3::in_xz_plane(third))?.value;
    let e240 = model.correlation(&a, &Direction3::in_xz_plane(third + third))?.value;
    Ok(T::lit(2.0) * e120 + e240)
}

/// Predetermined ±1 answers of particle A for the three settings; particle B
/// always answers the opposite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub s_a: [Outcome; 3],
}

impl DeterministicStrategy {
    /// All eight sign patterns, `(+,+,+)` first.
    pub fn all() -> [Self; 8] {
        std::array::from_fn(|k| Self {
            s_a: std::array::from_fn(|i| Outcome::from_index((k >> (2 - i)) & 1)),
        })
    }

    pub fn s_b(&self) -> [Outcome; 3] {
        self.s_a.map(Outcome::flipped)
    }

    fn values(&self) -> [i32; 3] {
        self.s_a.map(|o| i32::from(o.value()))
    }

    /// `E(a,b) + E(a,c) + E(b,c)` with `E(i,j) = s_a(i) s_b(j)`.
    pub fn bell_value(&self) -> i32 {
        let s = self.values();
        let t = self.s_b().map(|o| i32::from(o.value()));
        s[0] * t[1] + s[0] * t[2] + s[1] * t[2]
    }

    /// `Σ = −(Σ_i s_a(i)) (Σ_i s_b(i))`.
    pub fn sigma(&self) -> i32 {
        let sa: i32 = self.values().iter().sum();
        let sb: i32 = self.s_b().iter().map(|o| i32::from(o.value())).sum();
        -sa * sb
    }
}

/// Exhaustive evaluation of all deterministic strategies.
#[derive(Clone, Debug, PartialEq)]
pub struct LhvEnumeration {
    /// `(strategy, bell_value, sigma)` for each of the eight strategies.
    pub strategies: Vec<(DeterministicStrategy, i32, i32)>,
    pub max_s: i32,
    pub min_sigma: i32,
}

pub fn lhv_bruteforce_max() -> LhvEnumeration {
    let strategies: Vec<_> = DeterministicStrategy::all()
        .into_iter()
        .map(|s| (s, s.bell_value(), s.sigma()))
        .collect();
    let max_s = strategies.iter().map(|t| t.1).max().expect("eight strategies");
    let min_sigma = strategies.iter().map(|t| t.2).min().expect("eight strategies");
    LhvEnumeration { strategies, max_s, min_sigma }
}

/// Bell value of a probability mixture over [`DeterministicStrategy::all`].
pub fn mixture_bell_value<T: Real>(weights: &[T; 8]) -> Result<T> {
    let total: T = weights.iter().copied().sum();
    if weights.iter().any(|&w| w < T::zero()) || !total.approx_eq(T::one()) {
        return Err(GhostError::InvalidMixture);
    }
    Ok(DeterministicStrategy::all()
        .iter()
        .zip(weights)
        .map(|(s, &w)| w * T::lit(f64::from(s.bell_value())))
        .sum())
}
