//! Nonlocal ghost field: the positive, analyzer-dependent distribution of the
//! two ±1 outcomes, written as `P(λa, λb) = P(λa | λb) P(λb)`.
//!
//! The marginal `P(λb) = ½` does not depend on either analyzer. All the
//! setting dependence sits in the conditional matrix, which for the singlet is
//! `[[sin²(α/2), cos²(α/2)], [cos²(α/2), sin²(α/2)]]` with `cos α = a·b`.

use std::io::{self, Write};

use rand::Rng;

use crate::direction::Direction3;
use crate::error::{GhostError, Result};
use crate::quantum::{joint_outcome_table, Outcome, OutcomeTable, TwoSpinState};
use crate::sampling::{worker_rng, MCEstimate, McPlan};
use crate::scalar::{Real, Scalar};

/// Column-stochastic matrix `q[λa][λb] = P(λa | λb)`.
///
/// Rows are indexed by `λa`, columns by `λb`, both in the order `(+1, −1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalMatrix<T> {
    q: [[T; 2]; 2],
}

impl<T: Scalar> ConditionalMatrix<T> {
    pub fn new(q: [[T; 2]; 2]) -> Result<Self> {
        let tol = T::tolerance();
        if q.iter().flatten().any(|&v| v < -tol || v > T::one() + tol) {
            return Err(GhostError::InvalidConditional("entry outside [0, 1]"));
        }
        if (0..2).any(|col| !(q[0][col] + q[1][col]).approx_eq(T::one())) {
            return Err(GhostError::InvalidConditional("column does not sum to 1"));
        }
        Ok(Self { q })
    }

    pub fn entries(&self) -> [[T; 2]; 2] {
        self.q
    }

    /// `P(λa | λb)`.
    pub fn get(&self, lambda_a: Outcome, lambda_b: Outcome) -> T {
        self.q[lambda_a.index()][lambda_b.index()]
    }

    pub fn is_symmetric(&self) -> bool {
        self.q[0][1].approx_eq(self.q[1][0])
    }

    /// Joint table `P(λa | λb) · ½`.
    pub fn joint_table(&self) -> OutcomeTable<T> {
        let h = marginal_outcome::<T>();
        OutcomeTable::new(self.q.map(|row| row.map(|v| v * h)))
            .expect("column-stochastic matrix times uniform marginal is a distribution")
    }

    /// The matrix `[[5/12, 7/12], [7/12, 5/12]]`, a conditional that stays
    /// inside the Bell bound.
    ///
    /// Its correlation is `5/12 − 7/12 = −1/6`. Written as `−(1/3) cos 120°` the
    /// same number would be `+1/6`; the sign here follows from the matrix.
    pub fn counterexample_5_12() -> Self {
        let (five, seven) = (T::ratio(5, 12), T::ratio(7, 12));
        Self { q: [[five, seven], [seven, five]] }
    }
}

/// Singlet conditional from the analyzer cosine `cos α = a·b`:
/// `sin²(α/2) = (1 − cos α)/2` on the diagonal.
///
/// Works over any [`Scalar`], so rational cosines give exact matrices.
pub fn singlet_conditional_from_cosine<T: Scalar>(cos_alpha: T) -> ConditionalMatrix<T> {
    let h = T::half();
    let same = h * (T::one() - cos_alpha);
    let flip = h * (T::one() + cos_alpha);
    ConditionalMatrix { q: [[same, flip], [flip, same]] }
}

/// Singlet conditional for the full analyzer angle `alpha` in radians.
pub fn singlet_conditional<T: Real>(alpha: T) -> Result<ConditionalMatrix<T>> {
    if !alpha.is_finite() {
        return Err(GhostError::NonFiniteAngle);
    }
    Ok(singlet_conditional_from_cosine(alpha.cos()))
}

/// Bayes factorization of the quantum joint table: `q[λa][λb] = p[λa][λb] / P(λb)`.
pub fn conditional_from_state<T: Real>(
    psi: &TwoSpinState<T>,
    a: &Direction3<T>,
    b: &Direction3<T>,
) -> Result<ConditionalMatrix<T>> {
    let table = joint_outcome_table(psi, a, b);
    let marginal = table.marginal_b();
    if marginal.iter().any(|&m| m <= T::tolerance()) {
        return Err(GhostError::ZeroMarginal);
    }
    let p = table.entries();
    ConditionalMatrix::new(std::array::from_fn(|i| std::array::from_fn(|j| p[i][j] / marginal[j])))
}

/// `P(λb = ±1) = ½` for the singlet, whatever the analyzer setting.
pub fn marginal_outcome<T: Scalar>() -> T {
    T::half()
}

/// `Σ λa λb P(λa | λb) · ½`.
pub fn correlation_from_matrix<T: Scalar>(q: &ConditionalMatrix<T>) -> T {
    let [[pp, pm], [mp, mm]] = q.q;
    (pp - pm - mp + mm) * marginal_outcome::<T>()
}

/// Paired outcome records, one entry per trial.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeSequencePair {
    lambda_b: Vec<Outcome>,
    lambda_a: Vec<Outcome>,
    seed: u64,
}

impl OutcomeSequencePair {
    pub fn new(lambda_b: Vec<Outcome>, lambda_a: Vec<Outcome>, seed: u64) -> Result<Self> {
        if lambda_b.is_empty() || lambda_b.len() != lambda_a.len() {
            return Err(GhostError::SequenceLength { lambda_b: lambda_b.len(), lambda_a: lambda_a.len() });
        }
        Ok(Self { lambda_b, lambda_a, seed })
    }

    pub fn lambda_b(&self) -> &[Outcome] {
        &self.lambda_b
    }

    pub fn lambda_a(&self) -> &[Outcome] {
        &self.lambda_a
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.lambda_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda_a.is_empty()
    }

    /// Trials with `λa = λb`.
    pub fn same_count(&self) -> u64 {
        self.lambda_a.iter().zip(&self.lambda_b).filter(|(a, b)| a == b).count() as u64
    }

    pub fn same_outcome_fraction(&self) -> f64 {
        self.same_count() as f64 / self.len() as f64
    }

    /// `counts[λa][λb]`.
    pub fn joint_counts(&self) -> [[u64; 2]; 2] {
        let mut counts = [[0u64; 2]; 2];
        for (a, b) in self.lambda_a.iter().zip(&self.lambda_b) {
            counts[a.index()][b.index()] += 1;
        }
        counts
    }

    /// Same trials with the roles of the two analyzers exchanged.
    pub fn swapped(&self) -> Self {
        Self { lambda_b: self.lambda_a.clone(), lambda_a: self.lambda_b.clone(), seed: self.seed }
    }

    /// CSV with header `trial,lambda_b,lambda_a`, trials numbered from 0.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "trial,lambda_b,lambda_a")?;
        for (i, (b, a)) in self.lambda_b.iter().zip(&self.lambda_a).enumerate() {
            writeln!(w, "{},{},{}", i, b.value(), a.value())?;
        }
        Ok(())
    }
}

/// Draws `n` trials: `λb = ±1` with probability ½, then `λa` from column `λb` of `q`.
pub fn generate_sequences<T: Scalar>(q: &ConditionalMatrix<T>, n: u64, seed: u64) -> Result<OutcomeSequencePair> {
    generate_sequences_with(q, &McPlan::new(n, seed))
}

/// [`generate_sequences`] split across `plan.workers` streams, concatenated in
/// worker order.
pub fn generate_sequences_with<T: Scalar>(q: &ConditionalMatrix<T>, plan: &McPlan) -> Result<OutcomeSequencePair> {
    plan.check(1)?;
    let plus_given = [
        q.q[0][0].to_f64().unwrap_or(f64::NAN),
        q.q[0][1].to_f64().unwrap_or(f64::NAN),
    ];
    let n = plan.samples as usize;
    let mut lambda_b = Vec::with_capacity(n);
    let mut lambda_a = Vec::with_capacity(n);
    for (w, count) in plan.chunks().into_iter().enumerate() {
        let mut rng = worker_rng(plan.seed, w);
        for _ in 0..count {
            let b = if rng.gen::<f64>() < 0.5 { Outcome::Plus } else { Outcome::Minus };
            let a = if rng.gen::<f64>() < plus_given[b.index()] {
                Outcome::Plus
            } else {
                Outcome::Minus
            };
            lambda_b.push(b);
            lambda_a.push(a);
        }
    }
    OutcomeSequencePair::new(lambda_b, lambda_a, plan.seed)
}

/// Ensemble average `(1/n) Σ λa λb` with its standard error.
pub fn empirical_correlation<T: Real>(seqs: &OutcomeSequencePair) -> MCEstimate<T> {
    let n = seqs.len() as u64;
    let same = seqs.same_count();
    let nf = T::lit(n as f64);
    let mean = (T::lit(same as f64) - T::lit((n - same) as f64)) / nf;
    // per-sample values are ±1, so the sample variance is n/(n−1)·(1 − mean²)
    let stderr = if n < 2 {
        T::zero()
    } else {
        let var = (T::one() - mean * mean).max(T::zero()) * nf / (nf - T::one());
        (var / nf).sqrt()
    };
    MCEstimate { mean, stderr, n_samples: n, seed: seqs.seed }
}
