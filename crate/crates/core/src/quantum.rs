//! Exact quantum mechanics of two spin-½ particles.
//!
//! States live in the product basis `|++⟩, |+−⟩, |−+⟩, |−−⟩` of σ_z
//! eigenstates (particle A is the left factor). Everything here is a pure
//! function of immutable values and serves as the reference the two
//! ghost-field pictures are checked against.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::direction::Direction3;
use crate::error::{GhostError, Result};
use crate::scalar::{Real, Scalar};

/// One complex component of a wave function.
pub type ComplexAmplitude<T> = Complex<T>;

type Mat2<T> = [[Complex<T>; 2]; 2];

/// Measurement outcome of a Stern–Gerlach analyzer.
///
/// `Plus` is the "parallel" answer (+1), `Minus` the "antiparallel" one (−1).
/// Tables and matrices index outcomes as `Plus → 0`, `Minus → 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Outcome {
    Plus = 1,
    Minus = -1,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> i8 {
        self as i8
    }

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub fn from_value(v: i8) -> Option<Self> {
        match v {
            1 => Some(Outcome::Plus),
            -1 => Some(Outcome::Minus),
            _ => None,
        }
    }

    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Outcome::Plus => T::one(),
            Outcome::Minus => -T::one(),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

/// Which particle a single-particle operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Particle {
    A,
    B,
}

/// Pure state of a single spin-½.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinState<T> {
    amplitudes: [Complex<T>; 2],
}

impl<T: Real> SpinState<T> {
    /// The state whose spin points along `n`: `cos(θ/2)|+⟩ + e^{iφ} sin(θ/2)|−⟩`.
    pub fn along(n: &Direction3<T>) -> Self {
        let theta = n.z().max(-T::one()).min(T::one()).acos();
        let phi = n.y().atan2(n.x());
        let half = T::half() * theta;
        Self {
            amplitudes: [
                Complex::new(half.cos(), T::zero()),
                Complex::from_polar(half.sin(), phi),
            ],
        }
    }

    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        self.amplitudes
    }

    /// `⟨n| O |n⟩` for a 2×2 operator.
    pub fn expectation(&self, op: &SpinObservable<T>) -> T {
        expect_one(&self.amplitudes, &op.m)
    }

    /// `⟨n| (1 + σ(a))/2 |n⟩`, the detection probability behind analyzer `a`.
    pub fn projector_expectation(&self, a: &Direction3<T>) -> T {
        expect_one(&self.amplitudes, &projector(a, Outcome::Plus))
    }
}

/// Normalized state of the particle pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSpinState<T> {
    amplitudes: [Complex<T>; 4],
}

impl<T: Real> TwoSpinState<T> {
    pub fn new(amplitudes: [Complex<T>; 4]) -> Result<Self> {
        let norm_sq: T = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !norm_sq.approx_eq(T::one()) {
            return Err(GhostError::NotNormalized {
                norm_sq: norm_sq.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Spin singlet `(|+−⟩ − |−+⟩)/√2`.
    pub fn singlet() -> Self {
        let h = T::FRAC_1_SQRT_2();
        let zero = Complex::zero();
        Self {
            amplitudes: [zero, Complex::new(h, T::zero()), Complex::new(-h, T::zero()), zero],
        }
    }

    /// Basis state `|λa λb⟩`.
    pub fn basis(a: Outcome, b: Outcome) -> Self {
        let mut amplitudes = [Complex::zero(); 4];
        amplitudes[2 * a.index() + b.index()] = Complex::one();
        Self { amplitudes }
    }

    /// Product state `|a⟩ ⊗ |b⟩`.
    pub fn product(a: &SpinState<T>, b: &SpinState<T>) -> Self {
        let (a, b) = (a.amplitudes, b.amplitudes);
        Self {
            amplitudes: [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]],
        }
    }

    pub fn amplitudes(&self) -> [Complex<T>; 4] {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨Ψ| A ⊗ B |Ψ⟩` (real part; exact for Hermitian factors).
    fn expect_product(&self, a: &Mat2<T>, b: &Mat2<T>) -> T {
        let psi = &self.amplitudes;
        let mut acc = Complex::<T>::zero();
        for i in 0..2 {
            for j in 0..2 {
                let bra = psi[2 * i + j].conj();
                for k in 0..2 {
                    for l in 0..2 {
                        acc = acc + bra * a[i][k] * b[j][l] * psi[2 * k + l];
                    }
                }
            }
        }
        acc.re
    }
}

/// A 2×2 Hermitian, traceless, involutory matrix: `n·σ` for some unit `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinObservable<T> {
    m: Mat2<T>,
}

impl<T: Real> SpinObservable<T> {
    pub fn new(m: Mat2<T>) -> Result<Self> {
        let close = |x: Complex<T>, y: Complex<T>| (x - y).norm() <= T::tolerance();
        if [(0, 0), (0, 1), (1, 1)].iter().any(|&(i, j)| !close(m[i][j], m[j][i].conj())) {
            return Err(GhostError::InvalidObservable("not Hermitian"));
        }
        if (m[0][0] + m[1][1]).norm() > T::tolerance() {
            return Err(GhostError::InvalidObservable("not traceless"));
        }
        let sq = mat_mul(&m, &m);
        for (i, row) in sq.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let id = if i == j { Complex::one() } else { Complex::zero() };
                if !close(v, id) {
                    return Err(GhostError::InvalidObservable("square is not the identity"));
                }
            }
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> Mat2<T> {
        self.m
    }

    pub fn squared(&self) -> Mat2<T> {
        mat_mul(&self.m, &self.m)
    }
}

/// `σ(a) = a_x σ_x + a_y σ_y + a_z σ_z`.
pub fn pauli_projection<T: Real>(a: &Direction3<T>) -> SpinObservable<T> {
    SpinObservable { m: pauli_matrix(a) }
}

fn pauli_matrix<T: Real>(a: &Direction3<T>) -> Mat2<T> {
    [
        [Complex::new(a.z(), T::zero()), Complex::new(a.x(), -a.y())],
        [Complex::new(a.x(), a.y()), Complex::new(-a.z(), T::zero())],
    ]
}

/// `(1 + λ σ(n)) / 2`.
fn projector<T: Real>(n: &Direction3<T>, outcome: Outcome) -> Mat2<T> {
    let s = pauli_matrix(n);
    let lambda: T = outcome.sign();
    let half = T::half();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j { T::one() } else { T::zero() };
            Complex::new(id, T::zero()).scale(half) + s[i][j].scale(half * lambda)
        })
    })
}

fn identity<T: Real>() -> Mat2<T> {
    [[Complex::one(), Complex::zero()], [Complex::zero(), Complex::one()]]
}

fn mat_mul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

fn expect_one<T: Real>(psi: &[Complex<T>; 2], m: &Mat2<T>) -> T {
    let mut acc = Complex::<T>::zero();
    for i in 0..2 {
        for k in 0..2 {
            acc = acc + psi[i].conj() * m[i][k] * psi[k];
        }
    }
    acc.re
}

/// Single-particle expectation `⟨Ψ| σ(a) ⊗ 1 |Ψ⟩` or `⟨Ψ| 1 ⊗ σ(a) |Ψ⟩`.
pub fn single_expectation<T: Real>(psi: &TwoSpinState<T>, a: &Direction3<T>, particle: Particle) -> T {
    let s = pauli_matrix(a);
    let id = identity();
    match particle {
        Particle::A => psi.expect_product(&s, &id),
        Particle::B => psi.expect_product(&id, &s),
    }
}

/// Joint correlation `⟨Ψ| σ(a) ⊗ σ(b) |Ψ⟩`. For the singlet this is `−a·b`.
pub fn joint_expectation<T: Real>(psi: &TwoSpinState<T>, a: &Direction3<T>, b: &Direction3<T>) -> T {
    psi.expect_product(&pauli_matrix(a), &pauli_matrix(b))
}

/// Joint probabilities `p[λa][λb]` of the two analyzer outcomes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeTable<T> {
    p: [[T; 2]; 2],
}

impl<T: Scalar> OutcomeTable<T> {
    pub fn new(p: [[T; 2]; 2]) -> Result<Self> {
        let tol = T::tolerance();
        let mut total = T::zero();
        for &v in p.iter().flatten() {
            if v < -tol || v > T::one() + tol {
                return Err(GhostError::InvalidConditional("probability outside [0, 1]"));
            }
            total = total + v;
        }
        if !total.approx_eq(T::one()) {
            return Err(GhostError::InvalidConditional("joint probabilities do not sum to 1"));
        }
        Ok(Self { p })
    }

    pub fn entries(&self) -> [[T; 2]; 2] {
        self.p
    }

    pub fn get(&self, a: Outcome, b: Outcome) -> T {
        self.p[a.index()][b.index()]
    }

    /// `P(λa)` indexed by outcome.
    pub fn marginal_a(&self) -> [T; 2] {
        [self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]]
    }

    /// `P(λb)` indexed by outcome.
    pub fn marginal_b(&self) -> [T; 2] {
        [self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]]
    }

    /// `Σ λa λb p[λa][λb]`.
    pub fn correlation(&self) -> T {
        self.p[0][0] - self.p[0][1] - self.p[1][0] + self.p[1][1]
    }
}

/// `p[λa][λb] = ⟨Ψ| Π_λa(a) ⊗ Π_λb(b) |Ψ⟩` with `Π_λ(n) = (1 + λσ(n))/2`.
pub fn joint_outcome_table<T: Real>(
    psi: &TwoSpinState<T>,
    a: &Direction3<T>,
    b: &Direction3<T>,
) -> OutcomeTable<T> {
    let p = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let pa = projector(a, Outcome::from_index(i));
            let pb = projector(b, Outcome::from_index(j));
            // rounding can push an exact zero slightly negative
            psi.expect_product(&pa, &pb).max(T::zero()).min(T::one())
        })
    });
    OutcomeTable { p }
}

/// Quantum Malus law for spin: `(1 + n·a)/2 = cos²(α/2)`.
pub fn malus_spin_projection<T: Real>(n: &Direction3<T>, a: &Direction3<T>) -> T {
    T::half() * (T::one() + n.dot(a))
}
