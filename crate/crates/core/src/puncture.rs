//! State vectors over puncture-pair labels.
//!
//! A pair of mixed-boundary punctures connected by a string condenses either
//! `e` or `m`, so `n` pairs span `{E, M}^n`. Basis index is the binary number
//! with `E → 0`, `M → 1` and pair 1 as the most significant bit; for two pairs
//! the order is `(EE, EM, ME, MM)`.
//!
//! Braiding here follows the sign-only convention: the double braid of two
//! pairs is `±1` per basis string with no global phase, so logical identities
//! with the anyon-model braid matrix hold up to one overall phase.

use serde::Serialize;
use thiserror::Error;

use crate::anyon::{AnyonError, AnyonModel};
use crate::linalg::{self, Mat2, C64};

pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("expected {expected} amplitudes, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("operation needs {expected} pairs, state has {got}")]
    PairCount { expected: usize, got: usize },
    #[error("state vector has zero norm")]
    ZeroNorm,
    #[error("state vector contains a non-finite amplitude")]
    NonFinite,
    #[error("invalid braid between pairs {i} and {j}")]
    InvalidBraid { i: usize, j: usize },
    #[error(transparent)]
    Anyon(#[from] AnyonError),
}

/// Quasiparticle species condensed in a connected puncture pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairLabel {
    E,
    M,
}

impl PairLabel {
    pub fn bit(self) -> usize {
        match self {
            PairLabel::E => 0,
            PairLabel::M => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subspace {
    /// `{|++⟩, |−−⟩}`
    Symmetric,
    /// `{|+−⟩, |−+⟩}`
    Antisymmetric,
}

impl Subspace {
    pub const ALL: [Subspace; 2] = [Subspace::Symmetric, Subspace::Antisymmetric];

    pub fn basis_labels(self) -> [&'static str; 2] {
        match self {
            Subspace::Symmetric => ["++", "--"],
            Subspace::Antisymmetric => ["+-", "-+"],
        }
    }
}

impl std::str::FromStr for Subspace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symmetric" | "sym" => Ok(Subspace::Symmetric),
            "antisymmetric" | "anti" => Ok(Subspace::Antisymmetric),
            other => Err(format!("unknown subspace {other:?}")),
        }
    }
}

/// Logical basis vector within a subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logical {
    Zero,
    One,
}

/// Bit of pair `k` (1-based) in a basis index over `n_pairs` pairs.
fn pair_bit(index: usize, pair: usize, n_pairs: usize) -> usize {
    (index >> (n_pairs - pair)) & 1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PunctureState {
    n_pairs: usize,
    amplitudes: Vec<C64>,
}

impl PunctureState {
    /// Normalizes `amplitudes`; fails on a wrong length or a zero vector.
    pub fn new(n_pairs: usize, amplitudes: Vec<C64>) -> Result<Self, StateError> {
        let expected = 1usize << n_pairs;
        if amplitudes.len() != expected {
            return Err(StateError::Dimension {
                expected,
                got: amplitudes.len(),
            });
        }
        Ok(PunctureState {
            n_pairs,
            amplitudes: normalized(amplitudes)?,
        })
    }

    pub(crate) fn from_unit(n_pairs: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_pairs);
        PunctureState {
            n_pairs,
            amplitudes,
        }
    }

    pub fn basis(labels: &[PairLabel]) -> Self {
        let n = labels.len();
        let idx = labels.iter().fold(0, |acc, l| (acc << 1) | l.bit());
        let mut amps = vec![linalg::ZERO; 1 << n];
        amps[idx] = linalg::ONE;
        Self::from_unit(n, amps)
    }

    /// Product of single-pair `|±⟩ = (|E⟩ ± |M⟩)/√2` states.
    pub fn from_signs(plus: &[bool]) -> Self {
        let n = plus.len();
        let scale = (1.0 / (1usize << n) as f64).sqrt();
        let amps = (0..1usize << n)
            .map(|idx| {
                let flips = (1..=n)
                    .filter(|&k| !plus[k - 1] && pair_bit(idx, k, n) == 1)
                    .count();
                let sign = if flips % 2 == 0 { 1.0 } else { -1.0 };
                C64::new(sign * scale, 0.0)
            })
            .collect();
        Self::from_unit(n, amps)
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes).sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PunctureState) -> C64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn max_diff(&self, other: &PunctureState) -> f64 {
        if self.n_pairs != other.n_pairs {
            return f64::INFINITY;
        }
        linalg::max_abs_diff(&self.amplitudes, &other.amplitudes)
    }

    pub fn scaled(&self, s: C64) -> PunctureState {
        PunctureState::from_unit(
            self.n_pairs,
            self.amplitudes.iter().map(|a| a * s).collect(),
        )
    }

    fn require_pairs(&self, n: usize) -> Result<(), StateError> {
        if self.n_pairs == n {
            Ok(())
        } else {
            Err(StateError::PairCount {
                expected: n,
                got: self.n_pairs,
            })
        }
    }
}

fn normalized(mut amps: Vec<C64>) -> Result<Vec<C64>, StateError> {
    if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(StateError::NonFinite);
    }
    let n = linalg::norm_sqr(&amps).sqrt();
    if n == 0.0 {
        return Err(StateError::ZeroNorm);
    }
    for a in &mut amps {
        *a /= n;
    }
    Ok(amps)
}

/// Logical basis state on two pairs: `|++⟩`, `|−−⟩`, `|+−⟩` or `|−+⟩`.
pub fn logical_basis(subspace: Subspace, which: Logical) -> PunctureState {
    let signs = match (subspace, which) {
        (Subspace::Symmetric, Logical::Zero) => [true, true],
        (Subspace::Symmetric, Logical::One) => [false, false],
        (Subspace::Antisymmetric, Logical::Zero) => [true, false],
        (Subspace::Antisymmetric, Logical::One) => [false, true],
    };
    PunctureState::from_signs(&signs)
}

pub fn logical_pair_basis(subspace: Subspace) -> [PunctureState; 2] {
    [
        logical_basis(subspace, Logical::Zero),
        logical_basis(subspace, Logical::One),
    ]
}

/// Fusion-basis change on two pairs. On each subspace it acts as the
/// Hadamard-type `F`: `F|+−⟩ = |1₁₃1₂₄⟩ = (|+−⟩ + |−+⟩)/√2`,
/// `F|−+⟩ = |ψ₁₃ψ₂₄⟩ = (|+−⟩ − |−+⟩)/√2`, and likewise on `{|++⟩, |−−⟩}`.
pub fn fusion_basis_change(state: &PunctureState) -> Result<PunctureState, StateError> {
    state.require_pairs(2)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = vec![linalg::ZERO; 4];
    for subspace in Subspace::ALL {
        let [b0, b1] = logical_pair_basis(subspace);
        let c0 = b0.inner(state);
        let c1 = b1.inner(state);
        for k in 0..4 {
            out[k] += (c0 + c1) * h * b0.amplitudes[k] + (c0 - c1) * h * b1.amplitudes[k];
        }
    }
    Ok(PunctureState::from_unit(2, out))
}

/// Vacuum and fermion channel vectors `F|b₀⟩`, `F|b₁⟩` of a subspace; for the
/// antisymmetric one these are `|1₁₃1₂₄⟩` and `|ψ₁₃ψ₂₄⟩`.
pub fn fusion_channel_vectors(subspace: Subspace) -> [PunctureState; 2] {
    let [b0, b1] = logical_pair_basis(subspace);
    [
        fusion_basis_change(&b0).expect("two-pair state"),
        fusion_basis_change(&b1).expect("two-pair state"),
    ]
}

/// Double exchange resolved by fusion channel: each channel component of the
/// state is multiplied by `(R_c^{σσ})²` from `model`.
pub fn fusion_channel_braid(
    state: &PunctureState,
    model: &AnyonModel,
) -> Result<PunctureState, StateError> {
    state.require_pairs(2)?;
    let [r1, r2] = model.sigma_exchange()?;
    let phases = [r1.powi(2).to_complex(), r2.powi(2).to_complex()];
    let mut out = vec![linalg::ZERO; 4];
    for subspace in Subspace::ALL {
        for (v, phase) in fusion_channel_vectors(subspace).iter().zip(phases) {
            let c = v.inner(state) * phase;
            for (o, a) in out.iter_mut().zip(&v.amplitudes) {
                *o += c * a;
            }
        }
    }
    Ok(PunctureState::from_unit(2, out))
}

fn check_braid(n_pairs: usize, i: usize, j: usize) -> Result<(), StateError> {
    if i == j || i == 0 || j == 0 || i > n_pairs || j > n_pairs {
        return Err(StateError::InvalidBraid { i, j });
    }
    Ok(())
}

/// Sign of the double braid of pairs `i` and `j` (1-based) on basis string `index`.
pub(crate) fn braid_sign(index: usize, i: usize, j: usize, n_pairs: usize) -> f64 {
    if pair_bit(index, i, n_pairs) == pair_bit(index, j, n_pairs) {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn apply_double_braid(
    amplitudes: &[C64],
    n_pairs: usize,
    i: usize,
    j: usize,
) -> Result<Vec<C64>, StateError> {
    check_braid(n_pairs, i, j)?;
    Ok(amplitudes
        .iter()
        .enumerate()
        .map(|(idx, a)| a * braid_sign(idx, i, j, n_pairs))
        .collect())
}

/// Braid pair `i` fully around pair `j` (1-based): `−1` on basis strings where
/// the two pairs carry different species.
pub fn double_braid(
    state: &PunctureState,
    i: usize,
    j: usize,
) -> Result<PunctureState, StateError> {
    let amps = apply_double_braid(&state.amplitudes, state.n_pairs, i, j)?;
    Ok(PunctureState::from_unit(state.n_pairs, amps))
}

/// Logical Pauli Z: flips the species of pair 1.
pub fn logical_z(state: &PunctureState) -> Result<PunctureState, StateError> {
    state.require_pairs(2)?;
    let a = &state.amplitudes;
    Ok(PunctureState::from_unit(2, vec![a[2], a[3], a[0], a[1]]))
}

/// `M[r][c] = ⟨b_r| op |b_c⟩` on the logical basis of `subspace`, plus the
/// largest weight any basis image leaves outside the subspace.
pub fn logical_matrix<F>(subspace: Subspace, op: F) -> Result<(Mat2, f64), StateError>
where
    F: Fn(&PunctureState) -> Result<PunctureState, StateError>,
{
    let basis = logical_pair_basis(subspace);
    let mut m = [[linalg::ZERO; 2]; 2];
    let mut leak = 0.0_f64;
    for (c, bc) in basis.iter().enumerate() {
        let image = op(bc)?;
        let mut inside = 0.0;
        for (r, br) in basis.iter().enumerate() {
            m[r][c] = br.inner(&image);
            inside += m[r][c].norm_sqr();
        }
        leak = leak.max((linalg::norm_sqr(&image.amplitudes) - inside).max(0.0));
    }
    Ok((m, leak))
}

/// State over individual punctures, `{E, M}^{2n}`, puncture 1 most significant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullNoiseState {
    n_pairs: usize,
    amplitudes: Vec<C64>,
}

impl FullNoiseState {
    pub fn new(n_pairs: usize, amplitudes: Vec<C64>) -> Result<Self, StateError> {
        let expected = 1usize << (2 * n_pairs);
        if amplitudes.len() != expected {
            return Err(StateError::Dimension {
                expected,
                got: amplitudes.len(),
            });
        }
        Ok(FullNoiseState {
            n_pairs,
            amplitudes: normalized(amplitudes)?,
        })
    }

    pub(crate) fn from_unit(n_pairs: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << (2 * n_pairs));
        FullNoiseState {
            n_pairs,
            amplitudes,
        }
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn n_punctures(&self) -> usize {
        2 * self.n_pairs
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes).sqrt()
    }

    pub fn inner(&self, other: &FullNoiseState) -> C64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn max_diff(&self, other: &FullNoiseState) -> f64 {
        if self.n_pairs != other.n_pairs {
            return f64::INFINITY;
        }
        linalg::max_abs_diff(&self.amplitudes, &other.amplitudes)
    }
}

/// Puncture-string index of pair string `pair_index`: `p₁p₂… ↦ p₁p₁p₂p₂…`.
fn diagonal_index(pair_index: usize, n_pairs: usize) -> usize {
    (1..=n_pairs).fold(0, |acc, k| {
        let b = pair_bit(pair_index, k, n_pairs);
        (acc << 2) | (b << 1) | b
    })
}

pub fn embed_full(state: &PunctureState) -> FullNoiseState {
    let n = state.n_pairs;
    let mut amps = vec![linalg::ZERO; 1 << (2 * n)];
    for (idx, a) in state.amplitudes.iter().enumerate() {
        amps[diagonal_index(idx, n)] = *a;
    }
    FullNoiseState::from_unit(n, amps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Renormalized pair-diagonal component; `None` on total leakage.
    pub state: Option<PunctureState>,
    /// Weight outside the pair-diagonal subspace, in `[0, 1]`.
    pub leakage: f64,
}

pub fn project_pair_diagonal(state: &FullNoiseState) -> Projection {
    let n = state.n_pairs;
    let diag: Vec<C64> = (0..1usize << n)
        .map(|idx| state.amplitudes[diagonal_index(idx, n)])
        .collect();
    let total = linalg::norm_sqr(&state.amplitudes);
    // off-diagonal weight summed directly so diagonal-preserving evolutions
    // report exactly zero
    let mut is_diag = vec![false; state.amplitudes.len()];
    for idx in 0..1usize << n {
        is_diag[diagonal_index(idx, n)] = true;
    }
    let off: f64 = state
        .amplitudes
        .iter()
        .zip(&is_diag)
        .filter(|(_, &d)| !d)
        .map(|(a, _)| a.norm_sqr())
        .sum();
    let leakage = if total > 0.0 {
        (off / total).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let state = PunctureState::new(n, diag).ok();
    Projection { state, leakage }
}
