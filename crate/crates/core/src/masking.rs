//! Three-party Latin-square masking of a qutrit `α|1⟩ + β|ψ⟩ + γ|σ⟩`, and the
//! six-puncture (three pair) representation used for braiding the `|σσσ⟩` term.
//!
//! Puncture numbering `s₁ … s₆` maps onto pair indices as `1,3,5 → 1,2,3`, so
//! `B₁₃ ↦ (1,2)`, `B₃₅ ↦ (2,3)` and `B₁₅ ↦ (1,3)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::anyon::{ising, AnyonError, AnyonLabel, AnyonModel};
use crate::linalg::{self, C64};
use crate::puncture::{self, StateError};

pub const NORM_TOLERANCE: f64 = 1e-12;

/// Description of the pair-index convention, echoed in reports.
pub const PAIR_INDEX_MAP: &str = "B13->(1,2) B35->(2,3) B15->(1,3)";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaskError {
    #[error("input is not normalized: |α|²+|β|²+|γ|² = {0}")]
    NotNormalized(f64),
    #[error("malformed braid word {0:?}")]
    BadWord(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Anyon(#[from] AnyonError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaskInput {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
}

impl MaskInput {
    pub fn new(alpha: C64, beta: C64, gamma: C64) -> Result<Self, MaskError> {
        let n = alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(MaskError::NotNormalized(n));
        }
        Ok(MaskInput { alpha, beta, gamma })
    }

    /// Draws a normalized input from `rng` (components uniform in the unit box).
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        loop {
            let mut c = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (a, b, g) = (c(), c(), c());
            let n = (a.norm_sqr() + b.norm_sqr() + g.norm_sqr()).sqrt();
            if n > 1e-3 {
                return MaskInput {
                    alpha: a / n,
                    beta: b / n,
                    gamma: g / n,
                };
            }
        }
    }

    fn coefficient(&self, which: Coefficient) -> C64 {
        match which {
            Coefficient::Alpha => self.alpha,
            Coefficient::Beta => self.beta,
            Coefficient::Gamma => self.gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    Alpha,
    Beta,
    Gamma,
}

/// Qutrit label index: `1 → 0`, `ψ → 1`, `σ → 2`.
pub type Qutrit = usize;

/// The nine basis strings of the masked state and the input amplitude each carries.
pub const LATIN_SUPPORT: [([Qutrit; 3], Coefficient); 9] = [
    ([0, 0, 0], Coefficient::Alpha),
    ([1, 1, 1], Coefficient::Alpha),
    ([2, 2, 2], Coefficient::Alpha),
    ([0, 2, 1], Coefficient::Beta),
    ([1, 0, 2], Coefficient::Beta),
    ([2, 1, 0], Coefficient::Beta),
    ([0, 1, 2], Coefficient::Gamma),
    ([1, 2, 0], Coefficient::Gamma),
    ([2, 0, 1], Coefficient::Gamma),
];

fn tensor_index(labels: [Qutrit; 3]) -> usize {
    labels[0] * 9 + labels[1] * 3 + labels[2]
}

fn qutrit_label(q: Qutrit) -> AnyonLabel {
    [ising::ONE, ising::PSI, ising::SIGMA][q]
}

/// Fixing any one party's label, the support strings holding that label show
/// every label of each other party exactly once; likewise for every
/// coefficient class.
pub fn latin_square_holds(support: &[([Qutrit; 3], Coefficient)]) -> bool {
    let strings: Vec<[Qutrit; 3]> = support.iter().map(|(s, _)| *s).collect();
    for fixed in 0..3 {
        for value in 0..3 {
            let rows: Vec<_> = strings.iter().filter(|s| s[fixed] == value).collect();
            if rows.len() != 3 {
                return false;
            }
            for other in (0..3).filter(|&p| p != fixed) {
                let mut seen = [false; 3];
                for s in &rows {
                    seen[s[other]] = true;
                }
                if seen != [true; 3] {
                    return false;
                }
            }
        }
    }
    for class in [Coefficient::Alpha, Coefficient::Beta, Coefficient::Gamma] {
        for party in 0..3 {
            let mut seen = [false; 3];
            for (s, _) in support.iter().filter(|(_, c)| *c == class) {
                seen[s[party]] = true;
            }
            if seen != [true; 3] {
                return false;
            }
        }
    }
    true
}

/// Amplitude tensor over `{1, ψ, σ}³` for parties `(A, B, C)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaskedState {
    amplitudes: Vec<C64>,
}

impl MaskedState {
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, labels: [Qutrit; 3]) -> C64 {
        self.amplitudes[tensor_index(labels)]
    }

    pub fn norm(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes).sqrt()
    }

    /// Basis strings with non-zero amplitude.
    pub fn support(&self) -> Vec<[Qutrit; 3]> {
        let mut out = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if self.amplitude([a, b, c]) != linalg::ZERO {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }
}

pub fn mask(input: &MaskInput) -> MaskedState {
    let scale = 1.0 / 3f64.sqrt();
    let mut amplitudes = vec![linalg::ZERO; 27];
    for (labels, which) in LATIN_SUPPORT {
        amplitudes[tensor_index(labels)] = input.coefficient(which) * scale;
    }
    MaskedState { amplitudes }
}

pub type Density3 = [[C64; 3]; 3];

/// Reduced density matrix of one party of a vector over `{1,ψ,σ}³ ⊗ C^internal`,
/// tracing out the other two parties and the internal factor.
fn reduced(amplitudes: &[C64], internal: usize, keep: Party) -> Density3 {
    debug_assert_eq!(amplitudes.len(), 27 * internal);
    let k = keep.index();
    let mut rho = [[linalg::ZERO; 3]; 3];
    for (idx, amp) in amplitudes.iter().enumerate() {
        let labels = idx / internal;
        let digits = [labels / 9, (labels / 3) % 3, labels % 3];
        for other in 0..3 {
            let mut partner = digits;
            partner[k] = other;
            let pidx = tensor_index(partner) * internal + idx % internal;
            rho[digits[k]][other] += amp * amplitudes[pidx].conj();
        }
    }
    rho
}

/// Partial trace onto `keep`.
pub fn marginal(state: &MaskedState, keep: Party) -> Density3 {
    reduced(&state.amplitudes, 1, keep)
}

/// Largest entry of `|ρ − I/3|`.
pub fn deviation_from_maximally_mixed(rho: &Density3) -> f64 {
    let mut worst = 0.0_f64;
    for (r, row) in rho.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let target = if r == c { 1.0 / 3.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Amplitudes over the 8 pair strings `{E, M}³`, pair 1 most significant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SixPunctureState {
    amplitudes: Vec<C64>,
}

impl SixPunctureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self, MaskError> {
        let s = puncture::PunctureState::new(3, amplitudes)?;
        Ok(SixPunctureState {
            amplitudes: s.amplitudes().to_vec(),
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &SixPunctureState) -> C64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn max_diff(&self, other: &SixPunctureState) -> f64 {
        linalg::max_abs_diff(&self.amplitudes, &other.amplitudes)
    }
}

/// `|s₁s₂s₃⟩`: amplitude of `(p₁p₂p₃)` is `Π s_k^{[p_k = M]} / √8`.
pub fn six_puncture_basis(signs: [Sign; 3]) -> SixPunctureState {
    let scale = 1.0 / 8f64.sqrt();
    let amplitudes = (0..8usize)
        .map(|idx| {
            let v: f64 = (0..3)
                .filter(|k| (idx >> (2 - k)) & 1 == 1)
                .map(|k| signs[k].value())
                .product();
            C64::new(v * scale, 0.0)
        })
        .collect();
    SixPunctureState { amplitudes }
}

/// Named groups of pair strings: `M₁` all pairs equal, `M₂` pair 3 differs,
/// `M₃` pair 1 differs, `M₄` pair 2 differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MSubset {
    M1,
    M2,
    M3,
    M4,
}

impl MSubset {
    pub const ALL: [MSubset; 4] = [MSubset::M1, MSubset::M2, MSubset::M3, MSubset::M4];

    /// Pair-string indices (`EEE = 0 … MMM = 7`).
    pub fn members(self) -> [usize; 2] {
        match self {
            MSubset::M1 => [0b000, 0b111],
            MSubset::M2 => [0b001, 0b110],
            MSubset::M3 => [0b011, 0b100],
            MSubset::M4 => [0b010, 0b101],
        }
    }

    pub fn of(index: usize) -> MSubset {
        *MSubset::ALL
            .iter()
            .find(|m| m.members().contains(&index))
            .expect("index in 0..8")
    }
}

pub fn pair_double_braid(
    state: &SixPunctureState,
    i: usize,
    j: usize,
) -> Result<SixPunctureState, MaskError> {
    let amplitudes = puncture::apply_double_braid(&state.amplitudes, 3, i, j)?;
    Ok(SixPunctureState { amplitudes })
}

/// Sequence of pair double braids, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BraidWord(pub Vec<(usize, usize)>);

impl BraidWord {
    /// `B₁₃B₁₅B₅₁B₃₁` in pair indices.
    pub fn four_adjacent() -> Self {
        BraidWord(vec![(1, 2), (1, 3), (3, 1), (2, 1)])
    }

    pub fn letters(&self) -> &[(usize, usize)] {
        &self.0
    }

    /// True when every unordered pair occurs an even number of times.
    pub fn endpoints_trivial(&self) -> bool {
        let mut counts = std::collections::BTreeMap::new();
        for &(i, j) in &self.0 {
            *counts.entry((i.min(j), i.max(j))).or_insert(0usize) += 1;
        }
        counts.values().all(|c| c % 2 == 0)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(i, j)| format!("{i},{j}")).collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for BraidWord {
    type Err = MaskError;

    /// Parses `"1,2;2,3"`; the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MaskError::BadWord(s.to_string());
        let mut letters = Vec::new();
        for letter in s.split(';').map(str::trim).filter(|l| !l.is_empty()) {
            let (a, b) = letter.split_once(',').ok_or_else(bad)?;
            let i = a.trim().parse().map_err(|_| bad())?;
            let j = b.trim().parse().map_err(|_| bad())?;
            letters.push((i, j));
        }
        Ok(BraidWord(letters))
    }
}

pub fn braid_word(
    state: &SixPunctureState,
    word: &BraidWord,
) -> Result<SixPunctureState, MaskError> {
    word.0
        .iter()
        .try_fold(state.clone(), |s, &(i, j)| pair_double_braid(&s, i, j))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub max_marginal_deviation: f64,
    /// `[A, B, C]`
    pub per_party_deviations: [f64; 3],
    pub braid_word: String,
    pub pair_index_map: &'static str,
}

/// Masked state after a braid word, as a vector over `{1,ψ,σ}³ ⊗ C⁸`.
///
/// Every term carries a six-puncture internal state, initially `|+++⟩`. A letter
/// `(i, j)` braids parties `i` and `j`: terms without a `σσ` pair take the
/// scalar monodromy of their unique fusion channel; the `|σσσ⟩` term's
/// internal amplitudes take `(R_1^{σσ})²` on strings where pairs `i`, `j`
/// agree and `(R_ψ^{σσ})²` where they differ.
pub fn braided_masked_vector(
    model: &AnyonModel,
    input: &MaskInput,
    word: &BraidWord,
) -> Result<Vec<C64>, MaskError> {
    let reference = six_puncture_basis([Sign::Plus; 3]);
    let sigma = ising::SIGMA;
    let [m1, mpsi] = [
        model.monodromy(sigma, sigma, ising::ONE)?.to_complex(),
        model.monodromy(sigma, sigma, ising::PSI)?.to_complex(),
    ];
    let state = mask(input);
    let mut out = vec![linalg::ZERO; 27 * 8];
    for (labels, _) in LATIN_SUPPORT {
        let coeff = state.amplitude(labels);
        let mut internal = reference.amplitudes.clone();
        let mut scalar = linalg::ONE;
        for &(i, j) in word.letters() {
            if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
                return Err(StateError::InvalidBraid { i, j }.into());
            }
            let (a, b) = (qutrit_label(labels[i - 1]), qutrit_label(labels[j - 1]));
            if a == sigma && b == sigma {
                for (idx, amp) in internal.iter_mut().enumerate() {
                    *amp *= if puncture::braid_sign(idx, i, j, 3) > 0.0 {
                        m1
                    } else {
                        mpsi
                    };
                }
            } else {
                let channels = model.fuse(a, b)?;
                let [(c, _)] = channels[..] else {
                    unreachable!("only σ × σ has two channels");
                };
                scalar *= model.monodromy(a, b, c)?.to_complex();
            }
        }
        let base = tensor_index(labels) * 8;
        for (k, amp) in internal.iter().enumerate() {
            out[base + k] = coeff * scalar * amp;
        }
    }
    Ok(out)
}

pub fn braided_marginals(
    model: &AnyonModel,
    input: &MaskInput,
    word: &BraidWord,
) -> Result<[Density3; 3], MaskError> {
    let v = braided_masked_vector(model, input, word)?;
    Ok(Party::ALL.map(|p| reduced(&v, 8, p)))
}

/// Applies the braid word's phases to the masked state and measures how far
/// each single-party marginal is from `I/3`.
pub fn masking_braid_invariance(
    model: &AnyonModel,
    input: &MaskInput,
    word: &BraidWord,
) -> Result<InvarianceReport, MaskError> {
    let marginals = braided_marginals(model, input, word)?;
    let per_party = marginals.map(|rho| deviation_from_maximally_mixed(&rho));
    Ok(InvarianceReport {
        max_marginal_deviation: per_party.iter().copied().fold(0.0, f64::max),
        per_party_deviations: per_party,
        braid_word: word.to_string(),
        pair_index_map: PAIR_INDEX_MAP,
    })
}

/// Seeded sweep over random inputs; deviations are maxima over all samples.
pub fn mask_check(
    model: &AnyonModel,
    samples: usize,
    seed: u64,
    word: &BraidWord,
) -> Result<InvarianceReport, MaskError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_party = [0.0_f64; 3];
    for _ in 0..samples {
        let input = MaskInput::random(&mut rng);
        let r = masking_braid_invariance(model, &input, word)?;
        for (acc, d) in per_party.iter_mut().zip(r.per_party_deviations) {
            *acc = acc.max(d);
        }
    }
    Ok(InvarianceReport {
        max_marginal_deviation: per_party.iter().copied().fold(0.0, f64::max),
        per_party_deviations: per_party,
        braid_word: word.to_string(),
        pair_index_map: PAIR_INDEX_MAP,
    })
}
