//! Collective dephasing and rotation noise on puncture states.
//!
//! "Collective" means the same single-puncture unitary, with the same
//! parameter, acts on every puncture at once. Noise is applied to
//! [`FullNoiseState`] because rotations create strings where the two
//! punctures of a pair carry different labels.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Mat2, C64};
use crate::puncture::{self, FullNoiseState, Subspace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("a noise scan needs at least one sample")]
    EmptyScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Dephasing,
    Rotation,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 2] = [ChannelKind::Dephasing, ChannelKind::Rotation];
}

impl std::str::FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dephasing" => Ok(ChannelKind::Dephasing),
            "rotation" => Ok(ChannelKind::Rotation),
            other => Err(format!("unknown channel kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollectiveChannel {
    pub kind: ChannelKind,
    /// φ for dephasing, θ for rotation, in radians
    pub parameter: f64,
}

impl CollectiveChannel {
    pub fn dephasing(phi: f64) -> Self {
        CollectiveChannel {
            kind: ChannelKind::Dephasing,
            parameter: phi,
        }
    }

    pub fn rotation(theta: f64) -> Self {
        CollectiveChannel {
            kind: ChannelKind::Rotation,
            parameter: theta,
        }
    }

    /// Single-puncture matrix in the `(|e⟩, |m⟩)` basis, column = image.
    ///
    /// Dephasing: `|e⟩ → |e⟩`, `|m⟩ → e^{iφ}|m⟩`.
    /// Rotation: `|e⟩ → cosθ|e⟩ + sinθ|m⟩`, `|m⟩ → −sinθ|e⟩ + cosθ|m⟩`.
    pub fn single_puncture_matrix(&self) -> Mat2 {
        match self.kind {
            ChannelKind::Dephasing => [
                [linalg::ONE, linalg::ZERO],
                [linalg::ZERO, linalg::cis(self.parameter)],
            ],
            ChannelKind::Rotation => {
                let (s, c) = self.parameter.sin_cos();
                [
                    [C64::new(c, 0.0), C64::new(-s, 0.0)],
                    [C64::new(s, 0.0), C64::new(c, 0.0)],
                ]
            }
        }
    }
}

/// Applies the channel's single-puncture unitary to every puncture.
pub fn apply_channel(channel: &CollectiveChannel, state: &FullNoiseState) -> FullNoiseState {
    let u = channel.single_puncture_matrix();
    let n = state.n_punctures();
    let mut amps = state.amplitudes().to_vec();
    for puncture in 0..n {
        let stride = 1usize << (n - 1 - puncture);
        for base in 0..amps.len() {
            if base & stride != 0 {
                continue;
            }
            let a0 = amps[base];
            let a1 = amps[base | stride];
            amps[base] = u[0][0] * a0 + u[0][1] * a1;
            amps[base | stride] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
    FullNoiseState::from_unit(state.n_pairs(), amps)
}

/// Inner products of the two noise-evolved logical basis states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub subspace: Subspace,
    pub kind: ChannelKind,
    pub parameter: f64,
    pub basis_labels: [&'static str; 2],
    /// `gram[r][c] = ⟨ψ̃_r|ψ̃_c⟩`
    pub gram: Mat2,
    /// Weight of each evolved basis state outside the pair-diagonal code space.
    pub leakages: [f64; 2],
}

impl GramReport {
    /// Largest entry of `|gram − I|`.
    pub fn identity_deviation(&self) -> f64 {
        linalg::mat2_max_diff(&self.gram, &linalg::identity2())
    }
}

pub fn gram_check(subspace: Subspace, channel: &CollectiveChannel) -> GramReport {
    let evolved = puncture::logical_pair_basis(subspace)
        .map(|b| apply_channel(channel, &puncture::embed_full(&b)));
    let mut gram = [[linalg::ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            gram[r][c] = evolved[r].inner(&evolved[c]);
        }
    }
    let leakages = [
        puncture::project_pair_diagonal(&evolved[0]).leakage,
        puncture::project_pair_diagonal(&evolved[1]).leakage,
    ];
    GramReport {
        subspace,
        kind: channel.kind,
        parameter: channel.parameter,
        basis_labels: subspace.basis_labels(),
        gram,
        leakages,
    }
}

/// Parameters drawn uniformly from `[0, 2π)` with a seeded ChaCha stream.
pub fn scan_parameters(samples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| rng.gen_range(0.0..TAU)).collect()
}

pub fn noise_scan(
    subspace: Subspace,
    kind: ChannelKind,
    samples: usize,
    seed: u64,
) -> Result<Vec<GramReport>, NoiseError> {
    if samples == 0 {
        return Err(NoiseError::EmptyScan);
    }
    Ok(scan_parameters(samples, seed)
        .into_iter()
        .map(|p| {
            let channel = CollectiveChannel { kind, parameter: p };
            gram_check(subspace, &channel)
        })
        .collect())
}
