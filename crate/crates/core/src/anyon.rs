//! Algebraic data of the two anyon models: the toric-code Abelian anyons
//! `{1, e, m, ε}` and the Ising anyons `{1, ψ, σ}`.
//!
//! Phases that appear in the tables are rational multiples of π and are
//! stored exactly as [`Phase`] values. They are converted to floating point
//! only when a complex number is requested, so identities such as
//! `R_ε^{em} · R_ε^{me} = −1` hold bit-exactly.
//!
//! Label order is fixed (`1, e, m, ε` and `1, ψ, σ`) and determines every
//! matrix index exported by this module.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Mat2, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnyonError {
    #[error("label {label} does not belong to the {model} model")]
    LabelNotInModel { label: String, model: &'static str },
    #[error("fusion channel {a} x {b} -> {c} is forbidden")]
    InvalidChannel { a: String, b: String, c: String },
    #[error("model is incomplete: {0}")]
    IncompleteModel(&'static str),
    #[error("model data violates an invariant: {0}")]
    InvalidModel(String),
    #[error("unknown anyon label {0:?}")]
    UnknownLabel(String),
}

/// A unit-modulus phase `exp(iπ·num/den)` with the angle reduced into `[0, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };
    pub const MINUS_ONE: Phase = Phase { num: 1, den: 1 };

    /// `exp(iπ·num/den)`. Panics if `den` is zero.
    pub fn from_pi_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator must be non-zero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        num /= g;
        den /= g;
        Phase {
            num: num.rem_euclid(2 * den),
            den,
        }
    }

    /// Angle as a reduced fraction of π in `[0, 2)`.
    pub fn pi_fraction(&self) -> (i64, i64) {
        (self.num, self.den)
    }

    pub fn angle(&self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    pub fn to_complex(&self) -> C64 {
        // quarter turns are returned exactly
        match (self.num, self.den) {
            (0, 1) => C64::new(1.0, 0.0),
            (1, 2) => C64::new(0.0, 1.0),
            (1, 1) => C64::new(-1.0, 0.0),
            (3, 2) => C64::new(0.0, -1.0),
            _ => linalg::cis(self.angle()),
        }
    }

    pub fn conj(&self) -> Self {
        Phase::from_pi_fraction(-self.num, self.den)
    }

    pub fn powi(&self, k: i64) -> Self {
        Phase::from_pi_fraction(self.num * k, self.den)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_pi_fraction(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(iπ·{}/{})", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    Toric,
    Ising,
}

impl ModelId {
    pub fn name(self) -> &'static str {
        match self {
            ModelId::Toric => "toric",
            ModelId::Ising => "ising",
        }
    }

    fn symbols(self) -> &'static [&'static str] {
        match self {
            ModelId::Toric => &["1", "e", "m", "ε"],
            ModelId::Ising => &["1", "ψ", "σ"],
        }
    }

    fn ascii_symbols(self) -> &'static [&'static str] {
        match self {
            ModelId::Toric => &["1", "e", "m", "eps"],
            ModelId::Ising => &["1", "psi", "sigma"],
        }
    }
}

/// A charge of one registered model. The model is part of the label, so a
/// toric `1` and an Ising `1` are different labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnyonLabel {
    model: ModelId,
    index: u8,
}

impl AnyonLabel {
    pub fn model(&self) -> ModelId {
        self.model
    }

    /// Position of the label in its model's fixed ordering.
    pub fn index(&self) -> usize {
        self.index as usize
    }

    pub fn symbol(&self) -> &'static str {
        self.model.symbols()[self.index as usize]
    }

    pub fn is_vacuum(&self) -> bool {
        self.index == 0
    }
}

impl fmt::Display for AnyonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

pub mod toric {
    use super::{AnyonLabel, ModelId};

    pub const ONE: AnyonLabel = AnyonLabel {
        model: ModelId::Toric,
        index: 0,
    };
    pub const E: AnyonLabel = AnyonLabel {
        model: ModelId::Toric,
        index: 1,
    };
    pub const M: AnyonLabel = AnyonLabel {
        model: ModelId::Toric,
        index: 2,
    };
    pub const EPSILON: AnyonLabel = AnyonLabel {
        model: ModelId::Toric,
        index: 3,
    };
}

pub mod ising {
    use super::{AnyonLabel, ModelId};

    pub const ONE: AnyonLabel = AnyonLabel {
        model: ModelId::Ising,
        index: 0,
    };
    pub const PSI: AnyonLabel = AnyonLabel {
        model: ModelId::Ising,
        index: 1,
    };
    pub const SIGMA: AnyonLabel = AnyonLabel {
        model: ModelId::Ising,
        index: 2,
    };
}

/// Fusion multiplicities, braid phases and the single σσσσ F-matrix of a model.
#[derive(Debug, Clone)]
pub struct AnyonModel {
    id: ModelId,
    labels: Vec<AnyonLabel>,
    /// `fusion[a][b][c] = N_ab^c`
    fusion: Vec<Vec<Vec<u32>>>,
    r_symbols: BTreeMap<(u8, u8, u8), Phase>,
    f_matrix: Option<Mat2>,
    spins: Vec<Phase>,
    fs_indicators: Vec<i8>,
    chern_number: i32,
}

impl AnyonModel {
    /// Toric-code anyons with `e × m = ε` and every label its own antiparticle.
    pub fn toric() -> Self {
        use toric::*;
        let labels = vec![ONE, E, M, EPSILON];
        // Z2 × Z2 fusion: index bits (e = 01, m = 10, ε = 11) add mod 2
        let mut fusion = vec![vec![vec![0; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                fusion[a][b][a ^ b] = 1;
            }
        }
        let mut r = BTreeMap::new();
        let mut put = |a: AnyonLabel, b: AnyonLabel, c: AnyonLabel, num, den| {
            r.insert(
                (a.index, b.index, c.index),
                Phase::from_pi_fraction(num, den),
            );
        };
        for x in [ONE, E, M, EPSILON] {
            put(ONE, x, x, 0, 1);
            put(x, ONE, x, 0, 1);
        }
        put(E, M, EPSILON, 0, 1);
        put(M, E, EPSILON, 1, 1);
        put(EPSILON, M, E, 0, 1);
        put(M, EPSILON, E, 1, 1);
        put(E, EPSILON, M, 0, 1);
        put(EPSILON, E, M, 1, 1);
        put(E, E, ONE, 0, 1);
        put(M, M, ONE, 0, 1);
        put(EPSILON, EPSILON, ONE, 1, 1);

        AnyonModel {
            id: ModelId::Toric,
            labels,
            fusion,
            r_symbols: r,
            f_matrix: None,
            spins: vec![Phase::ONE, Phase::ONE, Phase::ONE, Phase::MINUS_ONE],
            fs_indicators: vec![1, 1, 1, 1],
            chern_number: 0,
        }
    }

    /// Ising anyons (Chern number 1) with `σ × σ = 1 + ψ`.
    pub fn ising() -> Self {
        use ising::*;
        let labels = vec![ONE, PSI, SIGMA];
        let mut fusion = vec![vec![vec![0; 3]; 3]; 3];
        let mut fuse = |a: AnyonLabel, b: AnyonLabel, c: AnyonLabel| {
            fusion[a.index()][b.index()][c.index()] = 1;
            fusion[b.index()][a.index()][c.index()] = 1;
        };
        for x in [ONE, PSI, SIGMA] {
            fuse(ONE, x, x);
        }
        fuse(PSI, PSI, ONE);
        fuse(PSI, SIGMA, SIGMA);
        fuse(SIGMA, SIGMA, ONE);
        fuse(SIGMA, SIGMA, PSI);

        let mut r = BTreeMap::new();
        let mut put = |a: AnyonLabel, b: AnyonLabel, c: AnyonLabel, num, den| {
            r.insert(
                (a.index, b.index, c.index),
                Phase::from_pi_fraction(num, den),
            );
        };
        for x in [ONE, PSI, SIGMA] {
            put(ONE, x, x, 0, 1);
            put(x, ONE, x, 0, 1);
        }
        put(PSI, PSI, ONE, 1, 1);
        put(SIGMA, SIGMA, ONE, -1, 8);
        put(PSI, SIGMA, SIGMA, -1, 2);
        put(SIGMA, PSI, SIGMA, -1, 2);
        put(SIGMA, SIGMA, PSI, 3, 8);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = [
            [C64::new(h, 0.0), C64::new(h, 0.0)],
            [C64::new(h, 0.0), C64::new(-h, 0.0)],
        ];

        AnyonModel {
            id: ModelId::Ising,
            labels,
            fusion,
            r_symbols: r,
            f_matrix: Some(f),
            spins: vec![Phase::ONE, Phase::MINUS_ONE, Phase::from_pi_fraction(1, 8)],
            fs_indicators: vec![1, 1, 1],
            chern_number: 1,
        }
    }

    pub fn by_id(id: ModelId) -> Self {
        match id {
            ModelId::Toric => Self::toric(),
            ModelId::Ising => Self::ising(),
        }
    }

    /// Replaces the F-matrix. Fails if the replacement is not unitary.
    pub fn with_f_matrix(mut self, f: Mat2) -> Result<Self, AnyonError> {
        self.f_matrix = Some(f);
        self.validate()?;
        Ok(self)
    }

    pub fn without_f_matrix(mut self) -> Self {
        self.f_matrix = None;
        self
    }

    /// Overrides one R-symbol; the channel must be allowed.
    pub fn with_r_symbol(
        mut self,
        a: AnyonLabel,
        b: AnyonLabel,
        c: AnyonLabel,
        phase: Phase,
    ) -> Result<Self, AnyonError> {
        self.check_channel(a, b, c)?;
        self.r_symbols.insert((a.index, b.index, c.index), phase);
        Ok(self)
    }

    pub fn without_r_symbol(mut self, a: AnyonLabel, b: AnyonLabel, c: AnyonLabel) -> Self {
        self.r_symbols.remove(&(a.index, b.index, c.index));
        self
    }

    pub fn id(&self) -> ModelId {
        self.id
    }

    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    pub fn labels(&self) -> &[AnyonLabel] {
        &self.labels
    }

    pub fn vacuum(&self) -> AnyonLabel {
        self.labels[0]
    }

    pub fn f_matrix(&self) -> Option<&Mat2> {
        self.f_matrix.as_ref()
    }

    pub fn chern_number(&self) -> i32 {
        self.chern_number
    }

    /// Accepts the model's symbols (`ε`, `ψ`, `σ`) and ASCII spellings
    /// (`eps`, `psi`, `sigma`).
    pub fn parse_label(&self, text: &str) -> Result<AnyonLabel, AnyonError> {
        let t = text.trim();
        let symbols = self.id.symbols();
        let ascii = self.id.ascii_symbols();
        (0..symbols.len())
            .find(|&i| symbols[i] == t || ascii[i].eq_ignore_ascii_case(t))
            .map(|i| self.labels[i])
            .ok_or_else(|| AnyonError::UnknownLabel(text.to_string()))
    }

    pub fn contains(&self, a: AnyonLabel) -> bool {
        a.model == self.id && a.index() < self.labels.len()
    }

    fn check_label(&self, a: AnyonLabel) -> Result<(), AnyonError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(AnyonError::LabelNotInModel {
                label: format!("{}:{}", a.model.name(), a.symbol()),
                model: self.name(),
            })
        }
    }

    fn check_channel(&self, a: AnyonLabel, b: AnyonLabel, c: AnyonLabel) -> Result<(), AnyonError> {
        self.check_label(a)?;
        self.check_label(b)?;
        self.check_label(c)?;
        if self.multiplicity(a, b, c) == 0 {
            return Err(AnyonError::InvalidChannel {
                a: a.to_string(),
                b: b.to_string(),
                c: c.to_string(),
            });
        }
        Ok(())
    }

    /// `N_ab^c`; zero for labels outside the model.
    pub fn multiplicity(&self, a: AnyonLabel, b: AnyonLabel, c: AnyonLabel) -> u32 {
        if !(self.contains(a) && self.contains(b) && self.contains(c)) {
            return 0;
        }
        self.fusion[a.index()][b.index()][c.index()]
    }

    /// All outcomes `c` of `a ⊗ b` with their multiplicities, in label order.
    pub fn fuse(&self, a: AnyonLabel, b: AnyonLabel) -> Result<Vec<(AnyonLabel, u32)>, AnyonError> {
        self.check_label(a)?;
        self.check_label(b)?;
        Ok(self
            .labels
            .iter()
            .filter_map(|&c| {
                let n = self.fusion[a.index()][b.index()][c.index()];
                (n > 0).then_some((c, n))
            })
            .collect())
    }

    /// `R_c^{ab}`. The order of `a` and `b` matters.
    pub fn r_symbol(
        &self,
        a: AnyonLabel,
        b: AnyonLabel,
        c: AnyonLabel,
    ) -> Result<Phase, AnyonError> {
        self.check_channel(a, b, c)?;
        self.r_symbols
            .get(&(a.index, b.index, c.index))
            .copied()
            .ok_or(AnyonError::IncompleteModel(
                "R-symbol missing for an allowed channel",
            ))
    }

    /// Full braid of `a` around `b` in channel `c`: `R_c^{ba} · R_c^{ab}`.
    pub fn monodromy(
        &self,
        a: AnyonLabel,
        b: AnyonLabel,
        c: AnyonLabel,
    ) -> Result<Phase, AnyonError> {
        Ok(self.r_symbol(b, a, c)? * self.r_symbol(a, b, c)?)
    }

    pub fn spin(&self, a: AnyonLabel) -> Result<Phase, AnyonError> {
        self.check_label(a)?;
        Ok(self.spins[a.index()])
    }

    pub fn fs_indicator(&self, a: AnyonLabel) -> Result<i8, AnyonError> {
        self.check_label(a)?;
        Ok(self.fs_indicators[a.index()])
    }

    /// The label whose self-fusion has exactly two channels (σ for Ising),
    /// together with those channels in label order.
    pub fn non_abelian_pair(&self) -> Option<(AnyonLabel, [AnyonLabel; 2])> {
        self.labels.iter().find_map(|&s| {
            let out = self.fuse(s, s).ok()?;
            (out.len() == 2).then(|| (s, [out[0].0, out[1].0]))
        })
    }

    /// `diag(R_c1^{σσ}, R_c2^{σσ})` as phases, channels in label order.
    pub fn sigma_exchange(&self) -> Result<[Phase; 2], AnyonError> {
        let (s, [c1, c2]) = self.non_abelian_pair().ok_or(AnyonError::IncompleteModel(
            "no label with two self-fusion channels",
        ))?;
        Ok([self.r_symbol(s, s, c1)?, self.r_symbol(s, s, c2)?])
    }

    /// Braid evolution `B = F · R² · F⁻¹` with `R = diag(R_1^{σσ}, R_ψ^{σσ})`.
    pub fn braid_evolution(&self) -> Result<Mat2, AnyonError> {
        let f = self
            .f_matrix
            .ok_or(AnyonError::IncompleteModel("no F-matrix"))?;
        let [r1, r2] = self.sigma_exchange()?;
        let r_sq = [
            [r1.powi(2).to_complex(), linalg::ZERO],
            [linalg::ZERO, r2.powi(2).to_complex()],
        ];
        let f_inv = linalg::mat2_inverse(&f)
            .ok_or_else(|| AnyonError::InvalidModel("F-matrix is singular".into()))?;
        Ok(linalg::mat2_mul(&linalg::mat2_mul(&f, &r_sq), &f_inv))
    }

    /// Checks the structural invariants: vacuum fusion, commutativity of
    /// multiplicities, unit modulus of R-symbols and unitarity of F.
    pub fn validate(&self) -> Result<(), AnyonError> {
        let n = self.labels.len();
        let vac = 0;
        for a in 0..n {
            for b in 0..n {
                let delta = u32::from(a == b);
                if self.fusion[vac][a][b] != delta || self.fusion[a][vac][b] != delta {
                    return Err(AnyonError::InvalidModel(format!(
                        "vacuum fusion is not the identity at ({}, {})",
                        self.labels[a], self.labels[b]
                    )));
                }
                for c in 0..n {
                    if self.fusion[a][b][c] != self.fusion[b][a][c] {
                        return Err(AnyonError::InvalidModel(format!(
                            "fusion not commutative for {} x {}",
                            self.labels[a], self.labels[b]
                        )));
                    }
                }
            }
        }
        for (&(a, b, c), phase) in &self.r_symbols {
            if self.fusion[a as usize][b as usize][c as usize] == 0 {
                return Err(AnyonError::InvalidModel(
                    "R-symbol stored for a forbidden channel".into(),
                ));
            }
            if (phase.to_complex().norm() - 1.0).abs() > 1e-15 {
                return Err(AnyonError::InvalidModel("R-symbol not unit modulus".into()));
            }
        }
        if let Some(f) = &self.f_matrix {
            if linalg::unitarity_defect(f) > 1e-12 {
                return Err(AnyonError::InvalidModel("F-matrix is not unitary".into()));
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> ModelDocument {
        let sym = |i: u8| self.labels[i as usize].symbol().to_string();
        let mut fusion = Vec::new();
        for a in &self.labels {
            for b in &self.labels {
                for c in &self.labels {
                    let n = self.fusion[a.index()][b.index()][c.index()];
                    if n > 0 {
                        fusion.push(FusionEntry {
                            a: a.symbol().into(),
                            b: b.symbol().into(),
                            c: c.symbol().into(),
                            multiplicity: n,
                        });
                    }
                }
            }
        }
        let r_symbols = self
            .r_symbols
            .iter()
            .map(|(&(a, b, c), p)| {
                let (num, den) = p.pi_fraction();
                RSymbolEntry {
                    channel: [sym(a), sym(b), sym(c)],
                    angle_of_pi: [num, den],
                }
            })
            .collect();
        let angle = |p: &Phase| {
            let (n, d) = p.pi_fraction();
            [n, d]
        };
        ModelDocument {
            model: self.name(),
            labels: self.labels.iter().map(|l| l.symbol().to_string()).collect(),
            fusion,
            r_symbols,
            spins_angle_of_pi: self.spins.iter().map(angle).collect(),
            fs_indicators: self.fs_indicators.clone(),
            chern_number: self.chern_number,
            f_matrix: self.f_matrix,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FusionEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct RSymbolEntry {
    /// `[a, b, c]` for `R_c^{ab}`
    pub channel: [String; 3],
    /// `[num, den]`: the phase is `exp(iπ·num/den)`
    pub angle_of_pi: [i64; 2],
}

/// JSON export of a model's tables.
#[derive(Debug, Clone, Serialize)]
pub struct ModelDocument {
    pub model: &'static str,
    pub labels: Vec<String>,
    pub fusion: Vec<FusionEntry>,
    pub r_symbols: Vec<RSymbolEntry>,
    pub spins_angle_of_pi: Vec<[i64; 2]>,
    pub fs_indicators: Vec<i8>,
    pub chern_number: i32,
    pub f_matrix: Option<Mat2>,
}
