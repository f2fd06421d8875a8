//! Verification suites: named check lists over every module, reported as
//! deterministic JSON.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::anyon::{ising, toric, AnyonLabel, AnyonModel, Phase};
use crate::lattice::{diagonal_chain, string_operator, Defect, StabilizerTableau, StringKind};
use crate::linalg::{self, Mat2, C64};
use crate::masking::{self, BraidWord, MSubset, Sign, SixPunctureState, LATIN_SUPPORT};
use crate::noise::{self, ChannelKind, CollectiveChannel};
use crate::puncture::{self, Logical, PunctureState, Subspace};

pub const PLUMBING: &str = "plumbing";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?} (expected anyons, subspaces, noise, masking, lattice or all)")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot write report to {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Anyons,
    Subspaces,
    Noise,
    Masking,
    Lattice,
    All,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Anyons => "anyons",
            SuiteName::Subspaces => "subspaces",
            SuiteName::Noise => "noise",
            SuiteName::Masking => "masking",
            SuiteName::Lattice => "lattice",
            SuiteName::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "anyons" => SuiteName::Anyons,
            "subspaces" => SuiteName::Subspaces,
            "noise" => SuiteName::Noise,
            "masking" => SuiteName::Masking,
            "lattice" => SuiteName::Lattice,
            "all" => SuiteName::All,
            other => return Err(SuiteError::UnknownSuite(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    pub tolerance: f64,
    pub noise_samples: usize,
    pub mask_samples: usize,
    pub seed: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(suite: SuiteName) -> Self {
        SuiteConfig {
            suite,
            tolerance: 1e-12,
            noise_samples: 200,
            mask_samples: 100,
            seed: 0,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), SuiteError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(SuiteError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.noise_samples == 0 || self.mask_samples == 0 {
            return Err(SuiteError::InvalidConfig(
                "sample counts must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: &'static str,
    pub passed: bool,
    /// Largest deviation seen; structural checks report the mismatch count.
    pub max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub version: &'static str,
    pub config: SuiteConfig,
    pub passed: bool,
    pub n_checks: usize,
    pub n_failed: usize,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn failed(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {} (version {}, seed {}, tolerance {:e})\n",
            self.suite, self.version, self.config.seed, self.config.tolerance
        );
        for c in &self.checks {
            let dev = match c.max_deviation {
                Some(d) => format!("{d:.3e}"),
                None => "-".into(),
            };
            out.push_str(&format!(
                "{} {:<52} {:>10}  [{}]\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                dev,
                c.anchor
            ));
            if let Some(e) = &c.error {
                out.push_str(&format!("     error: {e}\n"));
            }
        }
        out.push_str(&format!(
            "{} of {} checks passed\n",
            self.n_checks - self.n_failed,
            self.n_checks
        ));
        out
    }

    pub fn write_json(&self, path: &Path) -> Result<(), SuiteError> {
        std::fs::write(path, self.to_json()).map_err(|source| SuiteError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Collects records; a check is numeric (pass iff `deviation ≤ tolerance`)
/// or exact (pass iff zero mismatches).
struct Checks {
    tol: f64,
    records: Vec<CheckRecord>,
}

impl Checks {
    fn numeric(&mut self, id: impl Into<String>, anchor: &'static str, r: Result<f64, String>) {
        self.push(id.into(), anchor, r, self.tol);
    }

    fn exact(&mut self, id: impl Into<String>, anchor: &'static str, r: Result<usize, String>) {
        self.push(id.into(), anchor, r.map(|n| n as f64), 0.0);
    }

    fn ok(&mut self, id: impl Into<String>, anchor: &'static str, r: Result<bool, String>) {
        self.exact(id, anchor, r.map(|b| usize::from(!b)));
    }

    fn push(&mut self, id: String, anchor: &'static str, r: Result<f64, String>, limit: f64) {
        let rec = match r {
            Ok(d) => CheckRecord {
                id,
                anchor,
                passed: d.is_finite() && d <= limit,
                max_deviation: d.is_finite().then_some(d),
                error: None,
            },
            Err(e) => CheckRecord {
                id,
                anchor,
                passed: false,
                max_deviation: None,
                error: Some(e),
            },
        };
        self.records.push(rec);
    }
}

fn s<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    config.validate()?;
    let mut checks = Checks {
        tol: config.tolerance,
        records: Vec::new(),
    };
    let all = config.suite == SuiteName::All;
    if all || config.suite == SuiteName::Anyons {
        anyon_checks(&mut checks);
    }
    if all || config.suite == SuiteName::Subspaces {
        subspace_checks(&mut checks);
    }
    if all || config.suite == SuiteName::Noise {
        noise_checks(&mut checks, config);
    }
    if all || config.suite == SuiteName::Masking {
        masking_checks(&mut checks, config);
    }
    if all || config.suite == SuiteName::Lattice {
        lattice_checks(&mut checks, config);
    }
    let mut records = checks.records;
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let n_failed = records.iter().filter(|c| !c.passed).count();
    let report = SuiteReport {
        suite: config.suite,
        version: VERSION,
        config: config.clone(),
        passed: n_failed == 0,
        n_checks: records.len(),
        n_failed,
        checks: records,
    };
    if let Some(path) = &config.output {
        report.write_json(path)?;
    }
    Ok(report)
}

const FUSION: &str = "fusion rules";
const R_TABLE: &str = "R-symbol table";
const R_ORDER: &str = "R_eps^{em} = -R_eps^{me}";
const SPINS: &str = "topological spins";
const BRAID_B: &str = "B = F R^2 F^-1 = e^{-i pi/4} X";
const F_UNITARY: &str = "F matrix unitary";

fn pi(num: i64, den: i64) -> Phase {
    Phase::from_pi_fraction(num, den)
}

/// Table mismatches between a model and explicit expected entries.
fn r_mismatches(
    model: &AnyonModel,
    table: &[(AnyonLabel, AnyonLabel, AnyonLabel, Phase)],
) -> Result<usize, String> {
    let mut bad = 0;
    for &(a, b, c, want) in table {
        if model.r_symbol(a, b, c).map_err(s)? != want {
            bad += 1;
        }
    }
    Ok(bad)
}

fn anyon_checks(ch: &mut Checks) {
    use toric::{E, EPSILON, M, ONE};
    let tc = AnyonModel::toric();
    let is = AnyonModel::ising();
    let (i1, psi, sigma) = (ising::ONE, ising::PSI, ising::SIGMA);

    ch.exact(
        "anyons.toric.fusion",
        FUSION,
        (|| {
            let mut bad = 0;
            for a in tc.labels() {
                for b in tc.labels() {
                    let want = tc.labels()[a.index() ^ b.index()];
                    if tc.fuse(*a, *b).map_err(s)? != vec![(want, 1)] {
                        bad += 1;
                    }
                }
            }
            Ok(bad)
        })(),
    );

    ch.exact(
        "anyons.toric.r_symbols",
        R_TABLE,
        r_mismatches(
            &tc,
            &[
                (E, M, EPSILON, Phase::ONE),
                (M, E, EPSILON, Phase::MINUS_ONE),
                (EPSILON, M, E, Phase::ONE),
                (M, EPSILON, E, Phase::MINUS_ONE),
                (E, EPSILON, M, Phase::ONE),
                (EPSILON, E, M, Phase::MINUS_ONE),
                (E, E, ONE, Phase::ONE),
                (M, M, ONE, Phase::ONE),
                (EPSILON, EPSILON, ONE, Phase::MINUS_ONE),
                (ONE, E, E, Phase::ONE),
                (M, ONE, M, Phase::ONE),
            ],
        ),
    );

    ch.ok(
        "anyons.toric.r_order_sensitivity",
        R_ORDER,
        (|| {
            let a = tc.r_symbol(E, M, EPSILON).map_err(s)?;
            let b = tc.r_symbol(M, E, EPSILON).map_err(s)?;
            Ok(a == Phase::MINUS_ONE * b && a != b)
        })(),
    );

    ch.exact(
        "anyons.toric.spins",
        SPINS,
        (|| {
            let want = [Phase::ONE, Phase::ONE, Phase::ONE, Phase::MINUS_ONE];
            let mut bad = 0;
            for (a, w) in [ONE, E, M, EPSILON].into_iter().zip(want) {
                bad += usize::from(tc.spin(a).map_err(s)? != w);
            }
            Ok(bad)
        })(),
    );

    ch.exact(
        "anyons.ising.fusion",
        FUSION,
        (|| {
            let table = [
                (i1, i1, vec![i1]),
                (i1, psi, vec![psi]),
                (i1, sigma, vec![sigma]),
                (psi, psi, vec![i1]),
                (psi, sigma, vec![sigma]),
                (sigma, sigma, vec![i1, psi]),
            ];
            let mut bad = 0;
            for (a, b, out) in table {
                let want: Vec<_> = out.into_iter().map(|c| (c, 1)).collect();
                bad += usize::from(is.fuse(a, b).map_err(s)? != want);
                bad += usize::from(is.fuse(b, a).map_err(s)? != want);
            }
            Ok(bad)
        })(),
    );

    ch.exact(
        "anyons.ising.r_symbols",
        R_TABLE,
        r_mismatches(
            &is,
            &[
                (psi, psi, i1, Phase::MINUS_ONE),
                (sigma, sigma, i1, pi(-1, 8)),
                (sigma, sigma, psi, pi(3, 8)),
                (psi, sigma, sigma, pi(-1, 2)),
                (sigma, psi, sigma, pi(-1, 2)),
            ],
        ),
    );

    ch.exact(
        "anyons.ising.spins",
        SPINS,
        (|| {
            let want = [Phase::ONE, Phase::MINUS_ONE, pi(1, 8)];
            let mut bad = 0;
            for (a, w) in [i1, psi, sigma].into_iter().zip(want) {
                bad += usize::from(is.spin(a).map_err(s)? != w);
            }
            Ok(bad)
        })(),
    );

    ch.exact(
        "anyons.fs_indicators",
        "Frobenius-Schur indicators",
        (|| {
            let mut bad = 0;
            for m in [&tc, &is] {
                for &a in m.labels() {
                    bad += usize::from(m.fs_indicator(a).map_err(s)? != 1);
                }
            }
            Ok(bad)
        })(),
    );

    ch.numeric(
        "anyons.ising.f_matrix",
        F_UNITARY,
        (|| {
            let f = is.f_matrix().ok_or("Ising model has no F-matrix")?;
            let h = C64::new(FRAC_1_SQRT_2, 0.0);
            let want = [[h, h], [h, -h]];
            Ok(linalg::mat2_max_diff(f, &want).max(linalg::unitarity_defect(f)))
        })(),
    );

    ch.numeric(
        "anyons.braid_evolution",
        BRAID_B,
        (|| {
            let b = is.braid_evolution().map_err(s)?;
            let p = linalg::cis(-PI / 4.0);
            let want = [[linalg::ZERO, p], [p, linalg::ZERO]];
            Ok(linalg::mat2_max_diff(&b, &want))
        })(),
    );

    ch.ok(
        "anyons.validate",
        PLUMBING,
        Ok(tc.validate().is_ok() && is.validate().is_ok()),
    );
}

const DOUBLE_BRAID: &str = "double braid acts as logical X";
const LOGICAL_Z: &str = "logical Z eigenvalues +1, -1";
const FUSION_BASIS: &str = "fusion basis change F";
const COMMUTATOR: &str = "logical X and Z anticommute";

fn subspace_tag(sub: Subspace) -> &'static str {
    match sub {
        Subspace::Symmetric => "symmetric",
        Subspace::Antisymmetric => "antisymmetric",
    }
}

fn real_state(v: [f64; 4]) -> PunctureState {
    PunctureState::new(2, v.iter().map(|&x| C64::new(x, 0.0)).collect()).expect("non-zero")
}

fn subspace_checks(ch: &mut Checks) {
    let x: Mat2 = [[linalg::ZERO, linalg::ONE], [linalg::ONE, linalg::ZERO]];
    let z: Mat2 = [[linalg::ONE, linalg::ZERO], [linalg::ZERO, -linalg::ONE]];
    let is = AnyonModel::ising();
    for sub in Subspace::ALL {
        let tag = subspace_tag(sub);
        let bx = puncture::logical_matrix(sub, |st| puncture::double_braid(st, 1, 2));
        let bz = puncture::logical_matrix(sub, puncture::logical_z);
        ch.numeric(
            format!("subspaces.{tag}.double_braid"),
            DOUBLE_BRAID,
            match &bx {
                Ok((m, leak)) => Ok(linalg::mat2_max_diff(m, &x).max(*leak)),
                Err(e) => Err(s(e)),
            },
        );
        ch.numeric(
            format!("subspaces.{tag}.logical_z"),
            LOGICAL_Z,
            match &bz {
                Ok((m, leak)) => Ok(linalg::mat2_max_diff(m, &z).max(*leak)),
                Err(e) => Err(s(e)),
            },
        );
        ch.numeric(
            format!("subspaces.{tag}.xz_anticommute"),
            COMMUTATOR,
            match (&bx, &bz) {
                (Ok((mx, _)), Ok((mz, _))) => {
                    let xz = linalg::mat2_mul(mx, mz);
                    let zx = linalg::mat2_scale(&linalg::mat2_mul(mz, mx), -linalg::ONE);
                    let zero = [[linalg::ZERO; 2]; 2];
                    let sum = [
                        [xz[0][0] - zx[0][0], xz[0][1] - zx[0][1]],
                        [xz[1][0] - zx[1][0], xz[1][1] - zx[1][1]],
                    ];
                    Ok(linalg::mat2_max_diff(&sum, &zero))
                }
                _ => Err("logical matrices unavailable".into()),
            },
        );
        ch.numeric(
            format!("subspaces.{tag}.fusion_channel_braid"),
            BRAID_B,
            (|| {
                let phase = linalg::cis(-PI / 4.0);
                let mut worst = 0.0_f64;
                for b in puncture::logical_pair_basis(sub) {
                    let via_channels = puncture::fusion_channel_braid(&b, &is).map_err(s)?;
                    let direct = puncture::double_braid(&b, 1, 2).map_err(s)?.scaled(phase);
                    worst = worst.max(via_channels.max_diff(&direct));
                }
                Ok(worst)
            })(),
        );
    }

    ch.numeric(
        "subspaces.fusion_basis_change",
        FUSION_BASIS,
        (|| {
            let pm = real_state([0.5, -0.5, 0.5, -0.5]);
            let mp = real_state([0.5, 0.5, -0.5, -0.5]);
            let pp = real_state([0.5, 0.5, 0.5, 0.5]);
            let mm = real_state([0.5, -0.5, -0.5, 0.5]);
            let sum = |a: &PunctureState, b: &PunctureState, sign: f64| {
                let v: Vec<C64> = a
                    .amplitudes()
                    .iter()
                    .zip(b.amplitudes())
                    .map(|(x, y)| (x + y * sign) * FRAC_1_SQRT_2)
                    .collect();
                PunctureState::new(2, v).expect("non-zero")
            };
            let cases = [
                (&pm, sum(&pm, &mp, 1.0)),
                (&mp, sum(&pm, &mp, -1.0)),
                (&pp, sum(&pp, &mm, 1.0)),
                (&mm, sum(&pp, &mm, -1.0)),
            ];
            let mut worst = 0.0_f64;
            for (input, want) in cases {
                worst = worst.max(
                    puncture::fusion_basis_change(input)
                        .map_err(s)?
                        .max_diff(&want),
                );
            }
            Ok(worst)
        })(),
    );

    ch.numeric(
        "subspaces.basis_orthonormal",
        PLUMBING,
        (|| {
            let basis = [
                puncture::logical_basis(Subspace::Symmetric, Logical::Zero),
                puncture::logical_basis(Subspace::Symmetric, Logical::One),
                puncture::logical_basis(Subspace::Antisymmetric, Logical::Zero),
                puncture::logical_basis(Subspace::Antisymmetric, Logical::One),
            ];
            let mut worst = 0.0_f64;
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let want = if i == j { linalg::ONE } else { linalg::ZERO };
                    worst = worst.max((a.inner(b) - want).norm());
                }
            }
            Ok(worst)
        })(),
    );
}

const GRAM: &str = "collective noise preserves the logical Gram matrix";
const LEAK_DEPHASING: &str = "dephasing leaves the code space invariant";
const LEAK_ROTATION: &str = "rotation leakage of |-> is sin^2(2 theta)";
const ROTATION_PP: &str = "|++> invariant under collective rotation";

fn kind_tag(kind: ChannelKind) -> &'static str {
    match kind {
        ChannelKind::Dephasing => "dephasing",
        ChannelKind::Rotation => "rotation",
    }
}

fn noise_checks(ch: &mut Checks, cfg: &SuiteConfig) {
    let params = noise::scan_parameters(cfg.noise_samples, cfg.seed);
    for sub in Subspace::ALL {
        for kind in ChannelKind::ALL {
            let reports: Vec<_> = params
                .iter()
                .map(|&p| noise::gram_check(sub, &CollectiveChannel { kind, parameter: p }))
                .collect();
            let dev = reports
                .iter()
                .map(|r| r.identity_deviation())
                .fold(0.0, f64::max);
            ch.numeric(
                format!("noise.{}.{}.gram", subspace_tag(sub), kind_tag(kind)),
                GRAM,
                Ok(dev),
            );
            if kind == ChannelKind::Dephasing {
                let nonzero = reports
                    .iter()
                    .filter(|r| r.leakages.iter().any(|&l| l != 0.0))
                    .count();
                ch.exact(
                    format!("noise.{}.dephasing.leakage", subspace_tag(sub)),
                    LEAK_DEPHASING,
                    Ok(nonzero),
                );
            }
        }
    }
    let minus = puncture::embed_full(&PunctureState::from_signs(&[false]));
    let pp = puncture::embed_full(&puncture::logical_basis(Subspace::Symmetric, Logical::Zero));
    let mut leak_dev = 0.0_f64;
    let mut pp_dev = 0.0_f64;
    for &theta in &params {
        let ch_r = CollectiveChannel::rotation(theta);
        let out = noise::apply_channel(&ch_r, &minus);
        let leak = puncture::project_pair_diagonal(&out).leakage;
        leak_dev = leak_dev.max((leak - (2.0 * theta).sin().powi(2)).abs());
        pp_dev = pp_dev.max(noise::apply_channel(&ch_r, &pp).max_diff(&pp));
    }
    ch.numeric(
        "noise.rotation.single_pair_leakage",
        LEAK_ROTATION,
        Ok(leak_dev),
    );
    ch.numeric(
        "noise.rotation.plus_plus_invariant",
        ROTATION_PP,
        Ok(pp_dev),
    );
}

const MARGINALS: &str = "single-party marginals equal I/3";
const LATIN: &str = "Latin-square support of the masked state";
const BRAID_MARGINALS: &str = "braiding phases cancel in the marginals";
const SIGN_TABLE: &str = "pair double braid sign table";
const WORD_IDENTITY: &str = "endpoint-equivalent braid word acts trivially";

/// Braid words exercised by the masking suite, as `(tag, word)`.
pub fn masking_words() -> Vec<(&'static str, BraidWord)> {
    vec![
        ("none", BraidWord::default()),
        ("b12", BraidWord(vec![(1, 2)])),
        ("b23", BraidWord(vec![(2, 3)])),
        ("b13", BraidWord(vec![(1, 3)])),
        ("b12_b23", BraidWord(vec![(1, 2), (2, 3)])),
        ("four_adjacent", BraidWord::four_adjacent()),
    ]
}

/// For a pair double braid, the M subsets whose members change sign.
pub fn flipped_subsets(i: usize, j: usize) -> Result<Vec<MSubset>, String> {
    let mut flipped = Vec::new();
    for m in MSubset::ALL {
        let mut signs = Vec::new();
        for idx in m.members() {
            let mut v = vec![linalg::ZERO; 8];
            v[idx] = linalg::ONE;
            let e = SixPunctureState::new(v).map_err(s)?;
            let out = masking::pair_double_braid(&e, i, j).map_err(s)?;
            signs.push(e.inner(&out).re < 0.0);
        }
        if signs[0] != signs[1] {
            return Err(format!("subset {m:?} is split by braid ({i}, {j})"));
        }
        if signs[0] {
            flipped.push(m);
        }
    }
    Ok(flipped)
}

fn masking_checks(ch: &mut Checks, cfg: &SuiteConfig) {
    let is = AnyonModel::ising();
    ch.ok(
        "masking.latin_square",
        LATIN,
        Ok(masking::latin_square_holds(&LATIN_SUPPORT)),
    );
    for (tag, word) in masking_words() {
        let anchor = if word.0.is_empty() {
            MARGINALS
        } else {
            BRAID_MARGINALS
        };
        ch.numeric(
            format!("masking.marginals.{tag}"),
            anchor,
            masking::mask_check(&is, cfg.mask_samples, cfg.seed, &word)
                .map(|r| r.max_marginal_deviation)
                .map_err(s),
        );
    }
    for (tag, (i, j), want) in [
        ("b13", (1, 2), [MSubset::M3, MSubset::M4]),
        ("b35", (2, 3), [MSubset::M2, MSubset::M4]),
        ("b15", (1, 3), [MSubset::M2, MSubset::M3]),
    ] {
        ch.ok(
            format!("masking.sign_table.{tag}"),
            SIGN_TABLE,
            flipped_subsets(i, j).map(|f| f == want),
        );
    }
    ch.numeric(
        "masking.four_adjacent_identity",
        WORD_IDENTITY,
        (|| {
            let word = BraidWord::four_adjacent();
            if !word.endpoints_trivial() {
                return Err("word does not return every puncture home".into());
            }
            let mut worst = 0.0_f64;
            for idx in 0..8usize {
                let signs = [0, 1, 2].map(|k| {
                    if (idx >> (2 - k)) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                });
                let b = masking::six_puncture_basis(signs);
                worst = worst.max(masking::braid_word(&b, &word).map_err(s)?.max_diff(&b));
            }
            Ok(worst)
        })(),
    );
}

const TORUS: &str = "toric code stabilizers A_f, B_f";
const TORUS_COUNT: &str = "torus encodes two logical qubits";
const PAIR_COUNT: &str = "a puncture pair encodes one logical qubit";
const MIXED: &str = "twist corners at the solid/dashed junctions";
const LOGICAL_OPS: &str = "string and loop operators of a puncture pair";
const STRING_END: &str = "strings terminate on matching boundaries";
const RING: &str = "braiding around a twist exchanges e and m";

fn lattice_checks(ch: &mut Checks, cfg: &SuiteConfig) {
    for l in [4, 6, 8] {
        match StabilizerTableau::build_torus(l) {
            Ok(t) => {
                ch.ok(
                    format!("lattice.torus_l{l}.commute"),
                    TORUS,
                    Ok(t.all_commute()),
                );
                ch.ok(
                    format!("lattice.torus_l{l}.logical_count"),
                    TORUS_COUNT,
                    Ok(t.count_logical() == Ok(2)),
                );
            }
            Err(e) => ch.ok(format!("lattice.torus_l{l}.build"), TORUS, Err(s(e))),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    for (tag, a, b) in [
        (
            "solid",
            Defect::solid(vec![(2, 2)]),
            Defect::solid(vec![(2, 6)]),
        ),
        (
            "dashed",
            Defect::dashed(vec![(2, 3)]),
            Defect::dashed(vec![(5, 6)]),
        ),
    ] {
        let r = (|| -> Result<StabilizerTableau, String> {
            let mut t = StabilizerTableau::build_torus(8).map_err(s)?;
            t.create_puncture(&a, &mut rng).map_err(s)?;
            t.create_puncture(&b, &mut rng).map_err(s)?;
            Ok(t)
        })();
        ch.ok(
            format!("lattice.{tag}_pair.logical_count"),
            PAIR_COUNT,
            r.as_ref()
                .map_err(s)
                .and_then(|t| Ok(t.count_logical().map_err(s)? == 3)),
        );
        ch.ok(
            format!("lattice.{tag}_pair.logical_operators"),
            LOGICAL_OPS,
            r.as_ref().map_err(s).and_then(|t| {
                let (xl, zl) = t.logical_pair().map_err(s)?;
                Ok(t.commutes_with_all(&xl) && t.commutes_with_all(&zl) && !xl.commutes_with(&zl))
            }),
        );
        ch.ok(
            format!("lattice.{tag}_pair.restore"),
            "measurement creates and removes punctures",
            r.and_then(|mut t| {
                for d in [&a, &b] {
                    for &(row, col) in &d.region {
                        let face = t.lattice().face_operator(row, col);
                        t.measure(&face, &mut rng).map_err(s)?;
                    }
                }
                Ok(t.count_logical().map_err(s)? == 2)
            }),
        );
    }

    let mixed = Defect::mixed(1, 2, 1);
    let built = (|| -> Result<StabilizerTableau, String> {
        let mut t = StabilizerTableau::build_torus(8).map_err(s)?;
        t.create_puncture(&Defect::solid(vec![(6, 6)]), &mut rng)
            .map_err(s)?;
        t.create_puncture(&mixed, &mut rng).map_err(s)?;
        Ok(t)
    })();
    let t = match built {
        Ok(t) => t,
        Err(e) => {
            ch.ok("lattice.mixed.build", MIXED, Err(e));
            return;
        }
    };
    let lat = *t.lattice();
    ch.ok("lattice.mixed.commute", MIXED, Ok(t.all_commute()));
    ch.ok(
        "lattice.mixed.y_corners",
        MIXED,
        (|| {
            let corners: Vec<usize> = mixed
                .twist_corners
                .iter()
                .map(|&(r, c)| lat.qubit(r, c))
                .collect();
            let ys: Vec<Vec<usize>> = t
                .y_generators()
                .iter()
                .map(|&g| t.generators()[g].y_qubits())
                .collect();
            Ok(ys == vec![vec![corners[0]], vec![corners[1]]])
        })(),
    );
    ch.ok(
        "lattice.string.solid_to_solid",
        STRING_END,
        (|| {
            let path = diagonal_chain(&lat, (6, 6), (2, 2)).map_err(s)?;
            let zs = string_operator(&lat, &path, StringKind::Z, &[]).map_err(s)?;
            Ok(t.commutes_with_all(&zs))
        })(),
    );
    ch.ok(
        "lattice.string.solid_to_dashed",
        STRING_END,
        (|| {
            let path = diagonal_chain(&lat, (6, 6), (1, 3)).map_err(s)?;
            let zs = string_operator(&lat, &path, StringKind::Z, &[]).map_err(s)?;
            Ok(!t.commutes_with_all(&zs))
        })(),
    );
    ch.ok(
        "lattice.string.ring_type_exchange",
        RING,
        (|| {
            let (path, crossings) = t.mixed_ring(&mixed).map_err(s)?;
            let ring = string_operator(&lat, &path, StringKind::Z, &crossings).map_err(s)?;
            let plain = string_operator(&lat, &path, StringKind::Z, &[]).map_err(s)?;
            let last = *path.last().ok_or("empty ring")?;
            Ok(t.commutes_with_all(&ring)
                && ring.get(last) == crate::lattice::Pauli::Z
                && !t.commutes_with_all(&plain))
        })(),
    );
}
