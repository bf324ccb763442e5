//! Named, serializable descriptors for catalog channels, generators and states.

use serde::{Deserialize, Serialize};

use super::bosonic::{
    emission_absorption_generator, jaynes_cummings_generator, qou_generator, two_photon_generator, JcOrdering,
    JcParams,
};
use super::finite::{
    depolarizing, depolarizing_generator, hamiltonian_generator, level_projection, maximally_mixed,
    oscillator_conjugation, oscillator_hamiltonian, validate_state,
};
use super::fock::{coherent_state, diag_fn, TruncationSpec};
use super::kraus::attenuator;
use super::volterra::{volterra_contraction_with, VolterraRule};
use crate::error::{Result, ZenoError};
use crate::linalg::CMat;
use crate::random::{random_gkls_normalized, rng};
use crate::semigroup::Superoperator;
use crate::{CMatrix, C64};

/// A density matrix, given explicitly or by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Fock {
        n: usize,
    },
    MaximallyMixed,
    Coherent {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// Diagonal populations on the lowest levels; must sum to one.
    Diagonal {
        weights: Vec<f64>,
    },
    /// Leading block of the matrix; remaining entries are zero.
    Matrix {
        re: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<Vec<f64>>>,
    },
}

impl StateSpec {
    pub fn build(&self, d: usize) -> Result<CMatrix> {
        let rho = match self {
            StateSpec::Fock { n } => {
                if *n >= d {
                    return Err(ZenoError::State(format!("Fock level {n} outside dimension {d}")));
                }
                CMat::unit(d, *n, *n)
            }
            StateSpec::MaximallyMixed => maximally_mixed(d),
            StateSpec::Coherent { re, im } => {
                let psi = coherent_state(C64::new(*re, *im), d).amplitudes;
                CMat::outer(&psi, &psi)
            }
            StateSpec::Diagonal { weights } => {
                if weights.len() > d {
                    return Err(ZenoError::State(format!("{} weights exceed dimension {d}", weights.len())));
                }
                let mut w = weights.clone();
                w.resize(d, 0.0);
                CMat::from_real_diag(&w)
            }
            StateSpec::Matrix { re, im } => {
                let k = re.len();
                if k > d || re.iter().any(|r| r.len() != k) {
                    return Err(ZenoError::State(format!("state matrix must be square with size at most {d}")));
                }
                if let Some(im) = im {
                    if im.len() != k || im.iter().any(|r| r.len() != k) {
                        return Err(ZenoError::State("imaginary part must match the real part in shape".into()));
                    }
                }
                CMat::from_fn(d, d, |i, j| {
                    if i < k && j < k {
                        C64::new(re[i][j], im.as_ref().map_or(0.0, |m| m[i][j]))
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            }
        };
        validate_state(&rho)?;
        Ok(rho)
    }
}

/// Square real/complex matrix given on the leading block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixSpec {
    pub fn build(&self, d: usize) -> Result<CMatrix> {
        let k = self.re.len();
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == k && m.iter().all(|r| r.len() == k);
        if k > d || !shape_ok(&self.re) || self.im.as_ref().is_some_and(|m| !shape_ok(m)) {
            return Err(ZenoError::Parameter(format!("matrix must be square with size at most {d}")));
        }
        Ok(CMat::from_fn(d, d, |i, j| {
            if i < k && j < k {
                C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |m| m[i][j]))
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "channel", rename_all = "snake_case")]
pub enum ChannelSpec {
    Identity,
    Depolarizing {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<StateSpec>,
    },
    OscillatorConjugation {
        k: u32,
        #[serde(default = "unit")]
        omega: f64,
    },
    Attenuator {
        t: f64,
    },
    /// ρ ↦ πρπ with π projecting onto the listed levels.
    LevelProjection {
        levels: Vec<usize>,
    },
    /// Discretized Volterra contraction; a contraction on ℂ^grid, not a channel.
    Volterra {
        grid_points: usize,
        #[serde(default)]
        rule: VolterraRule,
    },
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Channel,
    QuantumOperation,
    Contraction,
}

/// A catalog operator as a matrix, with the space it acts on.
#[derive(Clone, Debug)]
pub struct BuiltOperator {
    pub name: String,
    pub matrix: CMatrix,
    /// `Some(d)` when the matrix acts on d×d operators.
    pub dim: Option<usize>,
    pub kind: OperatorKind,
    /// Built on a Fock-space truncation of an infinite-dimensional model.
    pub truncated: bool,
    pub warnings: Vec<String>,
}

impl BuiltOperator {
    fn from_superop(name: &str, s: Superoperator, kind: OperatorKind, truncated: bool) -> Self {
        Self {
            name: name.to_string(),
            dim: Some(s.dim()),
            matrix: s.into_matrix(),
            kind,
            truncated,
            warnings: Vec::new(),
        }
    }

    pub fn superoperator(&self) -> Result<Superoperator> {
        match self.dim {
            Some(d) => Superoperator::new(d, self.matrix.clone()),
            None => Err(ZenoError::Parameter(format!("{} is not a superoperator", self.name))),
        }
    }
}

impl ChannelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Identity => "identity",
            ChannelSpec::Depolarizing { .. } => "depolarizing",
            ChannelSpec::OscillatorConjugation { .. } => "oscillator_conjugation",
            ChannelSpec::Attenuator { .. } => "attenuator",
            ChannelSpec::LevelProjection { .. } => "level_projection",
            ChannelSpec::Volterra { .. } => "volterra",
        }
    }

    pub fn build(&self, trunc: &TruncationSpec) -> Result<BuiltOperator> {
        trunc.validate()?;
        let d = trunc.dim;
        let name = self.name();
        Ok(match self {
            ChannelSpec::Identity => {
                BuiltOperator::from_superop(name, Superoperator::identity(d), OperatorKind::Channel, false)
            }
            ChannelSpec::Depolarizing { p, sigma } => {
                let sigma = match sigma {
                    Some(s) => s.build(d)?,
                    None => maximally_mixed(d),
                };
                BuiltOperator::from_superop(name, depolarizing(*p, &sigma)?, OperatorKind::Channel, false)
            }
            ChannelSpec::OscillatorConjugation { k, omega } => {
                BuiltOperator::from_superop(name, oscillator_conjugation(*k, *omega, trunc)?, OperatorKind::Channel, true)
            }
            ChannelSpec::Attenuator { t } => {
                let ch = attenuator(*t, trunc)?;
                let mut b = BuiltOperator::from_superop(name, ch.superoperator(), OperatorKind::Channel, true);
                b.warnings.extend(ch.warning);
                b
            }
            ChannelSpec::LevelProjection { levels } => {
                BuiltOperator::from_superop(name, level_projection(levels, d)?, OperatorKind::QuantumOperation, false)
            }
            ChannelSpec::Volterra { grid_points, rule } => {
                let demo = volterra_contraction_with(*grid_points, *rule)?;
                BuiltOperator {
                    name: name.to_string(),
                    matrix: demo.matrix,
                    dim: None,
                    kind: OperatorKind::Contraction,
                    truncated: true,
                    warnings: vec!["contraction on a discretized L² space, not a quantum channel".into()],
                }
            }
        })
    }

    /// Builds and requires a superoperator on d×d matrices.
    pub fn build_superoperator(&self, trunc: &TruncationSpec) -> Result<Superoperator> {
        self.build(trunc)?.superoperator()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Zero,
    /// −i[H, ·] with H = ω(n + ½).
    Oscillator {
        #[serde(default = "unit")]
        omega: f64,
    },
    /// −i[s·a†a, ·]
    NumberCommutator {
        scale: f64,
    },
    /// −i[H, ·] with H given on the leading block.
    Hamiltonian {
        h: MatrixSpec,
    },
    Qou {
        lambda: f64,
        mu: f64,
    },
    JaynesCummings {
        mu: f64,
        lambda: f64,
        r: f64,
        phi: f64,
        #[serde(default)]
        ordering: JcOrdering,
    },
    EmissionAbsorption {
        nu: f64,
        mu: f64,
        xi: f64,
    },
    TwoPhoton {
        kappa: f64,
        mu: f64,
        lambda: f64,
    },
    /// γ(Φ_p − id)
    Depolarizing {
        gamma: f64,
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<StateSpec>,
    },
    /// Random GKLS generator scaled to the given spectral norm proxy.
    RandomGkls {
        lindblads: usize,
        norm: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Zero => "zero",
            GeneratorSpec::Oscillator { .. } => "oscillator",
            GeneratorSpec::NumberCommutator { .. } => "number_commutator",
            GeneratorSpec::Hamiltonian { .. } => "hamiltonian",
            GeneratorSpec::Qou { .. } => "qou",
            GeneratorSpec::JaynesCummings { .. } => "jaynes_cummings",
            GeneratorSpec::EmissionAbsorption { .. } => "emission_absorption",
            GeneratorSpec::TwoPhoton { .. } => "two_photon",
            GeneratorSpec::Depolarizing { .. } => "depolarizing",
            GeneratorSpec::RandomGkls { .. } => "random_gkls",
        }
    }

    /// Builds 𝓛 on D levels; `seed` is used when the descriptor carries none.
    pub fn build(&self, trunc: &TruncationSpec, seed: u64) -> Result<Superoperator> {
        trunc.validate()?;
        let d = trunc.dim;
        match self {
            GeneratorSpec::Zero => Ok(Superoperator::zero(d)),
            GeneratorSpec::Oscillator { omega } => hamiltonian_generator(&oscillator_hamiltonian(*omega, d)),
            GeneratorSpec::NumberCommutator { scale } => {
                hamiltonian_generator(&diag_fn(d, |n| scale * n as f64))
            }
            GeneratorSpec::Hamiltonian { h } => hamiltonian_generator(&h.build(d)?),
            GeneratorSpec::Qou { lambda, mu } => qou_generator(*lambda, *mu, trunc)?.lindbladian(),
            GeneratorSpec::JaynesCummings { mu, lambda, r, phi, ordering } => {
                let p = JcParams { mu: *mu, lambda: *lambda, r: *r, phi: *phi, ordering: *ordering };
                jaynes_cummings_generator(&p, trunc)?.lindbladian()
            }
            GeneratorSpec::EmissionAbsorption { nu, mu, xi } => {
                emission_absorption_generator(*nu, *mu, *xi, trunc)?.lindbladian()
            }
            GeneratorSpec::TwoPhoton { kappa, mu, lambda } => {
                two_photon_generator(*kappa, *mu, *lambda, trunc)?.lindbladian()
            }
            GeneratorSpec::Depolarizing { gamma, p, sigma } => {
                let sigma = match sigma {
                    Some(s) => s.build(d)?,
                    None => maximally_mixed(d),
                };
                depolarizing_generator(*gamma, *p, &sigma)
            }
            GeneratorSpec::RandomGkls { lindblads, norm, seed: own } => {
                let mut r = rng(own.unwrap_or(seed));
                random_gkls_normalized(d, *lindblads, *norm, &mut r)?.lindbladian()
            }
        }
    }
}

/// One line of the catalog listing.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub kind: &'static str,
    pub name: &'static str,
    pub parameters: &'static str,
    pub description: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let e = |kind, name, parameters, description| CatalogEntry { kind, name, parameters, description };
    vec![
        e("channel", "identity", "", "identity channel"),
        e("channel", "depolarizing", "p, sigma?", "(1-p)ρ + p tr(ρ)σ, σ defaults to I/D"),
        e("channel", "oscillator_conjugation", "k, omega?", "UρU† with U = exp(-2πi H/(kω))"),
        e("channel", "attenuator", "t", "bosonic loss channel on D Fock levels"),
        e("channel", "level_projection", "levels", "πρπ for the projector onto the listed levels"),
        e("channel", "volterra", "grid_points, rule?", "(I + V)^-1 for the discretized Volterra operator"),
        e("generator", "zero", "", "zero generator"),
        e("generator", "oscillator", "omega?", "-i[H, ·] with H = ω(n + 1/2)"),
        e("generator", "number_commutator", "scale", "-i[s·N, ·]"),
        e("generator", "hamiltonian", "h", "-i[H, ·] for an explicit H"),
        e("generator", "qou", "lambda, mu", "quantum Ornstein-Uhlenbeck"),
        e("generator", "jaynes_cummings", "mu, lambda, r, phi, ordering?", "Jaynes-Cummings reservoir"),
        e("generator", "emission_absorption", "nu, mu, xi", "emission-absorption with a driving field"),
        e("generator", "two_photon", "kappa, mu, lambda", "two-photon absorption and emission"),
        e("generator", "depolarizing", "gamma, p, sigma?", "γ(Φ_p − id)"),
        e("generator", "random_gkls", "lindblads, norm, seed?", "random GKLS generator of given norm"),
    ]
}
