//! Behavior sets from a two-qubit pure state measured along planar directions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::probset::{eps_index, BehaviorSet};
use crate::{Error, Result, TAU};

/// Amplitudes of |00>, |01>, |10>, |11>; the first qubit is observer 1's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct TwoQubitState {
    amps: [Complex64; 4],
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    re: [f64; 4],
    im: [f64; 4],
}

impl TryFrom<StateJson> for TwoQubitState {
    type Error = Error;
    fn try_from(raw: StateJson) -> Result<Self> {
        let amps = [0, 1, 2, 3].map(|k| Complex64::new(raw.re[k], raw.im[k]));
        TwoQubitState::new(amps)
    }
}

impl From<TwoQubitState> for StateJson {
    fn from(s: TwoQubitState) -> Self {
        StateJson { re: s.amps.map(|a| a.re), im: s.amps.map(|a| a.im) }
    }
}

impl TwoQubitState {
    /// Accepts states with |norm^2 - 1| <= TAU; global phase is kept as given.
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        if let Some(a) = amps.iter().find(|a| !a.re.is_finite() || !a.im.is_finite()) {
            let value = if a.re.is_finite() { a.im } else { a.re };
            return Err(Error::NonFinite { what: "state amplitude".into(), value });
        }
        let residual = norm_residual(&amps);
        if residual > TAU {
            return Err(Error::Unnormalized { residual });
        }
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    /// Tensor product of two single-qubit states, each normalized here.
    pub fn product(first: [Complex64; 2], second: [Complex64; 2]) -> Result<Self> {
        let n1 = (first[0].norm_sqr() + first[1].norm_sqr()).sqrt();
        let n2 = (second[0].norm_sqr() + second[1].norm_sqr()).sqrt();
        let u = first.map(|a| a / n1);
        let v = second.map(|a| a / n2);
        Self::new([u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]])
    }

    /// (|01> - |10>)/√2
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amps: [0.0.into(), h.into(), (-h).into(), 0.0.into()] }
    }

    /// |00>
    pub fn zero_zero() -> Self {
        Self { amps: [1.0.into(), 0.0.into(), 0.0.into(), 0.0.into()] }
    }

    /// (|0> + |1>)(|0> - |1>)/2
    pub fn plus_minus() -> Self {
        Self { amps: [0.5.into(), (-0.5).into(), 0.5.into(), (-0.5).into()] }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "singlet" => Some(Self::singlet()),
            "zerozero" => Some(Self::zero_zero()),
            "plusminus" => Some(Self::plus_minus()),
            _ => None,
        }
    }
}

pub fn norm_residual(amps: &[Complex64; 4]) -> f64 {
    (amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs()
}

/// A measurement direction in the x-y plane, given by its angle from x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlanarDirection {
    pub angle: f64,
}

impl PlanarDirection {
    pub fn new(angle: f64) -> Self {
        Self { angle }
    }

    pub fn unit_vector(&self) -> [f64; 2] {
        let (s, c) = self.angle.sin_cos();
        [c, s]
    }
}

/// Observer 1 measures along `a` (D1) or `c` (D2); observer 2 along `b`
/// (D1') or `d` (D2').
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionConfig {
    pub a: PlanarDirection,
    pub c: PlanarDirection,
    pub b: PlanarDirection,
    pub d: PlanarDirection,
}

impl DirectionConfig {
    pub fn from_angles(a: f64, c: f64, b: f64, d: f64) -> Self {
        Self {
            a: PlanarDirection::new(a),
            c: PlanarDirection::new(c),
            b: PlanarDirection::new(b),
            d: PlanarDirection::new(d),
        }
    }

    fn alice(&self, dir: usize) -> PlanarDirection {
        [self.a, self.c][dir]
    }

    fn bob(&self, dir: usize) -> PlanarDirection {
        [self.b, self.d][dir]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Eigenvector of σ·n for eigenvalue `outcome`: (1, ±(n_x + i n_y)) / √2.
pub fn eigenvector(n: PlanarDirection, outcome: Outcome) -> [Complex64; 2] {
    let [x, y] = n.unit_vector();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(h, 0.0), Complex64::new(x, y) * (outcome.sign() * h)]
}

/// |<v1 ⊗ v2 | ψ>|^2 for the eigenvectors selected by the two outcomes.
pub fn joint_probability(
    state: &TwoQubitState,
    n1: PlanarDirection,
    n2: PlanarDirection,
    s1: Outcome,
    s2: Outcome,
) -> f64 {
    let u = eigenvector(n1, s1);
    let v = eigenvector(n2, s2);
    let psi = &state.amps;
    let mut amp = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            amp += u[i].conj() * v[j].conj() * psi[2 * i + j];
        }
    }
    amp.norm_sqr()
}

/// All sixteen probabilities in the crate's index layout.
pub fn generate(state: &TwoQubitState, dirs: &DirectionConfig) -> BehaviorSet {
    let mut eps = [0.0; 16];
    for ad in 0..2 {
        for bd in 0..2 {
            for (ao, s1) in Outcome::BOTH.into_iter().enumerate() {
                for (bo, s2) in Outcome::BOTH.into_iter().enumerate() {
                    eps[eps_index(ad, bd, ao, bo) - 1] = joint_probability(state, dirs.alice(ad), dirs.bob(bd), s1, s2);
                }
            }
        }
    }
    BehaviorSet::new(eps).expect("probabilities of a normalized state are finite")
}
