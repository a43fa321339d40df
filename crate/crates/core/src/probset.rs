//! Behavior sets of the generalized EPR experiment.
//!
//! Index convention, 1-based, used everywhere in this crate:
//!
//! ```text
//!                     D1'            D2'
//!                  +1     -1      +1     -1
//!   D1   +1        e1     e2      e5     e6
//!        -1        e3     e4      e7     e8
//!   D2   +1        e9     e10     e13    e14
//!        -1        e11    e12     e15    e16
//! ```
//!
//! Observer 1 (Alice) picks D1 or D2, observer 2 (Bob) picks D1' or D2'.
//! Each 2x2 block is one direction pair; inside a block the rows are
//! observer 1's outcome and the columns observer 2's. Outcome +1 is the
//! game action B, outcome -1 is S.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, TAU};

/// 1-based ε index for a direction pair and outcome pair (0 = D1 / +1, 1 = D2 / -1).
pub fn eps_index(alice_dir: usize, bob_dir: usize, alice_outcome: usize, bob_outcome: usize) -> usize {
    debug_assert!(alice_dir < 2 && bob_dir < 2 && alice_outcome < 2 && bob_outcome < 2);
    4 * (2 * alice_dir + bob_dir) + 2 * alice_outcome + bob_outcome + 1
}

/// ε indices of the independent octet, in octet order.
pub const OCTET_INDICES: [usize; 8] = [1, 4, 5, 8, 9, 12, 14, 15];

/// Marginal-consistency equations `e[a]+e[b] = e[c]+e[d]`.
const LOCALITY: [([usize; 2], [usize; 2]); 8] = [
    ([1, 2], [5, 6]),
    ([1, 3], [9, 11]),
    ([9, 10], [13, 14]),
    ([5, 7], [13, 15]),
    ([3, 4], [7, 8]),
    ([11, 12], [15, 16]),
    ([2, 4], [10, 12]),
    ([6, 8], [14, 16]),
];

/// Dependent entries as `(1 + sum(sign_i * mu_i)) / 2`, signs in octet order.
const DEPENDENT: [(usize, [i8; 8]); 8] = [
    (2, [-1, -1, 1, -1, -1, 1, 1, -1]),
    (3, [-1, -1, -1, 1, 1, -1, -1, 1]),
    (6, [1, -1, -1, -1, -1, 1, 1, -1]),
    (7, [-1, 1, -1, -1, 1, -1, -1, 1]),
    (10, [-1, 1, 1, -1, -1, -1, 1, -1]),
    (11, [1, -1, -1, 1, -1, -1, -1, 1]),
    (13, [-1, 1, 1, -1, 1, -1, -1, -1]),
    (16, [1, -1, -1, 1, -1, 1, -1, -1]),
];

/// An affine function of the independent octet: `constant + coeffs . mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineForm {
    pub constant: f64,
    pub coeffs: [f64; 8],
}

impl AffineForm {
    pub const ZERO: AffineForm = AffineForm { constant: 0.0, coeffs: [0.0; 8] };

    pub fn eval(&self, mu: &[f64; 8]) -> f64 {
        self.constant + self.coeffs.iter().zip(mu).map(|(c, m)| c * m).sum::<f64>()
    }

    pub fn scaled(&self, k: f64) -> AffineForm {
        AffineForm { constant: k * self.constant, coeffs: self.coeffs.map(|c| k * c) }
    }

    pub fn add(&self, other: &AffineForm) -> AffineForm {
        let mut coeffs = self.coeffs;
        for (c, o) in coeffs.iter_mut().zip(other.coeffs) {
            *c += o;
        }
        AffineForm { constant: self.constant + other.constant, coeffs }
    }
}

/// ε_j (1-based) as an affine function of the independent octet.
pub fn entry_form(j: usize) -> AffineForm {
    assert!((1..=16).contains(&j), "epsilon index {j} out of range");
    if let Some(pos) = OCTET_INDICES.iter().position(|&k| k == j) {
        let mut coeffs = [0.0; 8];
        coeffs[pos] = 1.0;
        return AffineForm { constant: 0.0, coeffs };
    }
    let (_, signs) = DEPENDENT.iter().find(|(k, _)| *k == j).expect("every index is independent or dependent");
    AffineForm { constant: 0.5, coeffs: signs.map(|s| 0.5 * f64::from(s)) }
}

/// The marginals (p, q, p', q') as affine functions of the independent octet.
pub fn marginal_forms() -> [AffineForm; 4] {
    let sum = |idx: [usize; 4]| idx.iter().fold(AffineForm::ZERO, |acc, &j| acc.add(&entry_form(j))).scaled(0.5);
    [sum([1, 2, 5, 6]), sum([9, 10, 13, 14]), sum([1, 3, 9, 11]), sum([5, 7, 13, 15])]
}

fn unit_interval(what: impl FnOnce() -> String, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite { what: what(), value });
    }
    if !(-TAU..=1.0 + TAU).contains(&value) {
        return Err(Error::OutOfRange { what: what(), value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Mixed strategies: probability of playing B for Alice type 1 (`p`),
/// Alice type 2 (`q`), Bob type 1 (`p_prime`) and Bob type 2 (`q_prime`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct StrategyProfile {
    pub p: f64,
    pub q: f64,
    pub p_prime: f64,
    pub q_prime: f64,
}

impl StrategyProfile {
    /// Components within `TAU` of the unit interval are clamped into it.
    pub fn new(p: f64, q: f64, p_prime: f64, q_prime: f64) -> Result<Self> {
        Ok(Self {
            p: unit_interval(|| "p".into(), p)?,
            q: unit_interval(|| "q".into(), q)?,
            p_prime: unit_interval(|| "p'".into(), p_prime)?,
            q_prime: unit_interval(|| "q'".into(), q_prime)?,
        })
    }

    pub fn from_array(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.p, self.q, self.p_prime, self.q_prime]
    }

    /// Component `i` in the order (p, q, p', q').
    pub fn get(&self, i: usize) -> f64 {
        self.to_array()[i]
    }

    /// Copy with component `i` replaced; `value` must already lie in [0, 1].
    pub fn with(&self, i: usize, value: f64) -> Self {
        let mut v = self.to_array();
        v[i] = value;
        Self { p: v[0], q: v[1], p_prime: v[2], q_prime: v[3] }
    }
}

impl TryFrom<[f64; 4]> for StrategyProfile {
    type Error = Error;
    fn try_from(v: [f64; 4]) -> Result<Self> {
        Self::from_array(v)
    }
}

impl From<StrategyProfile> for [f64; 4] {
    fn from(s: StrategyProfile) -> Self {
        s.to_array()
    }
}

/// One constraint on a behavior set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Constraint {
    /// `0 <= e_index <= 1`
    Range { index: usize },
    /// Entries of block `block` (0..4) sum to one.
    BlockSum { block: usize },
    /// Marginal-consistency equation `equation` (0..8).
    Locality { equation: usize },
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Constraint::Range { index } => write!(f, "0 <= e{index} <= 1"),
            Constraint::BlockSum { block } => {
                let s = 4 * block + 1;
                write!(f, "e{}+e{}+e{}+e{} = 1", s, s + 1, s + 2, s + 3)
            }
            Constraint::Locality { equation } => {
                let ([a, b], [c, d]) = LOCALITY[equation];
                write!(f, "e{a}+e{b} = e{c}+e{d}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub constraint: Constraint,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Every checked constraint with its absolute residual.
    pub residuals: Vec<Residual>,
    /// The subset whose residual exceeds `TAU`.
    pub violations: Vec<Residual>,
    pub max_residual: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Largest residual over the block-sum and locality equations only.
    pub fn max_equation_residual(&self) -> f64 {
        self.residuals
            .iter()
            .filter(|r| !matches!(r.constraint, Constraint::Range { .. }))
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

/// The 16 joint probabilities, stored in index order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BehaviorJson", into = "BehaviorJson")]
pub struct BehaviorSet {
    eps: [f64; 16],
}

#[derive(Serialize, Deserialize)]
struct BehaviorJson {
    eps: Vec<f64>,
}

impl TryFrom<BehaviorJson> for BehaviorSet {
    type Error = String;
    fn try_from(raw: BehaviorJson) -> std::result::Result<Self, String> {
        let eps: [f64; 16] =
            raw.eps.try_into().map_err(|v: Vec<f64>| format!("expected 16 probabilities, got {}", v.len()))?;
        BehaviorSet::new(eps).map_err(|e| e.to_string())
    }
}

impl From<BehaviorSet> for BehaviorJson {
    fn from(b: BehaviorSet) -> Self {
        BehaviorJson { eps: b.eps.to_vec() }
    }
}

impl BehaviorSet {
    /// Rejects non-finite entries; entries in [-TAU, 0) become 0.
    /// Constraint checks are left to [`BehaviorSet::validate`].
    pub fn new(mut eps: [f64; 16]) -> Result<Self> {
        for (i, e) in eps.iter_mut().enumerate() {
            if !e.is_finite() {
                return Err(Error::NonFinite { what: format!("e{}", i + 1), value: *e });
            }
            if (-TAU..=0.0).contains(e) {
                *e = 0.0;
            }
        }
        Ok(Self { eps })
    }

    pub fn uniform() -> Self {
        Self { eps: [0.25; 16] }
    }

    /// ε_j, 1-based.
    pub fn eps(&self, j: usize) -> f64 {
        self.eps[j - 1]
    }

    pub fn as_array(&self) -> &[f64; 16] {
        &self.eps
    }

    /// Probability of the outcome pair in one direction-pair block.
    pub fn entry(&self, alice_dir: usize, bob_dir: usize, alice_outcome: usize, bob_outcome: usize) -> f64 {
        self.eps(eps_index(alice_dir, bob_dir, alice_outcome, bob_outcome))
    }

    pub fn validate(&self) -> ValidationReport {
        let e = |j: usize| self.eps(j);
        let mut residuals = Vec::with_capacity(28);
        for index in 1..=16 {
            let x = e(index);
            residuals.push(Residual { constraint: Constraint::Range { index }, residual: (-x).max(x - 1.0).max(0.0) });
        }
        for block in 0..4 {
            let s: f64 = (1..=4).map(|k| e(4 * block + k)).sum();
            residuals.push(Residual { constraint: Constraint::BlockSum { block }, residual: (s - 1.0).abs() });
        }
        for (equation, ([a, b], [c, d])) in LOCALITY.iter().enumerate() {
            let r = (e(*a) + e(*b) - e(*c) - e(*d)).abs();
            residuals.push(Residual { constraint: Constraint::Locality { equation }, residual: r });
        }
        let violations: Vec<_> = residuals.iter().copied().filter(|r| r.residual > TAU).collect();
        let max_residual = residuals.iter().map(|r| r.residual).fold(0.0, f64::max);
        ValidationReport { residuals, violations, max_residual }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::Constraint(report))
        }
    }

    /// The product distribution of four independent marginals.
    pub fn from_profile(s: &StrategyProfile) -> Self {
        let alice = [s.p, s.q];
        let bob = [s.p_prime, s.q_prime];
        let mut eps = [0.0; 16];
        for (ad, &a) in alice.iter().enumerate() {
            for (bd, &b) in bob.iter().enumerate() {
                let pa = [a, 1.0 - a];
                let pb = [b, 1.0 - b];
                for ao in 0..2 {
                    for bo in 0..2 {
                        eps[eps_index(ad, bd, ao, bo) - 1] = pa[ao] * pb[bo];
                    }
                }
            }
        }
        Self { eps }
    }

    /// Each player type's probability of outcome +1 (action B).
    pub fn marginals(&self) -> Result<StrategyProfile> {
        self.ensure_valid()?;
        let e = |j: usize| self.eps(j);
        StrategyProfile::new(
            0.5 * (e(1) + e(2) + e(5) + e(6)),
            0.5 * (e(9) + e(10) + e(13) + e(14)),
            0.5 * (e(1) + e(3) + e(9) + e(11)),
            0.5 * (e(5) + e(7) + e(13) + e(15)),
        )
    }

    pub fn is_factorizable(&self) -> Result<bool> {
        let product = Self::from_profile(&self.marginals()?);
        Ok(self.eps.iter().zip(product.eps.iter()).all(|(a, b)| (a - b).abs() <= TAU))
    }

    /// Projection onto (ε1, ε4, ε5, ε8, ε9, ε12, ε14, ε15).
    pub fn octet(&self) -> Result<IndependentOctet> {
        IndependentOctet::new(OCTET_INDICES.map(|j| self.eps(j)))
    }

    pub fn chsh_delta(&self) -> Result<f64> {
        self.ensure_valid()?;
        Ok(chsh_delta_unchecked(&self.eps))
    }

    pub fn classify(&self) -> Result<ChshClass> {
        self.chsh_delta().map(classify_delta)
    }
}

fn chsh_delta_unchecked(eps: &[f64; 16]) -> f64 {
    2.0 * (OCTET_INDICES.iter().map(|&j| eps[j - 1]).sum::<f64>() - 2.0)
}

/// The eight free probabilities; the other eight follow by linear relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OctetJson", into = "OctetJson")]
pub struct IndependentOctet {
    mu: [f64; 8],
}

#[derive(Serialize, Deserialize)]
struct OctetJson {
    mu: Vec<f64>,
}

impl TryFrom<OctetJson> for IndependentOctet {
    type Error = String;
    fn try_from(raw: OctetJson) -> std::result::Result<Self, String> {
        let mu: [f64; 8] =
            raw.mu.try_into().map_err(|v: Vec<f64>| format!("expected 8 probabilities, got {}", v.len()))?;
        IndependentOctet::new(mu).map_err(|e| e.to_string())
    }
}

impl From<IndependentOctet> for OctetJson {
    fn from(o: IndependentOctet) -> Self {
        OctetJson { mu: o.mu.to_vec() }
    }
}

impl IndependentOctet {
    /// Fails if any entry leaves [0, 1] or the reconstruction does.
    pub fn new(mu: [f64; 8]) -> Result<Self> {
        let mut clean = [0.0; 8];
        for (i, (&m, c)) in mu.iter().zip(clean.iter_mut()).enumerate() {
            *c = unit_interval(|| format!("e{}", OCTET_INDICES[i]), m)?;
        }
        reconstruct_entries(&clean)?;
        Ok(Self { mu: clean })
    }

    pub fn as_array(&self) -> &[f64; 8] {
        &self.mu
    }

    pub fn reconstruct(&self) -> BehaviorSet {
        let eps = reconstruct_entries(&self.mu).expect("feasibility checked at construction");
        BehaviorSet { eps }
    }
}

/// Fills in the eight dependent entries. Entries outside [-TAU, 1+TAU] are
/// reported, never clamped.
pub fn reconstruct(mu: &[f64; 8]) -> Result<BehaviorSet> {
    IndependentOctet::new(*mu).map(|o| o.reconstruct())
}

fn reconstruct_entries(mu: &[f64; 8]) -> Result<[f64; 16]> {
    let mut eps = [0.0; 16];
    for (k, &j) in OCTET_INDICES.iter().enumerate() {
        eps[j - 1] = mu[k];
    }
    let mut bad = Vec::new();
    for (j, signs) in DEPENDENT {
        let v = 0.5 * (1.0 + signs.iter().zip(mu).map(|(&s, m)| f64::from(s) * m).sum::<f64>());
        if !(-TAU..=1.0 + TAU).contains(&v) {
            bad.push(j);
        }
        eps[j - 1] = if v < 0.0 { 0.0 } else { v };
    }
    if bad.is_empty() {
        Ok(eps)
    } else {
        Err(Error::InfeasibleOctet { indices: bad })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChshLabel {
    /// |Δ| <= 2
    Local,
    /// 2 < |Δ| <= 2√2
    QuantumViolating,
    /// |Δ| > 2√2
    SuperQuantum,
}

impl fmt::Display for ChshLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChshLabel::Local => "local",
            ChshLabel::QuantumViolating => "quantum-violating",
            ChshLabel::SuperQuantum => "super-quantum",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshClass {
    pub delta: f64,
    pub label: ChshLabel,
}

pub fn classify_delta(delta: f64) -> ChshClass {
    let m = delta.abs();
    let label = if m <= 2.0 + TAU {
        ChshLabel::Local
    } else if m <= 2.0 * std::f64::consts::SQRT_2 + TAU {
        ChshLabel::QuantumViolating
    } else {
        ChshLabel::SuperQuantum
    };
    ChshClass { delta, label }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equilibrium_set() -> BehaviorSet {
        let mut eps = [0.0; 16];
        for j in [2, 6, 10, 14] {
            eps[j - 1] = 1.0;
        }
        BehaviorSet::new(eps).unwrap()
    }

    #[test]
    fn uniform_is_valid_with_zero_residual() {
        let r = BehaviorSet::uniform().validate();
        assert!(r.is_valid());
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.residuals.len(), 28);
    }

    #[test]
    fn equilibrium_set_is_valid() {
        assert!(equilibrium_set().validate().is_valid());
    }

    #[test]
    fn mismatched_marginals_are_reported() {
        let mut eps = [0.25; 16];
        eps[..4].copy_from_slice(&[1.0, 0.0, 0.0, 0.0]);
        let r = BehaviorSet::new(eps).unwrap().validate();
        assert!(!r.is_valid());
        let first = Constraint::Locality { equation: 0 };
        let v = r.violations.iter().find(|v| v.constraint == first).expect("e1+e2 = e5+e6 violated");
        assert!((v.residual - 0.5).abs() < 1e-15);
        assert_eq!(first.to_string(), "e1+e2 = e5+e6");
    }

    #[test]
    fn non_finite_rejected() {
        let mut eps = [0.25; 16];
        eps[7] = f64::NAN;
        assert!(matches!(BehaviorSet::new(eps), Err(Error::NonFinite { .. })));
        eps[7] = f64::INFINITY;
        assert!(matches!(BehaviorSet::new(eps), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn tiny_negatives_normalized_to_zero() {
        let mut eps = equilibrium_set().eps;
        eps[0] = -1e-12;
        eps[2] = -0.0;
        let b = BehaviorSet::new(eps).unwrap();
        assert_eq!(b.eps(1).to_bits(), 0.0f64.to_bits());
        assert_eq!(b.eps(3).to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn reconstruct_uniform_octet() {
        let b = reconstruct(&[0.25; 8]).unwrap();
        assert!(b.as_array().iter().all(|&e| e == 0.25));
    }

    #[test]
    fn reconstruct_equilibrium_octet() {
        let b = reconstruct(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(b, equilibrium_set());
    }

    #[test]
    fn reconstruct_deterministic_point() {
        let b = reconstruct(&[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        for j in 1..=16 {
            let want = if [1, 5, 9, 13].contains(&j) { 1.0 } else { 0.0 };
            assert_eq!(b.eps(j), want, "e{j}");
        }
    }

    #[test]
    fn infeasible_octet_names_offending_indices() {
        // e2 = (1 - 1 - 1 + 0 ...)/2 < 0
        match reconstruct(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]) {
            Err(Error::InfeasibleOctet { indices }) => assert!(indices.contains(&2) && indices.contains(&3)),
            other => panic!("expected infeasible octet, got {other:?}"),
        }
        assert!(matches!(reconstruct(&[1.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn entry_forms_match_reconstruction() {
        let mu = [0.1, 0.2, 0.15, 0.25, 0.3, 0.05, 0.2, 0.1];
        if let Ok(b) = reconstruct(&mu) {
            for j in 1..=16 {
                assert!((entry_form(j).eval(&mu) - b.eps(j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn factorizable_examples() {
        let b = BehaviorSet::from_profile(&StrategyProfile::new(1.0, 1.0, 0.0, 0.0).unwrap());
        assert_eq!(b, equilibrium_set());
        let b = BehaviorSet::from_profile(&StrategyProfile::new(0.5, 0.5, 0.5, 0.5).unwrap());
        assert_eq!(b, BehaviorSet::uniform());
    }

    #[test]
    fn marginals_examples() {
        let m = equilibrium_set().marginals().unwrap();
        assert_eq!(m.to_array(), [1.0, 1.0, 0.0, 0.0]);
        assert_eq!(BehaviorSet::uniform().marginals().unwrap().to_array(), [0.5; 4]);
        let s = StrategyProfile::new(0.3, 0.7, 0.2, 0.9).unwrap();
        let back = BehaviorSet::from_profile(&s).marginals().unwrap().to_array();
        for (a, b) in back.iter().zip(s.to_array()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_set_refused_by_dependent_operations() {
        let mut eps = [0.25; 16];
        eps[..4].copy_from_slice(&[1.0, 0.0, 0.0, 0.0]);
        let b = BehaviorSet::new(eps).unwrap();
        assert!(matches!(b.marginals(), Err(Error::Constraint(_))));
        assert!(matches!(b.chsh_delta(), Err(Error::Constraint(_))));
        assert!(matches!(b.is_factorizable(), Err(Error::Constraint(_))));
    }

    #[test]
    fn factorizability_of_named_sets() {
        assert!(BehaviorSet::uniform().is_factorizable().unwrap());
        assert!(equilibrium_set().is_factorizable().unwrap());
        // PR box: perfectly correlated except anticorrelated on (D2, D2')
        let mut eps = [0.0; 16];
        for j in [1, 4, 5, 8, 9, 12, 14, 15] {
            eps[j - 1] = 0.5;
        }
        let pr = BehaviorSet::new(eps).unwrap();
        assert!(pr.validate().is_valid());
        assert!(!pr.is_factorizable().unwrap());
        assert_eq!(pr.chsh_delta().unwrap(), 4.0);
        assert_eq!(pr.classify().unwrap().label, ChshLabel::SuperQuantum);
    }

    #[test]
    fn chsh_examples() {
        let c = equilibrium_set().classify().unwrap();
        assert_eq!(c.delta, -2.0);
        assert_eq!(c.label, ChshLabel::Local);
        let c = BehaviorSet::uniform().classify().unwrap();
        assert_eq!(c.delta, 0.0);
        assert_eq!(c.label, ChshLabel::Local);
    }

    #[test]
    fn classification_thresholds() {
        let r2 = 2.0 * std::f64::consts::SQRT_2;
        assert_eq!(classify_delta(2.0).label, ChshLabel::Local);
        assert_eq!(classify_delta(-2.0 - 0.5 * TAU).label, ChshLabel::Local);
        assert_eq!(classify_delta(2.0 + 1e-6).label, ChshLabel::QuantumViolating);
        assert_eq!(classify_delta(-r2).label, ChshLabel::QuantumViolating);
        assert_eq!(classify_delta(r2 + 1e-6).label, ChshLabel::SuperQuantum);
        assert_eq!(classify_delta(-4.0).label, ChshLabel::SuperQuantum);
    }

    #[test]
    fn json_shapes() {
        let b = equilibrium_set();
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.starts_with("{\"eps\":["));
        assert_eq!(serde_json::from_str::<BehaviorSet>(&s).unwrap(), b);
        assert!(serde_json::from_str::<BehaviorSet>("{\"eps\":[0.5,0.5]}").is_err());

        let o = IndependentOctet::new([0.25; 8]).unwrap();
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(s, "{\"mu\":[0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25]}");
        assert!(serde_json::from_str::<IndependentOctet>("{\"mu\":[1,1,0,0,0,0,0,0]}").is_err());
    }
}
