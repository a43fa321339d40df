//! Bayesian Nash equilibria of the classical and the EPR game.
//!
//! Every payoff is affine in its own type's strategy component, so a type's
//! best deviation is always to a pure action and its gain is
//! `max(0, g * (1 - x), -g * x)` for gradient `g` at component value `x`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::game::{Action, GameSpec, PayoffQuadruple, PureQuadruple};
use crate::probset::{marginal_forms, BehaviorSet, StrategyProfile};
use crate::{Error, Result, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlayerType {
    Alice1,
    Alice2,
    Bob1,
    Bob2,
}

impl PlayerType {
    pub const ALL: [PlayerType; 4] = [PlayerType::Alice1, PlayerType::Alice2, PlayerType::Bob1, PlayerType::Bob2];

    /// Position in (p, q, p', q') and in payoff quadruples.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PlayerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayerType::Alice1 => "Alice type 1",
            PlayerType::Alice2 => "Alice type 2",
            PlayerType::Bob1 => "Bob type 1",
            PlayerType::Bob2 => "Bob type 2",
        })
    }
}

/// Derivative of each type's payoff with respect to its own component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientQuadruple {
    pub d_a1_dp: f64,
    pub d_a2_dq: f64,
    pub d_b1_dp_prime: f64,
    pub d_b2_dq_prime: f64,
}

impl GradientQuadruple {
    pub fn from_array(v: [f64; 4]) -> Self {
        Self { d_a1_dp: v[0], d_a2_dq: v[1], d_b1_dp_prime: v[2], d_b2_dq_prime: v[3] }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.d_a1_dp, self.d_a2_dq, self.d_b1_dp_prime, self.d_b2_dq_prime]
    }
}

/// Best gain available from moving a component at `x` with gradient `g`.
pub fn deviation_gain(g: f64, x: f64) -> f64 {
    (g * (1.0 - x)).max(-g * x).max(0.0)
}

/// Closed-form gradients of the two-sided Battle of Sexes. With
/// `a = p' + q'` and `t = ωp + (1-ω)q`:
/// `(3a/2 - 1, 2 - 3a/2, 3t - 2, 1 - 3t)`.
pub fn bos_fig1_gradients(omega: f64, s: &StrategyProfile) -> GradientQuadruple {
    let a = s.p_prime + s.q_prime;
    let t = omega * s.p + (1.0 - omega) * s.q;
    GradientQuadruple::from_array([1.5 * a - 1.0, 2.0 - 1.5 * a, 3.0 * t - 2.0, -(3.0 * t - 1.0)])
}

/// Exact gradients of any game by differencing the payoff between the two
/// pure values of the component.
pub fn differenced_gradients(spec: &GameSpec, s: &StrategyProfile) -> GradientQuadruple {
    GradientQuadruple::from_array(std::array::from_fn(|i| {
        spec.mixed_payoffs(&s.with(i, 1.0)).as_array()[i] - spec.mixed_payoffs(&s.with(i, 0.0)).as_array()[i]
    }))
}

pub fn classical_gradients(spec: &GameSpec, s: &StrategyProfile) -> GradientQuadruple {
    if spec.is_bos_fig1() {
        bos_fig1_gradients(spec.omega(), s)
    } else {
        differenced_gradients(spec, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Pure,
    Mixed,
    Quantum,
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquilibriumKind::Pure => "pure",
            EquilibriumKind::Mixed => "mixed",
            EquilibriumKind::Quantum => "quantum",
        })
    }
}

/// A certified equilibrium; `margins[i]` is the best deviation gain of type `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ReportJson", into = "ReportJson")]
pub struct EquilibriumReport {
    pub kind: EquilibriumKind,
    pub profile: StrategyProfile,
    pub payoffs: PayoffQuadruple,
    pub margins: [f64; 4],
    pub behavior: Option<BehaviorSet>,
    pub delta: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    kind: EquilibriumKind,
    profile: StrategyProfile,
    payoffs: PayoffQuadruple,
    margins: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    behavior: Option<[f64; 16]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
}

impl TryFrom<ReportJson> for EquilibriumReport {
    type Error = Error;
    fn try_from(r: ReportJson) -> Result<Self> {
        Ok(Self {
            kind: r.kind,
            profile: r.profile,
            payoffs: r.payoffs,
            margins: r.margins,
            behavior: r.behavior.map(BehaviorSet::new).transpose()?,
            delta: r.delta,
        })
    }
}

impl From<EquilibriumReport> for ReportJson {
    fn from(r: EquilibriumReport) -> Self {
        ReportJson {
            kind: r.kind,
            profile: r.profile,
            payoffs: r.payoffs,
            margins: r.margins,
            behavior: r.behavior.map(|b| *b.as_array()),
            delta: r.delta,
        }
    }
}

impl EquilibriumReport {
    pub fn max_margin(&self) -> f64 {
        self.margins.iter().copied().fold(0.0, f64::max)
    }
}

/// Why a profile is not an equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub profile: StrategyProfile,
    pub gradients: GradientQuadruple,
    pub margins: [f64; 4],
}

impl Rejection {
    /// Types with a profitable deviation.
    pub fn deviators(&self) -> Vec<PlayerType> {
        PlayerType::ALL.into_iter().filter(|t| self.margins[t.index()] > TAU).collect()
    }
}

fn is_vertex(x: f64) -> bool {
    x <= TAU || x >= 1.0 - TAU
}

/// Accepts iff no type gains more than `TAU` by any deviation: a positive
/// gradient needs the component at 1, a negative one at 0, and a vanishing
/// one admits any value.
pub fn verify_classical(spec: &GameSpec, s: &StrategyProfile) -> std::result::Result<EquilibriumReport, Rejection> {
    let gradients = classical_gradients(spec, s);
    let g = gradients.as_array();
    let margins: [f64; 4] = std::array::from_fn(|i| deviation_gain(g[i], s.get(i)));
    if margins.iter().any(|&m| m > TAU) {
        return Err(Rejection { profile: *s, gradients, margins });
    }
    let kind = if s.to_array().iter().all(|&x| is_vertex(x)) { EquilibriumKind::Pure } else { EquilibriumKind::Mixed };
    Ok(EquilibriumReport { kind, profile: *s, payoffs: spec.mixed_payoffs(s), margins, behavior: None, delta: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub player: PlayerType,
    /// The component value with the highest payoff among those scanned.
    pub best_value: f64,
    pub gain: f64,
}

/// Scans `grid_n` evenly spaced values of one type's component (plus its
/// current value) with everything else fixed. Ties keep the earliest grid
/// point, so the result does not depend on evaluation order.
pub fn brute_force_best_response(
    spec: &GameSpec,
    s: &StrategyProfile,
    player: PlayerType,
    grid_n: usize,
) -> Result<BestResponse> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!("grid_n must be at least 2, got {grid_n}")));
    }
    let i = player.index();
    let payoff = |x: f64| spec.mixed_payoffs(&s.with(i, x)).as_array()[i];
    let current = payoff(s.get(i));
    let candidates = (0..grid_n).map(|k| k as f64 / (grid_n - 1) as f64).chain(std::iter::once(s.get(i)));
    let (best_value, best) =
        candidates
            .map(|x| (x, payoff(x)))
            .fold((s.get(i), current), |acc, cand| if cand.1 > acc.1 { cand } else { acc });
    Ok(BestResponse { player, best_value, gain: (best - current).max(0.0) })
}

/// Brute-force deviation gains of all four types.
pub fn oracle_gains(spec: &GameSpec, s: &StrategyProfile, grid_n: usize) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for t in PlayerType::ALL {
        out[t.index()] = brute_force_best_response(spec, s, t, grid_n)?.gain;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureEquilibrium {
    pub quadruple: PureQuadruple,
    pub payoffs: PayoffQuadruple,
}

/// All pure quadruples where no single type strictly gains (by more than
/// `TAU`) from switching its action.
pub fn find_pure_bne(spec: &GameSpec) -> Vec<PureEquilibrium> {
    PureQuadruple::all()
        .into_iter()
        .filter_map(|quad| {
            let payoffs = spec.pure_payoffs(&quad);
            let stable = PlayerType::ALL.iter().all(|t| {
                let i = t.index();
                let switched = quad.with_action(i, quad.actions()[i].other());
                spec.pure_payoffs(&switched).as_array()[i] <= payoffs.as_array()[i] + TAU
            });
            stable.then_some(PureEquilibrium { quadruple: quad, payoffs })
        })
        .collect()
}

/// Where a component sits in an equilibrium family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    Zero,
    One,
    Interior,
}

impl Support {
    const ALL: [Support; 3] = [Support::Zero, Support::One, Support::Interior];
}

/// A convex set of equilibria sharing one support pattern, given by its
/// extreme points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumFamily {
    pub support: [Support; 4],
    pub vertices: Vec<StrategyProfile>,
}

impl EquilibriumFamily {
    pub fn is_pure(&self) -> bool {
        !self.support.contains(&Support::Interior)
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }
}

/// `coeffs . y <= bound`
#[derive(Debug, Clone, Copy)]
struct HalfPlane {
    coeffs: [f64; 2],
    bound: f64,
}

/// Support-case analysis: each component is 0, 1, or interior with a
/// vanishing gradient. Each type's gradient is affine in the other player's
/// components only, so a case splits into two independent polytopes of at
/// most two dimensions each, whose vertices are enumerated exactly.
pub fn find_equilibria(spec: &GameSpec) -> Vec<EquilibriumFamily> {
    // gradient[i] = constant[i] + slope[i][j] * x[j] over the opposite side's j
    let zero = StrategyProfile { p: 0.0, q: 0.0, p_prime: 0.0, q_prime: 0.0 };
    let base = classical_gradients(spec, &zero).as_array();
    let unit_gradients: [[f64; 4]; 4] =
        std::array::from_fn(|j| classical_gradients(spec, &zero.with(j, 1.0)).as_array());
    let slope: [[f64; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| if (i < 2) != (j < 2) { unit_gradients[j][i] - base[i] } else { 0.0 })
    });

    let mut families = Vec::new();
    for code in 0..81 {
        let support: [Support; 4] = std::array::from_fn(|i| Support::ALL[(code / 3usize.pow(i as u32)) % 3]);
        // Alice's unknowns are constrained by Bob's conditions and vice versa.
        let alice = side_polytope(&support, [0, 1], [2, 3], &base, &slope);
        let bob = side_polytope(&support, [2, 3], [0, 1], &base, &slope);
        let (Some(alice), Some(bob)) = (alice, bob) else { continue };
        let mut vertices = Vec::new();
        for a in &alice {
            for b in &bob {
                vertices.push(StrategyProfile { p: a[0], q: a[1], p_prime: b[0], q_prime: b[1] });
            }
        }
        let genuinely_interior = (0..4).filter(|&i| support[i] == Support::Interior).all(|i| {
            let lo = vertices.iter().map(|v| v.get(i)).fold(f64::INFINITY, f64::min);
            let hi = vertices.iter().map(|v| v.get(i)).fold(f64::NEG_INFINITY, f64::max);
            hi > TAU && lo < 1.0 - TAU
        });
        if genuinely_interior {
            families.push(EquilibriumFamily { support, vertices });
        }
    }
    families.sort_by_key(|f| (!f.is_pure(), f.support.iter().filter(|s| **s == Support::Interior).count()));
    families
}

/// Vertices (as `[x_own0, x_own1]`) of the feasible set for one side's
/// components, or `None` when the case is infeasible.
fn side_polytope(
    support: &[Support; 4],
    own: [usize; 2],
    other: [usize; 2],
    base: &[f64; 4],
    slope: &[[f64; 4]; 4],
) -> Option<Vec<[f64; 2]>> {
    let unknowns: Vec<usize> = own.iter().copied().filter(|&i| support[i] == Support::Interior).collect();
    let fixed = |i: usize| match support[i] {
        Support::Zero => 0.0,
        _ => 1.0,
    };
    let mut planes = Vec::new();
    for (k, &u) in unknowns.iter().enumerate() {
        let mut e = [0.0; 2];
        e[k] = 1.0;
        planes.push(HalfPlane { coeffs: e, bound: 1.0 });
        planes.push(HalfPlane { coeffs: e.map(|v| -v), bound: 0.0 });
        debug_assert!(own.contains(&u));
    }
    // Conditions on the other side's types, written over our unknowns.
    for &i in &other {
        let mut constant = base[i];
        let mut coeffs = [0.0; 2];
        for &j in &own {
            match unknowns.iter().position(|&u| u == j) {
                Some(k) => coeffs[k] = slope[i][j],
                None => constant += slope[i][j] * fixed(j),
            }
        }
        // gradient = constant + coeffs . y
        let le_zero = HalfPlane { coeffs, bound: -constant };
        let ge_zero = HalfPlane { coeffs: coeffs.map(|c| -c), bound: constant };
        match support[i] {
            Support::Zero => planes.push(le_zero),
            Support::One => planes.push(ge_zero),
            Support::Interior => {
                planes.push(le_zero);
                planes.push(ge_zero);
            }
        }
    }

    let feasible = |y: [f64; 2]| planes.iter().all(|h| h.coeffs[0] * y[0] + h.coeffs[1] * y[1] <= h.bound + TAU);
    let embed = |y: [f64; 2]| -> [f64; 2] {
        let mut out = [0.0; 2];
        for (slot, &i) in own.iter().enumerate() {
            out[slot] = match unknowns.iter().position(|&u| u == i) {
                Some(k) => y[k].clamp(0.0, 1.0),
                None => fixed(i),
            };
        }
        out
    };

    let mut points: Vec<[f64; 2]> = Vec::new();
    match unknowns.len() {
        0 => {
            if feasible([0.0, 0.0]) {
                points.push([0.0, 0.0]);
            }
        }
        1 => {
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for h in &planes {
                let a = h.coeffs[0];
                if a > TAU {
                    hi = hi.min(h.bound / a);
                } else if a < -TAU {
                    lo = lo.max(h.bound / a);
                } else if h.bound < -TAU {
                    return None;
                }
            }
            if lo > hi + TAU {
                return None;
            }
            points.push([lo, 0.0]);
            if hi - lo > TAU {
                points.push([hi, 0.0]);
            }
        }
        _ => {
            for (m, h1) in planes.iter().enumerate() {
                for h2 in &planes[m + 1..] {
                    let det = h1.coeffs[0] * h2.coeffs[1] - h1.coeffs[1] * h2.coeffs[0];
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let y = [
                        (h1.bound * h2.coeffs[1] - h1.coeffs[1] * h2.bound) / det,
                        (h1.coeffs[0] * h2.bound - h1.bound * h2.coeffs[0]) / det,
                    ];
                    if feasible(y) && !points.iter().any(|p| (p[0] - y[0]).abs() < 1e-9 && (p[1] - y[1]).abs() < 1e-9) {
                        points.push(y);
                    }
                }
            }
            if points.is_empty() {
                return None;
            }
        }
    }
    if points.is_empty() {
        return None;
    }
    Some(points.into_iter().map(embed).collect())
}

/// The chain-rule constants for the two-sided Battle of Sexes:
/// `(2, 4, -2, -2(2ω + 1))`.
pub fn bos_fig1_chain_rule_constants(omega: f64) -> [f64; 4] {
    [2.0, 4.0, -2.0, -2.0 * (2.0 * omega + 1.0)]
}

/// Derivative of each type's EPR payoff with respect to its own marginal,
/// through the independent octet: `sum_k (dPi/dmu_k) / (dm/dmu_k)` over the
/// octet coordinates the marginal depends on.
pub fn chain_rule_derivatives(spec: &GameSpec) -> Result<[f64; 4]> {
    let payoff = spec.payoff_mu_forms();
    let marginal = marginal_forms();
    let mut out = [0.0; 4];
    for i in 0..4 {
        for k in 0..8 {
            let (c, m) = (payoff[i].coeffs[k], marginal[i].coeffs[k]);
            if m.abs() > TAU {
                out[i] += c / m;
            } else if c.abs() > TAU {
                return Err(Error::Indeterminate(format!(
                    "payoff of {} depends on an octet coordinate its marginal does not",
                    PlayerType::ALL[i]
                )));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumEquilibrium {
    pub report: EquilibriumReport,
    pub derivatives: [f64; 4],
    /// Deviation gains of the same marginals in the factorizable game.
    pub classical_margins: [f64; 4],
}

impl QuantumEquilibrium {
    pub fn is_classical_equilibrium(&self) -> bool {
        self.classical_margins.iter().all(|&m| m <= TAU)
    }
}

/// The EPR-game equilibrium: the sign of each constant derivative pins the
/// marginal to 0 or 1, and deterministic marginals fix the whole behavior set.
pub fn quantum_bne(spec: &GameSpec) -> Result<QuantumEquilibrium> {
    let derived = chain_rule_derivatives(spec)?;
    let derivatives = if spec.is_bos_fig1() {
        let constants = bos_fig1_chain_rule_constants(spec.omega());
        assert!(
            derived.iter().zip(constants).all(|(d, c)| (d - c).abs() < 1e-12),
            "chain-rule derivatives {derived:?} disagree with the closed-form constants {constants:?}"
        );
        constants
    } else {
        derived
    };
    let mut marg = [0.0; 4];
    for (i, &d) in derivatives.iter().enumerate() {
        marg[i] = if d > TAU {
            1.0
        } else if d < -TAU {
            0.0
        } else {
            return Err(Error::Indeterminate(format!("derivative for {} vanishes", PlayerType::ALL[i])));
        };
    }
    let profile = StrategyProfile::from_array(marg)?;
    let behavior = BehaviorSet::from_profile(&profile);
    let payoffs = spec.epr_payoffs(&behavior)?;
    let delta = behavior.chsh_delta()?;
    let margins = std::array::from_fn(|i| deviation_gain(derivatives[i], marg[i]));
    let classical = classical_gradients(spec, &profile).as_array();
    let classical_margins = std::array::from_fn(|i| deviation_gain(classical[i], marg[i]));
    Ok(QuantumEquilibrium {
        report: EquilibriumReport {
            kind: EquilibriumKind::Quantum,
            profile,
            payoffs,
            margins,
            behavior: Some(behavior),
            delta: Some(delta),
        },
        derivatives,
        classical_margins,
    })
}

/// Label for a pure action probability, for display.
pub fn action_of(x: f64) -> Option<Action> {
    if x >= 1.0 - TAU {
        Some(Action::B)
    } else if x <= TAU {
        Some(Action::S)
    } else {
        None
    }
}
