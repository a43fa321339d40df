//! The Bayesian game: payoff blocks, type beliefs, and every payoff function.
//!
//! Action encoding: B is index 0 and is the action whose probability a
//! strategy component gives; S is index 1. Block `2 * alice_type + bob_type`
//! holds the payoffs when those two types meet, which lines the blocks up with
//! the direction-pair blocks of a [`BehaviorSet`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::probset::{entry_form, AffineForm, BehaviorSet, IndependentOctet, StrategyProfile};
use crate::{Error, Result, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    B,
    S,
}

impl Action {
    pub const BOTH: [Action; 2] = [Action::B, Action::S];

    pub fn index(self) -> usize {
        match self {
            Action::B => 0,
            Action::S => 1,
        }
    }

    /// Probability of B when this action is played for sure.
    pub fn prob_b(self) -> f64 {
        match self {
            Action::B => 1.0,
            Action::S => 0.0,
        }
    }

    pub fn other(self) -> Action {
        match self {
            Action::B => Action::S,
            Action::S => Action::B,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::B => "B",
            Action::S => "S",
        })
    }
}

/// `blocks[2 * alice_type + bob_type][alice_action][bob_action] = [alice, bob]`
pub type Blocks = [[[[f64; 2]; 2]; 2]; 4];

/// Payoff blocks from the two-sided Battle of Sexes with uncertain preferences.
/// Type 1 of each player wants to meet the other, type 2 wants to avoid.
pub const BOS_FIG1_BLOCKS: Blocks = [
    [[[2.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 2.0]]],
    [[[2.0, 0.0], [0.0, 2.0]], [[0.0, 1.0], [1.0, 0.0]]],
    [[[0.0, 1.0], [2.0, 0.0]], [[1.0, 0.0], [0.0, 2.0]]],
    [[[0.0, 0.0], [2.0, 2.0]], [[1.0, 1.0], [0.0, 0.0]]],
];

pub const BOS_FIG1_NAME: &str = "bos-fig1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameSpecJson", into = "GameSpecJson")]
pub struct GameSpec {
    blocks: Blocks,
    omega: f64,
    alice_type_prob: f64,
}

#[derive(Serialize, Deserialize)]
struct GameSpecJson {
    omega: f64,
    #[serde(default = "half")]
    alice_type_prob: f64,
    blocks: Blocks,
}

fn half() -> f64 {
    0.5
}

impl TryFrom<GameSpecJson> for GameSpec {
    type Error = Error;
    fn try_from(raw: GameSpecJson) -> Result<Self> {
        GameSpec::new(raw.blocks, raw.omega, raw.alice_type_prob)
    }
}

impl From<GameSpec> for GameSpecJson {
    fn from(g: GameSpec) -> Self {
        GameSpecJson { omega: g.omega, alice_type_prob: g.alice_type_prob, blocks: g.blocks }
    }
}

fn check_prob(what: &str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite { what: what.into(), value: v });
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::OutOfRange { what: what.into(), value: v });
    }
    Ok(v)
}

impl GameSpec {
    /// `omega` is Bob's belief that Alice is type 1; `alice_type_prob` is
    /// Alice's belief that Bob is type 1.
    pub fn new(blocks: Blocks, omega: f64, alice_type_prob: f64) -> Result<Self> {
        let omega = check_prob("omega", omega)?;
        let alice_type_prob = check_prob("alice_type_prob", alice_type_prob)?;
        if blocks.iter().flatten().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGame("payoff entries must be finite".into()));
        }
        Ok(Self { blocks, omega, alice_type_prob })
    }

    pub fn bos_fig1(omega: f64) -> Result<Self> {
        Self::new(BOS_FIG1_BLOCKS, omega, 0.5)
    }

    pub fn preset(name: &str, omega: f64) -> Option<Result<Self>> {
        (name == BOS_FIG1_NAME).then(|| Self::bos_fig1(omega))
    }

    pub fn is_bos_fig1(&self) -> bool {
        self.blocks == BOS_FIG1_BLOCKS && self.alice_type_prob == 0.5
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alice_type_prob(&self) -> f64 {
        self.alice_type_prob
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.blocks, omega, self.alice_type_prob)
    }

    pub fn alice_payoff(&self, alice_type: usize, bob_type: usize, a: usize, b: usize) -> f64 {
        self.blocks[2 * alice_type + bob_type][a][b][0]
    }

    pub fn bob_payoff(&self, alice_type: usize, bob_type: usize, a: usize, b: usize) -> f64 {
        self.blocks[2 * alice_type + bob_type][a][b][1]
    }

    /// Alice's weights over Bob's types.
    fn bob_type_weights(&self) -> [f64; 2] {
        [self.alice_type_prob, 1.0 - self.alice_type_prob]
    }

    /// Bob's weights over Alice's types.
    fn alice_type_weights(&self) -> [f64; 2] {
        [self.omega, 1.0 - self.omega]
    }

    /// Expected payoffs when every type plays B with the given probability.
    pub fn mixed_payoffs(&self, s: &StrategyProfile) -> PayoffQuadruple {
        let alice = [s.p, s.q];
        let bob = [s.p_prime, s.q_prime];
        let dist = |x: f64| [x, 1.0 - x];
        let mut out = [0.0; 4];
        for t in 0..2 {
            for (u, w) in self.bob_type_weights().into_iter().enumerate() {
                out[t] += w * bilinear(dist(alice[t]), dist(bob[u]), |a, b| self.alice_payoff(t, u, a, b));
            }
            for (u, w) in self.alice_type_weights().into_iter().enumerate() {
                out[2 + t] += w * bilinear(dist(alice[u]), dist(bob[t]), |a, b| self.bob_payoff(u, t, a, b));
            }
        }
        PayoffQuadruple::from_array(out)
    }

    pub fn pure_payoffs(&self, profile: &PureQuadruple) -> PayoffQuadruple {
        let mut out = [0.0; 4];
        for t in 0..2 {
            for (u, w) in self.bob_type_weights().into_iter().enumerate() {
                out[t] += w * self.alice_payoff(t, u, profile.alice[t].index(), profile.bob[u].index());
            }
            for (u, w) in self.alice_type_weights().into_iter().enumerate() {
                out[2 + t] += w * self.bob_payoff(u, t, profile.alice[u].index(), profile.bob[t].index());
            }
        }
        PayoffQuadruple::from_array(out)
    }

    /// Payoffs when the joint outcome probabilities come from an EPR set:
    /// type `t` of Alice plays in blocks (t, ·), type `t` of Bob in (·, t).
    pub fn epr_payoffs(&self, set: &BehaviorSet) -> Result<PayoffQuadruple> {
        set.ensure_valid()?;
        let mut out = [0.0; 4];
        for t in 0..2 {
            for (u, w) in self.bob_type_weights().into_iter().enumerate() {
                out[t] += w * block_sum(|a, b| set.entry(t, u, a, b) * self.alice_payoff(t, u, a, b));
            }
            for (u, w) in self.alice_type_weights().into_iter().enumerate() {
                out[2 + t] += w * block_sum(|a, b| set.entry(u, t, a, b) * self.bob_payoff(u, t, a, b));
            }
        }
        Ok(PayoffQuadruple::from_array(out))
    }

    /// The four EPR payoffs as affine functions of the independent octet.
    pub fn payoff_mu_forms(&self) -> [AffineForm; 4] {
        let weighted = |j: usize, k: f64| entry_form(j).scaled(k);
        let idx = crate::probset::eps_index;
        let mut out = [AffineForm::ZERO; 4];
        for t in 0..2 {
            for (u, w) in self.bob_type_weights().into_iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        out[t] = out[t].add(&weighted(idx(t, u, a, b), w * self.alice_payoff(t, u, a, b)));
                    }
                }
            }
            for (u, w) in self.alice_type_weights().into_iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        out[2 + t] = out[2 + t].add(&weighted(idx(u, t, a, b), w * self.bob_payoff(u, t, a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn epr_payoffs_mu(&self, octet: &IndependentOctet) -> PayoffQuadruple {
        let forms = self.payoff_mu_forms();
        PayoffQuadruple::from_array(forms.map(|f| f.eval(octet.as_array())))
    }

    /// The one-sided variant: Alice is type 1 for sure, Bob is type 1 or 2
    /// with Alice's belief. Rows are Alice's action, columns Bob's pair of
    /// actions; each cell is (Alice's payoff, Bob's type-averaged payoff).
    pub fn one_sided_table(&self) -> PayoffTable {
        let w = self.bob_type_weights();
        let cells = Action::BOTH
            .iter()
            .map(|&a| {
                action_pairs()
                    .iter()
                    .map(|pair| {
                        let (mut alice, mut bob) = (0.0, 0.0);
                        for u in 0..2 {
                            alice += w[u] * self.alice_payoff(0, u, a.index(), pair[u].index());
                            bob += w[u] * self.bob_payoff(0, u, a.index(), pair[u].index());
                        }
                        vec![alice, bob]
                    })
                    .collect()
            })
            .collect();
        PayoffTable {
            name: TableKind::OneSided.name().into(),
            omega: self.omega,
            row_labels: action_labels(),
            col_labels: pair_labels(),
            cells,
        }
    }

    /// Pure Nash equilibria of the one-sided variant (weak convention).
    pub fn one_sided_pure_ne(&self) -> Vec<(Action, [Action; 2])> {
        let w = self.bob_type_weights();
        let alice_payoff = |a: Action, pair: &[Action; 2]| -> f64 {
            (0..2).map(|u| w[u] * self.alice_payoff(0, u, a.index(), pair[u].index())).sum()
        };
        let mut out = Vec::new();
        for a in Action::BOTH {
            for pair in action_pairs() {
                let alice_ok = alice_payoff(a.other(), &pair) <= alice_payoff(a, &pair) + TAU;
                let bob_ok = (0..2).all(|u| {
                    self.bob_payoff(0, u, a.index(), pair[u].other().index())
                        <= self.bob_payoff(0, u, a.index(), pair[u].index()) + TAU
                });
                if alice_ok && bob_ok {
                    out.push((a, pair));
                }
            }
        }
        out
    }

    pub fn table(&self, kind: TableKind) -> PayoffTable {
        if kind == TableKind::OneSided {
            return self.one_sided_table();
        }
        let pairs = action_pairs();
        let pure = |alice: [Action; 2], bob: [Action; 2]| self.pure_payoffs(&PureQuadruple { alice, bob });
        let (row_labels, col_labels, cells): (Vec<String>, Vec<String>, Vec<Vec<Vec<f64>>>) = match kind {
            TableKind::AliceType1 | TableKind::AliceType2 => {
                let t = usize::from(kind == TableKind::AliceType2);
                let cells = Action::BOTH
                    .iter()
                    .map(|&a| pairs.iter().map(|&bob| vec![pure([a, a], bob).as_array()[t]]).collect())
                    .collect();
                (action_labels(), pair_labels(), cells)
            }
            TableKind::BobType1 | TableKind::BobType2 => {
                let t = usize::from(kind == TableKind::BobType2);
                let cells = Action::BOTH
                    .iter()
                    .map(|&b| pairs.iter().map(|&alice| vec![pure(alice, [b, b]).as_array()[2 + t]]).collect())
                    .collect();
                (action_labels(), pair_labels(), cells)
            }
            TableKind::AliceCombined | TableKind::BobCombined | TableKind::Combined => {
                let range = match kind {
                    TableKind::AliceCombined => 0..2,
                    TableKind::BobCombined => 2..4,
                    _ => 0..4,
                };
                let cells = pairs
                    .iter()
                    .map(|&alice| {
                        pairs.iter().map(|&bob| pure(alice, bob).as_array()[range.clone()].to_vec()).collect()
                    })
                    .collect();
                (pair_labels(), pair_labels(), cells)
            }
            TableKind::OneSided => unreachable!(),
        };
        PayoffTable { name: kind.name().into(), omega: self.omega, row_labels, col_labels, cells }
    }
}

fn bilinear(x: [f64; 2], y: [f64; 2], m: impl Fn(usize, usize) -> f64) -> f64 {
    block_sum(|a, b| x[a] * y[b] * m(a, b))
}

fn block_sum(f: impl Fn(usize, usize) -> f64) -> f64 {
    f(0, 0) + f(0, 1) + f(1, 0) + f(1, 1)
}

/// (B,B), (B,S), (S,B), (S,S): first entry is type 1's action.
pub fn action_pairs() -> [[Action; 2]; 4] {
    use Action::*;
    [[B, B], [B, S], [S, B], [S, S]]
}

fn action_labels() -> Vec<String> {
    Action::BOTH.iter().map(|a| a.to_string()).collect()
}

fn pair_labels() -> Vec<String> {
    action_pairs().iter().map(|[x, y]| format!("({x},{y})")).collect()
}

/// One pure action per type: Alice's two types, then Bob's two types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PureQuadruple {
    pub alice: [Action; 2],
    pub bob: [Action; 2],
}

impl PureQuadruple {
    /// All sixteen, Alice's pair varying slowest.
    pub fn all() -> Vec<PureQuadruple> {
        let pairs = action_pairs();
        pairs.iter().flat_map(|&alice| pairs.iter().map(move |&bob| PureQuadruple { alice, bob })).collect()
    }

    pub fn to_profile(&self) -> StrategyProfile {
        StrategyProfile {
            p: self.alice[0].prob_b(),
            q: self.alice[1].prob_b(),
            p_prime: self.bob[0].prob_b(),
            q_prime: self.bob[1].prob_b(),
        }
    }

    /// Actions in type order (Alice 1, Alice 2, Bob 1, Bob 2).
    pub fn actions(&self) -> [Action; 4] {
        [self.alice[0], self.alice[1], self.bob[0], self.bob[1]]
    }

    pub fn with_action(&self, player: usize, action: Action) -> Self {
        let mut q = *self;
        match player {
            0 | 1 => q.alice[player] = action,
            _ => q.bob[player - 2] = action,
        }
        q
    }
}

impl fmt::Display for PureQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{({},{}),({},{})}}", self.alice[0], self.alice[1], self.bob[0], self.bob[1])
    }
}

impl FromStr for PureQuadruple {
    type Err = String;
    /// Parses `{(B,S),(S,B)}`; braces, parentheses and spaces are optional.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let letters: Vec<Action> = s
            .chars()
            .filter(|c| !"{}(), ".contains(*c))
            .map(|c| match c {
                'B' => Ok(Action::B),
                'S' => Ok(Action::S),
                other => Err(format!("unexpected character {other:?} in {s:?}")),
            })
            .collect::<std::result::Result<_, _>>()?;
        match letters[..] {
            [a1, a2, b1, b2] => Ok(PureQuadruple { alice: [a1, a2], bob: [b1, b2] }),
            _ => Err(format!("expected four actions in {s:?}")),
        }
    }
}

/// Expected payoffs to Alice type 1, Alice type 2, Bob type 1, Bob type 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct PayoffQuadruple {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

impl PayoffQuadruple {
    pub fn from_array(v: [f64; 4]) -> Self {
        Self { a1: v[0], a2: v[1], b1: v[2], b2: v[3] }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a1, self.a2, self.b1, self.b2]
    }

    pub fn max_abs_diff(&self, other: &PayoffQuadruple) -> f64 {
        self.as_array().iter().zip(other.as_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl From<[f64; 4]> for PayoffQuadruple {
    fn from(v: [f64; 4]) -> Self {
        Self::from_array(v)
    }
}

impl From<PayoffQuadruple> for [f64; 4] {
    fn from(p: PayoffQuadruple) -> Self {
        p.as_array()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    OneSided,
    AliceType1,
    AliceType2,
    AliceCombined,
    BobType1,
    BobType2,
    BobCombined,
    Combined,
}

impl TableKind {
    pub const ALL: [TableKind; 8] = [
        TableKind::OneSided,
        TableKind::AliceType1,
        TableKind::AliceType2,
        TableKind::AliceCombined,
        TableKind::BobType1,
        TableKind::BobType2,
        TableKind::BobCombined,
        TableKind::Combined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::OneSided => "one-sided",
            TableKind::AliceType1 => "alice-type1",
            TableKind::AliceType2 => "alice-type2",
            TableKind::AliceCombined => "alice-combined",
            TableKind::BobType1 => "bob-type1",
            TableKind::BobType2 => "bob-type2",
            TableKind::BobCombined => "bob-combined",
            TableKind::Combined => "combined",
        }
    }
}

impl FromStr for TableKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        TableKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = TableKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown table {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// A rendered payoff table. `cells[row][col]` holds one value per payoff
/// shown in that cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffTable {
    pub name: String,
    pub omega: f64,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub cells: Vec<Vec<Vec<f64>>>,
}
