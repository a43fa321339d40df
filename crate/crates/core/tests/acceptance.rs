//! Acceptance criteria. Prints one PASS/FAIL line each and exits non-zero
//! if any criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use bayes_epr::equilibrium::{classical_gradients, find_pure_bne, oracle_gains, quantum_bne, verify_classical};
use bayes_epr::game::{GameSpec, PureQuadruple, TableKind};
use bayes_epr::probset::{BehaviorSet, ChshLabel, IndependentOctet, StrategyProfile};
use bayes_epr::quantum_source::{generate, DirectionConfig, TwoQubitState};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_THIRDS: f64 = 2.0 / 3.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fig1(omega: f64) -> GameSpec {
    GameSpec::bos_fig1(omega).unwrap()
}

fn profile(v: [f64; 4]) -> StrategyProfile {
    StrategyProfile::from_array(v).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn random_profile(rng: &mut ChaCha8Rng) -> StrategyProfile {
    profile(std::array::from_fn(|_| rng.gen_range(0.0..=1.0)))
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pure_bne() -> Outcome {
    let found = find_pure_bne(&fig1(TWO_THIRDS));
    let want: [(&str, [f64; 4]); 2] =
        [("{(S,B),(S,S)}", [1.0, 2.0, 4.0 / 3.0, 2.0 / 3.0]), ("{(B,B),(B,S)}", [1.0, 1.0, 1.0, 2.0])];
    if found.len() != want.len() {
        return Err(format!("found {} equilibria", found.len()));
    }
    let mut worst = 0.0f64;
    for (name, pay) in want {
        let q: PureQuadruple = name.parse().unwrap();
        let Some(e) = found.iter().find(|e| e.quadruple == q) else {
            return Err(format!("{name} missing"));
        };
        worst = worst.max(max_diff(&e.payoffs.as_array(), &pay));
    }
    ensure(worst <= 1e-12, format!("2 equilibria, max payoff error {worst:.1e}"))
}

fn mixed_bne() -> Outcome {
    let g = fig1(TWO_THIRDS);
    let s = profile([0.5, 1.0, TWO_THIRDS, 0.0]);
    let report = verify_classical(&g, &s).map_err(|r| format!("rejected, margins {:?}", r.margins))?;
    let err = max_diff(&report.payoffs.as_array(), &[TWO_THIRDS, 2.0 - TWO_THIRDS, TWO_THIRDS, 2.0 - TWO_THIRDS]);
    let gains = oracle_gains(&g, &s, 2).unwrap();
    let worst_gain = gains.iter().copied().fold(0.0, f64::max);
    ensure(err <= 1e-12 && worst_gain <= 1e-12, format!("payoff error {err:.1e}, max oracle gain {worst_gain:.1e}"))
}

fn equilibrium_set() -> [f64; 16] {
    let mut eps = [0.0; 16];
    for j in [2, 6, 10, 14] {
        eps[j - 1] = 1.0;
    }
    eps
}

fn quantum() -> Outcome {
    for k in 0..=10 {
        let w = k as f64 / 10.0;
        let q = quantum_bne(&fig1(w)).map_err(|e| format!("omega {w}: {e}"))?;
        let r = &q.report;
        let set = r.behavior.as_ref().ok_or("no behavior set")?;
        if r.profile.to_array() != [1.0, 1.0, 0.0, 0.0]
            || *set.as_array() != equilibrium_set()
            || r.payoffs.as_array() != [0.0, 2.0, 0.0, 2.0]
        {
            return Err(format!("omega {w}: {:?} {:?}", r.profile, r.payoffs));
        }
    }
    Ok("11 values of omega, exact".into())
}

fn chsh_at_equilibrium() -> Outcome {
    let set = BehaviorSet::new(equilibrium_set()).unwrap();
    let class = set.classify().unwrap();
    ensure(class.delta == -2.0 && class.label == ChshLabel::Local, format!("delta {}, {}", class.delta, class.label))
}

fn reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let s = random_profile(&mut rng);
        let g = fig1(rng.gen_range(0.0..=1.0));
        let epr = g.epr_payoffs(&BehaviorSet::from_profile(&s)).unwrap();
        worst = worst.max(epr.max_abs_diff(&g.mixed_payoffs(&s)));
    }
    ensure(worst <= 1e-12, format!("10^4 samples, max deviation {worst:.1e}"))
}

fn closure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut accepted, mut drawn, mut worst) = (0, 0u64, 0.0f64);
    while accepted < 1_000 {
        drawn += 1;
        let mu: [f64; 8] = std::array::from_fn(|_| rng.gen_range(0.0..=1.0));
        let Ok(octet) = IndependentOctet::new(mu) else { continue };
        accepted += 1;
        worst = worst.max(octet.reconstruct().validate().max_equation_residual());
    }
    ensure(worst <= 1e-12, format!("10^3 feasible octets ({drawn} drawn), max residual {worst:.1e}"))
}

fn quantum_source() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_residual, mut worst_delta) = (0.0f64, 0.0f64);
    for _ in 0..1_000 {
        let st = TwoQubitState::new(random_amps(&mut rng)).unwrap();
        let [a, c, b, d] = random_angles(&mut rng);
        let set = generate(&st, &DirectionConfig::from_angles(a, c, b, d));
        let report = set.validate();
        if !report.is_valid() {
            return Err(format!("invalid generated set, residual {:.1e}", report.max_residual));
        }
        worst_residual = worst_residual.max(report.max_residual);
        worst_delta = worst_delta.max(set.chsh_delta().unwrap().abs());
    }
    let singlet =
        generate(&TwoQubitState::singlet(), &DirectionConfig::from_angles(0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * PI / 4.0));
    let singlet_delta = singlet.chsh_delta().unwrap();
    let detail = format!(
        "max residual {worst_residual:.1e}, max |delta| {worst_delta:.6}, singlet at (0, pi/2, pi/4, 3pi/4) |delta| = {:.6} (target {:.6})",
        singlet_delta.abs(),
        2.0 * SQRT_2
    );
    ensure(
        worst_residual <= 1e-9
            && worst_delta <= 2.0 * SQRT_2 + 1e-9
            && (singlet_delta.abs() - 2.0 * SQRT_2).abs() <= 1e-9,
        detail,
    )
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let amps = random_amps(&mut rng);
        let angles = random_angles(&mut rng);
        let oracle = projector_eps(amps, angles);
        worst = worst.max((oracle[0] - closed_form_eps1(amps, angles[0], angles[2])).abs());
        worst = worst.max((oracle[1] - closed_form_eps2(amps, angles[0], angles[2])).abs());
    }
    ensure(worst <= 1e-12, format!("100 inputs, max deviation {worst:.1e}"))
}

fn tables() -> Outcome {
    let mut mismatches = Vec::new();
    let mut compare = |what: String, got: &[f64], want: &[f64]| {
        if got.len() != want.len() || max_diff(got, want) > 1e-12 {
            mismatches.push(format!("{what}: {got:?} vs {want:?}"));
        }
    };

    let t = fig1(0.5).table(TableKind::OneSided);
    let table1 = [[[2.0, 0.5], [1.0, 1.5], [1.0, 0.0], [0.0, 1.0]], [[0.0, 0.5], [0.5, 0.0], [0.5, 1.5], [1.0, 1.0]]];
    for (i, row) in table1.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            compare(format!("one-sided[{i}][{j}]"), &t.cells[i][j], cell);
        }
    }

    let alice1 = [[2.0, 1.0, 1.0, 0.0], [0.0, 0.5, 0.5, 1.0]];
    let alice2 = [[0.0, 1.0, 1.0, 2.0], [1.0, 0.5, 0.5, 0.0]];
    for w in [0.0, 0.5, TWO_THIRDS, 1.0] {
        let g = fig1(w);
        for (kind, want) in [(TableKind::AliceType1, alice1), (TableKind::AliceType2, alice2)] {
            let t = g.table(kind);
            for i in 0..2 {
                for j in 0..4 {
                    compare(format!("{}[{i}][{j}] at {w}", kind.name()), &t.cells[i][j], &[want[i][j]]);
                }
            }
        }
        compare(format!("alice-combined[2][2] at {w}"), &g.table(TableKind::AliceCombined).cells[2][2], &[0.5, 1.0]);

        let v = 1.0 - w;
        let bob1 = [[1.0, w, v, 0.0], [0.0, 2.0 * v, 2.0 * w, 2.0]];
        let bob2 = [[0.0, v, w, 1.0], [2.0, 2.0 * w, 2.0 * v, 0.0]];
        for (kind, want) in [(TableKind::BobType1, bob1), (TableKind::BobType2, bob2)] {
            let t = g.table(kind);
            for i in 0..2 {
                for j in 0..4 {
                    compare(format!("{}[{i}][{j}] at {w}", kind.name()), &t.cells[i][j], &[want[i][j]]);
                }
            }
        }
    }
    ensure(mismatches.is_empty(), if mismatches.is_empty() { "all cells match".into() } else { mismatches.join("; ") })
}

/// The derivatives exactly as printed alongside the mixed-strategy analysis.
fn printed_gradients(w: f64, s: &StrategyProfile) -> [f64; 4] {
    let a = s.p_prime + s.q_prime;
    let t = 3.0 * w * s.p + 3.0 * (1.0 - w) * s.q;
    [1.5 * a - 1.0, 2.0 * (1.0 - a), t - 2.0, -(t - 1.0)]
}

fn gradients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut fd_worst, mut printed_worst) = ([0.0f64; 4], [0.0f64; 4]);
    let h = 1e-5;
    for _ in 0..1_000 {
        let s = random_profile(&mut rng);
        let w = rng.gen_range(0.0..=1.0);
        let g = fig1(w);
        let grad = classical_gradients(&g, &s).as_array();
        let printed = printed_gradients(w, &s);
        for i in 0..4 {
            let x = s.get(i);
            let fd = (g.mixed_payoffs(&s.with(i, x + h)).as_array()[i]
                - g.mixed_payoffs(&s.with(i, x - h)).as_array()[i])
                / (2.0 * h);
            fd_worst[i] = fd_worst[i].max((fd - grad[i]).abs());
            printed_worst[i] = printed_worst[i].max((printed[i] - grad[i]).abs());
        }
    }
    let fd_max = fd_worst.iter().copied().fold(0.0, f64::max);
    let names = ["dA1/dp", "dA2/dq", "dB1/dp'", "dB2/dq'"];
    let off: Vec<String> = (0..4)
        .filter(|&i| printed_worst[i] > 1e-12)
        .map(|i| format!("{} differs from the printed form by up to {:.3}", names[i], printed_worst[i]))
        .collect();
    let detail = format!(
        "finite differences max error {fd_max:.1e}; {}",
        if off.is_empty() { "printed closed forms match".to_string() } else { off.join(", ") }
    );
    ensure(fd_max <= 1e-8 && off.is_empty(), detail)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("pure BNE at omega = 2/3", pure_bne),
        ("mixed BNE verification", mixed_bne),
        ("quantum BNE", quantum),
        ("CHSH at the quantum equilibrium", chsh_at_equilibrium),
        ("reduction to mixed payoffs", reduction),
        ("constraint closure", closure),
        ("quantum source soundness", quantum_source),
        ("closed-form probabilities", closed_forms),
        ("table fidelity", tables),
        ("gradient fidelity", gradients),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
