//! Invariant checks behind `discount-osc verify`.

use std::io::Write;

use anyhow::Result;
use discount_osc::game::{
    gamma_closed, gamma_linear_oracle, payoff_g, simulate_mc, ActionI, ActionJ, Discount, State,
    StationaryP1, StationaryP2,
};
use discount_osc::hamiltonian::{DiscountedSolution, Hamiltonian};
use discount_osc::shapley::{
    lambda_seq, mu_seq, sequence_records, shapley_residual, stationary_value, threshold_strategy,
    truncated_action_set, SeqKind, TruncationRule,
};
use discount_osc::ExactQuad;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::VerifyArgs;

const PAIRS: [(ActionI, ActionI); 4] = [
    (ActionI::Zero, ActionI::Zero),
    (ActionI::Zero, ActionI::One),
    (ActionI::One, ActionI::Zero),
    (ActionI::One, ActionI::One),
];

struct Check {
    name: &'static str,
    anchor: &'static str,
    outcome: std::result::Result<String, String>,
}

type Outcome = std::result::Result<String, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ratio(n: i64, d: i64) -> ExactQuad {
    ExactQuad::from_ratio(n, d)
}

fn disc(x: ExactQuad) -> std::result::Result<Discount, String> {
    Discount::new(x).map_err(fail)
}

fn value_bounds(jobs: usize) -> Outcome {
    let mut count = 0;
    for r in sequence_records(3, 6, false, jobs).map_err(fail)? {
        let two = ExactQuad::from_integer(2);
        if !(r.w_minus <= r.w_plus && r.w_plus <= &r.w_minus + &two) {
            return Err(format!("violated at λ = {}", r.lambda));
        }
        count += 1;
    }
    for l in [ExactQuad::one(), ratio(1, 2), ratio(1, 10)] {
        let v = stationary_value(&disc(l.clone())?, 12)
            .map_err(fail)?
            .values;
        if !v.satisfies_bounds() {
            return Err(format!("violated at λ = {l}"));
        }
        count += 1;
    }
    Ok(format!("{count} discounts"))
}

fn shapley_fixed_point(rng: &mut SplitMix64, perturb: bool) -> Outcome {
    for k in 0..10 {
        let l = disc(ratio(rng.gen_range(1..=1000), 1000))?;
        let n = rng.gen_range(1..=12usize);
        let mut w = stationary_value(&l, n).map_err(fail)?.values;
        if perturb && k == 0 {
            w.w_plus = &w.w_plus + &ExactQuad::pow2(-30);
        }
        let (rp, rm) = shapley_residual(&w, &l, n).map_err(fail)?;
        if !(rp.is_zero() && rm.is_zero()) {
            return Err(format!(
                "residual ({}, {}) at λ = {}, N = {n}",
                rp.approx(12),
                rm.approx(12),
                l.value()
            ));
        }
    }
    Ok("10 random (λ, N), residual exactly 0".into())
}

fn closed_forms(rng: &mut SplitMix64) -> Outcome {
    for _ in 0..100 {
        let (i, ip) = PAIRS[rng.gen_range(0..4)];
        let l = disc(ratio(rng.gen_range(1..=997), 997))?;
        let a = ratio(rng.gen_range(1..991), 991);
        let b = ratio(rng.gen_range(1..991), 991);
        let closed = gamma_closed(i, ip, &l, &a, &b).map_err(fail)?;
        let (oracle, _) = gamma_linear_oracle(i, ip, &l, &a, &b).map_err(fail)?;
        if closed != oracle {
            return Err(format!("mismatch at λ = {}, a = {a}, b = {b}", l.value()));
        }
    }
    Ok("100 random inputs agree exactly".into())
}

fn one_stage() -> Outcome {
    let one = disc(ExactQuad::one())?;
    let js: Vec<ExactQuad> = truncated_action_set(5)
        .map_err(fail)?
        .iter()
        .map(ActionJ::value)
        .collect();
    for (i, ip) in PAIRS {
        for a in &js {
            for b in &js {
                let closed = gamma_closed(i, ip, &one, a, b).map_err(fail)?;
                if closed != payoff_g(State::Plus, i, a).map_err(fail)? {
                    return Err(format!("({i:?}, {ip:?}) at a = {a}"));
                }
            }
        }
    }
    Ok("4 strategy pairs on a 6×6 grid".into())
}

fn monotonicity() -> Outcome {
    let mut js: Vec<ExactQuad> = truncated_action_set(5)
        .map_err(fail)?
        .iter()
        .map(ActionJ::value)
        .collect();
    js.sort();
    // (i, i') → (nondecreasing in a, nondecreasing in b)
    let patterns = [
        (PAIRS[0], false, true),
        (PAIRS[3], true, false),
        (PAIRS[2], true, true),
        (PAIRS[1], false, false),
    ];
    for l in [ratio(1, 2), ratio(1, 10)] {
        let l = disc(l)?;
        for ((i, ip), up_a, up_b) in patterns {
            let at = |a: &ExactQuad, b: &ExactQuad| gamma_closed(i, ip, &l, a, b);
            for w in js.windows(2) {
                for o in &js {
                    let (lo_a, hi_a) = (at(&w[0], o).map_err(fail)?, at(&w[1], o).map_err(fail)?);
                    let (lo_b, hi_b) = (at(o, &w[0]).map_err(fail)?, at(o, &w[1]).map_err(fail)?);
                    let ok_a = if up_a { hi_a >= lo_a } else { hi_a <= lo_a };
                    let ok_b = if up_b { hi_b >= lo_b } else { hi_b <= lo_b };
                    if !(ok_a && ok_b) {
                        return Err(format!("({i:?}, {ip:?}) at λ = {}", l.value()));
                    }
                }
            }
        }
    }
    Ok("4 sign patterns, λ ∈ {1/2, 1/10}".into())
}

fn hamiltonian() -> Outcome {
    let h = Hamiltonian::new(8).map_err(fail)?;
    let sqrt2 = ExactQuad::sqrt2();
    if h.h1(&ExactQuad::zero()) != ratio(17, 8) - &sqrt2 - &sqrt2 {
        return Err("H₁(0) ≠ 17/8 − 2√2".into());
    }
    if h.hm1(&ExactQuad::zero()) != ratio(33, 16) - &sqrt2 {
        return Err("H₋₁(0) ≠ 33/16 − √2".into());
    }
    for kx in -4..=4 {
        let x = ratio(kx, 4);
        for kp in -12..=12 {
            let p = ratio(kp, 4);
            let v = h.h(&x, &p);
            if v != h.h(&-&x, &p)
                || v != h.h(&x, &-&p)
                || v != h.h(&(&x + &ExactQuad::from_integer(2)), &p)
            {
                return Err(format!("symmetry fails at x = {x}, p = {p}"));
            }
        }
    }
    Ok("H₁(0), H₋₁(0), evenness, period 2".into())
}

fn interior(rng: &mut SplitMix64) -> Outcome {
    for _ in 0..5 {
        let l = disc(ratio(rng.gen_range(1..=100), 100))?;
        let sol = DiscountedSolution::new(&l, 8).map_err(fail)?;
        for _ in 0..5 {
            let mut k = rng.gen_range(-30..30);
            if k == 0 {
                k = 1;
            }
            let x = ratio(k, 31);
            let r = sol.interior_residual(&x).map_err(fail)?;
            if !r.is_zero() {
                return Err(format!(
                    "residual {} at x = {x}, λ = {}",
                    r.approx(12),
                    l.value()
                ));
            }
        }
    }
    Ok("25 points, residual exactly 0".into())
}

fn viscosity() -> Outcome {
    for l in [
        ratio(1, 4),
        ratio(1, 10),
        lambda_seq(5).map_err(fail)?,
        mu_seq(5).map_err(fail)?,
    ] {
        let n = TruncationRule::Auto.level(&l);
        let report = DiscountedSolution::new(&disc(l.clone())?, n)
            .map_err(fail)?
            .viscosity_checks();
        if !report.passed() {
            return Err(format!("fails at λ = {}", l.approx(6)));
        }
    }
    Ok("λ ∈ {1/4, 1/10, λ_5, μ_5}".into())
}

fn monte_carlo(seed: u64) -> Outcome {
    let acts = truncated_action_set(6).map_err(fail)?;
    let settings = [
        (
            StationaryP1::constant(ActionI::One, ActionI::One, &acts),
            StationaryP2 {
                a: acts[0],
                b: acts[0],
            },
            ratio(1, 2),
        ),
        (
            StationaryP1::constant(ActionI::Zero, ActionI::Zero, &acts),
            StationaryP2 {
                a: acts[1],
                b: acts[2],
            },
            ratio(1, 10),
        ),
        (
            threshold_strategy(&disc(ratio(1, 3))?),
            StationaryP2 {
                a: acts[1],
                b: acts[4],
            },
            ratio(1, 3),
        ),
    ];
    let mut devs = Vec::new();
    for (k, (y, z, l)) in settings.iter().enumerate() {
        let l = disc(l.clone())?;
        let est = simulate_mc(
            y,
            z,
            l.to_f64(),
            State::Plus,
            seed.wrapping_add(k as u64),
            20_000,
            1e-4,
        )
        .map_err(fail)?;
        let i = y.action(State::Plus, z.a).map_err(fail)?;
        let ip = y.action(State::Minus, z.b).map_err(fail)?;
        let exact = gamma_closed(i, ip, &l, &z.a.value(), &z.b.value())
            .map_err(fail)?
            .to_f64();
        let dev = (est.mean - exact).abs() / est.stderr;
        if dev > 3.0 {
            return Err(format!("{dev:.2}σ at λ = {}", l.value()));
        }
        devs.push(format!("{dev:.2}σ"));
    }
    Ok(devs.join(", "))
}

fn oscillation(jobs: usize) -> Outcome {
    let records = sequence_records(6, 6, false, jobs).map_err(fail)?;
    let get = |kind| {
        records
            .iter()
            .find(|r| r.seq == kind)
            .map(|r| r.w_plus.to_f64())
            .unwrap_or(f64::NAN)
    };
    let (wl, wm) = (get(SeqKind::Lambda), get(SeqKind::Mu));
    let target = std::f64::consts::FRAC_1_SQRT_2;
    if (wl - target).abs() > 0.02 || wm - wl < 0.04 {
        return Err(format!("w(λ_6) = {wl:.6}, w(μ_6) = {wm:.6}"));
    }
    Ok(format!("w(λ_6) = {wl:.6}, w(μ_6) = {wm:.6}"))
}

fn run_checks(args: &VerifyArgs) -> Vec<Check> {
    let mut rng = SplitMix64::seed_from_u64(args.seed);
    vec![
        Check {
            name: "value bounds",
            anchor: "w_λ(ω₋₁) ≤ w_λ(ω₁) ≤ w_λ(ω₋₁)+2",
            outcome: value_bounds(args.jobs),
        },
        Check {
            name: "shapley fixed point",
            anchor: "w_λ = Φ(λ, w_λ)",
            outcome: shapley_fixed_point(&mut rng, args.perturb),
        },
        Check {
            name: "closed forms",
            anchor: "γ^{i,i'}_λ(a,b) closed forms",
            outcome: closed_forms(&mut rng),
        },
        Check {
            name: "one-stage payoffs",
            anchor: "γ_1 = g",
            outcome: one_stage(),
        },
        Check {
            name: "monotonicity",
            anchor: "γ^{i,i'}_λ monotone in a and b",
            outcome: monotonicity(),
        },
        Check {
            name: "hamiltonian",
            anchor: "H(x,p) := |x| H₁(|p|) + (1−|x|) H₋₁(|p|)",
            outcome: hamiltonian(),
        },
        Check {
            name: "interior residual",
            anchor: "λu + H(x, Du) = 0",
            outcome: interior(&mut rng),
        },
        Check {
            name: "viscosity at kinks",
            anchor: "u_λ(x) = (1+λ)^{-1} w_{λ/(1+λ)}(x)",
            outcome: viscosity(),
        },
        Check {
            name: "monte carlo",
            anchor: "E[Σ λ(1−λ)^{m−1} g_m]",
            outcome: monte_carlo(args.seed),
        },
        Check {
            name: "oscillation",
            anchor: "(w_λ(ω₁)) does not have a limit when λ → 0",
            outcome: oscillation(args.jobs),
        },
    ]
}

fn render(checks: &[Check]) -> String {
    let width = |f: fn(&Check) -> &str| {
        checks
            .iter()
            .map(|c| f(c).chars().count())
            .max()
            .unwrap_or(0)
    };
    let (wn, wa) = (width(|c| c.name).max(5), width(|c| c.anchor).max(6));
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
    let mut out = format!(
        "{}  {}  status  detail\n",
        pad("check", wn),
        pad("anchor", wa)
    );
    for c in checks {
        let (status, detail) = match &c.outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        out.push_str(&format!(
            "{}  {}  {status}    {detail}\n",
            pad(c.name, wn),
            pad(c.anchor, wa)
        ));
    }
    let failed = checks.iter().filter(|c| c.outcome.is_err()).count();
    out.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    out
}

pub fn run(args: &VerifyArgs) -> Result<bool> {
    let checks = run_checks(args);
    let table = render(&checks);
    print!("{table}");
    std::io::stdout().flush()?;
    if let Some(path) = &args.out {
        std::fs::write(path, &table)?;
    }
    Ok(checks.iter().all(|c| c.outcome.is_ok()))
}
