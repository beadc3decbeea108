//! The two-state stochastic game: payoffs, transitions, stationary
//! strategies and the discounted payoff of constant strategy pairs.
//!
//! Player 2 moves first in every stage by picking `j ∈ J`, a probability of
//! playing the pure action 1. Player 1 sees `j` and answers with a pure
//! action `i ∈ {0, 1}`. In state ω₁ the stage payoff is `ij + 2(1−i)(1−j)`;
//! ω₋₁ pays the negative. The state flips with probability
//! `i(1−j) + (1−i)j` in both states.

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU32;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::numfield::ExactQuad;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    /// ω₁
    Plus,
    /// ω₋₁
    Minus,
}

impl State {
    pub const ALL: [State; 2] = [State::Plus, State::Minus];

    pub fn flip(self) -> State {
        match self {
            State::Plus => State::Minus,
            State::Minus => State::Plus,
        }
    }

    pub fn index(self) -> usize {
        match self {
            State::Plus => 0,
            State::Minus => 1,
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Plus => f.write_str("omega_plus"),
            State::Minus => f.write_str("omega_minus"),
        }
    }
}

/// Pure action of Player 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionI {
    Zero,
    One,
}

impl ActionI {
    pub const ALL: [ActionI; 2] = [ActionI::Zero, ActionI::One];

    pub fn bit(self) -> u8 {
        match self {
            ActionI::Zero => 0,
            ActionI::One => 1,
        }
    }

    pub fn value(self) -> ExactQuad {
        ExactQuad::from_integer(self.bit().into())
    }
}

/// An element of Player 2's action set `J = {2−√2+2^{−2n} : n ≥ 1} ∪ {2−√2}`.
///
/// The derived order lists indexed elements by increasing `n` and the
/// accumulation point last, which is the tie-breaking order used by the
/// solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionJ {
    Index(NonZeroU32),
    Limit,
}

impl ActionJ {
    pub fn index(n: u32) -> Result<ActionJ> {
        NonZeroU32::new(n)
            .map(ActionJ::Index)
            .ok_or(Error::InvalidTruncation)
    }

    /// The accumulation point `2 − √2`.
    pub fn limit_value() -> ExactQuad {
        ExactQuad::from_parts((2, 1), (-1, 1))
    }

    pub fn value(&self) -> ExactQuad {
        match self {
            ActionJ::Index(n) => {
                let exp = i32::try_from(n.get()).expect("action index too large");
                ActionJ::limit_value() + ExactQuad::pow2(-2 * exp)
            }
            ActionJ::Limit => ActionJ::limit_value(),
        }
    }

    pub fn value_f64(&self) -> f64 {
        self.value().to_f64()
    }
}

impl fmt::Display for ActionJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionJ::Index(n) => write!(f, "j{n}"),
            ActionJ::Limit => f.write_str("jinf"),
        }
    }
}

/// Player 2 plays `a` in ω₁ and `b` in ω₋₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StationaryP2 {
    pub a: ActionJ,
    pub b: ActionJ,
}

impl StationaryP2 {
    pub fn action(&self, state: State) -> ActionJ {
        match state {
            State::Plus => self.a,
            State::Minus => self.b,
        }
    }
}

/// Stationary strategy of Player 1: the answer depends on the current state
/// and on the announced `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StationaryP1 {
    Table(BTreeMap<(State, ActionJ), ActionI>),
    /// In ω₁ play 0 iff `j ≤ cutoff`; in ω₋₁ play 1 iff `j ≤ cutoff`.
    Threshold {
        cutoff: ExactQuad,
    },
}

impl StationaryP1 {
    /// Plays `in_plus` in ω₁ and `in_minus` in ω₋₁ regardless of `j`.
    pub fn constant(in_plus: ActionI, in_minus: ActionI, actions: &[ActionJ]) -> StationaryP1 {
        let table = actions
            .iter()
            .flat_map(|&j| [((State::Plus, j), in_plus), ((State::Minus, j), in_minus)])
            .collect();
        StationaryP1::Table(table)
    }

    pub fn action(&self, state: State, j: ActionJ) -> Result<ActionI> {
        match self {
            StationaryP1::Table(table) => table
                .get(&(state, j))
                .copied()
                .ok_or_else(|| Error::StrategyNotTotal(format!("({state}, {j})"))),
            StationaryP1::Threshold { cutoff } => {
                let low = j.value() <= *cutoff;
                Ok(match (state, low) {
                    (State::Plus, true) | (State::Minus, false) => ActionI::Zero,
                    (State::Plus, false) | (State::Minus, true) => ActionI::One,
                })
            }
        }
    }

    /// Decision table of this strategy restricted to `actions`.
    pub fn tabulate(&self, actions: &[ActionJ]) -> Result<StationaryP1> {
        let mut table = BTreeMap::new();
        for &j in actions {
            for state in State::ALL {
                table.insert((state, j), self.action(state, j)?);
            }
        }
        Ok(StationaryP1::Table(table))
    }
}

/// Discount factor `λ ∈ (0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discount(ExactQuad);

impl Discount {
    pub fn new(lambda: ExactQuad) -> Result<Discount> {
        if lambda.is_positive() && lambda <= ExactQuad::one() {
            Ok(Discount(lambda))
        } else {
            Err(Error::InvalidDiscount(lambda.to_string()))
        }
    }

    pub fn value(&self) -> &ExactQuad {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn into_inner(self) -> ExactQuad {
        self.0
    }
}

fn check_probability(j: &ExactQuad) -> Result<()> {
    if j.is_negative() || *j > ExactQuad::one() {
        Err(Error::InvalidProbability(j.to_string()))
    } else {
        Ok(())
    }
}

fn check_open_probability(j: &ExactQuad) -> Result<()> {
    if j.is_positive() && *j < ExactQuad::one() {
        Ok(())
    } else {
        Err(Error::InvalidProbability(j.to_string()))
    }
}

/// Expected stage payoff `g(k, i, j)` to Player 1.
pub fn payoff_g(k: State, i: ActionI, j: &ExactQuad) -> Result<ExactQuad> {
    check_probability(j)?;
    let one = ExactQuad::one();
    let i = i.value();
    let g = &i * j + ExactQuad::from_integer(2) * (&one - &i) * (&one - j);
    Ok(match k {
        State::Plus => g,
        State::Minus => -g,
    })
}

/// Probability of leaving the current state, `i(1−j) + (1−i)j`.
pub fn flip_prob(_k: State, i: ActionI, j: &ExactQuad) -> Result<ExactQuad> {
    check_probability(j)?;
    let one = ExactQuad::one();
    let i = i.value();
    Ok(&i * (&one - j) + (&one - &i) * j)
}

/// Discounted payoff from ω₁ when Player 1 plays the constant action `i` in
/// ω₁ and `i_prime` in ω₋₁, and Player 2 plays `a` in ω₁ and `b` in ω₋₁.
pub fn gamma_closed(
    i: ActionI,
    i_prime: ActionI,
    lambda: &Discount,
    a: &ExactQuad,
    b: &ExactQuad,
) -> Result<ExactQuad> {
    check_open_probability(a)?;
    check_open_probability(b)?;
    let l = lambda.value();
    let two = ExactQuad::from_integer(2);
    let al = a * l;
    let bl = b * l;
    let ab = a * b;
    let (num, den) = match (i, i_prime) {
        (ActionI::Zero, ActionI::Zero) => {
            (-(&two * (a - b - l + &bl)), l * (a + b + l - &al - &bl))
        }
        (ActionI::One, ActionI::One) => (-(a - b + &bl), l * (a + b + l - &al - &bl - &two)),
        (ActionI::One, ActionI::Zero) => (
            &two * a + &two * b + &two * l - &ab - &al - &two * &bl + &ab * l - &two,
            l * (b - a + &al - &bl + ExactQuad::one()),
        ),
        (ActionI::Zero, ActionI::One) => (
            -(&two * a + &two * b - &ab - &two * &bl + &ab * l - &two),
            l * (a - b - &al + &bl + ExactQuad::one()),
        ),
    };
    num.checked_div(&den)
        .map_err(|_| Error::ZeroDenominator(i.bit(), i_prime.bit()))
}

/// Independent route to the same payoffs: solve the two-state recursion
///
/// ```text
/// γ  = g(ω₁, i, a)  + (1−λ)[(1−f₁)γ + f₁γ̃],   f₁ = flip(i, a)
/// γ̃ = g(ω₋₁, i', b) + (1−λ)[(1−f₂)γ̃ + f₂γ],   f₂ = flip(i', b)
/// ```
///
/// by Cramer's rule. Returns `(γ, γ̃)`: the payoff from ω₁ and from ω₋₁.
pub fn gamma_linear_oracle(
    i: ActionI,
    i_prime: ActionI,
    lambda: &Discount,
    a: &ExactQuad,
    b: &ExactQuad,
) -> Result<(ExactQuad, ExactQuad)> {
    check_open_probability(a)?;
    check_open_probability(b)?;
    let one = ExactQuad::one();
    let keep = &one - lambda.value();
    let (g1, f1) = (payoff_g(State::Plus, i, a)?, flip_prob(State::Plus, i, a)?);
    let (g2, f2) = (
        payoff_g(State::Minus, i_prime, b)?,
        flip_prob(State::Minus, i_prime, b)?,
    );

    let m11 = &one - &keep * (&one - &f1);
    let m12 = -(&keep * &f1);
    let m21 = -(&keep * &f2);
    let m22 = &one - &keep * (&one - &f2);
    let det = &m11 * &m22 - &m12 * &m21;
    if det.is_zero() {
        return Err(Error::SingularSystem);
    }
    let from_plus = (&g1 * &m22 - &m12 * &g2).checked_div(&det)?;
    let from_minus = (&m11 * &g2 - &m21 * &g1).checked_div(&det)?;
    Ok((from_plus, from_minus))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// Stages simulated per episode.
    pub horizon: usize,
    pub episodes: usize,
}

pub const MC_MIN_DISCOUNT: f64 = 0.05;

/// Smallest horizon `M` with `(1−λ)^M · 2/λ ≤ ε`.
pub fn mc_horizon(lambda: f64, epsilon: f64) -> usize {
    let keep = 1.0 - lambda;
    let mut tail = keep * 2.0 / lambda;
    let mut horizon = 1;
    while tail > epsilon {
        tail *= keep;
        horizon += 1;
    }
    horizon
}

/// Monte Carlo estimate of the discounted payoff from `k1` under `(y, z)`.
///
/// Player 2's announced `j` is realized as a pure action drawn from
/// Bernoulli(j); the stage payoff and the (deterministic) transition then
/// follow the pure-action tables. Uses SplitMix64 seeded with `seed`, so the
/// output is a pure function of the inputs.
pub fn simulate_mc(
    y: &StationaryP1,
    z: &StationaryP2,
    lambda: f64,
    k1: State,
    seed: u64,
    episodes: usize,
    epsilon: f64,
) -> Result<McEstimate> {
    if !(MC_MIN_DISCOUNT..=1.0).contains(&lambda) {
        return Err(Error::DiscountTooSmallForMonteCarlo(lambda));
    }
    if episodes == 0 {
        return Err(Error::InvalidParameter(
            "episodes must be at least 1".into(),
        ));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let horizon = mc_horizon(lambda, epsilon);

    // Per-state (Player 1 action, probability that Player 2 realizes 1).
    let mut plan = [(ActionI::Zero, 0.0); 2];
    for state in State::ALL {
        let j = z.action(state);
        plan[state.index()] = (y.action(state, j)?, j.value_f64());
    }

    let mut rng = SplitMix64::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0_f64, 0.0_f64);
    for _ in 0..episodes {
        let mut state = k1;
        let mut weight = 1.0;
        let mut total = 0.0;
        for _ in 0..horizon {
            let (i, p) = plan[state.index()];
            let j_one = rng.gen::<f64>() < p;
            let stage = match (i, j_one) {
                (ActionI::One, true) => 1.0,
                (ActionI::Zero, false) => 2.0,
                _ => 0.0,
            };
            total += weight * if state == State::Plus { stage } else { -stage };
            weight *= 1.0 - lambda;
            if (i == ActionI::One) != j_one {
                state = state.flip();
            }
        }
        sum += total;
        sum_sq += total * total;
    }
    let n = episodes as f64;
    let mean = sum / n;
    let stderr = if episodes > 1 {
        let var = (sum_sq - n * mean * mean) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        stderr,
        horizon,
        episodes,
    })
}
