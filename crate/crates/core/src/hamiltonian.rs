//! The Hamiltonian built from the game and the semi-explicit discounted
//! solution `u_λ`.
//!
//! For `|p| ≤ 2`
//!
//! ```text
//! H₁(p)  = −min_j max_i { g(ω₁,i,j)  − p·f(i,j) }
//! H₋₁(p) = −min_j max_i { g(ω₋₁,i,j) + p·f(i,j) }
//! ```
//!
//! with `f(i,j) = i(1−j) + (1−i)j`, and both extend linearly with slope 1
//! beyond `|p| = 2`. Then `H(x,p) = |x|H₁(|p|) + (1−|x|)H₋₁(|p|)` on
//! `[−1, 1]`, extended 2-periodically in `x`. The infinite set `J` is
//! replaced by the truncation `J_N`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{flip_prob, payoff_g, ActionI, Discount, State};
use crate::numfield::ExactQuad;
use crate::shapley::{stationary_value, truncated_action_set, TruncationRule};

/// Float evaluation interface used by the PDE solver.
pub trait FloatHamiltonian: Sync {
    fn eval(&self, x: f64, p: f64) -> f64;
}

/// Hamiltonian with `J` truncated to `J_N`.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    truncation: usize,
    /// `(g, f)` per state, per `j ∈ J_N`, per `i`.
    exact: [Vec<[(ExactQuad, ExactQuad); 2]>; 2],
    float: [Vec<[(f64, f64); 2]>; 2],
}

/// Reduces `x` modulo 2 into `[−1, 1)`.
pub fn reduce_period(x: &ExactQuad) -> ExactQuad {
    let half = (x + &ExactQuad::one()) * ExactQuad::from_ratio(1, 2);
    let k = ExactQuad::from_rational(num_rational::BigRational::from_integer(half.floor()));
    x - &(ExactQuad::from_integer(2) * k)
}

pub fn reduce_period_f64(x: f64) -> f64 {
    x - 2.0 * ((x + 1.0) / 2.0).floor()
}

impl Hamiltonian {
    pub fn new(truncation: usize) -> Result<Hamiltonian> {
        let actions = truncated_action_set(truncation)?;
        let mut exact: [Vec<[(ExactQuad, ExactQuad); 2]>; 2] = [Vec::new(), Vec::new()];
        let mut float: [Vec<[(f64, f64); 2]>; 2] = [Vec::new(), Vec::new()];
        for state in State::ALL {
            for j in &actions {
                let j = j.value();
                let mut row = Vec::with_capacity(2);
                for i in ActionI::ALL {
                    row.push((payoff_g(state, i, &j)?, flip_prob(state, i, &j)?));
                }
                let row: [(ExactQuad, ExactQuad); 2] = row.try_into().expect("two actions");
                float[state.index()].push(row.clone().map(|(g, f)| (g.to_f64(), f.to_f64())));
                exact[state.index()].push(row);
            }
        }
        Ok(Hamiltonian {
            truncation,
            exact,
            float,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `−min_j max_i { g(k,i,j) ∓ p·f }` on `|p| ≤ 2`; the sign is `−` in ω₁
    /// and `+` in ω₋₁.
    fn core_exact(&self, state: State, p: &ExactQuad) -> ExactQuad {
        let slope = match state {
            State::Plus => -p,
            State::Minus => p.clone(),
        };
        let mut min: Option<ExactQuad> = None;
        for row in &self.exact[state.index()] {
            let mut max: Option<ExactQuad> = None;
            for (g, f) in row {
                let v = g + &(&slope * f);
                if max.as_ref().is_none_or(|m| v > *m) {
                    max = Some(v);
                }
            }
            let max = max.expect("two actions");
            if min.as_ref().is_none_or(|m| max < *m) {
                min = Some(max);
            }
        }
        -min.expect("non-empty action set")
    }

    fn branch_exact(&self, state: State, p: &ExactQuad) -> ExactQuad {
        let two = ExactQuad::from_integer(2);
        if p.abs() <= two {
            self.core_exact(state, p)
        } else {
            let edge = if p.is_negative() { -&two } else { two.clone() };
            self.core_exact(state, &edge) + p.abs() - two
        }
    }

    pub fn h1(&self, p: &ExactQuad) -> ExactQuad {
        self.branch_exact(State::Plus, p)
    }

    pub fn hm1(&self, p: &ExactQuad) -> ExactQuad {
        self.branch_exact(State::Minus, p)
    }

    pub fn h(&self, x: &ExactQuad, p: &ExactQuad) -> ExactQuad {
        let weight = reduce_period(x).abs();
        let p = p.abs();
        &weight * self.h1(&p) + (ExactQuad::one() - &weight) * self.hm1(&p)
    }

    fn core_f64(&self, state: State, p: f64) -> f64 {
        let slope = match state {
            State::Plus => -p,
            State::Minus => p,
        };
        let min = self.float[state.index()]
            .iter()
            .map(|row| (row[0].0 + slope * row[0].1).max(row[1].0 + slope * row[1].1))
            .fold(f64::INFINITY, f64::min);
        -min
    }

    fn branch_f64(&self, state: State, p: f64) -> f64 {
        if p.abs() <= 2.0 {
            self.core_f64(state, p)
        } else {
            self.core_f64(state, 2.0 * p.signum()) + p.abs() - 2.0
        }
    }

    pub fn h1_f64(&self, p: f64) -> f64 {
        self.branch_f64(State::Plus, p)
    }

    pub fn hm1_f64(&self, p: f64) -> f64 {
        self.branch_f64(State::Minus, p)
    }

    pub fn h_f64(&self, x: f64, p: f64) -> f64 {
        let weight = reduce_period_f64(x).abs();
        let p = p.abs();
        weight * self.h1_f64(p) + (1.0 - weight) * self.hm1_f64(p)
    }
}

impl FloatHamiltonian for Hamiltonian {
    fn eval(&self, x: f64, p: f64) -> f64 {
        self.h_f64(x, p)
    }
}

/// `u_λ(ω₁)` and `u_λ(ω₋₁)` where `u_λ = (1+λ)^{−1} w_{λ/(1+λ)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPair {
    pub u_plus: ExactQuad,
    pub u_minus: ExactQuad,
    pub lambda: ExactQuad,
}

impl UPair {
    /// `u_λ(ω₁) − u_λ(ω₋₁)`, the slope of the interpolant.
    pub fn gap(&self) -> ExactQuad {
        &self.u_plus - &self.u_minus
    }
}

pub fn u_pair(lambda: &Discount, n: usize) -> Result<UPair> {
    let one_plus = ExactQuad::one() + lambda.value();
    let inner = Discount::new(lambda.value().checked_div(&one_plus)?)?;
    let w = stationary_value(&inner, n)?.values;
    let u = UPair {
        u_plus: w.w_plus.checked_div(&one_plus)?,
        u_minus: w.w_minus.checked_div(&one_plus)?,
        lambda: lambda.value().clone(),
    };
    let gap = u.gap();
    if gap.is_negative() || gap > ExactQuad::from_integer(2) {
        return Err(Error::Invariant(format!("u gap {gap} outside [0, 2]")));
    }
    Ok(u)
}

/// `|x|·u(ω₁) + (1−|x|)·u(ω₋₁)` after reducing `x` into `[−1, 1)`.
pub fn u_interp(x: &ExactQuad, u: &UPair) -> ExactQuad {
    let weight = reduce_period(x).abs();
    &weight * &u.u_plus + (ExactQuad::one() - &weight) * &u.u_minus
}

pub fn u_interp_f64(x: f64, u_plus: f64, u_minus: f64) -> f64 {
    let weight = reduce_period_f64(x).abs();
    weight * u_plus + (1.0 - weight) * u_minus
}

/// `λ u(ω_r) − min_j max_i { g(ω_r,i,j) + f·(u(ω₋ᵣ) − u(ω_r)) }` per state,
/// computed straight from the game data.
pub fn shapley_u_residual(u: &UPair, n: usize) -> Result<(ExactQuad, ExactQuad)> {
    let actions = truncated_action_set(n)?;
    let value = |s: State| match s {
        State::Plus => &u.u_plus,
        State::Minus => &u.u_minus,
    };
    let mut out = [ExactQuad::zero(), ExactQuad::zero()];
    for state in State::ALL {
        let diff = value(state.flip()) - value(state);
        let mut min: Option<ExactQuad> = None;
        for j in &actions {
            let j = j.value();
            let mut max: Option<ExactQuad> = None;
            for i in ActionI::ALL {
                let v = payoff_g(state, i, &j)? + flip_prob(state, i, &j)? * &diff;
                if max.as_ref().is_none_or(|m| v > *m) {
                    max = Some(v);
                }
            }
            let max = max.expect("two actions");
            if min.as_ref().is_none_or(|m| max < *m) {
                min = Some(max);
            }
        }
        out[state.index()] = &u.lambda * value(state) - min.expect("non-empty");
    }
    let [plus, minus] = out;
    Ok((plus, minus))
}

/// The interpolated `u_λ` together with the Hamiltonian at the same
/// truncation.
#[derive(Clone, Debug)]
pub struct DiscountedSolution {
    pub u: UPair,
    pub ham: Hamiltonian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViscositySample {
    /// 0 (local minimum of `u`) or 1 (local maximum).
    pub x: i64,
    pub p: ExactQuad,
    /// `λ u(x) + H(x, p)`.
    pub value: ExactQuad,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViscosityReport {
    pub x0_ok: bool,
    pub x1_ok: bool,
    pub samples: Vec<ViscositySample>,
}

impl ViscosityReport {
    pub fn passed(&self) -> bool {
        self.x0_ok && self.x1_ok
    }
}

impl DiscountedSolution {
    pub fn new(lambda: &Discount, n: usize) -> Result<DiscountedSolution> {
        Ok(DiscountedSolution {
            u: u_pair(lambda, n)?,
            ham: Hamiltonian::new(n)?,
        })
    }

    pub fn lambda(&self) -> &ExactQuad {
        &self.u.lambda
    }

    /// `λ u(x) + H(x, Du(x))` at a point of differentiability.
    pub fn interior_residual(&self, x: &ExactQuad) -> Result<ExactQuad> {
        let reduced = reduce_period(x);
        if reduced.is_zero() || reduced == ExactQuad::from_integer(-1) {
            return Err(Error::KinkPoint(x.to_string()));
        }
        Ok(self.lambda() * &u_interp(x, &self.u) + self.ham.h(x, &self.u.gap()))
    }

    /// Supersolution test on `D⁻u(0)` and subsolution test on `D⁺u(1)`, both
    /// equal to `[−gap, gap]`, sampled at the endpoints and the midpoint.
    /// Endpoint sampling suffices because `H₁(|·|)` is nondecreasing and
    /// `H₋₁(|·|)` nonincreasing on `[0, 2]`.
    pub fn viscosity_checks(&self) -> ViscosityReport {
        let gap = self.u.gap();
        let probes = [-gap.clone(), ExactQuad::zero(), gap];
        let mut samples = Vec::new();
        for (x, super_test) in [(0, true), (1, false)] {
            let xq = ExactQuad::from_integer(x);
            let lu = self.lambda() * &u_interp(&xq, &self.u);
            for p in &probes {
                let value = &lu + &self.ham.h(&xq, p);
                let ok = if super_test {
                    !value.is_negative()
                } else {
                    !value.is_positive()
                };
                samples.push(ViscositySample {
                    x,
                    p: p.clone(),
                    value,
                    ok,
                });
            }
        }
        ViscosityReport {
            x0_ok: samples.iter().filter(|s| s.x == 0).all(|s| s.ok),
            x1_ok: samples.iter().filter(|s| s.x == 1).all(|s| s.ok),
            samples,
        }
    }
}

pub fn interior_residual(x: &ExactQuad, lambda: &Discount, n: usize) -> Result<ExactQuad> {
    DiscountedSolution::new(lambda, n)?.interior_residual(x)
}

pub fn viscosity_checks(lambda: &Discount, n: usize) -> Result<ViscosityReport> {
    Ok(DiscountedSolution::new(lambda, n)?.viscosity_checks())
}

/// `(λ, −λ·u_λ(1))` for each discount.
pub fn critical_value_probe(
    lambdas: &[ExactQuad],
    rule: TruncationRule,
) -> Result<Vec<(ExactQuad, ExactQuad)>> {
    lambdas
        .iter()
        .map(|lambda| {
            let disc = Discount::new(lambda.clone())?;
            let u = u_pair(&disc, rule.level(lambda))?;
            let probe = -(lambda * &u_interp(&ExactQuad::one(), &u));
            Ok((lambda.clone(), probe))
        })
        .collect()
}
