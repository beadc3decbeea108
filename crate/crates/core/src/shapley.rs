//! Discounted values of the game.
//!
//! Two independent solvers are provided. [`stationary_value`] is exact: it
//! enumerates every stationary pure strategy of Player 2 over a finite
//! truncation `J_N` and, for each, the four constant replies of Player 1
//! (for a fixed stationary `z` only `j = z(k)` is ever announced, so these
//! exhaust Player 1's stationary replies). [`value_iteration`] iterates the
//! Shapley operator in binary64.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{
    flip_prob, gamma_closed, gamma_linear_oracle, payoff_g, ActionI, ActionJ, Discount, State,
    StationaryP1, StationaryP2,
};
use crate::numfield::ExactQuad;

/// `(w_λ(ω₁), w_λ(ω₋₁))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuePair {
    pub w_plus: ExactQuad,
    pub w_minus: ExactQuad,
}

impl ValuePair {
    pub fn get(&self, state: State) -> &ExactQuad {
        match state {
            State::Plus => &self.w_plus,
            State::Minus => &self.w_minus,
        }
    }

    /// `w(ω₋₁) ≤ w(ω₁) ≤ w(ω₋₁) + 2`, checked exactly.
    pub fn satisfies_bounds(&self) -> bool {
        self.w_minus <= self.w_plus && self.w_plus <= &self.w_minus + &ExactQuad::from_integer(2)
    }
}

/// `{j(1), …, j(N)} ∪ {2−√2}` in solver order.
pub fn truncated_action_set(n: usize) -> Result<Vec<ActionJ>> {
    if n == 0 {
        return Err(Error::InvalidTruncation);
    }
    let mut out = (1..=n as u32)
        .map(ActionJ::index)
        .collect::<Result<Vec<_>>>()?;
    out.push(ActionJ::Limit);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestResponse {
    pub value: ExactQuad,
    pub argmax: (ActionI, ActionI),
}

const CONSTANT_REPLIES: [(ActionI, ActionI); 4] = [
    (ActionI::Zero, ActionI::Zero),
    (ActionI::Zero, ActionI::One),
    (ActionI::One, ActionI::Zero),
    (ActionI::One, ActionI::One),
];

/// Player 1's best constant reply to the stationary `(a, b)` of Player 2,
/// measured from `start`. Ties go to the lexicographically smallest pair.
pub fn best_response_value(
    lambda: &Discount,
    a: &ExactQuad,
    b: &ExactQuad,
    start: State,
) -> Result<BestResponse> {
    let mut best: Option<BestResponse> = None;
    for (i, ip) in CONSTANT_REPLIES {
        let value = match start {
            State::Plus => gamma_closed(i, ip, lambda, a, b)?,
            State::Minus => gamma_linear_oracle(i, ip, lambda, a, b)?.1,
        };
        if best.as_ref().is_none_or(|br| value > br.value) {
            best = Some(BestResponse {
                value,
                argmax: (i, ip),
            });
        }
    }
    Ok(best.expect("four candidate replies"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationarySolution {
    pub values: ValuePair,
    /// Minimizing strategy of Player 2 for each starting state, indexed by
    /// [`State::index`].
    pub minimizers: [StationaryP2; 2],
}

/// Exact discounted value over `J_N` for both starting states.
pub fn stationary_value(lambda: &Discount, n: usize) -> Result<StationarySolution> {
    let actions = truncated_action_set(n)?;
    let values: Vec<ExactQuad> = actions.iter().map(ActionJ::value).collect();

    let solve = |start: State| -> Result<(ExactQuad, StationaryP2)> {
        let mut best: Option<(ExactQuad, StationaryP2)> = None;
        for (ai, a) in actions.iter().zip(&values) {
            for (bi, b) in actions.iter().zip(&values) {
                let br = best_response_value(lambda, a, b, start)?;
                if best.as_ref().is_none_or(|(v, _)| br.value < *v) {
                    best = Some((br.value, StationaryP2 { a: *ai, b: *bi }));
                }
            }
        }
        Ok(best.expect("non-empty action set"))
    };
    let (w_plus, z_plus) = solve(State::Plus)?;
    let (w_minus, z_minus) = solve(State::Minus)?;

    let values = ValuePair { w_plus, w_minus };
    if !values.satisfies_bounds() {
        return Err(Error::Invariant(format!(
            "value bounds fail at λ = {}: {:?}",
            lambda.value(),
            values
        )));
    }
    Ok(StationarySolution {
        values,
        minimizers: [z_plus, z_minus],
    })
}

/// One application of the Shapley operator over `J_N`, exactly:
/// `T(w)(ω_r) = min_j max_i { g(ω_r,i,j) + (1−λ)[(1−f)w(ω_r) + f·w(ω₋ᵣ)] }`.
pub fn shapley_operator(w: &ValuePair, lambda: &Discount, n: usize) -> Result<ValuePair> {
    let actions = truncated_action_set(n)?;
    let keep = ExactQuad::one() - lambda.value();
    let mut out = [ExactQuad::zero(), ExactQuad::zero()];
    for state in State::ALL {
        let (here, there) = (w.get(state), w.get(state.flip()));
        let mut min: Option<ExactQuad> = None;
        for j in &actions {
            let j = j.value();
            let mut max: Option<ExactQuad> = None;
            for i in ActionI::ALL {
                let f = flip_prob(state, i, &j)?;
                let cont = (ExactQuad::one() - &f) * here + &f * there;
                let v = payoff_g(state, i, &j)? + &keep * cont;
                if max.as_ref().is_none_or(|m| v > *m) {
                    max = Some(v);
                }
            }
            let max = max.expect("two actions");
            if min.as_ref().is_none_or(|m| max < *m) {
                min = Some(max);
            }
        }
        out[state.index()] = min.expect("non-empty action set");
    }
    let [w_plus, w_minus] = out;
    Ok(ValuePair { w_plus, w_minus })
}

/// `T(w) − w` per state, exactly.
pub fn shapley_residual(
    w: &ValuePair,
    lambda: &Discount,
    n: usize,
) -> Result<(ExactQuad, ExactQuad)> {
    let t = shapley_operator(w, lambda, n)?;
    Ok((t.w_plus - &w.w_plus, t.w_minus - &w.w_minus))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValueIteration {
    pub w_plus: f64,
    pub w_minus: f64,
    pub iterations: usize,
}

/// A priori iteration count `⌈log(tol·λ/4) / log(1−λ)⌉` (1 when `λ = 1`).
pub fn value_iteration_bound(lambda: f64, tol: f64) -> usize {
    if lambda >= 1.0 {
        return 1;
    }
    ((tol * lambda / 4.0).ln() / (1.0 - lambda).ln())
        .ceil()
        .max(1.0) as usize
}

/// Iterates the Shapley operator in binary64 from `w = 0`.
///
/// Stops once `(1−λ)·‖T(w) − w‖∞ ≤ tol·λ`, which bounds the distance of the
/// returned iterate to the fixed point by `tol`.
pub fn value_iteration(lambda: f64, n: usize, tol: f64) -> Result<ValueIteration> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidDiscount(lambda.to_string()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let actions = truncated_action_set(n)?;
    let keep = 1.0 - lambda;

    // (payoff, flip) per state, j, i
    let mut table: [Vec<[(f64, f64); 2]>; 2] = [Vec::new(), Vec::new()];
    for state in State::ALL {
        for j in &actions {
            let j = j.value();
            let mut row = [(0.0, 0.0); 2];
            for i in ActionI::ALL {
                row[i.bit() as usize] = (
                    payoff_g(state, i, &j)?.to_f64(),
                    flip_prob(state, i, &j)?.to_f64(),
                );
            }
            table[state.index()].push(row);
        }
    }

    let limit = value_iteration_bound(lambda, tol) + 16;
    let mut w = [0.0_f64; 2];
    for iteration in 1..=limit {
        let mut next = [0.0_f64; 2];
        for state in State::ALL {
            let (here, there) = (w[state.index()], w[state.flip().index()]);
            next[state.index()] = table[state.index()]
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&(g, f)| g + keep * ((1.0 - f) * here + f * there))
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
        }
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("value iteration"));
        }
        let change = (next[0] - w[0]).abs().max((next[1] - w[1]).abs());
        w = next;
        if keep * change <= tol * lambda {
            return Ok(ValueIteration {
                w_plus: w[0],
                w_minus: w[1],
                iterations: iteration,
            });
        }
    }
    Err(Error::MaxIterations {
        iterations: limit,
        last_update: f64::NAN,
    })
}

/// `1 / (3/4 − 1/√2) = 12 + 8√2`.
fn inverse_gap() -> ExactQuad {
    ExactQuad::from_parts((12, 1), (8, 1))
}

/// `3/4 − 1/√2`, the slope of [`p_star`].
pub fn p_star_slope() -> ExactQuad {
    ExactQuad::from_parts((3, 4), (-1, 2))
}

fn sequence_value(n: u32, extra_halvings: i32) -> Result<ExactQuad> {
    if n < 3 {
        return Err(Error::SequenceIndex(n));
    }
    let exp = i32::try_from(n).map_err(|_| Error::SequenceIndex(n))?;
    Ok(inverse_gap() * ExactQuad::pow2(-2 * exp - extra_halvings))
}

/// `λ_n = 2^{−2n} (3/4 − 1/√2)^{−1}`, defined for `n ≥ 3`.
pub fn lambda_seq(n: u32) -> Result<ExactQuad> {
    sequence_value(n, 0)
}

/// `μ_n = λ_n / 2`, defined for `n ≥ 3`.
pub fn mu_seq(n: u32) -> Result<ExactQuad> {
    sequence_value(n, 1)
}

/// `p*(λ) = 2 − √2 + (3/4 − 1/√2) λ`. Accepts any `λ`, including 0.
pub fn p_star(lambda: &ExactQuad) -> ExactQuad {
    ActionJ::limit_value() + p_star_slope() * lambda
}

/// Exact distance from `x` to the (infinite) action set `J`.
pub fn distance_to_action_set(x: &ExactQuad) -> ExactQuad {
    let offset = x - &ActionJ::limit_value();
    let mut best = offset.abs();
    if !offset.is_positive() {
        return best;
    }
    // Neighbors of `offset` among the points 4^{-k}; the float estimate of k
    // is off by at most one.
    let est = (-offset.to_f64().log2() / 2.0).floor();
    let est = if est.is_finite() { est as i64 } else { 1 };
    for k in (est - 1).max(1)..=(est + 2).max(1) {
        let Ok(k) = u32::try_from(k) else { continue };
        let Ok(j) = ActionJ::index(k) else { continue };
        let d = (x - &j.value()).abs();
        if d < best {
            best = d;
        }
    }
    best
}

/// In ω₁ play 0 iff `j ≤ p*(λ)`; in ω₋₁ play 1 iff `j ≤ p*(λ)`.
pub fn threshold_strategy(lambda: &Discount) -> StationaryP1 {
    StationaryP1::Threshold {
        cutoff: p_star(lambda.value()),
    }
}

/// What `y` guarantees from ω₁: the minimum over `(a, b) ∈ J_N²` of the
/// discounted payoff when Player 1 answers with `y`.
pub fn guarantee(y: &StationaryP1, lambda: &Discount, n: usize) -> Result<ExactQuad> {
    let actions = truncated_action_set(n)?;
    let mut best: Option<ExactQuad> = None;
    for a in &actions {
        let i = y.action(State::Plus, *a)?;
        for b in &actions {
            let ip = y.action(State::Minus, *b)?;
            let v = gamma_closed(i, ip, lambda, &a.value(), &b.value())?;
            if best.as_ref().is_none_or(|m| v < *m) {
                best = Some(v);
            }
        }
    }
    Ok(best.expect("non-empty action set"))
}

/// How the truncation level `N` is chosen for a discount.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationRule {
    Fixed(usize),
    /// `N = 10 + min{k ≥ 1 : λ_k ≤ λ}`, which is `n + 10` at `λ = λ_n`.
    Auto,
}

impl TruncationRule {
    pub fn level(&self, lambda: &ExactQuad) -> usize {
        match *self {
            TruncationRule::Fixed(n) => n,
            TruncationRule::Auto => {
                let mut k = 1;
                while inverse_gap() * ExactQuad::pow2(-2 * k) > *lambda {
                    k += 1;
                }
                k as usize + 10
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqKind {
    Lambda,
    Mu,
    Custom,
}

impl SeqKind {
    pub fn label(self) -> &'static str {
        match self {
            SeqKind::Lambda => "lambda",
            SeqKind::Mu => "mu",
            SeqKind::Custom => "custom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Exact,
    ValueIteration,
}

impl SolverKind {
    pub fn label(self) -> &'static str {
        match self {
            SolverKind::Exact => "exact",
            SolverKind::ValueIteration => "value_iteration",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceRecord {
    pub seq: SeqKind,
    pub n: Option<u32>,
    pub lambda: ExactQuad,
    pub w_plus: ExactQuad,
    pub w_minus: ExactQuad,
    pub truncation: usize,
    pub solver: SolverKind,
    /// Largest change of either value between truncation `N` and `N + 2`.
    pub stability_gap: Option<ExactQuad>,
    /// Iterations used, for value-iteration records.
    pub iterations: Option<usize>,
}

fn exact_record(
    seq: SeqKind,
    n: Option<u32>,
    lambda: ExactQuad,
    truncation: usize,
    stability: bool,
) -> Result<SequenceRecord> {
    let disc = Discount::new(lambda)?;
    let sol = stationary_value(&disc, truncation)?;
    let stability_gap = if stability {
        let wider = stationary_value(&disc, truncation + 2)?;
        let dp = (&wider.values.w_plus - &sol.values.w_plus).abs();
        let dm = (&wider.values.w_minus - &sol.values.w_minus).abs();
        Some(std::cmp::max(dp, dm))
    } else {
        None
    };
    Ok(SequenceRecord {
        seq,
        n,
        lambda: disc.into_inner(),
        w_plus: sol.values.w_plus,
        w_minus: sol.values.w_minus,
        truncation,
        solver: SolverKind::Exact,
        stability_gap,
        iterations: None,
    })
}

fn run_jobs<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

/// Exact values along `λ_n` and `μ_n` for `n_min ≤ n ≤ n_max`, with
/// truncation `N = n + 10`. Records alternate `λ_n`, `μ_n` by increasing `n`.
pub fn sequence_records(
    n_min: u32,
    n_max: u32,
    stability: bool,
    jobs: usize,
) -> Result<Vec<SequenceRecord>> {
    if n_min < 3 {
        return Err(Error::SequenceIndex(n_min));
    }
    if n_max < n_min {
        return Err(Error::InvalidParameter(format!(
            "empty index range {n_min}..={n_max}"
        )));
    }
    let mut items = Vec::new();
    for n in n_min..=n_max {
        items.push((SeqKind::Lambda, n, lambda_seq(n)?));
        items.push((SeqKind::Mu, n, mu_seq(n)?));
    }
    run_jobs(&items, jobs, |(kind, n, lambda)| {
        exact_record(*kind, Some(*n), lambda.clone(), *n as usize + 10, stability)
    })
    .into_iter()
    .collect()
}

/// Solves every discount in `lambdas`, in input order. With `vi_tol` set, each
/// exact record is followed by a value-iteration record for the same `λ`.
pub fn sweep(
    lambdas: &[ExactQuad],
    rule: TruncationRule,
    vi_tol: Option<f64>,
    stability: bool,
    jobs: usize,
) -> Vec<Result<SequenceRecord>> {
    let per_lambda = run_jobs(lambdas, jobs, |lambda| {
        let truncation = rule.level(lambda);
        let mut out = vec![exact_record(
            SeqKind::Custom,
            None,
            lambda.clone(),
            truncation,
            stability,
        )];
        if let Some(tol) = vi_tol {
            let vi = value_iteration(lambda.to_f64(), truncation, tol).and_then(|vi| {
                Ok(SequenceRecord {
                    seq: SeqKind::Custom,
                    n: None,
                    lambda: lambda.clone(),
                    w_plus: ExactQuad::from_f64(vi.w_plus)?,
                    w_minus: ExactQuad::from_f64(vi.w_minus)?,
                    truncation,
                    solver: SolverKind::ValueIteration,
                    stability_gap: None,
                    iterations: Some(vi.iterations),
                })
            });
            out.push(vi);
        }
        out
    });
    per_lambda.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactQuad {
        s.parse().unwrap()
    }

    fn disc(s: &str) -> Discount {
        Discount::new(q(s)).unwrap()
    }

    #[test]
    fn truncated_sets() {
        let one = truncated_action_set(1).unwrap();
        assert_eq!(one.len(), 2);
        assert_eq!(one[0].value(), q("9/4-sqrt2"));
        assert_eq!(one[1].value(), q("2-sqrt2"));
        let three = truncated_action_set(3).unwrap();
        assert_eq!(three.len(), 4);
        let min = three.iter().map(ActionJ::value).min().unwrap();
        assert_eq!(min, q("2-sqrt2"));
        assert!(truncated_action_set(0).is_err());
    }

    #[test]
    fn one_stage_best_responses() {
        let l = disc("1");
        let a = ActionJ::index(2).unwrap().value();
        let br = best_response_value(&l, &a, &q("1/2"), State::Plus).unwrap();
        assert_eq!(br.value, q("2*sqrt2-17/8"));
        assert_eq!(br.argmax.0, ActionI::Zero);
        let br = best_response_value(&l, &q("1/2"), &a, State::Minus).unwrap();
        assert_eq!(br.value, -a);
    }

    #[test]
    fn one_stage_values() {
        for n in [3, 5] {
            let sol = stationary_value(&disc("1"), n).unwrap();
            assert_eq!(sol.values.w_plus, q("2*sqrt2-17/8"));
            assert_eq!(sol.values.w_minus, q("sqrt2-33/16"));
            assert_eq!(sol.minimizers[0].a, ActionJ::index(2).unwrap());
        }
    }

    #[test]
    fn residuals_vanish_at_solution() {
        for (l, n) in [
            (disc("1"), 5),
            (Discount::new(lambda_seq(3).unwrap()).unwrap(), 13),
        ] {
            let sol = stationary_value(&l, n).unwrap();
            let (rp, rm) = shapley_residual(&sol.values, &l, n).unwrap();
            assert!(rp.is_zero() && rm.is_zero());
            let mut moved = sol.values.clone();
            moved.w_plus = moved.w_plus + ExactQuad::one();
            let (rp, _) = shapley_residual(&moved, &l, n).unwrap();
            assert!(!rp.is_zero());
        }
    }

    #[test]
    fn value_iteration_one_stage() {
        let vi = value_iteration(1.0, 4, 1e-10).unwrap();
        assert_eq!(vi.iterations, 1);
        assert!((vi.w_plus - q("2*sqrt2-17/8").to_f64()).abs() < 1e-15);
        assert!((vi.w_minus - q("sqrt2-33/16").to_f64()).abs() < 1e-15);
        assert!(value_iteration(0.0, 4, 1e-10).is_err());
        assert!(value_iteration(0.5, 4, 0.0).is_err());
    }

    #[test]
    fn value_iteration_agrees_with_exact_solver() {
        let tol = 1e-10;
        let vi = value_iteration(0.1, 12, tol).unwrap();
        let ex = stationary_value(&disc("1/10"), 12).unwrap();
        assert!((vi.w_plus - ex.values.w_plus.to_f64()).abs() <= 10.0 * tol);
        assert!((vi.w_minus - ex.values.w_minus.to_f64()).abs() <= 10.0 * tol);
    }

    #[test]
    fn value_iteration_within_bound() {
        for l in [0.5, 0.1, 0.01] {
            let vi = value_iteration(l, 8, 1e-10).unwrap();
            assert!(vi.iterations <= value_iteration_bound(l, 1e-10));
        }
    }

    #[test]
    fn sequence_values() {
        assert_eq!(lambda_seq(3).unwrap(), q("3/16+1/8*sqrt2"));
        assert_eq!(lambda_seq(3).unwrap().approx(5), "0.36428");
        assert_eq!(
            lambda_seq(8).unwrap().to_f64().to_string()[..8],
            *"0.000355"
        );
        for n in 3..12 {
            assert_eq!(
                mu_seq(n).unwrap() * ExactQuad::from_integer(2),
                lambda_seq(n).unwrap()
            );
        }
        let err = lambda_seq(2).unwrap_err();
        assert!(err.to_string().contains("discount exceeds 1"));
        assert!(mu_seq(1).is_err());
        assert!(p_star_slope() * inverse_gap() == ExactQuad::one());
    }

    #[test]
    fn p_star_hits_action_set_on_lambda_sequence() {
        for n in 3..12 {
            let j = ActionJ::index(n).unwrap().value();
            assert_eq!(p_star(&lambda_seq(n).unwrap()), j);
            let off = p_star(&mu_seq(n).unwrap());
            let exp = 2 * n as i32;
            assert_eq!(off, ActionJ::limit_value() + ExactQuad::pow2(-exp - 1));
            assert_eq!(distance_to_action_set(&off), ExactQuad::pow2(-exp - 2));
            assert!(distance_to_action_set(&j).is_zero());
        }
        assert_eq!(p_star(&ExactQuad::zero()), q("2-sqrt2"));
        assert_eq!(distance_to_action_set(&q("1/2")), q("3/2-sqrt2"));
    }

    #[test]
    fn threshold_decisions() {
        let n = 5;
        let y = threshold_strategy(&Discount::new(lambda_seq(n).unwrap()).unwrap());
        let jn = ActionJ::index(n).unwrap();
        let larger = ActionJ::index(n - 1).unwrap();
        assert_eq!(y.action(State::Plus, jn).unwrap(), ActionI::Zero);
        assert_eq!(y.action(State::Plus, larger).unwrap(), ActionI::One);
        assert_eq!(y.action(State::Minus, jn).unwrap(), ActionI::One);
        assert_eq!(y.action(State::Minus, larger).unwrap(), ActionI::Zero);
    }

    #[test]
    fn guarantee_never_exceeds_value() {
        for l in [disc("1/2"), Discount::new(lambda_seq(4).unwrap()).unwrap()] {
            let y = threshold_strategy(&l);
            let g = guarantee(&y, &l, 8).unwrap();
            let w = stationary_value(&l, 8).unwrap().values.w_plus;
            assert!(g <= w);
        }
    }

    #[test]
    fn auto_truncation_matches_sequence_rule() {
        for n in 3..9 {
            assert_eq!(
                TruncationRule::Auto.level(&lambda_seq(n).unwrap()),
                n as usize + 10
            );
        }
        assert_eq!(TruncationRule::Fixed(7).level(&q("1/2")), 7);
    }

    #[test]
    fn sweep_keeps_input_order() {
        assert!(sweep(&[], TruncationRule::Fixed(4), None, false, 1).is_empty());
        let lambdas = [q("1/2"), q("1"), q("1/10")];
        let seq = sweep(&lambdas, TruncationRule::Fixed(4), Some(1e-10), false, 1);
        let par = sweep(&lambdas, TruncationRule::Fixed(4), Some(1e-10), false, 3);
        assert_eq!(seq.len(), 6);
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.as_ref().unwrap(), b.as_ref().unwrap());
        }
        assert_eq!(seq[2].as_ref().unwrap().lambda, q("1"));
        assert_eq!(seq[3].as_ref().unwrap().solver, SolverKind::ValueIteration);
        let bad = sweep(&[q("2")], TruncationRule::Fixed(4), None, false, 1);
        assert!(bad[0].is_err());
    }
}
