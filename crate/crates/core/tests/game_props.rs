use discount_osc::game::{
    gamma_closed, gamma_linear_oracle, payoff_g, simulate_mc, ActionI, ActionJ, Discount, State,
    StationaryP1, StationaryP2,
};
use discount_osc::shapley::truncated_action_set;
use discount_osc::ExactQuad;
use proptest::prelude::*;

fn open_unit() -> impl Strategy<Value = ExactQuad> {
    (1i64..999).prop_map(|k| ExactQuad::from_ratio(k, 1000))
}

fn discount() -> impl Strategy<Value = Discount> {
    (1i64..=1000).prop_map(|k| Discount::new(ExactQuad::from_ratio(k, 1000)).unwrap())
}

fn action() -> impl Strategy<Value = ActionI> {
    prop_oneof![Just(ActionI::Zero), Just(ActionI::One)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_linear_recursion(
        i in action(), ip in action(), l in discount(), a in open_unit(), b in open_unit()
    ) {
        let closed = gamma_closed(i, ip, &l, &a, &b).unwrap();
        let (oracle, _) = gamma_linear_oracle(i, ip, &l, &a, &b).unwrap();
        prop_assert_eq!(closed, oracle);
    }
}

/// Exact pairwise comparison of one closed form along a 6×6 grid of J-values.
fn check_pattern(i: ActionI, ip: ActionI, l: &Discount, up_in_a: bool, up_in_b: bool) {
    let js: Vec<ExactQuad> = truncated_action_set(5)
        .unwrap()
        .iter()
        .map(ActionJ::value)
        .collect();
    let mut sorted = js.clone();
    sorted.sort();
    for w in sorted.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        for other in &sorted {
            let at = |a: &ExactQuad, b: &ExactQuad| gamma_closed(i, ip, l, a, b).unwrap();
            let (a_lo, a_hi) = (at(lo, other), at(hi, other));
            let (b_lo, b_hi) = (at(other, lo), at(other, hi));
            if up_in_a {
                assert!(a_lo <= a_hi, "({i:?},{ip:?}) not nondecreasing in a");
            } else {
                assert!(a_lo >= a_hi, "({i:?},{ip:?}) not nonincreasing in a");
            }
            if up_in_b {
                assert!(b_lo <= b_hi, "({i:?},{ip:?}) not nondecreasing in b");
            } else {
                assert!(b_lo >= b_hi, "({i:?},{ip:?}) not nonincreasing in b");
            }
        }
    }
}

#[test]
fn monotonicity_sign_patterns() {
    for l in ["1/2", "1/10", "1/100"] {
        let l = Discount::new(l.parse().unwrap()).unwrap();
        check_pattern(ActionI::Zero, ActionI::Zero, &l, false, true);
        check_pattern(ActionI::One, ActionI::One, &l, true, false);
        check_pattern(ActionI::One, ActionI::Zero, &l, true, true);
        check_pattern(ActionI::Zero, ActionI::One, &l, false, false);
    }
}

#[test]
fn monte_carlo_matches_closed_form() {
    let acts = truncated_action_set(1).unwrap();
    let j1 = acts[0];
    let y = StationaryP1::constant(ActionI::One, ActionI::One, &acts);
    let z = StationaryP2 { a: j1, b: j1 };
    let est = simulate_mc(&y, &z, 0.5, State::Plus, 2024, 100_000, 1e-4).unwrap();
    let l = Discount::new(ExactQuad::from_ratio(1, 2)).unwrap();
    let exact = gamma_closed(ActionI::One, ActionI::One, &l, &j1.value(), &j1.value())
        .unwrap()
        .to_f64();
    assert!(
        (est.mean - exact).abs() <= 3.0 * est.stderr,
        "mc {} ± {} vs {}",
        est.mean,
        est.stderr,
        exact
    );
}

#[test]
fn one_stage_payoff_expectation() {
    let j = ActionJ::index(3).unwrap().value();
    let one = ExactQuad::from_integer(1);
    // g is affine in j: average of the pure-action payoffs.
    for k in State::ALL {
        for i in [ActionI::Zero, ActionI::One] {
            let mixed = payoff_g(k, i, &j).unwrap();
            let pure1 = payoff_g(k, i, &one).unwrap();
            let pure0 = payoff_g(k, i, &ExactQuad::from_integer(0)).unwrap();
            assert_eq!(mixed, &j * &pure1 + (&one - &j) * pure0);
        }
    }
}
