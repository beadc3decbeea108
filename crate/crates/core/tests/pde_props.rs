use discount_osc::hamiltonian::Hamiltonian;
use discount_osc::pdesolver::{
    compare_exact, lf_update, max_stable_step, solve_discounted, Field, SolverParams, TorusGrid,
    PDE_TRUNCATION,
};
use discount_osc::ExactQuad;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

fn random_field(rng: &mut SplitMix64, m: usize) -> Field {
    Field((0..m).map(|_| rng.gen_range(-2.0..2.0)).collect())
}

#[test]
fn update_preserves_order() {
    let ham = Hamiltonian::new(PDE_TRUNCATION).unwrap();
    let grid = TorusGrid::new(64).unwrap();
    let params = SolverParams::new(0.1, &grid);
    assert_eq!(params.tau, max_stable_step(&grid, 0.1, 1.0));
    let mut rng = SplitMix64::seed_from_u64(5);
    for _ in 0..50 {
        let v = random_field(&mut rng, 64);
        let w = Field(
            v.values()
                .iter()
                .map(|x| x + rng.gen_range(0.0..0.5))
                .collect(),
        );
        let (uv, uw) = (
            lf_update(&ham, &grid, &params, &v),
            lf_update(&ham, &grid, &params, &w),
        );
        for (a, b) in uv.values().iter().zip(uw.values()) {
            assert!(a <= &(b + 1e-12));
        }
    }
}

#[test]
fn update_contracts_in_sup_norm() {
    let ham = Hamiltonian::new(PDE_TRUNCATION).unwrap();
    let grid = TorusGrid::new(64).unwrap();
    let params = SolverParams::new(0.25, &grid);
    let factor = 1.0 - params.tau * params.lambda;
    let mut rng = SplitMix64::seed_from_u64(9);
    for _ in 0..50 {
        let v = random_field(&mut rng, 64);
        let w = random_field(&mut rng, 64);
        let before = v.sup_distance(&w);
        let after =
            lf_update(&ham, &grid, &params, &v).sup_distance(&lf_update(&ham, &grid, &params, &w));
        assert!(
            after <= factor * before + 1e-12,
            "{after} > {factor} * {before}"
        );
    }
}

#[test]
fn converged_field_is_even() {
    let ham = Hamiltonian::new(PDE_TRUNCATION).unwrap();
    let grid = TorusGrid::new(40).unwrap();
    let mut params = SolverParams::new(0.3, &grid);
    params.tol = 1e-9;
    let sol = solve_discounted(&ham, &grid, &params).unwrap();
    let v = sol.field.values();
    for k in 0..grid.cells() {
        assert!((v[k] - v[grid.mirror(k)]).abs() <= 1e-8);
    }
}

#[test]
fn refinement_reduces_error() {
    let lambda = ExactQuad::from_ratio(1, 2);
    let coarse = compare_exact(&lambda, 200).unwrap();
    let fine = compare_exact(&lambda, 400).unwrap();
    println!(
        "λ=1/2: M=200 {:.3e}, M=400 {:.3e}",
        coarse.sup_error, fine.sup_error
    );
    assert!(fine.sup_error < coarse.sup_error);
    assert!(fine.sup_error <= 0.02);
}

#[test]
fn tenth_discount_reference() {
    let t = std::time::Instant::now();
    let cmp = compare_exact(&ExactQuad::from_ratio(1, 10), 400).unwrap();
    println!(
        "λ=1/10 M=400: {:.3e} in {} iterations, {:?}",
        cmp.sup_error,
        cmp.iterations,
        t.elapsed()
    );
    assert!(cmp.sup_error <= 0.05);
}
