//! The simplex against a vertex-enumeration oracle on randomly generated
//! feasible, bounded LPs.

mod common;

use common::{dot, feasible, random_lp, vertex_enum_optimum};
use paley_lp::simplex::{solve_default, LpStatus, Sense};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn simplex_matches_vertex_enumeration_on_100_random_lps() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = random_lp(&mut rng);
        let sol = solve_default(&lp).expect("generated LPs are well-formed");
        assert_eq!(
            sol.status,
            LpStatus::Optimal,
            "seed {seed}: generated LPs are feasible and bounded"
        );
        let oracle = vertex_enum_optimum(&lp).expect("oracle must find a vertex");
        let scale = 1.0 + oracle.abs();
        assert!(
            (sol.objective_value - oracle).abs() <= 1e-7 * scale,
            "seed {seed}: simplex {} vs oracle {oracle}",
            sol.objective_value
        );
        assert!(
            feasible(&lp, &sol.primal, 1e-7),
            "seed {seed}: simplex point violates a constraint"
        );
    }
}

#[test]
fn reported_duals_reproduce_the_objective() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = random_lp(&mut rng);
        let sol = solve_default(&lp).unwrap();
        let rhs: Vec<f64> = lp.eq.iter().chain(&lp.le).map(|c| c.rhs).collect();
        assert_eq!(sol.dual.len(), rhs.len(), "seed {seed}");
        let dual_value = dot(&sol.dual, &rhs);
        let scale = 1.0 + sol.objective_value.abs();
        assert!(
            (dual_value - sol.objective_value).abs() <= 1e-6 * scale,
            "seed {seed}: dual value {dual_value} vs primal {}",
            sol.objective_value
        );
        // inequality duals must carry the sign that proves optimality
        for (i, &y) in sol.dual[lp.eq.len()..].iter().enumerate() {
            let ok = match lp.sense {
                Sense::Maximize => y >= -1e-7,
                Sense::Minimize => y <= 1e-7,
            };
            assert!(ok, "seed {seed}: le-row {i} dual {y} has the wrong sign");
        }
    }
}
