//! Primal/dual agreement beyond the unit-test spot checks, and the
//! cross-module invariant tying certificate condition (i) to the local
//! graph's connection set.

use paley_lp::bounds::{theta_l_lp, theta_ls_lp};
use paley_lp::certificates::{
    certificate_for, dual_theta_l, dual_theta_ls, dual_theta_ls_reduced, verify_certificate,
    zero_support, weak_duality_check,
};
use paley_lp::numtheory::{is_paley_prime, PrimeContext};
use paley_lp::paley::local_graph;

#[test]
fn strong_duality_on_mid_sized_primes() {
    for p in [109u64, 173, 281] {
        let target = local_graph(&PrimeContext::new(p).unwrap()).complement();
        let primal_ls = theta_ls_lp(&target).unwrap().value;
        let dual_ls = dual_theta_ls(&target).unwrap().value;
        assert!(
            (primal_ls - dual_ls).abs() < 1e-6,
            "p={p}: theta_LS primal {primal_ls} vs dual {dual_ls}"
        );
        let primal_l = theta_l_lp(&target).unwrap().value;
        let dual_l = dual_theta_l(&target).unwrap().value;
        assert!(
            (primal_l - dual_l).abs() < 1e-6,
            "p={p}: theta_L primal {primal_l} vs dual {dual_l}"
        );
    }
}

#[test]
fn dual_optimizers_verify_as_certificates() {
    for p in [109u64, 173] {
        let ctx = PrimeContext::new(p).unwrap();
        let (cert, sol) = certificate_for(&ctx).unwrap();
        let report = verify_certificate(&cert, 1e-7).unwrap();
        assert!(report.valid, "p={p}: {:?}", report.violations);
        assert!((report.bound - (sol.value + 1.0)).abs() < 1e-12, "p={p}");
    }
}

#[test]
fn reduced_dual_agrees_with_full_dual() {
    for p in [101u64, 109] {
        let target = local_graph(&PrimeContext::new(p).unwrap()).complement();
        let full = dual_theta_ls(&target).unwrap();
        let reduced = dual_theta_ls_reduced(&target).unwrap();
        assert!(
            (full.value - reduced.value).abs() < 1e-7,
            "p={p}: full {} vs reduced {}",
            full.value,
            reduced.value
        );
    }
}

#[test]
fn weak_duality_reports_close_gaps() {
    for p in [29u64, 97] {
        let r = weak_duality_check(p).unwrap();
        assert!(r.gap > -1e-6, "p={p}: dual below primal by {}", -r.gap);
        assert!(r.gap.abs() < 1e-6, "p={p}: gap {}", r.gap);
        assert!(r.certificate_valid, "p={p}");
    }
}

/// Certificate condition (i) talks about `alpha^k - 1` being a residue; the
/// local graph builder derives its connection set the same way but through
/// different code. They must be the same set for every prime we scan.
#[test]
fn condition_one_support_is_the_connection_set() {
    for p in (5..500).filter(|&p| is_paley_prime(p)) {
        let ctx = PrimeContext::new(p).unwrap();
        assert_eq!(
            &zero_support(&ctx),
            local_graph(&ctx).conn(),
            "p={p}"
        );
    }
}
