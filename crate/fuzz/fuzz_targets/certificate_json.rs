//! Certificate files come from outside the trust boundary: parsing and
//! verification must never panic, and whatever survives must be internally
//! consistent.

#![no_main]

use libfuzzer_sys::fuzz_target;
use paley_lp::certificates::{verify_certificate, DualCertificate};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cert) = DualCertificate::from_json(text) else { return };

    let Ok(report) = verify_certificate(&cert, 1e-9) else { return };

    // A structurally sound certificate has a finite f, so the reported bound
    // is exactly the claimed one whether or not the conditions hold.
    assert!(report.bound.is_finite());
    assert_eq!(report.bound.to_bits(), cert.claimed_bound().to_bits());
    assert_eq!(report.valid, report.violations.is_empty());

    // Loosening the tolerance can only remove violations.
    let loose = verify_certificate(&cert, 1e-3).expect("structure already checked");
    assert!(loose.violations.len() <= report.violations.len());

    // Serialization of anything that parsed must round-trip.
    let again = DualCertificate::from_json(&cert.to_json()).expect("round trip");
    assert_eq!(cert, again);
});
