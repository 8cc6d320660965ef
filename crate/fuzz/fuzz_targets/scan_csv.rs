//! The scan CSV parser promises strictness: anything it accepts satisfies
//! the column relationships it claims to have checked.

#![no_main]

use libfuzzer_sys::fuzz_target;
use paley_lp::numtheory::is_paley_prime;
use paley_lp::scan::parse_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(sc) = parse_csv(text) else { return };

    let n = sc.prime_count();
    assert!(sc.count_ls_le_hp <= n);
    assert!(sc.count_ls_lt_floor_hp <= n);
    assert!(sc.count_floor_mismatch <= n);
    // strictly-better-than-floor implies at-most-HP
    assert!(sc.count_ls_lt_floor_hp <= sc.count_ls_le_hp);

    let mut last = 0u64;
    for row in &sc.rows {
        assert!(is_paley_prime(row.p));
        assert!(row.p > last, "primes not ascending at {}", row.p);
        last = row.p;
        assert!(row.hp.is_finite() && row.l.is_finite() && row.ls.is_finite());
        if let Some(omega) = row.omega {
            assert!(omega >= 1);
        }
    }
});
