//! Graph dumps are re-read by other tooling; a dump that validates must
//! describe exactly the graph the library would rebuild from scratch.

#![no_main]

use libfuzzer_sys::fuzz_target;
use paley_lp::paley::{connection_size, GraphDump};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((dump, ctx, graph)) = GraphDump::parse(text) else { return };

    assert_eq!(dump.p, ctx.p);
    assert_eq!(dump.n, ctx.n);
    assert_eq!(dump.n as usize, graph.n());
    assert_eq!(graph.conn().len() as u64, connection_size(dump.p));
    for &d in graph.conn() {
        assert!(d >= 1 && d < graph.n());
        assert!(graph.conn().contains(&(graph.n() - d)), "asymmetric at {d}");
    }

    // Rebuilding from the validated context gives the same dump up to the
    // (unordered) JSON array; canonical output is sorted and must re-parse.
    let canonical = GraphDump::from_context(&ctx);
    assert_eq!(canonical.p, dump.p);
    assert_eq!(canonical.alpha, dump.alpha);
    let mut claimed = dump.connection_set.clone();
    claimed.sort_unstable();
    claimed.dedup();
    assert_eq!(canonical.connection_set, claimed);
    GraphDump::parse(&canonical.to_json()).expect("canonical dump re-parses");
});
