#![no_main]

use hyperpack_core::complex::{edge_star, parse_document, to_json, validate_triangulation};
use hyperpack_core::curvature::{curvature_report, MetricState};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_document(text) else { return };
    let t = &doc.triangulation;
    let again = parse_document(&to_json(t, doc.weights.as_ref(), doc.radii.as_ref())).expect("round trip parses");
    assert_eq!(again, doc);
    validate_triangulation(t).expect("parsed triangulations validate");
    for e in 0..t.edges().len() {
        edge_star(t, e).expect("every edge has a star");
    }
    if t.tets().len() > 64 {
        return;
    }
    if let (Some(w), Some(r)) = (doc.weights, doc.radii) {
        if let Ok(state) = MetricState::new(t, w, r) {
            let _ = curvature_report(&state);
        }
    }
});
