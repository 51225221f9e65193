#![no_main]

use libfuzzer_sys::fuzz_target;

use kings::doc::SampledSpaceDocument;
use kings::{continuity_falsify, random_tournament};

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = SampledSpaceDocument::from_json(data) else {
        return;
    };
    let Ok(space) = doc.to_space() else {
        return;
    };
    let reparsed = SampledSpaceDocument::from_json(doc.to_json().as_bytes()).unwrap();
    assert_eq!(reparsed.to_space().unwrap(), space);

    // the falsifier must hold up on any valid space
    if space.is_empty() || space.len() > 32 {
        return;
    }
    let sel = random_tournament(space.len(), 7).unwrap();
    let cert = continuity_falsify(&space, &sel, 0.1, 0.3).expect("valid resolution");
    for v in &cert.violations {
        assert_eq!(sel.choice(v.a, v.b), v.a);
        assert_eq!(sel.choice(v.a_prime, v.b_prime), v.b_prime);
    }
});
