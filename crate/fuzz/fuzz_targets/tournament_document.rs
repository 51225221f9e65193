#![no_main]

use libfuzzer_sys::fuzz_target;

use kings::doc::TournamentDocument;

// Parsing plus validation must never panic, and every document that
// validates must round-trip and have at least one king.
fuzz_target!(|data: &[u8]| {
    let Ok(doc) = TournamentDocument::from_json(data) else {
        return;
    };
    let Ok(sel) = doc.to_selection() else {
        return;
    };
    if sel.len() > 64 {
        return; // keep the cubic king analysis off absurd inputs
    }
    let report = sel.king_report().expect("validated tournaments have kings");
    assert!(!report.kings.is_empty());
    for (&(z, x), &y) in &report.witnesses {
        assert!(sel.arrow(z, y) && sel.arrow(y, x));
    }

    let reparsed = TournamentDocument::from_json(doc.to_json().as_bytes()).unwrap();
    assert_eq!(reparsed.to_selection().unwrap(), sel);
});
