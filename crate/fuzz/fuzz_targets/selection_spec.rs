#![no_main]

use libfuzzer_sys::fuzz_target;

use kings::SelectionSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = SelectionSpec::from_json(data) else {
        return;
    };
    if spec.player_count() > 64 {
        return; // mismatched inner recipes still error out cheaply below
    }
    let Ok(sel) = spec.materialize() else {
        return;
    };
    // materialization is deterministic and every tournament has a king
    assert_eq!(spec.materialize().unwrap(), sel);
    assert!(!sel.kings().unwrap().is_empty());
});
