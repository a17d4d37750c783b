#![no_main]

use libfuzzer_sys::fuzz_target;

use dyadil::dilatation::Witness;

// Witness files are untrusted replay inputs; decoding plus replay must never
// panic, hang or blow memory — errors are the contract for junk.
fuzz_target!(|data: &[u8]| {
    if data.len() > 8192 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(witness) = serde_json::from_str::<Witness>(text) else {
        return;
    };
    if witness.structures.iter().any(|s| s.contains("wfile:")) {
        return; // keep the fuzzer off the filesystem
    }
    // Oversized operands make replay expensive for no coverage gain.
    if witness.points.values().any(|w| w.complexity() > 64) {
        return;
    }
    let _ = dyadil::replay_witness(&witness);
});
