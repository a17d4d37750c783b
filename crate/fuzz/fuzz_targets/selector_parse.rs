#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 512 {
        return;
    }
    // `wfile:` selectors read from the filesystem; keep the fuzzer hermetic.
    if text.contains("wfile:") {
        return;
    }
    if let Ok(s) = dyadil::structures::parse_selector(text) {
        // Any accepted selector must produce an evaluable structure.
        let x: dyadil::words::EvWord = "1(0)".parse().unwrap();
        let y: dyadil::words::EvWord = "(01)".parse().unwrap();
        let _ = s.dilate(&x, 1, &y);
        let _ = s.name();
    }
});
