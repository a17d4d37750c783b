#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 128 {
        return;
    }
    if let Ok(grid) = dyadil::realdil::parse_grid(text) {
        assert!(!grid.is_empty());
        assert!(grid.iter().all(|e| e.is_finite() && *e > 0.0 && *e < 1.0));
        assert!(grid.windows(2).all(|w| w[1] < w[0]), "strictly decreasing");
    }
});
