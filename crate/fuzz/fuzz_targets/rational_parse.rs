#![no_main]

use libfuzzer_sys::fuzz_target;

use dyadil::padic::{parse_rational, PadicInt};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 256 {
        return;
    }
    if let Ok(x) = parse_rational(text) {
        // The digit stream and the rational it denotes are interchangeable.
        let r = x.to_rational();
        let back = PadicInt::from_ratio(&r).expect("odd denominator survives");
        assert_eq!(back, x);
        // Norm is consistent with the valuation.
        match x.valuation() {
            None => assert!(x.is_zero()),
            Some(v) => assert_eq!(x.norm(), dyadil::words::UDistance::pow2(-(v as i64))),
        }
    }
});
