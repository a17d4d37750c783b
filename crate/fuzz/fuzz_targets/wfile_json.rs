#![no_main]

use libfuzzer_sys::fuzz_target;

use dyadil::isometry::WMap;
use dyadil::structures::WFunction;
use dyadil::words::{distance, EvWord};

fuzz_target!(|data: &[u8]| {
    if data.len() > 8192 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(wf) = WFunction::from_wfile_json(text) else {
        return;
    };
    // A parsed family must produce applicable isometries everywhere probed.
    let bases: [EvWord; 3] = [
        "(0)".parse().unwrap(),
        "1(0)".parse().unwrap(),
        "01(10)".parse().unwrap(),
    ];
    let probe: EvWord = "(10)".parse().unwrap();
    let probe2: EvWord = "110(0)".parse().unwrap();
    for level in 1..=3u32 {
        for base in &bases {
            let iso = wf.isometry(level, base).expect("parsed spec evaluates");
            let a = iso.apply(&probe).expect("total on the boundary");
            let b = iso.apply(&probe2).expect("total on the boundary");
            assert_eq!(distance(&a, &b), distance(&probe, &probe2));
            assert_eq!(iso.inverse_apply(&a).expect("invertible"), probe);
        }
    }
});
