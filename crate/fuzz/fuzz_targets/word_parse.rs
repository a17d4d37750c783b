#![no_main]

use libfuzzer_sys::fuzz_target;

use dyadil::words::EvWord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 4096 {
        return;
    }
    if let Ok(word) = text.parse::<EvWord>() {
        // Canonical form invariants.
        assert!(!word.period().is_empty());
        assert!(word
            .prefix()
            .iter()
            .chain(word.period().iter())
            .all(|&b| b <= 1));
        // Display/parse round trip is the identity on canonical forms.
        let back: EvWord = word.to_string().parse().expect("canonical reparse");
        assert_eq!(back, word);
        // Equality is representation-independent: shifting the whole word
        // right by one of its own letters and prepending it back is a no-op.
        let shifted = dyadil::words::cons(word.letter(0), &word.shift(1));
        assert_eq!(shifted, word);
    }
});
