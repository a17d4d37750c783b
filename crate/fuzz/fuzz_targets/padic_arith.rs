#![no_main]

use libfuzzer_sys::fuzz_target;

use dyadil::padic::PadicInt;
use dyadil::words::EvWord;

// Differential fuzz: the streaming digit arithmetic must agree with exact
// rational arithmetic on every valid input pair `WORD|WORD`.
fuzz_target!(|data: &[u8]| {
    if data.len() > 256 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((a, b)) = text.split_once('|') else {
        return;
    };
    let (Ok(x), Ok(y)) = (a.parse::<EvWord>(), b.parse::<EvWord>()) else {
        return;
    };
    let x = PadicInt::from_word(x);
    let y = PadicInt::from_word(y);

    let sum = x.add_ref(&y);
    assert_eq!(sum.to_rational(), x.to_rational() + y.to_rational());

    let neg = x.neg_ref();
    assert_eq!(neg.to_rational(), -x.to_rational());
    assert!(x.add_ref(&neg).is_zero());

    let prod = x.mul_ref(&y);
    assert_eq!(prod.norm(), x.norm().mul(y.norm()));
    assert!(sum.norm() <= x.norm().max(y.norm()));

    // Metric compatibility with the boundary ultrametric.
    assert_eq!(
        dyadil::words::distance(x.word(), y.word()),
        x.sub_ref(&y).norm()
    );
});
