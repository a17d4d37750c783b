//! Deterministic, seeded sampling and enumeration of boundary words.
//!
//! Every verification campaign records its seed; identical seeds reproduce
//! identical sample streams, so reports are byte-stable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::words::{EvWord, FiniteWord};

/// Seeded generator of eventually periodic words with bounded prefix and
/// period lengths.
pub struct WordSampler {
    rng: ChaCha8Rng,
    max_prefix: usize,
    max_period: usize,
}

impl WordSampler {
    pub fn new(seed: u64, max_prefix: usize, max_period: usize) -> Self {
        assert!(max_period >= 1);
        WordSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_prefix,
            max_period,
        }
    }

    pub fn word(&mut self) -> EvWord {
        let plen = self.rng.gen_range(0..=self.max_prefix);
        let qlen = self.rng.gen_range(1..=self.max_period);
        let prefix: Vec<u8> = (0..plen).map(|_| self.rng.gen_range(0..2u8)).collect();
        let period: Vec<u8> = (0..qlen).map(|_| self.rng.gen_range(0..2u8)).collect();
        EvWord::new(prefix, period)
    }

    pub fn finite(&mut self, max_len: usize) -> FiniteWord {
        let len = self.rng.gen_range(0..=max_len);
        FiniteWord::new(
            (0..len)
                .map(|_| self.rng.gen_range(0..2u8))
                .collect::<Vec<_>>(),
        )
    }

    pub fn stage(&mut self, max_stage: i64) -> i64 {
        self.rng.gen_range(0..=max_stage)
    }
}

/// All canonical eventually periodic words with
/// `|prefix| + |period| ≤ max_complexity`, in a fixed deterministic order
/// (by complexity, then period length, then letters). Used for exhaustive
/// witness searches so the reported witness is stable.
pub fn enumerate_words(max_complexity: usize) -> Vec<EvWord> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for total in 1..=max_complexity {
        for qlen in 1..=total {
            let plen = total - qlen;
            for p in FiniteWord::all_of_length(plen) {
                for q in FiniteWord::all_of_length(qlen) {
                    let w = EvWord::new(p.letters().to_vec(), q.letters().to_vec());
                    if w.complexity() == total && seen.insert(w.clone()) {
                        out.push(w);
                    }
                }
            }
        }
    }
    out
}
