//! Seeded generators for exact test inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{EvConstSeq, FinSeq, LimFunctional, Rat};

/// Draws rationals with `|numerator| ≤ max_magnitude` and
/// `1 ≤ denominator ≤ max_magnitude`, and sequences with support in
/// `[1, max_support]`.
pub struct Sampler {
    rng: ChaCha8Rng,
    max_support: usize,
    max_magnitude: i64,
}

impl Sampler {
    /// Independent stream `stream` of the generator seeded with `seed`.
    pub fn new(seed: u64, stream: u64, max_support: usize, max_magnitude: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            rng,
            max_support: max_support.max(1),
            max_magnitude: max_magnitude.clamp(1, i64::MAX as u64) as i64,
        }
    }

    pub fn max_support(&self) -> usize {
        self.max_support
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random()
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.random_range(1..=upper.max(1))
    }

    pub fn rat(&mut self) -> Rat {
        let m = self.max_magnitude;
        let num = self.rng.random_range(-m..=m);
        let den = self.rng.random_range(1..=m);
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if r != Rat::from_integer(0.into()) {
                return r;
            }
        }
    }

    pub fn positive_rat(&mut self) -> Rat {
        let r = self.nonzero_rat();
        if r < Rat::from_integer(0.into()) {
            -r
        } else {
            r
        }
    }

    /// A sequence with up to `max_support` entries.
    pub fn finseq(&mut self) -> FinSeq {
        self.finseq_within(self.max_support)
    }

    pub fn finseq_within(&mut self, support: usize) -> FinSeq {
        let count = self.rng.random_range(0..=support);
        let mut entries = BTreeMap::new();
        for _ in 0..count {
            let k = self.index(support);
            entries.insert(k, self.rat());
        }
        FinSeq::from_pairs(entries).expect("indices are positive")
    }

    pub fn nonzero_finseq(&mut self) -> FinSeq {
        loop {
            let x = self.finseq();
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// `μ·e + w` with random `μ` and `w`.
    pub fn evconst(&mut self) -> EvConstSeq {
        let mu = self.rat();
        let w = self.finseq();
        EvConstSeq::compose(mu, &w)
    }

    pub fn limfunc(&mut self) -> LimFunctional {
        LimFunctional::new(self.finseq(), self.rat())
    }
}
