//! The seam between the certificate logic and the operator primitives.
//!
//! Certificates and verification suites call `G`, `A` and the verdict
//! comparison through [`Kernel`]. [`Exact`] forwards to the real
//! implementations; [`Mutant`] deliberately breaks one of them so the
//! verification suites can be shown to catch each defect.

use std::fmt;
use std::str::FromStr;

use crate::exact::{EvConstSeq, FinSeq, Linear, Rat};
use crate::operators;

pub trait Kernel: Sync {
    fn apply_g(&self, x: &FinSeq) -> EvConstSeq {
        operators::apply_g(x)
    }

    /// `A x` as an element of `c`; for a correct kernel the tail is 0.
    fn apply_a(&self, x: &FinSeq) -> EvConstSeq {
        self.apply_g(x).plus(&EvConstSeq::constant(x.sum()))
    }

    /// Whether `β < ⟨x₀**, x₀***⟩` certifies failure of type (D).
    fn fails_type_d(&self, beta: &Rat, pairing: &Rat) -> bool {
        beta < pairing
    }
}

/// The unmodified operators.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Kernel for Exact {}

/// Deliberate defects used to check that verification notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// `G` replaced by `−G`.
    GSignFlip,
    /// `A` computed as `G` alone, without the `⟨x, e⟩ e` term.
    ADropsRankOne,
    /// Failure verdict uses `β ≤ pairing` instead of `β < pairing`.
    NonStrictVerdict,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::GSignFlip,
        Mutation::ADropsRankOne,
        Mutation::NonStrictVerdict,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::GSignFlip => "g-sign-flip",
            Mutation::ADropsRankOne => "a-drops-rank-one",
            Mutation::NonStrictVerdict => "non-strict-verdict",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mutation `{s}`"))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Mutant(pub Mutation);

impl Kernel for Mutant {
    fn apply_g(&self, x: &FinSeq) -> EvConstSeq {
        let g = operators::apply_g(x);
        match self.0 {
            Mutation::GSignFlip => -&g,
            _ => g,
        }
    }

    fn apply_a(&self, x: &FinSeq) -> EvConstSeq {
        let g = self.apply_g(x);
        match self.0 {
            Mutation::ADropsRankOne => g,
            _ => g.plus(&EvConstSeq::constant(x.sum())),
        }
    }

    fn fails_type_d(&self, beta: &Rat, pairing: &Rat) -> bool {
        match self.0 {
            Mutation::NonStrictVerdict => beta <= pairing,
            _ => beta < pairing,
        }
    }
}
