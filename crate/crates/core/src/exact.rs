//! Exact scalars, the two sequence models and their duality pairings.
//!
//! Three concrete spaces are modelled with rational entries:
//!
//! * [`FinSeq`]: finitely supported sequences. They stand for elements of
//!   `ℓ¹` and, where the context says so, for finitely supported elements of
//!   `c₀` (sequences converging to zero).
//! * [`EvConstSeq`]: eventually constant sequences, a subspace of the space
//!   `c` of convergent sequences. The all-ones sequence `e` lives here.
//! * [`LimFunctional`]: linear functionals on `c` of the form
//!   `y ↦ Σ a_k y_k + λ·lim y`.
//!
//! Every sequence is indexed from 1.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. `BigRational` keeps numerator and denominator in
/// lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Shorthand for the rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses the canonical textual form `p/q` (or `p`).
pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Vector-space structure shared by all linear models.
pub trait Linear: Clone {
    fn zero() -> Self;
    fn scaled(&self, c: &Rat) -> Self;
    fn plus(&self, other: &Self) -> Self;
}

/// Exact `Σ cᵢ·vᵢ` over operands of one representation.
pub fn linear_combine<'a, V, I>(terms: I) -> V
where
    V: Linear + 'a,
    I: IntoIterator<Item = (Rat, &'a V)>,
{
    terms
        .into_iter()
        .fold(V::zero(), |acc, (c, v)| acc.plus(&v.scaled(&c)))
}

/// A finitely supported rational sequence. No stored entry is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FinSeq {
    entries: BTreeMap<usize, Rat>,
}

impl FinSeq {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a sequence from `(index, value)` pairs. Repeated indices are
    /// summed and zero values dropped.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rat)>,
    {
        let mut entries: BTreeMap<usize, Rat> = BTreeMap::new();
        for (k, v) in pairs {
            if k == 0 {
                return Err(Error::ZeroIndex);
            }
            *entries.entry(k).or_insert_with(Rat::zero) += v;
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(Self { entries })
    }

    /// The unit vector `δᵢ`. Panics if `i == 0`.
    pub fn delta(i: usize) -> Self {
        Self::scaled_delta(i, Rat::one())
    }

    /// `c·δᵢ`. Panics if `i == 0`.
    pub fn scaled_delta(i: usize, c: Rat) -> Self {
        assert!(i >= 1, "sequence indices are 1-based");
        let mut entries = BTreeMap::new();
        if !c.is_zero() {
            entries.insert(i, c);
        }
        Self { entries }
    }

    /// Entry at the 1-based index `k` (zero off the support).
    pub fn get(&self, k: usize) -> Rat {
        self.entries.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest index carrying a nonzero entry, 0 for the zero sequence.
    pub fn max_index(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ x_k`, i.e. the pairing `⟨x, e⟩`.
    pub fn sum(&self) -> Rat {
        self.entries.values().fold(Rat::zero(), |acc, v| acc + v)
    }

    /// `ℓ¹` norm `Σ |x_k|`.
    pub fn l1_norm(&self) -> Rat {
        self.entries.values().fold(Rat::zero(), |acc, v| acc + v.abs())
    }

    /// Dense view of indices `1..=n`.
    pub fn to_dense(&self, n: usize) -> Vec<Rat> {
        (1..=n).map(|k| self.get(k)).collect()
    }

    /// Reads a dense vector as the entries at indices `1..=len`.
    pub fn from_dense(values: &[Rat]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i + 1, v.clone()))
            .collect();
        Self { entries }
    }

    /// The same finitely supported sequence viewed inside `c` (tail 0).
    pub fn to_evconst(&self) -> EvConstSeq {
        EvConstSeq::new(self.to_dense(self.max_index()), Rat::zero())
    }
}

impl Linear for FinSeq {
    fn zero() -> Self {
        Self::new()
    }

    fn scaled(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        let entries = self.entries.iter().map(|(k, v)| (*k, v * c)).collect();
        Self { entries }
    }

    fn plus(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            let slot = entries.entry(*k).or_insert_with(Rat::zero);
            *slot += v;
            if slot.is_zero() {
                entries.remove(k);
            }
        }
        Self { entries }
    }
}

impl fmt::Debug for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("fin{")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}

/// An eventually constant rational sequence: `head` followed by `tail`
/// repeated forever. Canonical form keeps the last head entry different
/// from the tail, so structural equality is sequence equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EvConstSeq {
    head: Vec<Rat>,
    tail: Rat,
}

impl EvConstSeq {
    pub fn new(mut head: Vec<Rat>, tail: Rat) -> Self {
        while head.last() == Some(&tail) {
            head.pop();
        }
        Self { head, tail }
    }

    /// The constant sequence `(λ, λ, λ, …)`.
    pub fn constant(value: Rat) -> Self {
        Self {
            head: Vec::new(),
            tail: value,
        }
    }

    /// The all-ones sequence `e`.
    pub fn ones() -> Self {
        Self::constant(Rat::one())
    }

    pub fn head(&self) -> &[Rat] {
        &self.head
    }

    pub fn tail(&self) -> &Rat {
        &self.tail
    }

    /// The limit of the sequence, which is its tail value.
    pub fn limit(&self) -> &Rat {
        &self.tail
    }

    /// Entry at the 1-based index `n`.
    pub fn get(&self, n: usize) -> Rat {
        assert!(n >= 1, "sequence indices are 1-based");
        self.head
            .get(n - 1)
            .cloned()
            .unwrap_or_else(|| self.tail.clone())
    }

    /// Supremum norm `max(|head|, |tail|)`.
    pub fn sup_norm(&self) -> Rat {
        self.head
            .iter()
            .map(|v| v.abs())
            .fold(self.tail.abs(), |m, v| if v > m { v } else { m })
    }

    /// Splits `y = μ·e + w` with `μ = lim y` and `w` finitely supported.
    pub fn decompose(&self) -> (Rat, FinSeq) {
        let w: Vec<Rat> = self.head.iter().map(|v| v - &self.tail).collect();
        (self.tail.clone(), FinSeq::from_dense(&w))
    }

    /// Rebuilds `μ·e + w`.
    pub fn compose(mu: Rat, w: &FinSeq) -> Self {
        let head = (1..=w.max_index()).map(|k| w.get(k) + &mu).collect();
        Self::new(head, mu)
    }

    /// Returns the finitely supported sequence if the tail is zero.
    pub fn to_finseq(&self) -> Option<FinSeq> {
        self.tail.is_zero().then(|| FinSeq::from_dense(&self.head))
    }
}

impl Linear for EvConstSeq {
    fn zero() -> Self {
        Self::constant(Rat::zero())
    }

    fn scaled(&self, c: &Rat) -> Self {
        Self::new(self.head.iter().map(|v| v * c).collect(), &self.tail * c)
    }

    fn plus(&self, other: &Self) -> Self {
        let n = self.head.len().max(other.head.len());
        let head = (1..=n).map(|k| self.get(k) + other.get(k)).collect();
        Self::new(head, &self.tail + &other.tail)
    }
}

impl fmt::Debug for EvConstSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EvConstSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("evc([")?;
        for (i, v) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "], {})", self.tail)
    }
}

/// A functional on `c`: `y ↦ Σ abs_part(k)·y_k + lim_coeff·lim y`.
///
/// This is the restriction to `c` of an element of `(ℓ∞)*`. With
/// `abs_part = 0` it annihilates every sequence converging to zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LimFunctional {
    pub abs_part: FinSeq,
    pub lim_coeff: Rat,
}

impl LimFunctional {
    pub fn new(abs_part: FinSeq, lim_coeff: Rat) -> Self {
        Self {
            abs_part,
            lim_coeff,
        }
    }

    /// `λ·lim`.
    pub fn limit(lim_coeff: Rat) -> Self {
        Self::new(FinSeq::new(), lim_coeff)
    }

    pub fn evaluate(&self, y: &EvConstSeq) -> Rat {
        pair_c_functional(y, self)
    }
}

impl Linear for LimFunctional {
    fn zero() -> Self {
        Self::limit(Rat::zero())
    }
    fn scaled(&self, c: &Rat) -> Self {
        Self::new(self.abs_part.scaled(c), &self.lim_coeff * c)
    }
    fn plus(&self, other: &Self) -> Self {
        Self::new(
            self.abs_part.plus(&other.abs_part),
            &self.lim_coeff + &other.lim_coeff,
        )
    }
}

impl fmt::Debug for LimFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LimFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.abs_part.is_zero() {
            write!(f, "lim({})", self.lim_coeff)
        } else {
            write!(f, "limf({}, {})", self.abs_part, self.lim_coeff)
        }
    }
}

/// Duality product `⟨x, y⟩ = Σ x(k)·y_k` of `x ∈ ℓ¹` with `y ∈ c`.
pub fn pair_l1_c(x: &FinSeq, y: &EvConstSeq) -> Rat {
    x.iter().fold(Rat::zero(), |acc, (k, v)| acc + v * y.get(k))
}

/// Evaluates `φ` at `y ∈ c`.
pub fn pair_c_functional(y: &EvConstSeq, phi: &LimFunctional) -> Rat {
    pair_l1_c(&phi.abs_part, y) + &phi.lim_coeff * y.limit()
}

/// Canonical split `y = μ·e + w`.
pub fn decompose(y: &EvConstSeq) -> (Rat, FinSeq) {
    y.decompose()
}

macro_rules! linear_ops {
    ($ty:ty) => {
        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: Self) -> $ty {
                self.plus(rhs)
            }
        }
        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: Self) -> $ty {
                self.plus(&rhs.scaled(&-Rat::one()))
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                self.scaled(&-Rat::one())
            }
        }
        impl Mul<&Rat> for &$ty {
            type Output = $ty;
            fn mul(self, rhs: &Rat) -> $ty {
                self.scaled(rhs)
            }
        }
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: Self) -> $ty {
                self.plus(&rhs)
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: Self) -> $ty {
                &self - &rhs
            }
        }
    };
}

linear_ops!(FinSeq);
linear_ops!(EvConstSeq);
linear_ops!(LimFunctional);
