//! Gossez's skew operator `G`, the monotone operator `A = G + ⟨·,e⟩e`, its
//! inverse, the truncation matrices of `A`, and the cubic example built on
//! top of `A`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{pair_l1_c, EvConstSeq, FinSeq, Linear, Rat};

/// `(Gx)_n = Σ_{k>n} x_k − Σ_{k<n} x_k`.
///
/// For `n` past the support the value is `−⟨x, e⟩`, so the result is
/// eventually constant with at most `max_index(x)` head entries.
pub fn apply_g(x: &FinSeq) -> EvConstSeq {
    let total = x.sum();
    let n = x.max_index();
    let mut before = Rat::zero();
    let mut head = Vec::with_capacity(n);
    for k in 1..=n {
        let xk = x.get(k);
        let after = &total - &before - &xk;
        head.push(&after - &before);
        before += xk;
    }
    EvConstSeq::new(head, -total)
}

/// `A x = G x + ⟨x, e⟩ e`, computed in `c` without assuming the tail
/// cancels.
pub fn apply_a_in_c(x: &FinSeq) -> EvConstSeq {
    apply_g(x).plus(&EvConstSeq::constant(x.sum()))
}

/// `A x = G x + ⟨x, e⟩ e`. The tail of `G x` is `−⟨x, e⟩`, so `A x`
/// converges to zero and is finitely supported within `[1, max_index(x)]`.
pub fn apply_a(x: &FinSeq) -> FinSeq {
    apply_a_in_c(x)
        .to_finseq()
        .expect("A x has zero tail for every finitely supported x")
}

/// Downward recursion for `A x = y` without the final check:
/// `x_N = y_N` and `x_n = (y_n − y_{n+1}) − x_{n+1}`.
pub fn invert_a_recursion(y: &FinSeq) -> FinSeq {
    let n = y.max_index();
    let mut x = vec![Rat::zero(); n];
    for k in (1..=n).rev() {
        x[k - 1] = if k == n {
            y.get(k)
        } else {
            y.get(k) - y.get(k + 1) - &x[k]
        };
    }
    FinSeq::from_dense(&x)
}

/// The unique `x` with `A x = y`.
///
/// `A` is a bijection of the finitely supported model, so the re-check
/// against [`apply_a`] can only fail on an implementation defect.
pub fn solve_a(y: &FinSeq) -> FinSeq {
    let x = invert_a_recursion(y);
    assert_eq!(&apply_a(&x), y, "A·solve_a(y) must reproduce y");
    x
}

/// `⟨A x − A y, x − y⟩`, computed directly from the operator. Equals
/// `⟨x − y, e⟩²`.
pub fn monotonicity_gap(x: &FinSeq, y: &FinSeq) -> Rat {
    let d = x - y;
    let ad = &apply_a(x) - &apply_a(y);
    pair_l1_c(&d, &ad.to_evconst())
}

/// The `n×n` matrix of `A` on `span{δ₁..δₙ}`: 1 on the diagonal, 2 above it.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncMatrix {
    n: usize,
    entries: Vec<Vec<Rat>>,
}

impl TruncMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// 1-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.entries
    }

    /// `M·x` for `x` supported in `[1, n]`; entries beyond `n` are ignored.
    pub fn apply(&self, x: &FinSeq) -> FinSeq {
        let dense = x.to_dense(self.n);
        let out: Vec<Rat> = self
            .entries
            .iter()
            .map(|row| row.iter().zip(&dense).map(|(a, b)| a * b).sum())
            .collect();
        FinSeq::from_dense(&out)
    }

    /// Product of the diagonal. The matrix is upper triangular.
    pub fn triangular_determinant(&self) -> Rat {
        (0..self.n).map(|i| self.entries[i][i].clone()).product()
    }
}

impl fmt::Debug for TruncMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub fn trunc_matrix(n: usize) -> Result<TruncMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let two = Rat::from_integer(2.into());
    let entries = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => two.clone(),
                    std::cmp::Ordering::Equal => Rat::one(),
                    std::cmp::Ordering::Greater => Rat::zero(),
                })
                .collect()
        })
        .collect();
    Ok(TruncMatrix { n, entries })
}

/// A point `((y, t), (x*, s))` of `ℓ∞₀ × ℝ` paired with `ℓ¹ × ℝ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlPoint {
    pub y: FinSeq,
    pub t: Rat,
    pub xstar: FinSeq,
    pub s: Rat,
}

impl NlPoint {
    /// Graph membership for `{((A x*, t), (x*, t³))}`.
    pub fn is_graph_point(&self) -> bool {
        apply_a(&self.xstar) == self.y && self.s == cube(&self.t)
    }

    /// `⟨(x*, s) − (x*', s'), (y, t) − (y', t')⟩`.
    pub fn monotonicity_pairing(&self, other: &NlPoint) -> Rat {
        let dual = &self.xstar - &other.xstar;
        let primal = &self.y - &other.y;
        pair_l1_c(&dual, &primal.to_evconst()) + (&self.s - &other.s) * (&self.t - &other.t)
    }
}

fn cube(t: &Rat) -> Rat {
    t * t * t
}

/// Completes the cubic example's graph point over `(y, t)`:
/// `x* = A⁻¹ y`, `s = t³`.
pub fn apply_nonlinear(y: &FinSeq, t: &Rat) -> NlPoint {
    NlPoint {
        y: y.clone(),
        t: t.clone(),
        xstar: solve_a(y),
        s: cube(t),
    }
}
