//! Dense exact linear algebra used as an independent cross-check of the
//! closed forms: determinants, linear solves, and suprema of explicit
//! concave quadratics.

use num_traits::{One, Zero};

use crate::exact::Rat;

/// Determinant by Gaussian elimination with row exchanges.
pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot_row = a[k].clone();
        let pivot = &pivot_row[k];
        det *= pivot;
        for row in &mut a[k + 1..] {
            if row[k].is_zero() {
                continue;
            }
            let f = &row[k] / pivot;
            for (v, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *v -= &f * p;
            }
        }
    }
    det
}

/// Determinants of the leading principal submatrices, orders `1..=n`,
/// produced lazily.
///
/// Uses fraction-free (Bareiss) elimination, where after step `k` the pivot
/// is the order-`k+1` leading minor. Once a pivot vanishes the remaining
/// orders fall back to [`determinant`].
pub fn leading_principal_minors(m: &[Vec<Rat>]) -> LeadingMinors<'_> {
    LeadingMinors {
        original: m,
        work: m.to_vec(),
        prev: Rat::one(),
        k: 0,
        broken: false,
    }
}

pub struct LeadingMinors<'a> {
    original: &'a [Vec<Rat>],
    work: Vec<Vec<Rat>>,
    prev: Rat,
    k: usize,
    broken: bool,
}

impl Iterator for LeadingMinors<'_> {
    type Item = Rat;

    fn next(&mut self) -> Option<Rat> {
        let n = self.original.len();
        let k = self.k;
        if k >= n {
            return None;
        }
        self.k += 1;
        if self.broken {
            let sub: Vec<Vec<Rat>> = self.original[..=k].iter().map(|r| r[..=k].to_vec()).collect();
            return Some(determinant(&sub));
        }
        let a = &mut self.work;
        let pivot = a[k][k].clone();
        if pivot.is_zero() {
            self.broken = true;
            return Some(pivot);
        }
        for i in k + 1..n {
            if a[i][k].is_zero() && pivot == self.prev {
                continue;
            }
            for j in k + 1..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &self.prev;
                a[i][j] = v;
            }
        }
        self.prev = pivot.clone();
        Some(pivot)
    }
}

/// Some solution of `a·x = b`, with free variables set to zero, or `None`
/// if the system is inconsistent.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = Rat::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Supremum of `q(x) = cᵀx + ½ xᵀHx` over `ℚⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadraticSup {
    Finite { value: Rat, argmax: Vec<Rat> },
    Unbounded,
}

/// For negative semidefinite `H` the supremum is finite exactly when
/// `H x = −c` is solvable, and then any solution is a maximiser with value
/// `½ cᵀx`. The caller is responsible for `H ⪯ 0`.
pub fn sup_concave_quadratic(hessian: &[Vec<Rat>], linear: &[Rat]) -> QuadraticSup {
    let rhs: Vec<Rat> = linear.iter().map(|v| -v).collect();
    match solve(hessian, &rhs) {
        None => QuadraticSup::Unbounded,
        Some(x) => {
            let value: Rat = linear.iter().zip(&x).map(|(c, xi)| c * xi).sum::<Rat>()
                / Rat::from_integer(2.into());
            QuadraticSup::Finite { value, argmax: x }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn determinant_with_swaps() {
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]])), int(18));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), int(0));
    }

    #[test]
    fn minors_match_direct_determinants() {
        let m = mat(&[&[2, 1, 0, 5], &[1, 3, 1, -1], &[0, 1, 4, 2], &[3, 0, 1, 1]]);
        let minors: Vec<Rat> = leading_principal_minors(&m).collect();
        for (k, minor) in minors.iter().enumerate() {
            let sub: Vec<Vec<Rat>> = m[..=k].iter().map(|r| r[..=k].to_vec()).collect();
            assert_eq!(minor, &determinant(&sub));
        }
        let singular = mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(leading_principal_minors(&singular).collect::<Vec<_>>(), vec![int(0), int(-1), int(-3)]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = mat(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[int(2), int(2)]), Some(vec![int(2), int(0)]));
        assert_eq!(solve(&a, &[int(2), int(3)]), None);
        let a = mat(&[&[2, 1], &[1, 3]]);
        assert_eq!(solve(&a, &[int(3), int(4)]), Some(vec![int(1), int(1)]));
    }

    #[test]
    fn scalar_quadratic() {
        // t − t², maximised at 1/2 with value 1/4
        let h = vec![vec![int(-2)]];
        assert_eq!(
            sup_concave_quadratic(&h, &[int(1)]),
            QuadraticSup::Finite { value: rat(1, 4), argmax: vec![rat(1, 2)] }
        );
    }
}
