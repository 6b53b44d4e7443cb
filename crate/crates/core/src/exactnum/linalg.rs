//! Dense linear algebra over a [`Scalar`] field: rank, row reduction, nullspace, solve.

use super::scalar::{Backend, Scalar};

pub type Matrix<S> = Vec<Vec<S>>;

/// Relative threshold under which a float pivot counts as zero.
const FLOAT_PIVOT_EPS: f64 = 1e-10;

fn scale_of<S: Scalar>(m: &Matrix<S>) -> f64 {
    m.iter().flatten().map(|x| x.modulus()).fold(0.0, f64::max).max(1.0)
}

fn negligible<S: Scalar>(x: &S, scale: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => x.is_zero(),
        Backend::Float => x.modulus() <= FLOAT_PIVOT_EPS * scale,
    }
}

/// Rank by fraction-free (Bareiss) elimination. Over a field the integral
/// divisions are exact, so entries never grow beyond the minors they encode.
pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    if S::BACKEND == Backend::Float {
        return rref(m).1.len();
    }
    let mut a = m.clone();
    let (rows, cols) = (a.len(), a[0].len());
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = a[r][c].mul(&a[i][j]).sub(&a[i][c].mul(&a[r][j]));
                a[i][j] = num.div(&prev).expect("Bareiss pivot is nonzero");
            }
            a[i][c] = S::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form and pivot columns.
pub fn rref<S: Scalar>(m: &Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    if rows == 0 {
        return (a, vec![]);
    }
    let cols = a[0].len();
    let scale = scale_of(m);
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let p = match S::BACKEND {
            Backend::Exact => (r..rows).find(|&i| !a[i][c].is_zero()),
            Backend::Float => (r..rows)
                .max_by(|&x, &y| a[x][c].modulus().partial_cmp(&a[y][c].modulus()).unwrap())
                .filter(|&i| !negligible(&a[i][c], scale)),
        };
        let Some(p) = p else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("pivot is nonzero");
        for j in c..cols {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&a[r][j]);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<S: Scalar>(m: &Matrix<S>, cols: usize) -> Vec<Vec<S>> {
    if m.is_empty() {
        return (0..cols).map(|k| (0..cols).map(|j| if j == k { S::one() } else { S::zero() }).collect()).collect();
    }
    let (a, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = a[r][f].neg();
            }
            v
        })
        .collect()
}

/// Solves `m x = b`; `None` when inconsistent. Free variables are set to zero.
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let aug: Matrix<S> = m.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    let (a, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![S::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][cols].clone();
    }
    Some(x)
}

pub fn mat_vec<S: Scalar>(m: &Matrix<S>, v: &[S]) -> Vec<S> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(S::zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { acc.add(&a.mul(b)) }))
        .collect()
}

pub fn transpose<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::{Cf, Qi};

    fn qm(rows: &[&[i64]]) -> Matrix<Qi> {
        rows.iter().map(|r| r.iter().map(|&x| Qi::from_i64(x)).collect()).collect()
    }

    #[test]
    fn rank_small() {
        assert_eq!(rank(&qm(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&qm(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), 3);
        assert_eq!(rank(&qm(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn complex_rank() {
        let i = Qi::i();
        let m = vec![vec![Qi::one(), i.clone()], vec![i.clone(), Qi::from_i64(-1)]];
        assert_eq!(rank(&m), 1);
        assert_eq!(rref(&m).1.len(), 1);
    }

    #[test]
    fn nullspace_is_kernel() {
        let m = qm(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 4 - rank(&m));
        for v in ns {
            assert!(mat_vec(&m, &v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = qm(&[&[1, 1], &[1, -1]]);
        let x = solve(&m, &[Qi::from_i64(3), Qi::from_i64(1)]).unwrap();
        assert_eq!(x, vec![Qi::from_i64(2), Qi::from_i64(1)]);
        assert!(solve(&qm(&[&[1, 1], &[2, 2]]), &[Qi::one(), Qi::one()]).is_none());
    }

    #[test]
    fn float_rank() {
        let m: Matrix<Cf> = vec![vec![Cf::one(), Cf::from_i64(2)], vec![Cf::from_i64(2), Cf::from_i64(4)]];
        assert_eq!(rank(&m), 1);
    }
}
