//! Independent rank oracle: builds ∂* from raw matrices over Z/p with `i = √-1`,
//! using an unrelated basis of the adjoint representation.
use tractor_core::homology::{sort_with_sign, subsets};

pub mod modp {
    pub const P: i64 = 10009;

    pub fn norm(x: i64) -> i64 {
        x.rem_euclid(P)
    }
    pub fn pow(mut b: i64, mut e: i64) -> i64 {
        let mut r = 1;
        b = norm(b);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        r
    }
    pub fn inv(x: i64) -> i64 {
        pow(x, P - 2)
    }
    pub fn sqrt_minus_one() -> i64 {
        (2..P).map(|g| pow(g, (P - 1) / 4)).find(|&r| r * r % P == P - 1).unwrap()
    }
    pub fn rank(mut m: Vec<Vec<i64>>) -> usize {
        let rows = m.len();
        if rows == 0 {
            return 0;
        }
        let cols = m[0].len();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, p);
            let iv = inv(m[r][c]);
            for i in r + 1..rows {
                let f = m[i][c] * iv % P;
                if f != 0 {
                    for j in c..cols {
                        m[i][j] = norm(m[i][j] - f * m[r][j]);
                    }
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }
    pub type M = Vec<Vec<i64>>;
    pub fn mul(a: &M, b: &M) -> M {
        let d = a.len();
        (0..d).map(|i| (0..d).map(|j| (0..d).fold(0, |s, k| (s + a[i][k] * b[k][j]) % P)).collect()).collect()
    }
    pub fn comm(a: &M, b: &M) -> M {
        let (x, y) = (mul(a, b), mul(b, a));
        x.iter().zip(&y).map(|(r, s)| r.iter().zip(s).map(|(u, v)| norm(u - v)).collect()).collect()
    }
}

pub struct Oracle {
    pub n: usize,
    pub d: usize,
    pub i: i64,
    pub adjoint: bool,
}

impl Oracle {
    pub fn new(n: usize, adjoint: bool) -> Self {
        Oracle { n, d: n + 2, i: modp::sqrt_minus_one(), adjoint }
    }
    fn xi_star(&self, a: usize) -> modp::M {
        let (n, d) = (self.n, self.d);
        let c = modp::inv(2 * (n as i64 + 2));
        let mut m = vec![vec![0; d]; d];
        if a == 0 {
            m[0][d - 1] = modp::norm(-self.i * c);
        } else if a <= n {
            m[0][a] = c;
        } else {
            m[a - n][d - 1] = modp::norm(-c);
        }
        m
    }
    /// Reads a p₊ matrix back in the ξ* basis from its entries.
    fn star_coords(&self, m: &modp::M) -> Vec<i64> {
        let (n, d) = (self.n, self.d);
        let c2 = 2 * (n as i64 + 2);
        let mut v = vec![modp::norm(m[0][d - 1] * c2 % modp::P * modp::inv(-self.i))];
        for s in 1..=n {
            v.push(modp::norm(m[0][s] * c2));
        }
        for s in 1..=n {
            v.push(modp::norm(-m[s][d - 1] * c2));
        }
        v
    }
    fn rep_dim(&self) -> usize {
        if self.adjoint {
            self.d * self.d - 1
        } else {
            self.d
        }
    }
    /// Adjoint basis: all entries except the last diagonal one, which is minus the diagonal sum.
    fn to_mat(&self, w: &[i64]) -> modp::M {
        let d = self.d;
        let mut m = vec![vec![0; d]; d];
        let mut t = 0;
        for k in 0..d * d - 1 {
            m[k / d][k % d] = w[k];
            if k / d == k % d {
                t += w[k];
            }
        }
        m[d - 1][d - 1] = modp::norm(-t);
        m
    }
    fn act(&self, x: &modp::M, w: &[i64]) -> Vec<i64> {
        if self.adjoint {
            let r = modp::comm(x, &self.to_mat(w));
            (0..self.d * self.d - 1).map(|k| r[k / self.d][k % self.d]).collect()
        } else {
            (0..self.d).map(|i| (0..self.d).fold(0, |s, j| (s + x[i][j] * w[j]) % modp::P)).collect()
        }
    }
    fn grade_row(&self, r: usize) -> i32 {
        if r == 0 {
            1
        } else if r == self.d - 1 {
            -1
        } else {
            0
        }
    }
    fn rep_grade(&self, j: usize) -> i32 {
        if self.adjoint {
            let (r, c) = (j / self.d, j % self.d);
            if r == c {
                0
            } else {
                self.grade_row(r) - self.grade_row(c)
            }
        } else {
            self.grade_row(j)
        }
    }
    fn label_grade(&self, a: usize) -> i32 {
        if a == 0 {
            2
        } else {
            1
        }
    }
    fn basis(&self, k: usize) -> Vec<(Vec<usize>, usize)> {
        let mut out = vec![];
        for t in subsets(2 * self.n + 1, k) {
            for j in 0..self.rep_dim() {
                out.push((t.clone(), j));
            }
        }
        out
    }
    fn hom(&self, b: &(Vec<usize>, usize)) -> i32 {
        b.0.iter().map(|&a| self.label_grade(a)).sum::<i32>() + self.rep_grade(b.1)
    }
    /// ∂*_k restricted to homogeneity `l`.
    fn matrix(&self, k: usize, l: i32) -> (Vec<Vec<i64>>, usize, usize) {
        let src: Vec<_> = self.basis(k).into_iter().filter(|b| self.hom(b) == l).collect();
        let tgt: Vec<_> = if k == 0 { vec![] } else { self.basis(k - 1).into_iter().filter(|b| self.hom(b) == l).collect() };
        let mut m = vec![vec![0i64; src.len()]; tgt.len()];
        let find = |t: &[usize], j: usize| tgt.iter().position(|b| b.0 == t && b.1 == j);
        let put = |m: &mut Vec<Vec<i64>>, col: usize, tuple: Vec<usize>, w: Vec<i64>, sign: i64| {
            let Some((t, s)) = sort_with_sign(&tuple) else { return };
            for (j, x) in w.iter().enumerate() {
                if *x != 0 {
                    let row = find(&t, j).expect("homogeneity preserved");
                    m[row][col] = modp::norm(m[row][col] + sign * s * x);
                }
            }
        };
        for (col, (t, j)) in src.iter().enumerate() {
            let mut w = vec![0; self.rep_dim()];
            w[*j] = 1;
            for p in 0..k {
                let sign = if (p + 1 + k) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = t.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &a)| a).collect();
                put(&mut m, col, rest, self.act(&self.xi_star(t[p]), &w), sign);
            }
            for p in 0..k {
                for q in p + 1..k {
                    let sign = if (p + q + 2 + k) % 2 == 0 { 1 } else { -1 };
                    let br = self.star_coords(&modp::comm(&self.xi_star(t[p]), &self.xi_star(t[q])));
                    let rest: Vec<usize> = t.iter().enumerate().filter(|&(r, _)| r != p && r != q).map(|(_, &a)| a).collect();
                    for (c, coef) in br.iter().enumerate() {
                        if *coef != 0 {
                            let mut tuple = vec![c];
                            tuple.extend(&rest);
                            put(&mut m, col, tuple, w.iter().map(|x| x * coef % modp::P).collect(), sign);
                        }
                    }
                }
            }
        }
        (m, src.len(), tgt.len())
    }
    pub fn homology(&self, k: usize, l: i32) -> usize {
        let (dk, src, _) = self.matrix(k, l);
        let kernel = src - modp::rank(dk);
        let (dk1, _, _) = self.matrix(k + 1, l);
        kernel - modp::rank(dk1)
    }
}

