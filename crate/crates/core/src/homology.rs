//! Chain spaces `C_k(p̃₊, W)` for the standard and adjoint representations,
//! the Kostant codifferential, the Lie algebra coboundary and homology.
//!
//! A chain of degree `k` stores, for every strictly increasing label tuple
//! `A₁ < … < A_k`, the coefficient vector `ψ_{A₁…A_k} ∈ W` of
//! `ξ*_{A₁} ∧ … ∧ ξ*_{A_k} ⊗ ψ_{A₁…A_k}`. Read as a form on g̃₋ this is the
//! value on `(ξ_{A₁}, …, ξ_{A_k})`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::linalg::{mat_vec, nullspace, rank, Matrix};
use crate::exactnum::{Qi, Scalar};
use crate::liealg::{
    build_algebra, commutator, from_sl_coords, row_grade, sl_basis_grades, sl_coords, xi_coords, xi_star_coords,
    AlgebraContext, BasisTables, Label,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Standard,
    Adjoint,
}

impl std::fmt::Display for RepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RepKind::Standard => "standard",
            RepKind::Adjoint => "adjoint",
        })
    }
}

impl std::str::FromStr for RepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(RepKind::Standard),
            "adjoint" => Ok(RepKind::Adjoint),
            _ => Err(Error::Parameter(format!("unknown representation '{}'", s))),
        }
    }
}

/// A representation of sl(n+2, C) with a graded basis.
///
/// Standard: `C^{n+2}` with components `(s, t^α, u)`; `u` spans the bottom
/// slot `V/V⁰ ≅ E(0,1)`, `s` spans `V¹ = E(-1,0)`.
/// Adjoint: trace-free matrices in the basis of [`crate::liealg::sl_basis`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepSpec {
    pub kind: RepKind,
    pub n: usize,
    /// E-eigenvalue of each basis vector.
    pub grades: Vec<i32>,
}

impl RepSpec {
    pub fn new(kind: RepKind, n: usize) -> Self {
        let grades = match kind {
            RepKind::Standard => (0..n + 2).map(|r| row_grade(n, r)).collect(),
            RepKind::Adjoint => sl_basis_grades(n),
        };
        RepSpec { kind, n, grades }
    }

    pub fn dim(&self) -> usize {
        self.grades.len()
    }

    /// Action of a matrix `x ∈ sl(n+2)` on a coordinate vector.
    pub fn act<S: Scalar>(&self, x: &Matrix<S>, w: &[S]) -> Vec<S> {
        match self.kind {
            RepKind::Standard => mat_vec(x, w),
            RepKind::Adjoint => sl_coords(&commutator(x, &from_sl_coords(self.n + 2, w))),
        }
    }

    /// Matrix of the action of `x` in this basis.
    pub fn action_matrix<S: Scalar>(&self, x: &Matrix<S>) -> Matrix<S> {
        let d = self.dim();
        let cols: Vec<Vec<S>> =
            (0..d).map(|j| self.act(x, &(0..d).map(|i| if i == j { S::one() } else { S::zero() }).collect::<Vec<_>>())).collect();
        (0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    pub fn to_matrix<S: Scalar>(&self, w: &[S]) -> Matrix<S> {
        assert_eq!(self.kind, RepKind::Adjoint);
        from_sl_coords(self.n + 2, w)
    }

    pub fn from_matrix<S: Scalar>(&self, m: &Matrix<S>) -> Vec<S> {
        assert_eq!(self.kind, RepKind::Adjoint);
        sl_coords(m)
    }
}

/// All strictly increasing `k`-tuples from `0..m`, in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..m {
            cur.push(a);
            rec(a + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, m, k, &mut vec![], &mut out);
    out
}

/// Sorts a label tuple, returning the permutation sign, or `None` on a repeat.
pub fn sort_with_sign(t: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = t.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// An element of `Λ^k p̃₊ ⊗ W`.
#[derive(Clone, Debug)]
pub struct Chain<S: Scalar> {
    pub k: usize,
    pub rep: RepSpec,
    /// Keyed by the strictly increasing label tuple; missing keys are zero.
    pub coeffs: BTreeMap<Vec<usize>, Vec<S>>,
}

impl<S: Scalar> Chain<S> {
    pub fn zero(k: usize, rep: &RepSpec) -> Self {
        Chain { k, rep: rep.clone(), coeffs: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.rep.n
    }

    /// Coefficient vector at a tuple given in any order (antisymmetry applied).
    pub fn get(&self, tuple: &[usize]) -> Vec<S> {
        let d = self.rep.dim();
        match sort_with_sign(tuple) {
            None => vec![S::zero(); d],
            Some((t, sign)) => match self.coeffs.get(&t) {
                None => vec![S::zero(); d],
                Some(v) => v.iter().map(|x| if sign < 0 { x.neg() } else { x.clone() }).collect(),
            },
        }
    }

    /// Adds `w` to the coefficient at `tuple` (any order).
    pub fn add_at(&mut self, tuple: &[usize], w: &[S]) {
        let Some((t, sign)) = sort_with_sign(tuple) else { return };
        let d = self.rep.dim();
        let e = self.coeffs.entry(t).or_insert_with(|| vec![S::zero(); d]);
        for (x, y) in e.iter_mut().zip(w) {
            if sign < 0 {
                *x = x.sub(y);
            } else {
                x.add_assign(y);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().flatten().all(|x| x.is_zero())
    }

    pub fn flatten(&self) -> Vec<S> {
        let d = self.rep.dim();
        let mut out = vec![];
        for t in subsets(2 * self.n() + 1, self.k) {
            match self.coeffs.get(&t) {
                Some(v) => out.extend(v.iter().cloned()),
                None => out.extend(std::iter::repeat(S::zero()).take(d)),
            }
        }
        out
    }

    pub fn from_flat(k: usize, rep: &RepSpec, v: &[S]) -> Self {
        let d = rep.dim();
        let mut c = Chain::zero(k, rep);
        for (i, t) in subsets(2 * rep.n + 1, k).into_iter().enumerate() {
            let w = &v[i * d..(i + 1) * d];
            if w.iter().any(|x| !x.is_zero()) {
                c.coeffs.insert(t, w.to_vec());
            }
        }
        c
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, w) in &o.coeffs {
            let neg: Vec<S> = w.iter().map(|x| x.neg()).collect();
            out.add_at(t, &neg);
        }
        out
    }

    /// Homogeneities present with a nonzero coefficient.
    pub fn homogeneities(&self) -> Vec<i32> {
        let mut hs = vec![];
        for (t, w) in &self.coeffs {
            let g: i32 = t.iter().map(|&a| Label::from_index(self.n(), a).grade()).sum();
            for (j, x) in w.iter().enumerate() {
                if !x.is_zero() && !hs.contains(&(g + self.rep.grades[j])) {
                    hs.push(g + self.rep.grades[j]);
                }
            }
        }
        hs.sort();
        hs
    }
}

impl<S: Scalar> PartialEq for Chain<S> {
    fn eq(&self, o: &Self) -> bool {
        self.k == o.k && self.rep == o.rep && self.flatten() == o.flatten()
    }
}

/// Homogeneity of the basis monomial `(tuple, rep index)`.
pub fn homogeneity(rep: &RepSpec, tuple: &[usize], j: usize) -> i32 {
    tuple.iter().map(|&a| Label::from_index(rep.n, a).grade()).sum::<i32>() + rep.grades[j]
}

/// Precomputed algebra data for chain operations.
pub struct ChainContext<S: Scalar> {
    pub ctx: AlgebraContext<S>,
    pub basis: BasisTables<S>,
    pub rep: RepSpec,
    /// `[ξ*_A, ξ*_B]` in ξ* coordinates.
    star_brackets: Vec<Vec<Vec<S>>>,
    /// `[ξ_A, ξ_B]` in ξ coordinates (g̃₋ is a subalgebra).
    neg_brackets: Vec<Vec<Vec<S>>>,
    /// Action matrices of ξ*_A and ξ_A on the representation.
    star_action: Vec<Matrix<S>>,
    neg_action: Vec<Matrix<S>>,
}

impl<S: Scalar> ChainContext<S> {
    pub fn new(kind: RepKind, n: usize) -> Result<Self> {
        let (ctx, basis) = build_algebra::<S>(n)?;
        let rep = RepSpec::new(kind, n);
        let m = 2 * n + 1;
        let star_brackets = (0..m)
            .map(|a| (0..m).map(|b| xi_star_coords(&ctx, &basis, &commutator(&basis.xi_star[a], &basis.xi_star[b]))).collect())
            .collect();
        let neg_brackets = (0..m)
            .map(|a| (0..m).map(|b| xi_coords(&ctx, &basis, &commutator(&basis.xi[a], &basis.xi[b]))).collect())
            .collect();
        let star_action = basis.xi_star.iter().map(|z| rep.action_matrix(z)).collect();
        let neg_action = basis.xi.iter().map(|x| rep.action_matrix(x)).collect();
        Ok(ChainContext { ctx, basis, rep, star_brackets, neg_brackets, star_action, neg_action })
    }

    pub fn n(&self) -> usize {
        self.ctx.n
    }

    pub fn labels(&self) -> usize {
        2 * self.n() + 1
    }

    /// Kostant codifferential. Action terms carry `(-1)^{i+k}`, bracket terms `(-1)^{i+j+k}`
    /// (1-based positions), which squares to zero and reproduces the explicit low-degree tables.
    pub fn codifferential(&self, c: &Chain<S>) -> Chain<S> {
        let k = c.k;
        if k == 0 {
            return Chain::zero(0, &self.rep);
        }
        let mut out = Chain::zero(k - 1, &self.rep);
        for (t, w) in &c.coeffs {
            for i in 0..k {
                let sign = if (i + 1 + k) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = t.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &a)| a).collect();
                let mut aw = mat_vec(&self.star_action[t[i]], w);
                if sign < 0 {
                    aw = aw.iter().map(|x| x.neg()).collect();
                }
                out.add_at(&rest, &aw);
            }
            for i in 0..k {
                for j in i + 1..k {
                    let sign = if (i + j + 2 + k) % 2 == 0 { 1 } else { -1 };
                    let rest: Vec<usize> = t.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &a)| a).collect();
                    for (cidx, coef) in self.star_brackets[t[i]][t[j]].iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        let f = if sign < 0 { coef.neg() } else { coef.clone() };
                        let mut tuple = vec![cidx];
                        tuple.extend(&rest);
                        let scaled: Vec<S> = w.iter().map(|x| x.mul(&f)).collect();
                        out.add_at(&tuple, &scaled);
                    }
                }
            }
        }
        out
    }

    /// The duality formulas: `∂*ψ = Σ_A ξ*_A·ψ(ξ_A)` for `k = 1` and
    /// `∂*φ(X) = 2Σ_A ξ*_A·φ(X, ξ_A) - Σ_A φ([ξ*_A, X], ξ_A)` for `k = 2`, where the
    /// 2-form is evaluated with the ½-normalized wedge.
    pub fn codifferential_dual(&self, c: &Chain<S>) -> Result<Chain<S>> {
        let m = self.labels();
        match c.k {
            1 => {
                let mut out = Chain::zero(0, &self.rep);
                for a in 0..m {
                    out.add_at(&[], &mat_vec(&self.star_action[a], &c.get(&[a])));
                }
                Ok(out)
            }
            2 => {
                let half = S::ratio(1, 2);
                let phi = |x: usize, y: usize| -> Vec<S> { c.get(&[x, y]).iter().map(|v| v.mul(&half)).collect() };
                let mut out = Chain::zero(1, &self.rep);
                for d in 0..m {
                    let mut acc = vec![S::zero(); self.rep.dim()];
                    for a in 0..m {
                        let t = mat_vec(&self.star_action[a], &phi(d, a));
                        for (x, y) in acc.iter_mut().zip(&t) {
                            *x = x.add(&y.mul(&S::from_i64(2)));
                        }
                        let br = xi_coords(&self.ctx, &self.basis, &commutator(&self.basis.xi_star[a], &self.basis.xi[d]));
                        for (e, coef) in br.iter().enumerate() {
                            if coef.is_zero() {
                                continue;
                            }
                            for (x, y) in acc.iter_mut().zip(phi(e, a)) {
                                *x = x.sub(&y.mul(coef));
                            }
                        }
                    }
                    out.add_at(&[d], &acc);
                }
                Ok(out)
            }
            k => Err(Error::Unsupported(format!("duality formula for degree {}", k))),
        }
    }

    /// Chevalley–Eilenberg coboundary of g̃₋ with values in W, on chains read as forms on g̃₋.
    pub fn coboundary(&self, c: &Chain<S>) -> Chain<S> {
        let k = c.k;
        let m = self.labels();
        let mut out = Chain::zero(k + 1, &self.rep);
        for t in subsets(m, k + 1) {
            let mut acc = vec![S::zero(); self.rep.dim()];
            for i in 0..=k {
                let rest: Vec<usize> = t.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &a)| a).collect();
                let v = mat_vec(&self.neg_action[t[i]], &c.get(&rest));
                let neg = i % 2 == 1;
                for (x, y) in acc.iter_mut().zip(&v) {
                    *x = if neg { x.sub(y) } else { x.add(y) };
                }
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let neg = (i + j) % 2 == 1;
                    let rest: Vec<usize> = t.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &a)| a).collect();
                    for (e, coef) in self.neg_brackets[t[i]][t[j]].iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        let mut tuple = vec![e];
                        tuple.extend(&rest);
                        let v = c.get(&tuple);
                        for (x, y) in acc.iter_mut().zip(&v) {
                            let yc = y.mul(coef);
                            *x = if neg { x.sub(&yc) } else { x.add(&yc) };
                        }
                    }
                }
            }
            if acc.iter().any(|x| !x.is_zero()) {
                out.coeffs.insert(t, acc);
            }
        }
        out
    }

    pub fn chain_dim(&self, k: usize) -> usize {
        subsets(self.labels(), k).len() * self.rep.dim()
    }

    /// Matrix of ∂* : C_k → C_{k-1} in flattened coordinates.
    pub fn codifferential_matrix(&self, k: usize) -> Matrix<S> {
        self.operator_matrix(k, k.saturating_sub(1), |c| self.codifferential(c))
    }

    pub fn coboundary_matrix(&self, k: usize) -> Matrix<S> {
        self.operator_matrix(k, k + 1, |c| self.coboundary(c))
    }

    fn operator_matrix(&self, k: usize, target: usize, op: impl Fn(&Chain<S>) -> Chain<S>) -> Matrix<S> {
        let cols = self.chain_dim(k);
        let rows = if k == 0 && target == 0 { 0 } else { self.chain_dim(target) };
        let mut m = vec![vec![S::zero(); cols]; rows];
        if rows == 0 {
            return m;
        }
        for j in 0..cols {
            let mut e = vec![S::zero(); cols];
            e[j] = S::one();
            let img = op(&Chain::from_flat(k, &self.rep, &e)).flatten();
            for (i, v) in img.into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        m
    }

    /// Basis monomials of C_k of a given homogeneity (flattened indices).
    pub fn homogeneity_indices(&self, k: usize, l: i32) -> Vec<usize> {
        let d = self.rep.dim();
        let mut out = vec![];
        for (i, t) in subsets(self.labels(), k).iter().enumerate() {
            for j in 0..d {
                if homogeneity(&self.rep, t, j) == l {
                    out.push(i * d + j);
                }
            }
        }
        out
    }
}

/// Components of the H₁ slices, as functions of a 1-chain.
///
/// Standard: `(u_σ)` then `t_{(ᾱβ̄)}` for `α ≤ β`. Adjoint: `X_{(αβ)}` then `X_{(ᾱβ̄)}` for `α ≤ β`,
/// where `X_{βA}` is minus the bottom-row entry and `X^α_A` the middle-left entry.
pub fn h1_projection<S: Scalar>(c: &Chain<S>) -> Vec<S> {
    let n = c.n();
    let half = S::ratio(1, 2);
    let hol = |s: usize| Label::Holo(s).index(n);
    let ahol = |s: usize| Label::AntiHolo(s).index(n);
    let mut out = vec![];
    match c.rep.kind {
        RepKind::Standard => {
            for s in 0..n {
                out.push(c.get(&[hol(s)])[n + 1].clone());
            }
            for a in 0..n {
                for b in a..n {
                    // t_{ᾱβ̄} = t^α at slot β̄ (Levi form δ)
                    let v = c.get(&[ahol(b)])[1 + a].add(&c.get(&[ahol(a)])[1 + b]);
                    out.push(v.mul(&half));
                }
            }
        }
        RepKind::Adjoint => {
            let l = n + 1;
            let ent = |slot: usize, r: usize, col: usize| -> S { c.rep.to_matrix(&c.get(&[slot]))[r][col].clone() };
            for a in 0..n {
                for b in a..n {
                    let v = ent(hol(b), l, 1 + a).add(&ent(hol(a), l, 1 + b));
                    out.push(v.mul(&half).neg());
                }
            }
            for a in 0..n {
                for b in a..n {
                    let v = ent(ahol(b), 1 + a, 0).add(&ent(ahol(a), 1 + b, 0));
                    out.push(v.mul(&half));
                }
            }
        }
    }
    out
}

/// Standard representatives of H₁: one slice chain per projection component.
pub fn h1_representatives<S: Scalar>(rep: &RepSpec) -> Vec<Chain<S>> {
    let n = rep.n;
    let d = rep.dim();
    let hol = |s: usize| Label::Holo(s).index(n);
    let ahol = |s: usize| Label::AntiHolo(s).index(n);
    let mut out = vec![];
    let vec_with = |entries: &[(usize, S)]| {
        let mut v = vec![S::zero(); d];
        for (i, x) in entries {
            v[*i] = x.clone();
        }
        v
    };
    match rep.kind {
        RepKind::Standard => {
            for s in 0..n {
                let mut c = Chain::zero(1, rep);
                c.add_at(&[hol(s)], &vec_with(&[(n + 1, S::one())]));
                out.push(c);
            }
            for a in 0..n {
                for b in a..n {
                    let mut c = Chain::zero(1, rep);
                    c.add_at(&[ahol(b)], &vec_with(&[(1 + a, S::one())]));
                    if a != b {
                        c.add_at(&[ahol(a)], &vec_with(&[(1 + b, S::one())]));
                    }
                    out.push(c);
                }
            }
        }
        RepKind::Adjoint => {
            let l = n + 1;
            let mat_at = |r: usize, col: usize, v: S| {
                let mut m = crate::liealg::zeros::<S>(n + 2);
                m[r][col] = v;
                sl_coords(&m)
            };
            for a in 0..n {
                for b in a..n {
                    let mut c = Chain::zero(1, rep);
                    c.add_at(&[hol(b)], &mat_at(l, 1 + a, S::from_i64(-1)));
                    if a != b {
                        c.add_at(&[hol(a)], &mat_at(l, 1 + b, S::from_i64(-1)));
                    }
                    out.push(c);
                }
            }
            for a in 0..n {
                for b in a..n {
                    let mut c = Chain::zero(1, rep);
                    c.add_at(&[ahol(b)], &mat_at(1 + a, 0, S::one()));
                    if a != b {
                        c.add_at(&[ahol(a)], &mat_at(1 + b, 0, S::one()));
                    }
                    out.push(c);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityRow {
    pub homogeneity: i32,
    pub kernel: usize,
    pub image: usize,
    pub homology: usize,
}

/// Exact homology of `C_•(p̃₊, W)` in degree `k ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub rep: RepKind,
    pub n: usize,
    pub k: usize,
    pub chain_dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub homology_dim: usize,
    pub by_homogeneity: Vec<HomogeneityRow>,
    /// Representatives in the standard slices, as `(tuple names, rep index, coefficient)` lists.
    pub representatives: Vec<Vec<(String, usize, String)>>,
    /// Names of the projection components.
    pub projection: Vec<String>,
    /// Projection kills the image, is injective on representatives, and representatives are cycles.
    pub projection_checked: bool,
}

fn chain_listing<S: Scalar>(c: &Chain<S>) -> Vec<(String, usize, String)> {
    let n = c.n();
    let mut out = vec![];
    for (t, w) in &c.coeffs {
        let name: Vec<String> = t.iter().map(|&a| Label::from_index(n, a).name()).collect();
        for (j, x) in w.iter().enumerate() {
            if !x.is_zero() {
                out.push((name.join(","), j, x.to_string()));
            }
        }
    }
    out
}

fn submatrix<S: Scalar>(m: &Matrix<S>, rows: &[usize], cols: &[usize]) -> Matrix<S> {
    rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect()
}

pub fn homology_space(k: usize, kind: RepKind, n: usize) -> Result<HomologyReport> {
    if k >= 2 {
        return Err(Error::Unsupported(format!("homology in degree {}", k)));
    }
    let cc = ChainContext::<Qi>::new(kind, n)?;
    let dk = cc.codifferential_matrix(k);
    let dk1 = cc.codifferential_matrix(k + 1);
    let chain_dim = cc.chain_dim(k);
    let mut rows_out = vec![];
    let (mut kt, mut it) = (0, 0);
    for l in -3..=6 {
        let idx = cc.homogeneity_indices(k, l);
        if idx.is_empty() {
            continue;
        }
        let kernel = if k == 0 {
            idx.len()
        } else {
            let tgt = cc.homogeneity_indices(k - 1, l);
            idx.len() - rank(&submatrix(&dk, &tgt, &idx))
        };
        let src = cc.homogeneity_indices(k + 1, l);
        let image = rank(&submatrix(&dk1, &idx, &src));
        kt += kernel;
        it += image;
        rows_out.push(HomogeneityRow { homogeneity: l, kernel, image, homology: kernel - image });
    }
    let reps: Vec<Chain<Qi>> = if k == 0 {
        let mut v = vec![Qi::zero(); cc.rep.dim()];
        match kind {
            RepKind::Standard => v[n + 1] = Qi::one(),
            RepKind::Adjoint => v = sl_coords(&cc.basis.xi[0]),
        }
        vec![Chain::from_flat(0, &cc.rep, &v)]
    } else {
        h1_representatives(&cc.rep)
    };
    let projection: Vec<String> = match (k, kind) {
        (0, RepKind::Standard) => vec!["u".into()],
        (0, RepKind::Adjoint) => vec!["x".into()],
        (_, kind) => {
            let mut names = vec![];
            let sym = |p: &'static str| {
                (0..n).flat_map(move |a| (a..n).map(move |b| (a, b))).map(move |(a, b)| format!("{}({}{})", p, a + 1, b + 1))
            };
            match kind {
                RepKind::Standard => {
                    names.extend((0..n).map(|s| format!("u_{}", s + 1)));
                    names.extend(sym("t_bar"));
                }
                RepKind::Adjoint => {
                    names.extend(sym("X_"));
                    names.extend(sym("X_bar"));
                }
            }
            names
        }
    };
    let projection_checked = if k == 0 {
        // H₀ = C₀/im ∂*₁: the projection reads the slot the image never reaches
        let slot = match kind {
            RepKind::Standard => n + 1,
            RepKind::Adjoint => cc.rep.from_matrix(&crate::liealg::unit(n + 2, n + 1, 0, Qi::one())).iter().position(|x| !x.is_zero()).unwrap(),
        };
        dk1[slot].iter().all(|x| x.is_zero()) && reps.iter().all(|r| !r.flatten()[slot].is_zero())
    } else {
        let kills_image = (0..dk1[0].len()).all(|j| {
            let col: Vec<Qi> = dk1.iter().map(|r| r[j].clone()).collect();
            h1_projection(&Chain::from_flat(1, &cc.rep, &col)).iter().all(|x| x.is_zero())
        });
        let proj_rows: Matrix<Qi> = reps.iter().map(h1_projection).collect();
        let injective = rank(&proj_rows) == reps.len();
        let cycles = reps.iter().all(|r| cc.codifferential(r).is_zero());
        kills_image && injective && cycles && reps.len() == kt - it
    };
    Ok(HomologyReport {
        rep: kind,
        n,
        k,
        chain_dim,
        kernel_dim: kt,
        image_dim: it,
        homology_dim: kt - it,
        by_homogeneity: rows_out,
        representatives: reps.iter().map(chain_listing).collect(),
        projection,
        projection_checked,
    })
}

/// Nullspace of ∂*_k as chains.
pub fn kernel_basis(cc: &ChainContext<Qi>, k: usize) -> Vec<Chain<Qi>> {
    let m = cc.codifferential_matrix(k);
    nullspace(&m, cc.chain_dim(k)).into_iter().map(|v| Chain::from_flat(k, &cc.rep, &v)).collect()
}

#[cfg(test)]
mod tests;
