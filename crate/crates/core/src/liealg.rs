//! The |2|-graded Lie algebra su(n+1,1) inside sl(n+2, C).
//!
//! Matrices are indexed from 0; row/column 0 is the top block, `1..=n` the
//! middle block and `n+1` the bottom block. Basis labels follow the order
//! `0, 1..n, 1̄..n̄`, stored as `0`, `1..=n`, `n+1..=2n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::linalg::Matrix;
use crate::exactnum::Scalar;

/// Matrix size `(n+2)` and basis-label helpers for a fixed `n`.
#[derive(Clone, Debug)]
pub struct AlgebraContext<S: Scalar> {
    pub n: usize,
    pub hermitian_form: Matrix<S>,
    pub grading_element: Matrix<S>,
}

/// Which part of the label set `{0, σ, σ̄}` a basis label belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    Zero,
    Holo(usize),
    AntiHolo(usize),
}

impl Label {
    pub fn from_index(n: usize, a: usize) -> Label {
        match a {
            0 => Label::Zero,
            a if a <= n => Label::Holo(a - 1),
            a => Label::AntiHolo(a - n - 1),
        }
    }

    pub fn index(self, n: usize) -> usize {
        match self {
            Label::Zero => 0,
            Label::Holo(s) => s + 1,
            Label::AntiHolo(s) => s + n + 1,
        }
    }

    /// Grade of `ξ*_A` in p₊ (equivalently minus the grade of `ξ_A`).
    pub fn grade(self) -> i32 {
        match self {
            Label::Zero => 2,
            _ => 1,
        }
    }

    pub fn conj(self) -> Label {
        match self {
            Label::Zero => Label::Zero,
            Label::Holo(s) => Label::AntiHolo(s),
            Label::AntiHolo(s) => Label::Holo(s),
        }
    }

    pub fn name(self) -> String {
        match self {
            Label::Zero => "0".into(),
            Label::Holo(s) => format!("{}", s + 1),
            Label::AntiHolo(s) => format!("{}b", s + 1),
        }
    }
}

/// A trace-free matrix together with its grade components `X_{-2} … X_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedElement<S: Scalar> {
    pub matrix: Matrix<S>,
    /// `components[i + 2]` is the grade-`i` part.
    pub components: Vec<Matrix<S>>,
}

/// The bases ξ_A of g̃₋, ζ^A of p̃₊ and the Killing-dual basis ξ*_A.
#[derive(Clone, Debug)]
pub struct BasisTables<S: Scalar> {
    pub xi: Vec<Matrix<S>>,
    pub zeta: Vec<Matrix<S>>,
    pub xi_star: Vec<Matrix<S>>,
}

/// E-eigenvalue of the standard basis vector `e_r`.
pub fn row_grade(n: usize, r: usize) -> i32 {
    if r == 0 {
        1
    } else if r == n + 1 {
        -1
    } else {
        0
    }
}

pub fn zeros<S: Scalar>(d: usize) -> Matrix<S> {
    vec![vec![S::zero(); d]; d]
}

pub fn unit<S: Scalar>(d: usize, r: usize, c: usize, v: S) -> Matrix<S> {
    let mut m = zeros(d);
    m[r][c] = v;
    m
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let d = a.len();
    let mut out: Matrix<S> = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !b[k][j].is_zero() {
                    out[i][j].add_assign(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

pub fn mat_add<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect()).collect()
}

pub fn mat_sub<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect()).collect()
}

pub fn mat_scale<S: Scalar>(a: &Matrix<S>, s: &S) -> Matrix<S> {
    a.iter().map(|r| r.iter().map(|x| x.mul(s)).collect()).collect()
}

pub fn commutator<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

pub fn trace<S: Scalar>(a: &Matrix<S>) -> S {
    (0..a.len()).fold(S::zero(), |acc, i| acc.add(&a[i][i]))
}

pub fn is_zero_matrix<S: Scalar>(a: &Matrix<S>) -> bool {
    a.iter().flatten().all(|x| x.is_zero())
}

impl<S: Scalar> AlgebraContext<S> {
    pub fn dim(&self) -> usize {
        self.n + 2
    }

    /// Real dimension of su(n+1,1).
    pub fn real_dim(&self) -> usize {
        self.dim() * self.dim() - 1
    }

    /// Complex dimensions of the grade pieces g̃_{-2} … g̃_2.
    pub fn grade_dims(&self) -> [usize; 5] {
        let n = self.n;
        [1, 2 * n, n * n + 1, 2 * n, 1]
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..=2 * self.n).map(|a| Label::from_index(self.n, a)).collect()
    }

    pub fn graded(&self, m: Matrix<S>) -> Result<GradedElement<S>> {
        let d = self.dim();
        if m.len() != d || m.iter().any(|r| r.len() != d) {
            return Err(Error::Shape(format!("expected a {}x{} matrix", d, d)));
        }
        let mut components = vec![zeros(d); 5];
        for r in 0..d {
            for c in 0..d {
                let g = row_grade(self.n, r) - row_grade(self.n, c);
                components[(g + 2) as usize][r][c] = m[r][c].clone();
            }
        }
        Ok(GradedElement { matrix: m, components })
    }
}

/// Builds the algebra and its bases for CR dimension `n ≥ 1`.
pub fn build_algebra<S: Scalar>(n: usize) -> Result<(AlgebraContext<S>, BasisTables<S>)> {
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    let d = n + 2;
    let mut hermitian_form = zeros(d);
    hermitian_form[0][d - 1] = S::one();
    hermitian_form[d - 1][0] = S::one();
    for a in 1..=n {
        hermitian_form[a][a] = S::one();
    }
    let mut grading_element = zeros(d);
    grading_element[0][0] = S::one();
    grading_element[d - 1][d - 1] = S::from_i64(-1);
    let ctx = AlgebraContext { n, hermitian_form, grading_element };

    let c = S::ratio(1, 2 * (n as i64 + 2));
    let mut xi = vec![unit(d, d - 1, 0, S::i())];
    let mut zeta = vec![unit(d, 0, d - 1, S::i())];
    for s in 0..n {
        xi.push(unit(d, 1 + s, 0, S::one()));
        zeta.push(unit(d, 0, 1 + s, S::one()));
    }
    for s in 0..n {
        xi.push(unit(d, d - 1, 1 + s, S::from_i64(-1)));
        zeta.push(unit(d, 1 + s, d - 1, S::from_i64(-1)));
    }
    let xi_star = zeta
        .iter()
        .enumerate()
        .map(|(a, z)| mat_scale(z, &if a == 0 { c.neg() } else { c.clone() }))
        .collect();
    Ok((ctx, BasisTables { xi, zeta, xi_star }))
}

pub fn bracket<S: Scalar>(ctx: &AlgebraContext<S>, x: &GradedElement<S>, y: &GradedElement<S>) -> Result<GradedElement<S>> {
    if x.matrix.len() != ctx.dim() || y.matrix.len() != ctx.dim() {
        return Err(Error::Shape("bracket of elements from different algebras".into()));
    }
    ctx.graded(commutator(&x.matrix, &y.matrix))
}

/// B(X, Y) = 2(n+2) tr(XY).
pub fn killing_form<S: Scalar>(ctx: &AlgebraContext<S>, x: &Matrix<S>, y: &Matrix<S>) -> S {
    trace(&mat_mul(x, y)).mul(&S::from_i64(2 * (ctx.n as i64 + 2)))
}

/// Complex conjugation of sl(n+2, C) relative to su(n+1,1): `X ↦ -J X^† J`.
pub fn conj_real_form<S: Scalar>(ctx: &AlgebraContext<S>, x: &Matrix<S>) -> Matrix<S> {
    let d = ctx.dim();
    // J is the antidiagonal swap of the first and last index, identity in the middle
    let flip = |r: usize| if r == 0 { d - 1 } else if r == d - 1 { 0 } else { r };
    let mut out = zeros(d);
    for r in 0..d {
        for c in 0..d {
            out[r][c] = x[flip(c)][flip(r)].conj().neg();
        }
    }
    out
}

/// Expands a p̃₊ element in the ξ* basis: `Z = Σ_C B(Z, ξ_C) ξ*_C`.
pub fn xi_star_coords<S: Scalar>(ctx: &AlgebraContext<S>, b: &BasisTables<S>, z: &Matrix<S>) -> Vec<S> {
    b.xi.iter().map(|x| killing_form(ctx, z, x)).collect()
}

/// Coordinates of the g̃₋ part of `y` in the ξ basis: `Σ_C B(y, ξ*_C) ξ_C`.
pub fn xi_coords<S: Scalar>(ctx: &AlgebraContext<S>, b: &BasisTables<S>, y: &Matrix<S>) -> Vec<S> {
    b.xi_star.iter().map(|z| killing_form(ctx, y, z)).collect()
}

/// Killing form through `tr(ad X ad Y)` on a basis of sl(n+2): the reference definition.
pub fn killing_form_ad_trace<S: Scalar>(ctx: &AlgebraContext<S>, x: &Matrix<S>, y: &Matrix<S>) -> S {
    let basis = sl_basis::<S>(ctx.dim());
    let coords = |m: &Matrix<S>| sl_coords(m);
    let mut tr = S::zero();
    for (k, e) in basis.iter().enumerate() {
        let img = commutator(x, &commutator(y, e));
        tr.add_assign(&coords(&img)[k]);
    }
    tr
}

/// Basis of sl(d): off-diagonal units then `E_kk - E_{k+1,k+1}`.
pub fn sl_basis<S: Scalar>(d: usize) -> Vec<Matrix<S>> {
    let mut out = vec![];
    for r in 0..d {
        for c in 0..d {
            if r != c {
                out.push(unit(d, r, c, S::one()));
            }
        }
    }
    for k in 0..d - 1 {
        let mut m = unit(d, k, k, S::one());
        m[k + 1][k + 1] = S::from_i64(-1);
        out.push(m);
    }
    out
}

/// Coordinates of a trace-free matrix in [`sl_basis`].
pub fn sl_coords<S: Scalar>(m: &Matrix<S>) -> Vec<S> {
    let d = m.len();
    let mut out = vec![];
    for r in 0..d {
        for c in 0..d {
            if r != c {
                out.push(m[r][c].clone());
            }
        }
    }
    let mut acc = S::zero();
    for k in 0..d - 1 {
        acc.add_assign(&m[k][k]);
        out.push(acc.clone());
    }
    out
}

pub fn from_sl_coords<S: Scalar>(d: usize, v: &[S]) -> Matrix<S> {
    let mut m = zeros(d);
    let mut i = 0;
    for r in 0..d {
        for c in 0..d {
            if r != c {
                m[r][c] = v[i].clone();
                i += 1;
            }
        }
    }
    for k in 0..d - 1 {
        m[k][k].add_assign(&v[i + k]);
        m[k + 1][k + 1] = m[k + 1][k + 1].sub(&v[i + k]);
    }
    m
}

/// Grade of a basis element of [`sl_basis`].
pub fn sl_basis_grades(n: usize) -> Vec<i32> {
    let d = n + 2;
    let mut out = vec![];
    for r in 0..d {
        for c in 0..d {
            if r != c {
                out.push(row_grade(n, r) - row_grade(n, c));
            }
        }
    }
    out.extend(std::iter::repeat(0).take(d - 1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Qi;

    type M = Matrix<Qi>;

    fn alg(n: usize) -> (AlgebraContext<Qi>, BasisTables<Qi>) {
        build_algebra::<Qi>(n).unwrap()
    }

    fn all_basis(n: usize) -> Vec<M> {
        sl_basis::<Qi>(n + 2)
    }

    #[test]
    fn dimensions() {
        let (c2, _) = alg(2);
        assert_eq!(c2.real_dim(), 15);
        assert_eq!(c2.grade_dims(), [1, 4, 5, 4, 1]);
        assert_eq!(alg(1).0.real_dim(), 8);
        assert!(matches!(build_algebra::<Qi>(0), Err(Error::Parameter(_))));
        // grade dims count the graded pieces of the sl basis
        for n in 1..=3 {
            let (c, _) = alg(n);
            let g = sl_basis_grades(n);
            for (i, want) in c.grade_dims().iter().enumerate() {
                assert_eq!(g.iter().filter(|&&x| x == i as i32 - 2).count(), *want);
            }
        }
    }

    #[test]
    fn xi_zero_matrix() {
        let (_, b) = alg(2);
        assert_eq!(b.xi[0], unit(4, 3, 0, Qi::i()));
    }

    #[test]
    fn grading_brackets() {
        let n = 2;
        let (c, b) = alg(n);
        let e = c.graded(c.grading_element.clone()).unwrap();
        for s in 1..=n {
            let x = c.graded(b.xi[s].clone()).unwrap();
            let br = bracket(&c, &e, &x).unwrap();
            assert_eq!(br.matrix, mat_scale(&b.xi[s], &Qi::from_i64(-1)));
        }
        let x = c.graded(b.xi[1].clone()).unwrap();
        assert!(is_zero_matrix(&bracket(&c, &x, &x).unwrap().matrix));
    }

    #[test]
    fn xi_sigma_xi_taubar_bracket() {
        // [ξ_σ, ξ_τ̄] = -i δ_{στ} ξ₀, from the matrix product E_{1+σ,1}E_{n+2,1+τ} = 0
        let n = 2;
        let (_, b) = alg(n);
        for s in 0..n {
            for t in 0..n {
                let got = commutator(&b.xi[1 + s], &b.xi[1 + n + t]);
                let want = if s == t { mat_scale(&b.xi[0], &Qi::i().neg()) } else { zeros(n + 2) };
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn killing_pairings() {
        for n in 1..=3usize {
            let (c, b) = alg(n);
            let k = 2 * (n as i64 + 2);
            assert_eq!(killing_form(&c, &b.xi[0], &b.zeta[0]), Qi::from_i64(-k));
            for a in 1..=2 * n {
                for bb in 1..=2 * n {
                    let want = if a == bb { Qi::from_i64(k) } else { Qi::zero() };
                    assert_eq!(killing_form(&c, &b.xi[a], &b.zeta[bb]), want);
                }
            }
            for a in 0..=2 * n {
                for bb in 0..=2 * n {
                    let want = if a == bb { Qi::one() } else { Qi::zero() };
                    assert_eq!(killing_form(&c, &b.xi[a], &b.xi_star[bb]), want);
                }
            }
        }
    }

    #[test]
    fn killing_matches_ad_trace() {
        for n in 1..=2 {
            let (c, _) = alg(n);
            let basis = all_basis(n);
            for x in &basis {
                for y in &basis {
                    assert_eq!(killing_form(&c, x, y), killing_form_ad_trace(&c, x, y));
                }
            }
        }
    }

    #[test]
    fn jacobi_and_invariance() {
        let n = 1;
        let (c, _) = alg(n);
        let basis = all_basis(n);
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    let j = mat_add(
                        &mat_add(&commutator(x, &commutator(y, z)), &commutator(y, &commutator(z, x))),
                        &commutator(z, &commutator(x, y)),
                    );
                    assert!(is_zero_matrix(&j));
                    let inv = killing_form(&c, &commutator(x, y), z).add(&killing_form(&c, y, &commutator(x, z)));
                    assert!(inv.is_zero());
                }
            }
        }
    }

    #[test]
    fn grading_is_respected() {
        let n = 2;
        let basis = all_basis(n);
        let grades = sl_basis_grades(n);
        let (c, _) = alg(n);
        for (x, gx) in basis.iter().zip(&grades) {
            for (y, gy) in basis.iter().zip(&grades) {
                let br = c.graded(commutator(x, y)).unwrap();
                for (i, comp) in br.components.iter().enumerate() {
                    if i as i32 - 2 != gx + gy {
                        assert!(is_zero_matrix(comp));
                    }
                }
            }
        }
    }

    #[test]
    fn graded_components_reconstruct_and_eigen() {
        let n = 2;
        let (c, _) = alg(n);
        let m: M = (0..4).map(|r| (0..4).map(|cc| Qi::from_parts((r as i64 + 1, 1), (cc as i64, 2))).collect()).collect();
        let g = c.graded(m.clone()).unwrap();
        let sum = g.components.iter().fold(zeros(4), |acc, x| mat_add(&acc, x));
        assert_eq!(sum, m);
        for (i, comp) in g.components.iter().enumerate() {
            let lhs = commutator(&c.grading_element, comp);
            assert_eq!(lhs, mat_scale(comp, &Qi::from_i64(i as i64 - 2)));
        }
    }

    /// Conjugation written blockwise as in the displayed rule for the complexified block form.
    fn block_conj(n: usize, m: &M) -> M {
        let d = n + 2;
        let l = d - 1;
        let a = m[0][0].clone();
        let b = m[l][l].neg();
        let iz = m[0][l].clone();
        let z = iz.mul(&Qi::i().neg());
        let ix = m[l][0].clone();
        let x = ix.mul(&Qi::i().neg());
        let mut out = zeros(d);
        out[0][0] = b.conj();
        out[l][l] = a.conj().neg();
        out[0][l] = Qi::i().mul(&z.conj());
        out[l][0] = Qi::i().mul(&x.conj());
        for s in 0..n {
            let zb = m[0][1 + s].clone(); // Z_β
            let wa = m[1 + s][l].neg(); // W^α
            let xa = m[1 + s][0].clone(); // X^α
            let yb = m[l][1 + s].neg(); // Y_β
            out[0][1 + s] = wa.conj(); // W_β
            out[1 + s][l] = zb.conj().neg(); // -Z^α
            out[1 + s][0] = yb.conj(); // Y^α
            out[l][1 + s] = xa.conj().neg(); // -X_β
            for t in 0..n {
                // entry (1+α, 1+β) holds A_β^α; the image holds -A^α_β = -conj(A_α^β)
                out[1 + s][1 + t] = m[1 + t][1 + s].conj().neg();
            }
        }
        out
    }

    #[test]
    fn conjugation_matches_block_rule() {
        let n = 2;
        let (c, b) = alg(n);
        let basis = all_basis(n);
        for (k, x) in basis.iter().enumerate() {
            let y = mat_scale(x, &Qi::from_parts((k as i64 + 1, 3), (2 - k as i64, 5)));
            assert_eq!(conj_real_form(&c, &y), block_conj(n, &y));
            assert_eq!(conj_real_form(&c, &conj_real_form(&c, &y)), y);
        }
        for s in 0..n {
            assert_eq!(conj_real_form(&c, &b.xi[1 + s]), b.xi[1 + n + s]);
        }
        assert_eq!(conj_real_form(&c, &b.xi[0]), b.xi[0]);
        assert_eq!(conj_real_form(&c, &b.zeta[0]), b.zeta[0]);
    }

    #[test]
    fn real_elements_are_fixed_points() {
        // a general element of g built from the real block pattern
        let n = 2;
        let (c, _) = alg(n);
        let l = n + 1;
        let mut m = zeros(n + 2);
        let a = Qi::from_parts((1, 2), (1, 3));
        m[0][0] = a.clone();
        m[l][l] = a.conj().neg();
        m[0][l] = Qi::i().mul(&Qi::ratio(2, 7));
        m[l][0] = Qi::i().mul(&Qi::ratio(-5, 3));
        let xs = [Qi::from_parts((1, 1), (2, 1)), Qi::from_parts((0, 1), (-1, 1))];
        let zs = [Qi::from_parts((3, 1), (1, 1)), Qi::from_parts((1, 4), (0, 1))];
        for s in 0..n {
            m[1 + s][0] = xs[s].clone();
            m[l][1 + s] = xs[s].conj().neg();
            m[0][1 + s] = zs[s].clone();
            m[1 + s][l] = zs[s].conj().neg();
        }
        // A ∈ u(n) with a + tr A - ā = 0: tr A = ā - a = -2i Im a
        m[1][1] = Qi::from_parts((0, 1), (-1, 3));
        m[2][2] = Qi::from_parts((0, 1), (-1, 3));
        m[1][2] = Qi::from_parts((1, 1), (1, 1));
        m[2][1] = Qi::from_parts((-1, 1), (1, 1));
        assert!(trace(&m).is_zero());
        assert_eq!(conj_real_form(&c, &m), m);
    }

    #[test]
    fn g0_contains_no_ideal() {
        // F ∈ g̃₀ with [F, ξ₀] = [F, ξ_σ] = 0 and F real must vanish
        use crate::exactnum::linalg::nullspace;
        let n = 2;
        let (c, b) = alg(n);
        let g0: Vec<M> = all_basis(n)
            .into_iter()
            .zip(sl_basis_grades(n))
            .filter(|(_, g)| *g == 0)
            .map(|(m, _)| m)
            .collect();
        // linear conditions on coefficients of F in the g̃₀ basis
        let mut rows: Vec<Vec<Qi>> = vec![];
        for s in 0..=n {
            let imgs: Vec<M> = g0.iter().map(|f| commutator(f, &b.xi[s])).collect();
            for r in 0..n + 2 {
                for cc in 0..n + 2 {
                    rows.push(imgs.iter().map(|m| m[r][cc].clone()).collect());
                }
            }
        }
        let ker = nullspace(&rows, g0.len());
        // over C the conditions force F ∝ I, which is not trace-free
        assert!(ker.is_empty(), "kernel {:?}", ker);
        let _ = c;
    }
}
