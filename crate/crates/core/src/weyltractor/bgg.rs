//! Splitting operators, the projection to homology and the first BGG operators.
//!
//! A section's derivative becomes a 1-chain by evaluating on the soldering vectors:
//! the coefficient at label `A` is `∇_{Y_A} v`. The splitting `L` is characterized by
//! `∂*(∇L·) = 0`, solved grade by grade: the homogeneity-`g` part of `∂*(∇v)` depends
//! on the grade-`g` entries of `v` only through the constant map `v_g ↦ ∂*(ξ_A·v_g)`.

use crate::crops::DeformationTensor;
use crate::error::{Error, Result};
use crate::exactnum::linalg::{solve, Matrix};
use crate::exactnum::{Jet, Scalar};
use crate::homology::{h1_projection, Chain, ChainContext, RepKind};
use crate::pseudoherm::{covariant_derivative, density_derivatives, PseudohermitianStructure, Slot, Tensor};

use super::{
    apply_const, jet_from_sl_coords, jet_sl_coords, nij_divergence, soldering_vectors, AdjointSection,
    StandardSection, TractorCurvature, WeylForm,
};
use super::{adjoint_deriv_matrix, modified_adjoint_deriv, standard_deriv_matrix};

/// Which adjoint connection a BGG computation uses.
#[derive(Debug)]
pub enum AdjointConnection<'a, S: Scalar> {
    Normal,
    Modified(&'a TractorCurvature<S>),
}

impl<S: Scalar> Clone for AdjointConnection<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S: Scalar> Copy for AdjointConnection<'_, S> {}

fn standard_coords<S: Scalar>(v: &StandardSection<S>) -> Vec<Jet<S>> {
    v.to_vec()
}

fn adjoint_coords<S: Scalar>(s: &PseudohermitianStructure<S>, v: &AdjointSection<S>) -> Vec<Jet<S>> {
    jet_sl_coords(s, &v.matrix)
}

fn adjoint_from_coords<S: Scalar>(s: &PseudohermitianStructure<S>, v: &[Jet<S>]) -> AdjointSection<S> {
    AdjointSection { matrix: jet_from_sl_coords(s, s.n() + 2, v) }
}

/// `∇_{e_K} v` in representation coordinates for every frame direction `K`.
fn derivatives<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    kind: RepKind,
    conn: AdjointConnection<'_, S>,
    v: &[Jet<S>],
) -> Result<Vec<Vec<Jet<S>>>> {
    (0..s.dim())
        .map(|k| match kind {
            RepKind::Standard => Ok(standard_coords(&standard_deriv_matrix(s, w, &StandardSection::from_vec(v), k)?)),
            RepKind::Adjoint => {
                let sec = adjoint_from_coords(s, v);
                let d = match conn {
                    AdjointConnection::Normal => adjoint_deriv_matrix(s, w, &sec, k)?,
                    AdjointConnection::Modified(kappa) => modified_adjoint_deriv(s, w, kappa, &sec, k)?,
                };
                Ok(adjoint_coords(s, &d))
            }
        })
        .collect()
}

/// The 1-chain `A ↦ ∇_{Y_A} v`, flattened.
fn derivative_chain<S: Scalar>(s: &PseudohermitianStructure<S>, derivs: &[Vec<Jet<S>>]) -> Vec<Jet<S>> {
    let ys = soldering_vectors(s);
    let d = derivs[0].len();
    let mut out = vec![];
    for y in &ys {
        for j in 0..d {
            out.push(y.iter().zip(derivs).fold(s.zero(), |acc, (c, dk)| {
                if super::nz(c) && super::nz(&dk[j]) {
                    acc + c * &dk[j]
                } else {
                    acc
                }
            }));
        }
    }
    out
}

/// `∂*(∇v)` in representation coordinates; its entry `j` has homogeneity equal to the grade of `j`.
pub fn splitting_residual<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    kind: RepKind,
    conn: AdjointConnection<'_, S>,
    v: &[Jet<S>],
) -> Result<Vec<Jet<S>>> {
    let cc = ChainContext::<S>::new(kind, s.n())?;
    let chain = derivative_chain(s, &derivatives(s, w, kind, conn, v)?);
    Ok(apply_const(s, &cc.codifferential_matrix(1), &chain))
}

/// Matrix of `v_g ↦ (∂*(A ↦ ξ_A·v_g))_g` on the grade-`g` coordinates.
fn leading_operator<S: Scalar>(cc: &ChainContext<S>, idx: &[usize]) -> Matrix<S> {
    let d = cc.rep.dim();
    let codiff = cc.codifferential_matrix(1);
    let mut m = vec![vec![S::zero(); idx.len()]; idx.len()];
    for (c, &j) in idx.iter().enumerate() {
        let e: Vec<S> = (0..d).map(|i| if i == j { S::one() } else { S::zero() }).collect();
        let chain: Vec<S> = cc.basis.xi.iter().flat_map(|x| cc.rep.act(x, &e)).collect();
        let img = crate::exactnum::linalg::mat_vec(&codiff, &chain);
        for (r, &i) in idx.iter().enumerate() {
            m[r][c] = img[i].clone();
        }
    }
    m
}

fn inverse<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let k = m.len();
    let mut cols = vec![];
    for j in 0..k {
        let e: Vec<S> = (0..k).map(|i| if i == j { S::one() } else { S::zero() }).collect();
        let x = solve(m, &e).ok_or_else(|| Error::Internal("graded splitting operator is singular".into()))?;
        cols.push(x);
    }
    if crate::exactnum::linalg::rank(m) < k {
        return Err(Error::Internal("graded splitting operator is singular".into()));
    }
    Ok((0..k).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
}

/// Completes `v` by solving `∂*(∇v) = 0` for the entries of the given grades, in increasing order.
/// Entries of the other grades are kept.
pub fn graded_solve<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    kind: RepKind,
    conn: AdjointConnection<'_, S>,
    mut v: Vec<Jet<S>>,
    grades: &[i32],
) -> Result<Vec<Jet<S>>> {
    let cc = ChainContext::<S>::new(kind, s.n())?;
    for &g in grades {
        let idx: Vec<usize> = (0..cc.rep.dim()).filter(|&j| cc.rep.grades[j] == g).collect();
        let inv = inverse(&leading_operator(&cc, &idx))?;
        for &j in &idx {
            v[j] = s.zero();
        }
        let res = splitting_residual(s, w, kind, conn, &v)?;
        let rhs: Vec<Jet<S>> = idx.iter().map(|&i| -&res[i]).collect();
        for (&j, val) in idx.iter().zip(apply_const(s, &inv, &rhs)) {
            v[j] = val;
        }
    }
    if v.iter().any(|j| j.is_exhausted()) {
        return Err(Error::Order("splitting exhausted the jet order".into()));
    }
    Ok(v)
}

fn raise_bar<S: Scalar>(s: &PseudohermitianStructure<S>, d1: &Tensor<S>) -> Vec<Jet<S>> {
    let n = s.n();
    // ∇^α f = h^{αδ̄} ∇_δ̄ f
    (0..n).map(|a| (0..n).fold(s.zero(), |acc, d| acc + &s.g[a][d] * d1.get(&[n + d]))).collect()
}

/// `Lu` from the closed formulas `t^α = ∇^αu`, `s = (1/(n+1))(−∇_γt^γ + i∇₀u − iā₀u + Z^γ_γu)`.
pub fn split_standard<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    u: &Jet<S>,
) -> Result<StandardSection<S>> {
    let n = s.n();
    let du = covariant_derivative(&Tensor::scalar(n, (0, 1), u.clone()), s)?;
    let t = raise_bar(s, &du);
    let dt = covariant_derivative(&Tensor::from_fn(n, &[Slot::Up], (-1, 0), |i| t[i[0]].clone()), s)?;
    let mut top = (du.get(&[2 * n]) - &(s.conj(&w.a0) * u)).mul_i();
    for g in 0..n {
        top = top - dt.get(&[g, g]) + w.z_upper(s, g, g) * u;
    }
    let top = top.scale_ratio(1, n as i64 + 1);
    if top.is_exhausted() {
        return Err(Error::Order("splitting exhausted the jet order".into()));
    }
    Ok(StandardSection { s: top, t, u: u.clone() })
}

/// `Lu` by the graded solve, fixing only `u`.
pub fn split_standard_by_solve<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    u: &Jet<S>,
) -> Result<StandardSection<S>> {
    let n = s.n();
    let mut v = vec![s.zero(); n + 2];
    v[n + 1] = u.clone();
    let v = graded_solve(s, w, RepKind::Standard, AdjointConnection::Normal, v, &[0, 1])?;
    Ok(StandardSection::from_vec(&v))
}

/// `Lx` for a real (1,1)-density: `x`, `X^α = i∇^αx` and `X_β = −i∇_βx` are set from `x`,
/// the entries of grades 0, 1, 2 are solved from `∂*(∇Lx) = 0`.
pub fn split_adjoint<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    x: &Jet<S>,
) -> Result<AdjointSection<S>> {
    let n = s.n();
    if !crate::check::is_real(x, &s.conj(x)) {
        return Err(Error::Validation("density must be real".into()));
    }
    let dx = covariant_derivative(&Tensor::scalar(n, (1, 1), x.clone()), s)?;
    let xu: Vec<Jet<S>> = raise_bar(s, &dx).iter().map(|j| j.mul_i()).collect();
    let zero = s.zero();
    let zeros = vec![s.zero(); n];
    let zmid = vec![vec![s.zero(); n]; n];
    let start = AdjointSection::from_parts(s, &zero, &zeros, &zero, &xu, &zmid, x);
    let v = graded_solve(s, w, RepKind::Adjoint, AdjointConnection::Normal, adjoint_coords(s, &start), &[0, 1, 2])?;
    Ok(adjoint_from_coords(s, &v))
}

/// `Lx` solving every grade above −2, including `X^α`.
pub fn split_adjoint_by_solve<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    x: &Jet<S>,
) -> Result<AdjointSection<S>> {
    let n = s.n();
    let zero = s.zero();
    let zeros = vec![s.zero(); n];
    let zmid = vec![vec![s.zero(); n]; n];
    let start = AdjointSection::from_parts(s, &zero, &zeros, &zero, &zeros, &zmid, x);
    let v = graded_solve(s, w, RepKind::Adjoint, AdjointConnection::Normal, adjoint_coords(s, &start), &[-1, 0, 1, 2])?;
    Ok(adjoint_from_coords(s, &v))
}

/// A symmetric pair of H₁ components, expanded to full index ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardBgg<S: Scalar> {
    /// `u_σ`.
    pub hol: Vec<Jet<S>>,
    /// `t_{(ᾱβ̄)}`.
    pub bar: Vec<Vec<Jet<S>>>,
}

impl<S: Scalar> StandardBgg<S> {
    pub fn components(&self) -> Vec<Jet<S>> {
        self.hol.iter().chain(self.bar.iter().flatten()).cloned().collect()
    }

    pub fn sub(&self, o: &Self) -> Self {
        StandardBgg {
            hol: self.hol.iter().zip(&o.hol).map(|(a, b)| a - b).collect(),
            bar: self.bar.iter().zip(&o.bar).map(|(r, q)| r.iter().zip(q).map(|(a, b)| a - b).collect()).collect(),
        }
    }
}

/// Projection of a 1-chain of jets to H₁, with the barred block lowered by the Levi form.
///
/// The first `first` outputs are returned as is; the remaining symmetric block is raised in
/// the chain (it is read off at `Y_β̄ = h^{βγ̄}Z_γ̄` from an upper-index entry) and lowered here.
fn project<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    kind: RepKind,
    chain: &[Jet<S>],
) -> Result<(Vec<Jet<S>>, Vec<Vec<Jet<S>>>)> {
    let n = s.n();
    let cc = ChainContext::<S>::new(kind, n)?;
    let dim1 = cc.chain_dim(1);
    let cols: Vec<Vec<S>> = (0..dim1)
        .map(|j| {
            let e: Vec<S> = (0..dim1).map(|i| if i == j { S::one() } else { S::zero() }).collect();
            h1_projection(&Chain::from_flat(1, &cc.rep, &e))
        })
        .collect();
    let rows = cols[0].len();
    let m: Matrix<S> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let out = apply_const(s, &m, chain);
    let first = match kind {
        RepKind::Standard => n,
        RepKind::Adjoint => n * (n + 1) / 2,
    };
    let sym = |v: &[Jet<S>]| {
        let mut full = vec![vec![s.zero(); n]; n];
        let mut it = v.iter();
        for a in 0..n {
            for b in a..n {
                let x = it.next().expect("symmetric block").clone();
                full[a][b] = x.clone();
                full[b][a] = x;
            }
        }
        full
    };
    let raw = sym(&out[first..]);
    let mut low = vec![vec![s.zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            for a2 in 0..n {
                for b2 in 0..n {
                    low[a][b] = &low[a][b] + &(&(&s.h[a2][a] * &s.h[b2][b]) * &raw[a2][b2]);
                }
            }
        }
    }
    Ok((out[..first].to_vec(), low))
}

/// `proj(∇Lu)` with `L` from the closed splitting formulas.
pub fn bgg_standard_composite<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    u: &Jet<S>,
) -> Result<StandardBgg<S>> {
    let lu = split_standard(s, w, u)?;
    let chain = derivative_chain(s, &derivatives(s, w, RepKind::Standard, AdjointConnection::Normal, &lu.to_vec())?);
    let (hol, bar) = project(s, RepKind::Standard, &chain)?;
    Ok(StandardBgg { hol, bar })
}

/// `D₀u = (∇_αu, ∇_{(ᾱ}∇_{β̄)}u − iA_{ᾱβ̄}u − (1/n)(∇*N)^sym_{ᾱβ̄}u)` for `u ∈ E(0,1)`.
pub fn bgg_standard<S: Scalar>(s: &PseudohermitianStructure<S>, u: &Jet<S>) -> Result<StandardBgg<S>> {
    let n = s.n();
    let (d1, d2) = density_derivatives(s, u, (0, 1))?;
    let dn = nij_divergence(s)?;
    let hol = (0..n).map(|a| d1.get(&[a]).clone()).collect();
    let bar = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let dd = (d2.get(&[n + a, n + b]) + d2.get(&[n + b, n + a])).scale_ratio(1, 2);
                    let sym = s.conj(dn.sym.get(&[a, b])).scale_ratio(1, n as i64);
                    dd - (s.torsion_bar(a, b) * u).mul_i() - sym * u
                })
                .collect()
        })
        .collect();
    Ok(StandardBgg { hol, bar })
}

/// The H₁ part of the adjoint derivative is `(X_{(αβ)}, X_{(ᾱβ̄)})`; a deformation tensor is
/// its negative, which is the identification under which the modified operator is `D`.
fn to_deformation<S: Scalar>(hol: Vec<Jet<S>>, bar: Vec<Vec<Jet<S>>>, n: usize, s: &PseudohermitianStructure<S>) -> DeformationTensor<S> {
    let mut full = vec![vec![s.zero(); n]; n];
    let mut it = hol.into_iter();
    for a in 0..n {
        for b in a..n {
            let x = it.next().expect("symmetric block");
            full[a][b] = -&x;
            full[b][a] = -x;
        }
    }
    DeformationTensor { hol: full, bar: bar.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect() }
}

fn adjoint_composite<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    conn: AdjointConnection<'_, S>,
    x: &Jet<S>,
) -> Result<DeformationTensor<S>> {
    let lx = split_adjoint(s, w, x)?;
    let derivs = derivatives(s, w, RepKind::Adjoint, conn, &adjoint_coords(s, &lx))?;
    let (hol, bar) = project(s, RepKind::Adjoint, &derivative_chain(s, &derivs))?;
    Ok(to_deformation(hol, bar, s.n(), s))
}

/// `proj(∇Lx)` for the normal adjoint connection.
pub fn bgg_adjoint_composite<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    x: &Jet<S>,
) -> Result<DeformationTensor<S>> {
    adjoint_composite(s, w, AdjointConnection::Normal, x)
}

/// `proj(∇̃Lx)` for the modified adjoint connection.
pub fn bgg_modified<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    kappa: &TractorCurvature<S>,
    x: &Jet<S>,
) -> Result<DeformationTensor<S>> {
    adjoint_composite(s, w, AdjointConnection::Modified(kappa), x)
}

/// `D₀^∇x` in closed form: `(i∇_{(α}∇_{β)}x − A_{αβ}x − (i/n)(∇*N)^sym_{αβ}x, conjugate)` under
/// the deformation-tensor identification (the H₁ components themselves carry the opposite sign).
pub fn bgg_adjoint<S: Scalar>(s: &PseudohermitianStructure<S>, x: &Jet<S>) -> Result<DeformationTensor<S>> {
    let n = s.n();
    let (_, d2) = density_derivatives(s, x, (1, 1))?;
    let dn = nij_divergence(s)?;
    let mut hol = vec![vec![s.zero(); n]; n];
    let mut bar = vec![vec![s.zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let dd = (d2.get(&[a, b]) + d2.get(&[b, a])).scale_ratio(1, 2);
            let ddb = (d2.get(&[n + a, n + b]) + d2.get(&[n + b, n + a])).scale_ratio(1, 2);
            let sym = dn.sym.get(&[a, b]).scale_ratio(1, n as i64);
            let symb = s.conj(dn.sym.get(&[a, b])).scale_ratio(1, n as i64);
            hol[a][b] = (dd - sym * x).mul_i() - s.torsion_lower(a, b) * x;
            bar[a][b] = (symb * x - ddb).mul_i() - s.torsion_bar(a, b) * x;
        }
    }
    Ok(DeformationTensor { hol, bar })
}

/// `D₀^∇̃x − D₀^∇x` in closed form: `(iN_{(αβ)γ}∇^γx + (i/n)(∇*N)^sym_{αβ}x, conjugate)`.
pub fn bgg_difference<S: Scalar>(s: &PseudohermitianStructure<S>, x: &Jet<S>) -> Result<DeformationTensor<S>> {
    let n = s.n();
    let dx = covariant_derivative(&Tensor::scalar(n, (1, 1), x.clone()), s)?;
    let up = raise_bar(s, &dx);
    let up_bar: Vec<Jet<S>> = (0..n).map(|g| (0..n).fold(s.zero(), |acc, d| acc + &s.g[d][g] * dx.get(&[d]))).collect();
    let dn = nij_divergence(s)?;
    let mut hol = vec![vec![s.zero(); n]; n];
    let mut bar = vec![vec![s.zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut nh = dn.sym.get(&[a, b]).scale_ratio(1, n as i64) * x;
            let mut nb = s.conj(dn.sym.get(&[a, b])).scale_ratio(1, n as i64) * x;
            for g in 0..n {
                let ns = (s.nij_lower(a, b, g) + s.nij_lower(b, a, g)).scale_ratio(1, 2);
                nh = nh + &ns * &up[g];
                nb = nb + s.conj(&ns) * &up_bar[g];
            }
            hol[a][b] = nh.mul_i();
            bar[a][b] = -nb.mul_i();
        }
    }
    Ok(DeformationTensor { hol, bar })
}

/// `(P″ − P)·u` and `−|N|²u/(4(n+1))`: the two sides of the identity that blocks prolongation
/// of the standard BGG equation when `N ≠ 0`.
pub fn non_prolongation_pivot<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    pkg: &crate::pseudoherm::CurvaturePackage<S>,
) -> (Jet<S>, Jet<S>) {
    let n = s.n() as i64;
    let lhs = &pkg.p2 - &pkg.p;
    let rhs = -s.nij_norm_sq().scale_ratio(1, 4 * (n + 1));
    (lhs, rhs)
}
