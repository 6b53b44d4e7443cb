//! Tractor sections and their connections.
//!
//! Each connection is computed twice: from the matrix form `∇ = d + τ` of the
//! normal Weyl form, and from the component displays in terms of Tanaka–Webster
//! derivatives and Rho components.

use crate::error::{Error, Result};
use crate::exactnum::{Jet, Scalar};
use crate::pseudoherm::{covariant_derivative, PseudohermitianStructure, Slot, Tensor};

use super::{jet_commutator, nz, zero_matrix, JetMatrix, TractorCurvature, WeylForm};

fn deriv_all<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    slots: &[Slot],
    weight: (i64, i64),
    f: impl FnMut(&[usize]) -> Jet<S>,
) -> Result<Tensor<S>> {
    covariant_derivative(&Tensor::from_fn(s.n(), slots, weight, f), s)
}

fn check_dir<S: Scalar>(s: &PseudohermitianStructure<S>, k: usize) -> Result<()> {
    if k >= s.dim() {
        return Err(Error::Index { index: k, limit: s.dim() });
    }
    Ok(())
}

/// Standard tractor `(s, t^α, u)`: `s ∈ E(−1,0)`, `t^α ∈ E^α(−1,0)`, `u ∈ E(0,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardSection<S: Scalar> {
    pub s: Jet<S>,
    pub t: Vec<Jet<S>>,
    pub u: Jet<S>,
}

impl<S: Scalar> StandardSection<S> {
    pub fn to_vec(&self) -> Vec<Jet<S>> {
        let mut v = vec![self.s.clone()];
        v.extend(self.t.iter().cloned());
        v.push(self.u.clone());
        v
    }

    pub fn from_vec(v: &[Jet<S>]) -> Self {
        let l = v.len() - 1;
        StandardSection { s: v[0].clone(), t: v[1..l].to_vec(), u: v[l].clone() }
    }
}

/// Standard cotractor `(σ, τ_α, ρ)`: `σ ∈ E(1,0)`, `τ_α ∈ E_α(1,0)`, `ρ ∈ E(0,−1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotractorSection<S: Scalar> {
    pub sigma: Jet<S>,
    pub tau: Vec<Jet<S>>,
    pub rho: Jet<S>,
}

impl<S: Scalar> CotractorSection<S> {
    pub fn to_vec(&self) -> Vec<Jet<S>> {
        let mut v = vec![self.sigma.clone()];
        v.extend(self.tau.iter().cloned());
        v.push(self.rho.clone());
        v
    }

    pub fn from_vec(v: &[Jet<S>]) -> Self {
        let l = v.len() - 1;
        CotractorSection { sigma: v[0].clone(), tau: v[1..l].to_vec(), rho: v[l].clone() }
    }
}

/// Dual pairing `σs + τ_α t^α + ρu`, a function.
pub fn pairing<S: Scalar>(c: &CotractorSection<S>, v: &StandardSection<S>) -> Jet<S> {
    c.to_vec().iter().zip(v.to_vec()).fold(Jet::zero(v.u.nvars(), v.u.cap()), |acc, (a, b)| acc + a * &b)
}

/// `∇_{e_K} v = e_K v + τ(e_K) v`.
pub fn standard_deriv_matrix<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    v: &StandardSection<S>,
    k: usize,
) -> Result<StandardSection<S>> {
    check_dir(s, k)?;
    let tau = w.matrix(s, k);
    let x = v.to_vec();
    let out: Vec<Jet<S>> = (0..x.len())
        .map(|i| {
            x.iter().enumerate().fold(s.deriv(k, &x[i]), |acc, (j, xj)| {
                if nz(&tau[i][j]) && nz(xj) {
                    acc + &tau[i][j] * xj
                } else {
                    acc
                }
            })
        })
        .collect();
    Ok(StandardSection::from_vec(&out))
}

/// The component display of the normal standard tractor connection.
pub fn standard_tractor_deriv<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    v: &StandardSection<S>,
    k: usize,
) -> Result<StandardSection<S>> {
    check_dir(s, k)?;
    let n = s.n();
    if v.t.len() != n {
        return Err(Error::Shape("standard tractor has the wrong rank".into()));
    }
    let ds = deriv_all(s, &[], (-1, 0), |_| v.s.clone())?;
    let dt = deriv_all(s, &[Slot::Up], (-1, 0), |i| v.t[i[0]].clone())?;
    let du = deriv_all(s, &[], (0, 1), |_| v.u.clone())?;
    let mut top = ds.get(&[k]).clone() + w.z_scalar(s, k).mul_i() * &v.u;
    for b in 0..n {
        top = top + w.z_lower(b, k) * &v.t[b];
    }
    let mut mid: Vec<Jet<S>> = (0..n).map(|a| dt.get(&[a, k]) - &(w.z_upper(s, a, k) * &v.u)).collect();
    let mut bottom = du.get(&[k]).clone();
    if k < n {
        mid[k] = &mid[k] + &v.s;
    } else if k < 2 * n {
        // t_σ̄ = h_{βσ̄} t^β
        bottom = (0..n).fold(bottom, |acc, b| acc - &s.h[b][k - n] * &v.t[b]);
    } else {
        top = top + &w.a0 * &v.s;
        for a in 0..n {
            mid[a] = (0..n).fold(mid[a].clone(), |acc, b| acc + &w.a_mid[b][a] * &v.t[b]);
        }
        bottom = bottom - s.conj(&w.a0) * &v.u + v.s.mul_i();
    }
    Ok(StandardSection { s: top, t: mid, u: bottom })
}

/// `∇_{e_K} c = e_K c − c τ(e_K)` on row vectors.
pub fn cotractor_deriv_matrix<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    c: &CotractorSection<S>,
    k: usize,
) -> Result<CotractorSection<S>> {
    check_dir(s, k)?;
    let tau = w.matrix(s, k);
    let x = c.to_vec();
    let out: Vec<Jet<S>> = (0..x.len())
        .map(|j| {
            x.iter().enumerate().fold(s.deriv(k, &x[j]), |acc, (i, xi)| {
                if nz(&tau[i][j]) && nz(xi) {
                    acc - xi * &tau[i][j]
                } else {
                    acc
                }
            })
        })
        .collect();
    Ok(CotractorSection::from_vec(&out))
}

/// The component display of the normal standard cotractor connection.
pub fn cotractor_deriv<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    c: &CotractorSection<S>,
    k: usize,
) -> Result<CotractorSection<S>> {
    check_dir(s, k)?;
    let n = s.n();
    if c.tau.len() != n {
        return Err(Error::Shape("cotractor has the wrong rank".into()));
    }
    let dsig = deriv_all(s, &[], (1, 0), |_| c.sigma.clone())?;
    let dtau = deriv_all(s, &[Slot::Down], (1, 0), |i| c.tau[i[0]].clone())?;
    let drho = deriv_all(s, &[], (0, -1), |_| c.rho.clone())?;
    let mut top = dsig.get(&[k]).clone();
    let mut mid: Vec<Jet<S>> = (0..n).map(|a| dtau.get(&[a, k]) - &(w.z_lower(a, k) * &c.sigma)).collect();
    let mut bottom = drho.get(&[k]) - &(w.z_scalar(s, k).mul_i() * &c.sigma);
    for g in 0..n {
        bottom = bottom + w.z_upper(s, g, k) * &c.tau[g];
    }
    if k < n {
        top = top - &c.tau[k];
    } else if k < 2 * n {
        for a in 0..n {
            mid[a] = &mid[a] + &(&s.h[a][k - n] * &c.rho);
        }
    } else {
        top = top - &w.a0 * &c.sigma - c.rho.mul_i();
        for a in 0..n {
            mid[a] = (0..n).fold(mid[a].clone(), |acc, b| acc - &w.a_mid[a][b] * &c.tau[b]);
        }
        bottom = bottom + s.conj(&w.a0) * &c.rho;
    }
    Ok(CotractorSection { sigma: top, tau: mid, rho: bottom })
}

/// Adjoint tractor with blocks `(a, Z_β, iz; X^α, A_β^α, −Z^α; ix, −X_β, −ā)`,
/// where `Z^α = h^{αγ̄} conj(Z_γ)` and `X_β = h_{βγ̄} conj(X^γ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointSection<S: Scalar> {
    pub matrix: JetMatrix<S>,
}

impl<S: Scalar> AdjointSection<S> {
    /// Builds the real-form matrix from `a`, `Z_β`, real `z`, `X^α`, `A_β^α` (as `[β][α]`) and real `x`.
    pub fn from_parts(
        s: &PseudohermitianStructure<S>,
        a: &Jet<S>,
        z_low: &[Jet<S>],
        z: &Jet<S>,
        x_up: &[Jet<S>],
        a_mid: &[Vec<Jet<S>>],
        x: &Jet<S>,
    ) -> Self {
        let n = s.n();
        let l = n + 1;
        let mut m = zero_matrix(s, n + 2);
        m[0][0] = a.clone();
        m[l][l] = -s.conj(a);
        m[0][l] = z.mul_i();
        m[l][0] = x.mul_i();
        for b in 0..n {
            m[0][1 + b] = z_low[b].clone();
            m[1 + b][l] = -(0..n).fold(s.zero(), |acc, g| acc + &s.g[b][g] * &s.conj(&z_low[g]));
            m[1 + b][0] = x_up[b].clone();
            m[l][1 + b] = -(0..n).fold(s.zero(), |acc, g| acc + &s.h[b][g] * &s.conj(&x_up[g]));
            for a2 in 0..n {
                m[1 + a2][1 + b] = a_mid[b][a2].clone();
            }
        }
        AdjointSection { matrix: m }
    }

    pub fn n(&self) -> usize {
        self.matrix.len() - 2
    }
    pub fn a(&self) -> &Jet<S> {
        &self.matrix[0][0]
    }
    /// `Z_β`.
    pub fn z_low(&self, b: usize) -> &Jet<S> {
        &self.matrix[0][1 + b]
    }
    /// `z`, read off the `iz` entry.
    pub fn z(&self) -> Jet<S> {
        -self.matrix[0][self.n() + 1].mul_i()
    }
    /// `X^α`.
    pub fn x_up(&self, a: usize) -> &Jet<S> {
        &self.matrix[1 + a][0]
    }
    /// `A_β^α`.
    pub fn a_mid(&self, b: usize, a: usize) -> &Jet<S> {
        &self.matrix[1 + a][1 + b]
    }
    /// `x`, read off the `ix` entry.
    pub fn x(&self) -> Jet<S> {
        -self.matrix[self.n() + 1][0].mul_i()
    }
    /// `X_β`, read off the `−X_β` entry.
    pub fn x_low(&self, b: usize) -> Jet<S> {
        -&self.matrix[self.n() + 1][1 + b]
    }

    /// Trace and real-form residuals.
    pub fn invariant_residuals(&self, s: &PseudohermitianStructure<S>) -> Vec<Jet<S>> {
        let n = s.n();
        let rebuilt = AdjointSection::from_parts(
            s,
            self.a(),
            &(0..n).map(|b| self.z_low(b).clone()).collect::<Vec<_>>(),
            &self.z(),
            &(0..n).map(|a| self.x_up(a).clone()).collect::<Vec<_>>(),
            &(0..n).map(|b| (0..n).map(|a| self.a_mid(b, a).clone()).collect()).collect::<Vec<_>>(),
            &self.x(),
        );
        let mut out = vec![super::trace(s, &self.matrix)];
        out.push(&self.z() - &s.conj(&self.z()));
        out.push(&self.x() - &s.conj(&self.x()));
        for (r1, r2) in self.matrix.iter().zip(&rebuilt.matrix) {
            for (p, q) in r1.iter().zip(r2) {
                out.push(p - q);
            }
        }
        // A_{βγ̄} + conj(A_{γβ̄}) = 0 with A_{βγ̄} = A_β^α h_{αγ̄}
        let low = |b: usize, g: usize| (0..n).fold(s.zero(), |acc, a| acc + self.a_mid(b, a) * &s.h[a][g]);
        for b in 0..n {
            for g in 0..n {
                out.push(low(b, g) + s.conj(&low(g, b)));
            }
        }
        out
    }

    /// The projection to the tangent bundle, `X^αZ_α + X^ᾱZ_ᾱ + xT`, as frame coefficients.
    ///
    /// `θ^γ̄` is read off the `−X_β` entries, so the formula also applies off the real form.
    pub fn projection(&self, s: &PseudohermitianStructure<S>) -> Vec<Jet<S>> {
        let n = s.n();
        let mut v = vec![s.zero(); s.dim()];
        for a in 0..n {
            v[a] = self.x_up(a).clone();
            v[n + a] = (0..n).fold(s.zero(), |acc, b| acc + &s.g[b][a] * &self.x_low(b));
        }
        v[2 * n] = self.x();
        v
    }
}

/// `∇_{e_K} v = e_K v + [τ(e_K), v]`.
pub fn adjoint_deriv_matrix<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    v: &AdjointSection<S>,
    k: usize,
) -> Result<AdjointSection<S>> {
    check_dir(s, k)?;
    let br = jet_commutator(s, &w.matrix(s, k), &v.matrix);
    let matrix = v.matrix.iter().zip(&br).map(|(r, b)| r.iter().zip(b).map(|(x, y)| s.deriv(k, x) + y).collect()).collect();
    Ok(AdjointSection { matrix })
}

/// The adjoint connection as the commutator of the standard and cotractor connections on
/// `End(V) = V ⊗ V*`: column `j` of `v` is a standard tractor, row `i` a cotractor, and
/// `∇(v)_{ij} = ⟨row_i, ∇ col_j⟩ + ⟨∇ row_i, col_j⟩ − e_K(v_{ij})`, all through the displays.
pub fn adjoint_deriv_end<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    v: &AdjointSection<S>,
    k: usize,
) -> Result<AdjointSection<S>> {
    check_dir(s, k)?;
    let d = v.matrix.len();
    let mut out = zero_matrix(s, d);
    // columns: ∇(v e_j) where e_j is the parallel-transported... instead use (∇v)e = ∇(ve) − v∇e
    // with e ranging over coordinate standard tractors and the displays for both terms.
    let unit = |j: usize| {
        let mut x = vec![s.zero(); d];
        x[j] = s.constant(S::one());
        StandardSection::from_vec(&x)
    };
    let mut de = vec![];
    for j in 0..d {
        de.push(standard_tractor_deriv(s, w, &unit(j), k)?.to_vec());
    }
    for j in 0..d {
        let col: Vec<Jet<S>> = (0..d).map(|i| v.matrix[i][j].clone()).collect();
        let dcol = standard_tractor_deriv(s, w, &StandardSection::from_vec(&col), k)?.to_vec();
        for i in 0..d {
            // (∇v)e_j = ∇(v e_j) − v(∇e_j)
            let mut val = dcol[i].clone();
            for m in 0..d {
                if nz(&de[j][m]) && nz(&v.matrix[i][m]) {
                    val = val - &v.matrix[i][m] * &de[j][m];
                }
            }
            out[i][j] = val;
        }
    }
    Ok(AdjointSection { matrix: out })
}

/// The component display of the normal adjoint tractor connection.
pub fn adjoint_tractor_deriv<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    v: &AdjointSection<S>,
    k: usize,
) -> Result<AdjointSection<S>> {
    check_dir(s, k)?;
    let n = s.n();
    let l = n + 1;
    let t0 = 2 * n;
    let a = v.a().clone();
    let ab = s.conj(&a);
    let re_a = (&a + &ab).scale_ratio(1, 2);
    let z = v.z();
    let x = v.x();
    let zl: Vec<Jet<S>> = (0..n).map(|b| v.z_low(b).clone()).collect();
    let zu: Vec<Jet<S>> = (0..n).map(|al| (0..n).fold(s.zero(), |acc, g| acc + &s.g[al][g] * &s.conj(&zl[g]))).collect();
    let xu: Vec<Jet<S>> = (0..n).map(|al| v.x_up(al).clone()).collect();
    let xl: Vec<Jet<S>> = (0..n).map(|b| (0..n).fold(s.zero(), |acc, g| acc + &s.h[b][g] * &s.conj(&xu[g]))).collect();
    let am = |b: usize, al: usize| v.a_mid(b, al).clone();

    let d_a = deriv_all(s, &[], (0, 0), |_| a.clone())?;
    let d_ab = deriv_all(s, &[], (0, 0), |_| ab.clone())?;
    let d_z = deriv_all(s, &[], (0, 0), |_| z.clone())?;
    let d_x = deriv_all(s, &[], (0, 0), |_| x.clone())?;
    let d_zl = deriv_all(s, &[Slot::Down], (0, 0), |i| zl[i[0]].clone())?;
    let d_zu = deriv_all(s, &[Slot::Up], (0, 0), |i| zu[i[0]].clone())?;
    let d_xu = deriv_all(s, &[Slot::Up], (0, 0), |i| xu[i[0]].clone())?;
    let d_xl = deriv_all(s, &[Slot::Down], (0, 0), |i| xl[i[0]].clone())?;
    let d_am = deriv_all(s, &[Slot::Down, Slot::Up], (0, 0), |i| am(i[0], i[1]))?;

    // hatted Weyl components in direction K
    let zh = |b: usize| w.z_lower(b, k);
    let zhu = |al: usize| w.z_upper(s, al, k);
    let zs = w.z_scalar(s, k);
    let sum = |f: &dyn Fn(usize) -> Jet<S>| (0..n).fold(s.zero(), |acc, g| acc + f(g));

    let mut m = zero_matrix(s, n + 2);
    // parts common to all directions
    m[0][0] = d_a.get(&[k]) + &sum(&|g| zh(g) * &xu[g]) - &zs * &x;
    for b in 0..n {
        m[0][1 + b] = d_zl.get(&[b, k]) + &sum(&|g| zh(g) * am(b, g)) - zh(b) * &a - (&zs * &xl[b]).mul_i();
    }
    m[0][l] = d_z.get(&[k]).mul_i() + sum(&|g| zhu(g) * &zl[g]) - sum(&|g| zh(g) * &zu[g])
        - (&zs * &re_a).mul_i().scale_ratio(2, 1);
    for al in 0..n {
        m[1 + al][0] = d_xu.get(&[al, k]) - &(zhu(al) * &x).mul_i();
        for b in 0..n {
            m[1 + al][1 + b] = d_am.get(&[b, al, k]) + &(zhu(al) * &xl[b]) - zh(b) * &xu[al];
        }
        m[1 + al][l] = -d_zu.get(&[al, k]) + &sum(&|g| zhu(g) * am(g, al)) + zhu(al) * &ab - (&zs * &xu[al]).mul_i();
    }
    m[l][0] = d_x.get(&[k]).mul_i();
    for b in 0..n {
        m[l][1 + b] = -d_xl.get(&[b, k]) - &(zh(b) * &x).mul_i();
    }
    m[l][l] = -d_ab.get(&[k]) - &sum(&|g| zhu(g) * &xl[g]) + &zs * &x;

    if k < n {
        let sg = k;
        m[0][0] = &m[0][0] - &zl[sg];
        for al in 0..n {
            m[1 + al][0] = &m[1 + al][0] - &am(sg, al);
        }
        // δ_σ^α terms
        m[1 + sg][0] = &m[1 + sg][0] + &a;
        for b in 0..n {
            m[1 + sg][1 + b] = &m[1 + sg][1 + b] + &zl[b];
        }
        m[1 + sg][l] = &m[1 + sg][l] + &z.mul_i();
        m[l][0] = &m[l][0] + &xl[sg];
    } else if k < 2 * n {
        let sg = k - n;
        for b in 0..n {
            m[0][1 + b] = &m[0][1 + b] + &(&s.h[b][sg] * &z).mul_i();
        }
        // X_σ̄ = h_{γσ̄} X^γ
        let x_bar = sum(&|g| &s.h[g][sg] * &xu[g]);
        m[l][0] = &m[l][0] - &x_bar;
        for al in 0..n {
            for b in 0..n {
                m[1 + al][1 + b] = &m[1 + al][1 + b] - &(&s.h[b][sg] * &zu[al]);
            }
        }
        for b in 0..n {
            // A_{βσ̄} = A_β^α h_{ασ̄}
            let a_low = sum(&|al| am(b, al) * &s.h[al][sg]);
            m[l][1 + b] = &m[l][1 + b] - &a_low - &s.h[b][sg] * &ab;
        }
        m[l][l] = &m[l][l] + &s.conj(&zl[sg]);
    } else {
        debug_assert_eq!(k, t0);
        let ah = |b: usize, al: usize| w.a_mid[b][al].clone();
        let a0 = &w.a0;
        m[0][0] = &m[0][0] + &z;
        for b in 0..n {
            m[0][1 + b] = &m[0][1 + b] - &sum(&|g| ah(b, g) * &zl[g]) + a0 * &zl[b];
        }
        for al in 0..n {
            m[1 + al][0] = &m[1 + al][0] + &zu[al].mul_i() + sum(&|g| ah(g, al) * &xu[g]) - a0 * &xu[al];
            for b in 0..n {
                m[1 + al][1 + b] =
                    &m[1 + al][1 + b] + &sum(&|g| ah(g, al) * am(b, g)) - sum(&|g| ah(b, g) * am(g, al));
            }
            m[1 + al][l] = &m[1 + al][l] - &sum(&|g| ah(g, al) * &zu[g]) + a0 * &zu[al];
        }
        m[l][0] = &m[l][0] + &re_a.mul_i().scale_ratio(2, 1);
        for b in 0..n {
            m[l][1 + b] = &m[l][1 + b] + &zl[b].mul_i() + sum(&|g| ah(b, g) * &xl[g]) - a0 * &xl[b];
        }
        m[l][l] = &m[l][l] - &z;
    }
    Ok(AdjointSection { matrix: m })
}

/// `∇̃_{e_K} v = ∇_{e_K} v + κ(Π(v), e_K)`.
pub fn modified_adjoint_deriv<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    kappa: &TractorCurvature<S>,
    v: &AdjointSection<S>,
    k: usize,
) -> Result<AdjointSection<S>> {
    let base = adjoint_deriv_matrix(s, w, v, k)?;
    let mut e = vec![s.zero(); s.dim()];
    e[k] = s.constant(S::one());
    let ins = kappa.eval(s, &v.projection(s), &e);
    Ok(AdjointSection { matrix: super::mat_sum(&base.matrix, &ins) })
}
