//! The normal Weyl form of the exact Weyl structure of a contact form, its
//! curvature and normality, the standard, cotractor, adjoint and modified
//! tractor connections, and the first BGG operators built from them.
//!
//! Everything lives in the chart frame of a [`PseudohermitianStructure`]. The
//! frame `Z_α` need not be unitary: the Weyl form is written in the gauge
//! `diag(1, M, 1)` relative to a unitary frame with `det M > 0`, which keeps the
//! soldering entries `θ^α`, `iθ`, `−θ_β = −h_{βγ̄}θ^γ̄` and makes the g₀ block
//! `ω_β^α − ρδ/(n+2)` with `ρ` the density connection form. All Rho components
//! are tensors of equal bi-weight, so their covariant derivatives carry no `ρ` term.

use crate::error::{Error, Result};
use crate::exactnum::linalg::Matrix;
use crate::exactnum::{Jet, Scalar};
use crate::pseudoherm::{covariant_derivative, CurvaturePackage, PseudohermitianStructure, Slot, Tensor};

mod bgg;
mod checks;
mod tractor;
#[cfg(test)]
mod tests;

pub use bgg::*;
pub use checks::*;
pub use tractor::*;

/// Square matrix of jets.
pub type JetMatrix<S> = Vec<Vec<Jet<S>>>;

pub(crate) fn nz<S: Scalar>(j: &Jet<S>) -> bool {
    j.terms().next().is_some()
}

pub(crate) fn zero_matrix<S: Scalar>(s: &PseudohermitianStructure<S>, d: usize) -> JetMatrix<S> {
    vec![vec![s.zero(); d]; d]
}

pub(crate) fn jet_mat_mul<S: Scalar>(s: &PseudohermitianStructure<S>, a: &JetMatrix<S>, b: &JetMatrix<S>) -> JetMatrix<S> {
    let d = a.len();
    let mut out = zero_matrix(s, d);
    for i in 0..d {
        for k in 0..d {
            if !nz(&a[i][k]) {
                continue;
            }
            for j in 0..d {
                if nz(&b[k][j]) {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

pub(crate) fn jet_commutator<S: Scalar>(s: &PseudohermitianStructure<S>, a: &JetMatrix<S>, b: &JetMatrix<S>) -> JetMatrix<S> {
    let ab = jet_mat_mul(s, a, b);
    let ba = jet_mat_mul(s, b, a);
    ab.iter().zip(&ba).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub(crate) fn mat_sum<S: Scalar>(a: &JetMatrix<S>, b: &JetMatrix<S>) -> JetMatrix<S> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
}

#[cfg(test)]
pub(crate) fn mat_diff<S: Scalar>(a: &JetMatrix<S>, b: &JetMatrix<S>) -> JetMatrix<S> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

/// Coordinates in [`crate::liealg::sl_basis`]; the trace is dropped.
pub(crate) fn jet_sl_coords<S: Scalar>(s: &PseudohermitianStructure<S>, m: &JetMatrix<S>) -> Vec<Jet<S>> {
    let d = m.len();
    let mut out = vec![];
    for r in 0..d {
        for c in 0..d {
            if r != c {
                out.push(m[r][c].clone());
            }
        }
    }
    let mut acc = s.zero();
    for k in 0..d - 1 {
        acc = acc + &m[k][k];
        out.push(acc.clone());
    }
    out
}

pub(crate) fn jet_from_sl_coords<S: Scalar>(s: &PseudohermitianStructure<S>, d: usize, v: &[Jet<S>]) -> JetMatrix<S> {
    let mut m = zero_matrix(s, d);
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
        m[k][k] = &m[k][k] + &v[i + k];
        m[k + 1][k + 1] = &m[k + 1][k + 1] - &v[i + k];
    }
    m
}

pub(crate) fn trace<S: Scalar>(s: &PseudohermitianStructure<S>, m: &JetMatrix<S>) -> Jet<S> {
    (0..m.len()).fold(s.zero(), |acc, k| acc + &m[k][k])
}

/// A constant matrix applied to a jet vector.
pub(crate) fn apply_const<S: Scalar>(s: &PseudohermitianStructure<S>, m: &Matrix<S>, v: &[Jet<S>]) -> Vec<Jet<S>> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(s.zero(), |acc, (c, x)| if c.is_zero() || !nz(x) { acc } else { acc + x.scale(c) })
        })
        .collect()
}

/// Frame coefficients of the soldering-adapted vectors `Y_A` (`τ(Y_A) ≡ ξ_A` mod p̃),
/// indexed by basis label: `Y_0 = T`, `Y_σ = Z_σ`, `Y_σ̄ = h^{σγ̄} Z_γ̄`.
pub fn soldering_vectors<S: Scalar>(s: &PseudohermitianStructure<S>) -> Vec<Vec<Jet<S>>> {
    let n = s.n();
    let dim = s.dim();
    let mut out = vec![];
    let mut t = vec![s.zero(); dim];
    t[2 * n] = s.constant(S::one());
    out.push(t);
    for sg in 0..n {
        let mut y = vec![s.zero(); dim];
        y[sg] = s.constant(S::one());
        out.push(y);
    }
    for sg in 0..n {
        let mut y = vec![s.zero(); dim];
        for g in 0..n {
            y[n + g] = s.g[sg][g].clone();
        }
        out.push(y);
    }
    out
}

/// The Rho-tensor components of the normal Weyl form.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylForm<S: Scalar> {
    pub n: usize,
    /// `a₀`.
    pub a0: Jet<S>,
    /// `a_mid[β][α] = A_β^α_0`.
    pub a_mid: Vec<Vec<Jet<S>>>,
    /// `z_hol[β][σ] = Z_{βσ}`.
    pub z_hol: Vec<Vec<Jet<S>>>,
    /// `z_mix[β][σ] = Z_{βσ̄}`.
    pub z_mix: Vec<Vec<Jet<S>>>,
    /// `z_reeb[β] = Z_{β0}`.
    pub z_reeb: Vec<Jet<S>>,
    /// `z_sigma[σ] = z_σ`; `z_σ̄` is its conjugate.
    pub z_sigma: Vec<Jet<S>>,
    /// `z₀`, real.
    pub z0: Jet<S>,
}

/// One Rho component, for fault injection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoComponent {
    A0,
    AMid,
    ZHol,
    ZMix,
    ZReeb,
    ZSigma,
    ZZero,
}

impl RhoComponent {
    pub const ALL: [RhoComponent; 7] = [
        RhoComponent::A0,
        RhoComponent::AMid,
        RhoComponent::ZHol,
        RhoComponent::ZMix,
        RhoComponent::ZReeb,
        RhoComponent::ZSigma,
        RhoComponent::ZZero,
    ];

    /// Homogeneity at which the component enters the curvature.
    pub fn homogeneity(self) -> i32 {
        match self {
            RhoComponent::A0 | RhoComponent::AMid | RhoComponent::ZHol | RhoComponent::ZMix => 2,
            RhoComponent::ZReeb | RhoComponent::ZSigma => 3,
            RhoComponent::ZZero => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RhoComponent::A0 => "a0",
            RhoComponent::AMid => "A_0",
            RhoComponent::ZHol => "Z_hol",
            RhoComponent::ZMix => "Z_mixed",
            RhoComponent::ZReeb => "Z_reeb",
            RhoComponent::ZSigma => "z_sigma",
            RhoComponent::ZZero => "z0",
        }
    }
}

impl<S: Scalar> WeylForm<S> {
    /// The form with every Rho component zero (the flat-model values).
    pub fn zero(s: &PseudohermitianStructure<S>) -> Self {
        let n = s.n();
        let z = s.zero();
        WeylForm {
            n,
            a0: z.clone(),
            a_mid: vec![vec![z.clone(); n]; n],
            z_hol: vec![vec![z.clone(); n]; n],
            z_mix: vec![vec![z.clone(); n]; n],
            z_reeb: vec![z.clone(); n],
            z_sigma: vec![z.clone(); n],
            z0: z,
        }
    }

    /// Adds a constant to one entry of a component; the trace of `τ` is unchanged.
    pub fn perturbed(&self, which: RhoComponent) -> Self {
        let mut w = self.clone();
        let one = S::one();
        let bump = |j: &Jet<S>| j.add_scalar(&one);
        let last = self.n - 1;
        match which {
            RhoComponent::A0 => w.a0 = bump(&w.a0),
            RhoComponent::AMid => {
                if self.n > 1 {
                    w.a_mid[0][last] = bump(&w.a_mid[0][last]);
                } else {
                    // keeps a₀ − ā₀ + tr A₀ fixed
                    w.a_mid[0][0] = w.a_mid[0][0].add_scalar(&S::i());
                    w.a0 = w.a0.add_scalar(&S::ratio(-1, 2).mul_i());
                }
            }
            RhoComponent::ZHol => w.z_hol[0][last] = bump(&w.z_hol[0][last]),
            RhoComponent::ZMix => w.z_mix[0][0] = bump(&w.z_mix[0][0]),
            RhoComponent::ZReeb => w.z_reeb[0] = bump(&w.z_reeb[0]),
            RhoComponent::ZSigma => w.z_sigma[0] = bump(&w.z_sigma[0]),
            RhoComponent::ZZero => w.z0 = bump(&w.z0),
        }
        w
    }

    /// `Z_{βK}` for a frame index `K`.
    pub fn z_lower(&self, beta: usize, k: usize) -> Jet<S> {
        let n = self.n;
        if k < n {
            self.z_hol[beta][k].clone()
        } else if k < 2 * n {
            self.z_mix[beta][k - n].clone()
        } else {
            self.z_reeb[beta].clone()
        }
    }

    /// `Z^α_K = h^{αγ̄} conj(Z_{γK̄})`.
    pub fn z_upper(&self, s: &PseudohermitianStructure<S>, alpha: usize, k: usize) -> Jet<S> {
        let kb = s.bar(k);
        (0..self.n).fold(s.zero(), |acc, g| acc + &s.g[alpha][g] * &s.conj(&self.z_lower(g, kb)))
    }

    /// `z_K`: `z_σ`, `conj z_σ`, `z₀`.
    pub fn z_scalar(&self, s: &PseudohermitianStructure<S>, k: usize) -> Jet<S> {
        let n = self.n;
        if k < n {
            self.z_sigma[k].clone()
        } else if k < 2 * n {
            s.conj(&self.z_sigma[k - n])
        } else {
            self.z0.clone()
        }
    }

    /// `τ(e_K)` as an `(n+2)×(n+2)` jet matrix.
    pub fn matrix(&self, s: &PseudohermitianStructure<S>, k: usize) -> JetMatrix<S> {
        let n = self.n;
        let d = n + 2;
        let l = n + 1;
        let t0 = 2 * n;
        let reeb = k == t0;
        let mut m = zero_matrix(s, d);
        let dens = s.rho(k).scale_ratio(-1, n as i64 + 2);
        m[0][0] = if reeb { &dens + &self.a0 } else { dens.clone() };
        m[l][l] = if reeb { &dens - &s.conj(&self.a0) } else { dens.clone() };
        for a in 0..n {
            for b in 0..n {
                let mut v = s.gamma(k, b, a).clone();
                if a == b {
                    v = v + &dens;
                }
                if reeb {
                    v = v + &self.a_mid[b][a];
                }
                m[1 + a][1 + b] = v;
            }
        }
        // soldering
        if k < n {
            m[1 + k][0] = s.constant(S::one());
        }
        if reeb {
            m[l][0] = s.constant(S::i());
        }
        if (n..2 * n).contains(&k) {
            for b in 0..n {
                m[l][1 + b] = -&s.h[b][k - n];
            }
        }
        // Rho
        for b in 0..n {
            m[0][1 + b] = self.z_lower(b, k);
            m[1 + b][l] = -self.z_upper(s, b, k);
        }
        m[0][l] = self.z_scalar(s, k).mul_i();
        m
    }

    pub fn matrices(&self, s: &PseudohermitianStructure<S>) -> Vec<JetMatrix<S>> {
        (0..s.dim()).map(|k| self.matrix(s, k)).collect()
    }

    /// All components, for comparisons.
    pub fn components(&self) -> Vec<Jet<S>> {
        let mut out = vec![self.a0.clone()];
        for rows in [&self.a_mid, &self.z_hol, &self.z_mix] {
            out.extend(rows.iter().flatten().cloned());
        }
        out.extend(self.z_reeb.iter().cloned());
        out.extend(self.z_sigma.iter().cloned());
        out.push(self.z0.clone());
        out
    }

    /// Residuals of the block pattern: lower-left soldering entries, the real-form
    /// relations between the outer blocks, and metric compatibility of the g₀ block.
    pub fn shape_residuals(&self, s: &PseudohermitianStructure<S>) -> Vec<Jet<S>> {
        let n = self.n;
        let l = n + 1;
        let mats = self.matrices(s);
        let mut out = vec![];
        for (k, m) in mats.iter().enumerate() {
            let mb = &mats[s.bar(k)];
            for a in 0..n {
                out.push(&m[1 + a][0] - &s.chart.pair(&s.coframe[a], &s.frame[k]));
            }
            out.push(&m[l][0] - &s.chart.pair(&s.theta, &s.frame[k]).mul_i());
            for b in 0..n {
                let theta_b = (0..n).fold(s.zero(), |acc, g| acc + &s.h[b][g] * &s.chart.pair(&s.coframe[n + g], &s.frame[k]));
                out.push(&m[l][1 + b] + &theta_b);
            }
            out.push(&m[l][l] + &s.conj(&mb[0][0]));
            out.push(&m[0][l] + &s.conj(&mb[0][l]));
            for a in 0..n {
                // (1+α, n+1) = −h^{αγ̄} conj((0, 1+γ) at K̄)
                let up = (0..n).fold(s.zero(), |acc, g| acc + &s.g[a][g] * &s.conj(&mb[0][1 + g]));
                out.push(&m[1 + a][l] + &up);
            }
            for b in 0..n {
                for g in 0..n {
                    // M_K h + (M_K̄ h)^† = e_K h
                    let mut v = -s.deriv(k, &s.h[b][g]);
                    for a in 0..n {
                        v = v + &m[1 + a][1 + b] * &s.h[a][g] + &s.conj(&mb[1 + a][1 + g]) * &s.h[b][a];
                    }
                    out.push(v);
                }
            }
        }
        out
    }
}

fn lift<S: Scalar>(n: usize, slots: &[Slot], f: impl FnMut(&[usize]) -> Jet<S>) -> Tensor<S> {
    Tensor::from_fn(n, slots, (0, 0), f)
}

/// `∇^γ t_{βγ} = h^{γδ̄} ∇_δ̄ t_{βγ}` for a `[Down, Down]` tensor.
fn div_second<S: Scalar>(s: &PseudohermitianStructure<S>, t: &Tensor<S>) -> Result<Vec<Jet<S>>> {
    let n = s.n();
    let dt = covariant_derivative(t, s)?;
    Ok((0..n)
        .map(|b| {
            let mut acc = s.zero();
            for g in 0..n {
                for d in 0..n {
                    acc = acc + &s.g[g][d] * dt.get(&[b, g, n + d]);
                }
            }
            acc
        })
        .collect())
}

/// `∇_γ t_β^γ` for a `[Down, BarDown]` tensor `t_{βγ̄}` raised with the Levi form.
fn div_mixed<S: Scalar>(s: &PseudohermitianStructure<S>, t: &Tensor<S>) -> Result<Vec<Jet<S>>> {
    let n = s.n();
    let up = lift(n, &[Slot::Down, Slot::Up], |i| (0..n).fold(s.zero(), |acc, d| acc + &s.g[i[1]][d] * t.get(&[i[0], d])));
    let dt = covariant_derivative(&up, s)?;
    Ok((0..n).map(|b| (0..n).fold(s.zero(), |acc, g| acc + dt.get(&[b, g, g]))).collect())
}

/// `∇^γ v_γ = h^{γδ̄} ∇_δ̄ v_γ` for a `[Down]` tensor.
fn div_vector<S: Scalar>(s: &PseudohermitianStructure<S>, v: &[Jet<S>]) -> Result<Jet<S>> {
    let n = s.n();
    let t = lift(n, &[Slot::Down], |i| v[i[0]].clone());
    let dt = covariant_derivative(&t, s)?;
    let mut acc = s.zero();
    for g in 0..n {
        for d in 0..n {
            acc = acc + &s.g[g][d] * dt.get(&[g, n + d]);
        }
    }
    Ok(acc)
}

/// The homogeneity-two and homogeneity-three divergence data shared by several formulas.
struct NijDivergence<S: Scalar> {
    sym: Tensor<S>,
    skew: Tensor<S>,
}

fn nij_divergence<S: Scalar>(s: &PseudohermitianStructure<S>) -> Result<NijDivergence<S>> {
    let (sym, skew) = s.div_nij()?;
    Ok(NijDivergence { sym, skew })
}

/// The homogeneity-two components: `a₀`, `A_β^α_0`, `Z_{βσ}`, `Z_{βσ̄}`.
fn homogeneity_two<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    pkg: &CurvaturePackage<S>,
    dn: &NijDivergence<S>,
) -> WeylForm<S> {
    let n = s.n();
    let ni = n as i64;
    let mut w = WeylForm::zero(s);
    w.a0 = pkg.p.mul_i().scale_ratio(-1, ni + 2);
    for b in 0..n {
        for a in 0..n {
            let raised = (0..n).fold(s.zero(), |acc, g| acc + &s.g[a][g] * pkg.schouten1.get(&[b, g]));
            let mut v = raised.mul_i();
            if a == b {
                v = v - pkg.p.mul_i().scale_ratio(1, ni + 2);
            }
            w.a_mid[b][a] = v;
        }
    }
    for b in 0..n {
        for sg in 0..n {
            w.z_hol[b][sg] = -s.torsion_lower(b, sg).mul_i()
                + dn.sym.get(&[b, sg]).scale_ratio(1, ni)
                + dn.skew.get(&[b, sg]).scale_ratio(1, ni + 2);
            w.z_mix[b][sg] = -pkg.schouten2.get(&[b, sg]);
        }
    }
    w
}

/// The normal Weyl form from the closed Tanaka–Webster formulas.
pub fn normal_weyl_form<S: Scalar>(s: &PseudohermitianStructure<S>, pkg: &CurvaturePackage<S>) -> Result<WeylForm<S>> {
    let n = s.n();
    let ni = n as i64;
    let dn = nij_divergence(s)?;
    let mut w = homogeneity_two(s, pkg, &dn);

    // homogeneity three
    let div_p1 = div_mixed(s, &pkg.schouten1)?;
    let div_p2 = div_mixed(s, &pkg.schouten2)?;
    let div_a = div_second(s, &s.torsion_tensor())?;
    let div_sym = div_second(s, &dn.sym)?;
    let div_skew = div_second(s, &dn.skew)?;
    for b in 0..n {
        let inner = &div_p1[b] + &div_p2[b] - div_a[b].mul_i().scale_ratio(2, 1)
            + div_sym[b].scale_ratio(1, ni)
            + div_skew[b].scale_ratio(1, ni + 2);
        w.z_reeb[b] = -inner.mul_i().scale_ratio(1, 2 * ni + 1);
    }
    // N^{γ̄₁γ̄₂}_σ = h^{ε₁γ̄₁} h^{ε₂γ̄₂} N_{ε₁ε₂σ}
    let n_up = |g1: usize, g2: usize, sg: usize| {
        let mut acc = s.zero();
        for e1 in 0..n {
            for e2 in 0..n {
                let f = &s.g[e1][g1] * &s.g[e2][g2];
                if nz(&f) {
                    acc = acc + f * s.nij_lower(e1, e2, sg);
                }
            }
        }
        acc
    };
    for sg in 0..n {
        let (mut an, mut sn, mut kn) = (s.zero(), s.zero(), s.zero());
        for g1 in 0..n {
            for g2 in 0..n {
                let nu = n_up(g1, g2, sg);
                an = an + s.torsion_raised(g1, g2) * s.nij_lower(g1, g2, sg);
                sn = sn + s.conj(dn.sym.get(&[g1, g2])) * &nu;
                kn = kn + s.conj(dn.skew.get(&[g1, g2])) * &nu;
            }
        }
        let inner = &div_p2[sg] - &div_a[sg].mul_i() - an.mul_i() + (&div_sym[sg] - &sn).scale_ratio(1, ni)
            - (&div_skew[sg] - &kn).scale_ratio(1, ni + 2);
        w.z_sigma[sg] = inner.mul_i().scale_ratio(1, 2 * ni + 1);
    }

    // homogeneity four
    w.z0 = z0_formula(s, &w)?;
    Ok(w)
}

/// `z₀` from the lower components (the composite homogeneity-four formula).
fn z0_formula<S: Scalar>(s: &PseudohermitianStructure<S>, w: &WeylForm<S>) -> Result<Jet<S>> {
    let n = s.n();
    let div_zr = div_vector(s, &w.z_reeb)?;
    let div_zs = div_vector(s, &w.z_sigma)?;
    let mut az = s.zero();
    let mut amz = s.zero();
    let mut trz = s.zero();
    let mut mixed_sq = s.zero();
    let mut hol_sq = s.zero();
    for g1 in 0..n {
        for g2 in 0..n {
            az = az + s.torsion_raised(g1, g2) * &w.z_hol[g1][g2];
            // Z_{γ₂}^{γ₁} = h^{γ₁δ̄} Z_{γ₂δ̄}
            let zr = (0..n).fold(s.zero(), |acc, d| acc + &s.g[g1][d] * &w.z_mix[g2][d]);
            amz = amz + &w.a_mid[g1][g2] * &zr;
            if g1 == g2 {
                trz = trz + &zr;
            }
            // Z^{γ₁γ̄₂} = h^{γ₁ε̄} h^{δγ̄₂} conj(Z_{εδ̄}),  Z^{γ₁γ₂} = h^{γ₁ε̄} h^{γ₂δ̄} conj(Z_{εδ})
            let (mut zmu, mut zhu) = (s.zero(), s.zero());
            for e in 0..n {
                for d in 0..n {
                    zmu = zmu + &(&s.g[g1][e] * &s.g[d][g2]) * &s.conj(&w.z_mix[e][d]);
                    zhu = zhu + &(&s.g[g1][e] * &s.g[g2][d]) * &s.conj(&w.z_hol[e][d]);
                }
            }
            mixed_sq = mixed_sq + &w.z_mix[g1][g2] * &zmu;
            hol_sq = hol_sq + &w.z_hol[g1][g2] * &zhu;
        }
    }
    let anti = |x: &Jet<S>| x - &s.conj(x);
    let inner = anti(&div_zr) - anti(&az) + anti(&amz) - (&w.a0 * &trz).scale_ratio(2, 1) - anti(&div_zs)
        - mixed_sq.mul_i()
        + hol_sq.mul_i();
    Ok(inner.mul_i().scale_ratio(1, 3 * n as i64))
}

/// Curvature `K(e_K, e_L) = e_K τ_L − e_L τ_K − τ([e_K, e_L]) + [τ_K, τ_L]` of a matrix-valued form.
pub fn form_curvature<S: Scalar>(s: &PseudohermitianStructure<S>, taus: &[JetMatrix<S>]) -> Vec<Vec<JetMatrix<S>>> {
    let dim = s.dim();
    let d = taus[0].len();
    let mut out = vec![vec![zero_matrix(s, d); dim]; dim];
    for k in 0..dim {
        for l in k + 1..dim {
            let mut m = jet_commutator(s, &taus[k], &taus[l]);
            for i in 0..d {
                for j in 0..d {
                    let mut v = s.deriv(k, &taus[l][i][j]) - s.deriv(l, &taus[k][i][j]);
                    for q in 0..dim {
                        let c = s.c(k, l, q);
                        if nz(c) && nz(&taus[q][i][j]) {
                            v = v - c * &taus[q][i][j];
                        }
                    }
                    m[i][j] = &m[i][j] + &v;
                }
            }
            out[l][k] = m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
            out[k][l] = m;
        }
    }
    out
}

/// The curvature of a Weyl form as an adjoint-tractor-valued 2-form.
#[derive(Clone, Debug)]
pub struct TractorCurvature<S: Scalar> {
    pub n: usize,
    /// `k[K][L] = K(e_K, e_L)` over frame indices.
    pub k: Vec<Vec<JetMatrix<S>>>,
}

impl<S: Scalar> TractorCurvature<S> {
    /// `K(X, Y)` for coordinate-free frame coefficient vectors `X`, `Y`.
    pub fn eval(&self, s: &PseudohermitianStructure<S>, x: &[Jet<S>], y: &[Jet<S>]) -> JetMatrix<S> {
        let d = self.n + 2;
        let mut out = zero_matrix(s, d);
        for (a, xa) in x.iter().enumerate() {
            if !nz(xa) {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if a == b || !nz(yb) {
                    continue;
                }
                let f = xa * yb;
                for i in 0..d {
                    for j in 0..d {
                        if nz(&self.k[a][b][i][j]) {
                            out[i][j] = &out[i][j] + &(&f * &self.k[a][b][i][j]);
                        }
                    }
                }
            }
        }
        out
    }

    /// The curvature function `κ` as a flattened 2-chain: the coefficient at
    /// labels `A < B` is `κ(ξ_A, ξ_B) = K(Y_A, Y_B)` in sl coordinates.
    pub fn chain(&self, s: &PseudohermitianStructure<S>) -> Vec<Jet<S>> {
        let ys = soldering_vectors(s);
        let mut out = vec![];
        for t in crate::homology::subsets(2 * self.n + 1, 2) {
            out.extend(jet_sl_coords(s, &self.eval(s, &ys[t[0]], &ys[t[1]])));
        }
        out
    }

    pub fn traces(&self, s: &PseudohermitianStructure<S>) -> Vec<Jet<S>> {
        let dim = s.dim();
        let mut out = vec![];
        for k in 0..dim {
            for l in k + 1..dim {
                out.push(trace(s, &self.k[k][l]));
            }
        }
        out
    }
}

pub fn weyl_curvature<S: Scalar>(s: &PseudohermitianStructure<S>, w: &WeylForm<S>) -> Result<TractorCurvature<S>> {
    let k = form_curvature(s, &w.matrices(s));
    if k.iter().flatten().flatten().flatten().any(|j| j.is_exhausted()) {
        return Err(Error::Order("Weyl curvature exhausted the jet order".into()));
    }
    Ok(TractorCurvature { n: s.n(), k })
}

/// Homogeneity-three and -four components read off the curvature of the truncated forms.
///
/// `Z_{β0}` and `z_σ` come from the curvature `Π` of the form with them (and `z₀`) set
/// to zero; `z₀` from the curvature of the form that includes them.
pub fn weyl_form_from_curvature<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    pkg: &CurvaturePackage<S>,
) -> Result<WeylForm<S>> {
    let n = s.n();
    let ni = n as i64;
    let t0 = 2 * n;
    let l = n + 1;
    let dn = nij_divergence(s)?;
    let mut w = homogeneity_two(s, pkg, &dn);
    let pi2 = form_curvature(s, &w.matrices(s));
    for b in 0..n {
        let mut v = -&pi2[t0][b][0][0];
        for g in 0..n {
            v = v + &pi2[t0][g][1 + g][1 + b];
            for t in 0..n {
                v = v + (&s.g[g][t] * &pi2[g][n + t][0][1 + b]).mul_i();
            }
        }
        w.z_reeb[b] = v.scale_ratio(1, 2 * ni + 1);
    }
    for sg in 0..n {
        let mut v = s.zero();
        for g in 0..n {
            v = v + &pi2[sg][g][1 + g][l];
            for t in 0..n {
                v = v + &s.g[g][t] * &pi2[sg][n + t][0][1 + g];
            }
        }
        w.z_sigma[sg] = -v.mul_i().scale_ratio(1, 2 * ni + 1);
    }
    let pi3 = form_curvature(s, &w.matrices(s));
    let mut v = s.zero();
    for g in 0..n {
        v = v - &pi3[t0][g][1 + g][l];
        for t in 0..n {
            v = v - &s.g[g][t] * &pi3[t0][n + t][0][1 + g];
            v = v - (&s.g[g][t] * &pi3[g][n + t][0][l]).mul_i();
        }
    }
    w.z0 = v.mul_i().scale_ratio(1, 3 * ni);
    if w.components().iter().any(|c| c.is_exhausted()) {
        return Err(Error::Order("curvature route exhausted the jet order".into()));
    }
    Ok(w)
}

/// Per-homogeneity normality residuals of a Weyl curvature.
#[derive(Clone, Debug)]
pub struct NormalityReport<S: Scalar> {
    /// `(l, components of ∂*κ of homogeneity l)` for `l = 1..=4`.
    pub by_homogeneity: Vec<(i32, Vec<Jet<S>>)>,
    /// Components of `κ` of homogeneity `≤ 0`, which vanish for a regular geometry.
    pub low_homogeneity: Vec<Jet<S>>,
    /// Traces of `K(e_K, e_L)`; `K` must be trace-free for `κ` to be g̃-valued.
    pub traces: Vec<Jet<S>>,
    /// Size of `κ`, for relative float tolerances.
    pub scale: f64,
}

impl<S: Scalar> NormalityReport<S> {
    pub fn residual(&self, l: i32) -> &[Jet<S>] {
        self.by_homogeneity.iter().find(|(h, _)| *h == l).map(|(_, v)| v.as_slice()).unwrap_or(&[])
    }

    pub fn is_normal(&self) -> bool {
        self.by_homogeneity.iter().all(|(_, v)| v.iter().all(|j| j.is_zero()))
    }
}

/// Applies the Kostant codifferential fiberwise to `κ` and groups the result by homogeneity.
pub fn check_normality<S: Scalar>(s: &PseudohermitianStructure<S>, kappa: &TractorCurvature<S>) -> Result<NormalityReport<S>> {
    let n = s.n();
    let cc = crate::homology::ChainContext::<S>::new(crate::homology::RepKind::Adjoint, n)?;
    let chain = kappa.chain(s);
    let image = apply_const(s, &cc.codifferential_matrix(2), &chain);
    let by_homogeneity =
        (1..=4).map(|l| (l, cc.homogeneity_indices(1, l).into_iter().map(|i| image[i].clone()).collect())).collect();
    let low_homogeneity =
        (-2..=0).flat_map(|l| cc.homogeneity_indices(2, l)).map(|i| chain[i].clone()).collect();
    Ok(NormalityReport {
        by_homogeneity,
        low_homogeneity,
        traces: kappa.traces(s),
        scale: crate::check::magnitude(&chain),
    })
}

/// `T_β = (1/(n+2))(∇_βP − i∇^γA_{βγ})`.
pub fn gover_graham_t<S: Scalar>(s: &PseudohermitianStructure<S>, pkg: &CurvaturePackage<S>) -> Result<Vec<Jet<S>>> {
    let n = s.n();
    let div_a = div_second(s, &s.torsion_tensor())?;
    Ok((0..n)
        .map(|b| (s.deriv(b, &pkg.p) - div_a[b].mul_i()).scale_ratio(1, n as i64 + 2))
        .collect())
}

/// `S = −(1/n)(∇^γT_γ + ∇^γ̄T_γ̄ + P_{αβ̄}P^{αβ̄} − A_{αβ}A^{αβ})`, so that `z₀ = −S` when `N = 0`.
pub fn gover_graham_s<S: Scalar>(s: &PseudohermitianStructure<S>, pkg: &CurvaturePackage<S>) -> Result<Jet<S>> {
    let n = s.n();
    let t = gover_graham_t(s, pkg)?;
    let div_t = div_vector(s, &t)?;
    let mut pp = s.zero();
    let mut aa = s.zero();
    for a in 0..n {
        for b in 0..n {
            // P^{αβ̄} = h^{αε̄} h^{δβ̄} P_{δε̄}
            let mut up = s.zero();
            for e in 0..n {
                for d in 0..n {
                    up = up + &(&s.g[a][e] * &s.g[d][b]) * pkg.schouten.get(&[d, e]);
                }
            }
            pp = pp + pkg.schouten.get(&[a, b]) * &up;
            aa = aa + s.torsion_lower(a, b) * s.torsion_raised(a, b);
        }
    }
    Ok((&div_t + &s.conj(&div_t) + pp - aa).scale_ratio(-1, n as i64))
}
