//! Tanaka-Webster calculus of a compatible almost CR structure on a chart.
//!
//! Coordinates are `z^1..z^n, z̄^1..z̄^n, t` (jet variables `0..n`, `n..2n`, `2n`).
//! Frame indices follow the same layout: `Z_α` is `α`, `Z_ᾱ` is `n + α`, `T` is `2n`.
//! Conjugation swaps the first two blocks and fixes the last in both cases.

mod curvature;
mod laws;
mod tensor;


pub use curvature::{curvature, CurvaturePackage};
pub use laws::{commutator_checks, density_derivatives, rescale_contact_form, transformation_checks, Rescaling};
pub use curvature::{closed_forms, identity_checks};
pub use tensor::{covariant_derivative, Slot, Tensor};

use crate::error::{Error, Result};
use crate::exactnum::{invert_matrix, linalg, Jet, Scalar};

/// Chart dimensions: complex rank `n` and jet order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chart {
    pub n: usize,
    pub order: u32,
}

impl Chart {
    pub fn new(n: usize, order: u32) -> Result<Self> {
        if n == 0 || 2 * n + 1 > crate::exactnum::jet::MAX_VARS {
            return Err(Error::Parameter(format!("complex dimension n = {} is outside 1..=3", n)));
        }
        Ok(Chart { n, order })
    }
    pub fn nvars(&self) -> usize {
        2 * self.n + 1
    }
    /// Frame and coordinate conjugation.
    pub fn bar(&self, k: usize) -> usize {
        let n = self.n;
        if k < n {
            k + n
        } else if k < 2 * n {
            k - n
        } else {
            k
        }
    }
    pub fn perm(&self) -> Vec<usize> {
        (0..self.nvars()).map(|k| self.bar(k)).collect()
    }
    pub fn zero<S: Scalar>(&self) -> Jet<S> {
        Jet::zero(self.nvars(), self.order)
    }
    pub fn one<S: Scalar>(&self) -> Jet<S> {
        Jet::one(self.nvars(), self.order)
    }
    pub fn constant<S: Scalar>(&self, c: S) -> Jet<S> {
        Jet::constant(self.nvars(), self.order, c)
    }
    pub fn var<S: Scalar>(&self, k: usize) -> Jet<S> {
        Jet::var(self.nvars(), self.order, k)
    }
    pub fn conj<S: Scalar>(&self, f: &Jet<S>) -> Jet<S> {
        f.conj_with(&self.perm())
    }
    /// Complex conjugate of a vector field given by coordinate components.
    pub fn conj_vector<S: Scalar>(&self, v: &[Jet<S>]) -> Vec<Jet<S>> {
        let mut out = vec![self.zero(); v.len()];
        for (k, c) in v.iter().enumerate() {
            out[self.bar(k)] = self.conj(c);
        }
        out
    }
    /// `X(f)` for a vector field with coordinate components.
    pub fn apply<S: Scalar>(&self, v: &[Jet<S>], f: &Jet<S>) -> Jet<S> {
        let mut acc = self.zero();
        for (k, c) in v.iter().enumerate() {
            if c.terms().next().is_some() {
                acc = acc + c * &f.d(k);
            }
        }
        acc
    }
    /// Lie bracket of vector fields in coordinates.
    pub fn bracket<S: Scalar>(&self, x: &[Jet<S>], y: &[Jet<S>]) -> Vec<Jet<S>> {
        (0..self.nvars()).map(|k| self.apply(x, &y[k]) - self.apply(y, &x[k])).collect()
    }
    /// Pairing of a 1-form with a vector field, both in coordinates.
    pub fn pair<S: Scalar>(&self, form: &[Jet<S>], v: &[Jet<S>]) -> Jet<S> {
        let mut acc = self.zero();
        for (a, b) in form.iter().zip(v) {
            if a.terms().next().is_some() && b.terms().next().is_some() {
                acc = acc + a * b;
            }
        }
        acc
    }
    /// `dα(X, Y)` for a 1-form in coordinates.
    pub fn d_form<S: Scalar>(&self, form: &[Jet<S>], x: &[Jet<S>], y: &[Jet<S>]) -> Jet<S> {
        self.apply(x, &self.pair(form, y)) - self.apply(y, &self.pair(form, x)) - self.pair(form, &self.bracket(x, y))
    }
}

/// Input data: a contact form and a frame of `H^{1,0}` on a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartSpec<S: Scalar> {
    pub chart: Chart,
    /// Coordinate components of θ.
    pub theta: Vec<Jet<S>>,
    /// Coordinate components of each `Z_α`.
    pub frame: Vec<Vec<Jet<S>>>,
}

impl<S: Scalar> ChartSpec<S> {
    /// Heisenberg model: `θ = dt − (i/2)z̄^α dz^α + (i/2)z^α dz̄^α`, `Z_α = ∂_{z^α} + (i/2)z̄^α ∂_t`.
    ///
    /// Then `h = δ`, `T = ∂_t` and `[Z_α, Z_β̄] = −iδ_{αβ̄}T`.
    pub fn heisenberg(n: usize, order: u32) -> Result<Self> {
        let chart = Chart::new(n, order)?;
        let half_i = S::ratio(1, 2).mul_i();
        let mut theta = vec![chart.zero(); chart.nvars()];
        theta[2 * n] = chart.one();
        for a in 0..n {
            theta[a] = chart.var::<S>(n + a).scale(&half_i.neg());
            theta[n + a] = chart.var::<S>(a).scale(&half_i);
        }
        let frame = (0..n)
            .map(|a| {
                let mut z = vec![chart.zero(); chart.nvars()];
                z[a] = chart.one();
                z[2 * n] = chart.var::<S>(n + a).scale(&half_i);
                z
            })
            .collect();
        Ok(ChartSpec { chart, theta, frame })
    }

    /// Real hypersurface `Im w = ½|z|² + F(z, z̄, t)` in `ℂ^{n+1}`, parametrized by `(z, t = Re w)`.
    ///
    /// `Z_α = ∂_{z^α} + X_α ∂_t` with `X_α = i(½z̄^α + ∂_{z^α}F)/(1 − i∂_tF)` and
    /// `θ = dt − X_α dz^α − X_ᾱ dz̄^α`. `F` must be real with no terms below degree 2.
    pub fn hypersurface(n: usize, order: u32, f: &Jet<S>) -> Result<Self> {
        let chart = Chart::new(n, order)?;
        if !(f - &chart.conj(f)).terms().next().is_none() {
            return Err(Error::Validation("hypersurface defining function is not real".into()));
        }
        if f.terms().any(|(m, _)| crate::exactnum::jet::mono_degree(*m) < 2) {
            return Err(Error::Parameter("hypersurface defining function must vanish to second order".into()));
        }
        let denom = chart.one::<S>() - f.d(2 * n).mul_i();
        let inv = denom.invert()?;
        let mut theta = vec![chart.zero(); chart.nvars()];
        theta[2 * n] = chart.one();
        let mut frame = vec![];
        for a in 0..n {
            let x = (&(chart.var::<S>(n + a).scale_ratio(1, 2) + f.d(a)) * &inv).mul_i();
            theta[n + a] = -chart.conj(&x);
            theta[a] = -&x;
            let mut z = vec![chart.zero(); chart.nvars()];
            z[a] = chart.one();
            z[2 * n] = x;
            frame.push(z);
        }
        Ok(ChartSpec { chart, theta, frame })
    }

    pub fn n(&self) -> usize {
        self.chart.n
    }

    /// Levi form `h_{αβ̄} = iθ([Z_α, Z_β̄])` of the current data.
    pub fn levi_form(&self) -> Vec<Vec<Jet<S>>> {
        let ch = &self.chart;
        let bars: Vec<_> = self.frame.iter().map(|z| ch.conj_vector(z)).collect();
        (0..self.n())
            .map(|a| {
                (0..self.n()).map(|b| ch.pair(&self.theta, &ch.bracket(&self.frame[a], &bars[b])).mul_i()).collect()
            })
            .collect()
    }

    /// New frame `Z′_α = Z_α + φ_α^β̄ Z_β̄` with `φ_α^β̄ = φ_{αγ}h^{γβ̄}` for the current Levi form.
    pub fn deformed(&self, phi: &[Vec<Jet<S>>]) -> Result<Self> {
        let n = self.n();
        if phi.len() != n || phi.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("deformation tensor must be {}x{}", n, n)));
        }
        for a in 0..n {
            for b in 0..a {
                if !(&phi[a][b] - &phi[b][a]).terms().next().is_none() {
                    return Err(Error::Validation(format!("deformation tensor is not symmetric in ({}, {})", a + 1, b + 1)));
                }
            }
        }
        let g = levi_inverse(&self.levi_form())?;
        let ch = &self.chart;
        let bars: Vec<_> = self.frame.iter().map(|z| ch.conj_vector(z)).collect();
        let mut frame = self.frame.clone();
        for a in 0..n {
            for b in 0..n {
                let mut coef = ch.zero();
                for c in 0..n {
                    coef = coef + &phi[a][c] * &g[c][b];
                }
                if coef.terms().next().is_none() {
                    continue;
                }
                for k in 0..ch.nvars() {
                    frame[a][k] = &frame[a][k] + &(&coef * &bars[b][k]);
                }
            }
        }
        Ok(ChartSpec { chart: self.chart, theta: self.theta.clone(), frame })
    }

    /// Same frame, contact form `e^u θ`; `u` must be real and vanish at the base point.
    pub fn rescaled(&self, u: &Jet<S>) -> Result<Self> {
        let ch = &self.chart;
        if !(u - &ch.conj(u)).terms().next().is_none() {
            return Err(Error::Validation("conformal factor is not real".into()));
        }
        if !u.constant_term().is_zero() {
            return Err(Error::Parameter("conformal factor must vanish at the base point".into()));
        }
        let e = u.exp()?;
        Ok(ChartSpec { chart: self.chart, theta: self.theta.iter().map(|c| &e * c).collect(), frame: self.frame.clone() })
    }
}

/// Inverse Levi form stored as `g[α][β] = h^{αβ̄}`, so that `Σ_β h^{αβ̄} h_{γβ̄} = δ^α_γ`.
pub fn levi_inverse<S: Scalar>(h: &[Vec<Jet<S>>]) -> Result<Vec<Vec<Jet<S>>>> {
    let n = h.len();
    let ht: Vec<Vec<Jet<S>>> = (0..n).map(|i| (0..n).map(|j| h[j][i].clone()).collect()).collect();
    invert_matrix(&ht).map_err(|_| Error::Signature("Levi form is singular at the base point".into()))
}

/// Everything the calculus derives from a [`ChartSpec`].
#[derive(Clone, Debug)]
pub struct PseudohermitianStructure<S: Scalar> {
    pub chart: Chart,
    pub theta: Vec<Jet<S>>,
    /// Frame vectors `e_K` in coordinates: `Z_α`, `Z_ᾱ`, `T`.
    pub frame: Vec<Vec<Jet<S>>>,
    /// Dual coframe `θ^M` in coordinates: `θ^α`, `θ^ᾱ`, `θ`.
    pub coframe: Vec<Vec<Jet<S>>>,
    /// `c[K][L][M] = θ^M([e_K, e_L])`.
    c: Vec<Jet<S>>,
    /// `h[α][β] = h_{αβ̄}`.
    pub h: Vec<Vec<Jet<S>>>,
    /// `g[α][β] = h^{αβ̄}`.
    pub g: Vec<Vec<Jet<S>>>,
    /// `gamma[K][α][β] = Γ_{Kα}^β = ω_α^β(e_K)`.
    gamma: Vec<Jet<S>>,
    /// `torsion[μ][γ] = A_μ̄^γ`.
    torsion: Vec<Vec<Jet<S>>>,
    /// `nij[γ][α][β] = N^γ̄_{αβ}`.
    nij: Vec<Jet<S>>,
}

/// Builds the full structure: Reeb field, coframe, Levi form, Nijenhuis tensor and connection.
pub fn build_structure<S: Scalar>(spec: &ChartSpec<S>) -> Result<PseudohermitianStructure<S>> {
    let ch = spec.chart;
    let (n, nv) = (ch.n, ch.nvars());
    if spec.theta.len() != nv || spec.frame.len() != n || spec.frame.iter().any(|z| z.len() != nv) {
        return Err(Error::Shape("chart data does not match 2n+1 coordinates".into()));
    }
    for (a, z) in spec.frame.iter().enumerate() {
        if !ch.pair(&spec.theta, z).is_zero() {
            return Err(Error::DegenerateFrame(format!("Z_{} is not annihilated by the contact form", a + 1)));
        }
    }
    let mut frame: Vec<Vec<Jet<S>>> = spec.frame.clone();
    for a in 0..n {
        frame.push(ch.conj_vector(&spec.frame[a]));
    }
    // Frame independence at the base point, checked on constant terms.
    let base: Vec<Vec<S>> = frame.iter().map(|v| v.iter().map(|c| c.constant_term()).collect()).collect();
    if linalg::rank(&base) < 2 * n {
        return Err(Error::DegenerateFrame("Z_α and their conjugates are dependent at the base point".into()));
    }
    // Reeb field: θ(T) = 1 and dθ(T, V) = 0 for V in H.
    let dtheta: Vec<Vec<Jet<S>>> = (0..nv)
        .map(|k| (0..nv).map(|l| &spec.theta[l].d(k) - &spec.theta[k].d(l)).collect())
        .collect();
    let mut sys = vec![spec.theta.clone()];
    for v in &frame {
        sys.push((0..nv).map(|k| (0..nv).fold(ch.zero(), |acc, l| acc + &dtheta[k][l] * &v[l])).collect());
    }
    let inv = invert_matrix(&sys).map_err(|_| Error::DegenerateContact("θ ∧ (dθ)^n vanishes at the base point".into()))?;
    frame.push((0..nv).map(|k| inv[k][0].clone()).collect());

    let ft: Vec<Vec<Jet<S>>> = (0..nv).map(|k| (0..nv).map(|m| frame[m][k].clone()).collect()).collect();
    let coframe = invert_matrix(&ft).map_err(|_| Error::DegenerateFrame("frame is singular".into()))?;

    let mut c = vec![ch.zero(); nv * nv * nv];
    for k in 0..nv {
        for l in (k + 1)..nv {
            let br = ch.bracket(&frame[k], &frame[l]);
            for m in 0..nv {
                let v = ch.pair(&coframe[m], &br);
                c[(l * nv + k) * nv + m] = -&v;
                c[(k * nv + l) * nv + m] = v;
            }
        }
    }
    let cc = |k: usize, l: usize, m: usize| &c[(k * nv + l) * nv + m];

    let h: Vec<Vec<Jet<S>>> = (0..n).map(|a| (0..n).map(|b| cc(a, n + b, 2 * n).mul_i()).collect()).collect();
    check_positive(&h)?;
    let g = levi_inverse(&h)?;

    let mut nij = vec![ch.zero(); n * n * n];
    for gg in 0..n {
        for a in 0..n {
            for b in 0..n {
                nij[(gg * n + a) * n + b] = -cc(a, b, n + gg);
            }
        }
    }

    // Connection: the antiholomorphic and Reeb directions are read off the structure
    // equation; the holomorphic direction then follows from metric compatibility.
    let mut gamma = vec![ch.zero(); nv * n * n];
    let gi = |k: usize, a: usize, b: usize| (k * n + a) * n + b;
    let mut torsion = vec![vec![ch.zero(); n]; n];
    for mu in 0..n {
        for gg in 0..n {
            for nu in 0..n {
                gamma[gi(n + nu, mu, gg)] = -cc(mu, n + nu, gg);
            }
            gamma[gi(2 * n, mu, gg)] = -cc(mu, 2 * n, gg);
            torsion[mu][gg] = cc(n + mu, 2 * n, gg).clone();
        }
    }
    for nu in 0..n {
        for a in 0..n {
            // rhs[β] = Z_ν h_{αβ̄} − h_{αδ̄} conj(Γ_{ν̄β}^δ)
            let rhs: Vec<Jet<S>> = (0..n)
                .map(|b| {
                    let mut r = ch.apply(&frame[nu], &h[a][b]);
                    for d in 0..n {
                        r = r - &h[a][d] * &ch.conj(&gamma[gi(n + nu, b, d)]);
                    }
                    r
                })
                .collect();
            for gg in 0..n {
                gamma[gi(nu, a, gg)] = (0..n).fold(ch.zero(), |acc, b| acc + &rhs[b] * &g[gg][b]);
            }
        }
    }
    Ok(PseudohermitianStructure { chart: ch, theta: spec.theta.clone(), frame, coframe, c, h, g, gamma, torsion, nij })
}

/// Leading principal minors of `h(0)` must be positive.
fn check_positive<S: Scalar>(h: &[Vec<Jet<S>>]) -> Result<()> {
    let n = h.len();
    let m: Vec<Vec<S>> = h.iter().map(|r| r.iter().map(|c| c.constant_term()).collect()).collect();
    for a in 0..n {
        for b in 0..n {
            let d = m[a][b].sub(&m[b][a].conj());
            if d.modulus() > 1e-12 {
                return Err(Error::Signature("Levi form is not Hermitian at the base point".into()));
            }
        }
    }
    for k in 1..=n {
        let sub: Vec<Vec<S>> = (0..k).map(|i| m[i][..k].to_vec()).collect();
        let det = determinant(sub);
        if det.to_complex().re <= 0.0 {
            return Err(Error::Signature(format!("leading minor of order {} is not positive", k)));
        }
    }
    Ok(())
}

fn determinant<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    let mut det = S::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return S::zero();
        };
        if p != col {
            a.swap(p, col);
            det = det.neg();
        }
        det = det.mul(&a[col][col]);
        let inv = a[col][col].inv().expect("nonzero pivot");
        for r in (col + 1)..n {
            let f = a[r][col].mul(&inv);
            for j in col..n {
                let t = f.mul(&a[col][j]);
                a[r][j] = a[r][j].sub(&t);
            }
        }
    }
    det
}

impl<S: Scalar> PseudohermitianStructure<S> {
    pub fn n(&self) -> usize {
        self.chart.n
    }
    /// Number of frame directions, `2n + 1`.
    pub fn dim(&self) -> usize {
        self.chart.nvars()
    }
    pub fn reeb(&self) -> &[Jet<S>] {
        &self.frame[2 * self.n()]
    }
    pub fn zero(&self) -> Jet<S> {
        self.chart.zero()
    }
    pub fn constant(&self, c: S) -> Jet<S> {
        self.chart.constant(c)
    }
    pub fn conj(&self, f: &Jet<S>) -> Jet<S> {
        self.chart.conj(f)
    }
    pub fn bar(&self, k: usize) -> usize {
        self.chart.bar(k)
    }
    /// `e_K(f)`.
    pub fn deriv(&self, k: usize, f: &Jet<S>) -> Jet<S> {
        self.chart.apply(&self.frame[k], f)
    }
    /// `c^M_{KL}`.
    pub fn c(&self, k: usize, l: usize, m: usize) -> &Jet<S> {
        let nv = self.dim();
        &self.c[(k * nv + l) * nv + m]
    }
    /// `Γ_{Kα}^β`.
    pub fn gamma(&self, k: usize, a: usize, b: usize) -> &Jet<S> {
        let n = self.n();
        &self.gamma[(k * n + a) * n + b]
    }
    /// `ω_ᾱ^β̄(e_K) = conj(Γ_{K̄α}^β)`.
    pub fn gamma_bar(&self, k: usize, a: usize, b: usize) -> Jet<S> {
        self.conj(self.gamma(self.bar(k), a, b))
    }
    /// Connection on the full frame: `∇_{e_K} e_J = Σ_M frame_gamma(K, J, M) e_M`; `T` is parallel.
    pub fn frame_gamma(&self, k: usize, j: usize, m: usize) -> Jet<S> {
        let n = self.n();
        if j < n && m < n {
            self.gamma(k, j, m).clone()
        } else if (n..2 * n).contains(&j) && (n..2 * n).contains(&m) {
            self.gamma_bar(k, j - n, m - n)
        } else {
            self.zero()
        }
    }
    /// Imaginary part of `ω_γ^γ`: `ρ(e_K) = ½(ω_γ^γ(e_K) − conj(ω_γ^γ(e_K̄)))`.
    ///
    /// This is the density connection form in any frame; it equals `ω_γ^γ` for unitary frames.
    pub fn rho(&self, k: usize) -> Jet<S> {
        let n = self.n();
        let tr = (0..n).fold(self.zero(), |acc, g| acc + self.gamma(k, g, g));
        let trb = (0..n).fold(self.zero(), |acc, g| acc + self.gamma_bar(k, g, g));
        (tr - trb).scale_ratio(1, 2)
    }
    /// `A_μ̄^γ`.
    pub fn torsion_bar_up(&self, mu: usize, g: usize) -> &Jet<S> {
        &self.torsion[mu][g]
    }
    /// `A_{ᾱβ̄} = A_ᾱ^γ h_{γβ̄}`.
    pub fn torsion_bar(&self, a: usize, b: usize) -> Jet<S> {
        (0..self.n()).fold(self.zero(), |acc, g| acc + &self.torsion[a][g] * &self.h[g][b])
    }
    /// `A_{αβ} = conj(A_{ᾱβ̄})`.
    pub fn torsion_lower(&self, a: usize, b: usize) -> Jet<S> {
        self.conj(&self.torsion_bar(a, b))
    }
    /// `A_α^β̄ = conj(A_ᾱ^β)`.
    pub fn torsion_up(&self, a: usize, b: usize) -> Jet<S> {
        self.conj(&self.torsion[a][b])
    }
    /// `N^γ̄_{αβ}`.
    pub fn nij_bar_up(&self, g: usize, a: usize, b: usize) -> &Jet<S> {
        let n = self.n();
        &self.nij[(g * n + a) * n + b]
    }
    /// `N_{γαβ} = h_{γσ̄} N^σ̄_{αβ}`.
    pub fn nij_lower(&self, g: usize, a: usize, b: usize) -> Jet<S> {
        (0..self.n()).fold(self.zero(), |acc, s| acc + &self.h[g][s] * self.nij_bar_up(s, a, b))
    }
    /// `N^γ_{ᾱβ̄} = conj(N^γ̄_{αβ})`.
    pub fn nij_up(&self, g: usize, a: usize, b: usize) -> Jet<S> {
        self.conj(self.nij_bar_up(g, a, b))
    }

    /// Connection `(Γ, A)` as `(gamma[K][α][β], torsion[μ][γ] = A_μ̄^γ)`.
    pub fn tanaka_webster(&self) -> (Vec<Vec<Vec<Jet<S>>>>, Vec<Vec<Jet<S>>>) {
        let n = self.n();
        let g = (0..self.dim())
            .map(|k| (0..n).map(|a| (0..n).map(|b| self.gamma(k, a, b).clone()).collect()).collect())
            .collect();
        (g, self.torsion.clone())
    }

    /// Residuals of `dθ = i h_{αβ̄} θ^α ∧ θ^β̄` on all frame pairs.
    pub fn levi_residuals(&self) -> Vec<Jet<S>> {
        let (n, nv) = (self.n(), self.dim());
        let mut out = vec![];
        for k in 0..nv {
            for l in (k + 1)..nv {
                let lhs = -self.c(k, l, 2 * n);
                let rhs = if k < n && (n..2 * n).contains(&l) { self.h[k][l - n].mul_i() } else { self.zero() };
                out.push(lhs - rhs);
            }
        }
        out
    }

    /// Residuals of metric compatibility `ω_{αβ̄} + ω_{β̄α} = dh_{αβ̄}` in every direction.
    pub fn metric_residuals(&self) -> Vec<Jet<S>> {
        let n = self.n();
        let mut out = vec![];
        for k in 0..self.dim() {
            for a in 0..n {
                for b in 0..n {
                    let mut r = -self.deriv(k, &self.h[a][b]);
                    for g in 0..n {
                        r = r + self.gamma(k, a, g) * &self.h[g][b] + &self.h[a][g] * &self.gamma_bar(k, b, g);
                    }
                    out.push(r);
                }
            }
        }
        out
    }

    /// Residuals of the first structure equation for `dθ^γ` on all frame pairs.
    pub fn structure_residuals(&self) -> Vec<Jet<S>> {
        let (n, nv) = (self.n(), self.dim());
        let mut out = vec![];
        for g in 0..n {
            for k in 0..nv {
                for l in (k + 1)..nv {
                    let lhs = -self.c(k, l, g);
                    let mut rhs = self.zero();
                    // θ^α ∧ ω_α^γ
                    if k < n {
                        rhs = rhs + self.gamma(l, k, g);
                    }
                    if l < n {
                        rhs = rhs - self.gamma(k, l, g);
                    }
                    // A_ᾱ^γ θ ∧ θ^ᾱ
                    if l == 2 * n && (n..2 * n).contains(&k) {
                        rhs = rhs - &self.torsion[k - n][g];
                    }
                    // ½ N^γ_{ᾱβ̄} θ^ᾱ ∧ θ^β̄
                    if (n..2 * n).contains(&k) && (n..2 * n).contains(&l) {
                        rhs = rhs + self.nij_up(g, k - n, l - n);
                    }
                    out.push(lhs - rhs);
                }
            }
        }
        out
    }

    /// Rank deficiency of the linear system defining `(Γ, A)` at the base point.
    ///
    /// Unknowns are all `Γ_{Kα}^β` and `A_ᾱ^β` as real quantities; zero means the
    /// two defining equations determine the connection uniquely.
    pub fn connection_nullity(&self) -> usize {
        let (n, nv) = (self.n(), self.dim());
        let h0: Vec<Vec<S>> = self.h.iter().map(|r| r.iter().map(|c| c.constant_term()).collect()).collect();
        let ng = nv * n * n;
        let m = ng + n * n;
        let gi = |k: usize, a: usize, b: usize| (k * n + a) * n + b;
        let ai = |a: usize, b: usize| ng + a * n + b;
        // Each equation is (L1, L2) acting on (z, conj z).
        let mut eqs: Vec<(Vec<S>, Vec<S>)> = vec![];
        for k in 0..nv {
            for a in 0..n {
                for b in 0..n {
                    let (mut l1, mut l2) = (vec![S::zero(); m], vec![S::zero(); m]);
                    for g in 0..n {
                        l1[gi(k, a, g)].add_assign(&h0[g][b]);
                        l2[gi(self.bar(k), b, g)].add_assign(&h0[a][g]);
                    }
                    eqs.push((l1, l2));
                }
            }
        }
        for g in 0..n {
            for k in 0..nv {
                for l in (k + 1)..nv {
                    let (mut l1, l2) = (vec![S::zero(); m], vec![S::zero(); m]);
                    if k < n {
                        l1[gi(l, k, g)].add_assign(&S::one());
                    }
                    if l < n {
                        l1[gi(k, l, g)].add_assign(&S::one().neg());
                    }
                    if l == 2 * n && (n..2 * n).contains(&k) {
                        l1[ai(k - n, g)].add_assign(&S::one().neg());
                    }
                    eqs.push((l1, l2));
                }
            }
        }
        let mut rows: Vec<Vec<S>> = vec![];
        for (l1, l2) in &eqs {
            rows.push(l1.iter().chain(l2).cloned().collect());
            rows.push(l2.iter().map(|x| x.conj()).chain(l1.iter().map(|x| x.conj())).collect());
        }
        2 * m - linalg::rank(&rows)
    }
}
