//! CR Killing operator, contact Hamiltonian fields and trivial deformations.

use crate::check::{agree, magnitude, vanishing, CheckOutcome};
use crate::error::{Error, Result};
use crate::exactnum::{invert_matrix, Jet, Scalar};
use crate::pseudoherm::{density_derivatives, rescale_contact_form, PseudohermitianStructure};


/// `ψ = (ψ_{αβ}, ψ_{ᾱβ̄})` of weight (1,1), trivialized by the structure's contact form.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationTensor<S: Scalar> {
    pub hol: Vec<Vec<Jet<S>>>,
    pub bar: Vec<Vec<Jet<S>>>,
}

impl<S: Scalar> DeformationTensor<S> {
    pub fn components(&self) -> Vec<Jet<S>> {
        self.hol.iter().chain(&self.bar).flatten().cloned().collect()
    }

    pub fn map(&self, f: impl Fn(&Jet<S>) -> Jet<S>) -> Self {
        let m = |x: &Vec<Vec<Jet<S>>>| x.iter().map(|r| r.iter().map(&f).collect()).collect();
        DeformationTensor { hol: m(&self.hol), bar: m(&self.bar) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = |x: &Vec<Vec<Jet<S>>>, y: &Vec<Vec<Jet<S>>>| {
            x.iter().zip(y).map(|(a, b)| a.iter().zip(b).map(|(p, q)| p - q).collect()).collect()
        };
        DeformationTensor { hol: m(&self.hol, &o.hol), bar: m(&self.bar, &o.bar) }
    }

    /// Symmetry in the two indices and reality (`ψ_{ᾱβ̄} = conj ψ_{αβ}`) as residuals.
    pub fn invariant_residuals(&self, s: &PseudohermitianStructure<S>) -> Vec<Jet<S>> {
        let n = self.hol.len();
        let mut out = vec![];
        for a in 0..n {
            for b in 0..n {
                out.push(&self.hol[a][b] - &self.hol[b][a]);
                out.push(&self.bar[a][b] - &s.conj(&self.hol[a][b]));
            }
        }
        out
    }
}

/// Ingredients shared by both forms of `D`: `∇∇f`, `∇^γ f` and `∇^γ̄ f`.
struct Derivs<S: Scalar> {
    /// `dd[A][B] = ∇_B∇_A f`.
    dd: Vec<Vec<Jet<S>>>,
    up: Vec<Jet<S>>,
    up_bar: Vec<Jet<S>>,
}

fn derivs<S: Scalar>(s: &PseudohermitianStructure<S>, f: &Jet<S>) -> Result<Derivs<S>> {
    let n = s.n();
    let (t1, t2) = density_derivatives(s, f, (1, 1))?;
    let d1: Vec<Jet<S>> = (0..s.dim()).map(|k| t1.get(&[k]).clone()).collect();
    let dd = (0..s.dim()).map(|a| (0..s.dim()).map(|b| t2.get(&[a, b]).clone()).collect()).collect();
    let up = (0..n).map(|g| (0..n).fold(s.zero(), |acc, sg| acc + &s.g[g][sg] * &d1[n + sg])).collect();
    let up_bar = (0..n).map(|g| (0..n).fold(s.zero(), |acc, sg| acc + &s.g[sg][g] * &d1[sg])).collect();
    Ok(Derivs { dd, up, up_bar })
}

fn require_real<S: Scalar>(s: &PseudohermitianStructure<S>, f: &Jet<S>) -> Result<()> {
    if !crate::check::is_real(f, &s.conj(f)) {
        return Err(Error::Validation("density must be real".into()));
    }
    Ok(())
}

/// `Df = (i∇_{(α}∇_{β)}f − A_{αβ}f + iN_{(αβ)γ}∇^γf, conjugate)` for a real (1,1)-density.
///
/// The sign of the Nijenhuis term is the one for which `Df = L_{X_f}J` and `D` is
/// independent of the contact form; the opposite sign satisfies neither when `N ≠ 0`.
pub fn cr_killing<S: Scalar>(s: &PseudohermitianStructure<S>, f: &Jet<S>) -> Result<DeformationTensor<S>> {
    require_real(s, f)?;
    let n = s.n();
    let d = derivs(s, f)?;
    let mut hol = vec![vec![s.zero(); n]; n];
    let mut bar = vec![vec![s.zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let sym = (&d.dd[a][b] + &d.dd[b][a]).scale_ratio(1, 2);
            let symb = (&d.dd[n + a][n + b] + &d.dd[n + b][n + a]).scale_ratio(1, 2);
            let mut nh = s.zero();
            let mut nb = s.zero();
            for g in 0..n {
                let ns = (s.nij_lower(a, b, g) + s.nij_lower(b, a, g)).scale_ratio(1, 2);
                nh = nh + &ns * &d.up[g];
                nb = nb + s.conj(&ns) * &d.up_bar[g];
            }
            hol[a][b] = (sym + nh).mul_i() - s.torsion_lower(a, b) * f;
            bar[a][b] = (-nb - symb).mul_i() - s.torsion_bar(a, b) * f;
        }
    }
    Ok(DeformationTensor { hol, bar })
}

/// The unsymmetrized form `(i∇_α∇_βf − A_{αβ}f + iN_{βαγ}∇^γf, conjugate)`.
pub fn cr_killing_unsymmetrized<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    f: &Jet<S>,
) -> Result<DeformationTensor<S>> {
    require_real(s, f)?;
    let n = s.n();
    let d = derivs(s, f)?;
    let mut hol = vec![vec![s.zero(); n]; n];
    let mut bar = vec![vec![s.zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut nh = s.zero();
            let mut nb = s.zero();
            for g in 0..n {
                nh = nh + s.nij_lower(b, a, g) * &d.up[g];
                nb = nb + s.conj(&s.nij_lower(b, a, g)) * &d.up_bar[g];
            }
            // ∇_α∇_β f = dd[β][α]
            hol[a][b] = (&d.dd[b][a] + &nh).mul_i() - s.torsion_lower(a, b) * f;
            bar[a][b] = (-nb - &d.dd[n + b][n + a]).mul_i() - s.torsion_bar(a, b) * f;
        }
    }
    Ok(DeformationTensor { hol, bar })
}

/// `X_f = fT + i(∇^αf)Z_α − i(∇^ᾱf)Z_ᾱ` in coordinates.
pub fn contact_hamiltonian<S: Scalar>(s: &PseudohermitianStructure<S>, f: &Jet<S>) -> Result<Vec<Jet<S>>> {
    let n = s.n();
    let d = derivs(s, f)?;
    let mut x: Vec<Jet<S>> = s.reeb().iter().map(|c| c * f).collect();
    for a in 0..n {
        let ca = d.up[a].mul_i();
        let cb = d.up_bar[a].mul_i();
        for k in 0..s.dim() {
            x[k] = &x[k] + &(&ca * &s.frame[a][k]) - &cb * &s.frame[n + a][k];
        }
    }
    Ok(x)
}

/// `X_f` from its defining system `θ(X) = f`, `dθ(X, Y) = −df(Y)` for `Y` in `H`, solved in jets.
pub fn contact_hamiltonian_by_solve<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    f: &Jet<S>,
) -> Result<Vec<Jet<S>>> {
    let (ch, nv) = (&s.chart, s.dim());
    let dtheta: Vec<Vec<Jet<S>>> =
        (0..nv).map(|k| (0..nv).map(|l| &s.theta[l].d(k) - &s.theta[k].d(l)).collect()).collect();
    let mut rows = vec![s.theta.clone()];
    let mut rhs = vec![f.clone()];
    for v in &s.frame[..2 * s.n()] {
        rows.push((0..nv).map(|k| (0..nv).fold(s.zero(), |acc, l| acc + &dtheta[k][l] * &v[l])).collect());
        rhs.push(-ch.apply(v, f));
    }
    let inv = invert_matrix(&rows).map_err(|e| Error::Internal(format!("contact system: {}", e)))?;
    Ok((0..nv).map(|k| (0..nv).fold(s.zero(), |acc, j| acc + &inv[k][j] * &rhs[j])).collect())
}

/// `ψ` with `ψ_α^β̄ = θ^β̄([X, Z_α])`, lowered: `ψ_{αβ} = ψ_α^γ̄ h_{βγ̄}`.
///
/// `X` must be a contact field: `θ([X, Y]) = 0` for `Y` in `H`.
pub fn lie_derivative_j<S: Scalar>(s: &PseudohermitianStructure<S>, x: &[Jet<S>]) -> Result<DeformationTensor<S>> {
    let (n, ch) = (s.n(), &s.chart);
    if x.len() != s.dim() {
        return Err(Error::Shape("vector field has the wrong number of components".into()));
    }
    let brs: Vec<Vec<Jet<S>>> = (0..2 * n).map(|k| ch.bracket(x, &s.frame[k])).collect();
    let leak: Vec<Jet<S>> = brs.iter().map(|br| ch.pair(&s.coframe[2 * n], br)).collect();
    if !vanishing("contact", "", &leak, magnitude(x)).passed {
        return Err(Error::Validation("vector field is not contact: θ([X, Y]) ≠ 0 for some Y in H".into()));
    }
    let mixed: Vec<Vec<Jet<S>>> =
        (0..n).map(|a| (0..n).map(|g| ch.pair(&s.coframe[n + g], &brs[a])).collect()).collect();
    let mixed_bar: Vec<Vec<Jet<S>>> =
        (0..n).map(|a| (0..n).map(|g| ch.pair(&s.coframe[g], &brs[n + a])).collect()).collect();
    let mut hol = vec![vec![s.zero(); n]; n];
    let mut bar = vec![vec![s.zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                hol[a][b] = &hol[a][b] + &(&mixed[a][g] * &s.h[b][g]);
                bar[a][b] = &bar[a][b] + &(&mixed_bar[a][g] * &s.h[g][b]);
            }
        }
    }
    Ok(DeformationTensor { hol, bar })
}

/// The trivial-deformation suite for one density `f` and one conformal factor `u`.
pub fn killing_checks<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    f: &Jet<S>,
    u: &Jet<S>,
    tag: &str,
) -> Result<Vec<CheckOutcome>> {
    let n = s.n();
    let ch = &s.chart;
    let d = cr_killing(s, f)?;
    let du = cr_killing_unsymmetrized(s, f)?;
    let xf = contact_hamiltonian(s, f)?;
    let xs = contact_hamiltonian_by_solve(s, f)?;
    let psi = lie_derivative_j(s, &xf)?;
    let mut out = vec![];
    out.push(agree(&format!("killing.lie_derivative_equals_d{}", tag), "ψ = Df", &psi.components(), &d.components()));
    out.push(agree(&format!("killing.two_forms_agree{}", tag), "D re-expressed", &d.components(), &du.components()));
    let scale = magnitude(&d.components());
    out.push(vanishing(&format!("killing.symmetric_real{}", tag), "ψ ∈ Re E_{(αβ)}(1,1)", &d.invariant_residuals(s), scale));
    out.push(agree(&format!("hamiltonian.defining_system{}", tag), "θ(X_f) = f, dθ(X_f, Y) = −df(Y)", &xf, &xs));
    out.push(agree(&format!("hamiltonian.theta{}", tag), "θ(X_f) = f", &[ch.pair(&s.theta, &xf)], &[f.clone()]));
    // L_{X_f}θ = (Tf)θ on the frame
    let tf = s.deriv(2 * n, f);
    let (mut l, mut r) = (vec![], vec![]);
    for k in 0..s.dim() {
        let te = ch.pair(&s.theta, &s.frame[k]);
        l.push(ch.apply(&xf, &te) - ch.pair(&s.theta, &ch.bracket(&xf, &s.frame[k])));
        r.push(&tf * &te);
    }
    out.push(agree(&format!("hamiltonian.lie_derivative_theta{}", tag), "L_{X_f}θ = (Tf)θ", &l, &r));
    // Independence of the contact form.
    let hat = rescale_contact_form(s, u)?.hat;
    let eu = u.exp()?;
    let fhat = &eu * f;
    let xhat = contact_hamiltonian(&hat, &fhat)?;
    out.push(agree(&format!("hamiltonian.contact_form_independent{}", tag), "X_f independent of θ", &xhat, &xf));
    let dhat = cr_killing(&hat, &fhat)?;
    let back = (-u).exp()?;
    let dback = dhat.map(|c| &back * c);
    out.push(agree(&format!("killing.contact_form_invariant{}", tag), "D independent of θ", &dback.components(), &d.components()));
    Ok(out)
}
