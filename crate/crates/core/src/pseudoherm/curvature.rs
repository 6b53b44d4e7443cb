//! Curvature decomposition, Ricci and Schouten variants, and their identities.

use crate::check::{agree, vanishing, CheckOutcome};
use crate::error::{Error, Result};
use crate::exactnum::{Jet, Scalar};

use super::tensor::{covariant_derivative, Slot, Tensor};
use super::PseudohermitianStructure;

/// Components of `Π_α^β = dω_α^β − ω_α^γ ∧ ω_γ^β` in the coframe, plus contractions.
#[derive(Clone, Debug)]
pub struct CurvaturePackage<S: Scalar> {
    /// `R_α^β_{στ̄}` as `[α][β][σ][τ]`.
    pub r: Tensor<S>,
    /// `W_α^β_γ`.
    pub w_hol: Tensor<S>,
    /// `W_α^β_γ̄`.
    pub w_bar: Tensor<S>,
    /// `V_α^β_{στ}`.
    pub v_hol: Tensor<S>,
    /// `V_α^β_{σ̄τ̄}`.
    pub v_bar: Tensor<S>,
    pub ricci: Tensor<S>,
    pub ricci1: Tensor<S>,
    pub ricci2: Tensor<S>,
    pub scal: Jet<S>,
    pub scal1: Jet<S>,
    pub scal2: Jet<S>,
    pub schouten: Tensor<S>,
    pub schouten1: Tensor<S>,
    pub schouten2: Tensor<S>,
    /// Traces `P`, `P′`, `P″`.
    pub p: Jet<S>,
    pub p1: Jet<S>,
    pub p2: Jet<S>,
}

impl<S: Scalar> PseudohermitianStructure<S> {
    /// `Π_α^β(e_K, e_L)`.
    pub fn curvature_form(&self, k: usize, l: usize, a: usize, b: usize) -> Jet<S> {
        let n = self.n();
        let mut v = self.deriv(k, self.gamma(l, a, b)) - self.deriv(l, self.gamma(k, a, b));
        for m in 0..self.dim() {
            let c = self.c(k, l, m);
            if c.terms().next().is_some() {
                v = v - self.gamma(m, a, b) * c;
            }
        }
        for g in 0..n {
            v = v - self.gamma(k, a, g) * self.gamma(l, g, b) + self.gamma(l, a, g) * self.gamma(k, g, b);
        }
        v
    }

    /// Trace against the inverse Levi form: `Σ h^{αβ̄} t(α, β)`.
    pub fn levi_trace(&self, t: impl Fn(usize, usize) -> Jet<S>) -> Jet<S> {
        let n = self.n();
        let mut acc = self.zero();
        for a in 0..n {
            for b in 0..n {
                acc = acc + &self.g[a][b] * &t(a, b);
            }
        }
        acc
    }

    /// `|N|² = N_{αβγ} N^{αβγ}`.
    pub fn nij_norm_sq(&self) -> Jet<S> {
        self.norm_sq(|a, b, c| self.nij_lower(a, b, c))
    }

    /// Squared norm of a fully covariant unbarred 3-tensor.
    pub fn norm_sq(&self, t: impl Fn(usize, usize, usize) -> Jet<S>) -> Jet<S> {
        let n = self.n();
        let low: Vec<Jet<S>> = (0..n * n * n).map(|i| t(i / (n * n), (i / n) % n, i % n)).collect();
        let mut acc = self.zero();
        for i in 0..n * n * n {
            let (a, b, c) = (i / (n * n), (i / n) % n, i % n);
            for j in 0..n * n * n {
                let (x, y, z) = (j / (n * n), (j / n) % n, j % n);
                let m = &(&self.g[a][x] * &self.g[b][y]) * &self.g[c][z];
                if m.terms().next().is_some() {
                    acc = acc + &(&m * &low[i]) * &self.conj(&low[j]);
                }
            }
        }
        acc
    }

    /// `N^{μλ}_β̄ = h^{μm̄} h^{λl̄} conj(N_{mlβ})`.
    pub fn nij_raised(&self, mu: usize, la: usize, b: usize) -> Jet<S> {
        let n = self.n();
        let mut acc = self.zero();
        for m in 0..n {
            for l in 0..n {
                let f = &self.g[mu][m] * &self.g[la][l];
                if f.terms().next().is_some() {
                    acc = acc + f * self.conj(&self.nij_lower(m, l, b));
                }
            }
        }
        acc
    }

    /// `A^{βσ} = h^{βμ̄} h^{σν̄} A_{μ̄ν̄}`.
    pub fn torsion_raised(&self, b: usize, s: usize) -> Jet<S> {
        let n = self.n();
        let mut acc = self.zero();
        for m in 0..n {
            for v in 0..n {
                acc = acc + &(&self.g[b][m] * &self.g[s][v]) * &self.torsion_bar(m, v);
            }
        }
        acc
    }

    /// `A_{αβ}` as a tensor of weight (0,0).
    pub fn torsion_tensor(&self) -> Tensor<S> {
        Tensor::from_fn(self.n(), &[Slot::Down, Slot::Down], (0, 0), |i| self.torsion_lower(i[0], i[1]))
    }

    /// `N_{γαβ}` as a tensor.
    pub fn nij_tensor(&self) -> Tensor<S> {
        Tensor::from_fn(self.n(), &[Slot::Down, Slot::Down, Slot::Down], (0, 0), |i| self.nij_lower(i[0], i[1], i[2]))
    }

    /// `(∇*N)^sym_{αβ} = −∇^γ N_{(αβ)γ}` and `(∇*N)^skew_{αβ} = −∇^γ N_{[αβ]γ}`.
    pub fn div_nij(&self) -> Result<(Tensor<S>, Tensor<S>)> {
        let n = self.n();
        let dn = covariant_derivative(&self.nij_tensor(), self)?;
        // ∇^γ N_{αβγ} = h^{γσ̄} ∇_σ̄ N_{αβγ}
        let up = |a: usize, b: usize| {
            let mut acc = self.zero();
            for g in 0..n {
                for s in 0..n {
                    acc = acc + &self.g[g][s] * dn.get(&[a, b, g, n + s]);
                }
            }
            acc
        };
        let raw: Vec<Vec<Jet<S>>> = (0..n).map(|a| (0..n).map(|b| up(a, b)).collect()).collect();
        let sym = Tensor::from_fn(n, &[Slot::Down, Slot::Down], (0, 0), |i| {
            -(&raw[i[0]][i[1]] + &raw[i[1]][i[0]]).scale_ratio(1, 2)
        });
        let skew = Tensor::from_fn(n, &[Slot::Down, Slot::Down], (0, 0), |i| {
            -(&raw[i[0]][i[1]] - &raw[i[1]][i[0]]).scale_ratio(1, 2)
        });
        Ok((sym, skew))
    }
}

/// Decomposes the curvature form and forms all contractions.
pub fn curvature<S: Scalar>(s: &PseudohermitianStructure<S>) -> Result<CurvaturePackage<S>> {
    let n = s.n();
    let t0 = 2 * n;
    let r = Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::Down, Slot::BarDown], (0, 0), |i| {
        s.curvature_form(i[2], n + i[3], i[0], i[1])
    });
    if r.components().iter().any(|c| c.is_exhausted()) {
        return Err(Error::Order("curvature needs two more jet orders than are available".into()));
    }
    let w_hol = Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::Down], (0, 0), |i| s.curvature_form(i[2], t0, i[0], i[1]));
    let w_bar =
        Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::BarDown], (0, 0), |i| s.curvature_form(n + i[2], t0, i[0], i[1]));
    let v_hol = Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::Down, Slot::Down], (0, 0), |i| {
        s.curvature_form(i[2], i[3], i[0], i[1])
    });
    let v_bar = Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::BarDown, Slot::BarDown], (0, 0), |i| {
        s.curvature_form(n + i[2], n + i[3], i[0], i[1])
    });
    // R_{αβ̄στ̄} = R_α^γ_{στ̄} h_{γβ̄}
    let r_low = |a: usize, b: usize, sg: usize, t: usize| {
        (0..n).fold(s.zero(), |acc, g| acc + r.get(&[a, g, sg, t]) * &s.h[g][b])
    };
    let ricci = Tensor::from_fn(n, &[Slot::Down, Slot::BarDown], (0, 0), |i| {
        (0..n).fold(s.zero(), |acc, g| acc + r.get(&[g, g, i[0], i[1]]))
    });
    let ricci1 =
        Tensor::from_fn(n, &[Slot::Down, Slot::BarDown], (0, 0), |i| s.levi_trace(|sg, t| r_low(i[0], i[1], sg, t)));
    let ricci2 = Tensor::from_fn(n, &[Slot::Down, Slot::BarDown], (0, 0), |i| {
        (0..n).fold(s.zero(), |acc, g| acc + r.get(&[i[0], g, g, i[1]]))
    });
    let trace = |t: &Tensor<S>| s.levi_trace(|a, b| t.get(&[a, b]).clone());
    let (scal, scal1, scal2) = (trace(&ricci), trace(&ricci1), trace(&ricci2));
    let schouten_of = |ric: &Tensor<S>, sc: &Jet<S>| {
        Tensor::from_fn(n, &[Slot::Down, Slot::BarDown], (0, 0), |i| {
            let corr = (sc * &s.h[i[0]][i[1]]).scale_ratio(1, 2 * (n as i64 + 1));
            (ric.get(i) - &corr).scale_ratio(1, n as i64 + 2)
        })
    };
    let schouten = schouten_of(&ricci, &scal);
    let schouten1 = schouten_of(&ricci1, &scal1);
    let schouten2 = schouten_of(&ricci2, &scal2);
    let (p, p1, p2) = (trace(&schouten), trace(&schouten1), trace(&schouten2));
    Ok(CurvaturePackage {
        r,
        w_hol,
        w_bar,
        v_hol,
        v_bar,
        ricci,
        ricci1,
        ricci2,
        scal,
        scal1,
        scal2,
        schouten,
        schouten1,
        schouten2,
        p,
        p1,
        p2,
    })
}

/// Closed forms of `W` and `V` in terms of `A`, `N` and their derivatives:
/// `(W_α^β_γ, W_α^β_γ̄, V_α^β_{στ}, V_α^β_{σ̄τ̄})`.
pub fn closed_forms<S: Scalar>(s: &PseudohermitianStructure<S>) -> Result<[Tensor<S>; 4]> {
    let n = s.n();
    let da = covariant_derivative(&s.torsion_tensor(), s)?;
    let dn = covariant_derivative(&s.nij_tensor(), s)?;
    // A^β_γ̄ = A_γ̄^β as [BarDown γ][Up β]
    let a_mixed = Tensor::from_fn(n, &[Slot::BarDown, Slot::Up], (0, 0), |i| s.torsion_bar_up(i[0], i[1]).clone());
    let da_mixed = covariant_derivative(&a_mixed, s)?;
    // N^β_{σ̄τ̄} as [Up β][BarDown σ][BarDown τ]
    let n_up = Tensor::from_fn(n, &[Slot::Up, Slot::BarDown, Slot::BarDown], (0, 0), |i| s.nij_up(i[0], i[1], i[2]));
    let dn_up = covariant_derivative(&n_up, s)?;
    let raise_bar = |b: usize, f: &dyn Fn(usize) -> Jet<S>| {
        (0..n).fold(s.zero(), |acc, sg| acc + &s.g[b][sg] * &f(n + sg))
    };
    let w_hol = Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::Down], (0, 0), |i| {
        let (a, b, g) = (i[0], i[1], i[2]);
        let mut v = raise_bar(b, &|k| da.get(&[a, g, k]).clone());
        for sg in 0..n {
            v = v + s.nij_lower(a, g, sg) * s.torsion_raised(b, sg);
        }
        v
    });
    let w_bar = Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::BarDown], (0, 0), |i| {
        let (a, b, g) = (i[0], i[1], i[2]);
        let mut v = -da_mixed.get(&[g, b, a]);
        for sg in 0..n {
            v = v - s.nij_up(b, g, sg) * s.torsion_up(a, sg);
        }
        v
    });
    let delta = |x: usize, y: usize| if x == y { s.constant(S::one()) } else { s.zero() };
    let v_hol = Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::Down, Slot::Down], (0, 0), |i| {
        let (a, b, sg, t) = (i[0], i[1], i[2], i[3]);
        let alt = (delta(sg, b) * s.torsion_lower(a, t) - delta(t, b) * s.torsion_lower(a, sg)).mul_i();
        alt - raise_bar(b, &|k| dn.get(&[a, sg, t, k]).clone())
    });
    let v_bar = Tensor::from_fn(n, &[Slot::Down, Slot::Up, Slot::BarDown, Slot::BarDown], (0, 0), |i| {
        let (a, b, sg, t) = (i[0], i[1], i[2], i[3]);
        let alt = (&s.h[a][sg] * s.torsion_bar_up(t, b) - &s.h[a][t] * s.torsion_bar_up(sg, b)).mul_i();
        alt + dn_up.get(&[b, sg, t, a])
    });
    Ok([w_hol, w_bar, v_hol, v_bar])
}

fn all<S: Scalar>(t: &Tensor<S>) -> Vec<Jet<S>> {
    t.components().to_vec()
}

/// The Tanaka-Webster identity suite on one structure.
pub fn identity_checks<S: Scalar>(s: &PseudohermitianStructure<S>) -> Vec<CheckOutcome> {
    let mut out = vec![];
    let n = s.n();
    let scale_h = crate::check::magnitude(&s.h.concat());
    out.push(vanishing("tw.levi_form", "dθ = i h θ^α∧θ^β̄", &s.levi_residuals(), scale_h));
    out.push(vanishing("tw.metric_compatibility", "ω_{αβ̄}+ω_{β̄α} = dh", &s.metric_residuals(), scale_h));
    out.push(vanishing("tw.first_structure_equation", "dθ^γ structure equation", &s.structure_residuals(), scale_h));
    let nullity = s.connection_nullity();
    out.push(CheckOutcome::boolean(
        "tw.connection_unique",
        "uniquely determined connection",
        nullity == 0,
        Some(format!("nullity {}", nullity)),
    ));
    let (mut a1, mut a2) = (vec![], vec![]);
    for a in 0..n {
        for b in 0..n {
            a1.push(s.torsion_lower(a, b));
            a2.push(s.torsion_lower(b, a));
        }
    }
    out.push(agree("tw.torsion_symmetric", "A_{αβ} = A_{βα}", &a1, &a2));
    let (mut sym, mut cyc) = (vec![], vec![]);
    for g in 0..n {
        for a in 0..n {
            for b in 0..n {
                sym.push(s.nij_lower(g, a, b) + s.nij_lower(g, b, a));
                cyc.push(s.nij_lower(g, a, b) + s.nij_lower(a, b, g) + s.nij_lower(b, g, a));
            }
        }
    }
    out.push(vanishing("nij.antisymmetric", "N_{γ(αβ)} = 0", &sym, 1.0));
    out.push(vanishing("nij.cyclic", "N_{αβγ}+N_{βγα}+N_{γαβ} = 0", &cyc, 1.0));
    let nn = s.nij_norm_sq();
    let skew = s.norm_sq(|a, b, c| (s.nij_lower(a, b, c) - s.nij_lower(b, a, c)).scale_ratio(1, 2));
    let symn = s.norm_sq(|a, b, c| (s.nij_lower(a, b, c) + s.nij_lower(b, a, c)).scale_ratio(1, 2));
    out.push(agree("nij.skew_norm", "|N^skew|² = ¼|N|²", &[skew], &[nn.scale_ratio(1, 4)]));
    out.push(agree("nij.sym_norm", "|N^sym|² = ¾|N|²", &[symn], &[nn.scale_ratio(3, 4)]));

    let pkg = match curvature(s) {
        Ok(p) => p,
        Err(e) => {
            out.push(CheckOutcome::failed("curvature.build", "curvature form", e.to_string()));
            return out;
        }
    };
    let r_low = |a: usize, b: usize, sg: usize, t: usize| {
        (0..n).fold(s.zero(), |acc, g| acc + pkg.r.get(&[a, g, sg, t]) * &s.h[g][b])
    };
    let (mut l, mut r, mut l2, mut r2) = (vec![], vec![], vec![], vec![]);
    for a in 0..n {
        for b in 0..n {
            for sg in 0..n {
                for t in 0..n {
                    l.push(r_low(a, b, sg, t));
                    r.push(s.conj(&r_low(b, a, t, sg)));
                    l2.push(pkg.r.get(&[a, b, sg, t]) - pkg.r.get(&[sg, b, a, t]));
                    r2.push((0..n).fold(s.zero(), |acc, g| acc - s.nij_bar_up(g, a, sg) * s.nij_up(b, t, g)));
                }
            }
        }
    }
    out.push(agree("curvature.hermitian_symmetry", "R_{αβ̄στ̄} = R_{β̄ατ̄σ}", &l, &r));
    out.push(agree("curvature.nijenhuis_exchange", "R_α^β_{στ̄} − R_σ^β_{ατ̄} = −N N", &l2, &r2));
    match closed_forms(s) {
        Ok([wh, wb, vh, vb]) => {
            out.push(agree("curvature.w_hol_closed_form", "W_α^β_γ = ∇^βA_{αγ} + N A", &all(&pkg.w_hol), &all(&wh)));
            out.push(agree("curvature.w_bar_closed_form", "W_α^β_γ̄ = −∇_αA^β_γ̄ − N A", &all(&pkg.w_bar), &all(&wb)));
            out.push(agree("curvature.v_hol_closed_form", "V_α^β_{στ} = 2iδA − ∇^βN", &all(&pkg.v_hol), &all(&vh)));
            out.push(agree("curvature.v_bar_closed_form", "V_α^β_{σ̄τ̄} = 2ihA + ∇_αN", &all(&pkg.v_bar), &all(&vb)));
        }
        Err(e) => out.push(CheckOutcome::failed("curvature.closed_forms", "W and V closed forms", e.to_string())),
    }
    let (mut rc1, mut rc1e, mut rc2, mut rc2e, mut herm, mut hermc) = (vec![], vec![], vec![], vec![], vec![], vec![]);
    for a in 0..n {
        for b in 0..n {
            let mut c1 = pkg.ricci.get(&[a, b]).clone();
            let mut c2 = pkg.ricci.get(&[a, b]).clone();
            for la in 0..n {
                for mu in 0..n {
                    let nr = s.nij_raised(mu, la, b);
                    c1 = c1 + (s.nij_lower(a, la, mu) + s.nij_lower(la, a, mu)) * &nr;
                    c2 = c2 - s.nij_lower(la, mu, a) * &nr;
                }
            }
            rc1.push(pkg.ricci1.get(&[a, b]).clone());
            rc1e.push(c1);
            rc2.push(pkg.ricci2.get(&[a, b]).clone());
            rc2e.push(c2);
            herm.push(pkg.ricci2.get(&[a, b]).clone());
            hermc.push(s.conj(pkg.ricci2.get(&[b, a])));
        }
    }
    out.push(agree("ricci.primed", "R′ = R + 2N_{(αλ)μ}N^{μλ}_β̄", &rc1, &rc1e));
    out.push(agree("ricci.double_primed", "R″ = R − N_{λμα}N^{μλ}_β̄", &rc2, &rc2e));
    out.push(agree("ricci.double_primed_hermitian", "R″_{αβ̄} = R″_{β̄α}", &herm, &hermc));
    out.push(agree("ricci.scalar_primed", "R′ = R", &[pkg.scal1.clone()], &[pkg.scal.clone()]));
    out.push(agree("ricci.scalar_double_primed", "R″ = R − ½|N|²", &[pkg.scal2.clone()], &[&pkg.scal - &nn.scale_ratio(1, 2)]));
    out.push(agree("schouten.primed_trace", "P′ = P", &[pkg.p1.clone()], &[pkg.p.clone()]));
    let np = nn.scale_ratio(1, 4 * (n as i64 + 1));
    out.push(agree("schouten.double_primed_trace", "P″ = P − |N|²/(4(n+1))", &[pkg.p2.clone()], &[&pkg.p - &np]));
    out
}
