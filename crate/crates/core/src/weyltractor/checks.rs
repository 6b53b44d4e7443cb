//! Check suites for the Weyl form and the first BGG operators.

use super::*;
use crate::check::{agree, magnitude, nonvanishing, vanishing, CheckOutcome};
use crate::crops::{contact_hamiltonian, cr_killing};
use crate::homology::RepKind;
use crate::pseudoherm::density_derivatives;

fn integrable<S: Scalar>(s: &PseudohermitianStructure<S>) -> bool {
    let nn = s.nij_norm_sq();
    !nonvanishing(&[nn], 1.0)
}

/// Normality, regularity, closed forms and single-component fault detection.
///
/// The Gover-Graham comparisons are added when `N` vanishes on the chart.
pub fn weyl_checks<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    pkg: &CurvaturePackage<S>,
    w: &WeylForm<S>,
    kappa: &TractorCurvature<S>,
) -> Result<Vec<CheckOutcome>> {
    let mut out = vec![];
    let rep = check_normality(s, kappa)?;
    out.push(vanishing("weyl.shape", "Rho components symmetric and real", &w.shape_residuals(s), magnitude(&w.components())));
    for l in 1..=4 {
        out.push(vanishing(&format!("weyl.normality.h{}", l), "∂*κ = 0", rep.residual(l), rep.scale));
    }
    out.push(vanishing("weyl.regularity", "κ has homogeneity ≥ 1", &rep.low_homogeneity, rep.scale));
    out.push(vanishing("weyl.trace_free", "κ takes values in g̃", &rep.traces, rep.scale));
    let closed = weyl_form_from_curvature(s, pkg)?;
    out.push(agree("weyl.closed_forms", "Rho from curvature closed forms", &w.components(), &closed.components()));
    for c in RhoComponent::ALL {
        let faulty = check_normality(s, &weyl_curvature(s, &w.perturbed(c))?)?;
        let h = c.homogeneity();
        let clean_below = (1..h).all(|l| !nonvanishing(faulty.residual(l), faulty.scale));
        let detected = nonvanishing(faulty.residual(h), faulty.scale);
        out.push(CheckOutcome::boolean(
            &format!("weyl.fault.{}", c.name()),
            "perturbed Rho component breaks normality",
            clean_below && detected,
            Some(format!("detected at homogeneity {}", h)),
        ));
    }
    if integrable(s) {
        let t = gover_graham_t(s, pkg)?;
        let big_s = gover_graham_s(s, pkg)?;
        let reeb: Vec<Jet<S>> = t.iter().map(|j| -j.mul_i().scale_ratio(2, 1)).collect();
        let sigma: Vec<Jet<S>> = t.iter().map(|j| j.mul_i()).collect();
        out.push(agree("weyl.gover_graham.z_reeb", "Z_{β0} = −2iT_β", &w.z_reeb, &reeb));
        out.push(agree("weyl.gover_graham.z_sigma", "z_σ = iT_σ", &w.z_sigma, &sigma));
        out.push(agree("weyl.gover_graham.z0", "z₀ = −S", &[w.z0.clone()], &[-big_s]));
    }
    Ok(out)
}

/// Splittings and first BGG operators for a real density `x` and a density `u` of weight (0, 1).
pub fn bgg_checks<S: Scalar>(
    s: &PseudohermitianStructure<S>,
    w: &WeylForm<S>,
    kappa: &TractorCurvature<S>,
    x: &Jet<S>,
    u: &Jet<S>,
    tag: &str,
) -> Result<Vec<CheckOutcome>> {
    let n = s.n();
    let mut out = vec![];
    let id = |name: &str| format!("{}{}", name, tag);

    // Standard tractors.
    let lu = split_standard(s, w, u)?;
    let solved = split_standard_by_solve(s, w, u)?;
    out.push(agree(&id("bgg.split_standard.graded_solve"), "L(u) unique with ∂*(∇Lu) = 0", &lu.to_vec(), &solved.to_vec()));
    let res = splitting_residual(s, w, RepKind::Standard, AdjointConnection::Normal, &lu.to_vec())?;
    out.push(vanishing(&id("bgg.split_standard.characterization"), "∂*(∇Lu) = 0", &res, magnitude(&lu.to_vec())));
    let closed = bgg_standard(s, u)?;
    let composite = bgg_standard_composite(s, w, u)?;
    out.push(agree(&id("bgg.standard.closed_form"), "D₀u = proj∘∇∘L(u)", &closed.components(), &composite.components()));
    if integrable(s) {
        let (_, d2) = density_derivatives(s, u, (0, 1))?;
        let mut two = vec![];
        for a in 0..n {
            for b in 0..n {
                two.push(d2.get(&[n + b, n + a]) - &(s.torsion_bar(a, b) * u).mul_i());
            }
        }
        out.push(agree(&id("bgg.standard.two_term_form"), "D₀u = ∇∇u − iAu when N = 0", &closed.bar.concat(), &two));
    }

    // Adjoint tractors.
    let lx = split_adjoint(s, w, x)?;
    out.push(vanishing(&id("bgg.split_adjoint.real_form"), "L(x) is su(n+1,1)-valued", &lx.invariant_residuals(s), magnitude(&lx.matrix.concat())));
    let coords = jet_sl_coords(s, &lx.matrix);
    let res = splitting_residual(s, w, RepKind::Adjoint, AdjointConnection::Normal, &coords)?;
    out.push(vanishing(&id("bgg.split_adjoint.characterization"), "∂*(∇Lx) = 0", &res, magnitude(&coords)));
    let full = split_adjoint_by_solve(s, w, x)?;
    out.push(agree(&id("bgg.split_adjoint.graded_solve"), "X^α = i∇^αx from the graded solve", &full.matrix.concat(), &lx.matrix.concat()));
    let xf = contact_hamiltonian(s, x)?;
    let pi = lx.projection(s);
    let field: Vec<Jet<S>> =
        (0..s.dim()).map(|i| pi.iter().zip(&s.frame).fold(s.zero(), |acc, (c, e)| acc + c * &e[i])).collect();
    out.push(agree(&id("bgg.split_adjoint.hamiltonian_field"), "Π(Lx) = X_x", &field, &xf));

    let d = cr_killing(s, x)?;
    let m = bgg_modified(s, w, kappa, x)?;
    let plain = bgg_adjoint(s, x)?;
    let composite = bgg_adjoint_composite(s, w, x)?;
    out.push(agree(&id("bgg.modified_eq_cr_killing"), "proj∘∇̃∘L = D", &m.components(), &d.components()));
    out.push(agree(&id("bgg.adjoint.closed_form"), "D₀^∇ closed form = proj∘∇∘L", &plain.components(), &composite.components()));
    let diff = bgg_difference(s, x)?;
    out.push(agree(&id("bgg.adjoint.difference"), "D − D₀^∇ = iN∇x + (i/n)(∇*N)x", &m.sub(&plain).components(), &diff.components()));
    if integrable(s) {
        out.push(agree(&id("bgg.adjoint_eq_cr_killing"), "D₀^∇ = D when N = 0", &plain.components(), &d.components()));
    } else {
        let gap = plain.sub(&d).components();
        let witnessed = nonvanishing(&gap, magnitude(&d.components()));
        out.push(CheckOutcome::boolean(
            &id("bgg.adjoint_ne_cr_killing"),
            "D₀^∇ ≠ D when N ≠ 0",
            witnessed,
            Some(format!("max |D₀^∇x − Dx| coefficient {:.6e}", magnitude(&gap))),
        ));
    }
    Ok(out)
}

/// `P″ − P = −|N|²/(4(n+1))`, with a note on whether `|N|²` is witnessed nonzero at the base point.
pub fn pivot_check<S: Scalar>(s: &PseudohermitianStructure<S>, pkg: &CurvaturePackage<S>) -> CheckOutcome {
    let (lhs, rhs) = non_prolongation_pivot(s, pkg);
    let at_base = s.nij_norm_sq().truncated(0);
    let note = if nonvanishing(&[at_base], 1.0) { "|N|² ≠ 0 at the base point" } else { "|N|² = 0 at the base point" };
    agree("bgg.pivot", "P″ − P = −|N|²/(4(n+1))", &[lhs], &[rhs]).with_note(note)
}
