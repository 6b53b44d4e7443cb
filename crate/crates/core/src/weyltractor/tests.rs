use std::sync::OnceLock;

use proptest::prelude::*;

use super::*;
use crate::check::{vanishing, FLOAT_TOL};
use crate::crops::{contact_hamiltonian, cr_killing, DeformationTensor};
use crate::exactnum::{Cf, Qi};
use crate::homology::RepKind;
use crate::pseudoherm::{build_structure, curvature, ChartSpec};
use crate::samples;
use rand_chacha::ChaCha8Rng;

/// Jet order 5: `z₀` enters the curvature through its first derivatives.
const ORDER: u32 = 5;

struct Fixture {
    s: PseudohermitianStructure<Qi>,
    pkg: CurvaturePackage<Qi>,
    w: WeylForm<Qi>,
    kappa: TractorCurvature<Qi>,
}

fn fixture(s: PseudohermitianStructure<Qi>) -> Fixture {
    let pkg = curvature(&s).unwrap();
    let w = normal_weyl_form(&s, &pkg).unwrap();
    let kappa = weyl_curvature(&s, &w).unwrap();
    Fixture { s, pkg, w, kappa }
}

fn flat() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture(build_structure(&ChartSpec::heisenberg(2, ORDER).unwrap()).unwrap()))
}

fn deformed() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture(build_structure(&samples::deformed_heisenberg(2, ORDER, 1).unwrap()).unwrap()))
}

/// One order higher: the defining function of the hypersurface uses up a degree.
fn integrable() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture(build_structure(&samples::integrable_hypersurface(2, ORDER + 1, 1).unwrap()).unwrap()))
}

fn all_zero(v: &[Jet<Qi>]) -> bool {
    v.iter().all(|j| j.is_zero())
}

fn diff(a: &[Jet<Qi>], b: &[Jet<Qi>]) -> Vec<Jet<Qi>> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

fn poly(s: &PseudohermitianStructure<Qi>, r: &mut ChaCha8Rng) -> Jet<Qi> {
    samples::random_poly::<Qi>(&s.chart, r, 3, 3).add_scalar(&Qi::from_parts((1, 2), (-1, 3)))
}

fn real(s: &PseudohermitianStructure<Qi>, r: &mut ChaCha8Rng) -> Jet<Qi> {
    samples::random_density::<Qi>(&s.chart, r, 3, 3)
}

fn random_standard(s: &PseudohermitianStructure<Qi>, r: &mut ChaCha8Rng) -> StandardSection<Qi> {
    StandardSection { s: poly(s, r), t: (0..s.n()).map(|_| poly(s, r)).collect(), u: poly(s, r) }
}

fn random_cotractor(s: &PseudohermitianStructure<Qi>, r: &mut ChaCha8Rng) -> CotractorSection<Qi> {
    CotractorSection { sigma: poly(s, r), tau: (0..s.n()).map(|_| poly(s, r)).collect(), rho: poly(s, r) }
}

/// A real-form section: `A_{βγ̄}` skew-Hermitian and `Im a` fixed by the trace.
fn random_adjoint(s: &PseudohermitianStructure<Qi>, r: &mut ChaCha8Rng) -> AdjointSection<Qi> {
    let n = s.n();
    let b: Vec<Vec<Jet<Qi>>> = (0..n).map(|_| (0..n).map(|_| poly(s, r)).collect()).collect();
    let low = |i: usize, j: usize| &b[i][j] - &s.conj(&b[j][i]);
    let a_mid: Vec<Vec<Jet<Qi>>> =
        (0..n).map(|be| (0..n).map(|al| (0..n).fold(s.zero(), |acc, g| acc + &s.g[al][g] * &low(be, g))).collect()).collect();
    let tr = (0..n).fold(s.zero(), |acc, a| acc + &a_mid[a][a]);
    let a = real(s, r) - tr.scale_ratio(1, 2);
    let z_low: Vec<Jet<Qi>> = (0..n).map(|_| poly(s, r)).collect();
    let x_up: Vec<Jet<Qi>> = (0..n).map(|_| poly(s, r)).collect();
    AdjointSection::from_parts(s, &a, &z_low, &real(s, r), &x_up, &a_mid, &real(s, r))
}

// ---- normal Weyl form ----

#[test]
fn flat_model_has_vanishing_rho_and_curvature() {
    let f = flat();
    assert!(all_zero(&f.w.components()));
    assert!(f.kappa.k.iter().flatten().flatten().flatten().all(|j| j.is_zero()));
    assert!(check_normality(&f.s, &f.kappa).unwrap().is_normal());
}

#[test]
fn normal_on_deformed_heisenberg() {
    let f = deformed();
    let rep = check_normality(&f.s, &f.kappa).unwrap();
    for l in 1..=4 {
        assert!(!rep.residual(l).is_empty());
        assert!(all_zero(rep.residual(l)), "homogeneity {}", l);
    }
    assert!(all_zero(&rep.low_homogeneity), "regularity");
    assert!(all_zero(&rep.traces));
    assert!(rep.scale > 0.0, "the example is not flat");
    assert!(all_zero(&f.w.shape_residuals(&f.s)));
}

#[test]
fn curvature_below_homogeneity_two_is_nijenhuis() {
    let f = deformed();
    let n = f.s.n();
    // the g₋ part of K(Z_α, Z_β) sits in the bottom-middle entries
    let k = &f.kappa.k;
    let mut seen_nonzero = false;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            assert!(k[a][b][n + 1][0].is_zero());
            for c in 0..n {
                assert!(k[a][b][1 + c][0].is_zero());
            }
            seen_nonzero |= (0..n).any(|g| !k[a][b][n + 1][1 + g].is_zero());
        }
    }
    assert!(seen_nonzero);
}

#[test]
fn every_single_rho_fault_is_detected_at_its_homogeneity() {
    let f = deformed();
    for c in RhoComponent::ALL {
        let kappa = weyl_curvature(&f.s, &f.w.perturbed(c)).unwrap();
        let rep = check_normality(&f.s, &kappa).unwrap();
        let h = c.homogeneity();
        for l in 1..h {
            assert!(all_zero(rep.residual(l)), "{} leaks into homogeneity {}", c.name(), l);
        }
        assert!(!all_zero(rep.residual(h)), "{} undetected", c.name());
    }
}

#[test]
fn a0_fault_breaks_homogeneity_two() {
    let f = flat();
    let kappa = weyl_curvature(&f.s, &f.w.perturbed(RhoComponent::A0)).unwrap();
    assert!(!all_zero(check_normality(&f.s, &kappa).unwrap().residual(2)));
}

#[test]
fn closed_formulas_agree_with_curvature_route() {
    for f in [deformed(), integrable()] {
        let b = weyl_form_from_curvature(&f.s, &f.pkg).unwrap();
        assert!(all_zero(&diff(&f.w.components(), &b.components())));
    }
}

#[test]
fn integrable_components_match_gover_graham() {
    let f = integrable();
    assert!(f.s.nij_norm_sq().is_zero());
    let t = gover_graham_t(&f.s, &f.pkg).unwrap();
    assert!(t.iter().any(|j| !j.is_zero()));
    for b in 0..f.s.n() {
        assert!((&f.w.z_reeb[b] + &t[b].mul_i().scale_ratio(2, 1)).is_zero());
        assert!((&f.w.z_sigma[b] - &t[b].mul_i()).is_zero());
    }
    let big_s = gover_graham_s(&f.s, &f.pkg).unwrap();
    assert!(!big_s.is_zero());
    assert!((&f.w.z0 + &big_s).is_zero());
    assert!(!(&f.w.z0 - &big_s).is_zero());
    assert!(check_normality(&f.s, &f.kappa).unwrap().is_normal());
}

#[test]
fn order_exhaustion_is_reported() {
    let s = build_structure(&samples::deformed_heisenberg::<Qi>(2, 4, 1).unwrap()).unwrap();
    let pkg = curvature(&s).unwrap();
    let w = normal_weyl_form(&s, &pkg).unwrap();
    assert!(matches!(weyl_curvature(&s, &w), Err(Error::Order(_))));
}

#[test]
fn float_backend_normality() {
    let s = build_structure(&samples::deformed_heisenberg::<Cf>(2, ORDER, 1).unwrap()).unwrap();
    let pkg = curvature(&s).unwrap();
    let w = normal_weyl_form(&s, &pkg).unwrap();
    let rep = check_normality(&s, &weyl_curvature(&s, &w).unwrap()).unwrap();
    for l in 1..=4 {
        let c = vanishing("normality", "", rep.residual(l), rep.scale);
        assert!(c.passed && c.max_residual <= FLOAT_TOL * rep.scale.max(1.0), "homogeneity {}: {:e}", l, c.max_residual);
    }
}

// ---- tractor connections ----

#[test]
fn standard_and_cotractor_displays_match_matrix_route() {
    let f = deformed();
    let mut r = samples::rng(11);
    let v = random_standard(&f.s, &mut r);
    let c = random_cotractor(&f.s, &mut r);
    for k in 0..f.s.dim() {
        let a = standard_tractor_deriv(&f.s, &f.w, &v, k).unwrap();
        let b = standard_deriv_matrix(&f.s, &f.w, &v, k).unwrap();
        assert!(all_zero(&diff(&a.to_vec(), &b.to_vec())), "standard, direction {}", k);
        let a = cotractor_deriv(&f.s, &f.w, &c, k).unwrap();
        let b = cotractor_deriv_matrix(&f.s, &f.w, &c, k).unwrap();
        assert!(all_zero(&diff(&a.to_vec(), &b.to_vec())), "cotractor, direction {}", k);
    }
}

#[test]
fn standard_bottom_entry_in_barred_direction() {
    let f = deformed();
    let n = f.s.n();
    let mut r = samples::rng(12);
    let v = random_standard(&f.s, &mut r);
    let du = crate::pseudoherm::density_derivatives(&f.s, &v.u, (0, 1)).unwrap().0;
    for sg in 0..n {
        let d = standard_tractor_deriv(&f.s, &f.w, &v, n + sg).unwrap();
        let t_bar = (0..n).fold(f.s.zero(), |acc, b| acc + &f.s.h[b][sg] * &v.t[b]);
        assert!((&d.u - &(du.get(&[n + sg]) - &t_bar)).is_zero());
    }
}

#[test]
fn flat_constant_standard_section() {
    let f = flat();
    let n = f.s.n();
    let u = f.s.constant(Qi::from_parts((3, 1), (1, 2)));
    let v = StandardSection { s: f.s.zero(), t: vec![f.s.zero(); n], u };
    for k in 0..f.s.dim() {
        assert!(all_zero(&standard_tractor_deriv(&f.s, &f.w, &v, k).unwrap().to_vec()));
    }
}

#[test]
fn pairing_obeys_leibniz() {
    let f = deformed();
    let mut r = samples::rng(13);
    for _ in 0..2 {
        let v = random_standard(&f.s, &mut r);
        let c = random_cotractor(&f.s, &mut r);
        let p = pairing(&c, &v);
        for k in 0..f.s.dim() {
            let lhs = f.s.deriv(k, &p);
            let rhs = pairing(&cotractor_deriv(&f.s, &f.w, &c, k).unwrap(), &v)
                + pairing(&c, &standard_tractor_deriv(&f.s, &f.w, &v, k).unwrap());
            assert!((&lhs - &rhs).is_zero(), "direction {}", k);
        }
    }
}

#[test]
fn adjoint_display_matches_matrix_and_end_realization() {
    let f = deformed();
    let mut r = samples::rng(14);
    let v = random_adjoint(&f.s, &mut r);
    assert!(all_zero(&v.invariant_residuals(&f.s)));
    for k in 0..f.s.dim() {
        let a = adjoint_tractor_deriv(&f.s, &f.w, &v, k).unwrap();
        let b = adjoint_deriv_matrix(&f.s, &f.w, &v, k).unwrap();
        let e = adjoint_deriv_end(&f.s, &f.w, &v, k).unwrap();
        assert!(all_zero(&mat_diff(&a.matrix, &b.matrix).concat()), "display, direction {}", k);
        assert!(all_zero(&mat_diff(&e.matrix, &b.matrix).concat()), "End(V), direction {}", k);
        assert!(trace(&f.s, &b.matrix).is_zero());
    }
}

#[test]
fn adjoint_bottom_left_entry() {
    let f = deformed();
    let mut r = samples::rng(15);
    let v = random_adjoint(&f.s, &mut r);
    for sg in 0..f.s.n() {
        let d = adjoint_tractor_deriv(&f.s, &f.w, &v, sg).unwrap();
        let expect = f.s.deriv(sg, &v.x()).mul_i() + v.x_low(sg);
        assert!((&d.matrix[f.s.n() + 1][0] - &expect).is_zero());
    }
}

#[test]
fn flat_adjoint_connection_is_derivative_plus_soldering() {
    let f = flat();
    let mut r = samples::rng(16);
    let v = random_adjoint(&f.s, &mut r);
    let xi = crate::liealg::build_algebra::<Qi>(2).unwrap().1.xi;
    let ys = soldering_vectors(&f.s);
    // on the flat model τ(Y_A) = ξ_A exactly
    for (a, y) in ys.iter().enumerate() {
        let k = y.iter().position(|c| !c.is_zero()).unwrap();
        let d = adjoint_deriv_matrix(&f.s, &f.w, &v, k).unwrap();
        let xim: JetMatrix<Qi> = xi[a].iter().map(|row| row.iter().map(|c| f.s.constant(c.clone())).collect()).collect();
        let expect = mat_sum(
            &v.matrix.iter().map(|row| row.iter().map(|x| f.s.deriv(k, x)).collect()).collect(),
            &jet_commutator(&f.s, &xim, &v.matrix),
        );
        assert!(all_zero(&mat_diff(&d.matrix, &expect).concat()), "label {}", a);
    }
}

#[test]
fn modified_connection() {
    let f = flat();
    let mut r = samples::rng(17);
    let v = random_adjoint(&f.s, &mut r);
    for k in 0..f.s.dim() {
        let a = modified_adjoint_deriv(&f.s, &f.w, &f.kappa, &v, k).unwrap();
        let b = adjoint_deriv_matrix(&f.s, &f.w, &v, k).unwrap();
        assert!(all_zero(&mat_diff(&a.matrix, &b.matrix).concat()));
    }
    let f = deformed();
    let v = random_adjoint(&f.s, &mut r);
    let differs = (0..f.s.dim()).any(|k| {
        let a = modified_adjoint_deriv(&f.s, &f.w, &f.kappa, &v, k).unwrap();
        let b = adjoint_deriv_matrix(&f.s, &f.w, &v, k).unwrap();
        !all_zero(&mat_diff(&a.matrix, &b.matrix).concat())
    });
    assert!(differs);
}

#[test]
fn wrong_rank_sections_are_rejected() {
    let f = flat();
    let v = StandardSection { s: f.s.zero(), t: vec![f.s.zero(); 1], u: f.s.zero() };
    assert!(matches!(standard_tractor_deriv(&f.s, &f.w, &v, 0), Err(Error::Shape(_))));
    assert!(matches!(standard_tractor_deriv(&f.s, &f.w, &v, 9), Err(Error::Index { .. })));
}

// ---- splittings ----

#[test]
fn standard_splitting() {
    let f = deformed();
    let mut r = samples::rng(18);
    for _ in 0..2 {
        let u = poly(&f.s, &mut r);
        let lu = split_standard(&f.s, &f.w, &u).unwrap();
        assert_eq!(lu.u, u);
        let solved = split_standard_by_solve(&f.s, &f.w, &u).unwrap();
        assert!(all_zero(&diff(&lu.to_vec(), &solved.to_vec())));
        let res = splitting_residual(&f.s, &f.w, RepKind::Standard, AdjointConnection::Normal, &lu.to_vec()).unwrap();
        assert!(all_zero(&res));
        // uniqueness: moving t breaks the characterization
        let mut bad = lu.clone();
        bad.t[0] = bad.t[0].add_scalar(&Qi::one());
        let res = splitting_residual(&f.s, &f.w, RepKind::Standard, AdjointConnection::Normal, &bad.to_vec()).unwrap();
        assert!(!all_zero(&res));
    }
}

#[test]
fn flat_constant_splittings() {
    let f = flat();
    let c = f.s.constant(Qi::from_i64(3));
    let lu = split_standard(&f.s, &f.w, &c).unwrap();
    assert!(lu.s.is_zero() && lu.t.iter().all(|t| t.is_zero()));
    let lx = split_adjoint(&f.s, &f.w, &c).unwrap();
    let n = f.s.n();
    for (i, row) in lx.matrix.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if (i, j) == (n + 1, 0) {
                assert_eq!(*e, c.mul_i());
            } else {
                assert!(e.is_zero(), "entry ({}, {})", i, j);
            }
        }
    }
}

#[test]
fn adjoint_splitting() {
    let f = deformed();
    let mut r = samples::rng(19);
    let x = real(&f.s, &mut r);
    let lx = split_adjoint(&f.s, &f.w, &x).unwrap();
    assert_eq!(lx.x(), x);
    assert!(all_zero(&lx.invariant_residuals(&f.s)));
    let coords = jet_sl_coords(&f.s, &lx.matrix);
    assert!(all_zero(&splitting_residual(&f.s, &f.w, RepKind::Adjoint, AdjointConnection::Normal, &coords).unwrap()));
    // solving grade −1 as well reproduces X^α = i∇^αx
    let full = split_adjoint_by_solve(&f.s, &f.w, &x).unwrap();
    assert!(all_zero(&mat_diff(&full.matrix, &lx.matrix).concat()));
    // Π(Lx) is the contact Hamiltonian field of x
    let xf = contact_hamiltonian(&f.s, &x).unwrap();
    let pi = lx.projection(&f.s);
    let coords: Vec<Jet<Qi>> =
        (0..f.s.dim()).map(|i| pi.iter().zip(&f.s.frame).fold(f.s.zero(), |acc, (c, e)| acc + c * &e[i])).collect();
    assert!(all_zero(&diff(&coords, &xf)));
    assert!(split_adjoint(&f.s, &f.w, &x.mul_i()).is_err());
}

// ---- first BGG operators ----

fn deformation_zero(d: &DeformationTensor<Qi>) -> bool {
    all_zero(&d.components())
}

#[test]
fn standard_bgg_closed_form_and_composite_agree() {
    let mut r = samples::rng(20);
    for f in [deformed(), integrable()] {
        let u = poly(&f.s, &mut r);
        let a = bgg_standard(&f.s, &u).unwrap();
        let b = bgg_standard_composite(&f.s, &f.w, &u).unwrap();
        assert!(all_zero(&a.sub(&b).components()));
    }
    let f = flat();
    let c = f.s.constant(Qi::from_i64(2));
    assert!(all_zero(&bgg_standard(&f.s, &c).unwrap().components()));
}

#[test]
fn standard_bgg_reduces_to_two_terms_when_integrable() {
    let f = integrable();
    let n = f.s.n();
    let mut r = samples::rng(21);
    let u = poly(&f.s, &mut r);
    let d = bgg_standard(&f.s, &u).unwrap();
    let (_, d2) = crate::pseudoherm::density_derivatives(&f.s, &u, (0, 1)).unwrap();
    for a in 0..n {
        for b in 0..n {
            // ∇_ᾱ∇_β̄u − iA_{ᾱβ̄}u, already symmetric when N = 0
            let two = d2.get(&[n + b, n + a]) - &(f.s.torsion_bar(a, b) * &u).mul_i();
            assert!((&d.bar[a][b] - &two).is_zero());
        }
    }
}

#[test]
fn adjoint_bgg_closed_form_and_composite_agree() {
    let f = deformed();
    let mut r = samples::rng(22);
    let x = real(&f.s, &mut r);
    let a = bgg_adjoint(&f.s, &x).unwrap();
    let b = bgg_adjoint_composite(&f.s, &f.w, &x).unwrap();
    assert!(deformation_zero(&a.sub(&b)));
    assert!(all_zero(&a.invariant_residuals(&f.s)));
}

#[test]
fn modified_bgg_is_the_cr_killing_operator() {
    let f = deformed();
    let mut r = samples::rng(23);
    for _ in 0..2 {
        let x = real(&f.s, &mut r);
        let m = bgg_modified(&f.s, &f.w, &f.kappa, &x).unwrap();
        let d = cr_killing(&f.s, &x).unwrap();
        assert!(deformation_zero(&m.sub(&d)));
        let plain = bgg_adjoint(&f.s, &x).unwrap();
        assert!(!deformation_zero(&plain.sub(&d)));
        assert!(deformation_zero(&m.sub(&plain).sub(&bgg_difference(&f.s, &x).unwrap())));
        // the operator with the opposite Nijenhuis sign is neither D₀^∇̃ nor its negative
        let printed = d.sub(&nijenhuis_term(&f.s, &x).map(|j| j.scale_ratio(2, 1)));
        assert!(!deformation_zero(&printed.sub(&m)));
        assert!(!deformation_zero(&printed.sub(&m.map(|j| -j))));
    }
}

/// `(iN_{(αβ)γ}∇^γx, conjugate)`.
fn nijenhuis_term(s: &PseudohermitianStructure<Qi>, x: &Jet<Qi>) -> DeformationTensor<Qi> {
    let n = s.n();
    let dx = crate::pseudoherm::density_derivatives(s, x, (1, 1)).unwrap().0;
    let up: Vec<Jet<Qi>> = (0..n).map(|g| (0..n).fold(s.zero(), |acc, d| acc + &s.g[g][d] * dx.get(&[n + d]))).collect();
    let hol: Vec<Vec<Jet<Qi>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..n).fold(s.zero(), |acc, g| {
                        acc + (s.nij_lower(a, b, g) + s.nij_lower(b, a, g)).scale_ratio(1, 2) * &up[g]
                    })
                    .mul_i()
                })
                .collect()
        })
        .collect();
    let bar = hol.iter().map(|r| r.iter().map(|j| s.conj(j)).collect()).collect();
    DeformationTensor { hol, bar }
}

#[test]
fn bgg_operators_coincide_without_nijenhuis_tensor() {
    let mut r = samples::rng(24);
    for f in [flat(), integrable()] {
        let x = real(&f.s, &mut r);
        let m = bgg_modified(&f.s, &f.w, &f.kappa, &x).unwrap();
        assert!(deformation_zero(&m.sub(&bgg_adjoint(&f.s, &x).unwrap())));
        assert!(deformation_zero(&m.sub(&cr_killing(&f.s, &x).unwrap())));
    }
}

#[test]
fn pivot_identity_with_nonzero_nijenhuis_norm() {
    let f = deformed();
    let (lhs, rhs) = non_prolongation_pivot(&f.s, &f.pkg);
    assert!((&lhs - &rhs).is_zero());
    assert!(!f.s.nij_norm_sq().truncated(0).is_zero(), "|N|² vanishes at the base point");
}

#[test]
fn float_backend_bgg() {
    let s = build_structure(&samples::deformed_heisenberg::<Cf>(2, ORDER, 1).unwrap()).unwrap();
    let pkg = curvature(&s).unwrap();
    let w = normal_weyl_form(&s, &pkg).unwrap();
    let kappa = weyl_curvature(&s, &w).unwrap();
    let mut r = samples::rng(25);
    let x = samples::random_density::<Cf>(&s.chart, &mut r, 3, 3);
    let m = bgg_modified(&s, &w, &kappa, &x).unwrap();
    let d = cr_killing(&s, &x).unwrap();
    let scale = crate::check::magnitude(&d.components());
    let c = vanishing("bgg", "", &m.sub(&d).components(), scale);
    assert!(c.passed, "{:e}", c.max_residual);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]
    #[test]
    fn splitting_is_linear(seed in 0u64..1000) {
        let f = deformed();
        let mut r = samples::rng(seed);
        let x = real(&f.s, &mut r);
        let y = real(&f.s, &mut r);
        let lx = split_adjoint(&f.s, &f.w, &x).unwrap();
        let ly = split_adjoint(&f.s, &f.w, &y).unwrap();
        let lxy = split_adjoint(&f.s, &f.w, &(&x + &y)).unwrap();
        prop_assert!(all_zero(&mat_diff(&mat_sum(&lx.matrix, &ly.matrix), &lxy.matrix).concat()));
    }
}
