use proptest::prelude::*;

use super::*;

fn header(n: usize, order: u32) -> String {
    format!("name = t\nn = {}\njet_order = {}\n", n, order)
}

fn flat() -> ManifoldSpecFile {
    parse_spec(builtin("flat-h2.spec").unwrap()).unwrap()
}

fn deformed() -> ManifoldSpecFile {
    parse_spec(builtin("deformed-h2").unwrap()).unwrap()
}

#[test]
fn builtin_flat_spec() {
    let s = flat();
    assert_eq!(s.n, 2);
    assert!(s.deformation.is_empty());
    assert_eq!(s.backend, Backend::Exact);
    assert_eq!(s.densities.len(), 1);
    assert!(load_spec(Path::new("flat-h2.spec")).unwrap() == s);
    assert!(builtin("nothing").is_none());
}

#[test]
fn asymmetric_phi_is_rejected() {
    let text = header(2, 4) + "phi 1 2 = z1\nphi 2 1 = zb1\n";
    match parse_spec(&text) {
        Err(Error::Validation(m)) => assert!(m.contains("symmetry"), "{}", m),
        other => panic!("{:?}", other),
    }
    // one triangle or equal entries are fine
    let one = parse_spec(&(header(2, 4) + "phi 2 1 = z2\n")).unwrap();
    assert_eq!(one.deformation.len(), 1);
    assert_eq!(one.deformation[0].0, 0);
    assert_eq!(one.deformation[0].1, 1);
    let both = parse_spec(&(header(2, 4) + "phi 1 2 = z2\nphi 2 1 = z2\n")).unwrap();
    assert_eq!(both, one);
}

#[test]
fn degree_bound_is_enforced() {
    let text = header(2, 4) + "density x = 1 + z1^3 zb1^3\n";
    match parse_spec(&text) {
        Err(Error::Validation(m)) => assert!(m.contains("degree bound") && m.contains("degree 6"), "{}", m),
        other => panic!("{:?}", other),
    }
    assert!(parse_spec(&(header(2, 6) + "density x = 1 + z1^3 zb1^3\n")).is_ok());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let cases = [
        ("n = 2\n\nbogus line\n", 3),
        ("n = 2\nphi 1 3 = z1\n", 2),
        ("n = 2\n# comment\ndensity x = 1 + w1\n", 3),
        ("n = 2\ndensity x = (1 + z1\n", 2),
        ("n = 2\nbackend = fast\n", 2),
        ("n = 2\nn = 3\n", 2),
        ("n = 7\n", 1),
        ("n = 2\ndensity x = 1/0\n", 2),
        ("n = 2\ncolour = red\n", 2),
        ("n = 2\nphi 1 2 = z1\nphi 1 2 = z1\n", 3),
        ("n = 2\nphi 2 1 = z1\n\nphi 2 1 = z1\n", 4),
    ];
    for (text, line) in cases {
        match parse_spec(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{:?}", text),
            other => panic!("{:?} gave {:?}", text, other),
        }
    }
}

#[test]
fn reality_and_base_point_conditions() {
    let complex = header(2, 4) + "density x = z1\n";
    assert!(matches!(parse_spec(&complex), Err(Error::Validation(_))));
    let shifted = header(2, 4) + "u = 1 + z1 zb1\n";
    assert!(matches!(parse_spec(&shifted), Err(Error::Validation(_))));
    // |φ(0)| > 1 flips the Levi form at the base point
    let flipped = header(1, 4) + "phi 1 1 = 2\n";
    assert!(matches!(parse_spec(&flipped), Err(Error::Signature(_))));
    assert!(parse_spec(&(header(1, 4) + "phi 1 1 = 1/2\n")).is_ok());
}

#[test]
fn polynomial_syntax() {
    let nv = 5;
    let p = parse::parse(&(header(2, 4) + "u = (1/2+1/3 i)*z1 zb2^2 - 3 t + 2/4 i z2\n")).unwrap().conformal_factor.unwrap();
    let mut e = vec![0; nv];
    e[0] = 1;
    e[3] = 2;
    assert_eq!(p.terms[&e], Qi::from_parts((1, 2), (1, 3)));
    let mut e = vec![0; nv];
    e[4] = 1;
    assert_eq!(p.terms[&e], Qi::from_i64(-3));
    let mut e = vec![0; nv];
    e[1] = 1;
    assert_eq!(p.terms[&e], Qi::from_parts((0, 1), (1, 2)));
    assert_eq!(p.degree(), 3);
    let q = parse::parse(&(header(2, 4) + "u = (z1 + zb1)^2 - z1^2 - zb1^2 - 2 z1 zb1\n")).unwrap().conformal_factor.unwrap();
    assert!(q.is_zero());
}

#[test]
fn deformed_builtin_is_not_integrable() {
    let s = deformed();
    let st = crate::pseudoherm::build_structure(&s.chart_spec::<Qi>(s.jet_order).unwrap()).unwrap();
    assert!(!st.nij_norm_sq().truncated(0).is_zero());
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0u32..3, 5), -4i64..5, 1i64..4, -4i64..5, 1i64..4);
    prop::collection::vec(term, 0..5).prop_map(|ts| {
        let mut p = Polynomial::zero(5);
        for (e, a, b, c, d) in ts {
            p = p.add(&Polynomial { nvars: 5, terms: [(e, Qi::from_parts((a, b), (c, d)))].into_iter().filter(|(_, c)| !c.is_zero()).collect() });
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_round_trips(p in poly_strategy()) {
        let text = header(2, 8) + &format!("u = {}\n", p);
        let back = parse::parse(&text).unwrap().conformal_factor.unwrap();
        prop_assert_eq!(back, p);
    }
}

// ---- suites ----

fn ids(r: &Report) -> Vec<&str> {
    r.checks.iter().map(|c| c.outcome.id.as_str()).collect()
}

#[test]
fn flat_spec_passes_everything_exactly() {
    let r = run_suite(&flat(), Suite::All, &RunOptions::default()).unwrap();
    let bad: Vec<_> = r.checks.iter().filter(|c| c.status != "exact-zero").map(|c| &c.outcome).collect();
    assert!(bad.is_empty(), "{:#?}", bad);
    assert!(r.passed);
    assert_eq!(r.weyl_order, Some(5));
    for prefix in ["liealg.", "homology.", "tw.", "killing.", "hamiltonian.", "weyl.", "bgg."] {
        assert!(ids(&r).iter().any(|i| i.starts_with(prefix)), "no {} checks", prefix);
    }
    // N = 0: the integrable comparisons are present, the non-integrable witness is not
    assert!(r.get("weyl.gover_graham.z0").is_some());
    assert!(r.get("bgg.adjoint_eq_cr_killing@x").is_some());
    assert!(r.get("bgg.adjoint_ne_cr_killing@x").is_none());
}

#[test]
fn deformed_spec_bgg_suite() {
    let r = run_suite(&deformed(), Suite::Bgg, &RunOptions { density: Some("x".into()), ..Default::default() }).unwrap();
    assert!(r.passed, "{:#?}", r.failures().collect::<Vec<_>>());
    assert_eq!(r.get("bgg.modified_eq_cr_killing@x").unwrap().status, "exact-zero");
    let ne = r.get("bgg.adjoint_ne_cr_killing@x").unwrap();
    assert!(ne.outcome.passed, "{:?}", ne);
    assert!(r.get("bgg.adjoint_eq_cr_killing@x").is_none());
    assert!(r.get("bgg.pivot").unwrap().outcome.note.as_deref().unwrap().contains("≠ 0"));
    assert!(run_suite(&deformed(), Suite::Bgg, &RunOptions { density: Some("nope".into()), ..Default::default() }).is_err());
}

#[test]
fn homology_suite_reports_dimension_tables() {
    for n in 1..=2 {
        let spec = parse_spec(&header(n, 4)).unwrap();
        let r = run_suite(&spec, Suite::Homology, &RunOptions::default()).unwrap();
        assert!(r.passed, "{:#?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.homology.len(), 4);
        for t in &r.homology {
            let (h0, h1) = expected_homology(t.rep, n);
            assert_eq!(t.homology_dim, if t.k == 0 { h0 } else { h1 });
        }
        assert!(r.inputs.is_empty());
    }
}

#[test]
fn reports_are_deterministic_and_ids_unique() {
    let spec = deformed();
    let a = run_suite(&spec, Suite::Crkilling, &RunOptions { threads: Some(1), ..Default::default() }).unwrap();
    let b = run_suite(&spec, Suite::Crkilling, &RunOptions { threads: Some(4), ..Default::default() }).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let mut seen = ids(&a);
    let before = seen.len();
    seen.dedup();
    assert_eq!(seen.len(), before);
    assert!(seen.windows(2).all(|w| w[0] < w[1]), "sorted by id");
    // timings are opt-in
    assert!(!a.to_json().contains("runtime_ms"));
    let t = run_suite(&spec, Suite::Crkilling, &RunOptions { timings: true, ..Default::default() }).unwrap();
    assert!(t.to_json().contains("runtime_ms"));
    assert_eq!(a.inputs.len(), 2);
    assert_eq!(a.seed, 2);
}

#[test]
fn module_errors_are_recorded_per_check() {
    // at jet order 1 the curvature cannot be formed: recorded, not fatal
    let r = run_suite(&flat(), Suite::Pseudoherm, &RunOptions { order: Some(1), ..Default::default() }).unwrap();
    assert!(!r.passed);
    assert!(r.checks.iter().any(|c| c.outcome.id.ends_with(".setup.error") || c.outcome.id.ends_with(".error")));
    assert!(run_suite(&flat(), Suite::Pseudoherm, &RunOptions { order: Some(0), ..Default::default() }).is_err());
}

#[test]
fn float_backend_suite() {
    let text = builtin("deformed-h2").unwrap().replace("backend = exact", "backend = float");
    let spec = parse_spec(&text).unwrap();
    let r = run_suite(&spec, Suite::Crkilling, &RunOptions::default()).unwrap();
    assert!(r.passed, "{:#?}", r.failures().collect::<Vec<_>>());
    assert_eq!(r.backend, "float");
}
