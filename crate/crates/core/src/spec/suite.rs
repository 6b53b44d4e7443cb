//! Suite orchestration: builds the structures a spec describes, runs the
//! selected check groups on a small worker pool and assembles a report sorted
//! by check id.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use super::{ManifoldSpecFile, Polynomial};
use crate::check::CheckOutcome;
use crate::crops::killing_checks;
use crate::error::{Error, Result};
use crate::exactnum::linalg::Matrix;
use crate::crops::cr_killing;
use crate::exactnum::jet::mono_exponent;
use crate::exactnum::{Backend, Cf, Jet, Qi, Scalar};
use crate::homology::{homology_space, Chain, ChainContext, HomologyReport, RepKind};
use crate::liealg::{build_algebra, killing_form};
use crate::pseudoherm::{
    build_structure, commutator_checks, curvature, identity_checks, transformation_checks, CurvaturePackage,
    PseudohermitianStructure,
};
use crate::samples;
use crate::weyltractor::{bgg_adjoint, bgg_checks, bgg_modified, normal_weyl_form, pivot_check, weyl_checks, weyl_curvature, TractorCurvature, WeylForm};

/// Lowest jet order at which the Weyl curvature has reach ≥ 1 in every normality component.
pub const WEYL_MIN_ORDER: u32 = 5;

const DENSITY_WEIGHTS: [(i64, i64); 3] = [(1, 1), (0, 1), (2, -1)];
const DUALITY_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Homology,
    Pseudoherm,
    Crkilling,
    Weyl,
    Bgg,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["homology", "pseudoherm", "crkilling", "weyl", "bgg", "all"];

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Homology, Suite::Pseudoherm, Suite::Crkilling, Suite::Weyl, Suite::Bgg],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homology" => Ok(Suite::Homology),
            "pseudoherm" => Ok(Suite::Pseudoherm),
            "crkilling" => Ok(Suite::Crkilling),
            "weyl" => Ok(Suite::Weyl),
            "bgg" => Ok(Suite::Bgg),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parameter(format!("unknown suite '{}' (expected one of {})", s, Suite::NAMES.join(", ")))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::Homology, Suite::Pseudoherm, Suite::Crkilling, Suite::Weyl, Suite::Bgg, Suite::All]
            .iter()
            .position(|s| s == self)
            .expect("listed");
        write!(f, "{}", Suite::NAMES[i])
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the spec's jet order.
    pub order: Option<u32>,
    /// Restricts the per-density checks to one named input.
    pub density: Option<String>,
    /// Records wall-clock runtimes; the report is then no longer byte-reproducible.
    pub timings: bool,
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    #[serde(flatten)]
    pub outcome: CheckOutcome,
    /// `exact-zero`, `residual` (passed within float tolerance) or `failed`.
    pub status: &'static str,
    /// Runtime of the group that produced the check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputRecord {
    pub name: String,
    /// Real density used as `f`, `x` and `u`-type input.
    pub density: String,
    /// Real conformal factor paired with it.
    pub conformal_factor: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub spec: String,
    pub suite: Suite,
    pub n: usize,
    pub jet_order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weyl_order: Option<u32>,
    pub backend: String,
    pub seed: u64,
    pub inputs: Vec<InputRecord>,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub homology: Vec<HomologyReport>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.outcome.passed)
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.outcome.id == id)
    }

    /// Deterministic pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "spec {} | suite {} | n = {} | jet order {} | backend {} | seed {}\n",
            self.spec, self.suite, self.n, self.jet_order, self.backend, self.seed
        );
        if let Some(w) = self.weyl_order {
            out += &format!("weyl/bgg jet order {}\n", w);
        }
        for i in &self.inputs {
            out += &format!("input {}: x = {} ; u = {}\n", i.name, i.density, i.conformal_factor);
        }
        for h in &self.homology {
            out += &format!(
                "H_{}({}, n = {}): dim {} (kernel {}, image {}) by homogeneity {}\n",
                h.k,
                h.rep,
                h.n,
                h.homology_dim,
                h.kernel_dim,
                h.image_dim,
                h.by_homogeneity
                    .iter()
                    .filter(|r| r.homology > 0)
                    .map(|r| format!("[{}: {}]", r.homogeneity, r.homology))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
        }
        for c in &self.checks {
            let o = &c.outcome;
            let mark = if o.passed { "PASS" } else { "FAIL" };
            out += &format!("{} {:<10} {} [{}] max residual {:.3e}", mark, c.status, o.id, o.anchor, o.max_residual);
            if let Some(n) = &o.note {
                out += &format!(" ({})", n);
            }
            if let Some(ms) = c.runtime_ms {
                out += &format!(" {} ms", ms);
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        out += &format!("{} checks, {} failed\n", self.checks.len(), failed);
        out
    }
}

/// One density input with its conformal factor.
#[derive(Clone, Debug)]
struct Input {
    name: String,
    x: Polynomial,
    u: Polynomial,
}

/// Named densities first, then `random_inputs` seeded ones. Conformal factors come from the
/// spec when given and from the same generator otherwise.
fn inputs(spec: &ManifoldSpecFile, order: u32) -> Result<Vec<Input>> {
    let chart = crate::pseudoherm::Chart::new(spec.n, order)?;
    let mut rng = samples::rng(spec.seed);
    let deg = |d: u32| d.min(order).max(1);
    let mut out: Vec<Input> = spec
        .densities
        .iter()
        .map(|d| Input { name: d.name.clone(), x: d.poly.clone(), u: Polynomial::zero(spec.nvars()) })
        .collect();
    for i in 0..spec.random_inputs {
        let x = samples::random_density::<Qi>(&chart, &mut rng, deg(3), 3);
        out.push(Input { name: format!("r{}", i + 1), x: Polynomial::from_jet(&x), u: Polynomial::zero(spec.nvars()) });
    }
    for inp in &mut out {
        inp.u = match &spec.conformal_factor {
            Some(u) => u.clone(),
            None => Polynomial::from_jet(&samples::random_real_poly::<Qi>(&chart, &mut rng, deg(2), 2)),
        };
    }
    Ok(out)
}

type Job<'a> = (String, Box<dyn FnOnce() -> Result<Vec<CheckOutcome>> + Send + 'a>);

/// Runs jobs on a worker pool; results come back in job order.
fn run_jobs(jobs: Vec<Job<'_>>, threads: usize) -> Vec<(String, Result<Vec<CheckOutcome>>, Duration)> {
    let count = jobs.len();
    let queue = Mutex::new(jobs.into_iter().enumerate().collect::<Vec<_>>());
    let results = Mutex::new(Vec::with_capacity(count));
    std::thread::scope(|scope| {
        for _ in 0..threads.max(1).min(count.max(1)) {
            scope.spawn(|| loop {
                let Some((i, (name, job))) = queue.lock().expect("queue lock").pop() else { break };
                let start = Instant::now();
                let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(job))
                    .unwrap_or_else(|_| Err(Error::Internal(format!("check group {} panicked", name))));
                results.lock().expect("results lock").push((i, name, r, start.elapsed()));
            });
        }
    });
    let mut results = results.into_inner().expect("results lock");
    results.sort_by_key(|r| r.0);
    results.into_iter().map(|(_, n, r, d)| (n, r, d)).collect()
}

fn tagged(v: Vec<CheckOutcome>, tag: &str) -> Vec<CheckOutcome> {
    v.into_iter()
        .map(|mut c| {
            c.id.push_str(tag);
            c
        })
        .collect()
}

struct Prepared<S: Scalar> {
    s: PseudohermitianStructure<S>,
    pkg: CurvaturePackage<S>,
}

fn prepare<S: Scalar>(spec: &ManifoldSpecFile, order: u32) -> Result<Prepared<S>> {
    let s = build_structure(&spec.chart_spec::<S>(order)?)?;
    let pkg = curvature(&s)?;
    Ok(Prepared { s, pkg })
}

struct PreparedWeyl<S: Scalar> {
    base: Prepared<S>,
    w: WeylForm<S>,
    kappa: TractorCurvature<S>,
}

fn prepare_weyl<S: Scalar>(spec: &ManifoldSpecFile, order: u32) -> Result<PreparedWeyl<S>> {
    let base = prepare::<S>(spec, order)?;
    let w = normal_weyl_form(&base.s, &base.pkg)?;
    let kappa = weyl_curvature(&base.s, &w)?;
    Ok(PreparedWeyl { base, w, kappa })
}

/// Runs the selected suites. Module errors become failed checks; only an invalid spec or
/// option is an error of the run itself.
pub fn run_suite(spec: &ManifoldSpecFile, suite: Suite, opts: &RunOptions) -> Result<Report> {
    let order = opts.order.unwrap_or(spec.jet_order);
    if order == 0 {
        return Err(Error::Parameter("jet order must be positive".into()));
    }
    let suites = suite.expand();
    let needs_weyl = suites.iter().any(|s| matches!(s, Suite::Weyl | Suite::Bgg));
    let weyl_order = order.max(WEYL_MIN_ORDER);
    let mut inputs = inputs(spec, order)?;
    if let Some(name) = &opts.density {
        inputs.retain(|i| &i.name == name);
        if inputs.is_empty() {
            return Err(Error::Parameter(format!("no density named '{}' in spec {}", name, spec.name)));
        }
    }
    let threads = opts.threads.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));

    let mut homology_tables = vec![];
    let mut groups: Vec<(String, Result<Vec<CheckOutcome>>, Duration)> = vec![];
    if suites.contains(&Suite::Homology) {
        let (g, tables) = homology_groups(spec.n, spec.seed, threads);
        groups.extend(g);
        homology_tables = tables;
    }
    let rest: Vec<Suite> = suites.into_iter().filter(|s| *s != Suite::Homology).collect();
    if !rest.is_empty() {
        let g = match spec.backend {
            Backend::Exact => geometry_groups::<Qi>(spec, &rest, &inputs, order, weyl_order, threads),
            Backend::Float => geometry_groups::<Cf>(spec, &rest, &inputs, order, weyl_order, threads),
        };
        groups.extend(g);
    }

    let mut checks = vec![];
    for (name, r, d) in groups {
        let runtime_ms = opts.timings.then(|| d.as_millis() as u64);
        let outcomes = r.unwrap_or_else(|e| vec![CheckOutcome::failed(&format!("{}.error", name), "module error", e.to_string())]);
        for outcome in outcomes {
            let status = if outcome.exact_zero {
                "exact-zero"
            } else if outcome.passed {
                "residual"
            } else {
                "failed"
            };
            checks.push(CheckRecord { outcome, status, runtime_ms });
        }
    }
    checks.sort_by(|a, b| a.outcome.id.cmp(&b.outcome.id));
    for pair in checks.windows(2) {
        if pair[0].outcome.id == pair[1].outcome.id {
            return Err(Error::Internal(format!("duplicate check id {}", pair[0].outcome.id)));
        }
    }
    let passed = checks.iter().all(|c| c.outcome.passed);
    Ok(Report {
        spec: spec.name.clone(),
        suite,
        n: spec.n,
        jet_order: order,
        weyl_order: needs_weyl.then_some(weyl_order),
        backend: spec.backend.to_string(),
        seed: spec.seed,
        inputs: inputs
            .iter()
            .map(|i| InputRecord { name: i.name.clone(), density: i.x.to_string(), conformal_factor: i.u.to_string() })
            .collect(),
        passed,
        checks,
        homology: homology_tables,
    })
}

fn geometry_groups<S: Scalar>(
    spec: &ManifoldSpecFile,
    suites: &[Suite],
    inputs: &[Input],
    order: u32,
    weyl_order: u32,
    threads: usize,
) -> Vec<(String, Result<Vec<CheckOutcome>>, Duration)> {
    let mut out = vec![];
    let needs_base = suites.iter().any(|s| matches!(s, Suite::Pseudoherm | Suite::Crkilling));
    let needs_weyl = suites.iter().any(|s| matches!(s, Suite::Weyl | Suite::Bgg));
    let start = Instant::now();
    let base = needs_base.then(|| prepare::<S>(spec, order));
    let weyl = needs_weyl.then(|| prepare_weyl::<S>(spec, weyl_order));
    let setup = start.elapsed();
    let jets = |p: &Polynomial, ord: u32| p.to_jet::<S>(ord);

    let mut jobs: Vec<Job<'_>> = vec![];
    match &base {
        Some(Ok(b)) => {
            if suites.contains(&Suite::Pseudoherm) {
                jobs.push(("pseudoherm.identities".into(), Box::new(move || Ok(identity_checks(&b.s)))));
                for inp in inputs {
                    jobs.push((
                        format!("pseudoherm.commutators@{}", inp.name),
                        Box::new(move || {
                            let f = jets(&inp.x, order)?;
                            let mut v = vec![];
                            for w in DENSITY_WEIGHTS {
                                let c = commutator_checks(&b.s, &b.pkg, &f, w)?;
                                v.extend(tagged(c, &format!("@{}[{},{}]", inp.name, w.0, w.1)));
                            }
                            Ok(v)
                        }),
                    ));
                    jobs.push((
                        format!("pseudoherm.transformations@{}", inp.name),
                        Box::new(move || {
                            let (f, u) = (jets(&inp.x, order)?, jets(&inp.u, order)?);
                            Ok(tagged(transformation_checks(&b.s, &u, &f, &DENSITY_WEIGHTS)?, &format!("@{}", inp.name)))
                        }),
                    ));
                }
            }
            if suites.contains(&Suite::Crkilling) {
                for inp in inputs {
                    jobs.push((
                        format!("crkilling@{}", inp.name),
                        Box::new(move || {
                            let (f, u) = (jets(&inp.x, order)?, jets(&inp.u, order)?);
                            killing_checks(&b.s, &f, &u, &format!("@{}", inp.name))
                        }),
                    ));
                }
            }
        }
        Some(Err(e)) => {
            for s in suites.iter().filter(|s| matches!(s, Suite::Pseudoherm | Suite::Crkilling)) {
                out.push((format!("{}.setup", s), Err(e.clone()), setup));
            }
        }
        None => {}
    }
    match &weyl {
        Some(Ok(p)) => {
            if suites.contains(&Suite::Weyl) {
                jobs.push(("weyl".into(), Box::new(move || weyl_checks(&p.base.s, &p.base.pkg, &p.w, &p.kappa))));
            }
            if suites.contains(&Suite::Bgg) {
                jobs.push(("bgg.pivot".into(), Box::new(move || Ok(vec![pivot_check(&p.base.s, &p.base.pkg)]))));
                for inp in inputs {
                    jobs.push((
                        format!("bgg@{}", inp.name),
                        Box::new(move || {
                            let x = jets(&inp.x, weyl_order)?;
                            bgg_checks(&p.base.s, &p.w, &p.kappa, &x, &x, &format!("@{}", inp.name))
                        }),
                    ));
                }
            }
        }
        Some(Err(e)) => {
            for s in suites.iter().filter(|s| matches!(s, Suite::Weyl | Suite::Bgg)) {
                out.push((format!("{}.setup", s), Err(e.clone()), setup));
            }
        }
        None => {}
    }
    out.extend(run_jobs(jobs, threads));
    out
}

fn product(a: &Matrix<Qi>, b: &Matrix<Qi>) -> Matrix<Qi> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut acc = vec![Qi::zero(); cols];
            for (l, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b[l].iter().enumerate() {
                    if !y.is_zero() {
                        acc[j].add_assign(&x.mul(y));
                    }
                }
            }
            acc
        })
        .collect()
}

fn all_zero(m: &Matrix<Qi>) -> bool {
    m.iter().flatten().all(|x| x.is_zero())
}

/// Expected `(H₀, H₁)` dimensions.
pub fn expected_homology(kind: RepKind, n: usize) -> (usize, usize) {
    match kind {
        RepKind::Standard => (1, n + n * (n + 1) / 2),
        RepKind::Adjoint => (1, n * (n + 1)),
    }
}

fn killing_pairings(n: usize) -> Result<Vec<CheckOutcome>> {
    let (c, b) = build_algebra::<Qi>(n)?;
    let k = 2 * (n as i64 + 2);
    let mut ok = killing_form(&c, &b.xi[0], &b.zeta[0]) == Qi::from_i64(-k);
    let mut cross = true;
    for a in 0..=2 * n {
        for bb in 0..=2 * n {
            let v = killing_form(&c, &b.xi[a], &b.zeta[bb]);
            if a == bb && a > 0 {
                ok &= v == Qi::from_i64(k);
            } else if a != bb {
                cross &= v.is_zero();
            }
        }
    }
    Ok(vec![
        CheckOutcome::boolean(
            "liealg.killing.diagonal",
            "B(ξ₀, ζ⁰) = −2(n+2), B(ξ_σ, ζ^τ) = 2(n+2)δ",
            ok,
            Some(format!("2(n+2) = {}", k)),
        ),
        CheckOutcome::boolean("liealg.killing.cross", "cross pairings vanish", cross, None),
    ])
}

fn complex_checks(kind: RepKind, n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let cc = ChainContext::<Qi>::new(kind, n)?;
    let mut out = vec![];
    let codiff_ok = (2..=3).all(|k| all_zero(&product(&cc.codifferential_matrix(k - 1), &cc.codifferential_matrix(k))));
    out.push(CheckOutcome::boolean(&format!("homology.{}.codifferential_squares_to_zero", kind), "∂*∘∂* = 0", codiff_ok, Some("degrees 2, 3".into())));
    let cob_ok = (0..=1).all(|k| all_zero(&product(&cc.coboundary_matrix(k + 1), &cc.coboundary_matrix(k))));
    out.push(CheckOutcome::boolean(&format!("homology.{}.coboundary_squares_to_zero", kind), "∂∘∂ = 0", cob_ok, Some("degrees 0, 1".into())));
    let mut rng = samples::rng(seed);
    let mut dual_ok = true;
    for t in 0..DUALITY_SAMPLES {
        let k = 1 + t % 2;
        let v: Vec<Qi> = (0..cc.chain_dim(k))
            .map(|_| {
                if rng.gen_bool(0.4) {
                    Qi::from_parts((rng.gen_range(-5..=5), rng.gen_range(1..=3)), (rng.gen_range(-5..=5), rng.gen_range(1..=3)))
                } else {
                    Qi::zero()
                }
            })
            .collect();
        let c = Chain::from_flat(k, &cc.rep, &v);
        dual_ok &= cc.codifferential_dual(&c)? == cc.codifferential(&c);
    }
    out.push(CheckOutcome::boolean(
        &format!("homology.{}.duality_formulas", kind),
        "duality formulas agree with the direct definition",
        dual_ok,
        Some(format!("{} random chains in degrees 1, 2", DUALITY_SAMPLES)),
    ));
    Ok(out)
}

fn homology_check(kind: RepKind, n: usize, k: usize) -> Result<(Vec<CheckOutcome>, HomologyReport)> {
    let rep = homology_space(k, kind, n)?;
    let (h0, h1) = expected_homology(kind, n);
    let want = if k == 0 { h0 } else { h1 };
    let mut out = vec![CheckOutcome::boolean(
        &format!("homology.{}.h{}.dimension", kind, k),
        "dim H_k",
        rep.homology_dim == want,
        Some(format!("dim {} (expected {})", rep.homology_dim, want)),
    )];
    out.push(CheckOutcome::boolean(
        &format!("homology.{}.h{}.projection", kind, k),
        "projection kills the image and is injective on representatives",
        rep.projection_checked,
        None,
    ));
    if k == 1 && kind == RepKind::Adjoint {
        let nonzero: Vec<i32> = rep.by_homogeneity.iter().filter(|r| r.homology > 0).map(|r| r.homogeneity).collect();
        out.push(CheckOutcome::boolean(
            "homology.adjoint.h1.homogeneity_zero",
            "all H₁(g) classes have homogeneity 0",
            nonzero == vec![0],
            Some(format!("homogeneities {:?}", nonzero)),
        ));
    }
    Ok((out, rep))
}

/// Checks and tables for `H₀` and `H₁` of one representation.
pub fn homology_tables(kind: RepKind, n: usize) -> Result<(Vec<CheckOutcome>, Vec<HomologyReport>)> {
    let mut checks = vec![];
    let mut tables = vec![];
    for k in 0..=1 {
        let (c, t) = homology_check(kind, n, k)?;
        checks.extend(c);
        tables.push(t);
    }
    Ok((checks, tables))
}

fn homology_groups(n: usize, seed: u64, threads: usize) -> (Vec<(String, Result<Vec<CheckOutcome>>, Duration)>, Vec<HomologyReport>) {
    let tables = Mutex::new(vec![]);
    let mut jobs: Vec<Job<'_>> = vec![("liealg.killing".into(), Box::new(move || killing_pairings(n)))];
    for kind in [RepKind::Standard, RepKind::Adjoint] {
        jobs.push((format!("homology.{}.complex", kind), Box::new(move || complex_checks(kind, n, seed))));
        for k in 0..=1 {
            let tables = &tables;
            jobs.push((
                format!("homology.{}.h{}", kind, k),
                Box::new(move || {
                    let (c, t) = homology_check(kind, n, k)?;
                    tables.lock().expect("tables lock").push(t);
                    Ok(c)
                }),
            ));
        }
    }
    let groups = run_jobs(jobs, threads);
    let mut tables = tables.into_inner().expect("tables lock");
    tables.sort_by_key(|t| (t.rep, t.k));
    (groups, tables)
}

/// Holomorphic components `(αβ)` of the three operators on one density, as polynomial strings
/// truncated at their reach.
#[derive(Clone, Debug, Serialize)]
pub struct BggValues {
    pub density: String,
    pub jet_order: u32,
    pub cr_killing: Vec<Vec<String>>,
    pub bgg_modified: Vec<Vec<String>>,
    pub bgg_adjoint: Vec<Vec<String>>,
}

fn jet_string<S: Scalar>(j: &Jet<S>) -> String {
    let nv = j.nvars();
    let n = (nv - 1) / 2;
    let name = |k: usize| match k {
        k if k < n => format!("z{}", k + 1),
        k if k < 2 * n => format!("zb{}", k - n + 1),
        _ => "t".to_string(),
    };
    if j.is_exhausted() {
        return "(no valid terms)".into();
    }
    let t = j.truncated(j.reach());
    let mut parts: Vec<(Vec<u32>, String)> = t
        .terms()
        .map(|(m, c)| {
            let e: Vec<u32> = (0..nv).map(|k| mono_exponent(*m, k)).collect();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(k, &x)| if x == 1 { name(k) } else { format!("{}^{}", name(k), x) })
                .collect();
            let s = if mono.is_empty() { format!("({})", c) } else { format!("({})*{}", c, mono.join("*")) };
            (e, s)
        })
        .collect();
    parts.sort();
    if parts.is_empty() {
        return "0".into();
    }
    let body = parts.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join(" + ");
    format!("{} + O({})", body, t.reach() + 1)
}

fn bgg_values_generic<S: Scalar>(spec: &ManifoldSpecFile, x: &Polynomial, name: &str, order: u32) -> Result<BggValues> {
    let p = prepare_weyl::<S>(spec, order)?;
    let xj = x.to_jet::<S>(order)?;
    let strings = |d: &crate::crops::DeformationTensor<S>| -> Vec<Vec<String>> {
        d.hol.iter().map(|r| r.iter().map(jet_string).collect()).collect()
    };
    Ok(BggValues {
        density: name.to_string(),
        jet_order: order,
        cr_killing: strings(&cr_killing(&p.base.s, &xj)?),
        bgg_modified: strings(&bgg_modified(&p.base.s, &p.w, &p.kappa, &xj)?),
        bgg_adjoint: strings(&bgg_adjoint(&p.base.s, &xj)?),
    })
}

/// Evaluates the CR Killing operator and both adjoint first BGG operators on a named input.
pub fn bgg_values(spec: &ManifoldSpecFile, density: &str, opts: &RunOptions) -> Result<BggValues> {
    let order = opts.order.unwrap_or(spec.jet_order).max(WEYL_MIN_ORDER);
    let inp = inputs(spec, opts.order.unwrap_or(spec.jet_order))?
        .into_iter()
        .find(|i| i.name == density)
        .ok_or_else(|| Error::Parameter(format!("no density named '{}' in spec {}", density, spec.name)))?;
    match spec.backend {
        Backend::Exact => bgg_values_generic::<Qi>(spec, &inp.x, density, order),
        Backend::Float => bgg_values_generic::<Cf>(spec, &inp.x, density, order),
    }
}
