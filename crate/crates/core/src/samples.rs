//! Seeded random inputs for the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exactnum::jet::mono_degree;
use crate::exactnum::{Jet, Qi, Scalar};
use crate::pseudoherm::{Chart, ChartSpec};

/// Deterministic generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_qi(rng: &mut ChaCha8Rng, complex: bool) -> Qi {
    let den = rng.gen_range(1..=3);
    let re = rng.gen_range(-3..=3);
    let im = if complex { rng.gen_range(-3..=3) } else { 0 };
    Qi::from_parts((re, den), (im, den))
}

/// Random polynomial with `terms` monomials of total degree in `1..=max_degree`.
pub fn random_poly<S: Scalar>(chart: &Chart, rng: &mut ChaCha8Rng, max_degree: u32, terms: usize) -> Jet<S> {
    random_poly_in(chart, rng, 1, max_degree, terms)
}

/// Random polynomial with `terms` monomials of total degree in `min_degree..=max_degree`.
pub fn random_poly_in<S: Scalar>(
    chart: &Chart,
    rng: &mut ChaCha8Rng,
    min_degree: u32,
    max_degree: u32,
    terms: usize,
) -> Jet<S> {
    let nv = chart.nvars();
    let mut out: Vec<(Vec<u32>, S)> = vec![];
    while out.len() < terms {
        let deg = rng.gen_range(min_degree..=max_degree);
        let mut e = vec![0u32; nv];
        for _ in 0..deg {
            e[rng.gen_range(0..nv)] += 1;
        }
        let c = small_qi(rng, true);
        if c.is_zero() {
            continue;
        }
        out.push((e, S::from_qi(&c)));
    }
    Jet::from_terms(nv, chart.order, &out).expect("degrees bounded by construction")
}

/// Real polynomial vanishing at the base point: `p + conj(p)`.
pub fn random_real_poly<S: Scalar>(chart: &Chart, rng: &mut ChaCha8Rng, max_degree: u32, terms: usize) -> Jet<S> {
    let p = random_poly::<S>(chart, rng, max_degree, terms);
    &p + &chart.conj(&p)
}

/// Random real polynomial including a constant term.
pub fn random_density<S: Scalar>(chart: &Chart, rng: &mut ChaCha8Rng, max_degree: u32, terms: usize) -> Jet<S> {
    let c = S::from_qi(&small_qi(rng, false));
    random_real_poly::<S>(chart, rng, max_degree, terms).add_scalar(&c)
}

/// Random symmetric deformation tensor with entries of degree `1..=max_degree`.
pub fn random_phi<S: Scalar>(chart: &Chart, rng: &mut ChaCha8Rng, max_degree: u32, terms: usize) -> Vec<Vec<Jet<S>>> {
    let n = chart.n;
    let mut phi = vec![vec![chart.zero::<S>(); n]; n];
    for a in 0..n {
        for b in a..n {
            let p = random_poly::<S>(chart, rng, max_degree, terms);
            phi[a][b] = p.clone();
            phi[b][a] = p;
        }
    }
    phi
}

/// Heisenberg model deformed by a seeded random symmetric φ with linear terms in `z`.
///
/// The linear terms make the Nijenhuis tensor generically nonzero at the base point.
pub fn deformed_heisenberg<S: Scalar>(n: usize, order: u32, seed: u64) -> Result<ChartSpec<S>> {
    let base = ChartSpec::<S>::heisenberg(n, order)?;
    let chart = base.chart;
    let mut r = rng(seed);
    let mut phi = random_phi::<S>(&chart, &mut r, 2, 2);
    for a in 0..n {
        for b in a..n {
            let k = r.gen_range(0..n);
            let c = S::from_qi(&Qi::from_parts((r.gen_range(1..=3), 2), (r.gen_range(-2..=2), 2)));
            let lin = chart.var::<S>(k).scale(&c);
            phi[a][b] = &phi[a][b] + &lin;
            if a != b {
                phi[b][a] = &phi[b][a] + &lin;
            }
        }
    }
    base.deformed(&phi)
}

/// Embedded hypersurface `Im w = ½|z|² + F` with a seeded real `F` of degree 3 and 4.
///
/// Embedded structures are integrable, so `N = 0` while torsion and curvature are generic.
pub fn integrable_hypersurface<S: Scalar>(n: usize, order: u32, seed: u64) -> Result<ChartSpec<S>> {
    let chart = Chart::new(n, order)?;
    let mut r = rng(seed);
    let p = random_poly_in::<S>(&chart, &mut r, 3, 4, 2 * n);
    let f = &p + &chart.conj(&p);
    ChartSpec::hypersurface(n, order, &f)
}

/// Lowest total degree of a nonzero term, if any.
pub fn lowest_degree<S: Scalar>(j: &Jet<S>) -> Option<u32> {
    j.terms().map(|(m, _)| mono_degree(*m)).min()
}
