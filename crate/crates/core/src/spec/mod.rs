//! Manifold-spec files: a line-oriented `key = value` format describing a
//! deformed Heisenberg chart, a conformal factor and named densities.
//!
//! ```text
//! # comments start with '#'
//! name = deformed-h2
//! n = 2
//! jet_order = 4
//! base = heisenberg
//! backend = exact
//! seed = 7
//! random_inputs = 1
//! phi 2 2 = z1 + (1/2-1/3 i)*zb2^2
//! u = 1/2 z1 zb1 - t^2
//! density x = 1 + z1*zb1 + t
//! ```
//!
//! Polynomials are in `z1..zn`, `zb1..zbn` (conjugates) and `t`, with
//! coefficients `p/q` and `p/q i`. Products may be written with `*` or by
//! juxtaposition; `^` takes a nonnegative integer exponent.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactnum::jet::{mono_exponent, MAX_VARS};
use crate::exactnum::{Backend, Jet, Qi, Scalar};
use crate::pseudoherm::{Chart, ChartSpec};

mod parse;
mod suite;

pub use suite::{
    bgg_values, expected_homology, homology_tables, run_suite, BggValues, CheckRecord, InputRecord, Report, RunOptions, Suite,
    WEYL_MIN_ORDER,
};

/// Exponent vector over `(z, z̄, t)` mapped to its coefficient; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Qi>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Qi) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Qi::one());
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Qi) {
        let sum = match self.terms.get(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Qi {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Qi::zero)
    }

    /// Complex conjugate: coefficients conjugated, `z ↔ z̄`.
    pub fn conj(&self, n: usize) -> Self {
        let chart = Chart { n, order: 0 };
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.nvars];
            for (k, &x) in e.iter().enumerate() {
                f[chart.bar(k)] = x;
            }
            out.add_term(f, c.conj());
        }
        out
    }

    pub fn is_real(&self, n: usize) -> bool {
        self.conj(n) == *self
    }

    /// The polynomial as a jet truncated at `order`; fails if a term exceeds the order.
    pub fn to_jet<S: Scalar>(&self, order: u32) -> Result<Jet<S>> {
        let terms: Vec<(Vec<u32>, S)> = self.terms.iter().map(|(e, c)| (e.clone(), S::from_qi(c))).collect();
        Jet::from_terms(self.nvars, order, &terms)
    }

    /// Exact terms of a jet through its reach.
    pub fn from_jet(j: &Jet<Qi>) -> Self {
        let nv = j.nvars();
        let mut out = Self::zero(nv);
        for (m, c) in j.terms() {
            out.add_term((0..nv).map(|k| mono_exponent(*m, k)).collect(), c.clone());
        }
        out
    }
}

impl fmt::Display for Polynomial {
    /// Renders in the same syntax the parser reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = (self.nvars - 1) / 2;
        let name = |k: usize| match k {
            k if k < n => format!("z{}", k + 1),
            k if k < 2 * n => format!("zb{}", k - n + 1),
            _ => "t".to_string(),
        };
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_real() && c.re.is_negative();
            let c = if negative { c.neg() } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(k, &x)| if x == 1 { name(k) } else { format!("{}^{}", name(k), x) })
                .collect();
            let coef = if c.is_real() { c.to_string() } else { format!("({})", c) };
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{}", coef)?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{}*{}", coef, mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Base model of the chart. Only the Heisenberg model is supported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    Heisenberg,
}

/// A named density input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    pub name: String,
    pub poly: Polynomial,
}

/// A validated manifold spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldSpecFile {
    pub name: String,
    pub n: usize,
    pub jet_order: u32,
    pub base: Base,
    /// Upper-triangle entries `(α, β, φ_{αβ})`, 0-based with `α ≤ β`; the lower triangle is implied.
    pub deformation: Vec<(usize, usize, Polynomial)>,
    pub conformal_factor: Option<Polynomial>,
    pub densities: Vec<Density>,
    pub backend: Backend,
    pub seed: u64,
    /// Number of seeded random densities added to the named ones.
    pub random_inputs: usize,
}

const FLAT_H2: &str = include_str!("../../specs/flat-h2.spec");
const DEFORMED_H2: &str = include_str!("../../specs/deformed-h2.spec");

/// Names accepted by [`load_spec`] without a file on disk.
pub const BUILTIN_SPECS: [&str; 2] = ["flat-h2.spec", "deformed-h2.spec"];

/// Text of a built-in spec, by file name with or without the `.spec` suffix.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name.trim_end_matches(".spec") {
        "flat-h2" => Some(FLAT_H2),
        "deformed-h2" => Some(DEFORMED_H2),
        _ => None,
    }
}

/// Reads a spec file; falls back to the built-ins when `path` names one and no such file exists.
pub fn load_spec(path: &Path) -> Result<ManifoldSpecFile> {
    if !path.exists() {
        if let Some(text) = path.file_name().and_then(|f| f.to_str()).and_then(builtin) {
            return parse_spec(text);
        }
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parameter(format!("cannot read spec file {}: {}", path.display(), e)))?;
    parse_spec(&text)
}

/// Parses and validates spec text.
pub fn parse_spec(text: &str) -> Result<ManifoldSpecFile> {
    let spec = parse::parse(text)?;
    spec.validate()?;
    Ok(spec)
}

impl ManifoldSpecFile {
    pub fn nvars(&self) -> usize {
        2 * self.n + 1
    }

    /// Symmetric matrix of deformation polynomials.
    pub fn phi(&self) -> Vec<Vec<Polynomial>> {
        let mut phi = vec![vec![Polynomial::zero(self.nvars()); self.n]; self.n];
        for (a, b, p) in &self.deformation {
            phi[*a][*b] = p.clone();
            phi[*b][*a] = p.clone();
        }
        phi
    }

    fn all_polynomials(&self) -> impl Iterator<Item = (String, &Polynomial)> {
        let phi = self.deformation.iter().map(|(a, b, p)| (format!("phi {} {}", a + 1, b + 1), p));
        let u = self.conformal_factor.iter().map(|p| ("u".to_string(), p));
        let d = self.densities.iter().map(|d| (format!("density {}", d.name), &d.poly));
        phi.chain(u).chain(d)
    }

    /// Degree bounds, reality conditions and the base-point positivity preflight.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.nvars() > MAX_VARS {
            return Err(Error::Validation(format!("n = {} is outside 1..=3", self.n)));
        }
        for (what, p) in self.all_polynomials() {
            if p.nvars != self.nvars() {
                return Err(Error::Internal(format!("{} has {} variables", what, p.nvars)));
            }
            if p.degree() > self.jet_order {
                return Err(Error::Validation(format!(
                    "degree bound: {} has degree {} > jet_order {}",
                    what,
                    p.degree(),
                    self.jet_order
                )));
            }
        }
        if let Some(u) = &self.conformal_factor {
            if !u.is_real(self.n) {
                return Err(Error::Validation("conformal factor u is not real".into()));
            }
            if !u.constant_term().is_zero() {
                return Err(Error::Validation("conformal factor u must vanish at the base point".into()));
            }
        }
        for d in &self.densities {
            if !d.poly.is_real(self.n) {
                return Err(Error::Validation(format!("density {} is not real", d.name)));
            }
        }
        self.positivity_preflight()
    }

    /// The deformed Levi form at the base point must be positive definite.
    fn positivity_preflight(&self) -> Result<()> {
        let cs = self.chart_spec::<Qi>(self.jet_order.max(1))?;
        let h: Vec<Vec<Qi>> = cs.levi_form().iter().map(|r| r.iter().map(|j| j.constant_term()).collect()).collect();
        if !positive_definite(h) {
            return Err(Error::Signature("the deformed Levi form is not positive definite at the base point".into()));
        }
        Ok(())
    }

    /// Chart data at the given jet order.
    pub fn chart_spec<S: Scalar>(&self, order: u32) -> Result<ChartSpec<S>> {
        let base = match self.base {
            Base::Heisenberg => ChartSpec::<S>::heisenberg(self.n, order)?,
        };
        if self.deformation.is_empty() {
            return Ok(base);
        }
        let phi: Vec<Vec<Jet<S>>> = self
            .phi()
            .iter()
            .map(|r| r.iter().map(|p| p.to_jet(order)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        base.deformed(&phi)
    }
}

/// Hermitian positivity by pivots of an elimination without row exchanges.
fn positive_definite(mut h: Vec<Vec<Qi>>) -> bool {
    let n = h.len();
    for k in 0..n {
        let p = h[k][k].clone();
        // a Hermitian pivot is real
        if !p.is_real() || !p.re.is_positive() {
            return false;
        }
        let inv = p.inv().expect("nonzero pivot");
        for i in k + 1..n {
            let f = h[i][k].mul(&inv);
            for j in k..n {
                let v = h[i][j].sub(&f.mul(&h[k][j]));
                h[i][j] = v;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests;
