use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Maximal number of chart coordinates a jet can carry (8 exponent bytes per key).
pub const MAX_VARS: usize = 8;

/// Packed multi-index: byte `k` is the exponent of variable `k`.
pub type Mono = u64;

pub fn mono_degree(m: Mono) -> u32 {
    m.to_le_bytes().iter().map(|&b| b as u32).sum()
}

pub fn mono_exponent(m: Mono, k: usize) -> u32 {
    ((m >> (8 * k)) & 0xff) as u32
}

pub fn mono_from_exponents(e: &[u32]) -> Mono {
    assert!(e.len() <= MAX_VARS);
    e.iter().enumerate().fold(0u64, |acc, (k, &x)| {
        assert!(x < 256, "exponent overflow");
        acc | ((x as u64) << (8 * k))
    })
}

/// Truncated Taylor polynomial at the chart base point.
///
/// `cap` bounds the stored total degree. A jet is either *exact* (it is a
/// polynomial of degree at most `cap`, nothing was truncated) or valid up to
/// total degree `valid`; coefficients above `valid` are never stored.
/// `valid < 0` means all information has been differentiated away.
#[derive(Clone, PartialEq)]
pub struct Jet<S: Scalar> {
    nvars: usize,
    cap: u32,
    exact: bool,
    valid: i32,
    terms: BTreeMap<Mono, S>,
}

/// Ring operation selector for [`jet_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
}

impl<S: Scalar> Jet<S> {
    pub fn zero(nvars: usize, cap: u32) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Jet { nvars, cap, exact: true, valid: cap as i32, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, cap: u32, c: S) -> Self {
        let mut j = Self::zero(nvars, cap);
        if !c.is_zero() {
            j.terms.insert(0, c);
        }
        j
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Self::constant(nvars, cap, S::one())
    }

    /// The coordinate function `x_k`.
    pub fn var(nvars: usize, cap: u32, k: usize) -> Self {
        assert!(k < nvars);
        let mut j = Self::zero(nvars, cap);
        if cap >= 1 {
            j.terms.insert(1u64 << (8 * k), S::one());
        } else {
            j.exact = false;
            j.valid = 0;
        }
        j
    }

    /// Builds an exact polynomial from `(exponents, coefficient)` pairs.
    pub fn from_terms(nvars: usize, cap: u32, terms: &[(Vec<u32>, S)]) -> Result<Self> {
        let mut j = Self::zero(nvars, cap);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Shape(format!("multi-index of length {} for {} variables", e.len(), nvars)));
            }
            let m = mono_from_exponents(e);
            if mono_degree(m) > cap {
                return Err(Error::Order(format!("monomial of degree {} exceeds jet order {}", mono_degree(m), cap)));
            }
            j.terms.entry(m).or_insert_with(S::zero).add_assign(c);
        }
        j.prune();
        Ok(j)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn cap(&self) -> u32 {
        self.cap
    }
    pub fn is_exact(&self) -> bool {
        self.exact
    }
    /// Highest total degree whose coefficients are trustworthy.
    pub fn reach(&self) -> i32 {
        if self.exact {
            self.cap as i32
        } else {
            self.valid
        }
    }
    /// `None` for an exact polynomial.
    pub fn validity(&self) -> Option<i32> {
        if self.exact {
            None
        } else {
            Some(self.valid)
        }
    }
    pub fn is_exhausted(&self) -> bool {
        self.reach() < 0
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &S)> {
        self.terms.iter()
    }
    pub fn coeff(&self, m: Mono) -> S {
        self.terms.get(&m).cloned().unwrap_or_else(S::zero)
    }
    pub fn constant_term(&self) -> S {
        self.coeff(0)
    }
    /// Zero through its reach. An exhausted jet is *not* reported as zero.
    pub fn is_zero(&self) -> bool {
        !self.is_exhausted() && self.terms.is_empty()
    }
    pub fn max_modulus(&self) -> f64 {
        self.terms.values().map(|c| c.modulus()).fold(0.0, f64::max)
    }
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&m| mono_degree(m)).max()
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn set_reach(&mut self, exact: bool, valid: i32) {
        self.exact = exact;
        self.valid = if exact { self.cap as i32 } else { valid };
        if !exact {
            let v = valid;
            self.terms.retain(|&m, _| (mono_degree(m) as i32) <= v);
        }
    }

    /// Marks the jet as valid only through `order` (truncating).
    pub fn truncated(&self, order: i32) -> Self {
        let mut j = self.clone();
        if order < j.reach() {
            j.set_reach(false, order);
        }
        j
    }

    fn assert_compatible(&self, o: &Self) {
        assert!(
            self.nvars == o.nvars && self.cap == o.cap,
            "jet shape mismatch: ({}, {}) vs ({}, {})",
            self.nvars,
            self.cap,
            o.nvars,
            o.cap
        );
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        self.assert_compatible(o);
        let exact = self.exact && o.exact;
        let valid = self.reach().min(o.reach());
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let e = terms.entry(*m).or_insert_with(S::zero);
            *e = if negate { e.sub(c) } else { e.add(c) };
        }
        let mut j = Jet { nvars: self.nvars, cap: self.cap, exact, valid, terms };
        j.prune();
        j.set_reach(exact, valid);
        j
    }

    fn product(&self, o: &Self) -> Self {
        self.assert_compatible(o);
        let limit = if self.exact && o.exact { self.cap as i32 } else { self.reach().min(o.reach()) };
        let mut exact = self.exact && o.exact;
        if exact {
            if let (Some(da), Some(db)) = (self.max_degree(), o.max_degree()) {
                if da + db > self.cap {
                    exact = false;
                }
            }
        }
        let mut out = Jet { nvars: self.nvars, cap: self.cap, exact, valid: limit, terms: BTreeMap::new() };
        if limit < 0 || self.terms.is_empty() || o.terms.is_empty() {
            out.set_reach(exact, limit);
            return out;
        }
        let mut rhs: Vec<(Mono, i32, &S)> = o.terms.iter().map(|(&m, c)| (m, mono_degree(m) as i32, c)).collect();
        rhs.sort_by_key(|t| t.1);
        for (&ma, ca) in &self.terms {
            let da = mono_degree(ma) as i32;
            if da > limit {
                continue;
            }
            for &(mb, db, cb) in &rhs {
                if da + db > limit {
                    break;
                }
                out.terms.entry(ma + mb).or_insert_with(S::zero).add_assign(&ca.mul(cb));
            }
        }
        out.prune();
        out.set_reach(exact, limit);
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut j = self.clone();
        if s.is_zero() {
            j.terms.clear();
        } else {
            for c in j.terms.values_mut() {
                *c = c.mul(s);
            }
        }
        j
    }

    pub fn scale_ratio(&self, p: i64, q: i64) -> Self {
        self.scale(&S::ratio(p, q))
    }

    pub fn mul_i(&self) -> Self {
        let mut j = self.clone();
        for c in j.terms.values_mut() {
            *c = c.mul_i();
        }
        j
    }

    pub fn add_scalar(&self, s: &S) -> Self {
        let mut j = self.clone();
        if j.reach() >= 0 {
            j.terms.entry(0).or_insert_with(S::zero).add_assign(s);
            j.prune();
        }
        j
    }

    /// Partial derivative along variable `k` without bounds checking of the result's order.
    pub fn d(&self, k: usize) -> Self {
        assert!(k < self.nvars, "derivative index out of range");
        let mut out = Jet {
            nvars: self.nvars,
            cap: self.cap,
            exact: self.exact,
            valid: if self.exact { self.cap as i32 } else { self.valid - 1 },
            terms: BTreeMap::new(),
        };
        for (&m, c) in &self.terms {
            let e = mono_exponent(m, k);
            if e > 0 {
                out.terms.insert(m - (1u64 << (8 * k)), c.mul(&S::from_i64(e as i64)));
            }
        }
        let (exact, valid) = (out.exact, out.valid);
        out.set_reach(exact, valid);
        out
    }

    /// Multiplicative inverse by a geometric series around the constant term.
    pub fn invert(&self) -> Result<Self> {
        if self.is_exhausted() {
            return Err(Error::Order("inverting an exhausted jet".into()));
        }
        let c = self.constant_term();
        let cinv = c.inv().ok_or_else(|| Error::Singular("jet has zero constant term".into()))?;
        let mut r = self.scale(&cinv);
        r.terms.remove(&0);
        if r.terms.is_empty() {
            let mut j = Self::constant(self.nvars, self.cap, cinv);
            j.set_reach(self.exact, self.reach());
            return Ok(j);
        }
        let reach = self.reach();
        let one = Self::one(self.nvars, self.cap).truncated(reach);
        let minus_r = -&r;
        // Horner: 1 - r(1 - r(1 - ...)) through degree `reach`
        let mut acc = one.clone();
        for _ in 0..reach {
            acc = &one + &(&minus_r * &acc);
        }
        let mut out = acc.scale(&cinv);
        out.set_reach(false, reach);
        Ok(out)
    }

    /// Conjugates coefficients and permutes variables by `perm` (variable `k` becomes `perm[k]`).
    pub fn conj_with(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Jet { terms: BTreeMap::new(), ..self.clone() };
        for (&m, c) in &self.terms {
            let mut nm = 0u64;
            for (k, &p) in perm.iter().enumerate() {
                nm |= (mono_exponent(m, k) as u64) << (8 * p);
            }
            out.terms.insert(nm, c.conj());
        }
        out
    }

    /// Evaluates the stored polynomial at a point (meaningful for exact jets).
    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars);
        let mut acc = S::zero();
        for (&m, c) in &self.terms {
            let mut t = c.clone();
            for (k, x) in point.iter().enumerate() {
                for _ in 0..mono_exponent(m, k) {
                    t = t.mul(x);
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Substitutes each variable by a jet (composition with a polynomial map).
    pub fn compose(&self, subs: &[Jet<S>]) -> Self {
        assert_eq!(subs.len(), self.nvars);
        let shape = &subs[0];
        let mut acc = Jet::zero(shape.nvars, shape.cap);
        for (&m, c) in &self.terms {
            let mut t = Jet::constant(shape.nvars, shape.cap, c.clone());
            for (k, s) in subs.iter().enumerate() {
                for _ in 0..mono_exponent(m, k) {
                    t = &t * s;
                }
            }
            acc = &acc + &t;
        }
        if !self.exact {
            acc = acc.truncated(self.valid);
        }
        acc
    }

    /// `exp(self)` for a jet vanishing at the base point.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Parameter("exp needs a jet vanishing at the base point".into()));
        }
        let reach = self.reach().max(0);
        let one = Self::one(self.nvars, self.cap);
        // Horner: 1 + f(1 + f/2(1 + f/3(...)))
        let mut acc = one.clone();
        for k in (1..=reach).rev() {
            acc = &one + &(&self.scale_ratio(1, k as i64) * &acc);
        }
        if self.terms.is_empty() {
            return Ok(one);
        }
        acc.set_reach(false, reach);
        Ok(acc)
    }

    /// Zero through degree `order` (ignores anything beyond).
    pub fn vanishes_through(&self, order: i32) -> bool {
        self.terms.keys().all(|&m| mono_degree(m) as i32 > order)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Jet<T> {
        let mut out = Jet::<T> {
            nvars: self.nvars,
            cap: self.cap,
            exact: self.exact,
            valid: self.valid,
            terms: BTreeMap::new(),
        };
        for (&m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(m, v);
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet[{}; ", if self.exact { "exact".to_string() } else { format!("O({})", self.valid + 1) })?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (&m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            for k in 0..self.nvars {
                let e = mono_exponent(m, k);
                if e == 1 {
                    write!(f, "·x{}", k)?;
                } else if e > 1 {
                    write!(f, "·x{}^{}", k, e)?;
                }
            }
        }
        write!(f, "]")
    }
}

macro_rules! jet_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, S: Scalar> $tr<&'a Jet<S>> for &'a Jet<S> {
            type Output = Jet<S>;
            fn $method(self, o: &'a Jet<S>) -> Jet<S> {
                let f: fn(&Jet<S>, &Jet<S>) -> Jet<S> = $body;
                f(self, o)
            }
        }
        impl<S: Scalar> $tr<Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $method(self, o: Jet<S>) -> Jet<S> {
                let f: fn(&Jet<S>, &Jet<S>) -> Jet<S> = $body;
                f(&self, &o)
            }
        }
        impl<'a, S: Scalar> $tr<&'a Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $method(self, o: &'a Jet<S>) -> Jet<S> {
                let f: fn(&Jet<S>, &Jet<S>) -> Jet<S> = $body;
                f(&self, o)
            }
        }
        impl<'a, S: Scalar> $tr<Jet<S>> for &'a Jet<S> {
            type Output = Jet<S>;
            fn $method(self, o: Jet<S>) -> Jet<S> {
                let f: fn(&Jet<S>, &Jet<S>) -> Jet<S> = $body;
                f(self, &o)
            }
        }
    };
}

jet_binop!(Add, add, |a, b| a.combine(b, false));
jet_binop!(Sub, sub, |a, b| a.combine(b, true));
jet_binop!(Mul, mul, |a, b| a.product(b));

impl<S: Scalar> Neg for &Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        let mut j = self.clone();
        for c in j.terms.values_mut() {
            *c = c.neg();
        }
        j
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        -&self
    }
}

fn check_shape<S: Scalar>(a: &Jet<S>, b: &Jet<S>) -> Result<()> {
    if a.nvars != b.nvars || a.cap != b.cap {
        return Err(Error::Shape(format!(
            "jets over ({} vars, order {}) and ({} vars, order {})",
            a.nvars, a.cap, b.nvars, b.cap
        )));
    }
    Ok(())
}

/// Checked ring operation; the result is valid through the smaller of the operand reaches.
pub fn jet_arith<S: Scalar>(a: &Jet<S>, b: &Jet<S>, op: JetOp) -> Result<Jet<S>> {
    check_shape(a, b)?;
    Ok(match op {
        JetOp::Add => a + b,
        JetOp::Sub => a - b,
        JetOp::Mul => a * b,
    })
}

pub fn jet_scale<S: Scalar>(a: &Jet<S>, s: &S) -> Jet<S> {
    a.scale(s)
}

pub fn jet_invert<S: Scalar>(a: &Jet<S>) -> Result<Jet<S>> {
    a.invert()
}

/// Checked partial derivative; differentiating a jet with no retained coefficients is an order error.
pub fn jet_partial<S: Scalar>(a: &Jet<S>, k: usize) -> Result<Jet<S>> {
    if k >= a.nvars {
        return Err(Error::Index { index: k, limit: a.nvars });
    }
    let out = a.d(k);
    if out.is_exhausted() {
        return Err(Error::Order("partial derivative of an order-0 jet".into()));
    }
    Ok(out)
}

/// Inverse of a square matrix of jets by Gauss-Jordan elimination on unit pivots.
pub fn invert_matrix<S: Scalar>(m: &[Vec<Jet<S>>]) -> Result<Vec<Vec<Jet<S>>>> {
    let n = m.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let (nv, cap) = (m[0][0].nvars(), m[0][0].cap());
    let mut a: Vec<Vec<Jet<S>>> = m.to_vec();
    let mut inv: Vec<Vec<Jet<S>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Jet::one(nv, cap) } else { Jet::zero(nv, cap) }).collect())
        .collect();
    for col in 0..n {
        if a[col].len() != n {
            return Err(Error::Shape("matrix is not square".into()));
        }
        let piv = (col..n)
            .max_by(|&x, &y| {
                a[x][col].constant_term().modulus().partial_cmp(&a[y][col].constant_term().modulus()).unwrap()
            })
            .filter(|&r| !a[r][col].constant_term().is_zero())
            .ok_or_else(|| Error::Singular(format!("no unit pivot in column {}", col)))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].invert()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].terms.is_empty() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                if !a[col][j].terms.is_empty() {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                }
                if !inv[col][j].terms.is_empty() {
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::Qi;
    use proptest::prelude::*;

    type J = Jet<Qi>;

    fn x(k: usize, nv: usize, cap: u32) -> J {
        J::var(nv, cap, k)
    }

    #[test]
    fn exp_of_sum_is_product() {
        let (a, b) = (x(0, 2, 5), x(1, 2, 5).scale_ratio(1, 3));
        let lhs = (&a + &b).exp().unwrap();
        let rhs = &a.exp().unwrap() * &b.exp().unwrap();
        assert!((&lhs - &rhs).is_zero());
        assert!(J::one(2, 5).exp().is_err());
        let e = a.exp().unwrap();
        assert_eq!(e.coeff(mono_from_exponents(&[3, 0])), Qi::ratio(1, 6));
        assert_eq!(e.validity(), Some(5));
    }

    #[test]
    fn one_plus_x_times_one_minus_x() {
        let one = J::one(1, 2);
        let p = &(&one + &x(0, 1, 2)) * &(&one - &x(0, 1, 2));
        let expect = &one - &(&x(0, 1, 2) * &x(0, 1, 2));
        assert_eq!(p, expect);
        assert!(p.is_exact());
    }

    #[test]
    fn additive_identity() {
        let a = &x(0, 2, 3) + &J::constant(2, 3, Qi::from_parts((1, 3), (2, 1)));
        assert_eq!(&a + &J::zero(2, 3), a);
    }

    #[test]
    fn invert_geometric_series() {
        let one = J::one(1, 2);
        let inv = (&one + &x(0, 1, 2)).invert().unwrap();
        let xx = x(0, 1, 2);
        let expect = &(&one - &xx) + &(&xx * &xx);
        assert_eq!(inv.coeff(0), expect.coeff(0));
        assert_eq!(inv.coeff(1), expect.coeff(1));
        assert_eq!(inv.coeff(2), expect.coeff(2));
        assert_eq!(inv.validity(), Some(2));
    }

    #[test]
    fn invert_constant_and_singular() {
        let two = J::constant(1, 2, Qi::from_i64(2));
        let h = two.invert().unwrap();
        assert_eq!(h, J::constant(1, 2, Qi::ratio(1, 2)));
        assert!(h.is_exact());
        assert!(matches!(x(0, 1, 2).invert(), Err(Error::Singular(_))));
    }

    #[test]
    fn partial_examples() {
        let f = &(&x(0, 2, 4) * &x(0, 2, 4)) * &x(1, 2, 4);
        let df = jet_partial(&f, 0).unwrap();
        assert_eq!(df, (&x(0, 2, 4) * &x(1, 2, 4)).scale(&Qi::from_i64(2)));
        let c = J::constant(2, 4, Qi::from_i64(7));
        assert!(jet_partial(&c, 0).unwrap().is_zero());
        assert!(matches!(jet_partial(&c, 2), Err(Error::Index { .. })));
    }

    #[test]
    fn partial_lowers_validity() {
        let inv = (&J::one(1, 3) + &x(0, 1, 3)).invert().unwrap();
        assert_eq!(inv.validity(), Some(3));
        let d = inv.d(0);
        assert_eq!(d.validity(), Some(2));
        let dddd = d.d(0).d(0).d(0);
        assert!(dddd.is_exhausted());
        assert!(!dddd.is_zero());
        assert!(matches!(jet_partial(&d.d(0).d(0), 0), Err(Error::Order(_))));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(jet_arith(&J::zero(1, 2), &J::zero(2, 2), JetOp::Add), Err(Error::Shape(_))));
        assert!(matches!(jet_arith(&J::zero(1, 2), &J::zero(1, 3), JetOp::Mul), Err(Error::Shape(_))));
    }

    #[test]
    fn matrix_inverse() {
        let nv = 2;
        let cap = 3;
        let m = vec![
            vec![&J::one(nv, cap) + &x(0, nv, cap), x(1, nv, cap)],
            vec![x(0, nv, cap).mul_i(), &J::constant(nv, cap, Qi::from_i64(2)) - &x(1, nv, cap)],
        ];
        let inv = invert_matrix(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = J::zero(nv, cap);
                for k in 0..2 {
                    s = &s + &(&m[i][k] * &inv[k][j]);
                }
                let e = if i == j { s.add_scalar(&Qi::from_i64(-1)) } else { s };
                assert!(e.is_zero(), "entry {} {}: {:?}", i, j, e);
            }
        }
    }

    fn rand_jet(nv: usize, cap: u32, unit: bool) -> impl Strategy<Value = J> {
        let nmon = 8;
        proptest::collection::vec(
            (proptest::collection::vec(0u32..3, nv), -4i64..5, 1i64..4, -3i64..4),
            nmon,
        )
        .prop_map(move |ts| {
            let terms: Vec<(Vec<u32>, Qi)> = ts
                .into_iter()
                .filter(|(e, ..)| e.iter().sum::<u32>() <= cap)
                .map(|(e, a, b, c)| (e, Qi::from_parts((a, b), (c, 1))))
                .collect();
            let j = J::from_terms(nv, cap, &terms).unwrap();
            if unit {
                let c0 = j.constant_term();
                j.add_scalar(&Qi::one().sub(&c0))
            } else {
                j
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn ring_laws(a in rand_jet(3, 4, false), b in rand_jet(3, 4, false), c in rand_jet(3, 4, false)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn mixed_partials_commute(a in rand_jet(3, 4, false)) {
            for j in 0..3 {
                for k in 0..3 {
                    prop_assert_eq!(a.d(j).d(k), a.d(k).d(j));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn invert_is_inverse(a in rand_jet(3, 4, true)) {
            let inv = jet_invert(&a).unwrap();
            let p = &inv * &a;
            prop_assert!(p.add_scalar(&Qi::from_i64(-1)).is_zero());
            prop_assert_eq!(p.reach(), 4);
        }
    }
}
