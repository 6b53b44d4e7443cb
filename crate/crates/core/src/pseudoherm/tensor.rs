//! Weighted tensors in a chart frame and their Tanaka-Webster derivatives.

use crate::error::{Error, Result};
use crate::exactnum::{Jet, Scalar};

use super::PseudohermitianStructure;

/// Index type of one tensor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Up,
    Down,
    BarUp,
    BarDown,
    /// Lower index over the whole frame `(σ, σ̄, 0)`.
    Frame,
}

impl Slot {
    fn dim(self, n: usize) -> usize {
        match self {
            Slot::Frame => 2 * n + 1,
            _ => n,
        }
    }
    fn conj(self) -> Slot {
        match self {
            Slot::Up => Slot::BarUp,
            Slot::Down => Slot::BarDown,
            Slot::BarUp => Slot::Up,
            Slot::BarDown => Slot::Down,
            Slot::Frame => Slot::Frame,
        }
    }
}

/// A tensor of density weight `(w, w′)`, trivialized by the structure's contact form.
///
/// Components are stored row-major over the slots.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S: Scalar> {
    pub n: usize,
    pub slots: Vec<Slot>,
    pub weight: (i64, i64),
    comps: Vec<Jet<S>>,
}

impl<S: Scalar> Tensor<S> {
    pub fn from_fn(n: usize, slots: &[Slot], weight: (i64, i64), mut f: impl FnMut(&[usize]) -> Jet<S>) -> Self {
        let dims: Vec<usize> = slots.iter().map(|s| s.dim(n)).collect();
        let total: usize = dims.iter().product();
        let mut comps = Vec::with_capacity(total);
        let mut idx = vec![0usize; slots.len()];
        for _ in 0..total {
            comps.push(f(&idx));
            for p in (0..idx.len()).rev() {
                idx[p] += 1;
                if idx[p] < dims[p] {
                    break;
                }
                idx[p] = 0;
            }
        }
        Tensor { n, slots: slots.to_vec(), weight, comps }
    }

    pub fn scalar(n: usize, weight: (i64, i64), f: Jet<S>) -> Self {
        Tensor { n, slots: vec![], weight, comps: vec![f] }
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.slots.len(), "wrong number of indices");
        let mut off = 0;
        for (s, &i) in self.slots.iter().zip(idx) {
            let d = s.dim(self.n);
            assert!(i < d, "index {} out of range {}", i, d);
            off = off * d + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> &Jet<S> {
        &self.comps[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Jet<S>) {
        let o = self.offset(idx);
        self.comps[o] = v;
    }

    pub fn components(&self) -> &[Jet<S>] {
        &self.comps
    }

    /// Every index tuple in storage order.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![];
        let _ = Tensor::<S>::from_fn(self.n, &self.slots, self.weight, |i| {
            out.push(i.to_vec());
            Jet::zero(1, 0)
        });
        out
    }

    /// Complex conjugate: barred and unbarred slots swap, weight becomes `(w′, w)`.
    pub fn conj(&self, s: &PseudohermitianStructure<S>) -> Self {
        let slots: Vec<Slot> = self.slots.iter().map(|x| x.conj()).collect();
        Tensor::from_fn(self.n, &slots, (self.weight.1, self.weight.0), |idx| {
            let src: Vec<usize> =
                idx.iter().zip(&self.slots).map(|(&i, sl)| if *sl == Slot::Frame { s.bar(i) } else { i }).collect();
            s.conj(self.get(&src))
        })
    }

    /// Moves slot `p` between `Up`/`BarDown` and `Down`/`BarUp` using the Levi form.
    ///
    /// Lowering an unbarred upper index gives a barred lower one, and so on; the
    /// weight is unchanged since the Levi form is trivialized by the contact form.
    pub fn flip(&self, p: usize, s: &PseudohermitianStructure<S>) -> Result<Self> {
        let n = self.n;
        let (to, metric): (Slot, Box<dyn Fn(usize, usize) -> Jet<S>>) = match self.slots[p] {
            // T_β̄ = h_{αβ̄} T^α
            Slot::Up => (Slot::BarDown, Box::new(|j, i| s.h[i][j].clone())),
            // T_α = h_{αβ̄} T^β̄
            Slot::BarUp => (Slot::Down, Box::new(|j, i| s.h[j][i].clone())),
            // T^β̄ = h^{αβ̄} T_α
            Slot::Down => (Slot::BarUp, Box::new(|j, i| s.g[i][j].clone())),
            // T^α = h^{αβ̄} T_β̄
            Slot::BarDown => (Slot::Up, Box::new(|j, i| s.g[j][i].clone())),
            Slot::Frame => return Err(Error::Unsupported("raising a frame slot".into())),
        };
        let mut slots = self.slots.clone();
        slots[p] = to;
        Ok(Tensor::from_fn(n, &slots, self.weight, |idx| {
            let mut src = idx.to_vec();
            let mut acc = s.zero();
            for i in 0..n {
                src[p] = i;
                let v = self.get(&src);
                if v.terms().next().is_some() {
                    acc = acc + &metric(idx[p], i) * v;
                }
            }
            acc
        }))
    }
}

/// `∇x` with the new frame slot appended last: component `[.., K]` is `∇_{e_K}` of `x`.
pub fn covariant_derivative<S: Scalar>(x: &Tensor<S>, s: &PseudohermitianStructure<S>) -> Result<Tensor<S>> {
    let n = s.n();
    if x.n != n {
        return Err(Error::Shape("tensor and structure have different n".into()));
    }
    let mut slots = x.slots.clone();
    slots.push(Slot::Frame);
    let (w, wp) = x.weight;
    let dens = if w != wp { Some(S::ratio(w - wp, n as i64 + 2)) } else { None };
    let rho: Vec<Jet<S>> = match dens {
        Some(ref f) => (0..s.dim()).map(|k| s.rho(k).scale(f)).collect(),
        None => vec![],
    };
    let out = Tensor::from_fn(n, &slots, x.weight, |idx| {
        let (base, k) = (&idx[..idx.len() - 1], idx[idx.len() - 1]);
        let v = x.get(base);
        let mut acc = s.deriv(k, v);
        if dens.is_some() && v.terms().next().is_some() {
            acc = acc + &rho[k] * v;
        }
        let mut src = base.to_vec();
        for (p, sl) in x.slots.iter().enumerate() {
            let i = base[p];
            for j in 0..sl.dim(n) {
                src[p] = j;
                let xv = x.get(&src);
                if xv.terms().next().is_none() {
                    continue;
                }
                let coef = match sl {
                    Slot::Up => s.gamma(k, j, i).clone(),
                    Slot::Down => -s.gamma(k, i, j),
                    Slot::BarUp => s.gamma_bar(k, j, i),
                    Slot::BarDown => -s.gamma_bar(k, i, j),
                    Slot::Frame => -s.frame_gamma(k, i, j),
                };
                if coef.terms().next().is_some() {
                    acc = acc + &coef * xv;
                }
            }
            src[p] = i;
        }
        acc
    });
    if out.comps.iter().any(|c| c.is_exhausted()) {
        return Err(Error::Order("covariant derivative exhausted the jet order".into()));
    }
    Ok(out)
}
