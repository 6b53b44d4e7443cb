//! Line parser for manifold-spec text.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Base, Density, ManifoldSpecFile, Polynomial};
use crate::error::{Error, Result};
use crate::exactnum::{Backend, Qi, Scalar};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Left-hand side of a spec line.
enum Key {
    Scalar(String),
    Phi(usize, usize),
    U,
    Density(String),
}

fn parse_key(line: usize, lhs: &str) -> Result<Key> {
    let words: Vec<&str> = lhs.split_whitespace().collect();
    match words.as_slice() {
        ["phi", a, b] => {
            let idx = |w: &str| w.parse::<usize>().map_err(|_| perr(line, format!("phi index '{}' is not a positive integer", w)));
            Ok(Key::Phi(idx(a)?, idx(b)?))
        }
        ["u"] => Ok(Key::U),
        ["density", name] => {
            if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(perr(line, format!("density name '{}' may only use letters, digits, '_' and '-'", name)));
            }
            Ok(Key::Density(name.to_string()))
        }
        [k] => Ok(Key::Scalar(k.to_string())),
        _ => Err(perr(line, format!("unrecognized key '{}'", lhs.trim()))),
    }
}

/// Parses raw text; field-level validation happens afterwards.
pub(super) fn parse(text: &str) -> Result<ManifoldSpecFile> {
    let mut scalars: Vec<(usize, String, String)> = vec![];
    let mut polys: Vec<(usize, Key, String)> = vec![];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = content.split_once('=') else {
            return Err(perr(line, "expected 'key = value'"));
        };
        let rhs = rhs.trim().to_string();
        match parse_key(line, lhs)? {
            Key::Scalar(k) => {
                if scalars.iter().any(|(_, k2, _)| *k2 == k) {
                    return Err(perr(line, format!("duplicate key '{}'", k)));
                }
                scalars.push((line, k, rhs));
            }
            key => polys.push((line, key, rhs)),
        }
    }

    let get = |k: &str| scalars.iter().find(|(_, k2, _)| k2 == k);
    let int = |k: &str| -> Result<Option<u64>> {
        match get(k) {
            None => Ok(None),
            Some((line, _, v)) => v.parse::<u64>().map(Some).map_err(|_| perr(*line, format!("{} must be a nonnegative integer, got '{}'", k, v))),
        }
    };
    for (line, k, _) in &scalars {
        if !["name", "n", "jet_order", "base", "backend", "seed", "random_inputs"].contains(&k.as_str()) {
            return Err(perr(*line, format!("unknown key '{}'", k)));
        }
    }
    let n = int("n")?.ok_or_else(|| perr(0, "missing required key 'n'"))? as usize;
    if n == 0 || n > 3 {
        let line = get("n").map(|l| l.0).unwrap_or(0);
        return Err(perr(line, format!("n must be 1, 2 or 3, got {}", n)));
    }
    let jet_order = int("jet_order")?.unwrap_or(4) as u32;
    let base = match get("base") {
        None => Base::Heisenberg,
        Some((_, _, v)) if v == "heisenberg" => Base::Heisenberg,
        Some((line, _, v)) => return Err(perr(*line, format!("unsupported base '{}' (only 'heisenberg')", v))),
    };
    let backend = match get("backend") {
        None => Backend::Exact,
        Some((_, _, v)) if v == "exact" => Backend::Exact,
        Some((_, _, v)) if v == "float" => Backend::Float,
        Some((line, _, v)) => return Err(perr(*line, format!("backend must be 'exact' or 'float', got '{}'", v))),
    };
    let seed = int("seed")?.unwrap_or(0);
    let random_inputs = int("random_inputs")?.unwrap_or(0) as usize;
    let name = get("name").map(|(_, _, v)| v.clone()).unwrap_or_else(|| "unnamed".into());

    let nv = 2 * n + 1;
    let mut phi: Vec<(usize, usize, usize, Polynomial)> = vec![];
    let mut u = None;
    let mut densities: Vec<Density> = vec![];
    for (line, key, rhs) in polys {
        let p = PolyParser::new(&rhs, n, line).parse_all()?;
        match key {
            Key::Phi(a, b) => {
                if a == 0 || b == 0 || a > n || b > n {
                    return Err(perr(line, format!("phi indices must lie in 1..={}, got ({}, {})", n, a, b)));
                }
                if phi.iter().any(|e| e.1 == a && e.2 == b) {
                    return Err(perr(line, format!("duplicate entry phi {} {}", a, b)));
                }
                phi.push((line, a, b, p));
            }
            Key::U => {
                if u.is_some() {
                    return Err(perr(line, "duplicate conformal factor u"));
                }
                u = Some(p);
            }
            Key::Density(name) => {
                if densities.iter().any(|d| d.name == name) {
                    return Err(perr(line, format!("duplicate density '{}'", name)));
                }
                densities.push(Density { name, poly: p });
            }
            Key::Scalar(_) => unreachable!("scalar keys handled above"),
        }
    }

    // φ_{αβ} = φ_{βα}: when both entries are given they must agree.
    let mut deformation = vec![];
    for (line, a, b, p) in &phi {
        if a > b {
            match phi.iter().find(|e| e.1 == *b && e.2 == *a) {
                Some(other) if other.3 != *p => {
                    return Err(Error::Validation(format!(
                        "symmetry: phi {} {} (line {}) differs from phi {} {} (line {})",
                        a, b, line, b, a, other.0
                    )))
                }
                Some(_) => continue,
                None => deformation.push((b - 1, a - 1, p.clone())),
            }
        } else {
            deformation.push((a - 1, b - 1, p.clone()));
        }
    }
    deformation.retain(|(_, _, p)| !p.is_zero());
    deformation.sort_by_key(|(a, b, _)| (*a, *b));
    debug_assert!(deformation.iter().all(|(_, _, p)| p.nvars == nv));

    Ok(ManifoldSpecFile {
        name,
        n,
        jet_order,
        base,
        deformation,
        conformal_factor: u,
        densities,
        backend,
        seed,
        random_inputs,
    })
}

/// Recursive descent over `poly := term (('+'|'-') term)*`, `term := factor (['*'] factor)*`,
/// `factor := atom ['^' int]`, `atom := number | 'i' | variable | '(' poly ')'`.
struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
    line: usize,
}

impl<'a> PolyParser<'a> {
    fn new(src: &'a str, n: usize, line: usize) -> Self {
        PolyParser { src: src.as_bytes(), pos: 0, n, line }
    }

    fn nv(&self) -> usize {
        2 * self.n + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, format!("{} (column {})", msg.into(), self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Polynomial> {
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let p = self.poly()?;
        if let Some(c) = self.peek() {
            return Err(self.err(format!("unexpected '{}'", c as char)));
        }
        Ok(p)
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.nv());
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.add(&t.neg()) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let a = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            if e > 64 {
                return Err(self.err("exponent too large"));
            }
            let mut out = Polynomial::constant(self.nv(), Qi::one());
            for _ in 0..e {
                out = out.mul(&a);
            }
            return Ok(out);
        }
        Ok(a)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse::<BigInt>().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let nv = self.nv();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut den = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                }
                Ok(Polynomial::constant(nv, Qi::new(BigRational::new(num, den), BigRational::zero())))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii word");
                self.variable(word).ok_or_else(|| {
                    self.pos = start;
                    self.err(format!("unknown symbol '{}' (expected i, t, z1..z{n}, zb1..zb{n})", word, n = self.n))
                })
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of polynomial")),
        }
    }

    fn variable(&self, word: &str) -> Option<Polynomial> {
        let (n, nv) = (self.n, self.nv());
        if word == "i" {
            return Some(Polynomial::constant(nv, Qi::i()));
        }
        if word == "t" {
            return Some(Polynomial::var(nv, 2 * n));
        }
        let (offset, digits) = if let Some(d) = word.strip_prefix("zb") { (n, d) } else { (0, word.strip_prefix('z')?) };
        let k: usize = digits.parse().ok()?;
        (1..=n).contains(&k).then(|| Polynomial::var(nv, offset + k - 1))
    }
}
