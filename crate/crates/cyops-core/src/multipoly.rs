//! Sparse multivariate polynomials over Q in a fixed variable set.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{CyError, Result};
use crate::poly::Poly;
use crate::rational::{fmt_q, one, parse_q, qi, zero, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    #[serde(rename = "t")]
    T,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "λ")]
    Lambda,
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

pub const NVARS: usize = 8;
pub const ALL_VARS: [Var; NVARS] = [
    Var::T,
    Var::U,
    Var::S,
    Var::V,
    Var::Z,
    Var::Lambda,
    Var::A,
    Var::B,
];

impl Var {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["t", "u", "s", "v", "Z", "λ", "a", "b"][self.index()]
    }

    pub fn parse(s: &str) -> Option<Var> {
        match s {
            "t" => Some(Var::T),
            "u" => Some(Var::U),
            "s" => Some(Var::S),
            "v" => Some(Var::V),
            "Z" => Some(Var::Z),
            "λ" | "lambda" | "l" => Some(Var::Lambda),
            "a" => Some(Var::A),
            "b" => Some(Var::B),
            _ => None,
        }
    }
}

pub type Exps = [u32; NVARS];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exps, Q>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(one())
    }

    pub fn constant(a: Q) -> Self {
        MultiPoly::monomial(a, [0; NVARS])
    }

    pub fn monomial(a: Q, e: Exps) -> Self {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(e, a);
        }
        MultiPoly { terms }
    }

    pub fn var(x: Var) -> Self {
        let mut e = [0; NVARS];
        e[x.index()] = 1;
        MultiPoly::monomial(one(), e)
    }

    /// Univariate polynomial read in variable `x`.
    pub fn from_poly(p: &Poly, x: Var) -> Self {
        let mut out = MultiPoly::zero();
        for (k, a) in p.coeffs().iter().enumerate() {
            let mut e = [0; NVARS];
            e[x.index()] = k as u32;
            out.add_term(e, a.clone());
        }
        out
    }

    pub fn from_terms(terms: Vec<(Exps, Q)>) -> Self {
        let mut out = MultiPoly::zero();
        for (e, a) in terms {
            out.add_term(e, a);
        }
        out
    }

    fn add_term(&mut self, e: Exps, a: Q) {
        if a.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(zero);
        *slot += a;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&[0; NVARS]).cloned().unwrap_or_else(zero)
    }

    pub fn scale(&self, a: &Q) -> Self {
        if a.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * a)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn degree_in(&self, x: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[x.index()]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Variables with a positive exponent somewhere.
    pub fn variables(&self) -> Vec<Var> {
        ALL_VARS
            .iter()
            .copied()
            .filter(|x| self.terms.keys().any(|e| e[x.index()] > 0))
            .collect()
    }

    /// Coefficients of `x^k` as polynomials in the remaining variables.
    pub fn coefficients_in(&self, x: Var) -> Vec<MultiPoly> {
        let d = self.degree_in(x).unwrap_or(0) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        for (e, a) in &self.terms {
            let mut f = *e;
            let k = f[x.index()] as usize;
            f[x.index()] = 0;
            out[k].add_term(f, a.clone());
        }
        out
    }

    /// Univariate view when only `x` occurs.
    pub fn to_poly(&self, x: Var) -> Option<Poly> {
        let mut c = vec![zero(); self.degree_in(x).unwrap_or(0) as usize + 1];
        for (e, a) in &self.terms {
            for (i, &k) in e.iter().enumerate() {
                if i != x.index() && k != 0 {
                    return None;
                }
            }
            c[e[x.index()] as usize] = a.clone();
        }
        Some(Poly::new(c))
    }

    pub fn specialize(&self, x: Var, val: &Q) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, a) in &self.terms {
            let mut f = *e;
            let k = f[x.index()];
            f[x.index()] = 0;
            out.add_term(f, a * crate::rational::qpow(val, k as i64));
        }
        out
    }

    /// Replaces `x` by the polynomial `g`.
    pub fn substitute(&self, x: Var, g: &MultiPoly) -> MultiPoly {
        let cs = self.coefficients_in(x);
        let mut acc = MultiPoly::zero();
        for c in cs.iter().rev() {
            acc = &(&acc * g) + c;
        }
        acc
    }

    pub fn derivative(&self, x: Var) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, a) in &self.terms {
            let k = e[x.index()];
            if k > 0 {
                let mut f = *e;
                f[x.index()] = k - 1;
                out.add_term(f, a * qi(k as i64));
            }
        }
        out
    }

    /// Lex-leading term (variable order t > u > s > ...).
    fn leading(&self) -> Option<(&Exps, &Q)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (*de, dc.clone());
        let mut r = self.clone();
        let mut quo = MultiPoly::zero();
        while let Some((re, rc)) = r.leading() {
            let mut e = [0; NVARS];
            for i in 0..NVARS {
                if re[i] < de[i] {
                    return None;
                }
                e[i] = re[i] - de[i];
            }
            let m = MultiPoly::monomial(rc / &dc, e);
            r = &r - &(&m * d);
            quo = &quo + &m;
        }
        Some(quo)
    }

    /// Largest `k` with `h^k | self` (self nonzero, h nonconstant).
    pub fn order_of(&self, h: &MultiPoly) -> u32 {
        let mut k = 0;
        let mut p = self.clone();
        while let Some(q) = p.div_exact(h) {
            k += 1;
            p = q;
        }
        k
    }

    pub fn parse(s: &str) -> Result<MultiPoly> {
        Parser::new(s).parse_all()
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, a) in self.terms.iter().rev() {
            let neg = a < &zero();
            let mag = if neg { -a } else { a.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = ALL_VARS
                .iter()
                .filter(|x| e[x.index()] > 0)
                .map(|x| match e[x.index()] {
                    1 => x.name().to_string(),
                    k => format!("{}^{}", x.name(), k),
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&fmt_q(&mag));
            } else if mag.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&mag), mono.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, a) in &o.terms {
            out.add_term(*e, a.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, a) in &o.terms {
            out.add_term(*e, -a);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, a) in &self.terms {
            for (f, b) in &o.terms {
                let mut g = [0; NVARS];
                for i in 0..NVARS {
                    g[i] = e[i] + f[i];
                }
                out.add_term(g, a * b);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&qi(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: MultiPoly) -> MultiPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Term list `[[exponents], "coef"]` in the fixed variable order.
impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(Vec<u32>, String)> = self
            .terms
            .iter()
            .map(|(e, a)| (e.to_vec(), fmt_q(a)))
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(Vec<u32>, String)> = Vec::deserialize(d)?;
        let mut out = MultiPoly::zero();
        for (e, a) in v {
            if e.len() > NVARS {
                return Err(serde::de::Error::custom("too many exponents"));
            }
            let mut x = [0; NVARS];
            x[..e.len()].copy_from_slice(&e);
            out.add_term(x, parse_q(&a).map_err(serde::de::Error::custom)?);
        }
        Ok(out)
    }
}

/// Quotient of multivariate polynomials, used for rational substitutions.
#[derive(Clone, Debug)]
pub struct MRat {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl MRat {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        MRat { num, den }
    }

    pub fn poly(p: MultiPoly) -> Self {
        MRat::new(p, MultiPoly::one())
    }

    /// `p(x ↦ r)` with the denominator `den^deg` kept explicit.
    pub fn substitute(p: &MultiPoly, x: Var, r: &MRat) -> MRat {
        let d = p.degree_in(x).unwrap_or(0);
        let cs = p.coefficients_in(x);
        let mut num = MultiPoly::zero();
        for (k, c) in cs.iter().enumerate() {
            num = &num + &(&(c * &r.num.pow(k as u32)) * &r.den.pow(d - k as u32));
        }
        MRat::new(num, r.den.pow(d))
    }

    pub fn mul(&self, o: &MRat) -> MRat {
        MRat::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn add(&self, o: &MRat) -> MRat {
        MRat::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn sub(&self, o: &MRat) -> MRat {
        self.add(&MRat::new(-&o.num, o.den.clone()))
    }

    /// Numerator of `self − o` over a common denominator.
    pub fn difference_numerator(&self, o: &MRat) -> MultiPoly {
        &(&self.num * &o.den) - &(&o.num * &self.den)
    }

    pub fn equals(&self, o: &MRat) -> bool {
        self.difference_numerator(o).is_zero()
    }

    /// Polynomial value when the denominator divides the numerator.
    pub fn to_poly(&self) -> Result<MultiPoly> {
        self.num.div_exact(&self.den).ok_or(CyError::NonPolynomialResult)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, msg: &str) -> CyError {
        CyError::Parse(format!("{msg} at {} in {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<MultiPoly> {
        let p = self.expr()?;
        if self.pos != self.chars.len() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(self.err("division by a non-constant"));
                    }
                    acc = acc.scale(&d.constant_term().recip());
                }
                Some(c) if c == '(' || c.is_alphabetic() => {
                    acc = &acc * &self.unary()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let k: u32 = self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected )"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                Ok(MultiPoly::constant(parse_q(&s)?))
            }
            Some(c) if c.is_alphabetic() => {
                self.pos += 1;
                let name = c.to_string();
                let x = Var::parse(&name).ok_or_else(|| self.err("unknown variable"))?;
                Ok(MultiPoly::var(x))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Shorthand for tables; panics on malformed literals.
pub fn mp(s: &str) -> MultiPoly {
    MultiPoly::parse(s).unwrap_or_else(|e| panic!("{e}"))
}
