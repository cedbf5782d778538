//! Dense univariate polynomials over Q.

use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::{fmt_q, one, qi, zero, Q};

/// Coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(one())
    }

    pub fn constant(a: Q) -> Self {
        Poly::new(vec![a])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly::new(vec![zero(), one()])
    }

    pub fn monomial(a: Q, k: usize) -> Self {
        let mut c = vec![zero(); k + 1];
        c[k] = a;
        Poly::new(c)
    }

    /// `x + a`
    pub fn linear(a: Q) -> Self {
        Poly::new(vec![a, one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| qi(v)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.c.get(k).cloned().unwrap_or_else(zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(zero)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn scale(&self, a: &Q) -> Self {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * qi(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(g)`
    pub fn compose(&self, g: &Poly) -> Self {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(a.clone());
        }
        acc
    }

    /// `p(x + a)`
    pub fn shift(&self, a: &Q) -> Self {
        self.compose(&Poly::linear(a.clone()))
    }

    /// Multiply by `x^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.lead().recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let f = &r[k + dd] * &lead_inv;
            if !f.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &f * b;
                }
            }
            quo[k] = f;
        }
        r.truncate(dd);
        (Poly::new(quo), Poly::new(r))
    }

    /// Quotient when the division is exact.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.divrem(&y).1;
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Squarefree part, monic.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return Poly::one();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Multiplicity of `h` as a factor of `self` (`self` nonzero, `h` nonconstant).
    pub fn order_at(&self, h: &Poly) -> usize {
        let mut n = 0;
        let mut p = self.clone();
        while let Some(q) = p.div_exact(h) {
            n += 1;
            p = q;
        }
        n
    }

    /// Rational roots, each once.
    pub fn rational_roots(&self) -> Vec<Q> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        let Some(v) = self.valuation() else {
            return Vec::new();
        };
        let mut roots = Vec::new();
        if v > 0 {
            roots.push(zero());
        }
        let p = Poly::new(self.c[v..].to_vec());
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        // integer coefficients
        let lcm = p
            .c
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = p
            .c
            .iter()
            .map(|x| (x * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        let divs0 = small_divisors(&a0);
        let divsn = small_divisors(&an);
        let sq = p.squarefree();
        for num in &divs0 {
            for den in &divsn {
                for sign in [1i64, -1] {
                    let r = Q::new(num * BigInt::from(sign), den.clone());
                    if sq.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots
    }
}

fn small_divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    use num_traits::{Signed, ToPrimitive};
    let m = n.abs();
    let Some(m) = m.to_u64() else {
        return vec![BigInt::one()];
    };
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(BigInt::from(d));
            if d != m / d {
                out.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    /// Prints in the variable `t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl Poly {
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a < &zero();
            let mag = if neg { -a } else { a.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&fmt_q(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&mag), mono));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let b = Poly::from_ints(&[-1, 1]); // x - 1
        assert_eq!(a.div_exact(&b), Some(Poly::from_ints(&[1, 1])));
        let c = Poly::from_ints(&[1, 2, 1]);
        assert_eq!(Poly::gcd(&a, &c), Poly::from_ints(&[1, 1]));
        let (qq, r) = Poly::from_ints(&[1, 0, 0, 1]).divrem(&Poly::from_ints(&[1, 2]));
        assert_eq!(&(&qq * &Poly::from_ints(&[1, 2])) + &r, Poly::from_ints(&[1, 0, 0, 1]));
    }

    #[test]
    fn squarefree_and_orders() {
        let p = Poly::from_ints(&[0, 0, 0, 0, -1, 1]).scale(&qi(-256)); // -256 t^4 (t-1)
        assert_eq!(p.squarefree(), Poly::from_ints(&[0, -1, 1]));
        assert_eq!(p.order_at(&Poly::x()), 4);
        assert_eq!(p.order_at(&Poly::from_ints(&[-1, 1])), 1);
    }

    #[test]
    fn rational_roots_found() {
        // (2x - 1)(x + 3) x
        let p = &(&Poly::from_ints(&[-1, 2]) * &Poly::from_ints(&[3, 1])) * &Poly::x();
        let mut r = p.rational_roots();
        r.sort();
        assert_eq!(r, vec![qi(-3), zero(), q(1, 2)]);
    }

    #[test]
    fn compose_and_shift() {
        let p = Poly::from_ints(&[1, 1, 1]);
        assert_eq!(p.shift(&qi(1)), Poly::from_ints(&[3, 3, 1]));
        assert_eq!(p.eval(&q(1, 2)), q(7, 4));
        assert_eq!(p.derivative(), Poly::from_ints(&[1, 2]));
    }
}
