//! Truncated power series with exact coefficients.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{CyError, Result};
use crate::poly::Poly;
use crate::rational::{one, qi, zero, Q};

/// Coefficients `c[0..=N]`; everything past `N` is unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    #[serde(with = "crate::rational::vec_str")]
    c: Vec<Q>,
}

impl Series {
    /// Panics on an empty coefficient list.
    pub fn new(c: Vec<Q>) -> Self {
        assert!(!c.is_empty(), "a series needs at least one coefficient");
        Series { c }
    }

    pub fn zeros(n: usize) -> Self {
        Series { c: vec![zero(); n + 1] }
    }

    pub fn one(n: usize) -> Self {
        Series::constant(one(), n)
    }

    pub fn constant(a: Q, n: usize) -> Self {
        let mut s = Series::zeros(n);
        s.c[0] = a;
        s
    }

    /// `1/(1-t)`, the Hadamard identity.
    pub fn geometric(n: usize) -> Self {
        Series { c: vec![one(); n + 1] }
    }

    /// The variable `t`.
    pub fn var(n: usize) -> Self {
        Series::from_poly(&Poly::x(), n)
    }

    pub fn from_poly(p: &Poly, n: usize) -> Self {
        Series {
            c: (0..=n).map(|k| p.coeff(k)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.c.get(k).cloned().unwrap_or_else(zero)
    }

    pub fn set_coeff(&mut self, k: usize, a: Q) {
        self.c[k] = a;
    }

    pub fn truncate(&self, n: usize) -> Self {
        Series {
            c: self.c[..=n.min(self.order())].to_vec(),
        }
    }

    pub fn scale(&self, a: &Q) -> Self {
        Series {
            c: self.c.iter().map(|x| x * a).collect(),
        }
    }

    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    /// First index `<= n` where the coefficient is nonzero.
    pub fn first_nonzero_through(&self, n: usize) -> Option<usize> {
        self.c.iter().take(n + 1).position(|x| !x.is_zero())
    }

    /// First index where the two series differ, within the common order.
    pub fn first_mismatch(&self, o: &Series) -> Option<usize> {
        let n = self.order().min(o.order());
        (0..=n).find(|&k| self.c[k] != o.c[k])
    }

    /// Truncation-aware equality.
    pub fn agrees(&self, o: &Series) -> bool {
        self.first_mismatch(o).is_none()
    }

    pub fn hadamard(&self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        Series {
            c: (0..=n).map(|k| &self.c[k] * &o.c[k]).collect(),
        }
    }

    /// `d/dt`; the order drops by one.
    pub fn derivative(&self) -> Series {
        if self.order() == 0 {
            return Series::zeros(0);
        }
        Series {
            c: (1..self.c.len()).map(|k| &self.c[k] * qi(k as i64)).collect(),
        }
    }

    /// `t d/dt`
    pub fn theta(&self) -> Series {
        Series {
            c: self
                .c
                .iter()
                .enumerate()
                .map(|(k, a)| a * qi(k as i64))
                .collect(),
        }
    }

    /// Multiply by `t^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Series {
        let n = self.order();
        Series {
            c: (0..=n)
                .map(|i| if i < k { zero() } else { self.c[i - k].clone() })
                .collect(),
        }
    }

    /// Divide by `t^k`; the low coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Series> {
        if let Some(i) = self.first_nonzero_through(k.saturating_sub(1)) {
            if i < k {
                return Err(CyError::SeriesDivisionPole(i));
            }
        }
        if k > self.order() {
            return Err(CyError::SeriesDivisionPole(self.order()));
        }
        Ok(Series {
            c: self.c[k..].to_vec(),
        })
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Series> {
        if self.c[0].is_zero() {
            return Err(CyError::SeriesDivisionPole(0));
        }
        let n = self.order();
        let inv0 = self.c[0].recip();
        let mut out = vec![inv0.clone()];
        for k in 1..=n {
            let mut acc = zero();
            for j in 1..=k {
                acc += &self.c[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(Series { c: out })
    }

    /// `self / d`, where `d = t^k * unit` and `self` vanishes to order `k`.
    pub fn div(&self, d: &Series) -> Result<Series> {
        let k = d.valuation().ok_or(CyError::SeriesDivisionPole(0))?;
        let num = self.shift_down(k)?;
        let den = d.shift_down(k)?;
        let n = num.order().min(den.order());
        Ok(&num.truncate(n) * &den.truncate(n).inverse()?)
    }

    /// `self ∘ g` for `g(0) = 0`.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        if !g.c[0].is_zero() {
            return Err(CyError::NonzeroConstantTerm);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Series::zeros(n);
        for a in self.c[..=n].iter().rev() {
            acc = &acc * &g;
            acc.c[0] += a;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut acc = Series::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// `base^r` for a polynomial with constant term 1, via the binomial series
/// of `(1+x)^r` composed with `base - 1`.
pub fn algebraic_power(base: &Poly, r: &Q, n: usize) -> Result<Series> {
    if base.coeff(0) != one() {
        return Err(CyError::UnsupportedSpec(
            "algebraic power needs a base with constant term 1".into(),
        ));
    }
    let mut b = vec![one()];
    for k in 0..n {
        let next = &b[k] * (r - qi(k as i64)) / qi(k as i64 + 1);
        b.push(next);
    }
    let inner = Series::from_poly(&(base - &Poly::one()), n);
    Series::new(b).compose(&inner)
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        Series {
            c: (0..=n).map(|k| &self.c[k] + &o.c[k]).collect(),
        }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        Series {
            c: (0..=n).map(|k| &self.c[k] - &o.c[k]).collect(),
        }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        let mut c = vec![zero(); n + 1];
        for (i, a) in self.c[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c[..=n - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Series { c }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

/// Bivariate series with triangular support `m + n <= N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    rows: Vec<Vec<Q>>,
}

impl BiSeries {
    pub fn zeros(n: usize) -> Self {
        BiSeries {
            rows: (0..=n).map(|m| vec![zero(); n - m + 1]).collect(),
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Q) -> Self {
        BiSeries {
            rows: (0..=n).map(|m| (0..=n - m).map(|k| f(m, k)).collect()).collect(),
        }
    }

    /// A polynomial `Σ c x^m y^n` given as `((m, n), c)` terms.
    pub fn from_terms(n: usize, terms: &[((usize, usize), Q)]) -> Self {
        let mut s = BiSeries::zeros(n);
        for ((i, j), c) in terms {
            if i + j <= n {
                s.rows[*i][*j] += c;
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn coeff(&self, m: usize, n: usize) -> Q {
        self.rows
            .get(m)
            .and_then(|r| r.get(n))
            .cloned()
            .unwrap_or_else(zero)
    }

    pub fn truncate(&self, n: usize) -> Self {
        BiSeries::from_fn(n.min(self.order()), |i, j| self.rows[i][j].clone())
    }

    pub fn scale(&self, a: &Q) -> Self {
        BiSeries::from_fn(self.order(), |i, j| &self.rows[i][j] * a)
    }

    /// `∂/∂x`
    pub fn dx(&self) -> Self {
        let n = self.order().saturating_sub(1);
        BiSeries::from_fn(n, |i, j| &self.rows[i + 1][j] * qi(i as i64 + 1))
    }

    /// `∂/∂y`
    pub fn dy(&self) -> Self {
        let n = self.order().saturating_sub(1);
        BiSeries::from_fn(n, |i, j| &self.rows[i][j + 1] * qi(j as i64 + 1))
    }

    /// Multiply by `x^a y^b`, keeping the order.
    pub fn shift(&self, a: usize, b: usize) -> Self {
        BiSeries::from_fn(self.order(), |i, j| {
            if i >= a && j >= b {
                self.rows[i - a][j - b].clone()
            } else {
                zero()
            }
        })
    }

    /// Smallest total degree carrying a nonzero coefficient, up to `n`.
    pub fn first_nonzero_degree_through(&self, n: usize) -> Option<usize> {
        (0..=n.min(self.order()))
            .find(|&d| (0..=d).any(|i| !self.rows[i][d - i].is_zero()))
    }

    /// `self(X, Y)` for bivariate `X`, `Y` without constant terms.
    pub fn compose(&self, x: &BiSeries, y: &BiSeries) -> Result<BiSeries> {
        if !x.coeff(0, 0).is_zero() || !y.coeff(0, 0).is_zero() {
            return Err(CyError::NonzeroConstantTerm);
        }
        let n = self.order().min(x.order()).min(y.order());
        let x = x.truncate(n);
        let y = y.truncate(n);
        let mut xp = vec![BiSeries::from_terms(n, &[((0, 0), one())])];
        let mut yp = xp.clone();
        for k in 1..=n {
            xp.push(&xp[k - 1] * &x);
            yp.push(&yp[k - 1] * &y);
        }
        let mut acc = BiSeries::zeros(n);
        for i in 0..=n {
            for j in 0..=n - i {
                let c = &self.rows[i][j];
                if c.is_zero() {
                    continue;
                }
                let term = (&xp[i] * &yp[j]).scale(c);
                acc = &acc + &term;
            }
        }
        Ok(acc)
    }
}

impl Add for &BiSeries {
    type Output = BiSeries;
    fn add(self, o: &BiSeries) -> BiSeries {
        let n = self.order().min(o.order());
        BiSeries::from_fn(n, |i, j| &self.rows[i][j] + &o.rows[i][j])
    }
}

impl Sub for &BiSeries {
    type Output = BiSeries;
    fn sub(self, o: &BiSeries) -> BiSeries {
        let n = self.order().min(o.order());
        BiSeries::from_fn(n, |i, j| &self.rows[i][j] - &o.rows[i][j])
    }
}

impl Mul for &BiSeries {
    type Output = BiSeries;
    fn mul(self, o: &BiSeries) -> BiSeries {
        let n = self.order().min(o.order());
        let mut out = BiSeries::zeros(n);
        for i in 0..=n {
            for j in 0..=n - i {
                let a = &self.rows[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..=n - i - j {
                    for l in 0..=n - i - j - k {
                        let b = &o.rows[k][l];
                        if !b.is_zero() {
                            out.rows[i + k][j + l] += a * b;
                        }
                    }
                }
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
    fn inverse_of_one_minus_t_is_geometric() {
        let s = Series::from_poly(&Poly::from_ints(&[1, -1]), 6);
        assert_eq!(s.inverse().unwrap(), Series::geometric(6));
    }

    #[test]
    fn division_with_t_power() {
        // (t^2 + t^3) / (2 t^2) = 1/2 + t/2
        let a = Series::from_poly(&Poly::from_ints(&[0, 0, 1, 1]), 5);
        let d = Series::from_poly(&Poly::from_ints(&[0, 0, 2]), 5);
        let r = a.div(&d).unwrap();
        assert_eq!(r.order(), 3);
        assert_eq!(r.coeffs(), &[q(1, 2), q(1, 2), zero(), zero()]);
        let bad = Series::from_poly(&Poly::from_ints(&[0, 1]), 5);
        assert_eq!(bad.div(&d), Err(CyError::SeriesDivisionPole(1)));
    }

    #[test]
    fn compose_rejects_constant_term() {
        let f = Series::geometric(4);
        assert_eq!(f.compose(&Series::one(4)), Err(CyError::NonzeroConstantTerm));
        let t2 = Series::from_poly(&Poly::from_ints(&[0, 0, 1]), 4);
        assert_eq!(
            f.compose(&t2).unwrap().coeffs(),
            &[one(), zero(), one(), zero(), one()]
        );
    }

    #[test]
    fn algebraic_power_examples() {
        let b = Poly::from_ints(&[1, -1]);
        assert_eq!(
            algebraic_power(&b, &q(-1, 2), 2).unwrap().coeffs(),
            &[one(), q(1, 2), q(3, 8)]
        );
        assert_eq!(algebraic_power(&b, &zero(), 3).unwrap(), Series::one(3));
        assert_eq!(
            algebraic_power(&b, &one(), 3).unwrap().coeffs(),
            &[one(), qi(-1), zero(), zero()]
        );
    }

    #[test]
    fn truncation_follows_shorter_operand() {
        let a = Series::geometric(3);
        let b = Series::geometric(5);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!(a.hadamard(&b).order(), 3);
        assert!(a.agrees(&b));
    }

    #[test]
    fn biseries_derivatives_and_products() {
        // (1 + x)(1 + y) = 1 + x + y + xy
        let a = BiSeries::from_terms(4, &[((0, 0), one()), ((1, 0), one())]);
        let b = BiSeries::from_terms(4, &[((0, 0), one()), ((0, 1), one())]);
        let p = &a * &b;
        assert_eq!(p.coeff(1, 1), one());
        assert_eq!(p.dx().coeff(0, 1), one());
        assert_eq!(p.dy().coeff(1, 0), one());
        assert_eq!(p.shift(1, 0).coeff(2, 1), one());
    }
}
