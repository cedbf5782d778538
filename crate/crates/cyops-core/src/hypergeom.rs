//! Generalized hypergeometric series and the Appell F2 double series.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{CyError, Result};
use crate::poly::Poly;
use crate::rational::{fmt_q, is_nonpositive_integer, one, qi, zero, Q};
use crate::series::{algebraic_power, BiSeries, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrefactorBase {
    #[serde(rename = "t")]
    T,
    #[serde(rename = "1-t")]
    OneMinusT,
    #[serde(rename = "1+t")]
    OnePlusT,
}

impl PrefactorBase {
    pub fn poly(self) -> Poly {
        match self {
            PrefactorBase::T => Poly::x(),
            PrefactorBase::OneMinusT => Poly::from_ints(&[1, -1]),
            PrefactorBase::OnePlusT => Poly::from_ints(&[1, 1]),
        }
    }

    fn label(self) -> &'static str {
        match self {
            PrefactorBase::T => "t",
            PrefactorBase::OneMinusT => "1-t",
            PrefactorBase::OnePlusT => "1+t",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prefactor(pub PrefactorBase, #[serde(with = "crate::rational::as_str")] pub Q);

/// Symbol of `pF_q(upper; lower | t^k)` times optional algebraic prefactors.
/// The terminal `n!` is implicit and never listed in `lower`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergeomSpec {
    #[serde(with = "crate::rational::vec_str")]
    pub upper: Vec<Q>,
    #[serde(with = "crate::rational::vec_str")]
    pub lower: Vec<Q>,
    #[serde(default = "default_power")]
    pub argument_power: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefactor: Vec<Prefactor>,
}

fn default_power() -> u32 {
    1
}

impl HypergeomSpec {
    pub fn new(upper: Vec<Q>, lower: Vec<Q>) -> Self {
        HypergeomSpec {
            upper,
            lower,
            argument_power: 1,
            prefactor: Vec::new(),
        }
    }

    pub fn with_power(mut self, k: u32) -> Self {
        self.argument_power = k;
        self
    }

    pub fn with_prefactor(mut self, base: PrefactorBase, r: Q) -> Self {
        self.prefactor.push(Prefactor(base, r));
        self
    }

    /// `pF_{p-1}(upper; 1, ..., 1)`
    pub fn balanced(upper: Vec<Q>) -> Self {
        let lower = vec![one(); upper.len().saturating_sub(1)];
        HypergeomSpec::new(upper, lower)
    }

    /// Coefficient of `T^m` in the bare series, `T = t^k`.
    pub fn term(&self, m: usize) -> Result<Q> {
        let mut num = one();
        for a in &self.upper {
            num *= pochhammer(a, m);
        }
        let mut den = factorial(m);
        for b in &self.lower {
            let p = pochhammer(b, m);
            if p.is_zero() {
                return Err(CyError::PoleInCoefficient {
                    param: fmt_q(b),
                    index: m,
                });
            }
            den *= p;
        }
        Ok(num / den)
    }

    /// Sorted copies of the parameter lists, for multiset comparison.
    pub fn canonical(&self) -> (Vec<Q>, Vec<Q>) {
        let mut u = self.upper.clone();
        let mut l = self.lower.clone();
        u.sort();
        l.sort();
        (u, l)
    }

    pub fn same_parameters(&self, o: &HypergeomSpec) -> bool {
        self.canonical() == o.canonical() && self.argument_power == o.argument_power
    }
}

impl fmt::Display for HypergeomSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Q]| v.iter().map(fmt_q).collect::<Vec<_>>().join(",");
        for Prefactor(b, r) in &self.prefactor {
            write!(f, "({})^({}) ", b.label(), fmt_q(r))?;
        }
        let arg = if self.argument_power == 1 {
            "t".to_string()
        } else {
            format!("t^{}", self.argument_power)
        };
        write!(
            f,
            "{}F{}({}; {} | {})",
            self.upper.len(),
            self.lower.len(),
            join(&self.upper),
            join(&self.lower),
            arg
        )
    }
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: &Q, n: usize) -> Q {
    let mut acc = one();
    for k in 0..n {
        acc *= a + qi(k as i64);
    }
    acc
}

pub fn factorial(n: usize) -> Q {
    (1..=n).fold(one(), |acc, k| acc * qi(k as i64))
}

/// Exact coefficients through `t^n`.
pub fn hypergeom_series(spec: &HypergeomSpec, n: usize) -> Result<Series> {
    let k = spec.argument_power.max(1) as usize;
    for b in &spec.lower {
        if is_nonpositive_integer(b) {
            let m = (-b).to_integer();
            let idx: usize = m.try_into().unwrap_or(usize::MAX).saturating_add(1);
            if idx * k <= n {
                return Err(CyError::PoleInCoefficient {
                    param: fmt_q(b),
                    index: idx,
                });
            }
        }
    }
    let mut c = vec![zero(); n + 1];
    // term ratio recurrence
    let mut term = one();
    for m in 0..=n / k {
        c[m * k] = term.clone();
        let mut r = one();
        for a in &spec.upper {
            r *= a + qi(m as i64);
        }
        let mut d = qi(m as i64 + 1);
        for b in &spec.lower {
            d *= b + qi(m as i64);
        }
        if d.is_zero() {
            break;
        }
        term = term * r / d;
    }
    let mut s = Series::new(c);
    for Prefactor(base, r) in &spec.prefactor {
        let f = match base {
            PrefactorBase::T => {
                if !r.denom().is_one() || r < &zero() {
                    return Err(CyError::UnsupportedSpec(format!(
                        "t^{} is not a power series",
                        fmt_q(r)
                    )));
                }
                let e: usize = r.to_integer().try_into().unwrap_or(usize::MAX);
                Series::one(n).shift_up(e)
            }
            _ => algebraic_power(&base.poly(), r, n)?,
        };
        s = &s * &f;
    }
    Ok(s)
}

/// Appell `F2(p; q, q'; r, r' | x, y)` with total degree through `n`.
pub fn biseries_f2(p: &Q, q: &Q, q2: &Q, r: &Q, r2: &Q, n: usize) -> Result<BiSeries> {
    for b in [r, r2] {
        if is_nonpositive_integer(b) {
            return Err(CyError::PoleInCoefficient {
                param: fmt_q(b),
                index: 0,
            });
        }
    }
    Ok(BiSeries::from_fn(n, |i, j| {
        pochhammer(p, i + j) * pochhammer(q, i) * pochhammer(q2, j)
            / (pochhammer(r, i) * pochhammer(r2, j) * factorial(i) * factorial(j))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&q(1, 2), 0), one());
        assert_eq!(pochhammer(&q(1, 2), 3), q(15, 8));
        assert_eq!(pochhammer(&q(1, 3), 2), q(4, 9));
    }

    #[test]
    fn series_examples() {
        let s = hypergeom_series(&HypergeomSpec::balanced(vec![q(1, 2), q(1, 2)]), 2).unwrap();
        assert_eq!(s.coeffs(), &[one(), q(1, 4), q(9, 64)]);
        let s = hypergeom_series(&HypergeomSpec::new(vec![q(1, 2)], vec![]), 2).unwrap();
        assert_eq!(s.coeffs(), &[one(), q(1, 2), q(3, 8)]);
        let s = hypergeom_series(&HypergeomSpec::balanced(vec![q(1, 2); 4]), 1).unwrap();
        assert_eq!(s.coeffs(), &[one(), q(1, 16)]);
    }

    #[test]
    fn argument_power_spreads_terms() {
        let spec = HypergeomSpec::new(vec![q(1, 2)], vec![]).with_power(2);
        let s = hypergeom_series(&spec, 4).unwrap();
        assert_eq!(s.coeffs(), &[one(), zero(), q(1, 2), zero(), q(3, 8)]);
    }

    #[test]
    fn pole_reported() {
        let spec = HypergeomSpec::new(vec![q(1, 2)], vec![qi(-1)]);
        assert!(matches!(
            hypergeom_series(&spec, 5),
            Err(CyError::PoleInCoefficient { index: 2, .. })
        ));
        assert!(hypergeom_series(&spec, 1).is_ok());
    }

    #[test]
    fn prefactor_multiplies() {
        // (1-t)^(-1/2) * 0F0-like constant 1 series: 1F0 with no upper is exp-like, so use 1F0(0)
        let spec = HypergeomSpec::new(vec![zero()], vec![])
            .with_prefactor(PrefactorBase::OneMinusT, q(-1, 2));
        let s = hypergeom_series(&spec, 2).unwrap();
        assert_eq!(s.coeffs(), &[one(), q(1, 2), q(3, 8)]);
        let bad = HypergeomSpec::new(vec![zero()], vec![]).with_prefactor(PrefactorBase::T, q(1, 2));
        assert!(matches!(hypergeom_series(&bad, 2), Err(CyError::UnsupportedSpec(_))));
    }

    #[test]
    fn json_shape() {
        let spec = HypergeomSpec::new(vec![q(1, 2), q(1, 2)], vec![one()])
            .with_prefactor(PrefactorBase::OneMinusT, q(-1, 2));
        let js = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            js,
            r#"{"upper":["1/2","1/2"],"lower":["1"],"argument_power":1,"prefactor":[["1-t","-1/2"]]}"#
        );
        let back: HypergeomSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn appell_examples() {
        let h = q(1, 2);
        let f = biseries_f2(&h, &h, &h, &one(), &one(), 3).unwrap();
        assert_eq!(f.coeff(0, 0), one());
        assert_eq!(f.coeff(1, 1), q(3, 16));
        let f = biseries_f2(&h, &h, &h, &one(), &one(), 2).unwrap();
        assert_eq!(f.coeff(1, 0), q(1, 4));
    }
}
