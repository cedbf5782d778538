//! Linear differential operators in `θ = t d/dt` and in `∂ = d/dt`.

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{CyError, Result};
use crate::hypergeom::HypergeomSpec;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rational::{binomial, fmt_q, one, parse_q, q, qi, zero, Q};
use crate::series::Series;

/// `Π (x + a)` over the given shifts.
pub fn shifted_product(shifts: &[Q]) -> Poly {
    shifts
        .iter()
        .fold(Poly::one(), |acc, a| &acc * &Poly::linear(a.clone()))
}

/// Stirling numbers of the second kind, `S2[k][i]`.
fn stirling2(n: usize) -> Vec<Vec<Q>> {
    let mut s = vec![vec![zero(); n + 1]; n + 1];
    s[0][0] = one();
    for k in 1..=n {
        for i in 1..=k {
            s[k][i] = &s[k - 1][i - 1] + qi(i as i64) * &s[k - 1][i];
        }
    }
    s
}

/// Signed Stirling numbers of the first kind: `x(x-1)...(x-i+1) = Σ s1[i][k] x^k`.
fn stirling1(n: usize) -> Vec<Vec<Q>> {
    let mut s = vec![vec![zero(); n + 1]; n + 1];
    s[0][0] = one();
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = &s[i - 1][k - 1] - qi(i as i64 - 1) * &s[i - 1][k];
        }
    }
    s
}

/// Outcome of an annihilation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Annihilation {
    pub vanishes: bool,
    pub first_residual: Option<usize>,
    pub checked_through: usize,
}

/// `Σ_k p_k(t) θ^k`, stored primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaOperator {
    coeffs: Vec<Poly>,
}

impl ThetaOperator {
    /// Primitive form of `Σ coeffs[k] θ^k`. Panics if every coefficient is zero.
    pub fn new(coeffs: Vec<Poly>) -> Self {
        Self::from_raw(coeffs).0
    }

    /// Splits `raw = content · primitive`. The primitive part has no common
    /// polynomial factor and its leading θ-coefficient has lowest nonzero
    /// t-coefficient equal to 1.
    pub fn from_raw(mut coeffs: Vec<Poly>) -> (Self, Poly) {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        assert!(!coeffs.is_empty(), "zero operator");
        let g = coeffs
            .iter()
            .fold(Poly::zero(), |acc, p| Poly::gcd(&acc, p));
        let lead = coeffs.last().unwrap().div_exact(&g).unwrap();
        let c = lead.coeff(lead.valuation().unwrap());
        let content = g.scale(&c);
        let prim = coeffs
            .iter()
            .map(|p| p.div_exact(&content).expect("content divides"))
            .collect();
        (ThetaOperator { coeffs: prim }, content)
    }

    /// Builds `Σ_j t^j P_j(θ)` from the θ-polynomials `P_j`.
    pub fn from_layers(layers: &[Poly]) -> Self {
        Self::from_raw(Self::layers_to_coeffs(layers)).0
    }

    fn layers_to_coeffs(layers: &[Poly]) -> Vec<Poly> {
        let ord = layers.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        (0..=ord)
            .map(|k| Poly::new(layers.iter().map(|p| p.coeff(k)).collect()))
            .collect()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree_t(&self) -> usize {
        self.coeffs.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// θ-polynomial multiplying `t^j`.
    pub fn layer(&self, j: usize) -> Poly {
        Poly::new(self.coeffs.iter().map(|p| p.coeff(j)).collect())
    }

    pub fn layers(&self) -> Vec<Poly> {
        (0..=self.degree_t()).map(|j| self.layer(j)).collect()
    }

    /// Maximal unipotent monodromy at `t = 0`: the t-free part is `θ^order`.
    pub fn is_mum(&self) -> bool {
        self.layer(0) == Poly::monomial(one(), self.order())
    }

    pub fn apply(&self, f: &Series) -> Series {
        let layers = self.layers();
        let n = f.order();
        let c = (0..=n)
            .map(|m| {
                let mut acc = zero();
                for (j, p) in layers.iter().enumerate().take(m + 1) {
                    let a = &f.coeffs()[m - j];
                    if !a.is_zero() && !p.is_zero() {
                        acc += p.eval(&qi((m - j) as i64)) * a;
                    }
                }
                acc
            })
            .collect();
        Series::new(c)
    }

    pub fn annihilates(&self, f: &Series) -> Annihilation {
        let through = f.order().saturating_sub(self.degree_t());
        let first = self.apply(f).first_nonzero_through(through);
        Annihilation {
            vanishes: first.is_none(),
            first_residual: first,
            checked_through: through,
        }
    }

    /// Holomorphic solution `y0` (constant term 1) and the series `h` with
    /// `y0·log t + h` a second solution, both through `t^n`.
    pub fn frobenius(&self, n: usize) -> Result<(Series, Series)> {
        if !self.is_mum() {
            return Err(CyError::UnsupportedSpec(
                "Frobenius basis needs theta^order at t = 0".into(),
            ));
        }
        let layers = self.layers();
        let dlayers: Vec<Poly> = layers.iter().map(|p| p.derivative()).collect();
        let ord = self.order() as i64;
        let mut c = vec![zero(); n + 1];
        let mut h = vec![zero(); n + 1];
        c[0] = one();
        for m in 1..=n {
            let mut sc = zero();
            let mut sh = zero();
            for j in 0..layers.len().min(m + 1) {
                let x = qi((m - j) as i64);
                if j > 0 {
                    sc += layers[j].eval(&x) * &c[m - j];
                    sh += layers[j].eval(&x) * &h[m - j];
                }
            }
            let den = crate::rational::qpow(&qi(m as i64), ord);
            c[m] = -sc / &den;
            for j in 0..layers.len().min(m + 1) {
                let x = qi((m - j) as i64);
                sh += dlayers[j].eval(&x) * &c[m - j];
            }
            h[m] = -sh / &den;
        }
        Ok((Series::new(c), Series::new(h)))
    }

    /// Substitutes `t ↦ t^k` (so `θ ↦ θ/k`); returns the primitive result and
    /// the content `c` with `substituted = c · primitive`.
    pub fn substitute_power(&self, k: u32) -> (ThetaOperator, Poly) {
        let scale = Poly::monomial(Q::new(1.into(), (k as i64).into()), 1);
        let mut layers = vec![Poly::zero(); self.degree_t() * k as usize + 1];
        for (j, p) in self.layers().into_iter().enumerate() {
            layers[j * k as usize] = p.compose(&scale);
        }
        Self::from_raw(Self::layers_to_coeffs(&layers))
    }

    pub fn to_d_form(&self) -> DOperator {
        let n = self.order();
        let s2 = stirling2(n);
        let coeffs: Vec<RatFunc> = (0..=n)
            .map(|i| {
                let mut p = Poly::zero();
                for k in i..=n {
                    p = &p + &self.coeffs[k].scale(&s2[k][i]);
                }
                RatFunc::from(p.shl(i))
            })
            .collect();
        DOperator::new(coeffs)
    }

    pub fn from_d_form(d: &DOperator) -> ThetaOperator {
        let n = d.order();
        let s1 = stirling1(n);
        // t^n · D = Σ_i a_i t^{n-i} (t^i ∂^i)
        let mut rc = vec![RatFunc::zero(); n + 1];
        for i in 0..=n {
            let a = &d.coeffs[i] * &RatFunc::from(Poly::monomial(one(), n - i));
            for k in 0..=i {
                if !s1[i][k].is_zero() {
                    rc[k] = &rc[k] + &a.scale(&s1[i][k]);
                }
            }
        }
        let lcm = rc.iter().fold(Poly::one(), |acc, r| {
            let g = Poly::gcd(&acc, r.den());
            (&acc * r.den()).div_exact(&g).unwrap()
        });
        let polys = rc
            .iter()
            .map(|r| {
                let m = lcm.div_exact(r.den()).unwrap();
                r.num() * &m
            })
            .collect();
        ThetaOperator::new(polys)
    }

    /// `F^{-1} ∘ L ∘ F`.
    pub fn conjugate(&self, f: &TwistFactor) -> ThetaOperator {
        ThetaOperator::from_d_form(&self.to_d_form().conjugate(f))
    }

    /// Rendering in θ with `t^j` groups.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (j, p) in self.layers().iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let body = p.render("θ");
            let tpow = match j {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{j}"),
            };
            if out.is_empty() {
                if tpow.is_empty() {
                    out.push_str(&body);
                } else {
                    out.push_str(&format!("{tpow}*({body})"));
                }
            } else {
                out.push_str(&format!(" + {tpow}*({body})"));
            }
        }
        out
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[derive(Serialize, Deserialize)]
struct ThetaJson {
    theta_coeffs: Vec<Vec<String>>,
}

impl Serialize for ThetaOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ThetaJson {
            theta_coeffs: self
                .coeffs
                .iter()
                .map(|p| p.coeffs().iter().map(fmt_q).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThetaOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ThetaJson::deserialize(d)?;
        let mut coeffs = Vec::new();
        for row in j.theta_coeffs {
            let c: std::result::Result<Vec<Q>, _> = row.iter().map(|s| parse_q(s)).collect();
            coeffs.push(Poly::new(c.map_err(serde::de::Error::custom)?));
        }
        if coeffs.iter().all(|p| p.is_zero()) {
            return Err(serde::de::Error::custom("zero operator"));
        }
        Ok(ThetaOperator::new(coeffs))
    }
}

/// The annihilator of `spec` in θ-form: `θ Π(θ + k b_j − k) − k^{1+#b−#a} t^k Π(θ + k a_i)`.
pub fn hypergeom_operator(spec: &HypergeomSpec) -> Result<ThetaOperator> {
    if !spec.prefactor.is_empty() {
        return Err(CyError::UnsupportedSpec(
            "prefactored series have no generic operator".into(),
        ));
    }
    let k = spec.argument_power;
    if !(1..=2).contains(&k) {
        return Err(CyError::UnsupportedSpec(format!("argument power {k}")));
    }
    let kq = qi(k as i64);
    let lower: Vec<Q> = spec.lower.iter().map(|b| &kq * b - &kq).collect();
    let upper: Vec<Q> = spec.upper.iter().map(|a| &kq * a).collect();
    let e = 1 + spec.lower.len() as i64 - spec.upper.len() as i64;
    let c = crate::rational::qpow(&kq, e);
    let l0 = &Poly::x() * &shifted_product(&lower);
    let lk = shifted_product(&upper).scale(&-c);
    let mut layers = vec![Poly::zero(); k as usize + 1];
    layers[0] = l0;
    layers[k as usize] = lk;
    Ok(ThetaOperator::from_layers(&layers))
}

/// `Π p_k^{r_k}` with pairwise coprime squarefree `p_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistFactor {
    pub exponents: Vec<(Poly, Q)>,
}

impl TwistFactor {
    pub fn new(exponents: Vec<(Poly, Q)>) -> Self {
        TwistFactor { exponents }
    }

    pub fn one() -> Self {
        TwistFactor::new(Vec::new())
    }

    pub fn inverse(&self) -> Self {
        self.pow(&qi(-1))
    }

    pub fn pow(&self, r: &Q) -> Self {
        TwistFactor::new(self.exponents.iter().map(|(p, e)| (p.clone(), e * r)).collect())
    }

    /// `F'/F`.
    pub fn log_derivative(&self) -> RatFunc {
        self.exponents.iter().fold(RatFunc::zero(), |acc, (p, r)| {
            &acc + &RatFunc::new(p.derivative(), p.clone()).scale(r)
        })
    }
}

/// `∂^n + Σ a_i ∂^i` with rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DOperator {
    coeffs: Vec<RatFunc>,
}

/// `(∂ + h) ∘ A` on raw coefficient lists.
fn left_mul_d_plus(h: &RatFunc, a: &[RatFunc]) -> Vec<RatFunc> {
    let mut out = vec![RatFunc::zero(); a.len() + 1];
    for (j, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out[j] = &out[j] + &(&c.derivative() + &(h * c));
        out[j + 1] = &out[j + 1] + c;
    }
    out
}

impl DOperator {
    /// Normalizes by the leading coefficient. Panics on the zero operator.
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|r| r.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.last().expect("zero operator").recip();
        DOperator {
            coeffs: coeffs.iter().map(|c| c * &lead).collect(),
        }
    }

    pub fn from_polys(c: &[Poly]) -> Self {
        DOperator::new(c.iter().cloned().map(RatFunc::from).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &RatFunc {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// `(-1)^n Σ (-1)^i ∂^i ∘ a_i`, expanded by Leibniz.
    pub fn dual(&self) -> DOperator {
        let n = self.order();
        let out = (0..=n)
            .map(|j| {
                let mut acc = RatFunc::zero();
                for i in j..=n {
                    let term = self.coeffs[i].nth_derivative(i - j).scale(&binomial(i, j));
                    acc = if (n + i) % 2 == 0 {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
                acc
            })
            .collect();
        DOperator::new(out)
    }

    /// `F^{-1} ∘ D ∘ F` where `h = F'/F`.
    pub fn conjugate_log(&self, h: &RatFunc) -> DOperator {
        let mut acc = vec![RatFunc::zero(); self.order() + 1];
        let mut pw = vec![RatFunc::one()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pw = left_mul_d_plus(h, &pw);
            }
            for (j, c) in pw.iter().enumerate() {
                acc[j] = &acc[j] + &(a * c);
            }
        }
        DOperator::new(acc)
    }

    pub fn conjugate(&self, f: &TwistFactor) -> DOperator {
        self.conjugate_log(&f.log_derivative())
    }

    /// Left side of the order-four self-duality condition.
    pub fn self_dual_residual4(&self) -> Option<RatFunc> {
        if self.order() != 4 {
            return None;
        }
        let a = &self.coeffs;
        let (a1, a2, a3) = (&a[1], &a[2], &a[3]);
        let d = |x: &RatFunc| x.derivative();
        let terms = [
            a1.scale(&qi(8)),
            d(a2).scale(&qi(-8)),
            a3.nth_derivative(2).scale(&qi(4)),
            (a2 * a3).scale(&qi(-4)),
            (a3 * &d(a3)).scale(&qi(6)),
            a3.pow(3),
        ];
        Some(terms.iter().fold(RatFunc::zero(), |acc, t| &acc + t))
    }

    pub fn is_self_dual_order4(&self) -> bool {
        self.self_dual_residual4().is_some_and(|r| r.is_zero())
    }

    /// Differences `b2 − rhs` and `b0 − rhs` of the two order-five conditions.
    pub fn self_dual_residuals5(&self) -> Option<(RatFunc, RatFunc)> {
        if self.order() != 5 {
            return None;
        }
        let b = &self.coeffs;
        let (b0, b1, b2, b3, b4) = (&b[0], &b[1], &b[2], &b[3], &b[4]);
        let sum = |ts: &[RatFunc]| ts.iter().fold(RatFunc::zero(), |acc, t| &acc + t);
        let b4d = b4.derivative();
        let b4dd = b4.nth_derivative(2);
        let b3d = b3.derivative();
        let rhs2 = sum(&[
            b3d.scale(&q(3, 2)),
            (b4 * b3).scale(&q(3, 5)),
            -&b4dd,
            (b4 * &b4d).scale(&q(-6, 5)),
            b4.pow(3).scale(&q(-4, 25)),
        ]);
        let b4sq = b4.pow(2);
        let rhs0 = sum(&[
            b4.nth_derivative(4).scale(&q(1, 5)),
            b3.nth_derivative(3).scale(&q(-1, 4)),
            (b4 * &b4.nth_derivative(3)).scale(&q(2, 5)),
            (b4 * &b3.nth_derivative(2)).scale(&q(-3, 10)),
            &sum(&[b4sq.scale(&q(8, 25)), b4d.scale(&q(4, 5)), b3.scale(&q(-1, 10))]) * &b4dd,
            b1.derivative().scale(&q(1, 2)),
            &sum(&[b4sq.scale(&q(-3, 25)), b4d.scale(&q(-3, 10))]) * &b3d,
            (b4 * &b4d.pow(2)).scale(&q(12, 25)),
            &sum(&[(b3 * b4).scale(&q(-3, 25)), b4.pow(3).scale(&q(16, 125))]) * &b4d,
            (b3 * &b4.pow(3)).scale(&q(-2, 125)),
            (b1 * b4).scale(&q(1, 5)),
            b4.pow(5).scale(&q(16, 3125)),
        ]);
        Some((b2 - &rhs2, b0 - &rhs0))
    }

    pub fn is_self_dual_order5(&self) -> bool {
        self.self_dual_residuals5()
            .is_some_and(|(x, y)| x.is_zero() && y.is_zero())
    }

    /// Minimal operator for `y1 y2' − y2 y1'` over solution pairs.
    pub fn exterior_square(&self) -> Result<DOperator> {
        self.bilinear_square(true, 6)
    }

    /// Minimal operator for `y²` over solutions.
    pub fn symmetric_square(&self) -> Result<DOperator> {
        let n = self.order();
        self.bilinear_square(false, n * (n + 1) / 2)
    }

    fn bilinear_square(&self, anti: bool, bound: usize) -> Result<DOperator> {
        let n = self.order();
        let mut basis = Vec::new();
        for i in 0..n {
            for j in i..n {
                if !(anti && i == j) {
                    basis.push((i, j));
                }
            }
        }
        let index = |i: usize, j: usize| basis.iter().position(|&b| b == (i, j));
        // vector of y^(i) ⊗ y^(j) (i<=j) reduced into the basis, with sign
        let reduce = |i: usize, j: usize, coef: &RatFunc, v: &mut Vec<RatFunc>| {
            let mut stack = vec![(i, j, coef.clone())];
            while let Some((i, j, c)) = stack.pop() {
                if c.is_zero() {
                    continue;
                }
                let (i, j, c) = if i > j {
                    (j, i, if anti { -&c } else { c })
                } else {
                    (i, j, c)
                };
                if anti && i == j {
                    continue;
                }
                if j == n {
                    // y^(n) = −Σ a_k y^(k); i < n here unless both are n
                    for k in 0..n {
                        stack.push((i, k, -&(&c * &self.coeffs[k])));
                    }
                    continue;
                }
                let p = index(i, j).expect("basis index");
                v[p] = &v[p] + &c;
            }
        };
        let start = {
            let mut v = vec![RatFunc::zero(); basis.len()];
            let s = if anti { (0, 1) } else { (0, 0) };
            reduce(s.0, s.1, &RatFunc::one(), &mut v);
            v
        };
        let mut vecs = vec![start];
        for m in 1..=bound {
            let prev = &vecs[m - 1];
            let mut v = vec![RatFunc::zero(); basis.len()];
            for (p, &(i, j)) in basis.iter().enumerate() {
                let c = &prev[p];
                if c.is_zero() {
                    continue;
                }
                v[p] = &v[p] + &c.derivative();
                reduce(i + 1, j, c, &mut v);
                reduce(i, j + 1, c, &mut v);
            }
            vecs.push(v);
            if let Some(c) = find_dependence(&vecs) {
                return Ok(DOperator::new(c));
            }
        }
        Err(CyError::DegenerateElimination(bound))
    }

    /// The unique order-four operator whose exterior square is `self`.
    pub fn yifan_yang_pullback(&self) -> Result<DOperator> {
        if !self.is_self_dual_order5() {
            return Err(CyError::NotSelfDual);
        }
        let b = &self.coeffs;
        let (b1, b3, b4) = (&b[1], &b[3], &b[4]);
        let sum = |ts: &[RatFunc]| ts.iter().fold(RatFunc::zero(), |acc, t| &acc + t);
        let b4d = b4.derivative();
        let b4sq = b4.pow(2);
        let a3 = b4.scale(&q(2, 5));
        let a2 = sum(&[b4sq.scale(&q(-7, 50)), b4d.scale(&q(-2, 5)), b3.scale(&q(1, 2))]);
        let a1 = sum(&[
            b4.pow(3).scale(&q(-9, 250)),
            (b4 * &b4d).scale(&q(-12, 25)),
            (b4 * b3).scale(&q(1, 10)),
            b4.nth_derivative(2).scale(&q(-3, 5)),
            b3.derivative().scale(&q(1, 2)),
        ]);
        let a0 = sum(&[
            b4.nth_derivative(3).scale(&q(-2, 5)),
            b3.nth_derivative(2).scale(&q(3, 8)),
            (b4 * &b4.nth_derivative(2)).scale(&q(-23, 50)),
            (b4 * &b3.derivative()).scale(&q(1, 5)),
            b4d.pow(2).scale(&q(-27, 100)),
            &sum(&[b4sq.scale(&q(-18, 125)), b3.scale(&q(-1, 20))]) * &b4d,
            b4.pow(4).scale(&q(-19, 10000)),
            (&b4sq * b3).scale(&q(-3, 200)),
            b3.pow(2).scale(&q(1, 16)),
            b1.scale(&q(-1, 4)),
        ]);
        Ok(DOperator::new(vec![a0, a1, a2, a3, RatFunc::one()]))
    }
}

/// First dependence `Σ c_k v_k = 0` with `c_last = 1`, if the last vector
/// depends on the earlier ones. Fraction-free elimination over polynomials,
/// back substitution over rational functions.
fn find_dependence(vecs: &[Vec<RatFunc>]) -> Option<Vec<RatFunc>> {
    let m = vecs.len() - 1;
    let rows = vecs[0].len();
    let dens: Vec<Poly> = vecs
        .iter()
        .map(|v| {
            v.iter().fold(Poly::one(), |acc, r| {
                let g = Poly::gcd(&acc, r.den());
                (&acc * r.den()).div_exact(&g).unwrap()
            })
        })
        .collect();
    let mut a: Vec<Vec<Poly>> = (0..rows)
        .map(|r| {
            (0..=m)
                .map(|k| {
                    let x = &vecs[k][r];
                    x.num() * &dens[k].div_exact(x.den()).unwrap()
                })
                .collect()
        })
        .collect();
    let mut prev = Poly::one();
    for k in 0..m {
        let piv = (k..rows).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, piv);
        for i in k + 1..rows {
            for j in k + 1..=m {
                let x = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = x.div_exact(&prev).expect("Bareiss division");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    if (m..rows).any(|r| !a[r][m].is_zero()) {
        return None;
    }
    let mut e = vec![RatFunc::zero(); m + 1];
    e[m] = RatFunc::one();
    for k in (0..m).rev() {
        let mut s = RatFunc::from(a[k][m].clone());
        for j in k + 1..m {
            s = &s + &(&RatFunc::from(a[k][j].clone()) * &e[j]);
        }
        e[k] = -&(&s / &RatFunc::from(a[k][k].clone()));
    }
    let dm = RatFunc::from(dens[m].clone());
    Some(
        (0..=m)
            .map(|k| &(&e[k] * &RatFunc::from(dens[k].clone())) / &dm)
            .collect(),
    )
}

impl fmt::Display for DOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let d = match i {
                0 => String::new(),
                1 => "∂".into(),
                _ => format!("∂^{i}"),
            };
            if c == &RatFunc::one() && i > 0 {
                write!(f, "{d}")?;
            } else if d.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{d}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::hypergeom_series;

    fn th(shifts: &[Q]) -> Poly {
        shifted_product(shifts)
    }

    fn l5(p: &Q, q_: &Q) -> ThetaOperator {
        let o = one();
        ThetaOperator::from_layers(&[
            Poly::monomial(one(), 5),
            -&th(&[q(1, 2), p.clone(), q_.clone(), &o - p, &o - q_]),
        ])
    }

    fn yy(p: &Q, q_: &Q) -> ThetaOperator {
        let (p, qq) = (p.clone(), q_.clone());
        let s = &(&(&p * &p) + &(&qq * &qq)) - &(&p + &qq);
        let c0 = qi(2) + &p + &qq - &p * &qq - &p * &p - &qq * &qq
            + &p * &p * &qq
            + &p * &qq * &qq
            + &p * &p * &qq * &qq;
        let inner = Poly::new(vec![
            c0,
            (&s - qi(5)) * qi(-2),
            (&s - qi(9)) * qi(-2),
            qi(16),
            qi(8),
        ]);
        let lin = |a: Q, b: Q| Poly::new(vec![b, a]);
        let l2 = &(&lin(qi(2), qi(2) - &qq + &p) * &lin(qi(2), qi(1) + &qq + &p))
            * &(&lin(qi(-2), qi(-2) - &qq + &p) * &lin(qi(-2), qi(-3) + &p + &qq));
        ThetaOperator::from_layers(&[
            Poly::monomial(one(), 4),
            inner.scale(&q(-1, 4)),
            l2.scale(&q(1, 16)),
        ])
    }

    #[test]
    fn theta_d_round_trip() {
        let l = hypergeom_operator(&HypergeomSpec::balanced(vec![q(1, 2); 4])).unwrap();
        let d = l.to_d_form();
        assert_eq!(ThetaOperator::from_d_form(&d), l);
        let t2 = ThetaOperator::new(vec![Poly::zero(), Poly::zero(), Poly::one()]).to_d_form();
        assert_eq!(
            t2.coeff(1),
            &RatFunc::new(Poly::one(), Poly::x())
        );
    }

    #[test]
    fn annihilation_examples() {
        let spec = HypergeomSpec::balanced(vec![q(1, 2), q(1, 2)]);
        let l = hypergeom_operator(&spec).unwrap();
        let f = hypergeom_series(&spec, 20).unwrap();
        assert!(l.annihilates(&f).vanishes);
        let g = hypergeom_series(&HypergeomSpec::balanced(vec![q(1, 2), q(1, 3)]), 20).unwrap();
        assert_eq!(l.annihilates(&g).first_residual, Some(1));
    }

    #[test]
    fn square_substitution_scales_by_32() {
        let p = q(1, 5);
        let qq = q(2, 5);
        let (hat, c) = l5(&p, &qq).substitute_power(2);
        assert_eq!(c, Poly::constant(q(1, 32)));
        let o = one();
        let two = qi(2);
        let expect = ThetaOperator::from_layers(&[
            Poly::monomial(one(), 5),
            Poly::zero(),
            -&th(&[
                one(),
                &two * &p,
                &two * &qq,
                &two - &two * &p,
                &two - &two * &qq,
            ]),
        ]);
        let _ = o;
        assert_eq!(hat, expect);
    }

    #[test]
    fn symmetric_square_gives_clausen_operator() {
        let spec = HypergeomSpec::balanced(vec![q(1, 4), q(1, 4)]);
        let d = hypergeom_operator(&spec).unwrap().to_d_form();
        let s = ThetaOperator::from_d_form(&d.symmetric_square().unwrap());
        let l3 = hypergeom_operator(&HypergeomSpec::balanced(vec![q(1, 2); 3])).unwrap();
        assert_eq!(s, l3);
    }

    #[test]
    fn self_duality_and_pullback() {
        let (p, qq) = (q(1, 2), q(1, 2));
        let l4 = hypergeom_operator(&HypergeomSpec::balanced(vec![p.clone(); 4])).unwrap();
        assert!(l4.to_d_form().is_self_dual_order4());
        let probe = ThetaOperator::from_layers(&[Poly::monomial(one(), 4), -&Poly::x()]);
        assert!(!probe.to_d_form().is_self_dual_order4());
        let d5 = l5(&p, &qq).to_d_form();
        assert!(d5.is_self_dual_order5());
        let f = TwistFactor::new(vec![(Poly::x(), one()), (Poly::from_ints(&[-1, 1]), q(3, 2))]);
        let conj = d5.conjugate(&f);
        let pb = conj.yifan_yang_pullback().unwrap();
        // every θ-coefficient but the t-constant agrees with the closed form
        let pbt = ThetaOperator::from_d_form(&pb);
        let closed = yy(&p, &qq);
        assert_eq!(pbt.layer(0), closed.layer(0));
        assert_eq!(pbt.layer(2), closed.layer(2));
        assert_eq!(pbt.layer(1).coeffs()[1..], closed.layer(1).coeffs()[1..]);
        let back = pb.exterior_square().unwrap();
        assert_eq!(
            ThetaOperator::from_d_form(&back),
            ThetaOperator::from_d_form(&conj)
        );
    }

    #[test]
    fn pullback_wronskian_matches_fourfold_period() {
        // y0 y1' - y1 y0' of the pullback equals the conjugated order-five period
        for (p, qq) in [(q(1, 2), q(1, 2)), (q(1, 5), q(2, 5))] {
            let f = TwistFactor::new(vec![(Poly::x(), one()), (Poly::from_ints(&[-1, 1]), q(3, 2))]);
            let conj = l5(&p, &qq).to_d_form().conjugate(&f);
            let pb = ThetaOperator::from_d_form(&conj.yifan_yang_pullback().unwrap());
            let (y0, h) = pb.frobenius(25).unwrap();
            let w = &(&(&y0 * &y0) + &(&y0 * &h.theta())) - &(&h * &y0.theta());
            let spec = HypergeomSpec::balanced(vec![p.clone(), qq.clone(), q(1, 2), one() - &qq, one() - &p])
                .with_prefactor(crate::hypergeom::PrefactorBase::OneMinusT, q(-3, 2));
            assert!(w.agrees(&hypergeom_series(&spec, 25).unwrap()));
        }
    }

    #[test]
    fn dual_is_involution() {
        let d = DOperator::from_polys(&[
            Poly::from_ints(&[1, 2]),
            Poly::from_ints(&[0, 0, 3]),
            Poly::from_ints(&[5]),
            Poly::one(),
        ]);
        assert_eq!(d.dual().dual(), d);
    }

    #[test]
    fn conjugate_by_sqrt_t() {
        let th1 = ThetaOperator::new(vec![Poly::zero(), Poly::one()]);
        let f = TwistFactor::new(vec![(Poly::x(), q(1, 2))]);
        let c = th1.conjugate(&f);
        assert_eq!(c, ThetaOperator::new(vec![Poly::constant(q(1, 2)), Poly::one()]));
        assert_eq!(c.conjugate(&f.inverse()), th1);
    }
}
