//! Period formulas: twist multipliers and parameter reduction, classical
//! hypergeometric identities, Appell F2 systems, the first-order Fuchsian
//! system of a rational elliptic surface, and SL2(Z) monodromy relations.

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::ops::{Mul, Neg};

use crate::error::{CyError, Result};
use crate::hypergeom::{biseries_f2, factorial, hypergeom_series, pochhammer, HypergeomSpec};
use crate::linalg::nullspace;
use crate::multipoly::Var;
use crate::operator::ThetaOperator;
use crate::poly::Poly;
use crate::rational::{binomial, fmt_q, one, q, qi, zero, Q};
use crate::series::{algebraic_power, BiSeries, Series};
use crate::weierstrass::{discriminant, surface_catalog, surface_info, FunctionalInvariant};

/// Structured outcome of one verification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: Value,
    pub passed: bool,
    pub first_failure_index: Option<usize>,
    pub order_checked: usize,
}

impl CheckRecord {
    pub fn new(name: &str, inputs: Value, first_failure: Option<usize>, order: usize) -> Self {
        CheckRecord {
            name: name.to_string(),
            inputs,
            passed: first_failure.is_none(),
            first_failure_index: first_failure,
            order_checked: order,
        }
    }

    /// Coefficientwise equality through the common order.
    pub fn series_equal(name: &str, inputs: Value, lhs: &Series, rhs: &Series) -> Self {
        let n = lhs.order().min(rhs.order());
        let miss = lhs.truncate(n).first_mismatch(&rhs.truncate(n));
        CheckRecord::new(name, inputs, miss, n)
    }

    pub fn vanishing(name: &str, inputs: Value, residual: &Series) -> Self {
        let n = residual.order();
        CheckRecord::new(name, inputs, residual.first_nonzero_through(n), n)
    }
}

fn qs(xs: &[Q]) -> Value {
    Value::from(xs.iter().map(fmt_q).collect::<Vec<_>>())
}

// ---------------------------------------------------------------------------
// twist multipliers and parameter reduction

/// Hadamard multiplier of a twist with invariant `(i, j, α)`.
pub fn twist_period_params(inv: &FunctionalInvariant) -> HypergeomSpec {
    let (i, j) = (inv.i as i64, inv.j as i64);
    let upper = (0..i + j).map(|p| (&inv.alpha + qi(p)) / qi(i + j)).collect();
    let lower = (1..i)
        .map(|p| q(p, i))
        .chain((0..j).map(|p| (&inv.alpha + qi(p)) / qi(j)))
        .collect();
    HypergeomSpec::new(upper, lower)
}

/// Removes parameters common to `upper` and `lower` as multisets.
pub fn cancel_parameters(spec: &HypergeomSpec) -> HypergeomSpec {
    let mut upper = spec.upper.clone();
    let mut lower = Vec::new();
    for b in &spec.lower {
        if let Some(k) = upper.iter().position(|a| a == b) {
            upper.remove(k);
        } else {
            lower.push(b.clone());
        }
    }
    upper.sort();
    lower.sort();
    HypergeomSpec {
        upper,
        lower,
        argument_power: spec.argument_power,
        prefactor: spec.prefactor.clone(),
    }
}

/// Hadamard product of two specs with a common argument power, reduced.
/// One of the two implicit factorials becomes an explicit lower parameter 1.
pub fn reduce_parameters(multiplier: &HypergeomSpec, base: &HypergeomSpec) -> Result<HypergeomSpec> {
    if multiplier.argument_power != base.argument_power {
        return Err(CyError::UnsupportedSpec("argument powers differ".into()));
    }
    if !multiplier.prefactor.is_empty() || !base.prefactor.is_empty() {
        return Err(CyError::UnsupportedSpec("prefactored factor in a Hadamard product".into()));
    }
    let upper = multiplier.upper.iter().chain(&base.upper).cloned().collect();
    let lower = multiplier
        .lower
        .iter()
        .chain(&base.lower)
        .cloned()
        .chain(std::iter::once(one()))
        .collect();
    let merged = HypergeomSpec::new(upper, lower).with_power(base.argument_power);
    Ok(cancel_parameters(&merged))
}

/// The `t²`-argument period of the rank-18 mixed twist with odd `m`,
/// before cancellation.
pub fn mixed18_twist_period(mu: &Q, m: u32) -> Result<HypergeomSpec> {
    if m % 2 == 0 {
        return Err(CyError::UnsupportedSpec(format!("m = {m} must be odd")));
    }
    let two = qi(2);
    let mut upper = vec![
        mu / &two,
        (one() - mu) / &two,
        (one() + mu) / &two,
        one() - mu / &two,
    ];
    let m = m as i64;
    upper.extend((1..=m).map(|j| q(2 * j - 1, 2 * m)));
    let mut lower = vec![q(1, 2)];
    lower.extend((1..=m).map(|k| q(k, m)));
    lower.extend([one(), one()]);
    Ok(HypergeomSpec::new(upper, lower).with_power(2))
}

/// A Hadamard period formula attached to a twist step.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistPeriodFormula {
    pub invariant: FunctionalInvariant,
    pub base_period: HypergeomSpec,
    pub step: u32,
}

impl TwistPeriodFormula {
    /// Checks the invariant bounds: Step-1 bounds at step 1, otherwise
    /// `k ≤ 1/μ` and `l ≤ β/μ` for the given `μ`.
    pub fn new(invariant: FunctionalInvariant, base_period: HypergeomSpec, step: u32, mu: Option<&Q>) -> Result<Self> {
        let ok = match (step, mu) {
            (1, _) => invariant.valid_at_step1(),
            (2..=4, Some(mu)) => invariant.valid_for(mu),
            _ => false,
        };
        if !ok {
            return Err(CyError::UnsupportedSpec(format!(
                "invariant ({},{},{}) at step {step}",
                invariant.i,
                invariant.j,
                fmt_q(&invariant.alpha)
            )));
        }
        Ok(TwistPeriodFormula {
            invariant,
            base_period,
            step,
        })
    }

    pub fn multiplier(&self) -> HypergeomSpec {
        twist_period_params(&self.invariant).with_power(self.base_period.argument_power)
    }

    pub fn reduced(&self) -> Result<HypergeomSpec> {
        reduce_parameters(&self.multiplier(), &self.base_period)
    }

    /// Hadamard product of the two factor series.
    pub fn series(&self, n: usize) -> Result<Series> {
        Ok(hypergeom_series(&self.multiplier(), n)?.hadamard(&hypergeom_series(&self.base_period, n)?))
    }
}

// ---------------------------------------------------------------------------
// classical identities

fn f21(a: Q, b: Q, n: usize) -> Result<Series> {
    hypergeom_series(&HypergeomSpec::new(vec![a, b], vec![one()]), n)
}

/// `1F0(1/2 | t^k)`
fn sqrt_kernel(k: u32, n: usize) -> Result<Series> {
    hypergeom_series(&HypergeomSpec::new(vec![q(1, 2)], vec![]).with_power(k), n)
}

/// Both sides of Clausen's identity.
pub fn clausen_sides(mu: &Q, n: usize) -> Result<(Series, Series)> {
    let lhs = hypergeom_series(&HypergeomSpec::balanced(vec![mu.clone(), q(1, 2), one() - mu]), n)?;
    let half = f21(mu / qi(2), (one() - mu) / qi(2), n)?;
    Ok((lhs, &half * &half))
}

pub fn verify_clausen(mu: &Q, n: usize) -> Result<CheckRecord> {
    let (l, r) = clausen_sides(mu, n)?;
    Ok(CheckRecord::series_equal("clausen", json!({"mu": fmt_q(mu)}), &l, &r))
}

/// `2F1(μ/2,(1−μ)/2;1) ∘ inner` against `2F1(μ,1−μ;1)`.
pub fn kummer_sides(mu: &Q, inner: &Poly, n: usize) -> Result<(Series, Series)> {
    let outer = f21(mu / qi(2), (one() - mu) / qi(2), n)?;
    let lhs = outer.compose(&Series::from_poly(inner, n))?;
    Ok((lhs, f21(mu.clone(), one() - mu, n)?))
}

pub fn verify_kummer_quadratic(mu: &Q, n: usize) -> Result<CheckRecord> {
    let (l, r) = kummer_sides(mu, &Poly::from_ints(&[0, 4, -4]), n)?;
    Ok(CheckRecord::series_equal("kummer_quadratic", json!({"mu": fmt_q(mu)}), &l, &r))
}

/// `1F0(1/2|t²) ⋆ 2F1(μ,1−μ;1|t) = 4F3(μ/2,(1−μ)/2,(1+μ)/2,1−μ/2;1,1,1/2|t²)`.
pub fn verify_uneasy_twist(mu: &Q, n: usize) -> Result<CheckRecord> {
    let lhs = sqrt_kernel(2, n)?.hadamard(&f21(mu.clone(), one() - mu, n)?);
    let two = qi(2);
    let rhs = hypergeom_series(
        &HypergeomSpec::new(
            vec![mu / &two, (one() - mu) / &two, (one() + mu) / &two, one() - mu / &two],
            vec![one(), one(), q(1, 2)],
        )
        .with_power(2),
        n,
    )?;
    Ok(CheckRecord::series_equal("uneasy_twist", json!({"mu": fmt_q(mu)}), &lhs, &rhs))
}

/// The three Euler-transform Hadamard forms.
pub fn verify_euler_identities(n: usize) -> Result<Vec<CheckRecord>> {
    let h = q(1, 2);
    let quarter = || vec![q(1, 4), q(1, 4), q(3, 4), q(3, 4)];
    let cases = [
        (
            "euler_2f1",
            sqrt_kernel(1, n)?,
            HypergeomSpec::balanced(vec![h.clone(), h.clone()]),
            HypergeomSpec::balanced(vec![h.clone(), h.clone(), h.clone()]),
        ),
        (
            "euler_3f2",
            sqrt_kernel(1, n)?,
            HypergeomSpec::balanced(vec![h.clone(), h.clone(), h.clone()]),
            HypergeomSpec::balanced(vec![h.clone(); 4]),
        ),
        (
            "euler_4f3_t2",
            sqrt_kernel(2, n)?,
            HypergeomSpec::new(quarter(), vec![one(), one(), h.clone()]).with_power(2),
            HypergeomSpec::new(quarter(), vec![one(), one(), one()]).with_power(2),
        ),
    ];
    cases
        .into_iter()
        .map(|(name, kernel, factor, result)| {
            let lhs = kernel.hadamard(&hypergeom_series(&factor, n)?);
            let rhs = hypergeom_series(&result, n)?;
            Ok(CheckRecord::series_equal(
                name,
                json!({"factor": factor.to_string(), "result": result.to_string()}),
                &lhs,
                &rhs,
            ))
        })
        .collect()
}

/// Power series of `num/den` with `den(0) ≠ 0`.
pub fn rational_series(num: &Poly, den: &Poly, n: usize) -> Result<Series> {
    Ok(&Series::from_poly(num, n) * &Series::from_poly(den, n).inverse()?)
}

/// One row of the rational-transformation table of the extra case:
/// `(1−t)^e · 3F2(μ,1−μ,1/2;1,1 | φ) = [(1−t)^{−(1−p̃−q̃)/2} 2F1(p̃,q̃;1|t)]²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtraCaseRow {
    pub row: u32,
    pub mu: Q,
    pub prefactor_exponent: Q,
    pub map_num: Poly,
    pub map_den: Poly,
    pub p: Q,
    pub q: Q,
}

pub fn extra_case_row(row: u32, mu: &Q) -> Result<ExtraCaseRow> {
    let two = qi(2);
    let p = |xs: &[i64]| Poly::from_ints(xs);
    let (e, num, den, pt, qt) = match row {
        1 => (q(-1, 2), p(&[0, 1]), p(&[1]), mu / &two, (one() - mu) / &two),
        2 => (q(-1, 2), p(&[0, 1]), p(&[-1, 1]), mu / &two, (one() + mu) / &two),
        3 => (zero(), p(&[0, 4, -4]), p(&[1]), mu.clone(), one() - mu),
        4 => (q(-1, 2), p(&[0, 0, 1]), p(&[-4, 4]), mu.clone(), q(1, 2)),
        5 => (qi(-1), p(&[0, -4]), p(&[1, -2, 1]), mu.clone(), mu.clone()),
        _ => return Err(CyError::UnsupportedSpec(format!("extra-case row {row}"))),
    };
    Ok(ExtraCaseRow {
        row,
        mu: mu.clone(),
        prefactor_exponent: e,
        map_num: num,
        map_den: den,
        p: pt,
        q: qt,
    })
}

/// `L̃3 = θ³ − t(2θ+1)(θ²+θ+2p̃q̃−p̃−q̃+1) + t²(θ+1)(θ+1+p̃−q̃)(θ+1−p̃+q̃)`,
/// the symmetric square of the operator of `(1−t)^{−(1−p̃−q̃)/2} 2F1(p̃,q̃;1|t)`.
pub fn extra_case_operator(p: &Q, q: &Q) -> ThetaOperator {
    let c = qi(2) * p * q - p - q + one();
    let l0 = Poly::monomial(one(), 3);
    let l1 = -&(&Poly::new(vec![one(), qi(2)]) * &Poly::new(vec![c, one(), one()]));
    let lin = |a: Q| Poly::new(vec![a, one()]);
    let l2 = &(&lin(one()) * &lin(one() + p - q)) * &lin(one() - p + q);
    ThetaOperator::from_layers(&[l0, l1, l2])
}

/// Series of both sides.
pub fn extra_case_sides(r: &ExtraCaseRow, n: usize) -> Result<(Series, Series)> {
    let one_minus_t = Poly::from_ints(&[1, -1]);
    let phi = rational_series(&r.map_num, &r.map_den, n)?;
    let outer = hypergeom_series(
        &HypergeomSpec::balanced(vec![r.mu.clone(), one() - &r.mu, q(1, 2)]),
        n,
    )?;
    let lhs = &algebraic_power(&one_minus_t, &r.prefactor_exponent, n)? * &outer.compose(&phi)?;
    let e = -(one() - &r.p - &r.q) / qi(2);
    let factor = &algebraic_power(&one_minus_t, &e, n)? * &f21(r.p.clone(), r.q.clone(), n)?;
    Ok((lhs, &factor * &factor))
}

/// Equality of both sides and annihilation by `L̃3`.
pub fn check_extra_case(r: &ExtraCaseRow, n: usize) -> Result<CheckRecord> {
    let (lhs, rhs) = extra_case_sides(r, n)?;
    let inputs = json!({"row": r.row, "mu": fmt_q(&r.mu), "p": fmt_q(&r.p), "q": fmt_q(&r.q)});
    let eq = CheckRecord::series_equal("extra_case_identity", inputs.clone(), &lhs, &rhs);
    if !eq.passed {
        return Ok(eq);
    }
    let res = extra_case_operator(&r.p, &r.q).apply(&lhs);
    Ok(CheckRecord::vanishing("extra_case_identity", inputs, &res))
}

pub fn verify_extra_case_identity(row: u32, mu: &Q, n: usize) -> Result<CheckRecord> {
    check_extra_case(&extra_case_row(row, mu)?, n)
}

// ---------------------------------------------------------------------------
// mirror periods

/// `nF_{n−1}(1/(n+1), …, n/(n+1); 1, …, 1)`, the holomorphic period of the
/// deformed Fermat pencil of degree `n+1`.
pub fn mirror_period_spec(n: u32) -> Result<HypergeomSpec> {
    if !(1..=4).contains(&n) {
        return Err(CyError::UnsupportedSpec(format!("mirror pencil n = {n}")));
    }
    let d = n as i64 + 1;
    Ok(HypergeomSpec::balanced((1..d).map(|k| q(k, d)).collect()))
}

/// The residue formula as printed, with lower parameters `k/n`.
pub fn printed_mirror_spec(n: u32) -> Result<HypergeomSpec> {
    let mut spec = mirror_period_spec(n)?;
    let m = n as i64;
    spec.lower = (1..m).map(|k| q(k, m)).collect();
    Ok(spec)
}

pub fn mirror_period(n: u32, order: usize) -> Result<Series> {
    hypergeom_series(&mirror_period_spec(n)?, order)
}

/// Quartic, quintic and cubic Hadamard factorizations of the mirror periods.
pub fn verify_mirror_factorizations(n: usize) -> Result<Vec<CheckRecord>> {
    let h = q(1, 2);
    let third = || vec![q(1, 3), q(2, 3)];
    let cubic = f21(q(1, 3), q(2, 3), n)?;
    let quartic_core = hypergeom_series(&HypergeomSpec::new(vec![q(1, 4), h.clone(), q(3, 4)], third()), n)?;
    let quintic_core = hypergeom_series(
        &HypergeomSpec::new((1..5).map(|k| q(k, 5)).collect(), vec![q(1, 3), q(2, 3), h.clone()]),
        n,
    )?;
    let cubic_core = hypergeom_series(&HypergeomSpec::new(third(), vec![h.clone()]), n)?;
    let kernel = sqrt_kernel(1, n)?;
    Ok(vec![
        CheckRecord::series_equal(
            "mirror_quartic",
            json!({"n": 3}),
            &mirror_period(3, n)?,
            &quartic_core.hadamard(&cubic),
        ),
        CheckRecord::series_equal(
            "mirror_quintic",
            json!({"n": 4}),
            &mirror_period(4, n)?,
            &quintic_core.hadamard(&kernel).hadamard(&cubic),
        ),
        CheckRecord::series_equal("mirror_cubic", json!({"n": 2}), &mirror_period(2, n)?, &cubic_core.hadamard(&kernel)),
    ])
}

// ---------------------------------------------------------------------------
// Appell F2

/// Parameters of `F2(α; β, β'; γ, γ' | x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppellParams {
    pub alpha: Q,
    pub beta: Q,
    pub beta2: Q,
    pub gamma: Q,
    pub gamma2: Q,
}

impl AppellParams {
    pub fn new(alpha: Q, beta: Q, beta2: Q, gamma: Q, gamma2: Q) -> Self {
        AppellParams {
            alpha,
            beta,
            beta2,
            gamma,
            gamma2,
        }
    }

    /// `(μ; 1/2, μ; 1, 2μ)`
    pub fn clausen_type(mu: &Q) -> Self {
        AppellParams::new(mu.clone(), q(1, 2), mu.clone(), one(), qi(2) * mu)
    }

    fn inputs(&self) -> Value {
        qs(&[
            self.alpha.clone(),
            self.beta.clone(),
            self.beta2.clone(),
            self.gamma.clone(),
            self.gamma2.clone(),
        ])
    }
}

/// Bivariate polynomial `Σ c x^i y^j` as a series of order `n`.
fn bipoly(n: usize, terms: &[((usize, usize), Q)]) -> BiSeries {
    BiSeries::from_terms(n, terms)
}

/// The two F2 operators applied to `f`, with the coordinates
/// `x = x0 + ξ`, `y = y0 + η` expanded around `(x0, y0)`:
/// `x(1−x)F_xx − xyF_xy + (γ−(α+β+1)x)F_x − βyF_y − αβF` and its mirror.
fn f2_operators(p: &AppellParams, x0: &Q, y0: &Q, f: &BiSeries) -> (BiSeries, BiSeries) {
    let n = f.order();
    let x = bipoly(n, &[((0, 0), x0.clone()), ((1, 0), one())]);
    let y = bipoly(n, &[((0, 0), y0.clone()), ((0, 1), one())]);
    let c = |a: &Q| bipoly(n, &[((0, 0), a.clone())]);
    let one_s = c(&one());
    let fx = f.dx();
    let fy = f.dy();
    let fxx = fx.dx();
    let fyy = fy.dy();
    let fxy = fx.dy();
    let xy = &x * &y;
    let r1 = {
        let a = &(&x * &(&one_s - &x)) * &fxx;
        let b = &xy * &fxy;
        let coef = &c(&p.gamma) - &(&x * &c(&(&p.alpha + &p.beta + one())));
        let d = &coef * &fx;
        let e = (&y * &fy).scale(&p.beta);
        let g = f.scale(&(&p.alpha * &p.beta));
        &(&(&(&a - &b) + &d) - &e) - &g
    };
    let r2 = {
        let a = &(&y * &(&one_s - &y)) * &fyy;
        let b = &xy * &fxy;
        let coef = &c(&p.gamma2) - &(&y * &c(&(&p.alpha + &p.beta2 + one())));
        let d = &coef * &fy;
        let e = (&x * &fx).scale(&p.beta2);
        let g = f.scale(&(&p.alpha * &p.beta2));
        &(&(&(&a - &b) + &d) - &e) - &g
    };
    (r1, r2)
}

/// Residuals of the F2 equations with parameters `system` on the Appell
/// series with parameters `series`, valid through bi-order `n − 2`.
pub fn f2_residuals(series: &AppellParams, system: &AppellParams, n: usize) -> Result<(BiSeries, BiSeries)> {
    let s = series;
    let f = biseries_f2(&s.alpha, &s.beta, &s.beta2, &s.gamma, &s.gamma2, n)?;
    Ok(f2_operators(system, &zero(), &zero(), &f))
}

fn first_nonzero(a: &BiSeries, b: &BiSeries, through: usize) -> Option<usize> {
    match (a.first_nonzero_degree_through(through), b.first_nonzero_degree_through(through)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Both F2 equations vanish on the Appell series through bi-order `n − 2`.
/// For parameters `(μ; 1/2, μ; 1, 2μ)` the transformed system is also checked
/// on all local solutions at `(a, b) = (3, 5)` through total order 10.
pub fn verify_f2_system(p: &AppellParams, n: usize) -> Result<CheckRecord> {
    let (r1, r2) = f2_residuals(p, p, n)?;
    let through = n.saturating_sub(2);
    let mut rec = CheckRecord::new(
        "f2_system",
        json!({"params": p.inputs()}),
        first_nonzero(&r1, &r2, through),
        through,
    );
    if *p == AppellParams::clausen_type(&p.alpha) {
        let jets = f2_transformed_jet_check(&p.alpha, &p.alpha, &qi(3), &qi(5), 12)?;
        rec.inputs["transformed_jets"] = json!(jets);
        if !jets.holds() && rec.passed {
            rec.passed = false;
            rec.first_failure_index = Some(0);
        }
    }
    Ok(rec)
}

/// Hypothesis of the quadric reduction: `γ = 2β`, `γ' = 2β'`, `β + β' = α + 1/2`.
pub fn verify_sasaki_yoshida_quadric(p: &AppellParams) -> bool {
    let two = qi(2);
    p.gamma == &two * &p.beta && p.gamma2 == &two * &p.beta2 && &p.beta + &p.beta2 == &p.alpha + q(1, 2)
}

fn flatten(s: &BiSeries, through: usize) -> Vec<Q> {
    (0..=through)
        .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
        .map(|(i, j)| s.coeff(i, j))
        .collect()
}

/// A basis of formal Taylor jets of order `m` at `(x0, y0)` on which both F2
/// equations vanish through order `m − 2`.
pub fn f2_local_jets(p: &AppellParams, x0: &Q, y0: &Q, m: usize) -> Vec<BiSeries> {
    let monomials: Vec<(usize, usize)> = (0..=m).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect();
    let through = m - 2;
    let columns: Vec<Vec<Q>> = monomials
        .iter()
        .map(|&(i, j)| {
            let e = bipoly(m, &[((i, j), one())]);
            let (r1, r2) = f2_operators(p, x0, y0, &e);
            let mut v = flatten(&r1, through);
            v.extend(flatten(&r2, through));
            v
        })
        .collect();
    let rows: Vec<Vec<Q>> = (0..columns[0].len())
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    nullspace(&rows, monomials.len())
        .into_iter()
        .map(|v| {
            let terms: Vec<((usize, usize), Q)> = monomials.iter().cloned().zip(v).collect();
            bipoly(m, &terms)
        })
        .collect()
}

/// Outcome of the transformed-system jet check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JetCheck {
    /// Dimension of the local F2 jet space.
    pub f2_jets: usize,
    /// Dimension of the subspace whose transform satisfies the second system.
    pub transformed_solutions: usize,
    pub order_checked: usize,
}

impl JetCheck {
    /// Every local solution satisfies the transformed system.
    pub fn holds(&self) -> bool {
        self.f2_jets > 0 && self.transformed_solutions == self.f2_jets
    }
}

/// Residuals of `2(a−b)ω_ab − ω_a + ω_b` and
/// `a(a−1)ω_aa + b(b−1)ω_bb + (2ab−a−b)ω_ab + (2a−1)ω_a + (2b−1)ω_b + μ(1−μ)ω`
/// with `a = a0 + α`, `b = b0 + β`.
fn transformed_system(mu: &Q, a0: &Q, b0: &Q, w: &BiSeries) -> (BiSeries, BiSeries) {
    let n = w.order();
    let a = bipoly(n, &[((0, 0), a0.clone()), ((1, 0), one())]);
    let b = bipoly(n, &[((0, 0), b0.clone()), ((0, 1), one())]);
    let c = |x: Q| bipoly(n, &[((0, 0), x)]);
    let two = qi(2);
    let wa = w.dx();
    let wb = w.dy();
    let wab = wa.dy();
    let waa = wa.dx();
    let wbb = wb.dy();
    let r1 = &(&(&(&a - &b).scale(&two) * &wab) - &wa) + &wb;
    let a_am1 = &a * &(&a - &c(one()));
    let b_bm1 = &b * &(&b - &c(one()));
    let mixed = &(&(&a * &b).scale(&two) - &a) - &b;
    let lin_a = &a.scale(&two) - &c(one());
    let lin_b = &b.scale(&two) - &c(one());
    let r2 = &(&(&(&(&(&a_am1 * &waa) + &(&b_bm1 * &wbb)) + &(&mixed * &wab)) + &(&lin_a * &wa))
        + &(&lin_b * &wb))
        + &w.scale(&(mu * (one() - mu)));
    (r1, r2)
}

/// Pulls an F2 jet at `(1 − a0/b0, 1/b0)` back along `x = 1 − a/b`, `y = 1/b`
/// and multiplies by `(b/b0)^{−μ}`.
fn transformed_jet(f: &BiSeries, mu: &Q, a0: &Q, b0: &Q) -> Result<BiSeries> {
    let n = f.order();
    // 1/b = (1/b0) Σ (−β/b0)^k
    let inv_b = |k: usize| crate::rational::qpow(&(-b0.recip()), k as i64) / b0;
    let xi = BiSeries::from_fn(n, |i, k| match (i, k) {
        (0, 0) => zero(),
        (0, k) => -(a0 * inv_b(k)),
        (1, k) => -inv_b(k),
        _ => zero(),
    });
    let eta = BiSeries::from_fn(n, |i, k| if i == 0 && k > 0 { inv_b(k) } else { zero() });
    let twist = BiSeries::from_fn(n, |i, k| {
        if i > 0 {
            return zero();
        }
        let mut c = one();
        for l in 0..k {
            c = c * (-mu - qi(l as i64)) / qi(l as i64 + 1);
        }
        c * crate::rational::qpow(&b0.recip(), k as i64)
    });
    Ok(&twist * &f.compose(&xi, &eta)?)
}

/// Jet check of the transformed system with parameter `system_mu` at
/// `(a0, b0)` for `F2(μ; 1/2, μ; 1, 2μ)`: every local F2 solution is pulled
/// back and twisted, and the dimension of the subspace annihilated by the
/// transformed system through order `m − 2` is reported.
pub fn f2_transformed_jet_check(mu: &Q, system_mu: &Q, a0: &Q, b0: &Q, m: usize) -> Result<JetCheck> {
    let p = AppellParams::clausen_type(mu);
    let x0 = one() - a0 / b0;
    let y0 = b0.recip();
    let jets = f2_local_jets(&p, &x0, &y0, m);
    let through = m - 2;
    let mut columns = Vec::new();
    for f in &jets {
        let w = transformed_jet(f, mu, a0, b0)?;
        let (r1, r2) = transformed_system(system_mu, a0, b0, &w);
        let mut v = flatten(&r1, through);
        v.extend(flatten(&r2, through));
        columns.push(v);
    }
    let rows: Vec<Vec<Q>> = (0..columns.first().map_or(0, Vec::len))
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let kernel = nullspace(&rows, jets.len()).len();
    Ok(JetCheck {
        f2_jets: jets.len(),
        transformed_solutions: if rows.is_empty() { jets.len() } else { kernel },
        order_checked: through,
    })
}

// ---------------------------------------------------------------------------
// two-parameter Clausen-type identities

/// `g(a)` for a univariate series `g` and a bivariate `a` without constant term.
fn compose_into(g: &Series, a: &BiSeries) -> Result<BiSeries> {
    if !a.coeff(0, 0).is_zero() {
        return Err(CyError::NonzeroConstantTerm);
    }
    let n = a.order().min(g.order());
    let mut acc = BiSeries::from_terms(n, &[((0, 0), g.coeff(n))]);
    for k in (0..n).rev() {
        acc = &(&acc * a) + &BiSeries::from_terms(n, &[((0, 0), g.coeff(k))]);
    }
    Ok(acc)
}

/// `(1 − (x+y)/2)^(−e)`
fn half_sum_power(e: &Q, n: usize) -> BiSeries {
    BiSeries::from_fn(n, |i, j| {
        let k = i + j;
        pochhammer(e, k) / factorial(k) * binomial(k, i) / Q::from_integer(num_bigint::BigInt::from(2).pow(k as u32))
    })
}

/// The power series `A`, `B` with `A(1−B) = X`, `B(1−A) = Y`,
/// `X = x²/(2−x−y)²`, `Y = y²/(2−x−y)²`, vanishing at the origin.
pub fn clausen_type_arguments(n: usize) -> (BiSeries, BiSeries) {
    let inv_sq = half_sum_power(&qi(2), n).scale(&q(1, 4));
    let x = inv_sq.shift(2, 0);
    let y = inv_sq.shift(0, 2);
    // A = X + A² − AX + AY; each pass fixes two more total degrees
    let mut a = x.clone();
    for _ in 0..=n / 2 {
        a = &(&x + &(&a * &a)) - &(&a * &(&x - &y));
    }
    let b = &(&a - &x) + &y;
    (a, b)
}

/// Sides of `F2(μ; 1/2, μ; 1, 2μ | x, y) = (1−(x+y)/2)^(−μ) 2F1(μ/2,(μ+1)/2;1|A) 2F1(μ/2,(μ+1)/2;μ+1/2|B)`
/// with `x = 1 − a/b`, `y = 1/b`; the factors `b^(−μ)` and `(4(1−A)B)^(μ/2)` cancel.
pub fn clausen_type_sides(mu: &Q, n: usize) -> Result<(BiSeries, BiSeries)> {
    let p = AppellParams::clausen_type(mu);
    let lhs = biseries_f2(&p.alpha, &p.beta, &p.beta2, &p.gamma, &p.gamma2, n)?;
    let (a, b) = clausen_type_arguments(n);
    let (h, h1) = (mu / qi(2), (mu + one()) / qi(2));
    let fa = hypergeom_series(&HypergeomSpec::new(vec![h.clone(), h1.clone()], vec![one()]), n)?;
    let fb = hypergeom_series(&HypergeomSpec::new(vec![h, h1], vec![mu + q(1, 2)]), n)?;
    let rhs = &(&half_sum_power(mu, n) * &compose_into(&fa, &a)?) * &compose_into(&fb, &b)?;
    Ok((lhs, rhs))
}

/// Sides of `Σ_n c_n [z^n]((1−az)(1−bz))^(−1/2) = 2F1(μ/2,(1−μ)/2;1|𝒜) 2F1(μ/2,(1−μ)/2;1|ℬ)`,
/// `c_n` the coefficients of `2F1(μ,1−μ;1)`, as series in `(a, b)`. The right
/// side is symmetric in `𝒜, ℬ` and is expanded through `𝒜+ℬ = 2a+2b−4ab`,
/// `𝒜ℬ = (a−b)²`, so the branch pairing does not enter.
pub fn symmetric_clausen_sides(mu: &Q, n: usize) -> Result<(BiSeries, BiSeries)> {
    let c = f21(mu.clone(), one() - mu, n)?;
    let h = q(1, 2);
    let lhs = BiSeries::from_fn(n, |i, j| {
        c.coeff(i + j) * pochhammer(&h, i) * pochhammer(&h, j) / (factorial(i) * factorial(j))
    });
    let f = hypergeom_series(&HypergeomSpec::new(vec![mu / qi(2), (one() - mu) / qi(2)], vec![one()]), n)?;
    let sigma = BiSeries::from_terms(n, &[((1, 0), qi(2)), ((0, 1), qi(2)), ((1, 1), qi(-4))]);
    let pi = BiSeries::from_terms(n, &[((2, 0), one()), ((1, 1), qi(-2)), ((0, 2), one())]);
    // power sums p_k = 𝒜^k + ℬ^k
    let mut power_sums = vec![BiSeries::from_terms(n, &[((0, 0), qi(2))]), sigma.clone()];
    for k in 2..=n {
        let next = &(&sigma * &power_sums[k - 1]) - &(&pi * &power_sums[k - 2]);
        power_sums.push(next);
    }
    let mut rhs = BiSeries::zeros(n);
    let mut pi_m = BiSeries::from_terms(n, &[((0, 0), one())]);
    for m in 0..=n / 2 {
        rhs = &rhs + &pi_m.scale(&(f.coeff(m) * f.coeff(m)));
        for k in m + 1..=n - m {
            rhs = &rhs + &(&pi_m * &power_sums[k - m]).scale(&(f.coeff(m) * f.coeff(k)));
        }
        pi_m = &pi_m * &pi;
    }
    Ok((lhs, rhs))
}

fn bi_record(name: &str, mu: &Q, lhs: &BiSeries, rhs: &BiSeries) -> CheckRecord {
    let n = lhs.order().min(rhs.order());
    let miss = (lhs - rhs).first_nonzero_degree_through(n);
    CheckRecord::new(name, json!({"mu": fmt_q(mu)}), miss, n)
}

/// The Clausen-type identity for the rank-18 two-parameter period, through total degree `n`.
pub fn verify_two_parameter_clausen(mu: &Q, n: usize) -> Result<CheckRecord> {
    let (l, r) = clausen_type_sides(mu, n)?;
    Ok(bi_record("two_parameter_clausen", mu, &l, &r))
}

/// The symmetric product formula for the second two-parameter period, through total degree `n`.
pub fn verify_symmetric_clausen(mu: &Q, n: usize) -> Result<CheckRecord> {
    let (l, r) = symmetric_clausen_sides(mu, n)?;
    Ok(bi_record("symmetric_clausen", mu, &l, &r))
}

// ---------------------------------------------------------------------------
// Fuchsian system

/// Residual of the second row of the first-order system for `(ω, η)`, with
/// `ω = 2F1(μ,1−μ;1)` and `η` solved from the first row:
/// `η = (2/(3δ))(Δω' + Δ'ω/12)`, residual `Δη' − Δ'η/12 + (g2 δ/8) ω`,
/// `δ = 3 g3 g2' − 2 g2 g3'`. `second_row_sign` multiplies `δ` in the second
/// row only.
pub fn fuchsian_residual(name: &str, second_row_sign: i64, n: usize) -> Result<Series> {
    let info = surface_info(name)?;
    if info.tilde || info.name == "X411" {
        return Err(CyError::UnsupportedSpec(format!("{name} has no 2F1(μ,1−μ;1) period")));
    }
    let mu = info.mu.expect("catalog surfaces carry μ");
    let m = surface_catalog(name)?;
    let t = |p: &crate::multipoly::MultiPoly| {
        p.to_poly(Var::T)
            .ok_or_else(|| CyError::UnsupportedSpec("coefficients depend on other variables".into()))
    };
    let g2 = t(&m.g2)?;
    let g3 = t(&m.g3)?;
    let disc = t(&discriminant(&m)?)?;
    let delta = &(&g3 * &g2.derivative()).scale(&qi(3)) - &(&g2 * &g3.derivative()).scale(&qi(2));
    let twelfth = q(1, 12);
    let omega = f21(mu.clone(), one() - &mu, n)?;
    let s = |p: &Poly| Series::from_poly(p, n);
    let first = &(&s(&disc) * &omega.derivative()) + &(&s(&disc.derivative()) * &omega).scale(&twelfth);
    let eta = first.div(&s(&delta))?.scale(&q(2, 3));
    let k = eta.order();
    let lhs = &(&s(&disc).truncate(k) * &eta.derivative()) - &(&s(&disc.derivative()).truncate(k) * &eta).scale(&twelfth);
    let coupling = (&s(&g2) * &s(&delta)).scale(&(qi(second_row_sign) / qi(8)));
    Ok(&lhs + &(&coupling * &omega).truncate(lhs.order()))
}

pub fn verify_fuchsian_system(name: &str, n: usize) -> Result<CheckRecord> {
    let r = fuchsian_residual(name, 1, n)?;
    Ok(CheckRecord::vanishing("fuchsian_system", json!({"surface": name}), &r))
}

// ---------------------------------------------------------------------------
// monodromy

/// An integer matrix of determinant one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Sl2zMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Sl2zMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(CyError::UnsupportedSpec(format!("det [[{a},{b}],[{c},{d}]] ≠ 1")));
        }
        Ok(Sl2zMatrix { a, b, c, d })
    }

    pub const IDENTITY: Sl2zMatrix = Sl2zMatrix { a: 1, b: 0, c: 0, d: 1 };
    pub const T: Sl2zMatrix = Sl2zMatrix { a: 1, b: 1, c: 0, d: 1 };
    pub const S: Sl2zMatrix = Sl2zMatrix { a: 0, b: -1, c: 1, d: 0 };

    pub fn entries(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn inverse(&self) -> Self {
        Sl2zMatrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { *self };
        (0..e.unsigned_abs()).fold(Sl2zMatrix::IDENTITY, |acc, _| acc * base)
    }

    pub fn is_identity(&self) -> bool {
        *self == Sl2zMatrix::IDENTITY
    }
}

impl Mul for Sl2zMatrix {
    type Output = Sl2zMatrix;
    fn mul(self, o: Sl2zMatrix) -> Sl2zMatrix {
        Sl2zMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl Neg for Sl2zMatrix {
    type Output = Sl2zMatrix;
    fn neg(self) -> Sl2zMatrix {
        Sl2zMatrix {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl fmt::Display for Sl2zMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// The local monodromy `M0 = M−1` for `n ∈ 1..=4`.
pub fn monodromy_m0(n: u32) -> Result<Sl2zMatrix> {
    let (t, s) = (Sl2zMatrix::T, Sl2zMatrix::S);
    Ok(match n {
        1 => s * t,
        2 => t.inverse() * s * t,
        3 => t.inverse() * (s * t).pow(2) * t,
        4 => {
            let st2 = s * t.pow(2);
            st2.inverse() * (-t) * st2
        }
        _ => return Err(CyError::UnsupportedSpec(format!("monodromy n = {n}"))),
    })
}

/// `M_{u1,−} · M−1 · M_{un,−} · M0 · M_{u1,+} · M_{un,+}` with
/// `M_{u1,±} = S T S⁻¹` and `M_{un,±} = Tⁿ`.
pub fn monodromy_product(n: u32) -> Result<Sl2zMatrix> {
    let (t, s) = (Sl2zMatrix::T, Sl2zMatrix::S);
    let m0 = monodromy_m0(n)?;
    let u1 = s * t * s.inverse();
    let un = t.pow(n as i64);
    Ok(u1 * m0 * un * m0 * u1 * un)
}

/// `[[1, 2n], [0, 1]] · [[1, −n], [0, 1]]²`.
pub fn homological_product(n: u32) -> Sl2zMatrix {
    let n = n as i64;
    let gamma_inf = Sl2zMatrix { a: 1, b: 2 * n, c: 0, d: 1 };
    let m = Sl2zMatrix { a: 1, b: -n, c: 0, d: 1 };
    gamma_inf * m * m
}

/// One record per relation; each passes iff the product is the identity.
pub fn monodromy_records() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        let p = monodromy_product(n)?;
        out.push(CheckRecord::new(
            "monodromy_transition",
            json!({"n": n, "product": p.to_string()}),
            (!p.is_identity()).then_some(0),
            0,
        ));
    }
    for n in 1..=4 {
        let p = homological_product(n);
        out.push(CheckRecord::new(
            "monodromy_homological",
            json!({"n": n, "product": p.to_string()}),
            (!p.is_identity()).then_some(0),
            0,
        ));
    }
    Ok(out)
}

pub fn verify_monodromy_relations() -> Result<bool> {
    Ok(monodromy_records()?.iter().all(|r| r.passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_parameter_clausen_identities() {
        for mu in mus() {
            let r = verify_two_parameter_clausen(&mu, 12).unwrap();
            assert!(r.passed, "{r:?}");
            let r = verify_symmetric_clausen(&mu, 12).unwrap();
            assert!(r.passed, "{r:?}");
        }
        let (a, b) = clausen_type_arguments(8);
        assert_eq!(a.coeff(2, 0), q(1, 4));
        assert_eq!(b.coeff(0, 2), q(1, 4));
    }

    #[test]
    fn two_parameter_clausen_detects_wrong_mu() {
        let (l, _) = clausen_type_sides(&q(1, 3), 8).unwrap();
        let (_, r) = clausen_type_sides(&q(1, 4), 8).unwrap();
        assert!((&l - &r).first_nonzero_degree_through(8).is_some());
        let (l, _) = symmetric_clausen_sides(&q(1, 3), 8).unwrap();
        let (_, r) = symmetric_clausen_sides(&q(1, 4), 8).unwrap();
        assert!((&l - &r).first_nonzero_degree_through(8).is_some());
    }

    #[test]
    fn f2_mixed_term_sign_matters() {
        // the F2 series fails the first equation when the mixed term is +xy F_xy
        let p = AppellParams::clausen_type(&q(1, 3));
        let f = biseries_f2(&p.alpha, &p.beta, &p.beta2, &p.gamma, &p.gamma2, 8).unwrap();
        let (r1, _) = f2_operators(&p, &zero(), &zero(), &f);
        assert_eq!(r1.first_nonzero_degree_through(6), None);
        let plus = &r1 + &f.dx().dy().shift(1, 1).scale(&qi(2));
        assert_eq!(plus.first_nonzero_degree_through(6), Some(2));
    }

    fn mus() -> [Q; 4] {
        [q(1, 6), q(1, 4), q(1, 3), q(1, 2)]
    }

    fn inv(i: u32, j: u32, a: Q) -> FunctionalInvariant {
        FunctionalInvariant::new(i, j, a).unwrap()
    }

    #[test]
    fn twist_multipliers() {
        let s = twist_period_params(&inv(1, 1, one()));
        assert_eq!((s.upper, s.lower), (vec![q(1, 2), one()], vec![one()]));
        let s = twist_period_params(&inv(2, 1, one()));
        assert_eq!((s.upper, s.lower), (vec![q(1, 3), q(2, 3), one()], vec![q(1, 2), one()]));
        let s = twist_period_params(&inv(2, 1, q(1, 2)));
        assert_eq!(
            (s.upper, s.lower),
            (vec![q(1, 6), q(1, 2), q(5, 6)], vec![q(1, 2), q(1, 2)])
        );
    }

    #[test]
    fn reduction_examples() {
        let base = HypergeomSpec::new(vec![q(1, 2)], vec![]);
        let r = reduce_parameters(&twist_period_params(&inv(1, 1, one())), &base).unwrap();
        assert!(r.same_parameters(&HypergeomSpec::balanced(vec![q(1, 2), q(1, 2)])));
        let r = reduce_parameters(&twist_period_params(&inv(2, 1, one())), &base).unwrap();
        assert!(r.same_parameters(&HypergeomSpec::balanced(vec![q(1, 3), q(2, 3)])));
        let h = q(1, 2);
        let base = HypergeomSpec::balanced(vec![h.clone(), h.clone(), h.clone()]);
        let r = reduce_parameters(&twist_period_params(&inv(1, 1, one())), &base).unwrap();
        assert!(r.same_parameters(&HypergeomSpec::balanced(vec![h; 4])));
    }

    #[test]
    fn reduction_matches_hadamard_product() {
        let base = HypergeomSpec::balanced(vec![q(1, 3), q(1, 2), q(2, 3)]);
        let f = TwistPeriodFormula::new(inv(2, 2, one()), base, 3, Some(&q(1, 3))).unwrap();
        let red = hypergeom_series(&f.reduced().unwrap(), 30).unwrap();
        assert!(red.agrees(&f.series(30).unwrap()));
    }

    #[test]
    fn formula_rejects_out_of_range_invariants() {
        let base = HypergeomSpec::new(vec![q(1, 2)], vec![]);
        assert!(TwistPeriodFormula::new(inv(3, 1, one()), base.clone(), 1, None).is_err());
        assert!(TwistPeriodFormula::new(inv(4, 1, one()), base, 2, Some(&q(1, 3))).is_err());
    }

    #[test]
    fn mixed18_cells_reduce_with_square_argument() {
        let r = cancel_parameters(&mixed18_twist_period(&q(1, 3), 3).unwrap());
        let want = HypergeomSpec::balanced(vec![q(1, 6), q(1, 6), q(5, 6), q(5, 6)]).with_power(2);
        assert!(r.same_parameters(&want));
        assert!(mixed18_twist_period(&q(1, 3), 2).is_err());
    }

    #[test]
    fn classical_identities_hold() {
        for mu in mus() {
            assert!(verify_clausen(&mu, 40).unwrap().passed);
            assert!(verify_kummer_quadratic(&mu, 40).unwrap().passed);
            assert!(verify_uneasy_twist(&mu, 40).unwrap().passed);
        }
        assert!(verify_euler_identities(40).unwrap().iter().all(|r| r.passed));
    }

    #[test]
    fn perturbed_identities_fail() {
        let (mut l, r) = clausen_sides(&q(1, 2), 20).unwrap();
        l.set_coeff(1, l.coeff(1) + one());
        assert_eq!(l.first_mismatch(&r), Some(1));
        let (l, r) = kummer_sides(&q(1, 3), &Poly::from_ints(&[0, 2, -2]), 20).unwrap();
        assert!(!l.agrees(&r));
    }

    #[test]
    fn extra_case_rows_hold() {
        for row in 1..=5 {
            for mu in mus() {
                let r = verify_extra_case_identity(row, &mu, 30).unwrap();
                assert!(r.passed, "row {row} mu {mu}: {r:?}");
            }
        }
    }

    #[test]
    fn extra_case_wrong_exponent_fails() {
        let mut r = extra_case_row(2, &q(1, 3)).unwrap();
        r.prefactor_exponent = q(1, 2);
        assert!(!check_extra_case(&r, 20).unwrap().passed);
    }

    #[test]
    fn printed_row3_operator_sign_fails() {
        // constant term −2μ² − 2μ instead of 2μ − 2μ²
        let mu = q(1, 3);
        let c = -qi(2) * &mu * &mu - qi(2) * &mu;
        let l1 = -&(&Poly::new(vec![one(), qi(2)]) * &Poly::new(vec![c, one(), one()]));
        let lin = |a: Q| Poly::new(vec![a, one()]);
        let l2 = &(&lin(one()) * &lin(qi(2) * &mu)) * &lin(qi(2) - qi(2) * &mu);
        let op = ThetaOperator::from_layers(&[Poly::monomial(one(), 3), l1, l2]);
        let (lhs, _) = extra_case_sides(&extra_case_row(3, &mu).unwrap(), 20).unwrap();
        assert!(!op.annihilates(&lhs).vanishes);
        assert!(extra_case_operator(&mu, &(one() - &mu)).annihilates(&lhs).vanishes);
    }

    #[test]
    fn mirror_periods() {
        let s = mirror_period(1, 10).unwrap();
        let root = algebraic_power(&Poly::from_ints(&[1, -1]), &q(-1, 2), 10).unwrap();
        assert!(s.agrees(&root));
        assert!(mirror_period(2, 10).unwrap().agrees(&f21(q(1, 3), q(2, 3), 10).unwrap()));
        assert!(verify_mirror_factorizations(30).unwrap().iter().all(|r| r.passed));
        let printed = hypergeom_series(&printed_mirror_spec(4).unwrap(), 10).unwrap();
        assert!(!printed.agrees(&mirror_period(4, 10).unwrap()));
        assert!(mirror_period(5, 10).is_err());
    }

    #[test]
    fn f2_systems() {
        let h = q(1, 2);
        let p = AppellParams::new(h.clone(), h.clone(), h.clone(), one(), one());
        assert!(verify_f2_system(&p, 14).unwrap().passed);
        assert!(verify_f2_system(&AppellParams::clausen_type(&q(1, 3)), 14).unwrap().passed);
        let mut bad = p.clone();
        bad.gamma = q(3, 2);
        let (r1, r2) = f2_residuals(&p, &bad, 14).unwrap();
        assert_eq!(first_nonzero(&r1, &r2, 12), Some(0));
    }

    #[test]
    fn sasaki_yoshida_condition() {
        let h = q(1, 2);
        assert!(verify_sasaki_yoshida_quadric(&AppellParams::clausen_type(&q(1, 3))));
        assert!(verify_sasaki_yoshida_quadric(&AppellParams::new(
            h.clone(),
            h.clone(),
            h,
            one(),
            one()
        )));
        assert!(!verify_sasaki_yoshida_quadric(&AppellParams::new(one(), one(), one(), qi(2), qi(2))));
    }

    #[test]
    fn transformed_f2_jets() {
        let mu = q(1, 3);
        let c = f2_transformed_jet_check(&mu, &mu, &qi(3), &qi(5), 8).unwrap();
        assert_eq!((c.f2_jets, c.transformed_solutions), (4, 4));
        let c = f2_transformed_jet_check(&mu, &q(1, 5), &qi(3), &qi(5), 8).unwrap();
        eprintln!("{c:?}");
        assert!(!c.holds());
    }

    #[test]
    fn fuchsian_systems() {
        for name in ["X141", "X431", "X321", "X211"] {
            let r = verify_fuchsian_system(name, 30).unwrap();
            assert!(r.passed, "{name}: {r:?}");
            let bad = fuchsian_residual(name, -1, 30).unwrap();
            assert!(bad.first_nonzero_through(bad.order()).is_some());
        }
    }

    #[test]
    fn monodromy() {
        let m0 = monodromy_m0(1).unwrap();
        assert_eq!(m0.entries(), [[0, -1], [1, 1]]);
        assert_eq!(homological_product(2), Sl2zMatrix::IDENTITY);
        assert!(Sl2zMatrix::new(2, 0, 0, 1).is_err());
        // the printed transition product is not the identity
        assert_eq!(monodromy_product(1).unwrap().entries(), [[0, -1], [1, 3]]);
        assert!(!verify_monodromy_relations().unwrap());
    }
}
