//! Property tests for the series, operator, Weierstrass and period layers.

use proptest::prelude::*;

use cyops::catalog::{build_catalog, l5_hat_operator, l5_operator, yypb_table, Case};
use cyops::hypergeom::{hypergeom_series, pochhammer, HypergeomSpec};
use cyops::operator::{DOperator, ThetaOperator, TwistFactor};
use cyops::periods::{reduce_parameters, twist_period_params};
use cyops::poly::Poly;
use cyops::rational::{one, q, qi, Q};
use cyops::series::Series;
use cyops::weierstrass::{quadratic_twist, surface_catalog, FunctionalInvariant};
use cyops::{MultiPoly, RatFunc, Var};

fn small_q() -> impl Strategy<Value = Q> {
    (-9i64..10, 1i64..6).prop_map(|(a, b)| q(a, b))
}

fn series(n: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(small_q(), n + 1).prop_map(Series::new)
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_q(), 1..=max_deg + 1).prop_map(Poly::new)
}

/// Parameters bounded away from the non-positive integers.
fn lower_param() -> impl Strategy<Value = Q> {
    (1i64..20, 1i64..7).prop_map(|(a, b)| q(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn hadamard_is_commutative_associative_with_identity(a in series(10), b in series(10), c in series(10)) {
        prop_assert_eq!(a.hadamard(&b), b.hadamard(&a));
        prop_assert_eq!(a.hadamard(&b).hadamard(&c), a.hadamard(&b.hadamard(&c)));
        let g = Series::geometric(10);
        prop_assert_eq!(a.hadamard(&g), a.clone());
        prop_assert_eq!(g.hadamard(&a), a);
    }

    #[test]
    fn hypergeometric_term_ratio(
        upper in prop::collection::vec(small_q(), 1..4),
        lower in prop::collection::vec(lower_param(), 0..3),
        m in 0usize..15,
    ) {
        let spec = HypergeomSpec::new(upper.clone(), lower.clone());
        let s = hypergeom_series(&spec, m + 1).unwrap();
        let num: Q = upper.iter().map(|a| a + qi(m as i64)).product();
        let den: Q = lower.iter().map(|b| b + qi(m as i64)).product::<Q>() * qi(m as i64 + 1);
        prop_assert_eq!(s.coeff(m + 1), s.coeff(m) * num / den);
    }

    #[test]
    fn compose_matches_polynomial_substitution(n in 1usize..=12, f in series(12), g in series(12)) {
        let mut g = g.truncate(n);
        g.set_coeff(0, Q::from_integer(0.into()));
        let f = f.truncate(n);
        let fp = Poly::new(f.coeffs().to_vec());
        let gp = Poly::new(g.coeffs().to_vec());
        let mut expanded = Poly::zero();
        for (k, c) in fp.coeffs().iter().enumerate() {
            expanded = &expanded + &gp.pow(k as u32).scale(c);
        }
        let want = Series::from_poly(&expanded, n);
        prop_assert_eq!(f.compose(&g).unwrap(), want);
    }

    #[test]
    fn integer_series_stay_integral(a in prop::collection::vec(-20i64..20, 11), b in prop::collection::vec(-20i64..20, 11)) {
        let s = &Series::new(a.iter().map(|&x| qi(x)).collect()) * &Series::new(b.iter().map(|&x| qi(x)).collect());
        prop_assert!(s.coeffs().iter().all(|c| c.is_integer()));
    }

    #[test]
    fn dual_is_an_involution(coeffs in prop::collection::vec(poly(3), 1..=5)) {
        let mut c: Vec<RatFunc> = coeffs.iter().map(|p| RatFunc::new(p.clone(), Poly::one())).collect();
        c.push(RatFunc::new(Poly::x(), Poly::one()));
        let d = DOperator::new(c);
        prop_assert_eq!(d.dual().dual(), d);
    }

    #[test]
    fn conjugation_is_undone_by_the_inverse_twist(layer in poly(3), a in small_q(), b in small_q()) {
        let l = ThetaOperator::from_layers(&[Poly::monomial(one(), 4), layer]);
        let f = TwistFactor::new(vec![(Poly::x(), a), (Poly::from_ints(&[-1, 1]), b)]);
        let back = l.conjugate(&f).conjugate(&f.inverse());
        prop_assert_eq!(back, l);
    }

    #[test]
    fn reduce_parameters_is_sound(i in 1u32..=3, j in 1u32..=4, half in any::<bool>(), mu_ix in 0usize..4) {
        let mu = [q(1, 2), q(1, 3), q(1, 4), q(1, 6)][mu_ix].clone();
        let alpha = if half { q(1, 2) } else { one() };
        let inv = FunctionalInvariant::new(i, j, alpha).unwrap();
        prop_assume!(inv.valid_for(&mu));
        let base = HypergeomSpec::balanced(vec![mu.clone(), q(1, 2), one() - &mu]);
        let mult = twist_period_params(&inv);
        let red = reduce_parameters(&mult, &base).unwrap();
        let n = 25;
        let had = hypergeom_series(&mult, n).unwrap().hadamard(&hypergeom_series(&base, n).unwrap());
        prop_assert_eq!(hypergeom_series(&red, n).unwrap(), had);
    }

    #[test]
    fn quadratic_twist_is_an_involution(surface_ix in 0usize..4, root in 2i64..9) {
        let name = ["X141", "X431", "X321", "X211"][surface_ix];
        let m = surface_catalog(name).unwrap();
        let h = &MultiPoly::var(Var::T) - &MultiPoly::constant(qi(root));
        prop_assert_eq!(quadratic_twist(&quadratic_twist(&m, &h), &h), m);
    }
}

#[test]
fn exterior_square_order_detects_self_duality() {
    let cat = build_catalog().unwrap();
    assert_eq!(cat.len(), 60);
    for e in &cat {
        let d = e.operator.to_d_form();
        assert!(d.is_self_dual_order4(), "{}", e.label());
        assert_eq!(d.exterior_square().unwrap().order(), 5, "{}", e.label());
    }
    for k in 1..=20i64 {
        let probe = ThetaOperator::from_layers(&[Poly::monomial(one(), 4), -&Poly::new(vec![qi(k), Q::from_integer(0.into()), one()])]);
        let d = probe.to_d_form();
        assert!(!d.is_self_dual_order4(), "probe {k}");
        assert_eq!(d.exterior_square().unwrap().order(), 6, "probe {k}");
    }
}

#[test]
fn squaring_the_argument_maps_l5_to_l5_hat() {
    for row in yypb_table() {
        let (p, qq) = (&row.params[0], &row.params[1]);
        let (sub, content) = l5_operator(p, qq).substitute_power(2);
        assert_eq!(sub, l5_hat_operator(p, qq), "row {}", row.index);
        assert_eq!(content, Poly::constant(q(1, 32)), "row {}", row.index);
    }
}

#[test]
fn catalog_hypergeometric_operators_annihilate_their_series() {
    for e in build_catalog().unwrap().iter().filter(|e| e.case == Case::Hypergeometric) {
        let s = e.period_series(40).unwrap();
        let a = e.operator.annihilates(&s);
        assert!(a.vanishes, "{} {:?}", e.label(), a.first_residual);
    }
}

#[test]
fn pochhammer_matches_products() {
    let a = q(2, 7);
    let direct: Q = (0..6).map(|k| &a + qi(k)).product();
    assert_eq!(pochhammer(&a, 6), direct);
}
