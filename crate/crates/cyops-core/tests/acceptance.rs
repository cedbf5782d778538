//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rayon::prelude::*;

use cyops::catalog::{
    build_catalog, check_fiber_row, fiber_table, l5_hat_operator, l5_operator, odd_pullback, printed_pullback,
    printed_pullback_hat, vhs_table, yypb_table, VhsCell, FIBER_TABLES,
};
use cyops::hypergeom::{hypergeom_series, HypergeomSpec};
use cyops::operator::ThetaOperator;
use cyops::periods::{
    monodromy_records, reduce_parameters, twist_period_params, verify_clausen, verify_euler_identities,
    verify_extra_case_identity, verify_f2_system, verify_kummer_quadratic, verify_mirror_factorizations,
    verify_monodromy_relations, verify_uneasy_twist, AppellParams, CheckRecord,
};
use cyops::rational::{fmt_q, one, q, Q};
use cyops::weierstrass::{
    k3_mixed, mixed_twist, section_holds_at_points, surface_catalog, surface_for_mu, torsion_rows,
    transform_section_mixed, verify_substitution_identity, FunctionalInvariant,
};
use cyops::Var;

const N: usize = 60;
const SEED: u64 = 7;

type Verdict = (bool, String);

fn mus() -> [Q; 4] {
    [q(1, 2), q(1, 3), q(1, 4), q(1, 6)]
}

fn records_verdict(records: &[CheckRecord]) -> Verdict {
    let bad: Vec<String> = records
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} {} at {:?}", r.name, r.inputs, r.first_failure_index))
        .collect();
    (bad.is_empty(), format!("{}/{} hold {:?}", records.len() - bad.len(), records.len(), bad))
}

fn annihilation_60() -> Verdict {
    let cat = build_catalog().expect("catalog");
    let bad: Vec<String> = cat
        .par_iter()
        .filter(|e| !e.period_series(N).is_ok_and(|s| e.operator.annihilates(&s).vanishes))
        .map(|e| e.label())
        .collect::<Vec<_>>();
    (cat.len() == 60 && bad.is_empty(), format!("{}/{} annihilated at N={N} {bad:?}", cat.len() - bad.len(), cat.len()))
}

fn twist_params() -> Verdict {
    let base = HypergeomSpec::new(vec![q(1, 2)], vec![]);
    let rows = [((1, 1, q(1, 1)), q(1, 2)), ((2, 1, q(1, 1)), q(1, 3)), ((1, 1, q(1, 2)), q(1, 4)), ((2, 1, q(1, 2)), q(1, 6))];
    let mut detail = Vec::new();
    let mut ok = true;
    for ((i, j, a), mu) in rows {
        let inv = FunctionalInvariant::new(i, j, a).unwrap();
        let red = reduce_parameters(&twist_period_params(&inv), &base).unwrap();
        let hit = red.same_parameters(&HypergeomSpec::balanced(vec![mu.clone(), one() - &mu]));
        ok &= hit;
        detail.push(format!("({i},{j},{})→{}", fmt_q(&inv.alpha), red));
    }
    (ok, detail.join("; "))
}

fn vhs_cells() -> Verdict {
    let mut bad = Vec::new();
    let mut cells = 0;
    for row in vhs_table() {
        for c in &row.cells {
            cells += 1;
            if !row.cell_reduces(c).unwrap_or(false) {
                bad.push(format!("row {} {}", row.index, c.label()));
            }
            // series oracle: the unreduced Hadamard product equals the row period
            if let VhsCell::Invariant { mu, invariant, .. } = c {
                let base = HypergeomSpec::balanced(vec![mu.clone(), q(1, 2), one() - mu]);
                let had = hypergeom_series(&twist_period_params(invariant), 30)
                    .unwrap()
                    .hadamard(&hypergeom_series(&base, 30).unwrap());
                let row_series = hypergeom_series(&HypergeomSpec::balanced(row.params.clone()), 30).unwrap();
                if had != row_series {
                    bad.push(format!("row {} {} series", row.index, c.label()));
                }
            }
        }
    }
    (bad.is_empty(), format!("{cells} cells, failures {bad:?}"))
}

fn fiber_regression() -> Verdict {
    let mut bad = Vec::new();
    let mut rows = 0;
    for id in FIBER_TABLES {
        let euler = if id == "3ExtRatHg" { 12 } else { 24 };
        for row in fiber_table(id).unwrap() {
            rows += 1;
            let c = check_fiber_row(&row, SEED).unwrap();
            if !c.passed() || c.computed.euler_sum() != euler {
                bad.push(format!("{id} {}", row.surface));
            }
        }
    }
    (bad.is_empty(), format!("{rows} rows, failures {bad:?}"))
}

fn torsion() -> Verdict {
    let mut bad = Vec::new();
    let rows = torsion_rows().unwrap();
    let mut count = 0;
    for row in &rows {
        for sec in &row.sections {
            count += 1;
            if !row.model.contains_point(&sec.x, &sec.y_sq) {
                bad.push(format!("table {} {}", row.table, row.label));
            }
        }
    }
    // rational sections pushed through the mixed threefold twist with (1,1,1)
    let inv = FunctionalInvariant::new(1, 1, one()).unwrap();
    let mut pushed = 0;
    for row in rows.iter().filter(|r| r.table == 3) {
        let mu = match row.label {
            "M4" => q(1, 2),
            "M3" => q(1, 3),
            _ => q(1, 4),
        };
        let threefold = mixed_twist(&k3_mixed(&surface_catalog(surface_for_mu(&mu).unwrap()).unwrap()).unwrap(), Var::S, &inv).unwrap();
        for sec in &row.sections {
            pushed += 1;
            let t = transform_section_mixed(sec, 1, 1);
            if !section_holds_at_points(&threefold, &t, SEED, 3) {
                bad.push(format!("pushed {}", row.label));
            }
        }
    }
    (bad.is_empty(), format!("{count} sections exact, {pushed} transformed at 3 points, failures {bad:?}"))
}

fn identity_suite() -> Verdict {
    let mut recs = Vec::new();
    for mu in mus() {
        recs.push(verify_clausen(&mu, N).unwrap());
        recs.push(verify_kummer_quadratic(&mu, N).unwrap());
        recs.push(verify_uneasy_twist(&mu, N).unwrap());
        for row in 1..=5 {
            recs.push(verify_extra_case_identity(row, &mu, N).unwrap());
        }
    }
    recs.extend(verify_euler_identities(N).unwrap());
    recs.extend(verify_mirror_factorizations(N).unwrap());
    let too_short: Vec<&str> = recs.iter().filter(|r| r.order_checked < N).map(|r| r.name.as_str()).collect();
    let (ok, detail) = records_verdict(&recs);
    (ok && recs.len() == 4 * 8 + 6 && too_short.is_empty(), detail)
}

fn self_duality() -> Verdict {
    let cat = build_catalog().unwrap();
    let bad4: Vec<String> = cat
        .par_iter()
        .filter(|e| !e.operator.to_d_form().is_self_dual_order4())
        .map(|e| e.label())
        .collect();
    let mut bad5 = Vec::new();
    for row in yypb_table() {
        let (p, qq) = (&row.params[0], &row.params[1]);
        if !l5_operator(p, qq).to_d_form().is_self_dual_order5() {
            bad5.push(format!("L5 {}", row.index));
        }
        if !l5_hat_operator(p, qq).to_d_form().is_self_dual_order5() {
            bad5.push(format!("L5hat {}", row.index));
        }
    }
    (
        bad4.is_empty() && bad5.is_empty() && cat.len() == 60,
        format!("order 4: {}/60, order 5: {}/28; failures {bad4:?} {bad5:?}", 60 - bad4.len(), 28 - bad5.len()),
    )
}

fn yifan_yang_round_trip() -> Verdict {
    let results: Vec<(bool, bool, bool, bool)> = yypb_table()
        .par_iter()
        .map(|row| {
            let (p, qq) = (&row.params[0], &row.params[1]);
            let check = |hat: bool| {
                let (conj, pb) = odd_pullback(p, qq, hat).unwrap();
                let printed = if hat { printed_pullback_hat(p, qq) } else { printed_pullback(p, qq) };
                let matches = ThetaOperator::from_d_form(&pb) == printed;
                let back = pb
                    .exterior_square()
                    .is_ok_and(|e| ThetaOperator::from_d_form(&e) == ThetaOperator::from_d_form(&conj));
                (matches, back)
            };
            let (a, b) = check(false);
            let (c, d) = check(true);
            (a, b, c, d)
        })
        .collect();
    let count = |f: fn(&(bool, bool, bool, bool)) -> bool| results.iter().filter(|r| f(r)).count();
    let (m, rt, mh, rth) = (count(|r| r.0), count(|r| r.1), count(|r| r.2), count(|r| r.3));
    (
        [m, rt, mh, rth].iter().all(|&c| c == 14),
        format!("printed match {m}/14, round trip {rt}/14; hatted printed match {mh}/14, round trip {rth}/14"),
    )
}

fn appell_f2() -> Verdict {
    let params = [
        AppellParams::new(q(1, 2), q(1, 2), q(1, 2), one(), one()),
        AppellParams::clausen_type(&q(1, 3)),
    ];
    let recs: Vec<CheckRecord> = params.iter().map(|p| verify_f2_system(p, 22).unwrap()).collect();
    let through = recs.iter().all(|r| r.order_checked >= 20);
    let jets = recs[1].inputs.get("transformed_jets").is_some();
    let (ok, detail) = records_verdict(&recs);
    (ok && through && jets, detail)
}

fn monodromy() -> Verdict {
    let recs = monodromy_records().unwrap();
    let holds = verify_monodromy_relations().unwrap();
    let (_, detail) = records_verdict(&recs);
    (holds, detail)
}

fn substitution() -> Verdict {
    let reports: Vec<_> = ["narumiya_shiga", "inose"]
        .iter()
        .map(|n| verify_substitution_identity(n).unwrap())
        .collect();
    (
        reports.iter().all(|r| r.passed),
        reports.iter().map(|r| format!("{}: {}", r.name, r.passed)).collect::<Vec<_>>().join("; "),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("operator annihilation 60/60", annihilation_60),
        ("twist parameter reduction", twist_params),
        ("hypergeometric table cells", vhs_cells),
        ("fiber regression", fiber_regression),
        ("torsion sections", torsion),
        ("identity suite", identity_suite),
        ("self-duality", self_duality),
        ("Yifan-Yang round trip", yifan_yang_round_trip),
        ("Appell F2 systems", appell_f2),
        ("monodromy relations", monodromy),
        ("substitution identities", substitution),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| (false, "panicked".into()));
        failed += usize::from(!ok);
        println!("{} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
