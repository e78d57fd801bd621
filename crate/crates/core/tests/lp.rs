mod common;

use common::names;
use entcopy::entropy::text::render_form;
use entcopy::lp::{
    build_lp, check_optimality, export_lp, parse_lp_export, solve_exact, solve_float, BuildOptions, CopySelection,
    FloatOptions, Status, SymmetryMode,
};
use entcopy::problem::{builtin_ingleton, builtin_vamos_v0, parse_problem};
use entcopy::rational::{int, ratio, to_f64};
use entcopy::shannon::elemental_count;
use entcopy::{LinearForm, Rational, Relation, VarSet};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn opts(symmetry: SymmetryMode) -> BuildOptions {
    BuildOptions { symmetry, ..BuildOptions::default() }
}

#[test]
fn ingleton_row_counts() {
    let p = builtin_ingleton();
    let lp = build_lp(&p, &opts(SymmetryMode::InvarianceEqs)).unwrap();
    assert_eq!(lp.columns.len(), 255);
    assert_eq!(lp.rows.len(), elemental_count(8) + 7 + (13 + 9 + 33) + 1);
    assert_eq!(lp.rows.len(), 1863);
    let off = build_lp(&p, &opts(SymmetryMode::Off)).unwrap();
    assert_eq!(off.rows.len(), 1800 + 55 + 1);
    lp.check().unwrap();
}

#[test]
fn vamos_sizes() {
    let p = builtin_vamos_v0();
    let lp = build_lp(&p, &opts(SymmetryMode::Off)).unwrap();
    assert_eq!(lp.columns.len(), 4095 + 1);
    assert_eq!(*lp.columns.last().unwrap(), VarSet::EPIGRAPH);
    let shannon = lp.rows.iter().filter(|r| r.label.starts_with("elem:")).count();
    assert_eq!(shannon, 12 + 66 * 1024);
    let q = build_lp(&p, &opts(SymmetryMode::Quotient)).unwrap();
    assert!(q.columns.len() * 3 < lp.columns.len());
}

#[test]
fn trivial_problems() {
    let p = parse_problem("var X;\nminimize H(X);\n").unwrap();
    let lp = build_lp(&p, &BuildOptions::default()).unwrap();
    let s = solve_exact(&lp).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert_eq!(s.value, Some(int(0)));
    assert_eq!(s.primal, vec![int(0)]);

    let p = parse_problem("var A;\nconstraint two: H(A) - 2 = 0;\nnormalize H(A) = 1;\nminimize H(A);\n").unwrap();
    let lp = build_lp(&p, &BuildOptions::default()).unwrap();
    assert_eq!(solve_exact(&lp).unwrap().status, Status::Infeasible);
    assert_eq!(solve_float(&lp, &FloatOptions::default()).unwrap().status, Status::Infeasible);

    let p = parse_problem("var A, B;\nminimize H(B) - H(A);\n").unwrap();
    let lp = build_lp(&p, &BuildOptions::default()).unwrap();
    assert_eq!(solve_exact(&lp).unwrap().status, Status::Unbounded);
}

#[test]
fn ingleton_values() {
    let p = builtin_ingleton();
    let lp = build_lp(&p, &BuildOptions::default_for(&p)).unwrap();
    let exact = solve_exact(&lp).unwrap();
    assert_eq!(exact.value, Some(ratio(-3, 19)));
    check_optimality(&lp, &exact).unwrap();
    let float = solve_float(&lp, &FloatOptions::default()).unwrap();
    assert!((float.value.unwrap() + 3.0 / 19.0).abs() < 1e-9);

    let shannon = BuildOptions { copy_steps: CopySelection::None, ..BuildOptions::default_for(&p) };
    let lp = build_lp(&p, &shannon).unwrap();
    assert_eq!(solve_exact(&lp).unwrap().value, Some(ratio(-1, 4)));
}

#[test]
fn export_round_trip_and_determinism() {
    let p = builtin_ingleton();
    let lp = build_lp(&p, &opts(SymmetryMode::InvarianceEqs)).unwrap();
    let a = export_lp(&lp);
    let b = export_lp(&build_lp(&p, &opts(SymmetryMode::InvarianceEqs)).unwrap());
    assert_eq!(a, b);
    let back = parse_lp_export(&a).unwrap();
    assert_eq!(back.columns, lp.columns);
    assert_eq!(back.rows, lp.rows);
    assert_eq!(back.objective, lp.objective);
    assert_eq!(export_lp(&back), a);
    assert_eq!(solve_exact(&back).unwrap().value, Some(ratio(-3, 19)));
}

/// Random problems on three variables normalized by `H(ABC) = 1`.
fn problem_text() -> impl Strategy<Value = String> {
    let form = proptest::collection::vec((1u64..8, -3i64..4), 1..5);
    (form.clone(), proptest::collection::vec((form, -1i64..2), 0..3)).prop_map(|(obj, cons)| {
        let n = names(3);
        let mk = |terms: &[(u64, i64)]| {
            let mut f = LinearForm::zero();
            for (b, c) in terms {
                f.add_term(VarSet::from_bits(*b), int(*c));
            }
            f
        };
        let mut s = String::from("var A, B, C;\n");
        for (k, (terms, konst)) in cons.iter().enumerate() {
            let mut f = mk(terms);
            f.add_constant(&ratio(*konst, 2));
            if f.is_homogeneous() && f.is_zero() {
                continue;
            }
            s += &format!("constraint c{k}: {} >= 0;\n", render_form(&f, &n));
        }
        s += "normalize H(A,B,C) = 1;\n";
        let o = mk(&obj);
        s += &format!("minimize {};\n", if o.is_zero() { "H(A)".into() } else { render_form(&o, &n) });
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_and_float_agree(text in problem_text()) {
        let p = parse_problem(&text).unwrap();
        let lp = build_lp(&p, &BuildOptions::default()).unwrap();
        let e = solve_exact(&lp).unwrap();
        let f = solve_float(&lp, &FloatOptions::default()).unwrap();
        prop_assert_eq!(e.status, f.status, "{}", text);
        if e.status == Status::Optimal {
            let v = e.value.clone().unwrap();
            prop_assert!((to_f64(&v) - f.value.unwrap()).abs() < 1e-7);
            check_optimality(&lp, &e).unwrap();
            // Primal feasibility, evaluated independently of the solver.
            let at = |c: VarSet| e.primal[lp.column_index(c).unwrap()].clone();
            for r in &lp.rows {
                let x: Rational = r.lhs.eval(at);
                match r.relation {
                    Relation::Ge => prop_assert!(!x.is_negative(), "{} = {}", r.label, x),
                    Relation::Eq => prop_assert!(x.is_zero(), "{} = {}", r.label, x),
                }
            }
            prop_assert_eq!(lp.objective.eval(at), v);
        }
    }
}

/// The full 4095-coordinate Vámos LP on the float path. Slow (tens of
/// minutes); run with `--ignored`.
#[test]
#[ignore]
fn vamos_full_float() {
    let p = builtin_vamos_v0();
    let lp = build_lp(&p, &opts(SymmetryMode::Off)).unwrap();
    let s = solve_float(&lp, &FloatOptions::default()).unwrap();
    assert!((s.value.unwrap() - 561.0 / 491.0).abs() < 1e-6, "{:?}", s.value);
}
