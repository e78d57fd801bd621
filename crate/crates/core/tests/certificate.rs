mod common;

use std::time::Instant;

use common::{data, random_dist, vs};
use entcopy::certificate::{implied_bound, Certificate};
use entcopy::lp::{build_lp, solve_exact, BuildOptions, CopySelection, SymmetryMode};
use entcopy::oracle::{copy_extend, entropy_profile};
use entcopy::problem::{builtin, builtin_ingleton};
use entcopy::rational::{int, ratio};
use entcopy::{Error, LinearForm, Relation, VarSet};
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shipped(name: &str) -> Certificate {
    Certificate::parse(&std::fs::read_to_string(data(&format!("certificates/{name}.cert"))).unwrap()).unwrap()
}

fn lp_for(cert: &Certificate) -> entcopy::lp::Lp {
    build_lp(&builtin(&cert.problem).unwrap(), &cert.options.parse().unwrap()).unwrap()
}

/// `(c, d)` with `target = c·Ing(A,B,C,D) + d·H(A,B,C,D)`.
fn ingleton_split(target: &LinearForm) -> (entcopy::Rational, entcopy::Rational) {
    let ing = LinearForm::ingleton(vs(&[0]), vs(&[1]), vs(&[2]), vs(&[3])).unwrap();
    let c = target.coefficient(vs(&[0, 1]));
    let rest = target.clone() - ing.scale(&c);
    assert_eq!(rest.len(), 1, "target is not c·Ing + d·H(ABCD)");
    (c, rest.coefficient(vs(&[0, 1, 2, 3])))
}

#[test]
fn shipped_ingleton_certificate() {
    let cert = shipped("ingleton");
    let lp = lp_for(&cert);
    let t = Instant::now();
    assert_eq!(cert.check(&lp).unwrap(), ratio(-3, 19));
    assert!(t.elapsed().as_secs_f64() < 1.0);
    let (c, d) = ingleton_split(&cert.target);
    assert!(c.is_positive());
    assert_eq!(d / c, ratio(3, 19));
    assert_eq!(int(711) * int(19), int(4503) * int(3));
}

#[test]
fn shipped_vamos_certificate() {
    let cert = shipped("vamos-v0");
    let lp = lp_for(&cert);
    let t = Instant::now();
    assert_eq!(cert.check(&lp).unwrap(), ratio(561, 491));
    assert!(t.elapsed().as_secs_f64() < 10.0);
    // t - 561/491·H(S0) >= 0, up to a positive scale.
    let k = cert.target.coefficient(VarSet::EPIGRAPH);
    assert!(k.is_positive());
    assert_eq!(cert.target.len(), 2);
    assert_eq!(cert.target.coefficient(vs(&[0])) / k, ratio(-561, 491));
}

#[test]
fn solver_certificates() {
    let p = builtin_ingleton();
    let opts = BuildOptions::default_for(&p);
    let lp = build_lp(&p, &opts).unwrap();
    let cert = Certificate::from_solution(&lp, &solve_exact(&lp).unwrap()).unwrap();
    assert_eq!(cert.check(&lp).unwrap(), ratio(-3, 19));
    assert!(cert.entries.iter().all(|(l, _)| l != "problem:normalize"));

    for symmetry in [SymmetryMode::Quotient, SymmetryMode::Off] {
        let lp = build_lp(&p, &BuildOptions { symmetry, ..opts.clone() }).unwrap();
        let sol = solve_exact(&lp).unwrap();
        let cert = Certificate::from_solution(&lp, &sol).unwrap();
        assert_eq!(cert.check(&lp).unwrap(), sol.value.unwrap());
    }

    let lp = build_lp(&p, &BuildOptions { symmetry: SymmetryMode::Off, copy_steps: CopySelection::None, ..opts }).unwrap();
    let cert = Certificate::from_solution(&lp, &solve_exact(&lp).unwrap()).unwrap();
    assert_eq!(cert.check(&lp).unwrap(), ratio(-1, 4));
    assert!(cert.entries.iter().all(|(l, _)| l.starts_with("elem:")));
    let (c, d) = ingleton_split(&cert.target);
    assert_eq!(d / c, ratio(1, 4));
}

#[test]
fn empty_and_perturbed() {
    let empty = Certificate {
        problem: "x".into(),
        options: String::new(),
        variables: vec!["A".into()],
        entries: vec![],
        target: LinearForm::zero(),
        bound: None,
    };
    assert!(empty.verify(&[]).unwrap().passed());

    let cert = shipped("ingleton");
    let lp = lp_for(&cert);
    let mut bad = cert.clone();
    bad.entries[3].1 += int(1);
    let report = bad.verify(&lp.unreduced().rows).unwrap();
    assert!(!report.passed());
    assert!(!report.residual.is_zero());
    assert!(bad.check(&lp).is_err());

    let mut neg = cert.clone();
    let k = neg.entries.iter().position(|(l, _)| lp.unreduced().row(l).unwrap().relation == Relation::Ge).unwrap();
    neg.entries[k].1 = -neg.entries[k].1.clone();
    assert!(!neg.verify(&lp.unreduced().rows).unwrap().sign_violations.is_empty());

    let mut wrong_bound = cert.clone();
    wrong_bound.bound = Some(ratio(-1, 7));
    assert!(wrong_bound.check(&lp).is_err());
}

#[test]
fn text_format() {
    let cert = shipped("ingleton");
    let text = cert.emit();
    assert_eq!(Certificate::parse(&text).unwrap(), cert);

    let mut zero = cert.clone();
    zero.entries.push(("elem:H(A|*)".into(), int(0)));
    assert!(!zero.emit().contains("factor 0 "));
    assert_eq!(Certificate::parse(&zero.emit()).unwrap(), cert);

    let mut unknown = cert.clone();
    unknown.entries.push(("elem:I(9;9|{})".into(), int(1)));
    let back = Certificate::parse(&unknown.emit()).unwrap();
    let lp = lp_for(&cert);
    assert!(matches!(back.verify(&lp.unreduced().rows), Err(Error::UnknownLabel(_))));

    let tampered = text.replace("copy-steps=all", "copy-steps=none");
    assert!(Certificate::parse(&tampered).is_err());
    assert!(Certificate::parse("# entcopy certificate\nproblem x\n").is_err());
}

#[test]
fn implied_bound_needs_matching_target() {
    let p = builtin_ingleton();
    let lp = build_lp(&p, &BuildOptions::default_for(&p)).unwrap();
    let cert = shipped("ingleton");
    assert_eq!(implied_bound(&cert.target, &lp).unwrap(), ratio(-3, 19));
    assert!(implied_bound(&LinearForm::coord(vs(&[0])).unwrap(), &lp).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// The certified inequality holds on entropy profiles of actual
    /// distributions, and every Ingleton LP row except the normalization
    /// holds on profiles extended by the constructive copies.
    #[test]
    fn certified_inequality_is_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_dist(&mut rng, 4, 3);
        let h = entropy_profile(&d);
        let cert = shipped("ingleton");
        let v = cert.target.eval_f64(|c| h[&c]);
        prop_assert!(v >= -1e-9, "target {v}");

        let p = builtin_ingleton();
        let mut e = d.clone();
        for step in &p.copy_steps {
            e = copy_extend(&e, step).unwrap();
        }
        let he = entropy_profile(&e);
        let lp = build_lp(&p, &BuildOptions { symmetry: SymmetryMode::Off, ..BuildOptions::default() }).unwrap();
        for r in lp.rows.iter().filter(|r| r.label != "problem:normalize") {
            let x = r.lhs.eval_f64(|c| he[&c]);
            match r.relation {
                Relation::Ge => prop_assert!(x >= -1e-9, "{} = {x}", r.label),
                Relation::Eq => prop_assert!(x.abs() <= 1e-9, "{} = {x}", r.label),
            }
        }
    }
}
