//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use num_bigint::BigInt;
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twistcalc_core::cobordism::{self, PatternMode};
use twistcalc_core::layers;
use twistcalc_core::linalg::{self, AbelianGroup, Inertia};
use twistcalc_core::mcg::{self, Sl2, Slope, TwistWord};
use twistcalc_core::plumbing::{self, catalog};
use twistcalc_core::seifert::{self, ScanOptions};
use twistcalc_core::{parse_word, CatalogId, Parallelism};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn eval(text: &str) -> Sl2 {
    mcg::eval_word(&parse_word(text).expect("well-formed word"))
}

fn ac1() -> Outcome {
    ensure(eval("a b a") == eval("b a b"), || "aba != bab".into())?;
    for w in ["(a b)^6", "(a^3 b)^3", "(b^3 a)^3"] {
        ensure(eval(w).is_identity(), || format!("{w} is not the identity"))?;
    }
    Ok(())
}

fn ac2() -> Outcome {
    let long = "a^4 b a^3 b a^3 b^4 a b^3 a b^3";
    ensure(eval("a (a^3 b)^3 (b^3 a)^3 a^-1").is_identity(), || "conjugated relation".into())?;
    ensure(eval(long).is_identity(), || format!("{long} is not the identity"))?;
    for n in 1..=5i64 {
        let c = format!("(b^{n} a b^-{n})");
        let spelled = format!("{c}^4 b {c}^3 b {c}^3 b^4 {c} b^3 {c} b^3");
        ensure(eval(&spelled).is_identity(), || format!("n = {n}: spelled word"))?;
        let w = mcg::conjugate_word(&parse_word(long).unwrap(), &TwistWord::b(n));
        ensure(mcg::eval_word(&w).is_identity(), || format!("n = {n}: conjugate"))?;
        let want: Vec<Slope> = (0..10)
            .map(|k| if k % 2 == 0 { Slope::integer(-n) } else { Slope::infinity() })
            .collect();
        let got = mcg::layer_slopes(&w);
        ensure(got == want, || format!("n = {n}: slopes {got:?}"))?;
    }
    Ok(())
}

fn ac3() -> Outcome {
    let m = plumbing::intersection_matrix(&catalog(&CatalogId::Plum).unwrap());
    let det = linalg::det_exact(&m).map_err(|e| e.to_string())?;
    ensure(det == BigInt::from(-3), || format!("det {det}"))?;
    let i = linalg::inertia(&m).map_err(|e| e.to_string())?;
    ensure(i.n_plus >= 1, || "no positive direction".into())?;
    ensure(i == Inertia::new(1, 0, 7), || format!("inertia {i:?}"))?;
    ensure(charpoly_inertia(&to_i128_rows(&m)) == (1, 0, 7), || "charpoly oracle disagrees".into())
}

fn ac4() -> Outcome {
    for (i, id) in [(6i64, CatalogId::E6Tilde), (7, CatalogId::E7Tilde), (8, CatalogId::E8Tilde)] {
        let g = catalog(&id).unwrap();
        let h = plumbing::boundary_homology(&g);
        ensure(h == AbelianGroup::from_cyclic_orders(&[0, 9 - i]), || format!("{id}: {h}"))?;
        let lens = g.reweight(g.arrow().unwrap(), -1).map_err(|e| e.to_string())?;
        let det = linalg::det_exact(&plumbing::intersection_matrix(&lens)).unwrap();
        ensure(det == BigInt::from(9 - i) || det == BigInt::from(i - 9), || format!("{id}: lens det {det}"))?;
    }
    Ok(())
}

fn ac5() -> Outcome {
    for n in 1..=6 {
        let h = plumbing::boundary_homology(&catalog(&CatalogId::VillaA(n)).unwrap()).to_string();
        let want = if n % 2 == 1 { "Z + Z/4" } else { "Z + Z/2 + Z/2" };
        ensure(h == want, || format!("n = {n}: {h}"))?;
    }
    let zero = plumbing::boundary_homology(&catalog(&CatalogId::VillaA(0)).unwrap());
    let star = plumbing::boundary_homology(&catalog(&CatalogId::SeifParabolic).unwrap());
    ensure(zero == star, || format!("n = 0: {zero} vs {star}"))
}

fn ac6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let d = random_seifert(&mut rng);
        let opts = ScanOptions { mode: Parallelism::Parallel, ..ScanOptions::default() };
        let r = seifert::lspace_check(&d, &opts).map_err(|e| e.to_string())?;
        ensure(r.applicable, || format!("{d}: a <= 2g"))?;
        for v in &r.tuples {
            let once = v.scan.changes == 1 && v.scan.tail_certain;
            ensure(once, || format!("{d} {:?}: {} changes", v.params, v.scan.changes))?;
            ensure(v.unique_min == once, || format!("{d} {:?}: unique min disagrees", v.params))?;
        }
    }
    Ok(())
}

fn ac7() -> Outcome {
    let fires = |w: &TwistWord| {
        cobordism::gamma_pattern(w, PatternMode::Strict, Parallelism::Sequential).map(|c| c.found)
    };
    let long = parse_word("a^4 b a^3 b a^3 b^4 a b^3 a b^3").unwrap();
    ensure(fires(&long) == Ok(true), || "long identity word".into())?;
    ensure(fires(&cobordism::gamma_word()) == Ok(true), || "gamma".into())?;
    ensure(fires(&parse_word("a^3 b a^3 b").unwrap()) == Ok(false), || "a^3 b a^3 b".into())?;
    let c = cobordism::b2plus_certificate(&long, PatternMode::Strict, Parallelism::Sequential)
        .map_err(|e| e.to_string())?;
    ensure(c.plumbing == Some(catalog(&CatalogId::Plum).unwrap()), || "plumbing missing".into())?;
    ensure(c.det == Some(BigInt::from(-3)), || format!("det {:?}", c.det))?;
    ensure(c.inertia == Some(Inertia::new(1, 0, 7)), || format!("inertia {:?}", c.inertia))
}

fn ac8() -> Outcome {
    let t = layers::reduce_torsion_script(1).map_err(|e| e.to_string())?;
    let i = Slope::integer;
    let want = vec![
        (i(0), i(-1)),
        (i(0), i(0)),
        (i(0), i(1)),
        (i(0), i(2)),
        (Slope::infinity(), i(2)),
        (i(0), i(-2)),
    ];
    let got = t.slope_sequence();
    ensure(got == want, || format!("trace {got:?}"))?;
    ensure(t.accumulated_matrix().is_identity(), || format!("accumulated {}", t.accumulated))?;
    ensure(eval("(B^3 A)^3").is_identity(), || "(B^3 A)^3".into())
}

fn ac9() -> Outcome {
    let m = Sl2::new(BigInt::from(1), BigInt::from(-1), BigInt::from(0), BigInt::from(1)).unwrap();
    for n in 1..=10i64 {
        let s = mcg::act_on_slope(&m, &Slope::new(n, -1).unwrap());
        ensure(s == Slope::new(n + 1, -1).unwrap(), || format!("n = {n}: {s}"))?;
    }
    Ok(())
}

const CASES: u32 = 1000;

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>,
) -> Outcome {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, check).map_err(|e| format!("{name}: {e}"))
}

fn ac10() -> Outcome {
    run_property("snf", small_matrix(5, 9), |m| check_snf(&m))?;
    run_property(
        "slide inertia",
        (symmetric_matrix(6, 5), 0usize..6, 0usize..6, -3i64..=3),
        |(m, i, j, c)| check_slide_inertia(&m, i, j, c),
    )?;
    run_property("twist conjugation", (sl2(), slope()), |(m, c)| check_twist_conjugation(&m, &c))?;
    run_property("h telescoping", (seifert_and_params(), -40i64..40), |((d, p), s)| {
        check_h_telescoping(&d, &p, s)
    })?;
    run_property("normalize", decomposition(), |d| check_normalize(&d))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1  relations aba = bab, (ab)^6, (a^3 b)^3, (b^3 a)^3", ac1),
        ("AC2  long identity word, conjugates n = 1..5 and their slopes", ac2),
        ("AC3  eight-vertex plumbing det -3, inertia (1,0,7)", ac3),
        ("AC4  elliptic plumbings H1 = Z + Z/(9-i), lens fillings", ac4),
        ("AC5  Klein bottle bundles H1 by parity, n = 0 case", ac5),
        ("AC6  Seifert scans on 20 random instances with a > 2g", ac6),
        ("AC7  gamma pattern and b2+ certificate", ac7),
        ("AC8  torsion reduction slope trace and (B^3 A)^3 = 1", ac8),
        ("AC9  inverse twist on slopes -1/n, n = 1..10", ac9),
        ("AC10 property suites, 1000 cases each", ac10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        match f() {
            Ok(()) => println!("{name} ... PASS ({:.2?})", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("{name} ... FAIL: {why}");
            }
        }
    }
    println!("{} of 10 criteria passed in {:.2?}", 10 - failed, start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
