//! Acceptance suite: one PASS/FAIL line per criterion, then a nonzero exit
//! status if anything failed. Runs without the libtest harness so the lines
//! are printed even when output capture is on.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

fn cases_runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

use lvhecke::bimod::{decompose_bs_squared, equivariant_poincare, std_iso_check, tensor_bs, FreeBimodule, Poly, Rings};
use lvhecke::coxeter::{CoxeterSystem, Involution, SubgroupSpec};
use lvhecke::fiber::{fiber_table, FiberError, ResolutionSpec};
use lvhecke::hecke::HeckeAlgebra;
use lvhecke::klv::{compute_klv, hat_bs, klv_polynomials, peel, KlvOptions};
use lvhecke::lv::{builtin, gen_complex, CheckStatus, HatVector, LVVector, ValidatedDatum, BUILTIN_NAMES};
use lvhecke::Laurent;

type Outcome = Result<String, String>;

/// Number, title, optional time limit in seconds, and the check itself.
type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn l(s: &str) -> Laurent {
    s.parse().expect("literal parses")
}

fn q() -> Laurent {
    Laurent::q_pow(1)
}

/// All data the suite certifies: packaged data plus generated complex data.
fn all_data() -> Vec<(String, ValidatedDatum)> {
    let mut out: Vec<(String, ValidatedDatum)> = BUILTIN_NAMES
        .iter()
        .map(|n| (format!("builtin:{n}"), builtin(n).expect("builtin loads")))
        .collect();
    for t in ["A1", "A2", "B2", "A3"] {
        out.push((format!("complex {t}"), gen_complex(t).expect("complex datum")));
    }
    out
}

fn hecke_relations() -> Outcome {
    let mut count = 0;
    for (name, d) in all_data() {
        let r = d.report();
        ensure(r.quadratic == CheckStatus::Passed, || {
            format!("{name}: validator quadratic {:?}", r.quadratic)
        })?;
        let braid_ok = match d.rank() {
            1 => r.braid == CheckStatus::NotApplicable,
            _ => r.braid == CheckStatus::Passed,
        };
        ensure(braid_ok, || format!("{name}: validator braid {:?}", r.braid))?;
        // Recheck both relations directly on every basis parameter.
        let q = q();
        let q1 = &q - &Laurent::one();
        for i in 0..d.len() {
            let x = LVVector::basis(i);
            for s in 0..d.rank() {
                let once = d.apply_ts(&x, s).map_err(|e| e.to_string())?;
                let twice = d.apply_ts(&once, s).map_err(|e| e.to_string())?;
                let want = &once.scale(&q1) + &x.scale(&q);
                ensure(twice == want, || format!("{name}: T_s^2 at {} s={s}", d.param(i).id))?;
                count += 1;
                for t in (s + 1)..d.rank() {
                    let m = d.system().m(s, t) as usize;
                    if m == 0 {
                        continue;
                    }
                    let word =
                        |a: usize, b: usize| -> Vec<usize> { (0..m).map(|k| if k % 2 == 0 { a } else { b }).collect() };
                    let lhs = d.apply_ts_word(&x, &word(s, t)).map_err(|e| e.to_string())?;
                    let rhs = d.apply_ts_word(&x, &word(t, s)).map_err(|e| e.to_string())?;
                    ensure(lhs == rhs, || format!("{name}: braid ({s},{t}) at {}", d.param(i).id))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} relation instances on 7 data"))
}

fn sl2r_golden() -> Outcome {
    let d = builtin("sl2r").map_err(|e| e.to_string())?;
    let v = |terms: &[(&str, Laurent)]| d.vector(terms.iter().map(|(id, c)| (*id, c.clone()))).unwrap();
    let ts = |id: &str| d.apply_ts(&d.basis(id).unwrap(), 0).unwrap();
    let bs = |id: &str| d.apply_bs(&d.basis(id).unwrap(), 0).unwrap();
    let q = q();
    let q1 = &q - &Laurent::one();
    let ts_cases = [
        ("Q0", v(&[("Qinf", l("1")), ("O_triv", l("1"))])),
        ("Qinf", v(&[("Q0", l("1")), ("O_triv", l("1"))])),
        (
            "O_triv",
            v(&[("O_triv", &q - &Laurent::constant(2)), ("Q0", q1.clone()), ("Qinf", q1)]),
        ),
        ("O_sgn", v(&[("O_sgn", l("-1"))])),
    ];
    for (id, want) in ts_cases {
        ensure(ts(id) == want, || format!("T_s {id} = {}", d.render(&ts(id))))?;
    }
    let all = |c: &str| v(&[("Q0", l(c)), ("Qinf", l(c)), ("O_triv", l(c))]);
    let bs_cases = [
        ("Q0", all("v")),
        ("Qinf", all("v")),
        ("O_triv", all("v^-1 - v")),
        ("O_sgn", LVVector::zero()),
    ];
    for (id, want) in bs_cases {
        ensure(bs(id) == want, || format!("b_s {id} = {}", d.render(&bs(id))))?;
    }
    Ok("4 T_s lines and 4 b_s lines exact".into())
}

fn sl2r_klv() -> Outcome {
    let d = builtin("sl2r").map_err(|e| e.to_string())?;
    let t = compute_klv(&d, &KlvOptions::default()).map_err(|e| e.to_string())?;
    let trivial = d.trivial_block();
    let resolved: Vec<&str> = t
        .resolved()
        .into_iter()
        .filter(|i| trivial.contains(i))
        .map(|i| d.param(i).id.as_str())
        .collect();
    let want: BTreeSet<&str> = ["Q0", "Qinf", "O_triv"].into();
    ensure(
        resolved.len() == 3 && resolved.iter().copied().collect::<BTreeSet<_>>() == want,
        || format!("trivial block resolved {resolved:?}"),
    )?;
    let o = d.index_of("O_triv").unwrap();
    let mut c = HatVector::basis(o);
    c.add_term(d.index_of("Q0").unwrap(), l("v"));
    c.add_term(d.index_of("Qinf").unwrap(), l("v"));
    let got = &t.get(o).unwrap().vector;
    ensure(*got == c, || format!("C_O = {}", d.render_hat(got)))?;
    let polys = klv_polynomials(&d, &t).map_err(|e| e.to_string())?;
    ensure(polys.values().all(|p| p.to_string() == "1"), || {
        "a KLV polynomial differs from 1".into()
    })?;
    let sgn = d.index_of("O_sgn").unwrap();
    ensure(d.blocks().contains(&vec![sgn]), || {
        "the Moebius parameter is not alone in its block".into()
    })?;
    ensure(d.apply_bs(&LVVector::basis(sgn), 0).unwrap().is_zero(), || {
        "b_s on O_sgn is nonzero".into()
    })?;
    Ok(format!(
        "C_O_triv = {}; {} KLV polynomials all 1",
        d.render_hat(got),
        polys.len()
    ))
}

fn kl_equivalence() -> Outcome {
    let mut total = 0;
    for ty in ["A1", "A2", "B2", "A3"] {
        let d = gen_complex(ty).map_err(|e| e.to_string())?;
        let t = compute_klv(&d, &KlvOptions::default()).map_err(|e| e.to_string())?;
        ensure(t.resolved().len() == d.len(), || {
            format!("{ty}: {} of {} resolved", t.resolved().len(), d.len())
        })?;
        let h = HeckeAlgebra::new(d.system().clone());
        for x in d.system().enumerate().map_err(|e| e.to_string())? {
            let b = h.kl_basis(x).map_err(|e| e.to_string())?;
            let mut want = HatVector::zero();
            for (y, c) in b.iter() {
                want.add_term(d.index_of(&y.to_string()).unwrap(), c.clone());
            }
            let got = &t.get(d.index_of(&x.to_string()).unwrap()).unwrap().vector;
            ensure(*got == want, || {
                format!("{ty} {x}: {} vs {}", d.render_hat(got), d.render_hat(&want))
            })?;
            total += 1;
        }
        if ty == "A3" {
            ensure(d.len() == 24, || format!("A3 has {} parameters", d.len()))?;
        }
    }
    Ok(format!("{total} classes equal to KL basis elements"))
}

fn block_partition() -> Outcome {
    let sizes = |name: &str| -> Vec<usize> {
        let mut s: Vec<usize> = builtin(name).unwrap().blocks().iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    };
    ensure(sizes("sl2r") == vec![3, 1], || {
        format!("sl2r blocks {:?}", sizes("sl2r"))
    })?;
    ensure(sizes("psl2r") == vec![3], || {
        format!("psl2r blocks {:?}", sizes("psl2r"))
    })?;
    Ok("sl2r = {3, 1}, psl2r = {3}".into())
}

fn table(d: &ValidatedDatum, json: &str) -> Result<Vec<(String, String)>, String> {
    let spec = ResolutionSpec::from_json(json).map_err(|e| e.to_string())?;
    let t = fiber_table(d, &spec).map_err(|e| e.to_string())?;
    Ok(t.into_iter().map(|(o, f)| (o, f.to_string())).collect())
}

fn fiber_formula() -> Outcome {
    let d = builtin("sl2r").map_err(|e| e.to_string())?;
    let all = |s: &str| {
        vec![
            ("Q0".to_string(), s.to_string()),
            ("Qinf".into(), s.into()),
            ("O".into(), s.into()),
        ]
    };
    let iso = table(&d, r#"{"x0": "Q0", "xs": [[0]], "Js": [[]], "J": [], "I": []}"#)?;
    ensure(iso == all("1"), || format!("length-one resolution gave {iso:?}"))?;
    for seed in ["Q0", "O_triv"] {
        let got = table(&d, &format!(r#"{{"x0": "{seed}"}}"#))?;
        let closure = d.orbits_below(&d.param(d.index_of(seed).unwrap()).orbit).unwrap();
        for (orbit, f) in &got {
            let want = if closure.contains(orbit) { "1" } else { "0" };
            ensure(f == want, || format!("identity resolution of {seed} over {orbit}: {f}"))?;
        }
    }
    let locked = table(&d, r#"{"x0": "Q0", "xs": [[0]], "Js": [[]], "J": [], "I": [0]}"#)?;
    ensure(locked == all("1 + v^-2"), || {
        format!("I = {{s}} example gave {locked:?}")
    })?;

    // NonDivisible must never fire on a conforming spec over packaged data.
    let mut ok = 0;
    for name in BUILTIN_NAMES {
        let d = builtin(name).unwrap();
        for p in d.params() {
            for (xs, js) in [
                ("[]", "[]"),
                ("[[0]]", "[[]]"),
                ("[[0]]", "[[0]]"),
                ("[[0], [0]]", "[[], [0]]"),
            ] {
                for j in ["[]", "[0]"] {
                    for i in ["[]", "[0]"] {
                        let json = format!(r#"{{"x0": "{}", "xs": {xs}, "Js": {js}, "J": {j}, "I": {i}}}"#, p.id);
                        let spec = ResolutionSpec::from_json(&json).unwrap();
                        match fiber_table(&d, &spec) {
                            Ok(_) => ok += 1,
                            Err(FiberError::SpecViolation(_)) => {}
                            Err(e) => return Err(format!("{name} {json}: {e}")),
                        }
                    }
                }
            }
        }
    }
    Ok(format!("examples match; {ok} conforming specs divided exactly"))
}

fn bimodules() -> Outcome {
    const N: u32 = 8;
    let a1 = Rings::builtin("a1").map_err(|e| e.to_string())?;
    let rep = decompose_bs_squared(&a1, 0, N).map_err(|w| w.to_string())?;
    ensure(
        rep.first_degrees == vec![-2, 0] && rep.second_degrees == vec![0, 2],
        || format!("summand degrees {:?} / {:?}", rep.first_degrees, rep.second_degrees),
    )?;
    for x in [vec![], vec![0]] {
        let m = FreeBimodule::standard(&a1, &x).unwrap();
        let t = tensor_bs(&a1, &m, 0).unwrap();
        t.verify(&a1, N).map_err(|w| w.to_string())?;
        let want = &Laurent::quantum_two() * &m.grchar();
        ensure(t.grchar() == want, || format!("grchar({}) = {}", t.label(), t.grchar()))?;
    }
    let diag = Rings::builtin("a1xa1-diag").map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for w in diag.wk_elements() {
        for x in [vec![], vec![0], vec![1], vec![0, 1]] {
            std_iso_check(&diag, &w, &x, N).map_err(|e| e.to_string())?;
            pairs += 1;
        }
    }
    Ok(format!(
        "B_s^2 = B_s(1) + B_s(-1); characters of P_e, P_s; {pairs} standard isomorphisms"
    ))
}

fn cosets() -> Outcome {
    let sys = CoxeterSystem::from_cartan("A1").map_err(|e| e.to_string())?;
    let reps = sys
        .coset_reps(&Involution::identity(1), &SubgroupSpec { generators: vec![] })
        .map_err(|e| e.to_string())?;
    let d = builtin("sl2r").unwrap();
    let closed = d.params().iter().filter(|p| p.closed && p.trivial).count();
    ensure(reps.len() == 2 && closed == 2, || {
        format!("{} cosets vs {closed} closed orbits", reps.len())
    })?;
    ensure(d.report().cosets == Some(2), || {
        format!("datum reports {:?}", d.report().cosets)
    })?;
    let names: Vec<String> = reps.iter().map(ToString::to_string).collect();
    Ok(format!("cosets {names:?} match 2 closed orbits"))
}

fn poincare_series() -> Outcome {
    let got = equivariant_poincare(&[1], &[2], 1, 20).map_err(|e| e.to_string())?;
    // (1 + t^2)/(1 - t^2) = (1 + t^2) * sum_k t^(2k), expanded directly.
    let mut want = vec![BigInt::from(0); 21];
    for k in (0..=20).step_by(2) {
        want[k] += 1;
        if k + 2 <= 20 {
            want[k + 2] += 1;
        }
    }
    ensure(got == want, || format!("{got:?}"))?;
    Ok("1 + 2t^2 + 2t^4 + ... through t^20".into())
}

fn laurent_strategy() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-6i64..=6, -20i64..=20), 0..6).prop_map(Laurent::from_terms)
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..=3, 0u32..=3), -5i64..=5, 1i64..=3), 0..5).prop_map(|terms| {
        let mut p = Poly::zero(2);
        for ((i, j), num, den) in terms {
            let c = BigRational::new(BigInt::from(num), BigInt::from(den));
            p = &p + &Poly::monomial(vec![i, j]).scale(&c);
        }
        p
    })
}

fn properties() -> Outcome {
    let mut runner = cases_runner(1000);
    let triple = (laurent_strategy(), laurent_strategy(), laurent_strategy());
    runner
        .run(&triple, |(a, b, c)| {
            let zero = Laurent::zero();
            let one = Laurent::one();
            let checks = [
                (&(&a + &b) + &c == &a + &(&b + &c), "additive associativity"),
                (&a + &b == &b + &a, "additive commutativity"),
                (&a + &zero == a, "additive identity"),
                ((&a + &(-&a)).is_zero(), "additive inverse"),
                (&(&a * &b) * &c == &a * &(&b * &c), "multiplicative associativity"),
                (&a * &b == &b * &a, "multiplicative commutativity"),
                (&a * &one == a, "multiplicative identity"),
                (&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributivity"),
                ((&a * &b).bar() == &a.bar() * &b.bar(), "bar is multiplicative"),
                (a.bar().bar() == a, "bar is an involution"),
            ];
            for (ok, what) in checks {
                if !ok {
                    return Err(TestCaseError::fail(format!("{what}: a = {a}, b = {b}, c = {c}")));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;

    let a2 = Rings::builtin("a2").map_err(|e| e.to_string())?;
    let mut runner = cases_runner(200);
    runner
        .run(&(poly_strategy(), poly_strategy(), 0usize..2), |(f, g, s)| {
            let lhs = a2.demazure(&(&f * &g), s).unwrap();
            let rhs = &(&a2.demazure(&f, s).unwrap() * &g) + &(&a2.reflect(s, &f) * &a2.demazure(&g, s).unwrap());
            if lhs != rhs {
                return Err(TestCaseError::fail(format!(
                    "s{}: f = {}, g = {}",
                    s + 1,
                    a2.render_r(&f),
                    a2.render_r(&g)
                )));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;

    let mut peels = 0;
    let data: Vec<ValidatedDatum> = BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).unwrap())
        .chain([gen_complex("A2").unwrap()])
        .collect();
    for d in &data {
        let t = compute_klv(d, &KlvOptions::default()).map_err(|e| e.to_string())?;
        let mut layer: Vec<HatVector> = t.classes().map(|c| c.vector.clone()).collect();
        for _ in 0..6 {
            let mut next = Vec::new();
            for x in &layer {
                for s in 0..d.rank() {
                    let y = hat_bs(d, x, s).map_err(|e| e.to_string())?;
                    let p = peel(d, &y, &t).map_err(|e| format!("{}: {e}", d.render_hat(&y)))?;
                    for (i, m) in &p.multiplicities {
                        ensure(m.is_bar_symmetric() && m.is_nonnegative(), || {
                            format!("multiplicity {m} of {} in {}", d.param(*i).id, d.render_hat(&y))
                        })?;
                    }
                    peels += 1;
                    next.push(y);
                }
            }
            layer = next;
        }
    }
    Ok(format!(
        "1000 ring-axiom cases, 200 Leibniz cases, {peels} peeled products"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "Hecke relation certification", Some(5), hecke_relations),
        (2, "SL(2,R) golden T_s and b_s vectors", None, sl2r_golden),
        (3, "SL(2,R) canonical classes", None, sl2r_klv),
        (4, "KL oracle equivalence for A1, A2, B2, A3", Some(10), kl_equivalence),
        (5, "block partition", None, block_partition),
        (6, "fiber formula", None, fiber_formula),
        (7, "bimodule verifications at N = 8", Some(5), bimodules),
        (8, "coset combinatorics", None, cosets),
        (9, "equivariant Poincare series", None, poincare_series),
        (10, "property suite", None, properties),
    ];
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(secs)) if elapsed > Duration::from_secs(secs) => {
                Err(format!("took {:.2} s, limit {secs} s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!(
            "{tag} criterion {n:>2}: {name} [{:.2} s] {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
