use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::Laurent;

fn a1() -> Rings {
    Rings::builtin("a1").unwrap()
}

#[test]
fn demazure_examples() {
    let r = a1();
    let a = Poly::var(1, 0);
    assert_eq!(r.demazure(&a, 0).unwrap(), Poly::constant(1, rat(2)));
    assert!(r.demazure(&(&a * &a), 0).unwrap().is_zero());
    assert!(r.demazure(&Poly::one(1), 0).unwrap().is_zero());
    assert!(matches!(r.demazure(&a, 1), Err(BimodError::GeneratorOutOfRange(1))));

    let r = Rings::builtin("a2").unwrap();
    let a1 = Poly::var(2, 0);
    let a2 = Poly::var(2, 1);
    // s1 fixes a1 + 2 a2, the fundamental weight direction.
    let inv = &a1 + &a2.scale(&rat(2));
    assert!(r.demazure(&inv, 0).unwrap().is_zero());
    assert_eq!(r.demazure(&a2, 0).unwrap(), Poly::constant(2, rat(-1)));
}

#[test]
fn splitting_reconstructs() {
    let r = Rings::builtin("a2").unwrap();
    for g in r.r_monomials(8) {
        for s in 0..2 {
            let (g0, g1) = r.split(&g, s).unwrap();
            assert_eq!(&g0 + &(&g1 * r.root(s)), g);
            assert_eq!(r.reflect(s, &g0), g0);
            assert_eq!(r.reflect(s, &g1), g1);
        }
    }
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..=3, 0u32..=3), -5i64..=5, 1i64..=3), 0..5).prop_map(|terms| {
        let mut p = Poly::zero(2);
        for ((i, j), num, den) in terms {
            if i + j <= 6 {
                let m = Poly::monomial(vec![i, j]).scale(&BigRational::new(BigInt::from(num), BigInt::from(den)));
                p = &p + &m;
            }
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn twisted_leibniz(f in arb_poly(), g in arb_poly(), s in 0usize..2) {
        let r = Rings::builtin("a2").unwrap();
        let lhs = r.demazure(&(&f * &g), s).unwrap();
        let rhs = &(&r.demazure(&f, s).unwrap() * &g) + &(&r.reflect(s, &f) * &r.demazure(&g, s).unwrap());
        prop_assert_eq!(lhs, rhs);
        // R^s-linearity: invariants pass through.
        let inv = &f + &r.reflect(s, &f);
        prop_assert_eq!(r.demazure(&(&inv * &g), s).unwrap(), &inv * &r.demazure(&g, s).unwrap());
    }
}

#[test]
fn standard_isomorphisms() {
    let r = a1();
    assert!(std_iso_check(&r, &[], &[], 8).is_ok());
    assert!(std_iso_check(&r, &[], &[0], 8).is_ok());
    let d = Rings::builtin("a1xa1-diag").unwrap();
    assert_eq!(d.wk_elements().len(), 2);
    for x in [vec![], vec![0], vec![1], vec![0, 1]] {
        assert!(std_iso_check(&d, &[0], &x, 8).is_ok(), "{x:?}");
    }
    assert!(std_iso_check(&d, &[3], &[], 8).is_err());
}

#[test]
fn inconsistent_wk_data_is_refused() {
    // W_K acts on P by t -> -t while its word in W is the identity, so phi
    // cannot intertwine the two actions.
    let mut spec = RingSpec::builtin("a1xa1-diag").unwrap();
    spec.wk[0].word = vec![];
    assert!(matches!(Rings::new(spec), Err(BimodError::BadSpec(_))));

    let d = Rings::builtin("a1xa1-diag").unwrap();
    let w = std_iso_check(&d, &[], &[5], 8).unwrap_err();
    assert_eq!(w.check, "x");
}

#[test]
fn tensoring_with_bs() {
    let r = a1();
    let p_e = FreeBimodule::standard(&r, &[]).unwrap();
    let p_s = FreeBimodule::standard(&r, &[0]).unwrap();
    let b = tensor_bs(&r, &p_e, 0).unwrap();
    let c = tensor_bs(&r, &p_s, 0).unwrap();
    assert_eq!(b.degrees, vec![-1, 1]);
    assert_eq!(b.grchar(), Laurent::quantum_two());
    assert_eq!(c.degrees, b.degrees);
    for g in r.r_monomials(8) {
        assert_eq!(b.right_matrix(&r, &g), c.right_matrix(&r, &g));
    }
    b.verify(&r, 8).unwrap();
    assert_eq!(b.label(), "P_e (x) B_s1");
    assert!(tensor_bs(&r, &p_e, 2).is_none());
}

#[test]
fn bs_squared_splits() {
    let r = a1();
    let rep = decompose_bs_squared(&r, 0, 6).unwrap();
    assert_eq!(rep.first_degrees, vec![-2, 0]);
    assert_eq!(rep.second_degrees, vec![0, 2]);
    assert_eq!(rep.grchar, &Laurent::quantum_two() * &Laurent::quantum_two());
    let r2 = Rings::builtin("a2").unwrap();
    assert!(decompose_bs_squared(&r2, 1, 6).is_ok());
}

#[test]
fn bott_samelson_chain_in_a2() {
    let r = Rings::builtin("a2").unwrap();
    let p_e = FreeBimodule::standard(&r, &[]).unwrap();
    let m = tensor_bs(&r, &tensor_bs(&r, &tensor_bs(&r, &p_e, 0).unwrap(), 1).unwrap(), 0).unwrap();
    m.verify(&r, 6).unwrap();
    assert_eq!(m.rank(), 8);
    assert_eq!(m.grchar(), Laurent::quantum_two().pow_for_test(3));
}

trait PowForTest {
    fn pow_for_test(&self, k: u32) -> Laurent;
}

impl PowForTest for Laurent {
    fn pow_for_test(&self, k: u32) -> Laurent {
        (0..k).fold(Laurent::one(), |acc, _| &acc * self)
    }
}

#[test]
fn equivariant_series() {
    let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let s = equivariant_poincare(&[1], &[2], 1, 8).unwrap();
    assert_eq!(s, ints(&[1, 0, 2, 0, 2, 0, 2, 0, 2]));
    assert_eq!(equivariant_poincare(&[1], &[2], 1, 0).unwrap(), ints(&[1]));
    // W_K = W: the answer is the Hilbert series of R.
    assert_eq!(
        equivariant_poincare(&[2, 3], &[2, 3], 2, 6).unwrap(),
        ints(&[1, 0, 2, 0, 3, 0, 4])
    );
    assert!(equivariant_poincare(&[0], &[2], 1, 4).is_err());
}

#[test]
fn full_reports_pass() {
    for name in BUILTIN_RINGS {
        let r = Rings::builtin(name).unwrap();
        let rep = verify_rings(&r, 6);
        for c in &rep.checks {
            assert!(c.passed, "{name}: {} {}", c.name, c.detail);
        }
        assert_eq!(rep.config.grading, GRADING_CONVENTION);
    }
}

#[test]
fn bad_specs_are_rejected() {
    let mut spec = RingSpec::builtin("a1").unwrap();
    spec.reflections[0] = vec![vec![1]];
    assert!(matches!(Rings::new(spec), Err(BimodError::BadSpec(_))));
    let mut spec = RingSpec::builtin("a2").unwrap();
    spec.roots.pop();
    assert!(matches!(Rings::new(spec), Err(BimodError::BadSpec(_))));
    let mut spec = RingSpec::builtin("a1").unwrap();
    spec.phi = vec![vec![1, 0]];
    assert!(matches!(Rings::new(spec), Err(BimodError::BadSpec(_))));
    assert!(matches!(RingSpec::builtin("e8"), Err(BimodError::UnknownBuiltin(_))));
}
