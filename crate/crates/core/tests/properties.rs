//! Randomized invariants over parameter points and algebra elements.

use proptest::prelude::*;
use qlorentz::check::all_passed;
use qlorentz::cli::SuiteConfig;
use qlorentz::frt::checks::random_elements;
use qlorentz::frt::{antipode, antipode_inverse, coproduct, counit, AlgebraElement};
use qlorentz::minkspace::{Bimodule, ModuleSymbol};
use qlorentz::params::{make_params, ParameterSet, Sign};
use qlorentz::rmat::{make_r, verify_all};
use qlorentz::scalar::Scalar;
use qlorentz::sigma::{make_metric, make_sigma, verify};
use qlorentz::tensor::make_spinor_metric;

fn point() -> impl Strategy<Value = (String, String, Sign)> {
    let q = (1i64..=9, 1i64..=9).prop_map(|(n, d)| format!("{n}/{d}"));
    let r = (-4i64..=4, 5i64..=9).prop_map(|(n, d)| format!("{n}/{d}"));
    let s = prop_oneof![Just(Sign::Plus), Just(Sign::Minus)];
    (q, r, s)
}

fn params((q, r, s): &(String, String, Sign)) -> ParameterSet {
    make_params(q.as_str(), r.as_str(), *s, 40).expect("|r| < 1 and q > 0 give Q >= 2")
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn contraction_of_the_spinor_metric_is_minus_q(pt in point()) {
        let p = params(&pt);
        let m = make_spinor_metric(&p);
        let mut acc = p.zero();
        for a in 0..2 {
            for b in 0..2 {
                acc += m.eps_upper.get(&[a, b]) * m.eps_lower.get(&[a, b]);
            }
        }
        let q = Scalar::new(p.big_q.clone(), p.real(0));
        prop_assert!((acc + q).abs() <= p.tolerance);
    }

    #[test]
    fn r_matrix_identities_hold(pt in point()) {
        let p = params(&pt);
        let m = make_spinor_metric(&p);
        let rm = make_r(&p, &m).unwrap();
        let checks = verify_all(&p, &m, &rm).unwrap();
        let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).map(|c| c.id.clone()).collect();
        prop_assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn sigma_layer_identities_hold(pt in point()) {
        let p = params(&pt);
        let m = make_spinor_metric(&p);
        let rm = make_r(&p, &m).unwrap();
        let ss = make_sigma(&p, &m, &rm).unwrap();
        let mm = make_metric(&p, &m, &ss).unwrap();
        prop_assert!(all_passed(&verify(&p, &m, &rm, &ss, &mm).unwrap()));
    }

    #[test]
    fn star_is_an_antimultiplicative_involution(seed in any::<u64>()) {
        let p = make_params("2", "1/3", Sign::Plus, 40).unwrap();
        let xs = random_elements(p.prec, 2, seed);
        prop_assert!(xs[0].star().star().sub(&xs[0]).max_abs() <= p.tolerance);
        let lhs = xs[0].mul(&xs[1]).star();
        let rhs = xs[1].star().mul(&xs[0].star());
        prop_assert!(lhs.sub(&rhs).max_abs() <= p.tolerance);
    }

    #[test]
    fn counit_and_antipode_laws_on_free_words(seed in any::<u64>()) {
        let p = make_params("2", "1/3", Sign::Minus, 40).unwrap();
        let m = make_spinor_metric(&p);
        let xs = random_elements(p.prec, 2, seed);
        let (x, y) = (&xs[0], &xs[1]);
        prop_assert!((counit(&x.mul(y)) - counit(x) * counit(y)).abs() <= p.tolerance);
        prop_assert!(antipode_inverse(&antipode(x, &m), &m).sub(x).max_abs() <= p.tolerance);
        // S(xy) = S(y)S(x)
        let lhs = antipode(&x.mul(y), &m);
        let rhs = antipode(y, &m).mul(&antipode(x, &m));
        prop_assert!(lhs.sub(&rhs).max_abs() <= p.tolerance);
        // (ε ⊗ id)Δ = id = (id ⊗ ε)Δ
        let eps = |w: &qlorentz::frt::Word| AlgebraElement::scalar(counit(&AlgebraElement::word(w.clone(), p.prec)));
        let word = |w: &qlorentz::frt::Word| AlgebraElement::word(w.clone(), p.prec);
        let d = coproduct(x);
        prop_assert!(d.contract(eps, word).sub(x).max_abs() <= p.tolerance);
        prop_assert!(d.contract(word, eps).sub(x).max_abs() <= p.tolerance);
    }

    #[test]
    fn flat_config_round_trips(digits in 30u32..90, degree in 2usize..6, samples in 1usize..40, seed in any::<u64>()) {
        let text = format!("precision = {digits}\nmax_degree = {degree}\nsamples = {samples}\nseed = {seed}\npoint = 2, 1/3, -\n");
        let cfg = SuiteConfig::from_flat(&text).unwrap();
        prop_assert_eq!(cfg.precision_digits, digits);
        prop_assert_eq!(cfg.max_degree, degree);
        prop_assert_eq!(cfg.samples, samples);
        prop_assert_eq!(cfg.seed, seed);
        prop_assert_eq!(cfg.points.len(), 1);
        prop_assert_eq!(cfg.points[0].branch, Sign::Minus);
    }
}

#[test]
fn classical_braiding_of_any_two_symbols_is_the_flip() {
    use qlorentz::frt::{CrossRelations, Functionals, NormalFormEngine};
    use qlorentz::lorentz::{make_lambda, BigFunctionals};
    let p = make_params("1", "0", Sign::Plus, 40).unwrap();
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m).unwrap();
    let ss = make_sigma(&p, &m, &rm).unwrap();
    let mm = make_metric(&p, &m, &ss).unwrap();
    let fun = Functionals::new(&p, &m, &rm);
    let bf = BigFunctionals::new(&p, &m, &ss, &fun);
    let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(Sign::Plus), 2).unwrap();
    let lg = make_lambda(&p, &m, &ss, &mm, &eng).unwrap();
    let bm = Bimodule::new(&p, &m, &fun, &bf, &lg);
    let syms = ModuleSymbol::all();
    proptest!(ProptestConfig { cases: 24, ..ProptestConfig::default() }, |(i in 0..syms.len(), j in 0..syms.len())| {
        let (a, b) = (syms[i], syms[j]);
        let out = bm.braid(a, b);
        prop_assert_eq!(out.len(), 1);
        let (x, y, c) = &out[0];
        prop_assert_eq!((*x, *y), (b, a));
        prop_assert!((c - &p.one()).abs() <= p.tolerance);
    });
}
