use super::*;
use crate::frt::{CrossRelations, Functionals};
use crate::params::make_params;
use crate::rmat::make_r;
use crate::sigma::{make_metric, make_sigma};
use crate::tensor::make_spinor_metric;

struct Point {
    p: ParameterSet,
    m: SpinorMetric,
    ss: SigmaSet,
    mm: MinkowskiMetric,
    fun: Functionals,
}

fn point(q: &str, r: &str, digits: u32) -> Point {
    let p = make_params(q, r, Sign::Plus, digits).unwrap();
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m).unwrap();
    let ss = make_sigma(&p, &m, &rm).unwrap();
    let mm = make_metric(&p, &m, &ss).unwrap();
    let fun = Functionals::new(&p, &m, &rm);
    Point { p, m, ss, mm, fun }
}

fn engine(pt: &Point, s: Sign, deg: usize) -> NormalFormEngine {
    let rm = make_r(&pt.p, &pt.m).unwrap();
    NormalFormEngine::new(&pt.p, &pt.m, &rm, CrossRelations::matched(s), deg).unwrap()
}

fn assert_all(checks: &[Check], label: &str) {
    for c in checks {
        assert!(c.passed(), "{label}: {c:?}");
    }
}

#[test]
fn constructions_agree_and_lambda_words_are_bilinear() {
    for (q, r) in [("1", "0"), ("2", "0"), ("2", "1/3"), ("1/2", "1/5")] {
        let pt = point(q, r, 40);
        let eng = engine(&pt, Sign::Plus, 2);
        let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
        for (_, x) in lg.iter() {
            assert!(!x.is_empty());
            for (w, _) in x.iter() {
                assert_eq!(w.len(), 2);
                assert!(!w.gens()[0].is_dotted() && w.gens()[1].is_dotted());
            }
        }
    }
}

#[test]
fn hopf_structure_and_orthogonality_in_matched_algebra() {
    for (q, r) in [("1", "0"), ("2", "1/3")] {
        let pt = point(q, r, 40);
        for s in Sign::BOTH {
            let eng = engine(&pt, s, 4);
            let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
            let label = format!("{q},{r},{s}");
            assert_all(&verify_lambda(&lg, &pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap(), &label);
            assert_all(&verify_orthogonality(&lg, &pt.p, &pt.mm, &eng).unwrap(), &label);
        }
    }
}

#[test]
fn orthogonality_needs_degree_four() {
    let pt = point("2", "1/3", 40);
    let eng = engine(&pt, Sign::Plus, 3);
    let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
    assert!(matches!(verify_orthogonality(&lg, &pt.p, &pt.mm, &eng), Err(Error::DegreeOverflow { .. })));
}

#[test]
fn functional_laws_and_big_r() {
    for (q, r) in [("1", "0"), ("2", "1/3")] {
        let pt = point(q, r, 40);
        let bf = BigFunctionals::new(&pt.p, &pt.m, &pt.ss, &pt.fun);
        let label = format!("{q},{r}");
        assert_all(&verify_functional_laws(&pt.p, &pt.m, &pt.mm, &bf), &label);
        let eng = engine(&pt, Sign::Plus, 2);
        let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
        let br = make_big_r(&lg, &bf);
        let checks = verify_big_r(&pt.p, &pt.mm, &br, &bf, &lg);
        let (inverse, rest): (Vec<_>, Vec<_>) = checks.into_iter().partition(|c| c.id == "bigr-mutual-inverse");
        assert_all(&rest, &label);
        assert_eq!(inverse.len(), 1);
        assert_eq!(inverse[0].passed(), pt.p.is_classical(), "{label}: {:?}", inverse[0]);
    }
}

#[test]
fn exchange_with_lambda_in_matched_algebra() {
    let pt = point("2", "1/3", 40);
    let bf = BigFunctionals::new(&pt.p, &pt.m, &pt.ss, &pt.fun);
    for s in Sign::BOTH {
        let eng = engine(&pt, s, 4);
        let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
        assert_all(&verify_exchange_with_lambda(&eng, &bf, &lg).unwrap(), &s.to_string());
        let other = exchange_residual(&eng, bf.get(s.flip()), &lg).unwrap();
        assert!(other > pt.p.tolerance, "{s}: mismatched functional should not commute");
    }
}

#[test]
fn classical_character_is_a_lorentz_matrix() {
    let pt = point("1", "0", 40);
    let eng = engine(&pt, Sign::Plus, 2);
    let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
    let prec = pt.p.prec;
    let c = |re: f64, im: f64| Scalar::new(crate::scalar::real(prec, re), crate::scalar::real(prec, im));
    // det = (1+i)(1) - (0.5)(2i) = 1
    let a = CMatrix::from_vec(2, 2, vec![c(1.0, 1.0), c(0.5, 0.0), c(0.0, 2.0), c(1.0, 0.0)]);
    let lam = lg.character(&a, &a.conj());
    let eta = CMatrix::from_fn(4, 4, prec, |i, j| match (i, j) {
        (0, 0) => pt.p.scalar(-1),
        (i, j) if i == j => pt.p.one(),
        _ => pt.p.zero(),
    });
    assert!(lam.transpose().mul(&eta).mul(&lam).residual(&eta) < pt.p.tolerance);
    assert!(lam.residual(&lam.conj()) < pt.p.tolerance);
}
