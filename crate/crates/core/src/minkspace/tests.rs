use super::*;
use crate::frt::CrossRelations;
use crate::lorentz::make_lambda;
use crate::params::make_params;
use crate::rmat::make_r;
use crate::sigma::{make_metric, make_sigma};
use crate::tensor::make_spinor_metric;

struct Point {
    p: ParameterSet,
    m: SpinorMetric,
    mm: MinkowskiMetric,
    fun: Functionals,
    bf: BigFunctionals,
    ss: crate::sigma::SigmaSet,
    rm: crate::rmat::RMatrixPair,
}

fn point(q: &str, r: &str) -> Point {
    let p = make_params(q, r, Sign::Plus, 40).unwrap();
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m).unwrap();
    let ss = make_sigma(&p, &m, &rm).unwrap();
    let mm = make_metric(&p, &m, &ss).unwrap();
    let fun = Functionals::new(&p, &m, &rm);
    let bf = BigFunctionals::new(&p, &m, &ss, &fun);
    Point { p, m, mm, fun, bf, ss, rm }
}

fn run(pt: &Point, s: Sign) -> Vec<Check> {
    let eng = NormalFormEngine::new(&pt.p, &pt.m, &pt.rm, CrossRelations::matched(s), 4).unwrap();
    let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
    let bm = Bimodule::new(&pt.p, &pt.m, &pt.fun, &pt.bf, &lg);
    verify_minkowski(&bm, &pt.mm, &eng, 4, 11).unwrap()
}

#[test]
fn minkowski_checks_at_sample_points() {
    for (q, r) in [("1", "0"), ("2", "1/3")] {
        let pt = point(q, r);
        for s in Sign::BOTH {
            for c in run(&pt, s) {
                assert!(c.passed(), "{q},{r},{s}: {c:?}");
            }
        }
    }
}

fn classical_bimodule_check(f: impl Fn(&Bimodule<'_>, &ParameterSet)) {
    let pt = point("1", "0");
    let eng = NormalFormEngine::new(&pt.p, &pt.m, &pt.rm, CrossRelations::matched(Sign::Plus), 2).unwrap();
    let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
    let bm = Bimodule::new(&pt.p, &pt.m, &pt.fun, &pt.bf, &lg);
    f(&bm, &pt.p);
}

#[test]
fn unit_passes_through_every_symbol() {
    let pt = point("2", "1/3");
    let eng = NormalFormEngine::new(&pt.p, &pt.m, &pt.rm, CrossRelations::matched(Sign::Plus), 2).unwrap();
    let lg = make_lambda(&pt.p, &pt.m, &pt.ss, &pt.mm, &eng).unwrap();
    let bm = Bimodule::new(&pt.p, &pt.m, &pt.fun, &pt.bf, &lg);
    let one = AlgebraElement::one(pt.p.prec);
    for sym in ModuleSymbol::all() {
        for (k, c) in bm.push_left(sym, &one) {
            let want = if k == sym { one.clone() } else { AlgebraElement::zero(pt.p.prec) };
            assert!(c.sub(&want).max_abs() <= pt.p.tolerance, "{sym} -> {k}");
        }
    }
}

#[test]
fn classical_symbols_commute_with_generators() {
    classical_bimodule_check(|bm, p| {
        for sym in ModuleSymbol::all() {
            for g in Gen::all() {
                let a = AlgebraElement::gen(g, p.prec);
                for (k, c) in bm.push_left(sym, &a) {
                    let want = if k == sym { a.clone() } else { AlgebraElement::zero(p.prec) };
                    assert!(c.sub(&want).max_abs() <= p.tolerance, "{sym} {g}");
                }
            }
        }
    });
}

#[test]
fn classical_braiding_is_the_transposition() {
    classical_bimodule_check(|bm, p| {
        let syms = ModuleSymbol::all();
        for &s1 in &syms {
            for &s2 in &syms {
                let terms = bm.braid(s1, s2);
                assert_eq!(terms.len(), 1, "{s1} {s2}");
                let (a, b, c) = &terms[0];
                assert_eq!((*a, *b), (s2, s1));
                assert!((c - &p.one()).abs() <= p.tolerance);
            }
        }
        // Braiding twice at the same position is the identity.
        let x = ModuleElement::term(
            AlgebraElement::one(p.prec),
            vec![ModuleSymbol::coordinate(Sign::Plus, 1), ModuleSymbol::spinor(Sign::Minus, 0)],
        );
        let back = bm.symmetrize(&bm.symmetrize(&x, 0).unwrap(), 0).unwrap();
        assert!(back.sub(&x).max_abs() <= p.tolerance);
    });
}

#[test]
fn symmetrize_needs_two_symbols() {
    classical_bimodule_check(|bm, p| {
        let x = ModuleElement::term(AlgebraElement::one(p.prec), vec![ModuleSymbol::coordinate(Sign::Plus, 0)]);
        assert!(matches!(bm.symmetrize(&x, 0), Err(Error::IndexMismatch(_))));
    });
}

#[test]
fn symbols_sort_coordinates_first() {
    let mut syms = ModuleSymbol::all();
    syms.reverse();
    syms.sort();
    assert_eq!(syms[0], ModuleSymbol::coordinate(Sign::Plus, 0));
    assert_eq!(syms[4], ModuleSymbol::coordinate(Sign::Minus, 0));
    assert_eq!(syms[8].kind, SymbolKind::Spinor);
    assert_eq!(syms[15], ModuleSymbol::dotted(Sign::Minus, 1));
}
