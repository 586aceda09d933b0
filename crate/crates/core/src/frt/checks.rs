use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::functional::{Functionals, WordFunctional};
use super::hopf::{antipode, antipode_inverse, coproduct, coproduct_word, counit};
use super::relations::{build_relations, CrossRelations, RelationKind};
use super::{AlgebraElement, Gen, NormalFormEngine, Word};
use crate::check::Check;
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::params::Sign;
use crate::rmat::RMatrixPair;
use crate::scalar::{Prec, Real, Scalar};

/// Deterministic pseudo-random elements of degree ≤ 2: three degree-2 words,
/// one generator and a scalar, with Gaussian-rational coefficients.
pub fn random_elements(prec: Prec, count: usize, seed: u64) -> Vec<AlgebraElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coef = |rng: &mut ChaCha8Rng| {
        let (a, b): (i64, i64) = (rng.gen_range(-8..=8), rng.gen_range(-8..=8));
        Scalar::new(crate::scalar::ratio(prec, a, 8), crate::scalar::ratio(prec, b, 8))
    };
    (0..count)
        .map(|_| {
            let mut x = AlgebraElement::scalar(coef(&mut rng));
            for _ in 0..3 {
                let w = Word::from_codes(&[rng.gen_range(0..8), rng.gen_range(0..8)]).expect("in range");
                let c = coef(&mut rng);
                x.add_term(w, &c);
            }
            let g = Word::from_codes(&[rng.gen_range(0..8)]).expect("in range");
            let c = coef(&mut rng);
            x.add_term(g, &c);
            x
        })
        .collect()
}

/// The eight generators followed by all 64 degree-2 words.
pub fn basis_words_up_to_two() -> Vec<Word> {
    let gens: Vec<Gen> = Gen::all().collect();
    Word::all_up_to(&gens, 2).into_iter().filter(|w| !w.is_empty()).collect()
}

fn worst(bits: u32, it: impl IntoIterator<Item = Real>) -> Real {
    crate::check::max_residual(bits, it)
}

type Triple = BTreeMap<(Word, Word, Word), Scalar>;

fn coassociativity_residual(x: &AlgebraElement) -> Real {
    let prec = x.prec();
    let mut lhs: Triple = BTreeMap::new();
    let mut rhs: Triple = BTreeMap::new();
    let put = |m: &mut Triple, k: (Word, Word, Word), c: Scalar| {
        *m.entry(k).or_insert_with(|| Scalar::zero(prec)) += c;
    };
    for ((l, r), c) in coproduct(x).terms() {
        for ((a, b), v) in coproduct_word(l, prec).terms() {
            put(&mut lhs, (a.clone(), b.clone(), r.clone()), c * v);
        }
        for ((a, b), v) in coproduct_word(r, prec).terms() {
            put(&mut rhs, (l.clone(), a.clone(), b.clone()), c * v);
        }
    }
    for (k, v) in rhs {
        put(&mut lhs, k, -v);
    }
    worst(prec.bits(), lhs.values().map(Scalar::abs))
}

/// Relations vanish, Hopf axioms hold, star and antipode are compatible.
pub fn verify_algebra(eng: &NormalFormEngine, samples: usize, seed: u64) -> Result<Vec<Check>> {
    let p = eng.params();
    let (prec, bits, tol) = (p.prec, p.prec.bits(), &p.tolerance);
    let m = eng.metric();
    let mut out = Vec::new();

    out.push(Check::holds(
        "relations-counit-gate",
        worst(bits, eng.relations().iter().map(|r| counit(&r.element).abs())),
        tol,
    ));
    let mut by_kind: BTreeMap<&str, Vec<Real>> = BTreeMap::new();
    for r in eng.relations().iter() {
        let name = match r.kind {
            RelationKind::Exchange { .. } => "exchange",
            RelationKind::Unimodular { .. } => "unimodular",
            RelationKind::Cross(_) => "cross",
        };
        let slot = by_kind.entry(name).or_default();
        slot.push(eng.residual(&r.element)?);
        if eng.max_degree() >= 3 {
            for g in Gen::all() {
                let gx = AlgebraElement::gen(g, prec);
                slot.push(eng.residual(&gx.mul(&r.element))?);
                slot.push(eng.residual(&r.element.mul(&gx))?);
            }
        }
    }
    for (name, res) in by_kind {
        out.push(Check::holds(format!("relations-reduce-to-zero-{name}"), worst(bits, res), tol));
    }

    let mut elems: Vec<AlgebraElement> = Gen::all().map(|g| AlgebraElement::gen(g, prec)).collect();
    elems.extend(random_elements(prec, samples, seed));
    let one = AlgebraElement::one(prec);
    let (mut coassoc, mut cl, mut cr, mut sl, mut sr, mut inv, mut idem, mut star) =
        (vec![], vec![], vec![], vec![], vec![], vec![], vec![], vec![]);
    for x in &elems {
        let d = coproduct(x);
        coassoc.push(coassociativity_residual(x));
        let eps_l = d.contract(|w| AlgebraElement::scalar(counit(&AlgebraElement::word(w.clone(), prec))), |w| {
            AlgebraElement::word(w.clone(), prec)
        });
        cl.push(eng.residual(&eps_l.sub(x))?);
        let eps_r = d.contract(|w| AlgebraElement::word(w.clone(), prec), |w| {
            AlgebraElement::scalar(counit(&AlgebraElement::word(w.clone(), prec)))
        });
        cr.push(eng.residual(&eps_r.sub(x))?);
        let unit = one.scale(&counit(x));
        let left = d.contract(|w| antipode(&AlgebraElement::word(w.clone(), prec), m), |w| {
            AlgebraElement::word(w.clone(), prec)
        });
        sl.push(eng.residual(&left.sub(&unit))?);
        let right = d.contract(|w| AlgebraElement::word(w.clone(), prec), |w| {
            antipode(&AlgebraElement::word(w.clone(), prec), m)
        });
        sr.push(eng.residual(&right.sub(&unit))?);
        inv.push(eng.residual(&antipode(&antipode_inverse(x, m), m).sub(x))?);
        let nf = eng.normal_form(x)?;
        idem.push(eng.normal_form(&nf)?.sub(&nf).max_abs());
        star.push(eng.residual(&antipode(x, m).star().sub(&antipode_inverse(&x.star(), m)))?);
    }
    for (id, v) in [
        ("hopf-coassociativity", coassoc),
        ("hopf-counit-left", cl),
        ("hopf-counit-right", cr),
        ("hopf-antipode-left", sl),
        ("hopf-antipode-right", sr),
        ("hopf-antipode-inverse", inv),
        ("normal-form-idempotent", idem),
        ("antipode-star-compatibility", star),
    ] {
        out.push(Check::holds(id, worst(bits, v), tol));
    }
    let mut star_rel = vec![];
    for r in eng.relations().iter() {
        star_rel.push(eng.residual(&r.element.star())?);
    }
    out.push(Check::holds("star-preserves-relations", worst(bits, star_rel), tol));

    let c = eng.certificate();
    let note = format!(
        "diamond {} / table-vs-normal-form {} over {} words{}",
        crate::scalar::sci(&c.diamond_residual),
        crate::scalar::sci(&c.table_residual),
        c.words_checked,
        if c.capped { ", step cap hit" } else { "" }
    );
    let gate = if c.fallback { p.real(0) } else { c.diamond_residual.clone() };
    out.push(
        Check::holds("normal-form-confluence-or-fallback", gate, tol)
            .with_note(if c.fallback { format!("fallback to linear reduction; {note}") } else { note }),
    );
    Ok(out)
}

fn identity_gap(m: &CMatrix, eps: &Scalar) -> Real {
    m.residual(&CMatrix::identity(m.rows(), m.prec()).scale(eps))
}

/// Laws of the exchange functionals. The exchange law with generators is
/// checked in `eng`, with the functional whose sign matches its cross relations.
pub fn verify_functionals(
    eng: &NormalFormEngine,
    fun: &Functionals,
    rm: &RMatrixPair,
) -> Result<Vec<Check>> {
    let p = eng.params();
    let m = eng.metric();
    let (prec, bits, tol) = (p.prec, p.prec.bits(), &p.tolerance);
    let all_rel = build_relations(p, m, rm, CrossRelations::Both);
    let words = basis_words_up_to_two();
    let mut out = Vec::new();
    for s in Sign::BOTH {
        let w = s.word();
        let f = fun.f(s);
        out.push(Check::holds(format!("functional-unit-{w}"), identity_gap(&f.on_word(&Word::unit()), &p.one()), tol));
        out.push(Check::holds(
            format!("functional-annihilates-relations-{w}"),
            worst(bits, all_rel.iter().map(|r| f.on(&r.element).max_abs())),
            tol,
        ));
        // f_s(S(M_r^σ))_α^β = a^{s/2} R^{−s βσ}_{rα}
        let k = p.a_half_pow(s.value());
        let rr = rm.r(s.flip());
        let mut res = vec![];
        for g in Gen::all().filter(|g| !g.is_dotted()) {
            let v = f.on(&antipode(&AlgebraElement::gen(g, prec), m));
            let expect = CMatrix::from_fn(2, 2, prec, |al, be| rr.get(&[be, g.col(), g.row(), al]).scale(&k));
            res.push(v.residual(&expect));
        }
        out.push(Check::holds(format!("functional-antipode-values-{w}"), worst(bits, res), tol));
        // f_α^β = ε^{βδ} f̃_δ^γ ε_{γα}
        let (el, eu) = (m.eps_lower.to_matrix(1), m.eps_upper.to_matrix(1));
        let ft = fun.f_tilde(s);
        let res = Gen::all().map(|g| f.on_gen(g).residual(&eu.mul(ft.on_gen(g)).mul(&el).transpose()));
        out.push(Check::holds(format!("functional-tilde-metric-conjugation-{w}"), worst(bits, res), tol));
        out.push(Check::holds(
            format!("functional-convolution-inverse-{w}"),
            convolution_inverse_residual(f, eng, &words)?,
            tol,
        ));
        let fd = fun.f_dotted(s.flip());
        let res = words.iter().map(|wd| {
            let x = AlgebraElement::word(wd.clone(), prec);
            f.on(&x).conj().residual(&fd.on(&antipode(&x.star(), m)))
        });
        out.push(Check::holds(format!("functional-star-compatibility-{w}"), worst(bits, res), tol));
    }
    if let [s] = eng.cross().signs() {
        out.push(Check::holds(
            format!("functional-exchange-with-generators-{}", s.word()),
            exchange_with_generators(eng, fun.f(*s))?,
            tol,
        ));
    }
    Ok(out)
}

/// max over a of |Σ f(a₍₁₎) f(S(a₍₂₎)) − ε(a)| and the mirrored product.
fn convolution_inverse_residual(f: &WordFunctional, eng: &NormalFormEngine, words: &[Word]) -> Result<Real> {
    let p = eng.params();
    let m = eng.metric();
    let mut res = vec![];
    for w in words.iter().cloned().chain(std::iter::once(Word::unit())) {
        let x = AlgebraElement::word(w, p.prec);
        let eps = counit(&x);
        let (mut a, mut b) = (CMatrix::zeros(2, 2, p.prec), CMatrix::zeros(2, 2, p.prec));
        for ((l, r), c) in coproduct(&x).terms() {
            let (xl, xr) = (AlgebraElement::word(l.clone(), p.prec), AlgebraElement::word(r.clone(), p.prec));
            a.add_scaled(c, &f.on(&xl).mul(&f.on(&antipode(&xr, m))));
            b.add_scaled(c, &f.on(&antipode(&xl, m)).mul(&f.on(&xr)));
        }
        res.push(identity_gap(&a, &eps));
        res.push(identity_gap(&b, &eps));
    }
    Ok(worst(p.prec.bits(), res))
}

/// M_α^γ (f_γ^β ⋆ a) − (a ⋆ f_α^γ) M_γ^β for every generator a.
pub fn exchange_with_generators(eng: &NormalFormEngine, f: &WordFunctional) -> Result<Real> {
    let p = eng.params();
    let mut res = vec![];
    for g in Gen::all() {
        let a = AlgebraElement::gen(g, p.prec);
        let (fa, af) = (f.right_star(&a), f.left_star(&a));
        for al in 0..2 {
            for be in 0..2 {
                let mut diff = AlgebraElement::zero(p.prec);
                for ga in 0..2 {
                    let mag = AlgebraElement::gen(Gen::undotted(al, ga), p.prec);
                    let mgb = AlgebraElement::gen(Gen::undotted(ga, be), p.prec);
                    diff = diff.add(&mag.mul(&fa[ga * 2 + be])).sub(&af[al * 2 + ga].mul(&mgb));
                }
                res.push(eng.residual(&diff)?);
            }
        }
    }
    Ok(worst(p.prec.bits(), res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use crate::rmat::make_r;
    use crate::tensor::make_spinor_metric;

    #[test]
    fn algebra_and_functional_laws() {
        for (q, r) in [("1", "0"), ("2", "1/3")] {
            let p = make_params(q, r, Sign::Plus, 40).unwrap();
            let m = make_spinor_metric(&p);
            let rm = make_r(&p, &m).unwrap();
            let fun = Functionals::new(&p, &m, &rm);
            for cross in [CrossRelations::Plus, CrossRelations::Minus] {
                let eng = NormalFormEngine::new(&p, &m, &rm, cross, 4).unwrap();
                let mut checks = verify_algebra(&eng, 5, 7).unwrap();
                checks.extend(verify_functionals(&eng, &fun, &rm).unwrap());
                for c in &checks {
                    assert!(c.passed(), "{q},{r},{cross}: {c:?}");
                }
            }
        }
    }
}
