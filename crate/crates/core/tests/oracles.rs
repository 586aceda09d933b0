//! Values known independently of the construction: closed forms, the
//! classical point, and relations between modules computed along separate paths.

use qlorentz::error::Error;
use qlorentz::frt::{antipode, coproduct, counit, AlgebraElement, CrossRelations, Functionals, Gen, NormalFormEngine, Word};
use qlorentz::linalg::CMatrix;
use qlorentz::lorentz::{make_big_r, make_lambda, BigFunctionals};
use qlorentz::minkspace::{Bimodule, ModuleSymbol};
use qlorentz::params::{make_params, ParameterSet, Sign};
use qlorentz::rmat::make_r;
use qlorentz::scalar::{ratio, Real, Scalar};
use qlorentz::sigma::{make_metric, make_sigma, pauli};
use qlorentz::tensor::make_spinor_metric;
use rug::Float;

fn close(p: &ParameterSet, got: &Scalar, want: &Scalar) -> bool {
    (got - want).abs() <= p.tolerance
}

fn real(p: &ParameterSet, x: Real) -> Scalar {
    Scalar::new(x, p.real(0))
}

#[test]
fn derived_constants() {
    let p = make_params("1", "0", Sign::Plus, 60).unwrap();
    for (v, want) in [(&p.d, 1), (&p.big_q, 2), (&p.a, 1), (&p.sqrt_a, 1)] {
        assert!(close(&p, &real(&p, v.clone()), &p.scalar(want)));
    }
    let p = make_params("2", "0", Sign::Plus, 60).unwrap();
    assert!(close(&p, &real(&p, p.big_q.clone()), &real(&p, ratio(p.prec, 5, 2))));
    assert!(close(&p, &real(&p, p.a.clone()), &p.scalar(2)));
    let p = make_params("2", "0", Sign::Minus, 60).unwrap();
    assert!(close(&p, &real(&p, p.a.clone()), &real(&p, ratio(p.prec, 1, 2))));
    // (2r² + q + 1/q)/d = (2/9 + 5/2)/(8/9) = 49/16
    let p = make_params("2", "1/3", Sign::Plus, 60).unwrap();
    assert!(close(&p, &real(&p, p.big_q.clone()), &real(&p, ratio(p.prec, 49, 16))));
    assert!(matches!(make_params("1", "1", Sign::Plus, 60), Err(Error::DegenerateParameter { .. })));
}

#[test]
fn classical_spinor_metric_and_full_contraction() {
    let p = make_params("1", "0", Sign::Plus, 60).unwrap();
    let m = make_spinor_metric(&p);
    let want = [[0, -1], [1, 0]];
    for a in 0..2 {
        for b in 0..2 {
            assert!(close(&p, m.eps_lower.get(&[a, b]), &p.scalar(want[a][b])));
        }
    }
    // Explicit 2×2 sum ε^{αβ}ε_{αβ} = −Q.
    let p = make_params("2", "1/3", Sign::Plus, 60).unwrap();
    let m = make_spinor_metric(&p);
    let mut acc = p.zero();
    for a in 0..2 {
        for b in 0..2 {
            acc += m.eps_upper.get(&[a, b]) * m.eps_lower.get(&[a, b]);
        }
    }
    assert!(close(&p, &acc, &-real(&p, p.big_q.clone())));
}

#[test]
fn classical_r_is_the_flip_and_pauli_matrices_are_standard() {
    let p = make_params("1", "0", Sign::Plus, 40).unwrap();
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m).unwrap();
    for s in Sign::BOTH {
        let r = rm.r(s);
        for (a, b, c, d) in (0..16).map(|i| (i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1)) {
            let want = if a == d && b == c { 1 } else { 0 };
            assert!(close(&p, r.get(&[a, b, c, d]), &p.scalar(want)), "R{s}[{a}{b}{c}{d}]");
        }
    }
    let sig = pauli(&p);
    for (a, b) in [(0, 1), (1, 0)] {
        assert!(close(&p, sig.get(&[1, a, b]), &p.one()));
        assert!(close(&p, sig.get(&[1, a, a]), &p.zero()));
    }
}

#[test]
fn metric_time_entry_and_classical_signature() {
    for (q, r) in [("1", "0"), ("2", "0"), ("2", "1/3"), ("1/2", "1/5")] {
        let p = make_params(q, r, Sign::Plus, 60).unwrap();
        let m = make_spinor_metric(&p);
        let rm = make_r(&p, &m).unwrap();
        let ss = make_sigma(&p, &m, &rm).unwrap();
        let mm = make_metric(&p, &m, &ss).unwrap();
        let g = mm.upper(Sign::Plus);
        assert!(close(&p, g.get(&[0, 0]), &real(&p, -p.a_half_pow(-3))), "{q},{r}");
        if p.is_classical() {
            for s in Sign::BOTH {
                for i in 0..4 {
                    for j in 0..4 {
                        let want = if i != j { 0 } else if i == 0 { -1 } else { 1 };
                        assert!(close(&p, mm.upper(s).get(&[i, j]), &p.scalar(want)));
                    }
                }
            }
        }
    }
    // −2^{−3/2} at (2, 0)
    let p = make_params("2", "0", Sign::Plus, 60).unwrap();
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m).unwrap();
    let mm = make_metric(&p, &m, &make_sigma(&p, &m, &rm).unwrap()).unwrap();
    let want = -Float::with_val(p.prec.bits(), 8).sqrt().recip();
    assert!(close(&p, mm.upper(Sign::Plus).get(&[0, 0]), &real(&p, want)));
}

#[test]
fn hopf_values_on_generators() {
    let p = make_params("2", "1/3", Sign::Plus, 40).unwrap();
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m).unwrap();
    let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(Sign::Plus), 3).unwrap();
    let g = |r, c| AlgebraElement::gen(Gen::undotted(r, c), p.prec);
    assert!(close(&p, &counit(&g(0, 0)), &p.one()));
    assert!(close(&p, &counit(&g(0, 1)), &p.zero()));

    // Δ(M_1^2) = Σ_γ M_1^γ ⊗ M_γ^2
    let d = coproduct(&g(0, 1));
    assert_eq!(d.terms().len(), 2);
    for k in 0..2 {
        let key = (Word::from(Gen::undotted(0, k)), Word::from(Gen::undotted(k, 1)));
        assert!(close(&p, &d.terms()[&key], &p.one()));
    }

    // S(M_α^γ) M_γ^β = δ_α^β
    for a in 0..2 {
        for b in 0..2 {
            let mut x = AlgebraElement::zero(p.prec);
            for c in 0..2 {
                x = x.add(&antipode(&g(a, c), &m).mul(&g(c, b)));
            }
            let want = if a == b { AlgebraElement::one(p.prec) } else { AlgebraElement::zero(p.prec) };
            assert!(eng.residual(&x.sub(&want)).unwrap() <= p.tolerance);
        }
    }

    // ε_{αβ} M_1^α M_2^β = ε_{12}
    let mut x = AlgebraElement::zero(p.prec);
    for a in 0..2 {
        for b in 0..2 {
            x.add_scaled(m.eps_lower.get(&[a, b]), &g(0, a).mul(&g(1, b)));
        }
    }
    let want = AlgebraElement::scalar(m.eps_lower.get(&[0, 1]).clone());
    assert!(eng.residual(&x.sub(&want)).unwrap() <= p.tolerance);
}

#[test]
fn classical_antipode_is_the_adjugate() {
    let p = make_params("1", "0", Sign::Plus, 40).unwrap();
    let m = make_spinor_metric(&p);
    let g = |r, c| AlgebraElement::gen(Gen::undotted(r, c), p.prec);
    let adj = [[g(1, 1), g(0, 1).scale(&-p.one())], [g(1, 0).scale(&-p.one()), g(0, 0)]];
    for a in 0..2 {
        for b in 0..2 {
            assert!(antipode(&g(a, b), &m).sub(&adj[a][b]).max_abs() <= p.tolerance);
        }
    }
}

/// A = diag(λ, 1/λ) acts on x⁰σ⁰ + x³σ³ as a boost of rapidity 2 ln λ.
#[test]
fn classical_character_of_a_boost() {
    let p = make_params("1", "0", Sign::Plus, 40).unwrap();
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m).unwrap();
    let ss = make_sigma(&p, &m, &rm).unwrap();
    let mm = make_metric(&p, &m, &ss).unwrap();
    let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(Sign::Plus), 2).unwrap();
    let lg = make_lambda(&p, &m, &ss, &mm, &eng).unwrap();
    let lam = p.scalar(3);
    let a = CMatrix::from_vec(2, 2, vec![lam.clone(), p.zero(), p.zero(), lam.recip()]);
    let v = lg.character(&a, &a.conj());
    // cosh t = (λ² + λ⁻²)/2, sinh t = (λ² − λ⁻²)/2 with λ = 3
    let (ch, sh) = (real(&p, ratio(p.prec, 41, 9)), real(&p, ratio(p.prec, 40, 9)));
    let abs_close = |x: &Scalar, w: &Scalar| (x.abs() - w.abs()).abs() <= p.tolerance;
    assert!(abs_close(v.get(0, 0), &ch) && abs_close(v.get(3, 3), &ch));
    assert!(abs_close(v.get(0, 3), &sh) && abs_close(v.get(3, 0), &sh));
    assert!(abs_close(v.get(1, 1), &p.one()) && abs_close(v.get(2, 2), &p.one()));
    assert!(close(&p, v.get(0, 1), &p.zero()));
}

/// The coordinate braiding uses F(S(Λ)), ℛ uses F(Λ); they are inverse:
/// Σ_{J,P} B(X_J X_P | X_L X_K) · F_J^N(Λ_P^M) = δ_K^N δ_L^M.
#[test]
fn coordinate_braiding_inverts_big_r() {
    let p = make_params("2", "1/3", Sign::Plus, 40).unwrap();
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m).unwrap();
    let ss = make_sigma(&p, &m, &rm).unwrap();
    let mm = make_metric(&p, &m, &ss).unwrap();
    let fun = Functionals::new(&p, &m, &rm);
    let bf = BigFunctionals::new(&p, &m, &ss, &fun);
    let eng = NormalFormEngine::new(&p, &m, &rm, CrossRelations::matched(Sign::Plus), 2).unwrap();
    let lg = make_lambda(&p, &m, &ss, &mm, &eng).unwrap();
    let bm = Bimodule::new(&p, &m, &fun, &bf, &lg);
    let big = make_big_r(&lg, &bf);
    let r = big.tensor(Sign::Plus);
    for l in 0..4 {
        for k in 0..4 {
            let terms = bm.braid(ModuleSymbol::coordinate(Sign::Plus, l), ModuleSymbol::coordinate(Sign::Plus, k));
            for mi in 0..4 {
                for n in 0..4 {
                    let mut acc = p.zero();
                    for (j, pp, c) in &terms {
                        // R[n, m, k, l] = F_k^m(Λ_l^n)
                        acc += c * r.get(&[mi, n, j.index, pp.index]);
                    }
                    let want = if k == n && l == mi { p.one() } else { p.zero() };
                    assert!(close(&p, &acc, &want), "L{l} K{k} M{mi} N{n}: {acc}");
                }
            }
        }
    }
}
