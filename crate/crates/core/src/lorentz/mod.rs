//! The quantum Lorentz generators Λ_L^K built from bilinears in M and Ṁ,
//! their Hopf structure and orthogonality, the functionals F_± and the
//! ℛ^± matrices.

mod bigr;
mod functional;

pub use bigr::{make_big_r, verify_big_r, BigRMatrix};
pub use functional::{exchange_residual, verify_exchange_with_lambda, verify_functional_laws, BigFunctionals, LorentzFunctional};

use rayon::prelude::*;

use crate::check::{max_residual, Check};
use crate::error::{Error, Result};
use crate::frt::{antipode, antipode_gen, coproduct, counit, AlgebraElement, Gen, NormalFormEngine, TensorElement, Word};
use crate::linalg::CMatrix;
use crate::params::{ParameterSet, Sign};
use crate::scalar::{sci, Prec, Real, Scalar};
use crate::sigma::{MinkowskiMetric, SigmaSet};
use crate::tensor::SpinorMetric;

/// Λ_L^K for L, K = 0..3, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzGenerators {
    entries: Vec<AlgebraElement>,
    prec: Prec,
}

impl LorentzGenerators {
    fn from_fn(prec: Prec, mut f: impl FnMut(usize, usize) -> AlgebraElement) -> Self {
        let entries = (0..16).map(|i| f(i / 4, i % 4)).collect();
        LorentzGenerators { entries, prec }
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// Λ_L^K.
    pub fn get(&self, l: usize, k: usize) -> &AlgebraElement {
        &self.entries[4 * l + k]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &AlgebraElement)> {
        self.entries.iter().enumerate().map(|(i, x)| ((i / 4, i % 4), x))
    }

    /// Largest coefficient gap to another set of generators, entry by entry.
    pub fn distance(&self, other: &LorentzGenerators) -> Real {
        max_residual(self.prec.bits(), self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b).max_abs()))
    }

    fn map(&self, f: impl Fn(&AlgebraElement) -> Result<AlgebraElement>) -> Result<LorentzGenerators> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(LorentzGenerators { entries, prec: self.prec })
    }

    /// Evaluate on commuting values M ↦ `m`, Ṁ ↦ `mdot`; only meaningful
    /// where the algebra is commutative (the classical point).
    pub fn character(&self, m: &CMatrix, mdot: &CMatrix) -> CMatrix {
        let value = |g: Gen| if g.is_dotted() { mdot.get(g.row(), g.col()) } else { m.get(g.row(), g.col()) };
        CMatrix::from_fn(4, 4, self.prec, |l, k| {
            let mut acc = Scalar::zero(self.prec);
            for (w, c) in self.get(l, k).iter() {
                let mut t = c.clone();
                for g in w.gens() {
                    t *= value(*g);
                }
                acc += t;
            }
            acc
        })
    }
}

fn q_inv(p: &ParameterSet) -> Scalar {
    Scalar::from_real(p.big_q.clone()).recip()
}

fn word2(al: usize, si: usize, be: usize, rh: usize) -> Word {
    Word::new(vec![Gen::undotted(al, si), Gen::dotted_gen(be, rh)])
}

/// (1/Q) ε_{γ̇δ̇} σ̄_L^{δ̇α} M_α^σ σ^K_{σρ̇} Ṁ_β̇^ρ̇ ε^{γ̇β̇}.
pub fn lambda_spinor_form(p: &ParameterSet, m: &SpinorMetric, ss: &SigmaSet) -> LorentzGenerators {
    let (eld, eud) = (&m.eps_lower_dotted, &m.eps_upper_dotted);
    let (sb, sig) = (ss.bar_lowered(), ss.sigma());
    let k = q_inv(p);
    LorentzGenerators::from_fn(p.prec, |l, kk| {
        let mut x = AlgebraElement::zero(p.prec);
        for i in 0..16 {
            let (al, si, be, rh) = (i / 8, (i / 4) % 2, (i / 2) % 2, i % 2);
            let mut c = Scalar::zero(p.prec);
            for ga in 0..2 {
                for de in 0..2 {
                    c += eld.get(&[ga, de]) * sb.get(&[l, de, al]) * eud.get(&[ga, be]);
                }
            }
            c = c * sig.get(&[kk, si, rh]) * &k;
            if !c.is_zero() {
                x.add_term(word2(al, si, be, rh), &c);
            }
        }
        x
    })
}

/// (1/Q) σ̄_{Lγ̇}^α M_α^σ σ^K_σ^ρ̇ S⁻¹(Ṁ_ρ̇^γ̇).
pub fn lambda_antipode_form(p: &ParameterSet, m: &SpinorMetric, ss: &SigmaSet) -> LorentzGenerators {
    let (sbl, sgu) = (ss.bar_lowered_first(m), ss.sigma_raised_second(m));
    let k = q_inv(p);
    let inv: Vec<AlgebraElement> = (0..4).map(|i| antipode_gen(m, Gen::dotted_gen(i / 2, i % 2), true)).collect();
    LorentzGenerators::from_fn(p.prec, |l, kk| {
        let mut x = AlgebraElement::zero(p.prec);
        for i in 0..16 {
            let (ga, al, si, rh) = (i / 8, (i / 4) % 2, (i / 2) % 2, i % 2);
            let c = sbl.get(&[l, ga, al]) * sgu.get(&[kk, si, rh]) * &k;
            if !c.is_zero() {
                let mx = AlgebraElement::gen(Gen::undotted(al, si), p.prec);
                x.add_scaled(&c, &mx.mul(&inv[2 * rh + ga]));
            }
        }
        x
    })
}

/// (1/Q) ε^{αδ} M_α^σ σ^K_{σρ̇} Ṁ_β̇^ρ̇ σ̄_s^{Nβ̇γ} ε_{γδ} G_{sNL}.
pub fn lambda_metric_form(
    p: &ParameterSet,
    m: &SpinorMetric,
    ss: &SigmaSet,
    mm: &MinkowskiMetric,
    s: Sign,
) -> LorentzGenerators {
    let (el, eu) = (&m.eps_lower, &m.eps_upper);
    let (sig, sb, gl) = (ss.sigma(), ss.bar(s), mm.lower(s));
    let k = q_inv(p);
    LorentzGenerators::from_fn(p.prec, |l, kk| {
        let mut x = AlgebraElement::zero(p.prec);
        for i in 0..16 {
            let (al, si, be, rh) = (i / 8, (i / 4) % 2, (i / 2) % 2, i % 2);
            let mut c = Scalar::zero(p.prec);
            for de in 0..2 {
                for ga in 0..2 {
                    for n in 0..4 {
                        c += eu.get(&[al, de]) * sb.get(&[n, be, ga]) * el.get(&[ga, de]) * gl.get(&[n, l]);
                    }
                }
            }
            c = c * sig.get(&[kk, si, rh]) * &k;
            if !c.is_zero() {
                x.add_term(word2(al, si, be, rh), &c);
            }
        }
        x
    })
}

/// The alternative constructions, each paired with a report id.
fn alternative_forms(
    p: &ParameterSet,
    m: &SpinorMetric,
    ss: &SigmaSet,
    mm: &MinkowskiMetric,
) -> Vec<(&'static str, LorentzGenerators)> {
    vec![
        ("lambda-forms-agree-antipode", lambda_antipode_form(p, m, ss)),
        ("lambda-forms-agree-metric-plus", lambda_metric_form(p, m, ss, mm, Sign::Plus)),
        ("lambda-forms-agree-metric-minus", lambda_metric_form(p, m, ss, mm, Sign::Minus)),
    ]
}

/// Build Λ in normal form and check it against every alternative
/// construction; any mismatch is a `ConstructionIdentityFailure`.
pub fn make_lambda(
    p: &ParameterSet,
    m: &SpinorMetric,
    ss: &SigmaSet,
    mm: &MinkowskiMetric,
    eng: &NormalFormEngine,
) -> Result<LorentzGenerators> {
    let lg = lambda_spinor_form(p, m, ss).map(|x| eng.normal_form(x))?;
    for (id, alt) in alternative_forms(p, m, ss, mm) {
        let res = lg.distance(&alt.map(|x| eng.normal_form(x))?);
        if res > p.tolerance {
            return Err(Error::ConstructionIdentityFailure {
                id: id.into(),
                residual: sci(&res),
                tolerance: sci(&p.tolerance),
            });
        }
    }
    Ok(lg)
}

fn delta(p: &ParameterSet, a: usize, b: usize) -> Scalar {
    if a == b {
        p.one()
    } else {
        p.zero()
    }
}

fn worst(p: &ParameterSet, it: impl IntoIterator<Item = Real>) -> Real {
    max_residual(p.prec.bits(), it)
}

/// Agreement of the constructions, reality, counit, coproduct and the
/// antipode closed form. The closed form with G_s is expected to hold in
/// the algebra with cross relations of sign s only.
pub fn verify_lambda(
    lg: &LorentzGenerators,
    p: &ParameterSet,
    m: &SpinorMetric,
    ss: &SigmaSet,
    mm: &MinkowskiMetric,
    eng: &NormalFormEngine,
) -> Result<Vec<Check>> {
    let tol = &p.tolerance;
    let mut out = Vec::new();
    for (id, alt) in alternative_forms(p, m, ss, mm) {
        out.push(Check::holds(id, lg.distance(&alt.map(|x| eng.normal_form(x))?), tol));
    }
    let reality = lg.iter().map(|(_, x)| eng.residual(&x.star().sub(x))).collect::<Result<Vec<_>>>()?;
    out.push(Check::holds("lambda-reality", worst(p, reality), tol));
    let cou = lg.iter().map(|((l, k), x)| (counit(x) - delta(p, l, k)).abs());
    out.push(Check::holds("lambda-counit", worst(p, cou), tol));

    let (mut dres, mut cres) = (vec![], vec![]);
    for ((l, k), x) in lg.iter() {
        let d = coproduct(x);
        let mut rhs = TensorElement::zero(p.prec);
        for i in 0..4 {
            for ((a, b), c) in TensorElement::product(lg.get(l, i), lg.get(i, k)).terms() {
                rhs.add_term(a.clone(), b.clone(), c);
            }
        }
        dres.push(eng.normal_form_tensor(&d.sub(&rhs))?.max_abs());
        let left = d.contract(
            |w| AlgebraElement::scalar(counit(&AlgebraElement::word(w.clone(), p.prec))),
            |w| AlgebraElement::word(w.clone(), p.prec),
        );
        cres.push(eng.residual(&left.sub(x))?);
    }
    out.push(Check::holds("lambda-coproduct", worst(p, dres), tol));
    out.push(Check::holds("lambda-coproduct-counit", worst(p, cres), tol));

    for s in Sign::BOTH {
        let res = antipode_closed_form_residual(lg, p, m, mm, s, eng)?;
        let id = format!("lambda-antipode-metric-{}", s.word());
        out.push(if eng.cross().signs().contains(&s) {
            Check::holds(id, res, tol)
        } else if p.is_classical() {
            Check::info(id, res, tol)
        } else {
            Check::fails(id, res, tol).with_note("closed form with the other sign's metric")
        });
    }
    Ok(out)
}

/// max over (L,K) of S(Λ_L^K) − G_{sLM} Λ_N^M G_s^{NK} in normal form.
fn antipode_closed_form_residual(
    lg: &LorentzGenerators,
    p: &ParameterSet,
    m: &SpinorMetric,
    mm: &MinkowskiMetric,
    s: Sign,
    eng: &NormalFormEngine,
) -> Result<Real> {
    let (gu, gl) = (mm.upper(s).to_matrix(1), mm.lower(s).to_matrix(1));
    let res = (0..16)
        .into_par_iter()
        .map(|i| {
            let (l, k) = (i / 4, i % 4);
            let mut rhs = AlgebraElement::zero(p.prec);
            for mi in 0..4 {
                for n in 0..4 {
                    let c = gl.get(l, mi) * gu.get(n, k);
                    if !c.is_zero() {
                        rhs.add_scaled(&c, lg.get(n, mi));
                    }
                }
            }
            eng.residual(&antipode(lg.get(l, k), m).sub(&rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(worst(p, res))
}

/// Orthogonality for each sign of the engine's cross relations, lower and
/// upper index positions, over all 16 pairs. Also a negative control that
/// swaps the metric on the right-hand side for the other sign.
pub fn verify_orthogonality(
    lg: &LorentzGenerators,
    p: &ParameterSet,
    mm: &MinkowskiMetric,
    eng: &NormalFormEngine,
) -> Result<Vec<Check>> {
    if eng.max_degree() < 4 {
        return Err(Error::DegreeOverflow { degree: 4, max: eng.max_degree() });
    }
    let tol = &p.tolerance;
    // products Λ_A^B Λ_C^D at index (4A+B)·16 + 4C+D
    let products: Vec<AlgebraElement> =
        (0..256).into_par_iter().map(|i| lg.entries[i / 16].mul(&lg.entries[i % 16])).collect();
    let prod = |a: usize, b: usize, c: usize, d: usize| &products[(4 * a + b) * 16 + 4 * c + d];
    let mut out = Vec::new();
    for &s in eng.cross().signs() {
        let (gu, gl) = (mm.upper(s).to_matrix(1), mm.lower(s).to_matrix(1));
        let glo = mm.lower(s.flip()).to_matrix(1);
        let pairs: Vec<[Real; 3]> = (0..16)
            .into_par_iter()
            .map(|i| {
                let (x, y) = (i / 4, i % 4);
                let (mut lower, mut upper) = (AlgebraElement::zero(p.prec), AlgebraElement::zero(p.prec));
                for a in 0..4 {
                    for b in 0..4 {
                        // G_{NM} Λ_L^N Λ_K^M with (L,K) = (x,y), (N,M) = (a,b)
                        lower.add_scaled(gl.get(a, b), prod(x, a, y, b));
                        // G^{LK} Λ_L^N Λ_K^M with (N,M) = (x,y), (L,K) = (a,b)
                        upper.add_scaled(gu.get(a, b), prod(a, x, b, y));
                    }
                }
                let lower_nf = eng.normal_form(&lower)?;
                let one = AlgebraElement::one(p.prec);
                let r_lower = lower_nf.sub(&one.scale(gl.get(x, y))).max_abs();
                let r_upper = eng.normal_form(&upper)?.sub(&one.scale(gu.get(x, y))).max_abs();
                let r_swap = lower_nf.sub(&one.scale(glo.get(x, y))).max_abs();
                Ok([r_lower, r_upper, r_swap])
            })
            .collect::<Result<Vec<_>>>()?;
        let w = s.word();
        out.push(Check::holds(format!("orthogonality-{w}-lower"), worst(p, pairs.iter().map(|r| r[0].clone())), tol));
        out.push(Check::holds(format!("orthogonality-{w}-upper"), worst(p, pairs.iter().map(|r| r[1].clone())), tol));
        let swap = worst(p, pairs.iter().map(|r| r[2].clone()));
        let id = format!("orthogonality-{w}-swapped-metric");
        out.push(if p.is_classical() {
            Check::info(id, swap, tol)
        } else {
            Check::fails(id, swap, tol).with_note("negative control: right side uses the other sign's metric")
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
