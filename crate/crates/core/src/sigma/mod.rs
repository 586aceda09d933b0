//! Quantum Pauli matrices σ^I, their duals σ̄_±^I, the Minkowski metrics
//! G_± and the completeness and duality identities tying them together.

pub mod fixture;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::params::{ParameterSet, Sign};
use crate::rmat::RMatrixPair;
use crate::scalar::{sci, Scalar};
use crate::tensor::{Family, SpinorMetric, Tensor, Typing, DL, UL, VL, VU};

fn slot(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// σ^I_{αβ̇}, the duals σ̄_±^{Iα̇β} and the metric-lowered dual σ̄_I^{α̇β}.
#[derive(Clone, Debug)]
pub struct SigmaSet {
    sigma: Tensor,
    bar: [Tensor; 2],
    bar_lowered: Tensor,
}

/// G_±^{IJ} and G_{±IJ}.
#[derive(Clone, Debug)]
pub struct MinkowskiMetric {
    upper: [Tensor; 2],
    lower: [Tensor; 2],
}

impl SigmaSet {
    /// σ^I_{αβ̇}, signature (v^, u_, d_).
    pub fn sigma(&self) -> &Tensor {
        &self.sigma
    }

    /// σ̄_s^{Iα̇β}, signature (v^, d^, u^).
    pub fn bar(&self, s: Sign) -> &Tensor {
        &self.bar[slot(s)]
    }

    /// σ̄_I^{α̇β} = G_{sIJ} σ̄_s^J, the same for both signs. Signature (v_, d^, u^).
    pub fn bar_lowered(&self) -> &Tensor {
        &self.bar_lowered
    }

    /// σ^I_α^{β̇}: second index raised with the dotted metric.
    pub fn sigma_raised_second(&self, m: &SpinorMetric) -> Tensor {
        Tensor::einsum("br,Iar->Iab", &[&m.eps_upper_dotted, &self.sigma], Typing::Strict).expect("typed")
    }

    /// σ̄_{Iα̇}^β: first index lowered with the dotted metric.
    pub fn bar_lowered_first(&self, m: &SpinorMetric) -> Tensor {
        Tensor::einsum("rb,Ibs->Irs", &[&m.eps_lower_dotted, &self.bar_lowered], Typing::Strict).expect("typed")
    }
}

impl MinkowskiMetric {
    pub fn upper(&self, s: Sign) -> &Tensor {
        &self.upper[slot(s)]
    }

    pub fn lower(&self, s: Sign) -> &Tensor {
        &self.lower[slot(s)]
    }
}

/// The classical Pauli set (σ⁰ = 1, σ¹, σ², σ³).
pub fn pauli(p: &ParameterSet) -> Tensor {
    let (o, z, i) = (p.one(), p.zero(), Scalar::i(p.prec));
    let mats = [
        [[o.clone(), z.clone()], [z.clone(), o.clone()]],
        [[z.clone(), o.clone()], [o.clone(), z.clone()]],
        [[z.clone(), -&i], [i.clone(), z.clone()]],
        [[o.clone(), z.clone()], [z.clone(), -&o]],
    ];
    Tensor::from_fn(&[VU, UL, DL], p.prec, |ix| mats[ix[0]][ix[1]][ix[2]].clone())
}

fn trace_metric(p: &ParameterSet, m: &SpinorMetric, sigma: &Tensor, bar: &Tensor) -> Result<Tensor> {
    let k = Scalar::from_real(p.big_q.clone()).recip();
    Ok(Tensor::einsum("an,Iab,Jbg,gn->IJ", &[&m.eps_upper, sigma, bar, &m.eps_lower], Typing::Strict)?.scale(&k))
}

fn trace_metric_reversed(p: &ParameterSet, m: &SpinorMetric, sigma: &Tensor, bar: &Tensor) -> Result<Tensor> {
    let k = Scalar::from_real(p.big_q.clone()).recip();
    let t = Tensor::einsum(
        "ng,Iga,Jab,nb->IJ",
        &[&m.eps_lower_dotted, bar, sigma, &m.eps_upper_dotted],
        Typing::Strict,
    )?;
    Ok(t.scale(&k))
}

fn invert(p: &ParameterSet, g: &Tensor) -> Result<Tensor> {
    let inv = g.to_matrix(1).inverse(&p.pivot_threshold())?;
    Ok(Tensor::from_matrix(&[VL, VL], &inv))
}

fn reconstruct(m: &SpinorMetric, rm: &RMatrixPair, s: Sign, bar: &Tensor) -> Result<Tensor> {
    Tensor::einsum(
        "lg,lnab,mn,Igm->Iab",
        &[&m.eps_lower_dotted, rm.dotted_undotted(s), &m.eps_lower, bar],
        Typing::Strict,
    )
}

/// Build σ, σ̄_± and σ̄_I; fails if σ̄_± does not map back to σ.
pub fn make_sigma(p: &ParameterSet, m: &SpinorMetric, rm: &RMatrixPair) -> Result<SigmaSet> {
    let sigma = pauli(p);
    let bar = Sign::BOTH.map(|s| {
        Tensor::einsum(
            "al,srln,nb,Isr->Iab",
            &[&m.eps_upper_dotted, rm.undotted_dotted(s.flip()), &m.eps_upper, &sigma],
            Typing::Strict,
        )
        .expect("typed")
    });
    for s in Sign::BOTH {
        let back = reconstruct(m, rm, s, &bar[slot(s)])?;
        let res = back.residual(&sigma)?;
        if res > p.tolerance {
            return Err(Error::ConstructionIdentityFailure {
                id: format!("sigma-round-trip-{}", s.word()),
                residual: sci(&res),
                tolerance: sci(&p.tolerance),
            });
        }
    }
    let g = trace_metric(p, m, &sigma, &bar[0])?;
    let bar_lowered = Tensor::einsum("IJ,Jab->Iab", &[&invert(p, &g)?, &bar[0]], Typing::Strict)?;
    Ok(SigmaSet { sigma, bar, bar_lowered })
}

/// G_±^{IJ} from the ε-weighted trace, and G_{±IJ} by inversion.
pub fn make_metric(p: &ParameterSet, m: &SpinorMetric, ss: &SigmaSet) -> Result<MinkowskiMetric> {
    let upper = [trace_metric(p, m, &ss.sigma, &ss.bar[0])?, trace_metric(p, m, &ss.sigma, &ss.bar[1])?];
    let lower = [invert(p, &upper[0])?, invert(p, &upper[1])?];
    Ok(MinkowskiMetric { upper, lower })
}

fn q_scalar(p: &ParameterSet) -> Scalar {
    Scalar::from_real(p.big_q.clone())
}

fn kdelta(a: usize, b: usize, p: &ParameterSet) -> Scalar {
    if a == b {
        p.one()
    } else {
        p.zero()
    }
}

/// G^{IJ} from the explicit bilinear in σ with ε-raised indices.
pub fn metric_closed_form(p: &ParameterSet, m: &SpinorMetric, s: Sign, sigma: &Tensor) -> Result<Tensor> {
    let t1 = Tensor::einsum("ax,rx,Iam,Jmr->IJ", &[&m.eps_upper, &m.eps_lower, sigma, sigma], Typing::Loose)?;
    let ti = Tensor::einsum("ax,mx,Iam->I", &[&m.eps_upper, &m.eps_lower, sigma], Typing::Loose)?;
    let tj = Tensor::einsum("rd,sd,Jsr->J", &[&m.eps_lower, &m.eps_upper, sigma], Typing::Loose)?;
    let (kp, km) = (p.a_half_pow(s.value()), p.a_half_pow(-s.value()));
    let qi = q_scalar(p).recip();
    Ok(Tensor::from_fn(&[VU, VU], p.prec, |ix| {
        let v = t1.get(ix).scale(&kp) + (ti.get(&ix[..1]) * tj.get(&ix[1..])).scale(&km);
        -(v * &qi)
    }))
}

/// G_{IJ} from the explicit bilinear in the lowered dual σ̄_I.
pub fn lowered_closed_form(p: &ParameterSet, m: &SpinorMetric, s: Sign, bar_lowered: &Tensor) -> Result<Tensor> {
    let t1 = Tensor::einsum(
        "Iik,kx,lx,Jli->IJ",
        &[bar_lowered, &m.eps_lower, &m.eps_upper, bar_lowered],
        Typing::Loose,
    )?;
    let t = Tensor::einsum("ax,mx,Iam->I", &[&m.eps_upper, &m.eps_lower, bar_lowered], Typing::Loose)?;
    let (kp, km) = (p.a_half_pow(s.value()), p.a_half_pow(-s.value()));
    let qi = q_scalar(p).recip();
    Ok(Tensor::from_fn(&[VL, VL], p.prec, |ix| {
        let v = t1.get(ix).scale(&km) + (t.get(&ix[..1]) * t.get(&ix[1..])).scale(&kp);
        -(v * &qi)
    }))
}

/// X_{αβ̇} = X_I σ^I_{αβ̇}.
pub fn vector_to_bispinor(x: &Tensor, ss: &SigmaSet) -> Result<Tensor> {
    Tensor::einsum("I,Iab->ab", &[x, &ss.sigma], Typing::Strict)
}

/// X_I from X_{αβ̇} through the sign-independent dual σ̄_I.
pub fn bispinor_to_vector(p: &ParameterSet, m: &SpinorMetric, xb: &Tensor, ss: &SigmaSet) -> Result<Tensor> {
    let raised = Tensor::einsum("br,ar->ab", &[&m.eps_upper_dotted, xb], Typing::Strict)?;
    let t = Tensor::einsum("ab,Iba->I", &[&raised, &ss.bar_lowered_first(m)], Typing::Strict)?;
    Ok(t.scale(&q_scalar(p).recip()))
}

/// X_I from X_{αβ̇} through σ̄_s^J and G_{sJI}.
pub fn bispinor_to_vector_weighted(
    p: &ParameterSet,
    m: &SpinorMetric,
    xb: &Tensor,
    ss: &SigmaSet,
    mm: &MinkowskiMetric,
    s: Sign,
) -> Result<Tensor> {
    let t = Tensor::einsum("an,ab,Jbg,gn->J", &[&m.eps_upper, xb, ss.bar(s), &m.eps_lower], Typing::Strict)?;
    let t = t.scale(&q_scalar(p).recip());
    Tensor::einsum("J,JK->K", &[&t, mm.lower(s)], Typing::Strict)
}

/// The unit covector e_I.
pub fn basis_covector(p: &ParameterSet, i: usize) -> Tensor {
    Tensor::from_fn(&[VL], p.prec, |ix| kdelta(ix[0], i, p))
}

fn spinor_swap_conj(t: &Tensor) -> Tensor {
    t.conj().permute(&[0, 2, 1])
}

/// Every sigma-layer identity at this point.
pub fn verify(
    p: &ParameterSet,
    m: &SpinorMetric,
    rm: &RMatrixPair,
    ss: &SigmaSet,
    mm: &MinkowskiMetric,
) -> Result<Vec<Check>> {
    let tol = &p.tolerance;
    let q = q_scalar(p);
    let mut out = Vec::new();
    out.push(Check::holds("sigma-hermitian", spinor_swap_conj(&ss.sigma).residual_values(&ss.sigma), tol));
    out.push(Check::holds(
        "sigma-bar-sign-independence",
        Tensor::einsum("IJ,Jab->Iab", &[mm.lower(Sign::Minus), ss.bar(Sign::Minus)], Typing::Strict)?
            .residual(&ss.bar_lowered)?,
        tol,
    ));
    let sig_up2 = ss.sigma_raised_second(m);
    let sbi_low1 = ss.bar_lowered_first(m);
    for s in Sign::BOTH {
        let w = s.word();
        let (g, gl, bar) = (mm.upper(s), mm.lower(s), ss.bar(s));
        out.push(Check::holds(format!("sigma-bar-hermitian-{w}"), spinor_swap_conj(bar).residual_values(bar), tol));
        out.push(Check::holds(
            format!("sigma-round-trip-{w}"),
            reconstruct(m, rm, s, bar)?.residual(&ss.sigma)?,
            tol,
        ));
        out.push(Check::holds(
            format!("metric-hermitian-{w}"),
            g.conj().permute(&[1, 0]).residual(g)?,
            tol,
        ));
        let prod = Tensor::einsum("IJ,JK->IK", &[g, gl], Typing::Strict)?;
        out.push(Check::holds(
            format!("metric-inverse-{w}"),
            prod.residual_values(&Tensor::delta(Family::Vector, p.prec)),
            tol,
        ));
        out.push(Check::holds(
            format!("metric-trace-order-{w}"),
            trace_metric_reversed(p, m, &ss.sigma, bar)?.residual(g)?,
            tol,
        ));
        out.push(Check::holds(
            format!("metric-closed-form-{w}"),
            metric_closed_form(p, m, s, &ss.sigma)?.residual(g)?,
            tol,
        ));
        out.push(Check::holds(
            format!("metric-lowered-closed-form-{w}"),
            lowered_closed_form(p, m, s, &ss.bar_lowered)?.residual(gl)?,
            tol,
        ));
        let top = Scalar::from_real(-p.a_half_pow(-3 * s.value()));
        out.push(Check::holds(format!("metric-time-entry-{w}"), (g.get(&[0, 0]) - &top).abs(), tol));
        if p.is_classical() {
            let mink = Tensor::from_fn(&[VU, VU], p.prec, |ix| {
                let v = kdelta(ix[0], ix[1], p);
                if ix[0] == 0 {
                    -v
                } else {
                    v
                }
            });
            out.push(Check::holds(format!("metric-classical-{w}"), g.residual(&mink)?, tol));
        }

        // completeness
        let lhs = Tensor::einsum("Iab,Irs->abrs", &[&ss.sigma, &ss.bar_lowered], Typing::Strict)?;
        let rhs = Tensor::from_fn(lhs.sig(), p.prec, |ix| {
            let (a, b, r, s2) = (ix[0], ix[1], ix[2], ix[3]);
            let mut v = p.zero();
            if s2 == a {
                for d in 0..2 {
                    v.add_mul(m.eps_lower_dotted.get(&[b, d]), m.eps_upper_dotted.get(&[r, d]));
                }
            }
            v * &q
        });
        out.push(Check::holds(format!("completeness-dual-{w}"), lhs.residual(&rhs)?, tol));

        let sig_low = Tensor::einsum("IJ,Jab->Iab", &[gl, &ss.sigma], Typing::Strict)?;
        let lhs = Tensor::einsum("Iab,Irs->abrs", &[&sig_low, bar], Typing::Strict)?;
        let rhs = Tensor::from_fn(lhs.sig(), p.prec, |ix| {
            let (a, b, r, s2) = (ix[0], ix[1], ix[2], ix[3]);
            let mut v = p.zero();
            if r == b {
                for d in 0..2 {
                    v.add_mul(m.eps_lower.get(&[d, a]), m.eps_upper.get(&[d, s2]));
                }
            }
            v * &q
        });
        out.push(Check::holds(format!("completeness-metric-weighted-{w}"), lhs.residual(&rhs)?, tol));

        let lhs = Tensor::einsum("Iab,Irs->abrs", &[&sig_up2, &sbi_low1], Typing::Strict)?;
        let rhs = Tensor::from_fn(lhs.sig(), p.prec, |ix| {
            kdelta(ix[3], ix[0], p) * kdelta(ix[1], ix[2], p) * &q
        });
        out.push(Check::holds(format!("completeness-mixed-dual-{w}"), lhs.residual(&rhs)?, tol));

        let sig_low_up1 = Tensor::einsum("Irb,ra->Iab", &[&sig_low, &m.eps_upper], Typing::Strict)?;
        let bar_low2 = Tensor::einsum("Irb,bs->Irs", &[bar, &m.eps_lower], Typing::Strict)?;
        let lhs = Tensor::einsum("Iab,Irs->abrs", &[&sig_low_up1, &bar_low2], Typing::Strict)?;
        let rhs = Tensor::from_fn(lhs.sig(), p.prec, |ix| {
            kdelta(ix[0], ix[3], p) * kdelta(ix[2], ix[1], p) * &q
        });
        out.push(Check::holds(format!("completeness-mixed-metric-weighted-{w}"), lhs.residual(&rhs)?, tol));

        out.extend(verify_dual_identities(p, m, rm, ss, mm, s)?);

        // vector ↔ bispinor
        let mut trip = p.real(0);
        let mut agree = p.real(0);
        for i in 0..4 {
            let e = basis_covector(p, i);
            let xb = vector_to_bispinor(&e, ss)?;
            let back = bispinor_to_vector(p, m, &xb, ss)?;
            let back2 = bispinor_to_vector_weighted(p, m, &xb, ss, mm, s)?;
            trip = trip.max(&back.residual(&e)?);
            agree = agree.max(&back.residual(&back2)?);
        }
        out.push(Check::holds(format!("vector-bispinor-round-trip-{w}"), trip, tol));
        out.push(Check::holds(format!("vector-bispinor-inverse-forms-agree-{w}"), agree, tol));
    }
    Ok(out)
}

/// The duality identities between σ̄_s, G_s and R^{−s}, plus the contraction
/// G_s^{LK} σ̄_{Lτ̇}^δ σ̄_{Kν̇}^σ.
pub fn verify_dual_identities(
    p: &ParameterSet,
    m: &SpinorMetric,
    rm: &RMatrixPair,
    ss: &SigmaSet,
    mm: &MinkowskiMetric,
    s: Sign,
) -> Result<Vec<Check>> {
    let w = s.word();
    let tol = &p.tolerance;
    let (g, gl) = (mm.upper(s), mm.lower(s));
    let sbi_low1 = ss.bar_lowered_first(m);
    let sig_up2 = ss.sigma_raised_second(m);
    let mut out = Vec::new();

    let lhs = Tensor::einsum("ad,Nbg,gd,NL->Lab", &[&m.eps_upper, ss.bar(s), &m.eps_lower, gl], Typing::Strict)?;
    let rhs = Tensor::einsum(
        "nm,Lma,nb->Lab",
        &[&m.eps_lower_dotted, &ss.bar_lowered, &m.eps_upper_dotted],
        Typing::Strict,
    )?;
    out.push(Check::holds(format!("dual-metric-identity-{w}"), lhs.residual(&rhs)?, tol));

    let lhs = Tensor::einsum("Nab,NK->Kab", &[&sbi_low1, g], Typing::Strict)?;
    let rhs = dual_r_side(m, rm, s, &sig_up2)?;
    out.push(Check::holds(format!("dual-r-identity-{w}"), lhs.residual(&rhs)?, tol));

    let lhs = Tensor::einsum("LK,Ltd,Kns->tdns", &[g, &sbi_low1, &sbi_low1], Typing::Strict)?;
    let (kp, km) = (p.a_half_pow(s.value()), p.a_half_pow(-s.value()));
    let q = q_scalar(p);
    let eu = &m.eps_upper;
    let rhs = Tensor::from_fn(lhs.sig(), p.prec, |ix| {
        let (t, d, n, s2) = (ix[0], ix[1], ix[2], ix[3]);
        let v = (eu.get(&[d, n]) * eu.get(&[t, s2])).scale(&kp) + (eu.get(&[d, t]) * eu.get(&[s2, n])).scale(&km);
        -(v * &q)
    });
    out.push(Check::holds(format!("dual-metric-contraction-{w}"), lhs.residual_values(&rhs), tol));
    Ok(out)
}

/// ε_{ρ̇α̇} R^{−sβρ̇}_{ν̇σ} ε^{σδ} σ^K_δ^{ν̇}.
pub fn dual_r_side(m: &SpinorMetric, rm: &RMatrixPair, s: Sign, sig_up2: &Tensor) -> Result<Tensor> {
    Tensor::einsum(
        "ra,brns,sd,Kdn->Kab",
        &[&m.eps_lower_dotted, rm.undotted_dotted(s.flip()), &m.eps_upper, sig_up2],
        Typing::Strict,
    )
}

/// G as a plain 4×4 matrix.
pub fn as_matrix(t: &Tensor) -> CMatrix {
    t.to_matrix(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use crate::rmat::make_r;
    use crate::tensor::make_spinor_metric;

    fn build(q: &str, r: &str) -> (ParameterSet, SpinorMetric, RMatrixPair, SigmaSet, MinkowskiMetric) {
        let p = make_params(q, r, Sign::Plus, 60).unwrap();
        let m = make_spinor_metric(&p);
        let rm = make_r(&p, &m).unwrap();
        let ss = make_sigma(&p, &m, &rm).unwrap();
        let mm = make_metric(&p, &m, &ss).unwrap();
        (p, m, rm, ss, mm)
    }

    #[test]
    fn all_identities_hold() {
        for (q, r) in [("1", "0"), ("2", "0"), ("2", "1/3"), ("1/2", "1/5")] {
            let (p, m, rm, ss, mm) = build(q, r);
            for c in verify(&p, &m, &rm, &ss, &mm).unwrap() {
                assert!(c.passed(), "{q},{r}: {c:?}");
            }
        }
    }

    #[test]
    fn fixture_required_entries_match() {
        let (p, _, _, _, mm) = build("2", "1/3");
        let fx = fixture::MetricFixture::builtin();
        for s in Sign::BOTH {
            let rows = fixture::compare(&p, &fx, s, mm.upper(s), mm.lower(s)).unwrap();
            assert!(rows.iter().filter(|e| e.required).all(|e| e.matches));
            let bad: Vec<_> = rows.iter().filter(|e| !e.matches).map(|e| (e.matrix, e.row, e.col)).collect();
            assert_eq!(bad, vec![("upper", 2, 3), ("upper", 3, 2)]);
        }
    }

    #[test]
    fn classical_vector_is_identity_bispinor() {
        let (p, _, _, ss, _) = build("1", "0");
        let xb = vector_to_bispinor(&basis_covector(&p, 0), &ss).unwrap();
        let id = Tensor::from_fn(&[UL, DL], p.prec, |ix| kdelta(ix[0], ix[1], &p));
        assert!(xb.residual(&id).unwrap() <= p.tolerance);
    }

    #[test]
    fn wrong_r_sign_breaks_dual_r_identity() {
        let (p, m, rm, ss, mm) = build("2", "1/3");
        let sig_up2 = ss.sigma_raised_second(&m);
        let lhs = Tensor::einsum("Nab,NK->Kab", &[&ss.bar_lowered_first(&m), mm.upper(Sign::Plus)], Typing::Strict)
            .unwrap();
        let wrong = dual_r_side(&m, &rm, Sign::Minus, &sig_up2).unwrap();
        assert!(lhs.residual(&wrong).unwrap() > p.tolerance);
    }

    #[test]
    fn dropping_inverse_q_breaks_completeness() {
        let (p, m, _, ss, _) = build("2", "1/3");
        let lhs = Tensor::einsum("Iab,Irs->abrs", &[&ss.sigma_raised_second(&m), &ss.bar_lowered_first(&m)], Typing::Strict)
            .unwrap();
        let unscaled = Tensor::from_fn(lhs.sig(), p.prec, |ix| kdelta(ix[3], ix[0], &p) * kdelta(ix[1], ix[2], &p));
        assert!(lhs.residual(&unscaled).unwrap() > p.tolerance);
    }
}
