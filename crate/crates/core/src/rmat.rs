//! The R^± matrices R^{±αβ}_{γδ} = δ^α_γ δ^β_δ + a^{±1} ε^{αβ} ε_{γδ}, their
//! mixed dotted/undotted companions, and the identities they satisfy.

use rug::Float;

use crate::check::{max_residual, Check};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::params::{ParameterSet, Sign};
use crate::scalar::{sci, Prec, Real, Scalar};
use crate::tensor::{Family, SpinorMetric, Tensor, Typing, DL, DU, UL, UU};

/// R^± and the mixed values R^{±α̇β}_{γδ̇}, R^{±βα̇}_{δ̇γ}.
#[derive(Clone, Debug)]
pub struct RMatrixPair {
    plus: Tensor,
    minus: Tensor,
    du: [Tensor; 2],
    ud: [Tensor; 2],
}

fn slot(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl RMatrixPair {
    /// R^{s αβ}_{γδ}, signature (u^, u^, u_, u_).
    pub fn r(&self, s: Sign) -> &Tensor {
        match s {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    /// R^{s δ̇γ}_{ασ̇} = a^{s/2} R^{−s γσ}_{δα}, signature (d^, u^, u_, d_).
    pub fn dotted_undotted(&self, s: Sign) -> &Tensor {
        &self.du[slot(s)]
    }

    /// R^{s γδ̇}_{σ̇α} = a^{−s/2} ε_{δλ} R^{s γλ}_{να} ε^{νσ}, signature (u^, d^, d_, u_).
    pub fn undotted_dotted(&self, s: Sign) -> &Tensor {
        &self.ud[slot(s)]
    }

    /// R^s as a 4×4 operator, rows (α, β), columns (γ, δ).
    pub fn matrix(&self, s: Sign) -> CMatrix {
        self.r(s).to_matrix(2)
    }
}

fn closed_form(p: &ParameterSet, m: &SpinorMetric, s: Sign) -> Tensor {
    let prec = p.prec;
    let k = p.a_half_pow(2 * s.value());
    Tensor::from_fn(&[UU, UU, UL, UL], prec, |i| {
        let (al, be, ga, de) = (i[0], i[1], i[2], i[3]);
        let mut v = m.eps_upper.get(&[al, be]) * m.eps_lower.get(&[ga, de]);
        v = v.scale(&k);
        if al == ga && be == de {
            v += Scalar::one(prec);
        }
        v
    })
}

/// Build R^± from the spinor metric and the mixed values; verify the
/// inverse pair and Hecke relations before returning.
pub fn make_r(p: &ParameterSet, m: &SpinorMetric) -> Result<RMatrixPair> {
    let plus = closed_form(p, m, Sign::Plus);
    let minus = closed_form(p, m, Sign::Minus);
    let r = |s: Sign| if s == Sign::Plus { &plus } else { &minus };
    let du = Sign::BOTH.map(|s| {
        let k = p.a_half_pow(s.value());
        let src = r(s.flip());
        Tensor::from_fn(&[DU, UU, UL, DL], p.prec, |i| {
            let (dd, ga, al, sd) = (i[0], i[1], i[2], i[3]);
            src.get(&[ga, sd, dd, al]).scale(&k)
        })
    });
    let ud = Sign::BOTH.map(|s| {
        let k = p.a_half_pow(-s.value());
        let src = r(s);
        Tensor::from_fn(&[UU, DU, DL, UL], p.prec, |i| {
            let (ga, dd, sd, al) = (i[0], i[1], i[2], i[3]);
            let mut acc = Scalar::zero(p.prec);
            for la in 0..2 {
                for nu in 0..2 {
                    let e = m.eps_lower.get(&[dd, la]) * m.eps_upper.get(&[nu, sd]);
                    acc.add_mul(&e, src.get(&[ga, la, nu, al]));
                }
            }
            acc.scale(&k)
        })
    });
    let rm = RMatrixPair { plus, minus, du, ud };
    for c in verify_inverse_hecke(p, &rm) {
        if !c.passed() {
            return Err(Error::ConstructionIdentityFailure {
                id: c.id,
                residual: sci(&c.residual),
                tolerance: sci(&c.tolerance),
            });
        }
    }
    Ok(rm)
}

/// R⁺R⁻ = 1 and (R^± + a^{±2})(R^± − 1) = 0 as 4×4 operators.
pub fn verify_inverse_hecke(p: &ParameterSet, rm: &RMatrixPair) -> Vec<Check> {
    let prec = p.prec;
    let id = CMatrix::identity(4, prec);
    let (mp, mm) = (rm.matrix(Sign::Plus), rm.matrix(Sign::Minus));
    let mut out = vec![
        Check::holds("rmatrix-inverse-pair", mp.mul(&mm).residual(&id), &p.tolerance),
        Check::holds("rmatrix-inverse-pair-reversed", mm.mul(&mp).residual(&id), &p.tolerance),
    ];
    for s in Sign::BOTH {
        let m = rm.matrix(s);
        let a2 = Scalar::from_real(p.a_half_pow(4 * s.value()));
        let lhs = m.add(&id.scale(&a2)).mul(&m.sub(&id));
        out.push(Check::holds(format!("rmatrix-hecke-{}", s.word()), lhs.max_abs(), &p.tolerance));
    }
    out
}

/// Braid-form Yang–Baxter residual of an n²×n² operator:
/// max |R₁₂R₂₃R₁₂ − R₂₃R₁₂R₂₃| on V⊗V⊗V.
pub fn braid_residual(r: &CMatrix, n: usize) -> Real {
    let prec = r.prec();
    let id = CMatrix::identity(n, prec);
    let r12 = r.kron(&id);
    let r23 = id.kron(r);
    let lhs = r12.mul(&r23).mul(&r12);
    let rhs = r23.mul(&r12).mul(&r23);
    lhs.residual(&rhs)
}

/// Non-braided residual R₁₂R₁₃R₂₃ − R₂₃R₁₃R₁₂ of a 4×4 operator on (C²)⊗3.
pub fn triangle_residual(r: &CMatrix) -> Real {
    let prec = r.prec();
    let e = |a: usize, b: usize, c: usize, d: usize| r.get(2 * a + b, 2 * c + d).clone();
    let delta = |x: usize, y: usize| if x == y { Scalar::one(prec) } else { Scalar::zero(prec) };
    let split = |i: usize| (i / 4, (i / 2) % 2, i % 2);
    let build = |f: &dyn Fn((usize, usize, usize), (usize, usize, usize)) -> Scalar| {
        CMatrix::from_fn(8, 8, prec, |i, j| f(split(i), split(j)))
    };
    let r12 = build(&|(a, b, c), (d, e2, f)| e(a, b, d, e2) * delta(c, f));
    let r13 = build(&|(a, b, c), (d, e2, f)| e(a, c, d, f) * delta(b, e2));
    let r23 = build(&|(a, b, c), (d, e2, f)| e(b, c, e2, f) * delta(a, d));
    r12.mul(&r13).mul(&r23).residual(&r23.mul(&r13).mul(&r12))
}

/// The flip P on C^n ⊗ C^n.
pub fn flip(n: usize, prec: Prec) -> CMatrix {
    CMatrix::from_fn(n * n, n * n, prec, |i, j| {
        if i / n == j % n && i % n == j / n {
            Scalar::one(prec)
        } else {
            Scalar::zero(prec)
        }
    })
}

/// Yang–Baxter in braid form for R^±, and in the non-braided form for P·R^±.
pub fn verify_ybe(p: &ParameterSet, rm: &RMatrixPair) -> Vec<Check> {
    let mut out = Vec::new();
    for s in Sign::BOTH {
        let m = rm.matrix(s);
        out.push(Check::holds(format!("rmatrix-ybe-braid-{}", s.word()), braid_residual(&m, 2), &p.tolerance));
        let pr = flip(2, p.prec).mul(&m);
        out.push(Check::holds(format!("rmatrix-ybe-flipped-{}", s.word()), triangle_residual(&pr), &p.tolerance));
    }
    out
}

/// ε_{αβ} R^{±αλ}_{σγ} R^{±βρ}_{λδ} = a^{±1} ε_{γδ} δ^ρ_σ.
pub fn verify_eps_r(p: &ParameterSet, m: &SpinorMetric, rm: &RMatrixPair) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in Sign::BOTH {
        let r = rm.r(s);
        let lhs = Tensor::einsum("ab,alsg,brld->sgrd", &[&m.eps_lower, r, r], Typing::Strict)?;
        let k = p.a_half_pow(2 * s.value());
        let rhs = Tensor::from_fn(lhs.sig(), p.prec, |i| {
            let (si, ga, rh, de) = (i[0], i[1], i[2], i[3]);
            if si == rh {
                m.eps_lower.get(&[ga, de]).scale(&k)
            } else {
                Scalar::zero(p.prec)
            }
        });
        out.push(Check::holds(format!("rmatrix-eps-r-{}", s.word()), lhs.residual(&rhs)?, &p.tolerance));
    }
    Ok(out)
}

/// The two mixed inverse relations for each sign.
pub fn verify_mixed(p: &ParameterSet, rm: &RMatrixPair) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in Sign::BOTH {
        let dd = Tensor::einsum(
            "dgas,brdg->asbr",
            &[rm.dotted_undotted(s), rm.undotted_dotted(s.flip())],
            Typing::Strict,
        )?;
        let target = Tensor::einsum(
            "ab,sr->asbr",
            &[&Tensor::delta(Family::Undotted, p.prec).permute(&[1, 0]), &Tensor::delta(Family::Dotted, p.prec).permute(&[1, 0])],
            Typing::Strict,
        )?;
        out.push(Check::holds(format!("rmatrix-mixed-inverse-{}", s.word()), dd.residual_values(&target), &p.tolerance));
        let mirror = Tensor::einsum(
            "gdsa,rbgd->asbr",
            &[rm.undotted_dotted(s.flip()), rm.dotted_undotted(s)],
            Typing::Strict,
        )?;
        out.push(Check::holds(
            format!("rmatrix-mixed-inverse-mirror-{}", s.word()),
            mirror.residual_values(&target),
            &p.tolerance,
        ));
    }
    Ok(out)
}

/// Spectrum {1, −a^{±2}}: Hecke fixes the eigenvalues, the trace fixes the
/// multiplicities (3 and 1). The residual is the distance of the implied
/// multiplicity of −a^{±2} from 1.
pub fn verify_spectrum(p: &ParameterSet, rm: &RMatrixPair) -> Vec<Check> {
    Sign::BOTH
        .iter()
        .map(|&s| {
            let tr = rm.matrix(s).trace();
            let a2 = p.a_half_pow(4 * s.value());
            let denom = Float::with_val(p.prec.bits(), &a2 + 1u32);
            // m1 + m2 = 4, m1 − m2·a^{±2} = tr
            let m2 = (Scalar::from_int(p.prec, 4) - tr).scale(&Float::with_val(p.prec.bits(), denom.recip_ref()));
            let res = (m2 - Scalar::one(p.prec)).abs();
            Check::holds(format!("rmatrix-spectrum-{}", s.word()), res, &p.tolerance)
        })
        .collect()
}

/// Every R-matrix identity at this parameter point.
pub fn verify_all(p: &ParameterSet, m: &SpinorMetric, rm: &RMatrixPair) -> Result<Vec<Check>> {
    let mut out = verify_inverse_hecke(p, rm);
    out.extend(verify_ybe(p, rm));
    out.extend(verify_eps_r(p, m, rm)?);
    out.extend(verify_mixed(p, rm)?);
    out.extend(verify_spectrum(p, rm));
    Ok(out)
}

/// Worst residual across a set of checks.
pub fn worst(p: &ParameterSet, checks: &[Check]) -> Real {
    max_residual(p.prec.bits(), checks.iter().map(|c| c.residual.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use crate::tensor::make_spinor_metric;

    fn setup(q: &str, r: &str) -> (ParameterSet, SpinorMetric, RMatrixPair) {
        let p = make_params(q, r, Sign::Plus, 60).unwrap();
        let m = make_spinor_metric(&p);
        let rm = make_r(&p, &m).unwrap();
        (p, m, rm)
    }

    #[test]
    fn classical_r_is_the_flip() {
        let (p, _, rm) = setup("1", "0");
        let f = flip(2, p.prec);
        assert!(rm.matrix(Sign::Plus).residual(&f) <= p.tolerance);
        assert!(rm.matrix(Sign::Minus).residual(&f) <= p.tolerance);
    }

    #[test]
    fn all_identities_at_sample_points() {
        for (q, r) in [("1", "0"), ("2", "0"), ("2", "1/3"), ("1/2", "1/5")] {
            let (p, m, rm) = setup(q, r);
            for c in verify_all(&p, &m, &rm).unwrap() {
                assert!(c.passed(), "{q},{r}: {c:?}");
            }
        }
    }

    #[test]
    fn corrupted_r_breaks_ybe() {
        let (p, _, rm) = setup("2", "1/3");
        let mut m = rm.matrix(Sign::Plus);
        let bumped = m.get(1, 2) + &Scalar::from_f64(p.prec, 0.25);
        m.set(1, 2, bumped);
        assert!(braid_residual(&m, 2) > p.tolerance);
    }

    #[test]
    fn literal_triangle_form_fails_for_braided_r() {
        let (p, _, rm) = setup("2", "1/3");
        assert!(triangle_residual(&rm.matrix(Sign::Plus)) > p.tolerance);
    }

    #[test]
    fn classical_mixed_values_are_identities() {
        let (p, _, rm) = setup("1", "0");
        for s in Sign::BOTH {
            let du = rm.dotted_undotted(s);
            for i in 0..16 {
                let idx = [i / 8, (i / 4) % 2, (i / 2) % 2, i % 2];
                let (dd, ga, al, sd) = (idx[0], idx[1], idx[2], idx[3]);
                let expect = if dd == sd && ga == al { 1 } else { 0 };
                assert!((du.get(&idx) - &p.scalar(expect)).within(&p.tolerance), "{idx:?}");
            }
        }
    }
}
