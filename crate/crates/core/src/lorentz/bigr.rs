use super::{BigFunctionals, LorentzGenerators};
use crate::check::{max_residual, Check};
use crate::linalg::CMatrix;
use crate::params::{ParameterSet, Sign};
use crate::rmat::{braid_residual, flip};
use crate::scalar::{Real, Scalar};
use crate::sigma::MinkowskiMetric;
use crate::tensor::{Tensor, VL, VU};

/// ℛ^{±NM}_{KL} = F_{±K}^M(Λ_L^N).
#[derive(Clone, Debug)]
pub struct BigRMatrix {
    r: [Tensor; 2],
}

impl BigRMatrix {
    pub fn tensor(&self, s: Sign) -> &Tensor {
        match s {
            Sign::Plus => &self.r[0],
            Sign::Minus => &self.r[1],
        }
    }

    /// 16×16 operator, rows (N,M), columns (K,L).
    pub fn matrix(&self, s: Sign) -> CMatrix {
        self.tensor(s).to_matrix(2)
    }
}

fn assemble(lg: &LorentzGenerators, eval: impl Fn(&crate::frt::AlgebraElement) -> CMatrix) -> Tensor {
    let values: Vec<CMatrix> = (0..16).map(|i| eval(lg.get(i / 4, i % 4))).collect();
    // values[4L + N][K, M]
    Tensor::from_fn(&[VU, VU, VL, VL], lg.prec(), |ix| {
        let (n, m, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        values[4 * l + n].get(k, m).clone()
    })
}

pub fn make_big_r(lg: &LorentzGenerators, bf: &BigFunctionals) -> BigRMatrix {
    BigRMatrix { r: Sign::BOTH.map(|s| assemble(lg, |x| bf.get(s).on(x))) }
}

/// Multiplicities of 1, −a^{2s}, −a^{−2s} from projector traces. When the
/// last two coincide (a = 1) they are merged and compared to 6.
fn spectrum_residual(p: &ParameterSet, r: &CMatrix, s: Sign) -> Real {
    let prec = p.prec;
    let id = CMatrix::identity(16, prec);
    let one = p.one();
    let l2 = -Scalar::from_real(p.a_half_pow(4 * s.value()));
    let l3 = -Scalar::from_real(p.a_half_pow(-4 * s.value()));
    let shifted = |l: &Scalar| r.sub(&id.scale(l));
    let gap = |m: &CMatrix, expect: i64| (m.trace() - p.scalar(expect)).abs();
    if (&l2 - &l3).abs() < p.pivot_threshold() {
        let p1 = shifted(&l2).scale(&(&one - &l2).recip());
        let p2 = shifted(&one).scale(&(&l2 - &one).recip());
        return max_residual(prec.bits(), [gap(&p1, 10), gap(&p2, 6)]);
    }
    let proj = |a: &Scalar, b: &Scalar, at: &Scalar| {
        shifted(a).mul(&shifted(b)).scale(&((at - a) * (at - b)).recip())
    };
    let p1 = proj(&l2, &l3, &one);
    let p2 = proj(&one, &l3, &l2);
    let p3 = proj(&one, &l2, &l3);
    max_residual(prec.bits(), [gap(&p1, 10), gap(&p2, 3), gap(&p3, 3)])
}

/// Metric compatibility, cubic Hecke, spectrum, braid relation, agreement
/// of the two evaluation paths, the classical flip and ℛ⁺ℛ⁻ = 1.
pub fn verify_big_r(
    p: &ParameterSet,
    mm: &MinkowskiMetric,
    br: &BigRMatrix,
    bf: &BigFunctionals,
    lg: &LorentzGenerators,
) -> Vec<Check> {
    let (prec, tol) = (p.prec, &p.tolerance);
    let id = CMatrix::identity(16, prec);
    let mut out = Vec::new();
    for s in Sign::BOTH {
        let w = s.word();
        let r = br.matrix(s);
        let gu = mm.upper(s).to_matrix(1);
        let gl = mm.lower(s).to_matrix(1);
        // flattened metrics as column / row vectors over the pair index
        let gu_col = CMatrix::from_vec(16, 1, gu.data().to_vec());
        let gl_row = CMatrix::from_vec(1, 16, gl.data().to_vec());
        out.push(Check::holds(format!("bigr-metric-upper-{w}"), r.mul(&gu_col).residual(&gu_col), tol));
        out.push(Check::holds(format!("bigr-metric-lower-{w}"), gl_row.mul(&r).residual(&gl_row), tol));
        let a2 = Scalar::from_real(p.a_half_pow(4 * s.value()));
        let am2 = Scalar::from_real(p.a_half_pow(-4 * s.value()));
        let hecke = r.add(&id.scale(&a2)).mul(&r.add(&id.scale(&am2))).mul(&r.sub(&id));
        out.push(Check::holds(format!("bigr-hecke-{w}"), hecke.max_abs(), tol));
        out.push(Check::holds(format!("bigr-spectrum-{w}"), spectrum_residual(p, &r, s), tol));
        out.push(Check::holds(format!("bigr-braid-{w}"), braid_residual(&r, 4), tol));
        let conv = assemble(lg, |x| bf.get(s).on_convolution(x)).to_matrix(2);
        out.push(Check::holds(format!("bigr-evaluation-paths-agree-{w}"), r.residual(&conv), tol));
        let to_flip = r.residual(&flip(4, prec));
        let fid = format!("bigr-classical-flip-{w}");
        out.push(if p.is_classical() { Check::holds(fid, to_flip, tol) } else { Check::info(fid, to_flip, tol) });
    }
    let prod = br.matrix(Sign::Plus).mul(&br.matrix(Sign::Minus));
    out.push(
        Check::holds("bigr-mutual-inverse", prod.residual(&id), tol)
            .with_note("both factors share the spectrum {1, -a^2, -a^-2}, so they cannot be inverse away from a = 1"),
    );
    out
}
