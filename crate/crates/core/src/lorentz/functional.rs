use rayon::prelude::*;

use super::LorentzGenerators;
use crate::check::{max_residual, Check};
use crate::error::Result;
use crate::frt::checks::basis_words_up_to_two;
use crate::frt::{antipode, convolve, coproduct, counit, AlgebraElement, Functionals, Gen, NormalFormEngine, Order, Word, WordFunctional};
use crate::linalg::CMatrix;
use crate::params::{ParameterSet, Sign};
use crate::scalar::{Real, Scalar};
use crate::sigma::{MinkowskiMetric, SigmaSet};
use crate::tensor::{SpinorMetric, Tensor};

/// F_{sL}^K: the convolution of f_{−s} and f_s contracted with σ̄ and σ.
/// Values are 4×4 matrices with rows L and columns K.
#[derive(Clone, Debug)]
pub struct LorentzFunctional {
    sign: Sign,
    /// (f_{−s} ⊗ f_s)Δ on generators, rows (α,δ), columns (β,γ).
    phi: WordFunctional,
    table: WordFunctional,
    f_minus: WordFunctional,
    f_plus: WordFunctional,
    sbl: Tensor,
    sgu: Tensor,
    q_inv: Scalar,
}

impl LorentzFunctional {
    pub fn new(p: &ParameterSet, m: &SpinorMetric, ss: &SigmaSet, fun: &Functionals, s: Sign) -> Self {
        let (fm, fp) = (fun.f(s.flip()), fun.f(s));
        let phi_gens = Gen::all()
            .map(|g| {
                CMatrix::from_fn(4, 4, p.prec, |r, c| {
                    let (al, de, be, ga) = (r / 2, r % 2, c / 2, c % 2);
                    let mut acc = Scalar::zero(p.prec);
                    for k in 0..2 {
                        let a = fm.on_gen(Gen::new(g.is_dotted(), g.row(), k)).get(al, be);
                        let b = fp.on_gen(Gen::new(g.is_dotted(), k, g.col())).get(de, ga);
                        acc.add_mul(a, b);
                    }
                    acc
                })
            })
            .collect();
        let mut lf = LorentzFunctional {
            sign: s,
            phi: WordFunctional::new(phi_gens, Order::Forward),
            table: WordFunctional::new(vec![CMatrix::identity(4, p.prec); Gen::COUNT], Order::Forward),
            f_minus: fm.clone(),
            f_plus: fp.clone(),
            sbl: ss.bar_lowered_first(m),
            sgu: ss.sigma_raised_second(m),
            q_inv: Scalar::from_real(p.big_q.clone()).recip(),
        };
        let gens = Gen::all().map(|g| lf.contract(lf.phi.on_gen(g))).collect();
        lf.table = WordFunctional::new(gens, Order::Forward);
        lf
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The generator table of the multiplicative extension.
    pub fn table(&self) -> &WordFunctional {
        &self.table
    }

    /// (1/Q) T_{(αδ),(β̇γ)} σ̄_{Lα̇}^δ σ^K_γ^β̇.
    fn contract(&self, t: &CMatrix) -> CMatrix {
        let prec = t.prec();
        CMatrix::from_fn(4, 4, prec, |l, k| {
            let mut acc = Scalar::zero(prec);
            for r in 0..4 {
                for c in 0..4 {
                    let (al, de, be, ga) = (r / 2, r % 2, c / 2, c % 2);
                    let v = t.get(r, c);
                    if !v.is_zero() {
                        acc += v * self.sbl.get(&[l, al, de]) * self.sgu.get(&[k, ga, be]);
                    }
                }
            }
            acc * &self.q_inv
        })
    }

    /// F(x) via the multiplicative generator table.
    pub fn on(&self, x: &AlgebraElement) -> CMatrix {
        self.table.on(x)
    }

    pub fn on_word(&self, w: &Word) -> CMatrix {
        self.table.on_word(w)
    }

    /// F_{sL}^K(x).
    pub fn eval(&self, l: usize, k: usize, x: &AlgebraElement) -> Scalar {
        self.on(x).get(l, k).clone()
    }

    /// F(x) by contracting the spinor-level product over each word.
    pub fn on_direct(&self, x: &AlgebraElement) -> CMatrix {
        self.contract(&self.phi.on(x))
    }

    /// F(x) from the coproduct of x and the two spinor functionals.
    pub fn on_convolution(&self, x: &AlgebraElement) -> CMatrix {
        let v = convolve(&self.f_minus, &self.f_plus, x);
        let t = CMatrix::from_fn(4, 4, x.prec(), |r, c| {
            let (al, de, be, ga) = (r / 2, r % 2, c / 2, c % 2);
            v[((al * 2 + be) * 2 + de) * 2 + ga].clone()
        });
        self.contract(&t)
    }

    /// a ⋆ F = Σ F(a₍₁₎) a₍₂₎, entry (L, K) at 4L + K.
    pub fn left_star(&self, x: &AlgebraElement) -> Vec<AlgebraElement> {
        self.table.left_star(x)
    }

    /// F ⋆ a = Σ a₍₁₎ F(a₍₂₎), entry (L, K) at 4L + K.
    pub fn right_star(&self, x: &AlgebraElement) -> Vec<AlgebraElement> {
        self.table.right_star(x)
    }
}

/// F_+ and F_−.
#[derive(Clone, Debug)]
pub struct BigFunctionals {
    f: [LorentzFunctional; 2],
}

impl BigFunctionals {
    pub fn new(p: &ParameterSet, m: &SpinorMetric, ss: &SigmaSet, fun: &Functionals) -> Self {
        BigFunctionals { f: Sign::BOTH.map(|s| LorentzFunctional::new(p, m, ss, fun, s)) }
    }

    pub fn get(&self, s: Sign) -> &LorentzFunctional {
        match s {
            Sign::Plus => &self.f[0],
            Sign::Minus => &self.f[1],
        }
    }
}

fn scaled_identity(eps: &Scalar) -> CMatrix {
    CMatrix::identity(4, eps.prec()).scale(eps)
}

/// Unit, multiplicativity, the two independent evaluation paths, star law,
/// convolution inverse and the metric-twisted laws, on the unit, the
/// generators and all degree-2 words.
pub fn verify_functional_laws(
    p: &ParameterSet,
    m: &SpinorMetric,
    mm: &MinkowskiMetric,
    bf: &BigFunctionals,
) -> Vec<Check> {
    let (prec, bits, tol) = (p.prec, p.prec.bits(), &p.tolerance);
    let mut words = vec![Word::unit()];
    words.extend(basis_words_up_to_two());
    let mut out = Vec::new();
    for s in Sign::BOTH {
        let f = bf.get(s);
        let w = s.word();
        let (gu, gl) = (mm.upper(s).to_matrix(1), mm.lower(s).to_matrix(1));
        let one = AlgebraElement::one(prec);
        out.push(Check::holds(
            format!("big-functional-unit-{w}"),
            f.on(&one).residual(&CMatrix::identity(4, prec)),
            tol,
        ));
        let rows: Vec<[Real; 6]> = words
            .par_iter()
            .map(|wd| {
                let x = AlgebraElement::word(wd.clone(), prec);
                let fx = f.on(&x);
                let multiplicative = fx.residual(&f.on_direct(&x));
                let conv = fx.residual(&f.on_convolution(&x));
                let star = fx.conj().residual(&f.on(&antipode(&x.star(), m)));
                let eps = counit(&x);
                let (mut a, mut b) = (CMatrix::zeros(4, 4, prec), CMatrix::zeros(4, 4, prec));
                // C[N,L,M,K] = Σ F_N^L(a₍₁₎) F_M^K(a₍₂₎)
                let mut cc = vec![Scalar::zero(prec); 256];
                for ((l, r), c) in coproduct(&x).terms() {
                    let (xl, xr) = (AlgebraElement::word(l.clone(), prec), AlgebraElement::word(r.clone(), prec));
                    let (f1, f2) = (f.on_word(l), f.on_word(r));
                    a.add_scaled(c, &f1.mul(&f.on(&antipode(&xr, m))));
                    b.add_scaled(c, &f.on(&antipode(&xl, m)).mul(&f2));
                    let k1 = f1.kron(&f2).scale(c);
                    for (i, v) in k1.data().iter().enumerate() {
                        cc[i] += v;
                    }
                }
                let conv_inv = max_residual(
                    bits,
                    [a.residual(&scaled_identity(&eps)), b.residual(&scaled_identity(&eps))],
                );
                // kron index: row 4N+M, column 4L+K
                let c4 = |n: usize, l: usize, mi: usize, k: usize| &cc[(4 * n + mi) * 16 + 4 * l + k];
                let (mut up, mut lo) = (Real::new(bits), Real::new(bits));
                for x1 in 0..4 {
                    for x2 in 0..4 {
                        // G^{MN} C[N,L,M,K] = G^{KL} ε with (K,L) = (x1,x2)
                        let mut s1 = Scalar::zero(prec);
                        // G_{KL} C[N,L,M,K] = G_{MN} ε with (M,N) = (x1,x2)
                        let mut s2 = Scalar::zero(prec);
                        for y1 in 0..4 {
                            for y2 in 0..4 {
                                s1 += gu.get(y1, y2) * c4(y2, x2, y1, x1);
                                s2 += gl.get(y1, y2) * c4(x2, y2, x1, y1);
                            }
                        }
                        let r1 = (s1 - gu.get(x1, x2) * &eps).abs();
                        let r2 = (s2 - gl.get(x1, x2) * &eps).abs();
                        if r1 > up {
                            up = r1;
                        }
                        if r2 > lo {
                            lo = r2;
                        }
                    }
                }
                [multiplicative, conv, star, conv_inv, up, lo]
            })
            .collect();
        let col = |i: usize| max_residual(bits, rows.iter().map(|r| r[i].clone()));
        for (i, id) in [
            "big-functional-multiplicative",
            "big-functional-convolution-path",
            "big-functional-star",
            "big-functional-antipode-convolution",
            "big-functional-metric-twisted-upper",
            "big-functional-metric-twisted-lower",
        ]
        .into_iter()
        .enumerate()
        {
            out.push(Check::holds(format!("{id}-{w}"), col(i), tol));
        }
    }
    out
}

/// Worst normal-form residual of Λ_L^I (F_I^K ⋆ a) − (a ⋆ F_L^I) Λ_I^K over
/// (L, K) and a among the generators and all degree-2 words.
pub fn exchange_residual(eng: &NormalFormEngine, f: &LorentzFunctional, lg: &LorentzGenerators) -> Result<Real> {
    let prec = eng.params().prec;
    let res = basis_words_up_to_two()
        .par_iter()
        .map(|wd| {
            let a = AlgebraElement::word(wd.clone(), prec);
            let (fa, af) = (f.right_star(&a), f.left_star(&a));
            let mut worst = Real::new(prec.bits());
            for l in 0..4 {
                for k in 0..4 {
                    let mut diff = AlgebraElement::zero(prec);
                    for i in 0..4 {
                        diff = diff.add(&lg.get(l, i).mul(&fa[4 * i + k])).sub(&af[4 * l + i].mul(lg.get(i, k)));
                    }
                    let r = eng.residual(&diff)?;
                    if r > worst {
                        worst = r;
                    }
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(max_residual(prec.bits(), res))
}

/// The exchange law with Λ for the sign of the engine's cross relations.
pub fn verify_exchange_with_lambda(
    eng: &NormalFormEngine,
    bf: &BigFunctionals,
    lg: &LorentzGenerators,
) -> Result<Vec<Check>> {
    let p = eng.params();
    eng.cross()
        .signs()
        .iter()
        .map(|&s| {
            let res = exchange_residual(eng, bf.get(s), lg)?;
            Ok(Check::holds(format!("big-functional-exchange-with-lambda-{}", s.word()), res, &p.tolerance))
        })
        .collect()
}
