use super::hopf::{antipode_inverse, coproduct};
use super::{AlgebraElement, Gen, Word};
use crate::linalg::CMatrix;
use crate::params::{ParameterSet, Sign};
use crate::rmat::RMatrixPair;
use crate::scalar::{Prec, Scalar};
use crate::tensor::SpinorMetric;

/// Whether a functional multiplies generator values in word order or in reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Forward,
    Reversed,
}

/// A matrix-valued functional fixed by its values on the eight generators
/// and extended (anti)multiplicatively, with value 1 on the unit.
#[derive(Clone, Debug)]
pub struct WordFunctional {
    dim: usize,
    gens: Vec<CMatrix>,
    order: Order,
    prec: Prec,
}

impl WordFunctional {
    pub fn new(gens: Vec<CMatrix>, order: Order) -> Self {
        assert_eq!(gens.len(), Gen::COUNT);
        let dim = gens[0].rows();
        let prec = gens[0].prec();
        WordFunctional { dim, gens, order, prec }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn on_gen(&self, g: Gen) -> &CMatrix {
        &self.gens[usize::from(g.code())]
    }

    pub fn on_word(&self, w: &Word) -> CMatrix {
        let mut acc = CMatrix::identity(self.dim, self.prec);
        match self.order {
            Order::Forward => w.gens().iter().for_each(|g| acc = acc.mul(self.on_gen(*g))),
            Order::Reversed => w.gens().iter().rev().for_each(|g| acc = acc.mul(self.on_gen(*g))),
        }
        acc
    }

    pub fn on(&self, x: &AlgebraElement) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim, self.prec);
        for (w, c) in x.iter() {
            acc.add_scaled(c, &self.on_word(w));
        }
        acc
    }

    /// A functional with generator values self(images[g]).
    pub fn pulled_back(&self, images: &[AlgebraElement], order: Order) -> WordFunctional {
        WordFunctional::new(images.iter().map(|x| self.on(x)).collect(), order)
    }

    /// a ⋆ F = Σ F(a₍₁₎) a₍₂₎, entry (i, j) at i·dim + j.
    pub fn left_star(&self, x: &AlgebraElement) -> Vec<AlgebraElement> {
        let mut out = vec![AlgebraElement::zero(self.prec); self.dim * self.dim];
        for ((l, r), c) in coproduct(x).terms() {
            let v = self.on_word(l);
            let piece = AlgebraElement::word(r.clone(), self.prec);
            for (k, slot) in out.iter_mut().enumerate() {
                let e = v.get(k / self.dim, k % self.dim);
                if !e.is_zero() {
                    slot.add_scaled(&(c * e), &piece);
                }
            }
        }
        out
    }

    /// F ⋆ a = Σ a₍₁₎ F(a₍₂₎), entry (i, j) at i·dim + j.
    pub fn right_star(&self, x: &AlgebraElement) -> Vec<AlgebraElement> {
        let mut out = vec![AlgebraElement::zero(self.prec); self.dim * self.dim];
        for ((l, r), c) in coproduct(x).terms() {
            let v = self.on_word(r);
            let piece = AlgebraElement::word(l.clone(), self.prec);
            for (k, slot) in out.iter_mut().enumerate() {
                let e = v.get(k / self.dim, k % self.dim);
                if !e.is_zero() {
                    slot.add_scaled(&(c * e), &piece);
                }
            }
        }
        out
    }
}

/// (F₁ ⊗ F₂)Δ(x) as a 4-index array, entry (i, j, k, l) at ((i·d₁ + j)·d₂ + k)·d₂ + l.
pub fn convolve(f1: &WordFunctional, f2: &WordFunctional, x: &AlgebraElement) -> Vec<Scalar> {
    let (d1, d2) = (f1.dim, f2.dim);
    let mut out = vec![Scalar::zero(x.prec()); d1 * d1 * d2 * d2];
    for ((l, r), c) in coproduct(x).terms() {
        let (a, b) = (f1.on_word(l), f2.on_word(r));
        for i in 0..d1 {
            for j in 0..d1 {
                let aij = a.get(i, j) * c;
                if aij.is_zero() {
                    continue;
                }
                for k in 0..d2 {
                    for m in 0..d2 {
                        out[((i * d1 + j) * d2 + k) * d2 + m].add_mul(&aij, b.get(k, m));
                    }
                }
            }
        }
    }
    out
}

/// The exchange functionals f_±, their partners f̃_± and the dotted-index
/// functionals, all as generator tables.
#[derive(Clone, Debug)]
pub struct Functionals {
    f: [WordFunctional; 2],
    f_tilde: [WordFunctional; 2],
    f_dotted: [WordFunctional; 2],
}

fn slot(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl Functionals {
    pub fn new(p: &ParameterSet, m: &SpinorMetric, rm: &RMatrixPair) -> Self {
        let f = Sign::BOTH.map(|s| {
            let k = p.a_half_pow(-s.value());
            let (r, rdu) = (rm.r(s), rm.dotted_undotted(s));
            let gens = Gen::all()
                .map(|g| {
                    let (d, rr) = (g.row(), g.col());
                    CMatrix::from_fn(2, 2, p.prec, |al, be| {
                        if g.is_dotted() {
                            rdu.get(&[rr, be, al, d]).clone()
                        } else {
                            r.get(&[rr, be, al, d]).scale(&k)
                        }
                    })
                })
                .collect();
            WordFunctional::new(gens, Order::Forward)
        });
        // f̃ = f∘S⁻¹, antimultiplicative.
        let tilde_images: Vec<AlgebraElement> =
            Gen::all().map(|g| antipode_inverse(&AlgebraElement::gen(g, p.prec), m)).collect();
        let f_tilde = Sign::BOTH.map(|s| f[slot(s)].pulled_back(&tilde_images, Order::Reversed));
        // Dotted-index functional of sign t: x ↦ conj(f_{−t}((S⁻¹x)*)), multiplicative.
        let dotted_images: Vec<AlgebraElement> =
            Gen::all().map(|g| antipode_inverse(&AlgebraElement::gen(g, p.prec), m).star()).collect();
        let f_dotted = Sign::BOTH.map(|t| {
            let base = f[slot(t.flip())].pulled_back(&dotted_images, Order::Forward);
            WordFunctional::new(base.gens.iter().map(CMatrix::conj).collect(), Order::Forward)
        });
        Functionals { f, f_tilde, f_dotted }
    }

    /// f_{sα}^β; value matrix rows α, columns β.
    pub fn f(&self, s: Sign) -> &WordFunctional {
        &self.f[slot(s)]
    }

    pub fn f_tilde(&self, s: Sign) -> &WordFunctional {
        &self.f_tilde[slot(s)]
    }

    /// The functional that moves a dotted spinor of sign tag `s` past algebra elements.
    pub fn f_dotted(&self, s: Sign) -> &WordFunctional {
        &self.f_dotted[slot(s)]
    }
}
