use std::collections::BTreeMap;

use super::{AlgebraElement, Gen, Word};
use crate::scalar::{Prec, Real, Scalar};
use crate::tensor::SpinorMetric;

/// A finite combination of `word ⊗ word`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    terms: BTreeMap<(Word, Word), Scalar>,
    prec: Prec,
}

impl TensorElement {
    pub fn zero(prec: Prec) -> Self {
        TensorElement { terms: BTreeMap::new(), prec }
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Scalar> {
        &self.terms
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: &Scalar) {
        match self.terms.get_mut(&(l.clone(), r.clone())) {
            Some(v) => *v += c,
            None => {
                self.terms.insert((l, r), c.clone());
            }
        }
    }

    pub fn sub(&self, o: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        let m1 = -Scalar::one(self.prec);
        for ((l, r), c) in &o.terms {
            out.add_term(l.clone(), r.clone(), &(c * &m1));
        }
        out
    }

    /// Σ x ⊗ y built from two elements.
    pub fn product(x: &AlgebraElement, y: &AlgebraElement) -> TensorElement {
        let mut out = TensorElement::zero(x.prec());
        for (w1, c1) in x.iter() {
            for (w2, c2) in y.iter() {
                out.add_term(w1.clone(), w2.clone(), &(c1 * c2));
            }
        }
        out
    }

    /// Apply a linear map to each factor and recombine.
    pub fn map_factors(
        &self,
        mut left: impl FnMut(&Word) -> AlgebraElement,
        mut right: impl FnMut(&Word) -> AlgebraElement,
    ) -> TensorElement {
        let mut out = TensorElement::zero(self.prec);
        for ((l, r), c) in &self.terms {
            let t = TensorElement::product(&left(l), &right(r));
            for ((a, b), v) in t.terms {
                out.add_term(a, b, &(c * &v));
            }
        }
        out
    }

    /// Collapse x ⊗ y ↦ f(x)·g(y).
    pub fn contract(
        &self,
        mut left: impl FnMut(&Word) -> AlgebraElement,
        mut right: impl FnMut(&Word) -> AlgebraElement,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.prec);
        for ((l, r), c) in &self.terms {
            out.add_scaled(c, &left(l).mul(&right(r)));
        }
        out
    }

    pub fn max_abs(&self) -> Real {
        let mut m = Real::new(self.prec.bits());
        for c in self.terms.values() {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }
}

/// Δ(M_α^β) = Σ_γ M_α^γ ⊗ M_γ^β, extended as an algebra map.
pub fn coproduct_word(w: &Word, prec: Prec) -> TensorElement {
    let mut terms: Vec<(Vec<Gen>, Vec<Gen>)> = vec![(Vec::new(), Vec::new())];
    for g in w.gens() {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (l, r) in &terms {
            for ga in 0..2 {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.push(Gen::new(g.is_dotted(), g.row(), ga));
                r2.push(Gen::new(g.is_dotted(), ga, g.col()));
                next.push((l2, r2));
            }
        }
        terms = next;
    }
    let mut out = TensorElement::zero(prec);
    let one = Scalar::one(prec);
    for (l, r) in terms {
        out.add_term(Word::new(l), Word::new(r), &one);
    }
    out
}

pub fn coproduct(x: &AlgebraElement) -> TensorElement {
    let mut out = TensorElement::zero(x.prec());
    for (w, c) in x.iter() {
        for ((l, r), v) in coproduct_word(w, x.prec()).terms {
            out.add_term(l, r, &(c * &v));
        }
    }
    out
}

/// ε(M_α^β) = δ_α^β.
pub fn counit(x: &AlgebraElement) -> Scalar {
    let mut acc = Scalar::zero(x.prec());
    for (w, c) in x.iter() {
        if w.gens().iter().all(|g| g.row() == g.col()) {
            acc += c;
        }
    }
    acc
}

fn metric_pair(m: &SpinorMetric, dotted: bool) -> (&crate::tensor::Tensor, &crate::tensor::Tensor) {
    if dotted {
        (&m.eps_lower_dotted, &m.eps_upper_dotted)
    } else {
        (&m.eps_lower, &m.eps_upper)
    }
}

/// S(M_α^β) = ε_{αγ} M_δ^γ ε^{δβ}, or S⁻¹(M_α^β) = ε^{βδ} M_δ^γ ε_{γα}.
pub fn antipode_gen(m: &SpinorMetric, g: Gen, inverse: bool) -> AlgebraElement {
    let (lo, up) = metric_pair(m, g.is_dotted());
    let (al, be) = (g.row(), g.col());
    let mut out = AlgebraElement::zero(lo.prec());
    for ga in 0..2 {
        for de in 0..2 {
            let c = if inverse {
                up.get(&[be, de]) * lo.get(&[ga, al])
            } else {
                lo.get(&[al, ga]) * up.get(&[de, be])
            };
            if !c.is_zero() {
                out.add_term(Word::from(Gen::new(g.is_dotted(), de, ga)), &c);
            }
        }
    }
    out
}

fn antimultiplicative(x: &AlgebraElement, m: &SpinorMetric, inverse: bool) -> AlgebraElement {
    let images: Vec<AlgebraElement> = Gen::all().map(|g| antipode_gen(m, g, inverse)).collect();
    x.map_words(|w| {
        let mut acc = AlgebraElement::one(x.prec());
        for g in w.gens().iter().rev() {
            acc = acc.mul(&images[usize::from(g.code())]);
        }
        acc
    })
}

pub fn antipode(x: &AlgebraElement, m: &SpinorMetric) -> AlgebraElement {
    antimultiplicative(x, m, false)
}

pub fn antipode_inverse(x: &AlgebraElement, m: &SpinorMetric) -> AlgebraElement {
    antimultiplicative(x, m, true)
}
