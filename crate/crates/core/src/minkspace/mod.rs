//! Quantum Minkowski space: coordinates X_{±I} and spinors θ_{±α}, θ_{±α̇}
//! as right-invariant symbols of a bimodule over the algebra, the braiding
//! that exchanges adjacent symbols, and invariance and centrality of the
//! norm G^{IJ} X_I X_J.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::check::{max_residual, Check};
use crate::error::{Error, Result};
use crate::frt::{antipode, coproduct, counit, AlgebraElement, Functionals, Gen, NormalFormEngine, TensorElement, Word};
use crate::linalg::CMatrix;
use crate::lorentz::{BigFunctionals, LorentzGenerators};
use crate::params::{ParameterSet, Sign};
use crate::scalar::{ratio, Real, Scalar};
use crate::sigma::MinkowskiMetric;
use crate::tensor::SpinorMetric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Coordinate,
    Spinor,
    DottedSpinor,
}

impl SymbolKind {
    pub fn dim(self) -> usize {
        match self {
            SymbolKind::Coordinate => 4,
            _ => 2,
        }
    }
}

/// One basis symbol: X_{sI}, θ_{sα} or θ_{sα̇}. Sorting puts coordinates
/// first, then + before −, then ascending index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuleSymbol {
    pub kind: SymbolKind,
    pub sign: Sign,
    pub index: usize,
}

impl ModuleSymbol {
    pub fn coordinate(sign: Sign, index: usize) -> Self {
        assert!(index < 4);
        ModuleSymbol { kind: SymbolKind::Coordinate, sign, index }
    }

    pub fn spinor(sign: Sign, index: usize) -> Self {
        assert!(index < 2);
        ModuleSymbol { kind: SymbolKind::Spinor, sign, index }
    }

    pub fn dotted(sign: Sign, index: usize) -> Self {
        assert!(index < 2);
        ModuleSymbol { kind: SymbolKind::DottedSpinor, sign, index }
    }

    fn with_index(self, index: usize) -> Self {
        ModuleSymbol { index, ..self }
    }

    /// The 8 coordinates followed by the 8 spinors.
    pub fn all() -> Vec<ModuleSymbol> {
        let mut out = Vec::with_capacity(16);
        for s in Sign::BOTH {
            out.extend((0..4).map(|i| ModuleSymbol::coordinate(s, i)));
        }
        for s in Sign::BOTH {
            out.extend((0..2).map(|i| ModuleSymbol::spinor(s, i)));
            out.extend((0..2).map(|i| ModuleSymbol::dotted(s, i)));
        }
        out
    }
}

impl fmt::Display for ModuleSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Coordinate => write!(f, "X{}{}", self.sign, self.index),
            SymbolKind::Spinor => write!(f, "θ{}{}", self.sign, self.index + 1),
            SymbolKind::DottedSpinor => write!(f, "θ̇{}{}", self.sign, self.index + 1),
        }
    }
}

pub type SymbolWord = Vec<ModuleSymbol>;

/// Σ a_w · w with algebra coefficients kept left of the symbol words.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement {
    terms: BTreeMap<SymbolWord, AlgebraElement>,
    prec: crate::scalar::Prec,
}

impl ModuleElement {
    pub fn zero(prec: crate::scalar::Prec) -> Self {
        ModuleElement { terms: BTreeMap::new(), prec }
    }

    pub fn term(a: AlgebraElement, w: SymbolWord) -> Self {
        let mut out = ModuleElement::zero(a.prec());
        out.add_term(w, &a);
        out
    }

    pub fn terms(&self) -> &BTreeMap<SymbolWord, AlgebraElement> {
        &self.terms
    }

    pub fn add_term(&mut self, w: SymbolWord, a: &AlgebraElement) {
        match self.terms.get_mut(&w) {
            Some(v) => *v = v.add(a),
            None => {
                self.terms.insert(w, a.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &ModuleElement) {
        for (w, a) in &other.terms {
            self.add_term(w.clone(), &a.scale(c));
        }
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::one(self.prec), other);
        out
    }

    /// Largest coefficient after reducing every algebra part.
    pub fn residual(&self, eng: &NormalFormEngine) -> Result<Real> {
        let res = self.terms.values().map(|a| eng.residual(a)).collect::<Result<Vec<_>>>()?;
        Ok(max_residual(self.prec.bits(), res))
    }

    /// Largest coefficient without reduction.
    pub fn max_abs(&self) -> Real {
        max_residual(self.prec.bits(), self.terms.values().map(AlgebraElement::max_abs))
    }
}

/// The bimodule structure: how symbols move past algebra elements and past
/// each other.
pub struct Bimodule<'a> {
    p: &'a ParameterSet,
    m: &'a SpinorMetric,
    fun: &'a Functionals,
    bf: &'a BigFunctionals,
    lg: &'a LorentzGenerators,
}

impl<'a> Bimodule<'a> {
    pub fn new(
        p: &'a ParameterSet,
        m: &'a SpinorMetric,
        fun: &'a Functionals,
        bf: &'a BigFunctionals,
        lg: &'a LorentzGenerators,
    ) -> Self {
        Bimodule { p, m, fun, bf, lg }
    }

    /// The exchange functional attached to a symbol, evaluated on a word.
    fn functional(&self, sym: ModuleSymbol, w: &Word) -> CMatrix {
        match sym.kind {
            SymbolKind::Coordinate => self.bf.get(sym.sign).on_word(w),
            SymbolKind::Spinor => self.fun.f(sym.sign).on_word(w),
            SymbolKind::DottedSpinor => self.fun.f_dotted(sym.sign).on_word(w),
        }
    }

    fn functional_on(&self, sym: ModuleSymbol, x: &AlgebraElement) -> CMatrix {
        let n = sym.kind.dim();
        let mut acc = CMatrix::zeros(n, n, self.p.prec);
        for (w, c) in x.iter() {
            acc.add_scaled(c, &self.functional(sym, w));
        }
        acc
    }

    /// Left coaction matrix entry: Λ_L^M, M_α^β or Ṁ_α̇^β̇.
    pub fn coaction(&self, sym: ModuleSymbol, l: usize, m: usize) -> AlgebraElement {
        match sym.kind {
            SymbolKind::Coordinate => self.lg.get(l, m).clone(),
            SymbolKind::Spinor => AlgebraElement::gen(Gen::undotted(l, m), self.p.prec),
            SymbolKind::DottedSpinor => AlgebraElement::gen(Gen::dotted_gen(l, m), self.p.prec),
        }
    }

    /// s_L · a = Σ_K (a ⋆ φ_L^K) s_K, returned as (s_K, coefficient).
    pub fn push_left(&self, sym: ModuleSymbol, a: &AlgebraElement) -> Vec<(ModuleSymbol, AlgebraElement)> {
        let n = sym.kind.dim();
        let mut out: Vec<AlgebraElement> = vec![AlgebraElement::zero(self.p.prec); n];
        for ((l, r), c) in coproduct(a).terms() {
            let v = self.functional(sym, l);
            let piece = AlgebraElement::word(r.clone(), self.p.prec);
            for (k, slot) in out.iter_mut().enumerate() {
                let e = v.get(sym.index, k);
                if !e.is_zero() {
                    slot.add_scaled(&(c * e), &piece);
                }
            }
        }
        out.into_iter().enumerate().map(|(k, x)| (sym.with_index(k), x)).collect()
    }

    /// a · s_L = Σ_K s_K (a ⋆ φ_L^K∘S), returned as (s_K, coefficient right of s_K).
    pub fn push_right(&self, a: &AlgebraElement, sym: ModuleSymbol) -> Vec<(ModuleSymbol, AlgebraElement)> {
        let n = sym.kind.dim();
        let mut out: Vec<AlgebraElement> = vec![AlgebraElement::zero(self.p.prec); n];
        for ((l, r), c) in coproduct(a).terms() {
            let v = self.functional_on(sym, &antipode(&AlgebraElement::word(l.clone(), self.p.prec), self.m));
            let piece = AlgebraElement::word(r.clone(), self.p.prec);
            for (k, slot) in out.iter_mut().enumerate() {
                let e = v.get(sym.index, k);
                if !e.is_zero() {
                    slot.add_scaled(&(c * e), &piece);
                }
            }
        }
        out.into_iter().enumerate().map(|(k, x)| (sym.with_index(k), x)).collect()
    }

    /// w · a rewritten as Σ b_v · v, moving `a` left through every symbol.
    pub fn move_left(&self, w: &[ModuleSymbol], a: &AlgebraElement) -> ModuleElement {
        let mut acc: Vec<(SymbolWord, AlgebraElement)> = vec![(Vec::new(), a.clone())];
        for &sym in w.iter().rev() {
            let mut next = Vec::new();
            for (tail, b) in acc {
                for (s2, c) in self.push_left(sym, &b) {
                    if c.is_empty() {
                        continue;
                    }
                    let mut v = vec![s2];
                    v.extend_from_slice(&tail);
                    next.push((v, c));
                }
            }
            acc = next;
        }
        let mut out = ModuleElement::zero(self.p.prec);
        for (v, c) in acc {
            out.add_term(v, &c);
        }
        out
    }

    /// s1_L s2_K = Σ φ2_K^N(S(T1_L^M)) s2_N s1_M with T1 the coaction of s1.
    pub fn braid(&self, s1: ModuleSymbol, s2: ModuleSymbol) -> Vec<(ModuleSymbol, ModuleSymbol, Scalar)> {
        let drop = self.p.drop_threshold();
        let mut out = Vec::new();
        for mi in 0..s1.kind.dim() {
            let st = antipode(&self.coaction(s1, s1.index, mi), self.m);
            let v = self.functional_on(s2, &st);
            for n in 0..s2.kind.dim() {
                let c = v.get(s2.index, n);
                if c.abs() > drop {
                    out.push((s2.with_index(n), s1.with_index(mi), c.clone()));
                }
            }
        }
        out
    }

    /// Apply the braiding at positions (pos, pos+1) of every word long enough.
    pub fn symmetrize(&self, x: &ModuleElement, pos: usize) -> Result<ModuleElement> {
        let mut out = ModuleElement::zero(self.p.prec);
        for (w, a) in x.terms() {
            if w.len() < pos + 2 {
                return Err(Error::IndexMismatch(format!("braiding at {pos} needs two symbols, word has {}", w.len())));
            }
            for (n, mi, c) in self.braid(w[pos], w[pos + 1]) {
                let mut v = w.clone();
                v[pos] = n;
                v[pos + 1] = mi;
                out.add_term(v, &a.scale(&c));
            }
        }
        Ok(out)
    }

    /// G^{IJ} X_{tI} X_{uJ} for metric sign g and coordinate signs t, u.
    pub fn quadratic(&self, mm: &MinkowskiMetric, g: Sign, t: Sign, u: Sign) -> ModuleElement {
        let gu = mm.upper(g);
        let mut out = ModuleElement::zero(self.p.prec);
        for i in 0..4 {
            for j in 0..4 {
                let c = gu.get(&[i, j]);
                if !c.is_zero() {
                    let w = vec![ModuleSymbol::coordinate(t, i), ModuleSymbol::coordinate(u, j)];
                    out.add_term(w, &AlgebraElement::scalar(c.clone()));
                }
            }
        }
        out
    }
}

/// Three commutator residuals of a quadratic form: against the generators,
/// the coordinates and the spinors.
pub fn commutator_residuals(bm: &Bimodule<'_>, n: &ModuleElement, eng: &NormalFormEngine) -> Result<[Real; 3]> {
    let prec = eng.params().prec;
    let bits = prec.bits();
    let gens = Gen::all()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&g| {
            let a = AlgebraElement::gen(g, prec);
            let mut lhs = ModuleElement::zero(prec);
            let mut rhs = ModuleElement::zero(prec);
            for (w, c) in n.terms() {
                // c is a scalar multiple of the unit
                let k = c.coefficient(&Word::unit());
                lhs.add_scaled(&k, &bm.move_left(w, &a));
                rhs.add_term(w.clone(), &a.scale(&k));
            }
            lhs.sub(&rhs).residual(eng)
        })
        .collect::<Result<Vec<_>>>()?;
    let through = |sym: ModuleSymbol| -> Result<Real> {
        // sym·N braided to the right end, against N·sym
        let mut lhs = ModuleElement::zero(prec);
        let mut rhs = ModuleElement::zero(prec);
        for (w, c) in n.terms() {
            let mut v = vec![sym];
            v.extend_from_slice(w);
            lhs.add_term(v, c);
            let mut u = w.clone();
            u.push(sym);
            rhs.add_term(u, c);
        }
        for pos in 0..2 {
            lhs = bm.symmetrize(&lhs, pos)?;
        }
        lhs.sub(&rhs).residual(eng)
    };
    let syms = ModuleSymbol::all();
    let (coords, spinors): (Vec<_>, Vec<_>) = syms.into_iter().partition(|s| s.kind == SymbolKind::Coordinate);
    let c = coords.par_iter().map(|&s| through(s)).collect::<Result<Vec<_>>>()?;
    let s = spinors.par_iter().map(|&s| through(s)).collect::<Result<Vec<_>>>()?;
    Ok([max_residual(bits, gens), max_residual(bits, c), max_residual(bits, s)])
}

/// Δ_L(Σ c_{IJ} X_I X_J) − I ⊗ (Σ c_{KL} X_K X_L) on the coordinate pair space.
pub fn biinvariance_residual(bm: &Bimodule<'_>, n: &ModuleElement, eng: &NormalFormEngine) -> Result<Real> {
    let prec = eng.params().prec;
    let mut coeff: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    for (w, c) in n.terms() {
        if w.len() != 2 || w.iter().any(|s| s.kind != SymbolKind::Coordinate) {
            return Err(Error::IndexMismatch("biinvariance is defined for coordinate quadratics".into()));
        }
        coeff.insert((w[0].index, w[1].index), c.coefficient(&Word::unit()));
    }
    let res = (0..16)
        .into_par_iter()
        .map(|kl| {
            let (k, l) = (kl / 4, kl % 4);
            let mut x = AlgebraElement::zero(prec);
            for ((i, j), c) in &coeff {
                x.add_scaled(c, &bm.lg.get(*i, k).mul(bm.lg.get(*j, l)));
            }
            let target = coeff.get(&(k, l)).cloned().unwrap_or_else(|| Scalar::zero(prec));
            eng.residual(&x.sub(&AlgebraElement::scalar(target)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(max_residual(prec.bits(), res))
}

/// Deterministic degree-≤1 elements: a scalar plus two generators.
fn random_linear(prec: crate::scalar::Prec, count: usize, seed: u64) -> Vec<AlgebraElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coef = |rng: &mut ChaCha8Rng| {
                Scalar::new(ratio(prec, rng.gen_range(-8..=8), 8), ratio(prec, rng.gen_range(-8..=8), 8))
            };
            let mut x = AlgebraElement::scalar(coef(&mut rng));
            for _ in 0..2 {
                let c = coef(&mut rng);
                let g = Gen::from_code(rng.gen_range(0..8)).expect("in range");
                x.add_term(Word::from(g), &c);
            }
            x
        })
        .collect()
}

/// push_left followed by push_right returns the input, on every symbol.
pub fn round_trip_residual(bm: &Bimodule<'_>, eng: &NormalFormEngine, samples: usize, seed: u64) -> Result<Real> {
    let prec = eng.params().prec;
    let mut elems: Vec<AlgebraElement> = Gen::all().map(|g| AlgebraElement::gen(g, prec)).collect();
    elems.extend(random_linear(prec, samples, seed));
    let mut res = Vec::new();
    for sym in ModuleSymbol::all() {
        for a in &elems {
            let mut back = ModuleElement::zero(prec);
            for (sk, b) in bm.push_left(sym, a) {
                for (sj, c) in bm.push_right(&b, sk) {
                    back.add_term(vec![sj], &c);
                }
            }
            back = back.sub(&ModuleElement::term(a.clone(), vec![sym]));
            res.push(back.residual(eng)?);
        }
    }
    Ok(max_residual(prec.bits(), res))
}

/// (id⊗Δ_L)Δ_L = (Δ⊗id)Δ_L and (ε⊗id)Δ_L = id on the coordinates.
pub fn corepresentation_residuals(lg: &LorentzGenerators, eng: &NormalFormEngine) -> Result<[Real; 2]> {
    let p = eng.params();
    let (mut coassoc, mut cou) = (Vec::new(), Vec::new());
    for l in 0..4 {
        for j in 0..4 {
            let mut rhs = TensorElement::zero(p.prec);
            for k in 0..4 {
                for ((a, b), c) in TensorElement::product(lg.get(l, k), lg.get(k, j)).terms() {
                    rhs.add_term(a.clone(), b.clone(), c);
                }
            }
            coassoc.push(eng.normal_form_tensor(&coproduct(lg.get(l, j)).sub(&rhs))?.max_abs());
            let e = counit(lg.get(l, j)) - if l == j { p.one() } else { p.zero() };
            cou.push(e.abs());
        }
    }
    Ok([max_residual(p.prec.bits(), coassoc), max_residual(p.prec.bits(), cou)])
}

/// Corepresentation, round trip, and for the engine's sign s: biinvariance
/// and centrality of the norm, plus the two mixed quadratics, which are
/// biinvariant but expected not to be central away from the classical point.
pub fn verify_minkowski(
    bm: &Bimodule<'_>,
    mm: &MinkowskiMetric,
    eng: &NormalFormEngine,
    samples: usize,
    seed: u64,
) -> Result<Vec<Check>> {
    let p = eng.params();
    let tol = &p.tolerance;
    let mut out = Vec::new();
    let [coassoc, cou] = corepresentation_residuals(bm.lg, eng)?;
    out.push(Check::holds("corepresentation-coassociative", coassoc, tol));
    out.push(Check::holds("corepresentation-counit", cou, tol));
    out.push(Check::holds("module-push-round-trip", round_trip_residual(bm, eng, samples, seed)?, tol));
    for &s in eng.cross().signs() {
        let w = s.word();
        let norm = bm.quadratic(mm, s, s, s);
        out.push(Check::holds(format!("norm-biinvariant-{w}"), biinvariance_residual(bm, &norm, eng)?, tol));
        let [g, c, sp] = commutator_residuals(bm, &norm, eng)?;
        out.push(Check::holds(format!("norm-central-generators-{w}"), g, tol));
        out.push(Check::holds(format!("norm-central-coordinates-{w}"), c, tol));
        out.push(Check::holds(format!("norm-central-spinors-{w}"), sp, tol));
        for (name, t, u) in [("opposite", s.flip(), s.flip()), ("crossed", s.flip(), s)] {
            let q = bm.quadratic(mm, s, t, u);
            out.push(Check::holds(format!("mixed-norm-{name}-biinvariant-{w}"), biinvariance_residual(bm, &q, eng)?, tol));
            let worst = max_residual(p.prec.bits(), commutator_residuals(bm, &q, eng)?);
            let id = format!("mixed-norm-{name}-not-central-{w}");
            out.push(if p.is_classical() {
                Check::info(id, worst, tol)
            } else {
                Check::fails(id, worst, tol).with_note("worst commutator over generators, coordinates and spinors")
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
