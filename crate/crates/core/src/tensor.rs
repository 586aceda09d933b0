//! Dense tensors with a typed index signature, the spinor metric and the
//! raising, lowering and star conventions for spinor indices.

use std::collections::BTreeMap;
use std::fmt;

use rug::Float;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::scalar::{Prec, Real, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Undotted,
    Dotted,
    Vector,
}

impl Family {
    pub fn dim(self) -> usize {
        match self {
            Family::Vector => 4,
            _ => 2,
        }
    }

    fn toggled(self) -> Family {
        match self {
            Family::Undotted => Family::Dotted,
            Family::Dotted => Family::Undotted,
            Family::Vector => Family::Vector,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variance {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexKind {
    pub family: Family,
    pub variance: Variance,
}

impl IndexKind {
    pub const fn new(family: Family, variance: Variance) -> Self {
        IndexKind { family, variance }
    }
}

/// Undotted upper.
pub const UU: IndexKind = IndexKind::new(Family::Undotted, Variance::Upper);
/// Undotted lower.
pub const UL: IndexKind = IndexKind::new(Family::Undotted, Variance::Lower);
/// Dotted upper.
pub const DU: IndexKind = IndexKind::new(Family::Dotted, Variance::Upper);
/// Dotted lower.
pub const DL: IndexKind = IndexKind::new(Family::Dotted, Variance::Lower);
/// Vector upper.
pub const VU: IndexKind = IndexKind::new(Family::Vector, Variance::Upper);
/// Vector lower.
pub const VL: IndexKind = IndexKind::new(Family::Vector, Variance::Lower);

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::Undotted => "u",
            Family::Dotted => "d",
            Family::Vector => "v",
        };
        let var = match self.variance {
            Variance::Upper => "^",
            Variance::Lower => "_",
        };
        write!(f, "{fam}{var}")
    }
}

/// How strictly `einsum` checks contracted index pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Typing {
    /// Same family, opposite variance.
    Strict,
    /// Equal range only. For formulas that identify dotted and undotted
    /// index values, which the spinor calculus does in a few places.
    Loose,
}

/// Dense row-major tensor over [`Scalar`].
#[derive(Clone, PartialEq)]
pub struct Tensor {
    sig: Vec<IndexKind>,
    data: Vec<Scalar>,
    prec: Prec,
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig: Vec<String> = self.sig.iter().map(ToString::to_string).collect();
        write!(f, "Tensor[{}] {:?}", sig.join(","), self.data)
    }
}

fn odometer(dims: &[usize], idx: &mut [usize]) -> bool {
    for k in (0..dims.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

impl Tensor {
    pub fn zeros(sig: &[IndexKind], prec: Prec) -> Self {
        let n = sig.iter().map(|k| k.family.dim()).product();
        Tensor { sig: sig.to_vec(), data: vec![Scalar::zero(prec); n], prec }
    }

    pub fn from_fn(sig: &[IndexKind], prec: Prec, mut f: impl FnMut(&[usize]) -> Scalar) -> Self {
        let mut t = Tensor::zeros(sig, prec);
        let dims = t.dims();
        let mut idx = vec![0; dims.len()];
        let mut flat = 0;
        loop {
            t.data[flat] = f(&idx);
            flat += 1;
            if !odometer(&dims, &mut idx) {
                break;
            }
        }
        t
    }

    /// Scalar as a rank-0 tensor.
    pub fn scalar(s: Scalar) -> Self {
        let prec = s.prec();
        Tensor { sig: vec![], data: vec![s], prec }
    }

    /// δ with signature (upper, lower) of the given family.
    pub fn delta(family: Family, prec: Prec) -> Self {
        let sig = [IndexKind::new(family, Variance::Upper), IndexKind::new(family, Variance::Lower)];
        Tensor::from_fn(&sig, prec, |i| if i[0] == i[1] { Scalar::one(prec) } else { Scalar::zero(prec) })
    }

    pub fn sig(&self) -> &[IndexKind] {
        &self.sig
    }

    pub fn rank(&self) -> usize {
        self.sig.len()
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn dims(&self) -> Vec<usize> {
        self.sig.iter().map(|k| k.family.dim()).collect()
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.sig.len());
        idx.iter().zip(&self.sig).fold(0, |acc, (&i, k)| acc * k.family.dim() + i)
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Same entries under a new signature of equal shape. Used where an
    /// index value is deliberately reinterpreted (dotted as undotted, etc).
    pub fn retag(&self, sig: &[IndexKind]) -> Result<Tensor> {
        let same_shape = sig.len() == self.sig.len()
            && sig.iter().zip(&self.sig).all(|(a, b)| a.family.dim() == b.family.dim());
        if !same_shape {
            return Err(Error::IndexMismatch("retag changes the tensor shape".into()));
        }
        Ok(Tensor { sig: sig.to_vec(), data: self.data.clone(), prec: self.prec })
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Tensor {
        Tensor { sig: self.sig.clone(), data: self.data.iter().map(f).collect(), prec: self.prec }
    }

    pub fn scale(&self, k: &Scalar) -> Tensor {
        self.map(|x| x * k)
    }

    pub fn scale_real(&self, k: &Real) -> Tensor {
        self.map(|x| x.scale(k))
    }

    pub fn conj(&self) -> Tensor {
        self.map(Scalar::conj)
    }

    fn zip(&self, other: &Tensor, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Tensor> {
        if self.sig != other.sig {
            return Err(Error::IndexMismatch(format!(
                "signatures differ: {:?} vs {:?}",
                self.sig, other.sig
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Tensor { sig: self.sig.clone(), data, prec: self.prec })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.zip(other, |a, b| a - b)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> Real {
        self.data.iter().map(Scalar::abs).fold(Float::new(self.prec.bits()), |m, x| if x > m { x } else { m })
    }

    /// Max-abs entrywise difference. Signatures must agree.
    pub fn residual(&self, other: &Tensor) -> Result<Real> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Max-abs entrywise difference ignoring index types (same shape only).
    pub fn residual_values(&self, other: &Tensor) -> Real {
        assert_eq!(self.dims(), other.dims(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(Float::new(self.prec.bits()), |m, x| if x > m { x } else { m })
    }

    /// Reorder axes: output axis k is input axis `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.rank());
        let sig: Vec<IndexKind> = perm.iter().map(|&p| self.sig[p]).collect();
        Tensor::from_fn(&sig, self.prec, |out| {
            let mut src = vec![0; perm.len()];
            for (k, &p) in perm.iter().enumerate() {
                src[p] = out[k];
            }
            self.get(&src).clone()
        })
    }

    /// Generalised contraction. `spec` is einsum notation with one letter per
    /// axis, e.g. `"ab,bc->ac"`. Repeated letters are summed and must pair an
    /// upper with a lower index of the same family under [`Typing::Strict`].
    pub fn einsum(spec: &str, inputs: &[&Tensor], typing: Typing) -> Result<Tensor> {
        let (lhs, out) = spec
            .split_once("->")
            .ok_or_else(|| Error::IndexMismatch(format!("einsum spec {spec:?} lacks ->")))?;
        let terms: Vec<Vec<char>> = lhs.split(',').map(|t| t.trim().chars().collect()).collect();
        let out: Vec<char> = out.trim().chars().collect();
        if terms.len() != inputs.len() {
            return Err(Error::IndexMismatch(format!("{spec:?}: {} operands given", inputs.len())));
        }
        let prec = inputs.first().map(|t| t.prec).ok_or_else(|| Error::IndexMismatch("no operands".into()))?;
        let mut seen: BTreeMap<char, Vec<IndexKind>> = BTreeMap::new();
        for (t, labels) in inputs.iter().zip(&terms) {
            if labels.len() != t.rank() {
                return Err(Error::IndexMismatch(format!("{spec:?}: operand rank {} vs {} labels", t.rank(), labels.len())));
            }
            for (c, k) in labels.iter().zip(&t.sig) {
                seen.entry(*c).or_default().push(*k);
            }
        }
        for (c, kinds) in &seen {
            match kinds.as_slice() {
                [_] => {
                    if !out.contains(c) {
                        return Err(Error::IndexMismatch(format!("{spec:?}: free index {c} missing from output")));
                    }
                }
                [a, b] => {
                    if out.contains(c) {
                        return Err(Error::IndexMismatch(format!("{spec:?}: summed index {c} in output")));
                    }
                    let ok = match typing {
                        Typing::Strict => a.family == b.family && a.variance != b.variance,
                        Typing::Loose => a.family.dim() == b.family.dim(),
                    };
                    if !ok {
                        return Err(Error::IndexMismatch(format!("{spec:?}: cannot contract {a} with {b} on {c}")));
                    }
                }
                _ => return Err(Error::IndexMismatch(format!("{spec:?}: index {c} used more than twice"))),
            }
        }
        let labels: Vec<char> = seen.keys().copied().collect();
        let pos = |c: char| labels.iter().position(|&x| x == c).unwrap();
        let dims: Vec<usize> = labels.iter().map(|c| seen[c][0].family.dim()).collect();
        let out_sig: Vec<IndexKind> = out
            .iter()
            .map(|c| seen.get(c).map(|v| v[0]).ok_or_else(|| Error::IndexMismatch(format!("{spec:?}: unknown output index {c}"))))
            .collect::<Result<_>>()?;
        let term_pos: Vec<Vec<usize>> = terms.iter().map(|t| t.iter().map(|&c| pos(c)).collect()).collect();
        let out_pos: Vec<usize> = out.iter().map(|&c| pos(c)).collect();
        let mut result = Tensor::zeros(&out_sig, prec);
        let mut idx = vec![0; labels.len()];
        let mut sub = Vec::new();
        loop {
            let mut prod: Option<Scalar> = None;
            for (t, tp) in inputs.iter().zip(&term_pos) {
                sub.clear();
                sub.extend(tp.iter().map(|&p| idx[p]));
                let v = t.get(&sub);
                if v.is_zero() {
                    prod = Some(Scalar::zero(prec));
                    break;
                }
                prod = Some(match prod {
                    None => v.clone(),
                    Some(acc) => &acc * v,
                });
            }
            if let Some(p) = prod {
                if !p.is_zero() {
                    sub.clear();
                    sub.extend(out_pos.iter().map(|&q| idx[q]));
                    let o = result.offset(&sub);
                    result.data[o] += &p;
                }
            }
            if !odometer(&dims, &mut idx) {
                break;
            }
        }
        Ok(result)
    }

    /// Single-axis contraction of `t1` axis `a1` with `t2` axis `a2`.
    /// The result keeps the remaining axes of `t1` then those of `t2`.
    pub fn contract(t1: &Tensor, a1: usize, t2: &Tensor, a2: usize) -> Result<Tensor> {
        if a1 >= t1.rank() || a2 >= t2.rank() {
            return Err(Error::IndexMismatch("contraction axis out of range".into()));
        }
        let letters: Vec<char> = "abcdefghijklmnopqrstuvwxyz".chars().collect();
        let l1: String = letters[..t1.rank()].iter().collect();
        let mut l2: Vec<char> = letters[t1.rank()..t1.rank() + t2.rank()].to_vec();
        let sum = letters[a1];
        l2[a2] = sum;
        let out: String = l1.chars().filter(|&c| c != sum).chain(l2.iter().copied().filter(|&c| c != sum)).collect();
        let l2: String = l2.into_iter().collect();
        Tensor::einsum(&format!("{l1},{l2}->{out}"), &[t1, t2], Typing::Strict)
    }

    /// Apply a 2×2 metric on one spinor axis: out[..i..] = Σ_j m[left? (i,j) : (j,i)] t[..j..].
    fn metric_on_axis(&self, axis: usize, m: &Tensor, metric_first: bool, kind: IndexKind) -> Tensor {
        let mut sig = self.sig.clone();
        sig[axis] = kind;
        Tensor::from_fn(&sig, self.prec, |out| {
            let mut acc = Scalar::zero(self.prec);
            let mut src = out.to_vec();
            for j in 0..2 {
                src[axis] = j;
                let g = if metric_first { m.get(&[out[axis], j]) } else { m.get(&[j, out[axis]]) };
                acc.add_mul(g, self.get(&src));
            }
            acc
        })
    }

    /// Lower a spinor index: θ_α = θ^β ε_{βα}, θ_α̇ = ε_{α̇β̇} θ^β̇.
    pub fn lower_index(&self, axis: usize, m: &SpinorMetric) -> Result<Tensor> {
        let k = *self.sig.get(axis).ok_or_else(|| Error::IndexMismatch("axis out of range".into()))?;
        if k.variance != Variance::Upper {
            return Err(Error::IndexMismatch(format!("axis {axis} is already lower")));
        }
        let lowered = IndexKind::new(k.family, Variance::Lower);
        match k.family {
            Family::Undotted => Ok(self.metric_on_axis(axis, &m.eps_lower, false, lowered)),
            Family::Dotted => Ok(self.metric_on_axis(axis, &m.eps_lower_dotted, true, lowered)),
            Family::Vector => Err(Error::IndexMismatch("vector indices move with G, not ε".into())),
        }
    }

    /// Raise a spinor index: θ^α = θ_β ε^{βα}, θ^α̇ = ε^{α̇β̇} θ_β̇.
    pub fn raise_index(&self, axis: usize, m: &SpinorMetric) -> Result<Tensor> {
        let k = *self.sig.get(axis).ok_or_else(|| Error::IndexMismatch("axis out of range".into()))?;
        if k.variance != Variance::Lower {
            return Err(Error::IndexMismatch(format!("axis {axis} is already upper")));
        }
        let raised = IndexKind::new(k.family, Variance::Upper);
        match k.family {
            Family::Undotted => Ok(self.metric_on_axis(axis, &m.eps_upper, false, raised)),
            Family::Dotted => Ok(self.metric_on_axis(axis, &m.eps_upper_dotted, true, raised)),
            Family::Vector => Err(Error::IndexMismatch("vector indices move with G, not ε".into())),
        }
    }

    /// Star: conjugate entries, toggle dotting, reverse the spinor index order.
    pub fn star(&self) -> Result<Tensor> {
        if self.sig.iter().any(|k| k.family == Family::Vector) {
            return Err(Error::IndexMismatch("star is defined on spinor indices only".into()));
        }
        let sig: Vec<IndexKind> =
            self.sig.iter().rev().map(|k| IndexKind::new(k.family.toggled(), k.variance)).collect();
        Ok(Tensor::from_fn(&sig, self.prec, |out| {
            let src: Vec<usize> = out.iter().rev().copied().collect();
            self.get(&src).conj()
        }))
    }

    /// View as a matrix whose rows are the first `row_axes` axes.
    pub fn to_matrix(&self, row_axes: usize) -> crate::linalg::CMatrix {
        let dims = self.dims();
        let rows: usize = dims[..row_axes].iter().product();
        let cols: usize = dims[row_axes..].iter().product();
        crate::linalg::CMatrix::from_vec(rows, cols, self.data.clone())
    }

    pub fn from_matrix(sig: &[IndexKind], m: &crate::linalg::CMatrix) -> Tensor {
        let t = Tensor::zeros(sig, m.prec());
        assert_eq!(t.data.len(), m.rows() * m.cols(), "shape mismatch");
        Tensor { sig: sig.to_vec(), data: m.data().to_vec(), prec: t.prec }
    }
}

/// ε_{αβ}, ε^{αβ} and their dotted partners.
#[derive(Clone, Debug)]
pub struct SpinorMetric {
    pub eps_lower: Tensor,
    pub eps_upper: Tensor,
    pub eps_lower_dotted: Tensor,
    pub eps_upper_dotted: Tensor,
}

/// The spinor metric d^{-1/2}[[ir, −q^{-1/2}], [q^{1/2}, ir]] and partners.
pub fn make_spinor_metric(p: &ParameterSet) -> SpinorMetric {
    let prec = p.prec;
    let bits = prec.bits();
    let s = Float::with_val(bits, p.d.clone().recip_sqrt());
    let qh = Float::with_val(bits, p.q.sqrt_ref());
    let qmh = Float::with_val(bits, qh.clone().recip());
    let ir = Scalar::new(Float::new(bits), p.r.clone());
    let re = |x: &Float| Scalar::from_real(x.clone());
    let build = |sig: IndexKind, m: [[Scalar; 2]; 2]| {
        Tensor::from_fn(&[sig, sig], prec, |i| m[i[0]][i[1]].scale(&s))
    };
    let neg = |x: &Scalar| -x;
    SpinorMetric {
        eps_lower: build(UL, [[ir.clone(), neg(&re(&qmh))], [re(&qh), ir.clone()]]),
        eps_upper: build(UU, [[ir.clone(), re(&qmh)], [neg(&re(&qh)), ir.clone()]]),
        eps_lower_dotted: build(DL, [[neg(&ir), re(&qh)], [neg(&re(&qmh)), neg(&ir)]]),
        eps_upper_dotted: build(DU, [[neg(&ir), neg(&re(&qh))], [re(&qmh), neg(&ir)]]),
    }
}

impl SpinorMetric {
    /// Inverse pairs, the trace −Q and the star relations.
    pub fn verify(&self, p: &ParameterSet) -> Result<Vec<Check>> {
        let tol = &p.tolerance;
        let prec = p.prec;
        let mut out = Vec::new();
        for (name, up, lo, fam) in [
            ("undotted", &self.eps_upper, &self.eps_lower, Family::Undotted),
            ("dotted", &self.eps_upper_dotted, &self.eps_lower_dotted, Family::Dotted),
        ] {
            let delta = Tensor::delta(fam, prec);
            let left = Tensor::einsum("ag,gb->ab", &[up, lo], Typing::Strict)?;
            let right = Tensor::einsum("bg,ga->ab", &[lo, up], Typing::Strict)?.retag(delta.sig())?;
            out.push(Check::holds(format!("spinor-metric-inverse-{name}-left"), left.residual(&delta)?, tol));
            out.push(Check::holds(format!("spinor-metric-inverse-{name}-right"), right.residual_values(&delta), tol));
        }
        let trace = Tensor::einsum("ab,ab->", &[&self.eps_upper, &self.eps_lower], Typing::Loose)?;
        let minus_q = Tensor::scalar(Scalar::from_real(Float::with_val(prec.bits(), -&p.big_q)));
        out.push(Check::holds("spinor-metric-trace-is-minus-q", trace.residual(&minus_q)?, tol));
        // (ε_{αβ})* = ε_{β̇α̇} = −ε^{αβ} and (ε^{αβ})* = ε^{β̇α̇} = −ε_{αβ}.
        let star_lo = self.eps_lower.star()?;
        let star_up = self.eps_upper.star()?;
        out.push(Check::holds("spinor-metric-star-lower", star_lo.residual(&self.eps_lower_dotted)?, tol));
        out.push(Check::holds("spinor-metric-star-upper", star_up.residual(&self.eps_upper_dotted)?, tol));
        let minus_up_t = self.eps_upper.permute(&[1, 0]).map(|x| -x);
        let minus_lo_t = self.eps_lower.permute(&[1, 0]).map(|x| -x);
        out.push(Check::holds(
            "spinor-metric-dotted-lower-is-minus-upper",
            self.eps_lower_dotted.residual_values(&minus_up_t),
            tol,
        ));
        out.push(Check::holds(
            "spinor-metric-dotted-upper-is-minus-lower",
            self.eps_upper_dotted.residual_values(&minus_lo_t),
            tol,
        ));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{make_params, Sign};

    fn metric(q: &str, r: &str) -> (ParameterSet, SpinorMetric) {
        let p = make_params(q, r, Sign::Plus, 60).unwrap();
        let m = make_spinor_metric(&p);
        (p, m)
    }

    #[test]
    fn classical_lower_metric() {
        let (p, m) = metric("1", "0");
        let expect = [[0, -1], [1, 0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(*m.eps_lower.get(&[i, j]), p.scalar(expect[i][j]));
            }
        }
    }

    #[test]
    fn metric_invariants_hold() {
        for (q, r) in [("1", "0"), ("2", "0"), ("2", "1/3"), ("1/2", "1/5")] {
            let (p, m) = metric(q, r);
            for c in m.verify(&p).unwrap() {
                assert!(c.passed(), "{q},{r}: {c:?}");
            }
        }
    }

    #[test]
    fn contract_rejects_same_variance() {
        let (_, m) = metric("2", "1/3");
        let err = Tensor::contract(&m.eps_lower, 1, &m.eps_lower, 0).unwrap_err();
        assert!(matches!(err, Error::IndexMismatch(_)));
        let err = Tensor::contract(&m.eps_lower, 1, &m.eps_upper_dotted, 0).unwrap_err();
        assert!(matches!(err, Error::IndexMismatch(_)));
    }

    #[test]
    fn contract_with_delta_is_identity() {
        let (p, m) = metric("2", "1/3");
        let d = Tensor::delta(Family::Undotted, p.prec);
        let x = Tensor::contract(&d, 1, &m.eps_upper, 0).unwrap();
        assert!(x.residual(&m.eps_upper).unwrap() <= p.tolerance);
    }

    #[test]
    fn lower_then_raise_round_trips() {
        let (p, m) = metric("2", "1/3");
        let t = Tensor::from_fn(&[UU, DU], p.prec, |i| p.scalar((3 * i[0] + i[1] + 1) as i64));
        for axis in 0..2 {
            let back = t.lower_index(axis, &m).unwrap().raise_index(axis, &m).unwrap();
            assert!(back.residual(&t).unwrap() <= p.tolerance);
        }
    }

    #[test]
    fn lowering_a_vector_index_fails() {
        let (p, m) = metric("2", "0");
        let v = Tensor::zeros(&[VU], p.prec);
        assert!(matches!(v.lower_index(0, &m), Err(Error::IndexMismatch(_))));
    }

    #[test]
    fn star_is_an_involution() {
        let (p, m) = metric("1/2", "1/5");
        let t = Tensor::einsum("ab,cd->acbd", &[&m.eps_upper, &m.eps_lower_dotted], Typing::Strict).unwrap();
        let back = t.star().unwrap().star().unwrap();
        assert!(back.residual(&t).unwrap() <= p.tolerance);
    }
}
