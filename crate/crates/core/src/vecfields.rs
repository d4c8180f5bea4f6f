//! Special vector fields `Σ f_i ∂_i` on O(m;N|n).
//!
//! Fields are stored extensionally, one coefficient function per
//! indeterminate, with the coefficient written to the left of `∂_i`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::dpsuper::{
    same_sig, terms_add_scaled, terms_axpy, terms_derive, terms_mul, DPElement,
    Monomial, Signature, Terms,
};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    sig: Arc<Signature>,
    coeffs: Vec<Terms>,
}

impl VectorField {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        Self {
            sig: sig.clone(),
            coeffs: vec![Terms::new(); sig.a()],
        }
    }

    /// `∂_i`.
    pub fn partial(sig: &Arc<Signature>, i: usize) -> Self {
        Self::term(sig, i, Monomial::ONE, 1)
    }

    /// `c·u^r ∂_i`.
    pub fn term(sig: &Arc<Signature>, i: usize, mono: Monomial, c: u32) -> Self {
        let mut x = Self::zero(sig);
        terms_add_scaled(sig.field(), &mut x.coeffs[i], mono, c % sig.p());
        x
    }

    /// Builds `Σ f_i ∂_i`.
    pub fn from_coefficients(sig: &Arc<Signature>, coeffs: Vec<DPElement>) -> Result<Self> {
        if coeffs.len() != sig.a() {
            return Err(Error::InvalidSignature("one coefficient per indeterminate".into()));
        }
        if coeffs.iter().any(|c| !same_sig(c.signature(), sig)) {
            return Err(Error::SignatureMismatch);
        }
        Ok(Self {
            sig: sig.clone(),
            coeffs: coeffs.into_iter().map(DPElement::into_terms).collect(),
        })
    }

    pub(crate) fn from_terms(sig: &Arc<Signature>, coeffs: Vec<Terms>) -> Self {
        debug_assert_eq!(coeffs.len(), sig.a());
        Self {
            sig: sig.clone(),
            coeffs,
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn coefficient(&self, i: usize) -> DPElement {
        DPElement::from_terms(&self.sig, self.coeffs[i].clone())
    }

    pub(crate) fn coeff_terms(&self, i: usize) -> &Terms {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Terms::is_empty)
    }

    /// Iterates `(i, monomial, coefficient)` over all terms.
    pub fn iter_terms(&self) -> impl Iterator<Item = (usize, Monomial, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.iter().map(move |(m, c)| (i, *m, *c)))
    }

    /// `None` for the zero field or mixed parity.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self
            .iter_terms()
            .map(|(i, m, _)| (m.parity() + self.sig.parity(i)) & 1);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// `None` for the zero field or mixed degree.
    pub fn degree(&self) -> Option<i32> {
        let mut it = self
            .iter_terms()
            .map(|(i, m, _)| self.sig.degree(&m) - self.sig.weight(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || (self.parity().is_some() && self.degree().is_some())
    }

    fn check(&self, other: &Arc<Signature>) -> Result<()> {
        if same_sig(&self.sig, other) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.axpy(1, other)
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.axpy(self.sig.field().neg(1), other)
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: u32, other: &VectorField) -> Result<VectorField> {
        self.check(&other.sig)?;
        let f = self.sig.field();
        let mut out = self.clone();
        for (acc, x) in out.coeffs.iter_mut().zip(&other.coeffs) {
            terms_axpy(f, acc, c, x);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> VectorField {
        let f = self.sig.field();
        let coeffs = self
            .coeffs
            .iter()
            .map(|t| {
                let mut out = Terms::new();
                terms_axpy(f, &mut out, c % f.p(), t);
                out
            })
            .collect();
        Self::from_terms(&self.sig, coeffs)
    }

    pub(crate) fn apply_terms(&self, g: &Terms) -> Terms {
        let f = self.sig.field();
        let mut out = Terms::new();
        for (i, xi) in self.coeffs.iter().enumerate() {
            if xi.is_empty() {
                continue;
            }
            let d = terms_derive(&self.sig, i, g);
            if d.is_empty() {
                continue;
            }
            terms_axpy(f, &mut out, 1, &terms_mul(&self.sig, xi, &d));
        }
        out
    }

    /// `X(f) = Σ X_i ∂_i(f)`.
    pub fn apply(&self, g: &DPElement) -> Result<DPElement> {
        self.check(g.signature())?;
        Ok(DPElement::from_terms(&self.sig, self.apply_terms(g.terms())))
    }

    /// The superbracket `[X, Y] = XY - (-1)^{p(X)p(Y)} YX`, computed
    /// coefficientwise.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.check(&other.sig)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.sig));
        }
        let px = self
            .parity()
            .ok_or_else(|| Error::Inhomogeneous(format!("{self}")))?;
        let py = other
            .parity()
            .ok_or_else(|| Error::Inhomogeneous(format!("{other}")))?;
        Ok(self.bracket_with_parities(other, px, py))
    }

    pub(crate) fn bracket_with_parities(&self, other: &VectorField, px: u8, py: u8) -> VectorField {
        let f = self.sig.field();
        // [X,Y]_i = X(Y_i) - (-1)^{p(X)p(Y)} Y(X_i)
        let s = if px & py == 1 { 1 } else { f.neg(1) };
        let coeffs = (0..self.sig.a())
            .map(|i| {
                let mut out = self.apply_terms(&other.coeffs[i]);
                terms_axpy(f, &mut out, s, &other.apply_terms(&self.coeffs[i]));
                out
            })
            .collect();
        Self::from_terms(&self.sig, coeffs)
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..self.sig.a() {
            let mut terms: Vec<_> = self.coeffs[i].iter().collect();
            terms.sort_by(|a, b| self.sig.cmp_monomials(a.0, b.0));
            for (m, &c) in terms {
                let mono = self.sig.render_monomial(m);
                let d = format!("d/d{}", self.sig.name(i));
                parts.push(match (c, mono.as_str()) {
                    (1, "1") => d,
                    (c, "1") => format!("{c} {d}"),
                    (1, _) => format!("{mono} {d}"),
                    (c, _) => format!("{c} {mono} {d}"),
                });
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Inverse of [`VectorField::render`].
    pub fn parse(sig: &Arc<Signature>, text: &str) -> Result<VectorField> {
        let text = text.trim();
        let mut out = Self::zero(sig);
        if text == "0" {
            return Ok(out);
        }
        for term in text.split(" + ") {
            let (front, d) = term
                .trim()
                .rsplit_once(' ')
                .map(|(a, b)| (a.to_string(), b))
                .unwrap_or_else(|| ("1".to_string(), term.trim()));
            let name = d
                .strip_prefix("d/d")
                .ok_or_else(|| Error::Parse(format!("missing derivation in {term:?}")))?;
            let i = sig
                .index_of(name)
                .ok_or_else(|| Error::Parse(format!("unknown indeterminate {name:?}")))?;
            let coef = DPElement::parse(sig, &front)?;
            terms_axpy(sig.field(), &mut out.coeffs[i], 1, coef.terms());
        }
        Ok(out)
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({})", self.render())
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Coordinates on the degree-`k` slice of W(m;N|n;r): the basis
/// `u^r ∂_i` with `deg u^r - weight_i = k`, ordered by `i` then canonically
/// by monomial.
#[derive(Debug)]
pub struct SliceBasis {
    degree: i32,
    entries: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl SliceBasis {
    pub fn new(sig: &Signature, k: i32) -> Self {
        let entries: Vec<(usize, Monomial)> = (0..sig.a())
            .flat_map(|i| {
                sig.graded_basis(k + sig.weight(i))
                    .into_iter()
                    .map(move |m| (i, m))
            })
            .collect();
        let index = entries.iter().enumerate().map(|(n, e)| (*e, n)).collect();
        Self {
            degree: k,
            entries,
            index,
        }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Monomial)] {
        &self.entries
    }

    pub fn position(&self, i: usize, mono: &Monomial) -> Option<usize> {
        self.index.get(&(i, *mono)).copied()
    }

    /// Coordinates of a field lying in this slice; errors if some term has
    /// another degree.
    pub fn coords(&self, x: &VectorField) -> Result<Vec<u32>> {
        let mut v = vec![0u32; self.len()];
        for (i, m, c) in x.iter_terms() {
            let n = self.position(i, &m).ok_or_else(|| {
                Error::Inhomogeneous(format!("term of {x} outside degree {}", self.degree))
            })?;
            v[n] = c;
        }
        Ok(v)
    }

    pub fn field(&self, sig: &Arc<Signature>, coords: &[u32]) -> VectorField {
        let mut x = VectorField::zero(sig);
        for (n, &c) in coords.iter().enumerate() {
            if c != 0 {
                let (i, m) = self.entries[n];
                x.coeffs[i].insert(m, c);
            }
        }
        x
    }

    pub fn basis_field(&self, sig: &Arc<Signature>, n: usize) -> VectorField {
        let (i, m) = self.entries[n];
        VectorField::term(sig, i, m, 1)
    }
}

/// All fields `u^r ∂_i` of degree `k`, in canonical order.
pub fn field_basis(sig: &Arc<Signature>, k: i32) -> Vec<VectorField> {
    let slice = SliceBasis::new(sig, k);
    (0..slice.len()).map(|n| slice.basis_field(sig, n)).collect()
}

/// A signature together with a cache of its degree slices.
#[derive(Debug)]
pub struct FieldSpace {
    sig: Arc<Signature>,
    slices: Mutex<HashMap<i32, Arc<SliceBasis>>>,
}

impl FieldSpace {
    pub fn new(sig: Arc<Signature>) -> Arc<Self> {
        Arc::new(Self {
            sig,
            slices: Mutex::new(HashMap::new()),
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn slice(&self, k: i32) -> Arc<SliceBasis> {
        if let Some(s) = self.slices.lock().expect("slice cache").get(&k) {
            return s.clone();
        }
        let s = Arc::new(SliceBasis::new(&self.sig, k));
        self.slices
            .lock()
            .expect("slice cache")
            .entry(k)
            .or_insert(s)
            .clone()
    }

    /// Lowest degree of a nonzero field.
    pub fn min_degree(&self) -> i32 {
        -self.sig.weights().iter().copied().max().unwrap_or(0)
    }

    /// Highest degree of a nonzero field.
    pub fn max_degree(&self) -> i32 {
        self.sig.max_degree() - self.sig.weights().iter().copied().min().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k17(p: u64, n: u32) -> Arc<Signature> {
        Arc::new(Signature::contact_1_7(p, n).unwrap())
    }

    fn idx(s: &Signature, n: &str) -> usize {
        s.index_of(n).unwrap()
    }

    #[test]
    fn apply_examples() {
        let s = k17(3, 1);
        let dt = VectorField::partial(&s, 0);
        let t2 = DPElement::parse(&s, "t^(2)").unwrap();
        assert_eq!(dt.apply(&t2).unwrap().render(), "t");
        let v1 = idx(&s, "v1");
        let euler = VectorField::term(&s, v1, s.generator(v1), 1);
        let f = DPElement::var(&s, v1);
        assert_eq!(euler.apply(&f).unwrap(), f);
        let dv4 = VectorField::partial(&s, idx(&s, "v4"));
        assert!(dv4.apply(&DPElement::var(&s, idx(&s, "w3"))).unwrap().is_zero());
    }

    #[test]
    fn bracket_examples() {
        let s = k17(3, 1);
        let v1 = idx(&s, "v1");
        let u = idx(&s, "u");
        let dv1 = VectorField::partial(&s, v1);
        assert!(dv1.bracket(&dv1).unwrap().is_zero());
        let euler = VectorField::term(&s, u, s.generator(u), 1);
        let du = VectorField::partial(&s, u);
        assert_eq!(euler.bracket(&du).unwrap(), du.scale(2));
    }

    #[test]
    fn bracket_rejects_inhomogeneous() {
        let s = k17(3, 1);
        let mixed = VectorField::partial(&s, 0).add(&VectorField::partial(&s, 1)).unwrap();
        assert!(matches!(
            mixed.bracket(&VectorField::partial(&s, 0)),
            Err(Error::Inhomogeneous(_))
        ));
    }

    #[test]
    fn field_basis_counts() {
        let s = k17(3, 1);
        assert_eq!(field_basis(&s, -2), vec![VectorField::partial(&s, 0)]);
        // 7 odd ∂'s plus the 7 fields (odd linear)·∂_t
        assert_eq!(field_basis(&s, -1).len(), 14);
        // dim O_2 + 7 dim O_1 = 22 + 49
        assert_eq!(field_basis(&s, 0).len(), 71);
        for x in field_basis(&s, 0) {
            assert_eq!(x.degree(), Some(0));
            assert_eq!(x.parity(), Some(0));
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let s = k17(3, 1);
        let x = VectorField::parse(&s, "2 t v1 d/dt + d/dv1 + v1 w3 d/du").unwrap();
        assert_eq!(VectorField::parse(&s, &x.render()).unwrap(), x);
        assert_eq!(x.render(), "2 t v1 d/dt + d/dv1 + v1 w3 d/du");
    }
}
