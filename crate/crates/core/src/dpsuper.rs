//! The divided-powers supercommutative superalgebra O(m;N|n).
//!
//! A [`Monomial`] is a multi-index `u^(r)`: even exponents are divided powers
//! capped at `p^N_i - 1`, odd exponents are 0 or 1 and are kept as a bitmask
//! read in the fixed indeterminate order. Products carry the Lucas binomial
//! coefficient and the Koszul sign from reordering odd factors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfp::PrimeField;

/// Maximal number of even indeterminates supported by [`Monomial`].
pub const MAX_EVEN: usize = 4;
/// Maximal number of odd indeterminates supported by [`Monomial`].
pub const MAX_ODD: usize = 64;

/// Ground field, indeterminates, heights and grading of an O(m;N|n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    field: PrimeField,
    heights: Vec<u32>,
    caps: Vec<u64>,
    odd: usize,
    names: Vec<String>,
    weights: Vec<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    even: [u32; MAX_EVEN],
    odd: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        even: [0; MAX_EVEN],
        odd: 0,
    };

    pub fn even_exponent(&self, i: usize) -> u32 {
        self.even[i]
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn has_odd(&self, j: usize) -> bool {
        self.odd >> j & 1 == 1
    }

    pub fn odd_count(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn parity(&self) -> u8 {
        (self.odd.count_ones() & 1) as u8
    }
}

/// `(-1)^k` as a residue.
#[inline]
pub(crate) fn sign(f: PrimeField, negative: bool, c: u32) -> u32 {
    if negative {
        f.neg(c)
    } else {
        c
    }
}

impl Signature {
    pub fn new(
        p: u64,
        heights: Vec<u32>,
        odd: usize,
        names: Vec<String>,
        weights: Vec<i32>,
    ) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let m = heights.len();
        if m > MAX_EVEN || odd > MAX_ODD {
            return Err(Error::InvalidSignature(format!(
                "at most {MAX_EVEN} even and {MAX_ODD} odd indeterminates"
            )));
        }
        if names.len() != m + odd || weights.len() != m + odd {
            return Err(Error::InvalidSignature(
                "names and weights must cover every indeterminate".into(),
            ));
        }
        if weights.iter().any(|&w| w < 1) {
            return Err(Error::InvalidSignature("weights must be positive".into()));
        }
        if heights.contains(&0) {
            return Err(Error::InvalidSignature("heights must be positive".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if n.is_empty() || n.contains(char::is_whitespace) || !seen.insert(n.as_str()) {
                return Err(Error::InvalidSignature(format!("bad indeterminate name {n:?}")));
            }
        }
        let caps = heights
            .iter()
            .map(|&n| p.checked_pow(n).map(|q| q - 1))
            .collect::<Option<Vec<_>>>()
            .filter(|c| c.iter().all(|&c| c <= u32::MAX as u64))
            .ok_or_else(|| Error::InvalidSignature("height too large".into()))?;
        Ok(Self {
            field,
            heights,
            caps,
            odd,
            names,
            weights,
        })
    }

    /// Standard grading, generic names `x1.. | y1..`.
    pub fn standard(p: u64, heights: Vec<u32>, odd: usize) -> Result<Self> {
        let m = heights.len();
        let names = (1..=m)
            .map(|i| format!("x{i}"))
            .chain((1..=odd).map(|j| format!("y{j}")))
            .collect();
        Self::new(p, heights, odd, names, vec![1; m + odd])
    }

    /// The signature of k(1;N|7): `t` (weight 2) then the odd
    /// `v1, v3, v4, w1, w3, w4, u` (weight 1).
    pub fn contact_1_7(p: u64, height: u32) -> Result<Self> {
        let names = ["t", "v1", "v3", "v4", "w1", "w3", "w4", "u"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::new(p, vec![height], 7, names, vec![2, 1, 1, 1, 1, 1, 1, 1])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    /// Number of even indeterminates.
    pub fn m(&self) -> usize {
        self.heights.len()
    }

    /// Number of odd indeterminates.
    pub fn n(&self) -> usize {
        self.odd
    }

    /// Total number of indeterminates.
    pub fn a(&self) -> usize {
        self.m() + self.odd
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weight(&self, i: usize) -> i32 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[i32] {
        &self.weights
    }

    /// Largest exponent allowed for even indeterminate `i`.
    pub fn cap(&self, i: usize) -> u64 {
        self.caps[i]
    }

    pub fn is_odd(&self, i: usize) -> bool {
        i >= self.m()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.is_odd(i) as u8
    }

    pub fn degree(&self, mono: &Monomial) -> i32 {
        let m = self.m();
        let even: i32 = (0..m).map(|i| mono.even[i] as i32 * self.weights[i]).sum();
        let odd: i32 = (0..self.odd)
            .filter(|&j| mono.has_odd(j))
            .map(|j| self.weights[m + j])
            .sum();
        even + odd
    }

    /// Largest weighted degree of a basis monomial.
    pub fn max_degree(&self) -> i32 {
        let m = self.m();
        let even: i32 = (0..m).map(|i| self.caps[i] as i32 * self.weights[i]).sum();
        even + self.weights[m..].iter().sum::<i32>()
    }

    /// Number of basis monomials of O(m;N|n).
    pub fn dimension(&self) -> u64 {
        self.caps.iter().map(|c| c + 1).product::<u64>() << self.odd
    }

    /// A single indeterminate `u_i` as a monomial.
    pub fn generator(&self, i: usize) -> Monomial {
        let mut mono = Monomial::ONE;
        if self.is_odd(i) {
            mono.odd = 1 << (i - self.m());
        } else {
            mono.even[i] = 1;
        }
        mono
    }

    /// Builds a monomial from its full exponent vector.
    pub fn monomial(&self, exponents: &[u64]) -> Result<Monomial> {
        if exponents.len() != self.a() {
            return Err(Error::InvalidSignature("exponent vector length".into()));
        }
        let mut mono = Monomial::ONE;
        for (i, &e) in exponents.iter().enumerate() {
            if self.is_odd(i) {
                if e > 1 {
                    return Err(Error::InvalidSignature("odd exponent above 1".into()));
                }
                mono.odd |= e << (i - self.m());
            } else {
                if e > self.caps[i] {
                    return Err(Error::InvalidSignature("even exponent above cap".into()));
                }
                mono.even[i] = e as u32;
            }
        }
        Ok(mono)
    }

    pub fn exponents(&self, mono: &Monomial) -> Vec<u64> {
        (0..self.a())
            .map(|i| {
                if self.is_odd(i) {
                    mono.has_odd(i - self.m()) as u64
                } else {
                    mono.even[i] as u64
                }
            })
            .collect()
    }

    /// Graded lexicographic order: degree ascending, then exponent vectors
    /// compared lexicographically with larger exponents first.
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| {
            for i in 0..self.m() {
                match b.even[i].cmp(&a.even[i]) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
            // the lowest differing bit decides; set bit sorts first
            let diff = a.odd ^ b.odd;
            if diff == 0 {
                Ordering::Equal
            } else if a.odd & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }

    /// `u^r · u^s = C(r+s, r) u^(r+s)` with the Koszul sign; `None` when the
    /// product vanishes.
    pub fn mono_mul(&self, a: &Monomial, b: &Monomial) -> Option<(u32, Monomial)> {
        if a.odd & b.odd != 0 {
            return None;
        }
        let f = self.field;
        let mut coef = 1u32;
        let mut out = Monomial::ONE;
        for i in 0..self.m() {
            let (x, y) = (a.even[i] as u64, b.even[i] as u64);
            let c = f.binom(x + y, x);
            if c == 0 || x + y > self.caps[i] {
                return None;
            }
            coef = f.mul(coef, c);
            out.even[i] = (x + y) as u32;
        }
        // count pairs (j in a, k in b) with j > k
        let mut swaps = 0u32;
        let mut rest = b.odd;
        while rest != 0 {
            let k = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += (a.odd >> k >> 1).count_ones();
        }
        out.odd = a.odd | b.odd;
        Some((sign(f, swaps & 1 == 1, coef), out))
    }

    /// Special derivation `∂_i` acting from the left on a monomial.
    pub fn mono_derive(&self, i: usize, mono: &Monomial) -> Option<(u32, Monomial)> {
        let mut out = *mono;
        if self.is_odd(i) {
            let j = i - self.m();
            if !mono.has_odd(j) {
                return None;
            }
            let before = (mono.odd & ((1u64 << j) - 1)).count_ones();
            out.odd &= !(1u64 << j);
            Some((sign(self.field, before & 1 == 1, 1), out))
        } else {
            if mono.even[i] == 0 {
                return None;
            }
            out.even[i] -= 1;
            Some((1, out))
        }
    }

    /// All monomials of weighted degree `d`, in canonical order.
    pub fn graded_basis(&self, d: i32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        let m = self.m();
        let mut odd_by_degree: BTreeMap<i32, Vec<u64>> = BTreeMap::new();
        for mask in 0..(1u64 << self.odd) {
            let deg: i32 = (0..self.odd)
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| self.weights[m + j])
                .sum();
            odd_by_degree.entry(deg).or_default().push(mask);
        }
        let mut even = [0u32; MAX_EVEN];
        self.even_parts(0, d, &mut even, &mut |even, rest| {
            if let Some(masks) = odd_by_degree.get(&rest) {
                for &odd in masks {
                    out.push(Monomial { even: *even, odd });
                }
            }
        });
        out.sort_by(|a, b| self.cmp_monomials(a, b));
        out
    }

    fn even_parts(
        &self,
        i: usize,
        budget: i32,
        even: &mut [u32; MAX_EVEN],
        emit: &mut dyn FnMut(&[u32; MAX_EVEN], i32),
    ) {
        if i == self.m() {
            emit(even, budget);
            return;
        }
        let w = self.weights[i];
        let mut e = 0u64;
        while e <= self.caps[i] && (e as i32) * w <= budget {
            even[i] = e as u32;
            self.even_parts(i + 1, budget - e as i32 * w, even, emit);
            e += 1;
        }
        even[i] = 0;
    }

    pub fn render_monomial(&self, mono: &Monomial) -> String {
        let mut parts = Vec::new();
        for i in 0..self.m() {
            match mono.even[i] {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                k => parts.push(format!("{}^({k})", self.names[i])),
            }
        }
        for j in 0..self.odd {
            if mono.has_odd(j) {
                parts.push(self.names[self.m() + j].clone());
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// Parses one factor token: `name`, `name^(k)` or `name^k` (both read as
    /// divided powers).
    fn parse_factor(&self, token: &str) -> Result<Monomial> {
        let (name, power) = match token.split_once('^') {
            Some((n, k)) => {
                let k = k.trim_start_matches('(').trim_end_matches(')');
                let k: u64 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
                (n, k)
            }
            None => (token, 1),
        };
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::Parse(format!("unknown indeterminate {name:?}")))?;
        let mut exps = vec![0u64; self.a()];
        exps[i] = power;
        self.monomial(&exps)
            .map_err(|_| Error::Parse(format!("exponent out of range in {token:?}")))
    }
}

/// Sparse coefficient map of a function.
pub type Terms = BTreeMap<Monomial, u32>;

pub(crate) fn terms_add_scaled(f: PrimeField, acc: &mut Terms, mono: Monomial, c: u32) {
    if c == 0 {
        return;
    }
    match acc.entry(mono) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = f.add(*e.get(), c);
            if s == 0 {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub(crate) fn terms_axpy(f: PrimeField, acc: &mut Terms, c: u32, x: &Terms) {
    if c == 0 {
        return;
    }
    for (m, &v) in x {
        terms_add_scaled(f, acc, *m, f.mul(c, v));
    }
}

pub(crate) fn terms_mul(sig: &Signature, a: &Terms, b: &Terms) -> Terms {
    let f = sig.field();
    let mut out = Terms::new();
    for (ma, &ca) in a {
        for (mb, &cb) in b {
            if let Some((c, m)) = sig.mono_mul(ma, mb) {
                terms_add_scaled(f, &mut out, m, f.mul(c, f.mul(ca, cb)));
            }
        }
    }
    out
}

pub(crate) fn terms_derive(sig: &Signature, i: usize, a: &Terms) -> Terms {
    let f = sig.field();
    let mut out = Terms::new();
    for (m, &c) in a {
        if let Some((s, d)) = sig.mono_derive(i, m) {
            terms_add_scaled(f, &mut out, d, f.mul(s, c));
        }
    }
    out
}

/// Parity of a coefficient map, `None` for zero or mixed parity.
pub(crate) fn terms_parity(a: &Terms) -> Option<u8> {
    let mut it = a.keys().map(Monomial::parity);
    let first = it.next()?;
    it.all(|p| p == first).then_some(first)
}

pub(crate) fn terms_degree(sig: &Signature, a: &Terms) -> Option<i32> {
    let mut it = a.keys().map(|m| sig.degree(m));
    let first = it.next()?;
    it.all(|d| d == first).then_some(first)
}

/// An element of O(m;N|n): a GF(p)-linear combination of monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct DPElement {
    sig: Arc<Signature>,
    terms: Terms,
}

pub(crate) fn same_sig(a: &Arc<Signature>, b: &Arc<Signature>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl DPElement {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        Self {
            sig: sig.clone(),
            terms: Terms::new(),
        }
    }

    pub fn one(sig: &Arc<Signature>) -> Self {
        Self::monomial(sig, Monomial::ONE, 1)
    }

    pub fn monomial(sig: &Arc<Signature>, mono: Monomial, coef: i64) -> Self {
        let mut terms = Terms::new();
        terms_add_scaled(sig.field(), &mut terms, mono, sig.field().from_i64(coef));
        Self {
            sig: sig.clone(),
            terms,
        }
    }

    /// The indeterminate `u_i`.
    pub fn var(sig: &Arc<Signature>, i: usize) -> Self {
        Self::monomial(sig, sig.generator(i), 1)
    }

    pub(crate) fn from_terms(sig: &Arc<Signature>, terms: Terms) -> Self {
        Self {
            sig: sig.clone(),
            terms,
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &Monomial) -> u32 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    /// Terms in canonical order.
    pub fn sorted_terms(&self) -> Vec<(Monomial, u32)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, *c)).collect();
        v.sort_by(|a, b| self.sig.cmp_monomials(&a.0, &b.0));
        v
    }

    /// `None` when zero or of mixed parity.
    pub fn parity(&self) -> Option<u8> {
        terms_parity(&self.terms)
    }

    /// `None` when zero or of mixed degree.
    pub fn degree(&self) -> Option<i32> {
        terms_degree(&self.sig, &self.terms)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || (self.parity().is_some() && self.degree().is_some())
    }

    fn check(&self, other: &DPElement) -> Result<()> {
        if same_sig(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn add(&self, other: &DPElement) -> Result<DPElement> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        terms_axpy(self.sig.field(), &mut terms, 1, &other.terms);
        Ok(Self::from_terms(&self.sig, terms))
    }

    pub fn sub(&self, other: &DPElement) -> Result<DPElement> {
        self.check(other)?;
        let f = self.sig.field();
        let mut terms = self.terms.clone();
        terms_axpy(f, &mut terms, f.neg(1), &other.terms);
        Ok(Self::from_terms(&self.sig, terms))
    }

    pub fn scale(&self, c: i64) -> DPElement {
        let f = self.sig.field();
        let mut terms = Terms::new();
        terms_axpy(f, &mut terms, f.from_i64(c), &self.terms);
        Self::from_terms(&self.sig, terms)
    }

    /// The divided-powers product.
    pub fn mul(&self, other: &DPElement) -> Result<DPElement> {
        self.check(other)?;
        Ok(Self::from_terms(
            &self.sig,
            terms_mul(&self.sig, &self.terms, &other.terms),
        ))
    }

    /// Special derivation `∂_i`, acting from the left.
    pub fn derive(&self, i: usize) -> DPElement {
        Self::from_terms(&self.sig, terms_derive(&self.sig, i, &self.terms))
    }

    /// Canonical text: terms joined by ` + `, coefficient prefix omitted when 1.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.sorted_terms()
            .iter()
            .map(|(m, c)| {
                let mono = self.sig.render_monomial(m);
                match (*c, mono.as_str()) {
                    (c, "1") => c.to_string(),
                    (1, _) => mono,
                    (c, _) => format!("{c} {mono}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses a sum of products. Factors are multiplied in the written
    /// order, so odd factors out of canonical order pick up their sign.
    /// A leading `-` on a term negates it.
    pub fn parse(sig: &Arc<Signature>, text: &str) -> Result<DPElement> {
        let f = sig.field();
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero(sig));
        }
        let mut acc = Terms::new();
        for raw in split_terms(text)? {
            let (neg, body) = match raw.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, raw.trim()),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let mut coef = 1u32;
            let mut mono = Monomial::ONE;
            let mut zero = false;
            for token in body.split_whitespace() {
                if token.chars().all(|c| c.is_ascii_digit()) {
                    let v: u64 = token
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {token:?}")))?;
                    coef = f.mul(coef, f.reduce(v));
                    continue;
                }
                let factor = sig.parse_factor(token)?;
                match sig.mono_mul(&mono, &factor) {
                    Some((c, m)) => {
                        coef = f.mul(coef, c);
                        mono = m;
                    }
                    None => zero = true,
                }
            }
            if !zero {
                terms_add_scaled(f, &mut acc, mono, sign(f, neg, coef));
            }
        }
        Ok(Self::from_terms(sig, acc))
    }
}

fn split_terms(text: &str) -> Result<Vec<String>> {
    // split on '+', and before every '-' that starts a new term
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '+' => out.push(std::mem::take(&mut cur)),
            '-' => {
                if !cur.trim().is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                cur.push('-');
            }
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    if out.iter().any(|t| t.trim().is_empty() || t.trim() == "-") {
        return Err(Error::Parse(format!("malformed sum {text:?}")));
    }
    Ok(out)
}

impl fmt::Debug for DPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DPElement({})", self.render())
    }
}

impl fmt::Display for DPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k17(p: u64, n: u32) -> Arc<Signature> {
        Arc::new(Signature::contact_1_7(p, n).unwrap())
    }

    fn el(sig: &Arc<Signature>, s: &str) -> DPElement {
        DPElement::parse(sig, s).unwrap()
    }

    #[test]
    fn divided_power_products() {
        let s = k17(3, 1);
        let t = el(&s, "t");
        assert_eq!(t.mul(&t).unwrap().render(), "2 t^(2)");
        assert!(el(&s, "t^(2)").mul(&t).unwrap().is_zero());
        let v1 = el(&s, "v1");
        assert!(v1.mul(&v1).unwrap().is_zero());
        let w3 = el(&s, "w3");
        assert_eq!(v1.mul(&w3).unwrap().render(), "v1 w3");
        assert_eq!(w3.mul(&v1).unwrap().render(), "2 v1 w3");
    }

    #[test]
    fn special_derivations() {
        let s = k17(3, 1);
        let t = s.index_of("t").unwrap();
        let w3 = s.index_of("w3").unwrap();
        assert_eq!(el(&s, "t^(2)").derive(t).render(), "t");
        assert_eq!(el(&s, "v1 w3").derive(w3).render(), "2 v1");
        assert!(DPElement::one(&s).derive(0).is_zero());
    }

    #[test]
    fn graded_basis_counts() {
        let s = k17(3, 1);
        assert_eq!(s.graded_basis(0), vec![Monomial::ONE]);
        assert_eq!(s.graded_basis(1).len(), 7);
        let b2 = s.graded_basis(2);
        assert_eq!(b2.len(), 22);
        assert_eq!(s.render_monomial(&b2[0]), "t");
        let total: usize = (0..=s.max_degree()).map(|d| s.graded_basis(d).len()).sum();
        assert_eq!(total as u64, s.dimension());
        assert_eq!(s.dimension(), 384);
    }

    #[test]
    fn render_parse_round_trip() {
        let s = k17(3, 2);
        let f = el(&s, "t^(4) + 2 t^(2) v1 v3 u w4 + v1 u w1");
        // written-order odd factors are re-signed into canonical order
        assert_eq!(f.render(), "2 v1 w1 u + t^(4) + t^(2) v1 v3 w4 u");
        assert_eq!(el(&s, &f.render()), f);
        assert_eq!(el(&s, "-v4 w3 - u v1").render(), "v1 u + 2 v4 w3");
        assert!(DPElement::parse(&s, "q1").is_err());
        assert!(DPElement::parse(&s, "t^(9)").is_err());
        assert!(DPElement::parse(&s, "t + ").is_err());
    }

    #[test]
    fn signature_validation() {
        assert!(Signature::new(3, vec![1], 1, vec!["a".into()], vec![1]).is_err());
        assert!(Signature::new(2, vec![1], 0, vec!["a".into()], vec![1]).is_err());
        assert!(Signature::new(3, vec![1], 1, vec!["a".into(), "a".into()], vec![1, 1]).is_err());
        assert!(Signature::new(3, vec![1], 1, vec!["a".into(), "b".into()], vec![1, 0]).is_err());
    }
}
