//! Differential forms of degree ≤ 2, the contact form and contact vector
//! fields given by generating functions.
//!
//! Forms are written with coefficients on the left: `Σ a_j du_j` and
//! `Σ_{i≤j} c_ij du_i du_j`. Sign rules for moving `du_i`, `d` and `ι_X`
//! past each other are fixed by a [`FormConvention`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::dpsuper::{
    same_sig, sign, terms_add_scaled, terms_axpy, terms_derive, terms_mul, DPElement, Monomial,
    Signature, Terms,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::vecfields::{FieldSpace, VectorField};

/// How parity and form degree combine in the sign rule.
///
/// Under `BernsteinLeites` a form carries a single parity in which `du_i`
/// has parity `p(u_i) + 1`, and two homogeneous objects commute up to
/// `(-1)^{π_a π_b}` of their total parities. Under `Deligne`, `du_i` has the
/// parity of `u_i` and the sign is `(-1)^{k_a k_b + π_a π_b}` with `k` the
/// form degree. The two describe the same geometry but the literal
/// coefficients of a contact form mean different functionals; the
/// generating functions in the ag(2) tables are written for the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FormConvention {
    #[default]
    BernsteinLeites,
    Deligne,
}

impl FormConvention {
    /// Sign for swapping objects of (form degree mod 2, parity) `a` and `b`.
    #[inline]
    fn swap_negative(self, ka: u8, pa: u8, kb: u8, pb: u8) -> bool {
        let e = match self {
            FormConvention::BernsteinLeites => ((pa + ka) & 1) * ((pb + kb) & 1),
            FormConvention::Deligne => (ka * kb + pa * pb) & 1,
        };
        e & 1 == 1
    }
}

fn terms_sign_split(t: &Terms) -> [Terms; 2] {
    let mut out = [Terms::new(), Terms::new()];
    for (m, &c) in t {
        out[m.parity() as usize].insert(*m, c);
    }
    out
}

/// `Σ a_j du_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct OneForm {
    sig: Arc<Signature>,
    coeffs: Vec<Terms>,
}

/// `Σ_{i≤j} c_ij du_i du_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct TwoForm {
    sig: Arc<Signature>,
    coeffs: BTreeMap<(usize, usize), Terms>,
}

impl OneForm {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        Self {
            sig: sig.clone(),
            coeffs: vec![Terms::new(); sig.a()],
        }
    }

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

    pub fn coefficient(&self, j: usize) -> DPElement {
        DPElement::from_terms(&self.sig, self.coeffs[j].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Terms::is_empty)
    }

    /// Weighted degree with `deg du_i = weight_i`; `None` if zero or mixed.
    pub fn degree(&self) -> Option<i32> {
        let mut it = self.coeffs.iter().enumerate().flat_map(|(j, t)| {
            t.keys().map(move |m| self.sig.degree(m) + self.sig.weight(j))
        });
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn axpy(&self, c: u32, other: &OneForm) -> OneForm {
        let f = self.sig.field();
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            terms_axpy(f, a, c, b);
        }
        out
    }

    /// `g·ω`, multiplying every coefficient on the left.
    pub fn left_mul(&self, g: &DPElement) -> OneForm {
        OneForm {
            sig: self.sig.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|a| terms_mul(&self.sig, g.terms(), a))
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_empty())
            .map(|(j, t)| {
                let a = DPElement::from_terms(&self.sig, t.clone());
                format!("({}) d{}", a.render(), self.sig.name(j))
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl TwoForm {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        Self {
            sig: sig.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Terms::is_empty)
    }

    /// Coefficient of `du_i du_j` for `i ≤ j`.
    pub fn coefficient(&self, i: usize, j: usize) -> DPElement {
        let t = self.coeffs.get(&(i.min(j), i.max(j))).cloned().unwrap_or_default();
        DPElement::from_terms(&self.sig, t)
    }

    /// Adds `c·a du_i du_j`, folding the swap sign when `i > j`.
    fn add_term(&mut self, conv: FormConvention, i: usize, j: usize, c: u32, a: &Terms) {
        let f = self.sig.field();
        let (pi, pj) = (self.sig.parity(i), self.sig.parity(j));
        let swap = conv.swap_negative(1, pi, 1, pj);
        if i == j && swap {
            // du_i du_i = -du_i du_i
            return;
        }
        let (key, c) = if i <= j {
            ((i, j), c)
        } else {
            ((j, i), sign(f, swap, c))
        };
        let slot = self.coeffs.entry(key).or_default();
        terms_axpy(f, slot, c, a);
        if slot.is_empty() {
            self.coeffs.remove(&key);
        }
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|((i, j), t)| {
                let a = DPElement::from_terms(&self.sig, t.clone());
                format!("({}) d{} d{}", a.render(), self.sig.name(*i), self.sig.name(*j))
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OneForm({})", self.render())
    }
}

impl fmt::Debug for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoForm({})", self.render())
    }
}

/// Exterior calculus on one signature under a fixed sign convention.
#[derive(Debug, Clone, Copy, Default)]
pub struct Forms {
    pub convention: FormConvention,
}

impl Forms {
    pub fn new(convention: FormConvention) -> Self {
        Self { convention }
    }

    /// `df = Σ du_i ∂_i f`, rewritten with coefficients on the left.
    pub fn d_function(&self, g: &DPElement) -> OneForm {
        let sig = g.signature();
        let f = sig.field();
        let mut out = OneForm::zero(sig);
        for i in 0..sig.a() {
            let pi = sig.parity(i);
            for (m, c) in terms_derive(sig, i, g.terms()) {
                let neg = self.convention.swap_negative(1, pi, 0, m.parity());
                terms_add_scaled(f, &mut out.coeffs[i], m, sign(f, neg, c));
            }
        }
        out
    }

    /// `d(Σ a_j du_j) = Σ da_j du_j`.
    pub fn d_one(&self, w: &OneForm) -> TwoForm {
        let sig = &w.sig;
        let mut out = TwoForm::zero(sig);
        for (j, a) in w.coeffs.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            let da = self.d_function(&DPElement::from_terms(sig, a.clone()));
            for (i, t) in da.coeffs.iter().enumerate() {
                if !t.is_empty() {
                    out.add_term(self.convention, i, j, 1, t);
                }
            }
        }
        out
    }

    /// `ι_X ω` for a one-form: the pairing `ω(X)`.
    pub fn interior_one(&self, x: &VectorField, w: &OneForm) -> Result<DPElement> {
        if !same_sig(x.signature(), &w.sig) {
            return Err(Error::SignatureMismatch);
        }
        let sig = &w.sig;
        let f = sig.field();
        let mut out = Terms::new();
        for j in 0..sig.a() {
            let xj = x.coeff_terms(j);
            if xj.is_empty() || w.coeffs[j].is_empty() {
                continue;
            }
            let pj = sig.parity(j);
            // ι_{∂_j}(a du_j) = ± a
            for (par, part) in terms_sign_split(&w.coeffs[j]).iter().enumerate() {
                if part.is_empty() {
                    continue;
                }
                let neg = self.convention.swap_negative(1, pj, 0, par as u8);
                terms_axpy(f, &mut out, sign(f, neg, 1), &terms_mul(sig, xj, part));
            }
        }
        Ok(DPElement::from_terms(sig, out))
    }

    /// `ι_X ω` for a two-form, contracting the first slot.
    pub fn interior_two(&self, x: &VectorField, w: &TwoForm) -> Result<OneForm> {
        if !same_sig(x.signature(), &w.sig) {
            return Err(Error::SignatureMismatch);
        }
        let sig = &w.sig;
        let f = sig.field();
        let conv = self.convention;
        let mut out = OneForm::zero(sig);
        for (&(i, j), c) in &w.coeffs {
            let (pi, pj) = (sig.parity(i), sig.parity(j));
            for (par, part) in terms_sign_split(c).iter().enumerate() {
                if part.is_empty() {
                    continue;
                }
                let par = par as u8;
                // ι_{∂_k}(c du_i du_j) = ±c (δ_ki du_j ± δ_kj du_i)
                let xi = x.coeff_terms(i);
                if !xi.is_empty() {
                    let neg = conv.swap_negative(1, pi, 0, par);
                    terms_axpy(f, &mut out.coeffs[j], sign(f, neg, 1), &terms_mul(sig, xi, part));
                }
                let xj = x.coeff_terms(j);
                if !xj.is_empty() {
                    let neg = conv.swap_negative(1, pj, 0, par) ^ conv.swap_negative(1, pj, 1, pi);
                    terms_axpy(f, &mut out.coeffs[i], sign(f, neg, 1), &terms_mul(sig, xj, part));
                }
            }
        }
        Ok(out)
    }

    /// `L_X ω = ι_X dω ± d ι_X ω`, the sign making `L_X f = X(f)` on functions.
    pub fn lie_derivative(&self, x: &VectorField, w: &OneForm) -> Result<OneForm> {
        if x.is_zero() {
            return Ok(OneForm::zero(&w.sig));
        }
        let px = x
            .parity()
            .ok_or_else(|| Error::Inhomogeneous(format!("{x}")))?;
        let first = self.interior_two(x, &self.d_one(w))?;
        let second = self.d_function(&self.interior_one(x, w)?);
        let f = w.sig.field();
        let neg = !self.convention.swap_negative(1, px, 1, 0);
        Ok(first.axpy(sign(f, neg, 1), &second))
    }
}

/// The contact form together with a cache of solved generating-function
/// slices.
#[derive(Debug)]
pub struct ContactStructure {
    space: Arc<FieldSpace>,
    alpha: OneForm,
    forms: Forms,
    slices: Mutex<HashMap<i32, Arc<Vec<VectorField>>>>,
}

impl ContactStructure {
    /// Requires the first indeterminate to be the even `t` with constant
    /// coefficient 1 in `alpha`.
    pub fn new(space: Arc<FieldSpace>, alpha: OneForm, convention: FormConvention) -> Result<Self> {
        let sig = space.signature();
        if !same_sig(sig, &alpha.sig) {
            return Err(Error::SignatureMismatch);
        }
        if sig.m() != 1 {
            return Err(Error::InvalidSignature("contact structure needs exactly one even t".into()));
        }
        let one: Terms = [(Monomial::ONE, 1)].into_iter().collect();
        if alpha.coeffs[0] != one {
            return Err(Error::InvalidSignature("dt-coefficient of alpha must be 1".into()));
        }
        Ok(Self {
            space,
            alpha,
            forms: Forms::new(convention),
            slices: Mutex::new(HashMap::new()),
        })
    }

    /// `α = dt - Σ_{i=1,3,4}(v_i dw_i + w_i dv_i) + 2u du` on k(1;N|7).
    pub fn ag2_form(space: Arc<FieldSpace>) -> Result<Self> {
        Self::ag2_form_with(space, FormConvention::default())
    }

    pub fn ag2_form_with(space: Arc<FieldSpace>, convention: FormConvention) -> Result<Self> {
        let sig = space.signature().clone();
        let idx = |n: &str| {
            sig.index_of(n)
                .ok_or_else(|| Error::InvalidSignature(format!("missing indeterminate {n}")))
        };
        let mut coeffs = vec![DPElement::zero(&sig); sig.a()];
        coeffs[idx("t")?] = DPElement::one(&sig);
        for k in ["1", "3", "4"] {
            let (v, w) = (idx(&format!("v{k}"))?, idx(&format!("w{k}"))?);
            coeffs[w] = DPElement::var(&sig, v).scale(-1);
            coeffs[v] = DPElement::var(&sig, w).scale(-1);
        }
        let u = idx("u")?;
        coeffs[u] = DPElement::var(&sig, u).scale(2);
        let alpha = OneForm::from_coefficients(&sig, coeffs)?;
        Self::new(space, alpha, convention)
    }

    pub fn space(&self) -> &Arc<FieldSpace> {
        &self.space
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.space.signature()
    }

    pub fn alpha(&self) -> &OneForm {
        &self.alpha
    }

    pub fn forms(&self) -> Forms {
        self.forms
    }

    /// `α(X)`.
    pub fn pairing(&self, x: &VectorField) -> Result<DPElement> {
        self.forms.interior_one(x, &self.alpha)
    }

    /// `L_X α - μ α` with `μ` the dt-coefficient of `L_X α`; zero exactly
    /// for contact fields.
    pub fn contact_defect(&self, x: &VectorField) -> Result<(DPElement, OneForm)> {
        let l = self.forms.lie_derivative(x, &self.alpha)?;
        let mu = l.coefficient(0);
        let f = self.signature().field();
        let defect = l.axpy(f.neg(1), &self.alpha.left_mul(&mu));
        Ok((mu, defect))
    }

    pub fn is_contact(&self, x: &VectorField) -> Result<bool> {
        Ok(self.contact_defect(x)?.1.is_zero())
    }

    /// Fields `X_m` with `α(X_m) = m` for every monomial `m` of degree
    /// `k + 2`, in canonical monomial order.
    pub fn contact_basis(&self, k: i32) -> Result<Arc<Vec<VectorField>>> {
        if let Some(s) = self.slices.lock().expect("contact cache").get(&k) {
            return Ok(s.clone());
        }
        let solved = Arc::new(self.solve_slice(k)?);
        Ok(self
            .slices
            .lock()
            .expect("contact cache")
            .entry(k)
            .or_insert(solved)
            .clone())
    }

    fn solve_slice(&self, k: i32) -> Result<Vec<VectorField>> {
        let sig = self.signature();
        let f = sig.field();
        let targets = sig.graded_basis(k + 2);
        if targets.is_empty() {
            return Ok(Vec::new());
        }
        let slice = self.space.slice(k);
        let n = slice.len();
        // equations L_X α - μα = 0, one row per (j, monomial) coordinate
        let mut eq_index: HashMap<(usize, Monomial), usize> = HashMap::new();
        let defects: Vec<OneForm> = (0..n)
            .into_par_iter()
            .map(|c| self.contact_defect(&slice.basis_field(sig, c)).map(|d| d.1))
            .collect::<Result<_>>()?;
        let mut columns: Vec<Vec<(usize, u32)>> = Vec::with_capacity(n);
        for d in &defects {
            let mut col = Vec::new();
            for (j, t) in d.coeffs.iter().enumerate() {
                for (m, &c) in t {
                    let next = eq_index.len();
                    let r = *eq_index.entry((j, *m)).or_insert(next);
                    col.push((r, c));
                }
            }
            columns.push(col);
        }
        let mut rows = vec![vec![0u32; n]; eq_index.len()];
        for (c, col) in columns.iter().enumerate() {
            for &(r, v) in col {
                rows[r][c] = v;
            }
        }
        let contact = linalg::kernel(f, n, rows);
        // pair α(z) with z and invert
        let t_index: HashMap<Monomial, usize> =
            targets.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let width = targets.len() + n;
        let mut e = Echelon::new(f, width);
        for z in &contact {
            let x = slice.field(sig, z);
            let a = self.pairing(&x)?;
            let mut row = vec![0u32; width];
            for (m, &c) in a.terms() {
                let i = t_index.get(m).ok_or_else(|| {
                    Error::InconsistentSystem(format!("α(X) leaves degree {}", k + 2))
                })?;
                row[*i] = c;
            }
            row[targets.len()..].copy_from_slice(z);
            e.insert(row);
        }
        let rref = e.rref();
        if contact.len() != targets.len() || rref.len() != targets.len() {
            return Err(Error::InconsistentSystem(format!(
                "degree {k}: {} contact fields for {} generating functions",
                contact.len(),
                targets.len()
            )));
        }
        rref.iter()
            .enumerate()
            .map(|(i, row)| {
                if row[..targets.len()].iter().enumerate().any(|(c, &v)| v != (c == i) as u32) {
                    return Err(Error::InconsistentSystem(format!(
                        "degree {k}: pairing is not invertible"
                    )));
                }
                Ok(slice.field(sig, &row[targets.len()..]))
            })
            .collect()
    }

    /// The unique contact field with `α(X_f) = f`.
    pub fn field_of(&self, g: &DPElement) -> Result<VectorField> {
        let sig = self.signature();
        if !same_sig(g.signature(), sig) {
            return Err(Error::SignatureMismatch);
        }
        if g.is_zero() {
            return Ok(VectorField::zero(sig));
        }
        let d = g
            .degree()
            .filter(|_| g.parity().is_some())
            .ok_or_else(|| Error::Inhomogeneous(g.render()))?;
        let basis = self.contact_basis(d - 2)?;
        let targets = sig.graded_basis(d);
        let mut out = VectorField::zero(sig);
        for (m, x) in targets.iter().zip(basis.iter()) {
            let c = g.coefficient(m);
            if c != 0 {
                out = out.axpy(c, x)?;
            }
        }
        Ok(out)
    }

    /// `α(X)` for a contact field; errors on non-contact input.
    pub fn generating_function(&self, x: &VectorField) -> Result<DPElement> {
        if !self.is_contact(x)? {
            return Err(Error::NotContact(x.render()));
        }
        self.pairing(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u64, n: u32) -> ContactStructure {
        let sig = Arc::new(Signature::contact_1_7(p, n).unwrap());
        ContactStructure::ag2_form(FieldSpace::new(sig)).unwrap()
    }

    fn el(c: &ContactStructure, s: &str) -> DPElement {
        DPElement::parse(c.signature(), s).unwrap()
    }

    #[test]
    fn interior_examples() {
        let c = setup(3, 1);
        let sig = c.signature().clone();
        let dt = VectorField::partial(&sig, 0);
        assert_eq!(c.pairing(&dt).unwrap(), DPElement::one(&sig));
        let du = VectorField::partial(&sig, sig.index_of("u").unwrap());
        assert_eq!(c.pairing(&du).unwrap().render(), "2 u");
        let dv1 = VectorField::partial(&sig, 1);
        let dtf = c.forms().d_function(&el(&c, "t"));
        assert!(c.forms().interior_one(&dv1, &dtf).unwrap().is_zero());
    }

    #[test]
    fn d_squared_vanishes_on_small_monomials() {
        let c = setup(3, 1);
        let sig = c.signature().clone();
        for d in 0..=6 {
            for m in sig.graded_basis(d) {
                let g = DPElement::monomial(&sig, m, 1);
                assert!(c.forms().d_one(&c.forms().d_function(&g)).is_zero());
            }
        }
    }

    #[test]
    fn field_of_examples() {
        let c = setup(3, 1);
        let sig = c.signature().clone();
        assert_eq!(c.field_of(&DPElement::one(&sig)).unwrap(), VectorField::partial(&sig, 0));
        let (mu, defect) = c.contact_defect(&VectorField::partial(&sig, 0)).unwrap();
        assert!(mu.is_zero() && defect.is_zero());
        let xt = c.field_of(&el(&c, "t")).unwrap();
        let (mu, _) = c.contact_defect(&xt).unwrap();
        assert!(!mu.is_zero());
        let xv4 = c.field_of(&el(&c, "v4")).unwrap();
        assert_eq!(xv4.degree(), Some(-1));
        assert_eq!(xv4.parity(), Some(1));
        // v4 is isotropic for the pairing in α; its partner is w4
        assert!(xv4.bracket(&xv4).unwrap().is_zero());
        let xw4 = c.field_of(&el(&c, "w4")).unwrap();
        let sq = xv4.bracket(&xw4).unwrap();
        assert_eq!(sq.iter_terms().count(), 1);
        assert_eq!(sq.coeff_terms(0).keys().next(), Some(&Monomial::ONE));
        let xu = c.field_of(&el(&c, "u")).unwrap();
        assert!(!xu.bracket(&xu).unwrap().is_zero());
        let v1pp = el(&c, "t w4 + v1 w1 w4 + v3 w3 w4 + u w1 w3");
        let x = c.field_of(&v1pp).unwrap();
        assert_eq!((x.degree(), x.parity()), (Some(1), Some(1)));
        assert_eq!(c.generating_function(&x).unwrap(), v1pp);
    }

    #[test]
    fn generating_function_rejects_non_contact() {
        let c = setup(3, 1);
        let sig = c.signature().clone();
        let x = VectorField::term(&sig, 0, sig.generator(1), 1);
        assert!(matches!(c.generating_function(&x), Err(Error::NotContact(_))));
    }

    #[test]
    fn grading_field_acts_by_degree() {
        let c = setup(5, 1);
        let xt = c.field_of(&el(&c, "t")).unwrap();
        let xv4 = c.field_of(&el(&c, "v4")).unwrap();
        let b = xt.bracket(&xv4).unwrap();
        let g = c.generating_function(&b).unwrap();
        let v4 = el(&c, "v4");
        assert!(!g.is_zero());
        assert!((1..5).any(|s| v4.scale(s) == g));
    }
}
