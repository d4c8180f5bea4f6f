//! Property suites over the engine, run from the CLI and the acceptance
//! harness. Sampling is seeded, so a run is reproducible.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ag2lab::{build_model, verify_chevalley, Acting, G2_CARTAN};
use crate::contact::{ContactStructure, FormConvention, Forms};
use crate::dpsuper::{DPElement, Signature};
use crate::error::Result;
use crate::liestruct::Component;
use crate::prolong::{prolong_step, solve_membership};
use crate::vecfields::{FieldSpace, VectorField};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, cases: usize, failure: Option<String>) -> Self {
        Self {
            name,
            passed: failure.is_none(),
            cases,
            detail: failure.unwrap_or_default(),
        }
    }
}

/// A homogeneous function with up to `terms` random monomials.
pub fn random_function(sig: &Arc<Signature>, rng: &mut impl Rng, terms: usize) -> DPElement {
    let f = sig.field();
    loop {
        let d = rng.gen_range(0..=sig.max_degree());
        let basis = sig.graded_basis(d);
        if basis.is_empty() {
            continue;
        }
        let mut g = DPElement::zero(sig);
        for _ in 0..terms {
            let m = basis[rng.gen_range(0..basis.len())];
            let c = rng.gen_range(1..f.p());
            g = g.add(&DPElement::monomial(sig, m, c as i64)).expect("same signature");
        }
        if !g.is_zero() {
            return g;
        }
    }
}

/// A random element of the degree-`k` slice of W.
pub fn random_field(space: &FieldSpace, k: i32, rng: &mut impl Rng, terms: usize) -> VectorField {
    let sig = space.signature();
    let slice = space.slice(k);
    let mut coords = vec![0u32; slice.len()];
    for _ in 0..terms {
        if slice.is_empty() {
            break;
        }
        coords[rng.gen_range(0..slice.len())] = rng.gen_range(1..sig.field().p());
    }
    slice.field(sig, &coords)
}

fn parity(g: &DPElement) -> u8 {
    g.parity().unwrap_or(0)
}

/// `(-1)^(a b)` applied to `g`.
fn signed(g: &DPElement, a: u8, b: u8) -> DPElement {
    if a & b == 1 {
        g.scale(-1)
    } else {
        g.clone()
    }
}

fn dp_multiplication(sig: &Arc<Signature>, rng: &mut impl Rng, samples: usize) -> Result<CheckResult> {
    let f = sig.field();
    for _ in 0..samples {
        let (a, b, c) = (
            random_function(sig, rng, 4),
            random_function(sig, rng, 4),
            random_function(sig, rng, 4),
        );
        if a.mul(&b)? != signed(&b.mul(&a)?, parity(&a), parity(&b)) {
            return Ok(CheckResult::new("dp-mul", samples, Some(format!("supercommutativity: {a} · {b}"))));
        }
        if a.mul(&b)?.mul(&c)? != a.mul(&b.mul(&c)?)? {
            return Ok(CheckResult::new("dp-mul", samples, Some(format!("associativity: {a}, {b}, {c}"))));
        }
    }
    // t^(i) t^(j) = C(i+j, i) t^(i+j), zero past the cap
    let cap = sig.cap(0);
    let t = sig.index_of("t").unwrap_or(0);
    for i in 0..=cap {
        for j in 0..=cap {
            let power = |k: u64| {
                let mut e = vec![0u64; sig.a()];
                e[t] = k;
                sig.monomial(&e).map(|m| DPElement::monomial(sig, m, 1))
            };
            let lhs = power(i)?.mul(&power(j)?)?;
            let rhs = if i + j <= cap {
                power(i + j)?.scale(binomial_mod(i + j, i, f.p() as u64) as i64)
            } else {
                DPElement::zero(sig)
            };
            if lhs != rhs {
                return Ok(CheckResult::new("dp-mul", samples, Some(format!("t^({i}) t^({j}) = {lhs}"))));
            }
        }
    }
    Ok(CheckResult::new("dp-mul", samples + ((cap + 1) * (cap + 1)) as usize, None))
}

/// `C(n, k) mod p` from the exact integer.
fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    (c % p as u128) as u64
}

fn derivations(sig: &Arc<Signature>, rng: &mut impl Rng, samples: usize) -> Result<CheckResult> {
    for _ in 0..samples {
        let (a, b) = (random_function(sig, rng, 4), random_function(sig, rng, 4));
        for i in 0..sig.a() {
            let pi = sig.parity(i);
            let lhs = a.mul(&b)?.derive(i);
            let rhs = a.derive(i).mul(&b)?.add(&signed(&a.mul(&b.derive(i))?, pi, parity(&a)))?;
            if lhs != rhs {
                return Ok(CheckResult::new("derivations", samples, Some(format!("Leibniz for ∂_{i} on {a}, {b}"))));
            }
            for j in 0..sig.a() {
                let lhs = a.derive(j).derive(i);
                let rhs = signed(&a.derive(i).derive(j), pi, sig.parity(j));
                if lhs != rhs {
                    return Ok(CheckResult::new(
                        "derivations",
                        samples,
                        Some(format!("∂_{i}∂_{j} vs ∂_{j}∂_{i} on {a}")),
                    ));
                }
            }
        }
    }
    Ok(CheckResult::new("derivations", samples, None))
}

fn d_squared(sig: &Arc<Signature>, rng: &mut impl Rng, samples: usize) -> Result<CheckResult> {
    for conv in [FormConvention::BernsteinLeites, FormConvention::Deligne] {
        let forms = Forms::new(conv);
        for _ in 0..samples {
            let g = random_function(sig, rng, 5);
            if !forms.d_one(&forms.d_function(&g)).is_zero() {
                return Ok(CheckResult::new("d-squared", 2 * samples, Some(format!("{conv:?}: dd({g}) ≠ 0"))));
            }
        }
    }
    Ok(CheckResult::new("d-squared", 2 * samples, None))
}

fn generating_functions(contact: &ContactStructure) -> Result<CheckResult> {
    let sig = contact.signature();
    let mut cases = 0;
    for d in 0..=sig.max_degree() {
        for m in sig.graded_basis(d) {
            let g = DPElement::monomial(sig, m, 1);
            let x = contact.field_of(&g)?;
            if contact.pairing(&x)? != g || !contact.is_contact(&x)? {
                return Ok(CheckResult::new("generating-functions", cases, Some(format!("α(X_f) ≠ f for f = {g}"))));
            }
            cases += 1;
        }
    }
    Ok(CheckResult::new("generating-functions", cases, None))
}

fn contact_brackets(contact: &ContactStructure) -> Result<CheckResult> {
    let mut basis = Vec::new();
    for k in -2..=3 {
        basis.extend(contact.contact_basis(k)?.iter().cloned());
    }
    let mut cases = 0;
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i..] {
            let z = x.bracket(y)?;
            if !contact.is_contact(&z)? {
                return Ok(CheckResult::new("contact-brackets", cases, Some(format!("[{x}, {y}] is not contact"))));
            }
            cases += 1;
        }
    }
    Ok(CheckResult::new("contact-brackets", cases, None))
}

fn jacobi(space: &FieldSpace, rng: &mut impl Rng, samples: usize) -> Result<CheckResult> {
    for _ in 0..samples {
        let xs: Vec<VectorField> = (0..3)
            .map(|_| {
                let k = rng.gen_range(-2..=2);
                random_field(space, k, rng, 3)
            })
            .collect();
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let (px, py) = (x.parity().unwrap_or(0), y.parity().unwrap_or(0));
        let lhs = x.bracket(&y.bracket(z)?)?;
        let second = y.bracket(&x.bracket(z)?)?;
        let second = if px & py == 1 { second.scale(space.signature().field().p() - 1) } else { second };
        let rhs = x.bracket(y)?.bracket(z)?.add(&second)?;
        if lhs != rhs {
            return Ok(CheckResult::new("super-jacobi", samples, Some(format!("{x}, {y}, {z}"))));
        }
    }
    Ok(CheckResult::new("super-jacobi", samples, None))
}

fn prolong_maximality(rng: &mut impl Rng, samples: usize) -> Result<CheckResult> {
    let model = build_model(3, 1)?;
    let acting = Acting::for_model(&model)?;
    let space = model.space();
    let f = model.signature().field();
    let mut gm1 = model.g_minus1.clone();
    let mut prev = acting.g0.clone();
    for k in 1..=3 {
        let expected = prolong_step(space, &gm1, &prev, k)?;
        // shuffled and recombined inputs give the same component
        gm1.shuffle(rng);
        let mixed: Vec<VectorField> = gm1
            .iter()
            .enumerate()
            .map(|(i, y)| {
                let next = &gm1[(i + 1) % gm1.len()];
                if i + 1 < gm1.len() {
                    y.axpy(rng.gen_range(0..f.p()), next)
                } else {
                    Ok(y.clone())
                }
            })
            .collect::<Result<_>>()?;
        let slice = space.slice(k);
        let mut candidates: Vec<VectorField> = (0..slice.len()).map(|c| slice.basis_field(model.signature(), c)).collect();
        candidates.shuffle(rng);
        let again = Component::from_fields(space, k, &solve_membership(space, &mixed, &prev, &candidates)?)?;
        if again != expected {
            return Ok(CheckResult::new("prolong-maximality", samples, Some(format!("degree {k} depends on basis order"))));
        }
        // nothing outside g_k brackets g_-1 into g_{k-1}
        for _ in 0..samples {
            let x = random_field(space, k, rng, 4);
            if x.is_zero() || expected.contains(&x) {
                continue;
            }
            let escapes = gm1
                .iter()
                .map(|y| Ok(!prev.contains(&x.bracket(y)?)))
                .collect::<Result<Vec<bool>>>()?;
            if !escapes.iter().any(|&e| e) {
                return Ok(CheckResult::new("prolong-maximality", samples, Some(format!("{x} was missed in degree {k}"))));
            }
        }
        prev = expected;
    }
    Ok(CheckResult::new("prolong-maximality", 3 * samples, None))
}

fn chevalley() -> Result<CheckResult> {
    for p in [3, 5, 7] {
        let model = build_model(p, 1)?;
        let report = verify_chevalley(&model, G2_CARTAN)?;
        if !report.passed() {
            return Ok(CheckResult::new("chevalley", 3, Some(format!("p = {p}: {:?}", report.mismatches))));
        }
        let g2 = model.g2()?;
        if g2.dim() != 14 {
            return Ok(CheckResult::new("chevalley", 3, Some(format!("p = {p}: dim g(2) = {}", g2.dim()))));
        }
        g2.verify_closure()?;
    }
    Ok(CheckResult::new("chevalley", 3, None))
}

/// Runs every suite. `samples` controls the randomized ones; the Jacobi
/// suite always draws at least 200 triples.
pub fn run_properties(seed: u64, samples: usize) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig2 = Arc::new(Signature::contact_1_7(3, 2)?);
    let sig5 = Arc::new(Signature::contact_1_7(5, 1)?);
    let contact = ContactStructure::ag2_form(FieldSpace::new(Arc::new(Signature::contact_1_7(3, 1)?)))?;
    let space = FieldSpace::new(sig5.clone());
    Ok(vec![
        dp_multiplication(&sig2, &mut rng, samples)?,
        dp_multiplication(&sig5, &mut rng, samples)?,
        derivations(&sig2, &mut rng, samples)?,
        d_squared(&sig2, &mut rng, samples)?,
        generating_functions(&contact)?,
        contact_brackets(&contact)?,
        jacobi(&space, &mut rng, samples.max(200))?,
        prolong_maximality(&mut rng, samples)?,
        chevalley()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_mod(4, 2, 3), 0);
        assert_eq!(binomial_mod(5, 2, 7), 3);
        assert_eq!(binomial_mod(8, 0, 3), 1);
    }

    #[test]
    fn quick_run() {
        let results = run_properties(1, 10).unwrap();
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
