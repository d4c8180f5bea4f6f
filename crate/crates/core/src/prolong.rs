//! Cartan–Tanaka–Shchepochkina prolongation: full prolongs of a pair
//! `(g_-, g_0)` inside W(m;N|n;r) and partial prolongs over a submodule of
//! `g_1`.
//!
//! `g_k` is solved degree by degree as the kernel of
//! `X ↦ ([X, Y] mod g_{k-1})_{Y ∈ g_{-1}}` on the coordinates of the
//! degree-`k` slice of W.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liestruct::{bracket_span, Component, GradedSubalgebra, SDim};
use crate::linalg;
use crate::vecfields::{FieldSpace, VectorField};

/// Where the degree iteration stops if no component vanishes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum MaxDegree {
    /// The degree of the top contact field, `max deg O − max weight`.
    #[default]
    Auto,
    Explicit(i32),
}

/// A non-positive part `g_- ⊕ g_0` to be prolonged.
#[derive(Debug, Clone)]
pub struct ProlongProblem {
    space: Arc<FieldSpace>,
    base: GradedSubalgebra,
    max_degree: MaxDegree,
}

impl ProlongProblem {
    /// Checks that `g_-` is generated by `g_{-1}` and that `g_0` preserves
    /// every negative component.
    pub fn new(negative: &GradedSubalgebra, g0: Component, max_degree: MaxDegree) -> Result<Self> {
        let space = negative.space().clone();
        if negative.degrees().iter().any(|&k| k >= 0) {
            return Err(Error::Precondition("negative part has components of degree ≥ 0".into()));
        }
        if g0.degree() != 0 {
            return Err(Error::Precondition("g_0 must have degree 0".into()));
        }
        let gm1 = negative.component_or_zero(-1);
        if gm1.is_empty() {
            return Err(Error::Precondition("g_-1 is zero".into()));
        }
        let mut current = gm1.clone();
        for k in (negative.min_degree().unwrap_or(-1)..=-2).rev() {
            current = bracket_span(&space, &gm1, &current)?;
            if current != negative.component_or_zero(k) {
                return Err(Error::Precondition(format!("g_{k} is not generated by g_-1")));
            }
        }
        for c in negative.components() {
            let image = bracket_span(&space, &g0, c)?;
            if !image.is_subspace_of(c) {
                return Err(Error::Precondition(format!("g_0 does not preserve g_{}", c.degree())));
            }
        }
        let mut base = negative.clone();
        base.set_component(g0);
        Ok(Self {
            space,
            base,
            max_degree,
        })
    }

    pub fn space(&self) -> &Arc<FieldSpace> {
        &self.space
    }

    /// `g_- ⊕ g_0`.
    pub fn base(&self) -> &GradedSubalgebra {
        &self.base
    }

    pub fn g_minus1(&self) -> &[VectorField] {
        self.base.component(-1).expect("checked in new").fields()
    }

    pub fn g0(&self) -> &Component {
        self.base.component(0).expect("checked in new")
    }

    /// `2(p^N − 1) + n − 2` for the contact grading.
    pub fn hard_cap(&self) -> i32 {
        let sig = self.space.signature();
        sig.max_degree() - sig.weights().iter().copied().max().unwrap_or(0)
    }

    pub fn cap(&self) -> i32 {
        match self.max_degree {
            MaxDegree::Auto => self.hard_cap(),
            MaxDegree::Explicit(k) => k.min(self.hard_cap()),
        }
    }
}

/// Fields in the span of `candidates` (all of degree `k`) whose brackets
/// with every `Y ∈ gm1` lie in `prev`.
pub fn solve_membership(
    space: &FieldSpace,
    gm1: &[VectorField],
    prev: &Component,
    candidates: &[VectorField],
) -> Result<Vec<VectorField>> {
    let sig = space.signature();
    let f = sig.field();
    let target = space.slice(prev.degree());
    let echelon = prev.echelon(f);
    let columns: Vec<Vec<u32>> = candidates
        .par_iter()
        .map(|x| {
            let mut col = Vec::with_capacity(gm1.len() * target.len());
            for y in gm1 {
                let mut v = target.coords(&x.bracket(y)?)?;
                echelon.reduce(&mut v);
                col.extend(v);
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let height = gm1.len() * target.len();
    let rows = (0..height)
        .map(|r| columns.iter().map(|c| c[r]).collect::<Vec<u32>>())
        .filter(|row| row.iter().any(|&v| v != 0));
    let ker = linalg::kernel(f, candidates.len(), rows);
    Ok(ker
        .iter()
        .map(|y| {
            y.iter()
                .zip(candidates)
                .filter(|(c, _)| **c != 0)
                .fold(VectorField::zero(sig), |acc, (&c, x)| acc.axpy(c, x).expect("same signature"))
        })
        .collect())
}

/// `g_k = {X ∈ W_k : [X, g_{-1}] ⊆ g_{k-1}}`.
pub fn prolong_step(space: &FieldSpace, gm1: &[VectorField], prev: &Component, k: i32) -> Result<Component> {
    if prev.degree() != k - 1 {
        return Err(Error::Precondition(format!("need g_{} to solve degree {k}", k - 1)));
    }
    let slice = space.slice(k);
    let sig = space.signature();
    let candidates: Vec<VectorField> = (0..slice.len()).map(|c| slice.basis_field(sig, c)).collect();
    let solutions = solve_membership(space, gm1, prev, &candidates)?;
    Component::from_fields(space, k, &solutions)
}

/// Per-degree summary of a prolong.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeDim {
    pub degree: i32,
    pub sdim: SDim,
}

#[derive(Debug, Clone)]
pub struct ProlongResult {
    pub algebra: GradedSubalgebra,
    /// Highest degree with a nonzero component.
    pub top_degree: i32,
    pub cap: i32,
    /// The cap was reached with a nonzero component: the result may be
    /// truncated.
    pub capped: bool,
}

impl ProlongResult {
    pub fn dims(&self) -> Vec<DegreeDim> {
        self.algebra
            .components()
            .filter(|c| !c.is_empty())
            .map(|c| DegreeDim {
                degree: c.degree(),
                sdim: SDim::of(c),
            })
            .collect()
    }
}

/// Iterates [`prolong_step`] from `start` with the given previous component
/// until a zero component (checking that the next degree is zero too) or
/// the cap.
fn iterate(problem: &ProlongProblem, mut algebra: GradedSubalgebra, start: i32, verify: bool) -> Result<ProlongResult> {
    let space = problem.space();
    let cap = problem.cap();
    let gm1 = problem.g_minus1();
    let mut prev = algebra.component_or_zero(start - 1);
    let mut capped = false;
    let mut k = start;
    while k <= cap {
        let c = prolong_step(space, gm1, &prev, k)?;
        let empty = c.is_empty();
        algebra.set_component(c.clone());
        if empty {
            // transitivity: nothing can sit above a zero component
            let next = prolong_step(space, gm1, &c, k + 1)?;
            if !next.is_empty() {
                return Err(Error::InconsistentSystem(format!("g_{k} = 0 but g_{} ≠ 0", k + 1)));
            }
            break;
        }
        if k == cap {
            capped = true;
        }
        prev = c;
        k += 1;
    }
    if verify {
        algebra.verify_closure()?;
    }
    let top_degree = algebra.max_degree().unwrap_or(0);
    Ok(ProlongResult {
        algebra,
        top_degree,
        cap,
        capped,
    })
}

/// The complete prolong `(g_-, g_0)_*`; closure is verified on the result
/// when `verify` is set.
pub fn cts_prolong(problem: &ProlongProblem, verify: bool) -> Result<ProlongResult> {
    iterate(problem, problem.base().clone(), 1, verify)
}

/// Outcome of [`partial_prolong`].
#[derive(Debug, Clone)]
pub struct PartialResult {
    pub result: ProlongResult,
    /// Whether `[g_{-1}, h_1] = g_0`.
    pub surjective: bool,
}

/// The partial prolong `(g_-, g_0, h_1)_*`: `h_k = {D ∈ W_k : [D, g_{-1}] ⊆
/// h_{k-1}}` for `k ≥ 2`. `h_1` must be a `g_0`-submodule of `g_1`; when
/// `require_surjective` is set, `[g_{-1}, h_1] = g_0` is enforced too.
pub fn partial_prolong(
    problem: &ProlongProblem,
    h1: Component,
    require_surjective: bool,
    verify: bool,
) -> Result<PartialResult> {
    let space = problem.space();
    if h1.degree() != 1 {
        return Err(Error::Precondition("h_1 must have degree 1".into()));
    }
    let g1 = prolong_step(space, problem.g_minus1(), problem.g0(), 1)?;
    if !h1.is_subspace_of(&g1) {
        return Err(Error::Precondition("h_1 is not contained in g_1".into()));
    }
    if !bracket_span(space, problem.g0(), &h1)?.is_subspace_of(&h1) {
        return Err(Error::Precondition("h_1 is not a g_0-submodule".into()));
    }
    let image = bracket_span(space, &problem.base().component_or_zero(-1), &h1)?;
    let surjective = image == *problem.g0();
    if require_surjective && !surjective {
        return Err(Error::Precondition(format!(
            "[g_-1, h_1] has dim {} but g_0 has dim {}",
            image.dim(),
            problem.g0().dim()
        )));
    }
    let mut algebra = problem.base().clone();
    algebra.set_component(h1);
    let result = iterate(problem, algebra, 2, verify)?;
    Ok(PartialResult { result, surjective })
}
