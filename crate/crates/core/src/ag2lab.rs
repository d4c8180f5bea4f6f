//! ag(2) realized in k(1;N|7): Cartan data, the non-positive part given by
//! generating functions, g(2) and psl(3) inside it, and the prolongation
//! experiments built on top.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::contact::{ContactStructure, FormConvention};
use crate::dpsuper::{DPElement, Signature};
use crate::error::{Error, Result};
use crate::liestruct::{
    decompose_module, derived_subalgebra, minimal_ideals, simple_ideal_checked, simplicity, singular_vectors, submodule,
    table_is_simple, Component, GradedSubalgebra, SDim, Simplicity,
};
use crate::prolong::{cts_prolong, partial_prolong, prolong_step, DegreeDim, MaxDegree, ProlongProblem};
use crate::vecfields::{FieldSpace, VectorField};

/// A 3×3 Cartan matrix of ag(2); a row is odd when its diagonal entry is
/// not 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CartanMatrixRecord {
    pub index: u8,
    pub matrix: [[i32; 3]; 3],
}

impl CartanMatrixRecord {
    pub fn odd(&self) -> [bool; 3] {
        [0, 1, 2].map(|i| self.matrix[i][i] != 2)
    }
}

pub const CARTAN_MATRICES: [CartanMatrixRecord; 4] = [
    CartanMatrixRecord {
        index: 1,
        matrix: [[0, 1, 0], [-1, 2, -3], [0, -1, 2]],
    },
    CartanMatrixRecord {
        index: 2,
        matrix: [[0, 1, 0], [-1, 0, 3], [0, -1, 2]],
    },
    CartanMatrixRecord {
        index: 3,
        matrix: [[0, -3, 1], [-3, 0, 2], [-1, -2, 2]],
    },
    CartanMatrixRecord {
        index: 4,
        matrix: [[2, -1, 0], [-3, 0, 2], [0, -1, 1]],
    },
];

/// Cartan matrix of g(2), in the orientation `a_ij = α_j(H_i)`.
pub const G2_CARTAN: [[i32; 2]; 2] = [[2, -1], [-3, 2]];

/// Generating functions of the degree-0 generators. The `u` terms carry the
/// coefficient 2: with `+2u du` in α, the two `X_1` functions generate g(2)
/// only when the product of their `u` coefficients is 4. Modulo 3 these
/// are `-v4 w3 - u v1` and `-v3 w4 - u w1`.
pub const X1_PLUS: &str = "-v4 w3 + 2 u v1";
pub const X2_PLUS: &str = "v3 w1";
pub const X1_MINUS: &str = "-v3 w4 + 2 u w1";
pub const X2_MINUS: &str = "v1 w3";
/// The element z of g̃_0 = psl(3) ⊕ z at p = 3. It is not central; the
/// center of g̃_0 is spanned by the field of `t`.
pub const Z_TILDE: &str = "t + v1 w1 + v3 w3 + 2 v4 w4";

pub const ODD_NAMES: [&str; 7] = ["v1", "v3", "v4", "w1", "w3", "w4", "u"];

/// The non-positive part of ag(2) inside k(1;N|7).
#[derive(Debug, Clone)]
pub struct RealizedModel {
    pub p: u64,
    pub height: u32,
    pub contact: Arc<ContactStructure>,
    pub g_minus2: Vec<VectorField>,
    /// Fields of the odd linear functions, in [`ODD_NAMES`] order.
    pub g_minus1: Vec<VectorField>,
    /// `X_1^+ … X_6^+`.
    pub x_plus: Vec<VectorField>,
    pub x_minus: Vec<VectorField>,
    /// `H_i = [X_i^+, X_i^-]`.
    pub h: Vec<VectorField>,
    /// The field of `t`.
    pub t_field: VectorField,
}

impl RealizedModel {
    pub fn signature(&self) -> &Arc<Signature> {
        self.contact.signature()
    }

    pub fn space(&self) -> &Arc<FieldSpace> {
        self.contact.space()
    }

    pub fn function(&self, text: &str) -> Result<DPElement> {
        DPElement::parse(self.signature(), text)
    }

    pub fn field(&self, text: &str) -> Result<VectorField> {
        self.contact.field_of(&self.function(text)?)
    }

    pub fn negative(&self) -> Result<GradedSubalgebra> {
        let fs: Vec<VectorField> = self.g_minus2.iter().chain(&self.g_minus1).cloned().collect();
        GradedSubalgebra::from_fields(self.space().clone(), &fs)
    }

    /// Closure of `X_1^±, X_2^±`. At p = 3 this misses the roots
    /// `3α_1 + α_2` and `3α_1 + 2α_2`; see [`RealizedModel::g2`].
    pub fn g2_generated(&self) -> Result<GradedSubalgebra> {
        let gens = [&self.x_plus[0], &self.x_plus[1], &self.x_minus[0], &self.x_minus[1]].map(Clone::clone);
        GradedSubalgebra::bracket_closure(self.space().clone(), &gens)
    }

    /// `X_1^± … X_6^±, H_1, H_2` with the divided brackets
    /// `X_4 = [X_1, X_3]/2`, `X_5 = [X_1, X_4]/3`, computed over
    /// [`LIFT_PRIME`] and reduced to `p`. This spans the reduction of the
    /// integral form of g(2), which is 14-dimensional for every odd `p`.
    pub fn g2_chevalley(&self) -> Result<Vec<VectorField>> {
        let aux = build_model_with(LIFT_PRIME, 1, self.contact.forms().convention)?;
        let q = aux.signature().field();
        let divide = |x: &VectorField, d: u32| x.scale(q.inv(d).expect("small divisor"));
        let mut lifted = Vec::new();
        for xs in [&aux.x_plus, &aux.x_minus] {
            let (x1, x2) = (&xs[0], &xs[1]);
            let x3 = x1.bracket(x2)?;
            let x4 = divide(&x1.bracket(&x3)?, 2);
            let x5 = divide(&x1.bracket(&x4)?, 3);
            let x6 = x2.bracket(&x5)?;
            lifted.extend([x1.clone(), x2.clone(), x3, x4, x5, x6]);
        }
        for i in 0..2 {
            lifted.push(aux.x_plus[i].bracket(&aux.x_minus[i])?);
        }
        lifted
            .iter()
            .map(|x| {
                let g = aux.contact.generating_function(x)?;
                self.contact.field_of(&transfer(&g, self.signature())?)
            })
            .collect()
    }

    /// g(2) as the span of [`RealizedModel::g2_chevalley`].
    pub fn g2(&self) -> Result<GradedSubalgebra> {
        GradedSubalgebra::from_fields(self.space().clone(), &self.g2_chevalley()?)
    }

    /// `g_0 = g(2) ⊕ Span(t)`.
    pub fn g0_full(&self) -> Result<Component> {
        let mut fs = self.g2()?.basis();
        fs.push(self.t_field.clone());
        Component::from_fields(self.space(), 0, &fs)
    }

    /// Normalized generating function of a contact field.
    pub fn generating_function(&self, x: &VectorField) -> Result<DPElement> {
        let g = self.contact.generating_function(x)?;
        Ok(normalize_function(&g))
    }
}

/// Prime used to compute over `Z[1/2]` before reducing; coefficients up to
/// about 70 in numerator and denominator are recovered exactly.
pub const LIFT_PRIME: u64 = 10007;

/// Maps `g` to `sig` through rational reconstruction of each coefficient.
fn transfer(g: &DPElement, sig: &Arc<Signature>) -> Result<DPElement> {
    let from = g.signature().field();
    let to = sig.field();
    let mut out = DPElement::zero(sig);
    for (m, c) in g.sorted_terms() {
        let (n, d) = from
            .rational_reconstruct(c)
            .ok_or_else(|| Error::Precondition(format!("coefficient {c} has no small fraction")))?;
        let d = to.inv(to.from_i64(d))?;
        let c = to.mul(to.from_i64(n), d);
        out = out.add(&DPElement::monomial(sig, m, c as i64))?;
    }
    Ok(out)
}

/// Scales `g` so its first term in canonical order has coefficient 1.
pub fn normalize_function(g: &DPElement) -> DPElement {
    let terms = g.sorted_terms();
    match terms.first() {
        None => g.clone(),
        Some((_, c)) => {
            let f = g.signature().field();
            let inv = f.inv(*c).expect("nonzero coefficient");
            g.scale(inv as i64)
        }
    }
}

pub fn build_model(p: u64, height: u32) -> Result<RealizedModel> {
    build_model_with(p, height, FormConvention::default())
}

pub fn build_model_with(p: u64, height: u32, convention: FormConvention) -> Result<RealizedModel> {
    let sig = Arc::new(Signature::contact_1_7(p, height)?);
    let contact = Arc::new(ContactStructure::ag2_form_with(FieldSpace::new(sig.clone()), convention)?);
    let field = |text: &str| contact.field_of(&DPElement::parse(&sig, text)?);
    let g_minus2 = vec![field("1")?];
    let g_minus1 = ODD_NAMES.iter().map(|n| field(n)).collect::<Result<Vec<_>>>()?;
    let mut x_plus = vec![field(X1_PLUS)?, field(X2_PLUS)?];
    let mut x_minus = vec![field(X1_MINUS)?, field(X2_MINUS)?];
    for xs in [&mut x_plus, &mut x_minus] {
        let x3 = xs[0].bracket(&xs[1])?;
        let x4 = xs[0].bracket(&x3)?;
        let x5 = xs[0].bracket(&x4)?;
        let x6 = xs[1].bracket(&x5)?;
        xs.extend([x3, x4, x5, x6]);
    }
    let h = (0..2)
        .map(|i| x_plus[i].bracket(&x_minus[i]))
        .collect::<Result<Vec<_>>>()?;
    let t_field = field("t")?;
    let model = RealizedModel {
        p,
        height,
        contact,
        g_minus2,
        g_minus1,
        x_plus,
        x_minus,
        h,
        t_field,
    };
    let check = |xs: &[VectorField], degree: i32, parity: u8, what: &str| -> Result<()> {
        for x in xs {
            if x.is_zero() || x.degree() != Some(degree) || x.parity() != Some(parity) {
                return Err(Error::Precondition(format!("{what}: {x} is not of degree {degree}, parity {parity}")));
            }
        }
        Ok(())
    };
    check(&model.g_minus2, -2, 0, "g_-2")?;
    check(&model.g_minus1, -1, 1, "g_-1")?;
    check(&model.x_plus[..2], 0, 0, "X^+")?;
    check(&model.x_minus[..2], 0, 0, "X^-")?;
    Ok(model)
}

/// Which of `A` and its transpose matched in [`verify_chevalley`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    AsGiven,
    Transposed,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChevalleyReport {
    pub p: u64,
    pub orientation: Option<Orientation>,
    /// `d_i` with `[H_i, X_j^±] = ±d_i b_ij X_j^±`, `b` the matrix in the
    /// matched orientation; signed representatives.
    pub scales: Vec<i64>,
    /// Eigenvalue of `ad H_i` on `X_j^+`, `None` if `X_j^+` is not an
    /// eigenvector.
    pub eigenvalues: Vec<Vec<Option<i64>>>,
    pub mismatches: Vec<String>,
}

impl ChevalleyReport {
    pub fn passed(&self) -> bool {
        self.orientation.is_some() && self.mismatches.is_empty()
    }
}

/// `λ` with `[h, x] = λx`.
fn eigenvalue(h: &VectorField, x: &VectorField) -> Result<Option<u32>> {
    let f = x.signature().field();
    let hx = h.bracket(x)?;
    let Some((i, m, c)) = x.iter_terms().next() else {
        return Ok(None);
    };
    let lambda = f.mul(hx.coefficient(i).coefficient(&m), f.inv(c)?);
    Ok(hx.sub(&x.scale(lambda))?.is_zero().then_some(lambda))
}

/// Checks the Chevalley relations of the two-generator part of `model`
/// against `a` or its transpose. `H_i` is normalized only up to a nonzero
/// factor per row, which is reported.
pub fn verify_chevalley(model: &RealizedModel, a: [[i32; 2]; 2]) -> Result<ChevalleyReport> {
    let f = model.signature().field();
    let (xp, xm, h) = (&model.x_plus, &model.x_minus, &model.h);
    let mut mismatches = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            if i != j && !xp[i].bracket(&xm[j])?.is_zero() {
                mismatches.push(format!("[X{}+, X{}-] ≠ 0", i + 1, j + 1));
            }
        }
    }
    if !h[0].bracket(&h[1])?.is_zero() {
        mismatches.push("[H1, H2] ≠ 0".into());
    }
    let mut plus = vec![vec![None; 2]; 2];
    let mut minus = vec![vec![None; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            plus[i][j] = eigenvalue(&h[i], &xp[j])?;
            minus[i][j] = eigenvalue(&h[i], &xm[j])?;
        }
    }
    let fits = |b: [[i32; 2]; 2]| -> Option<Vec<u32>> {
        let mut scales = Vec::new();
        for i in 0..2 {
            let d = f.mul(plus[i][i]?, f.inv(f.from_i64(b[i][i] as i64)).ok()?);
            if d == 0 {
                return None;
            }
            for j in 0..2 {
                let e = f.mul(d, f.from_i64(b[i][j] as i64));
                if plus[i][j]? != e || minus[i][j]? != f.neg(e) {
                    return None;
                }
            }
            scales.push(d);
        }
        Some(scales)
    };
    let transposed = [[a[0][0], a[1][0]], [a[0][1], a[1][1]]];
    let (orientation, scales) = match (fits(a), fits(transposed)) {
        (Some(s), _) => (Some(Orientation::AsGiven), s),
        (None, Some(s)) => (Some(Orientation::Transposed), s),
        (None, None) => {
            mismatches.push(format!("eigenvalues {plus:?} fit neither orientation of {a:?}"));
            (None, Vec::new())
        }
    };
    Ok(ChevalleyReport {
        p: model.p,
        orientation,
        scales: scales.into_iter().map(|d| f.to_signed(d)).collect(),
        eigenvalues: plus
            .iter()
            .map(|r| r.iter().map(|e| e.map(|v| f.to_signed(v))).collect())
            .collect(),
        mismatches,
    })
}

/// g̃_0 = psl(3) ⊕ Span(z) at p = 3, with the data used to decompose
/// modules over it.
#[derive(Debug, Clone)]
pub struct TildeG0 {
    /// Closure of `X_1^±, X_3^±`.
    pub psl3: GradedSubalgebra,
    /// The field of [`Z_TILDE`].
    pub z: VectorField,
    pub g0: Component,
    pub center: Component,
    pub z_central: bool,
    /// `X_1^-, X_3^-`.
    pub lowering: Vec<VectorField>,
    pub raising: Vec<VectorField>,
    /// `H_1, H_3 = [X_3^+, X_3^-]` and the field of `t`.
    pub torus: Vec<VectorField>,
}

pub fn build_tilde_g0(model: &RealizedModel) -> Result<TildeG0> {
    if model.p != 3 {
        return Err(Error::Precondition(format!("g̃_0 needs p = 3, got {}", model.p)));
    }
    let raising = vec![model.x_plus[0].clone(), model.x_plus[2].clone()];
    let lowering = vec![model.x_minus[0].clone(), model.x_minus[2].clone()];
    let gens: Vec<VectorField> = raising.iter().chain(&lowering).cloned().collect();
    let psl3 = GradedSubalgebra::bracket_closure(model.space().clone(), &gens)?;
    if psl3.dim() != 7 || psl3.degrees() != [0] {
        return Err(Error::Precondition(format!("psl(3) closure has dimension {}", psl3.dim())));
    }
    let z = model.field(Z_TILDE)?;
    let mut fields = psl3.basis();
    fields.push(z.clone());
    let g0 = Component::from_fields(model.space(), 0, &fields)?;
    if g0.dim() != 8 {
        return Err(Error::Precondition("z lies in psl(3)".into()));
    }
    let as_algebra = GradedSubalgebra::from_fields(model.space().clone(), g0.fields())?;
    let center = crate::liestruct::center(&as_algebra)?.component_or_zero(0);
    let z_central = center.contains(&z);
    let h3 = raising[1].bracket(&lowering[1])?;
    Ok(TildeG0 {
        psl3,
        z,
        g0,
        center,
        z_central,
        lowering,
        raising,
        torus: vec![model.h[0].clone(), h3, model.t_field.clone()],
    })
}

/// `g_0` of a prolong run and the operators used to decompose modules.
#[derive(Debug, Clone)]
pub struct Acting {
    pub g0: Component,
    pub lowering: Vec<VectorField>,
    pub torus: Vec<VectorField>,
}

impl Acting {
    /// g̃_0 at p = 3, `g(2) ⊕ Span(t)` otherwise.
    pub fn for_model(model: &RealizedModel) -> Result<Self> {
        if model.p == 3 {
            let t = build_tilde_g0(model)?;
            Ok(Self {
                g0: t.g0,
                lowering: t.lowering,
                torus: t.torus,
            })
        } else {
            Ok(Self {
                g0: model.g0_full()?,
                lowering: model.x_minus[..2].to_vec(),
                torus: vec![model.h[0].clone(), model.h[1].clone(), model.t_field.clone()],
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Prolong over `g(2) ⊕ Span(t)`, then extract the simple ideal.
    FullG0,
    /// Prolong over g̃_0 directly (p = 3).
    TildeG0,
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full-g0" => Ok(Self::FullG0),
            "tilde-g0" => Ok(Self::TildeG0),
            _ => Err(Error::Parse(format!("unknown route {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Prime,
    DoublePrime,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Self::Prime => "prime",
            Self::DoublePrime => "double-prime",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prime" => Ok(Self::Prime),
            "double-prime" => Ok(Self::DoublePrime),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

/// Lowest weight vectors of the two summands of `g_1` at p = 3.
pub const V1_PRIME: &str = "v1 v3 w4 + v1 u w1 + v3 u w3 + 2 v4 u w4 + v4 w1 w3";
pub const V1_DOUBLE_PRIME: &str = "t w4 + v1 w1 w4 + v3 w3 w4 + u w1 w3";

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExperimentOptions {
    /// Decompose every component under g_0.
    pub decompose: bool,
    /// Verify closure of the prolong.
    pub verify: bool,
    pub bruteforce_cap: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_degree: MaxDegree,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            decompose: true,
            verify: true,
            bruteforce_cap: 200,
            samples: 4,
            seed: 0,
            max_degree: MaxDegree::Auto,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandReport {
    pub dim: usize,
    /// Normalized generating function of the lowest weight vector.
    pub lowest: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub degree: i32,
    pub sdim: SDim,
    pub summands: Vec<SummandReport>,
    pub direct: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvenSplit {
    pub even: SDim,
    pub derived_dim: usize,
    pub ideals: Vec<usize>,
    pub simple: Vec<bool>,
    pub direct: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabReport {
    pub p: u64,
    pub height: u32,
    pub mode: String,
    pub route: Option<Route>,
    /// Dimension of `g_0` fed to the prolong.
    pub input_g0_dim: usize,
    /// Per-degree dimensions of the prolong before ideal extraction.
    pub prolong_dims: Vec<DegreeDim>,
    pub degrees: Vec<DegreeReport>,
    pub total: SDim,
    pub top_degree: i32,
    pub cap: i32,
    pub capped: bool,
    /// `[g_-1, h_1] = g_0` for partial prolongs.
    pub surjective: Option<bool>,
    pub simplicity: Simplicity,
    pub even_split: Option<EvenSplit>,
    /// Which printed degree-2 function of bj the computed one equals.
    pub degree2_match: Option<String>,
    /// Wall time; kept out of the serialized report so reports are
    /// reproducible byte for byte.
    #[serde(skip)]
    pub seconds: f64,
}

impl LabReport {
    pub fn simple(&self) -> bool {
        self.simplicity.simple()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.sdim.total()).collect()
    }
}

/// A finished run: the report and the algebra it describes.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub report: LabReport,
    pub algebra: GradedSubalgebra,
    pub model: RealizedModel,
}

fn degree_reports(model: &RealizedModel, alg: &GradedSubalgebra, acting: &Acting, decompose: bool) -> Result<Vec<DegreeReport>> {
    alg.components()
        .filter(|c| !c.is_empty())
        .map(|c| {
            let (summands, direct) = if decompose {
                let d = decompose_module(c, acting.g0.fields(), &acting.lowering, &acting.torus)?;
                let s = d
                    .summands
                    .iter()
                    .map(|s| {
                        Ok(SummandReport {
                            dim: s.module.dim(),
                            lowest: model.generating_function(&s.generator)?.render(),
                        })
                    })
                    .collect::<Result<_>>()?;
                (s, d.direct)
            } else {
                (Vec::new(), false)
            };
            Ok(DegreeReport {
                degree: c.degree(),
                sdim: SDim::of(c),
                summands,
                direct,
            })
        })
        .collect()
}

/// The complete prolong of the realized ag(2) data, reduced to its simple
/// ideal on the full-g_0 route.
pub fn experiment_bj(p: u64, height: u32, route: Route, opts: &ExperimentOptions) -> Result<Experiment> {
    let start = std::time::Instant::now();
    let model = build_model(p, height)?;
    let acting = Acting::for_model(&model)?;
    let g0 = match route {
        Route::FullG0 => model.g0_full()?,
        Route::TildeG0 if p == 3 => acting.g0.clone(),
        Route::TildeG0 => return Err(Error::Precondition("the tilde-g0 route needs p = 3".into())),
    };
    let input_g0_dim = g0.dim();
    let problem = ProlongProblem::new(&model.negative()?, g0, opts.max_degree)?;
    let r = cts_prolong(&problem, opts.verify)?;
    let prolong_dims = r.dims();
    let (algebra, simplicity) = match route {
        Route::FullG0 => simple_ideal_checked(&r.algebra, &acting.lowering, opts.bruteforce_cap)?,
        Route::TildeG0 => {
            let s = simplicity(&r.algebra, &acting.lowering, opts.bruteforce_cap, opts.samples, opts.seed)?;
            (r.algebra, s)
        }
    };
    let degrees = degree_reports(&model, &algebra, &acting, opts.decompose)?;
    let report = LabReport {
        p,
        height,
        mode: "full".into(),
        route: Some(route),
        input_g0_dim,
        prolong_dims,
        degrees,
        total: algebra.sdim(),
        top_degree: algebra.max_degree().unwrap_or(0),
        cap: r.cap,
        capped: r.capped,
        surjective: None,
        simplicity,
        even_split: None,
        degree2_match: None,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok(Experiment { report, algebra, model })
}

/// Splits the derived algebra of the even part into ideals.
pub fn even_split(alg: &GradedSubalgebra, samples: usize, seed: u64) -> Result<EvenSplit> {
    let mut even = GradedSubalgebra::new(alg.space().clone());
    for c in alg.components().filter(|c| c.parity() == Some(0)) {
        even.set_component(c.clone());
    }
    let derived = derived_subalgebra(&even)?;
    let ideals = minimal_ideals(&derived)?;
    let simple = ideals
        .iter()
        .map(|i| Ok(table_is_simple(&i.structure_table()?, samples, seed)))
        .collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = ideals.iter().map(GradedSubalgebra::dim).collect();
    Ok(EvenSplit {
        even: even.sdim(),
        derived_dim: derived.dim(),
        direct: dims.iter().sum::<usize>() == derived.dim(),
        ideals: dims,
        simple,
    })
}

/// The partial prolong over the g̃_0-submodule of `g_1` generated by
/// [`V1_PRIME`] or [`V1_DOUBLE_PRIME`].
pub fn experiment_bj_partial(variant: Variant, height: u32, opts: &ExperimentOptions) -> Result<Experiment> {
    let start = std::time::Instant::now();
    let model = build_model(3, height)?;
    let acting = Acting::for_model(&model)?;
    let problem = ProlongProblem::new(&model.negative()?, acting.g0.clone(), opts.max_degree)?;
    let g1 = prolong_step(model.space(), problem.g_minus1(), problem.g0(), 1)?;
    let seed = model.field(match variant {
        Variant::Prime => V1_PRIME,
        Variant::DoublePrime => V1_DOUBLE_PRIME,
    })?;
    let h1 = submodule(&g1, acting.g0.fields(), &[seed])?;
    let input_g0_dim = acting.g0.dim();
    let partial = partial_prolong(&problem, h1, false, opts.verify)?;
    let r = partial.result;
    let algebra = r.algebra.clone();
    let simplicity = simplicity(&algebra, &acting.lowering, opts.bruteforce_cap, opts.samples, opts.seed)?;
    let degrees = degree_reports(&model, &algebra, &acting, opts.decompose)?;
    let even_split = match variant {
        Variant::DoublePrime => Some(even_split(&algebra, opts.samples, opts.seed)?),
        Variant::Prime => None,
    };
    let degree2_match = match (variant, algebra.component(2)) {
        (Variant::DoublePrime, Some(c)) if c.dim() == 1 => {
            let g = model.generating_function(&c.fields()[0])?;
            Some(match_printed(&model, &g, BJ_DEGREE2)?)
        }
        _ => None,
    };
    let report = LabReport {
        p: 3,
        height,
        mode: format!("partial-{}", variant.name()),
        route: None,
        input_g0_dim,
        prolong_dims: r.dims(),
        degrees,
        total: algebra.sdim(),
        top_degree: algebra.max_degree().unwrap_or(0),
        cap: r.cap,
        capped: r.capped,
        surjective: Some(partial.surjective),
        simplicity,
        even_split,
        degree2_match,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok(Experiment { report, algebra, model })
}

/// Printed spellings of the degree-2 function of bj, `<label> <function>`
/// per line.
pub const BJ_DEGREE2: &str = include_str!("../data/bj_degree2.txt");

/// Label of the first line of `printed` whose function is proportional to
/// `g`, or `"none"`.
fn match_printed(model: &RealizedModel, g: &DPElement, printed: &str) -> Result<String> {
    let g = normalize_function(g);
    for line in printed.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let (label, text) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("bad line {line:?}")))?;
        if normalize_function(&model.function(text)?) == g {
            return Ok(label.to_string());
        }
    }
    Ok("none".into())
}

/// Degrees in `degrees` where `a` and `b` differ, comparing components as
/// spans after moving the fields of `a` into the space of `b` by rendering.
/// The algebras may live over different heights.
pub fn differing_degrees(
    a: &GradedSubalgebra,
    b: &GradedSubalgebra,
    degrees: std::ops::RangeInclusive<i32>,
) -> Result<Vec<i32>> {
    let sig = b.space().signature();
    let mut out = Vec::new();
    for k in degrees {
        let moved = a
            .component_or_zero(k)
            .fields()
            .iter()
            .map(|x| VectorField::parse(sig, &x.render()))
            .collect::<Result<Vec<_>>>()?;
        let moved = Component::from_fields(b.space(), k, &moved)?;
        let there = b.component_or_zero(k);
        if moved.dim() != there.dim() || !moved.is_subspace_of(&there) {
            out.push(k);
        }
    }
    Ok(out)
}

/// Printed lowest weight vectors, one row per line:
/// `<N> <degree> <prime|double-prime> <function>`.
pub const GOLDEN_TABLES: &str = include_str!("../data/golden_tables.txt");

/// Rows whose printed function is known not to be a lowest weight vector;
/// they pass when a computed one of the same degree shares a monomial.
pub const RELAXED_ROWS: &[(u32, i32, Variant)] = &[(1, 2, Variant::DoublePrime)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenRow {
    pub height: u32,
    pub degree: i32,
    pub variant: Variant,
    pub function: String,
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let bad = || Error::Parse(format!("bad golden row {line:?}"));
            let mut parts = line.splitn(4, ' ');
            let height = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let degree = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let variant = parts.next().ok_or_else(bad)?.parse()?;
            let function = parts.next().ok_or_else(bad)?.to_string();
            Ok(GoldenRow {
                height,
                degree,
                variant,
                function,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoldenStatus {
    Match,
    /// A listed discrepancy: no exact match, but the support overlaps a
    /// computed lowest weight vector.
    Relaxed,
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenCheck {
    pub row: GoldenRow,
    pub homogeneous: bool,
    pub in_component: bool,
    pub singular: bool,
    pub overlap: bool,
    pub status: GoldenStatus,
    /// Normalized lowest weight vectors computed in that degree.
    pub computed: Vec<String>,
    /// For a mismatch, `printed − λ·closest` with `λ` chosen on a shared
    /// monomial and the closest computed vector the one leaving fewest terms.
    pub difference: Option<String>,
}

fn closest_difference(g: &DPElement, computed: &[DPElement]) -> Option<DPElement> {
    let f = g.signature().field();
    computed
        .iter()
        .filter_map(|c| {
            let (m, a) = c.terms().iter().find(|(m, _)| g.terms().contains_key(m))?;
            let lambda = f.mul(g.coefficient(m), f.inv(*a).ok()?);
            g.sub(&c.scale(lambda as i64)).ok()
        })
        .min_by_key(|d| d.terms().len())
}

/// Compares each row against the lowest weight vectors of `alg` in the
/// row's degree.
pub fn check_golden(model: &RealizedModel, alg: &GradedSubalgebra, rows: &[GoldenRow]) -> Result<Vec<GoldenCheck>> {
    let acting = Acting::for_model(model)?;
    let mut cache: BTreeMap<i32, Vec<DPElement>> = BTreeMap::new();
    let mut out = Vec::new();
    for row in rows {
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(row.degree) {
            let c = alg.component_or_zero(row.degree);
            let vs = singular_vectors(&c, &acting.lowering, &acting.torus)?
                .iter()
                .map(|v| model.generating_function(v))
                .collect::<Result<Vec<_>>>()?;
            e.insert(vs);
        }
        let computed = &cache[&row.degree];
        let g = model.function(&row.function)?;
        let homogeneous = g.is_homogeneous() && g.degree() == Some(row.degree + 2);
        let in_component = homogeneous
            && model
                .contact
                .field_of(&g)
                .map(|x| alg.component_or_zero(row.degree).contains(&x))
                .unwrap_or(false);
        let normalized = normalize_function(&g);
        let singular = in_component && computed.contains(&normalized);
        let overlap = computed
            .iter()
            .any(|c| c.terms().keys().any(|m| g.terms().contains_key(m)));
        let relaxed = RELAXED_ROWS.contains(&(row.height, row.degree, row.variant));
        let status = if singular {
            GoldenStatus::Match
        } else if relaxed && overlap {
            GoldenStatus::Relaxed
        } else {
            GoldenStatus::Mismatch
        };
        out.push(GoldenCheck {
            row: row.clone(),
            homogeneous,
            in_component,
            singular,
            overlap,
            status,
            computed: computed.iter().map(DPElement::render).collect(),
            difference: (!singular)
                .then(|| closest_difference(&g, computed))
                .flatten()
                .map(|d| d.render()),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_records() {
        assert_eq!(CARTAN_MATRICES[0].matrix, [[0, 1, 0], [-1, 2, -3], [0, -1, 2]]);
        assert_eq!(CARTAN_MATRICES[0].odd(), [true, false, false]);
        assert_eq!(CARTAN_MATRICES[3].odd(), [false, true, true]);
    }

    #[test]
    fn lifted_generators_reduce_to_printed_ones() {
        let m = build_model(3, 1).unwrap();
        assert_eq!(m.x_plus[0], m.field("-v4 w3 - u v1").unwrap());
        assert_eq!(m.x_minus[0], m.field("-v3 w4 - u w1").unwrap());
    }

    #[test]
    fn model_bookkeeping() {
        let m = build_model(3, 1).unwrap();
        let neg = m.negative().unwrap();
        assert_eq!(neg.dim_at(-2), 1);
        assert_eq!(SDim::of(neg.component(-1).unwrap()), SDim { even: 0, odd: 7 });
    }

    #[test]
    fn g2_has_dimension_14() {
        for p in [3, 5] {
            let m = build_model(p, 1).unwrap();
            let g2 = m.g2().unwrap();
            assert_eq!(g2.dim(), 14);
            g2.verify_closure().unwrap();
            assert_eq!(m.g0_full().unwrap().dim(), 15);
        }
        // the plain closure loses two root vectors mod 3
        assert_eq!(build_model(3, 1).unwrap().g2_generated().unwrap().dim(), 10);
        let m = build_model(5, 1).unwrap();
        assert_eq!(m.g2_generated().unwrap(), m.g2().unwrap());
    }

    #[test]
    fn chevalley_relations() {
        for p in [3, 5, 7] {
            let r = verify_chevalley(&build_model(p, 1).unwrap(), G2_CARTAN).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.orientation, Some(Orientation::Transposed));
        }
        // a matrix that fits neither way
        let r = verify_chevalley(&build_model(5, 1).unwrap(), [[2, 0], [0, 2]]).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn tilde_g0_structure() {
        let m = build_model(3, 1).unwrap();
        let t = build_tilde_g0(&m).unwrap();
        assert_eq!(t.psl3.dim(), 7);
        assert_eq!(t.g0.dim(), 8);
        assert!(!t.z_central);
        assert_eq!(t.center, Component::from_fields(m.space(), 0, std::slice::from_ref(&m.t_field)).unwrap());
        let alg = GradedSubalgebra::from_fields(m.space().clone(), t.g0.fields()).unwrap();
        assert_eq!(derived_subalgebra(&alg).unwrap(), t.psl3);
        assert!(build_tilde_g0(&build_model(5, 1).unwrap()).is_err());
    }

    #[test]
    fn golden_parsing() {
        let rows = parse_golden(GOLDEN_TABLES).unwrap();
        assert_eq!(rows.len(), 22);
        assert_eq!(rows.iter().filter(|r| r.height == 2).count(), 8);
        assert!(parse_golden("1 2 triple x").is_err());
        assert!(parse_golden("1 x prime t").is_err());
    }

    #[test]
    fn route_and_variant_names() {
        assert_eq!("full-g0".parse::<Route>().unwrap(), Route::FullG0);
        assert_eq!("double-prime".parse::<Variant>().unwrap(), Variant::DoublePrime);
        assert!("sideways".parse::<Route>().is_err());
    }
}
