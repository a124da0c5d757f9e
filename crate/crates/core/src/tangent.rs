//! Extensions K -> K' of local fields given by substitutions t -> T,
//! u_j -> U_j, the induced map on the span of dt, du_j, tangential
//! dominance and the invariance of breaks and refined Swan forms under base
//! change.

use std::sync::Arc;

use crate::characters::{conductor_and_rsw, Conductor};
use crate::error::{Error, Result};
use crate::extensions::ExtField;
use crate::ramification::{analyze, RamificationReport, Q};
use crate::series_arith::linalg::rank;
use crate::series_arith::{FieldElement, Fq, LaurentSeries, LocalField, ResidueField};

#[derive(Clone, Debug)]
pub struct EmbeddingSpec {
    pub source: Arc<LocalField>,
    pub target: Arc<LocalField>,
    pub t_image: LaurentSeries,
    pub u_images: Vec<LaurentSeries>,
    /// Image of the generator of F_q in F_q'.
    pub gen_image: Fq,
}

impl EmbeddingSpec {
    pub fn new(
        source: &Arc<LocalField>,
        target: &Arc<LocalField>,
        t_image: LaurentSeries,
        u_images: Vec<LaurentSeries>,
        gen_image: Option<Fq>,
    ) -> Result<Self> {
        let sres = source.residue();
        let tres = target.residue();
        if u_images.len() != sres.nvars() {
            return Err(Error::Config(format!("{} transcendental images for {} transcendentals", u_images.len(), sres.nvars())));
        }
        let gen_image = match gen_image {
            Some(g) => g,
            None => sres
                .fq()
                .embedding_into(tres.fq())
                .ok_or_else(|| Error::Config("the constant field does not embed into the target".into()))?,
        };
        if tres.fq().eval_fp_poly(sres.fq().modulus(), gen_image) != 0 {
            return Err(Error::Config("generator image is not a root of the defining polynomial".into()));
        }
        let e = t_image.valuation()?;
        if e < 1 {
            return Err(Error::Config(format!("image of t has valuation {e}")));
        }
        for (j, u) in u_images.iter().enumerate() {
            if u.valuation()? != 0 {
                return Err(Error::Config(format!("image of {} is not a unit", sres.var_names()[j])));
            }
        }
        Ok(EmbeddingSpec { source: source.clone(), target: target.clone(), t_image, u_images, gen_image })
    }

    /// The identity of K.
    pub fn identity(k: &Arc<LocalField>) -> Self {
        let res = k.residue();
        let u = (0..res.nvars()).map(|j| LaurentSeries::constant(k, res.var(j))).collect();
        EmbeddingSpec::new(k, k, LaurentSeries::t(k), u, None).expect("identity is an embedding")
    }

    pub fn ramification_index(&self) -> i64 {
        self.t_image.valuation().expect("checked on construction")
    }

    fn lift_const(&self, c: Fq) -> Fq {
        self.source.residue().fq().embed(self.target.residue().fq(), self.gen_image, c)
    }

    /// The image in K' of an element of F.
    pub fn map_residue_element(&self, a: &FieldElement) -> Result<LaurentSeries> {
        let k2 = &self.target;
        self.source.residue().eval_with(
            a,
            &self.u_images,
            LaurentSeries::one(k2),
            |c| LaurentSeries::from_fq(k2, self.lift_const(c)),
            |x, y| x.add(y),
            |x, y| x.mul(y),
            |x| x.inv(),
        )
    }

    /// The induced map F -> F' on residues.
    pub fn residue_map(&self, a: &FieldElement) -> Result<FieldElement> {
        let tres = self.target.residue();
        let vals: Vec<FieldElement> = self.u_images.iter().map(|u| u.residue()).collect::<Result<_>>()?;
        self.source.residue().eval_with(
            a,
            &vals,
            tres.one(),
            |c| tres.from_fq(self.lift_const(c)),
            |x, y| tres.add(x, y),
            |x, y| tres.mul(x, y),
            |x| tres.inv(x),
        )
    }

    /// The image of a series of K: sum phi(c_k) T^k.
    pub fn apply(&self, a: &LaurentSeries) -> Result<LaurentSeries> {
        let k2 = &self.target;
        let e = self.ramification_index();
        let mut acc = LaurentSeries::zero(k2);
        if a.is_exact_zero() {
            return Ok(acc);
        }
        let start = a.lower_bound();
        let tpow_start = self.t_image.pow_i64(start)?;
        let mut tpow = tpow_start;
        let last = a.degree().unwrap_or(start);
        for k in start..=last {
            let c = a.coeff(k);
            if !c.is_zero() {
                acc = acc.add(&self.map_residue_element(&c)?.mul(&tpow));
            }
            tpow = tpow.mul(&self.t_image);
        }
        Ok(match a.cap() {
            Some(cap) => acc.truncate(cap.saturating_mul(e)),
            None => acc,
        })
    }

    /// Whether the residue map is injective, i.e. a field map: the images
    /// of the transcendentals are algebraically independent. Tested by
    /// stripping p-th powers and checking the Jacobian rank.
    pub fn is_field_map(&self) -> Result<bool> {
        let tres = self.target.residue();
        let mut rows = Vec::new();
        for u in &self.u_images {
            let mut r = u.residue()?;
            if r.as_const().is_some() {
                return Ok(false);
            }
            while let Some(root) = tres.pth_root(&r) {
                if root.as_const().is_some() {
                    break;
                }
                r = root;
            }
            rows.push((0..tres.nvars()).map(|l| tres.derivative(&r, l)).collect::<Vec<_>>());
        }
        Ok(rows.is_empty() || rank(tres, &rows) == rows.len())
    }

    /// Rows of (d image / d v_l) reduced to F'.
    pub fn residue_jacobian(&self) -> Result<Vec<Vec<FieldElement>>> {
        let tres = self.target.residue();
        self.u_images
            .iter()
            .map(|u| {
                let r = u.residue()?;
                Ok((0..tres.nvars()).map(|l| tres.derivative(&r, l)).collect())
            })
            .collect()
    }

    /// The composite K -> K' -> K''.
    pub fn then(&self, next: &EmbeddingSpec) -> Result<EmbeddingSpec> {
        let t_image = next.apply(&self.t_image)?;
        let u_images = self.u_images.iter().map(|u| next.apply(u)).collect::<Result<Vec<_>>>()?;
        let gen_image = next.lift_const(self.gen_image);
        EmbeddingSpec::new(&self.source, &next.target, t_image, u_images, Some(gen_image))
    }
}

/// Rows dt, du_1, ..., du_m of K; columns dt', dv_1, ..., dv_m' of K'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentMatrix {
    pub rows: Vec<Vec<FieldElement>>,
}

impl TangentMatrix {
    pub fn rank(&self, res: &ResidueField) -> usize {
        rank(res, &self.rows)
    }

    pub fn mul(&self, res: &ResidueField, other: &TangentMatrix) -> TangentMatrix {
        let cols = other.rows.first().map_or(0, |r| r.len());
        let rows = self
            .rows
            .iter()
            .map(|row| {
                (0..cols)
                    .map(|c| {
                        row.iter()
                            .zip(&other.rows)
                            .fold(res.zero(), |acc, (a, orow)| res.add(&acc, &res.mul(a, &orow[c])))
                    })
                    .collect()
            })
            .collect();
        TangentMatrix { rows }
    }

    pub fn map_entries(&self, g: impl Fn(&FieldElement) -> Result<FieldElement>) -> Result<TangentMatrix> {
        let rows = self.rows.iter().map(|r| r.iter().map(&g).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Ok(TangentMatrix { rows })
    }
}

fn differential_row(spec: &EmbeddingSpec, image: &LaurentSeries) -> Result<Vec<FieldElement>> {
    let tres = spec.target.residue();
    let mut row = vec![image.derivative_t().residue()?];
    for l in 0..tres.nvars() {
        row.push(image.derivative_u(l).residue()?);
    }
    Ok(row)
}

pub fn induced_tangent_matrix(spec: &EmbeddingSpec) -> Result<TangentMatrix> {
    let e = spec.ramification_index();
    if e != 1 {
        return Err(Error::RamifiedEmbedding(e));
    }
    let mut rows = vec![differential_row(spec, &spec.t_image)?];
    for u in &spec.u_images {
        rows.push(differential_row(spec, u)?);
    }
    Ok(TangentMatrix { rows })
}

/// Tangential dominance in the model spanned by dt, du_j.
pub fn is_tangentially_dominant(spec: &EmbeddingSpec) -> Result<bool> {
    if spec.ramification_index() > 1 || !spec.is_field_map()? {
        return Ok(false);
    }
    let m = induced_tangent_matrix(spec)?;
    Ok(m.rank(spec.target.residue()) == m.rows.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResiduePresentation {
    ConstantField,
    AdjoinedTranscendental,
    Substitution,
    Specialization,
}

impl ResiduePresentation {
    pub fn name(self) -> &'static str {
        match self {
            ResiduePresentation::ConstantField => "constant-field",
            ResiduePresentation::AdjoinedTranscendental => "adjoined-transcendental",
            ResiduePresentation::Substitution => "substitution",
            ResiduePresentation::Specialization => "specialization",
        }
    }
}

/// How F -> F' is presented: u_j sent to distinct variables (a constant
/// field extension when no variable is added), to rational functions, or
/// all to constants.
pub fn residue_presentation(spec: &EmbeddingSpec) -> Result<ResiduePresentation> {
    let tres = spec.target.residue();
    let images: Vec<FieldElement> = spec.u_images.iter().map(|u| u.residue()).collect::<Result<_>>()?;
    let constant = images.iter().filter(|r| r.as_const().is_some()).count();
    if constant == images.len() && !images.is_empty() {
        return Ok(ResiduePresentation::Specialization);
    }
    if constant > 0 {
        return Err(Error::UnsupportedResiduePresentation(
            "some transcendentals are specialized and others are not".into(),
        ));
    }
    let mut hit = vec![false; tres.nvars()];
    let mut variables = true;
    for r in &images {
        match (0..tres.nvars()).find(|&l| *r == tres.var(l)) {
            Some(l) if !hit[l] => hit[l] = true,
            _ => variables = false,
        }
    }
    Ok(match (variables, tres.nvars() > images.len()) {
        (false, _) => ResiduePresentation::Substitution,
        (true, true) => ResiduePresentation::AdjoinedTranscendental,
        (true, false) => ResiduePresentation::ConstantField,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionChecks {
    /// e = 1 and F'/F separable.
    pub cond1: bool,
    /// Tangentially dominant.
    pub cond2: bool,
    /// e = 1.
    pub cond3: bool,
}

impl ConditionChecks {
    pub fn chain_holds(&self) -> bool {
        (!self.cond1 || self.cond2) && (!self.cond2 || self.cond3)
    }
}

pub fn condition_checks(spec: &EmbeddingSpec) -> Result<ConditionChecks> {
    residue_presentation(spec)?;
    let cond3 = spec.ramification_index() == 1;
    let field_map = spec.is_field_map()?;
    let jac = spec.residue_jacobian()?;
    let separable = field_map && (jac.is_empty() || rank(spec.target.residue(), &jac) == jac.len());
    let cond1 = cond3 && separable;
    let cond2 = is_tangentially_dominant(spec)?;
    Ok(ConditionChecks { cond1, cond2, cond3 })
}

/// The ramification of L and of L K' side by side.
#[derive(Clone, Debug)]
pub struct ExtensionBaseChange {
    pub tangentially_dominant: bool,
    pub source: RamificationReport,
    pub target: RamificationReport,
    pub field: Arc<ExtField>,
    pub lower_equal: bool,
    pub nonlog_equal: bool,
    pub r_equal: bool,
}

impl ExtensionBaseChange {
    pub fn invariant(&self) -> bool {
        self.lower_equal && self.nonlog_equal && self.r_equal
    }
}

fn largest_r(rep: &RamificationReport) -> Option<Q> {
    rep.largest.as_ref().map(|l| l.r)
}

pub fn base_change_extension(spec: &EmbeddingSpec, l: &Arc<ExtField>) -> Result<ExtensionBaseChange> {
    let td = is_tangentially_dominant(spec)?;
    let lower = l.poly().coeffs[..l.degree()].iter().map(|c| spec.apply(c)).collect::<Result<Vec<_>>>()?;
    let field = ExtField::eisenstein(&spec.target, lower)?;
    let source = analyze(l)?;
    let target = analyze(&field)?;
    Ok(ExtensionBaseChange {
        tangentially_dominant: td,
        lower_equal: source.lower.indices() == target.lower.indices(),
        nonlog_equal: source.nonlog.indices() == target.nonlog.indices(),
        r_equal: largest_r(&source) == largest_r(&target),
        source,
        target,
        field,
    })
}

#[derive(Clone, Debug)]
pub struct CharacterBaseChange {
    pub tangentially_dominant: bool,
    pub a_image: LaurentSeries,
    pub source: Conductor,
    pub target: Conductor,
    /// rsw of the source pushed through the tangent matrix and rescaled to
    /// the class of t'^j, as (dt', dv_1, ...).
    pub transported: Option<Vec<FieldElement>>,
    pub j_equal: bool,
    pub rsw_equal: bool,
}

impl CharacterBaseChange {
    pub fn invariant(&self) -> bool {
        self.j_equal && self.rsw_equal
    }
}

pub fn base_change_character(spec: &EmbeddingSpec, a: &LaurentSeries) -> Result<CharacterBaseChange> {
    let td = is_tangentially_dominant(spec)?;
    let a_image = spec.apply(a)?;
    let source = conductor_and_rsw(a)?;
    let target = conductor_and_rsw(&a_image)?;
    let j_equal = source.j == target.j;
    let transported = if td {
        let tres = spec.target.residue();
        let m = induced_tangent_matrix(spec)?;
        let comps: Vec<FieldElement> = std::iter::once(&source.rsw.dt)
            .chain(&source.rsw.du)
            .map(|g| spec.residue_map(g))
            .collect::<Result<_>>()?;
        let w = spec.t_image.shift(-1).residue()?;
        let scale = tres.pow(&w, -source.j)?;
        let cols = m.rows[0].len();
        Some(
            (0..cols)
                .map(|c| {
                    let s = comps.iter().zip(&m.rows).fold(tres.zero(), |acc, (g, row)| tres.add(&acc, &tres.mul(g, &row[c])));
                    tres.mul(&s, &scale)
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let rsw_equal = match &transported {
        Some(v) => {
            let dt_free = source.is_exceptional() || target.is_exceptional();
            (dt_free || v[0] == target.rsw.dt) && v[1..] == target.rsw.du[..]
        }
        None => false,
    };
    Ok(CharacterBaseChange { tangentially_dominant: td, a_image, source, target, transported, j_equal, rsw_equal })
}
