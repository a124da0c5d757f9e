//! One function per task kind, each producing a serializable result and
//! the list of checks it asserted.

use std::sync::Arc;

use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};
use serde::Serialize;

use super::config::{BuiltExtension, Context, TaskDecl, TaskKind};
use crate::additive::{b1_from_beta, beta_map, characters_of, check_diagrams, extension_pairing, single_break};
use crate::characters::{compare_corab, conductor_and_rsw, Conductor, Kind};
use crate::error::{Error, Result};
use crate::extensions::ExtField;
use crate::ramification::{analyze, Filtration, RamificationReport, Q};
use crate::series_arith::{FieldElement, LaurentSeries, ResidueField, INF};
use crate::tangent::{
    base_change_character, base_change_extension, condition_checks, induced_tangent_matrix, is_tangentially_dominant,
    residue_presentation, EmbeddingSpec,
};

pub fn frac(q: Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn fracs(v: &[Q]) -> Vec<String> {
    v.iter().map(|q| frac(*q)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, detail: None }
    }

    pub fn with_detail(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: Some(detail.into()) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Segment {
    pub from: String,
    pub phi: String,
    pub slope: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LargestOut {
    pub r: String,
    pub e: i64,
    pub ord_derivative: i64,
    pub closest_separation: i64,
    pub i: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BreaksResult {
    pub polynomial: String,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniformizer: Option<String>,
    pub lower: Vec<String>,
    pub upper_cl: Vec<String>,
    pub nonlog: Vec<String>,
    pub herbrand: Vec<Segment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest: Option<LargestOut>,
    pub different: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hasse_arf: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JumpOut {
    pub index: String,
    pub order: usize,
    pub elements: Vec<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub unverified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationResult {
    pub order: usize,
    pub identity: usize,
    /// ord_L(sigma(alpha) - alpha) for every element.
    pub i_values: Vec<String>,
    pub lower: Vec<JumpOut>,
    pub upper_cl: Vec<JumpOut>,
    pub nonlog: Vec<JumpOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentOut {
    pub direction: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RswResult {
    pub a: String,
    pub best_form: String,
    pub kind: String,
    pub pole: i64,
    pub reduction_steps: usize,
    pub j: i64,
    /// rsw evaluated on the class of t^-j.
    pub rsw: Vec<ComponentOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorabResult {
    pub a: String,
    pub j: i64,
    pub r: String,
    pub polynomial: String,
    pub uniformizer: String,
    pub chi: Vec<i64>,
    pub pairing_basis: String,
    pub pairing_level: i64,
    pub pairing_value: String,
    pub engine_dt: String,
    pub da_dt: String,
    /// du-components of da; the engine pairing only sees dt.
    pub da_du: Vec<ComponentOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingOut {
    pub t_image: String,
    pub u_images: Vec<String>,
    pub ramification_index: i64,
    pub presentation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangent_matrix: Option<Vec<Vec<String>>>,
    pub tangentially_dominant: bool,
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideOut {
    pub lower: Vec<String>,
    pub nonlog: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConductorOut {
    pub a: String,
    pub j: i64,
    pub rsw: Vec<ComponentOut>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum BaseChangeSubject {
    Extension { polynomial: String, source: SideOut, target: SideOut },
    Character { source: ConductorOut, target: ConductorOut, transported: Option<Vec<ComponentOut>> },
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeResult {
    pub embedding: EmbeddingOut,
    pub subject: BaseChangeSubject,
    pub invariant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationOut {
    pub seed: u64,
    pub count: usize,
    pub max_pole: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyResult {
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breaks: Option<BreaksResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_map: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conductor: Option<RswResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbations: Option<PerturbationOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingOut>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum TaskResult {
    Breaks(BreaksResult),
    Filtration(FiltrationResult),
    Rsw(RswResult),
    CompareCorab(CorabResult),
    BaseChange(BaseChangeResult),
    Verify(VerifyResult),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TaskOptions {
    /// Negates the top coefficient of b1 in diagram checks.
    pub mutate_b1: bool,
}

fn extension<'a>(ctx: &'a Context, name: &str) -> Result<&'a BuiltExtension> {
    ctx.extensions[name].as_ref().map_err(Clone::clone)
}

/// The uniformizer whose minimal polynomial presents the extension; D is
/// the element of K[x] used to reduce the second generator over K(x).
fn uniformizer_text(ext: &BuiltExtension) -> Option<String> {
    let a = ext.artin_schreier.as_ref()?;
    let (ea, eb) = a.exponents[0];
    let first = format!("x^{ea}*t^{eb}");
    Some(match a.exponents.get(1) {
        None => first,
        Some((ea2, eb2)) => format!("(y - D)^{ea2}*({first})^{eb2}"),
    })
}

fn breaks_result(ext: &BuiltExtension, rep: &RamificationReport) -> BreaksResult {
    BreaksResult {
        polynomial: ext.field.render_poly("X"),
        degree: ext.field.degree(),
        uniformizer: uniformizer_text(ext),
        lower: fracs(&rep.lower.indices()),
        upper_cl: fracs(&rep.upper.indices()),
        nonlog: fracs(&rep.nonlog.indices()),
        herbrand: rep
            .phi
            .segments()
            .into_iter()
            .map(|(x, y, s)| Segment { from: frac(x), phi: frac(y), slope: frac(s) })
            .collect(),
        largest: rep.largest.as_ref().map(|l| LargestOut {
            r: frac(l.r),
            e: l.e,
            ord_derivative: l.different,
            closest_separation: l.closest_separation,
            i: l.i,
        }),
        different: rep.different,
        hasse_arf: rep.hasse_arf,
    }
}

fn breaks_checks(rep: &RamificationReport) -> Vec<Check> {
    let mut checks = vec![
        Check::with_detail(
            "different_equals_separation_sum",
            rep.different == rep.different_checksum,
            format!("{} vs {}", rep.different, rep.different_checksum),
        ),
        Check::new("phi_matches_averaged_formula", rep.phi_matches_average),
        Check::new("i_conjugation_invariant", rep.conjugation_invariant),
    ];
    if let Some(l) = &rep.largest {
        checks.push(Check::new("largest_break_eqr", l.eqr));
        checks.push(Check::new("largest_break_eqi", l.eqi));
        checks.push(Check::new("largest_break_eqri", l.eqri));
    }
    if let Some(h) = rep.hasse_arf {
        checks.push(Check::new("hasse_arf_integral_nonlog_jumps", h));
    }
    checks
}

fn jumps_out(f: &Filtration) -> Vec<JumpOut> {
    f.jumps
        .iter()
        .map(|j| JumpOut { index: frac(j.index), order: j.subgroup.len(), elements: j.subgroup.clone(), unverified: j.unverified })
        .collect()
}

fn components(res: &ResidueField, dt: &FieldElement, du: &[FieldElement]) -> Vec<ComponentOut> {
    let mut out = vec![ComponentOut { direction: "dt".into(), value: res.render(dt) }];
    for (name, c) in res.var_names().iter().zip(du) {
        out.push(ComponentOut { direction: format!("d{name}"), value: res.render(c) });
    }
    out
}

fn rsw_result(a: &LaurentSeries, c: &Conductor) -> RswResult {
    let res = a.residue_field();
    RswResult {
        a: a.render(),
        best_form: c.best.a_red.render(),
        kind: c.best.kind.name().into(),
        pole: c.best.n,
        reduction_steps: c.best.steps,
        j: c.j,
        rsw: components(res, &c.rsw.dt, &c.rsw.du),
    }
}

fn embedding_out(spec: &EmbeddingSpec) -> Result<EmbeddingOut> {
    let res = spec.target.residue();
    let conds = condition_checks(spec)?;
    let matrix = match induced_tangent_matrix(spec) {
        Ok(m) => Some(m.rows.iter().map(|r| r.iter().map(|c| res.render(c)).collect()).collect()),
        Err(Error::RamifiedEmbedding(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(EmbeddingOut {
        t_image: spec.t_image.render(),
        u_images: spec.u_images.iter().map(|u| u.render()).collect(),
        ramification_index: spec.ramification_index(),
        presentation: residue_presentation(spec)?.name().into(),
        tangent_matrix: matrix,
        tangentially_dominant: is_tangentially_dominant(spec)?,
        cond1: conds.cond1,
        cond2: conds.cond2,
        cond3: conds.cond3,
    })
}

fn side(rep: &RamificationReport) -> SideOut {
    SideOut {
        lower: fracs(&rep.lower.indices()),
        nonlog: fracs(&rep.nonlog.indices()),
        r: rep.largest.as_ref().map(|l| frac(l.r)),
    }
}

fn run_breaks(ext: &BuiltExtension) -> Result<(TaskResult, Vec<Check>)> {
    let rep = analyze(&ext.field)?;
    Ok((TaskResult::Breaks(breaks_result(ext, &rep)), breaks_checks(&rep)))
}

fn run_filtration(field: &Arc<ExtField>) -> Result<(TaskResult, Vec<Check>)> {
    let rep = analyze(field)?;
    let i_values = rep.i_values.iter().map(|&i| if i == INF { "inf".into() } else { i.to_string() }).collect();
    let result = FiltrationResult {
        order: rep.group.order(),
        identity: rep.group.identity(),
        i_values,
        lower: jumps_out(&rep.lower),
        upper_cl: jumps_out(&rep.upper),
        nonlog: jumps_out(&rep.nonlog),
    };
    let nested = |f: &Filtration| f.jumps.windows(2).all(|w| w[1].subgroup.iter().all(|s| w[0].subgroup.contains(s)));
    let checks = vec![
        Check::new("filtrations_decreasing", nested(&rep.lower) && nested(&rep.upper) && nested(&rep.nonlog)),
        Check::new("i_conjugation_invariant", rep.conjugation_invariant),
    ];
    Ok((TaskResult::Filtration(result), checks))
}

fn run_rsw(a: &LaurentSeries) -> Result<(TaskResult, Vec<Check>)> {
    let c = conductor_and_rsw(a)?;
    let checks = vec![
        Check::new("rsw_nonzero", !c.rsw.is_zero()),
        Check::with_detail("best_form_minimal", c.best.kind != Kind::NonFierce || c.j == c.best.n + 1, format!("j = {}", c.j)),
    ];
    Ok((TaskResult::Rsw(rsw_result(a, &c)), checks))
}

fn run_corab(a: &LaurentSeries) -> Result<(TaskResult, Vec<Check>)> {
    let rep = compare_corab(a)?;
    let res = a.residue_field();
    let result = CorabResult {
        a: a.render(),
        j: rep.conductor.j,
        r: frac(rep.r),
        polynomial: rep.extension.field.render_poly("X"),
        uniformizer: uniformizer_text(&BuiltExtension { field: rep.extension.field.clone(), artin_schreier: Some(rep.extension.clone()) })
            .unwrap_or_default(),
        chi: rep.chi.clone(),
        pairing_basis: rep.engine.hom.basis.clone(),
        pairing_level: rep.engine.hom.level,
        pairing_value: res.render(&rep.engine.hom.value),
        engine_dt: res.render(&rep.engine_dt),
        da_dt: res.render(&rep.conductor.rsw.dt),
        da_du: components(res, &rep.conductor.rsw.dt, &rep.conductor.rsw.du).split_off(1),
    };
    let checks = vec![
        Check::with_detail("largest_break_equals_conductor", rep.breaks_match, format!("r = {}, j = {}", frac(rep.r), rep.conductor.j)),
        Check::with_detail("dt_components_match", rep.dt_match, format!("{} vs {}", result.engine_dt, result.da_dt)),
    ];
    Ok((TaskResult::CompareCorab(result), checks))
}

fn run_base_change(ctx: &Context, t: &TaskDecl) -> Result<(TaskResult, Vec<Check>)> {
    let spec = &ctx.embeddings[t.embedding.as_deref().unwrap()];
    let embedding = embedding_out(spec)?;
    let conds = condition_checks(spec)?;
    let mut checks = vec![Check::new("condition_chain", conds.chain_holds())];
    let td = embedding.tangentially_dominant;
    let (subject, invariant) = if let Some(x) = &t.extension {
        let bc = base_change_extension(spec, &extension(ctx, x)?.field)?;
        let subj =
            BaseChangeSubject::Extension { polynomial: bc.field.render_poly("X"), source: side(&bc.source), target: side(&bc.target) };
        (subj, bc.invariant())
    } else {
        let a = &ctx.characters[t.character.as_deref().unwrap()];
        let bc = base_change_character(spec, a)?;
        let sres = spec.source.residue();
        let tres = spec.target.residue();
        let transported = bc.transported.as_ref().map(|v| components(tres, &v[0], &v[1..]));
        let subj = BaseChangeSubject::Character {
            source: ConductorOut { a: a.render(), j: bc.source.j, rsw: components(sres, &bc.source.rsw.dt, &bc.source.rsw.du) },
            target: ConductorOut {
                a: bc.a_image.render(),
                j: bc.target.j,
                rsw: components(tres, &bc.target.rsw.dt, &bc.target.rsw.du),
            },
            transported,
        };
        (subj, bc.invariant())
    };
    if td {
        checks.push(Check::new("dominant_base_change_invariant", invariant));
    }
    Ok((TaskResult::BaseChange(BaseChangeResult { embedding, subject, invariant }), checks))
}

/// Random c with ord c >= -floor((n-1)/p) and a <- a + c^p - c.
pub fn perturbations(a: &LaurentSeries, n: i64, count: usize, seed: u64) -> Vec<LaurentSeries> {
    let k = a.field();
    let res = k.residue();
    let p = res.characteristic() as i64;
    let m = n.max(0) / p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = res.fq().size();
    (0..count)
        .map(|_| {
            let mut c = LaurentSeries::zero(k);
            for e in -m..=2 {
                let mut coef = res.from_fq(rng.random_range(0..q));
                for v in 0..res.nvars() {
                    if rng.random_bool(0.5) {
                        coef = res.mul(&coef, &res.var(v));
                    }
                }
                c = c.add(&LaurentSeries::monomial(k, coef, e));
            }
            a.add(&c.pow(p as u64)).sub(&c)
        })
        .collect()
}

fn verify_extension(ext: &BuiltExtension, opts: TaskOptions) -> Result<(TaskResult, Vec<Check>)> {
    let rep = analyze(&ext.field)?;
    let mut checks = breaks_checks(&rep);
    let mut out = VerifyResult {
        subject: "extension".into(),
        breaks: Some(breaks_result(ext, &rep)),
        b1: None,
        unit_map: None,
        conductor: None,
        perturbations: None,
        embedding: None,
    };
    let res = ext.field.residue();
    if rep.largest.is_some() && rep.group.is_abelian() {
        if single_break(&rep.group, &rep.lower).is_ok() {
            let d = check_diagrams(&rep.group, &rep.lower, opts.mutate_b1)?;
            out.b1 = Some(d.b1.render(res));
            out.unit_map = Some(d.unit_map.render(res));
            checks.push(Check::with_detail(
                "check_diagrams.right_square",
                d.right_square,
                format!("unit map {} vs b1 {}", d.unit_map.render(res), d.b1.render(res)),
            ));
            checks.push(Check::new("check_diagrams.left_square", d.left_square));
            checks.push(Check::new("check_diagrams.rows_exact", d.rows_exact));
            checks.push(Check::new("check_diagrams.corollary_levels", d.corollary_levels));
        }
        let beta = beta_map(&rep.group, &rep.lower)?;
        let b1 = b1_from_beta(res, &beta)?;
        let mut injective = true;
        for chi in characters_of(res, &beta) {
            if chi.iter().all(|&c| c == 0) {
                continue;
            }
            if extension_pairing(res, &b1, &beta, &chi)?.scalar.is_zero() {
                injective = false;
            }
        }
        checks.push(Check::new("pairing_injective", injective));
    }
    Ok((TaskResult::Verify(out), checks))
}

fn verify_character(a: &LaurentSeries) -> Result<(TaskResult, Vec<Check>)> {
    let c = conductor_and_rsw(a)?;
    let seed = 20;
    let perturbed = perturbations(&c.best.a_red, c.best.n, 20, seed);
    let mut stable = true;
    let mut detail = String::new();
    for b in &perturbed {
        let d = conductor_and_rsw(b)?;
        if !d.same_invariants(&c) {
            stable = false;
            detail = format!("{} gives j = {}", b.render(), d.j);
            break;
        }
    }
    let mut checks = vec![Check::with_detail("rsw_invariant_under_perturbation", stable, detail)];
    if c.best.kind == Kind::NonFierce {
        let rep = compare_corab(a)?;
        checks.push(Check::new("corab_largest_break_equals_conductor", rep.breaks_match));
        checks.push(Check::new("corab_dt_components_match", rep.dt_match));
    }
    let out = VerifyResult {
        subject: "character".into(),
        breaks: None,
        b1: None,
        unit_map: None,
        conductor: Some(rsw_result(a, &c)),
        perturbations: Some(PerturbationOut { seed, count: perturbed.len(), max_pole: (c.best.n - 1).max(0) / a.field().characteristic() as i64 }),
        embedding: None,
    };
    Ok((TaskResult::Verify(out), checks))
}

fn verify_embedding(spec: &EmbeddingSpec) -> Result<(TaskResult, Vec<Check>)> {
    let conds = condition_checks(spec)?;
    let mut checks = vec![Check::with_detail(
        "condition_chain",
        conds.chain_holds(),
        format!("({}, {}, {})", conds.cond1, conds.cond2, conds.cond3),
    )];
    if spec.ramification_index() == 1 {
        let m = induced_tangent_matrix(spec)?;
        let id = EmbeddingSpec::identity(&spec.target);
        let composed = induced_tangent_matrix(&spec.then(&id)?)?;
        checks.push(Check::new("tangent_matrix_functorial", composed == m));
    }
    let out = VerifyResult {
        subject: "embedding".into(),
        breaks: None,
        b1: None,
        unit_map: None,
        conductor: None,
        perturbations: None,
        embedding: Some(embedding_out(spec)?),
    };
    Ok((TaskResult::Verify(out), checks))
}

pub fn run_task(ctx: &Context, t: &TaskDecl, opts: TaskOptions) -> Result<(TaskResult, Vec<Check>)> {
    match t.kind {
        TaskKind::Breaks => run_breaks(extension(ctx, t.extension.as_deref().unwrap())?),
        TaskKind::Filtration => run_filtration(&extension(ctx, t.extension.as_deref().unwrap())?.field),
        TaskKind::Rsw => run_rsw(&ctx.characters[t.character.as_deref().unwrap()]),
        TaskKind::CompareCorab => run_corab(&ctx.characters[t.character.as_deref().unwrap()]),
        TaskKind::BaseChange => run_base_change(ctx, t),
        TaskKind::Verify => match (&t.extension, &t.character, &t.embedding) {
            (Some(x), _, _) => verify_extension(extension(ctx, x)?, opts),
            (_, Some(c), _) => verify_character(&ctx.characters[c]),
            (_, _, Some(e)) => verify_embedding(&ctx.embeddings[e]),
            _ => unreachable!("checked when the context was built"),
        },
    }
}
