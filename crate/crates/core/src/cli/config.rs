//! Run configurations. TOML is canonical; JSON with the same schema is
//! accepted. Unknown keys and dangling names are rejected.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::literal::{parse_polynomial, parse_series, parse_substitution};
use crate::characters::{artin_schreier_extension, ASExtension};
use crate::error::{Error, Result};
use crate::extensions::ExtField;
use crate::series_arith::finite::default_modulus;
use crate::series_arith::{FiniteField, LaurentSeries, LocalField, ResidueField, DEFAULT_PRECISION};
use crate::tangent::EmbeddingSpec;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    #[serde(default, rename = "field", skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldDecl>,
    #[serde(default, rename = "extension", skip_serializing_if = "Vec::is_empty")]
    pub extensions: Vec<ExtensionDecl>,
    #[serde(default, rename = "character", skip_serializing_if = "Vec::is_empty")]
    pub characters: Vec<CharacterDecl>,
    #[serde(default, rename = "embedding", skip_serializing_if = "Vec::is_empty")]
    pub embeddings: Vec<EmbeddingDecl>,
    #[serde(default, rename = "task", skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDecl {
    pub name: String,
    pub p: u32,
    /// [F_q : F_p]; ignored when `modulus` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    /// Coefficients of the defining polynomial of F_q, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    #[serde(default = "default_generator")]
    pub generator: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transcendentals: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
}

fn default_generator() -> String {
    "a".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDecl {
    pub name: String,
    pub field: String,
    /// Right-hand sides a_i of x_i^p - x_i = a_i.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artin_schreier: Vec<String>,
    /// A monic Eisenstein polynomial in X.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eisenstein: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterDecl {
    pub name: String,
    pub field: String,
    pub a: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    /// `t -> T, u -> U`; unmentioned transcendentals keep their name.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub map: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Breaks,
    Filtration,
    Rsw,
    CompareCorab,
    BaseChange,
    Verify,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Breaks => "breaks",
            TaskKind::Filtration => "filtration",
            TaskKind::Rsw => "rsw",
            TaskKind::CompareCorab => "compare-corab",
            TaskKind::BaseChange => "base-change",
            TaskKind::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDecl {
    pub kind: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<String>,
}

impl TaskDecl {
    pub fn subject(&self) -> String {
        [&self.embedding, &self.extension, &self.character]
            .into_iter()
            .flatten()
            .cloned()
            .collect::<Vec<_>>()
            .join(":")
    }
}

impl RunConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    /// The smallest config declaring what `task` refers to, and the task.
    pub fn reproducer(&self, task: &TaskDecl) -> RunConfig {
        let mut out = RunConfig { precision: self.precision, ..Default::default() };
        let mut fields = Vec::new();
        if let Some(e) = &task.embedding {
            if let Some(d) = self.embeddings.iter().find(|d| &d.name == e) {
                fields.push(d.source.clone());
                fields.push(d.target.clone());
                out.embeddings.push(d.clone());
            }
        }
        if let Some(x) = &task.extension {
            if let Some(d) = self.extensions.iter().find(|d| &d.name == x) {
                fields.push(d.field.clone());
                out.extensions.push(d.clone());
            }
        }
        if let Some(c) = &task.character {
            if let Some(d) = self.characters.iter().find(|d| &d.name == c) {
                fields.push(d.field.clone());
                out.characters.push(d.clone());
            }
        }
        out.fields = self.fields.iter().filter(|f| fields.contains(&f.name)).cloned().collect();
        out.tasks.push(task.clone());
        out
    }
}

/// Everything a config declares, built at one working precision.
#[derive(Clone, Debug)]
pub struct Context {
    pub precision: i64,
    pub fields: BTreeMap<String, Arc<LocalField>>,
    /// Extensions whose construction ran out of precision keep the error,
    /// so that only the tasks using them fail.
    pub extensions: BTreeMap<String, Result<BuiltExtension>>,
    pub characters: BTreeMap<String, LaurentSeries>,
    pub embeddings: BTreeMap<String, EmbeddingSpec>,
}

#[derive(Clone, Debug)]
pub struct BuiltExtension {
    pub field: Arc<ExtField>,
    pub artin_schreier: Option<ASExtension>,
}

fn unique<'a>(kind: &str, names: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Config(format!("{kind} {n:?} is declared twice")));
        }
    }
    Ok(())
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| Error::Config(format!("unknown {kind} {name:?}")))
}

pub fn build_field(decl: &FieldDecl, precision: i64) -> Result<Arc<LocalField>> {
    let modulus = match &decl.modulus {
        Some(m) => m.clone(),
        None => default_modulus(decl.p, decl.degree.unwrap_or(1)),
    };
    let fq = FiniteField::new(decl.p, modulus)?;
    for v in &decl.transcendentals {
        if v == "t" || *v == decl.generator {
            return Err(Error::Config(format!("transcendental name {v:?} clashes with t or the generator")));
        }
    }
    let res = ResidueField::new(fq, decl.generator.clone(), decl.transcendentals.clone())?;
    Ok(LocalField::new(res, precision))
}

impl Context {
    /// Checks names and builds fields; extensions, characters and
    /// embeddings are parsed but not analyzed.
    pub fn build(cfg: &RunConfig, precision_override: Option<i64>) -> Result<Context> {
        unique("field", cfg.fields.iter().map(|d| &d.name))?;
        unique("extension", cfg.extensions.iter().map(|d| &d.name))?;
        unique("character", cfg.characters.iter().map(|d| &d.name))?;
        unique("embedding", cfg.embeddings.iter().map(|d| &d.name))?;
        let precision = precision_override.or(cfg.precision).unwrap_or(DEFAULT_PRECISION);
        if precision < 1 {
            return Err(Error::Config(format!("precision {precision} must be positive")));
        }
        let mut fields = BTreeMap::new();
        for d in &cfg.fields {
            let prec = precision_override.or(d.precision).unwrap_or(precision);
            fields.insert(d.name.clone(), build_field(d, prec)?);
        }
        let mut extensions = BTreeMap::new();
        for d in &cfg.extensions {
            let k = lookup(&fields, "field", &d.field)?;
            let ctx = |e: Error| Error::Config(format!("extension {}: {e}", d.name));
            let built = match (&d.eisenstein, d.artin_schreier.is_empty()) {
                (Some(f), true) => {
                    let mut coeffs = parse_polynomial(k, "X", f).map_err(ctx)?;
                    let lead = coeffs.pop();
                    if lead.is_none_or(|c| c != LaurentSeries::one(k)) {
                        return Err(ctx(Error::NotEisenstein("polynomial is not monic".into())));
                    }
                    ExtField::eisenstein(k, coeffs).map(|field| BuiltExtension { field, artin_schreier: None })
                }
                (None, false) => {
                    let gens = d.artin_schreier.iter().map(|s| parse_series(k, s)).collect::<Result<Vec<_>>>().map_err(ctx)?;
                    artin_schreier_extension(k, &gens)
                        .map(|ext| BuiltExtension { field: ext.field.clone(), artin_schreier: Some(ext) })
                }
                _ => return Err(ctx(Error::Config("give exactly one of artin_schreier or eisenstein".into()))),
            };
            let built = match built {
                Err(e) if !e.is_precision() => return Err(ctx(e)),
                b => b,
            };
            extensions.insert(d.name.clone(), built);
        }
        let mut characters = BTreeMap::new();
        for d in &cfg.characters {
            let k = lookup(&fields, "field", &d.field)?;
            let a = parse_series(k, &d.a).map_err(|e| Error::Config(format!("character {}: {e}", d.name)))?;
            characters.insert(d.name.clone(), a);
        }
        let mut embeddings = BTreeMap::new();
        for d in &cfg.embeddings {
            let ctx = |e: Error| Error::Config(format!("embedding {}: {e}", d.name));
            let k = lookup(&fields, "field", &d.source)?;
            let k2 = lookup(&fields, "field", &d.target)?;
            let s = parse_substitution(k, k2, &d.map).map_err(ctx)?;
            let spec = EmbeddingSpec::new(k, k2, s.t_image, s.u_images, s.gen_image).map_err(ctx)?;
            embeddings.insert(d.name.clone(), spec);
        }
        let ctx = Context { precision, fields, extensions, characters, embeddings };
        for t in &cfg.tasks {
            ctx.check_task(cfg, t)?;
        }
        Ok(ctx)
    }

    fn check_task(&self, cfg: &RunConfig, t: &TaskDecl) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("task {}: {msg}", t.kind.name())));
        let (ext, chr, emb) = (t.extension.as_deref(), t.character.as_deref(), t.embedding.as_deref());
        if let Some(x) = ext {
            lookup(&self.extensions, "extension", x)?;
        }
        if let Some(c) = chr {
            lookup(&self.characters, "character", c)?;
        }
        if let Some(e) = emb {
            lookup(&self.embeddings, "embedding", e)?;
        }
        match (t.kind, ext.is_some(), chr.is_some(), emb.is_some()) {
            (TaskKind::Breaks | TaskKind::Filtration, true, false, false) => Ok(()),
            (TaskKind::Rsw | TaskKind::CompareCorab, false, true, false) => Ok(()),
            (TaskKind::BaseChange, x, c, true) if x != c => {
                let spec = &self.embeddings[emb.unwrap()];
                let field = match (ext, chr) {
                    (Some(x), _) => self.fields[&cfg.extensions.iter().find(|d| d.name == x).unwrap().field].clone(),
                    (_, Some(c)) => self.characters[c].field().clone(),
                    _ => unreachable!(),
                };
                if !Arc::ptr_eq(&field, &spec.source) {
                    return bad("the embedding does not start at the field of its subject");
                }
                Ok(())
            }
            (TaskKind::Verify, x, c, e) if [x, c, e].iter().filter(|b| **b).count() == 1 => Ok(()),
            (TaskKind::Breaks | TaskKind::Filtration, ..) => bad("needs exactly an extension"),
            (TaskKind::Rsw | TaskKind::CompareCorab, ..) => bad("needs exactly a character"),
            (TaskKind::BaseChange, ..) => bad("needs an embedding and one extension or character"),
            (TaskKind::Verify, ..) => bad("needs exactly one extension, character or embedding"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: &str = r#"
precision = 32

[[field]]
name = "K"
p = 2
transcendentals = ["u"]

[[extension]]
name = "L"
field = "K"
artin_schreier = ["u*t^-1"]

[[character]]
name = "chi"
field = "K"
a = "u*t^-1"

[[task]]
kind = "compare-corab"
character = "chi"
"#;

    #[test]
    fn toml_and_json_agree() {
        let cfg = RunConfig::from_toml(CFG).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&json).unwrap(), cfg);
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let ctx = Context::build(&cfg, None).unwrap();
        assert_eq!(ctx.extensions["L"].as_ref().unwrap().field.degree(), 2);
    }

    #[test]
    fn rejects_unknown_keys_and_names() {
        let err = RunConfig::from_toml(&format!("{CFG}\nfoo = 1\n")).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let mut cfg = RunConfig::from_toml(CFG).unwrap();
        cfg.tasks[0].character = Some("psi".into());
        assert!(matches!(Context::build(&cfg, None).unwrap_err(), Error::Config(m) if m.contains("psi")));
        let mut cfg = RunConfig::from_toml(CFG).unwrap();
        cfg.tasks[0].kind = TaskKind::Breaks;
        assert!(Context::build(&cfg, None).is_err());
    }

    #[test]
    fn reproducer_keeps_only_dependencies() {
        let mut cfg = RunConfig::from_toml(CFG).unwrap();
        cfg.fields.push(FieldDecl {
            name: "K3".into(),
            p: 3,
            degree: None,
            modulus: None,
            generator: "a".into(),
            transcendentals: vec![],
            precision: None,
        });
        let r = cfg.reproducer(&cfg.tasks[0]);
        assert_eq!(r.fields.len(), 1);
        assert!(r.extensions.is_empty());
        assert_eq!(r.characters.len(), 1);
    }
}
