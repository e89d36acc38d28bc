//! JSON loading for superpotential specs and geometry bundles.
//!
//! Rationals are `"p/q"` strings. Linear forms are expression strings in the
//! index variables and the framing symbol, e.g. `"(f+1)*m0/5 + 2/5*m4 + m5/5"`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use super::form::{parse_form, FramedLinearForm};
use super::{PotentialError, SignExpression, SuperpotentialSpec};
use crate::exactnum::{FramedRational, Rational};
use crate::lattice::{validate_system, ChargeVectorSystem, ToricData};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    name: String,
    #[serde(default)]
    notes: Vec<String>,
    rays: Vec<[i64; 3]>,
    charge_rows: Vec<Vec<RawFramed>>,
    framing_symbol: String,
    root_order: u32,
    #[serde(default)]
    fan_charge_rows: Option<Vec<Vec<i64>>>,
    spec: RawSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFramed {
    c0: String,
    #[serde(default)]
    c1: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default, rename = "notes")]
    _notes: Vec<String>,
    #[serde(default)]
    framing_symbol: Option<String>,
    #[serde(default)]
    root_order: Option<u32>,
    variables: Vec<String>,
    index_vars: Vec<String>,
    brane_index: String,
    constraints: Vec<String>,
    prefactor: String,
    factorial_factors: Vec<String>,
    ratio_num: String,
    ratio_den: String,
    sign: RawSign,
    monomial_map: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSign {
    linear: String,
    floors: Vec<String>,
}

/// Orbifold or resolution data: toric rays, extended charge vectors and the
/// superpotential. `spec.variables[i]` is the variable of `charges.rows[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryBundle {
    pub name: String,
    pub notes: Vec<String>,
    pub toric: ToricData,
    pub charges: ChargeVectorSystem,
    pub spec: SuperpotentialSpec,
    /// Integer charge vectors (toric columns) used for the secondary fan.
    pub fan_charge_rows: Option<Vec<Vec<i64>>>,
}

impl GeometryBundle {
    /// Charge rows for the secondary fan: `fan_charge_rows` if given, else
    /// the toric columns of the non-brane charge rows, which must be integers.
    pub fn fan_rows(&self) -> Result<Vec<Vec<i64>>, String> {
        if let Some(rows) = &self.fan_charge_rows {
            return Ok(rows.clone());
        }
        let c = &self.charges;
        (0..c.n_rows())
            .filter(|&r| r != c.brane_row_index)
            .map(|r| {
                c.rows[r][..c.n_toric]
                    .iter()
                    .map(|x| {
                        x.is_constant()
                            .then(|| x.c0.to_i64())
                            .flatten()
                            .ok_or_else(|| format!("charge row {r} has non-integer entry {x}"))
                    })
                    .collect()
            })
            .collect()
    }

    /// Invariant violations that do not stop a computation.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out: Vec<String> = validate_system(&self.charges)
            .into_iter()
            .map(|v| format!("{}: {v}", self.name))
            .collect();
        for i in self.toric.non_calabi_yau_rays() {
            out.push(format!(
                "{}: ray {i} does not have last coordinate 1",
                self.name
            ));
        }
        let c = &self.charges;
        for r in (0..c.n_rows()).filter(|&r| r != c.brane_row_index) {
            let row = &c.rows[r][..c.n_toric];
            if row.iter().all(FramedRational::is_constant) {
                let weights: Vec<Rational> = row.iter().map(|x| x.c0.clone()).collect();
                if !self.toric.is_relation(&weights) {
                    out.push(format!(
                        "{}: charge row {r} is not a relation among the rays",
                        self.name
                    ));
                }
            }
        }
        if let Some(rows) = &self.fan_charge_rows {
            for (r, row) in rows.iter().enumerate() {
                let weights: Vec<Rational> = row.iter().map(|&x| Rational::from(x)).collect();
                if !self.toric.is_relation(&weights) {
                    out.push(format!(
                        "{}: fan charge row {r} is not a relation among the rays",
                        self.name
                    ));
                }
            }
        }
        out
    }
}

fn syntax_from_json(e: serde_path_to_error::Error<serde_json::Error>) -> PotentialError {
    let path = e.path().to_string();
    let inner = e.into_inner();
    PotentialError::Syntax {
        path,
        line: inner.line(),
        column: inner.column(),
        message: inner.to_string(),
    }
}

fn semantic(path: impl Into<String>, message: impl Into<String>) -> PotentialError {
    PotentialError::Semantic {
        path: path.into(),
        message: message.into(),
    }
}

fn rational(path: &str, text: &str) -> Result<Rational, PotentialError> {
    text.parse().map_err(|e| semantic(path, format!("{e}")))
}

struct FormContext<'a> {
    source: &'a str,
    index_vars: &'a [String],
    framing_symbol: &'a str,
}

impl FormContext<'_> {
    fn form(&self, path: &str, text: &str) -> Result<FramedLinearForm, PotentialError> {
        parse_form(text, self.index_vars, self.framing_symbol).map_err(|e| {
            if e.semantic {
                semantic(path, format!("{} in {text:?}", e.message))
            } else {
                let quoted = serde_json::to_string(text).unwrap_or_default();
                let line = self
                    .source
                    .find(&quoted)
                    .map_or(0, |pos| self.source[..pos].matches('\n').count() + 1);
                PotentialError::Syntax {
                    path: path.to_string(),
                    line,
                    column: e.column,
                    message: format!("{} in {text:?}", e.message),
                }
            }
        })
    }

    fn forms(&self, path: &str, texts: &[String]) -> Result<Vec<FramedLinearForm>, PotentialError> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| self.form(&format!("{path}[{i}]"), t))
            .collect()
    }
}

fn check_names(path: &str, names: &[String], framing_symbol: &str) -> Result<(), PotentialError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if n.is_empty() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(semantic(path, format!("{n:?} is not a valid name")));
        }
        if n == framing_symbol {
            return Err(semantic(path, format!("{n} is also the framing symbol")));
        }
        if !seen.insert(n) {
            return Err(semantic(path, format!("duplicate name {n}")));
        }
    }
    Ok(())
}

fn convert_spec(
    raw: RawSpec,
    prefix: &str,
    source: &str,
    framing_symbol: String,
    root_order: u32,
) -> Result<SuperpotentialSpec, PotentialError> {
    let p = |field: &str| format!("{prefix}{field}");
    if root_order == 0 {
        return Err(semantic(p("root_order"), "must be positive"));
    }
    check_names(&p("variables"), &raw.variables, &framing_symbol)?;
    check_names(&p("index_vars"), &raw.index_vars, &framing_symbol)?;
    if let Some(n) = raw.variables.iter().find(|v| raw.index_vars.contains(v)) {
        return Err(semantic(
            p("variables"),
            format!("{n} is also an index variable"),
        ));
    }
    if !raw.index_vars.contains(&raw.brane_index) {
        return Err(semantic(
            p("brane_index"),
            format!("unknown index variable {}", raw.brane_index),
        ));
    }

    let ctx = FormContext {
        source,
        index_vars: &raw.index_vars,
        framing_symbol: &framing_symbol,
    };
    let constraints = ctx.forms(&p("constraints"), &raw.constraints)?;
    if let Some(i) = constraints.iter().position(|c| !c.is_framing_free()) {
        return Err(semantic(
            format!("{}[{i}]", p("constraints")),
            "constraints must not depend on the framing",
        ));
    }

    let mut monomial_map = BTreeMap::new();
    for (ivar, targets) in &raw.monomial_map {
        let path = format!("{}.{ivar}", p("monomial_map"));
        if !raw.index_vars.contains(ivar) {
            return Err(semantic(path, format!("unknown index variable {ivar}")));
        }
        let mut exps = BTreeMap::new();
        for (var, e) in targets {
            let vpath = format!("{path}.{var}");
            if !raw.variables.contains(var) {
                return Err(semantic(vpath, format!("unknown series variable {var}")));
            }
            exps.insert(var.clone(), rational(&vpath, e)?);
        }
        monomial_map.insert(ivar.clone(), exps);
    }
    if let Some(missing) = raw
        .index_vars
        .iter()
        .find(|v| !monomial_map.contains_key(*v))
    {
        return Err(semantic(
            p("monomial_map"),
            format!("no entry for {missing}"),
        ));
    }

    Ok(SuperpotentialSpec {
        constraints,
        prefactor: ctx.form(&p("prefactor"), &raw.prefactor)?,
        factorial_factors: ctx.forms(&p("factorial_factors"), &raw.factorial_factors)?,
        ratio_num: ctx.form(&p("ratio_num"), &raw.ratio_num)?,
        ratio_den: ctx.form(&p("ratio_den"), &raw.ratio_den)?,
        sign: SignExpression {
            linear: ctx.form(&p("sign.linear"), &raw.sign.linear)?,
            floors: ctx.forms(&p("sign.floors"), &raw.sign.floors)?,
        },
        monomial_map,
        variables: raw.variables,
        index_vars: raw.index_vars,
        brane_index: raw.brane_index,
        framing_symbol,
        root_order,
    })
}

/// Parses a standalone spec file; it must carry `framing_symbol` and `root_order`.
pub fn parse_spec(text: &str) -> Result<SuperpotentialSpec, PotentialError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(syntax_from_json)?;
    let symbol = raw
        .framing_symbol
        .clone()
        .ok_or_else(|| semantic("framing_symbol", "missing"))?;
    let order = raw
        .root_order
        .ok_or_else(|| semantic("root_order", "missing"))?;
    convert_spec(raw, "", text, symbol, order)
}

pub fn parse_bundle(text: &str) -> Result<GeometryBundle, PotentialError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawBundle = serde_path_to_error::deserialize(de).map_err(syntax_from_json)?;

    let mut rows = Vec::with_capacity(raw.charge_rows.len());
    for (i, row) in raw.charge_rows.iter().enumerate() {
        let entries = row
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let path = format!("charge_rows[{i}][{j}]");
                Ok(FramedRational::new(
                    rational(&format!("{path}.c0"), &x.c0)?,
                    match &x.c1 {
                        Some(c1) => rational(&format!("{path}.c1"), c1)?,
                        None => Rational::zero(),
                    },
                ))
            })
            .collect::<Result<Vec<_>, PotentialError>>()?;
        rows.push(entries);
    }
    let width = rows.first().map_or(0, Vec::len);
    if width < 3 {
        return Err(semantic(
            "charge_rows",
            "need at least one toric and two brane columns",
        ));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(semantic(
            format!("charge_rows[{i}]"),
            "rows have different lengths",
        ));
    }
    let n_toric = width - 2;
    if raw.rays.len() != n_toric {
        return Err(semantic(
            "rays",
            format!("{} rays for {} toric columns", raw.rays.len(), n_toric),
        ));
    }
    if let Some(fan) = &raw.fan_charge_rows {
        if let Some(i) = fan.iter().position(|r| r.len() != n_toric) {
            return Err(semantic(
                format!("fan_charge_rows[{i}]"),
                format!("expected {n_toric} entries"),
            ));
        }
    }

    let symbol = raw.framing_symbol.clone();
    if raw
        .spec
        .framing_symbol
        .as_ref()
        .is_some_and(|s| *s != symbol)
    {
        return Err(semantic(
            "spec.framing_symbol",
            "differs from the bundle's framing_symbol",
        ));
    }
    if raw.spec.root_order.is_some_and(|n| n != raw.root_order) {
        return Err(semantic(
            "spec.root_order",
            "differs from the bundle's root_order",
        ));
    }
    let spec = convert_spec(raw.spec, "spec.", text, symbol.clone(), raw.root_order)?;

    if spec.variables.len() != rows.len() {
        return Err(semantic(
            "spec.variables",
            format!(
                "{} variables for {} charge rows",
                spec.variables.len(),
                rows.len()
            ),
        ));
    }
    let charges = ChargeVectorSystem::new(rows, n_toric, symbol, raw.root_order);
    let brane_var = &spec.variables[charges.brane_row_index];
    if !spec.monomial_map[&spec.brane_index].contains_key(brane_var) {
        return Err(semantic(
            format!("spec.monomial_map.{}", spec.brane_index),
            format!("brane index does not feed the brane-row variable {brane_var}"),
        ));
    }

    Ok(GeometryBundle {
        name: raw.name,
        notes: raw.notes,
        toric: ToricData { rays: raw.rays },
        charges,
        spec,
        fan_charge_rows: raw.fan_charge_rows,
    })
}
