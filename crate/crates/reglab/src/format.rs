//! JSON formats for groups, modules and Brauer relations.

use std::fs;
use std::path::{Path, PathBuf};

use reglab_core::brauer::BrauerRelation;
use reglab_core::exactla::{IntMatrix, Lattice};
use reglab_core::gmodules::GModule;
use reglab_core::groups::{FiniteGroup, GroupDescriptor, Subgroup};
use reglab_core::{BigInt, Int};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupJson {
    Dihedral { q: usize },
    Cyclic { n: usize },
    Product { factors: Vec<GroupSpec> },
    Table { order: usize, mul: Vec<Vec<usize>> },
}

/// A group object, or a path to a file holding one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Inline(Box<GroupJson>),
    Path(String),
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn build_group(spec: &GroupSpec, base: &Path) -> Result<FiniteGroup, CliError> {
    match spec {
        GroupSpec::Path(p) => {
            let path = base.join(p);
            let v = read_json(&path)?;
            let spec: GroupSpec = serde_json::from_value(v).map_err(|e| CliError::Input(format!("{p}: {e}")))?;
            if matches!(spec, GroupSpec::Path(_)) {
                return Err(CliError::Input(format!("{p}: group file must hold a group object")));
            }
            build_group(&spec, &base_dir(&path))
        }
        GroupSpec::Inline(g) => Ok(match g.as_ref() {
            GroupJson::Dihedral { q } => FiniteGroup::dihedral(*q)?,
            GroupJson::Cyclic { n } => FiniteGroup::cyclic(*n)?,
            GroupJson::Product { factors } => {
                let fs = factors.iter().map(|f| build_group(f, base)).collect::<Result<Vec<_>, _>>()?;
                FiniteGroup::product(&fs)?
            }
            GroupJson::Table { order, mul } => {
                if mul.len() != *order {
                    return Err(CliError::Input(format!("table has {} rows, order is {order}", mul.len())));
                }
                FiniteGroup::from_table(mul.clone())?
            }
        }),
    }
}

pub fn group_json(g: &FiniteGroup) -> GroupJson {
    fn of(d: &GroupDescriptor, g: Option<&FiniteGroup>) -> GroupJson {
        match d {
            GroupDescriptor::Dihedral(q) => GroupJson::Dihedral { q: *q },
            GroupDescriptor::Cyclic(n) => GroupJson::Cyclic { n: *n },
            GroupDescriptor::Product(fs) => {
                GroupJson::Product { factors: fs.iter().map(|f| GroupSpec::Inline(Box::new(of(f, None)))).collect() }
            }
            GroupDescriptor::Table => {
                let g = g.expect("table groups are never factors");
                GroupJson::Table { order: g.order(), mul: g.table() }
            }
        }
    }
    of(g.descriptor(), Some(g))
}

/// Group argument on the command line: a file, inline JSON, or a short name
/// such as `D5`, `C6` or `C2xC2`.
pub fn parse_group_arg(arg: &str) -> Result<FiniteGroup, CliError> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        let spec: GroupSpec = serde_json::from_str(trimmed).map_err(|e| CliError::Input(format!("group: {e}")))?;
        return build_group(&spec, Path::new("."));
    }
    if let Some(g) = short_group(trimmed)? {
        return Ok(g);
    }
    build_group(&GroupSpec::Path(trimmed.to_string()), Path::new(""))
}

fn short_group(name: &str) -> Result<Option<FiniteGroup>, CliError> {
    let mut factors = Vec::new();
    for part in name.split('x') {
        let (kind, num) = part.split_at(part.len().min(1));
        let Ok(k) = num.parse::<usize>() else { return Ok(None) };
        factors.push(match kind {
            "D" => FiniteGroup::dihedral(k)?,
            "C" => FiniteGroup::cyclic(k)?,
            _ => return Ok(None),
        });
    }
    Ok(Some(if factors.len() == 1 { factors.remove(0) } else { FiniteGroup::product(&factors)? }))
}

pub fn int_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

fn json_int(v: &Value, what: &str) -> Result<Int, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| CliError::Input(format!("{what}: {n} is not an integer"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .map(Int::from)
            .map_err(|_| CliError::Input(format!("{what}: {s:?} is not an integer"))),
        _ => Err(CliError::Input(format!("{what}: expected an integer"))),
    }
}

fn json_vector(v: &Value, len: usize, what: &str) -> Result<Vec<Int>, CliError> {
    let items = v.as_array().ok_or_else(|| CliError::Input(format!("{what}: expected an array")))?;
    if items.len() != len {
        return Err(CliError::Input(format!("{what}: expected {len} entries, found {}", items.len())));
    }
    items.iter().map(|x| json_int(x, what)).collect()
}

fn json_matrix(v: &Value, n: usize, what: &str) -> Result<IntMatrix, CliError> {
    let rows = v.as_array().ok_or_else(|| CliError::Input(format!("{what}: expected a matrix")))?;
    if rows.len() != n {
        return Err(CliError::Input(format!("{what}: expected {n} rows, found {}", rows.len())));
    }
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| json_vector(r, n, &format!("{what} row {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_rows(n, rows))
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect())
}

pub fn module_from_value(v: &Value, base: &Path) -> Result<GModule, CliError> {
    let obj = v.as_object().ok_or_else(|| CliError::Input("module: expected an object".into()))?;
    let spec: GroupSpec = serde_json::from_value(obj.get("group").cloned().unwrap_or(Value::Null))
        .map_err(|e| CliError::Input(format!("module.group: {e}")))?;
    let group = build_group(&spec, base)?;
    let rank = obj
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::Input("module.rank: expected a nonnegative integer".into()))? as usize;
    let relations = match obj.get("relations") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(rows)) => rows
            .iter()
            .enumerate()
            .map(|(i, r)| json_vector(r, rank, &format!("module.relations[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(CliError::Input("module.relations: expected an array".into())),
    };
    let lattice = Lattice::from_generators(rank, relations);
    let matrices = |key: &str| -> Result<Option<Vec<(usize, IntMatrix)>>, CliError> {
        let Some(v) = obj.get(key) else { return Ok(None) };
        let map = v.as_object().ok_or_else(|| CliError::Input(format!("module.{key}: expected an object")))?;
        let mut out = Vec::with_capacity(map.len());
        for (k, m) in map {
            let g: usize = k
                .parse()
                .map_err(|_| CliError::Input(format!("module.{key}: key {k:?} is not an element index")))?;
            if g >= group.order() {
                return Err(CliError::Input(format!("module.{key}: element {g} is not in a group of order {}", group.order())));
            }
            out.push((g, json_matrix(m, rank, &format!("module.{key}[{k}]"))?));
        }
        out.sort_by_key(|t| t.0);
        Ok(Some(out))
    };
    match (matrices("action")?, matrices("action_on_generators")?) {
        (Some(all), None) => {
            if all.len() != group.order() {
                let missing = (0..group.order()).find(|g| all.iter().all(|t| t.0 != *g)).unwrap_or(0);
                return Err(CliError::Input(format!("module.action: no matrix for element {missing}")));
            }
            Ok(GModule::new(group, rank, lattice, all.into_iter().map(|t| t.1).collect())?)
        }
        (None, Some(gens)) => Ok(GModule::from_generators(group, rank, lattice, &gens)?),
        (Some(_), Some(_)) => Err(CliError::Input("module: give either action or action_on_generators".into())),
        (None, None) => Err(CliError::Input("module: missing action".into())),
    }
}

pub fn load_module(path: &Path) -> Result<GModule, CliError> {
    module_from_value(&read_json(path)?, &base_dir(path))
}

/// Canonical form: inline group, HNF relation rows, every element's matrix.
pub fn module_value(m: &GModule) -> Value {
    let mut action = Map::new();
    for (g, a) in m.actions().iter().enumerate() {
        action.insert(g.to_string(), matrix_json(a));
    }
    json!({
        "group": serde_json::to_value(group_json(m.group())).expect("serializable"),
        "rank": m.ambient_rank(),
        "relations": m.relations().basis_vectors().iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect::<Vec<_>>(),
        "action": Value::Object(action),
    })
}

/// SHA-256 of the canonical module JSON (keys sorted, no whitespace).
pub fn module_digest(m: &GModule) -> String {
    let text = serde_json::to_string(&module_value(m)).expect("serializable");
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn subgroup_from_indices(g: &FiniteGroup, items: &[usize]) -> Result<Subgroup, CliError> {
    if let Some(&bad) = items.iter().find(|&&x| x >= g.order()) {
        return Err(CliError::Input(format!("element {bad} is not in a group of order {}", g.order())));
    }
    let mut v = items.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(g.subgroup(&v)?)
}

/// `"0,3"` → subgroup; an empty string is the trivial subgroup.
pub fn parse_subgroup(g: &FiniteGroup, s: &str) -> Result<Subgroup, CliError> {
    let mut items = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        items.push(part.parse::<usize>().map_err(|_| CliError::Input(format!("subgroup: {part:?} is not an index")))?);
    }
    if items.is_empty() {
        return Ok(g.trivial_subgroup());
    }
    subgroup_from_indices(g, &items)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub subgroup: Vec<usize>,
    pub coeff: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationJson {
    pub group: GroupSpec,
    pub terms: Vec<TermJson>,
}

pub fn relation_from_value(v: &Value, base: &Path) -> Result<BrauerRelation, CliError> {
    let r: RelationJson = serde_json::from_value(v.clone()).map_err(|e| CliError::Input(format!("relation: {e}")))?;
    let g = build_group(&r.group, base)?;
    let terms = r
        .terms
        .iter()
        .map(|t| Ok((subgroup_from_indices(&g, &t.subgroup)?, t.coeff)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(BrauerRelation::new(&g, &terms)?)
}

pub fn load_relation(path: &Path) -> Result<BrauerRelation, CliError> {
    relation_from_value(&read_json(path)?, &base_dir(path))
}

pub fn terms_json(r: &BrauerRelation) -> Vec<TermJson> {
    r.terms().iter().map(|(h, c)| TermJson { subgroup: h.elements().to_vec(), coeff: *c }).collect()
}

pub fn relation_value(r: &BrauerRelation) -> Value {
    serde_json::to_value(RelationJson {
        group: GroupSpec::Inline(Box::new(group_json(r.group()))),
        terms: terms_json(r),
    })
    .expect("serializable")
}
