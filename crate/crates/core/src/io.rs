//! JSON codecs: group files (with named subgroups and scenes), character tables and reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::correspond::ActionScene;
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

pub const TABLE_SCHEMA: &str = "blockscope.table/1";
pub const REPORT_SCHEMA: &str = "blockscope.report/1";

/// A permutation in cycle notation on 0-based points.
pub type Cycles = Vec<Vec<usize>>;

/// A subgroup generator: an index into the ambient generators, or explicit cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Index(usize),
    Cycles(Cycles),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub name: String,
    /// Subgroup names; `None` for `ambient` means the whole group.
    #[serde(default)]
    pub ambient: Option<String>,
    #[serde(rename = "G")]
    pub g: String,
    #[serde(rename = "N")]
    pub n: String,
    #[serde(rename = "P")]
    pub p_group: String,
    pub p: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    pub degree: usize,
    pub generators: Vec<Cycles>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subgroups: BTreeMap<String, Vec<GeneratorSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scenes: Vec<SceneSpec>,
}

/// A validated group file.
#[derive(Clone, Debug)]
pub struct LoadedGroup {
    pub name: String,
    pub group: PermGroup,
    pub subgroups: BTreeMap<String, PermGroup>,
    pub scenes: Vec<SceneSpec>,
}

impl LoadedGroup {
    /// A declared subgroup; the name `"whole"` always denotes the ambient group.
    pub fn subgroup(&self, name: &str) -> Result<&PermGroup> {
        if name == "whole" && !self.subgroups.contains_key(name) {
            return Ok(&self.group);
        }
        self.subgroups
            .get(name)
            .ok_or_else(|| Error::Input(format!("no subgroup named {name:?} in {}", self.name)))
    }

    /// The declared scene called `name`, with its subgroups resolved and its hypotheses checked.
    pub fn scene(&self, name: &str) -> Result<ActionScene> {
        let spec = self
            .scenes
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::Input(format!("no scene named {name:?} in {}", self.name)))?;
        self.resolve_scene(spec)
    }

    pub fn resolve_scene(&self, spec: &SceneSpec) -> Result<ActionScene> {
        let ambient = match &spec.ambient {
            Some(name) => self.subgroup(name)?.clone(),
            None => self.group.clone(),
        };
        ActionScene::new(
            ambient,
            self.subgroup(&spec.g)?.clone(),
            self.subgroup(&spec.n)?.clone(),
            self.subgroup(&spec.p_group)?.clone(),
            spec.p,
        )
    }
}

fn perm_from_cycles(degree: usize, cycles: &Cycles) -> Result<Permutation> {
    Permutation::from_cycles(degree, cycles)
}

pub fn parse_group_file(text: &str) -> Result<LoadedGroup> {
    let file: GroupFile = serde_json::from_str(text)?;
    load(file)
}

pub fn read_group_file(path: impl AsRef<Path>) -> Result<LoadedGroup> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_group_file(&text).map_err(|e| match e {
        Error::Json(j) => Error::Input(format!("{}: {j}", path.as_ref().display())),
        other => other,
    })
}

pub fn load(file: GroupFile) -> Result<LoadedGroup> {
    let gens = file
        .generators
        .iter()
        .map(|c| perm_from_cycles(file.degree, c))
        .collect::<Result<Vec<_>>>()?;
    let group = PermGroup::new(file.degree, gens.clone())?;
    if let Some(order) = file.order {
        if order != group.order() {
            return Err(Error::Input(format!(
                "{}: declared order {order} but generators give {}",
                file.name,
                group.order()
            )));
        }
    }
    let mut subgroups = BTreeMap::new();
    for (name, specs) in &file.subgroups {
        let sub_gens = specs
            .iter()
            .map(|s| match s {
                GeneratorSpec::Index(i) => gens
                    .get(*i)
                    .cloned()
                    .ok_or_else(|| Error::Input(format!("subgroup {name}: no generator {i}"))),
                GeneratorSpec::Cycles(c) => perm_from_cycles(file.degree, c),
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(g) = sub_gens.iter().find(|g| !group.contains(g)) {
            return Err(Error::Input(format!("subgroup {name}: {g} is not in the group")));
        }
        subgroups.insert(name.clone(), PermGroup::new(file.degree, sub_gens)?);
    }
    let loaded = LoadedGroup {
        name: file.name,
        group,
        subgroups,
        scenes: file.scenes,
    };
    for s in &loaded.scenes {
        for n in [&s.g, &s.n, &s.p_group].into_iter().chain(s.ambient.as_ref()) {
            loaded.subgroup(n)?;
        }
    }
    Ok(loaded)
}

pub fn group_file_of(name: &str, g: &PermGroup) -> GroupFile {
    GroupFile {
        name: name.to_string(),
        provenance: None,
        order: Some(g.order()),
        degree: g.degree(),
        generators: g.generators().iter().map(Permutation::cycles).collect(),
        subgroups: BTreeMap::new(),
        scenes: Vec::new(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassJson {
    /// Images of `0..degree` under the representative.
    pub representative: Vec<usize>,
    pub size: u64,
    pub order: u64,
    /// Class indices of `z^0, z^1, ..., z^(order-1)`.
    pub power_map: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableJson {
    pub schema: String,
    pub degree: usize,
    pub generators: Vec<Cycles>,
    pub order: u64,
    pub exponent: u64,
    pub classes: Vec<ClassJson>,
    pub irreducibles: Vec<Vec<Cyclotomic>>,
}

pub fn table_to_json(t: &CharacterTable) -> TableJson {
    let classes = t.classes();
    TableJson {
        schema: TABLE_SCHEMA.to_string(),
        degree: t.group().degree(),
        generators: t.group().generators().iter().map(Permutation::cycles).collect(),
        order: t.order(),
        exponent: t.exponent(),
        classes: (0..t.num_classes())
            .map(|k| ClassJson {
                representative: classes.representative(k).images(),
                size: t.class_size(k),
                order: classes.element_order(k),
                power_map: t.power_maps()[k].clone(),
            })
            .collect(),
        irreducibles: t.irreducibles().iter().map(|c| c.values().to_vec()).collect(),
    }
}

pub fn export_table(t: &CharacterTable) -> Result<String> {
    Ok(serde_json::to_string_pretty(&table_to_json(t))?)
}

/// Rebuilds and validates a table. Columns may come in any class order; they are matched
/// to classes through the representatives, and class sizes and power maps must agree.
pub fn table_from_json(tj: &TableJson) -> Result<CharacterTable> {
    if tj.schema != TABLE_SCHEMA {
        return Err(Error::Input(format!("unsupported table schema {:?}", tj.schema)));
    }
    let gens = tj
        .generators
        .iter()
        .map(|c| perm_from_cycles(tj.degree, c))
        .collect::<Result<Vec<_>>>()?;
    let group = PermGroup::new(tj.degree, gens)?;
    if group.order() != tj.order {
        return Err(Error::Input(format!(
            "declared order {} but generators give {}",
            tj.order,
            group.order()
        )));
    }
    let classes = group.conjugacy_classes()?;
    let r = classes.len();
    if tj.classes.len() != r {
        return Err(Error::Input(format!(
            "expected {r} classes, file has {}",
            tj.classes.len()
        )));
    }
    // column -> class index
    let mut position = Vec::with_capacity(r);
    for c in &tj.classes {
        let z = Permutation::from_images(&c.representative)?;
        let k = group
            .class_of(&z)
            .map_err(|_| Error::Input(format!("representative {z} is not in the group")))?;
        if classes.size(k) as u64 != c.size || classes.element_order(k) != c.order {
            return Err(Error::Input(format!("class data of {z} does not match the group")));
        }
        position.push(k);
    }
    let mut seen = vec![false; r];
    for &k in &position {
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::Input("two columns describe the same class".into()));
        }
    }
    let mut values = Vec::with_capacity(tj.irreducibles.len());
    for row in &tj.irreducibles {
        if row.len() != r {
            return Err(Error::Input(format!(
                "character row has {} values, expected {r}",
                row.len()
            )));
        }
        let mut v = vec![Cyclotomic::zero(); r];
        for (col, x) in row.iter().enumerate() {
            v[position[col]] = x.clone();
        }
        values.push(v);
    }
    let table = CharacterTable::from_values(group, values)?;
    for (col, c) in tj.classes.iter().enumerate() {
        let k = position[col];
        let expect: Vec<u32> = c
            .power_map
            .iter()
            .map(|&j| position.get(j as usize).copied().unwrap_or(usize::MAX) as u32)
            .collect();
        if expect != table.power_maps()[k] {
            return Err(Error::Input(format!(
                "power map of column {col} does not match the group"
            )));
        }
    }
    Ok(table)
}

pub fn import_table(text: &str) -> Result<CharacterTable> {
    let tj: TableJson = serde_json::from_str(text)?;
    table_from_json(&tj)
}
