//! Finite membership structures.
//!
//! Elements are indices into the universe. Structures built by [`build_vn`]
//! label each element with its Ackermann code: bit `i` of a set's code is
//! set iff the set coded `i` is a member.

mod eval;
mod hf;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

pub use eval::{eval_closed, eval_formula, Valuation};
pub use hf::{ackermann_size, build_vn, reflect_search, reflects_at, singleton_image_check, vn_code, MAX_VN};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("V_{n} is too large to materialize (limit V_{MAX_VN})")]
    TooLarge { n: usize },
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("constant `{0}` is not interpreted")]
    UnresolvedConstant(String),
    #[error("term `{0}` cannot be evaluated in a membership structure")]
    UnsupportedTerm(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element `{0}` is listed twice")]
    DuplicateElement(String),
    #[error("subset {subset:?} of `{element}` is not in the structure")]
    PowersetMissing { element: String, subset: Vec<String> },
    #[error("singleton of `{0}` is not in the structure")]
    SingletonMissing(String),
    #[error(transparent)]
    Transform(#[from] crate::transform::TransformError),
}

/// A finite set with a membership relation, designated constants, and an
/// optional list of atoms (memberless elements other than the empty set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    labels: Vec<String>,
    /// Sorted member indices of each element.
    members: Vec<Vec<u32>>,
    constants: BTreeMap<String, u32>,
    atoms: Vec<u32>,
}

impl FiniteStructure {
    /// Builds a structure from labels and `(member, container)` pairs.
    pub fn new(
        labels: Vec<String>,
        membership: &[(usize, usize)],
        constants: BTreeMap<String, usize>,
    ) -> Result<Self, ModelError> {
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(ModelError::DuplicateElement(l.clone()));
            }
        }
        let n = labels.len();
        let mut members = vec![Vec::new(); n];
        for &(a, b) in membership {
            if a >= n || b >= n {
                return Err(ModelError::UnknownElement(format!("#{}", a.max(b))));
            }
            members[b].push(a as u32);
        }
        for m in &mut members {
            m.sort_unstable();
            m.dedup();
        }
        let mut consts = BTreeMap::new();
        for (name, e) in constants {
            if e >= n {
                return Err(ModelError::UnknownElement(format!("#{e}")));
            }
            consts.insert(name, e as u32);
        }
        Ok(FiniteStructure { labels, members, constants: consts, atoms: Vec::new() })
    }

    /// Declares memberless elements as atoms.
    pub fn with_atoms(mut self, atoms: &[usize]) -> Result<Self, ModelError> {
        for &a in atoms {
            if a >= self.len() {
                return Err(ModelError::UnknownElement(format!("#{a}")));
            }
            if !self.members[a].is_empty() {
                return Err(ModelError::UnknownElement(format!("atom `{}` has members", self.labels[a])));
            }
        }
        self.atoms = atoms.iter().map(|&a| a as u32).collect();
        self.atoms.sort_unstable();
        self.atoms.dedup();
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn members(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        self.members[e].iter().map(|&m| m as usize)
    }

    pub fn contains(&self, container: usize, member: usize) -> bool {
        self.members[container].binary_search(&(member as u32)).is_ok()
    }

    pub fn is_atom(&self, e: usize) -> bool {
        self.atoms.binary_search(&(e as u32)).is_ok()
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).map(|&e| e as usize)
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, usize)> {
        self.constants.iter().map(|(k, &v)| (k.as_str(), v as usize))
    }

    pub fn set_constant(&mut self, name: impl Into<String>, e: usize) {
        assert!(e < self.len(), "constant outside the universe");
        self.constants.insert(name.into(), e as u32);
    }

    pub fn membership(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (b, ms) in self.members.iter().enumerate() {
            out.extend(ms.iter().map(|&a| (a as usize, b)));
        }
        out.sort_unstable();
        out
    }

    /// Every member of a member of `e` is a member of `e`.
    pub fn is_transitive(&self, e: usize) -> bool {
        self.members(e).all(|m| self.members(m).all(|mm| self.contains(e, mm)))
    }

    /// The substructure on `subset`, keeping labels, the constants that land
    /// inside it, and its atoms.
    pub fn restrict(&self, subset: &[usize]) -> FiniteStructure {
        let mut keep: Vec<usize> = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![u32::MAX; self.len()];
        for (i, &e) in keep.iter().enumerate() {
            index[e] = i as u32;
        }
        let members = keep
            .iter()
            .map(|&e| self.members[e].iter().filter_map(|&m| Some(index[m as usize]).filter(|&i| i != u32::MAX)).collect())
            .collect();
        let remap = |e: u32| Some(index[e as usize]).filter(|&i| i != u32::MAX);
        FiniteStructure {
            labels: keep.iter().map(|&e| self.labels[e].clone()).collect(),
            members,
            constants: self.constants.iter().filter_map(|(k, &v)| remap(v).map(|i| (k.clone(), i))).collect(),
            atoms: self.atoms.iter().filter_map(|&a| remap(a)).collect(),
        }
    }

    /// Finds the non-atom element whose members are exactly `set` (sorted).
    pub fn lookup_set(&self, set: &[usize]) -> Option<usize> {
        (0..self.len()).find(|&e| {
            !self.is_atom(e) && self.members[e].len() == set.len() && self.members[e].iter().zip(set).all(|(&a, &b)| a as usize == b)
        })
    }

    pub fn to_json(&self) -> StructureJson {
        StructureJson {
            universe: self.labels.clone(),
            membership: self
                .membership()
                .into_iter()
                .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
            constants: self.constants.iter().map(|(k, &v)| (k.clone(), self.labels[v as usize].clone())).collect(),
            atoms: self.atoms.iter().map(|&a| self.labels[a as usize].clone()).collect(),
        }
    }

    pub fn from_json(j: &StructureJson) -> Result<Self, ModelError> {
        let index: HashMap<&str, usize> = j.universe.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let find = |l: &String| index.get(l.as_str()).copied().ok_or_else(|| ModelError::UnknownElement(l.clone()));
        let membership =
            j.membership.iter().map(|[a, b]| Ok((find(a)?, find(b)?))).collect::<Result<Vec<_>, ModelError>>()?;
        let constants = j.constants.iter().map(|(k, v)| Ok((k.clone(), find(v)?))).collect::<Result<_, ModelError>>()?;
        let atoms = j.atoms.iter().map(find).collect::<Result<Vec<_>, _>>()?;
        FiniteStructure::new(j.universe.clone(), &membership, constants)?.with_atoms(&atoms)
    }
}

/// Wire format: element labels, `[member, container]` pairs, constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub universe: Vec<String>,
    pub membership: Vec<[String; 2]>,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<String>,
}
