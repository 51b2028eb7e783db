//! Document formats.
//!
//! Structured documents are JSON, written pretty-printed with a trailing
//! newline so that a parse followed by a write reproduces the input byte for
//! byte. Tables are plain CSV with a fixed header.
//!
//! A point set document:
//!
//! ```json
//! {
//!   "group": { "kind": "cyclic", "n": 7 },
//!   "elements": [1, 3]
//! }
//! ```
//!
//! `kind` is one of `cyclic`, `interval` (both with `n`) or `table` (with
//! `order`, `identity`, `table` as a list of rows and optional `labels`, a
//! map from names such as `alpha` to element indices).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::constants::ConstantsLedger;
use crate::constructions::HGroupHandle;
use crate::counting::RepProfile;
use crate::error::{Error, Result};
use crate::group::{GroupCtx, PointSet, TableGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupDoc {
    Cyclic {
        n: u64,
    },
    Interval {
        n: u64,
    },
    Table {
        order: usize,
        identity: u32,
        table: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        labels: BTreeMap<String, u32>,
    },
}

impl GroupDoc {
    pub fn from_ctx(ctx: &GroupCtx) -> Self {
        match ctx {
            GroupCtx::Cyclic { n } => GroupDoc::Cyclic { n: *n },
            GroupCtx::Interval { n } => GroupDoc::Interval { n: *n },
            GroupCtx::Table(g) => GroupDoc::Table {
                order: g.order(),
                identity: g.identity(),
                table: g.rows(),
                labels: BTreeMap::new(),
            },
        }
    }

    /// The H group with `alpha` and `beta` labelled.
    pub fn from_h_group(h: &HGroupHandle) -> Self {
        let mut doc = GroupDoc::from_ctx(&h.ctx());
        if let GroupDoc::Table { labels, .. } = &mut doc {
            labels.insert("alpha".into(), h.alpha.0 as u32);
            labels.insert("beta".into(), h.beta.0 as u32);
        }
        doc
    }

    /// Build and validate the context; table documents are checked for the
    /// group axioms.
    pub fn to_ctx(&self) -> Result<GroupCtx> {
        match self {
            GroupDoc::Cyclic { n } => GroupCtx::cyclic(*n),
            GroupDoc::Interval { n } => GroupCtx::interval(*n),
            GroupDoc::Table { order, identity, table, labels } => {
                if table.len() != *order {
                    return Err(Error::Format(format!(
                        "table has {} rows, order says {order}",
                        table.len()
                    )));
                }
                if let Some((name, &v)) = labels.iter().find(|(_, &v)| v as usize >= *order) {
                    return Err(Error::Format(format!("label {name} = {v} is out of range")));
                }
                Ok(GroupCtx::Table(Arc::new(TableGroup::new(table, *identity)?)))
            }
        }
    }

    pub fn labels(&self) -> Option<&BTreeMap<String, u32>> {
        match self {
            GroupDoc::Table { labels, .. } => Some(labels),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetDoc {
    pub group: GroupDoc,
    pub elements: Vec<i64>,
}

impl PointSetDoc {
    pub fn from_set(a: &PointSet) -> Self {
        PointSetDoc { group: GroupDoc::from_ctx(a.ctx()), elements: a.values() }
    }

    pub fn with_group(group: GroupDoc, a: &PointSet) -> Self {
        PointSetDoc { group, elements: a.values() }
    }

    /// Rejects unsorted or repeated elements so that the document is
    /// canonical.
    pub fn to_set(&self) -> Result<PointSet> {
        if self.elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("elements must be strictly ascending".into()));
        }
        PointSet::new(self.group.to_ctx()?, self.elements.iter().copied())
    }
}

/// Serialize to the canonical document text.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_point_set(a: &PointSet) -> Result<String> {
    to_json(&PointSetDoc::from_set(a))
}

pub fn read_point_set(text: &str) -> Result<PointSet> {
    from_json::<PointSetDoc>(text)?.to_set()
}

/// Read a group document, also accepting a full point-set document (its
/// group is used).
pub fn read_group(text: &str) -> Result<GroupDoc> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either {
        Set(PointSetDoc),
        Group(GroupDoc),
    }
    match from_json::<Either>(text)? {
        Either::Set(d) => Ok(d.group),
        Either::Group(g) => Ok(g),
    }
}

/// `key,count` rows, ascending by key.
pub fn profile_csv(p: &RepProfile) -> String {
    let mut s = String::from("key,count\n");
    for (k, c) in &p.values {
        let _ = writeln!(s, "{k},{c}");
    }
    s
}

pub fn parse_profile_csv(text: &str) -> Result<BTreeMap<i64, u64>> {
    let mut lines = text.lines();
    if lines.next() != Some("key,count") {
        return Err(Error::Format("missing key,count header".into()));
    }
    let mut out = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let bad = || Error::Format(format!("bad profile row {}: {line:?}", i + 2));
        let (k, c) = line.split_once(',').ok_or_else(bad)?;
        let k: i64 = k.parse().map_err(|_| bad())?;
        let c: u64 = c.parse().map_err(|_| bad())?;
        if out.insert(k, c).is_some() {
            return Err(bad());
        }
    }
    Ok(out)
}

/// Columns: `k,flavor,radicand,value,display,source,ruzsa`.
pub fn constants_csv(t: &ConstantsLedger) -> String {
    let mut s = String::from("k,flavor,radicand,value,display,source,ruzsa\n");
    for c in &t.coefficients {
        let source = match c.source {
            crate::constants::Source::Recursion => "recursion",
            crate::constants::Source::Theorem => "theorem",
        };
        let _ = writeln!(
            s,
            "{},{},{},{:.6},{:.1},{},{:.6}",
            c.k, c.flavor, c.radicand, c.value, c.display, source, c.ruzsa
        );
    }
    s
}
