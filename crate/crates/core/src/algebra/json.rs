//! JSON documents for algebraic structures.
//!
//! ```json
//! {"kind": "lie-algebra",
//!  "basis": [{"name": "e1", "degree": 0}, {"name": "e2", "degree": 0}],
//!  "table": [{"left": "e1", "right": "e2", "result": {"e2": "1"}}]}
//! ```
//!
//! Tables are literal: missing entries are zero and nothing is filled in by
//! symmetry. For coalgebras an entry `{left, right, result: {f: c}}` adds
//! `c · left ⊗ right` to `Δf`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AssocCommAlgebra, BasisElement, CoTable, Coalgebra, LieAlgebra, LieCoalgebra, StructureTable};
use crate::error::{Error, Result};
use crate::exact::{format_scalar, parse_scalar, zero_vec, Scalar};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub kind: String,
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub table: Vec<TableEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<DifferentialEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationDoc {
    #[serde(rename = "F0")]
    pub f0: Vec<String>,
    #[serde(rename = "F1")]
    pub f1: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialEntry {
    pub source: String,
    pub value: BTreeMap<String, String>,
}

pub fn parse_doc(text: &str) -> Result<StructureDoc> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub(crate) fn expect_kind(doc: &StructureDoc, kinds: &[&str]) -> Result<()> {
    if kinds.contains(&doc.kind.as_str()) {
        Ok(())
    } else {
        Err(Error::Schema(format!("expected kind {}, found `{}`", kinds.join(" or "), doc.kind)))
    }
}

pub(crate) fn index(basis: &[BasisElement], name: &str) -> Result<usize> {
    super::basis_index(basis, name).map_err(|_| Error::Schema(format!("unknown basis element `{name}`")))
}

/// Parses `{name: "p/q"}` into a coordinate vector.
pub fn parse_vector(basis: &[BasisElement], value: &BTreeMap<String, String>) -> Result<Vec<Scalar>> {
    let mut v = zero_vec(basis.len());
    for (name, c) in value {
        v[index(basis, name)?] += parse_scalar(c)?;
    }
    Ok(v)
}

/// Nonzero coordinates as `{name: "p/q"}`.
pub fn format_vector(basis: &[BasisElement], v: &[Scalar]) -> BTreeMap<String, String> {
    use num_traits::Zero;
    basis
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(b, c)| (b.name.clone(), format_scalar(c)))
        .collect()
}

fn structure_table(doc: &StructureDoc) -> Result<StructureTable> {
    let n = doc.basis.len();
    let mut t = StructureTable::zero(n);
    for e in &doc.table {
        let (i, j) = (index(&doc.basis, &e.left)?, index(&doc.basis, &e.right)?);
        let v = parse_vector(&doc.basis, &e.result)?;
        let mut cur = t.get(i, j).to_vec();
        crate::exact::add_assign(&mut cur, &v);
        t.set(i, j, cur)?;
    }
    Ok(t)
}

fn co_table(doc: &StructureDoc) -> Result<CoTable> {
    let mut t = CoTable::zero(doc.basis.len());
    for e in &doc.table {
        let (i, j) = (index(&doc.basis, &e.left)?, index(&doc.basis, &e.right)?);
        for (name, c) in &e.result {
            t.add(index(&doc.basis, name)?, i, j, parse_scalar(c)?);
        }
    }
    Ok(t)
}

fn filtration(doc: &StructureDoc) -> Result<(Vec<usize>, Vec<usize>)> {
    let f = doc
        .filtration
        .as_ref()
        .ok_or_else(|| Error::Schema("missing `filtration`".into()))?;
    let names = |v: &[String]| v.iter().map(|s| index(&doc.basis, s)).collect::<Result<Vec<_>>>();
    Ok((names(&f.f0)?, names(&f.f1)?))
}

fn table_doc(basis: &[BasisElement], t: &StructureTable) -> Vec<TableEntry> {
    let mut out = Vec::new();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let result = format_vector(basis, t.get(i, j));
            if !result.is_empty() {
                out.push(TableEntry {
                    left: basis[i].name.clone(),
                    right: basis[j].name.clone(),
                    result,
                });
            }
        }
    }
    out
}

fn co_table_doc(basis: &[BasisElement], t: &CoTable) -> Vec<TableEntry> {
    let mut entries: BTreeMap<(usize, usize), BTreeMap<String, String>> = BTreeMap::new();
    for k in 0..t.dim() {
        for term in t.terms(k) {
            entries
                .entry((term.left, term.right))
                .or_default()
                .insert(basis[k].name.clone(), format_scalar(&term.coef));
        }
    }
    entries
        .into_iter()
        .map(|((i, j), result)| TableEntry {
            left: basis[i].name.clone(),
            right: basis[j].name.clone(),
            result,
        })
        .collect()
}

fn names(basis: &[BasisElement], idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| basis[i].name.clone()).collect()
}

pub fn lie_algebra_from_doc(doc: &StructureDoc) -> Result<LieAlgebra> {
    expect_kind(doc, &["lie-algebra"])?;
    LieAlgebra::new(doc.basis.clone(), structure_table(doc)?)
}

pub fn assoc_from_doc(doc: &StructureDoc) -> Result<AssocCommAlgebra> {
    expect_kind(doc, &["assoc-comm-algebra"])?;
    AssocCommAlgebra::new(doc.basis.clone(), structure_table(doc)?)
}

pub fn coalgebra_from_doc(doc: &StructureDoc) -> Result<Coalgebra> {
    expect_kind(doc, &["coalgebra"])?;
    let (f0, f1) = filtration(doc)?;
    Coalgebra::new(doc.basis.clone(), co_table(doc)?, f0, f1)
}

pub fn lie_coalgebra_from_doc(doc: &StructureDoc) -> Result<LieCoalgebra> {
    expect_kind(doc, &["lie-coalgebra"])?;
    let (q0, q1) = filtration(doc)?;
    LieCoalgebra::new(doc.basis.clone(), co_table(doc)?, q0, q1)
}

/// Product table shared by the commutative algebra kinds.
pub(crate) fn product_table(doc: &StructureDoc) -> Result<StructureTable> {
    structure_table(doc)
}

pub(crate) fn product_table_doc(basis: &[BasisElement], t: &StructureTable) -> Vec<TableEntry> {
    table_doc(basis, t)
}

pub fn lie_algebra_to_doc(g: &LieAlgebra) -> StructureDoc {
    StructureDoc {
        kind: "lie-algebra".into(),
        basis: g.basis().to_vec(),
        table: table_doc(g.basis(), g.table()),
        ..Default::default()
    }
}

pub fn assoc_to_doc(g: &AssocCommAlgebra) -> StructureDoc {
    StructureDoc {
        kind: "assoc-comm-algebra".into(),
        basis: g.basis().to_vec(),
        table: table_doc(g.basis(), g.table()),
        ..Default::default()
    }
}

pub fn coalgebra_to_doc(f: &Coalgebra) -> StructureDoc {
    StructureDoc {
        kind: "coalgebra".into(),
        basis: f.basis().to_vec(),
        table: co_table_doc(f.basis(), f.table()),
        filtration: Some(FiltrationDoc {
            f0: names(f.basis(), f.f0()),
            f1: names(f.basis(), f.f1()),
        }),
        ..Default::default()
    }
}

pub fn lie_coalgebra_to_doc(q: &LieCoalgebra) -> StructureDoc {
    StructureDoc {
        kind: "lie-coalgebra".into(),
        basis: q.basis().to_vec(),
        table: co_table_doc(q.basis(), q.table()),
        filtration: Some(FiltrationDoc {
            f0: names(q.basis(), q.q0()),
            f1: names(q.basis(), q.q1()),
        }),
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_standard_coalgebra, StandardCoalgebra};

    #[test]
    fn lie_algebra_round_trip() {
        let g = LieAlgebra::sl2();
        let doc = lie_algebra_to_doc(&g);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(lie_algebra_from_doc(&parse_doc(&text).unwrap()).unwrap(), g);
    }

    #[test]
    fn coalgebra_round_trip() {
        let f = build_standard_coalgebra(&StandardCoalgebra::Pair { order: 5 }).unwrap();
        let doc = coalgebra_to_doc(&f);
        assert_eq!(coalgebra_from_doc(&doc).unwrap(), f);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_doc("{\"kind\": 3}"), Err(Error::Schema(_))));
        let doc = parse_doc(
            r#"{"kind": "lie-algebra", "basis": [{"name": "a", "degree": 0}],
                "table": [{"left": "a", "right": "b", "result": {}}]}"#,
        )
        .unwrap();
        assert!(matches!(lie_algebra_from_doc(&doc), Err(Error::Schema(_))));
        let doc = parse_doc(r#"{"kind": "coalgebra", "basis": []}"#).unwrap();
        assert!(matches!(lie_algebra_from_doc(&doc), Err(Error::Schema(_))));
    }
}
