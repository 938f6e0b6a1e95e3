//! Reference tables for the built-in germs, embedded as CSV.

use serde::Deserialize;

use crate::error::AlgresError;
use crate::qpoly::{Order, Rational};

macro_rules! golden {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(pub const $name: &str = include_str!(concat!("../data/golden/", $file));)*
    };
}

golden! {
    W8_BASIS => "w8_basis.csv",
    W9_BASIS => "w9_basis.csv",
    W8_RELATIONS => "w8_relations.csv",
    W9_RELATIONS => "w9_relations.csv",
    W8_ACTIONS => "w8_actions.csv",
    W9_ACTIONS => "w9_actions.csv",
    W8_CLASSIFICATION => "w8_classification.csv",
    W9_CLASSIFICATION => "w9_classification.csv",
    W8_INVARIANTS => "w8_invariants.csv",
    W9_INVARIANTS => "w9_invariants.csv",
    W8_GEOMETRY => "w8_geometry.csv",
    W9_GEOMETRY => "w9_geometry.csv",
}

pub fn parse_order(s: &str) -> Result<Order, AlgresError> {
    match s.trim() {
        "inf" | "∞" => Ok(Order::Infinite),
        t => t.parse().map(Order::Finite).map_err(|_| AlgresError::parse(1, 1, format!("bad order '{t}'"))),
    }
}

pub fn render_order(o: Order) -> String {
    match o {
        Order::Finite(k) => k.to_string(),
        Order::Infinite => "inf".into(),
    }
}

fn rows<T: for<'de> Deserialize<'de>>(src: &str) -> Result<Vec<T>, AlgresError> {
    csv::Reader::from_reader(src.as_bytes())
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| AlgresError::parse(e.position().map(|p| p.line() as usize).unwrap_or(0), 1, e.to_string()))
}

#[derive(Clone, Debug, Deserialize)]
pub struct BasisRow {
    pub space: String,
    pub label: String,
    pub representative: String,
    pub delta: u32,
}

/// `delta` is either a degree or `>N` for every degree above `N`;
/// `relation = *` means every 2-form of that degree.
#[derive(Clone, Debug, Deserialize)]
pub struct RelationRow {
    pub delta: String,
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationDegree {
    Exact(u32),
    Above(u32),
}

impl RelationRow {
    pub fn degree(&self) -> Result<RelationDegree, AlgresError> {
        let bad = || AlgresError::parse(1, 1, format!("bad relation degree '{}'", self.delta));
        match self.delta.strip_prefix('>') {
            Some(n) => n.parse().map(RelationDegree::Above).map_err(|_| bad()),
            None => self.delta.parse().map(RelationDegree::Exact).map_err(|_| bad()),
        }
    }

    pub fn is_blanket(&self) -> bool {
        self.relation.trim() == "*"
    }
}

#[derive(Clone, Debug)]
pub struct ActionRow {
    pub field: String,
    pub multiplier: String,
    /// Entry per basis column: `(coefficient, target index)`, `None` for zero.
    pub cells: Vec<Option<(Rational, usize)>>,
}

fn parse_cell(s: &str) -> Result<Option<(Rational, usize)>, AlgresError> {
    let t = s.trim();
    if t == "0" {
        return Ok(None);
    }
    let bad = || AlgresError::parse(1, 1, format!("bad action cell '{t}'"));
    let (c, target) = t.split_once(' ').ok_or_else(bad)?;
    let c: Rational = c.parse().map_err(|_| bad())?;
    let idx: usize = target.trim().strip_prefix("theta").and_then(|n| n.parse().ok()).ok_or_else(bad)?;
    Ok(Some((c, idx - 1)))
}

pub fn parse_actions(src: &str) -> Result<Vec<ActionRow>, AlgresError> {
    let mut rdr = csv::Reader::from_reader(src.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| AlgresError::parse(0, 1, e.to_string()))?;
        let cells = rec.iter().skip(2).map(parse_cell).collect::<Result<Vec<_>, _>>()?;
        out.push(ActionRow { field: rec[0].to_string(), multiplier: rec[1].to_string(), cells });
    }
    Ok(out)
}

#[derive(Clone, Debug, Deserialize)]
pub struct ClassRow {
    pub class: String,
    pub normal_form: String,
    pub cod: usize,
    pub mu: usize,
    pub ind: String,
}

#[derive(Clone, Debug)]
pub struct InvariantRow {
    pub class: String,
    pub ind: Option<Order>,
    pub ln: Order,
    pub l2: Option<Order>,
}

pub fn parse_invariants(src: &str) -> Result<Vec<InvariantRow>, AlgresError> {
    let mut rdr = csv::Reader::from_reader(src.as_bytes());
    let headers = rdr.headers().map_err(|e| AlgresError::parse(1, 1, e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (ind, ln, l2) = (col("ind"), col("L_N"), col("L2"));
    let ln = ln.ok_or_else(|| AlgresError::parse(1, 1, "missing L_N column"))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| AlgresError::parse(0, 1, e.to_string()))?;
        out.push(InvariantRow {
            class: rec[0].to_string(),
            ind: ind.map(|i| parse_order(&rec[i])).transpose()?,
            ln: parse_order(&rec[ln])?,
            l2: l2.map(|i| parse_order(&rec[i])).transpose()?,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Deserialize)]
pub struct GeometryRow {
    pub class: String,
    pub condition: String,
    #[serde(rename = "L_N")]
    pub ln: String,
}

impl GeometryRow {
    pub fn ln_order(&self) -> Result<Option<Order>, AlgresError> {
        if self.ln.trim().is_empty() {
            Ok(None)
        } else {
            parse_order(&self.ln).map(Some)
        }
    }
}

/// All reference tables of one built-in germ.
#[derive(Clone, Debug)]
pub struct GoldenTables {
    pub basis: Vec<BasisRow>,
    pub relations: Vec<RelationRow>,
    pub actions: Vec<ActionRow>,
    pub classification: Vec<ClassRow>,
    pub invariants: Vec<InvariantRow>,
    pub geometry: Vec<GeometryRow>,
}

impl GoldenTables {
    pub fn for_germ(name: &str) -> Option<Result<Self, AlgresError>> {
        let src = match name {
            "W8" => [W8_BASIS, W8_RELATIONS, W8_ACTIONS, W8_CLASSIFICATION, W8_INVARIANTS, W8_GEOMETRY],
            "W9" => [W9_BASIS, W9_RELATIONS, W9_ACTIONS, W9_CLASSIFICATION, W9_INVARIANTS, W9_GEOMETRY],
            _ => return None,
        };
        Some((|| {
            Ok(GoldenTables {
                basis: rows(src[0])?,
                relations: rows(src[1])?,
                actions: parse_actions(src[2])?,
                classification: rows(src[3])?,
                invariants: parse_invariants(src[4])?,
                geometry: rows(src[5])?,
            })
        })())
    }

    pub fn basis_rows(&self, closed: bool) -> Vec<&BasisRow> {
        let key = if closed { "closed" } else { "all" };
        self.basis.iter().filter(|r| r.space == key).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_tables_load() {
        for name in ["W8", "W9"] {
            let g = GoldenTables::for_germ(name).unwrap().unwrap();
            assert_eq!(g.classification.len(), 10);
            assert_eq!(g.invariants.len(), 10);
            assert_eq!(g.geometry.len(), 10);
        }
        let g = GoldenTables::for_germ("W8").unwrap().unwrap();
        assert_eq!(g.actions.len(), 8);
        assert_eq!(g.actions[3].cells[2], Some(("51/2".parse().unwrap(), 6)));
    }

    #[test]
    fn orders_roundtrip() {
        for o in [Order::Finite(0), Order::Finite(13), Order::Infinite] {
            assert_eq!(parse_order(&render_order(o)).unwrap(), o);
        }
    }
}
