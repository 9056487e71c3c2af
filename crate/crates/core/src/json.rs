//! JSON document formats for fields, elements, polynomials, point sets and
//! BRK instances.
//!
//! Elements of a prime field serialize as a single integer; elements of an
//! extension field as their residue array (constant term first). Polynomial
//! terms and set points are emitted in ascending lex order so that output is
//! byte-stable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::brkset::{BrkInstance, PointSet, RhoChoice};
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field, FieldSpec};
use crate::mpoly::{MultiIndex, SparsePoly};

pub fn elem_to_json(field: &Field, e: Elem) -> Value {
    if field.m() == 1 {
        Value::from(e.code())
    } else {
        Value::from(field.residues(e))
    }
}

pub fn elem_from_json(field: &Field, v: &Value) -> Result<Elem> {
    let bad = || Error::BadDocument(format!("{v} is not an element of {field:?}"));
    match v {
        Value::Number(n) if field.m() == 1 => {
            let code = n.as_u64().ok_or_else(bad)?;
            let code = u32::try_from(code).map_err(|_| bad())?;
            field.elem(code)
        }
        Value::Array(items) => {
            let residues = items
                .iter()
                .map(|x| x.as_u64().and_then(|c| u32::try_from(c).ok()).ok_or_else(bad))
                .collect::<Result<Vec<u32>>>()?;
            field.from_residues(&residues)
        }
        _ => Err(bad()),
    }
}

pub fn point_to_json(field: &Field, pt: &[Elem]) -> Value {
    Value::Array(pt.iter().map(|&c| elem_to_json(field, c)).collect())
}

pub fn point_from_json(field: &Field, v: &Value, n: usize) -> Result<Vec<Elem>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::BadDocument(format!("point {v} is not an array")))?;
    if items.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: items.len(),
        });
    }
    items.iter().map(|c| elem_from_json(field, c)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exp: Vec<u32>,
    pub coeff: Value,
}

/// `{"field": <field>, "arity": n, "terms": [{"exp": [...], "coeff": <elem>}]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub field: FieldSpec,
    pub arity: usize,
    pub terms: Vec<TermDoc>,
}

impl PolyDoc {
    pub fn from_poly(p: &SparsePoly) -> Self {
        PolyDoc {
            field: p.field().spec(),
            arity: p.arity(),
            terms: p
                .terms()
                .map(|(e, c)| TermDoc {
                    exp: e.exps().to_vec(),
                    coeff: elem_to_json(p.field(), c),
                })
                .collect(),
        }
    }

    /// Builds the polynomial over the field the document names.
    pub fn to_poly(&self) -> Result<SparsePoly> {
        let field = self.field.build()?;
        self.to_poly_in(&field)
    }

    /// Builds the polynomial over `field`, which must match the document.
    pub fn to_poly_in(&self, field: &Field) -> Result<SparsePoly> {
        if self.field != field.spec() {
            return Err(Error::MixedFields);
        }
        let mut seen = BTreeSet::new();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exp.len() != self.arity {
                return Err(Error::ArityMismatch {
                    expected: self.arity,
                    found: t.exp.len(),
                });
            }
            if !seen.insert(t.exp.clone()) {
                return Err(Error::BadDocument(format!("repeated exponent {:?}", t.exp)));
            }
            terms.push((MultiIndex::new(t.exp.clone()), elem_from_json(field, &t.coeff)?));
        }
        let p = SparsePoly::from_terms(field, self.arity, terms)?;
        p.check_exponents()?;
        Ok(p)
    }
}

/// `{"field": <field>, "n": int, "points": [[<elem>,...],...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    pub field: FieldSpec,
    pub n: usize,
    pub points: Vec<Value>,
}

impl SetDoc {
    pub fn from_set(s: &PointSet) -> Self {
        SetDoc {
            field: s.field().spec(),
            n: s.dim(),
            points: s.iter().map(|pt| point_to_json(s.field(), pt)).collect(),
        }
    }

    pub fn to_set(&self) -> Result<PointSet> {
        let field = self.field.build()?;
        let points = self
            .points
            .iter()
            .map(|v| point_from_json(&field, v, self.n))
            .collect::<Result<Vec<_>>>()?;
        PointSet::from_points(&field, self.n, points)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoDoc {
    pub rho: Value,
    pub a: Value,
    pub lower: PolyDoc,
}

/// A BRK instance: fixed form `g`, plus per `rho` a translation `a` and the
/// lower-order part of `g_rho`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub field: FieldSpec,
    pub n: usize,
    pub ell: u32,
    pub g: PolyDoc,
    pub per_rho: Vec<RhoDoc>,
}

impl InstanceDoc {
    pub fn from_instance(inst: &BrkInstance) -> Self {
        let f = inst.field();
        InstanceDoc {
            field: f.spec(),
            n: inst.dim(),
            ell: inst.ell(),
            g: PolyDoc::from_poly(inst.g()),
            per_rho: f
                .elements()
                .zip(inst.choices())
                .map(|(rho, ch)| RhoDoc {
                    rho: elem_to_json(f, rho),
                    a: point_to_json(f, &ch.a),
                    lower: PolyDoc::from_poly(&ch.lower),
                })
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<BrkInstance> {
        let field = self.field.build()?;
        let g = self.g.to_poly_in(&field)?;
        let q = field.q() as usize;
        if self.per_rho.len() != q {
            return Err(Error::InvalidInstance(format!(
                "per_rho has {} entries, expected {q}",
                self.per_rho.len()
            )));
        }
        let mut slots: Vec<Option<RhoChoice>> = vec![None; q];
        for entry in &self.per_rho {
            let rho = elem_from_json(&field, &entry.rho)?;
            let slot = &mut slots[rho.code() as usize];
            if slot.is_some() {
                return Err(Error::InvalidInstance(format!("rho {} listed twice", entry.rho)));
            }
            *slot = Some(RhoChoice {
                a: point_from_json(&field, &entry.a, self.n)?,
                lower: entry.lower.to_poly_in(&field)?,
            });
        }
        let choices = slots.into_iter().map(|s| s.expect("every rho present")).collect();
        BrkInstance::new(&field, self.n, self.ell, g, choices)
    }
}

/// Parses a document, reporting the source name with serde's line/column.
pub fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::BadDocument(format!("{source}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_encodings() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(elem_to_json(&f5, f5.from_int(3)), serde_json::json!(3));
        assert_eq!(elem_from_json(&f5, &serde_json::json!(4)).unwrap(), f5.from_int(4));
        assert!(elem_from_json(&f5, &serde_json::json!(5)).is_err());
        assert!(elem_from_json(&f5, &serde_json::json!("x")).is_err());

        let f9 = Field::with_order(9).unwrap();
        let t = f9.from_residues(&[0, 1]).unwrap();
        assert_eq!(elem_to_json(&f9, t), serde_json::json!([0, 1]));
        assert_eq!(elem_from_json(&f9, &serde_json::json!([0, 1])).unwrap(), t);
        assert!(elem_from_json(&f9, &serde_json::json!(1)).is_err());
    }

    #[test]
    fn polynomial_document_is_sorted_and_strict() {
        let text = r#"{"field":{"p":3,"m":1},"arity":2,
            "terms":[{"exp":[2,0],"coeff":1},{"exp":[1,1],"coeff":2}]}"#;
        let doc: PolyDoc = parse_doc(text, "inline").unwrap();
        let p = doc.to_poly().unwrap();
        let out = serde_json::to_string(&PolyDoc::from_poly(&p)).unwrap();
        assert_eq!(
            out,
            r#"{"field":{"p":3,"m":1},"arity":2,"terms":[{"exp":[1,1],"coeff":2},{"exp":[2,0],"coeff":1}]}"#
        );
        let dup = r#"{"field":{"p":3,"m":1},"arity":1,"terms":[{"exp":[1],"coeff":1},{"exp":[1],"coeff":1}]}"#;
        assert!(parse_doc::<PolyDoc>(dup, "d").unwrap().to_poly().is_err());
        let err = parse_doc::<PolyDoc>("{\"field\": ", "broken.json").unwrap_err();
        assert!(err.to_string().contains("broken.json"));
        assert!(err.to_string().contains("line 1"));
    }
}
