//! Text form of method tables.
//!
//! A table is a JSON document with `name`, `n_operators`, `design_order`
//! and `stages`, an s x N array of `[re, im]` pairs. Floating point entries
//! are written as shortest round-trip decimals; exact rationals are written
//! as strings such as `"1/2"`. Both spellings are accepted on input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::splitting::MethodTable;
use num_complex::Complex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Number(f64),
    Text(String),
}

impl ScalarRepr {
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            ScalarRepr::Number(x) => Some(*x),
            ScalarRepr::Text(s) => {
                let s = s.trim();
                match s.split_once('/') {
                    Some((n, d)) => {
                        let n: f64 = n.trim().parse().ok()?;
                        let d: f64 = d.trim().parse().ok()?;
                        Some(n / d)
                    }
                    None => s.parse().ok(),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub name: String,
    pub n_operators: usize,
    /// Order claimed by the writer. Loading recomputes it.
    pub design_order: u32,
    pub stages: Vec<Vec<[ScalarRepr; 2]>>,
}

impl TableDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table documents always serialize")
    }

    /// Rebuilds the table; the design order comes from the order conditions,
    /// not from the document.
    pub fn to_table<T: Scalar>(&self) -> Result<MethodTable<T>> {
        let stages = self
            .stages
            .iter()
            .enumerate()
            .map(|(k, row)| {
                row.iter()
                    .enumerate()
                    .map(|(l, [re, im])| {
                        let parse = |r: &ScalarRepr| {
                            T::from_repr(r).ok_or_else(|| {
                                Error::Document(format!("entry ({}, {}) is not a number: {r:?}", k + 1, l + 1))
                            })
                        };
                        Ok(Complex::new(parse(re)?, parse(im)?))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let table = MethodTable::from_stages(self.name.clone(), stages)?;
        if table.n_operators() != self.n_operators {
            return Err(Error::Document(format!(
                "n_operators says {}, stages have {} columns",
                self.n_operators,
                table.n_operators()
            )));
        }
        Ok(table)
    }
}

impl<T: Scalar> MethodTable<T> {
    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            name: self.name().to_string(),
            n_operators: self.n_operators(),
            design_order: self.design_order(),
            stages: self
                .stages()
                .iter()
                .map(|row| row.iter().map(|z| [z.re.to_repr(), z.im.to_repr()]).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_document().to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::{clt2, clt3, lie_trotter};
    use num_rational::Rational64;

    #[test]
    fn rational_tables_render_as_fractions() {
        let t = clt2::<Rational64>(2, false).unwrap();
        let json = t.to_json();
        assert!(json.contains("\"1/2\""));
        assert!(json.contains("\"-1/2\""));
        let back: MethodTable<Rational64> = TableDocument::from_json(&json).unwrap().to_table().unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn float_tables_round_trip_bitwise() {
        let t = clt3::<f64>(3).unwrap();
        let doc = TableDocument::from_json(&t.to_json()).unwrap();
        assert_eq!(doc.design_order, 3);
        let back: MethodTable<f64> = doc.to_table().unwrap();
        assert_eq!(back.stages(), t.stages());
        // loading recomputes the order; only orders 1 and 2 are checkable here
        assert_eq!(back.design_order(), 2);
    }

    #[test]
    fn fractions_load_into_floats() {
        let text = r#"{"name":"s","n_operators":2,"design_order":7,
            "stages":[[["1/2",0],[1,0]],[["1/2","0"],[0,0]]]}"#;
        let t: MethodTable<f64> = TableDocument::from_json(text).unwrap().to_table().unwrap();
        assert_eq!(t.coefficient(0, 0).re, 0.5);
        assert_eq!(t.design_order(), 2);
    }

    #[test]
    fn claimed_order_is_not_trusted() {
        let mut doc = lie_trotter::<f64>(3).unwrap().to_document();
        doc.design_order = 2;
        assert_eq!(doc.to_table::<f64>().unwrap().design_order(), 1);
    }

    #[test]
    fn malformed_documents_fail() {
        assert!(TableDocument::from_json("{").is_err());
        let text = r#"{"name":"s","n_operators":3,"design_order":1,"stages":[[[1,0],[1,0]]]}"#;
        assert!(TableDocument::from_json(text).unwrap().to_table::<f64>().is_err());
        let text = r#"{"name":"s","n_operators":1,"design_order":1,"stages":[[["x",0]]]}"#;
        assert!(TableDocument::from_json(text).unwrap().to_table::<f64>().is_err());
    }
}
