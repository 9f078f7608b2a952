//! Built-in method ids.
//!
//! | id | method |
//! |----|--------|
//! | `lt`, `lt-N` | Lie-Trotter |
//! | `strang`, `strang-N` | Strang |
//! | `clt2`, `clt2-conj` | complex Lie-Trotter pair |
//! | `clt3`, `cstrang3` | third-order conjugate compositions |
//! | `clt-pP`, `cstrang-pP` | composition chains up to order `P` in 3..=6 |
//! | `family2(b)` | two-split family, `b` real or `re+imi` |
//!
//! Ids without an explicit `-N` take the operator count of the problem.

use nsplit::splitting::{clt2, compose, composition_sigma, lie_trotter, strang, two_split_family};
use nsplit::{Complex, Table};

use crate::error::{HarnessError, Result};

pub const BUILTIN_IDS: &[&str] = &[
    "lt",
    "strang",
    "clt2",
    "clt2-conj",
    "clt3",
    "cstrang3",
    "clt-p4",
    "clt-p5",
    "clt-p6",
    "cstrang-p4",
    "cstrang-p5",
    "cstrang-p6",
    "family2(0.5)",
];

fn chain(base: Table, target: u32) -> Result<Table> {
    let mut t = base;
    for p in 3..=target {
        t = compose(&t, &composition_sigma(p)?)?;
    }
    Ok(t)
}

fn parse_count(s: &str, id: &str) -> Result<usize> {
    s.parse().map_err(|_| HarnessError::UnknownMethod(id.to_string()))
}

/// Parses `0.5`, `-1.2e-1`, `0.3+0.2i`, `0.5-0.5i`, `2i`.
pub fn parse_complex(s: &str) -> Option<Complex<f64>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (body[..k].parse().ok()?, &body[k..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse().ok()?,
        };
        Some(Complex::new(re, im))
    } else {
        s.parse().ok().map(|re| Complex::new(re, 0.0))
    }
}

/// Builds the table named by `id` for a problem with `n` operators.
pub fn build(id: &str, n: usize) -> Result<Table> {
    let unknown = || HarnessError::UnknownMethod(id.to_string());
    let id = id.trim();
    if let Some(arg) = id.strip_prefix("family2(").and_then(|r| r.strip_suffix(')')) {
        let b = parse_complex(arg).ok_or_else(unknown)?;
        return Ok(two_split_family(b)?.renamed(format!("family2({arg})")));
    }
    let (head, count) = match id.rsplit_once('-') {
        Some((h, c)) if c.chars().all(|ch| ch.is_ascii_digit()) && !c.is_empty() => (h, Some(parse_count(c, id)?)),
        _ => (id, None),
    };
    let n = count.unwrap_or(n);
    let table = match head {
        "lt" => lie_trotter(n)?,
        "strang" => strang(n)?,
        "clt2" => clt2(n, false)?,
        "clt2-conj" => clt2(n, true)?,
        "clt3" => nsplit::splitting::clt3(n)?,
        "cstrang3" => nsplit::splitting::cstrang3(n)?,
        _ => {
            let (base, p) = if let Some(p) = head.strip_prefix("clt-p") {
                (clt2(n, false)?, p)
            } else if let Some(p) = head.strip_prefix("cstrang-p") {
                (strang(n)?, p)
            } else {
                return Err(unknown());
            };
            let p: u32 = p.parse().map_err(|_| unknown())?;
            chain(base, p)?.renamed(head.to_string())
        }
    };
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub name: String,
    pub n_operators: usize,
    pub design_order: u32,
    pub stages: usize,
    pub positive_real: bool,
}

/// Every built-in id instantiated for `n` operators. Ids that do not apply
/// to `n` (the two-split family for `n != 2`) are skipped.
pub fn listing(n: usize) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for id in BUILTIN_IDS {
        if id.starts_with("family2") && n != 2 {
            continue;
        }
        let t = build(id, n)?;
        out.push(CatalogEntry {
            id: id.to_string(),
            name: t.name().to_string(),
            n_operators: t.n_operators(),
            design_order: t.design_order(),
            stages: t.n_stages(),
            positive_real: t.has_positive_real_parts(),
        });
    }
    Ok(out)
}

pub fn format_listing(entries: &[CatalogEntry]) -> String {
    let mut s = format!(
        "{:<14} {:<14} {:>5} {:>6} {:>13}\n",
        "id", "name", "order", "stages", "positive-real"
    );
    for e in entries {
        s.push_str(&format!(
            "{:<14} {:<14} {:>5} {:>6} {:>13}\n",
            e.id, e.name, e.design_order, e.stages, e.positive_real
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5"), Some(Complex::new(0.5, 0.0)));
        assert_eq!(parse_complex("0.3+0.2i"), Some(Complex::new(0.3, 0.2)));
        assert_eq!(parse_complex("0.5-0.5i"), Some(Complex::new(0.5, -0.5)));
        assert_eq!(parse_complex("-2i"), Some(Complex::new(0.0, -2.0)));
        assert_eq!(parse_complex("1e-1-1e-2i"), Some(Complex::new(0.1, -0.01)));
        assert_eq!(parse_complex("i"), Some(Complex::new(0.0, 1.0)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn catalog_examples() {
        let entries = listing(4).unwrap();
        let get = |id: &str| entries.iter().find(|e| e.id == id).unwrap().clone();
        let clt3 = get("clt3");
        assert_eq!((clt3.stages, clt3.design_order, clt3.positive_real), (4, 3, true));
        assert_eq!(get("cstrang3").stages, 7);
        let lt3 = build("lt-3", 4).unwrap();
        assert_eq!((lt3.n_stages(), lt3.design_order(), lt3.n_operators()), (1, 1, 3));
        assert!(!entries.iter().any(|e| e.id.starts_with("family2")));
        assert!(listing(2).unwrap().iter().any(|e| e.id.starts_with("family2")));
    }

    #[test]
    fn chains() {
        for p in 4..=6 {
            let t = build(&format!("cstrang-p{p}"), 3).unwrap();
            assert_eq!(t.design_order(), p);
            assert!(t.has_positive_real_parts());
        }
        // the chain started from CLT2 turns a real part negative at order 4
        assert!(!build("clt-p4", 3).unwrap().has_positive_real_parts());
    }

    #[test]
    fn unknown_ids() {
        for id in ["rk4", "clt-p7", "strang-x", "family2(q)", "clt-p"] {
            assert!(build(id, 3).is_err(), "{id}");
        }
        assert!(matches!(build("nope", 3), Err(HarnessError::UnknownMethod(_))));
        assert!(build("family2(1)", 2).is_err());
    }
}
