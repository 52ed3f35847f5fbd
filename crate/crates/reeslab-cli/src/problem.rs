//! Line-oriented problem files: one ring and one ideal per file.
//!
//! ```text
//! # twisted cubic
//! field: Q
//! vars: X1 (1,0), X2 (1,0), X3 (1,0), X4 (1,0)
//! order: degrevlex
//! ideal: X1*X3 - X2^2; X1*X4 - X2*X3; X2*X4 - X3^2
//! family: ci, a2G=-2
//! ```

use std::collections::BTreeMap;
use std::fmt;

use reeslab::{parse_polynomial, Field, Ideal, MultiDegree, Polynomial, Ring, RingSpec, TermOrder};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Missing(String),
}

fn at(line: usize, msg: impl Into<String>) -> ProblemError {
    ProblemError::Line { line, msg: msg.into() }
}

/// Structural hints that select closed-form criteria.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyKind {
    /// complete intersection
    Ci,
    Equimultiple,
    /// strongly Cohen–Macaulay
    Scm,
    /// maximal minors of a generic m × n matrix
    MaxMinors(i64, i64),
    /// Gorenstein form ring
    Gorenstein,
    /// the bigraded ring itself is the object (polynomial Rees algebra)
    PolyRing,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Ci => write!(f, "ci"),
            FamilyKind::Equimultiple => write!(f, "equimultiple"),
            FamilyKind::Scm => write!(f, "scm"),
            FamilyKind::MaxMinors(m, n) => write!(f, "maxminors({m},{n})"),
            FamilyKind::Gorenstein => write!(f, "gorenstein"),
            FamilyKind::PolyRing => write!(f, "polyring"),
        }
    }
}

/// Numeric inputs accepted on the `family:` line.
pub const FAMILY_PARAMS: &[(&str, &str)] = &[
    ("a2G", "a²(G), the a-invariant of the form ring in the second degree"),
    ("aA", "a(A), the a-invariant of the ambient ring"),
    ("aQ", "a(A/I)"),
    ("aF", "a(F), the a-invariant of the fiber cone"),
    ("height", "height of I"),
    ("l", "analytic spread of I"),
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Family {
    pub kinds: Vec<FamilyKind>,
    pub params: BTreeMap<String, i64>,
}

impl Family {
    pub fn has(&self, k: &FamilyKind) -> bool {
        self.kinds.contains(k)
    }

    pub fn max_minors(&self) -> Option<(i64, i64)> {
        self.kinds.iter().find_map(|k| match k {
            FamilyKind::MaxMinors(m, n) => Some((*m, *n)),
            _ => None,
        })
    }

    pub fn param(&self, key: &str) -> Option<i64> {
        self.params.get(key).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty() && self.params.is_empty()
    }

    pub fn canonical(&self) -> String {
        let mut parts: Vec<String> = self.kinds.iter().map(|k| k.to_string()).collect();
        parts.extend(self.params.iter().map(|(k, v)| format!("{k}={v}")));
        parts.join(", ")
    }

    /// Parse `ci, maxminors(2,3), a2G=-2`.
    pub fn parse(text: &str) -> Result<Family, String> {
        let mut fam = Family::default();
        for tok in split_top(text) {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            if let Some((k, v)) = tok.split_once('=') {
                let (k, v) = (k.trim(), v.trim());
                if !FAMILY_PARAMS.iter().any(|(name, _)| *name == k) {
                    let known: Vec<&str> = FAMILY_PARAMS.iter().map(|(n, _)| *n).collect();
                    return Err(format!("unknown family parameter {k:?} (expected one of {})", known.join(", ")));
                }
                let v: i64 = v.parse().map_err(|_| format!("family parameter {k} needs an integer, got {v:?}"))?;
                fam.params.insert(k.to_string(), v);
                continue;
            }
            let lower = tok.to_ascii_lowercase();
            let kind = match lower.as_str() {
                "ci" | "complete-intersection" => FamilyKind::Ci,
                "equimultiple" => FamilyKind::Equimultiple,
                "scm" | "strongly-cm" => FamilyKind::Scm,
                "gorenstein" => FamilyKind::Gorenstein,
                "polyring" => FamilyKind::PolyRing,
                s if s.starts_with("maxminors") => {
                    let inner = s["maxminors".len()..]
                        .trim()
                        .strip_prefix('(')
                        .and_then(|r| r.strip_suffix(')'))
                        .ok_or_else(|| format!("expected maxminors(m,n), got {tok:?}"))?;
                    let (m, n) = inner.split_once(',').ok_or_else(|| format!("expected maxminors(m,n), got {tok:?}"))?;
                    let m: i64 = m.trim().parse().map_err(|_| format!("bad matrix size in {tok:?}"))?;
                    let n: i64 = n.trim().parse().map_err(|_| format!("bad matrix size in {tok:?}"))?;
                    if m < 1 || n < 1 {
                        return Err(format!("matrix sizes must be positive in {tok:?}"));
                    }
                    FamilyKind::MaxMinors(m, n)
                }
                _ => return Err(format!("unknown family {tok:?}")),
            };
            if !fam.kinds.contains(&kind) {
                fam.kinds.push(kind);
            }
        }
        fam.kinds.sort();
        Ok(fam)
    }
}

/// Split on commas outside parentheses.
fn split_top(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub ring: Ring,
    pub ideal: Ideal,
    pub family: Family,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, ProblemError> {
        let mut field = None;
        let mut vars: Option<(usize, Vec<(String, MultiDegree)>)> = None;
        let mut order = None;
        let mut ideal_lines: Vec<(usize, String)> = Vec::new();
        let mut family = Family::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once(':').ok_or_else(|| at(line, "expected `key: value`"))?;
            let value = value.trim();
            match key.trim().to_ascii_lowercase().as_str() {
                "field" => {
                    if field.is_some() {
                        return Err(at(line, "field declared twice"));
                    }
                    field = Some(parse_field(value).map_err(|m| at(line, m))?);
                }
                "vars" => {
                    if vars.is_some() {
                        return Err(at(line, "vars declared twice"));
                    }
                    vars = Some((line, parse_vars(value).map_err(|m| at(line, m))?));
                }
                "order" => {
                    if order.is_some() {
                        return Err(at(line, "order declared twice"));
                    }
                    order = Some(TermOrder::parse(value).map_err(|e| at(line, e.to_string()))?);
                }
                "ideal" => ideal_lines.push((line, value.to_string())),
                "family" => {
                    let f = Family::parse(value).map_err(|m| at(line, m))?;
                    family.params.extend(f.params);
                    for k in f.kinds {
                        if !family.kinds.contains(&k) {
                            family.kinds.push(k);
                        }
                    }
                    family.kinds.sort();
                }
                other => return Err(at(line, format!("unknown key {other:?}"))),
            }
        }
        let (vline, vars) = vars.ok_or_else(|| ProblemError::Missing("missing `vars:` line".into()))?;
        let (names, degrees): (Vec<String>, Vec<MultiDegree>) = vars.into_iter().unzip();
        let ring = RingSpec::new(field.unwrap_or(Field::Rational), names, degrees, order.unwrap_or_default())
            .map_err(|e| at(vline, e.to_string()))?;
        let mut gens: Vec<Polynomial> = Vec::new();
        for (line, text) in &ideal_lines {
            for (k, expr) in text.split(';').enumerate() {
                let expr = expr.trim();
                if expr.is_empty() {
                    continue;
                }
                let p = parse_polynomial(expr, &ring).map_err(|e| at(*line, format!("generator {}: {e}", k + 1)))?;
                if !p.is_homogeneous() {
                    return Err(at(*line, format!("generator {} is not homogeneous: {expr}", k + 1)));
                }
                gens.push(p);
            }
        }
        let ideal = Ideal::new(&ring, gens).map_err(|e| ProblemError::Missing(e.to_string()))?;
        Ok(ProblemFile { ring, ideal, family })
    }

    /// Normalized content: parsed generators printed canonically, family sorted.
    pub fn canonical(&self) -> String {
        let field = match self.ring.field {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("Fp:{p}"),
        };
        let vars: Vec<String> =
            self.ring.vars.iter().zip(&self.ring.degrees).map(|(v, d)| format!("{v} ({},{})", d.d1, d.d2)).collect();
        let gens: Vec<String> = self.ideal.gens.iter().map(|g| g.to_string()).collect();
        let mut s = format!("field: {field}\nvars: {}\norder: {}\nideal: {}\n", vars.join(", "), self.ring.order, gens.join("; "));
        if !self.family.is_empty() {
            s.push_str(&format!("family: {}\n", self.family.canonical()));
        }
        s
    }

    pub fn hash(&self) -> String {
        hex_sha256(self.canonical().as_bytes())
    }
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_field(v: &str) -> Result<Field, String> {
    let t = v.trim();
    if t.eq_ignore_ascii_case("Q") || t.eq_ignore_ascii_case("QQ") {
        return Ok(Field::Rational);
    }
    let p = t
        .strip_prefix("Fp:")
        .or_else(|| t.strip_prefix("fp:"))
        .ok_or_else(|| format!("expected Q or Fp:<p>, got {t:?}"))?;
    let p: u32 = p.trim().parse().map_err(|_| format!("bad characteristic {p:?}"))?;
    Ok(Field::Prime(p))
}

/// `X1 (1,0), X2 (1,0), Y1 (2,1)`; a missing degree means (1,0), `(a)` means (a,0).
fn parse_vars(v: &str) -> Result<Vec<(String, MultiDegree)>, String> {
    let mut out = Vec::new();
    for item in split_top(v) {
        let item = item.trim();
        if item.is_empty() {
            return Err("empty variable declaration".into());
        }
        let (name, deg) = match item.find('(') {
            None => (item, MultiDegree::new(1, 0)),
            Some(i) => {
                let inner = item[i + 1..].trim().strip_suffix(')').ok_or_else(|| format!("unclosed degree in {item:?}"))?;
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                let num = |s: &str| s.parse::<i64>().map_err(|_| format!("bad degree in {item:?}"));
                let deg = match parts.as_slice() {
                    [a] => MultiDegree::new(num(a)?, 0),
                    [a, b] => MultiDegree::new(num(a)?, num(b)?),
                    _ => return Err(format!("degree must be (a) or (a,b) in {item:?}")),
                };
                (item[..i].trim(), deg)
            }
        };
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(format!("bad variable name in {item:?}"));
        }
        out.push((name.to_string(), deg));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = "# twisted cubic\nfield: Q\nvars: X1 (1,0), X2 (1,0), X3 (1,0), X4 (1,0)\norder: degrevlex\nideal: X1*X3 - X2^2; X1*X4 - X2*X3; X2*X4 - X3^2\n";

    #[test]
    fn parses_twisted_cubic() {
        let p = ProblemFile::parse(CUBIC).unwrap();
        assert_eq!(p.ring.nvars(), 4);
        assert_eq!(p.ideal.gens.len(), 3);
        assert!(p.family.is_empty());
    }

    #[test]
    fn hash_ignores_layout() {
        let a = ProblemFile::parse(CUBIC).unwrap();
        let b = ProblemFile::parse(
            "vars: X1, X2, X3 (1), X4 (1,0)\n\nideal: -X2^2 + X1*X3\nideal: X1*X4 - X2*X3 ;X2*X4-X3^2 # tail\n",
        )
        .unwrap();
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = ProblemFile::parse("field: Q\nvars: x, y\nideal: x^2; x*)y\n").unwrap_err();
        assert!(matches!(e, ProblemError::Line { line: 3, .. }), "{e}");
        let e = ProblemFile::parse("field: R\nvars: x\n").unwrap_err();
        assert!(matches!(e, ProblemError::Line { line: 1, .. }));
        let e = ProblemFile::parse("vars: x, y\nideal: x^2 + y\n").unwrap_err();
        assert!(e.to_string().contains("not homogeneous"));
        let e = ProblemFile::parse("vars: x\nbogus: 1\n").unwrap_err();
        assert!(matches!(e, ProblemError::Line { line: 2, .. }));
        assert!(ProblemFile::parse("field: Q\n").is_err());
    }

    #[test]
    fn family_line() {
        let f = Family::parse("maxminors(2, 3), ci, a2G=-2, height=2").unwrap();
        assert_eq!(f.max_minors(), Some((2, 3)));
        assert!(f.has(&FamilyKind::Ci));
        assert_eq!(f.param("a2G"), Some(-2));
        assert_eq!(f.canonical(), "ci, maxminors(2,3), a2G=-2, height=2");
        assert!(Family::parse("a2G=x").is_err());
        assert!(Family::parse("bogus").is_err());
        assert!(Family::parse("q=1").is_err());
    }

    #[test]
    fn empty_ideal_and_prime_field() {
        let p = ProblemFile::parse("field: Fp:7\nvars: x, y, z\nideal:\n").unwrap();
        assert!(p.ideal.is_zero());
        assert_eq!(p.ring.field, Field::Prime(7));
        assert!(ProblemFile::parse("field: Fp:8\nvars: x\n").is_err());
    }
}
