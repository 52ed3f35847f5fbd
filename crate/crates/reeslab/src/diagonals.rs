//! Diagonal subalgebras k[(I^e)_c] = ⊕_s (I^{es})_{cs} of a Rees algebra: Hilbert functions,
//! dimension, and numeric Cohen–Macaulay / Gorenstein criteria.
//!
//! Every criterion here is integer arithmetic on invariants supplied by the caller or read
//! off earlier computations; the only algebraic input is the bigraded Rees series.

use crate::betti::BettiTable;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::hilbert::HilbertSeries;
use crate::poly::MultiDegree;
use crate::rees::{bigraded_hilbert_series_rees, rees_presentation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt;

/// The (c, e)-diagonal {(cs, es) : s ∈ Z}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalSpec {
    pub c: i64,
    pub e: i64,
}

impl DiagonalSpec {
    pub fn new(c: i64, e: i64) -> Result<Self> {
        if c < 1 || e < 1 {
            return Err(Error::InvalidInput(format!("diagonal ({c},{e}) needs positive c and e")));
        }
        Ok(DiagonalSpec { c, e })
    }

    /// c ≥ de + 1, with d the maximal generator degree.
    pub fn admissible(&self, d: i64) -> bool {
        self.c > d * self.e
    }

    fn require_admissible(&self, d: i64) -> Result<()> {
        if self.admissible(d) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("diagonal ({},{}) is not admissible: need c ≥ {}", self.c, self.e, d * self.e + 1)))
        }
    }
}

impl fmt::Display for DiagonalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c, self.e)
    }
}

/// Outcome of a numeric criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// A sufficient-only criterion did not apply; nothing is concluded.
    Inconclusive,
    NeedsInput(Vec<String>),
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NeedsInput(_) => "needs-input",
        }
    }
}

/// A criterion evaluated on one diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalReport {
    pub criterion: String,
    pub diagonal: DiagonalSpec,
    pub inputs: Value,
    pub verdict: Verdict,
    /// the criterion is sufficient but not necessary
    pub sufficient_only: bool,
    pub a_invariant: Option<i64>,
    pub assumptions: Vec<String>,
}

impl DiagonalReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "criterion": self.criterion,
            "diagonal": [self.diagonal.c, self.diagonal.e],
            "inputs": self.inputs,
            "verdict": self.verdict.as_str(),
            "sufficient_only": self.sufficient_only,
            "a_invariant": self.a_invariant,
            "assumptions": self.assumptions,
        });
        if let Verdict::NeedsInput(m) = &self.verdict {
            v["missing"] = json!(m);
        }
        v
    }
}

// ---------------------------------------------------------------------------------------
// Hilbert function and dimension

/// dim_k (I^{es})_{cs} for s = 0..=s_max read off a bigraded Rees series
/// (deg X_i = (1,0), deg Y_j = (d_j, 1)).
pub fn diagonal_hilbert_function_from_series(series: &HilbertSeries, delta: DiagonalSpec, s_max: i64) -> Vec<BigInt> {
    let table = series.function_table(delta.c * s_max, delta.e * s_max);
    (0..=s_max).map(|s| table[(delta.c * s) as usize][(delta.e * s) as usize].clone()).collect()
}

fn max_generator_degree(i: &Ideal) -> Result<i64> {
    let min = i.minimalize();
    if min.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    Ok(min.generator_degrees()?.iter().map(|d| d.d1).max().unwrap_or(0))
}

/// Hilbert function of k[(I^e)_c] for s = 0..=s_max.
pub fn diagonal_hilbert_function(i: &Ideal, delta: DiagonalSpec, s_max: i64) -> Result<Vec<BigInt>> {
    let d = max_generator_degree(i)?;
    delta.require_admissible(d)?;
    if i.is_unit() {
        let n = i.ring.nvars() as i64;
        return Ok((0..=s_max).map(|s| crate::arith::binomial(delta.c * s + n - 1, n - 1)).collect());
    }
    let p = rees_presentation(i)?;
    let series = bigraded_hilbert_series_rees(&p)?;
    Ok(diagonal_hilbert_function_from_series(&series, delta, s_max))
}

/// Dimension of a diagonal together with the growth-degree cross-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalDimension {
    /// dim R_A(I) − 1
    pub dimension: usize,
    /// 1 + degree of the polynomial the Hilbert function settles on
    pub from_growth: usize,
    pub samples: Vec<BigInt>,
}

impl DiagonalDimension {
    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dimension,
            "from_growth": self.from_growth,
            "samples": self.samples.iter().map(crate::arith::bigint_json).collect::<Vec<_>>(),
        })
    }
}

/// Degree of the polynomial a sequence eventually agrees with: the least k such that the
/// (k+1)-th differences vanish on the last `tail` entries.
fn growth_degree(values: &[BigInt], tail: usize) -> Option<usize> {
    let mut row: Vec<BigInt> = values.to_vec();
    for k in 0..values.len() {
        let next: Vec<BigInt> = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        if next.len() < tail {
            return None;
        }
        if next[next.len() - tail..].iter().all(|x| x.is_zero()) {
            return Some(k);
        }
        row = next;
    }
    None
}

/// dim k[(I^e)_c] = dim R_A(I) − 1, cross-checked against the growth of its Hilbert function.
pub fn diagonal_dimension(i: &Ideal, delta: DiagonalSpec, s_max: i64) -> Result<DiagonalDimension> {
    let d = max_generator_degree(i)?;
    delta.require_admissible(d)?;
    let p = rees_presentation(i)?;
    if !p.check_dimension()? {
        return Err(Error::Validation("dim R_A(I) ≠ dim A + 1: I lies in an associated prime of A".into()));
    }
    let series = bigraded_hilbert_series_rees(&p)?;
    let dimension = series.dimension().ok_or_else(|| Error::Validation("zero Rees series".into()))? - 1;
    let samples = diagonal_hilbert_function_from_series(&series, delta, s_max);
    let deg = growth_degree(&samples[1..], 2).ok_or_else(|| Error::Window(format!("Hilbert function not yet polynomial on s ≤ {s_max}")))?;
    if deg + 1 != dimension {
        return Err(Error::Validation(format!("growth degree {deg} disagrees with dimension {dimension}")));
    }
    Ok(DiagonalDimension { dimension, from_growth: deg + 1, samples })
}

// ---------------------------------------------------------------------------------------
// Gorenstein diagonals

/// Inputs for the Gorenstein-diagonal rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GorensteinFamily {
    /// S = k[X_1..X_n; Y_1..Y_r], deg Y_j = (d_j, 1): Gorenstein iff r/e = (n+u)/c = l ∈ Z.
    PolynomialRing { n: i64, degrees: Vec<i64> },
    /// I of height h in k[X_1..X_n], equigenerated in degree d, with Gorenstein form ring and
    /// a = −a²(G): quasi-Gorenstein iff n/c = (a−1)/e = l₀ ∈ Z.
    GorensteinFormRing { n: i64, d: i64, height: i64, a: Option<i64> },
    /// Complete intersection of r < n forms: Gorenstein iff n/c = (r−1)/e = l₀ ∈ Z.
    CompleteIntersection { n: i64, degrees: Vec<i64> },
    /// Maximal minors of a generic rows × cols matrix (rows ≥ cols).
    MaximalMinors { rows: i64, cols: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinDiagonals {
    pub family: String,
    /// (diagonal, a-invariant of the diagonal)
    pub diagonals: Vec<(DiagonalSpec, i64)>,
    /// "Gorenstein" or "quasi-Gorenstein"
    pub property: String,
    pub sufficient_only: bool,
    pub assumptions: Vec<String>,
}

impl GorensteinDiagonals {
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "property": self.property,
            "diagonals": self.diagonals.iter().map(|(s, a)| json!({"c": s.c, "e": s.e, "a_invariant": a})).collect::<Vec<_>>(),
            "sufficient_only": self.sufficient_only,
            "assumptions": self.assumptions,
        })
    }
}

/// (c, e) = (p/l, q/l) over positive common divisors l of p and q, with a = −l.
fn ratio_solutions(p: i64, q: i64, d: i64) -> Vec<(DiagonalSpec, i64)> {
    if p <= 0 || q <= 0 {
        return vec![];
    }
    let g = p.gcd(&q);
    let mut out: Vec<(DiagonalSpec, i64)> = (1..=g)
        .filter(|l| g % l == 0)
        .map(|l| (DiagonalSpec { c: p / l, e: q / l }, -l))
        .filter(|(s, _)| s.admissible(d))
        .collect();
    out.sort();
    out
}

pub fn gorenstein_diagonals(family: &GorensteinFamily) -> Result<GorensteinDiagonals> {
    let pos = |x: i64, what: &str| if x > 0 { Ok(()) } else { Err(Error::InvalidInput(format!("{what} must be positive"))) };
    match family {
        GorensteinFamily::PolynomialRing { n, degrees } => {
            pos(*n, "n")?;
            if degrees.is_empty() || degrees.iter().any(|&d| d < 1) {
                return Err(Error::InvalidInput("generator degrees must be positive".into()));
            }
            let (r, u, d) = (degrees.len() as i64, degrees.iter().sum::<i64>(), *degrees.iter().max().unwrap());
            Ok(GorensteinDiagonals {
                family: "polynomial-ring".into(),
                diagonals: ratio_solutions(n + u, r, d),
                property: "Gorenstein".into(),
                sufficient_only: false,
                assumptions: vec!["r/e = (n+u)/c = l ∈ Z, a = −l".into()],
            })
        }
        GorensteinFamily::GorensteinFormRing { n, d, height, a } => {
            pos(*n, "n")?;
            pos(*d, "d")?;
            let Some(a) = a else {
                return Err(Error::NeedsInput(vec!["a = -a2(G)".into()]));
            };
            if *height < 2 {
                return Err(Error::Unsupported("the criterion needs ht(I) ≥ 2".into()));
            }
            let mut assumptions = vec!["G_A(I) Gorenstein, a = −a²(G); n/c = (a−1)/e = l₀ ∈ Z".into()];
            let sufficient_only = *height >= *n;
            if sufficient_only {
                assumptions.push("dim A/I = 0: the condition is sufficient but not necessary".into());
            }
            Ok(GorensteinDiagonals {
                family: "general-G-Gorenstein".into(),
                diagonals: ratio_solutions(*n, a - 1, *d),
                property: "quasi-Gorenstein".into(),
                sufficient_only,
                assumptions,
            })
        }
        GorensteinFamily::CompleteIntersection { n, degrees } => {
            pos(*n, "n")?;
            let r = degrees.len() as i64;
            if r < 1 || degrees.iter().any(|&d| d < 1) {
                return Err(Error::InvalidInput("generator degrees must be positive".into()));
            }
            if r >= *n {
                return Err(Error::Unsupported("complete-intersection rule needs r < n".into()));
            }
            let d = *degrees.iter().max().unwrap();
            Ok(GorensteinDiagonals {
                family: "complete-intersection".into(),
                diagonals: ratio_solutions(*n, r - 1, d),
                property: "Gorenstein".into(),
                sufficient_only: false,
                assumptions: vec!["a²(G) = −r; n/c = (r−1)/e = l₀ ∈ Z".into()],
            })
        }
        GorensteinFamily::MaximalMinors { rows, cols } => {
            pos(*cols, "cols")?;
            if rows < cols {
                return Err(Error::InvalidInput("maximal minors need rows ≥ cols".into()));
            }
            let nvars = rows * cols;
            if rows == cols {
                // principal ideal: the Rees algebra is a polynomial ring
                let mut out = gorenstein_diagonals(&GorensteinFamily::PolynomialRing { n: nvars, degrees: vec![*cols] })?;
                out.family = "maximal-minors".into();
                out.assumptions.push("square matrix: I = (det) is principal".into());
                return Ok(out);
            }
            Ok(GorensteinDiagonals {
                family: "maximal-minors".into(),
                diagonals: ratio_solutions(nvars, rows - cols, *cols),
                property: "Gorenstein".into(),
                sufficient_only: false,
                assumptions: vec!["Cohen–Macaulay Rees algebra, Gorenstein form ring, a²(G) = −(rows−cols+1)".into()],
            })
        }
    }
}

/// Candidates allowed by the necessary conditions e ≤ a−1, c ≤ n (and ⌈a/e⌉ − 1 = n/c when
/// dim A/I > 0), for a = −a²(G) with ht(I) ≥ 2 and a Cohen–Macaulay Rees algebra.
pub fn quasi_gorenstein_bounds(a: i64, n: i64, dim_positive: bool) -> Vec<DiagonalSpec> {
    let mut out = Vec::new();
    for e in 1..a {
        for c in 1..=n {
            if dim_positive {
                let ceil = (a + e - 1) / e;
                if n % c != 0 || ceil - 1 != n / c {
                    continue;
                }
            }
            out.push(DiagonalSpec { c, e });
        }
    }
    out
}

// ---------------------------------------------------------------------------------------
// Cohen–Macaulay diagonals

/// Inputs for the closed Cohen–Macaulay inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CmFamily {
    /// Complete intersection in a CM ring with a-invariant a(A) (−n for k[X_1..X_n]):
    /// CM iff c > (e−1)d + u + a(A).
    CompleteIntersection { degrees: Vec<i64>, a_ring: i64 },
    /// Equimultiple of height h > 1, equigenerated in degree d, CM Rees algebra:
    /// CM iff c > d(e−1) + a(A/I).
    Equimultiple { d: i64, height: i64, a_quotient: Option<i64> },
    /// Strongly Cohen–Macaulay with μ(I_p) ≤ ht p: CM if c > d(e−1) + d_1 + … + d_h − n.
    StronglyCm { degrees: Vec<i64>, height: i64, n: i64 },
}

pub fn cm_diagonal_test(family: &CmFamily, delta: DiagonalSpec) -> Result<DiagonalReport> {
    let (c, e) = (delta.c, delta.e);
    let report = |criterion: &str, inputs: Value, bound: i64, sufficient_only: bool, assumptions: Vec<String>| {
        let verdict = match (c > bound, sufficient_only) {
            (true, _) => Verdict::Holds,
            (false, false) => Verdict::Fails,
            (false, true) => Verdict::Inconclusive,
        };
        DiagonalReport {
            criterion: criterion.into(),
            diagonal: delta,
            inputs,
            verdict,
            sufficient_only,
            a_invariant: None,
            assumptions: [assumptions, vec![format!("Cohen–Macaulay when c > {bound}")]].concat(),
        }
    };
    match family {
        CmFamily::CompleteIntersection { degrees, a_ring } => {
            let d = *degrees.iter().max().ok_or_else(|| Error::InvalidInput("no generator degrees".into()))?;
            delta.require_admissible(d)?;
            let u: i64 = degrees.iter().sum();
            Ok(report(
                "cm/complete-intersection",
                json!({"degrees": degrees, "u": u, "d": d, "a(A)": a_ring}),
                (e - 1) * d + u + a_ring,
                false,
                vec!["I is a complete intersection in a Cohen–Macaulay ring".into()],
            ))
        }
        CmFamily::Equimultiple { d, height, a_quotient } => {
            delta.require_admissible(*d)?;
            let Some(aq) = a_quotient else {
                return Ok(DiagonalReport {
                    criterion: "cm/equimultiple".into(),
                    diagonal: delta,
                    inputs: json!({"d": d, "h": height}),
                    verdict: Verdict::NeedsInput(vec!["a(A/I)".into()]),
                    sufficient_only: false,
                    a_invariant: None,
                    assumptions: vec![],
                });
            };
            if *height <= 1 {
                return Err(Error::Unsupported("equimultiple rule needs height > 1".into()));
            }
            Ok(report(
                "cm/equimultiple",
                json!({"d": d, "h": height, "a(A/I)": aq}),
                d * (e - 1) + aq,
                false,
                vec!["equimultiple, equigenerated, Cohen–Macaulay Rees algebra".into()],
            ))
        }
        CmFamily::StronglyCm { degrees, height, n } => {
            let mut ds = degrees.clone();
            ds.sort_unstable_by(|a, b| b.cmp(a));
            let d = *ds.first().ok_or_else(|| Error::InvalidInput("no generator degrees".into()))?;
            if *height < 1 || *height as usize > ds.len() {
                return Err(Error::InvalidInput("height must lie between 1 and the number of generators".into()));
            }
            delta.require_admissible(d)?;
            let top: i64 = ds[..*height as usize].iter().sum();
            Ok(report(
                "cm/strongly-cohen-macaulay",
                json!({"degrees": degrees, "h": height, "n": n}),
                d * (e - 1) + top - n,
                true,
                vec!["strongly Cohen–Macaulay with μ(I_p) ≤ ht(p) for primes p ⊇ I".into()],
            ))
        }
    }
}

/// Routes to α such that k[(I^e)_c] is CM for all c > de + α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaInputs {
    /// Gorenstein form ring: α = d(−a²(G) − 1) − n.
    GorensteinFormRing { d: i64, n: i64, a2_g: i64 },
    /// Known a¹(R^φ) (for instance max_e a*(I^e) − de from Betti tables): α = a¹(R^φ).
    A1 { a1: i64 },
    /// Generic maximal minors of a d-column matrix: α = −d².
    MaximalMinors { d: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaReport {
    pub alpha: i64,
    /// max(α, 0): the statement is made for α ≥ 0
    pub effective: i64,
    /// α ≤ 0: every admissible diagonal c ≥ de + 1 is Cohen–Macaulay
    pub all_diagonals_cm: bool,
    pub route: String,
}

impl AlphaReport {
    pub fn to_json(&self) -> Value {
        json!({"alpha": self.alpha, "effective": self.effective, "all_diagonals_cm": self.all_diagonals_cm, "route": self.route})
    }
}

pub fn cm_threshold_alpha(inputs: &AlphaInputs) -> AlphaReport {
    let (alpha, route) = match inputs {
        AlphaInputs::GorensteinFormRing { d, n, a2_g } => (d * (-a2_g - 1) - n, "Gorenstein form ring: d(-a2(G)-1) - n"),
        AlphaInputs::A1 { a1 } => (*a1, "a1 of the Rees algebra regraded by d"),
        AlphaInputs::MaximalMinors { d } => (-d * d, "maximal minors: a*(I^e) <= de - d^2"),
    };
    AlphaReport { alpha, effective: alpha.max(0), all_diagonals_cm: alpha <= 0, route: route.into() }
}

/// −a²(G) ≤ n/d + 1: all diagonals of an equigenerated ideal with Gorenstein form ring are CM.
pub fn all_diagonals_cm_gorenstein(d: i64, n: i64, a2_g: i64) -> bool {
    d * (-a2_g) <= n + d
}

// ---------------------------------------------------------------------------------------
// Good resolutions

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftClass {
    pub p: usize,
    /// shift (a, b): the summand S(a, b)
    pub shift: (i64, i64),
    /// which of the three conditions holds (1, 2 or 3), if any
    pub condition: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodResolutionReport {
    pub shifts: Vec<ShiftClass>,
    pub good: bool,
}

impl GoodResolutionReport {
    pub fn offending(&self) -> Vec<&ShiftClass> {
        self.shifts.iter().filter(|s| s.condition.is_none()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "good": self.good,
            "shifts": self.shifts.iter().map(|s| json!({"p": s.p, "shift": [s.shift.0, s.shift.1], "condition": s.condition})).collect::<Vec<_>>(),
            "offending": self.offending().iter().map(|s| json!([s.shift.0, s.shift.1])).collect::<Vec<_>>(),
        })
    }
}

/// S(a, b)_Δ is CM for c ≫ e ≫ 0 iff (1) b ≤ −r and (b+r)d − u − a > 0, (2) −r < b < 0, or
/// (3) b ≥ 0 and bd − a − n < 0.
pub fn classify_shift(a: i64, b: i64, n: i64, r: i64, d: i64, u: i64) -> Option<u8> {
    if b <= -r && (b + r) * d - u - a > 0 {
        Some(1)
    } else if -r < b && b < 0 {
        Some(2)
    } else if b >= 0 && b * d - a - n < 0 {
        Some(3)
    } else {
        None
    }
}

/// Classify every shift of a complete bigraded resolution of R_A(I) over S.
pub fn good_resolution_check(b: &BettiTable, n: i64, r: i64, d: i64, u: i64) -> Result<GoodResolutionReport> {
    if b.truncated() {
        return Err(Error::Truncated(b.label.clone()));
    }
    if !b.ring.is_bigraded() {
        return Err(Error::InvalidInput("a bigraded table is required".into()));
    }
    let shifts: Vec<ShiftClass> = b
        .entries
        .keys()
        .map(|&(p, deg): &(usize, MultiDegree)| {
            let (a, bb) = (-deg.d1, -deg.d2);
            ShiftClass { p, shift: (a, bb), condition: classify_shift(a, bb, n, r, d, u) }
        })
        .collect();
    let good = shifts.iter().all(|s| s.condition.is_some());
    Ok(GoodResolutionReport { shifts, good })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;
    use crate::linalg::LinearSpan;
    use crate::poly::{monomials_of_degree, Polynomial};
    use crate::RingSpec;
    use proptest::prelude::*;

    fn cubic() -> Ideal {
        let r = RingSpec::polynomial_ring(4);
        Ideal::parse(&r, &["X1*X4 - X2*X3", "X2^2 - X1*X3", "X3^2 - X2*X4"]).unwrap()
    }

    fn dspec(c: i64, e: i64) -> DiagonalSpec {
        DiagonalSpec::new(c, e).unwrap()
    }

    #[test]
    fn twisted_cubic_diagonal_hilbert_function() {
        let h = diagonal_hilbert_function(&cubic(), dspec(5, 2), 2).unwrap();
        assert_eq!(h[0], BigInt::from(1));
        assert_eq!(h[1], BigInt::from(18));
        assert!(diagonal_hilbert_function(&cubic(), dspec(4, 2), 1).is_err());
    }

    #[test]
    fn unit_ideal_diagonal() {
        let r = RingSpec::standard(Field::Rational, &["X", "Y", "Z"]);
        let h = diagonal_hilbert_function(&Ideal::unit(&r), dspec(2, 3), 3).unwrap();
        let expect: Vec<BigInt> = (0..=3).map(|s| crate::arith::binomial(2 * s + 2, 2)).collect();
        assert_eq!(h, expect);
    }

    /// dim of the span of all products (generators)^{es} · monomials of the right degree
    fn brute_force(i: &Ideal, delta: DiagonalSpec, s: i64) -> usize {
        let ring = &i.ring;
        let mut prods = vec![Polynomial::one(ring)];
        for _ in 0..delta.e * s {
            prods = prods.iter().flat_map(|p| i.gens.iter().map(move |g| p.mul(g))).collect();
        }
        let mut span = LinearSpan::new(ring);
        for p in prods {
            let deg = p.lead_degree().map_or(0, |d| d.d1);
            let rest = delta.c * s - deg;
            if rest < 0 {
                continue;
            }
            for m in monomials_of_degree(ring, MultiDegree::new(rest, 0)) {
                span.insert(p.mul_term(&ring.field.one(), &m));
            }
        }
        span.dim()
    }

    #[test]
    fn diagonal_matches_span_oracle() {
        let r = RingSpec::standard(Field::Rational, &["X", "Y", "Z"]);
        let i = Ideal::parse(&r, &["X^2", "X*Y + Z^2"]).unwrap();
        for delta in [dspec(3, 1), dspec(5, 2)] {
            let h = diagonal_hilbert_function(&i, delta, 3).unwrap();
            for s in 0..=3 {
                assert_eq!(h[s as usize], BigInt::from(brute_force(&i, delta, s)), "{delta} s={s}");
            }
        }
    }

    #[test]
    fn diagonal_dimensions() {
        let d = diagonal_dimension(&cubic(), dspec(3, 1), 8).unwrap();
        assert_eq!((d.dimension, d.from_growth), (4, 4));
        let r = RingSpec::standard(Field::Rational, &["X1", "X2"]);
        let p = Ideal::parse(&r, &["X1^2 + X2^2"]).unwrap();
        assert_eq!(diagonal_dimension(&p, dspec(3, 1), 8).unwrap().dimension, 2);
    }

    #[test]
    fn gorenstein_rules() {
        let mm = gorenstein_diagonals(&GorensteinFamily::MaximalMinors { rows: 3, cols: 2 }).unwrap();
        assert_eq!(mm.diagonals, vec![(dspec(6, 1), -1)]);
        let dp = gorenstein_diagonals(&GorensteinFamily::GorensteinFormRing { n: 3, d: 2, height: 2, a: Some(2) }).unwrap();
        assert_eq!(dp.diagonals, vec![(dspec(3, 1), -1)]);
        let ci = gorenstein_diagonals(&GorensteinFamily::CompleteIntersection { n: 4, degrees: vec![1, 1, 1] }).unwrap();
        assert_eq!(ci.diagonals, vec![(dspec(2, 1), -2), (dspec(4, 2), -1)]);
        let pr = gorenstein_diagonals(&GorensteinFamily::PolynomialRing { n: 3, degrees: vec![2] }).unwrap();
        assert_eq!(pr.diagonals, vec![(dspec(5, 1), -1)]);
        assert!(matches!(
            gorenstein_diagonals(&GorensteinFamily::GorensteinFormRing { n: 3, d: 2, height: 2, a: None }),
            Err(Error::NeedsInput(_))
        ));
        let top = gorenstein_diagonals(&GorensteinFamily::GorensteinFormRing { n: 3, d: 1, height: 3, a: Some(3) }).unwrap();
        assert!(top.sufficient_only);
    }

    #[test]
    fn quasi_gorenstein_candidate_sets() {
        assert!(quasi_gorenstein_bounds(1, 5, true).is_empty());
        assert_eq!(quasi_gorenstein_bounds(3, 3, true), vec![dspec(3, 2)]);
        assert_eq!(quasi_gorenstein_bounds(2, 5, true), vec![dspec(5, 1)]);
        assert_eq!(quasi_gorenstein_bounds(3, 2, false).len(), 4);
    }

    #[test]
    fn cm_inequalities() {
        let ci = CmFamily::CompleteIntersection { degrees: vec![3, 3], a_ring: -2 };
        for e in 1..5 {
            assert_eq!(cm_diagonal_test(&ci, dspec(3 * e + 1, e)).unwrap().verdict, Verdict::Fails);
            assert_eq!(cm_diagonal_test(&ci, dspec(3 * e + 2, e)).unwrap().verdict, Verdict::Holds);
        }
        let scm = CmFamily::StronglyCm { degrees: vec![2, 2, 2], height: 2, n: 4 };
        for e in 1..6 {
            let rep = cm_diagonal_test(&scm, dspec(2 * e + 1, e)).unwrap();
            assert!(rep.sufficient_only);
            assert_eq!(rep.verdict, Verdict::Holds);
        }
        let eq = CmFamily::Equimultiple { d: 2, height: 2, a_quotient: Some(1) };
        assert_eq!(cm_diagonal_test(&eq, dspec(5, 2)).unwrap().verdict, Verdict::Holds);
        let missing = CmFamily::Equimultiple { d: 2, height: 2, a_quotient: None };
        assert!(matches!(cm_diagonal_test(&missing, dspec(5, 2)).unwrap().verdict, Verdict::NeedsInput(_)));
    }

    #[test]
    fn alpha_routes() {
        assert_eq!(cm_threshold_alpha(&AlphaInputs::MaximalMinors { d: 3 }).alpha, -9);
        let tc = cm_threshold_alpha(&AlphaInputs::GorensteinFormRing { d: 2, n: 4, a2_g: -2 });
        assert_eq!(tc.alpha, -2);
        assert!(tc.all_diagonals_cm);
        assert_eq!(cm_threshold_alpha(&AlphaInputs::GorensteinFormRing { d: 5, n: 7, a2_g: -1 }).alpha, -7);
        assert!(all_diagonals_cm_gorenstein(2, 4, -2));
    }

    #[test]
    fn shift_conditions() {
        assert_eq!(classify_shift(0, 0, 4, 3, 2, 6), Some(3));
        assert_eq!(classify_shift(-4, 0, 4, 3, 2, 6), None);
        assert_eq!(classify_shift(-3, -1, 4, 3, 2, 6), Some(2));
        assert_eq!(classify_shift(-20, -3, 4, 3, 2, 6), Some(1));
        assert_eq!(classify_shift(-6, -3, 4, 3, 2, 6), None);
    }

    #[test]
    fn twisted_cubic_resolution_is_good() {
        let p = rees_presentation(&cubic()).unwrap();
        let b = crate::betti::bigraded_betti_table(&p, None).unwrap();
        let rep = good_resolution_check(&b, 4, 3, 2, 6).unwrap();
        assert!(rep.good);
        assert!(rep.shifts.iter().any(|s| s.shift == (-3, -1) && s.condition == Some(2)));
        assert!(rep.shifts.iter().any(|s| s.shift == (-6, -2) && s.condition == Some(2)));
    }

    proptest! {
        #[test]
        fn gorenstein_sets_within_necessary_bounds(n in 2i64..12, a in 1i64..10, d in 1i64..4, h in 2i64..6) {
            prop_assume!(h < n);
            let g = gorenstein_diagonals(&GorensteinFamily::GorensteinFormRing { n, d, height: h, a: Some(a) }).unwrap();
            let cands = quasi_gorenstein_bounds(a, n, true);
            for (s, _) in &g.diagonals {
                prop_assert!(cands.contains(s));
            }
        }

        #[test]
        fn ci_gorenstein_implies_cm(n in 2i64..10, degs in proptest::collection::vec(1i64..4, 1..5)) {
            prop_assume!((degs.len() as i64) < n);
            let g = gorenstein_diagonals(&GorensteinFamily::CompleteIntersection { n, degrees: degs.clone() }).unwrap();
            for (s, _) in g.diagonals {
                let rep = cm_diagonal_test(&CmFamily::CompleteIntersection { degrees: degs.clone(), a_ring: -n }, s).unwrap();
                prop_assert_eq!(rep.verdict, Verdict::Holds);
            }
        }
    }
}
