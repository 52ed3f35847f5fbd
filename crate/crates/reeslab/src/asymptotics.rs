//! Asymptotic behaviour of powers: interpolated Hilbert polynomials, series and resolution
//! templates, mixed multiplicities of the Rees algebra and form ring, and numeric bounds.
//!
//! Every family is fitted exactly on a window of consecutive powers past a threshold c and
//! checked against at least one power that was not used in the fit. The threshold is either
//! supplied (−1 when the Rees algebra is Cohen–Macaulay) or detected by sliding the window
//! until validation succeeds.

use crate::arith::{binomial, Rational};
use crate::betti::{BettiTable, ModuleKind};
use crate::error::{Error, Result};
use crate::hilbert::{HilbertPolynomial, HilbertSeries, Laurent};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

const OPEN_QUESTION: &str =
    "stability was detected past the theoretical candidate c+1; whether it always begins at c+1 is an open question";

/// Exact univariate polynomial in j, stored in the binomial basis C(j, k).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BinomialPoly {
    /// coefficient of C(j, k) at index k; no trailing zeros
    pub coeffs: Vec<Rational>,
}

impl BinomialPoly {
    pub fn zero() -> Self {
        BinomialPoly::default()
    }

    fn trimmed(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BinomialPoly { coeffs }
    }

    /// Interpolant of degree < values.len() through (j0 + i, values[i]).
    pub fn interpolate(j0: i64, values: &[Rational]) -> Self {
        // forward differences give the coefficients of C(j − j0, k)
        let mut diffs = Vec::with_capacity(values.len());
        let mut row = values.to_vec();
        while !row.is_empty() {
            diffs.push(row[0].clone());
            row = row.windows(2).map(|w| w[1].sub(&w[0])).collect();
        }
        // C(j − j0, k) = Σ_m C(j, m) C(−j0, k − m)
        let mut coeffs = vec![Rational::zero(); diffs.len()];
        for (k, v) in diffs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (m, c) in coeffs.iter_mut().enumerate().take(k + 1) {
                let w = binomial(-j0, (k - m) as i64);
                *c = c.add(&v.mul(&Rational::from_bigint(w)));
            }
        }
        Self::trimmed(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of C(j, k).
    pub fn binomial_coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, j: i64) -> Rational {
        self.coeffs.iter().enumerate().fold(Rational::zero(), |acc, (k, c)| acc.add(&c.mul(&Rational::from_bigint(binomial(j, k as i64)))))
    }

    /// Integer-valued on all integers iff every binomial coefficient is an integer.
    pub fn is_integer_valued(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Coefficients of j^i.
    pub fn monomial_coeffs(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            // C(j, k) = Π_{i<k} (j − i)/(i + 1)
            let mut poly = vec![Rational::one()];
            for i in 0..k as i64 {
                let mut next = vec![Rational::zero(); poly.len() + 1];
                let inv = Rational::new(1, i + 1);
                for (e, a) in poly.iter().enumerate() {
                    let a = a.mul(&inv);
                    next[e + 1] = next[e + 1].add(&a);
                    next[e] = next[e].sub(&a.mul(&Rational::from_int(i)));
                }
                poly = next;
            }
            for (e, a) in poly.iter().enumerate() {
                out[e] = out[e].add(&a.mul(c));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "binomial_basis": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "monomial_basis": self.monomial_coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "text": self.to_string(),
        })
    }
}

impl fmt::Display for BinomialPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.monomial_coeffs();
        let mut first = true;
        for (e, c) in m.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = if neg { c.neg() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let coef = if a.is_one() && e > 0 { String::new() } else { a.to_string() };
            match e {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}j")?,
                _ => write!(f, "{coef}j^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Window of consecutive powers used for a fit and the powers held out for validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitWindow {
    /// c: the family is claimed for j ≥ c + 1
    pub threshold: i64,
    pub window: Vec<i64>,
    pub validated: Vec<i64>,
    /// true when the threshold was found by sliding the window
    pub detected: bool,
}

impl FitWindow {
    fn to_json(&self) -> Value {
        json!({"threshold": self.threshold, "window": self.window, "validated": self.validated, "detected": self.detected})
    }
}

/// Fit at a fixed threshold, or slide c = −1, 0, 1, … until a fit validates.
fn fit_with_threshold<T>(
    available: &BTreeSet<i64>,
    width: usize,
    threshold: Option<i64>,
    fit_at: impl Fn(&FitWindow) -> Result<T>,
) -> Result<(T, FitWindow)> {
    let plan = |c: i64, detected: bool| -> Result<FitWindow> {
        let start = c.max(-1) + 1;
        let window: Vec<i64> = (start..start + width as i64).collect();
        if let Some(j) = window.iter().find(|&&j| j != 0 && !available.contains(&j)) {
            return Err(Error::Window(format!("power {j} is needed for the window starting at {start} but was not sampled")));
        }
        let validated: Vec<i64> = available.iter().copied().filter(|&j| j >= start + width as i64).collect();
        if validated.is_empty() && detected {
            return Err(Error::Window(format!("no power beyond the window {start}..{} is available for validation", start + width as i64 - 1)));
        }
        Ok(FitWindow { threshold: c.max(-1), window, validated, detected })
    };
    match threshold {
        Some(c) => {
            let w = plan(c, false)?;
            Ok((fit_at(&w)?, w))
        }
        None => {
            let last = available.iter().copied().max().unwrap_or(0);
            let mut last_err = Error::Window("not enough sampled powers to fit and validate".into());
            for c in -1..last {
                let w = match plan(c, true) {
                    Ok(w) => w,
                    Err(e) => {
                        last_err = e;
                        continue;
                    }
                };
                match fit_at(&w) {
                    Ok(t) => return Ok((t, w)),
                    Err(e) => last_err = e,
                }
            }
            Err(last_err)
        }
    }
}

fn window_notes(w: &FitWindow) -> Vec<String> {
    let mut notes = vec![format!(
        "fitted on j = {:?}, validated on j = {:?}; claimed for j ≥ {} once c bounds a*²(R)",
        w.window,
        w.validated,
        w.threshold + 1
    )];
    if w.detected && w.threshold > -1 {
        notes.push(OPEN_QUESTION.into());
    }
    if w.validated.is_empty() {
        notes.push("no power beyond the window was sampled: the fit is exact interpolation and unvalidated".into());
    }
    notes
}

// ---------------------------------------------------------------------------------------
// Hilbert polynomials of A/I^j

/// Polynomials e_0(j), …, e_{n−h−1}(j) with
/// P_{A/I^j}(s) = Σ_{k=0}^{n−h−1} (−1)^{n−h−1−k} e_{n−h−1−k}(j) C(s+k, k) for j past the threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerPolynomialFamily {
    pub n: usize,
    /// height of I
    pub h: usize,
    /// e[i] = e_i(j)
    pub e: Vec<BinomialPoly>,
    pub fit: FitWindow,
    pub notes: Vec<String>,
}

impl PowerPolynomialFamily {
    /// λ_m = coefficient of C(j, m) in e_{m−h}, for h ≤ m ≤ n − 1.
    pub fn lambda(&self, m: usize) -> Rational {
        if m < self.h || m >= self.n {
            return Rational::zero();
        }
        self.e[m - self.h].binomial_coeff(m)
    }

    /// Predicted Hilbert polynomial of A/I^j (its stabilization degree is not predicted).
    pub fn predict(&self, j: i64) -> HilbertPolynomial {
        let top = self.n - self.h;
        let coeffs: Vec<Rational> = (0..top)
            .map(|k| {
                let i = top - 1 - k;
                let v = self.e[i].eval(j);
                if i % 2 == 0 {
                    v
                } else {
                    v.neg()
                }
            })
            .collect();
        HilbertPolynomial::Graded { coeffs, threshold: 0 }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "h": self.h,
            "e": self.e.iter().enumerate().map(|(i, p)| json!({"index": i, "polynomial": p.to_json()})).collect::<Vec<_>>(),
            "lambda": (self.h..self.n).map(|m| json!({"index": m, "value": self.lambda(m).to_string()})).collect::<Vec<_>>(),
            "fit": self.fit.to_json(),
            "notes": self.notes,
        })
    }
}

/// Binomial-basis coefficients of a graded Hilbert polynomial, padded to `len`.
fn graded_coeffs(p: &HilbertPolynomial, len: usize) -> Result<Vec<Rational>> {
    let HilbertPolynomial::Graded { coeffs, .. } = p else {
        return Err(Error::InvalidInput("expected a singly graded Hilbert polynomial".into()));
    };
    if coeffs.iter().skip(len).any(|c| !c.is_zero()) {
        return Err(Error::Validation(format!("sample has degree ≥ {len}, beyond dim A/I − 1")));
    }
    let mut v: Vec<Rational> = coeffs.iter().take(len).cloned().collect();
    v.resize(len, Rational::zero());
    Ok(v)
}

/// Interpolate e_i(j) from Hilbert polynomials of A/I^j (n variables, I of height h).
/// The j = 0 sample (A/I^0 = 0) is implied when the window reaches 0.
pub fn fit_hilbert_polynomials(
    samples: &BTreeMap<i64, HilbertPolynomial>,
    n: usize,
    h: usize,
    threshold: Option<i64>,
) -> Result<PowerPolynomialFamily> {
    if h > n {
        return Err(Error::InvalidInput(format!("height {h} exceeds the number of variables {n}")));
    }
    let top = n - h;
    let mut data: BTreeMap<i64, Vec<Rational>> = BTreeMap::new();
    for (&j, p) in samples {
        if j < 0 {
            return Err(Error::InvalidInput("powers must be nonnegative".into()));
        }
        data.insert(j, graded_coeffs(p, top)?);
    }
    data.entry(0).or_insert_with(|| vec![Rational::zero(); top]);
    let available: BTreeSet<i64> = samples.keys().copied().collect();
    let fit_at = |w: &FitWindow| -> Result<PowerPolynomialFamily> {
        let e: Vec<BinomialPoly> = (0..top)
            .map(|i| {
                let k = top - 1 - i;
                let vals: Vec<Rational> =
                    w.window.iter().map(|j| if i % 2 == 0 { data[j][k].clone() } else { data[j][k].neg() }).collect();
                BinomialPoly::interpolate(w.window[0], &vals)
            })
            .collect();
        for (i, p) in e.iter().enumerate() {
            if p.degree().is_some_and(|dg| dg > h + i) {
                return Err(Error::Validation(format!("e_{i}(j) has degree {} > {}", p.degree().unwrap(), h + i)));
            }
            if !p.is_integer_valued() {
                return Err(Error::Validation(format!("e_{i}(j) = {p} is not integer-valued")));
            }
        }
        let fam = PowerPolynomialFamily { n, h, e, fit: w.clone(), notes: window_notes(w) };
        for j in &w.validated {
            if graded_coeffs(&fam.predict(*j), top)? != data[j] {
                return Err(Error::Validation(format!("interpolated family disagrees with the sampled power {j}")));
            }
        }
        Ok(fam)
    };
    let (fam, _) = fit_with_threshold(&available, n, threshold, fit_at)?;
    Ok(fam)
}

// ---------------------------------------------------------------------------------------
// Mixed multiplicities

/// Mixed multiplicities e_i(R) (i < n) of the Rees algebra and e_i(G) (i < n − 1) of the form ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMultiplicities {
    pub n: usize,
    pub h: usize,
    pub l: usize,
    pub d: i64,
    pub e_r: Vec<BigInt>,
    pub e_g: Vec<BigInt>,
    pub total_r: BigInt,
    pub total_g: BigInt,
    /// e_i(G) = d·e_{i+1}(R) − e_i(R) for all i
    pub identity_holds: bool,
    /// e(G) = (d−1)e(R) + 1 (− d·e_0(R) when l = n)
    pub totals_formula_holds: bool,
}

impl MixedMultiplicities {
    pub fn to_json(&self) -> Value {
        let s = |v: &[BigInt]| v.iter().map(crate::arith::bigint_json).collect::<Vec<_>>();
        json!({
            "n": self.n, "h": self.h, "l": self.l, "d": self.d,
            "e_R": s(&self.e_r),
            "e_G": s(&self.e_g),
            "e(R)": crate::arith::bigint_json(&self.total_r),
            "e(G)": crate::arith::bigint_json(&self.total_g),
            "identity_e_i(G)=d*e_{i+1}(R)-e_i(R)": self.identity_holds,
            "totals_formula": self.totals_formula_holds,
        })
    }
}

fn to_nonneg_int(v: &Rational, what: &str) -> Result<BigInt> {
    match v.to_integer() {
        Some(x) if x >= BigInt::zero() => Ok(x),
        _ => Err(Error::Validation(format!("{what} = {v} is not a nonnegative integer"))),
    }
}

/// Mixed multiplicities from the leading coefficients λ of an interpolated family, for I
/// equigenerated in degree d with analytic spread l and not primary to the maximal ideal.
pub fn mixed_multiplicities(f: &PowerPolynomialFamily, d: i64, l: usize) -> Result<MixedMultiplicities> {
    let (n, h) = (f.n as i64, f.h as i64);
    if f.h >= f.n {
        return Err(Error::InvalidInput("ideal is primary to the maximal ideal: the relevant dimension of G drops".into()));
    }
    if (l as i64) < h || l as i64 > n {
        return Err(Error::InvalidInput(format!("analytic spread {l} outside [{h}, {n}]")));
    }
    if d < 1 {
        return Err(Error::InvalidInput("generation degree must be positive".into()));
    }
    let li = l as i64;
    let dq = |e: i64| Rational::from_bigint(BigInt::from(d).pow(e as u32));
    let sign = |k: i64| if (n - h - 1 - k) % 2 == 0 { Rational::one() } else { Rational::from_int(-1) };
    let lam = |k: i64| f.lambda((n - k - 1) as usize);
    let sum = |i: i64, top: i64| -> Rational {
        (i..=n - h - 1).fold(Rational::zero(), |acc, k| {
            let b = Rational::from_bigint(binomial(top - i, k - i));
            acc.add(&sign(k).mul(&lam(k)).mul(&dq(k - i)).mul(&b))
        })
    };
    let mut e_r = Vec::new();
    for i in 0..n {
        let v = if i <= n - li - 1 {
            Rational::zero()
        } else if i >= n - h {
            dq(n - 1 - i)
        } else {
            dq(n - 1 - i).sub(&sum(i, n - 1))
        };
        e_r.push(to_nonneg_int(&v, &format!("e_{i}(R)"))?);
    }
    let mut e_g = Vec::new();
    for i in 0..n - 1 {
        let v = if i >= n - h || i <= n - li - 2 { Rational::zero() } else { sum(i, n - 2) };
        e_g.push(to_nonneg_int(&v, &format!("e_{i}(G)"))?);
    }
    let db = BigInt::from(d);
    let identity_holds = (0..(n - 1) as usize).all(|i| e_g[i] == &db * &e_r[i + 1] - &e_r[i]);
    let total_r: BigInt = e_r.iter().sum();
    let total_g: BigInt = e_g.iter().sum();
    let mut expect = (&db - 1) * &total_r + 1;
    if li == n {
        expect -= &db * &e_r[0];
    }
    Ok(MixedMultiplicities {
        n: f.n,
        h: f.h,
        l,
        d,
        totals_formula_holds: expect == total_g,
        e_r,
        e_g,
        total_r,
        total_g,
        identity_holds,
    })
}

// ---------------------------------------------------------------------------------------
// Hilbert series templates

/// H_{I^j}(s)·(1−s)^n = Σ_α P_α(j) s^{α + dj} for I equigenerated in degree d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTemplateFamily {
    pub n: usize,
    pub d: i64,
    pub l: usize,
    /// offset α → P_α(j); only nonzero polynomials
    pub offsets: BTreeMap<i64, BinomialPoly>,
    pub fit: FitWindow,
    pub notes: Vec<String>,
}

impl SeriesTemplateFamily {
    pub fn numerator(&self, j: i64) -> Laurent {
        let mut num = Laurent::zero();
        for (&a, p) in &self.offsets {
            let v = p.eval(j);
            let v = v.to_integer().expect("templates are integer-valued on validated powers");
            num.add_term(v, a + self.d * j, 0);
        }
        num
    }

    /// Predicted Hilbert series of the ideal I^j.
    pub fn predict(&self, j: i64) -> HilbertSeries {
        HilbertSeries::new(self.numerator(j), vec![(1, 0); self.n])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "d": self.d,
            "l": self.l,
            "offsets": self.offsets.iter().map(|(a, p)| json!({"alpha": a, "polynomial": p.to_json()})).collect::<Vec<_>>(),
            "fit": self.fit.to_json(),
            "notes": self.notes,
        })
    }
}

/// Numerator of a singly graded series over the denominator (1−s)^n.
fn numerator_over(series: &HilbertSeries, n: usize) -> Result<Laurent> {
    if series.is_bigraded() || series.den.iter().any(|&f| f != (1, 0)) {
        return Err(Error::InvalidInput("series must be singly graded over a standard graded ring".into()));
    }
    let mut num = series.num.clone();
    for _ in series.den.len()..n {
        num = num.mul_one_minus(1, 0);
    }
    Ok(num)
}

/// Fit P_α(j) (degree ≤ l − 1) from Hilbert series of the ideals I^j.
pub fn fit_hilbert_series(
    samples: &BTreeMap<i64, HilbertSeries>,
    d: i64,
    l: usize,
    threshold: Option<i64>,
) -> Result<SeriesTemplateFamily> {
    if l == 0 {
        return Err(Error::InvalidInput("analytic spread must be positive".into()));
    }
    let n = samples.values().map(|s| s.den.len()).max().ok_or_else(|| Error::Window("no samples".into()))?;
    let mut data: BTreeMap<i64, Laurent> = BTreeMap::new();
    for (&j, s) in samples {
        data.insert(j, numerator_over(s, n)?);
    }
    data.entry(0).or_insert_with(Laurent::one);
    let available: BTreeSet<i64> = samples.keys().copied().collect();
    let fit_at = |w: &FitWindow| -> Result<SeriesTemplateFamily> {
        let alphas: BTreeSet<i64> = w.window.iter().flat_map(|j| data[j].0.keys().map(move |k| k.0 - d * j)).collect();
        let mut offsets = BTreeMap::new();
        for a in alphas {
            let vals: Vec<Rational> = w
                .window
                .iter()
                .map(|&j| data[&j].0.get(&(a + d * j, 0)).cloned().map(Rational::from_bigint).unwrap_or_else(Rational::zero))
                .collect();
            let p = BinomialPoly::interpolate(w.window[0], &vals);
            if !p.is_integer_valued() {
                return Err(Error::Validation(format!("P_{a}(j) = {p} is not integer-valued")));
            }
            if !p.is_zero() {
                offsets.insert(a, p);
            }
        }
        let fam = SeriesTemplateFamily { n, d, l, offsets, fit: w.clone(), notes: window_notes(w) };
        for j in &w.validated {
            if fam.numerator(*j) != data[j] {
                return Err(Error::Validation(format!("series template disagrees with the sampled power {j}")));
            }
        }
        Ok(fam)
    };
    let (fam, _) = fit_with_threshold(&available, l, threshold, fit_at)?;
    Ok(fam)
}

/// Bigraded Rees series recovered from the series of finitely many powers (any generator degrees).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesSeriesTemplate {
    pub degrees: Vec<i64>,
    pub n: usize,
    pub threshold: i64,
    /// numerator truncated at t^{c + r}
    pub truncation: i64,
    pub series: HilbertSeries,
    pub validated: Vec<i64>,
}

impl ReesSeriesTemplate {
    /// Predicted Hilbert series of I^j (the t^j slice).
    pub fn predict(&self, j: i64) -> HilbertSeries {
        self.series.t_slice(j)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degrees": self.degrees,
            "threshold": self.threshold,
            "truncation": self.truncation,
            "series": self.series.to_json(),
            "validated": self.validated,
        })
    }
}

/// Q(s,t) = (1−s)^n Π_j (1 − s^{d_j} t) Σ_j H_{I^j}(s) t^j truncated at t^{c + r}; the powers
/// 0..=c+r determine the Rees series, checked on every later sample.
pub fn fit_rees_series(samples: &BTreeMap<i64, HilbertSeries>, degrees: &[i64], threshold: i64) -> Result<ReesSeriesTemplate> {
    if degrees.is_empty() {
        return Err(Error::InvalidInput("no generator degrees".into()));
    }
    let n = samples.values().map(|s| s.den.len()).max().ok_or_else(|| Error::Window("no samples".into()))?;
    let c = threshold.max(-1);
    let top = c + degrees.len() as i64;
    let mut gen = Laurent::zero();
    for j in 0..=top {
        let num = match samples.get(&j) {
            Some(s) => numerator_over(s, n)?,
            None if j == 0 => Laurent::one(),
            None => return Err(Error::Window(format!("power {j} is required (need all j ≤ c + r = {top})"))),
        };
        gen = gen.add(&num.shift(0, j));
    }
    let mut q = gen;
    for &dj in degrees {
        q = q.mul_one_minus(dj, 1);
    }
    q.0.retain(|k, _| k.1 <= top);
    let mut den = vec![(1, 0); n];
    den.extend(degrees.iter().map(|&dj| (dj, 1)));
    let series = HilbertSeries::new(q, den);
    let validated: Vec<i64> = samples.keys().copied().filter(|&j| j > top).collect();
    if validated.is_empty() {
        return Err(Error::Window(format!("no power beyond c + r = {top} is available for validation")));
    }
    for j in &validated {
        if !series.t_slice(*j).same_function(&samples[j]) {
            return Err(Error::Validation(format!("recovered Rees series disagrees with the sampled power {j}")));
        }
    }
    Ok(ReesSeriesTemplate { degrees: degrees.to_vec(), n, threshold: c, truncation: top, series, validated })
}

// ---------------------------------------------------------------------------------------
// Projective dimension of powers

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjDimReport {
    pub l: usize,
    /// (j, proj.dim I^j)
    pub observed: Vec<(i64, usize)>,
    /// a²(G) − a(F), when both are known
    pub predicted_threshold: Option<i64>,
    /// proj.dim I^j = l − 1 exactly for observed j > predicted threshold
    pub consistent: Option<bool>,
    /// first observed j from which proj.dim stays at l − 1
    pub detected_from: Option<i64>,
}

impl ProjDimReport {
    pub fn to_json(&self) -> Value {
        json!({
            "l": self.l,
            "observed": self.observed.iter().map(|(j, p)| json!({"j": j, "proj_dim": p})).collect::<Vec<_>>(),
            "predicted_threshold": self.predicted_threshold,
            "consistent": self.consistent,
            "detected_from": self.detected_from,
            "criterion": "for Gorenstein G: proj.dim I^j = l - 1 iff j > a2(G) - a(F)",
        })
    }
}

pub fn stable_projdim(tables: &BTreeMap<i64, BettiTable>, l: usize, a2_g: Option<i64>, a_f: Option<i64>) -> Result<ProjDimReport> {
    let mut observed = Vec::new();
    for (&j, b) in tables {
        observed.push((j, crate::betti::proj_dim(b)?));
    }
    let stable = l.saturating_sub(1);
    let predicted_threshold = a2_g.zip(a_f).map(|(g, f)| g - f);
    let consistent = predicted_threshold.map(|t| observed.iter().all(|&(j, p)| (p == stable) == (j > t)));
    let detected_from = match observed.last() {
        Some(&(_, p)) if p == stable => {
            let k = observed.iter().rposition(|&(_, p)| p != stable).map_or(0, |i| i + 1);
            Some(observed[k].0)
        }
        _ => None,
    };
    Ok(ProjDimReport { l, observed, predicted_threshold, consistent, detected_from })
}

// ---------------------------------------------------------------------------------------
// Resolution templates

/// D_p^j = ⊕_α A(−α − dj)^{Q_{p,α}(j)} for j past the threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTemplate {
    pub d: i64,
    pub l: usize,
    /// (p, α) → Q_{p,α}(j); only nonzero polynomials
    pub entries: BTreeMap<(usize, i64), BinomialPoly>,
    /// all offsets satisfy α = p: the resolutions on the window are linear
    pub linear: bool,
    pub fit: FitWindow,
    pub notes: Vec<String>,
}

impl ResolutionTemplate {
    /// Predicted Betti numbers of I^j: (p, q) → β_{p,q}.
    pub fn predict(&self, j: i64) -> BTreeMap<(usize, i64), BigInt> {
        self.entries
            .iter()
            .filter_map(|(&(p, a), q)| {
                let v = q.eval(j).to_integer().expect("templates are integer-valued");
                (!v.is_zero()).then_some(((p, a + self.d * j), v))
            })
            .collect()
    }

    /// e.g. `0 → A(−2−7j)^{15} ⊕ A(−1−7j)^{7j − 30} → A(−7j)^{7j − 14} → I^j → 0`
    pub fn to_text(&self) -> String {
        let maxp = self.entries.keys().map(|k| k.0).max().unwrap_or(0);
        let mut parts = vec!["0".to_string()];
        for p in (0..=maxp).rev() {
            let terms: Vec<String> = self
                .entries
                .iter()
                .rev()
                .filter(|(k, _)| k.0 == p)
                .map(|(&(_, a), q)| {
                    let shift = if a == 0 { format!("−{}j", self.d) } else { format!("{}−{}j", -a, self.d).replace('-', "−") };
                    format!("A({shift})^{{{q}}}")
                })
                .collect();
            parts.push(if terms.is_empty() { "0".into() } else { terms.join(" ⊕ ") });
        }
        parts.push("I^j".into());
        parts.push("0".into());
        parts.join(" → ")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "l": self.l,
            "entries": self.entries.iter().map(|(&(p, a), q)| json!({"p": p, "alpha": a, "polynomial": q.to_json()})).collect::<Vec<_>>(),
            "linear": self.linear,
            "fit": self.fit.to_json(),
            "text": self.to_text(),
            "notes": self.notes,
        })
    }
}

/// Fit Betti polynomials Q_{p,α}(j) from complete Betti tables of the ideals I^j
/// (equigenerated in degree d); refuses when a held-out power disagrees.
pub fn predict_resolutions(tables: &BTreeMap<i64, BettiTable>, l: usize, d: i64, threshold: Option<i64>) -> Result<ResolutionTemplate> {
    if l == 0 {
        return Err(Error::InvalidInput("analytic spread must be positive".into()));
    }
    let mut data: BTreeMap<i64, BTreeMap<(usize, i64), u64>> = BTreeMap::new();
    for (&j, b) in tables {
        if b.kind != ModuleKind::Ideal || b.ring.is_bigraded() {
            return Err(Error::InvalidInput(format!("table for j = {j} must be a singly graded table of the ideal")));
        }
        if b.truncated() {
            return Err(Error::Truncated(format!("table for j = {j}")));
        }
        data.insert(j, b.entries.iter().map(|(&(p, q), &v)| ((p, q.d1 - d * j), v)).collect());
    }
    data.entry(0).or_insert_with(|| BTreeMap::from([((0, 0), 1)]));
    let available: BTreeSet<i64> = tables.keys().copied().collect();
    let fit_at = |w: &FitWindow| -> Result<ResolutionTemplate> {
        let keys: BTreeSet<(usize, i64)> = w.window.iter().flat_map(|j| data[j].keys().copied()).collect();
        let mut entries = BTreeMap::new();
        for key in keys {
            let vals: Vec<Rational> = w.window.iter().map(|j| Rational::from_int(data[j].get(&key).copied().unwrap_or(0) as i64)).collect();
            let p = BinomialPoly::interpolate(w.window[0], &vals);
            if !p.is_integer_valued() {
                return Err(Error::Unstable(format!("Q_{{{},{}}}(j) = {p} is not integer-valued", key.0, key.1)));
            }
            if !p.is_zero() {
                entries.insert(key, p);
            }
        }
        let linear = entries.keys().all(|&(p, a)| a == p as i64);
        let mut notes = window_notes(w);
        if linear {
            notes.push("resolutions on the window are linear; linearity persists for all larger powers".into());
        }
        let t = ResolutionTemplate { d, l, entries, linear, fit: w.clone(), notes };
        for &j in &w.validated {
            let pred = t.predict(j);
            let actual: BTreeMap<(usize, i64), BigInt> = data[&j].iter().map(|(&(p, a), &v)| ((p, a + d * j), BigInt::from(v))).collect();
            if pred != actual {
                return Err(Error::Unstable(format!("shift pattern on the window does not reproduce the resolution of I^{j}")));
            }
        }
        Ok(t)
    };
    let (t, _) = fit_with_threshold(&available, l, threshold, fit_at)?;
    Ok(t)
}

// ---------------------------------------------------------------------------------------
// Numeric bounds for powers

/// max_e (a*(I^e) − d·e) over the supplied values, with an arg max.
pub fn a_star_growth(a_star: &BTreeMap<i64, i64>, d: i64) -> Option<(i64, i64)> {
    a_star.iter().map(|(&e, &a)| (a - d * e, e)).max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)))
}

/// Range [−n + d(−a²(G) − 1), −n + d(l − 1)] for max_e (a*(I^e) − de).
pub fn a_star_growth_range(n: i64, d: i64, l: i64, a2_g: i64) -> (i64, i64) {
    (-n + d * (-a2_g - 1), -n + d * (l - 1))
}

/// a(I^e/I^{e+1}) = de + a(A/I) for equimultiple ideals with Cohen–Macaulay Rees algebra.
pub fn equimultiple_graded_piece_a(d: i64, e: i64, a_quotient: i64) -> i64 {
    d * e + a_quotient
}

/// a¹(R^φ) = d(−a²(G) − 1) − n when G is Gorenstein.
pub fn gorenstein_a1(d: i64, a2_g: i64, n: i64) -> i64 {
    d * (-a2_g - 1) - n
}

/// a*(I^e) = d(e − a²(G) − 1) − n for e > a²(G) − a(F), G Gorenstein.
pub fn gorenstein_a_star_power(d: i64, e: i64, a2_g: i64, n: i64) -> i64 {
    d * (e - a2_g - 1) - n
}

/// a*(I^e) ≤ d(e + h − 1) − n for strongly Cohen–Macaulay ideals (equality for e > l − h).
pub fn scm_a_star_bound(d: i64, e: i64, h: i64, n: i64) -> i64 {
    d * (e + h - 1) - n
}

/// a*(I^e) ≤ de − d² for maximal minors of a generic d × (d+1)… matrix family.
pub fn maximal_minors_a_star_bound(d: i64, e: i64) -> i64 {
    d * e - d * d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;
    use crate::betti::graded_betti_table;
    use crate::hilbert::{hilbert_series_ideal, SeriesOf};
    use crate::{Ideal, RingSpec};
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn cubic() -> Ideal {
        let r = RingSpec::polynomial_ring(4);
        Ideal::parse(&r, &["X1*X4 - X2*X3", "X2^2 - X1*X3", "X3^2 - X2*X4"]).unwrap()
    }

    fn quotient_polys(i: &Ideal, js: std::ops::RangeInclusive<u32>) -> BTreeMap<i64, HilbertPolynomial> {
        js.map(|j| (j as i64, hilbert_series_ideal(&i.power(j), SeriesOf::Quotient).unwrap().hilbert_polynomial().unwrap())).collect()
    }

    fn ideal_series(i: &Ideal, js: std::ops::RangeInclusive<u32>) -> BTreeMap<i64, HilbertSeries> {
        js.map(|j| (j as i64, hilbert_series_ideal(&i.power(j), SeriesOf::Ideal).unwrap())).collect()
    }

    #[test]
    fn interpolation_roundtrip() {
        let vals: Vec<Rational> = (3..8).map(|j| Rational::from_int(j * j * j - 2 * j + 5)).collect();
        let p = BinomialPoly::interpolate(3, &vals);
        assert_eq!(p.degree(), Some(3));
        for j in -4..12 {
            assert_eq!(p.eval(j), Rational::from_int(j * j * j - 2 * j + 5));
        }
        assert_eq!(p.monomial_coeffs(), vec![q(5, 1), q(-2, 1), q(0, 1), q(1, 1)]);
        assert_eq!(p.to_string(), "j^3 - 2j + 5");
    }

    #[test]
    fn twisted_cubic_polynomial_family() {
        let i = cubic();
        let samples = quotient_polys(&i, 1..=4);
        assert_eq!(samples[&1].to_string(), "3s+1");
        assert_eq!(samples[&2].to_string(), "9s-7");
        assert_eq!(samples[&3].to_string(), "18s-34");
        let mut fit_samples = samples.clone();
        fit_samples.remove(&4);
        // without I^4 a fixed threshold still interpolates, but detection needs a held-out power
        let exact = fit_hilbert_polynomials(&fit_samples, 4, 2, Some(-1)).unwrap();
        assert!(exact.fit.validated.is_empty());
        assert!(fit_hilbert_polynomials(&fit_samples, 4, 2, None).is_err());
        let f = fit_hilbert_polynomials(&samples, 4, 2, Some(-1)).unwrap();
        assert_eq!(f.fit.window, vec![0, 1, 2, 3]);
        // e0 = 3/2 j(j+1), e1 = 5/3 j(j+1)(j − 2/5)
        assert_eq!(f.e[0].monomial_coeffs(), vec![q(0, 1), q(3, 2), q(3, 2)]);
        assert_eq!(f.e[1].monomial_coeffs(), vec![q(0, 1), q(-2, 3), q(1, 1), q(5, 3)]);
        assert_eq!((f.lambda(2), f.lambda(3)), (q(3, 1), q(10, 1)));
        assert_eq!(f.predict(4).to_string(), "30s-90");
        assert_eq!(f.predict(4).monomial_coeffs(), samples[&4].monomial_coeffs());
    }

    #[test]
    fn twisted_cubic_mixed_multiplicities() {
        let f = fit_hilbert_polynomials(&quotient_polys(&cubic(), 1..=4), 4, 2, Some(-1)).unwrap();
        let m = mixed_multiplicities(&f, 2, 3).unwrap();
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(m.e_r, ints(&[0, 1, 2, 1]));
        assert_eq!(m.e_g, ints(&[2, 3, 0]));
        assert_eq!((m.total_r.clone(), m.total_g.clone()), (BigInt::from(4), BigInt::from(5)));
        assert!(m.identity_holds && m.totals_formula_holds);
    }

    #[test]
    fn mixed_multiplicities_match_bigraded_polynomial() {
        // e_i(R) is the coefficient of C(x, i)·C(t, n−1−i) in the bigraded Hilbert polynomial
        let i = cubic();
        let p = crate::rees::rees_presentation(&i).unwrap();
        let hs = crate::rees::bigraded_hilbert_series_rees(&p).unwrap();
        let HilbertPolynomial::Bigraded { coeffs, .. } = crate::hilbert::bigraded_hilbert_polynomial(&hs).unwrap() else { panic!() };
        let f = fit_hilbert_polynomials(&quotient_polys(&i, 1..=4), 4, 2, Some(-1)).unwrap();
        let m = mixed_multiplicities(&f, 2, 3).unwrap();
        for k in 0..4u32 {
            let c = coeffs.get(&(k, 3 - k)).cloned().unwrap_or_else(Rational::zero);
            assert_eq!(c, Rational::from_bigint(m.e_r[k as usize].clone()), "e_{k}(R)");
        }
    }

    #[test]
    fn equimultiple_mixed_multiplicities() {
        // (X^2, Y^2) in k[X,Y,Z]: h = l = 2, d = 2
        let r = RingSpec::standard(Field::Rational, &["X", "Y", "Z"]);
        let i = Ideal::parse(&r, &["X^2", "Y^2"]).unwrap();
        let f = fit_hilbert_polynomials(&quotient_polys(&i, 1..=3), 3, 2, Some(-1)).unwrap();
        let m = mixed_multiplicities(&f, 2, 2).unwrap();
        assert_eq!(m.total_r, BigInt::from(1 + 2));
        assert_eq!(m.total_g, BigInt::from(4));
        assert!(m.identity_holds && m.totals_formula_holds);
    }

    #[test]
    fn principal_ideal_family() {
        // A/(f^j), deg f = 3, in 3 variables: e_0(j) = 3j, e_1(j) = C(3j − 1, 2)
        let r = RingSpec::standard(Field::Rational, &["X", "Y", "Z"]);
        let i = Ideal::parse(&r, &["X^3 + Y*Z^2"]).unwrap();
        let f = fit_hilbert_polynomials(&quotient_polys(&i, 1..=4), 3, 1, Some(-1)).unwrap();
        for j in 0..8 {
            assert_eq!(f.e[0].eval(j), Rational::from_int(3 * j));
        }
        assert_eq!(f.lambda(1), q(3, 1));
        let m = mixed_multiplicities(&f, 3, 1).unwrap();
        assert_eq!(m.total_r, BigInt::from(1));
        assert_eq!(m.total_g, BigInt::from(3));
    }

    #[test]
    fn m_primary_is_refused() {
        let r = RingSpec::standard(Field::Rational, &["X", "Y"]);
        let i = Ideal::parse(&r, &["X^2", "Y^2"]).unwrap();
        let f = fit_hilbert_polynomials(&quotient_polys(&i, 1..=3), 2, 2, Some(-1)).unwrap();
        assert!(f.e.is_empty());
        assert!(mixed_multiplicities(&f, 2, 2).is_err());
    }

    #[test]
    fn twisted_cubic_series_template() {
        let f = fit_hilbert_series(&ideal_series(&cubic(), 1..=3), 2, 3, Some(-1)).unwrap();
        assert_eq!(f.fit.window, vec![0, 1, 2]);
        assert_eq!(f.fit.validated, vec![3]);
        assert_eq!(f.offsets.len(), 3);
        assert_eq!(f.offsets[&0].monomial_coeffs(), vec![q(1, 1), q(3, 2), q(1, 2)]);
        assert_eq!(f.offsets[&1].monomial_coeffs(), vec![q(0, 1), q(-1, 1), q(-1, 1)]);
        assert_eq!(f.offsets[&2].monomial_coeffs(), vec![q(0, 1), q(-1, 2), q(1, 2)]);
        let h5 = hilbert_series_ideal(&cubic().power(5), SeriesOf::Ideal).unwrap();
        assert!(f.predict(5).same_function(&h5));
    }

    #[test]
    fn series_threshold_detection() {
        let f = fit_hilbert_series(&ideal_series(&cubic(), 1..=3), 2, 3, None).unwrap();
        assert_eq!(f.fit.threshold, -1);
        assert!(f.fit.detected);
    }

    #[test]
    fn rees_series_from_powers() {
        // non-equigenerated complete intersection (X^2, Y^3): Cohen–Macaulay Rees algebra
        let r = RingSpec::standard(Field::Rational, &["X", "Y"]);
        let i = Ideal::parse(&r, &["X^2", "Y^3"]).unwrap();
        let t = fit_rees_series(&ideal_series(&i, 1..=4), &[2, 3], -1).unwrap();
        assert_eq!(t.truncation, 1);
        let p = crate::rees::rees_presentation(&i).unwrap();
        let direct = crate::rees::bigraded_hilbert_series_rees(&p).unwrap();
        assert!(t.series.same_function(&direct));
        let c = cubic();
        let t = fit_rees_series(&ideal_series(&c, 1..=3), &[2, 2, 2], -1).unwrap();
        let direct = crate::rees::bigraded_hilbert_series_rees(&crate::rees::rees_presentation(&c).unwrap()).unwrap();
        assert!(t.series.same_function(&direct));
    }

    fn ideal_tables(i: &Ideal, js: std::ops::RangeInclusive<u32>) -> BTreeMap<i64, BettiTable> {
        js.map(|j| (j as i64, graded_betti_table(&i.power(j), ModuleKind::Ideal, None).unwrap())).collect()
    }

    #[test]
    fn twisted_cubic_resolution_template() {
        let t = predict_resolutions(&ideal_tables(&cubic(), 1..=3), 3, 2, Some(-1)).unwrap();
        assert!(t.linear);
        assert_eq!(t.entries[&(0, 0)].monomial_coeffs(), vec![q(1, 1), q(3, 2), q(1, 2)]);
        assert_eq!(t.entries[&(1, 1)].monomial_coeffs(), vec![q(0, 1), q(1, 1), q(1, 1)]);
        assert_eq!(t.entries[&(2, 2)].monomial_coeffs(), vec![q(0, 1), q(-1, 2), q(1, 2)]);
    }

    #[test]
    fn gg9_resolution_template() {
        let r = RingSpec::standard(Field::Rational, &["X", "Y"]);
        let i = Ideal::parse(&r, &["X^7", "Y^7", "X^6*Y + X^2*Y^5"]).unwrap();
        let tables = ideal_tables(&i, 4..=7);
        assert_eq!((tables[&4].beta(0, 28), tables[&4].beta(1, 30)), (15, 14));
        let t = predict_resolutions(&tables, 2, 7, Some(4)).unwrap();
        assert_eq!(t.fit.window, vec![5, 6]);
        assert!(!t.linear);
        assert_eq!(t.to_text(), "0 → A(−2−7j)^{15} ⊕ A(−1−7j)^{7j - 30} → A(−7j)^{7j - 14} → I^j → 0");
        assert!(matches!(predict_resolutions(&tables, 2, 7, Some(3)), Err(Error::Unstable(_))));
        let detected = predict_resolutions(&tables, 2, 7, None).unwrap();
        assert_eq!(detected.fit.threshold, 4);
        assert!(detected.notes.iter().any(|n| n.contains("open question")));
        let pd = stable_projdim(&tables, 2, None, None).unwrap();
        assert!(pd.observed.iter().all(|&(_, p)| p == 1));
    }

    #[test]
    fn projdim_of_principal_powers() {
        let r = RingSpec::standard(Field::Rational, &["X", "Y"]);
        let i = Ideal::parse(&r, &["X*Y"]).unwrap();
        let rep = stable_projdim(&ideal_tables(&i, 1..=3), 1, None, None).unwrap();
        assert!(rep.observed.iter().all(|&(_, p)| p == 0));
        assert_eq!(rep.detected_from, Some(1));
    }

    #[test]
    fn bound_helpers() {
        assert_eq!(scm_a_star_bound(2, 2, 2, 4), 2);
        assert_eq!(gorenstein_a1(2, -2, 4), -2);
        assert_eq!(a_star_growth(&BTreeMap::from([(1, -1), (2, 2), (3, 4)]), 2), Some((-2, 2)));
        assert_eq!(maximal_minors_a_star_bound(2, 3), 2);
        assert_eq!(a_star_growth_range(4, 2, 3, -1), (-4, 0));
    }

    proptest! {
        #[test]
        fn interpolation_reproduces_samples(vals in proptest::collection::vec(-50i64..50, 1..7), j0 in -5i64..5) {
            let rv: Vec<Rational> = vals.iter().map(|&v| Rational::from_int(v)).collect();
            let p = BinomialPoly::interpolate(j0, &rv);
            prop_assert!(p.is_integer_valued());
            for (i, v) in rv.iter().enumerate() {
                prop_assert_eq!(&p.eval(j0 + i as i64), v);
            }
        }
    }
}
