//! One function per command: compute, then describe the result as JSON and text.

use std::collections::BTreeMap;

use rayon::prelude::*;
use reeslab::asymptotics::{
    fit_hilbert_polynomials, fit_hilbert_series, fit_rees_series, mixed_multiplicities, predict_resolutions, stable_projdim,
    PowerPolynomialFamily,
};
use reeslab::betti::{betti_table, graded_betti_table, invariants_from_shifts, BettiTable, ModuleKind};
use reeslab::diagonals::{
    all_diagonals_cm_gorenstein, cm_diagonal_test, cm_threshold_alpha, diagonal_dimension, diagonal_hilbert_function,
    gorenstein_diagonals, AlphaInputs, CmFamily, DiagonalSpec, GorensteinFamily, Verdict,
};
use reeslab::gin::{bayer_stillman_check, borel_fix_check, generic_initial_ideal};
use reeslab::hilbert::{bigraded_hilbert_polynomial, dim_mult, hilbert_series_ideal, HilbertPolynomial, HilbertSeries, SeriesOf};
use reeslab::rees::{
    bigraded_hilbert_series_rees, fiber_cone, form_ring_presentation, reduction_number_bounds, rees_presentation,
};
use reeslab::{Error, Ideal, MultiDegree, TermOrder};
use serde_json::{json, Value};

use crate::problem::{Family, FamilyKind, ProblemFile};
use crate::{Args, Command};

/// Why a command produced no ordinary report.
#[derive(Debug)]
pub enum Failure {
    Error(String),
    /// required inputs, by name
    NeedsInput(Vec<String>),
    /// a full report whose status is needs-input, with its text rendering
    NeedsInputReport(Box<Value>, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NeedsInput(names) => Failure::NeedsInput(names),
            other => Failure::Error(other.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// Result of a command before the common envelope is added.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub result: Value,
    pub text: String,
    pub citations: Vec<String>,
    pub assumptions: Vec<String>,
    /// non-empty for a needs-input verdict
    pub missing: Vec<String>,
}

impl Outcome {
    fn new(result: Value, text: String) -> Self {
        Outcome { result, text, ..Default::default() }
    }

    fn cite(mut self, c: &[&str]) -> Self {
        self.citations.extend(c.iter().map(|s| s.to_string()));
        self
    }

    fn assume<S: Into<String>>(mut self, a: impl IntoIterator<Item = S>) -> Self {
        self.assumptions.extend(a.into_iter().map(Into::into));
        self
    }
}

pub fn run(args: &Args, problem: Option<&ProblemFile>) -> Res<Outcome> {
    let ctx = Ctx { args, problem };
    match args.command {
        Command::Gb => ctx.gb(),
        Command::Hs => ctx.hs(),
        Command::Hp => ctx.hp(),
        Command::Powers => ctx.powers(),
        Command::FitHp => ctx.fit_hp(),
        Command::MixedMult => ctx.mixed_mult(),
        Command::FitHs => ctx.fit_hs(),
        Command::Betti => ctx.betti(),
        Command::Rees => ctx.rees(),
        Command::Diag => ctx.diag(),
        Command::Gorenstein => ctx.gorenstein(),
        Command::CmCheck => ctx.cm_check(),
        Command::CmThreshold => ctx.cm_threshold(),
        Command::Gin => ctx.gin(),
        Command::Borel => ctx.borel(),
        Command::Reg => ctx.reg(),
        Command::BayerStillman => ctx.bayer_stillman(),
    }
}

fn series_json(s: &HilbertSeries) -> Value {
    let mut v = s.to_json();
    v["text"] = json!(s.to_string());
    v
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn ideal_json(i: &Ideal) -> Vec<String> {
    strings(&i.gens)
}

fn power_label(j: u32) -> String {
    match j {
        1 => "I".into(),
        _ => format!("I^{j}"),
    }
}

struct Ctx<'a> {
    args: &'a Args,
    problem: Option<&'a ProblemFile>,
}

impl Ctx<'_> {
    fn problem(&self) -> Res<&ProblemFile> {
        self.problem.ok_or_else(|| Failure::Error(format!("{} needs a problem file", self.args.command.name())))
    }

    fn ideal(&self) -> Res<&Ideal> {
        Ok(&self.problem()?.ideal)
    }

    fn family(&self) -> Res<Family> {
        let mut fam = self.problem.map(|p| p.family.clone()).unwrap_or_default();
        if let Some(f) = &self.args.family {
            let flag = match f.trim() {
                "maxminors" => match (self.args.m, self.args.n) {
                    (Some(m), Some(n)) => Family::parse(&format!("maxminors({m},{n})")),
                    (m, n) => {
                        let missing = [("m", m), ("n", n)].iter().filter(|(_, v)| v.is_none()).map(|(k, _)| k.to_string()).collect();
                        return Err(Failure::NeedsInput(missing));
                    }
                },
                other => Family::parse(other),
            }
            .map_err(|m| Failure::Error(format!("--family: {m}")))?;
            fam.kinds = flag.kinds;
            fam.params.extend(flag.params);
        }
        if let Some(a) = self.args.a2g {
            fam.params.insert("a2G".into(), a);
        }
        Ok(fam)
    }

    fn power(&self) -> u32 {
        self.args.power.unwrap_or(1)
    }

    fn target(&self) -> Res<(u32, Ideal)> {
        let j = self.power();
        let i = self.ideal()?;
        Ok((j, if j == 1 { i.clone() } else { i.power(j) }))
    }

    fn standard_graded(&self) -> Res<&ProblemFile> {
        let p = self.problem()?;
        if !p.ring.is_standard_graded() {
            return Err(Failure::Error(format!("{} needs a standard graded ring (all variables of degree (1,0))", self.args.command.name())));
        }
        Ok(p)
    }

    fn nonzero(&self) -> Res<&Ideal> {
        let i = self.ideal()?;
        if i.is_zero() {
            return Err(Failure::Error(format!("{} needs a nonzero ideal", self.args.command.name())));
        }
        Ok(i)
    }

    fn generator_degrees(&self) -> Res<Vec<i64>> {
        let min = self.nonzero()?.minimalize();
        Ok(min.generator_degrees()?.iter().map(|d| d.d1).collect())
    }

    /// d when every minimal generator has degree d.
    fn equigenerated(&self) -> Res<i64> {
        let ds = self.generator_degrees()?;
        let d = ds[0];
        if ds.iter().any(|&x| x != d) {
            return Err(Failure::Error(format!("{} needs an equigenerated ideal; generator degrees are {ds:?}", self.args.command.name())));
        }
        Ok(d)
    }

    /// ht I = n − dim A/I (from the Hilbert series; A is a polynomial ring).
    fn height(&self) -> Res<usize> {
        if let Some(h) = self.problem()?.family.param("height") {
            return usize::try_from(h).map_err(|_| Failure::Error("height must be nonnegative".into()));
        }
        let i = self.ideal()?;
        let q = hilbert_series_ideal(i, SeriesOf::Quotient)?;
        Ok(i.ring.nvars() - q.dimension().unwrap_or(0))
    }

    /// Analytic spread: `l=` on the family line, else dim of the fiber cone.
    fn analytic_spread(&self) -> Res<usize> {
        if let Some(l) = self.family()?.param("l") {
            return usize::try_from(l).map_err(|_| Failure::Error("l must be nonnegative".into()));
        }
        let p = rees_presentation(self.nonzero()?)?;
        Ok(fiber_cone(&p)?.analytic_spread)
    }

    fn delta(&self) -> Res<DiagonalSpec> {
        match (self.args.c, self.args.e) {
            (Some(c), Some(e)) => Ok(DiagonalSpec::new(c, e)?),
            (c, e) => Err(Failure::NeedsInput(
                [("c", c), ("e", e)].iter().filter(|(_, v)| v.is_none()).map(|(k, _)| k.to_string()).collect(),
            )),
        }
    }

    /// I^1, …, I^J computed concurrently.
    fn powers_up_to(&self, jmax: u32) -> Res<Vec<(u32, Ideal)>> {
        let i = self.ideal()?;
        if jmax == 0 {
            return Err(Failure::Error("--max-power must be at least 1".into()));
        }
        Ok((1..=jmax).into_par_iter().map(|j| (j, i.power(j))).collect())
    }

    fn quotient_polynomial(&self, i: &Ideal) -> Res<HilbertPolynomial> {
        let q = hilbert_series_ideal(i, SeriesOf::Quotient)?;
        Ok(if q.is_bigraded() { bigraded_hilbert_polynomial(&q)? } else { q.hilbert_polynomial()? })
    }

    fn table(&self, i: &Ideal, kind: ModuleKind, label: &str) -> Res<BettiTable> {
        let cap = self.args.degree_cap;
        Ok(if i.ring.is_bigraded() {
            betti_table(i, kind, cap.map(|c| MultiDegree::new(c, c)), label)?
        } else {
            let mut b = graded_betti_table(i, kind, cap)?;
            b.label = label.to_string();
            b
        })
    }

    // ----------------------------------------------------------------------------------

    fn gb(&self) -> Res<Outcome> {
        let (j, i) = self.target()?;
        let gb = i.gb();
        let basis = strings(&gb.basis);
        let lead: Vec<String> = gb.leading.iter().map(|m| i.ring.format_monomial(m)).collect();
        let mut text = format!("Gröbner basis of {} ({}, {} elements)\n", power_label(j), gb.order(), basis.len());
        for g in &basis {
            text.push_str(&format!("  {g}\n"));
        }
        Ok(Outcome::new(
            json!({"power": j, "order": gb.order().to_string(), "basis": basis, "leading_monomials": lead, "size": gb.basis.len(), "verified": gb.verify()}),
            text,
        )
        .cite(&["reduced Gröbner basis: Buchberger's criterion (every S-pair reduces to zero)"]))
    }

    fn hs(&self) -> Res<Outcome> {
        let (j, i) = self.target()?;
        let ideal = hilbert_series_ideal(&i, SeriesOf::Ideal)?;
        let quotient = hilbert_series_ideal(&i, SeriesOf::Quotient)?;
        let cap = self.args.degree_cap.unwrap_or(10).max(0);
        let function: Value = if quotient.is_bigraded() {
            json!(quotient.function_table(cap, cap).iter().map(|row| row.iter().map(reeslab::arith::bigint_json).collect::<Vec<_>>()).collect::<Vec<_>>())
        } else {
            json!(quotient.coefficients(cap).iter().map(reeslab::arith::bigint_json).collect::<Vec<_>>())
        };
        let label = power_label(j);
        let text = format!("H_{{{label}}} = {ideal}\nH_{{A/{label}}} = {quotient}\n");
        Ok(Outcome::new(
            json!({
                "power": j,
                "ideal": series_json(&ideal),
                "quotient": series_json(&quotient),
                "dimension": quotient.dimension(),
                "quotient_function": function,
            }),
            text,
        )
        .cite(&["Hilbert series through the initial ideal: H_{A/I} = H_{A/in(I)}", "H_I = H_A − H_{A/I}"]))
    }

    fn hp(&self) -> Res<Outcome> {
        let (j, i) = self.target()?;
        let q = hilbert_series_ideal(&i, SeriesOf::Quotient)?;
        let p = self.quotient_polynomial(&i)?;
        let dm = dim_mult(&q)?;
        let label = power_label(j);
        let mut text = format!("P_{{A/{label}}} = {p}\n");
        if let Some(d) = dm.dimension {
            text.push_str(&format!("dim = {d}\n"));
        }
        if let Some(e) = &dm.multiplicity {
            text.push_str(&format!("e = {e}\n"));
        }
        Ok(Outcome::new(json!({"power": j, "polynomial": p.to_json(), "dim_mult": dm.to_json()}), text)
            .cite(&["P_{A/I}(s) read off H_{A/I}(s) = h(s)/(1−s)^d, expanded in the C(s+k, k) basis"]))
    }

    fn powers(&self) -> Res<Outcome> {
        let jmax = self.args.max_power.unwrap_or(3);
        let pw = self.powers_up_to(jmax)?;
        let rows: Vec<(u32, Value, String)> = pw
            .par_iter()
            .map(|(j, ij)| -> Res<(u32, Value, String)> {
                let s = hilbert_series_ideal(ij, SeriesOf::Ideal)?;
                let q = hilbert_series_ideal(ij, SeriesOf::Quotient)?;
                let p = self.quotient_polynomial(ij)?;
                let dm = dim_mult(&q)?;
                let degs: Vec<Value> = ij.generator_degrees()?.iter().map(|d| json!([d.d1, d.d2])).collect();
                let line = format!("j={j}: {} generators, H = {s}, P_{{A/I^j}} = {p}", ij.gens.len());
                Ok((*j, json!({"j": j, "generators": ij.gens.len(), "generator_degrees": degs, "ideal_series": series_json(&s), "quotient_polynomial": p.to_json(), "dim_mult": dm.to_json()}), line))
            })
            .collect::<Res<Vec<_>>>()?;
        let text = rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>().join("\n");
        Ok(Outcome::new(json!({"max_power": jmax, "powers": rows.iter().map(|r| r.1.clone()).collect::<Vec<_>>()}), text)
            .cite(&["I^j minimally generated degreewise; series through initial ideals"]))
    }

    fn power_family(&self) -> Res<(PowerPolynomialFamily, BTreeMap<i64, HilbertPolynomial>)> {
        let p = self.standard_graded()?;
        let n = p.ring.nvars();
        let h = self.height()?;
        let jmax = self.args.max_power.unwrap_or(n as u32);
        let samples: BTreeMap<i64, HilbertPolynomial> = self
            .powers_up_to(jmax)?
            .par_iter()
            .map(|(j, ij)| Ok((*j as i64, self.quotient_polynomial(ij)?)))
            .collect::<Res<_>>()?;
        let fam = fit_hilbert_polynomials(&samples, n, h, self.args.threshold)?;
        Ok((fam, samples))
    }

    fn fit_hp(&self) -> Res<Outcome> {
        let (fam, samples) = self.power_family()?;
        let next = *samples.keys().max().unwrap() + 1;
        let pred = fam.predict(next);
        let mut text = String::new();
        for (j, p) in &samples {
            text.push_str(&format!("P_{{A/I^{j}}} = {p}\n"));
        }
        for (i, e) in fam.e.iter().enumerate() {
            text.push_str(&format!("e_{i}(j) = {}\n", e));
        }
        text.push_str(&format!("predicted P_{{A/I^{next}}} = {pred}\n"));
        let mut result = fam.to_json();
        result["samples"] = json!(samples.iter().map(|(j, p)| json!({"j": j, "polynomial": p.to_json()})).collect::<Vec<_>>());
        result["prediction"] = json!({"j": next, "polynomial": pred.to_json()});
        let notes = fam.notes.clone();
        Ok(Outcome::new(result, text)
            .cite(&[
                "P_{A/I^j}(s) = Σ_k (−1)^{n−h−1−k} e_{n−h−1−k}(j) C(s+k, k) for j past the threshold",
                "e_i(j) is a polynomial in j of degree at most h + i",
            ])
            .assume(notes))
    }

    fn mixed_mult(&self) -> Res<Outcome> {
        let (fam, _) = self.power_family()?;
        let d = self.equigenerated()?;
        let l = self.analytic_spread()?;
        let mm = mixed_multiplicities(&fam, d, l)?;
        let join = |v: &[_]| strings(v).join(", ");
        let text = format!(
            "e_i(R) = ({}), e(R) = {}\ne_i(G) = ({}), e(G) = {}\ne_i(G) = d·e_(i+1)(R) − e_i(R): {}\n",
            join(&mm.e_r),
            mm.total_r,
            join(&mm.e_g),
            mm.total_g,
            mm.identity_holds
        );
        let mut result = mm.to_json();
        result["family"] = fam.to_json();
        let notes = fam.notes.clone();
        Ok(Outcome::new(result, text)
            .cite(&[
                "mixed multiplicities are the leading coefficients of the bigraded Hilbert polynomial in the binomial basis",
                "e_i(G) = d·e_{i+1}(R) − e_i(R)",
            ])
            .assume(notes)
            .assume(["I is equigenerated and not primary to the maximal ideal".to_string()]))
    }

    fn fit_hs(&self) -> Res<Outcome> {
        self.standard_graded()?;
        let d = self.equigenerated()?;
        let l = self.analytic_spread()?;
        let jmax = self.args.max_power.unwrap_or(l as u32);
        let pw = self.powers_up_to(jmax)?;
        let samples: BTreeMap<i64, HilbertSeries> =
            pw.par_iter().map(|(j, ij)| Ok((*j as i64, hilbert_series_ideal(ij, SeriesOf::Ideal)?))).collect::<Res<_>>()?;
        let fam = fit_hilbert_series(&samples, d, l, self.args.threshold)?;
        let next = jmax as i64 + 1;
        let pred = fam.predict(next);
        let mut result = fam.to_json();
        result["prediction"] = json!({"j": next, "series": series_json(&pred)});
        let degrees = self.generator_degrees()?;
        let rees = fit_rees_series(&samples, &degrees, fam.fit.threshold).map(|t| t.to_json()).unwrap_or_else(|e| json!({"error": e.to_string()}));
        result["rees_series"] = rees;
        let mut text = String::new();
        for (a, p) in &fam.offsets {
            text.push_str(&format!("P_{a}(j) = {}\n", p));
        }
        text.push_str(&format!("predicted H_{{I^{next}}} = {pred}\n"));
        let notes = fam.notes.clone();
        Ok(Outcome::new(result, text)
            .cite(&["H_{I^j}(s)·(1−s)^n = Σ_α P_α(j) s^{α+dj} with deg P_α ≤ l − 1 for j past the threshold"])
            .assume(notes))
    }

    fn betti(&self) -> Res<Outcome> {
        if let Some(jmax) = self.args.max_power {
            return self.betti_family(jmax);
        }
        let (j, i) = self.target()?;
        let b = self.table(&i, ModuleKind::Ideal, &power_label(j))?;
        let inv = invariants_from_shifts(&b).map(|r| r.to_json()).unwrap_or_else(|e| json!({"error": e.to_string()}));
        Ok(Outcome::new(json!({"power": j, "table": b.to_json(), "invariants": inv}), b.to_text())
            .cite(&["β_{p,q} = dim_k H_p(K(x; M))_q (Koszul homology)"]))
    }

    fn betti_family(&self, jmax: u32) -> Res<Outcome> {
        let pw = self.powers_up_to(jmax)?;
        let tables: BTreeMap<i64, BettiTable> =
            pw.par_iter().map(|(j, ij)| Ok((*j as i64, self.table(ij, ModuleKind::Ideal, &power_label(*j))?))).collect::<Res<_>>()?;
        let mut text = String::new();
        for b in tables.values() {
            text.push_str(&b.to_text());
            text.push('\n');
        }
        let fam = self.family()?;
        let l = self.analytic_spread()?;
        let template = self
            .equigenerated()
            .and_then(|d| Ok(predict_resolutions(&tables, l, d, self.args.threshold)?))
            .map(|t| {
                text.push_str(&format!("template: {}\n", t.to_text()));
                t.to_json()
            })
            .unwrap_or_else(|e| json!({"error": failure_text(&e)}));
        let pd = stable_projdim(&tables, l, fam.param("a2G"), fam.param("aF"))?;
        Ok(Outcome::new(
            json!({
                "tables": tables.iter().map(|(j, b)| json!({"j": j, "table": b.to_json()})).collect::<Vec<_>>(),
                "template": template,
                "proj_dim": pd.to_json(),
            }),
            text,
        )
        .cite(&[
            "β_{p,q} = dim_k H_p(K(x; M))_q (Koszul homology)",
            "D_p^j = ⊕_α A(−α−dj)^{Q_{p,α}(j)} for j past the threshold, deg Q_{p,α} ≤ l − 1",
        ]))
    }

    fn rees(&self) -> Res<Outcome> {
        let p = rees_presentation(self.nonzero()?)?;
        let series = bigraded_hilbert_series_rees(&p)?;
        let f = fiber_cone(&p)?;
        let fb = graded_betti_table(&f.ideal, ModuleKind::Quotient, None)?;
        let red = reduction_number_bounds(&f, &fb)?;
        let g = form_ring_presentation(&p);
        let window = self.args.degree_cap.map(|c| MultiDegree::new(c, c));
        let rb = reeslab::betti::bigraded_betti_table(&p, window)?;
        let good = reeslab::diagonals::good_resolution_check(&rb, p.n as i64, p.r() as i64, p.d, p.u)
            .map(|r| r.to_json())
            .unwrap_or_else(|e| json!({"error": e.to_string()}));
        let text = format!(
            "K = ({})\nH_R = {series}\nfiber cone: l = {}, H_F = {}\nreduction number in [{}, {}]\n{}",
            strings(&p.k.gens).join(", "),
            f.analytic_spread,
            f.series,
            red.lower,
            red.upper,
            rb.to_text()
        );
        Ok(Outcome::new(
            json!({
                "presentation": p.to_json(),
                "kernel_verified": p.verify_kernel()?,
                "series": series_json(&series),
                "form_ring": ideal_json(&g),
                "fiber_cone": f.to_json(),
                "reduction_number": red.to_json(),
                "betti": rb.to_json(),
                "good_resolution": good,
            }),
            text,
        )
        .cite(&[
            "R_A(I) = S/K with K = (Y_j − f_j t) ∩ S, deg X = (1,0), deg Y_j = (d_j,1)",
            "a_l(F) + l ≤ r_J(I) ≤ reg(F)",
            "S(a,b)_Δ is Cohen–Macaulay for c ≫ e ≫ 0 iff one of the three shift conditions holds",
        ]))
    }

    fn diag(&self) -> Res<Outcome> {
        let delta = self.delta()?;
        let i = self.nonzero()?;
        let s_max = self.args.degree_cap.unwrap_or(8).max(2);
        let hf = diagonal_hilbert_function(i, delta, s_max)?;
        let dim = if i.is_unit() {
            json!({"dimension": i.ring.nvars()})
        } else {
            diagonal_dimension(i, delta, s_max).map(|d| d.to_json()).unwrap_or_else(|e| json!({"error": e.to_string()}))
        };
        let mut out = Outcome::new(
            json!({"c": delta.c, "e": delta.e, "hilbert_function": hf.iter().map(reeslab::arith::bigint_json).collect::<Vec<_>>(), "dimension": dim}),
            format!("k[(I^{})_{}]: H(s) = {} (s = 0..{s_max})\n", delta.e, delta.c, strings(&hf).join(", ")),
        )
        .cite(&["dim_k k[(I^e)_c]_s = dim_k (I^{es})_{cs}", "dim k[(I^e)_c] = dim R_A(I) − 1"]);
        if let Some(cm) = self.cm_family()? {
            let rep = cm_diagonal_test(&cm, delta)?;
            out.text.push_str(&format!("Cohen–Macaulay ({}): {}\n", rep.criterion, rep.verdict.as_str()));
            if let Verdict::NeedsInput(m) = &rep.verdict {
                out.missing = m.clone();
            }
            out.assumptions.extend(rep.assumptions.clone());
            out.result["cohen_macaulay"] = rep.to_json();
        }
        Ok(out)
    }

    fn gorenstein_family(&self) -> Res<GorensteinFamily> {
        let fam = self.family()?;
        if let Some((m, n)) = fam.max_minors() {
            return Ok(GorensteinFamily::MaximalMinors { rows: m.max(n), cols: m.min(n) });
        }
        let ring = &self.problem()?.ring;
        if fam.has(&FamilyKind::PolyRing) {
            let n = ring.degrees.iter().filter(|d| d.d2 == 0).count() as i64;
            let degrees: Vec<i64> = ring.degrees.iter().filter(|d| d.d2 == 1).map(|d| d.d1).collect();
            return Ok(GorensteinFamily::PolynomialRing { n, degrees });
        }
        let n = ring.nvars() as i64;
        if fam.has(&FamilyKind::Ci) {
            return Ok(GorensteinFamily::CompleteIntersection { n, degrees: self.generator_degrees()? });
        }
        if fam.has(&FamilyKind::Gorenstein) {
            let d = self.equigenerated()?;
            return Ok(GorensteinFamily::GorensteinFormRing { n, d, height: self.height()? as i64, a: fam.param("a2G").map(|x| -x) });
        }
        Err(Failure::NeedsInput(vec!["family".into()]))
    }

    fn gorenstein(&self) -> Res<Outcome> {
        let fam = self.gorenstein_family()?;
        let g = match gorenstein_diagonals(&fam) {
            Err(Error::NeedsInput(_)) => return Err(Failure::NeedsInput(vec!["a2G".into()])),
            other => other?,
        };
        let list: Vec<String> = g.diagonals.iter().map(|(s, a)| format!("{s} (a = {a})")).collect();
        let text = format!(
            "{} diagonals ({}): {}{}\n",
            g.property,
            g.family,
            if list.is_empty() { "none".to_string() } else { list.join(", ") },
            if g.sufficient_only { " [sufficient condition only]" } else { "" }
        );
        let assumptions = g.assumptions.clone();
        Ok(Outcome::new(g.to_json(), text).cite(&["k[(I^e)_c] is Gorenstein iff it is Cohen–Macaulay with a-invariant −l and the ratio condition holds"]).assume(assumptions))
    }

    fn cm_family(&self) -> Res<Option<CmFamily>> {
        let fam = self.family()?;
        let Some(p) = self.problem else { return Ok(None) };
        if fam.has(&FamilyKind::Ci) {
            let a_ring = fam.param("aA").unwrap_or_else(|| -p.ring.degrees.iter().map(|d| d.d1).sum::<i64>());
            return Ok(Some(CmFamily::CompleteIntersection { degrees: self.generator_degrees()?, a_ring }));
        }
        if fam.has(&FamilyKind::Equimultiple) {
            let d = self.equigenerated()?;
            let height = self.height()? as i64;
            let a_quotient = match fam.param("aQ") {
                Some(a) => Some(a),
                None => self.cm_quotient_a_invariant()?,
            };
            return Ok(Some(CmFamily::Equimultiple { d, height, a_quotient }));
        }
        if fam.has(&FamilyKind::Scm) {
            return Ok(Some(CmFamily::StronglyCm {
                degrees: self.generator_degrees()?,
                height: self.height()? as i64,
                n: p.ring.nvars() as i64,
            }));
        }
        Ok(None)
    }

    /// a(A/I) from the Hilbert series when A/I is Cohen–Macaulay (proj.dim = height).
    fn cm_quotient_a_invariant(&self) -> Res<Option<i64>> {
        let i = self.nonzero()?;
        let b = graded_betti_table(i, ModuleKind::Quotient, None)?;
        let pd = reeslab::betti::proj_dim(&b)?;
        if pd != self.height()? {
            return Ok(None);
        }
        Ok(hilbert_series_ideal(i, SeriesOf::Quotient)?.a_invariant())
    }

    fn cm_check(&self) -> Res<Outcome> {
        let delta = self.delta()?;
        let fam = self.cm_family()?.ok_or_else(|| Failure::NeedsInput(vec!["family (ci, equimultiple or scm)".into()]))?;
        let rep = cm_diagonal_test(&fam, delta)?;
        let text = format!("k[(I^{})_{}] Cohen–Macaulay ({}): {}\n", delta.e, delta.c, rep.criterion, rep.verdict.as_str());
        let mut out = Outcome::new(rep.to_json(), text).assume(rep.assumptions.clone());
        out.citations.push(format!("closed-form Cohen–Macaulay inequality: {}", rep.criterion));
        if let Verdict::NeedsInput(m) = &rep.verdict {
            out.missing = m.clone();
        }
        Ok(out)
    }

    fn cm_threshold(&self) -> Res<Outcome> {
        let fam = self.family()?;
        let (inputs, extra) = if let Some((m, n)) = fam.max_minors() {
            (AlphaInputs::MaximalMinors { d: m.min(n) }, json!(null))
        } else if let Some(a2_g) = fam.param("a2G") {
            let p = self.standard_graded()?;
            let d = self.equigenerated()?;
            let n = p.ring.nvars() as i64;
            (AlphaInputs::GorensteinFormRing { d, n, a2_g }, json!(all_diagonals_cm_gorenstein(d, n, a2_g)))
        } else {
            return Err(Failure::NeedsInput(vec!["a2G".into()]));
        };
        let rep = cm_threshold_alpha(&inputs);
        let mut result = rep.to_json();
        if !extra.is_null() {
            result["all_diagonals_cm_by_a2G"] = extra;
        }
        let text = format!(
            "α = {} ({}); k[(I^e)_c] Cohen–Macaulay for all c > de + {}{}\n",
            rep.alpha,
            rep.route,
            rep.effective,
            if rep.all_diagonals_cm { " (every admissible diagonal)" } else { "" }
        );
        Ok(Outcome::new(result, text).cite(&["k[(I^e)_c] is Cohen–Macaulay for c > de + α"]).assume([rep.route.clone()]))
    }

    fn gin(&self) -> Res<Outcome> {
        let i = self.ideal()?;
        let order = match &self.args.order {
            Some(o) => TermOrder::parse(o)?,
            None => i.ring.order.clone(),
        };
        let g = generic_initial_ideal(i, &order, self.args.trials, self.args.seed)?;
        let borel = borel_fix_check(&g.ideal, i.ring.field.characteristic())?;
        let mut result = g.to_json();
        result["borel"] = borel.to_json();
        let text = format!(
            "gin(I) = ({})\n{} of {} trials agree (seed {}); Borel-fixed: {}; series preserved: {}\n",
            ideal_json(&g.ideal).join(", "),
            g.agreements,
            g.trials,
            g.seed,
            borel.is_borel,
            g.series_preserved
        );
        Ok(Outcome::new(result, text)
            .cite(&["gin(I) is the common initial ideal of g·I for generic g; it is Borel-fixed"])
            .assume([format!("random upper-triangular changes per degree block, entries bounded by {}", g.bound)]))
    }

    fn borel(&self) -> Res<Outcome> {
        let i = self.ideal()?;
        if !i.is_monomial() {
            return Err(Failure::Error("borel needs a monomial ideal (run gin first)".into()));
        }
        let p = i.ring.field.characteristic();
        let rep = borel_fix_check(i, p)?;
        let mut text = format!("Borel-fixed (char {p}): {}\n", rep.is_borel);
        if let Some(w) = &rep.witness {
            text.push_str(&format!("witness: {} with {}→{} (s = {}) misses {}\n", w.generator, w.j, w.i, w.s, w.missing));
        }
        if let (true, 0, Some((a, b))) = (rep.is_borel, p, rep.delta) {
            text.push_str(&if i.ring.is_bigraded() { format!("reg = ({a}, {b})\n") } else { format!("reg = {a}\n") });
        }
        let mut result = rep.to_json();
        result["regularity"] = match (rep.is_borel, p) {
            (true, 0) => json!(rep.delta.map(|d| [d.0, d.1])),
            _ => Value::Null,
        };
        Ok(Outcome::new(result, text)
            .cite(&["Borel moves x_j^s ↦ x_i^s (i < j within a degree block, s ≺_p t)", "reg(J) = (δ₁, δ₂) for Borel-fixed J in characteristic 0"]))
    }

    fn reg(&self) -> Res<Outcome> {
        let (j, i) = self.target()?;
        let b = self.table(&i, ModuleKind::Ideal, &power_label(j))?;
        let inv = invariants_from_shifts(&b)?;
        let mut result = inv.to_json();
        result["power"] = json!(j);
        let mut text = if inv.bigraded {
            format!("a*({0}) = ({1}, {2}), reg({0}) = ({3}, {4})\n", power_label(j), inv.a_star.0, inv.a_star.1, inv.reg.0, inv.reg.1)
        } else {
            format!("a*({0}) = {1}, reg({0}) = {2}\n", power_label(j), inv.a_star.0, inv.reg.0)
        };
        text.push_str(&format!("proj.dim = {}\n", inv.proj_dim));
        if i.is_monomial() && i.ring.field.characteristic() == 0 {
            let rep = borel_fix_check(&i, 0)?;
            if let (true, Some(d)) = (rep.is_borel, rep.delta) {
                result["borel_delta"] = json!([d.0, d.1]);
            }
        }
        Ok(Outcome::new(result, text).cite(&["a*(M) = t*(M) + a(S)", "reg(M) = max_p (t_p − p)"]))
    }

    fn bayer_stillman(&self) -> Res<Outcome> {
        let m = self.args.m.ok_or_else(|| Failure::NeedsInput(vec!["m".into()]))?;
        let (j, i) = self.target()?;
        let rep = bayer_stillman_check(&i, m, None, self.args.seed)?;
        let text = format!(
            "{} is {}({m}, ·)-regular (checked q in [{}, {}], {} generic forms)\n",
            power_label(j),
            if rep.regular { "" } else { "not " },
            rep.q_window.0,
            rep.q_window.1,
            rep.forms_used
        );
        let notes = rep.notes.clone();
        let mut result = rep.to_json();
        result["power"] = json!(j);
        Ok(Outcome::new(result, text)
            .cite(&["(I, h_1..h_{i−1}) : h_i agrees with (I, h_1..h_{i−1}) in degrees (m, q) until the ideal fills S"])
            .assume(notes))
    }
}

fn failure_text(f: &Failure) -> String {
    match f {
        Failure::Error(m) => m.clone(),
        Failure::NeedsInput(n) => format!("needs input: {}", n.join(", ")),
        Failure::NeedsInputReport(_, t) => t.clone(),
    }
}
