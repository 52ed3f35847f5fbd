//! Rees algebra, form ring and fiber cone presentations of a homogeneous ideal.
//!
//! For I = (f_1, …, f_r) ⊂ A = k[X_1..X_n] with deg f_j = d_j, the Rees algebra is S/K with
//! S = k[X; Y], deg X_i = (1,0), deg Y_j = (d_j, 1), and K the kernel of Y_j ↦ f_j t.

use crate::betti::BettiTable;
use crate::error::{Error, Result};
use crate::groebner::{extend_ring, Ideal};
use crate::hilbert::{hilbert_series_ideal, HilbertSeries, SeriesOf};
use crate::poly::{MultiDegree, Polynomial, Ring, RingSpec, TermOrder};
use serde_json::{json, Value};

/// Presentation S/K of the Rees algebra R_A(I).
#[derive(Clone, Debug)]
pub struct ReesPresentation {
    /// Source ideal, minimally generated, generators sorted by degree.
    pub source: Ideal,
    /// S = k[X; Y] with deg Y_j = (d_j, 1).
    pub ring: Ring,
    /// Defining ideal K, minimally generated.
    pub k: Ideal,
    /// Generator degrees d_1 ≤ … ≤ d_r.
    pub degrees: Vec<i64>,
    pub equigenerated: bool,
    /// d = max d_j.
    pub d: i64,
    /// u = Σ d_j.
    pub u: i64,
    /// n = number of X variables (= dim A).
    pub n: usize,
}

fn fresh_names(taken: &[String], prefix: &str, count: usize) -> Vec<String> {
    let mut p = prefix.to_string();
    loop {
        let names: Vec<String> = (1..=count).map(|j| format!("{p}{j}")).collect();
        if names.iter().all(|s| !taken.contains(s)) {
            return names;
        }
        p.push('_');
    }
}

/// Rees algebra presentation by eliminating t from (Y_j − f_j t).
pub fn rees_presentation(i: &Ideal) -> Result<ReesPresentation> {
    let a = &i.ring;
    if !a.is_standard_graded() {
        return Err(Error::InvalidInput("source ring must be standard graded (all variables of degree (1,0))".into()));
    }
    if !i.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let min = i.minimalize();
    if min.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    // keep the caller's order when the given generators are already minimal
    let given: Vec<Polynomial> = i.gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut gens = if given.len() == min.gens.len() { given } else { min.gens.clone() };
    gens.sort_by_key(|g| g.lead_degree().unwrap().d1);
    let source = Ideal::new(a, gens.clone())?;
    let degrees: Vec<i64> = gens.iter().map(|g| g.lead_degree().unwrap().d1).collect();
    let (n, r) = (a.nvars(), gens.len());
    let ynames = fresh_names(&a.vars, "Y", r);
    let tname = fresh_names(&a.vars, "_t", 1).pop().unwrap();
    let mut names: Vec<&str> = ynames.iter().map(|s| s.as_str()).collect();
    names.push(&tname);
    let mut degs: Vec<MultiDegree> = degrees.iter().map(|&d| MultiDegree::new(d, 1)).collect();
    degs.push(MultiDegree::new(0, 1));
    let big = extend_ring(a, &names, &degs)?;
    let xmap: Vec<usize> = (0..n).collect();
    let t = Polynomial::var(&big, n + r);
    let rel: Vec<Polynomial> =
        gens.iter().enumerate().map(|(j, f)| Polynomial::var(&big, n + j).sub(&f.map_into(&big, &xmap).mul(&t))).collect();
    let k = Ideal::new(&big, rel)?.eliminate(&[n + r])?.minimalize();
    let ring = k.ring.clone();
    let d = *degrees.iter().max().unwrap();
    let p = ReesPresentation {
        source,
        ring,
        k,
        equigenerated: degrees.iter().all(|&x| x == d),
        d,
        u: degrees.iter().sum(),
        degrees,
        n,
    };
    Ok(p)
}

impl ReesPresentation {
    pub fn r(&self) -> usize {
        self.degrees.len()
    }

    /// Bidegrees of K's minimal generators.
    pub fn generator_bidegrees(&self) -> Vec<MultiDegree> {
        let mut v: Vec<MultiDegree> = self.k.gens.iter().map(|g| g.lead_degree().unwrap()).collect();
        v.sort();
        v
    }

    /// Every generator of K vanishes under Y_j ↦ f_j t.
    pub fn verify_kernel(&self) -> Result<bool> {
        let a = &self.source.ring;
        let tname = fresh_names(&a.vars, "_t", 1).pop().unwrap();
        let at = extend_ring(a, &[&tname], &[MultiDegree::new(0, 1)])?;
        let xmap: Vec<usize> = (0..self.n).collect();
        let t = Polynomial::var(&at, self.n);
        let mut images: Vec<Polynomial> = (0..self.n).map(|i| Polynomial::var(&at, i)).collect();
        images.extend(self.source.gens.iter().map(|f| f.map_into(&at, &xmap).mul(&t)));
        Ok(self.k.gens.iter().all(|g| g.substitute(&at, &images).is_zero()))
    }

    /// dim S/K = n + 1 (the source ring is a domain, so this always holds for I ≠ 0).
    pub fn check_dimension(&self) -> Result<bool> {
        let h = bigraded_hilbert_series_rees(self)?;
        Ok(h.dimension() == Some(self.n + 1))
    }

    /// Lift of the source generators into S.
    pub fn lifted_generators(&self) -> Vec<Polynomial> {
        let xmap: Vec<usize> = (0..self.n).collect();
        self.source.gens.iter().map(|f| f.map_into(&self.ring, &xmap)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": {
                "vars": self.ring.vars,
                "degrees": self.ring.degrees.iter().map(|d| [d.d1, d.d2]).collect::<Vec<_>>(),
            },
            "generators": self.k.gens.iter().map(|g| {
                let d = g.lead_degree().unwrap();
                json!({"poly": g.to_string(), "bidegree": [d.d1, d.d2]})
            }).collect::<Vec<_>>(),
            "source_degrees": self.degrees,
            "equigenerated": self.equigenerated,
            "d": self.d,
            "u": self.u,
            "n": self.n,
            "r": self.r(),
        })
    }
}

/// Defining ideal of the form ring G = R/IR as a quotient of S: K + (f_1, …, f_r).
pub fn form_ring_presentation(p: &ReesPresentation) -> Ideal {
    let lifted = Ideal::new(&p.ring, p.lifted_generators()).expect("same ring");
    p.k.sum(&lifted).minimalize()
}

/// Fiber cone F = R/mR = k[Y]/π(K), π: X ↦ 0, graded by t-degree.
#[derive(Clone, Debug)]
pub struct FiberConeData {
    /// k[Y_1..Y_r], all degrees (1,0).
    pub ring: Ring,
    pub ideal: Ideal,
    /// Analytic spread l = dim F.
    pub analytic_spread: usize,
    pub series: HilbertSeries,
    /// a-invariant of F when supplied externally.
    pub a_invariant: Option<i64>,
}

impl FiberConeData {
    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.ring.vars,
            "ideal": self.ideal.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "analytic_spread": self.analytic_spread,
            "series": self.series.to_json(),
            "series_text": self.series.to_string(),
            "a_invariant": self.a_invariant,
        })
    }
}

pub fn fiber_cone(p: &ReesPresentation) -> Result<FiberConeData> {
    let r = p.r();
    let yvars: Vec<String> = p.ring.vars[p.n..].to_vec();
    let ring = RingSpec::new(p.ring.field, yvars, vec![MultiDegree::new(1, 0); r], TermOrder::degrevlex())?;
    let mut images: Vec<Polynomial> = vec![Polynomial::zero(&ring); p.n];
    images.extend((0..r).map(|j| Polynomial::var(&ring, j)));
    let gens: Vec<Polynomial> = p.k.gens.iter().map(|g| g.substitute(&ring, &images)).filter(|g| !g.is_zero()).collect();
    let ideal = Ideal::new(&ring, gens)?.minimalize();
    let series = hilbert_series_ideal(&ideal, SeriesOf::Quotient)?;
    let l = series.dimension().ok_or_else(|| Error::Validation("fiber cone has zero series".into()))?;
    Ok(FiberConeData { ring, ideal, analytic_spread: l, series, a_invariant: None })
}

pub fn bigraded_hilbert_series_rees(p: &ReesPresentation) -> Result<HilbertSeries> {
    hilbert_series_ideal(&p.k, SeriesOf::Quotient)
}

/// Interval bracketing the reduction number r_J(I) of a general minimal reduction J.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionBounds {
    pub lower: i64,
    pub upper: i64,
    /// True when the lower bound uses an exact value of a_l(F) read off the resolution.
    pub lower_exact: bool,
    pub notes: Vec<String>,
}

impl ReductionBounds {
    pub fn to_json(&self) -> Value {
        json!({"lower": self.lower, "upper": self.upper, "lower_exact": self.lower_exact, "notes": self.notes})
    }
}

/// Bounds a_l(F) + l ≤ r_J(I) ≤ reg(F).
///
/// With q = r − l, the top local cohomology ends at a_l(F) ≤ t_q − r, with equality when
/// t_q > t_{q+1} (the lowest-degree part of Ext^q(F, S) survives). Otherwise the lower
/// bound falls back to 0.
pub fn reduction_number_bounds(f: &FiberConeData, fiber_betti: &BettiTable) -> Result<ReductionBounds> {
    let inv = crate::betti::invariants_from_shifts(fiber_betti)?;
    let r = f.ring.nvars() as i64;
    let l = f.analytic_spread as i64;
    let q = (r - l) as usize;
    let t_at = |p: usize| inv.t.iter().find(|(pp, _)| *pp == p).map(|(_, d)| d.d1);
    let mut notes = Vec::new();
    let upper = inv.reg.0;
    let (lower, exact) = match f.a_invariant {
        Some(a) => {
            notes.push("a_l(F) supplied as input".into());
            (a + l, true)
        }
        None => match t_at(q) {
            Some(tq) if t_at(q + 1).is_none_or(|t1| tq > t1) => ((tq - r + l).max(0), true),
            _ => {
                notes.push(format!("t_{q} does not dominate t_{}; lower bound is trivial", q + 1));
                (0, false)
            }
        },
    };
    notes.push("upper bound reg(F) holds for general minimal reductions".into());
    Ok(ReductionBounds { lower, upper, lower_exact: exact, notes })
}

/// Smallest m ≤ max_m with J·I^m = I^{m+1}, for J ⊆ I.
pub fn brute_force_reduction_number(i: &Ideal, j: &Ideal, max_m: u32) -> Result<Option<u32>> {
    let mut pw = Ideal::unit(&i.ring);
    for m in 0..=max_m {
        let next = pw.product(i);
        let lhs = hilbert_series_ideal(&j.product(&pw), SeriesOf::Ideal)?;
        let rhs = hilbert_series_ideal(&next, SeriesOf::Ideal)?;
        if lhs.same_function(&rhs) {
            return Ok(Some(m));
        }
        pw = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betti::{graded_betti_table, ModuleKind};
    use crate::hilbert::Laurent;

    fn cubic() -> Ideal {
        let r = RingSpec::polynomial_ring(4);
        Ideal::parse(&r, &["X1*X4 - X2*X3", "X2^2 - X1*X3", "X3^2 - X2*X4"]).unwrap()
    }

    #[test]
    fn twisted_cubic_rees() {
        let p = rees_presentation(&cubic()).unwrap();
        assert_eq!(p.generator_bidegrees(), vec![MultiDegree::new(3, 1); 2]);
        assert!(p.verify_kernel().unwrap());
        assert!(p.check_dimension().unwrap());
        let h = bigraded_hilbert_series_rees(&p).unwrap();
        let expect = HilbertSeries::new(
            Laurent::from_terms(&[(1, 0, 0), (-2, 3, 1), (1, 6, 2)]),
            vec![(1, 0), (1, 0), (1, 0), (1, 0), (2, 1), (2, 1), (2, 1)],
        );
        assert!(h.same_function(&expect), "{h}");
        for j in 0..=4u32 {
            let direct = hilbert_series_ideal(&cubic().power(j), SeriesOf::Ideal).unwrap();
            assert!(h.t_slice(j as i64).same_function(&direct), "slice {j}");
        }
        assert!(p.generator_bidegrees().iter().all(|b| b.d2 < p.r() as i64));
        assert_eq!(fiber_cone(&p).unwrap().analytic_spread, 3);
    }

    #[test]
    fn linear_ideal_kernel_is_koszul_syzygy() {
        let r = RingSpec::polynomial_ring(2);
        let i = Ideal::parse(&r, &["X1", "X2"]).unwrap();
        let p = rees_presentation(&i).unwrap();
        assert_eq!(p.k.gens.len(), 1);
        let expect = crate::poly::parse_polynomial("X1*Y2 - X2*Y1", &p.ring).unwrap();
        let got = p.k.gens[0].clone();
        assert!(got == expect || got == expect.neg(), "{got}");
    }

    #[test]
    fn principal_ideal() {
        let r = RingSpec::polynomial_ring(3);
        let i = Ideal::parse(&r, &["X1^2 + X2*X3"]).unwrap();
        let p = rees_presentation(&i).unwrap();
        assert!(p.k.is_zero());
        let h = bigraded_hilbert_series_rees(&p).unwrap();
        let expect = HilbertSeries::new(Laurent::one(), vec![(1, 0), (1, 0), (1, 0), (2, 1)]);
        assert!(h.same_function(&expect));
        assert_eq!(fiber_cone(&p).unwrap().analytic_spread, 1);
        let g = form_ring_presentation(&p);
        let hg = hilbert_series_ideal(&g, SeriesOf::Quotient).unwrap();
        let a_mod_f = hilbert_series_ideal(&i, SeriesOf::Quotient).unwrap();
        let expect_g = HilbertSeries::new(a_mod_f.num.clone(), [a_mod_f.den.clone(), vec![(2, 1)]].concat());
        assert!(hg.same_function(&expect_g));
    }

    #[test]
    fn gg9_analytic_spread() {
        let r = RingSpec::standard(crate::arith::Field::Rational, &["X", "Y"]);
        let i = Ideal::parse(&r, &["X^7", "Y^7", "X^6*Y + X^2*Y^5"]).unwrap();
        let p = rees_presentation(&i).unwrap();
        assert_eq!(fiber_cone(&p).unwrap().analytic_spread, 2);
        assert!(p.check_dimension().unwrap());
    }

    #[test]
    fn form_ring_slices() {
        let i = cubic();
        let p = rees_presentation(&i).unwrap();
        let g = form_ring_presentation(&p);
        let hg = hilbert_series_ideal(&g, SeriesOf::Quotient).unwrap();
        for j in 0..=3u32 {
            let a = hilbert_series_ideal(&i.power(j), SeriesOf::Ideal).unwrap();
            let b = hilbert_series_ideal(&i.power(j + 1), SeriesOf::Ideal).unwrap();
            let diff = HilbertSeries::new(a.num.sub(&b.num), a.den.clone());
            assert!(hg.t_slice(j as i64).same_function(&diff), "slice {j}");
        }
    }

    #[test]
    fn complete_intersection_bounds() {
        let r = RingSpec::polynomial_ring(3);
        let i = Ideal::parse(&r, &["X1^2", "X2^2"]).unwrap();
        let p = rees_presentation(&i).unwrap();
        let f = fiber_cone(&p).unwrap();
        assert_eq!(f.analytic_spread, 2);
        let b = graded_betti_table(&f.ideal, ModuleKind::Quotient, None).unwrap();
        let rb = reduction_number_bounds(&f, &b).unwrap();
        assert_eq!((rb.lower, rb.upper), (0, 0));
    }
}
