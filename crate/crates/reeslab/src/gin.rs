//! Generic initial ideals in (bi)graded rings, Borel-fixedness, Borel regularity, and the
//! generic-form regularity test.
//!
//! A generic coordinate change is drawn as a unipotent upper-triangular integer matrix on
//! each block of variables of equal degree: x_j ↦ x_j + Σ_{i<j} a_ij x_i with a_ij ∈ [−B, B].
//! The initial ideal is reported only when independent trials agree.

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::groebner::{minimal_monomials, Ideal};
use crate::hilbert::{hilbert_series_ideal, HilbertSeries, SeriesOf};
use crate::poly::{Monomial, MultiDegree, Polynomial, Ring, TermOrder};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// Default entry bound B for random coordinate changes.
pub const DEFAULT_BOUND: i64 = 100;
const MAX_DOUBLINGS: u32 = 4;

/// Variable indices grouped by degree, each group in index order.
fn degree_blocks(ring: &Ring) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<MultiDegree, Vec<usize>> = BTreeMap::new();
    for (i, d) in ring.degrees.iter().enumerate() {
        by.entry(*d).or_default().push(i);
    }
    by.into_values().collect()
}

/// Images of the variables under a random block unipotent upper-triangular change, plus its entries.
fn random_change(ring: &Ring, rng: &mut ChaCha8Rng, bound: i64) -> (Vec<Polynomial>, Vec<i64>) {
    let mut images: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
    let mut entries = Vec::new();
    for block in degree_blocks(ring) {
        for (pj, &j) in block.iter().enumerate() {
            for &i in &block[..pj] {
                let a = rng.gen_range(-bound..=bound);
                entries.push(a);
                if a != 0 {
                    let term = Polynomial::var(ring, i).scale(&ring.field.from_int(a));
                    images[j] = images[j].add(&term);
                }
            }
        }
    }
    (images, entries)
}

/// Generic initial ideal with its provenance.
#[derive(Clone, Debug)]
pub struct GinResult {
    /// Monomial ideal in the ring carrying the requested order.
    pub ideal: Ideal,
    pub trials: usize,
    pub agreements: usize,
    pub seed: u64,
    pub order: TermOrder,
    /// entry bound used by the agreeing round
    pub bound: i64,
    /// SHA-256 of the coordinate-change entries of every trial
    pub matrices_hash: String,
    /// series(gin I) = series(I)
    pub series_preserved: bool,
}

impl GinResult {
    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.ideal.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "trials": self.trials,
            "agreements": self.agreements,
            "seed": self.seed,
            "order": self.order.to_string(),
            "bound": self.bound,
            "matrices_hash": self.matrices_hash,
            "series_preserved": self.series_preserved,
        })
    }
}

fn initial_monomials(i: &Ideal, ring: &Ring, images: &[Polynomial]) -> Result<Vec<Monomial>> {
    let gens: Vec<Polynomial> = i.gens.iter().map(|g| g.substitute(ring, images)).filter(|g| !g.is_zero()).collect();
    let j = Ideal::new(ring, gens)?;
    let gb = j.groebner_basis(&ring.order);
    Ok(minimal_monomials(&gb.leading))
}

/// gin(I) for the given order: the common initial ideal of `trials` random coordinate changes.
pub fn generic_initial_ideal(i: &Ideal, order: &TermOrder, trials: usize, seed: u64) -> Result<GinResult> {
    if !i.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let trials = trials.max(1);
    let ring = i.ring.with_order(order.clone())?;
    let src = Ideal::new(&ring, i.gens.iter().map(|g| g.to_ring(&ring)).collect())?;
    if src.is_zero() {
        return Ok(GinResult {
            ideal: Ideal::zero(&ring),
            trials,
            agreements: trials,
            seed,
            order: order.clone(),
            bound: DEFAULT_BOUND,
            matrices_hash: String::new(),
            series_preserved: true,
        });
    }
    let mut bound = DEFAULT_BOUND;
    let mut last = String::new();
    for round in 0..=MAX_DOUBLINGS {
        let runs: Vec<Result<(Vec<Monomial>, Vec<i64>)>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((round as u64) << 32).wrapping_add(t as u64));
                let (images, entries) = random_change(&ring, &mut rng, bound);
                Ok((initial_monomials(&src, &ring, &images)?, entries))
            })
            .collect();
        let runs: Vec<(Vec<Monomial>, Vec<i64>)> = runs.into_iter().collect::<Result<_>>()?;
        let agreements = runs.iter().filter(|r| r.0 == runs[0].0).count();
        if agreements == trials {
            let mut h = Sha256::new();
            for (_, e) in &runs {
                for x in e {
                    h.update(x.to_le_bytes());
                }
            }
            let ideal = Ideal::monomial(&ring, &runs[0].0);
            let series_preserved = hilbert_series_ideal(&ideal, SeriesOf::Ideal)?.same_function(&hilbert_series_ideal(&src, SeriesOf::Ideal)?);
            if !series_preserved {
                return Err(Error::Validation("initial ideal changed the Hilbert series".into()));
            }
            return Ok(GinResult {
                ideal,
                trials,
                agreements,
                seed,
                order: order.clone(),
                bound,
                matrices_hash: format!("{:x}", h.finalize()),
                series_preserved,
            });
        }
        let other = runs.iter().find(|r| r.0 != runs[0].0).unwrap();
        let show = |ms: &[Monomial]| ms.iter().map(|m| ring.format_monomial(m)).collect::<Vec<_>>().join(", ");
        last = format!("({}) vs ({})", show(&runs[0].0), show(&other.0));
        bound *= 2;
    }
    Err(Error::Unstable(format!("trials disagree after {MAX_DOUBLINGS} bound doublings: {last}")))
}

/// s <_p t: C(t, s) ≢ 0 mod p (Lucas' theorem digit-wise); every s ≤ t when p = 0.
pub fn p_less(s: u32, t: u32, p: u32) -> bool {
    if s > t {
        return false;
    }
    if p == 0 {
        return true;
    }
    let (mut s, mut t) = (s, t);
    while s > 0 || t > 0 {
        if s % p > t % p {
            return false;
        }
        s /= p;
        t /= p;
    }
    true
}

/// A violated Borel move: (x_i / x_j)^s · m ∉ J.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelWitness {
    pub generator: String,
    pub i: String,
    pub j: String,
    pub s: u32,
    pub missing: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelReport {
    pub is_borel: bool,
    pub characteristic: u32,
    pub witness: Option<BorelWitness>,
    /// (δ₁, δ₂): maximal degree components over the minimal generators
    pub delta: Option<(i64, i64)>,
}

impl BorelReport {
    pub fn to_json(&self) -> Value {
        json!({
            "is_borel": self.is_borel,
            "characteristic": self.characteristic,
            "witness": self.witness.as_ref().map(|w| json!({"generator": w.generator, "i": w.i, "j": w.j, "s": w.s, "missing": w.missing})),
            "delta": self.delta.map(|d| [d.0, d.1]),
        })
    }
}

fn in_monomial_ideal(gens: &[Monomial], m: &Monomial) -> bool {
    gens.iter().any(|g| g.divides(m))
}

/// Check every Borel move (within blocks of equal degree) on the minimal generators.
pub fn borel_fix_check(j: &Ideal, char_p: u32) -> Result<BorelReport> {
    let gens = minimal_monomials(&j.monomials()?);
    let ring = &j.ring;
    let blocks = degree_blocks(ring);
    for m in &gens {
        for block in &blocks {
            for (pj, &jv) in block.iter().enumerate() {
                let t = m.0[jv] as u32;
                if t == 0 {
                    continue;
                }
                for &iv in &block[..pj] {
                    for s in 1..=t {
                        if !p_less(s, t, char_p) {
                            continue;
                        }
                        let mut e = m.0.clone();
                        e[jv] -= s as u16;
                        e[iv] += s as u16;
                        let moved = Monomial(e);
                        if !in_monomial_ideal(&gens, &moved) {
                            return Ok(BorelReport {
                                is_borel: false,
                                characteristic: char_p,
                                witness: Some(BorelWitness {
                                    generator: ring.format_monomial(m),
                                    i: ring.vars[iv].clone(),
                                    j: ring.vars[jv].clone(),
                                    s,
                                    missing: ring.format_monomial(&moved),
                                }),
                                delta: None,
                            });
                        }
                    }
                }
            }
        }
    }
    let degs: Vec<MultiDegree> = gens.iter().map(|m| ring.monomial_degree(m)).collect();
    let delta = Some((degs.iter().map(|d| d.d1).max().unwrap_or(0), degs.iter().map(|d| d.d2).max().unwrap_or(0)));
    Ok(BorelReport { is_borel: true, characteristic: char_p, witness: None, delta })
}

/// reg(J) = (δ₁, δ₂) for a Borel-fixed monomial ideal in characteristic 0.
pub fn borel_regularity(j: &Ideal) -> Result<MultiDegree> {
    let p = j.ring.field.characteristic();
    if p != 0 {
        return Err(Error::Unsupported("Borel regularity is read off generators only in characteristic 0".into()));
    }
    let rep = borel_fix_check(j, 0)?;
    match (rep.is_borel, rep.delta) {
        (true, Some((a, b))) => Ok(MultiDegree::new(a, b)),
        _ => Err(Error::InvalidInput("ideal is not Borel-fixed".into())),
    }
}

/// Outcome of the generic-form test for (m, ·)-regularity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BayerStillmanReport {
    pub m: i64,
    pub regular: bool,
    /// number of generic linear forms h_1, …, h_j used
    pub forms_used: usize,
    /// second degrees q checked
    pub q_window: (i64, i64),
    pub seed: u64,
    pub notes: Vec<String>,
}

impl BayerStillmanReport {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "regular": self.regular,
            "forms_used": self.forms_used,
            "q_window": [self.q_window.0, self.q_window.1],
            "seed": self.seed,
            "notes": self.notes,
        })
    }
}

fn dims(series: &HilbertSeries, m: i64, qs: &[i64]) -> Vec<BigInt> {
    qs.iter().map(|&q| series.coefficient(MultiDegree::new(m, q))).collect()
}

/// (m, ·)-regularity via generic forms h_i of degree (1, 0): for each i the colon
/// ((I, h_1..h_{i−1}) : h_i) must agree with (I, h_1..h_{i−1}) in degrees (m, q), until
/// (I, h_1..h_j) fills S in degrees (m, q). Only q in the window are inspected.
pub fn bayer_stillman_check(i: &Ideal, m: i64, q_window: Option<(i64, i64)>, seed: u64) -> Result<BayerStillmanReport> {
    if !i.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let ring = i.ring.clone();
    let xs: Vec<usize> = (0..ring.nvars()).filter(|&v| ring.degrees[v] == MultiDegree::new(1, 0)).collect();
    if xs.len() + ring.degrees.iter().filter(|d| **d == MultiDegree::new(0, 1)).count() != ring.nvars() {
        return Err(Error::InvalidInput("ring must be standard bigraded: variables of degree (1,0) and (0,1)".into()));
    }
    let gdeg = if i.is_zero() { vec![] } else { i.minimalize().generator_degrees()? };
    let window = q_window.unwrap_or_else(|| {
        let ny = (ring.nvars() - xs.len()) as i64;
        (0, gdeg.iter().map(|d| d.d2).max().unwrap_or(0) + ny)
    });
    if window.1 < window.0 {
        return Err(Error::Window("empty second-degree window".into()));
    }
    let qs: Vec<i64> = (window.0.max(0)..=window.1).collect();
    let mut notes = vec![format!(
        "certificate covers second degrees q in [{}, {}] only; the index s of the last nonvanishing local cohomology is not computed",
        window.0, window.1
    )];
    let report = |regular: bool, used: usize, notes: Vec<String>| BayerStillmanReport { m, regular, forms_used: used, q_window: window, seed, notes };
    if let Some(g) = gdeg.iter().find(|g| g.d1 > m) {
        notes.push(format!("a minimal generator has first degree {} > m", g.d1));
        return Ok(report(false, 0, notes));
    }
    let full = HilbertSeries::of_ring(&ring);
    let full_dims = dims(&full, m, &qs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = i.clone();
    for used in 0..=xs.len() {
        let cur_series = hilbert_series_ideal(&cur, SeriesOf::Ideal)?;
        let cur_dims = dims(&cur_series, m, &qs);
        if cur_dims == full_dims {
            notes.push(format!("(I, h_1..h_{used}) fills S in first degree {m}"));
            return Ok(report(true, used, notes));
        }
        if used == xs.len() {
            break;
        }
        let mut h = Polynomial::zero(&ring);
        for &v in &xs {
            let mut a: i64 = 0;
            while a == 0 {
                a = rng.gen_range(-DEFAULT_BOUND..=DEFAULT_BOUND);
            }
            h = h.add(&Polynomial::var(&ring, v).scale(&ring.field.from_int(a)));
        }
        let colon = if cur.is_zero() { Ideal::zero(&ring) } else { cur.colon(&h)? };
        let colon_dims = dims(&hilbert_series_ideal(&colon, SeriesOf::Ideal)?, m, &qs);
        if let Some(k) = (0..qs.len()).find(|&k| colon_dims[k] != cur_dims[k]) {
            notes.push(format!("colon by h_{} is larger in degree ({m},{})", used + 1, qs[k]));
            return Ok(report(false, used + 1, notes));
        }
        let mut gens = cur.gens.clone();
        gens.push(h);
        cur = Ideal::new(&ring, gens)?;
    }
    Err(Error::Window("generic forms exhausted without a certificate".into()))
}

/// Binomial C(t, s) mod p, for cross-checking `p_less`.
pub fn binomial_mod(t: u32, s: u32, p: u32) -> u32 {
    let b = binomial(t as i64, s as i64) % BigInt::from(p);
    u32::try_from(b).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;
    use crate::poly::RingSpec;
    use proptest::prelude::*;

    fn bigraded(xs: &[&str], ys: &[&str]) -> Ring {
        let mut vars: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
        vars.extend(ys.iter().map(|s| s.to_string()));
        let mut degs = vec![MultiDegree::new(1, 0); xs.len()];
        degs.extend(vec![MultiDegree::new(0, 1); ys.len()]);
        RingSpec::new(Field::Rational, vars, degs, TermOrder::degrevlex()).unwrap()
    }

    fn mono_strings(i: &Ideal) -> Vec<String> {
        i.gens.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn gin_of_zero_and_square() {
        let r = RingSpec::standard(Field::Rational, &["X1", "X2"]);
        assert!(generic_initial_ideal(&Ideal::zero(&r), &TermOrder::degrevlex(), 3, 1).unwrap().ideal.is_zero());
        let i = Ideal::parse(&r, &["X1^2 + 2*X1*X2 + X2^2"]).unwrap();
        let g = generic_initial_ideal(&i, &TermOrder::degrevlex(), 3, 1).unwrap();
        assert_eq!(mono_strings(&g.ideal), vec!["X1^2"]);
        assert_eq!(g.agreements, 3);
    }

    #[test]
    fn bigraded_gin_changes_regularity() {
        let r = bigraded(&["X1", "X2"], &["Y1", "Y2"]);
        let i = Ideal::parse(&r, &["X1*Y1", "X1*Y2 + X2*Y1"]).unwrap();
        let g = generic_initial_ideal(&i, &TermOrder::lex(), 3, 7).unwrap();
        let gens = g.ideal.monomials().unwrap();
        let deg11: Vec<String> =
            gens.iter().filter(|m| g.ideal.ring.monomial_degree(m) == MultiDegree::new(1, 1)).map(|m| g.ideal.ring.format_monomial(m)).collect();
        assert_eq!(deg11.len(), 2);
        assert!(deg11.contains(&"X1*Y1".to_string()) && deg11.contains(&"X1*Y2".to_string()));
        assert!(borel_fix_check(&g.ideal, 0).unwrap().is_borel);
        assert_ne!(borel_regularity(&g.ideal).unwrap(), MultiDegree::new(1, 1));
        let b = crate::betti::betti_table(&i, crate::betti::ModuleKind::Ideal, None, "I").unwrap();
        assert_eq!(crate::betti::invariants_from_shifts(&b).unwrap().reg, (1, 1));
    }

    #[test]
    fn borel_checks() {
        let r = RingSpec::standard(Field::Rational, &["X1", "X2"]);
        let sq = Ideal::parse(&r, &["X1^2", "X1*X2", "X2^2"]).unwrap();
        assert!(borel_fix_check(&sq, 0).unwrap().is_borel);
        let x2 = Ideal::parse(&r, &["X2"]).unwrap();
        let rep = borel_fix_check(&x2, 0).unwrap();
        assert!(!rep.is_borel);
        assert_eq!(rep.witness.unwrap().missing, "X1");
        let b = bigraded(&["X1", "X2"], &["Y1"]);
        let j = Ideal::parse(&b, &["X1*Y1", "X2*Y1"]).unwrap();
        assert_eq!(borel_regularity(&j).unwrap(), MultiDegree::new(1, 1));
        assert_eq!(borel_regularity(&Ideal::parse(&r, &["X1^2"]).unwrap()).unwrap(), MultiDegree::new(2, 0));
        // (X1^2, X2^2) is Borel-fixed in characteristic 2 only
        let frob = Ideal::parse(&r, &["X1^2", "X2^2"]).unwrap();
        assert!(!borel_fix_check(&frob, 0).unwrap().is_borel);
        assert!(borel_fix_check(&frob, 2).unwrap().is_borel);
    }

    #[test]
    fn bayer_stillman_fixtures() {
        let r = bigraded(&["X1", "X2"], &["Y1"]);
        let i = Ideal::parse(&r, &["X1^2"]).unwrap();
        assert!(bayer_stillman_check(&i, 2, None, 3).unwrap().regular);
        assert!(!bayer_stillman_check(&i, 1, None, 3).unwrap().regular);
        let r = bigraded(&["X1", "X2"], &["Y1", "Y2"]);
        let i = Ideal::parse(&r, &["X1*Y1", "X1*Y2 + X2*Y1"]).unwrap();
        assert!(bayer_stillman_check(&i, 1, None, 3).unwrap().regular);
        // complete intersection of two quadrics: reg_1 = 3
        let r = bigraded(&["X1", "X2"], &["Y1"]);
        let i = Ideal::parse(&r, &["X1^2", "X2^2"]).unwrap();
        let b = crate::betti::betti_table(&i, crate::betti::ModuleKind::Ideal, None, "I").unwrap();
        assert_eq!(crate::betti::invariants_from_shifts(&b).unwrap().reg.0, 3);
        assert!(!bayer_stillman_check(&i, 2, None, 5).unwrap().regular);
        assert!(bayer_stillman_check(&i, 3, None, 5).unwrap().regular);
    }

    proptest! {
        #[test]
        fn lucas_matches_binomials(t in 0u32..60, s in 0u32..60, pi in 0usize..4) {
            let p = [2u32, 3, 5, 7][pi];
            prop_assume!(s <= t);
            prop_assert_eq!(p_less(s, t, p), binomial_mod(t, s, p) != 0);
        }
    }
}
