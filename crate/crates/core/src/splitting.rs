//! Characteristic-p machinery on the affine chart: the trace map, the
//! splitting criterion, compatibility with coordinate subspaces, and a small
//! expression language for candidate sections with exhaustive search.
//!
//! The trace map needs an explicit variable universe: a monomial is kept
//! only when *every* universe variable occurs with exponent congruent to
//! p-1 mod p, and an absent variable has exponent 0. An implicit universe
//! would silently change answers, so it is always passed in.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::cache::MinorCache;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::matrix::minor_factor;
use crate::poly::{full_universe, Monomial, VarId};
use crate::poset::PosetIdeal;
use crate::{Caps, FpPoly, IntPoly};

/// Image of a single monomial under the trace map, or `None` when it dies.
fn trace_monomial(m: &Monomial, universe: &[VarId], p: u64) -> Option<Monomial> {
    for (v, _) in m.iter() {
        assert!(
            universe.contains(&v),
            "variable {v} lies outside the trace universe"
        );
    }
    let mut out = Vec::new();
    for &v in universe {
        let a = u64::from(m.exp_of(v));
        if a % p != p - 1 {
            return None;
        }
        let b = (a - (p - 1)) / p;
        if b > 0 {
            out.push((v, b as u32));
        }
    }
    Some(Monomial::from_exps(out))
}

/// The Cartier-type trace: `x^a` maps to `x^((a - (p-1)1)/p)` when every
/// universe exponent is congruent to p-1 mod p, else to zero. Coefficients
/// pass through unchanged.
pub fn trace_map(f: &FpPoly, universe: &[VarId], p: u64) -> FpPoly {
    assert!(p >= 2, "p must be a prime");
    FpPoly::from_terms(f.terms().filter_map(|(m, c)| {
        let target = trace_monomial(m, universe, p)?;
        Some((target, c.to_fp(p).expect("coefficient lives in F_p")))
    }))
}

/// A polynomial defines a splitting of the chart exactly when its trace is
/// the constant 1.
pub fn is_splitting(f: &FpPoly, universe: &[VarId], p: u64) -> bool {
    trace_map(f, universe, p).is_one()
}

/// Witness against compatibility: a multiplier monomial m such that the
/// trace of `f * v * m` contains a term outside the ideal `(v)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompatWitness {
    pub multiplier: Monomial,
    pub trace_monomial: Monomial,
}

impl Serialize for CompatWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut out = s.serialize_struct("CompatWitness", 2)?;
        out.serialize_field("multiplier", &self.multiplier.to_string())?;
        out.serialize_field("trace_monomial", &self.trace_monomial.to_string())?;
        out.end()
    }
}

/// Verdict on compatibility of a splitting polynomial with the coordinate
/// subspace `{v = 0}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CompatReport {
    pub variable: VarId,
    pub compatible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CompatWitness>,
}

/// Decides whether `Tr(f * v * m)` lies in `(v)` for every monomial
/// multiplier m, which by additivity settles all of `(v)`.
///
/// Only terms of f with v-exponent at most p-2 can violate: the trace kills
/// a term unless all exponents are congruent to p-1 mod p, and the output
/// lands outside `(v)` only when the v-exponents add up to exactly p-2
/// before the extra factor of v. For such a term the multiplier is forced,
/// entirely at v and up to residue class elsewhere; contributions are
/// bucketed per (multiplier, output monomial) and nonzero sums reported.
pub fn compatible_with_coordinate(
    f: &FpPoly,
    v: VarId,
    universe: &[VarId],
    p: u64,
) -> CompatReport {
    assert!(p >= 2, "p must be a prime");
    assert!(
        universe.contains(&v),
        "subspace variable must be in the universe"
    );
    let mut buckets: BTreeMap<(Monomial, Monomial), u64> = BTreeMap::new();
    for (m, c) in f.terms() {
        let a_v = u64::from(m.exp_of(v));
        if a_v > p - 2 {
            continue;
        }
        let mut multiplier = Vec::new();
        let mut output = Vec::new();
        for &w in universe {
            let a = u64::from(m.exp_of(w));
            let m_w = if w == v {
                p - 2 - a_v
            } else {
                (p as i64 - 1 - a as i64).rem_euclid(p as i64) as u64
            };
            if m_w > 0 {
                multiplier.push((w, m_w as u32));
            }
            // exponent of w in f * v * m, congruent to p-1 by construction
            let total = a + m_w + u64::from(w == v);
            debug_assert_eq!(total % p, p - 1);
            let b = (total - (p - 1)) / p;
            if b > 0 {
                output.push((w, b as u32));
            }
        }
        let key = (Monomial::from_exps(multiplier), Monomial::from_exps(output));
        let entry = buckets.entry(key).or_insert(0);
        *entry = (*entry + c.to_fp(p).expect("coefficient lives in F_p").residue(p)) % p;
    }
    let witness = buckets
        .into_iter()
        .find(|&(_, sum)| sum != 0)
        .map(|((multiplier, trace_monomial), _)| CompatWitness {
            multiplier,
            trace_monomial,
        });
    CompatReport {
        variable: v,
        compatible: witness.is_none(),
        witness,
    }
}

/// Atom of a candidate section.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Atom {
    /// A determinant factor `F_r[S]`.
    Minor {
        #[serde(rename = "S")]
        ideal: PosetIdeal,
        r: usize,
    },
    /// A bare chart variable.
    Var(VarId),
    /// An integer-coefficient polynomial in canonical text form.
    Lit(#[serde(with = "poly_text")] IntPoly),
}

mod poly_text {
    use super::IntPoly;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(poly: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(poly)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<IntPoly, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CandidateFactor {
    pub atom: Atom,
    pub exp: u32,
}

/// A candidate section: a product of atom powers, raised to an outer
/// exponent (typically p-1).
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CandidateExpr {
    pub factors: Vec<CandidateFactor>,
    pub outer: u32,
}

impl CandidateExpr {
    /// Variables must fit inside the chart for the given n, and minor atoms
    /// must be built on the same n.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        for factor in &self.factors {
            match &factor.atom {
                Atom::Minor { ideal, r } => {
                    if ideal.n() != n {
                        return Err(Error::domain(format!(
                            "minor atom is built for n = {}, expected n = {n}",
                            ideal.n()
                        )));
                    }
                    if *r < 1 || *r > 2 * n - 1 {
                        return Err(Error::domain(format!("minor level r = {r} out of range")));
                    }
                }
                Atom::Var(v) => {
                    if !v.in_range(n) {
                        return Err(Error::domain(format!(
                            "variable {v} out of range for n = {n}"
                        )));
                    }
                }
                Atom::Lit(poly) => {
                    if let Some(v) = poly.vars().iter().find(|v| !v.in_range(n)) {
                        return Err(Error::domain(format!(
                            "literal uses {v}, out of range for n = {n}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn guarded_mul(acc: FpPoly, rhs: &FpPoly, caps: &Caps) -> Result<FpPoly> {
    let product = acc.mul(rhs);
    if product.num_terms() > caps.max_terms {
        return Err(Error::Capacity {
            what: "candidate term count",
            actual: product.num_terms(),
            cap: caps.max_terms,
        });
    }
    Ok(product)
}

fn guarded_pow(base: &FpPoly, e: u32, caps: &Caps) -> Result<FpPoly> {
    let mut acc = FpPoly::one();
    for _ in 0..e {
        acc = guarded_mul(acc, base, caps)?;
    }
    Ok(acc)
}

/// Expand a candidate into a polynomial over F_p: multiply out the atom
/// powers, reduce mod p, and raise to the outer exponent. Term counts are
/// capped.
pub fn build_candidate(
    cache: &MinorCache,
    expr: &CandidateExpr,
    p: u64,
    caps: &Caps,
) -> Result<FpPoly> {
    let mut acc = FpPoly::one();
    for factor in &expr.factors {
        let base: FpPoly = match &factor.atom {
            Atom::Minor { ideal, r } => minor_factor(cache, ideal, *r)?.reduce_mod_p(p)?,
            Atom::Var(v) => FpPoly::var(*v),
            Atom::Lit(poly) => poly.reduce_mod_p(p)?,
        };
        let powered = guarded_pow(&base, factor.exp, caps)?;
        acc = guarded_mul(acc, &powered, caps)?;
    }
    guarded_pow(&acc, expr.outer, caps)
}

/// Compatibility of a splitting polynomial with one ideal's chart equations:
/// the coordinates `x_{ij}` for the on-or-above members `(i,j)` of the
/// ideal.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct IdealCompat {
    pub ideal: PosetIdeal,
    pub compatibly_split: bool,
    pub variables: Vec<CompatReport>,
}

fn ideal_compat(f: &FpPoly, ideal: &PosetIdeal, universe: &[VarId], p: u64) -> IdealCompat {
    let variables: Vec<CompatReport> = ideal
        .upper_members()
        .into_iter()
        .map(|pos| compatible_with_coordinate(f, VarId::x(pos.i, pos.j), universe, p))
        .collect();
    IdealCompat {
        ideal: ideal.clone(),
        compatibly_split: variables.iter().all(|r| r.compatible),
        variables,
    }
}

/// Splitting plus per-ideal compatibility for a whole family sharing one n.
/// When the candidate does not split at all, per-ideal detail is skipped.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SimultaneousReport {
    pub n: usize,
    pub p: u64,
    pub candidate: CandidateExpr,
    pub candidate_poly: String,
    pub splits: bool,
    pub trace: String,
    pub ideals: Vec<IdealCompat>,
    pub all_compatible: bool,
}

pub fn simultaneous_report(
    cache: &MinorCache,
    expr: &CandidateExpr,
    p: u64,
    ideals: &[PosetIdeal],
    caps: &Caps,
) -> Result<SimultaneousReport> {
    let Some(first) = ideals.first() else {
        return Err(Error::domain("no ideals given"));
    };
    let n = first.n();
    if let Some(other) = ideals.iter().find(|s| s.n() != n) {
        return Err(Error::domain(format!(
            "ideals mix n = {n} and n = {}",
            other.n()
        )));
    }
    expr.validate_for(n)?;
    let universe = full_universe(n);
    let f = build_candidate(cache, expr, p, caps)?;
    let trace = trace_map(&f, &universe, p);
    let splits = trace.is_one();
    let per_ideal: Vec<IdealCompat> = if splits {
        ideals
            .iter()
            .map(|s| ideal_compat(&f, s, &universe, p))
            .collect()
    } else {
        Vec::new()
    };
    let all_compatible = splits && per_ideal.iter().all(|c| c.compatibly_split);
    Ok(SimultaneousReport {
        n,
        p,
        candidate: expr.clone(),
        candidate_poly: f.to_string(),
        splits,
        trace: trace.to_string(),
        ideals: per_ideal,
        all_compatible,
    })
}

/// Exhaustively enumerate exponent vectors over the atoms (outer exponent
/// p-1) and keep the candidates that split the chart and compatibly split
/// every target ideal. The enumeration counts the last exponent fastest, so
/// results come back in a fixed order; positives are certificates, not
/// heuristics.
pub fn search_candidates(
    cache: &MinorCache,
    n: usize,
    p: u64,
    atoms: &[Atom],
    exponent_bound: u32,
    target_ideals: &[PosetIdeal],
    caps: &Caps,
) -> Result<Vec<CandidateExpr>> {
    let space = (exponent_bound as u128 + 1)
        .checked_pow(atoms.len() as u32)
        .unwrap_or(u128::MAX);
    if space > caps.max_search as u128 {
        return Err(Error::Capacity {
            what: "candidate search space",
            actual: usize::MAX,
            cap: caps.max_search,
        });
    }
    if let Some(bad) = target_ideals.iter().find(|s| s.n() != n) {
        return Err(Error::domain(format!(
            "target ideal has n = {}, expected {n}",
            bad.n()
        )));
    }
    let universe = full_universe(n);
    let mut exps = vec![0u32; atoms.len()];
    let mut found = Vec::new();
    loop {
        let expr = CandidateExpr {
            factors: atoms
                .iter()
                .zip(&exps)
                .map(|(atom, &exp)| CandidateFactor {
                    atom: atom.clone(),
                    exp,
                })
                .collect(),
            outer: (p - 1) as u32,
        };
        expr.validate_for(n)?;
        let f = build_candidate(cache, &expr, p, caps)?;
        if is_splitting(&f, &universe, p)
            && target_ideals
                .iter()
                .all(|s| ideal_compat(&f, s, &universe, p).compatibly_split)
        {
            found.push(expr);
        }
        // odometer, last coordinate fastest
        let mut idx = exps.len();
        loop {
            if idx == 0 {
                return Ok(found);
            }
            idx -= 1;
            if exps[idx] < exponent_bound {
                exps[idx] += 1;
                break;
            }
            exps[idx] = 0;
        }
    }
}
