//! Mechanical verification of the determinant-factor identities, one peeling
//! step at a time, aggregated over whole ideals and whole families.
//!
//! A step adds a maximal element `(s,t)` with `s <= t` to an ideal `S'` and,
//! with `r = s + n - t`, `F' = F_r[S']` and `F = F_r[S]`, checks that
//!
//! - `F'` has degree exactly one in `x_st`,
//! - `F'` is divisible by `x_st`, with quotient `Q`,
//! - `Q` at `x_st = 0` equals `F` (the residue identity),
//! - the first r rows of `X + delta_r[S']` drop below rank r at `x_st = 0`,
//! - those rows show the block pattern that forces the rank drop.
//!
//! All identities are checked over the integers, so they hold in every
//! characteristic.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cache::MinorCache;
use crate::error::{Error, Result};
use crate::matrix::{
    find_nonzero_minor, matrix_rank, minor_factor, minor_factor_with_delta, shifted_borel_matrix,
    DeltaMatrix, RankMode,
};
use crate::poly::VarId;
use crate::poset::{enumerate_ideals, PosetIdeal, Position};
use crate::{Caps, IntMatrix, IntPoly, DEFAULT_RANK_PRIME, DEFAULT_SEED};

/// Result of a single check, with a minimal witness on failure.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass,
    Fail { witness: String },
}

impl CheckOutcome {
    pub fn fail(witness: impl Into<String>) -> CheckOutcome {
        CheckOutcome::Fail {
            witness: witness.into(),
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

/// The five per-step checks.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StepChecks {
    pub degree_one: CheckOutcome,
    pub divisibility: CheckOutcome,
    pub residue_identity: CheckOutcome,
    pub rank_drop: CheckOutcome,
    pub block_zeros: CheckOutcome,
}

impl StepChecks {
    pub fn all_passed(&self) -> bool {
        self.degree_one.passed()
            && self.divisibility.passed()
            && self.residue_identity.passed()
            && self.rank_drop.passed()
            && self.block_zeros.passed()
    }
}

/// Verification record for one peeling step.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StepReport {
    pub s_prime: PosetIdeal,
    pub st: Position,
    pub r: usize,
    /// Actual degree of `F'` in `x_st`; `None` encodes the zero polynomial.
    /// Together with `checks.degree_one` this separates "constant in x_st"
    /// from "higher degree".
    pub degree_in_xst: Option<u32>,
    pub checks: StepChecks,
}

impl StepReport {
    pub fn passed(&self) -> bool {
        self.checks.all_passed()
    }
}

/// Verification record for a whole ideal: base case plus the steps in
/// build-up order (the peel sequence reversed).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainReport {
    pub n: usize,
    pub ideal: PosetIdeal,
    pub base_case: CheckOutcome,
    pub steps: Vec<StepReport>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Family-level summary.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerifySummary {
    pub schema: String,
    pub n: usize,
    pub total_ideals: usize,
    pub passed_ideals: usize,
    pub failed_ideals: usize,
    pub all_passed: bool,
    pub chains: Vec<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerifySummary {
    /// Drop all timing fields; reports are then byte-stable across runs.
    pub fn clear_timings(&mut self) {
        self.elapsed_ms = None;
        for chain in &mut self.chains {
            chain.elapsed_ms = None;
        }
    }
}

/// Rank certification strategy for the rank-drop check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankChoice {
    /// Symbolic minors for n <= 3, randomized evaluation above.
    Auto,
    Symbolic,
    Randomized,
}

/// Knobs for a verification run. Randomized checks derive their per-step
/// seeds from `seed` and the step key, so results do not depend on worker
/// count or scheduling.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub rank: RankChoice,
    pub trials: u32,
    pub prime: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            rank: RankChoice::Auto,
            trials: 20,
            prime: DEFAULT_RANK_PRIME,
        }
    }
}

impl VerifyOptions {
    fn rank_mode(&self, n: usize, step_key: &str) -> RankMode {
        let symbolic = match self.rank {
            RankChoice::Symbolic => true,
            RankChoice::Randomized => false,
            RankChoice::Auto => n <= 3,
        };
        if symbolic {
            RankMode::Symbolic
        } else {
            RankMode::Randomized {
                p: self.prime,
                trials: self.trials,
                seed: derive_seed(self.seed, step_key),
            }
        }
    }
}

/// Deterministic per-step seed: first eight bytes of SHA-256 over the base
/// seed and the step key.
fn derive_seed(seed: u64, key: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(key.as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Base case: an ideal with no member on or above the diagonal must have
/// vanishing shift matrices at every level up to n. Calling it on an ideal
/// with upper members is a domain error.
pub fn verify_base_case(ideal: &PosetIdeal) -> Result<CheckOutcome> {
    if let Some(p) = ideal.upper_members().first() {
        return Err(Error::domain(format!(
            "base case needs b[S] = b, but {p} is on or above the diagonal"
        )));
    }
    Ok(base_case_check(ideal))
}

/// The base-case check itself, usable on any remainder set.
pub fn base_case_check(ideal: &PosetIdeal) -> CheckOutcome {
    if let Some(p) = ideal.upper_members().first() {
        return CheckOutcome::fail(format!(
            "remainder contains {p} with i <= j; peeling should have removed it"
        ));
    }
    for r in 1..=ideal.n() {
        let delta = DeltaMatrix::for_ideal(ideal, r);
        if !delta.is_zero() {
            return CheckOutcome::fail(format!(
                "delta_{r} has nonempty support {:?}",
                delta.support()
            ));
        }
    }
    CheckOutcome::Pass
}

/// Validates a step and returns the grown ideal and the level r.
fn validate_step(s_prime: &PosetIdeal, st: Position) -> Result<(PosetIdeal, usize)> {
    let n = s_prime.n();
    if !st.in_range(n) {
        return Err(Error::PositionOutOfRange {
            i: st.i,
            j: st.j,
            n,
        });
    }
    if !st.is_upper() {
        return Err(Error::domain(format!(
            "step position {st} must satisfy s <= t"
        )));
    }
    if s_prime.contains(st) {
        return Err(Error::domain(format!("{st} is already in the ideal")));
    }
    let grown = s_prime.with_added(st)?;
    if !grown.maximal_elements().contains(&st) {
        return Err(Error::domain(format!(
            "{st} is not maximal in the grown ideal"
        )));
    }
    let r = st.level(n);
    debug_assert!(r >= 1 && r <= n, "s <= t forces r in 1..=n");
    Ok((grown, r))
}

/// Verify one peeling step using the canonical shift matrices, memoizing
/// the determinant factors.
pub fn verify_step(cache: &MinorCache, s_prime: &PosetIdeal, st: Position) -> Result<StepReport> {
    verify_step_with_options(cache, s_prime, st, &VerifyOptions::default())
}

pub fn verify_step_with_options(
    cache: &MinorCache,
    s_prime: &PosetIdeal,
    st: Position,
    opts: &VerifyOptions,
) -> Result<StepReport> {
    let (grown, r) = validate_step(s_prime, st)?;
    let f_prime = minor_factor(cache, s_prime, r)?;
    let f = minor_factor(cache, &grown, r)?;
    let m_prime = shifted_borel_matrix::<BigInt>(s_prime, &DeltaMatrix::for_ideal(s_prime, r));
    Ok(step_core(s_prime, st, r, &f_prime, &f, &m_prime, opts))
}

/// Verify one step with explicit shift matrices instead of the canonical
/// ones. This is the hook the mutation-sensitivity tests drive: a shift
/// matrix with a dropped stripe entry must make some check fail.
pub fn verify_step_with_deltas(
    s_prime: &PosetIdeal,
    st: Position,
    delta_prime: &DeltaMatrix,
    delta: &DeltaMatrix,
    opts: &VerifyOptions,
) -> Result<StepReport> {
    let (grown, r) = validate_step(s_prime, st)?;
    let f_prime = minor_factor_with_delta(s_prime, r, delta_prime)?;
    let f = minor_factor_with_delta(&grown, r, delta)?;
    let m_prime = shifted_borel_matrix::<BigInt>(s_prime, delta_prime);
    Ok(step_core(s_prime, st, r, &f_prime, &f, &m_prime, opts))
}

fn step_core(
    s_prime: &PosetIdeal,
    st: Position,
    r: usize,
    f_prime: &IntPoly,
    f: &IntPoly,
    m_prime: &IntMatrix,
    opts: &VerifyOptions,
) -> StepReport {
    let n = s_prime.n();
    let (s, t) = (st.i, st.j);
    let x_st = VarId::x(s, t);
    let zero = BigInt::zero();

    let degree_in_xst = f_prime.degree_in(x_st);
    let degree_one = match degree_in_xst {
        Some(1) => CheckOutcome::Pass,
        None => CheckOutcome::fail(format!("F_{r}[S'] is the zero polynomial")),
        Some(0) => CheckOutcome::fail(format!("F_{r}[S'] = {f_prime} does not involve {x_st}")),
        Some(d) => {
            let witness = f_prime
                .terms()
                .find(|(m, _)| m.exp_of(x_st) >= 2)
                .map(|(m, _)| m.to_string())
                .unwrap_or_default();
            CheckOutcome::fail(format!("degree {d} in {x_st}; term {witness}"))
        }
    };

    let (divisibility, quotient) = match f_prime.divide_by_variable(x_st) {
        Ok(q) => (CheckOutcome::Pass, Some(q)),
        Err(Error::NotDivisible { term, .. }) => (
            CheckOutcome::fail(format!("term {term} of F_{r}[S'] has no {x_st} factor")),
            None,
        ),
        Err(e) => (CheckOutcome::fail(e.to_string()), None),
    };

    let residue_identity = match &quotient {
        Some(q) => {
            let residue = q.substitute(x_st, &zero);
            let diff = residue.sub(f);
            if diff.is_zero() {
                CheckOutcome::Pass
            } else {
                let (m, c) = diff.leading_term().expect("nonzero difference");
                CheckOutcome::fail(format!(
                    "residue differs from F_{r}[S]; leading term of difference: {c}*{m}"
                ))
            }
        }
        None => CheckOutcome::fail("no quotient: divisibility failed"),
    };

    let step_key = format!("step|n={n}|S'={s_prime}|st=({s},{t})|r={r}");
    let truncated = m_prime.top_left(r, n).substitute(x_st, &zero);
    let rank_drop = match opts.rank_mode(n, &step_key) {
        RankMode::Symbolic => match find_nonzero_minor(&truncated, r) {
            None => CheckOutcome::Pass,
            Some((rows, cols)) => CheckOutcome::fail(format!(
                "nonzero {r}x{r} minor at rows {rows:?}, cols {cols:?} after {x_st} = 0"
            )),
        },
        mode @ RankMode::Randomized { .. } => match matrix_rank(&truncated, mode) {
            Ok(rank) if rank < r => CheckOutcome::Pass,
            Ok(rank) => {
                CheckOutcome::fail(format!("randomized rank {rank} is not below r = {r}"))
            }
            Err(e) => CheckOutcome::fail(format!("rank evaluation failed: {e}")),
        },
    };

    let block_zeros = block_pattern_check(m_prime, st, r, x_st);

    StepReport {
        s_prime: s_prime.clone(),
        st,
        r,
        degree_in_xst,
        checks: StepChecks {
            degree_one,
            divisibility,
            residue_identity,
            rank_drop,
            block_zeros,
        },
    }
}

/// The block pattern on the first r rows of `M = X + delta_r[S']`: zeros at
/// rows s..r, columns 1..t-1; zeros at rows s+1..r, column t; and the bare
/// variable `x_st` at (s,t). Setting `x_st = 0` then wipes the whole block
/// rows s..r x columns 1..t, which forces the rank drop.
fn block_pattern_check(m_prime: &IntMatrix, st: Position, r: usize, x_st: VarId) -> CheckOutcome {
    let (s, t) = (st.i, st.j);
    let expected = IntPoly::var(x_st);
    let at = |i: usize, j: usize| m_prime.entry(i - 1, j - 1);
    if *at(s, t) != expected {
        return CheckOutcome::fail(format!(
            "entry ({s},{t}) = {}, expected the bare variable {x_st}",
            at(s, t)
        ));
    }
    for i in s..=r {
        for j in 1..t {
            if !at(i, j).is_zero() {
                return CheckOutcome::fail(format!("entry ({i},{j}) = {}, expected 0", at(i, j)));
            }
        }
    }
    for i in s + 1..=r {
        if !at(i, t).is_zero() {
            return CheckOutcome::fail(format!("entry ({i},{t}) = {}, expected 0", at(i, t)));
        }
    }
    CheckOutcome::Pass
}

/// Verify a whole ideal: peel down to the strictly-lower remainder, check
/// the base case there, then re-add the peeled elements in build-up order,
/// checking every step.
pub fn verify_chain(cache: &MinorCache, ideal: &PosetIdeal) -> Result<ChainReport> {
    verify_chain_with_options(cache, ideal, &VerifyOptions::default())
}

pub fn verify_chain_with_options(
    cache: &MinorCache,
    ideal: &PosetIdeal,
    opts: &VerifyOptions,
) -> Result<ChainReport> {
    let start = Instant::now();
    let peel = ideal.peel_sequence();
    let mut remainder = ideal.clone();
    for &(p, _) in &peel {
        remainder = remainder.without_maximal(p);
    }
    let base_case = base_case_check(&remainder);
    let mut steps = Vec::with_capacity(peel.len());
    let mut s_prime = remainder;
    for &(p, _) in peel.iter().rev() {
        let report = verify_step_with_options(cache, &s_prime, p, opts)?;
        s_prime = s_prime.with_added(p)?;
        steps.push(report);
    }
    let passed = base_case.passed() && steps.iter().all(StepReport::passed);
    Ok(ChainReport {
        n: ideal.n(),
        ideal: ideal.clone(),
        base_case,
        steps,
        passed,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// Verify every ideal of the family for the given n. Chains run in
/// parallel; the summary lists them in canonical enumeration order, so the
/// output does not depend on scheduling.
pub fn verify_all(
    cache: &MinorCache,
    n: usize,
    opts: &VerifyOptions,
    caps: &Caps,
) -> Result<VerifySummary> {
    if n > caps.max_n {
        return Err(Error::Capacity {
            what: "verify_all n",
            actual: n,
            cap: caps.max_n,
        });
    }
    let start = Instant::now();
    let ideals = enumerate_ideals(n)?;
    let chains: Result<Vec<ChainReport>> = ideals
        .par_iter()
        .map(|ideal| verify_chain_with_options(cache, ideal, opts))
        .collect();
    let chains = chains?;
    let passed_ideals = chains.iter().filter(|c| c.passed).count();
    Ok(VerifySummary {
        schema: "1".into(),
        n,
        total_ideals: chains.len(),
        passed_ideals,
        failed_ideals: chains.len() - passed_ideals,
        all_passed: passed_ideals == chains.len(),
        chains,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::BlockComposition;

    fn pos(i: usize, j: usize) -> Position {
        Position::new(i, j)
    }

    fn ideal(n: usize, members: &[(usize, usize)]) -> PosetIdeal {
        PosetIdeal::new(n, members.iter().map(|&(i, j)| pos(i, j))).unwrap()
    }

    fn xvar(i: usize, j: usize) -> IntPoly {
        IntPoly::var(VarId::x(i, j))
    }

    #[test]
    fn base_case_examples() {
        assert!(verify_base_case(&ideal(2, &[(2, 1)])).unwrap().passed());
        assert!(verify_base_case(&PosetIdeal::empty(3)).unwrap().passed());
        assert!(verify_base_case(&PosetIdeal::strict_lower(3))
            .unwrap()
            .passed());
        // precondition: no members on or above the diagonal
        assert!(verify_base_case(&ideal(2, &[(2, 1), (1, 1)])).is_err());
    }

    #[test]
    fn step_from_worked_example() {
        // S' = {(2,1)}, st = (1,1), r = 2: F' = x11*x22, Q = x22, F = x22
        let cache = MinorCache::in_memory();
        let report = verify_step(&cache, &ideal(2, &[(2, 1)]), pos(1, 1)).unwrap();
        assert_eq!(report.r, 2);
        assert_eq!(report.degree_in_xst, Some(1));
        assert!(report.passed(), "{report:?}");
        let f_prime = minor_factor(&cache, &ideal(2, &[(2, 1)]), 2).unwrap();
        assert_eq!(f_prime, &xvar(1, 1) * &xvar(2, 2));
        let q = f_prime.divide_by_variable(VarId::x(1, 1)).unwrap();
        assert_eq!(q, xvar(2, 2));
        let f = minor_factor(&cache, &ideal(2, &[(2, 1), (1, 1)]), 2).unwrap();
        assert_eq!(q.substitute(VarId::x(1, 1), &BigInt::zero()), f);
    }

    #[test]
    fn step_with_unit_shift_entry() {
        // S' = {(2,1),(1,1)}, st = (2,2), r = 2: F' = x22, Q = 1, F = 1
        let cache = MinorCache::in_memory();
        let s_prime = ideal(2, &[(2, 1), (1, 1)]);
        let report = verify_step(&cache, &s_prime, pos(2, 2)).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(minor_factor(&cache, &s_prime, 2).unwrap(), xvar(2, 2));
        assert_eq!(
            minor_factor(&cache, &ideal(2, &[(2, 1), (1, 1), (2, 2)]), 2).unwrap(),
            IntPoly::one()
        );
    }

    #[test]
    fn step_at_level_one_in_n3() {
        // S' = full minus (1,3), st = (1,3), r = 1: quotient u21*u32 - u31
        let cache = MinorCache::in_memory();
        let s_prime = PosetIdeal::new(
            3,
            PosetIdeal::full(3)
                .members()
                .iter()
                .copied()
                .filter(|&p| p != pos(1, 3)),
        )
        .unwrap();
        let report = verify_step(&cache, &s_prime, pos(1, 3)).unwrap();
        assert_eq!(report.r, 1);
        assert!(report.passed(), "{report:?}");
        let q = minor_factor(&cache, &s_prime, 1)
            .unwrap()
            .divide_by_variable(VarId::x(1, 3))
            .unwrap();
        let expected = &(&IntPoly::var(VarId::u(2, 1)) * &IntPoly::var(VarId::u(3, 2)))
            - &IntPoly::var(VarId::u(3, 1));
        assert_eq!(q, expected);
    }

    #[test]
    fn step_validation_errors() {
        let cache = MinorCache::in_memory();
        // (2,1) is below the diagonal
        assert!(verify_step(&cache, &PosetIdeal::empty(2), pos(2, 1)).is_err());
        // adding (1,2) to the empty ideal is not downward closed
        assert!(verify_step(&cache, &PosetIdeal::empty(2), pos(1, 2)).is_err());
        // already present
        assert!(verify_step(&cache, &ideal(2, &[(2, 1)]), pos(2, 1)).is_err());
        // out of range
        assert!(verify_step(&cache, &PosetIdeal::empty(2), pos(3, 3)).is_err());
    }

    #[test]
    fn chain_for_full_square_n2() {
        let cache = MinorCache::in_memory();
        let report = verify_chain(&cache, &PosetIdeal::full(2)).unwrap();
        assert!(report.passed);
        assert_eq!(report.steps.len(), 3);
        // build-up order is the reversed peel: (2,2), (1,1), then (1,2)
        let order: Vec<Position> = report.steps.iter().map(|s| s.st).collect();
        assert_eq!(order, vec![pos(2, 2), pos(1, 1), pos(1, 2)]);
        assert!(report.base_case.passed());
    }

    #[test]
    fn chain_with_no_steps() {
        let cache = MinorCache::in_memory();
        let report = verify_chain(&cache, &PosetIdeal::strict_lower(3)).unwrap();
        assert!(report.passed);
        assert!(report.steps.is_empty());
    }

    #[test]
    fn borel_parabolic_chain_n3() {
        let cache = MinorCache::in_memory();
        let borel =
            crate::poset::parabolic_to_ideal(&BlockComposition::new(vec![1, 1, 1]).unwrap());
        let report = verify_chain(&cache, &borel).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn verify_all_small() {
        let cache = MinorCache::in_memory();
        let caps = Caps::default();
        let opts = VerifyOptions::default();
        let summary = verify_all(&cache, 1, &opts, &caps).unwrap();
        assert_eq!((summary.total_ideals, summary.passed_ideals), (2, 2));
        let summary = verify_all(&cache, 2, &opts, &caps).unwrap();
        assert_eq!((summary.total_ideals, summary.passed_ideals), (6, 6));
        assert!(summary.all_passed);
        // capacity guard
        assert!(verify_all(&cache, 5, &opts, &caps).is_err());
    }

    #[test]
    fn structural_degree_is_at_most_one() {
        // separate from the exact-degree-one claim: F' can never be of
        // degree two or more in the added variable
        let cache = MinorCache::in_memory();
        for n in 1..=3 {
            for s in enumerate_ideals(n).unwrap() {
                let peel = s.peel_sequence();
                let mut s_prime = s.clone();
                for &(p, _) in &peel {
                    s_prime = s_prime.without_maximal(p);
                }
                for &(p, r) in peel.iter().rev() {
                    let f_prime = minor_factor(&cache, &s_prime, r).unwrap();
                    let d = f_prime.degree_in(VarId::x(p.i, p.j));
                    assert!(d <= Some(1), "degree {d:?} at step {p} of {s}");
                    s_prime = s_prime.with_added(p).unwrap();
                }
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let cache = MinorCache::in_memory();
        let mut report = verify_chain(&cache, &ideal(2, &[(2, 1), (1, 1)])).unwrap();
        report.elapsed_ms = None;
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["ideal"]["members"][0], serde_json::json!([1, 1]));
        assert_eq!(json["steps"][0]["st"], serde_json::json!([1, 1]));
        assert_eq!(json["steps"][0]["r"], serde_json::json!(2));
        assert_eq!(
            json["steps"][0]["checks"]["degree_one"]["status"],
            serde_json::json!("pass")
        );
        assert!(json.get("elapsed_ms").is_none());
    }
}
