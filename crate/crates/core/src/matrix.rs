//! Matrices over the polynomial ring: the generic lower-unitriangular
//! element of the big cell, generic Borel elements, the 0/1 shift matrices
//! on anti-diagonal stripes, conjugation, determinants and ranks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{LazyLock, Mutex};

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::cache::MinorCache;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::modp;
use crate::poly::{Polynomial, VarId};
use crate::poset::{PosetIdeal, Position};
use crate::{IntMatrix, IntPoly};

/// A dense matrix of polynomials. Entry access is 0-based; the 1-based
/// positions of the poset are converted at the boundary.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMatrix<C: Coeff> {
    rows: usize,
    cols: usize,
    data: Vec<Polynomial<C>>,
}

impl<C: Coeff> PolyMatrix<C> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        PolyMatrix {
            rows,
            cols,
            data: vec![Polynomial::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = Polynomial::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial<C>) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                *m.entry_mut(i, j) = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial<C> {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Polynomial<C> {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j) + other.entry(i, j))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must match");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Polynomial::zero();
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(other.entry(k, j)));
            }
            acc
        })
    }

    /// The top-left `r x c` block.
    pub fn top_left(&self, r: usize, c: usize) -> Self {
        assert!(r <= self.rows && c <= self.cols);
        Self::from_fn(r, c, |i, j| self.entry(i, j).clone())
    }

    /// Substitute a constant for a variable entrywise.
    pub fn substitute(&self, v: VarId, c: &C) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).substitute(v, c))
    }

    /// All variables across the entries.
    pub fn vars(&self) -> BTreeSet<VarId> {
        self.data.iter().flat_map(|p| p.vars()).collect()
    }

    fn unitriangular_kind(&self) -> Option<Triangular> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if (0..n).any(|i| !self.entry(i, i).is_one()) {
            return None;
        }
        let above_zero = (0..n).all(|i| (i + 1..n).all(|j| self.entry(i, j).is_zero()));
        let below_zero = (0..n).all(|j| (j + 1..n).all(|i| self.entry(i, j).is_zero()));
        match (below_zero, above_zero) {
            (_, true) => Some(Triangular::Lower),
            (true, false) => Some(Triangular::Upper),
            _ => None,
        }
    }
}

#[derive(PartialEq)]
enum Triangular {
    Lower,
    Upper,
}

/// The generic element of the lower-unitriangular group: 1 on the diagonal,
/// the variable `u_{ij}` below, 0 above.
pub fn generic_unitriangular_lower<C: Coeff>(n: usize) -> PolyMatrix<C> {
    assert!(n >= 1);
    PolyMatrix::from_fn(n, n, |i, j| {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Polynomial::one(),
            Greater => Polynomial::var(VarId::u(i + 1, j + 1)),
            Less => Polynomial::zero(),
        }
    })
}

/// The generic element of `b[S]`: the variable `x_{ij}` at each free
/// position, 0 elsewhere.
pub fn generic_borel_element<C: Coeff>(ideal: &PosetIdeal) -> PolyMatrix<C> {
    let n = ideal.n();
    let free: BTreeSet<Position> = ideal.free_positions().into_iter().collect();
    PolyMatrix::from_fn(n, n, |i, j| {
        let p = Position::new(i + 1, j + 1);
        if free.contains(&p) {
            Polynomial::var(VarId::x(p.i, p.j))
        } else {
            Polynomial::zero()
        }
    })
}

/// The 0/1 shift matrix at level `r`: ones exactly at the on-or-above
/// members of the ideal on the stripe `i + n - j = r`.
///
/// This closed form is pinned down by two facts checked in the claims suite:
/// it vanishes for every `r <= n` when the ideal has no member on or above
/// the diagonal, and adding a maximal element `(s,t)` with `s <= t` to the
/// ideal adds exactly the entry `(s,t)` at level `r = s + n - t`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DeltaMatrix {
    n: usize,
    r: usize,
    support: BTreeSet<Position>,
}

impl DeltaMatrix {
    pub fn for_ideal(ideal: &PosetIdeal, r: usize) -> DeltaMatrix {
        let n = ideal.n();
        assert!(r >= 1 && r <= 2 * n - 1, "level r must be in 1..=2n-1");
        let support = ideal
            .members()
            .iter()
            .copied()
            .filter(|p| p.is_upper() && p.level(n) == r)
            .collect();
        DeltaMatrix { n, r, support }
    }

    /// Arbitrary support on the stripe's ambient grid; the hook the mutation
    /// tests use to knock out single entries.
    pub fn from_support(n: usize, r: usize, support: BTreeSet<Position>) -> DeltaMatrix {
        assert!(support.iter().all(|p| p.in_range(n)));
        DeltaMatrix { n, r, support }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn support(&self) -> &BTreeSet<Position> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn to_matrix<C: Coeff>(&self) -> PolyMatrix<C> {
        let mut m = PolyMatrix::zero(self.n, self.n);
        for p in &self.support {
            *m.entry_mut(p.i - 1, p.j - 1) = Polynomial::one();
        }
        m
    }
}

/// `X + delta` for the generic `X` of `b[S]`.
pub fn shifted_borel_matrix<C: Coeff>(ideal: &PosetIdeal, delta: &DeltaMatrix) -> PolyMatrix<C> {
    assert_eq!(ideal.n(), delta.n(), "ideal and shift matrix sizes differ");
    generic_borel_element::<C>(ideal).add(&delta.to_matrix())
}

/// Exact inverse of a lower or upper unitriangular matrix. The nilpotent
/// part N = A - I gives A^-1 = I - N + N^2 - ...; the result is verified by
/// multiplying back to the identity.
pub fn invert_unitriangular<C: Coeff>(a: &PolyMatrix<C>) -> Result<PolyMatrix<C>> {
    if a.unitriangular_kind().is_none() {
        return Err(Error::domain(
            "matrix is not unitriangular (unit diagonal, zero on one side)",
        ));
    }
    let n = a.rows();
    let mut nilpotent = a.clone();
    for i in 0..n {
        *nilpotent.entry_mut(i, i) = Polynomial::zero();
    }
    let mut inv = PolyMatrix::identity(n);
    let mut power = PolyMatrix::identity(n);
    for k in 1..n {
        power = power.mul(&nilpotent);
        let signed = if k % 2 == 1 {
            PolyMatrix::from_fn(n, n, |i, j| power.entry(i, j).negated())
        } else {
            power.clone()
        };
        inv = inv.add(&signed);
    }
    assert_eq!(a.mul(&inv), PolyMatrix::identity(n), "inverse check failed");
    Ok(inv)
}

/// `g * M * g^-1` for unitriangular `g`.
pub fn conjugate<C: Coeff>(g: &PolyMatrix<C>, m: &PolyMatrix<C>) -> Result<PolyMatrix<C>> {
    if !m.is_square() || g.rows() != m.rows() {
        return Err(Error::domain("conjugation needs square matrices of equal size"));
    }
    let g_inv = invert_unitriangular(g)?;
    Ok(g.mul(m).mul(&g_inv))
}

/// Exact determinant: cofactor expansion for sizes up to 4, fraction-free
/// elimination above.
pub fn determinant<C: Coeff>(a: &PolyMatrix<C>) -> Polynomial<C> {
    assert!(a.is_square(), "determinant needs a square matrix");
    if a.rows() <= 4 {
        determinant_cofactor(a)
    } else {
        determinant_bareiss(a)
    }
}

/// Cofactor expansion along the first column.
pub fn determinant_cofactor<C: Coeff>(a: &PolyMatrix<C>) -> Polynomial<C> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 1 {
        return a.entry(0, 0).clone();
    }
    let mut det = Polynomial::zero();
    for i in 0..n {
        let pivot = a.entry(i, 0);
        if pivot.is_zero() {
            continue;
        }
        let minor = PolyMatrix::from_fn(n - 1, n - 1, |r, c| {
            let rr = if r < i { r } else { r + 1 };
            a.entry(rr, c + 1).clone()
        });
        let cofactor = pivot.mul(&determinant_cofactor(&minor));
        det = if i % 2 == 0 {
            det.add(&cofactor)
        } else {
            det.sub(&cofactor)
        };
    }
    det
}

/// Fraction-free (exact-division) elimination. All interior divisions are
/// exact over an integral domain.
pub fn determinant_bareiss<C: Coeff>(a: &PolyMatrix<C>) -> Polynomial<C> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m: Vec<Vec<Polynomial<C>>> = (0..n)
        .map(|i| (0..n).map(|j| a.entry(i, j).clone()).collect())
        .collect();
    let mut negate = false;
    let mut prev = Polynomial::<C>::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Polynomial::zero();
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .try_div_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            m[i][k] = Polynomial::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.negated()
    } else {
        det
    }
}

/// How to certify ranks of polynomial matrices.
#[derive(Clone, Copy, Debug)]
pub enum RankMode {
    /// Exhaust minors; exact.
    Symbolic,
    /// Evaluate at random points of F_p and take the best rank over the
    /// trials. The result is a lower bound on the true rank which matches it
    /// with probability at least `1 - trials * deg / p` per the usual
    /// random-evaluation bound.
    Randomized { p: u64, trials: u32, seed: u64 },
}

/// Rank over the fraction field of the polynomial ring.
pub fn matrix_rank<C: Coeff>(a: &PolyMatrix<C>, mode: RankMode) -> Result<usize> {
    match mode {
        RankMode::Symbolic => {
            let bound = a.rows().min(a.cols());
            for k in (1..=bound).rev() {
                if find_nonzero_minor(a, k).is_some() {
                    return Ok(k);
                }
            }
            Ok(0)
        }
        RankMode::Randomized { p, trials, seed } => {
            let vars: Vec<VarId> = a.vars().into_iter().collect();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut best = 0;
            for _ in 0..trials {
                let point: BTreeMap<VarId, u64> =
                    vars.iter().map(|&v| (v, rng.gen_range(0..p))).collect();
                let mut rows = Vec::with_capacity(a.rows());
                for i in 0..a.rows() {
                    let mut row = Vec::with_capacity(a.cols());
                    for j in 0..a.cols() {
                        row.push(a.entry(i, j).evaluate(&point, p)?.residue(p));
                    }
                    rows.push(row);
                }
                best = best.max(modp::rank(rows, p));
            }
            Ok(best)
        }
    }
}

/// A nonzero `k x k` minor, as (row indices, column indices), if one exists.
pub fn find_nonzero_minor<C: Coeff>(a: &PolyMatrix<C>, k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if k == 0 || k > a.rows() || k > a.cols() {
        return None;
    }
    for rows in (0..a.rows()).combinations(k) {
        for cols in (0..a.cols()).combinations(k) {
            let sub = PolyMatrix::from_fn(k, k, |i, j| a.entry(rows[i], cols[j]).clone());
            if !determinant(&sub).is_zero() {
                return Some((rows, cols));
            }
        }
    }
    None
}

/// The generic lower-unitriangular g and its inverse are independent of the
/// ideal, so they are computed once per n.
static UNITRIANGULAR_PAIR: LazyLock<Mutex<HashMap<usize, (IntMatrix, IntMatrix)>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn unitriangular_pair(n: usize) -> (IntMatrix, IntMatrix) {
    let mut table = UNITRIANGULAR_PAIR.lock().expect("pair lock");
    table
        .entry(n)
        .or_insert_with(|| {
            let g = generic_unitriangular_lower::<BigInt>(n);
            let g_inv = invert_unitriangular(&g).expect("generic g is unitriangular");
            (g, g_inv)
        })
        .clone()
}

fn validate_level(n: usize, r: usize) -> Result<()> {
    if r < 1 || r > 2 * n - 1 {
        return Err(Error::domain(format!(
            "level r = {r} is outside 1..={} for n = {n}",
            2 * n - 1
        )));
    }
    Ok(())
}

/// The determinant factor for an arbitrary shift matrix: the top-left
/// `min(r,n)` minor of `g (X + delta) g^-1`. Uncached; this is the hook
/// the mutation tests drive with perturbed shifts.
pub fn minor_factor_with_delta(
    ideal: &PosetIdeal,
    r: usize,
    delta: &DeltaMatrix,
) -> Result<IntPoly> {
    let n = ideal.n();
    validate_level(n, r)?;
    let (g, g_inv) = unitriangular_pair(n);
    let m = shifted_borel_matrix::<BigInt>(ideal, delta);
    let conjugated = g.mul(&m).mul(&g_inv);
    let k = r.min(n);
    Ok(determinant(&conjugated.top_left(k, k)))
}

/// The determinant factor `F_r[S]`, memoized by `(n, S, r)`.
pub fn minor_factor(cache: &MinorCache, ideal: &PosetIdeal, r: usize) -> Result<IntPoly> {
    validate_level(ideal.n(), r)?;
    cache.get_or_compute(ideal, r, || {
        minor_factor_with_delta(ideal, r, &DeltaMatrix::for_ideal(ideal, r))
    })
}
