//! Sparse multivariate polynomials with exact coefficients.
//!
//! Variables are the coordinates of the big-cell chart: `u_{ij}` (i > j) for
//! the lower-unitriangular directions and `x_{ij}` (i <= j) for the Borel
//! directions. Terms are kept in a canonical graded-lex order, so two
//! polynomials are equal exactly when their text forms are byte-identical.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeff::{Coeff, Fp};
use crate::error::{Error, Result};
use crate::modp;

/// A chart coordinate. The total order (all `u` before all `x`, row-major
/// within each block) fixes the canonical term order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum VarId {
    /// `u_{ij}`, entry of the generic lower-unitriangular matrix, i > j.
    U { i: usize, j: usize },
    /// `x_{ij}`, entry of the generic Borel element, i <= j.
    X { i: usize, j: usize },
}

impl VarId {
    /// The variable `u_{ij}`; requires i > j.
    pub fn u(i: usize, j: usize) -> VarId {
        assert!(i > j && j >= 1 && i <= 9, "u variable needs 1 <= j < i <= 9");
        VarId::U { i, j }
    }

    /// The variable `x_{ij}`; requires i <= j.
    pub fn x(i: usize, j: usize) -> VarId {
        assert!(i >= 1 && i <= j && j <= 9, "x variable needs 1 <= i <= j <= 9");
        VarId::X { i, j }
    }

    pub fn indices(&self) -> (usize, usize) {
        match *self {
            VarId::U { i, j } | VarId::X { i, j } => (i, j),
        }
    }

    pub fn in_range(&self, n: usize) -> bool {
        let (i, j) = self.indices();
        i >= 1 && i <= n && j >= 1 && j <= n
    }

    fn sort_key(&self) -> (u8, usize, usize) {
        match *self {
            VarId::U { i, j } => (0, i, j),
            VarId::X { i, j } => (1, i, j),
        }
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarId::U { i, j } => write!(f, "u{i}{j}"),
            VarId::X { i, j } => write!(f, "x{i}{j}"),
        }
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 3 {
            return Err(Error::Parse(format!("bad variable name {s:?}")));
        }
        let digit = |b: u8| -> Result<usize> {
            if b.is_ascii_digit() && b != b'0' {
                Ok((b - b'0') as usize)
            } else {
                Err(Error::Parse(format!("bad variable index in {s:?}")))
            }
        };
        let i = digit(bytes[1])?;
        let j = digit(bytes[2])?;
        match bytes[0] {
            b'u' if i > j => Ok(VarId::U { i, j }),
            b'u' => Err(Error::Parse(format!("u variable needs i > j: {s:?}"))),
            b'x' if i <= j => Ok(VarId::X { i, j }),
            b'x' => Err(Error::Parse(format!("x variable needs i <= j: {s:?}"))),
            _ => Err(Error::Parse(format!("unknown variable kind {s:?}"))),
        }
    }
}

impl Serialize for VarId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VarId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All coordinates of the chart: `u_{ij}` for i > j then `x_{ij}` for
/// i <= j, each block row-major. This is the variable universe of the
/// trace-map computations.
pub fn full_universe(n: usize) -> Vec<VarId> {
    let mut vars = Vec::new();
    for i in 1..=n {
        for j in 1..i {
            vars.push(VarId::u(i, j));
        }
    }
    for i in 1..=n {
        for j in i..=n {
            vars.push(VarId::x(i, j));
        }
    }
    vars
}

/// A power product of variables. Exponents are kept sorted by variable with
/// no explicit zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Build from arbitrary (variable, exponent) pairs; merges duplicates
    /// and drops zero exponents.
    pub fn from_exps(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Monomial {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            exps: map.into_iter().collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn exp_of(&self, v: VarId) -> u32 {
        self.exps
            .binary_search_by(|&(w, _)| w.cmp(&v))
            .map(|idx| self.exps[idx].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_exps(self.iter().chain(other.iter()))
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial {
                exps: self.exps.iter().map(|&(v, k)| (v, k * e)).collect(),
            }
        }
    }

    /// Componentwise division; `None` when some exponent of `other` exceeds
    /// this monomial's.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut rhs = other.exps.iter().peekable();
        for &(v, e) in &self.exps {
            let mut e_out = e;
            if let Some(&&(w, f)) = rhs.peek() {
                if w == v {
                    if f > e {
                        return None;
                    }
                    e_out = e - f;
                    rhs.next();
                }
            }
            if e_out > 0 {
                out.push((v, e_out));
            }
        }
        if rhs.next().is_some() {
            return None; // other has a variable this monomial lacks
        }
        Some(Monomial { exps: out })
    }

    /// Drop a variable entirely (used by substitution).
    pub fn without(&self, v: VarId) -> Monomial {
        Monomial {
            exps: self.exps.iter().copied().filter(|&(w, _)| w != v).collect(),
        }
    }
}

impl Ord for Monomial {
    /// Graded order, ties broken lexicographically: at the earliest variable
    /// where the exponents differ, the larger exponent wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let mut a = self.exps.iter();
                let mut b = other.exps.iter();
                let (mut pa, mut pb) = (a.next(), b.next());
                loop {
                    match (pa, pb) {
                        (None, None) => return Ordering::Equal,
                        (Some(_), None) => return Ordering::Greater,
                        (None, Some(_)) => return Ordering::Less,
                        (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                            Ordering::Less => return Ordering::Greater,
                            Ordering::Greater => return Ordering::Less,
                            Ordering::Equal => {
                                if ea != eb {
                                    return ea.cmp(&eb);
                                }
                                pa = a.next();
                                pb = b.next();
                            }
                        },
                    }
                }
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial over the coefficient domain `C`, always in canonical
/// form: no zero coefficients, terms ordered graded-lex.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C: Coeff> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_int(k: i64) -> Self {
        Self::constant(C::from_int(k))
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(Monomial::var(v), C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .is_some_and(|c| *c == C::one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// The canonically largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn negated(&self) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone())),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Maximum exponent of `v`; `None` is the degree of the zero polynomial.
    pub fn degree_in(&self, v: VarId) -> Option<u32> {
        self.terms.keys().map(|m| m.exp_of(v)).max()
    }

    /// All variables that occur.
    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    /// Exact substitution of a constant for a variable.
    pub fn substitute(&self, v: VarId, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, coeff) in &self.terms {
            let e = m.exp_of(v);
            if e == 0 {
                out.add_term(m.clone(), coeff.clone());
            } else {
                let scaled = coeff.clone() * pow_coeff(c, e);
                out.add_term(m.without(v), scaled);
            }
        }
        out
    }

    /// Exact quotient by the variable `v`; every term must contain `v`.
    /// The error carries the first offending term as witness.
    pub fn divide_by_variable(&self, v: VarId) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp_of(v);
            if e == 0 {
                return Err(Error::NotDivisible {
                    var: v,
                    term: m.clone(),
                });
            }
            let mut reduced: Vec<(VarId, u32)> = Vec::new();
            for (w, k) in m.iter() {
                let k = if w == v { k - 1 } else { k };
                if k > 0 {
                    reduced.push((w, k));
                }
            }
            out.add_term(Monomial { exps: reduced }, c.clone());
        }
        Ok(out)
    }

    /// Exact polynomial division: `Some(q)` with `self = q * g`, else `None`.
    /// Used by the fraction-free elimination, where divisions are exact by
    /// construction.
    pub fn try_div_exact(&self, g: &Self) -> Option<Self> {
        if g.is_zero() {
            return None;
        }
        let (gm, gc) = {
            let (m, c) = g.leading_term()?;
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading_term().expect("nonzero");
                (m.clone(), c.clone())
            };
            let m = rm.try_div(&gm)?;
            let c = rc.div_exact(&gc)?;
            let t = Self::monomial(m, c);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(g));
        }
        Some(quot)
    }

    /// Exact evaluation over F_p. Every variable of the polynomial must be
    /// assigned a residue.
    pub fn evaluate(&self, point: &BTreeMap<VarId, u64>, p: u64) -> Result<Fp> {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = c.to_fp(p)?.residue(p);
            for (v, e) in m.iter() {
                let val = point.get(&v).ok_or_else(|| {
                    Error::Eval(format!("variable {v} is not assigned a value"))
                })?;
                t = modp::mul(t, modp::pow(*val, u64::from(e), p), p);
            }
            acc = modp::add(acc, t, p);
        }
        Ok(Fp::new(acc as i64, p))
    }

    /// Coefficient-wise reduction into F_p; vanishing terms are dropped.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Polynomial<Fp>> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.to_fp(p)?);
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

fn pow_coeff<C: Coeff>(c: &C, e: u32) -> C {
    let mut acc = C::one();
    for _ in 0..e {
        acc = acc * c.clone();
    }
    acc
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_displayed_negative();
            let mag = c.display_magnitude();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Canonical text form mirrors the term map: a list of
/// `[monomial, coefficient]` pairs, leading term first.
impl<C: Coeff> Serialize for Polynomial<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| (m.to_string(), c.to_string())),
        )
    }
}

impl<C: Coeff> std::ops::Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        Polynomial::add(self, rhs)
    }
}

impl<C: Coeff> std::ops::Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        Polynomial::sub(self, rhs)
    }
}

impl<C: Coeff> std::ops::Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        Polynomial::mul(self, rhs)
    }
}

impl<C: Coeff> std::ops::Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        self.negated()
    }
}

// ---- text parsing (integer coefficients) ----

#[derive(Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Int(BigInt),
    Var(VarId),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            b'-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            b'*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            b'^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &s[start..i];
                toks.push(Tok::Int(lit.parse().map_err(|_| {
                    Error::Parse(format!("bad integer literal {lit:?}"))
                })?));
            }
            b'u' | b'x' => {
                if i + 3 > bytes.len() {
                    return Err(Error::Parse(format!("truncated variable at {:?}", &s[i..])));
                }
                let name = &s[i..i + 3];
                toks.push(Tok::Var(name.parse()?));
                i += 3;
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character {:?} in polynomial",
                    b as char
                )))
            }
        }
    }
    Ok(toks)
}

/// Parses the canonical text form, e.g. `"3*u21^2*x12 - x11"`.
impl FromStr for Polynomial<BigInt> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks = lex(s)?;
        let mut pos = 0;
        let mut poly = Polynomial::zero();
        if toks.is_empty() {
            return Err(Error::Parse("empty polynomial text".into()));
        }
        loop {
            // optional sign
            let mut sign = BigInt::from(1);
            while pos < toks.len() {
                match toks[pos] {
                    Tok::Plus => pos += 1,
                    Tok::Minus => {
                        sign = -sign;
                        pos += 1;
                    }
                    _ => break,
                }
            }
            // one term: factors joined by '*'
            let mut coeff = sign;
            let mut mono = Monomial::one();
            let mut expect_factor = true;
            while pos < toks.len() {
                match &toks[pos] {
                    Tok::Int(k) if expect_factor => {
                        coeff *= k;
                        pos += 1;
                        expect_factor = false;
                    }
                    Tok::Var(v) if expect_factor => {
                        let v = *v;
                        pos += 1;
                        let mut e = 1u32;
                        if pos < toks.len() && toks[pos] == Tok::Caret {
                            pos += 1;
                            match toks.get(pos) {
                                Some(Tok::Int(k)) => {
                                    e = k.to_string().parse().map_err(|_| {
                                        Error::Parse(format!("exponent {k} out of range"))
                                    })?;
                                    pos += 1;
                                }
                                _ => return Err(Error::Parse("expected exponent after ^".into())),
                            }
                        }
                        mono = mono.mul(&Monomial::var(v).pow(e));
                        expect_factor = false;
                    }
                    Tok::Star if !expect_factor => {
                        pos += 1;
                        expect_factor = true;
                    }
                    _ => break,
                }
            }
            if expect_factor {
                return Err(Error::Parse("dangling operator in polynomial".into()));
            }
            poly.add_term(mono, coeff);
            if pos == toks.len() {
                break;
            }
            match toks[pos] {
                Tok::Plus | Tok::Minus => continue,
                _ => return Err(Error::Parse("expected + or - between terms".into())),
            }
        }
        Ok(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntPoly;

    fn x(i: usize, j: usize) -> IntPoly {
        IntPoly::var(VarId::x(i, j))
    }

    fn u(i: usize, j: usize) -> IntPoly {
        IntPoly::var(VarId::u(i, j))
    }

    #[test]
    fn var_order_is_u_block_then_x_block_row_major() {
        let universe = full_universe(3);
        let names: Vec<String> = universe.iter().map(|v| v.to_string()).collect();
        assert_eq!(
            names,
            ["u21", "u31", "u32", "x11", "x12", "x13", "x22", "x23", "x33"]
        );
        assert!(universe.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn difference_of_squares() {
        let f = &(&x(1, 1) + &IntPoly::one()) * &(&x(1, 1) - &IntPoly::one());
        let expected = &(&x(1, 1) * &x(1, 1)) - &IntPoly::one();
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "x11^2 - 1");
    }

    #[test]
    fn freshman_dream_mod_2() {
        let f = (&x(1, 1) + &x(1, 2)).pow(2).reduce_mod_p(2).unwrap();
        let expected = (&(&x(1, 1) * &x(1, 1)) + &(&x(1, 2) * &x(1, 2)))
            .reduce_mod_p(2)
            .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn multiplication_by_zero_clears_terms() {
        let f = &x(1, 2) + &u(2, 1);
        let z = &f * &IntPoly::zero();
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn degree_in_variable() {
        // x11^2 * x12 + x12^3
        let f = &(&(&x(1, 1) * &x(1, 1)) * &x(1, 2)) + &x(1, 2).pow(3);
        assert_eq!(f.degree_in(VarId::x(1, 1)), Some(2));
        assert_eq!(f.degree_in(VarId::u(2, 1)), Some(0));
        assert_eq!(IntPoly::zero().degree_in(VarId::x(1, 1)), None);
    }

    #[test]
    fn substitution() {
        // x11*x12 + x12, x11 := 0 -> x12
        let f = &(&x(1, 1) * &x(1, 2)) + &x(1, 2);
        assert_eq!(f.substitute(VarId::x(1, 1), &BigInt::from(0)), x(1, 2));
        // (x11+1)*x12 at x11 := -1 -> 0
        let g = &(&x(1, 1) + &IntPoly::one()) * &x(1, 2);
        assert!(g.substitute(VarId::x(1, 1), &BigInt::from(-1)).is_zero());
    }

    #[test]
    fn substitute_fp_example() {
        // x^2 + x + 1 over F_2 at x := 1 is 1
        let f = crate::FpPoly::from_terms([
            (Monomial::var(VarId::x(1, 1)).pow(2), Fp::new(1, 2)),
            (Monomial::var(VarId::x(1, 1)), Fp::new(1, 2)),
            (Monomial::one(), Fp::new(1, 2)),
        ]);
        let v = f.substitute(VarId::x(1, 1), &Fp::new(1, 2));
        assert_eq!(v, crate::FpPoly::constant(Fp::new(1, 2)));
    }

    #[test]
    fn divide_by_variable_success_and_witness() {
        let v = VarId::x(1, 1);
        // x11^2*x12 + x11*x12^2 -> x11*x12 + x12^2
        let f = &(&(&x(1, 1) * &x(1, 1)) * &x(1, 2)) + &(&x(1, 1) * &(&x(1, 2) * &x(1, 2)));
        let q = f.divide_by_variable(v).unwrap();
        assert_eq!(q, &(&x(1, 1) * &x(1, 2)) + &(&x(1, 2) * &x(1, 2)));
        // x11 + x12 is not divisible; witness is the x12 term
        let g = &x(1, 1) + &x(1, 2);
        match g.divide_by_variable(v) {
            Err(Error::NotDivisible { var, term }) => {
                assert_eq!(var, v);
                assert_eq!(term, Monomial::var(VarId::x(1, 2)));
            }
            other => panic!("expected NotDivisible, got {other:?}"),
        }
        // x11*x22 / x11 = x22
        let h = &x(1, 1) * &x(2, 2);
        assert_eq!(h.divide_by_variable(v).unwrap(), x(2, 2));
    }

    #[test]
    fn evaluate_over_prime_field() {
        // x^2 - 1 at x = 3 over F_7 -> 1
        let f = &(&x(1, 1) * &x(1, 1)) - &IntPoly::one();
        let point = BTreeMap::from([(VarId::x(1, 1), 3u64)]);
        assert_eq!(f.evaluate(&point, 7).unwrap(), Fp::new(1, 7));
        // constant term at the zero point
        let g = &(&x(1, 1) * &x(1, 2)) + &IntPoly::from_int(5);
        let zeros = BTreeMap::from([(VarId::x(1, 1), 0u64), (VarId::x(1, 2), 0u64)]);
        assert_eq!(g.evaluate(&zeros, 7).unwrap(), Fp::new(5, 7));
        // unassigned variable errors
        assert!(f.evaluate(&BTreeMap::new(), 7).is_err());
    }

    #[test]
    fn rational_coefficient_evaluation() {
        use num_rational::BigRational;
        // (1/2) * x at x = 1 over F_5 -> 3
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let f = crate::RatPoly::monomial(Monomial::var(VarId::x(1, 1)), half);
        let point = BTreeMap::from([(VarId::x(1, 1), 1u64)]);
        assert_eq!(f.evaluate(&point, 5).unwrap(), Fp::new(3, 5));
    }

    #[test]
    fn reduce_mod_p_examples() {
        // 2*x11*x12 + 3*x12 mod 2 -> x12
        let f = &(&x(1, 1) * &x(1, 2)).scale(&BigInt::from(2))
            + &x(1, 2).scale(&BigInt::from(3));
        let r = f.reduce_mod_p(2).unwrap();
        assert_eq!(r, x(1, 2).reduce_mod_p(2).unwrap());
        // 6*x11 mod 2 -> 0
        assert!(x(1, 1).scale(&BigInt::from(6)).reduce_mod_p(2).unwrap().is_zero());
        // x11^2 - 1 mod 3 -> x11^2 + 2
        let g = &(&x(1, 1) * &x(1, 1)) - &IntPoly::one();
        assert_eq!(g.reduce_mod_p(3).unwrap().to_string(), "x11^2 + 2");
    }

    #[test]
    fn exact_polynomial_division() {
        let f = &(&x(1, 1) + &x(1, 2)) * &(&u(2, 1) + &x(2, 2));
        assert_eq!(
            f.try_div_exact(&(&x(1, 1) + &x(1, 2))).unwrap(),
            &u(2, 1) + &x(2, 2)
        );
        assert_eq!(f.try_div_exact(&(&x(1, 1) + &u(2, 1))), None);
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let f = &(&(&u(2, 1) * &u(2, 1)) * &x(1, 2)).scale(&BigInt::from(3)) - &x(1, 1);
        assert_eq!(f.to_string(), "3*u21^2*x12 - x11");
        let back: IntPoly = f.to_string().parse().unwrap();
        assert_eq!(back, f);
        let z: IntPoly = "0".parse().unwrap();
        assert!(z.is_zero());
        let c: IntPoly = "-7".parse().unwrap();
        assert_eq!(c, IntPoly::from_int(-7));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("x1".parse::<IntPoly>().is_err());
        assert!("x21".parse::<IntPoly>().is_err()); // x needs i <= j
        assert!("u12".parse::<IntPoly>().is_err()); // u needs i > j
        assert!("x11 +".parse::<IntPoly>().is_err());
        assert!("x11 ^ y".parse::<IntPoly>().is_err());
    }

    #[test]
    fn canonical_order_puts_higher_degree_first() {
        let f = &(&(&u(2, 1) * &x(1, 1)) + &x(1, 1)) + &IntPoly::from_int(2);
        assert_eq!(f.to_string(), "u21*x11 + x11 + 2");
    }
}
