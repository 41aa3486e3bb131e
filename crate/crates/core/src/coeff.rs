//! Coefficient domains for the polynomial ring: arbitrary-precision
//! integers, arbitrary-precision rationals, and prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modp;

/// Exact scalar types usable as polynomial coefficients.
///
/// The arithmetic bounds come from `num-traits`; the extra methods are the
/// hooks the matrix and evaluation code needs: exact division for
/// fraction-free elimination, and reduction into a prime field for
/// randomized identity testing.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    /// Short tag used in cache headers and reports.
    fn domain_name() -> &'static str;

    /// Exact division: `Some(q)` with `self = q * rhs`, `None` otherwise
    /// (including `rhs = 0`).
    fn div_exact(&self, rhs: &Self) -> Option<Self>;

    /// Image in F_p. Fails when a denominator vanishes mod p or the value
    /// already lives in a different prime field.
    fn to_fp(&self, p: u64) -> Result<Fp>;

    /// Embedding of small integers.
    fn from_int(k: i64) -> Self;

    /// Whether the canonical text form renders with a leading minus.
    fn is_displayed_negative(&self) -> bool;

    /// Magnitude part of the canonical text form.
    fn display_magnitude(&self) -> String;
}

impl Coeff for BigInt {
    fn domain_name() -> &'static str {
        "int"
    }

    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }

    fn to_fp(&self, p: u64) -> Result<Fp> {
        let residue = self.mod_floor(&BigInt::from(p));
        Ok(Fp::new(residue.to_i64().expect("residue fits i64"), p))
    }

    fn from_int(k: i64) -> Self {
        BigInt::from(k)
    }

    fn is_displayed_negative(&self) -> bool {
        self.is_negative()
    }

    fn display_magnitude(&self) -> String {
        self.abs().to_string()
    }
}

impl Coeff for BigRational {
    fn domain_name() -> &'static str {
        "rat"
    }

    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn to_fp(&self, p: u64) -> Result<Fp> {
        let num = self.numer().to_fp(p)?;
        let den = self.denom().to_fp(p)?;
        let den_inv = den
            .inverse()
            .ok_or_else(|| Error::Eval(format!("denominator {} vanishes mod {p}", self.denom())))?;
        Ok(num * den_inv)
    }

    fn from_int(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }

    fn is_displayed_negative(&self) -> bool {
        self.is_negative()
    }

    fn display_magnitude(&self) -> String {
        self.abs().to_string()
    }
}

/// Element of a prime field with a runtime modulus.
///
/// `modulus == 0` marks a plain integer constant that has not yet met a
/// field element (the image of ℤ); arithmetic unifies moduli on first
/// contact. This is what lets the context-free `Zero::zero()` and
/// `One::one()` of `num-traits` exist for a runtime-chosen prime.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    value: i64,
    modulus: u64,
}

impl Fp {
    /// A reduced element of F_p.
    pub fn new(value: i64, p: u64) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        Fp {
            value: value.rem_euclid(p as i64),
            modulus: p,
        }
    }

    /// An integer constant, attached to a field on first contact.
    pub fn int(value: i64) -> Self {
        Fp { value, modulus: 0 }
    }

    /// Canonical residue in `[0, p)`; constants are returned as stored.
    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Residue as `u64`, reducing constants into the given field first.
    pub fn residue(&self, p: u64) -> u64 {
        if self.modulus == 0 {
            self.value.rem_euclid(p as i64) as u64
        } else {
            assert_eq!(self.modulus, p, "prime field modulus mismatch");
            self.value as u64
        }
    }

    pub fn inverse(&self) -> Option<Fp> {
        let p = self.modulus;
        assert!(p != 0, "cannot invert a modulus-free constant");
        modp::inv(self.value as u64, p).map(|v| Fp {
            value: v as i64,
            modulus: p,
        })
    }

    fn unify(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, m) | (m, 0) => m,
            (m1, m2) => {
                assert_eq!(m1, m2, "prime field modulus mismatch: {m1} vs {m2}");
                m1
            }
        }
    }

    fn reduced(value: i128, modulus: u64) -> Fp {
        if modulus == 0 {
            Fp {
                value: i64::try_from(value).expect("integer constant overflow"),
                modulus: 0,
            }
        } else {
            Fp {
                value: value.rem_euclid(modulus as i128) as i64,
                modulus,
            }
        }
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        match (self.modulus, other.modulus) {
            (0, 0) => self.value == other.value,
            (0, p) | (p, 0) => {
                self.value.rem_euclid(p as i64) == other.value.rem_euclid(p as i64)
            }
            (p, q) => p == q && self.value == other.value,
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let m = Fp::unify(self.modulus, rhs.modulus);
        Fp::reduced(self.value as i128 + rhs.value as i128, m)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let m = Fp::unify(self.modulus, rhs.modulus);
        Fp::reduced(self.value as i128 - rhs.value as i128, m)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let m = Fp::unify(self.modulus, rhs.modulus);
        Fp::reduced(self.value as i128 * rhs.value as i128, m)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::reduced(-(self.value as i128), self.modulus)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp::int(0)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp::int(1)
    }
    fn is_one(&self) -> bool {
        if self.modulus == 0 {
            self.value == 1
        } else {
            self.value == 1 && self.modulus > 1
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Coeff for Fp {
    fn domain_name() -> &'static str {
        "fp"
    }

    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let m = Fp::unify(self.modulus, rhs.modulus);
        if m == 0 {
            // two bare constants: exact integer division only
            (rhs.value != 0 && self.value % rhs.value == 0).then(|| Fp::int(self.value / rhs.value))
        } else {
            let rhs = Fp::reduced(rhs.value as i128, m);
            rhs.inverse().map(|inv| Fp::reduced(self.value as i128, m) * inv)
        }
    }

    fn to_fp(&self, p: u64) -> Result<Fp> {
        if self.modulus != 0 && self.modulus != p {
            return Err(Error::domain(format!(
                "element of F_{} cannot be reduced into F_{p}",
                self.modulus
            )));
        }
        Ok(Fp::new(self.value, p))
    }

    fn from_int(k: i64) -> Self {
        Fp::int(k)
    }

    fn is_displayed_negative(&self) -> bool {
        self.value < 0
    }

    fn display_magnitude(&self) -> String {
        self.value.abs().to_string()
    }
}
