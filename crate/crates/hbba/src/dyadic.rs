//! Exact non-negative dyadic rationals: `num / 2^exp` with an arbitrary-precision
//! numerator.
//!
//! Every probability arising from uniformly distributed operand bits is dyadic, so
//! the whole analytic pipeline runs in this type and equality tests are exact —
//! floats appear only when a value is rendered for a report.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// A non-negative dyadic rational in reduced form: the numerator is odd, or the
/// value is zero with exponent zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigUint::one(),
            exp: 0,
        }
    }

    /// `num / 2^exp`, reduced.
    pub fn new(num: impl Into<BigUint>, exp: u32) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.reduce();
        d
    }

    /// `1 / 2^exp`.
    pub fn inv_pow2(exp: u32) -> Self {
        Dyadic {
            num: BigUint::one(),
            exp,
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0) as u32;
        let shift = tz.min(self.exp);
        if shift > 0 {
            self.num >>= shift;
            self.exp -= shift;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.num.is_one()
    }

    /// Reduced numerator.
    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    /// Power-of-two exponent of the reduced denominator.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic::new(a + b, exp)
    }

    /// `self - other`; `None` if the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        if a < b {
            None
        } else {
            Some(Dyadic::new(a - b, exp))
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        // Product of odd numerators stays odd: already reduced.
        Dyadic {
            num: &self.num * &other.num,
            exp: self.exp + other.exp,
        }
    }

    pub fn mul_int(&self, k: u128) -> Dyadic {
        Dyadic::new(&self.num * BigUint::from(k), self.exp)
    }

    /// `1 - self`; panics if `self > 1`.
    pub fn complement(&self) -> Dyadic {
        Dyadic::one()
            .checked_sub(self)
            .expect("complement of a value greater than one")
    }

    /// Exact comparison against a non-negative finite float (floats are dyadic).
    pub fn cmp_f64(&self, value: f64) -> Ordering {
        match Dyadic::from_f64(value) {
            Some(v) => self.cmp(&v),
            // Negative or non-finite bound: every dyadic is greater.
            None => Ordering::Greater,
        }
    }

    /// Exact conversion from a non-negative finite float.
    pub fn from_f64(value: f64) -> Option<Dyadic> {
        if !value.is_finite() || value < 0.0 {
            return None;
        }
        if value == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = value.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp2) = if raw_exp == 0 {
            (frac, -1074i64) // subnormal
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let num = BigUint::from(mantissa);
        if exp2 >= 0 {
            Some(Dyadic::new(num << (exp2 as u64), 0))
        } else {
            Some(Dyadic::new(num, (-exp2) as u32))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let bits = self.num.bits();
        if bits <= 64 {
            let m = self.num.to_u64().unwrap() as f64;
            return m * (-(self.exp as f64)).exp2();
        }
        // Keep the top 64 bits so huge numerators never round through infinity.
        let shift = bits - 64;
        let m = (&self.num >> shift).to_u64().unwrap() as f64;
        m * ((shift as i64 - self.exp as i64) as f64).exp2()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}
