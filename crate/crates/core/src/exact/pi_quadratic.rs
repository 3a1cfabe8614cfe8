//! Exact values of the form `a + b·π²` with rational `a`, `b`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;

/// π² to 59 decimal places, used only when a value leaves the exact domain.
const PI_SQUARED_DIGITS: &str = "986960440108935861883449099987615113531369940724079062641335";

fn pi_squared() -> &'static Rational {
    static PI2: OnceLock<Rational> = OnceLock::new();
    PI2.get_or_init(|| {
        let numer: BigInt = PI_SQUARED_DIGITS.parse().expect("valid digits");
        let denom = num_traits::pow(BigInt::from(10), PI_SQUARED_DIGITS.len() - 1);
        Rational::new(numer, denom)
    })
}

/// Element `rat + pi2·π²` of the field extension ℚ + ℚ·π².
///
/// The set is closed under addition and rational scaling, which is all the
/// closed forms in this crate need. Equality is exact and component-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiQuadratic {
    pub rat: Rational,
    pub pi2: Rational,
}

impl PiQuadratic {
    pub fn new(rat: Rational, pi2: Rational) -> Self {
        Self { rat, pi2 }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn from_rational(rat: Rational) -> Self {
        Self::new(rat, Rational::zero())
    }

    /// `π²/6 − H` for a rational `H`, i.e. the exact tail of `Σ k⁻²`.
    pub fn zeta2_minus(partial: &Rational) -> Self {
        Self::new(-partial.clone(), Rational::new(BigInt::one(), BigInt::from(6)))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(&self.rat * factor, &self.pi2 * factor)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.pi2.is_zero()
    }

    /// Nearest double. The sum `rat + pi2·π²` is formed in exact arithmetic
    /// against a 60-digit π², so cancellation between the two parts costs
    /// nothing before the final rounding.
    pub fn to_f64(&self) -> f64 {
        let value = &self.rat + &self.pi2 * pi_squared();
        value.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for PiQuadratic {
    /// `p/q + (r/s)·pi^2`; integers print without a denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})·pi^2", self.rat, self.pi2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePiQuadraticError(String);

impl fmt::Display for ParsePiQuadraticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse `{}` as `a + (b)·pi^2`", self.0)
    }
}

impl std::error::Error for ParsePiQuadraticError {}

impl FromStr for PiQuadratic {
    type Err = ParsePiQuadraticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePiQuadraticError(s.to_string());
        let (rat, rest) = s.split_once(" + (").ok_or_else(err)?;
        let pi2 = rest.strip_suffix(")·pi^2").ok_or_else(err)?;
        Ok(Self::new(
            rat.trim().parse().map_err(|_| err())?,
            pi2.trim().parse().map_err(|_| err())?,
        ))
    }
}

impl Add<&PiQuadratic> for &PiQuadratic {
    type Output = PiQuadratic;
    fn add(self, rhs: &PiQuadratic) -> PiQuadratic {
        PiQuadratic::new(&self.rat + &rhs.rat, &self.pi2 + &rhs.pi2)
    }
}

impl Add for PiQuadratic {
    type Output = PiQuadratic;
    fn add(self, rhs: PiQuadratic) -> PiQuadratic {
        PiQuadratic::new(self.rat + rhs.rat, self.pi2 + rhs.pi2)
    }
}

impl AddAssign<&PiQuadratic> for PiQuadratic {
    fn add_assign(&mut self, rhs: &PiQuadratic) {
        self.rat += &rhs.rat;
        self.pi2 += &rhs.pi2;
    }
}

impl Sub<&PiQuadratic> for &PiQuadratic {
    type Output = PiQuadratic;
    fn sub(self, rhs: &PiQuadratic) -> PiQuadratic {
        PiQuadratic::new(&self.rat - &rhs.rat, &self.pi2 - &rhs.pi2)
    }
}

impl Sub for PiQuadratic {
    type Output = PiQuadratic;
    fn sub(self, rhs: PiQuadratic) -> PiQuadratic {
        PiQuadratic::new(self.rat - rhs.rat, self.pi2 - rhs.pi2)
    }
}

impl Neg for PiQuadratic {
    type Output = PiQuadratic;
    fn neg(self) -> PiQuadratic {
        PiQuadratic::new(-self.rat, -self.pi2)
    }
}

impl Mul<&Rational> for &PiQuadratic {
    type Output = PiQuadratic;
    fn mul(self, rhs: &Rational) -> PiQuadratic {
        self.scale(rhs)
    }
}

impl Mul<&Rational> for PiQuadratic {
    type Output = PiQuadratic;
    fn mul(self, rhs: &Rational) -> PiQuadratic {
        PiQuadratic::new(self.rat * rhs, self.pi2 * rhs)
    }
}

impl Div<&Rational> for PiQuadratic {
    type Output = PiQuadratic;
    fn div(self, rhs: &Rational) -> PiQuadratic {
        PiQuadratic::new(self.rat / rhs, self.pi2 / rhs)
    }
}
