//! Exact rationals for adoption thresholds.
//!
//! Threshold decisions hinge on exact equality (a fraction of exactly 1/3
//! against a threshold of 1/3), so nothing here ever touches floating point.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

/// A rational number in lowest terms with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("malformed number `{0}`")]
    Malformed(alloc::string::String),
    #[error("number `{0}` does not fit in 64 bits")]
    Overflow(alloc::string::String),
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i64, den: u64) -> Result<Self, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        let g = gcd(num.unsigned_abs(), den);
        // g divides |num|, so the quotient's magnitude never exceeds |num|.
        let num = (i128::from(num) / i128::from(g)) as i64;
        Ok(Rational { num, den: den / g })
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Compares `count / total` against `self` without dividing.
    ///
    /// `total` must be positive.
    pub fn cmp_fraction(&self, count: usize, total: usize) -> Ordering {
        debug_assert!(total > 0);
        let lhs = count as i128 * i128::from(self.den);
        let rhs = i128::from(self.num) * total as i128;
        lhs.cmp(&rhs)
    }

    pub fn is_within_unit_interval(&self) -> bool {
        *self >= Rational::ZERO && *self <= Rational::ONE
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = i128::from(self.num) * i128::from(other.den);
        let rhs = i128::from(other.num) * i128::from(self.den);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn parse_digits(s: &str, whole: &str) -> Result<u64, RationalError> {
    if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
        return Err(RationalError::Malformed(whole.into()));
    }
    s.parse::<u64>().map_err(|_| RationalError::Overflow(whole.into()))
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `p/q`, an integer, or a finite decimal such as `0.25`
    /// (converted exactly to 1/4). A leading `-` is allowed.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (num, den) = if let Some((p, q)) = body.split_once('/') {
            (parse_digits(p, text)?, parse_digits(q, text)?)
        } else if let Some((int, frac)) = body.split_once('.') {
            let int = if int.is_empty() { 0 } else { parse_digits(int, text)? };
            let frac_value = parse_digits(frac, text)?;
            let scale = u32::try_from(frac.len())
                .ok()
                .and_then(|len| 10u64.checked_pow(len))
                .ok_or_else(|| RationalError::Overflow(text.into()))?;
            let num = int
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac_value))
                .ok_or_else(|| RationalError::Overflow(text.into()))?;
            (num, scale)
        } else {
            (parse_digits(body, text)?, 1)
        };
        let num = i64::try_from(num).map_err(|_| RationalError::Overflow(text.into()))?;
        Rational::new(if negative { -num } else { num }, den)
    }
}

/// The adoption rule: an agent adopts when its behaving-neighbor fraction
/// is at least `theta` (or strictly above it when `strict` is set).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Threshold {
    pub theta: Rational,
    pub strict: bool,
}

impl Threshold {
    pub fn at_least(theta: Rational) -> Self {
        Threshold { theta, strict: false }
    }

    pub fn above(theta: Rational) -> Self {
        Threshold { theta, strict: true }
    }

    /// Whether `behaving` out of `total` neighbors meets the threshold.
    /// An agent with no neighbors never meets it.
    pub fn is_met(&self, behaving: usize, total: usize) -> bool {
        if total == 0 {
            return false;
        }
        match self.theta.cmp_fraction(behaving, total) {
            Ordering::Greater => true,
            Ordering::Equal => !self.strict,
            Ordering::Less => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(r("1/3"), Rational::new(1, 3).unwrap());
        assert_eq!(r("2/6"), r("1/3"));
        assert_eq!(r("0.25"), Rational::new(1, 4).unwrap());
        assert_eq!(r(".5"), Rational::new(1, 2).unwrap());
        assert_eq!(r("1"), Rational::ONE);
        assert_eq!(r("-1/2").numerator(), -1);
        assert_eq!(r("0.333"), Rational::new(333, 1000).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!("1/0".parse::<Rational>(), Err(RationalError::ZeroDenominator)));
        assert!("abc".parse::<Rational>().is_err());
        assert!("1/".parse::<Rational>().is_err());
        assert!("1.".parse::<Rational>().is_err());
        assert!("0.1234567890123456789012".parse::<Rational>().is_err());
    }

    #[test]
    fn ordering_is_exact() {
        assert!(r("1/3") < r("0.34"));
        assert!(r("1/3") > r("0.333"));
        assert_eq!(r("1/3").cmp_fraction(1, 3), Ordering::Equal);
        assert_eq!(r("1/3").cmp_fraction(1, 4), Ordering::Less);
    }

    #[test]
    fn threshold_comparisons() {
        let third = r("1/3");
        assert!(Threshold::at_least(third).is_met(1, 3));
        assert!(!Threshold::above(third).is_met(1, 3));
        assert!(Threshold::at_least(Rational::ZERO).is_met(0, 4));
        assert!(!Threshold::at_least(Rational::ONE).is_met(3, 4));
        assert!(Threshold::at_least(Rational::ONE).is_met(4, 4));
        assert!(!Threshold::at_least(Rational::ZERO).is_met(0, 0));
    }

    #[test]
    fn equal_rationals_decide_identically() {
        let a = Threshold::at_least(r("2/6"));
        let b = Threshold::at_least(r("1/3"));
        for total in 1..10 {
            for count in 0..=total {
                assert_eq!(a.is_met(count, total), b.is_met(count, total));
            }
        }
    }
}
