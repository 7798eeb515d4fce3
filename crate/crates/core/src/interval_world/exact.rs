use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::IntervalError;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(text: &str) -> Result<Rational, IntervalError> {
    let bad = || IntervalError::Parse(format!("not a rational: {text:?}"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// An element `a + b·√2` of the field `Q(√2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactNumber {
    a: Rational,
    b: Rational,
}

impl ExactNumber {
    pub fn new(a: Rational, b: Rational) -> Self {
        ExactNumber { a, b }
    }

    pub fn zero() -> Self {
        ExactNumber::from(Rational::zero())
    }

    pub fn one() -> Self {
        ExactNumber::from(Rational::one())
    }

    pub fn sqrt2() -> Self {
        ExactNumber::new(Rational::zero(), Rational::one())
    }

    pub fn int(v: i64) -> Self {
        ExactNumber::from(integer(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ExactNumber::from(rational(num, den))
    }

    /// Rational coefficient.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of `√2`.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b√2`.
    ///
    /// When the coefficients disagree in sign, the larger of `a²` and `2b²`
    /// decides; they are never equal because `√2` is irrational.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * integer(2);
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `m·self + c` for rational `m` and `c`.
    pub fn affine(&self, m: &Rational, c: &Rational) -> Self {
        ExactNumber::new(m * &self.a + c, m * &self.b)
    }

    pub fn scale(&self, m: &Rational) -> Self {
        ExactNumber::new(m * &self.a, m * &self.b)
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        // (a + b√2)(c - d√2) / (c² - 2d²)
        let (a, b, c, d) = (&self.a, &self.b, &other.a, &other.b);
        let norm = c * c - d * d * integer(2);
        Some(ExactNumber::new((a * c - b * d * integer(2)) / &norm, (b * c - a * d) / &norm))
    }

    pub fn half(&self) -> Self {
        self.scale(&rational(1, 2))
    }

    /// Rational lower and upper bounds for this number, each within `width`
    /// of it.
    pub fn rational_bounds(&self, width: &Rational) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.a.clone(), self.a.clone());
        }
        let (lo, hi) = sqrt2_bracket(&(width / self.b.abs()));
        let x = &self.a + &self.b * &lo;
        let y = &self.a + &self.b * &hi;
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

/// Rationals `lo < √2 < hi` with `hi - lo <= width`.
fn sqrt2_bracket(width: &Rational) -> (Rational, Rational) {
    let two = integer(2);
    let mut lo = integer(1);
    let mut hi = rational(3, 2);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        if &mid * &mid < two {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// A rational strictly between `lo` and `hi`; requires `lo < hi`.
pub fn rational_between(lo: &ExactNumber, hi: &ExactNumber) -> Rational {
    assert!(lo < hi, "empty range");
    let mut width = (hi - lo).rational_bounds(&rational(1, 4)).0 / integer(4);
    if width <= Rational::zero() {
        width = rational(1, 1 << 20);
    }
    loop {
        let (_, lo_up) = lo.rational_bounds(&width);
        let (hi_down, _) = hi.rational_bounds(&width);
        let candidate = (&lo_up + &hi_down) / integer(2);
        let c = ExactNumber::from(candidate.clone());
        if lo < &c && &c < hi {
            return candidate;
        }
        width /= integer(16);
    }
}

/// An irrational element of `Q(√2)` strictly between `lo` and `hi`.
pub fn irrational_between(lo: &ExactNumber, hi: &ExactNumber) -> ExactNumber {
    let r = ExactNumber::from(rational_between(lo, hi));
    let mut step = rational(1, 2);
    loop {
        let candidate = &r + &ExactNumber::sqrt2().scale(&step);
        if &candidate < hi {
            return candidate;
        }
        step /= integer(8);
    }
}

impl From<Rational> for ExactNumber {
    fn from(a: Rational) -> Self {
        ExactNumber::new(a, Rational::zero())
    }
}

impl From<i64> for ExactNumber {
    fn from(v: i64) -> Self {
        ExactNumber::int(v)
    }
}

impl PartialOrd for ExactNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl Add for &ExactNumber {
    type Output = ExactNumber;
    fn add(self, rhs: &ExactNumber) -> ExactNumber {
        ExactNumber::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &ExactNumber {
    type Output = ExactNumber;
    fn sub(self, rhs: &ExactNumber) -> ExactNumber {
        ExactNumber::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &ExactNumber {
    type Output = ExactNumber;
    fn mul(self, rhs: &ExactNumber) -> ExactNumber {
        let (a, b, c, d) = (&self.a, &self.b, &rhs.a, &rhs.b);
        ExactNumber::new(a * c + b * d * integer(2), a * d + b * c)
    }
}

impl Add for ExactNumber {
    type Output = ExactNumber;
    fn add(self, rhs: ExactNumber) -> ExactNumber {
        &self + &rhs
    }
}

impl Sub for ExactNumber {
    type Output = ExactNumber;
    fn sub(self, rhs: ExactNumber) -> ExactNumber {
        &self - &rhs
    }
}

impl Mul for ExactNumber {
    type Output = ExactNumber;
    fn mul(self, rhs: ExactNumber) -> ExactNumber {
        &self * &rhs
    }
}

impl Neg for ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        ExactNumber::new(-self.a, -self.b)
    }
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = |b: &Rational| -> String {
            if b.is_one() {
                "√2".to_string()
            } else if *b == -Rational::one() {
                "-√2".to_string()
            } else {
                format!("{}√2", format_rational(b))
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.a)),
            (true, false) => write!(f, "{}", root(&self.b)),
            (false, false) => {
                let tail = root(&self.b);
                if tail.starts_with('-') {
                    write!(f, "{}{}", format_rational(&self.a), tail)
                } else {
                    write!(f, "{}+{}", format_rational(&self.a), tail)
                }
            }
        }
    }
}

impl fmt::Debug for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts `"p/q"`, `"sqrt2"`, `"r/s*sqrt2"` and sums such as
/// `"1/2+3*sqrt2"` or `"-sqrt2/2"`.
impl FromStr for ExactNumber {
    type Err = IntervalError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let cleaned = cleaned.replace('√', "sqrt");
        if cleaned.is_empty() {
            return Err(IntervalError::Parse("empty number".into()));
        }
        // Split into signed terms.
        let mut terms = Vec::new();
        let mut current = String::new();
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        terms.push(current);
        let mut value = ExactNumber::zero();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-Rational::one(), rest.to_string()),
                None => (Rational::one(), term.trim_start_matches('+').to_string()),
            };
            let part = if let Some(idx) = body.find("sqrt2") {
                let before = body[..idx].trim_end_matches('*');
                let after = &body[idx + 5..];
                let mut coef = if before.is_empty() { Rational::one() } else { parse_rational(before)? };
                if let Some(den) = after.strip_prefix('/') {
                    coef /= parse_rational(den)?;
                } else if let Some(mul) = after.strip_prefix('*') {
                    coef *= parse_rational(mul)?;
                } else if !after.is_empty() {
                    return Err(IntervalError::Parse(format!("not a number: {text:?}")));
                }
                ExactNumber::new(Rational::zero(), coef)
            } else {
                ExactNumber::from(parse_rational(&body)?)
            };
            value = &value + &part.scale(&sign);
        }
        Ok(value)
    }
}

#[derive(Serialize, Deserialize)]
struct ExactRepr {
    #[serde(with = "rational_string")]
    a: Rational,
    #[serde(with = "rational_string", default = "Rational::zero")]
    b: Rational,
}

impl Serialize for ExactNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExactRepr { a: self.a.clone(), b: self.b.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ExactRepr::deserialize(deserializer)?;
        Ok(ExactNumber::new(repr.a, repr.b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(text: &str) -> ExactNumber {
        text.parse().unwrap()
    }

    #[test]
    fn sign_decisions() {
        assert_eq!(num("sqrt2-1").signum(), Ordering::Greater);
        assert_eq!(num("sqrt2-3/2").signum(), Ordering::Less);
        assert_eq!(num("7/5-sqrt2").signum(), Ordering::Less);
        assert_eq!(num("0").signum(), Ordering::Equal);
        assert_eq!(num("-1-sqrt2").signum(), Ordering::Less);
    }

    #[test]
    fn half_root_two_inside_unit_interval() {
        let v = num("sqrt2/2");
        assert!(ExactNumber::zero() < v && v < ExactNumber::one());
        assert!(!v.is_rational());
    }

    #[test]
    fn division_is_exact() {
        let x = num("1+sqrt2");
        let y = num("3-2*sqrt2");
        let q = x.checked_div(&y).unwrap();
        assert_eq!(&q * &y, x);
        assert!(x.checked_div(&ExactNumber::zero()).is_none());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(num("1/2+3*sqrt2").to_string(), "1/2+3√2");
        assert_eq!(num("-sqrt2/2").to_string(), "-1/2√2");
        assert_eq!(num("10/11").to_string(), "10/11");
        assert!("1/0".parse::<ExactNumber>().is_err());
        assert!("abc".parse::<ExactNumber>().is_err());
    }

    #[test]
    fn json_form() {
        let v = num("1/2-sqrt2");
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"a":"1/2","b":"-1"}"#);
        assert_eq!(serde_json::from_str::<ExactNumber>(&json).unwrap(), v);
    }

    #[test]
    fn betweenness() {
        let lo = num("sqrt2");
        let hi = num("sqrt2+1/1000000");
        let r = ExactNumber::from(rational_between(&lo, &hi));
        assert!(lo < r && r < hi);
        let q = irrational_between(&ExactNumber::int(1), &ExactNumber::ratio(1000001, 1000000));
        assert!(!q.is_rational());
        assert!(ExactNumber::int(1) < q && q < ExactNumber::ratio(1000001, 1000000));
    }

    fn small() -> impl Strategy<Value = ExactNumber> {
        (-20i64..20, 1i64..8, -20i64..20, 1i64..8)
            .prop_map(|(p, q, r, s)| ExactNumber::new(rational(p, q), rational(r, s)))
    }

    proptest! {
        #[test]
        fn order_is_transitive(x in small(), y in small(), z in small()) {
            if x < y && y < z {
                prop_assert!(x < z);
            }
        }

        #[test]
        fn order_is_total_and_antisymmetric(x in small(), y in small()) {
            let forward = x.cmp(&y);
            prop_assert_eq!(forward, y.cmp(&x).reverse());
            prop_assert_eq!(forward == Ordering::Equal, x == y);
        }

        #[test]
        fn order_agrees_with_floats_when_far_apart(x in small(), y in small()) {
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x < y, fx < fy);
            }
        }

        #[test]
        fn field_identities(x in small(), y in small()) {
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&x.checked_div(&y).unwrap() * &y, x);
            }
        }
    }
}
