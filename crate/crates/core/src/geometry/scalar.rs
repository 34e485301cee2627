use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub type Rational = Ratio<i64>;

/// A real number that is kept exact whenever it is rational.
///
/// Arithmetic between two exact values stays exact; as soon as a float
/// enters, the result is a float.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Scalar {
    Exact(Rational),
    Real(f64),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Exact(Rational::from_integer(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Rational::new(num, den))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Scalar::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Scalar::Real(v) => v,
        }
    }

    pub fn floor(self) -> i64 {
        match self {
            Scalar::Exact(r) => r.numer().div_floor(r.denom()),
            Scalar::Real(v) => v.floor() as i64,
        }
    }

    /// Fractional part `{x} = x - floor(x)`, always in `[0, 1)`, also for
    /// negative `x` (so `{-0.3} = 0.7`).
    pub fn fract(self) -> Self {
        match self {
            Scalar::Exact(r) => {
                let d = *r.denom();
                Scalar::Exact(Rational::new(r.numer().mod_floor(&d), d))
            }
            Scalar::Real(v) => Scalar::Real(real_fract(v)),
        }
    }

    pub fn add(self, other: Scalar) -> Self {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact_add(a, b)),
            (a, b) => Scalar::Real(a.to_f64() + b.to_f64()),
        }
    }

    pub fn sub(self, other: Scalar) -> Self {
        self.add(other.neg())
    }

    pub fn neg(self) -> Self {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Real(v) => Scalar::Real(-v),
        }
    }

    pub fn mul_int(self, n: i64) -> Self {
        match self {
            Scalar::Exact(a) => {
                let num = *a.numer() as i128 * n as i128;
                Scalar::Exact(reduce_i128(num, *a.denom() as i128))
            }
            Scalar::Real(v) => Scalar::Real(v * n as f64),
        }
    }

    pub fn mul(self, other: Scalar) -> Self {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let num = *a.numer() as i128 * *b.numer() as i128;
                let den = *a.denom() as i128 * *b.denom() as i128;
                Scalar::Exact(reduce_i128(num, den))
            }
            (a, b) => Scalar::Real(a.to_f64() * b.to_f64()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => *r.numer() == 0,
            Scalar::Real(v) => *v == 0.0,
        }
    }

    /// `self >= other`, exact when both sides are exact.
    pub fn ge(self, other: Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a >= b,
            (a, b) => a.to_f64() >= b.to_f64(),
        }
    }

    /// Parses `"p/q"`, an integer, or a decimal literal. Fractions and
    /// integers are exact; decimals are kept as floats.
    pub fn parse(s: &str) -> Option<Scalar> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                return None;
            }
            return Some(Scalar::ratio(p, q));
        }
        if let Ok(v) = s.parse::<i64>() {
            return Some(Scalar::int(v));
        }
        let v: f64 = s.parse().ok()?;
        v.is_finite().then_some(Scalar::Real(v))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Real(v) => write!(f, "{v}"),
        }
    }
}

pub(crate) fn real_fract(v: f64) -> f64 {
    let f = v - v.floor();
    // tiny negative inputs round up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn exact_add(a: Rational, b: Rational) -> Rational {
    let num = *a.numer() as i128 * *b.denom() as i128 + *b.numer() as i128 * *a.denom() as i128;
    let den = *a.denom() as i128 * *b.denom() as i128;
    reduce_i128(num, den)
}

fn reduce_i128(num: i128, den: i128) -> Rational {
    let g = num.gcd(&den).max(1);
    let (mut n, mut d) = (num / g, den / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    Rational::new_raw(
        i64::try_from(n).expect("rational numerator overflow"),
        i64::try_from(d).expect("rational denominator overflow"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fract_of_negative_values() {
        assert_eq!(Scalar::ratio(-3, 10).fract(), Scalar::ratio(7, 10));
        assert!((Scalar::Real(-0.3).fract().to_f64() - 0.7).abs() < 1e-15);
        assert_eq!(Scalar::Real(-1e-18).fract(), Scalar::Real(0.0));
    }

    #[test]
    fn floor_is_exact_for_rationals() {
        assert_eq!(Scalar::ratio(-1, 2).floor(), -1);
        assert_eq!(Scalar::ratio(5, 2).floor(), 2);
        assert_eq!(Scalar::int(-4).floor(), -4);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Scalar::parse("1/2"), Some(Scalar::ratio(1, 2)));
        assert_eq!(Scalar::parse("-3"), Some(Scalar::int(-3)));
        assert_eq!(Scalar::parse("0.25"), Some(Scalar::Real(0.25)));
        assert_eq!(Scalar::parse("1/0"), None);
        assert_eq!(Scalar::parse("nan"), None);
    }
}
