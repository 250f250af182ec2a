//! Exact rational helpers shared by rates and entropy values.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

pub type Rational = Ratio<i64>;

/// `1 + 1/2 + ... + 1/n`; zero for `n = 0`.
pub fn harmonic(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::zero(), |acc, d| acc + Rational::new(1, d))
}

/// `"11/6"`, or `"2"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact fraction followed by a six-digit decimal, e.g. `"11/6 (1.833333)"`.
pub fn format_rate(r: &Rational) -> String {
    format!("{} ({:.6})", format_rational(r), r.to_f64().unwrap_or(f64::NAN))
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Serde adapter writing a rational as its `format_rational` string.
pub mod as_string {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_numbers() {
        let expected = ["1", "3/2", "11/6", "25/12", "137/60", "49/20", "363/140", "761/280"];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(format_rational(&harmonic(n + 1)), *e);
        }
        assert_eq!(harmonic(0), Rational::zero());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "7", "11/6", "-3/4"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
        assert_eq!(format_rate(&harmonic(3)), "11/6 (1.833333)");
    }
}
