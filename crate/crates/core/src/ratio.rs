//! Exact rationals and their `num/den` text form.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Formats a rational in lowest terms as `num/den`, or `num` when the
/// denominator is 1.
pub fn format(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `num/den` or a bare integer. The result is reduced.
pub fn parse(s: &str) -> Result<BigRational> {
    let err = || Error::Parse {
        kind: "rational",
        input: s.to_string(),
    };
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

pub fn from_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Narrows a rational to machine-word numerator and denominator.
pub fn to_small(x: &BigRational) -> Result<Ratio<i64>> {
    match (x.numer().to_i64(), x.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Ratio::new(n, d)),
        _ => Err(Error::DenominatorOverflow),
    }
}

pub fn from_small(x: Ratio<i64>) -> BigRational {
    from_i64(*x.numer(), *x.denom())
}

pub fn format_small(x: Ratio<i64>) -> String {
    format(&from_small(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces_and_formats() {
        assert_eq!(format(&parse("42/44").unwrap()), "21/22");
        assert_eq!(format(&parse("-8/2").unwrap()), "-4");
        assert_eq!(format(&parse(" 7 ").unwrap()), "7");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("a/3").is_err());
        assert!(parse("").is_err());
    }
}
