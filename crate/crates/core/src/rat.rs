//! Exact rational scalars.  Everything in this crate is computed over Q;
//! no floating point appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `p/q` as a rational.
pub fn qr(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

/// Renders `-3/2` as `"-3/2"` and `4` as `"4"`.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the output of [`format_q`]; accepts `"p"` and `"p/q"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Q::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Q::from_integer(p))
        }
    }
}

/// Sign as a rational, from anything signum-like.
pub fn qsign(s: i8) -> Q {
    if s >= 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_parse_roundtrip() {
        for x in [qi(0), qi(7), qi(-3), qr(1, 2), qr(-22, 7)] {
            assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
        }
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("ab").is_none());
    }
}
