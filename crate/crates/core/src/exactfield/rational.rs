use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rationals; `BigRational` keeps `gcd = 1` and a positive denominator.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Integer value of `r` if it is an integer.
pub fn as_integer(r: &Q) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}
