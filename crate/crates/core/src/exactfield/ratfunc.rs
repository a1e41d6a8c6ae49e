use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{forward_owned, Poly};
use super::rational::Q;
use crate::error::{Error, Result};

/// Element of ℚ(x) in canonical form: coprime, monic nonzero denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    /// Panics if `den` is zero; see [`RatFunc::try_new`].
    pub fn new(num: Poly, den: Poly) -> Self {
        Self::try_new(num, den).expect("zero denominator")
    }

    /// Skips the gcd; `num` and `den` must be coprime.
    fn from_coprime(mut num: Poly, mut den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let l = den.lc();
        if !l.is_one() {
            let inv = l.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn try_new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let l = d.lc();
        if !l.is_one() {
            let inv = l.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc::constant(Q::one())
    }

    pub fn x() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn constant(c: Q) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// `c / (x - a)^k`
    pub fn pole(c: Q, a: &Q, k: u32) -> Self {
        RatFunc::new(Poly::constant(c), Poly::linear_root(a).pow(k))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Q> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn is_proper(&self) -> bool {
        self.num.degree().is_none_or(|dn| dn < self.den.degree().unwrap())
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.num.degree().map(|d| d as i64 - self.den.degree().unwrap() as i64)
    }

    /// Valuation at `x = a`; `None` for zero.
    pub fn order_at(&self, a: &Q) -> Option<i64> {
        let n = self.num.order_at(a)? as i64;
        Some(n - self.den.order_at(a).unwrap() as i64)
    }

    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn derive(&self) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative());
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }

    pub fn inv(&self) -> Option<RatFunc> {
        (!self.is_zero()).then(|| RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::new(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn powi(&self, e: i32) -> Result<RatFunc> {
        let base = if e < 0 { self.inv().ok_or(Error::DivisionByZero)? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// `f(x + a)`
    pub fn shift(&self, a: &Q) -> RatFunc {
        RatFunc::new(self.num.shift(a), self.den.shift(a))
    }

    pub fn to_string_in(&self, var: &str) -> String {
        let n = self.num.to_string_in(var);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.to_string_in(var);
        let multi = |p: &Poly| p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
        let n = if multi(&self.num) { format!("({n})") } else { n };
        let d = if multi(&self.den) || self.den.lc() != Q::one() || d.contains('*') { format!("({d})") } else { d };
        format!("{n}/{d}")
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Q> for RatFunc {
    fn from(c: Q) -> Self {
        RatFunc::constant(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            return RatFunc::from_coprime(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den);
        }
        let (b1, d1) = (self.den.exact_div(&g).unwrap(), o.den.exact_div(&g).unwrap());
        let num = &(&self.num * &d1) + &(&o.num * &b1);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let h = num.gcd(&g);
        if h.is_one() {
            RatFunc::from_coprime(num, &(&b1 * &d1) * &g)
        } else {
            RatFunc::from_coprime(num.exact_div(&h).unwrap(), &(&b1 * &d1) * &g.exact_div(&h).unwrap())
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let cancel = |n: &Poly, d: &Poly| {
            let g = n.gcd(d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.exact_div(&g).unwrap(), d.exact_div(&g).unwrap())
            }
        };
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        RatFunc::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on a zero divisor; see [`RatFunc::checked_div`].
    fn div(self, o: &RatFunc) -> RatFunc {
        self.checked_div(o).expect("division by the zero function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

forward_owned!(Add, add, RatFunc);
forward_owned!(Sub, sub, RatFunc);
forward_owned!(Mul, mul, RatFunc);
forward_owned!(Div, div, RatFunc);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::q;

    fn inv_x_minus(a: i64) -> RatFunc {
        RatFunc::pole(q(1, 1), &q(a, 1), 1)
    }

    #[test]
    fn common_denominator() {
        let s = &inv_x_minus(0) + &inv_x_minus(1);
        assert_eq!(s.num(), &Poly::from_ints(&[-1, 2]));
        assert_eq!(s.den(), &Poly::from_ints(&[0, -1, 1]));
    }

    #[test]
    fn derivative_of_minus_inverse() {
        let f = -inv_x_minus(0);
        assert_eq!(f.derive(), RatFunc::pole(q(1, 1), &q(0, 1), 2));
    }

    #[test]
    fn canonical_monic_denominator() {
        let f = RatFunc::new(Poly::from_ints(&[2]), Poly::from_ints(&[0, 4]));
        assert_eq!(f.den(), &Poly::x());
        assert_eq!(f.num(), &Poly::constant(q(1, 2)));
        assert!(RatFunc::try_new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn display_forms() {
        let f = &inv_x_minus(0) + &inv_x_minus(1);
        assert_eq!(f.to_string(), "(2*x - 1)/(x^2 - x)");
        assert_eq!(RatFunc::pole(q(-1, 2), &q(1, 1), 1).to_string(), "-1/2/(x - 1)");
        assert_eq!(RatFunc::pole(q(3, 1), &q(0, 1), 2).to_string(), "3/x^2");
    }

    #[test]
    fn orders() {
        let f = RatFunc::new(Poly::from_ints(&[-1, 1]).pow(2), Poly::x().pow(3));
        assert_eq!(f.order_at(&q(0, 1)), Some(-3));
        assert_eq!(f.order_at(&q(1, 1)), Some(2));
        assert_eq!(f.degree(), Some(-1));
    }
}
