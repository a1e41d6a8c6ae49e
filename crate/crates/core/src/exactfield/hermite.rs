use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::Poly;
use super::rational::Q;
use super::ratfunc::RatFunc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteSplit {
    /// Rational part of the antiderivative.
    pub integral: RatFunc,
    /// Proper, squarefree denominator.
    pub remainder: RatFunc,
}

/// Antiderivative of a polynomial with zero constant term.
pub fn integrate_poly(p: &Poly) -> Poly {
    let mut v = vec![Q::zero()];
    for (i, c) in p.coeffs().iter().enumerate() {
        v.push(c / Q::from_integer(BigInt::from(i + 1)));
    }
    Poly::from_coeffs(v)
}

/// `a = g' + r` with `r` proper and squarefree-denominated.
pub fn hermite_reduce(a: &RatFunc) -> HermiteSplit {
    let (p, mut num) = a.num().div_rem(a.den());
    let mut den = a.den().clone();
    let mut g = RatFunc::from_poly(integrate_poly(&p));
    if num.is_zero() {
        return HermiteSplit { integral: g, remainder: RatFunc::zero() };
    }
    let sf = den.squarefree();
    for (v, i) in sf {
        if i < 2 {
            continue;
        }
        let vp = v.derivative();
        let u = den.exact_div(&v.pow(i as u32)).unwrap();
        for j in (1..i).rev() {
            let jq = Q::from_integer(BigInt::from(j));
            let uvp = &u * &vp;
            let rhs = num.scale(&-jq.recip());
            let (b, c) = Poly::diophantine(&uvp, &v, &rhs);
            g = &g + &RatFunc::new(b.clone(), v.pow(j as u32));
            num = &c.scale(&-jq) - &(&u * &b.derivative());
            den = &u * &v.pow(j as u32);
        }
    }
    HermiteSplit { integral: g, remainder: RatFunc::new(num, den) }
}
