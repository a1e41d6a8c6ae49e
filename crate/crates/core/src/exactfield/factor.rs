use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{divisors, Poly};
use super::rational::Q;

/// Candidate budget for the Kronecker search before giving up on a certificate.
const KRONECKER_BUDGET: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    /// Monic.
    pub poly: Poly,
    pub multiplicity: usize,
    /// False when the irreducibility search exceeded its budget.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: Q,
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.content.clone()), |acc, f| &acc * &f.poly.pow(f.multiplicity as u32))
    }

    pub fn all_linear(&self) -> bool {
        self.factors.iter().all(|f| f.poly.degree() == Some(1))
    }
}

/// Factorization over ℚ into monic irreducibles, sorted by (degree, coefficients).
pub fn factor(p: &Poly) -> Factorization {
    let content = p.lc();
    let mut factors = Vec::new();
    for (sf, mult) in p.squarefree() {
        let mut rest = sf.clone();
        for r in sf.rational_roots() {
            let lin = Poly::linear_root(&r);
            rest = rest.exact_div(&lin).unwrap();
            factors.push(Factor { poly: lin, multiplicity: mult, certified: true });
        }
        for (g, cert) in split_irreducible(&rest) {
            factors.push(Factor { poly: g, multiplicity: mult, certified: cert });
        }
    }
    factors.sort_by(|a, b| factor_order(&a.poly, &b.poly));
    Factorization { content, factors }
}

/// Degree first; linear factors by root, others by coefficients.
pub fn factor_order(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        if a.degree() == Some(1) {
            (-a.coeff(0)).cmp(&(-b.coeff(0)))
        } else {
            a.coeffs().cmp(b.coeffs())
        }
    })
}

/// Splits a squarefree polynomial without rational roots into monic irreducibles.
fn split_irreducible(f: &Poly) -> Vec<(Poly, bool)> {
    let n = match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    if n <= 3 {
        return vec![(f.monic(), true)];
    }
    match kronecker_split(f) {
        Some(Some(g)) => {
            let h = f.exact_div(&g).unwrap();
            let mut out = split_irreducible(&g);
            out.extend(split_irreducible(&h));
            out
        }
        Some(None) => vec![(f.monic(), true)],
        None => vec![(f.monic(), false)],
    }
}

/// `Some(Some(g))`: proper factor; `Some(None)`: irreducible; `None`: budget exceeded.
fn kronecker_split(f: &Poly) -> Option<Option<Poly>> {
    let ints = f.primitive_integer();
    let fz = Poly::from_coeffs(ints.iter().map(|c| Q::from_integer(c.clone())).collect());
    let n = fz.degree().unwrap();
    let mut points: Vec<Q> = Vec::new();
    let mut k = 0i64;
    while points.len() < n / 2 + 1 {
        for a in [k, -k] {
            let a = Q::from_integer(BigInt::from(a));
            if !points.contains(&a) && !fz.eval(&a).is_zero() {
                points.push(a);
            }
        }
        k += 1;
    }
    for d in 2..=n / 2 {
        let pts = &points[..d + 1];
        let choices: Vec<Vec<BigInt>> = pts
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let v = fz.eval(a).to_integer();
                let ds = divisors(&v);
                if i == 0 {
                    ds
                } else {
                    ds.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
                }
            })
            .collect();
        let total = choices.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
        if total.is_none_or(|t| t > KRONECKER_BUDGET) {
            return None;
        }
        let mut idx = vec![0usize; d + 1];
        loop {
            let vals: Vec<Q> = idx.iter().zip(&choices).map(|(&i, c)| Q::from_integer(c[i].clone())).collect();
            let g = interpolate(pts, &vals);
            if g.degree() == Some(d) && fz.rem(&g).is_zero() {
                return Some(Some(g.monic()));
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    Some(None)
}

/// Lagrange interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Q], ys: &[Q]) -> Poly {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = Poly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                term = &term * &Poly::linear_root(xj);
                term = term.scale(&(xi - xj).recip());
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// Irreducible monic factors of `p` that are not linear.
pub fn nonlinear_factors(p: &Poly) -> Vec<Poly> {
    factor(p).factors.into_iter().filter(|f| f.poly.degree() != Some(1)).map(|f| f.poly).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::q;

    #[test]
    fn factors_mixed() {
        let x2p1 = Poly::from_ints(&[1, 0, 1]);
        let x2m2 = Poly::from_ints(&[-2, 0, 1]);
        let p = (&(&x2p1 * &x2m2) * &Poly::from_ints(&[-1, 1]).pow(2)).scale(&q(3, 1));
        let fz = factor(&p);
        assert_eq!(fz.expand(), p);
        assert_eq!(fz.content, q(3, 1));
        assert_eq!(fz.factors.len(), 3);
        assert!(fz.factors.iter().all(|f| f.certified));
        assert_eq!(fz.factors[0].poly, Poly::from_ints(&[-1, 1]));
        assert_eq!(fz.factors[0].multiplicity, 2);
    }

    #[test]
    fn quartic_irreducible() {
        let p = Poly::from_ints(&[1, 0, 0, 0, 1]);
        let fz = factor(&p);
        assert_eq!(fz.factors.len(), 1);
        assert!(fz.factors[0].certified);
    }

    #[test]
    fn interpolation_recovers() {
        let p = Poly::from_ints(&[3, -1, 2]);
        let xs = [q(0, 1), q(1, 1), q(-1, 1)];
        let ys: Vec<Q> = xs.iter().map(|a| p.eval(a)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }
}
