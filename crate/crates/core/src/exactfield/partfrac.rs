use num_traits::Zero;

use super::factor::{factor, factor_order};
use super::poly::Poly;
use super::rational::Q;
use super::ratfunc::RatFunc;
use crate::linalg::{QMatrix, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfTerm {
    /// Monic irreducible.
    pub factor: Poly,
    pub multiplicity: usize,
    /// `deg numerator < deg factor`.
    pub numerator: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFraction {
    pub polynomial_part: Poly,
    pub terms: Vec<PfTerm>,
    /// False if some factor's irreducibility could not be certified.
    pub certified: bool,
}

impl PartialFraction {
    pub fn recombine(&self) -> RatFunc {
        self.terms.iter().fold(RatFunc::from_poly(self.polynomial_part.clone()), |acc, t| {
            &acc + &RatFunc::new(t.numerator.clone(), t.factor.pow(t.multiplicity as u32))
        })
    }

    pub fn factors(&self) -> Vec<Poly> {
        let mut fs: Vec<Poly> = Vec::new();
        for t in &self.terms {
            if !fs.contains(&t.factor) {
                fs.push(t.factor.clone());
            }
        }
        fs
    }
}

/// Complete partial fractions of `a` over its irreducible denominator factors.
pub fn squarefree_partfrac(a: &RatFunc) -> PartialFraction {
    let fz = factor(a.den());
    let fs: Vec<(Poly, usize)> = fz.factors.iter().map(|f| (f.poly.clone(), f.multiplicity)).collect();
    let mut pf = partfrac_over(a, &fs);
    pf.certified = fz.factors.iter().all(|f| f.certified);
    pf
}

/// Partial fractions of `a` with respect to pairwise coprime monic `factors`
/// whose product (with multiplicities) is divisible by `a.den()`.
pub fn partfrac_over(a: &RatFunc, factors: &[(Poly, usize)]) -> PartialFraction {
    let d = factors.iter().fold(Poly::one(), |acc, (f, m)| &acc * &f.pow(*m as u32));
    let cof = d.exact_div(a.den()).expect("denominator must divide the factor product");
    let n = a.num() * &cof;
    let (poly_part, r) = n.div_rem(&d);
    let mut terms = Vec::new();
    for (f, m) in factors {
        let dj = f.pow(*m as u32);
        let cj = d.exact_div(&dj).unwrap();
        let (_, s, _) = cj.ext_gcd(&dj);
        let mut nj = (&r * &s).rem(&dj);
        let mut digits = Vec::with_capacity(*m);
        for _ in 0..*m {
            let (qt, c) = nj.div_rem(f);
            digits.push(c);
            nj = qt;
        }
        // nj = Σ_k digits[k] f^k, so digits[k] / f^(m-k)
        for (k, c) in digits.into_iter().enumerate() {
            if !c.is_zero() {
                terms.push(PfTerm { factor: f.clone(), multiplicity: m - k, numerator: c });
            }
        }
    }
    terms.sort_by(|a, b| factor_order(&a.factor, &b.factor).then(a.multiplicity.cmp(&b.multiplicity)));
    PartialFraction { polynomial_part: poly_part, terms, certified: true }
}

/// Function atom: `x^i` or `x^i / f^k` with `i < deg f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Mono(usize),
    Frac { factor: Poly, power: usize, mono: usize },
}

impl Atom {
    pub fn to_ratfunc(&self) -> RatFunc {
        match self {
            Atom::Mono(i) => RatFunc::from_poly(Poly::monomial(Q::from_integer(1.into()), *i)),
            Atom::Frac { factor, power, mono } => {
                RatFunc::new(Poly::monomial(Q::from_integer(1.into()), *mono), factor.pow(*power as u32))
            }
        }
    }
}

/// Coordinates of `fs` over a common ordered atom list.
pub fn atom_coordinates(fs: &[RatFunc]) -> (Vec<Atom>, QMatrix) {
    let den = fs.iter().fold(Poly::one(), |acc, f| {
        let g = acc.gcd(f.den());
        &acc * &f.den().exact_div(&g).unwrap()
    });
    let fz = factor(&den);
    let factors: Vec<(Poly, usize)> = fz.factors.iter().map(|f| (f.poly.clone(), f.multiplicity)).collect();
    let pfs: Vec<PartialFraction> = fs.iter().map(|f| partfrac_over(f, &factors)).collect();
    let maxdeg = pfs.iter().filter_map(|p| p.polynomial_part.degree()).max();
    let mut atoms: Vec<Atom> = (0..maxdeg.map_or(0, |d| d + 1)).map(Atom::Mono).collect();
    for (f, m) in &factors {
        for k in 1..=*m {
            for i in 0..f.degree().unwrap() {
                atoms.push(Atom::Frac { factor: f.clone(), power: k, mono: i });
            }
        }
    }
    let mut coords = QMatrix::zeros(fs.len(), atoms.len());
    for (r, pf) in pfs.iter().enumerate() {
        for (i, c) in pf.polynomial_part.coeffs().iter().enumerate() {
            coords[(r, i)] = c.clone();
        }
        for t in &pf.terms {
            for (i, c) in t.numerator.coeffs().iter().enumerate() {
                let idx = atoms
                    .iter()
                    .position(|a| matches!(a, Atom::Frac { factor, power, mono } if *factor == t.factor && *power == t.multiplicity && *mono == i))
                    .unwrap();
                coords[(r, idx)] = c.clone();
            }
        }
    }
    (atoms, coords)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffBasis {
    pub basis: Vec<RatFunc>,
    /// `coords[(i, j)]`: coefficient of `basis[j]` in `fs[i]`.
    pub coords: QMatrix,
}

/// ℚ-basis of the span of `fs`, echelonized over partial-fraction atoms.
pub fn coeff_basis(fs: &[RatFunc]) -> CoeffBasis {
    let (atoms, coords) = atom_coordinates(fs);
    let span = Span::from_vectors(atoms.len(), &coords.row_vecs());
    let atom_fns: Vec<RatFunc> = atoms.iter().map(Atom::to_ratfunc).collect();
    let basis: Vec<RatFunc> = span
        .basis()
        .iter()
        .map(|row| {
            row.iter().zip(&atom_fns).fold(RatFunc::zero(), |acc, (c, a)| if c.is_zero() { acc } else { &acc + &a.scale(c) })
        })
        .collect();
    let cm = QMatrix::from_rows(coords.row_vecs().iter().map(|r| span.coords(r).unwrap()).collect());
    let cm = if fs.is_empty() { QMatrix::zeros(0, basis.len()) } else { cm };
    CoeffBasis { basis, coords: cm }
}
