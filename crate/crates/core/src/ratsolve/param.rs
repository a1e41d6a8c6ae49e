use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactfield::{Poly, RatFunc, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(pub u32);

/// Per-run allocator of globally fresh parameter ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamAlloc {
    labels: Vec<String>,
}

impl ParamAlloc {
    pub fn new() -> Self {
        ParamAlloc::default()
    }

    pub fn fresh(&mut self, label: impl Into<String>) -> ParamId {
        self.labels.push(label.into());
        ParamId(self.labels.len() as u32 - 1)
    }

    pub fn label(&self, p: ParamId) -> &str {
        &self.labels[p.0 as usize]
    }

    pub fn find(&self, label: &str) -> Option<ParamId> {
        self.labels.iter().position(|l| l == label).map(|i| ParamId(i as u32))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.labels.len() as u32).map(ParamId)
    }
}

/// `constant + Σ_p p * terms[p]`, with no zero coefficient stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamAffine {
    pub constant: RatFunc,
    terms: BTreeMap<ParamId, RatFunc>,
}

impl ParamAffine {
    pub fn zero() -> Self {
        ParamAffine::default()
    }

    pub fn constant(c: RatFunc) -> Self {
        ParamAffine { constant: c, terms: BTreeMap::new() }
    }

    pub fn param(p: ParamId) -> Self {
        ParamAffine::param_times(p, RatFunc::one())
    }

    pub fn param_times(p: ParamId, f: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(p, f);
        }
        ParamAffine { constant: RatFunc::zero(), terms }
    }

    pub fn from_parts(constant: RatFunc, terms: impl IntoIterator<Item = (ParamId, RatFunc)>) -> Self {
        let mut a = ParamAffine::constant(constant);
        for (p, f) in terms {
            a.add_term(p, &f);
        }
        a
    }

    pub fn terms(&self) -> &BTreeMap<ParamId, RatFunc> {
        &self.terms
    }

    pub fn coeff(&self, p: ParamId) -> RatFunc {
        self.terms.get(&p).cloned().unwrap_or_default()
    }

    pub fn params(&self) -> Vec<ParamId> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn is_param_free(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: ParamId, f: &RatFunc) {
        let v = &self.coeff(p) + f;
        if v.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, v);
        }
    }

    pub fn add(&self, o: &ParamAffine) -> ParamAffine {
        let mut r = self.clone();
        r.constant = &r.constant + &o.constant;
        for (p, f) in &o.terms {
            r.add_term(*p, f);
        }
        r
    }

    pub fn sub(&self, o: &ParamAffine) -> ParamAffine {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ParamAffine {
        self.map(|f| -f)
    }

    pub fn scale(&self, c: &RatFunc) -> ParamAffine {
        if c.is_zero() {
            return ParamAffine::zero();
        }
        self.map(|f| f * c)
    }

    pub fn derive(&self) -> ParamAffine {
        self.map(|f| f.derive())
    }

    pub fn map(&self, g: impl Fn(&RatFunc) -> RatFunc) -> ParamAffine {
        let mut r = ParamAffine::constant(g(&self.constant));
        for (p, f) in &self.terms {
            r.add_term(*p, &g(f));
        }
        r
    }

    /// All components, constant first.
    pub fn components(&self) -> Vec<&RatFunc> {
        std::iter::once(&self.constant).chain(self.terms.values()).collect()
    }

    /// Replaces each parameter in `subs` by its affine expression.
    pub fn substitute(&self, subs: &BTreeMap<ParamId, ParamAffine>) -> ParamAffine {
        let mut r = ParamAffine::constant(self.constant.clone());
        for (p, f) in &self.terms {
            match subs.get(p) {
                Some(e) => r = r.add(&e.scale(f)),
                None => r.add_term(*p, f),
            }
        }
        r
    }

    /// Value under an assignment; unassigned parameters count as zero.
    pub fn eval(&self, assign: &BTreeMap<ParamId, Q>) -> RatFunc {
        self.terms.iter().fold(self.constant.clone(), |acc, (p, f)| match assign.get(p) {
            Some(v) => &acc + &f.scale(v),
            None => acc,
        })
    }

    /// Linear rows over ℚ expressing `self ≡ 0` as a rational function.
    pub fn zero_rows(&self) -> Vec<LinearRow> {
        let den = self.components().iter().fold(Poly::one(), |acc, f| {
            let g = acc.gcd(f.den());
            &acc * &f.den().exact_div(&g).unwrap()
        });
        let scaled = |f: &RatFunc| -> Poly { (f.num() * &den).exact_div(f.den()).unwrap() };
        let nc = scaled(&self.constant);
        let np: Vec<(ParamId, Poly)> = self.terms.iter().map(|(p, f)| (*p, scaled(f))).collect();
        let maxdeg = std::iter::once(&nc).chain(np.iter().map(|(_, q)| q)).filter_map(|q| q.degree()).max();
        let Some(maxdeg) = maxdeg else { return Vec::new() };
        (0..=maxdeg)
            .map(|i| LinearRow::new(np.iter().map(|(p, q)| (*p, q.coeff(i))), -nc.coeff(i)))
            .filter(|r| !r.is_trivial())
            .collect()
    }

    pub fn display(&self, alloc: &ParamAlloc) -> String {
        let mut parts = Vec::new();
        if !self.constant.is_zero() || self.terms.is_empty() {
            parts.push(self.constant.to_string());
        }
        for (p, f) in &self.terms {
            let l = alloc.label(*p);
            parts.push(if f.is_one() {
                l.to_string()
            } else if f.is_constant() && f.num().coeff(0) == -Q::one() {
                format!("-{l}")
            } else {
                format!("{l}*({f})")
            });
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => s.push_str(&format!(" - {rest}")),
                None => s.push_str(&format!(" + {p}")),
            }
        }
        s
    }
}

impl From<RatFunc> for ParamAffine {
    fn from(f: RatFunc) -> Self {
        ParamAffine::constant(f)
    }
}

/// `Σ coeffs[p] * p = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRow {
    pub coeffs: BTreeMap<ParamId, Q>,
    pub rhs: Q,
}

impl LinearRow {
    pub fn new(coeffs: impl IntoIterator<Item = (ParamId, Q)>, rhs: Q) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LinearRow { coeffs, rhs }
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty() && self.rhs.is_zero()
    }

    pub fn is_contradiction(&self) -> bool {
        self.coeffs.is_empty() && !self.rhs.is_zero()
    }

    pub fn coeff(&self, p: ParamId) -> Q {
        self.coeffs.get(&p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn pivot(&self) -> Option<ParamId> {
        self.coeffs.keys().next_back().cloned()
    }

    /// `self - c * o`
    pub fn sub_scaled(&self, c: &Q, o: &LinearRow) -> LinearRow {
        let mut coeffs = self.coeffs.clone();
        for (p, v) in &o.coeffs {
            let nv = coeffs.get(p).cloned().unwrap_or_else(Q::zero) - c * v;
            if nv.is_zero() {
                coeffs.remove(p);
            } else {
                coeffs.insert(*p, nv);
            }
        }
        LinearRow { coeffs, rhs: &self.rhs - c * &o.rhs }
    }

    pub fn normalized(&self) -> LinearRow {
        match self.pivot() {
            None => self.clone(),
            Some(p) => {
                let inv = self.coeff(p).recip();
                LinearRow { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * &inv)).collect(), rhs: &self.rhs * &inv }
            }
        }
    }

    pub fn holds(&self, assign: &BTreeMap<ParamId, Q>) -> bool {
        let lhs: Q = self.coeffs.iter().map(|(p, c)| c * assign.get(p).cloned().unwrap_or_else(Q::zero)).sum();
        lhs == self.rhs
    }

    pub fn display(&self, alloc: &ParamAlloc) -> String {
        let mut s = String::new();
        for (p, c) in self.coeffs.iter().rev() {
            let l = alloc.label(*p);
            let a = c.abs();
            let term = if a.is_one() { l.to_string() } else { format!("{a}*{l}") };
            if s.is_empty() {
                s = if c.is_negative() { format!("-{term}") } else { term };
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
                s.push_str(&term);
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        format!("{s} = {}", self.rhs)
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::q;

    #[test]
    fn zero_rows_split_by_degree() {
        let mut al = ParamAlloc::new();
        let c1 = al.fresh("c1");
        let c2 = al.fresh("c2");
        // (c1 - 1)/x + (2 c2 + 1)/(x - 1) ≡ 0
        let a = ParamAffine::from_parts(
            &RatFunc::pole(q(-1, 1), &q(0, 1), 1) + &RatFunc::pole(q(1, 1), &q(1, 1), 1),
            [(c1, RatFunc::pole(q(1, 1), &q(0, 1), 1)), (c2, RatFunc::pole(q(2, 1), &q(1, 1), 1))],
        );
        let rows = a.zero_rows();
        assert_eq!(rows.len(), 2);
        let sol: BTreeMap<ParamId, Q> = [(c1, q(1, 1)), (c2, q(-1, 2))].into_iter().collect();
        assert!(rows.iter().all(|r| r.holds(&sol)));
        assert!(a.eval(&sol).is_zero());
    }

    #[test]
    fn substitution_and_display() {
        let mut al = ParamAlloc::new();
        let c = al.fresh("c");
        let d = al.fresh("d");
        let a = ParamAffine::from_parts(RatFunc::x(), [(c, RatFunc::one())]);
        let subs = [(c, ParamAffine::from_parts(RatFunc::one(), [(d, RatFunc::constant(q(-1, 1)))]))].into_iter().collect();
        let b = a.substitute(&subs);
        assert_eq!(b.display(&al), "x + 1 - d");
    }
}
