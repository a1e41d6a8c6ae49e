use std::fmt;

use num_traits::{One, Zero};

use super::reduce::ReductionReport;
use crate::diffsys::{DiffSystem, Orientation};
use crate::exactfield::{RatFunc, Q};
use crate::liealgebra::{bracket, LieDim};
use crate::linalg::{QMatrix, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// Integral row in lower orientation, counted from the first row of the second block.
    pub row: usize,
    /// Integrand as a ℚ(x)-combination of the first-block unknowns.
    pub integrand: Vec<RatFunc>,
    /// `∫ integrand = Σ coefficients[j]·y_j + c`.
    pub coefficients: Vec<RatFunc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegralVerdict {
    Independent { count: usize },
    Dependent { relations: Vec<Relation> },
    Partial { independent: usize, total: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    /// Dimension of the Galois group; a lower bound unless `certified`.
    pub galois_dim: usize,
    pub galois_dim_before: usize,
    pub diag_dim: usize,
    pub diag_dim_asserted: bool,
    pub certified: bool,
    pub unknowns: Vec<String>,
    pub integrals: Option<IntegralVerdict>,
    /// One transcendental per Lie algebra direction, when they can be named.
    pub generators: Vec<String>,
    pub statements: Vec<String>,
    pub caveats: Vec<String>,
}

fn unknown_names(a1: &DiffSystem, n1: usize) -> Vec<String> {
    let a = a1.a();
    let companion = (0..n1.saturating_sub(1)).all(|i| (0..n1).all(|j| a[(i, j)] == if j == i + 1 { RatFunc::one() } else { RatFunc::zero() }));
    if companion {
        (0..n1).map(|k| format!("f{}", "′".repeat(k))).collect()
    } else {
        (0..n1).map(|k| format!("y{}", k + 1)).collect()
    }
}

fn combination(coeffs: &[RatFunc], names: &[String]) -> String {
    let terms: Vec<String> =
        coeffs.iter().zip(names).filter(|(c, _)| !c.is_zero()).map(|(c, n)| if c.is_one() { n.clone() } else { format!("({c})·{n}") }).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn simple_pole(f: &RatFunc) -> Option<Q> {
    (f.den().degree() == Some(1) && f.num().is_constant()).then(|| -f.den().coeff(0) / f.den().coeff(1))
}

fn shifted(p: &Q) -> String {
    if p.is_zero() {
        "x".into()
    } else if p < &Q::zero() {
        format!("x+{}", -p)
    } else {
        format!("x-{p}")
    }
}

/// Names one transcendental per basis element of the closure, or `None` when some generator has no standard name.
fn name_generators(lie: &LieDim) -> Option<Vec<String>> {
    let n = lie.decomp.mats.first()?.rows();
    let id = QMatrix::identity(n);
    let nq = Q::from_integer(n.into());
    let mut span = Span::new(n * n);
    let mut basis: Vec<(QMatrix, String, Option<Q>, usize)> = Vec::new();
    for (f, m) in lie.decomp.funcs.iter().zip(&lie.decomp.mats) {
        let s = m.trace() / &nq;
        let nil = m - &id.scale(&s);
        let (name, pole) = if f.is_one() && nil.is_zero() {
            (if s.is_one() { "e^x".to_string() } else { format!("e^({s}x)") }, None)
        } else if let (Some(p), true) = (simple_pole(f), s.is_zero()) {
            (format!("ln({})", shifted(&p)), Some(p))
        } else {
            return None;
        };
        if span.insert(&m.vec_rows()) {
            basis.push((m.clone(), name, pole, 1));
        }
    }
    let mut done = 0;
    while done < basis.len() {
        for i in 0..done {
            let b = bracket(&basis[i].0, &basis[done].0);
            if span.insert(&b.vec_rows()) {
                let depth = basis[i].3 + basis[done].3;
                let name = match (&basis[i].2, &basis[done].2, depth) {
                    (Some(p), Some(q), 2) if [p, q].iter().all(|v| v.is_zero() || v.is_one()) && p != q => "dilog(x)".to_string(),
                    (Some(p), Some(q), 2) => format!("∫ln({})/({}) dx", shifted(p), shifted(q)),
                    _ => format!("iterated integral of depth {depth}"),
                };
                basis.push((b, name, None, depth));
            }
        }
        done += 1;
    }
    (basis.len() == lie.dim).then(|| basis.into_iter().map(|b| b.1).collect())
}

/// Transcendence statements implied by a reduction.
pub fn independence_report(rep: &ReductionReport) -> IndependenceReport {
    let low = rep.reduced.to_lower();
    let orig = rep.original.to_lower();
    let diag_dim_asserted = rep.diag_galois_dim.is_some();
    let diag_dim = rep.diag_galois_dim.unwrap_or(rep.diag_lie_dim);
    let certified = rep.diag_reduced_assumed && (diag_dim_asserted || rep.envelope_certified());
    let (galois_dim, galois_dim_before) = if diag_dim_asserted {
        (diag_dim + rep.offdiag_dim_after, diag_dim + rep.offdiag_dim_before)
    } else {
        (rep.lie_dim_after, rep.lie_dim_before)
    };
    let mut statements = vec![format!("Galois group dimension = {galois_dim} (transcendence degree of the solution field)")];
    let mut caveats = Vec::new();
    if !rep.diag_reduced_assumed {
        caveats.push("diagonal blocks not asserted reduced: dimensions are upper bounds only".into());
    }
    if !certified {
        caveats.push("bracket closure not certified to be algebraic: dimensions are lower bounds".into());
    }
    if diag_dim_asserted {
        caveats.push(format!("diagonal Galois dimension {diag_dim} is asserted, not computed"));
    }

    let blocks = low.blocks();
    let mut unknowns = Vec::new();
    let mut integrals = None;
    if blocks.len() == 2 && low.diag_block(1).is_zero() {
        let (n1, n2) = (blocks[0], blocks[1]);
        let a1 = DiffSystem::full(low.diag_block(0));
        unknowns = unknown_names(&a1, n1);
        let total = n1 * n2;
        let verdict = if rep.offdiag_dim_after == 0 {
            let p = match rep.original.orientation() {
                Orientation::Lower => rep.gauge.clone(),
                Orientation::Upper => rep.gauge.reversed(),
            };
            let relations: Vec<Relation> = (0..n2)
                .map(|r| Relation {
                    row: r,
                    integrand: (0..n1).map(|j| orig.a()[(n1 + r, j)].clone()).collect(),
                    coefficients: (0..n1).map(|j| p.matrix()[(n1 + r, j)].clone()).collect(),
                })
                .collect();
            for rel in &relations {
                statements.push(format!(
                    "dependent: ∫ {} dx = {} + c",
                    combination(&rel.integrand, &unknowns),
                    combination(&rel.coefficients, &unknowns)
                ));
            }
            IntegralVerdict::Dependent { relations }
        } else if rep.offdiag_dim_after == total {
            statements.push(match total {
                1 => "the integral is algebraically independent of the diagonal solutions".into(),
                2 => "both integrals algebraically independent".into(),
                k => format!("all {k} integrals algebraically independent"),
            });
            IntegralVerdict::Independent { count: total }
        } else {
            statements.push(format!(
                "each unremovable integral direction is algebraically independent of the diagonal solutions ({} of {total})",
                rep.offdiag_dim_after
            ));
            IntegralVerdict::Partial { independent: rep.offdiag_dim_after, total }
        };
        integrals = Some(verdict);
    }

    let generators = if certified && !diag_dim_asserted { name_generators(&rep.lie_after).unwrap_or_default() } else { Vec::new() };
    if !generators.is_empty() {
        statements.push(format!("solutions are expressed with {}", generators.join(", ")));
        let base: Vec<&str> =
            generators.iter().filter(|g| g.starts_with("e^") || g.starts_with("ln(")).map(String::as_str).collect();
        for g in generators.iter().filter(|g| !base.contains(&g.as_str())) {
            statements.push(format!("{g} is algebraically independent of {}", base.join(", ")));
        }
    }
    IndependenceReport {
        galois_dim,
        galois_dim_before,
        diag_dim,
        diag_dim_asserted,
        certified,
        unknowns,
        integrals,
        generators,
        statements,
        caveats,
    }
}

impl fmt::Display for IndependenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.certified { "" } else { " (lower bound)" };
        writeln!(f, "dimension: {} -> {}{kind}", self.galois_dim_before, self.galois_dim)?;
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        for c in &self.caveats {
            writeln!(f, "caveat: {c}")?;
        }
        Ok(())
    }
}
