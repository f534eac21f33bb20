//! Sparse multivariate polynomials with a weighted grading.
//!
//! Exponent vectors are dense (at most a handful of variables); terms are
//! kept in a BTreeMap for deterministic iteration. The canonical display
//! order is graded-lex, descending.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{FieldId, Scalar};

/// A polynomial ring with named variables and positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedRing {
    field: FieldId,
    variables: Arc<Vec<String>>,
    weights: Arc<Vec<u32>>,
}

impl WeightedRing {
    pub fn new(field: FieldId, variables: Vec<String>, weights: Vec<u32>) -> Result<WeightedRing> {
        if variables.is_empty() {
            return Err(Error::WeightsInvalid("need at least one variable".into()));
        }
        if variables.len() != weights.len() {
            return Err(Error::WeightsInvalid(format!(
                "{} variables but {} weights",
                variables.len(),
                weights.len()
            )));
        }
        if weights.contains(&0) {
            return Err(Error::WeightsInvalid("weights must be positive".into()));
        }
        for (i, v) in variables.iter().enumerate() {
            if v.is_empty() || v == "t" || variables[..i].contains(v) {
                return Err(Error::WeightsInvalid(format!("bad variable name `{v}`")));
            }
        }
        Ok(WeightedRing {
            field,
            variables: Arc::new(variables),
            weights: Arc::new(weights),
        })
    }

    /// Standard grading: all weights 1.
    pub fn standard(field: FieldId, variables: Vec<String>) -> Result<WeightedRing> {
        let n = variables.len();
        WeightedRing::new(field, variables, vec![1; n])
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight_sum(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum()
    }

    pub fn weight_product(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).product()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Same variables and weights over a different coefficient field.
    pub fn with_field(&self, field: FieldId) -> WeightedRing {
        WeightedRing { field, variables: self.variables.clone(), weights: self.weights.clone() }
    }

    /// Extends the ring by one fresh variable of the given weight.
    pub fn extended(&self, name: &str, weight: u32) -> Result<WeightedRing> {
        let mut vars = self.variables.as_ref().clone();
        vars.push(name.to_string());
        let mut weights = self.weights.as_ref().clone();
        weights.push(weight);
        WeightedRing::new(self.field, vars, weights)
    }

    pub fn weighted_degree(&self, m: &Monomial) -> i64 {
        m.exponents
            .iter()
            .zip(self.weights.iter())
            .map(|(&e, &w)| e as i64 * w as i64)
            .sum()
    }

    /// All monomials of the given weighted degree, graded-lex descending.
    pub fn monomials_of_degree(&self, degree: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if degree < 0 {
            return out;
        }
        let mut exps = vec![0u32; self.num_vars()];
        self.enumerate(0, degree, &mut exps, &mut out);
        out
    }

    fn enumerate(&self, var: usize, remaining: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == self.num_vars() {
            if remaining == 0 {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        if var + 1 == self.num_vars() {
            let w = self.weights[var] as i64;
            if remaining % w == 0 {
                exps[var] = (remaining / w) as u32;
                out.push(Monomial::new(exps.clone()));
                exps[var] = 0;
            }
            return;
        }
        let w = self.weights[var] as i64;
        let max = remaining / w;
        // descending exponent on the leading variable gives descending lex
        for e in (0..=max).rev() {
            exps[var] = e as u32;
            self.enumerate(var + 1, remaining - e * w, exps, out);
        }
        exps[var] = 0;
    }
}

/// An exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial { exponents }
    }

    pub fn one(num_vars: usize) -> Monomial {
        Monomial { exponents: vec![0; num_vars] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(other.exponents.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Graded-lex comparison with respect to a weight vector: higher weighted
    /// degree first, ties broken lexicographically with earlier variables
    /// dominating.
    pub fn grlex_cmp(&self, other: &Monomial, ring: &WeightedRing) -> std::cmp::Ordering {
        ring.weighted_degree(self)
            .cmp(&ring.weighted_degree(other))
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

/// A sparse polynomial: nonzero coefficients indexed by monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ring: WeightedRing,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(ring: &WeightedRing) -> Poly {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &WeightedRing, c: Scalar) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.num_vars()), c);
        }
        p
    }

    pub fn one(ring: &WeightedRing) -> Poly {
        Poly::constant(ring, Scalar::one(ring.field()))
    }

    pub fn variable(ring: &WeightedRing, index: usize) -> Poly {
        let mut exps = vec![0; ring.num_vars()];
        exps[index] = 1;
        Poly::from_term(ring, Monomial::new(exps), Scalar::one(ring.field()))
    }

    pub fn from_term(ring: &WeightedRing, m: Monomial, c: Scalar) -> Poly {
        assert_eq!(m.exponents.len(), ring.num_vars());
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.ring.field()))
    }

    fn insert_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in other.terms.iter() {
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Poly {
        let field = self.ring.field();
        let mut out = Poly::zero(&self.ring);
        for (m, c) in self.terms.iter() {
            let e = m.exponents[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents.clone();
            exps[i] -= 1;
            let factor = Scalar::from_int(e as i64, field);
            out.insert_term(Monomial::new(exps), c * &factor);
        }
        out
    }

    /// The common weighted degree of all terms, or `NotHomogeneous`.
    pub fn weighted_degree(&self) -> Result<i64> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(Error::ZeroPolynomial)?;
        let d = self.ring.weighted_degree(first);
        for m in it {
            if self.ring.weighted_degree(m) != d {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(d)
    }

    pub fn is_weighted_homogeneous(&self) -> bool {
        self.is_zero() || self.weighted_degree().is_ok()
    }

    /// Largest weighted degree among the terms (zero polynomial errors).
    pub fn max_weighted_degree(&self) -> Result<i64> {
        self.terms
            .keys()
            .map(|m| self.ring.weighted_degree(m))
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Substitutes Y_i -> X_i^{a_i}, landing in the standard-graded ring on
    /// the same variable names.
    pub fn substitute_powers(&self) -> Poly {
        let target = WeightedRing {
            field: self.ring.field,
            variables: self.ring.variables.clone(),
            weights: Arc::new(vec![1; self.ring.num_vars()]),
        };
        let mut out = Poly::zero(&target);
        for (m, c) in self.terms.iter() {
            let exps = m
                .exponents
                .iter()
                .zip(self.ring.weights.iter())
                .map(|(&e, &a)| e * a)
                .collect();
            out.insert_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// e*f - sum_i a_i X_i dF/dX_i; identically zero exactly when f is
    /// weighted-homogeneous of degree e (char 0; in char p the check is up to
    /// the usual caveat that degrees are taken mod p through the scalars).
    pub fn euler_defect(&self) -> Poly {
        let field = self.ring.field();
        if self.is_zero() {
            return Poly::zero(&self.ring);
        }
        let e = match self.max_weighted_degree() {
            Ok(d) => d,
            Err(_) => return Poly::zero(&self.ring),
        };
        let mut acc = self.scale(&Scalar::from_int(e, field));
        for i in 0..self.ring.num_vars() {
            let a_i = self.ring.weights()[i] as i64;
            let xi_di = Poly::variable(&self.ring, i).mul(&self.partial_derivative(i));
            acc = acc.sub(&xi_di.scale(&Scalar::from_int(a_i, field)));
        }
        acc
    }

    /// Determinant of the Hessian matrix (d^2 f / dX_i dX_j) as a polynomial.
    pub fn hessian_det(&self) -> Poly {
        let n = self.ring.num_vars();
        let mut hess = Vec::with_capacity(n);
        for i in 0..n {
            let fi = self.partial_derivative(i);
            let row: Vec<Poly> = (0..n).map(|j| fi.partial_derivative(j)).collect();
            hess.push(row);
        }
        poly_det(&self.ring, &hess)
    }

    /// Moves the polynomial to a ring with the same variables over another
    /// field; only valid when coefficients convert (Q -> Q(t), Q -> F_p, ...).
    pub fn map_coefficients<F>(&self, target: &WeightedRing, f: F) -> Result<Poly>
    where
        F: Fn(&Scalar) -> Result<Scalar>,
    {
        let mut out = Poly::zero(target);
        for (m, c) in self.terms.iter() {
            out.insert_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Terms sorted graded-lex descending (canonical printing order).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0, &self.ring));
        v
    }
}

/// Determinant of a square polynomial matrix by expansion along the first
/// remaining row, memoized on the active column set (matrices stay <= 8x8).
pub fn poly_det(ring: &WeightedRing, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(n <= 16, "determinant expansion limited to small matrices");
    assert!(m.iter().all(|row| row.len() == n));
    let mut memo: std::collections::HashMap<u32, Poly> = std::collections::HashMap::new();
    det_rec(ring, m, 0, (1u32 << n) - 1, &mut memo)
}

fn det_rec(
    ring: &WeightedRing,
    m: &[Vec<Poly>],
    row: usize,
    cols: u32,
    memo: &mut std::collections::HashMap<u32, Poly>,
) -> Poly {
    if cols == 0 {
        return Poly::one(ring);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = Poly::zero(ring);
    let mut sign = true;
    for j in 0..m.len() {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = &m[row][j];
        if !entry.is_zero() {
            let minor = det_rec(ring, m, row + 1, cols & !(1 << j), memo);
            let contrib = entry.mul(&minor);
            acc = if sign { acc.add(&contrib) } else { acc.sub(&contrib) };
        }
        sign = !sign;
    }
    memo.insert(cols, acc.clone());
    acc
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            let (neg, abs) = match c {
                Scalar::Rat(q) if q < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, -c)
                }
                other => (false, other.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_constant_term = m.total_degree() == 0;
            let coeff_str = format!("{abs}");
            let needs_parens = coeff_str.contains([' ', '+', '-']) && coeff_str.len() > 1;
            if is_constant_term {
                if needs_parens {
                    write!(f, "({coeff_str})")?;
                } else {
                    write!(f, "{coeff_str}")?;
                }
            } else {
                let mut wrote_coeff = false;
                if !abs.is_one() {
                    if needs_parens {
                        write!(f, "({coeff_str})")?;
                    } else {
                        write!(f, "{coeff_str}")?;
                    }
                    wrote_coeff = true;
                }
                let mut first_var = !wrote_coeff;
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first_var {
                        write!(f, "*")?;
                    }
                    first_var = false;
                    write!(f, "{}", self.ring.variables()[i])?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldId;

    fn ring(vars: &[&str], weights: &[u32]) -> WeightedRing {
        WeightedRing::new(
            FieldId::Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
            weights.to_vec(),
        )
        .unwrap()
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n, FieldId::Rationals)
    }

    #[test]
    fn partial_derivatives() {
        let r = ring(&["x", "y"], &[1, 1]);
        // x^3 + y^3
        let f = Poly::from_term(&r, Monomial::new(vec![3, 0]), s(1))
            .add(&Poly::from_term(&r, Monomial::new(vec![0, 3]), s(1)));
        let fx = f.partial_derivative(0);
        assert_eq!(fx, Poly::from_term(&r, Monomial::new(vec![2, 0]), s(3)));
        // d(x^2 y)/dy = x^2
        let g = Poly::from_term(&r, Monomial::new(vec![2, 1]), s(1));
        assert_eq!(g.partial_derivative(1), Poly::from_term(&r, Monomial::new(vec![2, 0]), s(1)));
    }

    #[test]
    fn weighted_derivative_degree_bookkeeping() {
        // Y0^6 + Y2^2 with weights (1,1,3): dF/dY2 = 2 Y2 is homogeneous of degree 3
        let r = ring(&["y0", "y1", "y2"], &[1, 1, 3]);
        let f = Poly::from_term(&r, Monomial::new(vec![6, 0, 0]), s(1))
            .add(&Poly::from_term(&r, Monomial::new(vec![0, 0, 2]), s(1)));
        assert_eq!(f.weighted_degree().unwrap(), 6);
        let f2 = f.partial_derivative(2);
        assert_eq!(f2, Poly::from_term(&r, Monomial::new(vec![0, 0, 1]), s(2)));
        assert_eq!(f2.weighted_degree().unwrap(), 3);
    }

    #[test]
    fn weighted_degree_detects_inhomogeneity() {
        let r = ring(&["x", "y"], &[1, 1]);
        let f = Poly::variable(&r, 0).add(&Poly::variable(&r, 1).pow(2));
        assert_eq!(f.weighted_degree(), Err(Error::NotHomogeneous));
        assert_eq!(Poly::zero(&r).weighted_degree(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn monomial_enumeration_is_graded_lex() {
        let r = ring(&["x", "y"], &[1, 1]);
        let ms = r.monomials_of_degree(2);
        let exps: Vec<&[u32]> = ms.iter().map(|m| m.exponents()).collect();
        assert_eq!(exps, vec![&[2, 0][..], &[1, 1], &[0, 2]]);

        let rw = ring(&["x", "y"], &[1, 2]);
        let ms = rw.monomials_of_degree(4);
        let exps: Vec<&[u32]> = ms.iter().map(|m| m.exponents()).collect();
        assert_eq!(exps, vec![&[4, 0][..], &[2, 1], &[0, 2]]);

        assert_eq!(r.monomials_of_degree(0), vec![Monomial::new(vec![0, 0])]);
        assert!(r.monomials_of_degree(-1).is_empty());
    }

    #[test]
    fn monomial_counts_match_series() {
        // #monomials of degree m = coefficient of T^m in prod 1/(1 - T^{a_i})
        let r = ring(&["x", "y", "z"], &[1, 2, 3]);
        let bound = 40usize;
        let mut series = vec![0i64; bound + 1];
        series[0] = 1;
        for &a in r.weights() {
            // multiply by 1/(1 - T^a): prefix sums with stride a
            for m in a as usize..=bound {
                series[m] += series[m - a as usize];
            }
        }
        for m in 0..=bound {
            assert_eq!(r.monomials_of_degree(m as i64).len() as i64, series[m], "degree {m}");
        }
    }

    #[test]
    fn substitute_powers_examples() {
        let r = ring(&["x", "y"], &[1, 2]);
        let f = Poly::from_term(&r, Monomial::new(vec![4, 0]), s(1))
            .add(&Poly::from_term(&r, Monomial::new(vec![0, 2]), s(1)));
        let g = f.substitute_powers();
        assert_eq!(g.ring().weights(), &[1, 1]);
        let expected = Poly::from_term(g.ring(), Monomial::new(vec![4, 0]), s(1))
            .add(&Poly::from_term(g.ring(), Monomial::new(vec![0, 4]), s(1)));
        assert_eq!(g, expected);
        assert_eq!(g.weighted_degree().unwrap(), 4);

        let c = Poly::constant(&r, s(5));
        assert_eq!(c.substitute_powers(), Poly::constant(c.substitute_powers().ring(), s(5)));
    }

    #[test]
    fn substitute_powers_chain_rule() {
        // d(pi* F)/dX_i = a_i X_i^{a_i - 1} pi*(dF/dY_i)
        let r = ring(&["x", "y", "z"], &[1, 2, 3]);
        let f = Poly::from_term(&r, Monomial::new(vec![6, 0, 0]), s(2))
            .add(&Poly::from_term(&r, Monomial::new(vec![1, 1, 1]), s(-3)))
            .add(&Poly::from_term(&r, Monomial::new(vec![0, 3, 0]), s(1)));
        let g = f.substitute_powers();
        for i in 0..3 {
            let lhs = g.partial_derivative(i);
            let a = r.weights()[i];
            let mut exps = vec![0u32; 3];
            exps[i] = a - 1;
            let factor =
                Poly::from_term(g.ring(), Monomial::new(exps), s(a as i64));
            let rhs = factor.mul(&f.partial_derivative(i).substitute_powers());
            assert_eq!(lhs, rhs, "variable {i}");
        }
    }

    #[test]
    fn hessian_determinants() {
        let r = ring(&["x", "y"], &[1, 1]);
        let f = Poly::variable(&r, 0).pow(2).add(&Poly::variable(&r, 1).pow(2));
        assert_eq!(f.hessian_det(), Poly::constant(&r, s(4)));

        let g = Poly::variable(&r, 0).pow(3).add(&Poly::variable(&r, 1).pow(3));
        assert_eq!(g.hessian_det(), Poly::from_term(&r, Monomial::new(vec![1, 1]), s(36)));

        let xy = Poly::from_term(&r, Monomial::new(vec![1, 1]), s(1));
        assert_eq!(xy.hessian_det(), Poly::constant(&r, s(-1)));
    }

    #[test]
    fn euler_defect_vanishes_exactly_for_homogeneous() {
        let r = ring(&["x", "y"], &[1, 1]);
        let f = Poly::variable(&r, 0).pow(3).add(&Poly::variable(&r, 1).pow(3));
        assert!(f.euler_defect().is_zero());

        let rw = ring(&["y0", "y2"], &[1, 3]);
        let fw = Poly::from_term(&rw, Monomial::new(vec![6, 0]), s(1))
            .add(&Poly::from_term(&rw, Monomial::new(vec![0, 2]), s(1)));
        assert!(fw.euler_defect().is_zero());

        let bad = Poly::variable(&r, 0).add(&Poly::variable(&r, 1).pow(2));
        assert!(!bad.euler_defect().is_zero());
    }

    #[test]
    fn canonical_rendering() {
        let r = ring(&["x0", "x1", "x2"], &[1, 1, 1]);
        let f = Poly::from_term(&r, Monomial::new(vec![2, 1, 0]), s(3)).add(&Poly::from_term(
            &r,
            Monomial::new(vec![0, 0, 3]),
            Scalar::from_rational(num_rational::BigRational::new((-1).into(), 2.into()), FieldId::Rationals).unwrap(),
        ));
        assert_eq!(f.to_string(), "3*x0^2*x1 - 1/2*x2^3");
    }
}
