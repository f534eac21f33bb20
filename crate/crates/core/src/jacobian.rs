//! The graded Artinian quotient J(F) = k[X]/(dF/dX_0, ..., dF/dX_N):
//! per-degree monomial bases and normal forms by exact row reduction,
//! smoothness detection, Hilbert functions, the Scheja-Storch socle
//! generator, and Gram matrices of the residue pairing.
//!
//! Everything is degree-by-degree linear algebra: the Jacobian ideal is
//! generated by homogeneous elements, so no Groebner machinery is needed.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::gw::{diagonalize, GWClass};
use crate::linalg::{Rref, SparseRow};
use crate::poly::{poly_det, Monomial, Poly, WeightedRing};
use crate::scalars::Scalar;

/// Monomial-splitting strategy for writing F_i = sum_j a_ij X_j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchejaStorchStrategy {
    /// Divide each monomial of F_i by its lowest-index variable.
    LowestVar,
    /// Divide each monomial of F_i by its highest-index variable.
    HighestVar,
    /// a_ij = F_ij / (e - 1); weights must all be 1.
    Hessian,
}

/// One graded slice of J(F): all monomials of the degree, the quotient
/// basis (non-pivot monomials), and the reduction map.
#[derive(Debug)]
pub struct GradedPiece {
    degree: i64,
    field: crate::scalars::FieldId,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Column indices of the quotient basis, ascending (graded-lex
    /// descending monomials).
    basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
    rref: Rref,
}

impl GradedPiece {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn all_monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn basis_monomials(&self) -> Vec<&Monomial> {
        self.basis.iter().map(|&c| &self.monomials[c]).collect()
    }

    /// Reduces a single monomial of this degree; the result is a sparse
    /// coefficient vector over basis positions.
    pub fn reduce_monomial(&self, m: &Monomial) -> Result<Vec<(usize, Scalar)>> {
        let col = *self
            .index
            .get(m)
            .ok_or_else(|| Error::InvalidInput(format!("monomial of wrong degree: {m:?}")))?;
        if let Some(pos) = self.basis_pos.get(&col) {
            return Ok(vec![(*pos, Scalar::one(self.field()))]);
        }
        let row = self.rref.row_for_pivot(col).expect("pivot column has a row");
        // m = row pivot: m - (m reduced) in ideal, so m == -(tail) mod ideal
        Ok(row
            .iter()
            .skip(1)
            .map(|(c, v)| (self.basis_pos[c], -v))
            .collect())
    }

    /// Reduces a homogeneous polynomial of this degree to its coefficient
    /// vector over the quotient basis.
    pub fn reduce_poly(&self, p: &Poly) -> Result<Vec<Scalar>> {
        let field = self.field();
        let mut out = vec![Scalar::zero(field); self.basis.len()];
        for (m, c) in p.terms() {
            for (pos, v) in self.reduce_monomial(m)? {
                out[pos] = &out[pos] + &(c * &v);
            }
        }
        Ok(out)
    }

    fn field(&self) -> crate::scalars::FieldId {
        self.field
    }
}

/// The Jacobian ring of a weighted-homogeneous polynomial.
#[derive(Debug)]
pub struct JacobianRing {
    ring: WeightedRing,
    f: Poly,
    degree: i64,
    partials: Vec<Poly>,
    socle_degree: i64,
    cache: Mutex<BTreeMap<i64, Arc<GradedPiece>>>,
}

impl JacobianRing {
    /// Builds J(F) for a weighted-homogeneous F of degree >= 2. The
    /// characteristic must not divide 2 e prod(a_i); the Euler relation
    /// e F = sum a_i X_i F_i is verified, which puts F itself inside the
    /// ideal of partials.
    pub fn build(f: &Poly) -> Result<JacobianRing> {
        let ring = f.ring().clone();
        let e = f.weighted_degree()?;
        if e < 2 {
            return Err(Error::InvalidInput(format!("degree {e} hypersurface, need e >= 2")));
        }
        let p = ring.field().characteristic();
        if p != 0 {
            let mut q = 2 * e;
            for &a in ring.weights() {
                q *= a as i64;
            }
            if q % (p as i64) == 0 {
                return Err(Error::BadCharacteristic {
                    p: p as u32,
                    quantity: format!("2*e*prod(a_i) = {q}"),
                });
            }
        }
        if !f.euler_defect().is_zero() {
            return Err(Error::NotHomogeneous);
        }
        let partials: Vec<Poly> = (0..ring.num_vars()).map(|i| f.partial_derivative(i)).collect();
        let socle_degree = ring.num_vars() as i64 * e - 2 * ring.weight_sum();
        Ok(JacobianRing {
            ring,
            f: f.clone(),
            degree: e,
            partials,
            socle_degree,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn polynomial(&self) -> &Poly {
        &self.f
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn partials(&self) -> &[Poly] {
        &self.partials
    }

    pub fn socle_degree(&self) -> i64 {
        self.socle_degree
    }

    /// The graded piece J(F)_m, computed on first use and cached.
    pub fn graded_piece(&self, m: i64) -> Arc<GradedPiece> {
        if let Some(p) = self.cache.lock().unwrap().get(&m) {
            return p.clone();
        }
        let piece = Arc::new(self.compute_piece(m));
        let mut cache = self.cache.lock().unwrap();
        cache.entry(m).or_insert(piece).clone()
    }

    fn compute_piece(&self, m: i64) -> GradedPiece {
        let monomials = self.ring.monomials_of_degree(m);
        let index: HashMap<Monomial, usize> =
            monomials.iter().enumerate().map(|(i, mo)| (mo.clone(), i)).collect();
        let mut rows: Vec<SparseRow> = Vec::new();
        if m >= 0 {
            for (i, partial) in self.partials.iter().enumerate() {
                if partial.is_zero() {
                    continue;
                }
                let d = self.degree - self.ring.weights()[i] as i64;
                for mu in self.ring.monomials_of_degree(m - d) {
                    let mut row: SparseRow = partial
                        .terms()
                        .map(|(nu, c)| (index[&nu.mul(&mu)], c.clone()))
                        .collect();
                    row.sort_by_key(|(c, _)| *c);
                    rows.push(row);
                }
            }
        }
        // shorter rows first keeps the elimination cheap; the RREF itself is
        // canonical so the order does not affect the result
        rows.sort_by_key(|r| r.len());
        let rref = Rref::from_rows(rows);
        let basis: Vec<usize> = (0..monomials.len()).filter(|c| !rref.is_pivot(*c)).collect();
        let basis_pos: HashMap<usize, usize> =
            basis.iter().enumerate().map(|(pos, &c)| (c, pos)).collect();
        GradedPiece {
            degree: m,
            monomials,
            index,
            basis,
            basis_pos,
            rref,
            field: self.ring.field(),
        }
    }

    pub fn dim_in_degree(&self, m: i64) -> usize {
        self.graded_piece(m).dim()
    }

    /// [dim J_0, ..., dim J_{up_to}].
    pub fn hilbert_function(&self, up_to: i64) -> Vec<usize> {
        (0..=up_to.max(0)).map(|m| self.dim_in_degree(m)).collect()
    }

    /// Finite-dimensionality test: socle one-dimensional and the window
    /// (socle, socle + max a_i] entirely zero. By degree descent this kills
    /// every higher degree as well.
    pub fn is_smooth_quotient(&self) -> bool {
        if self.socle_degree < 0 {
            return false;
        }
        if self.dim_in_degree(self.socle_degree) != 1 {
            return false;
        }
        let max_w = *self.ring.weights().iter().max().expect("nonempty weights") as i64;
        (self.socle_degree + 1..=self.socle_degree + max_w)
            .all(|m| self.dim_in_degree(m) == 0)
    }

    pub fn total_dimension(&self) -> usize {
        self.hilbert_function(self.socle_degree).iter().sum()
    }

    /// The socle basis monomial (J finite-dimensional only).
    pub fn socle_monomial(&self) -> Result<Monomial> {
        let piece = self.graded_piece(self.socle_degree);
        if piece.dim() != 1 {
            return Err(Error::NotFiniteDimensional);
        }
        Ok(piece.basis_monomials()[0].clone())
    }

    /// The matrix (a_ij) with F_i = sum_j a_ij X_j under the chosen
    /// strategy, before taking determinants.
    pub fn splitting_matrix(&self, strategy: SchejaStorchStrategy) -> Result<Vec<Vec<Poly>>> {
        let n = self.ring.num_vars();
        match strategy {
            SchejaStorchStrategy::LowestVar | SchejaStorchStrategy::HighestVar => {
                let mut a = vec![vec![Poly::zero(&self.ring); n]; n];
                for (i, partial) in self.partials.iter().enumerate() {
                    for (mono, c) in partial.terms() {
                        let j = match strategy {
                            SchejaStorchStrategy::LowestVar => {
                                mono.exponents().iter().position(|&e| e > 0)
                            }
                            _ => mono.exponents().iter().rposition(|&e| e > 0),
                        }
                        .ok_or_else(|| {
                            Error::InvalidInput(format!(
                                "partial derivative {i} has a constant term; no splitting F_i = sum a_ij X_j exists"
                            ))
                        })?;
                        let mut exps = mono.exponents().to_vec();
                        exps[j] -= 1;
                        a[i][j] = a[i][j]
                            .add(&Poly::from_term(&self.ring, Monomial::new(exps), c.clone()));
                    }
                }
                Ok(a)
            }
            SchejaStorchStrategy::Hessian => {
                if self.ring.weights().iter().any(|&w| w != 1) {
                    return Err(Error::InvalidInput(
                        "hessian strategy requires all weights 1".into(),
                    ));
                }
                let em1 = Scalar::from_int(self.degree - 1, self.ring.field());
                if em1.is_zero() {
                    return Err(Error::BadCharacteristic {
                        p: self.ring.field().characteristic() as u32,
                        quantity: "e - 1".into(),
                    });
                }
                let inv = em1.inv()?;
                let mut a = vec![vec![Poly::zero(&self.ring); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        a[i][j] = self.partials[i].partial_derivative(j).scale(&inv);
                    }
                }
                Ok(a)
            }
        }
    }

    /// det(a_ij) as a polynomial, before reduction into the socle.
    pub fn scheja_storch_det(&self, strategy: SchejaStorchStrategy) -> Result<Poly> {
        let a = self.splitting_matrix(strategy)?;
        Ok(poly_det(&self.ring, &a))
    }

    /// The Scheja-Storch element e_F: det(a_ij) reduced into the (one
    /// dimensional) socle. Returned as coefficient relative to the socle
    /// basis monomial.
    pub fn scheja_storch_element(&self, strategy: SchejaStorchStrategy) -> Result<SchejaStorchElement> {
        if !self.is_smooth_quotient() {
            return Err(Error::NotFiniteDimensional);
        }
        let det = self.scheja_storch_det(strategy)?;
        let piece = self.graded_piece(self.socle_degree);
        let coeffs = piece.reduce_poly(&det)?;
        Ok(SchejaStorchElement {
            coefficient: coeffs[0].clone(),
            monomial: piece.basis_monomials()[0].clone(),
        })
    }

    /// Gram matrix of B_Jac on the direct sum of the listed graded pieces,
    /// relative to e_F: B(x, y) = lambda iff x y = lambda e_F, and zero
    /// between degrees not adding up to the socle degree.
    pub fn gram_matrix(&self, degrees: &[i64]) -> Result<Vec<Vec<Scalar>>> {
        if !self.is_smooth_quotient() {
            return Err(Error::NotFiniteDimensional);
        }
        let e_f = self.scheja_storch_element(SchejaStorchStrategy::LowestVar)?;
        if e_f.coefficient.is_zero() {
            return Err(Error::ZeroSocleGenerator);
        }
        let eps_inv = e_f.coefficient.inv()?;
        let socle = self.graded_piece(self.socle_degree);
        let field = self.ring.field();

        let mut ds = degrees.to_vec();
        ds.sort_unstable();
        ds.dedup();
        let mut basis: Vec<(i64, Monomial)> = Vec::new();
        for &m in &ds {
            let piece = self.graded_piece(m);
            for b in piece.basis_monomials() {
                basis.push((m, b.clone()));
            }
        }
        let n = basis.len();
        let mut gram = vec![vec![Scalar::zero(field); n]; n];
        for i in 0..n {
            for j in i..n {
                let (mi, ref bi) = basis[i];
                let (mj, ref bj) = basis[j];
                if mi + mj != self.socle_degree {
                    continue;
                }
                let prod = bi.mul(bj);
                let reduced = socle.reduce_monomial(&prod)?;
                let coeff = reduced
                    .first()
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(|| Scalar::zero(field));
                let entry = &coeff * &eps_inv;
                gram[i][j] = entry.clone();
                gram[j][i] = entry;
            }
        }
        Ok(gram)
    }

    /// Diagonalized GW class of B_Jac on all of J(F); rank = dim_k J(F).
    pub fn jacobian_form_full(&self) -> Result<GWClass> {
        let degrees: Vec<i64> =
            (0..=self.socle_degree).filter(|&m| self.dim_in_degree(m) > 0).collect();
        let gram = self.gram_matrix(&degrees)?;
        let (class, _, _) = diagonalize(self.ring.field(), &gram)?;
        Ok(class)
    }

    /// The degrees (q+1)e - |a| for q = 0..n carrying primitive cohomology;
    /// negative degrees are dropped.
    pub fn primitive_degrees(&self, n: i64) -> Vec<i64> {
        (0..=n)
            .map(|q| (q + 1) * self.degree - self.ring.weight_sum())
            .filter(|&d| d >= 0)
            .collect()
    }

    /// Diagonalized GW class of B_Jac restricted to the primitive degrees of
    /// an n-dimensional hypersurface.
    pub fn jacobian_form_primitive(&self, n: i64) -> Result<GWClass> {
        let degrees = self.primitive_degrees(n);
        let gram = self.gram_matrix(&degrees)?;
        if gram.is_empty() {
            return Ok(GWClass::zero(self.ring.field()));
        }
        let (class, _, _) = diagonalize(self.ring.field(), &gram)?;
        Ok(class)
    }

    /// JSON dump: field, weights, defining polynomial, socle data and
    /// Hilbert function.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let hilbert: Vec<usize> = self.hilbert_function(self.socle_degree);
        let socle = self.scheja_storch_element(SchejaStorchStrategy::LowestVar)?;
        Ok(serde_json::json!({
            "field": self.ring.field().to_string(),
            "variables": self.ring.variables(),
            "weights": self.ring.weights(),
            "polynomial": self.f.to_string(),
            "degree": self.degree,
            "socle_degree": self.socle_degree,
            "hilbert_function": hilbert,
            "total_dimension": self.total_dimension(),
            "socle_monomial": Poly::from_term(&self.ring, socle.monomial.clone(), Scalar::one(self.ring.field())).to_string(),
            "socle_generator": [socle.coefficient.to_string()],
        }))
    }
}

/// The canonical socle generator, as coefficient relative to the socle
/// basis monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchejaStorchElement {
    pub coefficient: Scalar,
    pub monomial: Monomial,
}

/// Coefficients of prod_i (1 - T^{e-a_i}) / (1 - T^{a_i}) up to degree
/// `up_to`: the Hilbert series of a smooth complete-intersection Jacobian
/// ring, used as an independent oracle for the linear-algebra route.
pub fn hilbert_series_ci(weights: &[u32], e: i64, up_to: i64) -> Vec<i64> {
    let n = up_to.max(0) as usize;
    let mut s = vec![0i64; n + 1];
    s[0] = 1;
    for &a in weights {
        let k = (e - a as i64).max(0) as usize;
        if k == 0 {
            return vec![0; n + 1];
        }
        // multiply by (1 - T^k)
        for m in (k..=n).rev() {
            s[m] -= s[m - k];
        }
        // divide by (1 - T^a)
        let a = a as usize;
        for m in a..=n {
            s[m] += s[m - a];
        }
    }
    s
}
