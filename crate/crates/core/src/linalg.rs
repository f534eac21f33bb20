//! Exact linear algebra over the coefficient fields: sparse reduced row
//! echelon form (the engine behind graded-piece computations) and symmetric
//! congruence diagonalization with a recorded transform.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalars::{FieldId, Scalar};

/// A sparse row: strictly increasing column indices with nonzero entries.
pub type SparseRow = Vec<(usize, Scalar)>;

fn row_scale(row: &mut SparseRow, c: &Scalar) {
    for (_, v) in row.iter_mut() {
        *v = &*v * c;
    }
}

/// dst -= c * src, merging sparse supports.
fn row_axpy(dst: &SparseRow, src: &SparseRow, c: &Scalar) -> SparseRow {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let next_dst = dst.get(i).map(|e| e.0);
        let next_src = src.get(j).map(|e| e.0);
        match (next_dst, next_src) {
            (Some(a), Some(b)) if a == b => {
                let v = &dst[i].1 - &(c * &src[j].1);
                if !v.is_zero() {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push(dst[i].clone());
                i += 1;
                let _ = a;
                let _ = b;
            }
            (Some(_), Some(b)) => {
                let v = -&(c * &src[j].1);
                if !v.is_zero() {
                    out.push((b, v));
                }
                j += 1;
            }
            (Some(_), None) => {
                out.push(dst[i].clone());
                i += 1;
            }
            (None, Some(b)) => {
                let v = -&(c * &src[j].1);
                if !v.is_zero() {
                    out.push((b, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Reduced row echelon form of a sparse row space. Pivots sit on the first
/// (smallest-index) nonzero column of each row; the result is the canonical
/// RREF of the row space and does not depend on the insertion order.
#[derive(Debug, Clone)]
pub struct Rref {
    /// pivot column -> fully reduced row with leading coefficient 1
    rows: BTreeMap<usize, SparseRow>,
}

impl Rref {
    pub fn new() -> Rref {
        Rref { rows: BTreeMap::new() }
    }

    pub fn from_rows(rows: impl IntoIterator<Item = SparseRow>) -> Rref {
        let mut r = Rref::new();
        for row in rows {
            r.insert(row);
        }
        r.back_reduce();
        r
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn row_for_pivot(&self, col: usize) -> Option<&SparseRow> {
        self.rows.get(&col)
    }

    /// Inserts one row, reducing it against current pivots (forward pass).
    pub fn insert(&mut self, mut row: SparseRow) {
        // eliminate known pivot columns from the row
        let mut changed = true;
        while changed {
            changed = false;
            for k in 0..row.len() {
                let col = row[k].0;
                if let Some(p) = self.rows.get(&col) {
                    let c = row[k].1.clone();
                    row = row_axpy(&row, p, &c);
                    changed = true;
                    break;
                }
            }
        }
        if let Some((col, lead)) = row.first() {
            let col = *col;
            let inv = lead.inv().expect("leading entry nonzero");
            row_scale(&mut row, &inv);
            self.rows.insert(col, row);
        }
    }

    /// Back-substitution pass restoring the full RREF invariant: no pivot row
    /// contains another pivot column.
    pub fn back_reduce(&mut self) {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        // descending pivot order: later rows are already clean
        for &p in pivots.iter().rev() {
            let mut row = self.rows.remove(&p).expect("pivot row present");
            let mut k = 1;
            while k < row.len() {
                let col = row[k].0;
                if let Some(other) = self.rows.get(&col) {
                    let c = row[k].1.clone();
                    row = row_axpy(&row, other, &c);
                    // restart scan after support change
                    k = 1;
                } else {
                    k += 1;
                }
            }
            self.rows.insert(p, row);
        }
    }

    /// Reduces a vector modulo the row space; the result is supported on
    /// non-pivot columns only.
    pub fn reduce_vector(&self, v: &SparseRow) -> SparseRow {
        let mut out = v.clone();
        let mut k = 0;
        while k < out.len() {
            let col = out[k].0;
            if let Some(p) = self.rows.get(&col) {
                let c = out[k].1.clone();
                out = row_axpy(&out, p, &c);
                // entries before position k are non-pivot and already final
            } else {
                k += 1;
            }
        }
        out
    }
}

impl Default for Rref {
    fn default() -> Self {
        Self::new()
    }
}

/// Dense symmetric matrix diagonalization by congruence, characteristic != 2.
///
/// Returns (diagonal, transform) with transform^T * g * transform equal to
/// the diagonal matrix. Errors with `DegenerateForm` if the input is
/// singular.
pub fn symmetric_diagonalize(field: FieldId, g: &[Vec<Scalar>]) -> Result<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let n = g.len();
    for row in g {
        if row.len() != n {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
    }
    for i in 0..n {
        for j in 0..i {
            if g[i][j] != g[j][i] {
                return Err(Error::InvalidInput("matrix is not symmetric".into()));
            }
        }
    }
    let mut a: Vec<Vec<Scalar>> = g.to_vec();
    let mut p: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Scalar::one(field) } else { Scalar::zero(field) })
                .collect()
        })
        .collect();

    // column operation col_dst += c * col_src applied symmetrically, with the
    // matching update of the accumulated transform
    let half = Scalar::from_int(2, field).inv()?;

    for k in 0..n {
        if a[k][k].is_zero() {
            // prefer a later index with nonzero diagonal (swap)
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
                for row in p.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // pivot repair: col_k += (1/2) col_j (and row alike) makes
                // a[k][k] = a[k][j] != 0 without scaling the hyperbolic pair
                col_add(&mut a, &mut p, k, j, &half);
            } else {
                return Err(Error::DegenerateForm);
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_zero() {
            return Err(Error::DegenerateForm);
        }
        let inv = pivot.inv()?;
        for j in k + 1..n {
            if a[k][j].is_zero() {
                continue;
            }
            let c = -&(&a[k][j] * &inv);
            col_add(&mut a, &mut p, j, k, &c);
        }
    }
    let diag: Vec<Scalar> = (0..n).map(|i| a[i][i].clone()).collect();
    if diag.iter().any(|d| d.is_zero()) {
        return Err(Error::DegenerateForm);
    }
    Ok((diag, p))
}

/// Symmetric column+row operation: col_dst += c*col_src, row_dst += c*row_src,
/// mirrored into the transform (which collects column operations only).
fn col_add(a: &mut [Vec<Scalar>], p: &mut [Vec<Scalar>], dst: usize, src: usize, c: &Scalar) {
    let n = a.len();
    for i in 0..n {
        let delta = c * &a[i][src];
        a[i][dst] = &a[i][dst] + &delta;
    }
    for j in 0..n {
        let delta = c * &a[src][j];
        a[dst][j] = &a[dst][j] + &delta;
    }
    for i in 0..n {
        let delta = c * &p[i][src];
        p[i][dst] = &p[i][dst] + &delta;
    }
}

/// Verifies transform^T * g * transform == diag(d); used by tests and the
/// acceptance suite as the diagonalization certificate.
pub fn check_congruence(g: &[Vec<Scalar>], d: &[Scalar], p: &[Vec<Scalar>]) -> bool {
    let n = g.len();
    if d.len() != n || p.len() != n {
        return false;
    }
    let field = match d.first() {
        Some(x) => x.field(),
        None => return true,
    };
    // compute p^T g p entry by entry
    for i in 0..n {
        for j in 0..n {
            let mut acc = Scalar::zero(field);
            for r in 0..n {
                if p[r][i].is_zero() {
                    continue;
                }
                let mut inner = Scalar::zero(field);
                for s in 0..n {
                    if g[r][s].is_zero() || p[s][j].is_zero() {
                        continue;
                    }
                    inner = &inner + &(&g[r][s] * &p[s][j]);
                }
                acc = &acc + &(&p[r][i] * &inner);
            }
            let expected = if i == j { d[i].clone() } else { Scalar::zero(field) };
            if acc != expected {
                return false;
            }
        }
    }
    true
}

/// Rank of a dense matrix via sparse RREF; used for nondegeneracy checks.
pub fn dense_rank(rows: &[Vec<Scalar>]) -> usize {
    let sparse = rows.iter().map(|row| {
        row.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect::<SparseRow>()
    });
    Rref::from_rows(sparse).rank()
}
