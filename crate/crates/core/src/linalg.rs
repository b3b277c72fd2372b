//! Exact matrices over presented rings and over k.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::PresentedRing;
use crate::scalar::{Scalar, ScalarField};

/// Dense row-major matrix whose entries live in some [`PresentedRing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: ScalarField) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_scalars(rows: &[Vec<Scalar>]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|c| Poly::constant(c.clone())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn normalize(&self, ring: &PresentedRing) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| ring.normalize(p)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix, ring: &PresentedRing) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, ring.normalize(&acc));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Poly], ring: &PresentedRing) -> Vec<Poly> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                ring.normalize(&acc)
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// The `size × size` block in block row `bi`, block column `bj`.
    pub fn block(&self, bi: usize, bj: usize, size: usize) -> Matrix {
        let mut out = Matrix::zeros(size, size);
        for n in 0..size {
            for i in 0..size {
                out.set(n, i, self.get(bi * size + n, bj * size + i).clone());
            }
        }
        out
    }

    pub fn equal(&self, other: &Matrix, ring: &PresentedRing) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| ring.equal(a, b))
    }

    pub fn is_zero(&self, ring: &PresentedRing) -> bool {
        self.entries.iter().all(|p| ring.is_zero(p))
    }

    pub fn is_identity(&self, ring: &PresentedRing) -> bool {
        self.rows == self.cols && self.equal(&Matrix::identity(self.rows, ring.field()), ring)
    }

    /// `[[a,b],[c,d]]` with entries in canonical form.
    pub fn render(&self, ring: &PresentedRing) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = self.row(i).iter().map(|p| ring.render(&ring.normalize(p))).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    pub fn render_rows(&self, ring: &PresentedRing) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|p| ring.render(&ring.normalize(p))).collect())
            .collect()
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Matrix {
        let rows = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != skip_col)
                    .map(|j| self.get(i, j).clone())
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows)
    }
}

/// Determinant by dynamic programming over column subsets; division free, so valid in any ring.
pub fn determinant(m: &Matrix, ring: &PresentedRing) -> Poly {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return ring.one();
    }
    assert!(n <= 20, "determinant too large for subset expansion");
    let mut dp: Vec<Poly> = vec![Poly::zero(); 1 << n];
    dp[0] = ring.one();
    for s in 0..(1usize << n) {
        if dp[s].is_zero() {
            continue;
        }
        let row = s.count_ones() as usize;
        if row == n {
            continue;
        }
        for c in 0..n {
            if s & (1 << c) != 0 {
                continue;
            }
            let entry = m.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let above = (s >> (c + 1)).count_ones();
            let term = dp[s].mul(entry);
            let t = s | (1 << c);
            dp[t] = if above % 2 == 0 { dp[t].add(&term) } else { dp[t].sub(&term) };
            dp[t] = ring.normalize(&dp[t]);
        }
    }
    ring.normalize(&dp[(1 << n) - 1])
}

pub fn adjugate(m: &Matrix, ring: &PresentedRing) -> Matrix {
    let n = m.rows;
    let mut out = Matrix::zeros(n, n);
    if n == 1 {
        out.set(0, 0, ring.one());
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            let d = determinant(&m.minor(i, j), ring);
            let c = if (i + j) % 2 == 0 { d } else { d.neg() };
            out.set(j, i, c);
        }
    }
    out
}

/// Inverse over `ring`, with unit pivots first and the adjugate as fallback.
pub fn inverse(m: &Matrix, ring: &PresentedRing) -> Result<Matrix> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    match gauss_jordan_inverse(m, ring)? {
        Some(inv) => Ok(inv),
        None => {
            let det = determinant(m, ring);
            match ring.unit_inverse(&det) {
                Ok(dinv) => {
                    let adj = adjugate(m, ring);
                    let mut inv = Matrix::zeros(m.rows, m.cols);
                    for i in 0..m.rows {
                        for j in 0..m.cols {
                            inv.set(i, j, ring.normalize(&adj.get(i, j).mul(&dinv)));
                        }
                    }
                    Ok(inv)
                }
                Err(Error::NotAUnit(_)) => Err(Error::NonInvertibleMatrix {
                    witness: m.render(ring),
                    reason: format!("determinant {} is not a unit", ring.render(&det)),
                }),
                Err(e) => Err(e),
            }
        }
    }
}

/// Pivot search: constant entries first, then any entry the ring can invert.
fn find_pivot(rows: &[Vec<Poly>], col: usize, from: usize, ring: &PresentedRing) -> Result<Option<(usize, Poly)>> {
    for (i, row) in rows.iter().enumerate().skip(from) {
        let p = &row[col];
        if !p.is_zero() && p.is_constant() {
            return Ok(Some((i, Poly::constant(p.constant_value().expect("nonzero").inv()?))));
        }
    }
    for (i, row) in rows.iter().enumerate().skip(from) {
        let p = &row[col];
        if p.is_zero() {
            continue;
        }
        match ring.unit_inverse(p) {
            Ok(z) => return Ok(Some((i, z))),
            Err(Error::NotAUnit(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

fn gauss_jordan_inverse(m: &Matrix, ring: &PresentedRing) -> Result<Option<Matrix>> {
    let n = m.rows;
    let field = ring.field();
    let mut rows: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            let mut row: Vec<Poly> = m.row(i).iter().map(|p| ring.normalize(p)).collect();
            row.extend((0..n).map(|j| if i == j { Poly::one(field) } else { Poly::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let Some((p, pinv)) = find_pivot(&rows, col, col, ring)? else {
            return Ok(None);
        };
        rows.swap(col, p);
        rows[col] = rows[col].iter().map(|x| ring.normalize(&x.mul(&pinv))).collect();
        for i in 0..n {
            if i == col || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            let pivot_row = rows[col].clone();
            rows[i] = rows[i]
                .iter()
                .zip(&pivot_row)
                .map(|(x, y)| ring.normalize(&x.sub(&y.mul(&factor))))
                .collect();
        }
    }
    Ok(Some(Matrix::from_rows(rows.into_iter().map(|row| row[n..].to_vec()).collect())))
}

/// Outcome of solving `M x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<Poly>),
    Inconsistent,
    /// The elimination ran out of unit pivots and the remaining system could not be decided.
    Undetermined,
}

/// Solve `M x = b` over `ring`, pivoting only on units.
///
/// What remains after unit pivoting is decided by linear algebra over k when the ring is
/// finite-dimensional, and by ideal membership when it is a single equation in one unknown.
pub fn solve(m: &Matrix, b: &[Poly], ring: &PresentedRing) -> Result<Solution> {
    assert_eq!(m.rows, b.len(), "dimension mismatch");
    let (nr, nc) = (m.rows, m.cols);
    let mut rows: Vec<Vec<Poly>> = (0..nr)
        .map(|i| {
            let mut row: Vec<Poly> = m.row(i).iter().map(|p| ring.normalize(p)).collect();
            row.push(ring.normalize(&b[i]));
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut free_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..nc {
        if r == nr {
            free_cols.push(col);
            continue;
        }
        let Some((p, pinv)) = find_pivot(&rows, col, r, ring)? else {
            free_cols.push(col);
            continue;
        };
        rows.swap(r, p);
        rows[r] = rows[r].iter().map(|x| ring.normalize(&x.mul(&pinv))).collect();
        for i in 0..nr {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            let pivot_row = rows[r].clone();
            rows[i] = rows[i]
                .iter()
                .zip(&pivot_row)
                .map(|(x, y)| ring.normalize(&x.sub(&y.mul(&factor))))
                .collect();
        }
        pivots.push((r, col));
        r += 1;
    }
    // Residual system in the free columns.
    let residual: Vec<usize> = (r..nr).collect();
    let residual_nonzero: Vec<usize> = residual
        .iter()
        .copied()
        .filter(|&i| rows[i].iter().any(|p| !p.is_zero()))
        .collect();
    let mut free_values: Vec<Poly> = vec![Poly::zero(); nc];
    if !residual_nonzero.is_empty() {
        let all_coeffs_zero = |i: usize| free_cols.iter().all(|&c| rows[i][c].is_zero());
        if residual_nonzero.iter().any(|&i| all_coeffs_zero(i) && !rows[i][nc].is_zero()) {
            return Ok(Solution::Inconsistent);
        }
        let sub_rows: Vec<usize> = residual_nonzero.iter().copied().filter(|&i| !all_coeffs_zero(i)).collect();
        if !sub_rows.is_empty() {
            match solve_residual(&rows, &sub_rows, &free_cols, nc, ring)? {
                Residual::Solved(vals) => {
                    for (c, v) in free_cols.iter().zip(vals) {
                        free_values[*c] = v;
                    }
                }
                Residual::Inconsistent => return Ok(Solution::Inconsistent),
                Residual::Undetermined => return Ok(Solution::Undetermined),
            }
        }
    }
    let mut x = free_values.clone();
    for &(row, col) in &pivots {
        let mut v = rows[row][nc].clone();
        for &c in &free_cols {
            if !rows[row][c].is_zero() && !free_values[c].is_zero() {
                v = v.sub(&rows[row][c].mul(&free_values[c]));
            }
        }
        x[col] = ring.normalize(&v);
    }
    debug_assert!(m.mul_vec(&x, ring).iter().zip(b).all(|(a, c)| ring.equal(a, c)));
    Ok(Solution::Solved(x))
}

enum Residual {
    Solved(Vec<Poly>),
    Inconsistent,
    Undetermined,
}

fn solve_residual(
    rows: &[Vec<Poly>],
    sub_rows: &[usize],
    free_cols: &[usize],
    rhs: usize,
    ring: &PresentedRing,
) -> Result<Residual> {
    if let Ok(basis) = ring.staircase() {
        // Expand over k: each unknown is Σ c_m·m over the standard monomials.
        let dim = basis.len();
        let field = ring.field();
        let coords = |p: &Poly| -> Vec<Scalar> {
            let p = ring.normalize(p);
            basis
                .iter()
                .map(|m| p.coefficient(m).cloned().unwrap_or_else(|| field.zero()))
                .collect()
        };
        let nunk = free_cols.len() * dim;
        let mut a: Vec<Vec<Scalar>> = Vec::new();
        let mut b: Vec<Scalar> = Vec::new();
        for &i in sub_rows {
            // Column (c, m) contributes coefficient(row[c]·m).
            let mut block: Vec<Vec<Scalar>> = vec![Vec::with_capacity(nunk); dim];
            for &c in free_cols {
                for m in &basis {
                    let prod = coords(&rows[i][c].mul(&Poly::term(m.clone(), field.one())));
                    for (d, v) in prod.into_iter().enumerate() {
                        block[d].push(v);
                    }
                }
            }
            a.extend(block);
            b.extend(coords(&rows[i][rhs]));
        }
        return Ok(match solve_scalar(&a, &b, field) {
            None => Residual::Inconsistent,
            Some(sol) => {
                let vals = (0..free_cols.len())
                    .map(|u| {
                        let mut p = Poly::zero();
                        for (d, m) in basis.iter().enumerate() {
                            p.add_term(m.clone(), sol[u * dim + d].clone());
                        }
                        p
                    })
                    .collect();
                Residual::Solved(vals)
            }
        });
    }
    let single = sub_rows.len() == 1 && {
        let i = sub_rows[0];
        free_cols.iter().filter(|&&c| !rows[i][c].is_zero()).count() == 1
    };
    if single {
        let i = sub_rows[0];
        let &c = free_cols.iter().find(|&&c| !rows[i][c].is_zero()).expect("one entry");
        let q = ring.quotient(&[rows[i][c].clone()])?;
        if !q.is_zero(&rows[i][rhs]) {
            return Ok(Residual::Inconsistent);
        }
    }
    Ok(Residual::Undetermined)
}

/// Cramer's rule: `x_c = det(M_c)/det(M)`; requires a unit determinant.
pub fn cramer(m: &Matrix, b: &[Poly], ring: &PresentedRing) -> Result<Vec<Poly>> {
    let det = determinant(m, ring);
    let dinv = ring.unit_inverse(&det).map_err(|e| match e {
        Error::NotAUnit(d) => Error::NonInvertibleMatrix {
            witness: m.render(ring),
            reason: format!("determinant {d} is not a unit"),
        },
        other => other,
    })?;
    Ok((0..m.cols)
        .map(|c| {
            let mut mc = m.clone();
            for (i, bi) in b.iter().enumerate() {
                mc.set(i, c, bi.clone());
            }
            ring.normalize(&determinant(&mc, ring).mul(&dinv))
        })
        .collect())
}

// Linear algebra over k.

/// Reduced row echelon form and pivot columns.
pub fn rref(rows: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut a: Vec<Vec<Scalar>> = rows.to_vec();
    let ncols = a.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        a[r] = a[r].iter().map(|x| x * &inv).collect();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pr = a[r].clone();
                a[i] = a[i].iter().zip(&pr).map(|(x, y)| x - &(y * &f)).collect();
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    rref(rows).1.len()
}

/// Some solution of `A x = b` over k, if one exists.
pub fn solve_scalar(a: &[Vec<Scalar>], b: &[Scalar], field: ScalarField) -> Option<Vec<Scalar>> {
    let ncols = a.first().map(Vec::len).unwrap_or(0);
    let aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![field.zero(); ncols]);
    }
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (row, &c) in red.iter().zip(&pivots) {
        x[c] = row[ncols].clone();
    }
    Some(x)
}

/// Whether `v` lies in the span of `vectors`.
pub fn in_span(vectors: &[Vec<Scalar>], v: &[Scalar], field: ScalarField) -> bool {
    if vectors.is_empty() {
        return v.iter().all(Scalar::is_zero);
    }
    let cols: Vec<Vec<Scalar>> = (0..v.len())
        .map(|i| vectors.iter().map(|w| w[i].clone()).collect())
        .collect();
    solve_scalar(&cols, v, field).is_some()
}

/// Coefficients `c` with `Σ c_i vectors_i = v`, if any.
pub fn express_in(vectors: &[Vec<Scalar>], v: &[Scalar], field: ScalarField) -> Option<Vec<Scalar>> {
    if vectors.is_empty() {
        return if v.iter().all(Scalar::is_zero) { Some(Vec::new()) } else { None };
    }
    let cols: Vec<Vec<Scalar>> = (0..v.len())
        .map(|i| vectors.iter().map(|w| w[i].clone()).collect())
        .collect();
    solve_scalar(&cols, v, field)
}

pub fn inverse_scalar(a: &[Vec<Scalar>], field: ScalarField) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let aug: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul_scalar(a: &[Vec<Scalar>], b: &[Vec<Scalar>], field: ScalarField) -> Vec<Vec<Scalar>> {
    let m = b.first().map(Vec::len).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(field.zero(), |acc, (x, brow)| &acc + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> ScalarField {
        ScalarField::Rationals
    }

    fn ring(vars: &[&str], rels: &[&str]) -> PresentedRing {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let base = PresentedRing::polynomial(q(), names.clone()).unwrap();
        let rels: Vec<Poly> = rels.iter().map(|r| base.parse(r, "t").unwrap()).collect();
        PresentedRing::new(q(), names, &rels).unwrap()
    }

    fn mat(r: &PresentedRing, rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|s| r.parse(s, "m").unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let r = ring(&["x"], &[]);
        let m = mat(&r, &[&["1", "x", "2"], &["0", "x", "1"], &["3", "1", "x"]]);
        // 1(x·x − 1) − x(0 − 3) + 2(0 − 3x) = x² − 1 + 3x − 6x
        assert_eq!(r.render(&determinant(&m, &r)), "x^2 - 3*x - 1");
    }

    #[test]
    fn non_unit_determinant_blocks_inversion() {
        let r = ring(&["x"], &[]);
        let m = mat(&r, &[&["1", "0"], &["0", "x"]]);
        match inverse(&m, &r) {
            Err(Error::NonInvertibleMatrix { witness, reason }) => {
                assert_eq!(witness, "[[1,0],[0,x]]");
                assert!(reason.contains("determinant x"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inverse_in_quotient_ring() {
        // x is a unit in Q[x]/(x^2 - 2), so [[x,1],[0,x]] is invertible.
        let r = ring(&["x"], &["x^2 - 2"]);
        let m = mat(&r, &[&["x", "1"], &["0", "x"]]);
        let inv = inverse(&m, &r).unwrap();
        assert!(m.mul(&inv, &r).is_identity(&r));
        assert!(inv.mul(&m, &r).is_identity(&r));
    }

    #[test]
    fn adjugate_fallback_without_unit_entries() {
        // In k[x]/(x^2 - x) the entries x and x - 1 are zero divisors; the determinant 2x - 1 squares to 1.
        let r = ring(&["x"], &["x^2 - x"]);
        let m = mat(&r, &[&["x", "x - 1"], &["x - 1", "x"]]);
        let d = determinant(&m, &r);
        assert!(r.is_unit(&d).unwrap());
        let inv = inverse(&m, &r).unwrap();
        assert!(m.mul(&inv, &r).is_identity(&r));
    }

    #[test]
    fn solving_linear_systems() {
        let k = PresentedRing::ground(q());
        let m = mat(&k, &[&["1", "0"], &["0", "0"]]);
        let one = Poly::one(q());
        assert_eq!(solve(&m, &[Poly::zero(), one.clone()], &k).unwrap(), Solution::Inconsistent);
        assert_eq!(
            solve(&m, &[one.clone(), Poly::zero()], &k).unwrap(),
            Solution::Solved(vec![one.clone(), Poly::zero()])
        );
        let r = ring(&["x"], &[]);
        let m = mat(&r, &[&["1", "0"], &["0", "x"]]);
        assert_eq!(solve(&m, &[Poly::zero(), one.clone()], &r).unwrap(), Solution::Inconsistent);
        let x = r.var(0);
        assert_eq!(solve(&m, &[Poly::zero(), x], &r).unwrap(), Solution::Undetermined);
    }

    #[test]
    fn cramer_agrees_with_elimination() {
        let r = ring(&["x"], &["x^2 - 2"]);
        let m = mat(&r, &[&["x", "1"], &["1", "0"]]);
        let b = vec![r.parse("x + 1", "b").unwrap(), r.parse("3", "b").unwrap()];
        let c = cramer(&m, &b, &r).unwrap();
        match solve(&m, &b, &r).unwrap() {
            Solution::Solved(x) => assert!(x.iter().zip(&c).all(|(a, b)| r.equal(a, b))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scalar_helpers() {
        let f = ScalarField::prime(5).unwrap();
        let s = |v: i64| f.from_i64(v);
        let a = vec![vec![s(1), s(2)], vec![s(3), s(4)]];
        let inv = inverse_scalar(&a, f).unwrap();
        let id = mat_mul_scalar(&a, &inv, f);
        assert_eq!(id, vec![vec![s(1), s(0)], vec![s(0), s(1)]]);
        assert_eq!(rank(&[vec![s(1), s(2)], vec![s(2), s(4)]]), 1);
        assert!(inverse_scalar(&[vec![s(1), s(2)], vec![s(2), s(4)]], f).is_none());
        assert!(in_span(&[vec![s(1), s(2)]], &[s(3), s(1)], f));
        assert!(!in_span(&[vec![s(1), s(2)]], &[s(1), s(1)], f));
    }
}
