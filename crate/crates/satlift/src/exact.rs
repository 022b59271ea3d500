//! Exact integer and rational linear algebra plus integer polynomial
//! arithmetic.
//!
//! Everything here is arbitrary precision. Matrices in this problem domain
//! stay small (well under 50x50), so the classical algorithms are used
//! without modular shortcuts.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer used throughout the crate.
pub type Int = BigInt;
/// Arbitrary-precision rational used throughout the crate.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range")]
    IndexOutOfRange,
}

/// Dense rectangular matrix over the integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics if the rows
    /// are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Int::from(x)))
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let mut m = IntMatrix::zero(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Int::from(v));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "incompatible shapes");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a: Vec<Vec<Int>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            let cur = self.get(dst, j) + v;
            self.set(dst, j, cur);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            let cur = self.get(i, dst) + v;
            self.set(i, dst, cur);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal with each invariant factor dividing the next.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Smith normal form over the integers.
///
/// Pivot selection is the smallest nonzero absolute value, ties broken by
/// lowest row index then lowest column index, so the factorization is
/// deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut b = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let rank_bound = rows.min(cols);
    let mut k = 0;
    while k < rank_bound {
        let Some((pr, pc)) = smallest_pivot(&b, k) else {
            break;
        };
        b.swap_rows(k, pr);
        u.swap_rows(k, pr);
        b.swap_cols(k, pc);
        v.swap_cols(k, pc);

        // Clear row and column k. Each pass strictly shrinks the pivot or
        // finishes, so this terminates.
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if b.get(i, k).is_zero() {
                    continue;
                }
                let q = rounded_quotient(b.get(i, k), b.get(k, k));
                let nq = -&q;
                b.add_row_multiple(i, k, &nq);
                u.add_row_multiple(i, k, &nq);
                if !b.get(i, k).is_zero() {
                    // Remainder is smaller than the pivot: promote it.
                    b.swap_rows(i, k);
                    u.swap_rows(i, k);
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if b.get(k, j).is_zero() {
                    continue;
                }
                let q = rounded_quotient(b.get(k, j), b.get(k, k));
                let nq = -&q;
                b.add_col_multiple(j, k, &nq);
                v.add_col_multiple(j, k, &nq);
                if !b.get(k, j).is_zero() {
                    b.swap_cols(j, k);
                    v.swap_cols(j, k);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        k += 1;
    }

    // Enforce the divisibility chain d_i | d_{i+1}.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..rank_bound.saturating_sub(1) {
            let a = b.get(i, i).clone();
            let c = b.get(i + 1, i + 1).clone();
            if c.is_zero() || a.is_zero() {
                if c.is_zero() || !a.is_zero() {
                    continue;
                }
                // a = 0, c != 0: swap them forward.
                b.swap_rows(i, i + 1);
                u.swap_rows(i, i + 1);
                b.swap_cols(i, i + 1);
                v.swap_cols(i, i + 1);
                changed = true;
                continue;
            }
            if (&c % &a).is_zero() {
                continue;
            }
            // Fold the (i+1)-st column into the i-th and re-reduce the 2x2
            // block; the new pivot is gcd(a, c).
            b.add_col_multiple(i, i + 1, &Int::one());
            v.add_col_multiple(i, i + 1, &Int::one());
            let g = a.gcd(&c);
            // Clear within the 2x2 block by the same remainder loop.
            loop {
                let x = b.get(i + 1, i).clone();
                if x.is_zero() {
                    break;
                }
                let q = rounded_quotient(&x, b.get(i, i));
                let nq = -&q;
                b.add_row_multiple(i + 1, i, &nq);
                u.add_row_multiple(i + 1, i, &nq);
                if !b.get(i + 1, i).is_zero() {
                    b.swap_rows(i, i + 1);
                    u.swap_rows(i, i + 1);
                }
            }
            loop {
                let x = b.get(i, i + 1).clone();
                if x.is_zero() {
                    break;
                }
                let q = rounded_quotient(&x, b.get(i, i));
                let nq = -&q;
                b.add_col_multiple(i + 1, i, &nq);
                v.add_col_multiple(i + 1, i, &nq);
                if !b.get(i, i + 1).is_zero() {
                    b.swap_cols(i, i + 1);
                    v.swap_cols(i, i + 1);
                }
            }
            debug_assert_eq!(b.get(i, i).abs(), g.abs());
            changed = true;
        }
    }

    // Sign-normalize the diagonal.
    for i in 0..rank_bound {
        if b.get(i, i).is_negative() {
            b.negate_row(i);
            u.negate_row(i);
        }
    }

    SmithDecomposition { d: b, u, v }
}

fn smallest_pivot(b: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for i in k..b.rows() {
        for j in k..b.cols() {
            let v = b.get(i, j).abs();
            if v.is_zero() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bv, _, _)) => v < *bv,
            };
            if better {
                best = Some((v, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Quotient rounded to the nearest integer, so the remainder has absolute
/// value at most |d|/2. Guarantees progress in the reduction loops.
fn rounded_quotient(n: &Int, d: &Int) -> Int {
    let (mut q, r) = n.div_rem(d);
    let two_r = r.abs() * Int::from(2);
    if two_r > d.abs() {
        if (n.is_negative()) == (d.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Solves `m * y = x` over the integers. Returns `None` when `x` is not in
/// the integral column space of `m`.
pub fn solve_integral(m: &IntMatrix, x: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(m.rows(), x.len(), "incompatible shapes");
    let SmithDecomposition { d, u, v } = smith_normal_form(m);
    let ux = u.mul_vec(x);
    let mut z = vec![Int::zero(); m.cols()];
    for i in 0..m.rows() {
        let di = if i < m.cols() {
            d.get(i, i).clone()
        } else {
            Int::zero()
        };
        if di.is_zero() {
            if !ux[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ux[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    Some(v.mul_vec(&z))
}

/// Signature of a symmetric integer matrix, computed exactly by congruence
/// diagonalization over the rationals.
///
/// Zero diagonals with a surviving off-diagonal entry are handled as
/// hyperbolic 2x2 blocks (contributing 0); the radical contributes 0, the
/// convention for degenerate forms.
pub fn symmetric_signature(s: &IntMatrix) -> Result<i64, ExactError> {
    if !s.is_symmetric() {
        return Err(ExactError::NotSymmetric);
    }
    let n = s.rows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rat::from_integer(s.get(i, j).clone()))
                .collect()
        })
        .collect();

    let mut sig = 0i64;
    let mut k = 0;
    while k < n {
        // Prefer a nonzero diagonal pivot.
        if let Some(p) = (k..n).find(|&i| !a[i][i].is_zero()) {
            sym_swap(&mut a, k, p);
            let pivot = a[k][k].clone();
            sig += if pivot.is_positive() { 1 } else { -1 };
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for j in k..n {
                    let t = &a[k][j] * &f;
                    a[i][j] -= t;
                }
            }
            // Mirror the row operations on columns.
            for i in k + 1..n {
                a[k][i] = Rat::zero();
                a[i][k] = Rat::zero();
            }
            for i in k + 1..n {
                for j in k + 1..i {
                    let v = a[i][j].clone();
                    a[j][i] = v;
                }
            }
            k += 1;
            continue;
        }
        // All active diagonals vanish: look for a hyperbolic pair.
        let mut pair = None;
        'scan: for i in k..n {
            for j in i + 1..n {
                if !a[i][j].is_zero() {
                    pair = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((pi, pj)) = pair else {
            break; // radical only
        };
        sym_swap(&mut a, k, pi);
        let pj = if pj == k { pi } else { pj };
        sym_swap(&mut a, k + 1, pj);
        let bval = a[k][k + 1].clone();
        // The block [[0, b], [b, 0]] has one positive and one negative
        // eigenvalue; clear its interaction with the remaining rows.
        for r in k + 2..n {
            let c1 = &a[r][k + 1] / &bval;
            let c2 = &a[r][k] / &bval;
            for j in 0..n {
                let t1 = &a[k][j] * &c1;
                let t2 = &a[k + 1][j] * &c2;
                a[r][j] -= t1 + t2;
            }
            for i in 0..n {
                let t1 = &a[i][k] * &c1;
                let t2 = &a[i][k + 1] * &c2;
                a[i][r] -= t1 + t2;
            }
        }
        for i in 0..n {
            if i != k && i != k + 1 {
                a[k][i] = Rat::zero();
                a[i][k] = Rat::zero();
                a[k + 1][i] = Rat::zero();
                a[i][k + 1] = Rat::zero();
            }
        }
        k += 2;
    }
    Ok(sig)
}

fn sym_swap(a: &mut [Vec<Rat>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Integer polynomial with ascending coefficients; the zero polynomial has
/// an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Int>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<Int>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![Int::one()],
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 by convention.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Int {
        self.coeffs.get(k).cloned().unwrap_or_else(Int::zero)
    }

    pub fn eval(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Coefficients of `1 + t + ... + t^(q-1)`.
    pub fn cyclotomic_quotient(q: u32) -> IntPoly {
        IntPoly {
            coeffs: vec![Int::one(); q as usize],
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "t")?,
                1 => write!(f, "{a}*t")?,
                _ if a.is_one() => write!(f, "t^{k}")?,
                _ => write!(f, "{a}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Resultant of two integer polynomials via the Sylvester determinant.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Int {
    if f.is_zero() || g.is_zero() {
        return Int::zero();
    }
    let m = f.degree();
    let n = g.degree();
    if m == 0 {
        return f.coeff(0).pow(n as u32);
    }
    if n == 0 {
        return g.coeff(0).pow(m as u32);
    }
    let size = m + n;
    let mut s = IntMatrix::zero(size, size);
    for row in 0..n {
        for (k, c) in f.coeffs().iter().enumerate() {
            s.set(row, row + m - k, c.clone());
        }
    }
    for row in 0..m {
        for (k, c) in g.coeffs().iter().enumerate() {
            s.set(n + row, row + n - k, c.clone());
        }
    }
    s.determinant()
}

/// Order of the first homology of the q-fold cyclic branched cover,
/// computed as `|Res(delta, (t^q - 1)/(t - 1))|`. A return of 0 encodes
/// infinite homology, which cannot occur for prime-power q.
pub fn cyclotomic_resultant_order(delta: &IntPoly, q: u32) -> Int {
    assert!(q >= 1, "cover degree must be positive");
    if q == 1 {
        return Int::one();
    }
    resultant(delta, &IntPoly::cyclotomic_quotient(q)).abs()
}

/// Dense rectangular matrix over the rationals, row-major. Used for cover
/// data where linking numbers may be non-integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_int_matrix(m: &IntMatrix) -> Self {
        let entries = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| Rat::from_integer(m.get(i, j).clone())))
            .collect();
        RatMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    /// Converts to an integer matrix when every entry is integral.
    pub fn to_int_matrix(&self) -> Option<IntMatrix> {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if !e.is_integer() {
                    return None;
                }
                out.set(i, j, e.to_integer());
            }
        }
        Some(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn scale(&self, f: &Rat) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * f).collect(),
        }
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }
}

/// Renders a rational exactly, as `p` or `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl serde::Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = serde::Deserialize::deserialize(d)?;
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                let v: Int = cell
                    .parse()
                    .map_err(|_| serde::de::Error::custom(format!("bad integer '{cell}'")))?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }
}

impl serde::Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| rat_to_string(self.get(i, j))).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for RatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = serde::Deserialize::deserialize(d)?;
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let mut m = RatMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                let v = rat_from_string(cell)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational '{cell}'")))?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }
}

/// Serde adapter rendering a rational as an exact `p/q` string.
pub mod serde_rat {
    use super::{rat_from_string, rat_to_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        rat_from_string(&raw)
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational '{raw}'")))
    }
}

/// Serde adapter for optional rationals as `p/q` strings.
pub mod serde_rat_opt {
    use super::{rat_from_string, rat_to_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&rat_to_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        match raw {
            None => Ok(None),
            Some(raw) => rat_from_string(&raw)
                .map(Some)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational '{raw}'"))),
        }
    }
}

/// Parses the exact rational grammar accepted by `rat_to_string`.
pub fn rat_from_string(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().ok()?;
            let d: Int = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: Int = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}
