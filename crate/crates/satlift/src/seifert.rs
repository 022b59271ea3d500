//! Seifert matrix, signature, Alexander polynomial, and branched-cover
//! homology order for knots presented as braid closures.
//!
//! The Seifert surface comes from Seifert's algorithm on the closed braid:
//! one disk per strand, one band per letter. The homology basis consists of
//! the loops through consecutive bands in each column (bands ordered by
//! column, then by position in the word), and the matrix convention is
//! `V[i][j] = lk(a_i^+, a_j)`, chosen so the right-handed trefoil has
//! signature -2.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::diagram::{BraidWord, DiagramError, LinkPresentation, Sign};
use crate::exact::{
    cyclotomic_resultant_order, symmetric_signature, ExactError, Int, IntMatrix, IntPoly, Rat,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeifertError {
    #[error("closure has {0} components; Seifert data is computed for knots only")]
    NotAKnot(usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("matrix is not a valid Seifert matrix: det(V - V^T) != 1")]
    NotSeifert,
}

/// Seifert matrix of a knot, `V[i][j] = lk(a_i^+, a_j)` in the band basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertMatrix {
    v: IntMatrix,
}

impl SeifertMatrix {
    /// Wraps a square integer matrix after checking the symplectic pairing
    /// `det(V - V^T) = 1` of a connected Seifert surface.
    pub fn new(v: IntMatrix) -> Result<Self, SeifertError> {
        if !v.is_square() {
            return Err(SeifertError::NotSeifert);
        }
        let skew = v.sub(&v.transpose());
        if skew.determinant() != Int::one() {
            return Err(SeifertError::NotSeifert);
        }
        Ok(SeifertMatrix { v })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.v
    }

    pub fn size(&self) -> usize {
        self.v.rows()
    }
}

/// Seifert matrix of the closure of a braid word via the band basis.
pub fn seifert_matrix(word: &BraidWord) -> Result<SeifertMatrix, SeifertError> {
    let pres = LinkPresentation::from_braid(word)?;
    if pres.component_count() != 1 {
        return Err(SeifertError::NotAKnot(pres.component_count()));
    }

    // Bands of column c, in word order.
    let cols = word.strands() - 1;
    let mut bands: Vec<Vec<(usize, Sign)>> = vec![Vec::new(); cols];
    for (t, l) in word.letters().iter().enumerate() {
        bands[l.index - 1].push((t, l.sign));
    }

    // Generators: loops through consecutive band pairs, column-major.
    struct Gen {
        col: usize,
        first: (usize, Sign),
        second: (usize, Sign),
    }
    let mut gens = Vec::new();
    for (c, col_bands) in bands.iter().enumerate() {
        for w in col_bands.windows(2) {
            gens.push(Gen {
                col: c,
                first: w[0],
                second: w[1],
            });
        }
    }

    let n = gens.len();
    let mut v = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let gi = &gens[i];
            let gj = &gens[j];
            let entry: i64 = if i == j {
                // Self-linking: -1 per positive band, +1 per negative,
                // averaged over the two bands of the loop.
                -(gi.first.1.value() + gi.second.1.value()) / 2
            } else if gi.col == gj.col {
                // Same column: only loops sharing a band interact.
                if gi.second.0 == gj.first.0 {
                    // gi sits directly above gj; the shared band is
                    // gi.second == gj.first.
                    match gi.second.1 {
                        Sign::Positive => 1,
                        Sign::Negative => 0,
                    }
                } else if gj.second.0 == gi.first.0 {
                    match gj.second.1 {
                        Sign::Positive => 0,
                        Sign::Negative => -1,
                    }
                } else {
                    0
                }
            } else if gj.col == gi.col + 1 {
                // Adjacent columns link exactly when the band intervals
                // interleave along the word, and only the left-column loop's
                // row carries the entry: its pushoff crosses over the other
                // loop's arc on the shared disk, while the reverse pushoff's
                // two crossings cancel.
                let (a1, a2) = (gi.first.0, gi.second.0);
                let (b1, b2) = (gj.first.0, gj.second.0);
                if a1 < b1 && b1 < a2 && a2 < b2 {
                    -1
                } else if b1 < a1 && a1 < b2 && b2 < a2 {
                    1
                } else {
                    0
                }
            } else {
                0
            };
            if entry != 0 {
                v.set(i, j, Int::from(entry));
            }
        }
    }

    SeifertMatrix::new(v)
}

/// Knot signature: the signature of the symmetrized Seifert matrix.
pub fn signature(v: &SeifertMatrix) -> i64 {
    symmetric_signature(&v.matrix().add(&v.matrix().transpose()))
        .expect("V + V^T is symmetric by construction")
}

/// Signature straight from a braid word with knot closure.
pub fn signature_of_braid(word: &BraidWord) -> Result<i64, SeifertError> {
    Ok(signature(&seifert_matrix(word)?))
}

/// Alexander polynomial `det(V - t V^T)` with unit powers of t stripped, so
/// the result is palindromic and evaluates to +1 at t = 1. The balanced form
/// divides by `t^(degree/2)`.
pub fn alexander_polynomial(v: &SeifertMatrix) -> IntPoly {
    let n = v.size();
    if n == 0 {
        return IntPoly::one();
    }
    // Interpolate det(V - t V^T) from n+1 integer evaluations.
    let xs: Vec<i64> = (0..=n as i64).collect();
    let mut ys = Vec::with_capacity(xs.len());
    let vt = v.matrix().transpose();
    for &x in &xs {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v.matrix().get(i, j) - vt.get(i, j) * Int::from(x));
            }
        }
        ys.push(m.determinant());
    }
    let p = interpolate_integer_poly(&xs, &ys);
    let coeffs = p.coeffs();
    let val = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    IntPoly::new(coeffs[val..].to_vec())
}

fn interpolate_integer_poly(xs: &[i64], ys: &[Int]) -> IntPoly {
    // Lagrange interpolation over the rationals; the result is integral.
    let n = xs.len();
    let mut acc = vec![Rat::zero(); n];
    for i in 0..n {
        // Basis polynomial for node i, times y_i.
        let mut num = vec![Rat::one()]; // running product of (t - x_j)
        let mut denom = Rat::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let xj = Rat::from_integer(Int::from(xs[j]));
            let mut next = vec![Rat::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xj;
            }
            num = next;
            denom *= Rat::from_integer(Int::from(xs[i] - xs[j]));
        }
        let yi = Rat::from_integer(ys[i].clone());
        for (k, c) in num.iter().enumerate() {
            acc[k] += c * &yi / &denom;
        }
    }
    IntPoly::new(
        acc.into_iter()
            .map(|c| {
                debug_assert!(c.is_integer(), "interpolation must be integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// True when n is a power of a single prime (n >= 2).
pub fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            return m == 1;
        }
        d += 1;
    }
    true // m itself is prime
}

/// Order of the first homology of the q-fold cyclic branched cover of the
/// braid closure, for prime-power q. Returns 1 for the unknot.
pub fn branched_cover_order(word: &BraidWord, q: u32) -> Result<Int, SeifertError> {
    if !is_prime_power(q as u64) {
        return Err(SeifertError::NotPrimePower(q as u64));
    }
    let v = seifert_matrix(word)?;
    let delta = alexander_polynomial(&v);
    let order = cyclotomic_resultant_order(&delta, q);
    debug_assert!(!order.is_zero(), "prime-power covers have finite homology");
    Ok(order)
}
