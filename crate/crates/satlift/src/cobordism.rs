//! Framed-linking-matrix calculus: admissibility checks, elementary
//! negative-definite twist moves, reduction to the Hopf-plus-unlink target,
//! clasper-equivalence certificates, handle-slide solving, and the
//! bounding-pair surgery matrix.
//!
//! Everything here works at the matrix level. A twist move records a
//! (-1)-framed 2-handle attached along an unknot clasping two components;
//! it lowers their linking by one and raises both framings by one.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{solve_integral, Int, IntMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CobordismError {
    #[error("matrix must be symmetric and integral")]
    NotSymmetric,
    #[error("twist move requires two distinct component indices")]
    DegenerateMove,
    #[error("component index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("matrix is not admissible for reduction: {0}")]
    NotAdmissible(String),
    #[error("distinguished pair ({0}, {1}) must have linking at least 1")]
    PairNotPositive(usize, usize),
    #[error("target needs at least two components, got {0}")]
    TooSmall(usize),
    #[error("matrices have different sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error(
        "linking vector is not in the integral column space; the null-homology hypothesis fails"
    )]
    HypothesisViolation,
    #[error("replayed moves do not reproduce the recorded final matrix (internal consistency)")]
    ReplayMismatch,
}

/// Symmetric integer matrix holding pairwise linking numbers off the
/// diagonal and framings on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedLinkingMatrix {
    m: IntMatrix,
}

impl FramedLinkingMatrix {
    pub fn new(m: IntMatrix) -> Result<Self, CobordismError> {
        if !m.is_symmetric() {
            return Err(CobordismError::NotSymmetric);
        }
        Ok(FramedLinkingMatrix { m })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, CobordismError> {
        FramedLinkingMatrix::new(IntMatrix::from_rows(rows))
    }

    /// Assembles the matrix from a linking matrix (diagonal ignored) and a
    /// framing vector.
    pub fn from_linking_and_framings(
        lk: &IntMatrix,
        fr: &[Int],
    ) -> Result<Self, CobordismError> {
        if !lk.is_symmetric() || lk.rows() != fr.len() {
            return Err(CobordismError::NotSymmetric);
        }
        let mut m = lk.clone();
        for (i, f) in fr.iter().enumerate() {
            m.set(i, i, f.clone());
        }
        FramedLinkingMatrix::new(m)
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn linking(&self, i: usize, j: usize) -> &Int {
        assert_ne!(i, j, "diagonal holds framings, not linking");
        self.m.get(i, j)
    }

    pub fn framing(&self, i: usize) -> &Int {
        self.m.get(i, i)
    }
}

/// One elementary negative-definite twist: a (-1)-framed unknot clasping
/// components i and j once each with opposite signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistMove {
    pub i: usize,
    pub j: usize,
}

impl TwistMove {
    pub fn new(i: usize, j: usize) -> Result<Self, CobordismError> {
        if i == j {
            return Err(CobordismError::DegenerateMove);
        }
        Ok(TwistMove { i, j })
    }
}

/// True when every framing equals minus its off-diagonal row sum. Twist
/// moves preserve this identity regardless of linking signs.
pub fn framing_condition(m: &FramedLinkingMatrix) -> bool {
    let n = m.size();
    (0..n).all(|i| {
        let row_sum: Int = (0..n)
            .filter(|&j| j != i)
            .map(|j| m.matrix().get(i, j).clone())
            .sum();
        m.framing(i) == &-row_sum
    })
}

/// True when the off-diagonal entries are nonnegative, each framing equals
/// minus its off-diagonal row sum, and (when `require_positive`) some
/// linking is at least 1.
pub fn admissible(m: &FramedLinkingMatrix, require_positive: bool) -> bool {
    let n = m.size();
    let mut any_positive = false;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let lk = m.matrix().get(i, j);
            if lk.is_negative() {
                return false;
            }
            if lk >= &Int::one() {
                any_positive = true;
            }
        }
    }
    framing_condition(m) && (!require_positive || any_positive)
}

/// Applies one twist move: linking of the pair drops by one, both framings
/// rise by one, everything else is untouched.
pub fn elementary_twist(
    m: &FramedLinkingMatrix,
    mv: TwistMove,
) -> Result<FramedLinkingMatrix, CobordismError> {
    let n = m.size();
    if mv.i == mv.j {
        return Err(CobordismError::DegenerateMove);
    }
    if mv.i >= n || mv.j >= n {
        return Err(CobordismError::IndexOutOfRange(mv.i.max(mv.j)));
    }
    let mut out = m.m.clone();
    out.set(mv.i, mv.j, m.m.get(mv.i, mv.j) - Int::one());
    out.set(mv.j, mv.i, m.m.get(mv.j, mv.i) - Int::one());
    out.set(mv.i, mv.i, m.m.get(mv.i, mv.i) + Int::one());
    out.set(mv.j, mv.j, m.m.get(mv.j, mv.j) + Int::one());
    Ok(FramedLinkingMatrix { m: out })
}

/// The reduction target: linking 1 between the distinguished pair with
/// framings -1 there, all else zero.
pub fn hq_matrix(n: usize, i0: usize, j0: usize) -> Result<FramedLinkingMatrix, CobordismError> {
    if n < 2 {
        return Err(CobordismError::TooSmall(n));
    }
    if i0 == j0 {
        return Err(CobordismError::DegenerateMove);
    }
    if i0 >= n || j0 >= n {
        return Err(CobordismError::IndexOutOfRange(i0.max(j0)));
    }
    let mut m = IntMatrix::zero(n, n);
    m.set(i0, j0, Int::one());
    m.set(j0, i0, Int::one());
    m.set(i0, i0, Int::from(-1));
    m.set(j0, j0, Int::from(-1));
    Ok(FramedLinkingMatrix { m })
}

/// How the reduction certifies its final matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definiteness {
    NegativeDefinite,
}

/// An ordered sequence of twist moves from an initial framed link to the
/// standard target. Replaying the moves reproduces the final matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordismCertificate {
    pub initial: FramedLinkingMatrix,
    pub moves: Vec<TwistMove>,
    pub final_matrix: FramedLinkingMatrix,
    pub two_handle_count: usize,
    pub definiteness: Definiteness,
}

impl CobordismCertificate {
    /// Re-applies the move list to the initial matrix and checks it lands on
    /// the recorded final matrix.
    pub fn replay(&self) -> Result<FramedLinkingMatrix, CobordismError> {
        let mut m = self.initial.clone();
        for &mv in &self.moves {
            m = elementary_twist(&m, mv)?;
        }
        if m != self.final_matrix {
            return Err(CobordismError::ReplayMismatch);
        }
        Ok(m)
    }
}

/// Reduces an admissible framed link to the Hopf-plus-unlink target by twist
/// moves: every pair is twisted down to zero linking except the
/// distinguished pair, which stops at one. Moves are ordered lexicographically
/// with the distinguished pair last, so certificates are reproducible.
pub fn reduce_to_hopf(
    m: &FramedLinkingMatrix,
    i0: usize,
    j0: usize,
) -> Result<CobordismCertificate, CobordismError> {
    let n = m.size();
    if i0 == j0 {
        return Err(CobordismError::DegenerateMove);
    }
    if i0 >= n || j0 >= n {
        return Err(CobordismError::IndexOutOfRange(i0.max(j0)));
    }
    if !admissible(m, true) {
        return Err(CobordismError::NotAdmissible(
            "need nonnegative linking, a positive entry, and framings equal to minus the \
             linking row sums"
                .into(),
        ));
    }
    let (i0, j0) = if i0 < j0 { (i0, j0) } else { (j0, i0) };
    if m.linking(i0, j0) < &Int::one() {
        return Err(CobordismError::PairNotPositive(i0, j0));
    }

    let mut moves = Vec::new();
    let mut push_moves = |i: usize, j: usize, count: &Int| {
        let mut c = count.clone();
        while c.is_positive() {
            moves.push(TwistMove { i, j });
            c -= 1;
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            if (i, j) == (i0, j0) {
                continue;
            }
            push_moves(i, j, m.linking(i, j));
        }
    }
    push_moves(i0, j0, &(m.linking(i0, j0) - Int::one()));

    let mut current = m.clone();
    for &mv in &moves {
        current = elementary_twist(&current, mv)?;
    }
    let target = hq_matrix(n, i0, j0)?;
    if current != target {
        return Err(CobordismError::ReplayMismatch);
    }

    let two_handle_count = moves.len();
    Ok(CobordismCertificate {
        initial: m.clone(),
        moves,
        final_matrix: current,
        two_handle_count,
        definiteness: Definiteness::NegativeDefinite,
    })
}

/// Verdict of the linking-matrix clasper criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClasperVerdict {
    Equivalent,
    NotEquivalent,
}

/// Existence certificate for a clasper-surgery equivalence between two
/// framed links: equal linking matrices suffice. No move sequence is
/// constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClasperCertificate {
    pub verdict: ClasperVerdict,
    pub left: FramedLinkingMatrix,
    pub right: FramedLinkingMatrix,
}

pub fn clasper_certificate(
    m1: &FramedLinkingMatrix,
    m2: &FramedLinkingMatrix,
) -> Result<ClasperCertificate, CobordismError> {
    if m1.size() != m2.size() {
        return Err(CobordismError::SizeMismatch(m1.size(), m2.size()));
    }
    let verdict = if m1 == m2 {
        ClasperVerdict::Equivalent
    } else {
        ClasperVerdict::NotEquivalent
    };
    Ok(ClasperCertificate {
        verdict,
        left: m1.clone(),
        right: m2.clone(),
    })
}

/// Solves for the handle-slide coefficients that clear a linking vector over
/// a surgery link with matrix `a`: returns y with `a y = x`. Failure means
/// the input violates the null-homology hypothesis.
pub fn handleslide_reduce(a: &IntMatrix, x: &[Int]) -> Result<Vec<Int>, CobordismError> {
    let y = solve_integral(a, x).ok_or(CobordismError::HypothesisViolation)?;
    debug_assert_eq!(a.mul_vec(&y), x, "solution must verify by substitution");
    Ok(y)
}

/// Surgery matrix of a bounding-pair map with linking l between the two
/// curves; always has determinant -1.
pub fn bounding_pair_matrix(l: i64) -> FramedLinkingMatrix {
    FramedLinkingMatrix {
        m: IntMatrix::from_rows(&[vec![-l - 1, l], vec![l, -l + 1]]),
    }
}
