//! q-fold cyclic branched covering-link calculus over an unknotted branch
//! locus: lift the annular pattern word, identify the lift components, and
//! compute their pairwise linking and framings.
//!
//! The cover of the solid torus unwraps the angular direction, so the lifted
//! diagram is the annular word concatenated q times and closed up. Framings
//! are computed two independent ways: from the linking row sums (the
//! null-homologous framing identity) and from the diagram rule
//! `fr_i = selfwrithe(lift_i) - writhe(pattern)`; any disagreement is a
//! fatal internal error.

use thiserror::Error;

use crate::diagram::{AnnularMorseWord, BraidLetter, BraidWord, DiagramError, LinkPresentation, Sign};
use crate::exact::{Int, IntMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoveringError {
    #[error("cover degree {q} does not divide the winding number {w}")]
    WindingNotDivisible { q: u32, w: i64 },
    #[error("cover degree must be at least 1")]
    DegreeZero,
    #[error("lifted diagram has {got} components, expected {expected} (internal consistency)")]
    ComponentCount { got: usize, expected: usize },
    #[error(
        "framing cross-check failed for component {component}: framing identity gives {lemma}, \
         diagram rule gives {diagram} (internal consistency)"
    )]
    FramingMismatch {
        component: usize,
        lemma: Int,
        diagram: Int,
    },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// The q lift components of the pattern curve in the branched cover, with
/// their pairwise linking matrix and framing vector, ordered by the deck
/// transformation starting from the lift through the first cut strand.
/// The ambient manifold is the 3-sphere throughout this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedLink {
    q: u32,
    lk: IntMatrix,
    fr: Vec<Int>,
}

impl LiftedLink {
    pub fn degree(&self) -> u32 {
        self.q
    }

    pub fn component_count(&self) -> usize {
        self.q as usize
    }

    /// Pairwise linking matrix in deck order; diagonal entries are zero.
    pub fn linking_matrix(&self) -> &IntMatrix {
        &self.lk
    }

    /// Framing of each lift of the 0-framed longitude.
    pub fn framings(&self) -> &[Int] {
        &self.fr
    }
}

/// The framing identity for null-homologous lifts: each framing equals minus
/// the off-diagonal row sum of the linking matrix.
pub fn framing_lemma_check(link: &LiftedLink) -> bool {
    let n = link.component_count();
    (0..n).all(|i| {
        let row_sum: Int = (0..n)
            .filter(|&j| j != i)
            .map(|j| link.lk.get(i, j).clone())
            .sum();
        link.fr[i] == -row_sum
    })
}

/// Lifts the pattern curve to the q-fold cyclic branched cover over the
/// unknotted axis. Requires q to divide the winding number (zero winding is
/// divisible by every q).
pub fn lift(pattern: &AnnularMorseWord, q: u32) -> Result<LiftedLink, CoveringError> {
    if q == 0 {
        return Err(CoveringError::DegreeZero);
    }
    let w = pattern.winding();
    if q > 1 && w.rem_euclid(q as i64) != 0 {
        return Err(CoveringError::WindingNotDivisible { q, w });
    }

    let base = pattern.diagram();
    let lifted = base.repeat(q as usize);
    let n = q as usize;
    // Record the component owning cut position 1 at every copy boundary;
    // the deck transformation shifts copies, so these are the lifts in deck
    // order.
    let marks: Vec<usize> = (0..n).map(|i| i * base.slices.len()).collect();
    let (closure, copy_heads) = lifted.trace_marked(&marks)?;
    if closure.component_count != n {
        return Err(CoveringError::ComponentCount {
            got: closure.component_count,
            expected: n,
        });
    }

    let perm: Vec<usize> = if base.orients.is_empty() {
        // Ball-contained curve: the copies are disjoint in slice order and
        // already deterministically numbered.
        (0..n).collect()
    } else {
        let mut seen = vec![false; n];
        for &c in &copy_heads {
            if c >= n || seen[c] {
                return Err(CoveringError::ComponentCount {
                    got: copy_heads.iter().filter(|&&x| x < n).count(),
                    expected: n,
                });
            }
            seen[c] = true;
        }
        copy_heads
    };

    let raw = closure.linking_matrix()?;
    let mut lk = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            lk.set(i, j, raw.get(perm[i], perm[j]).clone());
        }
    }

    // Primary framing path: the framing identity for null-homologous lifts.
    let fr: Vec<Int> = (0..n)
        .map(|i| {
            -(0..n)
                .filter(|&j| j != i)
                .map(|j| lk.get(i, j).clone())
                .sum::<Int>()
        })
        .collect();

    // Mandatory diagrammatic cross-check: the lift of the 0-framing differs
    // from the blackboard framing by the base writhe.
    let base_writhe = pattern.writhe();
    for i in 0..n {
        let diagram_fr = Int::from(closure.component_writhes[perm[i]] - base_writhe);
        if diagram_fr != fr[i] {
            return Err(CoveringError::FramingMismatch {
                component: i,
                lemma: fr[i].clone(),
                diagram: diagram_fr,
            });
        }
    }

    Ok(LiftedLink { q, lk, fr })
}

/// The (p, q) torus link as the closure of `(s1 ... s(q-1))^p` on q strands.
pub fn torus_link(p: u32, q: u32) -> LinkPresentation {
    assert!(p >= 1 && q >= 1, "torus link parameters must be positive");
    let mut letters = Vec::with_capacity((p * (q - 1)) as usize);
    for _ in 0..p {
        for i in 1..q {
            letters.push(BraidLetter {
                index: i as usize,
                sign: Sign::Positive,
            });
        }
    }
    let word = BraidWord::new(q as usize, letters).expect("indices in range");
    LinkPresentation::from_braid(&word).expect("torus words trace")
}
