//! Combinatorial presentations of knots and patterns: braid words for
//! companion knots and annular Morse words for pattern curves in the solid
//! torus, together with the basic diagram invariants (closure components,
//! linking matrix, writhe, winding number).
//!
//! Conventions: a right-handed braid letter has crossing sign +1 when both
//! strands run forward; with orientations attached the sign of a crossing is
//! the geometric sign times the product of the two strand directions. The
//! positive Hopf link (closure of two positive letters) has linking +1.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Int, IntMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("braid letter index {index} out of range for {strands} strands")]
    LetterOutOfRange { index: usize, strands: usize },
    #[error("slice {slice}: position {pos} out of range ({count} strands present)")]
    PositionOutOfRange { slice: usize, pos: usize, count: usize },
    #[error("slice {slice}: cap joins strands with equal orientation")]
    CapOrientationClash { slice: usize },
    #[error("word is not cyclically consistent: {0}")]
    NotCyclic(String),
    #[error("closure has {0} components; a pattern curve must be a single circle")]
    NotAKnot(usize),
    #[error("closure of the braid has {0} components; expected a knot")]
    MultiComponentClosure(usize),
    #[error("unknown component id {0}")]
    UnknownComponent(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inter-component crossing parity violated (internal invariant)")]
    CrossingParity,
}

/// Geometric handedness of a crossing, before orientations are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Angular direction of a strand through a meridian slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orient {
    Forward,
    Backward,
}

impl Orient {
    pub fn value(self) -> i64 {
        match self {
            Orient::Forward => 1,
            Orient::Backward => -1,
        }
    }

    pub fn flip(self) -> Orient {
        match self {
            Orient::Forward => Orient::Backward,
            Orient::Backward => Orient::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidLetter {
    /// 1-based generator index; the letter crosses strands index, index+1.
    pub index: usize,
    pub sign: Sign,
}

/// A braid word on a fixed number of strands. All strands are oriented
/// forward; the closure is taken in the annular sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self, DiagramError> {
        assert!(strands >= 1, "braid needs at least one strand");
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(DiagramError::LetterOutOfRange {
                    index: l.index,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Builds a word from signed generator indices: `2` means the positive
    /// letter at index 2, `-2` its inverse.
    pub fn from_signed(strands: usize, letters: &[i64]) -> Result<Self, DiagramError> {
        let letters = letters
            .iter()
            .map(|&l| BraidLetter {
                index: l.unsigned_abs() as usize,
                sign: if l > 0 { Sign::Positive } else { Sign::Negative },
            })
            .collect();
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn mirror(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self
                .letters
                .iter()
                .map(|l| BraidLetter {
                    index: l.index,
                    sign: l.sign.flip(),
                })
                .collect(),
        }
    }

    /// Permutation induced on strand positions: `perm[i]` is where the
    /// strand entering at position i exits.
    pub fn permutation(&self) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            pos.swap(l.index - 1, l.index);
        }
        // pos[p] = strand occupying position p at the end; invert.
        let mut perm = vec![0; self.strands];
        for (p, &s) in pos.iter().enumerate() {
            perm[s] = p;
        }
        perm
    }

    pub fn to_diagram(&self) -> AnnularDiagram {
        AnnularDiagram {
            orients: vec![Orient::Forward; self.strands],
            slices: self
                .letters
                .iter()
                .map(|l| AnnularSlice::Crossing {
                    pos: l.index,
                    sign: l.sign,
                })
                .collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B[{}]:", self.strands)?;
        for l in &self.letters {
            match l.sign {
                Sign::Positive => write!(f, " s{}", l.index)?,
                Sign::Negative => write!(f, " s{}^-1", l.index)?,
            }
        }
        Ok(())
    }
}

/// One event of an annular Morse word. Positions are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnularSlice {
    /// Strands at pos, pos+1 cross with the given geometric sign.
    Crossing { pos: usize, sign: Sign },
    /// Strands at pos, pos+1 merge (a local maximum of the angular
    /// coordinate). They must carry opposite orientations.
    Cap { pos: usize },
    /// Two new strands appear at pos, pos+1; `left` is the orientation of
    /// the left one, the right one runs opposite.
    Cup { pos: usize, left: Orient },
}

/// A cyclic Morse presentation of a link in the solid torus: the strand
/// orientations at the cut meridian plus the slice events once around.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnularDiagram {
    pub orients: Vec<Orient>,
    pub slices: Vec<AnnularSlice>,
}

impl AnnularDiagram {
    /// Algebraic winding number around the solid-torus axis.
    pub fn winding(&self) -> i64 {
        self.orients.iter().map(|o| o.value()).sum()
    }

    pub fn mirror(&self) -> AnnularDiagram {
        AnnularDiagram {
            orients: self.orients.clone(),
            slices: self
                .slices
                .iter()
                .map(|s| match *s {
                    AnnularSlice::Crossing { pos, sign } => AnnularSlice::Crossing {
                        pos,
                        sign: sign.flip(),
                    },
                    other => other,
                })
                .collect(),
        }
    }

    /// Concatenates the word q times around the cycle; this is the diagram
    /// of the preimage in the q-fold cyclic cover of the solid torus.
    pub fn repeat(&self, q: usize) -> AnnularDiagram {
        let mut slices = Vec::with_capacity(self.slices.len() * q);
        for _ in 0..q {
            slices.extend_from_slice(&self.slices);
        }
        AnnularDiagram {
            orients: self.orients.clone(),
            slices,
        }
    }

    /// Traces the closed curves through the diagram, recording component
    /// structure and every crossing. Fails when the word is structurally
    /// inconsistent.
    pub fn trace(&self) -> Result<Closure, DiagramError> {
        Ok(self.trace_marked(&[])?.0)
    }

    /// Like `trace`, but additionally reports the component of the strand at
    /// position 1 just before each marked slice index (used for
    /// deck-transformation bookkeeping in covers).
    pub fn trace_marked(
        &self,
        marks: &[usize],
    ) -> Result<(Closure, Vec<usize>), DiagramError> {
        let k = self.orients.len();
        let mut uf = UnionFind::new(k);
        // state holds (segment id, orientation) per position.
        let mut state: Vec<(usize, Orient)> = (0..k).map(|i| (i, self.orients[i])).collect();
        let mut crossings_raw: Vec<(usize, usize, i64)> = Vec::new();
        let mut marked_segments: Vec<(usize, usize)> = Vec::new(); // (mark order, segment)
        let record_mark = |state: &Vec<(usize, Orient)>,
                           si: usize,
                           marked: &mut Vec<(usize, usize)>| {
            for (order, &m) in marks.iter().enumerate() {
                if m == si {
                    let seg = state.first().map(|&(s, _)| s).unwrap_or(usize::MAX);
                    marked.push((order, seg));
                }
            }
        };
        record_mark(&state, 0, &mut marked_segments);
        for (si, slice) in self.slices.iter().enumerate() {
            match *slice {
                AnnularSlice::Crossing { pos, sign } => {
                    if pos == 0 || pos >= state.len() {
                        return Err(DiagramError::PositionOutOfRange {
                            slice: si,
                            pos,
                            count: state.len(),
                        });
                    }
                    let (a, oa) = state[pos - 1];
                    let (b, ob) = state[pos];
                    crossings_raw.push((a, b, sign.value() * oa.value() * ob.value()));
                    state.swap(pos - 1, pos);
                }
                AnnularSlice::Cap { pos } => {
                    if pos == 0 || pos >= state.len() {
                        return Err(DiagramError::PositionOutOfRange {
                            slice: si,
                            pos,
                            count: state.len(),
                        });
                    }
                    let (a, oa) = state[pos - 1];
                    let (b, ob) = state[pos];
                    if oa == ob {
                        return Err(DiagramError::CapOrientationClash { slice: si });
                    }
                    uf.union(a, b);
                    state.drain(pos - 1..=pos);
                }
                AnnularSlice::Cup { pos, left } => {
                    if pos == 0 || pos > state.len() + 1 {
                        return Err(DiagramError::PositionOutOfRange {
                            slice: si,
                            pos,
                            count: state.len(),
                        });
                    }
                    let a = uf.push();
                    let b = uf.push();
                    uf.union(a, b);
                    state.insert(pos - 1, (a, left));
                    state.insert(pos, (b, left.flip()));
                }
            }
            record_mark(&state, si + 1, &mut marked_segments);
        }
        if state.len() != k {
            return Err(DiagramError::NotCyclic(format!(
                "{} strands at the cut, {} after one cycle",
                k,
                state.len()
            )));
        }
        for (i, &(seg, o)) in state.iter().enumerate() {
            if o != self.orients[i] {
                return Err(DiagramError::NotCyclic(format!(
                    "orientation at cut position {} flips around the cycle",
                    i + 1
                )));
            }
            uf.union(seg, i);
        }

        // Deterministic component numbering: classes ordered by smallest
        // segment id, which for cut strands is the smallest cut index.
        let count = uf.len();
        let mut comp_of_root = std::collections::HashMap::new();
        let mut roots = Vec::with_capacity(count);
        for i in 0..count {
            roots.push(uf.find(i));
        }
        let mut next = 0usize;
        for &r in &roots {
            comp_of_root.entry(r).or_insert_with(|| {
                let c = next;
                next += 1;
                c
            });
        }
        let component_count = next;
        let comp = |seg: usize| comp_of_root[&roots[seg]];

        let cut_components: Vec<usize> = (0..k).map(comp).collect();
        let mut component_writhes = vec![0i64; component_count];
        let mut total_writhe = 0i64;
        let mut crossings = Vec::with_capacity(crossings_raw.len());
        for (a, b, sign) in crossings_raw {
            let (ca, cb) = (comp(a), comp(b));
            total_writhe += sign;
            if ca == cb {
                component_writhes[ca] += sign;
            }
            crossings.push(CrossingRecord {
                components: (ca, cb),
                sign,
            });
        }

        let closure = Closure {
            component_count,
            cut_components,
            crossings,
            component_writhes,
            total_writhe,
        };
        marked_segments.sort_by_key(|&(order, _)| order);
        let marked = marked_segments
            .into_iter()
            .map(|(_, seg)| {
                if seg == usize::MAX {
                    usize::MAX
                } else {
                    comp(seg)
                }
            })
            .collect();
        Ok((closure, marked))
    }

    /// Strand orientations just before slice `slice_idx` (0 = the cut).
    pub fn state_before(&self, slice_idx: usize) -> Result<Vec<Orient>, DiagramError> {
        let mut state: Vec<Orient> = self.orients.clone();
        for (si, slice) in self.slices.iter().take(slice_idx).enumerate() {
            match *slice {
                AnnularSlice::Crossing { pos, .. } => {
                    if pos == 0 || pos >= state.len() {
                        return Err(DiagramError::PositionOutOfRange {
                            slice: si,
                            pos,
                            count: state.len(),
                        });
                    }
                    state.swap(pos - 1, pos);
                }
                AnnularSlice::Cap { pos } => {
                    if pos == 0 || pos >= state.len() {
                        return Err(DiagramError::PositionOutOfRange {
                            slice: si,
                            pos,
                            count: state.len(),
                        });
                    }
                    state.drain(pos - 1..=pos);
                }
                AnnularSlice::Cup { pos, left } => {
                    state.insert(pos - 1, left);
                    state.insert(pos, left.flip());
                }
            }
        }
        Ok(state)
    }
}

/// A crossing of the traced diagram, labelled by the components of its two
/// strands and its orientation-corrected sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingRecord {
    pub components: (usize, usize),
    pub sign: i64,
}

/// The result of tracing a diagram: component structure and crossing data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub component_count: usize,
    /// Component index of each cut strand.
    pub cut_components: Vec<usize>,
    pub crossings: Vec<CrossingRecord>,
    /// Signed self-crossing count per component.
    pub component_writhes: Vec<i64>,
    /// Signed crossing count of the whole diagram.
    pub total_writhe: i64,
}

impl Closure {
    /// Pairwise linking numbers: half the signed crossing count between each
    /// pair of components. Diagonal entries are zero.
    pub fn linking_matrix(&self) -> Result<IntMatrix, DiagramError> {
        let n = self.component_count;
        let mut sums = vec![0i64; n * n];
        for c in &self.crossings {
            let (a, b) = c.components;
            if a != b {
                sums[a * n + b] += c.sign;
                sums[b * n + a] += c.sign;
            }
        }
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if sums[i * n + j] % 2 != 0 {
                    return Err(DiagramError::CrossingParity);
                }
                m.set(i, j, Int::from(sums[i * n + j] / 2));
            }
        }
        Ok(m)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        id
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // Keep the smaller id as the root so component numbering follows
        // the smallest strand index.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
    }
}

/// A pattern curve in the solid-torus complement of the unknotted branch
/// locus: a validated annular Morse word whose closure is a single circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnularMorseWord {
    diagram: AnnularDiagram,
}

impl AnnularMorseWord {
    pub fn new(orients: Vec<Orient>, slices: Vec<AnnularSlice>) -> Result<Self, DiagramError> {
        let diagram = AnnularDiagram { orients, slices };
        let closure = diagram.trace()?;
        if closure.component_count != 1 {
            return Err(DiagramError::NotAKnot(closure.component_count));
        }
        Ok(AnnularMorseWord { diagram })
    }

    pub fn diagram(&self) -> &AnnularDiagram {
        &self.diagram
    }

    pub fn winding(&self) -> i64 {
        self.diagram.winding()
    }

    pub fn writhe(&self) -> i64 {
        // Validated single-circle closure: every crossing is a self-crossing.
        self.diagram
            .trace()
            .expect("validated word traces")
            .total_writhe
    }

    pub fn mirror(&self) -> AnnularMorseWord {
        AnnularMorseWord {
            diagram: self.diagram.mirror(),
        }
    }
}

impl fmt::Display for AnnularMorseWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orients: Vec<&str> = self
            .diagram
            .orients
            .iter()
            .map(|o| match o {
                Orient::Forward => "+",
                Orient::Backward => "-",
            })
            .collect();
        write!(f, "A[{}]:", orients.join(","))?;
        for s in &self.diagram.slices {
            match *s {
                AnnularSlice::Crossing { pos, sign } => {
                    let c = if sign == Sign::Positive { '+' } else { '-' };
                    write!(f, " x({pos},{c})")?;
                }
                AnnularSlice::Cap { pos } => write!(f, " cap({pos})")?,
                AnnularSlice::Cup { pos, left } => {
                    let c = if left == Orient::Forward { '+' } else { '-' };
                    write!(f, " cup({pos},{c})")?;
                }
            }
        }
        Ok(())
    }
}

/// Either presentation kind, as accepted by the word grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Word {
    Braid(BraidWord),
    Annular(AnnularMorseWord),
}

impl Word {
    pub fn mirror(&self) -> Word {
        match self {
            Word::Braid(b) => Word::Braid(b.mirror()),
            Word::Annular(a) => Word::Annular(a.mirror()),
        }
    }

    pub fn to_diagram(&self) -> AnnularDiagram {
        match self {
            Word::Braid(b) => b.to_diagram(),
            Word::Annular(a) => a.diagram().clone(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Braid(b) => b.fmt(f),
            Word::Annular(a) => a.fmt(f),
        }
    }
}

/// A closed diagram together with its component partition.
#[derive(Debug, Clone)]
pub struct LinkPresentation {
    diagram: AnnularDiagram,
    closure: Closure,
}

impl LinkPresentation {
    pub fn from_braid(word: &BraidWord) -> Result<Self, DiagramError> {
        LinkPresentation::from_diagram(word.to_diagram())
    }

    pub fn from_diagram(diagram: AnnularDiagram) -> Result<Self, DiagramError> {
        let closure = diagram.trace()?;
        Ok(LinkPresentation { diagram, closure })
    }

    pub fn diagram(&self) -> &AnnularDiagram {
        &self.diagram
    }

    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    pub fn component_count(&self) -> usize {
        self.closure.component_count
    }

    /// Partition of the cut strands into components, each component listed
    /// by its strand indices, numbered by smallest strand index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.closure.component_count];
        for (strand, &c) in self.closure.cut_components.iter().enumerate() {
            parts[c].push(strand);
        }
        parts
    }

    pub fn linking_matrix(&self) -> Result<IntMatrix, DiagramError> {
        self.closure.linking_matrix()
    }

    /// Signed self-crossing count of one component, or of the whole diagram.
    pub fn writhe(&self, component: Option<usize>) -> Result<i64, DiagramError> {
        match component {
            None => Ok(self.closure.total_writhe),
            Some(c) => self
                .closure
                .component_writhes
                .get(c)
                .copied()
                .ok_or(DiagramError::UnknownComponent(c)),
        }
    }
}

// ---------------------------------------------------------------------------
// Reidemeister-style rewrites on annular diagrams
// ---------------------------------------------------------------------------

/// Inserts a cancelling pair of crossings at `slice_idx`, position `pos`.
pub fn r2_insert(
    d: &AnnularDiagram,
    slice_idx: usize,
    pos: usize,
    sign: Sign,
) -> Result<AnnularDiagram, DiagramError> {
    let state = d.state_before(slice_idx)?;
    if pos == 0 || pos >= state.len() {
        return Err(DiagramError::PositionOutOfRange {
            slice: slice_idx,
            pos,
            count: state.len(),
        });
    }
    let mut out = d.clone();
    out.slices.insert(
        slice_idx,
        AnnularSlice::Crossing {
            pos,
            sign: sign.flip(),
        },
    );
    out.slices.insert(slice_idx, AnnularSlice::Crossing { pos, sign });
    Ok(out)
}

/// Inserts a kink on the strand at `pos`; the diagram's writhe changes by
/// exactly `sign`.
pub fn r1_insert(
    d: &AnnularDiagram,
    slice_idx: usize,
    pos: usize,
    sign: Sign,
) -> Result<AnnularDiagram, DiagramError> {
    let state = d.state_before(slice_idx)?;
    if pos == 0 || pos > state.len() {
        return Err(DiagramError::PositionOutOfRange {
            slice: slice_idx,
            pos,
            count: state.len(),
        });
    }
    let os = state[pos - 1];
    let mut out = d.clone();
    out.slices.insert(slice_idx, AnnularSlice::Cap { pos });
    out.slices
        .insert(slice_idx, AnnularSlice::Crossing { pos: pos + 1, sign });
    out.slices.insert(
        slice_idx,
        AnnularSlice::Cup {
            pos,
            left: os.flip(),
        },
    );
    Ok(out)
}

/// Inserts a zigzag (cup immediately cancelled by a cap) on the strand at
/// `pos`; an isotopy, so all closure invariants are unchanged.
pub fn zigzag_insert(
    d: &AnnularDiagram,
    slice_idx: usize,
    pos: usize,
) -> Result<AnnularDiagram, DiagramError> {
    let state = d.state_before(slice_idx)?;
    if pos == 0 || pos > state.len() {
        return Err(DiagramError::PositionOutOfRange {
            slice: slice_idx,
            pos,
            count: state.len(),
        });
    }
    let os = state[pos - 1];
    let mut out = d.clone();
    out.slices.insert(slice_idx, AnnularSlice::Cap { pos: pos + 1 });
    out.slices.insert(slice_idx, AnnularSlice::Cup { pos, left: os });
    Ok(out)
}

/// Swaps the adjacent slices at `i`, `i+1` when they act on disjoint strand
/// ranges, adjusting positions for cap/cup index shifts. Returns `None` when
/// the pair does not commute (or the case is not implemented).
pub fn try_commute(d: &AnnularDiagram, i: usize) -> Option<AnnularDiagram> {
    use AnnularSlice::*;
    if i + 1 >= d.slices.len() {
        return None;
    }
    let (a, b) = (d.slices[i], d.slices[i + 1]);
    let swapped: Option<(AnnularSlice, AnnularSlice)> = match (a, b) {
        (Crossing { pos: p1, sign: s1 }, Crossing { pos: p2, sign: s2 }) => {
            if p1.abs_diff(p2) >= 2 {
                Some((Crossing { pos: p2, sign: s2 }, Crossing { pos: p1, sign: s1 }))
            } else {
                None
            }
        }
        (Crossing { pos: pc, sign }, Cap { pos: pk }) => {
            if pk >= pc + 2 {
                Some((Cap { pos: pk }, Crossing { pos: pc, sign }))
            } else if pc >= pk + 2 {
                Some((Cap { pos: pk }, Crossing { pos: pc - 2, sign }))
            } else {
                None
            }
        }
        (Crossing { pos: pc, sign }, Cup { pos: pk, left }) => {
            if pk >= pc + 2 {
                Some((Cup { pos: pk, left }, Crossing { pos: pc, sign }))
            } else if pk + 1 <= pc {
                Some((Cup { pos: pk, left }, Crossing { pos: pc + 2, sign }))
            } else {
                None
            }
        }
        (Cap { pos: pk }, Crossing { pos: pc, sign }) => {
            if pk >= pc + 2 {
                Some((Crossing { pos: pc, sign }, Cap { pos: pk }))
            } else if pc >= pk {
                Some((Crossing { pos: pc + 2, sign }, Cap { pos: pk }))
            } else {
                None
            }
        }
        (Cup { pos: pk, left }, Crossing { pos: pc, sign }) => {
            if pc >= pk + 2 {
                Some((Crossing { pos: pc - 2, sign }, Cup { pos: pk, left }))
            } else if pc + 1 < pk {
                Some((Crossing { pos: pc, sign }, Cup { pos: pk, left }))
            } else {
                None
            }
        }
        _ => None,
    };
    let (na, nb) = swapped?;
    let mut out = d.clone();
    out.slices[i] = na;
    out.slices[i + 1] = nb;
    // Reject swaps that break the word; callers treat None as "does not
    // apply here".
    if out.trace().is_err() {
        return None;
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Word grammar
// ---------------------------------------------------------------------------

/// Parses the word grammar.
///
/// Braid form: `B[m]: s1 s2^-1 s1^3` (signed powers of generators).
/// Annular form: `A[+,+,-]: x(1,+) cap(2) cup(2,-)` where the header lists
/// the strand orientations at the cut meridian.
pub fn parse_word(input: &str) -> Result<Word, DiagramError> {
    let input = input.trim();
    let (head, body) = input
        .split_once(':')
        .ok_or_else(|| DiagramError::Parse("expected 'B[..]:' or 'A[..]:' header".into()))?;
    let head = head.trim();
    if let Some(m) = head.strip_prefix("B[").and_then(|h| h.strip_suffix(']')) {
        let strands: usize = m
            .trim()
            .parse()
            .map_err(|_| DiagramError::Parse(format!("bad strand count '{m}'")))?;
        if strands == 0 {
            return Err(DiagramError::Parse("strand count must be positive".into()));
        }
        let mut letters = Vec::new();
        for tok in body.split_whitespace() {
            let (gen, pow) = match tok.split_once('^') {
                Some((g, p)) => {
                    let p: i64 = p
                        .parse()
                        .map_err(|_| DiagramError::Parse(format!("bad power in '{tok}'")))?;
                    (g, p)
                }
                None => (tok, 1),
            };
            let idx: usize = gen
                .strip_prefix('s')
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| DiagramError::Parse(format!("bad braid letter '{tok}'")))?;
            if pow == 0 {
                return Err(DiagramError::Parse(format!("zero power in '{tok}'")));
            }
            let sign = if pow > 0 { Sign::Positive } else { Sign::Negative };
            for _ in 0..pow.unsigned_abs() {
                letters.push(BraidLetter { index: idx, sign });
            }
        }
        return BraidWord::new(strands, letters).map(Word::Braid);
    }
    if let Some(o) = head.strip_prefix("A[").and_then(|h| h.strip_suffix(']')) {
        let orients = parse_orient_list(o)?;
        let mut slices = Vec::new();
        for tok in body.split_whitespace() {
            slices.push(parse_slice(tok)?);
        }
        return AnnularMorseWord::new(orients, slices).map(Word::Annular);
    }
    Err(DiagramError::Parse(
        "word must start with 'B[m]:' or 'A[orients]:'".into(),
    ))
}

fn parse_orient_list(s: &str) -> Result<Vec<Orient>, DiagramError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|c| match c.trim() {
            "+" => Ok(Orient::Forward),
            "-" => Ok(Orient::Backward),
            other => Err(DiagramError::Parse(format!("bad orientation '{other}'"))),
        })
        .collect()
}

fn parse_slice(tok: &str) -> Result<AnnularSlice, DiagramError> {
    let bad = || DiagramError::Parse(format!("bad slice token '{tok}'"));
    let (kind, rest) = tok.split_once('(').ok_or_else(bad)?;
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    match kind {
        "x" => {
            let (p, s) = args.split_once(',').ok_or_else(bad)?;
            let pos: usize = p.trim().parse().map_err(|_| bad())?;
            let sign = match s.trim() {
                "+" => Sign::Positive,
                "-" => Sign::Negative,
                _ => return Err(bad()),
            };
            Ok(AnnularSlice::Crossing { pos, sign })
        }
        "cap" => {
            let pos: usize = args.trim().parse().map_err(|_| bad())?;
            Ok(AnnularSlice::Cap { pos })
        }
        "cup" => {
            let (p, s) = args.split_once(',').ok_or_else(bad)?;
            let pos: usize = p.trim().parse().map_err(|_| bad())?;
            let left = match s.trim() {
                "+" => Orient::Forward,
                "-" => Orient::Backward,
                _ => return Err(bad()),
            };
            Ok(AnnularSlice::Cup { pos, left })
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Int;

    fn braid(strands: usize, letters: &[i64]) -> BraidWord {
        BraidWord::from_signed(strands, letters).unwrap()
    }

    #[test]
    fn closure_components_of_braids() {
        let p1 = LinkPresentation::from_braid(&braid(2, &[1])).unwrap();
        assert_eq!(p1.component_count(), 1);
        let p2 = LinkPresentation::from_braid(&braid(2, &[1, 1])).unwrap();
        assert_eq!(p2.component_count(), 2);
        let p3 = LinkPresentation::from_braid(&braid(3, &[1, 2, 1, 2, 1, 2])).unwrap();
        assert_eq!(p3.component_count(), 3);
        assert_eq!(p3.components(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn hopf_link_linking() {
        let p = LinkPresentation::from_braid(&braid(2, &[1, 1])).unwrap();
        let lk = p.linking_matrix().unwrap();
        assert_eq!(lk.get(0, 1), &Int::from(1));
        assert_eq!(lk.get(1, 0), &Int::from(1));
    }

    #[test]
    fn t42_linking() {
        let p = LinkPresentation::from_braid(&braid(2, &[1, 1, 1, 1])).unwrap();
        assert_eq!(p.component_count(), 2);
        assert_eq!(p.linking_matrix().unwrap().get(0, 1), &Int::from(2));
    }

    #[test]
    fn split_identity_word() {
        let p = LinkPresentation::from_braid(&braid(2, &[])).unwrap();
        assert_eq!(p.component_count(), 2);
        assert_eq!(p.linking_matrix().unwrap().get(0, 1), &Int::from(0));
    }

    #[test]
    fn writhe_values() {
        let p = LinkPresentation::from_braid(&braid(2, &[])).unwrap();
        assert_eq!(p.writhe(None).unwrap(), 0);
        let p = LinkPresentation::from_braid(&braid(2, &[1])).unwrap();
        assert_eq!(p.writhe(None).unwrap(), 1);
        let p = LinkPresentation::from_braid(&braid(2, &[-1, -1, -1])).unwrap();
        assert_eq!(p.writhe(None).unwrap(), -3);
        assert!(p.writhe(Some(7)).is_err());
    }

    #[test]
    fn mirror_involution_and_sign_flip() {
        let w = braid(3, &[1, -2, 1]);
        assert_eq!(w.mirror().mirror(), w);
        let p = LinkPresentation::from_braid(&braid(2, &[1, 1])).unwrap();
        let pm = LinkPresentation::from_braid(&braid(2, &[1, 1]).mirror()).unwrap();
        assert_eq!(
            pm.linking_matrix().unwrap(),
            p.linking_matrix().unwrap().neg()
        );
    }

    #[test]
    fn cable_word_is_a_knot_with_winding() {
        // The (2,1)-cable pattern curve: one positive crossing on two
        // forward strands.
        let w = AnnularMorseWord::new(
            vec![Orient::Forward; 2],
            vec![AnnularSlice::Crossing {
                pos: 1,
                sign: Sign::Positive,
            }],
        )
        .unwrap();
        assert_eq!(w.winding(), 2);
        assert_eq!(w.writhe(), 1);
    }

    #[test]
    fn clasp_word_traces_to_one_circle() {
        // Winding-zero clasp: two antiparallel passes locked through each
        // other. One cap, one cup, two crossings.
        let w = AnnularMorseWord::new(
            vec![Orient::Forward, Orient::Backward],
            vec![
                AnnularSlice::Cup {
                    pos: 2,
                    left: Orient::Forward,
                },
                AnnularSlice::Crossing {
                    pos: 3,
                    sign: Sign::Negative,
                },
                AnnularSlice::Crossing {
                    pos: 2,
                    sign: Sign::Positive,
                },
                AnnularSlice::Cap { pos: 1 },
            ],
        )
        .unwrap();
        assert_eq!(w.winding(), 0);
        assert_eq!(w.writhe(), -2);
    }

    #[test]
    fn multi_component_annular_rejected_as_pattern() {
        let err = AnnularMorseWord::new(vec![Orient::Forward; 2], vec![]).unwrap_err();
        assert_eq!(err, DiagramError::NotAKnot(2));
    }

    #[test]
    fn cap_orientation_clash_rejected() {
        let err =
            AnnularMorseWord::new(vec![Orient::Forward; 2], vec![AnnularSlice::Cap { pos: 1 }])
                .unwrap_err();
        assert!(matches!(err, DiagramError::CapOrientationClash { .. }));
    }

    #[test]
    fn acyclic_word_rejected() {
        // A lone cap shrinks the strand count and cannot close up.
        let err = AnnularMorseWord::new(
            vec![Orient::Forward, Orient::Backward, Orient::Forward],
            vec![AnnularSlice::Cap { pos: 1 }],
        )
        .unwrap_err();
        assert!(matches!(err, DiagramError::NotCyclic(_)));
    }

    #[test]
    fn braid_letter_out_of_range() {
        assert!(BraidWord::from_signed(2, &[2]).is_err());
        assert!(BraidWord::from_signed(2, &[1]).is_ok());
    }

    #[test]
    fn grammar_round_trip() {
        let w = parse_word("B[3]: s1 s2^-1 s1^2").unwrap();
        match &w {
            Word::Braid(b) => {
                assert_eq!(b.strands(), 3);
                assert_eq!(b.letters().len(), 4);
            }
            _ => panic!("expected braid"),
        }
        let a = parse_word("A[+,-]: cup(2,+) x(3,-) x(2,+) cap(1)").unwrap();
        match &a {
            Word::Annular(w) => {
                assert_eq!(w.winding(), 0);
                let rendered = w.to_string();
                let reparsed = parse_word(&rendered).unwrap();
                assert_eq!(&reparsed, &a);
            }
            _ => panic!("expected annular"),
        }
        assert!(parse_word("Q: s1").is_err());
        assert!(parse_word("B[2]: s5").is_err());
        assert!(parse_word("A[+]: x(4,+)").is_err());
    }

    #[test]
    fn rewrites_preserve_closure_invariants() {
        let d = AnnularDiagram {
            orients: vec![Orient::Forward, Orient::Backward],
            slices: vec![
                AnnularSlice::Cup {
                    pos: 2,
                    left: Orient::Forward,
                },
                AnnularSlice::Crossing {
                    pos: 3,
                    sign: Sign::Negative,
                },
                AnnularSlice::Crossing {
                    pos: 2,
                    sign: Sign::Positive,
                },
                AnnularSlice::Cap { pos: 1 },
            ],
        };
        let base = d.trace().unwrap();
        let lk = base.linking_matrix().unwrap();

        let r2 = r2_insert(&d, 1, 1, Sign::Positive).unwrap();
        let t = r2.trace().unwrap();
        assert_eq!(t.component_count, base.component_count);
        assert_eq!(t.total_writhe, base.total_writhe);
        assert_eq!(t.linking_matrix().unwrap(), lk);

        let zz = zigzag_insert(&d, 2, 1).unwrap();
        let t = zz.trace().unwrap();
        assert_eq!(t.total_writhe, base.total_writhe);
        assert_eq!(t.linking_matrix().unwrap(), lk);

        let r1 = r1_insert(&d, 0, 2, Sign::Negative).unwrap();
        let t = r1.trace().unwrap();
        assert_eq!(t.component_count, base.component_count);
        assert_eq!(t.total_writhe, base.total_writhe - 1);
        assert_eq!(t.linking_matrix().unwrap(), lk);
    }

    #[test]
    fn commute_distant_crossings() {
        let d = braid(4, &[1, 3]).to_diagram();
        let base = d.trace().unwrap();
        let swapped = try_commute(&d, 0).expect("distant letters commute");
        let t = swapped.trace().unwrap();
        assert_eq!(t.component_count, base.component_count);
        assert_eq!(t.total_writhe, base.total_writhe);
        assert!(try_commute(&braid(3, &[1, 2]).to_diagram(), 0).is_none());
    }

    #[test]
    fn winding_invariant_under_rewrites_and_mirror() {
        let w = AnnularMorseWord::new(
            vec![Orient::Forward; 2],
            vec![AnnularSlice::Crossing {
                pos: 1,
                sign: Sign::Positive,
            }],
        )
        .unwrap();
        assert_eq!(w.mirror().winding(), w.winding());
        let r2 = r2_insert(w.diagram(), 0, 1, Sign::Negative).unwrap();
        assert_eq!(r2.winding(), w.winding());
    }
}
