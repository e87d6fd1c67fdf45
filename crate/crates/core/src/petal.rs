//! Petal diagrams of virtual knots.
//!
//! A petal diagram has `m` (odd) straight segments through one central
//! virtual multicrossing, joined by non-nested loops. Segments are numbered
//! `1..=m` both clockwise and in traversal order. Segment `k` lies on the
//! line at angle `(k-1)·π/m` and is traversed in direction
//! `u_k·π/m` with `u_k = (k-1)(m+1) mod 2m`, so consecutive segments point in
//! nearly opposite directions and the exit of segment `k` sits next to the
//! entry of segment `k+1`. Angles grow clockwise on screen (SVG y-down).
//!
//! All sign decisions are exact integer arithmetic on the `u_k`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crossing::MulticrossingSpec;
use crate::gauss::{Passage, Sign, SignedGaussCode, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PetalError {
    #[error("segment {k} out of range for {m} petals")]
    SegmentOutOfRange { k: usize, m: usize },
    #[error("petal count {0} must be odd")]
    EvenPetalCount(usize),
    #[error("a crossing needs two distinct segments, got {0} twice")]
    SameSegment(usize),
    #[error("invalid petal diagram: {}", list(.0))]
    Invalid(Vec<PetalViolation>),
    #[error("classical class {0:?} has more than two segments; the Gauss code depends on along-segment order")]
    Unsupported(Vec<usize>),
    #[error("internal error: {0}")]
    Internal(String),
}

fn list(v: &[PetalViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PetalViolation {
    #[error("petal count {0} is even")]
    EvenPetalCount(usize),
    #[error("petal count is zero")]
    NoPetals,
    #[error("expected {expected} heights, got {got}")]
    HeightsLength { expected: usize, got: usize },
    #[error("heights are not a permutation of 1..m")]
    NotPermutation,
    #[error("pair ({0},{1}) out of range")]
    PairOutOfRange(usize, usize),
    #[error("pair ({0},{0}) joins a segment to itself")]
    SelfPair(usize),
    #[error("pair ({0},{1}) listed twice")]
    DuplicatePair(usize, usize),
    #[error("forbidden triples {0:?}")]
    ForbiddenTriples(Vec<[usize; 3]>),
}

/// Direction index `u_k = (k-1)(m+1) mod 2m`, standing for angle `u_k·π/m`.
pub fn direction_index(k: usize, m: usize) -> Result<usize, PetalError> {
    if m.is_multiple_of(2) {
        return Err(PetalError::EvenPetalCount(m));
    }
    if k == 0 || k > m {
        return Err(PetalError::SegmentOutOfRange { k, m });
    }
    Ok((k - 1) * (m + 1) % (2 * m))
}

/// `+` iff the frame (over direction, under direction) is positively
/// oriented, i.e. `t = u_under - u_over (mod 2m)` lies in `(0, m)`.
pub fn crossing_sign(over: usize, under: usize, m: usize) -> Result<Sign, PetalError> {
    if over == under {
        return Err(PetalError::SameSegment(over));
    }
    let uo = direction_index(over, m)?;
    let uu = direction_index(under, m)?;
    let t = (uu + 2 * m - uo) % (2 * m);
    if t.is_multiple_of(m) {
        return Err(PetalError::Internal(format!(
            "segments {over} and {under} are parallel"
        )));
    }
    Ok(if t < m { Sign::Plus } else { Sign::Minus })
}

/// Smallest petal count the construction reaches for `n` classical
/// crossings: `3n`, or `3n + 1` when `n` is even.
pub fn petal_bound(n: usize) -> usize {
    if n % 2 == 1 {
        3 * n
    } else {
        3 * n + 1
    }
}

/// Segments assigned to each code token: one for a first occurrence, two
/// consecutive ones for a second occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentTable {
    pub assignments: Vec<Vec<usize>>,
    pub petals: usize,
    /// All-virtual padding segment appended when the crossing count is even.
    pub dummy: Option<usize>,
}

pub fn segment_table(code: &SignedGaussCode) -> SegmentTable {
    let mut seen = BTreeSet::new();
    let mut next = 1;
    let mut assignments = Vec::with_capacity(code.tokens().len());
    for t in code.tokens() {
        if seen.insert(t.label) {
            assignments.push(vec![next]);
            next += 1;
        } else {
            assignments.push(vec![next, next + 1]);
            next += 2;
        }
    }
    let used = next - 1;
    let (petals, dummy) = if code.crossing_count() % 2 == 1 {
        (used, None)
    } else {
        (used + 1, Some(used + 1))
    };
    SegmentTable {
        assignments,
        petals,
        dummy,
    }
}

/// A petal diagram: petal count, height rank of each segment (1 = top) and
/// the classical segment pairs. Every other pair crosses virtually.
///
/// JSON form: `{"petals": m, "heights": [...], "classical_pairs": [[i,j],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PetalDiagram {
    pub petals: usize,
    pub heights: Vec<usize>,
    pub classical_pairs: Vec<[usize; 2]>,
}

impl PetalDiagram {
    /// Normalises pair order (`i < j`, ascending) and validates.
    pub fn new(
        petals: usize,
        heights: Vec<usize>,
        classical_pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PetalError> {
        let d = Self {
            petals,
            heights,
            classical_pairs: classical_pairs.into_iter().map(|(i, j)| [i, j]).collect(),
        }
        .normalized();
        let v = d.validate();
        if v.is_empty() {
            Ok(d)
        } else {
            Err(PetalError::Invalid(v))
        }
    }

    /// Each pair ascending, pairs sorted.
    pub fn normalized(mut self) -> Self {
        for p in &mut self.classical_pairs {
            p.sort_unstable();
        }
        self.classical_pairs.sort_unstable();
        self
    }

    /// Every violated invariant; empty when the diagram is valid.
    pub fn validate(&self) -> Vec<PetalViolation> {
        let m = self.petals;
        let mut out = Vec::new();
        if m == 0 {
            out.push(PetalViolation::NoPetals);
        } else if m.is_multiple_of(2) {
            out.push(PetalViolation::EvenPetalCount(m));
        }
        if self.heights.len() != m {
            out.push(PetalViolation::HeightsLength {
                expected: m,
                got: self.heights.len(),
            });
        } else {
            let mut seen = vec![false; m + 1];
            if self
                .heights
                .iter()
                .any(|&h| h == 0 || h > m || std::mem::replace(&mut seen[h], true))
            {
                out.push(PetalViolation::NotPermutation);
            }
        }
        let mut pairs = BTreeSet::new();
        for &[a, b] in &self.classical_pairs {
            let (i, j) = (a.min(b), a.max(b));
            if i == j {
                out.push(PetalViolation::SelfPair(i));
            } else if i == 0 || j > m {
                out.push(PetalViolation::PairOutOfRange(i, j));
            } else if !pairs.insert((i, j)) {
                out.push(PetalViolation::DuplicatePair(i, j));
            }
        }
        if out.is_empty() && m >= 2 {
            let spec = MulticrossingSpec::new(self.heights.clone(), pairs)
                .expect("structure checked above");
            if let crate::crossing::Validity::Invalid { offending } = spec.validate() {
                out.push(PetalViolation::ForbiddenTriples(offending));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The central multicrossing; `None` for the one-petal diagram.
    pub fn to_spec(&self) -> Option<MulticrossingSpec> {
        if self.petals < 2 {
            return None;
        }
        MulticrossingSpec::new(
            self.heights.clone(),
            self.classical_pairs.iter().map(|&[i, j]| (i, j)),
        )
        .ok()
    }

    pub fn height_of(&self, segment: usize) -> usize {
        self.heights[segment - 1]
    }
}

/// Compiles a signed Gauss code into a petal diagram with
/// [`petal_bound`]`(n)` petals.
///
/// Each crossing joins the segment of its first occurrence to whichever of
/// the two second-occurrence segments reproduces the crossing sign; the two
/// candidates always have opposite signs. Heights list the classical pairs
/// (over, under) in label order, then the remaining segments ascending.
pub fn petal_from_gauss(code: &SignedGaussCode) -> Result<PetalDiagram, PetalError> {
    let code = code.canonicalize();
    let table = segment_table(&code);
    let m = table.petals;
    let tokens = code.tokens();
    let mut pairs = Vec::with_capacity(code.crossing_count());
    for (first, second) in code.occurrence_pairs() {
        let a = table.assignments[first][0];
        let Token { passage, sign, .. } = tokens[first];
        let matching: Vec<(usize, usize)> = table.assignments[second]
            .iter()
            .map(|&x| match passage {
                Passage::Over => (a, x),
                Passage::Under => (x, a),
            })
            .filter(|&(over, under)| crossing_sign(over, under, m) == Ok(sign))
            .collect();
        match matching.as_slice() {
            [pair] => pairs.push(*pair),
            _ => {
                return Err(PetalError::Internal(format!(
                    "crossing {} has {} sign-matching candidates",
                    tokens[first].label,
                    matching.len()
                )))
            }
        }
    }

    let mut order: Vec<usize> = pairs.iter().flat_map(|&(o, u)| [o, u]).collect();
    let used: BTreeSet<usize> = order.iter().copied().collect();
    order.extend((1..=m).filter(|s| !used.contains(s)));
    let mut heights = vec![0; m];
    for (rank, &s) in order.iter().enumerate() {
        heights[s - 1] = rank + 1;
    }
    PetalDiagram::new(m, heights, pairs)
}

/// Reads the signed Gauss code back off a petal diagram by walking the
/// segments in order. Requires every classical class to have at most two
/// segments.
pub fn gauss_from_petal(diagram: &PetalDiagram) -> Result<SignedGaussCode, PetalError> {
    let violations = diagram.validate();
    if !violations.is_empty() {
        return Err(PetalError::Invalid(violations));
    }
    let m = diagram.petals;
    if let Some(spec) = diagram.to_spec() {
        let ty = spec
            .to_type()
            .map_err(|e| PetalError::Internal(e.to_string()))?;
        if let Some(big) = ty.parts().iter().find(|p| p.len() > 2) {
            let mut class = big.clone();
            class.sort_unstable();
            return Err(PetalError::Unsupported(class));
        }
    }
    let mut partner = vec![None; m + 1];
    for &[i, j] in &diagram.classical_pairs {
        partner[i] = Some(j);
        partner[j] = Some(i);
    }
    let mut labels: HashMap<(usize, usize), u32> = HashMap::new();
    let mut tokens = Vec::with_capacity(2 * diagram.classical_pairs.len());
    for (s, t) in partner.iter().enumerate() {
        let Some(t) = *t else { continue };
        let next = labels.len() as u32 + 1;
        let label = *labels.entry((s.min(t), s.max(t))).or_insert(next);
        let s_over = diagram.height_of(s) < diagram.height_of(t);
        let (over, under) = if s_over { (s, t) } else { (t, s) };
        let passage = if s_over {
            Passage::Over
        } else {
            Passage::Under
        };
        tokens.push(Token::new(label, passage, crossing_sign(over, under, m)?));
    }
    SignedGaussCode::new(tokens).map_err(|e| PetalError::Internal(e.to_string()))
}

/// Violations of a diagram, empty when valid.
pub fn validate_petal(diagram: &PetalDiagram) -> Vec<PetalViolation> {
    diagram.validate()
}
