//! Concrete virtual multicrossings and their crossing types.
//!
//! A [`MulticrossingSpec`] is `n` straight arcs through a common point, read
//! clockwise from position 1, each carrying a height rank (1 = topmost), plus
//! the set of arc pairs that cross classically. Every other pair crosses
//! virtually. The spec is *valid* when "crosses classically or is equal" is
//! transitive, i.e. the classical pairs form disjoint cliques.
//!
//! A [`CrossingType`] forgets the heights of arcs that never meet classically:
//! it is a partition of the positions into parts, each part listed
//! topmost-first (a fragmented permutation).
//!
//! The textual form follows the bracket notation
//! `{1243; (1,2), (1,3), (2,4), (3,4)}`: heights by position, then the
//! **virtual** pairs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossingError {
    #[error("a multicrossing needs at least 2 arcs, got {0}")]
    TooFewArcs(usize),
    #[error("heights {0:?} are not a permutation of 1..n")]
    NotPermutation(Vec<usize>),
    #[error("pair ({0},{1}) is out of range for n = {2}")]
    PairOutOfRange(usize, usize, usize),
    #[error("pair ({0},{0}) joins a position to itself")]
    SelfPair(usize),
    #[error("pair ({0},{1}) listed twice")]
    DuplicatePair(usize, usize),
    #[error("parts do not partition 1..{0}")]
    NotPartition(usize),
    #[error("invalid virtual multicrossing: forbidden triples {0:?}")]
    Invalid(Vec<[usize; 3]>),
    #[error("triple classification needs n = 3, got n = {0}")]
    NotTriple(usize),
    #[error("crossing is not almost virtual")]
    NotAlmostVirtual,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

pub type Result<T, E = CrossingError> = std::result::Result<T, E>;

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn check_permutation(heights: &[usize]) -> Result<()> {
    let n = heights.len();
    let mut seen = vec![false; n + 1];
    for &h in heights {
        if h == 0 || h > n || seen[h] {
            return Err(CrossingError::NotPermutation(heights.to_vec()));
        }
        seen[h] = true;
    }
    Ok(())
}

fn collect_pairs(
    n: usize,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<BTreeSet<(usize, usize)>> {
    let mut set = BTreeSet::new();
    for (i, j) in pairs {
        if i == j {
            return Err(CrossingError::SelfPair(i));
        }
        if i == 0 || j == 0 || i > n || j > n {
            return Err(CrossingError::PairOutOfRange(i, j, n));
        }
        let p = ordered(i, j);
        if !set.insert(p) {
            return Err(CrossingError::DuplicatePair(p.0, p.1));
        }
    }
    Ok(set)
}

/// A concrete virtual n-crossing: heights by angular position and the
/// classical pairs. Structural invariants are enforced on construction;
/// validity is checked separately by [`MulticrossingSpec::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MulticrossingSpec {
    heights: Vec<usize>,
    classical: BTreeSet<(usize, usize)>,
}

impl MulticrossingSpec {
    pub fn new(
        heights: Vec<usize>,
        classical_pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = heights.len();
        if n < 2 {
            return Err(CrossingError::TooFewArcs(n));
        }
        check_permutation(&heights)?;
        let classical = collect_pairs(n, classical_pairs)?;
        Ok(Self { heights, classical })
    }

    /// Builds a spec from its virtual pairs, the form used by the bracket
    /// notation.
    pub fn from_virtual_pairs(
        heights: Vec<usize>,
        virtual_pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = heights.len();
        if n < 2 {
            return Err(CrossingError::TooFewArcs(n));
        }
        check_permutation(&heights)?;
        let virt = collect_pairs(n, virtual_pairs)?;
        let classical = all_pairs(n).filter(|p| !virt.contains(p)).collect();
        Ok(Self { heights, classical })
    }

    pub fn n(&self) -> usize {
        self.heights.len()
    }

    /// Height rank of each position, 1-based positions mapped through index
    /// `position - 1`.
    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn height_of(&self, position: usize) -> usize {
        self.heights[position - 1]
    }

    pub fn classical_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.classical.iter().copied()
    }

    pub fn virtual_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        all_pairs(self.n()).filter(|p| !self.classical.contains(p))
    }

    pub fn is_classical(&self, i: usize, j: usize) -> bool {
        self.classical.contains(&ordered(i, j))
    }

    /// Checks that no three arcs have exactly two classical and one virtual
    /// crossing among them.
    pub fn validate(&self) -> Validity {
        let n = self.n();
        let mut adj = vec![vec![false; n + 1]; n + 1];
        for &(i, j) in &self.classical {
            adj[i][j] = true;
            adj[j][i] = true;
        }
        let mut offending = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let classical = adj[i][j] as u8 + adj[i][k] as u8 + adj[j][k] as u8;
                    if classical == 2 {
                        offending.push([i, j, k]);
                    }
                }
            }
        }
        if offending.is_empty() {
            Validity::Valid
        } else {
            Validity::Invalid { offending }
        }
    }

    /// The crossing type: classical cliques (plus singletons), each ordered
    /// topmost-first.
    pub fn to_type(&self) -> Result<CrossingType> {
        if let Validity::Invalid { offending } = self.validate() {
            return Err(CrossingError::Invalid(offending));
        }
        let n = self.n();
        let mut assigned = vec![false; n + 1];
        let mut parts = Vec::new();
        for i in 1..=n {
            if assigned[i] {
                continue;
            }
            let mut part: Vec<usize> = std::iter::once(i)
                .chain((i + 1..=n).filter(|&j| self.is_classical(i, j)))
                .collect();
            for &p in &part {
                assigned[p] = true;
            }
            part.sort_by_key(|&p| self.height_of(p));
            parts.push(part);
        }
        CrossingType::new(n, parts)
    }
}

impl fmt::Display for MulticrossingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        if self.n() <= 9 {
            for h in &self.heights {
                write!(f, "{h}")?;
            }
        } else {
            let hs: Vec<String> = self.heights.iter().map(|h| h.to_string()).collect();
            f.write_str(&hs.join(","))?;
        }
        f.write_str("; ")?;
        let pairs: Vec<String> = self
            .virtual_pairs()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        f.write_str(&pairs.join(", "))?;
        f.write_str("}")
    }
}

impl FromStr for MulticrossingSpec {
    type Err = CrossingError;

    fn from_str(s: &str) -> Result<Self> {
        parse_crossing_notation(s)
    }
}

/// Parses `{heights; virtual pairs}` notation.
pub fn parse_crossing_notation(text: &str) -> Result<MulticrossingSpec> {
    let mut p = Cursor::new(text);
    p.expect(b'{')?;
    let heights = p.heights()?;
    p.expect(b';')?;
    let mut pairs = Vec::new();
    p.skip_ws();
    if p.peek() != Some(b'}') {
        loop {
            p.expect(b'(')?;
            let i = p.integer()?;
            p.expect(b',')?;
            let j = p.integer()?;
            p.expect(b')')?;
            pairs.push((i, j));
            p.skip_ws();
            match p.peek() {
                Some(b',') => p.bump(),
                Some(b'}') => break,
                _ => return Err(p.error("expected ',' or '}' after pair")),
            }
        }
    }
    p.expect(b'}')?;
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error("trailing input after '}'"));
    }
    MulticrossingSpec::from_virtual_pairs(heights, pairs)
}

pub fn format_crossing_notation(spec: &MulticrossingSpec) -> String {
    spec.to_string()
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> CrossingError {
        CrossingError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, want: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", want as char)))
        }
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.bytes[start..self.pos]
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let run = self.digits();
        if run.is_empty() {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(run)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(CrossingError::Syntax {
                offset: start,
                message: "integer out of range".into(),
            })
    }

    /// Contiguous digits (one height per digit) or comma-separated integers.
    fn heights(&mut self) -> Result<Vec<usize>> {
        self.skip_ws();
        let start = self.pos;
        let first = self.digits();
        if first.is_empty() {
            return Err(self.error("expected heights"));
        }
        self.skip_ws();
        if self.peek() == Some(b',') {
            self.pos = start;
            let mut out = vec![self.integer()?];
            self.skip_ws();
            while self.peek() == Some(b',') {
                self.bump();
                out.push(self.integer()?);
                self.skip_ws();
            }
            return Ok(out);
        }
        let mut out: Vec<usize> = first.iter().map(|b| (b - b'0') as usize).collect();
        loop {
            self.skip_ws();
            let run = self.digits();
            if run.is_empty() {
                break;
            }
            out.extend(run.iter().map(|b| (b - b'0') as usize));
        }
        Ok(out)
    }
}

/// Outcome of the validity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// Every triple with exactly two classical pairs, ascending.
    Invalid {
        offending: Vec<[usize; 3]>,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Unordered position pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

/// A fragmented permutation of positions `1..=n`.
///
/// Parts are stored sorted by their smallest member, so structural equality
/// is equality of the underlying partition with its part orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossingType {
    n: usize,
    parts: Vec<Vec<usize>>,
}

impl CrossingType {
    /// Each part is listed topmost-first.
    pub fn new(n: usize, mut parts: Vec<Vec<usize>>) -> Result<Self> {
        if n < 2 {
            return Err(CrossingError::TooFewArcs(n));
        }
        let mut seen = vec![false; n + 1];
        for part in &parts {
            if part.is_empty() {
                return Err(CrossingError::NotPartition(n));
            }
            for &p in part {
                if p == 0 || p > n || seen[p] {
                    return Err(CrossingError::NotPartition(n));
                }
                seen[p] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(CrossingError::NotPartition(n));
        }
        parts.sort_by_key(|p| *p.iter().min().unwrap());
        Ok(Self { n, parts })
    }

    /// Skips validation; callers guarantee a partition of `1..=n`.
    pub(crate) fn from_parts_unchecked(n: usize, mut parts: Vec<Vec<usize>>) -> Self {
        parts.sort_by_key(|p| *p.iter().min().unwrap());
        Self { n, parts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn classical_pair_count(&self) -> usize {
        self.parts.iter().map(|p| p.len() * (p.len() - 1) / 2).sum()
    }

    /// One [`PairCrossing`] per unordered pair, in lexicographic pair order.
    pub fn resolve(&self) -> Vec<PairCrossing> {
        let mut where_ = vec![(0usize, 0usize); self.n + 1];
        for (pi, part) in self.parts.iter().enumerate() {
            for (rank, &p) in part.iter().enumerate() {
                where_[p] = (pi, rank);
            }
        }
        all_pairs(self.n)
            .map(|(i, j)| {
                let (pi, ri) = where_[i];
                let (pj, rj) = where_[j];
                let kind = if pi != pj {
                    PairKind::Virtual
                } else if ri < rj {
                    PairKind::Classical { over: i }
                } else {
                    PairKind::Classical { over: j }
                };
                PairCrossing { i, j, kind }
            })
            .collect()
    }

    pub fn classify_triple(&self) -> Result<TripleType> {
        if self.n != 3 {
            return Err(CrossingError::NotTriple(self.n));
        }
        Ok(match self.parts.len() {
            1 => TripleType::I,
            2 => TripleType::II,
            _ => TripleType::III,
        })
    }

    /// Exactly one constituent 2-crossing is classical.
    pub fn is_almost_virtual(&self) -> bool {
        self.classical_pair_count() == 1
    }

    /// Clockwise distance from the over arc to the under arc of the single
    /// classical pair, in `1..n`; folded to `1..=n/2` under reflection.
    pub fn almost_virtual_distance(&self, up_to_reflection: bool) -> Result<usize> {
        if !self.is_almost_virtual() {
            return Err(CrossingError::NotAlmostVirtual);
        }
        let pair = self.parts.iter().find(|p| p.len() == 2).unwrap();
        let (over, under) = (pair[0], pair[1]);
        let d = (under + self.n - over) % self.n;
        Ok(if up_to_reflection {
            d.min(self.n - d)
        } else {
            d
        })
    }

    fn relabel(&self, f: impl Fn(usize) -> usize) -> Self {
        let parts = self
            .parts
            .iter()
            .map(|p| p.iter().map(|&i| f(i)).collect())
            .collect();
        Self::from_parts_unchecked(self.n, parts)
    }

    /// Relabels `i -> ((i - 1 + r) mod n) + 1`.
    pub fn rotate(&self, r: usize) -> Self {
        let n = self.n;
        let r = r % n;
        self.relabel(|i| (i - 1 + r) % n + 1)
    }

    /// Relabels `i -> n + 1 - i`.
    pub fn reflect(&self) -> Self {
        let n = self.n;
        self.relabel(|i| n + 1 - i)
    }

    /// Parts in stored order, each followed by a `0` separator.
    pub fn encoding(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n + self.parts.len());
        for part in &self.parts {
            out.extend_from_slice(part);
            out.push(0);
        }
        out
    }

    /// Inverse of [`CrossingType::encoding`].
    pub fn from_encoding(n: usize, encoding: &[usize]) -> Result<Self> {
        let parts = encoding
            .split(|&x| x == 0)
            .filter(|p| !p.is_empty())
            .map(|p| p.to_vec())
            .collect();
        Self::new(n, parts)
    }

    /// Lexicographically least encoding over the rotation orbit, or the
    /// dihedral orbit when `include_reflection` is set.
    pub fn canonical(&self, include_reflection: bool) -> Self {
        let mut best = self.clone();
        let mut best_enc = best.encoding();
        let mut consider = |cand: Self| {
            let enc = cand.encoding();
            if enc < best_enc {
                best_enc = enc;
                best = cand;
            }
        };
        for r in 1..self.n {
            consider(self.rotate(r));
        }
        if include_reflection {
            let mirrored = self.reflect();
            for r in 0..self.n {
                consider(mirrored.rotate(r));
            }
        }
        best
    }

    /// A concrete spec realising this type. Heights follow the parts in
    /// stored order, topmost-first.
    pub fn to_spec(&self) -> MulticrossingSpec {
        let mut heights = vec![0; self.n];
        let mut rank = 1;
        for part in &self.parts {
            for &p in part {
                heights[p - 1] = rank;
                rank += 1;
            }
        }
        let classical = self.parts.iter().flat_map(|part| {
            part.iter()
                .enumerate()
                .flat_map(move |(a, &x)| part[a + 1..].iter().map(move |&y| ordered(x, y)))
        });
        MulticrossingSpec::new(heights, classical.collect::<Vec<_>>())
            .expect("a partition always yields a well-formed spec")
    }
}

impl fmt::Display for CrossingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("[{}]", s.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    Virtual,
    Classical { over: usize },
}

/// A constituent 2-crossing of a resolution, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairCrossing {
    pub i: usize,
    pub j: usize,
    pub kind: PairKind,
}

impl fmt::Display for PairCrossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PairKind::Virtual => write!(f, "({},{}) virtual", self.i, self.j),
            PairKind::Classical { over } => {
                let under = if over == self.i { self.j } else { self.i };
                write!(f, "{over} over {under}")
            }
        }
    }
}

/// Triple crossings by the number of classical constituents: I has three,
/// II has one, III has none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TripleType {
    I,
    II,
    III,
}

impl fmt::Display for TripleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TripleType::I => "I",
            TripleType::II => "II",
            TripleType::III => "III",
        })
    }
}
