//! Points of the modified boundary `X̃ = (∂T_d \ O) ∪ O_*`, the action of `M`
//! on them, and the projection to the Gray-code line.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::perm::Letter;
use crate::word::{GroupWord, DEFAULT_DEPTH_BOUND};

/// A coordinate position on a ray: `1, 2, ..` then the two letters "at
/// infinity" `ω, ω+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Position {
    Finite(usize),
    Omega,
    OmegaPlusOne,
}

impl Position {
    pub fn next(self) -> Position {
        match self {
            Position::Finite(n) => Position::Finite(n + 1),
            Position::Omega | Position::OmegaPlusOne => Position::OmegaPlusOne,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Position::Finite(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Finite(n) => write!(f, "{n}"),
            Position::Omega => write!(f, "ω"),
            Position::OmegaPlusOne => write!(f, "ω+1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tail {
    /// `period` repeated forever; contains a non-zero letter.
    Periodic(Vec<Letter>),
    /// Zeros forever, then the letters `a b` at positions `ω, ω+1`; `a != 0`.
    ZeroPair(Letter, Letter),
}

/// An eventually periodic point of `X̃`, kept in canonical form: primitive
/// period, then shortest prefix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TildePoint {
    prefix: Vec<Letter>,
    tail: Tail,
}

impl TildePoint {
    pub fn new(d: usize, prefix: Vec<Letter>, tail: Tail) -> Result<Self> {
        let check = |x: &Letter| {
            if (*x as usize) < d {
                Ok(())
            } else {
                Err(Error::Input(format!("letter {x} out of range for d={d}")))
            }
        };
        prefix.iter().try_for_each(check)?;
        match &tail {
            Tail::Periodic(p) => {
                p.iter().try_for_each(check)?;
                if p.iter().all(|&x| x == 0) {
                    return Err(Error::Input(
                        "a zero period lies in the singular orbit; use a letter pair at infinity".into(),
                    ));
                }
            }
            Tail::ZeroPair(a, b) => {
                check(a)?;
                check(b)?;
                if *a == 0 {
                    return Err(Error::Input("the first letter at infinity must be non-zero".into()));
                }
            }
        }
        Ok(Self::canonical(prefix, tail))
    }

    pub(crate) fn canonical(mut prefix: Vec<Letter>, tail: Tail) -> Self {
        let tail = match tail {
            Tail::Periodic(p) => {
                let mut period = primitive(p);
                while let (Some(&last), Some(&plast)) = (prefix.last(), period.last()) {
                    if last != plast {
                        break;
                    }
                    prefix.pop();
                    period.rotate_right(1);
                }
                Tail::Periodic(period)
            }
            Tail::ZeroPair(a, b) => {
                while prefix.last() == Some(&0) {
                    prefix.pop();
                }
                Tail::ZeroPair(a, b)
            }
        };
        TildePoint { prefix, tail }
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_zero_pair(&self) -> bool {
        matches!(self.tail, Tail::ZeroPair(..))
    }

    /// Letter at the finite 1-based position `pos`.
    pub fn letter(&self, pos: usize) -> Letter {
        let i = pos - 1;
        if i < self.prefix.len() {
            return self.prefix[i];
        }
        match &self.tail {
            Tail::Periodic(p) => p[(i - self.prefix.len()) % p.len()],
            Tail::ZeroPair(..) => 0,
        }
    }

    pub fn letter_at(&self, pos: Position) -> Letter {
        match (pos, &self.tail) {
            (Position::Finite(n), _) => self.letter(n),
            (Position::Omega, Tail::ZeroPair(a, _)) => *a,
            (Position::OmegaPlusOne, Tail::ZeroPair(_, b)) => *b,
            _ => 0,
        }
    }

    /// First position after `after` (exclusive, finite) holding a non-zero
    /// letter.
    pub fn first_nonzero_after(&self, after: usize) -> Position {
        for pos in after + 1..=self.prefix.len() {
            if self.prefix[pos - 1] != 0 {
                return Position::Finite(pos);
            }
        }
        let start = after.max(self.prefix.len());
        match &self.tail {
            Tail::ZeroPair(..) => Position::Omega,
            Tail::Periodic(p) => {
                let offset = (start - self.prefix.len()) % p.len();
                let k = (0..p.len()).find(|k| p[(offset + k) % p.len()] != 0).expect("period has a non-zero letter");
                Position::Finite(start + k + 1)
            }
        }
    }

    pub fn first_nonzero(&self) -> Position {
        self.first_nonzero_after(0)
    }

    /// The `B`-visible pair: first non-zero letter and the one after it.
    pub fn visible_pair(&self) -> (Letter, Letter) {
        let j = self.first_nonzero();
        (self.letter_at(j), self.letter_at(j.next()))
    }

    /// Loop-label class `(first letter, visible pair)`; it determines which
    /// elements of `S` fix the point.
    pub fn class_key(&self) -> (Letter, Letter, Letter) {
        let (a, b) = self.visible_pair();
        (self.letter(1), a, b)
    }

    /// Expands the prefix to at least `len` letters.
    fn materialized(&self, len: usize) -> (Vec<Letter>, Tail) {
        let mut prefix = self.prefix.clone();
        let mut tail = self.tail.clone();
        while prefix.len() < len {
            match &mut tail {
                Tail::Periodic(p) => {
                    prefix.push(p[0]);
                    p.rotate_left(1);
                }
                Tail::ZeroPair(..) => prefix.push(0),
            }
        }
        (prefix, tail)
    }

    /// Returns a copy with the given coordinates overwritten.
    pub fn with_letters(&self, changes: &[(Position, Letter)]) -> TildePoint {
        let max_finite = changes.iter().filter_map(|(p, _)| p.finite()).max().unwrap_or(0);
        let (mut prefix, mut tail) = self.materialized(max_finite);
        for &(pos, x) in changes {
            match (pos, &mut tail) {
                (Position::Finite(n), _) => prefix[n - 1] = x,
                (Position::Omega, Tail::ZeroPair(a, _)) => *a = x,
                (Position::OmegaPlusOne, Tail::ZeroPair(_, b)) => *b = x,
                _ => panic!("no letters at infinity on a periodic point"),
            }
        }
        TildePoint::canonical(prefix, tail)
    }

    /// The action `g(ρab) = g(ρ) g|_ρ(ab)` extended by the tree action.
    pub fn act(&self, g: &GroupWord) -> TildePoint {
        let mut state = g.normalized();
        let mut prefix = self.prefix.clone();
        let mut tail = self.tail.clone();
        let mut i = 0;
        loop {
            if state.is_empty() {
                break;
            }
            if i >= prefix.len() {
                match &mut tail {
                    Tail::ZeroPair(a, b) => {
                        if let Some(el) = state.as_b() {
                            let (x, y) = el.act_pair(*a, *b);
                            *a = x;
                            *b = y;
                            break;
                        }
                        prefix.push(0);
                    }
                    Tail::Periodic(p) => {
                        prefix.push(p[0]);
                        p.rotate_left(1);
                    }
                }
            }
            let (y, s) = state.split(prefix[i]);
            prefix[i] = y;
            state = s;
            i += 1;
        }
        TildePoint::canonical(prefix, tail)
    }

    /// The first `n` letters.
    pub fn truncate(&self, n: usize) -> Vec<Letter> {
        (1..=n).map(|p| self.letter(p)).collect()
    }

    /// The point with its first `n` letters removed.
    pub fn shift(&self, n: usize) -> TildePoint {
        let (prefix, tail) = self.materialized(n);
        TildePoint::canonical(prefix[n..].to_vec(), tail)
    }

    pub fn gray(&self) -> GrayWord {
        let prefix = self.prefix.iter().map(|&x| x != 0).collect();
        let tail = match &self.tail {
            Tail::Periodic(p) => GrayTail::Periodic(p.iter().map(|&x| x != 0).collect()),
            Tail::ZeroPair(_, b) => GrayTail::AtInfinity { second: *b != 0 },
        };
        GrayWord::canonical(prefix, tail)
    }

    /// Parses `prefix|(period)` or `prefix|0*[ab]`, letters as digits.
    pub fn parse(d: usize, s: &str) -> Result<TildePoint> {
        let err = || Error::Parse(format!("malformed point `{s}`"));
        let (pre, rest) = s.trim().split_once('|').ok_or_else(err)?;
        let digits = |t: &str| -> Result<Vec<Letter>> {
            t.chars()
                .map(|c| c.to_digit(10).map(|x| x as Letter).ok_or_else(err))
                .collect()
        };
        let prefix = digits(pre)?;
        let tail = if let Some(body) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Tail::Periodic(digits(body)?)
        } else if let Some(body) = rest.strip_prefix("0*[").and_then(|r| r.strip_suffix(']')) {
            let pair = digits(body)?;
            if pair.len() != 2 {
                return Err(err());
            }
            Tail::ZeroPair(pair[0], pair[1])
        } else {
            return Err(err());
        };
        TildePoint::new(d, prefix, tail)
    }
}

fn primitive<T: PartialEq + Clone>(p: Vec<T>) -> Vec<T> {
    let n = p.len();
    for k in 1..=n {
        if n.is_multiple_of(k) && (0..n).all(|i| p[i] == p[i % k]) {
            return p[..k].to_vec();
        }
    }
    p
}

impl fmt::Display for TildePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.prefix {
            write!(f, "{x}")?;
        }
        match &self.tail {
            Tail::Periodic(p) => {
                write!(f, "|(")?;
                for x in p {
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Tail::ZeroPair(a, b) => write!(f, "|0*[{a}{b}]"),
        }
    }
}

impl fmt::Debug for TildePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Draws a corpus point: a periodic tail of period length `<= 3` after a
/// prefix of length `<= 6`, or (with probability `zero_pair_rate`) a zero tail
/// with a letter pair at infinity.
pub fn random_point<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, zero_pair_rate: f64) -> TildePoint {
    let len = rng.gen_range(0..=6);
    let prefix: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..d) as Letter).collect();
    let tail = if rng.gen_bool(zero_pair_rate) {
        Tail::ZeroPair(rng.gen_range(1..d) as Letter, rng.gen_range(0..d) as Letter)
    } else {
        let plen = rng.gen_range(1..=3);
        let mut period: Vec<Letter> = (0..plen).map(|_| rng.gen_range(0..d) as Letter).collect();
        let k = rng.gen_range(0..plen);
        if period[k] == 0 {
            period[k] = rng.gen_range(1..d) as Letter;
        }
        Tail::Periodic(period)
    };
    TildePoint::canonical(prefix, tail)
}

/// Deterministic corpus of `count` points.
pub fn sample_corpus(d: usize, count: usize, seed: u64) -> Vec<TildePoint> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_point(&mut rng, d, 0.2)).collect()
}

/// Eventual section of `g` along `prefix·0^∞`: an element of `B ∪ {e}`.
pub fn section_at_zero_ray(g: &GroupWord, prefix: &[Letter]) -> Result<Generator> {
    let mut state = g.section(prefix);
    for _ in 0..DEFAULT_DEPTH_BOUND {
        match state.as_nucleus() {
            Some(Generator::Identity) => return Ok(Generator::Identity),
            Some(b @ Generator::B { .. }) => return Ok(b),
            _ => state = state.split(0).1,
        }
    }
    Err(Error::Diagnostic(format!("section of {g} along {prefix:?}0^∞ did not stabilize")))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GrayTail {
    Periodic(Vec<bool>),
    /// Zero tail; `∗` at `ω`, and `second` tells whether `ω+1` is `∗`.
    AtInfinity { second: bool },
}

/// A sequence over `{0, ∗}` (`∗` is `true`): the projection of a point of `X̃`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GrayWord {
    prefix: Vec<bool>,
    tail: GrayTail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeType {
    A,
    B,
}

impl GrayWord {
    pub(crate) fn canonical(mut prefix: Vec<bool>, tail: GrayTail) -> Self {
        let tail = match tail {
            GrayTail::Periodic(p) => {
                let mut period = primitive(p);
                while let (Some(&last), Some(&plast)) = (prefix.last(), period.last()) {
                    if last != plast {
                        break;
                    }
                    prefix.pop();
                    period.rotate_right(1);
                }
                GrayTail::Periodic(period)
            }
            t @ GrayTail::AtInfinity { .. } => {
                while prefix.last() == Some(&false) {
                    prefix.pop();
                }
                t
            }
        };
        GrayWord { prefix, tail }
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn tail(&self) -> &GrayTail {
        &self.tail
    }

    pub fn bit(&self, pos: Position) -> bool {
        match (pos, &self.tail) {
            (Position::Finite(n), _) if n <= self.prefix.len() => self.prefix[n - 1],
            (Position::Finite(n), GrayTail::Periodic(p)) => p[(n - 1 - self.prefix.len()) % p.len()],
            (Position::Finite(_), GrayTail::AtInfinity { .. }) => false,
            (Position::Omega, GrayTail::AtInfinity { .. }) => true,
            (Position::OmegaPlusOne, GrayTail::AtInfinity { second }) => *second,
            _ => false,
        }
    }

    pub fn first_star(&self) -> Position {
        if let Some(i) = self.prefix.iter().position(|&b| b) {
            return Position::Finite(i + 1);
        }
        match &self.tail {
            GrayTail::Periodic(p) => Position::Finite(self.prefix.len() + p.iter().position(|&b| b).expect("period has ∗") + 1),
            GrayTail::AtInfinity { .. } => Position::Omega,
        }
    }

    fn flipped(&self, pos: Position) -> GrayWord {
        let mut prefix = self.prefix.clone();
        let mut tail = self.tail.clone();
        match pos {
            Position::Finite(n) => {
                while prefix.len() < n {
                    match &mut tail {
                        GrayTail::Periodic(p) => {
                            prefix.push(p[0]);
                            p.rotate_left(1);
                        }
                        GrayTail::AtInfinity { .. } => prefix.push(false),
                    }
                }
                prefix[n - 1] = !prefix[n - 1];
            }
            Position::OmegaPlusOne => match &mut tail {
                GrayTail::AtInfinity { second } => *second = !*second,
                _ => unreachable!("ω+1 only exists for zero tails"),
            },
            Position::Omega => unreachable!("the bit at ω is always ∗"),
        }
        GrayWord::canonical(prefix, tail)
    }

    pub fn neighbor(&self, t: EdgeType) -> GrayWord {
        match t {
            EdgeType::A => self.flipped(Position::Finite(1)),
            EdgeType::B => self.flipped(self.first_star().next()),
        }
    }

    /// `(type-A neighbour, type-B neighbour)`.
    pub fn neighbors(&self) -> (GrayWord, GrayWord) {
        (self.neighbor(EdgeType::A), self.neighbor(EdgeType::B))
    }

    /// `A`-visible position (always 1) and the two `B`-visible positions.
    pub fn visible_positions(&self) -> (Position, (Position, Position)) {
        let j = self.first_star();
        (Position::Finite(1), (j, j.next()))
    }

    pub fn parse(s: &str) -> Result<GrayWord> {
        let err = || Error::Parse(format!("malformed gray word `{s}`"));
        let bits = |t: &str| -> Result<Vec<bool>> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '*' | '∗' => Ok(true),
                    _ => Err(err()),
                })
                .collect()
        };
        let (pre, rest) = s.trim().split_once('|').ok_or_else(err)?;
        let prefix = bits(pre)?;
        let tail = if let Some(body) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let p = bits(body)?;
            if !p.iter().any(|&b| b) {
                return Err(err());
            }
            GrayTail::Periodic(p)
        } else if let Some(body) = rest.strip_prefix("0[").and_then(|r| r.strip_suffix(']')) {
            match bits(body)?.as_slice() {
                [true, second] => GrayTail::AtInfinity { second: *second },
                _ => return Err(err()),
            }
        } else {
            return Err(err());
        };
        Ok(GrayWord::canonical(prefix, tail))
    }
}

/// Prints `0*0*|(*0)` or, for zero tails, `00|0[**]`.
impl fmt::Display for GrayWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |b: &bool| if *b { '*' } else { '0' };
        let pre: String = self.prefix.iter().map(c).collect();
        match &self.tail {
            GrayTail::Periodic(p) => write!(f, "{pre}|({})", p.iter().map(c).collect::<String>()),
            GrayTail::AtInfinity { second } => write!(f, "{pre}|0[*{}]", c(second)),
        }
    }
}

impl fmt::Debug for GrayWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Consecutive points `γ̄_{-left}, .., γ̄_{right}` of a Gray-code line.
///
/// Orientation: at the centre the `A`-neighbour sits at index `-1` and the
/// `B`-neighbour at `+1`; steps alternate from there.
#[derive(Clone, Debug)]
pub struct GraySegment {
    words: Vec<GrayWord>,
    /// Position of the centre (index 0) inside `words`.
    origin: usize,
    index: HashMap<GrayWord, usize>,
}

/// Type of the line edge between line indices `i` and `i + 1`.
pub fn edge_type_between(i: i64) -> EdgeType {
    if i.rem_euclid(2) == 0 {
        EdgeType::B
    } else {
        EdgeType::A
    }
}

impl GraySegment {
    /// The window `[-left, right]` around `center`.
    pub fn window(center: &GrayWord, left: usize, right: usize) -> GraySegment {
        let mut lefts = Vec::with_capacity(left);
        let mut cur = center.clone();
        for i in 0..left as i64 {
            cur = cur.neighbor(edge_type_between(-i - 1));
            lefts.push(cur.clone());
        }
        let mut words: Vec<GrayWord> = lefts.into_iter().rev().collect();
        words.push(center.clone());
        let mut cur = center.clone();
        for i in 0..right as i64 {
            cur = cur.neighbor(edge_type_between(i));
            words.push(cur.clone());
        }
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        GraySegment { words, origin: left, index }
    }

    /// The `2n+1` points centred at `center`.
    pub fn centered(center: &GrayWord, n: usize) -> GraySegment {
        Self::window(center, n, n)
    }

    pub fn words(&self) -> &[GrayWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn left(&self) -> usize {
        self.origin
    }

    pub fn right(&self) -> usize {
        self.words.len() - 1 - self.origin
    }

    /// Line index (relative to the centre) of a word in the segment.
    pub fn line_index(&self, w: &GrayWord) -> Option<i64> {
        self.index.get(w).map(|&i| i as i64 - self.origin as i64)
    }

    pub fn at(&self, line_index: i64) -> Option<&GrayWord> {
        let i = line_index + self.origin as i64;
        (0..self.words.len() as i64).contains(&i).then(|| &self.words[i as usize])
    }

    /// Types of the edges between consecutive entries.
    pub fn edge_types(&self) -> Vec<EdgeType> {
        (-(self.origin as i64)..self.right() as i64).map(edge_type_between).collect()
    }

    pub fn is_simple(&self) -> bool {
        self.index.len() == self.words.len()
    }

    /// Largest finite position visible in some word of the segment, and
    /// whether a position at infinity is visible.
    pub fn deepest_visible(&self) -> (usize, bool) {
        let mut deepest = 1;
        let mut omega = false;
        for w in &self.words {
            match w.first_star() {
                Position::Finite(j) => deepest = deepest.max(j + 1),
                _ => omega = true,
            }
        }
        (deepest, omega)
    }
}
