//! Words in `S = A ∪ B`, their sections and contraction-based equality.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{BElement, Generator};
use crate::perm::{Letter, Permutation};

/// Default bound on the recursion depth of identity checks.
pub const DEFAULT_DEPTH_BOUND: usize = 64;

/// A word `g_1 g_2 .. g_k` in the generators. It acts on the tree with the
/// rightmost letter first, so `apply(g·h, w) = apply(g, apply(h, w))`.
#[derive(Clone, Serialize, Deserialize)]
pub struct GroupWord {
    d: usize,
    letters: Vec<Generator>,
    #[serde(skip)]
    portrait_cache: OnceLock<Portrait>,
}

impl PartialEq for GroupWord {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.letters == other.letters
    }
}
impl Eq for GroupWord {}

impl std::hash::Hash for GroupWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.d.hash(state);
        self.letters.hash(state);
    }
}

impl GroupWord {
    pub fn new(d: usize, letters: Vec<Generator>) -> Result<Self> {
        for g in &letters {
            if let Some(k) = g.degree() {
                if k != d {
                    return Err(Error::Input(format!("generator {g} has degree {k}, expected {d}")));
                }
            }
        }
        Ok(Self::raw(d, letters))
    }

    fn raw(d: usize, letters: Vec<Generator>) -> Self {
        GroupWord { d, letters, portrait_cache: OnceLock::new() }
    }

    pub fn identity(d: usize) -> Self {
        Self::raw(d, Vec::new())
    }

    pub fn from_generator(d: usize, g: Generator) -> Self {
        Self::raw(d, vec![g]).normalized()
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self · other`: `other` acts first.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Self::raw(self.d, letters).normalized()
    }

    pub fn inverse(&self) -> GroupWord {
        Self::raw(self.d, self.letters.iter().rev().map(Generator::inverse).collect())
    }

    pub fn pow(&self, k: usize) -> GroupWord {
        let mut out = GroupWord::identity(self.d);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`.
    pub fn commutator(&self, other: &GroupWord) -> GroupWord {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// Merges adjacent letters of the same kind and drops identities, so the
    /// result alternates between `A` and `B` letters.
    pub fn normalized(&self) -> GroupWord {
        let mut out: Vec<Generator> = Vec::with_capacity(self.letters.len());
        for g in &self.letters {
            if g.is_identity() {
                continue;
            }
            let merged = match (out.last(), g) {
                (Some(Generator::A { perm: p }), Generator::A { perm: q }) => {
                    Some(Generator::a_unchecked(p.compose(q)))
                }
                (Some(Generator::B { element: p }), Generator::B { element: q }) => {
                    Some(Generator::from_b(p.compose(q)))
                }
                _ => None,
            };
            match merged {
                Some(m) => {
                    out.pop();
                    if !m.is_identity() {
                        out.push(m);
                    }
                }
                None => out.push(g.clone()),
            }
        }
        Self::raw(self.d, out)
    }

    pub fn root_perm(&self) -> Permutation {
        self.letters
            .iter()
            .fold(Permutation::identity(self.d), |acc, g| acc.compose(&g.root_perm(self.d)))
    }

    /// Image of the letter `x` and the (normalized) section at `x`.
    pub fn split(&self, x: Letter) -> (Letter, GroupWord) {
        let mut sections = Vec::with_capacity(self.letters.len());
        let mut cur = x;
        for g in self.letters.iter().rev() {
            let (img, sec) = g.split(cur);
            sections.push(sec);
            cur = img;
        }
        sections.reverse();
        (cur, Self::raw(self.d, sections).normalized())
    }

    /// Image of a finite word and the section at that word.
    pub fn split_word(&self, w: &[Letter]) -> (Vec<Letter>, GroupWord) {
        let mut g = self.normalized();
        let mut image = Vec::with_capacity(w.len());
        for &x in w {
            if g.is_empty() {
                image.push(x);
                continue;
            }
            let (y, s) = g.split(x);
            image.push(y);
            g = s;
        }
        (image, g)
    }

    pub fn section(&self, v: &[Letter]) -> GroupWord {
        self.split_word(v).1
    }

    pub fn apply(&self, w: &[Letter]) -> Result<Vec<Letter>> {
        if let Some(&x) = w.iter().find(|&&x| x as usize >= self.d) {
            return Err(Error::Input(format!("letter {x} out of range for d={}", self.d)));
        }
        Ok(self.split_word(w).0)
    }

    /// `(g|_0, .., g|_{d-1}; σ)`.
    pub fn wreath_decompose(&self) -> (Vec<GroupWord>, Permutation) {
        let g = self.normalized();
        let sections = (0..self.d as Letter).map(|x| g.split(x).1).collect();
        (sections, g.root_perm())
    }

    /// Recombines a wreath decomposition into its action on a finite word.
    pub fn apply_recombined(sections: &[GroupWord], root: &Permutation, w: &[Letter]) -> Vec<Letter> {
        match w.split_first() {
            None => Vec::new(),
            Some((&x, rest)) => {
                let mut out = vec![root.apply(x)];
                out.extend(sections[x as usize].split_word(rest).0);
                out
            }
        }
    }

    /// The word as a single nucleus element, if its normal form has at most
    /// one letter.
    pub fn as_nucleus(&self) -> Option<Generator> {
        let n = self.normalized();
        match n.letters.len() {
            0 => Some(Generator::Identity),
            1 => Some(n.letters[0].clone()),
            _ => None,
        }
    }

    pub fn as_b(&self) -> Option<BElement> {
        match self.as_nucleus() {
            Some(Generator::B { element }) => Some(element),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.try_is_identity(DEFAULT_DEPTH_BOUND).expect("words in S are contracting")
    }

    /// Exact identity test by descending through sections. Normal forms of
    /// length `L >= 2` have sections of length at most `ceil(L/2)`, so every
    /// branch reaches a single nucleus letter where identity is decidable.
    pub fn try_is_identity(&self, depth_bound: usize) -> Result<bool> {
        let mut memo = HashMap::new();
        identity_rec(&self.normalized(), 0, depth_bound, &mut memo)
    }

    pub fn equals(&self, other: &GroupWord) -> bool {
        self.mul(&other.inverse()).is_identity()
    }

    /// Least `k <= bound` with `g^k = e`.
    pub fn order_of(&self, bound: usize) -> Option<usize> {
        let g = self.normalized();
        let mut acc = g.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.mul(&g);
        }
        None
    }

    /// Levels visited by the contraction descent: `0` for the empty word,
    /// `1` for a single nucleus letter (decided by inspecting its root and
    /// sections), one more than the deepest child otherwise.
    pub fn contraction_depth(&self) -> usize {
        fn rec(g: &GroupWord) -> usize {
            match g.letters.len() {
                0 => 0,
                1 => 1,
                _ => (0..g.d as Letter).map(|x| 1 + rec(&g.split(x).1)).max().unwrap_or(0),
            }
        }
        rec(&self.normalized())
    }

    /// Portrait truncated at `depth`; subtrees under an empty section are omitted.
    pub fn portrait(&self, depth: usize) -> Portrait {
        let g = self.normalized();
        Portrait::build(&g, depth)
    }

    /// Cached portrait at the given depth (the cache holds the first depth
    /// requested).
    pub fn cached_portrait(&self, depth: usize) -> &Portrait {
        let p = self.portrait_cache.get_or_init(|| self.portrait(depth));
        debug_assert_eq!(p.depth, depth);
        p
    }
}

fn identity_rec(
    g: &GroupWord,
    depth: usize,
    bound: usize,
    memo: &mut HashMap<Vec<Generator>, bool>,
) -> Result<bool> {
    if g.letters.len() <= 1 {
        return Ok(g.letters.is_empty() || g.letters[0].is_identity());
    }
    if depth >= bound {
        return Err(Error::Diagnostic(format!(
            "identity check exceeded depth {bound} (non-contracting input?) at {g}"
        )));
    }
    if let Some(&r) = memo.get(&g.letters) {
        return Ok(r);
    }
    let mut result = g.root_perm().is_identity();
    if result {
        for x in 0..g.d as Letter {
            if !identity_rec(&g.split(x).1, depth + 1, bound, memo)? {
                result = false;
                break;
            }
        }
    }
    memo.insert(g.letters.clone(), result);
    Ok(result)
}

/// Finite truncation of the wreath recursion `g ↦ (g|_0, .., g|_{d-1}) σ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Portrait {
    pub root_perm: Permutation,
    /// Empty at depth 0. `None` marks a subtree whose section has empty
    /// normal form.
    pub children: Vec<Option<Portrait>>,
    pub depth: usize,
}

impl Portrait {
    fn build(g: &GroupWord, depth: usize) -> Portrait {
        let children = if depth == 0 {
            Vec::new()
        } else {
            (0..g.d as Letter)
                .map(|x| {
                    let s = g.split(x).1;
                    (!s.is_empty()).then(|| Portrait::build(&s, depth - 1))
                })
                .collect()
        };
        Portrait { root_perm: g.root_perm(), children, depth }
    }

    pub fn is_trivial(&self) -> bool {
        self.root_perm.is_identity() && self.children.iter().flatten().all(Portrait::is_trivial)
    }

    /// Equality of the truncated actions (an omitted child counts as trivial).
    pub fn same_action(&self, other: &Portrait) -> bool {
        if self.root_perm != other.root_perm || self.depth != other.depth {
            return false;
        }
        self.children.iter().zip(&other.children).all(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => a.same_action(b),
            (Some(a), None) | (None, Some(a)) => a.is_trivial(),
            (None, None) => true,
        })
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Letters separated by `.`; the empty word prints as `e`.
impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.letters.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl GroupWord {
    pub fn parse(d: usize, s: &str) -> Result<GroupWord> {
        let letters = s
            .split('.')
            .map(str::parse::<Generator>)
            .collect::<Result<Vec<_>>>()?;
        GroupWord::new(d, letters)
    }
}
