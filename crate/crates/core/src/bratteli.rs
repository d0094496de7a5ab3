//! The stationary Bratteli diagram modelling `X̃`, path prefixes and
//! cylinders, the clopen-set algebra, and the bounded-type and regularity
//! audits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::boundary::{section_at_zero_ray, Position, Tail, TildePoint};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::perm::Letter;
use crate::word::GroupWord;

/// A vertex of the diagram. `V { a, b, star }` at level `n` records the next
/// visible pair `(a, b)` after position `n` and whether letter `n+1` is
/// non-zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    Top,
    V { a: Letter, b: Letter, star: bool },
}

impl Vertex {
    pub fn new(a: Letter, b: Letter, star: bool) -> Vertex {
        Vertex::V { a, b, star }
    }

    pub fn pair(&self) -> Option<(Letter, Letter)> {
        match *self {
            Vertex::Top => None,
            Vertex::V { a, b, .. } => Some((a, b)),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Top => write!(f, "top"),
            Vertex::V { a, b, star } => write!(f, "{a}{b}{}", if *star { '*' } else { '0' }),
        }
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The diagram for alphabet size `d`; every level below the top carries the
/// same `2(d-1)d` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub d: usize,
}

impl Diagram {
    pub fn new(d: usize) -> Result<Diagram> {
        if d < 2 {
            return Err(Error::Input(format!("alphabet size {d} too small")));
        }
        Ok(Diagram { d })
    }

    /// Vertices of `V_n`, `n >= 1`, in a fixed order.
    pub fn level_vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(2 * (self.d - 1) * self.d);
        for a in 1..self.d as Letter {
            for b in 0..self.d as Letter {
                for star in [false, true] {
                    out.push(Vertex::new(a, b, star));
                }
            }
        }
        out
    }

    /// Outgoing edges `(label, target)`.
    pub fn edges_from(&self, v: Vertex) -> Vec<(Letter, Vertex)> {
        let d = self.d as Letter;
        match v {
            Vertex::Top => {
                let level = self.level_vertices();
                (0..d).flat_map(|l| level.iter().map(move |&w| (l, w))).collect()
            }
            Vertex::V { a, b, star: false } => vec![(0, Vertex::new(a, b, false)), (0, Vertex::new(a, b, true))],
            Vertex::V { a, b, star: true } if b != 0 => (0..d).map(|c| (a, Vertex::new(b, c, true))).collect(),
            Vertex::V { a, star: true, .. } => (1..d)
                .flat_map(|c| (0..d).map(move |e| (a, Vertex::new(c, e, false))))
                .collect(),
        }
    }

    /// Transfer matrix between consecutive levels below the top, indexed as
    /// [`Diagram::level_vertices`].
    pub fn transfer_matrix(&self) -> Vec<Vec<u64>> {
        let level = self.level_vertices();
        let pos: BTreeMap<Vertex, usize> = level.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut m = vec![vec![0u64; level.len()]; level.len()];
        for (i, v) in level.iter().enumerate() {
            for (_, w) in self.edges_from(*v) {
                m[i][pos[&w]] += 1;
            }
        }
        m
    }

    /// Path counts from the top to every vertex of `V_n`, by matrix products.
    pub fn path_counts(&self, n: usize) -> Vec<u64> {
        assert!(n >= 1);
        let m = self.transfer_matrix();
        let mut counts = vec![self.d as u64; m.len()];
        for _ in 1..n {
            let mut next = vec![0u64; m.len()];
            for (i, c) in counts.iter().enumerate() {
                for (j, e) in m[i].iter().enumerate() {
                    next[j] += c * e;
                }
            }
            counts = next;
        }
        counts
    }

    /// Least `k` such that every vertex of `V_n` reaches every vertex of
    /// `V_{n+k}`, if it is at most `bound`.
    pub fn primitivity_exponent(&self, bound: usize) -> Option<usize> {
        let m = self.transfer_matrix();
        let size = m.len();
        let mut reach: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&e| e > 0).collect()).collect();
        for k in 1..=bound {
            if reach.iter().all(|r| r.iter().all(|&x| x)) {
                return Some(k);
            }
            reach = (0..size)
                .map(|i| (0..size).map(|j| (0..size).any(|t| reach[i][t] && m[t][j] > 0)).collect())
                .collect();
        }
        None
    }

    /// The diagram is simple: some fixed number of levels connects every
    /// vertex to every vertex.
    pub fn is_simple(&self) -> bool {
        self.primitivity_exponent(4 * self.level_vertices().len()).is_some()
    }

    /// Degrees of the symmetric-group factors of `H_n`, one per vertex of `V_n`.
    pub fn h_structure(&self, n: usize) -> Vec<u64> {
        self.path_counts(n)
    }

    pub fn to_dot(&self, levels: usize) -> String {
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n  top [label=\"top\"];\n");
        let level = self.level_vertices();
        for n in 1..=levels {
            let _ = write!(out, "  {{ rank=same;");
            for v in &level {
                let _ = write!(out, " \"{n}:{v}\";");
            }
            out.push_str(" }\n");
        }
        for (l, w) in self.edges_from(Vertex::Top) {
            let _ = writeln!(out, "  top -> \"1:{w}\" [label=\"{l}\"];");
        }
        for n in 1..levels {
            for v in &level {
                for (l, w) in self.edges_from(*v) {
                    let _ = writeln!(out, "  \"{n}:{v}\" -> \"{}:{w}\" [label=\"{l}\"];", n + 1);
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, levels: usize) -> DiagramJson {
        let level: Vec<String> = self.level_vertices().iter().map(|v| v.to_string()).collect();
        let mut edges = vec![self.edges_from(Vertex::Top).iter().map(|(l, w)| ("top".to_string(), *l, w.to_string())).collect::<Vec<_>>()];
        for _ in 1..levels {
            let mut layer = Vec::new();
            for v in self.level_vertices() {
                for (l, w) in self.edges_from(v) {
                    layer.push((v.to_string(), l, w.to_string()));
                }
            }
            edges.push(layer);
        }
        DiagramJson { d: self.d, levels, vertices_per_level: level, edges }
    }

    /// Path of depth `n` followed by `p`.
    pub fn encode(&self, p: &TildePoint, n: usize) -> PathPrefix {
        let labels = p.truncate(n);
        let end = if n == 0 {
            Vertex::Top
        } else {
            let x = p.letter(n + 1);
            if x != 0 {
                Vertex::new(x, p.letter(n + 2), true)
            } else {
                let j = p.first_nonzero_after(n);
                Vertex::new(p.letter_at(j), p.letter_at(j.next()), false)
            }
        };
        PathPrefix { labels, end }
    }

    /// A canonical point of the cylinder `C_η`.
    pub fn representative(&self, eta: &PathPrefix) -> TildePoint {
        let mut prefix = eta.labels.clone();
        let tail = match eta.end {
            Vertex::Top => Tail::Periodic(vec![1]),
            Vertex::V { a, b, star: true } => {
                prefix.extend([a, b]);
                Tail::Periodic(vec![1])
            }
            Vertex::V { a, b, star: false } => Tail::ZeroPair(a, b),
        };
        TildePoint::canonical(prefix, tail)
    }

    /// The point `η·rest`: the labels of `η` followed by `rest`. Fails unless
    /// the result lies in `C_η`.
    pub fn decode(&self, eta: &PathPrefix, rest: &TildePoint) -> Result<TildePoint> {
        let n = eta.depth();
        let mut prefix = eta.labels.clone();
        prefix.extend_from_slice(rest.prefix());
        let p = TildePoint::canonical(prefix, rest.tail().clone());
        if n > 0 && self.encode(&p, n) != *eta {
            return Err(Error::Input(format!("continuation {rest} is inconsistent with end vertex {}", eta.end)));
        }
        Ok(p)
    }

    /// Membership in `C_η` read off the cylinder description: for `(ab,∗)`
    /// the point starts with `w a b`; for `(ab,0)` it starts with `w 0` and
    /// its next non-zero letter is `a`, followed by `b`.
    pub fn in_cylinder(&self, eta: &PathPrefix, p: &TildePoint) -> bool {
        let n = eta.depth();
        if p.truncate(n) != eta.labels {
            return false;
        }
        match eta.end {
            Vertex::Top => true,
            Vertex::V { a, b, star: true } => p.letter(n + 1) == a && p.letter(n + 2) == b,
            Vertex::V { a, b, star: false } => {
                if p.letter(n + 1) != 0 {
                    return false;
                }
                let j = p.first_nonzero_after(n);
                p.letter_at(j) == a && p.letter_at(j.next()) == b
            }
        }
    }

    pub fn children(&self, eta: &PathPrefix) -> Vec<PathPrefix> {
        self.edges_from(eta.end)
            .into_iter()
            .map(|(l, w)| {
                let mut labels = eta.labels.clone();
                labels.push(l);
                PathPrefix { labels, end: w }
            })
            .collect()
    }

    /// All paths of depth `n` (`1 <= n`), in lexicographic order.
    pub fn paths(&self, n: usize) -> Vec<PathPrefix> {
        let mut out = Vec::new();
        for labels in all_words(self.d, n) {
            for v in self.level_vertices() {
                out.push(PathPrefix { labels: labels.clone(), end: v });
            }
        }
        out
    }

    /// Tower over `v ∈ V_n`: every path ending at `v`.
    pub fn tower(&self, v: Vertex, n: usize) -> Result<Vec<PathPrefix>> {
        if n == 0 {
            return if v == Vertex::Top { Ok(vec![PathPrefix::root()]) } else { Err(Error::Input("V_0 is the top vertex".into())) };
        }
        if v == Vertex::Top {
            return Err(Error::Input("the top vertex lives at level 0".into()));
        }
        if (self.d as f64).powi(n as i32) > 5e6 {
            return Err(Error::Resource(format!("tower at level {n} is too large")));
        }
        Ok(all_words(self.d, n).into_iter().map(|labels| PathPrefix { labels, end: v }).collect())
    }

    /// `τ_{γ,γ'}`: replaces the prefix `γ` of `p` by `γ'`.
    pub fn tau_apply(&self, gamma: &PathPrefix, gamma2: &PathPrefix, p: &TildePoint) -> Result<TildePoint> {
        if gamma.end != gamma2.end || gamma.depth() != gamma2.depth() {
            return Err(Error::Input("τ needs two paths ending at the same vertex".into()));
        }
        if !self.in_cylinder(gamma, p) {
            return Err(Error::Input(format!("{p} is not in C_{gamma}")));
        }
        let changes: Vec<(Position, Letter)> =
            gamma2.labels.iter().enumerate().map(|(i, &x)| (Position::Finite(i + 1), x)).collect();
        Ok(p.with_letters(&changes))
    }

    /// `g(C_η)` as a clopen set.
    pub fn image_of_cylinder(&self, g: &GroupWord, eta: &PathPrefix) -> ClopenSet {
        let mut out = BTreeSet::new();
        self.image_rec(g, eta, &mut out);
        ClopenSet::from_antichain(self, out)
    }

    fn image_rec(&self, g: &GroupWord, eta: &PathPrefix, out: &mut BTreeSet<PathPrefix>) {
        let (img, sec) = g.split_word(&eta.labels);
        let moved = |end| PathPrefix { labels: img.clone(), end };
        match (sec.as_nucleus(), eta.end) {
            (Some(Generator::Identity), end) => {
                out.insert(moved(end));
                return;
            }
            (Some(Generator::B { element }), Vertex::V { a, b, star }) => {
                let (a2, b2) = element.act_pair(a, b);
                out.insert(moved(Vertex::new(a2, b2, star)));
                return;
            }
            (Some(Generator::A { perm }), Vertex::V { a, b, star: true }) if perm.apply(a) != 0 => {
                out.insert(moved(Vertex::new(perm.apply(a), b, true)));
                return;
            }
            (Some(Generator::A { perm }), end @ Vertex::V { star: false, .. }) if perm.apply(0) == 0 => {
                out.insert(moved(end));
                return;
            }
            _ => {}
        }
        for child in self.children(eta) {
            self.image_rec(g, &child, out);
        }
    }

    /// Whether `g` fixes every point of `C_η`.
    pub fn fixes_pointwise(&self, g: &GroupWord, eta: &PathPrefix) -> bool {
        let (img, sec) = g.split_word(&eta.labels);
        if img != eta.labels {
            return false;
        }
        match (sec.as_nucleus(), eta.end) {
            (Some(Generator::Identity), _) => true,
            (Some(Generator::B { element }), Vertex::V { a, b, .. }) => element.act_pair(a, b) == (a, b),
            (Some(Generator::A { perm }), Vertex::V { a, star: true, .. }) => perm.apply(a) == a,
            (Some(Generator::A { perm }), Vertex::V { star: false, .. }) if perm.apply(0) == 0 => true,
            (Some(Generator::A { .. }), Vertex::V { star: false, .. }) => false,
            _ => self.children(eta).iter().all(|c| self.fixes_pointwise(g, c)),
        }
    }

    /// Part of `C_η` fixed pointwise by `g`.
    pub fn fixed_part(&self, g: &GroupWord, eta: &PathPrefix) -> ClopenSet {
        let mut out = BTreeSet::new();
        self.fixed_rec(g, eta, &mut out);
        ClopenSet::from_antichain(self, out)
    }

    fn fixed_rec(&self, g: &GroupWord, eta: &PathPrefix, out: &mut BTreeSet<PathPrefix>) {
        let (img, sec) = g.split_word(&eta.labels);
        if img != eta.labels {
            return;
        }
        let nucleus = sec.as_nucleus();
        match (&nucleus, eta.end) {
            (Some(Generator::Identity), _) => {
                out.insert(eta.clone());
            }
            (Some(Generator::B { .. }), Vertex::V { .. }) | (Some(Generator::A { .. }), Vertex::V { star: true, .. }) => {
                if self.fixes_pointwise(g, eta) {
                    out.insert(eta.clone());
                }
            }
            (Some(Generator::A { perm }), Vertex::V { star: false, .. }) if perm.apply(0) == 0 => {
                out.insert(eta.clone());
            }
            _ => {
                for c in self.children(eta) {
                    self.fixed_rec(g, &c, out);
                }
            }
        }
    }

    /// `g` acts on `C_η` as a prefix exchange `τ_{η,η'}`.
    pub fn acts_as_tau(&self, g: &GroupWord, eta: &PathPrefix) -> bool {
        let sec = g.section(&eta.labels);
        self.fixes_pointwise(&sec, &continuation(eta.end))
    }

    /// Per-level counts of cylinders on which `g` is not a prefix exchange,
    /// plus the points where its germ is not one.
    pub fn bounded_type_audit(&self, g: &GroupWord, max_level: usize) -> BoundedTypeReport {
        let level = self.level_vertices();
        let mut per_level = Vec::new();
        // Words along which the section of g is non-trivial.
        let mut active: Vec<(Vec<Letter>, GroupWord)> = vec![(Vec::new(), g.normalized())];
        for n in 1..=max_level {
            let mut next = Vec::new();
            for (w, s) in &active {
                for x in 0..self.d as Letter {
                    let (_, t) = s.split(x);
                    if !t.is_identity() {
                        let mut w2 = w.clone();
                        w2.push(x);
                        next.push((w2, t));
                    }
                }
            }
            active = next;
            let mut counts: BTreeMap<Vertex, usize> = BTreeMap::new();
            for (_, s) in &active {
                for &v in &level {
                    if !self.fixes_pointwise(s, &continuation(v)) {
                        *counts.entry(v).or_default() += 1;
                    }
                }
            }
            per_level.push(LevelCount {
                level: n,
                active_words: active.len(),
                max_per_tower: counts.values().copied().max().unwrap_or(0),
                towers_hit: counts.len(),
            });
        }
        let bound = per_level.iter().map(|c| c.max_per_tower).max().unwrap_or(0);
        let exceptional = self.exceptional_points(g, max_level);
        BoundedTypeReport { generator: g.to_string(), per_level, bound, exceptional_points: exceptional }
    }

    /// Zero-tailed points `w0^∞ab` moved by the eventual section of `g` along
    /// `w0^∞`, over active words `w` of length `<= max_level`.
    pub fn exceptional_points(&self, g: &GroupWord, max_level: usize) -> Vec<String> {
        let mut points = BTreeSet::new();
        let mut active: Vec<(Vec<Letter>, GroupWord)> = vec![(Vec::new(), g.normalized())];
        for _ in 0..=max_level {
            let mut next = Vec::new();
            for (w, s) in &active {
                if let Ok(Generator::B { element }) = section_at_zero_ray(s, &[]) {
                    for a in 1..self.d as Letter {
                        for b in 0..self.d as Letter {
                            if element.act_pair(a, b) != (a, b) {
                                points.insert(TildePoint::canonical(w.clone(), Tail::ZeroPair(a, b)));
                            }
                        }
                    }
                }
                for x in 0..self.d as Letter {
                    let (_, t) = s.split(x);
                    if !t.is_identity() {
                        let mut w2 = w.clone();
                        w2.push(x);
                        next.push((w2, t));
                    }
                }
            }
            active = next;
        }
        points.into_iter().map(|p| p.to_string()).collect()
    }

    /// Smallest depth `n` such that `g` fixes `C_{γ_n}` pointwise, where
    /// `γ_n` is the depth-`n` prefix of `p`'s path.
    pub fn regularity_check(&self, g: &GroupWord, p: &TildePoint, max_depth: usize) -> Result<RegularityWitness> {
        if p.act(g) != *p {
            return Err(Error::Input(format!("{g} does not fix {p}")));
        }
        for n in 0..=max_depth {
            let eta = self.encode(p, n);
            if self.fixes_pointwise(g, &eta) {
                let section = g.section(&eta.labels);
                return Ok(RegularityWitness {
                    depth: n,
                    cylinder: eta.to_string(),
                    section_in_nucleus: matches!(section.as_nucleus(), Some(Generator::Identity | Generator::B { .. })),
                });
            }
        }
        Err(Error::Diagnostic(format!("no fixed cylinder around {p} for {g} up to depth {max_depth}")))
    }
}

/// The paths leaving `v`, viewed as a cylinder rooted at `v`. The diagram is
/// stationary, so the level of `v` does not matter.
fn continuation(v: Vertex) -> PathPrefix {
    PathPrefix { labels: Vec::new(), end: v }
}

fn all_words(d: usize, n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * d);
        for w in &out {
            for x in 0..d as Letter {
                let mut w2 = w.clone();
                w2.push(x);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub d: usize,
    pub levels: usize,
    pub vertices_per_level: Vec<String>,
    /// `edges[n]` lists `(source, label, target)` from level `n` to `n+1`.
    pub edges: Vec<Vec<(String, Letter, String)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCount {
    pub level: usize,
    pub active_words: usize,
    pub max_per_tower: usize,
    pub towers_hit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedTypeReport {
    pub generator: String,
    pub per_level: Vec<LevelCount>,
    pub bound: usize,
    pub exceptional_points: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityWitness {
    pub depth: usize,
    pub cylinder: String,
    pub section_in_nucleus: bool,
}

/// A finite path from the top: label word and end vertex. The vertices in
/// between are determined by these.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathPrefix {
    pub labels: Vec<Letter>,
    pub end: Vertex,
}

impl PathPrefix {
    pub fn root() -> PathPrefix {
        PathPrefix { labels: Vec::new(), end: Vertex::Top }
    }

    pub fn new(labels: Vec<Letter>, end: Vertex) -> Result<PathPrefix> {
        if labels.is_empty() != (end == Vertex::Top) {
            return Err(Error::Input("only the empty path ends at the top".into()));
        }
        Ok(PathPrefix { labels, end })
    }

    pub fn depth(&self) -> usize {
        self.labels.len()
    }

    /// Vertex reached after `k` edges.
    pub fn vertex_at(&self, k: usize) -> Vertex {
        assert!(k <= self.depth());
        let mut v = self.end;
        for n in (k..self.depth()).rev() {
            if n == 0 {
                return Vertex::Top;
            }
            let l = self.labels[n];
            v = match v {
                Vertex::Top => unreachable!(),
                Vertex::V { a, b, star } => {
                    if l != 0 {
                        Vertex::new(l, if star { a } else { 0 }, true)
                    } else {
                        Vertex::new(a, b, false)
                    }
                }
            };
        }
        v
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        (0..=self.depth()).map(|k| self.vertex_at(k)).collect()
    }

    pub fn truncated(&self, k: usize) -> PathPrefix {
        PathPrefix { labels: self.labels[..k].to_vec(), end: self.vertex_at(k) }
    }

    /// `self` is a prefix of `other` (or equal).
    pub fn is_prefix_of(&self, other: &PathPrefix) -> bool {
        self.depth() <= other.depth()
            && other.labels[..self.depth()] == self.labels[..]
            && other.vertex_at(self.depth()) == self.end
    }

    pub fn parse(s: &str) -> Result<PathPrefix> {
        let err = || Error::Parse(format!("malformed path `{s}`"));
        let (w, v) = s.trim().split_once('@').ok_or_else(err)?;
        let labels: Vec<Letter> = w.chars().map(|c| c.to_digit(10).map(|x| x as Letter).ok_or_else(err)).collect::<Result<_>>()?;
        let end = if v == "top" {
            Vertex::Top
        } else {
            let cs: Vec<char> = v.chars().collect();
            if cs.len() != 3 {
                return Err(err());
            }
            let a = cs[0].to_digit(10).ok_or_else(err)? as Letter;
            let b = cs[1].to_digit(10).ok_or_else(err)? as Letter;
            let star = match cs[2] {
                '*' => true,
                '0' => false,
                _ => return Err(err()),
            };
            if a == 0 {
                return Err(err());
            }
            Vertex::new(a, b, star)
        };
        PathPrefix::new(labels, end)
    }
}

impl fmt::Display for PathPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.labels {
            write!(f, "{x}")?;
        }
        write!(f, "@{}", self.end)
    }
}

impl fmt::Debug for PathPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A clopen subset of the path space: a finite union of cylinders, kept as
/// the antichain of its maximal cylinders.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClopenSet {
    members: BTreeSet<PathPrefix>,
}

impl ClopenSet {
    pub fn empty() -> ClopenSet {
        ClopenSet { members: BTreeSet::new() }
    }

    pub fn full() -> ClopenSet {
        ClopenSet { members: BTreeSet::from([PathPrefix::root()]) }
    }

    pub fn cylinder(diagram: &Diagram, eta: PathPrefix) -> ClopenSet {
        Self::from_antichain(diagram, BTreeSet::from([eta]))
    }

    /// Builds from cylinders that may overlap.
    pub fn from_cylinders(diagram: &Diagram, cylinders: impl IntoIterator<Item = PathPrefix>) -> ClopenSet {
        let all: BTreeSet<PathPrefix> = cylinders.into_iter().collect();
        let members = all.iter().filter(|c| !all.iter().any(|o| o != *c && o.is_prefix_of(c))).cloned().collect();
        Self::from_antichain(diagram, members)
    }

    pub(crate) fn from_antichain(diagram: &Diagram, members: BTreeSet<PathPrefix>) -> ClopenSet {
        let mut s = ClopenSet { members };
        s.normalize(diagram);
        s
    }

    /// Merges complete sibling families into their parent, deepest first.
    fn normalize(&mut self, diagram: &Diagram) {
        loop {
            let Some(depth) = self.members.iter().map(|m| m.depth()).max() else { return };
            if depth == 0 {
                return;
            }
            let mut changed = false;
            for k in (1..=depth).rev() {
                let mut parents: BTreeMap<PathPrefix, usize> = BTreeMap::new();
                for m in self.members.iter().filter(|m| m.depth() == k) {
                    *parents.entry(m.truncated(k - 1)).or_default() += 1;
                }
                for (parent, count) in parents {
                    if count == diagram.edges_from(parent.end).len() {
                        for c in diagram.children(&parent) {
                            self.members.remove(&c);
                        }
                        self.members.insert(parent);
                        changed = true;
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn members(&self) -> impl Iterator<Item = &PathPrefix> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == 1 && self.members.contains(&PathPrefix::root())
    }

    pub fn depth(&self) -> usize {
        self.members.iter().map(|m| m.depth()).max().unwrap_or(0)
    }

    pub fn contains_point(&self, diagram: &Diagram, p: &TildePoint) -> bool {
        self.members.iter().any(|m| diagram.encode(p, m.depth()) == *m)
    }

    /// Some member contains `C_η`.
    pub fn covers(&self, eta: &PathPrefix) -> bool {
        (0..=eta.depth()).any(|k| self.members.contains(&eta.truncated(k)))
    }

    pub fn union(&self, diagram: &Diagram, other: &ClopenSet) -> ClopenSet {
        Self::from_cylinders(diagram, self.members.iter().chain(other.members.iter()).cloned())
    }

    pub fn intersect(&self, diagram: &Diagram, other: &ClopenSet) -> ClopenSet {
        let mut out = BTreeSet::new();
        for u in &self.members {
            if other.covers(u) {
                out.insert(u.clone());
            }
        }
        for v in &other.members {
            if self.covers(v) {
                out.insert(v.clone());
            }
        }
        Self::from_cylinders(diagram, out)
    }

    pub fn complement(&self, diagram: &Diagram) -> ClopenSet {
        let mut out = BTreeSet::new();
        let internal: BTreeSet<PathPrefix> = self
            .members
            .iter()
            .flat_map(|m| (0..m.depth()).map(move |k| m.truncated(k)))
            .collect();
        let mut stack = vec![PathPrefix::root()];
        while let Some(node) = stack.pop() {
            if self.members.contains(&node) {
                continue;
            }
            if internal.contains(&node) {
                stack.extend(diagram.children(&node));
            } else {
                out.insert(node);
            }
        }
        Self::from_antichain(diagram, out)
    }

    pub fn difference(&self, diagram: &Diagram, other: &ClopenSet) -> ClopenSet {
        self.intersect(diagram, &other.complement(diagram))
    }

    pub fn is_disjoint(&self, diagram: &Diagram, other: &ClopenSet) -> bool {
        self.intersect(diagram, other).is_empty()
    }

    pub fn is_subset(&self, other: &ClopenSet) -> bool {
        self.members.iter().all(|m| other.covers(m))
    }

    /// `g(U)`.
    pub fn image(&self, diagram: &Diagram, g: &GroupWord) -> ClopenSet {
        Self::from_cylinders(
            diagram,
            self.members.iter().flat_map(|m| diagram.image_of_cylinder(g, m).members),
        )
    }

    /// `g` fixes `U` pointwise.
    pub fn fixed_pointwise_by(&self, diagram: &Diagram, g: &GroupWord) -> bool {
        self.members.iter().all(|m| diagram.fixes_pointwise(g, m))
    }

    pub fn parse(diagram: &Diagram, s: &str) -> Result<ClopenSet> {
        let s = s.trim();
        if s == "∅" || s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s.split([',', ' ']).filter(|t| !t.is_empty()).map(PathPrefix::parse).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_cylinders(diagram, parts))
    }
}

/// Comma-separated list of `labelword@vertex`; `∅` for the empty set.
impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}
