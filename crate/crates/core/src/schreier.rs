//! Finite Schreier-graph approximations: level graphs over `S₀`, Gray code
//! pieces with full `S`-labels, canonical codes, marginals, branching and
//! the search for `n₀`.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::boundary::{GraySegment, GrayWord, Position, TildePoint};
use crate::error::{Error, Result};
use crate::genset::GeneratingSet;
use crate::perm::Letter;

/// Default largest level for [`level_graph`].
pub const DEFAULT_MAX_LEVEL: usize = 6;
/// Vertex cap for a single Gray code piece.
pub const MAX_PIECE_VERTICES: usize = 250_000;

/// Schreier graph of the action of `S₀` on the `n`-th level.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelGraph {
    pub d: usize,
    pub n: usize,
    pub generator_names: Vec<String>,
    /// `adjacency[s][v]` is the image of vertex `v` under generator `s`;
    /// vertices are words read as base-`d` numbers, first letter most
    /// significant.
    pub adjacency: Vec<Vec<u32>>,
}

pub fn level_graph(gens: &GeneratingSet, n: usize, max_level: usize) -> Result<LevelGraph> {
    if n == 0 || n > max_level {
        return Err(Error::Resource(format!("level {n} outside 1..={max_level}")));
    }
    let d = gens.d;
    let size = d.checked_pow(n as u32).filter(|&s| s <= u32::MAX as usize).ok_or_else(|| Error::Resource("level too large".into()))?;
    let mut adjacency = Vec::with_capacity(gens.len());
    for g in &gens.generators {
        let mut row = Vec::with_capacity(size);
        for v in 0..size {
            let w = decode_vertex(d, n, v);
            let img = g.generator.apply_unchecked(&w);
            row.push(encode_vertex(d, &img) as u32);
        }
        adjacency.push(row);
    }
    Ok(LevelGraph { d, n, generator_names: gens.generators.iter().map(|g| g.name.clone()).collect(), adjacency })
}

fn decode_vertex(d: usize, n: usize, mut v: usize) -> Vec<Letter> {
    let mut w = vec![0; n];
    for i in (0..n).rev() {
        w[i] = (v % d) as Letter;
        v /= d;
    }
    w
}

fn encode_vertex(d: usize, w: &[Letter]) -> usize {
    w.iter().fold(0, |acc, &x| acc * d + x as usize)
}

impl LevelGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.first().map_or(0, |r| r.len())
    }

    pub fn word(&self, v: usize) -> Vec<Letter> {
        decode_vertex(self.d, self.n, v)
    }

    pub fn is_connected(&self) -> bool {
        let size = self.vertex_count();
        let mut seen = vec![false; size];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for row in &self.adjacency {
                let w = row[v] as usize;
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == size
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph level{} {{\n", self.n);
        for v in 0..self.vertex_count() {
            let label: String = self.word(v).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "  v{v} [label=\"{label}\"];");
        }
        for (s, row) in self.adjacency.iter().enumerate() {
            for (v, &w) in row.iter().enumerate() {
                if v != w as usize {
                    let _ = writeln!(out, "  v{v} -> v{w} [label=\"{}\"];", self.generator_names[s]);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Edge label: the coordinates an element of `S` reads and writes. The set
/// of elements of `S` moving one endpoint to the other is determined by it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A { from: Letter, to: Letter },
    B { from: (Letter, Letter), to: (Letter, Letter) },
}

impl Label {
    fn encode(&self, out: &mut Vec<u32>) {
        match *self {
            Label::A { from, to } => out.extend([0, from as u32, to as u32, 0, 0]),
            Label::B { from, to } => out.extend([1, from.0 as u32, from.1 as u32, to.0 as u32, to.1 as u32]),
        }
    }

    pub fn is_a(&self) -> bool {
        matches!(self, Label::A { .. })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::A { from, to } => write!(f, "A:{from}>{to}"),
            Label::B { from, to } => write!(f, "B:{}{}>{}{}", from.0, from.1, to.0, to.1),
        }
    }
}

/// All moves of `p` by elements of `S`, sorted by label. Loops are omitted.
pub fn s_moves(d: usize, p: &TildePoint) -> Vec<(Label, TildePoint)> {
    let mut out = Vec::with_capacity(d * d + d);
    let x = p.letter(1);
    for y in 0..d as Letter {
        if y != x {
            out.push((Label::A { from: x, to: y }, p.with_letters(&[(Position::Finite(1), y)])));
        }
    }
    let j = p.first_nonzero();
    let (a, b) = p.visible_pair();
    for a2 in 1..d as Letter {
        for b2 in 0..d as Letter {
            if (a2, b2) != (a, b) {
                out.push((Label::B { from: (a, b), to: (a2, b2) }, p.with_letters(&[(j, a2), (j.next(), b2)])));
            }
        }
    }
    out.sort_by_key(|l| l.0);
    out
}

/// Canonical code of a pointed labelled graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PieceCode(pub Vec<u32>);

impl PieceCode {
    /// SHA-256 of the code, for compact storage.
    pub fn digest(&self) -> [u8; 32] {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for x in &self.0 {
            h.update(x.to_le_bytes());
        }
        h.finalize().into()
    }
}

impl fmt::Debug for PieceCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PieceCode(len {})", self.0.len())
    }
}

/// Connected component of the basepoint in the preimage of a Gray segment.
/// Vertex 0 is the basepoint, and vertices are numbered in canonical BFS
/// order (neighbours visited by increasing label).
#[derive(Clone, Debug)]
pub struct GrayPiece {
    segment: GraySegment,
    vertices: Vec<TildePoint>,
    index: HashMap<TildePoint, usize>,
    /// Out-edges per vertex, sorted by label; loops omitted.
    edges: Vec<Vec<(Label, usize)>>,
    /// Line index of each vertex's projection relative to the centre.
    projection: Vec<i64>,
}

/// The piece over the window `[-left, right]` around `p`'s projection.
pub fn piece_window(d: usize, p: &TildePoint, left: usize, right: usize) -> Result<GrayPiece> {
    let segment = GraySegment::window(&p.gray(), left, right);
    if !segment.is_simple() {
        return Err(Error::Diagnostic(format!("gray segment around {p} is not simple")));
    }
    let mut vertices = vec![p.clone()];
    let mut index = HashMap::from([(p.clone(), 0usize)]);
    let mut projection = vec![0i64];
    let mut edges: Vec<Vec<(Label, usize)>> = Vec::new();
    let mut head = 0;
    while head < vertices.len() {
        let v = vertices[head].clone();
        let mut out = Vec::new();
        for (label, w) in s_moves(d, &v) {
            let Some(k) = segment.line_index(&w.gray()) else { continue };
            let id = match index.get(&w) {
                Some(&id) => id,
                None => {
                    let id = vertices.len();
                    if id >= MAX_PIECE_VERTICES {
                        return Err(Error::Resource(format!("gray piece around {p} exceeds {MAX_PIECE_VERTICES} vertices")));
                    }
                    index.insert(w.clone(), id);
                    vertices.push(w);
                    projection.push(k);
                    id
                }
            };
            out.push((label, id));
        }
        edges.push(out);
        head += 1;
    }
    Ok(GrayPiece { segment, vertices, index, edges, projection })
}

/// The central piece `(Γ|_n, p)` of length `2n+1`.
pub fn gray_piece(d: usize, p: &TildePoint, n: usize) -> Result<GrayPiece> {
    piece_window(d, p, n, n)
}

impl GrayPiece {
    pub fn segment(&self) -> &GraySegment {
        &self.segment
    }

    pub fn basepoint(&self) -> &TildePoint {
        &self.vertices[0]
    }

    pub fn vertices(&self) -> &[TildePoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self, v: usize) -> &[(Label, usize)] {
        &self.edges[v]
    }

    pub fn projection(&self, v: usize) -> i64 {
        self.projection[v]
    }

    pub fn contains(&self, p: &TildePoint) -> bool {
        self.index.contains_key(p)
    }

    pub fn vertex_id(&self, p: &TildePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Code of the piece pointed at vertex `root`.
    pub fn code_from(&self, root: usize) -> PieceCode {
        let order = self.bfs_order(root, |_| true);
        self.encode(&order)
    }

    pub fn code(&self) -> PieceCode {
        // Vertices are already stored in canonical order from the basepoint.
        let order: Vec<usize> = (0..self.vertices.len()).collect();
        self.encode(&order)
    }

    fn bfs_order(&self, root: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut seen = HashSet::from([root]);
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            for &(_, w) in &self.edges[order[head]] {
                if keep(w) && seen.insert(w) {
                    order.push(w);
                }
            }
            head += 1;
        }
        order
    }

    fn encode(&self, order: &[usize]) -> PieceCode {
        let pos: HashMap<usize, u32> = order.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let mut out = vec![self.segment.left() as u32, self.segment.right() as u32];
        for &v in order {
            let (x, a, b) = self.vertices[v].class_key();
            out.extend([u32::MAX, x as u32, a as u32, b as u32]);
            for (label, w) in &self.edges[v] {
                if let Some(&k) = pos.get(w) {
                    label.encode(&mut out);
                    out.push(k);
                }
            }
        }
        PieceCode(out)
    }

    /// Component of the basepoint over the sub-window `[-left, right]`,
    /// re-indexed canonically.
    pub fn restrict(&self, left: usize, right: usize) -> GrayPiece {
        let range = -(left as i64)..=right as i64;
        let order = self.bfs_order(0, |w| range.contains(&self.projection[w]));
        let new_id: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let vertices: Vec<TildePoint> = order.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = order
            .iter()
            .map(|&v| self.edges[v].iter().filter_map(|(l, w)| new_id.get(w).map(|&k| (*l, k))).collect())
            .collect();
        let projection = order.iter().map(|&v| self.projection[v]).collect();
        let index = vertices.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let segment = GraySegment::window(&self.vertices[0].gray(), left, right);
        GrayPiece { segment, vertices, index, edges, projection }
    }

    fn central_n(&self) -> Result<usize> {
        let (l, r) = (self.segment.left(), self.segment.right());
        if l != r || l < 2 {
            return Err(Error::Input(format!("marginals need a central piece with n >= 2, got window [-{l}, {r}]")));
        }
        Ok(l)
    }

    /// `(I_l, I_r, I_c)`.
    pub fn marginals(&self) -> Result<(GrayPiece, GrayPiece, GrayPiece)> {
        let n = self.central_n()?;
        Ok((self.restrict(n, n - 2), self.restrict(n - 2, n), self.restrict(n - 2, n - 2)))
    }

    /// Connected components of `vertices` in the subgraph they induce.
    fn components(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let set: HashSet<usize> = vertices.iter().copied().collect();
        let mut seen = HashSet::new();
        let mut comps = Vec::new();
        for &v in vertices {
            if seen.contains(&v) {
                continue;
            }
            let comp = self.bfs_order(v, |w| set.contains(&w));
            seen.extend(comp.iter().copied());
            comps.push(comp);
        }
        comps
    }

    pub fn branches(&self) -> Result<BranchReport> {
        let n = self.central_n()? as i64;
        let c = n - 2;
        let count = |lo: i64, hi: i64| {
            let marg = self.bfs_order(0, |w| (lo..=hi).contains(&self.projection[w]));
            let over_center: Vec<usize> = marg.into_iter().filter(|&v| (-c..=c).contains(&self.projection[v])).collect();
            self.components(&over_center).len()
        };
        let left_branches = count(-n, n - 2);
        let right_branches = count(-n + 2, n);
        let words = self.segment.words();
        let roots = roots_of(words);
        let quasi_level_depth = quasi_level(words, &roots);
        let root_preimages_connected = roots.roots.iter().all(|&i| {
            let ids: Vec<usize> = (0..self.len()).filter(|&v| self.projection[v] == i - n).collect();
            ids.is_empty() || self.components(&ids).len() == 1
        });
        Ok(BranchReport {
            left_branches,
            right_branches,
            branches_left: left_branches > 1,
            branches_right: right_branches > 1,
            bi_branching: left_branches > 1 && right_branches > 1,
            visible_criterion_left: visibility_criterion(words, true),
            visible_criterion_right: visibility_criterion(words, false),
            roots: roots.roots.iter().map(|&i| i - n).collect(),
            anti_roots: roots.anti_roots.iter().map(|&i| i - n).collect(),
            root_position: roots.position,
            quasi_level_depth,
            root_preimages_connected,
        })
    }

    /// Codes of the unpointed piece re-pointed at every vertex.
    pub fn all_basepoint_codes(&self) -> Vec<PieceCode> {
        (0..self.len()).map(|v| self.code_from(v)).collect()
    }

    /// Whether no two basepoints give the same pointed code, i.e. the piece
    /// has no non-trivial labelled automorphism.
    pub fn has_trivial_automorphism_group(&self) -> bool {
        let codes = self.all_basepoint_codes();
        let set: HashSet<&PieceCode> = codes.iter().collect();
        set.len() == codes.len()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph piece {\n");
        for (i, p) in self.vertices.iter().enumerate() {
            let style = if i == 0 { ", style=filled, fillcolor=gold" } else { "" };
            let _ = writeln!(out, "  v{i} [label=\"{p}\\n{}\"{style}];", self.projection[i]);
        }
        for (v, es) in self.edges.iter().enumerate() {
            for (label, w) in es {
                if v < *w {
                    let _ = writeln!(out, "  v{v} -- v{w} [label=\"{label}\"];");
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> PieceJson {
        let mut edges = Vec::new();
        for (v, es) in self.edges.iter().enumerate() {
            for (label, w) in es {
                edges.push(EdgeJson { from: v, to: *w, label: label.to_string() });
            }
        }
        PieceJson {
            segment: self.segment.words().iter().map(|w| w.to_string()).collect(),
            center: self.segment.left(),
            vertices: self.vertices.iter().map(|p| p.to_string()).collect(),
            projection: self.projection.clone(),
            edges,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceJson {
    pub segment: Vec<String>,
    pub center: usize,
    pub vertices: Vec<String>,
    pub projection: Vec<i64>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub left_branches: usize,
    pub right_branches: usize,
    pub branches_left: bool,
    pub branches_right: bool,
    pub bi_branching: bool,
    /// Branching predicted by the visible-bit criterion.
    pub visible_criterion_left: bool,
    pub visible_criterion_right: bool,
    /// Line indices (relative to the centre) of roots and anti-roots.
    pub roots: Vec<i64>,
    pub anti_roots: Vec<i64>,
    /// Position of the first `∗` of a root.
    pub root_position: Position,
    pub quasi_level_depth: Option<usize>,
    pub root_preimages_connected: bool,
}

struct Roots {
    roots: Vec<i64>,
    anti_roots: Vec<i64>,
    position: Position,
}

/// Roots and anti-roots of a segment, as indices into `words`.
fn roots_of(words: &[GrayWord]) -> Roots {
    let firsts: Vec<Position> = words.iter().map(|w| w.first_star()).collect();
    let position = *firsts.iter().max().expect("non-empty segment");
    let roots = (0..words.len() as i64).filter(|&i| firsts[i as usize] == position).collect();
    let anti_roots = match position {
        Position::Finite(j) if j > 1 => {
            (0..words.len() as i64).filter(|&i| firsts[i as usize] == Position::Finite(j - 1)).collect()
        }
        _ => Vec::new(),
    };
    Roots { roots, anti_roots, position }
}

fn quasi_level(words: &[GrayWord], roots: &Roots) -> Option<usize> {
    let last = words.len() as i64 - 1;
    let left = [0, 1];
    let right = [last - 1, last];
    let fits = |r: &[i64; 2], a: &[i64; 2]| {
        !roots.anti_roots.is_empty()
            && roots.roots.iter().all(|i| r.contains(i))
            && roots.anti_roots.iter().all(|i| a.contains(i))
    };
    if fits(&left, &right) || fits(&right, &left) {
        roots.position.finite()
    } else {
        None
    }
}

fn visible_set(words: &[GrayWord]) -> HashSet<Position> {
    let mut set = HashSet::new();
    for w in words {
        let (a, (b1, b2)) = w.visible_positions();
        set.extend([a, b1, b2]);
    }
    set
}

/// Some bit is `B`-visible in the outer pair of the side, invisible in the
/// central part, and `∗` in a point of the central part.
fn visibility_criterion(words: &[GrayWord], left: bool) -> bool {
    let len = words.len();
    let center = &words[2..len - 2];
    let outer = if left { &words[0..2] } else { &words[len - 2..] };
    let inner_visible = visible_set(center);
    outer.iter().any(|w| {
        let (_, (b1, b2)) = w.visible_positions();
        [b1, b2].into_iter().any(|pos| !inner_visible.contains(&pos) && center.iter().any(|c| c.bit(pos)))
    })
}

/// Result of the `n₀` search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct N0Report {
    pub radius: usize,
    pub basepoints: usize,
    pub pairs: usize,
    pub n0: usize,
    /// The pair realising the maximum.
    pub witness: Option<(String, String)>,
    pub replay_collisions: usize,
}

/// Ball of radius `< radius` around `p` in the orbital graph.
pub fn orbital_ball(d: usize, p: &TildePoint, radius: usize) -> Vec<TildePoint> {
    let mut seen = HashSet::from([p.clone()]);
    let mut frontier = vec![p.clone()];
    let mut out = vec![p.clone()];
    for _ in 1..radius {
        let mut next = Vec::new();
        for v in &frontier {
            for (_, w) in s_moves(d, v) {
                if seen.insert(w.clone()) {
                    out.push(w.clone());
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Codes of central pieces, cached per point and `n`.
#[derive(Default)]
pub struct CodeCache {
    d: usize,
    codes: HashMap<TildePoint, Vec<PieceCode>>,
}

impl CodeCache {
    pub fn new(d: usize) -> Self {
        CodeCache { d, codes: HashMap::new() }
    }

    pub fn code(&mut self, p: &TildePoint, n: usize) -> Result<PieceCode> {
        let entry = self.codes.entry(p.clone()).or_default();
        while entry.len() <= n {
            let k = entry.len();
            entry.push(gray_piece(self.d, p, k)?.code());
        }
        Ok(entry[n].clone())
    }
}

/// Least `n` separating two points by their central pieces.
pub fn separating_n(cache: &mut CodeCache, p: &TildePoint, q: &TildePoint, bound: usize) -> Result<Option<usize>> {
    for n in 0..=bound {
        if cache.code(p, n)? != cache.code(q, n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Largest separating `n` found over a basepoint's ball.
type BaseSearch = (usize, usize, Option<(String, String)>);

/// Smallest `n` such that every point at distance `< radius` from a
/// basepoint, other than the basepoint, has a central piece of length `2n+1`
/// different from the basepoint's.
pub fn find_n0(d: usize, basepoints: &[TildePoint], radius: usize, search_bound: usize) -> Result<N0Report> {
    use rayon::prelude::*;
    let per_base: Vec<Result<BaseSearch>> = basepoints
        .par_iter()
        .map(|g| {
            let mut cache = CodeCache::new(d);
            let key = g.class_key();
            let mut best = 0;
            let mut witness = None;
            let mut pairs = 0;
            for r in orbital_ball(d, g, radius) {
                if r == *g || r.class_key() != key {
                    continue;
                }
                pairs += 1;
                match separating_n(&mut cache, g, &r, search_bound)? {
                    Some(n) => {
                        if n > best {
                            best = n;
                            witness = Some((g.to_string(), r.to_string()));
                        }
                    }
                    None => {
                        return Err(Error::Diagnostic(format!(
                            "no n <= {search_bound} separates {g} and {r}"
                        )))
                    }
                }
            }
            Ok((best, pairs, witness))
        })
        .collect();
    let mut n0 = 0;
    let mut pairs = 0;
    let mut witness = None;
    for res in per_base {
        let (b, p, w) = res?;
        pairs += p;
        if b > n0 || witness.is_none() && w.is_some() && b == n0 {
            n0 = b;
            witness = w;
        }
    }
    let replay_collisions = replay_n0(d, basepoints, radius, n0)?;
    Ok(N0Report { radius, basepoints: basepoints.len(), pairs, n0, witness, replay_collisions })
}

/// Recomputes, without the cache, the points at distance `< radius` from a
/// basepoint whose central piece of length `2n+1` has the basepoint's code.
pub fn replay_n0(d: usize, basepoints: &[TildePoint], radius: usize, n: usize) -> Result<usize> {
    use rayon::prelude::*;
    let counts: Vec<Result<usize>> = basepoints
        .par_iter()
        .map(|g| {
            // Points with different loop labels already differ at n = 0.
            let key = g.class_key();
            let own = gray_piece(d, g, n)?.code().digest();
            let mut hits = 0;
            for r in orbital_ball(d, g, radius).into_iter().filter(|r| r != g && r.class_key() == key) {
                if gray_piece(d, &r, n)?.code().digest() == own {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .collect();
    counts.into_iter().sum()
}

/// Points of `piece`'s fibre enumerated directly: every point differing from
/// the basepoint only in positions visible somewhere over the segment and
/// projecting into it.
pub fn visibility_enumeration(d: usize, p: &TildePoint, n: usize) -> Vec<TildePoint> {
    let seg = GraySegment::centered(&p.gray(), n);
    let mut positions: Vec<Position> = visible_set(seg.words()).into_iter().collect();
    positions.sort();
    let mut out = Vec::new();
    let mut current = vec![0 as Letter; positions.len()];
    let has_omega = positions.iter().any(|q| !matches!(q, Position::Finite(_)));
    if has_omega && !p.is_zero_pair() {
        positions.retain(|q| matches!(q, Position::Finite(_)));
        current.truncate(positions.len());
    }
    loop {
        let changes: Vec<(Position, Letter)> = positions.iter().copied().zip(current.iter().copied()).collect();
        let ok_omega = changes.iter().all(|&(pos, x)| pos != Position::Omega || x != 0);
        if ok_omega {
            let q = p.with_letters(&changes);
            if seg.line_index(&q.gray()).is_some() {
                out.push(q);
            }
        }
        let mut i = 0;
        loop {
            if i == current.len() {
                return out;
            }
            current[i] += 1;
            if (current[i] as usize) < d {
                break;
            }
            current[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> TildePoint {
        TildePoint::parse(5, s).unwrap()
    }

    #[test]
    fn small_levels_are_connected() {
        let gens = GeneratingSet::standard(5).unwrap();
        for n in 1..=3 {
            let g = level_graph(&gens, n, DEFAULT_MAX_LEVEL).unwrap();
            assert_eq!(g.vertex_count(), 5usize.pow(n as u32));
            assert!(g.is_connected());
        }
        assert!(level_graph(&gens, 7, DEFAULT_MAX_LEVEL).is_err());
    }

    #[test]
    fn zero_piece_is_a_fibre_component() {
        let p = pt("1|(3)");
        let piece = gray_piece(5, &p, 0).unwrap();
        assert!(piece.vertices().iter().all(|q| q.gray() == p.gray()));
        assert_eq!(piece.basepoint(), &p);
    }

    #[test]
    fn piece_matches_visibility_enumeration() {
        for s in ["1|(3)", "0|(13)", "20|0*[31]", "|0*[10]", "004|(1)"] {
            let p = pt(s);
            for n in 0..=4 {
                let piece = gray_piece(5, &p, n).unwrap();
                let mut a: Vec<_> = piece.vertices().to_vec();
                let mut b = visibility_enumeration(5, &p, n);
                a.sort();
                b.sort();
                assert_eq!(a, b, "{s} n={n}");
            }
        }
    }

    #[test]
    fn edges_follow_line_types() {
        let piece = gray_piece(5, &pt("0|(13)"), 3).unwrap();
        for v in 0..piece.len() {
            for (label, w) in piece.edges(v) {
                let (i, j) = (piece.projection(v), piece.projection(*w));
                assert!((i - j).abs() <= 1);
                if i != j {
                    let t = crate::boundary::edge_type_between(i.min(j));
                    assert_eq!(label.is_a(), t == crate::boundary::EdgeType::A);
                }
            }
        }
    }

    #[test]
    fn restriction_agrees_with_direct_construction() {
        let p = pt("02|(301)");
        let big = gray_piece(5, &p, 5).unwrap();
        let direct = piece_window(5, &p, 5, 3).unwrap();
        assert_eq!(big.restrict(5, 3).code(), direct.code());
        let (l, r, c) = big.marginals().unwrap();
        assert_eq!(l.code(), piece_window(5, &p, 5, 3).unwrap().code());
        assert_eq!(r.code(), piece_window(5, &p, 3, 5).unwrap().code());
        assert_eq!(c.code(), gray_piece(5, &p, 3).unwrap().code());
    }

    #[test]
    fn codes_see_loop_labels() {
        let a = gray_piece(5, &pt("1|(3)"), 2).unwrap();
        let b = gray_piece(5, &pt("2|(3)"), 2).unwrap();
        assert_ne!(a.code(), b.code());
        assert_eq!(a.code(), a.code_from(0));
    }

    #[test]
    fn marginals_need_length_five() {
        assert!(gray_piece(5, &pt("1|(3)"), 1).unwrap().marginals().is_err());
    }
}
