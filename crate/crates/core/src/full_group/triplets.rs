//! Convenient admissible triplets, the commutator identity between them,
//! and the finite set `T` of `η` elements over cylinders of length `2n₀+1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{check_admissible, eta, gray_cylinder, PiecewiseElement};
use crate::bratteli::{ClopenSet, Diagram};
use crate::boundary::{GraySegment, GrayWord, TildePoint};
use crate::error::{Error, Result};
use crate::schreier::{gray_piece, GrayPiece};
use crate::word::GroupWord;

/// Named elements of `S̃`.
pub type STilde = [(String, GroupWord)];

/// `(U, s, t)` with `U = C_{I,γ}` the central cylinder of length `2n+1`.
#[derive(Clone, Debug)]
pub struct ConvenientTriplet {
    pub gamma: TildePoint,
    pub n: usize,
    pub s: usize,
    pub t: usize,
}

/// Pairs `(s, t)` of indices into `S̃` such that `s⁻¹γ` and `tγ` project to
/// the two Gray-line neighbours of `γ`.
pub fn convenient_pairs(gamma: &TildePoint, stilde: &STilde) -> Vec<(usize, usize)> {
    let seg = GraySegment::centered(&gamma.gray(), 1);
    let side = |q: &TildePoint| seg.line_index(&q.gray()).filter(|&i| i != 0);
    let lefts: Vec<(usize, i64)> =
        stilde.iter().enumerate().filter_map(|(i, (_, s))| side(&gamma.act(&s.inverse())).map(|k| (i, k))).collect();
    let rights: Vec<(usize, i64)> =
        stilde.iter().enumerate().filter_map(|(i, (_, t))| side(&gamma.act(t)).map(|k| (i, k))).collect();
    let mut out = Vec::new();
    for &(i, ki) in &lefts {
        for &(j, kj) in &rights {
            if ki == -kj {
                out.push((i, j));
            }
        }
    }
    out
}

/// Elements `u ∈ S̃` (as indices) with `q' = u⁻¹q` (or `uq` when
/// `inverse` is false) projecting to the Gray neighbour of `q` other than
/// `avoid`.
fn far_side(q: &TildePoint, avoid: &GrayWord, stilde: &STilde, inverse: bool) -> Vec<usize> {
    let (a, b) = q.gray().neighbors();
    let target = if &a == avoid { b } else { a };
    stilde
        .iter()
        .enumerate()
        .filter(|(_, (_, u))| {
            let img = if inverse { q.act(&u.inverse()) } else { q.act(u) };
            img.gray() == target
        })
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub gamma: String,
    pub n: usize,
    pub s: String,
    pub t: String,
    pub s_prime: String,
    pub t_prime: String,
    /// `s'` and `t'` make the smaller triplets convenient too.
    pub convenient_primes: bool,
    /// `C_{I,γ} = C_{I_l,γ} ∩ C_{I_r,γ}`.
    pub marginal_identity: bool,
    /// `s(U_l) ∩ t⁻¹(U_r) = U`.
    pub intersection_identity: bool,
    /// Disjointness of the six sets other than the pair meeting in `U`.
    pub premise: bool,
    pub holds: bool,
}

impl CommutatorReport {
    pub fn ok(&self) -> bool {
        self.marginal_identity && self.intersection_identity && self.premise && self.holds
    }
}

/// Picks `u` admissible for `(W, ·, ·)`, preferring the convenient choices.
fn pick_prime(
    dg: &Diagram,
    preferred: &[usize],
    stilde: &STilde,
    admissible: impl Fn(&GroupWord) -> bool,
) -> Option<(usize, bool)> {
    for &i in preferred {
        if admissible(&stilde[i].1) {
            return Some((i, true));
        }
    }
    let _ = dg;
    (0..stilde.len()).find(|&i| !preferred.contains(&i) && admissible(&stilde[i].1)).map(|i| (i, false))
}

/// Builds both sides of `[η_{U_r,t,t'}, η⁻¹_{U_l,s',s}] = η_{U,s,t}` and
/// compares them.
pub fn commutator_trick_check(d: usize, tr: &ConvenientTriplet, stilde: &STilde) -> Result<CommutatorReport> {
    let dg = Diagram::new(d)?;
    let n = tr.n;
    if n < 2 {
        return Err(Error::Input("the commutator identity needs n >= 2".into()));
    }
    let (s_name, s) = &stilde[tr.s];
    let (t_name, t) = &stilde[tr.t];
    let gamma = &tr.gamma;
    let u = gray_cylinder(d, gamma, n, n)?;
    check_admissible(&dg, &u, s, t)?;
    let gl = gamma.act(&s.inverse());
    let gr = gamma.act(t);
    let u_l = gray_cylinder(d, &gl, n - 1, n - 1)?;
    let u_r = gray_cylinder(d, &gr, n - 1, n - 1)?;

    let marginal_identity =
        gray_cylinder(d, gamma, n, n - 2)?.intersect(&dg, &gray_cylinder(d, gamma, n - 2, n)?) == u;
    let s_ul = u_l.image(&dg, s);
    let tinv_ur = u_r.image(&dg, &t.inverse());
    let intersection_identity = s_ul.intersect(&dg, &tinv_ur) == u;

    let g_bar = gamma.gray();
    let admissible = |w: &ClopenSet, g: &GroupWord, h: &GroupWord| check_admissible(&dg, w, g, h).is_ok();
    let (sp, conv_s) = pick_prime(&dg, &far_side(&gl, &g_bar, stilde, true), stilde, |sp| admissible(&u_l, sp, s))
        .ok_or_else(|| Error::Diagnostic(format!("no admissible s' for {gamma}")))?;
    let (tp, conv_t) = pick_prime(&dg, &far_side(&gr, &g_bar, stilde, false), stilde, |tp| admissible(&u_r, t, tp))
        .ok_or_else(|| Error::Diagnostic(format!("no admissible t' for {gamma}")))?;
    let s_prime = &stilde[sp].1;
    let t_prime = &stilde[tp].1;

    let six = [
        u_l.image(&dg, &s_prime.inverse()),
        u_l.clone(),
        s_ul.clone(),
        tinv_ur.clone(),
        u_r.clone(),
        u_r.image(&dg, t_prime),
    ];
    let mut premise = true;
    for i in 0..6 {
        for j in i + 1..6 {
            if (i, j) != (2, 3) && !six[i].is_disjoint(&dg, &six[j]) {
                premise = false;
            }
        }
    }

    let lhs = eta(d, &u_r, t, t_prime)?.commutator(&eta(d, &u_l, s_prime, s)?.inverse());
    let rhs = eta(d, &u, s, t)?;
    Ok(CommutatorReport {
        gamma: gamma.to_string(),
        n,
        s: s_name.clone(),
        t: t_name.clone(),
        s_prime: stilde[sp].0.clone(),
        t_prime: stilde[tp].0.clone(),
        convenient_primes: conv_s && conv_t,
        marginal_identity,
        intersection_identity,
        premise,
        holds: lhs.equals(&rhs),
    })
}

/// An `η_{V,s,t}` up to equality: the class of the central piece of `V`
/// (as a code digest) and the piece vertices `s⁻¹γ` and `tγ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TKey {
    pub class: [u8; 32],
    pub left: usize,
    pub right: usize,
}

impl TKey {
    pub fn inverse(&self) -> TKey {
        TKey { class: self.class, left: self.right, right: self.left }
    }
}

fn t_key(d: usize, gamma: &TildePoint, n: usize, s: &GroupWord, t: &GroupWord) -> Result<TKey> {
    let piece = gray_piece(d, gamma, n)?;
    t_key_in(&piece, &piece.code().digest(), gamma, s, t)
}

fn t_key_in(piece: &GrayPiece, class: &[u8; 32], gamma: &TildePoint, s: &GroupWord, t: &GroupWord) -> Result<TKey> {
    let idx = |q: &TildePoint| {
        piece.vertex_id(q).ok_or_else(|| Error::Diagnostic(format!("{q} left the piece around {gamma}")))
    };
    Ok(TKey { class: *class, left: idx(&gamma.act(&s.inverse()))?, right: idx(&gamma.act(t))? })
}

/// The generating set `T` restricted to the classes met by a corpus.
#[derive(Clone, Debug)]
pub struct GeneratingSetT {
    pub n0: usize,
    pub classes: usize,
    /// One realising triplet per element.
    pub members: BTreeMap<TKey, ConvenientTriplet>,
}

impl GeneratingSetT {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, key: &TKey) -> bool {
        self.members.contains_key(key)
    }

    pub fn is_inverse_closed(&self) -> bool {
        self.members.keys().all(|k| self.members.contains_key(&k.inverse()))
    }

    pub fn element(&self, d: usize, key: &TKey, stilde: &STilde) -> Result<PiecewiseElement> {
        let tr = &self.members[key];
        let u = gray_cylinder(d, &tr.gamma, tr.n, tr.n)?;
        eta(d, &u, &stilde[tr.s].1, &stilde[tr.t].1)
    }
}

/// Collects `η_{V,s,t}` over convenient triplets whose cylinder has length
/// `2n₀+1` and is the class of a corpus point.
pub fn generating_set_t(d: usize, n0: usize, corpus: &[TildePoint], stilde: &STilde) -> Result<GeneratingSetT> {
    let mut members = BTreeMap::new();
    let mut classes = BTreeSet::new();
    for gamma in corpus {
        let piece = gray_piece(d, gamma, n0)?;
        let class = piece.code().digest();
        if !classes.insert(class) {
            continue;
        }
        for (s, t) in convenient_pairs(gamma, stilde) {
            let key = t_key_in(&piece, &class, gamma, &stilde[s].1, &stilde[t].1)?;
            members.entry(key).or_insert(ConvenientTriplet { gamma: gamma.clone(), n: n0, s, t });
        }
    }
    Ok(GeneratingSetT { n0, classes: classes.len(), members })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplayReport {
    pub gamma: String,
    pub n: usize,
    pub leaves: usize,
    /// Leaves whose key was already collected in the corpus `T`.
    pub leaves_in_corpus_t: usize,
    pub holds: bool,
}

/// Rebuilds `η_{U,s,t}` at length `2n+1` from elements at length `2n₀+1` by
/// nesting the commutator identity, and compares with the direct element.
pub fn replay_from_t(
    d: usize,
    tr: &ConvenientTriplet,
    n0: usize,
    stilde: &STilde,
    t_set: &GeneratingSetT,
) -> Result<ReplayReport> {
    let mut leaves = 0;
    let mut known = 0;
    let built = build_recursive(d, &tr.gamma, tr.n, tr.s, tr.t, n0, stilde, t_set, &mut leaves, &mut known)?;
    let direct = eta(d, &gray_cylinder(d, &tr.gamma, tr.n, tr.n)?, &stilde[tr.s].1, &stilde[tr.t].1)?;
    Ok(ReplayReport { gamma: tr.gamma.to_string(), n: tr.n, leaves, leaves_in_corpus_t: known, holds: built.equals(&direct) })
}

#[allow(clippy::too_many_arguments)]
fn build_recursive(
    d: usize,
    gamma: &TildePoint,
    n: usize,
    s: usize,
    t: usize,
    n0: usize,
    stilde: &STilde,
    t_set: &GeneratingSetT,
    leaves: &mut usize,
    known: &mut usize,
) -> Result<PiecewiseElement> {
    let (sw, tw) = (&stilde[s].1, &stilde[t].1);
    if n <= n0 {
        *leaves += 1;
        if t_set.contains(&t_key(d, gamma, n, sw, tw)?) {
            *known += 1;
        }
        return eta(d, &gray_cylinder(d, gamma, n, n)?, sw, tw);
    }
    let g_bar = gamma.gray();
    let gl = gamma.act(&sw.inverse());
    let gr = gamma.act(tw);
    let dg = Diagram::new(d)?;
    let u_l = gray_cylinder(d, &gl, n - 1, n - 1)?;
    let u_r = gray_cylinder(d, &gr, n - 1, n - 1)?;
    let sp = far_side(&gl, &g_bar, stilde, true)
        .into_iter()
        .find(|&i| check_admissible(&dg, &u_l, &stilde[i].1, sw).is_ok())
        .ok_or_else(|| Error::Diagnostic(format!("no convenient s' at {gl}")))?;
    let tp = far_side(&gr, &g_bar, stilde, false)
        .into_iter()
        .find(|&i| check_admissible(&dg, &u_r, tw, &stilde[i].1).is_ok())
        .ok_or_else(|| Error::Diagnostic(format!("no convenient t' at {gr}")))?;
    let right = build_recursive(d, &gr, n - 1, t, tp, n0, stilde, t_set, leaves, known)?;
    let left = build_recursive(d, &gl, n - 1, sp, s, n0, stilde, t_set, leaves, known)?;
    Ok(right.commutator(&left.inverse()))
}
