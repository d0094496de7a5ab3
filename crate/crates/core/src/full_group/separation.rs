//! Separating points by group elements: the loop-label partition, the
//! prefix-steering search, stabilizer witnesses and finite-depth wreath
//! witnesses.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{random_point, Position, TildePoint};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::perm::{Letter, Permutation};
use crate::schreier::{s_moves, Label};
use crate::word::GroupWord;

/// Upper bound on visited states in the move searches.
const SEARCH_CAP: usize = 400_000;

/// Loop-label class of `p`: the elements of `S` fixing `p` are exactly
/// those fixing its first letter and its `B`-visible pair, so the triple
/// `(first letter, visible pair)` names the class.
pub fn loop_class(p: &TildePoint) -> (Letter, Letter, Letter) {
    p.class_key()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubshiftClass {
    pub key: (Letter, Letter, Letter),
    pub representative: String,
}

/// All loop-label classes. Each is clopen: membership is read off the
/// first letter and the first non-zero pair.
pub fn subshift_partition(d: usize) -> Vec<SubshiftClass> {
    let mut out = Vec::new();
    for x in 0..d as Letter {
        for a in 1..d as Letter {
            if x != 0 && a != x {
                continue;
            }
            for b in 0..d as Letter {
                let prefix = if x == 0 { vec![0, a, b] } else { vec![a, b] };
                let rep = TildePoint::canonical(prefix, crate::boundary::Tail::Periodic(vec![1]));
                debug_assert_eq!(rep.class_key(), (x, a, b));
                out.push(SubshiftClass { key: (x, a, b), representative: rep.to_string() });
            }
        }
    }
    out
}

/// A single letter of `S` realising the coordinate move `label` at `p`,
/// acting trivially past the moved coordinates.
pub fn move_generator(d: usize, p: &TildePoint, label: &Label) -> Generator {
    match *label {
        Label::A { from, to } => {
            Generator::a(Permutation::even_mapping(d, from, to, &[]).expect("d >= 5")).expect("even")
        }
        Label::B { from: (a, b), to: (a2, b2) } => {
            let rho = Permutation::even_mapping(d, a, a2, &[0]).expect("d >= 5");
            let mut sigmas = vec![Permutation::identity(d); d - 1];
            sigmas[a as usize - 1] = Permutation::even_mapping(d, b, b2, &[]).expect("d >= 5");
            let g = Generator::b(rho, sigmas).expect("even");
            debug_assert_eq!(p.act(&GroupWord::from_generator(d, g.clone())).class_key().1, a2);
            g
        }
    }
}

/// BFS over words in single-letter coordinate moves of `p`, applied to both
/// points, until `goal` holds. Returns the word (rightmost letter first).
fn move_search(
    d: usize,
    p: &TildePoint,
    q: &TildePoint,
    max_len: usize,
    goal: impl Fn(&TildePoint, &TildePoint) -> bool,
) -> Result<Option<GroupWord>> {
    let mut seen: HashSet<(TildePoint, TildePoint)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((p.clone(), q.clone()));
    queue.push_back((p.clone(), q.clone(), Vec::<Generator>::new()));
    while let Some((gp, gq, word)) = queue.pop_front() {
        if goal(&gp, &gq) {
            let letters = word.into_iter().rev().collect();
            return Ok(Some(GroupWord::new(d, letters)?));
        }
        if word.len() == max_len {
            continue;
        }
        for (label, next_p) in s_moves(d, &gp) {
            let g = move_generator(d, &gp, &label);
            let gw = GroupWord::from_generator(d, g.clone());
            let next_q = gq.act(&gw);
            if seen.insert((next_p.clone(), next_q.clone())) {
                if seen.len() > SEARCH_CAP {
                    return Err(Error::Resource(format!("move search from {p} exceeded {SEARCH_CAP} states")));
                }
                let mut w = word.clone();
                w.push(g);
                queue.push_back((next_p, next_q, w));
            }
        }
    }
    Ok(None)
}

/// First position where `p` and `q` differ.
pub fn first_difference(p: &TildePoint, q: &TildePoint) -> Option<Position> {
    if p == q {
        return None;
    }
    let bound = p.prefix().len().max(q.prefix().len()) + 12;
    for pos in 1..=bound {
        if p.letter(pos) != q.letter(pos) {
            return Some(Position::Finite(pos));
        }
    }
    [Position::Omega, Position::OmegaPlusOne].into_iter().find(|&pos| p.letter_at(pos) != q.letter_at(pos))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Separation {
    pub p: String,
    pub q: String,
    pub first_difference: Option<String>,
    pub word: String,
    pub length: usize,
}

/// Finds `g` with `g·p` and `g·q` in different loop-label classes by moving
/// the common prefix until the first difference becomes visible.
pub fn separation_search(d: usize, p: &TildePoint, q: &TildePoint, max_len: usize) -> Result<Separation> {
    let r = first_difference(p, q).ok_or_else(|| Error::Input("points are equal".into()))?;
    let g = move_search(d, p, q, max_len, |a, b| loop_class(a) != loop_class(b))?
        .ok_or_else(|| Error::Diagnostic(format!("no separating word of length <= {max_len} for {p} / {q}")))?;
    debug_assert_ne!(loop_class(&p.act(&g)), loop_class(&q.act(&g)));
    Ok(Separation {
        p: p.to_string(),
        q: q.to_string(),
        first_difference: Some(r.to_string()),
        length: g.len(),
        word: g.to_string(),
    })
}

/// Letters of `S` that are a single 3-cycle in one slot: the `A` root, the
/// `B` root `ρ`, or one `σ_i`.
pub fn three_cycle_letters(d: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    let cycles = Permutation::alternating_group(d)
        .into_iter()
        .filter(|c| c.images().iter().enumerate().filter(|(i, &x)| *i != x as usize).count() == 3);
    for c in cycles {
        out.push(Generator::a(c.clone()).expect("even"));
        if c.apply(0) == 0 {
            out.push(Generator::b(c.clone(), vec![Permutation::identity(d); d - 1]).expect("even"));
        }
        for i in 1..d {
            let mut sigmas = vec![Permutation::identity(d); d - 1];
            sigmas[i - 1] = c.clone();
            out.push(Generator::b(Permutation::identity(d), sigmas).expect("even"));
        }
    }
    out
}

/// The 3-cycle letters fixing `p`.
pub fn fixing_letters(d: usize, p: &TildePoint) -> Vec<Generator> {
    three_cycle_letters(d)
        .into_iter()
        .filter(|k| &p.act(&GroupWord::from_generator(d, k.clone())) == p)
        .collect()
}

/// A letter of `S` fixing `p` and moving `q`.
fn splitting_letter(d: usize, p: &TildePoint, q: &TildePoint) -> Option<Generator> {
    fixing_letters(d, p).into_iter().find(|k| &q.act(&GroupWord::from_generator(d, k.clone())) != q)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerWitness {
    pub p: String,
    pub q: String,
    pub word: String,
    pub length: usize,
}

/// `g = h⁻¹ k h` with `g·p = p` and `g·q ≠ q`, where `h` makes the loop
/// classes differ and `k ∈ S` fixes `h·p` but not `h·q`.
pub fn stabilizer_separation(d: usize, p: &TildePoint, q: &TildePoint, radius: usize) -> Result<StabilizerWitness> {
    if p == q {
        return Err(Error::Input("points are equal".into()));
    }
    let h_len = radius.saturating_sub(1) / 2;
    let h = move_search(d, p, q, h_len, |a, b| loop_class(a) != loop_class(b))?
        .ok_or_else(|| Error::Diagnostic(format!("no class-splitting word of length <= {h_len} for {p} / {q}")))?;
    let (hp, hq) = (p.act(&h), q.act(&h));
    let k = splitting_letter(d, &hp, &hq)
        .ok_or_else(|| Error::Diagnostic(format!("no letter fixing {hp} and moving {hq}")))?;
    let g = h.inverse().mul(&GroupWord::from_generator(d, k)).mul(&h);
    if &p.act(&g) != p || &q.act(&g) == q {
        return Err(Error::Diagnostic(format!("witness {g} failed for {p} / {q}")));
    }
    Ok(StabilizerWitness { p: p.to_string(), q: q.to_string(), length: g.len(), word: g.to_string() })
}

/// Pairs of distinct points, half of them agreeing on a random prefix of
/// length `< max_r` and differing at the next letter.
pub fn sample_pairs(d: usize, count: usize, max_r: usize, seed: u64) -> Vec<(TildePoint, TildePoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = random_point(&mut rng, d, 0.2);
        let q = if out.len() % 2 == 0 {
            let r = rng.gen_range(1..=max_r);
            let old = p.letter(r);
            let new = (old + rng.gen_range(1..d as Letter)) % d as Letter;
            p.with_letters(&[(Position::Finite(r), new)])
        } else {
            random_point(&mut rng, d, 0.2)
        };
        if p != q {
            out.push((p, q));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BrieusselWitness {
    pub target: String,
    pub word: String,
    pub length: usize,
    /// Every coordinate of the decomposition compared equal by contraction.
    pub verified: bool,
}

/// `π1, π2` even with `π1 π2 π1⁻¹ π2⁻¹ = π`.
fn as_commutator(d: usize, pi: &Permutation) -> Option<(Permutation, Permutation)> {
    let alt = Permutation::alternating_group(d);
    for p1 in &alt {
        for p2 in &alt {
            if &p1.compose(p2).compose(&p1.inverse()).compose(&p2.inverse()) == pi {
                return Some((p1.clone(), p2.clone()));
            }
        }
    }
    None
}

/// An element with decomposition `(e, .., π at j, .., e; id)` as a
/// commutator of two conjugated `B` letters.
fn single_section(d: usize, j: Letter, pi: &Permutation) -> Result<GroupWord> {
    if pi.is_identity() {
        return Ok(GroupWord::identity(d));
    }
    let (p1, p2) = as_commutator(d, pi).ok_or_else(|| Error::Diagnostic(format!("{pi} is not a commutator")))?;
    let spots: Vec<Letter> = (1..d as Letter).filter(|&x| x != j).collect();
    let conj = |pj: &Permutation, away: Letter| -> Result<GroupWord> {
        let mut sigmas = vec![Permutation::identity(d); d - 1];
        sigmas[0] = pj.clone();
        let beta = GroupWord::from_generator(d, Generator::b(Permutation::identity(d), sigmas)?);
        // alpha: 1 -> j, 0 -> away
        let alpha = Permutation::alternating_group(d)
            .into_iter()
            .find(|a| a.apply(1) == j && a.apply(0) == away)
            .ok_or_else(|| Error::Diagnostic("no conjugating letter".into()))?;
        let alpha = GroupWord::from_generator(d, Generator::a(alpha)?);
        Ok(alpha.mul(&beta).mul(&alpha.inverse()))
    };
    let x = conj(&p1, spots[0])?;
    let y = conj(&p2, spots[1])?;
    Ok(x.commutator(&y))
}

/// Finds `w` with `wreath_decompose(w) = (s, e, .., e; id)`.
pub fn brieussel_witness(d: usize, name: &str, s: &Generator) -> Result<BrieusselWitness> {
    let sw = GroupWord::from_generator(d, s.clone());
    let w = match s {
        Generator::Identity => GroupWord::identity(d),
        Generator::A { perm } => single_section(d, 0, perm)?,
        Generator::B { element } => {
            let mut w = GroupWord::from_generator(d, Generator::a(element.rho.inverse())?).mul(&sw);
            for x in 1..d as Letter {
                w = w.mul(&single_section(d, x, &element.sigma(x).inverse())?);
            }
            w
        }
    };
    let (sections, root) = w.wreath_decompose();
    let verified = root.is_identity()
        && sections[0].equals(&sw)
        && sections[1..].iter().all(GroupWord::is_identity);
    Ok(BrieusselWitness { target: name.to_string(), length: w.len(), word: w.to_string(), verified })
}

/// Loop classes met by the points, with multiplicities.
pub fn class_histogram(points: &[TildePoint]) -> BTreeMap<(Letter, Letter, Letter), usize> {
    let mut out = BTreeMap::new();
    for p in points {
        *out.entry(loop_class(p)).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genset::GeneratingSet;

    #[test]
    fn partition_has_one_class_per_key() {
        let classes = subshift_partition(5);
        assert_eq!(classes.len(), 40);
        for c in &classes {
            assert_eq!(loop_class(&TildePoint::parse(5, &c.representative).unwrap()), c.key);
        }
    }

    #[test]
    fn first_letter_difference_needs_no_steering() {
        let p = TildePoint::parse(5, "1|(2)").unwrap();
        let q = TildePoint::parse(5, "2|(2)").unwrap();
        assert_eq!(separation_search(5, &p, &q, 12).unwrap().length, 0);
    }

    #[test]
    fn deep_difference_is_steered() {
        let p = TildePoint::parse(5, "1234|(1)").unwrap();
        let q = TildePoint::parse(5, "1230|(1)").unwrap();
        let s = separation_search(5, &p, &q, 12).unwrap();
        let g = GroupWord::parse(5, &s.word).unwrap();
        assert_ne!(loop_class(&p.act(&g)), loop_class(&q.act(&g)));
    }

    #[test]
    fn stabilizer_witness_fixes_one_point() {
        let p = TildePoint::parse(5, "02|(31)").unwrap();
        let q = TildePoint::parse(5, "024|(31)").unwrap();
        let w = stabilizer_separation(5, &p, &q, 6).unwrap();
        let g = GroupWord::parse(5, &w.word).unwrap();
        assert_eq!(p.act(&g), p);
        assert_ne!(q.act(&g), q);
        assert!(w.length <= 6);
    }

    #[test]
    fn wreath_witnesses_for_standard_generators() {
        let gs = GeneratingSet::standard(5).unwrap();
        for g in &gs.generators {
            let w = brieussel_witness(5, &g.name, &g.generator).unwrap();
            assert!(w.verified, "{}", g.name);
            assert!(w.length <= 10, "{} has length {}", g.name, w.length);
        }
    }

    #[test]
    fn sampled_pairs_are_distinct() {
        for (p, q) in sample_pairs(5, 50, 3, 1) {
            assert!(first_difference(&p, &q).is_some());
        }
    }
}
