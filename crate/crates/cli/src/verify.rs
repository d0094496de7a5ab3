//! Verification suites behind `mother verify`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use mothergroup::boundary::{random_point, sample_corpus};
use mothergroup::bratteli::Diagram;
use mothergroup::full_group::{
    brieussel_witness, commutator_trick_check, convenient_pairs, fixing_letters, sample_pairs,
    separation_search, ConvenientTriplet,
};
use mothergroup::schreier::{find_n0, gray_piece};
use mothergroup::{GeneratingSet, GroupWord, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Marginals,
    Commutator,
    BoundedType,
    Regularity,
    N0,
    Subshift,
    Brieussel,
    All,
}

impl Suite {
    pub fn each() -> [Suite; 7] {
        use Suite::*;
        [Marginals, Commutator, BoundedType, Regularity, N0, Subshift, Brieussel]
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Marginals => "marginals",
            Suite::Commutator => "commutator",
            Suite::BoundedType => "bounded-type",
            Suite::Regularity => "regularity",
            Suite::N0 => "n0",
            Suite::Subshift => "subshift",
            Suite::Brieussel => "brieussel",
            Suite::All => "all",
        }
    }

    /// The statement the suite checks.
    pub fn property(self) -> &'static str {
        match self {
            Suite::Marginals => "the codes of the two marginals determine the code of a central piece",
            Suite::Commutator => "[η(U_r,t,t'), η(U_l,s',s)^-1] = η(U,s,t) for convenient triplets",
            Suite::BoundedType => "each generator is a prefix exchange off a uniformly bounded number of cylinders per tower",
            Suite::Regularity => "an element fixing a point fixes a cylinder around it",
            Suite::N0 => "central pieces of length 2n0+1 separate a point from its same-class neighbours at distance < R",
            Suite::Subshift => "distinct points are moved into different loop-label classes by some group element",
            Suite::Brieussel => "every (s, e, .., e; id) with s in S0 is realised by a group word",
            Suite::All => "all of the above",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub d: usize,
    pub seed: u64,
    pub depth: usize,
    pub pieces: usize,
    pub samples: usize,
    pub radius: usize,
    pub n0: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub property: &'static str,
    pub passed: bool,
    pub summary: Value,
}

pub fn run(suite: Suite, p: &Params) -> Result<SuiteResult> {
    let (passed, summary) = match suite {
        Suite::Marginals => marginals(p)?,
        Suite::Commutator => commutator(p)?,
        Suite::BoundedType => bounded_type(p)?,
        Suite::Regularity => regularity(p)?,
        Suite::N0 => n0(p)?,
        Suite::Subshift => subshift(p)?,
        Suite::Brieussel => brieussel(p)?,
        Suite::All => unreachable!("expanded by the caller"),
    };
    Ok(SuiteResult { suite: suite.name(), property: suite.property(), passed, summary })
}

fn marginals(p: &Params) -> Result<(bool, Value)> {
    let ns: Vec<usize> = (2..=p.depth.max(2)).collect();
    let points = p.pieces.div_ceil(ns.len());
    let corpus = sample_corpus(p.d, points, p.seed);
    let triples: Vec<_> = corpus
        .par_iter()
        .map(|g| {
            ns.iter()
                .map(|&n| {
                    let piece = gray_piece(p.d, g, n)?;
                    let (l, r, _) = piece.marginals()?;
                    Ok(((l.code().digest(), r.code().digest()), piece.code().digest()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut map = HashMap::new();
    let mut violations = 0;
    let mut count = 0;
    for (key, value) in triples.into_iter().flatten() {
        count += 1;
        if *map.entry(key).or_insert(value) != value {
            violations += 1;
        }
    }
    Ok((violations == 0, json!({ "pieces": count, "marginal_pairs": map.len(), "violations": violations })))
}

fn resolve_n0(p: &Params) -> Result<usize> {
    match p.n0 {
        Some(n) => Ok(n),
        None => Ok(find_n0(p.d, &sample_corpus(p.d, 40, p.seed ^ 1), p.radius, 20)?.n0),
    }
}

fn commutator(p: &Params) -> Result<(bool, Value)> {
    let n0 = resolve_n0(p)?.max(2);
    let stilde = GeneratingSet::standard(p.d)?.squared();
    let corpus = sample_corpus(p.d, 4 * p.samples, p.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut triplets = Vec::new();
    for n in [n0, n0 + 1] {
        let mut picked = 0;
        for g in &corpus {
            if picked == p.samples {
                break;
            }
            let pairs = convenient_pairs(g, &stilde);
            if !pairs.is_empty() {
                let (s, t) = pairs[rng.gen_range(0..pairs.len())];
                triplets.push(ConvenientTriplet { gamma: g.clone(), n, s, t });
                picked += 1;
            }
        }
    }
    let reports = triplets
        .par_iter()
        .map(|tr| commutator_trick_check(p.d, tr, &stilde))
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<_> = reports.iter().filter(|r| !r.ok()).collect();
    Ok((
        failures.is_empty() && !reports.is_empty(),
        json!({ "n0": n0, "triplets": reports.len(), "failures": failures }),
    ))
}

fn bounded_type(p: &Params) -> Result<(bool, Value)> {
    let gs = GeneratingSet::standard(p.d)?;
    let dg = Diagram::new(p.d)?;
    let mut ok = true;
    let mut per_gen = Vec::new();
    for (i, g) in gs.generators.iter().enumerate() {
        let rep = dg.bounded_type_audit(&gs.word(i), p.depth);
        let tail: Vec<usize> = rep.per_level.iter().filter(|c| c.level >= 3).map(|c| c.max_per_tower).collect();
        let constant = tail.windows(2).all(|w| w[0] == w[1]);
        let zero_pair = rep.exceptional_points.iter().all(|s| s.contains('['));
        ok &= constant && zero_pair;
        per_gen.push(json!({ "generator": g.name, "bound": rep.bound, "constant_from_level_3": constant,
            "exceptional_points": rep.exceptional_points }));
    }
    Ok((ok, json!({ "levels": p.depth, "generators": per_gen })))
}

fn regularity(p: &Params) -> Result<(bool, Value)> {
    let gs = GeneratingSet::standard(p.d)?;
    let dg = Diagram::new(p.d)?;
    let sym: Vec<GroupWord> = gs.symmetric().into_iter().map(|g| GroupWord::from_generator(p.d, g.generator)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut pairs = Vec::with_capacity(p.samples);
    for _ in 0..p.samples {
        let pt = random_point(&mut rng, p.d, 0.3);
        let mut h = GroupWord::identity(p.d);
        for _ in 0..rng.gen_range(0..=3) {
            h = sym[rng.gen_range(0..sym.len())].mul(&h);
        }
        let ks = fixing_letters(p.d, &pt.act(&h));
        let k = GroupWord::from_generator(p.d, ks[rng.gen_range(0..ks.len())].clone());
        pairs.push((h.inverse().mul(&k).mul(&h), pt));
    }
    let depths = pairs
        .par_iter()
        .map(|(g, pt)| {
            let bound = g.contraction_depth();
            dg.regularity_check(g, pt, bound).map(|w| (w.depth, bound))
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = depths.iter().all(|(w, b)| w <= b);
    let deepest = depths.iter().map(|x| x.0).max().unwrap_or(0);
    Ok((ok, json!({ "pairs": depths.len(), "deepest_witness": deepest })))
}

fn n0(p: &Params) -> Result<(bool, Value)> {
    let rep = find_n0(p.d, &sample_corpus(p.d, p.samples, p.seed), p.radius, 20)?;
    Ok((rep.replay_collisions == 0, serde_json::to_value(&rep).expect("serializable")))
}

fn subshift(p: &Params) -> Result<(bool, Value)> {
    let pairs = sample_pairs(p.d, p.samples, 5, p.seed);
    let seps = pairs.par_iter().map(|(a, b)| separation_search(p.d, a, b, 12)).collect::<Result<Vec<_>>>()?;
    let longest = seps.iter().map(|s| s.length).max().unwrap_or(0);
    Ok((true, json!({ "pairs": seps.len(), "longest_word": longest })))
}

fn brieussel(p: &Params) -> Result<(bool, Value)> {
    let gs = GeneratingSet::standard(p.d)?;
    let ws = gs
        .generators
        .iter()
        .map(|g| brieussel_witness(p.d, &g.name, &g.generator))
        .collect::<Result<Vec<_>>>()?;
    let ok = ws.iter().all(|w| w.verified && w.length <= 10);
    Ok((ok, serde_json::to_value(&ws).expect("serializable")))
}
