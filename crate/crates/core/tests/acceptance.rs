//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p mothergroup-core --test acceptance`.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mothergroup::boundary::{random_point, sample_corpus};
use mothergroup::bratteli::{Diagram, PathPrefix, Vertex};
use mothergroup::full_group::{
    brieussel_witness, build_3cycle, commutator_trick_check, convenient_pairs, eta, fixing_letters,
    generating_set_t, sample_pairs, separation_search, stabilizer_separation,
    three_cycle_as_commutator, ConvenientTriplet, ORDER_BOUND,
};
use mothergroup::schreier::{find_n0, gray_piece, level_graph};
use mothergroup::{GeneratingSet, GroupWord, Letter, Position, TildePoint};

const D: usize = 5;
const SEED: u64 = 20_240_611;

const LEVELS: std::ops::RangeInclusive<usize> = 1..=5;
const LEVEL_BUDGET: Duration = Duration::from_secs(60);

const MARGINAL_POINTS: usize = 200;
const MARGINAL_N: std::ops::RangeInclusive<usize> = 2..=6;
const MARGINAL_MIN_PIECES: usize = 1000;
const MARGINAL_BUDGET: Duration = Duration::from_secs(300);

const N0_BASEPOINTS: usize = 100;
const N0_RADIUS: usize = 8;
const N0_BOUND: usize = 20;
const N0_BUDGET: Duration = Duration::from_secs(600);

const TRIPLETS_PER_LENGTH: usize = 100;
const TRIPLET_BUDGET: Duration = Duration::from_secs(600);

const ETA_SAMPLES: usize = 50;
const THREE_CYCLES: usize = 50;

const AUDIT_LEVELS: usize = 12;
const AUDIT_STABLE_FROM: usize = 3;

const STABILIZING_PAIRS: usize = 500;

const ENCODE_DEPTH: usize = 8;
const ENCODE_SAMPLES: usize = 10_000;

const SUBSHIFT_PAIRS: usize = 200;
const SUBSHIFT_MAX_LEN: usize = 12;
const SUBSHIFT_MAX_R: usize = 5;

const WREATH_MAX_LEN: usize = 10;

const STABILIZER_PAIRS: usize = 100;
const STABILIZER_RADIUS: usize = 6;
const STABILIZER_MAX_R: usize = 3;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn level_transitivity(gs: &GeneratingSet) -> Outcome {
    let t = Instant::now();
    let mut sizes = Vec::new();
    for n in LEVELS {
        let g = level_graph(gs, n, *LEVELS.end()).expect("level graph");
        if !g.is_connected() {
            return outcome(false, format!("level {n} disconnected"));
        }
        sizes.push(g.vertex_count());
    }
    let el = t.elapsed();
    outcome(el <= LEVEL_BUDGET, format!("connected at sizes {sizes:?} in {el:.1?}"))
}

fn marginal_determinism() -> Outcome {
    let t = Instant::now();
    let corpus = sample_corpus(D, MARGINAL_POINTS, SEED);
    let mut map: HashMap<([u8; 32], [u8; 32]), [u8; 32]> = HashMap::new();
    let mut pieces = 0;
    for p in &corpus {
        for n in MARGINAL_N {
            let piece = gray_piece(D, p, n).expect("piece");
            let (l, r, _) = piece.marginals().expect("marginals");
            let key = (l.code().digest(), r.code().digest());
            let value = piece.code().digest();
            if let Some(old) = map.insert(key, value) {
                if old != value {
                    return outcome(false, format!("marginals of {p} at n = {n} map to two codes"));
                }
            }
            pieces += 1;
        }
    }
    let el = t.elapsed();
    outcome(
        pieces >= MARGINAL_MIN_PIECES && el <= MARGINAL_BUDGET,
        format!("{pieces} pieces, {} marginal pairs, single-valued, {el:.1?}", map.len()),
    )
}

fn n0_search() -> (Outcome, usize) {
    let t = Instant::now();
    let basepoints = sample_corpus(D, N0_BASEPOINTS, SEED ^ 1);
    match find_n0(D, &basepoints, N0_RADIUS, N0_BOUND) {
        Ok(rep) => {
            let el = t.elapsed();
            let ok = rep.n0 <= N0_BOUND && rep.replay_collisions == 0 && el <= N0_BUDGET;
            let detail = format!(
                "n0 = {} over {} same-class pairs, {} replay collisions, witness {:?}, {el:.1?}",
                rep.n0, rep.pairs, rep.replay_collisions, rep.witness
            );
            (outcome(ok, detail), rep.n0)
        }
        Err(e) => (outcome(false, e.to_string()), N0_BOUND),
    }
}

fn commutator_trick(n0: usize, stilde: &[(String, GroupWord)]) -> Outcome {
    let t = Instant::now();
    let n_low = n0.max(2);
    let corpus = sample_corpus(D, 4 * TRIPLETS_PER_LENGTH, SEED ^ 2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut counts = Vec::new();
    for n in [n_low, n_low + 1] {
        let mut done = 0;
        for gamma in &corpus {
            if done == TRIPLETS_PER_LENGTH {
                break;
            }
            let pairs = convenient_pairs(gamma, stilde);
            if pairs.is_empty() {
                continue;
            }
            let (s, tt) = pairs[rng.gen_range(0..pairs.len())];
            let tr = ConvenientTriplet { gamma: gamma.clone(), n, s, t: tt };
            match commutator_trick_check(D, &tr, stilde) {
                Ok(r) if r.ok() => done += 1,
                Ok(r) => return outcome(false, format!("identity fails: {r:?}")),
                Err(e) => return outcome(false, format!("{gamma} at n = {n}: {e}")),
            }
        }
        counts.push((2 * n + 1, done));
    }
    let el = t.elapsed();
    let ok = counts.iter().all(|&(_, c)| c >= TRIPLETS_PER_LENGTH) && el <= TRIPLET_BUDGET;
    outcome(ok, format!("(length, triplets) {counts:?}, all equal, {el:.1?}"))
}

fn random_cylinder(dg: &Diagram, rng: &mut ChaCha8Rng) -> PathPrefix {
    let p = random_point(rng, D, 0.2);
    dg.encode(&p, rng.gen_range(1..=3))
}

fn torsion_gadgets(n0: usize, stilde: &[(String, GroupWord)]) -> Outcome {
    let dg = Diagram::new(D).expect("diagram");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    // η over T members and over random admissible triplets on cylinders.
    let corpus = sample_corpus(D, 20, SEED ^ 5);
    let t_set = generating_set_t(D, n0.max(2), &corpus, stilde).expect("T");
    let mut etas = 0;
    for key in t_set.members.keys().take(ETA_SAMPLES) {
        let e = t_set.element(D, key, stilde).expect("T member");
        if e.order(ORDER_BOUND) != Some(3) {
            return outcome(false, "T member without order 3");
        }
        etas += 1;
    }
    let mut attempts = 0;
    let mut random_etas = 0;
    while random_etas < ETA_SAMPLES && attempts < 100 * ETA_SAMPLES {
        attempts += 1;
        let u = mothergroup::ClopenSet::cylinder(&dg, random_cylinder(&dg, &mut rng));
        let g = &stilde[rng.gen_range(0..stilde.len())].1;
        let h = &stilde[rng.gen_range(0..stilde.len())].1;
        if let Ok(e) = eta(D, &u, g, h) {
            if e.order(ORDER_BOUND) != Some(3) {
                return outcome(false, format!("η on {u} with {g}, {h} has order {:?}", e.order(ORDER_BOUND)));
            }
            random_etas += 1;
        }
    }
    let mut cycles = 0;
    attempts = 0;
    while cycles < THREE_CYCLES && attempts < 100 * THREE_CYCLES {
        attempts += 1;
        let v1 = mothergroup::ClopenSet::cylinder(&dg, random_cylinder(&dg, &mut rng));
        let g1 = &stilde[rng.gen_range(0..stilde.len())].1;
        let g2 = &stilde[rng.gen_range(0..stilde.len())].1;
        let Ok(c) = build_3cycle(D, &v1, g1, g2) else { continue };
        if c.is_identity() {
            continue;
        }
        match three_cycle_as_commutator(D, &v1, g1, g2) {
            Ok((k1, k2)) => {
                let ok = k1.order(ORDER_BOUND) == Some(2)
                    && k2.order(ORDER_BOUND) == Some(2)
                    && k1.commutator(&k2).equals(&c)
                    && c.order(ORDER_BOUND) == Some(3);
                if !ok {
                    return outcome(false, format!("bad commutator witness for 3-cycle on {v1}"));
                }
                cycles += 1;
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(
        etas >= ETA_SAMPLES.min(t_set.len()) && random_etas >= ETA_SAMPLES && cycles >= THREE_CYCLES,
        format!("{etas} T members and {random_etas} random η of order 3; {cycles} 3-cycles as [k1, k2]"),
    )
}

fn bounded_type(gs: &GeneratingSet) -> Outcome {
    let dg = Diagram::new(D).expect("diagram");
    let mut details = Vec::new();
    for (i, g) in gs.generators.iter().enumerate() {
        let w = gs.word(i);
        let rep = dg.bounded_type_audit(&w, AUDIT_LEVELS);
        let tail: Vec<usize> =
            rep.per_level.iter().filter(|c| c.level >= AUDIT_STABLE_FROM).map(|c| c.max_per_tower).collect();
        let constant = tail.windows(2).all(|p| p[0] == p[1]);
        let bounded = rep.per_level.iter().all(|c| c.max_per_tower <= rep.bound);
        let zero_pair = rep
            .exceptional_points
            .iter()
            .all(|s| TildePoint::parse(D, s).map(|p| p.is_zero_pair()).unwrap_or(false));
        let stable = dg.exceptional_points(&w, AUDIT_LEVELS / 2) == rep.exceptional_points;
        if !(constant && bounded && zero_pair && stable) {
            return outcome(false, format!("{}: per-level {:?}", g.name, rep.per_level));
        }
        details.push(format!("{}: C={} exc={}", g.name, rep.bound, rep.exceptional_points.len()));
    }
    outcome(true, details.join(", "))
}

fn regularity(gs: &GeneratingSet) -> Outcome {
    let dg = Diagram::new(D).expect("diagram");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let sym: Vec<GroupWord> =
        gs.symmetric().into_iter().map(|g| GroupWord::from_generator(D, g.generator)).collect();
    let mut found = 0;
    let mut deepest = 0;
    while found < STABILIZING_PAIRS {
        let p = random_point(&mut rng, D, 0.3);
        let mut h = GroupWord::identity(D);
        for _ in 0..rng.gen_range(0..=3) {
            h = sym[rng.gen_range(0..sym.len())].mul(&h);
        }
        let ks = fixing_letters(D, &p.act(&h));
        let k = GroupWord::from_generator(D, ks[rng.gen_range(0..ks.len())].clone());
        let g = h.inverse().mul(&k).mul(&h);
        let bound = g.contraction_depth();
        match dg.regularity_check(&g, &p, bound) {
            Ok(w) if w.depth <= bound && dg.fixes_pointwise(&g, &dg.encode(&p, w.depth)) => {
                deepest = deepest.max(w.depth);
                found += 1;
            }
            Ok(w) => return outcome(false, format!("{g} at {p}: witness depth {} > {bound}", w.depth)),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(true, format!("{found} stabilizing pairs, deepest witness {deepest}"))
}

/// Calls `f` on every label word of length `n`.
fn for_each_word(n: usize, f: &mut impl FnMut(&[Letter])) {
    let mut w = vec![0 as Letter; n];
    loop {
        f(&w);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            w[i] += 1;
            if (w[i] as usize) < D {
                break;
            }
            w[i] = 0;
        }
    }
}

fn encoding() -> Outcome {
    let t = Instant::now();
    let dg = Diagram::new(D).expect("diagram");
    let vertices: Vec<Vertex> = dg.level_vertices();
    let mut paths = 0u64;
    let mut bad: Option<String> = None;
    for n in 0..=ENCODE_DEPTH {
        let ends: Vec<Vertex> = if n == 0 { vec![Vertex::Top] } else { vertices.clone() };
        for_each_word(n, &mut |labels| {
            if bad.is_some() {
                return;
            }
            for &end in &ends {
                let eta = PathPrefix { labels: labels.to_vec(), end };
                let rep = dg.representative(&eta);
                let back = dg.decode(&eta, &rep.shift(n));
                if dg.encode(&rep, n) != eta || back.as_ref() != Ok(&rep) || !dg.in_cylinder(&eta, &rep) {
                    bad = Some(format!("round trip fails at {eta}"));
                    return;
                }
                paths += 1;
            }
        });
    }
    if let Some(b) = bad {
        return outcome(false, b);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut agree = 0;
    let mut members = 0;
    for _ in 0..ENCODE_SAMPLES {
        let p = random_point(&mut rng, D, 0.3);
        for n in 0..=ENCODE_DEPTH {
            let eta = dg.encode(&p, n);
            if dg.decode(&eta, &p.shift(n)).as_ref() != Ok(&p) {
                return outcome(false, format!("decode(encode({p}, {n})) differs"));
            }
        }
        let n = rng.gen_range(1..=ENCODE_DEPTH);
        let pos = rng.gen_range(1..=n + 3);
        let q = p.with_letters(&[(Position::Finite(pos), rng.gen_range(0..D as Letter))]);
        let eta = dg.encode(&q, n);
        let inside = dg.in_cylinder(&eta, &p);
        if inside != (dg.encode(&p, n) == eta) {
            return outcome(false, format!("membership of {p} in {eta} disagrees with its encoding"));
        }
        members += inside as usize;
        agree += 1;
    }
    let el = t.elapsed();
    outcome(
        true,
        format!("{paths} paths of depth <= {ENCODE_DEPTH} round-trip; {agree} samples agree ({members} inside); {el:.1?}"),
    )
}

fn subshift() -> Outcome {
    let mut longest = 0;
    for (p, q) in sample_pairs(D, SUBSHIFT_PAIRS, SUBSHIFT_MAX_R, SEED ^ 8) {
        match separation_search(D, &p, &q, SUBSHIFT_MAX_LEN) {
            Ok(s) => {
                let g = GroupWord::parse(D, &s.word).expect("word");
                if p.act(&g).class_key() == q.act(&g).class_key() || s.length > SUBSHIFT_MAX_LEN {
                    return outcome(false, format!("{p} / {q}: {} does not separate", s.word));
                }
                longest = longest.max(s.length);
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(true, format!("{SUBSHIFT_PAIRS} pairs separated, longest word {longest}"))
}

fn wreath(gs: &GeneratingSet) -> Outcome {
    let mut lens = Vec::new();
    for g in &gs.generators {
        match brieussel_witness(D, &g.name, &g.generator) {
            Ok(w) if w.verified && w.length <= WREATH_MAX_LEN => lens.push(format!("{}:{}", g.name, w.length)),
            Ok(w) => return outcome(false, format!("unreached target {} (length {}, verified {})", g.name, w.length, w.verified)),
            Err(e) => return outcome(false, format!("unreached target {}: {e}", g.name)),
        }
    }
    outcome(true, format!("all of S0 reached: {}", lens.join(" ")))
}

fn stabilizers() -> Outcome {
    let mut longest = 0;
    for (p, q) in sample_pairs(D, STABILIZER_PAIRS, STABILIZER_MAX_R, SEED ^ 9) {
        match stabilizer_separation(D, &p, &q, STABILIZER_RADIUS) {
            Ok(w) if w.length <= STABILIZER_RADIUS => longest = longest.max(w.length),
            Ok(w) => return outcome(false, format!("{p} / {q}: witness of length {}", w.length)),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(true, format!("{STABILIZER_PAIRS} pairs, longest witness {longest}"))
}

fn main() -> ExitCode {
    let gs = GeneratingSet::standard(D).expect("S0");
    let stilde = gs.squared();
    let mut failed = 0;
    let mut report = |i: usize, name: &str, o: Outcome| {
        println!("{} criterion {i:>2} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed += 1;
        }
    };
    report(1, "level transitivity", level_transitivity(&gs));
    report(2, "marginal determinism", marginal_determinism());
    let (o, n0) = n0_search();
    report(3, "n0 search", o);
    report(4, "commutator trick", commutator_trick(n0, &stilde));
    report(5, "eta torsion and 3-cycles", torsion_gadgets(n0, &stilde));
    report(6, "bounded type", bounded_type(&gs));
    report(7, "topological regularity", regularity(&gs));
    report(8, "encoding", encoding());
    report(9, "subshift separation", subshift());
    report(10, "wreath witnesses", wreath(&gs));
    report(11, "stabilizer separation", stabilizers());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
