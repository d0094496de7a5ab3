//! The finite generating subset `S₀ ⊂ A ∪ B` used for graph constructions
//! and concrete group words.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::generator::Generator;
use crate::perm::{Letter, Permutation};
use crate::word::GroupWord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedGenerator {
    pub name: String,
    pub generator: Generator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingSet {
    pub d: usize,
    pub generators: Vec<NamedGenerator>,
}

impl GeneratingSet {
    /// Default `S₀` for alphabet size `d >= 5`:
    /// * overlapping 3-cycles `(0 1 2), (2 3 4), ..` generating `Alt(d)` for `A`;
    /// * `b0 ∈ B_0` with `ρ = (1 2 3)` and trivial `σ`;
    /// * `b_i ∈ B_i` with `σ_i = (0 i i+1)` (indices in `1..d-1`, wrapping).
    pub fn standard(d: usize) -> Result<Self> {
        if d < 5 {
            return input(format!("alphabet size must be at least 5, got {d}"));
        }
        let mut generators = Vec::new();
        let mut k = 0;
        loop {
            let start = k.min(d - 3);
            let perm = Permutation::three_cycle(d, start as Letter, start as Letter + 1, start as Letter + 2);
            generators.push(NamedGenerator { name: format!("a{}", generators.len()), generator: Generator::a(perm)? });
            if start + 2 >= d - 1 {
                break;
            }
            k += 2;
        }
        let id = Permutation::identity(d);
        generators.push(NamedGenerator {
            name: "b0".into(),
            generator: Generator::b(Permutation::three_cycle(d, 1, 2, 3), vec![id.clone(); d - 1])?,
        });
        for i in 1..d {
            let next = if i + 1 < d { i + 1 } else { 1 };
            let mut sigmas = vec![id.clone(); d - 1];
            sigmas[i - 1] = Permutation::three_cycle(d, 0, i as Letter, next as Letter);
            generators.push(NamedGenerator { name: format!("b{i}"), generator: Generator::b(id.clone(), sigmas)? });
        }
        Ok(GeneratingSet { d, generators })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn word(&self, i: usize) -> GroupWord {
        GroupWord::from_generator(self.d, self.generators[i].generator.clone())
    }

    /// Generators together with their inverses, deduplicated, in a fixed order.
    pub fn symmetric(&self) -> Vec<NamedGenerator> {
        let mut out: Vec<NamedGenerator> = Vec::new();
        for g in &self.generators {
            for (name, gen) in [(g.name.clone(), g.generator.clone()), (format!("{}^-1", g.name), g.generator.inverse())] {
                if !out.iter().any(|h| h.generator == gen) {
                    out.push(NamedGenerator { name, generator: gen });
                }
            }
        }
        out
    }

    /// `S̃ = S²` over the symmetric closure with the identity: all products of
    /// at most two letters, deduplicated by exact equality.
    pub fn squared(&self) -> Vec<(String, GroupWord)> {
        let sym = self.symmetric();
        let mut base: Vec<(String, GroupWord)> = vec![("e".into(), GroupWord::identity(self.d))];
        base.extend(sym.iter().map(|g| (g.name.clone(), GroupWord::from_generator(self.d, g.generator.clone()))));
        let mut out: Vec<(String, GroupWord)> = Vec::new();
        for (n1, w1) in &base {
            for (n2, w2) in &base {
                let w = w1.mul(w2);
                if !out.iter().any(|(_, u)| u.equals(&w)) {
                    let name = match (n1.as_str(), n2.as_str()) {
                        ("e", n) | (n, "e") => n.to_string(),
                        _ => format!("{n1}*{n2}"),
                    };
                    out.push((name, w));
                }
            }
        }
        out
    }

    /// Root permutations of the generators.
    pub fn root_perms(&self) -> Vec<Permutation> {
        self.generators.iter().map(|g| g.generator.root_perm(self.d)).collect()
    }
}

/// Closure of a set of permutations under composition.
pub fn generated_group(d: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let mut seen = std::collections::BTreeSet::new();
    let id = Permutation::identity(d);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.into_iter().collect()
}
