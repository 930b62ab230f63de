//! Seeded random walks on groups given by labeled matrix generators.
//!
//! Every generator carries the label of its coset in the component group
//! H/H°, so a walk tracks its coset by multiplying labels alongside matrices.
//! The random stream of sample `index` under `seed` is a ChaCha8 stream keyed
//! by `seed` with stream id `index`, so samples are reproducible one by one
//! and independent of how a batch is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactmat::RationalMatrix;

/// Recorded in output metadata so runs can be replayed elsewhere.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng (rand_chacha 0.3); key = seed_from_u64(seed), stream = sample index; step = gen_range(0..|S|) (rand 0.8)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("empty generating set")]
    Empty,
    #[error("generator {0} is singular")]
    Singular(usize),
    #[error("generator {0} has dimension {1}, expected {2}")]
    DimensionMismatch(usize, usize, usize),
    #[error("inconsistent coset labels: {0}")]
    InconsistentLabels(String),
    #[error("invalid component group table: {0}")]
    InvalidTable(String),
}

/// Element of the component group H/H°, as an index into its table.
pub type CosetLabel = usize;

/// Finite group given by a multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl ComponentGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, WalkError> {
        let m = names.len();
        if m == 0 || table.len() != m || table.iter().any(|r| r.len() != m) {
            return Err(WalkError::InvalidTable(
                "table must be m×m with m ≥ 1".into(),
            ));
        }
        for (a, row) in table.iter().enumerate() {
            if table[0][a] != a || row[0] != a {
                return Err(WalkError::InvalidTable(
                    "element 0 must be the identity".into(),
                ));
            }
            let mut row = row.clone();
            row.sort_unstable();
            if row != (0..m).collect::<Vec<_>>() {
                return Err(WalkError::InvalidTable(format!(
                    "row {a} is not a permutation"
                )));
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(WalkError::InvalidTable("not associative".into()));
                    }
                }
            }
        }
        Ok(ComponentGroup { names, table })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1, &["e"])
    }

    /// Z/m with elements named by `names[i]` for the class of i.
    pub fn cyclic(m: usize, names: &[&str]) -> Self {
        let table = (0..m)
            .map(|a| (0..m).map(|b| (a + b) % m).collect())
            .collect();
        Self::new(names.iter().map(|s| s.to_string()).collect(), table)
            .expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, l: CosetLabel) -> &str {
        &self.names[l]
    }

    pub fn label_by_name(&self, name: &str) -> Option<CosetLabel> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: CosetLabel, b: CosetLabel) -> CosetLabel {
        self.table[a][b]
    }

    pub fn inverse(&self, a: CosetLabel) -> CosetLabel {
        (0..self.order())
            .find(|&b| self.table[a][b] == 0)
            .expect("group table has inverses")
    }
}

/// Symmetric generating multiset containing the identity, with coset labels.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    generators: Vec<(RationalMatrix, CosetLabel)>,
    component_group: ComponentGroup,
}

impl GeneratorSet {
    pub fn generators(&self) -> &[(RationalMatrix, CosetLabel)] {
        &self.generators
    }

    pub fn component_group(&self) -> &ComponentGroup {
        &self.component_group
    }

    pub fn dim(&self) -> usize {
        self.generators[0].0.dim()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Index of the identity generator.
    pub fn identity_index(&self) -> usize {
        self.generators
            .iter()
            .position(|(m, _)| m.is_identity())
            .expect("admissible sets contain the identity")
    }
}

/// Closes `raw` under inverses and adds the identity, validating labels.
/// Inverses already present (such as involutions) are not duplicated.
pub fn make_admissible(
    raw: Vec<(RationalMatrix, CosetLabel)>,
    component_group: ComponentGroup,
) -> Result<GeneratorSet, WalkError> {
    if raw.is_empty() {
        return Err(WalkError::Empty);
    }
    let n = raw[0].0.dim();
    let m = component_group.order();
    let mut out: Vec<(RationalMatrix, CosetLabel)> = Vec::new();
    let push =
        |g: RationalMatrix, l: CosetLabel, out: &mut Vec<(RationalMatrix, CosetLabel)>| match out
            .iter()
            .find(|(h, _)| *h == g)
        {
            Some((_, l2)) if *l2 != l => Err(WalkError::InconsistentLabels(format!(
                "matrix {g:?} carries labels {l2} and {l}"
            ))),
            Some(_) => Ok(()),
            None => {
                out.push((g, l));
                Ok(())
            }
        };
    for (i, (g, l)) in raw.into_iter().enumerate() {
        if g.dim() != n {
            return Err(WalkError::DimensionMismatch(i, g.dim(), n));
        }
        if l >= m {
            return Err(WalkError::InconsistentLabels(format!(
                "label {l} outside component group of order {m}"
            )));
        }
        if g.is_identity() && l != 0 {
            return Err(WalkError::InconsistentLabels(
                "identity must carry the identity label".into(),
            ));
        }
        let inv = g.inverse().map_err(|_| WalkError::Singular(i))?;
        let linv = component_group.inverse(l);
        push(g, l, &mut out)?;
        push(inv, linv, &mut out)?;
    }
    push(RationalMatrix::identity(n), 0, &mut out)?;
    Ok(GeneratorSet {
        generators: out,
        component_group,
    })
}

/// One draw of the walk: the product of `length` generators, its coset label
/// and the word of generator indices that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkSample {
    pub element: RationalMatrix,
    pub label: CosetLabel,
    pub length: usize,
    pub seed: u64,
    pub index: u64,
    pub word: Vec<usize>,
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The word of `k` uniform generator indices for sample `index` under `seed`.
/// Words for different `k` share prefixes.
pub fn sample_word(gens: &GeneratorSet, k: usize, seed: u64, index: u64) -> Vec<usize> {
    let mut rng = stream(seed, index);
    (0..k).map(|_| rng.gen_range(0..gens.len())).collect()
}

/// w_k = w(1)···w(k) for the stream of (`seed`, `index`).
pub fn sample_walk(gens: &GeneratorSet, k: usize, seed: u64, index: u64) -> WalkSample {
    let word = sample_word(gens, k, seed, index);
    let (element, label) = evaluate_word(gens, &word);
    WalkSample {
        element,
        label,
        length: k,
        seed,
        index,
        word,
    }
}

/// Product of the generators named by `word`, with its label.
pub fn evaluate_word(gens: &GeneratorSet, word: &[usize]) -> (RationalMatrix, CosetLabel) {
    let cg = &gens.component_group;
    let mut element = RationalMatrix::identity(gens.dim());
    let mut label = 0;
    for &j in word {
        let (g, l) = &gens.generators[j];
        if !g.is_identity() {
            element = element.mul(g).expect("generators share a dimension");
        }
        label = cg.mul(label, *l);
    }
    (element, label)
}

/// Samples at indices `0..count`, in index order regardless of parallelism.
pub fn batch_sample(gens: &GeneratorSet, k: usize, count: usize, seed: u64) -> Vec<WalkSample> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_walk(gens, k, seed, i))
        .collect()
}
