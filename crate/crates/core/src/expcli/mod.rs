//! Experiment layer: the scenario registry, configuration, the convergence,
//! finite-field and enumeration experiments, and CSV/JSON output.

pub mod config;
pub mod emit;
pub mod run;

use thiserror::Error;

use crate::exactmat::{rat, Rational, RationalMatrix};
use crate::finfield::FinFieldError;
use crate::galois_id::GaloisError;
use crate::permkit::{symmetric_group, PermError};
use crate::picatalog::{
    pi_restriction_of_scalars, pi_sl_n, pi_sl_n_tau, pi_sl_n_tau_identity, pi_sl_n_tau_paired,
    pi_sl_power_cyclic, pi_sl_power_identity, PredictedGroup,
};
use crate::walker::{make_admissible, ComponentGroup, GeneratorSet, WalkError};

pub use config::{ExperimentConfig, OutputFormat};

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("unknown scenario '{0}' (see the `scenarios` command)")]
    UnknownScenario(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    FinField(#[from] FinFieldError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// What the walk is expected to show on one coset.
#[derive(Clone, Debug)]
pub struct CosetSpec {
    pub name: String,
    /// `None` marks a coset without a typical Galois group.
    pub prediction: Option<PredictedGroup>,
    /// Competing predictions, reported next to the main one.
    pub alternatives: Vec<PredictedGroup>,
    /// The characteristic polynomial of a generic element is g^m with g
    /// squarefree; elements are regular semisimple when this shape holds.
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub gens: GeneratorSet,
    pub cosets: Vec<CosetSpec>,
}

impl Scenario {
    pub fn dim(&self) -> usize {
        self.gens.dim()
    }

    pub fn coset(&self, name: &str) -> Option<&CosetSpec> {
        self.cosets.iter().find(|c| c.name == name)
    }
}

fn coset(name: &str, prediction: PredictedGroup, multiplicity: u32) -> CosetSpec {
    CosetSpec {
        name: name.into(),
        prediction: Some(prediction),
        alternatives: vec![],
        multiplicity,
    }
}

/// Identity plus `c` at (i, j).
pub fn elementary(n: usize, i: usize, j: usize, c: Rational) -> RationalMatrix {
    let mut m = RationalMatrix::identity(n);
    m.set(i, j, c);
    m
}

fn elementary_set(n: usize) -> Vec<RationalMatrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(elementary(n, i, j, rat(1)));
            }
        }
    }
    out
}

/// Block matrix with `blocks[i][j]` at block position (i, j).
fn from_blocks(blocks: &[Vec<RationalMatrix>]) -> RationalMatrix {
    let b = blocks[0][0].dim();
    let n = b * blocks.len();
    let mut m = RationalMatrix::zero(n);
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, blk) in row.iter().enumerate() {
            for i in 0..b {
                for j in 0..b {
                    m.set(bi * b + i, bj * b + j, blk.get(i, j).clone());
                }
            }
        }
    }
    m
}

/// SL_n with the elementary matrices E_ij(1) as generators.
pub fn sl(n: usize) -> Result<Scenario, ExpError> {
    let gens = make_admissible(
        elementary_set(n).into_iter().map(|g| (g, 0)).collect(),
        ComponentGroup::trivial(),
    )?;
    Ok(Scenario {
        name: format!("sl({n})"),
        description: format!("SL_{n}(Z) generated by elementary matrices"),
        gens,
        cosets: vec![coset("e", pi_sl_n(n)?, 1)],
    })
}

/// SL_n ⋊ ⟨τ⟩, τ(A) = (Aᵗ)⁻¹, in GL_{2n}: A ↦ diag(A, (Aᵗ)⁻¹) and τ ↦ [[0, I], [I, 0]].
pub fn sl_tau(n: usize) -> Result<Scenario, ExpError> {
    let rho = |a: &RationalMatrix| -> Result<RationalMatrix, ExpError> {
        let inv_t = a.inverse().map_err(|_| WalkError::Singular(0))?.transpose();
        Ok(RationalMatrix::block_diagonal(&[a.clone(), inv_t]))
    };
    let mut raw = Vec::new();
    for g in elementary_set(n) {
        raw.push((rho(&g)?, 0));
    }
    let tau = from_blocks(&[
        vec![RationalMatrix::zero(n), RationalMatrix::identity(n)],
        vec![RationalMatrix::identity(n), RationalMatrix::zero(n)],
    ]);
    raw.push((tau, 1));
    let gens = make_admissible(raw, ComponentGroup::cyclic(2, &["e", "tau"]))?;
    // For n = 2, (Aᵗ)⁻¹ is conjugate to A, so identity-coset characteristic
    // polynomials are squares.
    let id_mult = if n == 2 { 2 } else { 1 };
    let tau_coset = CosetSpec {
        name: "tau".into(),
        prediction: Some(pi_sl_n_tau_paired(n)?),
        alternatives: vec![pi_sl_n_tau(n)?],
        multiplicity: 1,
    };
    Ok(Scenario {
        name: format!("sl_tau({n})"),
        description: format!(
            "SL_{n}(Z) extended by the transpose-inverse involution, in GL_{}",
            2 * n
        ),
        gens,
        cosets: vec![coset("e", pi_sl_n_tau_identity(n)?, id_mult), tau_coset],
    })
}

/// SL_n^d ⋊ Z/d with Z/d cyclically shifting the factors, on n·d dimensions.
pub fn sl_power_cyclic(n: usize, d: usize) -> Result<Scenario, ExpError> {
    let mut raw = Vec::new();
    for slot in 0..d {
        for g in elementary_set(n) {
            let blocks: Vec<RationalMatrix> = (0..d)
                .map(|s| {
                    if s == slot {
                        g.clone()
                    } else {
                        RationalMatrix::identity(n)
                    }
                })
                .collect();
            raw.push((RationalMatrix::block_diagonal(&blocks), 0));
        }
    }
    let shift_blocks: Vec<Vec<RationalMatrix>> = (0..d)
        .map(|bi| {
            (0..d)
                .map(|bj| {
                    if bi == (bj + 1) % d {
                        RationalMatrix::identity(n)
                    } else {
                        RationalMatrix::zero(n)
                    }
                })
                .collect()
        })
        .collect();
    raw.push((from_blocks(&shift_blocks), 1));
    let names: Vec<String> = (0..d)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "tau".to_string(),
            _ => format!("tau{i}"),
        })
        .collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let gens = make_admissible(raw, ComponentGroup::cyclic(d, &name_refs))?;
    let mut cosets = vec![coset("e", pi_sl_power_identity(n, d)?, 1)];
    for (i, name) in names.iter().enumerate().skip(1) {
        // a shift by i generates Z/d only when gcd(i, d) = 1
        if num_integer::gcd(i, d) != 1 {
            return Err(ExpError::Config(format!(
                "shift power {i} not coprime to {d}"
            )));
        }
        cosets.push(coset(name, pi_sl_power_cyclic(n, d)?, 1));
    }
    Ok(Scenario {
        name: format!("sl_power_cyclic({n},{d})"),
        description: format!("SL_{n}(Z)^{d} extended by the cyclic shift of factors"),
        gens,
        cosets,
    })
}

/// SL_2(Z[√2]) in GL_4(Q) through the regular representation √2 ↦ [[0,2],[1,0]].
pub fn res_scalars_sqrt2() -> Result<Scenario, ExpError> {
    // x + y√2 as a 2×2 block
    let elt = |x: i64, y: i64| RationalMatrix::from_int_rows(&[[x, 2 * y], [y, x]]).expect("2x2");
    let embed = |m: [[(i64, i64); 2]; 2]| {
        from_blocks(
            &m.iter()
                .map(|row| row.iter().map(|&(x, y)| elt(x, y)).collect())
                .collect::<Vec<_>>(),
        )
    };
    let raw = vec![
        (embed([[(1, 0), (1, 0)], [(0, 0), (1, 0)]]), 0),
        (embed([[(1, 0), (0, 1)], [(0, 0), (1, 0)]]), 0),
        (embed([[(1, 0), (0, 0)], [(1, 0), (1, 0)]]), 0),
        (embed([[(1, 0), (0, 0)], [(0, 1), (1, 0)]]), 0),
    ];
    let gens = make_admissible(raw, ComponentGroup::trivial())?;
    let gal = symmetric_group(2, 2)?;
    Ok(Scenario {
        name: "res_scalars_sqrt2".into(),
        description: "SL_2(Z[sqrt 2]) by restriction of scalars to GL_4(Q)".into(),
        gens,
        cosets: vec![coset("e", pi_restriction_of_scalars(2, &gal)?, 1)],
    })
}

/// A = diag(2, 3) and J = antidiag(1, 1): the torus coset is typical, the
/// antidiagonal coset is not.
pub fn counterexample() -> Result<Scenario, ExpError> {
    let a = RationalMatrix::from_int_rows(&[[2, 0], [0, 3]]).expect("2x2");
    let j = RationalMatrix::from_int_rows(&[[0, 1], [1, 0]]).expect("2x2");
    let gens = make_admissible(
        vec![(a, 0), (j, 1)],
        ComponentGroup::cyclic(2, &["e", "tau"]),
    )?;
    let none = |name: &str| CosetSpec {
        name: name.into(),
        prediction: None,
        alternatives: vec![],
        multiplicity: 1,
    };
    Ok(Scenario {
        name: "counterexample_6_3_1".into(),
        description: "diag(2,3) and the antidiagonal swap; no typical Galois group off the torus"
            .into(),
        gens,
        cosets: vec![none("e"), none("tau")],
    })
}

pub const SCENARIO_NAMES: &[&str] = &[
    "sl(2)",
    "sl(3)",
    "sl(4)",
    "sl_tau(2)",
    "sl_tau(4)",
    "sl_power_cyclic(2,2)",
    "sl_power_cyclic(2,3)",
    "res_scalars_sqrt2",
    "counterexample_6_3_1",
];

pub fn scenario(name: &str) -> Result<Scenario, ExpError> {
    match name {
        "sl(2)" => sl(2),
        "sl(3)" => sl(3),
        "sl(4)" => sl(4),
        "sl_tau(2)" => sl_tau(2),
        "sl_tau(4)" => sl_tau(4),
        "sl_power_cyclic(2,2)" => sl_power_cyclic(2, 2),
        "sl_power_cyclic(2,3)" => sl_power_cyclic(2, 3),
        "res_scalars_sqrt2" => res_scalars_sqrt2(),
        "counterexample_6_3_1" => counterexample(),
        _ => Err(ExpError::UnknownScenario(name.into())),
    }
}

pub fn builtin_scenarios() -> Result<Vec<Scenario>, ExpError> {
    SCENARIO_NAMES.iter().map(|n| scenario(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_generators() {
        let s = counterexample().unwrap();
        let a = RationalMatrix::from_int_rows(&[[2, 0], [0, 3]]).unwrap();
        let expected = vec![
            (a.clone(), 0),
            (a.inverse().unwrap(), 0),
            (RationalMatrix::from_int_rows(&[[0, 1], [1, 0]]).unwrap(), 1),
            (RationalMatrix::identity(2), 0),
        ];
        assert_eq!(s.gens.generators(), expected.as_slice());
        assert!(s.cosets.iter().all(|c| c.prediction.is_none()));
    }

    #[test]
    fn registry_shapes() {
        let all = builtin_scenarios().unwrap();
        assert_eq!(all.len(), SCENARIO_NAMES.len());
        for s in &all {
            assert_eq!(
                s.cosets.len(),
                s.gens.component_group().order(),
                "{}",
                s.name
            );
            for c in &s.cosets {
                for g in c.prediction.iter().chain(&c.alternatives) {
                    assert_eq!(g.degree(), s.dim(), "{} / {}", s.name, c.name);
                }
            }
        }
        assert_eq!(scenario("sl_tau(2)").unwrap().dim(), 4);
        let s3 = scenario("sl(3)").unwrap();
        assert_eq!(s3.cosets[0].prediction.as_ref().unwrap().order(), 6);
        assert!(matches!(
            scenario("nope"),
            Err(ExpError::UnknownScenario(_))
        ));
    }

    #[test]
    fn outer_coset_relation() {
        let s = sl_tau(2).unwrap();
        let (tau, _) = s.gens.generators().iter().find(|(_, l)| *l == 1).unwrap();
        for (g, l) in s.gens.generators() {
            if *l == 0 {
                // τ ρ(A) τ = ρ((Aᵗ)⁻¹)
                let conj = tau.mul(g).unwrap().mul(tau).unwrap();
                let n = 2;
                let a = RationalMatrix::from_rows(
                    (0..n)
                        .map(|i| (0..n).map(|j| g.get(i, j).clone()).collect())
                        .collect(),
                )
                .unwrap();
                let inv_t = a.inverse().unwrap().transpose();
                let expected = RationalMatrix::block_diagonal(&[inv_t.clone(), a]);
                assert_eq!(conj, expected);
            }
        }
    }

    #[test]
    fn restriction_of_scalars_generators_are_unimodular() {
        let s = res_scalars_sqrt2().unwrap();
        for (g, _) in s.gens.generators() {
            assert_eq!(g.determinant(), rat(1));
        }
    }
}
