//! The experiments behind the CLI commands.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::emit::Row;
use super::{ExpError, Scenario};
use crate::exactmat::{Rational, RationalMatrix, RationalPolynomial};
use crate::finfield::{census, density_report, enumerate_mod_p, FinFieldError};
use crate::galois_id::{
    collect_samples_with_multiplicity, exact_galois, match_verdict_with_exact, ExactGalois,
    GaloisName, SampleSummary, Thresholds, Verdict, VerdictKind,
};
use crate::modpoly::{primes_in, CycleType};
use crate::walker::{batch_sample, CosetLabel, GeneratorSet};

/// Everything observed about one walk sample.
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub index: u64,
    pub coset: CosetLabel,
    pub char_poly: RationalPolynomial,
    /// Characteristic polynomial has the coset's generic shape g^m, g squarefree.
    pub rs: bool,
    pub summary: Option<SampleSummary>,
    pub exact: Option<ExactGalois>,
    /// One verdict per target: the coset's prediction, then its alternatives.
    pub verdicts: Vec<Verdict>,
}

/// Samples `count` walks of length `k` and identifies each against the
/// predictions of its coset.
pub fn evaluate_samples(
    scenario: &Scenario,
    k: usize,
    count: usize,
    seed: u64,
    primes: &[u64],
    budget: usize,
    thresholds: &Thresholds,
) -> Result<Vec<SampleOutcome>, ExpError> {
    let samples = batch_sample(&scenario.gens, k, count, seed);
    samples
        .into_par_iter()
        .map(|s| {
            let spec = &scenario.cosets[s.label];
            let char_poly = s.element.char_poly();
            let core = char_poly.squarefree_root(spec.multiplicity);
            let mut out = SampleOutcome {
                index: s.index,
                coset: s.label,
                char_poly: char_poly.clone(),
                rs: core.is_some(),
                summary: None,
                exact: None,
                verdicts: Vec::new(),
            };
            let Some(core) = core else {
                return Ok(out);
            };
            out.exact = exact_galois(&core);
            let targets: Vec<_> = spec.prediction.iter().chain(&spec.alternatives).collect();
            if targets.is_empty() {
                return Ok(out);
            }
            let summary =
                collect_samples_with_multiplicity(&char_poly, spec.multiplicity, primes, budget)?;
            for t in targets {
                out.verdicts.push(match_verdict_with_exact(
                    &summary,
                    t,
                    thresholds,
                    out.exact.as_ref(),
                )?);
            }
            out.summary = Some(summary);
            Ok(out)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub k: usize,
    pub coset: String,
    pub target: String,
    pub samples: usize,
    pub n_rs: usize,
    pub n_certified: usize,
    pub n_consistent: usize,
    pub n_rejected: usize,
    pub n_inconclusive: usize,
    /// Non-rs, rejected and inconclusive samples over all samples of the coset.
    pub mismatch_fraction: Option<f64>,
}

impl Row for ConvergenceRow {
    const HEADER: &'static [&'static str] = &[
        "k",
        "coset",
        "target",
        "samples",
        "n_rs",
        "n_certified",
        "n_consistent",
        "n_rejected",
        "n_inconclusive",
        "mismatch_fraction",
    ];
}

/// Rows for cosets without a predicted group: outcomes of the exact
/// quadratic oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticRow {
    pub k: usize,
    pub coset: String,
    pub samples: usize,
    pub n_rs: usize,
    pub n_trivial: usize,
    pub n_order2: usize,
    pub trivial_fraction: Option<f64>,
}

impl Row for QuadraticRow {
    const HEADER: &'static [&'static str] = &[
        "k",
        "coset",
        "samples",
        "n_rs",
        "n_trivial",
        "n_order2",
        "trivial_fraction",
    ];
}

pub enum ConvergenceOutput {
    Predicted(Vec<ConvergenceRow>),
    Quadratic(Vec<QuadraticRow>),
}

fn ratio(a: usize, b: usize) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}

pub fn tabulate_predicted(
    scenario: &Scenario,
    k: usize,
    outcomes: &[SampleOutcome],
) -> Vec<ConvergenceRow> {
    let mut rows = Vec::new();
    for (label, spec) in scenario.cosets.iter().enumerate() {
        let mine: Vec<&SampleOutcome> = outcomes.iter().filter(|o| o.coset == label).collect();
        for (ti, target) in spec.prediction.iter().chain(&spec.alternatives).enumerate() {
            let samples = mine.len();
            let n_rs = mine.iter().filter(|o| o.rs).count();
            let kinds: Vec<&VerdictKind> = mine
                .iter()
                .filter_map(|o| o.verdicts.get(ti))
                .map(|v| &v.kind)
                .collect();
            let count = |f: &dyn Fn(&VerdictKind) -> bool| kinds.iter().filter(|k| f(k)).count();
            let n_certified =
                count(&|k| matches!(k, VerdictKind::CertifiedSn | VerdictKind::CertifiedExact(_)));
            let n_consistent = count(&|k| *k == VerdictKind::Consistent);
            let n_rejected = count(&|k| *k == VerdictKind::Rejected);
            let n_inconclusive = count(&|k| *k == VerdictKind::Inconclusive);
            rows.push(ConvergenceRow {
                k,
                coset: spec.name.clone(),
                target: target.name.clone(),
                samples,
                n_rs,
                n_certified,
                n_consistent,
                n_rejected,
                n_inconclusive,
                mismatch_fraction: ratio(samples - n_rs + n_rejected + n_inconclusive, samples),
            });
        }
    }
    rows
}

pub fn tabulate_quadratic(
    scenario: &Scenario,
    k: usize,
    outcomes: &[SampleOutcome],
) -> Vec<QuadraticRow> {
    scenario
        .cosets
        .iter()
        .enumerate()
        .map(|(label, spec)| {
            let mine: Vec<&SampleOutcome> = outcomes.iter().filter(|o| o.coset == label).collect();
            let n_rs = mine.iter().filter(|o| o.rs).count();
            let name = |o: &&&SampleOutcome| o.exact.as_ref().map(|e| e.name);
            let n_trivial = mine
                .iter()
                .filter(|o| name(o) == Some(GaloisName::Trivial))
                .count();
            let n_order2 = mine
                .iter()
                .filter(|o| name(o) == Some(GaloisName::C2))
                .count();
            QuadraticRow {
                k,
                coset: spec.name.clone(),
                samples: mine.len(),
                n_rs,
                n_trivial,
                n_order2,
                trivial_fraction: ratio(n_trivial, n_rs),
            }
        })
        .collect()
}

pub fn run_convergence(
    scenario: &Scenario,
    cfg: &ExperimentConfig,
) -> Result<ConvergenceOutput, ExpError> {
    let primes = primes_in(cfg.primes_min, cfg.primes_max);
    let predicted = scenario.cosets.iter().any(|c| c.prediction.is_some());
    let mut pred_rows = Vec::new();
    let mut quad_rows = Vec::new();
    for &k in &cfg.ks {
        let outcomes = evaluate_samples(
            scenario,
            k,
            cfg.samples,
            cfg.seed,
            &primes,
            cfg.budget,
            &cfg.thresholds,
        )?;
        if predicted {
            pred_rows.extend(tabulate_predicted(scenario, k, &outcomes));
        } else {
            quad_rows.extend(tabulate_quadratic(scenario, k, &outcomes));
        }
    }
    Ok(if predicted {
        ConvergenceOutput::Predicted(pred_rows)
    } else {
        ConvergenceOutput::Quadratic(quad_rows)
    })
}

/// Least-squares fit of ln(mismatch) = ln(c) − β·k over rows with positive
/// mismatch, per (coset, target).
#[derive(Clone, Debug, PartialEq)]
pub struct LogLinearFit {
    pub coset: String,
    pub target: String,
    pub c: f64,
    pub beta: f64,
    pub points: usize,
}

pub fn log_linear_fits(rows: &[ConvergenceRow]) -> Vec<LogLinearFit> {
    let mut keys: Vec<(String, String)> = rows
        .iter()
        .map(|r| (r.coset.clone(), r.target.clone()))
        .collect();
    keys.dedup();
    keys.sort();
    keys.dedup();
    let mut out = Vec::new();
    for (coset, target) in keys {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.coset == coset && r.target == target)
            .filter_map(|r| {
                r.mismatch_fraction
                    .filter(|&m| m > 0.0)
                    .map(|m| (r.k as f64, m.ln()))
            })
            .collect();
        if pts.len() < 2 {
            continue;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx == 0.0 {
            continue;
        }
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        out.push(LogLinearFit {
            coset,
            target,
            c: (my - slope * mx).exp(),
            beta: -slope,
            points: pts.len(),
        });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinFieldRow {
    pub p: u64,
    pub coset: String,
    pub cycle_type: Option<CycleType>,
    pub count: usize,
    pub rs_count: usize,
    pub total: usize,
    pub density_rs: Option<f64>,
    pub density_coset: Option<f64>,
    pub weyl_fraction: Option<f64>,
    pub flagged: bool,
    pub status: String,
}

impl Row for FinFieldRow {
    const HEADER: &'static [&'static str] = &[
        "p",
        "coset",
        "cycle_type",
        "count",
        "rs_count",
        "total",
        "density_rs",
        "density_coset",
        "weyl_fraction",
        "flagged",
        "status",
    ];
}

/// Per-coset summary of a finite-field run.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetDensitySummary {
    pub coset: String,
    pub min_density: f64,
    pub fitted_c: f64,
    pub rs_fractions: Vec<(u64, f64)>,
}

type CosetElements = Vec<Vec<crate::exactmat::PrimeFieldMatrix>>;

pub struct FinFieldOutput {
    pub rows: Vec<FinFieldRow>,
    pub summaries: Vec<CosetDensitySummary>,
    /// Diagnostics for skipped primes.
    pub skipped: Vec<String>,
}

pub fn run_finite_field(
    scenario: &Scenario,
    cfg: &ExperimentConfig,
) -> Result<FinFieldOutput, ExpError> {
    if scenario.dim() > 4 {
        return Err(ExpError::Config(format!(
            "finite-field enumeration supports dimension at most 4, {} has {}",
            scenario.name,
            scenario.dim()
        )));
    }
    let per_prime: Vec<(u64, Result<CosetElements, FinFieldError>)> = cfg
        .field_primes
        .par_iter()
        .map(|&p| (p, enumerate_mod_p(&scenario.gens, p, cfg.bound)))
        .collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut by_coset: Vec<Vec<crate::finfield::CosetCensus>> =
        vec![Vec::new(); scenario.cosets.len()];
    for (p, res) in per_prime {
        let cosets = match res {
            Ok(c) => c,
            Err(FinFieldError::BadPrime(_)) => {
                skipped.push(format!("skipping p={p}: bad prime for {}", scenario.name));
                rows.push(FinFieldRow {
                    p,
                    coset: String::new(),
                    cycle_type: None,
                    count: 0,
                    rs_count: 0,
                    total: 0,
                    density_rs: None,
                    density_coset: None,
                    weyl_fraction: None,
                    flagged: false,
                    status: "bad_prime".into(),
                });
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for (label, spec) in scenario.cosets.iter().enumerate() {
            let Some(target) = &spec.prediction else {
                continue;
            };
            let c = census(&cosets[label], label, p, spec.multiplicity);
            let rep = density_report(std::slice::from_ref(&c), &target.group);
            for r in rep.rows {
                rows.push(FinFieldRow {
                    p,
                    coset: spec.name.clone(),
                    cycle_type: Some(r.cycle_type),
                    count: r.count,
                    rs_count: r.rs_count,
                    total: r.total,
                    density_rs: Some(r.density_rs),
                    density_coset: Some(r.density_coset),
                    weyl_fraction: Some(r.weyl_fraction),
                    flagged: r.flagged,
                    status: serde_json::to_value(r.status)?
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                });
            }
            by_coset[label].push(c);
        }
    }
    let mut summaries = Vec::new();
    for (label, spec) in scenario.cosets.iter().enumerate() {
        let Some(target) = &spec.prediction else {
            continue;
        };
        if by_coset[label].is_empty() {
            continue;
        }
        let rep = density_report(&by_coset[label], &target.group);
        summaries.push(CosetDensitySummary {
            coset: spec.name.clone(),
            min_density: rep.min_density,
            fitted_c: rep.fitted_c,
            rs_fractions: by_coset[label]
                .iter()
                .map(|c| (c.p, c.rs_fraction()))
                .collect(),
        });
    }
    Ok(FinFieldOutput {
        rows,
        summaries,
        skipped,
    })
}

/// Exhaustive statistics over all 4^k words in the generators of the
/// counterexample scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordCensus {
    pub k: usize,
    pub words: u64,
    pub off_coset: u64,
    pub off_trivial: u64,
    /// Off-coset words where "ab is a square" disagrees with the parity
    /// rule on the number of identity letters.
    pub parity_violations: u64,
}

impl WordCensus {
    fn merge(mut self, o: WordCensus) -> WordCensus {
        self.words += o.words;
        self.off_coset += o.off_coset;
        self.off_trivial += o.off_trivial;
        self.parity_violations += o.parity_violations;
        self
    }

    pub fn trivial_fraction(&self) -> Rational {
        Rational::new(BigInt::from(self.off_trivial), BigInt::from(self.off_coset))
    }
}

/// P(trivial | off coset) = (4^k − 2^k − (−2)^k) / (2·(4^k − 2^k)) for k ≥ 1.
pub fn counterexample_closed_form(k: usize) -> Rational {
    let four = num_traits::pow(BigInt::from(4), k);
    let two = num_traits::pow(BigInt::from(2), k);
    let minus_two = num_traits::pow(BigInt::from(-2), k);
    Rational::new(&four - &two - minus_two, BigInt::from(2) * (four - two))
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    gens: &GeneratorSet,
    identity_index: usize,
    m: &RationalMatrix,
    label: CosetLabel,
    n_identity: usize,
    depth: usize,
    k: usize,
    acc: &mut WordCensus,
) {
    if depth == k {
        acc.words += 1;
        if label == 0 {
            return;
        }
        acc.off_coset += 1;
        let trivial = exact_galois(&m.char_poly()).is_some_and(|e| e.name == GaloisName::Trivial);
        if trivial {
            acc.off_trivial += 1;
        }
        let parity_square = if k.is_multiple_of(2) {
            n_identity % 2 == 1
        } else {
            n_identity.is_multiple_of(2)
        };
        if parity_square != trivial {
            acc.parity_violations += 1;
        }
        return;
    }
    let cg = gens.component_group();
    for (i, (g, l)) in gens.generators().iter().enumerate() {
        let next = m.mul(g).expect("square generators");
        let ni = n_identity + usize::from(i == identity_index);
        dfs(
            gens,
            identity_index,
            &next,
            cg.mul(label, *l),
            ni,
            depth + 1,
            k,
            acc,
        );
    }
}

/// Walks every word of length `k`, evaluating products exactly.
pub fn enumerate_counterexample_words(scenario: &Scenario, k: usize) -> WordCensus {
    let gens = &scenario.gens;
    let id = gens.identity_index();
    let cg = gens.component_group();
    let empty = WordCensus {
        k,
        words: 0,
        off_coset: 0,
        off_trivial: 0,
        parity_violations: 0,
    };
    // parallel over prefixes of length up to 2
    let split = k.min(2);
    let mut prefixes: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..split {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| (0..gens.len()).map(move |i| [p.clone(), vec![i]].concat()))
            .collect();
    }
    prefixes
        .into_par_iter()
        .map(|prefix| {
            let mut m = RationalMatrix::identity(gens.dim());
            let mut label = 0;
            let mut ni = 0;
            for &i in &prefix {
                let (g, l) = &gens.generators()[i];
                m = m.mul(g).expect("square generators");
                label = cg.mul(label, *l);
                ni += usize::from(i == id);
            }
            let mut acc = WordCensus { k, ..empty.clone() };
            dfs(gens, id, &m, label, ni, prefix.len(), k, &mut acc);
            acc
        })
        .reduce(|| empty.clone(), WordCensus::merge)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub k: usize,
    pub words: u64,
    pub off_coset: u64,
    pub off_trivial: u64,
    pub trivial_fraction: String,
    pub trivial_fraction_value: f64,
    pub closed_form: String,
    pub closed_form_matches: bool,
    pub parity_violations: u64,
}

impl Row for OracleRow {
    const HEADER: &'static [&'static str] = &[
        "k",
        "words",
        "off_coset",
        "off_trivial",
        "trivial_fraction",
        "trivial_fraction_value",
        "closed_form",
        "closed_form_matches",
        "parity_violations",
    ];
}

pub fn run_oracle(scenario: &Scenario, k_max: usize) -> Vec<OracleRow> {
    (1..=k_max)
        .map(|k| {
            let c = enumerate_counterexample_words(scenario, k);
            let frac = if c.off_coset == 0 {
                Rational::zero()
            } else {
                c.trivial_fraction()
            };
            let closed = counterexample_closed_form(k);
            OracleRow {
                k,
                words: c.words,
                off_coset: c.off_coset,
                off_trivial: c.off_trivial,
                trivial_fraction: frac.to_string(),
                trivial_fraction_value: frac.to_f64().unwrap_or(f64::NAN),
                closed_form: closed.to_string(),
                closed_form_matches: frac == closed,
                parity_violations: c.parity_violations,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub scenario: String,
    pub coset: String,
    pub group: String,
    pub degree: usize,
    pub order: usize,
    pub cycle_type: CycleType,
    pub count: usize,
    pub frequency: String,
}

impl Row for CatalogRow {
    const HEADER: &'static [&'static str] = &[
        "scenario",
        "coset",
        "group",
        "degree",
        "order",
        "cycle_type",
        "count",
        "frequency",
    ];
}

pub fn catalog_rows(scenario: &Scenario) -> Vec<CatalogRow> {
    let mut rows = Vec::new();
    for spec in &scenario.cosets {
        for g in spec.prediction.iter().chain(&spec.alternatives) {
            for (t, &c) in g.group.type_counts() {
                rows.push(CatalogRow {
                    scenario: scenario.name.clone(),
                    coset: spec.name.clone(),
                    group: g.name.clone(),
                    degree: g.degree(),
                    order: g.order(),
                    cycle_type: t.clone(),
                    count: c,
                    frequency: Rational::new(BigInt::from(c), BigInt::from(g.order())).to_string(),
                });
            }
        }
    }
    rows
}
