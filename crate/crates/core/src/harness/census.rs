//! Census of sub-arrangements of `A_all(F_q^ell)`.
//!
//! Every arrangement in scope gets a [`ClassificationRecord`]: its
//! characteristic polynomial, complement counts from both counting routes,
//! the freeness decision, the size-based prediction, and the outcome of
//! every applicable check. A failed check is a [`Finding`] and carries the
//! arrangement file needed to reproduce it; it never aborts the run.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{all_hyperplanes, Arrangement};
use crate::charpoly::CharPoly;
use crate::counting::{count_complement_extension, crapo_rota_count};
use crate::derivations::{
    decide_freeness, free_hilbert_value, minimal_nontrivial_degree, Derivation, LogError, Verdict,
};
use crate::field::make_field;
use crate::format::write_arrangement;
use crate::lattice::char_poly;
use crate::poly::PolyRing;

use super::orbit::{generator_perms, orbit_representatives};
use super::theorems::{
    addition_deletion_by_size, addition_deletion_consistent, all_hyperplane_tests,
    exponent_pattern, line_completion, near_threshold_char_poly, predict_freeness,
    resolution_chain, restriction_exponents, vanishing_exponents, verify_chain, zeros_descend,
    ExponentPattern, Prediction, Regime,
};
use super::HarnessError;

/// Largest number of subsets the exhaustive mode will enumerate.
pub const DEFAULT_SUBSET_CEILING: u64 = 1 << 16;
/// Largest number of subsets the orbit sweep will visit.
pub const DEFAULT_ORBIT_CEILING: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    Exhaustive,
    OrbitReduced,
    Sample { n: usize, seed: u64 },
}

impl CensusMode {
    pub fn name(&self) -> &'static str {
        match self {
            CensusMode::Exhaustive => "exhaustive",
            CensusMode::OrbitReduced => "orbit-reduced",
            CensusMode::Sample { .. } => "sample",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CensusSpec {
    pub p: u64,
    pub e: u32,
    pub ell: usize,
    pub mode: CensusMode,
    pub min_size: usize,
    pub max_size: Option<usize>,
    /// worker threads; `None` uses the global pool
    pub threads: Option<usize>,
    pub subset_ceiling: u64,
    pub orbit_ceiling: u64,
}

impl CensusSpec {
    pub fn new(p: u64, e: u32, ell: usize, mode: CensusMode) -> Self {
        Self {
            p,
            e,
            ell,
            mode,
            min_size: 0,
            max_size: None,
            threads: None,
            subset_ceiling: DEFAULT_SUBSET_CEILING,
            orbit_ceiling: DEFAULT_ORBIT_CEILING,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
    /// tallied but never turned into a finding
    pub informational: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRecord {
    pub id: String,
    pub size: usize,
    pub rank: usize,
    /// highest degree first
    pub char_poly: Vec<i64>,
    pub roots: Option<Vec<i64>>,
    pub chi_q: i64,
    pub chi_q2: i64,
    /// direct complement counts over `F_q` and `F_{q^2}`
    pub direct_counts: [u64; 2],
    /// tuple counts for `k = 1, 2`
    pub tuple_counts: [u64; 2],
    pub verdict: Option<Verdict>,
    pub exponents: Option<Vec<u32>>,
    pub certificate: Option<&'static str>,
    pub prediction: Option<Prediction>,
    pub minimal_nontrivial_degree: Option<u32>,
    pub pattern: Option<ExponentPattern>,
    /// number of arrangements this record stands for
    pub weight: u64,
    pub checks: Vec<CheckOutcome>,
}

impl ClassificationRecord {
    pub fn failed_claims(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed && !c.informational)
    }
}

/// A failed check with what is needed to reproduce it.
#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub claim: &'static str,
    pub id: String,
    pub detail: String,
    pub arrangement: String,
    pub command: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub violations: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeTally {
    pub total: u64,
    pub free: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusSummary {
    pub q: u32,
    pub p: u64,
    pub e: u32,
    pub ell: usize,
    pub mode: &'static str,
    pub seed: Option<u64>,
    pub min_size: usize,
    pub max_size: usize,
    pub records: usize,
    pub weighted_records: u64,
    pub checks: BTreeMap<&'static str, Tally>,
    /// relations that are tallied without producing findings
    pub observations: BTreeMap<&'static str, Tally>,
    pub verdicts: BTreeMap<String, u64>,
    pub free_by_size: BTreeMap<usize, SizeTally>,
    pub exponent_patterns: BTreeMap<String, u64>,
    pub undetermined: Vec<String>,
    pub findings: Vec<Finding>,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub records: Vec<ClassificationRecord>,
    pub summary: CensusSummary,
}

impl CensusReport {
    pub fn has_findings(&self) -> bool {
        !self.summary.findings.is_empty()
    }

    pub fn tally(&self, claim: &str) -> Tally {
        self.summary.checks.get(claim).copied().unwrap_or_default()
    }

    /// One row per record, tab separated, with a header line.
    pub fn tsv(&self) -> String {
        let mut out = String::from(
            "id\tsize\trank\tchar_poly\troots\tchi_q\tchi_q2\tdirect_q\tdirect_q2\ttuples_q\ttuples_q2\tverdict\texponents\tcertificate\tpredicted_free\tregime\tmin_nontrivial_degree\tpattern\tweight\tfailed_checks\n",
        );
        let list = |v: &[String]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.join(",")
            }
        };
        let opt = |o: Option<String>| o.unwrap_or_else(|| "-".to_string());
        for r in &self.records {
            let cp: Vec<String> = r.char_poly.iter().map(|c| c.to_string()).collect();
            let roots = r
                .roots
                .as_ref()
                .map(|v| list(&v.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
            let exps = r
                .exponents
                .as_ref()
                .map(|v| list(&v.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
            let failed: Vec<String> = r.failed_claims().map(|c| c.claim.to_string()).collect();
            let regime = r.prediction.map(|p| {
                serde_json::to_value(p.regime)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default()
            });
            let pattern = r.pattern.map(|p| {
                serde_json::to_value(p)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default()
            });
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.id,
                r.size,
                r.rank,
                cp.join(","),
                opt(roots),
                r.chi_q,
                r.chi_q2,
                r.direct_counts[0],
                r.direct_counts[1],
                r.tuple_counts[0],
                r.tuple_counts[1],
                opt(r.verdict.map(|v| v.to_string())),
                opt(exps),
                r.certificate.unwrap_or("-"),
                opt(r.prediction.map(|p| p.free.to_string())),
                opt(regime),
                opt(r.minimal_nontrivial_degree.map(|d| d.to_string())),
                opt(pattern),
                r.weight,
                list(&failed),
            )
            .unwrap();
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes") + "\n"
    }
}

struct Checks(Vec<CheckOutcome>);

impl Checks {
    fn check(&mut self, claim: &'static str, passed: bool, detail: impl FnOnce() -> String) {
        let detail = if passed { String::new() } else { detail() };
        self.0.push(CheckOutcome {
            claim,
            passed,
            detail,
            informational: false,
        });
    }

    fn observe(&mut self, claim: &'static str, holds: bool) {
        self.0.push(CheckOutcome {
            claim,
            passed: holds,
            detail: String::new(),
            informational: true,
        });
    }
}

fn classify(arr: &Arrangement, weight: u64) -> Result<ClassificationRecord, HarnessError> {
    let q = arr.q();
    let ell = arr.ell();
    let qi = q as i64;
    let cp = char_poly(arr)?;
    let mut checks = Checks(Vec::new());
    let chi_q = cp.eval(qi)?;
    let chi_q2 = cp.eval(qi * qi)?;
    let direct = [
        count_complement_extension(arr, 1)?,
        count_complement_extension(arr, 2)?,
    ];
    let tuples = [crapo_rota_count(arr, 1)?, crapo_rota_count(arr, 2)?];
    for (k, chi) in [chi_q, chi_q2].into_iter().enumerate() {
        checks.check(
            "counting_oracles",
            direct[k] as i64 == chi && tuples[k] == direct[k],
            || {
                format!(
                    "k={}: direct {} tuples {} chi {chi}",
                    k + 1,
                    direct[k],
                    tuples[k]
                )
            },
        );
    }
    checks.check("zeros_descend", zeros_descend(&cp, q, 3)?, || {
        format!("chi = {cp}")
    });
    let tests = all_hyperplane_tests(arr, &cp)?;
    checks.check("all_hyperplane_characterization", tests.agree(), || {
        format!("{tests:?}")
    });
    if ell >= 3 && cp.eval(qi.pow(ell as u32 - 2))? == 0 {
        let chain = resolution_chain(arr)?;
        checks.check("resolution_chain", verify_chain(arr, &chain)?, || {
            format!("chain of {} steps does not verify", chain.steps.len())
        });
    }

    let mut record = ClassificationRecord {
        id: arr.id(),
        size: arr.len(),
        rank: arr.rank(),
        char_poly: cp.coeffs_high_first(),
        roots: cp.integer_roots(),
        chi_q,
        chi_q2,
        direct_counts: direct,
        tuple_counts: tuples,
        verdict: None,
        exponents: None,
        certificate: None,
        prediction: None,
        minimal_nontrivial_degree: None,
        pattern: None,
        weight,
        checks: Vec::new(),
    };
    if ell == 3 {
        freeness_checks(arr, &cp, &mut record, &mut checks)?;
    }
    record.checks = checks.0;
    Ok(record)
}

fn freeness_checks(
    arr: &Arrangement,
    cp: &CharPoly,
    record: &mut ClassificationRecord,
    checks: &mut Checks,
) -> Result<(), HarnessError> {
    let q = arr.q();
    let n = arr.len();
    let report = decide_freeness(arr)?;
    let free = report.verdict == Verdict::Free;
    checks.check("decided", report.verdict != Verdict::Undetermined, || {
        format!("generator degrees {:?}", report.generator_degrees)
    });
    checks.check("certificate_reverifies", report.verify(arr), || {
        report.certificate.kind().to_string()
    });
    let ring = PolyRing::new(arr.ctx().clone(), 3);
    let fields = [0, 1, 2].map(|k| Derivation::frobenius(&ring, k));
    checks.check(
        "frobenius_fields_logarithmic",
        fields.iter().all(|d| d.is_logarithmic(&ring, arr)),
        String::new,
    );
    if let Some(exps) = &report.exponents {
        let roots: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
        checks.check(
            "free_matches_char_poly",
            cp.integer_roots() == Some(roots),
            || format!("exponents {exps:?}, chi = {cp}"),
        );
        let hilbert_ok = report
            .hilbert
            .iter()
            .enumerate()
            .all(|(d, &dim)| dim == free_hilbert_value(3, exps, d as u32));
        checks.check("hilbert_consistent", hilbert_ok, || {
            format!("{:?}", report.hilbert)
        });
    }
    if record.chi_q == 0 {
        let expected = vanishing_exponents(q, 3, n);
        checks.check(
            "vanishing_implies_free",
            free && report.exponents == expected,
            || {
                format!(
                    "verdict {}, exponents {:?}, expected {expected:?}",
                    report.verdict, report.exponents
                )
            },
        );
    }
    if n >= 2 * q as usize && free {
        checks.check("free_implies_vanishing", record.chi_q == 0, || {
            format!("chi(q) = {}", record.chi_q)
        });
        let pattern = exponent_pattern(q, n, report.exponents.as_deref().unwrap_or(&[]));
        record.pattern = Some(pattern);
        checks.check(
            "exponent_dichotomy",
            pattern != ExponentPattern::Neither,
            || format!("exponents {:?}", report.exponents),
        );
    }
    if n + 2 >= 2 * q as usize {
        let prediction = predict_freeness(arr, cp)?;
        record.prediction = Some(prediction);
        checks.check("classification", prediction.free == free, || {
            format!(
                "predicted free = {}, decided {}",
                prediction.free, report.verdict
            )
        });
        if prediction.regime != Regime::Large && record.chi_q != 0 {
            let special = near_threshold_char_poly(q, prediction.regime).is_some_and(|p| p == *cp);
            checks.check("near_threshold", free == special, || {
                format!("chi = {cp}, decided {}", report.verdict)
            });
            if special {
                let lc = line_completion(arr)?;
                checks.check("line_completion", lc.is_some(), || {
                    "complement is not a union of punctured lines with a completing hyperplane"
                        .to_string()
                });
            }
        }
    }
    if arr.is_essential() {
        let bound_ok = match minimal_nontrivial_degree(arr) {
            Ok(d) => {
                record.minimal_nontrivial_degree = Some(d);
                match &report.exponents {
                    Some(e) => e[0] == 1 && e[1] <= q && e[1] == d,
                    None => d <= q,
                }
            }
            Err(LogError::DegreeBoundExceeded { .. }) => false,
            Err(e) => return Err(e.into()),
        };
        checks.check("exponent_bound", bound_ok, || {
            format!(
                "minimal nontrivial degree {:?}, exponents {:?}",
                record.minimal_nontrivial_degree, report.exponents
            )
        });
    }
    record.verdict = Some(report.verdict);
    record.exponents = report.exponents.clone();
    record.certificate = Some(report.certificate.kind());
    Ok(())
}

/// Sub-arrangements in scope, as index lists into `A_all`, with weights.
fn members(
    spec: &CensusSpec,
    n_all: usize,
    max_size: usize,
) -> Result<Vec<(Vec<usize>, u64)>, HarnessError> {
    let in_range = |k: usize| k >= spec.min_size && k <= max_size;
    let indices = |mask: u64| {
        (0..n_all)
            .filter(|i| mask >> i & 1 == 1)
            .collect::<Vec<_>>()
    };
    match spec.mode {
        CensusMode::Exhaustive => {
            let total = (n_all < 64)
                .then(|| 1u64 << n_all)
                .filter(|&t| t <= spec.subset_ceiling);
            let Some(total) = total else {
                return Err(HarnessError::CeilingExceeded {
                    needed: if n_all < 64 { 1 << n_all } else { u64::MAX },
                    ceiling: spec.subset_ceiling,
                });
            };
            Ok((0..total)
                .filter(|m| in_range(m.count_ones() as usize))
                .map(|m| (indices(m), 1))
                .collect())
        }
        CensusMode::OrbitReduced => Err(HarnessError::PreconditionMismatch(
            "orbit members are computed from the group action".into(),
        )),
        CensusMode::Sample { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::new();
            let mut attempts = 0u64;
            let budget = 1000 * n as u64 + 1000;
            while out.len() < n && attempts < budget {
                attempts += 1;
                let pick: Vec<usize> = (0..n_all).filter(|_| rng.random_bool(0.5)).collect();
                if in_range(pick.len()) && seen.insert(pick.clone()) {
                    out.push((pick, 1));
                }
            }
            Ok(out)
        }
    }
}

/// Runs a census.
pub fn run_census(spec: &CensusSpec) -> Result<CensusReport, HarnessError> {
    match spec.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| HarnessError::ThreadPool(e.to_string()))?
            .install(|| run_census_inner(spec)),
        None => run_census_inner(spec),
    }
}

fn run_census_inner(spec: &CensusSpec) -> Result<CensusReport, HarnessError> {
    let ctx = make_field(spec.p, spec.e)?;
    let all = all_hyperplanes(ctx, spec.ell)?;
    let n_all = all.len();
    let max_size = spec.max_size.unwrap_or(n_all).min(n_all);
    let scope = match spec.mode {
        CensusMode::OrbitReduced => {
            let gens = generator_perms(&all);
            orbit_representatives(&gens, n_all, spec.min_size, max_size, spec.orbit_ceiling)?
                .into_iter()
                .map(|o| {
                    let idx = (0..n_all)
                        .filter(|i| o.representative >> i & 1 == 1)
                        .collect();
                    (idx, o.size)
                })
                .collect()
        }
        _ => members(spec, n_all, max_size)?,
    };
    let arrangements: Vec<(Arrangement, u64)> = scope
        .into_iter()
        .map(|(idx, w)| (all.subset(&idx), w))
        .collect();
    let mut records: Vec<ClassificationRecord> = arrangements
        .par_iter()
        .map(|(a, w)| classify(a, *w))
        .collect::<Result<_, _>>()?;

    if spec.mode == CensusMode::Exhaustive {
        triple_checks(&arrangements, &mut records)?;
    }

    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&i, &j| records[i].id.cmp(&records[j].id));
    let arrangements: Vec<&Arrangement> = order.iter().map(|&i| &arrangements[i].0).collect();
    let mut slots: Vec<Option<ClassificationRecord>> = records.drain(..).map(Some).collect();
    let records: Vec<ClassificationRecord> =
        order.iter().map(|&i| slots[i].take().unwrap()).collect();

    let summary = summarize(spec, all.q(), max_size, &records, &arrangements);
    Ok(CensusReport { records, summary })
}

/// Deletion-restriction and addition-deletion over every `(A, H)` pair,
/// looking `A \ {H}` up among the census records.
fn triple_checks(
    arrangements: &[(Arrangement, u64)],
    records: &mut [ClassificationRecord],
) -> Result<(), HarnessError> {
    let lookup: HashMap<&str, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id.as_str(), i))
        .collect();
    let extra: Vec<Vec<CheckOutcome>> = arrangements
        .par_iter()
        .enumerate()
        .map(|(i, (a, _))| -> Result<Vec<CheckOutcome>, HarnessError> {
            let mut checks = Checks(Vec::new());
            if a.ell() < 2 {
                return Ok(checks.0);
            }
            let rec = &records[i];
            for h in a.hyperplanes() {
                let deleted = a.delete(h)?;
                let Some(&j) = lookup.get(deleted.id().as_str()) else {
                    continue;
                };
                let del = &records[j];
                let restricted = a.restrict(h)?.restricted;
                let cp_r = char_poly(&restricted)?;
                let lhs = CharPoly::from_coeffs_high_first(&rec.char_poly);
                let rhs = CharPoly::from_coeffs_high_first(&del.char_poly).sub(&cp_r)?;
                checks.check("deletion_restriction", lhs == rhs, || {
                    format!("hyperplane {h}")
                });
                if a.ell() == 3 && rec.verdict.is_some() && del.verdict.is_some() {
                    let r = restriction_exponents(&restricted)?;
                    let ok = addition_deletion_consistent(
                        rec.exponents.as_deref(),
                        del.exponents.as_deref(),
                        r.as_deref(),
                    );
                    checks.check("addition_deletion", ok, || {
                        format!(
                            "hyperplane {h}: exponents {:?} / {:?} / {r:?}",
                            rec.exponents, del.exponents
                        )
                    });
                    checks.observe(
                        "addition_deletion_by_size",
                        addition_deletion_by_size(
                            rec.exponents.as_deref(),
                            del.exponents.as_deref(),
                            restricted.len(),
                        ),
                    );
                }
            }
            Ok(checks.0)
        })
        .collect::<Result<_, _>>()?;
    for (r, e) in records.iter_mut().zip(extra) {
        r.checks.extend(e);
    }
    Ok(())
}

fn command_for(claim: &str) -> &'static str {
    match claim {
        "counting_oracles" => "freearr count --k 2",
        "zeros_descend" | "all_hyperplane_characterization" | "deletion_restriction" => {
            "freearr chi"
        }
        _ => "freearr free",
    }
}

fn summarize(
    spec: &CensusSpec,
    q: u32,
    max_size: usize,
    records: &[ClassificationRecord],
    arrangements: &[&Arrangement],
) -> CensusSummary {
    let mut checks: BTreeMap<&'static str, Tally> = BTreeMap::new();
    let mut observations: BTreeMap<&'static str, Tally> = BTreeMap::new();
    let mut verdicts = BTreeMap::new();
    let mut free_by_size: BTreeMap<usize, SizeTally> = BTreeMap::new();
    let mut patterns = BTreeMap::new();
    let mut undetermined = Vec::new();
    let mut findings = Vec::new();
    for (r, a) in records.iter().zip(arrangements) {
        for c in &r.checks {
            let map = if c.informational {
                &mut observations
            } else {
                &mut checks
            };
            let t = map.entry(c.claim).or_default();
            t.checked += 1;
            if !c.passed {
                t.violations += 1;
            }
            if !c.passed && !c.informational {
                findings.push(Finding {
                    claim: c.claim,
                    id: r.id.clone(),
                    detail: c.detail.clone(),
                    arrangement: write_arrangement(a),
                    command: format!("{} finding-{}.arr", command_for(c.claim), findings.len()),
                });
            }
        }
        if let Some(v) = r.verdict {
            *verdicts.entry(v.to_string()).or_insert(0) += 1;
            let s = free_by_size.entry(r.size).or_default();
            s.total += 1;
            if v == Verdict::Free {
                s.free += 1;
            }
            if v == Verdict::Undetermined {
                undetermined.push(r.id.clone());
            }
        }
        if let Some(p) = r.pattern {
            let key = serde_json::to_value(p)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            *patterns.entry(key).or_insert(0) += 1;
        }
    }
    CensusSummary {
        q,
        p: spec.p,
        e: spec.e,
        ell: spec.ell,
        mode: spec.mode.name(),
        seed: match spec.mode {
            CensusMode::Sample { seed, .. } => Some(seed),
            _ => None,
        },
        min_size: spec.min_size,
        max_size,
        records: records.len(),
        weighted_records: records.iter().map(|r| r.weight).sum(),
        checks,
        observations,
        verdicts,
        free_by_size,
        exponent_patterns: patterns,
        undetermined,
        findings,
    }
}
