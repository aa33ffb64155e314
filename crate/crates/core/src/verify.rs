//! Property ensembles that re-check every bound and equivalence in the
//! library against freshly sampled instances. Each ensemble reports
//! pass/fail counts, the worst residual seen, and a replayable witness for
//! the first failure. `run_verify` is the engine behind the `verify` CLI
//! command and the top-level regression gate.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::discrimination::diagonal_reduction_check;
use crate::error::Result;
use crate::metrics::{
    d_bures, d_hs, d_trace, fidelity, fuchs_vdg_check, root_fidelity, MetricKind,
};
use crate::numerics::matrix::ComplexMatrix;
use crate::numerics::perm::all_permutations;
use crate::numerics::random::{
    haar_unitary, random_channel_apply, random_density, random_ginibre,
    random_orthogonal_supports, rng_from_seed, split_seed,
};
use crate::orbits::{
    bures_orbit_bounds, eigen_difference_bounds, fidelity_orbit_bounds, horn_johnson_partial_sums,
    trace_orbit_bounds, trace_product_bounds, trace_product_bounds_hermitian,
    trace_unitary_max_check,
};
use crate::states::{diag_state, validate_state, DensityMatrix, Spectrum};
use crate::tol;
use rand::Rng;

/// Slack for identities that hold to rounding error.
pub const SLACK_TIGHT: f64 = 1e-9;
/// Slack for Monte-Carlo realized quantities against closed-form intervals.
pub const SLACK_SAMPLED: f64 = 1e-8;
/// Slack for symmetry of the metrics.
pub const SLACK_SYMMETRY: f64 = 1e-10;
/// Support overlap that near-maximal pairs are allowed in the converse
/// direction of the orthogonal-support equivalence.
pub const CONVERSE_OVERLAP: f64 = 1e-6;

/// Exponents exercised by the trace-product sandwich ensembles.
pub const POWER_GRID: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Named tolerance overrides; currently "overlap" is honoured.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            dims: (2..=6).collect(),
            samples: 1000,
            seed: 42,
            tolerances: BTreeMap::new(),
        }
    }
}

impl VerifyConfig {
    pub fn overlap_tol(&self) -> f64 {
        self.tolerances.get("overlap").copied().unwrap_or(tol::OVERLAP)
    }
}

/// First failing sample of an ensemble, with everything needed to replay it.
#[derive(Debug, Clone, Serialize)]
pub struct FailureWitness {
    pub replay_seed: u64,
    pub detail: String,
    pub inputs: serde_json::Value,
}

/// One row of the verification report: a property at one dimension.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyOutcome {
    pub property: String,
    pub dim: usize,
    pub samples: usize,
    pub passes: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureWitness>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub outcomes: Vec<PropertyOutcome>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::passed)
    }

    /// Fixed-column CSV: property,dim,samples,passes,failures,worst_residual,seed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("property,dim,samples,passes,failures,worst_residual,seed\n");
        for o in &self.outcomes {
            out.push_str(&format!(
                "{},{},{},{},{},{:.16e},{}\n",
                o.property, o.dim, o.samples, o.passes, o.failures, o.worst_residual, o.seed
            ));
        }
        out
    }
}

/// Accumulates one ensemble: a sample passes when its residual stays within
/// the ensemble slack; the first failure is kept as a replayable witness.
struct Tally {
    property: &'static str,
    dim: usize,
    slack: f64,
    seed: u64,
    samples: usize,
    passes: usize,
    failures: usize,
    worst: f64,
    witness: Option<FailureWitness>,
}

impl Tally {
    fn new(property: &'static str, dim: usize, slack: f64, seed: u64) -> Self {
        Self {
            property,
            dim,
            slack,
            seed,
            samples: 0,
            passes: 0,
            failures: 0,
            worst: 0.0,
            witness: None,
        }
    }

    fn record(
        &mut self,
        residual: f64,
        replay_seed: u64,
        witness: impl FnOnce() -> (String, serde_json::Value),
    ) {
        self.samples += 1;
        self.worst = self.worst.max(residual);
        if residual <= self.slack {
            self.passes += 1;
        } else {
            self.failures += 1;
            if self.witness.is_none() {
                let (detail, inputs) = witness();
                self.witness = Some(FailureWitness {
                    replay_seed,
                    detail,
                    inputs,
                });
            }
        }
    }

    fn finish(self) -> PropertyOutcome {
        PropertyOutcome {
            property: self.property.to_string(),
            dim: self.dim,
            samples: self.samples,
            passes: self.passes,
            failures: self.failures,
            worst_residual: self.worst,
            seed: self.seed,
            failure: self.witness,
        }
    }
}

/// Test-harness corruption hook: with the `corrupted-metrics` feature the
/// sampled trace distance is biased inside the symmetry check, so the
/// metric-axioms ensemble must fail and exercise the violation report.
fn corrupt(d: f64) -> f64 {
    #[cfg(feature = "corrupted-metrics")]
    {
        d + 0.05
    }
    #[cfg(not(feature = "corrupted-metrics"))]
    {
        d
    }
}

fn sample_state(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = rng_from_seed(seed);
    let rank = rng.gen_range(1..=dim);
    validate_state(&random_density(dim, rank, split_seed(seed, 1)))
        .expect("random_density output is a valid state")
}

fn sample_spectrum(dim: usize, seed: u64) -> Spectrum {
    sample_state(dim, seed).spectrum().clone()
}

fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let g = random_ginibre(dim, seed);
    ComplexMatrix::new((g.raw() + g.raw().adjoint()).scale(0.5)).expect("finite entries")
}

fn state_json(rho: &DensityMatrix) -> serde_json::Value {
    serde_json::to_value(rho.matrix()).expect("matrix serializes")
}

fn ensemble_seed(cfg: &VerifyConfig, id: u64, dim: usize) -> u64 {
    split_seed(split_seed(cfg.seed, id), dim as u64)
}

/// Run every property ensemble over the configured dimensions. Deterministic
/// for a fixed configuration; the per-sample seeds in failure witnesses
/// replay single instances.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifySummary> {
    let mut outcomes = Vec::new();
    let mut hs_witness = HsWitness::default();

    for &dim in &cfg.dims {
        outcomes.extend(metric_axioms(cfg, dim)?);
        outcomes.push(support_equivalence(cfg, dim)?);
        outcomes.push(orbit_containment(cfg, dim)?);
        outcomes.push(orbit_attainment(cfg, dim)?);
        outcomes.push(trace_product_sandwich(cfg, dim)?);
        outcomes.push(trace_product_hermitian_sandwich(cfg, dim)?);
        outcomes.push(eigen_difference_sandwich(cfg, dim)?);
        outcomes.push(von_neumann(cfg, dim)?);
        outcomes.push(horn_johnson(cfg, dim)?);
        outcomes.push(trace_unitary_max(cfg, dim)?);
        outcomes.push(fuchs_van_de_graaf(cfg, dim)?);
        outcomes.push(monotonicity(cfg, dim, &mut hs_witness)?);
        outcomes.push(proposition4_falsifier(cfg, dim)?);
    }
    outcomes.push(hs_witness.finish(cfg));
    Ok(VerifySummary { outcomes })
}

fn metric_axioms(cfg: &VerifyConfig, dim: usize) -> Result<Vec<PropertyOutcome>> {
    let seed = ensemble_seed(cfg, 1, dim);
    let mut symmetry = Tally::new("metric_symmetry", dim, SLACK_SYMMETRY, seed);
    let mut identity = Tally::new("metric_identity", dim, SLACK_TIGHT, seed);
    let mut triangle = Tally::new("metric_triangle", dim, SLACK_TIGHT, seed);
    let mut diameter = Tally::new("metric_diameter", dim, SLACK_TIGHT, seed);

    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let states = [
            sample_state(dim, split_seed(s, 0)),
            sample_state(dim, split_seed(s, 1)),
            sample_state(dim, split_seed(s, 2)),
        ];
        let witness = |detail: String, states: &[DensityMatrix]| {
            let inputs = json!({ "states": states.iter().map(state_json).collect::<Vec<_>>() });
            (detail, inputs)
        };

        let mut sym_res = 0.0_f64;
        let mut tri_res = 0.0_f64;
        let mut diam_res = 0.0_f64;
        let mut id_res = 0.0_f64;
        for metric in MetricKind::ALL {
            let d01 = metric.distance(&states[0], &states[1])?;
            let d10 = corrupt(metric.distance(&states[1], &states[0])?);
            let d02 = metric.distance(&states[0], &states[2])?;
            let d12 = metric.distance(&states[1], &states[2])?;
            sym_res = sym_res.max((d01 - d10).abs());
            tri_res = tri_res.max(d02 - d01 - d12).max(d01 - d02 - d12).max(d12 - d01 - d02);
            diam_res = diam_res.max(d01 - metric.diameter());
            // d(rho, rho): the flat metrics vanish to rounding error; for
            // Bures the subtraction 2 - 2*rf amplifies the ~1e-15 error of
            // the root fidelity to ~1e-7 after the square root, so the
            // identity is checked on the fidelity scale instead.
            id_res = id_res.max(match metric {
                MetricKind::Bures => 1.0 - root_fidelity(&states[0], &states[0])?,
                _ => metric.distance(&states[0], &states[0])?,
            });
        }
        symmetry.record(sym_res, s, || {
            witness(format!("asymmetry {:.3e}", sym_res), &states[..2])
        });
        identity.record(id_res, s, || {
            witness(format!("d(rho,rho) residual {:.3e}", id_res), &states[..1])
        });
        triangle.record(tri_res, s, || {
            witness(format!("triangle violated by {:.3e}", tri_res), &states)
        });
        diameter.record(diam_res.max(0.0), s, || {
            witness(format!("diameter exceeded by {:.3e}", diam_res), &states[..2])
        });
    }
    Ok(vec![
        symmetry.finish(),
        identity.finish(),
        triangle.finish(),
        diameter.finish(),
    ])
}

fn support_equivalence(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 2, dim);
    let mut tally = Tally::new("orthogonal_support_equivalence", dim, SLACK_SAMPLED, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let mut rng = rng_from_seed(s);
        let r1 = rng.gen_range(1..dim.max(2));
        let r2 = rng.gen_range(1..=(dim - r1).max(1));
        let pair = random_orthogonal_supports(dim, &[r1, r2], split_seed(s, 0))?;
        let rho1 = validate_state(&pair[0])?;
        let rho2 = validate_state(&pair[1])?;

        // forward: disjoint supports force both monotone diameters
        let dtr = d_trace(&rho1, &rho2)?;
        let db = d_bures(&rho1, &rho2)?;
        let mut residual = (dtr - 1.0).abs().max((db - 2.0_f64.sqrt()).abs());

        // converse, on a generic pair: near-maximal distance must mean
        // near-orthogonal supports
        let g1 = sample_state(dim, split_seed(s, 1));
        let g2 = sample_state(dim, split_seed(s, 2));
        for (a, b) in [(&rho1, &rho2), (&g1, &g2)] {
            let dtr = d_trace(a, b)?;
            let db = d_bures(a, b)?;
            if dtr > 1.0 - SLACK_SAMPLED || db > 2.0_f64.sqrt() - SLACK_SAMPLED {
                let p1 = crate::states::support_projector(a, tol::RANK)?;
                let p2 = crate::states::support_projector(b, tol::RANK)?;
                let overlap = p1.overlap(&p2)?;
                if overlap > CONVERSE_OVERLAP {
                    residual = residual.max(1.0 + overlap);
                }
            }
        }
        tally.record(residual, s, || {
            (
                format!("equivalence residual {:.3e}", residual),
                json!({ "states": [state_json(&rho1), state_json(&rho2)] }),
            )
        });
    }
    Ok(tally.finish())
}

fn orbit_containment(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 3, dim);
    let mut tally = Tally::new("orbit_bound_containment", dim, SLACK_SAMPLED, seed);
    let haar_per_pair = (cfg.samples / 10).clamp(1, 100);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let p = sample_spectrum(dim, split_seed(s, 0));
        let q = sample_spectrum(dim, split_seed(s, 1));
        let (f_lo, f_hi) = fidelity_orbit_bounds(&p, &q)?;
        let (b_lo, b_hi) = bures_orbit_bounds(&p, &q)?;
        let (t_lo, t_hi) = trace_orbit_bounds(&p, &q)?;
        let rho1 = diag_state(&p);
        let base2 = diag_state(&q);
        let mut residual = 0.0_f64;
        for j in 0..haar_per_pair {
            let u = haar_unitary(dim, split_seed(s, 2 + j as u64));
            let rho2 = validate_state(&base2.matrix().conjugate_by(&u)?)?;
            let f = fidelity(&rho1, &rho2)?;
            let db = d_bures(&rho1, &rho2)?;
            let dt = d_trace(&rho1, &rho2)?;
            residual = residual
                .max(f_lo - f)
                .max(f - f_hi)
                .max(b_lo - db)
                .max(db - b_hi)
                .max(t_lo - dt)
                .max(dt - t_hi);
        }
        tally.record(residual.max(0.0), s, || {
            (
                format!("realized value escapes interval by {:.3e}", residual),
                json!({ "p": p.values(), "q": q.values() }),
            )
        });
    }
    Ok(tally.finish())
}

fn orbit_attainment(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 4, dim);
    let mut tally = Tally::new("orbit_bound_attainment", dim, SLACK_TIGHT, seed);
    let perms = all_permutations(dim)?;
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let p = sample_spectrum(dim, split_seed(s, 0));
        let q = sample_spectrum(dim, split_seed(s, 1));
        let mut residual = 0.0_f64;
        for metric in [MetricKind::Trace, MetricKind::Bures] {
            let (lower, upper) = match metric {
                MetricKind::Trace => trace_orbit_bounds(&p, &q)?,
                _ => bures_orbit_bounds(&p, &q)?,
            };
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for perm in &perms {
                let d = metric.classical_distance(p.values(), &perm.apply(q.values()));
                min = min.min(d);
                max = max.max(d);
            }
            residual = residual
                .max((lower - min).abs())
                .max((upper - max).abs());
        }
        tally.record(residual, s, || {
            (
                format!("permutation extremes miss bounds by {:.3e}", residual),
                json!({ "p": p.values(), "q": q.values() }),
            )
        });
    }
    Ok(tally.finish())
}

fn trace_product_sandwich(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 5, dim);
    let mut tally = Tally::new("trace_product_sandwich", dim, SLACK_TIGHT, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let rho = sample_state(dim, split_seed(s, 0));
        let sigma = sample_state(dim, split_seed(s, 1));
        let mut residual = 0.0_f64;
        for &sp in &POWER_GRID {
            for &tp in &POWER_GRID {
                let (lo, mid, hi) = trace_product_bounds(&rho, &sigma, sp, tp)?;
                residual = residual.max(lo - mid).max(mid - hi);
            }
        }
        tally.record(residual.max(0.0), s, || {
            (
                format!("sandwich violated by {:.3e}", residual),
                json!({ "states": [state_json(&rho), state_json(&sigma)] }),
            )
        });
    }
    Ok(tally.finish())
}

fn trace_product_hermitian_sandwich(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 6, dim);
    let mut tally = Tally::new("trace_product_hermitian_sandwich", dim, SLACK_TIGHT, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let rho = sample_state(dim, split_seed(s, 0));
        let sigma = random_hermitian(dim, split_seed(s, 1));
        let mut residual = 0.0_f64;
        for &sp in &POWER_GRID {
            let (lo, mid, hi) = trace_product_bounds_hermitian(&rho, &sigma, sp)?;
            residual = residual.max(lo - mid).max(mid - hi);
        }
        tally.record(residual.max(0.0), s, || {
            (
                format!("hermitian sandwich violated by {:.3e}", residual),
                json!({ "rho": state_json(&rho), "sigma": serde_json::to_value(&sigma).unwrap() }),
            )
        });
    }
    Ok(tally.finish())
}

fn eigen_difference_sandwich(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 7, dim);
    let mut tally = Tally::new("eigen_difference_sandwich", dim, SLACK_TIGHT, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let rho1 = sample_state(dim, split_seed(s, 0));
        let rho2 = sample_state(dim, split_seed(s, 1));
        let (lo, mid, hi) = eigen_difference_bounds(&rho1, &rho2)?;
        let residual = (lo - mid).max(mid - hi).max(0.0);
        tally.record(residual, s, || {
            (
                format!("eigenvalue sandwich violated by {:.3e}", residual),
                json!({ "states": [state_json(&rho1), state_json(&rho2)] }),
            )
        });
    }
    Ok(tally.finish())
}

fn von_neumann(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 8, dim);
    let mut tally = Tally::new("von_neumann_inequality", dim, SLACK_TIGHT, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let a = random_ginibre(dim, split_seed(s, 0));
        let b = random_ginibre(dim, split_seed(s, 1));
        let (lhs, rhs) = crate::orbits::von_neumann_bound(&a, &b)?;
        let residual = (lhs - rhs).max(0.0);
        tally.record(residual, s, || {
            (
                format!("|Tr AB| exceeds singular bound by {:.3e}", residual),
                json!({ "a": serde_json::to_value(&a).unwrap(), "b": serde_json::to_value(&b).unwrap() }),
            )
        });
    }
    Ok(tally.finish())
}

fn horn_johnson(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 9, dim);
    let mut tally = Tally::new("horn_johnson_partial_sums", dim, SLACK_TIGHT, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let a = random_ginibre(dim, split_seed(s, 0));
        let b = random_ginibre(dim, split_seed(s, 1));
        let mut residual = 0.0_f64;
        for j in 1..=dim {
            let (lhs, rhs) = horn_johnson_partial_sums(&a, &b, j)?;
            residual = residual.max(lhs - rhs);
        }
        tally.record(residual.max(0.0), s, || {
            (
                format!("partial sums exceed bound by {:.3e}", residual),
                json!({ "a": serde_json::to_value(&a).unwrap(), "b": serde_json::to_value(&b).unwrap() }),
            )
        });
    }
    Ok(tally.finish())
}

fn trace_unitary_max(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 10, dim);
    let mut tally = Tally::new("trace_unitary_max", dim, SLACK_TIGHT, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let a = random_ginibre(dim, split_seed(s, 0));
        let check = trace_unitary_max_check(&a, 10, split_seed(s, 1))?;
        let residual = (check.achieved - check.analytic)
            .abs()
            .max(check.best_found - check.analytic);
        tally.record(residual, s, || {
            (
                format!("maximizer misses ||A||_1 by {:.3e}", residual),
                json!({ "a": serde_json::to_value(&a).unwrap() }),
            )
        });
    }
    Ok(tally.finish())
}

fn fuchs_van_de_graaf(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 11, dim);
    let mut tally = Tally::new("fuchs_van_de_graaf", dim, SLACK_TIGHT, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let rho1 = sample_state(dim, split_seed(s, 0));
        let rho2 = sample_state(dim, split_seed(s, 1));
        let (lo, dtr, hi) = fuchs_vdg_check(&rho1, &rho2)?;
        let residual = (lo - dtr).max(dtr - hi).max(0.0);
        tally.record(residual, s, || {
            (
                format!("sandwich violated by {:.3e}", residual),
                json!({ "states": [state_json(&rho1), state_json(&rho2)] }),
            )
        });
    }
    Ok(tally.finish())
}

/// Tracks Hilbert-Schmidt increases across the monotonicity ensemble; at
/// least one must appear or the non-monotonicity demonstration failed.
#[derive(Default)]
struct HsWitness {
    draws: usize,
    increases: usize,
    largest: f64,
}

impl HsWitness {
    fn finish(self, cfg: &VerifyConfig) -> PropertyOutcome {
        // Qubit channels cannot expand the HS distance (the Bloch-ball
        // image is an ellipsoid inside it), so the demonstration is only
        // owed when some configured dimension admits one.
        let demonstrable = cfg.dims.iter().any(|&d| d >= 3);
        let missing = demonstrable && self.increases == 0;
        PropertyOutcome {
            property: "hs_nonmonotonicity_witness".to_string(),
            dim: 0,
            samples: self.draws,
            passes: self.increases,
            failures: usize::from(missing),
            worst_residual: self.largest,
            seed: cfg.seed,
            failure: missing.then(|| FailureWitness {
                replay_seed: cfg.seed,
                detail: "no Hilbert-Schmidt increase observed under any sampled channel".into(),
                inputs: serde_json::Value::Null,
            }),
        }
    }
}

/// The measure-and-relabel channel X -> sum_k Tr(P_k X) |k><k| with P_0 of
/// rank dim-1 and P_1 = |dim-1><dim-1|. It is CPTP, yet it stretches the
/// Hilbert-Schmidt distance of the pair {P_0/(dim-1), P_1} from
/// sqrt(1 + 1/(dim-1)) up to the full sqrt(2); random dilation channels
/// essentially never exhibit the effect, so the witness is constructed.
/// Qubit channels cannot expand HS distance at all (the image of the Bloch
/// ball is an ellipsoid inside it), hence the dim >= 3 requirement.
fn constructed_hs_increase(dim: usize) -> Option<f64> {
    if dim < 3 {
        return None;
    }
    let flat = 1.0 / (dim - 1) as f64;
    let mut p1 = vec![flat; dim];
    p1[dim - 1] = 0.0;
    let mut p2 = vec![0.0; dim];
    p2[dim - 1] = 1.0;
    let rho1 = validate_state(&ComplexMatrix::diag_real(&p1)).ok()?;
    let rho2 = validate_state(&ComplexMatrix::diag_real(&p2)).ok()?;

    // Phi(rho1) = |0><0|, Phi(rho2) = |1><1|
    let mut o1 = vec![0.0; dim];
    o1[0] = 1.0;
    let mut o2 = vec![0.0; dim];
    o2[1] = 1.0;
    let out1 = validate_state(&ComplexMatrix::diag_real(&o1)).ok()?;
    let out2 = validate_state(&ComplexMatrix::diag_real(&o2)).ok()?;

    let before = d_hs(&rho1, &rho2).ok()?;
    let after = d_hs(&out1, &out2).ok()?;
    // the monotone metrics must not move: both pairs sit at diameter
    debug_assert!((d_trace(&out1, &out2).ok()? - d_trace(&rho1, &rho2).ok()?) <= SLACK_SAMPLED);
    (after > before + SLACK_SAMPLED).then_some(after - before)
}

fn monotonicity(
    cfg: &VerifyConfig,
    dim: usize,
    hs_witness: &mut HsWitness,
) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 12, dim);
    let mut tally = Tally::new("monotonicity_trace_bures", dim, SLACK_SAMPLED, seed);
    for k in 0..cfg.samples {
        let s = split_seed(seed, k as u64);
        let rho1 = sample_state(dim, split_seed(s, 0));
        let rho2 = sample_state(dim, split_seed(s, 1));
        let mut rng = rng_from_seed(split_seed(s, 2));
        let env_dim = rng.gen_range(2..=dim.max(2));
        let channel_seed = split_seed(s, 3);
        let out1 = validate_state(&random_channel_apply(rho1.matrix(), env_dim, channel_seed)?)?;
        let out2 = validate_state(&random_channel_apply(rho2.matrix(), env_dim, channel_seed)?)?;

        let residual = (d_trace(&out1, &out2)? - d_trace(&rho1, &rho2)?)
            .max(d_bures(&out1, &out2)? - d_bures(&rho1, &rho2)?)
            .max(0.0);
        tally.record(residual, s, || {
            (
                format!("monotone distance increased by {:.3e}", residual),
                json!({
                    "states": [state_json(&rho1), state_json(&rho2)],
                    "env_dim": env_dim,
                    "channel_seed": channel_seed,
                }),
            )
        });

        let hs_gain = d_hs(&out1, &out2)? - d_hs(&rho1, &rho2)?;
        hs_witness.draws += 1;
        if hs_gain > SLACK_SAMPLED {
            hs_witness.increases += 1;
            hs_witness.largest = hs_witness.largest.max(hs_gain);
        }
    }
    if let Some(gain) = constructed_hs_increase(dim) {
        hs_witness.draws += 1;
        hs_witness.increases += 1;
        hs_witness.largest = hs_witness.largest.max(gain);
    }
    Ok(tally.finish())
}

fn proposition4_falsifier(cfg: &VerifyConfig, dim: usize) -> Result<PropertyOutcome> {
    let seed = ensemble_seed(cfg, 13, dim);
    let mut tally = Tally::new("proposition4_falsifier", dim, 0.5, seed);
    let ensembles = (cfg.samples / 20).clamp(1, 100);
    let rotations = (cfg.samples / 20).clamp(5, 50);
    for k in 0..ensembles {
        let s = split_seed(seed, k as u64);
        let mut rng = rng_from_seed(s);
        let count = rng.gen_range(2..=4);
        let spectra: Vec<Spectrum> = (0..count)
            .map(|i| sample_spectrum(dim, split_seed(s, i as u64)))
            .collect();
        let ok = diagonal_reduction_check(
            &spectra,
            cfg.overlap_tol(),
            rotations,
            split_seed(s, 100),
        )?;
        tally.record(if ok { 0.0 } else { 1.0 }, s, || {
            (
                "a rotated ensemble beat the diagonal one".to_string(),
                json!({ "spectra": spectra.iter().map(|p| p.values().to_vec()).collect::<Vec<_>>() }),
            )
        });
    }
    Ok(tally.finish())
}
