//! The full verification suite behind `qha verify`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::bochner_wiener::{verify_bochner, verify_wiener};
use crate::convolution::{verify_algebra, verify_positivity, verify_young};
use crate::coorbit::verify_coorbit;
use crate::correspondence::{verify_berezin_lieb, verify_rule, verify_uniqueness, ConvexFn, CorrespondenceRule};
use crate::error::Result;
use crate::fourier::verify_fourier;
use crate::group::FiniteAbelianGroup;
use crate::phase_space::{Multiplier, MultiplierKind, PhaseSpace, DEFAULT_CUBIC_LIMIT};
use crate::random::{self, GENERATOR_NAME};
use crate::representation::Representation;

/// Slack for the Young and Hausdorff–Young audits: `lhs ≤ rhs + slack·(1 + rhs)`.
pub const INEQUALITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub multiplier: Multiplier,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
}

impl RunConfig {
    pub fn new(multiplier: Multiplier, seed: u64, trials: usize, tol: f64) -> Self {
        Self {
            multiplier,
            seed,
            trials,
            tol,
        }
    }

    /// Canonical or Weyl multiplier on `group`.
    pub fn standard(group: &FiniteAbelianGroup, kind: MultiplierKind, seed: u64, trials: usize, tol: f64) -> Result<Self> {
        let multiplier = match kind {
            MultiplierKind::Weyl => Multiplier::weyl(group)?,
            MultiplierKind::Modified => {
                Multiplier::modified(&Multiplier::canonical(group), Multiplier::weyl_phase(group)?)?
            }
            _ => Multiplier::canonical(group),
        };
        Ok(Self::new(multiplier, seed, trials, tol))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub generator: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub group: String,
    pub multiplier: MultiplierKind,
    pub checks: Vec<CheckEntry>,
    pub failed: Vec<String>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn entry<T: Serialize>(name: &str, passed: bool, max_deviation: f64, details: &T) -> CheckEntry {
    CheckEntry {
        name: name.to_string(),
        passed,
        max_deviation,
        details: serde_json::to_value(details).expect("reports serialize"),
    }
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, &v| m.max(v))
}

/// Runs every audit. Each item draws from its own stream of the seeded
/// generator; a failed multiplier check stops the run early.
pub fn run_verify(config: &RunConfig) -> Result<SuiteReport> {
    let tol = config.tol;
    let trials = config.trials;
    let m = &config.multiplier;
    let mut checks = Vec::new();

    let mr = m.verify(tol, DEFAULT_CUBIC_LIMIT)?;
    let sym = m.symplectic_form().verify(tol);
    checks.push(entry(
        "multiplier",
        mr.passed,
        max_of(&[mr.cocycle_max_dev, mr.symmetry_max_dev, mr.normalization_max_dev, mr.unit_modulus_max_dev]),
        &mr,
    ));
    let heisenberg = mr.passed && sym.heisenberg;
    checks.push(entry(
        "symplectic",
        heisenberg,
        max_of(&[sym.bicharacter_max_dev, sym.antisymmetry_max_dev, sym.alternating_max_dev]),
        &sym,
    ));

    let rep = if heisenberg {
        let ps = PhaseSpace::new(m.clone())?;
        if m.kind() == MultiplierKind::Table {
            checks.push(entry(
                "representation",
                true,
                0.0,
                &json!({"skipped": "table multipliers have no built-in representation"}),
            ));
            None
        } else {
            Some(Representation::new(ps)?)
        }
    } else {
        None
    };

    if let Some(rep) = rep {
        let n = rep.dim();
        let mut stream = 0u64;
        let mut next = || {
            stream += 1;
            random::stream(config.seed, stream)
        };

        let ccr = rep.ccr_max_dev();
        let parity = rep.parity_max_dev();
        let unitarity = rep.unitarity_max_dev();
        let span = rep.span_rank();
        checks.push(entry(
            "ccr",
            max_of(&[ccr, parity, unitarity]) <= tol && span == n * n,
            max_of(&[ccr, parity, unitarity]),
            &json!({"ccr_max_dev": ccr, "parity_max_dev": parity, "unitarity_max_dev": unitarity, "span_rank": span}),
        ));

        let mut r = next();
        let mut moyal = 0.0f64;
        for _ in 0..trials {
            let v: Vec<_> = (0..4).map(|_| random::unit_vector(&mut r, n)).collect();
            moyal = moyal.max(rep.moyal_defect(&v[0], &v[1], &v[2], &v[3])?);
        }
        checks.push(entry("moyal", moyal <= tol, moyal, &json!({"trials": trials, "max_dev": moyal})));

        let alg = verify_algebra(&rep, trials, &mut next(), tol)?;
        checks.push(entry(
            "algebra",
            alg.passed,
            max_of(&[alg.commutativity_dev, alg.associativity_dev, alg.integral_dev, alg.unit_dev]),
            &alg,
        ));

        let young = verify_young(&rep, trials, &mut next(), INEQUALITY_SLACK)?;
        checks.push(entry("young", young.passed, (young.max_ratio - 1.0).max(0.0), &young));

        let pos = verify_positivity(&rep, trials, &mut next(), tol)?;
        checks.push(entry(
            "positivity",
            pos.passed,
            max_of(&[-pos.min_eig_fa, -pos.min_ab, pos.max_imag_ab]),
            &pos,
        ));

        let four = verify_fourier(&rep, trials, &mut next(), tol)?;
        let devs = [
            four.sigma_inversion_dev,
            four.sigma_plancherel_dev,
            four.sigma_convolution_dev,
            four.sigma_shift_dev,
            four.weyl_inversion_dev,
            four.convolution_fa_dev,
            four.convolution_ab_dev,
            four.shift_dev,
            four.dual_shift_dev,
            four.product_dev,
            four.adjoint_dev,
            four.inverse_adjoint_dev,
            four.wigner_integral_dev,
            four.modulation_dev.unwrap_or(0.0),
            four.hausdorff_young.plancherel_max_dev,
        ];
        checks.push(entry("fourier", four.passed, max_of(&devs), &four));

        let boch = verify_bochner(&rep, trials, &mut next(), tol)?;
        checks.push(entry("bochner", boch.passed, boch.max_roundtrip_dev, &boch));

        let wien = verify_wiener(&rep, trials.max(2), &mut next())?;
        checks.push(entry("wiener", wien.passed, 0.0, &wien));

        let mut r = next();
        let rule = CorrespondenceRule::new(random::density(&mut r, n), random::density(&mut r, n), tol)?;
        let rr = verify_rule(&rep, &rule, trials, &mut r, tol)?;
        let bl: Vec<_> = ConvexFn::ALL
            .iter()
            .map(|&phi| verify_berezin_lieb(&rep, &rule, phi, trials, &mut r, tol))
            .collect::<Result<_>>()?;
        let uq = verify_uniqueness(&rep, &rule, trials, &mut r, tol * 10.0)?;
        checks.push(entry(
            "correspondence",
            rr.passed && bl.iter().all(|b| b.passed) && uq.passed,
            max_of(&[
                rr.covariance_dev,
                rr.unit_function_dev,
                rr.unit_operator_dev,
                (-rr.kadison_schwarz_min).max(0.0),
                uq.b1_dev,
                uq.b2_dev,
                uq.associativity_dev,
            ]),
            &json!({"rule": rr, "berezin_lieb": bl, "uniqueness": uq}),
        ));

        let co = verify_coorbit(&rep, trials, &mut next(), tol)?;
        checks.push(entry(
            "coorbit",
            co.passed,
            max_of(&[co.isometry_dev, co.inversion_dev, co.kernel_dev, co.idempotence_dev, co.co2_dev, co.lp_anchor_dev]),
            &co,
        ));
    }

    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    Ok(SuiteReport {
        generator: GENERATOR_NAME,
        seed: config.seed,
        trials,
        tolerance: tol,
        group: m.group().to_string(),
        multiplier: m.kind(),
        passed: failed.is_empty(),
        failed,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::to_json;

    #[test]
    fn suite_passes_and_is_deterministic() {
        let g = FiniteAbelianGroup::new(&[3]).unwrap();
        let cfg = RunConfig::standard(&g, MultiplierKind::Weyl, 7, 5, 1e-9).unwrap();
        let a = run_verify(&cfg).unwrap();
        assert!(a.passed, "{}", to_json(&a));
        assert_eq!(to_json(&a), to_json(&run_verify(&cfg).unwrap()));
        assert_eq!(a.checks.len(), 12);
    }

    #[test]
    fn corrupted_table_stops_after_multiplier() {
        let g = FiniteAbelianGroup::new(&[2]).unwrap();
        let mut table = Multiplier::canonical(&g).to_table();
        table[5] = -table[5];
        let m = Multiplier::from_table(&g, table).unwrap();
        let report = run_verify(&RunConfig::new(m, 1, 3, 1e-9)).unwrap();
        assert!(!report.passed);
        let mc = report.check("multiplier").unwrap();
        assert!(!mc.passed);
        assert!(mc.details["cocycle_max_dev"].as_f64().unwrap() > 1.0);
        assert_eq!(report.checks.len(), 2);
    }

    #[test]
    fn valid_table_skips_representation_checks() {
        let g = FiniteAbelianGroup::new(&[2]).unwrap();
        let m = Multiplier::from_table(&g, Multiplier::canonical(&g).to_table()).unwrap();
        let report = run_verify(&RunConfig::new(m, 1, 3, 1e-9)).unwrap();
        assert!(report.passed);
        assert!(report.check("representation").is_some());
    }
}
