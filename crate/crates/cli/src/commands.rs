//! Subcommand definitions and their handlers. Handlers return the text for
//! stdout and whether the tested relation held; errors map to exit code 2.

use std::num::NonZeroU64;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use divdom::rational::{format_rational, parse_rational};
use divdom::{
    check_majorization, common_refinement, decompose_ssd, expected_shortfall, fsd_violation,
    kantorovich, lift_delta_gamma, mixture, mps_coupling, quantize_values, ssd_gap,
    ssd_violation, verify_div1_certificate, Error, Majorization, MartingaleCoupling, SimpleDist,
    WeightVector,
};
use serde::Serialize;
use serde_json::json;

use crate::demo::{demo_csv, run_demo, DemoParams};
use crate::error::CliError;
use crate::io::{
    dist_to_json, numbers, read_certificate, read_dist, terms_json, to_json, write_text,
    CertificateJson, CouplingJson, DistJson, JointJson, Number,
};

#[derive(Debug, Parser)]
#[command(name = "divdom", version, about = "Exact stochastic dominance and diversification certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    Fsd,
    Ssd,
    Majorization,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether A dominates B (exit 0 holds, 1 fails).
    Check {
        relation: Relation,
        a: PathBuf,
        b: PathBuf,
    },
    /// Expected Shortfall at level alpha.
    Es {
        input: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// Write XI as a convex combination of rearranged copies of ETA.
    Certify {
        xi: PathBuf,
        eta: PathBuf,
        /// Certificate file; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file against XI and ETA.
    Verify {
        xi: PathBuf,
        eta: PathBuf,
        certificate: PathBuf,
    },
    /// Smallest non-negative lift making XI + delta dominate ETA + gamma.
    Lift { xi: PathBuf, eta: PathBuf },
    /// Split XI >=ssd ETA into a first order step and an equal-mean step.
    Decompose { xi: PathBuf, eta: PathBuf },
    /// Martingale coupling realizing ETA as a mean-preserving spread of XI.
    Mps { xi: PathBuf, eta: PathBuf },
    /// Kantorovich distance between A and B.
    Kantorovich { a: PathBuf, b: PathBuf },
    /// Mixture of the inputs; uniform weights by default.
    Mix {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Comma-separated weights, one per input.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<String>>,
    },
    /// Round every value to the nearest multiple of 1/denominator.
    Quantize {
        input: PathBuf,
        #[arg(long)]
        denominator: NonZeroU64,
    },
    /// Averages of n Exp(1) losses for n = 1, 2, 4, ...: CSV of ES and distance to 1.
    DemoLln {
        #[arg(long, default_value_t = 6)]
        max_doublings: u32,
        #[arg(long, default_value = "1/20")]
        alpha: String,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Sample instead of discretizing the quantile function.
        #[arg(long)]
        seed: Option<u64>,
        /// CSV file; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of a successfully executed command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub holds: bool,
    pub stdout: String,
    /// Why the relation failed, for stderr.
    pub reason: Option<String>,
}

impl Outcome {
    fn success(stdout: String) -> Self {
        Outcome {
            holds: true,
            stdout,
            reason: None,
        }
    }

    fn failure(stdout: String, reason: String) -> Self {
        Outcome {
            holds: false,
            stdout,
            reason: Some(reason),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.holds {
            0
        } else {
            1
        }
    }
}

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Check { relation, a, b } => cmd_check(relation, &a, &b),
        Command::Es { input, alpha } => cmd_es(&input, &alpha),
        Command::Certify { xi, eta, out } => cmd_certify(&xi, &eta, out.as_deref()),
        Command::Verify {
            xi,
            eta,
            certificate,
        } => cmd_verify(&xi, &eta, &certificate),
        Command::Lift { xi, eta } => cmd_lift(&xi, &eta),
        Command::Decompose { xi, eta } => cmd_decompose(&xi, &eta),
        Command::Mps { xi, eta } => cmd_mps(&xi, &eta),
        Command::Kantorovich { a, b } => cmd_kantorovich(&a, &b),
        Command::Mix { inputs, weights } => cmd_mix(&inputs, weights.as_deref()),
        Command::Quantize { input, denominator } => cmd_quantize(&input, denominator),
        Command::DemoLln {
            max_doublings,
            alpha,
            grid,
            seed,
            out,
        } => {
            let params = DemoParams {
                max_doublings,
                alpha: parse_rational(&alpha)?,
                grid,
                seed,
            };
            cmd_demo_lln(&params, out.as_deref())
        }
    }
}

/// Failed preconditions of the certificate constructions, as a reason.
fn precondition_reason(e: &Error) -> Option<String> {
    match e {
        Error::MeansDiffer { .. } => Some("means differ".into()),
        Error::SsdViolated { alpha, .. } => {
            Some(format!("ssd violated at α={}", format_rational(alpha)))
        }
        _ => None,
    }
}

fn precondition_failure(e: Error) -> Result<Outcome, CliError> {
    match precondition_reason(&e) {
        Some(reason) => {
            let report = json!({ "holds": false, "reason": reason, "detail": e.to_string() });
            Ok(Outcome::failure(to_json(&report), reason))
        }
        None => Err(e.into()),
    }
}

#[derive(Serialize)]
struct CheckReport {
    relation: &'static str,
    holds: bool,
    mean_a: Number,
    mean_b: Number,
    /// Largest `int_0^alpha (q_b - q_a)`, clamped at zero.
    ssd_gap: Number,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<serde_json::Value>,
}

pub fn cmd_check(relation: Relation, a: &Path, b: &Path) -> Result<Outcome, CliError> {
    let (da, db) = (read_dist(a)?, read_dist(b)?);
    let (name, failure) = match relation {
        Relation::Fsd => (
            "fsd",
            fsd_violation(&da, &db).map(|x| {
                let witness = json!({
                    "x": Number::from(&x),
                    "cdf_a": Number::from(&da.cdf_le(&x)),
                    "cdf_b": Number::from(&db.cdf_le(&x)),
                });
                (witness, format!("fsd violated at x={}", format_rational(&x)))
            }),
        ),
        Relation::Ssd => (
            "ssd",
            ssd_violation(&da, &db).map(|(alpha, gap)| {
                let witness = json!({ "alpha": Number::from(&alpha), "gap": Number::from(&gap) });
                (witness, format!("ssd violated at α={}", format_rational(&alpha)))
            }),
        ),
        Relation::Majorization => {
            let (ga, gb) = common_refinement(&da, &db)?;
            let failure = match check_majorization(&ga, &gb)? {
                Majorization::Holds => None,
                Majorization::ViolatedAt(prefix) => Some((
                    json!({ "prefix": prefix, "n": ga.n() }),
                    format!("majorization violated at prefix {prefix} of {}", ga.n()),
                )),
            };
            ("majorization", failure)
        }
    };
    let report = CheckReport {
        relation: name,
        holds: failure.is_none(),
        mean_a: Number::from(&da.mean()),
        mean_b: Number::from(&db.mean()),
        ssd_gap: Number::from(&ssd_gap(&da, &db)),
        witness: failure.as_ref().map(|(w, _)| w.clone()),
    };
    let stdout = to_json(&report);
    Ok(match failure {
        None => Outcome::success(stdout),
        Some((_, reason)) => Outcome::failure(stdout, reason),
    })
}

pub fn cmd_es(input: &Path, alpha: &str) -> Result<Outcome, CliError> {
    let d = read_dist(input)?;
    let alpha = parse_rational(alpha)?;
    let es = expected_shortfall(&d, &alpha)?;
    let report = json!({ "alpha": Number::from(&alpha), "es": Number::from(&es) });
    Ok(Outcome::success(to_json(&report)))
}

pub fn cmd_certify(xi: &Path, eta: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let (dx, de) = (read_dist(xi)?, read_dist(eta)?);
    let witness = match divdom::certify_div1(&dx, &de) {
        Ok(w) => w,
        Err(e) => return precondition_failure(e),
    };
    let coupling = mps_coupling(&dx, &de)?;
    let doc = CertificateJson {
        n: witness.certificate.n(),
        terms: terms_json(&witness.certificate),
        joint: Some(JointJson::from(&witness.joint)),
        coupling: Some(CouplingJson::from(&coupling)),
    };
    // never hand out a certificate that does not check
    let reread = doc.certificate()?;
    if !verify_div1_certificate(&dx, &de, &reread)? || !coupling.is_valid() {
        return Err(Error::InvalidCertificate("constructed certificate failed verification".into()).into());
    }
    let text = to_json(&doc);
    match out {
        Some(path) => {
            write_text(path, &text)?;
            let summary = json!({
                "holds": true,
                "n": doc.n,
                "terms": doc.terms.len(),
                "out": path.display().to_string(),
            });
            Ok(Outcome::success(to_json(&summary)))
        }
        None => Ok(Outcome::success(text)),
    }
}

pub fn cmd_verify(xi: &Path, eta: &Path, certificate: &Path) -> Result<Outcome, CliError> {
    let (dx, de) = (read_dist(xi)?, read_dist(eta)?);
    let cert = read_certificate(certificate)?;
    let valid = verify_div1_certificate(&dx, &de, &cert)?;
    let stdout = to_json(&json!({ "valid": valid, "n": cert.n(), "terms": cert.terms().len() }));
    Ok(if valid {
        Outcome::success(stdout)
    } else {
        Outcome::failure(stdout, "certificate does not witness the relation".into())
    })
}

pub fn cmd_lift(xi: &Path, eta: &Path) -> Result<Outcome, CliError> {
    let (dx, de) = (read_dist(xi)?, read_dist(eta)?);
    let lift = lift_delta_gamma(&dx, &de)?;
    let report = json!({
        "n": lift.delta.len(),
        "xi_grid": numbers(lift.xi_grid.values()),
        "eta_grid": numbers(lift.eta_grid.values()),
        "delta": numbers(&lift.delta),
        "gamma_top": Number::from(&lift.gamma_top),
        "mean_delta": Number::from(&lift.mean_delta()),
        "mean_gamma": Number::from(&lift.mean_gamma()),
        "lifted_xi": DistJson::from(&lift.lifted_xi),
        "lifted_eta": DistJson::from(&lift.lifted_eta),
    });
    Ok(Outcome::success(to_json(&report)))
}

pub fn cmd_decompose(xi: &Path, eta: &Path) -> Result<Outcome, CliError> {
    let (dx, de) = (read_dist(xi)?, read_dist(eta)?);
    let result = match decompose_ssd(&dx, &de) {
        Ok(r) => r,
        Err(e) => return precondition_failure(e),
    };
    let report = json!({
        "c": result.c.as_ref().map(Number::from),
        "zeta": DistJson::from(&result.zeta),
    });
    Ok(Outcome::success(to_json(&report)))
}

fn coupling_report(c: &MartingaleCoupling) -> serde_json::Value {
    json!({ "n": c.n(), "valid": c.is_valid(), "coupling": CouplingJson::from(c) })
}

pub fn cmd_mps(xi: &Path, eta: &Path) -> Result<Outcome, CliError> {
    let (dx, de) = (read_dist(xi)?, read_dist(eta)?);
    match mps_coupling(&dx, &de) {
        Ok(c) => Ok(Outcome::success(to_json(&coupling_report(&c)))),
        Err(e) => precondition_failure(e),
    }
}

pub fn cmd_kantorovich(a: &Path, b: &Path) -> Result<Outcome, CliError> {
    let d = kantorovich(&read_dist(a)?, &read_dist(b)?);
    Ok(Outcome::success(to_json(&json!({ "distance": Number::from(&d) }))))
}

pub fn cmd_mix(inputs: &[PathBuf], weights: Option<&[String]>) -> Result<Outcome, CliError> {
    let dists = inputs
        .iter()
        .map(|p| read_dist(p))
        .collect::<Result<Vec<SimpleDist>, _>>()?;
    let w = match weights {
        None => WeightVector::uniform(dists.len())?,
        Some(ws) => {
            if ws.len() != dists.len() {
                return Err(CliError::Parameter(format!(
                    "{} weights for {} inputs",
                    ws.len(),
                    dists.len()
                )));
            }
            WeightVector::new(ws.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?)?
        }
    };
    Ok(Outcome::success(dist_to_json(&mixture(&dists, &w)?)))
}

pub fn cmd_quantize(input: &Path, denominator: NonZeroU64) -> Result<Outcome, CliError> {
    let d = read_dist(input)?;
    Ok(Outcome::success(dist_to_json(&quantize_values(&d, denominator))))
}

pub fn cmd_demo_lln(params: &DemoParams, out: Option<&Path>) -> Result<Outcome, CliError> {
    let csv = demo_csv(&run_demo(params)?);
    match out {
        Some(path) => {
            write_text(path, &csv)?;
            Ok(Outcome::success(String::new()))
        }
        None => Ok(Outcome::success(csv)),
    }
}
