use crate::{Cli, Command};
use numrange::attainment::{self, Analysis, Quantity, Verifier};
use numrange::hilbert::{self, RangeOptions};
use numrange::normed;
use numrange::oracle;
use numrange::{gallery, io, sampling, Error, Field, Operator, SpaceSpec, Tolerances};
use serde_json::{json, Value};
use std::path::Path;

/// Outcome category of a command, mapped onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Valid,
    Invalid,
    NotApplicable,
    Review,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok | Status::Valid | Status::Review => 0,
            Status::Invalid => 1,
            Status::NotApplicable => 4,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Valid => "VALID",
            Status::Invalid => "INVALID",
            Status::NotApplicable => "NOT-APPLICABLE",
            Status::Review => "REVIEW",
        }
    }

    fn of(valid: bool) -> Status {
        if valid {
            Status::Valid
        } else {
            Status::Invalid
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub report: Value,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

const PARSE: u8 = 2;
const PRECONDITION: u8 = 3;
const UNKNOWN_THEOREM: u8 = 5;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Malformed(_) | Error::InvalidPolygon(_) => PARSE,
            _ => PRECONDITION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure { code: PARSE, message: message.into() }
}

type Run<T> = std::result::Result<T, Failure>;

pub const THEOREMS: [&str; 17] = [
    "th-ct",
    "com-ct",
    "th-ctcom",
    "th-vt",
    "com-vt",
    "vt-alt",
    "mtvt",
    "general",
    "rank1",
    "rank2",
    "mc-global",
    "mc2d",
    "scspace",
    "nonempty",
    "com-nonempty",
    "lp-even",
    "mc-sufficient",
];

struct Config {
    space: SpaceSpec,
    opts: RangeOptions,
}

fn config(cli: &Cli) -> Run<Config> {
    let (space, _) = SpaceSpec::parse(&cli.space).map_err(|e| parse_failure(format!("--space: {e}")))?;
    let mut tol = Tolerances::default();
    for item in &cli.tol {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| parse_failure(format!("--tol expects NAME=VALUE, got {item:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| parse_failure(format!("tolerance {name} has a non-numeric value {value:?}")))?;
        tol.set(name.trim(), value)?;
    }
    if cli.resolution < 8 {
        return Err(Error::InvalidResolution(cli.resolution).into());
    }
    Ok(Config { space, opts: RangeOptions { resolution: cli.resolution, tol } })
}

fn read(path: &Path) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| parse_failure(format!("cannot read {}: {e}", path.display())))
}

fn load_operator(cli: &Cli, space: &SpaceSpec) -> Run<Operator> {
    let path = cli.input.as_ref().ok_or_else(|| parse_failure("--input is required"))?;
    let mut t = io::parse_operator(&read(path)?)?;
    if let Some(f) = &cli.field {
        t = t.with_field(io::parse_field(f)?)?;
    }
    space.check_dimension(t.n())?;
    Ok(t)
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn envelope(command: &str, status: Status, t: Option<&Operator>, space: &SpaceSpec, result: Value) -> Outcome {
    let mut report = json!({
        "command": command,
        "status": status.label(),
        "result": result,
    });
    if let Some(t) = t {
        report["operator"] = io::operator_to_json(t);
        report["space"] = space.to_json(t.n());
    }
    Outcome { status, report }
}

pub fn run(cli: &Cli) -> Run<Outcome> {
    match &cli.command {
        Command::Fov { csv } => fov(cli, csv.as_deref()),
        Command::Attain => attain(cli),
        Command::Verify { theorem, x } => verify(cli, theorem, x.as_deref()),
        Command::Gallery { item, perturb } => run_gallery(item.as_deref(), *perturb),
        Command::Oracle { samples } => run_oracle(cli, *samples),
    }
}

fn fov(cli: &Cli, csv: Option<&Path>) -> Run<Outcome> {
    let cfg = config(cli)?;
    if cfg.space != SpaceSpec::L2 {
        return Err(Error::PreconditionFailed("fov needs the l2 space".into()).into());
    }
    let t = load_operator(cli, &cfg.space)?;
    let sweep = hilbert::fov_sweep_with(&t, cfg.opts.resolution, &cfg.opts.tol)?;
    let summary = hilbert::range_summary(&t, &cfg.opts);
    let csv_path = csv.map(Path::to_path_buf).or_else(|| cli.out.as_ref().map(|p| p.with_extension("csv")));
    if let Some(path) = &csv_path {
        std::fs::write(path, sweep.to_csv())
            .map_err(|e| Failure { code: PRECONDITION, message: format!("cannot write {}: {e}", path.display()) })?;
    }
    let result = json!({
        "summary": to_json(&summary),
        "resolution": cfg.opts.resolution,
        "rows": sweep.len(),
        "csv": csv_path.map(|p| p.display().to_string()),
    });
    Ok(envelope("fov", Status::Ok, Some(&t), &cfg.space, result))
}

fn attain(cli: &Cli) -> Run<Outcome> {
    let cfg = config(cli)?;
    let t = load_operator(cli, &cfg.space)?;
    let result = if cfg.space == SpaceSpec::L2 {
        let an = Analysis::with_options(&t, &cfg.opts);
        to_json(&attainment::attainment_report(&an)?)
    } else {
        json!({
            "norm": to_json(&normed::operator_norm_normed(&t, &cfg.space)?),
            "min_norm": to_json(&normed::minimum_norm_normed(&t, &cfg.space)?),
            "radius": to_json(&normed::numerical_radius_normed(&t, &cfg.space)?),
            "crawford": to_json(&normed::crawford_normed(&t, &cfg.space)?),
        })
    };
    Ok(envelope("attain", Status::Ok, Some(&t), &cfg.space, result))
}

fn pointwise(id: &str) -> Option<Verifier> {
    Some(match id {
        "th-ct" => Verifier::CtReal,
        "com-ct" => Verifier::CtComplex,
        "th-ctcom" => Verifier::CtAlt,
        "th-vt" => Verifier::VtReal,
        "com-vt" => Verifier::VtComplex,
        "vt-alt" => Verifier::VtAlt,
        _ => return None,
    })
}

fn verify(cli: &Cli, theorem: &str, x_path: Option<&Path>) -> Run<Outcome> {
    if !THEOREMS.contains(&theorem) {
        return Err(Failure {
            code: UNKNOWN_THEOREM,
            message: format!("unknown theorem id {theorem:?}; known ids: {}", THEOREMS.join(", ")),
        });
    }
    let cfg = config(cli)?;
    let t = load_operator(cli, &cfg.space)?;
    let space = &cfg.space;
    let require_l2 = || -> Run<()> {
        if *space == SpaceSpec::L2 {
            Ok(())
        } else {
            Err(Error::PreconditionFailed(format!("{theorem} is a Hilbert-space statement; use --space l2")).into())
        }
    };
    let (status, result) = if let Some(which) = pointwise(theorem) {
        require_l2()?;
        let path = x_path.ok_or_else(|| parse_failure(format!("{theorem} needs --x")))?;
        let x = io::parse_vector(&read(path)?)?;
        let an = Analysis::with_options(&t, &cfg.opts);
        let verdict = attainment::verify_default(&an, &x, which)?;
        let mut result = to_json(&verdict);
        result["samples"] = json!(sampling::default_perp_samples(&x, an.field()).len());
        (Status::of(verdict.valid), result)
    } else {
        match theorem {
            "mtvt" | "mc-global" | "mc2d" => {
                require_l2()?;
                let an = Analysis::with_options(&t, &cfg.opts);
                let d = match theorem {
                    "mtvt" => attainment::decide_mv_for(&an)?,
                    "mc-global" => attainment::decide_mc_global_for(&an)?,
                    _ => attainment::decide_mc_2d_for(&an)?,
                };
                (Status::of(d.consistent), to_json(&d))
            }
            "general" => {
                require_l2()?;
                let r = attainment::restriction_consistency_for(&Analysis::with_options(&t, &cfg.opts))?;
                let status = if r.degenerate { Status::NotApplicable } else { Status::of(r.equalities_hold) };
                (status, to_json(&r))
            }
            "rank1" | "rank2" => {
                require_l2()?;
                let r = if theorem == "rank1" {
                    attainment::rank1_corollary(&t)?
                } else {
                    attainment::rank2_corollary(&t)?
                };
                (Status::of(r.agrees), to_json(&r))
            }
            "scspace" => {
                let r = normed::scspace_property_check(&t, space)?;
                let status = if r.applicable { Status::of(r.holds) } else { Status::NotApplicable };
                (status, to_json(&r))
            }
            "nonempty" => {
                let r = normed::nonempty_check(&t, space)?;
                let status = if r.applicable { Status::of(r.holds) } else { Status::NotApplicable };
                (status, to_json(&r))
            }
            "com-nonempty" => {
                let r = normed::com_nonempty_check(&t, space)?;
                (Status::of(r.equivalence_holds), to_json(&r))
            }
            "lp-even" => match space {
                SpaceSpec::Lp { p } => {
                    let r = normed::lp_even_rank1_check(&t, *p)?;
                    let status = if r.applicable { Status::of(r.holds) } else { Status::NotApplicable };
                    (status, to_json(&r))
                }
                _ => (Status::NotApplicable, json!({"note": "the statement concerns ℓ_p(ℝ²) with even p ≥ 4"})),
            },
            "mc-sufficient" => {
                let r = normed::mc_sufficient_check(&t, space)?;
                let status = if !r.applicable {
                    Status::NotApplicable
                } else if r.review {
                    Status::Review
                } else {
                    Status::of(r.holds)
                };
                (status, to_json(&r))
            }
            _ => unreachable!("theorem ids are checked above"),
        }
    };
    let mut outcome = envelope("verify", status, Some(&t), space, result);
    outcome.report["theorem"] = json!(theorem);
    Ok(outcome)
}

fn run_gallery(item: Option<&str>, perturb: bool) -> Run<Outcome> {
    let items = match item {
        Some(name) => vec![gallery::run_item(name, perturb)?],
        None => gallery::run_gallery(perturb)?,
    };
    let passed = items.iter().all(|i| i.passed);
    let result = json!({
        "items": to_json(&items),
        "passed": passed,
        "perturbed": perturb,
    });
    let status = if passed { Status::Ok } else { Status::Invalid };
    Ok(envelope("gallery", status, None, &SpaceSpec::L2, result))
}

fn run_oracle(cli: &Cli, samples: Option<usize>) -> Run<Outcome> {
    let cfg = config(cli)?;
    let t = load_operator(cli, &cfg.space)?;
    let count = samples.unwrap_or_else(|| oracle::default_cloud_size(t.n()));
    if count == 0 {
        return Err(Error::PreconditionFailed("--samples must be at least 1".into()).into());
    }
    if cfg.space != SpaceSpec::L2 && t.field() == Field::Complex {
        return Err(Error::FieldMismatch("only real operators act on this space").into());
    }
    let cloud = oracle::sample_sphere(&cfg.space, t.field(), t.n(), count, cli.seed);
    let mut result = json!({"samples": count, "seed": cli.seed});
    for (key, q) in [
        ("norm", Quantity::Norm),
        ("min_norm", Quantity::MinNorm),
        ("radius", Quantity::Radius),
        ("crawford", Quantity::Crawford),
    ] {
        result[key] = to_json(&oracle::oracle_estimate(&t, &cfg.space, &cloud, q));
    }
    Ok(envelope("oracle", Status::Ok, Some(&t), &cfg.space, result))
}
