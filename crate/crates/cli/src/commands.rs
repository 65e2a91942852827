use std::io::Write;
use std::str::FromStr;

use serde_json::{json, Value};

use qqo::dynamics::{self, ball_invariance_check, fixed_points, iterate};
use qqo::epsilon::{self, cp_check, positivity_check};
use qqo::ks::{self, ks_global_check, ks_necessary_check};
use qqo::qqo::{choi_matrix, sampled_positivity, state_preservation_check, DEFAULT_SAMPLES};
use qqo::{tolerance, BlochVector, CVec3, Epsilon, QqoError, Result, TensorSpec, C64};

use crate::{input_error, Cli, Command};

const SCHEMA_VERSION: &str = "v1";

pub fn run(cli: &Cli) -> Result<bool> {
    validate(cli)?;
    match cli.command {
        Command::Certify => certify(cli),
        Command::Ks => ks_cmd(cli),
        Command::Choi => choi(cli),
        Command::Simulate => simulate(cli),
        Command::FixedPoints => fixed(cli),
        Command::Sweep => sweep(cli),
    }
}

fn validate(cli: &Cli) -> Result<()> {
    if cli.samples == Some(0) {
        return Err(input_error("--samples must be at least 1"));
    }
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(input_error(format!("--tol must be a positive finite number, got {t}")));
        }
    }
    Ok(())
}

fn spec(cli: &Cli) -> Result<TensorSpec> {
    match (cli.epsilon, &cli.tensor) {
        (Some(e), None) => Ok(TensorSpec::Epsilon(Epsilon::new(e)?)),
        (None, Some(path)) => TensorSpec::load(path),
        _ => Err(input_error("exactly one of --epsilon or --tensor is required")),
    }
}

fn need_epsilon(cli: &Cli) -> Result<Epsilon> {
    spec(cli)?
        .epsilon()
        .ok_or_else(|| input_error("this command needs an ε (--epsilon or a {\"epsilon\": e} tensor file)"))
}

fn input_json(s: &TensorSpec) -> Value {
    match s {
        TensorSpec::Epsilon(e) => json!({ "epsilon": e.value() }),
        TensorSpec::Tensor(b) => json!({ "b": b.entries() }),
    }
}

fn parse_list<T: FromStr>(text: &str, flag: &str) -> Result<[T; 3]> {
    let parts: Vec<T> = text
        .split(',')
        .map(|p| p.trim().parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| input_error(format!("--{flag}: cannot parse {text:?}")))?;
    parts.try_into().map_err(|_| input_error(format!("--{flag}: expected three comma-separated values")))
}

fn parse_bloch(text: &str, flag: &str) -> Result<BlochVector> {
    let v: [f64; 3] = parse_list(text, flag)?;
    BlochVector::new(v)
}

fn parse_w(text: &str) -> Result<CVec3> {
    let w: CVec3 = parse_list(text, "w")?;
    if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(input_error("--w: components must be finite"));
    }
    Ok(w)
}

fn emit(cli: &Cli, report: Value) -> Result<()> {
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn witness_json(w: Option<ks::KsWitness>) -> Value {
    match w {
        Some(w) => json!({ "violation_found": true, "witness": w }),
        None => json!({ "violation_found": false, "witness": Value::Null }),
    }
}

fn certify(cli: &Cli) -> Result<bool> {
    let s = spec(cli)?;
    let b = s.tensor();
    let samples = cli.samples.unwrap_or(DEFAULT_SAMPLES);
    let ks_samples = cli.samples.unwrap_or(ks::DEFAULT_KS_SAMPLES);
    let tol = cli.tol.unwrap_or(tolerance::KS_SEARCH);

    let sp = state_preservation_check(&b, samples, cli.seed);
    let (positive, positivity, cp, cp_json, band) = match s.epsilon() {
        Some(e) => {
            let p = positivity_check(e, samples, cli.seed);
            let c = cp_check(e);
            (p.is_positive, json!(p), c.is_cp, json!(c), json!(e.band()))
        }
        None => {
            let p = sampled_positivity(&b, samples, cli.seed)?;
            let min = qqo::eigen::min_eigenvalue_hermitian(&choi_matrix(&b))?;
            let is_cp = min >= -tolerance::POSITIVITY;
            (p.is_positive, json!(p), is_cp, json!({ "is_cp": is_cp, "min_choi_eig": min }), Value::Null)
        }
    };
    let witness = ks_global_check(&b, ks_samples, cli.seed, tol);
    let passed = sp.passes && positive && cp && witness.is_none();

    emit(
        cli,
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "certify",
            "input": input_json(&s),
            "band": band,
            "samples": samples,
            "ks_samples": ks_samples,
            "seed": cli.seed,
            "tol": tol,
            "state_preservation": sp,
            "positivity": positivity,
            "complete_positivity": cp_json,
            "ks": witness_json(witness),
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn ks_cmd(cli: &Cli) -> Result<bool> {
    let s = spec(cli)?;
    let b = s.tensor();
    let samples = cli.samples.unwrap_or(ks::DEFAULT_KS_SAMPLES);
    let tol = cli.tol.unwrap_or(tolerance::KS_SEARCH);
    let witness = ks_global_check(&b, samples, cli.seed, tol);

    let f = match &cli.state {
        Some(t) => parse_bloch(t, "state")?,
        None => BlochVector::new([1.0, 0.0, 0.0])?,
    };
    let w = match (&cli.w, &witness) {
        (Some(t), _) => parse_w(t)?,
        (None, Some(wit)) => wit.w,
        (None, None) => [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
    };
    let necessary = ks_necessary_check(&b, &f, &w);
    let passed = witness.is_none() && necessary.holds11 && necessary.holds2;

    emit(
        cli,
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "ks",
            "input": input_json(&s),
            "samples": samples,
            "seed": cli.seed,
            "tol": tol,
            "search": witness_json(witness),
            "necessary": {
                "f": f,
                "w": w,
                "report": necessary,
            },
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn choi(cli: &Cli) -> Result<bool> {
    let s = spec(cli)?;
    let m = match s.epsilon() {
        Some(e) => epsilon::choi_matrix(e),
        None => choi_matrix(&s.tensor()),
    };
    let eig = qqo::eigen::eigenvalues_hermitian(&m)?;
    let is_cp = eig[0] >= -tolerance::POSITIVITY;
    emit(
        cli,
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "choi",
            "input": input_json(&s),
            "choi": m,
            "eigenvalues": eig,
            "min_eig": eig[0],
            "is_cp": is_cp,
        }),
    )?;
    Ok(is_cp)
}

fn simulate(cli: &Cli) -> Result<bool> {
    let e = need_epsilon(cli)?;
    if e.value().abs() > epsilon::INVARIANCE_THRESHOLD + tolerance::EPSILON_DOMAIN {
        return Err(QqoError::DomainError { epsilon: e.value(), limit: epsilon::INVARIANCE_THRESHOLD });
    }
    let f0 = parse_bloch(
        cli.init.as_deref().ok_or_else(|| input_error("simulate needs --init f1,f2,f3"))?,
        "init",
    )?;
    let tol = cli.tol.unwrap_or(dynamics::DEFAULT_TOL);
    let t = iterate(e, &f0, cli.steps, tol)?;
    let last = t.steps.last().expect("trajectory has step 0");
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "input": { "epsilon": e.value() },
        "init": f0,
        "tol": tol,
        "max_steps": cli.steps,
        "steps": last.index,
        "final_rho": last.rho,
        "converged": t.converged,
        "limit": t.limit,
    });
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    match &cli.output {
        Some(path) => {
            std::fs::write(path, t.to_csv())?;
            std::io::stdout().write_all(text.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(t.to_csv().as_bytes())?;
            std::io::stderr().write_all(text.as_bytes())?;
        }
    }
    Ok(true)
}

fn fixed(cli: &Cli) -> Result<bool> {
    let e = need_epsilon(cli)?;
    let r = fixed_points(e)?;
    let passed = r.sweep_agrees && r.residuals.iter().all(|&x| x <= tolerance::FIXED_POINT);
    emit(
        cli,
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "fixed-points",
            "input": { "epsilon": e.value() },
            "report": r,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn parse_range(text: &str) -> Result<(f64, f64, usize)> {
    let [a, b, n]: [f64; 3] = parse_list(text, "range")?;
    if !(a.is_finite() && b.is_finite()) || n < 1.0 || n.fract() != 0.0 {
        return Err(input_error("--range: expected start,end,count with a positive integer count"));
    }
    Ok((a, b, n as usize))
}

fn sweep(cli: &Cli) -> Result<bool> {
    let (start, end, count) = parse_range(cli.range.as_deref().unwrap_or("0,0.6,13"))?;
    let samples = cli.samples.unwrap_or(DEFAULT_SAMPLES);
    let tol = cli.tol.unwrap_or(tolerance::KS_SEARCH);
    let rows = (0..count)
        .map(|i| {
            let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            let e = Epsilon::new(start + t * (end - start))?;
            let b = epsilon::build_coeff_tensor(e);
            let p = positivity_check(e, samples, cli.seed);
            let c = cp_check(e);
            let w = ks_global_check(&b, samples, cli.seed, tol);
            let inv = ball_invariance_check(e, samples, cli.seed);
            Ok(json!({
                "epsilon": e.value(),
                "band": e.band(),
                "positive": p.is_positive,
                "positivity_margin": p.margin,
                "cp": c.is_cp,
                "min_choi_eig": c.min_choi_eig,
                "ks_violation_found": w.is_some(),
                "ks_min_eig": w.map(|w| w.min_eig),
                "ball_invariant": inv.invariant,
                "ball_worst_norm": inv.worst_norm,
            }))
        })
        .collect::<Result<Vec<Value>>>()?;
    emit(
        cli,
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "sweep",
            "samples": samples,
            "seed": cli.seed,
            "tol": tol,
            "rows": rows,
        }),
    )?;
    Ok(true)
}
