use std::path::Path;

use clifford::{build_gammas, expected_signs, find_real_structure, Signature};
use dixmier::{dixmier_estimate, Run, SingularValueSeq};
use exact::{fmt_qi, fmt_rational, Rational};
use model_triples::{
    c_p, circle_singular_values, circle_volume_check, connes_distance, lp_distance, torus_singular_values,
    torus_volume_check, CircleSpec, MetricGraph, TorusSpec,
};
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Value};
use univdiff::{junk_reproduction, run_identity_suite, DiagonalModel, LaurentModel, ModelAlgebra};
use wodzicki::{gravity_action, GravityAction};

use crate::{Builtin, CliError, Command, Model, Parity, Report, RunConfig, Table, Toggle};

/// Relative tolerance of the volume checks.
pub const VOLUME_TOLERANCE: f64 = 0.02;
/// Agreement required between the distance solvers.
pub const DISTANCE_TOLERANCE: f64 = 1e-9;

pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    match &config.command {
        Command::CliffordTable => clifford_table(),
        Command::Hochschild { seed, trials } => hochschild(*seed, *trials),
        Command::Dixmier { sequence, runs, schedule } => dixmier(*sequence, runs.as_deref(), schedule),
        Command::Volume { model, p, schedule } => volume(*model, *p, schedule),
        Command::Distance { graph, from, to } => distance(graph, from, to),
        Command::Wres { p, parity, torsion } => wres(*p, *parity, *torsion),
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn sign(s: Option<i8>) -> String {
    s.map(|v| v.to_string()).unwrap_or_default()
}

fn clifford_table() -> Result<Report, CliError> {
    let mut rows = Vec::new();
    let mut table = Table::new(&["p", "p_mod_8", "eps", "eps_prime", "eps_double_prime", "matches_table", "verified"]);
    let mut passed = true;
    for p in 1..=8 {
        let j = find_real_structure(p).map_err(failed)?;
        let gammas = build_gammas(Signature::euclidean(p).map_err(failed)?).map_err(failed)?;
        let verified = j.verify(&gammas);
        let matches = j.signs == expected_signs(p);
        passed &= verified && matches;
        let s = j.signs;
        rows.push(json!({
            "p": p,
            "p_mod_8": p % 8,
            "eps": s.eps,
            "eps_prime": s.eps_prime,
            "eps_double_prime": s.eps_double_prime,
            "matches_table": matches,
            "verified": verified,
        }));
        table.push(vec![
            p.to_string(),
            (p % 8).to_string(),
            s.eps.to_string(),
            s.eps_prime.to_string(),
            sign(s.eps_double_prime),
            matches.to_string(),
            verified.to_string(),
        ]);
    }
    Ok(Report { json: json!({ "rows": rows, "passed": passed }), table, passed })
}

fn hochschild(seed: u64, trials: usize) -> Result<Report, CliError> {
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let circle = LaurentModel::default();
    let diagonal = DiagonalModel::default();
    let models: [&dyn ModelAlgebra; 2] = [&circle, &diagonal];
    let identities = run_identity_suite(&models, seed, trials).map_err(failed)?;
    let junk = junk_reproduction(&circle).map_err(failed)?;
    let passed = identities.iter().all(|r| r.ok()) && junk.ok();
    let mut table = Table::new(&["model", "identity", "trials", "passed"]);
    for r in &identities {
        table.push(vec![r.model.clone(), r.identity.clone(), r.trials.to_string(), r.passed.to_string()]);
    }
    table.push(vec![
        circle.name().to_string(),
        "junk_reproduction".into(),
        "1".into(),
        u8::from(junk.ok()).to_string(),
    ]);
    let json = json!({ "seed": seed, "trials": trials, "identities": identities, "junk": junk, "passed": passed });
    Ok(Report { json, table, passed })
}

#[derive(Deserialize)]
struct RunRow {
    value: f64,
    multiplicity: u64,
}

fn read_runs(path: &Path) -> Result<SingularValueSeq, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut runs = Vec::new();
    for row in reader.deserialize::<RunRow>() {
        let row = row.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        runs.push(Run::new(row.value, row.multiplicity));
    }
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "runs".into());
    let seq = SingularValueSeq::from_runs(name, runs);
    if let Some(Err(e)) = seq.validated().find(|r| r.is_err()) {
        return Err(usage(e));
    }
    Ok(seq)
}

fn check_schedule(schedule: &[u64]) -> Result<(), CliError> {
    if schedule.len() < 3 || schedule[0] < 2 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("--schedule needs at least 3 strictly increasing values, each at least 2"));
    }
    Ok(())
}

fn builtin(b: Builtin) -> Result<SingularValueSeq, CliError> {
    Ok(match b {
        Builtin::Harmonic => SingularValueSeq::harmonic(),
        Builtin::Telescoping => SingularValueSeq::telescoping(),
        Builtin::InverseSquare => SingularValueSeq::inverse_square(),
        Builtin::Oscillating => SingularValueSeq::oscillating(),
        Builtin::Circle => circle_singular_values(CircleSpec::default()).map_err(failed)?,
        Builtin::Torus2 => torus_singular_values(&TorusSpec::unit(2).map_err(failed)?).powered(2.0).renamed("torus2"),
    })
}

fn dixmier(sequence: Option<Builtin>, runs: Option<&Path>, schedule: &[u64]) -> Result<Report, CliError> {
    check_schedule(schedule)?;
    let seq = match (sequence, runs) {
        (Some(b), None) => builtin(b)?,
        (None, Some(path)) => read_runs(path)?,
        _ => return Err(usage("give exactly one of --sequence and --runs")),
    };
    let estimate = dixmier_estimate(&seq, schedule).map_err(failed)?;
    let mut table = Table::new(&["n", "ratio", "estimate", "error_bar"]);
    for (n, r) in estimate.schedule.iter().zip(&estimate.ratios) {
        table.push(vec![n.to_string(), r.to_string(), estimate.value.to_string(), estimate.error_bar.to_string()]);
    }
    let mut json = serde_json::to_value(&estimate).map_err(failed)?;
    json["sequence"] = json!(seq.name());
    Ok(Report { json, table, passed: true })
}

fn volume(model: Model, p: usize, schedule: &[u64]) -> Result<Report, CliError> {
    check_schedule(schedule)?;
    let check = match model {
        Model::Circle if p == 1 => circle_volume_check(CircleSpec::default(), schedule).map_err(failed)?,
        Model::Circle => return Err(usage("the circle model has p = 1")),
        Model::Torus if (2..=4).contains(&p) => {
            torus_volume_check(&TorusSpec::unit(p).map_err(usage)?, schedule).map_err(failed)?
        }
        Model::Torus => return Err(usage("the torus model needs 2 <= p <= 4")),
    };
    let passed = (check.ratio - 1.0).abs() <= VOLUME_TOLERANCE;
    let mut table = Table::new(&["model", "p", "estimate", "error_bar", "c_p_vol", "ratio", "passed"]);
    table.push(vec![
        serde_json::to_value(model).map_err(failed)?.as_str().unwrap_or_default().to_string(),
        p.to_string(),
        check.estimate.value.to_string(),
        check.estimate.error_bar.to_string(),
        check.c_p_vol.to_string(),
        check.ratio.to_string(),
        passed.to_string(),
    ]);
    let json = json!({
        "model": model,
        "p": p,
        "estimate": check.estimate,
        "c_p_vol": check.c_p_vol,
        "ratio": check.ratio,
        "tolerance": VOLUME_TOLERANCE,
        "passed": passed,
    });
    Ok(Report { json, table, passed })
}

#[derive(Deserialize)]
struct EdgeRow {
    u: String,
    v: String,
    length: f64,
}

fn read_graph(path: &Path) -> Result<MetricGraph, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut edges = Vec::new();
    for row in reader.deserialize::<EdgeRow>() {
        let row = row.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        edges.push((row.u, row.v, row.length));
    }
    MetricGraph::from_named_edges(&edges).map_err(usage)
}

fn distance(path: &Path, from: &str, to: &str) -> Result<Report, CliError> {
    let g = read_graph(path)?;
    let x = g.vertex(from).map_err(usage)?;
    let y = g.vertex(to).map_err(usage)?;
    let dual = connes_distance(&g, x, y).map_err(failed)?;
    let primal = lp_distance(&g, x, y).map_err(failed)?;
    let difference = (dual - primal).abs();
    let passed = difference <= DISTANCE_TOLERANCE * dual.max(1.0);
    let mut table = Table::new(&["from", "to", "distance", "lp_distance", "difference", "passed"]);
    table.push(vec![
        from.to_string(),
        to.to_string(),
        dual.to_string(),
        primal.to_string(),
        difference.to_string(),
        passed.to_string(),
    ]);
    let json = json!({
        "from": from,
        "to": to,
        "vertices": g.vertex_count(),
        "edges": g.edges().len(),
        "distance": dual,
        "lp_distance": primal,
        "difference": difference,
        "passed": passed,
    });
    Ok(Report { json, table, passed })
}

fn decimal(r: &Rational, scale: f64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN) * scale
}

fn wres(p: u32, parity: Parity, torsion: Toggle) -> Result<Report, CliError> {
    let expected = if p.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
    if parity != expected {
        return Err(usage(format!("p = {p} does not have the requested parity")));
    }
    if p < 2 {
        return Err(usage("wres needs p >= 2"));
    }
    let action = gravity_action(p, torsion == Toggle::On).map_err(failed)?;
    let integrand = action.integrand.basis_coefficients().map_err(failed)?;
    let c = c_p(p as usize);
    let render = |r: &Rational| GravityAction::render_coefficient(r, p);

    let mut table = Table::new(&["quantity", "exact", "rendered", "decimal"]);
    let coefficients = [("coeff_R", &action.coeff_r), ("coeff_t2", &action.coeff_t2)];
    for (name, r) in coefficients {
        table.push(vec![name.into(), fmt_rational(r), render(r), decimal(r, c).to_string()]);
    }
    let boundary_scale = c / f64::from(1u32 << (p / 2));
    let boundary = format!("{}/{}", render(&action.coeff_boundary), 1u32 << (p / 2));
    table.push(vec![
        "coeff_boundary".into(),
        fmt_rational(&action.coeff_boundary),
        boundary.clone(),
        decimal(&action.coeff_boundary, boundary_scale).to_string(),
    ]);
    let terms: Vec<Value> = integrand
        .iter()
        .map(|((basis, _), coeff)| {
            table.push(vec![format!("integrand:{}", basis.name()), fmt_qi(coeff), String::new(), String::new()]);
            json!({ "term": basis.name(), "coefficient": fmt_qi(coeff) })
        })
        .collect();

    let json = json!({
        "p": p,
        "parity": parity,
        "torsion": torsion,
        "integrand": terms,
        "averaged": action.averaged,
        "traced": action.traced,
        "coeff_R": render(&action.coeff_r),
        "coeff_t2": render(&action.coeff_t2),
        "coeff_boundary": boundary,
        "exact": {
            "coeff_R": fmt_rational(&action.coeff_r),
            "coeff_t2": fmt_rational(&action.coeff_t2),
            "coeff_boundary": fmt_rational(&action.coeff_boundary),
        },
        "decimal": {
            "c_p": c,
            "coeff_R": decimal(&action.coeff_r, c),
            "coeff_t2": decimal(&action.coeff_t2, c),
            "coeff_boundary": decimal(&action.coeff_boundary, boundary_scale),
        },
    });
    Ok(Report { json, table, passed: true })
}
