use std::io::Read;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ortho_hecke::dual_module::{Ambient, Submodule};
use ortho_hecke::hecke::{hecke_curve, hecke_orthogonal, CurveSample, SplitOrthogonalBundle};
use ortho_hecke::quad_space::{gram_from_json, ExtendedForm, QuadraticSpace};
use ortho_hecke::strata::{census, stratum_data};
use ortho_hecke::tangent::{duality_check, tangent_dim};
use ortho_hecke::verify::{run_suite, Suite, SuiteConfig};
use ortho_hecke::{Error, ExactMatrix, FieldSpec};

#[derive(Parser)]
#[command(name = "ortho-hecke", version, about = "Strata of submodules over dual numbers and orthogonal Hecke transforms on the projective line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stratum, torsion degree and flag data of a submodule of V ⊕ εV.
    Classify {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        r: usize,
        /// Submodule JSON file, or `-` for standard input.
        #[arg(long)]
        basis: String,
        /// Quadratic form used for the component index (default hyperbolic).
        #[arg(long)]
        gram: Option<String>,
    },
    /// Lagrangian counts per stratum over a prime field.
    Census {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        gram: Option<String>,
        #[arg(long)]
        brute_force: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Orthogonal Hecke transform of a split bundle at a Lagrangian.
    Hecke {
        /// Comma-separated degrees, e.g. `1,0,0,-1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        degrees: Vec<i64>,
        /// `hyperbolic` or a JSON file with the Gram matrix.
        #[arg(long, default_value = "hyperbolic")]
        gram: String,
        #[arg(long)]
        lagrangian: String,
        /// Field, when the Lagrangian file does not name one.
        #[arg(long)]
        field: Option<FieldSpec>,
    },
    /// Splitting types along the Hecke curve of an isotropic plane.
    Curve {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        degrees: Vec<i64>,
        #[arg(long, default_value = "hyperbolic")]
        gram: String,
        /// Matrix JSON file with the two spanning columns.
        #[arg(long)]
        plane: String,
        /// Comma-separated field values, `inf` for the point at infinity.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        samples: Vec<String>,
        #[arg(long)]
        field: Option<FieldSpec>,
    },
    /// Tangent dimensions at a submodule; skew and dual dimensions for
    /// Lagrangians in the largest strata.
    Tangent {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        basis: String,
        #[arg(long)]
        gram: Option<String>,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        max_rank: Option<usize>,
        #[arg(long)]
        max_degree: Option<i64>,
        /// Field of the exhaustive parts (a prime field).
        #[arg(long)]
        field: Option<FieldSpec>,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CertificateFailed(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_json(path: &str) -> Result<Value, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(Path::new(path)).map_err(|e| Failure::Input(format!("{path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: line {}, column {}: {e}", e.line(), e.column())))
}

fn named_field(value: &Value) -> Result<Option<FieldSpec>, Failure> {
    match value.get("field").and_then(Value::as_str) {
        Some(s) => Ok(Some(s.parse::<FieldSpec>()?)),
        None => Ok(None),
    }
}

fn rows_of(value: &Value, key: &str) -> Result<Vec<Vec<String>>, Failure> {
    let rows = if value.is_array() { value } else { value.get(key).unwrap_or(&Value::Null) };
    let rows: Vec<Vec<Value>> =
        serde_json::from_value(rows.clone()).map_err(|e| Failure::Input(format!("{key}: expected an array of rows: {e}")))?;
    Ok(rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| match x {
                    Value::String(s) => s,
                    other => other.to_string(),
                })
                .collect()
        })
        .collect())
}

/// Matrix from a rows array, a `{"field", "rows"}` literal, or a submodule
/// `{"r", "field", "basis"}` object.
fn load_matrix(value: &Value, field: FieldSpec, rows: usize) -> Result<ExactMatrix, Failure> {
    if let Some(named) = named_field(value)? {
        if named != field {
            return Err(Failure::Input(format!("file field {named} differs from {field}")));
        }
    }
    let key = if value.get("basis").is_some() { "basis" } else { "rows" };
    let parsed = rows_of(value, key)?;
    if parsed.is_empty() {
        return Ok(ExactMatrix::zeros(field, rows, 0));
    }
    let m = ExactMatrix::parse_rows(field, &parsed)?;
    if m.rows() != rows {
        return Err(Failure::Input(format!("expected {rows} rows, found {}", m.rows())));
    }
    Ok(m)
}

fn load_submodule(path: &str, field: FieldSpec, r: Option<usize>) -> Result<Submodule, Failure> {
    let value = read_json(path)?;
    let file_r = value.get("r").and_then(Value::as_u64).map(|x| x as usize);
    let r = match (r, file_r) {
        (Some(a), Some(b)) if a != b => return Err(Failure::Input(format!("--r {a} differs from file r {b}"))),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => {
            let rows = rows_of(&value, if value.get("basis").is_some() { "basis" } else { "rows" })?.len();
            if rows % 2 != 0 {
                return Err(Failure::Input(format!("a basis of V ⊕ εV needs an even number of rows, found {rows}")));
            }
            rows / 2
        }
    };
    let ambient = Ambient::new(r, field);
    let basis = load_matrix(&value, field, 2 * r)?;
    Ok(Submodule::new(ambient, &basis)?)
}

/// `hyperbolic`, or a file holding a rows array, a matrix literal, or a
/// quadratic space object.
fn load_gram(source: Option<&str>, r: usize, field: FieldSpec) -> Result<ExactMatrix, Failure> {
    let value = match source {
        None | Some("hyperbolic") => Value::String("hyperbolic".into()),
        Some(path) => {
            let v = read_json(path)?;
            match v.get("gram") {
                Some(inner) => {
                    if let Some(named) = named_field(&v)? {
                        if named != field {
                            return Err(Failure::Input(format!("gram field {named} differs from {field}")));
                        }
                    }
                    inner.clone()
                }
                None => v,
            }
        }
    };
    let gram = gram_from_json(&value, r, field)?;
    if gram.rows() != r || gram.cols() != r {
        return Err(Failure::Input(format!("gram must be {r} x {r}")));
    }
    Ok(gram)
}

fn form(source: Option<&str>, r: usize, field: FieldSpec) -> Result<ExtendedForm, Failure> {
    Ok(QuadraticSpace::new(load_gram(source, r, field)?)?.extend())
}

fn classify(field: FieldSpec, r: usize, basis: &str, gram: Option<&str>) -> Outcome {
    let l = load_submodule(basis, field, Some(r))?;
    let ef = form(gram, r, field)?;
    let rep = stratum_data(&l, Some(&ef));
    Ok((serde_json::to_value(&rep).expect("reports serialize"), true))
}

fn census_cmd(field: FieldSpec, r: usize, gram: Option<&str>, brute_force: bool, csv: bool) -> Result<(String, bool), Failure> {
    if field.order().is_none() {
        return Err(Failure::Input("census needs a prime field".into()));
    }
    let ef = form(gram, r, field)?;
    let c = census(&ef, brute_force)?;
    let ok = c.strata.iter().all(|s| s.count == s.predicted)
        && c.brute_force_total.is_none_or(|t| t == c.strata.iter().map(|s| s.count).sum::<u128>());
    let text = if csv {
        let mut out = String::from("i,count,predicted,component\n");
        for s in &c.strata {
            out.push_str(&format!("{},{},{},{}\n", s.i, s.count, s.predicted, s.component));
        }
        if let Some(t) = c.brute_force_total {
            out.push_str(&format!("total,{t},,\n"));
        }
        out
    } else {
        format!("{}\n", serde_json::to_string_pretty(&c).expect("serializable"))
    };
    Ok((text, ok))
}

fn bundle(degrees: Vec<i64>, gram: &str, field: FieldSpec) -> Result<SplitOrthogonalBundle, Failure> {
    if degrees.is_empty() {
        return Err(Failure::Input("--degrees is empty".into()));
    }
    let g = load_gram(Some(gram), degrees.len(), field)?;
    Ok(SplitOrthogonalBundle::new(degrees, g)?)
}

fn file_field(path: &str, flag: Option<FieldSpec>) -> Result<FieldSpec, Failure> {
    if let Some(f) = flag {
        return Ok(f);
    }
    if path == "-" {
        return Ok(FieldSpec::rationals());
    }
    Ok(named_field(&read_json(path)?)?.unwrap_or_else(FieldSpec::rationals))
}

fn hecke_cmd(degrees: Vec<i64>, gram: &str, lagrangian: &str, field: Option<FieldSpec>) -> Outcome {
    let field = file_field(lagrangian, field)?;
    let r = degrees.len();
    let e = bundle(degrees, gram, field)?;
    let l = load_submodule(lagrangian, field, Some(r))?;
    let rep = hecke_orthogonal(&e, &l)?;
    let ok = rep.reciprocity_ok && rep.two_step_type == rep.output_type;
    Ok((serde_json::to_value(&rep).expect("reports serialize"), ok))
}

fn curve_cmd(degrees: Vec<i64>, gram: &str, plane: &str, samples: &[String], field: Option<FieldSpec>) -> Outcome {
    let field = file_field(plane, field)?;
    let r = degrees.len();
    let e = bundle(degrees, gram, field)?;
    let f = load_matrix(&read_json(plane)?, field, r)?;
    let parsed: Vec<CurveSample> = samples
        .iter()
        .map(|s| match s.trim() {
            "inf" | "∞" => Ok(CurveSample::Infinity),
            x => Ok(CurveSample::Finite(field.parse_scalar(x)?)),
        })
        .collect::<Result<_, Error>>()?;
    if parsed.is_empty() {
        return Err(Failure::Input("--samples is empty".into()));
    }
    let types = hecke_curve(&e, &f, &parsed)?;
    let entries: Vec<Value> = samples
        .iter()
        .zip(&types)
        .map(|(c, t)| json!({"c": c.trim(), "output_type": t}))
        .collect();
    let input = e.splitting_type();
    let ok = parsed
        .iter()
        .zip(&types)
        .all(|(c, t)| *c != CurveSample::Infinity || *t == input);
    Ok((json!({"input_type": input, "samples": entries}), ok))
}

fn tangent_cmd(field: FieldSpec, basis: &str, gram: Option<&str>) -> Outcome {
    let l = load_submodule(basis, field, None)?;
    let ef = form(gram, l.r(), field)?;
    let largest = l.projection().cols() + 1 >= l.r() / 2;
    if ef.is_lagrangian(&l) && largest {
        let rep = duality_check(&ef, &l)?;
        let ok = rep.skew_dim == Some(rep.expected_dim) && rep.skew_dim == rep.dual_skew_dim;
        Ok((serde_json::to_value(&rep).expect("reports serialize"), ok))
    } else {
        let rep = tangent_dim(&l);
        let ok = rep.dim_hom0 == rep.expected_dim;
        Ok((serde_json::to_value(&rep).expect("reports serialize"), ok))
    }
}

fn verify_cmd(
    suite: Suite,
    trials: usize,
    seed: u64,
    max_rank: Option<usize>,
    max_degree: Option<i64>,
    field: Option<FieldSpec>,
) -> Outcome {
    let mut cfg = SuiteConfig::new(suite, trials, seed);
    if let Some(r) = max_rank {
        cfg.max_rank = r;
    }
    if let Some(d) = max_degree {
        cfg.max_degree = d;
    }
    if let Some(f) = field {
        cfg.field = f;
    }
    let rep = run_suite(&cfg)?;
    let ok = rep.passed;
    Ok((serde_json::to_value(&rep).expect("reports serialize"), ok))
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    let json_out = |o: Outcome| o.map(|(v, ok)| (format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")), ok));
    match cli.command {
        Command::Classify { field, r, basis, gram } => json_out(classify(field, r, &basis, gram.as_deref())),
        Command::Census { field, r, gram, brute_force, csv } => census_cmd(field, r, gram.as_deref(), brute_force, csv),
        Command::Hecke { degrees, gram, lagrangian, field } => json_out(hecke_cmd(degrees, &gram, &lagrangian, field)),
        Command::Curve { degrees, gram, plane, samples, field } => json_out(curve_cmd(degrees, &gram, &plane, &samples, field)),
        Command::Tangent { field, basis, gram } => json_out(tangent_cmd(field, &basis, gram.as_deref())),
        Command::Verify { suite, trials, seed, max_rank, max_degree, field } => {
            json_out(verify_cmd(suite, trials, seed, max_rank, max_degree, field))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli);
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("check failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
