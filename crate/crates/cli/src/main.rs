use std::fs;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use ncplush::mateval::{eval, matrix_rows, min_eigenvalue, sample_positivity, MatrixTuple, SampleConfig};
use ncplush::nccalc::{complex_hessian, derivative, full_hessian, lth_derivative, partial_x, partial_xt};
use ncplush::ncint::{
    frobenius_check, integrate, integrate_in, is_complex_hessian, is_integrable, ClassDefect,
    FrobeniusFailure, FrobeniusSystem, FrobeniusVerdict, HessianVerdict, HessianViolation, IntegrationError,
};
use ncplush::plush::{
    classify_plush, relate_representations, FailureWitness, IsometryRelation, PlushDecomposition,
    PlushVerdict, WeightedSquare,
};
use ncplush::{parse, parse_infer, Polynomial, RationalMatrix};

#[derive(Parser, Debug)]
#[command(
    name = "ncplush",
    version,
    about = "Derivatives, integration and plush tests for nc polynomials"
)]
struct Cli {
    /// Number of variables (default: largest index used)
    #[arg(short = 'g', global = true)]
    vars: Option<usize>,
    /// Emit a JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Run the command on every expression of a file, one per line
    #[arg(long, global = true, value_name = "FILE")]
    corpus: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Polynomial expression, e.g. "x1'*x1 + 2*x2"
    #[arg(allow_hyphen_values = true)]
    expr: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// l-th directional derivative
    Derive {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Partial derivative in x_j (or x_j^T)
    Partial {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        var: u32,
        #[arg(long)]
        transpose: bool,
    },
    /// Full second derivative
    Hessian {
        #[command(flatten)]
        input: Input,
    },
    /// Mixed second derivative in x^T then x
    ComplexHessian {
        #[command(flatten)]
        input: Input,
    },
    /// Antiderivative of a polynomial of direction degree one
    Integrate {
        #[command(flatten)]
        input: Input,
        /// Integrate in x_j only
        #[arg(long)]
        var: Option<u32>,
    },
    /// Report the wed classes, or the first defect
    CheckIntegrable {
        #[command(flatten)]
        input: Input,
    },
    /// Test a candidate gradient (f_1, ..., f_g)
    Frobenius {
        /// Components f_1 .. f_g, or a single derivative with --split
        #[arg(allow_hyphen_values = true)]
        components: Vec<String>,
        #[arg(long)]
        split: bool,
    },
    /// Decide whether a polynomial is a complex hessian
    CheckHessian {
        #[command(flatten)]
        input: Input,
    },
    /// Decide plushness and print the decomposition
    Plush {
        #[command(flatten)]
        input: Input,
    },
    /// Evaluate at matrices given as JSON arrays of row-major matrices
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        x: String,
        #[arg(long)]
        h: Option<String>,
    },
    /// Random search for a negative eigenvalue
    Sample {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Relate a decomposition to the minimal one of its expansion
    Relate {
        /// Hereditary square as WEIGHT:FACTOR
        #[arg(long = "her", value_name = "W:F", allow_hyphen_values = true)]
        hereditary: Vec<String>,
        /// Antihereditary square as WEIGHT:FACTOR
        #[arg(long = "anti", value_name = "W:K", allow_hyphen_values = true)]
        antihereditary: Vec<String>,
        /// Analytic part F
        #[arg(long, allow_hyphen_values = true)]
        analytic: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Derive { .. } => "derive",
            Command::Partial { .. } => "partial",
            Command::Hessian { .. } => "hessian",
            Command::ComplexHessian { .. } => "complex-hessian",
            Command::Integrate { .. } => "integrate",
            Command::CheckIntegrable { .. } => "check-integrable",
            Command::Frobenius { .. } => "frobenius",
            Command::CheckHessian { .. } => "check-hessian",
            Command::Plush { .. } => "plush",
            Command::Eval { .. } => "eval",
            Command::Sample { .. } => "sample",
            Command::Relate { .. } => "relate",
        }
    }

    fn input_mut(&mut self) -> Option<&mut Option<String>> {
        match self {
            Command::Derive { input, .. }
            | Command::Partial { input, .. }
            | Command::Hessian { input }
            | Command::ComplexHessian { input }
            | Command::Integrate { input, .. }
            | Command::CheckIntegrable { input }
            | Command::CheckHessian { input }
            | Command::Plush { input }
            | Command::Eval { input, .. }
            | Command::Sample { input, .. } => Some(&mut input.expr),
            Command::Frobenius { .. } | Command::Relate { .. } => None,
        }
    }
}

/// Usage and parse errors; exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

struct Outcome {
    ok: bool,
    text: String,
    result: Value,
    witness: Option<Value>,
}

impl Outcome {
    fn success(text: String, result: Value) -> Self {
        Outcome {
            ok: true,
            text,
            result,
            witness: None,
        }
    }

    fn failure(text: String, result: Value, witness: Value) -> Self {
        Outcome {
            ok: false,
            text,
            result,
            witness: Some(witness),
        }
    }
}

fn poly(text: &str, vars: Option<usize>) -> Result<Polynomial, UsageError> {
    Ok(match vars {
        Some(g) => parse(text, g)?,
        None => parse_infer(text)?,
    })
}

/// Parse several expressions into one shared context.
fn polys(texts: &[&str], vars: Option<usize>) -> Result<Vec<Polynomial>, UsageError> {
    let parsed = texts
        .iter()
        .map(|t| poly(t, vars))
        .collect::<Result<Vec<_>, _>>()?;
    let g = parsed.iter().map(Polynomial::vars).max().unwrap_or(1);
    parsed
        .into_iter()
        .map(|p| p.with_vars(g).map_err(UsageError::from))
        .collect()
}

fn s<T: ToString>(v: &T) -> Value {
    Value::String(v.to_string())
}

fn matrix_json(m: &RationalMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(s).collect()))
            .collect(),
    )
}

fn defect_json(d: &ClassDefect) -> Value {
    match d {
        ClassDefect::WrongDirections { word } => json!({"kind": "wrong_directions", "word": s(word)}),
        ClassDefect::MissingMate { word, missing } => {
            json!({"kind": "missing_mate", "word": s(word), "missing": s(missing)})
        }
        ClassDefect::CoefficientMismatch { word, mate } => {
            json!({"kind": "coefficient_mismatch", "word": s(word), "mate": s(mate)})
        }
    }
}

fn defect_text(d: &ClassDefect) -> String {
    match d {
        ClassDefect::WrongDirections { word } => format!("{word} does not have a single direction letter"),
        ClassDefect::MissingMate { word, missing } => format!("{word} is missing mate {missing}"),
        ClassDefect::CoefficientMismatch { word, mate } => {
            format!("{word} and its mate {mate} have different coefficients")
        }
    }
}

fn squares_json(squares: &[WeightedSquare]) -> Value {
    Value::Array(
        squares
            .iter()
            .map(|sq| json!({"weight": s(&sq.weight), "factor": s(&sq.factor)}))
            .collect(),
    )
}

fn decomposition_json(d: &PlushDecomposition) -> Value {
    json!({
        "hereditary": squares_json(&d.hereditary_squares),
        "antihereditary": squares_json(&d.antihereditary_squares),
        "analytic_part": s(&d.analytic_part),
        "n_min": d.n_min,
        "m_min": d.m_min,
    })
}

fn decomposition_text(d: &PlushDecomposition) -> String {
    let mut out = String::from("plush\n");
    out += &format!("hereditary squares (N_min = {}):\n", d.n_min);
    for (j, sq) in d.hereditary_squares.iter().enumerate() {
        out += &format!("  d{} = {}  f{} = {}\n", j + 1, sq.weight, j + 1, sq.factor);
    }
    out += &format!("antihereditary squares (M_min = {}):\n", d.m_min);
    for (j, sq) in d.antihereditary_squares.iter().enumerate() {
        out += &format!("  e{} = {}  k{} = {}\n", j + 1, sq.weight, j + 1, sq.factor);
    }
    out += &format!("F = {}", d.analytic_part);
    out
}

fn witness_json(w: &FailureWitness) -> Value {
    match w {
        FailureWitness::NotSymmetric { word } => json!({"stage": "NotSymmetric", "word": s(word)}),
        FailureWitness::HessianNotSplitForm { side, word } => {
            json!({"stage": "HessianNotSplitForm", "side": side.name(), "word": s(word)})
        }
        FailureWitness::GramNotPsd {
            side,
            gram,
            certificate,
            value,
        } => json!({
            "stage": "GramNotPsd",
            "side": side.name(),
            "border": gram.border().iter().map(s).collect::<Vec<_>>(),
            "gram": matrix_json(gram.matrix()),
            "certificate": certificate.iter().map(s).collect::<Vec<_>>(),
            "value": s(value),
        }),
        FailureWitness::ResidualMixed { word } => json!({"stage": "ResidualMixed", "word": s(word)}),
    }
}

fn witness_text(w: &FailureWitness) -> String {
    match w {
        FailureWitness::NotSymmetric { word } => format!("not plush: not symmetric at {word}"),
        FailureWitness::HessianNotSplitForm { side, word } => {
            format!(
                "not plush: {} hessian term {word} is not of split form",
                side.name()
            )
        }
        FailureWitness::GramNotPsd {
            side,
            gram,
            certificate,
            value,
        } => {
            let v: Vec<String> = certificate.iter().map(ToString::to_string).collect();
            format!(
                "not plush: {} Gram matrix {} is not PSD; v = ({}) gives v^T G v = {value}",
                side.name(),
                gram.matrix(),
                v.join(", ")
            )
        }
        FailureWitness::ResidualMixed { word } => format!("not plush: residual term {word} is mixed"),
    }
}

fn relation_json(r: &IsometryRelation) -> Value {
    json!({
        "transform": matrix_json(&r.transform),
        "source_weights": r.source_weights.iter().map(s).collect::<Vec<_>>(),
        "target_weights": r.target_weights.iter().map(s).collect::<Vec<_>>(),
        "constants": r.constants.iter().map(s).collect::<Vec<_>>(),
        "isometry": r.is_isometry(),
        "unweighted": r.unweighted().as_ref().map(matrix_json),
        "unweighted_f64": r.unweighted_f64(),
    })
}

fn matrices_from_json(text: &str) -> Result<MatrixTuple, UsageError> {
    let raw: Vec<Vec<Vec<f64>>> = serde_json::from_str(text)?;
    Ok(MatrixTuple::from_rows(&raw)?)
}

fn parse_square(spec: &str) -> Result<(BigRational, &str), UsageError> {
    let (w, f) = spec
        .split_once(':')
        .ok_or_else(|| UsageError(format!("expected WEIGHT:FACTOR, got {spec:?}")))?;
    let weight = BigRational::from_str(w.trim()).map_err(|e| UsageError(format!("bad weight {w:?}: {e}")))?;
    Ok((weight, f))
}

fn run(cmd: &Command, vars: Option<usize>) -> Result<Outcome, UsageError> {
    let expr = || -> Result<Polynomial, UsageError> {
        let mut c = cmd.clone();
        let text = c
            .input_mut()
            .and_then(|e| e.take())
            .ok_or_else(|| UsageError("missing polynomial expression".into()))?;
        poly(&text, vars)
    };
    let plain = |p: Polynomial| Outcome::success(p.to_string(), s(&p));
    Ok(match cmd {
        Command::Derive { order, .. } => {
            let p = expr()?;
            match order {
                0 => return Err(UsageError("--order must be at least 1".into())),
                1 => plain(derivative(&p)),
                l => plain(lth_derivative(&p, *l)),
            }
        }
        Command::Partial { var, transpose, .. } => {
            let p = expr()?;
            if *var == 0 || *var as usize > p.vars() {
                return Err(UsageError(format!("--var {var} outside 1..={}", p.vars())));
            }
            plain(if *transpose {
                partial_xt(&p, *var)
            } else {
                partial_x(&p, *var)
            })
        }
        Command::Hessian { .. } => plain(full_hessian(&expr()?)),
        Command::ComplexHessian { .. } => plain(complex_hessian(&expr()?)),
        Command::Integrate { var, .. } => {
            let p = expr()?;
            let res = match var {
                Some(j) => integrate_in(&p, *j),
                None => integrate(&p),
            };
            match res {
                Ok(f) => plain(f),
                Err(IntegrationError::NotIntegrable(d))
                | Err(IntegrationError::NotIntegrableIn { defect: d, .. }) => Outcome::failure(
                    format!("not integrable: {}", defect_text(&d)),
                    Value::Null,
                    defect_json(&d),
                ),
            }
        }
        Command::CheckIntegrable { .. } => {
            let p = expr()?;
            match is_integrable(&p) {
                Ok(classes) => {
                    let list: Vec<Value> = classes
                        .iter()
                        .map(|c| {
                            json!({
                                "collapse": s(&c.collapse()),
                                "coefficient": s(&c.coefficient),
                                "members": c.members.iter().map(s).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let mut text = format!("integrable ({} classes)", classes.len());
                    for c in &classes {
                        text += &format!("\n  {} * [{}]", c.coefficient, c.collapse());
                    }
                    Outcome::success(text, json!({"integrable": true, "classes": list}))
                }
                Err(d) => Outcome::failure(
                    format!("not integrable: {}", defect_text(&d)),
                    json!({"integrable": false}),
                    defect_json(&d),
                ),
            }
        }
        Command::Frobenius { components, split } => {
            let texts: Vec<&str> = components.iter().map(String::as_str).collect();
            let sys = if *split {
                let [one] = texts.as_slice() else {
                    return Err(UsageError("--split takes exactly one expression".into()));
                };
                FrobeniusSystem::split(&poly(one, vars)?)?
            } else {
                let ps = polys(&texts, vars)?;
                let g = ps.iter().map(Polynomial::vars).max().unwrap_or(1).max(ps.len());
                let ps = ps
                    .into_iter()
                    .map(|p| p.with_vars(g))
                    .collect::<Result<Vec<_>, _>>()?;
                FrobeniusSystem::new(ps)?
            };
            match frobenius_check(&sys) {
                FrobeniusVerdict::Integrable { potential } => Outcome::success(
                    format!("integrable, potential {potential}"),
                    json!({"integrable": true, "potential": s(&potential)}),
                ),
                FrobeniusVerdict::Fail(f) => {
                    let (text, w) = match f {
                        FrobeniusFailure::ComponentNotIntegrable(i) => (
                            format!("component f{i} is not integrable in x{i}"),
                            json!({"kind": "component_not_integrable", "component": i}),
                        ),
                        FrobeniusFailure::CrossPartialMismatch(i, j) => (
                            format!("cross partials of f{i} and f{j} differ"),
                            json!({"kind": "cross_partial_mismatch", "components": [i, j]}),
                        ),
                    };
                    Outcome::failure(text, json!({"integrable": false}), w)
                }
            }
        }
        Command::CheckHessian { .. } => {
            let q = expr()?;
            match is_complex_hessian(&q) {
                HessianVerdict::Yes { antiderivative } => Outcome::success(
                    format!("complex hessian of {antiderivative}"),
                    json!({"hessian": true, "antiderivative": s(&antiderivative)}),
                ),
                HessianVerdict::No(v) => {
                    let (text, w) = match &v {
                        HessianViolation::P1(word) => (
                            format!("{word} does not have one h and one h^T"),
                            json!({"kind": "p1", "word": s(word)}),
                        ),
                        HessianViolation::P2 { word, missing } => (
                            format!("{word} is missing Levi mate {missing}"),
                            json!({"kind": "p2", "word": s(word), "missing": s(missing)}),
                        ),
                        HessianViolation::CoefficientMismatch { word, mate } => (
                            format!("{word} and its Levi mate {mate} have different coefficients"),
                            json!({"kind": "coefficient_mismatch", "word": s(word), "mate": s(mate)}),
                        ),
                    };
                    Outcome::failure(
                        format!("not a complex hessian: {text}"),
                        json!({"hessian": false}),
                        w,
                    )
                }
            }
        }
        Command::Plush { .. } => {
            let p = expr()?;
            match classify_plush(&p)? {
                PlushVerdict::Plush(d) => Outcome::success(decomposition_text(&d), decomposition_json(&d)),
                PlushVerdict::NotPlush(w) => {
                    Outcome::failure(witness_text(&w), json!({"plush": false}), witness_json(&w))
                }
            }
        }
        Command::Eval { x, h, .. } => {
            let p = expr()?;
            let xs = matrices_from_json(x)?;
            let hs = h.as_deref().map(matrices_from_json).transpose()?;
            let m = eval(&p, &xs, hs.as_ref())?;
            let rows = matrix_rows(&m);
            let text = rows
                .iter()
                .map(|r| r.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("\n");
            Outcome::success(
                text,
                json!({"matrix": rows, "min_eigenvalue": min_eigenvalue(&m)}),
            )
        }
        Command::Sample {
            sizes,
            trials,
            seed,
            tol,
            ..
        } => {
            let q = expr()?;
            let cfg = SampleConfig {
                sizes: sizes.clone(),
                trials: *trials,
                seed: *seed,
                tol: *tol,
            };
            let r = sample_positivity(&q, &cfg)?;
            let result = json!({"samples": r.samples, "min_eigenvalue": r.min_eigenvalue, "seed": r.seed});
            let summary = format!("{} samples, min eigenvalue {:e}", r.samples, r.min_eigenvalue);
            match &r.witness {
                None => Outcome::success(format!("{summary}, no witness"), result),
                Some(w) => {
                    let tuple = |t: &MatrixTuple| t.to_rows();
                    let wj = json!({
                        "size": w.size,
                        "trial": w.trial,
                        "eigenvalue": w.eigenvalue,
                        "x": tuple(&w.x),
                        "h": w.h.as_ref().map(tuple),
                    });
                    Outcome::failure(
                        format!(
                            "{summary}, witness at size {} trial {}: {:e}",
                            w.size, w.trial, w.eigenvalue
                        ),
                        result,
                        wj,
                    )
                }
            }
        }
        Command::Relate {
            hereditary,
            antihereditary,
            analytic,
        } => {
            let her: Vec<(BigRational, &str)> = hereditary
                .iter()
                .map(|t| parse_square(t))
                .collect::<Result<_, _>>()?;
            let anti: Vec<(BigRational, &str)> = antihereditary
                .iter()
                .map(|t| parse_square(t))
                .collect::<Result<_, _>>()?;
            let mut texts: Vec<&str> = her.iter().chain(&anti).map(|(_, f)| *f).collect();
            texts.push(analytic.as_deref().unwrap_or("0"));
            let mut ps = polys(&texts, vars)?.into_iter();
            let g = ps.as_slice().first().map_or(1, Polynomial::vars);
            let mut take = |list: &[(BigRational, &str)]| -> Vec<WeightedSquare> {
                list.iter()
                    .map(|(w, _)| {
                        WeightedSquare::new(w.clone(), ps.next().expect("one polynomial per square"))
                    })
                    .collect()
            };
            let (hs, ks) = (take(&her), take(&anti));
            let f = ps.next().expect("analytic part");
            let target = PlushDecomposition::new(g, hs, ks, f);
            let p = target.expand();
            let minimal = match classify_plush(&p)? {
                PlushVerdict::Plush(d) => d,
                PlushVerdict::NotPlush(w) => {
                    return Ok(Outcome::failure(
                        witness_text(&w),
                        json!({"related": false}),
                        witness_json(&w),
                    ))
                }
            };
            match relate_representations(&minimal, &target) {
                Ok((u, v)) => {
                    let text = format!(
                        "p = {p}\nhereditary: X = {}, constants [{}], isometry {}\nantihereditary: X = {}, constants [{}], isometry {}",
                        u.transform,
                        join(&u.constants),
                        u.is_isometry(),
                        v.transform,
                        join(&v.constants),
                        v.is_isometry()
                    );
                    Outcome::success(
                        text,
                        json!({
                            "polynomial": s(&p),
                            "minimal": decomposition_json(&minimal),
                            "hereditary": relation_json(&u),
                            "antihereditary": relation_json(&v),
                        }),
                    )
                }
                Err(e) => Outcome::failure(format!("unrelated: {e}"), json!({"related": false}), s(&e)),
            }
        }
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn emit(cli: &Cli, cmd: &Command, input: Value) -> u8 {
    let start = Instant::now();
    let outcome = run(cmd, cli.vars);
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    match outcome {
        Ok(o) => {
            if cli.json {
                let mut doc = json!({
                    "command": cmd.name(),
                    "input": input,
                    "result": o.result,
                    "timing_ms": ms,
                });
                if let Some(w) = o.witness {
                    doc["witness"] = w;
                }
                println!("{doc}");
            } else {
                println!("{}", o.text);
            }
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn input_value(cmd: &Command) -> Value {
    match cmd {
        Command::Frobenius { components, .. } => json!(components),
        Command::Relate {
            hereditary,
            antihereditary,
            analytic,
        } => json!({
            "hereditary": hereditary,
            "antihereditary": antihereditary,
            "analytic": analytic,
        }),
        other => {
            let mut c = other.clone();
            json!(c.input_mut().and_then(|e| e.take()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(path) = &cli.corpus else {
        let code = emit(&cli, &cli.command, input_value(&cli.command));
        return ExitCode::from(code);
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let mut worst = 0;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cmd = cli.command.clone();
        match cmd.input_mut() {
            Some(slot) => *slot = Some(line.to_string()),
            None => {
                if let Command::Frobenius { components, .. } = &mut cmd {
                    *components = line.split(';').map(|c| c.trim().to_string()).collect();
                } else {
                    eprintln!("error: {} does not take corpus input", cmd.name());
                    return ExitCode::from(2);
                }
            }
        }
        if !cli.json {
            println!("> {line}");
        }
        worst = worst.max(emit(&cli, &cmd, input_value(&cmd)));
    }
    ExitCode::from(worst)
}
