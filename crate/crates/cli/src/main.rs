//! `locring`: command-line access to the embedding, digit, lift and survey
//! pipelines. Exit status 0 on success, 1 when a check finds a
//! counterexample, 2 on bad input.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use locring::hensel::StructureIsomorphism;
use locring::lift::{self, kernel_witness};
use locring::verify::{self, EXHAUSTIVE_CAP};
use locring::{
    parse_field, parse_poly, Error, Field, FieldAutomorphism, Poly, QuotientRing,
    StabilizingMorphism,
};

#[derive(Parser)]
#[command(name = "locring", version, about = "Isomorphisms of the local rings K[x]/(P^n)")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residue-field embedding K[x]/(P) -> K[x]/(P^k) via an approximate root.
    Embed(EmbedArgs),
    /// Digits of an element in the basis 1, P, ..., P^(k-1).
    Digits(DigitsArgs),
    /// Lift a residue morphism x -> Q_f to level n and test the criterion.
    Lift(LiftArgs),
    /// List residue-field morphisms and, with --power, a certified isomorphism.
    FindIso(FindIsoArgs),
    /// Verify a morphism stored as JSON.
    Check(CheckArgs),
    /// Sweep all pairs of irreducibles and print CSV rows.
    Survey(SurveyArgs),
    /// Show the inseparable case F2(t), x^2+t being refused.
    DemoInseparable,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    field: String,
    #[arg(long)]
    poly: String,
    #[arg(long)]
    power: usize,
}

#[derive(Args)]
struct DigitsArgs {
    #[arg(long)]
    field: String,
    #[arg(long)]
    poly: String,
    #[arg(long)]
    power: usize,
    #[arg(long)]
    element: String,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    field: String,
    #[arg(long)]
    p1: String,
    #[arg(long)]
    p2: String,
    #[arg(long)]
    power: usize,
    /// `id` or `frob^e`.
    #[arg(long, default_value = "id")]
    sigma: String,
    /// X-image at the residue level; searched for when omitted.
    #[arg(long)]
    q: Option<String>,
}

#[derive(Args)]
struct FindIsoArgs {
    #[arg(long)]
    field: String,
    #[arg(long)]
    p1: String,
    #[arg(long)]
    p2: String,
    #[arg(long, default_value = "id")]
    sigma: String,
    #[arg(long)]
    power: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    morphism: PathBuf,
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long)]
    field: String,
    #[arg(long)]
    max_degree: usize,
    #[arg(long)]
    max_power: usize,
    /// Extra automorphisms to survey besides the identity (repeatable).
    #[arg(long)]
    sigma: Vec<String>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Why a command stopped.
enum Failure {
    /// A check produced a counterexample.
    Verification(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CriterionDisagreement { .. } | Error::InexactDivision(_) => {
                Failure::Verification(format!("{}: {e}", e.kind()))
            }
            _ => Failure::Input(format!("{}: {e}", e.kind())),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn emit(json: bool, text: &str, value: Value) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json value"));
    } else {
        print!("{text}");
    }
}

fn morphism_value(m: &StabilizingMorphism) -> Value {
    serde_json::from_str(&m.to_json()).expect("morphism json")
}

fn field_and_poly(field: &str, poly: &str) -> Result<(Field, Poly), Error> {
    let f = parse_field(field)?;
    let p = parse_poly(&f, poly)?;
    Ok((f, p))
}

fn cmd_embed(a: &EmbedArgs, json: bool) -> CmdResult {
    let (_, p) = field_and_poly(&a.field, &a.poly)?;
    let ring = QuotientRing::make(p, a.power)?;
    let iso = StructureIsomorphism::new(&ring)?;
    let s = iso.series();
    let ok = s.certificate_defect().is_zero();
    let mut text = format!("ring: {ring}\nU = {}\n", s.u());
    for (i, q) in s.q_list().iter().enumerate() {
        text += &format!("Q_{} = {q}\n", i + 1);
    }
    text += &format!(
        "R = {}\ncertificate P(U) = R*P^{}: {}\n",
        s.r_cert(),
        a.power,
        if ok { "ok" } else { "FAILED" }
    );
    let value = json!({
        "ring": ring.to_string(),
        "u": s.u().to_string(),
        "q_list": s.q_list().iter().map(Poly::to_string).collect::<Vec<_>>(),
        "r_cert": s.r_cert().to_string(),
        "certificate": ok,
        "morphism": morphism_value(iso.embedding()),
    });
    emit(json, &text, value);
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification("certificate identity fails".into()))
    }
}

fn cmd_digits(a: &DigitsArgs, json: bool) -> CmdResult {
    let (f, p) = field_and_poly(&a.field, &a.poly)?;
    let ring = QuotientRing::make(p, a.power)?;
    let iso = StructureIsomorphism::new(&ring)?;
    let x = ring.element(&parse_poly(&f, &a.element)?)?;
    let digits = iso.to_digits(&x)?;
    let shown: Vec<String> = digits.digits().iter().map(ToString::to_string).collect();
    let round_trip = iso.from_digits(&digits)? == x;
    let text = format!("[{}]\n", shown.join(", "));
    emit(
        json,
        &text,
        json!({"ring": ring.to_string(), "element": x.to_string(), "digits": shown, "round_trip": round_trip}),
    );
    if round_trip {
        Ok(())
    } else {
        Err(Failure::Verification(format!("digits of {x} do not reconstruct it")))
    }
}

fn parse_sigma(s: &str) -> Result<FieldAutomorphism, Error> {
    s.parse()
}

/// First candidate with `Q′ ≠ 0`, else the first one.
fn preferred(found: Vec<StabilizingMorphism>) -> Option<StabilizingMorphism> {
    let pos = found
        .iter()
        .position(|f| !f.q_image().derivative().is_zero())
        .unwrap_or(0);
    found.into_iter().nth(pos)
}

fn cmd_lift(a: &LiftArgs, json: bool) -> CmdResult {
    let f = parse_field(&a.field)?;
    let p1 = parse_poly(&f, &a.p1)?;
    let p2 = parse_poly(&f, &a.p2)?;
    let sigma = parse_sigma(&a.sigma)?;
    let g = match &a.q {
        Some(q) => lift::residue_morphism_from_q(&p1, &p2, sigma, &parse_poly(&f, q)?)?,
        None => preferred(lift::find_residue_isomorphisms(&p1, &p2, sigma)?).ok_or_else(|| {
            Failure::Input("no residue morphism exists for this pair".into())
        })?,
    };
    let report = lift::lift_is_isomorphism(&g, a.power)?;
    let lifted = lift::lift_morphism(&g, a.power)?;
    let certified = verify::certify_isomorphism(&lifted)?;
    let witness = kernel_witness(&g, &report)?;
    let witness_ok = match &witness {
        Some(w) => !w.is_zero() && lifted.apply(w)?.is_zero(),
        None => true,
    };
    let mut text = format!(
        "Q_f = {}\nS_f = {}\nQ_f' != 0: {}\ngcd(S_f, P2) = 1: {}\nverdict: {}\n",
        report.q_f, report.s_f, report.q_f_derivative_nonzero, report.gcd_sf_p2_is_one, report.verdict
    );
    if let Some(w) = &witness {
        text += &format!("kernel witness: {w}\n");
    }
    text += &format!("morphism: {}\n", lifted.to_json());
    let value = json!({
        "q_f": report.q_f.to_string(),
        "s_f": report.s_f.to_string(),
        "q_f_derivative_nonzero": report.q_f_derivative_nonzero,
        "gcd_sf_p2_is_one": report.gcd_sf_p2_is_one,
        "verdict": report.verdict,
        "kernel_witness": witness.as_ref().map(ToString::to_string),
        "morphism": morphism_value(&lifted),
    });
    emit(json, &text, value);
    if certified != report.verdict || !witness_ok {
        return Err(Failure::Verification(format!(
            "verdict {} but kernel check says {}",
            report.verdict, certified
        )));
    }
    Ok(())
}

fn cmd_find_iso(a: &FindIsoArgs, json: bool) -> CmdResult {
    let f = parse_field(&a.field)?;
    let p1 = parse_poly(&f, &a.p1)?;
    let p2 = parse_poly(&f, &a.p2)?;
    let sigma = parse_sigma(&a.sigma)?;
    let mut text = String::new();
    let mut listed = Vec::new();
    if p1.degree() == p2.degree() {
        for g in lift::find_residue_isomorphisms(&p1, &p2, sigma)? {
            let s = g.s_cert().expect("search attaches S_f").clone();
            let deriv = !g.q_image().derivative().is_zero();
            text += &format!("Q_f = {}  S_f = {}  Q_f' != 0: {}\n", g.q_image(), s, deriv);
            listed.push(json!({"q_f": g.q_image().to_string(), "s_f": s.to_string(), "q_f_derivative_nonzero": deriv}));
        }
    } else {
        text += "residue fields differ (degree mismatch)\n";
    }
    let mut value = json!({"sigma": sigma.to_string(), "residue_morphisms": listed});
    if let Some(n) = a.power {
        let iso = lift::rings_isomorphic_separable(&p1, &p2, n)?;
        match &iso {
            Some(m) => text += &format!("isomorphism at level {n}: {}\n", m.to_json()),
            None => text += &format!("not isomorphic at level {n}\n"),
        }
        value["isomorphism"] = iso.as_ref().map_or(Value::Null, morphism_value);
    }
    emit(json, &text, value);
    Ok(())
}

fn cmd_check(a: &CheckArgs, json: bool) -> CmdResult {
    let text = std::fs::read_to_string(&a.morphism)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", a.morphism.display())))?;
    let m = match StabilizingMorphism::from_json(&text) {
        Ok(m) => m,
        Err(Error::NotWellDefined(r)) => {
            let msg = format!("not well defined: certificate residue {r}");
            emit(json, &format!("FAIL {msg}\n"), json!({"pass": false, "witness": r.to_string()}));
            return Err(Failure::Verification(msg));
        }
        Err(e) => return Err(e.into()),
    };
    if m.source().size().is_some_and(|s| s <= EXHAUSTIVE_CAP) {
        let rep = verify::exhaustive_morphism_check(&m)?;
        if let Some((x, y)) = rep.witness {
            let msg = format!("ring-map law fails at ({x}, {y})");
            emit(json, &format!("FAIL {msg}\n"), json!({"pass": false, "witness": [x.to_string(), y.to_string()]}));
            return Err(Failure::Verification(msg));
        }
    }
    let matrix = verify::morphism_matrix(&m)?;
    let kernel = matrix.kernel_basis();
    if m.source().dimension() != m.target().dimension() || !kernel.is_empty() {
        let f = matrix.field();
        let witness: Vec<String> = kernel
            .first()
            .map(|v| v.iter().map(|c| f.format(c)).collect())
            .unwrap_or_default();
        let msg = format!("not an isomorphism; kernel vector [{}]", witness.join(", "));
        emit(json, &format!("FAIL {msg}\n"), json!({"pass": false, "witness": witness}));
        return Err(Failure::Verification(msg));
    }
    emit(json, &format!("ok: {m} is an isomorphism\n"), json!({"pass": true}));
    Ok(())
}

fn cmd_survey(a: &SurveyArgs) -> CmdResult {
    let f = parse_field(&a.field)?;
    let mut sigmas = vec![FieldAutomorphism::Identity];
    for s in &a.sigma {
        let s = parse_sigma(s)?;
        if !sigmas.contains(&s) {
            sigmas.push(s);
        }
    }
    let rows = locring::survey(&f, a.max_degree, a.max_power, &sigmas)?;
    let sink: Box<dyn Write> = match &a.output {
        Some(path) => Box::new(
            std::fs::File::create(path)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in &rows {
        w.serialize(r).map_err(|e| Failure::Input(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Input(e.to_string()))?;
    let bad = rows.iter().filter(|r| !r.consistent()).count();
    if bad > 0 {
        return Err(Failure::Verification(format!(
            "{bad} rows disagree with the kernel dimension"
        )));
    }
    Ok(())
}

fn cmd_demo_inseparable(json: bool) -> CmdResult {
    let (_, p) = field_and_poly("F2(t)", "x^2+t")?;
    let dp = p.derivative();
    let g = dp.gcd(&p)?;
    let embed = locring::embed_residue_field(&p, 2);
    let series = locring::hensel_root_series(&p, 2);
    let lifted = lift::isomorphism_from_residue(
        &StabilizingMorphism::identity(&QuotientRing::make(p.clone(), 1)?),
        2,
    );
    let refused = |r: &Result<_, Error>| matches!(r, Err(Error::NotSeparable(_)));
    let checks = [
        ("P' = 0", dp.is_zero()),
        ("gcd(P', P) != 1", !g.is_one()),
        ("embed refused as NotSeparable", refused(&embed.map(|_| ()))),
        ("root series refused as NotSeparable", refused(&series.map(|_| ()))),
        ("lift refused as NotSeparable", refused(&lifted.map(|_| ()))),
    ];
    let mut text = format!("field F2(t), P = {p}\nP' = {dp}\ngcd(P', P) = {g}\n");
    for (name, ok) in &checks {
        text += &format!("{} {name}\n", if *ok { "ok" } else { "FAIL" });
    }
    emit(
        json,
        &text,
        json!({
            "p": p.to_string(),
            "derivative": dp.to_string(),
            "gcd": g.to_string(),
            "checks": checks.iter().map(|(n, ok)| json!({"check": n, "ok": ok})).collect::<Vec<_>>(),
        }),
    );
    if checks.iter().all(|(_, ok)| *ok) {
        Ok(())
    } else {
        Err(Failure::Verification("inseparable case was not refused".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Embed(a) => cmd_embed(a, cli.json),
        Command::Digits(a) => cmd_digits(a, cli.json),
        Command::Lift(a) => cmd_lift(a, cli.json),
        Command::FindIso(a) => cmd_find_iso(a, cli.json),
        Command::Check(a) => cmd_check(a, cli.json),
        Command::Survey(a) => cmd_survey(a),
        Command::DemoInseparable => cmd_demo_inseparable(cli.json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
