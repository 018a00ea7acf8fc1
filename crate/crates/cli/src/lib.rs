//! `frobhom` command-line front end.
//!
//! [`run`] parses one command, runs it and returns the process exit code:
//! 0 on success, 2 on a definitive negative answer (not supersingular, a
//! failed check, no `m` up to the bound), 1 on bad input, 3 when a size cap
//! stops the computation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use frobhom_core::curves::{count_points, make_curve, torsion_subgroup, EllipticCurve};
use frobhom_core::field::{make_extension_field, FieldElement, DEFAULT_CAP};
use frobhom_core::homothety::{
    analyze_curve, default_ell_list, falsify_ordinary, homothety_holds, kernel_degree_check, FalsifyOutcome, Limits,
    TorsionCheck,
};
use frobhom_core::report::{CharpolyJson, FalsifyJson, KernelJson, PointCountJson, Report, TorsionJson, VerdictJson};
use frobhom_core::weil::{homothety_exponent, predicted_count, SupersingularityVerdict, WeilPolynomial};
use frobhom_core::{Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "frobhom",
    version,
    about = "Frobenius eigenvalues, supersingularity and torsion checks for curves over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count points, build P(T), decide supersingularity and check E[l].
    AnalyzeCurve {
        #[command(flatten)]
        curve: CurveArgs,
        /// Primes l to check; defaults to those reachable within the cap.
        #[arg(long, value_delimiter = ',')]
        ell_list: Option<Vec<u64>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decide supersingularity of a Weil polynomial given by its coefficients.
    AnalyzeWeil {
        /// Prime power q.
        #[arg(long)]
        q: String,
        /// c0,...,c2g, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check sigma^{2m} = [q^m] point by point on each E[l].
    VerifyHomothety {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_delimiter = ',')]
        ell_list: Option<Vec<u64>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Count points over F_{q^r} and compare with the Weil polynomial.
    CountPoints {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        r: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check |E[n]| = n^2.
    KernelCheck {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Smallest m with sigma^{2m} = [q^m] on one E[l]; meaningful for any curve.
    FalsifyOrdinary {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..))]
        m_max: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Base field F_{p^k}.
    #[arg(long, visible_alias = "q-power", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// a1,a2,a3,a4,a6: integers mod p, or element indices when k > 1.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    /// Largest field size to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Extension bound for torsion searches: `auto` (n^2 - 1) or a positive integer.
    #[arg(long, default_value = "auto", value_parser = parse_r_max)]
    r_max: RMax,
}

#[derive(Clone, Copy, Debug)]
struct RMax(Option<usize>);

fn parse_r_max(s: &str) -> std::result::Result<RMax, String> {
    if s == "auto" {
        return Ok(RMax(None));
    }
    match s.parse::<usize>() {
        Ok(r) if r >= 1 => Ok(RMax(Some(r))),
        _ => Err(format!("expected `auto` or a positive integer, got {s:?}")),
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Print the JSON report instead of a text summary.
    #[arg(long)]
    json: bool,
    /// Add a non-canonical `timing` section to the JSON report.
    #[arg(long)]
    timing: bool,
}

/// Result of one job before printing.
struct Outcome {
    report: Report,
    text: Vec<String>,
    negative: bool,
}

struct Timer {
    start: Instant,
    steps: BTreeMap<String, f64>,
}

impl Timer {
    fn new() -> Self {
        Timer { start: Instant::now(), steps: BTreeMap::new() }
    }

    fn lap(&mut self, name: &str) {
        let ms = self.start.elapsed().as_secs_f64() * 1e3;
        self.steps.insert(name.to_string(), ms);
    }
}

/// Runs the process with `std::env::args_os()`-style arguments.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Same as [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let (json_mode, timing) = match &cli.command {
        Command::AnalyzeCurve { out, .. }
        | Command::AnalyzeWeil { out, .. }
        | Command::VerifyHomothety { out, .. }
        | Command::CountPoints { out, .. }
        | Command::KernelCheck { out, .. }
        | Command::FalsifyOrdinary { out, .. } => (out.json, out.timing),
    };
    let mut timer = Timer::new();
    match dispatch(cli.command, &mut timer) {
        Ok(mut outcome) => {
            if json_mode {
                if timing {
                    timer.lap("total");
                    outcome.report.timing = Some(timer.steps);
                }
                let _ = out.write_all(outcome.report.to_json().as_bytes());
            } else {
                for line in &outcome.text {
                    let _ = writeln!(out, "{line}");
                }
            }
            if outcome.negative {
                2
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_cap_error() {
        3
    } else if matches!(e, Error::NotSupersingular(_)) {
        2
    } else {
        1
    }
}

fn dispatch(command: Command, timer: &mut Timer) -> Result<Outcome> {
    match command {
        Command::AnalyzeCurve { curve, ell_list, .. } => cmd_analyze_curve("analyze-curve", &curve, ell_list, timer),
        Command::VerifyHomothety { curve, ell_list, .. } => {
            cmd_analyze_curve("verify-homothety", &curve, ell_list, timer)
        }
        Command::AnalyzeWeil { q, coeffs, .. } => cmd_analyze_weil(&q, &coeffs, timer),
        Command::CountPoints { curve, r, .. } => cmd_count_points(&curve, r as usize, timer),
        Command::KernelCheck { curve, n_list, .. } => cmd_kernel_check(&curve, &n_list, timer),
        Command::FalsifyOrdinary { curve, ell, m_max, .. } => cmd_falsify(&curve, ell, m_max, timer),
    }
}

// ---- input parsing ----

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).collect()
}

fn parse_curve(args: &CurveArgs) -> Result<EllipticCurve> {
    let field = make_extension_field(args.p, args.k as usize, args.cap)?;
    let parts = split_list(&args.coeffs);
    if parts.len() != 5 {
        return Err(Error::InvalidInput(format!(
            "--coeffs needs exactly five values a1,a2,a3,a4,a6, got {}",
            parts.len()
        )));
    }
    let mut a = Vec::with_capacity(5);
    for part in parts {
        let c = if field.k() == 1 {
            let n: i64 =
                part.parse().map_err(|_| Error::InvalidInput(format!("coefficient {part:?} is not an integer")))?;
            FieldElement::from_int(&field, n)
        } else {
            let idx: u64 = part
                .parse()
                .map_err(|_| Error::InvalidInput(format!("coefficient {part:?} is not an element index")))?;
            FieldElement::from_index(&field, idx)?
        };
        a.push(c);
    }
    let [a1, a2, a3, a4, a6]: [FieldElement; 5] = a.try_into().expect("five coefficients");
    make_curve(a1, a2, a3, a4, a6)
}

fn limits(args: &CurveArgs) -> Limits {
    Limits { cap: args.cap, r_max: args.r_max.0 }
}

fn curve_input(command: &str, args: &CurveArgs, curve: &EllipticCurve) -> BTreeMap<String, Value> {
    let mut input = BTreeMap::new();
    input.insert("command".into(), json!(command));
    input.insert("p".into(), json!(args.p));
    input.insert("k".into(), json!(args.k));
    let coeffs: Vec<u64> =
        [curve.a1(), curve.a2(), curve.a3(), curve.a4(), curve.a6()].iter().map(|c| c.index()).collect();
    input.insert("coeffs".into(), json!(coeffs));
    input.insert("curve".into(), json!(curve.to_string()));
    input.insert("cap".into(), json!(args.cap));
    input.insert(
        "r_max".into(),
        match args.r_max.0 {
            Some(r) => json!(r),
            None => json!("auto"),
        },
    );
    input
}

// ---- text rendering ----

fn line(key: &str, value: impl std::fmt::Display) -> String {
    format!("{key:<10} {value}")
}

fn verdict_lines(verdict: &SupersingularityVerdict) -> Vec<String> {
    let mut out = Vec::new();
    match (&verdict.certificate, verdict.reason) {
        (Some(cert), _) => {
            out.push(line("verdict", format!("supersingular, m = {}", cert.m)));
            let factors: Vec<String> = cert
                .factors
                .iter()
                .map(|f| {
                    if f.multiplicity == 1 {
                        format!("Phi_{}", f.n)
                    } else {
                        format!("Phi_{}^{}", f.n, f.multiplicity)
                    }
                })
                .collect();
            out.push(line("Q(U)", factors.join(" * ")));
        }
        (None, Some(reason)) => {
            out.push(line("verdict", format!("not supersingular ({reason})")));
            if let Some(rem) = &verdict.remainder {
                out.push(line("remainder", rem));
            }
        }
        (None, None) => out.push(line("verdict", "not supersingular")),
    }
    let slopes: Vec<String> =
        verdict.newton_slopes.iter().map(|s| format!("{} x{}", s.value, s.multiplicity)).collect();
    out.push(line("slopes", slopes.join(", ")));
    out
}

fn torsion_line(t: &TorsionCheck, m: u64, q: u64) -> String {
    let qm = num_traits::pow(BigInt::from(q), m as usize);
    line(
        &format!("E[{}]", t.ell),
        format!(
            "r = {}, {} points, sigma^{} = [{}]: {}",
            t.r,
            t.size,
            2 * m,
            qm,
            if t.all_pass { "pass" } else { "FAIL" }
        ),
    )
}

// ---- commands ----

fn cmd_analyze_curve(
    command: &str,
    args: &CurveArgs,
    ell_list: Option<Vec<u64>>,
    timer: &mut Timer,
) -> Result<Outcome> {
    let curve = parse_curve(args)?;
    let limits = limits(args);
    let (n1, charpoly, verdict) = analyze_curve(&curve, args.cap)?;
    timer.lap("charpoly");
    let mut input = curve_input(command, args, &curve);
    let explicit = ell_list.is_some();
    let mut ells = ell_list.unwrap_or_else(|| default_ell_list(&curve, &charpoly, limits));
    ells.sort_unstable();
    ells.dedup();
    input.insert("ell_list".into(), json!(ells));
    let mut report = Report::new(input);
    report.charpoly = Some(CharpolyJson::from_weil(&charpoly));
    report.verdict = Some(VerdictJson::from_verdict(&verdict));
    report.point_counts = Some(vec![PointCountJson {
        r: 1,
        count: n1.to_string(),
        predicted: predicted_count(&charpoly, 1).to_string(),
    }]);
    let mut text = vec![line("curve", &curve), line("N_1", n1), line("P(T)", charpoly.poly())];
    text.extend(verdict_lines(&verdict));
    let Some(cert) = &verdict.certificate else {
        return Ok(Outcome { report, text, negative: true });
    };
    let mut checks = Vec::new();
    for ell in ells {
        if ell == curve.p() || !frobhom_core::field::is_prime(ell) {
            return Err(if ell == curve.p() { Error::EqualsCharacteristic(ell) } else { Error::NotPrime(ell) });
        }
        let sub = match torsion_subgroup(&curve, ell, limits.r_max_for(ell), limits.cap) {
            Ok(sub) => sub,
            // the default list is a guess from counts; drop what the cap cannot reach
            Err(e) if !explicit && e.is_cap_error() => {
                text.push(line(&format!("E[{ell}]"), format!("skipped: {e}")));
                continue;
            }
            Err(e) => return Err(e),
        };
        let all_pass = homothety_holds(&sub, cert.m);
        let size = sub.points.len() as u64;
        let check = TorsionCheck { ell, r: sub.r, size, checked: size, all_pass };
        timer.lap(&format!("torsion l={ell}"));
        text.push(torsion_line(&check, cert.m, curve.q()));
        checks.push(check);
    }
    let negative = checks.iter().any(|c| !c.all_pass);
    report.torsion_checks = Some(checks.iter().map(TorsionJson::from).collect());
    Ok(Outcome { report, text, negative })
}

fn cmd_analyze_weil(q: &str, coeffs: &str, timer: &mut Timer) -> Result<Outcome> {
    let parse =
        |s: &str| s.parse::<BigInt>().map_err(|_| Error::InvalidInput(format!("{s:?} is not a decimal integer")));
    let qb = parse(q.trim())?;
    let cs = split_list(coeffs).into_iter().map(parse).collect::<Result<Vec<_>>>()?;
    let weil = WeilPolynomial::new(cs, qb)?;
    let verdict = homothety_exponent(&weil)?;
    timer.lap("verdict");
    let mut input = BTreeMap::new();
    input.insert("command".into(), json!("analyze-weil"));
    input.insert("q".into(), json!(weil.q().to_string()));
    input.insert("coeffs".into(), json!(weil.poly().to_decimal_strings()));
    let mut report = Report::new(input);
    report.charpoly = Some(CharpolyJson::from_weil(&weil));
    report.verdict = Some(VerdictJson::from_verdict(&verdict));
    let mut text = vec![line("P(T)", weil.poly()), line("q", weil.q()), line("genus", weil.genus())];
    text.extend(verdict_lines(&verdict));
    Ok(Outcome { report, text, negative: !verdict.supersingular })
}

fn cmd_count_points(args: &CurveArgs, r: usize, timer: &mut Timer) -> Result<Outcome> {
    let curve = parse_curve(args)?;
    let (n1, charpoly, verdict) = analyze_curve(&curve, args.cap)?;
    let count = if r == 1 { n1 } else { count_points(&curve, r, args.cap)? };
    timer.lap("count");
    let predicted = predicted_count(&charpoly, r);
    let mut input = curve_input("count-points", args, &curve);
    input.insert("r".into(), json!(r));
    let mut report = Report::new(input);
    report.charpoly = Some(CharpolyJson::from_weil(&charpoly));
    report.verdict = Some(VerdictJson::from_verdict(&verdict));
    report.point_counts = Some(vec![PointCountJson { r, count: count.to_string(), predicted: predicted.to_string() }]);
    let agree = predicted == BigInt::from(count);
    let text = vec![
        line("curve", &curve),
        line("P(T)", charpoly.poly()),
        line(&format!("N_{r}"), count),
        line("predicted", format!("{predicted}{}", if agree { "" } else { " (MISMATCH)" })),
    ];
    Ok(Outcome { report, text, negative: !agree })
}

fn cmd_kernel_check(args: &CurveArgs, ns: &[u64], timer: &mut Timer) -> Result<Outcome> {
    let curve = parse_curve(args)?;
    let checks = kernel_degree_check(&curve, ns, limits(args))?;
    timer.lap("kernel");
    let mut input = curve_input("kernel-check", args, &curve);
    input.insert("n_list".into(), json!(ns));
    let mut report = Report::new(input);
    report.kernel_checks = Some(checks.iter().map(KernelJson::from).collect());
    let mut text = vec![line("curve", &curve)];
    for k in &checks {
        text.push(line(
            &format!("E[{}]", k.n),
            format!(
                "r = {}, {} points, expected {}: {}",
                k.r,
                k.size,
                k.expected,
                if k.pass { "pass" } else { "FAIL" }
            ),
        ));
    }
    Ok(Outcome { report, text, negative: checks.iter().any(|k| !k.pass) })
}

fn cmd_falsify(args: &CurveArgs, ell: u64, m_max: u64, timer: &mut Timer) -> Result<Outcome> {
    let curve = parse_curve(args)?;
    let (_, charpoly, verdict) = analyze_curve(&curve, args.cap)?;
    let outcome = falsify_ordinary(&curve, ell, m_max, limits(args))?;
    timer.lap("falsify");
    let mut input = curve_input("falsify-ordinary", args, &curve);
    input.insert("ell".into(), json!(ell));
    input.insert("m_max".into(), json!(m_max));
    let mut report = Report::new(input);
    report.charpoly = Some(CharpolyJson::from_weil(&charpoly));
    report.verdict = Some(VerdictJson::from_verdict(&verdict));
    report.falsify = Some(FalsifyJson::from_outcome(outcome, ell, m_max));
    let mut text = vec![line("curve", &curve), line("P(T)", charpoly.poly())];
    text.extend(verdict_lines(&verdict));
    let negative = match outcome {
        FalsifyOutcome::HoldsAt { r, m, .. } => {
            text.push(line(
                &format!("E[{ell}]"),
                format!("r = {r}, sigma^{} = [q^{m}] first holds at m = {m} (on this E[l] only)", 2 * m),
            ));
            false
        }
        FalsifyOutcome::NoHomothetyUpTo(bound) => {
            text.push(line(&format!("E[{ell}]"), format!("no m <= {bound} with sigma^(2m) = [q^m]")));
            true
        }
    };
    Ok(Outcome { report, text, negative })
}
