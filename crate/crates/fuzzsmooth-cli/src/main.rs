//! `fuzzsmooth`: inspect, smooth and certify fuzzy numbers stored as `.fz` documents.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fuzzsmooth::approx::{approximate, preservation_report, Schedule};
use fuzzsmooth::calculus::{class_membership_tol, classify_points_tol, sup_metric};
use fuzzsmooth::expr::format_number;
use fuzzsmooth::io::{cuts_csv, level_grid, membership_csv, svg_plot, Body, FuzzyDocument};
use fuzzsmooth::smoother::{check_smoother_conditions, synthesize, SynthesisOptions};
use fuzzsmooth::{convolve, fixtures, scale, tol, FuzzyError, FuzzyNum};

#[derive(Parser)]
#[command(
    name = "fuzzsmooth",
    version,
    about = "Level-wise calculus and smoothing of fuzzy numbers"
)]
struct Cli {
    /// Relative tolerance for comparing one-sided slopes.
    #[arg(long, global = true, default_value_t = tol::SLOPE)]
    tol: f64,
    /// Number of equally spaced levels or abscissae in sampled output.
    #[arg(long, global = true, default_value_t = 1025)]
    grid: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the defining clauses of a fuzzy number.
    Validate { file: String },
    /// The α-cut (or strong cut) at a level.
    Cut {
        file: String,
        alpha: f64,
        #[arg(long)]
        strong: bool,
    },
    /// Membership grades with one-sided limits.
    Membership { file: String, xs: Vec<f64> },
    /// Points of the open support where the membership is not differentiable.
    Classify { file: String },
    /// Membership in the classes F_T, F_N, F_C and F_D.
    Class { file: String },
    /// Supremum distance between two fuzzy numbers.
    Metric { a: String, b: String },
    /// Sup-min convolution (the sum) of two fuzzy numbers.
    Convolve {
        a: String,
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scalar multiple of a fuzzy number.
    Scale {
        file: String,
        #[arg(allow_hyphen_values = true)]
        factor: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether a smoother satisfies the smoothing conditions for a fuzzy number.
    SmoothCheck { u: String, w: String },
    /// Build a smoother for a fuzzy number.
    Synthesize {
        file: String,
        /// Support width of the smoother.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long)]
        preserve_core: bool,
        /// Upper bound on the smoother's membership slope.
        #[arg(long)]
        lipschitz: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smooth approximations along the schedule p_n = p/n, with the error report.
    Approximate {
        file: String,
        /// Smoother document; required unless --synthesize is given.
        #[arg(long, conflicts_with = "synthesize")]
        smoother: Option<String>,
        #[arg(long)]
        synthesize: bool,
        #[arg(long)]
        preserve_core: bool,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Scale of the first step.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Directory for the step documents and `report.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV table of cuts (`alpha,lo,hi`) or of membership grades (`x,mu`).
    Sample {
        file: String,
        #[arg(long)]
        membership: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG plot of one or more membership functions.
    Plot {
        files: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure and its exit status.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<FuzzyError> for Failure {
    fn from(e: FuzzyError) -> Self {
        let code = match e {
            FuzzyError::Parse { .. } | FuzzyError::Io(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: "usage",
        message: message.into(),
    }
}

type Outcome = Result<Report, Failure>;

/// Text for stdout and whether the run counts as a semantic failure.
struct Report {
    text: String,
    ok: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, ok: true }
    }
}

fn num(x: f64) -> String {
    format_number(x)
}

/// Reads a document from a path, or a bundled example as `@name`.
fn read_document(spec: &str) -> Result<FuzzyDocument, Failure> {
    let text = match spec.strip_prefix('@') {
        Some(name) => fixtures::text(name)
            .ok_or_else(|| {
                usage(format!(
                    "no bundled example {name:?}; known: {}",
                    fixtures::names().collect::<Vec<_>>().join(", ")
                ))
            })?
            .to_string(),
        None => std::fs::read_to_string(spec).map_err(|e| Failure {
            code: 2,
            kind: "io",
            message: format!("{spec}: {e}"),
        })?,
    };
    FuzzyDocument::parse(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{spec}: {}", f.message);
        f
    })
}

fn load(spec: &str) -> Result<FuzzyNum, Failure> {
    read_document(spec)?.to_fuzzy().map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{spec}: {}", f.message);
        f
    })
}

fn stem(spec: &str) -> String {
    let s = spec.strip_prefix('@').unwrap_or(spec);
    Path::new(s)
        .file_stem()
        .map_or_else(|| s.to_string(), |x| x.to_string_lossy().into_owned())
}

/// Writes through a temporary file in the target directory, then renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure {
        code: 2,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Sends `text` to `out`, or returns it for stdout.
fn emit(out: Option<&Path>, text: String) -> Outcome {
    match out {
        Some(p) => {
            write_atomic(p, text.as_bytes())?;
            Ok(Report::ok(format!("wrote {}\n", p.display())))
        }
        None => Ok(Report::ok(text)),
    }
}

fn validate(file: &str) -> Outcome {
    let doc = read_document(file)?;
    let u = match &doc.body {
        Body::Cuts { left, right } => FuzzyNum::new(left.clone(), right.clone()),
        Body::Membership(_) => match doc.to_fuzzy() {
            Ok(u) => u,
            Err(e) => {
                return Ok(Report {
                    text: format!("invalid: {e}\n"),
                    ok: false,
                })
            }
        },
    };
    let report = u.validate();
    let mut text = String::new();
    for c in &report.checks {
        let _ = writeln!(text, "{c}");
    }
    let _ = writeln!(text, "{}", if report.is_valid() { "valid" } else { "invalid" });
    Ok(Report {
        text,
        ok: report.is_valid(),
    })
}

fn cut(file: &str, alpha: f64, strong: bool) -> Outcome {
    let u = load(file)?;
    let c = if strong {
        u.strong_cut(alpha)?
    } else {
        u.alpha_cut(alpha)?
    };
    Ok(Report::ok(format!("{} {}\n", num(c.lo), num(c.hi))))
}

fn membership(file: &str, xs: &[f64], grid: usize) -> Outcome {
    let u = load(file)?;
    let xs = if xs.is_empty() {
        abscissa_grid(&u, grid)
    } else {
        xs.to_vec()
    };
    let mut text = String::from("x,mu,left_limit,right_limit\n");
    for x in xs {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            num(x),
            num(u.membership(x)),
            num(u.limit_left(x)),
            num(u.limit_right(x))
        );
    }
    Ok(Report::ok(text))
}

fn abscissa_grid(u: &FuzzyNum, n: usize) -> Vec<f64> {
    let s = u.support();
    let n = n.max(2);
    (0..n).map(|k| s.lo + s.width() * k as f64 / (n - 1) as f64).collect()
}

fn classify(file: &str, tol_slope: f64) -> Outcome {
    let u = load(file)?;
    let mut text = String::from("x,kind,branch,level,left_limit,right_limit,left_slope,right_slope\n");
    for p in classify_points_tol(&u, tol_slope) {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{}",
            num(p.x),
            match p.kind {
                fuzzsmooth::SingularKind::Kink => "kink",
                fuzzsmooth::SingularKind::Jump => "jump",
            },
            p.branch.label(),
            num(p.level),
            num(p.left_limit),
            num(p.right_limit),
            num(p.left_slope),
            num(p.right_slope)
        );
    }
    Ok(Report::ok(text))
}

fn class(file: &str, tol_slope: f64) -> Outcome {
    let u = load(file)?;
    let f = class_membership_tol(&u, tol_slope);
    Ok(Report::ok(format!(
        "F_T {}\nF_N {}\nF_C {}\nF_D {}\n",
        f.in_ft, f.in_fn, f.in_fc, f.in_fd
    )))
}

fn metric(a: &str, b: &str) -> Outcome {
    let m = sup_metric(&load(a)?, &load(b)?);
    Ok(Report::ok(format!(
        "distance {}\ncertified_gap {}\nlevel {}\n",
        num(m.value),
        num(m.certified_gap),
        num(m.level)
    )))
}

fn document(name: &str, source: &str, u: &FuzzyNum) -> String {
    FuzzyDocument::from_fuzzy(name, Some(source), u).render()
}

fn smooth_check(u: &str, w: &str) -> Outcome {
    let report = check_smoother_conditions(&load(u)?, &load(w)?);
    let mut text = String::new();
    for c in &report.checks {
        let _ = writeln!(text, "{c}");
    }
    let f = report.u_class;
    let _ = writeln!(
        text,
        "u classes: F_T {} F_N {} F_C {} F_D {}",
        f.in_ft, f.in_fn, f.in_fc, f.in_fd
    );
    let _ = writeln!(text, "smoother differentiable: {}", report.smoother_in_fd);
    match report.theorem {
        Some(t) => {
            let _ = writeln!(text, "theorem {}", t.label());
        }
        None => {
            let _ = writeln!(text, "theorem none: {}", report.refusal());
        }
    }
    Ok(Report {
        text,
        ok: report.theorem.is_some(),
    })
}

fn synth(file: &str, p: f64, preserve_core: bool, lipschitz: Option<f64>, out: Option<&Path>) -> Outcome {
    let u = load(file)?;
    let opts = SynthesisOptions {
        preserve_core,
        lipschitz_cap: lipschitz,
    };
    let w = synthesize(&u, p, opts)?;
    let name = format!("{}_smoother", stem(file));
    emit(
        out,
        document(
            &name,
            &format!("smoother synthesized for {} with p = {}", stem(file), num(p)),
            &w,
        ),
    )
}

struct ApproxArgs<'a> {
    file: &'a str,
    smoother: Option<&'a str>,
    synthesize: bool,
    preserve_core: bool,
    steps: usize,
    p: f64,
    out: Option<&'a Path>,
}

fn approx(a: ApproxArgs) -> Outcome {
    let u = load(a.file)?;
    let zeta = match (a.smoother, a.synthesize) {
        (Some(w), false) => load(w)?,
        (None, true) => synthesize(
            &u,
            1.0,
            SynthesisOptions {
                preserve_core: a.preserve_core,
                lipschitz_cap: None,
            },
        )?,
        _ => return Err(usage("give either --smoother FILE or --synthesize")),
    };
    if a.steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    if !(a.p > 0.0 && a.p.is_finite()) {
        return Err(usage("--p must be positive"));
    }
    let schedule = Schedule::new((1..=a.steps).map(|n| a.p / n as f64).collect())?;
    let result = approximate(&u, &zeta, &schedule)?;
    let preserved = preservation_report(&u, &zeta, &result);

    let mut csv = String::from("n,p,measured,certified_gap,bound,satisfied,smooth,core_preserved\n");
    for (i, row) in result.report.rows.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            i + 1,
            num(row.p),
            num(row.measured),
            num(row.certified_gap),
            num(row.bound),
            row.satisfied,
            result.smoothness[i].in_fd,
            preserved.rows[i].core_preserved
        );
    }
    let mut text = format!("theorem {}\n", result.theorem.label());
    text.push_str(&csv);
    let _ = writeln!(text, "monotone {}", result.report.monotone);
    let _ = writeln!(text, "all_bounds_satisfied {}", result.report.all_satisfied());
    let _ = writeln!(text, "all_steps_smooth {}", result.all_smooth());

    if let Some(dir) = a.out {
        std::fs::create_dir_all(dir).map_err(|e| Failure {
            code: 2,
            kind: "io",
            message: format!("{}: {e}", dir.display()),
        })?;
        let base = stem(a.file);
        let width = a.steps.to_string().len();
        for (i, (step, &p)) in result.steps.iter().zip(schedule.values()).enumerate() {
            let name = format!("{base}_step_{:0width$}", i + 1);
            let body = document(&name, &format!("{base} smoothed at p = {}", num(p)), step);
            write_atomic(&dir.join(format!("{name}.fz")), body.as_bytes())?;
        }
        write_atomic(&dir.join("report.csv"), csv.as_bytes())?;
        let _ = writeln!(
            text,
            "wrote {} step files and report.csv to {}",
            result.steps.len(),
            dir.display()
        );
    }
    let ok = result.report.all_satisfied() && result.all_smooth();
    Ok(Report { text, ok })
}

fn sample(file: &str, as_membership: bool, grid: usize, out: Option<&Path>) -> Outcome {
    let u = load(file)?;
    let text = if as_membership {
        membership_csv(&u, &abscissa_grid(&u, grid))
    } else {
        cuts_csv(&u, &level_grid(grid))?
    };
    emit(out, text)
}

fn plot(files: &[String], out: Option<&Path>) -> Outcome {
    if files.is_empty() {
        return Err(usage("plot needs at least one document"));
    }
    let nums = files.iter().map(|f| load(f)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = files.iter().map(|f| stem(f)).collect();
    let curves: Vec<(&str, &FuzzyNum)> = names.iter().map(String::as_str).zip(&nums).collect();
    emit(out, svg_plot(&curves))
}

fn run(cli: Cli) -> Outcome {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(usage("--tol must be positive"));
    }
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Cut { file, alpha, strong } => cut(&file, alpha, strong),
        Command::Membership { file, xs } => membership(&file, &xs, cli.grid),
        Command::Classify { file } => classify(&file, cli.tol),
        Command::Class { file } => class(&file, cli.tol),
        Command::Metric { a, b } => metric(&a, &b),
        Command::Convolve { a, b, out } => {
            let w = convolve(&load(&a)?, &load(&b)?);
            let name = format!("{}_plus_{}", stem(&a), stem(&b));
            emit(
                out.as_deref(),
                document(&name, &format!("sup-min sum of {} and {}", stem(&a), stem(&b)), &w),
            )
        }
        Command::Scale { file, factor, out } => {
            let w = scale(factor, &load(&file)?);
            let name = format!("{}_scaled", stem(&file));
            emit(
                out.as_deref(),
                document(&name, &format!("{} times {}", num(factor), stem(&file)), &w),
            )
        }
        Command::SmoothCheck { u, w } => smooth_check(&u, &w),
        Command::Synthesize {
            file,
            p,
            preserve_core,
            lipschitz,
            out,
        } => synth(&file, p, preserve_core, lipschitz, out.as_deref()),
        Command::Approximate {
            file,
            smoother,
            synthesize,
            preserve_core,
            steps,
            p,
            out,
        } => approx(ApproxArgs {
            file: &file,
            smoother: smoother.as_deref(),
            synthesize,
            preserve_core,
            steps,
            p,
            out: out.as_deref(),
        }),
        Command::Sample { file, membership, out } => sample(&file, membership, cli.grid, out.as_deref()),
        Command::Plot { files, out } => plot(&files, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => {
            print!("{}", r.text);
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: kind={} {}", f.kind, f.message);
            ExitCode::from(f.code)
        }
    }
}
