//! The `tvcat` command line: model files in, law reports and constructions out.
//!
//! Exit codes: 0 success, 1 a check failed, 2 malformed input, 3 size cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lofs_core::format::{category_to_json, functor_to_json, to_text, Workspace};
use lofs_core::lofs::{LiftingProblem, Lofs};
use lofs_core::presheaf::{Class, Limits, Phi};
use lofs_core::verify::{verify_paper, VerifyConfig};
use lofs_core::{Error, LawReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "tvcat", version, about = "Finite (T,V)-categories, presheaf monads and their factorisation systems")]
pub struct Cli {
    /// Largest presheaf space or comma object that may be built.
    #[arg(long, global = true, env = "TVCAT_MAX_SPACE", default_value_t = 4096)]
    pub max_space: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Directory of model files loaded before the command, so that names resolve.
    #[arg(long, global = true)]
    pub seed_corpus: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate model files or directories.
    Check { files: Vec<PathBuf> },
    /// Factor a functor through its comma object.
    Factor {
        functor: String,
        #[arg(long, default_value = "all")]
        class: String,
        /// Write K, ΦX, L, R, q and the ends of the functor as model files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report membership of a functor in L and R.
    Classify {
        functor: String,
        #[arg(long, default_value = "all")]
        class: String,
    },
    /// Solve a lifting problem with the canonical filler.
    Lift {
        problem: String,
        #[arg(long, default_value = "all")]
        class: String,
    },
    /// The presheaf space of a category and its Yoneda functor.
    Complete {
        category: String,
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the presheaves on a category.
    Presheaves {
        category: String,
        #[arg(long, default_value = "all")]
        class: String,
    },
    /// Run every suite over the default corpus.
    VerifyPaper {
        /// Cap on carrier sizes.
        #[arg(long)]
        max_size: Option<usize>,
    },
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed(_) | Error::Shape(_) | Error::Mismatch(_) | Error::Unsupported(_) => 2,
        Error::SizeCap { .. } => 3,
        Error::Law { .. } | Error::Precondition(_) => 1,
    }
}

fn err_outcome(e: Error) -> Outcome {
    Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome::ok(text) } else { Outcome { code, stdout: String::new(), stderr: text } };
        }
    };
    match execute(&cli) {
        Ok(o) => o,
        Err(e) => err_outcome(e),
    }
}

fn limits(cli: &Cli) -> Limits {
    Limits { max_space: cli.max_space, ..Limits::default() }
}

fn engine(cli: &Cli, class: &str) -> Result<Lofs, Error> {
    Ok(Lofs::new(Phi::builtin(Class::parse(class)?, limits(cli))))
}

/// Loads the seed corpus and refuses to go on when anything fails validation.
fn workspace(cli: &Cli, extra: &[&Path]) -> Result<(Workspace, Vec<LawReport>), Error> {
    let mut ws = Workspace::new();
    if let Some(dir) = &cli.seed_corpus {
        ws.load(dir)?;
    }
    for p in extra {
        ws.load(p)?;
    }
    let reports = ws.validate();
    Ok((ws, reports))
}

fn validated(cli: &Cli, refs: &[&str]) -> Result<Workspace, Error> {
    let (mut ws, _) = workspace(cli, &[])?;
    for r in refs {
        ws.fetch(r)?;
    }
    if let Some(bad) = ws.validate().into_iter().find(|r| !r.passed()) {
        let c = bad.first_failure().expect("failed report");
        return Err(Error::law(format!("{}: {}", bad.subject, c.name), c.witness.clone().unwrap_or_default()));
    }
    Ok(ws)
}

fn render(cli: &Cli, text: String, value: Value) -> String {
    match cli.output {
        Output::Text => text,
        Output::Json => to_text(&value),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Check { files } => {
            let paths: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
            let (_, reports) = workspace(cli, &paths)?;
            let ok = reports.iter().all(LawReport::passed);
            let text: String = reports.iter().map(|r| r.to_string()).collect();
            let value = serde_json::to_value(&reports).expect("reports serialise");
            Ok(Outcome::with_code(if ok { 0 } else { 1 }, render(cli, text, json!({ "passed": ok, "reports": value }))))
        }
        Command::Factor { functor, class, out } => {
            let mut ws = validated(cli, &[functor])?;
            let f = ws.functor(functor)?;
            let lofs = engine(cli, class)?;
            let fa = lofs.factorise(&f)?;
            let (x, y) = (f.src().name().to_string(), f.tgt().name().to_string());
            let phix = format!("Phi{x}");
            let files = vec![
                (x.clone(), category_to_json(f.src(), &x)),
                (y.clone(), category_to_json(f.tgt(), &y)),
                (phix.clone(), category_to_json(fa.space().category(), &phix)),
                ("K".to_string(), category_to_json(fa.k(), "K")),
                ("L".to_string(), functor_to_json("L", fa.l(), &x, "K")),
                ("R".to_string(), functor_to_json("R", fa.r(), "K", &y)),
                ("q".to_string(), functor_to_json("q", fa.q(), "K", &phix)),
            ];
            write_out(out.as_deref(), &files)?;
            let mut text = format!("factorisation of {} through K ({} points, class {})\n", f.describe(), fa.len(), fa.class_name());
            text.push_str(&format!("K = {{{}}}\n", fa.k().points().join(", ")));
            text.push_str(&format!("L: {}\n", map_text(fa.l())));
            text.push_str(&format!("R: {}\n", map_text(fa.r())));
            text.push_str(&fa.report().to_string());
            let value = json!({
                "K": files[3].1, "L": files[4].1, "R": files[5].1, "q": files[6].1,
                "report": serde_json::to_value(fa.report()).expect("report serialises"),
            });
            Ok(Outcome::ok(render(cli, text, value)))
        }
        Command::Classify { functor, class } => {
            let mut ws = validated(cli, &[functor])?;
            let f = ws.functor(functor)?;
            let lofs = engine(cli, class)?;
            let m = lofs.l_membership(&f)?;
            let r = lofs.r_membership(&f)?;
            let yes = |b: bool| if b { "yes" } else { "no" };
            let ff = if m.fully_faithful { "fully faithful" } else { "not fully faithful" };
            let dense = if m.dense { "dense" } else { "not dense" };
            let text = format!("L: {} ({ff}, {dense}); R: {}\n", yes(m.member()), yes(r.is_some()));
            let value = json!({
                "functor": f.describe(), "class": class,
                "L": m.member(), "fully_faithful": m.fully_faithful, "dense": m.dense,
                "R": r.is_some(), "algebra": r.map(|p| p.map().to_vec()),
            });
            Ok(Outcome::ok(render(cli, text, value)))
        }
        Command::Lift { problem, class } => {
            let mut ws = validated(cli, &[problem])?;
            let [f, g, u, v] = ws.problem(problem)?;
            let prob = LiftingProblem::new(f, g, u, v)?;
            let lofs = engine(cli, class)?;
            let m = lofs.l_membership(&prob.f)?;
            if !m.member() {
                let why = if m.fully_faithful { "not dense" } else { "not fully faithful" };
                return Err(Error::Precondition(format!("f = {} is not in L ({why})", prob.f.describe())));
            }
            let d = lofs.solve_lifting(&prob)?;
            let text = format!("canonical filler: {}\n", map_text(&d));
            let value = functor_to_json("filler", &d, d.src().name(), d.tgt().name());
            Ok(Outcome::ok(render(cli, text, value)))
        }
        Command::Complete { category, class, out } => {
            let mut ws = validated(cli, &[category])?;
            let x = ws.category(category)?;
            let phi = Phi::builtin(Class::parse(class)?, limits(cli));
            let s = phi.space(&x)?;
            let name = format!("Phi{}", x.name());
            let y = s.yoneda()?;
            let files = vec![
                (x.name().to_string(), category_to_json(&x, x.name())),
                (name.clone(), category_to_json(s.category(), &name)),
                ("yoneda".to_string(), functor_to_json("yoneda", &y, x.name(), &name)),
            ];
            write_out(out.as_deref(), &files)?;
            let text = format!("{name}: {} presheaves\n{}\ny: {}\n", s.len(), s.category().points().join(", "), map_text(&y));
            Ok(Outcome::ok(render(cli, text, json!({ "space": files[1].1, "yoneda": files[2].1 }))))
        }
        Command::Presheaves { category, class } => {
            let mut ws = validated(cli, &[category])?;
            let x = ws.category(category)?;
            let phi = Phi::builtin(Class::parse(class)?, limits(cli));
            let s = phi.space(&x)?;
            let names = s.category().points().to_vec();
            let text: String = names.iter().map(|n| format!("{n}\n")).collect();
            Ok(Outcome::ok(render(cli, text, json!({ "category": x.name(), "class": class, "presheaves": names }))))
        }
        Command::VerifyPaper { max_size } => {
            let mut cfg = VerifyConfig { limits: limits(cli), ..VerifyConfig::default() };
            if let Some(n) = max_size {
                cfg = cfg.with_max_size(*n);
            }
            let mut seed_ok = true;
            let mut seed_text = String::new();
            if cli.seed_corpus.is_some() {
                let (_, reports) = workspace(cli, &[])?;
                seed_ok = reports.iter().all(LawReport::passed);
                seed_text = format!("seed corpus: {} objects, {}\n", reports.len(), if seed_ok { "valid" } else { "INVALID" });
            }
            let report = verify_paper(&cfg);
            let ok = report.passed() && seed_ok;
            let text = format!("{seed_text}{report}");
            let value = serde_json::to_value(&report).expect("report serialises");
            Ok(Outcome::with_code(if ok { 0 } else { 1 }, render(cli, text, value)))
        }
    }
}

fn map_text(f: &lofs_core::tvcat::Functor) -> String {
    let parts: Vec<String> = (0..f.src().len()).map(|x| format!("{} ↦ {}", f.src().points()[x], f.tgt().points()[f.at(x)])).collect();
    parts.join(", ")
}

fn write_out(dir: Option<&Path>, files: &[(String, Value)]) -> Result<(), Error> {
    let Some(dir) = dir else { return Ok(()) };
    fs::create_dir_all(dir).map_err(|e| Error::Malformed(format!("{}: {e}", dir.display())))?;
    for (name, v) in files {
        let p = dir.join(format!("{name}.json"));
        fs::write(&p, to_text(v)).map_err(|e| Error::Malformed(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}
