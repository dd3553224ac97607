//! `ngit`: evaluate GIT-quotient problem files.

mod convert;
mod render;
mod run;
mod schema;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use serde_json::Value as Json;

use render::Format;
use run::{Failure, Flags, Outcome};

#[derive(Parser, Debug)]
#[command(name = "ngit", version, about = "Exact intersection pairings and Betti numbers of GIT quotients")]
struct Args {
    /// Problem files (JSON).
    #[arg(required = true)]
    files: Vec<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Series truncation bound (highest power of t kept).
    #[arg(long, value_name = "N")]
    truncate: Option<usize>,

    /// Use the opposite residue orientation.
    #[arg(long)]
    sign_flip: bool,

    /// Run the consistency checks relevant to each input.
    #[arg(long)]
    check_invariants: bool,

    /// Floating-point moment-map diagnostics on `moment_samples`.
    #[arg(long)]
    check_moment: bool,

    /// Also write each rendered result to this directory.
    #[arg(long, env = "NGIT_OUT_DIR", value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

fn evaluate(path: &Path, flags: &Flags) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(convert::invalid("", format!("cannot read {}: {e}", path.display()))))?;
    let problem = schema::parse(&text).map_err(|m| Failure::Invalid(convert::invalid("", m)))?;
    run::run(&problem, flags)
}

fn render(format: Format, file: &str, r: &Result<Outcome, Failure>) -> Option<String> {
    match (format, r) {
        (Format::Json, Ok(o)) => Some(render::json_outcome(file, o).to_string()),
        (Format::Json, Err(f)) => Some(render::json_failure(file, f).to_string()),
        (Format::Text, Ok(o)) => Some(render::text(o)),
        (Format::Latex, Ok(o)) => Some(render::latex(o)),
        (_, Err(_)) => None,
    }
}

fn write_out(dir: &Path, file: &Path, format: Format, body: &str) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let target = dir.join(format!("{stem}.{}", format.extension()));
    std::fs::write(&target, format!("{body}\n")).with_context(|| format!("writing {}", target.display()))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let flags = Flags {
        truncate: args.truncate,
        sign_flip: args.sign_flip,
        check_invariants: args.check_invariants,
        check_moment: args.check_moment,
    };

    let results: Vec<Result<Outcome, Failure>> = std::thread::scope(|s| {
        let handles: Vec<_> = args.files.iter().map(|f| s.spawn(|| evaluate(f, &flags))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let multiple = args.files.len() > 1;
    let mut code = 0;
    let mut json_docs: Vec<Json> = Vec::new();
    for (path, r) in args.files.iter().zip(&results) {
        let name = path.display().to_string();
        match r {
            Ok(o) => {
                for w in &o.warnings {
                    eprintln!("{name}: warning: {w}");
                }
                if o.checks.iter().any(|c| !c.ok) {
                    code = code.max(2);
                }
            }
            Err(f) => {
                eprintln!("{name}: {f}");
                code = code.max(f.exit_code());
            }
        }
        let Some(body) = render(args.format, &name, r) else { continue };
        if let Some(dir) = &args.out_dir {
            if let Err(e) = write_out(dir, path, args.format, &body) {
                eprintln!("{name}: {e:#}");
                code = code.max(2);
            }
        }
        match args.format {
            Format::Json => json_docs.push(serde_json::from_str(&body).expect("rendered JSON")),
            _ if multiple => println!("== {name}\n{body}"),
            _ => println!("{body}"),
        }
    }
    match json_docs.len() {
        0 => {}
        1 if !multiple => println!("{}", serde_json::to_string_pretty(&json_docs[0]).expect("serialisable")),
        _ => println!("{}", serde_json::to_string_pretty(&json_docs).expect("serialisable")),
    }
    ExitCode::from(code as u8)
}
