use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use twistfan_cli::document::to_json;
use twistfan_cli::{
    cmd_check, cmd_div_fan, cmd_flows, cmd_rub_fan, cmd_slice, cmd_suggest_theta, render_svg, FanDocument, Problem,
    ProblemSpec, DEFAULT_BOX,
};

#[derive(Parser)]
#[command(name = "twistfan", version, about = "Cone complexes of stable twists on a tropical curve")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Structured JSON document.
    Doc,
    /// Human-readable text.
    Pretty,
}

#[derive(Args)]
struct Common {
    /// Input file: a problem, or a fan document for `slice`.
    #[arg(long, short)]
    input: PathBuf,
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Coordinates scanned by the point checks run from 0 to this bound.
    #[arg(long = "box", default_value_t = DEFAULT_BOX)]
    box_bound: i64,
    #[arg(long, value_enum, default_value_t = Format::Doc)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// List every (model, divisor, flow) triple.
    Flows(Common),
    /// Build the fan of twist cones.
    DivFan(Common),
    /// Build the refinement by orderings with its lattices.
    RubFan(Common),
    /// Cut a fan document with the hyperplane `w . l = 1`.
    Slice {
        #[command(flatten)]
        common: Common,
        /// Positive weights `w`, comma separated; all ones by default.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        weights: Option<Vec<i64>>,
        /// Also render the slice as SVG to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the full property suite and report each check.
    Check {
        #[command(flatten)]
        common: Common,
        /// Drop this Div cone (by position) before checking.
        #[arg(long)]
        skip_flow: Option<usize>,
    },
    /// Propose a generic stability condition with the given sign per vertex.
    SuggestTheta {
        #[command(flatten)]
        common: Common,
        /// One of -1, 0, 1 per vertex in graph order, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        signs: Vec<i8>,
    },
}

fn emit(common: &Common, doc: String, pretty: impl FnOnce() -> String) -> Result<()> {
    let text = match common.format {
        Format::Doc => doc,
        Format::Pretty => pretty(),
    };
    write_out(common.out.as_deref(), &text)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Flows(c) => {
            let listing = cmd_flows(&Problem::load(&c.input)?)?;
            emit(&c, to_json(&listing), || listing.pretty())
        }
        Command::DivFan(c) => {
            let doc = cmd_div_fan(&Problem::load(&c.input)?, c.box_bound)?;
            emit(&c, doc.to_json(), || doc.pretty())
        }
        Command::RubFan(c) => {
            let doc = cmd_rub_fan(&Problem::load(&c.input)?, c.box_bound)?;
            emit(&c, doc.to_json(), || doc.pretty())
        }
        Command::Slice { common, weights, svg } => {
            let slice = cmd_slice(&FanDocument::read(&common.input)?, weights.as_deref())?;
            if let Some(path) = svg {
                write_out(Some(&path), &render_svg(&slice))?;
            }
            emit(&common, to_json(&slice), || {
                slice
                    .regions
                    .iter()
                    .map(|r| {
                        let pts: Vec<String> = r.vertices.iter().map(|v| format!("({})", v.join(", "))).collect();
                        format!("{}: {}\n", r.label, pts.join(" "))
                    })
                    .collect()
            })
        }
        Command::Check { common, skip_flow } => {
            let report = cmd_check(&Problem::load(&common.input)?, common.box_bound, skip_flow)?;
            emit(&common, to_json(&report), || report.pretty())
        }
        Command::SuggestTheta { common, signs } => {
            let spec = cmd_suggest_theta(&ProblemSpec::read(&common.input)?, &signs)?;
            emit(&common, to_json(&spec), || {
                spec.theta.iter().map(|(v, t)| format!("{v}: {t}\n")).collect()
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
