//! `vknot`: count virtual multicrossings, compile signed Gauss codes into
//! petal diagrams and back, and render both as SVG.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vknot_core::counting::DEFAULT_BRUTE_FORCE_BOUND;
use vknot_core::{Census, RenderOptions};

use commands::{CountFlags, Globals, RenderSource};
use report::CliReport;

#[derive(Parser, Debug)]
#[command(
    name = "vknot",
    version,
    about = "Virtual multicrossings and petal diagrams"
)]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cross-check closed forms against brute-force enumeration.
    #[arg(long, global = true)]
    oracle: bool,

    /// Largest n for which brute-force enumeration is attempted.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_BRUTE_FORCE_BOUND)]
    bound: usize,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SvgFlags {
    /// Label heights at both ends of each segment.
    #[arg(long)]
    both_ends: bool,
    /// Omit the legend block.
    #[arg(long)]
    no_legend: bool,
    /// Omit the start marker.
    #[arg(long)]
    no_start: bool,
}

impl SvgFlags {
    fn options(&self) -> RenderOptions {
        RenderOptions {
            legend: !self.no_legend,
            mark_start: !self.no_start,
            label_both_ends: self.both_ends,
            ..RenderOptions::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a multicrossing such as "{1243; (1,2), (1,3), (2,4), (3,4)}".
    Validate { notation: String },

    /// Count types of virtual n-crossings.
    Count {
        n: usize,
        #[arg(long)]
        bell: bool,
        #[arg(long)]
        fragmented: bool,
        /// Types up to rotation, with fixed-point counts per divisor.
        #[arg(long)]
        types: bool,
        /// Almost virtual types.
        #[arg(long)]
        almost: bool,
        /// Asymptotic estimate and its ratio to the exact count.
        #[arg(long)]
        estimate: bool,
        #[arg(long)]
        all: bool,
    },

    /// List every type of virtual n-crossing up to rotation.
    Enumerate {
        n: usize,
        /// Also identify mirror images.
        #[arg(long)]
        reflect: bool,
    },

    /// Compile a signed Gauss code such as "O1+U2-O3+U1+O2-U3+" into a petal diagram.
    Petal {
        code: String,
        /// Write the diagram as JSON.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Write the diagram as SVG.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        style: SvgFlags,
    },

    /// Read the signed Gauss code back from a petal diagram JSON file ("-" for stdin).
    Recover { file: PathBuf },

    /// Compile a code to a petal diagram and recover it again.
    Roundtrip {
        code: Option<String>,
        /// One code per line ("-" for stdin).
        #[arg(long, value_name = "FILE", conflicts_with = "code")]
        batch: Option<PathBuf>,
    },

    /// Draw a petal diagram, a compiled code, or a multicrossing as SVG.
    Render {
        #[arg(long, value_name = "FILE", group = "source")]
        petal: Option<PathBuf>,
        #[arg(long, value_name = "NOTATION", group = "source")]
        crossing: Option<String>,
        #[arg(long, value_name = "CODE", group = "source")]
        code: Option<String>,
        /// Write here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        style: SvgFlags,
    },
}

fn run(cli: &Cli, globals: Globals) -> CliReport {
    match &cli.command {
        Command::Validate { notation } => commands::validate(notation),
        Command::Count {
            n,
            bell,
            fragmented,
            types,
            almost,
            estimate,
            all,
        } => {
            let flags = if *all {
                CountFlags::all()
            } else {
                CountFlags {
                    bell: *bell,
                    fragmented: *fragmented,
                    types: *types,
                    almost: *almost,
                    estimate: *estimate,
                }
            };
            commands::count(*n, flags, globals)
        }
        Command::Enumerate { n, reflect } => commands::enumerate(*n, *reflect, globals),
        Command::Petal {
            code,
            out,
            svg,
            style,
        } => commands::petal(code, out.as_ref(), svg.as_ref(), &style.options()),
        Command::Recover { file } => commands::recover(file),
        Command::Roundtrip { code, batch } => commands::roundtrip(code.as_deref(), batch.as_ref()),
        Command::Render {
            petal,
            crossing,
            code,
            out,
            style,
        } => {
            let src = match (petal, crossing, code) {
                (Some(p), None, None) => RenderSource::Petal(p),
                (None, Some(c), None) => RenderSource::Crossing(c),
                (None, None, Some(c)) => RenderSource::Code(c),
                _ => {
                    return CliReport::invalid(
                        "render",
                        "give exactly one of --petal, --crossing or --code",
                    )
                }
            };
            commands::render(src, out.as_ref(), &style.options())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let globals = Globals {
        oracle: cli.oracle,
        census: Census {
            bound: cli.bound,
            parallel: cli.threads != Some(1),
        },
    };
    let report = run(&cli, globals);
    let out = report.render(cli.json);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    if !cli.json && report.status != report::Status::Ok {
        let _ = stdout.flush();
        for d in &report.diagnostics {
            eprintln!("error: {d}");
        }
    }
    ExitCode::from(report.status.exit_code() as u8)
}
