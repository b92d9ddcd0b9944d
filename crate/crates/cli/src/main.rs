mod records;
mod text;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ea2_core::classify::{self, ClosedDescriptor};
use ea2_core::ea2::{to_table, SubsetStats};
use ea2_core::verify::{self, VerifyReport};
use ea2_core::{Error, Signature};

use records::Record;

#[derive(Debug, Parser)]
#[command(
    name = "ea2",
    version,
    about = "Closed subsets, counts and automorphisms of elementary abelian 2-hypergroups"
)]
struct Cli {
    /// Signature `p=<int>,thick=<1-based indices>`, e.g. `p=2,thick=2`.
    #[arg(long, global = true, value_name = "SIG")]
    sig: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON object per line.
    Structured,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the multiplication table (p <= 4).
    Table,
    /// List closed subsets as descriptors.
    Enumerate(Filters),
    /// Count closed subsets.
    Count(Filters),
    /// Decide whether two closed subsets are isomorphic.
    Iso {
        #[arg(
            long = "subset",
            value_name = "DESCRIPTOR",
            num_args = 1,
            required = true
        )]
        subsets: Vec<String>,
    },
    /// Describe the automorphism group of a closed subset.
    Aut {
        #[arg(long, value_name = "DESCRIPTOR")]
        subset: String,
    },
    /// Isomorphism classes of closed subsets with their sizes.
    Classes,
    /// A basis and the dimension of a closed subset.
    Basis {
        #[arg(long, value_name = "DESCRIPTOR")]
        subset: String,
    },
    /// Cross-check every algorithm against brute force for all signatures up to a rank.
    Verify {
        #[arg(long, value_name = "INT", default_value_t = 2)]
        max_p: u32,
        /// Use a deliberately damaged product rule.
        #[arg(long, hide = true)]
        fault_inject: bool,
    },
}

#[derive(Debug, clap::Args)]
struct Filters {
    /// Only strongly normal closed subsets.
    #[arg(long)]
    strongly_normal: bool,
    /// Only closed subsets with 2^SIZE elements.
    #[arg(long, value_name = "SIZE")]
    size: Option<u32>,
}

enum Failure {
    Usage(String),
    Guard(String),
    Verify,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GuardExceeded { .. } => Failure::Guard(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn signature(cli: &Cli) -> Result<Signature, Failure> {
    let text = cli
        .sig
        .as_deref()
        .ok_or_else(|| Failure::Usage("this command needs --sig".into()))?;
    Ok(text.parse()?)
}

fn descriptor(sig: Signature, text: &str) -> Result<ClosedDescriptor, Failure> {
    Ok(ClosedDescriptor::parse(sig, text)?)
}

fn emit(out: &mut impl Write, record: &Record) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, record).map_err(|e| Failure::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<(), Failure> {
    let structured = cli.format == Format::Structured;
    match &cli.command {
        Command::Table => {
            let sig = signature(cli)?;
            let table = to_table(sig)?;
            if structured {
                writeln!(out, "{}", table.to_json())?;
            } else {
                text::table(out, sig, &table)?;
            }
        }
        Command::Enumerate(f) => {
            let sig = signature(cli)?;
            let mut total = 0u64;
            for d in classify::enumerate_closed(sig, f.size, f.strongly_normal)? {
                total += 1;
                if structured {
                    emit(out, &Record::closed(&d))?;
                } else {
                    text::closed(out, &d)?;
                }
            }
            if !structured {
                writeln!(out, "total {total}")?;
            }
        }
        Command::Count(f) => {
            let sig = signature(cli)?;
            let ambient = SubsetStats::of_signature(sig);
            let count = match (f.size, f.strongly_normal) {
                (None, false) => classify::count_closed(sig),
                (None, true) => classify::count_strongly_normal(sig),
                (Some(r), false) => classify::count_closed_of_size(ambient, r),
                (Some(r), true) => classify::count_strongly_normal_of_size(ambient, r),
            };
            if structured {
                emit(out, &Record::count(sig, f.strongly_normal, f.size, &count))?;
            } else {
                writeln!(out, "{count}")?;
            }
        }
        Command::Iso { subsets } => {
            let sig = signature(cli)?;
            if subsets.len() != 2 {
                return Err(Failure::Usage(format!(
                    "iso needs exactly two --subset values, got {}",
                    subsets.len()
                )));
            }
            let a = descriptor(sig, &subsets[0])?;
            let b = descriptor(sig, &subsets[1])?;
            let iso = classify::is_isomorphic(&a, &b);
            if structured {
                emit(out, &Record::iso(&a, &b, iso))?;
            } else {
                writeln!(out, "{}", if iso { "isomorphic" } else { "not isomorphic" })?;
            }
        }
        Command::Aut { subset } => {
            let sig = signature(cli)?;
            let d = descriptor(sig, subset)?;
            let aut = classify::aut_descriptor(&d);
            if structured {
                emit(out, &Record::aut(&d, &aut))?;
            } else {
                writeln!(out, "order {} (S_{} x GL({},2))", aut.order, aut.s, aut.r2)?;
            }
        }
        Command::Classes => {
            let sig = signature(cli)?;
            let classes = classify::iso_class_stats(sig);
            if structured {
                for c in &classes {
                    emit(out, &Record::iso_class(c))?;
                }
            } else {
                text::classes(out, &classes)?;
            }
        }
        Command::Basis { subset } => {
            let sig = signature(cli)?;
            let d = descriptor(sig, subset)?;
            let basis = classify::find_basis(&d);
            let dim = classify::dimension(&d);
            if structured {
                emit(out, &Record::basis(&d, dim, &basis))?;
            } else {
                let names: Vec<String> = basis.iter().map(ToString::to_string).collect();
                writeln!(out, "dimension {dim}")?;
                writeln!(out, "basis [{}]", names.join(", "))?;
            }
        }
        Command::Verify {
            max_p,
            fault_inject,
        } => {
            if cli.sig.is_some() {
                return Err(Failure::Usage(
                    "verify covers every signature up to --max-p; drop --sig".into(),
                ));
            }
            let report = if *fault_inject {
                verify::verify_with(*max_p, verify::corrupted_table)?
            } else {
                verify::verify(*max_p)?
            };
            report_verify(out, &report, structured)?;
            if !report.passed() {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn report_verify(
    out: &mut impl Write,
    report: &VerifyReport,
    structured: bool,
) -> Result<(), Failure> {
    for sig in &report.signatures {
        for check in &sig.checks {
            if structured {
                emit(out, &Record::check(sig.signature, check))?;
            } else {
                text::check(out, sig.signature, check)?;
            }
        }
    }
    if structured {
        emit(out, &Record::summary(report))?;
    } else {
        writeln!(
            out,
            "{} signatures, {} checks, {} failed",
            report.signatures.len(),
            report.check_count(),
            report.failure_count()
        )?;
    }
    Ok(())
}
