//! Command-line front end. Exit codes: 0 success or verified, 2 no witness
//! found, 3 verification failure, 4 invalid input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::certificate::Certificate;
use crate::error::HarnessError;
use crate::generate::{generate, GenKind, GenParams};
use crate::instance::Instance;
use crate::json::rat;
use crate::render::render_svg;
use crate::solve::{self, SelectArgs};
use crate::verify::verify;
use quantsel::GeomError;

#[derive(Parser, Debug)]
#[command(name = "quantsel", version, about = "Quantitative selection with exactly checkable certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance.
    Gen {
        /// randomSquares, slabs, clusteredIntervals, unitSegments or identicalBodies.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        families: usize,
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[arg(long, default_value = "2")]
        window: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Inscribed ellipsoid of every body.
    John {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Volumetric (or diameter) selection on the first family.
    Select {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// quadratic, steinitz or simplex.
        #[arg(long, default_value = "quadratic")]
        variant: String,
        /// volume or diameter.
        #[arg(long, default_value = "volume")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tverberg parts for the reduction variants.
        #[arg(long)]
        r: Option<usize>,
        /// Sampled tuples per attempt.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Weak epsilon-net for volume on the first family.
    Epsnet {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value = "simplex")]
        variant: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ellipsoid Tverberg (one family) or reduced colorful Tverberg (several).
    Tverberg {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Colorful Tverberg for unit segments, with a width witness.
    TverbergDiam {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Same-type refinement with volume.
    Sametype {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "1/3")]
        alpha: String,
    },
    /// Exhaustive homogeneous selection for small families.
    Homsel {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fraction of each family to keep.
        #[arg(long, default_value = "1/2")]
        target: String,
    },
    /// Re-check a certificate against its instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Draw a planar instance, optionally with a certificate, as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn rational(s: &str) -> Result<quantsel::Rational, HarnessError> {
    Ok(rat(s)?)
}

fn write_cert(cert: &Certificate, out: &Path) -> Result<(), HarnessError> {
    cert.save(out)?;
    println!("{:?} certificate written to {}", cert.kind, out.display());
    for (k, v) in &cert.achieved_bounds {
        println!("  {k} = {v}");
    }
    Ok(())
}

fn execute(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Gen { kind, d, n, families, eps, window, seed, out } => {
            let kind = GenKind::parse(&kind)
                .ok_or_else(|| GeomError::InvalidInput(format!("unknown generator {kind:?}")))?;
            let params = GenParams { d, n, families, epsilon: rational(&eps)?, window: rational(&window)?, seed };
            let inst = generate(kind, &params)?;
            inst.save(&out)?;
            println!("{} instance written to {}", kind.name(), out.display());
        }
        Command::John { input, out } => write_cert(&solve::john(&Instance::load(&input)?)?, &out)?,
        Command::Select { input, out, variant, mode, seed, r, samples } => {
            let args = SelectArgs { variant, mode, seed, parts: r, samples };
            write_cert(&solve::select(&Instance::load(&input)?, &args)?, &out)?;
        }
        Command::Epsnet { input, out, eps, variant, seed } => {
            write_cert(&solve::epsnet(&Instance::load(&input)?, &rational(&eps)?, &variant, seed)?, &out)?;
        }
        Command::Tverberg { input, out, r, seed } => write_cert(&solve::tverberg(&Instance::load(&input)?, r, seed)?, &out)?,
        Command::TverbergDiam { input, out, r, seed } => {
            write_cert(&solve::tverberg_diameter(&Instance::load(&input)?, r, seed)?, &out)?;
        }
        Command::Sametype { input, out, alpha } => {
            write_cert(&solve::sametype(&Instance::load(&input)?, &rational(&alpha)?)?, &out)?;
        }
        Command::Homsel { input, out, target } => {
            write_cert(&solve::homogeneous(&Instance::load(&input)?, &rational(&target)?)?, &out)?;
        }
        Command::Verify { input, cert } => {
            let inst = Instance::load(&input)?;
            let cert = Certificate::load(&cert)?;
            verify(&inst, &cert)?;
            println!("verified {:?} certificate", cert.kind);
        }
        Command::Render { input, cert, out } => {
            let inst = Instance::load(&input)?;
            let cert = cert.map(|p| Certificate::load(&p)).transpose()?;
            let svg = render_svg(&inst, cert.as_ref())?;
            crate::io::write_atomic(&out, svg.as_bytes())?;
            println!("SVG written to {}", out.display());
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
