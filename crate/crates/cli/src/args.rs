use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cyclocong", version, about = "pi-adic congruences in the p-th cyclotomic field")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled properties; recorded in every report.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Coefficient precision a (elements are known modulo p^a), 2..=8.
    #[arg(long, env = "CYCLOCONG_PRECISION", global = true)]
    pub precision: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Inclusive prime range written `LO:HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Range {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
        let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo > hi {
            return Err(format!("empty range {lo}:{hi} (LO must not exceed HI)"));
        }
        Ok(Range { lo, hi })
    }
}

/// A splitting `d x g` of `p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub d: u64,
    pub g: u64,
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (d, g) = s
            .split_once(['x', ','])
            .ok_or_else(|| format!("expected DxG, got {s:?}"))?;
        let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
        Ok(Split { d: parse(d)?, g: parse(g)? })
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Primes {
    /// Inclusive prime range `LO:HI`.
    #[arg(long)]
    pub range: Option<Range>,
    /// A single prime.
    #[arg(long)]
    pub prime: Option<u64>,
}

impl Primes {
    pub fn bounds(&self) -> Range {
        match (self.range, self.prime) {
            (Some(r), _) => r,
            (None, Some(p)) => Range { lo: p, hi: p },
            (None, None) => unreachable!("clap enforces one of --range/--prime"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irregular indices and minus eigenvalues for each prime in a range.
    Irregular {
        #[command(flatten)]
        primes: Primes,
    },
    /// Rank profile of an annihilator eigenvalue set.
    Annihilator {
        #[arg(long)]
        prime: u64,
        /// Eigenvalue residues, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        eigenvalues: Vec<u64>,
        /// Splittings `DxG` with `D G = p - 1`; defaults to every coprime one.
        #[arg(long = "split")]
        splits: Vec<Split>,
        /// Primitive root defining sigma (default: the smallest).
        #[arg(long)]
        generator: Option<u64>,
        /// Disable an exclusion rule by id (repeatable).
        #[arg(long = "allow")]
        allow: Vec<String>,
        /// Also exclude eigenvalues of even character.
        #[arg(long)]
        exclude_even: bool,
    },
    /// Synthesize a singular candidate for `mu = u^(2m+1)` and classify it.
    Singular {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        gamma: u64,
    },
    /// Survey the unit eigencomponents.
    Units {
        #[command(flatten)]
        primes: Primes,
        /// Assumed r_p^+.
        #[arg(long, default_value_t = 0)]
        r_plus: u64,
    },
    /// Run invariant suites over a range.
    Verify {
        /// Inclusive prime range `LO:HI`.
        #[arg(long)]
        range: Range,
        /// Suites to run, comma separated (default: all).
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        /// Random samples per prime.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}
