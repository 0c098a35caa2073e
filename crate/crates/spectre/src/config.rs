use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Validated invocation: subcommand, its parameters and the output format.
#[derive(Clone, Debug, Parser)]
#[command(name = "spectre", version, about = "Spectral-triple reconstruction checks")]
pub struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Real structures J for p = 1..8 against the mod-8 sign table.
    CliffordTable,
    /// Randomized Hochschild identity suite and junk-form checks.
    Hochschild {
        /// Seed for the randomized chains.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per identity per model.
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Dixmier trace estimate of a singular-value sequence.
    Dixmier {
        /// Built-in sequence.
        #[arg(long, value_enum, required_unless_present = "runs", conflicts_with = "runs")]
        sequence: Option<Builtin>,
        /// CSV file of runs with header `value,multiplicity`.
        #[arg(long)]
        runs: Option<PathBuf>,
        /// Comma-separated partial-sum lengths.
        #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 10_000, 100_000, 1_000_000])]
        schedule: Vec<u64>,
    },
    /// Dixmier volume check on a flat model.
    Volume {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        p: usize,
        /// Comma-separated partial-sum lengths.
        #[arg(long, value_delimiter = ',', default_values_t = [10_000u64, 100_000, 1_000_000, 10_000_000])]
        schedule: Vec<u64>,
    },
    /// Connes distance on a weighted graph, cross-checked by linear programming.
    Distance {
        /// CSV edge list with header `u,v,length`.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Wodzicki residue of |D|^(2-p): integrand, averaged invariants and action coefficients.
    Wres {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum)]
        parity: Parity,
        #[arg(long, value_enum, default_value_t = Toggle::On)]
        torsion: Toggle,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    Harmonic,
    Telescoping,
    InverseSquare,
    Oscillating,
    Circle,
    Torus2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Circle,
    Torus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Toggle {
    On,
    Off,
}
