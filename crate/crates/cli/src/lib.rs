//! Command-line front end for `haarnet`.
//!
//! [`run`] maps a parsed [`CommandRequest`] to an exit code and a document, so the
//! binary and the tests share one code path. Documents are JSON with a top-level
//! `"schema": "1"` key, except `sweep` (CSV) and `gen --format dump` / `haar --dump`
//! (line formats). Exact values are written as `"num/den"` strings.

mod commands;
mod net;
mod suites;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

pub use net::{FamilyArg, NetArgs, Source};

/// Variable read by the binary to size the worker pool.
pub const THREADS_ENV: &str = "HAARNET_THREADS";

pub const SCHEMA: &str = "1";

#[derive(Parser, Debug, Clone)]
#[command(name = "haarnet", version, about = "Digital (0,n,2)-nets and their exact L2 discrepancy")]
pub struct CommandRequest {
    /// Write the document to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Generate a net and print its points.
    Gen {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: GenFormat,
    },
    /// Squared L2 discrepancy, scaled by the number of points.
    L2 {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, value_enum, default_value = "formula")]
        method: L2Method,
    },
    /// Exact star discrepancy.
    Star {
        #[command(flatten)]
        net: NetArgs,
    },
    /// Monte-Carlo estimate of the L_p discrepancy.
    LpMc {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Haar coefficients of the discrepancy function.
    Haar(HaarArgs),
    /// Check the closed-form identities against the generic routes.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Random cases per n above the exhaustive range.
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// CSV table of L2 values over all shifts or all parameter vectors.
    Sweep {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, value_enum)]
        over: SweepOver,
        #[arg(long, value_enum, default_value = "formula")]
        method: L2Method,
    },
    /// Shift minimizing the L2 discrepancy of a PA or PC net.
    SearchShift {
        #[command(flatten)]
        net: NetArgs,
    },
    /// Report on the net a = (1, ..., 1): small zeroth coefficient, large L2 discrepancy.
    Counterexample {
        #[arg(long)]
        n: Option<usize>,
        /// Report every n from 2 up to this value instead.
        #[arg(long, conflicts_with = "n")]
        n_max: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct HaarArgs {
    #[command(flatten)]
    pub net: NetArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub j1: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    pub j2: Option<i32>,
    #[arg(long)]
    pub m1: Option<u64>,
    #[arg(long)]
    pub m2: Option<u64>,
    /// Print every coefficient with j1, j2 <= jmax as `j1 j2 m1 m2 num/den` lines.
    #[arg(long)]
    pub dump: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub jmax: Option<i32>,
    /// Parseval mass of each region J1..J13 (PA nets only).
    #[arg(long)]
    pub regions: bool,
    #[arg(long, value_enum, default_value = "closed")]
    pub region_method: RegionMethod,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenFormat {
    Json,
    Dump,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum L2Method {
    Formula,
    Parseval,
    Warnock,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionMethod {
    Closed,
    Direct,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Theorems,
    Propositions,
    Lemmas,
    Star,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOver {
    Shifts,
    A,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub exit_code: i32,
    /// The output document, or the error text when `exit_code == 1`.
    pub document: String,
}

impl Response {
    fn ok(document: String) -> Self {
        Self { exit_code: 0, document }
    }

    fn usage(message: String) -> Self {
        Self { exit_code: 1, document: message }
    }
}

/// Failure of a subcommand; parameter errors map to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure(pub String);

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<haarnet::Error> for Failure {
    fn from(e: haarnet::Error) -> Self {
        Failure(e.to_string())
    }
}

pub type Outcome<T> = Result<T, Failure>;

pub(crate) fn fail<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure(msg.into()))
}

/// Executes one request.
pub fn run(request: &CommandRequest) -> Response {
    match commands::dispatch(&request.command) {
        Ok(r) => r,
        Err(Failure(msg)) => Response::usage(format!("error: {msg}")),
    }
}

/// Parses `args` (including the program name) and executes them.
/// `--help` and `--version` return exit code 0 with the text as document.
pub fn run_from_args<I, T>(args: I) -> (Option<CommandRequest>, Response)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CommandRequest::try_parse_from(args) {
        Ok(req) => {
            let resp = run(&req);
            (Some(req), resp)
        }
        Err(e) => {
            use clap::error::ErrorKind;
            let mut text = e.render().to_string();
            if !text.contains("Usage:") {
                use clap::CommandFactory;
                text = format!("{}\n{}\n", text.trim_end(), CommandRequest::command().render_usage());
            }
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (None, Response::ok(text)),
                _ => (None, Response::usage(text)),
            }
        }
    }
}

/// Starts a JSON document with the schema and command keys.
pub(crate) fn document(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m.insert("command".into(), command.into());
    m
}

pub(crate) fn render(doc: Map<String, Value>) -> Response {
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialize");
    s.push('\n');
    Response::ok(s)
}

pub(crate) fn rat(q: &haarnet::Rational) -> Value {
    Value::String(haarnet::rational::to_string(q))
}
