use std::io::Read;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use haarnet::netgen::{bits_to_string, build_generators, is_0n2_net, parse_bits, NetCheck};
use haarnet::{generate, BitMatrix, DyadicPointSet, Family, NetSpec, ShiftVector, TriEntries};
use serde_json::{json, Value};

use crate::{fail, Outcome};

/// Net selection shared by the subcommands.
///
/// Bit strings list indices in increasing order: `--a 1011` is `a_1 = 1, a_2 = 0, ...`.
#[derive(Args, Debug, Clone, Default)]
pub struct NetArgs {
    #[arg(long, value_enum, default_value = "pa")]
    pub family: FamilyArg,
    /// Number of digits; the net has 2^n points. Inferred from the vectors when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// PA parameters a_1..a_{n-1}.
    #[arg(long)]
    pub a: Option<String>,
    /// PC parameters c_2..c_n.
    #[arg(long)]
    pub c: Option<String>,
    /// Triangular entries row by row: a_{1,2}..a_{1,n}, a_{2,3}, ...
    #[arg(long)]
    pub tri: Option<String>,
    /// Custom first generator as rows, e.g. `001/010/100`.
    #[arg(long)]
    pub c1: Option<String>,
    /// Custom second generator as rows.
    #[arg(long)]
    pub c2: Option<String>,
    /// Digital shift sigma_1..sigma_n; zero when omitted.
    #[arg(long)]
    pub shift: Option<String>,
    /// Use the net together with its reflection.
    #[arg(long)]
    pub symmetrized: bool,
    /// Read a point dump (`res <n>` then `X Y` lines) instead; `-` is standard input.
    #[arg(long, conflicts_with_all = ["a", "c", "tri", "c1", "c2", "shift", "symmetrized"])]
    pub input: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FamilyArg {
    #[default]
    Pa,
    Pc,
    Tri,
    Custom,
}

/// A generated net or a point set read from a dump.
pub enum Source {
    Net(NetSpec),
    Points(DyadicPointSet),
}

impl Source {
    pub fn points(&self) -> Outcome<DyadicPointSet> {
        match self {
            Source::Net(spec) => Ok(generate(spec)?),
            Source::Points(p) => Ok(p.clone()),
        }
    }

    pub fn spec(&self) -> Option<&NetSpec> {
        match self {
            Source::Net(s) => Some(s),
            Source::Points(_) => None,
        }
    }

    /// Resolution of the coordinates.
    pub fn resolution(&self) -> u32 {
        match self {
            Source::Net(s) => s.n as u32,
            Source::Points(p) => p.resolution(),
        }
    }

    pub fn describe(&self) -> Value {
        match self {
            Source::Net(spec) => spec_json(spec),
            Source::Points(p) => json!({ "family": "input", "resolution": p.resolution(), "points": p.len() }),
        }
    }
}

fn bits_of(name: &str, s: &Option<String>) -> Outcome<Option<Vec<bool>>> {
    s.as_deref()
        .map(|s| parse_bits(s).map_err(|e| crate::Failure(format!("--{name}: {e}"))))
        .transpose()
}

fn matrix_of(name: &str, s: &Option<String>) -> Outcome<BitMatrix> {
    match s {
        Some(s) => BitMatrix::parse_compact(s).map_err(|e| crate::Failure(format!("--{name}: {e}"))),
        None => fail(format!("--family custom needs --{name}")),
    }
}

fn triangular_n(len: usize) -> Option<usize> {
    (1..=64).find(|n| n * (n - 1) / 2 == len)
}

impl NetArgs {
    pub fn load(&self) -> Outcome<Source> {
        if let Some(path) = &self.input {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| crate::Failure(format!("stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| crate::Failure(format!("{}: {e}", path.display())))?
            };
            return Ok(Source::Points(DyadicPointSet::parse_dump(&text)?));
        }
        Ok(Source::Net(self.spec()?))
    }

    pub fn spec(&self) -> Outcome<NetSpec> {
        let shift = bits_of("shift", &self.shift)?;
        let weights = match self.family {
            FamilyArg::Pa => bits_of("a", &self.a)?,
            FamilyArg::Pc => bits_of("c", &self.c)?,
            _ => None,
        };
        let tri = bits_of("tri", &self.tri)?;
        let custom = match self.family {
            FamilyArg::Custom => Some((matrix_of("c1", &self.c1)?, matrix_of("c2", &self.c2)?)),
            _ => None,
        };
        let n = self
            .n
            .or(shift.as_ref().map(Vec::len))
            .or(weights.as_ref().map(|w| w.len() + 1))
            .or(tri.as_ref().and_then(|t| triangular_n(t.len())))
            .or(custom.as_ref().map(|(c1, _)| c1.n()));
        let Some(n) = n else {
            return fail("cannot determine n: pass --n or one of the parameter vectors");
        };
        if n == 0 {
            return fail("n must be at least 1");
        }
        let shift = ShiftVector::new(shift.unwrap_or_else(|| vec![false; n]));
        let spec = match self.family {
            FamilyArg::Pa => NetSpec::pa(weights.unwrap_or_else(|| vec![false; n - 1]), shift),
            FamilyArg::Pc => NetSpec::pc(weights.unwrap_or_else(|| vec![false; n - 1]), shift),
            FamilyArg::Tri => {
                let flat = tri.unwrap_or_else(|| vec![false; n * (n - 1) / 2]);
                NetSpec::tri(TriEntries::from_flat(n, &flat)?, shift)
            }
            FamilyArg::Custom => {
                let (c1, c2) = custom.expect("custom matrices parsed above");
                NetSpec::custom(c1, c2, shift)
            }
        };
        let spec = NetSpec { n, ..spec }.symmetrized(self.symmetrized);
        spec.validate()?;
        Ok(spec)
    }
}

pub fn spec_json(spec: &NetSpec) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("family".into(), spec.family.tag().into());
    m.insert("n".into(), spec.n.into());
    match &spec.family {
        Family::Pa { a } => {
            m.insert("a".into(), bits_to_string(a).into());
        }
        Family::Pc { c } => {
            m.insert("c".into(), bits_to_string(c).into());
        }
        Family::Tri { entries } => {
            m.insert("tri".into(), bits_to_string(&entries.to_flat()).into());
        }
        Family::Custom { c1, c2 } => {
            m.insert("c1".into(), c1.to_row_strings().join("/").into());
            m.insert("c2".into(), c2.to_row_strings().join("/").into());
        }
    }
    m.insert("shift".into(), spec.shift.to_string().into());
    m.insert("symmetrized".into(), spec.symmetrized.into());
    Value::Object(m)
}

/// Generators and net property of a spec, for `gen`.
pub fn generator_json(spec: &NetSpec) -> Outcome<Value> {
    let (c1, c2) = build_generators(spec)?;
    let is_net = is_0n2_net(&c1, &c2, NetCheck::Rank)?;
    Ok(json!({ "c1": c1.to_row_strings(), "c2": c2.to_row_strings(), "is_0n2_net": is_net }))
}
