use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::lattice::Kind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    GroupInfo,
    Quiver,
    CutExists,
    CutBuild,
    CutValidate,
    CutEnumerate,
    Skew,
    Classify,
    UnskewRoundtrip,
    OracleCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GroupInfo => "group-info",
            Command::Quiver => "quiver",
            Command::CutExists => "cut-exists",
            Command::CutBuild => "cut-build",
            Command::CutValidate => "cut-validate",
            Command::CutEnumerate => "cut-enumerate",
            Command::Skew => "skew",
            Command::Classify => "classify",
            Command::UnskewRoundtrip => "unskew-roundtrip",
            Command::OracleCompare => "oracle-compare",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Dot,
    Text,
}

/// One invocation: what to compute and on which group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default = "default_kind")]
    pub kind: Kind,
    /// Row-major; its columns span `L` and need not be in Hermite form.
    #[serde(default)]
    pub lattice: Option<[[i64; 2]; 2]>,
    /// Exponent triples of diagonal generators, as an alternative to
    /// `lattice`; requires `root_order`.
    #[serde(default)]
    pub diagonal: Option<Vec<[u32; 3]>>,
    #[serde(default)]
    pub root_order: Option<u32>,
    /// Exponents `(p, q, s)` of `α, β, γ` in `r` (type (D)).
    #[serde(default)]
    pub scalars: Option<[u32; 3]>,
    #[serde(default)]
    pub gamma: Option<[i64; 3]>,
    #[serde(default)]
    pub cut: Option<Vec<usize>>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub max_n: Option<i64>,
    #[serde(default)]
    pub limit: Option<usize>,
}

fn default_kind() -> Kind {
    Kind::A
}

impl JobSpec {
    pub fn new(command: Command, kind: Kind) -> Self {
        JobSpec {
            command,
            kind,
            lattice: None,
            diagonal: None,
            root_order: None,
            scalars: None,
            gamma: None,
            cut: None,
            format: Format::Json,
            max_n: None,
            limit: None,
        }
    }

    pub fn with_lattice(mut self, m: [[i64; 2]; 2]) -> Self {
        self.lattice = Some(m);
        self
    }

    pub fn with_gamma(mut self, gamma: [i64; 3]) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(format!("job file: {e}")))
    }

    /// Checks that do not need the group itself.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.lattice.is_some() && self.diagonal.is_some() {
            return Err(CliError::Spec(
                "give either a lattice or diagonal generators, not both".into(),
            ));
        }
        if self.diagonal.is_some() && self.root_order.is_none() {
            return Err(CliError::Spec(
                "diagonal generators need a root order".into(),
            ));
        }
        if self.root_order == Some(0) {
            return Err(CliError::Spec("root order must be positive".into()));
        }
        if self.scalars.is_some() && self.kind != Kind::D {
            return Err(CliError::Spec("scalars only apply to type (D)".into()));
        }
        if let (Some([p, q, s]), Some(m)) = (self.scalars, self.root_order) {
            if m % 2 != 0 {
                return Err(CliError::Spec(format!(
                    "type (D) needs an even root order, got {m}"
                )));
            }
            if (p as u64 + q as u64 + s as u64) % m as u64 != (m / 2) as u64 {
                return Err(CliError::Spec(format!(
                    "scalars {p},{q},{s} must sum to {} mod {m} so that alpha beta gamma = -1",
                    m / 2
                )));
            }
        }
        let needs_group = !matches!(self.command, Command::OracleCompare);
        if needs_group && self.lattice.is_none() && self.diagonal.is_none() {
            return Err(CliError::Spec(format!(
                "{} needs --lattice or --diag",
                self.command.name()
            )));
        }
        Ok(())
    }
}

/// Comma-separated integers.
fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| format!("bad {what} entry {x:?} in {s:?}"))
        })
        .collect()
}

fn parse_triple<T: std::str::FromStr + Copy>(s: &str, what: &str) -> Result<[T; 3], String> {
    let v = parse_list(s, what)?;
    <[T; 3]>::try_from(v).map_err(|_| format!("{what} needs three entries, got {s:?}"))
}

/// `"a,b;c,d"`, row-major.
pub fn parse_lattice(s: &str) -> Result<[[i64; 2]; 2], String> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 2 {
        return Err(format!(
            "lattice needs two rows separated by ';', got {s:?}"
        ));
    }
    let mut m = [[0; 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let r: Vec<i64> = parse_list(row, "lattice")?;
        m[i] = <[i64; 2]>::try_from(r)
            .map_err(|_| format!("lattice row {row:?} needs two entries"))?;
    }
    Ok(m)
}

/// `"u1,u2,u3;v1,v2,v3;..."`.
pub fn parse_diagonal(s: &str) -> Result<Vec<[u32; 3]>, String> {
    s.split(';')
        .map(|g| parse_triple(g, "diagonal generator"))
        .collect()
}

// Aliases keep clap from treating these as repeated arguments.
type Generators = Vec<[u32; 3]>;
type ArrowIds = Vec<usize>;

/// Computes McKay quivers, cuts and skew-group quivers for finite monomial
/// subgroups of SL3.
#[derive(Debug, Parser)]
#[command(name = "mckay", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON job file; flags given here override its fields.
    #[arg(long)]
    pub job: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<Kind>,
    /// Row-major lattice basis, e.g. "3,0;0,3".
    #[arg(long, value_parser = parse_lattice)]
    pub lattice: Option<[[i64; 2]; 2]>,
    /// Diagonal generators as exponent triples, e.g. "1,1,1;0,1,2".
    #[arg(long, value_parser = parse_diagonal)]
    pub diag: Option<Generators>,
    #[arg(long)]
    pub root_order: Option<u32>,
    /// Type (D) exponents "p,q,s" of alpha, beta, gamma.
    #[arg(long, value_parser = |s: &str| parse_triple::<u32>(s, "scalars"))]
    pub scalars: Option<[u32; 3]>,
    /// Cut type "g1,g2,g3".
    #[arg(long, value_parser = |s: &str| parse_triple::<i64>(s, "gamma"))]
    pub gamma: Option<[i64; 3]>,
    /// Arrow ids of a cut, e.g. "0,4,8".
    #[arg(long, value_parser = |s: &str| parse_list::<usize>(s, "cut"))]
    pub cut: Option<ArrowIds>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub max_n: Option<i64>,
    #[arg(long)]
    pub limit: Option<usize>,
}

impl Cli {
    pub fn into_job(self) -> Result<JobSpec, CliError> {
        let mut job = match &self.job {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Spec(format!("cannot read {}: {e}", path.display())))?;
                JobSpec::from_json(&text)?
            }
            None => {
                let command = self
                    .command
                    .ok_or_else(|| CliError::Spec("missing command (or --job)".into()))?;
                JobSpec::new(command, Kind::A)
            }
        };
        if let Some(c) = self.command {
            job.command = c;
        }
        if let Some(k) = self.kind {
            job.kind = k;
        }
        if self.lattice.is_some() {
            job.lattice = self.lattice;
            job.diagonal = None;
        }
        if self.diag.is_some() {
            job.diagonal = self.diag;
            job.lattice = None;
        }
        job.root_order = self.root_order.or(job.root_order);
        job.scalars = self.scalars.or(job.scalars);
        job.gamma = self.gamma.or(job.gamma);
        job.cut = self.cut.or(job.cut);
        job.format = self.format.unwrap_or(job.format);
        job.max_n = self.max_n.or(job.max_n);
        job.limit = self.limit.or(job.limit);
        Ok(job)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inputs() {
        assert_eq!(parse_lattice("3,2;0,1"), Ok([[3, 2], [0, 1]]));
        assert_eq!(parse_lattice(" 2, 0 ; 1, 3 "), Ok([[2, 0], [1, 3]]));
        assert!(parse_lattice("3,2").is_err());
        assert!(parse_lattice("3,2,1;0,1").is_err());
        assert_eq!(
            parse_diagonal("1,1,1;0,1,2"),
            Ok(vec![[1, 1, 1], [0, 1, 2]])
        );
        assert!(parse_triple::<i64>("1,x,1", "gamma").is_err());
    }

    #[test]
    fn flags_override_job_file() {
        let cli = Cli::try_parse_from(["mckay", "quiver", "--kind", "C", "--lattice", "3,0;0,3"])
            .unwrap();
        let job = cli.into_job().unwrap();
        assert_eq!(job.command, Command::Quiver);
        assert_eq!(job.kind, Kind::C);
        assert_eq!(job.lattice, Some([[3, 0], [0, 3]]));
        job.validate().unwrap();
    }

    #[test]
    fn job_json_round_trip() {
        let job = JobSpec::new(Command::Classify, Kind::D).with_lattice([[2, 0], [0, 2]]);
        let text = serde_json::to_string(&job).unwrap();
        assert_eq!(JobSpec::from_json(&text).unwrap(), job);
        let minimal =
            JobSpec::from_json(r#"{"command": "cut-exists", "lattice": [[3, 2], [0, 1]]}"#)
                .unwrap();
        assert_eq!(minimal.kind, Kind::A);
        assert_eq!(minimal.format, Format::Json);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut job = JobSpec::new(Command::Skew, Kind::D).with_lattice([[2, 0], [0, 2]]);
        job.root_order = Some(4);
        job.scalars = Some([1, 1, 1]);
        assert!(matches!(job.validate(), Err(CliError::Spec(_))));
        job.scalars = Some([1, 1, 0]);
        job.validate().unwrap();
        job.root_order = Some(3);
        assert!(job.validate().is_err());
        assert!(JobSpec::new(Command::Quiver, Kind::A).validate().is_err());
        assert!(JobSpec::new(Command::OracleCompare, Kind::C)
            .validate()
            .is_ok());
    }
}
