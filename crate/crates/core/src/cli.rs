//! Command-line front end. [`run_command`] never exits the process or
//! touches stdout itself, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 verification failure (witness on stdout),
//! 2 usage or input error (message on stderr).

use std::ffi::OsString;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::equiv::{check_poset_iso, transport_topology, FamilyKind, IndexedFamily};
use crate::heyting::{boolean_witness, check_negation_laws, implies, neg};
use crate::lattice::Lattice;
use crate::omega::{
    build_omega_with, char_map, check_characteristic, OmegaReading, Subpresheaf, SubpresheafFile,
};
use crate::presheaf::{Presheaf, PresheafFile};
use crate::topology::{Topology, TopologyFile, TopologyKind};
use crate::verify::{run_suite, SuiteConfig};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// What a command would print and exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Dot,
    Text,
}

/// Settings shared by the commands that sample or build fixtures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub modulus: u64,
    pub topology: Option<String>,
    pub seed: u64,
    pub max_value_set_size: usize,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.modulus == 0 {
            return Err("--modulus must be at least 1".into());
        }
        if !(1..=4).contains(&self.max_value_set_size) {
            return Err(format!(
                "--max-size must be between 1 and 4, got {}",
                self.max_value_set_size
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "divitopos",
    version,
    about = "Exact topos computations over divisor lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print D_N as JSON, DOT or text.
    Lattice {
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Heyting operations and law checks.
    Heyting {
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_enum)]
        op: HeytingOp,
        #[arg(long, value_delimiter = ',')]
        args: Vec<u64>,
    },
    /// Build, load, check or dump a Grothendieck topology.
    Topology(TopologyArgs),
    /// Check the sheaf condition for a presheaf file.
    Sheaf {
        #[arg(long)]
        presheaf: String,
        /// Built-in name or path to a topology file.
        #[arg(long)]
        topology: String,
    },
    /// Build the subobject classifier.
    Omega {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        topology: String,
        #[arg(long)]
        dump: bool,
        /// Use principal sieves instead of closed ones (comparison only).
        #[arg(long)]
        principal: bool,
    },
    /// Characteristic map of a subpresheaf and its classifier checks.
    Classify {
        #[arg(long)]
        presheaf: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        topology: String,
        #[arg(long, default_value_t = crate::omega::DEFAULT_SEARCH_BUDGET)]
        budget: usize,
    },
    /// Concrete posets isomorphic to D_N.
    Equiv {
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_enum)]
        kind: EquivKind,
        #[arg(long)]
        check_iso: bool,
        #[arg(long)]
        dump: bool,
        /// Transport a built-in topology along the family.
        #[arg(long)]
        transport: Option<String>,
    },
    /// Run the full self-verification suite.
    VerifyAll {
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
}

#[derive(Debug, Args)]
struct TopologyArgs {
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    name: Option<String>,
    #[arg(long)]
    file: Option<String>,
    #[arg(long)]
    check: bool,
    #[arg(long)]
    dump: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeytingOp {
    Implies,
    Neg,
    Meet,
    Join,
    Laws,
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EquivKind {
    Periodic,
    Roots,
    Solutions,
}

impl From<EquivKind> for FamilyKind {
    fn from(k: EquivKind) -> FamilyKind {
        match k {
            EquivKind::Periodic => FamilyKind::PeriodicPoints,
            EquivKind::Roots => FamilyKind::RootGroups,
            EquivKind::Solutions => FamilyKind::SolutionSpaces,
        }
    }
}

/// A usage or input error; always exit 2.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<String> for InputError {
    fn from(s: String) -> Self {
        InputError(s)
    }
}

type Outcome = Result<(i32, String), InputError>;

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn verdict<T: Serialize>(ok: bool, value: &T) -> Outcome {
    Ok((if ok { EXIT_OK } else { EXIT_FAILED }, pretty(value)))
}

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| {
        InputError(format!(
            "{path}:{}:{}: malformed input: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn lattice(modulus: u64) -> Result<Lattice, InputError> {
    Ok(Lattice::new(modulus)?)
}

/// A built-in name, or else a path to a topology file over the same modulus.
fn resolve_topology(lattice: &Lattice, arg: &str) -> Result<Topology, InputError> {
    match arg.parse::<TopologyKind>() {
        Ok(kind) => Ok(Topology::build(lattice, kind)),
        Err(e) if !Path::new(arg).is_file() => Err(e.into()),
        Err(_) => {
            let file: TopologyFile = read_json(arg)?;
            if file.modulus != lattice.modulus() {
                return Err(Error::ModulusMismatch {
                    expected: lattice.modulus(),
                    found: file.modulus,
                }
                .into());
            }
            Ok(Topology::from_file(&file)?)
        }
    }
}

fn load_presheaf(path: &str) -> Result<Presheaf, InputError> {
    let file: PresheafFile = read_json(path)?;
    let presheaf = Presheaf::from_file(&file)?;
    let check = presheaf.validate();
    if !check.valid {
        return Err(InputError(format!(
            "{path}: not a functor: {}",
            serde_json::to_string(&check.violation).unwrap_or_default()
        )));
    }
    Ok(presheaf)
}

fn binary_args(args: &[u64], op: &str) -> Result<(u64, u64), InputError> {
    match args {
        [a, b] => Ok((*a, *b)),
        _ => Err(InputError(format!("--op {op} takes --args k,n"))),
    }
}

fn cmd_heyting(modulus: u64, op: HeytingOp, args: &[u64]) -> Outcome {
    let l = lattice(modulus)?;
    match op {
        HeytingOp::Implies => {
            let (k, n) = binary_args(args, "implies")?;
            Ok((EXIT_OK, format!("{}\n", implies(&l, k, n)?)))
        }
        HeytingOp::Meet => {
            let (k, n) = binary_args(args, "meet")?;
            Ok((EXIT_OK, format!("{}\n", l.meet(k, n)?)))
        }
        HeytingOp::Join => {
            let (k, n) = binary_args(args, "join")?;
            Ok((EXIT_OK, format!("{}\n", l.join(k, n)?)))
        }
        HeytingOp::Neg => match args {
            [n] => Ok((EXIT_OK, format!("{}\n", neg(&l, *n)?))),
            _ => Err(InputError("--op neg takes --args n".into())),
        },
        HeytingOp::Laws => {
            let report = check_negation_laws(&l);
            verdict(report.all_pass(), &report.laws)
        }
        HeytingOp::Boolean => {
            let witness = boolean_witness(&l);
            let body = json!({
                "modulus": modulus,
                "boolean": witness.is_none(),
                "witness": witness.map(|(n, dn)| json!({ "n": n, "double_negation": dn })),
            });
            Ok((EXIT_OK, pretty(&body)))
        }
    }
}

fn cmd_topology(args: &TopologyArgs) -> Outcome {
    let (l, topology) = match (&args.name, &args.file) {
        (Some(name), _) => {
            let modulus = args
                .modulus
                .ok_or_else(|| InputError("--name requires --modulus".into()))?;
            let l = lattice(modulus)?;
            let kind: TopologyKind = name.parse()?;
            let t = Topology::build(&l, kind);
            (l, t)
        }
        (None, Some(path)) => {
            let file: TopologyFile = read_json(path)?;
            if let Some(m) = args.modulus.filter(|&m| m != file.modulus) {
                return Err(Error::ModulusMismatch {
                    expected: m,
                    found: file.modulus,
                }
                .into());
            }
            let l = lattice(file.modulus)?;
            let t = Topology::from_file(&file)?;
            (l, t)
        }
        (None, None) => return Err(InputError("one of --name or --file is required".into())),
    };
    match (args.check, args.dump) {
        (true, false) => {
            let report = topology.check_axioms(&l);
            verdict(report.all_ok(), &report)
        }
        (true, true) => {
            let report = topology.check_axioms(&l);
            verdict(
                report.all_ok(),
                &json!({ "axioms": report, "topology": topology.to_file() }),
            )
        }
        _ => Ok((EXIT_OK, pretty(&topology.to_file()))),
    }
}

fn cmd_sheaf(presheaf: &str, topology: &str) -> Outcome {
    let f = load_presheaf(presheaf)?;
    let t = resolve_topology(f.lattice(), topology)?;
    let v = f.is_sheaf(&t)?;
    verdict(v.is_sheaf, &v)
}

fn cmd_omega(modulus: u64, topology: &str, dump: bool, principal: bool) -> Outcome {
    let l = lattice(modulus)?;
    let t = resolve_topology(&l, topology)?;
    let reading = if principal {
        OmegaReading::Principal
    } else {
        OmegaReading::Closed
    };
    let omega = build_omega_with(&l, &t, reading);
    if dump {
        return Ok((EXIT_OK, pretty(&omega.to_dump())));
    }
    let sheaf = omega.presheaf().is_sheaf(&t)?;
    let sizes: std::collections::BTreeMap<u64, usize> = l
        .elements()
        .iter()
        .map(|&n| (n, omega.sieves(n).map_or(0, <[_]>::len)))
        .collect();
    let body = json!({
        "modulus": modulus,
        "topology": t.name(),
        "reading": reading,
        "sizes": sizes,
        "sheaf": sheaf,
    });
    // the principal reading is reported, not asserted
    verdict(sheaf.is_sheaf || principal, &body)
}

fn cmd_classify(presheaf: &str, sub: &str, topology: &str, budget: usize) -> Outcome {
    let f = load_presheaf(presheaf)?;
    let t = resolve_topology(f.lattice(), topology)?;
    let file: SubpresheafFile = read_json(sub)?;
    let a = Subpresheaf::from_file(&f, &file)?;
    let sheaf = f.is_sheaf(&t)?;
    let omega = build_omega_with(f.lattice(), &t, OmegaReading::Closed);
    let chi = char_map(&a);
    let check = check_characteristic(&omega, &a, &chi, budget);
    let body = json!({
        "presheaf_sheaf": sheaf,
        "closed": a.is_closed(&t),
        "chi": chi.to_dump(&f),
        "check": check,
    });
    verdict(sheaf.is_sheaf && check.passed(), &body)
}

fn cmd_equiv(
    modulus: u64,
    kind: EquivKind,
    check_iso: bool,
    dump: bool,
    transport: Option<&str>,
) -> Outcome {
    let l = lattice(modulus)?;
    let family = IndexedFamily::build(&l, kind.into());
    let mut body = serde_json::Map::new();
    let mut ok = true;
    if check_iso {
        let iso = check_poset_iso(&family, &l);
        ok &= iso.all_ok();
        body.insert(
            "iso".into(),
            serde_json::to_value(&iso).expect("serializable"),
        );
    }
    if let Some(name) = transport {
        let t = resolve_topology(&l, name)?;
        let moved = transport_topology(&t, &family, &l)?;
        ok &= moved.report.all_ok();
        body.insert(
            "transport".into(),
            serde_json::to_value(&moved).expect("serializable"),
        );
    }
    if dump || body.is_empty() {
        body.insert(
            "family".into(),
            serde_json::to_value(&family).expect("serializable"),
        );
    }
    verdict(ok, &body)
}

fn cmd_verify_all(config: &RunConfig) -> Outcome {
    config.validate()?;
    let report = run_suite(&SuiteConfig {
        modulus: config.modulus,
        seed: config.seed,
        max_size: config.max_value_set_size,
    })?;
    let code = if report.pass { EXIT_OK } else { EXIT_FAILED };
    match config.format {
        OutputFormat::Json => Ok((code, pretty(&report))),
        OutputFormat::Text => Ok((code, report.to_text())),
        OutputFormat::Dot => Err(InputError(
            "verify-all supports --format json or text".into(),
        )),
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Lattice { modulus, format } => {
            let l = lattice(modulus)?;
            let out = match format {
                OutputFormat::Json => pretty(&l.to_json()),
                OutputFormat::Dot => l.to_dot(),
                OutputFormat::Text => l.to_text(),
            };
            Ok((EXIT_OK, out))
        }
        Command::Heyting { modulus, op, args } => cmd_heyting(modulus, op, &args),
        Command::Topology(args) => cmd_topology(&args),
        Command::Sheaf { presheaf, topology } => cmd_sheaf(&presheaf, &topology),
        Command::Omega {
            modulus,
            topology,
            dump,
            principal,
        } => cmd_omega(modulus, &topology, dump, principal),
        Command::Classify {
            presheaf,
            sub,
            topology,
            budget,
        } => cmd_classify(&presheaf, &sub, &topology, budget),
        Command::Equiv {
            modulus,
            kind,
            check_iso,
            dump,
            transport,
        } => cmd_equiv(modulus, kind, check_iso, dump, transport.as_deref()),
        Command::VerifyAll {
            modulus,
            seed,
            max_size,
            format,
        } => cmd_verify_all(&RunConfig {
            modulus,
            topology: None,
            seed,
            max_value_set_size: max_size,
            format,
        }),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutput {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => CommandOutput {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(InputError(msg)) => CommandOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandOutput {
        run_command(std::iter::once("divitopos").chain(args.iter().copied()))
    }

    #[test]
    fn heyting_neg_prints_value() {
        let out = run(&["heyting", "--modulus", "12", "--op", "neg", "--args", "2"]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "3\n");
        let out = run(&[
            "heyting",
            "--modulus",
            "12",
            "--op",
            "implies",
            "--args",
            "4,6",
        ]);
        assert_eq!(out.stdout, "6\n");
    }

    #[test]
    fn bad_arity_is_usage_error() {
        let out = run(&[
            "heyting",
            "--modulus",
            "12",
            "--op",
            "implies",
            "--args",
            "4",
        ]);
        assert_eq!(out.code, 2);
        let out = run(&["heyting", "--modulus", "12", "--op", "neg", "--args", "5"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("not a divisor"));
    }

    #[test]
    fn unknown_topology_name() {
        let out = run(&["topology", "--modulus", "12", "--name", "bogus"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("bogus"));
    }

    #[test]
    fn zero_modulus_rejected() {
        assert_eq!(run(&["lattice", "--modulus", "0"]).code, 2);
        assert_eq!(
            run(&["verify-all", "--modulus", "12", "--max-size", "5"]).code,
            2
        );
    }

    #[test]
    fn help_is_success() {
        let out = run(&["--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("verify-all"));
    }

    #[test]
    fn run_config_bounds() {
        let mut cfg = RunConfig {
            modulus: 12,
            topology: None,
            seed: 0,
            max_value_set_size: 4,
            format: OutputFormat::Json,
        };
        assert!(cfg.validate().is_ok());
        cfg.max_value_set_size = 0;
        assert!(cfg.validate().is_err());
        cfg.max_value_set_size = 1;
        cfg.modulus = 0;
        assert!(cfg.validate().is_err());
    }
}
