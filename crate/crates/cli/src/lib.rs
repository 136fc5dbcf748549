//! Command-line front end for `psys-core`.
//!
//! [`run`] takes the argument vector and the three standard streams, so the
//! whole tool can be driven in-process. Exit codes: 0 success, 1 negative
//! answer (`member`, `equiv`), 2 usage, parse or validation error.

pub mod format;

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use psys_core::complexity::{self, tradeoff_report};
use psys_core::monoid::{self, distinguishing_member, Side};
use psys_core::semantics::{self, enumerate, simulate_reachable};
use psys_core::{ContextFreeClass, GeneralPSystem, Mode, PSystem, UnaryPSystem};
use thiserror::Error;

use crate::format::ParseDiagnostic;

/// Longest bound accepted together with `--as-string`.
const STRING_BOUND_LIMIT: u64 = 10_000;
/// Cap on the search bound for a distinguishing member in `equiv`.
const WITNESS_BOUND_CAP: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "psys", version, about = "Self-reproducing P systems with a linear membrane structure")]
struct Cli {
    /// Write systems as JSON instead of the line format
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Star,
    Plus,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Star => Mode::Star,
            ModeArg::Plus => Mode::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Conversion {
    PlusToStar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Table,
    Lines,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a system and print its normalized form
    Parse { file: PathBuf },
    /// Print the size: axiom length plus all right-hand side lengths
    Size { file: PathBuf },
    /// List the members up to a bound, one per line
    Enum {
        #[arg(long, value_enum, default_value = "star")]
        mode: ModeArg,
        #[arg(long)]
        bound: u64,
        /// Print members as literal strings
        #[arg(long)]
        as_string: bool,
        file: PathBuf,
    },
    /// List the members up to a bound by simulating the membranes
    Simulate {
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        as_string: bool,
        file: PathBuf,
    },
    /// Decide whether a^M is generated and print the exponents used
    Member {
        #[arg(long, value_enum, default_value = "star")]
        mode: ModeArg,
        #[arg(short = 'm')]
        m: u64,
        file: PathBuf,
    },
    /// Print the canonical form of a unary system
    Canon { file: PathBuf },
    /// Print the smallest system with the same star language
    Minimize {
        file: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Decide whether two unary systems generate the same language
    Equiv {
        #[arg(long, value_enum, default_value = "star")]
        mode: ModeArg,
        /// Mode of the second system (defaults to --mode)
        #[arg(long, value_enum)]
        second_mode: Option<ModeArg>,
        file1: PathBuf,
        file2: PathBuf,
    },
    /// Rewrite a system so that its star language is the original plus language
    Convert {
        #[arg(value_enum)]
        conversion: Conversion,
        file: PathBuf,
    },
    /// Reorder the homomorphisms (1-based positions, comma separated)
    Permute {
        #[arg(long, value_delimiter = ',', required = true)]
        order: Vec<usize>,
        file: PathBuf,
    },
    /// Remove homomorphisms while keeping the plus language
    Reduce {
        #[arg(long, default_value_t = 1)]
        times: usize,
        /// Reduce until no homomorphism can be removed
        #[arg(long, conflicts_with = "times")]
        all: bool,
        /// Print a size table instead of one line per step
        #[arg(long, value_enum)]
        report: Option<ReportFormat>,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
        file: PathBuf,
    },
    /// Tell whether the star language is context-free
    Classify { file: PathBuf },
    /// Emit a member of a parameterized family
    Family {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// axiom a^m with n copies of a->a^m
    WorstCase {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
    },
    /// n symbols, the i-th hom multiplies a_i by the i-th prime
    PrimePower {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{}", .diags.iter().map(|d| format!("{}:{}:{}: {}", .path, d.line, d.column, d.message)).collect::<Vec<_>>().join("\nerror: "))]
    Parse {
        path: String,
        diags: Vec<ParseDiagnostic>,
    },
    #[error("{0}")]
    Library(String),
}

type CliResult<T> = Result<T, CliError>;

fn lib_err(e: impl std::fmt::Display) -> CliError {
    CliError::Library(e.to_string())
}

fn display_name(path: &Path) -> String {
    if path.as_os_str() == "-" {
        "<stdin>".into()
    } else {
        path.display().to_string()
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &Path) -> CliResult<String> {
        let name = display_name(path);
        if path.as_os_str() == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io { path: name, source })?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|source| CliError::Io { path: name, source })
        }
    }

    fn load(&mut self, path: &Path) -> CliResult<GeneralPSystem> {
        let text = self.read(path)?;
        format::parse_any(&text)
            .map(|doc| doc.system)
            .map_err(|diags| CliError::Parse {
                path: display_name(path),
                diags,
            })
    }

    fn load_unary(&mut self, path: &Path, command: &str) -> CliResult<UnaryPSystem> {
        let sys = self.load(path)?;
        unary_of(&sys, path, command)
    }

    fn out(&mut self, text: &str) -> CliResult<()> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
    }

    fn render(&self, sys: &GeneralPSystem) -> String {
        if self.json {
            format::to_json(sys)
        } else {
            format::to_text(sys)
        }
    }

    /// Writes a system to `out`, or to standard output when `out` is `None`.
    fn emit(&mut self, sys: &GeneralPSystem, out: Option<&Path>) -> CliResult<()> {
        let text = self.render(sys);
        match out {
            Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            }),
            None => self.out(&text),
        }
    }
}

fn unary_of(sys: &GeneralPSystem, path: &Path, command: &str) -> CliResult<UnaryPSystem> {
    sys.as_unary().map_err(|_| {
        CliError::Usage(format!(
            "`{command}` needs a unary system, {} has {} symbols",
            display_name(path),
            sys.alphabet.len()
        ))
    })
}

fn parikh_line(alphabet: &[String], x: &[u64], as_string: bool) -> String {
    if as_string {
        alphabet
            .iter()
            .zip(x)
            .map(|(s, &c)| s.repeat(c as usize))
            .collect()
    } else {
        alphabet
            .iter()
            .zip(x)
            .map(|(s, c)| format!("{s}^{c}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn list_members(
    io: &mut Io<'_>,
    sys: &GeneralPSystem,
    bound: u64,
    as_string: bool,
    members: impl FnOnce(&GeneralPSystem) -> Result<Vec<Vec<u64>>, semantics::SemanticsError>,
) -> CliResult<()> {
    if as_string && bound > STRING_BOUND_LIMIT {
        return Err(CliError::Usage(format!(
            "--as-string accepts bounds up to {STRING_BOUND_LIMIT}"
        )));
    }
    let mut text = String::new();
    for x in members(sys).map_err(lib_err)? {
        if sys.alphabet.len() == 1 && !as_string {
            text.push_str(&x[0].to_string());
        } else {
            text.push_str(&parikh_line(&sys.alphabet, &x, as_string));
        }
        text.push('\n');
    }
    io.out(&text)
}

/// Axiom length once every homomorphism has been applied as often as the
/// mode requires.
fn least_member(sys: &UnaryPSystem, mode: Mode) -> u64 {
    match mode {
        Mode::Star => sys.axiom_len,
        Mode::Plus => sys.plus_to_star().map_or(u64::MAX, |s| s.axiom_len),
    }
}

fn dispatch(cli: Cli, io: &mut Io<'_>) -> CliResult<i32> {
    match cli.command {
        Command::Parse { file } => {
            let sys = io.load(&file)?;
            io.emit(&sys, None)?;
        }
        Command::Size { file } => {
            let sys = io.load(&file)?;
            io.out(&format!("{}\n", sys.size()))?;
        }
        Command::Enum {
            mode,
            bound,
            as_string,
            file,
        } => {
            let sys = io.load(&file)?;
            list_members(io, &sys, bound, as_string, |s| {
                enumerate(s, mode.into(), bound).map(|set| set.into_iter().collect())
            })?;
        }
        Command::Simulate { bound, as_string, file } => {
            let sys = io.load(&file)?;
            list_members(io, &sys, bound, as_string, |s| {
                simulate_reachable(s, bound).map(|set| set.into_iter().collect())
            })?;
        }
        Command::Member { mode, m, file } => {
            let sys = io.load_unary(&file, "member")?;
            return match semantics::member(&sys, mode.into(), m).map_err(lib_err)? {
                Some(w) => {
                    let line: String = w.iter().map(|e| format!(" {e}")).collect();
                    io.out(&format!("witness:{line}\n"))?;
                    Ok(0)
                }
                None => {
                    io.out("no\n")?;
                    Ok(1)
                }
            };
        }
        Command::Canon { file } => {
            let sys = io.load_unary(&file, "canon")?;
            let cf = monoid::canonicalize(&sys).map_err(lib_err)?;
            io.out(&cf.to_text())?;
        }
        Command::Minimize { file, out } => {
            let original = io.load(&file)?;
            let min = monoid::minimize(&unary_of(&original, &file, "minimize")?).map_err(lib_err)?;
            let mut general = min.to_general();
            general.alphabet = original.alphabet;
            io.emit(&general, out.as_deref())?;
        }
        Command::Equiv {
            mode,
            second_mode,
            file1,
            file2,
        } => {
            let s1 = io.load_unary(&file1, "equiv")?;
            let s2 = io.load_unary(&file2, "equiv")?;
            let (m1, m2) = (Mode::from(mode), Mode::from(second_mode.unwrap_or(mode)));
            if monoid::equivalent(&s1, m1, &s2, m2).map_err(lib_err)? {
                io.out("equivalent\n")?;
                return Ok(0);
            }
            io.out("not equivalent\n")?;
            let maxc = s1.coeffs.iter().chain(&s2.coeffs).copied().max().unwrap_or(1);
            let bound = least_member(&s1, m1)
                .saturating_mul(least_member(&s2, m2))
                .saturating_mul(maxc.saturating_mul(maxc))
                .clamp(1, WITNESS_BOUND_CAP);
            if let Some((m, side)) = distinguishing_member(&s1, m1, &s2, m2, bound).map_err(lib_err)? {
                let owner = match side {
                    Side::First => &file1,
                    Side::Second => &file2,
                };
                io.out(&format!(
                    "distinguishing member: {m} (only in {})\n",
                    owner.display()
                ))?;
            }
            return Ok(1);
        }
        Command::Convert { conversion, file } => {
            let sys = io.load(&file)?;
            let converted = match conversion {
                Conversion::PlusToStar => sys.plus_to_star().map_err(lib_err)?,
            };
            io.emit(&converted, None)?;
        }
        Command::Permute { order, file } => {
            let sys = io.load(&file)?;
            let n = sys.hom_count();
            let zero_based: Vec<usize> = order
                .iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| CliError::Usage(format!("--order: not a permutation of 1..={n}"))))
                .collect::<CliResult<_>>()?;
            let permuted = sys
                .permute(&zero_based)
                .map_err(|e| CliError::Usage(format!("--order: {e}")))?;
            io.emit(&permuted, None)?;
        }
        Command::Reduce {
            times,
            all,
            report,
            out,
            file,
        } => {
            let original = io.load(&file)?;
            let mut current = unary_of(&original, &file, "reduce")?;
            let steps = if all { None } else { Some(times) };
            if let Some(fmt) = report {
                let r = tradeoff_report(&current, steps).map_err(lib_err)?;
                match fmt {
                    ReportFormat::Table => io.out(&r.to_string())?,
                    ReportFormat::Lines => io.out(&r.machine_lines())?,
                }
            }
            let mut done = 0;
            while steps.is_none_or(|s| done < s) {
                let Some(next) = complexity::reduce_once(&current).map_err(lib_err)? else {
                    if report.is_none() {
                        io.out(&format!("size {}: no homomorphism can be removed\n", current.size()))?;
                    }
                    break;
                };
                if report.is_none() {
                    let before = u128::from(current.size());
                    let ok = complexity::check_quadratic_bound(&current, &next);
                    io.out(&format!(
                        "size {before} -> {}; bound {}: {}\n",
                        next.size(),
                        before * before - 1,
                        if ok { "ok" } else { "VIOLATED" }
                    ))?;
                }
                current = next;
                done += 1;
            }
            if let Some(p) = out {
                let mut general = current.to_general();
                general.alphabet = original.alphabet;
                io.emit(&general, Some(&p))?;
            }
        }
        Command::Classify { file } => {
            let sys = io.load_unary(&file, "classify")?;
            match monoid::classify_context_free(&sys).map_err(lib_err)? {
                ContextFreeClass::Singleton(m) => io.out(&format!("singleton {m}\n"))?,
                ContextFreeClass::NotContextFree => io.out("not context-free\n")?,
            }
        }
        Command::Family { family } => {
            let sys = match family {
                Family::WorstCase { m, n } => complexity::worst_case_family(m, n)
                    .map_err(|e| CliError::Usage(e.to_string()))?
                    .to_general(),
                Family::PrimePower { n } => {
                    complexity::prime_power_family(n).map_err(|e| CliError::Usage(e.to_string()))?
                }
            };
            io.emit(&sys, None)?;
        }
    }
    Ok(0)
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let json = cli.json;
    let mut io = Io { stdin, stdout, json };
    let code = match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    };
    let _ = io.stdout.flush();
    code
}
