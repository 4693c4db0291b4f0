//! The `mhc` command line.
//!
//! Exit codes: 0 for accept / equivalent / suite pass / success, 1 for
//! reject / inequivalent / suite failure, 2 for usage, parse or validation
//! errors. Results go to stdout and diagnostics to stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::algebra::{elaborate_with_provenance, DeviceEnvironment, Elaborated, NodeKind};
use crate::analysis::{determinize, equivalent};
use crate::automaton::Word;
use crate::error::Error;
use crate::random::run_props;
use crate::textio::{parse_automaton, parse_expression, parse_word, render_automaton, render_dot_labeled, render_word};
use crate::trace::control_trace;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mhc", version, about = "Compose ε-NFAs with `;` (concatenation) and `|` (parallel)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Devices {
    /// Automaton files; each is bound under the name on its `name` line.
    #[arg(short = 'd', long = "device", num_args = 1.., required = true)]
    files: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate automaton files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Elaborate an expression and run it on an input word.
    Accept {
        #[command(flatten)]
        devices: Devices,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'i', long = "input")]
        input: String,
    },
    /// Show the device-level control trace of a run.
    Trace {
        #[command(flatten)]
        devices: Devices,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'i', long = "input")]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two expressions denote the same language.
    Equiv {
        #[command(flatten)]
        devices: Devices,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Second expression; `-e2` is accepted as a spelling of `--e2`.
        #[arg(long = "e2")]
        expr2: String,
    },
    /// Write the elaborated composite in canonical form.
    Compose {
        #[command(flatten)]
        devices: Devices,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Name for the written automaton instead of the expression text.
        #[arg(long)]
        name: Option<String>,
    },
    /// Write the determinized composite.
    Dfa {
        #[command(flatten)]
        devices: Devices,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Export the composite as Graphviz DOT.
    Dot {
        #[command(flatten)]
        devices: Devices,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Box each top-level operand in its own cluster.
        #[arg(long)]
        group: bool,
    },
    /// Run the seeded closure-law property suite.
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: u64,
        #[arg(long = "max-len", default_value_t = 6)]
        max_len: usize,
    },
}

/// Runs one invocation and returns its exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = args.into_iter().map(|a| {
        let a: OsString = a.into();
        if a == "-e2" {
            OsString::from("--e2")
        } else {
            a
        }
    });
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "{failure}");
            EXIT_ERROR
        }
    }
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
struct Failure(String);

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(format!("error: {e}"))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(format!("error: {e}"))
    }
}

fn located(path: &Path, e: Error) -> Failure {
    match e {
        Error::Parse(diagnostics) => Failure(
            diagnostics
                .iter()
                .map(|d| format!("{}:{d}", path.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        ),
        other => Failure(format!("{}: {other}", path.display())),
    }
}

fn load_environment(devices: &Devices) -> Result<DeviceEnvironment, Failure> {
    let mut env = DeviceEnvironment::new();
    for path in &devices.files {
        let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        let a = parse_automaton(&text).map_err(|e| located(path, e))?;
        env.bind(a).map_err(|e| located(path, e))?;
    }
    Ok(env)
}

fn elaborate_text(expr: &str, env: &DeviceEnvironment) -> Result<Elaborated, Failure> {
    let e = parse_expression(expr).map_err(|e| match e {
        Error::Parse(d) => Failure(
            d.iter()
                .map(|d| format!("expression:{d}"))
                .collect::<Vec<_>>()
                .join("\n"),
        ),
        other => other.into(),
    })?;
    Ok(elaborate_with_provenance(&e, env)?)
}

fn read_input(text: &str, el: &Elaborated) -> Result<Word, Failure> {
    let a = &el.automaton;
    let w = parse_word(text, a.alphabet())?;
    if let Some(x) = w.iter().find(|x| !a.alphabet().contains(*x)) {
        return Err(Error::UnknownSymbol(x.to_string()).into());
    }
    Ok(w)
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Check { files } => {
            let mut code = EXIT_OK;
            for path in &files {
                let outcome = fs::read_to_string(path)
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))
                    .and_then(|text| parse_automaton(&text).map_err(|e| located(path, e)));
                match outcome {
                    Ok(a) => writeln!(
                        out,
                        "{}: ok ({} states, {} transitions)",
                        path.display(),
                        a.states().len(),
                        a.edge_count()
                    )?,
                    Err(failure) => {
                        writeln!(err, "{failure}")?;
                        code = EXIT_ERROR;
                    }
                }
            }
            Ok(code)
        }
        Command::Accept { devices, expr, input } => {
            let env = load_environment(&devices)?;
            let el = elaborate_text(&expr, &env)?;
            let w = read_input(&input, &el)?;
            let accepted = el.automaton.accepts(&w)?;
            writeln!(out, "{}", if accepted { "accept" } else { "reject" })?;
            Ok(if accepted { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Trace { devices, expr, input, json } => {
            let env = load_environment(&devices)?;
            let el = elaborate_text(&expr, &env)?;
            let w = read_input(&input, &el)?;
            let e = parse_expression(&expr)?;
            let trace = control_trace(&e, &env, &w)?;
            let alphabet = el.automaton.alphabet();
            if json {
                let text = serde_json::to_string_pretty(&trace.to_json(alphabet))
                    .map_err(|e| Failure(format!("error: {e}")))?;
                writeln!(out, "{text}")?;
            } else {
                write!(out, "{}", trace.render_text(alphabet))?;
            }
            Ok(if trace.overall { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Equiv { devices, expr, expr2 } => {
            let env = load_environment(&devices)?;
            let a = elaborate_text(&expr, &env)?.automaton;
            let b = elaborate_text(&expr2, &env)?.automaton;
            let verdict = equivalent(&a, &b)?;
            match verdict.counterexample {
                None => {
                    writeln!(out, "equivalent")?;
                    Ok(EXIT_OK)
                }
                Some(w) => {
                    let alphabet = a.alphabet().union(b.alphabet()).cloned().collect();
                    writeln!(out, "inequivalent")?;
                    writeln!(out, "counterexample {}", render_word(&w, &alphabet))?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Compose { devices, expr, output, name } => {
            let env = load_environment(&devices)?;
            let mut a = elaborate_text(&expr, &env)?.automaton;
            if let Some(name) = name {
                if !crate::automaton::is_name_token(&name) {
                    return Err(Error::InvalidName(name).into());
                }
                a = a.renamed(name);
            }
            fs::write(&output, render_automaton(&a))?;
            writeln!(
                out,
                "wrote {} ({} states, {} transitions)",
                output.display(),
                a.states().len(),
                a.edge_count()
            )?;
            Ok(EXIT_OK)
        }
        Command::Dfa { devices, expr, output } => {
            let env = load_environment(&devices)?;
            let a = elaborate_text(&expr, &env)?.automaton;
            let dfa = determinize(&a)?;
            let mut text = String::new();
            for (i, subset) in dfa.labels().iter().enumerate() {
                let members: Vec<String> = subset.iter().map(ToString::to_string).collect();
                text.push_str(&format!("# d{i} = {{{}}}\n", members.join(", ")));
            }
            text.push_str(&render_automaton(&dfa.to_automaton(format!("{}_dfa", a.name()))));
            fs::write(&output, text)?;
            writeln!(out, "wrote {} ({} states)", output.display(), dfa.len())?;
            Ok(EXIT_OK)
        }
        Command::Dot { devices, expr, group } => {
            let env = load_environment(&devices)?;
            let el = elaborate_text(&expr, &env)?;
            let labels: BTreeMap<String, String> = el
                .provenance
                .nodes()
                .filter(|(path, _)| path.len() == 1)
                .map(|(path, info)| {
                    let caption = match &info.kind {
                        NodeKind::Device(name) => name.clone(),
                        _ => info.label.clone(),
                    };
                    (path[0].clone(), caption)
                })
                .collect();
            write!(out, "{}", render_dot_labeled(&el.automaton, group, &labels))?;
            Ok(EXIT_OK)
        }
        Command::Props { seed, cases, max_len } => {
            let report = run_props(seed, cases, max_len)?;
            write!(out, "{}", report.render())?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}
