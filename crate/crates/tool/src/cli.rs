use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use pisot_wfa::normalizer::{build_multidim_normalizer, oracle_mismatch, NormalizerOptions};
use pisot_wfa::pipeline::{
    greedy_to_value_linrep, greedy_tuple_dfa, validate_value_linrep, ConversionOptions,
};
use pisot_wfa::semiring::{Boolean, Integer, Natural, Rational, Tropical};
use pisot_wfa::wfa::LinearRepresentation;
use pisot_wfa::SystemTuple;

use crate::dot::{dfa_to_dot, wfa_to_dot};
use crate::error::{Result, ToolError};
use crate::formats::{
    format_word, parse_alphabet, parse_json, parse_word, read_json, to_json, AutomatonFile,
    LinrepFile, ReportFile, SystemFile,
};
use crate::verify::{run_suite, Fixtures, VerificationConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

/// Numeration systems, normalizers and regular sequences over Pisot
/// linear numeration systems.
#[derive(Debug, Parser)]
#[command(name = "pisot-wfa", version)]
pub struct Cli {
    /// System file; repeat for a tuple of systems.
    #[arg(long = "system", global = true, value_name = "FILE")]
    pub systems: Vec<PathBuf>,
    /// Semiring used to read weights (natural, integer, rational, boolean,
    /// tropical). Defaults to the one recorded in the input file.
    #[arg(long, global = true)]
    pub semiring: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy representation of one integer per system.
    Rep {
        #[arg(required = true, allow_negative_numbers = true)]
        numbers: Vec<BigInt>,
    },
    /// Value of a word, one integer per track.
    Val {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Greedy representation of the value of a word, sign kept.
    Normalize {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Normalizer for the given input alphabet.
    BuildNormalizer {
        /// `0,1,2`, `-2..2` or a JSON array of letters.
        #[arg(long, allow_hyphen_values = true)]
        alphabet: String,
        /// Compare against the value/greedy oracle up to this length first.
        #[arg(long, value_name = "LEN")]
        check_oracle: Option<usize>,
    },
    /// Acceptor of padded greedy representations.
    GreedyLanguage {
        /// Reject words starting with the zero letter.
        #[arg(long)]
        strict: bool,
    },
    /// Value-indexed representation of a greedy-indexed series.
    Convert {
        #[arg(long, value_name = "FILE")]
        series: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alphabet: String,
        #[arg(long)]
        no_trim: bool,
        /// Write the conversion report as JSON.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Check the result against the oracle up to this length.
        #[arg(long, value_name = "LEN")]
        verify: Option<usize>,
    },
    /// Coefficient of a word in a series.
    Eval {
        #[arg(long, value_name = "FILE")]
        series: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Run the invariant suite; one JSON line per check.
    Verify {
        #[arg(long, default_value_t = 7)]
        max_len: usize,
        #[arg(long, default_value_t = 9)]
        exhaustive_alphabet_limit: usize,
        #[arg(long, default_value_t = 2000)]
        sample_count: usize,
        /// Replace the shipped greedy-indexed series.
        #[arg(long, value_name = "FILE")]
        series: Option<PathBuf>,
        /// Replace the shipped expected value-indexed representation.
        #[arg(long, value_name = "FILE")]
        expected: Option<PathBuf>,
    },
    /// Graphviz rendering of an automaton or linear representation file.
    ExportDot {
        input: PathBuf,
        /// Show letters of an automaton as the first K coordinates over the rest.
        #[arg(long, value_name = "K")]
        split: Option<usize>,
    },
}

/// What a command produced. `failure` is set when the output is complete
/// but a verification did not pass.
#[derive(Debug)]
pub struct Emitted {
    pub text: String,
    pub failure: Option<String>,
}

impl From<String> for Emitted {
    fn from(text: String) -> Self {
        Emitted {
            text,
            failure: None,
        }
    }
}

macro_rules! with_semiring {
    ($name:expr, $s:ident => $body:expr) => {
        match $name {
            "natural" => {
                type $s = Natural;
                $body
            }
            "integer" => {
                type $s = Integer;
                $body
            }
            "rational" => {
                type $s = Rational;
                $body
            }
            "boolean" => {
                type $s = Boolean;
                $body
            }
            "tropical" => {
                type $s = Tropical;
                $body
            }
            other => Err(ToolError::Usage(format!("unknown semiring {other:?}"))),
        }
    };
}

impl Cli {
    fn tuple(&self) -> Result<SystemTuple> {
        if self.systems.is_empty() {
            return Err(ToolError::Usage(
                "at least one --system FILE is required".into(),
            ));
        }
        let systems = self
            .systems
            .iter()
            .map(|p| read_json::<SystemFile>(p)?.to_system())
            .collect::<Result<Vec<_>>>()?;
        Ok(SystemTuple::new(systems)?)
    }

    fn semiring_of<'a>(&'a self, file: &'a LinrepFile) -> &'a str {
        self.semiring.as_deref().unwrap_or(&file.semiring)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| ToolError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn list(values: &[BigInt]) -> String {
    match values {
        [v] => v.to_string(),
        vs => format!(
            "[{}]",
            vs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        ),
    }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Emitted> {
    match &cli.command {
        Command::Rep { numbers } => {
            let ts = cli.tuple()?;
            Ok(format!("{}\n", format_word(&ts.rep_vec(numbers)?)).into())
        }
        Command::Val { word } => {
            let ts = cli.tuple()?;
            let w = parse_word(word, ts.dim())?;
            Ok(format!("{}\n", list(&ts.val_vec(&w)?)).into())
        }
        Command::Normalize { word } => {
            let ts = cli.tuple()?;
            let w = parse_word(word, ts.dim())?;
            Ok(format!("{}\n", ts.normalize(&w)?).into())
        }
        Command::BuildNormalizer {
            alphabet,
            check_oracle,
        } => {
            let ts = cli.tuple()?;
            let a = parse_alphabet(alphabet, ts.dim())?;
            let n = build_multidim_normalizer(&ts, &a)?;
            if let Some(len) = check_oracle {
                if let Some((u, v)) = oracle_mismatch(&ts, &a, &n, *len)? {
                    return Err(ToolError::Verification(format!(
                        "normalizer disagrees with the oracle on input {u}, output {v}"
                    )));
                }
            }
            Ok(match cli.format {
                Format::Json => to_json(&AutomatonFile::from_dfa(&n)),
                Format::Dot => dfa_to_dot(&n, "normalizer", Some(ts.dim())),
            }
            .into())
        }
        Command::GreedyLanguage { strict } => {
            let ts = cli.tuple()?;
            let g = greedy_tuple_dfa(&ts, !strict, &NormalizerOptions::default())?;
            Ok(match cli.format {
                Format::Json => to_json(&AutomatonFile::from_dfa(&g)),
                Format::Dot => dfa_to_dot(&g, "greedy", None),
            }
            .into())
        }
        Command::Convert {
            series,
            alphabet,
            no_trim,
            report,
            verify,
        } => {
            let ts = cli.tuple()?;
            let file: LinrepFile = read_json(series)?;
            let a = parse_alphabet(alphabet, ts.dim())?;
            let opts = ConversionOptions {
                trim: !no_trim,
                ..Default::default()
            };
            with_semiring!(cli.semiring_of(&file), S => {
                let g: LinearRepresentation<S> = file.to_linrep()?;
                let mut c = greedy_to_value_linrep(&g, &ts, &a, &opts)?;
                if let Some(len) = verify {
                    c.report.validation = Some(validate_value_linrep(&c.linrep, &g, &ts, &a, *len)?);
                }
                if let Some(path) = report {
                    write_file(path, &to_json(&ReportFile::from_report(&c.report)))?;
                }
                if let Some(v) = &c.report.validation {
                    if v.mismatches > 0 {
                        let w = v.first_mismatch.as_ref().map(ToString::to_string).unwrap_or_default();
                        return Err(ToolError::Verification(format!(
                            "{} of {} words disagree with the oracle, first {w}",
                            v.mismatches, v.words_checked
                        )));
                    }
                }
                Ok(match cli.format {
                    Format::Json => to_json(&LinrepFile::from_linrep(&c.linrep)),
                    Format::Dot => wfa_to_dot(&c.linrep.to_wfa()?, "value"),
                }
                .into())
            })
        }
        Command::Eval { series, word } => {
            let file: LinrepFile = read_json(series)?;
            let w = parse_word(word, file.letter_dim)?;
            with_semiring!(cli.semiring_of(&file), S => {
                let l: LinearRepresentation<S> = file.to_linrep()?;
                Ok(format!("{}\n", l.eval(&w)?).into())
            })
        }
        Command::Verify {
            max_len,
            exhaustive_alphabet_limit,
            sample_count,
            series,
            expected,
        } => {
            let config = VerificationConfig {
                max_word_length: *max_len,
                exhaustive_alphabet_limit: *exhaustive_alphabet_limit,
                sample_count: *sample_count,
                seed: cli.seed,
            };
            config.validate()?;
            let mut fx = Fixtures::shipped();
            if let Some(p) = series {
                fx.series = read_json::<LinrepFile>(p)?.to_linrep()?;
            }
            if let Some(p) = expected {
                fx.expected_value = read_json::<LinrepFile>(p)?.to_linrep()?;
            }
            let outcomes = run_suite(&config, &fx);
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&serde_json::to_string(o).expect("outcomes serialize"));
                text.push('\n');
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            text.push_str(&format!(
                "{{\"summary\":{{\"checks\":{},\"failed\":{failed}}}}}\n",
                outcomes.len()
            ));
            Ok(Emitted {
                text,
                failure: (failed > 0)
                    .then(|| format!("{failed} of {} checks failed", outcomes.len())),
            })
        }
        Command::ExportDot { input, split } => {
            let text = fs::read_to_string(input).map_err(|source| ToolError::Io {
                path: input.clone(),
                source,
            })?;
            let origin = input.display().to_string();
            let value: serde_json::Value = parse_json(&text, &origin)?;
            if value.get("transitions").is_some() {
                let dfa = parse_json::<AutomatonFile>(&text, &origin)?.to_dfa()?;
                Ok(dfa_to_dot(&dfa, "automaton", *split).into())
            } else {
                let file: LinrepFile = parse_json(&text, &origin)?;
                with_semiring!(cli.semiring_of(&file), S => {
                    let l: LinearRepresentation<S> = file.to_linrep()?;
                    Ok(wfa_to_dot(&l.to_wfa()?, "series").into())
                })
            }
        }
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit
/// status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let emitted = match run(&cli) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = write_file(path, &emitted.text) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
        }
        None => print!("{}", emitted.text),
    }
    match emitted.failure {
        Some(msg) => {
            eprintln!("error: {}", ToolError::Verification(msg));
            3
        }
        None => 0,
    }
}
