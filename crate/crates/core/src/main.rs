//! Command-line front end.
//!
//! Words on the command line are hex strings whose least-significant
//! (rightmost) digit carries positions 0-3. Exit codes: 0 success,
//! 1 usage or I/O error, 2 verification failure, 3 budget refusal.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rmdec::circuit::{self, ExportFormat};
use rmdec::code;
use rmdec::decode_chen::{self, ChenPlan};
use rmdec::decode_new::{self, DecoderPlan};
use rmdec::harness::{
    self, CampaignReport, CodewordPolicy, HarnessError, PlanFile, VerifyOptions, DEFAULT_BUDGET,
};
use rmdec::metrics;
use std::fmt;
use std::fs;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rmdec",
    about = "Majority-logic decoding of binary Reed-Muller codes RM(r, m)",
    long_about = "Majority-logic decoding of binary Reed-Muller codes RM(r, m).\n\
        All words on the command line are hex strings of n/4 (or k/4, rounded up)\n\
        digits; the least-significant (rightmost) hex digit carries bit positions\n\
        0-3, the next digit positions 4-7, and so on."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    New,
    Chen,
    Ml,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NetlistAlgo {
    New,
    Chen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsFormat {
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build the decoder plan (spread, cosets, index maps) and serialize it
    Gen {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<String>,
    },
    /// Encode a k-bit message into an n-bit codeword
    Encode {
        #[arg(long)]
        plan: String,
        /// Message as ceil(k/4) hex digits, least-significant digit first
        #[arg(long)]
        message_hex: String,
    },
    /// Decode an n-bit received word
    Decode {
        #[arg(long)]
        plan: String,
        /// Received word as n/4 hex digits, least-significant digit first
        #[arg(long)]
        word_hex: String,
        #[arg(long, value_enum, default_value = "new")]
        algo: Algo,
        /// Print intermediate decoder values
        #[arg(long)]
        trace: bool,
    },
    /// Run an exhaustive or sampled correction-guarantee campaign
    Verify {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        max_weight: u32,
        /// Codeword policy: zero, all, or sample:K
        #[arg(long, default_value = "zero")]
        codewords: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compare against the nearest-codeword oracle (k <= 22)
        #[arg(long)]
        with_ml: bool,
        /// Maximum decode calls before refusing
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print the per-function call-count tables for both decoders
    Stats {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: StatsFormat,
    },
    /// Synthesize a gate-level netlist for one decoder
    Netlist {
        #[arg(long)]
        plan: String,
        #[arg(long, value_enum)]
        algo: NetlistAlgo,
        /// dot or json
        #[arg(long, default_value = "json")]
        format: String,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<String>,
    },
    /// Monte-Carlo decoding over a binary symmetric channel
    Simulate {
        #[arg(long)]
        plan: String,
        /// Crossover probability
        #[arg(long)]
        p: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn usage(message: impl fmt::Display) -> CliError {
    CliError {
        message: message.to_string(),
        code: EXIT_USAGE,
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        let code = match e {
            HarnessError::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn load_plan(path: &str) -> Result<DecoderPlan, CliError> {
    let data = fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    Ok(PlanFile::from_json(&data)?.to_plan()?)
}

fn emit(out: &Option<String>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, contents).map_err(|e| usage(format!("{path}: {e}"))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn bools_csv(bits: &[bool]) -> String {
    bits.iter()
        .map(|&b| if b { "1" } else { "0" })
        .collect::<Vec<_>>()
        .join(",")
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen { r, m, out } => {
            let params = code::params(r, m).map_err(usage)?;
            let plan = decode_new::build_plan(&params).map_err(usage)?;
            emit(&out, &PlanFile::from_plan(&plan).to_json())
        }
        Command::Encode { plan, message_hex } => {
            let plan = load_plan(&plan)?;
            let params = plan.params();
            let gen = code::generator_matrix(params);
            let msg = harness::hex_to_word(&message_hex, params.k as usize)?;
            let c = code::encode(&gen, &msg).map_err(usage)?;
            println!("{}", harness::word_to_hex(&c));
            Ok(())
        }
        Command::Decode {
            plan,
            word_hex,
            algo,
            trace,
        } => {
            let plan = load_plan(&plan)?;
            let params = *plan.params();
            let z = harness::hex_to_word(&word_hex, params.n)?;
            match algo {
                Algo::New => {
                    let t = decode_new::decode(&plan, &z).map_err(usage)?;
                    if trace {
                        for (l, row) in t.sigma.iter().enumerate() {
                            println!("sigma[{l}] = ({})", bools_csv(row));
                        }
                        println!("mu = ({})", bools_csv(&t.mu));
                        for (l, row) in t.sigma_bar.iter().enumerate() {
                            println!("sigma_bar[{l}] = ({})", bools_csv(row));
                        }
                        println!("eta = {}", harness::word_to_hex(&t.eta));
                        println!(
                            "calls: check-sum {}, majority {}, xor {}",
                            t.counters.checksums, t.counters.majorities, t.counters.xors
                        );
                    }
                    println!("{}", harness::word_to_hex(&t.corrected));
                }
                Algo::Chen => {
                    let chen = ChenPlan::from_cosets(plan.cosets()).map_err(usage)?;
                    let t = decode_chen::chen_decode(&chen, &z).map_err(usage)?;
                    if trace {
                        println!("eta = {}", harness::word_to_hex(&t.eta));
                        println!(
                            "calls: check-sum {}, majority {}, xor {}",
                            t.counters.checksums, t.counters.majorities, t.counters.xors
                        );
                    }
                    println!("{}", harness::word_to_hex(&t.corrected));
                }
                Algo::Ml => {
                    let gen = code::generator_matrix(&params);
                    let res = code::ml_decode(&gen, &z).map_err(usage)?;
                    if trace {
                        println!("message = {}", harness::word_to_hex(&res.message));
                        println!("distance = {}", res.distance);
                        println!("ambiguous = {}", res.ambiguous);
                    }
                    println!("{}", harness::word_to_hex(&res.codeword));
                }
            }
            Ok(())
        }
        Command::Verify {
            r,
            m,
            max_weight,
            codewords,
            seed,
            with_ml,
            budget,
        } => {
            let params = code::params(r, m).map_err(usage)?;
            let policy = parse_policy(&codewords, seed)?;
            let options = VerifyOptions {
                max_weight,
                policy,
                with_ml,
                budget,
            };
            let report = harness::verify_exhaustive(&params, &options)?;
            print_campaign(&report);
            if report.failures > 0 || !report.identity_checks_passed {
                return Err(CliError {
                    message: format!("{} decoding failures", report.failures),
                    code: EXIT_VERIFICATION,
                });
            }
            Ok(())
        }
        Command::Stats { r, m, format } => {
            let params = code::params(r, m).map_err(usage)?;
            match format {
                StatsFormat::Text => print!("{}", metrics::render_text(&params)),
                StatsFormat::Csv => {
                    // two tables, each with the standard header; lines
                    // starting with '#' name the algorithm
                    print!("# chen\n{}", metrics::chen_counts(&params).to_csv());
                    print!("# new\n{}", metrics::new_counts(&params).to_csv());
                }
            }
            Ok(())
        }
        Command::Netlist {
            plan,
            algo,
            format,
            out,
        } => {
            let plan = load_plan(&plan)?;
            let netlist = match algo {
                NetlistAlgo::New => circuit::synthesize_new(&plan),
                NetlistAlgo::Chen => {
                    let chen = ChenPlan::from_cosets(plan.cosets()).map_err(usage)?;
                    circuit::synthesize_chen(&chen)
                }
            };
            let format: ExportFormat = format.parse().map_err(usage)?;
            emit(&out, &circuit::export(&netlist, format))
        }
        Command::Simulate {
            plan,
            p,
            trials,
            seed,
        } => {
            let plan = load_plan(&plan)?;
            let gen = code::generator_matrix(plan.params());
            let report = harness::simulate(&plan, &gen, p, trials, seed)?;
            let params = report.params;
            println!(
                "RM({},{})  p={}  trials={}  rng={}  seed={}",
                params.r, params.m, report.p, report.trials, report.rng_algorithm, seed
            );
            println!(
                "block errors: {} ({:.3e})",
                report.block_errors,
                report.block_errors as f64 / report.trials.max(1) as f64
            );
            println!(
                "trials beyond radius t={}: {}  failures within radius: {}",
                params.t, report.beyond_radius, report.failures_within_radius
            );
            println!("wall time: {} ms", report.wall_ms);
            Ok(())
        }
    }
}

fn parse_policy(s: &str, seed: u64) -> Result<CodewordPolicy, CliError> {
    match s {
        "zero" => Ok(CodewordPolicy::Zero),
        "all" => Ok(CodewordPolicy::All),
        _ => match s.strip_prefix("sample:").and_then(|k| k.parse().ok()) {
            Some(count) => Ok(CodewordPolicy::Sample { count, seed }),
            None => Err(usage(format!(
                "invalid codeword policy '{s}': expected zero, all, or sample:K"
            ))),
        },
    }
}

fn print_campaign(report: &CampaignReport) {
    let params = report.params;
    println!(
        "RM({},{})  n={} k={} t={}  rng={}",
        params.r, params.m, params.n, params.k, params.t, report.rng_algorithm
    );
    println!("trials: {}", report.trials);
    let hist = report
        .weight_histogram
        .iter()
        .enumerate()
        .map(|(w, c)| format!("{w}:{c}"))
        .collect::<Vec<_>>()
        .join(" ");
    println!("weight histogram: {hist}");
    println!(
        "decoder identity checks: {}",
        if report.identity_checks_passed {
            "passed"
        } else {
            "FAILED"
        }
    );
    println!("failures: {}", report.failures);
    for w in &report.failure_witnesses {
        println!("  witness e = {}", harness::word_to_hex(w));
    }
    println!("wall time: {} ms", report.wall_ms);
}
