use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use divclass::bench::{run_scale, run_suite, ScaleOp, ScaleOptions, Suite, VerifyOptions};
use divclass::{
    gen_fixture, gen_hyperelliptic, gen_rep_b0, load_bundle, save_bundle, GenOptions, PrimeField, RepTag, Sampler,
};

#[derive(Parser)]
#[command(name = "divclass", version, about = "Divisor-class arithmetic via exact linear algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepArg {
    A,
    B0,
}

impl From<RepArg> for RepTag {
    fn from(r: RepArg) -> Self {
        match r {
            RepArg::A => RepTag::A,
            RepArg::B0 => RepTag::B0,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a curve bundle.
    Gen {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 1009)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `b0` also stores point-value data.
        #[arg(long, value_enum, default_value = "a")]
        rep: RepArg,
        /// Use y^2 = x^3 + 1 with Delta = 4 instead of a random curve.
        #[arg(long)]
        fixture: bool,
        /// Skip the cubic tables (no inflation or membership tests).
        #[arg(long)]
        no_cubic: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a verification suite; JSON lines on stdout, summary on stderr.
    Verify {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_parser = |s: &str| s.parse::<Suite>())]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "a")]
        rep: RepArg,
    },
    /// Time one operation across genera and fit the log-log slope.
    Scale {
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
        genus_list: Vec<usize>,
        #[arg(long, default_value_t = 1009)]
        prime: u64,
        #[arg(long, value_parser = |s: &str| s.parse::<ScaleOp>(), default_value = "addflip-large")]
        op: ScaleOp,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_csv: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> divclass::Result<bool> {
    match cli.command {
        Command::Gen { genus, prime, seed, rep, fixture, no_cubic, out } => {
            let field = PrimeField::new(prime)?;
            let mut rng = Sampler::new(field, seed);
            let mut bundle = if fixture {
                gen_fixture(prime)?
            } else {
                gen_hyperelliptic(field, genus, None, &GenOptions { with_cubic: !no_cubic, h: None }, &mut rng)?
            };
            if matches!(rep, RepArg::B0) {
                bundle = gen_rep_b0(bundle, &mut rng)?;
            }
            save_bundle(&bundle, &out)?;
            eprintln!(
                "wrote {}: g={} p={} Delta={} rep={}",
                out.display(),
                bundle.curve.genus(),
                prime,
                bundle.big_delta,
                RepTag::from(rep)
            );
            Ok(true)
        }
        Command::Verify { bundle, suite, trials, seed, rep } => {
            let b = load_bundle(&bundle)?;
            let report = run_suite(&b, &VerifyOptions { suite, trials, seed, rep: rep.into() })?;
            print!("{}", report.jsonl());
            eprint!("{}", report.summary());
            Ok(report.passed())
        }
        Command::Scale { genus_list, prime, op, trials, seed, out_csv } => {
            let report = run_scale(&ScaleOptions { genera: genus_list, p: prime, op, trials, seed })?;
            let csv = report.csv();
            match out_csv {
                Some(p) => std::fs::write(p, &csv)?,
                None => print!("{csv}"),
            }
            for r in &report.rows {
                eprintln!(
                    "g={:<3} {} median {:.3} ms, deflation attempts {}/{}",
                    r.genus,
                    r.op,
                    r.median_ns as f64 / 1e6,
                    r.retries.deflation_attempts,
                    r.retries.deflations
                );
            }
            eprintln!("log-log slope: {}", report.slope_text());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
