use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ergolab::config::load_config;
use ergolab::experiment::{check_expectations, run_experiment, RunOutput};
use ergolab::presets::PRESETS;
use ergolab::Error;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_ASSERT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ergolab",
    version,
    about = "Double ergodic averages along fractional-power sequences"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment from a JSON config, a sidecar, or a preset name.
    Run {
        config: String,
        /// Override a config key, e.g. `--set schedule.n_max=10000`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
        /// Expectations file; breaches exit with status 4.
        #[arg(long = "assert", value_name = "FILE")]
        assert: Option<PathBuf>,
        /// Worker threads (default: ERGOLAB_THREADS, then all cores).
        #[arg(long, env = "ERGOLAB_THREADS")]
        threads: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Write the run's wall time into the `ms` column.
        #[arg(long)]
        timing: bool,
    },
    /// List the built-in presets.
    Presets,
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_NUMERIC
    })
}

fn read_config(arg: &str) -> Result<String, Error> {
    let path = Path::new(arg);
    if !path.exists() && PRESETS.iter().any(|(n, _)| *n == arg) {
        return Ok(format!("{{\"preset\": \"{arg}\"}}"));
    }
    std::fs::read_to_string(path).map_err(|e| Error::validation(format!("cannot read config {arg}: {e}")))
}

fn write_outputs(out: &RunOutput, dir: &Path, threads: usize, timing: bool) -> Result<Vec<PathBuf>, Error> {
    std::fs::create_dir_all(dir)?;
    let name = out.config.name();
    let o = &out.config.output;
    let mut written = Vec::new();
    let mut put = |file: String, body: String| -> Result<(), Error> {
        let p = dir.join(file);
        std::fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    put(o.csv.clone().unwrap_or(format!("{name}.csv")), out.csv(timing))?;
    let side = serde_json::to_string_pretty(&out.sidecar(threads)).expect("sidecar serializes");
    put(o.sidecar.clone().unwrap_or(format!("{name}.json")), side + "\n")?;
    if let Some(rep) = &out.limit_report {
        let body = serde_json::to_string_pretty(rep).expect("report serializes");
        put(
            o.limit_report.clone().unwrap_or(format!("{name}.limit.json")),
            body + "\n",
        )?;
    }
    for (suffix, body) in &out.extra {
        put(format!("{name}.{suffix}.csv"), body.clone())?;
    }
    Ok(written)
}

fn run(
    config: &str,
    sets: &[String],
    assert: Option<&Path>,
    threads: Option<usize>,
    dir: &Path,
    timing: bool,
) -> ExitCode {
    let cfg = match read_config(config).and_then(|t| load_config(&t, sets)) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return fail(&Error::validation(format!("thread pool: {e}"))),
    };
    let out = match pool.install(|| run_experiment(&cfg)) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    match write_outputs(&out, dir, pool.current_num_threads(), timing) {
        Ok(files) => {
            if let Some(v) = out.final_value() {
                println!(
                    "{}: N = {}, final = {} {:+}i ({} ms)",
                    cfg.name(),
                    out.rows.last().unwrap().n,
                    v.re,
                    v.im,
                    out.elapsed_ms
                );
            }
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Err(e) => return fail(&e),
    }
    if let Some(path) = assert {
        let exp = std::fs::read_to_string(path)
            .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))
            .and_then(|t| serde_json::from_str(&t).map_err(|e| Error::validation(format!("{}: {e}", path.display()))));
        let breaches = match exp.and_then(|v| check_expectations(&out, &v)) {
            Ok(b) => b,
            Err(e) => return fail(&e),
        };
        if !breaches.is_empty() {
            for b in breaches {
                eprintln!("assert: {b}");
            }
            return ExitCode::from(EXIT_ASSERT);
        }
        println!("assert: ok");
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Presets => {
            for (name, about) in PRESETS {
                println!("{name:<30} {about}");
            }
            ExitCode::SUCCESS
        }
        Cmd::Run {
            config,
            sets,
            assert,
            threads,
            out,
            timing,
        } => run(&config, &sets, assert.as_deref(), threads, &out, timing),
    }
}
