use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use paw_coherence::clock::{evaluate_triplet, sweep_family, SweepRecord};
use paw_coherence::history::{conditional_system_state, fidelity, qubit_demo_universe};
use paw_coherence::qmat::unitary_evolution;
use paw_coherence::thermo::work_locking_demo;
use paw_coherence::verify::{run_all, CriterionReport};
use paw_coherence::{bell_diagonal, twirl_pinching, zeeman_hamiltonian, BellDiagonalTriplet, ComplexMatrix};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "paw", version, about = "Internal and external coherence of Page-Wootters clock states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every acceptance check and print one row per check.
    Verify,
    /// Sweep (c1, c2) on a grid at fixed c3.
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        c3: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// JSON report for one Bell-diagonal state.
    #[command(allow_negative_numbers = true)]
    State { c1: f64, c2: f64, c3: f64 },
    /// Single-copy versus two-copy work from |+> states.
    WorkLocking {
        #[arg(long = "kT", default_value_t = 1.0)]
        kt: f64,
    },
    /// Conditional states of a qubit history state.
    History {
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

const CSV_HEADER: [&str; 13] = [
    "c1",
    "c2",
    "c3",
    "p_rr",
    "p_ll",
    "p_rl",
    "p_lr",
    "C_total",
    "C_external",
    "C_internal",
    "concurrence_initial",
    "concurrence_dephased",
    "work_bits",
];

/// Rounds to 12 significant digits; `-0` becomes `0`.
fn sig12(x: f64) -> f64 {
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Serialize)]
struct RecordJson {
    c1: f64,
    c2: f64,
    c3: f64,
    p_rr: f64,
    p_ll: f64,
    p_rl: f64,
    p_lr: f64,
    #[serde(rename = "C_total")]
    c_total: f64,
    #[serde(rename = "C_external")]
    c_external: f64,
    #[serde(rename = "C_internal")]
    c_internal: f64,
    concurrence_initial: f64,
    concurrence_dephased: f64,
    work_bits: f64,
}

impl RecordJson {
    fn new(r: &SweepRecord) -> Self {
        RecordJson {
            c1: sig12(r.triplet.c1),
            c2: sig12(r.triplet.c2),
            c3: sig12(r.triplet.c3),
            p_rr: sig12(r.clock.p_rr),
            p_ll: sig12(r.clock.p_ll),
            p_rl: sig12(r.clock.p_rl),
            p_lr: sig12(r.clock.p_lr),
            c_total: sig12(r.breakdown.total),
            c_external: sig12(r.breakdown.external),
            c_internal: sig12(r.breakdown.internal),
            concurrence_initial: sig12(r.concurrence_initial),
            concurrence_dephased: sig12(r.concurrence_dephased),
            work_bits: sig12(r.work_bits),
        }
    }

    fn csv_row(&self) -> [String; 13] {
        [
            self.c1,
            self.c2,
            self.c3,
            self.p_rr,
            self.p_ll,
            self.p_rl,
            self.p_lr,
            self.c_total,
            self.c_external,
            self.c_internal,
            self.concurrence_initial,
            self.concurrence_dephased,
            self.work_bits,
        ]
        .map(|v| v.to_string())
    }
}

#[derive(Serialize)]
struct MatrixJson {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl MatrixJson {
    fn new(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let rows = |f: fn(&paw_coherence::Complex64) -> f64| {
            (0..n).map(|i| (0..n).map(|j| sig12(f(&m[(i, j)]))).collect()).collect()
        };
        MatrixJson {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

#[derive(Serialize)]
struct StateJson {
    #[serde(flatten)]
    record: RecordJson,
    rho: MatrixJson,
    dephased: MatrixJson,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INVALID)
}

fn print_report(reports: &[CriterionReport]) -> bool {
    println!("{:<4} {:<6} {:<58} {:<22} {:<22} anchor", "id", "status", "check", "expected", "observed");
    for rep in reports {
        for r in &rep.results {
            println!(
                "{:<4} {:<6} {:<58} {:<22} {:<22.12e} {}",
                rep.id,
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.check.to_string(),
                r.observed,
                r.anchor
            );
        }
    }
    println!();
    for rep in reports {
        println!(
            "criterion {:>2} {:<46} {} ({:.2?})",
            rep.id,
            rep.title,
            if rep.passed() { "PASS" } else { "FAIL" },
            rep.elapsed
        );
    }
    reports.iter().all(CriterionReport::passed)
}

fn cmd_verify() -> ExitCode {
    if print_report(&run_all()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn write_sweep(records: &[SweepRecord], format: Format, sink: Box<dyn Write>) -> Result<(), Box<dyn std::error::Error>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(CSV_HEADER)?;
            for r in records {
                w.write_record(RecordJson::new(r).csv_row())?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<RecordJson> = records.iter().map(RecordJson::new).collect();
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, &rows)?;
            writeln!(sink)?;
            sink.flush()?;
        }
    }
    Ok(())
}

fn cmd_sweep(c3: f64, step: f64, out: Option<PathBuf>, format: Format) -> ExitCode {
    let records = match sweep_family(c3, step) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let sink: Box<dyn Write> = match out {
        Some(path) => match File::create(&path) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => return fail(format!("{}: {e}", path.display())),
        },
        None => Box::new(io::stdout().lock()),
    };
    match write_sweep(&records, format, sink) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn cmd_state(c1: f64, c2: f64, c3: f64) -> ExitCode {
    let t = BellDiagonalTriplet::new(c1, c2, c3);
    let run = || -> paw_coherence::Result<StateJson> {
        let record = evaluate_triplet(t)?;
        let rho = bell_diagonal(t)?;
        let dephased = twirl_pinching(&rho, &zeeman_hamiltonian(1.0)?)?;
        Ok(StateJson {
            record: RecordJson::new(&record),
            rho: MatrixJson::new(rho.matrix()),
            dephased: MatrixJson::new(dephased.matrix()),
        })
    };
    match run() {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("finite values");
            // A closed pipe (e.g. `| head`) is not an error for a report.
            let _ = writeln!(io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn format_matrix(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut s = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:>8.4}", m[(i, j)].re)).collect();
        s.push_str(&format!("  [{} ]\n", row.join(" ")));
    }
    s
}

fn cmd_work_locking(kt: f64) -> ExitCode {
    let r = match work_locking_demo(kt) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    println!("kT = {kt}");
    println!(
        "single copy: W = {:.12e}  ({:.12e} bits)",
        r.single_copy.work, r.single_copy.work_bits
    );
    println!("two copies:  W = {:.12e}  ({:.12e} bits)", r.two_copy.work, r.two_copy.work_bits);
    println!("twirled product D(rho1 x rho2):");
    print!("{}", format_matrix(&r.twirled_product));
    println!("product of dephased states:");
    print!("{}", format_matrix(&r.product_of_dephased));
    ExitCode::SUCCESS
}

fn cmd_history(dim: usize, beta: f64) -> ExitCode {
    let run = || -> paw_coherence::Result<()> {
        let u = qubit_demo_universe(dim, beta)?;
        let step = unitary_evolution(u.system_hamiltonian(), u.beta())?;
        println!("clock dim = {}, beta = {}", u.clock_dim(), u.beta());
        println!("zero-energy residual = {:.3e}", u.zero_energy_residual());
        let mut expected = u.initial_state().to_vec();
        for m in 0..u.clock_dim() {
            let c = conditional_system_state(&u, m)?;
            println!(
                "tick {m:>3}: weight = {:.12}  fidelity = {:.15}",
                c.weight,
                fidelity(&c.normalized, &expected)
            );
            expected = step.apply(&expected);
        }
        Ok(())
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify => cmd_verify(),
        Command::Sweep { c3, step, out, format } => cmd_sweep(c3, step, out, format),
        Command::State { c1, c2, c3 } => cmd_state(c1, c2, c3),
        Command::WorkLocking { kt } => cmd_work_locking(kt),
        Command::History { dim, beta } => cmd_history(dim, beta),
    }
}
