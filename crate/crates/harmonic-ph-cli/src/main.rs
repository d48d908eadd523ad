use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use harmonic_ph::essential::{content, essential_report, sample_representatives};
use harmonic_ph::harmonic::harmonic_basis;
use harmonic_ph::io::{
    distance_csv, emit_barcode_json, emit_barcode_svg, parse_filtration, round12, terms, BarRecord, ParsedFiltration,
    SvgOptions,
};
use harmonic_ph::stability::{
    check_theorem_barcode, check_theorem_stable, check_theorem_stable_persistent, dist_filtration_detail,
    dist_filtration_functions, dist_persistent, dist_persistent_detail, ladder_angle,
};
use harmonic_ph::{linalg, oracle, Death, Error, HarmonicPersistence};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "harmonic-ph", version, about = "Harmonic persistent homology of filtered simplicial complexes")]
struct Cli {
    /// Relative rank tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Suppress parser warnings.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads for dense kernels, 0 for all cores.
    #[arg(long, global = true, env = "HARMONIC_PH_THREADS", default_value_t = 1, hide_env_values = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers of the full complex, exact and floating.
    Betti {
        file: PathBuf,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Orthonormal basis of the harmonic space of K_T.
    Harmonic {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        /// Filtration index, defaults to the last one.
        #[arg(long)]
        at: Option<usize>,
    },
    /// Harmonic barcode with initial and terminal subspaces.
    Barcode {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Essential simplices and content of one simple bar.
    Essential {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        /// Birth and death as `S,T`; `T` may be `inf`.
        #[arg(long)]
        bar: String,
        /// Random representatives whose content is compared with the harmonic one.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Distance between the harmonic filtrations of two files on one complex.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value_t = Kind::Step)]
        kind: Kind,
        #[arg(long, default_value_t = 2.0)]
        ell: f64,
    },
    /// Evaluate a stability inequality on two files.
    Stability {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum)]
        theorem: Theorem,
    },
    /// Principal angle between the harmonic spaces of two ladders.
    Ladder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Step,
    Persistent,
    Barcode,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Theorem {
    Stable,
    Persistent,
    Barcode,
}

enum Failure {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Lib(e) => match e {
                Error::Parse { .. } | Error::DuplicateSimplex { .. } | Error::NonMonotone { .. } => 2,
                Error::MalformedSimplex(_) => 2,
                Error::HypothesisViolated { .. }
                | Error::NotAdmissible { .. }
                | Error::NotSimple(_)
                | Error::ComplexMismatch
                | Error::NotNested => 3,
                _ => 1,
            },
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Io(m) => ("io", m.clone()),
            Failure::Lib(e) => (
                match self.code() {
                    2 => "parse",
                    3 => "hypothesis",
                    _ => "runtime",
                },
                e.to_string(),
            ),
        };
        json!({ "error": kind, "exit_code": self.code(), "message": message })
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", Failure::Usage(e.to_string().trim_end().to_string()).to_json());
            return ExitCode::from(1);
        }
    };
    linalg::set_threads(cli.threads);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code())
        }
    }
}

fn load(path: &Path, quiet: bool) -> std::result::Result<ParsedFiltration, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let parsed = parse_filtration(&text)?;
    if !quiet {
        for w in &parsed.warnings {
            eprintln!("warning: {}: {w}", path.display());
        }
    }
    Ok(parsed)
}

fn write_out(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn parse_bar(text: &str) -> std::result::Result<(usize, Death), Failure> {
    let bad = || Failure::Usage(format!("--bar expects S,T with T an index or 'inf', got '{text}'"));
    let (s, t) = text.split_once(',').ok_or_else(bad)?;
    let s = s.trim().parse().map_err(|_| bad())?;
    let t = match t.trim() {
        "inf" => Death::Infinite,
        t => Death::Finite(t.parse().map_err(|_| bad())?),
    };
    Ok((s, t))
}

fn death_json(t: Death) -> Value {
    match t {
        Death::Finite(t) => json!(t),
        Death::Infinite => json!("inf"),
    }
}

fn run(cli: &Cli) -> Outcome {
    let tol = cli.tol;
    match &cli.command {
        Command::Betti { file, p } => {
            let parsed = load(file, cli.quiet)?;
            let k = parsed.complex();
            let full = k.full();
            let dims: Vec<usize> = match p {
                Some(p) => vec![*p],
                None => (0..=k.max_dim().unwrap_or(0)).collect(),
            };
            let mut rows = Vec::new();
            for p in dims {
                let exact = oracle::betti(k, &full, p)?;
                let float = harmonic_basis::<f64>(k, &full, p, tol)?.dim();
                rows.push(json!({ "p": p, "oracle": exact, "floating": float, "agree": exact == float }));
            }
            print_json(&Value::Array(rows));
        }
        Command::Harmonic { file, p, at } => {
            let parsed = load(file, cli.quiet)?;
            let f = &parsed.filtration;
            let t = at.unwrap_or(f.last());
            if t > f.last() {
                return Err(Failure::Usage(format!("--at {t} exceeds the last index {}", f.last())));
            }
            let h = harmonic_basis::<f64>(f.complex(), &f.subcomplex(t), *p, tol)?;
            let basis: Vec<_> = h.space.vectors().iter().map(|v| terms(f.complex(), *p, v, tol)).collect();
            print_json(&json!({ "p": p, "at": t, "dim": h.dim(), "basis": basis }));
        }
        Command::Barcode { file, p, json: json_out, svg } => {
            let parsed = load(file, cli.quiet)?;
            let hp = HarmonicPersistence::<f64>::new(&parsed.filtration, *p, tol)?;
            let mut records = Vec::new();
            for bar in hp.barcode()? {
                let report = match bar.bar.is_simple() {
                    true => Some(essential_report(&hp, bar.bar.s, bar.bar.t)?),
                    false => None,
                };
                records.push(BarRecord::new(parsed.complex(), &bar, report.as_ref(), tol));
            }
            let text = emit_barcode_json(&records);
            match json_out {
                Some(path) => write_out(path, &(text + "\n"))?,
                None => println!("{text}"),
            }
            if let Some(path) = svg {
                let opts = SvgOptions { last_index: Some(parsed.filtration.last()), ..SvgOptions::default() };
                write_out(path, &emit_barcode_svg(&records, &opts))?;
            }
        }
        Command::Essential { file, p, bar, samples } => {
            let (s, t) = parse_bar(bar)?;
            let parsed = load(file, cli.quiet)?;
            let hp = HarmonicPersistence::<f64>::new(&parsed.filtration, *p, tol)?;
            let r = essential_report(&hp, s, t)?;
            let k = parsed.complex();
            let mut out = json!({
                "p": p,
                "s": s,
                "t": death_json(t),
                "multiplicity": r.bar.multiplicity,
                "harmonic_rep": terms(k, *p, &r.harmonic_rep.coeffs, tol),
                "essential": r.essential,
                "content": round12(r.content),
            });
            if *samples > 0 {
                let idx: Vec<usize> = r.essential.iter().filter_map(|x| k.index_of(x)).collect();
                let mut best = f64::NEG_INFINITY;
                for z in sample_representatives(&hp, s, t, *samples, cli.seed)? {
                    best = best.max(content(&z, &idx)?);
                }
                out["samples"] = json!(samples);
                out["sampled_max_content"] = json!(round12(best));
            }
            print_json(&out);
        }
        Command::Distance { a, b, p, kind, ell } => {
            let (fa, fb) = (load(a, cli.quiet)?, load(b, cli.quiet)?);
            if *ell < 1.0 {
                return Err(Failure::Usage(format!("--ell must be at least 1, got {ell}")));
            }
            let (value, detail) = match kind {
                Kind::Step => {
                    let f = fa.filtration.harmonic_function::<f64>(*p, tol)?;
                    let g = fb.filtration.harmonic_function::<f64>(*p, tol)?;
                    (dist_filtration_functions(&f, &g, *ell)?, dist_filtration_detail(&f, &g)?)
                }
                Kind::Persistent => {
                    let f = fa.filtration.harmonic_function::<f64>(*p, tol)?;
                    let g = fb.filtration.harmonic_function::<f64>(*p, tol)?;
                    (dist_persistent(&f, &g, *ell, tol)?, dist_persistent_detail(&f, &g, tol)?)
                }
                Kind::Barcode => {
                    let r = check_theorem_barcode(&fa.filtration, &fb.filtration, *p, tol)?;
                    (r.lhs, r.detail)
                }
            };
            println!("# distance {}", round12(value));
            print!("{}", distance_csv(&detail));
        }
        Command::Stability { a, b, p, theorem } => {
            let (fa, fb) = (load(a, cli.quiet)?, load(b, cli.quiet)?);
            let report = match theorem {
                Theorem::Stable => check_theorem_stable(&fa.function()?, &fb.function()?, *p, tol)?,
                Theorem::Persistent => check_theorem_stable_persistent(&fa.function()?, &fb.function()?, *p, tol)?,
                Theorem::Barcode => check_theorem_barcode(&fa.filtration, &fb.filtration, *p, tol)?,
            };
            print_json(&serde_json::to_value(&report).expect("report serializes"));
        }
        Command::Ladder { n, m } => {
            let r = ladder_angle(*n, *m, tol)?;
            let mut v = serde_json::to_value(&r).expect("ladder serializes");
            v["difference"] = json!((r.cos_measured - r.cos_closed_form).abs());
            print_json(&v);
        }
    }
    Ok(())
}
