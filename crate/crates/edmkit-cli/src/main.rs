//! Command-line front end for the EDM toolkit.
//!
//! Exit codes: 0 success (affirmative verdict), 1 valid input with a
//! negative verdict (not an EDM, not spherical), 2 usage, parse or
//! validation errors.

mod matrix_file;
mod report;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use edmkit::generators::{
    collinear_sq_edm, hypercube_hamming, manhattan_grid, path_edm, random_spherical_edm,
};
use edmkit::qap::{self, QapInstance, BRUTE_FORCE_CAP};
use edmkit::{
    classify, composed_sphere, kron_sum_edm, DistanceMatrix, Error, SymMatrix, Tolerance,
};

use matrix_file::{read_matrix, write_matrix};
use report::{classification_json, classification_text, json_f64};

#[derive(Parser)]
#[command(name = "edmkit", version, about = "Euclidean distance matrix toolkit")]
struct Cli {
    /// Relative tolerance for rank and PSD decisions.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_REL)]
    tol: f64,

    /// Maximum order for generated and composed matrices.
    #[arg(long, global = true, default_value_t = edmkit::DEFAULT_MAX_ORDER)]
    max_order: usize,

    /// Print machine-readable JSON where the command supports it.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the randomized generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a structured distance matrix.
    #[command(subcommand)]
    Gen(GenFamily),

    /// Classify a matrix read from a file.
    Classify {
        /// Matrix file (plain text or JSON document form).
        input: PathBuf,
    },

    /// Compose two EDMs by Kronecker sum and write the result.
    Compose {
        input1: PathBuf,
        input2: PathBuf,
        /// Output file for the composed matrix.
        #[arg(short, long)]
        out: PathBuf,
    },

    /// Evaluate a QAP instance: spectral lower bound and/or exact optimum.
    Qap {
        /// Flow matrix file (symmetric).
        flow: PathBuf,
        /// Distance matrix file.
        dist: PathBuf,
        /// Print the spectral shift lower bound (requires a spherical EDM).
        #[arg(long)]
        bound: bool,
        /// Solve exactly by exhaustive scan (order <= 8).
        #[arg(long)]
        solve: bool,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Path-graph distances |i - j| (a 1 x n grid).
    Path {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Manhattan distances on an m x n rectangular grid.
    Grid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Hamming distances between all 2^r hypercube vertices.
    Hypercube {
        #[arg(long)]
        r: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Squared distances of collinear points (non-spherical for n >= 3).
    Collinear {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Pairwise squared distances of random points on a hypersphere.
    RandomSpherical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn verdict_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let tol = Tolerance::new(cli.tol).map_err(|e| usage_error(e.to_string()))?;
    match &cli.command {
        Command::Gen(family) => cmd_gen(cli, family),
        Command::Classify { input } => cmd_classify(cli, &tol, input),
        Command::Compose { input1, input2, out } => cmd_compose(cli, &tol, input1, input2, out),
        Command::Qap {
            flow,
            dist,
            bound,
            solve,
        } => cmd_qap(cli, &tol, flow, dist, *bound, *solve),
    }
}

fn cmd_gen(cli: &Cli, family: &GenFamily) -> Result<u8, Failure> {
    let check_order = |order: usize| {
        if order > cli.max_order {
            Err(usage_error(format!(
                "order {order} exceeds --max-order {}",
                cli.max_order
            )))
        } else {
            Ok(())
        }
    };
    let (dist, out) = match family {
        GenFamily::Path { n, out } => {
            if *n < 1 {
                return Err(usage_error("path needs --n >= 1"));
            }
            check_order(*n)?;
            (path_edm(*n).dist, out)
        }
        GenFamily::Grid { m, n, out } => {
            if *m < 1 || *n < 1 {
                return Err(usage_error("grid needs --m >= 1 and --n >= 1"));
            }
            let d = manhattan_grid(*m, *n, cli.max_order)
                .map_err(|e| usage_error(e.to_string()))?;
            (d, out)
        }
        GenFamily::Hypercube { r, out } => {
            if *r < 1 {
                return Err(usage_error("hypercube needs --r >= 1"));
            }
            let d = hypercube_hamming(*r, cli.max_order)
                .map_err(|e| usage_error(e.to_string()))?
                .dist;
            (d, out)
        }
        GenFamily::Collinear { n, out } => {
            if *n < 3 {
                return Err(usage_error("collinear needs --n >= 3"));
            }
            check_order(*n)?;
            (collinear_sq_edm(*n), out)
        }
        GenFamily::RandomSpherical { n, r, out } => {
            if *r < 1 || *n < r + 1 {
                return Err(usage_error("random-spherical needs --r >= 1 and --n >= r + 1"));
            }
            check_order(*n)?;
            let d = random_spherical_edm(*n, *r, cli.seed)
                .map_err(|e| usage_error(e.to_string()))?;
            (d, out)
        }
    };
    write_distance_matrix(out.as_deref(), &dist)?;
    Ok(0)
}

fn write_distance_matrix(out: Option<&Path>, d: &DistanceMatrix) -> Result<(), Failure> {
    let entry = |i: usize, j: usize| d[(i, j)];
    let result = match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| usage_error(format!("cannot create {}: {e}", path.display())))?;
            write_matrix(&mut BufWriter::new(file), d.order(), entry)
        }
        None => write_matrix(&mut std::io::stdout().lock(), d.order(), entry),
    };
    result.map_err(|e| usage_error(format!("write failed: {e}")))
}

fn read_distance(path: &Path) -> Result<DistanceMatrix, Failure> {
    let raw = read_matrix(path).map_err(usage_error)?;
    DistanceMatrix::new(raw.order, raw.entries)
        .map_err(|e| usage_error(format!("{}: {e}", path.display())))
}

fn cmd_classify(cli: &Cli, tol: &Tolerance, input: &Path) -> Result<u8, Failure> {
    let d = read_distance(input)?;
    let c = classify(&d, tol);
    if cli.json {
        println!("{}", classification_json(&c, tol.rel()));
    } else {
        print!("{}", classification_text(&c, tol.rel()));
    }
    Ok(if c.verdict.is_edm { 0 } else { 1 })
}

fn cmd_compose(
    cli: &Cli,
    tol: &Tolerance,
    input1: &Path,
    input2: &Path,
    out: &Path,
) -> Result<u8, Failure> {
    let d1 = read_distance(input1)?;
    let d2 = read_distance(input2)?;
    let composed = kron_sum_edm(&d1, &d2, tol, cli.max_order).map_err(|e| match e {
        Error::NotEdm { .. } => verdict_error(format!("composition rejected: {e}")),
        other => usage_error(other.to_string()),
    })?;
    write_distance_matrix(Some(out), &composed)?;

    let s1 = classify(&d1, tol).sphere;
    let s2 = classify(&d2, tol).sphere;
    let sphere = match (s1, s2) {
        (Some(a), Some(b)) => Some(composed_sphere(&a, &b)),
        _ => None,
    };
    if cli.json {
        let (radius_sq, min_shift) = sphere
            .map(|s| (json_f64(s.radius_sq), json_f64(s.min_shift)))
            .unwrap_or_else(|| ("null".into(), "null".into()));
        println!(
            "{{\n  \"order\": {},\n  \"radius_sq\": {},\n  \"min_shift\": {}\n}}",
            composed.order(),
            radius_sq,
            min_shift
        );
    } else if let Some(s) = sphere {
        println!("radius_sq: {}", s.radius_sq);
    }
    Ok(0)
}

fn cmd_qap(
    cli: &Cli,
    tol: &Tolerance,
    flow_path: &Path,
    dist_path: &Path,
    bound: bool,
    solve: bool,
) -> Result<u8, Failure> {
    if !bound && !solve {
        return Err(usage_error("pass --bound and/or --solve"));
    }
    let raw = read_matrix(flow_path).map_err(usage_error)?;
    let flow = SymMatrix::new(raw.order, raw.entries)
        .map_err(|e| usage_error(format!("{}: {e}", flow_path.display())))?;
    let dist = read_distance(dist_path)?;
    let inst = QapInstance::new(flow, dist).map_err(|e| usage_error(e.to_string()))?;
    let n = inst.order();
    if solve && n > BRUTE_FORCE_CAP {
        return Err(usage_error(format!(
            "--solve handles orders up to {BRUTE_FORCE_CAP}, got {n}"
        )));
    }

    let bound_report = if bound {
        Some(
            qap::shift_lower_bound(&inst, tol)
                .map_err(|e| verdict_error(format!("{}: {e}", dist_path.display())))?,
        )
    } else {
        None
    };
    let optimum = if solve {
        Some(qap::brute_force(&inst).map_err(|e| usage_error(e.to_string()))?)
    } else {
        None
    };

    if cli.json {
        let mut sections = vec![format!("  \"order\": {n}")];
        if let Some(r) = &bound_report {
            let sa: Vec<String> = r.spectrum_a.iter().map(|v| json_f64(*v)).collect();
            let ss: Vec<String> = r.spectrum_s.iter().map(|v| json_f64(*v)).collect();
            sections.push(format!(
                concat!(
                    "  \"bound\": {{\n",
                    "    \"lower_bound\": {},\n",
                    "    \"shift\": {},\n",
                    "    \"spectrum_A\": [{}],\n",
                    "    \"spectrum_S\": [{}],\n",
                    "    \"method\": \"{}\"\n",
                    "  }}"
                ),
                json_f64(r.lower_bound),
                json_f64(r.shift),
                sa.join(", "),
                ss.join(", "),
                r.method
            ));
        }
        if let Some(opt) = &optimum {
            let perm: Vec<String> = opt.permutation.iter().map(|p| (p + 1).to_string()).collect();
            sections.push(format!(
                "  \"solve\": {{\n    \"optimum\": {},\n    \"permutation\": [{}]\n  }}",
                json_f64(opt.value),
                perm.join(", ")
            ));
        }
        println!("{{\n{}\n}}", sections.join(",\n"));
    } else {
        if let Some(r) = &bound_report {
            println!("lower_bound: {}", r.lower_bound);
            println!("shift: {}", r.shift);
            let sa: Vec<String> = r.spectrum_a.iter().map(|v| v.to_string()).collect();
            let ss: Vec<String> = r.spectrum_s.iter().map(|v| v.to_string()).collect();
            println!("spectrum_A: [{}]", sa.join(", "));
            println!("spectrum_S: [{}]", ss.join(", "));
            println!("method: {}", r.method);
        }
        if let Some(opt) = &optimum {
            println!("optimum: {}", opt.value);
            let perm: Vec<String> = opt.permutation.iter().map(|p| (p + 1).to_string()).collect();
            println!("permutation: ({})", perm.join(", "));
        }
    }
    Ok(0)
}
