use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use advac::analysis::{reflection_coefficient, symbol_eigen, toy_1d_model, PlaneWaveContext};
use advac::config::SimulationConfig;
use advac::flow::FlowState;
use advac::harness::{
    l2_error, physical_reference, run_pbm1, run_pbm2, run_physical_against, study_flows, ErrorSeries, ExperimentKind, ExperimentSpec,
};
use advac::probe::ProbeSeries;
use advac::run::run;
use advac::solver::TimeProfile;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "advac", version, about = "Advective acoustics with Lorentz-transformed absorbing layers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a key = value config file.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Error time series between two probe CSVs (the second is the reference).
    Compare {
        series: PathBuf,
        reference: PathBuf,
        /// Write `error.csv` here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Analyze(Analyze),
    /// Layer experiments and the layer-efficiency study.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum Analyze {
    /// Eigenpairs of the principal symbol and a basis of ker(M²).
    Symbol {
        #[arg(long, allow_hyphen_values = true)]
        kx: f64,
        #[arg(long, allow_hyphen_values = true)]
        ky: f64,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
    },
    /// The one-dimensional layer model driven by ψ(t).
    Toy1d {
        #[arg(long)]
        sigma1: f64,
        #[arg(long)]
        sigma2: f64,
        /// zero, constant, sine:<omega>, decay:<rate> or pulse:<center>,<width>.
        #[arg(long, default_value = "constant", value_parser = parse_profile)]
        psi: TimeProfile,
        /// Defaults to 40/min(σ1, σ2).
        #[arg(long)]
        t_end: Option<f64>,
        /// Defaults to 0.01/max(σ1, σ2).
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Plane-wave reflection at an interface between two damping rates.
    Reflect {
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        sigma1: f64,
        #[arg(long)]
        sigma2: f64,
        /// Incidence angle from the interface normal, in radians.
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// pbm1, pbm2 or physical.
    kind: ExperimentKind,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Layer thicknesses in cells; the layer experiments use the first.
    #[arg(long, value_delimiter = ',')]
    layers: Option<Vec<usize>>,
    /// Background flow `u0,v0`; repeat for several. Defaults to the four
    /// study flows for the physical study.
    #[arg(long, value_parser = parse_flow, allow_hyphen_values = true)]
    flow: Vec<(f64, f64)>,
}

fn parse_profile(s: &str) -> Result<TimeProfile, String> {
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"));
    Ok(match name {
        "zero" => TimeProfile::Zero,
        "constant" => TimeProfile::Constant,
        "sine" => TimeProfile::Sine { omega: num(arg)? },
        "decay" => TimeProfile::Decay { rate: num(arg)? },
        "pulse" => {
            let (c, w) = arg.split_once(',').ok_or("pulse needs <center>,<width>")?;
            TimeProfile::Pulse { center: num(c)?, width: num(w)? }
        }
        _ => return Err(format!("unknown profile '{s}'")),
    })
}

fn parse_flow(s: &str) -> Result<(f64, f64), String> {
    let (u, v) = s.split_once(',').ok_or("expected u0,v0")?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"));
    Ok((num(u)?, num(v)?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn read_series(path: &Path) -> Result<ProbeSeries> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(ProbeSeries::read_csv(BufReader::new(file))?)
}

fn probe_file(series: &ProbeSeries) -> String {
    format!("probe_{}_{}.csv", series.location.0, series.location.1)
}

fn write_probes(dir: &Path, series: &[ProbeSeries]) -> Result<()> {
    for s in series {
        s.write_csv(create(&dir.join(probe_file(s)))?)?;
    }
    Ok(())
}

fn cmd_run(config: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let config: SimulationConfig = text.parse()?;
    let output = run(&config)?;
    fs::create_dir_all(out)?;
    write_probes(out, &output.probes)?;
    for (k, snap) in output.snapshots.iter().enumerate() {
        snap.write(create(&out.join(format!("snapshot_{k:04}.txt")))?)?;
    }
    println!("{} steps, dt = {:e}, {} probes, {} snapshots written to {}", config.steps, output.dt, output.probes.len(), output.snapshots.len(), out.display());
    Ok(())
}

fn write_comparison<W: Write>(mut w: W, e: &ErrorSeries) -> Result<()> {
    writeln!(w, "step,time,abs_error,l2,linf")?;
    let mut linf = 0.0f64;
    for k in 0..e.steps.len() {
        linf = linf.max(e.abs[k]);
        writeln!(w, "{},{:e},{:e},{:e},{:e}", e.steps[k], e.times[k], e.abs[k], e.running_l2[k], linf)?;
    }
    Ok(())
}

fn cmd_compare(series: &Path, reference: &Path, out: Option<&Path>) -> Result<()> {
    let e = l2_error(&read_series(series)?, &read_series(reference)?)?;
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_comparison(create(&dir.join("error.csv"))?, &e)?;
        }
        None => write_comparison(std::io::stdout().lock(), &e)?,
    }
    let linf = e.abs.iter().fold(0.0f64, |m, v| m.max(*v));
    eprintln!("L2 = {:e}, Linf = {:e}", e.l2(), linf);
    Ok(())
}

fn complex(z: Complex64) -> String {
    format!("{:e},{:e}", z.re, z.im)
}

fn cmd_analyze(which: Analyze) -> Result<()> {
    match which {
        Analyze::Symbol { kx, ky, c0 } => {
            let d = symbol_eigen(kx, ky, c0)?;
            println!("kind,lambda_re,lambda_im,p_x_re,p_x_im,p_y_re,p_y_im,xi_re,xi_im,zeta_re,zeta_im");
            let zero = Complex64::new(0.0, 0.0);
            let rows = d.eigenvalues.iter().zip(&d.eigenvectors).map(|(l, v)| ("eigen", *l, v)).chain(d.kernel_m2.iter().map(|v| ("kernel_m2", zero, v)));
            for (kind, l, v) in rows {
                let v: Vec<String> = v.iter().map(|z| complex(*z)).collect();
                println!("{kind},{},{}", complex(l), v.join(","));
            }
        }
        Analyze::Toy1d { sigma1, sigma2, psi, t_end, dt } => {
            let t_end = t_end.unwrap_or(40.0 / sigma1.min(sigma2));
            let dt = dt.unwrap_or(0.01 / sigma1.max(sigma2));
            let s = toy_1d_model(sigma1, sigma2, psi, t_end, dt)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "time,u,v")?;
            for k in 0..s.times.len() {
                writeln!(out, "{:e},{:e},{:e}", s.times[k], s.u[k], s.v[k])?;
            }
        }
        Analyze::Reflect { omega, sigma1, sigma2, angle, c0 } => {
            let ctx = PlaneWaveContext::from_angle(omega, c0, angle, sigma1, sigma2);
            let r = reflection_coefficient(&ctx, ctx.ky, ctx.ky)?;
            println!("kx = {:e}, ky = {:e}", ctx.kx, ctx.ky);
            println!("R = {:e} {:+e}i, |R| = {:e}", r.r.re, r.r.im, r.r.norm());
            println!("T = {:e} {:+e}i, |T| = {:e}", r.t.re, r.t.im, r.t.norm());
        }
    }
    Ok(())
}

fn flow_tag((u, v): (f64, f64)) -> String {
    format!("flow_{u:.4}_{v:.4}")
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let mut spec = ExperimentSpec::for_kind(args.kind);
    fs::create_dir_all(&args.out)?;
    if let Some(layers) = &args.layers {
        if layers.is_empty() {
            bail!("--layers needs at least one value");
        }
        spec.layer_sweep = layers.clone();
        spec.l_pml = layers[0];
    }
    match args.kind {
        ExperimentKind::Pbm1 | ExperimentKind::Pbm2 => {
            if !args.flow.is_empty() {
                bail!("the layer experiments run in a fluid at rest; --flow applies to the physical study");
            }
            let series = if args.kind == ExperimentKind::Pbm1 { run_pbm1(&spec)? } else { run_pbm2(&spec)? };
            write_probes(&args.out, &series)?;
            let mut summary = create(&args.out.join("summary.csv"))?;
            writeln!(summary, "x,y,max_abs_p,final_p,final_xi,final_zeta")?;
            for s in &series {
                let n = s.len() - 1;
                let peak = s.p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                writeln!(summary, "{},{},{:e},{:e},{:e},{:e}", s.location.0, s.location.1, peak, s.p[n], s.xi[n], s.zeta[n])?;
            }
            println!("{} probes over {} steps written to {}", series.len(), spec.steps, args.out.display());
        }
        ExperimentKind::Physical => {
            let flows = if args.flow.is_empty() { study_flows().to_vec() } else { args.flow.clone() };
            let mut summary = create(&args.out.join("summary.csv"))?;
            writeln!(summary, "layers,u0,v0,l2")?;
            for (u0, v0) in flows {
                let flow = FlowState::new(u0, v0, 1.0, 1.0)?;
                let dir = args.out.join(flow_tag((u0, v0)));
                fs::create_dir_all(&dir)?;
                let reference = physical_reference(&spec, &flow)?;
                reference.write_csv(create(&dir.join("reference.csv"))?)?;
                for &layers in &spec.layer_sweep {
                    let result = run_physical_against(&spec, layers, &flow, &reference)?;
                    let sub = dir.join(format!("layers_{layers}"));
                    fs::create_dir_all(&sub)?;
                    result.probe.write_csv(create(&sub.join(probe_file(&result.probe)))?)?;
                    result.error.write_csv(create(&sub.join("error_l2.csv"))?)?;
                    writeln!(summary, "{layers},{u0},{v0},{:e}", result.error.l2())?;
                    println!("flow ({u0}, {v0}), {layers} layers: L2 = {:e}", result.error.l2());
                }
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { config, out } => cmd_run(&config, &out),
        Command::Compare { series, reference, out } => cmd_compare(&series, &reference, out.as_deref()),
        Command::Analyze(which) => cmd_analyze(which),
        Command::Experiment(args) => cmd_experiment(args),
    }
}
