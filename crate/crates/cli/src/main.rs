use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use uscut::eval::{default_suite, run_eval, timing_path, CaseStatus, Suite};
use uscut::overlay::render_overlay;
use uscut::service::{serve, ServiceConfig};
use uscut::stats::{table1_regression, TABLE1_PRINTED_USCUT};
use uscut_core::graph::{build_graph, sample_nodes};
use uscut_core::image::seed_stats;
use uscut_core::maxflow::write_dimacs;
use uscut_core::{segment_at, EchoClass, GrayImage, PhantomSpec, Point, TemplateConfig};

#[derive(Parser)]
#[command(name = "uscut", version, about = "Radial-template graph-cut segmentation of round lesions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment the lesion around one seed point.
    Segment {
        #[arg(long)]
        image: PathBuf,
        /// Seed position in pixels, as X,Y.
        #[arg(long, value_parser = parse_seed)]
        seed: Point,
        /// Pixel spacing in mm.
        #[arg(long)]
        spacing: f64,
        #[arg(long, default_value_t = 60)]
        rays: usize,
        #[arg(long, default_value_t = 40)]
        nodes: usize,
        #[arg(long, default_value_t = 80.0)]
        radius: f64,
        #[arg(long, default_value_t = 2)]
        delta: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the input image with the contour painted on.
        #[arg(long)]
        overlay: Option<PathBuf>,
        /// Also write the flow network in DIMACS max-flow format.
        #[arg(long)]
        dimacs: Option<PathBuf>,
    },
    /// Generate a synthetic phantom and its ground-truth mask.
    Phantom {
        #[arg(long, value_parser = parse_class)]
        class: EchoClass,
        /// Image size as WxH.
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long)]
        lesion_radius: f64,
        #[arg(long, default_value_t = 0.0)]
        speckle: f64,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        mask: PathBuf,
    },
    /// Segment every case of a phantom suite and tabulate the errors.
    Eval {
        /// TOML suite file; the built-in 15-case suite when omitted.
        #[arg(long)]
        suite: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Write the built-in suite as TOML and exit.
        #[arg(long)]
        dump_suite: Option<PathBuf>,
    },
    /// Recompute the clinical diameter table statistics.
    Table1,
    /// Serve an image and the segmentation endpoint over HTTP on localhost.
    Serve {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        port: u16,
        #[arg(long)]
        spacing: Option<f64>,
    },
}

fn parse_seed(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected X,Y")?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Point::new(num(x)?, num(y)?))
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WxH")?;
    let num = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((num(w)?, num(h)?))
}

fn parse_class(s: &str) -> Result<EchoClass, String> {
    s.parse().map_err(|e: uscut_core::Error| e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Segment {
            image,
            seed,
            spacing,
            rays,
            nodes,
            radius,
            delta,
            out,
            overlay,
            dimacs,
        } => {
            let img = GrayImage::load_pgm(&image)
                .with_context(|| format!("loading {}", image.display()))?
                .with_spacing(spacing)?;
            let cfg = TemplateConfig::new(rays, nodes, radius, delta)?;
            let res = segment_at(&img, seed, &cfg)?;
            std::fs::write(&out, res.to_text()).with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = overlay {
                render_overlay(&img, &res).save_pgm(&path)?;
            }
            if let Some(path) = dimacs {
                let stats = seed_stats(&img, seed, &cfg)?;
                let net = build_graph(&sample_nodes(&img, seed, &cfg)?, &stats);
                std::fs::write(&path, write_dimacs(&net))?;
            }
            println!(
                "diameter {:.2} mm, area {:.2} mm2, {:.2} ms",
                res.diameter_mm, res.area_mm2, res.elapsed_ms
            );
        }
        Command::Phantom {
            class,
            size: (width, height),
            lesion_radius,
            speckle,
            rng_seed,
            out,
            mask,
        } => {
            let spec = PhantomSpec::for_class(class, width, height, lesion_radius).with_speckle(speckle, rng_seed);
            let (img, truth) = spec.generate()?;
            img.save_pgm(&out)?;
            GrayImage::from_bytes(width, height, &truth.to_bytes())?.save_pgm(&mask)?;
            println!(
                "class {class} lesion centre ({}, {}) radius {lesion_radius} px",
                spec.center.x, spec.center.y
            );
        }
        Command::Eval { suite, out, dump_suite } => {
            if let Some(path) = dump_suite {
                std::fs::write(&path, default_suite().to_toml())?;
                return Ok(ExitCode::SUCCESS);
            }
            let suite = match suite {
                Some(path) => Suite::load(&path)?,
                None => default_suite(),
            };
            let report = run_eval(&suite, &out)?;
            for o in &report.outcomes {
                match &o.status {
                    CaseStatus::Ok => println!(
                        "{:<10} {} error {:+.3} mm dice {:.4}",
                        o.name,
                        o.echo_class,
                        o.error_mm().unwrap_or(f64::NAN),
                        o.dice.unwrap_or(f64::NAN)
                    ),
                    CaseStatus::Failed(msg) => println!("{:<10} {} failed: {msg}", o.name, o.echo_class),
                }
            }
            if let Some((signed, abs)) = report.summary.deviation {
                println!("mean deviation (true - measured) {signed:.3} mm, mean abs {abs:.3} mm");
            }
            println!("wrote {} and {}", out.display(), timing_path(&out).display());
        }
        Command::Table1 => {
            let report = table1_regression();
            println!("manual  mean {:.3} sd {:.3}", report.manual.0, report.manual.1);
            println!("uscut   mean {:.3} sd {:.3}", report.uscut.0, report.uscut.1);
            println!(
                "note: the printed uscut summary is {:.2} +- {:.2}; the column values recompute to {:.2} +- {:.2}",
                TABLE1_PRINTED_USCUT.0, TABLE1_PRINTED_USCUT.1, report.uscut.0, report.uscut.1
            );
            println!(
                "deviation (manual - uscut) mean signed {:.3} mm, mean abs {:.3} mm",
                report.deviation.0, report.deviation.1
            );
            for c in &report.checks {
                let mark = if c.passed() { "ok  " } else { "FAIL" };
                println!("{mark} {}: {} (expected {} +- {})", c.name, c.value, c.expected, c.tolerance);
            }
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Serve { image, port, spacing } => {
            if port == 0 {
                bail!("port must be nonzero");
            }
            let cfg = ServiceConfig {
                port,
                image_path: image,
                spacing,
                template: TemplateConfig::default(),
            };
            tokio::runtime::Runtime::new()?.block_on(serve(cfg))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
