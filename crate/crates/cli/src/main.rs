use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tilecraft::tiler::{parse_plc, Limits, SolveOutcome};
use tilecraft::voxel::{parse_pcs, render_layers, NamedPolycube, Polycube, Region};
use tilecraft::simulation::census;
use tilecraft::wang::parse_tiling;
use tilecraft::{
    compile, decode, find_min_torus, parse_tileset, solve, verify, AssembleOptions,
    PolycubeSet, SimulationError, WangTileSet,
};

#[derive(Parser, Debug)]
#[command(name = "tilecraft", version, about = "Wang tiles to polycube tilings and back")]
struct Cli {
    /// Worker threads for the solver and assembler (default: all cores).
    #[arg(long, global = true, env = "TILECRAFT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a Wang tile set into its six gadget polycubes.
    Compile {
        wts: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find the smallest periodic torus tiling of a tile set.
    Oracle {
        wts: PathBuf,
        #[arg(long)]
        max_period: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the polycube floor simulating a Wang torus tiling.
    Assemble {
        wts: PathBuf,
        wtt: PathBuf,
        pcs: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print piece counts, region dims and the verification verdict.
        #[arg(long)]
        report: bool,
        /// Assemble even if the Wang tiling has color mismatches.
        #[arg(long)]
        allow_invalid: bool,
    },
    /// Check that a placement file is an exact cover.
    Verify { pcs: PathBuf, plc: PathBuf },
    /// Search for a tiling of a box or torus.
    Solve {
        pcs: PathBuf,
        #[arg(long, num_args = 4, value_names = ["KIND", "X", "Y", "Z"])]
        region: Vec<String>,
        /// Maximum number of search nodes.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Read the simulated Wang tiling off an assembled floor.
    Decode {
        wts: PathBuf,
        pcs: PathBuf,
        plc: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw one piece as layer diagrams.
    Render {
        pcs: PathBuf,
        #[arg(long)]
        piece: String,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// oracle → compile → assemble → verify → decode in one go.
    Roundtrip {
        wts: PathBuf,
        #[arg(long)]
        max_period: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_set(path: &Path) -> Result<WangTileSet> {
    parse_tileset(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_pieces(path: &Path) -> Result<Vec<NamedPolycube>> {
    parse_pcs(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Compile `set` and check the result against the pieces stored in `pcs`.
fn matching_pieces(set: &WangTileSet, pcs: &Path) -> Result<Option<PolycubeSet>> {
    let stored = load_pieces(pcs)?;
    let compiled = compile(set)?;
    if compiled.named() != stored {
        eprintln!("error: {}", SimulationError::PieceMismatch);
        return Ok(None);
    }
    Ok(Some(compiled))
}

fn parse_region(args: &[String]) -> Result<Region> {
    let dims: Vec<i64> = args[1..]
        .iter()
        .map(|s| s.parse::<i64>().with_context(|| format!("bad region dimension `{s}`")))
        .collect::<Result<_>>()?;
    if dims.iter().any(|&d| d <= 0) {
        bail!("region dimensions must be positive");
    }
    match args[0].as_str() {
        "torus" => Ok(Region::torus(dims[0], dims[1], dims[2])),
        "box" => Ok(Region::boxed(dims[0], dims[1], dims[2])),
        other => bail!("unknown region kind `{other}` (expected torus or box)"),
    }
}

fn svg(p: &Polycube) -> String {
    const CELL: i64 = 6;
    const PAD: i64 = 8;
    let [ex, ey, ez] = p.extent();
    let width = ez * (ex * CELL + PAD) + PAD;
    let height = ey * CELL + 2 * PAD;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for z in 0..ez {
        let ox = PAD + z * (ex * CELL + PAD);
        let _ = writeln!(
            out,
            r##"<rect x="{ox}" y="{PAD}" width="{}" height="{}" fill="none" stroke="#999"/>"##,
            ex * CELL,
            ey * CELL
        );
        for v in p.cells().iter().filter(|v| v.z == z) {
            let _ = writeln!(
                out,
                r##"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="#555"/>"##,
                ox + v.x * CELL,
                PAD + (ey - 1 - v.y) * CELL
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Compile { wts, output } => {
            let set = load_set(&wts)?;
            let pcs = compile(&set)?;
            emit(output.as_deref(), &pcs.to_pcs())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            wts,
            max_period,
            output,
        } => {
            let set = load_set(&wts)?;
            match find_min_torus(&set, max_period)? {
                Some(t) => {
                    emit(output.as_deref(), &t.to_wtt())?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("none");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Assemble {
            wts,
            wtt,
            pcs,
            output,
            report,
            allow_invalid,
        } => {
            let set = load_set(&wts)?;
            let w = parse_tiling(&read(&wtt)?)
                .with_context(|| format!("parsing {}", wtt.display()))?;
            let Some(compiled) = matching_pieces(&set, &pcs)? else {
                return Ok(ExitCode::from(1));
            };
            let opts = AssembleOptions {
                allow_invalid,
                ..AssembleOptions::default()
            };
            let t = match tilecraft::assemble(&set, &compiled, &w, opts) {
                Ok(t) => t,
                Err(
                    e @ (SimulationError::EdgeMismatch { .. }
                    | SimulationError::InvalidTiling(_)),
                ) => {
                    println!("{e}");
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(e.into()),
            };
            emit(output.as_deref(), &t.to_plc())?;
            if report {
                let defects = verify(&compiled.named(), &t)?;
                let c = census(&t, w.p * w.q);
                let d = t.region.dims;
                let mut r = String::new();
                let _ = writeln!(r, "region {} {} {} {}", t.region.kind, d[0], d[1], d[2]);
                let _ = writeln!(r, "cells {}", c.cells);
                let _ = writeln!(r, "placements {}", t.placements.len());
                for (name, n) in &c.per_cell {
                    let _ = writeln!(r, "per_cell {name} {n}");
                }
                let verdict = if defects.is_empty() { "ok" } else { "defects" };
                let _ = writeln!(r, "verify {verdict} {}", defects.len());
                // stdout carries the floor when no -o is given
                if output.is_some() {
                    print!("{r}");
                } else {
                    eprint!("{r}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { pcs, plc } => {
            let pieces = load_pieces(&pcs)?;
            let t = parse_plc(&read(&plc)?).with_context(|| format!("parsing {}", plc.display()))?;
            let defects = verify(&pieces, &t)?;
            match defects.first() {
                None => {
                    println!("OK");
                    Ok(ExitCode::SUCCESS)
                }
                Some(d) => {
                    println!("{d}");
                    eprintln!("{} defects", defects.len());
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Solve {
            pcs,
            region,
            budget,
            output,
        } => {
            let pieces = load_pieces(&pcs)?;
            let region = parse_region(&region)?;
            let limits = Limits {
                max_nodes: budget,
                ..Limits::default()
            };
            match solve(&pieces, region, limits)? {
                SolveOutcome::Sat(t) => {
                    match output {
                        Some(p) => {
                            emit(Some(&p), &t.to_plc())?;
                            println!("sat");
                        }
                        None => emit(None, &t.to_plc())?,
                    }
                    Ok(ExitCode::SUCCESS)
                }
                SolveOutcome::Unsat => {
                    println!("unsat");
                    Ok(ExitCode::from(1))
                }
                SolveOutcome::BudgetExceeded => {
                    println!("budget-exceeded");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Decode {
            wts,
            pcs,
            plc,
            output,
        } => {
            let set = load_set(&wts)?;
            let t = parse_plc(&read(&plc)?).with_context(|| format!("parsing {}", plc.display()))?;
            let Some(compiled) = matching_pieces(&set, &pcs)? else {
                return Ok(ExitCode::from(1));
            };
            match decode(&set, &compiled, &t) {
                Ok(w) => {
                    emit(output.as_deref(), &w.to_wtt())?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ SimulationError::NotReductionShaped(_)) => {
                    println!("{e}");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Render {
            pcs,
            piece,
            format,
        } => {
            let pieces = load_pieces(&pcs)?;
            let Some(p) = pieces.iter().find(|p| p.name == piece) else {
                bail!("no piece named `{piece}` in {}", pcs.display());
            };
            let text = match format {
                Format::Ascii => render_layers(&p.polycube),
                Format::Svg => svg(&p.polycube),
            };
            emit(None, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Roundtrip { wts, max_period } => {
            let set = load_set(&wts)?;
            let Some(w) = find_min_torus(&set, max_period)? else {
                println!("none");
                return Ok(ExitCode::from(1));
            };
            let pcs = compile(&set)?;
            let t = tilecraft::assemble(&set, &pcs, &w, AssembleOptions::default())?;
            // go through the text formats, as separate invocations would
            let pieces = parse_pcs(&pcs.to_pcs())?;
            let t = parse_plc(&t.to_plc())?;
            let defects = verify(&pieces, &t)?;
            if let Some(d) = defects.first() {
                println!("{d}");
                return Ok(ExitCode::from(1));
            }
            let back = decode(&set, &pcs, &t)?;
            if back != w {
                println!("mismatch: decoded tiling differs from the oracle's");
                return Ok(ExitCode::from(1));
            }
            println!("OK");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        // reader went away (e.g. `| head`)
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
