use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cellcurv::flow::{run_flow, FlowConfig};
use cellcurv::io::{read_image, read_volume, write_field, FieldRef, Format, Normalization, OutputSpec, Target};
use cellcurv::planar::{
    combinatorial_ricci_edges, directional_map, edge_operators, edge_weights, pixel_weights, Direction,
};
use cellcurv::reference::{classical_gauss, classical_laplacian};
use cellcurv::sampling::{downsample, upsample};
use cellcurv::verify::oracle_check;
use cellcurv::voxel::ricci_edges_3d;
use cellcurv::{EdgeField, EdgeRule3d, Error, FaceRule3d, GrayImage, WeightScheme};
use clap::{Parser, Subcommand, ValueEnum};

/// Combinatorial Ricci curvature and Laplacian maps of grayscale images.
#[derive(Parser, Debug)]
#[command(name = "cellcurv", version)]
struct Cli {
    /// Weight scale w1.
    #[arg(long, global = true, default_value_t = 1.0)]
    w1: f64,
    /// Grid spacing w2 [default: 1 / max(H, W)].
    #[arg(long, global = true)]
    w2: Option<f64>,
    /// Output path (standard output if omitted). Edge fields in PGM or raw
    /// form are written as two files with `.h`/`.v` appended.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format [default: from the --out extension, else csv].
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Display normalization for PGM output.
    #[arg(long, global = true, value_enum, default_value_t = NormArg::Minmax)]
    normalize: NormArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Forman-Ricci curvature of each edge.
    Ricci {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DirArg::Edges)]
        direction: DirArg,
    },
    /// Combinatorial (unit-normalized) Ricci curvature.
    CombRicci {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DirArg::Edges)]
        direction: DirArg,
    },
    /// Edge Laplacian □₁, Bochner term B₁ or pixel Laplacian □₂.
    Laplacian {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = DirArg::Edges)]
        direction: DirArg,
    },
    /// Ricci curvature of every edge of a voxel volume.
    Ricci3d {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = EdgeRuleArg::MaxMinusMin)]
        edge_rule: EdgeRuleArg,
        #[arg(long, value_enum, default_value_t = FaceRuleArg::MeanHeight)]
        face_rule: FaceRuleArg,
    },
    /// Classical Gaussian curvature of the height surface.
    GaussRef { input: PathBuf },
    /// Five-point Laplacian of the height surface.
    LaplacianRef { input: PathBuf },
    /// Subdivide or fuse pixels; writes the resulting heights.
    Resample {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        factor: u8,
    },
    /// Ricci flow of edge weights; writes one file per step into --out.
    Flow {
        input: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        renormalize: bool,
        #[arg(long, default_value_t = 0.0)]
        floor: f64,
    },
    /// Compare the closed-form kernels with the generic enumeration on random images.
    OracleCheck {
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Pgm,
    Csv,
    Raw,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NormArg {
    None,
    Minmax,
    Signed,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum DirArg {
    H,
    V,
    Avg,
    Edges,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Box1,
    Bochner,
    Box2,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EdgeRuleArg {
    MaxMinusMin,
    StdDev,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FaceRuleArg {
    MeanHeight,
    AbsDiff,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Up,
    Down,
}

const ORACLE_TOLERANCE: f64 = 1e-10;

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn format_for(cli: &Cli) -> Format {
    if let Some(f) = cli.format {
        return match f {
            FormatArg::Pgm => Format::Pgm,
            FormatArg::Csv => Format::Csv,
            FormatArg::Raw => Format::RawF32,
        };
    }
    let ext = cli.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str());
    match ext {
        Some("pgm") => Format::Pgm,
        Some("raw" | "f32") => Format::RawF32,
        _ => Format::Csv,
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Pgm => "pgm",
        Format::Csv => "csv",
        Format::RawF32 => "raw",
    }
}

fn spec(cli: &Cli) -> OutputSpec {
    OutputSpec {
        format: format_for(cli),
        normalization: match cli.normalize {
            NormArg::None => Normalization::None,
            NormArg::Minmax => Normalization::MinMax,
            NormArg::Signed => Normalization::SignedSym,
        },
        target: cli.out.clone().map_or(Target::Stdout, Target::File),
    }
}

fn scheme(cli: &Cli) -> Result<WeightScheme, Failure> {
    Ok(WeightScheme::new(cli.w1, cli.w2)?)
}

fn emit_edges(field: &EdgeField, dir: DirArg, spec: &OutputSpec) -> Result<(), Failure> {
    let direction = match dir {
        DirArg::Edges => return Ok(write_field(FieldRef::Edge(field), spec)?),
        DirArg::H => Direction::Horizontal,
        DirArg::V => Direction::Vertical,
        DirArg::Avg => Direction::Average,
    };
    Ok(write_field(FieldRef::Pixel(&directional_map(field, direction)), spec)?)
}

fn spacing(image: &GrayImage, scheme: &WeightScheme) -> f64 {
    scheme.resolved_w2(image.height().max(image.width()))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = spec(cli);
    match &cli.command {
        Command::Ricci { input, direction } => {
            let ops = edge_operators(&read_image(input)?, &scheme(cli)?)?;
            emit_edges(&ops.ricci, *direction, &out)
        }
        Command::CombRicci { input, direction } => {
            let img = read_image(input)?;
            let s = scheme(cli)?;
            let field = combinatorial_ricci_edges(&edge_weights(&img, &s), &pixel_weights(&img, &s))?;
            emit_edges(&field, *direction, &out)
        }
        Command::Laplacian { input, kind, direction } => {
            let ops = edge_operators(&read_image(input)?, &scheme(cli)?)?;
            let field = match kind {
                KindArg::Box1 => &ops.box1,
                KindArg::Bochner => &ops.bochner,
                KindArg::Box2 => &ops.box2,
            };
            emit_edges(field, *direction, &out)
        }
        Command::Ricci3d {
            input,
            edge_rule,
            face_rule,
        } => {
            let s = WeightScheme {
                edge_rule_3d: match edge_rule {
                    EdgeRuleArg::MaxMinusMin => EdgeRule3d::MaxMinusMin,
                    EdgeRuleArg::StdDev => EdgeRule3d::StdDev,
                },
                face_rule_3d: match face_rule {
                    FaceRuleArg::MeanHeight => FaceRule3d::MeanHeight,
                    FaceRuleArg::AbsDiff => FaceRule3d::AbsDiff,
                },
                ..scheme(cli)?
            };
            let ric = ricci_edges_3d(&read_volume(input)?, &s)?;
            Ok(write_field(FieldRef::Edge3d(&ric), &out)?)
        }
        Command::GaussRef { input } => {
            let img = read_image(input)?;
            let k = classical_gauss(img.heights(), spacing(&img, &scheme(cli)?))?;
            Ok(write_field(FieldRef::Pixel(&k), &out)?)
        }
        Command::LaplacianRef { input } => {
            let img = read_image(input)?;
            let l = classical_laplacian(img.heights(), spacing(&img, &scheme(cli)?))?;
            Ok(write_field(FieldRef::Pixel(&l), &out)?)
        }
        Command::Resample { input, mode, factor } => {
            let img = read_image(input)?;
            let f = usize::from(*factor);
            let res = match mode {
                ModeArg::Up => upsample(&img, f)?,
                ModeArg::Down => downsample(&img, f)?,
            };
            Ok(write_field(FieldRef::Pixel(res.heights()), &out)?)
        }
        Command::Flow {
            input,
            steps,
            dt,
            renormalize,
            floor,
        } => {
            let Some(dir) = &cli.out else {
                return Err(Failure::Usage("flow needs --out DIR".into()));
            };
            let cfg = FlowConfig {
                dt: *dt,
                steps: *steps,
                floor: *floor,
                renormalize: *renormalize,
            };
            cfg.validate()?;
            let trace = run_flow(&read_image(input)?, &scheme(cli)?, &cfg)?;
            std::fs::create_dir_all(dir).map_err(|e| Failure::Data(format!("{}: {e}", dir.display())))?;
            for (k, field) in trace.iter().enumerate() {
                let target = Target::File(dir.join(format!("step_{k:04}.{}", extension(out.format))));
                write_field(FieldRef::Edge(field), &OutputSpec { target, ..out.clone() })?;
            }
            Ok(())
        }
        Command::OracleCheck { size, trials, seed } => {
            if *size == 0 || *trials == 0 {
                return Err(Failure::Usage("--size and --trials must be at least 1".into()));
            }
            let report = oracle_check(*size, *trials, *seed)?;
            let d = report.deviation;
            println!("size {size} trials {trials}");
            println!("ricci {:e}", d.ricci);
            println!("box1 {:e}", d.box1);
            println!("box2 {:e}", d.box2);
            println!("max deviation {:e}", d.max());
            if d.max() > ORACLE_TOLERANCE {
                return Err(Failure::Data(format!("deviation exceeds {ORACLE_TOLERANCE:e}")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
