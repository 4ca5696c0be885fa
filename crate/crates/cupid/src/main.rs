use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cupid::{analyze_sweep, leaf_map_json, read_image, write_csv, write_image, Rayon};
use cupid_core::{
    deserialize, encode, partition_with, reconstruct, render_overlay, y_psnr, ObjectiveConfig,
    PartitionError, PixelBuffer, Weighting,
};

#[derive(Parser)]
#[command(name = "cupid", version, about = "Greedy entropy-driven cuboid partitioning and coding of images")]
struct Cli {
    /// Worker threads for split evaluation (0 = rayon default). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition an image and write the overlay and/or leaf map.
    Partition {
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        objective: ObjectiveArg,
        /// Image with every cuboid's border whitened.
        #[arg(long)]
        overlay: Option<PathBuf>,
        /// JSON list of leaf rectangles in preorder.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Encode an image into a .cupd stream.
    Encode {
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        objective: ObjectiveArg,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Rebuild the coarse frame from a .cupd stream (PGM or PPM).
    Decode {
        input: PathBuf,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Sweep cuboid counts and report bits, encode time and Y-PSNR as CSV.
    Analyze {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[command(flatten)]
        objective: ObjectiveArg,
        /// CSV destination; standard output when omitted.
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ObjectiveArg {
    #[arg(long, value_enum, default_value_t = Objective::Weighted)]
    objective: Objective,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Weighted,
    Unweighted,
}

impl From<&ObjectiveArg> for ObjectiveConfig {
    fn from(o: &ObjectiveArg) -> Self {
        ObjectiveConfig::new(match o.objective {
            Objective::Weighted => Weighting::PixelWeighted,
            Objective::Unweighted => Weighting::Unweighted,
        })
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Stream(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Stream(_) => 3,
        }
    }
}

fn load(path: &Path) -> Result<PixelBuffer, CliError> {
    read_image(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn check_n(n: usize, buf: &PixelBuffer) -> Result<(), CliError> {
    match n {
        0 => Err(PartitionError::NZero),
        n if n > buf.area() => Err(PartitionError::NTooLarge { n, area: buf.area() }),
        _ => Ok(()),
    }
    .map_err(|e| CliError::Usage(e.to_string()))
}

fn fmt_db(db: f64) -> String {
    format!("{db:.6}")
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Partition { input, n, objective, overlay, map } => {
            let buf = load(&input)?;
            check_n(n, &buf)?;
            let tree = partition_with(&buf, n, (&objective).into(), &Rayon)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(path) = overlay {
                let img = render_overlay(&buf, &tree).expect("tree built over this image");
                write_image(&path, &img).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            if let Some(path) = map {
                write(&path, leaf_map_json(&tree).as_bytes())?;
            }
            println!("n={n} leaves={}", tree.leaf_count());
        }
        Command::Encode { input, n, objective, output } => {
            let buf = load(&input)?;
            check_n(n, &buf)?;
            let encoded = encode(&buf, n, (&objective).into(), &Rayon)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            write(&output, encoded.stream.as_bytes())?;
            let psnr = y_psnr(&buf, &encoded.reconstruct()).expect("same geometry");
            println!("n={n} bits={} y_psnr={}", encoded.stream.bits(), fmt_db(psnr));
        }
        Command::Decode { input, output } => {
            let bytes = fs::read(&input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let (tree, desc) = deserialize(&bytes).map_err(|e| CliError::Stream(e.to_string()))?;
            let img = reconstruct(&tree, &desc).map_err(|e| CliError::Stream(e.to_string()))?;
            write_image(&output, &img).map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
        }
        Command::Analyze { input, n_list, objective, output } => {
            let buf = load(&input)?;
            for &n in &n_list {
                check_n(n, &buf)?;
            }
            let records = analyze_sweep(&buf, &n_list, (&objective).into())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let res = match &output {
                Some(path) => {
                    let file = fs::File::create(path)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    write_csv(&records, file)
                }
                None => write_csv(&records, std::io::stdout().lock()),
            };
            res.map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cupid: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
