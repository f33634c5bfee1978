use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sketch2ui::loss;
use sketch2ui::{run_and_write, CliError, Mode, PipelineConfig};
use sketch2ui_core::{EmitOptions, Target};

/// Compile detector output over UI sketches into UI code.
#[derive(Parser)]
#[command(name = "sketch2ui", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve overlaps, infer layout and emit IR plus target code.
    Compile(PipelineArgs),
    /// Resolve overlaps and emit IR only.
    Resolve(PipelineArgs),
    /// Evaluate cross-entropy, balanced CE and focal loss, or run a gradient check.
    Loss(LossArgs),
    /// Compile, serve the output directory and live-reload on input changes.
    Serve(PipelineArgs),
}

#[derive(Args)]
struct PipelineArgs {
    /// Annotation CSV: file,x_min,y_min,x_max,y_max,class[,confidence]
    #[arg(long)]
    detections: PathBuf,
    /// Class map CSV: id,name
    #[arg(long)]
    classes: PathBuf,
    /// JSON rules overriding priorities, conflicts, relations and thresholds
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    confidence: f64,
    /// html or android
    #[arg(long, default_value = "html")]
    target: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Print the run report as JSON
    #[arg(long)]
    json_report: bool,
}

impl PipelineArgs {
    fn config(&self) -> Result<PipelineConfig, CliError> {
        let target = Target::from_name(&self.target)
            .ok_or_else(|| CliError::input(format!("--target `{}` must be html or android", self.target)))?;
        let config = PipelineConfig {
            detections_path: self.detections.clone(),
            classes_path: self.classes.clone(),
            rules_path: self.rules.clone(),
            confidence_threshold: self.confidence,
            target,
            out_dir: self.out.clone(),
            serve_port: self.port,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct LossArgs {
    /// Estimated probability of the positive class, in (0, 1)
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Ground truth: +1 or -1
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    gamma: f64,
    /// Sweep the analytic gradient against central finite differences
    #[arg(long)]
    gradcheck: bool,
}

fn pipeline(args: &PipelineArgs, mode: Mode) -> Result<(), CliError> {
    let config = args.config()?;
    let report = run_and_write(&config, mode, &EmitOptions::default())?;
    if args.json_report {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn loss_command(args: &LossArgs) -> Result<(), CliError> {
    if args.gradcheck {
        let result = loss::gradcheck();
        print!("{}", loss::gradcheck_report(&result));
        if result.max_rel_error > loss::GRADCHECK_TOLERANCE {
            return Err(CliError::input("gradient check exceeded tolerance"));
        }
        return Ok(());
    }
    let (Some(x), Some(z)) = (args.x, args.z.as_deref()) else {
        return Err(CliError::input("loss needs --x and --z (or --gradcheck)"));
    };
    print!("{}", loss::evaluate(x, z, args.alpha, args.gamma)?);
    Ok(())
}

fn serve_command(args: &PipelineArgs) -> Result<(), CliError> {
    let config = args.config()?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(format!("tokio runtime: {e}")))?;
    runtime.block_on(sketch2ui::serve::serve(config))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Compile(args) => pipeline(args, Mode::Compile),
        Command::Resolve(args) => pipeline(args, Mode::Resolve),
        Command::Loss(args) => loss_command(args),
        Command::Serve(args) => serve_command(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
