use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use spencer_verify::{find, run_many, select, to_json, to_text, Ctx, TAGS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Run the registered verification cases.
#[derive(Parser, Debug)]
#[command(name = "verify")]
struct Args {
    /// Case id to run.
    case: Option<String>,
    /// Run every registered case.
    #[arg(long)]
    all: bool,
    /// Only cases carrying this tag.
    #[arg(long)]
    tag: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    samples: usize,
    /// Upper bound on cases run at once.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Record wall time per case (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
    /// List case ids and exit.
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if args.list {
        for c in select(args.tag.as_deref()) {
            println!("{:<32} {}", c.id, c.tags.join(","));
        }
        return ExitCode::SUCCESS;
    }
    if let Some(t) = &args.tag {
        if !TAGS.contains(&t.as_str()) {
            eprintln!("unknown tag '{t}' (expected one of {})", TAGS.join(", "));
            return ExitCode::from(2);
        }
    }
    let cases = match (&args.case, args.all || args.tag.is_some()) {
        (Some(id), false) => match find(id) {
            Some(c) => vec![c],
            None => {
                eprintln!("unknown case '{id}'");
                return ExitCode::from(2);
            }
        },
        (None, true) => select(args.tag.as_deref()),
        _ => {
            eprintln!("give either a case id or --all/--tag");
            return ExitCode::from(2);
        }
    };
    if args.jobs == 0 {
        eprintln!("--jobs must be at least 1");
        return ExitCode::from(2);
    }
    let ctx = Ctx { seed: args.seed, samples: args.samples };
    let reports = run_many(&cases, &ctx, args.jobs, args.timing);
    match args.format {
        Format::Text => print!("{}", to_text(&reports, args.timing)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&to_json(&reports)).expect("serializable report")),
    }
    if reports.iter().any(|r| r.status == spencer_verify::Status::Fail) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
