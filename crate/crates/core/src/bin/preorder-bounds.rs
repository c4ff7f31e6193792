use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use preorder_bounds::closedform::{lexi_high_homogeneous_bracket, lexi_low_homogeneous, optimal_pointwise_homogeneous};
use preorder_bounds::harness::{
    exact_coverage, mc_coverage, run_campaign, tabulate, verify_agreement, verify_consistency, verify_sandwich,
    BoundMethod, CampaignConfig,
};
use preorder_bounds::oracle::pessimal_bound_oracle;
use preorder_bounds::quantile_approx::quantile_bound_with;
use preorder_bounds::{Distribution, OracleConfig, OrderSelector, Sample, SupportGrid, TailConvention, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "preorder-bounds", version, about = "Order-consistent lower confidence bounds on a bounded mean")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    s_min: f64,
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    s_max: f64,
    /// Number of grid points.
    #[arg(long, global = true, default_value_t = 2)]
    m: usize,
    /// Sample size.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    #[arg(long, global = true, default_value_t = 0.05)]
    alpha: f64,
    /// Sample values as CSV or a JSON array, or a path to a file holding them.
    #[arg(long, global = true)]
    sample: Option<String>,
    /// lexi-low, lexi-high, quantile:<i> or pointwise.
    #[arg(long, global = true)]
    order: Option<OrderSelector>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-3)]
    resolution: f64,
    #[arg(long, global = true, default_value_t = 1e-4)]
    epsilon: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Pointwise,
    LexiLow,
    LexiHighBracket,
    Quantile,
}

#[derive(Clone, Copy, ValueEnum)]
enum Campaign {
    Sandwich,
    Consistency,
    Agreement,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form bounds at S_i, or the quantile approximation at --sample.
    Bound {
        #[arg(long, value_enum)]
        method: Method,
        /// Grid index for the closed forms; quantile index for `quantile`.
        #[arg(long)]
        i: usize,
        #[arg(long)]
        paper_literal_tail: bool,
    },
    /// Brute-force pessimal bound at --sample under --order.
    Oracle,
    /// Coverage of a bound under a distribution on the grid.
    Coverage {
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        #[arg(long)]
        mc: bool,
        /// Masses over the grid as a JSON array; uniform if omitted.
        #[arg(long)]
        dist: Option<String>,
        /// trivial, pointwise-closed-form, quantile:<i> or oracle (uses --order).
        #[arg(long, default_value = "oracle")]
        bound: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Structural checks.
    Verify {
        #[arg(value_enum)]
        campaign: Campaign,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
}

impl Global {
    fn grid(&self) -> Result<SupportGrid> {
        Ok(SupportGrid::new(self.s_min, self.s_max, self.m)?)
    }

    fn oracle_config(&self) -> OracleConfig {
        OracleConfig::with_resolution(self.resolution)
    }

    fn sample(&self) -> Result<Sample> {
        let raw = self.sample.as_deref().context("--sample is required")?;
        let text = if Path::new(raw).is_file() {
            std::fs::read_to_string(raw).with_context(|| format!("reading {raw}"))?
        } else {
            raw.to_string()
        };
        Ok(Sample::parse(self.grid()?, &text)?)
    }

    fn order(&self) -> Result<OrderSelector> {
        self.order.context("--order is required")
    }
}

fn bound_method(spec: &str, g: &Global) -> Result<BoundMethod> {
    Ok(match spec {
        "trivial" => BoundMethod::Trivial,
        "pointwise-closed-form" => BoundMethod::PointwiseClosedForm { alpha: g.alpha },
        "oracle" => BoundMethod::Oracle { order: g.order()?, alpha: g.alpha, config: g.oracle_config() },
        other => match other.strip_prefix("quantile:") {
            Some(i) => BoundMethod::Quantile {
                i: i.parse().context("quantile index")?,
                alpha: g.alpha,
                epsilon: g.epsilon,
                tail: TailConvention::default(),
            },
            None => bail!("unknown bound {other:?}"),
        },
    })
}

fn run(cli: Cli) -> Result<Value> {
    let g = &cli.global;
    let value = match cli.command {
        Command::Bound { method, i, paper_literal_tail } => {
            let grid = g.grid()?;
            match method {
                Method::Pointwise | Method::LexiLow => {
                    let f = if matches!(method, Method::Pointwise) {
                        optimal_pointwise_homogeneous
                    } else {
                        lexi_low_homogeneous
                    };
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "i": i,
                        "n": g.n,
                        "alpha": g.alpha,
                        "bound": f(&grid, i, g.n, g.alpha)?,
                    })
                }
                Method::LexiHighBracket => {
                    let b = lexi_high_homogeneous_bracket(&grid, i, g.n, g.alpha)?;
                    with_version(json!({ "i": i, "n": g.n, "alpha": g.alpha, "bracket": b }))
                }
                Method::Quantile => {
                    let tail = if paper_literal_tail {
                        TailConvention::PaperLiteral
                    } else {
                        TailConvention::OrderStatistic
                    };
                    let r = quantile_bound_with(&g.sample()?, i, g.alpha, g.epsilon, tail)?;
                    with_version(serde_json::to_value(r)?)
                }
            }
        }
        Command::Oracle => {
            let x = g.sample()?;
            let order = g.order()?.resolve(&x);
            let r = pessimal_bound_oracle(&x, &order, g.alpha, &g.oracle_config())?;
            with_version(json!({ "order": order.label(), "sample": x, "alpha": g.alpha, "result": r }))
        }
        Command::Coverage { exact, mc, dist, bound, trials } => {
            let grid = g.grid()?;
            let f = match dist {
                Some(text) => Distribution::from_json(grid, &text)?,
                None => Distribution::uniform(grid),
            };
            let method = bound_method(&bound, g)?;
            let report = if mc && !exact {
                mc_coverage(&f, &method, g.n, trials, g.seed)?
            } else {
                exact_coverage(&f, &method, g.n)?
            };
            serde_json::to_value(report)?
        }
        Command::Verify { campaign, trials } => {
            let grid = g.grid()?;
            let cfg = g.oracle_config();
            let reports = match campaign {
                Campaign::Sandwich => vec![verify_sandwich(&grid, g.n, g.alpha, &cfg)?],
                Campaign::Consistency => {
                    let order = g.order()?;
                    let values = tabulate(
                        &BoundMethod::Oracle { order, alpha: g.alpha, config: cfg.clone() },
                        &grid,
                        g.n,
                    )?;
                    let x = values.keys().next().context("empty sample space")?;
                    vec![verify_consistency(&order.resolve(x), &values, cfg.tolerance(grid.range()))?]
                }
                Campaign::Agreement => {
                    let x = g.sample()?;
                    vec![verify_agreement(&x, &g.order()?.resolve(&x), trials, g.seed)?]
                }
                Campaign::All => run_campaign(&CampaignConfig {
                    alpha: g.alpha,
                    oracle: cfg,
                    agreement_trials: trials,
                    seed: g.seed,
                    ..CampaignConfig::default()
                })?,
            };
            let passed = reports.iter().all(|r| r.passed());
            with_version(json!({ "passed": passed, "reports": reports }))
        }
    };
    Ok(value)
}

fn with_version(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    }
    v
}

/// Flattens nested objects into `path,value` rows.
fn write_csv<W: Write>(value: &Value, out: W) -> Result<()> {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, child, rows);
                }
            }
            Value::String(s) => rows.push((prefix.to_string(), s.clone())),
            other => rows.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", value, &mut rows);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["field", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    w.flush()?;
    Ok(())
}

fn emit<T: Serialize>(value: &T, format: Format) -> Result<()> {
    let value = serde_json::to_value(value)?;
    let stdout = std::io::stdout();
    match format {
        Format::Json => {
            let mut lock = stdout.lock();
            serde_json::to_writer_pretty(&mut lock, &value)?;
            writeln!(lock)?;
        }
        Format::Csv => write_csv(&value, stdout.lock())?,
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let format = cli.global.format;
    let value = run(cli)?;
    let failed = value.get("passed") == Some(&Value::Bool(false));
    emit(&value, format)?;
    if failed {
        std::process::exit(1);
    }
    Ok(())
}
