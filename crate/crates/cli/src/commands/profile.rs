//! `blrain profile`: profile objective curve and confidence interval for
//! one parameter of a saved fit.

use std::path::PathBuf;

use anyhow::{Context, Result};

use blrain::fit::{confidence_interval, profile, ParamSpace, ProfileOptions};

use super::Outcome;
use crate::config::RunConfig;
use crate::io::{load_fit_document, num, CsvDoc};

#[derive(Debug, clap::Args)]
pub struct ProfileArgs {
    /// Fit document written by `blrain fit`.
    #[arg(long, value_name = "FILE")]
    pub fit: PathBuf,
    /// Parameter name (e.g. `lambda`, `alpha`, `phi`).
    #[arg(long, value_name = "NAME")]
    pub param: String,
    /// Grid points.
    #[arg(long, default_value_t = 25)]
    pub points: usize,
    /// Half-width of the grid on the log scale.
    #[arg(long, default_value_t = 1.5)]
    pub span: f64,
}

pub fn run(config: &RunConfig, args: &ProfileArgs) -> Result<Outcome> {
    let doc = load_fit_document(&args.fit)?;
    let spec = &doc.spec;
    let space = ParamSpace::new(spec.variant, spec.alpha_min, spec.fixed_mu_x)?;
    let index = space
        .names
        .iter()
        .position(|n| *n == args.param)
        .with_context(|| {
            format!("unknown parameter `{}`; available: {}", args.param, space.names.join(", "))
        })?;

    let opts = ProfileOptions::default();
    // grid on the profiling coordinate scale (relaxed alpha floor when
    // profiling alpha itself)
    let mut pspace = space.clone();
    if index == pspace.alpha_index {
        pspace.alpha_min = pspace.alpha_min.min(opts.alpha_floor);
    }
    let x_hat = pspace.to_x(&doc.result.params)?;
    let c_hat = x_hat[index];
    let points = args.points.max(5);
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            let c = c_hat - args.span + 2.0 * args.span * t;
            if index == pspace.alpha_index { pspace.alpha_min + c.exp() } else { c.exp() }
        })
        .collect();

    let curve = profile(spec, &doc.result, index, &grid, &opts)?;
    let mut csv = CsvDoc::new(config, "param,value,s_profile,converged")?;
    for p in &curve.points {
        csv.row(&[
            curve.name.clone(),
            num(p.value),
            num(p.s),
            p.converged.to_string(),
        ]);
    }
    let out = config.out.join(format!(
        "profile_{}_m{:02}_{}.csv",
        spec.variant.name(),
        doc.result.month,
        curve.name
    ));
    csv.write(&out)?;

    match confidence_interval(&curve, doc.result.s_value) {
        Ok(ci) => println!(
            "{} 95% interval: [{}, {}] (threshold {})",
            curve.name,
            ci.lo.map(|v| format!("{v:.6}")).unwrap_or_else(|| "unbounded".into()),
            ci.hi.map(|v| format!("{v:.6}")).unwrap_or_else(|| "unbounded".into()),
            ci.threshold
        ),
        Err(e) => println!("{}: no interval ({e})", curve.name),
    }
    Ok(Outcome::Complete)
}
