use std::fmt::Write as _;
use std::io::Write as _;

use anyhow::{bail, Context, Result};
use multifold_core::analytic::{perturbative_regime, rho_l_leading, rho_p_leading, switchback_complexity};
use multifold_core::experiments::{figure_scenario_with, format_sci, run_scenario, write_csv, TOOLKIT_VERSION};
use multifold_core::{FoldTemplate, OscillatorParams, Scenario, ScenarioKind, Slot, TimeFold};

use crate::args::{Cli, Command, TermKind};
use crate::config::Settings;

pub fn run(cli: Cli) -> Result<()> {
    let settings = Settings::resolve(&cli.common)?;
    let text = match cli.command {
        Command::Figure { id } => figure(id, &settings)?,
        Command::Loschmidt => sweep(ScenarioKind::Loschmidt, &settings)?,
        Command::Precursor => sweep(ScenarioKind::Precursor, &settings)?,
        Command::Harmonic => sweep(ScenarioKind::HarmonicControl, &settings)?,
        Command::AnalyticTerms { kind } => analytic_terms(kind, &settings)?,
        Command::Switchback => switchback(&settings)?,
    };
    emit(&settings, text.as_bytes())
}

fn emit(settings: &Settings, bytes: &[u8]) -> Result<()> {
    match &settings.out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn params(settings: &Settings) -> Result<OscillatorParams> {
    let omega = settings.omega();
    let p = OscillatorParams::new(settings.mass(), omega, settings.delta_ratio() * omega, settings.gate_scale())?;
    if !perturbative_regime(&p) {
        eprintln!("warning: delta ratio {} is outside the perturbative regime", p.delta_ratio());
    }
    Ok(p.with_precision(settings.precision()))
}

fn csv(scenario: &Scenario) -> Result<String> {
    let rows = run_scenario(scenario)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, scenario, &rows)?;
    Ok(String::from_utf8(buf)?)
}

fn figure(id: u32, settings: &Settings) -> Result<String> {
    let fixed = [
        ("--times", settings.times.is_some()),
        ("--ts", settings.ts.is_some()),
        ("--tf", settings.tf.is_some()),
        ("--delta-ratio", settings.delta_ratio.is_some()),
    ];
    if let Some((flag, _)) = fixed.iter().find(|(_, set)| *set) {
        bail!("figure {id} fixes its own fold and perturbation; {flag} is not accepted");
    }
    let scenario = figure_scenario_with(
        id,
        settings.mass(),
        settings.omega(),
        settings.gate_scale(),
        settings.precision(),
        settings.grid(),
    )?;
    csv(&scenario)
}

fn sweep(kind: ScenarioKind, settings: &Settings) -> Result<String> {
    let times = match (&settings.times, kind) {
        (Some(t), _) => t.clone(),
        (None, ScenarioKind::HarmonicControl) => vec![Slot::Sweep(1.0)],
        (None, _) => bail!("--times is required, e.g. --times t or --times 20,t,20,t"),
    };
    let template = FoldTemplate::new(
        settings.ts.unwrap_or(Slot::Fixed(0.0)),
        settings.tf.unwrap_or(Slot::Fixed(0.0)),
        times,
    );
    let scenario = Scenario {
        label: kind.name().to_string(),
        kind,
        template,
        grid: settings.grid(),
        params: params(settings)?,
    };
    csv(&scenario)
}

fn fixed(slot: Slot, what: &str) -> Result<f64> {
    match slot {
        Slot::Fixed(v) => Ok(v),
        Slot::Sweep(_) => bail!("{what} must be a number here, got {slot}"),
    }
}

/// Fold from numeric `ωt` values.
fn fixed_fold(settings: &Settings, params: &OscillatorParams) -> Result<TimeFold> {
    let times = settings
        .times
        .as_deref()
        .unwrap_or_default()
        .iter()
        .map(|&s| fixed(s, "--times entry"))
        .collect::<Result<Vec<_>>>()?;
    let ts = fixed(settings.ts.unwrap_or(Slot::Fixed(0.0)), "--ts")?;
    let tf = fixed(settings.tf.unwrap_or(Slot::Fixed(0.0)), "--tf")?;
    Ok(TimeFold::from_omega_t(ts, tf, &times, params)?)
}

fn header(out: &mut String, title: &str, settings: &Settings, p: &OscillatorParams) -> Result<()> {
    writeln!(out, "# multifold {TOOLKIT_VERSION}")?;
    writeln!(out, "# {title}")?;
    writeln!(
        out,
        "# mass: {} omega: {} delta_ratio: {} gate_scale: {} precision_digits: {}",
        p.mass(),
        p.omega(),
        p.delta_ratio(),
        p.gate_scale(),
        p.precision().digits().floor()
    )?;
    let label = |s: Option<Slot>| s.unwrap_or(Slot::Fixed(0.0)).to_string();
    let times: Vec<String> = settings.times.iter().flatten().map(Slot::to_string).collect();
    writeln!(out, "# t_s: {} t_f: {} times: {}", label(settings.ts), label(settings.tf), times.join(","))?;
    writeln!(out, "# times in units of omega*t")?;
    Ok(())
}

fn analytic_terms(kind: TermKind, settings: &Settings) -> Result<String> {
    let p = params(settings)?;
    let fold = fixed_fold(settings, &p)?;
    let (name, lo) = match kind {
        TermKind::Loschmidt => {
            if settings.ts.is_some() || settings.tf.is_some() {
                eprintln!("warning: the Loschmidt expansion ignores --ts and --tf");
            }
            ("loschmidt", rho_l_leading(&fold, &p)?)
        }
        TermKind::Precursor => ("precursor", rho_p_leading(&fold, &p)?),
    };
    let mut out = String::new();
    header(&mut out, &format!("leading-order terms: {name}"), settings, &p)?;
    writeln!(out, "# rho_leading: {}", format_sci(lo.rho().to_f64()))?;
    writeln!(out, "# log_rho_leading: {}", format_sci(lo.rho().ln().to_f64()))?;
    writeln!(out, "subset,pattern,sigma,exponent_arg,log_value")?;
    for term in lo.terms() {
        let subset: Vec<String> = term.subset().iter().map(usize::to_string).collect();
        let arg = (term.exponent_arg() * p.real(p.omega())).to_f64();
        let log_value = term.log_value(&p).map_or_else(|| "-inf".to_string(), |v| format_sci(v.to_f64()));
        writeln!(out, "{},{},{},{},{}", subset.join(" "), term.pattern(), term.sigma(), format_sci(arg), log_value)?;
    }
    Ok(out)
}

fn switchback(settings: &Settings) -> Result<String> {
    let p = params(settings)?;
    let fold = fixed_fold(settings, &p)?;
    let s = switchback_complexity(&fold, &p)?;
    let omega = p.real(p.omega());
    let mut out = String::new();
    writeln!(out, "t_T = {}", format_sci((&s.folded_time * &omega).to_f64()))?;
    writeln!(out, "t_star = {}", format_sci((&s.scrambling_time * &omega).to_f64()))?;
    writeln!(out, "complexity = {}", format_sci(s.complexity.to_f64()))?;
    writeln!(out, "insertions = {}", s.insertions)?;
    writeln!(out, "regime_warning = {}", s.regime_warning())?;
    if s.regime_warning() {
        let legs: Vec<String> = s.short_legs.iter().map(|i| (i + 1).to_string()).collect();
        eprintln!(
            "warning: leg(s) {} do not exceed the scrambling time; the switchback formula does not apply",
            legs.join(", ")
        );
    }
    Ok(out)
}
