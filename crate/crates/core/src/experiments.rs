//! Scenario runner: sweeps a fold template over a grid of `ωt` values and
//! tabulates exact against leading-order `log ρ`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytic::{harmonic_rho_closed_form, rho_l_leading, rho_p_leading};
use crate::error::{Error, Result};
use crate::gaussian::OscillatorParams;
use crate::real::{Precision, Real};
use crate::state::{harmonic_precursor_rho, loschmidt_rho, precursor_rho, TimeFold};

/// Relative agreement of `log ρ` between the working precision and the
/// widened check precision that a grid point must reach.
pub const CERTIFY_TOLERANCE: f64 = 1e-6;

/// Extra bits used for the certification recomputation.
const CERTIFY_EXTRA_BITS: usize = 64;

/// Below this `|log ρ⁰|` the relative error column is reported as 0.
pub const REL_ERROR_GUARD: f64 = 1e-6;

/// Figure ids with a built-in scenario.
pub const FIGURE_IDS: [u32; 6] = [3, 4, 5, 7, 8, 9];

/// `δω/ω` used by every built-in figure.
pub const FIGURE_DELTA_RATIO: f64 = 1e-3;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Loschmidt,
    Precursor,
    /// Single kick on the ordinary oscillator, compared with its closed form.
    HarmonicControl,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Loschmidt => "loschmidt",
            ScenarioKind::Precursor => "precursor",
            ScenarioKind::HarmonicControl => "harmonic-control",
        }
    }
}

/// One time slot of a fold template, in `ωt` units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Slot {
    Fixed(f64),
    /// `coefficient · x`, where `x` is the grid variable.
    Sweep(f64),
}

impl Slot {
    pub fn at(self, x: f64) -> f64 {
        match self {
            Slot::Fixed(v) => v,
            Slot::Sweep(c) => c * x,
        }
    }

    pub fn is_sweep(self) -> bool {
        matches!(self, Slot::Sweep(_))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Slot::Fixed(v) => write!(f, "{v}"),
            Slot::Sweep(1.0) => write!(f, "t"),
            Slot::Sweep(-1.0) => write!(f, "-t"),
            Slot::Sweep(c) => write!(f, "{c}t"),
        }
    }
}

impl FromStr for Slot {
    type Err = Error;

    /// A number, or a multiple of the sweep variable: `t`, `-t`, `0.5t`,
    /// `0.5*t`, `t/2`, `-t/4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidScenario(format!("cannot parse time slot {s:?}"));
        let s = s.trim();
        let Some(pos) = s.find('t') else {
            return s.parse::<f64>().map(Slot::Fixed).map_err(|_| bad());
        };
        let (head, tail) = (s[..pos].trim(), s[pos + 1..].trim());
        let head = head.strip_suffix('*').map(str::trim).unwrap_or(head);
        let coef = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        let coef = match tail {
            "" => coef,
            t => {
                let d: f64 = t.strip_prefix('/').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
                if d == 0.0 {
                    return Err(bad());
                }
                coef / d
            }
        };
        if !coef.is_finite() {
            return Err(bad());
        }
        Ok(Slot::Sweep(coef))
    }
}

/// Insertion times and outer times, each fixed or tied to the sweep
/// variable.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldTemplate {
    pub t_s: Slot,
    pub t_f: Slot,
    pub times: Vec<Slot>,
}

impl FoldTemplate {
    pub fn new(t_s: Slot, t_f: Slot, times: Vec<Slot>) -> Self {
        FoldTemplate { t_s, t_f, times }
    }

    /// Template with `t_s = t_f = 0`.
    pub fn insertions(times: Vec<Slot>) -> Self {
        Self::new(Slot::Fixed(0.0), Slot::Fixed(0.0), times)
    }

    pub fn sweep_count(&self) -> usize {
        self.slots().filter(|s| s.is_sweep()).count()
    }

    fn slots(&self) -> impl Iterator<Item = &Slot> {
        [&self.t_s, &self.t_f].into_iter().chain(&self.times)
    }

    pub fn instantiate(&self, x: f64, params: &OscillatorParams) -> Result<TimeFold> {
        let times: Vec<f64> = self.times.iter().map(|s| s.at(x)).collect();
        TimeFold::from_omega_t(self.t_s.at(x), self.t_f.at(x), &times, params)
    }

    fn times_label(&self) -> String {
        self.times.iter().map(Slot::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Inclusive grid `start, start + step, …, ≤ stop` in `ωt` units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = Grid { start, stop, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.start, self.stop, self.step].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidScenario(format!("grid {self} has non-finite bounds")));
        }
        if self.step <= 0.0 {
            return Err(Error::InvalidScenario(format!("grid step {} must be positive", self.step)));
        }
        if self.start > self.stop {
            return Err(Error::InvalidScenario(format!("grid start {} exceeds stop {}", self.start, self.stop)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl Default for Grid {
    /// `0.05 ≤ ωt ≤ 20` in steps of 0.05.
    fn default() -> Self {
        Grid { start: 0.05, stop: 20.0, step: 0.05 }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidScenario(format!("grid {s:?} is not start:stop:step"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        Grid::new(v[0], v[1], v[2])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub kind: ScenarioKind,
    pub template: FoldTemplate,
    pub grid: Grid,
    pub params: OscillatorParams,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        let sweeps = self.template.sweep_count();
        if !(1..=2).contains(&sweeps) {
            return Err(Error::InvalidScenario(format!("{sweeps} sweep slots; need 1 or 2")));
        }
        let zero_outer = self.template.t_s == Slot::Fixed(0.0) && self.template.t_f == Slot::Fixed(0.0);
        match self.kind {
            ScenarioKind::Loschmidt if !zero_outer => Err(Error::InvalidScenario(
                "Loschmidt scenarios have no leading-order form with outer times; leave t_s and t_f at 0".into(),
            )),
            ScenarioKind::HarmonicControl if self.template.times.len() != 1 || !zero_outer => {
                Err(Error::InvalidScenario("harmonic control takes exactly one insertion time".into()))
            }
            _ => Ok(()),
        }
    }
}

/// One grid point. `t` is the grid variable in `ωt` units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub t: f64,
    pub log_rho_exact: f64,
    pub log_rho_leading: f64,
    pub rel_error: f64,
}

/// `(log ρ⁰ − log ρ)/log ρ⁰`, or 0 when `|log ρ⁰|` is below the guard.
pub fn relative_error(exact: f64, leading: f64) -> f64 {
    if leading.abs() < REL_ERROR_GUARD {
        0.0
    } else {
        (leading - exact) / leading
    }
}

fn exact_rho(kind: ScenarioKind, fold: &TimeFold, params: &OscillatorParams) -> Result<Real> {
    match kind {
        ScenarioKind::Loschmidt => loschmidt_rho(fold, params),
        ScenarioKind::Precursor => precursor_rho(fold, params),
        ScenarioKind::HarmonicControl => harmonic_precursor_rho(&fold.times()[0], params),
    }
}

fn leading_rho(kind: ScenarioKind, fold: &TimeFold, params: &OscillatorParams) -> Result<Real> {
    match kind {
        ScenarioKind::Loschmidt => Ok(rho_l_leading(fold, params)?.rho().clone()),
        ScenarioKind::Precursor => Ok(rho_p_leading(fold, params)?.rho().clone()),
        ScenarioKind::HarmonicControl => Ok(harmonic_rho_closed_form(&fold.times()[0], params)),
    }
}

fn finite(x: f64, what: &str, t: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain(format!("{what} is not finite at t = {t}")))
    }
}

fn run_point(s: &Scenario, x: f64) -> Result<Row> {
    let params = &s.params;
    let fold = s.template.instantiate(x, params)?;
    let log_exact = exact_rho(s.kind, &fold, params)?.ln();

    let wide = params.clone().with_precision(params.precision().widen(CERTIFY_EXTRA_BITS));
    let fold_wide = s.template.instantiate(x, &wide)?;
    let log_check = exact_rho(s.kind, &fold_wide, &wide)?.ln();
    let gap = (&log_exact - &log_check).abs().to_f64();
    if gap > CERTIFY_TOLERANCE * log_check.abs().to_f64() + 1e-30 {
        return Err(Error::PrecisionExhausted { t: x, low: log_exact.to_f64(), high: log_check.to_f64() });
    }

    let log_exact = finite(log_exact.to_f64(), "log rho", x)?;
    let log_leading = finite(leading_rho(s.kind, &fold, params)?.ln().to_f64(), "leading log rho", x)?;
    Ok(Row { t: x, log_rho_exact: log_exact, log_rho_leading: log_leading, rel_error: relative_error(log_exact, log_leading) })
}

/// Evaluates every grid point (in parallel) and returns the rows in
/// ascending `t`.
pub fn run_scenario(s: &Scenario) -> Result<Vec<Row>> {
    s.validate()?;
    s.grid.points().into_par_iter().map(|x| run_point(s, x)).collect()
}

/// Built-in figure scenario with the given parameters.
///
/// Each figure fixes its constants and fold shape; the swept slots are a declared
/// choice: 3 and 4 sweep `t₁`; 5 and 7 sweep `t₁` with `t₂ = t₁/2`; 8 and 9
/// sweep `t₂ = t₄` with `ωt₁ = ωt₃ = 20`.
pub fn figure_scenario_with(id: u32, mass: f64, omega: f64, gate_scale: f64, precision: Precision, grid: Grid) -> Result<Scenario> {
    use Slot::{Fixed, Sweep};
    let (kind, template) = match id {
        3 => (ScenarioKind::Loschmidt, FoldTemplate::insertions(vec![Sweep(1.0)])),
        4 => (ScenarioKind::Precursor, FoldTemplate::new(Fixed(20.0), Fixed(20.0), vec![Sweep(1.0)])),
        5 => (ScenarioKind::Loschmidt, FoldTemplate::insertions(vec![Sweep(1.0), Sweep(0.5)])),
        7 => (ScenarioKind::Precursor, FoldTemplate::new(Fixed(20.0), Fixed(-20.0), vec![Sweep(1.0), Sweep(0.5)])),
        8 => (ScenarioKind::Loschmidt, FoldTemplate::insertions(vec![Fixed(20.0), Sweep(1.0), Fixed(20.0), Sweep(1.0)])),
        9 => (
            ScenarioKind::Precursor,
            FoldTemplate::new(Fixed(-20.0), Fixed(-20.0), vec![Fixed(20.0), Sweep(1.0), Fixed(20.0), Sweep(1.0)]),
        ),
        other => return Err(Error::UnknownFigure(other)),
    };
    let params = OscillatorParams::new(mass, omega, FIGURE_DELTA_RATIO * omega, gate_scale)?.with_precision(precision);
    Ok(Scenario { label: format!("figure {id}"), kind, template, grid, params })
}

/// Built-in figure scenario with `m = ω = g = 1`, 40 digits and the default
/// grid.
pub fn figure_scenario(id: u32) -> Result<Scenario> {
    figure_scenario_with(id, 1.0, 1.0, 1.0, Precision::default(), Grid::default())
}

pub fn figure(id: u32) -> Result<Vec<Row>> {
    run_scenario(&figure_scenario(id)?)
}

/// C-style `%.11e`: 12 significant digits with a signed, at least two-digit
/// exponent, e.g. `1.23456789012e+01`.
pub fn format_sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub const CSV_HEADER: &str = "t,log_rho_exact,log_rho_leading,rel_error";

/// Writes the `#` metadata block, the column header and one line per row,
/// with LF line endings.
pub fn write_csv<W: Write>(out: &mut W, s: &Scenario, rows: &[Row]) -> io::Result<()> {
    let p = &s.params;
    writeln!(out, "# multifold {TOOLKIT_VERSION}")?;
    writeln!(out, "# scenario: {}", s.label)?;
    writeln!(out, "# kind: {}", s.kind.name())?;
    writeln!(out, "# mass: {}", p.mass())?;
    writeln!(out, "# omega: {}", p.omega())?;
    writeln!(out, "# delta_ratio: {}", p.delta_ratio())?;
    writeln!(out, "# gate_scale: {}", p.gate_scale())?;
    writeln!(out, "# precision_digits: {}", p.precision().digits().floor())?;
    writeln!(out, "# t_s: {}", s.template.t_s)?;
    writeln!(out, "# t_f: {}", s.template.t_f)?;
    writeln!(out, "# times: {}", s.template.times_label())?;
    writeln!(out, "# grid: {}", s.grid)?;
    writeln!(out, "# t is omega*t; slots written with t follow the grid variable (declared sweep choice)")?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            format_sci(r.t),
            format_sci(r.log_rho_exact),
            format_sci(r.log_rho_leading),
            format_sci(r.rel_error)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_format() {
        assert_eq!(format_sci(12.345678901234), "1.23456789012e+01");
        assert_eq!(format_sci(-2.5e-7), "-2.50000000000e-07");
        assert_eq!(format_sci(0.0), "0.00000000000e+00");
        assert_eq!(format_sci(-0.0), "0.00000000000e+00");
        assert_eq!(format_sci(1e200), "1.00000000000e+200");
    }

    #[test]
    fn slot_parsing() {
        assert_eq!("20".parse::<Slot>().unwrap(), Slot::Fixed(20.0));
        assert_eq!("-1.5".parse::<Slot>().unwrap(), Slot::Fixed(-1.5));
        assert_eq!("t".parse::<Slot>().unwrap(), Slot::Sweep(1.0));
        assert_eq!("-t".parse::<Slot>().unwrap(), Slot::Sweep(-1.0));
        assert_eq!("0.5t".parse::<Slot>().unwrap(), Slot::Sweep(0.5));
        assert_eq!("0.5*t".parse::<Slot>().unwrap(), Slot::Sweep(0.5));
        assert_eq!("t/2".parse::<Slot>().unwrap(), Slot::Sweep(0.5));
        assert_eq!("-t/4".parse::<Slot>().unwrap(), Slot::Sweep(-0.25));
        for bad in ["", "x", "t/0", "2tt", "t*2"] {
            assert!(bad.parse::<Slot>().is_err(), "{bad}");
        }
        for s in [Slot::Fixed(20.0), Slot::Sweep(1.0), Slot::Sweep(-1.0), Slot::Sweep(0.5)] {
            assert_eq!(s.to_string().parse::<Slot>().unwrap(), s);
        }
    }

    #[test]
    fn grid_parsing_and_points() {
        let g: Grid = "0.05:20:0.05".parse().unwrap();
        assert_eq!(g, Grid::default());
        assert_eq!(g.len(), 400);
        let pts = g.points();
        assert_eq!(pts[0], 0.05);
        assert!((pts[399] - 20.0).abs() < 1e-12);
        assert_eq!("0:0:1".parse::<Grid>().unwrap().points(), [0.0]);
        assert!("1:0:1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn rel_error_guard() {
        assert_eq!(relative_error(1.0, 5e-7), 0.0);
        assert_eq!(relative_error(0.9, 1.0), 0.09999999999999998);
    }

    #[test]
    fn unknown_figure() {
        assert_eq!(figure_scenario(6), Err(Error::UnknownFigure(6)));
    }

    #[test]
    fn scenario_validation() {
        let mut s = figure_scenario(3).unwrap();
        s.template.t_s = Slot::Fixed(1.0);
        assert!(matches!(s.validate(), Err(Error::InvalidScenario(_))));
        let mut s = figure_scenario(3).unwrap();
        s.template.times = vec![Slot::Fixed(1.0)];
        assert!(matches!(s.validate(), Err(Error::InvalidScenario(_))));
        s.template.times = vec![Slot::Sweep(1.0); 3];
        assert!(matches!(s.validate(), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn single_point_at_zero() {
        let mut s = figure_scenario(3).unwrap();
        s.grid = Grid::new(0.0, 0.0, 1.0).unwrap();
        let rows = run_scenario(&s).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].log_rho_exact, 0.0);
        assert!((rows[0].log_rho_leading - 2.5e-7).abs() < 1e-13);
        assert_eq!(rows[0].rel_error, 0.0);
    }

    #[test]
    fn csv_layout() {
        let mut s = figure_scenario(3).unwrap();
        s.grid = Grid::new(1.0, 2.0, 1.0).unwrap();
        let rows = run_scenario(&s).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &s, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        let header = lines.iter().position(|l| *l == CSV_HEADER).unwrap();
        assert!(lines[..header].iter().all(|l| l.starts_with('#')));
        assert_eq!(lines.len(), header + 3);
        assert!(lines[header + 1].starts_with("1.00000000000e+00,"));
    }
}
