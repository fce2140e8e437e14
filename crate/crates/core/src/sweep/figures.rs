//! Presets for the eight entropy surfaces and their qualitative shape checks.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use super::format::{OutputFormat, RowWriter};
use super::{evaluate_point, run_sweep, EntropyKind, GridRange, SweepConfig, SweepRow, GRID_LOWER};
use crate::error::{Error, Result};
use crate::kinematics::Rapidity;
use crate::states::PairWeights;

pub const DEFAULT_STEPS: usize = 100;

/// Tolerance for the θ ↔ π − θ symmetry of the symmetric surfaces.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Minimum asymmetry expected of the distinguishable surface.
pub const ASYMMETRY_MIN: f64 = 0.05;
/// Tolerance for `S_vN(indistinguishable) = S_Sh − 1`.
pub const SHANNON_RELATION_TOL: f64 = 1e-12;
/// Slack on the distinguishable maximum `−p₁ log p₁ − p₂ log p₂`.
pub const MAX_BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
    ];

    pub fn kind(self) -> EntropyKind {
        use FigureId::*;
        match self {
            Fig2 | Fig3 => EntropyKind::VnDistinguishable,
            Fig4 | Fig5 | Fig6 => EntropyKind::Shannon,
            Fig7 | Fig8 | Fig9 => EntropyKind::VnIndistinguishable,
        }
    }

    pub fn p1(self) -> f64 {
        use FigureId::*;
        match self {
            Fig2 | Fig6 | Fig9 => 0.5,
            Fig3 | Fig5 | Fig8 => 0.25,
            Fig4 | Fig7 => 0.75,
        }
    }

    pub fn title(self) -> String {
        let what = match self.kind() {
            EntropyKind::VnDistinguishable => "von Neumann entropy, distinguishable pairs",
            EntropyKind::Shannon => "Shannon entropy of z-basis outcomes",
            EntropyKind::VnIndistinguishable => "von Neumann entropy, antisymmetrised pairs",
        };
        format!("{what} (p1 = {}, p2 = {})", self.p1(), 1.0 - self.p1())
    }

    /// Grid `α ∈ [0.1, atanh v_max]`, `θ ∈ [0.1, π]`, ejection rapidity
    /// `atanh v_max`.
    pub fn preset(self, steps: usize, v_max: f64) -> Result<SweepConfig> {
        let phi = Rapidity::from_velocity(v_max).map_err(|e| Error::usage(e.to_string()))?;
        let cfg = SweepConfig {
            entropy_kind: self.kind(),
            p1: self.p1(),
            phi,
            alpha_range: GridRange::new(GRID_LOWER, phi.value(), steps)?,
            theta_range: GridRange::new(GRID_LOWER, PI, steps)?,
            renormalize_shannon: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s
            .trim()
            .strip_prefix("fig")
            .and_then(|n| n.parse::<u8>().ok())
            .ok_or_else(|| Error::usage(format!("unknown figure '{s}' (fig2..fig9)")))?;
        FigureId::ALL
            .get(usize::from(n).wrapping_sub(2))
            .copied()
            .ok_or_else(|| Error::usage(format!("unknown figure '{s}' (fig2..fig9)")))
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = FigureId::ALL.iter().position(|x| x == self).unwrap_or(0);
        write!(f, "fig{}", idx + 2)
    }
}

/// Outcome of one shape check.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeCheck {
    pub name: String,
    pub observed: f64,
    pub passed: bool,
}

/// Streaming accumulator for the shape checks of one figure.
pub struct FigureShape {
    figure: FigureId,
    config: SweepConfig,
    weights: PairWeights,
    min: f64,
    max: f64,
    mirror_dev: f64,
    relation_dev: f64,
    rows: usize,
    error: Option<Error>,
}

impl FigureShape {
    pub fn new(figure: FigureId, config: &SweepConfig) -> Result<Self> {
        Ok(FigureShape {
            figure,
            config: *config,
            weights: config.weights()?,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            mirror_dev: 0.0,
            relation_dev: 0.0,
            rows: 0,
            error: None,
        })
    }

    pub fn observe(&mut self, row: &SweepRow) {
        if let Err(e) = self.try_observe(row) {
            self.error.get_or_insert(e);
        }
    }

    fn try_observe(&mut self, row: &SweepRow) -> Result<()> {
        self.rows += 1;
        self.min = self.min.min(row.entropy);
        self.max = self.max.max(row.entropy);
        let alpha = Rapidity::new(row.alpha)?;
        let kind = self.config.entropy_kind;
        let mirror = evaluate_point(kind, self.weights, self.config.phi, alpha, PI - row.theta, false)?;
        self.mirror_dev = self.mirror_dev.max((mirror.entropy - row.entropy).abs());
        if kind != EntropyKind::VnDistinguishable {
            let other = match kind {
                EntropyKind::Shannon => EntropyKind::VnIndistinguishable,
                _ => EntropyKind::Shannon,
            };
            let o = evaluate_point(other, self.weights, self.config.phi, alpha, row.theta, false)?;
            let (sh, vn) = if kind == EntropyKind::Shannon {
                (row.entropy, o.entropy)
            } else {
                (o.entropy, row.entropy)
            };
            self.relation_dev = self.relation_dev.max((vn - (sh - 1.0)).abs());
        }
        Ok(())
    }

    pub fn finish(self) -> Result<Vec<ShapeCheck>> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let mut checks = Vec::new();
        let expected_rows = self.config.len();
        checks.push(ShapeCheck {
            name: format!("{}: row count {expected_rows}", self.figure),
            observed: self.rows as f64,
            passed: self.rows == expected_rows,
        });
        let (lo, hi) = match self.config.entropy_kind {
            EntropyKind::Shannon => (1.0, 2.0),
            _ => (0.0, 1.0),
        };
        checks.push(ShapeCheck {
            name: format!("{}: entropy within [{lo}, {hi}]", self.figure),
            observed: if self.min < lo { self.min } else { self.max },
            passed: self.min >= lo - 1e-12 && self.max <= hi + 1e-12,
        });
        match self.config.entropy_kind {
            EntropyKind::VnDistinguishable => {
                let bound = self.weights.mixing_entropy();
                checks.push(ShapeCheck {
                    name: format!("{}: max <= -p1 log p1 - p2 log p2 = {bound:.6}", self.figure),
                    observed: self.max,
                    passed: self.max <= bound + MAX_BOUND_SLACK,
                });
                if self.figure == FigureId::Fig2 {
                    checks.push(ShapeCheck {
                        name: format!("{}: asymmetric under theta -> pi - theta (> {ASYMMETRY_MIN})", self.figure),
                        observed: self.mirror_dev,
                        passed: self.mirror_dev > ASYMMETRY_MIN,
                    });
                }
            }
            _ => {
                checks.push(ShapeCheck {
                    name: format!("{}: symmetric under theta -> pi - theta", self.figure),
                    observed: self.mirror_dev,
                    passed: self.mirror_dev <= SYMMETRY_TOL,
                });
                checks.push(ShapeCheck {
                    name: format!("{}: S_vN(indist) = S_Sh - 1", self.figure),
                    observed: self.relation_dev,
                    passed: self.relation_dev <= SHANNON_RELATION_TOL,
                });
            }
        }
        Ok(checks)
    }
}

/// Write the `alpha,theta,entropy` table for a figure and return its shape
/// checks.
pub fn emit_figure_data<W: Write>(
    figure: FigureId,
    grid_steps: usize,
    v_max: f64,
    format: OutputFormat,
    out: W,
) -> Result<(W, Vec<ShapeCheck>)> {
    let config = figure.preset(grid_steps, v_max)?;
    let mut shape = FigureShape::new(figure, &config)?;
    let mut writer = RowWriter::figure(out, format);
    writer.write_header().map_err(io_err)?;
    for row in run_sweep(&config)? {
        let row = row?;
        shape.observe(&row);
        writer.write_row(&row).map_err(io_err)?;
    }
    let out = writer.finish().map_err(io_err)?;
    Ok((out, shape.finish()?))
}

pub(crate) fn io_err(e: std::io::Error) -> Error {
    Error::usage(format!("I/O error: {e}"))
}

/// Gnuplot script that draws the surface stored in `csv_path`.
pub fn gnuplot_script(figure: FigureId, csv_path: &str, grid_steps: usize) -> String {
    let zlabel = match figure.kind() {
        EntropyKind::Shannon => "S_Sh [bits]",
        _ => "S_vN [bits]",
    };
    format!(
        "# {figure}: {title}\n\
         set datafile separator ','\n\
         set key off\n\
         set title '{title}'\n\
         set xlabel 'alpha'\n\
         set ylabel 'theta'\n\
         set zlabel '{zlabel}' rotate by 90\n\
         set dgrid3d {grid_steps},{grid_steps}\n\
         set hidden3d\n\
         set ticslevel 0\n\
         splot '{csv_path}' every ::1 using 1:2:3 with lines\n\
         pause mouse close\n",
        title = figure.title(),
    )
}
