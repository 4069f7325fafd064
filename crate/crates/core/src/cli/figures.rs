//! Datasets and gnuplot scripts for the five standard figures.
//!
//! | figure | incident wave             | columns plotted        |
//! |--------|---------------------------|------------------------|
//! | fig1   | `I+ = 1`                  | `r2_total`, `t2_flux`  |
//! | fig2   | `I+ = 1`                  | `s_r`, `s_t` + extrema |
//! | fig3   | `I+ = 1`                  | `chi_r`                |
//! | fig4   | `I+ = 1`                  | `chi_t`                |
//! | fig5   | `|I±| = 1/√2`, three `Δω` | `s_r`, `s_t`           |
//!
//! Every figure uses `μ = 0.5` and the critical sines `1/2, 1/√2, √3/2` on
//! both sides of `ν = 1`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::sweep::{to_csv, SweepRow};
use super::CliError;
use crate::config::{Barrier, StepConfig, DEFAULT_THETA_MAX};
use crate::entanglement::entropy_scan;
use crate::kinematics::ZoneSide;
use crate::scattering::IncidentAmplitudes;
use crate::verify::{extremal_entropies, FIGURE_MU, FIGURE_SINES};

const SINE_TAGS: [&str; 3] = ["sc_half", "sc_inv_sqrt2", "sc_sqrt3_half"];
const LINE_STYLES: [&str; 3] = ["dt 1", "dt 2", "dt 4"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    /// `(column index, label)` pairs, 1-based as gnuplot counts.
    fn columns(self) -> &'static [(usize, &'static str)] {
        match self {
            Figure::Fig1 => &[(3, "|R|^2"), (4, "(v_qx/v_px)|T|^2")],
            Figure::Fig2 | Figure::Fig5 => &[(5, "S_R"), (6, "S_T")],
            Figure::Fig3 => &[(7, "<gamma5>_R")],
            Figure::Fig4 => &[(8, "<gamma5>_T")],
        }
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure '{s}', expected fig1..fig5"))
    }
}

struct Curve {
    file: String,
    title: String,
    config: StepConfig,
}

fn curves(fig: Figure, samples: usize) -> Result<Vec<Curve>, CliError> {
    let h = FRAC_1_SQRT_2;
    let phases: Vec<(Option<&str>, f64, f64, f64)> = match fig {
        Figure::Fig5 => vec![
            (Some("dw_pi4"), h, h, FRAC_PI_4),
            (Some("dw_pi3"), h, h, FRAC_PI_3),
            (Some("dw_pi2"), h, h, FRAC_PI_2),
        ],
        _ => vec![(None, 1.0, 0.0, 0.0)],
    };
    let mut out = Vec::new();
    for (phase_tag, plus, minus, dw) in phases {
        for side in [ZoneSide::Diffusion, ZoneSide::Klein] {
            for (s_c, tag) in FIGURE_SINES.iter().zip(SINE_TAGS) {
                let config = StepConfig::new(
                    FIGURE_MU,
                    Barrier::Critical {
                        sin_theta_c: *s_c,
                        zone_side: side,
                    },
                    plus,
                    minus,
                    dw,
                    samples,
                    DEFAULT_THETA_MAX,
                )?;
                let stem = match phase_tag {
                    Some(p) => format!("{}_{p}_{side}_{tag}", fig.name()),
                    None => format!("{}_{side}_{tag}", fig.name()),
                };
                out.push(Curve {
                    file: format!("{stem}.csv"),
                    title: format!("{side} sin(theta_c)={s_c:.4}"),
                    config,
                });
            }
        }
    }
    Ok(out)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn script(fig: Figure, curves: &[Curve], reference: Option<&str>) -> String {
    let mut s = String::new();
    writeln!(s, "# gnuplot script for {}", fig.name()).unwrap();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set xlabel 'sin(theta)'").unwrap();
    writeln!(s, "set key outside right").unwrap();
    writeln!(s, "set terminal pngcairo size 1000,{}", 420 * fig.columns().len()).unwrap();
    writeln!(s, "set output '{}.png'", fig.name()).unwrap();
    writeln!(s, "set multiplot layout {},1", fig.columns().len()).unwrap();
    for (col, label) in fig.columns() {
        writeln!(s, "set ylabel '{label}'").unwrap();
        let mut items = Vec::new();
        for (i, c) in curves.iter().enumerate() {
            items.push(format!(
                "'{}' skip 1 using 1:{col} with lines {} title '{}'",
                c.file,
                LINE_STYLES[i % 3],
                c.title
            ));
        }
        if let Some(r) = reference.filter(|_| *col == 5) {
            items.push(format!("'{r}' skip 1 using 1:2 with lines dt 3 lc 'black' title 'S_R min'"));
            items.push(format!("'{r}' skip 1 using 1:3 with lines dt 3 lc 'black' title 'S_R max'"));
        }
        writeln!(s, "plot {}", items.join(", \\\n     ")).unwrap();
    }
    writeln!(s, "unset multiplot").unwrap();
    s
}

/// Writes the CSV files and plot script of one figure into `out_dir`.
pub fn generate(fig: Figure, out_dir: &Path, samples: usize) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let curves = curves(fig, samples)?;
    let mut written = Vec::new();
    for c in &curves {
        let grid = c.config.theta_grid()?;
        let rows: Vec<SweepRow> = entropy_scan(&c.config, &grid)?
            .iter()
            .map(SweepRow::from_scan)
            .collect();
        let path = out_dir.join(&c.file);
        write(&path, &to_csv(&rows))?;
        written.push(path);
    }
    let reference = if fig == Figure::Fig2 {
        let [low, high] = extremal_entropies(FIGURE_MU, &IncidentAmplitudes::helicity_plus())?;
        let name = "fig2_reference.csv";
        let top = DEFAULT_THETA_MAX.sin();
        let body = format!(
            "sin_theta,s_min,s_max\n{:.16e},{low:.16e},{high:.16e}\n{top:.16e},{low:.16e},{high:.16e}\n",
            0.0
        );
        let path = out_dir.join(name);
        write(&path, &body)?;
        written.push(path);
        Some(name)
    } else {
        None
    };
    let path = out_dir.join(format!("{}.gp", fig.name()));
    write(&path, &script(fig, &curves, reference))?;
    written.push(path);
    Ok(written)
}
