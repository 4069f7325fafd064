//! Sweep rows and their CSV encoding.

use std::fmt::Write as _;

use serde::Serialize;

use crate::entanglement::ScanPoint;

pub const CSV_HEADER: &str =
    "sin_theta,zone,r2_total,t2_flux,s_r,s_t,chi_r,chi_t,conservation_residual";

/// One line of a sweep. `None` fields are written as empty CSV cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sin_theta: f64,
    pub zone: String,
    pub r2_total: Option<f64>,
    pub t2_flux: Option<f64>,
    pub s_r: Option<f64>,
    pub s_t: Option<f64>,
    pub chi_r: Option<f64>,
    pub chi_t: Option<f64>,
    pub conservation_residual: Option<f64>,
}

impl SweepRow {
    /// Failed points keep their angle and get the zone tag `error`.
    pub fn from_scan(point: &ScanPoint) -> Self {
        let sin_theta = point.theta.sin();
        match &point.outcome {
            Ok(obs) => {
                let weight = |a: num_complex::Complex64, b: num_complex::Complex64| {
                    a.norm_sqr() + b.norm_sqr()
                };
                let amps = obs.solution.amplitudes;
                Self {
                    sin_theta,
                    zone: obs.zone().as_str().to_string(),
                    r2_total: Some(obs.r2_total()),
                    t2_flux: Some(obs.t2_flux()),
                    s_r: obs.s_r(),
                    s_t: obs.s_t(),
                    chi_r: obs
                        .reflected
                        .map(|r| r.chirality / weight(amps.r_plus, amps.r_minus)),
                    chi_t: obs
                        .transmitted
                        .map(|t| t.chirality / weight(amps.t_plus, amps.t_minus)),
                    conservation_residual: Some(obs.solution.conservation_residual()),
                }
            }
            Err(_) => Self {
                sin_theta,
                zone: "error".to_string(),
                r2_total: None,
                t2_flux: None,
                s_r: None,
                s_t: None,
                chi_r: None,
                chi_t: None,
                conservation_residual: None,
            },
        }
    }

    pub fn to_csv_line(&self) -> String {
        let mut line = String::new();
        write!(line, "{:.16e},{}", self.sin_theta, self.zone).unwrap();
        for v in [
            self.r2_total,
            self.t2_flux,
            self.s_r,
            self.s_t,
            self.chi_r,
            self.chi_t,
            self.conservation_residual,
        ] {
            line.push(',');
            if let Some(x) = v {
                write!(line, "{x:.16e}").unwrap();
            }
        }
        line
    }
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}
