//! Per-snapshot diagnostics shared by both solvers.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::fields::fmt17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// signed mass `∫ u`
    pub mass: f64,
    pub l1_norm: f64,
    pub l2_norm: f64,
    /// `‖u‖_∞`; infinite once particles coincide
    pub max_u: f64,
    pub min_u: f64,
    pub min_velocity: f64,
    pub max_velocity: f64,
    /// velocity of the leftmost particle (or leftmost support face on the grid)
    pub left_velocity: f64,
    /// velocity of the rightmost particle (or rightmost support face)
    pub right_velocity: f64,
    /// Lipschitz bound of the transport field in force at this time
    pub lipschitz_bound: f64,
    pub support_left: f64,
    pub support_right: f64,
    pub centroid: f64,
    /// mass-weighted standard deviation
    pub spread: f64,
    /// time-step halvings so far (grid solver)
    pub dt_halvings: u64,
}

pub const CSV_HEADER: &str = "t,mass,l1_norm,l2_norm,max_u,min_u,min_velocity,max_velocity,left_velocity,right_velocity,lipschitz_bound,support_left,support_right,centroid,spread,dt_halvings";

impl DiagnosticsRecord {
    pub fn csv_row(&self) -> String {
        let cols = [
            self.t,
            self.mass,
            self.l1_norm,
            self.l2_norm,
            self.max_u,
            self.min_u,
            self.min_velocity,
            self.max_velocity,
            self.left_velocity,
            self.right_velocity,
            self.lipschitz_bound,
            self.support_left,
            self.support_right,
            self.centroid,
            self.spread,
        ];
        let mut s: String = cols.iter().map(|v| fmt17(*v)).collect::<Vec<_>>().join(",");
        s.push(',');
        s.push_str(&self.dt_halvings.to_string());
        s
    }
}

pub fn write_diagnostics_csv<W: Write>(mut w: W, records: &[DiagnosticsRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Mass-weighted centroid and standard deviation of points `xs` with weights `ws`.
pub fn centroid_and_spread(xs: &[f64], ws: &[f64]) -> (f64, f64) {
    let m: f64 = ws.iter().sum();
    if m == 0.0 {
        return (f64::NAN, 0.0);
    }
    let c = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / m;
    let var = xs.iter().zip(ws).map(|(x, w)| w * (x - c) * (x - c)).sum::<f64>() / m;
    (c, var.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centroid_of_symmetric_pair() {
        let (c, s) = centroid_and_spread(&[-1.0, 1.0], &[0.5, 0.5]);
        assert_eq!(c, 0.0);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn csv_row_has_all_columns() {
        let r = DiagnosticsRecord {
            t: 0.1,
            mass: 1.0,
            l1_norm: 1.0,
            l2_norm: 1.0,
            max_u: 2.0,
            min_u: 0.0,
            min_velocity: 0.0,
            max_velocity: 1.0,
            left_velocity: 1.0,
            right_velocity: 0.0,
            lipschitz_bound: 5.0,
            support_left: 0.0,
            support_right: 0.5,
            centroid: 0.25,
            spread: 0.1,
            dt_halvings: 3,
        };
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("1.0000000000000001e-1,"));
        assert!(row.ends_with(",3"));
    }
}
