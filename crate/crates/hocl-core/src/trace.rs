//! Time-series traces and their CSV serialization.
//!
//! The trace schema is a stable contract: header
//! `t,r,gate,mean_abs_dtheta,mean_abs_dw,frob_w,v_theta,v_w,v_total`, one row
//! per step, floats printed with 17 significant digits so a parsed value
//! round-trips to the identical f64 bits.

use crate::plasticity::WeightMatrix;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const TRACE_HEADER: &str = "t,r,gate,mean_abs_dtheta,mean_abs_dw,frob_w,v_theta,v_w,v_total";

/// 17-significant-digit scientific form; enough digits for bit-faithful
/// f64 round-trips.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One recorded step of a coupled simulation. All non-time fields are taken
/// from the state after the step's phase and weight updates.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    pub r: f64,
    pub gate: f64,
    pub mean_abs_dtheta: f64,
    pub mean_abs_dw: f64,
    pub frob_w: f64,
    pub v_theta: f64,
    pub v_w: f64,
    pub v_total: f64,
}

impl TraceRow {
    fn to_csv_line(self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.t,
            format_float(self.r),
            format_float(self.gate),
            format_float(self.mean_abs_dtheta),
            format_float(self.mean_abs_dw),
            format_float(self.frob_w),
            format_float(self.v_theta),
            format_float(self.v_w),
            format_float(self.v_total),
        )
    }
}

/// Full per-step time series of one run.
#[derive(Clone, Debug, Default)]
pub struct SimulationTrace {
    pub rows: Vec<TraceRow>,
}

impl SimulationTrace {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{TRACE_HEADER}")?;
        for row in &self.rows {
            writeln!(out, "{}", row.to_csv_line())?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write into Vec cannot fail");
        String::from_utf8(buf).expect("csv text is ascii")
    }

    /// Column accessor used by the diagnostics (r, mean|ΔW|, ...).
    pub fn column<F: Fn(&TraceRow) -> f64>(&self, f: F) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    /// First step at which r exceeded the threshold, if any.
    pub fn gate_open_step(&self, r_c: f64) -> Option<usize> {
        self.rows.iter().position(|row| row.r > r_c)
    }
}

/// Terminal state of a run: what downstream tooling needs to reproduce or
/// inspect the endpoint. Weights serialize row-major inside the matrix type.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinalState {
    pub phases: Vec<f64>,
    pub frequencies: Vec<f64>,
    pub weights: WeightMatrix,
    pub cluster_labels: Vec<usize>,
    pub cluster_partition: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_bits() {
        for x in [
            0.1,
            std::f64::consts::PI,
            1.0 / 3.0,
            -2.5e-17,
            1234567.89,
            f64::MIN_POSITIVE,
        ] {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "round-trip of {s}");
        }
    }

    #[test]
    fn csv_has_header_and_one_line_per_row() {
        let trace = SimulationTrace {
            rows: vec![TraceRow {
                t: 0,
                r: 0.5,
                gate: 0.5,
                mean_abs_dtheta: 1.0,
                mean_abs_dw: 0.0,
                frob_w: 0.0,
                v_theta: -1.0,
                v_w: 0.0,
                v_total: -1.0,
            }],
        };
        let text = trace.to_csv_string();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), TRACE_HEADER);
        assert_eq!(lines.count(), 1);
    }

    #[test]
    fn gate_open_step_finds_first_crossing() {
        let mk = |t: usize, r: f64| TraceRow {
            t,
            r,
            gate: 0.0,
            mean_abs_dtheta: 0.0,
            mean_abs_dw: 0.0,
            frob_w: 0.0,
            v_theta: 0.0,
            v_w: 0.0,
            v_total: 0.0,
        };
        let trace = SimulationTrace { rows: vec![mk(0, 0.1), mk(1, 0.6), mk(2, 0.4)] };
        assert_eq!(trace.gate_open_step(0.5), Some(1));
        assert_eq!(trace.gate_open_step(0.9), None);
    }
}
