//! The dyadic decay ladder: for `δ = 2^{-i}`, the L^p size of `D(τ_δ α(X))`
//! against its bound, and the trace norm of `τ̌_δ·X`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::action::act_spectral;
use crate::error::{Error, Result};
use crate::operator::{KernelOperator, SchattenExponent};
use crate::oscillator::{apply_h, h_inv_schatten_grid};
use crate::report::Report;
use crate::synthesis::constants::{constants_ledger, AlphaJet, ConstantsLedger};
use crate::synthesis::mollifier::{dyadic_ladder, tau_delta, MollifierFamily};

/// Expected slope band for the bound column, centered on `2/p - 1`.
pub const SLOPE_BAND: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub delta: f64,
    pub lp_norm: f64,
    pub bound: f64,
    pub s1_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayTable {
    pub p: f64,
    pub rows: Vec<DecayRow>,
    /// Log-log slope of the L^p column over the last three rows.
    pub fitted_slope: Option<f64>,
    /// Log-log slope of the bound column over the last three rows.
    pub bound_slope: Option<f64>,
    pub ledger: ConstantsLedger,
    pub requested_levels: usize,
    pub report: Report,
}

impl DecayTable {
    /// CSV with header `delta,lp_norm,bound,s1_norm`; floats in shortest
    /// round-trip form.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["delta", "lp_norm", "bound", "s1_norm"])?;
        for r in &self.rows {
            w.write_record([r.delta, r.lp_norm, r.bound, r.s1_norm].map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn read_csv_rows(text: &str) -> Result<Vec<DecayRow>> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let headers = rd.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["delta", "lp_norm", "bound", "s1_norm"] {
            return Err(Error::Format(format!("unexpected CSV header {headers:?}")));
        }
        rd.deserialize().map(|r| r.map_err(Error::from)).collect()
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn tail(rows: &[DecayRow]) -> &[DecayRow] {
    &rows[rows.len().saturating_sub(3)..]
}

/// Run the ladder `δ_i = 2^{-i}`, `i < levels`, truncated to resolvable scales.
pub fn decay_ladder(x: &KernelOperator, fam: &MollifierFamily, p: f64, levels: usize) -> Result<DecayTable> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidArgument(format!("p must lie in (1, 2), got {p}")));
    }
    if levels == 0 {
        return Err(Error::InvalidArgument("at least one level is required".into()));
    }
    let ledger = constants_ledger(x, fam)?;
    let grid = *fam.grid();
    let deltas = dyadic_ladder(&grid.x, levels);
    let jet = AlphaJet::new(x)?;
    let q = SchattenExponent::new(p)?.conjugate();
    let h_inv_norm = h_inv_schatten_grid(&grid.x, p)?;

    let mut report = Report::new("synthesis-decay", &grid.x);
    report.quantity("p", p).quantity("versal", fam.versal);
    report.quantity("requested_levels", levels as f64);
    report.quantity("resolved_levels", deltas.len() as f64);
    report.quantity("h_inverse_schatten_p", h_inv_norm);
    ledger.record(&mut report);
    if deltas.len() < levels {
        report.warn(format!(
            "ladder truncated to {} of {levels} levels: smaller scales are not resolvable on this grid",
            deltas.len()
        ));
    }

    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in &deltas {
        let u = jet.d_of_product(delta);
        let lp_norm = u.lp_norm(p);
        let bound = ledger.lp_bound(delta, p);
        let td = tau_delta(fam, delta)?;
        let acted = act_spectral(&td.tau_check, x)?;
        report.warn_opt(acted.accuracy_warning.clone());
        let y = acted.value;
        let s1_norm = y.trace_norm();
        let hy = apply_h(&y)?.value.schatten_norm(q);
        report.quantity(format!("scaling_discrepancy@{delta}"), td.scaling_error);
        report.check_le(format!("lp_bound@{delta}"), lp_norm, bound, 0.0);
        report.check_le(format!("sobolev_route@{delta}"), s1_norm, h_inv_norm * hy, 1e-6);
        rows.push(DecayRow {
            delta,
            lp_norm,
            bound,
            s1_norm,
        });
    }

    let last = tail(&rows);
    let zero = rows.iter().all(|r| r.s1_norm == 0.0);
    let decreasing = zero || last.windows(2).all(|w| w[1].s1_norm < w[0].s1_norm);
    report.check_flag("s1_strictly_decreasing_last_3", decreasing);

    let fitted_slope = loglog_slope(&last.iter().map(|r| (r.delta, r.lp_norm)).collect::<Vec<_>>());
    let bound_slope = loglog_slope(&last.iter().map(|r| (r.delta, r.bound)).collect::<Vec<_>>());
    let expected = 2.0 / p - 1.0;
    report.quantity("expected_slope", expected);
    if let Some(s) = fitted_slope {
        report.quantity("fitted_slope", s);
        if s <= 0.0 {
            report.warn(format!("L^p column slope {s:.4} is not positive"));
        }
    }
    if let Some(s) = bound_slope {
        report.quantity("bound_slope", s);
        if (s - expected).abs() > SLOPE_BAND {
            report.warn(format!(
                "bound column slope {s:.4} lies outside {expected:.4} ± {SLOPE_BAND} over the resolved levels"
            ));
        }
    }

    Ok(DecayTable {
        p,
        rows,
        fitted_slope,
        bound_slope,
        ledger,
        requested_levels: levels,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 0.5, 0.25].iter().map(|&d: &f64| (d, 3.0 * d.powf(0.4))).collect();
        assert!((loglog_slope(&pts).unwrap() - 0.4).abs() < 1e-12);
        assert!(loglog_slope(&pts[..1]).is_none());
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            DecayRow {
                delta: 1.0,
                lp_norm: 0.1 + 0.2,
                bound: 1e300,
                s1_norm: 5e-324,
            },
            DecayRow {
                delta: 0.5,
                lp_norm: 1.0 / 3.0,
                bound: 2.0,
                s1_norm: 0.0,
            },
        ];
        let g = crate::grid::LineGrid::self_dual(16).unwrap();
        let table = DecayTable {
            p: 1.5,
            rows: rows.clone(),
            fitted_slope: None,
            bound_slope: None,
            ledger: ConstantsLedger::from_parts(1.0, 1.0, (1.0, 1.0, 1.0), [1.0; 3]),
            requested_levels: 2,
            report: Report::new("t", &g),
        };
        let text = table.to_csv_string().unwrap();
        assert!(text.starts_with("delta,lp_norm,bound,s1_norm\n1,0.30000000000000004,"));
        assert_eq!(DecayTable::read_csv_rows(&text).unwrap(), rows);
    }
}
