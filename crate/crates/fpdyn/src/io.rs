//! Text formats: trajectory CSV, itinerary JSON and the β-scan table.
//!
//! Every float is written with 12 significant digits so repeated runs are
//! byte-identical.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::flow::{ItineraryEntry, Motion, Trajectory};
use crate::game::{p_from_v, BimatrixGame};
use crate::orbit::{orbit, orbit_stability, OrbitKind, StabilityClass};
use crate::transition::leg_name;

pub const TRAJECTORY_HEADER: &str =
    "event_index,s_cum,rho_cum,regionA,regionB,vA1,vA2,vA3,vB1,vB2,vB3,pA1,pA2,pA3,pB1,pB2,pB3,event_kind";

pub const SCAN_HEADER: &str = "beta,orbit_kind,exists,n1,n2,n3,m1,m2,m3,t1,t2,diameter,\
eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,classification";

/// `x` with 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (m, e) = s.split_once('e').unwrap();
        let m = if m.contains('.') { m.trim_end_matches('0').trim_end_matches('.') } else { m };
        format!("{m}e{e}")
    };
    if s == "-0" { "0".into() } else { s }
}

/// `x` rounded to 12 significant digits, for JSON output.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().unwrap_or(x)
    } else {
        x
    }
}

fn strategy_cell(active: &[usize]) -> String {
    active.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join("+")
}

/// Region columns: the strategies each player keeps on top during the
/// segment leaving the event (the last segment for the final event).
fn region_cells(m: &Motion) -> (String, String) {
    match m {
        Motion::Pure { a, b } => (strategy_cell(&[*a]), strategy_cell(&[*b])),
        Motion::Slide { a_pair, b_pair, .. } => (strategy_cell(&a_pair.as_array()), strategy_cell(&b_pair.as_array())),
    }
}

pub fn trajectory_csv(game: &BimatrixGame, t: &Trajectory) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for (k, ev) in t.events.iter().enumerate() {
        let motion = ev
            .next_segment
            .and_then(|i| t.segments.get(i))
            .or(t.segments.last())
            .map(|s| &s.motion);
        let (ra, rb) = motion.map(region_cells).unwrap_or_default();
        let p = p_from_v(game, &ev.state).ok();
        let p_cells: Vec<String> = match &p {
            Some(p) => p.pa.as_slice().iter().chain(p.pb.as_slice()).map(|x| fmt_sig(*x)).collect(),
            None => vec!["nan".into(); 2 * game.n()],
        };
        let v_cells: Vec<String> = ev.state.va.iter().chain(&ev.state.vb).map(|x| fmt_sig(*x)).collect();
        let _ = writeln!(
            out,
            "{k},{},{},{ra},{rb},{},{},{}",
            fmt_sig(ev.s_cum),
            fmt_sig(ev.rho_cum),
            v_cells.join(","),
            p_cells.join(","),
            ev.kind
        );
    }
    out
}

/// Itinerary as a JSON list. Slides carry `"A": 0, "B": 0` and a `"slide"`
/// object naming the tie piece, the tied pairs and the mixing weights.
pub fn itinerary_json(it: &[ItineraryEntry]) -> Value {
    Value::Array(
        it.iter()
            .map(|e| match &e.motion {
                Motion::Pure { a, b } => json!({
                    "A": a + 1,
                    "B": b + 1,
                    "duration_s": round_sig(e.duration_s),
                    "duration_rho": round_sig(e.duration_rho),
                }),
                Motion::Slide { a_pair, b_pair, wa, wb } => json!({
                    "A": 0,
                    "B": 0,
                    "duration_s": round_sig(e.duration_s),
                    "duration_rho": round_sig(e.duration_rho),
                    "slide": {
                        "leg": e.motion.leg().map(leg_name),
                        "pairA": [a_pair.0 + 1, a_pair.1 + 1],
                        "pairB": [b_pair.0 + 1, b_pair.1 + 1],
                        "wA": wa.map(round_sig),
                        "wB": wb.map(round_sig),
                    }
                }),
            })
            .collect(),
    )
}

/// Whole trajectory as JSON: events with states and kinds.
pub fn trajectory_json(game: &BimatrixGame, t: &Trajectory) -> Value {
    let r = |v: &[f64]| v.iter().map(|x| round_sig(*x)).collect::<Vec<_>>();
    Value::Array(
        t.events
            .iter()
            .enumerate()
            .map(|(k, ev)| {
                let p = p_from_v(game, &ev.state).ok();
                json!({
                    "event_index": k,
                    "s_cum": round_sig(ev.s_cum),
                    "rho_cum": round_sig(ev.rho_cum),
                    "vA": r(&ev.state.va),
                    "vB": r(&ev.state.vb),
                    "pA": p.as_ref().map(|p| r(p.pa.as_slice())),
                    "pB": p.as_ref().map(|p| r(p.pb.as_slice())),
                    "event_kind": ev.kind.to_string(),
                })
            })
            .collect(),
    )
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// One row of a β scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub beta: f64,
    pub orbit_kind: OrbitKind,
    pub exists: bool,
    pub n: Option<[f64; 3]>,
    pub m: Option<[f64; 3]>,
    pub durations: Option<(f64, f64)>,
    pub diameter: Option<f64>,
    pub eigenvalues: Option<[(f64, f64); 3]>,
    pub classification: Option<StabilityClass>,
}

pub fn scan_row(beta: f64, kind: OrbitKind) -> ScanRow {
    let mut row = ScanRow {
        beta,
        orbit_kind: kind,
        exists: false,
        n: None,
        m: None,
        durations: None,
        diameter: None,
        eigenvalues: None,
        classification: None,
    };
    let Ok(spec) = orbit(kind, beta) else { return row };
    row.exists = true;
    row.n = Some(spec.section_n);
    row.m = Some(spec.section_m);
    row.durations = Some(spec.durations);
    row.diameter = Some(spec.diameter);
    if let Ok(rep) = orbit_stability(&spec) {
        row.eigenvalues = Some(rep.eigenvalues.map(|z| (z.re, z.im)));
        row.classification = Some(rep.classification);
    }
    row
}

impl ScanRow {
    pub fn csv_line(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_sig).unwrap_or_default();
        let mut cells = vec![fmt_sig(self.beta), self.orbit_kind.name().to_string(), self.exists.to_string()];
        for k in 0..3 {
            cells.push(opt(self.n.map(|v| v[k])));
        }
        for k in 0..3 {
            cells.push(opt(self.m.map(|v| v[k])));
        }
        cells.push(opt(self.durations.map(|d| d.0)));
        cells.push(opt(self.durations.map(|d| d.1)));
        cells.push(opt(self.diameter));
        for k in 0..3 {
            cells.push(opt(self.eigenvalues.map(|e| e[k].0)));
            cells.push(opt(self.eigenvalues.map(|e| e[k].1)));
        }
        cells.push(self.classification.map(|c| format!("{c:?}")).unwrap_or_default());
        cells.join(",")
    }
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// Evenly spaced grid with both ends included (`steps` points).
pub fn beta_grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n).map(|k| (from * (n - 1 - k) as f64 + to * k as f64) / (n - 1) as f64).collect(),
    }
}

/// Write `contents` to `dir/name`, creating `dir`.
pub fn write_file(dir: &std::path::Path, name: &str, contents: &str) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0 / 3.0 * 1e3), "666.666666667");
        assert_eq!(fmt_sig(1.234e-9), "1.234e-9");
        assert_eq!(fmt_sig(-1e-20), "-1e-20");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_sig(-1e-30 * 0.0), "0");
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
    }

    #[test]
    fn grid() {
        assert_eq!(beta_grid(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(beta_grid(0.2, 0.9, 1), vec![0.2]);
        assert_eq!(beta_grid(-0.9, 1.0, 20)[9], 0.0);
    }

    #[test]
    fn scan_rows_have_header_width() {
        let cols = SCAN_HEADER.split(',').count();
        for kind in [OrbitKind::Clockwise, OrbitKind::Anticlockwise] {
            for beta in [0.0, 1.0] {
                assert_eq!(scan_row(beta, kind).csv_line().split(',').count(), cols);
            }
        }
    }
}
