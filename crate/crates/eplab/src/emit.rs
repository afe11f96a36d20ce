//! Deterministic CSV and JSON emission.
//!
//! Floats print as `{:.16e}` (17 significant digits), enough to round-trip
//! any binary64 value, so identical runs produce byte-identical files.

use std::io::{self, Write};

use epcore::scattering::{CrossSectionGrid, CrossSectionSurface};
use epcore::sweep::TrajectorySet;
use serde_json::{json, Value};

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `{param},state,E,gamma_half,rigidity,a_norm,b_sq_1..b_sq_N`; one row per
/// grid point per state, grid-major, tracks numbered from 1.
pub fn write_trajectories_csv<W: Write>(mut w: W, ts: &TrajectorySet) -> io::Result<()> {
    let n = ts.n_states();
    write!(w, "{},state,E,gamma_half,rigidity,a_norm", ts.param.as_str())?;
    for j in 1..=n {
        write!(w, ",b_sq_{j}")?;
    }
    writeln!(w)?;
    for (i, &t) in ts.grid.iter().enumerate() {
        for (k, track) in ts.tracks.iter().enumerate() {
            let s = &track[i];
            write!(
                w,
                "{},{},{},{},{},{}",
                fmt_float(t),
                k + 1,
                fmt_float(s.energy()),
                fmt_float(s.gamma_half()),
                fmt_float(s.rigidity),
                fmt_float(s.a_norm)
            )?;
            for j in 0..n {
                write!(w, ",{}", fmt_float(s.mixing_sq[j]))?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

/// `E,sigma,re_S,im_S` in grid order.
pub fn write_xsec_csv<W: Write>(mut w: W, grid: &CrossSectionGrid) -> io::Result<()> {
    writeln!(w, "E,sigma,re_S,im_S")?;
    for i in 0..grid.energies.len() {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_float(grid.energies[i]),
            fmt_float(grid.sigma[i]),
            fmt_float(grid.s_values[i].re),
            fmt_float(grid.s_values[i].im)
        )?;
    }
    Ok(())
}

/// `y,E,sigma`, row-major over `y`.
pub fn write_surface_csv<W: Write>(mut w: W, surf: &CrossSectionSurface) -> io::Result<()> {
    writeln!(w, "y,E,sigma")?;
    for (row, &y) in surf.y.iter().enumerate() {
        for (col, &e) in surf.energies.iter().enumerate() {
            writeln!(w, "{},{},{}", fmt_float(y), fmt_float(e), fmt_float(surf.sigma[row][col]))?;
        }
    }
    Ok(())
}

pub fn trajectories_json(ts: &TrajectorySet) -> Value {
    let tracks: Vec<Value> = ts
        .tracks
        .iter()
        .enumerate()
        .map(|(k, track)| {
            json!({
                "state": k + 1,
                "E": track.iter().map(|s| s.energy()).collect::<Vec<_>>(),
                "gamma_half": track.iter().map(|s| s.gamma_half()).collect::<Vec<_>>(),
                "rigidity": track.iter().map(|s| s.rigidity).collect::<Vec<_>>(),
                "a_norm": track.iter().map(|s| s.a_norm).collect::<Vec<_>>(),
                "b_sq": track.iter().map(|s| s.mixing_sq.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "param": ts.param.as_str(),
        "grid": ts.grid,
        "tracks": tracks,
    })
}

pub fn xsec_json(grid: &CrossSectionGrid) -> Value {
    json!({
        "E": grid.energies,
        "sigma": grid.sigma,
        "re_S": grid.s_values.iter().map(|s| s.re).collect::<Vec<_>>(),
        "im_S": grid.s_values.iter().map(|s| s.im).collect::<Vec<_>>(),
    })
}

pub fn surface_json(surf: &CrossSectionSurface) -> Value {
    json!({
        "y": surf.y,
        "E": surf.energies,
        "sigma": surf.sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use epcore::scattering::{cross_section, ResonancePair};
    use epcore::sweep::{run_sweep, SweepParam, SweepPlan};
    use epcore::model::{CouplingLaw, EnergyCurve, LevelSpec, SystemConfig};
    use num_complex::Complex64;

    #[test]
    fn float_format_is_17_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_float(-1.0), "-1.0000000000000000e0");
        assert_eq!(fmt_float(1.0 / 3.0), "3.3333333333333331e-1");
        // round-trips exactly
        let x = 0.1 + 0.2;
        assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn trajectory_schema_matches_state_count() {
        let cfg = SystemConfig::pair(
            LevelSpec::new(EnergyCurve::linear(1.0, -0.5), -0.5).unwrap(),
            LevelSpec::new(EnergyCurve::linear(0.0, 1.0), -0.5).unwrap(),
            CouplingLaw::constant(Complex64::new(0.0, 0.1)),
        )
        .unwrap();
        let plan = SweepPlan::new(cfg, SweepParam::A, 0.1, 0.3, 2, None).unwrap();
        let ts = run_sweep(&plan).unwrap();
        let mut buf = Vec::new();
        write_trajectories_csv(&mut buf, &ts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "a,state,E,gamma_half,rigidity,a_norm,b_sq_1,b_sq_2");
        // 2 grid points x 2 states
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn xsec_schema() {
        let pair = ResonancePair::new(0.0, -0.5, 1.0, -0.5).unwrap();
        let grid = cross_section(&[0.0, 0.5, 1.0], &pair);
        let mut buf = Vec::new();
        write_xsec_csv(&mut buf, &grid).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("E,sigma,re_S,im_S\n"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn json_is_deterministic() {
        let pair = ResonancePair::new(0.0, -0.5, 1.0, -0.5).unwrap();
        let grid = cross_section(&[0.0, 0.5], &pair);
        let a = serde_json::to_string(&xsec_json(&grid)).unwrap();
        let b = serde_json::to_string(&xsec_json(&grid)).unwrap();
        assert_eq!(a, b);
    }
}
