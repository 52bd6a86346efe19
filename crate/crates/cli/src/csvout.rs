//! Small CSV writers for curve, profile, potential, and map-sample dumps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Result;
use heisqc_core::curves::HorizontalCurve;
use heisqc_core::lift::{Profile, ThetaPotential};

pub fn write_curve(path: &Path, curve: &HorizontalCurve, n: usize) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "s,re_z,im_z,t")?;
    let (s0, s1) = curve.interval();
    for i in 0..=n {
        let s = s0 + (s1 - s0) * i as f64 / n as f64;
        let p = curve.position(s);
        writeln!(w, "{s:.17e},{:.17e},{:.17e},{:.17e}", p.z.re, p.z.im, p.t)?;
    }
    Ok(())
}

pub fn write_profile(path: &Path, profile: &Profile) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "x,varphi,slope")?;
    let (xs, values, slopes) = profile.knots();
    for ((x, v), s) in xs.iter().zip(values).zip(slopes) {
        writeln!(w, "{x:.17e},{v:.17e},{s:.17e}")?;
    }
    Ok(())
}

pub fn write_potential(path: &Path, pot: &ThetaPotential) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "s,x,h")?;
    for (i, s) in pot.s_grid.iter().enumerate() {
        for (j, x) in pot.x_grid.iter().enumerate() {
            writeln!(w, "{s:.17e},{x:.17e},{:.17e}", pot.h[i][j])?;
        }
    }
    Ok(())
}

/// Map samples as `(Re z, Im z, t, Re f1, Im f1, f2, K)` rows.
pub struct MapSampleRow {
    pub z_re: f64,
    pub z_im: f64,
    pub t: f64,
    pub f1_re: f64,
    pub f1_im: f64,
    pub f2: f64,
    pub k: f64,
}

pub fn write_map_samples(path: &Path, rows: &[MapSampleRow]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "re_z,im_z,t,re_f1,im_f1,f2,K")?;
    for r in rows {
        writeln!(
            w,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            r.z_re, r.z_im, r.t, r.f1_re, r.f1_im, r.f2, r.k
        )?;
    }
    Ok(())
}
