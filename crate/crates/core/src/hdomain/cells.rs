//! Adaptive tensor-Gauss cells over parametrised patches of a region.
//!
//! Every patch maps a parameter rectangle onto part of H and carries the
//! density of dμ in those parameters. Refinement proceeds in rounds; each
//! round evaluates new cells in parallel and the final sum is a pairwise tree
//! over cells in positional order, so a fixed decomposition is bit-stable.

use super::region::{ford_radius, gcd, Region};
use super::HPoint;
use crate::error::{Error, Result};
use crate::quad::{gauss, pairwise_sum, GaussRule};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub cells_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss points per axis: 10, 20 or 32.
    pub order: usize,
    pub max_cells: usize,
    /// Relative tolerance applied on top of the absolute one.
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { order: 10, max_cells: 2_000_000, rel_tol: 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
enum Patch {
    /// (x, u) with y = e^u.
    LogRect,
    /// (x, t) with y = h + t(1 - h), h = √(1 - x²).
    Compact,
    /// (τ, w) over a disc tangent at cx: φ = e^w, x = cx + τ r sin φ, y = r(1 - cos φ).
    DiscLog { cx: f64, r: f64 },
}

impl Patch {
    #[inline]
    fn map(&self, p: f64, q: f64) -> (HPoint, f64) {
        match *self {
            Patch::LogRect => {
                let y = q.exp();
                (HPoint { x: p, y }, 1.0 / y)
            }
            Patch::Compact => {
                let h = (1.0 - p * p).sqrt();
                let y = h + q * (1.0 - h);
                (HPoint { x: p, y }, (1.0 - h) / (y * y))
            }
            Patch::DiscLog { cx, r } => {
                let phi = q.exp();
                let s = phi.sin();
                let half = (0.5 * phi).sin();
                let y = 2.0 * r * half * half;
                // r² sin²φ / y² · dφ/dw
                let w = (r * s / y).powi(2) * phi;
                (HPoint { x: cx + p * r * s, y }, w)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    patch: usize,
    p0: f64,
    p1: f64,
    q0: f64,
    q1: f64,
}

impl Rect {
    fn split(&self) -> [Rect; 4] {
        let pm = 0.5 * (self.p0 + self.p1);
        let qm = 0.5 * (self.q0 + self.q1);
        let r = *self;
        [
            Rect { p1: pm, q1: qm, ..r },
            Rect { p0: pm, q1: qm, ..r },
            Rect { p1: pm, q0: qm, ..r },
            Rect { p0: pm, q0: qm, ..r },
        ]
    }

    fn tiny(&self) -> bool {
        let dp = self.p1 - self.p0;
        let dq = self.q1 - self.q0;
        dp <= 1e-13 * (self.p0.abs() + self.p1.abs()).max(1e-300) || dq <= 1e-13 * (self.q0.abs() + self.q1.abs()).max(1e-300)
    }
}

struct Cell {
    rect: Rect,
    /// Sum of the four children.
    value: Complex64,
    err: f64,
}

struct Plan {
    patches: Vec<(Patch, f64)>,
    rects: Vec<Rect>,
    /// Error carried by truncated tails toward y → 0.
    tail_err: f64,
}

fn rule_on<F>(f: &F, g: &GaussRule, patches: &[(Patch, f64)], r: &Rect) -> Complex64
where
    F: Fn(HPoint) -> Complex64 + Sync,
{
    let (patch, sign) = patches[r.patch];
    let pc = 0.5 * (r.p0 + r.p1);
    let ph = 0.5 * (r.p1 - r.p0);
    let qc = 0.5 * (r.q0 + r.q1);
    let qh = 0.5 * (r.q1 - r.q0);
    let mut acc = Vec::with_capacity(g.nodes.len());
    for (qn, qw) in g.nodes.iter().zip(&g.weights) {
        let q = qc + qh * qn;
        let mut row = Complex64::new(0.0, 0.0);
        for (pn, pw) in g.nodes.iter().zip(&g.weights) {
            let (z, w) = patch.map(pc + ph * pn, q);
            if w != 0.0 && w.is_finite() {
                row += f(z) * (w * pw);
            }
        }
        acc.push(row * *qw);
    }
    pairwise_sum(&acc) * (ph * qh * sign)
}

fn make_cell<F>(f: &F, g: &GaussRule, patches: &[(Patch, f64)], r: Rect, parent: Complex64) -> Cell
where
    F: Fn(HPoint) -> Complex64 + Sync,
{
    let kids = r.split();
    let vals: Vec<Complex64> = kids.iter().map(|k| rule_on(f, g, patches, k)).collect();
    let value = pairwise_sum(&vals);
    let err = if r.tiny() { 0.0 } else { (value - parent).norm() };
    Cell { rect: r, value, err }
}

// Column magnitude ∫|f w| dp at fixed q, used to locate the y → 0 cut.
fn column<F>(f: &F, patch: Patch, p0: f64, p1: f64, q: f64) -> f64
where
    F: Fn(HPoint) -> Complex64 + Sync,
{
    let g = gauss(10);
    let pc = 0.5 * (p0 + p1);
    let ph = 0.5 * (p1 - p0);
    let mut s = 0.0;
    for (pn, pw) in g.nodes.iter().zip(&g.weights) {
        let (z, w) = patch.map(pc + ph * pn, q);
        if w.is_finite() {
            s += f(z).norm() * w * pw;
        }
    }
    s * ph
}

// Walk q downward until the column magnitude has decayed below `floor`;
// returns (q_cut, tail bound) assuming exponential decay in q.
fn lower_cut<F>(f: &F, patch: Patch, p0: f64, p1: f64, q_top: f64, floor: f64) -> Result<(f64, f64)>
where
    F: Fn(HPoint) -> Complex64 + Sync,
{
    let mut q = q_top - 1.0;
    let mut prev = column(f, patch, p0, p1, q_top);
    for _ in 0..400 {
        let cur = column(f, patch, p0, p1, q);
        if cur == 0.0 && prev < floor {
            return Ok((q, 0.0));
        }
        if cur < prev && cur < floor {
            let rate = (prev / cur).ln();
            if rate > 0.05 {
                return Ok((q, cur / rate));
            }
        }
        prev = cur;
        q -= 1.0;
    }
    Err(Error::DivergentRegion("integrand does not decay toward the real axis".into()))
}

fn plan<F>(f: &F, region: &Region, tol: f64) -> Result<Plan>
where
    F: Fn(HPoint) -> Complex64 + Sync,
{
    region.validate()?;
    let mut patches = Vec::new();
    let mut rects = Vec::new();
    let mut tail_err = 0.0;
    let log_rect = |patches: &mut Vec<(Patch, f64)>, rects: &mut Vec<Rect>, u0: f64, u1: f64| {
        patches.push((Patch::LogRect, 1.0));
        let k = patches.len() - 1;
        let n = ((u1 - u0) / 1.0).ceil().max(1.0) as usize;
        for i in 0..n {
            let a = u0 + (u1 - u0) * i as f64 / n as f64;
            let b = u0 + (u1 - u0) * (i + 1) as f64 / n as f64;
            rects.push(Rect { patch: k, p0: -0.5, p1: 0.0, q0: a, q1: b });
            rects.push(Rect { patch: k, p0: 0.0, p1: 0.5, q0: a, q1: b });
        }
    };
    let compact = |patches: &mut Vec<(Patch, f64)>, rects: &mut Vec<Rect>| {
        patches.push((Patch::Compact, 1.0));
        let k = patches.len() - 1;
        for (p0, p1) in [(-0.5, -0.25), (-0.25, 0.0), (0.0, 0.25), (0.25, 0.5)] {
            rects.push(Rect { patch: k, p0, p1, q0: 0.0, q1: 1.0 });
        }
    };
    match *region {
        Region::FundamentalTruncated { t_hat } => {
            compact(&mut patches, &mut rects);
            if t_hat > 1.0 {
                log_rect(&mut patches, &mut rects, 0.0, t_hat.ln());
            }
        }
        Region::CuspBox { t } => {
            if t > 1.0 {
                log_rect(&mut patches, &mut rects, 0.0, t.ln());
            }
        }
        Region::FundCompactPart => compact(&mut patches, &mut rects),
        Region::ZagierStrip { t_hat, c_max } => {
            if c_max == 0 {
                return Err(Error::DivergentRegion("no discs excised from the strip".into()));
            }
            let top = t_hat.ln();
            let floor = tol * 1e-4;
            let (cut, tail) = lower_cut(f, Patch::LogRect, -0.5, 0.5, top, floor)?;
            tail_err += tail;
            log_rect(&mut patches, &mut rects, cut, top);
            // Subtract the excised discs; they are disjoint and, f being
            // 1-periodic, each is counted once whatever its position mod 1.
            let mut discs = Vec::new();
            for c in 1..=c_max {
                let r = ford_radius(c, t_hat);
                for a in 0..c as i64 {
                    if gcd(a, c as i64) != 1 {
                        continue;
                    }
                    let mut cx = a as f64 / c as f64;
                    if cx > 0.5 {
                        cx -= 1.0;
                    }
                    discs.push((cx, r));
                }
            }
            let per_disc = floor / discs.len() as f64;
            let cuts: Vec<Result<(f64, f64)>> = discs
                .par_iter()
                .map(|&(cx, r)| lower_cut(f, Patch::DiscLog { cx, r }, -1.0, 1.0, std::f64::consts::PI.ln(), per_disc))
                .collect();
            for (&(cx, r), cut) in discs.iter().zip(cuts) {
                let (w0, tail) = cut?;
                tail_err += tail;
                patches.push((Patch::DiscLog { cx, r }, -1.0));
                let k = patches.len() - 1;
                rects.push(Rect { patch: k, p0: -1.0, p1: 1.0, q0: w0, q1: std::f64::consts::PI.ln() });
            }
        }
    }
    Ok(Plan { patches, rects, tail_err })
}

/// ∫_region f dμ with absolute tolerance `tol` and default settings.
pub fn integrate<F>(f: F, region: &Region, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(HPoint) -> Complex64 + Sync,
{
    integrate_with(f, region, tol, &QuadratureConfig::default())
}

pub fn integrate_with<F>(f: F, region: &Region, tol: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(HPoint) -> Complex64 + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance must be > 0, got {tol}")));
    }
    let g = gauss(cfg.order);
    let Plan { patches, rects, tail_err } = plan(&f, region, tol)?;
    let parents: Vec<Complex64> = rects.par_iter().map(|r| rule_on(&f, g, &patches, r)).collect();
    let mut cells: Vec<Cell> = rects
        .into_par_iter()
        .zip(parents.into_par_iter())
        .map(|(r, p)| make_cell(&f, g, &patches, r, p))
        .collect();
    loop {
        let total_err: f64 = cells.iter().map(|c| c.err).sum::<f64>() + tail_err;
        let value_norm: f64 = cells.iter().map(|c| c.value).sum::<Complex64>().norm();
        let target = tol.max(cfg.rel_tol * value_norm);
        // Rounding floor: cells cannot agree better than a few ulps of their magnitude.
        let floor: f64 = cells.iter().map(|c| c.value.norm()).sum::<f64>() * 1e-14;
        if total_err <= target || total_err <= floor + tail_err {
            break;
        }
        // Split the largest-error cells until the untouched remainder fits half the target.
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&i, &j| cells[j].err.total_cmp(&cells[i].err).then(i.cmp(&j)));
        let mut remaining = total_err;
        let mut chosen = vec![false; cells.len()];
        for &i in &order {
            if remaining <= 0.5 * target || cells[i].err == 0.0 {
                break;
            }
            remaining -= cells[i].err;
            chosen[i] = true;
        }
        let n_split = chosen.iter().filter(|&&c| c).count();
        if cells.len() + 3 * n_split > cfg.max_cells {
            return Err(Error::Budget { what: "hyperbolic quadrature", limit: cfg.max_cells });
        }
        let mut keep = Vec::with_capacity(cells.len());
        let mut todo = Vec::new();
        for (c, ch) in cells.into_iter().zip(chosen) {
            if ch {
                todo.push(c.rect);
            } else {
                keep.push(c);
            }
        }
        let kids: Vec<Rect> = todo.iter().flat_map(|r| r.split()).collect();
        let fresh: Vec<Cell> = kids
            .into_par_iter()
            .map(|r| {
                let p = rule_on(&f, g, &patches, &r);
                make_cell(&f, g, &patches, r, p)
            })
            .collect();
        keep.extend(fresh);
        cells = keep;
    }
    cells.sort_by(|a, b| {
        (a.rect.patch, a.rect.q0, a.rect.p0)
            .partial_cmp(&(b.rect.patch, b.rect.q0, b.rect.p0))
            .expect("finite cell bounds")
    });
    let vals: Vec<Complex64> = cells.iter().map(|c| c.value).collect();
    let err: f64 = cells.iter().map(|c| c.err).sum::<f64>() + tail_err;
    Ok(QuadratureResult { value: pairwise_sum(&vals), abs_error_estimate: err, cells_used: cells.len() })
}
