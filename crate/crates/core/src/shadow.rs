//! Monte Carlo numerical shadows.
//!
//! A shadow is the law of `z = <ψ|A|ψ>` for Fubini-Study random `ψ` (pure),
//! of `Σ t_i λ_i` for `t` uniform on the simplex (normal `A`), or of
//! `Tr(ρ A)` for `ρ` from the induced measure `μ_K` (mixed). Sampling runs on
//! independent RNG streams; every result depends on `(seed, streams)` only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::randshadow::ks_two_sample;
use crate::range::{boundary, contains, range_box, RangeBoundary};
use crate::sampling::{par_streams, random_induced_density, random_simplex_point, RngStream};
use crate::{Matrix, C64};

pub const DEFAULT_BINS: usize = 256;
const PAD: f64 = 0.01;

/// Where the samples come from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Pure(&'a Matrix),
    /// Simplex projection with the given eigenvalues.
    Normal(&'a [C64]),
    Mixed(&'a Matrix, usize),
}

impl Source<'_> {
    fn draw(&self, rng: &mut RngStream, buf: &mut Vec<C64>) -> Result<C64> {
        match *self {
            Source::Pure(a) => {
                let n = a.order();
                buf.clear();
                buf.extend((0..n).map(|_| rng.complex_normal::<f64>()));
                let norm2: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
                Ok(a.expectation(buf) / norm2)
            }
            Source::Normal(eigs) => {
                let t = random_simplex_point::<f64>(eigs.len(), rng)?;
                Ok(t.iter().zip(eigs).map(|(t, l)| l * t).sum())
            }
            Source::Mixed(a, k) => Ok(random_induced_density::<f64>(a.order(), k, rng)?.expectation(a)),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Source::Normal([]) => Err(Error::dim("no eigenvalues")),
            Source::Mixed(_, 0) => Err(Error::Domain("ancilla dimension must be positive".into())),
            _ => Ok(()),
        }
    }
}

/// Raw shadow samples, concatenated in stream order.
pub fn shadow_samples(source: Source<'_>, samples: usize, seed: u64, streams: usize) -> Result<Vec<C64>> {
    source.validate()?;
    let parts = par_streams(seed, streams, samples, |rng, count| {
        let mut buf = Vec::new();
        (0..count).map(|_| source.draw(rng, &mut buf)).collect::<Result<Vec<_>>>()
    });
    Ok(parts.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// Streaming mean and covariance of complex samples (Welford, mergeable).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Moments {
    pub count: u64,
    pub mean_re: f64,
    pub mean_im: f64,
    m2_re: f64,
    m2_im: f64,
    c_reim: f64,
}

impl Moments {
    pub fn push(&mut self, z: C64) {
        self.count += 1;
        let n = self.count as f64;
        let dr = z.re - self.mean_re;
        let di = z.im - self.mean_im;
        self.mean_re += dr / n;
        self.mean_im += di / n;
        self.m2_re += dr * (z.re - self.mean_re);
        self.m2_im += di * (z.im - self.mean_im);
        self.c_reim += dr * (z.im - self.mean_im);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let dr = other.mean_re - self.mean_re;
        let di = other.mean_im - self.mean_im;
        self.mean_re += dr * nb / n;
        self.mean_im += di * nb / n;
        self.m2_re += other.m2_re + dr * dr * na * nb / n;
        self.m2_im += other.m2_im + di * di * na * nb / n;
        self.c_reim += other.c_reim + dr * di * na * nb / n;
        self.count += other.count;
    }

    pub fn mean(&self) -> C64 {
        C64::new(self.mean_re, self.mean_im)
    }

    /// Sample covariance `[[var re, cov], [cov, var im]]`.
    pub fn covariance(&self) -> [[f64; 2]; 2] {
        let d = (self.count.max(2) - 1) as f64;
        [[self.m2_re / d, self.c_reim / d], [self.c_reim / d, self.m2_im / d]]
    }

    /// `E|z - mean|^2`.
    pub fn variance(&self) -> f64 {
        let c = self.covariance();
        c[0][0] + c[1][1]
    }
}

pub fn shadow_moments(samples: &[C64]) -> Result<Moments> {
    if samples.len() < 2 {
        return Err(Error::Domain("moments need at least two samples".into()));
    }
    let mut m = Moments::default();
    samples.iter().for_each(|&z| m.push(z));
    Ok(m)
}

/// Requested binning; `bounds = None` picks the padded box of `W(A)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub bins_re: usize,
    pub bins_im: usize,
    pub bounds: Option<(f64, f64, f64, f64)>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { bins_re: DEFAULT_BINS, bins_im: DEFAULT_BINS, bounds: None }
    }
}

impl GridSpec {
    pub fn square(bins: usize) -> Self {
        GridSpec { bins_re: bins, bins_im: bins, bounds: None }
    }
}

/// Binned shadow density.
///
/// Planar histograms store `counts[i_im * bins_re + i_re]`. When the support
/// is a segment `[start, end]` the histogram is one-dimensional along it
/// (`bins_im == 1`) and the bounding box is that of the segment.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowHistogram {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub bins_re: usize,
    pub bins_im: usize,
    pub counts: Vec<u64>,
    pub samples: u64,
    /// Samples outside the box (only possible with explicit bounds).
    pub outside: u64,
    pub segment: Option<(C64, C64)>,
    pub moments: Moments,
}

/// Half-open bin lookup: a value on an interior edge goes to the lower bin.
fn bin_index(x: f64, lo: f64, hi: f64, bins: usize) -> Option<usize> {
    if !(x >= lo && x <= hi) {
        return None;
    }
    let f = (x - lo) / (hi - lo) * bins as f64;
    let i = f.ceil() as usize;
    Some(i.saturating_sub(1).min(bins - 1))
}

#[derive(Debug, Clone, Copy)]
enum Layout {
    Planar { re: (f64, f64), im: (f64, f64), bins: (usize, usize) },
    Segment { start: C64, end: C64, bins: usize },
}

impl Layout {
    fn cells(&self) -> usize {
        match *self {
            Layout::Planar { bins, .. } => bins.0 * bins.1,
            Layout::Segment { bins, .. } => bins,
        }
    }

    fn locate(&self, z: C64) -> Option<usize> {
        match *self {
            Layout::Planar { re, im, bins } => {
                let i = bin_index(z.re, re.0, re.1, bins.0)?;
                let j = bin_index(z.im, im.0, im.1, bins.1)?;
                Some(j * bins.0 + i)
            }
            Layout::Segment { start, end, bins } => {
                let d = end - start;
                let len = d.norm();
                let s = ((z - start) * d.conj()).re / len;
                bin_index(s, 0.0, len, bins)
            }
        }
    }
}

/// Endpoints of `points` if they are collinear (to `1e-10` of their spread).
pub fn collinear_extent(points: &[C64]) -> Option<(C64, C64)> {
    let mut best = (0.0, 0, 0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = (points[i] - points[j]).norm();
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    let (len, i, j) = best;
    if len == 0.0 {
        return None;
    }
    let (p, q) = (points[i], points[j]);
    let u = (q - p) / len;
    let flat = points.iter().all(|z| ((z - p) * u.conj()).im.abs() <= 1e-10 * len);
    if !flat {
        return None;
    }
    // orient along increasing real part, then imaginary part
    if (q.re, q.im) < (p.re, p.im) {
        Some((q, p))
    } else {
        Some((p, q))
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let w = hi - lo;
    (lo - PAD * w, hi + PAD * w)
}

fn layout_for(support: &[C64], bbox: (f64, f64, f64, f64), grid: &GridSpec) -> Result<Layout> {
    if grid.bins_re == 0 || grid.bins_im == 0 {
        return Err(Error::Domain("bin counts must be positive".into()));
    }
    if let Some((re0, re1, im0, im1)) = grid.bounds {
        if !(re1 > re0 && im1 > im0) {
            return Err(Error::Domain("histogram bounds must have positive area".into()));
        }
        return Ok(Layout::Planar { re: (re0, re1), im: (im0, im1), bins: (grid.bins_re, grid.bins_im) });
    }
    if let Some((p, q)) = collinear_extent(support) {
        let d = q - p;
        return Ok(Layout::Segment { start: p - d * PAD, end: q + d * PAD, bins: grid.bins_re });
    }
    let (re0, re1, im0, im1) = bbox;
    if !(re1 > re0 && im1 > im0) {
        return Err(Error::DegenerateProjection);
    }
    Ok(Layout::Planar { re: padded(re0, re1), im: padded(im0, im1), bins: (grid.bins_re, grid.bins_im) })
}

fn accumulate(
    source: Source<'_>,
    layout: Layout,
    samples: usize,
    seed: u64,
    streams: usize,
) -> Result<ShadowHistogram> {
    source.validate()?;
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let parts = par_streams(seed, streams, samples, |rng, count| -> Result<(Vec<u64>, u64, Moments)> {
        let mut counts = vec![0u64; layout.cells()];
        let mut outside = 0u64;
        let mut moments = Moments::default();
        let mut buf = Vec::new();
        for _ in 0..count {
            let z = source.draw(rng, &mut buf)?;
            moments.push(z);
            match layout.locate(z) {
                Some(k) => counts[k] += 1,
                None => outside += 1,
            }
        }
        Ok((counts, outside, moments))
    });
    let mut counts = vec![0u64; layout.cells()];
    let mut outside = 0;
    let mut moments = Moments::default();
    for part in parts {
        let (c, o, m) = part?;
        counts.iter_mut().zip(&c).for_each(|(x, y)| *x += y);
        outside += o;
        moments.merge(&m);
    }
    let (re_min, re_max, im_min, im_max, bins_re, bins_im, segment) = match layout {
        Layout::Planar { re, im, bins } => (re.0, re.1, im.0, im.1, bins.0, bins.1, None),
        Layout::Segment { start, end, bins } => (
            start.re.min(end.re),
            start.re.max(end.re),
            start.im.min(end.im),
            start.im.max(end.im),
            bins,
            1,
            Some((start, end)),
        ),
    };
    Ok(ShadowHistogram {
        re_min,
        re_max,
        im_min,
        im_max,
        bins_re,
        bins_im,
        counts,
        samples: samples as u64,
        outside,
        segment,
        moments,
    })
}

type Bounds = (f64, f64, f64, f64);

/// Support polygon of `W(A)` used to lay out the histogram.
fn range_support(a: &Matrix) -> Result<(RangeBoundary<f64>, Bounds)> {
    let b = boundary(a, 64)?;
    Ok((b, range_box(a)))
}

/// Shadow of `A` under the Fubini-Study measure.
pub fn pure_shadow(a: &Matrix, samples: usize, grid: &GridSpec, seed: u64, streams: usize) -> Result<ShadowHistogram> {
    let (b, bbox) = range_support(a)?;
    let layout = layout_for(&b.points, bbox, grid)?;
    accumulate(Source::Pure(a), layout, samples, seed, streams)
}

/// Shadow of a normal matrix with spectrum `eigenvalues`.
pub fn normal_shadow(
    eigenvalues: &[C64],
    samples: usize,
    grid: &GridSpec,
    seed: u64,
    streams: usize,
) -> Result<ShadowHistogram> {
    if eigenvalues.is_empty() {
        return Err(Error::dim("no eigenvalues"));
    }
    if eigenvalues.iter().all(|l| (l - eigenvalues[0]).norm() == 0.0) {
        return Err(Error::DegenerateProjection);
    }
    let mut bbox = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for l in eigenvalues {
        bbox = (bbox.0.min(l.re), bbox.1.max(l.re), bbox.2.min(l.im), bbox.3.max(l.im));
    }
    let layout = layout_for(eigenvalues, bbox, grid)?;
    accumulate(Source::Normal(eigenvalues), layout, samples, seed, streams)
}

/// Shadow of `A` over states drawn from the induced measure `μ_K`.
pub fn mixed_shadow(
    a: &Matrix,
    ancilla: usize,
    samples: usize,
    grid: &GridSpec,
    seed: u64,
    streams: usize,
) -> Result<ShadowHistogram> {
    let (b, bbox) = range_support(a)?;
    let layout = layout_for(&b.points, bbox, grid)?;
    accumulate(Source::Mixed(a, ancilla), layout, samples, seed, streams)
}

impl ShadowHistogram {
    pub fn cells(&self) -> usize {
        self.counts.len()
    }

    /// Area of a bin, or its length for a segment histogram.
    pub fn bin_area(&self) -> f64 {
        match self.segment {
            Some((s, e)) => (e - s).norm() / self.bins_re as f64,
            None => {
                (self.re_max - self.re_min) / self.bins_re as f64 * (self.im_max - self.im_min) / self.bins_im as f64
            }
        }
    }

    /// `counts / (samples * bin_area)`.
    pub fn density(&self) -> Vec<f64> {
        let norm = self.samples as f64 * self.bin_area();
        self.counts.iter().map(|&c| c as f64 / norm).collect()
    }

    pub fn count(&self, i_re: usize, i_im: usize) -> u64 {
        self.counts[i_im * self.bins_re + i_re]
    }

    pub fn bin_center(&self, i_re: usize, i_im: usize) -> C64 {
        match self.segment {
            Some((s, e)) => s + (e - s) * ((i_re as f64 + 0.5) / self.bins_re as f64),
            None => C64::new(
                self.re_min + (i_re as f64 + 0.5) * (self.re_max - self.re_min) / self.bins_re as f64,
                self.im_min + (i_im as f64 + 0.5) * (self.im_max - self.im_min) / self.bins_im as f64,
            ),
        }
    }

    /// Half the diagonal of a bin.
    pub fn bin_radius(&self) -> f64 {
        match self.segment {
            Some(_) => 0.5 * self.bin_area(),
            None => {
                let w = (self.re_max - self.re_min) / self.bins_re as f64;
                let h = (self.im_max - self.im_min) / self.bins_im as f64;
                0.5 * w.hypot(h)
            }
        }
    }

    /// Every nonzero bin center lies within `bin_radius + tol` of `W(A)`.
    pub fn check_support(&self, range: &RangeBoundary<f64>, tol: f64) -> Result<()> {
        let slack = self.bin_radius() + tol;
        for j in 0..self.bins_im {
            for i in 0..self.bins_re {
                if self.count(i, j) > 0 {
                    let c = self.bin_center(i, j);
                    if !contains(range, c, slack) {
                        return Err(Error::Contract(format!("occupied bin centered at {c} lies outside W(A)")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Oriented line `point + s * direction`, `s` in arclength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: C64,
    pub direction: C64,
}

impl Line {
    pub fn new(point: C64, direction: C64) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Domain("line direction must be nonzero".into()));
        }
        Ok(Line { point, direction: direction / n })
    }

    pub fn real_axis() -> Self {
        Line { point: C64::new(0.0, 0.0), direction: C64::new(1.0, 0.0) }
    }

    pub fn imaginary_axis() -> Self {
        Line { point: C64::new(0.0, 0.0), direction: C64::new(0.0, 1.0) }
    }

    /// `(arclength, signed distance)` of `z`.
    pub fn coordinates(&self, z: C64) -> (f64, f64) {
        let w = (z - self.point) * self.direction.conj();
        (w.re, w.im)
    }
}

/// Arclength coordinates of the samples within `half_width` of `line`.
pub fn strip_coordinates(samples: &[C64], line: &Line, half_width: f64) -> Vec<f64> {
    samples
        .iter()
        .filter_map(|&z| {
            let (s, d) = line.coordinates(z);
            (d.abs() <= half_width).then_some(s)
        })
        .collect()
}

/// Strip coordinates drawn directly from `source` without keeping all samples.
/// Returns the coordinates in stream order.
pub fn sample_strip(
    source: Source<'_>,
    line: &Line,
    half_width: f64,
    samples: usize,
    seed: u64,
    streams: usize,
) -> Result<Vec<f64>> {
    source.validate()?;
    let parts = par_streams(seed, streams, samples, |rng, count| -> Result<Vec<f64>> {
        let mut buf = Vec::new();
        let mut out = Vec::new();
        for _ in 0..count {
            let (s, d) = line.coordinates(source.draw(rng, &mut buf)?);
            if d.abs() <= half_width {
                out.push(s);
            }
        }
        Ok(out)
    });
    Ok(parts.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// One-dimensional histogram of a strip around a line.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    pub line: Line,
    pub half_width: f64,
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `counts / (total samples * bin width)`; integrates to the strip's mass.
    pub density: Vec<f64>,
    pub total_samples: u64,
}

impl CrossSection {
    pub fn strip_samples(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Density renormalized to integrate to one over the strip.
    pub fn conditional_density(&self) -> Vec<f64> {
        let total = self.total_samples as f64 / self.strip_samples() as f64;
        self.density.iter().map(|d| d * total).collect()
    }
}

/// Cross-section histogram from raw samples. `extent` fixes the arclength
/// range; by default it spans the strip samples.
pub fn cross_section(
    samples: &[C64],
    line: &Line,
    half_width: f64,
    bins: usize,
    extent: Option<(f64, f64)>,
) -> Result<CrossSection> {
    if half_width.is_nan() || half_width <= 0.0 {
        return Err(Error::Domain("half-width must be positive".into()));
    }
    let coords = strip_coordinates(samples, line, half_width);
    cross_section_from_strip(&coords, samples.len() as u64, line, half_width, bins, extent)
}

/// Cross-section histogram from strip coordinates (as returned by
/// [`sample_strip`]) out of `total_samples` draws.
pub fn cross_section_from_strip(
    coords: &[f64],
    total_samples: u64,
    line: &Line,
    half_width: f64,
    bins: usize,
    extent: Option<(f64, f64)>,
) -> Result<CrossSection> {
    if bins == 0 {
        return Err(Error::Domain("bin count must be positive".into()));
    }
    if coords.is_empty() {
        return Err(Error::EmptySection);
    }
    let (lo, hi) = extent.unwrap_or_else(|| {
        let lo = coords.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = coords.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    });
    let mut counts = vec![0u64; bins];
    for &s in coords {
        if let Some(i) = bin_index(s, lo, hi, bins) {
            counts[i] += 1;
        }
    }
    let w = (hi - lo) / bins as f64;
    let bin_edges = (0..=bins).map(|i| lo + w * i as f64).collect();
    let total = total_samples as f64;
    let density = counts.iter().map(|&c| c as f64 / (total * w)).collect();
    Ok(CrossSection { line: *line, half_width, bin_edges, counts, density, total_samples })
}

/// Two-sample KS statistics of the real and imaginary marginals.
pub fn marginal_ks(x: &[C64], y: &[C64]) -> Result<(f64, f64)> {
    let re = |v: &[C64]| v.iter().map(|z| z.re).collect::<Vec<_>>();
    let im = |v: &[C64]| v.iter().map(|z| z.im).collect::<Vec<_>>();
    Ok((ks_two_sample(&re(x), &re(y))?, ks_two_sample(&im(x), &im(y))?))
}

/// Marginal KS statistics between the shadows of `A ⊗ B` and `B ⊗ A`.
pub fn tensor_shadow_swap_check(
    a: &Matrix,
    b: &Matrix,
    samples: usize,
    seed: u64,
    streams: usize,
) -> Result<(f64, f64)> {
    let ab = a.kron(b);
    let ba = b.kron(a);
    let x = shadow_samples(Source::Pure(&ab), samples, seed, streams)?;
    let y = shadow_samples(Source::Pure(&ba), samples, seed.wrapping_add(0x9e37_79b9), streams)?;
    marginal_ks(&x, &y)
}

/// `A ⊗ 1_K`.
pub fn extend_by_identity(a: &Matrix, k: usize) -> Matrix {
    a.kron(&ComplexMatrix::identity(k))
}
