use super::borel::{BorelSet, Interval};
use crate::error::{Error, Result};

/// `quad * x^2 + slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub quad: f64,
    pub slope: f64,
    pub intercept: f64,
}

impl Piece {
    pub fn constant(c: f64) -> Self {
        Self::affine(0.0, c)
    }

    pub fn affine(slope: f64, intercept: f64) -> Self {
        Self::quadratic(0.0, slope, intercept)
    }

    pub fn quadratic(quad: f64, slope: f64, intercept: f64) -> Self {
        Self { quad, slope, intercept }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.quad * x + self.slope) * x + self.intercept
    }

    fn is_constant(&self) -> bool {
        self.quad == 0.0 && self.slope == 0.0
    }

    fn vertex(&self) -> Option<f64> {
        (self.quad != 0.0).then(|| -self.slope / (2.0 * self.quad))
    }

    /// Limit as `x -> -inf` (`toward_plus == false`) or `x -> +inf`.
    fn limit_at_infinity(&self, toward_plus: bool) -> f64 {
        if self.quad != 0.0 {
            self.quad.signum() * f64::INFINITY
        } else if self.slope != 0.0 {
            let dir = if toward_plus { 1.0 } else { -1.0 };
            dir * self.slope.signum() * f64::INFINITY
        } else {
            self.intercept
        }
    }
}

/// A Borel function of the real line built from finitely many polynomial
/// pieces of degree at most two.
///
/// Breakpoints `x_0 < ... < x_{r-1}` split the line into `r + 1` open
/// pieces; the value at each breakpoint is given separately, so jumps and
/// isolated point values are representable. Preimages of Borel sets are
/// computed exactly, piece by piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFn {
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
    point_values: Vec<f64>,
}

impl PiecewiseFn {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Piece>, point_values: Vec<f64>) -> Result<Self> {
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidFunction("breakpoints must be finite".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidFunction("breakpoints must be strictly increasing".into()));
        }
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints need {} pieces, found {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        if point_values.len() != breakpoints.len() {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints need as many point values, found {}",
                breakpoints.len(),
                point_values.len()
            )));
        }
        let coefficients = pieces.iter().flat_map(|p| [p.quad, p.slope, p.intercept]);
        if coefficients.chain(point_values.iter().copied()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidFunction("coefficients must be finite".into()));
        }
        Ok(Self {
            breakpoints,
            pieces,
            point_values,
        })
    }

    pub fn single(piece: Piece) -> Self {
        Self {
            breakpoints: vec![],
            pieces: vec![piece],
            point_values: vec![],
        }
    }

    pub fn identity() -> Self {
        Self::affine(1.0, 0.0)
    }

    pub fn affine(slope: f64, intercept: f64) -> Self {
        Self::single(Piece::affine(slope, intercept))
    }

    pub fn square() -> Self {
        Self::single(Piece::quadratic(1.0, 0.0, 0.0))
    }

    /// `below` on `(-inf, x)`, `at_or_above` on `[x, inf)`.
    pub fn step(x: f64, below: f64, at_or_above: f64) -> Self {
        Self {
            breakpoints: vec![x],
            pieces: vec![Piece::constant(below), Piece::constant(at_or_above)],
            point_values: vec![at_or_above],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn point_values(&self) -> &[f64] {
        &self.point_values
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b < x);
        if self.breakpoints.get(idx) == Some(&x) {
            self.point_values[idx]
        } else {
            self.pieces[idx].eval(x)
        }
    }

    /// `g^{-1}(B)` as a finite union of intervals.
    pub fn preimage(&self, b: &BorelSet) -> BorelSet {
        let mut out: Vec<Interval> = Vec::new();
        for (i, &x) in self.breakpoints.iter().enumerate() {
            if b.contains(self.point_values[i]) {
                out.push(Interval::point(x));
            }
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            let lo = if i == 0 {
                f64::NEG_INFINITY
            } else {
                self.breakpoints[i - 1]
            };
            let hi = self.breakpoints.get(i).copied().unwrap_or(f64::INFINITY);
            piece_preimage(piece, lo, hi, b, &mut out);
        }
        BorelSet::from_intervals(out)
    }
}

fn piece_preimage(piece: &Piece, lo: f64, hi: f64, b: &BorelSet, out: &mut Vec<Interval>) {
    if piece.is_constant() {
        if b.contains(piece.intercept) {
            out.push(Interval::open(lo, hi));
        }
        return;
    }
    match piece.vertex() {
        Some(v) if lo < v && v < hi => {
            if b.contains(piece.eval(v)) {
                out.push(Interval::point(v));
            }
            monotone_preimage(piece, lo, v, b, out);
            monotone_preimage(piece, v, hi, b, out);
        }
        _ => monotone_preimage(piece, lo, hi, b, out),
    }
}

/// Preimage of `b` under `piece` restricted to `(lo, hi)`, where the piece
/// is strictly monotone.
fn monotone_preimage(piece: &Piece, lo: f64, hi: f64, b: &BorelSet, out: &mut Vec<Interval>) {
    let g_lo = if lo.is_finite() {
        piece.eval(lo)
    } else {
        piece.limit_at_infinity(false)
    };
    let g_hi = if hi.is_finite() {
        piece.eval(hi)
    } else {
        piece.limit_at_infinity(true)
    };
    let increasing = g_hi > g_lo;
    let (g_min, g_max) = if increasing { (g_lo, g_hi) } else { (g_hi, g_lo) };
    let right_branch = piece.vertex().is_some_and(|v| lo >= v);

    let inverse = |y: f64| -> f64 {
        let x = if piece.quad == 0.0 {
            (y - piece.intercept) / piece.slope
        } else {
            let v = -piece.slope / (2.0 * piece.quad);
            let d = ((y - piece.eval(v)) / piece.quad).max(0.0).sqrt();
            if right_branch {
                v + d
            } else {
                v - d
            }
        };
        x.clamp(lo, hi)
    };

    for iv in b.intervals() {
        // Range of g on (lo, hi) is the open interval (g_min, g_max).
        if iv.hi <= g_min || iv.lo >= g_max {
            continue;
        }
        // Solve on the value axis, then map back honoring orientation.
        let (y_lo, y_lo_closed) = if iv.lo <= g_min {
            (None, false)
        } else {
            (Some(iv.lo), iv.lo_closed)
        };
        let (y_hi, y_hi_closed) = if iv.hi >= g_max {
            (None, false)
        } else {
            (Some(iv.hi), iv.hi_closed)
        };
        let (x_lo, x_lo_closed, x_hi, x_hi_closed) = if increasing {
            (
                y_lo.map_or(lo, inverse),
                y_lo.is_some() && y_lo_closed,
                y_hi.map_or(hi, inverse),
                y_hi.is_some() && y_hi_closed,
            )
        } else {
            (
                y_hi.map_or(lo, inverse),
                y_hi.is_some() && y_hi_closed,
                y_lo.map_or(hi, inverse),
                y_lo.is_some() && y_lo_closed,
            )
        };
        // The piece domain is open; a root that rounds onto its boundary
        // must not pull the breakpoint in.
        out.push(Interval::new(
            x_lo,
            x_lo_closed && x_lo > lo,
            x_hi,
            x_hi_closed && x_hi < hi,
        ));
    }
}
