use std::cmp::Ordering;
use std::fmt;

/// An interval of the real line with independent endpoint inclusion flags.
///
/// Infinite endpoints are always open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Self {
        Self {
            lo,
            lo_closed: lo_closed && lo.is_finite(),
            hi,
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, true, hi, true)
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, false, hi, false)
    }

    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    pub fn is_empty(&self) -> bool {
        if self.lo.is_nan() || self.hi.is_nan() {
            return true;
        }
        match self.lo.partial_cmp(&self.hi) {
            Some(Ordering::Less) => false,
            Some(Ordering::Equal) => !(self.lo_closed && self.hi_closed),
            _ => true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = x > self.lo || (x == self.lo && self.lo_closed);
        let below = x < self.hi || (x == self.hi && self.hi_closed);
        above && below
    }

    /// Membership where a point within `snap` of a finite endpoint counts
    /// as lying exactly on that endpoint.
    pub fn contains_snapped(&self, x: f64, snap: f64) -> bool {
        let above = if self.lo.is_finite() && (x - self.lo).abs() <= snap {
            self.lo_closed
        } else {
            x > self.lo
        };
        let below = if self.hi.is_finite() && (x - self.hi).abs() <= snap {
            self.hi_closed
        } else {
            x < self.hi
        };
        above && below
    }

    pub fn length(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.total_cmp(&other.lo) {
            Ordering::Greater => (self.lo, self.lo_closed),
            Ordering::Less => (other.lo, other.lo_closed),
            Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.total_cmp(&other.hi) {
            Ordering::Less => (self.hi, self.hi_closed),
            Ordering::Greater => (other.hi, other.hi_closed),
            Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// A finite union of intervals, kept sorted, disjoint and with touching
/// pieces merged, so that equal sets have equal representations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BorelSet {
    intervals: Vec<Interval>,
}

impl BorelSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn real_line() -> Self {
        Self {
            intervals: vec![Interval::open(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut ivs: Vec<Interval> = intervals.into_iter().filter(|iv| !iv.is_empty()).collect();
        // Equal left endpoints: the closed one starts first.
        ivs.sort_by(|a, b| a.lo.total_cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match merged.last_mut() {
                Some(cur) if iv.lo < cur.hi || (iv.lo == cur.hi && (cur.hi_closed || iv.lo_closed)) => {
                    match iv.hi.total_cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = iv.hi;
                            cur.hi_closed = iv.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= iv.hi_closed,
                        Ordering::Less => {}
                    }
                }
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn interval(iv: Interval) -> Self {
        Self::from_intervals([iv])
    }

    /// `(-inf, u]`.
    pub fn at_most(u: f64) -> Self {
        Self::interval(Interval::new(f64::NEG_INFINITY, false, u, true))
    }

    /// The finite set `{x_1, ..., x_k}`.
    pub fn points(xs: &[f64]) -> Self {
        Self::from_intervals(xs.iter().map(|&x| Interval::point(x)))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn contains_snapped(&self, x: f64, snap: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains_snapped(x, snap))
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::length).fold(0.0, |a, b| a + b)
    }

    pub fn complement(&self) -> Self {
        let mut gaps = Vec::with_capacity(self.intervals.len() + 1);
        let (mut lo, mut lo_closed) = (f64::NEG_INFINITY, false);
        for iv in &self.intervals {
            gaps.push(Interval::new(lo, lo_closed, iv.lo, !iv.lo_closed));
            lo = iv.hi;
            lo_closed = !iv.hi_closed;
        }
        gaps.push(Interval::new(lo, lo_closed, f64::INFINITY, false));
        Self::from_intervals(gaps)
    }

    pub fn intersect(&self, other: &BorelSet) -> Self {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let c = a.intersect(b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        Self::from_intervals(out)
    }

    pub fn union(&self, other: &BorelSet) -> Self {
        Self::from_intervals(self.intervals.iter().chain(&other.intervals).copied())
    }

    /// `self \ other`.
    pub fn difference(&self, other: &BorelSet) -> Self {
        self.intersect(&other.complement())
    }

    /// All finite endpoints in increasing order, without duplicates.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .intervals
            .iter()
            .flat_map(|iv| [iv.lo, iv.hi])
            .filter(|x| x.is_finite())
            .collect();
        pts.dedup();
        pts
    }
}

impl fmt::Display for BorelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}
