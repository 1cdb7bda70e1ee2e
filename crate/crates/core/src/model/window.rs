use crate::error::{Error, Result};

/// A finite union of disjoint half-open frequency intervals `[lo, hi)`.
/// `hi` may be `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyWindow {
    intervals: Vec<(f64, f64)>,
}

impl FrequencyWindow {
    /// Sorts the intervals and drops empty ones. Overlapping intervals are
    /// rejected; touching ones (`[a, b)`, `[b, c)`) are fine.
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut v: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in intervals {
            if lo.is_nan() || hi.is_nan() || lo < 0.0 || !lo.is_finite() || hi < lo {
                return Err(Error::InvalidWindow(format!("[{lo}, {hi})")));
            }
            if hi > lo {
                v.push((lo, hi));
            }
        }
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in v.windows(2) {
            if pair[1].0 < pair[0].1 {
                return Err(Error::InvalidWindow(format!(
                    "[{}, {}) overlaps [{}, {})",
                    pair[0].0, pair[0].1, pair[1].0, pair[1].1
                )));
            }
        }
        Ok(Self { intervals: v })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new([(lo, hi)])
    }

    /// `[0, inf)`.
    pub fn full() -> Self {
        Self {
            intervals: vec![(0.0, f64::INFINITY)],
        }
    }

    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, omega: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(lo, hi)| lo <= omega && omega < hi)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intervals
            .iter()
            .all(|&(a0, a1)| other.intervals.iter().all(|&(b0, b1)| a1 <= b0 || b1 <= a0))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        Self::new(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    /// Pieces of the window inside `[lo, hi]`.
    pub fn clip(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        self.intervals
            .iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (a.max(lo), b.min(hi));
                (b > a).then_some((a, b))
            })
            .collect()
    }

    /// Total length of the window (may be infinite).
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|&(a, b)| b - a).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_open_membership() {
        let w = FrequencyWindow::new([(2.0, 3.0), (0.5, 1.0)]).unwrap();
        assert_eq!(w.intervals(), &[(0.5, 1.0), (2.0, 3.0)]);
        assert!(w.contains(0.5));
        assert!(!w.contains(1.0));
        assert!(w.contains(2.999));
        assert!(!w.contains(3.0));
        assert_eq!(w.measure(), 1.5);
    }

    #[test]
    fn rejects_overlap_and_bad_bounds() {
        assert!(FrequencyWindow::new([(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(FrequencyWindow::new([(0.0, 1.0), (1.0, 3.0)]).is_ok());
        assert!(FrequencyWindow::interval(-1.0, 1.0).is_err());
        assert!(FrequencyWindow::interval(2.0, 1.0).is_err());
        assert!(FrequencyWindow::interval(1.0, 1.0).unwrap().is_empty());
    }

    #[test]
    fn union_and_clip() {
        let a = FrequencyWindow::interval(0.0, 1.0).unwrap();
        let b = FrequencyWindow::interval(1.0, f64::INFINITY).unwrap();
        assert!(a.is_disjoint(&b));
        let u = a.union(&b).unwrap();
        assert!(u.contains(1e9));
        assert_eq!(u.clip(0.5, 4.0), vec![(0.5, 1.0), (1.0, 4.0)]);
        assert!(FrequencyWindow::full().contains(0.0));
        assert!(!FrequencyWindow::empty().contains(0.0));
    }
}
