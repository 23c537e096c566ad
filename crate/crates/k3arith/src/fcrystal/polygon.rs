//! Convex polygons given by a multiset of rational slopes.
//!
//! A polygon of rank r starts at (0, 0) and appends its slopes in ascending
//! order; the vertex list is the graph of the cumulative slope sum. Newton
//! and Hodge polygons of F-crystals both take this shape.

use num_rational::Rational64;

/// Multiset of slopes with multiplicities, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    slopes: Vec<(Rational64, usize)>,
}

impl Polygon {
    /// Builds from arbitrary (slope, multiplicity) pairs; merges and sorts.
    pub fn from_slopes(pairs: &[(Rational64, usize)]) -> Polygon {
        let mut sorted: Vec<(Rational64, usize)> = pairs
            .iter()
            .copied()
            .filter(|&(_, m)| m > 0)
            .collect();
        sorted.sort_by_key(|&(s, _)| s);
        let mut merged: Vec<(Rational64, usize)> = Vec::new();
        for (s, m) in sorted {
            match merged.last_mut() {
                Some((ls, lm)) if *ls == s => *lm += m,
                _ => merged.push((s, m)),
            }
        }
        Polygon { slopes: merged }
    }

    pub fn slopes(&self) -> &[(Rational64, usize)] {
        &self.slopes
    }

    /// Total multiplicity (the rank).
    pub fn rank(&self) -> usize {
        self.slopes.iter().map(|&(_, m)| m).sum()
    }

    /// Sum of slopes with multiplicity (the final height).
    pub fn total(&self) -> Rational64 {
        self.slopes
            .iter()
            .map(|&(s, m)| s * Rational64::from_integer(m as i64))
            .sum()
    }

    /// Vertices (x, y) of the cumulative graph, including both endpoints and
    /// one point per slope change.
    pub fn vertices(&self) -> Vec<(usize, Rational64)> {
        let mut out = vec![(0usize, Rational64::from_integer(0))];
        let mut x = 0usize;
        let mut y = Rational64::from_integer(0);
        for &(s, m) in &self.slopes {
            x += m;
            y += s * Rational64::from_integer(m as i64);
            out.push((x, y));
        }
        out
    }

    /// Height of the polygon above abscissa x (piecewise linear).
    pub fn eval(&self, x: usize) -> Rational64 {
        let mut remaining = x;
        let mut y = Rational64::from_integer(0);
        for &(s, m) in &self.slopes {
            let take = remaining.min(m);
            y += s * Rational64::from_integer(take as i64);
            remaining -= take;
            if remaining == 0 {
                break;
            }
        }
        assert!(remaining == 0, "abscissa beyond polygon rank");
        y
    }

    /// Shifts every slope by a constant (Tate twist action).
    pub fn shift(&self, delta: Rational64) -> Polygon {
        Polygon {
            slopes: self.slopes.iter().map(|&(s, m)| (s + delta, m)).collect(),
        }
    }

    /// Union of slope multisets (polygon of a direct sum).
    pub fn merge(&self, other: &Polygon) -> Polygon {
        let mut pairs = self.slopes.clone();
        pairs.extend(other.slopes.iter().copied());
        Polygon::from_slopes(&pairs)
    }

    /// True if self lies on or above `lower` at every integer abscissa.
    /// Both polygons are convex piecewise-linear with integer breakpoints, so
    /// checking integers is exhaustive. Returns the first violation if any.
    pub fn lies_above(&self, lower: &Polygon) -> Result<(), (usize, Rational64, Rational64)> {
        assert_eq!(self.rank(), lower.rank(), "polygon ranks differ");
        for x in 0..=self.rank() {
            let hi = self.eval(x);
            let lo = lower.eval(x);
            if hi < lo {
                return Err((x, hi, lo));
            }
        }
        Ok(())
    }

    /// Breakpoint of the polygon at the boundary between slopes < s and
    /// slopes >= s, as (x, y); x = 0 when every slope is >= s.
    pub fn breakpoint_before(&self, s: Rational64) -> (usize, Rational64) {
        let mut x = 0usize;
        let mut y = Rational64::from_integer(0);
        for &(sl, m) in &self.slopes {
            if sl >= s {
                break;
            }
            x += m;
            y += sl * Rational64::from_integer(m as i64);
        }
        (x, y)
    }
}

impl std::fmt::Display for Polygon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .slopes
            .iter()
            .map(|(s, m)| format!("{s}: {m}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn vertices_and_eval() {
        let p = Polygon::from_slopes(&[(r(1, 1), 2), (r(0, 1), 1), (r(1, 2), 2)]);
        assert_eq!(p.rank(), 5);
        assert_eq!(
            p.slopes(),
            &[(r(0, 1), 1), (r(1, 2), 2), (r(1, 1), 2)]
        );
        assert_eq!(
            p.vertices(),
            vec![(0, r(0, 1)), (1, r(0, 1)), (3, r(1, 1)), (5, r(3, 1))]
        );
        assert_eq!(p.eval(2), r(1, 2));
        assert_eq!(p.total(), r(3, 1));
    }

    #[test]
    fn merging_equal_slopes() {
        let p = Polygon::from_slopes(&[(r(1, 2), 1), (r(2, 4), 3)]);
        assert_eq!(p.slopes(), &[(r(1, 2), 4)]);
    }

    #[test]
    fn lies_above_detects_violation() {
        let newton = Polygon::from_slopes(&[(r(1, 2), 2)]);
        let hodge = Polygon::from_slopes(&[(r(0, 1), 1), (r(1, 1), 1)]);
        assert!(newton.lies_above(&hodge).is_ok());
        assert_eq!(hodge.lies_above(&newton).unwrap_err().0, 1);
    }

    #[test]
    fn breakpoints() {
        let p = Polygon::from_slopes(&[(r(2, 3), 3), (r(1, 1), 16), (r(4, 3), 3)]);
        assert_eq!(p.breakpoint_before(r(1, 1)), (3, r(2, 1)));
        assert_eq!(p.breakpoint_before(r(1, 2)), (0, r(0, 1)));
        assert_eq!(p.breakpoint_before(r(5, 1)), (22, r(22, 1)));
    }

    #[test]
    fn shift_moves_slopes() {
        let p = Polygon::from_slopes(&[(r(1, 1), 2)]);
        assert_eq!(p.shift(r(-1, 1)).slopes(), &[(r(0, 1), 2)]);
    }
}
