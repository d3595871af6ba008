//! Natural cubic spline interpolation.

use crate::error::{Error, Result};

/// Natural cubic spline through `(xs[i], ys[i])`, `xs` strictly increasing.
#[derive(Clone, Debug)]
pub struct NaturalSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl NaturalSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() {
            return Err(Error::InvalidInput("spline knot arrays differ in length".into()));
        }
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("spline knots must be strictly increasing".into()));
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior second derivatives.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 0..k {
                let h0 = xs[i + 1] - xs[i];
                let h1 = xs[i + 2] - xs[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
            }
            for i in 1..k {
                let lower = xs[i + 1] - xs[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { xs, ys, m })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        // segment index; extrapolates with the end cubic outside the knot range
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        self.eval_segment(i, x)
    }

    fn eval_segment(&self, i: usize, x: f64) -> f64 {
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    /// Evaluate at `0, 1, ..., n-1`, walking the segments once.
    pub fn eval_grid(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        let mut seg = 0;
        let last = self.xs.len() - 2;
        for t in 0..n {
            let x = t as f64;
            while seg < last && self.xs[seg + 1] <= x {
                seg += 1;
            }
            out.push(self.eval_segment(seg, x));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots() {
        let xs = vec![-2.0, 0.0, 1.5, 4.0, 7.0];
        let ys = vec![1.0, -1.0, 2.0, 0.5, 3.0];
        let s = NaturalSpline::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((s.eval(*x) - y).abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_lines_and_two_knots() {
        let s = NaturalSpline::new(vec![0.0, 1.0, 3.0, 6.0], vec![1.0, 3.0, 7.0, 13.0]).unwrap();
        for t in 0..10 {
            let x = t as f64 * 0.7 - 1.0;
            assert!((s.eval(x) - (2.0 * x + 1.0)).abs() < 1e-12);
        }
        let s = NaturalSpline::new(vec![0.0, 2.0], vec![0.0, 4.0]).unwrap();
        assert!((s.eval(1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn natural_end_conditions_match_hand_solution() {
        // knots (0,0), (1,1), (2,0): M1 = 6*(-1 - 1) / 4 = -3
        let s = NaturalSpline::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!((s.m[1] + 3.0).abs() < 1e-14);
        // S(0.5) = 0.5 + (0.125 - 0.5) * (-3) / 6 = 0.6875
        assert!((s.eval(0.5) - 0.6875).abs() < 1e-14);
    }

    #[test]
    fn grid_matches_pointwise() {
        let s = NaturalSpline::new(vec![-3.0, 2.0, 5.0, 9.0, 14.0], vec![0.0, 1.0, -1.0, 2.0, 0.0]).unwrap();
        let g = s.eval_grid(16);
        for (t, v) in g.iter().enumerate() {
            assert!((v - s.eval(t as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(NaturalSpline::new(vec![0.0], vec![0.0]).is_err());
        assert!(NaturalSpline::new(vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
    }
}
