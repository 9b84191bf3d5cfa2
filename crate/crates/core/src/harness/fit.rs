use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantFit {
    /// `(q, max ratio at q)`, increasing in `q`.
    pub per_q: Vec<(usize, f64)>,
    pub global_max: f64,
    /// Least-squares slope of `log max` against `log q`.
    pub slope: Option<f64>,
    /// Why the slope is missing, when it is.
    pub flag: Option<String>,
}

impl ConstantFit {
    pub fn at(&self, q: usize) -> Option<f64> {
        self.per_q.iter().find(|&&(k, _)| k == q).map(|&(_, m)| m)
    }

    pub fn first(&self) -> f64 {
        self.per_q[0].1
    }

    pub fn last(&self) -> f64 {
        self.per_q[self.per_q.len() - 1].1
    }
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Per-`q` maxima of `(q, ratio)` records, their maximum, and the slope of
/// the maxima in log–log coordinates.
pub fn constant_fit(records: &[(usize, f64)]) -> Result<ConstantFit> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to fit".into()));
    }
    let mut per_q: BTreeMap<usize, f64> = BTreeMap::new();
    for &(q, r) in records {
        let m = per_q.entry(q).or_insert(f64::NEG_INFINITY);
        *m = m.max(r);
    }
    let per_q: Vec<(usize, f64)> = per_q.into_iter().collect();
    let global_max = per_q.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.1));
    let (slope, flag) = if per_q.len() < 2 {
        (None, Some("single q: slope undefined".to_string()))
    } else if per_q.iter().any(|p| p.1 <= 0.0) {
        (None, Some("nonpositive ratio: slope undefined".to_string()))
    } else {
        let pts: Vec<(f64, f64)> = per_q.iter().map(|&(q, m)| ((q as f64).ln(), m.ln())).collect();
        (ls_slope(&pts), None)
    };
    Ok(ConstantFit { per_q, global_max, slope, flag })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_records() {
        let fit = constant_fit(&[(3, 2.0), (5, 2.0), (7, 2.0), (7, 1.0)]).unwrap();
        assert!(fit.slope.unwrap().abs() < 1e-12);
        assert_eq!(fit.global_max, 2.0);
        assert_eq!(fit.per_q.len(), 3);
    }

    #[test]
    fn square_root_growth() {
        let recs: Vec<(usize, f64)> = [3usize, 5, 7, 11, 13].iter().map(|&q| (q, 0.7 * (q as f64).sqrt())).collect();
        assert!((constant_fit(&recs).unwrap().slope.unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(constant_fit(&[]).is_err());
        let fit = constant_fit(&[(5, 1.0), (5, 3.0)]).unwrap();
        assert!(fit.slope.is_none() && fit.flag.is_some());
        assert_eq!(fit.global_max, 3.0);
    }
}
