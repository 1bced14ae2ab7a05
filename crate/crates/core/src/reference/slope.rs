use crate::error::{Error, Result};

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "slope fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(h, e)) = points.iter().find(|(h, e)| !(*h > 0.0 && *e > 0.0 && h.is_finite() && e.is_finite())) {
        return Err(Error::Domain(format!("slope fit needs positive values, got ({h}, {e})")));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("slope fit needs at least two distinct h".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let hs = [0.2, 0.1, 0.05, 0.025];
        let sq: Vec<_> = hs.iter().map(|&h| (h, h * h)).collect();
        assert!((fit_slope(&sq).unwrap() - 2.0).abs() < 1e-12);
        let five: Vec<_> = hs.iter().map(|&h: &f64| (h, 3.0 * h.powi(5))).collect();
        assert!((fit_slope(&five).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(fit_slope(&[(0.1, 1.0), (0.2, 2.0)]).is_err());
        assert!(fit_slope(&[(0.1, 1.0), (0.2, 0.0), (0.3, 1.0)]).is_err());
        assert!(fit_slope(&[(0.1, 1.0), (0.1, 2.0), (0.1, 1.0)]).is_err());
    }
}
