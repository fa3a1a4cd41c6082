use crate::error::{invalid, Error, Result};
use num_complex::Complex64;

/// Channel gains of the fully- and group-connected reference architectures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineGains {
    pub fully_connected: f64,
    pub group_connected: f64,
}

/// Fully connected: `‖g‖²‖h‖²`. Group connected with contiguous groups of
/// `group_size` elements: `(Σ_groups ‖g_grp‖ ‖h_grp‖)²`.
pub fn baseline_gains(g: &[Complex64], h_row: &[Complex64], group_size: usize) -> Result<BaselineGains> {
    let n = g.len();
    if h_row.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "g has {n} entries, h has {}",
            h_row.len()
        )));
    }
    if group_size == 0 || !n.is_multiple_of(group_size) {
        return Err(invalid("group_size", format!("{group_size} does not divide N = {n}")));
    }
    let energy = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let fully = energy(g) * energy(h_row);
    let amp: f64 = g
        .chunks(group_size)
        .zip(h_row.chunks(group_size))
        .map(|(a, b)| (energy(a) * energy(b)).sqrt())
        .sum();
    Ok(BaselineGains {
        fully_connected: fully,
        group_connected: amp * amp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vec<Complex64> {
        x.iter()
            .enumerate()
            .map(|(i, &r)| Complex64::from_polar(r, i as f64))
            .collect()
    }

    #[test]
    fn group_limits() {
        let g = v(&[1.4, 0.2, 0.4, 0.8]);
        let h = v(&[0.6, 1.0, 0.3, 0.1]);
        let full = baseline_gains(&g, &h, 4).unwrap();
        assert!((full.group_connected - full.fully_connected).abs() < 1e-12);
        let single = baseline_gains(&g, &h, 1).unwrap();
        assert!((single.group_connected - 1.24f64.powi(2)).abs() < 1e-12);
        assert!((full.fully_connected - 2.8 * 1.46).abs() < 1e-12);
    }

    #[test]
    fn group_must_divide() {
        let g = v(&[1.0; 6]);
        assert!(baseline_gains(&g, &g, 4).is_err());
        assert!(baseline_gains(&g, &g, 0).is_err());
    }
}
