use super::NonDiagonalPhase;
use crate::linalg::{phase_or_zero, stable_argsort, wrap_phase};
use num_complex::Complex64;

/// Diagonal RIS phases that co-phase every reflected path.
pub fn diag_phases_siso(g: &[Complex64], h_row: &[Complex64]) -> NonDiagonalPhase {
    let theta = g
        .iter()
        .zip(h_row)
        .map(|(&gi, &hi)| wrap_phase(-(phase_or_zero(hi) + phase_or_zero(gi))))
        .collect();
    NonDiagonalPhase::diagonal(theta)
}

/// `(perm_in, perm_out)`: stable ascending sorts of `|g|` and `|h|`.
pub fn sort_permutations(g: &[Complex64], h_row: &[Complex64]) -> (Vec<usize>, Vec<usize>) {
    let ag: Vec<f64> = g.iter().map(|z| z.norm()).collect();
    let ah: Vec<f64> = h_row.iter().map(|z| z.norm()).collect();
    (stable_argsort(&ag), stable_argsort(&ah))
}

/// Co-phased configuration for fixed permutations.
pub(crate) fn coherent_phase(
    g: &[Complex64],
    h_row: &[Complex64],
    perm_in: Vec<usize>,
    perm_out: Vec<usize>,
) -> NonDiagonalPhase {
    let theta = perm_in
        .iter()
        .zip(&perm_out)
        .map(|(&src, &dst)| wrap_phase(-(phase_or_zero(h_row[dst]) + phase_or_zero(g[src]))))
        .collect();
    NonDiagonalPhase {
        perm_in,
        perm_out,
        theta,
    }
}

/// Optimal SISO non-diagonal configuration: the k-th weakest incident
/// element is routed to the k-th weakest departing element.
pub fn nondiag_siso(g: &[Complex64], h_row: &[Complex64]) -> NonDiagonalPhase {
    let (perm_in, perm_out) = sort_permutations(g, h_row);
    coherent_phase(g, h_row, perm_in, perm_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::channel_gain;
    use std::f64::consts::PI;

    fn worked_example() -> (Vec<Complex64>, Vec<Complex64>) {
        let g = [
            (1.4, -0.75 * PI),
            (0.2, 5.0 * PI / 6.0),
            (0.4, PI / 4.0),
            (0.8, -PI / 6.0),
        ];
        let h = [
            (0.6, -PI / 4.0),
            (1.0, 2.0 * PI / 3.0),
            (0.3, -7.0 * PI / 8.0),
            (0.1, PI / 8.0),
        ];
        let mk = |v: &[(f64, f64)]| v.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
        (mk(&g), mk(&h))
    }

    fn same_angle(a: f64, b: f64) -> bool {
        let d = wrap_phase(a - b);
        d < 1e-12 || (std::f64::consts::TAU - d) < 1e-12
    }

    #[test]
    fn worked_example_diagonal() {
        let (g, h) = worked_example();
        let p = diag_phases_siso(&g, &h);
        let expect = [PI, -1.5 * PI, 5.0 * PI / 8.0, PI / 24.0];
        for (t, e) in p.theta.iter().zip(expect) {
            assert!(same_angle(*t, e), "{t} vs {e}");
        }
        let gain = channel_gain(&h, &p, &g).unwrap();
        assert!((gain.sqrt() - 1.24).abs() < 1e-12);
        assert!((gain - 1.5376).abs() < 1e-12);
    }

    #[test]
    fn worked_example_sorted() {
        let (g, h) = worked_example();
        let p = nondiag_siso(&g, &h);
        assert_eq!(p.perm_in, vec![1, 2, 3, 0]);
        assert_eq!(p.perm_out, vec![3, 2, 0, 1]);
        assert_eq!(p.bijection(), vec![1, 3, 2, 0]);
        let gain = channel_gain(&h, &p, &g).unwrap();
        assert!((gain.sqrt() - 2.02).abs() < 1e-12);
        assert!((gain - 4.0804).abs() < 1e-12);
        // entry routing element 4 onto element 1
        let theta = p.expand();
        assert!(same_angle(theta[(0, 3)].arg(), 5.0 * PI / 12.0));
    }

    #[test]
    fn displayed_permutation_matrices() {
        let (g, h) = worked_example();
        let p = nondiag_siso(&g, &h);
        let jt = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]];
        let jr = [[0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 0, 0]];
        let (mt, mr) = (p.j_t(), p.j_r());
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(mt[(r, c)].re, jt[r][c] as f64);
                assert_eq!(mr[(r, c)].re, jr[r][c] as f64);
            }
        }
    }

    #[test]
    fn ties_keep_identity() {
        let g = vec![Complex64::from_polar(1.0, 0.3); 5];
        let h: Vec<Complex64> = (0..5).map(|i| Complex64::new(i as f64 + 1.0, 0.0)).collect();
        let (pin, pout) = sort_permutations(&g, &h);
        assert_eq!(pin, vec![0, 1, 2, 3, 4]);
        assert_eq!(pout, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn unit_aligned_gain_is_n_squared() {
        let g: Vec<Complex64> = (0..6).map(|i| Complex64::from_polar(1.0, 0.4 * i as f64)).collect();
        let h: Vec<Complex64> = g.iter().map(|z| z.conj()).collect();
        let p = diag_phases_siso(&g, &h);
        assert!(p.theta.iter().all(|&t| same_angle(t, 0.0)));
        assert!((channel_gain(&h, &p, &g).unwrap() - 36.0).abs() < 1e-10);
    }

    #[test]
    fn single_element_both_agree() {
        let g = vec![Complex64::from_polar(0.7, 1.0)];
        let h = vec![Complex64::from_polar(1.3, -2.0)];
        let a = channel_gain(&h, &diag_phases_siso(&g, &h), &g).unwrap();
        let b = channel_gain(&h, &nondiag_siso(&g, &h), &g).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!((a - (0.7f64 * 1.3).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn zero_entries_get_zero_phase() {
        let g = vec![Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, 0.5)];
        let h = vec![Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, 0.5)];
        let p = diag_phases_siso(&g, &h);
        assert_eq!(p.theta[0], 0.0);
    }
}
