//! Quick invariant checks that run in a second or two.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risnd_core::linalg::{complex_normal, CMat};
use risnd_core::phase::{
    baseline_gains, build_phi, diag_phases_siso, mu_permutations, nondiag_siso, sum_gain, water_filling,
};
use risnd_core::sdp::{brute_force_phases, solve_unit_diag_sdp, BruteForceInput, SdpProblem};
use risnd_core::theory::{complexity_counts, ordstat_rayleigh_pdf, ordstat_rayleigh_pdf_beta};

type Check = fn() -> Result<String, String>;

fn draw(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_normal(rng, 1.0)).collect()
}

fn worked_example() -> Result<String, String> {
    let g: Vec<Complex64> = [1.4, 0.2, 0.4, 0.8].iter().map(|&r| Complex64::new(r, 0.0)).collect();
    let h: Vec<Complex64> = [0.6, 1.0, 0.3, 0.1].iter().map(|&r| Complex64::new(r, 0.0)).collect();
    let d = diag_phases_siso(&g, &h).reflect(&h, &g).norm();
    let s = nondiag_siso(&g, &h).reflect(&h, &g).norm();
    if (d - 1.24).abs() < 1e-12 && (s - 2.02).abs() < 1e-12 {
        Ok(format!("sums {d:.2} / {s:.2}"))
    } else {
        Err(format!("sums {d} / {s}, expected 1.24 / 2.02"))
    }
}

fn dominance() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..2000 {
        let (g, h) = (draw(&mut rng, 16), draw(&mut rng, 16));
        let d = diag_phases_siso(&g, &h).reflect(&h, &g).norm_sqr();
        let s = nondiag_siso(&g, &h).reflect(&h, &g).norm_sqr();
        let f = baseline_gains(&g, &h, 1).map_err(|e| e.to_string())?.fully_connected;
        let tol = 1e-12 * f;
        if d > s + tol || s > f + tol {
            return Err(format!("draw {t}: diag {d}, nondiag {s}, fully {f}"));
        }
    }
    Ok("2000 draws ordered".into())
}

fn power_split() -> Result<String, String> {
    for s in [vec![1.0], vec![3.0, 1.0, 0.2], vec![0.5, 0.5, 0.5, 0.01]] {
        let l = water_filling(&s, 10.0).map_err(|e| e.to_string())?;
        let sum: f64 = l.iter().sum();
        if (sum - 1.0).abs() > 1e-12 || l.iter().any(|&x| x < 0.0) {
            return Err(format!("{l:?} for {s:?}"));
        }
    }
    Ok("weights sum to 1".into())
}

fn order_statistics() -> Result<String, String> {
    let mut worst = 0.0f64;
    for i in 1..=8 {
        for j in 1..=40 {
            let x = 0.1 * j as f64;
            worst = worst.max((ordstat_rayleigh_pdf(i, 8, x) - ordstat_rayleigh_pdf_beta(i, 8, x)).abs());
        }
    }
    if worst <= 1e-8 {
        Ok(format!("max pdf difference {worst:.1e}"))
    } else {
        Err(format!("pdf forms differ by {worst:.3e}"))
    }
}

fn complexity() -> Result<String, String> {
    let c = complexity_counts(16, 4).map_err(|e| e.to_string())?;
    if c.control_load.proposed == 32 && c.control_load.full == 136 && c.impedances.group == 40 {
        Ok("N=16, G=4 counts".into())
    } else {
        Err(format!("{c:?}"))
    }
}

fn sdp_bound() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for t in 0..5 {
        let g = CMat::from_fn(3, 2, |_, _| complex_normal(&mut rng, 1.0));
        let h = CMat::from_fn(2, 3, |_, _| complex_normal(&mut rng, 1.0));
        let (pi, po) = mu_permutations(&g, &h);
        let a = sum_gain(&build_phi(&h, &g, &pi, &po).map_err(|e| e.to_string())?);
        let sdp =
            solve_unit_diag_sdp(&SdpProblem::new(a.clone()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let bf = brute_force_phases(BruteForceInput::Quadratic(&a), 16).map_err(|e| e.to_string())?;
        if sdp.objective < bf.objective - 1e-9 {
            return Err(format!(
                "instance {t}: SDP {} below brute force {}",
                sdp.objective, bf.objective
            ));
        }
    }
    Ok("relaxation bounds 5 instances".into())
}

const CHECKS: [(&str, Check); 6] = [
    ("worked example", worked_example),
    ("gain ordering", dominance),
    ("water-filling", power_split),
    ("order statistics", order_statistics),
    ("complexity", complexity),
    ("SDP bound", sdp_bound),
];

/// Prints one line per check; returns the number of failures.
pub fn run() -> usize {
    let mut failed = 0;
    for (name, check) in CHECKS {
        match check() {
            Ok(msg) => println!("ok    {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    failed
}
