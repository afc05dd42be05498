mod common;

use fwsindy::ode::{add_noise, make_system, noise_sigma, Benchmark};
use fwsindy::{DictionarySpec, NoiseSpec, Trajectory};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

#[test]
fn lorenz_default_grid() {
    let traj = common::lorenz_clean();
    assert_eq!(traj.len(), 10_000);
    assert_eq!(traj.dim(), 3);
    assert_eq!(traj.dt(), 1e-3);
    assert_eq!(traj.states().row(0).iter().copied().collect::<Vec<_>>(), [20.0, 12.0, -30.0]);
    assert!((traj.duration() - 9.999).abs() < 1e-12);
}

#[test]
fn lotka_volterra_equations() {
    let sys = make_system("lotka_volterra", &[]).unwrap();
    let spec = DictionarySpec::new(2, 2).unwrap();
    let w = sys.true_coeffs(&spec).unwrap();
    assert_eq!(w.equations(), ["x1' = 3.000000 x1 - 1.000000 x1 x2", "x2' = - 6.000000 x2 + 1.000000 x1 x2"]);
}

#[test]
fn sigma_matches_brute_force_norm() {
    let traj = common::lorenz_clean();
    let mut sum = 0.0;
    for i in 0..traj.len() {
        for j in 0..traj.dim() {
            let v = traj.states()[(i, j)];
            sum += v * v;
        }
    }
    let want = 1.0 * (sum / (traj.len() * traj.dim()) as f64).sqrt();
    let got = noise_sigma(traj, 1.0);
    assert!(common::rel_diff(got, want) < 1e-12, "{got} vs {want}");
}

#[test]
fn sigma_direct_formula() {
    // 400 entries of 5 give ‖X‖_F = 100
    let traj = Trajectory::new(0.0, 0.1, DMatrix::from_element(100, 4, 5.0)).unwrap();
    assert!((noise_sigma(&traj, 0.1) - 0.5).abs() < 1e-15);
    assert_eq!(noise_sigma(&traj, 0.0), 0.0);
}

#[test]
fn injected_noise_has_calibrated_std() {
    let sys = make_system("lorenz", &[]).unwrap();
    let clean = sys.simulate(&[20.0, 12.0, -30.0], 10.0, 1000.0).unwrap();
    let spec = NoiseSpec::new(0.2, 99).unwrap();
    let noisy = add_noise(&clean, &spec);
    let diff = noisy.states() - clean.states();
    let count = diff.len() as f64;
    assert_eq!(count, 30_000.0);
    let mean = diff.sum() / count;
    let var = diff.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (count - 1.0);
    let sigma = noise_sigma(&clean, 0.2);
    assert!(common::rel_diff(var.sqrt(), sigma) < 0.02);
}

#[test]
fn trajectories_are_byte_reproducible() {
    let bytes = || {
        let sys = make_system("hyper_jha", &[]).unwrap();
        let clean = sys.simulate(sys.default_x0(), 2.0, 500.0).unwrap();
        let noisy = add_noise(&clean, &NoiseSpec::new(0.3, 7).unwrap());
        let mut buf = Vec::new();
        noisy.write_csv(&mut buf).unwrap();
        buf
    };
    assert_eq!(bytes(), bytes());
}

#[test]
fn csv_header_and_precision() {
    let sys = make_system("lotka_volterra", &[]).unwrap();
    let traj = sys.simulate(&[1.0, 1.0], 0.01, 1000.0).unwrap();
    let mut buf = Vec::new();
    traj.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2"));
    assert!(!text.contains('\r'));
    let back = Trajectory::read_csv(text.as_bytes()).unwrap();
    assert_eq!(back.states(), traj.states());
}

fn random_state(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| { let z: f64 = StandardNormal.sample(rng); 30.0 * z }).collect()
}

#[test]
fn dictionary_faithfulness_all_systems() {
    let mut rng = common::rng(11);
    for bench in Benchmark::ALL {
        let sys = make_system(bench.name(), &[]).unwrap();
        for degree in [2, 3] {
            let spec = DictionarySpec::new(sys.dim(), degree).unwrap();
            let w = sys.true_coeffs(&spec).unwrap();
            let mut theta = vec![0.0; spec.len()];
            let (mut direct, mut via) = (vec![0.0; sys.dim()], vec![0.0; sys.dim()]);
            for _ in 0..1000 {
                let x = random_state(&mut rng, sys.dim());
                sys.rhs(&x, &mut direct);
                w.apply(&x, &mut theta, &mut via);
                for (a, b) in direct.iter().zip(&via) {
                    assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{}: {a} vs {b}", bench.name());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn faithfulness_holds_under_parameter_overrides(
        a in -20.0f64..20.0, b in -20.0f64..20.0,
        x in prop::collection::vec(-50.0f64..50.0, 4),
    ) {
        for bench in Benchmark::ALL {
            let base = make_system(bench.name(), &[]).unwrap();
            let names: Vec<String> = base.params().iter().map(|(k, _)| k.clone()).collect();
            let overrides = vec![(names[0].clone(), a), (names[1].clone(), b)];
            let sys = make_system(bench.name(), &overrides).unwrap();
            let spec = DictionarySpec::new(sys.dim(), 2).unwrap();
            let w = sys.true_coeffs(&spec).unwrap();
            let x = &x[..sys.dim()];
            let mut theta = vec![0.0; spec.len()];
            let (mut direct, mut via) = (vec![0.0; sys.dim()], vec![0.0; sys.dim()]);
            sys.rhs(x, &mut direct);
            w.apply(x, &mut theta, &mut via);
            for (p, q) in direct.iter().zip(&via) {
                prop_assert!((p - q).abs() < 1e-10 * p.abs().max(1.0));
            }
        }
    }

    #[test]
    fn noise_is_seed_deterministic(seed in any::<u64>(), ratio in 0.0f64..2.0) {
        let traj = Trajectory::new(0.0, 0.01, DMatrix::from_fn(50, 2, |i, j| (i * (j + 1)) as f64 * 0.1)).unwrap();
        let spec = NoiseSpec::new(ratio, seed).unwrap();
        prop_assert_eq!(add_noise(&traj, &spec), add_noise(&traj, &spec));
    }

    #[test]
    fn states_are_finite_and_grid_uniform(fs in 50.0f64..400.0, duration in 0.05f64..0.5) {
        let sys = make_system("lotka_volterra", &[]).unwrap();
        let traj = sys.simulate(&[1.0, 1.0], duration, fs).unwrap();
        prop_assert_eq!(traj.len(), (duration * fs).round() as usize);
        prop_assert!(traj.states().iter().all(|v| v.is_finite()));
        prop_assert!((traj.dt() - 1.0 / fs).abs() < 1e-15);
    }
}
