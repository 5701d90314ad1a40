use num_complex::Complex64;
use pntomo::numerics::disk_quadrature;
use pntomo::states::make_state;
use pntomo::tomography::{dequantizer, quantizer};
use pntomo::{CMatrix, DensityMatrix, FockSpace, Frame, OrderingParameter, PhasePoint, StateSpec, TomogramGrid};
use proptest::prelude::*;

fn desk_frame() -> Frame {
    let space = FockSpace::new(24).unwrap();
    Frame::new(space, OrderingParameter::default(), disk_quadrature(6.0, 64, 64).unwrap(), 20).unwrap()
}

#[test]
fn csv_file_round_trip_reconstructs_the_state() {
    let frame = desk_frame();
    let rho = make_state(frame.space(), "cat:odd:0.9+0.4i".parse().unwrap()).unwrap();
    let tomo = frame.forward(&rho).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.csv");
    tomo.write_csv(std::fs::File::create(&path).unwrap()).unwrap();
    let back = TomogramGrid::read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert!(back.scheme().same_nodes(tomo.scheme()));
    assert!(back.values() == tomo.values() && back.n_max() == tomo.n_max());

    let rec = frame.reconstruct(&back).unwrap();
    assert!(rec.distance(&rho).unwrap() <= 1e-3);
    let json = pntomo::io::matrix_to_json(&rec.matrix).unwrap();
    assert!(pntomo::io::matrix_from_json(&json).unwrap() == rec.matrix);
}

#[test]
fn quantizer_integrates_against_dequantizer_to_a_delta() {
    // Σ_n ∫ Tr[Û(m, β) D̂(n, α)] Tr[A Û(n, α)] d²α = Tr[A Û(m, β)] for A = |1⟩⟨1|
    let frame = desk_frame();
    let space = frame.space();
    let a = make_state(space, StateSpec::Fock(1)).unwrap();
    let target = PhasePoint::new(2, Complex64::new(0.4, -0.3));
    let u_target = dequantizer(space, target).unwrap();
    let mut total = Complex64::new(0.0, 0.0);
    for q in frame.scheme().nodes() {
        for n in 0..=frame.n_max() {
            let x = PhasePoint::new(n, q.alpha);
            let overlap = u_target.trace_of_product(&quantizer(space, x, frame.ordering()).unwrap()).unwrap();
            let symbol = a.matrix().trace_of_product(&dequantizer(space, x).unwrap()).unwrap();
            total += q.weight * overlap * symbol;
        }
    }
    let direct = a.matrix().trace_of_product(&u_target).unwrap();
    assert!((total - direct).norm() < 2e-3, "{total} vs {direct}");
}

fn pure_state(coeffs: &[(f64, f64)], dim: usize) -> DensityMatrix {
    let mut v: Vec<Complex64> = coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
    v.resize(dim, Complex64::new(0.0, 0.0));
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
    DensityMatrix::new(CMatrix::outer(&v, &v)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn low_photon_pure_states_round_trip(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)) {
        prop_assume!(coeffs.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 0.1);
        let frame = desk_frame();
        let rho = pure_state(&coeffs, 24);
        let tomo = frame.forward(&rho).unwrap();
        let rec = frame.reconstruct(&tomo).unwrap();
        prop_assert!(rec.distance(&rho).unwrap() <= 1e-3);
        prop_assert!(rec.min_eigenvalue >= -5e-3);
        for sum in tomo.node_sums() {
            prop_assert!(sum <= 1.0 + 1e-9);
        }
    }
}
