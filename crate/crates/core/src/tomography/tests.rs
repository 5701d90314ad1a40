use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::fock::{fock_projector, number_op};
use crate::numerics::{disk_quadrature, QuadNode};
use crate::states::{make_state, tomogram_fock, tomogram_ground, CatParity, StateSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn space(dim: usize) -> FockSpace {
    FockSpace::new(dim).unwrap()
}

fn desk_frame() -> Frame {
    Frame::new(space(24), OrderingParameter::default(), disk_quadrature(6.0, 64, 64).unwrap(), 20).unwrap()
}

fn poisson(n: usize, mean: f64) -> f64 {
    (-mean + n as f64 * mean.ln() - crate::numerics::ln_factorial(n)).exp()
}

#[test]
fn dequantizer_examples() {
    assert_eq!(dequantizer(space(5), PhasePoint::new(0, c(0.0, 0.0))).unwrap(), CMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0, 0.0]));
    let u = dequantizer(space(40), PhasePoint::new(2, c(1.1, 0.0))).unwrap();
    assert!((u.trace() - 1.0).norm() < 1e-9);
    assert!((&u * &u).max_abs_diff(&u).unwrap() < 1e-9);
    let ground = make_state(space(40), StateSpec::Ground).unwrap();
    let w = ground.expectation(&dequantizer(space(40), PhasePoint::new(1, c(1.0, 0.0))).unwrap()).unwrap();
    assert!((w - c((-1f64).exp(), 0.0)).norm() < 1e-12);
    assert!(dequantizer(space(5), PhasePoint::new(5, c(0.0, 0.0))).is_err());
}

#[test]
fn dequantizer_equals_conjugated_projector() {
    let s = space(30);
    let x = PhasePoint::new(3, c(0.4, -0.9));
    let d = displacement(s, x.alpha);
    let conj = &(&d * &fock_projector(s, x.n).unwrap()) * &d.adjoint();
    assert!(dequantizer(s, x).unwrap().max_abs_diff(&conj).unwrap() < 1e-14);
}

#[test]
fn quantizer_at_origin() {
    let ord = OrderingParameter::default();
    let q = quantizer(space(6), PhasePoint::new(0, c(0.0, 0.0)), ord).unwrap();
    let pref = 16.0 / (3.0 * PI);
    for k in 0..6 {
        // ((s − 1)/(s + 1))^k with s = −1/2 by repeated complex multiplication
        let s = c(-0.5, 0.0);
        let mut power = c(1.0, 0.0);
        for _ in 0..k {
            power *= (s - 1.0) / (s + 1.0);
        }
        assert!((q[(k, k)] - power * pref).norm() < 1e-12 * power.norm().max(1.0));
        assert!((q[(k, k)] - c(pref * (-3f64).powi(k as i32), 0.0)).norm() < 1e-9 * 3f64.powi(k as i32));
    }
}

#[test]
fn quantizer_is_hermitian_for_real_s() {
    for s in [-0.3, -0.5, -2.0] {
        let ord = OrderingParameter::real(s).unwrap();
        let q = quantizer(space(24), PhasePoint::new(3, c(1.3, 0.6)), ord).unwrap();
        assert!(q.hermiticity_defect() <= 1e-9 * q.max_abs().max(1.0), "s = {s}");
    }
}

#[test]
fn dual_symbol_of_identity_is_quantizer_trace() {
    let ord = OrderingParameter::default();
    let s = space(20);
    let x = PhasePoint::new(2, c(0.3, 0.1));
    let direct = quantizer(s, x, ord).unwrap().trace();
    assert_eq!(dual_symbol(&CMatrix::identity(20), x, ord).unwrap(), direct);
}

#[test]
fn dual_symbol_differs_from_tomogram() {
    let s = space(20);
    let rho = make_state(s, StateSpec::Coherent(c(0.5, 0.2))).unwrap();
    let x = PhasePoint::new(1, c(0.4, 0.0));
    let dual = dual_symbol(rho.matrix(), x, OrderingParameter::default()).unwrap();
    let w = symbol_at(rho.matrix(), x).unwrap();
    assert!((dual - w).norm() > 1e-3);
}

#[test]
fn forward_matches_analytic_tomograms() {
    let s = space(40);
    let scheme = disk_quadrature(2.0, 6, 8).unwrap();
    let frame = Frame::new(s, OrderingParameter::default(), scheme.clone(), 12).unwrap();
    let ground = frame.forward(&make_state(s, StateSpec::Ground).unwrap()).unwrap();
    for (j, q) in scheme.nodes().iter().enumerate() {
        for n in 0..=12 {
            assert!((ground.value(j, n) - tomogram_ground(n, q.alpha)).abs() < 1e-10);
        }
    }
    for m in 0..=6 {
        let grid = frame.forward(&make_state(s, StateSpec::Fock(m)).unwrap()).unwrap();
        for (j, q) in scheme.nodes().iter().enumerate() {
            for n in 0..=12 {
                assert!((grid.value(j, n) - tomogram_fock(m, n, q.alpha)).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn coherent_tomogram_is_shifted_poisson() {
    let s = space(40);
    let beta = c(0.8, 0.3);
    let frame = Frame::new(s, OrderingParameter::default(), disk_quadrature(2.0, 5, 7).unwrap(), 15).unwrap();
    let grid = frame.forward(&make_state(s, StateSpec::Coherent(beta)).unwrap()).unwrap();
    for (j, q) in frame.scheme().nodes().iter().enumerate() {
        let mean = (beta - q.alpha).norm_sqr();
        for n in 0..=15 {
            assert!((grid.value(j, n) - poisson(n, mean)).abs() < 1e-8);
        }
    }
}

#[test]
fn round_trip_ground_and_fock() {
    let frame = desk_frame();
    for spec in [StateSpec::Ground, StateSpec::Fock(2)] {
        let rho = make_state(frame.space(), spec).unwrap();
        let rec = frame.reconstruct(&frame.forward(&rho).unwrap()).unwrap();
        let err = rec.distance(&rho).unwrap();
        assert!(err <= 1e-3, "{spec}: {err:e}");
        assert!(rec.trace_defect < 1e-3);
    }
}

#[test]
fn literal_sign_quantizer_reconstructs_parity_image() {
    // Pairing Û(n, α) with D̂ built on D(−α) λ^N̂ D(α) amounts to reconstructing
    // at −α, which yields P ρ P with P = (−1)^N̂.
    let frame = desk_frame();
    let rho = make_state(frame.space(), StateSpec::Coherent(c(0.8, 0.3))).unwrap();
    let grid = frame.forward(&rho).unwrap();
    let flipped: Vec<QuadNode> = frame.scheme().nodes().iter().map(|q| QuadNode { alpha: -q.alpha, weight: q.weight }).collect();
    let flipped_scheme = QuadratureScheme::from_nodes(flipped).unwrap();
    let flipped_grid = TomogramGrid::new(flipped_scheme.clone(), 20, grid.values().to_vec()).unwrap();
    let literal = Frame::new(frame.space(), frame.ordering(), flipped_scheme, 20).unwrap();
    let rec = literal.reconstruct(&flipped_grid).unwrap();
    let parity = CMatrix::from_real_diag(&(0..24).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>());
    let reflected = &(&parity * rho.matrix()) * &parity;
    assert!(rec.matrix.frobenius_distance(&reflected).unwrap() < 1e-3);
    assert!(rec.matrix.frobenius_distance(rho.matrix()).unwrap() > 0.5);
}

#[test]
fn reconstruction_is_linear() {
    let frame = desk_frame();
    let a = frame.forward(&make_state(frame.space(), StateSpec::Fock(1)).unwrap()).unwrap();
    let b = frame.forward(&make_state(frame.space(), StateSpec::Thermal(0.5)).unwrap()).unwrap();
    let p = 0.3;
    let mixed = frame.reconstruct(&a.mix(&b, p).unwrap()).unwrap().matrix;
    let ra = frame.reconstruct(&a).unwrap().matrix;
    let rb = frame.reconstruct(&b).unwrap().matrix;
    let combo = ra.scale(c(p, 0.0)).add(&rb.scale(c(1.0 - p, 0.0))).unwrap();
    // rounding of the inputs is amplified by the cancellation across nodes
    let (ord, per) = (frame.ordering(), frame.levels());
    let amplification: f64 = frame
        .scheme()
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, q)| {
            let coef: f64 = (0..per).map(|n| a.value(j, n).max(b.value(j, n)) * ord.ratio().norm().powi(-(n as i32))).sum();
            q.weight * ord.prefactor().norm() * coef * displaced_power(frame.space(), ord.ratio(), q.alpha).max_abs()
        })
        .sum();
    let diff = mixed.max_abs_diff(&combo).unwrap();
    assert!(diff <= 16.0 * f64::EPSILON * amplification);
}

#[test]
fn ordered_reconstruction_is_bitwise_reproducible() {
    let frame = desk_frame();
    let grid = frame.forward(&make_state(frame.space(), StateSpec::Cat(CatParity::Even, c(1.2, 0.0))).unwrap()).unwrap();
    let run = |threads: usize, frame: &Frame| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| frame.reconstruct(&grid).unwrap().matrix)
    };
    let one = run(1, &frame);
    assert_eq!(run(4, &frame), one);
    assert_eq!(run(3, &frame), one);
    let fast = run(4, &frame.clone().with_reduction(Reduction::Unordered));
    assert!(fast.max_abs_diff(&one).unwrap() <= 1e-12);
}

#[test]
fn divergent_parameters_are_reported() {
    let frame = Frame::new(space(24), OrderingParameter::real(-0.9).unwrap(), disk_quadrature(6.0, 16, 16).unwrap(), 20).unwrap();
    let grid = frame.forward(&make_state(frame.space(), StateSpec::Ground).unwrap()).unwrap();
    let rec = frame.reconstruct_unchecked(&grid).unwrap();
    assert!(rec.trace_defect > 0.05);
    assert!(matches!(frame.reconstruct(&grid), Err(Error::Divergent { .. })));
}

#[test]
fn expectation_via_dual_examples() {
    // 64 radial nodes leave ≈ 5e−5 errors on the top diagonal entries, which
    // ⟨N̂⟩ weights by k; 96 nodes resolve them
    let frame = Frame::new(space(24), OrderingParameter::default(), disk_quadrature(6.0, 96, 64).unwrap(), 20).unwrap();
    let n_op = number_op(frame.space());
    for (spec, want) in [(StateSpec::Coherent(c(0.8, 0.0)), 0.64), (StateSpec::Fock(3), 3.0)] {
        let rho = make_state(frame.space(), spec).unwrap();
        let grid = frame.forward(&rho).unwrap();
        let direct = rho.expectation(&n_op).unwrap().re;
        assert!((direct - want).abs() < 1e-9);
        let e = frame.expectation_via_dual(&grid, &n_op).unwrap();
        assert!((e.re - want).abs() < 1e-3, "{spec}: {e}");
        assert!(e.im.abs() < 1e-6);
        let one = frame.expectation_via_dual(&grid, &CMatrix::identity(24)).unwrap();
        assert!((one - 1.0).norm() < 1e-4);
    }
}

#[test]
fn grid_mismatch_is_rejected() {
    let frame = desk_frame();
    let other = Frame::new(space(24), OrderingParameter::default(), disk_quadrature(6.0, 8, 8).unwrap(), 20).unwrap();
    let grid = other.forward(&make_state(space(24), StateSpec::Ground).unwrap()).unwrap();
    assert!(matches!(frame.reconstruct(&grid), Err(Error::GridMismatch(_))));
    assert!(Frame::new(space(24), OrderingParameter::default(), disk_quadrature(6.0, 8, 8).unwrap(), 24).is_err());
}

#[test]
fn grid_values_are_validated() {
    let scheme = disk_quadrature(1.0, 4, 4).unwrap();
    assert!(TomogramGrid::new(scheme.clone(), 1, vec![0.5; 32]).is_ok());
    assert!(TomogramGrid::new(scheme.clone(), 1, vec![0.5; 31]).is_err());
    assert!(TomogramGrid::new(scheme.clone(), 1, vec![0.6; 32]).is_err());
    let mut v = vec![0.0; 32];
    v[3] = -1e-6;
    assert!(TomogramGrid::new(scheme, 1, v).is_err());
}

#[test]
fn csv_round_trip_is_exact() {
    let s = space(12);
    let frame = Frame::new(s, OrderingParameter::default(), disk_quadrature(2.5, 5, 6).unwrap(), 8).unwrap();
    let grid = frame.forward(&make_state(s, StateSpec::Coherent(c(0.3, -0.7))).unwrap()).unwrap();
    let mut buf = Vec::new();
    grid.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("n,re_alpha,im_alpha,weight,value\n"));
    assert_eq!(text.lines().count(), 1 + 30 * 9);
    let back = TomogramGrid::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, grid);
}

#[test]
fn malformed_csv_is_rejected() {
    for bad in [
        "",
        "n,re,im,weight,value\n0,0,0,1,1\n",
        "n,re_alpha,im_alpha,weight,value\n0,0.5,0,1,abc\n",
        "n,re_alpha,im_alpha,weight,value\n0,0.5,0,1,0.1\n0,0.5,0,1,0.2\n",
        "n,re_alpha,im_alpha,weight,value\n1,0.5,0,1,0.1\n",
    ] {
        assert!(TomogramGrid::read_csv(bad.as_bytes()).is_err(), "{bad:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tomogram_values_are_real_probabilities(re in -0.8f64..0.8, im in -0.8f64..0.8, nbar in 0.1f64..0.5) {
        let s = space(40);
        let frame = Frame::new(s, OrderingParameter::default(), disk_quadrature(2.0, 4, 6).unwrap(), 29).unwrap();
        for spec in [StateSpec::Coherent(c(re, im)), StateSpec::Thermal(nbar), StateSpec::Cat(CatParity::Even, c(re, im))] {
            let rho = make_state(s, spec).unwrap();
            let symbols = frame.symbols(rho.matrix()).unwrap();
            prop_assert!(symbols.iter().all(|w| w.im.abs() <= 1e-12 && (-1e-12..=1.0 + 1e-12).contains(&w.re)));
            let grid = frame.forward(&rho).unwrap();
            for sum in grid.node_sums() {
                prop_assert!((sum - 1.0).abs() < 1e-6, "{spec}: {sum}");
            }
        }
    }

    #[test]
    fn forward_map_is_rotation_covariant(theta in 0.0f64..std::f64::consts::TAU, re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let s = space(40);
        let rho = make_state(s, StateSpec::Cat(CatParity::Even, c(re, im))).unwrap();
        let u = CMatrix::from_diag(&(0..40).map(|k| Complex64::from_polar(1.0, theta * k as f64)).collect::<Vec<_>>());
        let rotated = &(&u * rho.matrix()) * &u.adjoint();
        for (n, a) in [(0, c(0.3, 0.2)), (2, c(-0.8, 0.5)), (5, c(1.2, -1.1))] {
            let before = symbol_at(rho.matrix(), PhasePoint::new(n, a)).unwrap();
            let after = symbol_at(&rotated, PhasePoint::new(n, a * Complex64::from_polar(1.0, theta))).unwrap();
            prop_assert!((before - after).norm() < 1e-12);
        }
        // a global phase on the state vector leaves ρ, and therefore w, unchanged
        let psi = rho.matrix().column(0);
        let phased: Vec<Complex64> = psi.iter().map(|z| z * Complex64::from_polar(1.0, theta)).collect();
        let outer = CMatrix::outer(&psi, &psi);
        let outer_phased = CMatrix::outer(&phased, &phased);
        let x = PhasePoint::new(1, c(0.5, 0.5));
        prop_assert!((symbol_at(&outer, x).unwrap() - symbol_at(&outer_phased, x).unwrap()).norm() < 1e-14);
    }
}

