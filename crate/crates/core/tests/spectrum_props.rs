use hofstadter::rationals::farey_sequence;
use hofstadter::spectrum::{band_edges, harper_matrix, Boundary, SpectrumAtFlux};
use hofstadter::verify::spectrum_oracle;
use hofstadter::ReducedFraction;

const TOL: f64 = 1e-9;

fn frac(p: i64, q: i64) -> ReducedFraction {
    ReducedFraction::new(p, q).unwrap()
}

fn interior_fractions(q_max: i64) -> Vec<ReducedFraction> {
    farey_sequence(q_max).unwrap()
}

#[test]
fn edges_bounded_and_mirror_symmetric() {
    for f in interior_fractions(50) {
        let e: Vec<f64> = band_edges(f).unwrap();
        assert_eq!(e.len(), 2 * f.order());
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
        assert!(e.iter().all(|x| x.abs() <= 4.0 + TOL), "{f}: {e:?}");
        let n = e.len();
        for i in 0..n {
            assert!(
                (e[i] + e[n - 1 - i]).abs() < TOL,
                "{f}: E -> -E broken at {i}"
            );
        }
    }
}

#[test]
fn flux_reflection_and_shift() {
    for f in interior_fractions(50) {
        let a: Vec<f64> = band_edges(f).unwrap();
        let b: Vec<f64> = band_edges(f.reflected().unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < TOL, "{f}");
        }
        for boundary in [Boundary::Periodic, Boundary::Antiperiodic] {
            let nu = std::f64::consts::PI / f.q() as f64;
            assert_eq!(
                harper_matrix::<f64>(f, nu, boundary).entries,
                harper_matrix::<f64>(f.shifted(1), nu, boundary).entries
            );
        }
        assert_eq!(
            band_edges::<f64>(f).unwrap(),
            band_edges::<f64>(f.shifted(3)).unwrap()
        );
    }
}

#[test]
fn half_flux_bands_touch() {
    let s = SpectrumAtFlux::<f64>::compute(frac(1, 2)).unwrap();
    assert_eq!(s.gaps.len(), 1);
    assert!(s.gaps[0].width < 1e-12);
    // the literal periodic/antiperiodic pair without the transverse phase
    // puts the inner edges at ±2, which would open a fake gap
    let naive = harper_matrix::<f64>(frac(1, 2), 0.0, Boundary::Antiperiodic)
        .eigenvalues()
        .unwrap();
    assert!((naive[0] + 2.0).abs() < 1e-12 && (naive[1] - 2.0).abs() < 1e-12);
}

#[test]
fn even_denominators_have_a_closed_central_gap() {
    for f in interior_fractions(50)
        .into_iter()
        .filter(|f| f.q() % 2 == 0)
    {
        let s = SpectrumAtFlux::<f64>::compute(f).unwrap();
        let central = &s.gaps[f.order() / 2 - 1];
        assert!(central.width < TOL, "{f}: central gap {}", central.width);
    }
}

fn hausdorff(edges: &[f64], bands: &[(f64, f64)]) -> f64 {
    bands
        .iter()
        .enumerate()
        .map(|(r, &(lo, hi))| (lo - edges[2 * r]).abs().max((hi - edges[2 * r + 1]).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn grid_oracle_brackets_band_edges() {
    let n = 512;
    let bound = 5.0 * (std::f64::consts::TAU / n as f64).powi(2);
    for f in interior_fractions(7) {
        let edges: Vec<f64> = band_edges(f).unwrap();
        let bands = spectrum_oracle::<f64>(f, n).unwrap();
        for (r, &(lo, hi)) in bands.iter().enumerate() {
            let (elo, ehi) = (edges[2 * r], edges[2 * r + 1]);
            assert!(
                lo >= elo - TOL && hi <= ehi + TOL,
                "{f} band {}: oracle outside edges",
                r + 1
            );
            assert!(
                lo - elo <= bound && ehi - hi <= bound,
                "{f} band {}: {lo} {hi} vs {elo} {ehi}",
                r + 1
            );
        }
    }
}

#[test]
fn grid_oracle_examples() {
    let s3 = 3f64.sqrt();
    let cases: [(ReducedFraction, Vec<f64>); 3] = [
        (frac(1, 1), vec![-4.0, 4.0]),
        (frac(1, 2), vec![-8f64.sqrt(), 0.0, 0.0, 8f64.sqrt()]),
        (
            frac(1, 3),
            vec![-1.0 - s3, -2.0, 1.0 - s3, -1.0 + s3, 2.0, 1.0 + s3],
        ),
    ];
    for (f, want) in cases {
        let bands = spectrum_oracle::<f64>(f, 512).unwrap();
        for (r, (lo, hi)) in bands.iter().enumerate() {
            assert!(
                (lo - want[2 * r]).abs() < 1e-3 && (hi - want[2 * r + 1]).abs() < 1e-3,
                "{f}"
            );
        }
    }
}

#[test]
fn grid_oracle_tightens_quadratically() {
    for f in [frac(1, 3), frac(2, 5)] {
        let edges: Vec<f64> = band_edges(f).unwrap();
        let coarse = spectrum_oracle::<f64>(f, 512).unwrap();
        let fine = spectrum_oracle::<f64>(f, 1024).unwrap();
        // the 1024 grid contains the 512 grid, so its intervals can only grow
        for (c, w) in coarse.iter().zip(&fine) {
            assert!(w.0 <= c.0 && w.1 >= c.1);
        }
        let (dc, df) = (hausdorff(&edges, &coarse), hausdorff(&edges, &fine));
        assert!(dc <= 4.0 * df, "{f}: d(512)={dc:e} d(1024)={df:e}");
    }
}

#[test]
fn odd_grids_show_second_order_convergence() {
    // even grids sample the extremal momenta exactly. An odd grid misses them
    // by half a step, and tripling it shrinks that miss by exactly 3
    for f in [frac(1, 3), frac(2, 5)] {
        let edges: Vec<f64> = band_edges(f).unwrap();
        let d = |n| hausdorff(&edges, &spectrum_oracle::<f64>(f, n).unwrap());
        let (coarse, fine) = (d(129), d(387));
        let ratio = coarse / fine;
        assert!(coarse > 1e-6, "{f}: odd grid unexpectedly exact");
        assert!((8.0..10.0).contains(&ratio), "{f}: d(129)/d(387) = {ratio}");
    }
}
