use pmoments::linalg::hermitian_eigenvalues;
use pmoments::oracles::ppt_check;
use pmoments::states::{upb_tiles, Family};

fn grid(family: Family, points: usize) -> Vec<f64> {
    let (lo, hi) = family.scan_bounds();
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

#[test]
fn generators_produce_states() {
    for family in Family::ALL {
        for x in grid(family, 50) {
            let rho = family.generate(x).unwrap();
            let m = rho.matrix();
            assert!(m.is_hermitian(1e-12), "{family}:{x}");
            assert!((m.trace().re - 1.0).abs() <= 1e-12, "{family}:{x}");
            assert!(hermitian_eigenvalues(m).unwrap().min() >= -1e-10, "{family}:{x}");
        }
    }
}

#[test]
fn bound_entangled_families_are_ppt() {
    for family in [Family::SigmaB, Family::SigmaA] {
        for x in grid(family, 50) {
            let check = ppt_check(&family.generate(x).unwrap()).unwrap();
            assert!(check.min_eigenvalue() >= -1e-10, "{family}:{x}");
        }
    }
    assert!(!ppt_check(&upb_tiles()).unwrap().npt);
}

#[test]
fn werner_pt_sign_change() {
    let f = |w: f64| {
        ppt_check(&Family::Werner.generate(w).unwrap())
            .unwrap()
            .min_eigenvalue()
    };
    let root = pmoments::evaluate::bisect(|w| Ok(f(w)), 0.0, 1.0, 1e-12).unwrap();
    assert!((root - 1.0 / 3.0).abs() <= 1e-9);
}
