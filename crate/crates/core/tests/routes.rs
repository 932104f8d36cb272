use cfkernel::intpoly::phase;
use cfkernel::numlaplace::QuadratureSpec;
use cfkernel::time_kernel::{kernel_general, kernel_with_route, Route};
use cfkernel::{IntPoly, Multivector, VectorM};
use num_complex::Complex64;

fn v(c: &[f64]) -> VectorM {
    VectorM::new(c.to_vec()).unwrap()
}

fn polys() -> Vec<IntPoly> {
    ["0", "x", "x^2", "2x^2", "x^3+1", "3x^4-x+2"].iter().map(|s| IntPoly::parse(s).unwrap()).collect()
}

#[test]
fn zero_x_collapses_to_the_constant_phase() {
    let spec = QuadratureSpec::default();
    for m in 2..=5 {
        let x = VectorM::zeros(m);
        let y = v(&[0.7, -1.1, 0.4, 0.9, -0.3][..m]);
        for g in polys() {
            let expect = Multivector::scalar(m, phase(&g, 0).to_complex());
            for route in Route::ALL {
                if let Ok(s) = kernel_with_route(&g, m, &x, &y, route, &spec) {
                    assert!(s.value.distance(&expect) < 1e-8, "G={g} m={m} {route}: {:?}", s.value.coeffs());
                }
            }
        }
    }
}

#[test]
fn square_kernel_is_symmetric_in_x_and_y() {
    let spec = QuadratureSpec::default();
    let g = IntPoly::monomial(1, 2);
    for (x, y) in [(v(&[0.3, 1.2]), v(&[-0.8, 0.5])), (v(&[0.3, 1.2, -0.4, 0.2]), v(&[-0.8, 0.5, 0.1, 1.0]))] {
        let m = x.dim();
        let a = kernel_general(&g, m, &x, &y, &spec).unwrap().value;
        let b = kernel_general(&g, m, &y, &x, &spec).unwrap().value;
        assert!(a.distance(&b) < 1e-10);
        let xi = cfkernel::clifford::inner(&x, &y).unwrap();
        assert!(a.distance(&Multivector::scalar(m, Complex64::from(xi.cos() + xi.sin()))) < 1e-8);
    }
}

#[test]
fn kernels_depend_on_g_only_through_residues() {
    let spec = QuadratureSpec::default();
    let (x, y) = (v(&[0.9, -0.4]), v(&[0.2, 1.3]));
    let cube = IntPoly::parse("x^3").unwrap();
    let fifth = IntPoly::parse("x^5").unwrap();
    let line = IntPoly::parse("x").unwrap();
    assert_eq!(cube.residue_table(), fifth.residue_table());
    assert_ne!(cube.residue_table(), line.residue_table());
    let k = |g: &IntPoly| kernel_general(g, 2, &x, &y, &spec).unwrap().value;
    assert!(k(&cube).distance(&k(&fifth)) < 1e-12);
    assert!(k(&cube).distance(&k(&line)) > 1e-3);
}

#[test]
fn every_route_agrees_where_it_applies() {
    let spec = QuadratureSpec::default();
    let (x, y) = (v(&[0.5, -0.2, 0.8, 0.1]), v(&[1.0, 0.3, -0.6, 0.4]));
    for g in polys() {
        let reference = kernel_with_route(&g, 4, &x, &y, Route::Talbot, &spec).unwrap().value;
        for route in Route::ALL {
            match kernel_with_route(&g, 4, &x, &y, route, &spec) {
                Ok(s) => assert!(s.value.distance(&reference) < 1e-7, "G={g} {route}"),
                Err(e) => assert!(matches!(e, cfkernel::Error::UnsupportedRoute(_)), "G={g} {route}: {e}"),
            }
        }
    }
}
