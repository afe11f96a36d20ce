//! Randomized properties of the complex-orthogonal eigensolver: trace
//! conservation, agreement between the Jacobi and closed-form routes, and
//! biorthogonality diagnostics away from degeneracies.

use epcore::matrix::CMatrix;
use epcore::spectral::{self, bilinear};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fills a symmetric matrix from its upper triangle, row by row.
fn symmetric_from_triangle(entries: &[Complex64], n: usize) -> CMatrix {
    assert_eq!(entries.len(), n * (n + 1) / 2);
    let mut h = CMatrix::zeros(n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            h[(i, j)] = entries[k];
            h[(j, i)] = entries[k];
            k += 1;
        }
    }
    h
}

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn sym_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(complex_entry(), n * (n + 1) / 2)
        .prop_map(move |v| symmetric_from_triangle(&v, n))
}

fn any_sym_matrix() -> impl Strategy<Value = CMatrix> {
    (2usize..=4).prop_flat_map(sym_matrix)
}

proptest! {
    #[test]
    fn trace_is_conserved(h in any_sym_matrix()) {
        let s = spectral::eig_general(&h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!((s.eigenvalue_sum() - h.trace()).norm() <= 1e-9 * scale);
    }

    #[test]
    fn jacobi_agrees_with_the_closed_form_on_2x2(h in sym_matrix(2)) {
        let (l1, l2) = spectral::eig2_closed_form(&h);
        let scale = h.frobenius_norm().max(1.0);
        // Both routes lose relative accuracy together at a near-degenerate
        // pair; compare them only when the pair is resolved.
        prop_assume!((l1 - l2).norm() > 1e-6 * scale);
        let s = spectral::eig_general(&h).unwrap();
        let (a, b) = (s.states[0].value, s.states[1].value);
        let direct = (a - l1).norm().max((b - l2).norm());
        let swapped = (a - l2).norm().max((b - l1).norm());
        prop_assert!(direct.min(swapped) <= 1e-10 * scale);
    }

    #[test]
    fn resolved_spectra_are_biorthogonal(h in any_sym_matrix()) {
        let s = spectral::eig_general(&h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assume!(s.is_regular() && s.min_gap() > 1e-4 * scale);
        let n = s.n();
        for i in 0..n {
            for j in 0..n {
                let overlap = bilinear(&s.states[i].vector, &s.states[j].vector);
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!(
                    (overlap - expected).norm() < 1e-6,
                    "overlap ({i},{j}) = {overlap}"
                );
            }
        }
        for st in &s.states {
            prop_assert!(st.a_norm >= 1.0 - 1e-9);
            prop_assert!((st.rigidity * st.a_norm - 1.0).abs() < 1e-9);
            prop_assert!(st.mixing_sq.len() == n);
        }
    }

    #[test]
    fn eigenpairs_satisfy_the_eigenvalue_equation(h in any_sym_matrix()) {
        let s = spectral::eig_general(&h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assume!(s.is_regular() && s.min_gap() > 1e-4 * scale);
        let n = s.n();
        for st in &s.states {
            // The bilinear normalization can stretch the Euclidean length near
            // a degeneracy; measure the residual relative to the vector.
            let vnorm: f64 = st.vector.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for i in 0..n {
                let mut hv = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    hv += h[(i, j)] * st.vector[j];
                }
                let residual = (hv - st.value * st.vector[i]).norm();
                prop_assert!(
                    residual <= 1e-8 * scale * vnorm,
                    "residual {residual} at row {i} (value {})",
                    st.value
                );
            }
        }
    }
}

/// A frozen bulk comparison of the two eigenvalue routes: 10^4 seeded random
/// complex-symmetric 2x2 matrices, absolute agreement per eigenvalue.
#[test]
fn seeded_bulk_closed_form_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x00_5eed);
    for case in 0..10_000 {
        let mut e = [Complex64::new(0.0, 0.0); 3];
        for v in &mut e {
            *v = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        }
        let h = CMatrix::from_rows(&[&[e[0], e[1]], &[e[1], e[2]]]);
        let (l1, l2) = spectral::eig2_closed_form(&h);
        let s = spectral::eig_general(&h).unwrap();
        let (a, b) = (s.states[0].value, s.states[1].value);
        let direct = (a - l1).norm().max((b - l2).norm());
        let swapped = (a - l2).norm().max((b - l1).norm());
        assert!(
            direct.min(swapped) <= 1e-10,
            "case {case}: routes disagree by {:.3e}",
            direct.min(swapped)
        );
    }
}
