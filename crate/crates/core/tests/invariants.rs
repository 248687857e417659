use ppt_core::block::{
    assemble, is_ppt, negate_offdiag, partial_transpose, ppt_variants, rotate_offdiag, swap_blocks,
    Block2x2,
};
use ppt_core::functionals::Functional;
use ppt_core::linalg::{
    geometric_mean, herm_eig, pd_inverse, polar, singular_values, svd, ComplexMatrix,
    HermitianMatrix, DEFAULT_TOL,
};
use ppt_core::sampling::{random_pd, random_unitary, Method, SampleRng, SampleSpec};
use ppt_core::verify::{
    run_verifiers, verify_main, verify_norm_chain, verify_singular_product_chain, VerifierKind,
    VerifyOptions,
};
use proptest::prelude::*;

fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm()
}

fn strict_block(method: Method, n: usize, seed: u64) -> Block2x2 {
    SampleSpec::new(method, n, 1, seed)
        .strict_ppt_block(0)
        .unwrap()
        .0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigen_decomposition_reconstructs(seed in any::<u64>(), n in 1usize..=7) {
        let g = SampleRng::new(seed).ginibre(n);
        let m = HermitianMatrix::project(&(&g + &g.adjoint()));
        let e = herm_eig(&m).unwrap();
        prop_assert!(dist(&e.reconstruct(), m.as_matrix()) <= 1e-12 * m.frobenius_norm().max(1.0));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let trace: f64 = e.eigenvalues.iter().sum();
        prop_assert!((trace - m.trace().re).abs() <= 1e-12 * m.frobenius_norm().max(1.0));
    }

    #[test]
    fn svd_and_polar_reconstruct(seed in any::<u64>(), n in 1usize..=6) {
        let x = SampleRng::new(seed).ginibre(n);
        let s = svd(&x).unwrap();
        let scale = x.frobenius_norm().max(1.0);
        prop_assert!(dist(&s.reconstruct(), &x) <= 1e-11 * scale);
        let p = polar(&x).unwrap();
        prop_assert!(dist(&(&p.unitary * p.modulus.as_matrix()), &x) <= 1e-11 * scale);
        let uu = &p.unitary.adjoint() * &p.unitary;
        prop_assert!(dist(&uu, &ComplexMatrix::identity(n)) <= 1e-11);
        // Singular values are invariant under unitary multiplication.
        let u = random_unitary(n, seed ^ 1);
        let sv = singular_values(&(&u * &x)).unwrap();
        for (a, b) in sv.iter().zip(&s.singulars) {
            prop_assert!((a - b).abs() <= 1e-11 * scale);
        }
    }

    #[test]
    fn geometric_mean_identities(seed in any::<u64>(), n in 1usize..=5, c in 0.1f64..10.0) {
        let a = random_pd(n, seed, 1e3).unwrap();
        let b = random_pd(n, seed ^ 0xdead, 1e3).unwrap();
        let g = geometric_mean(&a, &b).unwrap();
        let scale = a.frobenius_norm() + b.frobenius_norm();
        // Symmetry.
        let h = geometric_mean(&b, &a).unwrap();
        prop_assert!(dist(g.as_matrix(), h.as_matrix()) <= 1e-8 * scale);
        // Riccati: G A⁻¹ G = B.
        let ai = pd_inverse(&a).unwrap();
        let back = &(g.as_matrix() * ai.as_matrix()) * g.as_matrix();
        prop_assert!(dist(&back, b.as_matrix()) <= 1e-7 * scale);
        // AM-GM: (A+B)/2 - G ≥ 0.
        let gap = herm_eig(&(&(&a + &b).scale(0.5) - &g)).unwrap().min();
        prop_assert!(gap >= -1e-8 * scale);
        // Joint homogeneity: (cA) # B = sqrt(c) (A # B).
        let gc = geometric_mean(&a.scale(c), &b).unwrap();
        prop_assert!(dist(gc.as_matrix(), g.scale(c.sqrt()).as_matrix()) <= 1e-7 * scale * c.max(1.0));
        // Congruence: (T*AT) # (T*BT) = T*(A#B)T.
        let t = SampleRng::new(seed ^ 7).ginibre(n);
        let lhs = geometric_mean(&a.congruence(&t), &b.congruence(&t));
        if let Ok(lhs) = lhs {
            let rhs = g.congruence(&t);
            prop_assert!(dist(lhs.as_matrix(), rhs.as_matrix()) <= 1e-6 * rhs.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn ppt_is_closed_under_block_transforms(seed in any::<u64>(), n in 2usize..=4, theta in 0.0f64..6.3) {
        let b = strict_block(Method::PptSeparable, n, seed);
        prop_assert!(is_ppt(&b, DEFAULT_TOL).unwrap().pass);
        for v in ppt_variants(&b) {
            prop_assert!(is_ppt(&v, DEFAULT_TOL).unwrap().pass);
        }
        for t in [rotate_offdiag(&b, theta), swap_blocks(&b), negate_offdiag(&b), partial_transpose(&b)] {
            prop_assert!(is_ppt(&t, DEFAULT_TOL).unwrap().pass);
        }
        // Partial transpose is an involution.
        let back = partial_transpose(&partial_transpose(&b));
        prop_assert_eq!(assemble(&back), assemble(&b));
    }

    #[test]
    fn every_verifier_passes_on_ppt_blocks(
        seed in any::<u64>(),
        n in 2usize..=4,
        rejection in any::<bool>(),
    ) {
        let method = if rejection { Method::PptRejection } else { Method::PptSeparable };
        let b = strict_block(method, n, seed);
        let certs = run_verifiers(&b, &VerifierKind::all(), &VerifyOptions::default()).unwrap();
        for c in &certs {
            prop_assert!(c.pass, "{} failed with gap {}", c.name, c.gap);
            prop_assert!(c.recheck(), "{} did not re-check", c.name);
        }
    }

    #[test]
    fn main_inequality_is_scale_and_unitary_covariant(seed in any::<u64>(), c in 0.01f64..100.0) {
        let b = strict_block(Method::PptSeparable, 3, seed);
        let base = verify_main(&b, DEFAULT_TOL).unwrap();
        let scaled = verify_main(&b.scaled(c), DEFAULT_TOL).unwrap();
        prop_assert!(base.pass && scaled.pass);
        prop_assert!((scaled.gap - c * base.gap).abs() <= 1e-7 * c.max(1.0));
        // (V*AV, V*XV, V*BV) is PPT with the same gap.
        let v = random_unitary(3, seed ^ 9);
        let moved = Block2x2::new(
            b.a().congruence(&v),
            b.x().congruence(&v),
            b.b().congruence(&v),
        ).unwrap();
        let rotated = verify_main(&moved, DEFAULT_TOL).unwrap();
        prop_assert!(rotated.pass);
        prop_assert!((rotated.gap - base.gap).abs() <= 1e-7);
    }

    #[test]
    fn norm_and_product_chains(seed in any::<u64>(), n in 2usize..=4, k in 1usize..=4, p in 1.0f64..6.0) {
        let b = strict_block(Method::PptSeparable, n, seed);
        let k = k.min(n);
        for f in [Functional::KyFan(k), Functional::Schatten(p), Functional::OperatorNorm] {
            let c = verify_norm_chain(&b, f, DEFAULT_TOL).unwrap();
            prop_assert!(c.pass, "{f}: {c:?}");
        }
        let c = verify_singular_product_chain(&b, k, DEFAULT_TOL).unwrap();
        prop_assert!(c.pass);
    }

    #[test]
    fn sampler_is_reproducible(seed in any::<u64>(), n in 2usize..=4, i in 0usize..50) {
        let spec = SampleSpec::new(Method::PptSeparable, n, 50, seed);
        prop_assert_eq!(spec.block(i).unwrap(), spec.block(i).unwrap());
        prop_assert_eq!(spec.seed_of(i), SampleSpec::new(Method::PptRejection, 2, 1, seed).seed_of(i));
    }
}
