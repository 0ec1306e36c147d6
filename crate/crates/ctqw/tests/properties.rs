//! Property-based invariants: builders always hand back trees, the
//! eigensolver satisfies its residual contracts, evolution conserves
//! probability, and the leaf-superposition law holds with arbitrary complex
//! coefficients.

use ndarray::Array2;
use num_complex::Complex;
use proptest::prelude::*;

use ctqw::{
    basis_state, build_cayley, build_cycle, build_spider, build_star, eigh_default, export,
    leaf_superposition, phased_leaf_state, plan, plan_from_decomposition, Generator,
    SpectralDecomposition, TimeGrid, WeightedGraph,
};

fn family_graph(selector: u8, branches: usize, length: usize, j: f64) -> WeightedGraph<f64> {
    match selector % 4 {
        0 => build_star(branches, j).unwrap(),
        1 => build_spider(branches, 1 + length % 3, j, 1.0).unwrap(),
        2 => build_cayley(3, 2 + length % 2, j, 1.0 / 2.0f64.sqrt()).unwrap(),
        _ => build_cycle(3 + branches, j).unwrap(),
    }
}

proptest! {
    #[test]
    fn builders_return_trees(
        selector in 0u8..3,
        branches in 1usize..7,
        length in 0usize..3,
        j in 1.0f64..20.0,
    ) {
        let g = family_graph(selector, branches, length, j);
        prop_assert!(g.is_connected());
        prop_assert_eq!(g.edge_count(), g.num_vertices() - 1);
        prop_assert!(g.is_tree());
    }

    #[test]
    fn adjacency_is_symmetric_with_zero_diagonal(
        selector in 0u8..4,
        branches in 1usize..7,
        length in 0usize..3,
        j in 1.0f64..20.0,
    ) {
        let g = family_graph(selector, branches, length, j);
        let a = g.adjacency();
        let n = g.num_vertices();
        for i in 0..n {
            prop_assert_eq!(a[[i, i]], 0.0);
            for k in 0..n {
                // bitwise equal across the diagonal
                prop_assert_eq!(a[[i, k]].to_bits(), a[[k, i]].to_bits());
            }
        }
        let d = g.degree_matrix();
        for i in 0..n {
            let row_sum: f64 = (0..n).map(|k| a[[i, k]]).sum();
            prop_assert!((row_sum - d[[i, i]]).abs() <= 1e-14 * d[[i, i]].abs().max(1.0));
        }
    }

    #[test]
    fn spider_center_row_has_branch_count_entries(
        branches in 1usize..8,
        length in 1usize..4,
        j in 1.0f64..40.0,
    ) {
        let g = build_spider(branches, length, j, 1.0).unwrap();
        let a = g.adjacency();
        let center = g.num_vertices() - 1;
        let nonzero: Vec<f64> = (0..g.num_vertices())
            .map(|k| a[[center, k]])
            .filter(|&w| w != 0.0)
            .collect();
        prop_assert_eq!(nonzero.len(), branches);
        prop_assert!(nonzero.iter().all(|&w| w == j));
    }

    #[test]
    fn phased_leaf_amplitudes_sum_to_zero(branches in 2usize..12, length in 1usize..4) {
        let g = build_spider(branches, length, 2.0, 1.0).unwrap();
        let psi = phased_leaf_state(&g, branches, length).unwrap();
        let total: Complex<f64> = psi.amplitudes().iter().sum();
        prop_assert!(total.norm() < 1e-14);
    }

    #[test]
    fn eigh_contract_on_random_symmetric_matrices(
        seed in any::<u64>(),
        n in 1usize..9,
    ) {
        let mut state = seed | 1;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64) / ((1u64 << 31) as f64) - 0.5
        };
        let mut m = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for k in i..n {
                let x = 10.0 * next();
                m[[i, k]] = x;
                m[[k, i]] = x;
            }
        }
        let d = eigh_default(&m).unwrap();
        let scale = m
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0f64, f64::max)
            .max(1.0);
        // residual ||A v - lambda v||_inf within 1e-10 * max(1, ||A||_inf)
        for k in 0..n {
            for i in 0..n {
                let av: f64 = (0..n).map(|x| m[[i, x]] * d.eigenvectors()[[x, k]]).sum();
                prop_assert!((av - d.eigenvalues()[k] * d.eigenvectors()[[i, k]]).abs() <= 1e-10 * scale);
            }
        }
        // Gram matrix within 1e-10 of the identity
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n)
                    .map(|x| d.eigenvectors()[[x, a]] * d.eigenvectors()[[x, b]])
                    .sum();
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((dot - want).abs() <= 1e-10);
            }
        }
        // eigenvalues ascending, trace and Frobenius norm preserved
        prop_assert!(d.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = (0..n).map(|i| m[[i, i]]).sum();
        prop_assert!((trace - d.eigenvalues().iter().sum::<f64>()).abs() <= 1e-10 * scale);
        let frob: f64 = m.iter().map(|x| x * x).sum();
        let spec: f64 = d.eigenvalues().iter().map(|l| l * l).sum();
        prop_assert!((frob - spec).abs() <= 1e-9 * scale * scale.max(1.0));
    }

    #[test]
    fn evolution_conserves_norm_and_composes(
        branches in 1usize..6,
        j in 1.0f64..10.0,
        t1 in -10.0f64..10.0,
        t2 in -10.0f64..10.0,
    ) {
        let g = build_spider(branches, 2, j, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let once = p.evolve(t1 + t2);
        prop_assert!((once.norm_sq() - 1.0).abs() < 1e-12);
        let p2 = plan(&g, Generator::Adjacency, &p.evolve(t1)).unwrap();
        let twice = p2.evolve(t2);
        for (a, b) in once.amplitudes().iter().zip(twice.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn center_probability_scales_with_amplitude_sum(
        branches in 2usize..6,
        length in 1usize..4,
        j in 1.0f64..10.0,
        phases in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 2..6),
        weights in proptest::collection::vec(0.05f64..1.0, 2..6),
        t in 0.0f64..30.0,
    ) {
        // P_center from any leaf-supported state is |sum a_k|^2 times the
        // single-leaf trace
        let g = build_spider(branches, length, j, 1.0).unwrap();
        let leaves = g.leaves();
        let m = leaves.len().min(phases.len()).min(weights.len());
        let mut coeff: Vec<Complex<f64>> = (0..m)
            .map(|k| Complex::from_polar(weights[k], phases[k]))
            .collect();
        let norm: f64 = coeff.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in &mut coeff {
            *c /= norm;
        }
        let pairs: Vec<(usize, Complex<f64>)> =
            leaves.iter().copied().zip(coeff.iter().copied()).collect();
        let psi0 = leaf_superposition(&g, &pairs).unwrap();
        let amp_sum: Complex<f64> = coeff.iter().sum();
        let center = g.center().unwrap();

        let p_multi = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let p_single = plan(&g, Generator::Adjacency, &basis_state(&g, 1).unwrap()).unwrap();
        let lhs = p_multi.vertex_probability(center, t).unwrap();
        let rhs = amp_sum.norm_sqr() * p_single.vertex_probability(center, t).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10, "lhs {} rhs {}", lhs, rhs);
    }

    #[test]
    fn g17_round_trips_any_finite_double(x in any::<f64>()) {
        prop_assume!(x.is_finite());
        let s = export::format_g17(x);
        let back: f64 = s.parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn graph_text_round_trips(
        selector in 0u8..4,
        branches in 1usize..7,
        length in 0usize..3,
        j in 1.0f64..20.0,
    ) {
        let g = family_graph(selector, branches, length, j);
        let text = export::graph_to_text(&g);
        let back: WeightedGraph<f64> = export::graph_from_text(&text).unwrap();
        prop_assert_eq!(back.num_vertices(), g.num_vertices());
        prop_assert_eq!(back.adjacency(), g.adjacency());
    }

    #[test]
    fn probabilities_invariant_under_degenerate_rotations(
        angles in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 4),
        t in 0.0f64..20.0,
    ) {
        // star(4, 2) has a three-fold zero eigenspace; mixing it by Givens
        // rotations must leave every probability unchanged
        let g = build_star::<f64>(4, 2.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let reference = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let d = reference.decomposition();
        let mut v = d.eigenvectors().clone();
        let eig = d.eigenvalues().to_vec();

        // rotate inside each run of (numerically) equal eigenvalues
        let mut start = 0;
        let mut angle_idx = 0;
        while start < eig.len() {
            let mut end = start + 1;
            while end < eig.len() && (eig[end] - eig[end - 1]).abs() < 1e-12 {
                end += 1;
            }
            for a in start..end {
                for b in (a + 1)..end {
                    let theta = angles[angle_idx % angles.len()];
                    angle_idx += 1;
                    let (s, c) = theta.sin_cos();
                    for row in 0..v.nrows() {
                        let x = v[[row, a]];
                        let y = v[[row, b]];
                        v[[row, a]] = c * x - s * y;
                        v[[row, b]] = s * x + c * y;
                    }
                }
            }
            start = end;
        }

        let rotated = SpectralDecomposition::from_parts(eig, v).unwrap();
        let alt = plan_from_decomposition(Generator::Adjacency, rotated, &psi0).unwrap();
        let grid = TimeGrid::from_times(vec![t, t + 1.0, t + 2.5]).unwrap();
        let t_ref = reference.probability_trace_all(&grid).unwrap();
        let t_alt = alt.probability_trace_all(&grid).unwrap();
        for vtx in 1..=5 {
            let a = t_ref.probability_row(vtx).unwrap();
            let b = t_alt.probability_row(vtx).unwrap();
            for (x, y) in a.iter().zip(b) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
