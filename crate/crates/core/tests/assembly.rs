mod common;

use common::{eval_near, gl, oracle_integral};
use fracfem::analysis::potential_x_times_1mx;
use fracfem::assembly::{
    assemble_lead, assemble_lead_general, assemble_mass_q, assemble_system, build_singular_pair, endpoint_moments,
    lead_stencil, load_vector,
};
use fracfem::fraccalc::{rgamma, rl_integral_power};
use fracfem::mesh::basis_frac_derivative;
use fracfem::{BoundaryCondition, Error, Example, Field, FracOrder, Mesh, Method, ProblemSpec, Side};
use proptest::prelude::*;

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn spec(a: f64, q: Field, f: Field) -> ProblemSpec {
    ProblemSpec::new(order(a), q, f, BoundaryCondition::Dirichlet).unwrap()
}

#[test]
fn two_element_entry() {
    let a = assemble_lead(&Mesh::uniform(2).unwrap(), order(1.5));
    let want = -(4.0 - 16.0 * 0.5f64.powf(1.5)) * rgamma(2.5);
    assert!((a.get(0, 0) - want).abs() < 1e-13);
    assert!((a.get(0, 0) - 1.2464).abs() < 1e-4);
    let near_two = assemble_lead(&Mesh::uniform(2).unwrap(), order(1.999));
    assert!((near_two.get(0, 0) - 4.0).abs() < 1e-2);
}

#[test]
fn uniform_lead_is_toeplitz() {
    let mesh = Mesh::uniform(8).unwrap();
    let a = assemble_lead_general(&mesh, order(1.4));
    let n = mesh.dofs();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let (x, y) = (a.get(i, j), a.get(i + 1, j + 1));
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "({i},{j})");
        }
    }
    let st = lead_stencil(&mesh, order(1.4)).unwrap();
    assert_eq!(st.as_slice().len(), 2 * n - 1);
    for i in 0..n {
        for j in 0..n {
            assert!((st.diag(i as isize - j as isize) - a.get(i, j)).abs() < 1e-15);
        }
    }
    assert!(lead_stencil(&Mesh::graded(8, 2.0).unwrap(), order(1.4)).is_err());
}

#[test]
fn lead_is_lower_hessenberg() {
    for mesh in [Mesh::uniform(9).unwrap(), Mesh::graded(9, 3.0).unwrap()] {
        let a = assemble_lead(&mesh, order(1.3));
        for i in 0..mesh.dofs() {
            for j in i + 2..mesh.dofs() {
                assert_eq!(a.get(i, j), 0.0);
            }
        }
    }
}

fn quadrature_entry(mesh: &Mesh, a: f64, i: usize, j: usize) -> f64 {
    let s = a / 2.0;
    let di = basis_frac_derivative(mesh, i, s, Side::Right).unwrap();
    let dj = basis_frac_derivative(mesh, j, s, Side::Left).unwrap();
    let k = (4.0 / (1.0 - s)).ceil() as i32;
    let integral: f64 = mesh
        .nodes()
        .windows(2)
        .map(|w| {
            let g = |_, da: f64, db: f64| {
                let near = |p| if da <= db { eval_near(p, w[0], da) } else { eval_near(p, w[1], -db) };
                near(&dj) * near(&di)
            };
            oracle_integral(g, w[0], w[1], k)
        })
        .sum();
    -integral
}

#[test]
fn closed_form_matches_quadrature() {
    for mesh in [Mesh::uniform(4).unwrap(), Mesh::graded(4, 2.0).unwrap()] {
        for a in [1.1, 1.25, 1.5, 1.75, 1.9] {
            let lead = assemble_lead(&mesh, order(a));
            for i in 1..=mesh.dofs() {
                for j in 1..=mesh.dofs() {
                    let want = quadrature_entry(&mesh, a, i, j);
                    let got = lead.get(i - 1, j - 1);
                    assert!((got - want).abs() <= 1e-8 * want.abs().max(1e-3), "a={a} ({i},{j}) {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn graded_entries_match_quadrature() {
    // supports of unequal width, including pairs separated by more than the
    // narrower but less than the wider support
    let mesh = Mesh::graded(12, 2.5).unwrap();
    for a in [1.25, 1.75] {
        let lead = assemble_lead(&mesh, order(a));
        for i in 1..=mesh.dofs() {
            for j in 1..=(i + 1).min(mesh.dofs()) {
                let want = quadrature_entry(&mesh, a, i, j);
                let got = lead.get(i - 1, j - 1);
                assert!((got - want).abs() <= 1e-8 * want.abs().max(1e-3), "a={a} ({i},{j}) {got} vs {want}");
            }
        }
    }
}

#[test]
fn mass_matrices() {
    let mesh = Mesh::uniform(5).unwrap();
    let h = 0.2;
    assert!(assemble_mass_q(&mesh, &Field::zero()).is_zero());
    let m1 = assemble_mass_q(&mesh, &Field::constant(1.0));
    for i in 0..mesh.dofs() {
        assert!((m1.get(i, i) - 4.0 * h / 6.0).abs() < 1e-15);
        if i + 1 < mesh.dofs() {
            assert!((m1.get(i, i + 1) - h / 6.0).abs() < 1e-15);
            assert_eq!(m1.get(i, i + 1), m1.get(i + 1, i));
        }
    }
    let mesh = Mesh::uniform(4).unwrap();
    let mq = assemble_mass_q(&mesh, &potential_x_times_1mx());
    let q = |x: f64| x * (1.0 - x);
    let phi = |j: usize, x: f64| (1.0 - (4.0 * x - j as f64).abs()).max(0.0);
    for i in 1..4 {
        for j in 1..4 {
            let want: f64 = (0..4).map(|k| gl(|x| q(x) * phi(i, x) * phi(j, x), k as f64 / 4.0, (k + 1) as f64 / 4.0)).sum();
            assert!((mq.get(i - 1, j - 1) - want).abs() < 1e-15, "({i},{j})");
        }
    }
}

#[test]
fn load_vector_for_polynomial_source() {
    let mesh = Mesh::uniform(4).unwrap();
    let b = load_vector(&mesh, &Example::A.field());
    // ∫ x(1−x) φ_j = h·x_j(1−x_j) − h³/6 for hats of half-width h
    for (j, bj) in b.iter().enumerate() {
        let xj = (j + 1) as f64 / 4.0;
        let want = 0.25 * xj * (1.0 - xj) - 0.25f64.powi(3) / 6.0;
        assert!((bj - want).abs() < 1e-15, "{j}: {bj} vs {want}");
    }
}

#[test]
fn singular_pair_data() {
    let a = 1.5;
    let pair = build_singular_pair(&spec(a, Field::zero(), Example::A.field())).unwrap();
    assert_eq!(pair.c0, 1.0);
    for a in [1.2, 1.5, 1.8] {
        let pair = build_singular_pair(&spec(a, Field::zero(), Example::A.field())).unwrap();
        assert!((pair.c1.eval(1.0) + 2.0 * rgamma(3.0 - a)).abs() < 1e-14);
    }
    // q u_s = x^{α} − x^{α+1} − x³ + x⁴ for q = x(1−x), u_s = x^{α−1} − x²
    let pair = build_singular_pair(&spec(a, potential_x_times_1mx(), Example::A.field())).unwrap();
    let i = |p: f64| rl_integral_power(a, p, 1.0).unwrap();
    let denom = 1.0 + i(a) - i(a + 1.0) - i(3.0) + i(4.0);
    assert!((1.0 / pair.c0 - denom).abs() < 1e-10);
    let f_moment = i(1.0) - i(2.0);
    assert!((pair.f_moment - f_moment).abs() < 1e-12);
}

#[test]
fn degenerate_splitting_is_reported() {
    let a = 1.5;
    // I^α(c·u_s)(1) = −1 for the constant c below
    let c = -1.0 / (rl_integral_power(a, a - 1.0, 1.0).unwrap() - rl_integral_power(a, 2.0, 1.0).unwrap());
    let s = spec(a, Field::constant(c), Example::A.field());
    match build_singular_pair(&s) {
        Err(Error::DegenerateSplitting { denominator }) => assert!(denominator.abs() < 1e-8),
        other => panic!("expected degenerate splitting, got {other:?}"),
    }
    let err = assemble_system(&s, &Mesh::uniform(4).unwrap(), Method::Reconstruction).unwrap_err();
    assert!(matches!(err, Error::DegenerateSplitting { .. }));
}

#[test]
fn problem_validation() {
    assert!(ProblemSpec::new(order(1.4), Field::zero(), Example::A.field(), BoundaryCondition::MixedLeftNeumann).is_err());
    let unbounded = Field::power(1.0, -0.5).unwrap();
    assert!(ProblemSpec::new(order(1.4), unbounded, Example::A.field(), BoundaryCondition::Dirichlet).is_err());
    let mixed =
        ProblemSpec::new(order(1.6), Field::zero(), Example::C.field(), BoundaryCondition::MixedLeftNeumann).unwrap();
    assert!(assemble_system(&mixed, &Mesh::uniform(4).unwrap(), Method::Standard).is_err());
}

#[test]
fn endpoint_moments_are_positive() {
    let mesh = Mesh::uniform(16).unwrap();
    for a in [1.25, 1.5, 1.75] {
        let s = endpoint_moments(&mesh, &potential_x_times_1mx(), order(a));
        assert!(s.iter().all(|&v| v > 0.0));
        // last hat, whose support touches the weight's singularity at 1
        let j = mesh.dofs();
        let xj = mesh.nodes()[j];
        let h = 1.0 / 16.0;
        let want = rgamma(a)
            * oracle_integral(|t, _, tb| tb.powf(a - 1.0) * t * (1.0 - t) * (1.0 - (t - xj).abs() / h), xj - h, 1.0, 8);
        assert!((s[j - 1] - want).abs() < 1e-12, "{} vs {want}", s[j - 1]);
    }
}

#[test]
fn reconstruction_without_potential_keeps_standard_matrix() {
    let s = spec(1.5, Field::zero(), Example::A.field());
    let mesh = Mesh::uniform(8).unwrap();
    let std = assemble_system(&s, &mesh, Method::Standard).unwrap();
    let rec = assemble_system(&s, &mesh, Method::Reconstruction).unwrap();
    assert!(rec.s_vec.as_ref().unwrap().iter().all(|&v| v == 0.0));
    let (a, b) = (std.system_matrix(), rec.system_matrix());
    for i in 0..std.n() {
        for j in 0..std.n() {
            assert_eq!(a.get(i, j), b.get(i, j));
        }
    }
    assert!(std.load.iter().zip(&rec.load).any(|(x, y)| x != y));
}

#[test]
fn rank_one_coupling() {
    for a in [1.25, 1.5, 1.75] {
        let s = spec(a, potential_x_times_1mx(), Example::B.field());
        let mesh = Mesh::uniform(24).unwrap();
        let full = assemble_system(&s, &mesh, Method::Reconstruction).unwrap().system_matrix();
        let base = assemble_system(&s, &mesh, Method::Standard).unwrap().system_matrix();
        let n = mesh.dofs();
        let diff = nalgebra::DMatrix::from_fn(n, n, |i, j| full.get(i, j) - base.get(i, j));
        let mut sv: Vec<f64> = diff.singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        assert!(sv[1] < 1e-10 * sv[0], "a={a}: {:e}", sv[1] / sv[0]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn lead_is_coercive(a in 1.01f64..1.99, m in 3usize..40, delta in 1.0f64..3.0,
                        v in proptest::collection::vec(-1.0f64..1.0, 39)) {
        let mesh = Mesh::graded(m, delta).unwrap();
        let lead = assemble_lead(&mesh, order(a));
        let v = &v[..mesh.dofs()];
        prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
        let av = lead.matvec(v);
        let q: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        prop_assert!(q > 0.0);
    }
}
