use super::*;
use crate::fock::normalized_kernel;
use crate::numerics::PolarGrid;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hilbert(alpha: f64) -> FockParams {
    FockParams::hilbert(alpha).unwrap()
}

fn unit_disk() -> MeasureSymbol {
    MeasureSymbol::uniform_disk(c(0.0, 0.0), 1.0, c(1.0, 0.0)).unwrap()
}

#[test]
fn kernel_terms_have_unit_norm() {
    let params = FockParams::new(1.0, Exponent::new(1.5).unwrap(), Exponent::new(3.0).unwrap()).unwrap();
    let one = RankOneRep::new(vec![(Factor::kernel(c(0.5, 1.0)), Factor::kernel(c(0.5, 1.0)))]);
    assert_eq!(nuclear_upper_bound(&one, &params).unwrap(), 1.0);
    assert_eq!(nuclear_upper_bound(&RankOneRep::default(), &params).unwrap(), 0.0);
    let two = RankOneRep::new(vec![
        (Factor::kernel(c(0.0, 0.0)), Factor::kernel(c(0.0, 0.0))),
        (Factor::kernel(c(1.0, 0.0)), Factor::kernel(c(1.0, 0.0))),
    ]);
    assert_eq!(nuclear_upper_bound(&two, &params).unwrap(), 2.0);

    // the same kernels as explicit functions: norms by quadrature
    let f = |z| Factor::Function(normalized_kernel(z, &params, 40).unwrap());
    let quad = RankOneRep::new(vec![(f(c(0.0, 0.0)), f(c(0.0, 0.0))), (f(c(1.0, 0.0)), f(c(1.0, 0.0)))]);
    assert!((nuclear_upper_bound(&quad, &params).unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn factor_representations_agree() {
    let alpha = 1.3;
    let params = hilbert(alpha);
    let z = c(0.4, -0.9);
    let k = Factor::kernel(z);
    let explicit = Factor::Function(normalized_kernel(z, &params, 60).unwrap());
    let a = k.basis_coefficients(alpha, 30);
    let b = explicit.basis_coefficients(alpha, 30);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).norm() < 1e-14);
    }
    let w = c(-1.0, 0.3);
    assert!((k.eval_weighted(w, alpha).unwrap() - explicit.eval_weighted(w, alpha).unwrap()).norm() < 1e-14);
}

#[test]
fn rank_one_operator_has_low_rank_and_berezin() {
    let alpha = 1.0;
    let params = hilbert(alpha);
    let f = Factor::Function(EntireFunction::from_taylor(&[c(1.0, 0.0), c(0.5, 0.5)]));
    let g = Factor::kernel(c(0.3, 0.2));
    let rep = RankOneRep::new(vec![(f, g)]);
    let op = rep.to_operator(32, &params).unwrap();
    let sv = op.singular_values().unwrap();
    assert!(sv[1] < 1e-14 * sv[0]);
    for z in [c(0.0, 0.0), c(1.0, -0.5)] {
        assert!((op.berezin(z).unwrap() - rep.berezin(z, alpha).unwrap()).norm() < 1e-14);
    }
}

#[test]
fn point_masses_follow_half_open_cells() {
    let part = lattice_partition(&MeasureSymbol::dirac(c(0.0, 0.0)), 1.0).unwrap();
    assert_eq!(part.cells.len(), 1);
    assert_eq!(part.cells[0].center, c(0.0, 0.0));
    assert_eq!(part.cells[0].weight, c(1.0, 0.0));

    let part = lattice_partition(&MeasureSymbol::dirac(c(0.5, 0.0)), 1.0).unwrap();
    assert_eq!(part.cells[0].center, c(1.0, 0.0));
    let part = lattice_partition(&MeasureSymbol::dirac(c(-0.5, -0.5)), 1.0).unwrap();
    assert_eq!(part.cells[0].center, c(0.0, 0.0));
}

#[test]
fn disk_inside_one_cell() {
    let part = lattice_partition(&unit_disk(), 2.0).unwrap();
    assert_eq!(part.cells.len(), 1);
    assert_eq!(part.cells[0].center, c(0.0, 0.0));
    assert!((part.cells[0].weight - c(PI, 0.0)).norm() < 1e-12);

    let params = hilbert(1.0);
    let op = lattice_operator(&part, 64, &params).unwrap();
    let sv = op.singular_values().unwrap();
    assert!((sv[0] - 1.0).abs() < 1e-12);
    assert!(sv[1] < 1e-15);
    assert!((op.entries()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn spiral_order_and_distinct_cells() {
    let part = lattice_partition(&unit_disk(), 0.5).unwrap();
    let keys: Vec<(i64, f64)> = part.cells.iter().map(|c| spiral_key(c.index.0, c.index.1)).collect();
    for w in keys.windows(2) {
        assert!(w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1 < w[1].1));
    }
    assert_eq!(part.cells[0].index, (0, 0));
    assert_eq!(part.cells[1].index, (1, 0));
    assert_eq!(part.cells[2].index, (1, 1));
    assert_eq!(part.cells[3].index, (0, 1));
}

#[test]
fn partition_conserves_mass() {
    let symbols = [
        unit_disk(),
        MeasureSymbol::uniform_disk(c(0.3, -0.2), 0.8, c(0.0, 2.0)).unwrap(),
        MeasureSymbol::gaussian(c(1.0, 0.0), 2.0).unwrap(),
        MeasureSymbol::radial(|t| c(1.0 - t * t, 0.0), 1.5, "bump").unwrap(),
    ];
    let res = Resolution::default();
    for mu in &symbols {
        let mass = mu.total_mass(&res).unwrap();
        for r in [1.0, 0.25, 0.1] {
            let part = lattice_partition(mu, r).unwrap();
            let total = part.total_weight() + part.dropped_mass;
            assert!((total - mass).norm() <= 1e-10 * mass.norm(), "{mu:?} r={r}: {total} vs {mass}");
            let tv = mu.total_variation(&res).unwrap();
            assert!(part.total_variation() <= tv + 1e-10);
        }
    }
}

#[test]
fn lattice_operator_of_dirac_is_exact() {
    let params = hilbert(1.0);
    let mu = MeasureSymbol::dirac(c(0.0, 0.0));
    let direct = build_toeplitz(&mu, 32, &params).unwrap();
    for r in [1.0, 0.5, 0.125] {
        let op = lattice_operator(&lattice_partition(&mu, r).unwrap(), 32, &params).unwrap();
        assert_eq!(op.entries(), direct.entries());
    }
}

#[test]
fn lattice_trace_is_discrete_mass() {
    let params = hilbert(1.0);
    let part = lattice_partition(&unit_disk(), 0.25).unwrap();
    let op = lattice_operator(&part, 64, &params).unwrap();
    assert!((op.trace() - part.total_weight() / PI).norm() < 1e-12);
}

#[test]
fn point_mass_convergence_matches_kernel_distance() {
    let alpha = 1.0;
    let params = hilbert(alpha);
    let mu = MeasureSymbol::dirac(c(0.3, 0.0));
    let rs = [1.0, 0.5, 0.25, 0.125, 0.0625];
    let table = convergence_study(&mu, &rs, 64, &params).unwrap();
    for row in &table.rows {
        let a = (row.r * (0.3 / row.r + 0.5).floor()).max(0.0);
        let d: f64 = (0.3f64 - a).abs();
        // k_a (x) k_a - k_w (x) k_w has singular values from
        // s = |<k_a, k_w>|^2 = e^{-alpha d^2}: 2 sqrt(1 - s) in S_1
        let s = (-alpha * d * d).exp();
        let expected = 2.0 * (1.0 - s).sqrt() / PI;
        assert!((row.s1_error - expected).abs() < 1e-10, "r={}: {} vs {}", row.r, row.s1_error, expected);
        let dist = (2.0 - 2.0 * (-alpha * d * d / 2.0).exp()).sqrt();
        assert!(row.op_error <= dist / PI + 1e-12);
    }
    assert!(table.final_error().unwrap() < 0.02);
}

#[test]
fn mass_on_lattice_point_has_no_error() {
    let params = hilbert(1.0);
    let mu = MeasureSymbol::point_mass(c(1.0, -1.0), c(2.0, 0.0));
    let table = convergence_study(&mu, &[1.0, 0.5, 0.25], 48, &params).unwrap();
    for row in &table.rows {
        assert!(row.s1_error < 1e-13);
        assert!((row.nuclear_bound - 2.0 / PI).abs() < 1e-15);
    }
}

#[test]
fn disk_convergence_decreases() {
    let params = hilbert(1.0);
    let table = convergence_study(&unit_disk(), &[1.0, 0.5, 0.25, 0.125], 64, &params).unwrap();
    assert!(table.is_strictly_decreasing(), "{:?}", table.rows);
    for row in &table.rows {
        assert!(row.nuclear_bound <= 1.0 + 1e-9);
    }
    let mut buf = Vec::new();
    table.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("r,s1_error,op_error,nuclear_bound\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn unresolved_support_is_rejected() {
    let mu = MeasureSymbol::uniform_disk(c(0.0, 0.0), 5.0, c(1.0, 0.0)).unwrap();
    assert!(matches!(
        convergence_study(&mu, &[1.0], 16, &hilbert(1.0)),
        Err(Error::Truncation(_))
    ));
}

#[test]
fn lattice_berezin_deviation() {
    let alpha = 1.0;
    let mu = unit_disk();
    let part = lattice_partition(&mu, 0.125).unwrap();
    let dev = berezin_lattice_check(&part, &mu, alpha, &[c(0.0, 0.0)]).unwrap();
    // Lipschitz bound of the Gaussian over half a cell diagonal
    let bound = (2.0 * alpha / std::f64::consts::E).sqrt() * 0.125 / 2f64.sqrt() * PI;
    assert!(dev < bound, "{dev} vs {bound}");

    let pm = MeasureSymbol::point_mass(c(0.5, 0.5), c(1.0, 0.0));
    let part = lattice_partition(&pm, 0.5).unwrap();
    assert_eq!(berezin_lattice_check(&part, &pm, alpha, &[c(0.0, 0.0), c(1.0, 2.0)]).unwrap(), 0.0);
    let zero = MeasureSymbol::zero();
    let part = lattice_partition(&zero, 0.5).unwrap();
    assert_eq!(berezin_lattice_check(&part, &zero, alpha, &[c(0.3, 0.0)]).unwrap(), 0.0);
}

fn pq() -> Vec<(Exponent, Exponent)> {
    vec![
        (Exponent::TWO, Exponent::TWO),
        (Exponent::new(3.0).unwrap(), Exponent::new(1.5).unwrap()),
        (Exponent::INFINITY, Exponent::ONE),
    ]
}

#[test]
fn rigidity_of_dirac_is_exact() {
    let report = rigidity_experiment(&MeasureSymbol::dirac(c(0.0, 0.0)), &pq(), 0.5, 64, 1.0, 0.05).unwrap();
    for row in &report.rows {
        assert!((row.upper - 1.0 / PI).abs() < 1e-15);
        assert!((row.lower - 1.0 / PI).abs() < 1e-10);
        assert!(row.relative_width.abs() < 1e-9);
    }
    assert!(report.within_slack);
}

#[test]
fn rigidity_of_three_masses() {
    let mu = MeasureSymbol::point_masses(
        [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]
            .iter()
            .map(|&z| PointMass { location: z, weight: c(1.0, 0.0) })
            .collect(),
    );
    let report = rigidity_experiment(&mu, &pq(), 0.25, 64, 1.0, 0.05).unwrap();
    for row in &report.rows {
        assert!((row.upper - 3.0 / PI).abs() < 1e-13);
        assert!((row.lower - 3.0 / PI).abs() < 1e-10);
    }
}

#[test]
fn rigidity_of_disk_is_tight() {
    let report = rigidity_experiment(&unit_disk(), &pq(), 1.0 / 16.0, 64, 1.0, 0.05).unwrap();
    assert!(report.within_slack, "{:?}", report.rows);
    for row in &report.rows {
        assert!(row.upper >= row.lower);
        assert_eq!(row.upper, report.rows[0].upper);
    }
}

#[test]
fn rigidity_rejects_signed_measures() {
    let mu = MeasureSymbol::point_mass(c(0.0, 0.0), c(-1.0, 0.0));
    assert!(matches!(
        rigidity_experiment(&mu, &pq(), 0.5, 32, 1.0, 0.05),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn holder_chain_for_kernels() {
    let alpha = 1.0;
    let grid = PolarGrid::new(9.0, 96, 128).unwrap();
    let f = Factor::kernel(c(0.5, 0.0));
    let g = Factor::kernel(c(-0.5, 0.5));
    let (lhs, rhs) = berezin_holder_chain(&f, &g, alpha, 1.0, 2.0, &grid).unwrap();
    // ||k e^{-|.|^2/2}||_{L^2}^2 = pi/alpha, and |<k_z,k_z'>| terms give the lhs
    assert!((rhs - PI / alpha).abs() < 1e-10);
    assert!(lhs <= rhs + 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partition_of_points_conserves_mass(
        pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -1.0f64..1.0), 1..12),
        r in 0.05f64..2.0,
    ) {
        let mu = MeasureSymbol::point_masses(
            pts.iter().map(|&(x, y, w)| PointMass { location: c(x, y), weight: c(w, 0.0) }).collect(),
        );
        let part = lattice_partition(&mu, r).unwrap();
        let total: f64 = pts.iter().map(|p| p.2).sum();
        prop_assert!(((part.total_weight() + part.dropped_mass).re - total).abs() < 1e-12);
        let mut seen = std::collections::BTreeSet::new();
        for cell in &part.cells {
            prop_assert!(seen.insert(cell.index));
        }
        let bound = nuclear_upper_bound(&part.rank_one_rep(1.0), &hilbert(1.0)).unwrap();
        let tv: f64 = pts.iter().map(|p| p.2.abs()).sum();
        prop_assert!(bound <= tv / PI + 1e-9);
    }
}
