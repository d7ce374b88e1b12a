use pid_core::decomposition::redundancy_table;
use pid_core::lattice::{join, meet};
use pid_core::{
    decompose, moebius_invert, Antichain, AtomTable, Collection, JointDistribution, Lattice,
    Measure, ParthoodDistribution,
};
use proptest::prelude::*;

/// Distributions over 2 or 3 sources with alphabets of size 2..=3. Some masses
/// may be zero, but at least one is positive.
fn distributions() -> impl Strategy<Value = JointDistribution> {
    (2usize..=3)
        .prop_flat_map(|n| prop::collection::vec(2u32..=3, n + 1))
        .prop_flat_map(|sizes| {
            let cells: usize = sizes.iter().map(|&s| s as usize).product();
            let weight = prop_oneof![1 => Just(0.0), 4 => 0.01f64..1.0];
            (Just(sizes), prop::collection::vec(weight, cells))
        })
        .prop_filter("needs positive mass", |(_, w)| w.iter().any(|&x| x > 0.0))
        .prop_map(|(sizes, weights)| build(&sizes, &weights))
}

fn build(sizes: &[u32], weights: &[f64]) -> JointDistribution {
    let total: f64 = weights.iter().sum();
    let mut rows = Vec::new();
    for (k, w) in weights.iter().enumerate() {
        let mut rest = k as u32;
        let mut values = Vec::new();
        for &s in sizes {
            values.push(rest % s);
            rest /= s;
        }
        let t = values.pop().unwrap();
        rows.push((values, t, w / total));
    }
    JointDistribution::from_outcomes(rows).unwrap()
}

fn target_entropy(dist: &JointDistribution) -> f64 {
    dist.target_alphabet()
        .iter()
        .enumerate()
        .map(|(t, _)| dist.probability_of_event(|r| r.target == t as u32))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

fn swap_sources(dist: &JointDistribution) -> JointDistribution {
    let rows = dist.rows().iter().map(|row| {
        let (s, t) = dist.labels(&row.realization);
        let mut s: Vec<String> = s.into_iter().map(String::from).collect();
        s.swap(0, 1);
        (s, t.to_string(), row.mass)
    });
    JointDistribution::from_outcomes(rows).unwrap()
}

fn node(n: usize) -> impl Strategy<Value = ParthoodDistribution> {
    let lattice = Lattice::shared(n).unwrap();
    (0..lattice.len()).prop_map(move |i| *lattice.node(i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutual_information_is_bounded_and_monotone(dist in distributions()) {
        let n = dist.n();
        let h = target_entropy(&dist);
        for a in Collection::all_nonempty(n) {
            let ia = dist.mutual_information(a).unwrap();
            prop_assert!(ia >= -1e-12 && ia <= h + 1e-12);
            for b in Collection::all_nonempty(n).filter(|b| a.is_subset_of(*b)) {
                prop_assert!(dist.mutual_information(b).unwrap() >= ia - 1e-12);
            }
        }
    }

    #[test]
    fn conditional_mi_is_non_negative(dist in distributions()) {
        let n = dist.n();
        for a in Collection::all_nonempty(n) {
            let rest = a.complement(n);
            prop_assert!(dist.conditional_mi(a, rest).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn atoms_sum_to_joint_mi(dist in distributions()) {
        let result = decompose(&dist, Measure::Sx).unwrap();
        let joint = dist.mutual_information(Collection::full(dist.n())).unwrap();
        prop_assert!((result.averaged.sum() - joint).abs() < 1e-9);
        prop_assert!(result.diagnostics.passed());
    }

    #[test]
    fn averaged_atoms_are_mass_weighted_pointwise_atoms(dist in distributions()) {
        let result = decompose(&dist, Measure::Sx).unwrap();
        for (i, &avg) in result.averaged.values().iter().enumerate() {
            let direct: f64 = result.pointwise.iter().map(|p| p.mass * p.atoms.get(i)).sum();
            prop_assert!((avg - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn swapping_sources_swaps_atoms(dist in distributions()) {
        let swapped = swap_sources(&dist);
        let a = decompose(&dist, Measure::Sx).unwrap();
        let b = decompose(&swapped, Measure::Sx).unwrap();
        let n = dist.n();
        let relabel = |c: Collection| {
            let m = c.mask();
            Collection::from_mask((m & !3) | (m & 1) << 1 | (m & 2) >> 1)
        };
        for f in a.lattice.nodes() {
            let alpha = f.to_antichain();
            let image = Antichain::new(alpha.collections().iter().map(|c| relabel(*c))).unwrap();
            let x = a.averaged.at(&alpha).unwrap();
            let y = b.averaged.at(&image).unwrap();
            prop_assert!((x - y).abs() < 1e-12, "n={} {} -> {}: {} vs {}", n, alpha, image, x, y);
        }
    }

    #[test]
    fn inversion_round_trips(n in 1usize..=4, seed in prop::collection::vec(-2.0f64..2.0, 166)) {
        let lattice = Lattice::shared(n).unwrap();
        let atoms = AtomTable::new(lattice.clone(), seed[..lattice.len()].to_vec()).unwrap();
        let recovered = moebius_invert(&redundancy_table(&atoms));
        prop_assert!(recovered.max_abs_diff(&atoms) < 1e-12);
    }

    #[test]
    fn antichain_text_round_trips(f in node(4)) {
        let alpha = f.to_antichain();
        prop_assert_eq!(alpha.to_string().parse::<Antichain>().unwrap(), alpha.clone());
        prop_assert_eq!(alpha.to_semicolon_text().parse::<Antichain>().unwrap(), alpha);
    }

    #[test]
    fn meet_and_join_bracket_their_arguments(x in node(4), y in node(4)) {
        let m = meet(&x, &y).unwrap();
        let j = join(&x, &y).unwrap();
        prop_assert!(m.leq(&x).unwrap() && m.leq(&y).unwrap());
        prop_assert!(x.leq(&j).unwrap() && y.leq(&j).unwrap());
        prop_assert_eq!(x.leq(&y).unwrap(), m == x);
        prop_assert_eq!(x.leq(&y).unwrap(), j == y);
    }
}

#[test]
fn zero_mass_rows_do_not_change_atoms() {
    let base = "s1,s2,t,p\n0,0,0,1/4\n0,1,1,1/4\n1,0,1,1/4\n1,1,0,1/4\n";
    let padded = format!("{base}0,0,1,0\n");
    let a = decompose(&JointDistribution::from_csv(base).unwrap(), Measure::Sx).unwrap();
    let b = decompose(&JointDistribution::from_csv(&padded).unwrap(), Measure::Sx).unwrap();
    assert!(a.averaged.max_abs_diff(&b.averaged) < 1e-15);
    assert_eq!(b.pointwise.len(), 4);
}
