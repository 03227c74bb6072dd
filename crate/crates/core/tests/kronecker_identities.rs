use kronpoly::{
    check_semigroup, check_stability, dim_sk, enumerate_kron, enumerate_kron_up_to, enumerate_partitions,
    entropy_check, extract_generators, kronecker_coefficient, Partition, RowBounds,
};
use num_bigint::BigUint;

fn shapes(k: u32) -> Vec<Partition> {
    enumerate_partitions(k, usize::MAX)
}

#[test]
fn symmetric_under_argument_permutations() {
    for k in 1..=6 {
        let all = shapes(k);
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate().skip(i) {
                for c in all.iter().skip(j) {
                    let g = kronecker_coefficient(a, b, c).unwrap();
                    for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        assert_eq!(kronecker_coefficient(x, y, z).unwrap(), g, "({a}),({b}),({c})");
                    }
                }
            }
        }
    }
}

#[test]
fn transposing_two_arguments_preserves_g() {
    for k in 1..=5 {
        let all = shapes(k);
        for a in &all {
            for b in &all {
                for c in &all {
                    let g = kronecker_coefficient(a, b, c).unwrap();
                    assert_eq!(kronecker_coefficient(&a.conjugate(), &b.conjugate(), c).unwrap(), g);
                    assert_eq!(kronecker_coefficient(a, &b.conjugate(), &c.conjugate()).unwrap(), g);
                }
            }
        }
    }
}

#[test]
fn trivial_and_sign_rows() {
    for k in 1..=6 {
        let all = shapes(k);
        for a in &all {
            for b in &all {
                let trivial = kronecker_coefficient(a, b, &Partition::single_row(k)).unwrap();
                assert_eq!(trivial, u64::from(a == b));
                let sign = kronecker_coefficient(a, b, &Partition::single_column(k)).unwrap();
                assert_eq!(sign, u64::from(*a == b.conjugate()));
            }
        }
    }
}

#[test]
fn dimension_sum_rule() {
    for k in 1..=6 {
        let all = shapes(k);
        for a in &all {
            for b in &all {
                let total: BigUint = all
                    .iter()
                    .map(|c| BigUint::from(kronecker_coefficient(a, b, c).unwrap()) * dim_sk(c))
                    .sum();
                assert_eq!(total, dim_sk(a) * dim_sk(b), "({a}) ⊗ ({b})");
            }
        }
    }
}

#[test]
fn semigroup_closure_up_to_eight_boxes() {
    let bounds = RowBounds::bipartite(2, 2);
    let sets: Vec<_> = (0..=7).map(|k| enumerate_kron(k, bounds).unwrap()).collect();
    let mut pairs = 0;
    for k1 in 1..=7usize {
        for k2 in k1..=8 - k1 {
            for t1 in &sets[k1].triples {
                for t2 in &sets[k2].triples {
                    let sum = check_semigroup(t1, t2).unwrap();
                    assert!(sum.g > 0);
                    assert!(bounds.admits(&sum.mu, &sum.nu, &sum.lambda));
                    pairs += 1;
                }
            }
        }
    }
    assert!(pairs > 100);
}

#[test]
fn scaled_triples_stay_nonzero() {
    let set = enumerate_kron_up_to(5, RowBounds::bipartite(2, 2)).unwrap();
    for t in &set.triples {
        for factor in [2, 3] {
            assert!(check_stability(t, factor).unwrap(), "{t} scaled by {factor}");
        }
    }
}

#[test]
fn entropy_inequalities_hold_on_small_triples() {
    let set = enumerate_kron_up_to(8, RowBounds::bipartite(2, 2)).unwrap();
    for t in &set.triples {
        assert!(entropy_check(t).unwrap().holds, "{t}");
    }
}

#[test]
fn generators_are_monotone_in_max_boxes() {
    let bounds = RowBounds::bipartite(2, 2);
    let small = extract_generators(&enumerate_kron_up_to(6, bounds).unwrap());
    let large = extract_generators(&enumerate_kron_up_to(8, bounds).unwrap());
    for t in &small {
        assert!(large.contains(t), "{t} lost at larger K");
    }
    assert!(large.len() >= small.len());
}

#[test]
fn every_triple_is_a_sum_of_generators() {
    let set = enumerate_kron_up_to(6, RowBounds::bipartite(2, 2)).unwrap();
    let generators = extract_generators(&set);
    let keys: Vec<_> = generators.iter().map(|t| (t.mu.clone(), t.nu.clone(), t.lambda.clone())).collect();
    let mut reachable: std::collections::HashSet<_> = keys.iter().cloned().collect();
    let mut frontier: Vec<_> = keys.clone();
    while let Some((a, b, c)) = frontier.pop() {
        for (x, y, z) in &keys {
            let next = (a.add_rowwise(x), b.add_rowwise(y), c.add_rowwise(z));
            if next.0.size() <= 6 && reachable.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    for t in &set.triples {
        assert!(reachable.contains(&(t.mu.clone(), t.nu.clone(), t.lambda.clone())), "{t}");
    }
}
