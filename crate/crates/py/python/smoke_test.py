"""Quick check that the extension imports and agrees with known values."""

from fractions import Fraction

import kronpoly
from kronpoly import Partition, Polytope


def main():
    lam = Partition([2, 1])
    assert lam == Partition("2,1")
    assert lam.conjugate() == lam
    assert kronpoly.dim_sk(Partition([3, 2, 1])) == 16
    assert kronpoly.character(Partition([2, 1]), Partition([3])) == -1
    assert kronpoly.kronecker_coefficient(lam, lam, lam) == 1
    assert kronpoly.kronecker_coefficient(*[Partition("1,1")] * 3) == 0
    assert len(kronpoly.enumerate_kron(2)) == 4
    assert len(kronpoly.generators(2)) == 4

    r = [0.7, 0.3]
    total = sum(
        kronpoly.schur_weyl_prob(p, r, 6) for p in kronpoly.enumerate_partitions(6, 2)
    )
    assert abs(total - 1) < 1e-10, total
    assert kronpoly.schur_weyl_prob(Partition([4, 2]), r, 6) <= kronpoly.estimation_bound(
        Partition([4, 2]), r, 6
    )
    assert kronpoly.kl_divergence([0.5, 0.5], [0.5, 0.5]) == 0.0

    hull = Polytope.build(4)
    a, b, ab = kronpoly.random_spectral_triple(2, 2, seed=3)
    inside, distance = hull.membership(a, b, ab)
    assert inside and distance == 0.0
    outside, gap = hull.membership_exact(["1/1", "0/1"], ["1/2", "1/2"], ["1/1", "0/1", "0/1", "0/1"])
    assert not outside and Fraction(gap) > 0
    point = (["2/3", "1/3"], ["2/3", "1/3"], ["2/3", "1/3", "0/1", "0/1"])
    cert = hull.caratheodory(*point)
    assert sum(Fraction(c) for c, _ in cert) == 1
    m, (mu, nu, lam3, g) = hull.find_scaling(*point, max_m=4)
    assert m == 3 and g > 0 and mu == Partition([2, 1])
    assert Polytope.from_json(hull.to_json()).vertices() == hull.vertices()

    error, used, rho = kronpoly.find_witness_state([0.5, 0.5], [0.5, 0.5], [1.0, 0.0, 0.0, 0.0], restarts=20)
    assert error < 1e-6 and used <= 20 and len(rho) == 4
    print("smoke test passed")


if __name__ == "__main__":
    main()
