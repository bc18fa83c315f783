"""Domain machinery: periodic domains, positive-domain scans, index, gradings.

Frozen values below were produced by this package and spot-checked by hand
(small fixtures) or by independent in-test oracles (kernel ranks via sympy,
positive-domain scans via a plain box enumeration).
"""

import itertools
import math
import random

import pytest
import sympy

from obfloer.diagram import build_diagram, make_region_list
from obfloer.domains import (
    AdmissibilityError,
    Domain,
    DomainCalculator,
    DomainError,
)
from obfloer.linalg import polytope_box_bounds

from conftest import load_diagram


@pytest.fixture(scope="module")
def calc_r22():
    return DomainCalculator(load_diagram("r22"))


@pytest.fixture(scope="module")
def calc_r6():
    return DomainCalculator(load_diagram("r6"))


@pytest.fixture(scope="module")
def calc_ot():
    return DomainCalculator(load_diagram("s3_overtwisted"))


@pytest.fixture(scope="module")
def calc_l21():
    return DomainCalculator(load_diagram("l21"))


@pytest.fixture(scope="module")
def calc_sphere4():
    return DomainCalculator(load_diagram("sphere4"))


# sphere with three of its four bigons pointed: the lone unpointed bigon
# forces unique coefficients, so the periodic group is trivial
@pytest.fixture(scope="module")
def calc_sphere3pt():
    rl = make_region_list([[0, 1], [1, 0], [0, 1], [1, 0]], 3, name="sphere3pt")
    return DomainCalculator(build_diagram(rl))


# -- periodic domains and admissibility ------------------------------------


def test_periodic_ranks(calc_r22, calc_r6, calc_ot, calc_sphere4, calc_sphere3pt):
    assert calc_r22.periodic_domain_basis().rank == 2
    assert calc_r6.periodic_domain_basis().rank == 0
    assert calc_ot.periodic_domain_basis().rank == 0
    assert calc_sphere4.periodic_domain_basis().rank == 1
    assert calc_sphere3pt.periodic_domain_basis().rank == 0


def test_periodic_rank_matches_sympy_nullity(calc_r22):
    # independent kernel computation over the same unpointed matrix
    d = calc_r22.dg
    m = sympy.Matrix(
        [row[: d.num_unpointed] for row in d.boundary_mat]
    )
    assert calc_r22.periodic_domain_basis().rank == d.num_unpointed - m.rank()


def test_periodic_basis_maps_to_zero(calc_r22):
    d = calc_r22.dg
    for per in calc_r22.periodic_domain_basis().basis:
        for p in range(d.num_points):
            assert (
                sum(d.boundary_mat[p][r] * c for r, c in enumerate(per.coeffs)) == 0
            )


def test_admissibility(calc_r22, calc_r6, calc_ot, calc_l21, calc_sphere4):
    assert calc_r22.check_weak_admissibility() is True
    assert calc_r6.check_weak_admissibility() is True
    assert calc_ot.check_weak_admissibility() is True  # rank 0
    assert calc_l21.check_weak_admissibility() is True
    # sphere4's hat-periodic basis element is nonnegative outright
    assert calc_sphere4.check_weak_admissibility() is False


def test_inadmissible_scan_raises(calc_sphere4):
    with pytest.raises(AdmissibilityError):
        calc_sphere4.find_pos_domains(0, 0)
    with pytest.raises(AdmissibilityError):
        calc_sphere4.find_pos_domains(1, 0)


# -- connecting domains ------------------------------------------------------


def test_connecting_self_is_zero(calc_r6):
    dom = calc_r6.connecting_domain(0, 0)
    assert dom is not None
    assert all(c == 0 for c in dom.coeffs)


def test_connecting_single_bigon(calc_ot):
    # generator {1} flows across bigon region 0 into the contact generator {0}
    dom = calc_ot.connecting_domain(1, 0)
    assert dom.coeffs == (1, 0)
    assert calc_ot.connecting_domain(2, 0).coeffs == (0, 1)


def test_connecting_sphere_bigons_differ_by_one(calc_sphere4):
    dom = calc_sphere4.connecting_domain(0, 1)
    assert dom is not None
    assert abs(dom.coeffs[0] - dom.coeffs[1]) == 1


def test_connecting_separated_classes_is_none(calc_l21):
    # determinant-2 diagram: the two generators live in different classes
    assert calc_l21.connecting_domain(0, 1) is None
    assert calc_l21.full_connecting_domain(0, 1) is None


def test_boundary_check_rejects_corruption(calc_r6):
    bad = Domain((1,) + (0,) * (calc_r6.num_unpointed - 1), 0, 0)
    with pytest.raises(DomainError):
        calc_r6._check_boundary(bad)


# -- positive-domain scans ---------------------------------------------------


def test_find_pos_trivial_cases(calc_sphere3pt):
    doms = calc_sphere3pt.find_pos_domains(0, 0)
    assert [d.coeffs for d in doms] == [(0,)]
    doms = calc_sphere3pt.find_pos_domains(0, 1)
    assert [d.coeffs for d in doms] == [(1,)]
    assert calc_sphere3pt.find_pos_domains(1, 0) == []


def test_no_positive_domains_out_of_contact_generator(calc_r22, calc_r6, calc_ot):
    for calc in (calc_r22, calc_r6, calc_ot):
        xi = calc.dg.contact_generator().index
        for g in calc.dg.generators():
            if g.index != xi:
                assert calc.find_pos_domains(xi, g.index) == []


def test_corner_bound_all_pairs_r22(calc_r22):
    # at most 2^(contact points picked up by the target), every pair
    d = calc_r22.dg
    contact = set(d.contact_points)
    gens = d.generators()
    nonempty = 0
    total = 0
    for x in gens:
        xset = set(x.points)
        for y in gens:
            k = len(contact & (set(y.points) - xset))
            doms = calc_r22.find_pos_domains(x.index, y.index)
            assert len(doms) <= 2 ** k
            if doms:
                nonempty += 1
                total += len(doms)
    assert nonempty == 402
    assert total == 422


def _box_scan(calc, x, y):
    """Positive domains by plain box enumeration, no corner pruning."""
    d0 = calc.connecting_domain(x, y)
    if d0 is None:
        return []
    basis = [p.coeffs for p in calc.periodic_domain_basis().basis]
    rank = len(basis)
    if rank == 0:
        return [d0.coeffs] if all(c >= 0 for c in d0.coeffs) else []
    rows = [
        tuple(b[r] for b in basis) + (d0.coeffs[r],)
        for r in range(calc.num_unpointed)
    ]
    bounds = polytope_box_bounds(rows, rank)
    if bounds is None:
        return []
    assert all(lo is not None and hi is not None for lo, hi in bounds)
    out = []
    ranges = [range(math.ceil(lo), math.floor(hi) + 1) for lo, hi in bounds]
    for t in itertools.product(*ranges):
        coeffs = tuple(
            d0.coeffs[r] + sum(t[j] * basis[j][r] for j in range(rank))
            for r in range(calc.num_unpointed)
        )
        if all(c >= 0 for c in coeffs):
            out.append(coeffs)
    out.sort()
    return out


def test_scan_matches_box_oracle(calc_r22, calc_r6):
    for calc in (calc_r6, calc_r22):
        for x in calc.dg.generators():
            for y in calc.dg.generators():
                got = [d.coeffs for d in calc.find_pos_domains(x.index, y.index)]
                assert got == _box_scan(calc, x.index, y.index), (x.index, y.index)


# -- Maslov index, J+, domain type -------------------------------------------


def test_maslov_zero_domain(calc_r6):
    assert calc_r6.maslov_index(calc_r6.connecting_domain(0, 0)) == 0
    assert calc_r6.j_plus(calc_r6.connecting_domain(0, 0)) == 0


def test_maslov_bigon_and_square(calc_ot, calc_r6):
    # bigon: quadrant sums 1/4 + 1/4, euler 1/2
    assert calc_ot.maslov_index(Domain((1, 0), 1, 0)) == 1
    # square region 0 of the 6-region diagram: quadrants 1/2 + 1/2, euler 0
    sq = calc_r6.connecting_domain(4, 2)
    assert sq.coeffs == (1, 0, 0, 0, 0)
    assert calc_r6.dg.euler_measures_2[0] == 0
    assert calc_r6.maslov_index(sq) == 1


def test_maslov_rejects_nonintegral(calc_r6):
    # self-pair with a single 6-cornered region is not a quarter-integer match
    found = False
    gens = calc_r6.dg.generators()
    for g in gens:
        for r in range(calc_r6.num_unpointed):
            coeffs = tuple(1 if i == r else 0 for i in range(calc_r6.num_unpointed))
            dom = Domain(coeffs, g.index, g.index)
            tot = (
                2 * calc_r6._pm4_sum(coeffs, g.points)
                + 2 * calc_r6._em2_total(coeffs)
            )
            if tot % 4:
                found = True
                with pytest.raises(DomainError):
                    calc_r6.maslov_index(dom)
    assert found


def test_domain_type_zero(calc_r6):
    assert calc_r6.domain_type(calc_r6.connecting_domain(0, 0)) == (0, 0, 0, 0)


def test_domain_type_bigon(calc_ot):
    assert calc_ot.domain_type(Domain((1, 0), 1, 0)) == (0, 1, 1, 0)


def test_stored_differential_types_r6(calc_r6):
    types = {}
    for (i, j), doms in calc_r6.index1_differentials().items():
        for dom in doms:
            types[(i, j)] = (dom.coeffs, calc_r6.domain_type(dom))
    assert types == {
        (4, 2): ((1, 0, 0, 0, 0), (0, 1, 1, 0)),
        (5, 3): ((1, 0, 0, 0, 0), (0, 1, 1, 0)),
        (7, 0): ((0, 0, 0, 1, 1), (2, 0, 2, 0)),
        (8, 0): ((1, 1, 0, 0, 0), (2, 0, 2, 0)),
        (9, 1): ((1, 1, 0, 0, 0), (2, 0, 2, 0)),
        (9, 2): ((0, 0, 0, 1, 1), (2, 0, 2, 0)),
        (10, 1): ((0, 0, 0, 0, 1), (0, 1, 1, 0)),
        (11, 3): ((0, 0, 0, 0, 1), (0, 1, 1, 0)),
    }


def test_rectangle_jplus_values(calc_r22):
    # embedded disks among the stored differentials come in both J+ flavors:
    # cycle-merging ones at 0 and cycle-splitting ones at 2
    seen = set()
    for doms in calc_r22.index1_differentials().values():
        for dom in doms:
            t = calc_r22.domain_type(dom)
            if t[1:] == (1, 1, 0):
                seen.add(t[0])
    assert {0, 2} <= seen


def test_maslov_additivity_random_composable(calc_r22):
    rng = random.Random(7)
    table = calc_r22.spinc_partition()
    triples = 0
    while triples < 40:
        members = table.classes[rng.randrange(len(table.classes))]
        if len(members) < 3:
            continue
        x, y, z = (rng.choice(members) for _ in range(3))
        d1 = calc_r22.connecting_domain(x, y)
        d2 = calc_r22.connecting_domain(y, z)
        if d1 is None or d2 is None:
            continue
        summed = Domain(
            tuple(a + b for a, b in zip(d1.coeffs, d2.coeffs)), x, z
        )
        assert calc_r22.maslov_index(summed) == calc_r22.maslov_index(
            d1
        ) + calc_r22.maslov_index(d2)
        triples += 1


# -- SpinC partition and gradings ---------------------------------------------


def test_spinc_r22_frozen(calc_r22):
    t = calc_r22.spinc_partition()
    assert [len(c) for c in t.classes] == [
        12, 6, 16, 6, 6, 2, 10, 2, 10, 10, 10, 6, 2, 2, 6, 4, 4, 6,
    ]
    assert t.div == (0, 2, 0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2)
    xi = calc_r22.dg.contact_generator().index
    assert xi == 0
    assert t.class_of[xi] == 0
    # contact class Chern numbers vanish: torsion class
    assert t.chern[xi] == (0, 0)
    assert t.gradings[0] == {
        0: 0, 7: 1, 16: 0, 24: 1, 32: 2, 36: 1,
        54: 2, 62: 1, 74: 1, 95: 2, 111: 1, 116: 2,
    }
    assert t.gradings[1] == {1: 0, 26: 1, 75: 1, 78: 0, 94: 0, 110: 1}


def test_spinc_r6_frozen(calc_r6):
    t = calc_r6.spinc_partition()
    assert t.classes == ((0, 7, 8), (1, 2, 4, 9, 10), (3, 5, 11), (6,))
    assert t.div == (0, 0, 0, 0)
    assert t.gradings == (
        {0: 0, 7: 1, 8: 1},
        {1: 0, 2: 0, 4: 1, 9: 1, 10: 1},
        {3: 0, 5: 1, 11: 1},
        {6: 0},
    )


def test_spinc_small_fixtures(calc_ot, calc_l21, calc_sphere4):
    t = calc_ot.spinc_partition()
    assert t.classes == ((0, 1, 2),)
    assert t.div == (0,)
    assert t.gradings == ({0: 0, 1: 1, 2: 1},)

    t = calc_l21.spinc_partition()
    assert t.classes == ((0,), (1,))
    assert t.gradings == ({0: 0}, {1: 0})

    t = calc_sphere4.spinc_partition()
    assert t.classes == ((0, 1),)
    assert t.div == (2,)
    assert set(t.gradings[0].values()) == {0, 1}


def test_chern_constant_on_classes(calc_r22):
    t = calc_r22.spinc_partition()
    for members in t.classes:
        assert len({t.chern[i] for i in members}) == 1


def test_grading_formula_random_pairs(calc_r22):
    # grading difference equals index minus twice the pointed weight, for
    # any full connecting chain, independent of which solution the solver picked
    rng = random.Random(3)
    t = calc_r22.spinc_partition()
    npt = calc_r22.dg.num_pointed
    checked = 0
    while checked < 30:
        members = t.classes[rng.randrange(len(t.classes))]
        i, j = rng.choice(members), rng.choice(members)
        dom = calc_r22.full_connecting_domain(i, j)
        assert dom is not None
        lhs = t.gradings[t.class_of[i]][i] - t.gradings[t.class_of[j]][j]
        rhs = calc_r22.maslov_index(dom) - 2 * sum(dom.coeffs[-npt:])
        div = t.div[t.class_of[i]]
        assert (lhs - rhs) % div == 0 if div else lhs == rhs
        checked += 1


def test_periodic_jplus_vanishes_in_torsion_class(calc_r22):
    # all Chern numbers of the contact class vanish, so every hat-periodic
    # chain has zero euler weight and zero J+ read at the contact generator
    xi = calc_r22.dg.contact_generator().index
    assert calc_r22.spinc_partition().chern[xi] == (0, 0)
    basis = [p.coeffs for p in calc_r22.periodic_domain_basis().basis]
    rng = random.Random(11)
    combos = [b for b in basis]
    for _ in range(10):
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        combos.append(
            tuple(a * u + b * v for u, v in zip(basis[0], basis[1]))
        )
    for q in combos:
        assert calc_r22._em2_total(q) == 0
        assert calc_r22.maslov_as_periodic(q, xi) - calc_r22._em2_total(q) == 0


# -- stored candidate differentials -------------------------------------------


def test_index1_ot(calc_ot):
    diffs = calc_ot.index1_differentials()
    assert {(i, j): [d.coeffs for d in v] for (i, j), v in diffs.items()} == {
        (1, 0): [(1, 0)],
        (2, 0): [(0, 1)],
    }
    for doms in diffs.values():
        for dom in doms:
            assert calc_ot.maslov_index(dom) == 1
            assert calc_ot.j_plus(dom) == 0


def test_index1_r22_frozen(calc_r22):
    diffs = calc_r22.index1_differentials()
    assert len(diffs) == 182
    assert sum(len(v) for v in diffs.values()) == 190
    hist = {}
    for doms in diffs.values():
        for dom in doms:
            jp = calc_r22.j_plus(dom)
            assert jp >= 0 and jp % 2 == 0
            hist[jp] = hist.get(jp, 0) + 1
    assert hist == {0: 70, 2: 116, 4: 4}
    # every stored pair drops the relative grading by exactly one
    t = calc_r22.spinc_partition()
    for i, j in diffs:
        ci = t.class_of[i]
        assert ci == t.class_of[j]
        drop = t.gradings[ci][i] - t.gradings[ci][j] - 1
        assert drop % t.div[ci] == 0 if t.div[ci] else drop == 0


def test_index1_views(calc_r6):
    assert set(calc_r6.find_pos_diffs_from(9)) == {1, 2}
    assert set(calc_r6.find_pos_diffs_to(0)) == {7, 8}
    assert calc_r6.find_pos_diffs_from(0) == {}


def test_arrows_into_contact_generator_r22(calc_r22):
    xi = calc_r22.dg.contact_generator().index
    incoming = calc_r22.find_pos_diffs_to(xi)
    assert set(incoming) == {7, 24, 36, 62, 74, 111}
    assert sorted(len(v) for v in incoming.values()) == [1, 1, 1, 1, 2, 2]
