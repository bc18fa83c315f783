import itertools

import pytest

from obfloer.diagram import (
    ArcPairingError,
    ContactConventionError,
    CurveCountError,
    MassFormulaError,
    PointDegreeError,
    RegionListError,
    build_diagram,
    euler_measure_2,
    make_region_list,
    parse_region_list,
    point_measure_4,
    region_list_to_json,
)

from conftest import load_diagram, load_region_list


# ---------------------------------------------------------------------------
# parsing


def test_parse_json_object():
    rl = parse_region_list('{"name": "t", "num_pointed": 1, "regions": [[0,0,0,0]]}')
    assert rl.name == "t" and rl.num_pointed == 1
    assert rl.regions == (((0, 0, 0, 0),),)


def test_parse_bare_list_needs_num_pointed():
    with pytest.raises(RegionListError):
        parse_region_list("[[0,0,0,0]]")
    rl = parse_region_list("[[0,0,0,0]]", name="t", num_pointed=1)
    assert rl.num_pointed == 1


def test_parse_tolerant_literal():
    # python-style literal with trailing comma and newlines
    text = "[\n  [1,0,3,2],\n  [0,1,2,3],\n]"
    rl = parse_region_list(text, num_pointed=1)
    assert len(rl.regions) == 2


def test_parse_nested_circuits():
    rl = parse_region_list('{"num_pointed": 1, "regions": [[[0,1],[2,3]], [0,1,2,3]]}')
    assert rl.regions[0] == ((0, 1), (2, 3))
    assert rl.regions[1] == ((0, 1, 2, 3),)


@pytest.mark.parametrize(
    "regions,num_pointed",
    [
        ([[0, 1, 2]], 1),  # odd circuit
        ([[0, -1]], 1),  # negative label
        ([[0, 1], [1, 0]], 0),  # num_pointed too small
        ([[0, 1], [1, 0]], 3),  # num_pointed too big
        ([[0, 2], [2, 0]], 1),  # label 1 missing
        ([], 1),  # no regions
        ([[0, "x"]], 1),  # non-integer
    ],
)
def test_parse_rejects(regions, num_pointed):
    with pytest.raises(RegionListError):
        make_region_list(regions, num_pointed)


def test_region_list_roundtrip_json():
    rl = make_region_list([[[0, 1], [2, 3]], [0, 1, 2, 3]], 1, name="nested")
    back = parse_region_list(region_list_to_json(rl))
    assert back == rl


# ---------------------------------------------------------------------------
# measures


def test_euler_measure_2_values():
    assert euler_measure_2([5, 9]) == 1  # bigon
    assert euler_measure_2([0, 1, 2, 3]) == 0  # square
    assert euler_measure_2([3, 2, 5, 4, 1, 2, 8, 7]) == -2  # octagon
    assert euler_measure_2([0, 1, 6, 17, 18, 19, 0, 5, 6, 7, 18, 25]) == -4
    # annular region, two square circuits
    assert euler_measure_2([[1, 0, 1, 0], [2, 3, 2, 3]]) == -4


def test_point_measure_4_values():
    assert point_measure_4([1, 0, 19, 20, 13, 14], 19) == 1
    assert point_measure_4([13, 12, 23, 22, 11, 12, 21, 22], 12) == 2
    assert point_measure_4([13, 12, 23, 22, 11, 12, 21, 22], 5) == 0
    assert point_measure_4([[0, 1], [2, 0]], 0) == 2


# ---------------------------------------------------------------------------
# validation errors


def test_two_bigons_fail_point_degree():
    # each point would have only two corners: not a closed surface
    with pytest.raises(PointDegreeError):
        build_diagram(make_region_list([[0, 1], [1, 0]], 1))


def test_arc_pairing_error():
    # all four alpha arcs run 0->1 with no reversed sides
    with pytest.raises(ArcPairingError):
        build_diagram(make_region_list([[0, 1, 0, 1], [0, 1, 0, 1]], 1))


def test_curve_count_error():
    # two alpha loops but a single beta curve
    with pytest.raises(CurveCountError):
        build_diagram(make_region_list([[0, 0, 1, 1], [1, 1, 0, 0]], 1))


def test_mass_parity_error():
    # two bigons glued along both arcs: chi = 1, no oriented surface
    with pytest.raises(MassFormulaError):
        build_diagram(make_region_list([[0, 0], [0, 0]], 1))


def test_contact_convention_error(octa2):
    assert not octa2.contact_aligned
    with pytest.raises(ContactConventionError):
        octa2.contact_generator()


# ---------------------------------------------------------------------------
# fixture diagrams: frozen structure


def test_r22_structure(r22):
    assert r22.num_points == 26
    assert r22.num_regions == 22
    assert r22.num_pointed == 1
    assert sum(r22.euler_measures_2) == -8 == 2 * (22 - 26)
    assert len(r22.alpha_curves) == len(r22.beta_curves) == 3
    assert r22.contact_points == (0, 6, 18)
    for cyc, cp in zip(r22.alpha_curves, r22.contact_points):
        assert min(cyc) == cp == cyc[0]
    assert r22.alpha_curves[0] == (0, 1, 2, 3, 4, 5)
    assert r22.alpha_curves[1] == (6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17)
    assert r22.alpha_curves[2] == (18, 19, 20, 21, 22, 23, 24, 25)
    assert r22.b1_diagram == 2
    g = r22.contact_generator()
    assert g.points == (0, 6, 18)
    assert g.permutation == (0, 1, 2)
    assert g.cycles() == 3


def test_r22_boundary_column(r22):
    # region [2,1,14,15]: beta arcs (1->14) and (15->2)
    col = [r22.boundary_mat[p][1] for p in range(r22.num_points)]
    want = [0] * 26
    want[14] += 1
    want[1] -= 1
    want[2] += 1
    want[15] -= 1
    assert col == want


def test_boundary_columns_sum_zero(r22, r6, s3_overtwisted):
    for d in (r22, r6, s3_overtwisted):
        for r in range(d.num_regions):
            assert sum(d.boundary_mat[p][r] for p in range(d.num_points)) == 0


def test_r6_structure(r6):
    assert r6.num_points == 10
    assert r6.num_regions == 6
    assert sum(r6.euler_measures_2) == -8 == 2 * (6 - 10)
    assert len(r6.alpha_curves) == len(r6.beta_curves) == 3
    assert r6.contact_points == (0, 4, 7)
    assert r6.b1_diagram == 0
    # unpointed polygon sizes: two hexagons, one octagon, two squares
    sizes = sorted(
        sum(len(c) for c in r6.regions[r]) for r in range(r6.num_unpointed)
    )
    assert sizes == [4, 4, 6, 6, 8]
    assert r6.contact_generator().points == (0, 4, 7)


def test_small_fixture_structure(s3_tight, s3_overtwisted, l21, sphere4):
    assert s3_tight.alpha_curves == ((0,),)
    assert s3_tight.num_curves == 1
    assert len(s3_tight.generators()) == 1
    assert s3_tight.b1_diagram == 0

    assert s3_overtwisted.alpha_curves == ((0, 1, 2),)
    assert len(s3_overtwisted.generators()) == 3
    assert [s3_overtwisted.boundary_mat[p][2] for p in range(3)] == [2, -1, -1]
    assert s3_overtwisted.b1_diagram == 0
    assert sum(s3_overtwisted.euler_measures_2) == 0

    assert len(l21.generators()) == 2
    assert l21.b1_diagram == 0
    assert [l21.boundary_mat[p][0] for p in range(2)] == [-2, 2]

    assert sphere4.num_curves == 1
    assert len(sphere4.generators()) == 2
    assert sphere4.contact_generator().points == (0,)
    assert sphere4.b1_diagram == 1  # the two unpointed lunes stack to a cylinder


# ---------------------------------------------------------------------------
# generators


def brute_force_generators(d):
    per_alpha = [sorted(c) for c in d.alpha_curves]
    out = []
    for tup in itertools.product(*per_alpha):
        betas = [d.beta_of[p] for p in tup]
        if len(set(betas)) == d.num_curves:
            out.append(tup)
    out.sort()
    return out


def test_generators_match_brute_force(r22, r6, s3_overtwisted, octa2):
    for d in (r22, r6, s3_overtwisted, octa2):
        got = [g.points for g in d.generators()]
        assert got == brute_force_generators(d)
        assert [g.index for g in d.generators()] == list(range(len(got)))
        for g in d.generators():
            assert g.permutation == tuple(d.beta_of[p] for p in g.points)
            assert sorted(g.permutation) == list(range(d.num_curves))


def test_generator_counts_frozen(r22, r6):
    assert len(r22.generators()) == 120
    assert len(r6.generators()) == 12


def test_intersection_matrix(r6):
    mat = r6.intersection_matrix()
    assert sum(sum(row) for row in mat) == r6.num_points
    # diagonal incidence product rule on a one-curve diagram
    d = load_diagram("l21")
    assert d.intersection_matrix() == [[2]]
    assert len(d.generators()) == 2


def test_cycles_counting():
    d = load_diagram("octa2")
    gens = d.generators()
    perms = sorted(g.permutation for g in gens)
    assert perms == [(0, 1), (1, 0)]
    by_perm = {g.permutation: g for g in gens}
    assert by_perm[(0, 1)].cycles() == 2
    assert by_perm[(1, 0)].cycles() == 1


# ---------------------------------------------------------------------------
# round trip


@pytest.mark.parametrize(
    "name", ["r22", "r6", "s3_tight", "s3_overtwisted", "l21", "sphere4", "octa2"]
)
def test_roundtrip_determinism(name):
    d1 = load_diagram(name)
    text = region_list_to_json(d1.to_region_list())
    d2 = build_diagram(parse_region_list(text))
    assert d2.alpha_curves == d1.alpha_curves
    assert d2.beta_curves == d1.beta_curves
    assert d2.contact_points == d1.contact_points
    assert d2.euler_measures_2 == d1.euler_measures_2
    assert d2.boundary_mat == d1.boundary_mat
    assert [g.points for g in d2.generators()] == [g.points for g in d1.generators()]


def test_region_list_preserved(r22):
    rl = load_region_list("r22")
    assert r22.to_region_list() == rl
