from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from gridforge.griddata import GridError, InternalError
from gridforge.invariants import (KnotHints, Ledger, PLFunction, Side, compute_g0, compute_tau, d_lens, d_surgery,
                                  mirror_interplay_prune, nu_plus_trivial, parse_slope, report_from_g0,
                                  tau_from_g0, upsilon_from_g0, vk_from_g0, vk_mirror_from_g0)
from gridforge.regions import Candidates, Region, dual_min

from helpers import FIXTURES, TABLE_G0, g0_result, regions, simple_regions

F = Fraction
CABLE = [Region.simple(0, 2), Region(((0, 1), (1, 0))), Region.simple(2, 0)]


def pl(*pts):
    return tuple((F(t), F(y)) for t, y in pts)


# -- read-off formulas on known sets -------------------------------------------

def test_values_from_table_sets():
    want = {
        "unknot2": (0, [0], pl((0, 0), (2, 0))),
        "trefoil": (1, [1, 0], pl((0, 0), (1, -1), (2, 0))),
        "T25": (2, [1, 1, 0], pl((0, 0), (1, -2), (2, 0))),
        "T34": (3, [1, 1, 1, 0], pl((0, 0), ("2/3", -2), ("4/3", -2), (2, 0))),
        "T35": (4, [2, 1, 1, 1, 0], pl((0, 0), ("2/3", "-8/3"), (1, -3), ("4/3", "-8/3"), (2, 0))),
    }
    for name, (tau, vk, ups) in want.items():
        g0 = simple_regions(TABLE_G0[name])
        assert tau_from_g0(g0) == tau
        assert vk_from_g0(g0) == vk
        assert vk_mirror_from_g0(g0) == [0]
        assert upsilon_from_g0(g0).points == ups


def test_cable_set():
    assert tau_from_g0(CABLE) == 2
    assert vk_from_g0(CABLE) == [1, 1, 0]
    assert vk_mirror_from_g0(CABLE) == [0]
    assert upsilon_from_g0(CABLE).points == pl((0, 0), ("2/3", "-4/3"), (1, -1), ("4/3", "-4/3"), (2, 0))


def test_vk_needs_vanishing_family():
    with pytest.raises(ValueError):
        vk_from_g0([Region.simple(1, 1)])


def test_mirror_side_values():
    g0m = dual_min(simple_regions(TABLE_G0["trefoil"]))
    assert tau_from_g0(g0m) == -1
    assert vk_from_g0(g0m) == [0]
    assert vk_mirror_from_g0(g0m) == [1, 0]


def test_nu_plus_trivial():
    assert nu_plus_trivial([Region.simple(0, 0)])
    assert not nu_plus_trivial(simple_regions(TABLE_G0["trefoil"]))


def test_pl_function():
    f = PLFunction(pl((0, 0), (1, -1), (2, 0)))
    assert f(F(1, 2)) == F(-1, 2) and f(2) == 0
    assert str(f) == "PL[(0, 0), (1, -1), (2, 0)]"
    assert PLFunction.from_list(f.to_list()) == f
    with pytest.raises(ValueError):
        PLFunction(pl((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        f(3)


# -- surgery -----------------------------------------------------------------------

def test_lens_values():
    assert d_lens(1, 1, 0) == 0
    assert sorted(d_lens(2, 1, i) for i in range(2)) == [F(-1, 4), F(1, 4)]
    for bad in ((0, 1, 0), (4, 2, 0), (3, 1, 3), (-3, 1, 0)):
        with pytest.raises(ValueError):
            d_lens(*bad)


def test_lens_pairing_symmetry():
    for p in range(1, 20):
        for q in range(1, p + 4):
            if gcd(p, q) == 1:
                assert all(d_lens(p, q, i) == d_lens(p, q, (p + q - 1 - i) % p) for i in range(p))


def test_surgery_on_trefoil():
    assert d_surgery([1, 0], [0], 1, 1) == [-2]
    assert d_surgery([1, 0], [0], -1, 1) == [0]
    assert d_surgery([0], [0], 1, 1) == [0]
    assert d_surgery([0], [0], 2, 1) == [F(1, 4), F(-1, 4)]


def test_negative_slope_is_mirror_negated():
    vk, vkm = [2, 1, 1, 1, 0], [0]
    for p, q in ((3, 2), (5, 1), (7, 3)):
        assert d_surgery(vk, vkm, -p, q) == [-x for x in d_surgery(vkm, vk, p, q)]


def test_parse_slope():
    assert parse_slope("1") == (1, 1)
    assert parse_slope("-3/2") == (-3, 2)
    assert parse_slope("3/-2") == (-3, 2)
    for bad in ("0", "0/1", "2/4", "x", "1/0", ""):
        with pytest.raises(GridError):
            parse_slope(bad)
    with pytest.raises(GridError):
        d_surgery([0], [0], 0, 1)


def test_report_shape():
    r = report_from_g0(simple_regions(TABLE_G0["trefoil"]), [(1, 1)])
    assert r["schema"] == 1 and r["tau"] == 1 and r["d"] == {"1/1": ["-2"]}
    assert r["upsilon"] == [["0", "0"], ["1", "-1"], ["2", "0"]]
    assert r["g0_mirror"] == [[[-1, 0], [0, -1]]]
    assert "spin_c_convention" in r
    assert set(report_from_g0([Region.simple(0, 0)], invariants=["tau"])) == {"schema", "tau"}


# -- pipeline --------------------------------------------------------------------

@pytest.mark.parametrize("name", list(TABLE_G0))
def test_pipeline_table_sets(name):
    res = g0_result(name)
    assert res.g0_knot == simple_regions(TABLE_G0[name])
    assert res.tau == tau_from_g0(res.g0_knot)


def test_mirror_trefoil_runs_on_mirror_side():
    res = g0_result("trefoil-mirror")
    assert res.tau == -1 and res.side == "mirror"
    assert res.g0 == simple_regions(TABLE_G0["trefoil"])
    assert res.g0_knot == [Region(((-1, 0), (0, -1)))]


def test_figure_eight_exits_early():
    res = g0_result("figure-eight")
    assert res.g0_knot == [Region.simple(0, 0)] and res.tau == 0
    assert all(e["reason"] in ("early exit",) or e["reason"].startswith("tau") for e in res.audit)


def test_unknot3_exits_early():
    assert g0_result("unknot3").g0_knot == [Region.simple(0, 0)]


@pytest.mark.parametrize("name", ["trefoil", "figure-eight", "T25", "T34", "T35"])
def test_audit_entries(name):
    for e in g0_result(name).audit:
        assert {"side", "reason", "region", "realizable", "via", "rows", "cols"} <= set(e)


def test_hints():
    g = FIXTURES["T25"]
    assert compute_g0(g, KnotHints(g3=2, g4=2, tau=2)).g0_knot == simple_regions(TABLE_G0["T25"])
    # a wrong tau hint is checked and discarded
    assert compute_g0(g, KnotHints(tau=1)).tau == 2
    with pytest.raises(GridError):
        compute_g0(g, KnotHints(g3=3))
    with pytest.raises(GridError):
        KnotHints(g3=1, g4=2).check()
    with pytest.raises(GridError):
        KnotHints(g4=1, tau=2).check()


def test_hfk_hint_is_used():
    g = FIXTURES["trefoil"]
    hfk = {(0, 1): 1, (-1, 0): 1, (-2, -1): 1}
    assert compute_g0(g, KnotHints(hfk=hfk)).g0_knot == simple_regions(TABLE_G0["trefoil"])


def test_tau_on_both_sides():
    g = FIXTURES["T34"]
    assert compute_tau(Side(g, "K"), 3) == 3
    assert compute_tau(Side(g.mirror(), "mirror"), 3) == -3


def test_mirror_lemmas_mark_staircase():
    # once G_0(T23) is known, the mirror staircase meets -R for every R
    trefoil = Side(FIXTURES["trefoil"], "K")
    mirror = Side(FIXTURES["trefoil"].mirror(), "mirror")
    g0 = simple_regions(TABLE_G0["trefoil"])
    stair = Region.staircase(1)
    led = Ledger(trefoil, Candidates(g0, {r: r for r in g0}))
    mled = Ledger(mirror, Candidates([stair, Region.simple(-1, -1)], {}))
    for r in g0:
        led.mark(r, True, "test")
    mirror_interplay_prune(led, mled)
    assert mled.status[stair] is True
    assert mled.status[Region.simple(-1, -1)] is False


def test_ledger_contradiction_is_internal_error():
    side = Side(FIXTURES["trefoil"], "K")
    r = Region.simple(0, 1)
    led = Ledger(side, Candidates([r], {r: r}))
    led.mark(r, True, "a")
    with pytest.raises(InternalError):
        led.mark(r, False, "b")


@pytest.mark.parametrize("name", ["trefoil", "trefoil-mirror", "figure-eight", "T25", "T34", "T35"])
def test_computed_results_are_consistent(name):
    g0 = g0_result(name).g0_knot
    assert dual_min(dual_min(g0)) == g0
    assert sorted(r.reflect() for r in g0) == g0
    assert vk_mirror_from_g0(g0) == vk_from_g0(dual_min(g0))


# -- properties on reflection-closed families ------------------------------------

@st.composite
def families(draw):
    """Reflection-closed families shaped like G_0 of a knot with tau >= 0:
    every region contains the staircase of genus 3 and one lies in i <= 0."""
    base = draw(st.lists(regions(-3, 3, 3), min_size=1, max_size=4))
    base = [Region(r.corners + ((0, -3), (-3, 0))) for r in base]
    base.append(Region(tuple((min(i, 0), j) for i, j in base[0].corners)))
    return sorted(set(base) | {r.reflect() for r in base})


@given(families())
def test_upsilon_symmetric(fam):
    f = upsilon_from_g0(fam)
    assert all(f(2 - t) == y for t, y in f.points)


@given(families())
def test_upsilon_exact_at_samples(fam):
    f = upsilon_from_g0(fam)
    for k in range(0, 17):
        t = F(k, 8)
        direct = -2 * min(max((1 - t / 2) * i + (t / 2) * j for i, j in r.corners) for r in fam)
        assert f(t) == direct


@given(families())
def test_vk_monotone_unit_steps(fam):
    for vk in (vk_from_g0(fam), vk_mirror_from_g0(fam)):
        assert vk[-1] == 0
        assert all(a - b in (0, 1) for a, b in zip(vk, vk[1:]))


@given(families())
def test_upsilon_vanishes_at_zero_for_shift_zero_families(fam):
    if min(max(i for i, _ in r.corners) for r in fam) == 0:
        assert upsilon_from_g0(fam)(0) == 0
