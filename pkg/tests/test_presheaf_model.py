from __future__ import annotations

import itertools

import pytest

from refsys.fincat import FinFunction, FinSet, monoid_category
from refsys.presheaf_model import (
    FinPresheaf,
    constant_presheaf,
    day_star,
    day_star_coend,
    enumerate_monoid_presheaves,
    multiplication_functor,
    representable_presheaf,
    same_values,
)
from refsys.structures import check_beta_eta, pullback, pushforward

Z2_TABLE = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0}


def test_presheaf_functoriality_enforced():
    m = monoid_category("Z2", (0, 1), Z2_TABLE, 0)
    fs = FinSet("X(*)", ("x0", "x1"))
    swap = FinFunction("swap", fs, fs, {"x0": "x1", "x1": "x0"})
    FinPresheaf("X", m, {"*": fs}, {0: FinFunction.identity(fs), 1: swap})
    rotate_to_x0 = FinFunction("c", fs, fs, {"x0": "x0", "x1": "x0"})
    # 1;1 = 0 must act as the identity; a collapsing action cannot
    with pytest.raises(AssertionError):
        FinPresheaf("bad", m, {"*": fs},
                    {0: FinFunction.identity(fs), 1: rotate_to_x0})


def test_representable_presheaf_on_the_arrow_category(arrow_sig):
    c = arrow_sig.categories["C"]
    yx = representable_presheaf(c, "x")
    assert len(yx.value("x")) == 1
    assert len(yx.value("y")) == 1
    yy = representable_presheaf(c, "y")
    assert len(yy.value("x")) == 0
    assert len(yy.value("y")) == 1


def test_nat_trans_enumeration_is_constrained(arrow_sig):
    sys = arrow_sig.system
    p = arrow_sig.etype("P")
    q = arrow_sig.etype("Q")
    ident = sys.id_expr(sys.refines(p))
    # naturality forces the y-component onto the image of the x-component
    ms = list(sys.morphisms_over(p, ident, q))
    assert len(ms) == 1


def test_pullback_is_restriction(arrow_sig):
    sys = arrow_sig.system
    collapse = arrow_sig.expr("collapse")
    q = arrow_sig.etype("Q")
    w = pullback(sys, collapse, q)
    assert {o: len(w.etype.value(o)) for o in w.etype.cat.objects} == {"x": 2, "y": 2}
    assert check_beta_eta(w, mode="literal").ok


def test_pushforward_is_the_left_kan_extension(arrow_sig):
    sys = arrow_sig.system
    collapse = arrow_sig.expr("collapse")
    p = arrow_sig.etype("P")
    w = pushforward(sys, p, collapse)
    # both points of P(x) are glued onto the single point of P(y)
    assert {o: len(w.etype.value(o)) for o in w.etype.cat.objects} == {"x": 0, "y": 1}
    assert check_beta_eta(w, mode="literal").ok


def test_enumerate_monoid_presheaves_counts():
    z2 = monoid_category("Z2", (0, 1), Z2_TABLE, 0)
    ps = enumerate_monoid_presheaves(z2, 2)
    assert [len(p.value("*")) for p in ps] == [1, 2, 2]
    z3 = monoid_category(
        "Z3", (0, 1, 2),
        {(a, b): (a + b) % 3 for a in range(3) for b in range(3)}, 0)
    ps = enumerate_monoid_presheaves(z3, 2)
    assert [len(p.value("*")) for p in ps] == [1, 2]


def test_multiplication_functor_needs_commutativity(day_z2):
    sys = day_z2.system
    z2 = day_z2.categories["Z2"]
    mult = multiplication_functor(sys, z2)
    assert mult.dom.objects == (("*", "*"),)
    # left-zero monoid with adjoined unit: x*y = x for x, y != e
    table = {("e", "e"): "e", ("e", "a"): "a", ("e", "b"): "b",
             ("a", "e"): "a", ("b", "e"): "b",
             ("a", "a"): "a", ("a", "b"): "a",
             ("b", "a"): "b", ("b", "b"): "b"}
    lz = monoid_category("LZ", ("e", "a", "b"), table, "e")
    from refsys.presheaf_model import build_presheaf_system
    sys2 = build_presheaf_system((lz,), ())
    with pytest.raises(AssertionError):
        multiplication_functor(sys2, lz)


def test_day_sizes_z2(day_z2):
    sys = day_z2.system
    z2 = day_z2.categories["Z2"]
    ps = enumerate_monoid_presheaves(z2, 2)
    sizes = [[len(day_star(sys, z2, a, b).value("*")) for b in ps] for a in ps]
    assert sizes == [[1, 2, 1], [2, 4, 2], [1, 2, 2]]


def test_day_kan_equals_coend(day_z2, day_z3):
    for sig, cat in ((day_z2, "Z2"), (day_z3, "Z3")):
        sys = sig.system
        m = sig.categories[cat]
        ps = enumerate_monoid_presheaves(m, 2)
        for a, b in itertools.product(ps, repeat=2):
            via_kan = day_star(sys, m, a, b)
            via_coend = day_star_coend(sys, m, a, b)
            assert same_values(via_kan, via_coend)


def test_day_unit_is_the_point(day_z2):
    # the free orbit tensored with the one-point set collapses to a point
    sys = day_z2.system
    z2 = day_z2.categories["Z2"]
    reg = day_z2.etype("Reg")
    pt = day_z2.etype("Pt")
    d = day_star(sys, z2, reg, pt)
    assert len(d.value("*")) == 1


def test_constant_presheaf_shape(arrow_sig):
    c = arrow_sig.categories["C"]
    k = constant_presheaf("K", c, FinSet("V", (1, 2)))
    assert all(len(k.value(o)) == 2 for o in c.objects)
    assert k.action("u").mapping == {1: 1, 2: 2}
