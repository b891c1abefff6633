"""Proof-relevant model: finite sets over a single index point.

The index level has one type ("*") and one expression (the identity), so
every judgment S =[id]=> T is well-formed and the refinement level carries
all the content: refinement types are finite sets, and the morphisms over
the identity are ALL functions S -> T.  Hom-sets are therefore genuinely
proof-relevant - two derivations with the same boundary are equal only when
they interpret to the same function - which makes this the model of choice
for exhibiting inequations that proof-irrelevant models cannot see.

Pullback and pushforward along the identity are trivial (the type itself),
while the monoidal and closed structure is real: tensor is the cartesian
product of sets, residuals are full function spaces, and the coherence
cells are honest bijections.
"""
from __future__ import annotations

import itertools
from typing import Iterator

from .fincat import FinFunction, FinSet, all_functions
from .kernel import CapabilityError, RefinementSystem

POINT = "*"
POINT_EXPR = "id"

DEFAULT_MAX_CARRIER = 200_000


class TrivialSystem(RefinementSystem):
    """Finite sets and all functions, fibred over the one-point base."""

    has_pullbacks = True
    has_pushforwards = True
    is_monoidal = True
    is_closed = True
    proof_irrelevant = False

    def __init__(self, name: str, sets, max_carrier: int = DEFAULT_MAX_CARRIER):
        self.name = name
        self._sets = tuple(sets)
        assert len({a.name for a in self._sets}) == len(self._sets), "duplicate set names"
        self.max_carrier = max_carrier
        self._tensor_cache: dict = {}
        self._tensor_factors: dict = {}
        self._fspace_cache: dict = {}
        self._fspace_factors: dict = {}
        self._unit = FinSet("1", ("*",))

    # --- index level: one point, one expression -------------------------------
    def i_types(self) -> tuple:
        return (POINT,)

    def expressions(self, a, b) -> Iterator[str]:
        assert a == POINT and b == POINT
        yield POINT_EXPR

    def id_expr(self, a) -> str:
        assert a == POINT
        return POINT_EXPR

    def compose_exprs(self, f: str, g: str) -> str:
        assert f == POINT_EXPR and g == POINT_EXPR
        return POINT_EXPR

    def expr_dom(self, f: str):
        assert f == POINT_EXPR, f"unknown expression {f!r}"
        return POINT

    def expr_cod(self, f: str):
        assert f == POINT_EXPR, f"unknown expression {f!r}"
        return POINT

    # --- refinement level: sets and all functions ------------------------------
    def e_types(self) -> tuple:
        return self._sets

    def refines(self, s: FinSet):
        return POINT

    def morphisms_over(self, s: FinSet, f: str, t: FinSet) -> Iterator[FinFunction]:
        assert f == POINT_EXPR
        return all_functions(s, t, name_prefix=f"{s.name}>{t.name}#")

    def id_interp(self, s: FinSet) -> FinFunction:
        return FinFunction.identity(s)

    def compose_interps(self, m: FinFunction, n: FinFunction) -> FinFunction:
        return m.then(n)

    def interp_expr(self, m: FinFunction) -> str:
        return POINT_EXPR

    def interp_src(self, m: FinFunction) -> FinSet:
        return m.dom

    def interp_dst(self, m: FinFunction) -> FinSet:
        return m.cod

    # --- pullback / pushforward: trivial along the identity --------------------
    def pullback_data(self, f: str, t: FinSet):
        assert f == POINT_EXPR

        def factor(m: FinFunction, g: str) -> FinFunction:
            return m

        return t, FinFunction.identity(t), factor

    def pushforward_data(self, s: FinSet, f: str):
        assert f == POINT_EXPR

        def factor(m: FinFunction, g: str) -> FinFunction:
            return m

        return s, FinFunction.identity(s), factor

    # --- monoidal structure -----------------------------------------------------
    def _guard(self, size: int, what: str):
        if size > self.max_carrier:
            raise CapabilityError(
                f"{what} would have {size} elements, exceeding the bound {self.max_carrier}"
            )

    def tensor_itype(self, a, b):
        assert a == POINT and b == POINT
        return POINT

    def unit_itype(self):
        return POINT

    def tensor_expr(self, f: str, g: str) -> str:
        assert f == POINT_EXPR and g == POINT_EXPR
        return POINT_EXPR

    def tensor_etype(self, s: FinSet, t: FinSet) -> FinSet:
        key = (s.name, t.name)
        cached = self._tensor_cache.get(key)
        if cached is not None and self._tensor_factors[key] == (s, t):
            return cached
        self._guard(len(s) * len(t), f"product ({s.name}x{t.name})")
        prod = FinSet(
            f"({s.name}x{t.name})", tuple(itertools.product(s.elements, t.elements))
        )
        self._tensor_cache[key] = prod
        self._tensor_factors[key] = (s, t)
        return prod

    def unit_etype(self) -> FinSet:
        return self._unit

    def tensor_interp(self, m: FinFunction, n: FinFunction) -> FinFunction:
        dom = self.tensor_etype(m.dom, n.dom)
        cod = self.tensor_etype(m.cod, n.cod)
        return FinFunction(
            f"({m.name}x{n.name})", dom, cod,
            {(x, y): (m(x), n(y)) for x, y in dom.elements},
        )

    def coherence_cell(self, kind: str, etypes: tuple):
        if kind in ("assoc", "assoc_inv"):
            s, t, v = etypes
            lhs = self.tensor_etype(self.tensor_etype(s, t), v)
            rhs = self.tensor_etype(s, self.tensor_etype(t, v))
            if kind == "assoc":
                interp = FinFunction(
                    f"assoc[{s.name},{t.name},{v.name}]", lhs, rhs,
                    {((x, y), z): (x, (y, z)) for ((x, y), z) in lhs.elements},
                )
            else:
                interp = FinFunction(
                    f"assoc_inv[{s.name},{t.name},{v.name}]", rhs, lhs,
                    {(x, (y, z)): ((x, y), z) for (x, (y, z)) in rhs.elements},
                )
        elif kind in ("unit_l", "unit_l_inv"):
            (s,) = etypes
            us = self.tensor_etype(self._unit, s)
            if kind == "unit_l":
                interp = FinFunction(
                    f"unitl[{s.name}]", us, s, {("*", x): x for (_, x) in us.elements}
                )
            else:
                interp = FinFunction(
                    f"unitl_inv[{s.name}]", s, us, {x: ("*", x) for x in s.elements}
                )
        elif kind in ("unit_r", "unit_r_inv"):
            (s,) = etypes
            su = self.tensor_etype(s, self._unit)
            if kind == "unit_r":
                interp = FinFunction(
                    f"unitr[{s.name}]", su, s, {(x, "*"): x for (x, _) in su.elements}
                )
            else:
                interp = FinFunction(
                    f"unitr_inv[{s.name}]", s, su, {x: (x, "*") for x in s.elements}
                )
        else:
            raise CapabilityError(f"unknown coherence cell {kind!r}")
        return POINT_EXPR, interp.dom, interp.cod, interp

    # --- residuals: full function spaces -----------------------------------------
    def function_space(self, s: FinSet, u: FinSet) -> FinSet:
        key = (s.name, u.name)
        cached = self._fspace_cache.get(key)
        if cached is not None and self._fspace_factors[key] == (s, u):
            return cached
        if len(s) > 0:
            self._guard(len(u) ** len(s), f"function space [{s.name}->{u.name}]")
        fs = FinSet(
            f"[{s.name}->{u.name}]",
            tuple(itertools.product(u.elements, repeat=len(s))),
        )
        self._fspace_cache[key] = fs
        self._fspace_factors[key] = (s, u)
        return fs

    def residual_left_itype(self, a, c):
        return POINT

    def residual_right_itype(self, c, b):
        return POINT

    def plug_l_expr(self, a, c) -> str:
        return POINT_EXPR

    def plug_r_expr(self, c, b) -> str:
        return POINT_EXPR

    def curry_l_expr(self, f: str) -> str:
        assert f == POINT_EXPR
        return POINT_EXPR

    def curry_r_expr(self, f: str) -> str:
        assert f == POINT_EXPR
        return POINT_EXPR

    def residual_left_etype(self, s: FinSet, u: FinSet) -> FinSet:
        return self.function_space(s, u)

    def residual_right_etype(self, u: FinSet, t: FinSet) -> FinSet:
        return self.function_space(t, u)

    def residual_left_ev_interp(self, s: FinSet, u: FinSet) -> FinFunction:
        fs = self.function_space(s, u)
        dom = self.tensor_etype(s, fs)
        return FinFunction(
            f"ev[{s.name},{u.name}]", dom, u,
            {(x, t): t[s.index(x)] for (x, t) in dom.elements},
        )

    def residual_right_ev_interp(self, u: FinSet, t: FinSet) -> FinFunction:
        fs = self.function_space(t, u)
        dom = self.tensor_etype(fs, t)
        return FinFunction(
            f"ve[{u.name},{t.name}]", dom, u,
            {(r, x): r[t.index(x)] for (r, x) in dom.elements},
        )

    def residual_left_curry_interp(self, m: FinFunction, s: FinSet, v: FinSet,
                                   u: FinSet) -> FinFunction:
        fs = self.function_space(s, u)
        return FinFunction(
            f"cl({m.name})", v, fs,
            {y: tuple(m((x, y)) for x in s.elements) for y in v.elements},
        )

    def residual_right_curry_interp(self, m: FinFunction, v: FinSet, t: FinSet,
                                    u: FinSet) -> FinFunction:
        fs = self.function_space(t, u)
        return FinFunction(
            f"cr({m.name})", v, fs,
            {x: tuple(m((x, y)) for y in t.elements) for x in v.elements},
        )


def build_trivial_system(sets, name: str = "trivial",
                         max_carrier: int = DEFAULT_MAX_CARRIER) -> TrivialSystem:
    return TrivialSystem(name, sets, max_carrier)
