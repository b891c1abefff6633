"""Finite model where refinement types are subsets and expressions are functions.

An index type is a registered finite set A; an expression is any function
between registered (or constructed) sets; a refinement type is a subset
S of a carrier.  A judgment S =[f]=> T holds iff f maps S into T, and the
model is proof-irrelevant: there is at most one morphism over each
expression, so derivation equality collapses to derivability of the
boundary judgment.

The model provides the full structural repertoire: inverse/direct image
(pullback/pushforward), weighted intersections and unions, the cartesian
tensor with explicit coherence cells, and the function-space residuals

    left  residual of U by S:  { t : A -> C | t(S) <= U }
    right residual of U by T:  { t : B -> C | t(T) <= U }

whose carriers coincide (the cartesian tensor is symmetric, so both are the
plain function space); evaluation and currying expressions are built as
lookup tables.  Constructed carriers (products, function spaces) are cached
per system and guarded by ``max_carrier``; exceeding the guard raises
CapabilityError with a size report instead of exhausting memory.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .fincat import FinFunction, FinSet, all_functions, render_elem
from .kernel import CapabilityError, IllFormedError, RefinementSystem

DEFAULT_MAX_CARRIER = 200_000


@dataclass(frozen=True)
class Subset:
    """A subset of a finite carrier; the refinement types of this model."""
    of: FinSet
    elements: frozenset

    def __post_init__(self):
        for x in self.elements:
            assert x in self.of, f"element {x!r} outside carrier {self.of.name!r}"

    @cached_property
    def name(self) -> str:
        inner = ",".join(
            render_elem(x) for x in sorted(self.elements, key=self.of.index)
        )
        return "{" + inner + "}:" + self.of.name

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"Subset({self.name})"


def subset(of: FinSet, elems) -> Subset:
    return Subset(of, frozenset(elems))


def full_subset(of: FinSet) -> Subset:
    return Subset(of, frozenset(of.elements))


@dataclass(frozen=True)
class SubsetMor:
    """The at-most-one morphism from src to dst over expr: f maps src into dst."""
    src: Subset
    expr: FinFunction
    dst: Subset

    def __post_init__(self):
        assert self.expr.dom == self.src.of and self.expr.cod == self.dst.of, \
            "morphism boundaries do not match the expression"
        for x in self.src.elements:
            assert self.expr(x) in self.dst, (
                f"{self.expr.name!r} does not map {self.src.name} into {self.dst.name}"
            )


class SubsetSystem(RefinementSystem):
    """The subsets-over-finite-sets refinement system."""

    has_pullbacks = True
    has_pushforwards = True
    is_monoidal = True
    is_closed = True
    has_weighted = True
    proof_irrelevant = True

    def __init__(self, name: str, sets, max_carrier: int = DEFAULT_MAX_CARRIER):
        self.name = name
        self._sets = tuple(sets)
        assert len({a.name for a in self._sets}) == len(self._sets), "duplicate set names"
        self.max_carrier = max_carrier
        self._tensor_cache: dict = {}
        self._tensor_factors: dict = {}
        self._fspace_cache: dict = {}
        self._fspace_factors: dict = {}
        self._id_cache: dict = {}
        self._unit = FinSet("1", ("*",))

    # --- index level -------------------------------------------------------
    def i_types(self) -> tuple:
        return self._sets

    def expressions(self, a: FinSet, b: FinSet) -> Iterator[FinFunction]:
        return all_functions(a, b, name_prefix=f"{a.name}>{b.name}#")

    def id_expr(self, a: FinSet) -> FinFunction:
        if a.name not in self._id_cache or self._id_cache[a.name].dom != a:
            self._id_cache[a.name] = FinFunction.identity(a)
        return self._id_cache[a.name]

    def compose_exprs(self, f: FinFunction, g: FinFunction) -> FinFunction:
        return f.then(g)

    def expr_dom(self, f: FinFunction) -> FinSet:
        return f.dom

    def expr_cod(self, f: FinFunction) -> FinSet:
        return f.cod

    # --- refinement level ----------------------------------------------------
    def e_types(self) -> tuple:
        out = []
        for a in self._sets:
            assert len(a) <= 16, f"refusing to enumerate 2^{len(a)} subsets of {a.name!r}"
            for mask in range(1 << len(a)):
                out.append(Subset(a, frozenset(
                    x for i, x in enumerate(a.elements) if mask >> i & 1
                )))
        return tuple(out)

    def refines(self, s: Subset) -> FinSet:
        return s.of

    def holds(self, s: Subset, f: FinFunction, t: Subset) -> bool:
        if not (f.dom == s.of and f.cod == t.of):
            raise IllFormedError(
                f"{s.name} =[{f.name}]=> {t.name}: boundaries do not match"
            )
        return all(f(x) in t for x in s.elements)

    def morphisms_over(self, s: Subset, f: FinFunction, t: Subset) -> Iterator[SubsetMor]:
        if self.holds(s, f, t):
            yield SubsetMor(s, f, t)

    def id_interp(self, s: Subset) -> SubsetMor:
        return SubsetMor(s, self.id_expr(s.of), s)

    def compose_interps(self, m: SubsetMor, n: SubsetMor) -> SubsetMor:
        assert m.dst == n.src
        return SubsetMor(m.src, m.expr.then(n.expr), n.dst)

    def interp_expr(self, m: SubsetMor) -> FinFunction:
        return m.expr

    def interp_src(self, m: SubsetMor) -> Subset:
        return m.src

    def interp_dst(self, m: SubsetMor) -> Subset:
        return m.dst

    # --- pullback / pushforward ---------------------------------------------
    def pullback_data(self, f: FinFunction, t: Subset):
        assert f.cod == t.of, "pullback: expression must land in the carrier of the target"
        et = Subset(f.dom, frozenset(x for x in f.dom.elements if f(x) in t))
        left = SubsetMor(et, f, t)

        def factor(m: SubsetMor, g: FinFunction) -> SubsetMor:
            return SubsetMor(m.src, g, et)

        return et, left, factor

    def pushforward_data(self, s: Subset, f: FinFunction):
        assert f.dom == s.of, "pushforward: expression must start at the carrier of the subject"
        et = Subset(f.cod, f.image(s.elements))
        right = SubsetMor(s, f, et)

        def factor(m: SubsetMor, g: FinFunction) -> SubsetMor:
            return SubsetMor(et, g, m.dst)

        return et, right, factor

    # --- weighted families ----------------------------------------------------
    def weighted_intersection_etype(self, a: FinSet, family) -> Subset:
        for f, t in family:
            assert f.dom == a and f.cod == t.of
        return Subset(a, frozenset(
            x for x in a.elements if all(f(x) in t for f, t in family)
        ))

    def weighted_union_etype(self, b: FinSet, family) -> Subset:
        elems: set = set()
        for f, s in family:
            assert f.cod == b and f.dom == s.of
            elems |= {f(x) for x in s.elements}
        return Subset(b, frozenset(elems))

    # --- monoidal structure ---------------------------------------------------
    def _guard(self, size: int, what: str):
        if size > self.max_carrier:
            raise CapabilityError(
                f"{what} would have {size} elements, exceeding the bound {self.max_carrier}"
            )

    def tensor_itype(self, a: FinSet, b: FinSet) -> FinSet:
        key = (a.name, b.name)
        cached = self._tensor_cache.get(key)
        if cached is not None and self._tensor_factors[key] == (a, b):
            return cached
        self._guard(len(a) * len(b), f"product ({a.name}x{b.name})")
        prod = FinSet(
            f"({a.name}x{b.name})", tuple(itertools.product(a.elements, b.elements))
        )
        self._tensor_cache[key] = prod
        self._tensor_factors[key] = (a, b)
        return prod

    def tensor_factors(self, p: FinSet) -> tuple:
        for key, cached in self._tensor_cache.items():
            if cached == p:
                return self._tensor_factors[key]
        raise CapabilityError(f"{p.name!r} is not a constructed product")

    def unit_itype(self) -> FinSet:
        return self._unit

    def tensor_expr(self, f: FinFunction, g: FinFunction) -> FinFunction:
        dom = self.tensor_itype(f.dom, g.dom)
        cod = self.tensor_itype(f.cod, g.cod)
        return FinFunction(
            f"({f.name}x{g.name})", dom, cod,
            {(x, y): (f(x), g(y)) for x, y in dom.elements},
        )

    def tensor_etype(self, s: Subset, t: Subset) -> Subset:
        return Subset(
            self.tensor_itype(s.of, t.of),
            frozenset(itertools.product(s.elements, t.elements)),
        )

    def unit_etype(self) -> Subset:
        return full_subset(self._unit)

    def tensor_interp(self, m: SubsetMor, n: SubsetMor) -> SubsetMor:
        return SubsetMor(
            self.tensor_etype(m.src, n.src),
            self.tensor_expr(m.expr, n.expr),
            self.tensor_etype(m.dst, n.dst),
        )

    def coherence_cell(self, kind: str, etypes: tuple):
        if kind in ("assoc", "assoc_inv"):
            s, t, v = etypes
            a, b, c = s.of, t.of, v.of
            lhs = self.tensor_itype(self.tensor_itype(a, b), c)
            rhs = self.tensor_itype(a, self.tensor_itype(b, c))
            if kind == "assoc":
                expr = FinFunction(
                    f"assoc[{a.name},{b.name},{c.name}]", lhs, rhs,
                    {((x, y), z): (x, (y, z)) for ((x, y), z) in lhs.elements},
                )
                src = self.tensor_etype(self.tensor_etype(s, t), v)
                dst = self.tensor_etype(s, self.tensor_etype(t, v))
            else:
                expr = FinFunction(
                    f"assoc_inv[{a.name},{b.name},{c.name}]", rhs, lhs,
                    {(x, (y, z)): ((x, y), z) for (x, (y, z)) in rhs.elements},
                )
                src = self.tensor_etype(s, self.tensor_etype(t, v))
                dst = self.tensor_etype(self.tensor_etype(s, t), v)
        elif kind in ("unit_l", "unit_l_inv"):
            (s,) = etypes
            a = s.of
            ua = self.tensor_itype(self._unit, a)
            if kind == "unit_l":
                expr = FinFunction(
                    f"unitl[{a.name}]", ua, a, {("*", x): x for (_, x) in ua.elements}
                )
                src, dst = self.tensor_etype(self.unit_etype(), s), s
            else:
                expr = FinFunction(
                    f"unitl_inv[{a.name}]", a, ua, {x: ("*", x) for x in a.elements}
                )
                src, dst = s, self.tensor_etype(self.unit_etype(), s)
        elif kind in ("unit_r", "unit_r_inv"):
            (s,) = etypes
            a = s.of
            au = self.tensor_itype(a, self._unit)
            if kind == "unit_r":
                expr = FinFunction(
                    f"unitr[{a.name}]", au, a, {(x, "*"): x for (x, _) in au.elements}
                )
                src, dst = self.tensor_etype(s, self.unit_etype()), s
            else:
                expr = FinFunction(
                    f"unitr_inv[{a.name}]", a, au, {x: (x, "*") for x in a.elements}
                )
                src, dst = s, self.tensor_etype(s, self.unit_etype())
        else:
            raise CapabilityError(f"unknown coherence cell {kind!r}")
        return expr, src, dst, SubsetMor(src, expr, dst)

    # --- residuals -------------------------------------------------------------
    def function_space(self, a: FinSet, c: FinSet) -> FinSet:
        key = (a.name, c.name)
        cached = self._fspace_cache.get(key)
        if cached is not None and self._fspace_factors[key] == (a, c):
            return cached
        if len(a) > 0:
            size = len(c) ** len(a)
            self._guard(size, f"function space [{a.name}->{c.name}]")
        fs = FinSet(
            f"[{a.name}->{c.name}]",
            tuple(itertools.product(c.elements, repeat=len(a))),
        )
        self._fspace_cache[key] = fs
        self._fspace_factors[key] = (a, c)
        return fs

    def residual_left_itype(self, a: FinSet, c: FinSet) -> FinSet:
        return self.function_space(a, c)

    def residual_right_itype(self, c: FinSet, b: FinSet) -> FinSet:
        return self.function_space(b, c)

    def plug_l_expr(self, a: FinSet, c: FinSet) -> FinFunction:
        fs = self.function_space(a, c)
        dom = self.tensor_itype(a, fs)
        return FinFunction(
            f"plugL[{a.name},{c.name}]", dom, c,
            {(x, t): t[a.index(x)] for (x, t) in dom.elements},
        )

    def plug_r_expr(self, c: FinSet, b: FinSet) -> FinFunction:
        fs = self.function_space(b, c)
        dom = self.tensor_itype(fs, b)
        return FinFunction(
            f"plugR[{c.name},{b.name}]", dom, c,
            {(t, x): t[b.index(x)] for (t, x) in dom.elements},
        )

    def curry_l_expr(self, f: FinFunction) -> FinFunction:
        a, b = self.tensor_factors(f.dom)
        fs = self.function_space(a, f.cod)
        return FinFunction(
            f"lc({f.name})", b, fs,
            {y: tuple(f((x, y)) for x in a.elements) for y in b.elements},
        )

    def curry_r_expr(self, f: FinFunction) -> FinFunction:
        a, b = self.tensor_factors(f.dom)
        fs = self.function_space(b, f.cod)
        return FinFunction(
            f"rc({f.name})", a, fs,
            {x: tuple(f((x, y)) for y in b.elements) for x in a.elements},
        )

    def residual_left_etype(self, s: Subset, u: Subset) -> Subset:
        fs = self.function_space(s.of, u.of)
        a = s.of
        return Subset(fs, frozenset(
            t for t in fs.elements if all(t[a.index(x)] in u for x in s.elements)
        ))

    def residual_right_etype(self, u: Subset, t: Subset) -> Subset:
        fs = self.function_space(t.of, u.of)
        b = t.of
        return Subset(fs, frozenset(
            r for r in fs.elements if all(r[b.index(x)] in u for x in t.elements)
        ))

    def residual_left_ev_interp(self, s: Subset, u: Subset) -> SubsetMor:
        res = self.residual_left_etype(s, u)
        return SubsetMor(
            self.tensor_etype(s, res), self.plug_l_expr(s.of, u.of), u
        )

    def residual_right_ev_interp(self, u: Subset, t: Subset) -> SubsetMor:
        res = self.residual_right_etype(u, t)
        return SubsetMor(
            self.tensor_etype(res, t), self.plug_r_expr(u.of, t.of), u
        )

    def residual_left_curry_interp(self, m: SubsetMor, s: Subset, v: Subset,
                                   u: Subset) -> SubsetMor:
        return SubsetMor(v, self.curry_l_expr(m.expr), self.residual_left_etype(s, u))

    def residual_right_curry_interp(self, m: SubsetMor, v: Subset, t: Subset,
                                    u: Subset) -> SubsetMor:
        return SubsetMor(v, self.curry_r_expr(m.expr), self.residual_right_etype(u, t))


def build_subset_system(sets, name: str = "subset",
                        max_carrier: int = DEFAULT_MAX_CARRIER) -> SubsetSystem:
    return SubsetSystem(name, sets, max_carrier)


# --- predicate transformers over a finite state machine -----------------------

class HoareProgram:
    """A finite state set plus named commands (total functions on states).

    Partial-correctness triples {P} c1;..;cn {Q} are judged by the refinement
    system: the triple holds iff the composite expression maps P into Q, iff
    P is contained in the backward predicate transformer fold (inverse
    images), iff the forward fold (direct images) is contained in Q.  All
    three readings are computed and must agree.
    """

    def __init__(self, sys: SubsetSystem, states: FinSet, commands: dict):
        self.sys = sys
        self.states = states
        for name, f in commands.items():
            assert f.dom == states and f.cod == states, f"command {name!r} is not an endo"
        self.commands = dict(commands)

    def composite(self, names) -> FinFunction:
        out = self.sys.id_expr(self.states)
        for n in names:
            out = out.then(self.commands[n])
        return out

    def wp(self, name: str, q: Subset) -> Subset:
        et, _, _ = self.sys.pullback_data(self.commands[name], q)
        return et

    def sp(self, p: Subset, name: str) -> Subset:
        et, _, _ = self.sys.pushforward_data(p, self.commands[name])
        return et

    def wp_fold(self, names, q: Subset) -> Subset:
        out = q
        for n in reversed(list(names)):
            out = self.wp(n, out)
        return out

    def sp_fold(self, p: Subset, names) -> Subset:
        out = p
        for n in names:
            out = self.sp(out, n)
        return out

    def check_triple(self, p: Subset, names, q: Subset) -> bool:
        names = list(names)
        direct = self.sys.holds(p, self.composite(names), q)
        backward = p.elements <= self.wp_fold(names, q).elements
        forward = self.sp_fold(p, names).elements <= q.elements
        assert direct == backward == forward, "predicate transformer readings disagree"
        return direct


def build_classifier_system(sizes=(1, 2, 3), name: str = "classifier"):
    """Carriers of the given sizes plus a two-point answer set Omega.

    Returns (system, truth, encodings) where truth = {1} <= Omega and
    encodings maps every subset S of every registered carrier to its
    characteristic function chi_S, the unique expression whose inverse image
    of truth is S.
    """
    omega = FinSet("Omega", (0, 1))
    carriers = [omega]
    for k in sizes:
        carriers.append(FinSet(f"A{k}", tuple(f"a{i}" for i in range(1, k + 1))))
    sys = SubsetSystem(name, tuple(carriers))
    truth = subset(omega, {1})
    encodings = {}
    for s in sys.e_types():
        encodings[s] = FinFunction(
            f"chi_{s.name}", s.of, omega,
            {x: 1 if x in s else 0 for x in s.of.elements},
        )
    return sys, truth, encodings
