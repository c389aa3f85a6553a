"""Finite groupoids with the discrete topology.

Arrows are identified by strings and kept in declaration order; every
greedy procedure in the package scans arrows in that order.  Composition
``compose(g, h)`` means ``g ∘ h`` and is defined exactly when
``source(g) == range(h)``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "GroupoidError",
    "CapExceeded",
    "FiniteGroupoid",
    "GroupAction",
    "validate_groupoid",
    "group_groupoid",
    "pair_groupoid",
    "trivial_groupoid",
    "cyclic_group",
    "symmetric_group",
    "is_bisection",
    "cover_by_bisections",
    "isotropy",
    "is_principal",
    "orbits",
    "invariant_subsets",
    "restrict",
    "disjoint_union",
    "transformation_groupoid",
    "is_subgroupoid",
    "enumerate_subgroupoids",
    "find_isomorphism",
    "default_cap",
]

DEFAULT_CAP = 16


class GroupoidError(ValueError):
    """Raised when a table violates the groupoid axioms.

    ``violations`` holds one message per failed check.
    """

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations[:5]) + (" ..." if len(self.violations) > 5 else ""))


class CapExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured size cap."""


def default_cap() -> int:
    """Enumeration cap; the ``GLAB_CAP`` environment variable overrides it."""
    value = os.environ.get("GLAB_CAP")
    if value is None:
        return DEFAULT_CAP
    return int(value)


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """A validated finite groupoid.

    Structure maps are stored as integer index arrays over the canonical
    arrow order.  ``comp[i, j]`` is the index of ``arrows[i] ∘ arrows[j]``
    or ``-1`` when the pair is not composable.  Build instances through
    :func:`validate_groupoid` or the constructors in this module.
    """

    arrows: tuple[str, ...]
    src: np.ndarray
    rng: np.ndarray
    inv: np.ndarray
    comp: np.ndarray
    index: Mapping[str, int] = field(repr=False)

    def __post_init__(self):
        for arr in (self.src, self.rng, self.inv, self.comp):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.arrows)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (
            self.arrows == other.arrows
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.rng, other.rng)
            and np.array_equal(self.inv, other.inv)
            and np.array_equal(self.comp, other.comp)
        )

    def __hash__(self) -> int:
        return hash((self.arrows, self.src.tobytes(), self.rng.tobytes(), self.comp.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteGroupoid(arrows={len(self.arrows)}, units={len(self.unit_indices)})"

    # -- names <-> indices -------------------------------------------------

    def idx(self, arrow: str) -> int:
        try:
            return self.index[arrow]
        except KeyError:
            raise KeyError(f"unknown arrow {arrow!r}") from None

    def indices(self, arrows: Iterable[str]) -> list[int]:
        return sorted(self.idx(a) for a in set(arrows))

    def names(self, indices: Iterable[int]) -> frozenset[str]:
        return frozenset(self.arrows[i] for i in indices)

    def mask(self, arrows: Iterable[str]) -> np.ndarray:
        m = np.zeros(len(self.arrows), dtype=bool)
        m[self.indices(arrows)] = True
        return m

    def ordered(self, arrows: Iterable[str]) -> list[str]:
        """Arrows from ``arrows`` in canonical order."""
        return [self.arrows[i] for i in self.indices(arrows)]

    # -- structure maps by name ---------------------------------------------

    def source(self, arrow: str) -> str:
        return self.arrows[self.src[self.idx(arrow)]]

    def range(self, arrow: str) -> str:
        return self.arrows[self.rng[self.idx(arrow)]]

    def inverse(self, arrow: str) -> str:
        return self.arrows[self.inv[self.idx(arrow)]]

    def compose(self, g: str, h: str) -> str | None:
        k = self.comp[self.idx(g), self.idx(h)]
        return None if k < 0 else self.arrows[k]

    # -- derived data -----------------------------------------------------

    @cached_property
    def unit_indices(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.src == np.arange(len(self.arrows))))

    @property
    def units(self) -> tuple[str, ...]:
        return tuple(self.arrows[i] for i in self.unit_indices)

    @cached_property
    def unit_mask(self) -> np.ndarray:
        m = np.zeros(len(self.arrows), dtype=bool)
        m[list(self.unit_indices)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All composable pairs as index arrays ``(a, b, a∘b)``."""
        a, b = np.nonzero(self.comp >= 0)
        c = self.comp[a, b]
        return a, b, c

    def fiber(self, x: str) -> tuple[int, ...]:
        """Indices of ``G_x = {t : s(t) = x}`` in canonical order."""
        i = self._unit_index(x)
        return tuple(int(j) for j in np.flatnonzero(self.src == i))

    def block_index(self, x: str) -> np.ndarray:
        """Index matrix of ``γ ∘ γ'⁻¹`` over the basis ``G_x``."""
        return self._block_indices[self._unit_index(x)]

    @cached_property
    def _block_indices(self) -> dict[int, np.ndarray]:
        out = {}
        for u in self.unit_indices:
            basis = np.flatnonzero(self.src == u)
            idx = self.comp[np.ix_(basis, self.inv[basis])]
            idx.setflags(write=False)
            out[u] = idx
        return out

    def _unit_index(self, x: str) -> int:
        i = self.idx(x)
        if not self.unit_mask[i]:
            raise ValueError(f"{x!r} is not a unit")
        return i

    def to_dict(self) -> dict:
        """Serialize to the groupoid JSON layout."""
        a = self.arrows
        pa, pb, pc = self.pairs
        order = np.lexsort((pb, pa))
        return {
            "arrows": list(a),
            "source": {a[i]: a[self.src[i]] for i in range(len(a))},
            "range": {a[i]: a[self.rng[i]] for i in range(len(a))},
            "inverse": {a[i]: a[self.inv[i]] for i in range(len(a))},
            "compose": [[a[pa[k]], a[pb[k]], a[pc[k]]] for k in order],
        }


def _check_axioms(src, rng, inv, comp, names) -> list[str]:
    n = len(names)
    errs = []
    ar = np.arange(n)
    for g in range(n):
        if inv[inv[g]] != g:
            errs.append(f"inverse not involutive at {names[g]}")
        if src[inv[g]] != rng[g] or rng[inv[g]] != src[g]:
            errs.append(f"source/range of inverse inconsistent at {names[g]}")
    unit_set = set(src.tolist()) | set(rng.tolist())
    for u in sorted(unit_set):
        if src[u] != u or rng[u] != u or inv[u] != u:
            errs.append(f"unit set inconsistent: {names[u]} is not its own source, range and inverse")
    composable = src[:, None] == rng[None, :]
    missing = np.argwhere(composable & (comp < 0))
    for g, h in missing[:20]:
        errs.append(f"missing composite {names[g]}∘{names[h]}")
    extra = np.argwhere(~composable & (comp >= 0))
    for g, h in extra[:20]:
        errs.append(f"composite defined on non-composable pair {names[g]}∘{names[h]}")
    if errs:
        return errs
    g, h = np.nonzero(composable)
    k = comp[g, h]
    bad = np.flatnonzero((src[k] != src[h]) | (rng[k] != rng[g]))
    for t in bad[:20]:
        errs.append(f"source/range of {names[g[t]]}∘{names[h[t]]} wrong")
    for t in range(n):
        if comp[t, inv[t]] != rng[t] or comp[inv[t], t] != src[t]:
            errs.append(f"g∘g⁻¹ or g⁻¹∘g is not a unit at {names[t]}")
        if comp[rng[t], t] != t or comp[t, src[t]] != t:
            errs.append(f"unit law fails at {names[t]}")
    idem = {int(i) for i in ar if inv[i] == i and comp[i, i] == i}
    if idem != unit_set:
        errs.append("unit set inconsistent: fixed idempotents differ from source/range image")
    if errs:
        return errs
    # associativity: (g h) k == g (h k) whenever s(g) = r(h), s(h) = r(k)
    for hh in range(n):
        gs = np.flatnonzero(src == rng[hh])
        ks = np.flatnonzero(rng == src[hh])
        if len(gs) == 0 or len(ks) == 0:
            continue
        left = comp[comp[gs, hh][:, None], ks[None, :]]
        right = comp[gs[:, None], comp[hh, ks][None, :]]
        bad = np.argwhere(left != right)
        for i, j in bad[:5]:
            errs.append(f"non-associative triple ({names[gs[i]]}, {names[hh]}, {names[ks[j]]})")
    return errs


def _build(names: Sequence[str], src, rng, inv, comp) -> FiniteGroupoid:
    names = tuple(names)
    return FiniteGroupoid(
        arrows=names,
        src=np.asarray(src, dtype=np.int64),
        rng=np.asarray(rng, dtype=np.int64),
        inv=np.asarray(inv, dtype=np.int64),
        comp=np.asarray(comp, dtype=np.int64),
        index={a: i for i, a in enumerate(names)},
    )


def _checked(names, src, rng, inv, comp) -> FiniteGroupoid:
    src, rng, inv, comp = (np.asarray(x, dtype=np.int64) for x in (src, rng, inv, comp))
    errs = _check_axioms(src, rng, inv, comp, names)
    if errs:
        raise GroupoidError(errs)
    return _build(names, src, rng, inv, comp)


def validate_groupoid(raw: Mapping) -> FiniteGroupoid:
    """Check a raw arrow table against the groupoid axioms.

    ``raw`` has the JSON layout ``{"arrows": [...], "source": {a: u},
    "range": {...}, "inverse": {...}, "compose": [[a, b, a∘b], ...]}``.
    Raises :class:`GroupoidError` listing every violation found.
    """
    try:
        names = [str(a) for a in raw["arrows"]]
        maps = {k: dict(raw[k]) for k in ("source", "range", "inverse")}
        triples = [tuple(t) for t in raw.get("compose", [])]
    except (KeyError, TypeError) as exc:
        raise GroupoidError([f"malformed groupoid table: {exc!r}"]) from None
    index = {a: i for i, a in enumerate(names)}
    errs = []
    if len(index) != len(names):
        errs.append("duplicate arrow identifiers")
    n = len(names)
    arrays = {}
    for key, mp in maps.items():
        arr = np.full(n, -1, dtype=np.int64)
        for a, b in mp.items():
            if a not in index or b not in index:
                errs.append(f"{key} references undeclared arrow ({a!r} -> {b!r})")
                continue
            arr[index[a]] = index[b]
        for i in np.flatnonzero(arr < 0):
            errs.append(f"{key} undefined for {names[i]}")
        arrays[key] = arr
    comp = np.full((n, n), -1, dtype=np.int64)
    for t in triples:
        if len(t) != 3 or any(x not in index for x in t):
            errs.append(f"compose entry references undeclared arrow: {list(t)!r}")
            continue
        i, j, k = (index[x] for x in t)
        if comp[i, j] >= 0 and comp[i, j] != k:
            errs.append(f"conflicting composites for {t[0]}∘{t[1]}")
        comp[i, j] = k
    if errs:
        raise GroupoidError(errs)
    return _checked(names, arrays["source"], arrays["range"], arrays["inverse"], comp)


# -- constructors -------------------------------------------------------------


@dataclass(frozen=True)
class GroupAction:
    """A finite group acting on a finite set.

    ``cayley[i][j]`` is the index of ``elements[i] * elements[j]`` and
    ``act[g][x]`` is the image of point ``x`` under ``g``.
    """

    elements: tuple[str, ...]
    cayley: tuple[tuple[int, ...], ...]
    space: tuple[str, ...]
    act: Mapping[str, Mapping[str, str]]

    def __post_init__(self):
        errs = self.violations()
        if errs:
            raise GroupoidError(errs)

    @classmethod
    def from_dict(cls, raw: Mapping) -> "GroupAction":
        try:
            elements = tuple(str(e) for e in raw["elements"])
            pos = {e: i for i, e in enumerate(elements)}
            table = tuple(
                tuple(pos[c] if isinstance(c, str) else int(c) for c in row) for row in raw["cayley"]
            )
            space = tuple(str(x) for x in raw["space"])
            act = {str(g): {str(x): str(y) for x, y in m.items()} for g, m in raw["act"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise GroupoidError([f"malformed action table: {exc!r}"]) from None
        return cls(elements, table, space, act)

    def to_dict(self) -> dict:
        return {
            "elements": list(self.elements),
            "cayley": [list(r) for r in self.cayley],
            "space": list(self.space),
            "act": {g: dict(self.act[g]) for g in self.elements},
        }

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def table(self) -> np.ndarray:
        return np.asarray(self.cayley, dtype=np.int64).reshape(self.order, self.order)

    @cached_property
    def identity(self) -> int:
        rows = np.flatnonzero((self.table == np.arange(self.order)).all(axis=1))
        return int(rows[0])

    @cached_property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == self.identity, axis=1)

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def apply(self, g: int, x: str) -> str:
        return self.act[self.elements[g]][x]

    def violations(self) -> list[str]:
        errs = []
        k = len(self.elements)
        if len(set(self.elements)) != k:
            errs.append("duplicate group elements")
        if len(self.cayley) != k or any(len(r) != k for r in self.cayley):
            return errs + ["cayley table has the wrong shape"]
        t = np.asarray(self.cayley, dtype=np.int64).reshape(k, k)
        if k == 0:
            return errs + ["group is empty"]
        if t.min() < 0 or t.max() >= k:
            return errs + ["cayley entry out of range"]
        ar = np.arange(k)
        ids = [i for i in range(k) if (t[i] == ar).all() and (t[:, i] == ar).all()]
        if not ids:
            return errs + ["no identity element"]
        e = ids[0]
        if not ((t == e).any(axis=1)).all():
            errs.append("some element has no inverse")
        if not (t[t, :] == t[:, t]).all():
            errs.append("cayley table is not associative")
        points = set(self.space)
        for g in self.elements:
            m = self.act.get(g)
            if m is None or set(m) != points or not set(m.values()) <= points:
                errs.append(f"action of {g} is not a map on the space")
        if errs:
            return errs
        for x in self.space:
            if self.act[self.elements[e]][x] != x:
                errs.append(f"identity moves {x}")
        for g, h in itertools.product(range(k), repeat=2):
            for x in self.space:
                lhs = self.act[self.elements[g]][self.act[self.elements[h]][x]]
                rhs = self.act[self.elements[t[g, h]]][x]
                if lhs != rhs:
                    errs.append(f"act({self.elements[g]}, act({self.elements[h]}, {x})) != act(gh, {x})")
        return errs


def transformation_groupoid(action: GroupAction) -> FiniteGroupoid:
    """The groupoid Γ⋉X with arrows ``(γ, x)``, ``s = x`` and ``r = γx``.

    Arrows are named ``"(γ,x)"`` and ordered group-major; units are the
    arrows ``(e, x)``.
    """
    k, pts = action.order, action.space
    e = action.identity
    npt = len(pts)
    pidx = {x: i for i, x in enumerate(pts)}
    names = [f"({g},{x})" for g in action.elements for x in pts]

    def a(g, xi):
        return g * npt + xi

    n = k * npt
    src = np.empty(n, dtype=np.int64)
    rng = np.empty(n, dtype=np.int64)
    inv = np.empty(n, dtype=np.int64)
    comp = np.full((n, n), -1, dtype=np.int64)
    moved = np.array([[pidx[action.apply(g, x)] for x in pts] for g in range(k)], dtype=np.int64)
    for g in range(k):
        for xi in range(npt):
            y = moved[g, xi]
            src[a(g, xi)] = a(e, xi)
            rng[a(g, xi)] = a(e, y)
            inv[a(g, xi)] = a(int(action.inverses[g]), y)
    # (γ1, γ2 x)(γ2, x) = (γ1 γ2, x)
    for g2 in range(k):
        for xi in range(npt):
            y = moved[g2, xi]
            for g1 in range(k):
                comp[a(g1, y), a(g2, xi)] = a(action.mul(g1, g2), xi)
    return _checked(names, src, rng, inv, comp)


def group_groupoid(elements: Sequence[str], cayley) -> FiniteGroupoid:
    """A finite group viewed as a groupoid with one unit."""
    t = np.asarray(cayley, dtype=np.int64)
    k = len(elements)
    ar = np.arange(k)
    e = next(i for i in range(k) if (t[i] == ar).all())
    inv = np.argmax(t == e, axis=1)
    return _checked(list(elements), np.full(k, e), np.full(k, e), inv, t)


def cyclic_group(n: int, prefix: str = "g") -> FiniteGroupoid:
    """ℤ/n with elements ``e, g, g2, ...``."""
    names = ["e"] + [prefix if i == 1 else f"{prefix}{i}" for i in range(1, n)]
    ar = np.arange(n)
    return group_groupoid(names, (ar[:, None] + ar[None, :]) % n)


def symmetric_group_table(n: int) -> tuple[list[str], np.ndarray, list[tuple[int, ...]]]:
    perms = list(itertools.permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    table = np.array([[pos[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms])
    names = ["".join(str(i) for i in p) for p in perms]
    return names, table, perms


def symmetric_group(n: int) -> FiniteGroupoid:
    names, table, _ = symmetric_group_table(n)
    return group_groupoid(names, table)


def pair_groupoid(points: Sequence[str]) -> FiniteGroupoid:
    """Full equivalence relation on ``points``; ``(a,b)`` goes from b to a.

    Units ``(x,x)`` come first, then the off-diagonal pairs in
    lexicographic order of point positions.
    """
    return _equivalence([list(points)], names_by_pair=True)


def trivial_groupoid(points: Sequence[str]) -> FiniteGroupoid:
    """Groupoid consisting only of units."""
    n = len(points)
    ar = np.arange(n)
    comp = np.full((n, n), -1, dtype=np.int64)
    comp[ar, ar] = ar
    return _checked(list(points), ar, ar, ar, comp)


def equivalence_relation(classes: Sequence[Sequence[str]]) -> FiniteGroupoid:
    """The principal groupoid of an equivalence relation given by its classes."""
    return _equivalence([list(c) for c in classes], names_by_pair=True)


def _equivalence(classes, names_by_pair: bool) -> FiniteGroupoid:
    points = [x for c in classes for x in c]
    order = [(x, x) for x in points]
    for c in classes:
        order += [(a, b) for a in c for b in c if a != b]
    names = [f"({a},{b})" for a, b in order]
    pos = {p: i for i, p in enumerate(order)}
    n = len(order)
    src = np.array([pos[(b, b)] for a, b in order], dtype=np.int64)
    rng = np.array([pos[(a, a)] for a, b in order], dtype=np.int64)
    inv = np.array([pos[(b, a)] for a, b in order], dtype=np.int64)
    comp = np.full((n, n), -1, dtype=np.int64)
    for i, (a, b) in enumerate(order):
        for j, (c, d) in enumerate(order):
            if b == c:
                comp[i, j] = pos[(a, d)]
    return _checked(names, src, rng, inv, comp)


def disjoint_union(
    g1: FiniteGroupoid, g2: FiniteGroupoid, tags: tuple[str, str] = ("1:", "2:")
) -> FiniteGroupoid:
    """Tagged disjoint union; no arrow of ``g1`` composes with one of ``g2``."""
    n1, n2 = len(g1), len(g2)
    names = [tags[0] + a for a in g1.arrows] + [tags[1] + a for a in g2.arrows]
    if len(set(names)) != len(names):
        raise ValueError("tags do not separate the arrow names")
    comp = np.full((n1 + n2, n1 + n2), -1, dtype=np.int64)
    comp[:n1, :n1] = g1.comp
    c2 = g2.comp.copy()
    c2[c2 >= 0] += n1
    comp[n1:, n1:] = c2
    cat = lambda a, b: np.concatenate([a, b + n1])  # noqa: E731
    return _build(names, cat(g1.src, g2.src), cat(g1.rng, g2.rng), cat(g1.inv, g2.inv), comp)


# -- geometry --------------------------------------------------------------


def is_bisection(G: FiniteGroupoid, S: Iterable[str]) -> bool:
    """True iff source and range are both injective on ``S``."""
    idx = G.indices(S)
    return len(set(G.src[idx].tolist())) == len(idx) and len(set(G.rng[idx].tolist())) == len(idx)


def cover_by_bisections(G: FiniteGroupoid, S: Iterable[str]) -> list[frozenset[str]]:
    """Partition ``S`` into bisections, first-fit in canonical arrow order."""
    classes: list[tuple[list[int], set[int], set[int]]] = []
    for i in G.indices(S):
        s, r = int(G.src[i]), int(G.rng[i])
        for members, srcs, rngs in classes:
            if s not in srcs and r not in rngs:
                members.append(i)
                srcs.add(s)
                rngs.add(r)
                break
        else:
            classes.append(([i], {s}, {r}))
    return [G.names(m) for m, _, _ in classes]


def isotropy(G: FiniteGroupoid, x: str) -> frozenset[str]:
    i = G._unit_index(x)
    return G.names(np.flatnonzero((G.src == i) & (G.rng == i)))


def is_principal(G: FiniteGroupoid) -> bool:
    """Every isotropy group is trivial.

    With the discrete topology, topological principality reduces to this.
    """
    return bool(np.all((G.src != G.rng) | G.unit_mask))


def orbits(G: FiniteGroupoid) -> list[frozenset[str]]:
    """Orbits of the unit space, ordered by their first unit."""
    parent = {u: u for u in G.unit_indices}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for s, r in zip(G.src.tolist(), G.rng.tolist()):
        a, b = find(s), find(r)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for u in G.unit_indices:
        groups.setdefault(find(u), []).append(u)
    return [G.names(v) for _, v in sorted(groups.items())]


def invariant_subsets(G: FiniteGroupoid) -> list[frozenset[str]]:
    """All invariant subsets of the unit space, i.e. unions of orbits.

    Ordered by the bitmask over orbits, so the empty set comes first and
    the full unit space last.
    """
    orbs = orbits(G)
    out = []
    for bits in range(1 << len(orbs)):
        out.append(frozenset().union(*(o for k, o in enumerate(orbs) if bits >> k & 1)))
    return out


def is_invariant(G: FiniteGroupoid, F: Iterable[str]) -> bool:
    F = set(F)
    if not F <= set(G.units):
        return False
    fm = G.mask(F)
    return bool(np.array_equal(fm[G.src], fm[G.rng]))


def restrict(G: FiniteGroupoid, F: Iterable[str]) -> FiniteGroupoid:
    """The reduction G|_F = {γ : s(γ) ∈ F and r(γ) ∈ F}."""
    F = set(F)
    if not is_invariant(G, F):
        raise ValueError("restriction requires an invariant set of units")
    fm = G.mask(F)
    keep = np.flatnonzero(fm[G.src] & fm[G.rng])
    return _subgroupoid(G, keep)


def _subgroupoid(G: FiniteGroupoid, keep: np.ndarray) -> FiniteGroupoid:
    remap = np.full(len(G) + 1, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    sub = lambda arr: remap[arr[keep]]  # noqa: E731
    comp = G.comp[np.ix_(keep, keep)]
    comp = remap[comp]  # -1 maps to remap[-1] == -1
    return _checked([G.arrows[i] for i in keep], sub(G.src), sub(G.rng), sub(G.inv), comp)


def is_subgroupoid(G: FiniteGroupoid, H: Iterable[str]) -> bool:
    """Closed under inverse and composition and containing s, r of members."""
    m = G.mask(H)
    idx = np.flatnonzero(m)
    if not (m[G.inv[idx]].all() and m[G.src[idx]].all() and m[G.rng[idx]].all()):
        return False
    a, b, c = G.pairs
    both = m[a] & m[b]
    return bool(m[c[both]].all())


def enumerate_subgroupoids(
    G: FiniteGroupoid, require_all_units: bool = False, cap: int | None = None
) -> list[frozenset[str]]:
    """All subgroupoids of ``G`` by filtering every subset of arrows.

    With ``require_all_units`` only subsets containing the whole unit space
    are scanned.  Raises :class:`CapExceeded` when ``len(G) > cap``.
    """
    cap = default_cap() if cap is None else cap
    n = len(G)
    if n > cap:
        raise CapExceeded(f"subgroupoid enumeration over {n} arrows exceeds cap {cap}")
    if require_all_units:
        free = [i for i in range(n) if not G.unit_mask[i]]
        fixed = 0
        for u in G.unit_indices:
            fixed |= 1 << u
    else:
        free = list(range(n))
        fixed = 0
    k = len(free)
    codes = np.arange(1 << k, dtype=np.int64)
    masks = np.full(1 << k, fixed, dtype=np.int64)
    for bit, i in enumerate(free):
        masks |= ((codes >> bit) & 1) << i
    has = lambda i: (masks >> i) & 1 == 1  # noqa: E731
    ok = np.ones(len(masks), dtype=bool)
    for i in range(n):
        hi = has(i)
        for j in {int(G.inv[i]), int(G.src[i]), int(G.rng[i])}:
            ok &= ~hi | has(j)
    for a, b, c in zip(*G.pairs):
        ok &= ~(has(a) & has(b)) | has(c)
    out = []
    for m in masks[ok]:
        out.append(G.names(i for i in range(n) if (int(m) >> i) & 1))
    return out


def find_isomorphism(G: FiniteGroupoid, H: FiniteGroupoid) -> dict[str, str] | None:
    """Brute-force search for a groupoid isomorphism ``G → H``.

    Backtracks over arrow images with the structure maps checked as soon as
    both ends are assigned; intended for desk-scale instances only.
    """
    n = len(G)
    if n != len(H) or len(G.unit_indices) != len(H.unit_indices):
        return None
    phi = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        j = phi[i]
        if bool(G.unit_mask[i]) != bool(H.unit_mask[j]):
            return False
        for f_g, f_h in ((G.src, H.src), (G.rng, H.rng), (G.inv, H.inv)):
            k = f_g[i]
            if phi[k] >= 0 and phi[k] != f_h[j]:
                return False
            back = np.flatnonzero(f_g == i)
            for t in back:
                if phi[t] >= 0 and f_h[phi[t]] != j:
                    return False
        for t in range(n):
            if phi[t] < 0:
                continue
            for x, y in ((i, t), (t, i)):
                c = G.comp[x, y]
                d = H.comp[phi[x], phi[y]]
                if (c < 0) != (d < 0):
                    return False
                if c >= 0 and phi[c] >= 0 and phi[c] != d:
                    return False
        return True

    def complete() -> bool:
        p = np.asarray(phi)
        if not all(np.array_equal(p[f_g], f_h[p]) for f_g, f_h in ((G.src, H.src), (G.rng, H.rng), (G.inv, H.inv))):
            return False
        mapped = np.where(G.comp >= 0, p[G.comp], -1)
        return bool(np.array_equal(mapped, H.comp[np.ix_(p, p)]))

    def search(i: int) -> bool:
        if i == n:
            return complete()
        for j in range(n):
            if used[j]:
                continue
            phi[i], used[j] = j, True
            if consistent(i) and search(i + 1):
                return True
            phi[i], used[j] = -1, False
        return False

    if not search(0):
        return None
    return {G.arrows[i]: H.arrows[phi[i]] for i in range(n)}
