"""Temperley-Lieb diagram category TL(d) at d = -(zeta + zeta^{-1}).

Diagrams are non-crossing perfect matchings on one circular boundary word:
bottom points 0..n-1 left to right, then top points n..n+m-1 right to left.
With that convention planarity is the balanced-bracket condition on the
linear word, and diagram equality is structural equality of sorted pairs.

Morphisms are finite CycNumber-linear combinations of diagrams; composition
stacks diagrams and converts every closed loop into a factor d.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .cyclo import CycNumber, FieldContext, inv, qint


class BoundaryMismatch(ValueError):
    """Boundary counts do not line up for the attempted operation."""


class QuantumOrderError(ValueError):
    """A required quantum integer vanishes at this root of unity."""


class TLDiagram:
    """A planar perfect matching between n bottom and m top points.

    pairs is canonicalized to a lexicographically sorted tuple of sorted
    pairs, so equality and hashing are structural.
    """

    __slots__ = ("bottom_count", "top_count", "pairs", "_hash")

    def __init__(self, bottom_count: int, top_count: int, pairs: Iterable):
        n, m = bottom_count, top_count
        if n < 0 or m < 0 or (n + m) % 2:
            raise ValueError(f"invalid boundary counts ({n}, {m})")
        norm = tuple(sorted(tuple(sorted(pr)) for pr in pairs))
        seen: set[int] = set()
        for a, b in norm:
            if a == b or not (0 <= a < n + m) or not (0 <= b < n + m):
                raise ValueError(f"endpoint pair ({a},{b}) out of range")
            if a in seen or b in seen:
                raise ValueError(f"repeated endpoint in {norm}")
            seen.update((a, b))
        if len(seen) != n + m:
            raise ValueError("pairing is not a perfect matching")
        # planarity: balanced brackets on the linear word
        partner = {}
        for a, b in norm:
            partner[a] = b
            partner[b] = a
        stack: list[int] = []
        for t in range(n + m):
            u = partner[t]
            if u > t:
                stack.append(t)
            else:
                if not stack or stack[-1] != u:
                    raise ValueError(f"pairing {norm} is not planar")
                stack.pop()
        object.__setattr__(self, "bottom_count", n)
        object.__setattr__(self, "top_count", m)
        object.__setattr__(self, "pairs", norm)
        object.__setattr__(self, "_hash", hash((n, m, norm)))

    def __setattr__(self, *a):
        raise AttributeError("TLDiagram is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, TLDiagram)
            and self.bottom_count == other.bottom_count
            and self.top_count == other.top_count
            and self.pairs == other.pairs
        )

    def __hash__(self):
        return self._hash

    def __str__(self):
        body = "".join(f"({a},{b})" for a, b in self.pairs)
        return f"TL({self.bottom_count}->{self.top_count}){{{body}}}"

    __repr__ = __str__


def _partner_map(d: TLDiagram) -> dict[int, int]:
    out = {}
    for a, b in d.pairs:
        out[a] = b
        out[b] = a
    return out


def _compose_diagrams(d1: TLDiagram, d2: TLDiagram) -> tuple[list, int]:
    """Stack d1 then d2; returns (new pairs, closed loop count).

    Interface positions: d1 top index n+t sits at physical position m-1-t,
    which is glued to d2 bottom index m-1-t.
    """
    n, m, k = d1.bottom_count, d1.top_count, d2.top_count
    p1, p2 = _partner_map(d1), _partner_map(d2)

    def glue(node):
        side, idx = node
        if side == "a":  # d1 top -> d2 bottom
            return ("b", n + m - 1 - idx)
        return ("a", n + m - 1 - idx)  # d2 bottom -> d1 top

    def is_internal(node):
        side, idx = node
        return idx >= n if side == "a" else idx < m

    def final_index(node):
        side, idx = node
        return idx if side == "a" else n + (idx - m)

    def pair_step(node):
        side, idx = node
        return (side, (p1 if side == "a" else p2)[idx])

    visited: set[tuple] = set()
    pairs: list[tuple[int, int]] = []
    externals = [("a", i) for i in range(n)] + [("b", m + t) for t in range(k)]
    for start in externals:
        if start in visited:
            continue
        visited.add(start)
        cur = pair_step(start)
        while is_internal(cur):
            visited.add(cur)
            crossed = glue(cur)
            visited.add(crossed)
            cur = pair_step(crossed)
        visited.add(cur)
        pairs.append((final_index(start), final_index(cur)))

    loops = 0
    for idx in range(m):
        node = ("b", idx)
        if node in visited:
            continue
        loops += 1
        cur = node
        while cur not in visited:
            visited.add(cur)
            mate = pair_step(cur)
            visited.add(mate)
            cur = glue(mate)
    return pairs, loops


def _tensor_diagrams(d1: TLDiagram, d2: TLDiagram) -> TLDiagram:
    n1, m1 = d1.bottom_count, d1.top_count
    n2, m2 = d2.bottom_count, d2.top_count

    def remap1(i):
        # d1 sits on the left: bottoms keep their index, tops shift past
        # every d2 index (top indices count from the right)
        return i if i < n1 else (n1 + n2 + m2) + (i - n1)

    def remap2(i):
        return (n1 + i) if i < n2 else (n1 + n2) + (i - n2)

    pairs = [(remap1(a), remap1(b)) for a, b in d1.pairs]
    pairs += [(remap2(a), remap2(b)) for a, b in d2.pairs]
    return TLDiagram(n1 + n2, m1 + m2, pairs)


class TLMorphism:
    """CycNumber-linear combination of diagrams with fixed boundary counts."""

    __slots__ = ("ctx", "bottom_count", "top_count", "terms")

    def __init__(self, ctx: FieldContext, bottom_count: int, top_count: int, terms=None):
        self.ctx = ctx
        self.bottom_count = bottom_count
        self.top_count = top_count
        pruned: dict[TLDiagram, CycNumber] = {}
        for d, c in (terms or {}).items():
            if d.bottom_count != bottom_count or d.top_count != top_count:
                raise BoundaryMismatch(
                    f"diagram {d} does not fit morphism ({bottom_count}->{top_count})"
                )
            if not c.is_zero():
                pruned[d] = c
        self.terms = pruned

    @classmethod
    def zero(cls, ctx: FieldContext, n: int, m: int) -> "TLMorphism":
        return cls(ctx, n, m, {})

    def is_zero(self) -> bool:
        return not self.terms

    def _require_like(self, other: "TLMorphism"):
        if (
            other.ctx is not self.ctx
            or other.bottom_count != self.bottom_count
            or other.top_count != self.top_count
        ):
            raise BoundaryMismatch("morphism shapes or contexts differ")

    def __add__(self, other):
        if not isinstance(other, TLMorphism):
            return NotImplemented
        self._require_like(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms[d] + c if d in terms else c
        return TLMorphism(self.ctx, self.bottom_count, self.top_count, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TLMorphism(
            self.ctx,
            self.bottom_count,
            self.top_count,
            {d: -c for d, c in self.terms.items()},
        )

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            scalar = self.ctx.rational(scalar)
        if not isinstance(scalar, CycNumber):
            return NotImplemented
        return TLMorphism(
            self.ctx,
            self.bottom_count,
            self.top_count,
            {d: c * scalar for d, c in self.terms.items()},
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TLMorphism):
            return NotImplemented
        return (
            self.ctx is other.ctx
            and self.bottom_count == other.bottom_count
            and self.top_count == other.top_count
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(
            (
                self.ctx.p,
                self.bottom_count,
                self.top_count,
                frozenset(self.terms.items()),
            )
        )

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for d in sorted(self.terms, key=lambda d: d.pairs):
            parts.append(f"({self.terms[d]})*{d}")
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# constructors


def from_diagram(ctx: FieldContext, d: TLDiagram) -> TLMorphism:
    return TLMorphism(ctx, d.bottom_count, d.top_count, {d: ctx.one()})


def identity(ctx: FieldContext, n: int) -> TLMorphism:
    d = TLDiagram(n, n, [(i, n + (n - 1 - i)) for i in range(n)])
    return from_diagram(ctx, d)


def cup(ctx: FieldContext) -> TLMorphism:
    return from_diagram(ctx, TLDiagram(0, 2, [(0, 1)]))


def cap(ctx: FieldContext) -> TLMorphism:
    return from_diagram(ctx, TLDiagram(2, 0, [(0, 1)]))


def loop_value(ctx: FieldContext) -> CycNumber:
    q = ctx.q()
    return -(q + inv(q))


def hook(ctx: FieldContext, n: int, i: int) -> TLMorphism:
    """E_i on n strands (1 <= i <= n-1): cup.cap acting on strands i, i+1."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"hook index {i} out of range for {n} strands")
    f2 = compose(cap(ctx), cup(ctx))
    out = tensor(identity(ctx, i - 1), f2) if i > 1 else f2
    if i < n - 1:
        out = tensor(out, identity(ctx, n - i - 1))
    return out


def all_diagrams(n: int, m: int) -> list[TLDiagram]:
    """Every planar matching in Hom([n], [m]); Catalan((n+m)/2) of them."""
    total = n + m
    if total % 2:
        return []

    def matchings(points: Sequence[int]):
        if not points:
            yield []
            return
        first = points[0]
        for j in range(1, len(points), 2):
            inner = points[1:j]
            outer = points[j + 1:]
            for mi in matchings(inner):
                for mo in matchings(outer):
                    yield [(first, points[j])] + mi + mo

    return [TLDiagram(n, m, pr) for pr in matchings(list(range(total)))]


# ---------------------------------------------------------------------------
# operations


def compose(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """Diagrammatic order: f acts first, g second; f: n->m, g: m->k."""
    if f.ctx is not g.ctx:
        raise BoundaryMismatch("mixed field contexts")
    if f.top_count != g.bottom_count:
        raise BoundaryMismatch(
            f"cannot compose ({f.bottom_count}->{f.top_count}) "
            f"with ({g.bottom_count}->{g.top_count})"
        )
    ctx = f.ctx
    d = loop_value(ctx)
    terms: dict[TLDiagram, CycNumber] = {}
    for d1, c1 in f.terms.items():
        for d2, c2 in g.terms.items():
            pairs, loops = _compose_diagrams(d1, d2)
            coeff = c1 * c2 * d**loops
            nd = TLDiagram(f.bottom_count, g.top_count, pairs)
            terms[nd] = terms[nd] + coeff if nd in terms else coeff
    return TLMorphism(ctx, f.bottom_count, g.top_count, terms)


def tensor(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    if f.ctx is not g.ctx:
        raise BoundaryMismatch("mixed field contexts")
    ctx = f.ctx
    n = f.bottom_count + g.bottom_count
    m = f.top_count + g.top_count
    terms: dict[TLDiagram, CycNumber] = {}
    for d1, c1 in f.terms.items():
        for d2, c2 in g.terms.items():
            nd = _tensor_diagrams(d1, d2)
            coeff = c1 * c2
            terms[nd] = terms[nd] + coeff if nd in terms else coeff
    return TLMorphism(ctx, n, m, terms)


_JW_CACHE: dict = {}


def jones_wenzl(ctx: FieldContext, n: int) -> TLMorphism:
    """The n-strand Jones-Wenzl idempotent, for 1 <= n <= p-1.

    Wenzl recursion in the loop-value convention: with jw' = jw(n-1) x id,
        jw(n) = jw' + ([n-1]/[n]) * jw' . E_{n-1} . jw'
    (the coefficient sign follows the Chebyshev-in-d normalization, which is
    the one making jw(2) = id - d^{-1} cup.cap idempotent).
    """
    if n < 1:
        raise ValueError("strand count must be >= 1")
    if n > ctx.p - 1:
        raise QuantumOrderError(
            f"[{min(n, ctx.p)}] = 0 at p={ctx.p}; jones_wenzl needs n <= p-1"
        )
    cached = _JW_CACHE.get((ctx.p, n))
    if cached is not None:
        return cached
    jw = identity(ctx, 1)
    _JW_CACHE.setdefault((ctx.p, 1), jw)
    for k in range(2, n + 1):
        hit = _JW_CACHE.get((ctx.p, k))
        if hit is not None:
            jw = hit
            continue
        prev = tensor(jw, identity(ctx, 1))
        coeff = qint(ctx, k - 1) / qint(ctx, k)
        corr = compose(compose(prev, hook(ctx, k, k - 1)), prev)
        jw = prev + coeff * corr
        _JW_CACHE[(ctx.p, k)] = jw
    return jw


def _rainbow(ctx: FieldContext, n: int, as_top: bool) -> TLMorphism:
    pairs = [(i, 2 * n - 1 - i) for i in range(n)]
    d = TLDiagram(0, 2 * n, pairs) if as_top else TLDiagram(2 * n, 0, pairs)
    return from_diagram(ctx, d)


def markov_close(f: TLMorphism) -> CycNumber:
    """Close all strands of an endomorphism with nested arcs; the scalar."""
    if f.bottom_count != f.top_count:
        raise BoundaryMismatch("markov_close needs an endomorphism")
    ctx = f.ctx
    n = f.bottom_count
    if n == 0:
        return f.terms.get(TLDiagram(0, 0, []), ctx.zero())
    closed = compose(
        compose(_rainbow(ctx, n, as_top=True), tensor(f, identity(ctx, n))),
        _rainbow(ctx, n, as_top=False),
    )
    return closed.terms.get(TLDiagram(0, 0, []), ctx.zero())


def braiding_candidates(ctx: FieldContext) -> list[TLMorphism]:
    """The four hexagon solutions in span{f, id}, +zeta^{1/2} variant first."""
    f = compose(cap(ctx), cup(ctx))
    ident = identity(ctx, 2)
    zh = ctx.qhalf()
    c_plus = zh * f + inv(zh) * ident
    c_minus = inv(zh) * f + zh * ident
    return [c_plus, c_minus, -c_plus, -c_minus]


def check_hexagon(c: TLMorphism) -> bool:
    """Exact TL_3 identity (c x 1).(1 x c).(coev x 1) = (1 x coev)."""
    if c.bottom_count != 2 or c.top_count != 2:
        raise BoundaryMismatch("hexagon check needs an endomorphism of [2]")
    ctx = c.ctx
    one1 = identity(ctx, 1)
    start = tensor(cup(ctx), one1)  # [1] -> [3]
    lhs = compose(compose(start, tensor(one1, c)), tensor(c, one1))
    rhs = tensor(one1, cup(ctx))
    return lhs == rhs


def check_yang_baxter(c: TLMorphism) -> bool:
    if c.bottom_count != 2 or c.top_count != 2:
        raise BoundaryMismatch("Yang-Baxter check needs an endomorphism of [2]")
    ctx = c.ctx
    one1 = identity(ctx, 1)
    c1 = tensor(c, one1)
    c2 = tensor(one1, c)
    lhs = compose(compose(c1, c2), c1)
    rhs = compose(compose(c2, c1), c2)
    return lhs == rhs
