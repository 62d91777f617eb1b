"""Ribbon data on top of the fusion rings.

Twist tables are exact roots of unity in the ambient cyclotomic field.
Monodromy (the square of the braiding) is evaluated on composition factors
through the balancing identity theta_Z / (theta_X * theta_Y), which is all
the center and modularity arguments need; no matrices on non-semisimple
products are involved.  Phase arithmetic for the vertex-algebra side picks
the branch that writes e^(pi i Delta) as an integer power of the primitive
4p-th root.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

from .cyclo import field, make_root, qint
from .fusion import TruncationOverflow, conformal_weight, singlet_ring
from .qrep import (
    Matrix,
    chi_module,
    simple_V,
    tensor,
    twist,
    twist_inverse,
)


class NonScalarTwist(RuntimeError):
    """The twist operator on a supposed simple is not a scalar matrix."""


class NonRepresentablePhase(ValueError):
    """The requested phase does not lie in Q(zeta_4p)."""


class TwistTable:
    """Assignment label -> twist scalar for one ring.

    Checks theta(unit) = 1 and, when the ring carries a duality map,
    theta(x*) = theta(x).
    """

    def __init__(self, ring, theta):
        if set(theta) != set(ring.labels):
            raise ValueError("twist table must cover every label")
        one = next(iter(theta.values())).ctx.one()
        if theta[ring.unit] != one:
            raise ValueError("theta(unit) must be 1")
        dual = getattr(ring, "dual", None)
        if dual is not None:
            for lab, value in theta.items():
                if theta[dual[lab]] != value:
                    raise ValueError(f"theta is not duality-stable at {lab!r}")
        self.ring = ring
        self.theta = dict(theta)


class MonodromySpectrum:
    """Eigenvalues of the double braiding on X (x) Y, listed per factor."""

    def __init__(self, pair, entries):
        self.pair = pair
        self.entries = list(entries)  # (factor label, eigenvalue, mult)

    def multiset(self) -> Counter:
        out = Counter()
        for _, eig, mult in self.entries:
            out[eig] += mult
        return out

    def by_factor(self) -> dict:
        return {lab: eig for lab, eig, _ in self.entries}

    def size(self) -> int:
        return sum(mult for _, _, mult in self.entries)


# -- twist tables -------------------------------------------------------------


def wp_twists(p: int) -> TwistTable:
    """Exact twists of the 2p simples on the recursion side.

    The plus family alternates sign under z^(s^2-1); the minus family
    carries the extra constant -z^(3p^2), the exact form of -e^(3 pi i p/2).
    """
    from .fusion import wp_ring

    ctx = field(p)
    theta = {}
    for s in range(1, p + 1):
        base = make_root(ctx, s * s - 1)
        theta[(s, 1)] = base if s % 2 else -base
        theta[(s, -1)] = -make_root(ctx, 3 * p * p) * base
    return TwistTable(wp_ring(p), theta)


def module_twist_scalar(mat: Matrix):
    """Extract c from c * identity, or refuse."""
    n = mat.rows
    if mat.cols != n or len(mat.data) != n:
        raise NonScalarTwist("twist matrix is not diagonal")
    value = mat.entry(0, 0)
    for i in range(n):
        if mat.entry(i, i) != value:
            raise NonScalarTwist("twist matrix has distinct eigenvalues")
    return value


def uq_twists(p: int, inverse: bool = True) -> TwistTable:
    """Twist scalars on the module side, computed from the operators.

    Each simple gets theta (or its inverse) by applying the twist operator
    and extracting the scalar; a non-scalar result would mean the module
    was not simple and raises.
    """
    from .fusion import uq_ring

    ctx = field(p)
    op = twist_inverse if inverse else twist
    theta = {}
    for s in range(1, p + 1):
        theta[(s, 0)] = module_twist_scalar(op(simple_V(ctx, s)).matrix)
        twisted = tensor(chi_module(ctx), simple_V(ctx, s))
        theta[(s, 1)] = module_twist_scalar(op(twisted).matrix)
    return TwistTable(uq_ring(p), theta)


def singlet_twists(p: int, r_max: int | None = None) -> TwistTable:
    """theta(M_{r,s}) = e^(2 pi i h_{r,s}), exact in the field."""
    ring = singlet_ring(p, r_max)
    ctx = field(p)
    theta = {}
    for lab in ring.labels:
        h = conformal_weight(p, *lab)
        exponent = h * 4 * p
        if exponent.denominator != 1:
            raise NonRepresentablePhase(f"h = {h} leaves the field")
        theta[lab] = make_root(ctx, int(exponent))
    return TwistTable(ring, theta)


# -- monodromy ----------------------------------------------------------------


def monodromy(ring, twists: TwistTable, x, y) -> MonodromySpectrum:
    """Balancing eigenvalues of c^2 on the factors of x (x) y."""
    denom = (twists.theta[x] * twists.theta[y]).inv()
    entries = []
    for z, mult in sorted(ring.product(x, y).items(), key=str):
        entries.append((z, twists.theta[z] * denom, mult))
    return MonodromySpectrum((x, y), entries)


def muger_candidates(ring, twists: TwistTable) -> set:
    """Labels whose monodromy against every simple is trivial.

    A necessary condition for transparency, checked eigenvalue by
    eigenvalue.  On truncated rings, pairs whose product leaves the window
    are skipped: they can neither confirm nor refute a candidate inside
    the truncation.
    """
    one = next(iter(twists.theta.values())).ctx.one()
    out = set()
    for y in ring.labels:
        central = True
        for x in ring.labels:
            try:
                spec = monodromy(ring, twists, x, y)
            except TruncationOverflow:
                continue
            if any(eig != one for _, eig, _ in spec.entries):
                central = False
                break
        if central:
            out.add(y)
    return out


# -- quantum-order arithmetic -------------------------------------------------


def quantum_order_check(p: int) -> dict:
    """Intrinsic dimensions by recursion, Steinberg vanishing, and the
    order of q^2 with its vanishing geometric sum."""
    ctx = field(p)
    one = ctx.one()
    d2 = -qint(ctx, 2)
    dims = {1: one, 2: d2}
    for r in range(3, p + 1):
        # d2 * d_{r-1} = d_{r-2} + d_r
        dims[r] = d2 * dims[r - 1] - dims[r - 2]
    closed_form = all(
        dims[r] == (qint(ctx, r) if r % 2 else -qint(ctx, r))
        for r in range(1, p + 1)
    )
    steinberg = dims[p].is_zero()

    q2 = ctx.root(4)
    order = None
    power = one
    for m in range(1, 4 * p + 1):
        power = power * q2
        if power == one:
            order = m
            break
    gsum = ctx.zero()
    power = one
    for _ in range(p):
        gsum = gsum + power
        power = power * q2
    report = {
        "p": p,
        "dims": dims,
        "closed_form": closed_form,
        "steinberg_vanishes": steinberg,
        "order_q2": order,
        "geometric_sum_zero": gsum.is_zero(),
    }
    report["ok"] = closed_form and steinberg and order == p and \
        report["geometric_sum_zero"]
    return report


# -- phase arithmetic ---------------------------------------------------------


def voa_monodromy_phase(p: int, h1: Fraction, h2: Fraction, h3: Fraction,
                        squared: bool = False):
    """e^(pi i Delta) for Delta = h3 - h1 - h2, or its square.

    The branch writes the phase as zeta_4p to an integer power: 2p*Delta
    for a single application, 4p*Delta for the full monodromy.  A phase
    whose exponent is not integral does not live in the field and raises.
    """
    delta = Fraction(h3) - Fraction(h1) - Fraction(h2)
    scale = 4 * p if squared else 2 * p
    exponent = delta * scale
    if exponent.denominator != 1:
        raise NonRepresentablePhase(
            f"exponent {exponent} of the primitive root is not integral"
        )
    return make_root(field(p), int(exponent))


# -- JSON reports -------------------------------------------------------------


def _label_json(lab):
    return list(lab) if isinstance(lab, tuple) else lab


def twist_table_json(table: TwistTable) -> dict:
    ctx = next(iter(table.theta.values())).ctx
    return {
        "field": ctx.header(),
        "theta": [
            [_label_json(lab), str(value)]
            for lab, value in sorted(table.theta.items(), key=str)
        ],
    }


def spectrum_json(spec: MonodromySpectrum) -> dict:
    return {
        "pair": [_label_json(lab) for lab in spec.pair],
        "size": spec.size(),
        "eigenvalues": [
            [_label_json(z), str(eig), mult] for z, eig, mult in spec.entries
        ],
    }
