"""Fusion rings on both sides of the correspondence.

The module-oracle ring (labels (s, parity), constants from composition
factors of explicit tensor products) and the generator-recursion ring
(labels (s, sign), constants from the Chebyshev rules alone) are built by
disjoint code paths on purpose: the ring isomorphism between them is a
checked statement, not a construction.

Also here: Frobenius-Perron data with exactness certificates, the truncated
Virasoro / singlet character rings, the induction maps between them, and a
plain-JSON surface for all of it.
"""

from __future__ import annotations

import os
from collections import Counter
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from .cyclo import field
from .qrep import (
    decompose_character,
    peel_strings,
    simple_L,
    simple_V,
    tensor,
    uq_classes,
)


class NegativityError(ValueError):
    """A structure constant came out negative or non-integral."""


class TruncationOverflow(ValueError):
    """An operation needs a label beyond the configured truncation window."""


class ConvergenceError(RuntimeError):
    """Power iteration failed to settle within the iteration cap."""


def default_rmax() -> int:
    return int(os.environ.get("RIBBONKIT_RMAX", "8"))


# -- based rings with nonnegative integer constants ---------------------------


class FusionRing:
    """Finite based ring: labels, unit, sparse constants, duality involution.

    constants maps (a, b) to {k: N_{ab}^k}.  The constructor enforces the
    structural axioms that hold for every ring in this package (complete
    product table, nonnegative integer constants, unit row and column,
    duality an involution fixing the unit).  Associativity and the strict
    duality pairing are separate checks: the latter genuinely fails on
    Steinberg-boundary pairs of the module rings, so it reports violations
    instead of raising.
    """

    def __init__(self, labels, unit, constants, dual):
        self.labels = tuple(labels)
        universe = set(self.labels)
        if len(universe) != len(self.labels):
            raise ValueError("duplicate labels")
        if unit not in universe:
            raise ValueError("unit is not a label")
        self.unit = unit
        self.dual = dict(dual)
        for a in self.labels:
            b = self.dual.get(a)
            if b not in universe or self.dual.get(b) != a:
                raise ValueError(f"duality is not an involution at {a!r}")
        if self.dual[unit] != unit:
            raise ValueError("duality must fix the unit")

        self.constants = {}
        for a in self.labels:
            for b in self.labels:
                row = constants.get((a, b))
                if row is None:
                    raise ValueError(f"missing product {a!r} * {b!r}")
                clean = Counter()
                for k, n in row.items():
                    if k not in universe:
                        raise ValueError(f"unknown label {k!r} in a product")
                    if n != int(n) or n < 0:
                        raise NegativityError(
                            f"constant N[{a!r},{b!r}]^{k!r} = {n}"
                        )
                    if n:
                        clean[k] = int(n)
                self.constants[(a, b)] = clean
        for a in self.labels:
            if self.constants[(self.unit, a)] != Counter({a: 1}) or \
                    self.constants[(a, self.unit)] != Counter({a: 1}):
                raise ValueError(f"unit does not act trivially on {a!r}")
        self._character = None
        self._character_known = False

    def product(self, a, b) -> Counter:
        return Counter(self.constants[(a, b)])

    def all_pairs(self):
        return list(self.constants.keys())

    def product_combo(self, x, y) -> Counter:
        out = Counter()
        for a, ma in x.items():
            for b, mb in y.items():
                for k, n in self.constants[(a, b)].items():
                    out[k] += ma * mb * n
        return +out

    def check_associativity(self, triples=None) -> list:
        """Triples (a, b, c) with (ab)c != a(bc); empty means associative."""
        if triples is None:
            triples = iproduct(self.labels, repeat=3)
        bad = []
        for a, b, c in triples:
            left = self.product_combo(self.constants[(a, b)], Counter({c: 1}))
            right = self.product_combo(Counter({a: 1}), self.constants[(b, c)])
            if left != right:
                bad.append((a, b, c))
        return bad

    def check_duality(self) -> list:
        """Pairs (a, b) violating N_{ab}^{unit} = delta_{b, a*}.

        The delta rule is an axiom for semisimple fusion rings only; the
        composition-factor rings here break it exactly where projective
        covers are larger than their simples.
        """
        bad = []
        for a in self.labels:
            for b in self.labels:
                want = 1 if self.dual[a] == b else 0
                if self.constants[(a, b)].get(self.unit, 0) != want:
                    bad.append((a, b))
        return bad


class RingMorphism:
    """Label assignment between based rings, checkable for ring-map laws."""

    def __init__(self, source, target, assign):
        if set(assign) != set(source.labels):
            raise ValueError("assignment must cover every source label")
        tuniv = set(target.labels)
        for v in assign.values():
            if v not in tuniv:
                raise ValueError(f"{v!r} is not a target label")
        self.source = source
        self.target = target
        self.assign = dict(assign)

    def push(self, combo: Counter) -> Counter:
        out = Counter()
        for lab, mult in combo.items():
            out[self.assign[lab]] += mult
        return out

    def check(self, pairs=None):
        """(ok, witness): basis bijection, unit, and multiplicativity.

        witness is None on success, otherwise ((a, b), pushed, direct) for
        the first pair where the two routes disagree (unit and bijection
        failures use a descriptive first slot).
        """
        if set(self.assign.values()) != set(self.target.labels):
            return False, ("not a bijection onto the target basis", None, None)
        if self.assign[self.source.unit] != self.target.unit:
            return False, ("unit is not preserved", None, None)
        if pairs is None:
            pairs = self.source.all_pairs()
        for a, b in pairs:
            pushed = self.push(self.source.constants[(a, b)])
            direct = self.target.constants[(self.assign[a], self.assign[b])]
            if pushed != direct:
                return False, ((a, b), pushed, Counter(direct))
        return True, None


# -- the module-oracle ring ---------------------------------------------------

_RING_CACHE: dict = {}


def _uq_rep_weights(p: int, s: int, eps: int) -> list:
    # chi shifts every weight by p
    return [eps * p + s - 1 - 2 * i for i in range(s)]


def _convolve(wa, wb) -> list:
    conv = Counter()
    ca, cb = Counter(wa), Counter(wb)
    for w1, c1 in ca.items():
        for w2, c2 in cb.items():
            conv[w1 + w2] += c1 * c2
    out = []
    for w, c in conv.items():
        out.extend([w] * c)
    return out


def _push_uq(dec: Counter) -> Counter:
    out = Counter()
    for (r, s, chi), mult in dec.items():
        out[(s, (r + chi) % 2)] += mult * (r + 1)
    return out


def uq_ring(p: int) -> FusionRing:
    """Grothendieck ring of the 2p simple weight modules at level p.

    Constants are composition-factor multiplicities of pairwise tensor
    products, computed from characters; every label is self-dual.
    """
    cached = _RING_CACHE.get(("uq", p))
    if cached is not None:
        return cached
    labels = [(s, eps) for s in range(1, p + 1) for eps in (0, 1)]
    wts = {lab: _uq_rep_weights(p, *lab) for lab in labels}
    constants = {}
    for a in labels:
        for b in labels:
            dec = decompose_character(p, _convolve(wts[a], wts[b]))
            constants[(a, b)] = dict(_push_uq(dec))
    ring = FusionRing(labels, (1, 0), constants, {lab: lab for lab in labels})
    _RING_CACHE[("uq", p)] = ring
    return ring


# -- the generator-recursion ring ---------------------------------------------


def wp_ring(p: int) -> FusionRing:
    """Ring on labels (s, sign) generated by (2, +) and (1, -).

    Built with no module input at all: the two generator columns seed
    multiplication matrices, every other basis class is the Chebyshev
    polynomial U_{s-1} of the degree-two generator (twisted by the sign
    swap), and constants are read off the resulting operators.  Negative
    or fractional entries would abort the build.
    """
    cached = _RING_CACHE.get(("wp", p))
    if cached is not None:
        return cached
    labels = [(s, eps) for s in range(1, p + 1) for eps in (1, -1)]
    idx = {lab: i for i, lab in enumerate(labels)}
    n = 2 * p

    m2 = np.zeros((n, n), dtype=np.int64)
    for s in range(1, p + 1):
        for eps in (1, -1):
            j = idx[(s, eps)]
            if s == p:
                m2[idx[(1, -eps)], j] += 2
                if p > 1:
                    m2[idx[(p - 1, eps)], j] += 2
            else:
                m2[idx[(s + 1, eps)], j] += 1
                if s > 1:
                    m2[idx[(s - 1, eps)], j] += 1
    m1 = np.zeros((n, n), dtype=np.int64)
    for s in range(1, p + 1):
        for eps in (1, -1):
            m1[idx[(s, -eps)], idx[(s, eps)]] = 1
    if not np.array_equal(m1 @ m2, m2 @ m1):
        raise NegativityError("generator operators fail to commute")

    ops = {(1, 1): np.eye(n, dtype=np.int64), (2, 1): m2}
    for s in range(3, p + 1):
        ops[(s, 1)] = m2 @ ops[(s - 1, 1)] - ops[(s - 2, 1)]
    for s in range(1, p + 1):
        ops[(s, -1)] = m1 @ ops[(s, 1)]

    constants = {}
    for a in labels:
        for b in labels:
            col = ops[a][:, idx[b]]
            if (col < 0).any():
                raise NegativityError(f"negative constant in {a!r} * {b!r}")
            constants[(a, b)] = {
                labels[k]: int(col[k]) for k in range(n) if col[k]
            }
    ring = FusionRing(labels, (1, 1), constants, {lab: lab for lab in labels})
    _RING_CACHE[("wp", p)] = ring
    return ring


def iso_T(p: int) -> RingMorphism:
    """The label bijection (s, 0) -> (s, +), (s, 1) -> (s, -)."""
    assign = {(s, eps): (s, 1 if eps == 0 else -1)
              for s in range(1, p + 1) for eps in (0, 1)}
    return RingMorphism(uq_ring(p), wp_ring(p), assign)


def check_iso_T(p: int):
    """Verify the bijection is a ring isomorphism; (ok, witness)."""
    return iso_T(p).check()


# -- Frobenius-Perron dimensions ----------------------------------------------


class FPDimResult:
    __slots__ = ("value", "exact", "residual")

    def __init__(self, value, exact, residual=None):
        self.value = value
        self.exact = exact
        self.residual = residual

    def __repr__(self):
        tag = "exact" if self.exact else f"residual={self.residual:.2e}"
        return f"FPDimResult({self.value}, {tag})"


def _left_mult_matrix(ring, combo):
    n = len(ring.labels)
    pos = {lab: i for i, lab in enumerate(ring.labels)}
    m = np.zeros((n, n))
    for a, ma in combo.items():
        for b in ring.labels:
            for k, c in ring.constants[(a, b)].items():
                m[pos[k], pos[b]] += ma * c
    return m


def _fp_character(ring):
    """Positive character label -> Fraction, or None when not integral.

    Candidate values come from the Perron eigenvector of the total left
    multiplication; the certificate is an exact integer re-check of every
    product relation, so a returned character is proven, not numerical.
    """
    if ring._character_known:
        return ring._character
    total = _left_mult_matrix(
        ring, Counter({lab: 1 for lab in ring.labels})
    )
    eigvals, eigvecs = np.linalg.eig(total)
    vec = np.real(eigvecs[:, int(np.argmax(np.real(eigvals)))])
    vec = np.abs(vec)
    anchor = int(np.argmax(vec))
    candidate = {}
    ok = True
    for i, lab in enumerate(ring.labels):
        mi = _left_mult_matrix(ring, Counter({lab: 1}))
        lam = float((mi @ vec)[anchor] / vec[anchor])
        rounded = round(lam)
        if abs(lam - rounded) > 1e-6 or rounded < 1:
            ok = False
            break
        candidate[lab] = rounded
    if ok and candidate[ring.unit] == 1:
        for a in ring.labels:
            for b in ring.labels:
                total_ab = sum(
                    n * candidate[k] for k, n in ring.constants[(a, b)].items()
                )
                if total_ab != candidate[a] * candidate[b]:
                    ok = False
                    break
            if not ok:
                break
    if ok and candidate.get(ring.unit) == 1:
        ring._character = {lab: Fraction(v) for lab, v in candidate.items()}
    else:
        ring._character = None
    ring._character_known = True
    return ring._character


def fpdim_object(ring, x, max_iter: int = 10000) -> FPDimResult:
    """Frobenius-Perron dimension of a label or Z+-combination of labels.

    Exact (Fraction) whenever the ring carries a certified integer
    character; otherwise the Perron eigenvalue of left multiplication via
    power iteration, required to reach residual < 1e-10.
    """
    combo = Counter(x) if isinstance(x, (dict, Counter)) else Counter({x: 1})
    for lab in combo:
        if lab not in set(ring.labels):
            raise ValueError(f"{lab!r} is not a label of this ring")
    char = _fp_character(ring)
    if char is not None:
        value = sum((char[lab] * mult for lab, mult in combo.items()),
                    Fraction(0))
        return FPDimResult(value, True)

    m = _left_mult_matrix(ring, combo)
    v = np.ones(len(ring.labels))
    lam = 0.0
    for _ in range(max_iter):
        w = m @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return FPDimResult(0.0, False, 0.0)
        w /= norm
        lam = float(w @ (m @ w))
        residual = float(np.max(np.abs(m @ w - lam * w)))
        v = w
        if residual < 1e-10:
            return FPDimResult(lam, False, residual)
    raise ConvergenceError(
        f"power iteration did not reach 1e-10 within {max_iter} steps"
    )


def fpdim_category(ring, projective_classes) -> Fraction:
    """Sum of FPdim(P_i) * FPdim(x_i) over all simple labels i.

    projective_classes maps each label to the class of its projective
    cover as a Z+-combination of labels.
    """
    total = Fraction(0)
    for lab in ring.labels:
        cover = fpdim_object(ring, projective_classes[lab])
        simple = fpdim_object(ring, lab)
        if not (cover.exact and simple.exact):
            raise ConvergenceError("category dimension needs exact characters")
        total += cover.value * simple.value
    return total


def uq_projective_classes(p: int) -> dict:
    """Classes of projective covers: [P_s] = 2[V_s] + 2[chi V_{p-s}] for
    s < p, Steinberg its own cover; chi twists act on the whole table."""
    out = {}
    for s in range(1, p + 1):
        for eps in (0, 1):
            if s == p:
                out[(s, eps)] = Counter({(p, eps): 1})
            else:
                out[(s, eps)] = Counter(
                    {(s, eps): 2, (p - s, 1 - eps): 2}
                )
    return out


def wp_projective_classes(p: int) -> dict:
    out = {}
    for s in range(1, p + 1):
        for eps in (1, -1):
            if s == p:
                out[(s, eps)] = Counter({(p, eps): 1})
            else:
                out[(s, eps)] = Counter({(s, eps): 2, (p - s, -eps): 2})
    return out


# -- truncated character rings ------------------------------------------------


def conformal_weight(p: int, r: int, s: int) -> Fraction:
    return Fraction((r * p - s) ** 2 - (p - 1) ** 2, 4 * p)


def vir_labels(p: int, r_max: int | None = None) -> list:
    """Labels (r, s) with exact conformal weights, 1 <= r <= r_max."""
    r_max = default_rmax() if r_max is None else r_max
    return [((r, s), conformal_weight(p, r, s))
            for r in range(1, r_max + 1) for s in range(1, p + 1)]


def singlet_labels(p: int, r_max: int | None = None) -> list:
    """Labels (r, s) with exact conformal weights, |r| <= r_max."""
    r_max = default_rmax() if r_max is None else r_max
    return [((r, s), conformal_weight(p, r, s))
            for r in range(-r_max, r_max + 1) for s in range(1, p + 1)]


class TruncatedRing:
    """Products on a truncated label window, computed from characters.

    kind "vir": labels (r, s), r >= 1; the product character decomposes
    into symmetric blocks (r', s') only, each mapped back to a label.
    kind "singlet": labels (r, s), r any integer; the product character
    peels into single strings, one label per string.  Any label outside
    the window, as input or output, raises TruncationOverflow.
    """

    def __init__(self, p: int, r_max: int, kind: str):
        if kind not in ("vir", "singlet"):
            raise ValueError(f"unknown ring kind {kind!r}")
        self.p = p
        self.r_max = r_max
        self.kind = kind
        self.unit = (1, 1)

    @property
    def labels(self):
        lo = 1 if self.kind == "vir" else -self.r_max
        return tuple((r, s) for r in range(lo, self.r_max + 1)
                     for s in range(1, self.p + 1))

    def _check_label(self, lab):
        r, s = lab
        if not 1 <= s <= self.p:
            raise ValueError(f"inner index {s} outside 1..{self.p}")
        lo = 1 if self.kind == "vir" else -self.r_max
        if not lo <= r <= self.r_max:
            raise TruncationOverflow(
                f"label {lab} outside the r_max={self.r_max} window"
            )

    def _weights(self, lab) -> list:
        r, s = lab
        t0 = r - 1
        if self.kind == "vir":
            ts = range(-(r - 1), r, 2)
        else:
            ts = (t0,)
        return [t * self.p + s - 1 - 2 * i for t in ts for i in range(s)]

    def product(self, a, b) -> Counter:
        self._check_label(a)
        self._check_label(b)
        conv = _convolve(self._weights(a), self._weights(b))
        out = Counter()
        if self.kind == "vir":
            for (r, s, chi), mult in decompose_character(self.p, conv).items():
                if chi:
                    raise NegativityError(
                        f"product {a} * {b} left the symmetric-block span"
                    )
                out[(r + 1, s)] += mult
        else:
            for (t, s), mult in peel_strings(self.p, conv).items():
                out[(t + 1, s)] += mult
        for lab in out:
            self._check_label(lab)
        return out


def vir_ring(p: int, r_max: int | None = None) -> TruncatedRing:
    return TruncatedRing(p, default_rmax() if r_max is None else r_max, "vir")


def singlet_ring(p: int, r_max: int | None = None) -> TruncatedRing:
    return TruncatedRing(
        p, default_rmax() if r_max is None else r_max, "singlet"
    )


# -- induction maps -----------------------------------------------------------


def _eps(r: int) -> int:
    # alternating sign, +1 on odd r
    return 1 if r % 2 else -1


def induction_F(p: int, lab) -> Counter:
    """Image of a Virasoro label in the (s, sign) ring: r copies of
    X_s with the alternating sign of r."""
    r, s = lab
    return Counter({(s, _eps(r)): r})


def induction_I(p: int, lab, r_max: int | None = None) -> Counter:
    """Image of a Virasoro label in the singlet window: one term for each
    j in r, r-2, ..., -r+2."""
    r, s = lab
    r_max = default_rmax() if r_max is None else r_max
    out = Counter()
    for j in range(r, -r, -2):
        if abs(j) > r_max:
            raise TruncationOverflow(
                f"induction of {lab} needs label ({j}, {s}) past r_max={r_max}"
            )
        out[(j, s)] += 1
    return out


def induction_Iprime(p: int, lab) -> Counter:
    """Image of a singlet label in the (s, sign) ring."""
    r, s = lab
    return Counter({(s, _eps(r)): 1})


def check_grring_iso_K(p: int, r_max: int | None = None) -> bool:
    """Cross-check the truncated Virasoro ring against the module side.

    Verifies, inside the window: the vacuum label is neutral; first-column
    products follow the classical composition rule; restriction of each
    explicit module through the label bijection matches r copies of the
    sign-alternating image; and the vacuum projective cover class
    2[L_{1,1}] + [L_{2,p-1}] has the expected four-term image.
    """
    r_max = default_rmax() if r_max is None else r_max
    ring = vir_ring(p, r_max)
    ctx = field(p)
    t = iso_T(p)

    for lab in ring.labels:
        if ring.product(ring.unit, lab) != Counter({lab: 1}):
            return False

    for r in range(1, r_max + 1):
        for rp in range(1, r_max + 1):
            if r + rp - 1 > r_max:
                continue
            want = Counter(
                {(rr, 1): 1 for rr in range(abs(r - rp) + 1, r + rp, 2)}
            )
            if ring.product((r, 1), (rp, 1)) != want:
                return False

    for r in range(1, r_max + 1):
        for s in range(1, p + 1):
            module = tensor(simple_L(ctx, r - 1), simple_V(ctx, s))
            pushed = t.push(uq_classes(module))
            if pushed != induction_F(p, (r, s)):
                return False

    vac_cover = Counter({(1, 1): 2, (2, p - 1): 1})
    image = Counter()
    for lab, mult in vac_cover.items():
        for k, n in induction_F(p, lab).items():
            image[k] += mult * n
    if image != Counter({(1, 1): 2, (p - 1, -1): 2}):
        return False
    if sum(image.values()) != 4:
        return False
    return True


# -- JSON surfaces ------------------------------------------------------------


def _label_json(lab):
    return list(lab) if isinstance(lab, tuple) else lab


def ring_json(ring) -> dict:
    idx = {lab: i for i, lab in enumerate(ring.labels)}
    constants = []
    for (a, b), row in ring.constants.items():
        for k, n in sorted(row.items(), key=str):
            constants.append([idx[a], idx[b], idx[k], n])
    return {
        "labels": [_label_json(lab) for lab in ring.labels],
        "unit": _label_json(ring.unit),
        "duality": [idx[ring.dual[lab]] for lab in ring.labels],
        "constants": constants,
    }


def morphism_json(m: RingMorphism) -> dict:
    return {
        "assignment": [
            [_label_json(a), _label_json(b)] for a, b in m.assign.items()
        ]
    }
