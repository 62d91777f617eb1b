"""Command-line front end.

A small expression language drives the fusion rings:

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := INT | atom | '(' expr ')'
    atom   := V[s] | chi | X[s,+] | X[s,-] | L[r,s] | M[r,s] | 1

Atoms from one family fix the ring (V/chi the module side, X the recursion
side, L and M the two truncated windows); the letter p in an index slot
resolves to the -p value.  Integer literals act as multiples of the unit.

Verbs: fuse, jw, braid-check, fpdim, twists, muger, phase, verify.  Exit
codes: 0 on success, 1 when a verification fails, 2 for usage or parse
trouble.  -p takes one value or an inclusive range A..B; --format json
emits one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from collections import Counter
from fractions import Fraction

from .cyclo import field, inv, make_root, qint
from .tldiag import (
    QuantumOrderError,
    all_diagrams,
    braiding_candidates,
    cap,
    check_hexagon,
    check_yang_baxter,
    compose,
    cup,
    from_diagram,
    hook,
    identity,
    jones_wenzl,
    markov_close,
    tensor as tl_tensor,
)
from .qrep import (
    Matrix,
    braiding,
    check_module,
    chi_module,
    simple_L,
    simple_V,
    tensor,
    tl_to_matrix,
    twist_inverse,
)
from .fusion import (
    TruncationOverflow,
    check_grring_iso_K,
    check_iso_T,
    conformal_weight,
    fpdim_category,
    fpdim_object,
    induction_F,
    induction_I,
    induction_Iprime,
    iso_T,
    singlet_ring,
    uq_projective_classes,
    uq_ring,
    vir_ring,
    wp_projective_classes,
    wp_ring,
)
from .ribbon import (
    NonRepresentablePhase,
    monodromy,
    muger_candidates,
    quantum_order_check,
    singlet_twists,
    twist_table_json,
    uq_twists,
    voa_monodromy_phase,
    wp_twists,
)


class DSLSyntaxError(ValueError):
    """Malformed expression text; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvalError(ValueError):
    """Well-formed expression that cannot be evaluated in the chosen ring."""


# -- tokens and parsing -------------------------------------------------------

_SYMBOLS = "+-*()[],"


def _tokenize(text: str) -> list:
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("int", int(text[i:j]), i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j], i))
            i = j
        elif ch in _SYMBOLS:
            out.append((ch, ch, i))
            i += 1
        else:
            raise DSLSyntaxError(f"unexpected character {ch!r}", i)
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.take()
        if tok[0] != kind:
            raise DSLSyntaxError(f"expected {what}", tok[2])
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "*":
            self.take()
            node = ("mul", node, self.factor())
        return node

    def factor(self):
        kind, value, off = self.take()
        if kind == "int":
            return ("int", value)
        if kind == "(":
            node = self.expr()
            self.expect(")", "')'")
            return node
        if kind == "name":
            return self.atom(value, off)
        raise DSLSyntaxError("expected a number, an atom, or '('", off)

    def atom(self, name: str, off: int):
        if name == "chi":
            return ("atom", "chi", ())
        if name == "V":
            self.expect("[", "'['")
            s = self.index()
            self.expect("]", "']'")
            return ("atom", "V", (s,))
        if name == "X":
            self.expect("[", "'['")
            s = self.index()
            self.expect(",", "','")
            tok = self.take()
            if tok[0] not in ("+", "-"):
                raise DSLSyntaxError("expected '+' or '-'", tok[2])
            self.expect("]", "']'")
            return ("atom", "X", (s, 1 if tok[0] == "+" else -1))
        if name in ("L", "M"):
            self.expect("[", "'['")
            r = self.index()
            self.expect(",", "','")
            s = self.index()
            self.expect("]", "']'")
            return ("atom", name, (r, s))
        raise DSLSyntaxError(f"unknown atom {name!r}", off)

    def index(self):
        tok = self.take()
        if tok[0] == "int":
            return tok[1]
        if tok[0] == "-":
            return -self.expect("int", "a number")[1]
        if tok[0] == "name" and tok[1] == "p":
            return "p"
        raise DSLSyntaxError("expected an index", tok[2])


def parse(text: str):
    """Text -> AST of ('int', n) / ('atom', family, indices) / binary nodes."""
    parser = _Parser(text)
    node = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise DSLSyntaxError("trailing input", tok[2])
    return node


def _atom_str(node) -> str:
    _, family, idx = node
    if family == "chi":
        return "chi"
    if family == "V":
        return f"V[{idx[0]}]"
    if family == "X":
        return f"X[{idx[0]},{'+' if idx[1] > 0 else '-'}]"
    return f"{family}[{idx[0]},{idx[1]}]"


def print_expression(node) -> str:
    """Canonical text for an AST; parse(print_expression(t)) == t."""
    kind = node[0]
    if kind == "int":
        return str(node[1])
    if kind == "atom":
        return _atom_str(node)
    left = print_expression(node[1])
    right = print_expression(node[2])
    if kind == "mul":
        # the grammar is left-associative, so only the right operand ever
        # needs parentheses to survive a round trip
        if node[1][0] in ("add", "sub"):
            left = f"({left})"
        if node[2][0] in ("add", "sub", "mul"):
            right = f"({right})"
        return f"{left}*{right}"
    if node[2][0] in ("add", "sub"):
        right = f"({right})"
    return f"{left} {'+' if kind == 'add' else '-'} {right}"


def random_expression(rng: random.Random, depth: int = 0):
    """Random well-formed AST, used by the round-trip property suite."""
    if depth >= 4 or rng.random() < 0.35:
        pick = rng.randrange(6)
        if pick == 0:
            return ("int", rng.randrange(10))
        if pick == 1:
            return ("atom", "chi", ())
        if pick == 2:
            return ("atom", "V", (rng.randrange(1, 10),))
        if pick == 3:
            return ("atom", "X", (rng.randrange(1, 10),
                                  rng.choice((1, -1))))
        if pick == 4:
            return ("atom", "L", (rng.randrange(1, 9), rng.randrange(1, 9)))
        first = "p" if rng.random() < 0.2 else rng.randrange(-8, 9)
        return ("atom", "M", (first, rng.randrange(1, 9)))
    op = rng.choice(("add", "sub", "mul"))
    return (op, random_expression(rng, depth + 1),
            random_expression(rng, depth + 1))


# -- evaluation ---------------------------------------------------------------

_FAMILY_OF = {"V": "uq", "chi": "uq", "X": "wp", "L": "vir", "M": "singlet"}


def _collect_families(node, acc: set):
    if node[0] == "atom":
        acc.add(_FAMILY_OF[node[1]])
    elif node[0] in ("add", "sub", "mul"):
        _collect_families(node[1], acc)
        _collect_families(node[2], acc)


def expression_family(node) -> str:
    fams = set()
    _collect_families(node, fams)
    if not fams:
        raise EvalError("expression has no atoms, so no ring is determined")
    if len(fams) > 1:
        raise EvalError(
            f"atoms from different rings in one expression: {sorted(fams)}"
        )
    return fams.pop()


def _build_ring(family: str, p: int, rmax):
    if family == "uq":
        return uq_ring(p)
    if family == "wp":
        return wp_ring(p)
    maker = vir_ring if family == "vir" else singlet_ring
    return maker(p, rmax)


def _atom_label(node, family: str, labels, p: int):
    _, fam, idx = node
    idx = tuple(p if v == "p" else v for v in idx)
    if fam == "chi":
        lab = (1, 1)
    elif fam == "V":
        lab = (idx[0], 0)
    else:
        lab = idx
    if lab not in labels:
        raise EvalError(f"label {_atom_str(node)} is not in the p={p} ring")
    return lab


def _add_into(acc: dict, combo: dict, scale: int):
    for lab, mult in combo.items():
        acc[lab] = acc.get(lab, 0) + scale * mult
    return acc


def _eval(node, ring, family, labels, p):
    kind = node[0]
    if kind == "int":
        return {ring.unit: node[1]}
    if kind == "atom":
        return {_atom_label(node, family, labels, p): 1}
    left = _eval(node[1], ring, family, labels, p)
    right = _eval(node[2], ring, family, labels, p)
    if kind == "add":
        return _add_into(dict(left), right, 1)
    if kind == "sub":
        return _add_into(dict(left), right, -1)
    out: dict = {}
    for la, ca in left.items():
        for lb, cb in right.items():
            _add_into(out, ring.product(la, lb), ca * cb)
    return out


def evaluate(node, p: int, rmax=None) -> Counter:
    """Evaluate an AST in the ring its atoms determine; Counter by label.

    Subtraction may leave negative multiplicities; zero entries are
    dropped.  Window overflow in a truncated ring surfaces as EvalError.
    """
    family = expression_family(node)
    ring = _build_ring(family, p, rmax)
    labels = set(ring.labels)
    try:
        combo = _eval(node, ring, family, labels, p)
    except TruncationOverflow as err:
        raise EvalError(str(err)) from err
    return Counter({lab: mult for lab, mult in combo.items() if mult})


def label_str(lab, family: str) -> str:
    if family == "uq":
        s, eps = lab
        if eps:
            return "chi" if s == 1 else f"chi*V[{s}]"
        return f"V[{s}]"
    if family == "wp":
        return f"X[{lab[0]},{'+' if lab[1] > 0 else '-'}]"
    letter = "L" if family == "vir" else "M"
    return f"{letter}[{lab[0]},{lab[1]}]"


def format_combination(combo, family: str) -> str:
    items = sorted((lab, mult) for lab, mult in dict(combo).items() if mult)
    if not items:
        return "0"
    parts = []
    for lab, mult in items:
        name = label_str(lab, family)
        text = name if abs(mult) == 1 else f"{abs(mult)}*{name}"
        if not parts:
            parts.append(text if mult > 0 else f"0 - {text}")
        else:
            parts.append(f"{'+' if mult > 0 else '-'} {text}")
    return " ".join(parts)


def _combo_json(combo) -> list:
    return [[list(lab), mult] for lab, mult in sorted(dict(combo).items())]


# -- command verbs ------------------------------------------------------------


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(text)


def _cmd_fuse(args, ps) -> int:
    node = parse(args.expr)
    family = expression_family(node)
    for p in ps:
        combo = evaluate(node, p, args.rmax)
        pretty = format_combination(combo, family)
        _emit(args, {
            "verb": "fuse", "p": p, "expr": print_expression(node),
            "ring": family, "result": _combo_json(combo), "pretty": pretty,
        }, f"p={p}: {pretty}" if len(ps) > 1 else pretty)
    return 0


def _cmd_jw(args, ps) -> int:
    for p in ps:
        ctx = field(p)
        e = jones_wenzl(ctx, args.n)
        idem = compose(e, e) == e
        hooks = all(
            compose(hook(ctx, args.n, i), e).is_zero()
            and compose(e, hook(ctx, args.n, i)).is_zero()
            for i in range(1, args.n)
        )
        closure = markov_close(e)
        _emit(args, {
            "verb": "jw", "p": p, "n": args.n, "terms": len(e.terms),
            "idempotent": idem, "hooks_killed": hooks,
            "markov": str(closure),
        }, f"p={p}: jw({args.n}) terms={len(e.terms)} "
           f"idempotent={'yes' if idem else 'NO'} "
           f"hooks-killed={'yes' if hooks else 'NO'} markov={closure}")
        if not (idem and hooks):
            return 1
    return 0


def _cmd_braid_check(args, ps) -> int:
    bad = 0
    for p in ps:
        ctx = field(p)
        f = compose(cap(ctx), cup(ctx))
        ident = identity(ctx, 2)
        winners = [j for j in range(ctx.N)
                   if check_hexagon(ctx.root(j) * f + inv(ctx.root(j)) * ident)]
        cands = braiding_candidates(ctx)
        yb = all(check_yang_baxter(c) for c in cands)
        inverse_ok = (compose(cands[0], cands[1]) == ident
                      and compose(cands[1], cands[0]) == ident
                      and compose(cands[2], cands[3]) == ident
                      and compose(cands[3], cands[2]) == ident)
        ok = len(winners) == 4 and yb and inverse_ok
        bad += not ok
        _emit(args, {
            "verb": "braid-check", "p": p, "hexagon_solutions": len(winners),
            "yang_baxter": yb, "inverse_pairs": inverse_ok,
        }, f"p={p}: hexagon solutions={len(winners)} (expected 4) "
           f"yang-baxter={'yes' if yb else 'NO'} "
           f"inverse-pairs={'yes' if inverse_ok else 'NO'}")
    return 1 if bad else 0


def _cmd_fpdim(args, ps) -> int:
    bad = 0
    for p in ps:
        du = fpdim_category(uq_ring(p), uq_projective_classes(p))
        dw = fpdim_category(wp_ring(p), wp_projective_classes(p))
        ok = du == dw
        bad += not ok
        _emit(args, {
            "verb": "fpdim", "p": p, "module_route": str(du),
            "recursion_route": str(dw), "agree": ok,
        }, f"p={p}: {du}" + ("" if ok else f" != {dw} (routes disagree)"))
    return 1 if bad else 0


def _cmd_twists(args, ps) -> int:
    bad = 0
    for p in ps:
        table = wp_twists(p)
        module_side = uq_twists(p, inverse=True)
        assign = iso_T(p).assign
        agree = all(module_side.theta[lab] == table.theta[assign[lab]]
                    for lab in module_side.ring.labels)
        bad += not agree
        if args.format == "json":
            payload = twist_table_json(table)
            payload.update({"verb": "twists", "p": p,
                            "module_route_agrees": agree})
            print(json.dumps(payload))
        else:
            for lab in sorted(table.theta):
                print(f"p={p} {label_str(lab, 'wp')}: {table.theta[lab]}")
            print(f"p={p} module route (inverse twists) agrees: "
                  f"{'yes' if agree else 'NO'}")
    return 1 if bad else 0


def _cmd_muger(args, ps) -> int:
    for p in ps:
        wp_cands = sorted(muger_candidates(wp_ring(p), wp_twists(p)))
        ring = singlet_ring(p, args.rmax)
        s_cands = sorted(
            muger_candidates(ring, singlet_twists(p, args.rmax))
        )
        _emit(args, {
            "verb": "muger", "p": p,
            "wp": [list(lab) for lab in wp_cands],
            "singlet": [list(lab) for lab in s_cands],
        }, f"p={p} wp: " + " ".join(label_str(c, "wp") for c in wp_cands)
           + f"\np={p} singlet: "
           + " ".join(label_str(c, "singlet") for c in s_cands))
    return 0


def _cmd_phase(args, ps) -> int:
    hs = [Fraction(text) for text in args.h]
    for p in ps:
        value = voa_monodromy_phase(p, hs[0], hs[1], hs[2],
                                    squared=args.squared)
        _emit(args, {
            "verb": "phase", "p": p, "h": [str(h) for h in hs],
            "squared": args.squared, "value": str(value),
        }, f"p={p}: {value}" if len(ps) > 1 else str(value))
    return 0


# -- verification suites ------------------------------------------------------


def _timed(check: str, p: int, fn) -> dict:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as err:  # a crash counts as a failed check
        ok, detail = False, f"{type(err).__name__}: {err}"
    return {
        "check": check, "p": p, "status": "pass" if ok else "fail",
        "detail": detail, "elapsed": round(time.perf_counter() - t0, 4),
    }


def _suite_fpdim(p, opts) -> list:
    def category():
        du = fpdim_category(uq_ring(p), uq_projective_classes(p))
        dw = fpdim_category(wp_ring(p), wp_projective_classes(p))
        want = 2 * p ** 3
        return du == dw == want, (
            f"module route {du}, recursion route {dw}, expected {want}"
        )

    def simples():
        ring = uq_ring(p)
        for s in range(1, p + 1):
            for e in (0, 1):
                res = fpdim_object(ring, (s, e))
                if not (res.exact and res.value == s):
                    return False, f"simple ({s},{e}) got {res!r}"
        return True, "every simple has exact integer dimension s"

    return [_timed("fpdim.category", p, category),
            _timed("fpdim.simples", p, simples)]


def _suite_fusion(p, opts) -> list:
    def assoc():
        bad = (uq_ring(p).check_associativity()
               + wp_ring(p).check_associativity())
        return not bad, (
            f"all {2 * (2 * p) ** 3} triples across both rings"
            if not bad else f"{len(bad)} violations, first {bad[0]}"
        )

    def iso():
        ok, witness = check_iso_T(p)
        return ok, ("label bijection is a ring isomorphism on all pairs"
                    if ok else f"witness {witness}")

    return [_timed("fusion.associativity", p, assoc),
            _timed("fusion.iso_T", p, iso)]


def _suite_braiding(p, opts) -> list:
    ctx = field(p)

    def four():
        f = compose(cap(ctx), cup(ctx))
        ident = identity(ctx, 2)
        winners = [j for j in range(ctx.N)
                   if check_hexagon(ctx.root(j) * f
                                    + inv(ctx.root(j)) * ident)]
        expected = {ctx.qhalf(), inv(ctx.qhalf()),
                    -ctx.qhalf(), -inv(ctx.qhalf())}
        got = {ctx.root(j) for j in winners}
        return got == expected, (
            f"{len(winners)} hexagon solutions among {ctx.N} scanned units"
        )

    def yang_baxter():
        ok = all(check_yang_baxter(c) for c in braiding_candidates(ctx))
        return ok, "all four candidates satisfy the braid relation"

    def inverse_pairs():
        c0, c1, c2, c3 = braiding_candidates(ctx)
        ident = identity(ctx, 2)
        ok = (compose(c0, c1) == ident and compose(c1, c0) == ident
              and compose(c2, c3) == ident and compose(c3, c2) == ident)
        return ok, "candidates pair into mutually inverse braidings"

    return [_timed("braiding.hexagon", p, four),
            _timed("braiding.yang_baxter", p, yang_baxter),
            _timed("braiding.inverse_pairs", p, inverse_pairs)]


def _suite_jw(p, opts) -> list:
    ctx = field(p)

    def projectors():
        problems = []
        for n in range(1, p):
            e = jones_wenzl(ctx, n)
            if compose(e, e) != e:
                problems.append(f"jw({n}) is not idempotent")
            for i in range(1, n):
                if not (compose(hook(ctx, n, i), e).is_zero()
                        and compose(e, hook(ctx, n, i)).is_zero()):
                    problems.append(f"jw({n}) does not kill hook {i}")
            want = qint(ctx, n + 1) if n % 2 == 0 else -qint(ctx, n + 1)
            if markov_close(e) != want:
                problems.append(f"jw({n}) has the wrong closure")
        if not markov_close(jones_wenzl(ctx, p - 1)).is_zero():
            problems.append("top projector closure is nonzero")
        return not problems, ("; ".join(problems) if problems else
                              f"n=1..{p - 1}: idempotent, hook-killing, "
                              "alternating closures, vanishing top closure")

    return [_timed("jw.projectors", p, projectors)]


def _suite_twists(p, opts) -> list:
    def match():
        table = wp_twists(p)
        module_side = uq_twists(p, inverse=True)
        assign = iso_T(p).assign
        bad = [lab for lab in module_side.ring.labels
               if module_side.theta[lab] != table.theta[assign[lab]]]
        return not bad, (
            "inverse module twists equal the recursion-side table "
            "under the label bijection" if not bad else f"mismatch at {bad}"
        )

    def steinberg_neighbor():
        ctx = field(p)
        value = wp_twists(p).theta[(2, 1)]
        return value == -make_root(ctx, 3), f"theta at (2,+) is {value}"

    return [_timed("twists.match_under_iso", p, match),
            _timed("twists.two_dim_value", p, steinberg_neighbor)]


def _suite_modularity(p, opts) -> list:
    def wp_center():
        cands = muger_candidates(wp_ring(p), wp_twists(p))
        return cands == {(1, 1)}, (
            f"transparent candidates {sorted(cands)} (unit only means "
            "a trivial center)"
        )

    def singlet_center():
        rmax = opts["rmax"]
        ring = singlet_ring(p, rmax)
        cands = muger_candidates(ring, singlet_twists(p, rmax))
        hi = max(r for r, _ in ring.labels)
        want = {(r, 1) for r in range(-hi, hi + 1) if r % 2}
        return cands == want, (
            f"{len(cands)} transparent candidates, all odd first index, "
            "a properly degenerate center"
        )

    def order():
        report = quantum_order_check(p)
        return report["ok"], (
            "dimension recursion closed form, vanishing top dimension, "
            f"ord(q^2)={report['order_q2']}, vanishing geometric sum"
        )

    return [_timed("modularity.wp_center", p, wp_center),
            _timed("modularity.singlet_center", p, singlet_center),
            _timed("modularity.quantum_order", p, order)]


def _suite_phase(p, opts) -> list:
    ctx = field(p)

    def channels():
        h12 = conformal_weight(p, 1, 2)
        got = voa_monodromy_phase(p, h12, h12, Fraction(0))
        ok = got == -make_root(ctx, -3)
        sq = voa_monodromy_phase(p, h12, h12, Fraction(0), squared=True)
        ok = ok and sq == make_root(ctx, -6) == got * got
        if p > 2:
            h13 = conformal_weight(p, 1, 3)
            ok = ok and (voa_monodromy_phase(p, h12, h12, h13)
                         == make_root(ctx, 1))
        return ok, "vacuum and adjacent channels match the exact roots"

    def linking():
        rmax = opts["rmax"]
        ring = singlet_ring(p, rmax)
        table = singlet_twists(p, rmax)
        pairs = [((3, 1), (1, 2)), ((2, 1), (1, 1)), ((-1, 2), (3, 1))]
        for x, y in pairs:
            spec = monodromy(ring, table, x, y)
            for z, eig in spec.by_factor().items():
                want = voa_monodromy_phase(
                    p, conformal_weight(p, *x), conformal_weight(p, *y),
                    conformal_weight(p, *z), squared=True)
                if eig != want:
                    return False, f"factor {z} of {x}*{y} disagrees"
        return True, ("balancing monodromy equals the squared phase on "
                      "every composition factor")

    return [_timed("phase.channels", p, channels),
            _timed("phase.linking", p, linking)]


def _suite_grring(p, opts) -> list:
    def iso_k():
        return check_grring_iso_K(p, r_max=6), (
            "window products, restriction route, and the four-term "
            "vacuum-cover image all agree"
        )

    def composition():
        for r in range(1, 7):
            for s in range(1, p + 1):
                want = induction_F(p, (r, s))
                got = Counter()
                for mid, m1 in induction_I(p, (r, s), r_max=8).items():
                    for lab, m2 in induction_Iprime(p, mid).items():
                        got[lab] += m1 * m2
                if got != want:
                    return False, f"composite differs at ({r},{s})"
        return True, "second induction after first equals the direct map"

    return [_timed("grring.iso_K", p, iso_k),
            _timed("grring.composition", p, composition)]


def _random_trunc_label(rng, kind: str, p: int):
    # triple products add the first indices, with a spill of at most one
    # per multiplication, so these bounds keep everything inside window 12
    if kind == "vir":
        return (rng.randint(1, 3), rng.randint(1, p))
    return (rng.randint(-2, 2), rng.randint(1, p))


def _memo_product(ring, memo: dict, a, b):
    key = (a, b)
    hit = memo.get(key)
    if hit is None:
        hit = memo[key] = ring.product(a, b)
    return hit


def _suite_properties(p, opts) -> list:
    rng = random.Random(f"{opts['seed']}:{p}:properties")
    ctx = field(p)

    def finite_assoc():
        bad = (uq_ring(p).check_associativity()
               + wp_ring(p).check_associativity())
        return not bad, f"all {2 * (2 * p) ** 3} triples in both rings"

    def trunc_assoc():
        total = opts["triples"]
        window = max(12, opts["rmax"] or 0)
        rings = {"vir": vir_ring(p, window),
                 "singlet": singlet_ring(p, window)}
        memo: dict = {"vir": {}, "singlet": {}}
        for k in range(total):
            kind = "vir" if k % 2 == 0 else "singlet"
            ring = rings[kind]
            a, b, c = (_random_trunc_label(rng, kind, p) for _ in range(3))
            left = Counter()
            for lab, mult in _memo_product(ring, memo[kind], a, b).items():
                _add_into(left, _memo_product(ring, memo[kind], lab, c), mult)
            right = Counter()
            for lab, mult in _memo_product(ring, memo[kind], b, c).items():
                _add_into(right, _memo_product(ring, memo[kind], a, lab), mult)
            if +left != +right:
                return False, f"{kind} triple {a},{b},{c} breaks"
        return True, f"{total} random in-window triples in both truncations"

    def tl_words():
        lhs = compose(tl_tensor(cup(ctx), identity(ctx, 1)),
                      tl_tensor(identity(ctx, 1), cap(ctx)))
        rhs = compose(tl_tensor(identity(ctx, 1), cup(ctx)),
                      tl_tensor(cap(ctx), identity(ctx, 1)))
        if lhs != identity(ctx, 1) or rhs != identity(ctx, 1):
            return False, "a snake identity breaks"
        for _ in range(10):
            n = rng.choice((1, 2, 3))
            m = rng.choice((n % 2, n % 2 + 2)) or 2
            k = rng.choice((m % 2, m % 2 + 2)) or 2
            d1 = rng.choice(all_diagrams(n, m))
            d2 = rng.choice(all_diagrams(m, k))
            f = from_diagram(ctx, d1)
            g = from_diagram(ctx, d2)
            word = compose(f, g)
            if tl_to_matrix(ctx, word) != tl_to_matrix(ctx, g).mul(
                    tl_to_matrix(ctx, f)):
                return False, f"functor breaks on a {n}->{m}->{k} word"
        return True, "snake identities and 10 random composition words"

    def module_relations():
        mods = [simple_V(ctx, s) for s in range(1, p + 1)]
        mods.append(chi_module(ctx))
        mods.append(simple_L(ctx, 1))
        mods.append(tensor(simple_V(ctx, 2), simple_V(ctx, 2)))
        for m in mods:
            problems = check_module(m)
            if problems:
                return False, problems[0]
        return True, f"{len(mods)} modules pass the relation audit"

    def balancing():
        checked = 0
        pairs = [(simple_V(ctx, a), simple_V(ctx, b))
                 for a in range(1, p + 1) for b in range(a, p + 1)
                 if a * b <= 12]
        pairs.append((chi_module(ctx), simple_V(ctx, 2)))
        for m, n in pairs:
            if m.dimension * n.dimension > 12:
                continue
            c2 = braiding(n, m).matrix.mul(braiding(m, n).matrix)
            lhs = c2.mul(twist_inverse(tensor(m, n)).matrix)
            rhs = Matrix.kron(twist_inverse(m).matrix,
                              twist_inverse(n).matrix)
            if lhs != rhs:
                return False, "balancing identity breaks"
            checked += 1
        return True, f"balancing identity on {checked} products of dim <= 12"

    def roundtrip():
        total = opts["roundtrips"]
        for _ in range(total):
            ast = random_expression(rng)
            if parse(print_expression(ast)) != ast:
                return False, f"round trip breaks on {ast!r}"
        return True, f"{total} random print/parse round trips"

    return [_timed("properties.finite_associativity", p, finite_assoc),
            _timed("properties.truncated_associativity", p, trunc_assoc),
            _timed("properties.tl_words", p, tl_words),
            _timed("properties.module_relations", p, module_relations),
            _timed("properties.balancing", p, balancing),
            _timed("properties.dsl_roundtrip", p, roundtrip)]


SUITES = {
    "fpdim": _suite_fpdim,
    "fusion": _suite_fusion,
    "braiding": _suite_braiding,
    "jw": _suite_jw,
    "twists": _suite_twists,
    "modularity": _suite_modularity,
    "phase": _suite_phase,
    "grring": _suite_grring,
    "properties": _suite_properties,
}


def _cmd_verify(args, ps) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    share = max(1, len(ps))
    opts = {
        "rmax": args.rmax,
        "seed": args.seed,
        "triples": -(-args.triples // share),
        "roundtrips": -(-args.roundtrips // share),
    }
    failures = 0
    for p in ps:
        for name in names:
            for res in SUITES[name](p, opts):
                failures += res["status"] != "pass"
                _emit(args, res,
                      f"[{res['status']}] p={res['p']} {res['check']}: "
                      f"{res['detail']} ({res['elapsed']:.2f}s)")
    return 1 if failures else 0


# -- argument handling --------------------------------------------------------


def _parse_prange(text: str) -> list:
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo < 2 or hi < lo:
        raise ValueError(
            f"p range {text!r} must satisfy 2 <= first <= last"
        )
    return list(range(lo, hi + 1))


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ribbonkit",
        description="exact fusion, braiding, and modularity calculations",
    )
    sub = top.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("-p", required=True, metavar="P[..Q]",
                        help="parameter p >= 2, or an inclusive range A..B")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--rmax", type=int, default=None,
                        help="truncation window for the infinite families")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("fuse", help="evaluate a fusion expression")
    common(sp)
    sp.add_argument("expr")
    sp = sub.add_parser("jw", help="audit one projector")
    common(sp)
    sp.add_argument("-n", type=int, required=True)
    common(sub.add_parser("braid-check",
                          help="hexagon scan, braid relation, inverses"))
    common(sub.add_parser("fpdim", help="category dimension, both routes"))
    common(sub.add_parser("twists", help="twist table with cross-check"))
    common(sub.add_parser("muger", help="transparent-object candidates"))
    sp = sub.add_parser("phase", help="monodromy phase from three weights")
    common(sp)
    sp.add_argument("--squared", action="store_true")
    sp.add_argument("h", nargs=3, help="three conformal weights as fractions")
    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", default="all",
                    choices=sorted(SUITES) + ["all"])
    sp.add_argument("--triples", type=int, default=10000,
                    help="random associativity triples, total across -p")
    sp.add_argument("--roundtrips", type=int, default=1000,
                    help="random DSL round trips, total across -p")
    return top


_DISPATCH = {
    "fuse": _cmd_fuse,
    "jw": _cmd_jw,
    "braid-check": _cmd_braid_check,
    "fpdim": _cmd_fpdim,
    "twists": _cmd_twists,
    "muger": _cmd_muger,
    "phase": _cmd_phase,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 0 if err.code == 0 else 2
    try:
        ps = _parse_prange(args.p)
        return _DISPATCH[args.verb](args, ps)
    except (DSLSyntaxError, EvalError, QuantumOrderError,
            NonRepresentablePhase, TruncationOverflow, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
