"""Weight modules for restricted quantum sl(2) at a 2p-th root of unity.

Weights are integers counting half-root units, so the Cartan element acts on
a weight-lambda vector by q^lambda and E/F shift weights by +-2.  The
divided-power generators Ep/Fp shift by +-2p and carry the Frobenius part of
the theory.  Operators are sparse matrices over the exact cyclotomic field;
everything here is exact, nothing is numeric.

The module also hosts the diagram-to-matrix functor (cups and caps go to the
coevaluation/evaluation of the self-dual standard module) and a character
based splitting oracle used by the fusion rings.
"""

from collections import Counter
from functools import reduce

from .cyclo import ContextMismatch, CycNumber, FieldContext, inv, qfact, qint
from . import tldiag


class InconsistentCharacter(ValueError):
    """Weight multiset cannot be split into standard characters."""


# -- sparse exact matrices ---------------------------------------------------


class Matrix:
    """Sparse matrix with entries in one cyclotomic context.

    Only nonzero entries are stored; all arithmetic is exact.  Instances are
    treated as immutable values.
    """

    __slots__ = ("ctx", "rows", "cols", "data")

    def __init__(self, ctx: FieldContext, rows: int, cols: int, data=None):
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        clean = {}
        if data:
            for (i, j), val in data.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
                if not val.is_zero():
                    clean[(i, j)] = val
        self.data = clean

    @classmethod
    def zeros(cls, ctx, rows, cols):
        return cls(ctx, rows, cols)

    @classmethod
    def identity(cls, ctx, n):
        one = ctx.one()
        return cls(ctx, n, n, {(i, i): one for i in range(n)})

    @classmethod
    def diagonal(cls, ctx, values):
        values = list(values)
        n = len(values)
        return cls(ctx, n, n, {(i, i): v for i, v in enumerate(values)})

    def entry(self, i, j) -> CycNumber:
        return self.data.get((i, j), self.ctx.zero())

    def is_zero(self) -> bool:
        return not self.data

    def add(self, other: "Matrix") -> "Matrix":
        self._compat(other, same_shape=True)
        acc = dict(self.data)
        for key, v in other.data.items():
            cur = acc.get(key)
            acc[key] = v if cur is None else cur + v
        return Matrix(self.ctx, self.rows, self.cols, acc)

    def sub(self, other: "Matrix") -> "Matrix":
        return self.add(other.scale(-self.ctx.one()))

    def scale(self, scalar: CycNumber) -> "Matrix":
        if scalar.is_zero():
            return Matrix(self.ctx, self.rows, self.cols)
        return Matrix(
            self.ctx, self.rows, self.cols,
            {key: scalar * v for key, v in self.data.items()},
        )

    def mul(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.cols} vs {other.rows}")
        by_row: dict = {}
        for (j, l), v in other.data.items():
            by_row.setdefault(j, []).append((l, v))
        acc: dict = {}
        for (i, j), u in self.data.items():
            hits = by_row.get(j)
            if not hits:
                continue
            for l, v in hits:
                key = (i, l)
                term = u * v
                cur = acc.get(key)
                acc[key] = term if cur is None else cur + term
        return Matrix(self.ctx, self.rows, other.cols, acc)

    def pow_int(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        out = Matrix.identity(self.ctx, self.rows)
        for _ in range(k):
            out = out.mul(self)
        return out

    @staticmethod
    def kron(a: "Matrix", b: "Matrix") -> "Matrix":
        a._compat(b)
        acc = {}
        for (ia, ja), va in a.data.items():
            for (ib, jb), vb in b.data.items():
                acc[(ia * b.rows + ib, ja * b.cols + jb)] = va * vb
        return Matrix(a.ctx, a.rows * b.rows, a.cols * b.cols, acc)

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse; raises ZeroDivisionError when singular."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        ctx = self.ctx
        zero, one = ctx.zero(), ctx.one()
        aug = [[self.entry(i, j) for j in range(n)] for i in range(n)]
        for i in range(n):
            aug[i].extend(one if j == i else zero for j in range(n))
        for col in range(n):
            piv = next(
                (r for r in range(col, n) if not aug[r][col].is_zero()), None
            )
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            scale = inv(aug[col][col])
            aug[col] = [x * scale for x in aug[col]]
            for r in range(n):
                if r == col or aug[r][col].is_zero():
                    continue
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
        acc = {}
        for i in range(n):
            for j in range(n):
                v = aug[i][n + j]
                if not v.is_zero():
                    acc[(i, j)] = v
        return Matrix(ctx, n, n, acc)

    def _compat(self, other, same_shape=False):
        if self.ctx is not other.ctx:
            raise ContextMismatch("matrices from different field contexts")
        if same_shape and (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.ctx is other.ctx
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.data == other.data
        )

    def __ne__(self, other):
        out = self.__eq__(other)
        return out if out is NotImplemented else not out

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.data.items())))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, nnz={len(self.data)})"


# -- modules and maps --------------------------------------------------------

_SHIFTS = (("E", 2), ("F", -2), ("Ep", None), ("Fp", None))


class WeightModule:
    """Finite-dimensional weight module with sparse operator actions.

    Operators may be passed as matrices or as zero-argument thunks; thunks
    are materialized (and shift-validated) on first access, which keeps
    character-level work on large tensor products cheap.
    """

    __slots__ = ("ctx", "weights", "dimension", "_ops")

    def __init__(self, ctx, weights, E, F, Ep, Fp):
        self.ctx = ctx
        self.weights = tuple(int(w) for w in weights)
        self.dimension = len(self.weights)
        self._ops = {"E": E, "F": F, "Ep": Ep, "Fp": Fp}
        for name, op in self._ops.items():
            if isinstance(op, Matrix):
                self._check_op(name, op)

    def _check_op(self, name, op):
        if op.ctx is not self.ctx:
            raise ContextMismatch(f"{name} lives in the wrong field")
        if (op.rows, op.cols) != (self.dimension, self.dimension):
            raise ValueError(f"{name} has the wrong shape")
        d = {"E": 2, "F": -2, "Ep": 2 * self.ctx.p, "Fp": -2 * self.ctx.p}[name]
        for (i, j) in op.data:
            if self.weights[i] != self.weights[j] + d:
                raise ValueError(
                    f"{name} entry ({i},{j}) breaks the weight shift {d:+d}"
                )

    def _get(self, name):
        op = self._ops[name]
        if not isinstance(op, Matrix):
            op = op()
            self._check_op(name, op)
            self._ops[name] = op
        return op

    E = property(lambda self: self._get("E"))
    F = property(lambda self: self._get("F"))
    Ep = property(lambda self: self._get("Ep"))
    Fp = property(lambda self: self._get("Fp"))

    def __repr__(self):
        return f"WeightModule(dim={self.dimension}, p={self.ctx.p})"


class ModuleMap:
    """Linear map between weight modules, optionally certified equivariant."""

    __slots__ = ("domain", "codomain", "matrix", "verified")

    def __init__(self, domain, codomain, matrix, verify=False):
        if domain.ctx is not codomain.ctx or matrix.ctx is not domain.ctx:
            raise ContextMismatch("map pieces from different field contexts")
        if (matrix.rows, matrix.cols) != (codomain.dimension, domain.dimension):
            raise ValueError("matrix shape does not match domain/codomain")
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix
        self.verified = False
        if verify:
            self._verify()
            self.verified = True

    def _verify(self):
        dom, cod, mat = self.domain, self.codomain, self.matrix
        period = 2 * dom.ctx.p  # q has order 2p, so K only sees weights mod 2p
        for (i, j) in mat.data:
            if (cod.weights[i] - dom.weights[j]) % period:
                raise ValueError(f"entry ({i},{j}) breaks K-equivariance")
        for name in ("E", "F", "Ep", "Fp"):
            left = getattr(cod, name).mul(mat)
            right = mat.mul(getattr(dom, name))
            if left != right:
                raise ValueError(f"map fails to intertwine {name}")

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        if other.codomain is not self.domain:
            if other.codomain.weights != self.domain.weights:
                raise ValueError("composition domains disagree")
        return ModuleMap(other.domain, self.codomain,
                         self.matrix.mul(other.matrix))

    def __repr__(self):
        return (f"ModuleMap({self.domain!r} -> {self.codomain!r}, "
                f"verified={self.verified})")


def check_module(m: WeightModule) -> list:
    """Relation audit: weight shifts, [E,F] commutator, nilpotency.

    Returns a list of violation messages, empty when everything holds.
    """
    out = []
    ctx = m.ctx
    p = ctx.p
    shifts = {"E": 2, "F": -2, "Ep": 2 * p, "Fp": -2 * p}
    for name, d in shifts.items():
        op = getattr(m, name)
        for (i, j) in op.data:
            if m.weights[i] != m.weights[j] + d:
                out.append(f"{name}({i},{j}) breaks weight shift")
    comm = m.E.mul(m.F).sub(m.F.mul(m.E))
    target = Matrix.diagonal(ctx, [qint(ctx, w) for w in m.weights])
    if comm != target:
        out.append("[E,F] differs from the weight diagonal")
    if not m.E.pow_int(p).is_zero():
        out.append("E^p is nonzero")
    if not m.F.pow_int(p).is_zero():
        out.append("F^p is nonzero")
    return out


# -- standard modules --------------------------------------------------------


def simple_V(ctx: FieldContext, s: int) -> WeightModule:
    """The s-dimensional simple with highest weight s-1; requires 1 <= s <= p."""
    if not 1 <= s <= ctx.p:
        raise ValueError(f"s={s} outside 1..{ctx.p}")
    weights = tuple(s - 1 - 2 * j for j in range(s))
    e = {(j - 1, j): qint(ctx, s - j) for j in range(1, s)}
    f = {(j + 1, j): qint(ctx, j + 1) for j in range(s - 1)}
    z = Matrix.zeros(ctx, s, s)
    return WeightModule(ctx, weights, Matrix(ctx, s, s, e),
                        Matrix(ctx, s, s, f), z, z)


def simple_L(ctx: FieldContext, r: int) -> WeightModule:
    """The (r+1)-dimensional Frobenius simple on the p-dilated weight string."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    n = r + 1
    weights = tuple((r - 2 * j) * ctx.p for j in range(n))
    ep = {(j - 1, j): ctx.rational(r - j + 1) for j in range(1, n)}
    fp = {(j + 1, j): ctx.rational(j + 1) for j in range(n - 1)}
    z = Matrix.zeros(ctx, n, n)
    return WeightModule(ctx, weights, z, z, Matrix(ctx, n, n, ep),
                        Matrix(ctx, n, n, fp))


def chi_module(ctx: FieldContext) -> WeightModule:
    """One-dimensional module concentrated in weight p; all operators vanish."""
    z = Matrix.zeros(ctx, 1, 1)
    return WeightModule(ctx, (ctx.p,), z, z, z, z)


# -- tensor products ---------------------------------------------------------


def _kdiag(m: WeightModule, t: int) -> Matrix:
    # K^t as a diagonal matrix
    ctx = m.ctx
    return Matrix.diagonal(ctx, [ctx.root(2 * t * w) for w in m.weights])


def _op_powers(op: Matrix, top: int) -> list:
    out = [Matrix.identity(op.ctx, op.rows)]
    for _ in range(top):
        out.append(op.mul(out[-1]))
    return out


def _divided(m: WeightModule, powers, generator, k: int) -> Matrix:
    # E^{(k)} / F^{(k)}: identity, E^k/[k]!, or the stored p-th divided power
    if k == 0:
        return Matrix.identity(m.ctx, m.dimension)
    if k == m.ctx.p:
        return generator
    return powers[k].scale(inv(qfact(m.ctx, k)))


def tensor(m: WeightModule, n: WeightModule) -> WeightModule:
    """Product module under the coproduct
    E -> E@1 + K@E,  F -> F@K^{-1} + 1@F, with the matching divided-power
    expansion for Ep and Fp."""
    if m.ctx is not n.ctx:
        raise ContextMismatch("tensor factors from different field contexts")
    ctx = m.ctx
    p = ctx.p
    weights = tuple(wm + wn for wm in m.weights for wn in n.weights)
    id_m = Matrix.identity(ctx, m.dimension)
    id_n = Matrix.identity(ctx, n.dimension)

    e_t = Matrix.kron(m.E, id_n).add(Matrix.kron(_kdiag(m, 1), n.E))
    f_t = Matrix.kron(m.F, _kdiag(n, -1)).add(Matrix.kron(id_m, n.F))
    dim = len(weights)

    def ep_t():
        me = _op_powers(m.E, p - 1)
        ne = _op_powers(n.E, p - 1)
        out = Matrix.zeros(ctx, dim, dim)
        for k in range(p + 1):
            left = _divided(m, me, m.Ep, k).mul(_kdiag(m, p - k))
            right = _divided(n, ne, n.Ep, p - k)
            if not (left.is_zero() or right.is_zero()):
                out = out.add(
                    Matrix.kron(left, right).scale(ctx.root(2 * k * (p - k)))
                )
        return out

    def fp_t():
        mf = _op_powers(m.F, p - 1)
        nf = _op_powers(n.F, p - 1)
        out = Matrix.zeros(ctx, dim, dim)
        for k in range(p + 1):
            left = _divided(m, mf, m.Fp, k)
            right = _kdiag(n, -k).mul(_divided(n, nf, n.Fp, p - k))
            if not (left.is_zero() or right.is_zero()):
                out = out.add(
                    Matrix.kron(left, right).scale(ctx.root(-2 * k * (p - k)))
                )
        return out

    return WeightModule(ctx, weights, e_t, f_t, ep_t, fp_t)


def _tensor_power(ctx, base: WeightModule, n: int) -> WeightModule:
    if n == 0:
        return simple_V(ctx, 1)
    return reduce(tensor, [base] * n)


# -- braiding and twist ------------------------------------------------------


def braiding(m: WeightModule, n: WeightModule) -> ModuleMap:
    """The braiding tensor(m,n) -> tensor(n,m):
    v@w -> zeta^{-lam.mu} sum_j c_j F^j w @ E^j v, with
    c_j = q^{-j(j-1)/2} (q^{-1}-q)^j / [j]!.  Construction verifies the
    module-map property, which pins the coproduct/R-matrix conventions."""
    if m.ctx is not n.ctx:
        raise ContextMismatch("braiding inputs from different field contexts")
    ctx = m.ctx
    p = ctx.p
    q = ctx.q()
    dm, dn = m.dimension, n.dimension

    def by_column(mats):
        out = []
        for mat in mats:
            cols: dict = {}
            for (i, j), v in mat.data.items():
                cols.setdefault(j, []).append((i, v))
            out.append(cols)
        return out

    e_cols = by_column(_op_powers(m.E, p - 1))
    f_cols = by_column(_op_powers(n.F, p - 1))

    coef = []
    gauss = ctx.one()
    for j in range(p):
        # q^{-j(j-1)/2} = zeta4p^{-j(j-1)}
        coef.append(ctx.root(-j * (j - 1)) * gauss * inv(qfact(ctx, j)))
        gauss = gauss * (inv(q) - q)

    acc: dict = {}
    for i in range(dm):
        lam = m.weights[i]
        for k in range(dn):
            mu = n.weights[k]
            pref = ctx.root(-lam * mu)
            for j in range(p):
                ehits = e_cols[j].get(i)
                fhits = f_cols[j].get(k)
                if not ehits or not fhits:
                    continue
                cj = pref * coef[j]
                col = i * dn + k
                for a, fv in fhits:
                    for b, ev_ in ehits:
                        key = (a * dm + b, col)
                        term = cj * fv * ev_
                        cur = acc.get(key)
                        acc[key] = term if cur is None else cur + term
    mat = Matrix(ctx, dm * dn, dm * dn, acc)
    return ModuleMap(tensor(m, n), tensor(n, m), mat, verify=True)


def twist_inverse(m: WeightModule) -> ModuleMap:
    """Inverse ribbon twist acting on m:
    w -> (-1)^lam zeta4p^{lam^2} sum_j zeta4p^{j(j+1)} q^{(j+1)lam}
         ((q^2-1)^j/[j]!) F^j E^j w   (lam the weight of w)."""
    ctx = m.ctx
    p = ctx.p
    q = ctx.q()
    epow = _op_powers(m.E, p - 1)
    fpow = _op_powers(m.F, p - 1)
    acc: dict = {}
    gpow = ctx.one()
    for j in range(p):
        fe = fpow[j].mul(epow[j])
        for (i, k), v in fe.data.items():
            lam = m.weights[k]
            # (-1)^lam = zeta4p^{2p lam}; q^{(j+1)lam} = zeta4p^{2(j+1)lam}
            root = ctx.root(2 * p * lam + lam * lam + j * (j + 1)
                            + 2 * (j + 1) * lam)
            term = root * gpow * inv(qfact(ctx, j)) * v
            cur = acc.get((i, k))
            acc[(i, k)] = term if cur is None else cur + term
        gpow = gpow * (q * q - ctx.one())
    mat = Matrix(ctx, m.dimension, m.dimension, acc)
    return ModuleMap(m, m, mat, verify=True)


def twist(m: WeightModule) -> ModuleMap:
    """The ribbon twist itself: matrix inverse of twist_inverse."""
    ti = twist_inverse(m)
    return ModuleMap(m, m, ti.matrix.inverse())


# -- self-duality of the standard module and the diagram functor -------------


def selfdual_V(ctx: FieldContext):
    """Structure maps of the self-dual standard module:
    coev(1) = zeta^{-1/2} v+ @ v-  -  zeta^{1/2} v- @ v+ and the matching
    evaluation; both are certified module maps."""
    v = simple_V(ctx, 2)
    vv = tensor(v, v)
    unit = simple_V(ctx, 1)
    zh = ctx.qhalf()
    coev = Matrix(ctx, 4, 1, {(1, 0): inv(zh), (2, 0): -zh})
    ev = Matrix(ctx, 1, 4, {(0, 1): -inv(zh), (0, 2): zh})
    return (
        ModuleMap(unit, vv, coev, verify=True),
        ModuleMap(vv, unit, ev, verify=True),
    )


def intrinsic_dim(pair) -> CycNumber:
    """Scalar of ev.coev for a (coev, ev) self-duality pair."""
    coev, ev = pair
    prod = ev.matrix.mul(coev.matrix)
    if (prod.rows, prod.cols) != (1, 1):
        raise ValueError("pair does not compose to a scalar")
    return prod.entry(0, 0)


def tl_to_matrix(ctx: FieldContext, mor: "tldiag.TLMorphism") -> Matrix:
    """Evaluate a diagram morphism on tensor powers of the standard module.

    Strand indices are bits (0 = highest weight vector), big-endian per
    position; each arc contributes its evaluation/coevaluation weight and
    through-strands propagate the index unchanged.
    """
    n, m = mor.bottom_count, mor.top_count
    zh = ctx.qhalf()
    ev_val = {(0, 1): -inv(zh), (1, 0): zh}
    coev_val = {(0, 1): inv(zh), (1, 0): -zh}
    acc: dict = {}
    for diag, coeff in mor.terms.items():
        arcs = []
        for x, y in diag.pairs:
            if y < n:
                arcs.append(("ev", x, y))
            elif x >= n:
                arcs.append(("coev", m - 1 - (y - n), m - 1 - (x - n)))
            else:
                arcs.append(("thru", x, m - 1 - (y - n)))
        states = [(0, 0, coeff)]  # packed bottom bits, top bits, value
        for kind, aa, bb in arcs:
            nxt = []
            for bot, top, val in states:
                if kind == "thru":
                    nxt.append((bot, top, val))
                    nxt.append((bot | 1 << (n - 1 - aa),
                                top | 1 << (m - 1 - bb), val))
                elif kind == "ev":
                    for (u, w), factor in ev_val.items():
                        nxt.append((
                            bot | u << (n - 1 - aa) | w << (n - 1 - bb),
                            top, val * factor,
                        ))
                else:
                    for (u, w), factor in coev_val.items():
                        nxt.append((
                            bot,
                            top | u << (m - 1 - aa) | w << (m - 1 - bb),
                            val * factor,
                        ))
            states = nxt
        for bot, top, val in states:
            cur = acc.get((top, bot))
            acc[(top, bot)] = val if cur is None else cur + val
    return Matrix(ctx, 1 << m, 1 << n, acc)


def quantum_trace(ctx: FieldContext, mat: Matrix, n: int) -> CycNumber:
    """Trace against the duality weights; equals the diagrammatic closure."""
    size = 1 << n
    if (mat.rows, mat.cols) != (size, size):
        raise ValueError(f"matrix is not an endomorphism of {n} strands")
    sign = ctx.one() if n % 2 == 0 else -ctx.one()
    total = ctx.zero()
    for (i, j), v in mat.data.items():
        if i != j:
            continue
        b = bin(i).count("1")
        total = total + sign * ctx.root(2 * (2 * b - n)) * v
    return total


def _reversed_complement(u: int, n: int) -> int:
    out = 0
    for k in range(n):
        if not (u >> (n - 1 - k)) & 1:
            out |= 1 << k
    return out


def selfdual_image(ctx: FieldContext, e: Matrix, n: int):
    """Duality pair for the image of an idempotent e on n strands, obtained by
    corestricting the nested n-fold coevaluation/evaluation through e@e."""
    size = 1 << n
    if (e.rows, e.cols) != (size, size):
        raise ValueError("idempotent shape does not match the strand count")
    cols: dict = {}
    rows: dict = {}
    for (i, j), v in e.data.items():
        cols.setdefault(j, []).append((i, v))
        rows.setdefault(i, []).append((j, v))

    def state_weight(u, flip):
        b = bin(u).count("1")
        sign = 1 if (b if not flip else n - b) % 2 == 0 else -1
        val = ctx.root(2 * b - n)
        return val if sign > 0 else -val

    coev_acc: dict = {}
    for u in range(size):
        left = cols.get(u)
        right = cols.get(_reversed_complement(u, n))
        if not left or not right:
            continue
        w = state_weight(u, flip=False)
        for c, v1 in left:
            for d, v2 in right:
                key = (c * size + d, 0)
                term = w * v1 * v2
                cur = coev_acc.get(key)
                coev_acc[key] = term if cur is None else cur + term
    ev_acc: dict = {}
    for c in range(size):
        left = rows.get(c)
        right = rows.get(_reversed_complement(c, n))
        if not left or not right:
            continue
        w = state_weight(c, flip=True)
        for a, v1 in left:
            for b_, v2 in right:
                key = (0, a * size + b_)
                term = w * v1 * v2
                cur = ev_acc.get(key)
                ev_acc[key] = term if cur is None else cur + term

    big = _tensor_power(ctx, simple_V(ctx, 2), n)
    square = tensor(big, big)
    unit = simple_V(ctx, 1)
    coev = ModuleMap(unit, square, Matrix(ctx, size * size, 1, coev_acc))
    ev = ModuleMap(square, unit, Matrix(ctx, 1, size * size, ev_acc))
    return coev, ev


# -- composition factors by character arithmetic -----------------------------


def peel_strings(p: int, weights) -> Counter:
    """Split a weight multiset into p-shifted strings, keyed (t, s).

    The string (t, s) covers weights t*p + s-1-2i for i < s.  Peeling from
    the top weight is forced: s is pinned by the residue mod p, so the
    splitting is unique.  Raises InconsistentCharacter when no splitting
    exists.
    """
    remaining = Counter(int(w) for w in weights)
    strings: Counter = Counter()
    while True:
        live = [w for w, c in remaining.items() if c > 0]
        if not live:
            break
        w = max(live)
        s = (w % p) + 1
        t = (w - (s - 1)) // p
        for i in range(s):
            ww = t * p + s - 1 - 2 * i
            if remaining.get(ww, 0) <= 0:
                raise InconsistentCharacter(
                    f"missing weight {ww} while peeling the string at {w}"
                )
            remaining[ww] -= 1
        strings[(t, s)] += 1
    return strings


def decompose_character(p: int, weights) -> Counter:
    """Split a weight multiset into simple characters.

    Peels highest-weight strings (each the character of a p-shifted simple),
    then assembles, per inner label s, maximal evenly spaced runs of shifts
    into labels (r, s, chi): chi^chi @ L(r) @ V_s, normalized so chi is 0/1.
    Raises InconsistentCharacter when the multiset admits no such splitting.
    """
    by_s: dict = {}
    for (t, s), mult in peel_strings(p, weights).items():
        by_s.setdefault(s, Counter())[t] += mult

    out = Counter()
    for s, shifts in by_s.items():
        while shifts.total() > 0:
            t0 = max(t for t, c in shifts.items() if c > 0)
            run = [t0]
            while shifts.get(run[-1] - 2, 0) > 0:
                run.append(run[-1] - 2)
            for t in run:
                shifts[t] -= 1
            r = len(run) - 1
            out[(r, s, (t0 - r) % 2)] += 1
    return out


def decompose_factors(m: WeightModule) -> Counter:
    """Composition-factor multiset of m over labels (r, s, chi)."""
    return decompose_character(m.ctx.p, m.weights)


def uq_classes(m: WeightModule) -> Counter:
    """Restriction to the small quantum group: classes (s, parity)."""
    out = Counter()
    for (r, s, chi), mult in decompose_factors(m).items():
        out[(s, (r + chi) % 2)] += mult * (r + 1)
    return out


# -- simplicity certificates -------------------------------------------------


def _echelon_insert(basis, vec):
    """Reduce vec against the running echelon basis; insert if independent."""
    for pivot, row in basis:
        c = vec[pivot]
        if not c.is_zero():
            vec = [a - c * b for a, b in zip(vec, row)]
    for idx, c in enumerate(vec):
        if not c.is_zero():
            scale = inv(c)
            basis.append((idx, [a * scale for a in vec]))
            return True
    return False


def _nullspace(rows, dim, ctx):
    """Kernel basis of the linear map given by a list of row vectors."""
    work = [list(r) for r in rows if any(not c.is_zero() for c in r)]
    pivots = []
    top = 0
    for col in range(dim):
        hit = next(
            (r for r in range(top, len(work)) if not work[r][col].is_zero()),
            None,
        )
        if hit is None:
            continue
        work[top], work[hit] = work[hit], work[top]
        scale = inv(work[top][col])
        work[top] = [x * scale for x in work[top]]
        for r in range(len(work)):
            if r == top or work[r][col].is_zero():
                continue
            factor = work[r][col]
            work[r] = [a - factor * b for a, b in zip(work[r], work[top])]
        pivots.append(col)
        top += 1
    kernel = []
    pivot_set = set(pivots)
    for free in range(dim):
        if free in pivot_set:
            continue
        vec = [ctx.zero()] * dim
        vec[free] = ctx.one()
        for row, pc in zip(work, pivots):
            vec[pc] = -row[free]
        kernel.append(vec)
    return kernel


def _mat_rows(mat):
    rows = [[mat.ctx.zero()] * mat.cols for _ in range(mat.rows)]
    for (i, j), v in mat.data.items():
        rows[i][j] = v
    return rows


def _apply(mat, vec):
    out = [mat.ctx.zero()] * mat.rows
    for (i, j), v in mat.data.items():
        if not vec[j].is_zero():
            out[i] = out[i] + v * vec[j]
    return out


def certify_simple(m: WeightModule) -> bool:
    """Certificate that m has no proper graded submodule: the stacked raising
    operators must have a one-dimensional kernel whose orbit under the
    lowering operators spans the whole module."""
    ctx = m.ctx
    rows = _mat_rows(m.E) + _mat_rows(m.Ep)
    kernel = _nullspace(rows, m.dimension, ctx)
    if len(kernel) != 1:
        return False
    basis: list = []
    frontier = [kernel[0]]
    _echelon_insert(basis, list(kernel[0]))
    while frontier:
        nxt = []
        for vec in frontier:
            for op in (m.F, m.Fp):
                img = _apply(op, vec)
                if any(not c.is_zero() for c in img):
                    if _echelon_insert(basis, list(img)):
                        nxt.append(img)
        frontier = nxt
    return len(basis) == m.dimension


# -- serialization -----------------------------------------------------------


def module_json(m: WeightModule) -> dict:
    """Plain-data description: dimension, weights, dense serialized operators."""
    def dense(op):
        return [
            [str(op.entry(i, j)) for j in range(m.dimension)]
            for i in range(m.dimension)
        ]

    return {
        "field": m.ctx.header(),
        "dimension": m.dimension,
        "weights": list(m.weights),
        "operators": {
            "E": dense(m.E), "F": dense(m.F),
            "Ep": dense(m.Ep), "Fp": dense(m.Fp),
        },
    }
