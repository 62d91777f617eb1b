"""Temperley-Lieb diagram category at d = -(zeta + zeta^{-1}).

Frozen expectations: Catalan diagram counts, the jw(2) closed form
id - d^{-1}*(cup.cap), signed quantum-integer Markov closures, and the
four-element braiding solution set with its paired-inverse identity.
The hexagon identity used throughout is
    (c x 1).(1 x c).(coev x 1) = (1 x coev)
whose span reduction is a*b = 1 and a^2 + b^2 + d*a*b = 0; the four exact
solutions are a = +-zeta^{+-1/2}, b = a^{-1}.
"""

import pytest
from hypothesis import given, strategies as st

from ribbonkit.cyclo import field, inv, qint
from ribbonkit.tldiag import (
    BoundaryMismatch,
    QuantumOrderError,
    TLDiagram,
    TLMorphism,
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
    loop_value,
    markov_close,
    tensor,
)

ALL_P = [2, 3, 4, 5, 6, 7]
CATALAN = [1, 1, 2, 5, 14, 42, 132]


def morphisms(ctx, n, m, max_terms=3):
    """Strategy: random morphism n -> m with small root-of-unity coefficients."""
    diags = all_diagrams(n, m)
    coeff = st.integers(min_value=0, max_value=ctx.N - 1).map(ctx.root)
    term = st.tuples(st.sampled_from(diags), coeff)
    return st.lists(term, min_size=0, max_size=max_terms).map(
        lambda ts: sum(
            (from_diagram(ctx, d) * c for d, c in ts),
            TLMorphism.zero(ctx, n, m),
        )
    )


# -- diagrams ----------------------------------------------------------------


def test_diagram_validity():
    TLDiagram(2, 2, [(0, 3), (1, 2)])  # identity on 2 strands
    TLDiagram(2, 2, [(0, 1), (2, 3)])  # cap-cup
    with pytest.raises(ValueError):
        TLDiagram(2, 2, [(0, 2), (1, 3)])  # crossing
    with pytest.raises(ValueError):
        TLDiagram(1, 2, [(0, 1)])  # odd total / not a perfect matching
    with pytest.raises(ValueError):
        TLDiagram(2, 2, [(0, 1), (0, 3)])  # repeated endpoint


def test_diagram_serialization():
    d = TLDiagram(3, 3, [(0, 1), (2, 3), (4, 5)])
    assert str(d) == "TL(3->3){(0,1)(2,3)(4,5)}"
    assert d == TLDiagram(3, 3, [(4, 5), (2, 3), (1, 0)])


@pytest.mark.parametrize("n", range(7))
def test_catalan_counts(n):
    assert len(all_diagrams(0, 2 * n)) == CATALAN[n]
    assert len(all_diagrams(n, n)) == CATALAN[n]


# -- composition and tensor --------------------------------------------------


def test_loop_rule():
    ctx = field(3)
    d = loop_value(ctx)
    q = ctx.q()
    assert d == -(q + inv(q))
    # cup then cap closes one loop on the empty diagram
    closed = compose(cup(ctx), cap(ctx))
    assert closed == TLMorphism.zero(ctx, 0, 0) + d * identity(ctx, 0)
    # f.f = d*f for f = cup.cap on two strands
    f = compose(cap(ctx), cup(ctx))
    assert compose(f, f) == d * f


@pytest.mark.parametrize("p", [2, 3, 5])
def test_identity_neutral(p):
    ctx = field(p)
    f = compose(cap(ctx), cup(ctx))
    assert compose(identity(ctx, 2), f) == f
    assert compose(f, identity(ctx, 2)) == f


def test_boundary_mismatch():
    ctx = field(2)
    with pytest.raises(BoundaryMismatch):
        compose(cup(ctx), identity(ctx, 3))


def test_tensor_basics():
    ctx = field(3)
    assert tensor(identity(ctx, 1), identity(ctx, 1)) == identity(ctx, 2)
    t = tensor(cup(ctx), cap(ctx))
    assert t.bottom_count == 2 and t.top_count == 2
    assert len(t.terms) == 1
    z = TLMorphism.zero(ctx, 1, 1)
    assert tensor(cup(ctx), z) == TLMorphism.zero(ctx, 1, 3)
    assert len(tensor(cup(ctx), cup(ctx)).terms) == 1


def test_snake_identities():
    for p in ALL_P:
        ctx = field(p)
        lhs = compose(tensor(cup(ctx), identity(ctx, 1)),
                      tensor(identity(ctx, 1), cap(ctx)))
        rhs = compose(tensor(identity(ctx, 1), cup(ctx)),
                      tensor(cap(ctx), identity(ctx, 1)))
        assert lhs == identity(ctx, 1)
        assert rhs == identity(ctx, 1)


# -- Jones-Wenzl -------------------------------------------------------------


def test_jw1_is_identity():
    ctx = field(5)
    assert jones_wenzl(ctx, 1) == identity(ctx, 1)


def test_jw2_closed_form():
    ctx = field(3)
    f = compose(cap(ctx), cup(ctx))
    expected = identity(ctx, 2) - inv(loop_value(ctx)) * f
    assert jones_wenzl(ctx, 2) == expected


@pytest.mark.parametrize("p", ALL_P)
def test_jw_idempotent_and_hook_killing(p):
    ctx = field(p)
    for n in range(1, p):
        jw = jones_wenzl(ctx, n)
        assert compose(jw, jw) == jw
        for i in range(1, n):
            e = hook(ctx, n, i)
            assert compose(jw, e).is_zero()
            assert compose(e, jw).is_zero()


@pytest.mark.parametrize("p", ALL_P)
def test_jw_out_of_range(p):
    ctx = field(p)
    with pytest.raises(QuantumOrderError):
        jones_wenzl(ctx, p)


# -- Markov closure ----------------------------------------------------------


def test_markov_basics():
    ctx = field(4)
    assert markov_close(identity(ctx, 0)) == ctx.one()
    assert markov_close(identity(ctx, 1)) == loop_value(ctx)
    assert markov_close(identity(ctx, 2)) == loop_value(ctx) ** 2
    # closing the single cup-cap diagram yields one loop
    f = compose(cap(ctx), cup(ctx))
    assert markov_close(f) == loop_value(ctx)


@pytest.mark.parametrize("p", ALL_P)
def test_markov_jw_signed_dimensions(p):
    ctx = field(p)
    for n in range(1, p):
        val = markov_close(jones_wenzl(ctx, n))
        assert val == (-1) ** n * qint(ctx, n + 1)
    assert markov_close(jones_wenzl(ctx, p - 1)).is_zero()


# -- braiding classification -------------------------------------------------


@pytest.mark.parametrize("p", ALL_P)
def test_braiding_candidates_structure(p):
    ctx = field(p)
    cands = braiding_candidates(ctx)
    assert len(cands) == 4
    f = compose(cap(ctx), cup(ctx))
    zh = ctx.qhalf()
    first = zh * f + inv(zh) * identity(ctx, 2)
    second = inv(zh) * f + zh * identity(ctx, 2)
    assert cands[0] == first
    assert set(cands) == {first, second, -first, -second}


@pytest.mark.parametrize("p", ALL_P)
def test_candidates_satisfy_hexagon_and_yb(p):
    ctx = field(p)
    for c in braiding_candidates(ctx):
        assert check_hexagon(c)
        assert check_yang_baxter(c)


@pytest.mark.parametrize("p", ALL_P)
def test_paired_inverse(p):
    ctx = field(p)
    c0, c1, c2, c3 = braiding_candidates(ctx)
    assert compose(c1, c0) == identity(ctx, 2)
    assert compose(c0, c1) == identity(ctx, 2)
    assert compose(c2, c3) == identity(ctx, 2)


@pytest.mark.parametrize("p", ALL_P)
def test_hexagon_negative_controls(p):
    ctx = field(p)
    assert not check_hexagon(identity(ctx, 2))
    assert not check_hexagon(compose(cap(ctx), cup(ctx)))


def test_yang_baxter_cases():
    # braid words E1.E2.E1 = E1 and E2.E1.E2 = E2 differ, so c = cup.cap
    # fails the equation; so does id + f away from d = -2
    ctx = field(3)
    f = compose(cap(ctx), cup(ctx))
    e1 = hook(ctx, 3, 1)
    e2 = hook(ctx, 3, 2)
    one1 = identity(ctx, 1)
    lhs = compose(compose(tensor(f, one1), tensor(one1, f)), tensor(f, one1))
    rhs = compose(compose(tensor(one1, f), tensor(f, one1)), tensor(one1, f))
    assert lhs == e1 and rhs == e2 and e1 != e2
    assert not check_yang_baxter(f)
    assert not check_yang_baxter(identity(ctx, 2) + f)


@pytest.mark.parametrize("p", ALL_P)
def test_hexagon_solution_set_is_exactly_four(p):
    # scan a over all roots of unity in the field, b = a^{-1}; the hexagon
    # must hold exactly for a in {+-zeta^{1/2}, +-zeta^{-1/2}}
    ctx = field(p)
    f = compose(cap(ctx), cup(ctx))
    ident = identity(ctx, 2)
    winners = set()
    for j in range(ctx.N):
        a = ctx.root(j)
        c = a * f + inv(a) * ident
        if check_hexagon(c):
            winners.add(a)
    zh = ctx.qhalf()
    assert winners == {zh, inv(zh), -zh, -inv(zh)}
    # ab != 1 never solves it, even for otherwise-valid a
    bad = zh * f + zh * ident
    assert not check_hexagon(bad)


@pytest.mark.parametrize("p", [3, 4, 5, 6, 7])
def test_idempotent_form_of_first_candidate(p):
    # for d != 0: zeta^{1/2} f + zeta^{-1/2} = -zeta^{3/2} e1 + zeta^{-1/2} e3
    ctx = field(p)
    f = compose(cap(ctx), cup(ctx))
    d = loop_value(ctx)
    e1 = inv(d) * f
    e3 = identity(ctx, 2) - e1
    assert compose(e1, e1) == e1
    assert compose(e3, e3) == e3
    zh = ctx.qhalf()
    c0 = braiding_candidates(ctx)[0]
    assert c0 == (-(zh**3)) * e1 + inv(zh) * e3


# -- property suites ---------------------------------------------------------


@given(data=st.data(), p=st.sampled_from([2, 3, 5]))
def test_compose_associative(data, p):
    ctx = field(p)
    fm = data.draw(morphisms(ctx, 2, 2))
    gm = data.draw(morphisms(ctx, 2, 0))
    hm = data.draw(morphisms(ctx, 0, 2))
    assert compose(compose(fm, gm), hm) == compose(fm, compose(gm, hm))


@given(data=st.data(), p=st.sampled_from([2, 3]))
def test_tensor_functorial(data, p):
    ctx = field(p)
    f = data.draw(morphisms(ctx, 1, 3))
    fp = data.draw(morphisms(ctx, 3, 1))
    g = data.draw(morphisms(ctx, 2, 2))
    gp = data.draw(morphisms(ctx, 2, 2))
    lhs = compose(tensor(f, g), tensor(fp, gp))
    rhs = tensor(compose(f, fp), compose(g, gp))
    assert lhs == rhs


@given(data=st.data(), p=st.sampled_from([2, 3, 5]))
def test_compose_bilinear(data, p):
    ctx = field(p)
    f = data.draw(morphisms(ctx, 2, 2))
    g = data.draw(morphisms(ctx, 2, 2))
    h = data.draw(morphisms(ctx, 2, 2))
    assert compose(f + g, h) == compose(f, h) + compose(g, h)
    assert compose(h, f + g) == compose(h, f) + compose(h, g)
