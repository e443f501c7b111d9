"""Invariants checked on random matroids drawn by hypothesis."""

import itertools

from hypothesis import assume, given, settings, strategies as st

import oracles
from matx import (
    W2, analyze, basis_graph, blow_up, emit, generation_path, linear_gf, minor, multiset,
    neighbors, parse_matroid, partition_into_bases, rank, replay, symmetric_exchange_partners,
    union_certificate, validate_bases,
)
from matx.errors import DependentContraction, InvalidRank, MatroidError, RankCollapse
from matx.matroid import elements

SETTINGS = settings(max_examples=80, deadline=None)


@st.composite
def linear_matroids(draw, max_n=7):
    p = draw(st.sampled_from([2, 3]))
    r = draw(st.integers(1, 3))
    n = draw(st.integers(r, max_n))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=r, max_size=r))
    try:
        return linear_gf(rows, p)
    except InvalidRank:   # zero matrix
        assume(False)


@SETTINGS
@given(linear_matroids(), st.data())
def test_rank_axioms(M, data):
    subsets = st.integers(0, (1 << M.n) - 1)
    a, b = data.draw(subsets), data.draw(subsets)
    ra, rb = rank(M, a), rank(M, b)
    assert 0 <= ra <= a.bit_count()
    assert rank(M, a | b) + rank(M, a & b) <= ra + rb           # submodular
    assert rank(M, a & b) <= ra <= rank(M, a | b)               # monotone
    for e in range(M.n):
        assert rank(M, a | 1 << e) - ra in (0, 1)               # unit increase


@SETTINGS
@given(linear_matroids(max_n=6))
def test_rank_matches_oracle(M):
    fam = oracles.fam(elements(b) for b in M.bases)
    for a in range(1 << M.n):
        assert M.rank_table[a] == oracles.rank(fam, set(elements(a)))


@SETTINGS
@given(linear_matroids(), st.data())
def test_symmetric_exchange(M, data):
    b1 = data.draw(st.sampled_from(M.bases))
    b2 = data.draw(st.sampled_from(M.bases))
    assume(b1 != b2)
    e = data.draw(st.sampled_from(elements(b1 & ~b2)))
    ws = symmetric_exchange_partners(M, b1, b2, e)
    assert ws
    for w in ws:
        assert w.b1 in M.basis_set and w.b2 in M.basis_set
        assert (w.b1 | w.b2, w.b1 & w.b2) == (b1 | b2, b1 & b2)


@SETTINGS
@given(linear_matroids())
def test_basis_graph_connected(M):
    assert analyze(basis_graph(M)).is_connected


@SETTINGS
@given(linear_matroids(), st.data())
def test_minor_operations_commute(M, data):
    assume(M.n >= 2)
    e, f = data.draw(st.lists(st.integers(0, M.n - 1), min_size=2, max_size=2, unique=True))
    try:
        one, lab1 = minor(M, delete={e}, contract={f})
        a, la = minor(M, contract={f})
        two, lab2 = minor(a, delete={la.index(e)})
    except (DependentContraction, RankCollapse):
        assume(False)
    assert one == two
    assert tuple(la[i] for i in lab2) == lab1


@SETTINGS
@given(linear_matroids(max_n=5), st.data())
def test_blow_up_is_morphism(M, data):
    subset = data.draw(st.integers(0, (1 << M.n) - 1))
    k = data.draw(st.integers(1, 3))
    assume(M.n + subset.bit_count() * (k - 1) <= 10)
    big, psi = blow_up(M, subset, k)
    assert big.r == M.r and psi.verify()
    assert big.n == M.n + subset.bit_count() * (k - 1)


@SETTINGS
@given(linear_matroids())
def test_partition_agrees_with_union_certificate(M):
    for k in (1, 2, 3):
        if k * M.r != M.n:
            continue
        part = partition_into_bases(M, k)
        cert = union_certificate(M, k)
        assert (part is None) == (cert is not None)
        if part is not None:
            assert all(b in M.basis_set for b in part.blocks)
            assert sum(b.bit_count() for b in part.blocks) == M.n
        else:
            assert k * rank(M, cert.subset) < cert.subset.bit_count()


@SETTINGS
@given(linear_matroids(max_n=6), st.data())
def test_w2_walks_stay_in_fiber_and_paths_replay(M, data):
    d = data.draw(st.integers(2, 3))
    state = multiset(M, [data.draw(st.sampled_from(M.bases)) for _ in range(d)])
    u = state.union_vector(M.n)
    walk = [state]
    for _ in range(data.draw(st.integers(0, 5))):
        nbrs = neighbors(M, walk[-1], W2)
        if not nbrs:
            break
        _, nxt = data.draw(st.sampled_from(nbrs))
        assert nxt.union_vector(M.n) == u
        walk.append(nxt)
    path = generation_path(M, state, walk[-1], W2)
    assert path is not None and replay(M, state, path) == walk[-1]
    assert len(path) <= len(walk) - 1


@SETTINGS
@given(linear_matroids())
def test_emit_parse_roundtrip(M):
    text = emit(M)
    assert parse_matroid(text) == M and emit(parse_matroid(text)) == text


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.frozensets(st.integers(0, n - 1), min_size=2, max_size=2), min_size=1))))
def test_validate_bases_agrees_with_axiom_oracle(fam):
    n, sets_ = fam
    want = oracles.is_matroid([frozenset(s) for s in sets_])
    try:
        validate_bases(n, sets_)
        got = True
    except MatroidError:
        got = False
    assert got == want


def test_linear_matroids_small_fields_exhaustive():
    # every GF(2) matrix with 2 rows and 3 columns gives a matroid whose
    # rank table matches the brute-force rank of its columns
    for bits in range(1, 64):
        rows = [[bits >> i & 1 for i in range(3)], [bits >> (i + 3) & 1 for i in range(3)]]
        try:
            M = linear_gf(rows, 2)
        except InvalidRank:
            continue
        for a in range(8):
            cols = [tuple(r[c] for r in rows) for c in elements(a)]
            span = {tuple(sum(x * y for x, y in zip(coef, col)) % 2 for col in zip(*cols))
                    for coef in itertools.product((0, 1), repeat=len(cols))} if cols else {()}
            want = len(span).bit_length() - 1 if cols else 0
            assert M.rank_table[a] == want
