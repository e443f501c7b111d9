import itertools

import pytest

import oracles
from oracles import bases_of
from matx import (
    MatroidMorphism, blow_up, graphic, linear_gf, minor, rank, restrict, symmetric_exchange_partners,
    symmetric_exchange_violation, to_mask, truncate, uniform, validate_bases, verify_morphism,
)
from matx.errors import (
    DependentContraction, ElementNotExchangeable, ElementOutOfRange, EmptyFamily, EmptyGraph,
    ExchangeAxiomFailure, GroundSetTooLarge, InvalidRank, NonPrimeModulus, NotABasis,
    OverlappingArguments, RankCollapse, UnequalCardinality,
)
from matx.matroid import Matroid, elements, fmt_set


def sets(M):
    return [set(e + 1 for e in elements(b)) for b in M.bases]


# ------------------------------------------------------------ validate_bases

def test_all_pairs_give_u24():
    M = validate_bases(4, itertools.combinations(range(4), 2))
    assert M == uniform(2, 4)
    assert (M.n, M.r, len(M.bases)) == (4, 2, 6)


def test_disjoint_pair_fails_exchange():
    with pytest.raises(ExchangeAxiomFailure) as exc:
        validate_bases(4, bases_of({1, 2}, {3, 4}))
    err = exc.value
    assert (fmt_set(err.b1), fmt_set(err.b2), err.e + 1) == ("{1,2}", "{3,4}", 1)


def test_parallel_pair(par34):
    assert (par34.r, len(par34.bases)) == (2, 5)


def test_bases_sorted_and_deduplicated():
    M = validate_bases(3, [{2, 1}, {0, 1}, {1, 0}, {0, 2}])
    assert sets(M) == [{1, 2}, {1, 3}, {2, 3}]


@pytest.mark.parametrize("family, err", [
    ([], EmptyFamily),
    ([{0}, {0, 1}], UnequalCardinality),
    ([{0, 5}], ElementOutOfRange),
])
def test_validate_errors(family, err):
    with pytest.raises(err):
        validate_bases(4, family)


def test_ground_cap():
    with pytest.raises(GroundSetTooLarge):
        validate_bases(65, [{0}])
    with pytest.raises(GroundSetTooLarge):
        uniform(1, 65)
    assert uniform(1, 64).n == 64


def test_rank_zero_matroid():
    M = validate_bases(3, [set()])
    assert M.r == 0 and M.loops == 0b111 and rank(M, 0b111) == 0


# ------------------------------------------------------------ rank

def test_rank_examples(u24, par34):
    assert rank(u24, {0}) == 1
    assert rank(u24, {0, 1, 2}) == 2
    assert rank(par34, {2, 3}) == 1


def test_rank_out_of_range(u24):
    with pytest.raises(ElementOutOfRange):
        rank(u24, {4})


def test_rank_table_matches_oracle(par34):
    fam = oracles.fam(elements(b) for b in par34.bases)
    for a in range(16):
        assert par34.rank_table[a] == oracles.rank(fam, set(elements(a)))


# ------------------------------------------------------------ constructors

def test_uniform():
    assert len(uniform(2, 4).bases) == 6
    assert uniform(0, 3).bases == (0,)
    with pytest.raises(InvalidRank):
        uniform(3, 2)


def test_graphic_k4():
    K4 = graphic(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    assert (K4.r, len(K4.bases)) == (3, 16)


def test_graphic_loops_and_multiedges():
    M = graphic(2, [(1, 1), (1, 2), (1, 2)])
    assert M.loops == 0b001
    assert sets(M) == [{2}, {3}]
    with pytest.raises(EmptyGraph):
        graphic(0, [])


def test_graphic_spanning_forest_counts():
    # spanning trees of K_{2,3}: 12; a forest of two triangles: 3 * 3
    K23 = graphic(5, [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
    assert len(K23.bases) == 12
    two = graphic(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
    assert (two.r, len(two.bases)) == (4, 9)


def test_linear_gf2_triangle():
    M = linear_gf([[1, 0, 1], [0, 1, 1]], 2)
    assert M == uniform(2, 3)


def test_linear_gf_depends_on_field():
    # columns e1, e2, e1+e2, e1+2e2: over GF(3) all pairs independent
    A = [[1, 0, 1, 1], [0, 1, 1, 2]]
    assert linear_gf(A, 3) == uniform(2, 4)
    assert len(linear_gf([[1, 0, 1, 1], [0, 1, 1, 0]], 2).bases) == 5


def test_linear_gf_bad_modulus():
    with pytest.raises(NonPrimeModulus):
        linear_gf([[1, 0]], 4)


def test_truncate():
    assert truncate(uniform(3, 5)) == uniform(2, 5)


# ------------------------------------------------------------ minors

def test_minor_examples(u24, par34):
    assert minor(u24, delete={3})[0] == uniform(2, 3)
    M, labels = minor(u24, contract={0})
    assert M == uniform(1, 3) and labels == (1, 2, 3)
    M, labels = minor(par34, contract={2})
    assert [tuple(labels[e] + 1 for e in elements(b)) for b in M.bases] == [(1,), (2,)]
    assert M.r == 1


def test_minor_errors(u24, par34):
    with pytest.raises(OverlappingArguments):
        minor(u24, delete={0}, contract={0})
    with pytest.raises(DependentContraction):
        minor(par34, contract={2, 3})
    with pytest.raises(RankCollapse):
        minor(par34, delete={0, 1})


def test_minor_commutes(par34):
    a, _ = minor(par34, delete={0}, contract={2})
    b, lab = minor(par34, contract={2})
    c, _ = minor(b, delete={lab.index(0)})
    assert a == c


def test_restrict_drops_rank(par34):
    M, labels = restrict(par34, {2, 3})
    assert (M.r, len(M.bases), labels) == (1, 2, (2, 3))


# ------------------------------------------------------------ blow-ups and morphisms

def test_blow_up_examples():
    big, psi = blow_up(uniform(1, 1), 1, 3)
    assert big == uniform(1, 3)
    big, psi = blow_up(uniform(2, 3), 0b111, 2)
    assert (big.n, big.r, len(big.bases)) == (6, 2, 12)
    assert psi.verify()
    M = uniform(2, 4)
    same, psi = blow_up(M, 0b1010, 1)
    assert same == M and psi.mapping == (0, 1, 2, 3)


@pytest.mark.parametrize("M", [uniform(1, 2), uniform(2, 2), validate_bases(2, [{0}])])
def test_blow_up_composes(M):
    from matx.catalog import canonical_form
    full = (1 << M.n) - 1
    a = blow_up(M, full, 2)[0]
    twice = blow_up(a, (1 << a.n) - 1, 2)[0]
    once = blow_up(M, full, 4)[0]
    assert canonical_form(twice)[0] == canonical_form(once)[0]


def test_verify_morphism_examples(u24, par34):
    U22 = uniform(2, 2)
    psi = (0, 1, 0, 1)  # {1,3} -> a, {2,4} -> b
    assert verify_morphism(u24, U22, psi)
    chk = verify_morphism(par34, U22, psi)
    assert not chk and fmt_set(chk.choice) == "{3,4}"


def test_morphism_validation(u24):
    with pytest.raises(Exception):
        MatroidMorphism(u24, uniform(2, 2), (0, 1, 0))
    with pytest.raises(ElementOutOfRange):
        MatroidMorphism(u24, uniform(2, 2), (0, 1, 0, 2))


# ------------------------------------------------------------ symmetric exchange

def test_symmetric_exchange_examples(u24, par34):
    got = symmetric_exchange_partners(u24, {0, 1}, {2, 3}, 0)
    assert [w.f + 1 for w in got] == [3, 4]
    got = symmetric_exchange_partners(par34, {0, 2}, {1, 3}, 2)
    assert [w.f + 1 for w in got] == [4]
    U = uniform(1, 5)
    assert [w.f for w in symmetric_exchange_partners(U, {1}, {3}, 1)] == [3]


def test_symmetric_exchange_witness_preserves_union(par34):
    for w in symmetric_exchange_partners(par34, {0, 2}, {1, 3}, 2):
        assert w.b1 | w.b2 == 0b1111 and w.b1 & w.b2 == 0


def test_symmetric_exchange_errors(u24):
    with pytest.raises(NotABasis):
        symmetric_exchange_partners(u24, {0}, {2, 3}, 0)
    corrupt = Matroid._trusted(4, [0b0011, 0b1100])
    with pytest.raises(ElementNotExchangeable):
        symmetric_exchange_partners(corrupt, 0b0011, 0b1100, 0)


def test_symmetric_exchange_violation_detects_corruption():
    assert symmetric_exchange_violation(uniform(2, 5)) is None
    bad = Matroid._trusted(4, [0b0011, 0b1100])
    assert symmetric_exchange_violation(bad) == (0b0011, 0b1100, 0)


def test_to_mask_roundtrip():
    assert to_mask({0, 3}, 4) == 0b1001
    assert elements(0b1001) == (0, 3)
    with pytest.raises(ElementOutOfRange):
        to_mask({4}, 4)
