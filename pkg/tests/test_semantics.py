import numpy as np
import pytest

from fo3pdl.harness import DEFAULT_SIGNATURE, random_fo
from fo3pdl.semantics import (
    Batch,
    Evaluator,
    UnboundVariable,
    UnknownName,
    assignments,
    eval_fo,
    eval_path,
    eval_pbc,
    eval_state,
    fo_equiv_on,
)
from fo3pdl.structures import FiniteStructure, random_structure
from fo3pdl.syntax import PAtom, fo, parse_fo, parse_path, parse_state, pdl

M0 = FiniteStructure(4, {"P": {1, 3}, "Q": {2}}, {"a": {(0, 2), (1, 2), (1, 3)}})
M1 = FiniteStructure(4, {}, {"a": {(1, 2), (2, 3)}})


def test_eval_fo_examples():
    f = parse_fo("exists y. (x <= y & P(y))")
    assert eval_fo(M0, f, {"x": 3})
    assert eval_fo(M0, f, {"x": 0})
    g = parse_fo("forall y. x <= y")
    assert eval_fo(M0, g, {"x": 0})
    assert not eval_fo(M0, g, {"x": 1})


def test_eval_state_examples():
    assert eval_state(M0, parse_state("<a>Q")) == {0, 1}
    assert eval_state(M0, parse_state("loop(le)")) == {0, 1, 2, 3}
    assert eval_state(M0, parse_state("!P")) == {0, 2}


def test_eval_path_examples():
    assert eval_path(M1, parse_path("c3(a)")).pairs == {(1, 3)}
    assert eval_path(M1, parse_path("c2(a)")).pairs == {(2, 2)}
    assert eval_path(M1, parse_path("c1(a)")).pairs == set()
    assert eval_path(M1, parse_path("c4(a)")).pairs == set()
    assert eval_path(M0, parse_path("a . le")).pairs == {(0, 2), (0, 3), (1, 2), (1, 3)}
    assert eval_path(M0, parse_path("test(true)")).pairs == {(i, i) for i in range(4)}


def test_path_operators_against_sets():
    a = M0.relation_val["a"].pairs
    le = {(i, j) for i in range(4) for j in range(4) if i <= j}
    full = {(i, j) for i in range(4) for j in range(4)}
    assert eval_path(M0, parse_path("inv(a)")).pairs == {(j, i) for i, j in a}
    assert eval_path(M0, parse_path("a | le")).pairs == a | le
    assert eval_path(M0, parse_path("a & inv(le)")).pairs == a - le | {p for p in a if p[0] == p[1]}
    assert eval_path(M0, parse_path("comp(a)")).pairs == full - a
    assert eval_path(M0, parse_path("test(P) . a")).pairs == {(1, 2), (1, 3)}


def test_fo_equiv_on_examples():
    assert fo_equiv_on(M0, parse_fo("P(x)"), parse_fo("Q(x)")) == {"x": 1}
    le = parse_fo("x <= y")
    alt = parse_fo("!(y <= x & !(y = x))")
    for m in (M0, M1, FiniteStructure(1), FiniteStructure(0)):
        assert fo_equiv_on(m, le, alt) is None
    # a sentence has the single empty assignment
    assert fo_equiv_on(M0, parse_fo("exists x. P(x)"), parse_fo("forall x. P(x)")) == {}


def test_unbound_and_unknown():
    with pytest.raises(UnboundVariable):
        eval_fo(M0, parse_fo("P(x)"), {})
    with pytest.raises(UnknownName):
        eval_fo(M0, parse_fo("R(x)"), {"x": 0})
    with pytest.raises(UnknownName):
        eval_state(M0, parse_state("<b>P"))


def test_empty_domain():
    m = FiniteStructure(0, {"P": set()})
    assert eval_fo(m, parse_fo("forall x. P(x)"), {})
    assert not eval_fo(m, parse_fo("exists x. x = x"), {})


def test_table_matches_tarski():
    rng = np.random.default_rng(4)
    for i in range(200):
        n = int(rng.integers(1, 5))
        m = random_structure(rng, n, DEFAULT_SIGNATURE)
        f = random_fo(rng, 3)
        variables = sorted(fo.free_vars(f))
        tab = Evaluator(Batch.of([m])).fo_table(f, variables)[0]
        for nu in assignments(variables, n):
            assert tab[tuple(nu[v] for v in variables)] == eval_fo(m, f, nu), (i, f, nu)


def test_table_extra_variables_broadcast():
    tab = Evaluator(Batch.of([M0])).fo_table(parse_fo("P(x)"), ["x", "y"])
    assert tab.shape == (1, 4, 4)
    assert (tab[0, 1] == True).all() and (tab[0, 0] == False).all()  # noqa: E712


def test_table_unrequested_free_variable():
    with pytest.raises(UnboundVariable):
        Evaluator(Batch.of([M0])).fo_table(parse_fo("x <= y"), ["x"])


def test_pbc_eval_agrees_with_table():
    p = PAtom(parse_path("a . le"), "x", "y")
    tab = Evaluator(Batch.of([M0])).pbc_table(p, ["x", "y"])[0]
    for nu in assignments(["x", "y"], 4):
        assert tab[nu["x"], nu["y"]] == eval_pbc(M0, p, nu)


def test_batch_requires_equal_sizes():
    with pytest.raises(ValueError):
        Batch.of([M0, FiniteStructure(3, {"P": set(), "Q": set()}, {"a": set()})])


def test_loop_is_diagonal():
    s = pdl.Loop(parse_path("a . inv(a)"))
    assert eval_state(M0, s) == {0, 1}
