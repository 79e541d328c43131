import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ramseyfin.errors import ParseError
from ramseyfin.formats import format_cube
from ramseyfin.hjspace import (PHJPoint, embedded_pattern, flatten, gamma_embed, gammas, hj_coloring, hj_number,
                               hj_search, parse_word, phj_coloring, phj_oplus, phj_search, point_index,
                               substitute, unflatten, variable_words, N_coords)
from ramseyfin.search import Context, hj_witness, phj_witness


def test_word_roundtrip_and_substitute():
    assert substitute(parse_word("1v2v"), 3) == (1, 3, 2, 3)
    assert substitute(parse_word("v"), 1) == (1,)
    assert substitute(parse_word("vv1"), 2) == (2, 2, 1)
    with pytest.raises(ValueError):
        substitute(parse_word("12"), 1)
    with pytest.raises(ParseError):
        parse_word("1x")


def test_variable_word_count():
    for t in range(1, 4):
        for N in range(1, 4):
            assert len(list(variable_words(t, N))) == (t + 1) ** N - t ** N


def hj_search_oracle(colors, t, N):
    for w in itertools.product(range(t + 1), repeat=N):
        if 0 not in w:
            continue
        pts = [tuple(a if c == 0 else c for c in w) for a in range(1, t + 1)]
        if len({colors[point_index(p, t)] for p in pts}) == 1:
            return w
    return None


class TestHJSearch:
    def test_examples(self):
        cube = hj_coloring(2, 2, 2, colors=(0, 1, 1, 0))
        assert hj_search(cube) == parse_word("vv")
        assert hj_search(hj_coloring(3, 2, 1, colors=(0,) * 9)) == (0, 0)
        assert hj_search(hj_coloring(2, 1, 2, colors=(0, 1))) is None

    @settings(max_examples=60)
    @given(st.integers(2, 3), st.integers(1, 3), st.integers(1, 3), st.randoms(use_true_random=False))
    def test_against_oracle(self, t, N, r, rnd):
        colors = tuple(rnd.randrange(r) for _ in range(t ** N))
        cube = hj_coloring(t, N, r, colors=colors)
        assert hj_search(cube) == hj_search_oracle(colors, t, N)

    def test_witness_roundtrip(self, rt):
        cube = hj_coloring(3, 2, 2, colors=(0, 1, 0, 1, 1, 1, 0, 0, 1))
        rt(hj_witness(cube, hj_search(cube)), Context(cube=cube), {"cube": format_cube(cube)})


def hj_number_oracle(r, t, n_max):
    for N in range(1, n_max + 1):
        words = [w for w in itertools.product(range(t + 1), repeat=N) if 0 in w]
        lines = [[point_index(tuple(a if c == 0 else c for c in w), t) for a in range(1, t + 1)] for w in words]
        if all(any(len({col[i] for i in ln}) == 1 for ln in lines)
               for col in itertools.product(range(r), repeat=t ** N)):
            return N
    return None


class TestHJNumber:
    def test_examples(self):
        assert hj_number(2, 2, 4).N == 2
        assert hj_number(1, 5, 3).N == 1
        assert hj_number(3, 1, 3).N == 1

    @pytest.mark.parametrize("r,t,n_max", [(2, 2, 3), (3, 2, 3), (2, 3, 1)])
    def test_against_oracle(self, r, t, n_max):
        res = hj_number(r, t, n_max)
        assert res.N == hj_number_oracle(r, t, n_max)
        if res.avoiding is not None:
            # the certificate really avoids every line
            N = res.avoiding_N
            assert hj_search(hj_coloring(t, N, r, colors=res.avoiding)) is None

    def test_workers_agree(self):
        assert hj_number(2, 2, 4, workers=2) == hj_number(2, 2, 4)


class TestPHJ:
    def test_oplus_examples(self):
        a = PHJPoint(2, 2, ((1, 1),))
        assert phj_oplus(a, {2}, (2,)).levels == ((1, 2),)
        a = PHJPoint(2, 2, ((1, 1), (1, 1, 1, 1)))
        assert phj_oplus(a, {1}, (2, 2)).levels == ((2, 1), (2, 1, 1, 1))
        b = phj_oplus(phj_oplus(a, {1, 2}, (2, 1)), {1, 2}, (1, 2))
        assert b == phj_oplus(a, {1, 2}, (1, 2))

    def test_embed_examples(self):
        assert gamma_embed(PHJPoint(2, 2, ((2, 1),)), (1, 2)) == 4
        assert gamma_embed(PHJPoint(2, 2, ((1, 1), (1, 1, 1, 1))), (1, 2)) == 12
        assert gamma_embed(((0, 0), (0, 0, 0, 0)), (1, 2)) == 0
        ones = PHJPoint(3, 2, ((1, 1), (1, 1, 1, 1)))
        assert embedded_pattern(ones, {1, 2}, (1, 2), (2, 2)) == (0, 24)
        assert embedded_pattern(ones, {1}, (1, 2), (2, 3)) == (10, 15)

    def test_oplus_identity_when_values_already_there(self):
        a = PHJPoint(3, 2, ((2, 3), (2, 1, 3, 1)))
        base, value = embedded_pattern(a, {1}, (3, 4), (2, 2))
        assert value == gamma_embed(a, (3, 4))

    def test_flatten_roundtrip(self):
        a = PHJPoint(3, 2, ((1, 2), (3, 1, 2, 2)))
        assert unflatten(flatten(a.levels), 2, 2) == a.levels

    @settings(max_examples=200)
    @given(st.integers(1, 3), st.integers(1, 2), st.integers(1, 3), st.data())
    def test_embedding_identity(self, N, d, q, data):
        flat = data.draw(st.lists(st.integers(1, q), min_size=N_coords(N, d), max_size=N_coords(N, d)))
        a = PHJPoint(q, N, unflatten(flat, N, d))
        gamma = data.draw(st.sampled_from(list(gammas(N))))
        cs = data.draw(st.lists(st.integers(1, q), min_size=d, max_size=d))
        xs = data.draw(st.lists(st.integers(1, 6), min_size=N, max_size=N))
        base, value = embedded_pattern(a, gamma, xs, cs)
        s = sum(xs[i - 1] for i in gamma)
        assert value == base + sum(c * s ** j for j, c in enumerate(cs, start=1))


def phj_search_oracle(colors, q, N, d):
    coords = N_coords(N, d)
    for gamma in gammas(N):
        for flat in itertools.product(range(1, q + 1), repeat=coords):
            a = PHJPoint(q, N, unflatten(flat, N, d))
            cs = {colors[point_index(phj_oplus(a, gamma, xs).flat(), q)]
                  for xs in itertools.product(range(1, q + 1), repeat=d)}
            if len(cs) == 1:
                return a, tuple(gamma)
    return None


class TestPHJSearch:
    def test_examples(self):
        const = phj_coloring(2, 2, 1, 1, colors=(0,) * 4)
        a, gamma = phj_search(const)
        assert gamma == (1,) and a.levels == ((1, 1),)
        assert phj_search(phj_coloring(2, 1, 1, 2, colors=(0, 1))) is None
        assert phj_search(phj_coloring(2, 1, 1, 2, colors=(1, 1))) is not None
        by_first = phj_coloring(2, 2, 1, 2, colors=(0, 0, 1, 1))
        a, gamma = phj_search(by_first)
        assert gamma == (2,) and a.levels == ((1, 1),)

    @settings(max_examples=40)
    @given(st.sampled_from([(2, 1, 1), (2, 2, 1), (3, 2, 1), (2, 1, 2), (2, 3, 1)]), st.integers(2, 3),
           st.randoms(use_true_random=False))
    def test_against_oracle(self, shape, r, rnd):
        q, N, d = shape
        colors = tuple(rnd.randrange(r) for _ in range(q ** N_coords(N, d)))
        assert phj_search(phj_coloring(q, N, d, r, colors=colors)) == phj_search_oracle(colors, q, N, d)

    def test_witness_roundtrip(self, rt):
        rnd = random.Random(5)
        for _ in range(5):
            colors = tuple(rnd.randrange(2) for _ in range(2 ** 6))
            cube = phj_coloring(2, 2, 2, 2, colors=colors)
            found = phj_search(cube)
            if found is None:
                continue
            rt(phj_witness(cube, *found), Context(cube=cube), {"cube": format_cube(cube)})
