import io
import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apfree.codec import (
    APFreeSet,
    decode,
    decode_all,
    encode,
    encode_all,
    read_set,
    set_from_json_dict,
)
from apfree.errors import CoordOutOfRange, DigitOutOfRange, SetFormatError
from apfree.lattice import lattice_vector
from apfree.numeric import ConstructionParams


@st.composite
def cube_and_vector(draw):
    k = draw(st.integers(min_value=1, max_value=8))
    y = draw(st.integers(min_value=2, max_value=40))
    coords = tuple(
        draw(st.integers(min_value=0, max_value=y - 1)) for _ in range(k)
    )
    return k, y, coords


class TestEncode:
    def test_examples(self):
        assert encode((0, 1), 3) == 6
        assert encode((0, 0, 0, 0), 5) == 0
        assert encode((1, 0, 0), 2) == 1
        assert encode((0, 0, 1), 2) == 16

    def test_accepts_lattice_vectors(self):
        assert encode(lattice_vector((2, 1)), 3) == 8

    def test_rejects_out_of_range(self):
        with pytest.raises(CoordOutOfRange):
            encode((3,), 3)
        with pytest.raises(CoordOutOfRange):
            encode((-1, 0), 3)


class TestDecode:
    def test_examples(self):
        assert decode(6, 2, 3).coords == (0, 1)
        assert decode(0, 3, 4).coords == (0, 0, 0)
        # 7 in base 6 is (1, 1): both digits below y = 3
        assert decode(7, 2, 3).coords == (1, 1)

    def test_rejects_large_digit(self):
        with pytest.raises(DigitOutOfRange):
            decode(3, 2, 3)

    def test_rejects_too_many_digits(self):
        with pytest.raises(DigitOutOfRange):
            decode(6**2, 2, 3)

    def test_rejects_negative(self):
        with pytest.raises(DigitOutOfRange):
            decode(-1, 2, 3)

    @given(cube_and_vector())
    @settings(max_examples=200)
    def test_round_trip(self, kyv):
        k, y, coords = kyv
        assert decode(encode(coords, y), k, y).coords == coords

    def test_exhaustive_small_cubes(self):
        for k, y in [(2, 3), (3, 2), (2, 4), (4, 3)]:
            for v in itertools.product(range(y), repeat=k):
                assert decode(encode(v, y), k, y).coords == v

    def test_bulk_matches_scalar(self):
        rng = random.Random(7)
        for k, y in [(3, 5), (12, 9), (40, 3)]:
            vs = [
                tuple(rng.randrange(y) for _ in range(k)) for _ in range(200)
            ]
            codes = encode_all(vs, y, k)
            assert codes == [encode(v, y) for v in vs]
            assert [w.coords for w in decode_all(codes, k, y)] == vs


class TestMidpointTransport:
    def test_exhaustive_triples(self):
        for k, y in [(2, 3), (3, 2), (2, 4)]:
            cube = list(itertools.product(range(y), repeat=k))
            codes = {v: encode(v, y) for v in cube}
            code_set = set(codes.values())
            for u, w in itertools.product(cube, repeat=2):
                s = codes[u] + codes[w]
                if s % 2:
                    continue
                mid_code = s // 2
                if mid_code in code_set:
                    mid = decode(mid_code, k, y)
                    assert all(
                        2 * c == a + b for c, a, b in zip(mid.coords, u, w)
                    )

    def test_random_triples_on_larger_cubes(self):
        rng = random.Random(2024)
        for k, y in [(6, 7), (9, 4), (5, 12)]:
            for _ in range(3000):
                u = tuple(rng.randrange(y) for _ in range(k))
                w = tuple(rng.randrange(y) for _ in range(k))
                s = encode(u, y) + encode(w, y)
                if s % 2:
                    continue
                try:
                    mid = decode(s // 2, k, y)
                except DigitOutOfRange:
                    continue
                assert all(2 * c == a + b for c, a, b in zip(mid.coords, u, w))


class TestAPFreeSet:
    def test_validation(self):
        APFreeSet(n=10, elements=(1, 2, 10), method="exact")
        with pytest.raises(ValueError):
            APFreeSet(n=10, elements=(2, 1), method="exact")
        with pytest.raises(ValueError):
            APFreeSet(n=10, elements=(0, 1), method="exact")
        with pytest.raises(ValueError):
            APFreeSet(n=10, elements=(1, 11), method="exact")
        with pytest.raises(ValueError):
            APFreeSet(n=10, elements=(1, 1), method="exact")
        with pytest.raises(ValueError):
            APFreeSet(n=10, elements=(1,), method="magic")

    def test_json_round_trip(self):
        params = ConstructionParams(n=36, k=2, y=3)
        s = APFreeSet(n=36, elements=(1, 6), method="behrend", params_echo=params)
        buf = io.StringIO()
        s.write_json(buf, reproducible=True)
        text = buf.getvalue()
        assert text.endswith("\n")
        doc = json.loads(text)
        assert doc["schema"] == "apfree-set/1"
        assert doc["n"] == "36"
        assert doc["elements"] == ["1", "6"]
        assert doc["params"]["n_effective"] == "36"
        assert "created" not in doc
        loaded = read_set(io.StringIO(text))
        assert loaded.elements == (1, 6) and loaded.n == 36

    def test_timestamp_only_when_not_reproducible(self):
        s = APFreeSet(n=10, elements=(1, 2), method="exact")
        assert "created" in s.to_json_dict(reproducible=False)
        assert "created" not in s.to_json_dict(reproducible=True)

    def test_large_elements_survive_transport(self):
        big = 2**200
        s = APFreeSet(n=big + 1, elements=(1, big), method="external")
        buf = io.StringIO()
        s.write_json(buf, reproducible=True)
        assert read_set(io.StringIO(buf.getvalue())).elements == (1, big)

    def test_csv_export(self):
        s = APFreeSet(n=36, elements=(1, 6), method="behrend")
        buf = io.StringIO()
        s.write_csv(buf)
        assert buf.getvalue() == "index,element\r\n0,1\r\n1,6\r\n"

    def test_read_rejects_wrong_schema(self):
        with pytest.raises(SetFormatError):
            set_from_json_dict({"schema": "other/9", "n": "5", "elements": []})
        with pytest.raises(SetFormatError):
            read_set(io.StringIO("not json"))
        with pytest.raises(SetFormatError):
            set_from_json_dict(
                {"schema": "apfree-set/1", "n": "5", "elements": ["2", "1"]}
            )

    def test_density(self):
        s = APFreeSet(n=36, elements=(1, 6), method="behrend")
        assert s.density == pytest.approx(2 / 36)
