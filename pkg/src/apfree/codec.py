"""The radix-2y digit map and serialization of progression-free sets.

A cube vector v = (v_1, ..., v_k) with digits in [0, y-1] encodes to
v_hat = sum_i v_{i+1} * (2y)^i.  Because every digit stays strictly below
half the radix, addition of two codes is carry-free, which is what makes
the map transport midpoints: if v_hat = (u_hat + w_hat)/2 for cube vectors
then v = (u + w)/2 coordinate by coordinate.

Sets are interchanged as JSON (schema "apfree-set/1") with elements as
decimal strings, since codes routinely exceed 64 bits.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import CoordOutOfRange, DigitOutOfRange, SetFormatError
from .lattice import LatticeVector, lattice_vector
from .numeric import ConstructionParams

SCHEMA = "apfree-set/1"

_METHODS = ("behrend", "elkin", "exact", "external")


def _coords_of(v) -> Sequence[int]:
    return v.coords if hasattr(v, "coords") else v


def encode(v, y: int) -> int:
    """Evaluate the coordinates of v as little-endian base-(2y) digits."""
    coords = _coords_of(v)
    radix = 2 * y
    code = 0
    power = 1
    for c in coords:
        if not 0 <= c <= y - 1:
            raise CoordOutOfRange(f"coordinate {c} outside [0, {y - 1}]")
        code += c * power
        power *= radix
    return code


def decode(x: int, k: int, y: int) -> LatticeVector:
    """Invert encode; rejects integers that are not codes of cube vectors."""
    if x < 0:
        raise DigitOutOfRange(f"{x} is negative")
    radix = 2 * y
    digits = []
    rem = x
    for _ in range(k):
        rem, d = divmod(rem, radix)
        if d >= y:
            raise DigitOutOfRange(f"digit {d} of {x} in base {radix} is >= y = {y}")
        digits.append(d)
    if rem != 0:
        raise DigitOutOfRange(f"{x} has more than {k} base-{radix} digits")
    return lattice_vector(tuple(digits))


def encode_array(coords: np.ndarray, y: int) -> np.ndarray:
    """Encode an (N, k) int array of cube vectors to an (N,) int64 code array.

    Only valid while (2y)^k fits in int64; encode() covers the general case.
    """
    coords = np.asarray(coords, dtype=np.int64)
    n, k = coords.shape
    radix = 2 * y
    if radix**k >= 2**62:
        raise ValueError(f"(2y)^k = {radix**k} does not fit int64; use encode()")
    if n and (coords.min() < 0 or coords.max() > y - 1):
        raise CoordOutOfRange(f"coordinates outside [0, {y - 1}]")
    powers = radix ** np.arange(k, dtype=np.int64)
    return coords @ powers


def decode_array(codes: np.ndarray, k: int, y: int) -> np.ndarray:
    """Decode an (N,) int64 code array back to (N, k) cube vectors."""
    rem = np.asarray(codes, dtype=np.int64).copy()
    radix = 2 * y
    if len(rem) and rem.min() < 0:
        raise DigitOutOfRange("negative values cannot be cube vector codes")
    digits = np.empty((len(rem), k), dtype=np.int64)
    for i in range(k):
        rem, digits[:, i] = np.divmod(rem, radix)
    bad = (rem != 0) | (digits >= y).any(axis=1)
    if bad.any():
        culprit = int(np.asarray(codes)[int(np.flatnonzero(bad)[0])])
        raise DigitOutOfRange(f"{culprit} is not the code of a cube vector")
    return digits


def encode_all(vectors: Iterable, y: int, k: int | None = None) -> list[int]:
    """Bulk encode a list of vectors; vectorizes whenever (2y)^k fits int64."""
    coords_list = [tuple(_coords_of(v)) for v in vectors]
    if not coords_list:
        return []
    k = len(coords_list[0]) if k is None else k
    if (2 * y) ** k < 2**62:
        return [int(c) for c in encode_array(np.asarray(coords_list), y)]
    return [encode(c, y) for c in coords_list]


def decode_all(codes: Sequence[int], k: int, y: int) -> list[LatticeVector]:
    """Bulk decode; mirrors encode_all."""
    if codes and 0 <= min(codes) and max(codes) < 2**62:
        digits = decode_array(np.asarray(codes, dtype=np.int64), k, y)
        return [lattice_vector(tuple(int(d) for d in row)) for row in digits]
    return [decode(x, k, y) for x in codes]


@dataclass(frozen=True)
class APFreeSet:
    """A progression-free set of integers in [1, n] with provenance.

    elements must be strictly increasing.  method records how the set was
    produced; params_echo carries the construction parameters when known.
    """

    n: int
    elements: tuple[int, ...]
    method: str
    params_echo: ConstructionParams | None = None

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        prev = 0
        for e in self.elements:
            if e <= prev:
                raise ValueError("elements must be strictly increasing and >= 1")
            prev = e
        if self.elements and self.elements[-1] > self.n:
            raise ValueError(
                f"element {self.elements[-1]} exceeds the interval bound {self.n}"
            )

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def density(self) -> float:
        return self.size / self.n

    def to_json_dict(self, reproducible: bool = False) -> dict:
        p = self.params_echo
        doc = {
            "schema": SCHEMA,
            "n": str(self.n),
            "method": self.method,
            "k": p.k if p else 0,
            "y": p.y if p else 0,
            "params": {
                "a": p.a if p else None,
                "epsilon": p.epsilon if p else None,
                "g": p.g if p else None,
                "n_effective": str(p.n_effective) if p else None,
            },
            "size": self.size,
            "elements": [str(e) for e in self.elements],
        }
        if not reproducible:
            doc["created"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return doc

    def write_json(self, fh: IO[str], reproducible: bool = False) -> None:
        json.dump(self.to_json_dict(reproducible), fh, indent=2)
        fh.write("\n")

    def write_csv(self, fh: IO[str]) -> None:
        writer = csv.writer(fh)
        writer.writerow(["index", "element"])
        for i, e in enumerate(self.elements):
            writer.writerow([i, e])


def set_from_json_dict(doc: dict) -> APFreeSet:
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SetFormatError(f"missing or unsupported schema (expected {SCHEMA!r})")
    try:
        n = int(doc["n"])
        elements = tuple(int(e) for e in doc["elements"])
        method = doc.get("method", "external")
    except (KeyError, TypeError, ValueError) as exc:
        raise SetFormatError(f"malformed apfree-set document: {exc}") from exc
    try:
        return APFreeSet(n=n, elements=elements, method=method)
    except ValueError as exc:
        raise SetFormatError(str(exc)) from exc


def read_set(fh: IO[str]) -> APFreeSet:
    try:
        doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SetFormatError(f"not valid JSON: {exc}") from exc
    return set_from_json_dict(doc)
