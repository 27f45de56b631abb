"""Sbox views of the quasigroup layer and their DDT / LAT tables.

Two views of the confusion layer exist: each table row is a 4-to-4
permutation S_l(x) = l*x (one per leader), and the whole binary operation
is an 8-to-4 map S(l, x) = l*x whose input packs the leader in the high
nibble.  LAT entries are stored as signed bias counts,

    lat[a][b] = #{ inputs x : parity(a & x) == parity(b & S(x)) } - 2^(m-1)

for an m-bit input space, so the zero-mask entry is +2^(m-1) and a
uniformly balanced approximation scores 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quasigroup import Quasigroup

ROW = "row"
WIDE = "wide"


@dataclass(frozen=True)
class SboxView:
    kind: str
    input_bits: int
    output_bits: int
    table: tuple[int, ...]
    leader: int | None = None

    def __post_init__(self):
        if len(self.table) != 1 << self.input_bits:
            raise ValueError("table length does not match input_bits")


def row_sbox(q: Quasigroup, leader: int) -> SboxView:
    """The 4x4 Sbox S_l: x -> l*x (a row of the Latin square)."""
    return SboxView(ROW, 4, 4, q.row(leader), leader)


def wide_sbox(q: Quasigroup) -> SboxView:
    """The 8x4 Sbox S: (l, x) -> l*x with input (l << 4) | x."""
    table = tuple(q.mul_table[l][x] for l in range(16) for x in range(16))
    return SboxView(WIDE, 8, 4, table)


@dataclass(frozen=True)
class Ddt:
    """Difference distribution: counts[din][dout] over the full input space."""

    counts: np.ndarray

    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def max_nonzero(self) -> int:
        """Largest entry over nonzero input differences."""
        return int(self.counts[1:].max())


@dataclass(frozen=True)
class Lat:
    """Linear approximation biases; see module docs for the sign convention."""

    bias: np.ndarray

    def max_abs_nonzero(self) -> int:
        """Largest |bias| over pairs of masks that are not both zero."""
        b = np.abs(self.bias).copy()
        b[0, 0] = 0
        return int(b.max())


def build_ddt(s: SboxView) -> Ddt:
    size = 1 << s.input_bits
    table = np.array(s.table, dtype=np.int64)
    counts = np.zeros((size, 1 << s.output_bits), dtype=np.int64)
    x = np.arange(size)
    for din in range(size):
        dout = table[x] ^ table[x ^ din]
        counts[din] = np.bincount(dout, minlength=1 << s.output_bits)
    return Ddt(counts)


def build_lat(s: SboxView) -> Lat:
    size = 1 << s.input_bits
    osize = 1 << s.output_bits
    x = np.arange(size, dtype=np.uint32)
    sx = np.array(s.table, dtype=np.uint32)
    bias = np.zeros((size, osize), dtype=np.int64)
    for a in range(size):
        pa = np.bitwise_count(x & a) & 1
        for b in range(osize):
            pb = np.bitwise_count(sx & b) & 1
            bias[a, b] = int((pa == pb).sum()) - size // 2
    return Lat(bias)


def render_ddt(s: SboxView, ddt: Ddt) -> str:
    header = [
        f"# difference distribution table, {s.input_bits}x{s.output_bits} sbox"
        + (f" (leader {s.leader:x})" if s.leader is not None else ""),
        f"# rows: input difference; columns: output difference; row sum {1 << s.input_bits}",
        f"# max entry over nonzero input differences: {ddt.max_nonzero()}",
    ]
    body = [" ".join(f"{v:4d}" for v in row) for row in ddt.counts]
    return "\n".join(header + body) + "\n"


def render_lat(s: SboxView, lat: Lat) -> str:
    header = [
        f"# linear approximation table, {s.input_bits}x{s.output_bits} sbox"
        + (f" (leader {s.leader:x})" if s.leader is not None else ""),
        "# entries are signed bias counts: matches(a,b) - half the input space",
        f"# max |bias| over nonzero mask pairs: {lat.max_abs_nonzero()}",
    ]
    body = [" ".join(f"{v:5d}" for v in row) for row in lat.bias]
    return "\n".join(header + body) + "\n"
