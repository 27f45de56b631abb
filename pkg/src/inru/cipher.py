"""The 16-round 64-bit block cipher: packing, round functions, key schedule.

Packing convention, the single source of truth shared with the ANF and
analysis modules: a block is 16 nibbles m0..m15; byte j packs m(2j) in its
high half and m(2j+1) in its low half; bit i of the 64-bit string is bit
(i mod 4) from the top of nibble i//4 (so bit 0 is the most significant bit
of m0 and bit 63 the least significant bit of m15).

The key-schedule diversifier (``iv``) is a public 64-bit tweak, not a mode
IV; it defaults to all-zero.  Leaders inside the key schedule are read from
the frozen initial strings, never from the evolving state.

Reduced-round variants (``rounds`` < 16) run the encryption loop unchanged,
so they keep the diffusion step in their final round; only the literal
round 16 drops it.  Decryption of a reduced variant inverts the rounds it
actually ran.

All value types here are immutable and every function is pure, so blocks,
keys and round keys can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .quasigroup import INRU, Quasigroup

BLOCK_NIBBLES = 16
KEY_NIBBLES = 32
NUM_ROUNDS = 16
NUM_ROUND_KEYS = 17

# Per-nibble helpers for the xor-quasigroup diffusion layer (nibble bits
# counted most significant first): PREFIX_NIB[v] has bit k = v0^...^vk,
# SUFFIX_NIB[v] has bit k = vk^...^v3, PARITY_NIB[v] is the full parity.


def _build_scan_tables():
    prefix, suffix, parity = [], [], []
    for v in range(16):
        bits = [(v >> (3 - k)) & 1 for k in range(4)]
        p = [bits[0]]
        for k in range(1, 4):
            p.append(p[-1] ^ bits[k])
        s = [bits[3]]
        for k in range(2, -1, -1):
            s.append(s[-1] ^ bits[k])
        s.reverse()
        prefix.append(sum(b << (3 - k) for k, b in enumerate(p)))
        suffix.append(sum(b << (3 - k) for k, b in enumerate(s)))
        parity.append(p[-1])
    return tuple(prefix), tuple(suffix), tuple(parity)


PREFIX_NIB, SUFFIX_NIB, PARITY_NIB = _build_scan_tables()


def _check_nibbles(nibbles: Sequence[int], n: int, what: str) -> tuple[int, ...]:
    t = tuple(nibbles)
    if len(t) != n:
        raise ValueError(f"{what} needs exactly {n} nibbles, got {len(t)}")
    for v in t:
        if not 0 <= v <= 15:
            raise ValueError(f"{what} contains {v}, not a nibble")
    return t


@dataclass(frozen=True)
class Block:
    """A 64-bit cipher block as a tuple of 16 nibbles m0..m15."""

    nibbles: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "nibbles", _check_nibbles(self.nibbles, BLOCK_NIBBLES, "Block")
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "Block":
        if len(data) != 8:
            raise ValueError(f"Block needs 8 bytes, got {len(data)}")
        nibs = []
        for byte in data:
            nibs.append(byte >> 4)
            nibs.append(byte & 0xF)
        return cls(tuple(nibs))

    @classmethod
    def from_int(cls, value: int) -> "Block":
        if not 0 <= value < 1 << 64:
            raise ValueError("Block value outside 64 bits")
        return cls(tuple((value >> (60 - 4 * i)) & 0xF for i in range(16)))

    @classmethod
    def from_hex(cls, text: str) -> "Block":
        if len(text) != 16:
            raise ValueError(f"Block hex needs 16 digits, got {len(text)}")
        return cls(tuple(int(ch, 16) for ch in text))

    @classmethod
    def zero(cls) -> "Block":
        return cls((0,) * 16)

    def to_bytes(self) -> bytes:
        n = self.nibbles
        return bytes((n[2 * j] << 4) | n[2 * j + 1] for j in range(8))

    def to_int(self) -> int:
        v = 0
        for nib in self.nibbles:
            v = (v << 4) | nib
        return v

    def to_hex(self) -> str:
        return "".join(f"{v:x}" for v in self.nibbles)

    def bit(self, i: int) -> int:
        """Bit i of the 64-bit string (bit 0 = most significant bit of m0)."""
        return (self.nibbles[i >> 2] >> (3 - (i & 3))) & 1

    def flip_bit(self, i: int) -> "Block":
        nibs = list(self.nibbles)
        nibs[i >> 2] ^= 1 << (3 - (i & 3))
        return Block(tuple(nibs))

    def __xor__(self, other: "Block") -> "Block":
        return Block(tuple(a ^ b for a, b in zip(self.nibbles, other.nibbles)))


@dataclass(frozen=True)
class MasterKey:
    """128-bit master key, 32 nibbles k0..k31."""

    nibbles: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "nibbles", _check_nibbles(self.nibbles, KEY_NIBBLES, "MasterKey")
        )

    @classmethod
    def from_hex(cls, text: str) -> "MasterKey":
        if len(text) != 32:
            raise ValueError(f"key hex needs 32 digits, got {len(text)}")
        return cls(tuple(int(ch, 16) for ch in text))

    @classmethod
    def zero(cls) -> "MasterKey":
        return cls((0,) * 32)

    def to_hex(self) -> str:
        return "".join(f"{v:x}" for v in self.nibbles)

    def flip_bit(self, i: int) -> "MasterKey":
        nibs = list(self.nibbles)
        nibs[i >> 2] ^= 1 << (3 - (i & 3))
        return MasterKey(tuple(nibs))


@dataclass(frozen=True)
class Diversifier:
    """64-bit public key-schedule tweak v0..v15 (the key-mixing ``iv``)."""

    nibbles: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "nibbles", _check_nibbles(self.nibbles, 16, "Diversifier")
        )

    @classmethod
    def from_hex(cls, text: str) -> "Diversifier":
        if len(text) != 16:
            raise ValueError(f"iv hex needs 16 digits, got {len(text)}")
        return cls(tuple(int(ch, 16) for ch in text))

    @classmethod
    def zero(cls) -> "Diversifier":
        return cls((0,) * 16)

    def to_hex(self) -> str:
        return "".join(f"{v:x}" for v in self.nibbles)


@dataclass(frozen=True)
class MixedKeyState:
    """Output of key mixing: 64 nibbles a0..a63."""

    nibbles: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "nibbles", _check_nibbles(self.nibbles, 64, "MixedKeyState")
        )

    def to_hex(self) -> str:
        return "".join(f"{v:x}" for v in self.nibbles)


@dataclass(frozen=True)
class RoundKeys:
    """The 17 64-bit round keys rk0..rk16."""

    keys: tuple[Block, ...]

    def __post_init__(self):
        if len(self.keys) != NUM_ROUND_KEYS:
            raise ValueError(f"need {NUM_ROUND_KEYS} round keys, got {len(self.keys)}")

    def __getitem__(self, i: int) -> Block:
        return self.keys[i]

    @classmethod
    def from_hex(cls, texts: Iterable[str]) -> "RoundKeys":
        return cls(tuple(Block.from_hex(t) for t in texts))


# -- round primitives --------------------------------------------------------


def kxor(k: Block, a: Block) -> Block:
    """Bitwise xor of two blocks."""
    return k ^ a


def _diffuse_left(nibs: Sequence[int]) -> tuple[int, ...]:
    out = []
    carry = 1  # leader bit
    for v in nibs:
        out.append(PREFIX_NIB[v] ^ (0xF if carry else 0))
        carry ^= PARITY_NIB[v]
    return tuple(out)


def _diffuse_right(nibs: Sequence[int]) -> tuple[int, ...]:
    out = [0] * 16
    carry = 0  # leader bit
    for i in range(15, -1, -1):
        v = nibs[i]
        out[i] = SUFFIX_NIB[v] ^ (0xF if carry else 0)
        carry ^= PARITY_NIB[v]
    return tuple(out)


def _undiffuse_left(nibs: Sequence[int]) -> tuple[int, ...]:
    # m0 = 1 ^ c0, mi = c(i-1) ^ ci; per nibble: shift in the previous bit.
    out = []
    prev_bit = 1
    for v in nibs:
        out.append(v ^ (prev_bit << 3) ^ (v >> 1))
        prev_bit = v & 1
    return tuple(out)


def _undiffuse_right(nibs: Sequence[int]) -> tuple[int, ...]:
    # m63 = c63, mi = c(i+1) ^ ci
    out = [0] * 16
    next_bit = 0
    for i in range(15, -1, -1):
        v = nibs[i]
        out[i] = v ^ ((v << 1) & 0xF) ^ next_bit
        next_bit = (v >> 3) & 1
    return tuple(out)


def diffuse_left(b: Block) -> Block:
    """eLeft over (F2, xor) with leader 1: output bit j = 1 ^ (y0 ^ ... ^ yj)."""
    return Block(_diffuse_left(b.nibbles))


def diffuse_right(b: Block) -> Block:
    """eRight over (F2, xor) with leader 0: output bit j = yj ^ ... ^ y63."""
    return Block(_diffuse_right(b.nibbles))


def undiffuse_left(b: Block) -> Block:
    return Block(_undiffuse_left(b.nibbles))


def undiffuse_right(b: Block) -> Block:
    return Block(_undiffuse_right(b.nibbles))


# -- Algorithms 1 and 2 ------------------------------------------------------


def _round_uses_diffusion(i: int) -> bool:
    # Only the literal 16th round drops its diffusion step.
    return i != 16


def _encrypt_nibbles(
    m: Sequence[int], rk_nibs: Sequence[Sequence[int]], rounds: int, q: Quasigroup
) -> tuple[int, ...]:
    mul = q.mul_table
    c = list(m)
    for i in range(1, rounds + 1):
        rk = rk_nibs[i - 1]
        for t in range(16):
            c[t] ^= rk[t]
        if i & 1:
            b = rk[0]  # leader: first nibble of the odd round's key
            for t in range(16):
                b = mul[b][c[t]]
                c[t] = b
            if _round_uses_diffusion(i):
                c = list(_diffuse_right(c))
        else:
            b = rk[15]  # leader: last nibble of the even round's key
            for t in range(15, -1, -1):
                b = mul[b][c[t]]
                c[t] = b
            if _round_uses_diffusion(i):
                c = list(_diffuse_left(c))
    last = rk_nibs[rounds]
    return tuple(c[t] ^ last[t] for t in range(16))


def _decrypt_nibbles(
    c: Sequence[int], rk_nibs: Sequence[Sequence[int]], rounds: int, q: Quasigroup
) -> tuple[int, ...]:
    ldiv = q.ldiv_table
    last = rk_nibs[rounds]
    m = [c[t] ^ last[t] for t in range(16)]
    for i in range(rounds, 0, -1):
        rk = rk_nibs[i - 1]
        if i & 1:
            if _round_uses_diffusion(i):
                m = list(_undiffuse_right(m))
            prev = rk[0]
            out = []
            for t in range(16):
                out.append(ldiv[prev][m[t]])
                prev = m[t]
            m = out
        else:
            if _round_uses_diffusion(i):
                m = list(_undiffuse_left(m))
            prev = rk[15]
            out = [0] * 16
            for t in range(15, -1, -1):
                out[t] = ldiv[prev][m[t]]
                prev = m[t]
            m = out
        for t in range(16):
            m[t] ^= rk[t]
    return tuple(m)


def encrypt_block(
    m: Block, rk: RoundKeys, rounds: int = NUM_ROUNDS, q: Quasigroup = INRU
) -> Block:
    """Encrypt one block (Algorithm: xor round key, confusion layer, diffusion).

    Odd rounds chain the quasigroup layer from the left with leader = first
    nibble of the round key, then apply the suffix-xor diffusion; even
    rounds mirror this (leader = last nibble, prefix-xor diffusion), and
    round 16 skips diffusion.  A final xor with rk[rounds] whitens the
    output.
    """
    if not 1 <= rounds <= NUM_ROUNDS:
        raise ValueError(f"rounds must be in 1..{NUM_ROUNDS}")
    rk_nibs = [k.nibbles for k in rk.keys]
    return Block(_encrypt_nibbles(m.nibbles, rk_nibs, rounds, q))


def decrypt_block(
    c: Block, rk: RoundKeys, rounds: int = NUM_ROUNDS, q: Quasigroup = INRU
) -> Block:
    """Invert encrypt_block.

    Decryption round i undoes encryption round (rounds+1-i), so it reads
    its leader from the opposite end of that round's key: the inverse of an
    even (right-chained) encryption round is a right-to-left division chain
    seeded with the key's first nibble, and vice versa.
    """
    if not 1 <= rounds <= NUM_ROUNDS:
        raise ValueError(f"rounds must be in 1..{NUM_ROUNDS}")
    rk_nibs = [k.nibbles for k in rk.keys]
    return Block(_decrypt_nibbles(c.nibbles, rk_nibs, rounds, q))


@dataclass(frozen=True)
class RoundTrace:
    """Intermediate values of one encryption round, for analysis harnesses.

    ``sbox_inputs[t]`` is the (chain, message) nibble pair entering the
    confusion-layer lookup at position t; for odd rounds the chain input of
    position 0 is the leader, for even rounds that of position 15.
    """

    index: int
    round_key: tuple[int, ...]
    after_kxor: tuple[int, ...]
    sbox_inputs: tuple[tuple[int, int], ...]
    after_sbox: tuple[int, ...]
    after_diffusion: tuple[int, ...] | None


def encrypt_block_traced(
    m: Block, rk: RoundKeys, rounds: int = NUM_ROUNDS, q: Quasigroup = INRU
) -> tuple[Block, tuple[RoundTrace, ...]]:
    """encrypt_block plus the full list of per-round intermediates."""
    if not 1 <= rounds <= NUM_ROUNDS:
        raise ValueError(f"rounds must be in 1..{NUM_ROUNDS}")
    mul = q.mul_table
    c = list(m.nibbles)
    traces = []
    for i in range(1, rounds + 1):
        rk_n = rk.keys[i - 1].nibbles
        c = [c[t] ^ rk_n[t] for t in range(16)]
        after_kxor = tuple(c)
        inputs = [None] * 16
        if i & 1:
            b = rk_n[0]
            for t in range(16):
                inputs[t] = (b, c[t])
                b = mul[b][c[t]]
                c[t] = b
        else:
            b = rk_n[15]
            for t in range(15, -1, -1):
                inputs[t] = (b, c[t])
                b = mul[b][c[t]]
                c[t] = b
        after_sbox = tuple(c)
        after_diffusion = None
        if _round_uses_diffusion(i):
            c = list(_diffuse_right(c) if i & 1 else _diffuse_left(c))
            after_diffusion = tuple(c)
        traces.append(
            RoundTrace(i, rk_n, after_kxor, tuple(inputs), after_sbox, after_diffusion)
        )
    last = rk.keys[rounds].nibbles
    out = Block(tuple(c[t] ^ last[t] for t in range(16)))
    return out, tuple(traces)


# -- Algorithms 3 and 4: key schedule ----------------------------------------


def mixing_string(key: MasterKey, iv: Diversifier) -> tuple[int, ...]:
    """The 64-nibble seed string: key, diversifier, then the constant 15..0."""
    return key.nibbles + iv.nibbles + tuple(range(15, -1, -1))


def key_mixing(
    key: MasterKey, iv: Diversifier | None = None, q: Quasigroup = INRU
) -> MixedKeyState:
    """Mix key and diversifier by 64 alternating chain passes.

    Pass i (1-based) applies e_left for odd i and e_right for even i with
    leader s[64-i], always taken from the original seed string, so the
    leaders consumed are s63, s62, ..., s0 (and s63 is the constant 0).
    """
    if iv is None:
        iv = Diversifier.zero()
    s = mixing_string(key, iv)
    a: Sequence[int] = s
    for i in range(1, 65):
        if i & 1:
            a = q.e_left(s[64 - i], a)
        else:
            a = q.e_right(s[64 - i], a)
    return MixedKeyState(tuple(a))


def round_key_generation(a: MixedKeyState, q: Quasigroup = INRU) -> RoundKeys:
    """Derive the 17 round keys from the mixed state.

    A 544-nibble working string (0..15 repeated 34 times) is chained 64
    times with leaders a0..a63 from the unmodified mixed state; round key i
    takes the 16 even-offset nibbles of the string's i-th 32-nibble chunk.
    The last chunk's odd offsets (through nibble 543) are simply unused.
    """
    s = tuple(range(16)) * 34
    l: Sequence[int] = s
    leaders = a.nibbles
    for i in range(1, 65):
        if i & 1:
            l = q.e_left(leaders[i - 1], l)
        else:
            l = q.e_right(leaders[i - 1], l)
    keys = tuple(
        Block(tuple(l[32 * i + 2 * j] for j in range(16))) for i in range(17)
    )
    return RoundKeys(keys)


def expand_key(
    key: MasterKey, iv: Diversifier | None = None, q: Quasigroup = INRU
) -> RoundKeys:
    """Full key schedule: key mixing followed by round-key generation."""
    return round_key_generation(key_mixing(key, iv, q), q)


# -- known-answer vector files ------------------------------------------------


@dataclass(frozen=True)
class KnownAnswerVector:
    key: MasterKey
    iv: Diversifier
    plaintext: Block
    ciphertext: Block

    def to_line(self) -> str:
        return (
            f"key={self.key.to_hex()} iv={self.iv.to_hex()} "
            f"pt={self.plaintext.to_hex()} ct={self.ciphertext.to_hex()}"
        )


def parse_vector_line(line: str) -> KnownAnswerVector:
    fields = dict(part.split("=", 1) for part in line.split())
    missing = {"key", "iv", "pt", "ct"} - fields.keys()
    if missing:
        raise ValueError(f"vector line missing {sorted(missing)}: {line!r}")
    return KnownAnswerVector(
        MasterKey.from_hex(fields["key"]),
        Diversifier.from_hex(fields["iv"]),
        Block.from_hex(fields["pt"]),
        Block.from_hex(fields["ct"]),
    )


def read_vectors(text: str) -> list[KnownAnswerVector]:
    vectors = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            vectors.append(parse_vector_line(line))
    return vectors


def builtin_vectors() -> list[KnownAnswerVector]:
    """The frozen vectors shipped with the package."""
    from importlib.resources import files

    text = files("inru.data").joinpath("known_answer_vectors.txt").read_text()
    return read_vectors(text)
