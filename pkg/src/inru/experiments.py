"""Empirical diffusion experiments: difference propagation, avalanche, SAC.

All experiments draw their randomness from a seeded generator so runs are
reproducible; heavy ones accept a ``jobs`` argument and farm fixed per-key
work units out to a process pool.  Work units and their sub-seeds depend
only on the experiment seed, and results merge by accumulation in unit
order, so the output is identical for every jobs value.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .batch import BatchCipher, blocks_to_bits
from .cipher import Block, RoundKeys, encrypt_block_traced


@dataclass(frozen=True)
class QuantileRanges:
    """Central ranges of an empirical distribution, in percent units."""

    r95: tuple[float, float]
    r98: tuple[float, float]
    r99: tuple[float, float]

    @classmethod
    def of(cls, values: np.ndarray) -> "QuantileRanges":
        def rng(p):
            lo, hi = np.percentile(values, [(100 - p) / 2, 100 - (100 - p) / 2])
            return (float(lo), float(hi))

        return cls(rng(95), rng(98), rng(99))


# -- difference propagation ---------------------------------------------------


@dataclass(frozen=True)
class DiffPropagationResult:
    """activation[r][t]: how often the Sbox at position t was active in round r+1.

    A position counts as active when the 8-bit input of its wide-Sbox
    lookup (chain nibble, message nibble) differs between the two
    encryptions of a pair.
    """

    rounds: int
    delta: Block
    trials: int
    activation: np.ndarray


def diff_propagation_experiment(
    rounds: int, delta: Block, trials: int, seed: int = 0
) -> DiffPropagationResult:
    """Encrypt random pairs (m, m ^ delta) under random keys and tap Sbox inputs."""
    if delta.to_int() == 0:
        raise ValueError("the input difference must be nonzero")
    if not 1 <= rounds <= 16:
        raise ValueError("rounds must be in 1..16")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    keys = rng.integers(0, 16, size=(trials, 32), dtype=np.uint8)
    pts = rng.integers(0, 16, size=(trials, 16), dtype=np.uint8)
    all_rks = BatchCipher().expand_keys(keys)
    active = np.zeros((rounds, 16), dtype=np.int64)
    for j in range(trials):
        rks = RoundKeys(tuple(Block(tuple(int(v) for v in rk)) for rk in all_rks[j]))
        m = Block(tuple(int(v) for v in pts[j]))
        _, tr_a = encrypt_block_traced(m, rks, rounds=rounds)
        _, tr_b = encrypt_block_traced(m ^ delta, rks, rounds=rounds)
        for r in range(rounds):
            for t in range(16):
                if tr_a[r].sbox_inputs[t] != tr_b[r].sbox_inputs[t]:
                    active[r, t] += 1
    return DiffPropagationResult(rounds, delta, trials, active / trials)


# -- avalanche and strict avalanche -------------------------------------------


def _flip_unit(args) -> tuple[np.ndarray, np.ndarray]:
    """One key's worth of plaintext-flip encryptions.

    Returns (flip_counts, unit_means): flip_counts[b][j] counts ciphertext
    bit j flips when flipping plaintext bit b; unit_means[t] is trial t's
    average flipped-bit percentage over all 64 single-bit flips.
    """
    key_nibbles, count, sub_seed, rounds = args
    rng = np.random.default_rng(sub_seed)
    rks_arr = BatchCipher().expand_keys(np.asarray(key_nibbles, dtype=np.uint8)[None, :])[0]
    eng = BatchCipher()
    pts = rng.integers(0, 16, size=(count, 16), dtype=np.uint8)
    base_bits = blocks_to_bits(eng.encrypt(pts, rks_arr, rounds=rounds))
    flipped = np.repeat(pts[None, :, :], 64, axis=0)  # (64, count, 16)
    for b in range(64):
        flipped[b, :, b >> 2] ^= 1 << (3 - (b & 3))
    ct = eng.encrypt(flipped.reshape(64 * count, 16), rks_arr, rounds=rounds)
    diff = blocks_to_bits(ct).reshape(64, count, 64) ^ base_bits[None, :, :]
    flip_counts = diff.sum(axis=1, dtype=np.int64)
    unit_means = diff.sum(axis=(0, 2), dtype=np.int64) / (64 * 64) * 100.0
    return flip_counts, unit_means


def _run_flip_units(trials, keys, rounds, seed, jobs):
    rng = np.random.default_rng(seed)
    key_nibbles = rng.integers(0, 16, size=(keys, 32), dtype=np.uint8)
    sub_seeds = rng.integers(0, 2**63, size=keys)
    counts = [trials // keys + (1 if i < trials % keys else 0) for i in range(keys)]
    units = [
        (key_nibbles[i].tolist(), counts[i], int(sub_seeds[i]), rounds)
        for i in range(keys)
        if counts[i]
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_flip_unit, units))
    else:
        results = [_flip_unit(u) for u in units]
    flip_counts = sum(r[0] for r in results)
    unit_means = np.concatenate([r[1] for r in results])
    return flip_counts, unit_means


@dataclass(frozen=True)
class AvalancheResult:
    trials: int
    keys: int
    per_bit_mean: np.ndarray  # (64,) mean flipped-bit percentage per flipped input bit
    unit_values: np.ndarray  # per (plaintext, key) average percentage over 64 flips
    ranges: QuantileRanges


def avalanche_plaintext(
    trials: int, keys: int = 6, rounds: int = 16, seed: int = 0, jobs: int = 1
) -> AvalancheResult:
    """Flip every plaintext bit of ``trials`` random inputs spread over ``keys`` keys.

    The experiment unit is one (input, key) pair: its value is the average
    flipped-ciphertext-bit percentage over the 64 single-bit flips, and the
    quantile ranges summarize the unit distribution.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    flip_counts, unit_means = _run_flip_units(trials, keys, rounds, seed, jobs)
    per_bit = flip_counts.sum(axis=1) / (len(unit_means) * 64) * 100.0
    return AvalancheResult(trials, keys, per_bit, unit_means, QuantileRanges.of(unit_means))


@dataclass(frozen=True)
class SacResult:
    trials: int
    keys: int
    matrix: np.ndarray  # (64, 64) flip frequencies in [0, 1]
    ranges: QuantileRanges  # over the 4096 entries, in percent


def sac_matrix(
    trials: int, keys: int = 6, rounds: int = 16, seed: int = 0, jobs: int = 1
) -> SacResult:
    """Dependence matrix: entry (i, j) is how often ciphertext bit j flips
    when plaintext bit i is flipped, pooled over all trials and keys."""
    if trials < 1:
        raise ValueError("trials must be positive")
    flip_counts, unit_means = _run_flip_units(trials, keys, rounds, seed, jobs)
    matrix = flip_counts / len(unit_means)
    return SacResult(trials, keys, matrix, QuantileRanges.of(matrix.reshape(-1) * 100.0))


# -- key schedule avalanche ----------------------------------------------------


@dataclass(frozen=True)
class KeyAvalancheResult:
    trials: int
    min_roundkey_flips: int  # fewest round-key bits changed by any single key-bit flip
    roundkey_flip_mean: float  # mean fraction of the 17*64 round-key bits flipped
    ct_flip_mean: float  # mean fraction of ciphertext bits flipped
    per_bit_ct_mean: np.ndarray  # (128,) ciphertext flip fraction per master-key bit


def avalanche_key(trials: int, rounds: int = 16, seed: int = 0) -> KeyAvalancheResult:
    """Flip each of the 128 master-key bits and measure downstream changes."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    eng = BatchCipher()
    base_keys = rng.integers(0, 16, size=(trials, 32), dtype=np.uint8)
    pts = rng.integers(0, 16, size=(trials, 16), dtype=np.uint8)

    keys = np.repeat(base_keys[:, None, :], 129, axis=1)  # (trials, 129, 32)
    for b in range(128):
        keys[:, 1 + b, b >> 2] ^= 1 << (3 - (b & 3))
    rks = eng.expand_keys(keys.reshape(-1, 32)).reshape(trials, 129, 17, 16)

    shifts = np.array([3, 2, 1, 0], dtype=np.uint8)
    rk_bits = ((rks[..., None] >> shifts) & 1).reshape(trials, 129, 17 * 64)
    rk_diffs = (rk_bits[:, 1:, :] != rk_bits[:, :1, :]).sum(axis=2)  # (trials, 128)

    blocks = np.repeat(pts[:, None, :], 129, axis=1).reshape(-1, 16)
    ct = eng.encrypt(blocks, rks.reshape(-1, 17, 16), rounds=rounds)
    ct_bits = blocks_to_bits(ct).reshape(trials, 129, 64)
    ct_diffs = (ct_bits[:, 1:, :] != ct_bits[:, :1, :]).sum(axis=2)  # (trials, 128)

    return KeyAvalancheResult(
        trials,
        int(rk_diffs.min()),
        float(rk_diffs.mean() / (17 * 64)),
        float(ct_diffs.mean() / 64),
        ct_diffs.mean(axis=0) / 64,
    )


# -- report rendering ----------------------------------------------------------


def render_ranges(name: str, ranges: QuantileRanges) -> str:
    return (
        f"{name} central ranges (percent):\n"
        f"  95%: ({ranges.r95[0]:.2f}, {ranges.r95[1]:.2f})\n"
        f"  98%: ({ranges.r98[0]:.2f}, {ranges.r98[1]:.2f})\n"
        f"  99%: ({ranges.r99[0]:.2f}, {ranges.r99[1]:.2f})\n"
    )
