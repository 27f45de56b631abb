"""Vectorized cipher engine for bulk experiments.

Everything here recomputes what :mod:`inru.cipher` does, batched across
independent inputs with numpy gathers; the chain structure of the string
transformations is inherently sequential per position, so vectorization
runs across the batch axis only.  Working arrays are kept transposed
(position, batch) so each chain step touches contiguous memory.

The scalar implementation is the reference; the test suite pins this
engine against it element for element.
"""

from __future__ import annotations

import numpy as np

from .cipher import NUM_ROUNDS, PARITY_NIB, PREFIX_NIB, SUFFIX_NIB
from .quasigroup import INRU, Quasigroup

_PREFIX = np.array(PREFIX_NIB, dtype=np.uint8)
_SUFFIX = np.array(SUFFIX_NIB, dtype=np.uint8)
_PARITY = np.array(PARITY_NIB, dtype=np.uint8)


class BatchCipher:
    """Batched key schedule, encryption and decryption over one quasigroup."""

    def __init__(self, q: Quasigroup = INRU):
        if q.order != 16:
            raise ValueError("batch engine expects an order-16 quasigroup")
        self.mul_flat = np.array(q.mul_table, dtype=np.uint8).reshape(256)
        self.ldiv_flat = np.array(q.ldiv_table, dtype=np.uint8).reshape(256)

    # -- chained string transformations, state shape (length, n) -----------

    def _e_left(self, table, leaders, w):
        b = np.asarray(leaders, dtype=np.uint8)
        if b.ndim == 0:
            b = np.broadcast_to(b, w.shape[1:]).copy()
        else:
            b = b.copy()
        for t in range(w.shape[0]):
            np.take(table, (b << 4) | w[t], out=b)
            w[t] = b

    def _e_right(self, table, leaders, w):
        b = np.asarray(leaders, dtype=np.uint8)
        if b.ndim == 0:
            b = np.broadcast_to(b, w.shape[1:]).copy()
        else:
            b = b.copy()
        for t in range(w.shape[0] - 1, -1, -1):
            np.take(table, (b << 4) | w[t], out=b)
            w[t] = b

    def _d_left(self, leaders, w):
        prev = np.broadcast_to(np.asarray(leaders, dtype=np.uint8), w.shape[1:])
        for t in range(w.shape[0]):
            cur = w[t].copy()
            w[t] = np.take(self.ldiv_flat, (prev.astype(np.uint8) << 4) | cur)
            prev = cur

    def _d_right(self, leaders, w):
        prev = np.broadcast_to(np.asarray(leaders, dtype=np.uint8), w.shape[1:])
        for t in range(w.shape[0] - 1, -1, -1):
            cur = w[t].copy()
            w[t] = np.take(self.ldiv_flat, (prev.astype(np.uint8) << 4) | cur)
            prev = cur

    # -- diffusion, state shape (16, n) -------------------------------------

    @staticmethod
    def _diffuse_left(w):
        pfx = _PREFIX[w]
        carry = np.bitwise_xor.accumulate(_PARITY[w], axis=0)
        carry = np.roll(carry, 1, axis=0)
        carry[0] = 0
        carry ^= 1  # leader bit
        return pfx ^ (carry * np.uint8(15))

    @staticmethod
    def _diffuse_right(w):
        sfx = _SUFFIX[w]
        carry = np.bitwise_xor.accumulate(_PARITY[w][::-1], axis=0)[::-1]
        carry = np.roll(carry, -1, axis=0)
        carry[-1] = 0  # leader bit 0
        return sfx ^ (carry * np.uint8(15))

    @staticmethod
    def _undiffuse_left(w):
        prev_low = np.empty_like(w)
        prev_low[0] = 1
        prev_low[1:] = w[:-1] & 1
        return w ^ (prev_low << 3) ^ (w >> 1)

    @staticmethod
    def _undiffuse_right(w):
        next_top = np.empty_like(w)
        next_top[-1] = 0
        next_top[:-1] = w[1:] >> 3
        return w ^ ((w << 1) & np.uint8(15)) ^ next_top

    # -- key schedule --------------------------------------------------------

    def expand_keys(self, keys: np.ndarray, ivs: np.ndarray | None = None) -> np.ndarray:
        """Run the key schedule for n keys at once.

        ``keys`` is (n, 32) nibbles, ``ivs`` (n, 16) or None for all-zero
        diversifiers; returns round keys of shape (n, 17, 16).
        """
        keys = np.ascontiguousarray(keys, dtype=np.uint8)
        if keys.ndim != 2 or keys.shape[1] != 32:
            raise ValueError("keys must have shape (n, 32)")
        n = keys.shape[0]
        if ivs is None:
            ivs = np.zeros((n, 16), dtype=np.uint8)
        ivs = np.ascontiguousarray(ivs, dtype=np.uint8)
        tail = np.broadcast_to(np.arange(15, -1, -1, dtype=np.uint8), (n, 16))
        s = np.concatenate([keys, ivs, tail], axis=1).T.copy()  # (64, n)

        a = s.copy()
        for i in range(1, 65):
            if i & 1:
                self._e_left(self.mul_flat, s[64 - i], a)
            else:
                self._e_right(self.mul_flat, s[64 - i], a)
        return self._round_keys_from_state_columns(a)

    def round_keys_from_states(self, states: np.ndarray) -> np.ndarray:
        """Round-key generation alone, from (n, 64) mixed-key states."""
        states = np.ascontiguousarray(states, dtype=np.uint8)
        if states.ndim != 2 or states.shape[1] != 64:
            raise ValueError("states must have shape (n, 64)")
        return self._round_keys_from_state_columns(states.T.copy())

    def _round_keys_from_state_columns(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[1]
        l = np.tile(np.arange(16, dtype=np.uint8), 34)[:, None].repeat(n, axis=1)
        for i in range(1, 65):
            if i & 1:
                self._e_left(self.mul_flat, a[i - 1], l)
            else:
                self._e_right(self.mul_flat, a[i - 1], l)
        rows = (32 * np.arange(17)[:, None] + 2 * np.arange(16)[None, :]).reshape(-1)
        return l[rows].reshape(17, 16, n).transpose(2, 0, 1).copy()

    def mix_keys(self, keys: np.ndarray, ivs: np.ndarray | None = None) -> np.ndarray:
        """Key mixing only, returning the (n, 64) mixed states."""
        keys = np.ascontiguousarray(keys, dtype=np.uint8)
        n = keys.shape[0]
        if ivs is None:
            ivs = np.zeros((n, 16), dtype=np.uint8)
        tail = np.broadcast_to(np.arange(15, -1, -1, dtype=np.uint8), (n, 16))
        s = np.concatenate([keys, np.ascontiguousarray(ivs, dtype=np.uint8), tail], axis=1).T.copy()
        a = s.copy()
        for i in range(1, 65):
            if i & 1:
                self._e_left(self.mul_flat, s[64 - i], a)
            else:
                self._e_right(self.mul_flat, s[64 - i], a)
        return a.T.copy()

    # -- block encryption ----------------------------------------------------

    @staticmethod
    def _round_key(rks, i, n):
        """Round key i as (16, n)-broadcastable column plus its leader nibbles."""
        if rks.ndim == 2:  # one schedule shared by the whole batch
            rk = rks[i][:, None]
            return rk, rks[i][0], rks[i][15]
        rk = rks[:, i, :].T
        return rk, rk[0], rk[15]

    def encrypt(self, blocks: np.ndarray, rks: np.ndarray, rounds: int = NUM_ROUNDS) -> np.ndarray:
        """Encrypt (n, 16) nibble blocks; ``rks`` is (17, 16) or (n, 17, 16)."""
        if not 1 <= rounds <= NUM_ROUNDS:
            raise ValueError(f"rounds must be in 1..{NUM_ROUNDS}")
        blocks = np.asarray(blocks, dtype=np.uint8)
        n = blocks.shape[0]
        rks = np.asarray(rks, dtype=np.uint8)
        w = blocks.T.copy()  # (16, n)
        for i in range(1, rounds + 1):
            rk, first, last = self._round_key(rks, i - 1, n)
            w ^= rk
            if i & 1:
                self._e_left(self.mul_flat, first, w)
                if i != 16:
                    w = self._diffuse_right(w)
            else:
                self._e_right(self.mul_flat, last, w)
                if i != 16:
                    w = self._diffuse_left(w)
        rk, _, _ = self._round_key(rks, rounds, n)
        w ^= rk
        return w.T.copy()

    def decrypt(self, blocks: np.ndarray, rks: np.ndarray, rounds: int = NUM_ROUNDS) -> np.ndarray:
        if not 1 <= rounds <= NUM_ROUNDS:
            raise ValueError(f"rounds must be in 1..{NUM_ROUNDS}")
        blocks = np.asarray(blocks, dtype=np.uint8)
        n = blocks.shape[0]
        rks = np.asarray(rks, dtype=np.uint8)
        w = blocks.T.copy()
        rk, _, _ = self._round_key(rks, rounds, n)
        w ^= rk
        for i in range(rounds, 0, -1):
            rk, first, last = self._round_key(rks, i - 1, n)
            if i & 1:
                if i != 16:
                    w = self._undiffuse_right(w)
                self._d_left(first, w)
            else:
                if i != 16:
                    w = self._undiffuse_left(w)
                self._d_right(last, w)
            w ^= rk
        return w.T.copy()


def blocks_to_bits(blocks: np.ndarray) -> np.ndarray:
    """(n, 16) nibbles -> (n, 64) bits in string order (msb of nibble first)."""
    blocks = np.asarray(blocks, dtype=np.uint8)
    shifts = np.array([3, 2, 1, 0], dtype=np.uint8)
    return ((blocks[:, :, None] >> shifts) & 1).reshape(blocks.shape[0], 64)


def bits_to_blocks(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1, 16, 4)
    weights = np.array([8, 4, 2, 1], dtype=np.uint8)
    return (bits * weights).sum(axis=2, dtype=np.uint8)
