"""Modes of operation over arbitrary-length byte messages: CBC, CFB, OFB, CTR.

These are the standard constructions with full 64-bit feedback.  CBC is the
only mode that needs padding (PKCS#7 with 8-byte blocks by default; with
padding "none" the message length must be a multiple of 8).  CFB, OFB and
CTR are stream-like and preserve message length.

The CTR counter block is nonce (bits 0..31) followed by a 32-bit big-endian
block counter starting at 0 (bits 32..63).

Mode state (chaining value, counter position) lives on the stack of one
call; distinct streams are independent and may run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .batch import BatchCipher
from .cipher import Block, RoundKeys, encrypt_block, decrypt_block

MODES = ("cbc", "cfb", "ofb", "ctr")
BLOCK_BYTES = 8
_CTR_LIMIT = 1 << 32


class PaddingError(ValueError):
    """Malformed or missing PKCS#7 padding."""


@dataclass(frozen=True)
class ModeConfig:
    """Mode selection plus its IV material.

    ``mode_iv`` seeds the CBC/CFB/OFB chain (a 64-bit value); ``nonce`` is
    the 32-bit CTR nonce.  ``padding`` applies to CBC only.
    """

    mode: str
    mode_iv: int = 0
    nonce: int = 0
    padding: str = "pkcs7"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0 <= self.mode_iv < 1 << 64:
            raise ValueError("mode_iv outside 64 bits")
        if not 0 <= self.nonce < 1 << 32:
            raise ValueError("nonce outside 32 bits")
        if self.padding not in ("pkcs7", "none"):
            raise ValueError(f"padding must be 'pkcs7' or 'none', got {self.padding!r}")


def pkcs7_pad(data: bytes, block: int = BLOCK_BYTES) -> bytes:
    n = block - len(data) % block
    return data + bytes([n]) * n


def pkcs7_unpad(data: bytes, block: int = BLOCK_BYTES) -> bytes:
    if not data or len(data) % block:
        raise PaddingError("ciphertext length not a whole number of blocks")
    n = data[-1]
    if not 1 <= n <= block or data[-n:] != bytes([n]) * n:
        raise PaddingError("bad padding bytes")
    return data[:-n]


def _split_blocks(data: bytes):
    return [Block.from_bytes(data[i : i + 8]) for i in range(0, len(data), 8)]


def _ctr_keystream_bytes(cfg: ModeConfig, rk: RoundKeys, nblocks: int) -> bytes:
    if nblocks > _CTR_LIMIT:
        raise ValueError(f"CTR stream of {nblocks} blocks exceeds the 2^32 counter space")
    counters = np.zeros((nblocks, 16), dtype=np.uint8)
    nonce = cfg.nonce
    for t in range(8):
        counters[:, t] = (nonce >> (28 - 4 * t)) & 0xF
    ctr = np.arange(nblocks, dtype=np.uint64)
    for t in range(8):
        counters[:, 8 + t] = (ctr >> np.uint64(28 - 4 * t)) & np.uint64(0xF)
    rks = np.array([k.nibbles for k in rk.keys], dtype=np.uint8)
    out = BatchCipher().encrypt(counters, rks)
    high = out[:, 0::2].astype(np.uint8) << 4
    return (high | out[:, 1::2]).tobytes()


def mode_encrypt(cfg: ModeConfig, rk: RoundKeys, msg: bytes) -> bytes:
    """Encrypt a byte message under the configured mode."""
    if cfg.mode == "cbc":
        if cfg.padding == "pkcs7":
            msg = pkcs7_pad(msg)
        elif len(msg) % BLOCK_BYTES:
            raise ValueError("CBC without padding needs a multiple of 8 bytes")
        chain = Block.from_int(cfg.mode_iv)
        out = bytearray()
        for blk in _split_blocks(msg):
            chain = encrypt_block(blk ^ chain, rk)
            out += chain.to_bytes()
        return bytes(out)

    if cfg.mode == "cfb":
        chain = Block.from_int(cfg.mode_iv)
        out = bytearray()
        for i in range(0, len(msg), 8):
            ks = encrypt_block(chain, rk).to_bytes()
            piece = msg[i : i + 8]
            ct = bytes(a ^ b for a, b in zip(piece, ks))
            out += ct
            if len(ct) == 8:
                chain = Block.from_bytes(ct)
        return bytes(out)

    if cfg.mode == "ofb":
        feedback = Block.from_int(cfg.mode_iv)
        out = bytearray()
        for i in range(0, len(msg), 8):
            feedback = encrypt_block(feedback, rk)
            ks = feedback.to_bytes()
            out += bytes(a ^ b for a, b in zip(msg[i : i + 8], ks))
        return bytes(out)

    # ctr
    nblocks = (len(msg) + 7) // 8
    ks = _ctr_keystream_bytes(cfg, rk, nblocks)
    return bytes(a ^ b for a, b in zip(msg, ks))


def mode_decrypt(cfg: ModeConfig, rk: RoundKeys, ct: bytes) -> bytes:
    """Invert mode_encrypt, validating CBC padding."""
    if cfg.mode == "cbc":
        if len(ct) % BLOCK_BYTES:
            raise PaddingError("CBC ciphertext length not a multiple of 8")
        chain = Block.from_int(cfg.mode_iv)
        out = bytearray()
        for blk in _split_blocks(ct):
            out += (decrypt_block(blk, rk) ^ chain).to_bytes()
            chain = blk
        if cfg.padding == "pkcs7":
            return pkcs7_unpad(bytes(out))
        return bytes(out)

    if cfg.mode == "cfb":
        chain = Block.from_int(cfg.mode_iv)
        out = bytearray()
        for i in range(0, len(ct), 8):
            ks = encrypt_block(chain, rk).to_bytes()
            piece = ct[i : i + 8]
            out += bytes(a ^ b for a, b in zip(piece, ks))
            if len(piece) == 8:
                chain = Block.from_bytes(piece)
        return bytes(out)

    # OFB and CTR are their own inverses.
    return mode_encrypt(cfg, rk, ct)


def cipher_stream(cfg: ModeConfig, rk: RoundKeys, fill: int, nbits: int) -> np.ndarray:
    """First ``nbits`` bits of the ciphertext of a constant ``fill``-byte message.

    This is the sequence-forming convention for the statistical battery:
    the randomness of a mode is judged on what it outputs for the constant
    all-zeros (or all-ones) plaintext stream.
    """
    if nbits <= 0:
        raise ValueError("nbits must be positive")
    nbytes = (nbits + 7) // 8
    msg = bytes([fill]) * (((nbytes + 7) // 8) * 8)
    cbc = cfg.padding != "none" and cfg.mode == "cbc"
    if cbc:
        cfg = ModeConfig(cfg.mode, cfg.mode_iv, cfg.nonce, "none")
    ct = mode_encrypt(cfg, rk, msg)
    bits = np.unpackbits(np.frombuffer(ct, dtype=np.uint8))
    return bits[:nbits]


def keystream(cfg: ModeConfig, rk: RoundKeys, nbits: int) -> np.ndarray:
    """Deterministic bit sequence of length ``nbits`` for the battery.

    For OFB and CTR this is the raw keystream; for CBC and CFB it is the
    ciphertext of the all-zero message, which coincides with the keystream
    convention (xor with zeros is the identity).
    """
    return cipher_stream(cfg, rk, 0x00, nbits)
