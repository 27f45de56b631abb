"""Battery driver: run the ten tests over many sequences and aggregate.

The aggregate statistic per test is the arithmetic mean of all its
p-values across sequences (the serial test contributes two per sequence),
which is what a one-number-per-test summary of many sequences reports.
A sequence passes a test when every p-value is at least the significance
level (default 0.01).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cipher import MasterKey, expand_key
from .modes import ModeConfig, cipher_stream
from .nist_tests import ALL_TESTS, TEST_NAMES, TestResult

DEFAULT_ALPHA = 0.01


@dataclass(frozen=True)
class BitSequence:
    """A packed bit string (big-endian bit order inside each byte)."""

    data: bytes
    nbits: int

    def __post_init__(self):
        if self.nbits <= 0:
            raise ValueError("BitSequence needs a positive bit count")
        if len(self.data) != (self.nbits + 7) // 8:
            raise ValueError("packed data length does not match nbits")

    @classmethod
    def from_bits(cls, bits) -> "BitSequence":
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(np.packbits(bits).tobytes(), bits.size)

    @classmethod
    def from01(cls, text: str) -> "BitSequence":
        return cls.from_bits(np.frombuffer(text.encode(), np.uint8) - ord("0"))

    def bits(self) -> np.ndarray:
        return np.unpackbits(np.frombuffer(self.data, np.uint8))[: self.nbits]

    def to01(self) -> str:
        return "".join("01"[b] for b in self.bits())


@dataclass(frozen=True)
class TestRecord:
    """All sequences' results for a single test."""

    test: str
    params: dict
    results: tuple[TestResult, ...]

    def p_values(self) -> list[float]:
        return [p for r in self.results for p in r.p_values]

    def mean_p(self) -> float:
        ps = self.p_values()
        return float(np.mean(ps)) if ps else 0.0

    def pass_count(self, alpha: float = DEFAULT_ALPHA) -> int:
        return sum(1 for r in self.results if r.passed(alpha))


@dataclass(frozen=True)
class TestReport:
    records: tuple[TestRecord, ...]
    n_sequences: int
    alpha: float = DEFAULT_ALPHA
    mode: str = ""
    input_fill: str = ""
    meta: dict = field(default_factory=dict)

    def record(self, test: str) -> TestRecord:
        for r in self.records:
            if r.test == test:
                return r
        raise KeyError(test)

    def mean_p(self, test: str) -> float:
        return self.record(test).mean_p()

    def pass_proportion(self, test: str) -> float:
        return self.record(test).pass_count(self.alpha) / self.n_sequences

    def render_table(self) -> str:
        label = f" ({self.mode}, {self.input_fill} input)" if self.mode else ""
        lines = [
            f"randomness battery over {self.n_sequences} sequence(s){label},"
            f" significance {self.alpha}",
        ]
        if self.meta:
            lines.append("parameters: " + ", ".join(f"{k}={v}" for k, v in self.meta.items()))
        lines.append(f"{'test':6s} {'name':28s} {'mean p':>8s} {'pass':>7s}  params")
        for r in self.records:
            passes = f"{r.pass_count(self.alpha)}/{self.n_sequences}"
            params = ", ".join(f"{k}={v}" for k, v in r.params.items() if k != "n")
            lines.append(
                f"{r.test:6s} {TEST_NAMES[r.test]:28s} {r.mean_p():8.4f} {passes:>7s}  {params}"
            )
        return "\n".join(lines) + "\n"

    def machine_lines(self) -> str:
        mode = self.mode or "-"
        fill = self.input_fill or "-"
        out = []
        for r in self.records:
            out.append(
                f"{mode},{fill},{r.test},{r.mean_p():.6f},"
                f"{r.pass_count(self.alpha)}/{self.n_sequences}"
            )
        return "\n".join(out) + "\n"


def run_battery(
    sequences: list[BitSequence] | list[np.ndarray],
    alpha: float = DEFAULT_ALPHA,
    tests: dict | None = None,
) -> TestReport:
    """Run every test on every sequence."""
    if not sequences:
        raise ValueError("run_battery needs at least one sequence")
    tests = ALL_TESTS if tests is None else tests
    arrays = [s.bits() if isinstance(s, BitSequence) else np.asarray(s, np.uint8) for s in sequences]
    records = []
    for tid, fn in tests.items():
        results = tuple(fn(a) for a in arrays)
        records.append(TestRecord(tid, dict(results[0].params), results))
    return TestReport(tuple(records), len(arrays), alpha)


def _one_key_sequence(args) -> bytes:
    mode, mode_iv, nonce, key_hex, fill, nbits = args
    cfg = ModeConfig(mode, mode_iv=mode_iv, nonce=nonce, padding="none")
    rk = expand_key(MasterKey.from_hex(key_hex))
    bits = cipher_stream(cfg, rk, fill, nbits)
    return np.packbits(bits).tobytes()


def nist_experiment(
    mode: str | ModeConfig,
    input_fill: str = "zeros",
    keys: int = 64,
    bits_per_seq: int = 1 << 20,
    seed: int = 0,
    alpha: float = DEFAULT_ALPHA,
    jobs: int = 1,
) -> TestReport:
    """Battery over ciphertext streams of ``keys`` random master keys in one mode.

    Sequences are the ciphertexts of the constant all-zeros or all-ones
    message.  ``mode`` is a mode name, in which case mode IVs / nonces are
    drawn per key from the same seeded generator as the keys, or a full
    ModeConfig template whose IV material is then used for every key.
    Either way a (seed, mode, fill) triple fully determines the report.
    """
    if input_fill not in ("zeros", "ones"):
        raise ValueError("input_fill must be 'zeros' or 'ones'")
    fill = 0x00 if input_fill == "zeros" else 0xFF
    template = mode if isinstance(mode, ModeConfig) else None
    mode_name = template.mode if template else mode
    rng = np.random.default_rng(seed)
    units = []
    for _ in range(keys):
        key_hex = "".join(f"{v:x}" for v in rng.integers(0, 16, 32))
        if template is not None:
            mode_iv, nonce = template.mode_iv, template.nonce
        else:
            mode_iv = int(rng.integers(0, 1 << 63)) * 2 + int(rng.integers(0, 2))
            nonce = int(rng.integers(0, 1 << 32))
        units.append((mode_name, mode_iv, nonce, key_hex, fill, bits_per_seq))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            packed = list(pool.map(_one_key_sequence, units))
    else:
        packed = [_one_key_sequence(u) for u in units]
    seqs = [BitSequence(p[: (bits_per_seq + 7) // 8], bits_per_seq) for p in packed]
    report = run_battery(seqs, alpha)
    return TestReport(
        report.records,
        report.n_sequences,
        alpha,
        mode=mode_name,
        input_fill=input_fill,
        meta={"keys": keys, "bits_per_seq": bits_per_seq, "seed": seed},
    )


def ks_uniformity_statistic(p_values) -> float:
    """Kolmogorov-Smirnov distance between the p-values and U(0,1)."""
    ps = np.sort(np.asarray(p_values, dtype=np.float64))
    if ps.size == 0:
        raise ValueError("no p-values")
    n = ps.size
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    return float(max(np.max(hi - ps), np.max(ps - lo)))


def ks_critical_value(n: int, alpha: float = 0.01) -> float:
    """Asymptotic KS critical value; 1.628/sqrt(n) at the 1% level."""
    coeff = {0.10: 1.224, 0.05: 1.358, 0.01: 1.628}
    if alpha not in coeff:
        raise ValueError(f"no tabulated coefficient for alpha={alpha}")
    return coeff[alpha] / np.sqrt(n)
