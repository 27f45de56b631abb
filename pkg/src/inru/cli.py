"""Command-line front end.

Exit codes: 0 success, 2 usage or parameter errors, 3 data or verification
failures (bad padding, mismatching vectors), 4 I/O problems.  Output files
are written to a temporary sibling and renamed into place, so a failing
run never leaves a partial file.  All randomness is drawn from a seedable
generator (``--seed``), never the OS entropy pool, so every run with the
same flags produces byte-identical output.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_IO = 4


class DataError(Exception):
    """Verification or data-format failure (exit code 3)."""


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("INRU_JOBS", "1")))
    except ValueError:
        return 1


def _write_output(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    _write_bytes(path, text.encode())


def _write_bytes(path: str, data: bytes) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=os.path.basename(path) + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_key(text: str):
    from .cipher import MasterKey

    try:
        return MasterKey.from_hex(text.lower())
    except ValueError as e:
        raise UsageError(str(e))


def _parse_iv(text: str):
    from .cipher import Diversifier

    try:
        return Diversifier.from_hex(text.lower())
    except ValueError as e:
        raise UsageError(str(e))


class UsageError(Exception):
    pass


def _hex_int(text: str, digits: int, what: str) -> int:
    try:
        value = int(text, 16)
    except ValueError:
        raise UsageError(f"{what} must be {digits} hex digits")
    if len(text) != digits:
        raise UsageError(f"{what} must be {digits} hex digits, got {len(text)}")
    return value


# -- subcommands ---------------------------------------------------------------


def _mode_config(args):
    from .modes import ModeConfig

    mode_iv = _hex_int(args.mode_iv, 16, "--mode-iv") if args.mode_iv else 0
    nonce = _hex_int(args.nonce, 8, "--nonce") if args.nonce else 0
    return ModeConfig(args.mode, mode_iv=mode_iv, nonce=nonce, padding=args.padding)


def cmd_encrypt(args) -> int:
    from .cipher import expand_key
    from .modes import mode_encrypt

    rk = expand_key(_parse_key(args.key), _parse_iv(args.iv) if args.iv else None)
    cfg = _mode_config(args)
    data = _read_bytes(args.infile)
    ct = mode_encrypt(cfg, rk, data)
    _write_bytes(args.out, ct)
    print(f"{(len(ct) + 7) // 8} blocks")
    return EXIT_OK


def cmd_decrypt(args) -> int:
    from .cipher import expand_key
    from .modes import PaddingError, mode_decrypt

    rk = expand_key(_parse_key(args.key), _parse_iv(args.iv) if args.iv else None)
    cfg = _mode_config(args)
    data = _read_bytes(args.infile)
    try:
        pt = mode_decrypt(cfg, rk, data)
    except PaddingError as e:
        raise DataError(f"decryption failed: {e}")
    _write_bytes(args.out, pt)
    print(f"{(len(data) + 7) // 8} blocks")
    return EXIT_OK


def _read_bytes(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def cmd_keyschedule(args) -> int:
    from .cipher import expand_key, key_mixing

    key = _parse_key(args.key)
    iv = _parse_iv(args.iv) if args.iv else None
    mixed = key_mixing(key, iv)
    rks = expand_key(key, iv)
    lines = [f"mixed={mixed.to_hex()}"]
    lines += [f"rk{i}={rks[i].to_hex()}" for i in range(17)]
    _write_output(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_vectors(args) -> int:
    from .cipher import (
        Block,
        Diversifier,
        KnownAnswerVector,
        MasterKey,
        encrypt_block,
        expand_key,
        read_vectors,
    )

    if args.action == "generate":
        rng = np.random.default_rng(args.seed)
        lines = [f"# {args.count} generated vectors, seed {args.seed}"]
        for _ in range(args.count):
            key = MasterKey(tuple(int(v) for v in rng.integers(0, 16, 32)))
            iv = Diversifier(tuple(int(v) for v in rng.integers(0, 16, 16)))
            pt = Block(tuple(int(v) for v in rng.integers(0, 16, 16)))
            ct = encrypt_block(pt, expand_key(key, iv))
            lines.append(KnownAnswerVector(key, iv, pt, ct).to_line())
        _write_output(args.out, "\n".join(lines) + "\n")
        return EXIT_OK

    # verify
    if not args.file:
        raise UsageError("vectors verify needs a file argument")
    text = _read_bytes(args.file).decode()
    try:
        vectors = read_vectors(text)
    except ValueError as e:
        raise DataError(str(e))
    if not vectors:
        raise DataError("no vectors in file")
    failures = []
    for lineno, vec in enumerate(vectors, 1):
        ct = encrypt_block(vec.plaintext, expand_key(vec.key, vec.iv))
        if ct != vec.ciphertext:
            failures.append((lineno, vec, ct))
    if failures:
        for lineno, vec, got in failures:
            print(f"vector {lineno}: expected ct={vec.ciphertext.to_hex()}, got {got.to_hex()}")
        raise DataError(f"{len(failures)} of {len(vectors)} vectors failed")
    print(f"{len(vectors)} vectors verified")
    return EXIT_OK


def _load_quasigroup(args):
    from .quasigroup import INRU, LatinSquareError, load_square

    if getattr(args, "square", None):
        try:
            return load_square(args.square)
        except LatinSquareError as e:
            raise DataError(f"bad square file: {e}")
    return INRU


def cmd_analyze(args) -> int:
    handler = _ANALYZERS.get(args.instrument)
    if handler is None:
        raise UsageError(
            f"unknown instrument {args.instrument!r}; choose from {sorted(_ANALYZERS)}"
        )
    return handler(args)


def _analyze_ddt(args) -> int:
    from .sboxes import build_ddt, render_ddt, row_sbox, wide_sbox

    q = _load_quasigroup(args)
    view = wide_sbox(q) if args.view == "wide" else row_sbox(q, args.leader)
    _write_output(args.out, render_ddt(view, build_ddt(view)))
    return EXIT_OK


def _analyze_lat(args) -> int:
    from .sboxes import build_lat, render_lat, row_sbox, wide_sbox

    q = _load_quasigroup(args)
    view = wide_sbox(q) if args.view == "wide" else row_sbox(q, args.leader)
    _write_output(args.out, render_lat(view, build_lat(view)))
    return EXIT_OK


def _analyze_diff_prop(args) -> int:
    from .cipher import Block
    from .experiments import diff_propagation_experiment

    delta = Block.from_hex(args.delta.lower()) if args.delta else Block.from_hex(
        "000000000000000f"
    )
    try:
        res = diff_propagation_experiment(args.rounds, delta, args.trials, seed=args.seed)
    except ValueError as e:
        raise UsageError(str(e))
    lines = [
        f"# difference propagation, {args.rounds} round(s), {args.trials} trials,"
        f" input difference {delta.to_hex()}",
        "# rows: round; columns: Sbox position; entries: activation frequency",
    ]
    for r in range(res.rounds):
        lines.append(" ".join(f"{v:6.3f}" for v in res.activation[r]))
    _write_output(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _analyze_avalanche(args) -> int:
    from .experiments import avalanche_plaintext, render_ranges

    res = avalanche_plaintext(
        args.trials, keys=args.keys, rounds=args.rounds, seed=args.seed, jobs=args.jobs
    )
    lines = [
        f"# plaintext avalanche: {args.trials} trials, {args.keys} keys,"
        f" {args.rounds} round(s), seed {args.seed}",
        render_ranges("avalanche", res.ranges).rstrip(),
        "per-bit mean flip percentage:",
    ]
    for i in range(0, 64, 8):
        lines.append(" ".join(f"{v:6.2f}" for v in res.per_bit_mean[i : i + 8]))
    _write_output(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _analyze_sac(args) -> int:
    from .experiments import render_ranges, sac_matrix

    res = sac_matrix(
        args.trials, keys=args.keys, rounds=args.rounds, seed=args.seed, jobs=args.jobs
    )
    lines = [
        f"# strict avalanche matrix: {args.trials} trials, {args.keys} keys, seed {args.seed}",
        render_ranges("strict avalanche", res.ranges).rstrip(),
        "# matrix rows: flipped plaintext bit; columns: ciphertext bit",
    ]
    for row in res.matrix:
        lines.append(" ".join(f"{v:5.3f}" for v in row))
    _write_output(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _analyze_key_avalanche(args) -> int:
    from .experiments import avalanche_key

    res = avalanche_key(args.trials, rounds=args.rounds, seed=args.seed)
    lines = [
        f"# key avalanche: {args.trials} trials, seed {args.seed}",
        f"min round-key bits flipped by any single key-bit flip: {res.min_roundkey_flips}",
        f"mean round-key flip fraction: {res.roundkey_flip_mean:.4f}",
        f"mean ciphertext flip fraction: {res.ct_flip_mean:.4f}",
    ]
    _write_output(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _analyze_nist(args) -> int:
    from .battery import nist_experiment

    report = nist_experiment(
        args.mode,
        input_fill=args.input,
        keys=args.keys,
        bits_per_seq=args.bits,
        seed=args.seed,
        jobs=args.jobs,
    )
    text = report.render_table()
    if args.machine:
        text += report.machine_lines()
    _write_output(args.out, text)
    return EXIT_OK


def _analyze_algsys(args) -> int:
    from .algsys import emit_algebraic_system

    try:
        system = emit_algebraic_system(args.rounds)
    except ValueError as e:
        raise UsageError(str(e))
    _write_output(args.out, system.render())
    return EXIT_OK


def _analyze_qg_check(args) -> int:
    from .anf import algebraic_degree
    from .quasigroup import conjugate, has_proper_subquasigroup, is_medial, is_simple

    q = _load_quasigroup(args)
    medial, witness = is_medial(q)
    degrees = {algebraic_degree(q, m) for m in range(1, q.order)}
    conj_degrees = {algebraic_degree(conjugate(q, "left"), m) for m in range(1, q.order)}
    lines = [
        "latin=true",  # construction rejects non-Latin tables
        f"subquasigroup={'true' if has_proper_subquasigroup(q) else 'false'}",
        f"medial={'true' if medial else 'false'}"
        + (f" witness={witness}" if witness else ""),
        f"simple={'true' if is_simple(q) else 'false'}",
        f"degree={'/'.join(str(d) for d in sorted(degrees))}",
        f"left_conjugate_degree={'/'.join(str(d) for d in sorted(conj_degrees))}",
    ]
    _write_output(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


_ANALYZERS = {
    "ddt": _analyze_ddt,
    "lat": _analyze_lat,
    "diff-prop": _analyze_diff_prop,
    "avalanche": _analyze_avalanche,
    "sac": _analyze_sac,
    "key-avalanche": _analyze_key_avalanche,
    "nist": _analyze_nist,
    "algsys": _analyze_algsys,
    "qg-check": _analyze_qg_check,
}


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inru", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_key_iv(sp):
        sp.add_argument("--key", required=True, help="master key, 32 hex digits")
        sp.add_argument("--iv", help="key-schedule diversifier, 16 hex digits (default zero)")

    for name, fn in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        sp = sub.add_parser(name, help=f"{name} a file under a mode of operation")
        add_key_iv(sp)
        sp.add_argument("--mode", choices=["cbc", "cfb", "ofb", "ctr"], default="ctr")
        sp.add_argument("--mode-iv", help="CBC/CFB/OFB chaining IV, 16 hex digits")
        sp.add_argument("--nonce", help="CTR nonce, 8 hex digits")
        sp.add_argument("--padding", choices=["pkcs7", "none"], default="pkcs7")
        sp.add_argument("--in", dest="infile", required=True, help="input file")
        sp.add_argument("--out", required=True, help="output file")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("keyschedule", help="print the mixed key state and round keys")
    add_key_iv(sp)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_keyschedule)

    sp = sub.add_parser("vectors", help="generate or verify known-answer vectors")
    sp.add_argument("action", choices=["generate", "verify"])
    sp.add_argument("file", nargs="?", help="vector file to verify")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output file for generate (default stdout)")
    sp.set_defaults(func=cmd_vectors)

    sp = sub.add_parser("analyze", help="run an analysis instrument")
    sp.add_argument("instrument", choices=sorted(_ANALYZERS))
    sp.add_argument("--view", choices=["wide", "row"], default="wide", help="sbox view for ddt/lat")
    sp.add_argument("--leader", type=lambda s: int(s, 16), default=0, help="row-sbox leader (hex)")
    sp.add_argument("--square", help="Latin square file (default: built-in)")
    sp.add_argument("--rounds", type=int, default=16)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--keys", type=int, default=6)
    sp.add_argument("--bits", type=int, default=1 << 20)
    sp.add_argument("--mode", choices=["cbc", "cfb", "ofb", "ctr"], default="ctr")
    sp.add_argument("--input", choices=["zeros", "ones"], default="zeros")
    sp.add_argument("--delta", help="input difference for diff-prop, 16 hex digits")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=_default_jobs())
    sp.add_argument("--machine", action="store_true", help="append machine-readable lines")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_analyze)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
