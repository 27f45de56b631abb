import os
import subprocess
import sys

import pytest

from inru.cli import main

KEY = "000102030405060708090a0b0c0d0e0f"


def run_cli(*args):
    return main(list(args))


def test_encrypt_decrypt_round_trip_ctr(tmp_path):
    src = tmp_path / "plain.bin"
    enc = tmp_path / "ct.bin"
    dec = tmp_path / "out.bin"
    data = bytes(range(256)) * 17 + b"tail"
    src.write_bytes(data)
    assert run_cli("encrypt", "--key", KEY, "--mode", "ctr", "--nonce", "0a0b0c0d",
                   "--in", str(src), "--out", str(enc)) == 0
    assert enc.read_bytes() != data
    assert run_cli("decrypt", "--key", KEY, "--mode", "ctr", "--nonce", "0a0b0c0d",
                   "--in", str(enc), "--out", str(dec)) == 0
    assert dec.read_bytes() == data


def test_encrypt_decrypt_megabyte_file(tmp_path):
    src = tmp_path / "big.bin"
    enc = tmp_path / "big.ct"
    dec = tmp_path / "big.out"
    data = os.urandom(1 << 20)
    src.write_bytes(data)
    assert run_cli("encrypt", "--key", KEY, "--mode", "ctr",
                   "--in", str(src), "--out", str(enc)) == 0
    assert run_cli("decrypt", "--key", KEY, "--mode", "ctr",
                   "--in", str(enc), "--out", str(dec)) == 0
    assert dec.read_bytes() == data


def test_empty_file_ctr(tmp_path):
    src = tmp_path / "empty"
    out = tmp_path / "out"
    src.write_bytes(b"")
    assert run_cli("encrypt", "--key", KEY, "--mode", "ctr",
                   "--in", str(src), "--out", str(out)) == 0
    assert out.read_bytes() == b""


def test_cbc_round_trip_with_mode_iv(tmp_path):
    src = tmp_path / "msg"
    enc = tmp_path / "ct"
    dec = tmp_path / "pt"
    src.write_bytes(b"attack at dawn")
    assert run_cli("encrypt", "--key", KEY, "--mode", "cbc",
                   "--mode-iv", "0123456789abcdef",
                   "--in", str(src), "--out", str(enc)) == 0
    assert run_cli("decrypt", "--key", KEY, "--mode", "cbc",
                   "--mode-iv", "0123456789abcdef",
                   "--in", str(enc), "--out", str(dec)) == 0
    assert dec.read_bytes() == b"attack at dawn"


def test_truncated_cbc_gives_data_error(tmp_path, capsys):
    src = tmp_path / "msg"
    enc = tmp_path / "ct"
    out = tmp_path / "pt"
    src.write_bytes(b"0123456789abcdef")
    run_cli("encrypt", "--key", KEY, "--mode", "cbc", "--in", str(src), "--out", str(enc))
    enc.write_bytes(enc.read_bytes()[:-8])  # drop the final block
    rc = run_cli("decrypt", "--key", KEY, "--mode", "cbc", "--in", str(enc), "--out", str(out))
    assert rc == 3
    assert not out.exists()  # no partial output


def test_bad_hex_is_usage_error(tmp_path):
    src = tmp_path / "msg"
    src.write_bytes(b"x")
    rc = run_cli("encrypt", "--key", "zz", "--in", str(src), "--out", str(tmp_path / "o"))
    assert rc == 2
    rc = run_cli("encrypt", "--key", KEY, "--nonce", "xyz",
                 "--in", str(src), "--out", str(tmp_path / "o"))
    assert rc == 2


def test_missing_input_is_io_error(tmp_path):
    rc = run_cli("encrypt", "--key", KEY, "--in", str(tmp_path / "absent"),
                 "--out", str(tmp_path / "o"))
    assert rc == 4


def test_keyschedule_zero_vector(capsys):
    assert run_cli("keyschedule", "--key", "0" * 32) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == (
        "mixed=fbdd08377aa8304a027ef3dc3a8fe09d64cf05fa1c391bea9ec701363aa49117"
    )
    assert lines[1] == "rk0=a3f94d18fd9a0b37"
    assert lines[-1] == "rk16=78b364fa69e42d63"
    assert len(lines) == 18


def test_keyschedule_deterministic(capsys):
    run_cli("keyschedule", "--key", KEY, "--iv", "fedcba9876543210")
    first = capsys.readouterr().out
    run_cli("keyschedule", "--key", KEY, "--iv", "fedcba9876543210")
    assert capsys.readouterr().out == first


def test_vectors_generate_verify_cycle(tmp_path, capsys):
    vf = tmp_path / "vec.txt"
    assert run_cli("vectors", "generate", "--count", "25", "--seed", "9",
                   "--out", str(vf)) == 0
    assert run_cli("vectors", "verify", str(vf)) == 0
    assert "25 vectors verified" in capsys.readouterr().out


def test_vectors_corruption_detected(tmp_path, capsys):
    vf = tmp_path / "vec.txt"
    run_cli("vectors", "generate", "--count", "10", "--seed", "1", "--out", str(vf))
    lines = vf.read_text().splitlines()
    bad = lines[3]
    digit = bad[-1]
    lines[3] = bad[:-1] + ("0" if digit != "0" else "1")
    vf.write_text("\n".join(lines) + "\n")
    rc = run_cli("vectors", "verify", str(vf))
    assert rc == 3
    captured = capsys.readouterr()
    assert "1 of 10 vectors failed" in captured.err
    assert captured.out.count("vector ") == 1  # exactly one offending line reported


def test_shipped_vectors_verify(capsys):
    from importlib.resources import files

    path = files("inru.data").joinpath("known_answer_vectors.txt")
    assert run_cli("vectors", "verify", str(path)) == 0


def test_vectors_generate_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_cli("vectors", "generate", "--count", "5", "--seed", "4", "--out", str(a))
    run_cli("vectors", "generate", "--count", "5", "--seed", "4", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_analyze_qg_check(capsys):
    assert run_cli("analyze", "qg-check") == 0
    out = capsys.readouterr().out
    assert "latin=true" in out
    assert "subquasigroup=false" in out
    assert "medial=false" in out
    assert "simple=true" in out
    assert "degree=6" in out
    assert "left_conjugate_degree=6" in out


def test_analyze_algsys_reports_256_variables(capsys):
    assert run_cli("analyze", "algsys", "--rounds", "2") == 0
    out = capsys.readouterr().out
    assert "256 unknowns remain" in out
    assert "128 nonlinear" in out


def test_analyze_ddt_and_lat(tmp_path):
    out = tmp_path / "ddt.txt"
    assert run_cli("analyze", "ddt", "--view", "wide", "--out", str(out)) == 0
    assert "max entry over nonzero input differences: 42" in out.read_text()
    assert run_cli("analyze", "lat", "--view", "row", "--leader", "b",
                   "--out", str(out)) == 0
    assert "leader b" in out.read_text()


def test_analyze_diff_prop(capsys):
    assert run_cli("analyze", "diff-prop", "--rounds", "2", "--trials", "50") == 0
    out = capsys.readouterr().out
    assert "activation frequency" in out
    assert " 1.000" in out


def test_analyze_unknown_instrument():
    with pytest.raises(SystemExit) as exc:
        run_cli("analyze", "nonsense")
    assert exc.value.code == 2


def test_analyze_nist_seeded_identical_and_fast(tmp_path):
    import time

    a, b = tmp_path / "a", tmp_path / "b"
    args = ["analyze", "nist", "--mode", "ctr", "--keys", "4",
            "--bits", str(1 << 16), "--seed", "3", "--machine"]
    t0 = time.perf_counter()
    assert run_cli(*args, "--out", str(a)) == 0
    assert time.perf_counter() - t0 < 60  # smoke benchmark
    assert run_cli(*args, "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "ctr,zeros," in a.read_text()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "inru.cli", "analyze", "qg-check"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "simple=true" in proc.stdout
