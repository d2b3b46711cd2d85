import json

import pytest

from phasepoly.cli import main
from phasepoly.polynomial import from_text

SAMPLE = "qubits 3\nz 0\ns 1\nh 1\ncz 0 1\nt 2\nh 2\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compile_sample(capsys, write):
    code, out, _ = run(capsys, "compile", write("sample.txt", SAMPLE))
    assert code == 0
    doc = json.loads(out)
    assert len(doc["terms"]) == 6 and doc["constant"] == 0 and doc["ancillas"] == 2
    assert doc["wires"]["final"] == ["x0", "a0", "a1"]
    assert from_text(out).m == 2


def test_compile_empty(capsys, write):
    code, out, _ = run(capsys, "compile", write("e.txt", "qubits 2\n"))
    assert code == 0 and json.loads(out)["terms"] == []


def test_compile_errors(capsys, write):
    assert run(capsys, "compile", write("bad.txt", "qubits 1\nfoo 0\n"))[0] == 1
    code, _, err = run(capsys, "compile", write("dup.txt", "qubits 2\ncz 0 0\n"))
    assert code == 2 and "line 2" in err


def test_compile_to_file(capsys, write, tmp_path):
    out = tmp_path / "poly.json"
    assert run(capsys, "compile", write("c.txt", SAMPLE), "--out", str(out))[0] == 0
    assert from_text(out.read_text()).n == 3


def test_spectrum_z(capsys, write):
    code, out, _ = run(capsys, "spectrum", write("z.txt", "qubits 1\nz 0\n"))
    assert code == 0 and out.splitlines() == ["0 0 0", "1 2 0"]
    code, out, _ = run(capsys, "spectrum", "--naive", write("z2.txt", "qubits 1\nz 0\n"))
    assert out.splitlines() == ["0 0 0", "1 2 0"]


def test_spectrum_sandwich_empty(capsys, write):
    code, out, _ = run(capsys, "spectrum", "--sandwich", write("e.txt", "qubits 1\n"))
    assert code == 0 and out.splitlines() == ["0 1 0", "1 0 0"]


def test_spectrum_bitstrings_msb_first(capsys, write):
    # f = 4 a0 over (x0, a0): spectrum is 2 at u = (x0=0, a0=1), printed "10"
    code, out, _ = run(capsys, "spectrum", write("h.txt", "qubits 1\nh 0\n"))
    assert [line.split()[0] for line in out.splitlines()] == ["00", "01", "10", "11"]


def test_spectrum_cap(capsys, write):
    text = "qubits 1\n" + "h 0\n" * 29
    assert run(capsys, "spectrum", write("big.txt", text))[0] == 3


def test_amplitude_h(capsys, write):
    code, out, _ = run(capsys, "amplitude", write("h.txt", "qubits 1\nh 0\n"), "--input", "0")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2
    assert all(line.split()[1].startswith("0.70710678") for line in lines)


def test_amplitude_toffoli_single_entries(capsys, write):
    # bit strings are most significant first: "110" sets qubits 2 and 1
    path = write("tof.txt", "qubits 3\ntoffoli 2 1 0\n")
    assert run(capsys, "amplitude", path, "--input", "110", "--output", "111")[1] == "1 0\n"
    assert run(capsys, "amplitude", path, "--input", "110", "--output", "110")[1] == "0 0\n"


def test_amplitude_length_mismatch(capsys, write):
    path = write("h.txt", "qubits 1\nh 0\n")
    assert run(capsys, "amplitude", path, "--input", "01")[0] == 2


def test_verify_swap_file(capsys, write, tmp_path):
    report = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "verify", write("s.txt", "qubits 2\nswap 0 1\n"), "--report", str(report))
    assert code == 0
    assert json.loads(report.read_text().splitlines()[0])["passed"]


def test_verify_polynomial_path_matches_in_process(capsys, write, tmp_path):
    circuit = write("t.txt", "qubits 3\ntoffoli 0 1 2\n")
    poly = tmp_path / "t.json"
    run(capsys, "compile", circuit, "--out", str(poly))
    r1, r2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run(capsys, "verify", circuit, "--polynomial", str(poly), "--report", str(r1))[0] == 0
    assert run(capsys, "verify", circuit, "--report", str(r2))[0] == 0
    a = json.loads(r1.read_text())
    b = json.loads(r2.read_text())
    assert a["per_input_deviation"] == pytest.approx(b["per_input_deviation"], abs=1e-12)


def test_verify_fixtures(capsys, tmp_path):
    report = tmp_path / "fx.jsonl"
    code, out, _ = run(capsys, "verify", "--fixtures", "--report", str(report))
    assert code == 0
    names = [json.loads(line)["description"] for line in report.read_text().splitlines()]
    assert names == ["sample", "swap", "toffoli"]


def test_verify_corrupted_fixture(capsys, tmp_path):
    import shutil

    from phasepoly.verify import fixtures_dir

    for f in fixtures_dir().iterdir():
        shutil.copy(f, tmp_path / f.name)
    doc = json.loads((tmp_path / "swap.json").read_text())
    # an extra S phase on x0; plain term deletions can survive the output-wire search
    doc["terms"].append({"vars": ["x0"], "coeff": 2})
    (tmp_path / "swap.json").write_text(json.dumps(doc))
    code, _, _ = run(
        capsys, "verify", "--fixtures", "--fixtures-dir", str(tmp_path),
        "--report", str(tmp_path / "r.jsonl"),
    )
    assert code == 4


def test_verify_corpus(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--corpus", "3", "10", "--report", str(tmp_path / "r.jsonl"), "-q")
    assert code == 0 and "10/10 passed" in out


def test_verify_needs_a_target(capsys):
    assert run(capsys, "verify")[0] == 2


@pytest.mark.parametrize("name", ["sample", "swap", "toffoli"])
def test_demo(capsys, name):
    code, out, _ = run(capsys, "demo", name)
    assert code == 0 and "verification: pass" in out


def test_demo_sample_polynomial(capsys):
    out = run(capsys, "demo", "sample")[1]
    assert "4x0 + 2x1 + 4x1a0 + 4x0a0 + x2 + 4x2a1" in out


def test_demo_swap_terms(capsys):
    out = run(capsys, "demo", "swap")[1]
    assert "terms: 9" in out and "ancillas: 6" in out


def test_demo_unknown(capsys):
    assert run(capsys, "demo", "nosuch")[0] == 2


def test_bad_tolerance():
    with pytest.raises(SystemExit) as info:
        main(["verify", "--corpus", "1", "1", "--tol", "0"])
    assert info.value.code == 2
