import json
import random
import subprocess
import sys

from dalgebra.algebraic.bipoly import BivariatePoly, read_poly
from dalgebra.cli import EXIT_ERROR, EXIT_NOT_FOUND, EXIT_OK, main
from dalgebra.linalg import word_primes
from dalgebra.pipeline import residue_path
from dalgebra.series import PowerSeries, reduce_mod
from dalgebra.seriesio import read_series, write_series
from dalgebra.generators.tutte import tutte_series


def run(tmp_path, *argv):
    report = tmp_path / "report.json"
    code = main(list(argv) + ["--report", str(report)])
    return code, json.loads(report.read_text())


def test_generate_and_reduce(tmp_path):
    out = tmp_path / "t4.series"
    code, rep = run(tmp_path, "generate", "--tutte", "4", "--N", "30", "--out", str(out))
    assert code == EXIT_OK and rep["head"][:4] == ["0", "0", "12", "24"]
    code, rep = run(tmp_path, "reduce", "--in", str(out), "--modulus", "2^5", "--out",
                    str(tmp_path / "r"))
    assert code == EXIT_OK
    R = read_series(tmp_path / "r")
    assert (R.domain.p, R.domain.r) == (2, 5)


def test_guess_algebraic_found_and_not_found(tmp_path):
    code, rep = run(tmp_path, "guess-algebraic", "--tutte", "-1", "--normalized", "--N", "300",
                    "--prime", "5", "--out", str(tmp_path / "p"))
    assert code == EXIT_OK and rep["degrees"] == [2, 5]
    expect = BivariatePoly.from_expr("2*x^3*(2+x+x^2)+x*F+F^2", 5)
    assert read_poly(tmp_path / "p").same_up_to_unit(expect)
    code, rep = run(tmp_path, "guess-algebraic", "--tutte", "4", "--N", "40", "--prime", "5",
                    "--dy-max", "1", "--dx-max", "2")
    assert code == EXIT_NOT_FOUND and "dy <= 1" in rep["certificate"]


def test_guess_algebraic_frobenius(tmp_path):
    code, rep = run(tmp_path, "guess-algebraic", "--named", "composition_H1H2", "--N", "400",
                    "--prime", "3", "--frobenius")
    assert code == EXIT_OK


def test_guess_algebraic_bad_modulus(tmp_path):
    code, rep = run(tmp_path, "guess-algebraic", "--tutte", "4", "--N", "40", "--prime", "9")
    assert code == EXIT_ERROR and rep["status"] == "error"


def test_guess_ade_explicit_form(tmp_path):
    code, rep = run(tmp_path, "guess-ade", "--recurrence", "divergent_c2", "--N", "34",
                    "--m", "2", "--k", "1", "--d", "3", "--out", str(tmp_path / "rel.json"))
    assert code == EXIT_OK
    assert rep["form"] == [2, 1, 3, False] and rep["verified_through"] == 33
    assert len(rep["terms"]) == 4
    assert json.loads((tmp_path / "rel.json").read_text())["form"] == [2, 1, 3, False]


def test_guess_ade_modular_and_shift(tmp_path):
    code, rep = run(tmp_path, "guess-ade", "--tutte", "4", "--N", "60", "--mod", "7",
                    "--m", "2", "--k", "2", "--d", "1")
    assert code == EXIT_OK and rep["modulus"] == 7
    code, rep = run(tmp_path, "guess-ade", "--recurrence", "divergent_c2", "--N", "80",
                    "--auto", "--exclude-holonomic", "--shift", "0", "--shift", "2")
    assert code == EXIT_OK and rep["tried"][-1]["status"] == "found"


def test_guess_ade_not_found_and_usage_errors(tmp_path):
    src = tmp_path / "noise"
    rnd = random.Random(3)
    write_series(PowerSeries.from_list([rnd.randint(-9, 9) for _ in range(60)]), src)
    code, rep = run(tmp_path, "guess-ade", "--in", str(src), "--auto", "--exclude-holonomic")
    assert code == EXIT_NOT_FOUND and "forms" in rep["certificate"]
    code, rep = run(tmp_path, "guess-ade", "--in", str(src), "--m", "2")
    assert code == EXIT_ERROR
    code, rep = run(tmp_path, "guess-ade", "--in", str(src), "--m", "9", "--k", "3", "--d", "9")
    assert code == EXIT_ERROR and "InsufficientTerms" in rep["error"]


def test_guess_recurrence(tmp_path):
    code, rep = run(tmp_path, "guess-recurrence", "--tutte", "4", "--N", "60", "--window", "1",
                    "--degrees", "1,1")
    assert code == EXIT_NOT_FOUND


def test_analyze_modes(tmp_path):
    code, rep = run(tmp_path, "analyze", "--mode", "xc")
    assert code == EXIT_OK and abs(rep["xc"] - 0.046028337184) < 1e-9
    code, rep = run(tmp_path, "analyze", "--named", "composition_H1H2", "--N", "200",
                    "--mode", "radius")
    assert code == EXIT_OK and rep["sign_pattern"] == "constant"
    csv_path = tmp_path / "sing.csv"
    code, rep = run(tmp_path, "analyze", "--tutte", "4", "--N", "120", "--mode", "diffpade",
                    "--order", "1", "--degree", "10", "--order", "2", "--degree", "8",
                    "--out", str(csv_path))
    assert code == EXIT_OK
    assert csv_path.read_text().startswith("order,degree,re_x,im_x,re_exponent,im_exponent,kind")
    code, rep = run(tmp_path, "analyze", "--recurrence", "divergent_c2", "--N", "300",
                    "--mode", "borel")
    assert code == EXIT_OK and abs(rep["c"] - 0.21795078) < 1e-3


def test_borel_round_trip(tmp_path):
    code, _ = run(tmp_path, "borel", "--recurrence", "divergent_c2", "--N", "20",
                  "--out", str(tmp_path / "b"))
    assert code == EXIT_OK
    code, _ = run(tmp_path, "borel", "--in", str(tmp_path / "b"), "--inverse",
                  "--out", str(tmp_path / "back"))
    assert read_series(tmp_path / "back").coeffs[:6] == [0, 0, 1, 1, 3, 14]


def test_crt_combine_and_strict(tmp_path):
    F = tutte_series(4, 40).to_integer()
    # Tutte coefficients outgrow 4^n, so size the primes from the data
    bits = max(abs(c) for c in F.coeffs).bit_length() + 2
    paths = []
    for p in word_primes(bits // 30 + 2, bits=31):
        path = residue_path(str(tmp_path), "t4", p)
        write_series(reduce_mod(F, p), path, "t4")
        paths.append(path)
    code, rep = run(tmp_path, "crt-combine", *paths, "--out", str(tmp_path / "t4"))
    assert code == EXIT_OK and rep["sufficient"]
    assert read_series(tmp_path / "t4") == F
    code, rep = run(tmp_path, "crt-combine", paths[0], "--strict")
    assert code == EXIT_ERROR


def test_prime_plan(tmp_path):
    code, rep = run(tmp_path, "prime-plan", "--N", "5043", "--out", str(tmp_path / "primes"))
    assert code == EXIT_OK and 670 <= rep["count"] <= 700
    assert len((tmp_path / "primes").read_text().split()) == rep["count"]


def test_verify_funceq_exit_codes(tmp_path):
    good = tmp_path / "g"
    write_series(PowerSeries.from_list([0] * 20), good)
    code, rep = run(tmp_path, "verify-funceq", "--in", str(good), "--modulus", "8", "--b", "0")
    assert code == EXIT_OK and rep["passed"]
    code, rep = run(tmp_path, "verify-funceq", "--in", str(good))
    assert code == EXIT_NOT_FOUND and rep["first_failure"] == 3


def test_batch_exit_codes(tmp_path):
    ok = tmp_path / "ok.json"
    ok.write_text(json.dumps({"jobs": [
        {"id": "a", "kind": "generate", "params": {"source": {"tutte": 4, "N": 10}}}]}))
    assert main(["batch", str(ok)]) == EXIT_OK
    empty = tmp_path / "empty.json"
    empty.write_text('{"jobs": []}')
    assert main(["batch", str(empty)]) == EXIT_OK
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"jobs": [
        {"id": "a", "kind": "generate", "params": {"source": {"tutte": 4, "N": 10}}},
        {"id": "b", "kind": "generate", "params": {"source": {"file": str(tmp_path / "none")}}}]}))
    code, rep = run(tmp_path, "batch", str(bad))
    assert code == EXIT_ERROR and rep["summary"] == {"ok": 1, "error": 1}
    assert main(["batch", str(tmp_path / "missing.json")]) == EXIT_ERROR


def test_missing_input_is_an_error(tmp_path):
    assert main(["generate"]) == EXIT_ERROR
    assert main(["generate", "--in", str(tmp_path / "nope")]) == EXIT_ERROR


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "dalgebra.cli", "prime-plan", "--N", "15"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("3 primes")
