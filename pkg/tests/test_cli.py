import json
import math
import os

import numpy as np
import pytest

from diffractkit.cli import main
from diffractkit.comb import read_comb
from diffractkit.config import parse_config
from diffractkit.errors import ConfigError

A = repr(math.sqrt(2.0) - 1.0)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.mark.parametrize("fixture, region, params, count", [
    ("lattice", (-10, 10), [], 21),
    ("a-defect", (-1000, 1000), [f"a={A}"], 1999),
])
def test_generate_counts(tmp_path, capsys, fixture, region, params, count):
    out = str(tmp_path / "g.comb")
    argv = ["generate", "--fixture", fixture, "--region", *map(str, region), "--out", out]
    for p in params:
        argv += ["--param", p]
    assert main(argv) == 0
    assert len(read_comb(out)) == count
    assert f"wrote {count} atoms" in capsys.readouterr().out


def test_generate_fibonacci_density(tmp_path):
    out = str(tmp_path / "f.comb")
    assert main(["generate", "--fixture", "fibonacci", "--region", "-100", "100",
                 "--out", out]) == 0
    assert abs(len(read_comb(out)) - 200 * (1 + math.sqrt(5)) / 2 / math.sqrt(5)) <= 2


def test_generate_from_config(tmp_path):
    cfg = write(tmp_path, "g.ini", f"[input]\nfixture = lattice\nregion = -3, 3\n"
                                   f"[output]\ndir = {tmp_path}\nprefix = z\n")
    assert main(["generate", cfg]) == 0
    assert np.array_equal(read_comb(str(tmp_path / "z.comb")).x, np.arange(-3.0, 4.0))


def test_unknown_fixture(tmp_path, capsys):
    assert main(["generate", "--fixture", "nope", "--region", "0", "1",
                 "--out", str(tmp_path / "x.comb")]) == 1
    assert "error" in capsys.readouterr().err


def test_round_trip_through_comb_file(tmp_path):
    comb = str(tmp_path / "a.comb")
    main(["generate", "--fixture", "a-defect", "--param", f"a={A}",
          "--region", "-3000", "3000", "--out", comb])
    cfg = write(tmp_path, "m.ini", f"[input]\nfile = {comb}\n[experiment]\nkind = mean\n"
                                   f"n = 2000\n[output]\ndir = {tmp_path / 'out'}\n")
    assert main(["run", cfg]) == 0
    rep = json.loads((tmp_path / "out" / "mean.json").read_text())["report"]
    assert rep["status"] == "converged" and rep["limit"][0] == pytest.approx(1.0, abs=1e-3)


def test_region_underflow_exit_code(tmp_path, capsys):
    comb = str(tmp_path / "small.comb")
    main(["generate", "--fixture", "lattice", "--region", "-100", "100", "--out", comb])
    cfg = write(tmp_path, "u.ini", f"[input]\nfile = {comb}\n[experiment]\nkind = mean\n"
                                   f"n = 1000\n[output]\ndir = {tmp_path}\n")
    assert main(["run", cfg]) == 2
    assert "region underflow" in capsys.readouterr().err


def test_undetermined_exit_code(tmp_path):
    cfg = write(tmp_path, "c.ini", f"[input]\nfixture = a-defect\na = {A}\n"
                                   "[experiment]\nkind = cpp\nfreqs = 0.3\nn = 2000\n"
                                   "require_verdict = yes\n[tolerances]\ntol = 1e-12\n"
                                   f"[output]\ndir = {tmp_path}\n")
    assert main(["run", cfg]) == 3


def test_run_is_deterministic(tmp_path):
    text = (f"[input]\nfixture = a-defect\na = {A}\n[experiment]\nkind = weyl\n"
            "family = symmetric, skew:2\nn = 500\nrandom_shifts = 3\n[rng]\nseed = 7\n")
    outputs = []
    for run in ("one", "two"):
        cfg = write(tmp_path, f"{run}.ini", text + f"[output]\ndir = {tmp_path / run}\n")
        assert main(["run", cfg]) == 0
        d = tmp_path / run
        outputs.append({p: (d / p).read_bytes() for p in sorted(os.listdir(d))})
    assert outputs[0] == outputs[1] and len(outputs[0]) == 4


def test_exports_echo_config(tmp_path):
    cfg = write(tmp_path, "e.ini", "[input]\nfixture = lattice\n[experiment]\n"
                                   "kind = fourier_bohr\nfreqs = 1, 0.5\nn = 200\n"
                                   f"[output]\ndir = {tmp_path}\nprefix = fb\n")
    assert main(["run", cfg, "--figures"]) == 0
    csv_text = (tmp_path / "fb_k1.csv").read_text()
    assert csv_text.startswith("# kind=fourier_bohr\n# input=lattice")
    assert json.loads((tmp_path / "fb_k0.5.json").read_text())["config"][0] == "kind=fourier_bohr"
    assert (tmp_path / "fb_k1.png").stat().st_size > 0


def test_verify_suite_with_csv(tmp_path, capsys):
    out = str(tmp_path / "v.csv")
    assert main(["verify", "lattice", "--csv", out]) == 0
    text = capsys.readouterr().out
    assert "PASS" in text and "FAIL" not in text
    assert open(out).read().count("\n") >= 5


def test_export(tmp_path):
    cfg = write(tmp_path, "x.ini", "[input]\nfixture = lattice\nregion = 0, 4\n"
                                   f"[output]\ndir = {tmp_path}\nprefix = lat\nfigures = yes\n")
    assert main(["export", cfg]) == 0
    rows = (tmp_path / "lat_atoms.csv").read_text().splitlines()
    assert rows[-1] == "4.0,1.0,0.0"
    assert len(read_comb(str(tmp_path / "lat.comb"))) == 5
    assert (tmp_path / "lat.png").exists()


def test_bad_value_reports_line(tmp_path, capsys):
    cfg = write(tmp_path, "bad.ini", "[input]\nfixture = lattice\n\n[experiment]\n"
                                     "n = many\n")
    assert main(["run", cfg]) == 1
    assert "bad.ini:5:" in capsys.readouterr().err


def test_config_errors():
    with pytest.raises(ConfigError) as exc:
        parse_config("[input]\nfixture = lattice\n[experiment]\ncolour = red\n")
    assert exc.value.lineno == 4
    with pytest.raises(ConfigError) as exc:
        parse_config("[input]\nfixture = lattice\n[bogus]\n")
    assert exc.value.lineno == 3
    with pytest.raises(ConfigError, match="seed"):
        parse_config("[input]\nfixture = lattice\n[experiment]\nrandom_shifts = 4\n")
    with pytest.raises(ConfigError, match="frequency"):
        parse_config("[input]\nfixture = lattice\n[experiment]\nkind = cpp\n")
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config("[experiment]\nkind = mean\n")
    with pytest.raises(ConfigError, match="positive"):
        parse_config("[input]\nfixture = lattice\n[tolerances]\ntol = 0\n")


def test_config_parses_families_and_pairs():
    cfg = parse_config("[input]\nfixture = blocks\nregion = -5, 5\n[experiment]\n"
                       "kind = mean\nfamilies = symmetric; alternating\nk_range = 0, 3\n")
    assert [f.kind for f in cfg.families] == ["symmetric", "alternating"]
    assert cfg.region == (-5.0, 5.0) and cfg.k_range == (0.0, 3.0)


def test_generate_round_trip_is_atom_exact(tmp_path):
    from diffractkit.fixtures import a_defect
    out = str(tmp_path / "a.comb")
    main(["generate", "--fixture", "a-defect", "--param", f"a={A}",
          "--region", "-50", "50", "--out", out])
    back = read_comb(out)
    ref = a_defect(float(A)).comb(-50, 50)
    assert np.array_equal(back.x, ref.x) and np.array_equal(back.weights, ref.weights)


def test_run_cpp_on_lattice(tmp_path):
    cfg = write(tmp_path, "c.ini", "[input]\nfixture = lattice\n[experiment]\nkind = cpp\n"
                                   "freqs = 0, 1, 2\nn = 10000\n"
                                   f"[output]\ndir = {tmp_path}\n")
    assert main(["run", cfg]) == 0
    assert json.loads((tmp_path / "cpp.json").read_text())["table"]["verdict"] == "pass"
    text = (tmp_path / "cpp.csv").read_text()
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    assert rows[0].startswith("k,re_a") and len(rows) == 4


def test_run_fourier_bohr_alternating(tmp_path):
    cfg = write(tmp_path, "f.ini", f"[input]\nfixture = a-defect\na = {A}\n"
                                   "[experiment]\nkind = fourier_bohr\nfamily = alternating\n"
                                   f"freqs = 1\nn = 10000\n[output]\ndir = {tmp_path}\n")
    assert main(["run", cfg]) == 0
    rep = json.loads((tmp_path / "fourier_bohr_k1.json").read_text())["report"]
    assert rep["status"] == "oscillating" and len(rep["clusters"]) == 2


@pytest.mark.parametrize("suite", ["fibonacci", "nonexistence", "meanap"])
def test_verify_named_suites(suite, capsys):
    assert main(["verify", suite]) == 0
    assert "FAIL" not in capsys.readouterr().out
