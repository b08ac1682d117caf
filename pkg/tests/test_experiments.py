import math

import numpy as np
import pytest
import scipy.special as sp

from alphapoisson.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, main
from alphapoisson.errors import ConfigError
from alphapoisson.experiments import (
    ExperimentReport,
    cmd_gradient_bound,
    cmd_hardy_littlewood,
    cmd_heinz,
    cmd_kalaj,
    cmd_kalaj_constant,
    cmd_residual,
    ladder_verdict,
    richardson_limit,
)
from alphapoisson.selftest import run_selftest
from alphapoisson.solver import perturbed_kernel_constant


def kalaj_ref(n):
    f = sp.hyp2f1(0.5, 1.0, (n + 3) / 2, -1.0)
    return (math.factorial(n) * (1 + n - (n - 2) * f)
            / (2 ** (1.5 * n) * sp.gamma((n + 1) / 2) * sp.gamma((n + 3) / 2)))


@pytest.mark.parametrize("n", range(2, 9))
def test_kalaj_constant_against_scipy(n):
    assert cmd_kalaj_constant(n) == pytest.approx(kalaj_ref(n), rel=1e-13)


def test_kalaj_constant_values():
    assert cmd_kalaj_constant(2) == pytest.approx(2 / math.pi, abs=1e-14)
    assert cmd_kalaj_constant(3) == pytest.approx(math.sqrt(2) - 1, abs=1e-14)
    vals = [cmd_kalaj_constant(n) for n in range(2, 7)]
    assert all(0 < v < 1 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ConfigError):
        cmd_kalaj_constant(1)


def test_richardson_is_exact_on_linear_data():
    r = (0.9, 0.99, 0.999)
    q = [2.0 + 3.0 * (1 - x) for x in r]
    assert richardson_limit(r, q) == pytest.approx(2.0, abs=1e-12)


def test_ladder_verdict():
    assert ladder_verdict([1.0, 1.1, 1.2])
    assert not ladder_verdict([1.0, 1.1, 3.0])
    assert ladder_verdict([1e-14, 1e-12, 1e-10])
    assert not ladder_verdict([0.0, 0.0, 1e-3])


def test_report_csv_format():
    rep = ExperimentReport("demo", ["name", "x"], metadata={"n": 2})
    rep.add(name="a", x=0.1)
    rep.add(name="b", x=1 / 3)
    rep.verdict = True
    text = rep.to_csv()
    assert "\r" not in text
    lines = text.splitlines()
    assert lines[0] == "# command=demo"
    assert "# verdict=PASS" in lines
    header = lines.index("name,x")
    assert lines[header + 1] == "a,0.10000000000000001"
    assert lines[header + 2] == "b,0.33333333333333331"
    with pytest.raises(ValueError):
        rep.add(name="c")


def test_report_digest_ignores_timestamp():
    a = ExperimentReport("demo", ["x"], metadata={"timestamp": "t1"})
    b = ExperimentReport("demo", ["x"], metadata={"timestamp": "t2"})
    for r in (a, b):
        r.add(x=1.0)
    assert a.to_csv() != b.to_csv()
    assert a.digest() == b.digest()
    b.add(x=2.0)
    assert a.digest() != b.digest()


def test_heinz_rows_and_determinism():
    a = cmd_heinz(2, 1.0, "identity", zeta_count=3, seed=4)
    b = cmd_heinz(2, 1.0, "identity", zeta_count=3, seed=4)
    assert a.digest() == b.digest()
    assert len(a.rows) == 3 * 4
    for row in a.rows:
        assert {"n", "alpha", "phi", "seed", "nodes", "policy"} <= row.keys()
    assert a.verdict
    assert a.summary["floor"] == 0.5


def test_heinz_harmonic_branch():
    rep = cmd_heinz(2, 0.0, "identity", zeta_count=3)
    assert rep.summary["floor"] == pytest.approx(2 / math.pi)
    assert rep.summary["min_extrapolated"] == pytest.approx(1.0, abs=1e-8)
    assert rep.verdict


def test_heinz_preconditions():
    with pytest.raises(ConfigError):
        cmd_heinz(3, 0.5, "identity")
    with pytest.raises(ConfigError):
        cmd_heinz(2, -0.5, "identity")
    with pytest.raises(ConfigError):
        cmd_heinz(2, 1.0, "holder")
    with pytest.raises(ConfigError):
        cmd_heinz(2, 0.0, "twisted")  # u(0) != 0
    with pytest.raises(ConfigError):
        cmd_heinz(2, 1.0, "identity", r_ladder=(0.9,))


def test_heinz_twisted_weighted_branch_is_near_sharp():
    rep = cmd_heinz(2, 1.0, "twisted", zeta_count=8)
    assert rep.verdict
    assert rep.summary["min_margin"] < 0.01


def test_hardy_littlewood_constant_datum():
    rep = cmd_hardy_littlewood(2, 1.0, 0.5, pairs=1000, r_ladder=(0.9, 0.99), phi_name="one")
    assert rep.rows[0]["seminorm"] == 0.0
    assert rep.verdict
    with pytest.raises(ConfigError):
        cmd_hardy_littlewood(2, 1.0, 1.0, pairs=1000)
    with pytest.raises(ConfigError):
        cmd_hardy_littlewood(2, -0.5, 0.5, pairs=1000)


def test_gradient_bound_constant_harmonic_is_zero():
    rep = cmd_gradient_bound(2, 0.0, 1.0, phi_name="one", directions=8)
    assert max(rep.column("scaled")) < 1e-8
    assert rep.verdict
    with pytest.raises(ConfigError):
        cmd_gradient_bound(2, 1.0, 1.5)


def test_gradient_bound_lipschitz_datum_value():
    # the holder datum with beta = 1 has Lipschitz constant 1/2, the sup of its extension's gradient
    rep = cmd_gradient_bound(2, 1.0, 1.0, directions=16)
    assert rep.verdict
    assert max(rep.column("scaled")) == pytest.approx(0.5, abs=1e-3)


def test_residual_report():
    rep = cmd_residual(2, 0.0, "cos", 0.8, 10, 1e-3)
    assert [r["h"] for r in rep.rows] == [1e-3, 5e-4]
    assert rep.summary["residual"] <= 1e-6
    assert rep.verdict


def test_kalaj_table():
    rep = cmd_kalaj(range(2, 5))
    assert rep.column("n") == [2, 3, 4]


def test_selftest_passes_fails_under_mutation_and_is_deterministic():
    a = run_selftest()
    assert a.verdict
    assert a.digest() == run_selftest().digest()
    with perturbed_kernel_constant(1e-3):
        assert not run_selftest().verdict


# command line -------------------------------------------------------------

def test_cli_selftest_exit_codes(capsys):
    assert main(["selftest"]) == EXIT_PASS
    assert main(["selftest", "--perturb-c-alpha", "1e-3"]) == EXIT_FAIL
    out = capsys.readouterr().out
    assert "kernel_normalization" in out


def test_cli_kalaj_csv(tmp_path, capsys):
    out = tmp_path / "k.csv"
    assert main(["kalaj", "--n", "2", "--max-n", "4", "--csv", "--out", str(out)]) == EXIT_PASS
    text = out.read_text()
    assert "n,constant" in text
    assert "2,0.63661977236758" in text
    assert capsys.readouterr().out == text


def test_cli_config_error(capsys):
    assert main(["heinz", "--n", "3", "--alpha", "0.5"]) == EXIT_CONFIG
    assert "error" in capsys.readouterr().err
    assert main(["hl", "--beta", "1.0"]) == EXIT_CONFIG


def test_cli_numeric_error(capsys):
    # the linear node policy cannot reach r = 0.999 in three dimensions
    code = main(["heinz", "--n", "3", "--alpha", "2", "--policy", "linear", "--zetas", "1"])
    assert code == 3
    assert "numerical error" in capsys.readouterr().err


def test_cli_heinz_and_residual(capsys):
    assert main(["heinz", "--n", "2", "--alpha", "1", "--zetas", "2"]) == EXIT_PASS
    assert main(["residual", "--n", "2", "--alpha", "2", "--grid-count", "5"]) == EXIT_PASS
    assert main(["gradbound", "--n", "2", "--alpha", "1", "--directions", "8",
                 "--r-ladder", "0.5,0.9,0.99"]) == EXIT_PASS
    assert "verdict: PASS" in capsys.readouterr().out


def test_cli_deterministic_csv(tmp_path):
    paths = [tmp_path / f"{i}.csv" for i in range(2)]
    for p in paths:
        assert main(["heinz", "--n", "2", "--alpha", "1", "--zetas", "2", "--out", str(p)]) == 0
    strip = lambda p: [ln for ln in p.read_text().splitlines() if not ln.startswith("# timestamp=")]  # noqa: E731
    assert strip(paths[0]) == strip(paths[1])


def test_cmd_selftest_exit_code(capsys):
    from alphapoisson.experiments import cmd_selftest

    assert cmd_selftest() == 0
    assert cmd_selftest(1e-3) == 1
    assert "verdict: FAIL" in capsys.readouterr().out
