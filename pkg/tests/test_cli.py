import io
import sys

import pytest

from n2sca.cli import FAIL, INCONCLUSIVE, PASS, USAGE, main


@pytest.fixture()
def whittaker_cfg(tmp_path):
    path = tmp_path / "whittaker.cfg"
    path.write_text("family = whittaker\nlambda = 1\nc = 0\n")
    return str(path)


@pytest.fixture()
def generalized_cfg(tmp_path):
    path = tmp_path / "generalized.cfg"
    path.write_text(
        "family = generalized\nphi.L1 = 1\nphi.T3/2 = 1\nc = 0\n"
        "max_weight = 2\nmax_length = 3\n"
    )
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestBracket:
    def test_spec_example(self, capsys):
        code, out = run(["bracket", "G[1]", "G[-1/2]"], capsys)
        assert code == PASS
        assert out == "-3/2*T[1/2]\n"

    def test_untwisted_basis_flag(self, capsys):
        code, out = run(
            ["bracket", "G1[1/2]", "G2[-1/2]", "--algebra", "untwisted-12"], capsys
        )
        assert code == PASS and out == "-i*J[0]\n"

    def test_parse_error_exit_code(self, capsys):
        code, _ = run(["bracket", "G[1", "G[-1/2]"], capsys)
        assert code == USAGE

    def test_wrong_basis_exit_code(self, capsys):
        code, _ = run(["bracket", "G1[1/2]", "G1[-1/2]"], capsys)
        assert code == USAGE  # G1 is not in the twisted presentation


class TestJacobi:
    def test_twisted_passes(self, capsys):
        code, out = run(["jacobi", "--algebra", "twisted", "--window", "4"], capsys)
        assert code == PASS and "all pass" in out


class TestActReduce:
    def test_act(self, whittaker_cfg, capsys):
        code, out = run(
            ["act", "L[1] T[-1/2]", "--spec", whittaker_cfg, "--vector", "{}"],
            capsys,
        )
        assert code == PASS
        assert out == "1/2*w{}⊗v0\n"

    def test_reduce_spec_example(self, whittaker_cfg, capsys):
        code, out = run(
            ["reduce", "{1:1}", "--spec", whittaker_cfg, "--u", "1/2"], capsys
        )
        assert code == PASS
        lines = out.strip().splitlines()
        assert len(lines) == 3  # start, one step, terminal
        assert lines[-1] == "terminal\t1/2*w{}⊗v0"

    def test_missing_spec_file(self, capsys):
        code, _ = run(["reduce", "{1:1}", "--spec", "/nonexistent.cfg"], capsys)
        assert code == USAGE

    def test_truncation_exit_code(self, generalized_cfg, capsys):
        # pushing the seed's polynomial layer past its bound is inconclusive
        code, _ = run(
            ["act", "T[1/2]", "--spec", generalized_cfg,
             "--label", "T[1/2]^3.v0"],
            capsys,
        )
        assert code == INCONCLUSIVE


class TestAnnihilatorEnumerate:
    def test_annihilator_lists_kernel(self, whittaker_cfg, capsys):
        code, out = run(
            ["annihilator", "--spec", whittaker_cfg, "--t", "1/2",
             "--max-weight", "1", "--max-length", "2"],
            capsys,
        )
        assert code == PASS
        assert "w{}⊗v0" in out and "w{2:2}⊗v0" in out

    def test_enumerate(self, capsys):
        code, out = run(
            ["enumerate", "--max-weight", "0", "--max-length", "3"], capsys
        )
        assert code == PASS
        assert out.splitlines() == ["{2:3}", "{2:2}", "{2:1}", "{}"]


class TestClosure:
    def test_dichotomy_exit_codes(self, tmp_path, capsys):
        closed = tmp_path / "closed.cfg"
        closed.write_text(
            "family = generalized\nphi.L1 = 1\nphi.T3/2 = 0\nc = 0\n"
            "max_weight = 2\nmax_length = 3\n"
        )
        open_cfg = tmp_path / "open.cfg"
        open_cfg.write_text(
            "family = generalized\nphi.L1 = 1\nphi.T3/2 = 1\nc = 0\n"
            "max_weight = 2\nmax_length = 3\n"
        )
        code, out = run(
            ["closure", "--spec", str(closed), "--subspace", "seed:v1",
             "--window", "4", "--max-weight", "2", "--max-length", "3"],
            capsys,
        )
        assert code == PASS and "closed" in out
        code, out = run(
            ["closure", "--spec", str(open_cfg), "--subspace", "seed:v1",
             "--window", "4", "--max-weight", "2", "--max-length", "3"],
            capsys,
        )
        assert code == FAIL and "not closed" in out


class TestVerifyAndDemo:
    def test_verify_psi(self, capsys):
        code, out = run(["verify", "psi"], capsys)
        assert code == PASS
        assert out.startswith("case\tinputs\texpected\tgot\tstatus")

    def test_verify_orders_deterministic(self, capsys):
        code1, out1 = run(["verify", "orders", "--seed", "3"], capsys)
        code2, out2 = run(["verify", "orders", "--seed", "3"], capsys)
        assert code1 == code2 == PASS
        assert out1 == out2

    def test_verify_annihilator_reports_failure(self, capsys):
        code, out = run(["verify", "annihilator"], capsys)
        assert code == FAIL  # the criterion's expected span is too small
        assert "w{2:2}⊗v0" in out

    @pytest.mark.parametrize("which", ["whittaker", "generalized", "highorder", "b-t0"])
    def test_demos_run(self, which, capsys):
        code, out = run(["demo", which], capsys)
        assert code == PASS and out.startswith(f"demo: {which}")

    def test_output_flag_writes_file(self, tmp_path, capsys):
        target = tmp_path / "report.tsv"
        code, out = run(["verify", "psi", "--output", str(target)], capsys)
        assert code == PASS and out == ""
        assert target.read_text().startswith("case\t")


class TestRoundTrips:
    def test_bracket_output_reparses(self, capsys):
        from n2sca.algebra import parse_combo

        for x, y in (("G[1]", "G[-1/2]"), ("L[2]", "L[-2]"), ("G[0]", "G[0]")):
            _, out = run(["bracket", x, y], capsys)
            combo = parse_combo(out.strip())
            assert str(combo) == out.strip()

    def test_reduce_trace_vectors_reparse(self, whittaker_cfg, capsys):
        from n2sca.modules import load_spec_config

        _, out = run(
            ["reduce", "{1:1,2:1}", "--spec", whittaker_cfg], capsys
        )
        spec = load_spec_config(open(whittaker_cfg).read())
        module = spec.induced()
        terminal = out.strip().splitlines()[-1].split("\t")[1]
        v = module.parse_vector(terminal)
        assert str(v) == terminal
