import pytest

from expanders import from_text
from expanders.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSample:
    def test_matrix_output_and_determinism(self, capsys):
        argv = ["sample", "--n", "40", "--N", "200", "--d", "4", "--seed", "7"]
        code, out1, _ = run(capsys, *argv)
        assert code == 0
        code, out2, _ = run(capsys, *argv)
        assert out1 == out2
        matrix = from_text(out1)
        assert (matrix.N, matrix.n, matrix.d) == (200, 40, 4)

    def test_file_output_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            code, _, _ = run(
                capsys, "sample", "--n", "8", "--N", "10", "--d", "2",
                "--seed", "3", "--out", str(path),
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"\r" not in a.read_bytes()


class TestCertifyAndRip(object):
    @pytest.fixture()
    def matrix_file(self, capsys, tmp_path):
        path = tmp_path / "m.txt"
        run(capsys, "sample", "--n", "8", "--N", "10", "--d", "2",
            "--seed", "3", "--out", str(path))
        return str(path)

    def test_certify_csv(self, capsys, matrix_file):
        code, out, _ = run(
            capsys, "certify", "--matrix", matrix_file, "--s", "2", "--eps", "0.25"
        )
        assert code == 0
        header, row = out.strip().split("\n")
        assert header == "is_expander,worst_ratio,sets_checked,worst_set"
        fields = row.split(",")
        assert fields[0] in ("true", "false")
        assert fields[2] == "55"

    def test_rip1_range(self, capsys, matrix_file):
        code, out, _ = run(
            capsys, "rip1", "--matrix", matrix_file, "--s", "2",
            "--trials", "2000", "--seed", "1",
        )
        assert code == 0
        low, high = map(float, out.strip().split("\n")[1].split(","))
        assert 0.0 < low <= high <= 1.0 + 1e-12


class TestMcTail:
    def test_fixed_set(self, capsys):
        code, out, _ = run(
            capsys, "mc-tail", "--s", "2", "--n", "4", "--d", "1",
            "--a-s", "1", "--trials", "20000", "--seed", "7",
        )
        assert code == 0
        p_hat = float(out.strip().split("\n")[1].split(",")[0])
        assert abs(p_hat - 0.25) < 0.02

    def test_all_sets_requires_N(self, capsys):
        code, _, err = run(
            capsys, "mc-tail", "--s", "2", "--n", "4", "--d", "1",
            "--a-s", "1", "--trials", "10", "--all-sets",
        )
        assert code == 1
        assert "error" in err


class TestBound:
    def test_union_row(self, capsys):
        code, out, _ = run(
            capsys, "bound", "--kind", "union", "--s", "2", "--n", "12",
            "--N", "18", "--d", "3", "--eps", "0.25",
        )
        assert code == 0
        header, row = out.strip().split("\n")
        assert header == "poly_factor,exponent,log_prob_bound,probability"
        values = [float(tok) for tok in row.split(",")]
        assert values[3] == 1.0

    def test_rounding_note_on_stderr(self, capsys):
        code, out, err = run(
            capsys, "bound", "--kind", "dyadic-new", "--s", "3", "--n", "40",
            "--N", "100", "--d", "4", "--eps", "0.1666666667",
        )
        assert code == 0
        assert "rounded up to 4" in err
        assert out.startswith("poly_factor")

    def test_validation_failure_exits_one(self, capsys):
        code, _, err = run(
            capsys, "bound", "--kind", "union", "--s", "2", "--n", "12",
            "--N", "18", "--d", "3", "--eps", "0.5",
        )
        assert code == 1
        assert "epsilon out of range" in err


class TestCurves:
    def test_pt_curve_schema(self, capsys):
        code, out, _ = run(
            capsys, "pt-curve", "--kind", "bt", "--d", "32",
            "--eps", "0.1666666667", "--cn", "2",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "delta,rho,residual,iters"
        assert len(lines) == 101
        first = lines[1].split(",")
        assert float(first[0]) == 1e-6

    def test_pt_curve_all_kinds(self, capsys):
        code, out, _ = run(
            capsys, "pt-curve", "--kind", "all", "--d", "32",
            "--eps", "0.1666666667",
        )
        assert code == 0
        assert out.startswith("delta,BT,BI,BM\n")

    def test_algo_pt_schema(self, capsys):
        code, out, _ = run(
            capsys, "algo-pt", "--d", "32", "--e", "1e-15", "--ssmp-k", "3"
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "delta,SSMP,ER,EIHT,ELD,L1MIN"
        assert len(lines) == 101

    def test_classification(self, capsys):
        code, out, _ = run(
            capsys, "pt-curve", "--kind", "bt", "--d", "32",
            "--eps", "0.1666666667", "--classify", "1e-3,1e-9",
        )
        assert code == 0
        assert out.splitlines()[1].endswith("true")


class TestFeasibleCommand:
    def test_row(self, capsys):
        code, out, _ = run(
            capsys, "feasible", "--s", "64", "--n", "4096", "--N", "1048576",
            "--d", "64", "--eps", "0.1666666667",
        )
        assert code == 0
        header, row = out.strip().split("\n")
        assert header == "feasible,margin,exponent"
        assert row.split(",")[0] in ("true", "false")


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["sample", "--n", "8", "--N", "10", "--d", "2", "--frobnicate"])
        assert info.value.code == 1

    def test_budget_exceeded_is_runtime_error(self, capsys, tmp_path):
        path = tmp_path / "wide.txt"
        cols = "\n".join("0 1" for _ in range(4000))
        path.write_text(f"4000 64 2\n{cols}\n")
        code, _, err = run(
            capsys, "certify", "--matrix", str(path), "--s", "3", "--eps", "0.25"
        )
        assert code == 2
        assert "budget" in err
