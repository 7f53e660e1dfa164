import numpy as np
import pytest

from fastmvg import DiagonalScale, RngStream, StructuredGaussian, fast_sample
from fastmvg.cli import main


def write(path, text):
    path.write_text(text)
    return str(path)


def rows_of(path):
    return [
        [float(tok) for tok in line.split(",")]
        for line in path.read_text().splitlines()
    ]


@pytest.fixture()
def unit_instance(tmp_path):
    """1x1 instance phi=1, D=1, alpha=1; posterior is N(1/2, 1/2)."""
    phi = write(tmp_path / "phi.csv", "1\n")
    d = write(tmp_path / "d.csv", "1\n")
    alpha = write(tmp_path / "alpha.csv", "1\n")
    return phi, d, alpha


class TestSample:
    def test_deterministic_bytes(self, tmp_path, unit_instance):
        phi, d, alpha = unit_instance
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        args = [phi, d, alpha, "--draws", "50", "--seed", "3"]
        assert main(["sample", *args, "--out", str(out1)]) == 0
        assert main(["sample", *args, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert out1.read_bytes().endswith(b"\n")

    def test_unit_instance_mean(self, tmp_path, unit_instance):
        phi, d, alpha = unit_instance
        out = tmp_path / "draws.csv"
        assert main([
            "sample", phi, d, alpha,
            "--draws", "200000", "--seed", "1", "--out", str(out),
        ]) == 0
        col = np.loadtxt(out)
        se = np.sqrt(0.5 / 200_000)
        assert abs(col.mean() - 0.5) < 4 * se
        assert abs(col.var() - 0.5) < 0.02

    def test_round_trip_exact_serialization(self, tmp_path, unit_instance):
        # The .17g tokens parse back to the exact float64 draws.
        phi, d, alpha = unit_instance
        out = tmp_path / "o.csv"
        assert main(["sample", phi, d, alpha, "--draws", "5", "--seed", "8",
                     "--out", str(out)]) == 0
        g = StructuredGaussian(np.ones((1, 1)), DiagonalScale(np.ones(1)), np.ones(1))
        rng = RngStream(8, 0)
        expected = [fast_sample(g, rng).theta[0] for _ in range(5)]
        got = [float(line) for line in out.read_text().splitlines()]
        assert got == expected

    def test_fast_and_baseline_agree_in_distribution(self, tmp_path):
        phi = write(tmp_path / "phi.csv", "1,0\n0,1\n")
        d = write(tmp_path / "d.csv", "1,1\n")
        alpha = write(tmp_path / "alpha.csv", "2\n0\n")
        means = {}
        for method in ("fast", "baseline"):
            out = tmp_path / f"{method}.csv"
            assert main([
                "sample", phi, d, alpha,
                "--draws", "40000", "--seed", "5", "--method", method,
                "--out", str(out),
            ]) == 0
            means[method] = np.loadtxt(out, delimiter=",").mean(axis=0)
        se = np.sqrt(2 * 0.5 / 40000)
        assert np.all(np.abs(means["fast"] - means["baseline"]) < 4 * se)

    def test_dense_d_matrix_accepted(self, tmp_path):
        phi = write(tmp_path / "phi.csv", "1,0\n0,1\n")
        d = write(tmp_path / "d.csv", "2,0.5\n0.5,1\n")
        alpha = write(tmp_path / "alpha.csv", "1\n1\n")
        out = tmp_path / "out.csv"
        assert main(["sample", phi, d, alpha, "--draws", "3",
                     "--seed", "0", "--out", str(out)]) == 0
        assert len(rows_of(out)) == 3

    def test_ragged_rows_exit_2(self, tmp_path, capsys):
        phi = write(tmp_path / "phi.csv", "1,2\n3\n")
        d = write(tmp_path / "d.csv", "1,1\n")
        alpha = write(tmp_path / "alpha.csv", "1\n1\n")
        code = main(["sample", phi, d, alpha, "--out", str(tmp_path / "o.csv")])
        assert code == 2
        err = capsys.readouterr().err
        assert "phi.csv" in err and "row 2" in err

    def test_invalid_number_exit_2(self, tmp_path, capsys):
        phi = write(tmp_path / "phi.csv", "1,x\n")
        d = write(tmp_path / "d.csv", "1,1\n")
        alpha = write(tmp_path / "alpha.csv", "1\n")
        code = main(["sample", phi, d, alpha, "--out", str(tmp_path / "o.csv")])
        assert code == 2
        assert "row 1" in capsys.readouterr().err

    def test_missing_file_exit_2(self, tmp_path):
        d = write(tmp_path / "d.csv", "1\n")
        alpha = write(tmp_path / "alpha.csv", "1\n")
        code = main(["sample", str(tmp_path / "nope.csv"), d, alpha,
                     "--out", str(tmp_path / "o.csv")])
        assert code == 2

    def test_not_positive_definite_exit_3(self, tmp_path):
        phi = write(tmp_path / "phi.csv", "1,0\n0,1\n")
        d = write(tmp_path / "d.csv", "1,2\n2,1\n")  # indefinite dense D
        alpha = write(tmp_path / "alpha.csv", "1\n1\n")
        code = main(["sample", phi, d, alpha, "--out", str(tmp_path / "o.csv")])
        assert code == 3

    def test_asymmetric_dense_d_exit_2(self, tmp_path, capsys):
        phi = write(tmp_path / "phi.csv", "1,0\n0,1\n")
        d = write(tmp_path / "d.csv", "1,0.5\n0,1\n")
        alpha = write(tmp_path / "alpha.csv", "1\n1\n")
        code = main(["sample", phi, d, alpha, "--out", str(tmp_path / "o.csv")])
        assert code == 2
        assert "d.csv" in capsys.readouterr().err

    def test_zero_draws_exit_2(self, tmp_path, unit_instance):
        phi, d, alpha = unit_instance
        code = main(["sample", phi, d, alpha, "--draws", "0",
                     "--out", str(tmp_path / "o.csv")])
        assert code == 2


class TestFit:
    def test_null_response_shrinks(self, tmp_path):
        gen = np.random.default_rng(0)
        x = gen.standard_normal((40, 60))
        xp = write(tmp_path / "x.csv",
                   "\n".join(",".join(f"{v:.17g}" for v in row) for row in x) + "\n")
        yp = write(tmp_path / "y.csv", "\n".join(["0"] * 40) + "\n")
        prefix = tmp_path / "fit"
        assert main(["fit", xp, yp, "--iters", "1200", "--burnin", "400",
                     "--seed", "2", "--out", str(prefix)]) == 0
        table = np.loadtxt(f"{prefix}_summary.csv", delimiter=",", skiprows=1)
        mean, lower, upper = table[:, 1], table[:, 3], table[:, 4]
        assert np.all(np.abs(mean) < 0.1)
        assert np.all(lower <= 0.0) and np.all(upper >= 0.0)

    def test_summary_bytes_reproducible(self, tmp_path):
        xp = write(tmp_path / "x.csv", "1\n0.5\n-0.5\n")
        yp = write(tmp_path / "y.csv", "1\n0.4\n-0.6\n")
        a, b = tmp_path / "a", tmp_path / "b"
        args = ["fit", xp, yp, "--iters", "300", "--burnin", "100", "--seed", "4"]
        assert main([*args, "--out", str(a)]) == 0
        assert main([*args, "--out", str(b)]) == 0
        assert (tmp_path / "a_summary.csv").read_bytes() == \
               (tmp_path / "b_summary.csv").read_bytes()

    def test_scalar_dataset_posterior_mean(self, tmp_path):
        xp = write(tmp_path / "x.csv", "1\n1\n1\n")
        yp = write(tmp_path / "y.csv", "1\n1\n1\n")
        prefix = tmp_path / "fit"
        assert main(["fit", xp, yp, "--iters", "6000", "--burnin", "1000",
                     "--seed", "11", "--out", str(prefix)]) == 0
        header = open(f"{prefix}_summary.csv").readline().strip()
        assert header == "index,mean,median,lower95,upper95"
        row = np.loadtxt(f"{prefix}_summary.csv", delimiter=",", skiprows=1)
        assert 0.5 < row[1] < 1.2

    def test_fixed_sigma_flag(self, tmp_path):
        xp = write(tmp_path / "x.csv", "1\n0.5\n-0.5\n")
        yp = write(tmp_path / "y.csv", "1\n0.4\n-0.6\n")
        prefix = tmp_path / "fit"
        assert main(["fit", xp, yp, "--iters", "200", "--burnin", "50",
                     "--seed", "4", "--fixed-sigma", "2.25",
                     "--out", str(prefix)]) == 0
        assert (tmp_path / "fit_summary.csv").exists()

    def test_save_draws_row_count(self, tmp_path):
        xp = write(tmp_path / "x.csv", "1\n0.5\n-0.5\n")
        yp = write(tmp_path / "y.csv", "1\n0.4\n-0.6\n")
        prefix = tmp_path / "fit"
        assert main(["fit", xp, yp, "--iters", "120", "--burnin", "20",
                     "--thin", "2", "--seed", "4", "--save-draws",
                     "--out", str(prefix)]) == 0
        draws = (tmp_path / "fit_draws.csv").read_text().splitlines()
        assert len(draws) == (120 - 20) // 2

    def test_mismatched_y_exit_2(self, tmp_path, capsys):
        xp = write(tmp_path / "x.csv", "1\n1\n1\n")
        yp = write(tmp_path / "y.csv", "1\n1\n")
        assert main(["fit", xp, yp, "--out", str(tmp_path / "f")]) == 2
        assert "y.csv" in capsys.readouterr().err

    def test_bad_config_exit_2(self, tmp_path):
        xp = write(tmp_path / "x.csv", "1\n1\n1\n")
        yp = write(tmp_path / "y.csv", "1\n1\n1\n")
        assert main(["fit", xp, yp, "--iters", "100", "--burnin", "100",
                     "--out", str(tmp_path / "f")]) == 2


class TestSimulate:
    ARGS = ["simulate", "--n", "30", "--p", "20", "--reps", "2",
            "--iters", "200", "--burnin", "50", "--seed", "6"]

    def test_deterministic_file(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main([*self.ARGS, "--out", str(a)]) == 0
        assert main([*self.ARGS, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_output_well_formed(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert main([*self.ARGS, "--signal", "weak", "--cov", "cs",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("row,replicate,")
        assert len({len(line.split(",")) for line in lines}) == 1
        assert sum(1 for line in lines if line.startswith("replicate,")) == 2
        assert any(line.startswith("aggregate_mean,") for line in lines)

    def test_strong_signal_coverage(self, tmp_path):
        # End-to-end statistical check: strong signals at a reduced desk
        # scale must still reach the pooled coverage floor.
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--n", "60", "--p", "150", "--reps", "3",
                     "--iters", "800", "--burnin", "200", "--seed", "31",
                     "--threads", "2", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        header = lines[0].split(",")
        agg = next(line for line in lines if line.startswith("aggregate_mean,"))
        value = float(agg.split(",")[header.index("signal_coverage")])
        assert value >= 0.80

    def test_threads_match_sequential(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main([*self.ARGS, "--out", str(a)]) == 0
        assert main([*self.ARGS, "--threads", "2", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_options_exit_2(self, tmp_path):
        assert main(["simulate", "--n", "30", "--p", "20", "--sparsity", "30",
                     "--out", str(tmp_path / "x.csv")]) == 2
        assert main(["simulate", "--cov", "weird",
                     "--out", str(tmp_path / "x.csv")]) == 2


class TestBench:
    def test_single_point_rows(self, tmp_path):
        out = tmp_path / "bench.csv"
        assert main(["bench", "--n-grid", "10", "--p-grid", "60",
                     "--reps", "5", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "method,n,p,median_seconds"
        methods = {line.split(",")[0] for line in lines[1:]}
        assert methods == {"fast", "baseline"}
        assert len(lines) == 3

    def test_slope_footer_rows(self, tmp_path):
        out = tmp_path / "bench.csv"
        assert main(["bench", "--n-grid", "10", "--p-grid", "40,80",
                     "--reps", "5", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert any(line.startswith("fast-slope,10,,") for line in lines)
        assert any(line.startswith("baseline-slope,10,,") for line in lines)

    def test_invalid_grid_exit_2(self, tmp_path):
        assert main(["bench", "--n-grid", "abc", "--p-grid", "50",
                     "--out", str(tmp_path / "b.csv")]) == 2
        assert main(["bench", "--n-grid", "10", "--p-grid", "0",
                     "--out", str(tmp_path / "b.csv")]) == 2
