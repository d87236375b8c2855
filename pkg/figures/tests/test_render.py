"""Rendering: schema handling, determinism, and the end-to-end bundle flow."""

import math
import subprocess
import sys

import pytest

from steinbet_figures import FigureSpec, SchemaError, render
from steinbet_figures.cli import main

SUMMARY_HEADER = "t,mean_log_wealth,lo_log_wealth,hi_log_wealth,rejection_proportion"


def _write_summary(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(SUMMARY_HEADER + "\n" + "\n".join(rows) + ("\n" if rows else ""))
    return path


@pytest.fixture
def summary_csv(tmp_path):
    rows = [
        f"{t},{0.1 * t},{0.05 * t},{0.2 * t},{min(1.0, 0.01 * t)}"
        for t in range(1, 21)
    ]
    return _write_summary(tmp_path / "run" / "summary.csv", rows)


class TestSpecValidation:
    def test_unknown_kind(self, tmp_path):
        with pytest.raises(SchemaError, match="unknown figure kind"):
            FigureSpec(inputs=[tmp_path / "x.csv"], kind="pie", output=tmp_path / "o.svg")

    def test_no_inputs(self, tmp_path):
        with pytest.raises(SchemaError, match="no input"):
            FigureSpec(inputs=[], kind="wealth_bands", output=tmp_path / "o.svg")

    def test_label_count_mismatch(self, tmp_path):
        with pytest.raises(SchemaError, match="labels"):
            FigureSpec(
                inputs=[tmp_path / "a.csv", tmp_path / "b.csv"],
                kind="wealth_bands",
                output=tmp_path / "o.svg",
                labels=["only one"],
            )


class TestSchemaFailures:
    def test_missing_file(self, tmp_path):
        spec = FigureSpec(
            inputs=[tmp_path / "gone.csv"], kind="wealth_bands",
            output=tmp_path / "o.svg",
        )
        with pytest.raises(SchemaError, match="no such file"):
            render(spec)

    def test_empty_rows_is_an_error_not_an_empty_plot(self, tmp_path):
        path = _write_summary(tmp_path / "summary.csv", [])
        spec = FigureSpec(
            inputs=[path], kind="wealth_bands", output=tmp_path / "o.svg"
        )
        with pytest.raises(SchemaError, match="no data rows"):
            render(spec)
        assert not (tmp_path / "o.svg").exists()

    def test_missing_columns_named(self, tmp_path):
        path = tmp_path / "summary.csv"
        path.write_text("t,mean_log_wealth\n1,0.5\n")
        spec = FigureSpec(
            inputs=[path], kind="wealth_bands", output=tmp_path / "o.svg"
        )
        with pytest.raises(SchemaError, match="lo_log_wealth"):
            render(spec)


class TestRendering:
    def test_wealth_bands_svg(self, summary_csv, tmp_path):
        out = render(
            FigureSpec(
                inputs=[summary_csv],
                kind="wealth_bands",
                output=tmp_path / "w.svg",
                threshold=math.log(20.0),
            )
        )
        body = out.read_text()
        assert body.startswith("<?xml") and "</svg>" in body

    def test_single_replication_band_collapses_onto_mean(self, tmp_path):
        # the harness writes lo == mean == hi for one replication; the plot
        # simply draws the degenerate band
        rows = [f"{t},{0.3 * t},{0.3 * t},{0.3 * t},0.0" for t in range(1, 11)]
        path = _write_summary(tmp_path / "one" / "summary.csv", rows)
        out = render(
            FigureSpec(inputs=[path], kind="wealth_bands", output=tmp_path / "o.svg")
        )
        assert out.exists()

    def test_strategy_compare_multiple_inputs(self, summary_csv, tmp_path):
        rows = [f"{t},{0.05 * t},{0.02 * t},{0.1 * t},0.0" for t in range(1, 21)]
        other = _write_summary(tmp_path / "other" / "summary.csv", rows)
        out = render(
            FigureSpec(
                inputs=[summary_csv, other],
                kind="strategy_compare",
                output=tmp_path / "cmp.svg",
                labels=["fast", "slow"],
            )
        )
        body = out.read_text()
        assert "fast" in body and "slow" in body

    def test_rejection_curve(self, tmp_path):
        path = tmp_path / "curve.csv"
        path.write_text(
            "theta,x,method,rejection_rate\n"
            "0.4,20,batch,0.25\n0.4,400,batch,1.0\n"
            "0.4,20,sequential,0.1\n0.4,400,sequential,0.95\n"
        )
        out = render(
            FigureSpec(inputs=[path], kind="rejection_curve", output=tmp_path / "r.svg")
        )
        assert out.exists()

    def test_stopping_bound_overlays_bound_curve(self, tmp_path):
        path = tmp_path / "stopping_bound.csv"
        path.write_text(
            "theta,r_star,bound,strategy,mean_tau,lo_tau,hi_tau,n_rejected\n"
            "0.5,0.02,149.8,lbow,90.0,60.0,130.0,500\n"
            "1.0,0.046,65.1,lbow,42.0,30.0,60.0,500\n"
            "0.5,0.02,149.8,agrapa,70.0,45.0,110.0,500\n"
            "1.0,0.046,65.1,agrapa,31.0,22.0,47.0,500\n"
        )
        out = render(
            FigureSpec(inputs=[path], kind="stopping_bound", output=tmp_path / "s.svg")
        )
        assert "log(1/alpha) / r*" in out.read_text()

    def test_directory_input_resolves_bundle_file(self, summary_csv, tmp_path):
        out = render(
            FigureSpec(
                inputs=[summary_csv.parent],
                kind="wealth_bands",
                output=tmp_path / "dir.svg",
            )
        )
        assert out.exists()
        with pytest.raises(SchemaError, match="contains none of"):
            render(
                FigureSpec(
                    inputs=[tmp_path], kind="stopping_bound",
                    output=tmp_path / "x.svg",
                )
            )

    def test_png_output_supported(self, summary_csv, tmp_path):
        out = render(
            FigureSpec(inputs=[summary_csv], kind="wealth_bands", output=tmp_path / "w.png")
        )
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestDeterminism:
    def test_byte_identical_svg_across_runs(self, summary_csv, tmp_path):
        spec_a = FigureSpec(
            inputs=[summary_csv], kind="wealth_bands", output=tmp_path / "a.svg"
        )
        spec_b = FigureSpec(
            inputs=[summary_csv], kind="wealth_bands", output=tmp_path / "b.svg"
        )
        assert render(spec_a).read_bytes() == render(spec_b).read_bytes()

    def test_end_to_end_bundle_renders_deterministically(self, tmp_path):
        # acceptance: consume a real bundle produced through the primary CLI
        subprocess.run(
            [
                sys.executable, "-m", "steinbet", "suite", "gaussian_alt",
                "--out", str(tmp_path), "--reps", "5", "--horizon", "15",
            ],
            check=True,
            capture_output=True,
        )
        summary = tmp_path / "gaussian_alt" / "gaussian" / "agrapa" / "summary.csv"
        assert summary.exists()
        outs = []
        for name in ("one.svg", "two.svg"):
            render(
                FigureSpec(
                    inputs=[summary],
                    kind="wealth_bands",
                    output=tmp_path / name,
                    threshold=math.log(20.0),
                )
            )
            outs.append((tmp_path / name).read_bytes())
        assert outs[0] == outs[1]


class TestCli:
    def test_cli_renders(self, summary_csv, tmp_path, capsys):
        rc = main(
            [str(summary_csv), "--kind", "wealth_bands", "--out",
             str(tmp_path / "cli.svg"), "--label", "run", "--title", "demo"]
        )
        assert rc == 0
        assert (tmp_path / "cli.svg").exists()

    def test_cli_reports_schema_errors(self, tmp_path, capsys):
        rc = main(
            [str(tmp_path / "missing.csv"), "--kind", "wealth_bands",
             "--out", str(tmp_path / "x.svg")]
        )
        assert rc == 2
        assert "error:" in capsys.readouterr().err
