"""plotkit tests: loaders render columns as-is, figures are deterministic."""

from __future__ import annotations

import numpy as np
import pytest
import matplotlib.pyplot as plt

from plotkit import (
    AggregateData,
    FigureSpec,
    SchemaError,
    SingleRunData,
    panel_label,
    plot_aggregate,
    plot_single_run,
    render,
)
from plotkit.cli import main

GOLDEN_AGG = """t,master_mean,master_q10,master_q90,linucb_mean,linucb_q10,linucb_q90
1,0.5,0.4,0.7,0.45,0.3,0.5
2,1.1,0.9,1.4,0.95,0.8,1.2
3,1.8,1.5,2.2,1.5,1.2,1.9
"""

GOLDEN_AGG_DEGENERATE = """t,master_mean,master_q10,master_q90
1,0.5,0.5,0.5
2,1.1,1.1,1.1
3,1.8,1.8,1.8
"""

TRACE_HEADER = "run_id,policy,t,explored,selected,comparison_n,action,reward,cum_reward,n_1,n_2,n_xplr_1,n_xplr_2"

GOLDEN_TRACE = f"""{TRACE_HEADER}
0,master,1,1,1,0,1,0.5,0.5,1,0,1,0
0,master,2,1,2,0,2,1,1.5,1,1,1,1
0,master,3,1,1,0,1,0,1.5,2,1,2,1
0,master,4,0,1,1,1,1,2.5,3,1,2,1
0,linucb,1,0,1,0,1,0.5,0.5,1,0,0,0
0,linucb,2,0,1,0,1,0.5,1,2,0,0,0
0,linucb,3,0,1,0,2,0.5,1.5,3,0,0,0
0,linucb,4,0,1,0,1,0.5,2,4,0,0,0
0,epsgreedy,1,0,2,0,2,0.2,0.2,0,1,0,0
0,epsgreedy,2,0,2,0,1,0.2,0.4,0,2,0,0
0,epsgreedy,3,0,2,0,2,0.5,0.9,0,3,0,0
0,epsgreedy,4,0,2,0,2,0.7,1.6,0,4,0,0
"""

GOLDEN_TRACE_J1 = """run_id,policy,t,explored,selected,comparison_n,action,reward,cum_reward,n_1,n_xplr_1
0,master,1,1,1,0,1,0.25,0.25,1,1
0,master,2,1,1,0,2,0.75,1,2,2
0,master,3,0,1,2,1,0.5,1.5,3,2
0,ucb1,1,0,1,0,1,0.25,0.25,1,0
0,ucb1,2,0,1,0,2,0.75,1,2,0
0,ucb1,3,0,1,0,1,0.5,1.5,3,0
"""


@pytest.fixture(autouse=True)
def _close_figures():
    yield
    plt.close("all")


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# loaders: columns come through untouched


def test_aggregate_loader_renders_columns_as_is(tmp_path):
    data = AggregateData.load(_write(tmp_path, "agg.csv", GOLDEN_AGG))
    assert data.policies == ["master", "linucb"]
    np.testing.assert_array_equal(data.t, [1, 2, 3])
    mean, q10, q90 = data.curves["master"]
    np.testing.assert_array_equal(mean, [0.5, 1.1, 1.8])
    np.testing.assert_array_equal(q10, [0.4, 0.9, 1.5])
    np.testing.assert_array_equal(q90, [0.7, 1.4, 2.2])


def test_aggregate_missing_column_is_named(tmp_path):
    broken = GOLDEN_AGG.replace("linucb_q90", "linucb_oops")
    with pytest.raises(SchemaError, match="linucb_q90"):
        AggregateData.load(_write(tmp_path, "agg.csv", broken))


def test_trace_loader_marker_and_curves(tmp_path):
    data = SingleRunData.load(_write(tmp_path, "trace.csv", GOLDEN_TRACE))
    assert data.policies == ["master", "linucb", "epsgreedy"]
    assert data.marker == 1  # min(n_xplr_1, n_xplr_2) on the last master row
    assert data.run_id == 0
    np.testing.assert_array_equal(data.curves["master"], [0.5, 1.5, 1.5, 2.5])
    np.testing.assert_array_equal(data.curves["epsgreedy"], [0.2, 0.4, 0.9, 1.6])


def test_trace_loader_uses_first_run_only(tmp_path):
    extra = "1,master,1,1,1,0,1,9,9,1,0,1,0\n"
    data = SingleRunData.load(_write(tmp_path, "trace.csv", GOLDEN_TRACE + extra))
    assert data.run_id == 0
    assert data.curves["master"].size == 4


def test_trace_loader_errors(tmp_path):
    with pytest.raises(SchemaError, match="no data rows"):
        SingleRunData.load(_write(tmp_path, "empty.csv", TRACE_HEADER + "\n"))
    broken = GOLDEN_TRACE.replace("cum_reward", "cumulative")
    with pytest.raises(SchemaError, match="cum_reward"):
        SingleRunData.load(_write(tmp_path, "broken.csv", broken))


def test_panel_label_parses_environment_id():
    assert panel_label("/tmp/run_env1_agg.csv") == "env1"
    assert panel_label("results/env2_trace.csv") == "env2"
    assert panel_label("something.csv") == "something"


# ---------------------------------------------------------------------------
# aggregate figures


def test_aggregate_smoke(tmp_path):
    path = _write(tmp_path, "agg_env1.csv", GOLDEN_AGG)
    out = tmp_path / "fig.svg"
    fig = plot_aggregate([path], str(out))
    assert out.exists() and out.stat().st_size > 0
    ax = fig.axes[0]
    assert len(ax.lines) == 2  # one mean line per policy
    assert len(ax.collections) == 2  # one band per policy
    np.testing.assert_array_equal(ax.lines[0].get_ydata(), [0.5, 1.1, 1.8])
    assert ax.get_title() == "env1"


def test_degenerate_band_collapses_to_line(tmp_path):
    path = _write(tmp_path, "agg.csv", GOLDEN_AGG_DEGENERATE)
    fig = plot_aggregate([path], str(tmp_path / "fig.svg"))
    ax = fig.axes[0]
    verts = ax.collections[0].get_paths()[0].vertices
    assert np.isin(np.round(verts[:, 1], 12), [0.5, 1.1, 1.8]).all()


def test_aggregate_side_by_side_panels(tmp_path):
    p1 = _write(tmp_path, "agg_env1.csv", GOLDEN_AGG)
    p2 = _write(tmp_path, "agg_env2.csv", GOLDEN_AGG)
    fig = plot_aggregate([p1, p2], str(tmp_path / "fig.svg"), title="cumulative reward")
    assert [ax.get_title() for ax in fig.axes] == ["env1", "env2"]


# ---------------------------------------------------------------------------
# single-run figures


def test_single_run_marker_and_per_round_curves(tmp_path):
    path = _write(tmp_path, "trace_env2.csv", GOLDEN_TRACE)
    out = tmp_path / "fig.svg"
    fig = plot_single_run([path], str(out))
    assert out.exists() and out.stat().st_size > 0
    ax = fig.axes[0]
    curve_lines, marker_lines = ax.lines[:-1], ax.lines[-1:]
    assert len(curve_lines) == 3
    t = np.array([1, 2, 3, 4])
    np.testing.assert_allclose(curve_lines[0].get_ydata(), np.array([0.5, 1.5, 1.5, 2.5]) / t)
    (marker,) = marker_lines
    np.testing.assert_array_equal(marker.get_xdata(), [1, 1])


def test_single_run_j1_curves_coincide(tmp_path):
    path = _write(tmp_path, "trace.csv", GOLDEN_TRACE_J1)
    fig = plot_single_run([path], str(tmp_path / "fig.svg"))
    ax = fig.axes[0]
    master, base = ax.lines[0], ax.lines[1]
    np.testing.assert_array_equal(master.get_ydata(), base.get_ydata())


# ---------------------------------------------------------------------------
# determinism and output formats


def test_svg_output_deterministic(tmp_path):
    path = _write(tmp_path, "agg_env1.csv", GOLDEN_AGG)
    out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
    plot_aggregate([path], str(out1))
    plt.close("all")
    plot_aggregate([path], str(out2))
    assert out1.read_bytes() == out2.read_bytes()


def test_png_smoke(tmp_path):
    path = _write(tmp_path, "trace_env1.csv", GOLDEN_TRACE)
    out = tmp_path / "fig.png"
    plot_single_run([path], str(out))
    assert out.exists() and out.stat().st_size > 0


# ---------------------------------------------------------------------------
# FigureSpec and CLI


def test_figure_spec_validation(tmp_path):
    spec = FigureSpec(inputs=["x.csv"], output="y.svg", kind="histogram")
    with pytest.raises(ValueError, match="histogram"):
        spec.validate()
    with pytest.raises(ValueError, match="input"):
        FigureSpec(inputs=[], output="y.svg", kind="aggregate").validate()


def test_render_dispatches(tmp_path):
    path = _write(tmp_path, "agg.csv", GOLDEN_AGG)
    out = tmp_path / "fig.svg"
    render(FigureSpec(inputs=[path], output=str(out), kind="aggregate", title="demo"))
    assert out.exists()


def test_cli_roundtrip(tmp_path, capsys):
    path = _write(tmp_path, "agg_env1.csv", GOLDEN_AGG)
    out = tmp_path / "fig.svg"
    assert main(["aggregate", "--in", path, "--out", str(out)]) == 0
    assert out.exists()
    assert "wrote" in capsys.readouterr().out


def test_cli_schema_error_exit_code(tmp_path, capsys):
    path = _write(tmp_path, "agg.csv", GOLDEN_AGG.replace("master_q10", "master_oops"))
    assert main(["aggregate", "--in", path, "--out", str(tmp_path / "fig.svg")]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_missing_file_exit_code(tmp_path, capsys):
    assert main(["single-run", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "f.svg")]) == 2
    assert "error:" in capsys.readouterr().err
