from dataclasses import replace
import json
import re

import numpy as np
import pytest

from virtualnet.config import RunConfig
from virtualnet.criteria import ClusterSpec, cluster_inequalities, vlf_report
from virtualnet.experiments import (
    REFERENCE_TABLE1,
    Table,
    detected_state,
    figure5_curves,
    input_specs,
    run_compile,
    run_epr,
    run_figure5,
    run_patterns,
    run_table1,
    run_table2,
    squeezing_summary,
    symmetric_specs,
)
from virtualnet.network import compile_cluster, compile_recipe
from virtualnet.optimize import closed_form_solution
from virtualnet.plotting import curves_svg

FAST = RunConfig(optimizer="closed_form")
VACUUM = RunConfig(
    optimizer="closed_form",
    gm_squeezing_db=0.0, fm_squeezing_db=0.0,
    gm_antisqueezing_db=0.0, fm_antisqueezing_db=0.0,
)


@pytest.fixture(scope="module")
def figure5():
    return run_figure5(FAST)


def test_table_formatting():
    t = Table("t", ["a", "b", "c", "d"], [[1, 0.5, None, True]], ["x"])
    assert t.to_csv() == "a,b,c,d\n1,0.500000,,yes\n"
    data = json.loads(t.to_json())
    assert data["rows"] == [[1, 0.5, None, True]] and data["notes"] == ["x"]
    assert t.column("b") == [0.5]


def test_table1_rows():
    t = run_table1(FAST)
    assert t.column("N") == list(range(2, 9))
    for row, n in zip(t.rows, range(2, 9)):
        values = [v for v in row[1:8] if v is not None]
        assert len(values) == n - 1
        assert np.mean(values) == pytest.approx(row[8], abs=1e-15)
        assert row[10] == REFERENCE_TABLE1[n]
    assert all(t.column("all_below_1"))


def test_table1_vacuum_never_violates():
    t = run_table1(VACUUM)
    for v in t.column("avg"):
        assert v == pytest.approx(1.0, abs=1e-12)
    assert not any(t.column("all_below_1"))


def test_table1_genetic_agrees_with_closed_form():
    t = run_table1(RunConfig(n_max=5, ga_generations=150))
    for ga, cf in zip(t.column("avg"), t.column("closed_form_avg")):
        assert cf - 1e-9 <= ga <= cf + 1e-3


def test_table1_values_revalidate():
    t = run_table1(FAST)
    specs = input_specs(FAST)
    for row in t.rows:
        n = row[0]
        state = detected_state(specs, compile_recipe(n), FAST)
        fresh = vlf_report(state, gains=closed_form_solution(state).gains).values
        assert np.max(np.abs(np.array(row[1:n]) - fresh)) <= 1e-12


def test_losses_raise_every_value():
    a = run_table1(FAST)
    b = run_table1(replace(FAST, losses=True))
    for x, y in zip(a.column("avg"), b.column("avg")):
        assert y > x
    assert "losses=on" in b.notes


def test_table2_rows():
    t = run_table2(FAST)
    rows = {r[0]: r for r in t.rows}
    assert sum(v > 1 for v in rows[5][1:5]) >= 2
    for row in t.rows:
        n = row[0]
        state = detected_state(input_specs(FAST), compile_cluster(n), FAST)
        fresh = cluster_inequalities(state, ClusterSpec.linear(n))
        assert np.max(np.abs(np.array(row[1:n]) - fresh)) <= 1e-12


def test_strong_squeezing_makes_four_mode_cluster():
    cfg = replace(FAST, gm_squeezing_db=-10.0, fm_squeezing_db=-10.0,
                  gm_antisqueezing_db=10.0, fm_antisqueezing_db=10.0)
    rows = {r[0]: r for r in run_table2(cfg).rows}
    assert all(v < 1 for v in rows[4][1:4])


def test_figure5_shape(figure5):
    curves = figure5_curves(figure5)
    assert list(curves) == ["experimental", "-1 dB", "-3 dB", "-6 dB", "-10 dB"]
    for label, (ns, vs) in curves.items():
        assert ns == list(range(2, 31))
        assert np.all(np.diff(vs) >= -1e-12), label
        assert max(vs) < 1
    for i in range(29):
        assert curves["-10 dB"][1][i] < curves["-3 dB"][1][i]


def test_figure5_starts_at_table1(figure5):
    first = figure5_curves(figure5)["experimental"][1][0]
    assert first == run_table1(FAST).rows[0][8]


def test_figure5_db_column(figure5):
    for row in figure5.rows:
        assert row[4] == pytest.approx(10 * np.log10(row[3]), abs=1e-12)


def test_determinism_is_byte_identical():
    cfg = RunConfig(n_max=5, seed=11, ga_generations=40)
    assert run_table1(cfg).to_csv() == run_table1(cfg).to_csv()
    assert run_table1(cfg).to_json() == run_table1(cfg).to_json()
    assert run_figure5(replace(FAST, sweep_n_max=6)).to_csv() == run_figure5(replace(FAST, sweep_n_max=6)).to_csv()


def test_svg_structure(figure5):
    svg = curves_svg(figure5_curves(figure5))
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert svg.count("<polyline") == 5
    assert "dB" in svg and "number of modes N" in svg
    for label in ("-1 dB", "-10 dB", "experimental"):
        assert label in svg
    ticks = re.findall(r'text-anchor="end" font-size="11">(-?[\d.]+) dB<', svg)
    assert len(ticks) >= 2


def test_svg_one_polyline_per_level():
    cfg = replace(FAST, sweep_levels_db=(-2.0,), sweep_n_max=5)
    svg = curves_svg(figure5_curves(run_figure5(cfg)))
    assert svg.count("<polyline") == 2


def test_epr_defaults():
    r = run_epr(FAST)
    assert r["vlf_value"] == pytest.approx((10**-0.43 + 10**-0.37) / 2, abs=1e-12)
    assert r["reid_value"] <= r["reid_value_50"]
    assert 0 < r["optimal_R"] < 1


def test_epr_symmetric_and_vacuum():
    cfg = replace(FAST, gm_squeezing_db=-6.0, fm_squeezing_db=-6.0,
                  gm_antisqueezing_db=6.0, fm_antisqueezing_db=6.0)
    assert run_epr(cfg)["optimal_R"] == pytest.approx(0.5, abs=1e-6)
    assert run_epr(VACUUM)["reid_value"] == pytest.approx(1.0, abs=1e-12)


def test_compile_dump():
    t = run_compile(compile_recipe(3))
    kinds = t.column("kind")
    assert kinds.count("matrix") == 3 and kinds.count("gain") == 3
    assert t.notes[0].startswith("orthogonality_deviation=")
    big = run_compile(compile_recipe(10))
    assert big.column("kind").count("gain") == 0


def test_patterns_default_recipe():
    text = run_patterns(FAST)
    assert len(text.strip().split("\n")) == 1 + 5 * 8


def test_squeezing_summary():
    s = squeezing_summary()
    assert s["gm"]["antisqueezing_db"] == pytest.approx(7.855, abs=1e-3)
    assert s["fm"]["antisqueezing_db"] == pytest.approx(7.525, abs=1e-3)
    assert 0 < s["fm"]["inferred_efficiency"] < s["gm"]["inferred_efficiency"] < 1


def test_symmetric_specs():
    x, p = symmetric_specs(-3.0)
    assert x.squeezed_quadrature == "x" and p.squeezed_quadrature == "p"
    assert x.squeezing_db == -3.0 and x.antisqueezing_db == 3.0
