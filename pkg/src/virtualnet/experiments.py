"""Reproduction runs: inseparability tables, scaling curves, EPR and patterns."""

from dataclasses import dataclass, field
import json

import numpy as np

from .config import RunConfig
from .criteria import ClusterSpec, cluster_inequalities, reid_epr, vlf_report
from .detector import PixelGeometry, detector_efficiency, patterns_csv
from .dsl import load_network
from .gaussian import (
    SqueezerSpec,
    apply_orthogonal,
    apply_uniform_loss,
    db_to_variance,
    infer_loss,
    input_state,
)
from .network import (
    BeamSplitter,
    VirtualNetwork,
    compile_cluster,
    compile_recipe,
    gain_basis,
    require_orthogonal,
)
from .optimize import closed_form_solution, optimize_ebs_reflectivity, optimize_gains_ga

# Reference averages and the tolerance each reproduction is held to.
REFERENCE_TABLE1 = {2: 0.39, 3: 0.56, 4: 0.64, 5: 0.69, 6: 0.74, 7: 0.77, 8: 0.79}
TABLE1_TOLERANCE = {2: 0.02}
DEFAULT_TABLE1_TOLERANCE = 0.03
REFERENCE_TABLE2 = {
    2: (0.39,),
    3: (0.49, 0.70),
    4: (0.79, 0.67, 0.84),
    5: (0.79, 0.67, 1.10, 1.18),
}
TABLE2_TOLERANCE = {2: 0.02, 3: 0.05, 4: 0.05}
REFERENCE_REID = 0.58
REID_TOLERANCE = 0.03
REFERENCE_OPTIMAL_R = 0.488
OPTIMAL_R_TOLERANCE = 0.003

NUMERALS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X")


@dataclass
class Table:
    name: str
    columns: list
    rows: list
    notes: list = field(default_factory=list)

    def to_csv(self):
        out = [",".join(self.columns)]
        for row in self.rows:
            out.append(",".join(_cell(v) for v in row))
        return "\n".join(out) + "\n"

    def to_json(self):
        data = {
            "name": self.name,
            "columns": self.columns,
            "rows": [[_json_cell(v) for v in row] for row in self.rows],
            "notes": self.notes,
        }
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _json_cell(v):
    if isinstance(v, float):
        return round(v, 12)
    return v


# -- inputs ------------------------------------------------------------------


def _spec(quadrature, squeezing_db, anti, config):
    if anti == "auto":
        return SqueezerSpec.from_source(
            quadrature, squeezing_db, config.source_squeezing_db, config.source_antisqueezing_db
        )
    return SqueezerSpec(quadrature, squeezing_db, float(anti))


def input_specs(config):
    """(x-squeezed, p-squeezed) input specs described by ``config``."""
    return (
        _spec("x", config.gm_squeezing_db, config.gm_antisqueezing_db, config),
        _spec("p", config.fm_squeezing_db, config.fm_antisqueezing_db, config),
    )


def symmetric_specs(level_db):
    """Equal pure squeezing on both inputs."""
    return SqueezerSpec.pure("x", level_db), SqueezerSpec.pure("p", level_db)


def detected_state(specs, network, config):
    """Network output, with detection loss when ``config.losses`` is on."""
    require_orthogonal(network.matrix)
    state = apply_orthogonal(input_state(specs[0], specs[1], network.n_modes), network.matrix)
    if config.losses:
        geometry = PixelGeometry(8, config.fill_factor, config.quantum_efficiency)
        state = apply_uniform_loss(state, detector_efficiency(geometry))
    return state


# -- runs --------------------------------------------------------------------


def solve_gains(state, config):
    if config.optimizer == "closed_form":
        return closed_form_solution(state)
    return optimize_gains_ga(state, config=config.ga_config())


def run_table1(config=None):
    """One row per mode count: the N-1 inequality values and their average."""
    config = config or RunConfig()
    specs = input_specs(config)
    n_cols = config.n_max - 1
    columns = ["N"] + list(_numerals(n_cols)) + ["avg", "closed_form_avg", "reference_avg", "tolerance", "all_below_1"]
    rows = []
    for n in range(config.n_min, config.n_max + 1):
        state = detected_state(specs, compile_recipe(n, config.long_arm), config)
        sol = solve_gains(state, config)
        # re-evaluate with the reported gains instead of trusting the optimizer's numbers
        report = vlf_report(state, gains=sol.gains, choose_sign=True)
        exact = closed_form_solution(state)
        values = list(report.values) + [None] * (n_cols - len(report.values))
        ref = REFERENCE_TABLE1.get(n)
        tol = TABLE1_TOLERANCE.get(n, DEFAULT_TABLE1_TOLERANCE) if ref is not None else None
        rows.append([n] + values + [report.mean, exact.mean_value, ref, tol, report.all_satisfied])
    notes = [f"optimizer={config.optimizer}", f"seed={config.seed}", f"losses={'on' if config.losses else 'off'}"]
    return Table("table1", columns, rows, notes)


def run_table2(config=None):
    """Cluster inequality values for the 2 to 5 mode cluster networks."""
    config = config or RunConfig()
    specs = input_specs(config)
    columns = ["N", "I", "II", "III", "IV", "avg", "max", "reference", "tolerance"]
    rows = []
    for n in range(2, 6):
        state = detected_state(specs, compile_cluster(n), config)
        values = cluster_inequalities(state, ClusterSpec.linear(n), config.cluster_neighbor_gain)
        padded = list(values) + [None] * (4 - len(values))
        ref = " ".join(f"{v:.2f}" for v in REFERENCE_TABLE2[n])
        rows.append([n] + padded + [float(np.mean(values)), float(max(values)), ref, TABLE2_TOLERANCE.get(n)])
    notes = [f"neighbor_gain={config.cluster_neighbor_gain}"]
    return Table("table2", columns, rows, notes)


def sweep_average(specs, n, config):
    state = detected_state(specs, compile_recipe(n, config.long_arm), config)
    return closed_form_solution(state).mean_value


def run_figure5(config=None):
    """Average inseparability against N for the experimental inputs and each
    symmetric squeezing level.  Long format: one row per (curve, N)."""
    config = config or RunConfig()
    curves = {"experimental": input_specs(config)}
    for level in config.sweep_levels_db:
        curves[f"{level:g} dB"] = symmetric_specs(level)
    ns = list(range(2, config.sweep_n_max + 1))
    columns = ["curve", "squeezing_db", "N", "average", "average_db"]
    rows = []
    for label, specs in curves.items():
        sq = None if label == "experimental" else float(label.split()[0])
        for n in ns:
            v = sweep_average(specs, n, config)
            rows.append([label, sq, n, v, 10.0 * np.log10(v)])
    return Table("figure5", columns, rows, [f"levels={len(curves)}"])


def figure5_curves(table):
    """{label: (ns, values)} in table order."""
    curves = {}
    for label, _sq, n, v, _db in table.rows:
        ns, vs = curves.setdefault(label, ([], []))
        ns.append(n)
        vs.append(v)
    return curves


def run_epr(config=None):
    """Two-mode EPR figures: Reid value at the optimal splitter, the optimal
    reflectivity and the van Loock-Furusawa value of the 50:50 network."""
    config = config or RunConfig()
    specs = input_specs(config)
    best = optimize_ebs_reflectivity(specs[0], specs[1], "reid")
    hbs_state = detected_state(specs, compile_recipe(2), config)
    if config.losses:
        # the optimizer works on lossless states; evaluate the loss case at its R*
        net = VirtualNetwork(2, [BeamSplitter(1, 2, best.reflectivity)])
        reid_value = reid_epr(detected_state(specs, net, config), 1, 2)
    else:
        reid_value = best.value
    return {
        "reid_value": float(reid_value),
        "reid_value_50": float(reid_epr(hbs_state, 1, 2)),
        "optimal_R": float(best.reflectivity),
        "vlf_value": float(vlf_report(hbs_state).values[0]),
        "reference": {
            "reid_value": REFERENCE_REID,
            "reid_tolerance": REID_TOLERANCE,
            "optimal_R": REFERENCE_OPTIMAL_R,
            "optimal_R_tolerance": OPTIMAL_R_TOLERANCE,
        },
    }


def run_compile(network):
    """Matrix and gain-basis dump of a network as a table."""
    report = require_orthogonal(network.matrix)
    n = network.n_modes
    columns = ["kind", "row"] + [str(c + 1) for c in range(max(n, 8))]
    rows = []
    for i, r in enumerate(network.matrix, start=1):
        rows.append(["matrix", i] + [float(v) for v in r] + [None] * (len(columns) - 2 - n))
    notes = [f"orthogonality_deviation={report.deviation:.3e}"]
    if n <= 8:
        for i, r in enumerate(gain_basis(network).unnormalized(), start=1):
            rows.append(["gain", i] + [float(v) for v in r])
        notes.append("gains are shown without the 1/sqrt(8) factor")
    return Table("compile", columns, rows, notes)


def compile_from_file(path):
    net = load_network(path)
    return net, run_compile(net)


def run_patterns(config=None, network=None):
    """Pixel patterns of every mode of a recipe network (or a given one)."""
    config = config or RunConfig()
    if network is None:
        if config.pattern_modes >= 2:
            network = compile_recipe(config.pattern_modes, config.long_arm)
        else:
            network = VirtualNetwork.identity(1)
    geometry = PixelGeometry(8, config.fill_factor, config.quantum_efficiency)
    return patterns_csv(gain_basis(network), geometry)


def _numerals(k):
    return [NUMERALS[i] if i < len(NUMERALS) else str(i + 1) for i in range(k)]


def squeezing_summary(config=None):
    """Loss and anti-squeezing implied by the configured inputs."""
    config = config or RunConfig()
    out = {}
    for name, spec in zip(("gm", "fm"), input_specs(config)):
        low = spec.squeezing_db
        out[name] = {
            "squeezing_db": low,
            "antisqueezing_db": spec.antisqueezing_db,
            "inferred_efficiency": infer_loss(config.source_squeezing_db, low),
            "squeezed_variance": db_to_variance(low),
            "antisqueezed_variance": db_to_variance(spec.antisqueezing_db),
        }
    return out
