"""Entanglement criteria evaluated on quadrature covariance states.

All values are raw variance sums in units where a vacuum quadrature has
variance 1/4, so the separability bound of every criterion here is 1.

Pair signs
----------
The van Loock-Furusawa inequality for the pair (k, k+1) reads

    Var(x_k - x_{k+1}) + Var(p_k + p_{k+1} + sum_j g_j p_j) < 1.

Its signs are fixed only up to relabeling the modes.  A pi flip of mode k+1
turns it into Var(x_k + x_{k+1}) + Var(p_k - p_{k+1} + ...).  Both forms are
valid witnesses, and ``sign=-1`` selects the flipped one.  Which form picks
out the squeezed combinations depends on the network's output signs; the
bare 50:50 splitter on an x-squeezed and a p-squeezed input needs ``sign=-1``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DegenerateInputError
from .gaussian import V0, apply_orthogonal, combination_variance
from .optimize import optimal_gains_closed_form


@dataclass(frozen=True)
class InseparabilityReport:
    n_modes: int
    values: tuple
    gains: tuple
    signs: tuple

    def __post_init__(self):
        if len(self.values) != self.n_modes - 1:
            raise ValueError(f"expected {self.n_modes - 1} values, got {len(self.values)}")

    @property
    def mean(self):
        return float(np.mean(self.values))

    @property
    def satisfied(self):
        return tuple(v < 1.0 for v in self.values)

    @property
    def all_satisfied(self):
        return all(self.satisfied)

    @property
    def spread(self):
        return float(max(self.values) - min(self.values))


def _check_pair_index(k, n):
    if int(k) != k or not 1 <= k <= n - 1:
        raise ValueError(f"pair index {k!r} out of range 1..{n - 1}")
    return int(k)


def vlf_coefficients(n, k, gains=None, sign=1):
    """x and p coefficient vectors of inequality ``k`` (pair of modes k, k+1)."""
    k = _check_pair_index(k, n)
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    cp = np.zeros(n) if gains is None else np.array(gains, dtype=float)
    if cp.shape != (n,):
        raise ValueError(f"gains must have length {n}, got shape {cp.shape}")
    if gains is not None and (abs(cp[k - 1] - 1) > 1e-12 or abs(cp[k] - 1) > 1e-12):
        raise ValueError(f"gains of the pair ({k}, {k + 1}) must be 1")
    cp[k - 1] = 1.0
    cp[k] = sign
    cx = np.zeros(n)
    cx[k - 1] = 1.0
    cx[k] = -sign
    return cx, cp


def vlf_value(state, k, gains=None, sign=1):
    """Left-hand side of the k-th inequality.  ``gains=None`` means unit pair
    gains and zero gains on every other mode."""
    cx, cp = vlf_coefficients(state.n_modes, k, gains, sign)
    return combination_variance(state, cx, cp)


def vlf_report(state, network=None, gains=None, choose_sign=True):
    """Evaluate all N-1 inequalities.

    ``network`` (a VirtualNetwork or a matrix) is applied to ``state`` first.
    ``gains`` is a sequence of N-1 gain vectors; when omitted, each inequality
    uses its own optimal gains.  With ``choose_sign`` each pair takes the sign
    giving the smaller value, otherwise the literal ``sign=+1`` form is used.
    """
    if network is not None:
        state = apply_orthogonal(state, getattr(network, "matrix", network))
    n = state.n_modes
    if n < 2:
        raise ValueError("inseparability needs at least two modes")
    if gains is not None and len(gains) != n - 1:
        raise ValueError(f"expected {n - 1} gain vectors, got {len(gains)}")
    signs = (1, -1) if choose_sign else (1,)
    values, used, chosen = [], [], []
    for k in range(1, n):
        best = None
        for s in signs:
            g = optimal_gains_closed_form(state, k, s) if gains is None else gains[k - 1]
            v = vlf_value(state, k, g, s)
            if best is None or v < best[0]:
                best = (v, np.asarray(g, dtype=float), s)
        values.append(best[0])
        used.append(best[1])
        chosen.append(best[2])
    return InseparabilityReport(n, tuple(values), tuple(used), tuple(chosen))


def conditional_variance(v_aa, v_ab, v_bb):
    if v_bb <= 0:
        raise DegenerateInputError("conditioning variance is zero")
    return v_aa - v_ab**2 / v_bb


def reid_epr(state, i, j):
    """Product of the inferred variances of mode i given mode j, over V0^2.

    Values below 1 demonstrate the EPR paradox.
    """
    n = state.n_modes
    for m in (i, j):
        if int(m) != m or not 1 <= m <= n:
            raise ValueError(f"mode {m!r} out of range 1..{n}")
    if i == j:
        raise ValueError("Reid criterion needs two distinct modes")
    a, b = int(i) - 1, int(j) - 1
    try:
        vx = conditional_variance(state.vx[a, a], state.vx[a, b], state.vx[b, b])
        vp = conditional_variance(state.vp[a, a], state.vp[a, b], state.vp[b, b])
    except DegenerateInputError as exc:
        raise DegenerateInputError(f"mode {j} has a zero-variance quadrature") from exc
    return float(vx * vp / V0**2)


def fourier_relabel(cx, cp, modes):
    """Express a combination of measured quadratures in physical quadratures
    when the listed 1-based modes are measured after F(x, p) = (-p, x)."""
    cx = np.array(cx, dtype=float)
    cp = np.array(cp, dtype=float)
    for m in modes:
        i = int(m) - 1
        if not 0 <= i < len(cx):
            raise ValueError(f"mode {m!r} out of range 1..{len(cx)}")
        cx[i], cp[i] = cp[i], -cx[i]
    return cx, cp


@dataclass(frozen=True)
class ClusterSpec:
    """Linear cluster graph plus the modes measured in the rotated basis.

    ``flipped_modes`` are pi flips applied at measurement (the gain vector of
    the mode is negated); combined with the rotation they give F^-1.
    """

    n_modes: int
    edges: tuple
    fourier_modes: frozenset = frozenset()
    flipped_modes: frozenset = frozenset()

    def __post_init__(self):
        n = self.n_modes
        if int(n) != n or n < 2:
            raise ValueError(f"a cluster needs at least 2 modes, got {n!r}")
        edges = tuple(tuple(sorted((int(a), int(b)))) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "fourier_modes", frozenset(self.fourier_modes))
        object.__setattr__(self, "flipped_modes", frozenset(self.flipped_modes))
        for m in self.fourier_modes | self.flipped_modes:
            if not 1 <= m <= n:
                raise ValueError(f"mode {m} out of range 1..{n}")
        self.path()

    @classmethod
    def linear(cls, n, fourier_modes=None, flipped_modes=()):
        """Chain 1-2-...-n, rotated on the even modes unless told otherwise."""
        if fourier_modes is None:
            fourier_modes = range(2, n + 1, 2)
        return cls(n, tuple((a, a + 1) for a in range(1, n)), fourier_modes, flipped_modes)

    def neighbours(self):
        nb = {m: [] for m in range(1, self.n_modes + 1)}
        for a, b in self.edges:
            if a == b or not (1 <= a <= self.n_modes and 1 <= b <= self.n_modes):
                raise ValueError(f"bad edge ({a}, {b})")
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def path(self):
        """Modes in chain order; raises unless the graph is a single path."""
        n = self.n_modes
        nb = self.neighbours()
        if len(self.edges) != n - 1 or len(set(self.edges)) != n - 1:
            raise ValueError("cluster graph must be a path over all modes")
        ends = sorted(m for m, v in nb.items() if len(v) == 1)
        if len(ends) != 2 or any(len(v) > 2 for v in nb.values()):
            raise ValueError("only linear (path) cluster graphs are supported")
        order = [ends[0]]
        prev = None
        while len(order) < n:
            nxt = [m for m in nb[order[-1]] if m != prev]
            if not nxt:
                raise ValueError("cluster graph is disconnected")
            prev = order[-1]
            order.append(nxt[0])
        if len(set(order)) != n:
            raise ValueError("cluster graph must be a path over all modes")
        return order


def _nullifier(spec, nb, a, partner, neighbor_gain):
    n = spec.n_modes
    cx = np.zeros(n)
    cp = np.zeros(n)
    cp[a - 1] = 1.0
    for b in nb[a]:
        cx[b - 1] -= 1.0 if b == partner else neighbor_gain
    for m in spec.flipped_modes:
        cx[m - 1] = -cx[m - 1]
        cp[m - 1] = -cp[m - 1]
    return fourier_relabel(cx, cp, sorted(spec.fourier_modes))


def cluster_inequalities(state, spec, neighbor_gain=1.0):
    """Sums of nullifier variances for each adjacent pair along the chain.

    For the pair (a, b) the terms are Var(p_a - x_b - ...) + Var(p_b - x_a - ...),
    where the remaining neighbours enter with ``neighbor_gain`` (1 for the
    unweighted cluster criteria).
    """
    if spec.n_modes != state.n_modes:
        raise ValueError(f"spec has {spec.n_modes} modes, state has {state.n_modes}")
    nb = spec.neighbours()
    order = spec.path()
    values = []
    for a, b in zip(order, order[1:]):
        total = 0.0
        for node, partner in ((a, b), (b, a)):
            cx, cp = _nullifier(spec, nb, node, partner, neighbor_gain)
            total += combination_variance(state, cx, cp)
        values.append(total)
    return values


def to_db(value):
    """Criterion value in dB relative to two units of vacuum noise."""
    if value <= 0:
        raise ValueError(f"criterion value must be positive, got {value}")
    return 10.0 * math.log10(value)
