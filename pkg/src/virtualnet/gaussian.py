"""Quadrature covariance model for Gaussian states with no x-p correlations.

Variances are absolute, with the vacuum at ``V0 = 1/4``.  With that choice two
units of vacuum noise sum to exactly 1, which is the bound used by the
inseparability criteria.  Modes are numbered from 1 in every public function.

The x and p blocks are kept separately.  Inputs are squeezed along the
quadrature axes and every network operation is a real orthogonal matrix
(beam splitters, sign flips and permutations), so the x-p cross block of the
full covariance matrix stays identically zero.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import PreconditionError

V0 = 0.25

# Measured in-beam squeezing of the two spatial inputs and the OPA source figures.
GM_SQUEEZING_DB = -4.3
FM_SQUEEZING_DB = -3.7
SOURCE_SQUEEZING_DB = -6.0
SOURCE_ANTISQUEEZING_DB = 8.5

_SYM_TOL = 1e-12
_PSD_TOL = 1e-12
_ORTHO_TOL = 1e-10


def db_to_variance(db):
    """Absolute variance for a level given in dB relative to quantum noise."""
    db = float(db)
    if not math.isfinite(db):
        raise ValueError(f"noise level must be finite, got {db!r}")
    return V0 * 10.0 ** (db / 10.0)


def variance_to_db(variance):
    variance = float(variance)
    if not (variance > 0 and math.isfinite(variance)):
        raise ValueError(f"variance must be positive and finite, got {variance!r}")
    return 10.0 * math.log10(variance / V0)


@dataclass(frozen=True)
class QuadratureState:
    """x and p covariance blocks of an n-mode Gaussian state.

    Construction validates symmetry, positive semidefiniteness and the
    per-mode uncertainty relation.  Arrays are stored read-only; every
    operation in this module returns a new state.
    """

    vx: np.ndarray
    vp: np.ndarray

    def __post_init__(self):
        vx = np.array(self.vx, dtype=float)
        vp = np.array(self.vp, dtype=float)
        if vx.ndim != 2 or vx.shape[0] != vx.shape[1] or vx.shape != vp.shape:
            raise ValueError(
                f"vx and vp must be square and equal in shape, got {vx.shape} and {vp.shape}"
            )
        if vx.shape[0] < 1:
            raise ValueError("a state needs at least one mode")
        for name, m in (("vx", vx), ("vp", vp)):
            asym = np.max(np.abs(m - m.T))
            if asym > _SYM_TOL:
                raise ValueError(f"{name} is not symmetric (max asymmetry {asym:.3g})")
            lowest = np.linalg.eigvalsh(m).min()
            if lowest < -_PSD_TOL:
                raise ValueError(f"{name} has a negative eigenvalue {lowest:.3g}")
        products = np.diag(vx) * np.diag(vp)
        worst = int(np.argmin(products))
        if products[worst] < V0**2 - _SYM_TOL:
            raise ValueError(
                f"mode {worst + 1} violates the uncertainty relation: "
                f"vx*vp = {products[worst]:.6g} < {V0**2}"
            )
        vx.setflags(write=False)
        vp.setflags(write=False)
        object.__setattr__(self, "vx", vx)
        object.__setattr__(self, "vp", vp)

    @property
    def n_modes(self):
        return self.vx.shape[0]

    def x_variances(self):
        return np.diag(self.vx).copy()

    def p_variances(self):
        return np.diag(self.vp).copy()

    def subsystem(self, modes):
        """Reduced state on the given 1-based modes, in the order given."""
        idx = [_index(m, self.n_modes) for m in modes]
        return QuadratureState(self.vx[np.ix_(idx, idx)], self.vp[np.ix_(idx, idx)])

    def embed(self, n_modes):
        """Pad with vacuum modes up to ``n_modes``."""
        if n_modes < self.n_modes:
            raise ValueError(f"cannot embed {self.n_modes} modes into {n_modes}")
        vx = np.eye(n_modes) * V0
        vp = np.eye(n_modes) * V0
        k = self.n_modes
        vx[:k, :k] = self.vx
        vp[:k, :k] = self.vp
        return QuadratureState(vx, vp)


@dataclass(frozen=True)
class SqueezerSpec:
    """In-beam noise levels of one squeezed input mode.

    ``squeezing_db`` applies to ``squeezed_quadrature``, ``antisqueezing_db`` to
    the conjugate one.
    """

    squeezed_quadrature: str
    squeezing_db: float
    antisqueezing_db: float

    def __post_init__(self):
        if self.squeezed_quadrature not in ("x", "p"):
            raise ValueError(
                f"squeezed_quadrature must be 'x' or 'p', got {self.squeezed_quadrature!r}"
            )
        s, a = float(self.squeezing_db), float(self.antisqueezing_db)
        if not (math.isfinite(s) and math.isfinite(a)):
            raise ValueError("noise levels must be finite")
        if s > 0 or a < 0:
            raise ValueError(
                f"need squeezing_db <= 0 <= antisqueezing_db, got {s} and {a}"
            )
        if s + a < -1e-12:
            raise ValueError(
                f"squeezing {s} dB with anti-squeezing {a} dB is below the purity bound"
            )
        object.__setattr__(self, "squeezing_db", s)
        object.__setattr__(self, "antisqueezing_db", a)

    @classmethod
    def from_source(
        cls,
        quadrature,
        measured_db,
        source_db=SOURCE_SQUEEZING_DB,
        source_antisqueezing_db=SOURCE_ANTISQUEEZING_DB,
    ):
        """Spec whose anti-squeezing is the source value after the loss that
        turns ``source_db`` into ``measured_db``."""
        eta = infer_loss(source_db, measured_db)
        anti = eta * db_to_variance(source_antisqueezing_db) + (1.0 - eta) * V0
        return cls(quadrature, measured_db, variance_to_db(anti))

    @classmethod
    def pure(cls, quadrature, squeezing_db):
        """Minimum-uncertainty squeezer (anti-squeezing equal to |squeezing|)."""
        return cls(quadrature, squeezing_db, -float(squeezing_db))

    def variances(self):
        """(vx, vp) of the mode."""
        low = db_to_variance(self.squeezing_db)
        high = db_to_variance(self.antisqueezing_db)
        return (low, high) if self.squeezed_quadrature == "x" else (high, low)


def experimental_inputs():
    """The x-squeezed Gaussian mode and p-squeezed flip mode as measured in-beam,
    with anti-squeezing propagated from the source through the inferred loss."""
    return (
        SqueezerSpec.from_source("x", GM_SQUEEZING_DB),
        SqueezerSpec.from_source("p", FM_SQUEEZING_DB),
    )


def vacuum_state(n):
    if int(n) != n or n < 1:
        raise ValueError(f"mode count must be a positive integer, got {n!r}")
    n = int(n)
    return QuadratureState(np.eye(n) * V0, np.eye(n) * V0)


def input_state(spec1, spec2, n):
    """Two squeezed modes (x-squeezed first, p-squeezed second) plus n-2 vacua."""
    if int(n) != n or n < 2:
        raise ValueError(f"an input state needs at least 2 modes, got {n!r}")
    if spec1.squeezed_quadrature != "x" or spec2.squeezed_quadrature != "p":
        raise ValueError("mode 1 must be x-squeezed and mode 2 p-squeezed")
    n = int(n)
    vx = np.eye(n) * V0
    vp = np.eye(n) * V0
    vx[0, 0], vp[0, 0] = spec1.variances()
    vx[1, 1], vp[1, 1] = spec2.variances()
    return QuadratureState(vx, vp)


def orthogonality_deviation(u):
    u = np.asarray(u, dtype=float)
    return float(np.max(np.abs(u @ u.T - np.eye(u.shape[0]))))


def apply_orthogonal(state, u):
    """Transform both quadrature blocks by a real orthogonal mode map."""
    u = np.asarray(u)
    if np.iscomplexobj(u):
        raise PreconditionError("mode maps must be real; complex phases would couple x and p")
    u = u.astype(float)
    if u.shape != (state.n_modes, state.n_modes):
        raise ValueError(f"matrix shape {u.shape} does not match {state.n_modes} modes")
    dev = orthogonality_deviation(u)
    if dev > _ORTHO_TOL:
        raise PreconditionError(
            f"matrix is not orthogonal (max |U U^T - I| = {dev:.3g})", deviation=dev
        )
    vx = u @ state.vx @ u.T
    vp = u @ state.vp @ u.T
    # Symmetrize to keep round-off from tripping the symmetry check.
    return QuadratureState((vx + vx.T) / 2, (vp + vp.T) / 2)


def apply_loss(state, mode, eta):
    """Pure loss with transmission ``eta`` on one mode (a beam splitter with vacuum)."""
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"efficiency must lie in [0, 1], got {eta}")
    i = _index(mode, state.n_modes)
    scale = np.ones(state.n_modes)
    scale[i] = math.sqrt(eta)
    out = []
    for m in (state.vx, state.vp):
        m = m * np.outer(scale, scale)
        m[i, i] += (1.0 - eta) * V0
        out.append(m)
    return QuadratureState(*out)


def apply_uniform_loss(state, eta):
    for mode in range(1, state.n_modes + 1):
        state = apply_loss(state, mode, eta)
    return state


def combination_variance(state, cx, cp):
    """Variance of sum_i cx[i] x_i + cp[i] p_i."""
    cx = np.asarray(cx, dtype=float)
    cp = np.asarray(cp, dtype=float)
    if cx.shape != (state.n_modes,) or cp.shape != (state.n_modes,):
        raise ValueError(
            f"coefficient vectors must have length {state.n_modes}, "
            f"got {cx.shape} and {cp.shape}"
        )
    return float(cx @ state.vx @ cx + cp @ state.vp @ cp)


def infer_loss(source_db, measured_db):
    """Transmission that degrades ``source_db`` of squeezing to ``measured_db``."""
    source_db, measured_db = float(source_db), float(measured_db)
    if not (math.isfinite(source_db) and math.isfinite(measured_db)):
        raise ValueError("noise levels must be finite")
    if source_db >= 0:
        raise ValueError(f"source must be squeezed (negative dB), got {source_db}")
    if not source_db <= measured_db <= 0:
        raise ValueError(
            f"measured level {measured_db} dB must lie between the source "
            f"{source_db} dB and 0 dB"
        )
    return (1.0 - 10.0 ** (measured_db / 10.0)) / (1.0 - 10.0 ** (source_db / 10.0))


def _index(mode, n):
    if int(mode) != mode or not 1 <= mode <= n:
        raise ValueError(f"mode {mode!r} out of range 1..{n}")
    return int(mode) - 1
