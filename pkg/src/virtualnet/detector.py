"""Multi-pixel homodyne detector model.

Each pixel photocurrent is a quadrature of the field on that pixel.  A
measured mode is a weighted sum of pixel currents with the weights taken
from a row of a GainBasis, so measuring in the pixel domain and transforming
the modes directly must give the same statistics.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import PreconditionError
from .gaussian import QuadratureState, apply_orthogonal, apply_uniform_loss
from .network import PIXELS, GainBasis, u_in

_BASIS_TOL = 1e-10


@dataclass(frozen=True)
class PixelGeometry:
    pixel_count: int = PIXELS
    fill_factor: float = 0.9
    quantum_efficiency: float = 0.8

    def __post_init__(self):
        if int(self.pixel_count) != self.pixel_count or self.pixel_count < 1:
            raise ValueError(f"pixel_count must be a positive integer, got {self.pixel_count!r}")
        for name in ("fill_factor", "quantum_efficiency"):
            v = getattr(self, name)
            if not (0.0 < v <= 1.0):
                raise ValueError(f"{name} must lie in (0, 1], got {v!r}")


def detector_efficiency(geometry=None):
    """Total detection efficiency; dead area is treated as uniform loss."""
    geometry = geometry or PixelGeometry()
    return geometry.fill_factor * geometry.quantum_efficiency


def _check_basis(basis):
    dev = basis.orthonormality_deviation()
    if dev > _BASIS_TOL:
        raise PreconditionError(
            f"gain basis rows are not orthonormal (max deviation {dev:.3g})", deviation=dev
        )


def complete_basis(basis):
    """Orthogonal M x M matrix whose first N rows are the basis rows.

    The extra rows span the orthogonal complement (QR-based Gram-Schmidt).
    """
    if not isinstance(basis, GainBasis):
        basis = GainBasis(basis)
    _check_basis(basis)
    n, m = basis.rows.shape
    if n == m:
        return np.array(basis.rows)
    projector = np.eye(m) - basis.rows.T @ basis.rows
    q, r = np.linalg.qr(projector)
    # the complement has rank m - n; keep the columns with the largest weight
    keep = np.argsort(-np.abs(np.diag(r)), kind="stable")[: m - n]
    extra = q[:, np.sort(keep)].T
    full = np.vstack([basis.rows, extra])
    # one more pass to clean round-off in the complement
    qf, rf = np.linalg.qr(full.T)
    qf = qf * np.sign(np.diag(rf))
    return qf.T


def pixel_state(state_in):
    """Pixel-domain covariance of an 8-mode state given in the input basis."""
    if state_in.n_modes != PIXELS:
        raise ValueError(f"input-basis state must have {PIXELS} modes, got {state_in.n_modes}")
    # input modes are u_in applied to pixel fields, so pixels = u_in^T inputs
    return apply_orthogonal(state_in, u_in().T)


def measure_via_pixels(state_in, basis, efficiency=1.0):
    """x and p variances of each basis mode, computed from pixel currents.

    ``efficiency`` below 1 adds uniform detection loss on every pixel.
    """
    if not isinstance(basis, GainBasis):
        basis = GainBasis(basis)
    _check_basis(basis)
    pix = pixel_state(state_in)
    if efficiency != 1.0:
        pix = apply_uniform_loss(pix, efficiency)
    g = basis.rows
    vx = np.einsum("ni,ij,nj->n", g, pix.vx, g)
    vp = np.einsum("ni,ij,nj->n", g, pix.vp, g)
    return vx, vp


def measure_via_modes(state_in, basis, efficiency=1.0):
    """Same quantities through the completed orthogonal mode map."""
    if not isinstance(basis, GainBasis):
        basis = GainBasis(basis)
    full = complete_basis(basis)
    out = apply_orthogonal(state_in, full @ u_in().T)
    if efficiency != 1.0:
        out = apply_uniform_loss(out, efficiency)
    n = basis.n_modes
    return out.x_variances()[:n], out.p_variances()[:n]


def measured_state(state_in, basis, efficiency=1.0):
    """Full covariance of the N basis modes (pixel path)."""
    if not isinstance(basis, GainBasis):
        basis = GainBasis(basis)
    _check_basis(basis)
    pix = pixel_state(state_in)
    if efficiency != 1.0:
        pix = apply_uniform_loss(pix, efficiency)
    g = basis.rows
    return QuadratureState(g @ pix.vx @ g.T, g @ pix.vp @ g.T)


@dataclass(frozen=True)
class ModePattern:
    positions: np.ndarray
    amplitudes: np.ndarray


def pixel_centers(geometry=None):
    """Pixel centres in units of the beam waist, spanning -2..2."""
    geometry = geometry or PixelGeometry()
    m = geometry.pixel_count
    return -2.0 + (np.arange(m) + 0.5) * 4.0 / m


def render_mode_pattern(row, geometry=None):
    """Gain-weighted Gaussian field profile sampled at the pixel centres."""
    geometry = geometry or PixelGeometry()
    row = np.asarray(row, dtype=float)
    if row.shape != (geometry.pixel_count,):
        raise ValueError(f"row must have {geometry.pixel_count} entries, got shape {row.shape}")
    x = pixel_centers(geometry)
    envelope = np.exp(-(x**2))
    return ModePattern(x, row * envelope)


def patterns_csv(basis, geometry=None):
    """CSV text with one line per (mode, pixel)."""
    geometry = geometry or PixelGeometry()
    lines = ["mode,pixel,position,gain,amplitude"]
    scale = math.sqrt(basis.n_pixels)
    for n, row in enumerate(basis.rows, start=1):
        pat = render_mode_pattern(row, geometry)
        for k in range(geometry.pixel_count):
            lines.append(
                f"{n},{k + 1},{pat.positions[k]:.6f},{row[k] * scale:.6f},{pat.amplitudes[k]:.6f}"
            )
    return "\n".join(lines) + "\n"
