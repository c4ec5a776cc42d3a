"""Virtual linear-optics networks: elementary operations, composition and recipes.

A network is an ordered list of beam splitters, pi phase flips and mode swaps
acting on N modes numbered from 1.  Its matrix is the product of the embedded
operations, first operation rightmost, so that ``a_out = U a_in``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import PreconditionError

PIXELS = 8

# Rows are the electronic gain patterns of the eight input-basis modes, before
# the 1/sqrt(8) normalization.  Row 1 is the Gaussian mode, row 2 the flip mode.
_INPUT_GAINS = np.array(
    [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, 1, -1, -1, 1, 1, -1, -1],
        [-1, 1, 1, -1, 1, -1, -1, 1],
        [1, -1, 1, -1, 1, -1, 1, -1],
        [-1, 1, 1, -1, -1, 1, 1, -1],
        [-1, 1, -1, 1, 1, -1, 1, -1],
        [-1, -1, 1, 1, 1, 1, -1, -1],
    ],
    dtype=float,
)


@dataclass(frozen=True)
class BeamSplitter:
    i: int
    j: int
    reflectivity: float

    def __post_init__(self):
        _check_pair(self.i, self.j)
        r = float(self.reflectivity)
        if not (math.isfinite(r) and 0.0 <= r <= 1.0):
            raise ValueError(f"reflectivity must lie in [0, 1], got {self.reflectivity!r}")
        object.__setattr__(self, "reflectivity", r)

    @property
    def modes(self):
        return (self.i, self.j)


@dataclass(frozen=True)
class PhaseFlip:
    i: int

    def __post_init__(self):
        _check_mode(self.i)

    @property
    def modes(self):
        return (self.i,)


@dataclass(frozen=True)
class Swap:
    i: int
    j: int

    def __post_init__(self):
        _check_pair(self.i, self.j)

    @property
    def modes(self):
        return (self.i, self.j)


def _check_mode(i):
    if isinstance(i, bool) or int(i) != i or i < 1:
        raise ValueError(f"mode indices are positive integers, got {i!r}")


def _check_pair(i, j):
    _check_mode(i)
    _check_mode(j)
    if i == j:
        raise ValueError(f"two-mode operation needs distinct modes, got {i} and {j}")


def beamsplitter_matrix(reflectivity):
    """2x2 real beam splitter ``[[sqrt(R), sqrt(1-R)], [sqrt(1-R), -sqrt(R)]]``."""
    r = float(reflectivity)
    if not (math.isfinite(r) and 0.0 <= r <= 1.0):
        raise ValueError(f"reflectivity must lie in [0, 1], got {reflectivity!r}")
    a, b = math.sqrt(r), math.sqrt(1.0 - r)
    return np.array([[a, b], [b, -a]])


def embed(op, n):
    """N x N matrix of a single operation."""
    for m in op.modes:
        if m > n:
            raise ValueError(f"index {m} exceeds modes {n}")
    u = np.eye(n)
    if isinstance(op, BeamSplitter):
        idx = [op.i - 1, op.j - 1]
        u[np.ix_(idx, idx)] = beamsplitter_matrix(op.reflectivity)
    elif isinstance(op, PhaseFlip):
        u[op.i - 1, op.i - 1] = -1.0
    elif isinstance(op, Swap):
        i, j = op.i - 1, op.j - 1
        u[[i, j]] = u[[j, i]]
    else:
        raise TypeError(f"unknown network operation {op!r}")
    return u


def compose(ops, n):
    if int(n) != n or n < 1:
        raise ValueError(f"mode count must be a positive integer, got {n!r}")
    u = np.eye(int(n))
    for op in ops:
        u = embed(op, int(n)) @ u
    return u


@dataclass(frozen=True)
class VirtualNetwork:
    n_modes: int
    ops: tuple
    matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        m = compose(self.ops, self.n_modes)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, n):
        return cls(n, ())

    def then(self, *ops):
        return VirtualNetwork(self.n_modes, self.ops + tuple(ops))


@dataclass(frozen=True)
class OrthogonalityReport:
    deviation: float
    tolerance: float

    @property
    def passed(self):
        return self.deviation <= self.tolerance

    def __bool__(self):
        return self.passed


def validate_orthogonal(matrix, tol=1e-10):
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = float(np.max(np.abs(m @ m.T - np.eye(m.shape[0]))))
    return OrthogonalityReport(dev, tol)


def u_in():
    """Normalized 8x8 input-basis gain matrix."""
    return _INPUT_GAINS / math.sqrt(PIXELS)


@dataclass(frozen=True)
class GainBasis:
    """Per-pixel gains of N measured modes, one row per mode (normalized)."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] > rows.shape[1]:
            raise ValueError(f"need an N x M basis with N <= M, got {rows.shape}")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n_modes(self):
        return self.rows.shape[0]

    @property
    def n_pixels(self):
        return self.rows.shape[1]

    def unnormalized(self):
        """Gains on the integer scale used when the 1/sqrt(M) factor is dropped."""
        return self.rows * math.sqrt(self.n_pixels)

    def orthonormality_deviation(self):
        return float(np.max(np.abs(self.rows @ self.rows.T - np.eye(self.n_modes))))


def gain_basis(net):
    n = net.n_modes
    if n > PIXELS:
        raise ValueError(f"{n} modes cannot be measured with {PIXELS} pixels")
    # integer gains first so cancelling entries come out as exact zeros
    return GainBasis((net.matrix @ _INPUT_GAINS[:n]) / math.sqrt(PIXELS))


# -- recipes -----------------------------------------------------------------


def _cascade(port, vacua, ops):
    """Spread the field on ``port`` evenly over itself and ``vacua``.

    The n-th splitter keeps 1/(k - n) of the remaining power on the current
    mode and passes the rest on, so each of the k outputs carries 1/k.
    """
    k = len(vacua) + 1
    outputs = [port]
    current = port
    for n, vac in enumerate(vacua):
        ops.append(BeamSplitter(current, vac, 1.0 / (k - n)))
        current = vac
        outputs.append(vac)
    return outputs


def _arrange(layout, ops):
    """Append swaps so that position p ends up holding mode ``layout[p-1]``."""
    current = list(range(1, len(layout) + 1))
    for p, want in enumerate(layout):
        if current[p] != want:
            q = current.index(want)
            ops.append(Swap(p + 1, q + 1))
            current[p], current[q] = current[q], current[p]


# Output swaps that interleave the two arms, for N up to 8.
_RECIPE_SWAPS = {
    3: [(1, 2)],
    4: [(2, 3)],
    5: [(1, 4)],
    6: [(2, 5)],
    7: [(1, 6), (3, 4)],
    8: [(2, 7), (4, 5)],
}


def ebs_reflectivity(n):
    """Reflectivity of the splitter that mixes the two squeezed inputs."""
    if n < 2:
        raise ValueError(f"need at least 2 modes, got {n}")
    return 0.5 if n % 2 == 0 else 0.5 - 1.0 / (2 * n)


def compile_recipe(n, long_arm=1):
    """N-mode entangling network from two squeezed inputs and N-2 vacua.

    The inputs meet on the entangling splitter (EBS).  Each EBS output is
    spread evenly over one arm of outputs by a cascade of splitters with
    vacua on the free ports.  For odd N the arms differ by one output; the
    EBS reflectivity becomes 1/2 - 1/(2N) and ``long_arm`` selects which EBS
    output port (1 or 2) feeds the longer arm.  Port 1 is the default
    because it balances all N-1 pair correlations.

    Outputs of the left (shorter) arm are pi-flipped for N >= 3 so that the
    correlations appear as x_k - x_{k+1} and p_k + p_{k+1}.  N = 2 is left as
    the bare half-reflecting splitter.  Final swaps interleave the two arms,
    so every adjacent pair of outputs straddles the EBS.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"a recipe needs N >= 2, got {n!r}")
    if long_arm not in (1, 2):
        raise ValueError(f"long_arm must be 1 or 2, got {long_arm!r}")
    n = int(n)
    ops = [BeamSplitter(1, 2, ebs_reflectivity(n))]
    n_left = n // 2 if n % 2 == 0 else (n - 1) // 2
    if n % 2 == 0 or long_arm == 2:
        left_port, right_port = 1, 2
    else:
        left_port, right_port = 2, 1
    vacua = list(range(3, n + 1))
    left = _cascade(left_port, vacua[: n_left - 1], ops)
    right = _cascade(right_port, vacua[n_left - 1 :], ops)
    if n >= 3:
        ops.extend(PhaseFlip(m) for m in left)
    _arrange(left + right, ops)
    if n in _RECIPE_SWAPS:
        ops.extend(Swap(i, j) for i, j in _RECIPE_SWAPS[n])
    elif n > max(_RECIPE_SWAPS):
        # Same interleaving as the tabulated swaps, built directly.
        n_right = n - n_left
        blocks_left = list(range(1, n_left + 1))
        blocks_right = list(range(n_left + 1, n + 1))
        first, second = (
            (blocks_left, blocks_right) if n % 2 == 0 else (blocks_right, blocks_left)
        )
        interleaved = [m for pair in zip(first, second) for m in pair]
        if n_right > n_left:
            interleaved.append(first[-1])
        _arrange(interleaved, ops)
    return VirtualNetwork(n, ops)


def compile_cluster(n):
    """Networks for linear cluster states of 2 to 5 modes from two squeezers.

    Measured with the Fourier rotation on the even-numbered modes, the
    x-squeezed input supplies the nullifier of mode 2 and the p-squeezed input
    the nullifier of its neighbour.  With only two squeezers the remaining
    nullifiers are partly vacuum-limited.  The five-mode version is the
    four-mode network with an unmixed vacuum appended and does not satisfy
    the cluster criteria.
    """
    if n == 2:
        ops = [BeamSplitter(1, 2, 0.5), PhaseFlip(2)]
    elif n == 3:
        ops = [BeamSplitter(1, 3, 2 / 3), BeamSplitter(1, 2, 0.5), PhaseFlip(2)]
    elif n in (4, 5):
        ops = [
            BeamSplitter(2, 4, 2 / 3),
            BeamSplitter(1, 2, 2 / 3),
            BeamSplitter(1, 3, 0.5),
            Swap(2, 3),
            PhaseFlip(2),
            PhaseFlip(4),
        ]
    else:
        raise ValueError(f"cluster networks exist for 2 to 5 modes, got {n!r}")
    return VirtualNetwork(n, ops)


def require_orthogonal(matrix, tol=1e-10):
    report = validate_orthogonal(matrix, tol)
    if not report.passed:
        raise PreconditionError(
            f"matrix is not orthogonal (max deviation {report.deviation:.3g})",
            deviation=report.deviation,
        )
    return report
