"""Homodyne gain and splitter optimization.

The p-term of each inseparability inequality is a quadratic form in the free
gains, so its minimum has a closed form.  The genetic algorithm mirrors how
the gains were tuned experimentally and is checked against that optimum.
"""

from dataclasses import dataclass
import numpy as np

from .errors import DegenerateInputError
from .gaussian import apply_orthogonal, input_state
from .network import BeamSplitter, VirtualNetwork


def _pair_coefficients(n, k, sign):
    cx = np.zeros(n)
    cx[k - 1] = 1.0
    cx[k] = -sign
    return cx


def optimal_gains_closed_form(state, k, sign=1):
    """Gains minimizing Var(p_k + sign p_{k+1} + sum_j g_j p_j) over the free j.

    Returns a length-N vector with the pair entries set to 1.
    """
    n = state.n_modes
    if int(k) != k or not 1 <= k <= n - 1:
        raise ValueError(f"pair index {k!r} out of range 1..{n - 1}")
    k = int(k)
    gains = np.zeros(n)
    gains[k - 1] = gains[k] = 1.0
    free = [i for i in range(n) if i not in (k - 1, k)]
    if not free:
        return gains
    a = state.vp[np.ix_(free, free)]
    b = state.vp[np.ix_(free, [k - 1, k])] @ np.array([1.0, sign])
    evals, evecs = np.linalg.eigh(a)
    if evals[0] <= 1e-12 * max(1.0, evals[-1]):
        null = np.zeros(n)
        null[free] = evecs[:, 0]
        raise DegenerateInputError(
            f"p covariance over the free modes is singular along {np.round(null, 6).tolist()}",
            direction=null,
        )
    g = -np.linalg.solve(a, b)
    gains[free] = g
    return gains


@dataclass(frozen=True)
class GainSolution:
    gains: tuple
    signs: tuple
    values: tuple
    method: str
    generations: int = 0
    stagnated: bool = False

    def __post_init__(self):
        # plain tuples so solutions compare and hash by value
        object.__setattr__(self, "gains", tuple(tuple(float(v) for v in g) for g in self.gains))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def mean_value(self):
        return float(np.mean(self.values))

    @property
    def value_variance(self):
        return float(np.var(self.values))


def closed_form_solution(state):
    n = state.n_modes
    gains, signs, values = [], [], []
    for k in range(1, n):
        best = None
        for s in (1, -1):
            g = optimal_gains_closed_form(state, k, s)
            cx = _pair_coefficients(n, k, s)
            cp = g.copy()
            cp[k] = s
            v = float(cx @ state.vx @ cx + cp @ state.vp @ cp)
            if best is None or v < best[0]:
                best = (v, g, s)
        values.append(best[0])
        gains.append(best[1])
        signs.append(best[2])
    return GainSolution(tuple(gains), tuple(signs), tuple(values), "closed_form")


@dataclass(frozen=True)
class GaConfig:
    """Genetic algorithm settings.

    ``objective_weight`` trades the mean of the N-1 values (weight) against
    their variance (1 - weight).  ``mode`` is ``"independent"`` (one gain
    vector per inequality) or ``"shared"`` (one vector for all).
    """

    population: int = 64
    generations: int = 200
    mutation_scale: float = 0.3
    seed: int = 0
    objective_weight: float = 0.9
    mode: str = "independent"
    elitism: int = 2
    tournament: int = 3
    mutation_rate: float = 0.3
    mutation_decay: float = 0.97
    init_range: float = 1.0
    patience: int = 40

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")
        if not 0.0 <= self.objective_weight <= 1.0:
            raise ValueError("objective_weight must lie in [0, 1]")
        if self.mode not in ("independent", "shared"):
            raise ValueError(f"mode must be 'independent' or 'shared', got {self.mode!r}")
        if not 0 <= self.elitism < self.population:
            raise ValueError("elitism must be smaller than the population")
        if self.tournament < 1:
            raise ValueError("tournament size must be positive")
        if not (self.seed >= 0 and self.seed < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")


class _VlfBatch:
    """Vectorized inequality values for a population of gain genomes."""

    def __init__(self, state, mode):
        self.n = n = state.n_modes
        self.vx = state.vx
        self.vp = state.vp
        self.mode = mode
        self.free = [[i for i in range(n) if i not in (k, k + 1)] for k in range(n - 1)]
        if mode == "independent":
            self.dim = (n - 1) * (n - 2)
        else:
            self.dim = n
        # x-term and pair coefficients for both signs
        self.xterm = {}
        for s in (1, -1):
            self.xterm[s] = np.array(
                [_pair_coefficients(n, k, s) @ self.vx @ _pair_coefficients(n, k, s)
                 for k in range(1, n)]
            )

    def full_gains(self, genomes, sign):
        """(P, N-1, N) gain vectors with pair entries (1, sign)."""
        p = genomes.shape[0]
        n = self.n
        out = np.zeros((p, n - 1, n))
        for k in range(n - 1):
            if self.mode == "independent":
                out[:, k, self.free[k]] = genomes[:, k * (n - 2):(k + 1) * (n - 2)]
            else:
                out[:, k, self.free[k]] = genomes[:, self.free[k]]
            out[:, k, k] = 1.0
            out[:, k, k + 1] = sign
        return out

    def values(self, genomes):
        best = None
        best_sign = None
        for s in (1, -1):
            c = self.full_gains(genomes, s)
            v = np.einsum("pki,ij,pkj->pk", c, self.vp, c) + self.xterm[s][None, :]
            if best is None:
                best, best_sign = v, np.full(v.shape, s)
            else:
                better = v < best
                best = np.where(better, v, best)
                best_sign = np.where(better, s, best_sign)
        return best, best_sign


def optimize_gains_ga(state, network=None, config=None):
    """Minimize weight*mean + (1-weight)*variance of the N-1 values.

    Tournament selection, blend crossover, Gaussian mutation with a decaying
    scale and elitism.  Fully determined by ``config.seed``.
    """
    config = config or GaConfig()
    if network is not None:
        state = apply_orthogonal(state, getattr(network, "matrix", network))
    n = state.n_modes
    if n < 2:
        raise ValueError("inseparability needs at least two modes")
    batch = _VlfBatch(state, config.mode)
    lam = config.objective_weight

    def fitness(genomes):
        v, _ = batch.values(genomes)
        return lam * v.mean(axis=1) + (1.0 - lam) * v.var(axis=1)

    if batch.dim == 0:
        genomes = np.zeros((1, 0))
        best = genomes[0]
        generations_run = 0
        stagnated = False
    else:
        rng = np.random.default_rng(config.seed)
        pop = rng.uniform(-config.init_range, config.init_range, (config.population, batch.dim))
        fit = fitness(pop)
        best_fit = fit.min()
        since_improvement = 0
        scale = config.mutation_scale
        for _gen in range(config.generations):
            order = np.argsort(fit, kind="stable")
            pop, fit = pop[order], fit[order]
            children = [pop[: config.elitism]]
            n_children = config.population - config.elitism
            contenders = rng.integers(0, config.population, (n_children, 2, config.tournament))
            # sorted population: the lowest index in a tournament is the fittest
            parents = pop[contenders.min(axis=2)]
            alpha = rng.uniform(-0.25, 1.25, (n_children, batch.dim))
            kids = alpha * parents[:, 0] + (1.0 - alpha) * parents[:, 1]
            mutate = rng.random((n_children, batch.dim)) < config.mutation_rate
            kids = kids + mutate * rng.normal(0.0, scale, (n_children, batch.dim))
            children.append(kids)
            pop = np.concatenate(children)
            fit = fitness(pop)
            scale *= config.mutation_decay
            if fit.min() < best_fit - 1e-15:
                best_fit = fit.min()
                since_improvement = 0
            else:
                since_improvement += 1
        best = pop[int(np.argmin(fit))]
        generations_run = config.generations
        stagnated = since_improvement >= config.patience

    values, signs = batch.values(best[None, :])
    gains = []
    for k in range(n - 1):
        s = int(signs[0, k])
        g = batch.full_gains(best[None, :], s)[0, k]
        g[k + 1] = 1.0
        gains.append(g)
    return GainSolution(
        tuple(gains),
        tuple(int(s) for s in signs[0]),
        tuple(float(v) for v in values[0]),
        "genetic",
        generations=generations_run,
        stagnated=bool(stagnated),
    )


@dataclass(frozen=True)
class SplitterOptimum:
    reflectivity: float
    value: float
    criterion: str


def two_mode_criterion(spec1, spec2, reflectivity, criterion="reid"):
    from .criteria import reid_epr, vlf_report

    state = input_state(spec1, spec2, 2)
    net = VirtualNetwork(2, [BeamSplitter(1, 2, reflectivity)])
    state = apply_orthogonal(state, net.matrix)
    if criterion == "reid":
        return reid_epr(state, 1, 2)
    if criterion == "vlf":
        return vlf_report(state).values[0]
    raise ValueError(f"criterion must be 'reid' or 'vlf', got {criterion!r}")


def optimize_ebs_reflectivity(spec1, spec2, criterion="reid", step=1e-3):
    """Reflectivity of the two-input splitter minimizing the criterion.

    A grid with spacing ``step`` brackets the minimum, then a bounded scalar
    search refines it.
    """
    from scipy.optimize import minimize_scalar

    if criterion not in ("reid", "vlf"):
        raise ValueError(f"criterion must be 'reid' or 'vlf', got {criterion!r}")
    grid = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    f = lambda r: two_mode_criterion(spec1, spec2, r, criterion)  # noqa: E731
    coarse = np.array([f(r) for r in grid])
    i = int(np.argmin(coarse))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    r, v = (float(res.x), float(res.fun)) if res.fun <= coarse[i] else (float(grid[i]), float(coarse[i]))
    return SplitterOptimum(r, v, criterion)
