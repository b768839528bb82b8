"""Random walks of parametric subordination.

On the operational grid t_*n = n tau_* the leading walk accumulates physical
time and the parent walk accumulates position,

    t_n = sum_k tau T_k,   x_n = sum_k h X_k,   tau = tau_*^(1/beta),  h = tau_*^(1/alpha),

with T_k one-sided beta-stable and X_k L_alpha^theta deviates.  The pairs
(t_n, x_n) are exact snapshots of the subordinated process at the random
instants t_n; between them the position is held.

Each step consumes four consecutive uniforms of the trajectory's stream
(angle and exponential for T_k, then for X_k), so a path grown in several
chunks is identical to one drawn in a single call.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import CensoredObservation, ParameterError
from .sampling import RngStream, one_sided_from_uniforms, stable_from_uniforms
from .subordination import DiffusionParams, _diffusion

_MAX_STEPS = 10 ** 12
_UNIFORMS_PER_STEP = 4


@dataclass(frozen=True)
class WalkConfig:
    params: DiffusionParams
    tau_star: float
    n_steps: int
    seed: int = 0
    trajectory_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "params", _diffusion(self.params))
        if not (self.tau_star > 0 and math.isfinite(self.tau_star)):
            raise ParameterError("tau_star must be positive and finite")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ParameterError("n_steps must be a positive integer")
        if self.n_steps > _MAX_STEPS:
            raise OverflowError(f"n_steps exceeds {_MAX_STEPS}")
        if self.seed < 0 or self.trajectory_id < 0:
            raise ParameterError("seed and trajectory_id must be nonnegative")
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @property
    def tau(self):
        """Physical time scale of one waiting increment."""
        return self.tau_star ** (1.0 / self.params.beta)

    @property
    def h(self):
        """Spatial scale of one jump."""
        return self.tau_star ** (1.0 / self.params.alpha)

    def stream(self) -> RngStream:
        return RngStream(self.seed, self.trajectory_id)


@dataclass
class WalkPath:
    """Snapshots (n, t_*, t, x) of one trajectory; row 0 is the origin."""
    config: WalkConfig
    n: np.ndarray
    t_star: np.ndarray
    t_bar: np.ndarray
    x_bar: np.ndarray
    _rng: RngStream = field(default=None, repr=False, compare=False)

    def __len__(self):
        return self.n.size

    @property
    def snapshots(self):
        return list(zip(self.n.tolist(), self.t_star.tolist(),
                        self.t_bar.tolist(), self.x_bar.tolist()))

    @property
    def horizon(self):
        return float(self.t_bar[-1])

    def same_as(self, other: "WalkPath") -> bool:
        return all(np.array_equal(getattr(self, k), getattr(other, k))
                   for k in ("n", "t_star", "t_bar", "x_bar"))


def _increments(cfg: WalkConfig, rng: RngStream, count: int):
    p = cfg.params
    u = rng.uniform((count, _UNIFORMS_PER_STEP))
    if p.beta == 1.0:
        # degenerate leading walk: unit drift, t_n = n tau_*
        dt = np.full(count, cfg.tau_star)
    else:
        dt = cfg.tau * one_sided_from_uniforms(p.beta, u[:, 0], u[:, 1])
    dx = cfg.h * stable_from_uniforms(p.stable, u[:, 2], u[:, 3])
    return dt, dx


def _grow(path: WalkPath, count: int) -> WalkPath:
    cfg = path.config
    dt, dx = _increments(cfg, path._rng, count)
    n0 = int(path.n[-1])
    n = np.arange(n0 + 1, n0 + count + 1)
    # sequential sums seeded with the last snapshot, so chunking is invisible
    t_bar = np.cumsum(np.concatenate([path.t_bar[-1:], dt]))[1:]
    x_bar = np.cumsum(np.concatenate([path.x_bar[-1:], dx]))[1:]
    return WalkPath(cfg, np.concatenate([path.n, n]),
                    np.concatenate([path.t_star, n * cfg.tau_star]),
                    np.concatenate([path.t_bar, t_bar]),
                    np.concatenate([path.x_bar, x_bar]), path._rng)


def simulate_walk(cfg: WalkConfig) -> WalkPath:
    """Trajectory with cfg.n_steps steps; deterministic in (seed, trajectory_id)."""
    origin = WalkPath(cfg, np.zeros(1, dtype=np.int64), np.zeros(1),
                      np.zeros(1), np.zeros(1), cfg.stream())
    return _grow(origin, cfg.n_steps)


def extend_walk(path: WalkPath, count: int) -> WalkPath:
    """Continue a path from its own stream by ``count`` further steps."""
    if path._rng is None:
        raise ParameterError("path carries no stream to continue from")
    if count < 1:
        raise ParameterError("count must be positive")
    return _grow(path, count)


def simulate_until(cfg: WalkConfig, t_obs: float) -> WalkPath:
    """Path grown in chunks of cfg.n_steps until its horizon passes t_obs."""
    path = simulate_walk(cfg)
    while path.t_bar[-1] <= t_obs:
        path = extend_walk(path, cfg.n_steps)
    return path


@dataclass
class DirectingPath:
    """Right-continuous step function t_*(t) = n tau_* on [t_n, t_{n+1})."""
    t_jump: np.ndarray
    t_star: np.ndarray

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ParameterError("t must be nonnegative")
        idx = np.searchsorted(self.t_jump, t, side="right") - 1
        res = self.t_star[idx]
        return float(res) if t.ndim == 0 else res


def invert_leading(path: WalkPath) -> DirectingPath:
    """Swap the axes of the leading path: horizontal and vertical segments trade places."""
    if len(path) == 0:
        raise ParameterError("empty path")
    return DirectingPath(path.t_bar.copy(), path.t_star.copy())


def parent_position(path: WalkPath, t_star):
    """Parent walk y(t_*) held constant between operational instants."""
    t_star = np.asarray(t_star, dtype=float)
    idx = np.searchsorted(path.t_star, t_star, side="right") - 1
    res = path.x_bar[np.maximum(idx, 0)]
    return float(res) if t_star.ndim == 0 else res


def sample_position_at(path: WalkPath, t_obs: float) -> float:
    """x_n for the largest n with t_n <= t_obs."""
    if t_obs < 0:
        raise ParameterError("t_obs must be nonnegative")
    if t_obs > path.t_bar[-1]:
        raise CensoredObservation(
            f"t_obs={t_obs:g} lies beyond the path horizon {path.t_bar[-1]:g}")
    idx = np.searchsorted(path.t_bar, t_obs, side="right") - 1
    return float(path.x_bar[idx])


def refine(cfg: WalkConfig, factor: int) -> WalkConfig:
    """Same operational horizon with a step factor times smaller."""
    if int(factor) != factor or factor < 1:
        raise ParameterError("factor must be a positive integer")
    if cfg.n_steps * factor > _MAX_STEPS:
        raise OverflowError(f"refined n_steps exceeds {_MAX_STEPS}")
    if factor == 1:
        return cfg
    return replace(cfg, tau_star=cfg.tau_star / factor, n_steps=cfg.n_steps * factor)


# ------------------------------------------------------------------ ensembles

def _positions_chunk(args):
    params, tau_star, n_steps, seed, ids, t_obs = args
    out = np.empty(len(ids))
    for i, tid in enumerate(ids):
        cfg = WalkConfig(params, tau_star, n_steps, seed, tid)
        out[i] = sample_position_at(simulate_until(cfg, t_obs), t_obs)
    return out


def default_chunk_steps(params, tau_star, t_obs):
    """Initial path length: about twice the typical operational time at t_obs."""
    p = _diffusion(params)
    return max(16, int(math.ceil(2.0 * t_obs ** p.beta / tau_star)))


def ensemble_positions(params, tau_star, n_paths, t_obs, seed, workers=1,
                       n_steps=None, first_id=0):
    """x(t_obs) for trajectories first_id .. first_id + n_paths - 1.

    Paths that fall short of t_obs are regrown from their own stream, so the
    result does not depend on n_steps or on the number of workers.
    """
    p = _diffusion(params)
    if n_paths < 1:
        raise ParameterError("n_paths must be positive")
    if t_obs <= 0:
        raise ParameterError("t_obs must be positive")
    n_steps = n_steps or default_chunk_steps(p, tau_star, t_obs)
    ids = np.arange(first_id, first_id + n_paths)
    workers = max(1, int(workers or 1))
    if workers == 1:
        return _positions_chunk((p, tau_star, n_steps, seed, ids.tolist(), t_obs))
    parts = [c.tolist() for c in np.array_split(ids, workers * 4) if c.size]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        res = ex.map(_positions_chunk,
                     [(p, tau_star, n_steps, seed, c, t_obs) for c in parts])
        return np.concatenate(list(res))


def simulate_ensemble(configs, workers=1):
    """simulate_walk over several configurations, order preserved."""
    configs = list(configs)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(simulate_walk, configs))
    return [simulate_walk(c) for c in configs]


# ------------------------------------------------------------------ plot data

def step_polyline(a, b):
    """Horizontal-then-vertical polyline through the points (a_n, b_n)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0:
        return np.zeros(0), np.zeros(0)
    xs = np.empty(2 * a.size - 1)
    ys = np.empty(2 * a.size - 1)
    xs[0::2] = a
    ys[0::2] = b
    xs[1::2] = a[1:]
    ys[1::2] = b[:-1]
    return xs, ys


def path_polyline(path: WalkPath, kind="subordinated"):
    """Plot data for one of the three walks.

    leading:      (t_*, t)    parent: (t_*, x)    subordinated: (t, x)
    """
    if kind == "leading":
        return step_polyline(path.t_star, path.t_bar)
    if kind == "parent":
        return step_polyline(path.t_star, path.x_bar)
    if kind == "subordinated":
        return step_polyline(path.t_bar, path.x_bar)
    raise ParameterError(f"unknown path kind {kind!r}")


def lint_polyline(xs, ys, monotone_y=False, require_waiting=False):
    """Structural problems of a step polyline (empty list when it is valid)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    problems = []
    if xs.shape != ys.shape or xs.ndim != 1:
        return ["abscissae and ordinates differ in shape"]
    if xs.size % 2 == 0:
        problems.append("a step polyline has an odd number of vertices")
    if xs.size < 3:
        return problems
    if np.any(np.diff(xs) < 0):
        problems.append("abscissa decreases")
    if np.any(ys[1::2] != ys[0:-1:2]):
        problems.append("segment 2k is not horizontal")
    if np.any(xs[2::2] != xs[1::2]):
        problems.append("segment 2k+1 is not vertical")
    if monotone_y and np.any(np.diff(ys) < 0):
        problems.append("ordinate decreases along a monotone path")
    if require_waiting and not np.any(np.diff(xs[0::2]) > 0):
        problems.append("no horizontal waiting segment of positive length")
    return problems
