"""Fixed-step integration of the rivalry models.

Two schemes are available, classical RK4 and forward Euler.  Stepping runs in
a compiled loop; `step_rk4` and `step_euler` expose the very same kernels one
step at a time, so a single call agrees bitwise with one iteration of
`simulate`.

Noise for the Kalarickal model comes from a counter-based generator: the
uniform draw for ``(seed, step, pathway)`` is a SplitMix64 hash of those three
numbers, so any draw can be recomputed without replaying the stream.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np
from numba import njit

from .models import KIND_KALARICKAL, ModelError, ModelInstance, Stimulus, _rhs

__all__ = [
    "NumericalBlowupError",
    "SimConfig",
    "Trajectory",
    "NoiseStream",
    "splitmix64",
    "derive_seed",
    "uniform01",
    "draw_noise",
    "step_rk4",
    "step_euler",
    "rk4_step",
    "euler_step",
    "initial_state",
    "simulate",
    "default_sim_config",
]

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
PATHWAYS = {21: 0, 12: 1}


class NumericalBlowupError(ArithmeticError):
    """A step produced a non-finite state."""

    def __init__(self, time: float, message: str | None = None):
        self.time = time
        super().__init__(message or f"non-finite state at t={time:g}")


# ---------------------------------------------------------------------------
# counter-based RNG
# ---------------------------------------------------------------------------

def splitmix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, *indices: int) -> int:
    """Child seed for replicate/row bookkeeping, chained through SplitMix64."""
    s = int(base) & MASK64
    for i in indices:
        s = splitmix64((s + GOLDEN * (int(i) + 1)) & MASK64)
    return s


def uniform01(seed: int, step: int, pathway: int) -> float:
    """Uniform draw in [0, 1) keyed by ``(seed, step, pathway index)``."""
    key = (int(seed) + GOLDEN * (2 * int(step) + int(pathway) + 1)) & MASK64
    return (splitmix64(key) >> 11) * 2.0 ** -53


@njit(cache=True)
def _uniform01(seed, step, pathway):
    # uint64 arithmetic wraps modulo 2**64, same as the python reference
    key = seed + np.uint64(0x9E3779B97F4A7C15) * (np.uint64(2) * step + pathway + np.uint64(1))
    z = key
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return float(z >> np.uint64(11)) * 1.1102230246251565e-16


@dataclass(frozen=True)
class NoiseStream:
    """Dichotomous noise ``b = +m if r < p else -m`` for both pathways."""

    seed: int
    p: float
    m: float

    def __post_init__(self):
        if not 0 <= int(self.seed) <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.m < 0:
            raise ValueError("m must be >= 0")


def draw_noise(stream: NoiseStream, step: int, pathway: int) -> float:
    """Noise value for `pathway` (21 or 12) at integration step `step`."""
    if pathway not in PATHWAYS:
        raise ValueError("pathway must be 21 or 12")
    if stream.m == 0.0:
        return 0.0
    r = uniform01(stream.seed, step, PATHWAYS[pathway])
    return stream.m if r < stream.p else -stream.m


# ---------------------------------------------------------------------------
# compiled steppers
# ---------------------------------------------------------------------------

@njit(cache=True)
def _rk4(kind, y, p, s1, s2, b21, b12, dt, k1, k2, k3, k4, tmp, out):
    n = y.shape[0]
    _rhs(kind, y, p, s1, s2, b21, b12, k1)
    for i in range(n):
        tmp[i] = y[i] + 0.5 * dt * k1[i]
    _rhs(kind, tmp, p, s1, s2, b21, b12, k2)
    for i in range(n):
        tmp[i] = y[i] + 0.5 * dt * k2[i]
    _rhs(kind, tmp, p, s1, s2, b21, b12, k3)
    for i in range(n):
        tmp[i] = y[i] + dt * k3[i]
    _rhs(kind, tmp, p, s1, s2, b21, b12, k4)
    for i in range(n):
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


@njit(cache=True)
def _euler(kind, y, p, s1, s2, b21, b12, dt, k1, out):
    _rhs(kind, y, p, s1, s2, b21, b12, k1)
    for i in range(y.shape[0]):
        out[i] = y[i] + dt * k1[i]


@njit(cache=True)
def _run(kind, y0, p, s1, s2, dt, nsteps, record_every, use_rk4,
         seed, noise_p, noise_m, swap_pathways):
    n = y0.shape[0]
    nrec = nsteps // record_every + 1
    rec = np.empty((nrec, n))
    y = y0.copy()
    ynew = np.empty(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    rec[0, :] = y
    r = 1
    noisy = kind == KIND_KALARICKAL and noise_m != 0.0
    path21 = np.uint64(1) if swap_pathways else np.uint64(0)
    path12 = np.uint64(0) if swap_pathways else np.uint64(1)
    for step in range(nsteps):
        b21 = 0.0
        b12 = 0.0
        if noisy:
            st = np.uint64(step)
            b21 = noise_m if _uniform01(seed, st, path21) < noise_p else -noise_m
            b12 = noise_m if _uniform01(seed, st, path12) < noise_p else -noise_m
        if use_rk4:
            _rk4(kind, y, p, s1, s2, b21, b12, dt, k1, k2, k3, k4, tmp, ynew)
        else:
            _euler(kind, y, p, s1, s2, b21, b12, dt, k1, ynew)
        for i in range(n):
            if not math.isfinite(ynew[i]):
                return rec[:r], step + 1
        y, ynew = ynew, y
        if (step + 1) % record_every == 0:
            rec[r, :] = y
            r += 1
    return rec, -1


def _check_step(model: ModelInstance, state, dt: float) -> np.ndarray:
    if not dt > 0:
        raise ValueError("dt must be positive")
    y = np.asarray(state, dtype=np.float64)
    if y.shape != (model.n_vars,):
        raise ModelError(f"state must have shape ({model.n_vars},), got {y.shape}")
    return y


def step_rk4(model: ModelInstance, state, stim: Stimulus, dt: float,
             noise_pair: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """One classical RK4 step; the noise pair is frozen over all four stages."""
    y = _check_step(model, state, dt)
    n = y.shape[0]
    out = np.empty(n)
    _rk4(model.code, y, model.params.as_array(), float(stim.s1), float(stim.s2),
         float(noise_pair[0]), float(noise_pair[1]), float(dt),
         np.empty(n), np.empty(n), np.empty(n), np.empty(n), np.empty(n), out)
    if not np.all(np.isfinite(out)):
        raise NumericalBlowupError(dt)
    return out


def step_euler(model: ModelInstance, state, stim: Stimulus, dt: float,
               noise_pair: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """One forward-Euler step."""
    y = _check_step(model, state, dt)
    out = np.empty(y.shape[0])
    _euler(model.code, y, model.params.as_array(), float(stim.s1), float(stim.s2),
           float(noise_pair[0]), float(noise_pair[1]), float(dt), np.empty(y.shape[0]), out)
    if not np.all(np.isfinite(out)):
        raise NumericalBlowupError(dt)
    return out


def rk4_step(f, y, dt):
    """Generic RK4 step for an autonomous ``f(y)``; used for reference solutions."""
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def euler_step(f, y, dt):
    return y + dt * f(y)


# ---------------------------------------------------------------------------
# configuration and trajectories
# ---------------------------------------------------------------------------

# dt (model time units), duration, record stride per kind
_SIM_DEFAULTS = {
    "wilson": (0.5, 10_000.0, 1, "rk4"),
    "laing-chow": (0.05, 10_000.0, 10, "rk4"),
    "lc-adaptation": (0.05, 10_000.0, 10, "rk4"),
    "lc-depression": (0.05, 10_000.0, 10, "rk4"),
    "kalarickal": (0.01, 5_000.0, 10, "euler"),
}

PRESETS = ("perturbed", "symmetric_zero")


@dataclass(frozen=True)
class SimConfig:
    """Integration settings.

    `initial_state` is either a preset name or an explicit state vector.
    `swap_noise_pathways` exchanges the two pathway noise streams, which is
    what a mirrored run of a swapped initial condition needs.
    """

    dt: float
    duration: float
    record_every: int = 1
    seed: int = 0
    initial_state: str | tuple[float, ...] = "perturbed"
    scheme: str = "rk4"
    swap_noise_pathways: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not self.duration >= self.dt:
            raise ValueError("duration must be >= dt")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError("record_every must be an integer >= 1")
        if not 0 <= int(self.seed) <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.scheme not in ("rk4", "euler"):
            raise ValueError(f"scheme must be 'rk4' or 'euler', got {self.scheme!r}")
        if isinstance(self.initial_state, str):
            if self.initial_state not in PRESETS:
                raise ValueError(f"unknown initial-state preset {self.initial_state!r}")
        else:
            object.__setattr__(self, "initial_state", tuple(float(v) for v in self.initial_state))

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def sample_interval(self) -> float:
        return self.dt * self.record_every

    def replace(self, **changes) -> "SimConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        if not isinstance(self.initial_state, str):
            d["initial_state"] = list(self.initial_state)
        return d

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimConfig":
        d = dict(data)
        if isinstance(d.get("initial_state"), list):
            d["initial_state"] = tuple(d["initial_state"])
        return cls(**d)


def default_sim_config(model: ModelInstance | str, **overrides) -> SimConfig:
    kind = model if isinstance(model, str) else model.kind
    dt, duration, stride, scheme = _SIM_DEFAULTS[kind]
    cfg = dict(dt=dt, duration=duration, record_every=stride, scheme=scheme)
    cfg.update(overrides)
    return SimConfig(**cfg)


def initial_state(model: ModelInstance, spec: str | Sequence[float] = "perturbed") -> np.ndarray:
    """Resolve an initial-state preset.

    Both presets start every variable at 0 except depression (Laing-Chow
    ``g``) and pathway-adaptation (Kalarickal ``y``) variables, which start
    fully recovered at 1.  ``perturbed`` adds 0.05 to population 1's activity.
    """
    if not isinstance(spec, str):
        y = np.asarray(spec, dtype=np.float64)
        if y.shape != (model.n_vars,):
            raise ModelError(f"initial state must have length {model.n_vars}, got {y.shape}")
        if not np.all(np.isfinite(y)):
            raise ModelError("initial state must be finite")
        return y.copy()
    y = np.zeros(model.n_vars)
    for i, label in enumerate(model.labels):
        if label[0] in "gy":
            y[i] = 1.0
    if spec == "perturbed":
        y[model.activity_index[0]] += 0.05
    elif spec != "symmetric_zero":
        raise ValueError(f"unknown initial-state preset {spec!r}")
    return y


@dataclass
class Trajectory:
    """Uniformly sampled solution of one simulation."""

    times: np.ndarray
    states: np.ndarray
    model: ModelInstance
    stim: Stimulus
    config: SimConfig
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.labels:
            self.labels = self.model.labels
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")

    def __getitem__(self, label: str) -> np.ndarray:
        return self.states[:, self.labels.index(label)]

    @property
    def activities(self) -> tuple[np.ndarray, np.ndarray]:
        i, j = self.model.activity_index
        return self.states[:, i], self.states[:, j]

    def metadata(self) -> dict[str, Any]:
        return {
            "model": self.model.to_dict(),
            "stim": {"s1": self.stim.s1, "s2": self.stim.s2},
            "config": self.config.to_dict(),
            "seed": self.config.seed,
            "initial_state": [float(v) for v in self.states[0]],
        }

    def to_csv(self, path: str | Path | None = None) -> str:
        """CSV with header ``t,<labels>``; every float printed with 17 significant digits."""
        buf = io.StringIO()
        buf.write(",".join(("t",) + tuple(self.labels)) + "\n")
        for t, row in zip(self.times, self.states):
            buf.write(format(float(t), ".17g"))
            for v in row:
                buf.write("," + format(float(v), ".17g"))
            buf.write("\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def write(self, path: str | Path, sidecar: bool = True) -> None:
        path = Path(path)
        self.to_csv(path)
        if sidecar:
            path.with_suffix(".json").write_text(json.dumps(self.metadata(), indent=2) + "\n")

    @classmethod
    def read_csv(cls, path: str | Path, model: ModelInstance | None = None,
                 stim: Stimulus | None = None, config: SimConfig | None = None) -> "Trajectory":
        """Load a trajectory written by `to_csv`.

        Missing metadata is taken from the JSON sidecar when present.  A
        malformed file raises `ValueError` naming the offending line.
        """
        path = Path(path)
        sidecar = path.with_suffix(".json")
        meta = json.loads(sidecar.read_text()) if sidecar.exists() else {}
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or not rows[0] or rows[0][0] != "t":
            raise ValueError(f"{path}:1: expected header starting with 't'")
        labels = tuple(rows[0][1:])
        data = []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != len(labels) + 1:
                raise ValueError(f"{path}:{lineno}: expected {len(labels) + 1} fields, got {len(row)}")
            try:
                data.append([float(v) for v in row])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field") from None
        if not data:
            raise ValueError(f"{path}: no data rows")
        arr = np.array(data)
        if model is None:
            if "model" in meta:
                model = ModelInstance.from_dict(meta["model"])
            else:
                try:
                    model = _guess_model(labels)
                except ValueError as exc:
                    raise ValueError(f"{path}:1: {exc}") from None
        if tuple(model.labels) != labels:
            raise ValueError(f"{path}:1: header {labels} does not match model {model.kind}")
        if stim is None:
            stim = Stimulus(**meta["stim"]) if "stim" in meta else Stimulus(0.0, 0.0)
        if config is None:
            if "config" in meta:
                config = SimConfig.from_dict(meta["config"])
            else:
                dt = float(arr[1, 0] - arr[0, 0]) if len(arr) > 1 else 1.0
                config = SimConfig(dt=dt, duration=max(float(arr[-1, 0]), dt))
        return cls(arr[:, 0].copy(), arr[:, 1:].copy(), model, stim, config, labels)


def _guess_model(labels: tuple[str, ...]) -> ModelInstance:
    from .models import MODEL_KINDS, default_params

    for kind in MODEL_KINDS:
        m = default_params(kind)
        if m.labels == labels:
            return m
    raise ValueError(f"cannot infer model from header {labels}")


def simulate(model: ModelInstance, stim: Stimulus, config: SimConfig) -> Trajectory:
    """Integrate `model` under constant `stim`.

    Records the initial state and then every ``record_every``-th step.  The
    result depends only on the arguments (including the seed), so repeated
    calls agree bitwise.
    """
    y0 = initial_state(model, config.initial_state)
    nsteps = config.n_steps
    noise_p = noise_m = 0.0
    if model.kind == "kalarickal":
        noise_p, noise_m = model.params.p, model.params.m
    rec, fail = _run(model.code, y0, model.params.as_array(), float(stim.s1), float(stim.s2),
                     float(config.dt), nsteps, int(config.record_every), config.scheme == "rk4",
                     np.uint64(int(config.seed)), float(noise_p), float(noise_m),
                     bool(config.swap_noise_pathways))
    if fail >= 0:
        raise NumericalBlowupError(fail * config.dt)
    times = np.arange(rec.shape[0]) * config.sample_interval
    return Trajectory(times, rec, model, stim, config)
