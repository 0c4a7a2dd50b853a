"""Rate models of two competing neural populations.

Five models are provided, each as a parameter record plus a compiled
right-hand side:

========================  ========================  =================
kind                      state labels              gain
========================  ========================  =================
``wilson``                E1 H1 I1 E2 H2 I2         Naka-Rushton
``laing-chow``            u1 a1 g1 u2 a2 g2         Heaviside
``lc-adaptation``         u1 a1 u2 a2               sigmoid
``lc-depression``         u1 g1 u2 g2               sigmoid
``kalarickal``            x1 y21 x2 y12             linear (shunting)
========================  ========================  =================

The right-hand sides never draw random numbers.  The Kalarickal model takes
its dichotomous noise pair ``(b21, b12)`` as an argument so that every RHS
is a pure function of its inputs.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Any, ClassVar, Mapping, Sequence

import numpy as np
from numba import njit

__all__ = [
    "ModelError",
    "WilsonParams",
    "LaingChowParams",
    "LCAdaptationParams",
    "LCDepressionParams",
    "KalarickalParams",
    "Stimulus",
    "ModelInstance",
    "MODEL_KINDS",
    "naka_rushton",
    "heaviside",
    "sigmoid",
    "rhs",
    "rhs_wilson",
    "rhs_laing_chow",
    "rhs_lc_adaptation",
    "rhs_lc_depression",
    "rhs_kalarickal",
    "default_params",
    "make_model",
]


class ModelError(ValueError):
    """Invalid parameters, stimulus or state dimension."""


# ---------------------------------------------------------------------------
# gain functions
# ---------------------------------------------------------------------------

@njit(cache=True)
def naka_rushton(x, H):
    """Naka-Rushton gain ``100 x+^2 / ((10 + H)^2 + x+^2)``.

    Negative input is rectified to zero; the result lies in ``[0, 100)``.
    """
    xp = x if x > 0.0 else 0.0
    xp2 = xp * xp
    s = 10.0 + H
    return 100.0 * xp2 / (s * s + xp2)


@njit(cache=True)
def heaviside(x):
    """Unit step with ``heaviside(0) == 1``."""
    return 1.0 if x >= 0.0 else 0.0


@njit(cache=True)
def sigmoid(x, k, theta):
    """Logistic gain with threshold `theta` and slope ``1/k``."""
    return 1.0 / (1.0 + math.exp(-(x - theta) / k))


# ---------------------------------------------------------------------------
# compiled right-hand sides
#
# Every kernel writes into ``out`` and is written so that the population-2
# expression is the exact mirror image of the population-1 expression; this
# is what makes index-swap equivariance hold bitwise.
# ---------------------------------------------------------------------------

KIND_WILSON = 0
KIND_LAING_CHOW = 1
KIND_LC_ADAPTATION = 2
KIND_LC_DEPRESSION = 3
KIND_KALARICKAL = 4


@njit(cache=True)
def _rhs_wilson(y, p, s1, s2, out):
    g, h, tau_e, tau_h, tau_i = p[0], p[1], p[2], p[3], p[4]
    E1, H1, I1, E2, H2, I2 = y[0], y[1], y[2], y[3], y[4], y[5]
    out[0] = (-E1 + naka_rushton(s1 - g * I2, H1)) / tau_e
    out[1] = (-H1 + h * E1) / tau_h
    out[2] = (-I1 + E1) / tau_i
    out[3] = (-E2 + naka_rushton(s2 - g * I1, H2)) / tau_e
    out[4] = (-H2 + h * E2) / tau_h
    out[5] = (-I2 + E2) / tau_i


@njit(cache=True)
def _rhs_laing_chow(y, p, s1, s2, out):
    alpha, beta, phi_a, phi_d = p[0], p[1], p[2], p[3]
    tau_a, tau_d, tau_u = p[4], p[5], p[6]
    u1, a1, g1, u2, a2, g2 = y[0], y[1], y[2], y[3], y[4], y[5]
    f1 = heaviside(alpha * u1 * g1 - beta * u2 * g2 - a1 + s1)
    f2 = heaviside(alpha * u2 * g2 - beta * u1 * g1 - a2 + s2)
    out[0] = (-u1 + f1) / tau_u
    out[1] = (-a1 + phi_a * f1) / tau_a
    out[2] = (1.0 - g1 - g1 * phi_d * f1) / tau_d
    out[3] = (-u2 + f2) / tau_u
    out[4] = (-a2 + phi_a * f2) / tau_a
    out[5] = (1.0 - g2 - g2 * phi_d * f2) / tau_d


@njit(cache=True)
def _rhs_lc_adaptation(y, p, s1, s2, out):
    beta, g, tau_a, tau_u, k, theta = p[0], p[1], p[2], p[3], p[4], p[5]
    u1, a1, u2, a2 = y[0], y[1], y[2], y[3]
    out[0] = (-u1 + sigmoid(-beta * u2 - g * a1 + s1, k, theta)) / tau_u
    out[1] = (-a1 + u1) / tau_a
    out[2] = (-u2 + sigmoid(-beta * u1 - g * a2 + s2, k, theta)) / tau_u
    out[3] = (-a2 + u2) / tau_a


@njit(cache=True)
def _rhs_lc_depression(y, p, s1, s2, out):
    beta, gamma, tau_d, tau_u, k, theta = p[0], p[1], p[2], p[3], p[4], p[5]
    u1, g1, u2, g2 = y[0], y[1], y[2], y[3]
    out[0] = (-u1 + sigmoid(-beta * u2 * g2 + s1, k, theta)) / tau_u
    out[1] = (1.0 - g1 - gamma * u1 * g1) / tau_d
    out[2] = (-u2 + sigmoid(-beta * u1 * g1 + s2, k, theta)) / tau_u
    out[3] = (1.0 - g2 - gamma * u2 * g2) / tau_d


@njit(cache=True)
def _rhs_kalarickal(y, p, s1, s2, b21, b12, out):
    w1, w2, w12, w21 = p[0], p[1], p[2], p[3]
    c1, c2, c3 = p[4], p[5], p[6]
    x1, y21, x2, y12 = y[0], y[1], y[2], y[3]
    r1 = x1 if x1 > 0.0 else 0.0
    r2 = x2 if x2 > 0.0 else 0.0
    out[0] = -x1 + (1.0 - x1) * w1 * s1 - (c1 + x1) * w21 * y21 * r2
    out[1] = c2 * ((1.0 - y21) - c3 * r2 * w21 * y21) + b21
    out[2] = -x2 + (1.0 - x2) * w2 * s2 - (c1 + x2) * w12 * y12 * r1
    out[3] = c2 * ((1.0 - y12) - c3 * r1 * w12 * y12) + b12


@njit(cache=True)
def _rhs(kind, y, p, s1, s2, b21, b12, out):
    if kind == KIND_WILSON:
        _rhs_wilson(y, p, s1, s2, out)
    elif kind == KIND_LAING_CHOW:
        _rhs_laing_chow(y, p, s1, s2, out)
    elif kind == KIND_LC_ADAPTATION:
        _rhs_lc_adaptation(y, p, s1, s2, out)
    elif kind == KIND_LC_DEPRESSION:
        _rhs_lc_depression(y, p, s1, s2, out)
    else:
        _rhs_kalarickal(y, p, s1, s2, b21, b12, out)


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------

def _require_positive(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ModelError(f"{type(obj).__name__}.{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class _Params:
    kind: ClassVar[str]
    labels: ClassVar[tuple[str, ...]]
    activity_index: ClassVar[tuple[int, int]]
    cross_inhibition: ClassVar[str | None] = None

    def as_array(self) -> np.ndarray:
        return np.array([float(getattr(self, f.name)) for f in dataclasses.fields(self)
                         if f.metadata.get("array", True)], dtype=np.float64)

    def to_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ModelError(f"unknown {cls.kind} parameter(s): {', '.join(sorted(unknown))}")
        return cls(**{k: float(v) for k, v in data.items()})

    def replace(self, **changes):
        names = {f.name for f in dataclasses.fields(self)}
        unknown = set(changes) - names
        if unknown:
            raise ModelError(f"unknown {self.kind} parameter(s): {', '.join(sorted(unknown))}")
        return dataclasses.replace(self, **{k: float(v) for k, v in changes.items()})

    @property
    def implementer_defaults(self) -> tuple[str, ...]:
        """Names of fields whose defaults are not taken from published values."""
        return ()


@dataclass(frozen=True)
class WilsonParams(_Params):
    """Wilson's model with separate inhibitory populations.

    Times are in ms.  `g` scales cross-inhibition, `h` the adaptation drive.
    """

    kind: ClassVar[str] = "wilson"
    labels: ClassVar[tuple[str, ...]] = ("E1", "H1", "I1", "E2", "H2", "I2")
    activity_index: ClassVar[tuple[int, int]] = (0, 3)
    cross_inhibition: ClassVar[str] = "g"

    g: float = 0.45
    h: float = 0.47
    tau_e: float = 20.0
    tau_h: float = 900.0
    tau_i: float = 11.0

    def __post_init__(self):
        _require_positive(self, ("g", "h", "tau_e", "tau_h", "tau_i"))


@dataclass(frozen=True)
class LaingChowParams(_Params):
    """Laing-Chow model with adaptation and synaptic depression.

    ``tau_u`` is the firing-rate time constant (ms); the other two time
    constants must stay slow relative to it for rivalry to appear.
    """

    kind: ClassVar[str] = "laing-chow"
    labels: ClassVar[tuple[str, ...]] = ("u1", "a1", "g1", "u2", "a2", "g2")
    activity_index: ClassVar[tuple[int, int]] = (0, 3)
    cross_inhibition: ClassVar[str] = "beta"

    alpha: float = 0.35
    beta: float = 0.7
    phi_a: float = 0.6
    phi_d: float = 0.6
    tau_a: float = 20.0
    tau_d: float = 40.0
    tau_u: float = 1.0

    def __post_init__(self):
        _require_positive(self, ("alpha", "beta", "phi_a", "phi_d", "tau_a", "tau_d", "tau_u"))

    @property
    def implementer_defaults(self):
        return ("tau_u",)


@dataclass(frozen=True)
class LCAdaptationParams(_Params):
    """Adaptation-only reduction of the Laing-Chow model (sigmoid gain)."""

    kind: ClassVar[str] = "lc-adaptation"
    labels: ClassVar[tuple[str, ...]] = ("u1", "a1", "u2", "a2")
    activity_index: ClassVar[tuple[int, int]] = (0, 2)
    cross_inhibition: ClassVar[str] = "beta"

    beta: float = 0.9
    g: float = 0.5
    tau_a: float = 100.0
    tau_u: float = 1.0
    k: float = 0.1
    theta: float = 0.2

    def __post_init__(self):
        _require_positive(self, ("beta", "g", "tau_a", "tau_u", "k", "theta"))

    @property
    def implementer_defaults(self):
        return ("tau_u",)


@dataclass(frozen=True)
class LCDepressionParams(_Params):
    """Depression-only reduction of the Laing-Chow model (sigmoid gain).

    No published values exist for `gamma` and `tau_d`; the defaults here
    were picked so that a rivalry band exists at intermediate input.
    """

    kind: ClassVar[str] = "lc-depression"
    labels: ClassVar[tuple[str, ...]] = ("u1", "g1", "u2", "g2")
    activity_index: ClassVar[tuple[int, int]] = (0, 2)
    cross_inhibition: ClassVar[str] = "beta"

    beta: float = 0.9
    gamma: float = 0.5
    tau_d: float = 100.0
    tau_u: float = 1.0
    k: float = 0.1
    theta: float = 0.2

    def __post_init__(self):
        _require_positive(self, ("beta", "gamma", "tau_d", "tau_u", "k", "theta"))

    @property
    def implementer_defaults(self):
        return ("gamma", "tau_d", "tau_u")


@dataclass(frozen=True)
class KalarickalParams(_Params):
    """Kalarickal-Marshall shunting model with adapting inhibitory pathways.

    Time is dimensionless (the leak term has unit rate).  `p` and `m` set
    the dichotomous noise added to both pathway adaptation equations.
    """

    kind: ClassVar[str] = "kalarickal"
    labels: ClassVar[tuple[str, ...]] = ("x1", "y21", "x2", "y12")
    activity_index: ClassVar[tuple[int, int]] = (0, 2)

    w_exc_1: float = 0.25
    w_exc_2: float = 0.25
    w_inh_12: float = 250.0
    w_inh_21: float = 250.0
    c1: float = 0.01
    c2: float = 0.008
    c3: float = 0.083
    p: float = field(default=0.5, metadata={"array": False})
    m: float = field(default=0.0025, metadata={"array": False})

    def __post_init__(self):
        _require_positive(self, ("w_exc_1", "w_exc_2", "w_inh_12", "w_inh_21", "c1", "c2", "c3"))
        if not (math.isfinite(self.p) and 0.0 <= self.p <= 1.0):
            raise ModelError(f"KalarickalParams.p must lie in [0, 1], got {self.p!r}")
        if not (math.isfinite(self.m) and self.m >= 0.0):
            raise ModelError(f"KalarickalParams.m must be >= 0, got {self.m!r}")


_PARAM_TYPES: dict[str, type[_Params]] = {
    cls.kind: cls
    for cls in (WilsonParams, LaingChowParams, LCAdaptationParams, LCDepressionParams, KalarickalParams)
}
_KIND_CODES = {
    "wilson": KIND_WILSON,
    "laing-chow": KIND_LAING_CHOW,
    "lc-adaptation": KIND_LC_ADAPTATION,
    "lc-depression": KIND_LC_DEPRESSION,
    "kalarickal": KIND_KALARICKAL,
}
MODEL_KINDS: tuple[str, ...] = tuple(_PARAM_TYPES)

# activity magnitude used to scale the default dominance margins
_ACTIVITY_SCALE = {
    "wilson": 100.0,
    "laing-chow": 1.0,
    "lc-adaptation": 1.0,
    "lc-depression": 1.0,
    "kalarickal": 0.2,
}


def _normalize_kind(kind: str) -> str:
    key = kind.strip().lower().replace("_", "-")
    aliases = {"laingchow": "laing-chow", "lc": "laing-chow", "adaptation": "lc-adaptation",
               "depression": "lc-depression", "km": "kalarickal", "kalarickal-marshall": "kalarickal"}
    key = aliases.get(key, key)
    if key not in _PARAM_TYPES:
        raise ModelError(f"unknown model kind {kind!r}; expected one of {', '.join(MODEL_KINDS)}")
    return key


@dataclass(frozen=True)
class Stimulus:
    """Constant input strengths to the two eyes."""

    s1: float
    s2: float

    def __post_init__(self):
        for name in ("s1", "s2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ModelError(f"stimulus {name} must be finite and >= 0, got {v!r}")

    @classmethod
    def equal(cls, s: float) -> "Stimulus":
        return cls(float(s), float(s))

    def swapped(self) -> "Stimulus":
        return Stimulus(self.s2, self.s1)


@dataclass(frozen=True)
class ModelInstance:
    """A model kind together with its parameter record."""

    kind: str
    params: _Params

    def __post_init__(self):
        kind = _normalize_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not isinstance(self.params, _PARAM_TYPES[kind]):
            raise ModelError(f"kind {kind!r} requires {_PARAM_TYPES[kind].__name__}, "
                             f"got {type(self.params).__name__}")

    @property
    def code(self) -> int:
        return _KIND_CODES[self.kind]

    @property
    def labels(self) -> tuple[str, ...]:
        return self.params.labels

    @property
    def n_vars(self) -> int:
        return len(self.params.labels)

    @property
    def activity_index(self) -> tuple[int, int]:
        return self.params.activity_index

    @property
    def activity_scale(self) -> float:
        return _ACTIVITY_SCALE[self.kind]

    @property
    def cross_inhibition_name(self) -> str | None:
        return self.params.cross_inhibition

    @property
    def swap_permutation(self) -> np.ndarray:
        """Index permutation exchanging the population-1 and population-2 blocks."""
        half = self.n_vars // 2
        return np.r_[np.arange(half, 2 * half), np.arange(half)]

    def with_params(self, **changes) -> "ModelInstance":
        return ModelInstance(self.kind, self.params.replace(**changes))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "params": self.params.to_dict(),
            "implementer_defaults": list(self.params.implementer_defaults),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelInstance":
        kind = _normalize_kind(str(data["kind"]))
        params = _PARAM_TYPES[kind]().to_dict()
        params.update(data.get("params", {}))
        return cls(kind, _PARAM_TYPES[kind].from_dict(params))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ModelInstance":
        return cls.from_dict(json.loads(text))


def default_params(kind: str) -> ModelInstance:
    """Return the model `kind` with its published parameter values."""
    kind = _normalize_kind(kind)
    return ModelInstance(kind, _PARAM_TYPES[kind]())


def make_model(kind: str, **overrides: float) -> ModelInstance:
    """Default model with selected parameters overridden."""
    return default_params(kind).with_params(**overrides)


# ---------------------------------------------------------------------------
# python-facing RHS
# ---------------------------------------------------------------------------

def _as_state(state: Sequence[float], n: int) -> np.ndarray:
    y = np.asarray(state, dtype=np.float64)
    if y.shape != (n,):
        raise ModelError(f"state must have shape ({n},), got {y.shape}")
    return y


def rhs(model: ModelInstance, state: Sequence[float], stim: Stimulus,
        noise: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """Time derivative of `state` for any model.

    `noise` is the ``(b21, b12)`` pair and is ignored by every model except
    Kalarickal's.
    """
    y = _as_state(state, model.n_vars)
    out = np.empty_like(y)
    _rhs(model.code, y, model.params.as_array(), float(stim.s1), float(stim.s2),
         float(noise[0]), float(noise[1]), out)
    return out


def rhs_wilson(state, params: WilsonParams, stim: Stimulus) -> np.ndarray:
    return rhs(ModelInstance("wilson", params), state, stim)


def rhs_laing_chow(state, params: LaingChowParams, stim: Stimulus) -> np.ndarray:
    return rhs(ModelInstance("laing-chow", params), state, stim)


def rhs_lc_adaptation(state, params: LCAdaptationParams, stim: Stimulus) -> np.ndarray:
    return rhs(ModelInstance("lc-adaptation", params), state, stim)


def rhs_lc_depression(state, params: LCDepressionParams, stim: Stimulus) -> np.ndarray:
    return rhs(ModelInstance("lc-depression", params), state, stim)


def rhs_kalarickal(state, params: KalarickalParams, stim: Stimulus,
                   noise: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    return rhs(ModelInstance("kalarickal", params), state, stim, noise)
