"""The four benchmark targets and their exact Besov registrations.

Each entry carries its support, a sampling domain that leaves a zero margin
of one eighth of the support length on each side, and the positions of its
isolated singularities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .besov import INF, BesovParams
from .exceptions import DomainError, ParameterError
from .wavelet import SampleGrid

WEIERSTRASS_TOL = 1e-12
DEFAULT_LAMBDA = 0.5
DEFAULT_TAU = 1.0  # lambda + 1/p at p = 2: matches the lambda-tear's regularity


def weierstrass_terms(tau: float, tol: float = WEIERSTRASS_TOL) -> int:
    """Smallest K with 1.5**(-tau*K) < tol; the series keeps terms k < K."""
    return int(math.floor(-math.log(tol) / (tau * math.log(1.5)))) + 1


@dataclass(frozen=True)
class Singularity:
    x: float
    kind: str  # jump | derivative_kink | second_kind_chirp


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    params: dict
    support: tuple
    singularities: tuple
    fractal: bool
    defined_on: tuple = (-math.inf, math.inf)
    description: str = ""
    _formula: object = field(default=None, repr=False, compare=False)

    @property
    def domain(self) -> tuple:
        a, b = self.support
        pad = (b - a) / 8.0
        return (a - pad, b + pad)

    @property
    def singular_points(self) -> list:
        return [s.x for s in self.singularities]

    def __call__(self, x):
        return evaluate(self, x)


def _lambda_tear(x, lam):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = (x > 0) & (x < 1)
    xm = x[m]
    out[m] = xm ** lam * np.exp(-xm ** 2 / (1 - xm ** 2))
    return out


def _weierstrass(x, tau):
    # restricted to [0, 1]; zero elsewhere
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = (x >= 0) & (x <= 1)
    xm = x[m]
    acc = np.zeros_like(xm)
    for k in range(weierstrass_terms(tau)):
        acc += 1.5 ** (-tau * k) * np.sin(1.5 ** k * 5 * xm)
    out[m] = acc
    return out


def _double_chirp(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = (x > 0) & (x < 1)
    xm = x[m]
    out[m] = xm ** 0.25 * np.exp(-xm ** 2 / (1 - xm ** 2)) * np.sin(64 * np.pi * xm * (1 - xm))
    return out


def _sinusoidal_density(x):
    x = np.asarray(x, dtype=float)
    m = (x >= -2 * np.pi / 3) & (x <= np.pi / 3)
    return np.where(m, 0.5 * np.abs(np.sin(x)), 0.0)


def lambda_tear(lam: float = DEFAULT_LAMBDA) -> CorpusEntry:
    if not 0 < lam < 1:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
    return CorpusEntry(
        "lambda_tear", {"lambda": lam}, (0.0, 1.0),
        (Singularity(0.0, "derivative_kink"), Singularity(1.0, "derivative_kink")),
        False, (-1.0, 2.0), "x^lambda exp(-x^2/(1-x^2)) on (0, 1)",
        lambda x: _lambda_tear(x, lam))


def weierstrass(tau: float = DEFAULT_TAU) -> CorpusEntry:
    if not 0 < tau < 2:
        raise ParameterError(f"tau must lie in (0, 2), got {tau}")
    # only the cut-off points of the restriction to [0, 1] are isolated
    return CorpusEntry(
        "weierstrass", {"tau": tau}, (0.0, 1.0),
        (Singularity(0.0, "derivative_kink"), Singularity(1.0, "jump")),
        True, (-math.inf, math.inf), "sum_k 1.5^(-tau k) sin(1.5^k 5x) restricted to [0, 1]",
        lambda x: _weierstrass(x, tau))


def double_chirp() -> CorpusEntry:
    return CorpusEntry(
        "double_chirp", {"lambda": 0.5}, (0.0, 1.0),
        (Singularity(0.0, "second_kind_chirp"), Singularity(1.0, "second_kind_chirp")),
        False, (0.0, 1.0), "x^(1/4) exp(-x^2/(1-x^2)) sin(64 pi x (1-x)) on [0, 1]",
        _double_chirp)


def sinusoidal_density() -> CorpusEntry:
    return CorpusEntry(
        "sinusoidal_density", {}, (-2 * np.pi / 3, np.pi / 3),
        (Singularity(-2 * np.pi / 3, "jump"), Singularity(0.0, "derivative_kink"),
         Singularity(np.pi / 3, "jump")),
        False, (-math.inf, math.inf), "|sin x| / 2 on [-2pi/3, pi/3]",
        _sinusoidal_density)


_FACTORIES = {
    "lambda_tear": lambda_tear,
    "weierstrass": weierstrass,
    "double_chirp": double_chirp,
    "sinusoidal_density": sinusoidal_density,
}

IDS = tuple(_FACTORIES)


def get(entry_id: str, **params) -> CorpusEntry:
    """Look up a corpus entry; dashes and underscores are interchangeable."""
    key = entry_id.replace("-", "_").lower()
    if key not in _FACTORIES:
        raise KeyError(f"unknown corpus id {entry_id!r}; choose from {', '.join(IDS)}")
    return _FACTORIES[key](**params)


def evaluate(entry: CorpusEntry, x):
    """Evaluate the target formula; ``x`` must lie where the formula is defined."""
    arr = np.asarray(x, dtype=float)
    lo, hi = entry.defined_on
    if np.any((arr < lo) | (arr > hi)) or np.any(np.isnan(arr)):
        raise DomainError(f"x outside [{lo}, {hi}] where {entry.id} is defined")
    out = entry._formula(arr)
    return out if np.ndim(out) else float(out)


def sample(entry: CorpusEntry, n_samples: int = 1024) -> SampleGrid:
    return SampleGrid.from_function(entry._formula, entry.domain, n_samples)


def register_besov(entry: CorpusEntry, p: float = 2.0) -> BesovParams:
    """Exact Besov class (p, inf, s) of the target for 1 <= p <= inf."""
    if not p >= 1:
        raise ParameterError(f"Besov registration holds only for p >= 1, got {p}")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    if entry.id == "lambda_tear":
        s = entry.params["lambda"] + inv_p
    elif entry.id == "weierstrass":
        s = entry.params["tau"]
    elif entry.id == "double_chirp":
        s = 0.5 + inv_p
    else:
        s = inv_p
    return BesovParams(p, INF, s)
