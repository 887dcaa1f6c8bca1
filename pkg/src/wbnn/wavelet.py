"""Daubechies filters, cascade evaluation and the fast wavelet transform.

The transform works on a dyadic grid of ``N = 2**n`` samples.  The grid's
domain is mapped affinely onto the unit interval, so level ``j`` carries
``2**j`` coefficients and ``j0 = 0`` means a single scaling coefficient.
Filtering is periodic; ``analyze`` insists on a zero margin of at least one
filter length at both ends of the grid, which makes the finest levels agree
with plain zero extension while the transform stays exactly orthonormal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .exceptions import BoundaryError, ParameterError, ShapeError, StructureError

MAX_ORDER = 10
DEFAULT_ORDER = 4
DEFAULT_CASCADE_DEPTH = 12


@dataclass(frozen=True)
class FilterPair:
    """Orthonormal Daubechies filter bank with ``vanishing_moments`` moments."""

    low_pass: np.ndarray
    high_pass: np.ndarray
    vanishing_moments: int

    @property
    def support_length(self) -> int:
        return len(self.low_pass)

    def __hash__(self):
        return hash((self.vanishing_moments, self.low_pass.tobytes()))

    def __eq__(self, other):
        return (isinstance(other, FilterPair)
                and self.vanishing_moments == other.vanishing_moments
                and np.array_equal(self.low_pass, other.low_pass))


def _daubechies_lowpass(order: int) -> np.ndarray:
    # Spectral factorisation of the Daubechies polynomial, done in extended
    # precision so that order 10 still meets 1e-12 orthonormality.
    with mpmath.workdps(50):
        if order == 1:
            poly = [mpmath.mpf(1), mpmath.mpf(1)]
        else:
            # P(y) = sum_k C(r-1+k, k) y^k ; polyroots wants descending powers
            coeffs = [mpmath.binomial(order - 1 + k, k) for k in range(order)]
            y_roots = mpmath.polyroots(coeffs[::-1], maxsteps=200, extraprec=200)
            poly = [mpmath.mpf(1)]
            for y in y_roots:
                # z + 1/z = 2 - 4y; keep the root inside the unit circle
                b = 2 - 4 * y
                disc = mpmath.sqrt(b * b - 4)
                z = (b - disc) / 2
                if abs(z) > 1:
                    z = (b + disc) / 2
                poly = _polymul(poly, [-z, mpmath.mpf(1)])
            for _ in range(order):
                poly = _polymul(poly, [mpmath.mpf(1), mpmath.mpf(1)])
        total = mpmath.fsum(poly)
        h = [mpmath.re(c) * mpmath.sqrt(2) / mpmath.re(total) for c in poly]
        return np.array([float(c) for c in h[::-1]])


def _polymul(a, b):
    out = [mpmath.mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def make_daubechies(vanishing_moments: int = DEFAULT_ORDER) -> FilterPair:
    """Return the Daubechies filter pair with the given number of vanishing moments.

    ``vanishing_moments=1`` is the Haar filter.  The high-pass filter follows
    the quadrature-mirror rule ``g[k] = (-1)**k * h[L-1-k]``.
    """
    if not isinstance(vanishing_moments, (int, np.integer)) or not 1 <= vanishing_moments <= MAX_ORDER:
        raise ParameterError(
            f"vanishing_moments must be an integer in [1, {MAX_ORDER}], got {vanishing_moments!r}")
    h = _daubechies_lowpass(int(vanishing_moments))
    signs = (-1.0) ** np.arange(len(h))
    g = signs * h[::-1]
    h.setflags(write=False)
    g.setflags(write=False)
    return FilterPair(h, g, int(vanishing_moments))


# --------------------------------------------------------------------------
# cascade algorithm


@lru_cache(maxsize=64)
def _scaling_table(filt: FilterPair, depth: int) -> np.ndarray:
    """phi sampled at multiples of 2**-depth on [0, L-1]."""
    h = filt.low_pass
    L = len(h)
    # phi at the integers: eigenvector of A[i, k] = sqrt(2) h[2i - k] for eigenvalue 1
    A = np.zeros((L, L))
    for i in range(L):
        for k in range(L):
            if 0 <= 2 * i - k < L:
                A[i, k] = np.sqrt(2) * h[2 * i - k]
    w, v = np.linalg.eig(A)
    idx = np.argmin(np.abs(w - 1.0))
    vals = np.real(v[:, idx])
    vals = vals / vals.sum()
    vals[-1] = 0.0  # phi(L-1) = 0 for every compactly supported Daubechies phi

    for d in range(1, depth + 1):
        step_prev = 2 ** (d - 1)
        n_new = (L - 1) * 2 ** d + 1
        new = np.zeros(n_new)
        m = np.arange(n_new)
        for k in range(L):
            src = m - k * step_prev
            ok = (src >= 0) & (src < len(vals))
            new[ok] += np.sqrt(2) * h[k] * vals[src[ok]]
        vals = new
    vals.setflags(write=False)
    return vals


def _interp(table: np.ndarray, depth: int, x):
    x = np.asarray(x, dtype=float)
    pos = x * 2 ** depth
    out = np.interp(pos, np.arange(len(table)), table, left=0.0, right=0.0)
    return out if out.ndim else float(out)


def evaluate_scaling(filt: FilterPair, x, cascade_depth: int = DEFAULT_CASCADE_DEPTH):
    """Evaluate the scaling function phi at ``x`` by the cascade algorithm.

    Values between dyadic nodes are linearly interpolated.  Haar is exact.
    """
    if cascade_depth < 1:
        raise ParameterError("cascade_depth must be >= 1")
    if filt.vanishing_moments == 1:
        x = np.asarray(x, dtype=float)
        out = ((x >= 0) & (x < 1)).astype(float)
        return out if out.ndim else float(out)
    return _interp(_scaling_table(filt, cascade_depth), cascade_depth, x)


def evaluate_wavelet(filt: FilterPair, x, cascade_depth: int = DEFAULT_CASCADE_DEPTH):
    """Evaluate the mother wavelet psi(x) = sqrt(2) sum_k g_k phi(2x - k)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for k, gk in enumerate(filt.high_pass):
        out = out + np.sqrt(2) * gk * evaluate_scaling(filt, 2 * x - k, cascade_depth)
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# sampled signals and coefficient trees


@dataclass(frozen=True)
class SampleGrid:
    """Samples ``values[i] = f(x_lo + i * step)`` on a dyadic grid."""

    domain: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        lo, hi = map(float, self.domain)
        if not hi > lo:
            raise ShapeError(f"empty domain {self.domain}")
        object.__setattr__(self, "domain", (lo, hi))

    @classmethod
    def from_function(cls, f, domain, n_samples):
        lo, hi = domain
        x = lo + (hi - lo) / n_samples * np.arange(n_samples)
        return cls((lo, hi), f(x))

    @property
    def n_samples(self) -> int:
        return len(self.values)

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    @property
    def step(self) -> float:
        return self.length / self.n_samples

    @property
    def x(self) -> np.ndarray:
        return self.domain[0] + self.step * np.arange(self.n_samples)


@dataclass(frozen=True)
class CoefficientTree:
    """Scaling coefficients at level ``j0`` plus detail levels ``j0..J``.

    ``betas[i]`` holds the ``2**(j0+i)`` coefficients of level ``j0+i``;
    ``active[i]`` marks the coefficients whose wavelet footprint meets the
    support of the analysed signal.
    """

    j0: int
    alphas: np.ndarray
    betas: tuple
    domain: tuple = (0.0, 1.0)
    active: tuple = field(default=None)

    def __post_init__(self):
        alphas = np.array(self.alphas, dtype=float)
        alphas.setflags(write=False)
        betas = []
        for b in self.betas:
            b = np.array(b, dtype=float)
            b.setflags(write=False)
            betas.append(b)
        if self.active is None:
            active = tuple(np.ones(len(b), dtype=bool) for b in betas)
        else:
            active = tuple(np.array(a, dtype=bool) for a in self.active)
        for a in active:
            a.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", tuple(betas))
        object.__setattr__(self, "active", active)
        object.__setattr__(self, "domain", tuple(map(float, self.domain)))
        self.validate()

    def validate(self):
        if self.j0 < 0:
            raise StructureError("j0 must be >= 0")
        if len(self.alphas) != 2 ** self.j0:
            raise StructureError(f"expected {2 ** self.j0} alphas, got {len(self.alphas)}")
        if not self.betas:
            raise StructureError("tree has no detail levels")
        for i, b in enumerate(self.betas):
            if len(b) != 2 ** (self.j0 + i):
                raise StructureError(
                    f"level {self.j0 + i} has {len(b)} betas, expected {2 ** (self.j0 + i)}")
        if len(self.active) != len(self.betas) or any(
                len(a) != len(b) for a, b in zip(self.active, self.betas)):
            raise StructureError("active mask does not match beta levels")

    @property
    def J(self) -> int:
        return self.j0 + len(self.betas) - 1

    @property
    def levels(self) -> range:
        return range(self.j0, self.J + 1)

    @property
    def n_samples(self) -> int:
        return 2 ** (self.J + 1)

    @property
    def level_counts(self) -> list:
        """M_j: number of active betas on each level."""
        return [int(a.sum()) for a in self.active]

    @property
    def active_count(self) -> int:
        """m(j0, J): size of the active index set."""
        return int(sum(self.level_counts))

    def active_index_set(self) -> set:
        return {(j, int(k)) for j, a in zip(self.levels, self.active) for k in np.flatnonzero(a)}

    def beta(self, j: int, k: int) -> float:
        return float(self.betas[j - self.j0][k])

    def flat_betas(self) -> np.ndarray:
        return np.concatenate(self.betas)

    def flat_levels(self) -> np.ndarray:
        return np.concatenate([np.full(len(b), j) for j, b in zip(self.levels, self.betas)])

    def flat_positions(self) -> np.ndarray:
        return np.concatenate([np.arange(len(b)) for b in self.betas])

    def flat_active(self) -> np.ndarray:
        return np.concatenate(self.active)

    def replace(self, alphas=None, betas=None) -> "CoefficientTree":
        return CoefficientTree(
            self.j0,
            self.alphas if alphas is None else alphas,
            self.betas if betas is None else betas,
            self.domain,
            self.active,
        )

    def with_flat_betas(self, flat) -> "CoefficientTree":
        flat = np.asarray(flat, dtype=float)
        bounds = np.cumsum([0] + [len(b) for b in self.betas])
        return self.replace(betas=[flat[a:b] for a, b in zip(bounds[:-1], bounds[1:])])

    def scaled(self, c: float) -> "CoefficientTree":
        return self.replace(alphas=c * self.alphas, betas=[c * b for b in self.betas])

    def __add__(self, other: "CoefficientTree") -> "CoefficientTree":
        if other.j0 != self.j0 or other.J != self.J:
            raise StructureError("trees have different level ranges")
        return self.replace(alphas=self.alphas + other.alphas,
                            betas=[a + b for a, b in zip(self.betas, other.betas)])

    def __sub__(self, other: "CoefficientTree") -> "CoefficientTree":
        return self + other.scaled(-1.0)

    def to_rows(self):
        """(kind, j, k, value) rows: alphas first, then betas level by level."""
        rows = [("alpha", self.j0, k, float(a)) for k, a in enumerate(self.alphas)]
        for j, b in zip(self.levels, self.betas):
            rows.extend(("beta", j, k, float(v)) for k, v in enumerate(b))
        return rows


# --------------------------------------------------------------------------
# periodic filter bank


def _check_pow2(n: int):
    if n < 2 or n & (n - 1):
        raise ShapeError(f"grid length must be a power of two >= 2, got {n}")


def _taps(n: int, L: int) -> np.ndarray:
    return (2 * np.arange(n // 2)[:, None] + np.arange(L)[None, :]) % n


def fwt(x, filt: FilterPair, j0: int = 0):
    """Periodic orthonormal forward transform of a raw array.

    Returns ``(alphas, betas)`` with ``betas`` ordered coarse to fine.
    """
    a = np.asarray(x, dtype=float)
    n = len(a)
    _check_pow2(n)
    if not 0 <= j0 < n.bit_length() - 1:
        raise ParameterError(f"j0={j0} needs a grid of at least {2 ** (j0 + 1)} samples")
    h, g = filt.low_pass, filt.high_pass
    details = []
    while len(a) > 2 ** j0:
        idx = _taps(len(a), len(h))
        windows = a[idx]
        details.append(windows @ g)
        a = windows @ h
    return a, details[::-1]


def ifwt(alphas, betas, filt: FilterPair) -> np.ndarray:
    """Inverse of :func:`fwt`."""
    a = np.asarray(alphas, dtype=float)
    h, g = filt.low_pass, filt.high_pass
    for d in betas:
        d = np.asarray(d, dtype=float)
        if len(d) != len(a):
            raise StructureError("detail level length does not match current approximation")
        n = 2 * len(a)
        idx = _taps(n, len(h))
        contrib = np.outer(a, h) + np.outer(d, g)
        a = np.bincount(idx.ravel(), weights=contrib.ravel(), minlength=n)
    return a


def _active_masks(values: np.ndarray, filt: FilterPair, j0: int):
    nz = np.flatnonzero(values)
    hull = np.zeros(len(values))
    if len(nz):
        hull[nz[0]:nz[-1] + 1] = 1.0
    absf = FilterPair(np.abs(filt.low_pass), np.abs(filt.high_pass), filt.vanishing_moments)
    _, footprint = fwt(hull, absf, j0)
    return tuple(f > 0 for f in footprint)


def no_wrap_j0(grid: SampleGrid, filt: FilterPair) -> int:
    """Smallest j0 at which no periodized basis function wraps onto the signal.

    A level-j function spans ``(L-1) * N / 2**j`` samples; it must fit into
    the run of zero samples that separates the signal from its periodic copy.
    Below that level the periodic transform is no longer the zero-extended one.
    """
    n = grid.n_samples
    _check_pow2(n)
    nz = np.flatnonzero(grid.values)
    gap = n - (nz[-1] - nz[0] + 1) + 1 if len(nz) else n
    span = (filt.support_length - 1) * n
    j0 = max(0, int(np.ceil(np.log2(span / gap))))
    if n < 2 ** (j0 + 1):
        raise BoundaryError(f"zero margin of {gap - 1} samples is too narrow for any detail level")
    return j0


def analyze(grid: SampleGrid, filt: FilterPair, j0: int = 0, check_support: bool = True) -> CoefficientTree:
    """Decompose samples into the telescopic coefficient tree.

    The finest scaling coefficients are the samples times ``sqrt(step)``, so
    the squared coefficient norm approximates the integral of ``f**2``.
    With ``check_support`` the first and last ``L`` samples must vanish.
    """
    values = grid.values
    n = len(values)
    _check_pow2(n)
    if j0 < 0 or n < 2 ** (j0 + 1):
        raise ShapeError(f"j0={j0} needs a grid of at least {2 ** (j0 + 1)} samples, got {n}")
    L = filt.support_length
    if check_support:
        if n <= 2 * L:
            raise BoundaryError(f"grid of {n} samples leaves no room for a {L}-sample margin")
        if np.any(values[:L] != 0) or np.any(values[-L:] != 0):
            raise BoundaryError(
                f"signal support reaches the {L}-sample zero margin at the grid boundary")
    alphas, betas = fwt(values * np.sqrt(grid.step), filt, j0)
    return CoefficientTree(j0, alphas, betas, grid.domain, _active_masks(values, filt, j0))


def synthesize(tree: CoefficientTree, filt: FilterPair) -> SampleGrid:
    """Rebuild grid samples from a coefficient tree."""
    tree.validate()
    raw = ifwt(tree.alphas, tree.betas, filt)
    step = (tree.domain[1] - tree.domain[0]) / len(raw)
    return SampleGrid(tree.domain, raw / np.sqrt(step))


def transform_matrix(n: int, filt: FilterPair, j0: int = 0) -> np.ndarray:
    """Dense matrix of the raw forward transform, one column per unit impulse."""
    cols = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        a, b = fwt(e, filt, j0)
        cols.append(np.concatenate([a] + b))
    return np.array(cols).T
