"""Exponential integral, semi-infinite adaptive quadrature, and Monte Carlo
expectations over ordered nearest-PB distances."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .pointprocess import sample_ordered_nearest
from .seeding import seed_sequence

EULER_GAMMA = 0.57721566490153286060651209008240243

# Positive root of Ei split into hi + lo parts.
_EI_ROOT_HI = 0.3725074107813666
_EI_ROOT_LO = 1.3140183414386028e-17
_ROOT_RADIUS = 0.1


def _root_taylor_coeffs(n_terms=40):
    # e^z/z around the root r: (e^r/r) * e^h * sum (-h/r)^m, integrated term by term.
    r = _EI_ROOT_HI
    scale = math.exp(r) / r
    coeffs = []
    for j in range(n_terms):
        s = sum((-1.0 / r) ** m / math.factorial(j - m) for m in range(j + 1))
        coeffs.append(scale * s / (j + 1))
    return coeffs


_ROOT_COEFFS = _root_taylor_coeffs()


def _ei_series(z: float) -> float:
    # gamma + ln|z| + sum z^k/(k k!); used where terms do not cancel badly
    term = 1.0
    total = 0.0
    k = 0
    while True:
        k += 1
        term *= z / k
        contrib = term / k
        total += contrib
        if abs(contrib) <= 1e-17 * abs(total):
            break
    return EULER_GAMMA + math.log(abs(z)) + total


def _e1_continued_fraction(x: float) -> float:
    # modified Lentz on E1(x) = e^-x / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * math.exp(-x)
    raise NumericalError(f"E1 continued fraction did not converge at x={x}", h * math.exp(-x))


def _ei_asymptotic(z: float) -> float:
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        nxt = term * k / z
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17:
            break
        term = nxt
        total += term
    return math.exp(z) / z * total


def _ei_scalar(z: float) -> float:
    if z == 0:
        raise ValueError("Ei has a logarithmic singularity at 0")
    if not math.isfinite(z):
        if math.isnan(z):
            return math.nan
        return math.inf if z > 0 else -0.0
    if z < 0:
        x = -z
        if x <= 1.0:
            return _ei_series(z)
        if x > 745.0:
            return -0.0
        return -_e1_continued_fraction(x)
    h = (z - _EI_ROOT_HI) - _EI_ROOT_LO
    if abs(h) < _ROOT_RADIUS:
        # Horner on sum c_j h^(j+1)
        acc = 0.0
        for c in reversed(_ROOT_COEFFS):
            acc = acc * h + c
        return acc * h
    if z <= 40.0:
        return _ei_series(z)
    return _ei_asymptotic(z)


def expint_ei(z):
    """Exponential integral Ei(z), principal value for z > 0.

    For negative arguments this is ``-E1(-z)``, so ``Ei(-x) < 0`` for x > 0.
    Accepts scalars or arrays.
    """
    if np.ndim(z) == 0:
        return _ei_scalar(float(z))
    arr = np.asarray(z, dtype=float)
    return np.vectorize(_ei_scalar, otypes=[float])(arr)


# --- adaptive Gauss-Kronrod (7, 15) ---------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
_KWEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate((_WG[:-1], _WG[::-1]))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def _gk15(g, a, b):
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    fv = g(center + half * _NODES)
    kron = half * float(_KWEIGHTS @ fv)
    gauss = half * float(_GWEIGHTS @ fv)
    resabs = abs(half) * float(_KWEIGHTS @ np.abs(fv))
    resasc = abs(half) * float(_KWEIGHTS @ np.abs(fv - kron / (2 * half)))
    err = abs(kron - gauss)
    if resasc != 0 and err != 0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    eps = np.finfo(float).eps
    if resabs > np.finfo(float).tiny / (50 * eps):
        err = max(err, 50 * eps * resabs)
    return kron, err


def _as_vectorized(f):
    def g(x):
        try:
            y = np.asarray(f(x), dtype=float)
            if y.shape == np.shape(x):
                return y
        except (TypeError, ValueError):
            pass
        return np.array([float(f(xi)) for xi in x])

    return g


def integrate_semi_infinite(f, lower: float = 0.0, tol: float = 1e-8, max_evaluations: int = 30000) -> QuadratureResult:
    """Integrate ``f`` over ``[lower, inf)``.

    The interval is mapped onto ``[0, 1)`` with ``x = lower + t / (1 - t)`` and
    integrated by globally adaptive Gauss-Kronrod (7, 15) bisection until the
    summed error estimate is at most ``tol``. ``f`` should accept a numpy
    array; scalar-only callables are evaluated element by element.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    fv = _as_vectorized(f)

    def g(t):
        u = 1.0 - t
        return fv(lower + t / u) / (u * u)

    value, err = _gk15(g, 0.0, 1.0)
    evaluations = 15
    heap = [(-err, 0.0, 1.0, value)]
    total_err = err
    while total_err > tol:
        if evaluations + 30 > max_evaluations:
            raise NumericalError(
                f"quadrature did not reach tol={tol:g} within {max_evaluations} evaluations "
                f"(estimate {value!r}, error {total_err:.3g})",
                QuadratureResult(value, total_err, evaluations),
            )
        neg_err, a, b, v = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        v1, e1 = _gk15(g, a, mid)
        v2, e2 = _gk15(g, mid, b)
        evaluations += 30
        value += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, a, mid, v1))
        heapq.heappush(heap, (-e2, mid, b, v2))
    # re-sum to shed accumulated update roundoff
    value = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return QuadratureResult(value, total_err, evaluations)


# --- ordered-distance expectations ------------------------------------------

@dataclass(frozen=True)
class ExpectationEstimate:
    value: float
    std_error: float
    samples: int


_CHUNK = 1 << 15


def ordered_distance_expectation(density, Np, alpha_f, exponent_outer, samples=100_000, seed=None) -> ExpectationEstimate:
    """Monte Carlo estimate of ``E[(sum_k min(1, x_k**-alpha_f)) ** exponent_outer]``.

    ``x_1 < ... < x_Np`` are the ordered nearest-PB distances. Samples are
    drawn in fixed-size chunks, each with its own child seed, so the result
    depends only on (parameters, samples, seed).
    """
    if Np < 1:
        raise ValueError("Np must be >= 1")
    if not alpha_f > 2:
        raise ValueError("alpha_f must exceed 2")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n_chunks = -(-samples // _CHUNK)
    children = seed_sequence(seed).spawn(n_chunks)
    s1 = s2 = 0.0
    remaining = samples
    for child in children:
        n = min(_CHUNK, remaining)
        remaining -= n
        x = sample_ordered_nearest(density, Np, np.random.default_rng(child), size=n)
        v = np.sum(np.minimum(1.0, x ** (-alpha_f)), axis=1) ** exponent_outer
        s1 += float(np.sum(v))
        s2 += float(np.sum(v * v))
    mean = s1 / samples
    if samples > 1:
        var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
        se = math.sqrt(var / samples)
    else:
        se = 0.0
    return ExpectationEstimate(mean, se, samples)
