"""Signals on Z_N, the DFT convention, multipliers acting on signals, norms.

Conventions used everywhere in the package:

* spatial positions ``x = 0, ..., N-1``; ``N`` is a power of two;
* frequencies are *centered*, ``k = -ceil(N/2), ..., floor(N/2) - 1``, and
  every frequency-indexed array is stored in increasing ``k``;
* ``F[k] = sum_x f(x) exp(-2 pi i k x / N)`` and the ``1/N`` sits in the
  inverse, so ``f(x) = (1/N) sum_k F[k] exp(2 pi i k x / N)``;
* L^p norms use the normalized counting measure ``(1/N) sum_x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import SizeMismatchError

__all__ = [
    "GridFunction", "Spectrum", "FreqInterval", "IntervalCollection",
    "ExponentConfig", "frequencies", "freq_offset", "dft", "inverse_dft",
    "apply_multiplier", "partial_sum", "lp_norm", "conjugate_exponent",
    "mode_components",
]


def _check_size(n):
    n = int(n)
    if n < 2 or n & (n - 1):
        raise ValueError(f"grid size must be a power of two >= 2, got {n}")
    return n


def freq_offset(n):
    """Position of frequency 0 in a centered array, i.e. ``ceil(n/2)``."""
    return (n + 1) // 2


def frequencies(n):
    """Centered integer frequencies for a grid of size ``n``, increasing."""
    return np.arange(n) - freq_offset(n)


def _finite_1d(values, dtype, what):
    arr = np.array(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex signal on Z_N, indexed by position."""

    values: np.ndarray

    def __post_init__(self):
        arr = _finite_1d(self.values, complex, "values")
        _check_size(arr.size)
        object.__setattr__(self, "values", arr)

    @property
    def size(self):
        return self.values.size

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class Spectrum:
    """DFT coefficients in centered, increasing-frequency order."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _finite_1d(self.coeffs, complex, "coeffs")
        _check_size(arr.size)
        object.__setattr__(self, "coeffs", arr)

    @property
    def size(self):
        return self.coeffs.size

    def __len__(self):
        return self.coeffs.size


@dataclass(frozen=True, order=True)
class FreqInterval:
    """Closed interval ``[lo, hi]`` of centered frequencies."""

    lo: int
    hi: int

    def __post_init__(self):
        object.__setattr__(self, "lo", int(self.lo))
        object.__setattr__(self, "hi", int(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def check_range(self, n):
        lo, hi = -freq_offset(n), n - freq_offset(n) - 1
        if self.lo < lo or self.hi > hi:
            raise ValueError(
                f"interval [{self.lo}, {self.hi}] outside frequency range "
                f"[{lo}, {hi}] for N={n}")

    def positions(self, n):
        """Slice of array positions covered by the interval."""
        self.check_range(n)
        off = freq_offset(n)
        return slice(self.lo + off, self.hi + off + 1)

    def indicator(self, n):
        ind = np.zeros(n)
        ind[self.positions(n)] = 1.0
        return ind

    @classmethod
    def full(cls, n):
        return cls(-freq_offset(n), n - freq_offset(n) - 1)

    def __str__(self):
        return f"{self.lo}:{self.hi}"


class IntervalCollection(tuple):
    """Pairwise disjoint frequency intervals sorted by ``lo``.

    Adjacent intervals are allowed; overlapping ones are rejected.
    """

    def __new__(cls, items: Iterable = ()):
        ivs = sorted(i if isinstance(i, FreqInterval) else FreqInterval(*i)
                     for i in items)
        for a, b in zip(ivs, ivs[1:]):
            if b.lo <= a.hi:
                raise ValueError(f"intervals {a} and {b} overlap")
        return super().__new__(cls, ivs)

    def check_range(self, n):
        for iv in self:
            iv.check_range(n)

    def __str__(self):
        return ";".join(str(iv) for iv in self)

    @classmethod
    def parse(cls, text):
        """Inverse of ``str``: ``"lo:hi;lo:hi"``."""
        if not text:
            return cls()
        return cls(tuple(int(v) for v in part.split(":"))
                   for part in text.split(";"))


def conjugate_exponent(q):
    """Hölder conjugate ``q/(q-1)``; ``inf`` for ``q == 1``."""
    if q < 1:
        raise ValueError(f"exponent must be >= 1, got {q}")
    return math.inf if q == 1 else q / (q - 1)


@dataclass(frozen=True)
class ExponentConfig:
    """Admissible exponent triple: ``1 <= r < 2``, ``2 < s < r'``, ``p > max(r, s')``."""

    r: float
    p: float
    s: float

    def __post_init__(self):
        r, p, s = self.r, self.p, self.s
        if not 1 <= r < 2:
            raise ValueError(f"need 1 <= r < 2, got r={r}")
        if not 2 < s < self.r_conj:
            raise ValueError(f"need 2 < s < r'={self.r_conj}, got s={s}")
        if not p > max(r, self.s_conj):
            raise ValueError(
                f"need p > max(r, s')={max(r, self.s_conj)}, got p={p}")

    @property
    def r_conj(self):
        return conjugate_exponent(self.r)

    @property
    def s_conj(self):
        return conjugate_exponent(self.s)


def _values(f):
    if isinstance(f, GridFunction):
        return f.values
    return GridFunction(f).values


def _coeffs(F):
    if isinstance(F, Spectrum):
        return F.coeffs
    return Spectrum(F).coeffs


def _mult_values(m):
    vals = getattr(m, "values", m)
    arr = np.asarray(vals)
    if arr.ndim != 1:
        raise ValueError("multiplier must be one-dimensional")
    return arr


def dft(f) -> Spectrum:
    """Forward transform of ``f`` in centered order, via FFT."""
    v = _values(f)
    n = v.size
    return Spectrum(np.fft.fft(v)[frequencies(n) % n])


def inverse_dft(F) -> GridFunction:
    """Inverse of :func:`dft`, with the ``1/N`` factor."""
    c = _coeffs(F)
    n = c.size
    natural = np.empty(n, dtype=complex)
    natural[frequencies(n) % n] = c
    return GridFunction(np.fft.ifft(natural))


def apply_multiplier(f, m) -> GridFunction:
    """``(m f^)check``: multiply the spectrum of ``f`` by ``m`` and invert."""
    v = _values(f)
    mv = _mult_values(m)
    if mv.size != v.size:
        raise SizeMismatchError(
            f"multiplier has size {mv.size}, signal has size {v.size}")
    return inverse_dft(mv * dft(v).coeffs)


def partial_sum(f, interval: FreqInterval) -> GridFunction:
    """Frequency restriction of ``f`` to ``interval``."""
    v = _values(f)
    return apply_multiplier(v, interval.indicator(v.size))


def mode_components(f):
    """Array ``c[k, x] = F[k] exp(2 pi i k x / N) / N`` (centered ``k``).

    Summing over any set of rows gives the corresponding frequency
    restriction of ``f``; summing all rows gives ``f``.
    """
    v = _values(f)
    n = v.size
    k = frequencies(n)
    x = np.arange(n)
    phase = np.exp(2j * np.pi * np.outer(k, x) / n)
    return dft(v).coeffs[:, None] * phase / n


def lp_norm(f, p) -> float:
    """``((1/N) sum_x |f(x)|^p)^(1/p)``, or ``max |f|`` for ``p = inf``."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(np.asarray(getattr(f, "values", f)))
    if p == math.inf:
        return float(a.max())
    scale = a.max()
    if scale == 0:
        return 0.0
    return float(scale * np.mean((a / scale) ** p) ** (1.0 / p))
