"""SNR statistics of a two-hop amplify-and-forward link with a direct path.

Model: source-destination, source-relay and relay-destination channel
powers are independent exponentials with rates lambda_sd, lambda_sr,
lambda_rd (unit-mean fading corresponds to rate 1).  With a variable-gain
relay at transmit SNR gamma, the relayed path contributes the equivalent
power

    S = X * Y / (X + Y + 1/gamma),   X ~ Exp(lambda_sr), Y ~ Exp(lambda_rd),

and maximum-ratio combining adds the direct-path power D ~ Exp(lambda_sd),
so the total receive SNR is gamma * (D + S).

Closed forms implemented here:

* exact CDF/PDF of S (srd_cdf / srd_pdf), valid at any gamma;
* a high-SNR series CDF/PDF of D + S (combined_cdf / combined_pdf) built
  from the truncated Bessel-K series, in the exponential-polynomial form

      F(x) = 1 - A exp(-lambda_sd x) + sum_{q,c} B[q,c] x^c exp(-lambda_srd x);

* the exact convolution CDF of D + S by quadrature (combined_cdf_exact),
  used to audit the high-SNR form;
* the classical min(X, Y) upper-bound baseline (minbound_cdf/minbound_pdf),
  a hypoexponential Exp(lambda_sd) + Exp(lambda_sr + lambda_rd).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import bessel_series, reference
from .reference import DEFAULT_SPEC, QuadratureSpec

__all__ = [
    "ChannelParams",
    "DerivedParams",
    "SeriesCdfCoeffs",
    "DegenerateParameterError",
    "srd_cdf",
    "srd_pdf",
    "combined_cdf_coeffs",
    "combined_cdf",
    "combined_pdf",
    "combined_cdf_exact",
    "minbound_cdf",
    "minbound_pdf",
]

# Excursions of the series CDF beyond [0,1] larger than this are reported
# as truncation artifacts before clamping.
EXCURSION_TOL = 1e-6

# Relative spacing of lambda_srd and lambda_sd below which the series
# coefficients hit their removable singularity.
DEGENERATE_REL_TOL = 1e-9


class DegenerateParameterError(RuntimeError):
    """Parameters sit on a removable singularity of the closed form."""


@dataclass(frozen=True)
class ChannelParams:
    """Transmit SNR (linear) and the three exponential fading rates."""

    gamma: float
    lambda_sd: float
    lambda_sr: float
    lambda_rd: float

    def __post_init__(self):
        for name in ("gamma", "lambda_sd", "lambda_sr", "lambda_rd"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")

    def derived(self) -> "DerivedParams":
        lam_p = self.lambda_sr * self.lambda_rd
        lam_s = self.lambda_sr + self.lambda_rd
        return DerivedParams(
            lambda_p=lam_p,
            lambda_s=lam_s,
            lambda_srd=lam_s + 2.0 * math.sqrt(lam_p),
        )


@dataclass(frozen=True)
class DerivedParams:
    """Rate combinations that recur in every closed form."""

    lambda_p: float  # lambda_sr * lambda_rd
    lambda_s: float  # lambda_sr + lambda_rd
    lambda_srd: float  # (sqrt(lambda_sr) + sqrt(lambda_rd))**2


def _bessel_backend(backend: str, depth: int, spec: QuadratureSpec):
    if backend == "reference":
        return lambda nu, z: reference.bessel_k(nu, z, spec)
    if backend == "series":
        if depth < 1:
            raise ValueError("series backend needs depth >= 1")
        return lambda nu, z: bessel_series.evaluate(nu, depth, z).value
    raise ValueError(f"unknown bessel backend {backend!r}")


def srd_cdf(
    params: ChannelParams,
    x: float,
    backend: str = "reference",
    depth: int = 10,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Exact CDF of the relayed-path equivalent power S at x >= 0.

    F(x) = 1 - 2 zeta exp(-lambda_s x) K_1(2 zeta) with
    zeta = sqrt(lambda_p x (x + 1/gamma)).  The x -> 0 limit is 0 because
    z K_1(z) -> 1.  K_1 comes from the quadrature oracle by default; the
    truncated series can be selected for speed.
    """
    x = float(x)
    if x < 0.0:
        raise ValueError(f"power must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    der = params.derived()
    zeta = math.sqrt(der.lambda_p * x * (x + 1.0 / params.gamma))
    z = 2.0 * zeta
    if z < 1e-8:
        # z*K_1(z) = 1 + O(z^2 log z); below double resolution of the product
        tail = math.exp(-der.lambda_s * x)
    else:
        k1 = _bessel_backend(backend, depth, spec)(1.0, z)
        tail = z * math.exp(-der.lambda_s * x) * k1
    return min(max(1.0 - tail, 0.0), 1.0)


def srd_pdf(
    params: ChannelParams,
    x: float,
    backend: str = "reference",
    depth: int = 10,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Exact PDF of the relayed-path equivalent power S at x > 0."""
    x = float(x)
    if x <= 0.0:
        raise ValueError(f"density is defined for x > 0, got {x!r}")
    der = params.derived()
    inv_g = 1.0 / params.gamma
    zeta = math.sqrt(der.lambda_p * x * (x + inv_g))
    kf = _bessel_backend(backend, depth, spec)
    k0 = kf(0.0, 2.0 * zeta)
    k1 = kf(1.0, 2.0 * zeta)
    return 2.0 * math.exp(-der.lambda_s * x) * (
        der.lambda_p * (2.0 * x + inv_g) * k0 + der.lambda_s * zeta * k1
    )


@dataclass(frozen=True, eq=False)
class SeriesCdfCoeffs:
    """Coefficients of the high-SNR exponential-polynomial CDF of D + S.

    F(x) = 1 - A exp(-lambda_sd x) + sum_{q=0..k} sum_{c=0..q} B[q, c] x^c
    exp(-lambda_srd x).  Rows of B beyond c > q are zero.  The identity
    A - 1 = sum_q B[q, 0] pins F(0) = 0 regardless of truncation depth.
    """

    k: int
    A: float
    B: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.B, dtype=float)
        if B.shape != (self.k + 1, self.k + 1):
            raise ValueError(f"B must be ({self.k + 1}, {self.k + 1}), got {B.shape}")
        B.flags.writeable = False
        object.__setattr__(self, "B", B)

    def column_sums(self) -> np.ndarray:
        """sum_q B[q, c] for each power c; the polynomial actually evaluated."""
        return self.B.sum(axis=0)


def combined_cdf_coeffs(
    params: ChannelParams, table: bessel_series.CoefficientTable
) -> SeriesCdfCoeffs:
    """Build the high-SNR series CDF coefficients from a depth-k table.

    The table must be for order nu = 1 (the CDF of S involves K_1 only).
    Raises DegenerateParameterError when lambda_srd is within relative
    1e-9 of lambda_sd, where the coefficients blow up; perturbing
    lambda_sd by one part in 1e6 moves off the singularity.
    """
    if table.nu != 1.0:
        raise ValueError(f"coefficients need the order-1 table, got nu={table.nu}")
    der = params.derived()
    d = der.lambda_srd - params.lambda_sd
    if abs(d) < DEGENERATE_REL_TOL * der.lambda_srd:
        raise DegenerateParameterError(
            f"lambda_srd={der.lambda_srd!r} and lambda_sd={params.lambda_sd!r} "
            f"coincide to within {DEGENERATE_REL_TOL:g} relative; the series "
            f"CDF has a removable singularity there. Perturb lambda_sd by "
            f"~1e-6 relative to evaluate nearby."
        )
    k = table.k
    two_root_p = 2.0 * math.sqrt(der.lambda_p)
    B = np.zeros((k + 1, k + 1))
    a_sum = 0.0
    q_fact = 1.0
    for q in range(k + 1):
        if q > 0:
            q_fact *= q
        base = params.lambda_sd * two_root_p**q * q_fact * table.a[q]
        a_sum += base / d ** (q + 1)
        c_fact = 1.0
        for c in range(q + 1):
            if c > 0:
                c_fact *= c
            B[q, c] = base / (c_fact * d ** (q - c + 1))
    return SeriesCdfCoeffs(k=k, A=1.0 + a_sum, B=B)


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("power must be >= 0")
    return arr


def combined_cdf(params: ChannelParams, coeffs: SeriesCdfCoeffs, x, clamp: bool = True):
    """High-SNR series CDF of the combined power D + S, vectorized over x.

    Values are clamped to [0, 1]; pre-clamp excursions beyond 1e-6 raise a
    RuntimeWarning as a truncation diagnostic.  Pass clamp=False for the
    raw values.
    """
    arr = _as_float_array(x)
    cols = coeffs.column_sums()
    raw = (
        1.0
        - coeffs.A * np.exp(-params.lambda_sd * arr)
        + np.exp(-params.derived().lambda_srd * arr) * npoly.polyval(arr, cols)
    )
    excursion = max(float(np.max(raw - 1.0, initial=0.0)), float(np.max(-raw, initial=0.0)))
    if excursion > EXCURSION_TOL:
        warnings.warn(
            f"series CDF leaves [0,1] by {excursion:.3e}; deepen the "
            f"truncation or treat this parameter point with the exact form",
            RuntimeWarning,
            stacklevel=2,
        )
    out = np.clip(raw, 0.0, 1.0) if clamp else raw
    return out if np.ndim(x) else float(out)


def combined_pdf(params: ChannelParams, coeffs: SeriesCdfCoeffs, x):
    """High-SNR series PDF of D + S (derivative of combined_cdf), vectorized.

    Finite at x = 0: the linear-power terms of the polynomial part
    contribute a constant there.
    """
    arr = _as_float_array(x)
    lam_srd = params.derived().lambda_srd
    cols = coeffs.column_sums()
    dcols = cols[1:] * np.arange(1, coeffs.k + 1)  # derivative polynomial
    out = coeffs.A * params.lambda_sd * np.exp(-params.lambda_sd * arr) + np.exp(
        -lam_srd * arr
    ) * (npoly.polyval(arr, dcols) - lam_srd * npoly.polyval(arr, cols))
    return out if np.ndim(x) else float(out)


def combined_cdf_exact(
    params: ChannelParams,
    x: float,
    backend: str = "reference",
    depth: int = 10,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Exact CDF of D + S by convolving srd_cdf with the direct-path density.

    F(x) = integral_0^x lambda_sd exp(-lambda_sd v) F_S(x - v) dv.  No
    high-SNR assumption; this is the audit target for combined_cdf.
    """
    x = float(x)
    if x < 0.0:
        raise ValueError(f"power must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    lam = params.lambda_sd

    def integrand(v: float) -> float:
        return lam * math.exp(-lam * v) * srd_cdf(params, x - v, backend, depth, spec)

    val = reference.adaptive_quad(integrand, 0.0, x, spec)
    return min(max(val, 0.0), 1.0)


def _minbound_rates(params: ChannelParams) -> tuple[float, float]:
    return params.lambda_sd, params.lambda_sr + params.lambda_rd


def minbound_cdf(params: ChannelParams, x):
    """CDF of the classical min-of-hops bound: Exp(lambda_sd) + Exp(lambda_s).

    Hypoexponential closed form; the equal-rate case degenerates to an
    Erlang(2) and is handled explicitly.
    """
    arr = _as_float_array(x)
    a, b = _minbound_rates(params)
    if abs(a - b) <= 1e-9 * max(a, b):
        m = 0.5 * (a + b)
        out = 1.0 - np.exp(-m * arr) * (1.0 + m * arr)
    else:
        out = 1.0 - (b * np.exp(-a * arr) - a * np.exp(-b * arr)) / (b - a)
    out = np.clip(out, 0.0, 1.0)
    return out if np.ndim(x) else float(out)


def minbound_pdf(params: ChannelParams, x):
    """Density of the min-of-hops bound (derivative of minbound_cdf)."""
    arr = _as_float_array(x)
    a, b = _minbound_rates(params)
    if abs(a - b) <= 1e-9 * max(a, b):
        m = 0.5 * (a + b)
        out = m * m * arr * np.exp(-m * arr)
    else:
        out = (a * b / (b - a)) * (np.exp(-a * arr) - np.exp(-b * arr))
    return out if np.ndim(x) else float(out)
