"""Decoherence function k(t) of the ohmic-bath two-qubit noise model.

Three evaluators are exposed on purpose:

* ``re_k_approx`` -- the quadratic short-time approximation. This is the
  canonical form behind all figure data and parameter fits.
* ``k_printed`` -- the closed sine-integral expression, evaluated exactly as
  written (with the one reading of the imaginary bracket under which
  Im k(0) = 0 holds).
* ``k_quadrature`` -- a from-scratch double quadrature of the bath
  correlator. It is the independent oracle for the other two and quantifies
  the internal inconsistencies of the closed expression (stray cutoff
  factors, 2/pi vs pi/2 prefactor) instead of hiding them.

Time enters only through the dimensionless ratio u = t / tau_s and the
cutoff only through wc' = omega_c * tau_s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .linalg import integrate

__all__ = [
    "KernelParams",
    "si_shifted",
    "si_standard",
    "re_k_approx",
    "k_printed",
    "k_quadrature",
]


@dataclass(frozen=True)
class KernelParams:
    """Bath/coupling parameters: gamma0 and delta0 lump the microscopic
    constants, wc_ts is the cutoff times the switching time."""

    gamma0: float
    delta0: float
    wc_ts: float

    def __post_init__(self):
        for name in ("gamma0", "delta0", "wc_ts"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
        if self.gamma0 < 0 or self.delta0 < 0:
            raise ValueError("gamma0 and delta0 must be nonnegative")
        if self.wc_ts <= 0:
            raise ValueError("wc_ts must be positive")

    @property
    def coupling(self) -> float:
        """gamma0 * wc_ts, the strength entering the quadratic approximation."""
        return self.gamma0 * self.wc_ts


_SI_SWITCH = 4.0


def _si_taylor(x: float) -> float:
    # sum_{n>=0} (-1)^n x^(2n+1) / ((2n+1) (2n+1)!)
    term = x
    total = x
    n = 0
    while abs(term) > 1e-18:
        n += 1
        term *= -x * x / ((2 * n) * (2 * n + 1))
        total += term / (2 * n + 1)
        # 'term' tracks x^(2n+1)/(2n+1)!; the 1/(2n+1) factor applies per sum
    return total


def _si_auxiliary(x: float) -> float:
    # Si(x) = pi/2 - f(x) cos x - g(x) sin x with the Laplace-type auxiliary
    # integrals f(x) = int_0^inf e^(-xt)/(1+t^2) dt and
    # g(x) = int_0^inf t e^(-xt)/(1+t^2) dt, evaluated by quadrature. Unlike
    # the divergent asymptotic series these stay accurate at moderate x.
    upper = 42.0 / x  # e^(-42) ~ 6e-19: beyond double precision
    f = integrate(lambda t: math.exp(-x * t) / (1.0 + t * t), 0.0, upper, tol=1e-13)
    g = integrate(
        lambda t: t * math.exp(-x * t) / (1.0 + t * t), 0.0, upper, tol=1e-13
    )
    return 0.5 * math.pi - f * math.cos(x) - g * math.sin(x)


def si_standard(x: float) -> float:
    """The standard sine integral: integral of sin(t)/t from 0 to x."""
    if x < 0:
        raise ValueError("si_standard requires x >= 0")
    if x < _SI_SWITCH:
        return _si_taylor(x)
    return _si_auxiliary(x)


def si_shifted(x: float) -> float:
    """Sine integral shifted by -pi/2, the convention used by the kernel:
    tends to -pi/2 at 0 and to 0 at infinity."""
    return si_standard(x) - 0.5 * math.pi


def re_k_approx(coupling: float, u: float) -> float:
    """Quadratic approximation of Re k at normalized time u, for the lumped
    coupling strength gamma0 * wc_ts. Exactly linear in the coupling."""
    if coupling < 0:
        raise ValueError("coupling must be nonnegative")
    if u < 0:
        raise ValueError("u must be nonnegative")
    return (2.0 / math.pi) * coupling * (0.5 * math.pi * u + 0.5 * u * u)


def k_printed(p: KernelParams, u: float, tol: float = 1e-10) -> complex:
    """The closed sine-integral form of k at u = t / tau_s.

    Real part: (2/pi) * gamma0 * [ (pi/2) wc' u + int_0^u Si_shifted(wc' s) ds ].
    Imaginary part: delta0 * [ u - Si_standard(wc' u) / wc' ], the reading of
    the printed bracket under which Im k(0) = 0.
    """
    if u < 0:
        raise ValueError("u must be nonnegative")
    wc = p.wc_ts
    if u == 0.0:
        return 0.0 + 0.0j
    re = 0.0
    if p.gamma0 != 0.0:
        shifted_term = integrate(lambda s: si_shifted(wc * s), 0.0, u, tol=tol)
        re = (2.0 / math.pi) * p.gamma0 * (0.5 * math.pi * wc * u + shifted_term)
    im = 0.0
    if p.delta0 != 0.0:
        im = p.delta0 * (u - si_standard(wc * u) / wc)
    return complex(re, im)


def _corr_re(gamma0: float, wc: float, sigma: float) -> float:
    # (pi gamma0 / 2) sin(wc sigma) / sigma, with the removable singularity
    # at sigma = 0 resolved by series.
    a = wc * sigma
    if abs(a) < 1e-4:
        val = wc * (1.0 - a * a / 6.0 + a**4 / 120.0)
    else:
        val = math.sin(a) / sigma
    return 0.5 * math.pi * gamma0 * val


def _corr_im(delta0: float, wc: float, sigma: float) -> float:
    # -delta0 [ sin(wc sigma)/(wc sigma^2) - cos(wc sigma)/sigma ]
    a = wc * sigma
    if abs(a) < 1e-3:
        val = wc * a / 3.0 - wc * a**3 / 30.0
    else:
        val = math.sin(a) / (wc * sigma * sigma) - math.cos(a) / sigma
    return -delta0 * val


def k_quadrature(p: KernelParams, u: float, tol: float = 1e-10) -> complex:
    """Direct nested quadrature of the bath correlator in dimensionless time.

    Serves as the independent oracle for ``k_printed`` and ``re_k_approx``.
    """
    if u < 0:
        raise ValueError("u must be nonnegative")
    if u == 0.0:
        return 0.0 + 0.0j
    wc = p.wc_ts
    inner_tol = tol / 10.0

    re = 0.0
    if p.gamma0 != 0.0:
        re = integrate(
            lambda s: integrate(
                lambda sg: _corr_re(p.gamma0, wc, sg), 0.0, s, tol=inner_tol
            ),
            0.0,
            u,
            tol=tol,
        )
    im = 0.0
    if p.delta0 != 0.0:
        im = integrate(
            lambda s: integrate(
                lambda sg: _corr_im(p.delta0, wc, sg), 0.0, s, tol=inner_tol
            ),
            0.0,
            u,
            tol=tol,
        )
    return complex(re, im)
