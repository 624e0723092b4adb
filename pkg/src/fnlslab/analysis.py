"""Singularity tracing and blow-up rate fitting.

A complex-plane singularity at distance delta from the real axis shows up
as |u_hat(k)| ~ k^-(mu+1) * exp(-delta*k) for large k. Fitting the high
wavenumbers therefore tracks the approach of a singularity to the real
axis; once delta drops below the minimal resolved distance 2*pi*D/N the
computation stops being reliable. Blow-up times and rates are recovered
afterwards by fitting diverging norms against (t* - t) power laws on a
log scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .grids import Grid, SpectralField

MACHINE_EPS = 2.2e-16
#: spectrum-fit window: modes above FLOOR_FACTOR times the rounding floor
FLOOR_FACTOR = 100.0
#: lower window edge as a fraction of the resolved support
SUPPORT_PERCENTILE = 0.6
MIN_WINDOW_MODES = 16

MODELS = ("pure_log", "log_log")
#: named fit windows: number of trailing recorded samples
WINDOW_PRESETS = {"last_1000": 1000, "last_100": 100, "last_10": 10}


@dataclass
class SpectrumFit:
    """Least-squares fit of ln|u_hat| against (1, ln k, k) at high k."""

    delta: float
    mu: float
    log_amplitude: float
    k_window: tuple[float, float]
    residual: float
    reliable: bool
    n_modes: int


@dataclass
class BlowupFit:
    """Fit of a logged norm series to kappa1 * g(t* - t) + kappa2."""

    t_star: float
    kappa1: float
    kappa2: float
    delta2: float
    model: str
    fit_window: tuple[int, int]
    n_used: int
    converged: bool


@dataclass
class ModelComparison:
    pure_log: BlowupFit
    log_log: BlowupFit

    @property
    def better(self) -> str:
        return "pure_log" if self.pure_log.delta2 <= self.log_log.delta2 else "log_log"


def min_resolved_distance(grid: Grid) -> float:
    """Smallest singularity distance distinguishable from zero: 2*pi*D/N."""
    return 2.0 * np.pi * grid.half_width / grid.n_modes


def singularity_stop_check(fit: SpectrumFit, m: float) -> bool:
    """True once the fitted singularity is strictly closer than m."""
    return bool(fit.delta < m)


def predicted_exponents(s: float, p: float) -> tuple[float, float]:
    """Power-law exponents of |grad psi|_2^2 and |psi|_inf in (t* - t)."""
    if s <= 0 or p <= 0:
        raise ValueError("s and p must be positive")
    return (-(1.0 / p + 1.0 / (2.0 * s)), -1.0 / (2.0 * p))


def fit_spectrum_window(grid: Grid, coefficients: np.ndarray) -> SpectrumFit:
    """Fit the positive-k tail of a spectrum with the default window policy."""
    n = grid.n_modes
    amp = np.abs(coefficients[1 : n // 2])
    kpos = np.arange(1, n // 2) / grid.half_width
    peak = amp.max() if amp.size else 0.0
    if peak <= 0.0:
        return SpectrumFit(np.nan, np.nan, np.nan, (np.nan, np.nan), np.nan, False, 0)
    above = np.nonzero(amp > FLOOR_FACTOR * MACHINE_EPS * peak)[0]
    m_last = int(above[-1]) if above.size else amp.size - 1
    m_lo = max(0, int(np.ceil(SUPPORT_PERCENTILE * (m_last + 1))) - 1)
    return _fit_log_spectrum(kpos[m_lo : m_last + 1], amp[m_lo : m_last + 1])


def fit_fourier_asymptotics(
    uhat: SpectralField, k_window: tuple[float, float] | None = None
) -> SpectrumFit:
    """Estimate (delta, mu) from the decay of the Fourier coefficients.

    With no explicit window the fit runs from the 60th percentile of the
    resolved support up to the last mode above 100x the rounding floor.
    Fewer than 16 usable modes marks the result unreliable (delta is still
    reported whenever at least three modes allow a fit).
    """
    if k_window is None:
        return fit_spectrum_window(uhat.grid, uhat.coefficients)
    n = uhat.grid.n_modes
    amp = np.abs(uhat.coefficients[1 : n // 2])
    kpos = np.arange(1, n // 2) / uhat.grid.half_width
    sel = (kpos >= k_window[0]) & (kpos <= k_window[1])
    return _fit_log_spectrum(kpos[sel], amp[sel])


def _fit_log_spectrum(k: np.ndarray, amp: np.ndarray) -> SpectrumFit:
    usable = amp > 0.0
    k, amp = k[usable], amp[usable]
    n_used = k.size
    if n_used < 3:
        return SpectrumFit(
            np.nan, np.nan, np.nan,
            (k[0], k[-1]) if n_used else (np.nan, np.nan), np.nan, False, n_used,
        )
    design = np.column_stack([np.ones(n_used), np.log(k), k])
    y = np.log(amp)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return SpectrumFit(
        delta=float(-coef[2]),
        mu=float(-coef[1] - 1.0),
        log_amplitude=float(coef[0]),
        k_window=(float(k[0]), float(k[-1])),
        residual=rms,
        reliable=n_used >= MIN_WINDOW_MODES,
        n_modes=n_used,
    )


def _resolve_window(n_samples: int, window) -> tuple[int, int]:
    if window is None:
        return 0, n_samples
    if isinstance(window, str):
        if window not in WINDOW_PRESETS:
            raise ValueError(
                f"unknown window preset {window!r}; options: {sorted(WINDOW_PRESETS)}"
            )
        window = WINDOW_PRESETS[window]
    if isinstance(window, int):
        return max(0, n_samples - window), n_samples
    lo, hi = window
    if not 0 <= lo < hi <= n_samples:
        raise ValueError(f"window {window} outside series of length {n_samples}")
    return int(lo), int(hi)


def _loglog_regressor(tau: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """g = ln(tau) - ln ln|ln(tau)|, defined only where |ln(tau)| > 1."""
    lt = np.log(tau)
    ok = np.abs(lt) > 1.0
    g = np.empty_like(lt)
    g[ok] = lt[ok] - np.log(np.log(np.abs(lt[ok])))
    return g, ok


def fit_blowup_rate(
    times: np.ndarray,
    log_values: np.ndarray,
    model: str = "pure_log",
    window=None,
) -> BlowupFit:
    """Fit y = kappa1 * g(t* - t) + kappa2 over a trailing window.

    ``log_values`` is the natural log of the diverging norm. The blow-up
    time is found by a Nelder-Mead search (over ln(t* - t_last), which
    keeps t* beyond the window) with (kappa1, kappa2) solved by linear
    least squares at each candidate; delta2 is the l2 norm of the final
    misfit.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    times = np.asarray(times, dtype=float)
    log_values = np.asarray(log_values, dtype=float)
    if times.ndim != 1 or times.shape != log_values.shape:
        raise ValueError("times and log_values must be matching 1-D arrays")
    if np.any(np.diff(times) <= 0):
        raise ValueError("sample times must be strictly increasing")
    lo, hi = _resolve_window(times.size, window)
    t = times[lo:hi]
    y = log_values[lo:hi]
    if t.size < 3:
        raise ValueError("need at least three samples in the fit window")
    t_last = t[-1]
    spacing = float(np.median(np.diff(times)))

    def solve_at(z: float):
        gap = np.exp(z)
        if gap == 0.0 or not np.isfinite(gap):
            return None
        tau = (t_last - t) + gap
        if model == "pure_log":
            g, ok = np.log(tau), np.ones(tau.size, dtype=bool)
        else:
            g, ok = _loglog_regressor(tau)
        n_ok = int(ok.sum())
        if n_ok < 3 or not np.all(np.isfinite(g[ok])):
            return None
        design = np.column_stack([g[ok], np.ones(n_ok)])
        coef, *_ = np.linalg.lstsq(design, y[ok], rcond=None)
        r = y[ok] - design @ coef
        return float(r @ r), coef, n_ok

    def objective(zvec):
        out = solve_at(zvec[0])
        if out is None:
            return 1e100
        return out[0]

    z0 = np.log(5.0 * spacing)
    result = minimize(
        objective,
        [z0],
        method="Nelder-Mead",
        options=dict(xatol=1e-12, fatol=np.inf, maxfev=2000),
    )
    out = solve_at(float(result.x[0]))
    if out is None:
        raise RuntimeError("blow-up fit failed: no usable samples at optimum")
    ssr, coef, n_ok = out
    return BlowupFit(
        t_star=float(t_last + np.exp(result.x[0])),
        kappa1=float(coef[0]),
        kappa2=float(coef[1]),
        delta2=float(np.sqrt(ssr)),
        model=model,
        fit_window=(lo, hi),
        n_used=n_ok,
        converged=bool(result.success),
    )


def compare_models(times, log_values, window=None) -> ModelComparison:
    """Fit both rate models on the same window and report them side by side."""
    return ModelComparison(
        pure_log=fit_blowup_rate(times, log_values, "pure_log", window),
        log_log=fit_blowup_rate(times, log_values, "log_log", window),
    )


def scaling_factor_series(
    gradient_norms: np.ndarray, s: float, p: float, d: int = 1
) -> np.ndarray:
    """Rescaling factor L(t) inferred from the gradient norm.

    L(t) = (|grad psi(0)|_2 / |grad psi(t)|_2)^(1/(1 - d/2 + s/p)),
    normalized to L(0) = 1; near blow-up L(t) is expected to follow
    (t* - t)^(1/(2s)).
    """
    g = np.asarray(gradient_norms, dtype=float)
    if np.any(g <= 0) or not np.all(np.isfinite(g)):
        raise ValueError("gradient norms must be positive and finite")
    expo = 1.0 / (1.0 - d / 2.0 + s / p)
    return (g[0] / g) ** expo
