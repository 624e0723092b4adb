"""Time integration of the fractional NLS in Fourier space.

Two fourth-order integrators are provided. The splitting scheme composes
exact linear and nonlinear subflows (Strang steps chained with the
triple-jump coefficients), is exactly mass conserving, and is the workhorse
for defocusing and smooth runs. The integrating-factor RK4 removes the
stiff diagonal part with an exact exponential and applies classical RK4 to
the transformed nonlinearity; it mirrors the composite Runge-Kutta codes
customarily used on focusing problems and, unlike the splitting scheme,
genuinely overflows when a blow-up outruns the grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

from . import analysis, diagnostics
from .grids import Grid, PhysicalField, SpectralField, fractional_symbol
from .model import ModelParams

INTEGRATORS = ("splitting4", "stiff_rk4")

#: triple-jump composition coefficient for the fourth-order splitting
_TJ = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_SPLIT_WEIGHTS = (_TJ, 1.0 - 2.0 * _TJ, _TJ)

#: spectral floor ratio beyond which a run is flagged as under-resolved
RESOLUTION_FLOOR_RATIO = 1e-6

STATUS_COMPLETED = "completed"
STATUS_SINGULARITY = "stopped_singularity"
STATUS_OVERFLOW = "stopped_overflow"
STATUS_ENERGY_DRIFT = "stopped_energy_drift"

SERIES_COLUMNS = (
    "t", "mass", "energy", "delta_E", "sup_norm",
    "grad_l2", "hdot_sigma", "delta_sing", "mu",
)
_SERIES_DTYPE = np.dtype([(name, np.float64) for name in SERIES_COLUMNS])


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid with n_steps steps up to t_end."""

    t_end: float
    n_steps: int

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")

    @property
    def dt(self) -> float:
        return self.t_end / self.n_steps


@dataclass
class MonitorConfig:
    """Diagnostics cadence and stopping rules for a run.

    The diagnostic series (and the singularity fit, when enabled) is
    recorded every ``series_stride`` steps. ``singularity_stop`` stops the
    run once the fitted singularity distance falls below the minimal
    resolved distance of the grid; ``spectrum_floor_check`` records the
    first time the relative spectral floor rises above
    ``RESOLUTION_FLOOR_RATIO``.
    """

    energy_drift_threshold: float = 1e-3
    singularity_stop: bool = False
    series_stride: int = 1
    snapshot_times: tuple[float, ...] = ()
    spectrum_floor_check: bool = False

    def __post_init__(self):
        if self.series_stride < 1:
            raise ValueError("series_stride must be >= 1")
        self.snapshot_times = tuple(float(t) for t in self.snapshot_times)


@dataclass
class RunResult:
    """Outcome of a time evolution: status, diagnostics, snapshots."""

    status: str
    stop_time: float
    series: np.ndarray
    snapshots: list[tuple[float, PhysicalField]]
    final_state: PhysicalField
    sigma_c: float
    resolution_warning_time: float | None = None
    energy_drift_absolute: bool = False

    @property
    def completed(self) -> bool:
        return self.status == STATUS_COMPLETED


def _nonlinear_phase_power(abs2: np.ndarray, p: float) -> np.ndarray:
    """|u|^(2p) from |u|^2, with fast paths for small integer powers."""
    if p == 1.0:
        return abs2
    if p == 2.0:
        return abs2 * abs2
    if p == 3.0:
        return abs2 * abs2 * abs2
    return abs2**p


def linear_flow(uhat: SpectralField, params: ModelParams, dt: float) -> SpectralField:
    """Exact flow of the dispersive part: phase rotation of each mode.

    Multiplies the coefficient at wavenumber k by
    exp(-i * eps^(2s-1) * |k|^(2s) * dt / 2); unitary for any dt.
    """
    phase = np.exp(
        -0.5j * params.eps ** (2.0 * params.s - 1.0)
        * fractional_symbol(uhat.grid, params.s) * dt
    )
    return SpectralField(uhat.grid, uhat.coefficients * phase)


def nonlinear_flow(u: PhysicalField, params: ModelParams, dt: float) -> PhysicalField:
    """Exact flow of the nonlinear part: pointwise phase rotation.

    |u_j| is invariant along this subflow, so
    u_j -> u_j * exp(-i * gamma * |u_j|^(2p) * dt / eps) is exact.
    """
    v = u.values
    abs2 = v.real * v.real + v.imag * v.imag
    phase = np.exp(
        (-1j * params.gamma * dt / params.eps)
        * _nonlinear_phase_power(abs2, params.p)
    )
    return PhysicalField(u.grid, v * phase)


class _SplittingStepper:
    """Fourth-order triple-jump composition of Strang splitting steps.

    State lives in spectral space; adjacent linear half-steps inside one
    full step are merged, costing three transform pairs per step.
    """

    def __init__(self, grid: Grid, params: ModelParams, dt: float):
        self.grid = grid
        self.params = params
        self.dt = dt
        sym = grid.abs_k ** (2.0 * params.s)
        lam = -0.5j * params.eps ** (2.0 * params.s - 1.0) * sym
        w = _SPLIT_WEIGHTS
        self._edge = np.exp(lam * (w[0] * dt / 2.0))
        self._mid = np.exp(lam * ((w[0] + w[1]) * dt / 2.0))
        self._nl_dts = tuple(wi * dt for wi in w)
        self._nl_scale = -1j * params.gamma / params.eps

    def _nonlinear(self, u: np.ndarray, dt: float) -> np.ndarray:
        abs2 = u.real * u.real + u.imag * u.imag
        return u * np.exp(
            (self._nl_scale * dt) * _nonlinear_phase_power(abs2, self.params.p)
        )

    def step(self, uhat: np.ndarray) -> np.ndarray:
        uhat = uhat * self._edge
        uhat = _fft.fft(self._nonlinear(_fft.ifft(uhat), self._nl_dts[0]))
        uhat *= self._mid
        uhat = _fft.fft(self._nonlinear(_fft.ifft(uhat), self._nl_dts[1]))
        uhat *= self._mid
        uhat = _fft.fft(self._nonlinear(_fft.ifft(uhat), self._nl_dts[2]))
        return uhat * self._edge


class _StiffRK4Stepper:
    """Classical RK4 on the integrating-factor transformed system."""

    def __init__(self, grid: Grid, params: ModelParams, dt: float):
        self.grid = grid
        self.params = params
        self.dt = dt
        sym = grid.abs_k ** (2.0 * params.s)
        lam = -0.5j * params.eps ** (2.0 * params.s - 1.0) * sym
        self._e_half = np.exp(lam * dt / 2.0)
        self._e_full = self._e_half * self._e_half
        self._nl_scale = -1j * params.gamma / params.eps

    def _nl(self, uhat: np.ndarray) -> np.ndarray:
        u = _fft.ifft(uhat)
        abs2 = u.real * u.real + u.imag * u.imag
        w = _nonlinear_phase_power(abs2, self.params.p) * u
        return self._nl_scale * _fft.fft(w)

    def step(self, uhat: np.ndarray) -> np.ndarray:
        dt, e2, e1 = self.dt, self._e_half, self._e_full
        n1 = self._nl(uhat)
        n2 = self._nl(e2 * (uhat + 0.5 * dt * n1))
        n3 = self._nl(e2 * uhat + 0.5 * dt * n2)
        n4 = self._nl(e1 * uhat + dt * e2 * n3)
        return e1 * uhat + (dt / 6.0) * (e1 * n1 + 2.0 * e2 * (n2 + n3) + n4)


_STEPPERS = {"splitting4": _SplittingStepper, "stiff_rk4": _StiffRK4Stepper}


def step_splitting4(u: PhysicalField, params: ModelParams, dt: float) -> PhysicalField:
    """One fourth-order splitting step acting on a physical field."""
    stepper = _SplittingStepper(u.grid, params, dt)
    return PhysicalField(u.grid, _fft.ifft(stepper.step(_fft.fft(u.values))))


def step_stiff_rk4(uhat: SpectralField, params: ModelParams, dt: float) -> SpectralField:
    """One integrating-factor RK4 step acting on a spectral field."""
    stepper = _StiffRK4Stepper(uhat.grid, params, dt)
    return SpectralField(uhat.grid, stepper.step(uhat.coefficients))


def _spectral_floor_ratio(coefficients: np.ndarray) -> float:
    """Median tail magnitude (top 2 percent of |k|) over the peak."""
    n = coefficients.size
    half = n // 2
    band = max(4, int(0.02 * half))
    tail = np.abs(coefficients[half - band : half])
    peak = np.abs(coefficients).max()
    if peak == 0.0:
        return 0.0
    return float(np.median(tail) / peak)


def evolve(
    params: ModelParams,
    u0: PhysicalField,
    tg: TimeGrid,
    mon: MonitorConfig | None = None,
    integrator: str = "splitting4",
    on_sample=None,
) -> RunResult:
    """Advance u0 to t_end or to the first triggered stop.

    Diagnostics are recorded at t = 0 and every ``mon.series_stride``
    steps. A non-finite state stops the run with the last finite state
    retained; with ``mon.singularity_stop`` the run also stops at the
    first recorded sample whose fitted singularity distance drops below
    the grid's minimal resolved distance. ``on_sample(t, values)`` is
    called at every recorded sample on the stepping thread.
    """
    if mon is None:
        mon = MonitorConfig()
    if integrator not in _STEPPERS:
        raise ValueError(f"integrator must be one of {INTEGRATORS}, got {integrator!r}")
    grid = u0.grid
    if any(t < 0 or t > tg.t_end for t in mon.snapshot_times):
        raise ValueError("snapshot_times must lie in [0, t_end]")
    if not np.all(np.isfinite(u0.values)):
        raise ValueError("initial data must be finite")

    stepper = _STEPPERS[integrator](grid, params, tg.dt)
    m_res = analysis.min_resolved_distance(grid)
    sigma_c = params.sigma_critical

    snapshot_steps: dict[int, float] = {}
    for t_snap in mon.snapshot_times:
        snapshot_steps.setdefault(int(round(t_snap / tg.dt)), t_snap)

    rows: list[tuple] = []
    snapshots: list[tuple[float, PhysicalField]] = []
    e_0: float | None = None
    drift_absolute = False
    warn_time: float | None = None
    status = STATUS_COMPLETED
    need_spectrum = mon.singularity_stop or mon.spectrum_floor_check

    uhat = _fft.fft(u0.values)
    last_good = uhat.copy()
    stop_time = 0.0

    def record(step_index: int, uhat: np.ndarray) -> str | None:
        nonlocal e_0, drift_absolute, warn_time
        t = step_index * tg.dt
        u = _fft.ifft(uhat)
        mass = diagnostics.mass_of_samples(grid, u)
        en = diagnostics.energy_of_state(grid, u, uhat, params)
        sup = float(np.max(np.abs(u)))
        grad = diagnostics.seminorm_of_spectrum(grid, uhat, 1.0)
        if not all(np.isfinite(v) for v in (mass, en, sup, grad)):
            # state is representable but the nonlinearity overflowed
            return STATUS_OVERFLOW
        if e_0 is None:
            e_0 = en
            drift_absolute = e_0 == 0.0
        drift = diagnostics.relative_energy_drift(en, e_0)
        hdot = (
            diagnostics.seminorm_of_spectrum(grid, uhat, sigma_c)
            if sigma_c >= 0.0
            else np.nan
        )
        delta = mu = np.nan
        stop = None
        if need_spectrum:
            fit = analysis.fit_spectrum_window(grid, uhat)
            delta, mu = fit.delta, fit.mu
            if (
                mon.spectrum_floor_check
                and warn_time is None
                and _spectral_floor_ratio(uhat) > RESOLUTION_FLOOR_RATIO
            ):
                warn_time = t
            if (
                mon.singularity_stop
                and np.isfinite(delta)
                and analysis.singularity_stop_check(fit, m_res)
            ):
                stop = STATUS_SINGULARITY
        rows.append((t, mass, en, drift, sup, grad, hdot, delta, mu))
        if on_sample is not None:
            on_sample(t, u)
        if stop is None and step_index > 0 and drift > mon.energy_drift_threshold:
            stop = STATUS_ENERGY_DRIFT
        return stop

    first_stop = record(0, uhat)
    if first_stop is not None:
        return RunResult(
            status=first_stop,
            stop_time=0.0,
            series=np.array(rows, dtype=_SERIES_DTYPE),
            snapshots=[],
            final_state=u0.copy(),
            sigma_c=sigma_c,
            resolution_warning_time=warn_time,
            energy_drift_absolute=drift_absolute,
        )
    if 0 in snapshot_steps:
        snapshots.append((0.0, PhysicalField(grid, _fft.ifft(uhat))))

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, tg.n_steps + 1):
            uhat = stepper.step(uhat)
            if not np.all(np.isfinite(uhat)):
                status = STATUS_OVERFLOW
                stop_time = (n - 1) * tg.dt
                uhat = last_good
                break
            last_good = uhat
            stop_time = n * tg.dt
            if n in snapshot_steps:
                snapshots.append((n * tg.dt, PhysicalField(grid, _fft.ifft(uhat))))
            if n % mon.series_stride == 0 or n == tg.n_steps:
                stop = record(n, uhat)
                if stop is not None:
                    status = stop
                    break

    if status == STATUS_COMPLETED:
        stop_time = tg.t_end
    series = np.array(rows, dtype=_SERIES_DTYPE)
    final = PhysicalField(grid, _fft.ifft(last_good))
    return RunResult(
        status=status,
        stop_time=stop_time,
        series=series,
        snapshots=snapshots,
        final_state=final,
        sigma_c=sigma_c,
        resolution_warning_time=warn_time,
        energy_drift_absolute=drift_absolute,
    )
