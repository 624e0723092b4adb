"""Ground states of the fractional NLS by Newton-Krylov continuation.

The standing-wave profile solves (1/2)(-Delta)^s Q + Q = Q^(2p+1). In
Fourier variables this is the zero problem

    F(Q) = (|k|^(2s)/2 + 1) Q_hat - (Q^(2p+1))_hat = 0,

attacked by an inexact Newton iteration whose linear solves use restarted
GMRES with only Jacobian-vector products (the Jacobian is never formed).
For s = 1 the solution is an explicit bright solitary wave; solutions for
s < 1 are reached by continuation, seeding each solve with the previous
profile and shrinking the step in s when the iteration fails. Iterates
are kept real and even by projecting the spectrum after every update,
which costs no extra transforms and keeps the residual floor at rounding
level.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft
from scipy.signal import czt
from scipy.sparse.linalg import LinearOperator
from scipy.sparse.linalg import gmres as _scipy_gmres

from .grids import Grid, PhysicalField, SpectralField
from .model import admissible_power_limit

#: inexact-Newton inner tolerance and GMRES shape defaults
GMRES_TOL = 1e-3
GMRES_RESTART = 50
GMRES_MAX_ITER = 400

#: tail-fit window as fractions of the domain half-length pi*D
TAIL_WINDOW = (0.25, 0.5)

#: sup-norm threshold below which an iterate counts as the trivial zero
TRIVIAL_THRESHOLD = 1e-6


class GroundStateError(RuntimeError):
    """Newton-Krylov failure; try a smaller continuation step."""


class GmresNonConvergence(RuntimeError):
    """GMRES ran out of iterations; carries the best iterate found."""

    def __init__(self, message: str, best: np.ndarray):
        super().__init__(message)
        self.best = best


class UnderResolvedWarning(UserWarning):
    """A produced field is not spectrally resolved on its grid."""


@dataclass(frozen=True)
class GroundStateProblem:
    """Grid and exponents (s, p) of one standing-wave computation."""

    grid: Grid
    s: float
    p: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.s <= 1.0:
            raise ValueError(f"s must lie in (0, 1], got {self.s}")
        if not self.p > 0.0:
            raise ValueError(f"p must be positive, got {self.p}")
        limit = admissible_power_limit(self.s)
        if self.p >= limit:
            raise ValueError(
                f"no standing wave for p={self.p} at s={self.s}: requires p < {limit}"
            )

    @property
    def symbol(self) -> np.ndarray:
        """Diagonal factor |k|^(2s)/2 + 1 of the linearization."""
        return 0.5 * self.grid.abs_k ** (2.0 * self.s) + 1.0


@dataclass
class GroundState:
    """A converged real, even, positive standing-wave profile."""

    field: PhysicalField
    residual_norm: float
    s: float
    p: float
    omega: float = 1.0
    residual_history: list[float] = field(default_factory=list)


def _sech(y: np.ndarray) -> np.ndarray:
    # overflow-free: 2 e^{-|y|} / (1 + e^{-2|y|})
    e = np.exp(-np.abs(y))
    return 2.0 * e / (1.0 + e * e)


def closed_form_soliton(p: float, grid: Grid) -> PhysicalField:
    """Explicit s = 1 bright soliton ((p+1) / cosh^2(sqrt(2) p x))^(1/(2p))."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    q = (p + 1.0) ** (1.0 / (2.0 * p)) * _sech(np.sqrt(2.0) * p * grid.x) ** (1.0 / p)
    return PhysicalField(grid, q.astype(np.complex128))


def residual(q_hat: SpectralField, problem: GroundStateProblem) -> SpectralField:
    """F(Q) = (|k|^(2s)/2 + 1) Q_hat - (Q^(2p+1))_hat."""
    q = _fft.ifft(q_hat.coefficients)
    power = _fft.fft(q ** (2.0 * problem.p + 1.0))
    return SpectralField(problem.grid, problem.symbol * q_hat.coefficients - power)


def jacobian_vector_product(
    q_hat: SpectralField, v_hat: SpectralField, problem: GroundStateProblem
) -> SpectralField:
    """Action of the linearization about a real profile Q on a vector."""
    q = _fft.ifft(q_hat.coefficients).real
    mult = (2.0 * problem.p + 1.0) * q ** (2.0 * problem.p)
    v = _fft.ifft(v_hat.coefficients)
    return SpectralField(
        problem.grid,
        problem.symbol * v_hat.coefficients - _fft.fft(mult * v),
    )


def gmres_solve(
    apply_a,
    b: np.ndarray,
    tol: float = GMRES_TOL,
    restart: int = GMRES_RESTART,
    max_iter: int = GMRES_MAX_ITER,
    preconditioner=None,
) -> np.ndarray:
    """Matrix-free restarted GMRES: solve A x = b to |Ax - b| <= tol |b|.

    ``apply_a`` is a callable (or LinearOperator) giving the operator's
    action. Raises :class:`GmresNonConvergence` carrying the best iterate
    when the iteration budget is exhausted.
    """
    b = np.asarray(b)
    n = b.shape[0]

    def _wrap(action):
        matvec = action.matvec if isinstance(action, LinearOperator) else action

        def safe(v):
            out = np.asarray(matvec(v))
            # scipy overwrites work buffers, so never hand back the input
            return out.copy() if out is v else out

        return LinearOperator((n, n), matvec=safe, dtype=complex)

    op = _wrap(apply_a)
    m_op = None if preconditioner is None else _wrap(preconditioner)
    cycles = max(1, -(-max_iter // restart))
    x, info = _scipy_gmres(
        op, b, rtol=tol, atol=0.0, restart=restart, maxiter=cycles, M=m_op
    )
    if info != 0:
        raise GmresNonConvergence(
            f"GMRES did not reach tol={tol} within {max_iter} iterations", x
        )
    return x


def _project_real_even(grid: Grid, q_hat: np.ndarray) -> np.ndarray:
    """Project onto real, even fields (spectrum real and symmetric in k)."""
    re = q_hat.real
    return (0.5 * (re + re[grid.reflection_index])).astype(np.complex128)


def newton_krylov(
    problem: GroundStateProblem,
    initial: PhysicalField,
    newton_tol: float = 1e-12,
    max_newton: int = 40,
) -> GroundState:
    """Solve F(Q) = 0 by inexact Newton-GMRES from a real, even iterate.

    Stops when the sup norm of the spectral residual drops below
    ``newton_tol``. Collapse to the trivial zero solution or a divergent
    residual raises :class:`GroundStateError`; the caller should retry
    from a closer continuation point.
    """
    grid = problem.grid
    diag = problem.symbol
    q_hat = _project_real_even(grid, _fft.fft(initial.values))
    if np.max(np.abs(_fft.ifft(q_hat))) < TRIVIAL_THRESHOLD:
        raise GroundStateError("initial iterate is numerically trivial")

    jacobi = LinearOperator(
        (grid.n_modes, grid.n_modes), matvec=lambda v: v / diag, dtype=complex
    )
    history: list[float] = []
    p2 = 2.0 * problem.p

    for _ in range(max_newton):
        q = _fft.ifft(q_hat)
        resid = diag * q_hat - _fft.fft(q ** (p2 + 1.0))
        rnorm = float(np.max(np.abs(resid)))
        history.append(rnorm)
        if rnorm <= newton_tol:
            return _package_state(problem, q_hat, rnorm, history)
        if not np.isfinite(rnorm) or rnorm > 1e6 * (history[0] + 1.0):
            raise GroundStateError(
                f"Newton residual diverged at {rnorm:.2e}; reduce the step in s"
            )
        mult = (p2 + 1.0) * q.real**p2

        def jv(v_hat):
            return diag * v_hat - _fft.fft(mult * _fft.ifft(v_hat))

        # forcing term shrinks with the residual so convergence stays quadratic
        inner_tol = max(min(GMRES_TOL, rnorm), 1e-2 * newton_tol)
        try:
            dq = gmres_solve(jv, resid, tol=inner_tol, preconditioner=jacobi)
        except GmresNonConvergence as exc:
            dq = exc.best
        q_hat = _project_real_even(grid, q_hat - dq)
        if np.max(np.abs(_fft.ifft(q_hat))) < TRIVIAL_THRESHOLD:
            raise GroundStateError(
                "iteration collapsed to the trivial zero solution; "
                "reduce the step in s"
            )
    raise GroundStateError(
        f"no convergence to {newton_tol} within {max_newton} Newton steps "
        f"(last residual {history[-1]:.2e})"
    )


def _package_state(
    problem: GroundStateProblem, q_hat: np.ndarray, rnorm: float, history: list[float]
) -> GroundState:
    q = _fft.ifft(q_hat)
    scale = float(np.max(np.abs(q)))
    imag = float(np.max(np.abs(q.imag)))
    if imag > 1e-10 * scale:
        raise GroundStateError(f"converged state is not real: max imag {imag:.2e}")
    q_real = q.real
    odd = float(np.max(np.abs(q_real - q_real[problem.grid.reflection_index])))
    if odd > 1e-10 * scale:
        raise GroundStateError(f"converged state is not even: asymmetry {odd:.2e}")
    return GroundState(
        field=PhysicalField(problem.grid, q_real.astype(np.complex128)),
        residual_norm=rnorm,
        s=problem.s,
        p=problem.p,
        omega=1.0,
        residual_history=history,
    )


def default_schedule(s_target: float) -> list[float]:
    """Continuation stops: 0.1 steps down to 0.6, then 0.05, ending at target."""
    stops: list[float] = []
    s = 1.0
    while s - 0.1 >= 0.6 - 1e-12 and s - 0.1 > s_target + 1e-12:
        s = round(s - 0.1, 10)
        stops.append(s)
    while s - 0.05 > s_target + 1e-12:
        s = round(s - 0.05, 10)
        stops.append(s)
    if not stops or abs(stops[-1] - s_target) > 1e-12:
        stops.append(s_target)
    return stops


def continuation_in_s(
    s_target: float,
    p: float,
    grid: Grid,
    schedule: list[float] | None = None,
    newton_tol: float = 1e-12,
    min_step: float = 1e-4,
) -> list[GroundState]:
    """Walk s from 1 down to s_target, reusing each profile as the next seed.

    Returns the converged states at every scheduled value of s (rescue
    sub-steps introduced by adaptive halving are not reported). The halving
    gives up once the increment falls below ``min_step``.
    """
    if not 0.0 < s_target <= 1.0:
        raise ValueError(f"s_target must lie in (0, 1], got {s_target}")
    if schedule is None:
        schedule = [1.0] if s_target == 1.0 else default_schedule(s_target)
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    if abs(schedule[-1] - s_target) > 1e-12:
        raise ValueError("schedule must end at s_target")

    seed = closed_form_soliton(p, grid)
    current = newton_krylov(GroundStateProblem(grid, 1.0, p), seed, newton_tol)
    states: list[GroundState] = []
    if s_target == 1.0 and schedule == [1.0]:
        return [current]

    for s_stop in schedule:
        target = s_stop
        while True:
            try:
                candidate = newton_krylov(
                    GroundStateProblem(grid, target, p), current.field, newton_tol
                )
            except GroundStateError:
                step = (current.s - target) / 2.0
                if step < min_step:
                    raise GroundStateError(
                        f"continuation stalled between s={current.s} and "
                        f"s={target}: step underflow below {min_step}"
                    )
                target = current.s - step
                continue
            current = candidate
            if abs(current.s - s_stop) <= 1e-12:
                break
            target = s_stop
        states.append(current)
    return states


def rescale_omega(gs: GroundState, omega: float) -> PhysicalField:
    """Profile of the standing wave at frequency omega on the same grid.

    Returns omega^(1/(2p)) Q(x * omega^(1/(2s))) by evaluating the
    trigonometric interpolant of Q at the rescaled nodes (a chirp-z
    transform, exact to rounding). Its mass is
    omega^(1/p - 1/(2s)) * mass(Q). A rescaled profile whose spectrum no
    longer decays on the grid triggers :class:`UnderResolvedWarning`.
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    grid = gs.field.grid
    if omega == 1.0:
        return gs.field.copy()
    lam = omega ** (1.0 / (2.0 * gs.s))
    amp = omega ** (1.0 / (2.0 * gs.p))
    n = grid.n_modes
    b = np.fft.fftshift(_fft.fft(gs.field.values))
    nyquist = b[0]
    b = b.copy()
    b[0] = 0.0
    # interpolant angle at the rescaled nodes: theta_j = 2 pi lam j / N + pi (1 - lam)
    theta0 = np.pi * (1.0 - lam)
    b_twist = b * np.exp(1j * theta0 * np.arange(n))
    core = czt(b_twist, m=n, w=np.exp(2j * np.pi * lam / n), a=1.0 + 0.0j)
    j = np.arange(n)
    theta = 2.0 * np.pi * lam * j / n + theta0
    vals = np.exp(-0.5j * n * theta) * core + nyquist * np.cos(0.5 * n * theta)
    out = (amp / n) * vals
    tail = _tail_floor_ratio(_fft.fft(out))
    if tail > 1e-10:
        warnings.warn(
            f"rescaled profile under-resolved: spectral floor ratio {tail:.1e}",
            UnderResolvedWarning,
            stacklevel=2,
        )
    return PhysicalField(grid, out)


def _tail_floor_ratio(coefficients: np.ndarray) -> float:
    n = coefficients.size
    band = max(4, int(0.02 * (n // 2)))
    peak = np.abs(coefficients).max()
    if peak == 0.0:
        return 0.0
    return float(np.median(np.abs(coefficients[n // 2 - band : n // 2])) / peak)


@dataclass
class TailFit:
    """Log-log slope of the far-field decay and its trustworthiness."""

    exponent: float
    reliable: bool
    window: tuple[float, float]


def tail_exponent(gs: GroundState) -> TailFit:
    """Fit Q ~ C x^a on the far-field window x in [0.25, 0.5] * pi * D.

    For s < 1 the expected exponent is -(1 + 2s). Exponentially decaying
    profiles (s = 1) drown the window in rounding noise and come back
    flagged unreliable.
    """
    grid = gs.field.grid
    xmax = np.pi * grid.half_width
    lo, hi = TAIL_WINDOW[0] * xmax, TAIL_WINDOW[1] * xmax
    x = grid.x
    sel = (x >= lo) & (x <= hi)
    vals = np.abs(gs.field.values[sel].real)
    floor = float(np.max(np.abs(gs.field.values))) * 1e-13
    usable = vals > floor
    if usable.sum() < 8 or usable.mean() < 0.9:
        exponent = np.nan
        if usable.sum() >= 2:
            exponent = float(
                np.polyfit(np.log(x[sel][usable]), np.log(vals[usable]), 1)[0]
            )
        return TailFit(exponent, False, (lo, hi))
    slope = float(np.polyfit(np.log(x[sel][usable]), np.log(vals[usable]), 1)[0])
    return TailFit(slope, True, (lo, hi))
