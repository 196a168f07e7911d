"""Harmonic-oscillator kernels under Cahill-Glauber s-ordering.

Exact closed forms for the retarded response, the s-ordered two-point
kernel of a Gaussian state, the Keldysh contractions, and the reordering
gap, plus a phase-space Monte Carlo sampler of the s-quasidistribution
that serves as an independent oracle for the closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import (
    OrderingParam,
    Signal,
    TimeGrid,
    TwoPointKernel,
    project_pm,
    reflect,
    theta_ordering_matrix,
)
from .rotation import CumulantSet

__all__ = [
    "OscillatorSpec",
    "GaussianState",
    "UnsampleableStateError",
    "retarded_response",
    "retarded_response_freq",
    "s_ordered_kernel",
    "wightman_kernel",
    "ctl_cumulants",
    "reorder_gap",
    "reorder_gap_from_response",
    "recover_retarded_from_gap",
    "keldysh_contractions",
    "lambda_form",
    "rotated_lambda_form",
    "classical_infield",
    "sample_quasidistribution",
    "mc_quasiaverage",
]


class UnsampleableStateError(ValueError):
    """The s-quasidistribution of the state is not a positive Gaussian."""


@dataclass(frozen=True)
class OscillatorSpec:
    omega0: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")


@dataclass(frozen=True)
class GaussianState:
    """Zero-mean Gaussian state: occupation nbar = <a'a>, squeezing m = <aa>."""

    nbar: float = 0.0
    m: complex = 0j

    def __post_init__(self):
        if self.nbar < 0:
            raise ValueError("nbar must be non-negative")
        bound = np.sqrt(self.nbar * (self.nbar + 1.0))
        if abs(self.m) > bound * (1.0 + 1e-12) + 1e-300:
            raise ValueError(
                f"unphysical squeezing: |m|={abs(self.m):.6g} exceeds "
                f"sqrt(nbar(nbar+1))={bound:.6g}"
            )


def _theta(x):
    return np.where(x > 0, 1.0, np.where(x == 0, 0.5, 0.0))


def retarded_response(spec: OscillatorSpec, tau):
    """Kubo response D_R(tau) = -theta(tau) sin(omega0 tau)."""
    tau = np.asarray(tau, dtype=float)
    out = -_theta(tau) * np.sin(spec.omega0 * tau)
    return out if out.ndim else float(out)


def retarded_response_freq(spec: OscillatorSpec, omega, eps: float = 0.0):
    """Frequency-domain response (1/2)[1/(w-w0+ie) - 1/(w+w0+ie)]."""
    w = np.asarray(omega, dtype=complex)
    shift = 1j * eps
    out = 0.5 * (1.0 / (w - spec.omega0 + shift) - 1.0 / (w + spec.omega0 + shift))
    return out if out.ndim else complex(out)


def s_ordered_kernel(spec: OscillatorSpec, state: GaussianState, p: OrderingParam, t, tp):
    """<O_s q(t) q(t')> for a zero-mean Gaussian state.

    (hbar/2)[m e^{-i w (t+t')} + m* e^{i w (t+t')}
             + 2 (nbar + s_minus) cos w (t-t')]
    """
    t = np.asarray(t, dtype=float)
    tp = np.asarray(tp, dtype=float)
    w = spec.omega0
    tsum = t + tp
    tau = t - tp
    val = 0.5 * spec.hbar * (
        state.m * np.exp(-1j * w * tsum)
        + np.conjugate(state.m) * np.exp(1j * w * tsum)
        + 2.0 * (state.nbar + p.s_minus) * np.cos(w * tau)
    )
    return val if np.ndim(val) else complex(val)


def wightman_kernel(spec: OscillatorSpec, state: GaussianState, t, tp):
    """Unordered <q(t) q(t')> for a zero-mean Gaussian state."""
    t = np.asarray(t, dtype=float)
    tp = np.asarray(tp, dtype=float)
    w = spec.omega0
    tsum = t + tp
    tau = t - tp
    val = 0.5 * spec.hbar * (
        state.m * np.exp(-1j * w * tsum)
        + np.conjugate(state.m) * np.exp(1j * w * tsum)
        + (state.nbar + 1.0) * np.exp(-1j * w * tau)
        + state.nbar * np.exp(1j * w * tau)
    )
    return val if np.ndim(val) else complex(val)


def ctl_cumulants(spec: OscillatorSpec, state: GaussianState, grid: TimeGrid,
                  periodic: bool = False) -> CumulantSet:
    """Closed-time-loop triple of the oscillator on a grid (mean is zero).

    periodic=True applies the time ordering on the circle (circulant
    kernels); use it when checking stationary spectral identities, which
    are exact only in that representation.
    """
    t = grid.times
    k_w = wightman_kernel(spec, state, t[:, None], t[None, :])
    th = theta_ordering_matrix(grid, periodic=periodic)
    k_f = th * k_w + th.T * k_w.T
    return CumulantSet(
        mean=Signal.zero(grid),
        K_F=TwoPointKernel(grid, k_f),
        K_rev=TwoPointKernel(grid, k_f.conj()),
        K_W=TwoPointKernel(grid, k_w),
        hbar_c=spec.hbar,
    )


def reorder_gap(spec: OscillatorSpec, tau):
    """Closed form of the reordering gap, Z(tau) = (hbar/2) cos(omega0 tau)."""
    tau = np.asarray(tau, dtype=float)
    out = 0.5 * spec.hbar * np.cos(spec.omega0 * tau)
    return out if out.ndim else float(out)


def reorder_gap_from_response(spec: OscillatorSpec, grid: TimeGrid) -> Signal:
    """Z assembled from the frequency-sign parts of the sampled response.

    Z(tau) = (i hbar / 2)[D_R^+(tau) + D_R^+(-tau) - D_R^-(tau) - D_R^-(-tau)].
    Exact on grids where omega0 is resonant.
    """
    d = Signal(grid, retarded_response(spec, grid.lags))
    dp = project_pm(d, "+")
    dm = project_pm(d, "-")
    z = 0.5j * spec.hbar * (dp.values + reflect(dp).values
                            - dm.values - reflect(dm).values)
    return Signal(grid, z)


def recover_retarded_from_gap(Z: Signal, hbar: float = 1.0) -> Signal:
    """D_R(tau) = (2 / i hbar) theta(tau) [Z^+(tau) - Z^-(tau)]."""
    zp = project_pm(Z, "+")
    zm = project_pm(Z, "-")
    vals = (2.0 / (1j * hbar)) * _theta(Z.grid.lags) * (zp.values - zm.values)
    return Signal(Z.grid, vals)


def keldysh_contractions(spec: OscillatorSpec, t, tp) -> dict:
    """Vacuum contractions: i hbar D^+ = (hbar/2) e^{-i w tau},
    i hbar D_F = (hbar/2) e^{-i w |tau|}; returns D_F and D_plus."""
    tau = np.asarray(t, dtype=float) - np.asarray(tp, dtype=float)
    w = spec.omega0
    d_plus = np.exp(-1j * w * tau) / 2j
    d_f = np.exp(-1j * w * np.abs(tau)) / 2j
    if np.ndim(tau):
        return {"D_F": d_f, "D_plus": d_plus}
    return {"D_F": complex(d_f), "D_plus": complex(d_plus)}


def lambda_form(ctl: CumulantSet, eta_p: Signal, eta_m: Signal) -> complex:
    """Oscillator bilinear form (zero-mean special case of Lambda_2)."""
    from .rotation import lambda2_form

    return lambda2_form(ctl, eta_p, eta_m)


def rotated_lambda_form(spec: OscillatorSpec, state: GaussianState, p: OrderingParam,
                        eta: Signal, j_s: Signal, periodic: bool = False) -> complex:
    """Rotated form -i eta D_R j_s - (1/2) eta <O_s q q> eta, all analytic.

    With periodic=True the response kernel is the circulant (wrapped-lag)
    sampling, matching cumulant sets built with the periodic ordering.
    """
    g = eta.grid
    t = g.times
    if periodic:
        d_r = TwoPointKernel.from_stationary(
            g, lambda tau: retarded_response(spec, tau)).values
    else:
        d_r = retarded_response(spec, t[:, None] - t[None, :])
    k_s = s_ordered_kernel(spec, state, p, t[:, None], t[None, :])
    dt = g.dt
    term_r = -1j * dt ** 2 * (eta.values @ d_r @ j_s.values)
    term_n = -0.5 * dt ** 2 * (eta.values @ k_s @ eta.values)
    return complex(term_r + term_n)


def classical_infield(alpha: complex, spec: OscillatorSpec, t):
    """c-number in-field sqrt(hbar/2)(alpha e^{-i w t} + alpha* e^{i w t})."""
    t = np.asarray(t, dtype=float)
    w = spec.omega0
    val = np.sqrt(spec.hbar / 2.0) * 2.0 * np.real(alpha * np.exp(-1j * w * t))
    return val if val.ndim else float(val)


def _quasidistribution_cov(state: GaussianState, p: OrderingParam) -> np.ndarray:
    """Covariance of (Re alpha, Im alpha) under the s-quasidistribution.

    Second moments: E[|alpha|^2] = nbar + s_minus, E[alpha^2] = m.
    """
    v = state.nbar + p.s_minus
    re_m, im_m = np.real(state.m), np.imag(state.m)
    return np.array([
        [0.5 * (v + re_m), 0.5 * im_m],
        [0.5 * im_m, 0.5 * (v - re_m)],
    ])


def sample_quasidistribution(state: GaussianState, p: OrderingParam, n_samples: int,
                             rng: np.random.Generator) -> np.ndarray:
    """Draw complex amplitudes from the s-quasidistribution of the state.

    Raises UnsampleableStateError when the quasidistribution is not a
    positive (semidefinite) Gaussian, e.g. squeezed states at s = 1 with
    insufficient thermal noise.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    cov = _quasidistribution_cov(state, p)
    evals, evecs = np.linalg.eigh(cov)
    tol = 1e-12 * max(1.0, float(np.abs(cov).max()))
    if evals.min() < -tol:
        raise UnsampleableStateError(
            "quasidistribution not sampleable: covariance of the s-ordered "
            f"Gaussian has negative eigenvalue {evals.min():.3e}"
        )
    evals = np.clip(evals, 0.0, None)
    root = evecs @ np.diag(np.sqrt(evals))
    xy = rng.standard_normal((n_samples, 2)) @ root.T
    return xy[:, 0] + 1j * xy[:, 1]


def mc_quasiaverage(spec: OscillatorSpec, state: GaussianState, p: OrderingParam,
                    times: np.ndarray, n_samples: int, seed: int,
                    chunk: int = 200_000):
    """Monte Carlo estimate of <O_s q(t) q(t')> over the s-quasidistribution.

    Uses a counter-based (Philox) generator so the result is a pure
    function of (seed, n_samples).  Returns (estimate, standard_error) as
    (nt, nt) arrays.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    times = np.asarray(times, dtype=float)
    rng = np.random.Generator(np.random.Philox(seed))
    nt = len(times)
    s1 = np.zeros((nt, nt))
    s2 = np.zeros((nt, nt))
    w = spec.omega0
    pref = np.sqrt(spec.hbar / 2.0)
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        alphas = sample_quasidistribution(state, p, m, rng)
        q = 2.0 * pref * np.real(alphas[:, None] * np.exp(-1j * w * times[None, :]))
        s1 += q.T @ q
        q2 = q ** 2
        s2 += q2.T @ q2
        done += m
    mean = s1 / n_samples
    var = np.maximum(s2 / n_samples - mean ** 2, 0.0)
    stderr = np.sqrt(var / n_samples)
    return mean, stderr
