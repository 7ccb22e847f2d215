"""Separation-of-variables solution of the impulsively started plate problem.

With ``y_hat = y/h`` and ``tau = nu*t/h**2`` the velocity is

    u/U0 = (1 - y_hat) - sum_n 2/(n*pi) * sin(n*pi*y_hat) * exp(-(n*pi)**2 * tau)

The series converges slowly near ``t = 0``; at the record times used here
(``tau >= 0.02``) fifty terms are far more than enough.
"""
import numpy as np


def series_velocity(y_hat, t, nu, h, u0, terms=200):
    """Fourier-series velocity at normalised positions ``y_hat`` and time ``t``."""
    y_hat = np.asarray(y_hat, dtype=float)
    if terms < 1:
        raise ValueError("need at least one series term")
    tau = nu * t / (h * h)
    n = np.arange(1, terms + 1, dtype=float)[:, None]
    modes = 2.0 / (n * np.pi) * np.sin(n * np.pi * y_hat[None, :]) * np.exp(-(n * np.pi) ** 2 * tau)
    return u0 * ((1.0 - y_hat) - modes.sum(axis=0))


def steady_velocity(y_hat, u0):
    return u0 * (1.0 - np.asarray(y_hat, dtype=float))
