"""Deterministic Fibonacci/Lucas backbone.

Exact integer recurrences, golden-ratio closed forms, and recurrence
verifiers.  Exact functions return Python ints (arbitrary precision);
closed forms return float64 and are only trusted up to ``n = 70``, past
which the spacing between adjacent doubles exceeds 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "GoldenConstants",
    "GOLDEN",
    "BINET_MAX_N",
    "fib_iter",
    "lucas_iter",
    "lucas_from_fib",
    "fib_binet",
    "fib_closed_scaled",
    "lucas_closed_scaled",
    "verify_sum_of_squares",
    "verify_plain_recurrence",
    "verify_scaled_recurrence",
    "RecurrenceCheck",
    "RecurrenceReport",
]

# Closed forms lose integer resolution in float64 beyond this index.
BINET_MAX_N = 70


@dataclass(frozen=True)
class GoldenConstants:
    """The golden-ratio conjugate pair and sqrt(5).

    Satisfies phi + psi = 1 and phi * psi = -1 (to float64 rounding).
    """

    phi: float = (1.0 + math.sqrt(5.0)) / 2.0
    psi: float = (1.0 - math.sqrt(5.0)) / 2.0
    sqrt5: float = math.sqrt(5.0)


GOLDEN = GoldenConstants()


def fib_iter(n: int) -> int:
    """n-th Fibonacci number (0, 1, 1, 2, ...), computed exactly."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def lucas_iter(n: int) -> int:
    """n-th Lucas number (2, 1, 3, 4, 7, ...), computed exactly."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def lucas_from_fib(n: int) -> int:
    """Lucas number as the flanking-Fibonacci sum F(n-1) + F(n+1).

    Requires n >= 1: the n = 0 case would need F(-1), which this exact
    integer path does not define.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1 (F(n-1) undefined at n=0), got {n}")
    return fib_iter(n - 1) + fib_iter(n + 1)


def _check_binet_range(n: int) -> None:
    if not 0 <= n <= BINET_MAX_N:
        raise ValueError(
            f"n must be in [0, {BINET_MAX_N}] for float64 closed forms, got {n}"
        )


def _check_gamma(gamma: float) -> None:
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")


def fib_binet(n: int) -> float:
    """Binet closed form (phi^n - psi^n) / sqrt(5)."""
    _check_binet_range(n)
    g = GOLDEN
    return (g.phi**n - g.psi**n) / g.sqrt5


def fib_closed_scaled(n: int, gamma: float) -> float:
    """gamma-scaled Binet form: gamma * (phi^n - psi^n) / sqrt(5)."""
    _check_gamma(gamma)
    return gamma * fib_binet(n)


def lucas_closed_scaled(n: int, gamma: float) -> float:
    """gamma-scaled Lucas closed form: gamma * (phi^n + psi^n).

    Initial values come out as 2*gamma and gamma; the scale cancels in any
    ratio of two values, which is what the transmission profiles rely on.
    """
    _check_binet_range(n)
    _check_gamma(gamma)
    g = GOLDEN
    return gamma * (g.phi**n + g.psi**n)


def verify_sum_of_squares(n: int) -> bool:
    """Check sum_{i=1..n} F(i)^2 == F(n) * F(n+1) with exact integers."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total = 0
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
        total += a * a
    # after the loop a == F(n), b == F(n+1)
    return total == a * b


@dataclass(frozen=True)
class RecurrenceCheck:
    """Residual of one index against a two-term recurrence."""

    n: int
    residual: float
    ratio: float  # residual / |f(n)|
    passed: bool


@dataclass(frozen=True)
class RecurrenceReport:
    """Per-index residuals of a closed form against a candidate recurrence."""

    recurrence: str
    gamma: float
    tol: float
    checks: tuple[RecurrenceCheck, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        """Human-readable residual table (one line per index)."""
        lines = [
            f"recurrence check: {self.recurrence} (gamma={self.gamma}, tol={self.tol})",
            f"verdict: {'PASS' if self.all_pass else 'FAIL'}",
        ]
        for c in self.checks:
            mark = "ok " if c.passed else "BAD"
            lines.append(
                f"  [{mark}] n={c.n:3d}  residual={c.residual:.6e}  "
                f"residual/|f(n)|={c.ratio:.6e}"
            )
        return "\n".join(lines)


def _verify_recurrence(
    closed_form: Callable[[int, float], float],
    n_max: int,
    gamma: float,
    tol: float,
    scale: float,
    label: str,
) -> RecurrenceReport:
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    checks = []
    for n in range(2, n_max + 1):
        f_n = closed_form(n, gamma)
        f_n1 = closed_form(n - 1, gamma)
        f_n2 = closed_form(n - 2, gamma)
        residual = abs(f_n - scale * (f_n1 + f_n2))
        ratio = residual / abs(f_n) if f_n != 0.0 else math.inf
        checks.append(
            RecurrenceCheck(n=n, residual=residual, ratio=ratio, passed=ratio <= tol)
        )
    return RecurrenceReport(
        recurrence=label, gamma=gamma, tol=tol, checks=tuple(checks)
    )


def verify_plain_recurrence(
    closed_form: Callable[[int, float], float],
    n_max: int,
    gamma: float,
    tol: float = 1e-9,
) -> RecurrenceReport:
    """Check f(n) = f(n-1) + f(n-2) for n in [2, n_max].

    Both gamma-scaled closed forms satisfy this plain two-term recurrence
    for every gamma: the scale factors out of each side.
    """
    _check_gamma(gamma)
    return _verify_recurrence(
        closed_form, n_max, gamma, tol, scale=1.0, label="f(n) = f(n-1) + f(n-2)"
    )


def verify_scaled_recurrence(
    closed_form: Callable[[int, float], float],
    n_max: int,
    gamma: float,
    tol: float = 1e-9,
) -> RecurrenceReport:
    """Check f(n) = (1/gamma) * (f(n-1) + f(n-2)) for n in [2, n_max].

    Documented negative case: for the gamma-scaled closed forms the
    residual is |1 - 1/gamma| * |f(n)| at every index, so the check fails
    for every gamma != 1.  Kept public so the mismatch stays visible.
    """
    _check_gamma(gamma)
    return _verify_recurrence(
        closed_form,
        n_max,
        gamma,
        tol,
        scale=1.0 / gamma,
        label="f(n) = (1/gamma) * (f(n-1) + f(n-2))",
    )
