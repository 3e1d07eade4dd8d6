"""Master equations dR = ½{R, R} and δ_α R(α) = ½{R(α), R(α)}, and exp(R/α)."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .wedge import Series, Wedge, series_delta_alpha


class TruncationError(ValueError):
    pass


def _residual_terms(series_or_wedge):
    if isinstance(series_or_wedge, Wedge):
        return series_or_wedge.to_json()
    return series_or_wedge.to_json()


def _parity_meta(lam, X):
    """Sign parity Σπ and Deg parity of each factor-count component of X."""
    comps = {}
    for m in X.terms:
        comps.setdefault(len(m), set()).add((lam.mono_parity(m), lam.Deg(m) % 2))
    return {str(k): {"sign_parity": sorted({a for a, _ in v}), "deg_parity": sorted({b for _, b in v})}
            for k, v in sorted(comps.items())}


def check_master_tree(R):
    """Residual dR - ½{R, R}; parity of each R_i is reported, the equation decides."""
    lam = R.lam
    res = lam.coboundary(R) - Fraction(1, 2) * lam.bracket(R, R)
    parity_ok = all(lam.mono_parity(m) == 0 for m in R.terms)
    return {"check": "master-tree", "status": "pass" if not res else "fail",
            "residual_terms": res.to_json(), "parity_even": parity_ok,
            "parities": _parity_meta(lam, R)}


def check_master_full(R, gmax):
    """Residual δ_α R - ½{R, R} at α-orders 0..gmax; R_g must be zero modes of ψ."""
    lam = R.lam
    not_zero_mode = [g for g, X in sorted(R.coeffs.items()) if lam.psi(X)]
    res = (series_delta_alpha(R) - R.bracket(R).scale(Fraction(1, 2))).truncate(gmax)
    status = "pass" if not res and not not_zero_mode else "fail"
    return {"check": "master-full", "status": status, "gmax": gmax,
            "residual_terms": res.to_json(), "not_zero_modes": not_zero_mode,
            "parities": {str(g): _parity_meta(lam, X) for g, X in sorted(R.coeffs.items())}}


def exp_series(R, N):
    """Σ_{n=0}^{N} (R/α)^n / n! as a Laurent series in α."""
    lam = R.lam
    A = R.shift(-1)
    term = Series.const(lam.one())
    total = term
    for n in range(1, N + 1):
        term = term.mul(A).scale(Fraction(1, n))
        total = total + term
    return total


def exp_closedness_check(R, gmax, truncation=None):
    """δ_α of the order-N partial sum of exp(R/α), inspected at α-orders [-N, gmax].

    δ_α E_N = E_{N-1} α^{-1} (δ_α R - ½{R, R}) exactly, so closedness at every
    order is equivalent to the master equation for the polynomial R.  N must be
    at least max(2, largest factor count in R); smaller N is rejected.
    """
    need = max([2] + [X.max_factors() for X in R.coeffs.values()])
    N = need if truncation is None else int(truncation)
    if N < need:
        raise TruncationError(f"truncation {N} below the required {need}")
    E = exp_series(R, N)
    dE = series_delta_alpha(E)
    window = Series({k: v for k, v in dE.coeffs.items() if -N <= k <= gmax}, R.lam)
    return {"check": "exp-closedness", "status": "pass" if not window else "fail",
            "truncation": N, "gmax": gmax, "window": [-N, gmax],
            "residual_terms": window.to_json()}


def power(lam, A, n):
    out = lam.one()
    for _ in range(n):
        out = lam.mul(out, A)
    return out


def lemma_power_identity(A, n):
    """δ_α(A^n) = n A^{n-1} δ_α A - n(n-1)/2 α A^{n-2} {A, A}, order by order; returns bool."""
    lam = A.lam
    An = power(lam, A, n)
    d_lhs, b_lhs = lam.coboundary(An), lam.boundary(An)
    if n == 0:
        return not d_lhs and not b_lhs
    An1 = power(lam, A, n - 1)
    d_rhs = n * lam.mul(An1, lam.coboundary(A))
    b_rhs = n * lam.mul(An1, lam.boundary(A))
    if n >= 2:
        b_rhs = b_rhs - comb(n, 2) * lam.mul(power(lam, A, n - 2), lam.bracket(A, A))
    return d_lhs == d_rhs and b_lhs == b_rhs


def factorial_identity(l, t):
    """(Σ_{s=0}^{l} (s+t)!/s!, (l+t+1)!/(l!(t+1)))."""
    if l < 0 or t < 0:
        raise ValueError("l and t must be nonnegative")
    lhs = sum(Fraction(factorial(s + t), factorial(s)) for s in range(l + 1))
    rhs = Fraction(factorial(l + t + 1), factorial(l) * (t + 1))
    return lhs, rhs
