"""Charts and potentials on the space of polynomial models.

The coefficient tuple a = (a_1, ..., a_n) of a depressed monic
polynomial is a base point; this module builds two distinguished
coordinate systems on that space and the objects living in them:

* canonical coordinates x_i = p(alpha_i), the critical values, in which
  the residue pairing is diagonal with weights mu_i;
* flat coordinates t^1, ..., t^n obtained from the series inversion of
  w^{n+1} = p(z), in which the pairing is the constant antidiagonal
  identity;
* the Euler field, which rescales each coordinate by a fixed charge;
* the structure tensor c_ijk and a polynomial potential F with
  dF^3 = c, reconstructed by least squares from a weighted-degree
  ansatz and checked against the associativity, normalization and
  quasi-homogeneity equations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import csv
import numpy as np

from .polycore import (
    DegenerateModelError,
    LGPolynomial,
    ToleranceConfig,
    critical_points,
    poly_mod,
    poly_mul,
    reversion_polynomials,
    revert_series,
)
from .frobenius import VerificationReport, complex_to_json, json_to_complex
from .landau_ginzburg import build_closed

__all__ = [
    "CanonicalChart",
    "FlatChart",
    "EulerData",
    "PotentialPoly",
    "canonical_chart",
    "flat_chart",
    "euler_check",
    "structure_tensor",
    "structure_gradient_residual",
    "coefficients_from_flat",
    "sample_charts",
    "reconstruct_potential",
    "wdvv_check",
    "potential_to_dict",
    "potential_from_dict",
    "export_samples_csv",
    "export_samples_json",
]


def _match_roots(roots, ref):
    """Reorder ``roots`` so that entry i is the one nearest ref[i].

    Raises DegenerateModelError when the nearest-neighbour assignment is
    not a bijection, which signals that the perturbation jumped between
    branches.
    """
    roots = np.asarray(roots)
    taken = set()
    out = np.zeros_like(roots)
    for i, r in enumerate(ref):
        j = int(np.argmin(np.abs(roots - r)))
        if j in taken:
            raise DegenerateModelError("frame continuation failed")
        taken.add(j)
        out[i] = roots[j]
    return out


@dataclass
class CanonicalChart:
    """Critical values and weights at a base point.

    ``jacobian[i, j] = alpha_i^{n-1-j}`` is dx_i/da_{j+1}; the finite
    difference residual measures how far the numerically transported
    coordinate directions are from the interpolation idempotents, and
    the form residual how far sum_i mu_i dx^i is from da_1/(n+1).
    """

    p: LGPolynomial
    roots: np.ndarray
    x: np.ndarray
    mu: np.ndarray
    jacobian: np.ndarray
    fd_residual: float
    form_residual: float


def _canonical_jacobian(roots, n):
    return np.vander(np.asarray(roots), N=n, increasing=False)


def canonical_chart(p=None, n=None, a=None, tol=None):
    """Canonical coordinates x_i = p(alpha_i) with consistency checks."""
    tol = tol or ToleranceConfig()
    if p is None:
        p = LGPolynomial(int(n), tuple(a))
    n = p.n
    closed = build_closed(p=p, tol=tol)
    roots = closed.roots
    x = np.array([p.eval(r) for r in roots])
    jac = _canonical_jacobian(roots, n)

    # finite differences: move one critical value, pull the coefficient
    # point back by Newton, and compare dp/dx_i with the idempotent
    step = tol.fd_step
    fd_residual = 0.0
    base_coeffs = p.coeffs()
    for i in range(n):
        target = x.copy()
        target[i] += step
        a_new = np.asarray(p.a, dtype=complex).copy()
        ref = roots
        for _ in range(8):
            q = LGPolynomial(n, tuple(a_new))
            r_new = _match_roots(critical_points(q, tol=tol), ref)
            x_new = np.array([q.eval(r) for r in r_new])
            delta = target - x_new
            if float(np.max(np.abs(delta))) < 1e-14:
                break
            a_new = a_new + np.linalg.solve(_canonical_jacobian(r_new, n), delta)
            ref = r_new
        dp = (LGPolynomial(n, tuple(a_new)).coeffs() - base_coeffs) / step
        diff = dp[:n].copy()
        diff -= np.pad(closed.idempotents[i], (0, n - closed.idempotents.shape[1]))
        fd_residual = max(fd_residual, float(np.max(np.abs(diff))), float(np.max(np.abs(dp[n:]))))

    # sum_i mu_i dx^i/da_j must be 1/(n+1) for j = 1 and 0 otherwise
    pairing = closed.mu @ jac
    expect = np.zeros(n, dtype=complex)
    expect[0] = 1.0 / (n + 1)
    form_residual = float(np.max(np.abs(pairing - expect)))
    return CanonicalChart(p, roots, x, closed.mu, jac, fd_residual, form_residual)


def _flat_mixing_matrix(n):
    """Matrix L with t = L tt, tt the raw inversion coefficients.

    Row i (0-based, coordinate t^{i+1}) picks the inversion coefficient
    that makes the pairing the antidiagonal identity: t^1 = -(n+1) tt^n,
    t^n = -tt^1, and t^i = -sqrt(n+1) tt^{n+1-i} in between.  For n = 1
    the single coordinate is -sqrt(2) tt^1.
    """
    L = np.zeros((n, n))
    if n == 1:
        L[0, 0] = -np.sqrt(2.0)
        return L
    L[0, n - 1] = -(n + 1.0)
    L[n - 1, 0] = -1.0
    for i in range(2, n):
        L[i - 1, n - i] = -np.sqrt(n + 1.0)
    return L


@dataclass
class FlatChart:
    """Flat coordinates at a base point.

    ``tangents[k]`` holds the ascending coefficients (length n) of
    dp/dt^{k+1}, ``jacobian_at`` is da/dt, and the metric residuals
    compare the residue pairing of tangents against the constant model:
    antidiagonal 1 in t, antidiagonal (n+1) in the raw coordinates.
    """

    p: LGPolynomial
    ttilde: np.ndarray
    t: np.ndarray
    jacobian_at: np.ndarray
    tangents: np.ndarray
    metric_residual: float
    metric_residual_raw: float
    index_reversal: bool = False

    @property
    def n(self):
        return self.p.n


def _ttilde_jacobian(n, a):
    polys = reversion_polynomials(n)
    a = np.asarray(a, dtype=complex)
    jac = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for k in range(n):
            jac[i, k] = polys[i].diff(k).eval(a)
    return jac


def _pair_polys(u, v, dp, values):
    w = poly_mod(poly_mul(u, v), dp)
    return complex(np.dot(w, values[: len(w)]))


def flat_chart(p=None, n=None, a=None, tol=None, index_reversal=False):
    """Flat coordinates, their tangent polynomials and metric residuals.

    With ``index_reversal`` the coordinate labels run backwards, which
    moves the unit direction from the first slot to the last.
    """
    tol = tol or ToleranceConfig()
    if p is None:
        p = LGPolynomial(int(n), tuple(a))
    n = p.n
    avals = np.asarray(p.a, dtype=complex)
    ttilde = revert_series(p)
    L = _flat_mixing_matrix(n)
    t = L @ ttilde
    jac_ta = L @ _ttilde_jacobian(n, avals)  # dt/da
    jac_at = np.linalg.inv(jac_ta)

    # dp/dt^k = sum_j (da_j/dt^k) z^{n-j}
    tangents = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for j in range(n):
            tangents[k, n - 1 - j] += jac_at[j, k]

    closed = build_closed(p=p, tol=tol)
    values = closed.functional_values
    dp = p.derivative_coeffs()
    flip = np.fliplr(np.eye(n))
    g = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = _pair_polys(tangents[i], tangents[j], dp, values)
    metric_residual = float(np.max(np.abs(g - flip)))

    jac_tta_inv = np.linalg.inv(_ttilde_jacobian(n, avals))
    raw_tangents = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for j in range(n):
            raw_tangents[k, n - 1 - j] += jac_tta_inv[j, k]
    g_raw = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            g_raw[i, j] = g_raw[j, i] = _pair_polys(
                raw_tangents[i], raw_tangents[j], dp, values
            )
    metric_residual_raw = float(np.max(np.abs(g_raw - (n + 1) * flip)))

    if index_reversal:
        t = t[::-1].copy()
        jac_at = jac_at[:, ::-1].copy()
        tangents = tangents[::-1].copy()
    return FlatChart(
        p, ttilde, t, jac_at, tangents, metric_residual, metric_residual_raw,
        index_reversal=index_reversal,
    )


@dataclass
class EulerData:
    """Charges of the grading field: coordinate t^i scales with degree
    d_i = (n+2-i)/(n+1), the field itself has conformal weight
    upsilon = 2/(n+1) - 1, and no coordinate is shifted."""

    n: int
    index_reversal: bool = False
    degrees: np.ndarray = field(init=False)
    shifts: np.ndarray = field(init=False)
    upsilon: float = field(init=False)

    def __post_init__(self):
        n = self.n
        d = np.array([(n + 2.0 - i) / (n + 1.0) for i in range(1, n + 1)])
        if self.index_reversal:
            d = d[::-1].copy()
        self.degrees = d
        self.shifts = np.zeros(n)
        self.upsilon = 2.0 / (n + 1.0) - 1.0


def euler_check(p=None, n=None, a=None, tol=None):
    """Residuals of the grading identities at one base point.

    ``p_identity``: the rescaling of p by the grading field equals
    p - (z/(n+1)) p', coefficient by coefficient.  ``flat_scaling``:
    applying the field to each flat coordinate function of a returns
    d_i times its value.
    """
    tol = tol or ToleranceConfig()
    if p is None:
        p = LGPolynomial(int(n), tuple(a))
    n = p.n
    avals = np.asarray(p.a, dtype=complex)
    weights = np.array([(k + 1.0) / (n + 1.0) for k in range(1, n + 1)])

    # E p: each a_k carries weight (k+1)/(n+1)
    lep = np.zeros(n + 2, dtype=complex)
    for k in range(1, n + 1):
        lep[n - k] = weights[k - 1] * avals[k - 1]
    coeffs = p.coeffs()
    dpc = p.derivative_coeffs()
    rhs = coeffs.copy()
    rhs[1:] -= dpc / (n + 1.0)
    p_identity = float(np.max(np.abs(lep - rhs)))

    # E t^i = d_i t^i through the chain rule in the a variables
    chart = flat_chart(p=p, tol=tol)
    jac_ta = np.linalg.inv(chart.jacobian_at)
    e_vec = weights * avals
    lhs = jac_ta @ e_vec
    d = EulerData(n).degrees
    flat_scaling = float(np.max(np.abs(lhs - d * chart.t)))

    raw = revert_series(p)
    raw_degrees = np.array([(i + 1.0) / (n + 1.0) for i in range(1, n + 1)])
    lhs_raw = _ttilde_jacobian(n, avals) @ e_vec
    raw_scaling = float(np.max(np.abs(lhs_raw - raw_degrees * raw)))
    return {
        "p_identity": p_identity,
        "flat_scaling": flat_scaling,
        "raw_scaling": raw_scaling,
    }


def structure_tensor(p=None, n=None, a=None, chart=None, tol=None):
    """c_ijk = residue pairing of three flat tangent directions."""
    tol = tol or ToleranceConfig()
    if chart is None:
        if p is None:
            p = LGPolynomial(int(n), tuple(a))
        chart = flat_chart(p=p, tol=tol)
    p = chart.p
    n = p.n
    closed = build_closed(p=p, tol=tol)
    values = closed.functional_values
    dp = p.derivative_coeffs()
    c = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            prod = poly_mod(poly_mul(chart.tangents[i], chart.tangents[j]), dp)
            for k in range(j, n):
                c[i, j, k] = _pair_polys(prod, chart.tangents[k], dp, values)
    # fill the remaining slots from the sorted representative
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i, j, k] = c[tuple(sorted((i, j, k)))]
    return c


def coefficients_from_flat(n, t_target, a0=None, tol=None, max_iter=60):
    """Invert the flat coordinate map by Newton iteration."""
    tol = tol or ToleranceConfig()
    t_target = np.asarray(t_target, dtype=complex)
    a = np.zeros(n, dtype=complex) if a0 is None else np.asarray(a0, dtype=complex).copy()
    L = _flat_mixing_matrix(n)
    for _ in range(max_iter):
        polys = reversion_polynomials(n)
        ttilde = np.array([q.eval(a) for q in polys])
        res = t_target - L @ ttilde
        if float(np.max(np.abs(res))) < 1e-13 * max(1.0, float(np.max(np.abs(t_target)))):
            return a
        jac = L @ _ttilde_jacobian(n, a)
        a = a + np.linalg.solve(jac, res)
    raise DegenerateModelError("flat coordinate inversion did not converge")


def sample_charts(n, count, seed=42, tol=None, scale=0.8, index_reversal=False):
    """Random admissible base points with their flat charts.

    Rejects coefficient draws whose critical points collide or whose
    weights leave the window [1e-3, 1e3], so downstream linear algebra
    stays well conditioned.
    """
    tol = tol or ToleranceConfig()
    rng = np.random.default_rng(seed)
    out = []
    guard = 0
    while len(out) < count:
        guard += 1
        if guard > 200 * count:
            raise DegenerateModelError("sampling kept hitting degenerate models")
        a = scale * (rng.normal(size=n) + 1j * rng.normal(size=n))
        p = LGPolynomial(n, tuple(a))
        try:
            roots = critical_points(p, tol=tol)
        except DegenerateModelError:
            continue
        diffs = roots[:, None] - roots[None, :] + np.eye(n)
        mu = 1.0 / ((n + 1) * np.prod(diffs, axis=1))
        if np.min(np.abs(mu)) < 1e-3 or np.max(np.abs(mu)) > 1e3:
            continue
        out.append(flat_chart(p=p, tol=tol, index_reversal=index_reversal))
    return out


def _weighted_exponents(n, total):
    """Exponent tuples m with sum m_i (n + 2 - i) = total."""
    weights = [n + 2 - i for i in range(1, n + 1)]

    def rec(pos, remaining):
        if pos == n:
            return [()] if remaining == 0 else []
        w = weights[pos]
        out = []
        for m in range(remaining // w + 1):
            for rest in rec(pos + 1, remaining - m * w):
                out.append((m,) + rest)
        return out

    return rec(0, total)


@dataclass
class PotentialPoly:
    """Polynomial potential in the flat coordinates.

    ``terms`` maps exponent tuples to coefficients.  The attached
    EulerData fixes the coordinate charges, so quasi-homogeneity is a
    statement about each monomial separately.
    """

    n: int
    terms: dict
    euler: EulerData

    def eval(self, t):
        t = np.asarray(t, dtype=complex)
        total = 0.0 + 0.0j
        for exps, coeff in self.terms.items():
            total += coeff * np.prod(t ** np.array(exps))
        return total

    def third_derivatives(self, t):
        t = np.asarray(t, dtype=complex)
        n = self.n
        out = np.zeros((n, n, n), dtype=complex)
        for exps, coeff in self.terms.items():
            exps = np.array(exps)
            for i in range(n):
                if exps[i] == 0:
                    continue
                ei = exps.copy()
                fi = ei[i]
                ei[i] -= 1
                for j in range(n):
                    if ei[j] == 0:
                        continue
                    ej = ei.copy()
                    fj = ej[j]
                    ej[j] -= 1
                    for k in range(n):
                        if ej[k] == 0:
                            continue
                        ek = ej.copy()
                        fk = ek[k]
                        ek[k] -= 1
                        out[i, j, k] += coeff * fi * fj * fk * np.prod(t**ek)
        return out

    def quasi_homogeneity_residual(self):
        """Worst weighted-degree defect over cubic-and-higher monomials."""
        d = self.euler.degrees
        target = self.euler.upsilon + 3.0
        worst = 0.0
        for exps, coeff in self.terms.items():
            if sum(exps) <= 2:
                continue
            degree = float(np.dot(d, exps))
            worst = max(worst, abs(coeff) * abs(degree - target))
        return worst


def reconstruct_potential(n, sample_count=60, tol=None, seed=42, index_reversal=False):
    """Fit the potential whose third derivatives are the structure tensor.

    The ansatz contains every monomial of weighted degree 2n + 4 in the
    integer weights n + 1, n, ..., 2 (equivalently, Euler degree
    upsilon + 3).  Returns (potential, fit_residual) where the residual
    is the worst defect of the fitted third derivatives against the
    sampled tensor entries.
    """
    tol = tol or ToleranceConfig()
    euler = EulerData(n, index_reversal=index_reversal)
    exponents = _weighted_exponents(n, 2 * n + 4)
    if index_reversal:
        exponents = [tuple(reversed(e)) for e in exponents]
    charts = sample_charts(n, sample_count, seed=seed, tol=tol, index_reversal=index_reversal)
    triples = [(i, j, k) for i in range(n) for j in range(i, n) for k in range(j, n)]
    rows = []
    rhs = []
    for chart in charts:
        c = structure_tensor(chart=chart, tol=tol)
        probe = PotentialPoly(n, {}, euler)
        basis_derivs = []
        for exps in exponents:
            probe.terms = {exps: 1.0}
            basis_derivs.append(probe.third_derivatives(chart.t))
        for i, j, k in triples:
            rows.append([bd[i, j, k] for bd in basis_derivs])
            rhs.append(c[i, j, k])
    design = np.asarray(rows, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    beta, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    fit_residual = float(np.max(np.abs(design @ beta - rhs)))
    terms = {exps: complex(b) for exps, b in zip(exponents, beta)}
    return PotentialPoly(n, terms, euler), fit_residual


def wdvv_check(potential, points, tol=None):
    """Associativity, normalization and quasi-homogeneity residuals.

    ``points`` is an iterable of flat coordinate vectors.  The
    associativity residual contracts two third-derivative tensors with
    the constant inverse metric (the antidiagonal identity) and compares
    the exchange of the two outer slots.  The normalization residual
    compares the third derivatives along the unit direction (first
    coordinate, or last under index reversal) with the metric.  The
    quasi-homogeneity residual is per-monomial and point independent.
    """
    tol = tol or ToleranceConfig()
    n = potential.n
    flip = np.fliplr(np.eye(n))
    unit = n - 1 if potential.euler.index_reversal else 0
    assoc = 0.0
    norm = 0.0
    for t in points:
        d3 = potential.third_derivatives(t)
        left = np.einsum("ijq,qr,klr->ijkl", d3, flip, d3)
        assoc = max(assoc, float(np.max(np.abs(left - left.transpose(2, 1, 0, 3)))))
        norm = max(norm, float(np.max(np.abs(d3[:, :, unit] - flip))))
    rep = VerificationReport(subject="wdvv_n%d" % n, tol=tol.eq_tol)
    rep.residuals["associativity"] = assoc
    rep.residuals["normalization"] = norm
    rep.residuals["quasi_homogeneity"] = potential.quasi_homogeneity_residual()
    return rep


def potential_to_dict(potential):
    return {
        "n": potential.n,
        "index_reversal": bool(potential.euler.index_reversal),
        "monomials": [
            {"exponents": list(exps), "coeff": complex_to_json(coeff)}
            for exps, coeff in sorted(potential.terms.items())
        ],
    }


def potential_from_dict(data):
    n = int(data["n"])
    euler = EulerData(n, index_reversal=bool(data.get("index_reversal", False)))
    terms = {}
    for row in data["monomials"]:
        coeff = row["coeff"]
        terms[tuple(row["exponents"])] = complex(coeff[0], coeff[1])
    return PotentialPoly(n, terms, euler)


def sample_structure_rows(n, count, seed=42, tol=None):
    """Sampled (a, t, c) triples ready for export."""
    charts = sample_charts(n, count, seed=seed, tol=tol)
    rows = []
    for chart in charts:
        c = structure_tensor(chart=chart, tol=tol)
        rows.append(
            {
                "a": np.asarray(chart.p.a, dtype=complex),
                "t": chart.t,
                "c": c.reshape(-1),
            }
        )
    return rows


def export_samples_csv(path, rows):
    """Write sampled structure data as a flat CSV with re/im columns."""
    if not rows:
        raise ValueError("nothing to export")
    n = len(rows[0]["a"])
    header = []
    for j in range(1, n + 1):
        header += ["a%d_re" % j, "a%d_im" % j]
    for j in range(1, n + 1):
        header += ["t%d_re" % j, "t%d_im" % j]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                header += ["c_%d%d%d_re" % (i + 1, j + 1, k + 1), "c_%d%d%d_im" % (i + 1, j + 1, k + 1)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            flat = []
            for key in ("a", "t", "c"):
                for v in row[key]:
                    flat += [repr(float(v.real)), repr(float(v.imag))]
            writer.writerow(flat)


def export_samples_json(path, rows):
    import json

    payload = [
        {
            "a": complex_to_json(row["a"]),
            "t": complex_to_json(row["t"]),
            "c": complex_to_json(row["c"]),
        }
        for row in rows
    ]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def structure_gradient_residual(chart, tol=None):
    """Symmetry defect of the flat gradient of the structure tensor.

    Central differences of c_ijk along t^l are compared against the
    derivative along t^i of c_ljk: total symmetry of the four-index
    array is what makes a potential exist locally.
    """
    tol = tol or ToleranceConfig()
    n = chart.n
    step = tol.fd_step
    a0 = np.asarray(chart.p.a, dtype=complex)
    grad = np.zeros((n, n, n, n), dtype=complex)
    for l in range(n):
        shift = np.zeros(n, dtype=complex)
        shift[l] = step
        a_plus = coefficients_from_flat(n, chart.t + shift, a0=a0, tol=tol)
        a_minus = coefficients_from_flat(n, chart.t - shift, a0=a0, tol=tol)
        c_plus = structure_tensor(n=n, a=a_plus, tol=tol)
        c_minus = structure_tensor(n=n, a=a_minus, tol=tol)
        grad[l] = (c_plus - c_minus) / (2 * step)
    residual = 0.0
    for perm in ((1, 0, 2, 3), (2, 1, 0, 3), (3, 1, 2, 0)):
        residual = max(residual, float(np.max(np.abs(grad - grad.transpose(perm)))))
    return residual
