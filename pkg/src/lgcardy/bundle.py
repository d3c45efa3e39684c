"""Boundary frame bundle over the deformation space and the two-route check.

A quaternion model carries one boundary block per critical point.  As
the polynomial moves, the natural basis of each block keeps its shape
but its scale rho drifts with the critical value data.  The frame kept
here rescales block i by lambda_i = sqrt(rho_base / rho), which pins the
boundary pairing to its value at the base point exactly; the alternative
scale lambda_i = rho_base / rho (enabled with ``paper_scale``) makes the
transfer tensor a gradient in the flat directions instead, at the price
of a drifting pairing.

From the frame the module assembles a truncated two-alphabet potential
series: bulk structure constants in flat coordinates, the constant
pairings as quadratic terms, the bulk-boundary transfer as the mixed
block, and the boundary triple pairing as the cubic boundary block.
``verify_bundle`` then checks the same model along two independent
routes: the seven formal conditions on the series, and the pointwise
algebra axioms at the base point, and reports whether the verdicts
agree.  Controlled corruptions of single axioms are provided to confirm
that each failure surfaces in the predicted condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb

import numpy as np

from .polycore import (
    DegenerateModelError,
    LGPolynomial,
    ToleranceConfig,
    poly_eval,
)
from .frobenius import (
    FiniteAlgebra,
    FrobeniusPair,
    VerificationReport,
    quaternion_pair,
    verify_frobenius,
)
from .cardy import CardyFrobeniusAlgebra, verify_cardy_frobenius
from .landau_ginzburg import build_closed, build_quaternion_model
from .moduli import (
    coefficients_from_flat,
    flat_chart,
    reconstruct_potential,
    structure_tensor,
)
from .tensor_series import TensorSeries, encode_symmetric, ext_wdvv_check

__all__ = [
    "CORRUPTIONS",
    "PREDICTED_CONDITION",
    "FrameData",
    "BundleTensors",
    "BundleReport",
    "flat_s_frame",
    "bundle_tensors",
    "assemble_potential",
    "corrupt_model",
    "verify_bundle",
]

CORRUPTIONS = (
    "t_symmetry",
    "b_associativity",
    "centrality",
    "homomorphism",
    "cardy",
)

# Smallest-index series condition that each corruption drives above
# tolerance.  phi_swap is an extra negative control: swapping two block
# targets keeps phi a genuine central homomorphism, so the mixed-block
# conditions stay balanced and the failure surfaces only in the
# transfer-anchored condition, where the bulk weight mu_b meets the
# boundary weight of the wrong block.
PREDICTED_CONDITION = {
    "t_symmetry": "condition_1",
    "b_associativity": "condition_4",
    "centrality": "condition_5",
    "homomorphism": "condition_6",
    "phi_swap": "condition_7",
    "cardy": "condition_7",
}

_QUATERNION_SIGNS = np.array([2.0, -2.0, -2.0, -2.0])


@dataclass
class FrameData:
    """Continued boundary frame at one nearby polynomial."""

    a: np.ndarray
    roots: np.ndarray
    mu: np.ndarray
    rho: np.ndarray
    scales: np.ndarray
    b_gram: np.ndarray
    drift: float
    paper_scale: bool


def _match_permutation(roots, ref, sep_tol):
    """Index of the root nearest each reference root, demanded bijective.

    Two candidate roots at the same distance (within sep_tol) make the
    continuation ambiguous, as does any non-bijective assignment.
    """
    perm = np.zeros(len(ref), dtype=int)
    taken = set()
    for i, r in enumerate(ref):
        dist = np.abs(roots - r)
        order = np.argsort(dist)
        j = int(order[0])
        if len(dist) > 1 and dist[order[1]] - dist[order[0]] < sep_tol:
            raise DegenerateModelError("frame continuation failed")
        if j in taken:
            raise DegenerateModelError("frame continuation failed")
        taken.add(j)
        perm[i] = j
    return perm


def _block_gram(rho, scales):
    n = len(rho)
    g = np.zeros((4 * n, 4 * n), dtype=complex)
    for i in range(n):
        g[4 * i : 4 * i + 4, 4 * i : 4 * i + 4] = np.diag(
            scales[i] ** 2 * rho[i] * _QUATERNION_SIGNS
        )
    return g


def flat_s_frame(model, q, tol=None, paper_scale=False):
    """Continue the boundary frame from the base model to a nearby point.

    ``q`` is the target polynomial, given either as an LGPolynomial or
    as its deformation coefficients.  Critical points are matched to the
    base point by nearest neighbour (an ambiguous match raises
    DegenerateModelError) and the square roots rho keep the sign
    closest to the base values.
    """
    tol = tol or ToleranceConfig()
    n = model.n
    if isinstance(q, LGPolynomial):
        q = q.a
    a_q = np.asarray(q, dtype=complex)
    closed_q = build_closed(n=n, a=tuple(a_q), tol=tol)
    perm = _match_permutation(closed_q.roots, model.closed.roots, tol.root_sep_tol)
    roots = closed_q.roots[perm]
    mu = closed_q.mu[perm]
    rho = np.sqrt(mu.astype(complex))
    flip = np.abs(rho - model.rho) > np.abs(-rho - model.rho)
    rho = np.where(flip, -rho, rho)
    if paper_scale:
        scales = model.rho / rho
    else:
        scales = np.sqrt((model.rho / rho).astype(complex))
    gram = _block_gram(rho, scales)
    base = _block_gram(model.rho, np.ones(n))
    drift = float(np.max(np.abs(gram - base)))
    return FrameData(a_q, roots, mu, rho, scales, gram, drift, paper_scale)


@dataclass
class BundleTensors:
    """Boundary structure tensors at one point, in the continued frame.

    ``cB[u, v, w]`` pairs the product of two frame vectors against a
    third; it is block diagonal and each block carries the quaternion
    table scaled by the cube of the frame factor.  ``cAB[k, u]`` pairs
    the image of a flat tangent direction against a frame vector and is
    supported on the unit letter of each block.
    """

    cB: np.ndarray
    cAB: np.ndarray


def _quaternion_cubic(rho):
    pair = quaternion_pair(rho)
    mul = pair.algebra.mul
    return np.einsum("uvq,qwr,r->uvw", mul, mul, pair.functional)


def bundle_tensors(model, q=None, frame=None, tol=None):
    """Structure tensors of the boundary sector at a nearby point.

    ``q`` gives the deformation coefficients of the target polynomial
    (default: the base point itself); alternatively pass an existing
    ``frame`` from flat_s_frame.  The tensors are expressed in the
    transported frame vectors lambda_i V e_i.
    """
    tol = tol or ToleranceConfig()
    n = model.n
    if frame is None:
        if isinstance(q, LGPolynomial):
            q = q.a
        a_q = model.p.a if q is None else q
        frame = flat_s_frame(model, np.asarray(a_q, dtype=complex), tol=tol)
    m = 4 * n
    cb = np.zeros((m, m, m), dtype=complex)
    for i in range(n):
        block = frame.scales[i] ** 3 * _quaternion_cubic(frame.rho[i])
        sl = slice(4 * i, 4 * i + 4)
        cb[sl, sl, sl] = block
    cab = _frame_transfer(frame, tol)
    return BundleTensors(cB=cb, cAB=cab)


def _tensors_from_cf(model, chart, cf, tol):
    """Constant tensors of the series at the base point, from Cardy data.

    Returns the boundary pairing, the boundary triple pairing
    l((f_u f_v) f_w) with this fixed association order, and the transfer
    matrix pairing each flat tangent direction against the boundary
    basis.  All three are derived from the Cardy data, so a corrupted
    copy flows into the assembled series.
    """
    n = model.n
    mulb = cf.b.algebra.mul
    lb = cf.b.functional
    gram = cf.b.gram()
    cubic = np.einsum("uvq,qwr,r->uvw", mulb, mulb, lb)
    tangent_values = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for i in range(n):
            tangent_values[k, i] = poly_eval(chart.tangents[k], model.closed.roots[i])
    transfer = np.zeros((n, 4 * n), dtype=complex)
    for k in range(n):
        image = cf.phi @ tangent_values[k]
        transfer[k] = np.einsum("p,puq,q->u", image, mulb, lb)
    return {"b_gram": gram, "boundary_cubic": cubic, "transfer": transfer}


def _frame_transfer(frame, tol):
    """Transfer matrix at a continued frame away from the base point."""
    n = len(frame.mu)
    chart_q = flat_chart(n=n, a=tuple(frame.a), tol=tol)
    cab = np.zeros((n, 4 * n), dtype=complex)
    for k in range(n):
        for i in range(n):
            u = poly_eval(chart_q.tangents[k], frame.roots[i])
            cab[k, 4 * i] = frame.scales[i] * 2.0 * frame.rho[i] * u
    return cab


def _transfer_at_shift(model, chart, l, h, tol, paper_scale):
    t = np.asarray(chart.t, dtype=complex).copy()
    t[l] += h
    a_q = coefficients_from_flat(model.n, t, a0=model.p.a, tol=tol)
    frame = flat_s_frame(model, a_q, tol=tol, paper_scale=paper_scale)
    return _frame_transfer(frame, tol)


def _transfer_derivative(model, chart, tol, paper_scale):
    """First transfer derivative along each flat direction.

    Symmetric divided differences at steps h and h/2 combined by
    Richardson extrapolation, which cancels the leading h^2 error term.
    """
    n = model.n
    h = tol.fd_step
    dcab = np.zeros((n, n, 4 * n), dtype=complex)
    for l in range(n):
        coarse = (
            _transfer_at_shift(model, chart, l, h, tol, paper_scale)
            - _transfer_at_shift(model, chart, l, -h, tol, paper_scale)
        ) / (2.0 * h)
        fine = (
            _transfer_at_shift(model, chart, l, h / 2.0, tol, paper_scale)
            - _transfer_at_shift(model, chart, l, -h / 2.0, tol, paper_scale)
        ) / h
        dcab[l] = (4.0 * fine - coarse) / 3.0
    return dcab


_POTENTIAL_CACHE = {}


def _cached_potential(n, tol):
    if n not in _POTENTIAL_CACHE:
        _POTENTIAL_CACHE[n] = reconstruct_potential(n, tol=tol)[0]
    return _POTENTIAL_CACHE[n]


def _shift_terms(terms, center):
    """Exponent dictionary of F(t + center) from that of F(t)."""
    out = {}
    for exps, coeff in terms.items():
        for pick in product(*[range(e + 1) for e in exps]):
            c = coeff
            for e, k, c0 in zip(exps, pick, center):
                c *= comb(e, k) * c0 ** (e - k)
            if c != 0.0:
                out[pick] = out.get(pick, 0.0) + c
    return out


def assemble_potential(model, t_degree=4, tol=None, mixed_taylor_order=0,
                       paper_scale=False, cf=None):
    """Truncated potential series of a model at its own base point.

    The degree-two part is the constant pairing data by convention; the
    bulk cubic block is the structure tensor in flat coordinates (for a
    truncation above 4 the recentred global bulk potential supplies all
    bulk orders).  The mixed block integrates the transfer tensor with
    zero constant term; by default only its value at the base point is
    used (a linear mixed polynomial), which is the order every model
    supports.  ``mixed_taylor_order=1`` appends the first transfer
    derivative after checking that the mixed partial derivatives
    commute (path independence of the integration); the form-preserving
    frame scale fails that check, so the closed scale (``paper_scale``)
    is required, and a violation raises DegenerateModelError
    ("transition tensor not closed").
    """
    tol = tol or ToleranceConfig()
    if t_degree < 3:
        raise ValueError("t-degree must be at least 3")
    if mixed_taylor_order not in (0, 1):
        raise ValueError("mixed taylor order above 1 not supported")
    n = model.n
    m = 4 * n
    chart = flat_chart(p=model.p, tol=tol)
    tensors = _tensors_from_cf(model, chart, model.cf if cf is None else cf, tol)
    series = TensorSeries(n, m, t_degree)

    if t_degree <= 4:
        c3 = structure_tensor(chart=chart, tol=tol)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    series.add_term((i, j, k), (), c3[i, j, k] / 6.0)
    else:
        bulk = _cached_potential(n, tol)
        shifted = _shift_terms(bulk.terms, np.asarray(chart.t, dtype=complex))
        higher = {e: c for e, c in shifted.items() if 3 <= sum(e) <= t_degree}
        series = series + encode_symmetric(higher, n, m, t_degree)

    flip = np.fliplr(np.eye(n))
    for i in range(n):
        for j in range(n):
            if flip[i, j]:
                series.add_term((i, j), (), 0.5 * flip[i, j])
    gram = tensors["b_gram"]
    cubic = tensors["boundary_cubic"]
    transfer = tensors["transfer"]
    for u in range(m):
        for v in range(m):
            if gram[u, v] != 0.0:
                series.add_term((), (u, v), gram[u, v])
            for w in range(m):
                if cubic[u, v, w] != 0.0:
                    series.add_term((), (u, v, w), cubic[u, v, w] / 3.0)
    for k in range(n):
        for u in range(m):
            if transfer[k, u] != 0.0:
                series.add_term((k,), (u,), transfer[k, u])

    if mixed_taylor_order == 1:
        dcab = _transfer_derivative(model, chart, tol, paper_scale)
        curl = float(np.max(np.abs(dcab - dcab.transpose(1, 0, 2))))
        if curl > 100.0 * tol.fd_step:
            raise DegenerateModelError("transition tensor not closed")
        sym = 0.5 * (dcab + dcab.transpose(1, 0, 2))
        for k in range(n):
            for l in range(n):
                for u in range(m):
                    if sym[k, l, u] != 0.0:
                        series.add_term((k, l), (u,), 0.5 * sym[k, l, u])
    return series


def _corrupt_cf(cf, n, corruption, eps):
    mula = cf.a.algebra.mul.copy()
    la = cf.a.functional.copy()
    mulb = cf.b.algebra.mul.copy()
    lb = cf.b.functional.copy()
    phi = cf.phi.copy()
    if corruption == "t_symmetry":
        if n < 2:
            raise ValueError("t_symmetry corruption needs at least two bulk directions")
        mula[0, 1, 0] += eps
    elif corruption == "b_associativity":
        mulb[1, 2, 2] += eps
    elif corruption == "centrality":
        phi[:, 0] = 0.0
        phi[0, 0] = 0.5
        phi[1, 0] = 0.5j
    elif corruption == "homomorphism":
        if n < 2:
            raise ValueError("homomorphism corruption needs at least two blocks")
        phi[4, 0] += eps
    elif corruption == "phi_swap":
        if n < 2:
            raise ValueError("phi_swap corruption needs at least two blocks")
        phi[:, [0, 1]] = phi[:, [1, 0]]
    elif corruption == "cardy":
        lb[:4] *= 1.0 + eps
    else:
        raise ValueError("unknown corruption %r" % (corruption,))
    alga = cf.a.algebra
    algb = cf.b.algebra
    a_pair = FrobeniusPair(
        FiniteAlgebra(mula, alga.unit.copy(), alga.labels, alga.blocks),
        la, name=cf.a.name,
    )
    b_pair = FrobeniusPair(
        FiniteAlgebra(mulb, algb.unit.copy(), algb.labels, algb.blocks),
        lb, name=cf.b.name,
    )
    return CardyFrobeniusAlgebra(a_pair, b_pair, phi, name=cf.name + "+" + corruption)


def corrupt_model(model, corruption, eps=0.05):
    """Copy of the base-point Cardy data with one axiom deliberately broken.

    t_symmetry      bulk product loses commutativity (the series route
                    additionally receives an order-asymmetric bump);
    b_associativity the first boundary block's product of I and J gains
                    a spurious J component;
    centrality      the first bulk idempotent maps to a genuine but
                    non-central idempotent (1 + iI)/2;
    homomorphism    the first bulk idempotent leaks into the unit of the
                    second block;
    phi_swap        the first two bulk idempotents map onto each other's
                    blocks; phi stays a genuine central homomorphism,
                    but the transfer identity pairs each block against
                    the wrong bulk weight;
    cardy           the boundary functional of the first block is
                    rescaled by 1 + eps.
    """
    return _corrupt_cf(model.cf, model.n, corruption, eps)


def _pointwise_facts(cf, tol):
    """The five pointwise algebra facts checked at every sample point."""
    rep = verify_cardy_frobenius(cf, tol=tol)
    r = rep.residuals
    facts = {
        "a_associativity": max(
            cf.a.algebra.associator_residual(), r["commutativity"]
        ),
        "b_associativity": cf.b.algebra.associator_residual(),
        "centrality": r["centrality"],
        "homomorphism": max(r["homomorphism"], r["unit_preservation"]),
        "cardy": max(r["cardy_trace"], r["cardy_coordinate"]),
    }
    return facts, rep.margins


@dataclass
class BundleReport:
    """Two-route verdict for one model."""

    n: int
    a: tuple
    t_degree: int
    corruption: object
    paper_scale: bool
    conditions: object
    pointwise: object
    pointwise_cardy: object
    pointwise_bulk: object
    pointwise_boundary: object
    frame_drift: float
    frame_scale_spread: float
    frame_scales: tuple
    routes_agree: bool

    @property
    def series_passed(self):
        return self.conditions.passed

    @property
    def pointwise_passed(self):
        return (
            self.pointwise.passed
            and self.pointwise_cardy.passed
            and self.pointwise_bulk.passed
            and self.pointwise_boundary.passed
        )

    @property
    def passed(self):
        return self.series_passed and self.pointwise_passed and self.routes_agree

    def summary(self):
        lines = [
            "bundle n=%d corruption=%s: series %s, pointwise %s, routes %s"
            % (
                self.n,
                self.corruption or "none",
                "pass" if self.series_passed else "FAIL",
                "pass" if self.pointwise_passed else "FAIL",
                "agree" if self.routes_agree else "DISAGREE",
            ),
            "  frame drift %.3e, scale spread %.3e" % (self.frame_drift, self.frame_scale_spread),
        ]
        lines.append(self.conditions.summary())
        lines.append(self.pointwise.summary())
        return "\n".join(lines)

    def to_dict(self):
        return {
            "n": self.n,
            "a": [[z.real, z.imag] for z in map(complex, self.a)],
            "t_degree": self.t_degree,
            "corruption": self.corruption,
            "paper_scale": self.paper_scale,
            "routes_agree": self.routes_agree,
            "series_passed": self.series_passed,
            "pointwise_passed": self.pointwise_passed,
            "frame_drift": self.frame_drift,
            "frame_scale_spread": self.frame_scale_spread,
            "frame_scales": [[z.real, z.imag] for z in map(complex, self.frame_scales)],
            "conditions": self.conditions.to_dict(),
            "pointwise": self.pointwise.to_dict(),
            "pointwise_cardy": self.pointwise_cardy.to_dict(),
            "pointwise_bulk": self.pointwise_bulk.to_dict(),
            "pointwise_boundary": self.pointwise_boundary.to_dict(),
        }


def verify_bundle(model, t_degree=4, sample_points=10, sample_distance=1e-2,
                  tol=None, corruption=None, eps=0.05, paper_scale=False,
                  seed=0):
    """Check one model along the series route and the pointwise route.

    The series route assembles the truncated potential once at the base
    point and evaluates the seven conditions.  The pointwise route runs
    five algebra facts (bulk associativity, boundary associativity,
    centrality, homomorphism, transfer identity) on the base-point Cardy
    data and again on freshly built models at ``sample_points`` random
    flat displacements of the given distance, keeping the worst residual
    of each fact.  Both routes see the same corrupted primitives, the
    corruption being reapplied at every sample point.  The same sweep
    records the frame pairing drift and the frame scale spread.
    """
    tol = tol or ToleranceConfig()
    cf = model.cf if corruption is None else corrupt_model(model, corruption, eps=eps)
    series = assemble_potential(
        model, t_degree=t_degree, tol=tol, paper_scale=paper_scale, cf=cf
    )
    if corruption == "t_symmetry":
        series.add_term((0, 0, 1), (), eps)
        series.add_term((0, 1, 0), (), -eps)
    conditions = ext_wdvv_check(series, tol=tol)
    cardy_rep = verify_cardy_frobenius(cf, tol=tol)
    bulk_rep = verify_frobenius(cf.a, tol=tol, commutative=True)
    boundary_rep = verify_frobenius(cf.b, tol=tol)

    facts, margins = _pointwise_facts(cf, tol)
    rng = np.random.default_rng(seed)
    chart = flat_chart(p=model.p, tol=tol)
    drift = 0.0
    spread = 0.0
    scales = tuple(np.ones(model.n, dtype=complex))
    for _ in range(sample_points):
        step = rng.standard_normal(model.n)
        step /= np.linalg.norm(step)
        t = np.asarray(chart.t, dtype=complex) + sample_distance * step
        a_q = coefficients_from_flat(model.n, t, a0=model.p.a, tol=tol)
        frame = flat_s_frame(model, a_q, tol=tol, paper_scale=paper_scale)
        if frame.drift >= drift:
            drift = frame.drift
            scales = tuple(frame.scales)
        spread = max(spread, float(np.max(np.abs(frame.scales - 1.0))))
        model_q = build_quaternion_model(
            n=model.n, a=tuple(a_q), branch=model.branch, tol=tol
        )
        cf_q = model_q.cf
        if corruption is not None:
            cf_q = _corrupt_cf(cf_q, model.n, corruption, eps)
        facts_q, margins_q = _pointwise_facts(cf_q, tol)
        for name in facts:
            facts[name] = max(facts[name], facts_q[name])
        for name in margins:
            margins[name] = min(margins[name], margins_q[name])
    pointwise = VerificationReport(
        "pointwise axioms (%d sample points)" % sample_points,
        tol.eq_tol, facts, margins,
    )

    series_ok = conditions.passed
    pointwise_ok = (
        pointwise.passed
        and cardy_rep.passed
        and bulk_rep.passed
        and boundary_rep.passed
    )
    return BundleReport(
        n=model.n,
        a=model.p.a,
        t_degree=t_degree,
        corruption=corruption,
        paper_scale=paper_scale,
        conditions=conditions,
        pointwise=pointwise,
        pointwise_cardy=cardy_rep,
        pointwise_bulk=bulk_rep,
        pointwise_boundary=boundary_rep,
        frame_drift=drift,
        frame_scale_spread=spread,
        frame_scales=scales,
        routes_agree=(series_ok == pointwise_ok),
    )
