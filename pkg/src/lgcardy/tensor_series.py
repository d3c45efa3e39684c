"""Formal tensor series in two alphabets and the seven flatness conditions.

A series lives in the tensor algebra on letters t^0 .. t^{n-1} and
s^0 .. s^{m-1}; a monomial is an ordered t-word followed by an ordered
s-word, and the series is truncated at a fixed total word length.
Derivatives delete letters: d_t and d_s remove a single occurrence,
while the cyclic third derivative d_sss removes an ordered triple
(i, j, r) from every cyclic rotation of the s-word that starts at an
occurrence of i.  Two monomials are equivalent when their words agree
as multisets; projecting onto equivalence classes is multiplicative,
so the seven quadratic conditions on a potential series are evaluated
in the class algebra.

Conditions, stated on the class projections with Fa and Fb the inverse
quadratic blocks:

1. coefficients are invariant under permutations of the t-word;
2. both quadratic blocks are invertible;
3. t-associativity: sum_pq T3_ijp Fa^pq T3_qkl is symmetric in i <-> k;
4. s-associativity: sum_pq S3_ijp Fb^pq S3_qkl equals
   sum_pq S3_lip Fb^pq S3_qjk;
5. centrality: sum_pq M2_kp Fb^pq S3_qij is symmetric in i <-> j;
6. transfer compatibility: sum_pq M2_pk Fa^pq T3_qij equals
   sum M2_ip Fb^pq S3_qkr Fb^rl M2_jl;
7. trace identity: sum_pq M2_pu Fa^pq M2_qv equals
   sum S3_upr Fb^rl Fb^pq S3_lvq;

with T3 the triple t-derivative, S3 the cyclic s-derivative, and M2 the
mixed second derivative.  Each condition is asserted on classes whose
degree is below truncation - 3, the largest window the truncated data
determines exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .polycore import ToleranceConfig
from .frobenius import VerificationReport, nondegeneracy_margin

__all__ = [
    "TensorSeries",
    "ClassSeries",
    "d_t",
    "d_s",
    "d_sss",
    "project",
    "encode_symmetric",
    "quadratic_t_block",
    "quadratic_s_block",
    "ext_wdvv_check",
    "series_to_dict",
    "series_from_dict",
]


@dataclass
class TensorSeries:
    """Truncated series with ordered (t-word, s-word) monomials."""

    n: int
    m: int
    truncation: int
    terms: dict = field(default_factory=dict)

    def add_term(self, tword, sword, coeff):
        if len(tword) + len(sword) > self.truncation:
            return
        key = (tuple(tword), tuple(sword))
        value = self.terms.get(key, 0.0) + coeff
        if value == 0.0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = value

    def coefficient(self, tword, sword):
        return self.terms.get((tuple(tword), tuple(sword)), 0.0)

    def copy(self):
        return TensorSeries(self.n, self.m, self.truncation, dict(self.terms))

    def __add__(self, other):
        out = self.copy()
        for (tw, sw), c in other.terms.items():
            out.add_term(tw, sw, c)
        return out

    def scale(self, factor):
        return TensorSeries(
            self.n, self.m, self.truncation,
            {k: v * factor for k, v in self.terms.items()},
        )

    def t_part(self):
        """Sub-series of monomials with empty s-word."""
        return TensorSeries(
            self.n, self.m, self.truncation,
            {k: v for k, v in self.terms.items() if not k[1]},
        )


def d_t(series, i):
    """Delete one occurrence of t^i from every monomial, in every way."""
    out = TensorSeries(series.n, series.m, series.truncation)
    for (tw, sw), c in series.terms.items():
        for pos, letter in enumerate(tw):
            if letter == i:
                out.add_term(tw[:pos] + tw[pos + 1 :], sw, c)
    return out


def d_s(series, j):
    """Delete one occurrence of s^j from every monomial, in every way."""
    out = TensorSeries(series.n, series.m, series.truncation)
    for (tw, sw), c in series.terms.items():
        for pos, letter in enumerate(sw):
            if letter == j:
                out.add_term(tw, sw[:pos] + sw[pos + 1 :], c)
    return out


def d_sss(series, i, j, r):
    """Cyclic triple s-derivative.

    For every monomial and every cyclic rotation of its s-word that
    begins with the letter i, each ordered pair of later positions
    carrying j then r contributes the rotated word with those three
    letters removed.
    """
    out = TensorSeries(series.n, series.m, series.truncation)
    for (tw, sw), c in series.terms.items():
        ell = len(sw)
        if ell < 3:
            continue
        for start in range(ell):
            rot = sw[start:] + sw[:start]
            if rot[0] != i:
                continue
            for p in range(1, ell):
                if rot[p] != j:
                    continue
                for q in range(p + 1, ell):
                    if rot[q] != r:
                        continue
                    rest = rot[1:p] + rot[p + 1 : q] + rot[q + 1 :]
                    out.add_term(tw, rest, c)
    return out


@dataclass
class ClassSeries:
    """Series on multiset classes; keys are (sorted t-word, sorted s-word)."""

    truncation: int
    terms: dict = field(default_factory=dict)

    def add_term(self, tkey, skey, coeff):
        if len(tkey) + len(skey) > self.truncation:
            return
        key = (tuple(tkey), tuple(skey))
        value = self.terms.get(key, 0.0) + coeff
        if value == 0.0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = value

    def copy(self):
        return ClassSeries(self.truncation, dict(self.terms))

    def accumulate(self, other, factor=1.0):
        for (tk, sk), c in other.terms.items():
            self.add_term(tk, sk, c * factor)

    def mul(self, other):
        """Class product: multiset union of the words, truncated."""
        trunc = min(self.truncation, other.truncation)
        out = ClassSeries(trunc)
        for (t1, s1), c1 in self.terms.items():
            for (t2, s2), c2 in other.terms.items():
                out.add_term(tuple(sorted(t1 + t2)), tuple(sorted(s1 + s2)), c1 * c2)
        return out

    def restrict(self, max_degree):
        return ClassSeries(
            max_degree,
            {
                k: v
                for k, v in self.terms.items()
                if len(k[0]) + len(k[1]) <= max_degree
            },
        )

    def difference_norm(self, other):
        keys = set(self.terms) | set(other.terms)
        worst = 0.0
        for k in keys:
            worst = max(worst, abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)))
        return worst


def project(series):
    """Sum coefficients over monomials with equal word multisets."""
    out = ClassSeries(series.truncation)
    for (tw, sw), c in series.terms.items():
        out.add_term(tuple(sorted(tw)), tuple(sorted(sw)), c)
    return out


def encode_symmetric(exponent_terms, n, m, truncation):
    """Spread a classical polynomial over ordered words.

    ``exponent_terms`` maps exponent tuples (length n) to coefficients.
    Each monomial is distributed evenly over its distinct orderings, so
    d_t of the encoding equals the encoding of the partial derivative.
    """
    out = TensorSeries(n, m, truncation)
    for exps, coeff in exponent_terms.items():
        word = []
        for letter, mult in enumerate(exps):
            word.extend([letter] * mult)
        if len(word) > truncation:
            continue
        distinct = set(permutations(word))
        share = coeff / len(distinct)
        for w in distinct:
            out.add_term(w, (), share)
    return out


def quadratic_t_block(series):
    """Matrix of second t-derivatives of the constant part."""
    n = series.n
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        di = d_t(series, i)
        for j in range(n):
            out[i, j] = complex(d_t(di, j).coefficient((), ()))
    return out


def quadratic_s_block(series):
    """Half the matrix of second s-derivatives of the constant part."""
    m = series.m
    out = np.zeros((m, m), dtype=complex)
    for i in range(m):
        di = d_s(series, i)
        for j in range(m):
            out[i, j] = 0.5 * complex(d_s(di, j).coefficient((), ()))
    return out


def _condition_one(series):
    """Worst deviation of a coefficient from its t-permutation mean."""
    groups = {}
    for (tw, sw), c in series.terms.items():
        if len(tw) < 2:
            continue
        groups.setdefault((tuple(sorted(tw)), sw), []).append((tw, c))
    worst = 0.0
    for (tkey, sw), entries in groups.items():
        words = set(permutations(tkey))
        lookup = dict(entries)
        values = np.array([lookup.get(w, 0.0) for w in words], dtype=complex)
        mean = values.mean()
        worst = max(worst, float(np.max(np.abs(values - mean))))
    return worst


def _contract_series_matrix(tensors, matrix, axis_dim):
    """sum_p tensors[p] * matrix[p, q] for each q, tensors class-valued."""
    out = []
    for q in range(axis_dim):
        acc = ClassSeries(tensors[0].truncation)
        for p in range(axis_dim):
            fac = matrix[p, q]
            if fac != 0.0:
                acc.accumulate(tensors[p], fac)
        out.append(acc)
    return out


def _scalar_conditions(rep, t3, s3, m2, fa, fb, window0=True):
    """Conditions 3-7 as plain tensor contractions (degree-zero window)."""
    lhs3 = np.einsum("ijp,pq,qkl->ijkl", t3, fa, t3)
    rep.residuals["condition_3"] = float(
        np.max(np.abs(lhs3 - lhs3.transpose(2, 1, 0, 3))) if t3.size else 0.0
    )
    if s3 is None:
        for key in ("condition_4", "condition_5", "condition_6", "condition_7"):
            rep.residuals[key] = 0.0
        return
    lhs4 = np.einsum("ijp,pq,qkl->ijkl", s3, fb, s3)
    rhs4 = np.einsum("lip,pq,qjk->ijkl", s3, fb, s3)
    rep.residuals["condition_4"] = float(np.max(np.abs(lhs4 - rhs4)))
    w5 = m2 @ fb
    lhs5 = np.einsum("kq,qij->kij", w5, s3)
    rep.residuals["condition_5"] = float(
        np.max(np.abs(lhs5 - lhs5.transpose(0, 2, 1)))
    )
    lhs6 = np.einsum("pk,pq,qij->kij", m2, fa, t3)
    rhs6 = np.einsum("ip,pq,qkr,rl,jl->kij", m2, fb, s3, fb, m2)
    rep.residuals["condition_6"] = float(np.max(np.abs(lhs6 - rhs6)))
    lhs7 = np.einsum("pu,pq,qv->uv", m2, fa, m2)
    rhs7 = np.einsum("upr,rl,pq,lvq->uv", s3, fb, fb, s3)
    rep.residuals["condition_7"] = float(np.max(np.abs(lhs7 - rhs7)))


def _series_conditions(rep, t3, s3, m2, fa, fb, window, n, m):
    """Conditions 3-7 on class series (window degree 1 or more)."""
    u3 = [[_contract_series_matrix(t3[i][j], fa, n) for j in range(n)] for i in range(n)]
    lhs3 = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    acc = ClassSeries(window)
                    for q in range(n):
                        acc.accumulate(u3[i][j][q].mul(t3[q][k][l]))
                    lhs3[(i, j, k, l)] = acc
    res3 = 0.0
    for (i, j, k, l), val in lhs3.items():
        res3 = max(res3, val.difference_norm(lhs3[(k, j, i, l)]))
    rep.residuals["condition_3"] = res3

    if s3 is None:
        for key in ("condition_4", "condition_5", "condition_6", "condition_7"):
            rep.residuals[key] = 0.0
        return

    # condition 4: cyclic exchange on the boundary side
    v4 = [[_contract_series_matrix(s3[i][j], fb, m) for j in range(m)] for i in range(m)]
    res4 = 0.0
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    lhs = ClassSeries(window)
                    for q in range(m):
                        lhs.accumulate(v4[i][j][q].mul(s3[q][k][l]))
                    rhs = ClassSeries(window)
                    for q in range(m):
                        rhs.accumulate(v4[l][i][q].mul(s3[q][j][k]))
                    res4 = max(res4, lhs.difference_norm(rhs))
    rep.residuals["condition_4"] = res4

    # condition 5: the two inner s-slots commute through the transfer
    w5 = [_contract_series_matrix(m2[k], fb, m) for k in range(n)]
    res5 = 0.0
    for k in range(n):
        for i in range(m):
            for j in range(m):
                lhs = ClassSeries(window)
                rhs = ClassSeries(window)
                for q in range(m):
                    lhs.accumulate(w5[k][q].mul(s3[q][i][j]))
                    rhs.accumulate(w5[k][q].mul(s3[q][j][i]))
                res5 = max(res5, lhs.difference_norm(rhs))
    rep.residuals["condition_5"] = res5

    # condition 6: transfer of bulk multiplication to the boundary
    res6 = 0.0
    x6 = []
    for k in range(m):
        col = []
        for q in range(n):
            acc = ClassSeries(window)
            for p in range(n):
                fac = fa[p, q]
                if fac != 0.0:
                    acc.accumulate(m2[p][k], fac)
            col.append(acc)
        x6.append(col)
    y6 = [_contract_series_matrix(m2[i], fb, m) for i in range(n)]
    z6 = []
    for j in range(n):
        row = []
        for r in range(m):
            acc = ClassSeries(window)
            for l in range(m):
                fac = fb[r, l]
                if fac != 0.0:
                    acc.accumulate(m2[j][l], fac)
            row.append(acc)
        z6.append(row)
    for k in range(m):
        for i in range(n):
            for j in range(n):
                lhs = ClassSeries(window)
                for q in range(n):
                    lhs.accumulate(x6[k][q].mul(t3[q][i][j]))
                rhs = ClassSeries(window)
                for q in range(m):
                    for r in range(m):
                        rhs.accumulate(y6[i][q].mul(s3[q][k][r]).mul(z6[j][r]))
                res6 = max(res6, lhs.difference_norm(rhs))
    rep.residuals["condition_6"] = res6

    # condition 7: the trace identity
    res7 = 0.0
    b7 = [[_contract_series_matrix(s3[u][p], fb, m) for p in range(m)] for u in range(m)]
    for u in range(m):
        a7 = [[ClassSeries(window) for _ in range(m)] for _ in range(m)]
        for l in range(m):
            for q in range(m):
                for p in range(m):
                    fac = fb[p, q]
                    if fac != 0.0:
                        a7[l][q].accumulate(b7[u][p][l], fac)
        for v in range(m):
            lhs = ClassSeries(window)
            for p in range(n):
                for q in range(n):
                    fac = fa[p, q]
                    if fac != 0.0:
                        lhs.accumulate(m2[p][u].mul(m2[q][v]), fac)
            rhs = ClassSeries(window)
            for l in range(m):
                for q in range(m):
                    rhs.accumulate(a7[l][q].mul(s3[l][v][q]))
            res7 = max(res7, lhs.difference_norm(rhs))
    rep.residuals["condition_7"] = res7


def ext_wdvv_check(series, n=None, m=None, tol=None, force_general=False):
    """Evaluate the seven conditions on a truncated potential series.

    Residuals condition_1 and condition_3 .. condition_7 are worst
    class-coefficient defects on the exactly determined window (classes
    of degree below truncation - 3); margins condition_2_t and
    condition_2_s are the singular value ratios of the quadratic blocks.
    A truncation of 3 leaves an empty window, so conditions 3-7 hold
    vacuously and only condition 1 and the margins carry content.
    Raises ValueError("no inverse Gram") when a quadratic block cannot
    be inverted.

    When the window holds only degree-zero classes the conditions are
    plain tensor contractions and are evaluated with numpy; the generic
    class-series route can be forced with ``force_general`` (the two
    agree exactly).
    """
    tol = tol or ToleranceConfig()
    if n is not None and n != series.n:
        raise ValueError("series has %d t-letters, expected %d" % (series.n, n))
    if m is not None and m != series.m:
        raise ValueError("series has %d s-letters, expected %d" % (series.m, m))
    n, m = series.n, series.m
    window = series.truncation - 4

    rep = VerificationReport(subject="ext_wdvv", tol=tol.eq_tol)
    rep.residuals["condition_1"] = _condition_one(series)

    ga = quadratic_t_block(series)
    margin_t = nondegeneracy_margin(ga)
    rep.margins["condition_2_t"] = margin_t
    if margin_t <= tol.eq_tol:
        raise ValueError("no inverse Gram")
    fa = np.linalg.inv(ga)
    fb = None
    if m > 0:
        gb = quadratic_s_block(series)
        margin_s = nondegeneracy_margin(gb)
        rep.margins["condition_2_s"] = margin_s
        if margin_s <= tol.eq_tol:
            raise ValueError("no inverse Gram")
        fb = np.linalg.inv(gb)

    if window < 0:
        for key in ("condition_3", "condition_4", "condition_5",
                    "condition_6", "condition_7"):
            rep.residuals[key] = 0.0
        return rep

    t_only = series.t_part()
    s_rich = TensorSeries(
        n, m, series.truncation,
        {k: v for k, v in series.terms.items() if len(k[1]) >= 3},
    )
    mixed = TensorSeries(
        n, m, series.truncation,
        {k: v for k, v in series.terms.items() if k[0] and k[1]},
    )

    if window == 0 and not force_general:
        t3 = np.zeros((n, n, n), dtype=complex)
        for i in range(n):
            di = d_t(t_only, i)
            for j in range(n):
                dj = d_t(di, j)
                for p in range(n):
                    t3[i, j, p] = project(d_t(dj, p)).terms.get(((), ()), 0.0)
        s3 = None
        m2 = None
        if m > 0:
            s3 = np.zeros((m, m, m), dtype=complex)
            for i in range(m):
                for j in range(m):
                    for r in range(m):
                        s3[i, j, r] = project(d_sss(s_rich, i, j, r)).terms.get(
                            ((), ()), 0.0
                        )
            m2 = np.zeros((n, m), dtype=complex)
            for k in range(n):
                dk = d_t(mixed, k)
                for p in range(m):
                    m2[k, p] = project(d_s(dk, p)).terms.get(((), ()), 0.0)
        _scalar_conditions(rep, t3, s3, m2, fa, fb)
        return rep

    t3 = [
        [
            [project(d_t(d_t(d_t(series, p), j), i)).restrict(window) for p in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]
    s3 = None
    m2 = None
    if m > 0:
        s3 = [
            [
                [project(d_sss(series, i, j, r)).restrict(window) for r in range(m)]
                for j in range(m)
            ]
            for i in range(m)
        ]
        m2 = [
            [project(d_t(d_s(series, p), k)).restrict(window) for p in range(m)]
            for k in range(n)
        ]
    _series_conditions(rep, t3, s3, m2, fa, fb, window, n, m)
    return rep


def series_to_dict(series):
    """JSON payload; word letters are one based in the file format."""
    terms = []
    for (tw, sw), c in sorted(series.terms.items()):
        c = complex(c)
        terms.append({
            "t": [i + 1 for i in tw],
            "s": [j + 1 for j in sw],
            "coeff": [c.real, c.imag],
        })
    return {
        "n": series.n,
        "m": series.m,
        "truncation": series.truncation,
        "terms": terms,
    }


def series_from_dict(data):
    n = int(data["n"])
    m = int(data["m"])
    out = TensorSeries(n, m, int(data["truncation"]))
    for row in data["terms"]:
        re, im = row["coeff"]
        tw = tuple(int(i) - 1 for i in row["t"])
        sw = tuple(int(j) - 1 for j in row["s"])
        if any(i < 0 or i >= n for i in tw) or any(j < 0 or j >= m for j in sw):
            raise ValueError("series letter out of range")
        out.add_term(tw, sw, complex(re, im))
    return out
