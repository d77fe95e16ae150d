"""Arbitrary-precision numerics: complex roots, clustering, reconstruction.

Root finding is Aberth-Ehrlich simultaneous iteration on mpmath complex
numbers, run on a doubling-precision ladder.  Precision is expressed in
bits; results at a given precision are deterministic (no randomness
enters the iteration).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import NonReal, NonZeroDimensional, NoReconstruction, PrecisionExhausted
from .polycore import MPoly, coeffs_in_var, sylvester_resultant, univ_coeffs

PREC_LADDER = (128, 256, 512, 1024)

CFloat = mp.mpc  # numeric carrier; precision is the ambient mp context


@dataclass(frozen=True)
class RootSet:
    """Distinct roots with multiplicities; multiplicities sum to the degree."""

    roots: list  # list of (mp.mpc, int)
    residual_bound: float
    prec: int

    def distinct(self) -> int:
        return len(self.roots)

    def values(self) -> list:
        return [r for r, _ in self.roots]


def _ladder_from(prec: int):
    start = next((i for i, p in enumerate(PREC_LADDER) if p >= prec), len(PREC_LADDER) - 1)
    return PREC_LADDER[start:]


def _to_mpc(value) -> mp.mpc:
    if isinstance(value, Fraction):
        return mp.mpc(mp.mpf(value.numerator) / mp.mpf(value.denominator))
    return mp.mpc(value)


def _horner(coeffs, z):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def _aberth(coeffs, prec: int):
    """All roots of the ascending coefficient list at the given precision."""
    d = len(coeffs) - 1
    lead = coeffs[-1]
    if d == 1:
        return [-coeffs[0] / lead]
    if d == 2:
        a, b, c = coeffs[2], coeffs[1], coeffs[0]
        disc = mp.sqrt(b * b - 4 * a * c)
        # pick the sign that avoids cancellation in the classic formula
        if mp.re(mp.conj(b) * disc) > 0:
            disc = -disc
        q = -(b - disc) / 2
        r1 = q / a
        r2 = c / q if q != 0 else -b / a - r1
        return [r1, r2]
    deriv = [coeffs[i] * i for i in range(1, d + 1)]
    center = -coeffs[d - 1] / (d * lead)
    radius = 1 + max(abs(c / lead) for c in coeffs[:-1])
    z = [
        center + radius * mp.expjpi(2 * (k + mp.mpf("0.354")) / d)
        for k in range(d)
    ]
    target = mp.mpf(2) ** (-prec)
    max_iter = max(200, 3 * prec)
    for _ in range(max_iter):
        biggest = mp.mpf(0)
        for i in range(d):
            pv = _horner(coeffs, z[i])
            if pv == 0:
                continue
            dv = _horner(deriv, z[i])
            if dv == 0:
                z[i] = z[i] + target * (1 + abs(z[i]))
                biggest = max(biggest, abs(z[i]) + 1)
                continue
            ratio = pv / dv
            s = mp.mpc(0)
            for j in range(d):
                if j != i:
                    diff = z[i] - z[j]
                    if diff == 0:
                        diff = target * (1 + abs(z[i]))
                    s += 1 / diff
            denom = 1 - ratio * s
            corr = ratio if denom == 0 else ratio / denom
            z[i] = z[i] - corr
            rel = abs(corr) / (1 + abs(z[i]))
            if rel > biggest:
                biggest = rel
        if biggest < target:
            break
    return z


def cluster(points, tol):
    """Single-linkage clusters at tolerance tol; representative is the mean.

    Returns a list of (representative, count) sorted by (re, im) of the
    representative, so the output is deterministic.
    """
    pts = list(points)
    if not pts:
        return []
    n = len(pts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(pts[i])
    out = []
    for members in groups.values():
        rep = sum(members, mp.mpc(0)) / len(members)
        out.append((rep, len(members)))
    out.sort(key=lambda rc: (mp.re(rc[0]), mp.im(rc[0])))
    return out


def roots_from_coeffs(coeffs, prec: int = 256) -> RootSet:
    """Root set of an ascending coefficient list (Fraction or complex entries).

    Runs the precision ladder until clusters are unambiguously separated;
    exact zero leading/trailing coefficients are stripped beforehand.
    """
    coeffs = list(coeffs)
    while coeffs and _is_exact_zero(coeffs[-1]):
        coeffs.pop()
    if len(coeffs) <= 1:
        raise ValueError("nonconstant polynomial required")
    zero_mult = 0
    stripped = list(coeffs)
    while _is_exact_zero(stripped[0]):
        stripped.pop(0)
        zero_mult += 1
    for wp in _ladder_from(prec):
        with mp.workprec(wp + 20):
            full = [_to_mpc(c) for c in coeffs]
            cs = [_to_mpc(c) for c in stripped]
            pts = _aberth(cs, wp) if len(cs) > 1 else []
            scale = max([mp.mpf(1)] + [abs(z) for z in pts])
            tol = mp.mpf(2) ** (-wp // 4) * scale
            clusters = cluster(pts, tol)
            if zero_mult:
                clusters = _merge_zero(clusters, zero_mult, tol)
            ok, residual = _clusters_ok(full, clusters, tol, wp)
            if ok:
                return RootSet(roots=clusters, residual_bound=float(residual), prec=wp)
    raise PrecisionExhausted("root clusters remain ambiguous at 1024 bits")


def _merge_zero(clusters, zero_mult, tol):
    out = []
    absorbed = False
    for rep, count in clusters:
        if abs(rep) <= tol and not absorbed:
            out.append((rep * count / (count + zero_mult), count + zero_mult))
            absorbed = True
        else:
            out.append((rep, count))
    if not absorbed:
        out.append((mp.mpc(0), zero_mult))
    out.sort(key=lambda rc: (mp.re(rc[0]), mp.im(rc[0])))
    return out


def _clusters_ok(cs, clusters, tol, wp):
    lead = abs(cs[-1]) if cs else mp.mpf(1)
    residual = mp.mpf(0)
    for rep, _ in clusters:
        if cs and len(cs) > 1:
            r = abs(_horner(cs, rep)) / (lead * (1 + abs(rep)) ** (len(cs) - 1))
            residual = max(residual, r)
    if residual > mp.mpf(2) ** (-wp // 8):
        return False, residual
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            gap = abs(clusters[i][0] - clusters[j][0])
            if gap <= 4 * tol:
                return False, residual
    return True, residual


def _is_exact_zero(c) -> bool:
    return isinstance(c, (int, Fraction)) and c == 0


def roots_univariate(p: MPoly, prec: int = 256) -> RootSet:
    """All complex roots of a nonconstant univariate rational polynomial."""
    coeffs = univ_coeffs(p)
    if len(coeffs) <= 1:
        raise ValueError("nonconstant polynomial required")
    return roots_from_coeffs(coeffs, prec)


# ---------------------------------------------------------------------------
# rational reconstruction


def _mpf_to_fraction(x) -> Fraction:
    if not isinstance(x, mp.mpf):
        x = mp.mpf(x)  # conversion rounds at ambient precision; mpf passes through
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)  # gmpy2 backend hands out mpz
    if man == 0:
        if exp != 0:
            raise ValueError("non-finite value")
        return Fraction(0)
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value


def rational_reconstruct(v, height_bound: int, prec: int = 256) -> Fraction:
    """Recover the rational of height <= height_bound within 2^(-prec/2) of v.

    Continued-fraction convergents of the exact dyadic value of v.real;
    the first convergent inside the tolerance is the minimal-height one.
    """
    # split into parts without reconverting (conversion rounds at ambient prec)
    if isinstance(v, mp.mpc):
        re_part, im_part = v.real, v.imag
    elif isinstance(v, mp.mpf):
        re_part, im_part = v, mp.mpf(0)
    else:
        re_part, im_part = mp.mpf(v), mp.mpf(0)
    scale = max(1, abs(re_part) + abs(im_part))
    tol = mp.mpf(2) ** (-prec // 2) * scale
    if abs(im_part) > tol:
        raise NonReal(f"imaginary part {im_part} exceeds tolerance")
    x = _mpf_to_fraction(re_part)
    tol_f = _mpf_to_fraction(tol) if tol > 0 else Fraction(0)
    # continued fraction of x
    p_prev, q_prev = 1, 0
    p_cur, q_cur = int(x // 1), 1
    a = x - (x // 1)
    while True:
        cand = Fraction(p_cur, q_cur)
        if abs(p_cur) <= height_bound and q_cur <= height_bound and abs(x - cand) <= tol_f:
            return cand
        if abs(p_cur) > height_bound or q_cur > height_bound:
            raise NoReconstruction(
                f"no rational of height <= {height_bound} within tolerance"
            )
        if a == 0:
            return cand
        x_next = 1 / a
        digit = int(x_next // 1)
        a = x_next - digit
        p_cur, p_prev = digit * p_cur + p_prev, p_cur
        q_cur, q_prev = digit * q_cur + q_prev, q_cur


# ---------------------------------------------------------------------------
# two-variable systems by resultant elimination


def solve_system_2(p: MPoly, q: MPoly, prec: int = 256) -> list:
    """All isolated common zeros of two rational polynomials in 2 variables.

    Eliminates each variable by a Sylvester resultant (both must be
    nonzero, otherwise the solution set is positive-dimensional), then
    back-substitutes and keeps the pairs on which both residuals vanish.
    """
    if p.var_count != 2 or q.var_count != 2:
        raise ValueError("two polynomials in 2 variables expected")
    if p.is_zero() or q.is_zero():
        raise NonZeroDimensional("a zero polynomial has a positive-dimensional zero set")
    dp1 = _deg_in(p, 1)
    dq1 = _deg_in(q, 1)
    if dp1 == 0 and dq1 == 0:
        # both univariate in variable 0: common zeros fill vertical lines
        from .polycore import univ_gcd

        a = _drop_var(p, 1)
        b = _drop_var(q, 1)
        g = univ_gcd(a, b)
        if not g.is_constant():
            raise NonZeroDimensional("common one-variable factor")
        return []
    if _deg_in(p, 0) == 0 and _deg_in(q, 0) == 0:
        from .polycore import univ_gcd

        a = _drop_var(p, 0)
        b = _drop_var(q, 0)
        g = univ_gcd(a, b)
        if not g.is_constant():
            raise NonZeroDimensional("common one-variable factor")
        return []
    res_x = sylvester_resultant(p, q, 1)  # eliminate var 1 -> poly in var 0
    res_y = sylvester_resultant(p, q, 0)  # eliminate var 0 -> poly in var 1
    if res_x.is_zero() or res_y.is_zero():
        raise NonZeroDimensional("a resultant vanishes identically")
    if res_x.is_constant():
        return []
    xset = roots_univariate(_drop_var(res_x, 1), prec)
    solutions = []
    with mp.workprec(prec + 20):
        coeff_scale = max(
            [mp.mpf(1)]
            + [abs(_to_mpc(c)) for c in p.terms.values()]
            + [abs(_to_mpc(c)) for c in q.terms.values()]
        )
        tol = mp.mpf(2) ** (-prec // 4)
        py = coeffs_in_var(p, 1)
        qy = coeffs_in_var(q, 1)
        for x0, _ in xset.roots:
            pc = [_eval_coeff(c, x0) for c in py]
            qc = [_eval_coeff(c, x0) for c in qy]
            cands = _y_candidates(pc, qc, tol, coeff_scale, prec)
            for y0 in cands:
                scale_pt = (1 + abs(x0) + abs(y0)) ** max(
                    total_deg := _total_deg(p), _total_deg(q)
                )
                rp = abs(_eval2(p, x0, y0)) / (coeff_scale * scale_pt)
                rq = abs(_eval2(q, x0, y0)) / (coeff_scale * scale_pt)
                if rp <= tol and rq <= tol:
                    solutions.append((x0, y0))
        # deduplicate
        out = []
        for s in solutions:
            if all(abs(s[0] - t[0]) + abs(s[1] - t[1]) > tol * (1 + abs(s[0]) + abs(s[1])) for t in out):
                out.append(s)
    out.sort(key=lambda s: (mp.re(s[0]), mp.im(s[0]), mp.re(s[1]), mp.im(s[1])))
    return out


def _total_deg(p: MPoly) -> int:
    return max((sum(e) for e in p.terms), default=0)


def _deg_in(p: MPoly, index: int) -> int:
    return max((e[index] for e in p.terms), default=0)


def _drop_var(p: MPoly, index: int) -> MPoly:
    keep = 1 - index
    return MPoly(1, {(e[keep],): c for e, c in p.terms.items()})


def _eval_coeff(c: MPoly, x0):
    acc = mp.mpc(0)
    for e, coeff in c.terms.items():
        acc += _to_mpc(coeff) * x0 ** e[0]
    return acc


def _eval2(p: MPoly, x0, y0):
    acc = mp.mpc(0)
    for e, coeff in p.terms.items():
        acc += _to_mpc(coeff) * x0 ** e[0] * y0 ** e[1]
    return acc


def _y_candidates(pc, qc, tol, coeff_scale, prec):
    p_zero = all(abs(c) <= tol * coeff_scale for c in pc)
    q_zero = all(abs(c) <= tol * coeff_scale for c in qc)
    if p_zero and q_zero:
        raise NonZeroDimensional("both polynomials vanish on a vertical line")
    if p_zero:
        return _nonconst_roots(qc, prec)
    if q_zero:
        return _nonconst_roots(pc, prec)
    return _nonconst_roots(pc, prec) + _nonconst_roots(qc, prec)


def _nonconst_roots(coeffs, prec):
    cs = list(coeffs)
    scale = max([mp.mpf(0)] + [abs(c) for c in cs])
    if scale == 0:
        return []
    # drop numerically vanished leading coefficients (lc killed by x0)
    drop = scale * mp.mpf(2) ** (-prec // 2)
    while cs and abs(cs[-1]) <= drop:
        cs.pop()
    if len(cs) <= 1:
        return []
    rs = roots_from_coeffs(cs, prec)
    return rs.values()
