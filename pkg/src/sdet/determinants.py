"""Determinant and Pfaffian engines over exact and high-precision fields.

det_bareiss does fraction-free integer elimination after clearing row
denominators, so rational determinants come out exact.  det_lu runs
partial-pivoted elimination at the requested precision and then re-runs at
twice the precision on the same entries; the agreed leading digits are
reported, and disagreement beyond 2^(-bits/4) raises PrecisionError rather
than returning a silently wrong value.  The Pfaffian uses skewsymmetric
elimination with the convention Pf([[0, m], [-m, 0]]) = m.
"""

import math
from fractions import Fraction

import mpmath as mp

from .matrices import StructuredMatrix
from .scalars import Field, abs_val, hp_complex, hp_real, to_mp


class PrecisionError(ArithmeticError):
    """The two-precision recheck disagreed; rerun with more bits."""

    def __init__(self, message, recommended_bits=None):
        super().__init__(message)
        self.recommended_bits = recommended_bits


class DetResult:
    __slots__ = ("value", "method", "condition", "bits", "digits_guaranteed")

    def __init__(self, value, method, condition=None, bits=None, digits_guaranteed=None):
        self.value = value
        self.method = method
        self.condition = condition
        self.bits = bits
        self.digits_guaranteed = digits_guaranteed

    def __repr__(self):
        return "DetResult(%r, method=%r, digits=%r)" % (
            self.value,
            self.method,
            self.digits_guaranteed,
        )


def det_bareiss(M: StructuredMatrix) -> DetResult:
    """Exact determinant of a rational-field matrix."""
    if not M.field.is_exact:
        raise TypeError("det_bareiss needs a rational-field matrix")
    n = M.order
    denom = 1
    a = []
    for row in M.rows:
        fracs = [Fraction(v) for v in row]
        l = 1
        for f in fracs:
            l = l * f.denominator // math.gcd(l, f.denominator)
        denom *= l
        a.append([int(f * l) for f in fracs])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return DetResult(Fraction(0), "bareiss")
        for i in range(k + 1, n):
            aik = a[i][k]
            akk = a[k][k]
            rowi = a[i]
            rowk = a[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = a[k][k]
    return DetResult(Fraction(sign * a[n - 1][n - 1], denom), "bareiss")


def _lu_pass(rows, n, prec):
    """One elimination at the given precision: (det, max_piv, min_piv)."""
    with mp.workprec(prec):
        a = [[to_mp(v, prec) for v in row] for row in rows]
        det = mp.mpf(1) if all(isinstance(v, mp.mpf) for r in a for v in r) else mp.mpc(1)
        piv_max = mp.mpf(0)
        piv_min = mp.inf
        for k in range(n):
            r_best, v_best = k, abs(a[k][k])
            for r in range(k + 1, n):
                v = abs(a[r][k])
                if v > v_best:
                    r_best, v_best = r, v
            if v_best == 0:
                return mp.mpf(0) * det, piv_max, mp.mpf(0)
            if r_best != k:
                a[k], a[r_best] = a[r_best], a[k]
                det = -det
            piv = a[k][k]
            det *= piv
            piv_max = max(piv_max, abs(piv))
            piv_min = min(piv_min, abs(piv))
            for i in range(k + 1, n):
                f = a[i][k] / piv
                if f == 0:
                    continue
                rowi = a[i]
                rowk = a[k]
                for j in range(k + 1, n):
                    rowi[j] -= f * rowk[j]
        return det, piv_max, piv_min


def _max_entry(rows, prec):
    with mp.workprec(prec):
        best = mp.mpf(0)
        for row in rows:
            for v in row:
                a = abs(to_mp(v, prec))
                if a > best:
                    best = a
        return best


def det_lu(M: StructuredMatrix, bits: int | None = None) -> DetResult:
    """Determinant with a doubled-precision recheck on the same entries."""
    if bits is None:
        if M.field.is_exact:
            bits = 256
        else:
            bits = M.field.bits
    if bits < 64:
        raise ValueError("det_lu needs at least 64 bits")
    n = M.order
    d1, piv_max, piv_min = _lu_pass(M.rows, n, bits)
    d2, _, _ = _lu_pass(M.rows, n, 2 * bits)
    scale_bar = _max_entry(M.rows, bits)
    with mp.workprec(2 * bits):
        # zero only relative to the largest entry
        zero_bar = mp.mpf(2) ** (-(bits // 2)) * scale_bar
        if abs(d1) <= zero_bar and abs(d2) <= zero_bar:
            cond = mp.inf if piv_min == 0 else piv_max / piv_min
            return DetResult(
                mp.mpf(0), "lu", condition=cond, bits=bits, digits_guaranteed=0
            )
        diff = abs(d1 - d2)
        scale = max(abs(d2), mp.mpf(2) ** (-4 * bits))
        rel = diff / scale
        if rel > mp.mpf(2) ** (-(bits // 4)):
            raise PrecisionError(
                "determinant unstable at %d bits (relative drift %s); "
                "retry with at least %d bits" % (bits, mp.nstr(rel, 5), 2 * bits),
                recommended_bits=2 * bits,
            )
        if rel == 0:
            digits = int(bits * 0.30103)
        else:
            digits = max(1, min(int(bits * 0.30103), int(-mp.log10(rel))))
        cond = mp.inf if piv_min == 0 else piv_max / piv_min
    with mp.workprec(bits):
        value = +d2
    return DetResult(value, "lu", condition=cond, bits=bits, digits_guaranteed=digits)


def det_auto(M: StructuredMatrix, bits: int | None = None) -> DetResult:
    if M.field.is_exact:
        return det_bareiss(M)
    return det_lu(M, bits)


def pfaffian(M: StructuredMatrix, bits: int | None = None):
    """Pfaffian of a skewsymmetric matrix of even order.

    Exact over rationals; over hp fields the elimination pivots on the
    largest available off-diagonal entry.  Row and column swaps happen
    together, each flipping the sign.
    """
    if M.order % 2:
        raise ValueError("pfaffian needs even order")
    if not M.is_skew():
        raise ValueError("pfaffian needs a skewsymmetric matrix")
    n = M.order
    exact = M.field.is_exact
    if exact:
        a = [[Fraction(v) for v in row] for row in M.rows]
        result = Fraction(1)
    else:
        prec = (bits or M.field.bits) + 32
        with mp.workprec(prec):
            a = [[to_mp(v, prec) for v in row] for row in M.rows]
            result = mp.mpf(1) if all(
                isinstance(v, mp.mpf) for r in a for v in r
            ) else mp.mpc(1)
    sign = 1

    def run():
        nonlocal sign, result
        for k in range(0, n - 1, 2):
            # choose the partner row maximizing |a[k][j]|, j > k
            j_best, v_best = k + 1, abs_val(a[k][k + 1])
            for j in range(k + 2, n):
                v = abs_val(a[k][j])
                if v > v_best:
                    j_best, v_best = j, v
            if v_best == 0:
                # row k is zero beyond position k: the matrix is singular
                result = result * 0
                return
            if j_best != k + 1:
                for row in a:
                    row[k + 1], row[j_best] = row[j_best], row[k + 1]
                a[k + 1], a[j_best] = a[j_best], a[k + 1]
                sign = -sign
            p = a[k][k + 1]
            result = result * p
            for i in range(k + 2, n):
                for j in range(i + 1, n):
                    upd = a[i][j] + (a[k + 1][i] * a[k][j] - a[k][i] * a[k + 1][j]) / p
                    a[i][j] = upd
                    a[j][i] = -upd

    if exact:
        run()
        return sign * result
    with mp.workprec((bits or M.field.bits) + 32):
        run()
        return sign * result
