"""Finite structured matrices built from symbols and sequences.

Builders produce dense row-major StructuredMatrix values over an explicit
field (exact rationals or high-precision reals/complexes).  The constructor
re-checks the claimed structure (diagonal or anti-diagonal constancy) and
the builders check the symmetry that the source symbol promises: an even
symbol yields a symmetric Toeplitz matrix, an odd symbol a skewsymmetric
one.  Dense storage is deliberate; the determinant identities need full
determinants at moderate N, not fast solvers.
"""

from fractions import Fraction

import mpmath as mp

from . import scalars, symbols, transforms
from .scalars import Field, abs_val, coerce, hp_complex, hp_real, rational


class StructureError(ValueError):
    """Entries contradict the claimed matrix structure."""


_TAGS = (
    "toeplitz",
    "hankel",
    "hankel_moment",
    "toeplitz_plus_hankel",
    "flip",
    "general",
)


def _tolerance(field: Field):
    if field.is_exact:
        return 0
    return mp.mpf(2) ** (-(field.bits // 2))


class StructuredMatrix:
    __slots__ = ("order", "field", "structure", "rows")

    def __init__(self, rows, field: Field, structure: str = "general", check: bool = True):
        if structure not in _TAGS:
            raise ValueError("unknown structure tag %r" % (structure,))
        order = len(rows)
        if order < 1 or any(len(r) != order for r in rows):
            raise ValueError("matrix must be square and nonempty")
        self.order = order
        self.field = field
        self.structure = structure
        self.rows = [list(r) for r in rows]
        if check:
            self._check_structure()

    def _check_structure(self):
        tol = _tolerance(self.field)
        n = self.order
        rows = self.rows
        scale = max((abs_val(rows[i][j]) for i in range(n) for j in range(n)), default=0)
        bound = tol * max(scale, 1) if tol else 0
        if self.structure in ("toeplitz",):
            for i in range(1, n):
                for j in range(1, n):
                    if abs_val(rows[i][j] - rows[i - 1][j - 1]) > bound:
                        raise StructureError("not constant along diagonals")
        elif self.structure in ("hankel", "hankel_moment"):
            for i in range(n - 1):
                for j in range(1, n):
                    if abs_val(rows[i][j] - rows[i + 1][j - 1]) > bound:
                        raise StructureError("not constant along anti-diagonals")

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def tolist(self) -> list:
        return [list(r) for r in self.rows]

    def is_symmetric(self) -> bool:
        tol = _tolerance(self.field)
        n = self.order
        scale = max(
            (abs_val(self.rows[i][j]) for i in range(n) for j in range(n)), default=0
        )
        bound = tol * max(scale, 1) if tol else 0
        return all(
            abs_val(self.rows[i][j] - self.rows[j][i]) <= bound
            for i in range(n)
            for j in range(i + 1, n)
        )

    def is_skew(self) -> bool:
        tol = _tolerance(self.field)
        n = self.order
        scale = max(
            (abs_val(self.rows[i][j]) for i in range(n) for j in range(n)), default=0
        )
        bound = tol * max(scale, 1) if tol else 0
        return all(
            abs_val(self.rows[i][j] + self.rows[j][i]) <= bound
            for i in range(n)
            for j in range(i, n)
        )

    def to_json(self) -> dict:
        if self.field.is_exact:
            digits = 0
            tag = "rational"
        else:
            digits = int(self.field.bits * 0.30103) + 3
            tag = {"bits": self.field.bits, "tag": self.field.tag}
        entries = []
        for row in self.rows:
            for v in row:
                if isinstance(v, (int, Fraction)):
                    entries.append([scalars.format_scalar(v), "0"])
                elif isinstance(v, mp.mpc):
                    entries.append(
                        [mp.nstr(v.real, digits), mp.nstr(v.imag, digits)]
                    )
                else:
                    entries.append([mp.nstr(mp.mpf(v), digits), "0"])
        return {"order": self.order, "field": tag, "entries": entries}

    def __repr__(self):
        return "StructuredMatrix(order=%d, %s, %r)" % (
            self.order,
            self.field,
            self.structure,
        )


def _drop_tiny_imag(v, bits: int):
    if isinstance(v, mp.mpc):
        bound = mp.mpf(2) ** (-(bits // 2)) * max(abs(v), mp.mpf(1))
        if abs(v.imag) > bound:
            raise TypeError("entry %s is not real" % (mp.nstr(v, 12),))
        return v.real
    return v


def _coeff_lookup(a, lo: int, hi: int, field: Field):
    """Coefficient fetcher over [lo, hi] honoring the target field."""
    entries = a if isinstance(a, dict) else getattr(a, "entries", None)
    if entries is not None:
        symmetry = getattr(a, "symmetry", None)
        seq = a if isinstance(a, transforms.ScalarSeq) else None

        def fetch(n):
            if seq is not None:
                v = seq[n]
            elif symmetry == "even":
                v = entries.get(n, entries.get(-n, 0))
            elif symmetry == "odd":
                v = entries.get(n)
                if v is None:
                    v = -entries.get(-n, 0)
            else:
                v = entries.get(n, 0)
            return coerce(v, field)

        return fetch
    if isinstance(a, symbols.FourierSymbol):
        if field.is_exact:
            raise TypeError(
                "quadrature-backed symbols cannot fill a rational matrix"
            )
        table = a.coeff_table(lo, hi, field.bits)
        # mp constructors round to the ambient precision, so widen first
        with mp.workprec(field.bits + 32):
            if field.tag == scalars.HP_REAL:
                table = {n: _drop_tiny_imag(v, field.bits) for n, v in table.items()}
            else:
                table = {n: mp.mpc(v) for n, v in table.items()}
        return lambda n: table[n]
    raise TypeError("cannot read coefficients from %r" % (type(a),))


def _default_field(a, bits: int | None) -> Field:
    entries = a if isinstance(a, dict) else getattr(a, "entries", None)
    if entries is not None and all(
        isinstance(v, (int, Fraction)) for v in entries.values()
    ):
        if bits is None:
            return rational()
        return hp_real(bits)
    bits = bits or 256
    if isinstance(a, symbols.FourierSymbol):
        prof = a.real_profile()
        if prof is not None:
            return hp_real(bits)
        return hp_complex(bits)
    return hp_real(bits)


def toeplitz(a, N: int, field: Field | None = None, bits: int | None = None) -> StructuredMatrix:
    """T_N(a) = (a_{j-k}), j,k = 0..N-1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    field = field or _default_field(a, bits)
    fetch = _coeff_lookup(a, -(N - 1), N - 1, field)
    rows = [[fetch(j - k) for k in range(N)] for j in range(N)]
    m = StructuredMatrix(rows, field, "toeplitz")
    sym = getattr(a, "symmetry", None)
    if sym == "even" and not m.is_symmetric():
        raise StructureError("even symbol must give a symmetric Toeplitz matrix")
    if sym == "odd" and not m.is_skew():
        raise StructureError("odd symbol must give a skewsymmetric Toeplitz matrix")
    return m


def hankel(a, N: int, field: Field | None = None, bits: int | None = None) -> StructuredMatrix:
    """H_N(a) = (a_{j+k+1}), using coefficient indices 1..2N-1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    field = field or _default_field(a, bits)
    fetch = _coeff_lookup(a, 1, 2 * N - 1, field)
    rows = [[fetch(j + k + 1) for k in range(N)] for j in range(N)]
    return StructuredMatrix(rows, field, "hankel")


def toeplitz_plus_hankel(
    a, N: int, field: Field | None = None, bits: int | None = None
) -> StructuredMatrix:
    """A_N = (a_{j-k} + a_{j+k+1}); requires an even symbol."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if isinstance(a, dict):
        a = transforms.ScalarSeq(a, "even")
    sym = getattr(a, "symmetry", None)
    if sym != "even":
        if not (
            isinstance(a, symbols.FourierSymbol) and symbols.certify_even(a)
        ):
            raise symbols.SpeciesError("toeplitz_plus_hankel needs an even symbol")
    field = field or _default_field(a, bits)
    fetch = _coeff_lookup(a, -(N - 1), 2 * N - 1, field)
    if field.is_exact:
        rows = [[fetch(j - k) + fetch(j + k + 1) for k in range(N)] for j in range(N)]
    else:
        # the sum must not round at ambient precision
        with mp.workprec(field.bits + 32):
            rows = [
                [fetch(j - k) + fetch(j + k + 1) for k in range(N)] for j in range(N)
            ]
    return StructuredMatrix(rows, field, "toeplitz_plus_hankel")


def hankel_moment(b, N: int, field: Field | None = None, bits: int | None = None) -> StructuredMatrix:
    """H_N[b] = (b_{1+j+k}) from a MomentSymbol or explicit moments."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if isinstance(b, symbols.MomentSymbol):
        if field is None:
            field = (hp_real if b.real else hp_complex)(bits or max(128, 12 * N))
        if field.is_exact:
            raise TypeError("moment integrals cannot fill a rational matrix")
        table = b.moment_table(2 * N - 1, field.bits)
        if field.tag == scalars.HP_REAL:
            fetch = lambda n: _drop_tiny_imag(table[n], field.bits)
        else:
            with mp.workprec(field.bits + 32):
                table = {n: mp.mpc(v) for n, v in table.items()}
            fetch = lambda n: table[n]
    else:
        field = field or _default_field(b, bits)
        fetch = _coeff_lookup(b, 1, 2 * N - 1, field)
    rows = [[fetch(1 + j + k) for k in range(N)] for j in range(N)]
    return StructuredMatrix(rows, field, "hankel_moment")


def flip(N: int, field: Field | None = None) -> StructuredMatrix:
    """The reversal permutation W_N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    field = field or rational()
    one = coerce(1, field) if field.is_exact else scalars.to_mp(1, field.bits)
    zero = coerce(0, field) if field.is_exact else scalars.to_mp(0, field.bits)
    rows = [[one if j == N - 1 - k else zero for k in range(N)] for j in range(N)]
    return StructuredMatrix(rows, field, "flip")


def checkerboard_split(M: StructuredMatrix, parity: str):
    """Parity rearrangement of a T_{2N} whose other coefficient class vanishes.

    parity names the surviving class.  "even_entries" returns the two
    diagonal blocks (both equal to T_N of the argument-halved symbol);
    "odd_entries" returns the anti-diagonal blocks D1 = (c_{2(j-k)+1}) and
    D2 = (c_{2(j-k)-1}), with det T_{2N} = (-1)^N det D1 det D2.
    """
    if M.structure != "toeplitz":
        raise ValueError("checkerboard_split needs a Toeplitz matrix")
    if M.order % 2:
        raise ValueError("checkerboard_split needs even order")
    if parity not in ("even_entries", "odd_entries"):
        raise ValueError("parity must be even_entries or odd_entries")
    N = M.order // 2
    rows = M.rows
    tol = _tolerance(M.field)
    scale = max(
        (abs_val(rows[i][j]) for i in range(2 * N) for j in range(2 * N)), default=0
    )
    bound = tol * max(scale, 1) if tol else 0
    # coefficient c_d sits at any (j, k) with j - k = d
    want_zero_residue = 1 if parity == "even_entries" else 0
    for d in range(-(2 * N - 1), 2 * N):
        if d % 2 != want_zero_residue % 2:
            continue
        j, k = (d, 0) if d >= 0 else (0, -d)
        if abs_val(rows[j][k]) > bound:
            raise StructureError(
                "coefficient c_%d should vanish but is %s"
                % (d, scalars.format_scalar(rows[j][k], 8))
            )
    if parity == "even_entries":
        b1 = [[rows[2 * j][2 * k] for k in range(N)] for j in range(N)]
        b2 = [[rows[2 * j + 1][2 * k + 1] for k in range(N)] for j in range(N)]
        return (
            StructuredMatrix(b1, M.field, "toeplitz"),
            StructuredMatrix(b2, M.field, "toeplitz"),
        )
    d1 = [[rows[2 * j + 1][2 * k] for k in range(N)] for j in range(N)]
    d2 = [[rows[2 * j][2 * k + 1] for k in range(N)] for j in range(N)]
    return (
        StructuredMatrix(d1, M.field, "toeplitz"),
        StructuredMatrix(d2, M.field, "toeplitz"),
    )
