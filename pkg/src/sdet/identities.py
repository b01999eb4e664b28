"""Executable determinant identities between structured matrices.

Each IdentityKind names one equality between determinants of matrices built
from a common input (an even symbol or sequence, an odd sequence, or a
moment symbol).  verify() builds both sides through the matrices and
determinants modules and records residuals per N; in exact mode a pass
means the residual is literally zero, in hp mode the relative residual must
stay below 10^(-digits_guaranteed/2) where digits_guaranteed comes from the
determinant engine's two-precision agreement.

Kinds backed by moment integrals have no exact mode (generic moments are
transcendental); requesting exact there silently upgrades to hp and says so
in the report notes.  Sequence-level inputs are accepted even when no L1
symbol is known to back them; the identities are finite-matrix statements.
"""

import enum
from fractions import Fraction

import mpmath as mp

from . import determinants, matrices, symbols, transforms
from .determinants import DetResult, PrecisionError, det_bareiss, det_lu, pfaffian
from .matrices import hankel_moment, toeplitz, toeplitz_plus_hankel
from .scalars import Field, abs_val, format_scalar, hp_complex, hp_real, rational, to_mp
from .symbols import (
    CoeffSeq,
    JumpT,
    MomentSymbol,
    SkewFromMoment,
    SpeciesError,
    SymbolProduct,
    halve_argument,
    moment_to_halfangle,
    multiply_by_chi,
    th_to_moment_symbol,
)
from .transforms import ScalarSeq, a_to_b, a_to_c, c_to_b

DEFAULT_BITS = 256


class IdentityKind(str, enum.Enum):
    HankelCongruence = "hankel_congruence"
    THvsMoment = "th_vs_moment"
    QuarterWave = "quarter_wave"
    MomentToToeplitz = "moment_to_toeplitz"
    SkewSquare = "skew_square"
    CSeqSquare = "cseq_square"
    MomentSkewSquare = "moment_skew_square"
    ParitySplitEven = "parity_split_even"
    ParitySplitChi = "parity_split_chi"


# kinds whose right-hand data comes from integrals; no exact arithmetic
_HP_ONLY = {
    IdentityKind.THvsMoment,
    IdentityKind.MomentToToeplitz,
    IdentityKind.MomentSkewSquare,
    IdentityKind.ParitySplitChi,
}

_MOMENT_KINDS = {IdentityKind.MomentToToeplitz, IdentityKind.MomentSkewSquare}


class IdentityRecord:
    __slots__ = ("N", "lhs", "rhs", "abs_resid", "rel_resid", "mode", "bits", "digits", "ok")

    def __init__(self, N, lhs, rhs, abs_resid, rel_resid, mode, bits, digits, ok):
        self.N = N
        self.lhs = lhs
        self.rhs = rhs
        self.abs_resid = abs_resid
        self.rel_resid = rel_resid
        self.mode = mode
        self.bits = bits
        self.digits = digits
        self.ok = ok


class IdentityReport:
    __slots__ = ("kind", "mode", "bits", "records", "notes", "verdict")

    def __init__(self, kind, mode, bits, records, notes, verdict):
        self.kind = kind
        self.mode = mode
        self.bits = bits
        self.records = records
        self.notes = notes
        self.verdict = verdict

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        recs = []
        for r in self.records:
            digits = r.digits if r.digits else 20
            recs.append(
                {
                    "N": r.N,
                    "lhs": format_scalar(r.lhs, digits),
                    "rhs": format_scalar(r.rhs, digits),
                    "abs_resid": format_scalar(r.abs_resid, 8),
                    "rel_resid": format_scalar(r.rel_resid, 8),
                    "mode": r.mode,
                    "bits": r.bits,
                    "digits_guaranteed": r.digits,
                    "ok": r.ok,
                }
            )
        return {
            "kind": self.kind,
            "mode": self.mode,
            "bits": self.bits,
            "verdict": self.verdict,
            "notes": list(self.notes),
            "records": recs,
        }


def reports_to_csv(reports) -> str:
    lines = ["kind,N,lhs,rhs,abs_resid,rel_resid,mode,bits"]
    for rep in reports:
        for r in rep.records:
            digits = r.digits if r.digits else 20
            lines.append(
                "%s,%d,%s,%s,%s,%s,%s,%s"
                % (
                    rep.kind,
                    r.N,
                    format_scalar(r.lhs, digits),
                    format_scalar(r.rhs, digits),
                    format_scalar(r.abs_resid, 8),
                    format_scalar(r.rel_resid, 8),
                    r.mode,
                    r.bits if r.bits else "",
                )
            )
    return "\n".join(lines) + "\n"


def _n_list(N_values):
    if isinstance(N_values, int):
        if N_values < 1:
            raise ValueError("N must be >= 1")
        return list(range(1, N_values + 1))
    out = sorted(set(int(n) for n in N_values))
    if not out or out[0] < 1:
        raise ValueError("N values must be >= 1")
    return out


def _is_exact_entries(entries) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in entries.values())


def _even_input_seq(inp, max_index: int, mode: str, bits: int):
    """Even ScalarSeq view of the input, wide enough for indices |n| <= max_index."""
    if isinstance(inp, ScalarSeq):
        if inp.symmetry != "even":
            raise SpeciesError("an even sequence is required")
        entries = dict(inp.entries)
    elif isinstance(inp, CoeffSeq):
        if inp.symmetry not in ("even", None):
            raise SpeciesError("an even sequence is required")
        if inp.symmetry is None and any(
            inp.entries.get(-n, 0) != v for n, v in inp.entries.items()
        ):
            raise SpeciesError("an even sequence is required")
        entries = dict(inp.entries)
    elif isinstance(inp, dict):
        entries = dict(inp)
    elif isinstance(inp, symbols.FourierSymbol):
        if not symbols.certify_even(inp):
            raise SpeciesError("an even symbol is required")
        if mode == "exact":
            raise SpeciesError("exact mode needs finite rational coefficients")
        table = inp.coeff_table(0, max_index, bits)
        entries = {}
        for n in range(max_index + 1):
            v = table[n]
            entries[n] = v
            entries[-n] = v
        return ScalarSeq(entries, "even")
    else:
        raise SpeciesError("cannot interpret %r as an even sequence" % (type(inp),))
    if mode == "exact" and not _is_exact_entries(entries):
        raise SpeciesError("exact mode needs rational coefficients")
    return ScalarSeq(entries, "even")


def _odd_input_seq(inp, mode: str) -> ScalarSeq:
    if isinstance(inp, ScalarSeq):
        if inp.symmetry != "odd":
            raise SpeciesError("an odd sequence is required")
        seq = inp
    elif isinstance(inp, CoeffSeq):
        if inp.symmetry != "odd":
            raise SpeciesError("an odd sequence is required")
        seq = ScalarSeq(dict(inp.entries), "odd")
    elif isinstance(inp, dict):
        seq = ScalarSeq(dict(inp), "odd")
    else:
        raise SpeciesError("cannot interpret %r as an odd sequence" % (type(inp),))
    if mode == "exact" and not _is_exact_entries(seq.entries):
        raise SpeciesError("exact mode needs rational coefficients")
    return seq


def _field_for(seq, mode: str, bits: int) -> Field:
    if mode == "exact":
        return rational()
    entries = getattr(seq, "entries", {})
    real = all(
        isinstance(v, (int, float, Fraction, mp.mpf))
        or (isinstance(v, (complex, mp.mpc)) and complex(v).imag == 0.0)
        for v in entries.values()
    )
    return hp_real(bits) if real else hp_complex(bits)


def _det(M, bits):
    if M.field.is_exact:
        return det_bareiss(M)
    return det_lu(M, bits)


def _residuals(lhs, rhs, bits):
    if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
        d = lhs - rhs
        a = abs_val(d)
        scale = max(abs_val(lhs), abs_val(rhs))
        rel = a / scale if scale else Fraction(0)
        return a, rel
    with mp.workprec(2 * bits + 32):
        dl = to_mp(lhs, 2 * bits + 32)
        dr = to_mp(rhs, 2 * bits + 32)
        a = abs(dl - dr)
        scale = max(abs(dl), abs(dr))
        rel = a / scale if scale > 0 else mp.mpf(0)
    return a, rel


def _make_record(N, lhs_res, rhs_res, mode, bits, extra_digits=()):
    lhs = lhs_res.value if isinstance(lhs_res, DetResult) else lhs_res
    rhs = rhs_res.value if isinstance(rhs_res, DetResult) else rhs_res
    a, rel = _residuals(lhs, rhs, bits or 64)
    if mode == "exact":
        return IdentityRecord(N, lhs, rhs, a, rel, mode, None, None, a == 0)
    digits = [extra for extra in extra_digits if extra]
    for res in (lhs_res, rhs_res):
        if isinstance(res, DetResult) and res.digits_guaranteed:
            digits.append(res.digits_guaranteed)
    dg = min(digits) if digits else max(8, int(bits * 0.15))
    ok = rel < mp.mpf(10) ** (-(dg / 2))
    return IdentityRecord(N, lhs, rhs, a, rel, mode, bits, dg, ok)


# -- per-kind builders ----------------------------------------------------


def _run_hankel_congruence(inp, Ns, mode, bits, notes):
    records = []
    for N in Ns:
        seq = _even_input_seq(inp, 2 * N + 2, mode, bits)
        field = _field_for(seq, mode, bits)
        with mp.workprec(2 * bits + 32):
            b = a_to_b(seq, 2 * N)
        A = toeplitz_plus_hankel(seq, N, field)
        B = hankel_moment({n: b[n] for n in range(1, 2 * N)}, N, field)
        records.append(_make_record(N, _det(A, bits), _det(B, bits), mode, bits))
    return records


def _run_th_vs_moment(inp, Ns, mode, bits, notes):
    if isinstance(inp, (ScalarSeq, dict)):
        try:
            inp = CoeffSeq(dict(getattr(inp, "entries", inp)), symmetry="even")
        except ValueError as exc:
            raise SpeciesError(str(exc)) from exc
    if not isinstance(inp, symbols.FourierSymbol):
        raise SpeciesError("an even symbol is required")
    if not symbols.certify_even(inp):
        raise SpeciesError("an even symbol is required")
    b = th_to_moment_symbol(inp)
    field = hp_real(bits) if b.real else hp_complex(bits)
    records = []
    for N in Ns:
        A = toeplitz_plus_hankel(inp, N, field)
        H = hankel_moment(b, N, field)
        records.append(_make_record(N, _det(A, bits), _det(H, bits), mode, bits))
    return records


def _require_even_support(inp, mode, bits, max_index):
    if isinstance(inp, (ScalarSeq, dict, CoeffSeq)):
        seq = _even_input_seq(inp, max_index, mode, bits)
        odd = [n for n in seq.entries if n % 2 and seq.entries[n] != 0]
        if odd:
            raise SpeciesError(
                "vanishing odd coefficients are required, found index %d" % odd[0]
            )
        return seq
    if isinstance(inp, symbols.FourierSymbol):
        if not inp.even_support():
            raise SpeciesError("vanishing odd coefficients are required")
        return inp
    raise SpeciesError("unsupported input %r" % (type(inp),))


def _halved_seq(seq: ScalarSeq) -> ScalarSeq:
    return ScalarSeq({n // 2: v for n, v in seq.entries.items()}, "even")


def _run_quarter_wave(inp, Ns, mode, bits, notes):
    src = _require_even_support(inp, mode, bits, 4 * max(Ns))
    records = []
    for N in Ns:
        if isinstance(src, ScalarSeq):
            field = _field_for(src, mode, bits)
            A = toeplitz_plus_hankel(src, N, field)
            T = toeplitz(_halved_seq(src), N, field)
        else:
            d = halve_argument(src)
            A = toeplitz_plus_hankel(src, N, bits=bits)
            T = toeplitz(d, N, bits=bits)
        records.append(_make_record(N, _det(A, bits), _det(T, bits), mode, bits))
    return records


def _smooth_part(b: MomentSymbol) -> MomentSymbol:
    return MomentSymbol(
        b.smooth,
        weight="one",
        jumps=b.jumps,
        parity=b.parity,
        smooth_theta=b.smooth_theta,
        real=b.real,
        poly=b.poly,
    )


def _run_moment_to_toeplitz(inp, Ns, mode, bits, notes):
    if not isinstance(inp, MomentSymbol):
        raise SpeciesError("a moment symbol is required")
    if inp.weight != "sqrt_ratio":
        raise SpeciesError("the sqrt((1+x)/(1-x)) weight is required")
    d = moment_to_halfangle(_smooth_part(inp))
    field = hp_real(bits) if inp.real else hp_complex(bits)
    records = []
    for N in Ns:
        H = hankel_moment(inp, N, field)
        T = toeplitz(d, N, field)
        records.append(_make_record(N, _det(H, bits), _det(T, bits), mode, bits))
    return records


def _square(res: DetResult, bits):
    if isinstance(res.value, (int, Fraction)):
        return res.value * res.value
    with mp.workprec(2 * bits + 32):
        return res.value * res.value


def _run_skew_square(inp, Ns, mode, bits, notes):
    records = []
    for N in Ns:
        seq = _even_input_seq(inp, 2 * N, mode, bits)
        field = _field_for(seq, mode, bits)
        with mp.workprec(2 * bits + 32):
            c = a_to_c(seq, 2 * N - 1)
        T2 = toeplitz(c, 2 * N, field)
        A = toeplitz_plus_hankel(seq, N, field)
        lhs = _det(T2, bits)
        rhs_det = _det(A, bits)
        rhs = _square(rhs_det, bits or 64)
        records.append(
            _make_record(
                N,
                lhs,
                rhs,
                mode,
                bits,
                extra_digits=(rhs_det.digits_guaranteed,) if mode == "hp" else (),
            )
        )
    return records


def _run_cseq_square(inp, Ns, mode, bits, notes):
    seq = _odd_input_seq(inp, mode)
    note = (
        "sequence-level input: the identity is a finite-matrix statement and "
        "does not require the sequence to come from an L1 symbol"
    )
    if note not in notes:
        notes.append(note)
    records = []
    for N in Ns:
        field = _field_for(seq, mode, bits)
        with mp.workprec(2 * bits + 32):
            b = c_to_b(seq, 2 * N - 1)
        T2 = toeplitz(seq, 2 * N, field)
        B = hankel_moment({n: b[n] for n in range(1, 2 * N)}, N, field)
        lhs = _det(T2, bits)
        rhs_det = _det(B, bits)
        rhs = _square(rhs_det, bits or 64)
        records.append(
            _make_record(
                N,
                lhs,
                rhs,
                mode,
                bits,
                extra_digits=(rhs_det.digits_guaranteed,) if mode == "hp" else (),
            )
        )
    return records


def _run_moment_skew_square(inp, Ns, mode, bits, notes):
    if not isinstance(inp, MomentSymbol):
        raise SpeciesError("a moment symbol is required")
    c = SkewFromMoment(inp)
    field = hp_real(bits) if inp.real else hp_complex(bits)
    records = []
    for N in Ns:
        T2 = toeplitz(c, 2 * N, field)
        H = hankel_moment(inp, N, field)
        lhs = _det(T2, bits)
        rhs_det = _det(H, bits)
        rhs = _square(rhs_det, bits)
        records.append(
            _make_record(
                N, lhs, rhs, mode, bits, extra_digits=(rhs_det.digits_guaranteed,)
            )
        )
    return records


def _run_parity_split_even(inp, Ns, mode, bits, notes):
    src = _require_even_support(inp, mode, bits, 4 * max(Ns))
    records = []
    for N in Ns:
        if isinstance(src, ScalarSeq):
            field = _field_for(src, mode, bits)
            T2 = toeplitz(src, 2 * N, field)
            T1 = toeplitz(_halved_seq(src), N, field)
        else:
            T2 = toeplitz(src, 2 * N, bits=bits)
            T1 = toeplitz(halve_argument(src), N, bits=bits)
        lhs = _det(T2, bits)
        rhs_det = _det(T1, bits)
        rhs = _square(rhs_det, bits or 64)
        records.append(
            _make_record(
                N,
                lhs,
                rhs,
                mode,
                bits,
                extra_digits=(rhs_det.digits_guaranteed,) if mode == "hp" else (),
            )
        )
    return records


def _run_parity_split_chi(inp, Ns, mode, bits, notes):
    src = _require_even_support(inp, "hp", bits, 4 * max(Ns))
    if isinstance(src, ScalarSeq):
        base = CoeffSeq(dict(src.entries), symmetry="even")
    else:
        base = src
    d = halve_argument(base)
    d1 = SymbolProduct((JumpT(-0.5), d))
    d2 = SymbolProduct((JumpT(0.5), d))
    chi_a = multiply_by_chi(base)
    lhs_field = (
        hp_real(bits) if chi_a.real_profile() is not None else hp_complex(bits)
    )
    records = []
    for N in Ns:
        T2 = toeplitz(chi_a, 2 * N, lhs_field)
        lhs = _det(T2, bits)
        T_d1 = toeplitz(d1, N, hp_complex(bits))
        T_d2 = toeplitz(d2, N, hp_complex(bits))
        r1 = _det(T_d1, bits)
        r2 = _det(T_d2, bits)
        with mp.workprec(2 * bits + 32):
            rhs = r1.value * r2.value
        records.append(
            _make_record(
                N,
                lhs,
                rhs,
                "hp",
                bits,
                extra_digits=(r1.digits_guaranteed, r2.digits_guaranteed),
            )
        )
    return records


_RUNNERS = {
    IdentityKind.HankelCongruence: _run_hankel_congruence,
    IdentityKind.THvsMoment: _run_th_vs_moment,
    IdentityKind.QuarterWave: _run_quarter_wave,
    IdentityKind.MomentToToeplitz: _run_moment_to_toeplitz,
    IdentityKind.SkewSquare: _run_skew_square,
    IdentityKind.CSeqSquare: _run_cseq_square,
    IdentityKind.MomentSkewSquare: _run_moment_skew_square,
    IdentityKind.ParitySplitEven: _run_parity_split_even,
    IdentityKind.ParitySplitChi: _run_parity_split_chi,
}


def verify(kind, inp, N_values, mode: str = "exact", bits: int | None = None) -> IdentityReport:
    """Check one identity over the given matrix sizes.

    N_values may be an int (meaning 1..N) or an explicit list.  mode is
    "exact" or "hp"; integral-backed kinds run hp regardless, with a note.
    """
    kind = IdentityKind(kind)
    Ns = _n_list(N_values)
    if mode not in ("exact", "hp"):
        raise ValueError("mode must be exact or hp")
    bits = bits or DEFAULT_BITS
    if bits < 64:
        raise ValueError("bits must be >= 64")
    notes = []
    if kind in _HP_ONLY and mode == "exact":
        notes.append(
            "no exact arithmetic for integral-backed data; running hp at %d bits"
            % bits
        )
        mode = "hp"
    records = _RUNNERS[kind](inp, Ns, mode, bits, notes)
    verdict = "pass" if all(r.ok for r in records) else "fail"
    return IdentityReport(kind.value, mode, bits if mode == "hp" else None, records, notes, verdict)


def pfaffian_link(b: MomentSymbol, N_values, bits: int | None = None) -> IdentityReport:
    """Pf(T_2N(c))^2 = det T_2N(c) and |Pf(T_2N(c))| = |det H_N[b]|.

    Two records per N: the Pfaffian-square check, then the cross-family
    magnitude check against the Hankel moment determinant.
    """
    if not isinstance(b, MomentSymbol):
        raise SpeciesError("a moment symbol is required")
    Ns = _n_list(N_values)
    bits = bits or DEFAULT_BITS
    c = SkewFromMoment(b)
    field = hp_real(bits) if b.real else hp_complex(bits)
    notes = []
    records = []
    for N in Ns:
        T2 = toeplitz(c, 2 * N, field)
        pf = pfaffian(T2)
        detT = _det(T2, bits)
        H = hankel_moment(b, N, field)
        detH = _det(H, bits)
        with mp.workprec(2 * bits + 32):
            pf_sq = pf * pf
        records.append(
            _make_record(
                N, pf_sq, detT, "hp", bits, extra_digits=(detT.digits_guaranteed,)
            )
        )
        with mp.workprec(2 * bits + 32):
            records.append(
                _make_record(
                    N,
                    abs(pf),
                    abs(detH.value),
                    "hp",
                    bits,
                    extra_digits=(detH.digits_guaranteed,),
                )
            )
    verdict = "pass" if all(r.ok for r in records) else "fail"
    return IdentityReport("pfaffian_link", "hp", bits, records, notes, verdict)


def _applicable_kinds(inp, mode: str):
    if isinstance(inp, MomentSymbol):
        applicable = {IdentityKind.MomentSkewSquare}
        if inp.weight == "sqrt_ratio" and inp.parity == "even":
            applicable.add(IdentityKind.MomentToToeplitz)
        return applicable
    odd = (
        isinstance(inp, ScalarSeq)
        and inp.symmetry == "odd"
        or isinstance(inp, symbols.FourierSymbol)
        and inp.symmetry == "odd"
    )
    if odd:
        return {IdentityKind.CSeqSquare}
    applicable = {
        IdentityKind.HankelCongruence,
        IdentityKind.SkewSquare,
        IdentityKind.THvsMoment,
    }
    try:
        even_support = (
            inp.even_support()
            if isinstance(inp, symbols.FourierSymbol)
            else all(n % 2 == 0 for n in getattr(inp, "entries", inp))
        )
    except Exception:
        even_support = False
    if even_support:
        applicable |= {
            IdentityKind.QuarterWave,
            IdentityKind.ParitySplitEven,
            IdentityKind.ParitySplitChi,
        }
    return applicable


def verify_all(inp, N_max, mode: str = "exact", bits: int | None = None):
    """Run every applicable kind; inapplicable kinds get a skipped report."""
    bits = bits or DEFAULT_BITS
    applicable = _applicable_kinds(inp, mode)
    reports = []
    for kind in IdentityKind:
        if kind not in applicable:
            reports.append(
                IdentityReport(
                    kind.value, mode, None, [], ["species mismatch; skipped"], "skipped"
                )
            )
            continue
        if mode == "exact" and kind in _HP_ONLY:
            reports.append(
                IdentityReport(
                    kind.value,
                    mode,
                    None,
                    [],
                    ["integral-backed kind has no exact mode; skipped"],
                    "skipped",
                )
            )
            continue
        try:
            reports.append(verify(kind, inp, N_max, mode, bits))
        except SpeciesError as exc:
            reports.append(
                IdentityReport(kind.value, mode, None, [], [str(exc)], "skipped")
            )
        except Exception as exc:
            reports.append(
                IdentityReport(
                    kind.value,
                    mode,
                    bits,
                    [],
                    ["%s: %s" % (type(exc).__name__, exc)],
                    "error",
                )
            )
    return reports
