"""Coherence and triviality checkers for families of functions.

Two notions are checked at finite scale.  The first compares alternating
sums of a family indexed by increasing tuples against finite supports; the
second cascades trivializations: a family s^n is coherent when restrictions
of later members differ from earlier ones by functions that are trivial one
degree down.  The conversion between the two is an index rearrangement in one
direction, and the checkers here verify supplied witnesses rather than solve
for them.

Defect supports come from certificates where available: the families derived
from the coefficient systems have their exact defects computed through the
section of a boundary, and uncertified families are only scanned on windows.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Tuple

from higherwalks.fsystem import f_coeff, full_support, m_value, section_defect, x_slice
from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import Ordinal, ZERO, as_ordinal

OrdTuple = Tuple[Ordinal, ...]

EXACT = "exact"
INFINITE = "infinite"


class CertificationError(ValueError):
    """A check required a support certificate that no oracle supplies."""


# ---------------------------------------------------------------------------
# 0-triviality


def is_0_trivial(values: Callable[[Ordinal], object], window: Sequence, hint=None, certify: bool = True) -> dict:
    """Whether a function is finitely supported, per certificate.

    ``hint`` is None (unknown), ("exact", args) for a complete support list,
    or ("infinite",) for a certified infinite support.  Without a hint only
    the window can be scanned, which never certifies triviality.
    """
    window = [as_ordinal(w) for w in window]
    observed = sorted(str(a) for a in window if values(a) not in (0, {}, None))
    if hint is None:
        if certify:
            raise CertificationError("no support certificate available")
        return {"pass": None, "window_support": observed, "certified": False}
    if hint[0] == INFINITE:
        return {"pass": False, "window_support": observed, "certified": True}
    exact = sorted({as_ordinal(a) for a in hint[1]})
    for a in window:
        nonzero = values(a) not in (0, {}, None)
        if nonzero != (a in exact):
            raise CertificationError(f"certificate disagrees with the value at {a}")
    return {"pass": True, "support": [str(a) for a in exact], "certified": True}


# ---------------------------------------------------------------------------
# families derived from the coefficient systems


def _freeze(d: Dict) -> frozenset:
    return frozenset(d.items())


class SliceFamily:
    """First-coordinate slices of the degree-n coefficient system at 0.

    Member at an increasing n-tuple maps alpha below its minimum to the
    x = alpha plane of the system's value at (0, tuple); alternating-sum
    defects are exact, carried by the section of a boundary.
    """

    def __init__(self, sys: LadderSystem, n: int):
        if n not in (1, 2):
            raise ValueError("slice families are built at degrees 1 and 2")
        self.sys = sys
        self.n = n

    def value(self, index: OrdTuple, alpha: Ordinal):
        index = tuple(as_ordinal(i) for i in index)
        alpha = as_ordinal(alpha)
        if not (ZERO < index[0] and alpha < index[0]):
            raise ValueError("arguments sit below the index minimum, which is positive")
        if self.n == 2:
            # degree-2 values have finite support below the countable bound
            sliced = {
                t: z
                for t, z in full_support(self.sys, (ZERO,) + index).items()
                if t[0] == alpha
            }
            return _freeze(sliced) if sliced else 0
        (beta,) = index
        if alpha.is_zero:
            sliced = dict(x_slice(self.sys, (ZERO, beta)))
            return _freeze(sliced) if sliced else 0
        # slice the value at (0, beta) through the value at (alpha, beta): the
        # remaining faces of (0, alpha, beta) miss the x = alpha plane
        sliced = dict(x_slice(self.sys, (alpha, beta)))
        defect = section_defect(self.sys, (ZERO, alpha, beta))
        for t, z in defect.entries.items():
            if t[0] == alpha:
                new = sliced.get(t, 0) - z
                if new:
                    sliced[t] = new
                else:
                    sliced.pop(t, None)
        return _freeze(sliced) if sliced else 0

    def defect_support(self, tup: OrdTuple):
        """Exact support of the alternating sum over the faces of tup."""
        tup = tuple(as_ordinal(t) for t in tup)
        defect = section_defect(self.sys, (ZERO,) + tup)
        args = sorted({t[0] for t in defect.entries if t[0] < tup[0]})
        return (EXACT, args)


class Rho2Family:
    """Fiber maps of the step-count statistic; coherent mod bounded, not mod finite."""

    def __init__(self, sys: LadderSystem):
        self.sys = sys
        self.n = 1

    def value(self, index: OrdTuple, alpha: Ordinal) -> int:
        from higherwalks.walks import rho2

        (beta,) = index
        return rho2(self.sys, alpha, beta)

    def defect_support(self, tup: OrdTuple):
        return None


class ConstantZeroFamily:
    def __init__(self, n: int):
        self.n = n

    def value(self, index: OrdTuple, alpha: Ordinal) -> int:
        return 0

    def defect_support(self, tup: OrdTuple):
        return (EXACT, [])


def check_coherent_I(family, tuples: Sequence[OrdTuple], window: Sequence, certify: bool = False) -> List[dict]:
    """Alternating-sum checks over sampled (n+1)-tuples.

    With an exact defect certificate the listed arguments are verified to be
    the full disagreement set on the window; otherwise the window scan is
    reported without a verdict (or rejected when certification is demanded).
    """
    n = family.n
    window = [as_ordinal(w) for w in window]
    reports = []
    for tup in tuples:
        tup = tuple(as_ordinal(t) for t in tup)
        if len(tup) != n + 1:
            raise ValueError(f"expected ({n + 1})-tuples for a {n}-coherent family")

        def defect_at(alpha: Ordinal):
            total: Dict = {}
            unfrozen = 0
            for i in range(len(tup)):
                face = tup[: i] + tup[i + 1 :]
                if alpha >= face[0]:
                    continue
                val = family.value(face, alpha)
                sign = (-1) ** i
                if isinstance(val, int):
                    unfrozen += sign * val
                else:
                    for t, z in val:
                        new = total.get(t, 0) + sign * z
                        if new:
                            total[t] = new
                        else:
                            total.pop(t, None)
            if total:
                return _freeze(total)
            return unfrozen

        hint = family.defect_support(tup)
        wargs = [a for a in window if a < tup[0]]
        try:
            verdict = is_0_trivial(defect_at, wargs, hint, certify=certify)
        except CertificationError:
            if certify:
                raise
            verdict = {"pass": None, "certified": False}
        reports.append({"tuple": [str(t) for t in tup], **verdict})
    return reports


# ---------------------------------------------------------------------------
# conversion between the two notions


class TypeIIFamily:
    """Index-rearranged family: member at gamma maps (alpha, rest) appropriately."""

    def __init__(self, source, n: int):
        self.source = source
        self.n = n

    def value(self, gamma: Ordinal, alpha: Ordinal, rest: OrdTuple = ()):
        index = tuple(rest) + (as_ordinal(gamma),)
        return self.source.value(index, alpha)

    def natural_witness(self, pair: OrdTuple) -> Callable[[Ordinal], object]:
        """At n=2: the source member at the index pair, as a one-argument function."""
        pair = tuple(as_ordinal(p) for p in pair)
        return lambda alpha: self.source.value(pair, alpha)


def a_n_convert(family, n: int) -> TypeIIFamily:
    """Rearrange an n-coherent family into the cascading form."""
    if family.n != n:
        raise ValueError("arity mismatch")
    return TypeIIFamily(family, n)


def reverse_a_1(family_II: TypeIIFamily):
    """Invert the n=1 rearrangement, a bijection at this arity."""
    return family_II.source


def check_coherent_II(family_II: TypeIIFamily, sample_pairs: Sequence[OrdTuple], window: Sequence, witnesses=None, betas: Sequence = (), certify: bool = False) -> List[dict]:
    """Verify cascading trivializations for sampled index pairs.

    At n=1 the difference of two members must itself be finitely supported.
    At n=2 each pair needs a witness function whose restrictions trivialize
    the member differences slice by slice; ``witnesses`` maps a pair to the
    witness, defaulting to the natural rearrangement witnesses.
    """
    n = family_II.n
    window = [as_ordinal(w) for w in window]
    reports = []
    for pair in sample_pairs:
        gamma, delta = (as_ordinal(p) for p in pair)
        if not gamma < delta:
            raise ValueError("index pairs must increase")
        if n == 1:
            def diff(alpha: Ordinal):
                a = family_II.value(delta, alpha)
                b = family_II.value(gamma, alpha)
                if isinstance(a, int) and isinstance(b, int):
                    return a - b
                return 0 if a == b else 1

            hint = family_II.source.defect_support((gamma, delta))
            wargs = [a for a in window if a < gamma]
            verdict = is_0_trivial(diff, wargs, hint, certify=certify)
            reports.append({"pair": (str(gamma), str(delta)), **verdict})
            continue
        if witnesses is None:
            witness = family_II.natural_witness((gamma, delta))
        else:
            witness = witnesses((gamma, delta))
        rows = []
        ok = True
        for beta in betas:
            beta = as_ordinal(beta)
            if not beta < gamma:
                continue

            def expression(alpha: Ordinal, beta=beta):
                w = witness(alpha)
                a = family_II.value(delta, alpha, (beta,))
                b = family_II.value(gamma, alpha, (beta,))
                acc: Dict = {}
                for val, sign in ((w, 1), (a, -1), (b, 1)):
                    if isinstance(val, int):
                        if val:
                            acc[()] = acc.get((), 0) + sign * val
                        continue
                    for t, z in val:
                        new = acc.get(t, 0) + sign * z
                        if new:
                            acc[t] = new
                        else:
                            acc.pop(t, None)
                return _freeze(acc) if acc else 0

            hint = None
            if witnesses is None and hasattr(family_II.source, "defect_support"):
                hint = family_II.source.defect_support((beta, gamma, delta))
            wargs = [a for a in window if a < beta]
            try:
                verdict = is_0_trivial(expression, wargs, hint, certify=certify)
            except CertificationError:
                if certify:
                    raise
                verdict = {"pass": None, "certified": False}
            rows.append({"beta": str(beta), **verdict})
            if verdict["pass"] is False:
                ok = False
        reports.append({"pair": (str(gamma), str(delta)), "slices": rows, "pass": ok and all(r["pass"] for r in rows) if rows else None})
    return reports


# ---------------------------------------------------------------------------
# the coded bijection onto triples, and the indicator family


def _cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def _cantor_unpair(z: int) -> Tuple[int, int]:
    w = int(((8 * z + 1) ** 0.5 - 1) // 2)
    while (w + 1) * (w + 2) // 2 <= z:
        w += 1
    while w * (w + 1) // 2 > z:
        w -= 1
    b = z - w * (w + 1) // 2
    return w - b, b


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


def _binom3(n: int) -> int:
    return n * (n - 1) * (n - 2) // 6


def _cns3_unrank(r: int) -> Tuple[int, int, int]:
    c = 2
    while _binom3(c + 1) <= r:
        c += 1
    r -= _binom3(c)
    b = 1
    while _binom2(b + 1) <= r:
        b += 1
    r -= _binom2(b)
    return r, b, c


def _cns3_rank(t: Tuple[int, int, int]) -> int:
    a, b, c = t
    return a + _binom2(b) + _binom3(c)


def _cns2_unrank(r: int) -> Tuple[int, int]:
    b = 1
    while _binom2(b + 1) <= r:
        b += 1
    return r - _binom2(b), b


def _cns2_rank(a: int, b: int) -> int:
    return a + _binom2(b)


class Theta:
    """A fixed computable bijection from [0, w^2) onto its increasing triples.

    The m-th block [w*(m-1), w*m) enumerates exactly the triples whose
    maximum first appears below w*m, so every w*m is a certified closure
    point: the image of w*m is precisely the set of triples below it.
    """

    def __init__(self):
        self.window = Ordinal.omega_power(Ordinal.from_int(2))

    @staticmethod
    def _split(x: Ordinal) -> Tuple[int, int]:
        """ordinal w*q + r -> (q, r)."""
        q = r = 0
        for exp, coeff in x.terms:
            if exp == Ordinal.from_int(1):
                q = coeff
            elif exp.is_zero:
                r = coeff
            else:
                raise ValueError(f"{x} is outside the w^2 window")
        return q, r

    @staticmethod
    def _join(q: int, r: int) -> Ordinal:
        return Ordinal.omega_power(Ordinal.from_int(1), q) + Ordinal.from_int(r)

    def _code_below(self, z: Ordinal, x: Ordinal) -> int:
        """Position of x in the block-aware enumeration of [0, z)."""
        zq, zr = self._split(z)
        q, r = self._split(x)
        if q == zq:
            return r
        return zr + r * zq + q

    def _decode_below(self, z: Ordinal, code: int) -> Ordinal:
        zq, zr = self._split(z)
        if code < zr:
            return self._join(zq, code)
        code -= zr
        return self._join(code % zq, code // zq)

    def apply(self, alpha: Ordinal) -> OrdTuple:
        alpha = as_ordinal(alpha)
        m, k = self._split(alpha)
        m += 1
        if m == 1:
            a, b, c = _cns3_unrank(k)
            return tuple(Ordinal.from_int(v) for v in (a, b, c))
        j, s = _cantor_unpair(k)
        z = self._join(m - 1, j)
        c1, c2 = _cns2_unrank(s)
        x, y = sorted((self._decode_below(z, c1), self._decode_below(z, c2)))
        return (x, y, z)

    def invert(self, triple: Sequence) -> Ordinal:
        x, y, z = (as_ordinal(t) for t in triple)
        zq, zr = self._split(z)
        if zq == 0:
            rank = _cns3_rank((x.to_int(), y.to_int(), z.to_int()))
            return Ordinal.from_int(rank)
        c1, c2 = sorted((self._code_below(z, x), self._code_below(z, y)))
        k = _cantor_pair(zr, _cns2_rank(c1, c2))
        return self._join(zq, k)

    def closure_points(self, count: int) -> List[Ordinal]:
        return [self._join(m, 0) for m in range(1, count + 1)]


def phi_theta(sys: LadderSystem, theta: Theta, beta, alpha) -> int:
    """Indicator of the coded triple landing in the support of the system at beta."""
    beta, alpha = as_ordinal(beta), as_ordinal(alpha)
    if not alpha < beta:
        raise ValueError("requires alpha < beta")
    triple = theta.apply(alpha)
    if not (triple[0] < triple[1] and triple[1] < triple[2]):
        return 0
    return 1 if f_coeff(sys, (ZERO, beta), triple) != 0 else 0


class PhiThetaFamily:
    """The {0,1}-valued family indexed by certified closure points."""

    def __init__(self, sys: LadderSystem, theta: Theta = None):
        self.sys = sys
        self.theta = theta or Theta()
        self.n = 1

    def value(self, index: OrdTuple, alpha: Ordinal) -> int:
        (beta,) = index
        return phi_theta(self.sys, self.theta, beta, alpha)

    def defect_support(self, tup: OrdTuple):
        beta, gamma = (as_ordinal(t) for t in tup)
        defect = section_defect(self.sys, (ZERO, beta, gamma))
        args = []
        for t in defect.entries:
            if all(c < beta for c in t):
                try:
                    args.append(self.theta.invert(t))
                except ValueError:
                    continue
        return (EXACT, sorted({a for a in args if a < beta}))


# ---------------------------------------------------------------------------
# slice functions of the coefficient systems


def s1(sys: LadderSystem, gamma, alpha, beta) -> int:
    """Characteristic slice of the degree-1 system at the z = beta plane."""
    gamma, alpha, beta = as_ordinal(gamma), as_ordinal(alpha), as_ordinal(beta)
    if not (alpha < beta and beta <= gamma):
        raise ValueError("requires alpha < beta <= gamma")
    if beta.is_limit:
        club = sys.ladder(beta)
        return 1 if club.contains(alpha) and alpha >= m_value(sys, beta, gamma) else 0
    return 1 if beta == alpha + 1 else 0


def s2(sys: LadderSystem, delta, beta, gamma) -> Dict[OrdTuple, int]:
    """z = beta slice of the degree-2 system at (0, gamma, delta), cut below min(beta, gamma)."""
    delta, beta, gamma = as_ordinal(delta), as_ordinal(beta), as_ordinal(gamma)
    if not (gamma < delta and beta <= delta):
        raise ValueError("requires gamma < delta and beta <= delta")
    cut = beta if beta < gamma else gamma
    support = full_support(sys, (ZERO, gamma, delta))
    return {
        t: z
        for t, z in support.items()
        if t[-1] == beta and t[0] < cut and all(c < beta for c in t[1:-1])
    }
