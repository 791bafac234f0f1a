"""Trace arithmetic for degree-2 Salem factors of rank-22 isometries.

A candidate characteristic polynomial has the shape
F(X) = (X^2 - tau X + 1) * Phi_l(X)^m with m * phi(l) = 20.  This
module enumerates the sixteen possible (l, m), applies the square
tests at X = 1 and X = -1, derives the closed-form trace set

    {2} u {alpha^2 - 2 : alpha >= 3}
        u {alpha^2 + 2 : alpha >= 1, alpha not excluded},

and cross-checks the closed form against the necessary-condition plus
realizability-witness reconstruction, trace by trace.

Realizability rests on two external inputs and one internal one: the
Hashimoto-Keum-Lee theorem (encoded as an axiom table, not re-derived),
the certified trace-3 construction from k3glue.certify, and the
squaring identity extending trace 3 to trace 7.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import euler_phi, is_perfect_square
from .cyclotomic import cyclotomic_poly
from .matrices import charpoly, companion
from .polynomials import IntPoly, format_decimal, real_root_isolation, refine_root

#: 22 minus the degree of the Salem factor X^2 - tau X + 1
COFACTOR_DEGREE = 20

#: sign epsilon by cyclotomic index: the filter forces tau + 2*epsilon
#: to be a perfect square alpha^2 for these six indices
EPSILON_BY_INDEX = {1: 1, 5: 1, 25: 1, 2: -1, 10: -1, 50: -1}

#: alpha with tau = alpha^2 + 2 not realizable: outside the
#: Hashimoto-Keum-Lee table and (for alpha >= 2) not covered by any
#: other witness
EXCLUDED_ALPHAS = (2, 3, 5, 7, 13, 17)


def hkl_realizable(alpha, epsilon):
    """External result (Hashimoto-Keum-Lee), taken as an axiom:
    tau = alpha^2 - 2*epsilon is realized for alpha in A_epsilon, with
    A_+1 = Z>=4 and A_-1 = Z>=4 minus {5, 7, 13, 17}."""
    if epsilon == 1:
        return alpha >= 4
    if epsilon == -1:
        return alpha >= 4 and alpha not in (5, 7, 13, 17)
    raise ValueError("epsilon must be +1 or -1")


@lru_cache(maxsize=1)
def candidate_pairs():
    """All (l, m) with m * euler_phi(l) = 20, ordered by (phi(l), l).

    Exhaustive: phi(l) >= sqrt(l/2), so l <= 2 d^2 covers phi(l) = d.
    """
    pairs = []
    for d in (1, 2, 4, 5, 10, 20):
        m = COFACTOR_DEGREE // d
        for l in range(1, 2 * d * d + 1):
            if euler_phi(l) == d:
                pairs.append((l, m))
    return tuple(pairs)


@dataclass(frozen=True)
class TraceCandidate:
    """One factorization shape F = (X^2 - tau X + 1) * Phi_l^m."""

    tau: int
    l: int
    m: int

    def __post_init__(self):
        if self.tau < 3:
            raise ValueError("trace must be at least 3")
        if self.m * euler_phi(self.l) != COFACTOR_DEGREE:
            raise ValueError("cyclotomic cofactor must have degree 20")

    @property
    def epsilon(self):
        return EPSILON_BY_INDEX.get(self.l)

    @property
    def alpha(self):
        """Nonnegative alpha with tau + 2*epsilon = alpha^2, if any."""
        eps = self.epsilon
        if eps is None:
            return None
        s = self.tau + 2 * eps
        return math.isqrt(s) if is_perfect_square(s) else None

    def salem_factor(self):
        return IntPoly([1, -self.tau, 1])

    def full_polynomial(self):
        return self.salem_factor() * cyclotomic_poly(self.l) ** self.m


@dataclass(frozen=True)
class SquareFilterResult:
    candidate: TraceCandidate
    at_1: int
    at_minus_1: int
    signed_product: int
    passed: bool


def square_condition_filter(candidate):
    """Square tests on F at X = 1 and X = -1.

    Passes iff |F(1)|, |F(-1)|, and (-1)^11 F(1) F(-1) are all perfect
    squares; zero counts as a square.
    """
    f = candidate.full_polynomial()
    at_1, at_minus_1 = f(1), f(-1)
    signed = -at_1 * at_minus_1  # (-1)^11, 11 = 22/2
    passed = (
        is_perfect_square(abs(at_1))
        and is_perfect_square(abs(at_minus_1))
        and is_perfect_square(signed)
    )
    return SquareFilterResult(candidate, at_1, at_minus_1, signed, passed)


def square_condition_closed_form(candidate):
    """The same predicate through |F(1)| = (tau-2)|Phi_l(1)|^m and
    |F(-1)| = (tau+2)|Phi_l(-1)|^m, without building F.  Kept as an
    independent code path; the test suite pins the two together."""
    phi = cyclotomic_poly(candidate.l)
    p1, pm1 = phi(1), phi(-1)
    at_1 = (2 - candidate.tau) * p1**candidate.m
    at_minus_1 = (2 + candidate.tau) * pm1**candidate.m
    signed = (candidate.tau**2 - 4) * (p1 * pm1) ** candidate.m
    passed = (
        is_perfect_square((candidate.tau - 2) * abs(p1) ** candidate.m)
        and is_perfect_square((candidate.tau + 2) * abs(pm1) ** candidate.m)
        and is_perfect_square(signed)
    )
    return SquareFilterResult(candidate, at_1, at_minus_1, signed, passed)


@dataclass(frozen=True)
class AdmissibleRoute:
    """A shape surviving the filter for a given trace, with the derived
    square root alpha and (outside l in {1, 2}) the auxiliary square."""

    l: int
    m: int
    epsilon: object  # +1, -1, or None when the index carries no epsilon
    alpha: object
    aux_square: object  # 5*(tau - 2*epsilon) for l in {5, 10, 25, 50}


def admissible_values(tau):
    """Routes through the square filter for this trace, in candidate order.

    For l outside {1, 2} the auxiliary condition "5*(tau - 2*epsilon)
    is a perfect square" is required on top of the filter.
    """
    if tau < 3:
        raise ValueError("trace must be at least 3")
    routes = []
    for l, m in candidate_pairs():
        cand = TraceCandidate(tau, l, m)
        if not square_condition_filter(cand).passed:
            continue
        eps = cand.epsilon
        if eps is None:
            # no epsilon bookkeeping exists for this index; recorded so
            # the property suite can assert it never happens
            routes.append(AdmissibleRoute(l, m, None, None, None))
        elif l in (1, 2):
            routes.append(AdmissibleRoute(l, m, eps, cand.alpha, None))
        else:
            aux = 5 * (tau - 2 * eps)
            if is_perfect_square(aux):
                routes.append(AdmissibleRoute(l, m, eps, cand.alpha, aux))
    return tuple(routes)


@dataclass(frozen=True)
class RulingOut:
    alpha: int
    excluded: bool
    reasons: tuple  # (cyclotomic index, reason) pairs


def lemma_ruling_out(alpha, epsilon=-1):
    """Exclusion test for traces tau = alpha^2 + 2 (epsilon = -1 only).

    alpha in {2, 3, 5, 7, 13, 17} is excluded: the Phi_2^20 route has no
    Hashimoto-Keum-Lee witness, and the Phi_10^5 / Phi_50 routes already
    fail the necessary condition because 5 does not divide alpha^2 + 4.
    alpha = 1 stays allowed (trace 3 is realized by the certified
    pipeline), as does every alpha in the axiom table.
    """
    if epsilon != -1:
        raise ValueError("the exclusion argument is specific to epsilon = -1")
    if alpha < 1:
        raise ValueError("alpha must be positive")
    if alpha == 1 or hkl_realizable(alpha, -1):
        return RulingOut(alpha, False, ())
    reasons = [(2, "HKL A_-1 exclusion")]
    aux = alpha * alpha + 4
    if aux % 5 != 0:
        reasons.append((10, f"5 does not divide alpha^2+4={aux}"))
        reasons.append((50, f"5 does not divide alpha^2+4={aux}"))
    return RulingOut(alpha, True, tuple(reasons))


def theorem_b_set(bound):
    """The trace set intersected with [2, bound], by its closed form.

    2 (the identity automorphism) plus alpha^2 - 2 for alpha >= 3 plus
    alpha^2 + 2 for alpha >= 1 outside EXCLUDED_ALPHAS, sorted.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    values = {2}
    alpha = 3
    while alpha * alpha - 2 <= bound:
        values.add(alpha * alpha - 2)
        alpha += 1
    alpha = 1
    while alpha * alpha + 2 <= bound:
        if alpha not in EXCLUDED_ALPHAS:
            values.add(alpha * alpha + 2)
        alpha += 1
    return sorted(values)


@lru_cache(maxsize=1)
def _pipeline_certified():
    """Whether the full trace-3 construction certifies; cached since the
    report is deterministic."""
    from .certify import certify

    return certify().passed


@lru_cache(maxsize=1)
def _squaring_identity_holds():
    """charpoly(C^2) = X^2 - 7X + 1 for C the companion of X^2 - 3X + 1:
    squaring the trace-3 automorphism realizes trace 7."""
    c = companion(IntPoly([1, -3, 1]))
    return charpoly(c @ c) == IntPoly([1, -7, 1])


def _witness_for(tau):
    """Name of the realizability witness for this trace, or None.

    Priority: the certified pipeline (3), the squaring identity (7),
    then the Hashimoto-Keum-Lee axiom with epsilon = +1 before -1.
    """
    if tau == 3:
        return "certified pipeline (trace 3)" if _pipeline_certified() else None
    if tau == 7:
        if _squaring_identity_holds() and _pipeline_certified():
            return "squaring identity: trace 3 -> 7"
        return None
    up = tau + 2
    if is_perfect_square(up) and hkl_realizable(math.isqrt(up), 1):
        return f"HKL axiom (alpha={math.isqrt(up)}, epsilon=+1)"
    down = tau - 2
    if is_perfect_square(down) and hkl_realizable(math.isqrt(down), -1):
        return f"HKL axiom (alpha={math.isqrt(down)}, epsilon=-1)"
    return None


@dataclass(frozen=True)
class CrossValidationRow:
    tau: int
    in_closed_form: bool
    routes: tuple
    witness: object  # str or None
    note: str
    consistent: bool


@dataclass(frozen=True)
class CrossValidationReport:
    rows: tuple
    mismatches: int

    def row(self, tau):
        return self.rows[tau - self.rows[0].tau]

    def to_text(self):
        lines = []
        for r in self.rows:
            fields = [
                f"tau={r.tau}",
                f"closed_form={'yes' if r.in_closed_form else 'no'}",
                "routes=" + (",".join(f"l{z.l}" for z in r.routes) or "-"),
                f"witness={r.witness or '-'}",
            ]
            if r.note:
                fields.append(f"note={r.note}")
            if not r.consistent:
                fields.append("MISMATCH")
            lines.append(" ".join(fields))
        lines.append(f"mismatches {self.mismatches}")
        return "\n".join(lines) + "\n"


def cross_validate(bound):
    """Closed form vs necessary-condition-plus-witness, trace by trace.

    A row is consistent when membership in the closed-form set equals
    "some route passes the filter AND a realizability witness exists".
    """
    if bound < 3:
        raise ValueError("bound must be at least 3")
    closed = set(theorem_b_set(bound))
    rows = []
    mismatches = 0
    for tau in range(3, bound + 1):
        routes = admissible_values(tau)
        witness = _witness_for(tau)
        member = tau in closed
        reconstructed = bool(routes) and witness is not None
        note = "necessary passed, no witness" if routes and witness is None else ""
        consistent = member == reconstructed
        if not consistent:
            mismatches += 1
        rows.append(
            CrossValidationRow(tau, member, routes, witness, note, consistent)
        )
    return CrossValidationReport(tuple(rows), mismatches)


@dataclass(frozen=True)
class SalemDegree2:
    """The larger root of X^2 - tau X + 1 with an isolating interval.

    tau = 2 degenerates to the double root 1, flagged rather than
    rejected.
    """

    tau: int
    minimal_polynomial: IntPoly
    interval: tuple
    decimal: str
    digits: int
    degenerate: bool


def salem_value(tau, digits=5):
    """Decimal enclosure of (tau + sqrt(tau^2 - 4)) / 2.

    The isolating interval is refined until both endpoints print
    identically at `digits` significant digits; the value is a
    quadratic irrational for tau >= 3, so this terminates.
    """
    if tau < 2:
        raise ValueError("trace below 2 gives no real quadratic unit")
    if digits < 1:
        raise ValueError("need at least one significant digit")
    p = IntPoly([1, -tau, 1])
    if tau == 2:
        one = Fraction(1)
        return SalemDegree2(2, p, (one, one), format_decimal(1, digits), digits, True)
    interval = real_root_isolation(p)[-1]
    width = Fraction(1, 10 ** (digits + 1))
    interval = refine_root(p, interval, width)
    while format_decimal(interval[0], digits) != format_decimal(interval[1], digits):
        width /= 16
        interval = refine_root(p, interval, width)
    return SalemDegree2(
        tau, p, interval, format_decimal(interval[0], digits), digits, False
    )
