"""Exact linear and integer programming over the rationals.

A dense two-phase tableau simplex on gmpy2 rationals, and a depth-first
branch-and-bound on top of it.  Sized for desk-scale instances (tens of
rows, hundreds of columns); there is no floating point anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from gmpy2 import mpq

LE, GE, EQ = "<=", ">=", "=="

# Dantzig pricing until this many consecutive degenerate pivots, then Bland
_DEGENERATE_SWITCH = 30


class LPError(RuntimeError):
    pass


class SearchBudgetExceeded(LPError):
    pass


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "target" (stopped at target, not proven) | "unbounded"
    value: Optional[Fraction] = None
    x: Optional[list[Fraction]] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def _frac(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class _Tableau:
    def __init__(self, rows: list[list[mpq]], basis: list[int], ncols: int):
        self.T = rows
        self.basis = basis
        self.n = ncols

    def pivot(self, z: list[mpq], r: int, e: int) -> None:
        T = self.T
        pr = T[r]
        p = pr[e]
        if p != 1:
            inv = 1 / p
            pr = [a * inv for a in pr]
            T[r] = pr
        nz = [j for j, a in enumerate(pr) if a]
        for i, ri in enumerate(T):
            if i != r:
                f = ri[e]
                if f:
                    for j in nz:
                        ri[j] -= f * pr[j]
        f = z[e]
        if f:
            for j in nz:
                z[j] -= f * pr[j]
        self.basis[r] = e

    def optimize(self, z: list[mpq], allowed: int) -> str:
        """Maximize; z holds reduced costs (negative = improving) and z[-1] the value.
        Only columns < allowed may enter."""
        T, n = self.T, self.n
        degenerate = 0
        while True:
            bland = degenerate >= _DEGENERATE_SWITCH
            e = -1
            best = 0
            for j in range(allowed):
                zj = z[j]
                if zj < 0:
                    if bland:
                        e = j
                        break
                    if zj < best:
                        best, e = zj, j
            if e < 0:
                return "optimal"
            r = -1
            ratio = None
            for i, ri in enumerate(T):
                a = ri[e]
                if a > 0:
                    t = ri[n] / a
                    if ratio is None or t < ratio or (t == ratio and self.basis[i] < self.basis[r]):
                        ratio, r = t, i
            if r < 0:
                return "unbounded"
            degenerate = degenerate + 1 if ratio == 0 else 0
            self.pivot(z, r, e)


def solve_lp(c: Sequence, A: Sequence[Sequence], senses: Sequence[str], b: Sequence,
             maximize: bool = True, lower: Optional[Sequence] = None,
             upper: Optional[Sequence] = None) -> LPResult:
    """Optimize c.x subject to A x (senses) b and lower <= x <= upper.

    ``lower`` defaults to 0; an ``upper`` entry of None means unbounded.
    """
    n = len(c)
    lower = [0] * n if lower is None else list(lower)
    upper = [None] * n if upper is None else list(upper)
    rows: list[list[mpq]] = []
    rhs: list[mpq] = []
    sns: list[str] = []
    for a, s, bi in zip(A, senses, b):
        a = [_q(v) for v in a]
        # shift x = lower + x'
        shift = sum((a[j] * _q(lower[j]) for j in range(n) if lower[j]), mpq(0))
        rows.append(a)
        rhs.append(_q(bi) - shift)
        sns.append(s)
    for j in range(n):
        if upper[j] is not None:
            span = _q(upper[j]) - _q(lower[j])
            if span < 0:
                return LPResult("infeasible")
            row = [mpq(0)] * n
            row[j] = mpq(1)
            rows.append(row)
            rhs.append(span)
            sns.append(LE)
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
            sns[i] = {LE: GE, GE: LE, EQ: EQ}[sns[i]]
    n_slack = sum(1 for s in sns if s != EQ)
    n_art = sum(1 for s in sns if s != LE)
    N = n + n_slack + n_art
    T: list[list[mpq]] = []
    basis: list[int] = []
    si, ai = n, n + n_slack
    art_rows = []
    for i in range(m):
        row = rows[i] + [mpq(0)] * (n_slack + n_art) + [rhs[i]]
        if sns[i] == LE:
            row[si] = mpq(1)
            basis.append(si)
            si += 1
        else:
            if sns[i] == GE:
                row[si] = mpq(-1)
                si += 1
            row[ai] = mpq(1)
            basis.append(ai)
            art_rows.append(i)
            ai += 1
        T.append(row)
    tab = _Tableau(T, basis, N)

    if n_art:
        # phase I: maximize -(sum of artificials)
        z = [mpq(0)] * (N + 1)
        for i in art_rows:
            for j, v in enumerate(T[i]):
                if j < n + n_slack or j == N:
                    z[j] -= v
        tab.optimize(z, n + n_slack)
        if z[N] != 0:
            return LPResult("infeasible")
        # drive artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(len(T)):
            if tab.basis[i] >= n + n_slack:
                e = next((j for j in range(n + n_slack) if T[i][j] != 0), -1)
                if e < 0:
                    continue
                tab.pivot(z, i, e)
            keep.append(i)
        tab.T = [T[i][:n + n_slack] + [T[i][N]] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        N = n + n_slack
        tab.n = N

    sign = 1 if maximize else -1
    cost = [sign * _q(v) for v in c] + [mpq(0)] * n_slack
    z = [-v for v in cost] + [mpq(0)]
    for i, bcol in enumerate(tab.basis):
        cb = cost[bcol]
        if cb:
            for j, v in enumerate(tab.T[i]):
                if v:
                    z[j] += cb * v
    status = tab.optimize(z, N)
    if status != "optimal":
        return LPResult(status)
    x = [mpq(0)] * N
    for i, bcol in enumerate(tab.basis):
        x[bcol] = tab.T[i][N]
    xs = [_frac(x[j] + _q(lower[j])) for j in range(n)]
    value = sum((Fraction(v) * xv for v, xv in zip(c, xs)), Fraction(0))
    return LPResult("optimal", value, xs)


def _feasible(x: Sequence[int], A, senses, b) -> bool:
    for a, s, bi in zip(A, senses, b):
        lhs = sum(ai * xi for ai, xi in zip(a, x) if ai and xi)
        if (s == LE and lhs > bi) or (s == GE and lhs < bi) or (s == EQ and lhs != bi):
            return False
    return True


def _greedy_fill(x: list[int], c, A, senses, b, upper, maximize: bool) -> list[int]:
    """Raise improving variables one unit at a time while feasibility holds."""
    order = sorted(range(len(c)), key=lambda j: (-c[j] if maximize else c[j], j))
    for j in order:
        if (c[j] > 0) != maximize or c[j] == 0:
            continue
        while upper[j] is None or x[j] < upper[j]:
            x[j] += 1
            if not _feasible(x, A, senses, b):
                x[j] -= 1
                break
    return x


@dataclass
class IPResult:
    status: str  # "optimal" | "infeasible" | "target" (stopped at target, not proven)
    value: Optional[Fraction] = None
    x: Optional[list[int]] = None
    nodes: int = 0


def solve_ip(c: Sequence[int], A: Sequence[Sequence], senses: Sequence[str], b: Sequence,
             maximize: bool = True, upper: Optional[Sequence] = None,
             budget: int = 20000, target: Optional[Fraction] = None) -> IPResult:
    """Depth-first branch-and-bound for an all-integer program with integer costs.

    ``target``, when given, stops the search as soon as an incumbent reaches it
    (used when only attainability of a known bound matters).  Exceeding
    ``budget`` LP solves raises SearchBudgetExceeded rather than returning an
    unproven answer.
    """
    n = len(c)
    c = [int(v) for v in c]
    if any(Fraction(v) != int(v) for row in A for v in row) or any(Fraction(v) != int(v) for v in b):
        raise LPError("solve_ip requires integer data")
    A = [[int(v) for v in row] for row in A]
    b = [int(v) for v in b]
    upper = [None] * n if upper is None else list(upper)
    sign = 1 if maximize else -1
    best_x: Optional[list[int]] = None
    best = None  # in maximization orientation
    nodes = 0
    stack: list[tuple[list[int], list]] = [([0] * n, list(upper))]
    root_bound = None
    proven = True
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"branch-and-bound exceeded {budget} nodes")
        res = solve_lp(c, A, senses, b, maximize, lo, hi)
        if not res.optimal:
            if res.status == "unbounded":
                raise LPError("integer program relaxation is unbounded")
            continue
        bound = math.floor(sign * res.value)
        if root_bound is None:
            root_bound = bound
        if best is not None and bound <= best:
            continue
        frac = [j for j, v in enumerate(res.x) if v.denominator != 1]
        if not frac:
            x = [int(v) for v in res.x]
            best, best_x = sign * sum(cj * xj for cj, xj in zip(c, x)), x
        else:
            x = [max(lo[j], math.floor(v)) for j, v in enumerate(res.x)]
            if _feasible(x, A, senses, b):
                x = _greedy_fill(x, c, A, senses, b, hi, maximize)
                val = sign * sum(cj * xj for cj, xj in zip(c, x))
                if best is None or val > best:
                    best, best_x = val, x
        if best is not None and best >= root_bound:
            break
        if best is not None and target is not None and best >= sign * target:
            proven = not stack and not frac
            break
        if not frac or (best is not None and bound <= best):
            continue
        j = max(frac, key=lambda k: (min(res.x[k] - math.floor(res.x[k]),
                                         math.ceil(res.x[k]) - res.x[k]), -k))
        v = res.x[j]
        down_hi = list(hi)
        down_hi[j] = math.floor(v)
        up_lo = list(lo)
        up_lo[j] = math.ceil(v)
        stack.append((lo, down_hi))
        stack.append((up_lo, hi))
    if best_x is None:
        return IPResult("infeasible", nodes=nodes)
    return IPResult("optimal" if proven else "target", Fraction(sign * best), best_x, nodes)
