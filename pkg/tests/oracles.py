"""Independent reference computations used only by the tests.

None of these import the code under test except for plain data types.
"""

from fractions import Fraction
from itertools import combinations, product
from math import gcd


def fdet(M):
    """Determinant by cofactor expansion (small matrices only)."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * fdet([row[:j] + row[j + 1 :] for row in M[1:]]) for j in range(n))


def determinantal_invariants(A):
    """Invariant factors from gcds of k x k minors."""
    m, n = len(A), len(A[0])
    ds = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, fdet([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        ds.append(abs(g))
    return [ds[k] // ds[k - 1] for k in range(1, len(ds))]


def _inverse(A):
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def cokernel_elements(A):
    """All elements of ``Z^m / A Z^m`` (A square, nonsingular) by closure
    under the unit vectors.  Keys are fractional parts of ``A^-1 y``."""
    m = len(A)
    Ainv = _inverse(A)

    def key(y):
        return tuple((sum(Ainv[i][j] * y[j] for j in range(m))) % 1 for i in range(m))

    zero = tuple([0] * m)
    seen = {key(zero): zero}
    frontier = [zero]
    while frontier:
        y = frontier.pop()
        for i in range(m):
            z = tuple(a + (1 if j == i else 0) for j, a in enumerate(y))
            k = key(z)
            if k not in seen:
                seen[k] = z
                frontier.append(z)
    return seen


def torsion_counts_from_elements(A, ks):
    """``#{g : k g = 0}`` for each k, enumerating the group."""
    m = len(A)
    Ainv = _inverse(A)
    out = {}
    elems = cokernel_elements(A)
    for k in ks:
        c = 0
        for y in elems.values():
            if all((sum(Ainv[i][j] * k * y[j] for j in range(m))) % 1 == 0 for i in range(m)):
                c += 1
        out[k] = c
    return out


def torsion_counts_from_factors(factors, ks):
    out = {}
    for k in ks:
        c = 1
        for d in factors:
            c *= gcd(d, k)
        out[k] = c
    return out


# --------------------------------------------------------------------------
# One-parameter subgroups
# --------------------------------------------------------------------------


def _pair(l, w):
    return sum(a * b for a, b in zip(l, w))


def one_ps(r, bound=5):
    return [l for l in product(range(-bound, bound + 1), repeat=r) if any(l)]


def ops_semistable(weights_of_A, chi, r):
    """Hilbert-Mumford: every 1-PS with a limit pairs non-negatively with chi."""
    for l in one_ps(r):
        if all(_pair(l, w) >= 0 for w in weights_of_A) and _pair(l, chi) < 0:
            return False
    return True


def ops_closed_orbit(weights_of_A, chi, r):
    """No 1-PS with a limit and chi-pairing 0 moves the point."""
    for l in one_ps(r):
        if all(_pair(l, w) >= 0 for w in weights_of_A) and _pair(l, chi) == 0:
            if any(_pair(l, w) != 0 for w in weights_of_A):
                return False
    return True


def ops_properly_stable(weights_of_A, chi, r):
    """King: every nontrivial 1-PS with a limit pairs positively with chi."""
    for l in one_ps(r):
        if all(_pair(l, w) >= 0 for w in weights_of_A) and _pair(l, chi) <= 0:
            return False
    return True


def _limit_support(l, W, A):
    """Support of ``lim lambda(t).x`` for generic x with support A, or None."""
    cols = {j: [row[j] for row in W] for j in A}
    if any(_pair(l, w) < 0 for w in cols.values()):
        return None
    return frozenset(j for j, w in cols.items() if _pair(l, w) == 0)


def ops_classify(W, chi, A, bound=5):
    """Stability class of support A by explicit orbit degeneration.

    Semistable: Hilbert-Mumford.  Stable: no 1-PS degenerates A to another
    semistable support, and no semistable strict superset degenerates onto A.
    Properly stable: additionally the weights of A span the character space.
    """
    r, n = len(W), len(W[0])
    A = frozenset(A)
    ls = one_ps(r, bound)

    def ss(B):
        ws = [[row[j] for row in W] for j in B]
        return all(not (all(_pair(l, w) >= 0 for w in ws) and _pair(l, chi) < 0) for l in ls)

    if not ss(A):
        return "unstable"
    for l in ls:
        B = _limit_support(l, W, A)
        if B is not None and B != A and ss(B):
            return "semistable_nonstable"
    rest = [j for j in range(n) if j not in A]
    for k in range(1, len(rest) + 1):
        for extra in combinations(rest, k):
            Ap = A | frozenset(extra)
            if not ss(Ap):
                continue
            if any(_limit_support(l, W, Ap) == A for l in ls):
                return "semistable_nonstable"
    # finite stabilizer iff no nonzero 1-PS fixes the point
    if any(all(_pair(l, [row[j] for row in W]) == 0 for j in A) for l in ls):
        return "stable"
    return "properly_stable"


# --------------------------------------------------------------------------
# Polytopes and invariants
# --------------------------------------------------------------------------


def _solve(M, b):
    n = len(M)
    inv = _inverse(M)
    return [sum(inv[i][j] * b[j] for j in range(n)) for i in range(n)]


def basic_feasible_solutions(W, chi):
    """Vertices of ``{a >= 0 : W a = chi}`` (W of full row rank)."""
    r, n = len(W), len(W[0])
    out = set()
    for B in combinations(range(n), r):
        M = [[W[i][j] for j in B] for i in range(r)]
        if fdet(M) == 0:
            continue
        x = _solve(M, chi)
        if all(v >= 0 for v in x):
            a = [Fraction(0)] * n
            for j, v in zip(B, x):
                a[j] = v
            out.add(tuple(a))
    return out


def monomials_of_weight(W, weight, box):
    r, n = len(W), len(W[0])
    return [
        a
        for a in product(range(box + 1), repeat=n)
        if all(sum(W[i][j] * a[j] for j in range(n)) == weight[i] for i in range(r))
    ]


def invariant_pattern(monos, A):
    return frozenset(i for i, a in enumerate(monos) if all(a[j] == 0 or j in A for j in range(len(a))))


def semistable_by_monomials(monos, A):
    return bool(invariant_pattern(monos, A))


def saturation_by_invariants(W, chi, S, degrees=(1, 2)):
    """Slices of ``pi^-1 pi(V(x_S))`` from vanishing patterns of semi-invariants.

    Generic points with supports A and A' map to the same torus orbit of the
    quotient iff the same semi-invariant monomials survive.
    """
    n = len(W[0])
    monos = []
    for d in degrees:
        monos += monomials_of_weight(W, [d * c for c in chi], 2 * d)
    supports = [frozenset(c) for k in range(n + 1) for c in combinations(range(n), k)]
    ss = [A for A in supports if semistable_by_monomials(monos, A)]
    images = {invariant_pattern(monos, A) for A in ss if not (A & S)}
    inside = [A for A in ss if invariant_pattern(monos, A) in images]
    maximal = [A for A in inside if not any(A < B for B in inside)]
    return sorted((frozenset(range(n)) - A for A in maximal), key=lambda s: (len(s), sorted(s)))
