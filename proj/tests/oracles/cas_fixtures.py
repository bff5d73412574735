"""Computer-algebra fixtures used by the C++ tests.

Run with `python3 tests/oracles/cas_fixtures.py`; the printed numbers are
pinned in tests/test_geometry.cpp and tests/oracles/oracles.hpp.
"""
import sympy as sp

t, x1, x2, x3, a, u = sp.symbols("t x1 x2 x3 a u", real=True)
X = [t, x1, x2, x3]
R = 1 + a * t


def christoffel(g, coords):
    gi = g.inv()
    n = len(coords)
    return [[[sp.simplify(sum(gi[m, l] * (sp.diff(g[l, b], coords[c]) + sp.diff(g[l, c], coords[b])
                                            - sp.diff(g[b, c], coords[l])) for l in range(n)) / 2)
              for c in range(n)] for b in range(n)] for m in range(n)]


def ricci_scalar(g, coords):
    # R^a_{bcm} = d_c G^a_{mb} - d_m G^a_{cb} + G^a_{cl} G^l_{mb} - G^a_{ml} G^l_{cb}, Ric_{bm} = R^a_{bam}
    G = christoffel(g, coords)
    n = len(coords)
    ric = sp.zeros(n, n)
    for b in range(n):
        for m in range(n):
            ric[b, m] = sp.simplify(sum(
                sp.diff(G[al][m][b], coords[al]) - sp.diff(G[al][al][b], coords[m])
                + sum(G[al][al][l] * G[l][m][b] - G[al][m][l] * G[l][al][b] for l in range(n))
                for al in range(n)))
    return sp.simplify(sum(g.inv()[b, m] * ric[b, m] for b in range(n) for m in range(n))), ric


g = sp.diag(1, -R**2, -R**2, -R**2)
S, ric = ricci_scalar(g, X)
print("Ricci:", [sp.simplify(ric[i, i]) for i in range(4)])
print("S =", S)
print("S(a=0.3, t=0.5) =", sp.N(S.subs({a: sp.Rational(3, 10), t: sp.Rational(1, 2)}), 20))

# Chart adapted to Z: the pushed metric is diag(1, -(R^2+u^2), -R^2, -R^2)
# with t a function of t' + u x1' through dH/dt = R/sqrt(R^2+u^2).
s = sp.sqrt(R**2 + u**2)
dt = {0: s / R, 1: u * s / R}
gb = [1, -(R**2 + u**2), -R**2, -R**2]


def d(f, k):
    return sp.diff(f, t) * dt[k] if k in dt else 0


print("connection in the chart adapted to Z:")
for m in range(4):
    for n in range(4):
        for r in range(n, 4):
            val = sp.Rational(1, 2) / gb[m] * (d(gb[m] if m == r else 0, n) + d(gb[m] if m == n else 0, r)
                                                - (d(gb[n], m) if n == r else 0))
            val = sp.simplify(val)
            if val != 0:
                print(f"  G^{m}_{n}{r} =", val)
