"""Independent extended-precision oracles; prints the values frozen into tests.

lambda_n(c): Nystrom discretisation of the sinc kernel on Gauss-Legendre
nodes in mpmath.  chi_n(c): the tridiagonal Legendre form of the prolate
differential operator.  Special functions: mpmath closed forms.
"""
import mpmath as mp

mp.mp.dps = 50


def gauss_legendre(m):
    xs, ws = [], []
    for i in range(1, m + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (m + mp.mpf(1) / 2))
        for _ in range(100):
            p, dp = mp.legendre(m, x), mp.diff(lambda t: mp.legendre(m, t), x)
            dx = p / dp
            x -= dx
            if abs(dx) < mp.mpf(10) ** (-mp.mp.dps + 5):
                break
        dp = mp.diff(lambda t: mp.legendre(m, t), x)
        xs.append(x)
        ws.append(2 / ((1 - x * x) * dp * dp))
    return xs, ws


def nystrom_lambdas(c, m=70):
    c = mp.mpf(c)
    xs, ws = gauss_legendre(m)
    n = m
    A = mp.matrix(n, n)
    for i in range(n):
        for j in range(n):
            d = xs[i] - xs[j]
            k = c / mp.pi if d == 0 else mp.sin(c * d) / (mp.pi * d)
            A[i, j] = mp.sqrt(ws[i]) * k * mp.sqrt(ws[j])
    ev = mp.eigsy(A, eigvals_only=True)
    return sorted(ev, reverse=True)


def chi_values(c, K=80):
    c2 = mp.mpf(c) ** 2
    out = []
    for parity in (0, 1):
        ks = list(range(parity, K, 2))
        M = mp.matrix(len(ks), len(ks))
        for i, k in enumerate(ks):
            M[i, i] = k * (k + 1) + c2 * (2 * k * (k + 1) - 1) / ((2 * k + 3) * (2 * k - 1))
            if i + 1 < len(ks):
                off = c2 * (k + 2) * (k + 1) / ((2 * k + 3) * mp.sqrt((2 * k + 1) * (2 * k + 5)))
                M[i, i + 1] = M[i + 1, i] = off
        out += list(mp.eigsy(M, eigvals_only=True))
    return sorted(out)


if __name__ == "__main__":
    with mp.workdps(30):
        lam = nystrom_lambdas(5)
    print("LAMBDA_C5 =", [mp.nstr(v, 15) for v in lam[:16]])
    print("CHI_C5 =", [mp.nstr(v, 17) for v in chi_values(5)[:16]])
    print("h_n(x):", [(n, x, mp.nstr(mp.hermite(n, x) * mp.exp(-mp.mpf(x) ** 2 / 2)
                                     / mp.sqrt(2 ** n * mp.factorial(n) * mp.sqrt(mp.pi)), 17))
                      for n, x in [(5, 1.5), (40, 3.0), (100, 7.25), (200, 0.3)]])
    sj = lambda k, x: mp.sqrt(mp.pi / (2 * x)) * mp.besselj(k + mp.mpf(1) / 2, x)
    print("j_k(x):", [(k, x, mp.nstr(sj(k, x), 17)) for k, x in [(5, 2.0), (0, 0.5), (12, 30.0), (40, 10.0)]])
    print("J_k(x):", [(k, x, mp.nstr(mp.besselj(k, x), 17)) for k, x in [(3, 1.5), (0, 7.0), (20, 5.0)]])
    print("hermite center p=50:",
          mp.nstr((-1) ** 50 / mp.pi ** 0.25 * mp.sqrt(mp.fac2(99) / mp.fac2(100)), 17),
          mp.nstr((-1) ** 50 / mp.pi ** 0.25 * mp.sqrt(101 * mp.fac2(99) / mp.fac2(100)) * mp.sqrt(2) / mp.sqrt(2), 17))
