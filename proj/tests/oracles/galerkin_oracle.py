"""Independent reference computations (numpy/scipy/mpmath) used to freeze
expected values in the C++ test suites. Not used by the library."""
import numpy as np
from scipy.special import roots_jacobi, eval_jacobi, gammaln
from scipy.linalg import eigh
import mpmath as mp


def cns(N, s):
    mp.mp.dps = 40
    return mp.mpf(2) ** (2 * s) * mp.gamma(mp.mpf(N) / 2 + s) / (mp.pi ** (mp.mpf(N) / 2) * abs(mp.gamma(-s)))


def jac_norm(n, a, b):
    return np.exp((a + b + 1) * np.log(2) + gammaln(n + a + 1) + gammaln(n + b + 1)
                  - np.log(2 * n + a + b + 1) - gammaln(n + a + b + 1) - gammaln(n + 1))


def eig_lambda(n, ell, N, s):
    return np.exp(2 * s * np.log(2) + gammaln(1 + s + n) + gammaln(N / 2 + s + n + ell)
                  - gammaln(n + 1) - gammaln(N / 2 + n + ell))


def sector_mats(N, s, ell, M):
    """Stiffness and mass in the orthonormal-Jacobi basis (radial part only,
    angular normalization omitted: common factor)."""
    b = N / 2 + ell - 1
    A = np.diag([eig_lambda(n, ell, N, s) for n in range(M)]) * 2.0 ** (-s - b - 2)
    t, w = roots_jacobi(M + 4, 2 * s, b)
    P = np.array([eval_jacobi(n, s, b, t) / np.sqrt(jac_norm(n, s, b)) for n in range(M)])
    B = (P * w) @ P.T * 2.0 ** (-2 * s - b - 2)
    return A, B


def lambda1(N, s, M):
    A, B = sector_mats(N, s, 0, M)
    return eigh(A, B, eigvals_only=True)[0]


def aitken(a, b, c):
    """Delta-squared extrapolation of a sequence at geometric M."""
    d1, d2 = b - a, c - b
    return c - d2 * d2 / (d2 - d1)


def write_fixture(path):
    import json
    seq = [lambda1(1, 0.5, M) for M in (16, 32, 64)]
    fixture = {
        "lambda1_N1_s0.5": {
            "galerkin_M": [16, 32, 64],
            "values": [float(v) for v in seq],
            "extrapolated": float(aitken(*seq)),
        }
    }
    with open(path, "w") as fh:
        json.dump(fixture, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    import sys
    if len(sys.argv) > 2 and sys.argv[1] == "--fixture":
        write_fixture(sys.argv[2])
        sys.exit(0)
    print("cns(2,.5)", cns(2, 0.5), 1 / (2 * mp.pi))
    print("cns(1,.5)", cns(1, 0.5), 1 / mp.pi)
    for s in (0.9, 0.99, 0.999):
        print("cns(2,%g)" % s, cns(2, s), "cns(3,%g)" % s, cns(3, s))
    for M in (16, 32, 48, 64):
        print("N=1 lam1", M, repr(lambda1(1, 0.5, M)))
    for M in (16, 32, 48, 64):
        print("N=2 lam1", M, repr(lambda1(2, 0.5, M)))
    for s in (0.25, 0.5, 0.75):
        print("N=2 s", s, repr(lambda1(2, s, 64)))
