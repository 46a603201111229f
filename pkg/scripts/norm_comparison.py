"""Compare beta_h under the K-perp seminorm and the full H(div) norm.

With ||div u|| alone the constant is 1 up to rounding; adding the flux mass
matrix to the velocity norm lowers it and makes it depend on h and L.

    python scripts/norm_comparison.py
"""
from infsup.core import compute_infsup


def main():
    print(f"{'L':>3} {'N':>2} {'K':>3} {'kperp':>20} {'hdiv':>20} {'oracle(hdiv)':>20}")
    for L in (1.0, 2.0):
        for N in (1, 2, 3):
            for K in (1, 2, 4, 8):
                a = compute_infsup(L, N, K, "kperp")
                b = compute_infsup(L, N, K, "hdiv", oracle=b_small(N, K))
                o = f"{b.beta_oracle:.15f}" if b.beta_oracle is not None else ""
                print(f"{L:>3g} {N:>2} {K:>3} {a.beta_h:>20.15f} {b.beta_h:>20.15f} {o:>20}")


def b_small(N, K):
    n = N * K
    return 2 * n * (n + 1) <= 2000


if __name__ == "__main__":
    main()
