"""Regenerate the frozen interval-selection constants used in
tests/test_truncation.py.

Everything is evaluated with 60-digit Decimal arithmetic, independently of
the package, and rounded to the nearest double at the end. Run:

    python3 tools/derive_interval_constants.py
"""

from decimal import Decimal, getcontext

getcontext().prec = 60


def dln(x):
    return x.ln()


def asinh(z):
    return dln(z + (z * z + 1).sqrt())


def half_log_ratio(t):
    """atanh(2t - 1) = (ln t - ln(1 - t)) / 2."""
    return (dln(t) - dln(1 - t)) / 2


def interval(theta, nmi, ninv, eps):
    """The selection chain: a and the complement of b, then the endpoints."""
    a = min(theta * eps / (3 * nmi), 1 / (2 * nmi))
    d = min(theta * eps / (3 * nmi * ninv), 1 / (2 * ninv + 1))
    l = asinh(half_log_ratio(a))
    r = asinh(-half_log_ratio(d))
    return a, d, l, r


def main():
    ln10 = dln(Decimal(10))
    eps53 = Decimal(2) ** -53

    print("# case 1: theta=ln 10, |A-I|=9, |A^-1|=10, eps=2^-53")
    for k, v in zip("a d l r".split(), interval(ln10, Decimal(9), Decimal(10), eps53)):
        print(f"  {k} = {float(v)!r}")

    print("# case 2: theta=6 ln 10, |A-I|=9, |A^-1|=1e6, eps=2^-53")
    for k, v in zip("a d l r".split(), interval(6 * ln10, Decimal(9), Decimal(10) ** 6, eps53)):
        print(f"  {k} = {float(v)!r}")

    # Root of -ln s + (1-s)/(2s) = 1/10 (the exact-s equation for
    # theta=1, unit norms, eps=0.2), by Newton in Decimal.
    s = Decimal("0.95")
    target = Decimal(1) / 10
    for _ in range(80):
        g = -dln(s) + (1 - s) / (2 * s)
        gp = -1 / s - 1 / (2 * s * s)
        s = s - (g - target) / gp
    print(f"# s root for target 0.1: {float(s)!r}")

    em1 = (3 / ln10) * Decimal(9) * Decimal(10) / (1 + Decimal(10))
    em2 = (3 / (6 * ln10)) * Decimal(9) * Decimal(10) ** 6 / (1 + Decimal(10) ** 6)
    print(f"# epsilon_max case 1: {float(em1)!r}   case 2: {float(em2)!r}")


if __name__ == "__main__":
    main()
