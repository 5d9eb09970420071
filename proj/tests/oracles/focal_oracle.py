#!/usr/bin/env python3
"""Independent high-precision oracle for the focal-field integrals.

Runs in mpmath at 40 digits and shares no code path with the C++ library:

  * partner angles are found with mpmath.findroot from a bracket,
  * the Laurent coefficients of 1/h^p about a critical angle come from a
    Cauchy contour integral with a complex partner solve on the circle,
  * the finite-part integral is split into a small symmetric window (summed
    term by term) plus ordinary quadrature outside it.

Usage: focal_oracle.py theta0 gamma   -> prints a^2<phi^2>, a^4<E^2>
"""
import sys
import mpmath as mp

mp.mp.dps = 40
PI = mp.pi


def f(t, g):
    return mp.sin(t) ** 2 * mp.sin(t - g) / (1 - mp.cos(t))


def fd(t, g):
    return mp.diff(lambda s: (1 + mp.cos(s)) * mp.sin(s - g), t)


def critical_angles(theta0, g):
    out = []
    for m in (-2, -1, 0):
        c = (2 * g + (2 * m + 1) * PI) / 3
        if -theta0 < c < theta0:
            out.append(c)
    return sorted(out)


def fsmooth(t, g):
    # sin^2/(1-cos) == 1+cos; used where t may hit 0 exactly
    return (1 + mp.cos(t)) * mp.sin(t - g)


def branches(theta0, g):
    pts = [mp.mpf(-theta0)] + critical_angles(theta0, g) + [mp.mpf(theta0)]
    return [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]


def solve_on_branch(val, lo, hi, g):
    flo, fhi = fsmooth(lo, g) - val, fsmooth(hi, g) - val
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        # nodes a hair outside the range due to rounding of the interval end
        best = lo if abs(flo) < abs(fhi) else hi
        if min(abs(flo), abs(fhi)) < mp.mpf(10) ** (-mp.mp.dps + 8):
            return best
        return None
    return mp.findroot(lambda s: fsmooth(s, g) - val, (lo, hi), solver='anderson')


def family_interval(theta0, g, c):
    bs = branches(theta0, g)
    idx = [i for i, b in enumerate(bs) if b[1] == c][0]
    left, right = bs[idx], bs[idx + 1]
    fc = fsmooth(c, g)
    fl, fr = fsmooth(left[0], g), fsmooth(right[1], g)
    # overlap of ranges: the less extreme far end bounds it
    if abs(fl - fc) <= abs(fr - fc):
        lo = left[0]
        hi = solve_on_branch(fl, right[0], right[1], g)
    else:
        hi = right[1]
        lo = solve_on_branch(fr, left[0], left[1], g)
    return lo, hi, left, right


def partner(alpha, g, left, right, c):
    val = fsmooth(alpha, g)
    br = right if alpha < c else left
    return solve_on_branch(val, br[0], br[1], g)


def D(alpha, beta, g):
    return mp.cos(alpha - g) - mp.cos(beta - g)


def laurent_coeffs(c, g, p, radius, nterms):
    """Taylor coefficients of (x)^p / D^p about x=c via a Cauchy integral."""
    N = 4 * nterms
    samples = []
    prev = None
    for j in range(N):
        z = radius * mp.expjpi(2 * mp.mpf(j) / N)
        alpha = c + z
        guess = c - z if prev is None else prev
        beta = mp.findroot(lambda s: fsmooth(s, g) - fsmooth(alpha, g), c - z)
        prev = beta
        samples.append((z, z ** p / D(alpha, beta, g) ** p))
    coeffs = []
    for k in range(nterms):
        acc = mp.mpc(0)
        for z, v in samples:
            acc += v / z ** k
        coeffs.append((acc / N).real)
    return coeffs


def fp_power(n, A, B):
    if n == 1:
        return mp.log(abs(B / A))
    return (B ** (1 - n) - A ** (1 - n)) / (1 - n)


def family_integral(theta0, g, c, p):
    lo, hi, left, right = family_interval(theta0, g, c)
    dist = min(c - lo, hi - c)
    r = min(mp.mpf('0.05'), dist / 2)
    coeffs = laurent_coeffs(c, g, p, 2 * r, 60)
    win = mp.mpf(0)
    for k, ck in enumerate(coeffs):
        e = k - p
        if e >= 0:
            win += ck * (r ** (e + 1) - (-r) ** (e + 1)) / (e + 1)
        else:
            win += ck * fp_power(-e, -r, r)

    def integrand(a):
        b = partner(a, g, left, right, c)
        return 1 / D(a, b, g) ** p

    outside = mp.quad(integrand, [lo, c - r]) + mp.quad(integrand, [c + r, hi])
    return win + outside


def fields(theta0, g):
    theta0, g = mp.mpf(theta0), mp.mpf(g)
    I2 = mp.mpf(0)
    I4 = mp.mpf(0)
    for c in critical_angles(theta0, g):
        I2 += family_integral(theta0, g, c, 2)
        I4 += family_integral(theta0, g, c, 4)
    return -I2 / (6 * PI ** 3), 4 * I4 / (5 * PI ** 3)


if __name__ == '__main__':
    t0, gm = sys.argv[1], sys.argv[2]
    gm = mp.pi / 2 if gm == 'pi/2' else mp.mpf(gm)
    p2, e2 = fields(t0, gm)
    print(mp.nstr(p2, 17), mp.nstr(e2, 17))
