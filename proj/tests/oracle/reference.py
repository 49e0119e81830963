"""Independent NumPy reference for the frozen numbers in tests/frozen_values.hpp.

Brute force: numpy FFTs, the susceptibility written out directly, moments
summed over boolean masks. Run from the repository root:

    python3 tests/oracle/reference.py

The printed values are pasted into tests/frozen_values.hpp and never
regenerated from the C++ code.
"""
import json
import math

import numpy as np

LAMBDA = 795e-9
Q = 2 * np.pi / LAMBDA
D = 11e-4


def axes(n, d):
    x = (np.arange(n) - n // 2) * d
    k = 2 * np.pi * np.fft.fftfreq(n, d)
    X, Y = np.meshgrid(x, x)
    KX, KY = np.meshgrid(k, k)
    return x, X, Y, KX**2 + KY**2


def chi(alpha, gp, g, diff, delta, k2):
    return 1j * alpha * (1 - gp / (g + diff * k2 - 1j * delta))


def designed(k0, ratio, delta_over_gamma):
    g = D * k0**2
    gp = g / ratio
    alpha = g**2 / (Q * D * gp)
    return alpha, gp, g, D, delta_over_gamma * g


def propagate(f, k2, z, ch):
    return np.fft.ifft2(np.fft.fft2(f) * np.exp(1j * (ch - k2 / (2 * Q)) * z))


def width(I, X, Y, mask):
    I = np.where(mask, I, 0.0)
    p = I.sum()
    mx = (I * X).sum() / p
    my = (I * Y).sum() / p
    return 2 * math.sqrt((I * (X - mx) ** 2).sum() / p), 2 * math.sqrt((I * (Y - my) ** 2).sum() / p)


def beams_growth(centers, half, z_over_zr, delta_over_gamma, factor=False):
    w0 = 100e-6
    k0 = np.pi / w0
    n = 512
    x, X, Y, K2 = axes(n, 16 * w0 / n)
    f = sum(np.exp(-((X - c) ** 2 + Y**2) / w0**2) for c in centers)
    zr = Q * w0**2 / 2
    if delta_over_gamma is None:
        ch = 0 * K2
    else:
        m = designed(k0, 2, delta_over_gamma)
        ch = chi(*m, K2)
        if factor:
            ch = ch - chi(*m, 0.0)
    o = propagate(f, K2, z_over_zr * zr, ch)
    out = []
    for c in centers:
        edge = half * (1 + 1e-9)  # edge samples are inside
        mask = (np.abs(X - c) <= edge) & (np.abs(Y) <= edge)
        w_in = width(np.abs(f) ** 2, X, Y, mask)[0]
        w_out = width(np.abs(o) ** 2, X, Y, mask)[0]
        out.append((w_in, w_out))
    return out


def waist_sweep():
    w_ref = 100e-6
    m = designed(np.pi / w_ref, 2, -1)
    res = []
    for s in (1, 2, 4, 8):
        w0 = s * w_ref
        n = 512
        x, X, Y, K2 = axes(n, 16 * w0 / n)
        f = np.exp(-(X**2 + Y**2) / w0**2)
        ch = chi(*m, K2) - chi(*m, 0.0)
        o = propagate(f, K2, 4 * Q * w0**2 / 2, ch)
        full = np.ones_like(X, bool)
        res.append(width(np.abs(o) ** 2, X, Y, full)[0] / width(np.abs(f) ** 2, X, Y, full)[0] - 1)
    return res


def absorption_budget():
    w_ref = 100e-6
    k0 = np.pi / w_ref
    m = designed(k0, 1, -1)
    w0 = 4 * w_ref
    n = 512
    x, X, Y, K2 = axes(n, 16 * w0 / n)
    f = np.exp(-(X**2 + Y**2) / w0**2)
    o = propagate(f, K2, Q * w_ref**2 / 2, chi(*m, K2))
    return math.log((np.abs(f) ** 2).sum() / (np.abs(o) ** 2).sum()) / (np.pi**2 / 2)


def image_fidelities():
    raw = open("data/eit_letters.pgm", "rb").read()
    parts = raw.split(b"\n", 3)
    w, h = map(int, parts[1].split())
    img = np.frombuffer(parts[3], np.uint8).reshape(h, w) / 255.0
    n, dx = 512, 6.25e-6
    A = np.zeros((n, n))
    ox, oy = n // 2 - w // 2, n // 2 - h // 2
    A[oy:oy + h, ox:ox + w] = np.sqrt(img)[::-1]  # top image row at the highest y
    r = np.arange(-8, 9)
    ker = np.exp(-r**2 / 8.0)
    ker /= ker.sum()
    for axis in (1, 0):
        A = sum(kv * np.roll(A, o, axis=axis) for o, kv in zip(r, ker))
    x, X, Y, K2 = axes(n, dx)
    w0 = 50e-6
    k0 = np.pi / w0
    m = designed(k0, 2, -1)
    zr = Q * w0**2 / 2

    def fid(a, b):
        I = np.abs(a) ** 2
        J = np.abs(b) ** 2
        I = I / I.max() - (I / I.max()).mean()
        J = J / J.max() - (J / J.max()).mean()
        return (I * J).sum() / math.sqrt((I * I).sum() * (J * J).sum())

    F = np.abs(np.fft.fft2(A)) ** 2
    band = F[np.sqrt(K2) > 0.3 * k0].sum() / F.sum()
    out = {}
    for name, ch in (("eit", chi(*m, K2) - chi(*m, 0.0)), ("free", 0 * K2)):
        out[name] = fid(A, propagate(A, K2, 2 * zr, ch))
    out["band_fraction"] = band
    return out


def main():
    w0 = 100e-6
    two = [-1.5 * w0, 1.5 * w0]
    three = [-4 * w0, 0.0, 4 * w0]
    fig3a = {}
    for name, d in (("free", None), ("resonant", 0), ("matched", -1)):
        fig3a[name] = [wo / wi for wi, wo in beams_growth(two, 1.5 * w0, 1, d)]
    fig3b = [wo / wi - 1 for wi, wo in beams_growth(three, 2 * w0, 4, -1, factor=True)]
    print(json.dumps({
        "fig3a_width_ratio": fig3a,
        "fig3b_growth": fig3b,
        "waist_sweep_spreading": waist_sweep(),
        "absorption_ln_ratio_over_half_pi_sq": absorption_budget(),
        "image": image_fidelities(),
    }, indent=2))


if __name__ == "__main__":
    main()
