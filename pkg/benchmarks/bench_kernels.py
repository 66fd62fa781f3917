"""Timing comparison of the accelerated kernels against pure numpy.

Runs each hot kernel (the per-row unmixing fit and the one-vs-rest probe
trainer) through both code paths, checks the outputs agree, and prints a
small table of wall times and speedups. The compiled path is skipped when
numba is unavailable or disabled via HOFSEL_NO_NUMBA=1.
"""

import time

import numpy as np

from hofsel import _accel


def timed(fn, *args, repeats=5):
    fn(*args)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench_fit_row():
    rng = np.random.default_rng(0)
    Xp = np.ascontiguousarray(rng.normal(size=(100000, 1)))
    w0 = np.array([0.8])
    args = (Xp, w0, 0.01, 256, 200, 1e-5)
    out_np, t_np = timed(_accel.fit_row_numpy, *args)
    row = ["fit_row", "%.3fs" % t_np]
    if _accel.HAVE_NUMBA:
        out_nb, t_nb = timed(_accel.fit_row_numba, *args)
        agree = float(np.max(np.abs(out_np[0] - out_nb[0])))
        row += ["%.3fs" % t_nb, "%.1fx" % (t_np / t_nb), "%.1e" % agree]
        assert agree < 1e-9, "fit_row paths disagree"
    else:
        row += ["-", "-", "-"]
    return row


def bench_train_ovr():
    rng = np.random.default_rng(1)
    Z = np.ascontiguousarray(rng.normal(size=(90000, 3)))
    y = rng.integers(0, 2, size=90000)
    targets = np.zeros((90000, 2))
    targets[np.arange(90000), y] = 1.0
    args = (Z, targets, 1e-3, 500, 0.1)
    (W_np, b_np), t_np = timed(_accel.train_ovr_numpy, *args, repeats=3)
    row = ["train_ovr", "%.3fs" % t_np]
    if _accel.HAVE_NUMBA:
        (W_nb, b_nb), t_nb = timed(_accel.train_ovr_numba, *args, repeats=3)
        agree = max(float(np.max(np.abs(W_np - W_nb))),
                    float(np.max(np.abs(b_np - b_nb))))
        row += ["%.3fs" % t_nb, "%.1fx" % (t_np / t_nb), "%.1e" % agree]
        assert agree < 1e-9, "train_ovr paths disagree"
    else:
        row += ["-", "-", "-"]
    return row


def main():
    print("numba available: %s, enabled: %s"
          % (_accel.HAVE_NUMBA, _accel.NUMBA_ENABLED))
    header = ["kernel", "numpy", "numba", "speedup", "max |diff|"]
    rows = [bench_fit_row(), bench_train_ovr()]
    widths = [max(len(r[i]) for r in [header] + rows)
              for i in range(len(header))]
    for r in [header] + rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


if __name__ == "__main__":
    main()
