"""Time the compiled and pure-Python prime-field kernels on the same inputs.

    python benchmarks/bench_kernels.py [--size 120] [--repeat 5]
"""

import argparse
import random
import timeit

from twistalg.core import _kernels_py

try:
    from twistalg.core import _ckernels
except ImportError:
    _ckernels = None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=120, help="matrix side and series length")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--p", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(1)
    n, p = args.size, args.p
    rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
    a = [rng.randrange(p) for _ in range(n * 8)]
    b = [rng.randrange(p) for _ in range(n * 8)]

    cases = [("rref_modp", lambda m: m.rref_modp([r[:] for r in rows], n, p)),
             ("series_mul_modp", lambda m: m.series_mul_modp(a, b, len(a), p))]
    backends = [("python", _kernels_py)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled kernels unavailable; timing the pure-Python backend only")
    for name, fn in cases:
        outs, times = {}, {}
        for label, mod in backends:
            outs[label] = fn(mod)
            times[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        agree = len({repr(o) for o in outs.values()}) == 1
        line = f"{name:16s} " + "  ".join(f"{k} {v * 1e3:8.2f} ms" for k, v in times.items())
        if "cython" in times:
            line += f"  speedup {times['python'] / times['cython']:6.1f}x"
        print(line + ("  outputs agree" if agree else "  OUTPUTS DIFFER"))


if __name__ == "__main__":
    main()
