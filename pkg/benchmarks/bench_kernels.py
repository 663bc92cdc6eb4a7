"""Time each hot kernel under the compiled and the pure-Python backend.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from cliffpovm import _kernels


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(mod):
    rng = np.random.default_rng(0)
    n = 4
    d = 1 << n
    vecs = rng.normal(size=(512, d)) + 1j * rng.normal(size=(512, d))
    a = rng.normal(size=(256, 1024)) + 0j
    codes = np.ascontiguousarray(_kernels.get_backend("python").lagrangian_codes(3))
    words = rng.integers(0, 2**63, size=(200, 16 * n + 16), dtype=np.uint64)
    samples = [mod.sample_symplectic(w, n) for w in words]
    samples = [s for s in samples if s is not None]
    im = np.array([s[0] for s in samples], dtype=np.uint64)
    sg = np.array([s[1] for s in samples], dtype=np.uint64)
    z = np.zeros(d, dtype=complex)
    z[0] = 1

    def pauli_apply():
        for v in range(d * d):
            mod.pauli_apply_rows(v, n, vecs)

    def fwht():
        mod.fwht_rows(a.copy())

    return {
        "pauli_apply_rows (n=4, all Paulis x 512 rows)": pauli_apply,
        "fwht_rows (256 x 1024)": fwht,
        "lagrangian_codes (n=4)": lambda: mod.lagrangian_codes(4),
        "materialize_bases (n=3)": lambda: mod.materialize_bases(codes, 3),
        "sample_symplectic (n=4, 200 draws)": lambda: [mod.sample_symplectic(w, n) for w in words],
        "clifford_unitary (n=4, 200 tableaus)": lambda: [
            mod.clifford_unitary(i, int(s), n) for i, s in zip(im, sg)],
        "clifford_states (n=4, 200 tableaus)": lambda: mod.clifford_states(im, sg, z, n),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = _kernels.available_backends()
    results = {b: {k: _best(f, args.repeat) for k, f in cases(_kernels.get_backend(b)).items()}
               for b in names}
    width = max(len(k) for k in results["python"])
    head = f"{'kernel':<{width}}  {'python [ms]':>12}"
    if "compiled" in results:
        head += f"  {'compiled [ms]':>14}  {'speedup':>8}"
    print(head)
    for k, tp in results["python"].items():
        line = f"{k:<{width}}  {1e3 * tp:12.3f}"
        if "compiled" in results:
            tc = results["compiled"][k]
            line += f"  {1e3 * tc:14.3f}  {tp / tc:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
