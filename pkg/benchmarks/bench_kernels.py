"""Compare the compiled and pure-Python face kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import timeit

from scaledtw import _kernels_py

try:
    from scaledtw import _kernels as _compiled
except ImportError:
    _compiled = None


def workloads(seed=1):
    rng = random.Random(seed)
    size = 10  # the ambient of tw(4)
    gens = [rng.randrange(1, 1 << size) for _ in range(40)]
    table = sorted(rng.randrange(0, 8) for _ in range(size))
    return gens, table


def bench(impl, gens, table, repeat):
    faces = impl.closure(gens)
    out = {}
    out["closure"] = min(timeit.repeat(lambda: impl.closure(gens), number=20, repeat=repeat)) / 20
    out["image"] = min(timeit.repeat(lambda: impl.image(faces, table), number=20, repeat=repeat)) / 20
    out["is_closed"] = min(timeit.repeat(lambda: impl.is_closed(faces), number=20, repeat=repeat)) / 20
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    gens, table = workloads()
    pure = bench(_kernels_py, gens, table, args.repeat)
    comp = bench(_compiled, gens, table, args.repeat) if _compiled else None
    print(f"{'kernel':<10} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for k, t in pure.items():
        if comp:
            print(f"{k:<10} {t * 1e3:10.3f} {comp[k] * 1e3:12.3f} {t / comp[k]:7.1f}x")
        else:
            print(f"{k:<10} {t * 1e3:10.3f} {'n/a':>12}")


if __name__ == "__main__":
    main()
