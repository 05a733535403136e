"""Compare the compiled and pure-Python envelopes on the same workloads.

    python3 benchmarks/bench_envelope.py [--sizes 1024,4096,16384] [--repetitions 3]
"""

import argparse

from orienteer.bench import run_suite
from orienteer.envelope import CompiledEnvelope


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="1024,4096,16384")
    ap.add_argument("--repetitions", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    impls = ["python"] + (["cython"] if CompiledEnvelope is not None else [])
    if len(impls) == 1:
        print("compiled extension not built; timing the pure implementation only")
    for suite in ("envelope", "path-mtw"):
        table = {impl: run_suite(suite, sizes, args.seed, args.repetitions, impl) for impl in impls}
        print(f"\n{suite}")
        print(f"{'size':>8} " + " ".join(f"{impl + ' ms':>12}" for impl in impls)
              + ("     speedup" if len(impls) == 2 else ""))
        for k, size in enumerate(sizes):
            ms = [table[impl][k][1] / 1e6 for impl in impls]
            line = f"{size:>8} " + " ".join(f"{m:>12.2f}" for m in ms)
            if len(ms) == 2:
                line += f" {ms[0] / ms[1]:>10.1f}x"
            print(line)


if __name__ == "__main__":
    main()
