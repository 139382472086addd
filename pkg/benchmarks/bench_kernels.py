"""Compare the compiled and pure-Python kernels.

Times the jigsaw process on near-threshold random double graphs and the
exhaustive tree-pair sweep, and checks that both backends agree.

    python benchmarks/bench_kernels.py --sizes 1024 4096 16384 --repeat 3 --k 4 5
"""

import argparse
import time

import numpy as np

from jigsawperc import _kernels
from jigsawperc.enumeration import tree_masks
from jigsawperc.graph import GenParams, generate_double_graph
from jigsawperc.harness import split_probabilities


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_jigsaw(sizes, c, repeat, seed):
    rows = []
    for n in sizes:
        p1, p2, _ = split_probabilities(n, c)
        g = generate_double_graph(GenParams(n, p1, p2, seed))
        args = (g.n, g.red[:, 0] - 1, g.red[:, 1] - 1, g.blue[:, 0] - 1, g.blue[:, 1] - 1)
        row = {"n": n, "edges": len(g.red) + len(g.blue)}
        results = {}
        for name, mod in backends():
            row[name], results[name] = best_of(lambda: mod.jigsaw_run(*args), repeat)
        agree = _same_jigsaw(results.values())
        rows.append((row, agree))
    return rows


def _same_jigsaw(results):
    results = list(results)
    first = results[0]
    return all(r[0] == first[0] and np.array_equal(r[1], first[1]) and list(r[2]) == list(first[2])
               for r in results[1:])


def bench_sweep(ks, repeat):
    rows = []
    for k in ks:
        masks = tree_masks(k)
        row = {"k": k, "pairs": len(masks) ** 2}
        results = {}
        for name, mod in backends():
            row[name], results[name] = best_of(lambda: mod.tree_pair_sweep(k, masks), repeat)
        vals = list(results.values())
        agree = all(_canon(v) == _canon(vals[0]) for v in vals[1:])
        rows.append((row, agree))
    return rows


def _canon(raw):
    return {k: np.asarray(v).tolist() if not np.isscalar(v) else int(v) for k, v in raw.items()}


def backends():
    out = [("python", _kernels.pure)]
    if _kernels.compiled is not None:
        out.append(("cython", _kernels.compiled))
    return out


def show(title, rows, key):
    print(f"\n{title}")
    names = [name for name, _ in backends()]
    header = f"{key:>8} {'size':>10} " + " ".join(f"{n + ' (s)':>12}" for n in names)
    if len(names) == 2:
        header += f" {'speed-up':>9}"
    print(header + "  agree")
    for row, agree in rows:
        size = row.get("edges", row.get("pairs"))
        line = f"{row[key]:>8} {size:>10} " + " ".join(f"{row[n]:>12.4f}" for n in names)
        if len(names) == 2:
            line += f" {row['python'] / row['cython']:>9.1f}"
        print(line + f"  {agree}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1024, 4096, 16384])
    ap.add_argument("--c", type=float, default=1.0, help="threshold multiple for the random graphs")
    ap.add_argument("--k", type=int, nargs="+", default=[4, 5])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    print(f"active backend: {_kernels.BACKEND}")
    if _kernels.compiled is None:
        print("compiled extension not built; timing the pure-Python kernels only")
    jig = bench_jigsaw(args.sizes, args.c, args.repeat, args.seed)
    show(f"jigsaw process at c={args.c:g} (best of {args.repeat})", jig, "n")
    sweep = bench_sweep(args.k, max(1, min(args.repeat, 2)))
    show("tree-pair sweep", sweep, "k")
    if not all(a for _, a in jig + sweep):
        raise SystemExit("backends disagree")


if __name__ == "__main__":
    main()
