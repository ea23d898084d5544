"""Compare encode latency of the compiled and pure-numpy kernels.

    python3 benchmarks/compare_backends.py [--events 200000] [--reps 11]

Prints the median latency per format and backend on a synthetic GEN1-sized
chunk, plus the speed-up of the compiled kernels where available.
"""

import argparse

import numpy as np

from evtcodec import GEN1, EventStream, TimeWindow
from evtcodec._backend import available_backends
from evtcodec.bench import time_encode
from evtcodec.tensor import FormatTag


def random_chunk(n, seed=0, length=50_000):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.integers(0, length, n))
    x = rng.integers(0, GEN1.width, n)
    y = rng.integers(0, GEN1.height, n)
    p = rng.choice(np.array([-1, 1], dtype=np.int8), n)
    return EventStream.from_arrays(GEN1, t, x, y, p), TimeWindow(0, length, 5)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--events", type=int, default=200_000)
    ap.add_argument("--reps", type=int, default=11)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    chunk, window = random_chunk(args.events, args.seed)
    backends = available_backends()
    print(f"{args.events} events, {args.reps} reps, backends: {', '.join(backends)}")
    print(f"{'format':<8}" + "".join(f"{b + ' ms':>14}" for b in backends) + f"{'speed-up':>10}")
    for tag in FormatTag:
        lat = {}
        ref = None
        for b in backends:
            tensor, lat[b], _ = time_encode(chunk, window, tag, args.reps, backend=b)
            if ref is None:
                ref = tensor
            elif not np.array_equal(ref.data, tensor.data):
                raise SystemExit(f"{tag.name}: backends disagree")
        line = f"{tag.name.lower():<8}" + "".join(f"{lat[b] * 1e3:>14.3f}" for b in backends)
        if "cython" in lat and "python" in lat:
            line += f"{lat['python'] / lat['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
