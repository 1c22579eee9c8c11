"""Compare the compiled and pure-Python alignment kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--pairs 2000]
"""

from __future__ import annotations

import random
import string
import timeit

import click

from postocr import _kernels_py

try:
    from postocr import _kernels
except ImportError:
    _kernels = None


def _word(rng: random.Random, lo: int = 3, hi: int = 12) -> str:
    return "".join(rng.choice(string.ascii_lowercase[:8]) for _ in range(rng.randint(lo, hi)))


def _noisy(rng: random.Random, word: str) -> str:
    chars = list(word)
    for _ in range(rng.randint(1, 2)):
        k = rng.randrange(len(chars))
        chars[k] = rng.choice(string.ascii_lowercase[:8])
    return "".join(chars)


def workloads(n_pairs: int, seed: int = 0):
    rng = random.Random(seed)
    words = [_word(rng) for _ in range(n_pairs)]
    pairs = [(w, _noisy(rng, w)) for w in words]
    doc = [_word(rng, 2, 9) for _ in range(400)]
    noisy_doc = [_noisy(rng, w) if rng.random() < 0.25 else w for w in doc]
    return {
        "align_ops": lambda k: [k.align_ops(a, b) for a, b in pairs],
        "align_cost": lambda k: [k.align_cost(a, b) for a, b in pairs],
        "align_tokens": lambda k: k.align_tokens(noisy_doc, doc),
        "edit_distance": lambda k: [k.edit_distance(a, b) for a, b in pairs],
    }


@click.command()
@click.option("--repeat", default=5, show_default=True)
@click.option("--pairs", default=2000, show_default=True, help="Word pairs per character-level workload.")
def main(repeat: int, pairs: int) -> None:
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["compiled"] = _kernels
    else:
        click.echo("compiled extension not built; timing the Python backend only")
    click.echo(f"{'kernel':<15}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for name, run in workloads(pairs).items():
        times = {b: min(timeit.repeat(lambda: run(mod), number=1, repeat=repeat)) for b, mod in backends.items()}
        speedup = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        click.echo(f"{name:<15}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends) + f"{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
