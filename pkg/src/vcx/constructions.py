"""Reference families: stars, complete families, and random maximal ones.

The random generator must be reproducible across platforms and Python
versions, so it uses an explicit split-mix 64-bit stream instead of the
stdlib random module.
"""

from dataclasses import dataclass
from math import comb

from .bitwords import k_subset_masks
from .errors import UsageError
from .families import UniformFamily
from .traces import TraceTracker

_MASK64 = (1 << 64) - 1
# split-mix 64 constants: golden-ratio increment and the two finalizer mixers
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MIX1 = 0xBF58476D1CE4E5B9
_SM_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit stream; the whole package's only RNG."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next64(self) -> int:
        self.state = (self.state + _SM_GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _SM_MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _SM_MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise UsageError(f"bound must be positive, got {bound}")
        return self.next64() % bound

    def shuffle(self, items: list):
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class FuzzSeed:
    """Parameters of one random-maximal generation run."""

    seed: int
    n: int
    d: int


def star_family(n: int, d: int) -> UniformFamily:
    """All (d+1)-subsets of [n] containing element 1; size C(n-1, d)."""
    if not 0 <= d < n:
        raise UsageError(f"need 0 <= d < n, got n={n} d={d}")
    masks = [1 | (rest << 1) for rest in k_subset_masks(n - 1, d)]
    return UniformFamily.from_masks(n, d + 1, masks)


def complete_family(n: int, k: int) -> UniformFamily:
    """All k-subsets of [n]."""
    if not 0 <= k <= n:
        raise UsageError(f"need 0 <= k <= n, got n={n} k={k}")
    return UniformFamily.from_masks(n, k, k_subset_masks(n, k))


def random_maximal_vc_family(fseed: FuzzSeed) -> UniformFamily:
    """A random maximal (d+1)-uniform family of VC dimension at most d.

    Shuffles all candidate (d+1)-sets with the seeded stream and adds each one
    iff every member would still keep a certificate afterwards. The result is
    maximal: no rejected candidate becomes addable later, because traces only
    accumulate.
    """
    n, d = fseed.n, fseed.d
    if not 1 <= d + 1 <= n:
        raise UsageError(f"need 1 <= d+1 <= n, got n={n} d={d}")
    if n > 63:
        raise UsageError(f"ground set {n} exceeds 63")
    candidates = list(k_subset_masks(n, d + 1))
    SplitMix64(fseed.seed).shuffle(candidates)
    tracker = TraceTracker(n, d + 1, comb(n, d + 1))
    for cand in candidates:
        tracker.try_add(cand)
    return UniformFamily.from_masks(n, d + 1, tracker.masks())
