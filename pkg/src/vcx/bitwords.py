"""Low-level helpers for sets encoded as integer bit words.

Element e of the ground set [n] = {1, ..., n} corresponds to bit e-1, so the
integer value of a word doubles as its canonical sort key (colex order on
sets). All functions here work on plain ints; the typed wrappers live in
vcx.families.
"""

from math import comb


def bit(element: int) -> int:
    return 1 << (element - 1)


def mask_of(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    """Decode a bit word into its sorted tuple of elements."""
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int):
    """Yield every submask of `mask`, the full mask included, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        # classic trick: next submask in increasing order
        sub = (sub - mask) & mask


def k_subset_masks(n: int, k: int):
    """All k-element subsets of [n] as masks, in canonical (ascending) order.

    Gosper's hack: the next mask with the same popcount in increasing integer
    order. Integer order on masks is colex order on the sets, which is the
    canonical order used everywhere here.
    """
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    v = (1 << k) - 1
    limit = 1 << n
    while v < limit:
        yield v
        low = v & -v
        ripple = v + low
        v = ripple | (((v ^ ripple) >> 2) // low)


def unrank_k_subset(index: int, n: int, k: int) -> int:
    """Mask of the k-subset of [n] at position `index` in canonical order.

    Combinatorial number system: the largest element is chosen first.
    """
    if not 0 <= index < comb(n, k):
        raise ValueError(f"index {index} out of range for C({n},{k})")
    m = 0
    remaining = index
    kk = k
    top = n
    while kk > 0:
        # largest c with C(c-1, kk) <= remaining, scanning down from top
        c = top
        while comb(c - 1, kk) > remaining:
            c -= 1
        remaining -= comb(c - 1, kk)
        m |= 1 << (c - 1)
        top = c - 1
        kk -= 1
    return m
