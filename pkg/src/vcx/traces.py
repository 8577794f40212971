"""Per-member trace occupancy for k-uniform families.

For a member F of a k-uniform family, the traces of other members on F are
subsets of F; compressing each trace onto F's own bit positions gives an index
in [0, 2^k), and the set of realized traces becomes a 2^k-bit occupancy word.
F has a certificate iff some proper-subset bit is still clear. This is the
inner loop of certificate assignment, the random-maximal generator, and the
exact search, so a vectorized numpy path backs the plain-Python one.
"""

import numpy as np

from .bitwords import popcount

# numpy path packs occupancy into int64, so it needs 2^k <= 63 usable bits
_NUMPY_MAX_K = 5


def full_trace_bit(k: int) -> int:
    return 1 << ((1 << k) - 1)


def proper_trace_mask(k: int) -> int:
    """Occupancy bits of the proper subsets: everything except the full trace."""
    return full_trace_bit(k) - 1


def size_layer_mask(k: int, s: int) -> int:
    """Occupancy bits of the proper subsets of size exactly s."""
    m = 0
    for c in range(1 << k):
        if popcount(c) == s and c != (1 << k) - 1:
            m |= 1 << c
    return m


def indices_by_size(k: int) -> list[list[int]]:
    """Proper-subset compressed indices grouped by size, ascending inside a group.

    Expansion onto a member's sorted bit positions is monotone, so ascending
    compressed index is ascending canonical order of the decoded subsets.
    """
    groups = [[] for _ in range(k + 1)]
    for c in range((1 << k) - 1):
        groups[popcount(c)].append(c)
    return groups


def positions_of(mask: int) -> tuple[int, ...]:
    out = []
    p = 0
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return tuple(out)


def expand_index(c: int, positions) -> int:
    """Decode a compressed trace index back to a mask on the given positions."""
    m = 0
    for t, p in enumerate(positions):
        if c >> t & 1:
            m |= 1 << p
    return m


def compress_trace(trace_mask: int, positions) -> int:
    c = 0
    for t, p in enumerate(positions):
        if trace_mask >> p & 1:
            c |= 1 << t
    return c


def occupancy_words(masks, k: int) -> list[int]:
    """Realized-trace occupancy word for every member, self-trace included."""
    m = len(masks)
    if m == 0:
        return []
    if k <= _NUMPY_MAX_K:
        return _occupancy_numpy(masks, k)
    return _occupancy_python(masks, k)


def _occupancy_numpy(masks, k: int) -> list[int]:
    arr = np.asarray(masks, dtype=np.int64)
    m = arr.shape[0]
    pos = np.empty((m, k), dtype=np.int64)
    for i, mask in enumerate(masks):
        pos[i] = positions_of(mask)
    inter = arr[:, None] & arr[None, :]
    comp = np.zeros((m, m), dtype=np.int64)
    for t in range(k):
        comp |= ((inter >> pos[:, t : t + 1]) & 1) << t
    occ = np.bitwise_or.reduce(np.int64(1) << comp, axis=1)
    return [int(x) for x in occ]


def _occupancy_python(masks, k: int) -> list[int]:
    out = []
    for mask in masks:
        pos = positions_of(mask)
        occ = 0
        for other in masks:
            occ |= 1 << compress_trace(other & mask, pos)
        out.append(occ)
    return out


class TraceTracker:
    """Incrementally grown k-uniform family with live occupancy words.

    try_add(G) commits G iff afterwards every member, G included, still has a
    proper subset unrealized as a trace (i.e. keeps a certificate). There is
    no removal: the generator only ever grows its family.
    """

    def __init__(self, n: int, k: int, capacity: int):
        self.n = n
        self.k = k
        self.count = 0
        self.proper = proper_trace_mask(k)
        self.full_bit = full_trace_bit(k)
        self._use_numpy = k <= _NUMPY_MAX_K
        if self._use_numpy:
            self._masks = np.zeros(capacity, dtype=np.int64)
            self._pos = np.zeros((capacity, k), dtype=np.int64)
            self._occ = np.zeros(capacity, dtype=np.int64)
        else:
            self._masks = []
            self._pos = []
            self._occ = []

    def masks(self) -> list[int]:
        if self._use_numpy:
            return [int(x) for x in self._masks[: self.count]]
        return list(self._masks)

    def try_add(self, G: int) -> bool:
        if self._use_numpy:
            return self._try_add_numpy(G)
        return self._try_add_python(G)

    def _try_add_numpy(self, G: int) -> bool:
        m = self.count
        gpos = positions_of(G)
        if m == 0:
            self._commit_numpy(G, gpos, None, self.full_bit)
            return True
        inter = self._masks[:m] & G
        comp = np.zeros(m, dtype=np.int64)
        for t in range(self.k):
            comp |= ((inter >> self._pos[:m, t]) & 1) << t
        new_occ = self._occ[:m] | (np.int64(1) << comp)
        if np.any((new_occ & self.proper) == self.proper):
            return False
        gcomp = np.zeros(m, dtype=np.int64)
        for t, p in enumerate(gpos):
            gcomp |= ((inter >> p) & 1) << t
        gocc = self.full_bit | int(np.bitwise_or.reduce(np.int64(1) << gcomp))
        if gocc & self.proper == self.proper:
            return False
        self._commit_numpy(G, gpos, new_occ, gocc)
        return True

    def _commit_numpy(self, G: int, gpos, new_occ, gocc: int):
        m = self.count
        if new_occ is not None:
            self._occ[:m] = new_occ
        self._masks[m] = G
        self._pos[m] = gpos
        self._occ[m] = gocc
        self.count = m + 1

    def _try_add_python(self, G: int) -> bool:
        gpos = positions_of(G)
        new_occs = []
        for mask, pos, occ in zip(self._masks, self._pos, self._occ):
            occ |= 1 << compress_trace(mask & G, pos)
            if occ & self.proper == self.proper:
                return False
            new_occs.append(occ)
        gocc = self.full_bit
        for mask in self._masks:
            gocc |= 1 << compress_trace(mask & G, gpos)
        if gocc & self.proper == self.proper:
            return False
        self._occ = new_occs
        self._occ.append(gocc)
        self._masks.append(G)
        self._pos.append(gpos)
        self.count += 1
        return True
