"""Independent brute-force oracles shared by the test modules.

Everything here works on plain tuples and frozensets over elements 1..n,
deliberately avoiding the package's bitmask machinery so that a bug in the
fast path cannot cancel itself out in a test.
"""

from itertools import combinations


def oracle_is_shattered(S, member_lists):
    """Every subset of S occurs as some member's trace on S."""
    S = frozenset(S)
    traces = {frozenset(m) & S for m in member_lists}
    return len(traces) == 1 << len(S)


def oracle_vc(n, member_lists):
    """Largest shattered-subset size, scanning all 2^n subsets of [n]."""
    if not member_lists:
        return -1
    members = [frozenset(m) for m in member_lists]
    universe = list(range(1, n + 1))
    best = 0
    for bits in range(1 << n):
        S = frozenset(e for i, e in enumerate(universe) if bits >> i & 1)
        if len(S) <= best:
            continue
        traces = {m & S for m in members}
        if len(traces) == 1 << len(S):
            best = len(S)
    return best


def oracle_vc_le(n, member_lists, d):
    """VC <= d iff no (d+1)-subset is shattered (shattering is downward closed)."""
    for S in combinations(range(1, n + 1), d + 1):
        if oracle_is_shattered(S, member_lists):
            return False
    return True


def oracle_certificates(F, member_lists):
    """All proper subsets of F unrealized as a trace on F, as frozensets."""
    F = frozenset(F)
    realized = {frozenset(m) & F for m in member_lists}
    out = []
    for r in range(len(F)):
        for T in combinations(sorted(F), r):
            if frozenset(T) not in realized:
                out.append(frozenset(T))
    return out


def oracle_max_family(n, d):
    """Max size of a VC <= d family of (d+1)-sets, by full 2^C(n,d+1) scan."""
    cands = list(combinations(range(1, n + 1), d + 1))
    best = 0
    for bits in range(1 << len(cands)):
        fam = [cands[i] for i in range(len(cands)) if bits >> i & 1]
        if len(fam) > best and oracle_vc_le(n, fam, d):
            best = len(fam)
    return best


def mask_from(elements):
    out = 0
    for e in elements:
        out |= 1 << (e - 1)
    return out
