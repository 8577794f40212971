"""Partition-and-injection pipeline for (d+1)-uniform families of VC <= d.

Given such a family over [n], the pipeline certifies the size bound

    |F| <= |F1| + |F2| + C(n-1, d) - |comp-shadow(F3) within C(V, d)|

by partitioning F into three parts, mapping the third part into an index
family of small subsets of V = [n] minus two anchor elements via a half-unit
coefficient vector map, and upgrading that map to an injection. Every
structural step is asserted; the two density thresholds are only reported.

All family members and index sets are plain bit-word ints here; the report
converts to element tuples at the JSON boundary.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .bitwords import k_subset_masks, popcount
from .certificates import (
    CHERRY,
    SINGLETON,
    TRIANGLE,
    CertificateAssignment,
    assemble_assignment,
    build_assignment,
    fiber_shape_elements,
)
from .errors import InvariantViolation, MemberShattered, UsageError
from .families import UniformFamily
from .traces import (
    compress_trace,
    expand_index,
    indices_by_size,
    occupancy_words,
    positions_of,
)

H0STAR = "H0STAR"
H11 = "H11"
H12 = "H12"
KD = "KD"
KD1 = "KD1"


@dataclass(frozen=True)
class PairCollection:
    """Greedy-maximal matching of size-(d-1)-certificate members whose
    certificates union to exactly the pairwise intersection."""

    pairs: tuple  # ((F, F'), ...) with F < F', list sorted
    paired: frozenset  # every member covered by some pair


@dataclass
class BoundAudit:
    f_size: int
    f1_size: int
    f2_size: int
    f3_size: int
    index_size: int
    comp_shadow_g: int
    comp_shadow_f3_v: int
    comp_shadow_g_v: int
    binom_n1_d: int
    asserted: list = field(default_factory=list)  # (name, lhs, rhs, ok)
    reported: dict = field(default_factory=dict)


@dataclass
class PartitionReport:
    family: UniformFamily
    d: int
    assign: CertificateAssignment
    pair_collection: PairCollection
    g_members: tuple
    assign_g: CertificateAssignment
    anchors: tuple
    v_mask: int
    f1: tuple
    f2: tuple
    f3: tuple
    classes: dict  # member mask -> class label
    index_sets: tuple  # the index family S, canonical order
    index_of: dict  # mask -> position in index_sets
    fmap: dict | None = None  # member mask -> ((index, half-units), ...)
    column_sums: dict | None = None
    max_column: int | None = None
    gmap: dict | None = None  # member mask -> index position
    audit: BoundAudit | None = None


def build_pair_collection(assign: CertificateAssignment) -> PairCollection:
    """Scan ordered pairs of the (d-1) stratum, keep both-unused matches with
    c(F) | c(F') == F & F', and repeat passes until a full pass adds nothing."""
    d = assign.d
    members = assign.strata.get(d - 1, ())
    cert = assign.assigned
    paired = set()
    pairs = []
    while True:
        added = False
        for i, fa in enumerate(members):
            if fa in paired:
                continue
            for fb in members[i + 1 :]:
                if fb in paired:
                    continue
                if cert[fa] | cert[fb] == fa & fb:
                    inter = fa & fb
                    if popcount(inter) != d:
                        raise InvariantViolation(
                            f"paired members intersect in {popcount(inter)} != d elements"
                        )
                    if popcount(cert[fa] & cert[fb]) != d - 2:
                        raise InvariantViolation("paired certificates must share d-2 elements")
                    pairs.append((fa, fb))
                    paired.add(fa)
                    paired.add(fb)
                    added = True
                    break
        if not added:
            break
    return PairCollection(tuple(pairs), frozenset(paired))


def build_g_and_reassign(assign: CertificateAssignment, pc: PairCollection):
    """Drop the paired members from the top two strata and recompute maximum
    certificates inside the survivor family.

    A member whose maximum certificate inside the survivors still has size d-1
    keeps its original certificate (that choice is what makes the later
    disjointness argument work); a member that can now do size d takes the
    canonical least size-d certificate.
    """
    fam = assign.family
    d = assign.d
    keep = [
        m
        for m in fam.masks
        if popcount(assign.assigned[m]) >= d - 1 and m not in pc.paired
    ]
    sub = UniformFamily.from_masks(fam.n, fam.k, keep)
    occs = occupancy_words(sub.masks, sub.k)
    groups = indices_by_size(sub.k)
    cg = {}
    for m, occ in zip(sub.masks, occs):
        best_size = None
        best_index = None
        for size in range(d, -1, -1):
            for c in groups[size]:
                if not occ >> c & 1:
                    best_size, best_index = size, c
                    break
            if best_size is not None:
                break
        if best_size is None or best_size < d - 1:
            raise InvariantViolation(
                f"member {m:#x} has maximum survivor certificate of size {best_size}, "
                f"expected at least d-1"
            )
        pos = positions_of(m)
        if best_size == d:
            cg[m] = expand_index(best_index, pos)
        else:
            old = assign.assigned[m]
            if popcount(old) != d - 1:
                raise InvariantViolation(
                    f"member {m:#x} lost its size-{popcount(old)} certificate in the survivors"
                )
            if occ >> compress_trace(old, pos) & 1:
                raise InvariantViolation(
                    f"original certificate of {m:#x} is realized inside the survivors"
                )
            cg[m] = old
    assign_g = assemble_assignment(sub, d, cg)
    _check_certificate_zones(assign_g)
    return tuple(sub.masks), assign_g


def _check_certificate_zones(assign_g: CertificateAssignment):
    """Distinct size-(d-1) certificates must claim disjoint zones.

    The zone of (F, c) is the three subsets S with c <= S <= F and |S| in
    {d-1, d}. A clash would contradict maximality of the pair collection.
    """
    d = assign_g.d
    owner = {}
    for m in assign_g.strata.get(d - 1, ()):
        c = assign_g.assigned[m]
        extra = m & ~c
        zone = [c]
        rest = extra
        while rest:
            low = rest & -rest
            zone.append(c | low)
            rest ^= low
        for s in zone:
            prev = owner.get(s)
            if prev is not None and prev != c:
                raise InvariantViolation(
                    f"zone set {s:#x} claimed by distinct certificates {prev:#x} and {c:#x}"
                )
            owner[s] = c


def select_anchor_pair(g_members, assign_g: CertificateAssignment, n: int) -> tuple:
    """The pair (i, j) minimizing (complement-shadow load, (d-1)-stratum load,
    canonical pair order), loads summed over the two elements."""
    if n < 2:
        raise UsageError(f"anchor selection needs n >= 2, got {n}")
    d = assign_g.d
    g_shadow = set()
    for m in g_members:
        rest = m
        while rest:
            low = rest & -rest
            g_shadow.add(m ^ low)
            rest ^= low
    cs_count = [0] * (n + 1)
    for dset in k_subset_masks(n, d):
        if dset not in g_shadow:
            rest = dset
            while rest:
                low = rest & -rest
                cs_count[low.bit_length()] += 1
                rest ^= low
    gd1_count = [0] * (n + 1)
    for m in assign_g.strata.get(d - 1, ()):
        rest = m
        while rest:
            low = rest & -rest
            gd1_count[low.bit_length()] += 1
            rest ^= low
    best = None
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            key = (cs_count[i] + cs_count[j], gd1_count[i] + gd1_count[j], (i, j))
            if best is None or key < best:
                best = key
    return best[2]


def partition_family(fam: UniformFamily, d: int, assume_vc: bool = False) -> PartitionReport:
    """Run the pipeline through class assignment and index-family construction.

    For a (d+1)-uniform family, VC <= d is exactly certificate existence for
    every member, so the entry check rides on the assignment build. With
    assume_vc the same failure is reported as an invariant violation instead
    of a usage error.
    """
    if d < 1:
        raise UsageError(f"pipeline needs d >= 1, got d={d}")
    if fam.n < 2:
        raise UsageError(f"pipeline needs n >= 2, got n={fam.n}")
    try:
        assign = build_assignment(fam, d)
    except MemberShattered as exc:
        if assume_vc:
            raise InvariantViolation(
                f"certificate existence failed: {exc}"
            ) from exc
        raise UsageError(f"family has VC dimension > d: {exc}") from exc
    pc = build_pair_collection(assign)
    g_members, assign_g = build_g_and_reassign(assign, pc)
    i, j = select_anchor_pair(g_members, assign_g, fam.n)
    ij = (1 << (i - 1)) | (1 << (j - 1))
    v_mask = ((1 << fam.n) - 1) & ~ij
    cg = assign_g.assigned

    low_strata = [
        m for m in fam.masks if popcount(assign.assigned[m]) <= d - 2
    ]
    f1 = sorted(set(low_strata) | pc.paired)

    f2 = []
    f3 = []
    for m in g_members:
        c = cg[m]
        in_gd1_anchor = popcount(c) == d - 1 and m & ij
        in_gij = (m & ij) == ij and popcount(c & ~ij) <= d - 2
        if in_gd1_anchor or in_gij:
            f2.append(m)
        else:
            f3.append(m)

    classes = {}
    for m in f3:
        c = cg[m]
        if m & ij == 0:
            classes[m] = KD if popcount(c) == d else KD1
            continue
        if popcount(c) != d:
            raise InvariantViolation(
                f"member {m:#x} meets the anchors with a size-{popcount(c)} certificate"
            )
        ci = popcount(c & ij)
        if ci > 1:
            raise InvariantViolation(f"member {m:#x} has both anchors inside its certificate")
        if ci == 0:
            classes[m] = H0STAR
        elif popcount(m & ij) == 1:
            classes[m] = H11
        else:
            classes[m] = H12

    if set(f1) | set(f2) | set(f3) != set(fam.masks) or len(f1) + len(f2) + len(f3) != len(
        fam.masks
    ):
        raise InvariantViolation("partition is not exact")

    f3_shadow = set()
    for m in f3:
        rest = m
        while rest:
            low = rest & -rest
            f3_shadow.add(m ^ low)
            rest ^= low
    index_sets = list(_v_subsets(v_mask, d - 1))
    index_sets += [s for s in _v_subsets(v_mask, d) if s in f3_shadow]
    index_sets.sort()
    index_of = {s: pos for pos, s in enumerate(index_sets)}

    return PartitionReport(
        family=fam,
        d=d,
        assign=assign,
        pair_collection=pc,
        g_members=g_members,
        assign_g=assign_g,
        anchors=(i, j),
        v_mask=v_mask,
        f1=tuple(f1),
        f2=tuple(f2),
        f3=tuple(f3),
        classes=classes,
        index_sets=tuple(index_sets),
        index_of=index_of,
    )


def _v_subsets(v_mask: int, size: int):
    """Subsets of the anchor complement of the given size, canonical order."""
    if size < 0:
        return
    positions = positions_of(v_mask)
    if size > len(positions):
        return
    for sub in k_subset_masks(len(positions), size):
        m = 0
        rest = sub
        while rest:
            low = rest & -rest
            m |= 1 << positions[low.bit_length() - 1]
            rest ^= low
        yield m


def build_f(report: PartitionReport) -> PartitionReport:
    """Fill in the coefficient-vector map on F3.

    Every member gets total mass 2 half-units on one or two index sets; which
    sets depends on its class, and for the (d-1)-certificate members inside V
    on the shape of the certificate's restricted fiber and on how many
    anchor-side members share the certificate's V-part.
    """
    d = report.d
    v = report.v_mask
    cg = report.assign_g.assigned
    idx = report.index_of

    def index(mask: int, context: str) -> int:
        try:
            return idx[mask]
        except KeyError:
            raise InvariantViolation(f"{context}: image {mask:#x} outside the index family") from None

    h11_by_vpart = {}
    for m, label in report.classes.items():
        if label == H11:
            h11_by_vpart.setdefault(cg[m] & v, []).append(m)

    kd1_fibers = {}
    for m, label in report.classes.items():
        if label == KD1:
            kd1_fibers.setdefault(cg[m], []).append(m)

    fmap = {}
    for m in report.f3:
        label = report.classes[m]
        if label in (H0STAR, KD):
            fmap[m] = ((index(cg[m], label), 2),)
        elif label == H12:
            fmap[m] = ((index(m & v, label), 2),)
        elif label == H11:
            fmap[m] = (
                (index(m & v, label), 1),
                (index(cg[m] & v, label), 1),
            )
    for t, fiber in sorted(kd1_fibers.items()):
        fiber.sort()
        kind, elems = fiber_shape_elements(t, fiber)
        if kind == TRIANGLE:
            x, y, z = elems
            images = {
                t | _bits(x, y): t | _bits(x),
                t | _bits(y, z): t | _bits(y),
                t | _bits(x, z): t | _bits(z),
            }
            for m in fiber:
                fmap[m] = ((index(images[m], "triangle fiber"), 2),)
        elif kind == CHERRY:
            a, b, c = elems
            images = {t | _bits(a, b): t | _bits(b), t | _bits(a, c): t | _bits(c)}
            for m in fiber:
                fmap[m] = ((index(images[m], "cherry fiber"), 2),)
        else:
            fmap[fiber[0]] = _singleton_image(
                report, t, fiber[0], elems, h11_by_vpart.get(t, ()), index
            )
    report.fmap = fmap
    return report


def _bits(*elements: int) -> int:
    out = 0
    for e in elements:
        out |= 1 << (e - 1)
    return out


def _singleton_image(report, t: int, member: int, elems, hits, index):
    """Image of a lone restricted-fiber member T+{x,y}, steered by the
    anchor-side members whose certificate's V-part is T."""
    x, y = elems
    v = report.v_mask
    if len(hits) > 2:
        raise InvariantViolation(
            f"certificate V-part {t:#x} is shared by {len(hits)} anchor-side members"
        )
    if len(hits) == 0:
        return ((index(t, "singleton fiber, unshared"), 2),)
    if len(hits) == 1:
        a_mask = hits[0] & v & ~t
        if popcount(a_mask) != 1:
            raise InvariantViolation("anchor-side member must add one element of V beyond T")
        a = a_mask.bit_length()
        if a not in (x, y):
            raise InvariantViolation(
                f"anchor-side element {a} is not one of the fiber pair ({x},{y})"
            )
        b = y if a == x else x
        return (
            (index(t, "singleton fiber, one sharer"), 1),
            (index(t | _bits(b), "singleton fiber, one sharer"), 1),
        )
    h1, h2 = sorted(hits)
    inter = h1 & h2
    if t & ~inter:
        raise InvariantViolation("anchor-side sharers must both contain T")
    extra = inter & ~t
    if extra == 0:
        a1 = (h1 & v & ~t).bit_length()
        a2 = (h2 & v & ~t).bit_length()
        if {a1, a2} != {x, y}:
            raise InvariantViolation(
                f"anchor-side elements {{{a1},{a2}}} differ from the fiber pair ({x},{y})"
            )
        return (
            (index(t | _bits(x), "singleton fiber, split sharers"), 1),
            (index(t | _bits(y), "singleton fiber, split sharers"), 1),
        )
    if popcount(extra) != 1 or extra & ~v:
        raise InvariantViolation("anchor-side sharers overlap beyond T in more than one V element")
    a = extra.bit_length()
    if a not in (x, y):
        raise InvariantViolation(
            f"shared anchor-side element {a} is not one of the fiber pair ({x},{y})"
        )
    b = y if a == x else x
    return ((index(t | _bits(b), "singleton fiber, aligned sharers"), 2),)


def verify_column_sums(report: PartitionReport) -> PartitionReport:
    """Column sums of the coefficient vectors, each at most 2 half-units."""
    if report.fmap is None:
        raise UsageError("build_f must run before verify_column_sums")
    sums = {}
    for m in report.f3:
        total = 0
        for pos, half in report.fmap[m]:
            target = report.index_sets[pos]
            if target & ~m:
                raise InvariantViolation(
                    f"image {target:#x} of member {m:#x} is not a subset of the member"
                )
            sums[pos] = sums.get(pos, 0) + half
            total += half
        if total != 2:
            raise InvariantViolation(f"member {m:#x} carries mass {total}, expected 2 half-units")
    worst = max(sums.values(), default=0)
    if worst > 2:
        raise InvariantViolation(f"column sum {worst} exceeds 2 half-units")
    report.column_sums = dict(sorted(sums.items()))
    report.max_column = worst
    return report


def build_injection_g(report: PartitionReport) -> PartitionReport:
    """Upgrade f to an injection F3 -> index family.

    Unit-image members keep their image; the half-half members are matched to
    the pool of indices their supports touch, in canonical order on both
    sides. Column sums <= 2 make the pool big enough and keep it disjoint
    from the unit images.
    """
    if report.column_sums is None:
        raise UsageError("verify_column_sums must run before build_injection_g")
    unit_members = []
    split_members = []
    for m in report.f3:
        if len(report.fmap[m]) == 1:
            unit_members.append(m)
        else:
            split_members.append(m)
    u1 = {report.fmap[m][0][0] for m in unit_members}
    if len(u1) != len(unit_members):
        raise InvariantViolation("two unit-image members share an index")
    pool_usage = {}
    for m in split_members:
        for pos, _ in report.fmap[m]:
            pool_usage[pos] = pool_usage.get(pos, 0) + 1
    u2 = sorted(pool_usage)
    if u1 & set(u2):
        raise InvariantViolation("unit images collide with the half-half index pool")
    for pos, used in pool_usage.items():
        if used > 2:
            raise InvariantViolation(f"index {pos} supports {used} > 2 half-half members")
    if len(split_members) > len(u2):
        raise InvariantViolation("half-half members outnumber their index pool")
    gmap = {m: report.fmap[m][0][0] for m in unit_members}
    for m, pos in zip(sorted(split_members), u2):
        gmap[m] = pos
    if len(set(gmap.values())) != len(gmap):
        raise InvariantViolation("injection has a collision")
    report.gmap = dict(sorted(gmap.items()))
    return report


def audit_bound(report: PartitionReport) -> PartitionReport:
    """Assert the exact counting chain and attach the reported-only ratios."""
    if report.gmap is None:
        raise UsageError("build_injection_g must run before audit_bound")
    fam = report.family
    n, d = fam.n, report.d
    v = report.v_mask

    g_shadow = set()
    for m in report.g_members:
        rest = m
        while rest:
            low = rest & -rest
            g_shadow.add(m ^ low)
            rest ^= low
    f_shadow = set()
    for m in fam.masks:
        rest = m
        while rest:
            low = rest & -rest
            f_shadow.add(m ^ low)
            rest ^= low
    f3_in_v_shadow = {s for s in report.index_sets if popcount(s) == d}

    comp_shadow_g = comb(n, d) - len(g_shadow)
    comp_shadow_f = comb(n, d) - len(f_shadow)
    comp_shadow_f3_v = comb(n - 2, d) - len(f3_in_v_shadow)
    comp_shadow_g_v = sum(1 for s in _v_subsets(v, d) if s not in g_shadow)

    audit = BoundAudit(
        f_size=len(fam),
        f1_size=len(report.f1),
        f2_size=len(report.f2),
        f3_size=len(report.f3),
        index_size=len(report.index_sets),
        comp_shadow_g=comp_shadow_g,
        comp_shadow_f3_v=comp_shadow_f3_v,
        comp_shadow_g_v=comp_shadow_g_v,
        binom_n1_d=comb(n - 1, d),
    )

    checks = [
        ("f3_le_index_family", len(report.f3), len(report.index_sets)),
        (
            "family_le_f1_f2_chain",
            len(fam),
            len(report.f1) + len(report.f2) + comb(n - 1, d) - comp_shadow_f3_v,
        ),
    ]
    for name, lhs, rhs in checks:
        ok = lhs <= rhs
        audit.asserted.append((name, lhs, rhs, ok))
        if not ok:
            raise InvariantViolation(f"audit check {name} failed: {lhs} > {rhs}")

    audit.reported = {
        "f1_f2_size": len(report.f1) + len(report.f2),
        "comp_shadow_f": comp_shadow_f,
        "tenth_comp_shadow_f": Fraction(comp_shadow_f, 10),
        "pair_member_count": len(report.pair_collection.paired),
        "pair_threshold": Fraction(400 * d * d * n ** max(d - 2, 0), n ** max(2 - d, 0)),
        "corollary_lhs": comp_shadow_f,
        "corollary_rhs": Fraction(10 * (comb(n - 1, d) - len(fam)), 9),
    }
    report.audit = audit
    return report


def run_pipeline(fam: UniformFamily, d: int, assume_vc: bool = False) -> PartitionReport:
    """partition_family + build_f + verify_column_sums + injection + audit."""
    report = partition_family(fam, d, assume_vc=assume_vc)
    build_f(report)
    verify_column_sums(report)
    build_injection_g(report)
    audit_bound(report)
    return report
