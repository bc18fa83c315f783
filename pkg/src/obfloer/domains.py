"""Domains between Heegaard Floer generators.

A domain is an integer chain of regions running from one generator to
another: if c is the coefficient vector, then
boundary_mat . c = indicator(from) - indicator(to) as 0-chains of points
(equivalently, the alpha-arc boundary matrix applied to c gives to - from;
the two matrices are negatives of each other).  This orientation is the one
under which the contact generator supports no outgoing positive domain and
the two-corner pinning at contact points caps positive-domain counts by
2^(moving contact points picked up by the target).
Chains of unpointed regions ("hat" domains, class Domain) are the ones the
hat theory counts; chains over all regions (FullDomain) decide when two
generators sit in the same SpinC class and carry the relative grading.

The calculator owns the prepared integer solvers and exposes:

  * periodic_domain_basis: lattice basis of hat domains with empty boundary;
  * check_weak_admissibility: no nonzero nonnegative periodic combination;
  * connecting_domain / find_pos_domains: one solution, or the full list of
    nonnegative solutions (a bounded-polytope lattice scan);
  * maslov_index, j_plus, domain_type: index, count of crossing-pair
    switches, and the (J+, chi, b, g) shape of the underlying curve;
  * spinc_partition / index1_differentials: SpinC classes with Chern
    numbers, divisibility, relative gradings, and the candidate
    differentials (positive index-1 domains between grading-adjacent
    generators).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .diagram import Generator, circuit_alpha_arcs, circuit_beta_arcs
from .linalg import IntSolver, UnboundedPolytopeError, cone_is_trivial, lattice_points


class DomainError(Exception):
    """A domain failed an exact structural identity."""


class AdmissibilityError(DomainError):
    """A positive-domain scan hit an unbounded polytope."""


@dataclass(frozen=True)
class Domain:
    """Integer chain of unpointed regions from generator src to dst.

    coeffs has one entry per unpointed region; pointed regions are pinned
    to zero and not stored.
    """

    coeffs: tuple
    src: int
    dst: int


@dataclass(frozen=True)
class FullDomain:
    """Integer chain over all regions, pointed ones allowed."""

    coeffs: tuple
    src: int
    dst: int


@dataclass(frozen=True)
class PeriodicDomainGroup:
    """Basis of the lattice of hat domains with vanishing boundary."""

    basis: tuple  # Domains with src == dst
    rank: int


@dataclass(frozen=True)
class SpinCTable:
    """Partition of generators by SpinC class, with grading data.

    classes: tuple of tuples of generator indices (each ascending).
    class_of: generator index -> class index.
    chern: per generator, one integer per periodic basis element.
    div: per class, nonnegative grading indeterminacy (0 = ZZ-graded).
    gradings: per class, dict generator index -> relative grading
      (reduced mod div when div > 0; the lowest-index member sits at 0).
    """

    classes: tuple
    class_of: tuple
    chern: tuple
    div: tuple
    gradings: tuple


# one directed arc occurrence on a region circuit
@dataclass(frozen=True)
class _ArcOcc:
    kind: str  # "a" or "b"
    tail: int
    head: int
    region: int
    start_corner: tuple  # (region, circuit, position) at tail
    end_corner: tuple  # at head


class DomainCalculator:
    """All domain-level computations for one diagram, with cached solvers."""

    def __init__(self, diagram):
        self.dg = diagram
        self.num_regions = diagram.num_regions
        self.num_unpointed = diagram.num_unpointed
        self._pm4 = diagram.point_measures_4  # [region][point]
        self._em2 = diagram.euler_measures_2
        self._hat = IntSolver(diagram.boundary_mat, ncols=self.num_unpointed)
        self._full = IntSolver(diagram.boundary_mat, ncols=self.num_regions)
        kb = self._hat.kernel_basis()
        assert len(kb) == diagram.b1_diagram
        self._periodic = PeriodicDomainGroup(
            basis=tuple(Domain(tuple(v), 0, 0) for v in kb), rank=len(kb)
        )
        self._full_kernel = self._full.kernel_basis()
        self._gens = diagram.generators()
        self._admissible = None
        self._edges = None
        self._point_fans = None
        self._spinc = None
        self._index1 = None

    # -- basic plumbing ----------------------------------------------------

    def _gen(self, x):
        if isinstance(x, Generator):
            return x
        return self._gens[x]

    def _indicator_diff(self, src, dst):
        # right-hand side of the beta-boundary system: indicator(src) - indicator(dst)
        rhs = [0] * self.dg.num_points
        for p in src.points:
            rhs[p] += 1
        for p in dst.points:
            rhs[p] -= 1
        return rhs

    def _full_coeffs(self, dom):
        c = dom.coeffs
        if len(c) == self.num_regions:
            return c
        return c + (0,) * (self.num_regions - len(c))

    def _check_boundary(self, dom):
        rhs = self._indicator_diff(self._gen(dom.src), self._gen(dom.dst))
        c = self._full_coeffs(dom)
        bm = self.dg.boundary_mat
        for p in range(self.dg.num_points):
            got = sum(bm[p][r] * c[r] for r in range(self.num_regions) if c[r])
            if got != rhs[p]:
                raise DomainError(
                    "boundary mismatch at point %d: %d != %d" % (p, got, rhs[p])
                )
        return dom

    def _pm4_sum(self, coeffs, points):
        pm4 = self._pm4
        tot = 0
        for r, cr in enumerate(coeffs):
            if cr:
                row = pm4[r]
                for p in points:
                    tot += cr * row[p]
        return tot

    def _em2_total(self, coeffs):
        return sum(cr * e for cr, e in zip(coeffs, self._em2) if cr)

    # -- periodic domains and admissibility --------------------------------

    def periodic_domain_basis(self):
        return self._periodic

    def full_periodic_kernel(self):
        """Kernel basis of the boundary matrix over all regions."""
        return [list(v) for v in self._full_kernel]

    def check_weak_admissibility(self):
        """True iff no nonzero combination of periodic domains is >= 0."""
        if self._admissible is None:
            basis = [d.coeffs for d in self._periodic.basis]
            rows = [
                tuple(b[r] for b in basis) for r in range(self.num_unpointed)
            ]
            self._admissible = cone_is_trivial(rows, self._periodic.rank)
        return self._admissible

    # -- connecting and positive domains -----------------------------------

    def connecting_domain(self, x, y):
        """Some hat domain from x to y, or None when none exists."""
        xg, yg = self._gen(x), self._gen(y)
        sol = self._hat.solve(self._indicator_diff(xg, yg))
        if sol is None:
            return None
        return self._check_boundary(Domain(tuple(sol), xg.index, yg.index))

    def full_connecting_domain(self, x, y):
        """Some chain over all regions from x to y, or None."""
        xg, yg = self._gen(x), self._gen(y)
        sol = self._full.solve(self._indicator_diff(xg, yg))
        if sol is None:
            return None
        return self._check_boundary(FullDomain(tuple(sol), xg.index, yg.index))

    def _corner_cut_rows(self, xg, yg, base, basis):
        """Pruning rows from the two-corner pinning at moving contact points.

        At a contact point of an open-book diagram only two of the four
        corner occurrences lie in unpointed regions, and both sit on the
        same side (same sign) of the point's boundary equation.  A hat
        domain's net multiplicity at the point is therefore carried
        entirely by that unpointed pair: when the point moves between the
        generators the pair's coefficients must total 1 (one corner region
        carries 1, the other 0) or the equation has no nonnegative solution
        at all.  The per-region caps are valid inequality cuts for the
        integer scan; infeasibility is reported as None so the caller can
        skip the scan entirely.
        """
        contact = set(self.dg.contact_points)
        xset, yset = set(xg.points), set(yg.points)
        rank = len(basis)
        rows = []
        for c in contact & (xset ^ yset):
            rhs = 1 if c in xset else -1
            cnt = ({}, {})  # unpointed occurrence multiplicity by corner parity
            for r, _, i in self.dg.corner_occurrences(c):
                if not self.dg.is_pointed(r):
                    d = cnt[i % 2]
                    d[r] = d.get(r, 0) + 1
            if cnt[0] and cnt[1]:
                continue  # both signs live: nothing to pin
            if cnt[0]:
                live, total = cnt[0], rhs  # even corners add, odd subtract
            elif cnt[1]:
                live, total = cnt[1], -rhs
            else:
                return None  # every corner pointed: boundary equation 0 = rhs
            if total < 0:
                return None  # nonnegative coefficients cannot sum to -1
            for r, m in live.items():
                # m * coeff[r] <= 1 along the affine family base + t.basis
                lin = tuple(-m * b[r] for b in basis)
                rows.append(lin + (1 - m * base[r],))
        return rows

    def find_pos_domains(self, x, y):
        """Every nonnegative hat domain from x to y, sorted by coefficients.

        Scans the lattice points of {t : base + t . periodic >= 0}; raises
        AdmissibilityError when that polytope is unbounded, which is exactly
        a weak-admissibility failure.
        """
        xg, yg = self._gen(x), self._gen(y)
        d0 = self.connecting_domain(xg, yg)
        if d0 is None:
            return []
        basis = [d.coeffs for d in self._periodic.basis]
        rank = len(basis)
        rows = [
            tuple(b[r] for b in basis) + (d0.coeffs[r],)
            for r in range(self.num_unpointed)
        ]
        cuts = self._corner_cut_rows(xg, yg, d0.coeffs, basis)
        if cuts is None:
            return []
        rows.extend(cuts)
        try:
            ts = lattice_points(rows, rank)
        except UnboundedPolytopeError as err:
            raise AdmissibilityError(
                "positive domains %s -> %s form an unbounded set; "
                "the diagram is not weakly admissible" % (xg, yg)
            ) from err
        out = []
        for t in ts:
            coeffs = tuple(
                d0.coeffs[r] + sum(t[j] * basis[j][r] for j in range(rank))
                for r in range(self.num_unpointed)
            )
            assert all(v >= 0 for v in coeffs)
            out.append(self._check_boundary(Domain(coeffs, xg.index, yg.index)))
        out.sort(key=lambda d: d.coeffs)
        return out

    # -- Maslov index and friends -------------------------------------------

    def maslov_index(self, dom):
        """(n_x + n_y + 2e)(D), which lands in ZZ for honest domains."""
        xg, yg = self._gen(dom.src), self._gen(dom.dst)
        c = self._full_coeffs(dom)
        tot = (
            self._pm4_sum(c, xg.points)
            + self._pm4_sum(c, yg.points)
            + 2 * self._em2_total(c)
        )
        if tot % 4:
            raise DomainError("Maslov numerator %d not divisible by 4" % tot)
        return tot // 4

    def j_plus(self, dom):
        """maslov - 2e + (cycles of src) - (cycles of dst)."""
        xg, yg = self._gen(dom.src), self._gen(dom.dst)
        return (
            self.maslov_index(dom)
            - self._em2_total(self._full_coeffs(dom))
            + xg.cycles()
            - yg.cycles()
        )

    def maslov_as_periodic(self, coeffs, g):
        """Index of a periodic chain read with g as both endpoints."""
        gg = self._gen(g)
        tot = 2 * self._pm4_sum(coeffs, gg.points) + 2 * self._em2_total(coeffs)
        if tot % 4:
            raise DomainError("periodic index numerator %d not /4" % tot)
        return tot // 4

    # -- boundary curve shape (domain_type) ---------------------------------

    def _build_edges(self):
        """Pair up opposite arc-side occurrences into surface edges.

        Each undirected arc of the curve system shows up in exactly two
        region circuits, once per direction. With parallel arcs (same
        endpoints, several copies) the encoding does not say which side
        glues to which; we pair them in listing order and flag the groups
        so domain_type can refuse genuinely ambiguous chains.
        """
        occs = []
        for r, reg in enumerate(self.dg.regions):
            for ci, cir in enumerate(reg):
                m = len(cir)
                for j in range(0, m, 2):
                    occs.append(
                        _ArcOcc(
                            "a", cir[j], cir[(j + 1) % m], r,
                            (r, ci, j), (r, ci, (j + 1) % m),
                        )
                    )
                    occs.append(
                        _ArcOcc(
                            "b", cir[(j + 1) % m], cir[(j + 2) % m], r,
                            (r, ci, (j + 1) % m), (r, ci, (j + 2) % m),
                        )
                    )
        groups = {}
        for o in occs:
            lo, hi = min(o.tail, o.head), max(o.tail, o.head)
            groups.setdefault((o.kind, lo, hi), []).append(o)
        edges = []  # (side0, side1) occurrence pairs; side1 reverses side0
        parallel = []  # per edge: True when its group had a pairing choice
        for key, grp in sorted(groups.items()):
            kind, lo, hi = key
            if lo == hi:
                assert len(grp) % 2 == 0
                for i in range(0, len(grp), 2):
                    edges.append((grp[i], grp[i + 1]))
                    parallel.append(len(grp) > 2)
            else:
                fwd = [o for o in grp if o.tail == lo]
                bwd = [o for o in grp if o.tail == hi]
                assert len(fwd) == len(bwd)
                for f, b in zip(fwd, bwd):
                    edges.append((f, b))
                    parallel.append(len(fwd) > 1)
        self._edges = edges
        self._parallel = parallel

        # corner -> (edge, end) rays; end 0 is where side0 starts
        ray_of_prev = {}  # corner key -> ray for the arc arriving there
        ray_of_next = {}
        for ei, (s0, s1) in enumerate(edges):
            ray_of_next[s0.start_corner] = (ei, 0)
            ray_of_prev[s0.end_corner] = (ei, 1)
            ray_of_next[s1.start_corner] = (ei, 1)
            ray_of_prev[s1.end_corner] = (ei, 0)

        # cyclic fan of the four corner occurrences around each point
        fans = []
        for p in range(self.dg.num_points):
            corners = self.dg.corner_occurrences(p)
            assert len(corners) == 4
            by_ray = {}
            for c in corners:
                for ray in (ray_of_prev[c], ray_of_next[c]):
                    by_ray.setdefault(ray, []).append(c)
            assert all(len(v) == 2 for v in by_ray.values())
            # walk the 4-cycle corner - ray - corner - ...
            start = corners[0]
            fan, rays = [start], []
            ray = ray_of_next[start]
            while True:
                a, b = by_ray[ray]
                nxt = b if a == fan[-1] else a
                rays.append(ray)
                if nxt == start:
                    break
                fan.append(nxt)
                other = ray_of_prev[nxt], ray_of_next[nxt]
                ray = other[0] if other[1] == ray else other[1]
            assert len(fan) == 4 and len(rays) == 4
            fans.append((fan, rays))
        self._point_fans = fans

    def domain_type(self, dom):
        """(J+, chi, b, g) of the curve a nonnegative domain supports.

        chi drops the untouched stationary sheets, b counts boundary
        circles by resolving every corner the embedded way, and g reads
        the closed-up genus (2 - chi - b)/2 of a connected curve.
        """
        c = self._full_coeffs(dom)
        if any(v < 0 for v in c):
            raise DomainError("domain_type needs a nonnegative domain")
        xg, yg = self._gen(dom.src), self._gen(dom.dst)
        jp = self.j_plus(dom)
        if not any(c):
            return (jp, 0, 0, 0)
        if self._edges is None:
            self._build_edges()

        stationary = set(xg.points) & set(yg.points)
        s = sum(
            1
            for p in stationary
            if all(self._pm4[r][p] == 0 for r in range(self.num_regions) if c[r])
        )
        num = (
            4 * (self.dg.num_curves - s)
            + 2 * self._em2_total(c)
            - self._pm4_sum(c, xg.points)
            - self._pm4_sum(c, yg.points)
        )
        if num % 4:
            raise DomainError("Euler characteristic %d/4 not integral" % num)
        chi = num // 4

        # refuse chains whose boundary depends on the unrecorded gluing
        # choice between parallel arcs
        for ei, (s0, s1) in enumerate(self._edges):
            if not self._parallel[ei]:
                continue
            kind = s0.kind
            lo, hi = min(s0.tail, s0.head), max(s0.tail, s0.head)
            sides0 = set()
            sides1 = set()
            for fj, (t0, t1) in enumerate(self._edges):
                if (t0.kind, min(t0.tail, t0.head), max(t0.tail, t0.head)) == (
                    kind, lo, hi,
                ):
                    sides0.add(c[t0.region])
                    sides1.add(c[t1.region])
            if len(sides0) > 1 and len(sides1) > 1:
                raise DomainError(
                    "parallel %s-arcs between points %d and %d make the "
                    "boundary of this chain ambiguous" % (kind, lo, hi)
                )

        # strand slots (edge, end, level) glued at points level by level
        parent = {}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            parent.setdefault(a, a)
            parent.setdefault(b, b)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for ei, (s0, s1) in enumerate(self._edges):
            lo, hi = sorted((c[s0.region], c[s1.region]))
            for d in range(lo + 1, hi + 1):
                union((ei, 0, d), (ei, 1, d))

        hooked = {}
        for fan, rays in self._point_fans:
            mult = [c[corner[0]] for corner in fan]
            top = max(mult)
            if top == 0:
                continue
            for d in range(1, top + 1):
                live = [i for i in range(4) if mult[i] >= d]
                if len(live) == 4:
                    continue
                # maximal cyclic runs of live quadrants
                runs = []
                liveset = set(live)
                for i in live:
                    if (i - 1) % 4 not in liveset:
                        j = i
                        while (j + 1) % 4 in liveset:
                            j = (j + 1) % 4
                        runs.append((i, j))
                for i, j in runs:
                    e1, k1 = rays[(i - 1) % 4]
                    e2, k2 = rays[j]
                    union((e1, k1, d), (e2, k2, d))
                    for slot in ((e1, k1, d), (e2, k2, d)):
                        hooked[slot] = hooked.get(slot, 0) + 1
        assert all(v == 1 for v in hooked.values()), "slot hooked twice"

        b = len({find(a) for a in parent})
        if (2 - chi - b) % 2:
            raise DomainError("chi %d and %d circles disagree in parity" % (chi, b))
        return (jp, chi, b, (2 - chi - b) // 2)

    # -- SpinC classes, gradings, candidate differentials --------------------

    def spinc_partition(self):
        """Partition generators by full-chain connectivity; grade each class."""
        if self._spinc is not None:
            return self._spinc
        gens = self._gens
        class_members = []
        anchors = []
        class_of = [None] * len(gens)
        conn = {}  # generator index -> FullDomain from its class anchor
        for g in gens:
            for ci, a in enumerate(anchors):
                dom = self.full_connecting_domain(a, g)
                if dom is not None:
                    class_members[ci].append(g.index)
                    class_of[g.index] = ci
                    conn[g.index] = dom
                    break
            else:
                anchors.append(g)
                class_members.append([g.index])
                class_of[g.index] = len(anchors) - 1
                conn[g.index] = FullDomain(
                    (0,) * self.num_regions, g.index, g.index
                )

        basis = [d.coeffs for d in self._periodic.basis]
        chern = tuple(
            tuple(self.maslov_as_periodic(bc, g) for bc in basis) for g in gens
        )
        for members in class_members:
            first = chern[members[0]]
            assert all(chern[i] == first for i in members), "Chern split a class"

        npt = self.dg.num_pointed
        divs = []
        gradings = []
        for ci, members in enumerate(class_members):
            anchor = anchors[ci]
            d = 0
            for q in self._full_kernel:
                quantity = self.maslov_as_periodic(q, anchor) - 2 * sum(
                    q[-npt:]
                )
                d = gcd(d, quantity)
            divs.append(d)
            gr = {}
            for i in members:
                dom = conn[i]
                mu = self.maslov_index(dom)
                nz = sum(dom.coeffs[-npt:])
                val = -(mu - 2 * nz)  # gr(anchor) - gr(i) = mu - 2 nz
                gr[i] = val % d if d else val
            gradings.append(gr)

        self._spinc = SpinCTable(
            classes=tuple(tuple(m) for m in class_members),
            class_of=tuple(class_of),
            chern=chern,
            div=tuple(divs),
            gradings=tuple(gradings),
        )
        return self._spinc

    def index1_differentials(self):
        """(src, dst) -> positive index-1 domains, for grading-adjacent pairs."""
        if self._index1 is not None:
            return self._index1
        table = self.spinc_partition()
        out = {}
        for ci, members in enumerate(table.classes):
            d = table.div[ci]
            gr = table.gradings[ci]
            for i in members:
                for j in members:
                    if i == j:
                        continue
                    drop = gr[i] - gr[j] - 1
                    if (drop % d if d else drop) != 0:
                        continue
                    doms = [
                        dom
                        for dom in self.find_pos_domains(i, j)
                        if self.maslov_index(dom) == 1
                    ]
                    if doms:
                        out[(i, j)] = doms
        self._index1 = out
        return self._index1

    def find_pos_diffs_from(self, i):
        return {j: d for (a, j), d in self.index1_differentials().items() if a == i}

    def find_pos_diffs_to(self, j):
        return {a: d for (a, b), d in self.index1_differentials().items() if b == j}
