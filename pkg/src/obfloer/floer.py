"""Hat differential, homology, contact class, and spectral order.

Everything here runs on a nice diagram: each positive index-1 domain is
then an empty embedded bigon or rectangle carrying exactly one curve, so
the GF(2) differential is a finite count.  The count splits by J+ into
d0 (J+ = 0) and d1 (J+ = 2); both are differentials and they commute.
The contact class lives in the distinguished generator's class, and its
spectral order is computed from the two-level piece C1 -> C0 anchored
there: reduce by the minimal subspace K, run the delta = d0 d1^{-1}
iteration, and certify any finite answer with explicit zigzag chains.

Vectors over GF(2) are bit-packed ints throughout (see linalg).
"""

from dataclasses import dataclass

from .domains import DomainCalculator
from .linalg import F2Map, F2Quotient, F2Subspace, affine_meets_subspace
from .nicefy import is_nice


class FloerError(Exception):
    pass


class NotNiceError(FloerError):
    """The diagram has an unpointed region that is not a bigon or square."""


# ---------------------------------------------------------------------------
# result containers


@dataclass(frozen=True)
class DiffEntry:
    """All index-1 positive domains from generator src to dst.

    count is the raw number of domains; j0/j2 split it by J+ value.  The
    differential coefficient is count mod 2.
    """

    src: int
    dst: int
    domains: tuple
    count: int
    j0: int
    j2: int

    @property
    def parity(self):
        return self.count % 2


@dataclass
class SplitDifferential:
    """Level-to-level boundary maps of one class, split by J+.

    Maps are keyed by source level and go one level down (cyclically when
    div > 0).  basis[g] lists the generator indices at level g; columns of
    the maps follow that order on both sides.
    """

    class_index: int
    div: int
    levels: tuple
    basis: dict
    d_hat: dict
    d0: dict
    d1: dict
    entries: dict


@dataclass(frozen=True)
class HomologyResult:
    class_index: int
    div: int
    ranks: tuple  # (level, rank) pairs
    total: int


@dataclass(frozen=True)
class ReducedPair:
    """C1/K -> C0/d0(K) data from the minimal-subspace reduction."""

    K: F2Subspace
    d0bar: F2Map
    d1bar: F2Map
    dom: F2Quotient
    cod: F2Quotient


@dataclass(frozen=True)
class OrderResult:
    """Spectral order: value None means infinity, with a reason and the
    stabilization index m when the delta iteration ran.  Finite values
    carry certificate chains (tuples of C1 generator indices at the
    diagram level, bit masks at the core level) that re-verify."""

    value: object
    certificate: tuple
    reason: object
    m: object
    graded_mod: int = 0

    def as_jsonable(self):
        out = {"order": self.value if self.value is not None else "infinity"}
        if self.value is not None:
            out["certificate"] = [sorted(c) if isinstance(c, tuple) else c
                                  for c in self.certificate]
        else:
            out["certificate"] = self.reason
        if self.graded_mod:
            out["graded_mod"] = self.graded_mod
        return out


# ---------------------------------------------------------------------------
# GF(2) helpers


def _compose(a, b):
    """a after b."""
    return F2Map([a.apply(c) for c in b.cols], a.nrows)


def _is_zero(m):
    return all(c == 0 for c in m.cols)


def _same(a, b):
    return a.nrows == b.nrows and a.cols == b.cols


def _bits(v):
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


# ---------------------------------------------------------------------------
# zigzag certificates


def check_zigzag(d0, d1, x, chains):
    """Do chains b_0..b_k satisfy the defining zigzag equations for x?

    k = 0 asks d0 b_0 = x; otherwise d0 b_0 + d1 b_1 = x, consecutive
    d0 b_i = d1 b_{i+1}, and d0 b_k = 0.
    """
    k = len(chains) - 1
    if k < 0:
        return False
    top = d0.apply(chains[0])
    if k >= 1:
        top ^= d1.apply(chains[1])
    if top != x:
        return False
    for i in range(1, k):
        if d0.apply(chains[i]) != d1.apply(chains[i + 1]):
            return False
    return k == 0 or d0.apply(chains[k]) == 0


def _lift_zigzag(d0, d1, x, k):
    """Chains for a known-finite order k by one stacked GF(2) solve.

    Unknowns are b_0..b_k stacked over C1; block i of the codomain holds
    d0 b_i + d1 b_{i+1} (= x for i = 0, 0 otherwise).
    """
    n1, n0 = d0.ncols, d0.nrows
    cols = []
    for i in range(k + 1):
        for t in range(n1):
            col = d0.cols[t] << (i * n0)
            if i >= 1:
                col ^= d1.cols[t] << ((i - 1) * n0)
            cols.append(col)
    sol = F2Map(cols, (k + 1) * n0).solve(x)
    if sol is None:
        raise FloerError("zigzag lift failed for order %d" % k)
    mask = (1 << n1) - 1
    return tuple((sol >> (i * n1)) & mask for i in range(k + 1))


# ---------------------------------------------------------------------------
# the K reduction and the order computation (pure linear algebra)


def reduce_by_K(d0, d1):
    """Minimal K with d1 : C1/K -> C0/d0(K) injective, plus the induced maps.

    Iterates K_0 = ker d1, K_{i+1} = ker(C1 -> C0/d0(K_i)) until stable;
    the chain is increasing so this terminates, and at the fixed point
    d1(K) lies in d0(K), making both induced maps well defined.
    """
    n1, n0 = d0.ncols, d0.nrows
    if d1.ncols != n1 or d1.nrows != n0:
        raise FloerError("d0 and d1 must share domain and codomain")
    K = F2Subspace(d1.kernel_basis())
    while True:
        d0K = F2Subspace(d0.apply(v) for v in K.vectors())
        q = F2Quotient(n0, d0K)
        nxt = F2Subspace(F2Map([q.project(c) for c in d1.cols],
                               q.dim()).kernel_basis())
        for v in K.vectors():
            assert nxt.contains(v)
        if nxt == K:
            break
        K = nxt
    dom = F2Quotient(n1, K)
    cod = F2Quotient(n0, d0K)
    lifts = [dom.lift(1 << t) for t in range(dom.dim())]
    d0bar = F2Map([cod.project(d0.apply(w)) for w in lifts], cod.dim())
    d1bar = F2Map([cod.project(d1.apply(w)) for w in lifts], cod.dim())
    assert d1bar.rank() == dom.dim(), "reduced d1 must be injective"
    return ReducedPair(K, d0bar, d1bar, dom, cod)


def order_from_split(d0, d1, x):
    """Spectral order of the cycle x for a two-level piece (d0, d1).

    Returns an OrderResult with bit-mask certificate chains.  The finite
    case is decided by the delta = d0 d1^{-1} iteration on the image of
    the reduced d1 and certified by an explicit zigzag lift.
    """
    if d0.solve(x) is not None:
        chains = (d0.solve(x),)
        assert check_zigzag(d0, d1, x, chains)
        return OrderResult(0, chains, None, None)

    red = reduce_by_K(d0, d1)
    if red.K.dim() == d0.ncols:
        # x survives in C0/d0(C1), so nothing can ever hit it
        assert red.cod.project(x) != 0
        return OrderResult(None, (), "K = C1", None)
    if red.d0bar.rank() == red.dom.dim():
        return OrderResult(None, (), "reduced d0 injective", None)

    xbar = red.cod.project(x)
    assert xbar != 0
    u0 = red.d1bar.image_basis()
    t_map = F2Map(list(u0), red.cod.dim())
    delta_cols = []
    for u in u0:
        v = red.d1bar.solve(u)
        assert v is not None
        delta_cols.append(red.d0bar.apply(v))
    delta = F2Map(delta_cols, red.cod.dim())

    def preimage(sub):
        # delta^{-1}(sub), with sub given in U0 coordinates
        img = F2Subspace(t_map.apply(w) for w in sub.vectors())
        q = F2Quotient(red.cod.dim(), img)
        return F2Subspace(F2Map([q.project(c) for c in delta.cols],
                                q.dim()).kernel_basis())

    kers = [preimage(F2Subspace())]
    us = [F2Subspace(1 << t for t in range(len(u0)))]
    while True:
        kn, un = preimage(kers[-1]), preimage(us[-1])
        for w in kers[-1].vectors():
            assert kn.contains(w)  # ker delta^i only ever grows
        for w in un.vectors():
            assert us[-1].contains(w)
        if kn == kers[-1] and un == us[-1]:
            m = len(kers)
            break
        kers.append(kn)
        us.append(un)
        assert len(kers) <= len(u0) + 2

    for k, ker_k in enumerate(kers, start=1):
        hit_space = F2Subspace(t_map.apply(w) for w in ker_k.vectors())
        if affine_meets_subspace(xbar, list(red.d0bar.cols),
                                 hit_space) is not None:
            chains = _lift_zigzag(d0, d1, x, k)
            assert check_zigzag(d0, d1, x, chains)
            return OrderResult(k, chains, None, m)
    return OrderResult(None, (), "ker delta^%d misses x + im d0" % m, m)


# ---------------------------------------------------------------------------
# the nice-diagram engine


class NiceComplex:
    """Chain-level engine for one nice diagram.

    Construction refuses non-nice diagrams outright; everything else is
    computed lazily and cached per class.
    """

    def __init__(self, diagram):
        if not is_nice(diagram):
            raise NotNiceError(
                "diagram %r is not nice; run make_nice first" % diagram.name)
        self.diagram = diagram
        self.calc = DomainCalculator(diagram)
        self.table = self.calc.spinc_partition()
        self.generators = diagram.generators()
        self._diffs = {}
        self._split = {}
        self._canonical = None

    # -- differentials ------------------------------------------------------

    def find_diffs(self, i, j):
        """DiffEntry for the pair (i, j), one grading step apart."""
        key = (i, j)
        if key in self._diffs:
            return self._diffs[key]
        ci = self.table.class_of[i]
        if ci != self.table.class_of[j]:
            raise FloerError(
                "generators %d and %d lie in different classes" % (i, j))
        gr, dv = self.table.gradings[ci], self.table.div[ci]
        drop = gr[i] - gr[j] - 1
        if (drop % dv if dv else drop) != 0:
            raise FloerError(
                "generators %d -> %d are not one grading apart" % (i, j))
        doms, j0, j2 = [], 0, 0
        for dom in self.calc.find_pos_domains(i, j):
            if self.calc.maslov_index(dom) != 1:
                continue
            em2 = self.calc._em2_total(self.calc._full_coeffs(dom))
            assert em2 in (0, 1), "index-1 domain on a nice diagram must " \
                "be a bigon or a rectangle"
            jp = self.calc.j_plus(dom)
            assert jp in (0, 2)
            assert em2 == 0 or jp == 0  # bigons always have J+ = 0
            if jp == 0:
                j0 += 1
            else:
                j2 += 1
            doms.append(dom)
        entry = DiffEntry(i, j, tuple(doms), len(doms), j0, j2)
        self._diffs[key] = entry
        return entry

    # -- boundary maps ------------------------------------------------------

    def build_boundary(self, class_index):
        if class_index in self._split:
            return self._split[class_index]
        members = self.table.classes[class_index]
        gr = self.table.gradings[class_index]
        dv = self.table.div[class_index]
        if dv:
            levels = tuple(range(dv - 1, -1, -1))
        else:
            top, bot = max(gr.values()), min(gr.values())
            levels = tuple(range(top, bot - 1, -1))
        basis = {g: tuple(i for i in members if gr[i] == g) for g in levels}

        entries = {}
        d_hat, d0, d1 = {}, {}, {}
        for s in levels:
            t = (s - 1) % dv if dv else s - 1
            if t not in basis:
                continue
            c_hat, c0, c1 = [], [], []
            for i in basis[s]:
                b_hat = b0 = b1 = 0
                for pos, j in enumerate(basis[t]):
                    if dv and i == j:
                        continue
                    e = self.find_diffs(i, j)
                    if e.count:
                        entries[(i, j)] = e
                    if e.j0 % 2:
                        b0 |= 1 << pos
                    if e.j2 % 2:
                        b1 |= 1 << pos
                c_hat.append(b0 ^ b1)
                c0.append(b0)
                c1.append(b1)
            n = len(basis[t])
            d_hat[s], d0[s], d1[s] = (F2Map(c_hat, n), F2Map(c0, n),
                                      F2Map(c1, n))

        sd = SplitDifferential(class_index, dv, levels, basis, d_hat, d0, d1,
                               entries)
        self._assert_identities(sd)
        self._split[class_index] = sd
        return sd

    def _assert_identities(self, sd):
        # composites across consecutive levels vanish flavor by flavor,
        # and the two flavors commute
        for s in sd.levels:
            t = (s - 1) % sd.div if sd.div else s - 1
            if s not in sd.d_hat or t not in sd.d_hat:
                continue
            for maps in (sd.d_hat, sd.d0, sd.d1):
                if not _is_zero(_compose(maps[t], maps[s])):
                    raise FloerError(
                        "boundary squared is nonzero in class %d between "
                        "levels %s and %s" % (sd.class_index, s, t))
            if not _same(_compose(sd.d0[t], sd.d1[s]),
                         _compose(sd.d1[t], sd.d0[s])):
                raise FloerError(
                    "J+ flavors fail to commute in class %d at level %s"
                    % (sd.class_index, s))

    # -- homology -----------------------------------------------------------

    def compute_homology(self, class_index):
        sd = self.build_boundary(class_index)
        ranks = []
        total = 0
        for g in sd.levels:
            src = (g + 1) % sd.div if sd.div else g + 1
            out_rank = sd.d_hat[g].rank() if g in sd.d_hat else 0
            in_rank = sd.d_hat[src].rank() if src in sd.d_hat else 0
            r = len(sd.basis[g]) - out_rank - in_rank
            assert r >= 0
            ranks.append((g, r))
            total += r
        return HomologyResult(class_index, sd.div, tuple(ranks), total)

    # -- the distinguished class --------------------------------------------

    def sort_canonical_spinc(self):
        """(C0, C1): the distinguished generator's level and the one above."""
        if self._canonical is not None:
            return self._canonical[:2]
        xc = self.diagram.contact_generator()
        xi = xc.index
        ci = self.table.class_of[xi]
        gr, dv = self.table.gradings[ci], self.table.div[ci]
        g0 = gr[xi]
        sd = self.build_boundary(ci)
        lv0 = g0 % dv if dv else g0
        lv1 = (g0 + 1) % dv if dv else g0 + 1
        c0 = sd.basis[lv0]
        c1 = sd.basis.get(lv1, ())
        self._canonical = (c0, c1, xi, ci, lv0, lv1)
        return c0, c1

    def _canonical_maps(self):
        c0, c1 = self.sort_canonical_spinc()
        _, _, xi, ci, lv0, lv1 = self._canonical
        sd = self.build_boundary(ci)
        x = 1 << c0.index(xi)
        if lv1 in sd.d_hat:
            maps = (sd.d_hat[lv1], sd.d0[lv1], sd.d1[lv1])
        else:
            maps = tuple(F2Map([], len(c0)) for _ in range(3))
        # the distinguished generator must be a cycle
        if lv0 in sd.d_hat:
            if sd.d_hat[lv0].cols[c0.index(xi)] != 0:
                raise FloerError(
                    "distinguished generator has nonzero boundary; the "
                    "diagram does not come from an open book")
        return x, maps, sd

    def check_contact_class(self):
        x, (m_hat, _, _), _ = self._canonical_maps()
        return "zero" if m_hat.solve(x) is not None else "nonzero"

    def compute_order(self):
        contact = self.check_contact_class()
        x, (_, m0, m1), sd = self._canonical_maps()
        c0, c1 = self.sort_canonical_spinc()
        xi = self._canonical[2]
        core = order_from_split(m0, m1, x)
        if core.value is not None:
            cert = tuple(tuple(c1[t] for t in _bits(b))
                         for b in core.certificate)
        else:
            cert = ()
        res = OrderResult(core.value, cert, core.reason, core.m,
                          graded_mod=sd.div)
        # a vanishing contact class in the torsion setting must have
        # finite order
        if (contact == "zero" and sd.div == 0
                and not any(self.table.chern[xi])):
            assert res.value is not None, \
                "zero contact class with finite-order obstruction missing"
        return res


# ---------------------------------------------------------------------------
# DOT output


def _dot_header(name):
    return ['digraph "%s" {' % name,
            '  rankdir=TB;',
            '  node [shape=box, fontsize=10];']


def plot_complex(source, class_index, name=None):
    """DOT text for one class.

    Pass a NiceComplex for true differentials (edge per mod-2-nonzero
    count, solid J+ = 0, dashed J+ = 2) or a DomainCalculator for the
    general engine (edge per index-1 positive domain, blue when the
    domain is disk-shaped and so counts exactly once).
    """
    nice = isinstance(source, NiceComplex)
    calc = source.calc if nice else source
    table = source.table if nice else calc.spinc_partition()
    if name is None:
        name = "%s_spinc_%d" % (calc.dg.name, class_index)
    lines = _dot_header(name)
    if class_index >= len(table.classes):
        lines.append("}")
        return "\n".join(lines) + "\n"
    members = table.classes[class_index]
    gr = table.gradings[class_index]
    dv = table.div[class_index]
    for i in members:
        tag = " mod %d" % dv if dv else ""
        lines.append('  x%d [label="x%d gr=%d%s"];' % (i, i, gr[i], tag))
    if nice:
        sd = source.build_boundary(class_index)
        for (i, j), e in sorted(sd.entries.items()):
            if e.parity == 0:
                continue
            if e.j0 % 2:
                lines.append('  x%d -> x%d [label="J+=0"];' % (i, j))
            else:
                lines.append('  x%d -> x%d [style=dashed, label="J+=2"];'
                             % (i, j))
    else:
        for i in members:
            for j in members:
                if i == j and not dv:
                    continue
                drop = gr[i] - gr[j] - 1
                if (drop % dv if dv else drop) != 0:
                    continue
                doms = [d for d in calc.find_pos_domains(i, j)
                        if calc.maslov_index(d) == 1]
                for dom in doms:
                    _, chi, b, g = calc.domain_type(dom)
                    if (chi, b, g) == (1, 1, 0):
                        lines.append('  x%d -> x%d [color=blue];' % (i, j))
                    else:
                        lines.append('  x%d -> x%d;' % (i, j))
    lines.append("}")
    return "\n".join(lines) + "\n"
