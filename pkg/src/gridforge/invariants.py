"""From a grid diagram to G_0(K) and the invariants it determines.

The pipeline keeps one :class:`Side` for K and one for its mirror.  Each
side owns a state table, a homological generator and a verdict cache.
tau is found first; when it is negative the two sides swap roles, so the
region search always runs on the side with tau >= 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .griddata import GridDiagram, GridError, InternalError
from .gridcomplex import DEFAULT_MAX_STATES, StateTable, enumerate_states, genus_from_hfk, hfk_hat, mirror_hfk, s_hat_sets
from .homgen import homological_generator
from .realize import Verdict, is_realizable, system_cost, z_on_table
from .regions import Candidates, Region, candidate_regions, dual_min, minimize

log = logging.getLogger(__name__)

R00 = Region.simple(0, 0)


@dataclass
class KnotHints:
    g3: Optional[int] = None
    g4: Optional[int] = None
    tau: Optional[int] = None
    hfk: Optional[Dict[Tuple[int, int], int]] = None

    def check(self) -> None:
        if self.g3 is not None and self.g4 is not None and self.g4 > self.g3:
            raise GridError("hint g4 exceeds g3")
        if self.g4 is not None and self.tau is not None and abs(self.tau) > self.g4:
            raise GridError("hint |tau| exceeds g4")
        if self.g3 is not None and self.tau is not None and abs(self.tau) > self.g3:
            raise GridError("hint |tau| exceeds g3")


# -- one side of the computation ----------------------------------------------

class Side:
    """A diagram together with lazily built complex data and verdicts."""

    def __init__(self, grid: GridDiagram, name: str, max_states: int = DEFAULT_MAX_STATES,
                 use_pi: Optional[bool] = None, chunk: int = 2048):
        self.grid = grid
        self.name = name
        self.max_states = max_states
        self.use_pi = use_pi
        self.chunk = chunk
        self._table: Optional[StateTable] = None
        self._z = None
        self.verdicts: Dict[Region, Verdict] = {}
        self.audit: List[dict] = []

    @property
    def table(self) -> StateTable:
        if self._table is None:
            self._table = enumerate_states(self.grid, self.max_states)
        return self._table

    @property
    def z(self):
        if self._z is None:
            self._z = z_on_table(self.table, homological_generator(self.grid))
        return self._z

    @staticmethod
    def representative(region: Region) -> Region:
        """Realizability is symmetric under reflection; test the member
        of the pair with the smaller shift number."""
        if not region.is_semisimple:
            return region
        other = region.reflect()
        return min((region, other), key=lambda r: (r.shift_number, r))

    def cost(self, region: Region) -> int:
        return system_cost(self.table, self.representative(region))

    def realizable(self, region: Region, reason: str = "") -> bool:
        rep = self.representative(region)
        v = self.verdicts.get(rep)
        if v is None:
            v = is_realizable(self.table, self.z, rep, self.use_pi, self.chunk)
            self.verdicts[rep] = v
            entry = {"side": self.name, "reason": reason, **v.to_dict()}
            if rep != region:
                entry["asked"] = region.to_list()
            self.audit.append(entry)
            log.info("%s %s: %s via %s (%dx%d)", self.name, rep, v.realizable, v.via, v.rows, v.cols)
        return v.realizable


# -- tau -------------------------------------------------------------------------

def compute_tau(side: Side, g3: int, hint: Optional[int] = None) -> int:
    """Smallest m with {i <= -1} u R_(0, m) realizable."""
    def ok(m: int) -> bool:
        return side.realizable(Region.tau_region(m), f"tau test m={m}")

    if hint is not None and -g3 <= hint <= g3:
        if ok(hint) and (hint == -g3 or not ok(hint - 1)):
            return hint
        log.warning("tau hint %d does not match; searching", hint)
    lo, hi = -g3, g3
    if not ok(hi):
        raise InternalError(f"tau search exhausted: m={hi} is not realizable")
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


# -- candidate bookkeeping -------------------------------------------------------

class Ledger:
    """Realizability marks on one side's candidates, with the inclusion
    rules applied on every update."""

    def __init__(self, side: Side, cands: Candidates):
        self.side = side
        self.cands = list(cands.regions)
        self.status: Dict[Region, Optional[bool]] = {r: None for r in self.cands}
        self.known_true: List[Region] = []
        self.known_false: List[Region] = []

    def undetermined(self) -> List[Region]:
        return [r for r in self.cands if self.status[r] is None]

    def mark(self, region: Region, value: bool, why: str) -> None:
        regs = [region] if not region.is_semisimple else [region, region.reflect()]
        for reg in regs:
            (self.known_true if value else self.known_false).append(reg)
            for r in self.cands:
                hit = reg.subset(r) if value else r.subset(reg)
                if not hit:
                    continue
                old = self.status[r]
                if old is not None and old != value:
                    raise InternalError(f"contradicting marks for {r} on {self.side.name} ({why})")
                self.status[r] = value

    def test(self, region: Region, why: str) -> bool:
        v = self.side.realizable(region, why)
        self.mark(region, v, why)
        return v

    def superset_of_g0(self) -> List[Region]:
        return [r for r in self.cands if self.status[r] is not False]

    def minimal_realizable(self) -> List[Region]:
        return minimize(r for r in self.cands if self.status[r])


def mirror_interplay_prune(a: Ledger, b: Ledger) -> bool:
    """Apply the two mirror lemmas in both directions.  Returns whether
    anything changed.

    A realizable region of one side meets -R' for every realizable R' of
    the other; and a region meeting -R for all R in a superset of G_0 of
    the other side is realizable."""
    changed = False
    for mine, other in ((a, b), (b, a)):
        for r in mine.undetermined():
            if any(not r.meets_negative(t) for t in other.known_true):
                mine.mark(r, False, "mirror lemma: misses a realizable region of the mirror")
                changed = True
        sup = other.superset_of_g0()
        if sup:
            for r in mine.undetermined():
                if all(r.meets_negative(t) for t in sup):
                    mine.mark(r, True, "mirror lemma: meets every possible region of the mirror")
                    changed = True
    return changed


def simple_region_scan(led: Ledger) -> List[Region]:
    """Test simple candidates; R_(i,j) is in G_0 iff it is realizable and
    cl{(i-1,j),(i,j-1)} is not."""
    confirmed = []
    simple = sorted((r for r in led.cands if r.is_simple),
                    key=lambda r: (Side.representative(r).shift_number, -r.corners[0][1], r))
    for r in simple:
        if led.status[r] is False:
            continue
        if led.status[r] is None and not led.test(r, "simple scan"):
            continue
        smaller = r.without_corner(r.corners[0])
        if not led.side.realizable(smaller, f"simple scan: {r} minus its corner"):
            led.mark(smaller, False, "simple scan")
            confirmed.append(r)
        else:
            led.mark(smaller, True, "simple scan")
    return confirmed


@dataclass
class G0Result:
    g0: List[Region]            # on the side with tau >= 0
    side: str                   # "K" or "mirror"
    tau: int                    # tau of the input knot
    g3: int
    audit: List[dict] = field(default_factory=list)

    @property
    def g0_knot(self) -> List[Region]:
        return self.g0 if self.side == "K" else dual_min(self.g0)

    @property
    def g0_mirror(self) -> List[Region]:
        return dual_min(self.g0) if self.side == "K" else self.g0


def _hfk_for(hints: KnotHints, side: Side):
    if hints.hfk is not None:
        return dict(hints.hfk)
    return hfk_hat(side.table)


def early_exit_trivial(pos: Side, neg: Side) -> Optional[List[Region]]:
    if pos.realizable(R00, "early exit") and neg.realizable(R00, "early exit"):
        return [R00]
    return None


def compute_g0(grid: GridDiagram, hints: Optional[KnotHints] = None, *, max_states: int = DEFAULT_MAX_STATES,
               use_pi: Optional[bool] = None, chunk: int = 2048) -> G0Result:
    hints = hints or KnotHints()
    hints.check()
    knot = Side(grid, "K", max_states, use_pi, chunk)
    mirror = Side(grid.mirror(), "mirror", max_states, use_pi, chunk)

    # 1. candidates need hat HFK and the genus bounds
    hfk = _hfk_for(hints, knot)
    g3 = genus_from_hfk(hfk)
    if hints.g3 is not None and hints.g3 != g3:
        raise GridError(f"hint g3={hints.g3} disagrees with hat HFK (genus {g3})")
    g4 = hints.g4 if hints.g4 is not None else g3

    # 2-4. tau, on whichever side gives the smaller first system
    if knot.cost(Region.tau_region(0)) <= mirror.cost(Region.tau_region(0)):
        tau = compute_tau(knot, g3, hints.tau)
    else:
        tau = -compute_tau(mirror, g3, None if hints.tau is None else -hints.tau)
    if tau >= 0:
        pos, neg, pos_hfk, name = knot, mirror, hfk, "K"
    else:
        pos, neg, pos_hfk, name = mirror, knot, mirror_hfk(hfk), "mirror"
    audit_sides = (knot, mirror)

    def done(g0: List[Region]) -> G0Result:
        audit = [e for s in audit_sides for e in s.audit]
        return G0Result(g0, name, tau, g3, audit)

    if tau == 0:
        g0 = early_exit_trivial(pos, neg)
        if g0 is not None:
            return done(g0)

    s0, s1 = s_hat_sets(pos_hfk)
    m0, m1 = s_hat_sets(mirror_hfk(pos_hfk))
    led = Ledger(pos, candidate_regions(s0, s1, g3, g4))
    mled = Ledger(neg, candidate_regions(m0, m1, g3, g4))
    if not led.cands:
        raise InternalError("no candidate regions")

    # 5. simple regions
    simple_region_scan(led)

    # 6. the rest: reject a maximal candidate of this side or confirm a
    # minimal one of the mirror, whichever system is smaller
    while True:
        while mirror_interplay_prune(led, mled):
            pass
        todo = led.undetermined()
        if not todo:
            break
        maximal = [r for r in todo if not any(o != r and r.subset(o) for o in todo)]
        pick = min(maximal, key=lambda r: (pos.cost(r), r))
        best = (pos.cost(pick), 0, pick)
        mtodo = mled.undetermined()
        if mtodo:
            minimal = [r for r in mtodo if not any(o != r and o.subset(r) for o in mtodo)]
            mpick = min(minimal, key=lambda r: (neg.cost(r), r))
            best = min(best, (neg.cost(mpick), 1, mpick))
        _, which, region = best
        (led if which == 0 else mled).test(region, "remaining candidates")

    g0 = led.minimal_realizable()
    if not g0:
        raise InternalError("G_0 came out empty")
    if sorted(g0) != sorted(r.reflect() for r in g0):
        raise InternalError("G_0 is not closed under reflection")
    dual = dual_min(g0)
    for r in mled.cands:
        st = mled.status[r]
        if st is not None and st != any(d.subset(r) for d in dual):
            raise InternalError(f"mirror verdict for {r} contradicts duality")
    return done(g0)


# -- invariants read off G_0 ----------------------------------------------------

def tau_from_g0(g0: Sequence[Region]) -> int:
    """min m such that some R lies in {i <= -1} u R_(0, m)."""
    best = None
    for r in g0:
        m = max([j for i, j in r.corners if i >= 0], default=-math.inf)
        if any(i > 0 for i, _ in r.corners):
            continue
        best = m if best is None else min(best, m)
    if best is None or not math.isfinite(best):
        raise ValueError("tau is not determined by these regions")
    return int(best)


def _vk(g0: Sequence[Region], k: int) -> int:
    return max(0, min(max(max(i for i, _ in r.corners), max(j for _, j in r.corners) - k) for r in g0))


def _vk_mirror(g0: Sequence[Region], k: int) -> int:
    return max(0, max(min(max(-i, -j - k) for i, j in r.corners) for r in g0))


def _until_zero(f, g0: Sequence[Region]) -> List[int]:
    # past this index every V_k is constant
    last = max(abs(c) for r in g0 for p in r.corners for c in p) * 2 + 1
    out = []
    for k in range(last + 1):
        v = f(k)
        out.append(v)
        if v == 0:
            return out
    raise ValueError("V_k does not vanish for these regions")


def vk_from_g0(g0: Sequence[Region]) -> List[int]:
    return _until_zero(lambda k: _vk(g0, k), g0)


def vk_mirror_from_g0(g0: Sequence[Region]) -> List[int]:
    return _until_zero(lambda k: _vk_mirror(g0, k), g0)


def nu_plus_trivial(g0: Sequence[Region]) -> bool:
    return list(g0) == [R00]


@dataclass(frozen=True)
class PLFunction:
    points: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        ts = [t for t, _ in self.points]
        if len(ts) < 2 or ts[0] != 0 or ts[-1] != 2 or any(a >= b for a, b in zip(ts, ts[1:])):
            raise ValueError("breakpoints must increase from t=0 to t=2")

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        for (t0, y0), (t1, y1) in zip(self.points, self.points[1:]):
            if t0 <= t <= t1:
                return y0 + (y1 - y0) * (t - t0) / (t1 - t0)
        raise ValueError("t outside [0, 2]")

    def to_list(self) -> list:
        return [[_frac_str(t), _frac_str(y)] for t, y in self.points]

    @classmethod
    def from_list(cls, data) -> "PLFunction":
        return cls(tuple((Fraction(t), Fraction(y)) for t, y in data))

    def __str__(self) -> str:
        return "PL[" + ", ".join(f"({_frac_str(t)}, {_frac_str(y)})" for t, y in self.points) + "]"


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _drop_collinear(points: List[Tuple[Fraction, Fraction]]) -> List[Tuple[Fraction, Fraction]]:
    out = [points[0]]
    for k in range(1, len(points) - 1):
        (t0, y0), (t1, y1), (t2, y2) = out[-1], points[k], points[k + 1]
        if (y1 - y0) * (t2 - t1) != (y2 - y1) * (t1 - t0):
            out.append(points[k])
    out.append(points[-1])
    return out


def upsilon_from_g0(g0: Sequence[Region]) -> PLFunction:
    """Upsilon(t) = -2 min_R max_{(i,j) corner} ((1 - t/2) i + (t/2) j).

    Each corner gives a line in t; the function is evaluated exactly at
    every pairwise crossing inside [0, 2], which contains all breakpoints."""
    if not g0:
        raise ValueError("empty region family")
    lines = sorted({(Fraction(i), Fraction(j - i, 2)) for r in g0 for i, j in r.corners})
    ts = {Fraction(0), Fraction(2)}
    for a, (c1, m1) in enumerate(lines):
        for c2, m2 in lines[a + 1:]:
            if m1 != m2:
                t = (c2 - c1) / (m1 - m2)
                if 0 < t < 2:
                    ts.add(t)

    def value(t: Fraction) -> Fraction:
        return -2 * min(max(Fraction(i) + t * Fraction(j - i, 2) for i, j in r.corners) for r in g0)

    pts = [(t, value(t)) for t in sorted(ts)]
    return PLFunction(tuple(_drop_collinear(pts)))


# -- surgery -------------------------------------------------------------------

def d_lens(p: int, q: int, i: int) -> Fraction:
    """Correction term of the lens space given by p/q surgery on the
    unknot, Spin^c structure i."""
    if p <= 0 or q <= 0 or math.gcd(p, q) != 1:
        raise ValueError(f"need coprime positive p, q (got {p}, {q})")
    if not 0 <= i < p:
        raise ValueError(f"Spin^c index {i} out of range for p={p}")
    return _d_rec(p, q, i)


def _d_rec(p: int, q: int, i: int) -> Fraction:
    if p == 1:
        return Fraction(0)
    head = Fraction((2 * i + 1 - p - q) ** 2 - p * q, 4 * p * q)
    return head - _d_rec(q, p % q, i % q)


def parse_slope(text: str) -> Tuple[int, int]:
    num, _, den = text.partition("/")
    try:
        p, q = int(num), int(den or "1")
    except ValueError:
        raise GridError(f"bad slope {text!r}") from None
    if q < 0:
        p, q = -p, -q
    if p == 0:
        raise GridError("0-surgery is not supported")
    if q == 0 or math.gcd(abs(p), q) != 1:
        raise GridError(f"bad slope {text!r}")
    return p, q


def _v_at(vk: Sequence[int], k: int) -> int:
    return vk[k] if k < len(vk) else 0


def d_surgery(vk: Sequence[int], vk_mirror: Sequence[int], p: int, q: int) -> List[Fraction]:
    """d(S^3_{p/q}(K), i) for i = 0 .. |p|-1.

    Negative slopes use S^3_{-p/q}(K) = -S^3_{p/q}(K*), keeping the index."""
    if p == 0:
        raise GridError("0-surgery is not supported")
    if q <= 0 or math.gcd(abs(p), q) != 1:
        raise GridError(f"bad slope {p}/{q}")
    sign, seq = (1, vk) if p > 0 else (-1, vk_mirror)
    p = abs(p)
    out = []
    for i in range(p):
        v = max(_v_at(seq, i // q), _v_at(seq, (p + q - 1 - i) // q))
        out.append(sign * (d_lens(p, q, i) - 2 * v))
    return out


# -- report ------------------------------------------------------------------------

ALL_INVARIANTS = ("g0", "tau", "vk", "upsilon", "d")


def report_from_g0(g0_knot: Sequence[Region], slopes: Sequence[Tuple[int, int]] = (),
                   invariants: Sequence[str] = ALL_INVARIANTS) -> dict:
    """Invariant report from G_0(K) alone."""
    g0_knot = minimize(g0_knot)
    g0_m = dual_min(g0_knot)
    vk, vkm = vk_from_g0(g0_knot), vk_mirror_from_g0(g0_knot)
    out = {"schema": 1}
    if "g0" in invariants:
        out["g0_K"] = [r.to_list() for r in g0_knot]
        out["g0_mirror"] = [r.to_list() for r in g0_m]
        out["nu_plus_trivial"] = nu_plus_trivial(g0_knot)
    if "tau" in invariants:
        out["tau"] = tau_from_g0(g0_knot)
    if "vk" in invariants:
        out["vk"] = vk
        out["vk_mirror"] = vkm
    if "upsilon" in invariants:
        out["upsilon"] = upsilon_from_g0(g0_knot).to_list()
    if "d" in invariants and slopes:
        out["d"] = {f"{p}/{q}": [_frac_str(x) for x in d_surgery(vk, vkm, p, q)] for p, q in slopes}
        out["spin_c_convention"] = "negative slopes keep the index of the mirror's positive slope"
    return out
