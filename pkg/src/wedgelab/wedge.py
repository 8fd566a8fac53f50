"""Wedges {r e^{i theta} : r >= 0, theta in [theta1, theta2]} and escape scans."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .cyclotomic import CycNumber

__all__ = ["Wedge", "Rotation", "ScanReport", "contains", "normalize_rotation", "rotate", "scan", "merge"]

ANGLE_TOL = 1e-12
_TWO_PI = 2 * math.pi


def _principal(theta: float) -> float:
    """theta reduced to (-pi, pi]."""
    t = math.remainder(theta, _TWO_PI)
    return math.pi if t == -math.pi else t


@dataclass(frozen=True)
class Wedge:
    """Closed sector of opening theta2 - theta1 in [0, pi).

    theta1 is stored reduced to (-pi, pi]; theta2 keeps the opening, so it
    may exceed pi.
    """

    theta1: float
    theta2: float

    def __post_init__(self):
        width = self.theta2 - self.theta1
        if not 0 <= width < math.pi:
            raise ValueError(f"wedge opening {width} is not in [0, pi)")
        t1 = _principal(self.theta1)
        object.__setattr__(self, "theta1", t1)
        object.__setattr__(self, "theta2", t1 + width)

    @property
    def width(self) -> float:
        return self.theta2 - self.theta1

    @classmethod
    def symmetric(cls, phi: float) -> "Wedge":
        """W(-phi, phi)."""
        return cls(-phi, phi)


def _as_complex(z) -> complex:
    return z.embed() if isinstance(z, CycNumber) else complex(z)


def _is_zero(z) -> bool:
    return z.is_zero() if isinstance(z, CycNumber) else z == 0


def contains(w: Wedge, z, strict: bool = False) -> bool:
    """Membership of z in w; boundary rays belong to the wedge.

    z = 0 is a member (r = 0 is allowed) unless ``strict`` is set.
    """
    if _is_zero(z):
        return not strict
    delta = (cmath.phase(_as_complex(z)) - w.theta1) % _TWO_PI
    return delta <= w.width + ANGLE_TOL or delta >= _TWO_PI - ANGLE_TOL


def rotate(w: Wedge, psi: float) -> Wedge:
    return Wedge(w.theta1 + psi, w.theta2 + psi)


@dataclass(frozen=True)
class Rotation:
    """Half-opening phi, gamma = cos(phi), and the angle psi that centres the wedge."""

    phi: float
    gamma: float
    psi: float

    @property
    def factor(self) -> complex:
        return cmath.exp(1j * self.psi)


def normalize_rotation(w: Wedge) -> Rotation:
    """Rotate w onto W(-phi, phi): every z in w then has Re(e^{i psi} z) >= gamma |z|."""
    phi = w.width / 2
    return Rotation(phi, math.cos(phi), -(w.theta1 + w.theta2) / 2)


@dataclass
class ScanReport:
    """Escapes from a wedge and sign changes of real / imaginary parts.

    Sign changes are pairs (i, j) of consecutive indices with nonzero part of
    opposite strict sign; zero values are skipped. The ``first_*``/``last_*``
    fields hold (index, sign) of the extreme nonzero entries so reports on
    adjacent ranges can be merged.
    """

    indices: list = field(default_factory=list)
    escapes: list = field(default_factory=list)
    re_changes: list = field(default_factory=list)
    im_changes: list = field(default_factory=list)
    first_re: tuple | None = None
    last_re: tuple | None = None
    first_im: tuple | None = None
    last_im: tuple | None = None

    @property
    def escape_count(self) -> int:
        return len(self.escapes)

    @property
    def re_change_count(self) -> int:
        return len(self.re_changes)

    @property
    def im_change_count(self) -> int:
        return len(self.im_changes)

    @property
    def first_escape(self):
        return self.escapes[0] if self.escapes else None

    def to_json(self) -> dict:
        return {
            "scanned": len(self.indices),
            "escapes": list(self.escapes),
            "escape_count": self.escape_count,
            "first_escape": self.first_escape if self.escapes else "none",
            "re_sign_changes": [list(x) for x in self.re_changes],
            "im_sign_changes": [list(x) for x in self.im_changes],
            "re_change_count": self.re_change_count,
            "im_change_count": self.im_change_count,
        }


def _signs(z) -> tuple[int, int]:
    if isinstance(z, CycNumber):
        return z.real_sign(), z.imag_sign()
    z = complex(z)
    return (z.real > 0) - (z.real < 0), (z.imag > 0) - (z.imag < 0)


def _indexed(seq, start: int):
    if isinstance(seq, dict):
        return sorted(seq.items())
    items = list(seq)
    if items and isinstance(items[0], tuple) and len(items[0]) == 2:
        return items
    return list(enumerate(items, start))


def scan(seq, w: Wedge, strict: bool = False, start: int = 1) -> ScanReport:
    """Scan an indexed sequence for wedge escapes and sign changes.

    ``seq`` is a dict index -> value, a list of (index, value) pairs, or a
    plain sequence indexed from ``start``.
    """
    rep = ScanReport()
    for i, z in _indexed(seq, start):
        rep.indices.append(i)
        if not contains(w, z, strict):
            rep.escapes.append(i)
        sr, si = _signs(z)
        if sr:
            if rep.last_re is not None and rep.last_re[1] != sr:
                rep.re_changes.append((rep.last_re[0], i))
            rep.last_re = (i, sr)
            if rep.first_re is None:
                rep.first_re = (i, sr)
        if si:
            if rep.last_im is not None and rep.last_im[1] != si:
                rep.im_changes.append((rep.last_im[0], i))
            rep.last_im = (i, si)
            if rep.first_im is None:
                rep.first_im = (i, si)
    return rep


def merge(a: ScanReport, b: ScanReport) -> ScanReport:
    """Report of the concatenation of the two scanned ranges (a before b)."""
    out = ScanReport(
        indices=a.indices + b.indices,
        escapes=a.escapes + b.escapes,
        re_changes=list(a.re_changes),
        im_changes=list(a.im_changes),
    )
    if a.last_re and b.first_re and a.last_re[1] != b.first_re[1]:
        out.re_changes.append((a.last_re[0], b.first_re[0]))
    if a.last_im and b.first_im and a.last_im[1] != b.first_im[1]:
        out.im_changes.append((a.last_im[0], b.first_im[0]))
    out.re_changes += b.re_changes
    out.im_changes += b.im_changes
    out.first_re = a.first_re or b.first_re
    out.last_re = b.last_re or a.last_re
    out.first_im = a.first_im or b.first_im
    out.last_im = b.last_im or a.last_im
    return out
