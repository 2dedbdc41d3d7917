"""Smooth subdivision of a plane cone bounded by two irrational walls.

The cone is the sector containing the ray ``(0, 1)`` where the binary
form ``Q(x, y) = a y^2 + b x y + c x^2`` is positive (``a > 0`` after
normalization).  Its walls are the lines of slope ``y/x = s`` with
``a s^2 + b s + c = 0``.  Consecutive rays of the subdivision form
lattice bases; they accumulate on both walls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .errors import RationalWalls

GOLDEN_AUTOMORPHISM = ((2, 3), (3, 5))


@dataclass(frozen=True)
class Ray:
    x: int
    y: int

    def __post_init__(self):
        if self.x == 0 and self.y == 0:
            raise ValueError("a ray needs a nonzero direction")
        if gcd(self.x, self.y) != 1:
            raise ValueError(f"ray ({self.x}, {self.y}) is not primitive")

    def det(self, other: Ray) -> int:
        return self.x * other.y - self.y * other.x

    def slope(self) -> str:
        """``y/x`` written as in ``-5/8``, ``2`` or ``1/0``."""
        if self.x == 0:
            return f"{self.y}/0"
        return str(Fraction(self.y, self.x))


@dataclass(frozen=True)
class WallQuadratic:
    a: int
    b: int
    c: int

    def __post_init__(self):
        disc = self.discriminant
        if self.a == 0:
            raise ValueError("a = 0 puts a wall on the vertical ray (0, 1)")
        if disc <= 0:
            raise ValueError("walls must be real and distinct (b^2 - 4ac > 0)")
        if isqrt(disc) ** 2 == disc:
            raise RationalWalls(f"discriminant {disc} is a perfect square")
        if self.a < 0:
            object.__setattr__(self, "a", -self.a)
            object.__setattr__(self, "b", -self.b)
            object.__setattr__(self, "c", -self.c)

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def form(self, x: int, y: int) -> int:
        return self.a * y * y + self.b * x * y + self.c * x * x

    def polar(self, u: Ray, v: Ray) -> int:
        """``Q(u + v) - Q(u) - Q(v)``."""
        return 2 * self.a * u.y * v.y + self.b * (u.x * v.y + u.y * v.x) + 2 * self.c * u.x * v.x

    def inside(self, r: Ray) -> bool:
        return self.form(r.x, r.y) > 0


CENTER = Ray(0, 1)


def _next_ray(walls: WallQuadratic, u: Ray, v: Ray) -> Ray:
    """Ray ``w = k v - u`` past ``v``, with ``k`` as small as the cone allows.

    ``Q(k v - u) = Q(v) k^2 - polar(u, v) k + Q(u)`` is positive exactly
    for ``k`` above its larger root (or below the smaller one, which lands
    in the opposite sector).
    """
    qv = walls.form(v.x, v.y)
    beta = walls.polar(u, v)
    disc = beta * beta - 4 * qv * walls.form(u.x, u.y)
    k = (beta + isqrt(disc)) // (2 * qv) + 1
    return Ray(k * v.x - u.x, k * v.y - u.y)


def subdivide_cone(walls: WallQuadratic, count: int) -> list[Ray]:
    """``2 count + 1`` rays: ``count`` on each side of ``(0, 1)``, listed from the left wall to the right one."""
    if count < 1:
        raise ValueError("count must be at least 1")
    left, right = [], []
    # virtual predecessors (1, 0) and (-1, 0) make the first step k*(0,1) -+ (1,0)
    prev, cur = Ray(1, 0), CENTER
    for _ in range(count):
        prev, cur = cur, _next_ray(walls, prev, cur)
        left.append(cur)
    prev, cur = Ray(-1, 0), CENTER
    for _ in range(count):
        prev, cur = cur, _next_ray(walls, prev, cur)
        right.append(cur)
    return left[::-1] + [CENTER] + right


def _normalize_sign(x: int, y: int) -> Ray:
    g = gcd(x, y)
    x, y = x // g, y // g
    if y < 0 or (y == 0 and x < 0):
        x, y = -x, -y
    return Ray(x, y)


def apply_automorphism(r: Ray, matrix: Sequence[Sequence[int]] = GOLDEN_AUTOMORPHISM) -> Ray:
    """``(x, y) -> (2x + 3y, 3x + 5y)`` by default, then made primitive.

    The sign is chosen to keep the image in the upper half-plane, which is
    where the golden-ratio cone lives.
    """
    (p, q), (s, t) = matrix
    return _normalize_sign(p * r.x + q * r.y, s * r.x + t * r.y)


def automorphism_stride(rays: Sequence[Ray], matrix: Sequence[Sequence[int]] = GOLDEN_AUTOMORPHISM) -> int | None:
    """Shift ``s`` with ``apply(rays[i]) == rays[i + s]`` wherever both are listed.

    ``None`` when no single shift works or the images never land in the
    sequence.
    """
    index = {r: i for i, r in enumerate(rays)}
    shifts = {index[img] - i for i, r in enumerate(rays) if (img := apply_automorphism(r, matrix)) in index}
    if len(shifts) != 1:
        return None
    (s,) = shifts
    for i, r in enumerate(rays):
        if 0 <= i + s < len(rays) and apply_automorphism(r, matrix) != rays[i + s]:
            return None
    return s


def preserves_form(walls: WallQuadratic, matrix: Sequence[Sequence[int]] = GOLDEN_AUTOMORPHISM) -> bool:
    """True if the linear map fixes ``Q``, hence maps each wall to itself."""
    (p, q), (s, t) = matrix
    for x, y in ((1, 0), (0, 1), (1, 1)):
        if walls.form(p * x + q * y, s * x + t * y) != walls.form(x, y):
            return False
    return True
