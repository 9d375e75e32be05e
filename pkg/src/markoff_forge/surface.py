"""Cubic surfaces of Markoff type and their Vieta involutions.

A surface is the zero set of

    sum_ij alpha[i][j] x_i x_j + sum_j beta[j] x_j + gamma = delta * x1 x2 x3

with integer coefficients.  The classical Markoff surface (and its
level sets) is ``SurfaceSpec.markoff(k)``.  The equation is quadratic
in each coordinate, so each coordinate carries a Vieta involution; the
acting generator set is the three involutions plus two transpositions.

Residue points are packed into 64-bit keys (x1 + q*x2 + q^2*x3), which
is what the orbit and spectral machinery works with; that packing caps
the modulus at 2^21.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .modmath import factorize

PACK_LIMIT = 1 << 21

GENERATORS = ("R1", "R2", "R3", "t12", "t23")

_SCAN_BOUND = 1000  # largest prime-power factor handled by full scan
_SIZE_GUARD = 60_000_000  # refuse point sets larger than this


class NonInvertiblePivot(ValueError):
    """Vieta pivot coefficient not invertible modulo q."""


class OffSurface(ValueError):
    """Point does not satisfy the surface equation."""


class ModulusTooLarge(ValueError):
    """Modulus outside the supported packing / enumeration range."""


@dataclass(frozen=True)
class SurfaceSpec:
    """Coefficients of one Markoff-type cubic surface.

    ``alpha`` is stored in canonical form: the cross coefficient of
    x_i x_j (i < j) sits in alpha[i][j] and alpha[j][i] is zero, so two
    inputs describing the same quadratic form compare equal.
    """

    alpha: tuple[tuple[int, int, int], ...]
    beta: tuple[int, int, int]
    gamma: int
    delta: int
    label: str = "custom"

    @staticmethod
    def make(alpha, beta, gamma, delta, label="custom") -> "SurfaceSpec":
        """Build a spec from any 3x3 alpha, folding alpha[j][i] into alpha[i][j]."""
        a = [list(map(int, row)) for row in alpha]
        if len(a) != 3 or any(len(r) != 3 for r in a):
            raise ValueError("alpha must be a 3x3 integer matrix")
        canon = [[0, 0, 0] for _ in range(3)]
        for i in range(3):
            canon[i][i] = a[i][i]
        for i in range(3):
            for j in range(i + 1, 3):
                canon[i][j] = a[i][j] + a[j][i]
        return SurfaceSpec(
            alpha=tuple(tuple(r) for r in canon),
            beta=tuple(int(b) for b in beta),
            gamma=int(gamma),
            delta=int(delta),
            label=label,
        )

    @classmethod
    def markoff(cls, k: int = 0) -> "SurfaceSpec":
        """The level set x1^2 + x2^2 + x3^2 - 3 x1 x2 x3 = k."""
        ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        return cls(alpha=ident, beta=(0, 0, 0), gamma=-int(k), delta=3, label=f"markoff:{k}")

    def cross(self, i: int, j: int) -> int:
        """Coefficient of x_i x_j for i != j (0-based indices)."""
        return self.alpha[i][j] + self.alpha[j][i]

    def is_markoff_family(self) -> bool:
        """True for specs with identity alpha, zero beta and delta = 3."""
        ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        return self.alpha == ident and self.beta == (0, 0, 0) and self.delta == 3

    def markoff_level(self) -> int:
        if not self.is_markoff_family():
            raise ValueError("not a markoff-family surface")
        return -self.gamma


@dataclass(frozen=True)
class ResiduePoint:
    """A point of the surface over Z/qZ, coordinates canonical in [0, q)."""

    x1: int
    x2: int
    x3: int
    q: int

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("modulus must be >= 2")
        if self.q >= PACK_LIMIT:
            raise ModulusTooLarge(f"modulus {self.q} >= 2^21 cannot be packed")
        for x in (self.x1, self.x2, self.x3):
            if not 0 <= x < self.q:
                raise ValueError(f"coordinate {x} not canonical mod {self.q}")

    def key(self) -> int:
        return self.x1 + self.q * (self.x2 + self.q * self.x3)

    @classmethod
    def from_key(cls, key: int, q: int) -> "ResiduePoint":
        x1 = key % q
        t = key // q
        return cls(x1=x1, x2=t % q, x3=t // q, q=q)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x1, self.x2, self.x3)

    def is_origin(self) -> bool:
        return self.x1 == self.x2 == self.x3 == 0


def point(x1: int, x2: int, x3: int, q: int) -> ResiduePoint:
    """ResiduePoint from arbitrary integers, reduced mod q."""
    return ResiduePoint(x1 % q, x2 % q, x3 % q, q)


def evaluate_z(spec: SurfaceSpec, xyz: tuple[int, int, int]) -> int:
    """Exact integer value of the defining polynomial at xyz."""
    x1, x2, x3 = xyz
    a = spec.alpha
    val = a[0][0] * x1 * x1 + a[1][1] * x2 * x2 + a[2][2] * x3 * x3
    val += spec.cross(0, 1) * x1 * x2 + spec.cross(0, 2) * x1 * x3 + spec.cross(1, 2) * x2 * x3
    val += spec.beta[0] * x1 + spec.beta[1] * x2 + spec.beta[2] * x3 + spec.gamma
    val -= spec.delta * x1 * x2 * x3
    return val


def evaluate(spec: SurfaceSpec, pt: ResiduePoint) -> int:
    """Canonical residue of the defining polynomial at a residue point."""
    return evaluate_z(spec, pt.as_tuple()) % pt.q


def _vieta_linear_coeff(spec: SurfaceSpec, j: int, xyz: tuple[int, int, int]) -> int:
    """Coefficient of x_j in the equation read as a quadratic in x_j (0-based j)."""
    others = [i for i in range(3) if i != j]
    u, v = others
    return (
        spec.cross(j, u) * xyz[u]
        + spec.cross(j, v) * xyz[v]
        + spec.beta[j]
        - spec.delta * xyz[u] * xyz[v]
    )


def vieta(spec: SurfaceSpec, j: int, pt: ResiduePoint) -> ResiduePoint:
    """Vieta involution in coordinate j (1, 2 or 3) over Z/qZ.

    Swaps x_j for the second root of the equation read as a quadratic
    in x_j.  Raises NonInvertiblePivot when alpha[j][j] has no inverse
    mod q and OffSurface when pt does not lie on the surface.
    """
    if j not in (1, 2, 3):
        raise ValueError("coordinate index must be 1, 2 or 3")
    q = pt.q
    ajj = spec.alpha[j - 1][j - 1] % q
    if math.gcd(ajj, q) != 1:
        raise NonInvertiblePivot(f"alpha[{j}][{j}] = {spec.alpha[j-1][j-1]} has no inverse mod {q}")
    if evaluate(spec, pt) != 0:
        raise OffSurface(f"{pt.as_tuple()} is not on {spec.label} mod {q}")
    xyz = pt.as_tuple()
    ell = _vieta_linear_coeff(spec, j - 1, xyz)
    new = (-ell * pow(ajj, -1, q) - xyz[j - 1]) % q
    coords = list(xyz)
    coords[j - 1] = new
    return ResiduePoint(coords[0], coords[1], coords[2], q)


def vieta_z(spec: SurfaceSpec, j: int, xyz: tuple[int, int, int]) -> tuple[int, int, int]:
    """Vieta involution in coordinate j over Z (exact; pivot must be a unit)."""
    if j not in (1, 2, 3):
        raise ValueError("coordinate index must be 1, 2 or 3")
    ajj = spec.alpha[j - 1][j - 1]
    if ajj not in (1, -1):
        raise NonInvertiblePivot("integral Vieta needs alpha[j][j] = +-1")
    if evaluate_z(spec, xyz) != 0:
        raise OffSurface(f"{xyz} is not on {spec.label} over Z")
    ell = _vieta_linear_coeff(spec, j - 1, xyz)
    coords = list(xyz)
    coords[j - 1] = -ell * ajj - xyz[j - 1]
    return tuple(coords)


def apply_generator(spec: SurfaceSpec, g: str, pt: ResiduePoint) -> ResiduePoint:
    """Apply one generator (R1, R2, R3, t12, t23) to a residue point."""
    if g == "t12":
        return ResiduePoint(pt.x2, pt.x1, pt.x3, pt.q)
    if g == "t23":
        return ResiduePoint(pt.x1, pt.x3, pt.x2, pt.q)
    if g in ("R1", "R2", "R3"):
        return vieta(spec, int(g[1]), pt)
    raise ValueError(f"unknown generator {g!r}")


def apply_generator_z(spec: SurfaceSpec, g: str, xyz: tuple[int, int, int]) -> tuple[int, int, int]:
    """Apply one generator to an integer point (exact arithmetic)."""
    if g == "t12":
        return (xyz[1], xyz[0], xyz[2])
    if g == "t23":
        return (xyz[0], xyz[2], xyz[1])
    if g in ("R1", "R2", "R3"):
        return vieta_z(spec, int(g[1]), xyz)
    raise ValueError(f"unknown generator {g!r}")


def admissible_generators(spec: SurfaceSpec, q: int) -> tuple[str, ...]:
    """Generators acting mod q: R_j is dropped when alpha[j][j] is not a unit."""
    gens = []
    for j in range(3):
        if math.gcd(spec.alpha[j][j] % q, q) == 1:
            gens.append(f"R{j+1}")
    gens += ["t12", "t23"]
    return tuple(gens)


def generator_set_label(spec: SurfaceSpec, q: int) -> str:
    return ",".join(admissible_generators(spec, q))


# ----------------------------------------------------------------------
# packed-key helpers (vectorized)


def pack_keys(x1, x2, x3, q: int):
    x1 = np.asarray(x1, dtype=np.int64)
    x2 = np.asarray(x2, dtype=np.int64)
    x3 = np.asarray(x3, dtype=np.int64)
    return x1 + q * (x2 + q * x3)


def unpack_keys(keys, q: int):
    keys = np.asarray(keys, dtype=np.int64)
    x1 = keys % q
    t = keys // q
    return x1, t % q, t // q


class _SpecModQ:
    """Spec coefficients reduced mod q, plus pivot inverses where they exist."""

    __slots__ = ("q", "a", "c", "b", "gamma", "delta", "inv")

    def __init__(self, spec: SurfaceSpec, q: int):
        self.q = q
        self.a = tuple(spec.alpha[i][i] % q for i in range(3))
        self.c = {
            (0, 1): spec.cross(0, 1) % q,
            (0, 2): spec.cross(0, 2) % q,
            (1, 2): spec.cross(1, 2) % q,
        }
        self.b = tuple(spec.beta[i] % q for i in range(3))
        self.gamma = spec.gamma % q
        self.delta = spec.delta % q
        self.inv = tuple(
            pow(self.a[i], -1, q) if math.gcd(self.a[i], q) == 1 else None for i in range(3)
        )

    def croval(self, i: int, j: int) -> int:
        return self.c[(min(i, j), max(i, j))]


def _apply_generator_arrays(sm: _SpecModQ, g: str, x1, x2, x3):
    """Vectorized generator action on int64 coordinate arrays (canonical mod q)."""
    q = sm.q
    if g == "t12":
        return x2, x1, x3
    if g == "t23":
        return x1, x3, x2
    if g not in ("R1", "R2", "R3"):
        raise ValueError(f"unknown generator label {g!r}")
    j = int(g[1]) - 1
    coords = [x1, x2, x3]
    u, v = [i for i in range(3) if i != j]
    ell = (
        sm.croval(j, u) * coords[u]
        + sm.croval(j, v) * coords[v]
        + sm.b[j]
        - sm.delta * (coords[u] * coords[v] % q)
    ) % q
    inv = sm.inv[j]
    if inv is None:
        raise NonInvertiblePivot(f"generator {g} not admissible mod {q}")
    coords[j] = (-ell * inv - coords[j]) % q
    return coords[0], coords[1], coords[2]


# ----------------------------------------------------------------------
# point enumeration


def _sqrt_table(p: int) -> np.ndarray:
    """table[a] = smallest square root of a mod p, or -1 for non-residues."""
    xs = np.arange(p - 1, -1, -1, dtype=np.int64)
    table = np.full(p, -1, dtype=np.int64)
    table[(xs * xs) % p] = xs
    return table


def _modpow_arr(base: np.ndarray, exp: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % p
    while exp:
        if exp & 1:
            out = out * b % p
        b = b * b % p
        exp >>= 1
    return out


def _enumerate_prime(spec: SurfaceSpec, p: int) -> np.ndarray:
    """Point keys mod an odd prime p >= 5, solving coordinate-wise quadratics."""
    sm = _SpecModQ(spec, p)
    # prefer a coordinate with invertible square coefficient as the solved axis
    axis = next((j for j in (2, 0, 1) if sm.a[j] % p != 0), None)
    rt = _sqrt_table(p)
    chunks = []
    chunk_rows = max(1, (1 << 20) // p)
    mesh_idx = [i for i in range(3) if i != axis] if axis is not None else [0, 1]
    for lo in range(0, p, chunk_rows):
        hi = min(p, lo + chunk_rows)
        U = np.repeat(np.arange(lo, hi, dtype=np.int64), p)
        V = np.tile(np.arange(p, dtype=np.int64), hi - lo)
        if axis is not None:
            j = axis
            u_i, v_i = mesh_idx
            a2 = sm.a[j]
            B = (
                sm.croval(j, u_i) * U
                + sm.croval(j, v_i) * V
                + sm.b[j]
                - sm.delta * (U * V % p)
            ) % p
            C = (
                sm.a[u_i] * (U * U % p)
                + sm.a[v_i] * (V * V % p)
                + sm.croval(u_i, v_i) * (U * V % p)
                + sm.b[u_i] * U
                + sm.b[v_i] * V
                + sm.gamma
            ) % p
            disc = (B * B - (4 * a2 % p) * C) % p
            r = rt[disc]
            inv2a = pow(2 * a2 % p, -1, p)
            has = r >= 0
            za = ((-B + r) * inv2a) % p
            zb = ((-B - r) * inv2a) % p
            coords = [None, None, None]
            coords[u_i], coords[v_i] = U, V
            coords[j] = za
            part_a = pack_keys(coords[0][has], coords[1][has], coords[2][has], p)
            two = has & (r > 0)
            coords[j] = zb
            part_b = pack_keys(coords[0][two], coords[1][two], coords[2][two], p)
            chunks += [part_a, part_b]
        else:
            # every alpha[j][j] vanishes mod p: the equation is linear in x3
            B = (
                sm.croval(2, 0) * U
                + sm.croval(2, 1) * V
                + sm.b[2]
                - sm.delta * (U * V % p)
            ) % p
            C = (sm.croval(0, 1) * (U * V % p) + sm.b[0] * U + sm.b[1] * V + sm.gamma) % p
            reg = B != 0
            z = (-C[reg] * _modpow_arr(B[reg], p - 2, p)) % p
            chunks.append(pack_keys(U[reg], V[reg], z, p))
            line = (~reg) & (C == 0)
            n_line = int(line.sum())
            if n_line:
                if n_line * p > _SIZE_GUARD:
                    raise ModulusTooLarge("degenerate surface: point set too large")
                Z = np.tile(np.arange(p, dtype=np.int64), n_line)
                chunks.append(
                    pack_keys(np.repeat(U[line], p), np.repeat(V[line], p), Z, p)
                )
    return np.unique(np.concatenate(chunks)) if chunks else np.empty(0, dtype=np.int64)


def _enumerate_scan(spec: SurfaceSpec, m: int) -> np.ndarray:
    """Point keys by direct evaluation over all of (Z/mZ)^3; fine for small m."""
    sm = _SpecModQ(spec, m)
    X2 = np.repeat(np.arange(m, dtype=np.int64), m)
    X3 = np.tile(np.arange(m, dtype=np.int64), m)
    base = (
        sm.a[1] * (X2 * X2 % m)
        + sm.a[2] * (X3 * X3 % m)
        + sm.croval(1, 2) * (X2 * X3 % m)
        + sm.b[1] * X2
        + sm.b[2] * X3
        + sm.gamma
    ) % m
    chunks = []
    for x1 in range(m):
        val = (
            base
            + sm.a[0] * (x1 * x1 % m)
            + sm.croval(0, 1) * x1 % m * X2
            + sm.croval(0, 2) * x1 % m * X3
            + sm.b[0] * x1
            - sm.delta * x1 % m * (X2 * X3 % m)
        ) % m
        on = val == 0
        if on.any():
            chunks.append(pack_keys(np.full(int(on.sum()), x1, dtype=np.int64), X2[on], X3[on], m))
    return np.unique(np.concatenate(chunks)) if chunks else np.empty(0, dtype=np.int64)


def _crt_fold(parts: list[tuple[int, np.ndarray]]) -> tuple[int, np.ndarray]:
    """Combine per-factor point keys by the Chinese remainder construction."""
    m1, k1 = parts[0]
    for m2, k2 in parts[1:]:
        if len(k1) * len(k2) > _SIZE_GUARD:
            raise ModulusTooLarge("combined point set too large")
        q = m1 * m2
        c1 = m2 * pow(m2, -1, m1) % q  # 1 mod m1, 0 mod m2
        c2 = m1 * pow(m1, -1, m2) % q
        a1 = unpack_keys(np.repeat(k1, len(k2)), m1)
        a2 = unpack_keys(np.tile(k2, len(k1)), m2)
        coords = [(c1 * a1[i] + c2 * a2[i]) % q for i in range(3)]
        k1 = pack_keys(*coords, q)
        m1 = q
    return m1, np.sort(k1)


def enumerate_keys(spec: SurfaceSpec, q: int) -> np.ndarray:
    """Sorted packed keys of every surface point mod q."""
    if not 2 <= q < PACK_LIMIT:
        raise ModulusTooLarge(f"modulus {q} outside [2, 2^21)")
    fac = factorize(q)
    parts = []
    for p, e in fac:
        pe = p**e
        if e == 1 and p >= 5:
            parts.append((pe, _enumerate_prime(spec, p)))
        elif pe <= _SCAN_BOUND:
            parts.append((pe, _enumerate_scan(spec, pe)))
        else:
            raise ModulusTooLarge(
                f"prime-power factor {pe} exceeds the full-scan bound {_SCAN_BOUND}"
            )
    _, keys = _crt_fold(parts)
    return keys


class PointSet:
    """The full point set of a surface mod q, stored as sorted packed keys."""

    def __init__(self, spec: SurfaceSpec, q: int, keys: np.ndarray):
        self.spec = spec
        self.q = q
        self.keys = keys

    def __len__(self) -> int:
        return int(len(self.keys))

    def __contains__(self, pt) -> bool:
        if isinstance(pt, ResiduePoint):
            key = pt.key()
        else:
            x1, x2, x3 = pt
            key = (x1 % self.q) + self.q * ((x2 % self.q) + self.q * (x3 % self.q))
        i = int(np.searchsorted(self.keys, key))
        return i < len(self.keys) and int(self.keys[i]) == key

    def __iter__(self) -> Iterator[ResiduePoint]:
        for k in self.keys:
            yield ResiduePoint.from_key(int(k), self.q)

    def index_of_keys(self, keys: np.ndarray) -> np.ndarray:
        """Positions of the given keys in the sorted key array (must be members)."""
        idx = np.searchsorted(self.keys, keys)
        safe = np.minimum(idx, len(self.keys) - 1)
        if not np.array_equal(self.keys[safe], keys):
            raise OffSurface("generator image left the point set")
        return safe

    def coordinate_counts(self, axis: int) -> np.ndarray:
        """Number of points at each value of coordinate axis (1, 2 or 3)."""
        coords = unpack_keys(self.keys, self.q)
        return np.bincount(coords[axis - 1], minlength=self.q)


def enumerate_points(spec: SurfaceSpec, q: int) -> PointSet:
    """All points of the surface over Z/qZ."""
    return PointSet(spec, q, enumerate_keys(spec, q))


# ----------------------------------------------------------------------
# surface descriptions as text


def parse_surface(text: str) -> SurfaceSpec:
    """Parse the markoff:k shorthand (plain "markoff" means k = 0)."""
    s = text.strip()
    if s == "markoff":
        return SurfaceSpec.markoff(0)
    if s.startswith("markoff:"):
        return SurfaceSpec.markoff(int(s.split(":", 1)[1]))
    raise ValueError(f"unrecognized surface shorthand {text!r} (expected markoff:k)")


def load_surface_file(path: str) -> SurfaceSpec:
    """Read a key-value surface file.

    Lines are "name = integers" (the '=' optional, '#' starts a comment):
    alpha takes 9 integers row-major, beta 3, gamma and delta one each.
    """
    fields: dict[str, list[int]] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                name, rest = line.split("=", 1)
            else:
                name, rest = line.split(None, 1)
            fields[name.strip()] = [int(tok) for tok in rest.split()]
    try:
        avals = fields["alpha"]
        bvals = fields["beta"]
        (gamma,) = fields["gamma"]
        (delta,) = fields["delta"]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"surface file {path} missing or malformed field: {exc}") from exc
    if len(avals) != 9 or len(bvals) != 3:
        raise ValueError("alpha needs 9 integers (row-major) and beta needs 3")
    alpha = [avals[0:3], avals[3:6], avals[6:9]]
    import os

    label = os.path.splitext(os.path.basename(path))[0]
    return SurfaceSpec.make(alpha, bvals, gamma, delta, label=label)
