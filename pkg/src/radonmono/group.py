"""Finite matrix group analysis: closure, derived series, spinning, scalars.

Exact breadth-first closure with canonical hashing works over any FieldSpec
and is the reference path.  For cyclotomic or rational generators there is a
fast modular path: map the root of unity to an element of the same order in
GF(p) for a prime p = 1 mod m, enumerate with numpy matrices mod p, and
require agreement across two primes.  For p > 2 not dividing any generator
denominator the reduction is injective on finite groups, so the modular
order is the exact order whenever the generators embed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    BadPrime,
    CapExceeded,
    FieldMismatch,
    NonInvertibleGenerator,
    OrderDisagreement,
    ShapeMismatch,
    ZeroSeed,
)
from .field import FieldElement, FieldSpec, cyclotomic_polynomial, is_prime
from .linalg import Matrix, Subspace, hstack, image, kernel, row_times_matrix, subspace_sum

__all__ = [
    "MatrixGroupGen",
    "ClosureResult",
    "closure",
    "derived_series",
    "spin",
    "spin_subspace",
    "fixed_subspace",
    "moving_subspace",
    "contains_scalar",
    "root_of_unity_modp",
    "reduce_matrix_modp",
    "modular_order",
    "modular_group_analysis",
    "invariant_decomposition",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 500_000


@dataclass(frozen=True)
class MatrixGroupGen:
    """A finite list of invertible generators of a matrix group."""

    spec: FieldSpec
    degree: int
    generators: tuple[Matrix, ...]

    @classmethod
    def from_matrices(cls, gens: Sequence[Matrix]) -> "MatrixGroupGen":
        if not gens:
            raise ShapeMismatch("no generators")
        spec = gens[0].spec
        d = gens[0].rows
        for g in gens:
            if g.spec != spec:
                raise FieldMismatch("generators over different fields")
            if not g.is_square() or g.rows != d:
                raise ShapeMismatch("generators must be square of equal size")
            try:
                g.inverse()
            except Exception:
                raise NonInvertibleGenerator("generator is singular") from None
        return cls(spec=spec, degree=d, generators=tuple(gens))


@dataclass
class ClosureResult:
    """Outcome of a breadth-first closure enumeration."""

    status: str  # "complete" or "cap_exceeded"
    order: int | None
    keys: frozenset[bytes] | None = None
    elements: tuple[Matrix, ...] | None = None

    @property
    def complete(self) -> bool:
        return self.status == "complete"


def _as_generators(gens) -> MatrixGroupGen:
    if isinstance(gens, MatrixGroupGen):
        return gens
    return MatrixGroupGen.from_matrices(list(gens))


def closure(gens, cap: int = DEFAULT_CAP, retain_elements: bool = False) -> ClosureResult:
    """Exact BFS closure of the generated group, up to `cap` elements."""
    group = _as_generators(gens)
    if cap < 1:
        raise CapExceeded("cap must be >= 1")
    ident = Matrix.identity(group.spec, group.degree)
    seen: dict[bytes, Matrix] = {ident.canonical_key(): ident}
    frontier = [ident]
    while frontier:
        new: list[Matrix] = []
        for gen in group.generators:
            for el in frontier:
                prod = el * gen
                key = prod.canonical_key()
                if key not in seen:
                    seen[key] = prod
                    new.append(prod)
                    if len(seen) > cap:
                        return ClosureResult(status="cap_exceeded", order=None)
        frontier = new
    elements = tuple(seen.values()) if retain_elements else None
    return ClosureResult(
        status="complete",
        order=len(seen),
        keys=frozenset(seen.keys()),
        elements=elements,
    )


def contains_scalar(result: ClosureResult, lam: FieldElement, degree: int) -> bool:
    """True when lambda * identity occurs in a completed closure."""
    if not result.complete or result.keys is None:
        raise CapExceeded("closure did not complete")
    spec = lam.spec
    scalar = Matrix.diagonal(spec, [lam] * degree)
    return scalar.canonical_key() in result.keys


def derived_series(gens, cap: int = DEFAULT_CAP) -> list[int]:
    """Orders of the group and its successive derived subgroups.

    Each derived subgroup is generated by commutators of the previous
    stage's generators, closed under conjugation to make it normal, and
    enumerated by BFS.  The list stops at order 1 (solvable) or when the
    order stabilizes (perfect derived subgroup).
    """
    group = _as_generators(gens)
    first = closure(group, cap=cap)
    if not first.complete:
        raise CapExceeded("closure exceeded the cap")
    orders = [first.order]
    current = list(group.generators)
    while orders[-1] != 1:
        commutator_gens = _commutator_generators(current, group.spec, group.degree, cap)
        if not commutator_gens:
            orders.append(1)
            break
        sub = closure(MatrixGroupGen(group.spec, group.degree, tuple(commutator_gens)), cap=cap)
        if not sub.complete:
            raise CapExceeded("derived subgroup closure exceeded the cap")
        orders.append(sub.order)
        if sub.order == orders[-2]:
            break
        current = commutator_gens
    return orders


def _commutator_generators(gens: list[Matrix], spec, degree, cap) -> list[Matrix]:
    # Deduplicated [a, b] = a^-1 b^-1 a b plus conjugates needed for normality.
    seen: dict[bytes, Matrix] = {}
    inverses = [g.inverse() for g in gens]
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            if i == j:
                continue
            c = inverses[i] * inverses[j] * a * b
            if not c.is_identity():
                seen.setdefault(c.canonical_key(), c)
    if not seen:
        return []
    sub_gens = list(seen.values())
    while True:
        enum = closure(MatrixGroupGen(spec, degree, tuple(sub_gens)), cap=cap)
        if not enum.complete:
            raise CapExceeded("normal closure exceeded the cap")
        missing = []
        for g, g_inv in zip(gens, inverses):
            for s in sub_gens:
                conj = g_inv * s * g
                if conj.canonical_key() not in enum.keys:
                    missing.append(conj)
        if not missing:
            return sub_gens
        for m in missing:
            seen.setdefault(m.canonical_key(), m)
        sub_gens = list(seen.values())


# -- invariant subspaces ----------------------------------------------------------


def spin(gens, seed: Sequence[FieldElement]) -> Subspace:
    """Smallest generator-stable subspace containing the seed vector."""
    group = _as_generators(gens)
    if all(c.is_zero() for c in seed):
        raise ZeroSeed("spin needs a nonzero seed")
    return spin_subspace(group, Subspace.from_rows(group.spec, group.degree, [list(seed)]))


def spin_subspace(gens, seed_space: Subspace) -> Subspace:
    """Smallest generator-stable subspace containing a whole subspace."""
    group = _as_generators(gens)
    current = seed_space
    queue = [list(row) for row in seed_space.basis.entries]
    rows = [list(row) for row in seed_space.basis.entries]
    while queue:
        vec = queue.pop()
        for gen in group.generators:
            img = row_times_matrix(vec, gen)
            if not current.contains_vector(img):
                rows.append(list(img))
                current = Subspace.from_rows(group.spec, group.degree, rows)
                queue.append(list(img))
    return current


def fixed_subspace(gens) -> Subspace:
    """Common fixed vectors of all generators."""
    group = _as_generators(gens)
    ident = Matrix.identity(group.spec, group.degree)
    return kernel(hstack([g - ident for g in group.generators]))


def moving_subspace(gens) -> Subspace:
    """Generator-stable closure of the sum of the images of g - 1.

    For a finite group in invertible characteristic this is the sum of all
    non-trivial isotypic components, i.e. the canonical invariant complement
    of the fixed subspace.
    """
    group = _as_generators(gens)
    ident = Matrix.identity(group.spec, group.degree)
    total = Subspace.zero(group.spec, group.degree)
    for g in group.generators:
        total = subspace_sum(total, image(g - ident))
    if total.dim == 0:
        return total
    return spin_subspace(group, total)


def restricted_tuple(gens, space: Subspace) -> list[Matrix]:
    """The action of the generators on an invariant subspace, in its basis."""
    group = _as_generators(gens)
    out = []
    for g in group.generators:
        rows = []
        for row in space.basis.entries:
            img = row_times_matrix(row, g)
            rows.append(space.coordinates(img))
        out.append(Matrix.from_rows(group.spec, rows, cols=space.dim))
    return out


def invariant_decomposition(gens) -> dict:
    """Summary of the fixed line / moving summand decomposition by spinning."""
    group = _as_generators(gens)
    d = group.degree
    spec = group.spec
    one, zero = spec.one(), spec.zero()
    seeds = [[one if j == i else zero for j in range(d)] for i in range(d)]
    seed_dims = [spin(group, s).dim for s in seeds]
    fixed = fixed_subspace(group)
    moving = moving_subspace(group)
    meets = 0
    if fixed.dim and moving.dim:
        from .linalg import intersect

        meets = intersect(fixed, moving).dim
    covers = subspace_sum(fixed, moving).dim == d
    summary = {
        "standard_seed_spin_dims": seed_dims,
        "fixed_dim": fixed.dim,
        "moving_dim": moving.dim,
        "decomposes": covers and meets == 0,
        "moving_irreducible_by_spinning": None,
        "moving_endomorphism_dim": None,
    }
    if 0 < moving.dim:
        sub = restricted_tuple(group, moving)
        sub_one, sub_zero = spec.one(), spec.zero()
        all_full = True
        for i in range(moving.dim):
            seed = [sub_one if j == i else sub_zero for j in range(moving.dim)]
            if spin(MatrixGroupGen(spec, moving.dim, tuple(sub)), seed).dim != moving.dim:
                all_full = False
                break
        summary["moving_irreducible_by_spinning"] = all_full
        from .linalg import intertwiner_space

        summary["moving_endomorphism_dim"] = intertwiner_space(sub, sub).dim
    return summary


# -- modular fast path -------------------------------------------------------------


def root_of_unity_modp(m: int, p: int) -> int:
    """Smallest residue of multiplicative order exactly m in GF(p)."""
    if not is_prime(p) or p == 2:
        raise BadPrime(f"{p} is not an odd prime")
    if (p - 1) % m != 0:
        raise BadPrime(f"{p} is not 1 mod {m}")
    if m == 1:
        return 1
    prime_divisors = set()
    mm = m
    q = 2
    while q * q <= mm:
        if mm % q == 0:
            prime_divisors.add(q)
            while mm % q == 0:
                mm //= q
        q += 1
    if mm > 1:
        prime_divisors.add(mm)
    for a in range(2, p):
        if pow(a, m, p) != 1:
            continue
        if all(pow(a, m // q, p) != 1 for q in prime_divisors):
            phi = cyclotomic_polynomial(m)
            value = sum(c * pow(a, k, p) for k, c in enumerate(phi)) % p
            if value != 0:
                raise BadPrime(f"{a} mod {p} does not satisfy the cyclotomic polynomial")
            return a
    raise BadPrime(f"no element of order {m} in GF({p})")


def _fraction_modp(value: Fraction, p: int) -> int:
    if value.denominator % p == 0:
        raise BadPrime(f"denominator of {value} vanishes mod {p}")
    return value.numerator * pow(value.denominator, -1, p) % p


def reduce_element_modp(el: FieldElement, p: int, root: int | None = None) -> int:
    spec = el.spec
    if spec.kind == "prime":
        if spec.p != p:
            raise BadPrime(f"element lives in GF({spec.p}), not GF({p})")
        return el.coeffs[0]
    if spec.kind == "rational":
        return _fraction_modp(el.coeffs[0], p)
    if root is None:
        root = root_of_unity_modp(spec.m, p)
    total = 0
    power = 1
    for c in el.coeffs:
        total = (total + _fraction_modp(c, p) * power) % p
        power = power * root % p
    return total


def reduce_matrix_modp(mat: Matrix, p: int, root: int | None = None) -> np.ndarray:
    if mat.spec.kind == "cyclotomic" and root is None:
        root = root_of_unity_modp(mat.spec.m, p)
    data = [[reduce_element_modp(e, p, root) for e in row] for row in mat.entries]
    return np.array(data, dtype=np.int64)


def _modp_det(mat: np.ndarray, p: int) -> int:
    work = [[int(x) % p for x in row] for row in mat]
    n = len(work)
    det = 1
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if work[i][col] % p:
                pivot = i
                break
        if pivot is None:
            return 0
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det = det * work[col][col] % p
        inv = pow(work[col][col], -1, p)
        for i in range(col + 1, n):
            f = work[i][col] * inv % p
            if f:
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[col])]
    return det % p


def _modp_inverse(mat: np.ndarray, p: int) -> np.ndarray:
    n = mat.shape[0]
    work = [[int(x) % p for x in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if work[i][col] % p:
                pivot = i
                break
        if pivot is None:
            raise NonInvertibleGenerator("singular matrix mod p")
        work[col], work[pivot] = work[pivot], work[col]
        inv = pow(work[col][col], -1, p)
        work[col] = [x * inv % p for x in work[col]]
        for i in range(n):
            if i != col and work[i][col]:
                f = work[i][col]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[col])]
    return np.array([row[n:] for row in work], dtype=np.int64)


@dataclass
class ModpClosure:
    p: int
    degree: int
    status: str
    order: int | None
    index: dict
    elements: list


def _modp_closure(gens: list[np.ndarray], p: int, cap: int) -> ModpClosure:
    d = gens[0].shape[0]
    unique: list[np.ndarray] = []
    seen_gen = set()
    for g in gens:
        g = np.ascontiguousarray(g % p, dtype=np.int64)
        key = g.tobytes()
        if key not in seen_gen:
            if _modp_det(g, p) == 0:
                raise NonInvertibleGenerator("singular generator mod p")
            seen_gen.add(key)
            unique.append(g)
    ident = np.ascontiguousarray(np.eye(d, dtype=np.int64))
    index: dict[bytes, int] = {ident.tobytes(): 0}
    elements = [ident]
    frontier = [ident]
    while frontier:
        block = np.stack(frontier)
        new: list[np.ndarray] = []
        for g in unique:
            prods = np.ascontiguousarray(block @ g % p)
            for row in prods:
                key = row.tobytes()
                if key not in index:
                    if len(elements) >= cap:
                        return ModpClosure(p, d, "cap_exceeded", None, index, elements)
                    index[key] = len(elements)
                    elements.append(row)
                    new.append(row)
        frontier = new
    return ModpClosure(p, d, "complete", len(elements), index, elements)


def _modp_commutator_generators(gens: list[np.ndarray], p: int, cap: int) -> list[np.ndarray]:
    seen: dict[bytes, np.ndarray] = {}
    d = gens[0].shape[0]
    ident_key = np.eye(d, dtype=np.int64).tobytes()
    inverses = [_modp_inverse(g, p) for g in gens]
    for i in range(len(gens)):
        for j in range(len(gens)):
            if i == j:
                continue
            c = np.ascontiguousarray(inverses[i] @ inverses[j] @ gens[i] @ gens[j] % p)
            key = c.tobytes()
            if key != ident_key:
                seen.setdefault(key, c)
    if not seen:
        return []
    # Greedy generating subset, then force normality under the parent gens.
    sub: list[np.ndarray] = []
    enum = _modp_closure([np.eye(d, dtype=np.int64)], p, cap)
    for c in seen.values():
        if c.tobytes() not in enum.index:
            sub.append(c)
            enum = _modp_closure(sub, p, cap)
            if enum.status != "complete":
                raise CapExceeded("derived subgroup closure exceeded the cap")
    while True:
        missing = []
        for g, g_inv in zip(gens, inverses):
            for s in sub:
                conj = np.ascontiguousarray(g_inv @ s @ g % p)
                if conj.tobytes() not in enum.index:
                    missing.append(conj)
        if not missing:
            return sub
        for mat in missing:
            key = mat.tobytes()
            if key not in {s.tobytes() for s in sub}:
                sub.append(mat)
        enum = _modp_closure(sub, p, cap)
        if enum.status != "complete":
            raise CapExceeded("normal closure exceeded the cap")


def _modp_derived_series(gens: list[np.ndarray], p: int, cap: int) -> list[int]:
    enum = _modp_closure(gens, p, cap)
    if enum.status != "complete":
        raise CapExceeded("closure exceeded the cap")
    orders = [enum.order]
    current = gens
    while orders[-1] != 1:
        sub = _modp_commutator_generators(current, p, cap)
        if not sub:
            orders.append(1)
            break
        enum = _modp_closure(sub, p, cap)
        if enum.status != "complete":
            raise CapExceeded("derived subgroup closure exceeded the cap")
        orders.append(enum.order)
        if enum.order == orders[-2]:
            break
        current = sub
    return orders


def _modp_scalar_exponents(enum: ModpClosure, spec: FieldSpec, root: int | None) -> list[int]:
    # Exponents k with (root of unity)^k * identity in the group; rational
    # generators are scanned against +-1, prime-field generators skipped.
    if spec.kind == "cyclotomic":
        m, base = spec.m, root
    elif spec.kind == "rational":
        m, base = 2, enum.p - 1
    else:
        return []
    out = []
    for k in range(m):
        scalar = pow(base, k, enum.p)
        mat = np.ascontiguousarray(np.eye(enum.degree, dtype=np.int64) * scalar % enum.p)
        if mat.tobytes() in enum.index:
            out.append(k)
    return out


def modular_order(gens, primes: Sequence[int], cap: int = DEFAULT_CAP) -> int:
    """Exact group order via reduction mod each prime; primes must agree."""
    analysis = modular_group_analysis(gens, primes, cap=cap, with_derived=False)
    return analysis["order"]


def modular_group_analysis(
    gens,
    primes: Sequence[int],
    cap: int = DEFAULT_CAP,
    with_derived: bool = True,
) -> dict:
    """Order, derived series and scalar content over several modular primes.

    Raises OrderDisagreement when the primes disagree on any computed value;
    callers should fall back to the exact closure in that case.
    """
    group = _as_generators(gens)
    if not primes:
        raise BadPrime("no primes supplied")
    per_prime = []
    for p in primes:
        root = root_of_unity_modp(group.spec.m, p) if group.spec.kind == "cyclotomic" else None
        reduced = [reduce_matrix_modp(g, p, root) for g in group.generators]
        enum = _modp_closure(reduced, p, cap)
        if enum.status != "complete":
            raise CapExceeded(f"closure exceeded the cap mod {p}")
        entry = {
            "prime": p,
            "order": enum.order,
            "scalar_exponents": _modp_scalar_exponents(enum, group.spec, root),
        }
        if with_derived:
            entry["derived_series"] = _modp_derived_series(reduced, p, cap)
        per_prime.append(entry)
    first = per_prime[0]
    for other in per_prime[1:]:
        for key in ("order", "scalar_exponents", "derived_series"):
            if key in first and first.get(key) != other.get(key):
                raise OrderDisagreement(
                    f"primes disagree on {key}: {first.get(key)} vs {other.get(key)}"
                )
    result = {
        "primes": list(primes),
        "order": first["order"],
        "scalar_exponents": first["scalar_exponents"],
    }
    if with_derived:
        result["derived_series"] = first["derived_series"]
        result["solvable"] = first["derived_series"][-1] == 1
    return result


def default_modular_primes(spec: FieldSpec, count: int = 2) -> list[int]:
    """The smallest odd primes p with p = 1 mod m (m = 1 outside cyclotomic)."""
    m = spec.m if spec.kind == "cyclotomic" else 1
    out: list[int] = []
    p = 3
    while len(out) < count:
        if is_prime(p) and (p - 1) % m == 0:
            out.append(p)
        p += 2
    return out
