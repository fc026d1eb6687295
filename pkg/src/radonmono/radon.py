"""End-to-end pipeline: from fundamental data to the output monodromy tuple.

The fundamental data of a rank-n local system on the complement of a degree-r
plane curve consist of its monodromy tuple (g_1, ..., g_r) with product 1 and
braid words (omega_1, ..., omega_s) recording how the punctures move around
the exceptional lines of a generic pencil.  The induced local system on the
dual-plane complement has monodromy tuple (gtilde_1, ..., gtilde_s) acting on
the quotient W = H/E; this module computes it, validates the inputs, and
compares tuples up to simultaneous conjugation.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .braid import (
    BraidExpr,
    BraidWord,
    act_on_tuple,
    expand,
    free_reduce,
    parse_braid,
    word_from_letters,
)
from .cocycle import phibar, trafodat
from .errors import (
    InputError,
    ProductNotIdentity,
    RadonError,
    ShapeMismatch,
)
from .field import FieldSpec, format_element, parse_element
from .linalg import Matrix, intertwiner_space, matrix_from_flat, product_of

__all__ = [
    "FundamentalData",
    "ValidationReport",
    "RadonResult",
    "validate",
    "radon_rank",
    "radon_transform",
    "check_relations",
    "conjugacy_match",
    "load_fundamental_data",
    "parse_fundamental_data",
    "result_to_dict",
    "dump_json",
]


@dataclass
class FundamentalData:
    """Field, monodromy tuple and braid monodromy words of a local system."""

    spec: FieldSpec
    n: int
    r: int
    g: tuple[Matrix, ...]
    omegas: tuple[BraidExpr, ...]
    relations: tuple[BraidExpr, ...] = ()

    @property
    def s(self) -> int:
        return len(self.omegas)

    def words(self) -> list[BraidWord]:
        return [expand(w, self.r) for w in self.omegas]


@dataclass
class ValidationReport:
    product_ok: bool
    vankampen_ok: bool
    strand_ok: bool
    warnings: list[str] = field(default_factory=list)


@dataclass
class RadonResult:
    dim_e: int
    dim_h: int
    dim_w: int
    transition: Matrix
    gtilde: tuple[Matrix, ...]
    rank_formula: int
    rank_matches: bool
    braid_product_trivial: bool
    gtilde_product_identity: bool | None
    validation: ValidationReport


def _check_shapes(fd: FundamentalData):
    if len(fd.g) != fd.r:
        raise ShapeMismatch(f"expected {fd.r} matrices, got {len(fd.g)}")
    for m in fd.g:
        if not m.is_square() or m.rows != fd.n:
            raise ShapeMismatch(f"tuple entries must be {fd.n}x{fd.n}")
        if m.spec != fd.spec:
            raise ShapeMismatch("matrix field differs from the declared field")


def validate(fd: FundamentalData) -> ValidationReport:
    """Check the product rule and the stability relations of the braid words.

    Shape and strand violations raise; a failing stability relation (the
    tuple not being fixed by some word) only warns, since arbitrary matrix
    tuples need not satisfy the relations that geometric data always do.
    """
    _check_shapes(fd)
    words = fd.words()  # raises StrandOutOfRange on bad letters
    warnings: list[str] = []
    product_ok = product_of(fd.g).is_identity() if fd.g else True
    if not product_ok:
        warnings.append("ordered product of the monodromy tuple is not the identity")
    vankampen_ok = True
    if product_ok:
        for idx, word in enumerate(words):
            if act_on_tuple(fd.g, word) != tuple(fd.g):
                vankampen_ok = False
                warnings.append(f"braid word {idx + 1} does not fix the monodromy tuple")
    return ValidationReport(product_ok, vankampen_ok, True, warnings)


def radon_rank(fd: FundamentalData) -> int:
    """The expected output rank n(r-2) - sum_i dim(fixed space of g_i)."""
    _check_shapes(fd)
    if not product_of(fd.g).is_identity():
        raise ProductNotIdentity("ordered product of the tuple is not the identity")
    from .linalg import kernel

    ident = Matrix.identity(fd.spec, fd.n)
    fixed = sum(kernel(gi - ident).dim for gi in fd.g)
    return fd.n * (fd.r - 2) - fixed


def _phibar_job(args):
    g, word_letters, ts, verify = args
    return phibar(g, word_letters, ts, verify=verify)


def radon_transform(fd: FundamentalData, verify: bool = False, jobs: int = 1) -> RadonResult:
    """Compute the output monodromy tuple in the deterministic flag basis."""
    report = validate(fd)
    if not report.product_ok:
        raise ProductNotIdentity("ordered product of the tuple is not the identity")
    ts = trafodat(fd.g)
    words = fd.words()
    if jobs > 1 and len(words) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            gtilde = tuple(
                pool.map(_phibar_job, [(fd.g, w.letters, ts, verify) for w in words])
            )
    else:
        gtilde = tuple(phibar(fd.g, w, ts, verify=verify) for w in words)

    rank = radon_rank(fd)
    rank_matches = rank == ts.dim_w
    if not rank_matches:
        report.warnings.append(
            f"rank formula gives {rank} but dim W = {ts.dim_w}"
            " (the formula assumes an irreducible non-constant system)"
        )
    concat: list[int] = []
    for w in words:
        concat.extend(w.letters)
    trivial = not free_reduce(BraidWord(fd.r, tuple(concat))).letters if words else True
    product_identity: bool | None = None
    if words and ts.dim_w > 0 and trivial:
        product_identity = product_of(gtilde).is_identity()
        if not product_identity:
            raise RadonError(
                "braid words multiply to the trivial braid but the output tuple "
                "product is not the identity"
            )
    return RadonResult(
        dim_e=ts.dim_e,
        dim_h=ts.dim_h,
        dim_w=ts.dim_w,
        transition=ts.transition,
        gtilde=gtilde,
        rank_formula=rank,
        rank_matches=rank_matches,
        braid_product_trivial=trivial,
        gtilde_product_identity=product_identity,
        validation=report,
    )


def check_relations(mats: Sequence[Matrix], braids: Sequence[BraidExpr]) -> bool:
    """True when every braid in the list fixes the tuple under the action."""
    if not mats:
        raise ShapeMismatch("empty tuple")
    n = mats[0].rows
    for m in mats:
        if not m.is_square() or m.rows != n:
            raise ShapeMismatch("tuple entries must be square of equal size")
    strands = len(mats)
    for braid in braids:
        word = expand(braid, strands)
        if act_on_tuple(mats, word) != tuple(mats):
            return False
    return True


def conjugacy_match(computed: Sequence[Matrix], target: Sequence[Matrix]) -> Matrix | None:
    """An invertible T with T^-1 * computed_i * T = target_i, or None.

    Solves the intertwiner space {T : computed_i T = T target_i} exactly and
    first tests its basis elements for invertibility, then small integer
    combinations when the space has dimension > 1.
    """
    if len(computed) != len(target):
        raise ShapeMismatch("tuples of different length")
    if not computed:
        raise ShapeMismatch("empty tuples")
    d = computed[0].rows
    spec = computed[0].spec
    space = intertwiner_space(list(computed), list(target))
    if space.dim == 0:
        return None
    candidates = [matrix_from_flat(spec, row, d) for row in space.basis.entries]

    def ok(t: Matrix) -> Matrix | None:
        try:
            t_inv = t.inverse()
        except Exception:
            return None
        for c, tgt in zip(computed, target):
            if t_inv * c * t != tgt:
                return None
        return t

    for t in candidates:
        found = ok(t)
        if found is not None:
            return found
    if space.dim > 1:
        span = candidates[: min(space.dim, 4)]
        for coeffs in itertools.product(range(-2, 3), repeat=len(span)):
            if all(c == 0 for c in coeffs):
                continue
            t = Matrix.zero(spec, d, d)
            for c, b in zip(coeffs, span):
                if c:
                    t = t + b.scale(spec.from_int(c))
            found = ok(t)
            if found is not None:
                return found
    return None


# -- JSON interface -------------------------------------------------------------


def parse_fundamental_data(doc: dict, source: str = "<input>") -> FundamentalData:
    """Parse and validate the JSON input document."""
    if not isinstance(doc, dict):
        raise InputError(f"{source}: top level must be an object")

    def need(key, kind, where="input"):
        if key not in doc:
            raise InputError(f"{source}: missing key {key!r} in {where}")
        value = doc[key]
        if not isinstance(value, kind):
            raise InputError(f"{source}: key {key!r} has the wrong type")
        return value

    fdoc = need("field", dict)
    kind = fdoc.get("kind")
    if kind == "rational":
        spec = FieldSpec.rational()
    elif kind == "prime":
        if not isinstance(fdoc.get("p"), int):
            raise InputError(f"{source}: field.p must be an integer")
        spec = FieldSpec.prime(fdoc["p"])
    elif kind == "cyclotomic":
        if not isinstance(fdoc.get("m"), int):
            raise InputError(f"{source}: field.m must be an integer")
        spec = FieldSpec.cyclotomic(fdoc["m"])
    else:
        raise InputError(f"{source}: field.kind must be rational, prime or cyclotomic")

    n = need("n", int)
    r = need("r", int)
    if n < 1 or r < 1:
        raise InputError(f"{source}: n and r must be positive")
    raw_mats = need("matrices", list)
    if len(raw_mats) != r:
        raise InputError(f"{source}: expected {r} matrices, found {len(raw_mats)}")
    mats = []
    for mi, grid in enumerate(raw_mats):
        if not isinstance(grid, list) or len(grid) != n:
            raise InputError(f"{source}: matrices[{mi}] must be an {n}x{n} array")
        rows = []
        for ri, row in enumerate(grid):
            if not isinstance(row, list) or len(row) != n:
                raise InputError(f"{source}: matrices[{mi}][{ri}] must have {n} entries")
            out_row = []
            for ci, cell in enumerate(row):
                if not isinstance(cell, str):
                    raise InputError(
                        f"{source}: matrices[{mi}][{ri}][{ci}] must be an element string"
                    )
                try:
                    out_row.append(parse_element(cell, spec))
                except InputError as exc:
                    raise InputError(
                        f"{source}: matrices[{mi}][{ri}][{ci}]: {exc}"
                    ) from None
            rows.append(out_row)
        mats.append(Matrix.from_rows(spec, rows))

    def parse_braid_list(key, strands):
        out = []
        for bi, item in enumerate(doc.get(key, [])):
            if isinstance(item, str):
                try:
                    out.append(parse_braid(item, strands))
                except InputError as exc:
                    raise InputError(f"{source}: {key}[{bi}]: {exc}") from None
            elif isinstance(item, list) and all(isinstance(x, int) for x in item):
                try:
                    expr, _ = word_from_letters(item, strands)
                except InputError as exc:
                    raise InputError(f"{source}: {key}[{bi}]: {exc}") from None
                out.append(expr)
            else:
                raise InputError(
                    f"{source}: {key}[{bi}] must be a braid string or an integer array"
                )
        return tuple(out)

    if "braids" not in doc:
        raise InputError(f"{source}: missing key 'braids'")
    omegas = parse_braid_list("braids", r)
    relations = parse_braid_list("relations", len(omegas)) if doc.get("relations") else ()
    return FundamentalData(spec=spec, n=n, r=r, g=tuple(mats), omegas=omegas, relations=relations)


def load_fundamental_data(path) -> FundamentalData:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None
    return parse_fundamental_data(doc, source=str(path))


def matrix_to_strings(mat: Matrix) -> list[list[str]]:
    return [[format_element(e) for e in row] for row in mat.entries]


def result_to_dict(result: RadonResult) -> dict:
    return {
        "dims": {"E": result.dim_e, "H": result.dim_h, "W": result.dim_w},
        "gtilde": [matrix_to_strings(m) for m in result.gtilde],
        "report": {
            "product_ok": result.validation.product_ok,
            "vankampen_ok": result.validation.vankampen_ok,
            "strand_ok": result.validation.strand_ok,
            "rank_formula": result.rank_formula,
            "rank_matches_dim_w": result.rank_matches,
            "braid_product_trivial": result.braid_product_trivial,
            "gtilde_product_identity": result.gtilde_product_identity,
            "warnings": list(result.validation.warnings),
        },
    }


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"
