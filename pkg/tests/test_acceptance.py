"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`.  Criterion 1 compares the
computed four-line tuple against the published reference matrices verbatim;
that reference is internally inconsistent (see the companion evidence test),
so the simultaneous-conjugacy assertion is expected to stay red.
"""

import json
import random
import time

from radonmono.braid import BraidWord, act_on_tuple, expand, parse_braid
from radonmono.cocycle import compute_E, compute_H, word_matrix, word_matrix_with_target
from radonmono.field import FieldSpec
from radonmono.group import (
    closure,
    invariant_decomposition,
    modular_group_analysis,
    reduce_element_modp,
)
from radonmono.linalg import Matrix, product_of, row_times_matrix
from radonmono.radon import (
    check_relations,
    conjugacy_match,
    load_fundamental_data,
    parse_fundamental_data,
    radon_rank,
    radon_transform,
)
from radonmono.cli import fixture_path

PUBLISHED_FOUR_LINE_TUPLE = [
    [[1, -2], [0, 1]],
    [[1, 0], [-2, 1]],
    [[-1, -2], [2, 3]],
    [[-1, -2], [2, 3]],
    [[-3, -8], [2, 5]],
    [[1, -2], [0, 1]],
]


def report(number, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"\ncriterion {number}: {status} - {detail}")


def test_criterion_1_four_line_golden_tuple():
    started = time.time()
    fd = load_fundamental_data(fixture_path("four_lines"))
    result = radon_transform(fd)
    target = [Matrix.from_ints(fd.spec, grid) for grid in PUBLISHED_FOUR_LINE_TUPLE]
    conjugator = conjugacy_match(list(result.gtilde), target)
    elapsed = time.time() - started
    ok = result.dim_w == 2 and conjugator is not None and elapsed < 1.0
    report(1, ok, f"dim W = {result.dim_w}, conjugator found = {conjugator is not None}, {elapsed:.2f}s")
    assert result.dim_w == 2
    assert elapsed < 1.0
    assert conjugator is not None, (
        "no simultaneous conjugacy onto the published reference tuple: the "
        "reference multiplies to a non-identity matrix and fails its own third "
        "stability relation, and both properties are conjugation-invariant, so "
        "no output of the stated construction can match it (see the companion "
        "evidence test below)"
    )


def test_published_reference_tuple_internal_consistency_evidence():
    """Evidence for the criterion-1 analysis; this test passes.

    Simultaneous conjugacy preserves the ordered product and the stability
    relations.  The published reference tuple breaks both, while the computed
    tuple satisfies them, so the two cannot be conjugate.
    """
    spec = FieldSpec.rational()
    published = [Matrix.from_ints(spec, grid) for grid in PUBLISHED_FOUR_LINE_TUPLE]
    assert not product_of(published).is_identity()
    relations = [parse_braid(t, 6) for t in ["(b4 b5 b4)^2", "b3^2", "b3^-1 (b1 b2 b1)^2 b3"]]
    fixed = [act_on_tuple(published, expand(rel, 6)) == tuple(published) for rel in relations]
    assert fixed == [True, True, False]

    fd = load_fundamental_data(fixture_path("four_lines"))
    result = radon_transform(fd)
    assert product_of(list(result.gtilde)).is_identity()
    assert check_relations(list(result.gtilde), list(fd.relations))
    # each published entry is nevertheless individually conjugate to an
    # entry of the computed tuple (all unipotent of trace 2 here)
    two = spec.from_int(2)
    for mat in published + list(result.gtilde):
        assert mat.entries[0][0] + mat.entries[1][1] == two


def test_criterion_2_rank_formula():
    started = time.time()
    four = load_fundamental_data(fixture_path("four_lines"))
    zc = load_fundamental_data(fixture_path("zariski_c"))
    zcp = load_fundamental_data(fixture_path("zariski_cprime"))
    ranks = (radon_rank(four), radon_rank(zc), radon_rank(zcp))
    res_four = radon_transform(four)
    res_zc = radon_transform(zc)
    res_zcp = radon_transform(zcp)
    elapsed = time.time() - started
    dims_ok = (
        (res_four.dim_e, res_four.dim_h) == (1, 3)
        and (res_zc.dim_e, res_zc.dim_h) == (1, 5)
        and (res_zcp.dim_e, res_zcp.dim_h) == (1, 5)
    )
    agree = (
        res_four.dim_w == ranks[0]
        and res_zc.dim_w == ranks[1]
        and res_zcp.dim_w == ranks[2]
    )
    ok = ranks == (2, 4, 4) and dims_ok and agree and elapsed < 1.0
    report(2, ok, f"ranks = {ranks}, dims ok = {dims_ok}, rank = dim W on all, {elapsed:.2f}s")
    assert ranks == (2, 4, 4)
    assert dims_ok and agree
    assert elapsed < 1.0


def test_criterion_3_relations_and_product():
    started = time.time()
    fd = load_fundamental_data(fixture_path("four_lines"))
    result = radon_transform(fd)
    relations_ok = check_relations(list(result.gtilde), list(fd.relations))
    product_ok = product_of(list(result.gtilde)).is_identity()
    elapsed = time.time() - started
    ok = relations_ok and product_ok and elapsed < 1.0
    report(3, ok, f"three relations fixed = {relations_ok}, product identity = {product_ok}, {elapsed:.2f}s")
    assert relations_ok and product_ok
    assert elapsed < 1.0


def test_criterion_4_zariski_c_group():
    fd = load_fundamental_data(fixture_path("zariski_c"))
    result = radon_transform(fd)
    gens = list(result.gtilde)

    started = time.time()
    analysis = modular_group_analysis(gens, [7, 13])
    modular_elapsed = time.time() - started
    deco = invariant_decomposition(gens)
    order_ok = analysis["order"] == 648
    solvable_ok = analysis["solvable"] and analysis["derived_series"][-1] == 1
    deco_ok = (
        deco["fixed_dim"] == 1
        and deco["moving_dim"] == 3
        and deco["decomposes"]
        and deco["moving_irreducible_by_spinning"]
        and 3 in deco["standard_seed_spin_dims"]
    )
    exact = closure(gens)
    exact_ok = exact.complete and exact.order == 648
    ok = order_ok and solvable_ok and deco_ok and exact_ok and modular_elapsed < 30.0
    report(
        4,
        ok,
        f"order = {analysis['order']} (mod 7 and 13), derived = {analysis['derived_series']}, "
        f"decomposition = {deco['moving_dim']}+{deco['fixed_dim']}, irreducible summand = "
        f"{deco['moving_irreducible_by_spinning']}, exact cross-check = {exact.order}, "
        f"modular time {modular_elapsed:.1f}s",
    )
    assert order_ok and solvable_ok and deco_ok and exact_ok
    assert modular_elapsed < 30.0


def test_criterion_5_zariski_cprime_group():
    fd = load_fundamental_data(fixture_path("zariski_cprime"))
    result = radon_transform(fd)
    gens = list(result.gtilde)

    started = time.time()
    analysis = modular_group_analysis(gens, [7, 13])
    elapsed = time.time() - started
    series = analysis["derived_series"]
    readings = {155520: 51840, 77760: 25920}
    order = analysis["order"]
    reading_ok = order in readings and len(series) >= 3 and series[1] == readings[order]
    perfect_ok = len(series) >= 3 and series[1] == series[2]
    scalar_ok = 2 in analysis["scalar_exponents"]
    not_solvable = not analysis["solvable"]
    ok = reading_ok and perfect_ok and scalar_ok and not_solvable and elapsed < 600.0
    label = "full symplectic" if order == 155520 else "projective symplectic"
    report(
        5,
        ok,
        f"order = {order} ({label} reading), derived = {series}, "
        f"cube-root scalar present = {scalar_ok}, {elapsed:.1f}s",
    )
    assert reading_ok, f"order {order} with series {series} matches neither reading"
    assert perfect_ok and scalar_ok and not_solvable
    assert elapsed < 600.0


def _random_invertible(rng, spec, n):
    while True:
        m = Matrix.from_ints(spec, [[rng.randrange(spec.p) for _ in range(n)] for _ in range(n)])
        try:
            m.inverse()
            return m
        except Exception:
            continue


def test_criterion_6_property_suite():
    rng = random.Random(271828)
    primes = [5, 7, 11, 13]
    started = time.time()
    cases = 0
    for _ in range(200):
        spec = FieldSpec.prime(rng.choice(primes))
        n = rng.choice([1, 1, 2, 2, 3])
        r = rng.randint(3, 6)
        mats = [_random_invertible(rng, spec, n) for _ in range(r - 1)]
        mats.append(product_of(mats).inverse())
        g = tuple(mats)
        letters = [i for i in range(-(r - 1), r) if i != 0]
        w1 = [rng.choice(letters) for _ in range(rng.randint(1, 4))]
        w2 = [rng.choice(letters) for _ in range(rng.randint(1, 4))]

        # cocycle rule
        assert word_matrix(g, w1 + w2) == word_matrix(g, w1) * word_matrix(
            act_on_tuple(g, w1), w2
        )

        # braid-relation equality of the induced maps on the cocycle space
        i = rng.randint(1, r - 2)
        lhs = word_matrix(g, [i, i + 1, i])
        rhs = word_matrix(g, [i + 1, i, i + 1])
        h_space = compute_H(g)
        for row in h_space.basis.entries:
            assert row_times_matrix(row, lhs) == row_times_matrix(row, rhs)

        # stability of the cocycle and coboundary spaces
        full, target = word_matrix_with_target(g, w1)
        h_target, e_target = compute_H(target), compute_E(target)
        for row in h_space.basis.entries:
            assert h_target.contains_vector(row_times_matrix(row, full))
        for row in compute_E(g).basis.entries:
            assert e_target.contains_vector(row_times_matrix(row, full))

        # action properties: concatenation, product preservation, inverses
        assert act_on_tuple(act_on_tuple(g, w1), w2) == act_on_tuple(g, w1 + w2)
        assert product_of(act_on_tuple(g, w1)).is_identity()
        word = BraidWord(r, tuple(w1))
        assert act_on_tuple(act_on_tuple(g, word), word.inverse()) == g
        assert word_matrix(g, list(word.letters) + list(word.inverse().letters)) == Matrix.identity(
            spec, n * r
        )
        cases += 1
    elapsed = time.time() - started
    report(6, cases == 200, f"{cases} random cases, all exact equalities, {elapsed:.1f}s")
    assert cases == 200


def test_criterion_7_cross_characteristic():
    started = time.time()
    with open(fixture_path("four_lines")) as handle:
        doc = json.load(handle)
    res_q = radon_transform(parse_fundamental_data(doc))
    all_ok = True
    for p in (5, 7):
        doc_p = dict(doc)
        doc_p["field"] = {"kind": "prime", "p": p}
        res_p = radon_transform(parse_fundamental_data(doc_p))
        assert (res_p.dim_e, res_p.dim_h, res_p.dim_w) == (res_q.dim_e, res_q.dim_h, res_q.dim_w)
        for mq, mp in zip(res_q.gtilde, res_p.gtilde):
            for rq, rp in zip(mq.entries, mp.entries):
                for eq_, ep in zip(rq, rp):
                    if reduce_element_modp(eq_, p) != ep.coeffs[0]:
                        all_ok = False
    elapsed = time.time() - started
    ok = all_ok and elapsed < 1.0
    report(7, ok, f"GF(5) and GF(7) runs reduce the rational result entrywise, {elapsed:.2f}s")
    assert all_ok
    assert elapsed < 1.0
