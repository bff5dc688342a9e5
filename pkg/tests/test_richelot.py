import random

import pytest

from superspecial.elliptic import two_torsion_model
from superspecial.field import FieldElement, Poly, build_quad_ext
from superspecial.genus2 import INF, SexticModel, clebsch_invariants, canonical_jacobian_key
from superspecial.graph import step_key
from superspecial.richelot import (
    GLUING_PERMS,
    PAIRINGS,
    RichelotError,
    apply_dual,
    hlp_glue,
    product_isogeny_codomain,
    product_kernels,
    quadratic_splittings,
    richelot_step,
    splitting_delta,
)


def _model_from_roots(field, values):
    roots = [FieldElement(field, (v, 0)) if isinstance(v, int) else v
             for v in values]
    poly = Poly.from_roots(field, roots)
    return SexticModel(field=field, poly=poly, points=tuple(roots))


def test_fifteen_splittings():
    fp2 = build_quad_ext(101)
    model = _model_from_roots(fp2, [0, 1, 3, 7, 19, 45])
    splittings = quadratic_splittings(model)
    assert len(splittings) == 15
    assert len(PAIRINGS) == 15
    for triple in splittings:
        prod = triple[0] * triple[1] * triple[2]
        assert prod.monic() == model.poly.monic()


def test_degree5_splittings_have_linear_factor():
    fp2 = build_quad_ext(101)
    roots = [FieldElement(fp2, (v, 0)) for v in (0, 1, 3, 7, 19)]
    model = SexticModel(field=fp2, poly=Poly.from_roots(fp2, roots),
                        points=tuple(roots) + (INF,))
    splittings = quadratic_splittings(model)
    assert len(splittings) == 15
    for triple in splittings:
        assert sorted(f.degree for f in triple) == [1, 2, 2]


def test_x6_minus_1_contains_rational_splitting():
    fp2 = build_quad_ext(11)
    from superspecial.field import find_roots

    pairs, fld = find_roots(Poly.from_ints(fp2, [-1, 0, 0, 0, 0, 0, 1]))
    model = SexticModel(field=fld, poly=Poly.from_ints(fld, [-1, 0, 0, 0, 0, 0, 1]),
                        points=tuple(r for r, _ in pairs))
    want = {Poly.from_ints(fld, [-1, 0, 1]), Poly.from_ints(fld, [1, 1, 1]),
            Poly.from_ints(fld, [1, -1, 1])}
    found = any({t[0], t[1], t[2]} == want for t in quadratic_splittings(model))
    assert found


def test_delta_examples():
    fp2 = build_quad_ext(101)
    # middle column all zero
    fs = [Poly.from_ints(fp2, [-1, 0, 1]), Poly.from_ints(fp2, [-4, 0, 1]),
          Poly.from_ints(fp2, [-9, 0, 1])]
    assert splitting_delta(*fs).is_zero()
    # direct 3x3 determinant expansion gives -4
    fs = [Poly.from_ints(fp2, [-1, 0, 1]), Poly.from_ints(fp2, [1, 1, 1]),
          Poly.from_ints(fp2, [1, -1, 1])]
    assert splitting_delta(*fs) == FieldElement(fp2, fp2.from_int(-4))
    # linearly dependent rows
    f1 = Poly.from_ints(fp2, [2, 3, 1])
    f2 = Poly.from_ints(fp2, [5, 1, 1])
    f3 = f1 + f2
    assert splitting_delta(f1, f2, f3).is_zero()


def test_richelot_identity_property_suite():
    """>= 10^4 non-split splittings over primes <= 41; the identity check
    inside richelot_step raises on any violation."""
    rng = random.Random(41)
    primes = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41]
    fields = {p: build_quad_ext(p) for p in primes}
    checked = 0
    while checked < 10500:
        p = primes[rng.randrange(len(primes))]
        fp2 = fields[p]
        pool = list(range(p)) if p > 6 else None
        vals = rng.sample(pool, 6)
        model = _model_from_roots(fp2, vals)
        for triple in quadratic_splittings(model):
            step = richelot_step(*triple)
            if step.kind == "jac":
                checked += 1  # identity verified inside richelot_step
    assert checked >= 10**4


def test_double_dual_round_trip_random():
    fp2 = build_quad_ext(101)
    rng = random.Random(7)
    for _ in range(20):
        vals = rng.sample(range(101), 6)
        model = _model_from_roots(fp2, vals)
        key0 = ("J",) + canonical_jacobian_key(*clebsch_invariants(model.poly))
        for triple in quadratic_splittings(model):
            step = richelot_step(*triple)
            back = apply_dual(step)
            assert step_key(back, fp2) == key0


def test_split_case_lambda_extension():
    """Dependent triples with irrational discriminant roots exercise the
    lambda-extension path; gluing the resulting factors back along the
    identity pairing recovers the original curve class.

    (Superspecial builds never need this path: the product factors of a
    split step are individually rational there.)
    """
    from superspecial.genus2 import weighted_projective_eq

    fp2 = build_quad_ext(11)
    rng = random.Random(3)
    count_ext = 0
    trials = 0
    while count_ext < 5 and trials < 500:
        trials += 1
        f1 = Poly(fp2, [(rng.randrange(11), rng.randrange(11)),
                        (rng.randrange(11), rng.randrange(11)), (1, 0)])
        f2 = Poly(fp2, [(rng.randrange(11), rng.randrange(11)),
                        (rng.randrange(11), rng.randrange(11)), (1, 0)])
        f3 = f1 + f2  # linear dependence forces delta = 0
        prod = f1 * f2 * f3
        if prod.degree != 6 or not prod.is_squarefree():
            continue
        step = richelot_step(f1, f2, f3)
        assert step.kind == "product"
        if getattr(step.e_roots[0].field, "k", 1) != 2:
            continue
        count_ext += 1
        back = apply_dual(step)
        assert back.kind == "jac"
        glued = back.triple[0] * back.triple[1] * back.triple[2]
        big = glued.field
        inv_back = clebsch_invariants(glued)
        inv_orig = clebsch_invariants(prod.lift_to(big))
        assert weighted_projective_eq(inv_orig, inv_back)
    assert count_ext == 5


def test_product_kernels_count():
    fp2 = build_quad_ext(13)
    e = two_torsion_model(FieldElement(fp2, (5, 0)))
    kernels = product_kernels(e, e)
    assert len(kernels) == 15
    assert sum(1 for k in kernels if k[0] == "prod") == 9
    assert sum(1 for k in kernels if k[0] == "glue") == 6
    assert len(GLUING_PERMS) == 6


def test_identity_gluing_of_square_is_loop():
    fp2 = build_quad_ext(13)
    e = two_torsion_model(FieldElement(fp2, (5, 0)))
    step = hlp_glue(e.roots, e.roots, (0, 1, 2))
    assert step.kind == "loop"


def test_gluing_round_trip():
    """Gluing two curves and then splitting along the dual kernel returns
    the unordered j-pair."""
    fp2 = build_quad_ext(13)
    ja = FieldElement(fp2, (5, 0))
    e1 = two_torsion_model(ja)
    # a second, non-isomorphic curve with rational 2-torsion
    from superspecial.elliptic import EllipticModel

    e2m = EllipticModel(fp2, tuple(FieldElement(fp2, (v, 0)) for v in (0, 1, 4)))
    want = sorted([ja.encode(), e2m.j_invariant().encode()])
    for pi in GLUING_PERMS:
        step = hlp_glue(e1.roots, e2m.roots, pi)
        assert step.kind == "jac"
        back = apply_dual(step)
        assert back.kind == "product"
        got = sorted([back.j_pair[0].encode(), back.j_pair[1].encode()])
        assert got == want


def test_product_steps_at_vertex():
    fp2 = build_quad_ext(13)
    e = two_torsion_model(FieldElement(fp2, (5, 0)))
    steps = [product_isogeny_codomain(k, e, e) for k in product_kernels(e, e)]
    assert len(steps) == 15
    for step in steps:
        back = apply_dual(step)
        assert step_key(back, fp2) == step_key(
            back, fp2)  # well-defined
        if step.kind == "product":
            # dual of a product isogeny returns the original square
            assert step_key(back, fp2) == ("P", (5, 0), (5, 0))


def test_non_squarefree_rejected():
    fp2 = build_quad_ext(101)
    f1 = Poly.from_ints(fp2, [-1, 0, 1])
    with pytest.raises(RichelotError):
        # repeated quadratic makes U^2, V^2 collapse
        richelot_step(f1, f1, Poly.from_ints(fp2, [-4, 0, 1]))
