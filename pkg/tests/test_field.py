import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superspecial.field import (
    ExtField,
    FieldElement,
    FieldError,
    Poly,
    PrimeField,
    build_quad_ext,
    extension,
    factor,
    find_roots,
    legendre,
    poly_gcd,
    roots_of_quadratic,
    square_root,
)


def test_quad_ext_nonresidues():
    # squares mod 7 are {1, 2, 4}, so the least nonresidue is 3
    assert build_quad_ext(7).nonresidue == 3
    # squares mod 11 are {1, 3, 4, 5, 9}
    assert build_quad_ext(11).nonresidue == 2


@pytest.mark.parametrize("p", [5, 4, 2, 9, 1])
def test_bad_primes_rejected(p):
    with pytest.raises(FieldError):
        PrimeField(p)


def test_prime_too_large_rejected():
    with pytest.raises(FieldError):
        PrimeField(2**31 + 11)


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_fp2_inverse_and_frobenius(c0, c1):
    field = build_quad_ext(101)
    a = FieldElement(field, (c0 % 101, c1 % 101))
    if not a.is_zero():
        assert a * a.inverse() == field.one()
    assert a.frobenius().frobenius() == a
    assert a.frobenius() == a**101


def test_extension_tower_embed_project():
    fp2 = build_quad_ext(11)
    ext = extension(fp2, 3)
    a = FieldElement(fp2, (4, 7))
    lifted = ext.embed(a)
    assert ext.project(lifted) == a
    assert ext.project(ext.gen()) is None
    assert extension(fp2, 1) is fp2  # degree 1 is the field itself


def test_encoding_little_endian():
    fp2 = build_quad_ext(13)
    assert FieldElement(fp2, (4, 9)).encode() == (4, 9)
    ext = extension(fp2, 2)
    e = ext.embed(FieldElement(fp2, (4, 9)))
    assert e.encode() == (4, 9, 0, 0)


def test_square_root_examples():
    f13 = PrimeField(13)
    r = square_root(f13.elem(4))
    assert r == f13.elem(2)  # canonical root is the least representative
    assert square_root(f13.elem(0)) == f13.elem(0)
    # squares mod 7 are {1, 2, 4}; 3 is a nonresidue
    assert square_root(PrimeField(7).elem(3)) is None


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_square_root_iff_euler(c0, c1):
    field = build_quad_ext(13)
    a = FieldElement(field, (c0 % 13, c1 % 13))
    r = square_root(a)
    if a.is_zero():
        assert r == field.zero()
    elif legendre(a) == 1:
        assert r is not None and r * r == a
    else:
        assert r is None


def test_roots_of_quadratic_sorted():
    f13 = PrimeField(13)
    rr = roots_of_quadratic(Poly.from_ints(f13, [-1, 0, 1]))  # x^2 - 1
    assert [r.encode() for r in rr] == [(1,), (12,)]
    assert roots_of_quadratic(Poly.from_ints(f13, [-2, 0, 1])) is None  # 2 is a NR


def test_find_roots_examples():
    f7 = PrimeField(7)
    pairs, fld = find_roots(Poly.from_ints(f7, [-1, 0, 1]))
    assert fld is f7
    assert sorted(r.encode()[0] for r, _ in pairs) == [1, 6]

    f11 = PrimeField(11)
    pairs, fld = find_roots(Poly.from_ints(f11, [1, 0, 1]))  # x^2 + 1
    assert fld is not f11 and fld.degree == 2  # -1 is a nonresidue mod 11
    assert len(pairs) == 2

    fp2 = build_quad_ext(11)
    pairs, fld = find_roots(Poly.from_ints(fp2, [-1, 0, 0, 0, 0, 0, 1]))  # x^6 - 1
    assert fld is fp2  # gcd(6, 11^2 - 1) = 6: all sixth roots of unity present
    assert len(pairs) == 6 and all(m == 1 for _, m in pairs)


def test_find_roots_multiplicity():
    f7 = PrimeField(7)
    f = Poly.from_roots(f7, [f7.elem(1), f7.elem(1), f7.elem(2)])
    pairs, _ = find_roots(f)
    assert [(r.encode()[0], m) for r, m in pairs] == [(1, 2), (2, 1)]


def test_poly_gcd_examples():
    f7 = PrimeField(7)
    x2m1 = Poly.from_ints(f7, [-1, 0, 1])
    xm1 = Poly.from_ints(f7, [-1, 1])
    assert poly_gcd(x2m1, xm1) == xm1
    zero = Poly.from_ints(f7, [0])
    assert poly_gcd(x2m1 * 3, zero) == x2m1  # monic scalar multiple
    # gcd(x^2 + 1, x^2 + x) = 1 over F_7
    assert poly_gcd(Poly.from_ints(f7, [1, 0, 1]),
                    Poly.from_ints(f7, [0, 1, 1])).degree == 0


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=3, max_size=7))
def test_find_roots_counts_degree(coeffs):
    f13 = PrimeField(13)
    f = Poly.from_ints(f13, coeffs + [1])  # monic, degree = len(coeffs)
    pairs, fld = find_roots(f)
    assert sum(m for _, m in pairs) == f.degree
    for r, _ in pairs:
        lifted = f.lift_to(fld) if fld is not f13 else f
        assert lifted.eval(r).is_zero()


def test_factor_deterministic():
    fp2 = build_quad_ext(11)
    f = Poly.from_ints(fp2, [3, 1, 4, 1, 5, 9, 1])
    assert factor(f, seed=7) == factor(f, seed=7)
    r1, _ = find_roots(f, seed=3)
    r2, _ = find_roots(f, seed=3)
    assert [(a.encode(), m) for a, m in r1] == [(a.encode(), m) for a, m in r2]


def test_ext_field_is_field():
    fp2 = build_quad_ext(7)
    ext = extension(fp2, 3)
    a = ext.gen() + ext.embed(FieldElement(fp2, (2, 5)))
    b = a * a - 3
    assert (b * b.inverse()) == ext.one()
    assert a**ext.order == a  # Fermat in the extension


def test_zero_division():
    f7 = PrimeField(7)
    with pytest.raises(ZeroDivisionError):
        f7.elem(0).inverse()
