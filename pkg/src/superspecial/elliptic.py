"""Supersingular elliptic curves over F_{p^2}.

Supersingularity testing via the vanishing of the degree-(p-1) Hasse-Witt
coefficient, enumeration of all supersingular j-invariants by an F_p scan
plus closure under 2-isogeny, split 2-torsion models, Velu 2-isogenies,
and the weighted elliptic graph Gamma_1(2; p).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import permutations

from .field import (
    FieldElement,
    FieldError,
    Poly,
    QuadExtField,
    _ts_nonresidue,
    build_quad_ext,
    factor,
    find_roots,
    roots_of_quadratic,
    square_root,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EllipticModel:
    """y^2 = (x - s1)(x - s2)(x - s3) with explicit 2-torsion x-coordinates."""

    field: object
    roots: tuple  # three distinct FieldElements

    def __post_init__(self):
        if len(self.roots) != 3 or len({r.encode() for r in self.roots}) != 3:
            raise FieldError("2-torsion model needs three distinct roots")

    def j_invariant(self) -> FieldElement:
        return j_from_roots(self.roots)


def j_from_roots(roots) -> FieldElement:
    """j-invariant from the three 2-torsion x-coordinates."""
    s1, s2, s3 = roots
    lam = (s3 - s1) / (s2 - s1)
    num = 256 * (lam * lam - lam + 1) ** 3
    den = lam * lam * (lam - 1) ** 2
    return num / den


def _weierstrass_from_j(j: FieldElement):
    """(A, B) with y^2 = x^3 + Ax + B of invariant j (any twist)."""
    field = j.field
    if j.is_zero():
        return field.zero(), FieldElement(field, field.from_int(-1))
    if j == 1728:
        return FieldElement(field, field.from_int(-1)), field.zero()
    c = j * (1728 - j).inverse()
    return 3 * c, 2 * c


def is_supersingular(j: FieldElement) -> bool:
    """Vanishing Hasse-Witt criterion: the coefficient of x^(p-1) in
    f(x)^((p-1)/2) is zero, for y^2 = f(x) a model with invariant j.

    For a 1x1 Hasse-Witt matrix the p^2-power composite vanishes exactly
    when the single entry does, so the test applies over F_{p^2} directly.
    The sum over the trinomial expansion costs O(p) field operations.
    """
    field = j.field
    p = field.characteristic
    A, B = _weierstrass_from_j(j)
    m = (p - 1) // 2
    # coefficient of x^(2m) in (x^3 + Ax + B)^m:
    #   sum over i of m!/(i! (2m-3i)! (2i-m)!) A^(2m-3i) B^(2i-m)
    fact = [1] * (m + 1)
    for n in range(2, m + 1):
        fact[n] = fact[n - 1] * n % p
    acc = field.zero()
    for i in range((m + 1) // 2, 2 * m // 3 + 1):
        ja, k = 2 * m - 3 * i, 2 * i - m
        coeff = fact[m] * pow(fact[i] * fact[ja] % p * fact[k] % p, p - 2, p) % p
        term = FieldElement(field, field.from_int(coeff))
        if ja:
            if A.is_zero():
                continue
            term = term * A**ja
        if k:
            if B.is_zero():
                continue
            term = term * B**k
        acc = acc + term
    return acc.is_zero()


def two_torsion_model(j: FieldElement, seed: int = 0) -> EllipticModel:
    """A model of invariant j with explicit 2-torsion, deterministic per j.

    Supersingular curves over F_{p^2} always admit a model with rational
    2-torsion; quadratic twisting only scales the 2-torsion x-coordinates,
    so it cannot repair a non-split cubic and is not retried.  If the cubic
    of the standard model fails to split (never expected for supersingular
    j), roots are taken in a degree-3 extension and the event is logged.

    The returned model is normalized to Frobenius = +p (trace 2p): product
    surfaces built from two models with opposite Frobenius signs are twists
    by 1 x [-1], whose gluing codomains acquire irrational branch points.
    """
    field = j.field
    if j.is_zero():
        one = field.one()
        zeta = roots_of_quadratic(Poly.from_ints(field, [1, 1, 1]))
        if zeta is None:
            raise FieldError("F_{p^2} must contain cube roots of unity")
        roots = [one, zeta[0], zeta[1]]
    elif j == 1728:
        roots = [field.zero(), field.one(), FieldElement(field, field.from_int(-1))]
    else:
        A, B = _weierstrass_from_j(j)
        cubic = Poly(field, [B.rep, A.rep, field.from_int(0), field.from_int(1)])
        factors = factor(cubic, seed=seed)
        if all(g.degree == 1 for g, _ in factors):
            roots = [-g[0] for g, _ in factors]
        else:
            log.warning("2-torsion cubic of j=%s not split over %r; using extension",
                        j.encode(), field)
            pairs, big = find_roots(cubic, seed=seed)
            roots = sorted([r for r, _ in pairs], key=lambda r: r.encode())
            return EllipticModel(big, tuple(roots))
    model = EllipticModel(field, tuple(sorted(roots, key=lambda r: r.encode())))
    if frobenius_scalar_sign(model) < 0:
        d = _ts_nonresidue(field)
        roots = sorted([d * r for r in model.roots], key=lambda r: r.encode())
        model = EllipticModel(field, tuple(roots))
        if frobenius_scalar_sign(model) < 0:
            raise FieldError("quadratic twist failed to flip the Frobenius sign")
    return model


def _cubic_coeffs(roots):
    """(a2, a4, a6) with (x-s1)(x-s2)(x-s3) = x^3 + a2 x^2 + a4 x + a6."""
    s1, s2, s3 = roots
    return (-(s1 + s2 + s3), s1 * s2 + s1 * s3 + s2 * s3, -(s1 * s2 * s3))


def _point_add(P, Q, a2, a4):
    """Affine addition on y^2 = x^3 + a2 x^2 + a4 x + a6; None = identity."""
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 == -y2:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - a2 - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def _scalar_mul(n, P, a2, a4):
    acc = None
    add = P
    while n:
        if n & 1:
            acc = _point_add(acc, add, a2, a4)
        add = _point_add(add, add, a2, a4)
        n >>= 1
    return acc


def frobenius_scalar_sign(model: EllipticModel) -> int:
    """+1 when the F_{p^2}-Frobenius acts as +p, -1 for -p.

    Supersingular curves with rational 2-torsion have pi = [+-p]; the sign
    is read off one non-torsion rational point P by comparing [p]P with P.
    """
    field = model.field
    p = field.characteristic
    a2, a4, a6 = _cubic_coeffs(model.roots)
    f = Poly(field, [a6.rep, a4.rep, a2.rep, field.from_int(1)])
    i = 0
    while True:
        x = FieldElement(field, field.nth_element(i))
        i += 1
        y2 = f.eval(x)
        if y2.is_zero():
            continue
        y = square_root(y2)
        if y is None:
            continue
        Q = _scalar_mul(p, (x, y), a2, a4)
        if Q == (x, y):
            return 1
        if Q == (x, -y):
            return -1
        raise FieldError("Frobenius is not the scalar +-p (unexpected trace)")


def velu_two_isogeny(model: EllipticModel, kernel_index: int):
    """Quotient by the 2-torsion point (roots[kernel_index], 0).

    Returns (codomain j, dual data), where the dual data is the translated
    codomain curve y^2 = x(x^2 + a'x + b') on which x = 0 generates the
    kernel of the dual isogeny.
    """
    s = model.roots
    sk = s[kernel_index]
    si, sj = (s[i] for i in range(3) if i != kernel_index)
    a = si + sj - 2 * sk
    b = (si - sk) * (sj - sk)
    ad, bd = -2 * a, a * a - 4 * b
    return _j_of_two_torsion_curve(ad, bd), (ad, bd)


def _j_of_two_torsion_curve(a, b) -> FieldElement:
    """j-invariant of y^2 = x(x^2 + ax + b)."""
    num = 256 * (a * a - 3 * b) ** 3
    den = b * b * (a * a - 4 * b)
    return num / den


def velu_dual_j(dual_data) -> FieldElement:
    """Apply the dual kernel x = 0 on the stored codomain; returns the
    original j (the composite is multiplication by 2)."""
    a, b = dual_data
    return _j_of_two_torsion_curve(-2 * a, a * a - 4 * b)


def affine_stabilizer(model: EllipticModel):
    """Permutations of the 2-torsion roots realized by x -> ux + r.

    Every affine symmetry of the branch triple extends to a curve
    automorphism over the algebraic closure, so this is the reduced
    automorphism group action on the 2-torsion: trivial generically,
    order 2 for j = 1728, order 3 for j = 0.
    """
    s = model.roots
    out = []
    for perm in permutations(range(3)):
        t = [s[perm[i]] for i in range(3)]
        den = s[0] - s[1]
        u = (t[0] - t[1]) / den
        if u.is_zero():
            continue
        r = t[0] - u * s[0]
        if u * s[2] + r == t[2]:
            out.append(perm)
    return sorted(out)


@dataclass
class SupersingularSet:
    """All supersingular j-invariants over F_{p^2}, split by RA class."""

    p: int
    field: QuadExtField
    j_list: list          # discovery order (scan + closure), deterministic
    eps1: int
    eps3: int
    n_generic: int

    @property
    def total(self) -> int:
        return len(self.j_list)


def expected_counts(p: int):
    """(N_p, eps1, eps3) from the supersingular count formula."""
    eps1 = 1 if p % 4 == 3 else 0
    eps3 = 1 if p % 3 == 2 else 0
    n12 = (p - 1) - 6 * eps1 - 4 * eps3
    if n12 % 12 != 0:
        raise FieldError(f"N_p formula not integral at p={p}")
    return n12 // 12, eps1, eps3


def enumerate_supersingular(p: int, seed: int = 0) -> SupersingularSet:
    """Scan j in F_p for supersingular invariants, then close under
    2-isogeny over F_{p^2}; validates the count formula."""
    field = build_quad_ext(p)
    found = []
    seen = set()
    for n in range(p):
        j = FieldElement(field, field.from_int(n))
        if is_supersingular(j):
            found.append(j)
            seen.add(j.encode())
    if not found:
        raise FieldError(f"no supersingular j in F_{p} (impossible for prime p)")
    queue = list(found)
    while queue:
        j = queue.pop(0)
        model = two_torsion_model(j, seed=seed)
        for k in range(3):
            jc, _ = velu_two_isogeny(model, k)
            if jc.encode() not in seen:
                seen.add(jc.encode())
                found.append(jc)
                queue.append(jc)
    n_exp, eps1, eps3 = expected_counts(p)
    j0 = field.zero()
    j1728 = FieldElement(field, field.from_int(1728))
    n_generic = sum(1 for j in found if j != j0 and j != j1728)
    has0 = any(j == j0 for j in found)
    has1728 = any(j == j1728 for j in found)
    if (n_generic, int(has0), int(has1728)) != (n_exp, eps3, eps1):
        raise FieldError(
            f"supersingular census mismatch at p={p}: found "
            f"({n_generic}, {int(has0)}, {int(has1728)}), "
            f"expected ({n_exp}, {eps3}, {eps1})")
    return SupersingularSet(p, field, found, eps1, eps3, n_generic)


def elliptic_ra_order(j: FieldElement) -> int:
    """Order of RA(E) = Aut(E)/<-1>: 1 generic, 3 for j=0, 2 for j=1728."""
    if j.is_zero():
        return 3
    if j == 1728:
        return 2
    return 1


def build_gamma1(p: int, seed: int = 0):
    """The weighted elliptic 2-isogeny graph Gamma_1(2; p).

    Vertices are supersingular j-invariants; the three kernels at each
    vertex are grouped into edges by the orbit of the reduced automorphism
    action on the 2-torsion, so every out-weight sum equals 3.
    """
    from .graph import EdgeRecord, SuperspecialGraph, VertexRecord

    ss = enumerate_supersingular(p, seed=seed)
    vertices = {}
    key_to_id = {}
    for i, j in enumerate(ss.j_list):
        key = ("E", j.encode())
        ra = elliptic_ra_order(j)
        ra_type = {1: "E", 3: "E0", 2: "E1728"}[ra]
        model = two_torsion_model(j, seed=seed)
        vertices[i] = VertexRecord(id=i, key=key, kind="elliptic",
                                   ra_type=ra_type, ra_order=ra, model=model)
        key_to_id[key] = i
    edges = []
    for vid, rec in vertices.items():
        model = rec.model
        perms = affine_stabilizer(model)
        if len(perms) != rec.ra_order:
            raise FieldError(
                f"elliptic RA mismatch at j={rec.key}: stabilizer {len(perms)}, "
                f"expected {rec.ra_order}")
        codomains = []
        for k in range(3):
            jc, dual = velu_two_isogeny(model, k)
            codomains.append((("E", jc.encode()), dual))
        remaining = set(range(3))
        while remaining:
            k0 = min(remaining)
            orbit = {k0}
            frontier = [k0]
            while frontier:
                k = frontier.pop()
                for perm in perms:
                    k2 = perm[k]
                    if k2 not in orbit:
                        orbit.add(k2)
                        frontier.append(k2)
            remaining -= orbit
            key, dual = codomains[k0]
            for k in orbit:
                if codomains[k][0] != key:
                    raise FieldError("orbit members disagree on codomain")
            edges.append(EdgeRecord(src=vid, dst=key_to_id[key],
                                    weight=len(orbit),
                                    kernels=tuple(sorted(orbit)),
                                    dual=("velu", dual)))
    return SuperspecialGraph(p=p, kind="elliptic", vertices=vertices,
                             edges=edges, seed_description=f"gamma1({p})")
