"""The fifteen (2,2)-isogenies out of a vertex.

Jacobian side: quadratic splittings of the defining sextic, Richelot
codomains (with the two-variable polynomial identity checked exactly on
every non-split step), and the split case delivering an elliptic product.
Product side: the nine product kernels via Velu and the six gluing kernels
via the Howe-Leprevost-Poonen formulas, with isomorphism-induced gluings
detected as loops.  Every step carries the dual-kernel data needed for
round-trip verification.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import permutations

from .elliptic import EllipticModel, j_from_roots, velu_dual_j, velu_two_isogeny
from .field import ExtField, FieldElement, FieldError, Poly, roots_of_quadratic
from .genus2 import INF

log = logging.getLogger(__name__)


class RichelotError(FieldError):
    """Degenerate data in an isogeny-step computation."""


@dataclass
class IsogenyStep:
    """Outcome of one kernel: codomain description plus dual-kernel data.

    kind "jac": codomain is Jac(y^2 = G1*G2*G3); the triple is also the
    kernel of the dual isogeny.  kind "product": codomain is the elliptic
    pair with the given 2-torsion root triples, index-matched so that the
    identity pairing is the dual gluing kernel.  kind "loop": the kernel
    quotient is isomorphic to the source product surface.
    """

    kind: str
    provenance: object          # which of the 15 kernels
    triple: tuple = None        # (G1, G2, G3) Poly, for kind "jac"
    e_roots: tuple = None       # 2-torsion x-triple of E, for kind "product"
    e2_roots: tuple = None      # 2-torsion x-triple of E', index-matched
    velu_dual: tuple = None     # ((a,b), (a',b')) translated models, K_{i,j} steps
    j_pair: tuple = None        # j-invariants, kinds "product" and "loop"


def perfect_matchings6():
    """The 15 pairings of {0..5} in deterministic lexicographic order."""
    out = []

    def rec(remaining, acc):
        if not remaining:
            out.append(tuple(acc))
            return
        first = remaining[0]
        for other in remaining[1:]:
            rest = [i for i in remaining if i not in (first, other)]
            rec(rest, acc + [(first, other)])

    rec(list(range(6)), [])
    return out


PAIRINGS = perfect_matchings6()
PAIRING_INDEX = {m: i for i, m in enumerate(PAIRINGS)}


def pairing_key(pairs) -> tuple:
    """Canonical form of a pairing: pairs sorted, each pair sorted."""
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


def quadratic_splittings(model):
    """All 15 quadratic splittings of a sextic model, in pairing order.

    Each splitting is the triple of monic quadratics (one linear when a
    pair contains the branch point at infinity) whose product recovers the
    defining polynomial up to a constant.
    """
    field = model.field
    points = model.points
    if len(points) != 6:
        raise RichelotError("need exactly six branch points")
    out = []
    for pairing in PAIRINGS:
        polys = []
        for (i, j) in pairing:
            pi, pj = points[i], points[j]
            if pi is INF and pj is INF:
                raise RichelotError("duplicate point at infinity")
            if pi is INF or pj is INF:
                r = pj if pi is INF else pi
                polys.append(Poly(field, [(-r).rep, field.from_int(1)]))
            else:
                polys.append(Poly.from_roots(field, [pi, pj]))
        out.append(tuple(polys))
    return out


def _coeff3(f: Poly):
    """(c0, c1, c2) of a degree <= 2 polynomial."""
    return f[0], f[1], f[2]


def splitting_delta(F1: Poly, F2: Poly, F3: Poly) -> FieldElement:
    """3x3 determinant of the splitting's coefficient rows."""
    rows = [_coeff3(F) for F in (F1, F2, F3)]
    (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = rows
    return (a0 * (b1 * c2 - b2 * c1)
            - a1 * (b0 * c2 - b2 * c0)
            + a2 * (b0 * c1 - b1 * c0))


IDENTITY_CHECKS = 0  # running count of verified non-split steps


def _check_richelot_identity(fs, gs):
    """F1(x1)G1(x2) + F2(x1)G2(x2) + F3(x1)G3(x2) + (x1 - x2)^2 = 0,
    checked coefficientwise in exact field arithmetic."""
    global IDENTITY_CHECKS
    IDENTITY_CHECKS += 1
    field = fs[0].field
    zero = field.zero()
    corr = {(2, 0): 1, (1, 1): -2, (0, 2): 1}
    for d1 in range(3):
        for d2 in range(3):
            acc = zero
            for F, G in zip(fs, gs):
                acc = acc + F[d1] * G[d2]
            acc = acc + corr.get((d1, d2), 0)
            if not acc.is_zero():
                raise RichelotError("Richelot identity violated")


def richelot_step(F1: Poly, F2: Poly, F3: Poly, provenance=None) -> IsogenyStep:
    """Quotient of Jac(y^2 = F1*F2*F3) by the splitting's kernel.

    Nonzero delta: Richelot's algorithm, codomain y^2 = G1*G2*G3 with the
    G-triple the dual kernel.  Zero delta: the codomain is an elliptic
    product, computed via the discriminant roots of F1 + lambda*F2 without
    leaving the smallest field containing them.
    """
    delta = splitting_delta(F1, F2, F3)
    if not delta.is_zero():
        dinv = delta.inverse()
        fs = (F1, F2, F3)
        gs = []
        for i in range(3):
            Fj, Fk = fs[(i + 1) % 3], fs[(i + 2) % 3]
            gs.append((Fj.derivative() * Fk - Fk.derivative() * Fj) * dinv)
        _check_richelot_identity(fs, gs)
        return IsogenyStep(kind="jac", provenance=provenance, triple=tuple(gs))
    return _split_step(F1, F2, F3, provenance)


def _split_step(F1, F2, F3, provenance) -> IsogenyStep:
    field = F1.field
    # order the triple so the first two are genuine quadratics
    triple = sorted((F1, F2, F3), key=lambda f: -f.degree)
    Fa, Fb, Fc = triple
    if Fb.degree != 2:
        raise RichelotError("split case needs two quadratic factors")
    a1, b1, c1 = Fa[2], Fa[1], Fa[0]
    a2, b2, c2 = Fb[2], Fb[1], Fb[0]
    # disc(Fa + l*Fb) as a quadratic in l; leading coeff = disc(Fb) != 0
    d2 = b2 * b2 - 4 * a2 * c2
    d1 = 2 * b1 * b2 - 4 * (a1 * c2 + a2 * c1)
    d0 = b1 * b1 - 4 * a1 * c1
    disc_poly = Poly(field, [d0.rep, d1.rep, d2.rep])
    if disc_poly.degree != 2:
        raise RichelotError("degenerate discriminant in split case")
    lam = roots_of_quadratic(disc_poly)
    if lam is not None:
        if lam[0] == lam[1]:
            raise RichelotError("repeated lambda root (non-squarefree sextic?)")
        l1, l2 = lam
        ext = field
        lifted = [Fa, Fb, Fc]
    else:
        ext = ExtField(field, disc_poly.monic().coeffs)
        l1 = ext.gen()
        l2 = ext.embed(-(d1 / d2)) - l1
        lifted = [f.lift_to(ext) for f in (Fa, Fb, Fc)]
        Fa, Fb, Fc = lifted
    # W1 = U^2 and W2 = V^2 as coefficient triples; no square roots needed
    W1 = tuple(Fa[k] + l1 * Fb[k] for k in range(3))
    W2 = tuple(Fa[k] + l2 * Fb[k] for k in range(3))
    coords = [(0, 2), (0, 1), (1, 2)]
    for (u, v) in coords:
        det = W1[u] * W2[v] - W1[v] * W2[u]
        if not det.is_zero():
            break
    else:
        raise RichelotError("U^2, V^2 failed to span (degenerate splitting)")
    dinv = det.inverse()
    alphas, betas = [], []
    for F in lifted:
        fu, fv = F[u], F[v]
        alf = (fu * W2[v] - fv * W2[u]) * dinv
        bet = (W1[u] * fv - W1[v] * fu) * dinv
        k3 = ({0, 1, 2} - {u, v}).pop()
        if alf * W1[k3] + bet * W2[k3] != F[k3]:
            raise RichelotError("inconsistent alpha/beta decomposition")
        if alf.is_zero() or bet.is_zero():
            raise RichelotError("perfect-square factor in squarefree sextic")
        alphas.append(alf)
        betas.append(bet)
    e_roots = tuple(-b / a for a, b in zip(alphas, betas))
    e2_roots = tuple(-a / b for a, b in zip(alphas, betas))
    return IsogenyStep(kind="product", provenance=provenance,
                       e_roots=e_roots, e2_roots=e2_roots,
                       j_pair=(j_from_roots(e_roots), j_from_roots(e2_roots)))


# ---------------------------------------------------------------------------
# product-side kernels

GLUING_PERMS = tuple(sorted(permutations(range(3))))


def product_kernels(e: EllipticModel, e2: EllipticModel):
    """The 15 kernel labels of E x E': nine products K_{i,j} and six
    2-Weil anti-isometries K_pi, in deterministic order."""
    labels = [("prod", i, j) for i in range(3) for j in range(3)]
    labels += [("glue", pi) for pi in GLUING_PERMS]
    return labels


def product_isogeny_codomain(kernel, e: EllipticModel, e2: EllipticModel) -> IsogenyStep:
    """Codomain of one product-vertex kernel.

    K_{i,j}: Velu on both factors.  K_pi: Howe-Leprevost-Poonen gluing,
    a loop when the anti-isometry is induced by an isomorphism E -> E'
    (detected by the vanishing of the degeneracy sums).
    """
    if kernel[0] == "prod":
        _, i, j = kernel
        ji, duali = velu_two_isogeny(e, i)
        jj, dualj = velu_two_isogeny(e2, j)
        return IsogenyStep(kind="product", provenance=kernel,
                           j_pair=(ji, jj), velu_dual=(duali, dualj))
    _, pi = kernel
    return hlp_glue(e.roots, e2.roots, pi, provenance=kernel)


def hlp_glue(roots, roots2, pi, provenance=None) -> IsogenyStep:
    """Glue two elliptic curves along the anti-isometry P_i -> P'_{pi(i)}.

    Returns the Jacobian step with defining splitting {F1, F2, F3} (the
    dual kernel), or a loop step when the anti-isometry is induced by an
    isomorphism of the factors.
    """
    field = roots[0].field
    al = roots
    be = tuple(roots2[pi[i]] for i in range(3))
    a2 = al[0] * (be[2] - be[1]) + al[1] * (be[0] - be[2]) + al[2] * (be[1] - be[0])
    b2 = be[0] * (al[2] - al[1]) + be[1] * (al[0] - al[2]) + be[2] * (al[1] - al[0])
    if a2.is_zero() or b2.is_zero():
        if a2.is_zero() != b2.is_zero():
            log.warning("gluing degeneracy: a2 zero is %s but b2 zero is %s",
                        a2.is_zero(), b2.is_zero())
        return IsogenyStep(kind="loop", provenance=provenance,
                           j_pair=(j_from_roots(roots), j_from_roots(roots2)))
    a1 = ((al[2] - al[1]) ** 2 / (be[2] - be[1])
          + (al[1] - al[0]) ** 2 / (be[1] - be[0])
          + (al[0] - al[2]) ** 2 / (be[0] - be[2]))
    b1 = ((be[2] - be[1]) ** 2 / (al[2] - al[1])
          + (be[1] - be[0]) ** 2 / (al[1] - al[0])
          + (be[0] - be[2]) ** 2 / (al[0] - al[2]))
    dp = ((be[1] - be[2]) * (be[0] - be[2]) * (be[0] - be[1])) ** 2
    dm = ((al[1] - al[2]) * (al[0] - al[2]) * (al[0] - al[1])) ** 2
    A = dp * a1 / a2
    B = dm * b1 / b2
    fs = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        x2 = A * (al[j] - al[i]) * (al[i] - al[k])
        z2 = B * (be[j] - be[i]) * (be[i] - be[k])
        fs.append(Poly(field, [z2.rep, field.from_int(0), x2.rep]))
    # curve is y^2 = -F1*F2*F3: fold the sign into the third factor so the
    # stored triple multiplies out to the defining polynomial
    fs[2] = -fs[2]
    return IsogenyStep(kind="jac", provenance=provenance, triple=tuple(fs))


def apply_dual(step: IsogenyStep) -> IsogenyStep:
    """Apply the stored dual kernel at the codomain of a step.

    The result is a step whose own codomain must be the original source
    vertex; used by the round-trip checks.
    """
    if step.kind == "jac":
        return richelot_step(*step.triple)
    if step.kind == "product":
        if step.velu_dual is not None:
            j1 = velu_dual_j(step.velu_dual[0])
            j2 = velu_dual_j(step.velu_dual[1])
            return IsogenyStep(kind="product", provenance=None, j_pair=(j1, j2))
        return hlp_glue(step.e_roots, step.e2_roots, (0, 1, 2))
    if step.kind == "loop":
        return step
    raise RichelotError(f"unknown step kind {step.kind}")
