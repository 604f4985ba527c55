"""Graded-commutative rings over Z with per-generator additive torsion.

Elements are signed sums of sorted monomials in named generators; odd-degree
generators square to zero and anticommute, and the coefficient of a monomial
is reduced modulo the minimum additive order among its generators.  That is
exactly enough structure to re-derive, by machine, every pullback and
differential identity the classification rests on: Bockstein Leibniz
expansions, automorphism pullbacks on degree-4 classes, and the
transgression-style third differentials of the relevant central extensions.

Sign conventions, fixed project-wide: sorting two odd generators past each
other flips the sign, and a degree-shift-1 derivation D satisfies
D(ab) = D(a) b + (-1)^|a| a D(b).
"""

from dataclasses import dataclass
from itertools import product

from .modular import units
from .report import CheckResult


@dataclass(frozen=True)
class Generator:
    label: str
    degree: int
    order: int  # additive order, a prime power
    bockstein: str | None = None  # label of beta(gen), if declared


class RingPresentation:
    """Named graded generators with torsion and optional Bockstein targets."""

    def __init__(self, generators, p: int):
        self.p = p
        self.gens = tuple(generators)
        self.by_label = {g.label: g for g in self.gens}
        if len(self.by_label) != len(self.gens):
            raise ValueError("duplicate generator labels")
        self._sort_key = {g.label: (g.degree, g.label) for g in self.gens}

    def degree(self, label: str) -> int:
        return self.by_label[label].degree

    def monomial_order(self, mon: tuple[str, ...]) -> int:
        if not mon:
            return 0  # untwisted Z coefficient
        return min(self.by_label[l].order for l in mon)

    def sort_with_sign(self, labels) -> tuple[tuple[str, ...], int] | None:
        """Sort by (degree, label) with Koszul signs; None if an odd label repeats."""
        arr = list(labels)
        sign = 1
        key = self._sort_key
        for i in range(1, len(arr)):
            j = i
            while j > 0 and key[arr[j - 1]] > key[arr[j]]:
                if self.degree(arr[j - 1]) % 2 and self.degree(arr[j]) % 2:
                    sign = -sign
                arr[j - 1], arr[j] = arr[j], arr[j - 1]
                j -= 1
        for a, b in zip(arr, arr[1:]):
            if a == b and self.degree(a) % 2:
                return None
        return tuple(arr), sign

    # -- element constructors ------------------------------------------------

    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    def element(self, terms: dict) -> "GradedElement":
        out: dict[tuple[str, ...], int] = {}
        for mon, coeff in terms.items():
            norm = self.sort_with_sign(tuple(mon))
            if norm is None:
                continue
            smon, sign = norm
            out[smon] = out.get(smon, 0) + sign * coeff
        return GradedElement(self, out)

    def gen(self, label: str, coeff: int = 1) -> "GradedElement":
        if label not in self.by_label:
            raise KeyError(label)
        return self.element({(label,): coeff})

    def monomial(self, *labels, coeff: int = 1) -> "GradedElement":
        return self.element({tuple(labels): coeff})

    def bockstein_map(self) -> "GeneratorMap":
        images = {}
        for g in self.gens:
            images[g.label] = self.gen(g.bockstein) if g.bockstein else self.zero()
        return derivation(self, images, shift=1, validate=False)


class GradedElement:
    """Signed sum of sorted monomials; no zero coefficients stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingPresentation, terms: dict):
        self.ring = ring
        clean = {}
        for mon, coeff in terms.items():
            order = ring.monomial_order(mon)
            if order:
                coeff %= order
            if coeff:
                clean[mon] = coeff
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, *labels) -> int:
        norm = self.ring.sort_with_sign(tuple(labels))
        if norm is None:
            return 0
        mon, sign = norm
        return sign * self.terms.get(mon, 0)

    def degree(self) -> int | None:
        """Common degree of all monomials, None for 0, error if inhomogeneous."""
        degs = {sum(self.ring.degree(l) for l in mon) for mon in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element of degrees {sorted(degs)}")
        return degs.pop()

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "GradedElement") -> "GradedElement":
        if self.ring is not other.ring:
            raise ValueError("elements from different presentations")
        out = dict(self.terms)
        for mon, c in other.terms.items():
            out[mon] = out.get(mon, 0) + c
        return GradedElement(self.ring, out)

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "GradedElement":
        if not isinstance(scalar, int):
            return NotImplemented
        return GradedElement(self.ring, {m: scalar * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        if self.ring is not other.ring:
            raise ValueError("elements from different presentations")
        out: dict[tuple[str, ...], int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                norm = self.ring.sort_with_sign(m1 + m2)
                if norm is None:
                    continue
                mon, sign = norm
                out[mon] = out.get(mon, 0) + sign * c1 * c2
        return GradedElement(self.ring, out)

    def __eq__(self, other):
        return (
            isinstance(other, GradedElement)
            and self.ring is other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mon in sorted(self.terms):
            c = self.terms[mon]
            body = "*".join(mon) if mon else "1"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


class GeneratorMap:
    """A ring map (multiplicative) or graded derivation, given on generators."""

    def __init__(self, ring: RingPresentation, images: dict, kind: str, shift: int = 0):
        if kind not in ("ring", "derivation"):
            raise ValueError(kind)
        self.ring = ring
        self.images = images
        self.kind = kind
        self.shift = shift

    def __call__(self, el: GradedElement) -> GradedElement:
        if self.kind == "ring":
            return self._apply_ring(el)
        return self._apply_derivation(el)

    def _image_of(self, label: str) -> GradedElement:
        if label in self.images:
            return self.images[label]
        if self.kind == "ring":
            return self.ring.gen(label)
        return self.ring.zero()

    def _apply_ring(self, el: GradedElement) -> GradedElement:
        out = self.ring.zero()
        for mon, coeff in el.terms.items():
            part = self.ring.element({(): 1}) if not mon else None
            for label in mon:
                img = self._image_of(label)
                part = img if part is None else part * img
            out = out + coeff * part
        return out

    def _apply_derivation(self, el: GradedElement) -> GradedElement:
        out = self.ring.zero()
        for mon, coeff in el.terms.items():
            prefix_degree = 0
            for idx, label in enumerate(mon):
                img = self._image_of(label)
                if not img.is_zero():
                    sign = -1 if (self.shift % 2 and prefix_degree % 2) else 1
                    piece = self.ring.element({mon[:idx]: 1}) * img * self.ring.element({mon[idx + 1:]: 1})
                    out = out + (sign * coeff) * piece
                prefix_degree += self.ring.degree(label)
        return out


def ring_map(ring: RingPresentation, images: dict[str, GradedElement]) -> GeneratorMap:
    """Degree- and torsion-preserving map of presentations, extended multiplicatively."""
    for label, img in images.items():
        gen = ring.by_label[label]
        if not img.is_zero() and img.degree() != gen.degree:
            raise ValueError(f"image of {label} has wrong degree")
        if not (gen.order * img).is_zero():
            raise ValueError(f"image of {label} has additive order above {gen.order}")
    return GeneratorMap(ring, images, "ring")


def derivation(
    ring: RingPresentation, images: dict[str, GradedElement], shift: int = 1, validate: bool = True
) -> GeneratorMap:
    """Graded derivation raising degree by ``shift``, extended by Leibniz."""
    if validate:
        for label, img in images.items():
            gen = ring.by_label[label]
            if not img.is_zero() and img.degree() != gen.degree + shift:
                raise ValueError(f"derivation image of {label} has wrong degree")
    return GeneratorMap(ring, images, "derivation", shift)


def bockstein(el: GradedElement) -> GradedElement:
    """Leibniz extension of the declared generator Bocksteins."""
    return el.ring.bockstein_map()(el)


# ---------------------------------------------------------------------------
# standard presentations used across the classification


def exterior_bockstein_ring(n: int, p: int, x: str = "x", y: str = "y") -> RingPresentation:
    """x_1..x_n in degree 1 with beta(x_i) = y_i in degree 2, all of order p."""
    gens = []
    for i in range(1, n + 1):
        gens.append(Generator(f"{x}{i}", 1, p, bockstein=f"{y}{i}"))
        gens.append(Generator(f"{y}{i}", 2, p))
    return RingPresentation(gens, p)


def heisenberg_base_ring(p: int) -> RingPresentation:
    """w_1, w_2 (degree 1, beta -> z_i), z_1, z_2, and the fiber class t (degree 2)."""
    gens = [
        Generator("w1", 1, p, bockstein="z1"),
        Generator("w2", 1, p, bockstein="z2"),
        Generator("z1", 2, p),
        Generator("z2", 2, p),
        Generator("t", 2, p),
    ]
    return RingPresentation(gens, p)


def kunneth_uv_ring(p: int) -> RingPresentation:
    """u (order p) and v (order p^2), both in degree 2."""
    return RingPresentation([Generator("u", 2, p), Generator("v", 2, p * p)], p)


def cyclic_s_ring(p: int) -> RingPresentation:
    return RingPresentation([Generator("s", 2, p**3)], p)


def r_gamma_ring(p: int) -> RingPresentation:
    """r of order p^2 and gam of order p, both in degree 2."""
    return RingPresentation([Generator("r", 2, p * p), Generator("gam", 2, p)], p)


def fiber_extension_ring(p: int) -> RingPresentation:
    """Base classes x1, x2, y1, y2 plus a degree-2 fiber class y3 of order p."""
    gens = [
        Generator("x1", 1, p, bockstein="y1"),
        Generator("x2", 1, p, bockstein="y2"),
        Generator("y1", 2, p),
        Generator("y2", 2, p),
        Generator("y3", 2, p),
    ]
    return RingPresentation(gens, p)


# ---------------------------------------------------------------------------
# the identity suite


def _gl2(p: int):
    for a, b, c, d in product(range(p), repeat=4):
        if (a * d - b * c) % p:
            yield a, b, c, d


def verify_identity_suite(p: int = 3, max_tuples: int = 4000) -> list[CheckResult]:
    """Re-derive every printed pullback/differential identity symbolically.

    Parametrized identities run over all parameter tuples when there are at
    most ``max_tuples`` of them, and over a deterministic stride sample
    otherwise.  Returns one check per identity.
    """
    checks: list[CheckResult] = []

    def add(name, ok, detail=""):
        checks.append(CheckResult(name, bool(ok), detail))

    def sample(seq):
        seq = list(seq)
        if len(seq) <= max_tuples:
            return seq
        stride = len(seq) // max_tuples + 1
        return seq[::stride]

    # -- product group Z/p^2 x Z/p: pullbacks on u^2, uv, v^2 ---------------
    R = kunneth_uv_ring(p)
    u, v = R.gen("u"), R.gen("v")
    tuples = sample(
        [(i, j, k, l) for i in units(p * p) for j in range(p) for k in range(p) for l in units(p)]
    )
    bad = {"u2": None, "uv": None, "v2": None}
    for (i, j, k, l) in tuples:
        rho = ring_map(R, {"u": l * u + (p * j) * v, "v": k * u + i * v})
        if rho(u * u) != (l * l) * (u * u) and bad["u2"] is None:
            bad["u2"] = (i, j, k, l)
        expect_uv = (l * k) * (u * u) + (i * l) * (u * v) + (p * i * j) * (v * v)
        if rho(u * v) != expect_uv and bad["uv"] is None:
            bad["uv"] = (i, j, k, l)
        expect_v2 = (k * k) * (u * u) + (2 * i * k) * (u * v) + (i * i) * (v * v)
        if rho(v * v) != expect_v2 and bad["v2"] is None:
            bad["v2"] = (i, j, k, l)
    for key, label in (("u2", "u^2"), ("uv", "uv"), ("v2", "v^2")):
        detail = f"{len(tuples)} tuples" if bad[key] is None else f"first failure at (i,j,k,l)={bad[key]}"
        add(f"product_group.pullback.{label}", bad[key] is None, detail)

    # -- Heisenberg: GL(2,p) pullbacks on chi, z1^2, z2^2, z1z2 --------------
    H = heisenberg_base_ring(p)
    w1, w2, z1, z2, t = (H.gen(l) for l in ("w1", "w2", "z1", "z2", "t"))
    chi = t * w1 * w2
    ok_chi = ok_z1 = ok_z2 = ok_z12 = ok_wlin = True
    mats = sample(list(_gl2(p)))
    for (a, b, c, d) in mats:
        det = (a * d - b * c) % p
        m = ring_map(
            H,
            {
                "w1": a * w1 + c * w2,
                "w2": b * w1 + d * w2,
                "z1": a * z1 + c * z2,
                "z2": b * z1 + d * z2,
                "t": det * t,
            },
        )
        ok_chi &= m(chi) == (det * det) * chi
        ok_z1 &= m(z1 * z1) == (a * a) * (z1 * z1) + (2 * a * c) * (z1 * z2) + (c * c) * (z2 * z2)
        ok_z2 &= m(z2 * z2) == (b * b) * (z1 * z1) + (2 * b * d) * (z1 * z2) + (d * d) * (z2 * z2)
        ok_z12 &= m(z1 * z2) == (a * b) * (z1 * z1) + (a * d + b * c) * (z1 * z2) + (c * d) * (z2 * z2)
        ok_wlin &= m(bockstein(w1 * w2)) == bockstein(m(w1 * w2))
    add("heisenberg.pullback.chi", ok_chi, f"{len(mats)} matrices")
    add("heisenberg.pullback.z1^2", ok_z1, f"{len(mats)} matrices")
    add("heisenberg.pullback.z2^2", ok_z2, f"{len(mats)} matrices")
    add("heisenberg.pullback.z1z2", ok_z12, f"{len(mats)} matrices")
    add("heisenberg.pullback.commutes_with_bockstein", ok_wlin, f"{len(mats)} matrices")

    # -- Heisenberg central extension: d3 generated by t -> beta(w1 w2) ------
    kappa = w1 * w2
    d3 = derivation(H, {"t": bockstein(kappa)}, shift=1)
    add("heisenberg.d3.t^2", d3(t * t) == 2 * (t * bockstein(kappa)), "Leibniz on t^2")
    add("heisenberg.d3.t*w1", bockstein(kappa * w1).is_zero(), "beta(w1*w2*w1) = 0")
    add("heisenberg.d3.t*w2", bockstein(kappa * w2).is_zero(), "beta(w1*w2*w2) = 0")
    add("heisenberg.d3.t*w1w2", bockstein(kappa * kappa).is_zero(), "beta((w1*w2)^2) = 0")
    tz1 = bockstein(kappa * z1)
    tz2 = bockstein(kappa * z2)
    add("heisenberg.d3.t*z1", (not tz1.is_zero()) and tz1 == bockstein(kappa) * z1, repr(tz1))
    add("heisenberg.d3.t*z2", (not tz2.is_zero()) and tz2 == bockstein(kappa) * z2, repr(tz2))

    # -- extraspecial group of exponent p^2: unit action and shear action ----
    Q = r_gamma_ring(p)
    r, gam = Q.gen("r"), Q.gen("gam")
    delta = p * (r * r)  # order-p class p*r^2
    ok_delta = True
    for i in units(p * p):
        rho = ring_map(Q, {"r": i * r})
        ok_delta &= rho(delta) == (i * i) * delta and rho(gam * gam) == gam * gam
    add("order_p2_extension.pullback.unit_action", ok_delta, f"{len(units(p*p))} units")
    tau = ring_map(Q, {"gam": gam + p * r})
    add(
        "order_p2_extension.pullback.shear_on_gamma^2",
        tau(gam * gam) == gam * gam,
        "cross term 2p*r*gam and p^2*r^2 both die by torsion",
    )
    add("order_p2_extension.pullback.shear_on_delta", tau(delta) == delta)

    # -- elementary abelian: Bockstein expansions ----------------------------
    E = exterior_bockstein_ring(3, p)
    x1, x2, x3 = (E.gen(f"x{i}") for i in (1, 2, 3))
    y1, y2, y3 = (E.gen(f"y{i}") for i in (1, 2, 3))
    expected = y1 * x2 * x3 - x1 * (y2 * x3) + x1 * x2 * y3
    add("elem_abelian.bockstein.x1x2x3", bockstein(x1 * x2 * x3) == expected, repr(expected))
    add("elem_abelian.bockstein.x2x3", bockstein(x2 * x3) == y2 * x3 - x2 * y3)
    add("elem_abelian.bockstein.squares_to_zero", bockstein(bockstein(x1 * x2 * x3)).is_zero())
    add("elem_abelian.bockstein.on_y1^2", bockstein(y1 * y1).is_zero())

    # determinant twist on the triple product, for a transvection and a cycle
    shear = ring_map(E, {"x1": x1 + x2, "y1": y1 + y2})
    cycle = ring_map(
        E, {"x1": x2, "x2": x3, "x3": x1, "y1": y2, "y2": y3, "y3": y1}
    )
    swap = ring_map(E, {"x1": x2, "x2": x1, "y1": y2, "y2": y1})
    beta123 = bockstein(x1 * x2 * x3)
    add("elem_abelian.pullback.det_twist.shear", shear(beta123) == beta123, "det = 1")
    add("elem_abelian.pullback.det_twist.cycle", cycle(beta123) == beta123, "det = 1")
    add("elem_abelian.pullback.det_twist.swap", swap(beta123) == -1 * beta123, "det = -1")

    # -- second differential of the split-off p^2 factor ----------------------
    d2 = derivation(E, {"x2": y1}, shift=1)
    add("product_group_fiber.d2.beta_x2x3", d2(bockstein(x2 * x3)) == -1 * (y1 * y3))
    add("product_group_fiber.d2.x1_beta_x2x3", d2(x1 * bockstein(x2 * x3)) == x1 * y1 * y3)

    # -- rank-2 base with order-p fiber: d3(y3 * P) = beta(kappa * P) --------
    F = fiber_extension_ring(p)
    fx1, fx2, fy1, fy2, fy3 = (F.gen(l) for l in ("x1", "x2", "y1", "y2", "y3"))
    kappas = {
        "y1": fy1,
        "x1x2": fx1 * fx2,
        "y2+x1x2": fy2 + fx1 * fx2,
    }
    # kappa = x1x2 spares exactly 1, x1, x2 and x1x2 in the checked spans
    kap = kappas["x1x2"]
    add("rank2_base.d3.x1x2.kills_y3", not bockstein(kap).is_zero())
    add("rank2_base.d3.x1x2.spares_y3x1", bockstein(kap * fx1).is_zero())
    add("rank2_base.d3.x1x2.spares_y3x1x2", bockstein(kap * (fx1 * fx2)).is_zero())
    add("rank2_base.d3.x1x2.kills_y3y1", not bockstein(kap * fy1).is_zero())
    # kappa = y1 spares y3 and the y-multiples, kills the x-multiples
    kap = kappas["y1"]
    add("rank2_base.d3.y1.spares_y3", bockstein(kap).is_zero())
    add("rank2_base.d3.y1.y3x1_to_y1^2", bockstein(kap * fx1) == fy1 * fy1)
    add("rank2_base.d3.y1.y3x2_to_y1y2", bockstein(kap * fx2) == fy1 * fy2)
    add("rank2_base.d3.y1.spares_y3y2", bockstein(kap * fy2).is_zero())
    # kappa = y2 + x1x2: kernel on the (2,2) cell is spanned by y2 - x1x2
    kap = kappas["y2+x1x2"]
    add("rank2_base.d3.y2+x1x2.kills_y3", not bockstein(kap).is_zero())
    add(
        "rank2_base.d3.y2+x1x2.spares_y3(y2-x1x2)",
        bockstein(kap * (fy2 - fx1 * fx2)).is_zero(),
    )
    add("rank2_base.d3.y2+x1x2.kills_y3y1", not bockstein(kap * fy1).is_zero())
    # d3 on the fiber square: Leibniz with d3(y3) = beta(kappa)
    for name, kap in kappas.items():
        dd = derivation(F, {"y3": bockstein(kap)}, shift=1)
        add(
            f"rank2_base.d3.y3^2.{name}",
            dd(fy3 * fy3) == 2 * (fy3 * bockstein(kap)),
            "Leibniz on the fiber square",
        )

    return checks
