"""Finitely presented (Hopf) algebras attached to a multilinear form.

Five constructions, all with n x n matric generator families and exact
rational coefficients:

* ``build_bw``  -- the universal bialgebra preserving the form: one relation
  per index tuple forcing w to be a comodule map.
* ``build_hw``  -- the universal Hopf version for a preregular form: a
  generator matrix u, its right inverse s, a twisted inverse relation built
  from the twisting element Q, and the form-preservation relations on u.
* ``build_hb``  -- the bilinear (arity 2) presentation with the relations
  written through the matrix b and its inverse.
* ``build_hww`` -- the single-matrix presentation that uses a polar tensor of
  the form to express the antipode polynomially.
* ``build_ahmn`` -- the quantum-permutation-flavored presentation with
  row/column annihilation and m-th power sum relations.

Every structural claim (counit, coproduct, antipode, derived identities,
homomorphisms) is checked by reduction against a degree-truncated rewriting
system; an item whose polynomial exceeds the certified degree reports
UNCERTIFIED rather than silently recompleting at a higher bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .exactnum import Matrix, ONE, Scalar, ZERO, mat_inv
from .forms import (
    MultilinearForm,
    analyze,
    in_polar,
    is_one_site_nondegenerate,
    make_orthogonal,
    make_signature,
)
from .ncalg import (
    Alphabet,
    Generator,
    NcPoly,
    TensorSquare,
    coproduct_image,
    matric_family,
    substitute,
)
from .rewrite import RewriteSystem, complete, normal_form

Idx = tuple[int, ...]


class Status(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNCERTIFIED = "UNCERTIFIED"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: Status
    detail: str = ""


def all_pass(results: Iterable[CheckResult]) -> bool:
    return all(r.status is Status.PASS for r in results)


def worst_status(results: Iterable[CheckResult]) -> Status:
    seen = {r.status for r in results}
    if Status.FAIL in seen:
        return Status.FAIL
    if Status.UNCERTIFIED in seen:
        return Status.UNCERTIFIED
    return Status.PASS


@dataclass
class HopfStructure:
    delta: dict[Generator, TensorSquare]
    counit: dict[Generator, Scalar]
    antipode: dict[Generator, NcPoly] | None


@dataclass
class Provenance:
    form: MultilinearForm | None = None
    q: Matrix | None = None
    polar_member: MultilinearForm | None = None


@dataclass
class Presentation:
    kind: str
    n: int
    m: int
    alphabet: Alphabet
    generators: tuple[Generator, ...]
    relations: tuple[NcPoly, ...]
    relation_labels: tuple[str, ...]
    structure: HopfStructure | None = None
    provenance: Provenance | None = None

    def label(self) -> str:
        return f"{self.kind}[n={self.n},m={self.m}]"

    def families(self) -> tuple[str, ...]:
        fams = []
        for g in self.generators:
            if g.family != "free" and g.family not in fams:
                fams.append(g.family)
        return tuple(fams)


def default_degree(m: int) -> int:
    """Default truncation: twice the arity (covers the derived-identity
    certificates, which pair an arity-m relation with m inverse letters)."""
    return 2 * m


class _RelationBag:
    """Collects relations in construction order, dropping zero polynomials
    and exact duplicates."""

    def __init__(self) -> None:
        self.polys: list[NcPoly] = []
        self.labels: list[str] = []
        self._seen: set = set()

    def add(self, label: str, poly: NcPoly) -> None:
        if poly.is_zero():
            return
        key = frozenset(poly.terms.items())
        if key in self._seen:
            return
        self._seen.add(key)
        self.polys.append(poly)
        self.labels.append(label)


def _idx_label(name: str, idx: Iterable[int]) -> str:
    return f"{name}[{','.join(str(i) for i in idx)}]"


def _matric_delta(alphabet: Alphabet, family: str, n: int) -> dict[Generator, TensorSquare]:
    """Matric coproduct; the s family splits with flipped tensor factors."""
    out = {}
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            g = Generator(family, r, c)
            terms = {}
            for k in range(1, n + 1):
                if family == "s":
                    pair = (
                        alphabet.word([Generator(family, k, c)]),
                        alphabet.word([Generator(family, r, k)]),
                    )
                else:
                    pair = (
                        alphabet.word([Generator(family, r, k)]),
                        alphabet.word([Generator(family, k, c)]),
                    )
                terms[pair] = ONE
            out[g] = TensorSquare(alphabet, terms)
    return out


def _delta_counit(alphabet: Alphabet, families: Sequence[str], n: int):
    delta: dict[Generator, TensorSquare] = {}
    counit: dict[Generator, Scalar] = {}
    for fam in families:
        delta.update(_matric_delta(alphabet, fam, n))
        for r in range(1, n + 1):
            for c in range(1, n + 1):
                counit[Generator(fam, r, c)] = ONE if r == c else ZERO
    return delta, counit


def _form_preservation(
    bag: _RelationBag,
    alphabet: Alphabet,
    w: MultilinearForm,
    family: str,
    label: str,
    *,
    lower_is_free: bool = True,
) -> None:
    """Relations sum_L w_L g^{L1}_{M1}...g^{Lm}_{Mm} - w_M, one per tuple M.

    With ``lower_is_free`` False the roles swap: the *upper* indices are the
    free tuple M and the lower ones are contracted against w.
    """
    n, m = w.dim, w.arity
    for mu in itertools.product(range(1, n + 1), repeat=m):
        terms: dict[str, Scalar] = {}
        for lam, c in w.entries.items():
            if lower_is_free:
                gens = [Generator(family, lam[i], mu[i]) for i in range(m)]
            else:
                gens = [Generator(family, mu[i], lam[i]) for i in range(m)]
            word = alphabet.word(gens)
            terms[word] = terms.get(word, ZERO) + c
        const = terms.get("", ZERO) - w[mu]
        if const:
            terms[""] = const
        else:
            terms.pop("", None)
        bag.add(_idx_label(label, mu), NcPoly(alphabet, terms))


def build_bw(w: MultilinearForm) -> Presentation:
    """Universal bialgebra preserving ``w`` (one-site nondegeneracy required)."""
    if not is_one_site_nondegenerate(w):
        raise ValueError("form fails one-site nondegeneracy")
    n, m = w.dim, w.arity
    gens = matric_family("a", n)
    alphabet = Alphabet(gens)
    bag = _RelationBag()
    _form_preservation(bag, alphabet, w, "a", "form")
    delta, counit = _delta_counit(alphabet, ("a",), n)
    return Presentation(
        kind="bw",
        n=n,
        m=m,
        alphabet=alphabet,
        generators=tuple(gens),
        relations=tuple(bag.polys),
        relation_labels=tuple(bag.labels),
        structure=HopfStructure(delta, counit, None),
        provenance=Provenance(form=w),
    )


def build_hw(w: MultilinearForm) -> Presentation:
    """Universal Hopf algebra of a preregular form.

    Generators u, s; relations: u s = 1 entrywise, the Q-twisted product
    (Q u Q^{-1}) s = 1, and form preservation on u.  The twisting element is
    recomputed from the form here, never taken on trust.
    """
    report = analyze(w)
    if not report.preregular:
        raise ValueError("form is not preregular")
    q = report.q
    qi = mat_inv(q)
    n, m = w.dim, w.arity
    gens = matric_family("u", n) + matric_family("s", n)
    alphabet = Alphabet(gens)
    bag = _RelationBag()
    rng = range(1, n + 1)
    for mu in rng:
        for nu in rng:
            terms: dict[str, Scalar] = {}
            for lam in rng:
                word = alphabet.word([Generator("u", mu, lam), Generator("s", lam, nu)])
                terms[word] = terms.get(word, ZERO) + ONE
            terms[""] = terms.get("", ZERO) - (ONE if mu == nu else ZERO)
            bag.add(_idx_label("us", (mu, nu)), NcPoly(alphabet, terms))
    for mu in rng:
        for nu in rng:
            terms = {}
            for lam in rng:
                qe = q.entry(lam - 1, nu - 1)
                if not qe:
                    continue
                for rho in rng:
                    for sig in rng:
                        qie = qi.entry(sig - 1, rho - 1)
                        if not qie:
                            continue
                        word = alphabet.word(
                            [Generator("u", rho, lam), Generator("s", mu, sig)]
                        )
                        terms[word] = terms.get(word, ZERO) + qe * qie
            terms[""] = terms.get("", ZERO) - (ONE if mu == nu else ZERO)
            bag.add(_idx_label("tus", (mu, nu)), NcPoly(alphabet, terms))
    _form_preservation(bag, alphabet, w, "u", "invw")
    delta, counit = _delta_counit(alphabet, ("u", "s"), n)
    antipode: dict[Generator, NcPoly] = {}
    for mu in rng:
        for nu in rng:
            antipode[Generator("u", mu, nu)] = NcPoly.from_gens(
                alphabet, [Generator("s", mu, nu)]
            )
            sterms: dict[str, Scalar] = {}
            for rho in rng:
                qie = qi.entry(mu - 1, rho - 1)
                if not qie:
                    continue
                for lam in rng:
                    qe = q.entry(lam - 1, nu - 1)
                    if not qe:
                        continue
                    word = alphabet.word([Generator("u", rho, lam)])
                    sterms[word] = sterms.get(word, ZERO) + qie * qe
            antipode[Generator("s", mu, nu)] = NcPoly(alphabet, sterms)
    return Presentation(
        kind="hw",
        n=n,
        m=m,
        alphabet=alphabet,
        generators=tuple(gens),
        relations=tuple(bag.polys),
        relation_labels=tuple(bag.labels),
        structure=HopfStructure(delta, counit, antipode),
        provenance=Provenance(form=w, q=q),
    )


def build_hb(b: MultilinearForm) -> Presentation:
    """Arity-2 universal Hopf algebra written through b and its inverse."""
    if b.arity != 2:
        raise ValueError("this presentation needs a bilinear form")
    n = b.dim
    bm = Matrix(n, n, [b[(i, j)] for i in range(1, n + 1) for j in range(1, n + 1)])
    binv = mat_inv(bm)  # singular b is rejected here
    gens = matric_family("u", n)
    alphabet = Alphabet(gens)
    bag = _RelationBag()
    rng = range(1, n + 1)
    for lam in rng:
        for rho in rng:
            terms: dict[str, Scalar] = {}
            for mu in rng:
                for nu in rng:
                    c = bm.entry(mu - 1, nu - 1)
                    if not c:
                        continue
                    word = alphabet.word([Generator("u", mu, lam), Generator("u", nu, rho)])
                    terms[word] = terms.get(word, ZERO) + c
            const = terms.get("", ZERO) - bm.entry(lam - 1, rho - 1)
            if const:
                terms[""] = const
            else:
                terms.pop("", None)
            bag.add(_idx_label("bst", (lam, rho)), NcPoly(alphabet, terms))
    for lam in rng:
        for rho in rng:
            terms = {}
            for mu in rng:
                for nu in rng:
                    c = binv.entry(mu - 1, nu - 1)
                    if not c:
                        continue
                    word = alphabet.word([Generator("u", lam, mu), Generator("u", rho, nu)])
                    terms[word] = terms.get(word, ZERO) + c
            const = terms.get("", ZERO) - binv.entry(lam - 1, rho - 1)
            if const:
                terms[""] = const
            else:
                terms.pop("", None)
            bag.add(_idx_label("binst", (lam, rho)), NcPoly(alphabet, terms))
    delta, counit = _delta_counit(alphabet, ("u",), n)
    antipode = {}
    for mu in rng:
        for nu in rng:
            sterms: dict[str, Scalar] = {}
            for lam in rng:
                ce = binv.entry(mu - 1, lam - 1)
                if not ce:
                    continue
                for rho in rng:
                    de = bm.entry(rho - 1, nu - 1)
                    if not de:
                        continue
                    word = alphabet.word([Generator("u", rho, lam)])
                    sterms[word] = sterms.get(word, ZERO) + ce * de
            antipode[Generator("u", mu, nu)] = NcPoly(alphabet, sterms)
    return Presentation(
        kind="hb",
        n=n,
        m=2,
        alphabet=alphabet,
        generators=tuple(gens),
        relations=tuple(bag.polys),
        relation_labels=tuple(bag.labels),
        structure=HopfStructure(delta, counit, antipode),
        provenance=Provenance(form=b),
    )


def _polar_antipode_images(
    alphabet: Alphabet, w: MultilinearForm, wt: MultilinearForm, family: str
) -> dict[Generator, NcPoly]:
    """S(g^mu_nu) = sum wt^{mu,L} w_{R,nu} g^{R1}_{L1}...g^{R_{m-1}}_{L_{m-1}}."""
    n, m = w.dim, w.arity
    out = {}
    for mu in range(1, n + 1):
        for nu in range(1, n + 1):
            terms: dict[str, Scalar] = {}
            for lidx, c1 in wt.entries.items():
                if lidx[0] != mu:
                    continue
                lam = lidx[1:]
                for ridx, c2 in w.entries.items():
                    if ridx[m - 1] != nu:
                        continue
                    rho = ridx[: m - 1]
                    gens = [Generator(family, rho[i], lam[i]) for i in range(m - 1)]
                    word = alphabet.word(gens)
                    terms[word] = terms.get(word, ZERO) + c1 * c2
            out[Generator(family, mu, nu)] = NcPoly(alphabet, terms)
    return out


def build_hww(w: MultilinearForm, wt: MultilinearForm) -> Presentation:
    """Single-matrix presentation from a form and a member of its polar
    family; the polar membership is verified exactly before building."""
    report = analyze(w)
    if not report.preregular:
        raise ValueError("form is not preregular")
    if not in_polar(wt, w):
        raise ValueError("tensor is not in the polar affine space of the form")
    n, m = w.dim, w.arity
    gens = matric_family("v", n)
    alphabet = Alphabet(gens)
    bag = _RelationBag()
    _form_preservation(bag, alphabet, w, "v", "wv")
    _form_preservation(bag, alphabet, wt, "v", "wtv", lower_is_free=False)
    delta, counit = _delta_counit(alphabet, ("v",), n)
    antipode = _polar_antipode_images(alphabet, w, wt, "v")
    return Presentation(
        kind="hww",
        n=n,
        m=m,
        alphabet=alphabet,
        generators=tuple(gens),
        relations=tuple(bag.polys),
        relation_labels=tuple(bag.labels),
        structure=HopfStructure(delta, counit, antipode),
        provenance=Provenance(form=w, q=report.q, polar_member=wt),
    )


def build_ahmn(m: int, n: int) -> Presentation:
    """Row/column annihilation plus m-th power-sum relations on one matric
    family; the antipode transposes and raises to the (m-1)-st power."""
    if m < 2 or n < 2:
        raise ValueError("need m >= 2 and n >= 2")
    gens = matric_family("a", n)
    alphabet = Alphabet(gens)
    bag = _RelationBag()
    rng = range(1, n + 1)
    for mu in rng:
        for lam in rng:
            for nu in rng:
                if lam == nu:
                    continue
                bag.add(
                    _idx_label("rowzero", (mu, lam, nu)),
                    NcPoly.from_gens(
                        alphabet, [Generator("a", mu, lam), Generator("a", mu, nu)]
                    ),
                )
    for mu in rng:
        for lam in rng:
            for nu in rng:
                if lam == nu:
                    continue
                bag.add(
                    _idx_label("colzero", (mu, lam, nu)),
                    NcPoly.from_gens(
                        alphabet, [Generator("a", lam, mu), Generator("a", nu, mu)]
                    ),
                )
    for mu in rng:
        terms: dict[str, Scalar] = {"": -ONE}
        for lam in rng:
            word = alphabet.word([Generator("a", mu, lam)] * m)
            terms[word] = terms.get(word, ZERO) + ONE
        bag.add(_idx_label("rowpow", (mu,)), NcPoly(alphabet, terms))
    for mu in rng:
        terms = {"": -ONE}
        for lam in rng:
            word = alphabet.word([Generator("a", lam, mu)] * m)
            terms[word] = terms.get(word, ZERO) + ONE
        bag.add(_idx_label("colpow", (mu,)), NcPoly(alphabet, terms))
    delta, counit = _delta_counit(alphabet, ("a",), n)
    antipode = {}
    for mu in rng:
        for nu in rng:
            antipode[Generator("a", mu, nu)] = NcPoly.from_gens(
                alphabet, [Generator("a", nu, mu)] * (m - 1)
            )
    return Presentation(
        kind="ahmn",
        n=n,
        m=m,
        alphabet=alphabet,
        generators=tuple(gens),
        relations=tuple(bag.polys),
        relation_labels=tuple(bag.labels),
        structure=HopfStructure(delta, counit, antipode),
        provenance=None,
    )


# ---------------------------------------------------------------------------
# checks


def system_for(pres: Presentation, degree: int, on_progress=None) -> RewriteSystem:
    return complete(list(pres.relations), degree, on_progress=on_progress)


def check_counit(pres: Presentation) -> list[CheckResult]:
    """The counit must send every relation to 0 (pure scalar arithmetic)."""
    eps = pres.structure.counit
    out = []
    for label, rel in zip(pres.relation_labels, pres.relations):
        val = ZERO
        for word, c in rel.terms.items():
            f = c
            for g in pres.alphabet.letters(word):
                f *= eps[g]
                if not f:
                    break
            val += f
        out.append(
            CheckResult(
                f"counit:{label}",
                Status.PASS if val == 0 else Status.FAIL,
                "" if val == 0 else f"counit value {val}",
            )
        )
    return out


class _TensorReducer:
    """Componentwise normal form on tensor squares, with a per-run cache of
    word normal forms."""

    def __init__(self, system: RewriteSystem) -> None:
        self.system = system
        self.cache: dict[str, NcPoly] = {}

    def word_nf(self, word: str) -> NcPoly:
        hit = self.cache.get(word)
        if hit is None:
            hit = normal_form(
                NcPoly.from_word(self.system.alphabet, word), self.system
            )
            self.cache[word] = hit
        return hit

    def reduce(self, t: TensorSquare) -> TensorSquare:
        out: dict[tuple[str, str], Scalar] = {}
        for (w1, w2), c in t.terms.items():
            p1 = self.word_nf(w1)
            p2 = self.word_nf(w2)
            for a, ca in p1.terms.items():
                for b, cb in p2.terms.items():
                    k = (a, b)
                    nv = out.get(k, ZERO) + c * ca * cb
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return TensorSquare(t.alphabet, out)


def check_coproduct(
    pres: Presentation, degree: int, system: RewriteSystem | None = None
) -> list[CheckResult]:
    """Each relation's coproduct image must vanish componentwise modulo the
    ideal (certified at the system's completed degree)."""
    if system is None:
        system = system_for(pres, degree)
    red = _TensorReducer(system)
    out = []
    for label, rel in zip(pres.relation_labels, pres.relations):
        if rel.degree() > system.complete_through:
            out.append(
                CheckResult(
                    f"coproduct:{label}",
                    Status.UNCERTIFIED,
                    f"needs degree {rel.degree()}, certified {system.complete_through}",
                )
            )
            continue
        t = coproduct_image(rel, pres.structure.delta, target=pres.alphabet)
        reduced = red.reduce(t)
        out.append(
            CheckResult(
                f"coproduct:{label}",
                Status.PASS if reduced.is_zero() else Status.FAIL,
                "" if reduced.is_zero() else f"residue {reduced.to_str()}",
            )
        )
    return out


def _nf_verdict(
    name: str, poly: NcPoly, system: RewriteSystem
) -> CheckResult:
    if poly.degree() > system.complete_through:
        return CheckResult(
            name,
            Status.UNCERTIFIED,
            f"needs degree {poly.degree()}, certified {system.complete_through}",
        )
    nf = normal_form(poly, system)
    if nf.is_zero():
        return CheckResult(name, Status.PASS)
    return CheckResult(name, Status.FAIL, f"normal form {nf.to_str()}")


def check_antipode(
    pres: Presentation, degree: int, system: RewriteSystem | None = None
) -> list[CheckResult]:
    """Antipode images must respect the ideal antimultiplicatively and
    satisfy both unit sums on every matric generator family."""
    s_images = pres.structure.antipode
    if s_images is None:
        raise ValueError("presentation has no antipode data")
    if system is None:
        system = system_for(pres, degree)
    out = []
    for label, rel in zip(pres.relation_labels, pres.relations):
        img = substitute(rel, s_images, antihom=True, target=pres.alphabet)
        out.append(_nf_verdict(f"antipode-ideal:{label}", img, system))
    rng = range(1, pres.n + 1)
    for fam in pres.families():
        for mu in rng:
            for nu in rng:
                left = NcPoly.zero(pres.alphabet)
                right = NcPoly.zero(pres.alphabet)
                for lam in rng:
                    left = left + s_images[Generator(fam, mu, lam)] * NcPoly.from_gens(
                        pres.alphabet, [Generator(fam, lam, nu)]
                    )
                    right = right + NcPoly.from_gens(
                        pres.alphabet, [Generator(fam, mu, lam)]
                    ) * s_images[Generator(fam, lam, nu)]
                d = NcPoly.unit(pres.alphabet, ONE if mu == nu else ZERO)
                out.append(
                    _nf_verdict(
                        _idx_label(f"antipode-left:{fam}", (mu, nu)), left - d, system
                    )
                )
                out.append(
                    _nf_verdict(
                        _idx_label(f"antipode-right:{fam}", (mu, nu)), right - d, system
                    )
                )
    return out


def hopf_axiom_suite(
    pres: Presentation, degree: int, system: RewriteSystem | None = None
) -> list[CheckResult]:
    """Counit + coproduct (+ antipode when present) in one report."""
    if system is None:
        system = system_for(pres, degree)
    out = check_counit(pres)
    out += check_coproduct(pres, degree, system)
    if pres.structure.antipode is not None:
        out += check_antipode(pres, degree, system)
    return out


def check_left_inverse_identity(
    pres: Presentation,
    wt: MultilinearForm,
    degree: int,
    system: RewriteSystem | None = None,
) -> list[CheckResult]:
    """In the bialgebra of the form, the polar tensor provides an explicit
    left inverse for the generator matrix: for each (mu, nu),
    sum wt^{mu,L} w_{R,sig} a^{R1}_{L1}...a^{R_{m-1}}_{L_{m-1}} a^{sig}_{nu}
    must reduce to delta^mu_nu."""
    w = pres.provenance.form
    fam = pres.families()[0]
    if not in_polar(wt, w):
        raise ValueError("tensor is not in the polar affine space of the form")
    if system is None:
        system = system_for(pres, degree)
    n, m = w.dim, w.arity
    out = []
    for mu in range(1, n + 1):
        for nu in range(1, n + 1):
            terms: dict[str, Scalar] = {}
            for lidx, c1 in wt.entries.items():
                if lidx[0] != mu:
                    continue
                lam = lidx[1:]
                for ridx, c2 in w.entries.items():
                    rho, sig = ridx[: m - 1], ridx[m - 1]
                    gens = [Generator(fam, rho[i], lam[i]) for i in range(m - 1)]
                    gens.append(Generator(fam, sig, nu))
                    word = pres.alphabet.word(gens)
                    terms[word] = terms.get(word, ZERO) + c1 * c2
            terms[""] = terms.get("", ZERO) - (ONE if mu == nu else ZERO)
            out.append(
                _nf_verdict(
                    _idx_label("leftinv", (mu, nu)),
                    NcPoly(pres.alphabet, terms),
                    system,
                )
            )
    return out


def derived_relations_suite(
    pres: Presentation,
    wt: MultilinearForm | None,
    degree: int,
    system: RewriteSystem | None = None,
) -> list[CheckResult]:
    """Consequences of the defining relations of the u/s presentation.

    Always checked: the reversed form-preservation on s, the two-sided and
    twisted-two-sided inverse identities, and (when a polar tensor is given)
    the closed formulas expressing s through u and back.  For arity >= 3 the
    two-generator reduction identity is included; for the alternating and the
    fully diagonal instances the suite adds their special consequences
    (column/commutator exchange relations, and s as a power of u).
    """
    if pres.kind != "hw":
        raise ValueError("derived relations are stated for the u/s presentation")
    w = pres.provenance.form
    q = pres.provenance.q
    qi = mat_inv(q)
    n, m = pres.n, pres.m
    A = pres.alphabet
    if system is None:
        system = system_for(pres, degree)
    rng = range(1, n + 1)
    out: list[CheckResult] = []

    # reversed form preservation on s: sum_M w_M s^{Mm}_{Nm}...s^{M1}_{N1} = w_N
    for nu in itertools.product(rng, repeat=m):
        terms: dict[str, Scalar] = {}
        for lam, c in w.entries.items():
            gens = [Generator("s", lam[m - 1 - i], nu[m - 1 - i]) for i in range(m)]
            word = A.word(gens)
            terms[word] = terms.get(word, ZERO) + c
        terms[""] = terms.get("", ZERO) - w[nu]
        out.append(_nf_verdict(_idx_label("sinw", nu), NcPoly(A, terms), system))

    # s is also a left inverse: sum_r s^mu_r u^r_nu = delta
    for mu in rng:
        for nu in rng:
            terms = {}
            for rho in rng:
                word = A.word([Generator("s", mu, rho), Generator("u", rho, nu)])
                terms[word] = terms.get(word, ZERO) + ONE
            terms[""] = terms.get("", ZERO) - (ONE if mu == nu else ZERO)
            out.append(_nf_verdict(_idx_label("su", (mu, nu)), NcPoly(A, terms), system))

    # twisted left inverse: sum s^l_nu Q^t_l u^r_t (Q^{-1})^mu_r = delta
    for mu in rng:
        for nu in rng:
            terms = {}
            for lam in rng:
                for tau in rng:
                    qe = q.entry(tau - 1, lam - 1)
                    if not qe:
                        continue
                    for rho in rng:
                        qie = qi.entry(mu - 1, rho - 1)
                        if not qie:
                            continue
                        word = A.word([Generator("s", lam, nu), Generator("u", rho, tau)])
                        terms[word] = terms.get(word, ZERO) + qe * qie
            terms[""] = terms.get("", ZERO) - (ONE if mu == nu else ZERO)
            out.append(_nf_verdict(_idx_label("tsu", (mu, nu)), NcPoly(A, terms), system))

    if wt is not None:
        if not in_polar(wt, w):
            raise ValueError("tensor is not in the polar affine space of the form")
        # s through u: s^mu_nu = sum wt^{mu,L} w_{R,nu} u^{R1}_{L1}...u^{R_{m-1}}_{L_{m-1}}
        images = _polar_antipode_images(A, w, wt, "u")
        for mu in rng:
            for nu in rng:
                poly = NcPoly.from_gens(A, [Generator("s", mu, nu)]) - images[
                    Generator("u", mu, nu)
                ]
                out.append(_nf_verdict(_idx_label("Rsu", (mu, nu)), poly, system))
        # twisted u through s: sum Q^t_nu u^r_t (Qi)^mu_r
        #   = sum wt^{mu,L} w_{R,nu} s^{R_{m-1}}_{L_{m-1}}...s^{R1}_{L1}
        for mu in rng:
            for nu in rng:
                terms = {}
                for tau in rng:
                    qe = q.entry(tau - 1, nu - 1)
                    if not qe:
                        continue
                    for rho in rng:
                        qie = qi.entry(mu - 1, rho - 1)
                        if not qie:
                            continue
                        word = A.word([Generator("u", rho, tau)])
                        terms[word] = terms.get(word, ZERO) + qe * qie
                for lidx, c1 in wt.entries.items():
                    if lidx[0] != mu:
                        continue
                    lam = lidx[1:]
                    for ridx, c2 in w.entries.items():
                        if ridx[m - 1] != nu:
                            continue
                        rho = ridx[: m - 1]
                        gens = [
                            Generator("s", rho[m - 2 - i], lam[m - 2 - i])
                            for i in range(m - 1)
                        ]
                        word = A.word(gens)
                        terms[word] = terms.get(word, ZERO) - c1 * c2
                out.append(_nf_verdict(_idx_label("Rus", (mu, nu)), NcPoly(A, terms), system))

    if m >= 3:
        out += _pair_reduction_checks(pres, system)

    if w == make_signature(3):
        out += _manin_checks(pres, system)

    if w == make_orthogonal(n, m):
        out += _power_antipode_checks(pres, system)

    return out


def _pair_reduction_checks(
    pres: Presentation, system: RewriteSystem
) -> list[CheckResult]:
    """Two-generator reduction: contracting the form against m-2 inverse
    letters turns a product of two u's into a form-weighted sum --
    sum_M w_{l,r,M} s^{Mm}_{Nm}...s^{M3}_{N3} = sum_{N1,N2} w_N u^{N1}_l u^{N2}_r."""
    w = pres.provenance.form
    n, m = pres.n, pres.m
    A = pres.alphabet
    rng = range(1, n + 1)
    out = []
    for lam in rng:
        for rho in rng:
            for nu_rest in itertools.product(rng, repeat=m - 2):
                terms: dict[str, Scalar] = {}
                for widx, c in w.entries.items():
                    if widx[0] == lam and widx[1] == rho:
                        musuf = widx[2:]
                        gens = [
                            Generator("s", musuf[m - 3 - i], nu_rest[m - 3 - i])
                            for i in range(m - 2)
                        ]
                        word = A.word(gens)
                        terms[word] = terms.get(word, ZERO) + c
                for widx, c in w.entries.items():
                    if widx[2:] == tuple(nu_rest):
                        gens = [
                            Generator("u", widx[0], lam),
                            Generator("u", widx[1], rho),
                        ]
                        word = A.word(gens)
                        terms[word] = terms.get(word, ZERO) - c
                out.append(
                    _nf_verdict(
                        _idx_label("pairred", (lam, rho) + tuple(nu_rest)),
                        NcPoly(A, terms),
                        system,
                    )
                )
    return out


def _manin_checks(pres: Presentation, system: RewriteSystem) -> list[CheckResult]:
    """Same-column commutation and cross-column commutator exchange."""
    A = pres.alphabet
    rng = range(1, pres.n + 1)

    def comm(a: Generator, b: Generator) -> NcPoly:
        return NcPoly.from_gens(A, [a, b]) - NcPoly.from_gens(A, [b, a])

    out = []
    for nu in rng:
        for lam in rng:
            for mu in rng:
                if lam >= mu:
                    continue
                p = comm(Generator("u", lam, nu), Generator("u", mu, nu))
                out.append(_nf_verdict(_idx_label("column", (lam, mu, nu)), p, system))
    for lam in rng:
        for mu in rng:
            if lam >= mu:
                continue
            for nu in rng:
                for rho in rng:
                    if nu == rho:
                        continue
                    p = comm(
                        Generator("u", lam, nu), Generator("u", mu, rho)
                    ) - comm(Generator("u", mu, nu), Generator("u", lam, rho))
                    out.append(
                        _nf_verdict(
                            _idx_label("exchange", (lam, mu, nu, rho)), p, system
                        )
                    )
    return out


def _power_antipode_checks(
    pres: Presentation, system: RewriteSystem
) -> list[CheckResult]:
    """s is the transposed (m-1)-st power of u (fully diagonal form only)."""
    A = pres.alphabet
    m = pres.m
    rng = range(1, pres.n + 1)
    out = []
    for lam in rng:
        for mu in rng:
            p = NcPoly.from_gens(A, [Generator("s", lam, mu)]) - NcPoly.from_gens(
                A, [Generator("u", mu, lam)] * (m - 1)
            )
            out.append(_nf_verdict(_idx_label("spow", (lam, mu)), p, system))
    return out


def pair_reduction_suite(
    pres: Presentation, degree: int, system: RewriteSystem | None = None
) -> list[CheckResult]:
    if pres.kind != "hw" or pres.m < 3:
        raise ValueError("the pair reduction needs the u/s presentation with arity >= 3")
    if system is None:
        system = system_for(pres, degree)
    return _pair_reduction_checks(pres, system)


def manin_suite(degree: int, system: RewriteSystem | None = None) -> list[CheckResult]:
    pres = build_hw(make_signature(3))
    if system is None:
        system = system_for(pres, degree)
    return _manin_checks(pres, system)


def diagonal_iso_suite(n: int, m: int, degree: int) -> list[CheckResult]:
    """Both directions of the diagonal-form <-> power-sum identification,
    plus the in-quotient identity s^l_m = (u^m_l)^{m-1}."""
    fwd, back = theta_iso_homs(n, m)
    ah_system = system_for(fwd.target, degree)
    hw_system = system_for(back.target, degree)
    out = check_hom(fwd, degree, ah_system)
    out += check_hom(back, degree, hw_system)
    out += _power_antipode_checks(fwd.source, hw_system)
    return out


def bilinear_iso_suite(b: MultilinearForm, degree: int) -> list[CheckResult]:
    """Mutual homomorphism checks for the arity-2 identification, plus the
    roundtrip fix of s (the composite must send s back to s)."""
    fwd, back = m2_iso_homs(b)
    hb_system = system_for(fwd.target, degree)
    hw_system = system_for(back.target, degree)
    out = check_hom(fwd, degree, hb_system)
    out += check_hom(back, degree, hw_system)
    hw = fwd.source
    for mu in range(1, b.dim + 1):
        for nu in range(1, b.dim + 1):
            roundtrip = substitute(
                fwd.images[Generator("s", mu, nu)], back.images, target=hw.alphabet
            )
            p = NcPoly.from_gens(hw.alphabet, [Generator("s", mu, nu)]) - roundtrip
            out.append(_nf_verdict(_idx_label("roundtrip-s", (mu, nu)), p, hw_system))
    return out


@dataclass
class HomCandidate:
    label: str
    source: Presentation
    target: Presentation
    images: dict[Generator, NcPoly]


def check_hom(
    hom: HomCandidate, degree: int, system: RewriteSystem | None = None
) -> list[CheckResult]:
    """An assignment extends to the quotients iff every source relation
    lands in the target ideal."""
    if system is None:
        system = system_for(hom.target, degree)
    out = []
    for label, rel in zip(hom.source.relation_labels, hom.source.relations):
        img = substitute(rel, hom.images, target=hom.target.alphabet)
        out.append(_nf_verdict(f"{hom.label}:{label}", img, system))
    return out


def hw_to_hww_hom(hw: Presentation, hww: Presentation) -> HomCandidate:
    """u goes to the generator matrix, s to its antipode image."""
    images: dict[Generator, NcPoly] = {}
    n = hw.n
    for mu in range(1, n + 1):
        for nu in range(1, n + 1):
            images[Generator("u", mu, nu)] = NcPoly.from_gens(
                hww.alphabet, [Generator("v", mu, nu)]
            )
            images[Generator("s", mu, nu)] = hww.structure.antipode[
                Generator("v", mu, nu)
            ]
    return HomCandidate("hw->hww", hw, hww, images)


def theta_iso_homs(n: int, m: int) -> tuple[HomCandidate, HomCandidate]:
    """Mutually inverse assignments between the fully diagonal form's Hopf
    algebra and the power-sum presentation: u <-> a, s -> transposed power."""
    htheta = build_hw(make_orthogonal(n, m))
    ah = build_ahmn(m, n)
    fwd: dict[Generator, NcPoly] = {}
    back: dict[Generator, NcPoly] = {}
    for mu in range(1, n + 1):
        for nu in range(1, n + 1):
            fwd[Generator("u", mu, nu)] = NcPoly.from_gens(
                ah.alphabet, [Generator("a", mu, nu)]
            )
            fwd[Generator("s", mu, nu)] = NcPoly.from_gens(
                ah.alphabet, [Generator("a", nu, mu)] * (m - 1)
            )
            back[Generator("a", mu, nu)] = NcPoly.from_gens(
                htheta.alphabet, [Generator("u", mu, nu)]
            )
    return (
        HomCandidate("htheta->ah", htheta, ah, fwd),
        HomCandidate("ah->htheta", ah, htheta, back),
    )


def m2_iso_homs(b: MultilinearForm) -> tuple[HomCandidate, HomCandidate]:
    """For arity 2 the u/s presentation and the b-presentation agree:
    u <-> u, with s carried to the b-conjugated matrix."""
    hw = build_hw(b)
    hb = build_hb(b)
    fwd: dict[Generator, NcPoly] = {}
    back: dict[Generator, NcPoly] = {}
    for mu in range(1, b.dim + 1):
        for nu in range(1, b.dim + 1):
            fwd[Generator("u", mu, nu)] = NcPoly.from_gens(
                hb.alphabet, [Generator("u", mu, nu)]
            )
            fwd[Generator("s", mu, nu)] = hb.structure.antipode[Generator("u", mu, nu)]
            back[Generator("u", mu, nu)] = NcPoly.from_gens(
                hw.alphabet, [Generator("u", mu, nu)]
            )
    return (
        HomCandidate("hw->hb", hw, hb, fwd),
        HomCandidate("hb->hw", hb, hw, back),
    )


@dataclass
class RepresentationReport:
    results: list[CheckResult]
    witness_images: tuple[NcPoly, NcPoly] | None
    witness_distinct: bool | None

    def ok(self) -> bool:
        return all_pass(self.results)


def check_representation(
    pres: Presentation,
    images: Mapping[Generator, NcPoly],
    witness: tuple[NcPoly, NcPoly] | None = None,
) -> RepresentationReport:
    """Validate an assignment into a free algebra (exact, no completion):
    every relation must map to the zero polynomial on the nose.  A witness
    pair with distinct images certifies distinctness in the quotient."""
    target = next(iter(images.values())).alphabet
    if any(g.family != "free" for g in target.generators):
        raise ValueError("representation targets must be free algebras")
    results = []
    for label, rel in zip(pres.relation_labels, pres.relations):
        img = substitute(rel, images, target=target)
        results.append(
            CheckResult(
                f"rep:{label}",
                Status.PASS if img.is_zero() else Status.FAIL,
                "" if img.is_zero() else f"image {img.to_str()}",
            )
        )
    wimg = None
    distinct = None
    if witness is not None:
        left = substitute(witness[0], images, target=target)
        right = substitute(witness[1], images, target=target)
        wimg = (left, right)
        distinct = left != right
    return RepresentationReport(results, wimg, distinct)


def unitriangular_free_images(pres: Presentation) -> dict[Generator, NcPoly]:
    """The two-parameter unitriangular representation of the alternating
    3x3 instance: u maps to I + x E12 + y E13 and s to I - x E12 - y E13,
    inside the free algebra on x, y."""
    if pres.kind != "hw" or pres.n != 3 or pres.m != 3:
        raise ValueError("this representation is for the 3x3 arity-3 instance")
    x = Generator.free("x")
    y = Generator.free("y")
    target = Alphabet([x, y])
    one = NcPoly.unit(target)
    zero = NcPoly.zero(target)
    px = NcPoly.from_gens(target, [x])
    py = NcPoly.from_gens(target, [y])
    umat = [[one, px, py], [zero, one, zero], [zero, zero, one]]
    smat = [[one, -px, -py], [zero, one, zero], [zero, zero, one]]
    images: dict[Generator, NcPoly] = {}
    for r in range(3):
        for c in range(3):
            images[Generator("u", r + 1, c + 1)] = umat[r][c]
            images[Generator("s", r + 1, c + 1)] = smat[r][c]
    return images


@dataclass
class ProbeReport:
    witness_ok: bool
    commutator_certified: bool
    degree: int
    verdict: str
    details: list[CheckResult] = field(default_factory=list)


def noninjectivity_probe(
    w: MultilinearForm, wt: MultilinearForm, degree: int, on_progress=None
) -> ProbeReport:
    """Semidecision that the canonical map from the u/s presentation to the
    single-matrix one is not injective for the alternating 3x3 instance.

    Two halves: (a) an exact free-algebra representation where two monomials
    in the u's have distinct images (they differ in the source); (b) a
    truncated reduction showing the corresponding commutator vanishes in the
    single-matrix quotient.  (a) is decided exactly; (b) is a certificate
    when it succeeds and 'inconclusive at this degree' when it does not --
    the truncation may simply be too small.
    """
    if w != make_signature(3):
        raise ValueError("the probe is stated for the alternating 3x3 instance")
    hw = build_hw(w)
    images = unitriangular_free_images(hw)
    wit_l = NcPoly.from_gens(hw.alphabet, [Generator("u", 1, 2), Generator("u", 1, 3)])
    wit_r = NcPoly.from_gens(hw.alphabet, [Generator("u", 1, 3), Generator("u", 1, 2)])
    rep = check_representation(hw, images, witness=(wit_l, wit_r))
    witness_ok = rep.ok() and bool(rep.witness_distinct)

    hww = build_hww(w, wt)
    system = complete(list(hww.relations), degree, on_progress=on_progress)
    comm = NcPoly.from_gens(
        hww.alphabet, [Generator("v", 1, 2), Generator("v", 1, 3)]
    ) - NcPoly.from_gens(hww.alphabet, [Generator("v", 1, 3), Generator("v", 1, 2)])
    certified = normal_form(comm, system).is_zero()
    if witness_ok and certified:
        verdict = "noninjective certified"
    else:
        verdict = f"inconclusive at degree {degree}"
    details = list(rep.results)
    details.append(
        CheckResult(
            "probe:witness-distinct",
            Status.PASS if witness_ok else Status.FAIL,
        )
    )
    details.append(
        CheckResult(
            "probe:commutator",
            Status.PASS if certified else Status.UNCERTIFIED,
            "" if certified else "nonzero normal form at this truncation",
        )
    )
    return ProbeReport(witness_ok, certified, degree, verdict, details)
