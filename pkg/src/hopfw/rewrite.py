"""Degree-truncated completion and rewriting in the free algebra.

Relations are turned into monic rewrite rules ``lead -> tail`` with the lead
strictly above every tail word in deglex.  Completion resolves every overlap
ambiguity whose overlap word has degree <= D (deglex is degree-compatible, so
rewriting never raises degree and the truncation is sound): normal forms then
decide, for polynomials of degree <= D, whether a rewriting certificate of
degree <= D exists.  ``True`` from :func:`ideal_member` is always a genuine
membership certificate; ``False`` means no certificate within the completed
degree, and a polynomial above the certified degree raises
:class:`NotCertifiedError` instead of guessing.

Implementation notes, sized for thousands of rules:

* whole-word rule lookup -- reduction probes ``word[pos:pos+k]`` against a
  dict of leads for each k up to the longest lead, so a reduction step costs
  O(word * maxlen) C-speed hashes instead of a scan over the rule list;
* overlap enumeration through prefix/suffix maps (every proper prefix and
  suffix of each live lead is indexed), so a new rule meets only the rules
  it genuinely overlaps;
* pending S-polynomials are queued as descriptors (the two leads and the
  splitting words) and materialized against the *current* tails at pop time;
  descriptors whose parent rule has been retracted are dropped, because the
  retracting insertion re-queued every overlap of its replacement;
* retraction keeps live leads pairwise factor-free: a new lead evicts every
  longer live lead containing it (checked per length bucket), and the evicted
  polynomial re-enters the queue;
* after the queue drains the system is interreduced to a fixpoint and then
  audited: every overlap of the final system must resolve to zero, and any
  that does not (possible in principle because tails drift during
  interreduction) is pushed back and completion resumes.  The shipped system
  therefore always satisfies the truncated confluence property it claims.

The final system is canonically sorted and schedule-independent: completing
the same relations in any order yields the identical rule list.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .exactnum import Scalar, ZERO, rat
from .ncalg import Alphabet, NcPoly, deglex_key


class NotCertifiedError(Exception):
    """Membership asked above the certified degree: no verdict, not 'False'."""

    def __init__(self, degree: int, certified: int) -> None:
        super().__init__(
            f"degree {degree} exceeds the certified bound {certified}; "
            "verdict not certified at this truncation"
        )
        self.degree = degree
        self.certified = certified


@dataclass(frozen=True)
class Rule:
    lead: str
    tail: NcPoly


class _LeadIndex:
    """Live rules indexed for reduction and overlap queries."""

    __slots__ = ("by_word", "by_len", "prefixes", "suffixes", "maxlen", "unit")

    def __init__(self) -> None:
        self.by_word: dict[str, dict[str, Scalar]] = {}
        self.by_len: dict[int, set[str]] = {}
        self.prefixes: dict[str, set[str]] = {}
        self.suffixes: dict[str, set[str]] = {}
        self.maxlen = 0  # stale-high after removals; only costs extra probes
        self.unit = False

    def add(self, lead: str, tail: dict[str, Scalar]) -> None:
        self.by_word[lead] = tail
        if lead == "":
            self.unit = True
            return
        n = len(lead)
        self.by_len.setdefault(n, set()).add(lead)
        if n > self.maxlen:
            self.maxlen = n
        for i in range(1, n):
            self.prefixes.setdefault(lead[:i], set()).add(lead)
            self.suffixes.setdefault(lead[i:], set()).add(lead)

    def remove(self, lead: str) -> dict[str, Scalar]:
        tail = self.by_word.pop(lead)
        if lead == "":
            self.unit = False
            return tail
        self.by_len[len(lead)].discard(lead)
        for i in range(1, len(lead)):
            self.prefixes.get(lead[:i], set()).discard(lead)
            self.suffixes.get(lead[i:], set()).discard(lead)
        return tail

    def find_reduction(self, word: str):
        """Leftmost position, shortest lead there (= deglex-smallest match).

        Returns (pos, lead, tail) or None.
        """
        if self.unit:
            return 0, "", self.by_word[""]
        by_word = self.by_word
        n = len(word)
        top = self.maxlen
        for pos in range(n):
            limit = n - pos
            if top < limit:
                limit = top
            for k in range(1, limit + 1):
                lead = word[pos : pos + k]
                tail = by_word.get(lead)
                if tail is not None:
                    return pos, lead, tail
        return None

    def reduce_terms(self, terms: dict[str, Scalar], desc) -> dict[str, Scalar]:
        """Rewrite a term dict to normal form.

        Worklist in descending deglex (``desc`` is the order-reversing word
        key): expansions are strictly smaller, so each word is finalized
        exactly once; coefficients of pending duplicates merge before
        expansion.
        """
        if self.unit:
            return {}
        out: dict[str, Scalar] = {}
        work = dict(terms)
        heap = [(-len(w), desc(w), w) for w in work]
        heapq.heapify(heap)
        queued = set(work)
        while heap:
            _, _, w = heapq.heappop(heap)
            queued.discard(w)
            c = work.pop(w, ZERO)
            if not c:
                continue
            hit = self.find_reduction(w)
            if hit is None:
                out[w] = c
                continue
            pos, lead, tail = hit
            x = w[:pos]
            y = w[pos + len(lead) :]
            for t, tc in tail.items():
                nw = x + t + y
                nv = work.get(nw, ZERO) + c * tc
                if nv:
                    work[nw] = nv
                    if nw not in queued:
                        heapq.heappush(heap, (-len(nw), desc(nw), nw))
                        queued.add(nw)
                else:
                    work.pop(nw, None)
        return out


class RewriteSystem:
    """A frozen, interreduced, degree-truncated rewriting system."""

    def __init__(
        self,
        alphabet: Alphabet,
        rules: Iterable[Rule],
        degree_bound: int,
        complete_through: int,
    ) -> None:
        self.alphabet = alphabet
        self.rules = sorted(rules, key=lambda r: deglex_key(r.lead))
        self.degree_bound = degree_bound
        self.complete_through = complete_through
        self._index = _LeadIndex()
        for r in self.rules:
            self._index.add(r.lead, dict(r.tail.terms))

    def find_reduction(self, word: str):
        """Leftmost reducible position; the deglex-smallest lead matching
        there.  Returns (pos, rule) or None."""
        hit = self._index.find_reduction(word)
        if hit is None:
            return None
        pos, lead, _ = hit
        return pos, Rule(lead, NcPoly(self.alphabet, self._index.by_word[lead]))

    def is_normal(self, word: str) -> bool:
        return self._index.find_reduction(word) is None

    def normal_form(self, p: NcPoly) -> NcPoly:
        return normal_form(p, self)

    def dump(self) -> str:
        lines = [
            "system",
            f"degree {self.degree_bound}",
            f"complete_through {self.complete_through}",
            "generators " + " ".join(g.token() for g in self.alphabet.generators),
        ]
        for r in self.rules:
            lines.append(
                f"rule {self.alphabet.word_token(r.lead)} -> {r.tail.to_str()}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "RewriteSystem":
        from .ncalg import parse_generator_token, parse_poly

        lines = [ln.rstrip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln.strip()]
        if not lines or lines[0].strip() != "system":
            raise ValueError("not a rewrite system dump (missing 'system' header)")
        degree = None
        through = None
        alphabet = None
        rules: list[Rule] = []
        for ln in lines[1:]:
            head, _, rest = ln.partition(" ")
            if head == "degree":
                degree = int(rest)
            elif head == "complete_through":
                through = int(rest)
            elif head == "generators":
                gens = [parse_generator_token(t) for t in rest.split()]
                alphabet = Alphabet(gens)
            elif head == "rule":
                if alphabet is None:
                    raise ValueError("rule before generators line")
                lhs, sep, rhs = rest.partition("->")
                if not sep:
                    raise ValueError(f"malformed rule line: {ln!r}")
                lead_poly = parse_poly(alphabet, lhs.strip())
                if len(lead_poly.terms) != 1 or lead_poly.leading_coeff() != 1:
                    raise ValueError(f"rule lead must be a single word: {ln!r}")
                rules.append(
                    Rule(lead_poly.leading_word(), parse_poly(alphabet, rhs.strip()))
                )
            else:
                raise ValueError(f"unknown line in system dump: {ln!r}")
        if degree is None or through is None or alphabet is None:
            raise ValueError("incomplete system dump header")
        return cls(alphabet, rules, degree, through)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RewriteSystem)
            and self.alphabet == other.alphabet
            and self.rules == other.rules
            and self.degree_bound == other.degree_bound
            and self.complete_through == other.complete_through
        )


def _reduce_terms(terms: dict[str, Scalar], system: RewriteSystem) -> dict[str, Scalar]:
    return system._index.reduce_terms(terms, system.alphabet.desc_key)


def normal_form(p: NcPoly, system: RewriteSystem) -> NcPoly:
    """Fully reduce ``p``; requires degree(p) <= the system degree bound."""
    if p.alphabet != system.alphabet:
        raise ValueError("polynomial alphabet does not match the system")
    if p.degree() > system.degree_bound:
        raise NotCertifiedError(p.degree(), system.degree_bound)
    reduced = _reduce_terms(p.terms, system)
    q = NcPoly.__new__(NcPoly)
    q.alphabet = p.alphabet
    q.terms = reduced
    return q


def ideal_member(p: NcPoly, system: RewriteSystem) -> bool:
    """True = certified member (a certificate of degree <= the completed
    bound exists); False = no certificate within that bound.  Degrees above
    ``complete_through`` raise NotCertifiedError rather than answer."""
    if p.degree() > system.complete_through:
        raise NotCertifiedError(p.degree(), system.complete_through)
    return normal_form(p, system).is_zero()


def _proper_overlaps(l1: str, l2: str) -> Iterable[tuple[str, str]]:
    """Yield (x, z) for each proper overlap l1 = x.b, l2 = b.z with b != ''."""
    top = min(len(l1), len(l2))
    for blen in range(1, top):
        if l1[len(l1) - blen :] == l2[:blen]:
            yield l1[: len(l1) - blen], l2[blen:]


class _Completion:
    """Mutable state for one completion run."""

    def __init__(self, alphabet: Alphabet, degree_bound: int) -> None:
        self.alphabet = alphabet
        self.desc = alphabet.desc_key
        self.degree_bound = degree_bound
        self.index = _LeadIndex()
        self.heap: list = []
        self.seq = 0

    def push_poly(self, key_word: str, terms: dict[str, Scalar]) -> None:
        self.seq += 1
        heapq.heappush(
            self.heap, (len(key_word), key_word, self.seq, None, terms)
        )

    def push_pair(self, l1: str, l2: str, x: str, z: str) -> None:
        key_word = x + l2
        if len(key_word) > self.degree_bound:
            return
        self.seq += 1
        heapq.heappush(
            self.heap, (len(key_word), key_word, self.seq, (l1, l2, x, z), None)
        )

    def queue_overlaps_of(self, lead: str) -> None:
        """Queue every overlap ambiguity between ``lead`` and the live rules
        (including itself).  Prefix/suffix maps make this output-sensitive."""
        n = len(lead)
        # lead as the left rule: its proper suffixes must prefix the other
        for i in range(1, n):
            s = lead[i:]
            others = self.index.prefixes.get(s)
            if others:
                for l2 in others:
                    self.push_pair(lead, l2, lead[:i], l2[len(s) :])
        # lead as the right rule: live leads whose suffix prefixes lead
        for i in range(1, n):
            p = lead[:i]
            others = self.index.suffixes.get(p)
            if others:
                for l1 in others:
                    if l1 == lead:
                        continue  # self-overlaps queued above
                    self.push_pair(l1, lead, l1[: len(l1) - i], lead[i:])

    def insert(self, reduced: dict[str, Scalar]) -> None:
        """Make a monic rule out of a reduced nonzero polynomial, retract
        the live rules its lead divides, and queue its overlaps."""
        lead = max(reduced, key=deglex_key)
        lc = reduced[lead]
        tail = {w: -c / lc for w, c in reduced.items() if w != lead}

        if lead == "":
            for old in list(self.index.by_word):
                self.index.remove(old)
            self.index.add("", {})
            self.heap.clear()
            return

        # evict longer live leads containing the new lead
        for ln in range(len(lead) + 1, self.index.maxlen + 1):
            bucket = self.index.by_len.get(ln)
            if not bucket:
                continue
            for old in [o for o in bucket if lead in o]:
                old_tail = self.index.remove(old)
                terms = {w: -c for w, c in old_tail.items()}
                terms[old] = rat(1)
                self.push_poly(old, terms)

        self.index.add(lead, tail)
        self.queue_overlaps_of(lead)

    def s_poly_terms(self, l1: str, l2: str, x: str, z: str):
        t1 = self.index.by_word.get(l1)
        t2 = self.index.by_word.get(l2)
        if t1 is None or t2 is None:
            return None  # a parent was retracted; its replacement re-queued
        s_terms: dict[str, Scalar] = {}
        for w, c in t1.items():
            kw = w + z
            s_terms[kw] = s_terms.get(kw, ZERO) + c
        for w, c in t2.items():
            kw = x + w
            nv = s_terms.get(kw, ZERO) - c
            if nv:
                s_terms[kw] = nv
            else:
                s_terms.pop(kw, None)
        return s_terms

    def drain(self, on_progress, last_reported: int) -> int:
        while self.heap:
            deg, _, _, pair, terms = heapq.heappop(self.heap)
            if on_progress and deg > last_reported:
                on_progress(deg, len(self.index.by_word))
                last_reported = deg
            if pair is not None:
                terms = self.s_poly_terms(*pair)
                if terms is None:
                    continue
            reduced = self.index.reduce_terms(terms, self.desc)
            if reduced:
                self.insert(reduced)
        return last_reported

    def interreduce(self) -> None:
        changed = True
        while changed:
            changed = False
            for lead in sorted(self.index.by_word, key=deglex_key):
                tail = self.index.by_word.get(lead)
                if tail is None:
                    continue
                new_tail = self.index.reduce_terms(dict(tail), self.desc)
                if new_tail != tail:
                    self.index.by_word[lead] = new_tail
                    changed = True

    def audit_and_requeue(self) -> bool:
        """Reduce every overlap S-polynomial of the final system; push back
        any that fail to vanish.  Returns True when the system is clean."""
        clean = True
        leads = sorted(self.index.by_word, key=deglex_key)
        for l1 in leads:
            n = len(l1)
            for i in range(1, n):
                s = l1[i:]
                others = self.index.prefixes.get(s)
                if not others:
                    continue
                for l2 in others:
                    if len(l1[:i]) + len(l2) > self.degree_bound:
                        continue
                    terms = self.s_poly_terms(l1, l2, l1[:i], l2[len(s) :])
                    if terms is None:
                        continue
                    if self.index.reduce_terms(terms, self.desc):
                        self.push_pair(l1, l2, l1[:i], l2[len(s) :])
                        clean = False
        return clean


def complete(
    relations: Sequence[NcPoly],
    degree_bound: int,
    on_progress: Callable[[int, int], None] | None = None,
) -> RewriteSystem:
    """Resolve all overlap ambiguities of degree <= ``degree_bound``.

    The queue is processed in (degree, deglex, arrival) order.  Whenever a
    pending polynomial survives reduction it becomes a monic rule; live rules
    whose lead contains the new lead are retracted and requeued, so live
    leads stay pairwise factor-free.  Ends with interreduction plus a
    confluence audit (repeated until clean) and a canonical sort.
    """
    rels = [r for r in relations if not r.is_zero()]
    if not rels:
        raise ValueError("no nonzero relations to complete")
    alphabet = rels[0].alphabet
    for r in rels:
        if r.alphabet != alphabet:
            raise ValueError("relations drawn from mixed alphabets")
        if r.degree() > degree_bound:
            raise ValueError(
                f"degree bound {degree_bound} is below relation degree {r.degree()}"
            )
    st = _Completion(alphabet, degree_bound)
    for r in rels:
        st.push_poly(r.leading_word(), dict(r.terms))

    last = -1
    while True:
        last = st.drain(on_progress, last)
        st.interreduce()
        if st.audit_and_requeue():
            break

    rules = [
        Rule(lead, NcPoly(alphabet, tail))
        for lead, tail in st.index.by_word.items()
    ]
    return RewriteSystem(alphabet, rules, degree_bound, degree_bound)


def unresolved_overlaps(system: RewriteSystem) -> list[tuple[str, str, str]]:
    """Audit confluence at the bound: every overlap word of degree <= D must
    reduce to the same normal form along both one-step resolutions.  Returns
    the offending (lead1, lead2, overlap_word) triples; empty = confluent."""
    bad = []
    for r1 in system.rules:
        for r2 in system.rules:
            for x, z in _proper_overlaps(r1.lead, r2.lead):
                word = r1.lead + z  # equals x + r2.lead
                if len(word) > system.degree_bound:
                    continue
                left = NcPoly(system.alphabet, {x + t: c for t, c in r2.tail.terms.items()})
                right = NcPoly(system.alphabet, {t + z: c for t, c in r1.tail.terms.items()})
                if normal_form(left, system) != normal_form(right, system):
                    bad.append((r1.lead, r2.lead, word))
    return bad
