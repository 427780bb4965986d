import random

import pytest

from hopfw.forms import MultilinearForm, make_signature
from hopfw.hopf import build_hw
from hopfw.ncalg import Alphabet, Generator, NcPoly, parse_poly
from hopfw.rewrite import (
    NotCertifiedError,
    RewriteSystem,
    Rule,
    complete,
    ideal_member,
    normal_form,
    unresolved_overlaps,
)
from span_oracle import SpanOracle


def free_alphabet(*names):
    return Alphabet([Generator.free(n) for n in names])


def test_two_sided_inverse_pair():
    a = free_alphabet("p", "q")
    rels = [parse_poly(a, "p*q - 1"), parse_poly(a, "q*p - 1")]
    s = complete(rels, 4)
    assert len(s.rules) == 2
    assert normal_form(parse_poly(a, "p*q*p"), s) == parse_poly(a, "p")
    assert normal_form(parse_poly(a, "q*p*q*p"), s) == parse_poly(a, "1")
    assert ideal_member(parse_poly(a, "p*q*q*p - 1"), s)
    assert not ideal_member(parse_poly(a, "p - q"), s)
    assert unresolved_overlaps(s) == []


def test_single_square_relation():
    a = free_alphabet("g")
    s = complete([parse_poly(a, "g*g")], 5)
    assert [r.lead for r in s.rules] == [a.word([Generator.free("g")] * 2)]
    assert normal_form(parse_poly(a, "g*g*g"), s).is_zero()
    assert normal_form(parse_poly(a, "g"), s) == parse_poly(a, "g")


def test_unit_ideal_collapses_to_the_empty_word_rule():
    a = free_alphabet("g")
    s = complete([parse_poly(a, "g - 1"), parse_poly(a, "g")], 3)
    assert len(s.rules) == 1
    assert s.rules[0].lead == ""
    assert s.rules[0].tail.is_zero()
    assert ideal_member(NcPoly.unit(a), s)
    assert normal_form(parse_poly(a, "g*g - 7"), s).is_zero()


def test_relations_above_bound_rejected():
    a = free_alphabet("g")
    with pytest.raises(ValueError):
        complete([parse_poly(a, "g*g*g")], 2)
    with pytest.raises(ValueError):
        complete([NcPoly.zero(a)], 3)


def test_mixed_alphabets_rejected():
    a = free_alphabet("p")
    b = free_alphabet("q")
    with pytest.raises(ValueError):
        complete([parse_poly(a, "p"), parse_poly(b, "q")], 3)
    s = complete([parse_poly(a, "p*p")], 3)
    with pytest.raises(ValueError):
        normal_form(parse_poly(b, "q"), s)


def test_not_certified_above_the_bound():
    a = free_alphabet("g")
    s = complete([parse_poly(a, "g*g - g")], 4)
    tall = NcPoly.from_word(a, a.word([Generator.free("g")] * 5))
    with pytest.raises(NotCertifiedError) as info:
        normal_form(tall, s)
    assert info.value.degree == 5 and info.value.certified == 4
    with pytest.raises(NotCertifiedError):
        ideal_member(tall, s)


def test_completion_is_schedule_independent():
    w2 = MultilinearForm(2, 3, {(1, 1, 2): 1, (1, 2, 1): 1, (2, 1, 1): 1})
    rels = list(build_hw(w2).relations)
    base = complete(rels, 4)
    rng = random.Random(99)
    for _ in range(3):
        shuffled = rels[:]
        rng.shuffle(shuffled)
        assert complete(shuffled, 4) == base


def test_presented_quotient_stays_proper():
    # the counit sends every defining relation to zero, so the quotient has a
    # character and the unit can never acquire a certificate; a collapse here
    # means the completion manufactured an element outside the ideal
    w2 = MultilinearForm(2, 3, {(1, 1, 2): 1, (1, 2, 1): 1, (2, 1, 1): 1})
    s = complete(list(build_hw(w2).relations), 6)
    assert len(s.rules) == 92
    assert not ideal_member(NcPoly.unit(s.alphabet), s)
    assert unresolved_overlaps(s) == []
    for rel in build_hw(w2).relations:
        assert ideal_member(rel, s)


def test_unresolved_overlaps_flags_a_non_confluent_system():
    a = free_alphabet("x", "y", "z")
    x, y, z = (a.char(g) for g in a.generators)
    # ab -> a and bc -> b leave the word abc with two distinct normal forms
    rules = [
        Rule(x + y, NcPoly(a, {x: 1})),
        Rule(y + z, NcPoly(a, {y: 1})),
    ]
    s = RewriteSystem(a, rules, 3, 3)
    assert unresolved_overlaps(s) == [(x + y, y + z, x + y + z)]
    fixed = complete([parse_poly(a, "x*y - x"), parse_poly(a, "y*z - y")], 3)
    assert unresolved_overlaps(fixed) == []
    # completion added the missing consequence x*z -> x*y -> x
    assert normal_form(parse_poly(a, "x*z"), fixed) == parse_poly(a, "x")


def test_normal_form_is_linear_and_idempotent():
    a = free_alphabet("x", "y")
    s = complete([parse_poly(a, "x*x - y"), parse_poly(a, "y*x - x*y")], 6)
    rng = random.Random(3)
    chars = [a.char(g) for g in a.generators]

    def rand_poly():
        terms = {}
        for _ in range(rng.randrange(1, 5)):
            w = "".join(rng.choice(chars) for _ in range(rng.randrange(5)))
            terms[w] = terms.get(w, 0) + rng.randrange(-4, 5)
        return NcPoly(a, terms)

    for _ in range(25):
        p, q = rand_poly(), rand_poly()
        np_, nq = normal_form(p, s), normal_form(q, s)
        assert normal_form(p + q, s) == np_ + nq
        assert normal_form(np_, s) == np_
        assert ideal_member(p - np_, s)


def test_dump_parse_round_trip():
    a = free_alphabet("p", "q")
    s = complete([parse_poly(a, "p*q - 1"), parse_poly(a, "q*p - 1")], 4)
    text = s.dump()
    back = RewriteSystem.parse(text)
    assert back == s
    assert back.dump() == text
    assert text.splitlines()[0] == "system"


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "rules\ndegree 3",
        "system\ndegree 3",  # missing complete_through and generators
        "system\ndegree 3\ncomplete_through 3\ngenerators p\nrule p*p",
        "system\ndegree 3\ncomplete_through 3\ngenerators p\nrule 2*p -> 1",
        "system\nwhat 3",
        "system\nrule p -> 1",
    ],
)
def test_parse_rejects_malformed_dumps(bad):
    with pytest.raises(ValueError):
        RewriteSystem.parse(bad)


def test_find_reduction_prefers_leftmost_then_smallest():
    a = free_alphabet("x", "y")
    x, y = (a.char(g) for g in a.generators)
    rules = [
        Rule(y, NcPoly(a, {x: 1})),
        Rule(y + y, NcPoly(a, {"": 1})),
        Rule(x + y, NcPoly(a, {x: 1})),
    ]
    s = RewriteSystem(a, rules, 4, 4)
    # leftmost reducible position wins: the length-2 rule at 0 beats the
    # length-1 rule at 1
    pos, rule = s.find_reduction(x + y + y)
    assert pos == 0 and rule.lead == x + y
    # at equal positions the deglex-smallest (shortest) matching lead wins
    pos, rule = s.find_reduction(y + y + x)
    assert pos == 0 and rule.lead == y
    assert s.is_normal(x + x)
    assert s.find_reduction(x + x) is None


def test_agreement_with_the_span_oracle_seeded():
    rng = random.Random(20260821)
    for trial in range(12):
        n_gens = rng.choice([2, 2, 3])
        names = ["x", "y", "z"][:n_gens]
        a = free_alphabet(*names)
        chars = [a.char(g) for g in a.generators]
        degree = rng.choice([3, 4])

        def rand_relation():
            terms = {}
            for _ in range(rng.randrange(1, 4)):
                w = "".join(rng.choice(chars) for _ in range(rng.randrange(1, 3)))
                c = rng.randrange(-2, 3)
                if c:
                    terms[w] = terms.get(w, 0) + c
            return NcPoly(a, terms)

        rels = [rand_relation() for _ in range(rng.randrange(1, 4))]
        rels = [r for r in rels if not r.is_zero()]
        if not rels:
            continue
        system = complete(rels, degree)
        assert unresolved_overlaps(system) == [], f"trial {trial} not confluent"
        oracle = SpanOracle(rels, degree)

        def rand_probe():
            terms = {}
            for _ in range(rng.randrange(1, 4)):
                w = "".join(rng.choice(chars) for _ in range(rng.randrange(0, degree + 1)))
                terms[w] = terms.get(w, 0) + rng.randrange(-2, 3)
            return NcPoly(a, terms)

        for _ in range(20):
            p = rand_probe()
            assert ideal_member(p, system) == oracle.member(p), (
                f"trial {trial} disagrees on {p.to_str()}"
            )
        # every relation and every rule polynomial is in the ideal both ways
        for r in rels:
            assert ideal_member(r, system) and oracle.member(r)
        for rule in system.rules:
            rp = NcPoly.from_word(a, rule.lead) - rule.tail
            assert oracle.member(rp)
