"""Unit tests for the exact-rational interval engine and each propagation rule."""
from __future__ import annotations

from fractions import Fraction

import pytest

from verba.bounds import BoundEngine, Context, Quantity, QuantityKind
from verba.certificates import Certificate, commutator_factor
from verba.errors import (
    CertificateError,
    InconsistencyError,
    ParseError,
    UnknownNameError,
    VerbaError,
)
from verba.finite import load_group
from verba.identities import culler_identity
from verba.templates import (
    GAMMA3_FAMILY,
    beta_word,
    commutator_product_word,
    gamma_word,
    grope_word,
    template_from_word,
)
from verba.words import Word, commutator, gen, power

X, Y, Z = gen(1), gen(2), gen(3)
F = Fraction


def mk(engine, kind, context, word, template=None, exponent=None):
    return engine.make_quantity(kind, context, word, template, exponent)


# ---------------------------------------------------------------------------
# quantities: parsing, display, validation

def test_parse_quantity_round_trips():
    engine = BoundEngine()
    texts = [
        "SCL FREE [x,y]",
        "CL PERFECT x y",
        "L FREE [x,y] | gamma2 @ 3",
        "SL PERFECT g | gamma3",
        "L FREE x | [y,z] @ 2",
        "SL FREE [z,[x,y]] | Gamma3",
        "SL PERFECT_SCL_ZERO g | beta2",
        "SL FREE w | commutator_product2",
        "SL FREE w | grope3",
    ]
    for text in texts:
        q = engine.parse_quantity(text)
        again = engine.parse_quantity(engine.display(q))
        assert again.key() == q.key()


def test_template_spec_word_prefix_alias():
    engine = BoundEngine()
    plain = engine.parse_quantity("SL FREE [x,y] | [a,b]")
    prefixed = engine.parse_quantity("SL FREE [x,y] | w:[a,b]")
    named = engine.parse_quantity("SL FREE [x,y] | gamma2")
    assert prefixed.key() == plain.key() == named.key()


def test_parse_quantity_defaults_l_exponent_to_one():
    engine = BoundEngine()
    q = engine.parse_quantity("L FREE [x,y] | gamma2")
    assert q.exponent == 1
    assert q.key().endswith("@ 1")


def test_parse_quantity_errors():
    engine = BoundEngine()
    bad = [
        "L FREE [x,y]",  # missing template
        "SL FREE [x,y]",  # missing template
        "SCL FREE x | gamma2",  # template on a template-free kind
        "CL FREE x | gamma2",
        "SCL FREE [x,y] @ 2",  # exponent on a non-L kind
        "SL FREE x | gamma2 @ 2",
        "L FREE x | gamma2 @ 0",  # exponents start at 1
        "L FREE x | gamma2 @ z",
        "FOO FREE x",  # unknown kind
        "L BAR x | gamma2",  # unknown context
        "L FREE",  # too few tokens
    ]
    for text in bad:
        with pytest.raises(ParseError):
            engine.parse_quantity(text)


def test_quantity_validation_direct():
    with pytest.raises(ValueError):
        Quantity(QuantityKind.SCL, Context.FREE, X, gamma_word(2).key)
    with pytest.raises(ValueError):
        Quantity(QuantityKind.L, Context.FREE, X)
    with pytest.raises(ValueError):
        Quantity(QuantityKind.SL, Context.FREE, X, gamma_word(2).key, 2)
    with pytest.raises(ValueError):
        Quantity(QuantityKind.L, Context.FREE, X, gamma_word(2).key, 0)
    q = Quantity(QuantityKind.L, Context.FREE, X, gamma_word(2).key)
    assert q.exponent == 1


def test_interval_requires_declaration():
    engine = BoundEngine()
    with pytest.raises(UnknownNameError):
        engine.interval("SCL FREE [x,y]")
    engine.declare("SCL FREE [x,y]")
    assert engine.interval("SCL FREE [x,y]") == (F(0), None)


def test_declare_rejects_unregistered_template_key():
    engine = BoundEngine()
    with pytest.raises(UnknownNameError):
        engine.declare(Quantity(QuantityKind.SL, Context.FREE, X, "no-such-template"))


# ---------------------------------------------------------------------------
# fact entry, seeds, and files

def test_add_fact_and_explain_seed():
    engine = BoundEngine()
    engine.add_fact("SCL FREE [x,y]", F(1, 2), F(1, 2), label="seeded")
    assert engine.interval("SCL FREE [x,y]") == (F(1, 2), F(1, 2))
    text = engine.explain("SCL FREE [x,y]")
    assert "1/2 (exact)" in text
    assert "by SEED" in text
    assert "# seeded" in text


def test_explain_shows_defaults():
    engine = BoundEngine()
    engine.declare("SCL FREE [x,y]")
    text = engine.explain("SCL FREE [x,y]")
    assert "lo 0: default" in text
    assert "hi inf: default" in text


def test_default_seeds():
    engine = BoundEngine()
    assert engine.load_default_seeds() == 5
    assert engine.interval("SCL FREE [a,b]") == (F(1, 2), F(1, 2))
    assert engine.interval("SCL FREE [a,b]^2") == (F(1), F(1))
    assert engine.interval("SCL FREE [a,b][c,d]") == (F(3, 2), F(3, 2))
    assert engine.interval("SCL FREE [a,b][c,d][e,f][g,h]") == (F(7, 2), F(7, 2))


def test_facts_file_round_trip():
    engine = BoundEngine()
    engine.load_facts(
        "SCL FREE [x,y] => 1/2\n"
        "L FREE [x,y] | gamma2 @ 6 = 2 12\n"
        "SL PERFECT g | gamma3 = 0 inf\n"
        "# a comment line\n"
        "\n"
        "CL FREE [x,y] [z,t] = 1 2\n"
    )
    dumped = engine.dump_facts()
    other = BoundEngine()
    other.load_facts(dumped)
    assert other.dump_facts() == dumped
    for key in engine.facts:
        assert engine.facts[key].lo == other.facts[key].lo
        assert engine.facts[key].hi == other.facts[key].hi


def test_facts_parse_errors():
    engine = BoundEngine()
    bad = [
        "SCL FREE [x,y] => inf",  # exact values must be finite
        "SCL FREE [x,y] = 1",  # two bounds required
        "SCL FREE [x,y] = 1 2 3",
        "SCL FREE [x,y]",  # no relation
        "SCL FREE [x,y] => -1",  # bounds are nonnegative
        "SCL FREE [x,y] = inf 2",  # lower bounds are finite
        "FOO FREE x => 1",
        "SCL FREE [x,y] => 1/0",
    ]
    for line in bad:
        with pytest.raises(ParseError):
            engine.load_facts(line)


def test_facts_error_reports_line_number():
    engine = BoundEngine()
    with pytest.raises(ParseError, match="line 2"):
        engine.load_facts("SCL FREE [x,y] => 1/2\nSCL FREE [x,y] = oops\n")


# ---------------------------------------------------------------------------
# inconsistency and the event log

def test_inconsistency_carries_both_provenances():
    engine = BoundEngine()
    engine.add_fact("CL FREE [x,y]", lo=2, provenance="QUOTIENT", label="floor")
    with pytest.raises(InconsistencyError) as info:
        engine.add_fact("CL FREE [x,y]", hi=1, provenance="CERTIFICATE", label="ceiling")
    assert "QUOTIENT" in info.value.trace
    assert "CERTIFICATE" in info.value.trace


def test_propagation_inconsistency():
    engine = BoundEngine()
    engine.add_fact(
        "L FREE [x,y] | gamma2 @ 1", hi=0, provenance="CERTIFICATE", label="bogus"
    )
    with pytest.raises(InconsistencyError) as info:
        engine.propagate()
    assert "R0" in info.value.trace
    assert "CERTIFICATE" in info.value.trace


def test_record_lines_format():
    engine = BoundEngine()
    engine.add_fact("SCL FREE [x,y]", F(1, 2), F(1, 2), label="basic")
    q = engine.declare("SL FREE [x,y] | gamma2")
    engine.propagate()
    lines = engine.record_lines()
    assert lines, "events were recorded"
    for line in lines:
        body = line.split(" # ")[0]
        assert body.startswith("FACT ")
        assert " RULE " in body
        assert " FROM " in body
    assert any(" RULE SEED FROM -" in line for line in lines)
    assert any(" RULE R3 FROM " in line for line in lines)
    assert any(q.key() in line for line in lines)


def test_propagate_reaches_a_fixed_point():
    engine = BoundEngine()
    engine.load_default_seeds()
    engine.declare("SL FREE [a,b] | gamma2")
    engine.declare("SCL FREE [a,b]^3")
    engine.add_fact("L FREE [a,b] | gamma2 @ 3", hi=2, provenance="CERTIFICATE")
    first = engine.propagate()
    assert first > 0
    assert engine.propagate() == 0
    # Same inputs, same outputs: the engine is deterministic.
    twin = BoundEngine()
    twin.load_default_seeds()
    twin.declare("SL FREE [a,b] | gamma2")
    twin.declare("SCL FREE [a,b]^3")
    twin.add_fact("L FREE [a,b] | gamma2 @ 3", hi=2, provenance="CERTIFICATE")
    twin.propagate()
    assert twin.dump_facts() == engine.dump_facts()


# ---------------------------------------------------------------------------
# individual rules

def test_rule_trivial_and_integrality():
    engine = BoundEngine()
    empty_q = engine.declare("L FREE 1 | gamma2 @ 4")
    q = engine.add_fact("L FREE [x,y] | gamma2 @ 2", lo=F(4, 3), hi=F(5, 2))
    engine.propagate()
    assert engine.interval(empty_q) == (F(0), F(0))
    assert engine.interval(q) == (F(2), F(2))


def test_rule_compose():
    engine = BoundEngine()
    w = commutator(X, Y) * commutator(Z, gen(4))
    target = engine.declare(mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(3)))
    engine.add_fact(
        mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(2)), hi=2
    )
    engine.add_fact(
        mk(engine, QuantityKind.L, Context.FREE, gamma_word(2).body, gamma_word(3)), hi=3
    )
    engine.propagate()
    assert engine.interval(target) == (F(1), F(6))
    assert "R1" in engine.explain(target)


def test_rule_compose_zero_times_infinity():
    engine = BoundEngine()
    w = commutator(X, Y)
    target = engine.declare(mk(engine, QuantityKind.L, Context.PERFECT, w, gamma_word(3)))
    engine.add_fact(mk(engine, QuantityKind.L, Context.PERFECT, w, gamma_word(2)), hi=0)
    engine.declare(
        mk(engine, QuantityKind.L, Context.FREE, gamma_word(2).body, gamma_word(3))
    )
    engine.propagate()
    assert engine.interval(target) == (F(0), F(0))


def test_rule_scl_bridge_stable_form():
    engine = BoundEngine()
    w = commutator(X, Y) * commutator(X, Z)
    scl_q = engine.declare(mk(engine, QuantityKind.SCL, Context.FREE, w))
    engine.add_fact(mk(engine, QuantityKind.SL, Context.FREE, w, gamma_word(2)), hi=1)
    engine.add_fact(
        mk(engine, QuantityKind.SCL, Context.FREE, gamma_word(2).body), hi=F(1, 2)
    )
    engine.propagate()
    assert engine.interval(scl_q) == (F(0), F(1))
    assert "R2" in engine.explain(scl_q)


def test_rule_scl_bridge_finite_form():
    engine = BoundEngine()
    w = commutator(X, Y)
    scl_q = engine.declare(mk(engine, QuantityKind.SCL, Context.FREE, power(w, 3)))
    engine.add_fact(mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(2), 3), hi=2)
    engine.add_fact(
        mk(engine, QuantityKind.SCL, Context.FREE, gamma_word(2).body), hi=F(1, 2)
    )
    engine.propagate()
    assert engine.interval(scl_q) == (F(0), F(3, 2))


def test_rule_scl_bridge_clamps_at_zero():
    engine = BoundEngine()
    w = commutator(X, Y)
    scl_q = engine.declare(mk(engine, QuantityKind.SCL, Context.PERFECT, power(w, 2)))
    engine.add_fact(
        mk(engine, QuantityKind.L, Context.PERFECT, w, gamma_word(2), 2), hi=F(1, 2)
    )
    engine.add_fact(
        mk(engine, QuantityKind.SCL, Context.FREE, gamma_word(2).body), hi=F(1, 2)
    )
    engine.propagate()
    assert engine.interval(scl_q) == (F(0), F(0))


def test_rule_diagonal_window():
    engine = BoundEngine()
    body = gamma_word(2).body
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, body, gamma_word(2)))
    engine.add_fact(mk(engine, QuantityKind.SCL, Context.FREE, body), F(1, 2), F(1, 2))
    engine.propagate()
    # Window [scl/(scl+1/2), 1], here [1/2, 1], sharpened to hi 1/2 by the
    # nested-chain ceiling at index 2: the interval collapses.
    assert engine.interval(q) == (F(1, 2), F(1, 2))


def test_rule_diagonal_window_renamed_word():
    engine = BoundEngine()
    word = commutator(gen(7), gen(3))  # same shape, different letters
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, word, gamma_word(2)))
    engine.propagate()
    lo, hi = engine.interval(q)
    assert lo == F(1, 2)
    assert hi == F(1, 2)


def test_rule_power_ratio():
    engine = BoundEngine()
    w = commutator(X, Y)
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, w, gamma_word(3)))
    engine.add_fact(mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(3), 5), hi=3)
    engine.propagate()
    assert engine.interval(q) == (F(0), F(3, 5))
    assert "R4" in engine.explain(q)


def test_rule_stable_promotion_diagonal():
    engine = BoundEngine()
    body = gamma_word(2).body
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, body, gamma_word(2)))
    engine.add_fact(mk(engine, QuantityKind.L, Context.FREE, body, gamma_word(2), 3), hi=2)
    engine.propagate()
    assert engine.interval(q) == (F(1, 2), F(1, 2))
    assert "R5" in engine.explain(q) or "R7" in engine.explain(q)


def test_rule_stable_promotion_off_diagonal():
    engine = BoundEngine()
    template = commutator_product_word(2)
    w = commutator(X, Y) * commutator(X, Z)
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, w, template))
    engine.add_fact(mk(engine, QuantityKind.L, Context.FREE, w, template, 4), hi=3)
    engine.add_fact(
        mk(engine, QuantityKind.SL, Context.FREE, template.body, template),
        hi=F(3, 4),
    )
    engine.propagate()
    assert engine.interval(q) == (F(0), F(11, 16))
    assert "R5" in engine.explain(q)


def test_rule_fresh_head_stable():
    engine = BoundEngine()
    outer = grope_word(2)
    inner = commutator_product_word(2)
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, outer.body, outer))
    engine.declare(mk(engine, QuantityKind.SL, Context.FREE, inner.body, inner))
    engine.add_fact(
        mk(engine, QuantityKind.SCL, Context.FREE, inner.body), F(3, 2), F(3, 2)
    )
    engine.propagate()
    assert engine.interval(q) == (F(1, 2), F(7, 8))
    assert "R6" in engine.explain(q)


def test_rule_fresh_head_finite():
    engine = BoundEngine()
    body = gamma_word(3).body
    q = engine.declare(mk(engine, QuantityKind.L, Context.FREE, body, gamma_word(3), 3))
    engine.add_fact(
        mk(engine, QuantityKind.L, Context.FREE, gamma_word(2).body, gamma_word(2), 2),
        hi=3,
    )
    engine.propagate()
    assert engine.interval(q) == (F(1), F(4))
    assert "R6" in engine.explain(q)


def test_rule_chain_ceiling():
    engine = BoundEngine()
    for n, want in ((2, F(1, 2)), (3, F(3, 4)), (4, F(7, 8)), (6, F(31, 32))):
        body = gamma_word(n).body
        q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, body, gamma_word(n)))
        engine.propagate()
        lo, hi = engine.interval(q)
        assert hi == want
        assert lo == F(1, 2)


def test_rule_perfect_comparison():
    engine = BoundEngine()
    g = X * Y
    q = engine.declare(mk(engine, QuantityKind.SL, Context.PERFECT, g, gamma_word(3)))
    engine.add_fact(
        mk(engine, QuantityKind.SCL, Context.PERFECT, g), F(3, 2), F(3, 2)
    )
    engine.propagate()
    assert engine.interval(q) == (F(3, 2), F(3))
    assert "R8" in engine.explain(q)


def test_rule_perfect_comparison_reverse():
    engine = BoundEngine()
    g = X * Y
    scl_q = engine.declare(mk(engine, QuantityKind.SCL, Context.PERFECT, g))
    engine.add_fact(
        mk(engine, QuantityKind.SL, Context.PERFECT, g, gamma_word(4)), F(2), F(2)
    )
    engine.propagate()
    assert engine.interval(scl_q) == (F(1, 2), F(2))


def test_rule_perfect_comparison_not_in_free_context():
    engine = BoundEngine()
    g = X * Y
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, g, gamma_word(3)))
    engine.add_fact(mk(engine, QuantityKind.SCL, Context.FREE, g), F(3, 2), F(3, 2))
    engine.propagate()
    assert engine.interval(q) == (F(0), None)


def test_rule_gamma3_bridge_free_needs_depth():
    engine = BoundEngine()
    deep = grope_word(2).body  # vanishes to depth 3
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, deep, gamma_word(3)))
    engine.add_fact(
        mk(engine, QuantityKind.SL, Context.FREE, deep, GAMMA3_FAMILY),
        F(1, 4),
        F(1),
    )
    engine.propagate()
    lo, hi = engine.interval(q)
    assert hi == F(2)
    assert lo == F(1, 4)
    assert "R9" in engine.explain(q)

    shallow = commutator(X, Y)  # depth 2: the free-context gate must refuse
    other = BoundEngine()
    q2 = other.declare(mk(other, QuantityKind.SL, Context.FREE, shallow, gamma_word(3)))
    other.add_fact(
        mk(other, QuantityKind.SL, Context.FREE, shallow, GAMMA3_FAMILY), hi=1
    )
    other.propagate()
    assert other.interval(q2)[1] is None


def test_rule_gamma3_bridge_declared_contexts():
    engine = BoundEngine()
    g = X * Y
    q = engine.declare(mk(engine, QuantityKind.SL, Context.PERFECT, g, gamma_word(3)))
    engine.add_fact(
        mk(engine, QuantityKind.SL, Context.PERFECT, g, GAMMA3_FAMILY), hi=1
    )
    engine.propagate()
    assert engine.interval(q)[1] == F(2)


def test_rule_gamma3_bridge_reverse_transfer():
    engine = BoundEngine()
    g = X * Y
    partner = engine.declare(
        mk(engine, QuantityKind.SL, Context.PERFECT, g, GAMMA3_FAMILY)
    )
    engine.add_fact(
        mk(engine, QuantityKind.SL, Context.PERFECT, g, gamma_word(3)), F(1, 2), F(3, 2)
    )
    engine.propagate()
    assert engine.interval(partner) == (F(1, 4), F(3, 2))


def test_rule_gamma3_bridge_skips_over_budget_words():
    engine = BoundEngine()
    wide = Word()
    for i in range(1, 12):
        wide = wide * gen(i)
    q = engine.declare(mk(engine, QuantityKind.SL, Context.FREE, wide, gamma_word(3)))
    engine.add_fact(mk(engine, QuantityKind.SL, Context.FREE, wide, GAMMA3_FAMILY), hi=1)
    engine.propagate()
    assert engine.interval(q)[1] is None


def test_rule_unbalanced_vanish():
    engine = BoundEngine()
    lopsided = template_from_word(power(X, 2) * Y)
    for context in (Context.FREE, Context.PERFECT):
        q = engine.declare(
            mk(engine, QuantityKind.SL, context, commutator(X, Y), lopsided)
        )
        engine.propagate()
        assert engine.interval(q)[1] == F(0)
        assert "R10" in engine.explain(q)


def test_rule_block_division():
    engine = BoundEngine()
    u = power(commutator(X, Y), 2)
    q = engine.declare(
        mk(engine, QuantityKind.SL, Context.FREE, u, commutator_product_word(2))
    )
    engine.add_fact(mk(engine, QuantityKind.SCL, Context.FREE, u), hi=F(3, 2))
    engine.propagate()
    assert engine.interval(q) == (F(0), F(3, 4))
    assert "R12" in engine.explain(q)


def test_rule_exponent_splitting():
    engine = BoundEngine()
    w = commutator(X, Y)
    q = engine.declare(mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(2), 5))
    engine.add_fact(mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(2), 2), hi=1)
    engine.add_fact(mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(2), 3), hi=2)
    engine.propagate()
    assert engine.interval(q) == (F(1), F(3))
    assert "R13" in engine.explain(q)


def test_rule_inverse_mirror():
    engine = BoundEngine()
    w = commutator(X, Y)
    q = engine.declare(
        mk(engine, QuantityKind.L, Context.FREE, w.inverse(), gamma_word(2), 2)
    )
    engine.add_fact(mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(2), 2), hi=4)
    engine.propagate()
    assert engine.interval(q) == (F(1), F(4))
    assert "R13" in engine.explain(q)


def test_rule_one_step_beta():
    engine = BoundEngine()
    g = X * Y
    q = engine.declare(
        mk(engine, QuantityKind.SL, Context.PERFECT_SCL_ZERO, g, beta_word(2))
    )
    engine.add_fact(
        mk(engine, QuantityKind.L, Context.PERFECT_SCL_ZERO, g, gamma_word(3), 1),
        F(1),
        F(1),
    )
    engine.propagate()
    assert engine.interval(q)[1] == F(1)
    assert "R14" in engine.explain(q)

    # The same facts in a merely perfect context must not conclude anything.
    other = BoundEngine()
    q2 = other.declare(mk(other, QuantityKind.SL, Context.PERFECT, g, beta_word(2)))
    other.add_fact(
        mk(other, QuantityKind.L, Context.PERFECT, g, gamma_word(3), 1), F(1), F(1)
    )
    other.propagate()
    assert other.interval(q2)[1] is None


def test_rule_cl_alias_both_directions():
    engine = BoundEngine()
    w = commutator(X, Y) * commutator(X, Z)
    cl_q = engine.declare(mk(engine, QuantityKind.CL, Context.FREE, w))
    engine.add_fact(mk(engine, QuantityKind.L, Context.FREE, w, gamma_word(2), 1), F(1), F(2))
    engine.propagate()
    assert engine.interval(cl_q) == (F(1), F(2))

    other = BoundEngine()
    u = commutator(X, Y)
    l_q = other.declare(mk(other, QuantityKind.L, Context.PERFECT, u, gamma_word(2), 1))
    other.add_fact(mk(other, QuantityKind.CL, Context.PERFECT, u), F(2), F(3))
    other.propagate()
    assert other.interval(l_q) == (F(2), F(3))


# ---------------------------------------------------------------------------
# certificate and quotient entry points

def test_add_certificate_fact():
    engine = BoundEngine()
    cert = culler_identity(X, Y)
    q = engine.add_certificate_fact(commutator(X, Y), gamma_word(2), 3, cert)
    assert engine.interval(q) == (F(0), F(2))
    assert "CERTIFICATE" in engine.explain(q)


def test_add_certificate_fact_rejects_wrong_power():
    engine = BoundEngine()
    cert = culler_identity(X, Y)
    with pytest.raises(VerbaError):
        engine.add_certificate_fact(commutator(X, Y), gamma_word(2), 2, cert)


def test_add_certificate_fact_rejects_foreign_factors():
    engine = BoundEngine()
    cert = culler_identity(X, Y)
    with pytest.raises(VerbaError):
        engine.add_certificate_fact(commutator(X, Y), gamma_word(3), 3, cert)


def test_add_certificate_fact_rejects_broken_certificates():
    engine = BoundEngine()
    cert = Certificate(
        target=power(commutator(X, Y), 3),
        factors=(commutator_factor(X, Y),),
    )
    with pytest.raises(CertificateError):
        engine.add_certificate_fact(commutator(X, Y), gamma_word(2), 3, cert)


def test_add_certificate_fact_family_matching():
    engine = BoundEngine()
    inner = commutator(X, Y) * commutator(Z, gen(4))
    w = commutator(gen(5), inner)
    cert = Certificate(target=w, factors=(commutator_factor(gen(5), inner),))
    q = engine.add_certificate_fact(w, GAMMA3_FAMILY, 1, cert)
    assert engine.interval(q)[1] == F(1)

    plain = commutator(X, Y)
    bad = Certificate(target=plain, factors=(commutator_factor(X, Y),))
    with pytest.raises(VerbaError):
        engine.add_certificate_fact(plain, GAMMA3_FAMILY, 1, bad)


def test_add_quotient_floor():
    engine = BoundEngine()
    group = load_group("S3")
    flip = next(
        a
        for a in range(group.order)
        if a != group.identity and group.multiply(a, a) == group.identity
    )
    rotation = next(
        a
        for a in range(group.order)
        if a != group.identity and group.multiply(a, a) != group.identity
    )
    q = engine.declare("CL FREE [x,y]")
    got = engine.add_quotient_floor(q, group, {1: flip, 2: rotation})
    assert got == 1
    assert engine.interval(q) == (F(1), None)
    assert "QUOTIENT" in engine.explain(q)


def test_add_quotient_floor_unreachable_image():
    engine = BoundEngine()
    group = load_group("S3")
    flip = next(
        a
        for a in range(group.order)
        if a != group.identity and group.multiply(a, a) == group.identity
    )
    q = engine.declare("L FREE x | gamma2 @ 1")
    assert engine.add_quotient_floor(q, group, {1: flip}) is None
    assert engine.interval(q) == (F(0), None)


def test_add_quotient_floor_requires_length_kind():
    engine = BoundEngine()
    group = load_group("S3")
    with pytest.raises(VerbaError):
        engine.add_quotient_floor("SCL FREE [x,y]", group, {1: 0, 2: 0})
