"""Commutator identities and the rewrite rules that turn them into certificates.

Every public rule returns a :class:`~verba.certificates.Certificate` that has
already been checked by free reduction, with conjugators written out
explicitly -- nothing is left as "some conjugate".  The five base identities
are exposed both as word equalities (``base_identity``) and through the rules
that iterate them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import grammar
from .certificates import (
    Certificate,
    Factor,
    beta2_factor as _beta2_factor,
    commutator_factor as _commutator_factor,
    gamma3_factor as _gamma3_factor,
    raw_factor as _raw,
    w_word_factor as _w_factor,
    with_conjugator_prefix as _prefix_conj,
)
from .errors import CertificateError, ParseError
from .templates import Template, gamma_word, template_from_word, visible_commutator
from .words import (
    EMPTY,
    Word,
    commutator,
    conjugate,
    gen,
    in_commutator_subgroup,
    power,
)


def verify_identity(*forms: Word) -> bool:
    """True when all the given (already reduced) words are equal."""
    return all(form == forms[0] for form in forms[1:])


def base_identity(i: int, x: Word, y: Word, z: Word | None = None) -> tuple[Word, ...]:
    """The ``i``-th stock identity, instantiated; all returned words are equal.

    1. ``[x,y] = [y^x, x^-1]``
    2. ``[x,y]^-1 = [y,x] = [x^y, y^-1]``
    3. ``[x,yz] = [x,y] [x,z]^y = [x,y] [x,z] [[z,x],y]``
    4. ``[xy,z] = [x,z] [y,z]^(x^z) = [x,z] [y,z] [[z,y],x^z]``
    5. ``[[y,x],z^x] [[x,z],y^z] [[z,y],x^y] = 1``
    """
    if i in (3, 4, 5) and z is None:
        raise ValueError(f"identity {i} needs three words")
    if i == 1:
        return (commutator(x, y), commutator(conjugate(y, x), x.inverse()))
    if i == 2:
        return (
            commutator(x, y).inverse(),
            commutator(y, x),
            commutator(conjugate(x, y), y.inverse()),
        )
    if i == 3:
        return (
            commutator(x, y * z),
            commutator(x, y) * conjugate(commutator(x, z), y),
            commutator(x, y) * commutator(x, z) * commutator(commutator(z, x), y),
        )
    if i == 4:
        return (
            commutator(x * y, z),
            commutator(x, z) * conjugate(commutator(y, z), conjugate(x, z)),
            commutator(x, z) * commutator(y, z) * commutator(commutator(z, y), conjugate(x, z)),
        )
    if i == 5:
        return (hall_witt(x, y, z), EMPTY)
    raise ValueError(f"no identity numbered {i}")


def hall_witt(x: Word, y: Word, z: Word) -> Word:
    """``[[y,x],z^x] [[x,z],y^z] [[z,y],x^y]`` -- reduces to the identity."""
    return (
        commutator(commutator(y, x), conjugate(z, x))
        * commutator(commutator(x, z), conjugate(y, z))
        * commutator(commutator(z, y), conjugate(x, y))
    )


def _checked(target: Word, factors: Sequence[Factor], flags: Sequence[str] = ()) -> Certificate:
    cert = Certificate(target=target, factors=tuple(factors), flags=tuple(flags))
    cert.check()
    return cert


# ---------------------------------------------------------------------------
# rewrite rules

def culler_factors(x: Word, y: Word) -> tuple[Word, Word]:
    """The two commutators whose product is ``[x,y]^3``."""
    a = commutator(conjugate(y, x), conjugate(x, y.inverse()) * power(x, -2))
    b = commutator(conjugate(x, y.inverse()), power(y, 2))
    return a, b


def culler_identity(x: Word, y: Word) -> Certificate:
    """``[x,y]^3`` as a product of two explicit commutators."""
    a, b = culler_factors(x, y)
    return _checked(
        power(commutator(x, y), 3),
        [
            _commutator_factor(conjugate(y, x), conjugate(x, y.inverse()) * power(x, -2)),
            _commutator_factor(conjugate(x, y.inverse()), power(y, 2)),
        ],
    )


def culler_chain_squares(x: Word, y: Word) -> Certificate:
    """``([x,y]^2)^6`` as five squared commutators.

    Squaring the two-commutator expression for ``[x,y]^3`` twice and shuffling
    with the exact filler ``c = [b^-1, b^-1 a^-1 b^-1]`` (which satisfies
    ``abab = a^2 b^2 c``) gives ``(ab)^4 = a^2 b^2 c^2 (a^2)^(c^-1) (b^2)^(c^-1)``,
    and ``(ab)^4 = [x,y]^12`` is the sixth power of ``[x,y]^2``.
    """
    a, b = culler_factors(x, y)
    c_first = b.inverse()
    c_second = b.inverse() * a.inverse() * b.inverse()
    square = template_from_word(
        power(commutator(gen(1), gen(2)), 2), label="square_of_commutator"
    )
    witness_a = {1: conjugate(y, x), 2: conjugate(x, y.inverse()) * power(x, -2)}
    witness_b = {1: conjugate(x, y.inverse()), 2: power(y, 2)}
    witness_c = {1: c_first, 2: c_second}
    c = commutator(c_first, c_second)
    return _checked(
        power(power(commutator(x, y), 2), 6),
        [
            _w_factor(square, witness_a),
            _w_factor(square, witness_b),
            _w_factor(square, witness_c),
            _w_factor(square, witness_a, conj=c.inverse()),
            _w_factor(square, witness_b, conj=c.inverse()),
        ],
    )


def culler_power_pair(k: int) -> Certificate:
    """``[x, y^k]^3`` as two instances of the template ``[x1, x2^k]``.

    Substituting ``y -> y^k`` into the three-to-two identity gives factors
    ``[(y^x)^k, q]`` and ``[x^(y^-k), (y^2)^k]``.  The first has its power in
    the wrong slot, so it is recorded as the *inverse* of ``[q, (y^x)^k]``,
    which is a template instance; inverses count the same.
    """
    if k < 1:
        raise ValueError("culler_power_pair needs k >= 1")
    x, y = gen(1), gen(2)
    yk = power(y, k)
    template = template_from_word(commutator(gen(1), power(gen(2), k)))
    q = conjugate(x, yk.inverse()) * power(x, -2)
    return _checked(
        power(commutator(x, yk), 3),
        [
            _w_factor(template, {1: q, 2: conjugate(y, x)}, inverted=True),
            _w_factor(template, {1: conjugate(x, yk.inverse()), 2: power(y, 2)}),
        ],
    )


def herd_powers(g: Word, h: Word, n: int) -> Certificate:
    """``g^n h^n = (gh)^n`` times ``n-1`` explicit conjugated commutators.

    The ``i``-th extra factor is ``[g^i, h]`` conjugated by ``h^-i g^-i h^-1``.
    """
    if n < 1:
        raise ValueError("herd_powers needs n >= 1")
    factors = [_raw(power(g * h, n))]
    for i in range(1, n):
        conj = power(h, -i) * power(g, -i) * h.inverse()
        factors.append(_commutator_factor(power(g, i), h, conj=conj))
    return _checked(power(g, n) * power(h, n), factors)


def rotate_product(ws: Sequence[Word], k: int) -> Certificate:
    """``(w1 ... wm)^k = w1^k`` times ``(m-1)k`` conjugates of the later ``w_j``.

    Every extra factor is some ``w_j`` (``j >= 2``) conjugated by a power of
    ``w1``.
    """
    if not ws:
        raise ValueError("rotate_product needs at least one word")
    if k < 0:
        raise ValueError("rotate_product needs k >= 0")
    head = ws[0]
    factors = [_raw(power(head, k))]
    for i in range(k - 1, -1, -1):
        conj = power(head, -i)
        for w in ws[1:]:
            factors.append(_raw(w, conj=conj))
    target = EMPTY
    for w in ws:
        target = target * w
    return _checked(power(target, k), factors)


def telescope_line(
    gs: Sequence[Word], before: Sequence[int], after: Sequence[int]
) -> Certificate:
    """Difference of two straight-line products of powers, factor by factor.

    Writes ``(g1^a1 ... gm^am)^-1 (g1^b1 ... gm^bm)`` as ``m`` factors, where
    the factor for position ``i`` is ``g_i^(b_i - a_i)`` conjugated by the
    inverse of the suffix ``g_{i+1}^{b_{i+1}} ... g_m^{b_m}``; factors appear
    in order ``i = m .. 1``.
    """
    if not (len(gs) == len(before) == len(after)):
        raise ValueError("telescope_line needs equally long word and exponent lists")
    suffix = EMPTY  # g_{i+1}^{b_{i+1}} ... g_m^{b_m}, maintained right to left
    factors: list[Factor] = []
    for g, a, b in zip(reversed(gs), reversed(before), reversed(after)):
        factors.append(_raw(power(g, b - a), conj=suffix.inverse()))
        suffix = power(g, b) * suffix
    left = EMPTY
    right = EMPTY
    for g, a, b in zip(gs, before, after):
        left = left * power(g, a)
        right = right * power(g, b)
    return _checked(left.inverse() * right, factors)


def square_to_gamma3(a: Word, b: Word, n: int) -> Certificate:
    """``[a,b]^(2^n) = [a^(2^n), b]`` times ``2^n - 1`` nested-commutator factors.

    Iterates the doubling step ``[A,b]^2 = [A^2,b] [A^b,[b,A]]``.  The extra
    factors carry nested-commutator witnesses; they are tagged as such only
    when ``b`` has vanishing exponent sums, and are downgraded to RAW with an
    explanatory flag otherwise.
    """
    if n < 0:
        raise ValueError("square_to_gamma3 needs n >= 0")
    if commutator(a, b) == EMPTY:
        return _checked(EMPTY, [])
    tagged = in_commutator_subgroup(b)
    tail: list[Factor] = []
    for j in range(n):
        head_word = commutator(power(a, 2**j), b)
        step = _gamma3_factor(conjugate(power(a, 2**j), b), b, power(a, 2**j))
        if not tagged:
            step = _raw(step.base)
        prefix = head_word.inverse()
        tail = [step] + [_prefix_conj(f, prefix) for f in tail] + tail
    head = _commutator_factor(power(a, 2**n), b)
    flags = ()
    if not tagged and n >= 1:
        flags = ("nested-commutator tags withheld: second input has nonzero exponent sums",)
    return _checked(power(commutator(a, b), 2**n), [head] + tail, flags)


def gamma3_triangle(g: Word, k: Word, m: int) -> Certificate:
    """``g^m k^m (gk)^-m`` as exactly ``m(m-1)/2`` conjugates of ``[g,k]``.

    Combines ``herd_powers`` with the expansion
    ``[g^i, k] = prod_t [g,k]^((g^k)^t)`` and pushes the trailing ``(gk)^-m``
    through as a conjugation.
    """
    if m < 0:
        raise ValueError("gamma3_triangle needs m >= 0")
    shift = power(g * k, m)
    g_in_k = conjugate(g, k)
    factors: list[Factor] = []
    for j in range(2, m + 1):
        sigma = power(k, -(j - 1)) * power(g, -(j - 1)) * k.inverse()
        for t in range(j - 1):
            conj = shift * sigma * power(g_in_k, t)
            factors.append(_commutator_factor(g, k, conj=conj))
    target = power(g, m) * power(k, m) * power(g * k, m).inverse()
    return _checked(target, factors)


def hall_witt_split(
    g: Word,
    a: Word,
    b: Word,
    a_pair: tuple[Word, Word] | None = None,
    b_pair: tuple[Word, Word] | None = None,
) -> Certificate:
    """``[g,[a,b]]`` as two factors via the three-term identity.

    With ``c = b^-1 g b`` the identity gives
    ``[g,[a,b]] = [[b,c], a^c] [[c,a], b^a]``.  When ``a`` and ``b`` are single
    commutators (supplied as ``a_pair``/``b_pair`` or found syntactically) both
    factors carry commutator-of-commutators witnesses; otherwise they are RAW
    with a flag.
    """
    if commutator(g, commutator(a, b)) == EMPTY:
        return _checked(EMPTY, [])
    c = conjugate(g, b.inverse())
    a_pair = a_pair or visible_commutator(a)
    b_pair = b_pair or visible_commutator(b)
    for name, word, pair in (("a", a, a_pair), ("b", b, b_pair)):
        if pair is not None and commutator(*pair) != word:
            raise CertificateError(f"supplied witness pair for {name} is not a splitting")
    if a_pair is not None and b_pair is not None:
        factors = [
            _beta2_factor(b, c, conjugate(a_pair[0], c), conjugate(a_pair[1], c)),
            _beta2_factor(c, a, conjugate(b_pair[0], a), conjugate(b_pair[1], a)),
        ]
        flags: tuple[str, ...] = ()
    else:
        factors = [
            _raw(commutator(commutator(b, c), conjugate(a, c))),
            _raw(commutator(commutator(c, a), conjugate(b, a))),
        ]
        flags = ("commutator-of-commutators tags withheld: inputs not split as commutators",)
    return _checked(commutator(g, commutator(a, b)), factors, flags)


def oddball_step(x: Word, y: Word, z: Word, n: int) -> Certificate:
    """``[x,[y,z]] [x,[y,z]^n]`` as ``[x,[y,z]^(n+1)]`` times one tagged factor.

    The identity behind it: ``[a,b][a,c] = [a,bc] [[a,c],b]^[c,a]``.
    """
    if n < 1:
        raise ValueError("oddball_step needs n >= 1")
    yz = commutator(y, z)
    if commutator(x, yz) == EMPTY:
        return _checked(EMPTY, [])
    head = _commutator_factor(x, power(yz, n + 1))
    tail = _beta2_factor(x, power(yz, n), y, z, conj=commutator(power(yz, n), x))
    target = commutator(x, yz) * commutator(x, power(yz, n))
    return _checked(target, [head, tail])


def oddball_iterate(x: Word, y: Word, z: Word, n: int) -> Certificate:
    """``[x,[y,z]]^n = [x,[y,z]^n]`` times ``n-1`` commutator-of-commutator factors."""
    if n < 1:
        raise ValueError("oddball_iterate needs n >= 1")
    yz = commutator(y, z)
    if commutator(x, yz) == EMPTY:
        return _checked(EMPTY, [])
    factors = [_commutator_factor(x, power(yz, n))]
    for k in range(n - 1, 0, -1):
        factors.append(
            _beta2_factor(x, power(yz, k), y, z, conj=commutator(power(yz, k), x))
        )
    return _checked(power(commutator(x, yz), n), factors)


# ---------------------------------------------------------------------------
# CLI registry

@dataclass(frozen=True)
class RewriteRule:
    name: str
    usage: str
    summary: str
    build: Callable[[list[str], grammar.NameTable], Certificate]


def _words_arg(text: str, names: grammar.NameTable) -> list[Word]:
    return [grammar.parse(part, names) for part in text.split(";") if part.strip()]


def _ints_arg(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ParseError(f"bad integer list {text!r}") from exc


def _int_arg(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ParseError(f"bad integer {text!r}") from exc


def _expect(args: list[str], count: int, usage: str) -> None:
    if len(args) != count:
        raise ParseError(f"expected {count} arguments: {usage}")


def _make_registry() -> dict[str, RewriteRule]:
    def rule(name: str, usage: str, summary: str):
        def wrap(fn):
            registry[name] = RewriteRule(name, usage, summary, fn)
            return fn

        return wrap

    registry: dict[str, RewriteRule] = {}

    @rule("culler_identity", "<x> <y>", "[x,y]^3 as two commutators")
    def _(args, names):
        _expect(args, 2, "<x> <y>")
        return culler_identity(grammar.parse(args[0], names), grammar.parse(args[1], names))

    @rule("culler_chain_squares", "<x> <y>", "([x,y]^2)^6 as five squared commutators")
    def _(args, names):
        _expect(args, 2, "<x> <y>")
        return culler_chain_squares(
            grammar.parse(args[0], names), grammar.parse(args[1], names)
        )

    @rule("culler_power_pair", "<k>", "[x,y^k]^3 as two [x1,x2^k] instances")
    def _(args, names):
        _expect(args, 1, "<k>")
        return culler_power_pair(_int_arg(args[0]))

    @rule("herd_powers", "<g> <h> <n>", "g^n h^n as (gh)^n and n-1 commutators")
    def _(args, names):
        _expect(args, 3, "<g> <h> <n>")
        return herd_powers(
            grammar.parse(args[0], names), grammar.parse(args[1], names), _int_arg(args[2])
        )

    @rule("rotate_product", "<k> <w1> [<w2> ...]", "(w1...wm)^k as w1^k and (m-1)k conjugates")
    def _(args, names):
        if len(args) < 2:
            raise ParseError("expected at least 2 arguments: <k> <w1> [<w2> ...]")
        return rotate_product([grammar.parse(a, names) for a in args[1:]], _int_arg(args[0]))

    @rule(
        "telescope_line",
        "<g1;g2;...> <a1,a2,...> <b1,b2,...>",
        "compare two straight-line power products",
    )
    def _(args, names):
        _expect(args, 3, "<g1;g2;...> <a1,a2,...> <b1,b2,...>")
        return telescope_line(_words_arg(args[0], names), _ints_arg(args[1]), _ints_arg(args[2]))

    @rule("square_to_gamma3", "<a> <b> <n>", "[a,b]^(2^n) via doubling")
    def _(args, names):
        _expect(args, 3, "<a> <b> <n>")
        return square_to_gamma3(
            grammar.parse(args[0], names), grammar.parse(args[1], names), _int_arg(args[2])
        )

    @rule("gamma3_triangle", "<g> <k> <m>", "g^m k^m (gk)^-m as m(m-1)/2 commutators")
    def _(args, names):
        _expect(args, 3, "<g> <k> <m>")
        return gamma3_triangle(
            grammar.parse(args[0], names), grammar.parse(args[1], names), _int_arg(args[2])
        )

    @rule("hall_witt_split", "<g> <a> <b>", "[g,[a,b]] as two factors")
    def _(args, names):
        _expect(args, 3, "<g> <a> <b>")
        return hall_witt_split(
            grammar.parse(args[0], names),
            grammar.parse(args[1], names),
            grammar.parse(args[2], names),
        )

    @rule("oddball_step", "<x> <y> <z> <n>", "[x,[y,z]] [x,[y,z]^n] merged")
    def _(args, names):
        _expect(args, 4, "<x> <y> <z> <n>")
        return oddball_step(
            grammar.parse(args[0], names),
            grammar.parse(args[1], names),
            grammar.parse(args[2], names),
            _int_arg(args[3]),
        )

    @rule("oddball_iterate", "<x> <y> <z> <n>", "[x,[y,z]]^n merged step by step")
    def _(args, names):
        _expect(args, 4, "<x> <y> <z> <n>")
        return oddball_iterate(
            grammar.parse(args[0], names),
            grammar.parse(args[1], names),
            grammar.parse(args[2], names),
            _int_arg(args[3]),
        )

    return registry


REWRITE_RULES: dict[str, RewriteRule] = _make_registry()
