"""Rewrite certificates: a target word as an explicit product of tagged factors.

A certificate records ``target = f_1 * f_2 * ... * f_k`` where each factor
expands to ``conjugator * base^(+/-1) * conjugator^-1``.  Verification is free
reduction of the expanded product.  A factor may additionally carry a witness
substitution showing its base is an instance of a template (a commutator, a
nested-commutator word, a commutator-of-commutators word, or an arbitrary
registered template), which is what downstream length bookkeeping counts.

Text form (one item per line; words in the expression grammar)::

    TARGET <word>
    FACTOR <kind>[:INV] <base word> CONJ <conjugator word>
    TEMPLATE <canonical template body>      (W_WORD factors only)
    WITNESS <var> = <word> ; <var> = <word> ; ...
    FLAG <free text>
    COUNTS <kind>=<n> ...

``TEMPLATE`` and ``WITNESS`` lines attach to the factor above them.
"""
from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field

from . import grammar
from .errors import CertificateError, ParseError
from .templates import Template, beta_word, gamma_word, template_from_word
from .words import EMPTY, Word, commutator, substitute


class FactorKind(enum.Enum):
    W_WORD = "W_WORD"
    GAMMA_N_WORD = "GAMMA_N_WORD"
    BETA2_WORD = "BETA2_WORD"
    COMMUTATOR = "COMMUTATOR"
    RAW = "RAW"


@dataclass(frozen=True, eq=True)
class Factor:
    """One factor: ``conjugator * base^(+/-1) * conjugator^-1`` plus its tag."""

    kind: FactorKind
    base: Word
    conjugator: Word = EMPTY
    inverted: bool = False
    template: Template | None = None
    witness: dict[int, Word] | None = field(default=None, hash=False)

    def expanded(self) -> Word:
        body = self.base.inverse() if self.inverted else self.base
        return self.conjugator * body * self.conjugator.inverse()

    def kind_token(self) -> str:
        token = self.kind.value
        if self.kind is FactorKind.GAMMA_N_WORD:
            token += f":{len(self.template.variables) if self.template else 0}"
        return token

    def check(self) -> None:
        """Raise ``CertificateError`` unless the tag's witness data is coherent."""
        if self.kind is FactorKind.RAW:
            if self.template is not None or self.witness is not None:
                raise CertificateError("RAW factors carry no template or witness")
            return
        if self.template is None or self.witness is None:
            raise CertificateError(f"{self.kind.value} factor needs a template and witness")
        if self.template.body is None:
            raise CertificateError("factor templates must be single words")
        image = substitute(self.template.body, self.witness)
        if image != self.base:
            raise CertificateError(
                f"witness does not produce the factor base: got {grammar.canonical_key(image)!r},"
                f" expected {grammar.canonical_key(self.base)!r}"
            )
        expected_vars = {
            FactorKind.COMMUTATOR: 2,
            FactorKind.BETA2_WORD: 4,
        }.get(self.kind)
        if expected_vars is not None and len(self.template.variables) != expected_vars:
            raise CertificateError(f"{self.kind.value} factor has a malformed template")


@dataclass(frozen=True, eq=True)
class Certificate:
    target: Word
    factors: tuple[Factor, ...]
    flags: tuple[str, ...] = ()

    def product(self) -> Word:
        out = EMPTY
        for factor in self.factors:
            out = out * factor.expanded()
        return out

    def verify(self) -> bool:
        """True when every factor is coherent and the product reduces to the target."""
        try:
            self.check()
        except CertificateError:
            return False
        return True

    def check(self) -> None:
        for factor in self.factors:
            factor.check()
        got = self.product()
        if got != self.target:
            raise CertificateError(
                f"factor product {grammar.canonical_key(got)!r} does not reduce to"
                f" target {grammar.canonical_key(self.target)!r}"
            )

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for factor in self.factors:
            token = factor.kind_token()
            out[token] = out.get(token, 0) + 1
        return dict(sorted(out.items()))

    def serialize(self, names: grammar.NameTable | None = None) -> str:
        def fmt(w: Word) -> str:
            return grammar.format_word(w, names)

        lines = [f"TARGET {fmt(self.target)}"]
        for factor in self.factors:
            token = factor.kind_token() + (":INV" if factor.inverted else "")
            lines.append(f"FACTOR {token} {fmt(factor.base)} CONJ {fmt(factor.conjugator)}")
            if factor.kind is FactorKind.W_WORD and factor.template is not None:
                lines.append(f"TEMPLATE {grammar.canonical_key(factor.template.body)}")
            if factor.witness is not None:
                parts = [f"{i} = {fmt(w)}" for i, w in sorted(factor.witness.items())]
                lines.append("WITNESS " + " ; ".join(parts))
        for flag in self.flags:
            lines.append(f"FLAG {flag}")
        counts = " ".join(f"{k}={v}" for k, v in self.counts().items())
        lines.append(f"COUNTS {counts}" if counts else "COUNTS -")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# factor constructors

def raw_factor(base: Word, conj: Word = EMPTY) -> Factor:
    return Factor(FactorKind.RAW, base=base, conjugator=conj)


def commutator_factor(u: Word, v: Word, conj: Word = EMPTY) -> Factor:
    return Factor(
        FactorKind.COMMUTATOR,
        base=commutator(u, v),
        conjugator=conj,
        template=gamma_word(2),
        witness={1: u, 2: v},
    )


def gamma3_factor(w1: Word, w2: Word, w3: Word, conj: Word = EMPTY) -> Factor:
    return Factor(
        FactorKind.GAMMA_N_WORD,
        base=commutator(w1, commutator(w2, w3)),
        conjugator=conj,
        template=gamma_word(3),
        witness={1: w1, 2: w2, 3: w3},
    )


def beta2_factor(p1: Word, p2: Word, p3: Word, p4: Word, conj: Word = EMPTY) -> Factor:
    return Factor(
        FactorKind.BETA2_WORD,
        base=commutator(commutator(p1, p2), commutator(p3, p4)),
        conjugator=conj,
        template=beta_word(2),
        witness={1: p1, 2: p2, 3: p3, 4: p4},
    )


def w_word_factor(
    template: Template,
    witness: dict[int, Word],
    conj: Word = EMPTY,
    inverted: bool = False,
) -> Factor:
    return Factor(
        FactorKind.W_WORD,
        base=template.instance(witness),
        conjugator=conj,
        inverted=inverted,
        template=template,
        witness=witness,
    )


def with_conjugator_prefix(factor: Factor, prefix: Word) -> Factor:
    return dataclasses.replace(factor, conjugator=prefix * factor.conjugator)


def _parse_kind(token: str) -> tuple[FactorKind, int | None, bool]:
    parts = token.split(":")
    inverted = parts[-1] == "INV"
    if inverted:
        parts = parts[:-1]
    try:
        kind = FactorKind(parts[0])
    except ValueError:
        raise ParseError(f"unknown factor kind {parts[0]!r}") from None
    n = None
    if kind is FactorKind.GAMMA_N_WORD:
        if len(parts) != 2 or not parts[1].isdigit():
            raise ParseError(f"malformed factor kind {token!r}")
        n = int(parts[1])
    elif len(parts) != 1:
        raise ParseError(f"malformed factor kind {token!r}")
    return kind, n, inverted


def parse_certificate(text: str, names: grammar.NameTable | None = None) -> Certificate:
    """Inverse of :meth:`Certificate.serialize` (canonical names by default)."""
    if names is None:
        names = grammar.canonical_table()
    target: Word | None = None
    rows: list[dict] = []
    flags: list[str] = []
    declared_counts: dict[str, int] | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, _, rest = line.partition(" ")
        rest = rest.strip()
        if tag == "TARGET":
            if target is not None:
                raise ParseError("duplicate TARGET line")
            target = grammar.parse(rest, names)
        elif tag == "FACTOR":
            token, _, remainder = rest.partition(" ")
            kind, n, inverted = _parse_kind(token)
            tokens = remainder.split()
            if "CONJ" not in tokens:
                raise ParseError("FACTOR line missing CONJ")
            split = tokens.index("CONJ")
            base = grammar.parse(" ".join(tokens[:split]), names)
            conj = grammar.parse(" ".join(tokens[split + 1 :]), names)
            template: Template | None = None
            if kind is FactorKind.COMMUTATOR:
                template = gamma_word(2)
            elif kind is FactorKind.GAMMA_N_WORD:
                template = gamma_word(n or 0)
            elif kind is FactorKind.BETA2_WORD:
                template = beta_word(2)
            rows.append(
                dict(kind=kind, base=base, conjugator=conj, inverted=inverted,
                     template=template, witness=None)
            )
        elif tag == "TEMPLATE":
            if not rows:
                raise ParseError("TEMPLATE line before any FACTOR")
            rows[-1]["template"] = template_from_word(
                grammar.parse(rest, grammar.canonical_table())
            )
        elif tag == "WITNESS":
            if not rows:
                raise ParseError("WITNESS line before any FACTOR")
            witness: dict[int, Word] = {}
            for part in rest.split(";"):
                var, eq, expr = part.partition("=")
                if not eq or not var.strip().isdigit():
                    raise ParseError(f"malformed WITNESS entry {part.strip()!r}")
                witness[int(var.strip())] = grammar.parse(expr.strip(), names)
            rows[-1]["witness"] = witness
        elif tag == "FLAG":
            flags.append(rest)
        elif tag == "COUNTS":
            declared_counts = {}
            if rest != "-":
                for part in rest.split():
                    key, eq, value = part.partition("=")
                    if not eq or not value.isdigit():
                        raise ParseError(f"malformed COUNTS entry {part!r}")
                    declared_counts[key] = int(value)
        else:
            raise ParseError(f"unknown certificate line {tag!r}")
    if target is None:
        raise ParseError("certificate has no TARGET line")
    cert = Certificate(
        target=target,
        factors=tuple(Factor(**row) for row in rows),
        flags=tuple(flags),
    )
    if declared_counts is not None and declared_counts != cert.counts():
        raise CertificateError(
            f"COUNTS line {declared_counts} disagrees with factors {cert.counts()}"
        )
    return cert
