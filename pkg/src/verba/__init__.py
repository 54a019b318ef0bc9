"""Word arithmetic, rewrite certificates, and length bounds in free and finite groups."""
from __future__ import annotations

from .bounds import BoundEngine, Context, Quantity, QuantityKind
from .certificates import Certificate, Factor, FactorKind, parse_certificate
from .errors import (
    CertificateError,
    InconsistencyError,
    ParseError,
    ResourceBudgetError,
    UnknownNameError,
    VerbaError,
)
from .grammar import NameTable, canonical_table, format_word, parse
from .templates import (
    GAMMA3_FAMILY,
    Template,
    beta_word,
    commutator_product_word,
    gamma_word,
    grope_word,
    template_from_word,
)
from .words import EMPTY, Word, commutator, conjugate, gen, power, substitute

__version__ = "0.1.0"

__all__ = [
    "BoundEngine",
    "Certificate",
    "CertificateError",
    "Context",
    "EMPTY",
    "Factor",
    "FactorKind",
    "GAMMA3_FAMILY",
    "InconsistencyError",
    "NameTable",
    "ParseError",
    "Quantity",
    "QuantityKind",
    "ResourceBudgetError",
    "Template",
    "UnknownNameError",
    "VerbaError",
    "Word",
    "beta_word",
    "canonical_table",
    "commutator",
    "commutator_product_word",
    "conjugate",
    "format_word",
    "gamma_word",
    "gen",
    "grope_word",
    "parse",
    "parse_certificate",
    "power",
    "substitute",
    "template_from_word",
    "__version__",
]
