"""Label validation and reconciliation against a things/stuff taxonomy.

Free-form words coming back from a language model are first checked for
the expected identification code, then normalized and matched against the
dataset vocabulary: exact name matches resolve directly, everything else
falls back to a nearest-neighbor search in word-embedding space. Words
whose best match is an uncountable "stuff" category are dropped.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    DimensionError,
    DomainError,
    EmptyResponseError,
    ParseError,
    ResponseInvalidError,
)

log = logging.getLogger(__name__)

CategoryKind = Literal["things", "stuff"]
ResolutionOutcome = Literal[
    "exact_things",
    "exact_stuff_dropped",
    "nearest_things_retained",
    "nearest_stuff_dropped",
    "unknown_dropped",
]

RETAINED_OUTCOMES = ("exact_things", "nearest_things_retained")


def normalize_label(word: str) -> str:
    """Lowercase, trim and collapse internal whitespace."""
    return " ".join(word.strip().lower().split())


@dataclass(frozen=True)
class TaxonomyCategory:
    id: int
    name: str
    supercategory: str = ""
    kind: CategoryKind = "things"


@dataclass(frozen=True)
class Taxonomy:
    """Category vocabulary partitioned into countable things and stuff."""

    categories: tuple[TaxonomyCategory, ...]

    def __post_init__(self):
        seen: dict[str, TaxonomyCategory] = {}
        for cat in self.categories:
            if cat.kind not in ("things", "stuff"):
                raise ConfigurationError(
                    f"category {cat.name!r}: kind must be 'things' or 'stuff'"
                )
            key = normalize_label(cat.name)
            if not key:
                raise ConfigurationError("category with empty name")
            if key in seen:
                raise ConfigurationError(f"duplicate category name {cat.name!r}")
            seen[key] = cat
        object.__setattr__(self, "_by_name", seen)

    def lookup(self, word: str) -> Optional[TaxonomyCategory]:
        return self._by_name.get(normalize_label(word))

    @property
    def things(self) -> tuple[TaxonomyCategory, ...]:
        return tuple(c for c in self.categories if c.kind == "things")

    @property
    def stuff(self) -> tuple[TaxonomyCategory, ...]:
        return tuple(c for c in self.categories if c.kind == "stuff")

    @classmethod
    def from_json(cls, document: str,
                  stuff_names: Iterable[str] = ()) -> "Taxonomy":
        """Load from a JSON list of {id, name, supercategory?, kind?} objects."""
        try:
            raw = json.loads(document)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid taxonomy JSON: {e.msg}", offset=e.pos) from e
        if not isinstance(raw, list):
            raise ParseError("taxonomy document must be a JSON list")
        stuff = {normalize_label(s) for s in stuff_names}
        cats = []
        for k, entry in enumerate(raw):
            if not isinstance(entry, dict):
                raise ParseError(f"taxonomy[{k}]: expected an object")
            try:
                cid = int(entry["id"])
                name = str(entry["name"])
            except (KeyError, TypeError, ValueError) as e:
                raise ParseError(f"taxonomy[{k}]: needs integer id and name") from e
            kind = entry.get("kind")
            if kind is None:
                kind = "stuff" if normalize_label(name) in stuff else "things"
            if kind not in ("things", "stuff"):
                raise ParseError(f"taxonomy[{k}].kind: expected 'things' or 'stuff'")
            cats.append(TaxonomyCategory(id=cid, name=name,
                                         supercategory=str(entry.get("supercategory", "")),
                                         kind=kind))
        return cls(categories=tuple(cats))

    @classmethod
    def from_file(cls, path: str | Path,
                  stuff_names: Iterable[str] = ()) -> "Taxonomy":
        return cls.from_json(Path(path).read_text(encoding="utf-8"), stuff_names)


class EmbeddingTable:
    """Immutable word -> vector map loaded from a plain-text table.

    File format: one entry per line, ``word v1 v2 ... vd`` separated by
    whitespace; phrases use underscores in place of spaces. Zero vectors
    and dimension mismatches are rejected at load time.
    """

    def __init__(self, entries: Mapping[str, Sequence[float]]):
        if not entries:
            raise ConfigurationError("embedding table is empty")
        vectors: dict[str, np.ndarray] = {}
        dimension: int | None = None
        for word, values in entries.items():
            vec = np.asarray(values, dtype=float)
            if vec.ndim != 1 or vec.size == 0:
                raise DimensionError(f"embedding for {word!r} must be a flat vector")
            if dimension is None:
                dimension = int(vec.size)
            elif vec.size != dimension:
                raise DimensionError(
                    f"embedding for {word!r} has dimension {vec.size}, "
                    f"expected {dimension}"
                )
            if not np.isfinite(vec).all():
                raise DomainError(f"embedding for {word!r} has non-finite entries")
            if float(np.linalg.norm(vec)) == 0.0:
                raise DomainError(f"embedding for {word!r} is the zero vector")
            vectors[normalize_label(word)] = vec
        self.dimension = int(dimension or 0)
        self._vectors = vectors

    def __contains__(self, word: str) -> bool:
        return self.vector(word) is not None

    def __len__(self) -> int:
        return len(self._vectors)

    def vector(self, word: str) -> Optional[np.ndarray]:
        """Exact lookup, trying the underscore spelling for phrases."""
        key = normalize_label(word)
        vec = self._vectors.get(key)
        if vec is None and " " in key:
            vec = self._vectors.get(key.replace(" ", "_"))
        return vec

    def phrase_vector(self, word: str) -> tuple[Optional[np.ndarray], bool]:
        """Vector for a word or phrase.

        Whole-phrase lookup first; multi-word phrases without an entry fall
        back to averaging their word vectors. Returns (vector, averaged).
        """
        vec = self.vector(word)
        if vec is not None:
            return vec, False
        parts = normalize_label(word).split(" ")
        if len(parts) < 2:
            return None, False
        found = [self._vectors[p] for p in parts if p in self._vectors]
        if not found:
            return None, False
        mean = np.mean(found, axis=0)
        if float(np.linalg.norm(mean)) == 0.0:
            return None, True
        return mean, True

    @classmethod
    def from_text(cls, text: str) -> "EmbeddingTable":
        entries: dict[str, list[float]] = {}
        for ln, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ParseError("embedding line needs a word and values", line=ln)
            try:
                entries[parts[0]] = [float(v) for v in parts[1:]]
            except ValueError as e:
                raise ParseError(f"bad embedding value: {e}", line=ln) from e
        return cls(entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "EmbeddingTable":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class LabelResolution:
    """Outcome of reconciling one word against the taxonomy."""

    input_word: str
    outcome: ResolutionOutcome
    matched_category: Optional[int] = None
    similarity: Optional[float] = None
    phrase_averaged: bool = False

    @property
    def retained(self) -> bool:
        return self.outcome in RETAINED_OUTCOMES


def parse_llm_response(raw: str, expected_code: str) -> list[str]:
    """Validate a label response and split it into normalized words.

    The identification code must occur before the label list; labels are
    comma-separated, trimmed, lowercased, deduplicated order-preserving.
    """
    idx = raw.find(expected_code)
    if idx < 0:
        raise ResponseInvalidError(
            f"response does not contain the identification code {expected_code!r}"
        )
    rest = raw[idx + len(expected_code):].lstrip(" \t\r\n:;,.-")
    words: list[str] = []
    seen: set[str] = set()
    for token in rest.split(","):
        word = normalize_label(token)
        if word and word not in seen:
            seen.add(word)
            words.append(word)
    if not words:
        raise EmptyResponseError("no labels left after cleaning the response")
    return words


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    """(a . b) / (|a| |b|), clipped into [-1, 1] against rounding spill."""
    va = np.asarray(a, dtype=float)
    vb = np.asarray(b, dtype=float)
    if va.shape != vb.shape or va.ndim != 1:
        raise DimensionError(f"vector shapes differ: {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise DomainError("cosine similarity undefined for zero vectors")
    value = float(np.dot(va, vb) / (na * nb))
    return max(-1.0, min(1.0, value))


def _category_vectors(taxonomy: Taxonomy,
                      embeddings: EmbeddingTable) -> list[tuple[TaxonomyCategory, np.ndarray]]:
    pairs = []
    for cat in sorted(taxonomy.categories, key=lambda c: c.id):
        vec, _ = embeddings.phrase_vector(cat.name)
        if vec is None:
            log.warning("category %r has no embedding; excluded from matching",
                        cat.name)
            continue
        pairs.append((cat, vec))
    return pairs


def resolve_label(word: str, taxonomy: Taxonomy,
                  embeddings: EmbeddingTable) -> LabelResolution:
    """Resolve one word against the taxonomy.

    Exact name matches win; otherwise the nearest category by cosine
    similarity decides, with ties broken by ascending category id. Words
    matching (exactly or nearest) a stuff category are dropped, as are
    words absent from the embedding vocabulary.
    """
    return _resolve(word, taxonomy, embeddings, None)


def resolve_labels(words: Iterable[str], taxonomy: Taxonomy,
                   embeddings: EmbeddingTable) -> list[LabelResolution]:
    """Batch variant of :func:`resolve_label` computing category vectors once."""
    if not taxonomy.categories:
        raise ConfigurationError("taxonomy has no categories")
    cat_vectors = _category_vectors(taxonomy, embeddings)
    return [_resolve(w, taxonomy, embeddings, cat_vectors) for w in words]


def _resolve(word: str, taxonomy: Taxonomy, embeddings: EmbeddingTable,
             cat_vectors) -> LabelResolution:
    if not taxonomy.categories:
        raise ConfigurationError("taxonomy has no categories")
    w = normalize_label(word)
    exact = taxonomy.lookup(w)
    if exact is not None:
        outcome = "exact_things" if exact.kind == "things" else "exact_stuff_dropped"
        return LabelResolution(input_word=w, outcome=outcome,
                               matched_category=exact.id)
    vec, averaged = embeddings.phrase_vector(w)
    if vec is None:
        log.warning("word %r not in embedding vocabulary; dropped", w)
        return LabelResolution(input_word=w, outcome="unknown_dropped")
    if cat_vectors is None:
        cat_vectors = _category_vectors(taxonomy, embeddings)
    if not cat_vectors:
        raise ConfigurationError("no taxonomy category has an embedding")
    best_cat = None
    best_sim = -math.inf
    for cat, cvec in cat_vectors:
        sim = cosine_similarity(vec, cvec)
        if sim > best_sim:
            best_sim = sim
            best_cat = cat
    assert best_cat is not None
    if best_cat.kind == "stuff":
        outcome = "nearest_stuff_dropped"
    else:
        outcome = "nearest_things_retained"
    return LabelResolution(input_word=w, outcome=outcome,
                           matched_category=best_cat.id,
                           similarity=best_sim, phrase_averaged=averaged)
