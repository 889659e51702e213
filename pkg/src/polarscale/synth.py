"""Deterministic synthetic corpora.

Two generators, both reproducible from an rng seed:

* :func:`make_planted_corpus` mixes an invented topical vocabulary into a
  Zipf-distributed background vocabulary at a per-document intensity, so the
  true topic share of every document is known. Topic words all start with
  'z' or 'q' and background words never do, which keeps the topic glob
  patterns exact.
* :func:`make_tutorial_corpus` writes template-based English newsletter items
  for two fictional towns with seasonal concept intensities, suitable for the
  full train / score / combine / smooth walkthrough.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass

import numpy as np

from .corpus import Document, PatternSet

# --------------------------------------------------------------------------
# Planted-topic corpus
# --------------------------------------------------------------------------

TOPIC_STEMS = ("zarn", "zelt", "zimb", "zorv", "zukr", "qeld", "qirn", "qompa", "qauv", "qyst")
_TOPIC_SUFFIXES = ("", "a", "ine", "or")

_ONSETS = ("b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w",
           "br", "dr", "fl", "gr", "kl", "pr", "st", "tr")
_VOWELS = ("a", "e", "i", "o", "u")
_CODAS = ("", "", "n", "r", "s", "t", "l")


@dataclass(frozen=True)
class PlantedCorpus:
    """A corpus with known per-document topic intensity."""

    documents: list[Document]
    dictionary: PatternSet
    topic_terms: tuple[str, ...]
    intensities: dict[str, float]


def _background_vocabulary(rng: np.random.Generator, size: int) -> list[str]:
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < size:
        n_syllables = 2 + int(rng.random() < 0.35)
        word = "".join(
            _ONSETS[rng.integers(len(_ONSETS))]
            + _VOWELS[rng.integers(len(_VOWELS))]
            + _CODAS[rng.integers(len(_CODAS))]
            for _ in range(n_syllables)
        )
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def topic_dictionary() -> PatternSet:
    """Glob patterns covering every planted topic form."""
    return PatternSet(patterns=tuple(f"{stem}*" for stem in TOPIC_STEMS), label="planted-topic")


def make_planted_corpus(
    n_docs: int = 2000,
    rng_seed: int = 0,
    n_background: int = 900,
    topic_rate: float = 0.6,
    leak_rate: float = 0.02,
    n_clusters: int = 5,
    confounders_per_cluster: int = 3,
    confounder_rate: float = 0.08,
    zipf_exponent: float = 1.05,
) -> PlantedCorpus:
    """Generate documents whose topic-word share is planted per document.

    Each document draws an intensity theta; every token is a topic word with
    probability theta * topic_rate, otherwise a background word from a Zipf
    distribution. Intensities are bimodal (many near-zero, a solid mass of
    clearly topical documents) so document scores have real spread.

    Structure and noise keep the task from being trivial: the topic stems are
    split into ``n_clusters`` subtopics and each document leans toward a few
    of them, so which seeds occur in a document is predictable from its other
    tokens, not just how many; topic words leak into background documents at
    ``leak_rate``; and each subtopic has confounder words that co-occur with
    it without being part of the dictionary.
    """
    if len(TOPIC_STEMS) % n_clusters != 0:
        raise ValueError("n_clusters must divide the number of topic stems")
    rng = np.random.default_rng(rng_seed)
    n_confounders = n_clusters * confounders_per_cluster
    background = _background_vocabulary(rng, n_background + n_confounders)
    confounder_clusters = tuple(
        tuple(background[c * confounders_per_cluster : (c + 1) * confounders_per_cluster])
        for c in range(n_clusters)
    )
    background = background[n_confounders:]
    topic_terms = tuple(
        stem + suffix for stem in TOPIC_STEMS for suffix in _TOPIC_SUFFIXES
    )
    stems_per_cluster = len(TOPIC_STEMS) // n_clusters
    forms_per_cluster = stems_per_cluster * len(_TOPIC_SUFFIXES)
    clusters = tuple(
        topic_terms[c * forms_per_cluster : (c + 1) * forms_per_cluster]
        for c in range(n_clusters)
    )

    ranks = np.arange(1, n_background + 1, dtype=np.float64)
    bg_probs = 1.0 / (ranks + 2.7) ** zipf_exponent
    bg_probs /= bg_probs.sum()
    bg_cdf = np.cumsum(bg_probs)

    form_probs = 1.0 / (np.arange(1, forms_per_cluster + 1, dtype=np.float64) ** 0.4)
    form_probs /= form_probs.sum()
    form_cdf = np.cumsum(form_probs)

    documents: list[Document] = []
    intensities: dict[str, float] = {}
    start = _dt.date(2021, 1, 1)
    for d in range(n_docs):
        # bimodal intensity: background-only vs. clearly topical documents
        theta = 0.0 if rng.random() < 0.45 else float(rng.beta(2.2, 2.8))
        p_topic = theta * topic_rate + (leak_rate if theta == 0.0 else 0.0)
        p_confounder = confounder_rate if theta > 0.0 else 0.0
        # sparse subtopic mix: most documents lean into one or two clusters
        mix = rng.dirichlet(np.full(n_clusters, 0.25))
        mix_cdf = np.cumsum(mix)
        sentences = []
        for _ in range(int(rng.integers(4, 9))):
            tokens = []
            for _ in range(int(rng.integers(8, 13))):
                u = rng.random()
                cluster = int(np.searchsorted(mix_cdf, rng.random()))
                if u < p_topic:
                    form = int(np.searchsorted(form_cdf, rng.random()))
                    tokens.append(clusters[cluster][form])
                elif u < p_topic + p_confounder:
                    pool = confounder_clusters[cluster]
                    tokens.append(pool[int(rng.integers(len(pool)))])
                else:
                    tokens.append(background[int(np.searchsorted(bg_cdf, rng.random()))])
            sentences.append(" ".join(tokens) + ".")
        doc_id = f"doc{d:05d}"
        documents.append(Document(
            id=doc_id,
            text=" ".join(sentences),
            date=start + _dt.timedelta(days=d % 730),
            tags=("topical",) if theta > 0.25 else ("background",),
        ))
        intensities[doc_id] = theta
    return PlantedCorpus(
        documents=documents,
        dictionary=topic_dictionary(),
        topic_terms=topic_terms,
        intensities=intensities,
    )


# --------------------------------------------------------------------------
# Tutorial corpus: two-town newsletter
# --------------------------------------------------------------------------

TOWNS = ("riverside", "hillcrest")

_ACHIEVEMENT = (
    "victory", "victories", "champion", "champions", "award", "awards", "medal",
    "medals", "record", "records", "triumph", "success", "successes", "winning",
    "winners", "trophy", "achievement", "achievements", "excellence", "excellent",
    "skill", "skills", "skilled", "goal", "goals", "prize", "prizes",
)

_HEALTH = (
    "health", "healthy", "wellness", "clinic", "clinics", "doctor", "doctors",
    "nurse", "nurses", "fitness", "exercise", "exercises", "therapy", "recovery",
    "vaccination", "vaccinations", "checkup", "checkups", "nutrition", "hygiene",
    "wellbeing", "rehabilitation",
)

_NEUTRAL = (
    "council", "meeting", "library", "bridge", "road", "roads", "market", "school",
    "schools", "garden", "gardens", "festival", "volunteers", "residents", "weather",
    "budget", "repairs", "harvest", "river", "park", "parks", "museum", "choir",
    "bakery", "orchard", "workshop", "lanterns", "newsletter", "fountain", "plaza",
)

_TEMPLATES = (
    "the {town} {n1} reported a season of {c1} and {c2} with {c3} at the {n2}",
    "residents of {town} celebrated the {c1} and the {c2} with a {c3} {n1}",
    "this week the {town} {n1} discussed {c1} {c2} and planned {c3} programs",
    "a {n1} at the {town} {n2} brought {c1} {c2} and {c3} to many families",
    "the {town} newsletter praised the {c1} and {c2} shown during the {n1}",
    "after the {n1} the {town} {n2} announced new {c1} and {c2} programs",
    "children from {town} schools presented their {c1} and {c2} at the {n1}",
    "the {n1} committee thanked {town} volunteers for the {c1} {c2} and {c3}",
    "visitors admired the {n1} while the {town} {n2} hosted a {c1} {c2} day",
    "a quiet month in {town} with {n1} repairs and steady {c1} and {c2}",
)


def _fill(template: str, town: str, concept_pool: tuple[str, ...],
          rng: np.random.Generator) -> str:
    out = template
    for slot in ("{c1}", "{c2}", "{c3}"):
        if slot in out:
            out = out.replace(slot, concept_pool[int(rng.integers(len(concept_pool)))], 1)
    for slot in ("{n1}", "{n2}"):
        if slot in out:
            out = out.replace(slot, _NEUTRAL[int(rng.integers(len(_NEUTRAL)))], 1)
    return out.replace("{town}", town).capitalize() + "."


def make_tutorial_corpus(n_docs: int = 560, rng_seed: int = 20240) -> list[Document]:
    """Newsletter items for two fictional towns over two years.

    Riverside trends toward achievement stories and hillcrest toward health
    stories, with a seasonal swing, so smoothed per-town score series have
    visible, opposite shapes.
    """
    rng = np.random.default_rng(rng_seed)
    start = _dt.date(2023, 1, 3)
    documents: list[Document] = []
    for d in range(n_docs):
        town = TOWNS[d % 2]
        date = start + _dt.timedelta(days=int(rng.integers(0, 728)))
        season = np.sin(2 * np.pi * (date.toordinal() - start.toordinal()) / 365.0)
        if town == "riverside":
            p_achievement = 0.62 + 0.25 * season
        else:
            p_achievement = 0.38 - 0.25 * season
        sentences = []
        for _ in range(int(rng.integers(3, 7))):
            pool = _ACHIEVEMENT if rng.random() < p_achievement else _HEALTH
            template = _TEMPLATES[int(rng.integers(len(_TEMPLATES)))]
            sentences.append(_fill(template, town, pool, rng))
        documents.append(Document(
            id=f"news{d:04d}",
            text=" ".join(sentences),
            date=date,
            tags=(town, "newsletter"),
        ))
    return documents
