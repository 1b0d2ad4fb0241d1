"""Synthetic feedback corpora with planted class cues, for tests and demos."""

from __future__ import annotations

import numpy as np

from .corpus import FeedbackDocument, LabelClass, LabeledDataset, Language, Source

_CUES = {
    Language.EN: {
        LabelClass.PROBLEM_REPORT: ["crash", "bug", "error", "terrible", "awful", "broken",
                                    "freeze", "fail", "glitch", "worst", "useless", "crashes"],
        LabelClass.INQUIRY: ["please", "add", "feature", "how", "wish", "help",
                             "option", "request", "support", "suggest", "could", "question"],
        LabelClass.IRRELEVANT: ["love", "great", "awesome", "amazing", "nice", "best",
                                "fantastic", "perfect", "excellent", "wonderful", "beautiful", "brilliant"],
    },
    Language.IT: {
        LabelClass.PROBLEM_REPORT: ["problema", "errore", "guasto", "pessimo", "schifo", "vergogna",
                                    "lento", "disservizio", "rete", "modem", "assurdo", "inutile"],
        LabelClass.INQUIRY: ["come", "quando", "aiuto", "assistenza", "informazione", "attivare",
                             "offerta", "costo", "chiedere", "fattura", "bolletta", "rimborso"],
        LabelClass.IRRELEVANT: ["grazie", "bello", "ottimo", "perfetto", "fantastico", "bravo",
                                "gentile", "felice", "contento", "eccellente", "top", "buono"],
    },
}

_FILLER = {
    Language.EN: ["the", "app", "this", "my", "phone", "today", "really", "just", "it", "is", "with", "and",
                  "screen", "time", "music", "photo", "game", "version", "after", "again", "video", "map"],
    Language.IT: ["il", "la", "mio", "oggi", "sempre", "ancora", "con", "e", "che", "per", "da", "casa",
                  "telefono", "giorno", "sera", "numero", "servizio", "cliente", "questo", "molto"],
}


def synthetic_dataset(n: int = 200, language=Language.EN, seed: int = 42, source: Source | None = None,
                      proportions=(1 / 3, 1 / 3, 1 / 3), cues_per_doc=(3, 4), filler_per_doc=(3, 8),
                      noise: float = 0.0, cue_vocabulary: int | None = 6) -> LabeledDataset:
    """Documents whose label is signalled by class cue words mixed into filler.

    ``noise`` is the chance that a document also receives one cue of another class.
    ``cue_vocabulary`` limits each class to its first that many cue words (None: all 12).
    """
    lang = Language(language)
    rng = np.random.default_rng(seed)
    source = source or (Source.APP_REVIEW if lang == Language.EN else Source.TWEET)
    classes = list(LabelClass)
    counts = np.floor(np.asarray(proportions, dtype=float) * n).astype(int)
    counts[0] += n - counts.sum()
    labels = [c for c, k in zip(classes, counts) for _ in range(k)]
    labels = [labels[i] for i in rng.permutation(len(labels))]
    cues = {c: words[:cue_vocabulary] for c, words in _CUES[lang].items()}
    filler = _FILLER[lang]
    docs = []
    for i, label in enumerate(labels):
        words = list(rng.choice(filler, size=rng.integers(filler_per_doc[0], filler_per_doc[1] + 1)))
        words += list(rng.choice(cues[label], size=rng.integers(cues_per_doc[0], cues_per_doc[1] + 1)))
        if noise and rng.random() < noise:
            other = classes[(classes.index(label) + 1 + rng.integers(0, 2)) % 3]
            words.append(str(rng.choice(cues[other])))
        words = [str(words[j]) for j in rng.permutation(len(words))]
        docs.append(FeedbackDocument(f"syn-{lang.value.lower()}-{i:05d}", " ".join(words), lang, source, label))
    return LabeledDataset(tuple(docs))
