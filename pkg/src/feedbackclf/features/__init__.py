from .assemble import (
    FITTED_GROUPS,
    GROUP_ORDER,
    FeatureContext,
    FeatureVector,
    GroupCache,
    assemble,
    assemble_matrix,
    feature_dimension,
    group_names,
    group_values,
    normalize_group,
    normalize_spec,
)
from .extract import (
    KeywordList,
    SentimentLexicon,
    count_stopwords,
    count_words,
    default_keywords,
    default_sentiment_lexicon,
    default_stopwords,
    keyword_flags,
    pos_counts,
    score_sentiment,
    tense_counts,
)
from .scaling import Scaler, fit_scaler, scale
from .tfidf import DEFAULT_DF_BOUNDS, TfidfModel, fit_tfidf, transform_many, transform_tfidf

__all__ = [
    "DEFAULT_DF_BOUNDS", "FITTED_GROUPS", "GROUP_ORDER", "FeatureContext", "FeatureVector", "GroupCache",
    "KeywordList", "Scaler", "SentimentLexicon", "TfidfModel", "assemble", "assemble_matrix",
    "count_stopwords", "count_words", "default_keywords", "default_sentiment_lexicon", "default_stopwords",
    "feature_dimension", "fit_scaler", "fit_tfidf", "group_names", "group_values", "keyword_flags",
    "normalize_group", "normalize_spec", "pos_counts", "scale", "score_sentiment", "tense_counts",
    "transform_many", "transform_tfidf",
]
