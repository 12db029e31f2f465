"""Detection of political content in German multi-platform text.

A lean toolkit combining dictionary-based classifiers (curated term
lists, log-likelihood keyword induction, unique-term-ratio scoring with
calibrated thresholds) and five from-scratch bag-of-words learners
(multinomial/Bernoulli naive Bayes, logistic regression,
passive-aggressive, SGD hinge), plus an HTML-to-text extractor for
noisy web-tracking captures and an evaluation harness that runs the
full model x preprocessing benchmark grid.
"""

from agora.corpus import (
    Document,
    LabeledCorpus,
    SplitSpec,
    Denylist,
    POLITICAL,
    NON_POLITICAL,
    load_jsonl,
    save_jsonl,
    label_from_tags,
    split_train_test,
    filter_denylist,
)
from agora.preprocess import (
    PreprocessMode,
    TokenizedDoc,
    StopwordList,
    LemmaTable,
    tokenize,
    remove_stopwords,
    stem,
    lemmatize,
    apply_mode,
)
from agora.dictionary import (
    Dictionary,
    RatioScore,
    ThresholdModel,
    load_dictionary,
    keyness_ll,
    build_ll_dictionary,
    merge_dictionaries,
    score_document,
    classify,
    calibrate_threshold,
)
from agora.html_extract import HtmlPage, ExtractedText, extract_text, noise_score
from agora.evaluation import (
    ConfusionMatrix,
    ClassMetrics,
    EvalReport,
    confusion,
    class_metrics,
    macro_report,
)

__version__ = "0.1.0"

__all__ = [
    "Document",
    "LabeledCorpus",
    "SplitSpec",
    "Denylist",
    "POLITICAL",
    "NON_POLITICAL",
    "load_jsonl",
    "save_jsonl",
    "label_from_tags",
    "split_train_test",
    "filter_denylist",
    "PreprocessMode",
    "TokenizedDoc",
    "StopwordList",
    "LemmaTable",
    "tokenize",
    "remove_stopwords",
    "stem",
    "lemmatize",
    "apply_mode",
    "Dictionary",
    "RatioScore",
    "ThresholdModel",
    "load_dictionary",
    "keyness_ll",
    "build_ll_dictionary",
    "merge_dictionaries",
    "score_document",
    "classify",
    "calibrate_threshold",
    "HtmlPage",
    "ExtractedText",
    "extract_text",
    "noise_score",
    "ConfusionMatrix",
    "ClassMetrics",
    "EvalReport",
    "confusion",
    "class_metrics",
    "macro_report",
]
