"""polarscale: latent semantic scaling of documents along seed-word concepts.

Train a word2vec model (or an SVD baseline) on a local corpus, expand a
handful of seed patterns into polarity scores for every vocabulary word, and
score documents as frequency-weighted averages. Includes seed perplexity for
model selection, an evaluation benchmark, and kernel-smoothed time series.
"""

from .corpus import (
    DEFAULT_MIN_COUNT,
    DEFAULT_TOKENIZER,
    Document,
    PatternSet,
    TokenizedDocument,
    TokenizerConfig,
    Vocabulary,
    apply_vocabulary,
    build_vocabulary,
    expand_patterns,
    prepare_corpus,
    read_corpus,
    read_dictionary_dir,
    read_patterns,
    tokenize,
    tokenize_document,
    tokenize_documents,
    write_corpus,
)
from .datasets import (
    TUTORIAL_CONCEPTS,
    copy_tutorial_files,
    dictionary_dir_path,
    example_grid_path,
    load_tutorial_corpus,
    tutorial_corpus_path,
    tutorial_seeds_path,
)
from .embedding import (
    ALGORITHM_CBOW,
    ALGORITHM_SG,
    ALGORITHM_SVD,
    EmbeddingModel,
    W2VConfig,
    context_probabilities,
    init_matrices,
    negative_sampling_gradients,
    negative_sampling_loss,
    predict_probability,
    train_word2vec,
)
from .errors import (
    ConfigError,
    DataError,
    OutOfVocabularyError,
    PolarscaleError,
    TrainingDivergedError,
    UnmatchedPatternWarning,
)
from .evalkit import (
    BENCHMARK_COLUMNS,
    DEFAULT_BANDWIDTH_DAYS,
    DEFAULT_N_BOOT,
    FAMILY_MINI_DICTIONARY,
    FAMILY_SVD_SPATIAL,
    FAMILY_W2V_PROBABILISTIC,
    FAMILY_W2V_SPATIAL,
    SERIES_COLUMNS,
    BenchmarkError,
    BenchmarkRow,
    SeedSample,
    SmoothedPoint,
    TimeSeriesPoint,
    classify_documents,
    correlate_tables,
    pearson,
    read_benchmark_rows,
    read_series,
    run_benchmark,
    sample_seed_sets,
    smooth_series,
    write_benchmark_rows,
    write_series,
)
from .model_io import export_text, load_model, save_model
from .modelfit import (
    REPORT_COLUMNS,
    DocumentDetail,
    GridSearchError,
    PerplexityReport,
    document_seed_probabilities,
    grid_search,
    parse_grid_line,
    read_grid_file,
    seed_perplexity,
    write_perplexity_reports,
)
from .scaling import (
    KIND_DICTIONARY,
    KIND_PROBABILISTIC,
    KIND_SPATIAL,
    MODE_BIPOLAR,
    MODE_UNIPOLAR,
    ScoreRow,
    ScoreTable,
    SeedSet,
    WordPolarity,
    combine_scores,
    dictionary_word_scores,
    make_seed_set,
    probabilistic_word_scores,
    read_score_table,
    score_documents,
    spatial_word_scores,
    write_score_table,
    write_word_polarity,
)
from .svd import (
    SentenceTermMatrix,
    SVDConfig,
    build_sentence_term_matrix,
    train_svd_model,
    truncated_svd,
)
from .synth import (
    TOPIC_STEMS,
    TOWNS,
    PlantedCorpus,
    make_planted_corpus,
    make_tutorial_corpus,
    topic_dictionary,
)
from .util import derive_seed, format_float, log_sigmoid, stable_sigmoid

__version__ = "0.1.0"

__all__ = [
    "ALGORITHM_CBOW",
    "ALGORITHM_SG",
    "ALGORITHM_SVD",
    "BENCHMARK_COLUMNS",
    "BenchmarkError",
    "BenchmarkRow",
    "ConfigError",
    "DEFAULT_BANDWIDTH_DAYS",
    "DEFAULT_MIN_COUNT",
    "DEFAULT_N_BOOT",
    "DEFAULT_TOKENIZER",
    "DataError",
    "Document",
    "DocumentDetail",
    "EmbeddingModel",
    "FAMILY_MINI_DICTIONARY",
    "FAMILY_SVD_SPATIAL",
    "FAMILY_W2V_PROBABILISTIC",
    "FAMILY_W2V_SPATIAL",
    "GridSearchError",
    "KIND_DICTIONARY",
    "KIND_PROBABILISTIC",
    "KIND_SPATIAL",
    "MODE_BIPOLAR",
    "MODE_UNIPOLAR",
    "OutOfVocabularyError",
    "PatternSet",
    "PerplexityReport",
    "PlantedCorpus",
    "PolarscaleError",
    "REPORT_COLUMNS",
    "SERIES_COLUMNS",
    "SVDConfig",
    "ScoreRow",
    "ScoreTable",
    "SeedSample",
    "SeedSet",
    "SentenceTermMatrix",
    "SmoothedPoint",
    "TOPIC_STEMS",
    "TOWNS",
    "TUTORIAL_CONCEPTS",
    "TimeSeriesPoint",
    "TokenizedDocument",
    "TokenizerConfig",
    "TrainingDivergedError",
    "UnmatchedPatternWarning",
    "Vocabulary",
    "W2VConfig",
    "WordPolarity",
    "apply_vocabulary",
    "build_sentence_term_matrix",
    "build_vocabulary",
    "classify_documents",
    "combine_scores",
    "context_probabilities",
    "copy_tutorial_files",
    "correlate_tables",
    "derive_seed",
    "dictionary_dir_path",
    "dictionary_word_scores",
    "document_seed_probabilities",
    "example_grid_path",
    "expand_patterns",
    "export_text",
    "format_float",
    "grid_search",
    "init_matrices",
    "load_model",
    "load_tutorial_corpus",
    "log_sigmoid",
    "make_planted_corpus",
    "make_seed_set",
    "make_tutorial_corpus",
    "negative_sampling_gradients",
    "negative_sampling_loss",
    "parse_grid_line",
    "pearson",
    "predict_probability",
    "prepare_corpus",
    "probabilistic_word_scores",
    "read_benchmark_rows",
    "read_corpus",
    "read_dictionary_dir",
    "read_grid_file",
    "read_patterns",
    "read_score_table",
    "read_series",
    "run_benchmark",
    "sample_seed_sets",
    "save_model",
    "score_documents",
    "seed_perplexity",
    "smooth_series",
    "spatial_word_scores",
    "stable_sigmoid",
    "tokenize",
    "tokenize_document",
    "tokenize_documents",
    "topic_dictionary",
    "train_svd_model",
    "train_word2vec",
    "truncated_svd",
    "tutorial_corpus_path",
    "tutorial_seeds_path",
    "write_benchmark_rows",
    "write_corpus",
    "write_perplexity_reports",
    "write_score_table",
    "write_series",
    "write_word_polarity",
]
