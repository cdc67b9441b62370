"""Program generation, interpretation and LSTM training."""

from ._core import (
    ConfigError,
    EncodingError,
    EvalError,
    ProgramSyntaxError,
    Sample,
    TrainingError,
    UsageError,
    __version__,
    assign_split,
    char_statistics,
    cli,
    double_input,
    evaluate,
    generate,
    generate_program,
    make_addition,
    make_memorize,
    reverse_input,
    stats_report,
    train,
)

__all__ = [
    "ConfigError",
    "EncodingError",
    "EvalError",
    "ProgramSyntaxError",
    "Sample",
    "TrainingError",
    "UsageError",
    "__version__",
    "assign_split",
    "char_statistics",
    "cli",
    "double_input",
    "evaluate",
    "generate",
    "generate_program",
    "make_addition",
    "make_memorize",
    "reverse_input",
    "stats_report",
    "train",
]
