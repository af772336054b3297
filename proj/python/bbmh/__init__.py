"""b-bit minwise hashing, sketches and linear learning."""

from ._core import (
    EmptySetError,
    Error,
    FormatError,
    InvalidArgument,
    IoError,
    bbit_constants,
    estimate_resemblance,
    exact_pb,
    expand,
    g_ratio,
    generate_analog,
    hash_file,
    match_count,
    minhash,
    predict,
    sketch,
    train,
    truncate_b,
    variance_bbit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
