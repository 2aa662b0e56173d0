"""Detection and recursive splitting of over-long syllable spans.

A detected span long enough to hold more than one syllable is re-segmented
with a raised threshold (the base threshold times epsilon per level), and
the procedure recurses into any piece that is still too long, nesting-doll
style, until either everything is short enough or max_depth is reached.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .audio_io import InvalidSpanError
from .envelope import EnvelopeTrace
from .segmentation import (
    SyllableSpan,
    binarize,
    locate_syllables,
    purge_short_runs,
    run_length_encode,
)

# Corpus statistics behind the default length limit (samples at 44.1 kHz):
# a span one standard deviation above the mean syllable length is presumed
# to contain more than one syllable.
MEAN_SYLLABLE_SAMPLES = 6543
SYLLABLE_SAMPLES_STD = 5467
DEFAULT_SUPERSYLLABLE_LIMIT = MEAN_SYLLABLE_SAMPLES + SYLLABLE_SAMPLES_STD  # 12010

DEFAULT_EPSILON = 1.25
DEFAULT_MAX_DEPTH = 3
DEFAULT_MIN_RUN_LEN = 1746  # 1.8 * 970, the purge length at 44.1 kHz defaults


@dataclass(frozen=True)
class SupersyllableParams:
    """Split policy for spans of at least `limit` samples.

    epsilon must exceed 1: a split threshold at or below the base one
    cannot separate anything the base pass did not. min_run_len is the
    same purge length used by the top-level pass.
    """

    limit: int = DEFAULT_SUPERSYLLABLE_LIMIT
    epsilon: float = DEFAULT_EPSILON
    max_depth: int = DEFAULT_MAX_DEPTH
    min_run_len: int = DEFAULT_MIN_RUN_LEN

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise ValueError("limit must be >= 1")
        if self.epsilon <= 1.0:
            raise ValueError("epsilon must be greater than 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_run_len < 1:
            raise ValueError("min_run_len must be >= 1")


def is_supersyllable(span: SyllableSpan, limit: int = DEFAULT_SUPERSYLLABLE_LIMIT) -> bool:
    """True when the span is at least `limit` samples long."""
    return span.length >= limit


def break_supersyllable(
    trace: EnvelopeTrace,
    span: SyllableSpan,
    base_threshold: float,
    params: SupersyllableParams,
    depth: int = 0,
) -> list[SyllableSpan]:
    """Re-segment one long span at threshold base * epsilon^(depth + 1).

    The span's slice of the envelope goes through the same binarize /
    run-length / purge / locate sequence, and sub-spans are shifted back to
    absolute positions. If the raised threshold yields nothing, or one piece
    covering the whole span, the span is returned unsplit and flagged.
    Pieces still at or over the limit are broken again at depth + 1 until
    max_depth, after which they are flagged instead.
    """
    if span.onset < 0 or span.end > trace.values.size:
        raise InvalidSpanError(
            f"span [{span.onset}, {span.end}) outside trace of {trace.values.size} samples"
        )
    if depth > params.max_depth:
        raise ValueError("depth exceeds max_depth")
    if span.length < params.limit:
        return [span]
    raised = base_threshold * params.epsilon ** (depth + 1)
    window = trace.values[span.onset : span.end]
    runs = purge_short_runs(run_length_encode(binarize(window, raised)), params.min_run_len)
    pieces = locate_syllables(runs)
    covers_all = len(pieces) == 1 and pieces[0].onset == 0 and pieces[0].end == span.length
    if not pieces or covers_all:
        return [replace(span, is_supersyllable=True, split_depth=depth)]
    resolved: list[SyllableSpan] = []
    for piece in pieces:
        child = SyllableSpan(span.onset + piece.onset, span.onset + piece.end, split_depth=depth + 1)
        if child.length < params.limit:
            resolved.append(child)
        elif depth + 1 <= params.max_depth:
            resolved.extend(break_supersyllable(trace, child, base_threshold, params, depth + 1))
        else:
            resolved.append(replace(child, is_supersyllable=True))
    return resolved


def resolve_all(
    trace: EnvelopeTrace,
    spans: list[SyllableSpan],
    base_threshold: float,
    params: SupersyllableParams,
) -> list[SyllableSpan]:
    """Break every supersyllable in a sorted span list; others pass through."""
    resolved: list[SyllableSpan] = []
    for span in spans:
        if is_supersyllable(span, params.limit):
            resolved.extend(break_supersyllable(trace, span, base_threshold, params, depth=0))
        else:
            resolved.append(span)
    return sorted(resolved, key=lambda s: s.onset)
