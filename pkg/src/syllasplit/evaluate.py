"""Scoring of segmentation output against reference annotations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .envelope import EnvelopeParams
from .pipeline import PipelineConfig, SegmentationResult, segment_file

FULL = "full"
PARTIAL = "partial"
FAILED = "failed"


class SourceMismatchError(Exception):
    """Result and annotation refer to different audio files."""


@dataclass(frozen=True)
class ReferenceAnnotation:
    """What a correct segmentation of one file looks like.

    expected_spans, when present, are half-open (onset, end) pairs; a
    detected span matches when both boundaries lie within tolerance_samples.
    tolerance_samples None means "use delta at the file's sample rate"
    (970 at 44.1 kHz), since boundaries sharper than the discharge window
    are not meaningful.
    """

    source: str
    expected_syllable_count: int
    expected_spans: tuple[tuple[int, int], ...] | None = None
    tolerance_samples: int | None = None

    def __post_init__(self) -> None:
        if self.expected_syllable_count < 0:
            raise ValueError("expected_syllable_count must be non-negative")
        if self.tolerance_samples is not None and self.tolerance_samples < 0:
            raise ValueError("tolerance_samples must be non-negative")
        if self.expected_spans is not None:
            spans = tuple((int(a), int(b)) for a, b in self.expected_spans)
            previous_end = None
            for onset, end in spans:
                if onset >= end:
                    raise ValueError(f"invalid expected span [{onset}, {end})")
                if previous_end is not None and onset < previous_end:
                    raise ValueError("expected spans must be sorted and disjoint")
                previous_end = end
            object.__setattr__(self, "expected_spans", spans)


@dataclass(frozen=True)
class FileOutcome:
    source: str
    detected: int
    expected: int
    classification: str
    reason: str = ""


@dataclass(frozen=True)
class EvalReport:
    """Per-file classifications plus aggregate detection statistics."""

    per_file: tuple[FileOutcome, ...]

    @property
    def full(self) -> int:
        return sum(1 for o in self.per_file if o.classification == FULL)

    @property
    def partial(self) -> int:
        return sum(1 for o in self.per_file if o.classification == PARTIAL)

    @property
    def failed(self) -> int:
        return sum(1 for o in self.per_file if o.classification == FAILED)

    @property
    def detection_rate(self) -> float:
        if not self.per_file:
            return 0.0
        return (self.full + self.partial) / len(self.per_file)

    def to_dict(self) -> dict:
        per_file = []
        for o in self.per_file:
            entry = {
                "source": o.source,
                "detected": o.detected,
                "expected": o.expected,
                "classification": o.classification,
            }
            if o.reason:
                entry["reason"] = o.reason
            per_file.append(entry)
        return {
            "per_file": per_file,
            "totals": {
                "full": self.full,
                "partial": self.partial,
                "failed": self.failed,
                "detection_rate": self.detection_rate,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_table(self) -> str:
        """Aligned text table for terminal display."""
        rows = [("source", "detected", "expected", "class")]
        for o in self.per_file:
            rows.append((o.source, str(o.detected), str(o.expected), o.classification))
        widths = [max(len(row[col]) for row in rows) for col in range(4)]
        lines = [
            "  ".join(cell.ljust(widths[col]) for col, cell in enumerate(row)).rstrip()
            for row in rows
        ]
        lines.append(
            f"full {self.full}  partial {self.partial}  failed {self.failed}  "
            f"detection_rate {self.detection_rate:.3f}"
        )
        return "\n".join(lines) + "\n"


def _boundaries_match(expected: tuple[int, int], detected: tuple[int, int], tolerance: int) -> bool:
    return abs(expected[0] - detected[0]) <= tolerance and abs(expected[1] - detected[1]) <= tolerance


def matched_span_count(expected, detected, tolerance: int) -> int:
    """Largest one-to-one pairing of expected and detected spans within tolerance.

    Both lists are sorted and disjoint, so an optimal pairing exists with no
    crossings; the alignment DP below finds it. A maximum (rather than
    greedy) pairing keeps the count monotone as the tolerance grows.
    """
    n, m = len(expected), len(detected)
    best = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row = best[i]
        below = best[i + 1]
        for j in range(m - 1, -1, -1):
            take = 0
            if _boundaries_match(expected[i], detected[j], tolerance):
                take = 1 + below[j + 1]
            row[j] = max(take, below[j], row[j + 1])
    return best[0][0]


def classify(result: SegmentationResult, ref: ReferenceAnnotation) -> str:
    """full / partial / failed for one file.

    full: detected count equals the expected count and, when spans are
    annotated, every expected span is matched within tolerance. partial:
    at least one expected span matches but not full. failed: otherwise.
    Without span annotations only full/failed are decidable.
    """
    if str(result.source) != str(ref.source):
        raise SourceMismatchError(f"result for {result.source!r}, annotation for {ref.source!r}")
    detected = [(s.onset, s.end) for s in result.syllables]
    counts_agree = len(detected) == ref.expected_syllable_count
    if ref.expected_spans is None:
        return FULL if counts_agree else FAILED
    tolerance = ref.tolerance_samples
    if tolerance is None:
        tolerance = EnvelopeParams.from_sample_rate(result.sample_rate).delta
    matches = matched_span_count(ref.expected_spans, detected, tolerance)
    if counts_agree and matches == len(ref.expected_spans):
        return FULL
    if matches >= 1:
        return PARTIAL
    return FAILED


def load_manifest(path) -> list[ReferenceAnnotation]:
    """Parse a manifest: JSON array of {audio, expected_syllables, spans?, tolerance?}."""
    entries = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(entries, list):
        raise ValueError("manifest must be a JSON array")
    annotations = []
    for entry in entries:
        spans = entry.get("spans")
        annotations.append(
            ReferenceAnnotation(
                source=str(entry["audio"]),
                expected_syllable_count=int(entry["expected_syllables"]),
                expected_spans=(
                    tuple((int(s["onset"]), int(s["end"])) for s in spans)
                    if spans is not None
                    else None
                ),
                tolerance_samples=int(entry["tolerance"]) if "tolerance" in entry else None,
            )
        )
    return annotations


def evaluate_corpus(manifest_path, config: PipelineConfig = PipelineConfig()) -> EvalReport:
    """Segment and classify every manifest entry; entry failures are recorded, not raised."""
    outcomes = []
    for ref in load_manifest(manifest_path):
        try:
            result = segment_file(ref.source, config)
            outcomes.append(
                FileOutcome(
                    source=ref.source,
                    detected=len(result.syllables),
                    expected=ref.expected_syllable_count,
                    classification=classify(result, ref),
                )
            )
        except Exception as exc:  # per-file isolation: any error counts as failed
            outcomes.append(
                FileOutcome(
                    source=ref.source,
                    detected=0,
                    expected=ref.expected_syllable_count,
                    classification=FAILED,
                    reason=f"{type(exc).__name__}: {exc}",
                )
            )
    return EvalReport(tuple(outcomes))
