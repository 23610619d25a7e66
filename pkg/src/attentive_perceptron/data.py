"""Sparse text ingestion, serialization, synthetic generators and shuffling."""

from __future__ import annotations

import enum
import gzip
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .types import BIAS_INDEX, ContractError, DomainError, LabeledExample


class ParseError(ValueError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class Dataset:
    examples: tuple
    dimension: int
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
        if self.dimension < 1:
            raise ContractError("dataset dimension must be positive")
        for ex in self.examples:
            if ex.max_index >= self.dimension:
                raise ContractError(f"example {ex.id} has index >= dimension {self.dimension}")

    @classmethod
    def from_examples(cls, examples: Iterable[LabeledExample], name: str = "", dimension: int = 0):
        examples = tuple(examples)
        dim = max([dimension, 1] + [ex.max_index + 1 for ex in examples])
        return cls(examples, dim, name)

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def __getitem__(self, i):
        return self.examples[i]

    def split(self, n_first: int) -> tuple["Dataset", "Dataset"]:
        a, b = self.examples[:n_first], self.examples[n_first:]
        return (Dataset(a, self.dimension, self.name + "[train]"),
                Dataset(b, self.dimension, self.name + "[test]"))


# ---------------------------------------------------------------------------
# sparse text format


def _parse_label(tok: str, map01: bool, line_no: Optional[int]) -> int:
    try:
        y = float(tok)
    except ValueError:
        raise ParseError(f"bad label {tok!r}", line_no) from None
    if y == 1.0:
        return 1
    if y == -1.0:
        return -1
    if y == 0.0 and map01:
        return -1
    raise ParseError(f"label must be +1 or -1, got {tok!r}", line_no)


def parse_sparse_line(
    line: str, id: int = 0, *, line_no: Optional[int] = None, map01: bool = False,
    l2norm: bool = False,
) -> LabeledExample:
    """Parse ``LABEL idx:val ...`` (1-based indices) and prepend the bias feature.

    >>> ex = parse_sparse_line("+1 1:0.5 3:2.0")
    >>> ex.indices.tolist(), ex.values.tolist(), ex.label
    ([0, 1, 3], [1.0, 0.5, 2.0], 1)
    """
    body = line.split("#", 1)[0].split()
    if not body:
        raise ParseError("empty line", line_no)
    label = _parse_label(body[0], map01, line_no)
    idx = [BIAS_INDEX]
    val = [1.0]
    for tok in body[1:]:
        i_str, sep, v_str = tok.partition(":")
        if not sep:
            raise ParseError(f"malformed token {tok!r}", line_no)
        try:
            i = int(i_str)
            v = float(v_str)
        except ValueError:
            raise ParseError(f"malformed token {tok!r}", line_no) from None
        if i < 1:
            raise ParseError(f"feature index must be >= 1, got {i}", line_no)
        if not math.isfinite(v):
            raise ParseError(f"non-finite value in {tok!r}", line_no)
        if i == idx[-1]:
            raise ParseError(f"duplicate index {i}", line_no)
        if i < idx[-1]:
            raise ParseError(f"non-increasing index {i} after {idx[-1]}", line_no)
        idx.append(i)
        val.append(v)
    values = np.asarray(val)
    if l2norm and values.size > 1:
        norm = np.linalg.norm(values[1:])
        if norm > 0:
            values[1:] /= norm
    return LabeledExample(np.asarray(idx), values, label, id)


def _open_text(path: Union[str, Path], mode: str = "rt"):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode, encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def parse_lines(lines: Iterable[str], name: str = "", *, map01=False, l2norm=False) -> Dataset:
    examples = []
    for line_no, line in enumerate(lines, start=1):
        if not line.split("#", 1)[0].strip():
            continue
        examples.append(
            parse_sparse_line(line, len(examples), line_no=line_no, map01=map01, l2norm=l2norm)
        )
    return Dataset.from_examples(examples, name)


def load_sparse(path: Union[str, Path], *, map01: bool = False, l2norm: bool = False) -> Dataset:
    """Load a sparse text file (``.gz`` decompressed transparently)."""
    with _open_text(path) as f:
        return parse_lines(f, Path(path).name, map01=map01, l2norm=l2norm)


def format_example(ex: LabeledExample) -> str:
    parts = ["+1" if ex.label == 1 else "-1"]
    for i, v in zip(ex.indices.tolist(), ex.values.tolist()):
        if i == BIAS_INDEX:
            continue
        parts.append(f"{i}:{v!r}")
    return " ".join(parts)


def dumps_sparse(dataset: Iterable[LabeledExample]) -> str:
    return "".join(format_example(ex) + "\n" for ex in dataset)


def save_sparse(dataset: Iterable[LabeledExample], path: Union[str, Path]) -> None:
    with _open_text(path, "wt") as f:
        f.write(dumps_sparse(dataset))


def loads_sparse(text: str, name: str = "", **kw) -> Dataset:
    return parse_lines(io.StringIO(text), name, **kw)


# ---------------------------------------------------------------------------
# synthetic data


class SynthKind(str, enum.Enum):
    GAUSSIAN_SEPARABLE = "gaussian-sep"
    GAUSSIAN_NOISY = "gaussian-noisy"
    RANDOM_WALK = "walk"


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic dataset.

    The teacher direction depends on ``seed`` only; ``sample_seed`` (default
    ``seed``) drives the examples, so train and test sets drawn with
    different sample seeds share a teacher.
    """

    kind: SynthKind = SynthKind.GAUSSIAN_SEPARABLE
    n_examples: int = 1000
    n_features: int = 20
    margin: float = 1.0
    flip_prob: float = 0.0
    seed: int = 0
    sample_seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SynthKind(self.kind))
        if self.n_examples < 1 or self.n_features < 1:
            raise DomainError("n_examples and n_features must be positive")
        if not self.margin > 0:
            raise DomainError("margin must be positive")
        if not 0.0 <= self.flip_prob < 0.5:
            raise DomainError("flip_prob must lie in [0, 0.5)")


def teacher_vector(spec: SynthSpec) -> np.ndarray:
    rng = np.random.default_rng([spec.seed, 0])
    u = rng.standard_normal(spec.n_features)
    return u / np.linalg.norm(u)


def _rows_to_dataset(X: np.ndarray, y: np.ndarray, name: str) -> Dataset:
    n, d = X.shape
    idx = np.arange(d + 1)
    ones = np.ones((n, 1))
    full = np.hstack([ones, X])
    examples = tuple(LabeledExample(idx, full[i], int(y[i]), i) for i in range(n))
    return Dataset(examples, d + 1, name)


def generate_synthetic(spec: SynthSpec) -> Dataset:
    """Deterministic synthetic dataset described by ``spec``.

    Gaussian kinds draw ``x ~ N(0, I)``, label by the teacher ``u`` and push
    every point ``margin`` further along ``label * u``. The random-walk kind
    stores ``+/-1`` feature values with label +1; under unit weights (and a
    zero bias weight) its margin terms are i.i.d. signs.
    """
    sample_seed = spec.seed if spec.sample_seed is None else spec.sample_seed
    rng = np.random.default_rng([sample_seed, 1])
    n, d = spec.n_examples, spec.n_features
    name = f"{spec.kind.value}-n{n}-d{d}-s{spec.seed}"
    if spec.kind is SynthKind.RANDOM_WALK:
        X = rng.choice(np.array([-1.0, 1.0]), size=(n, d))
        return _rows_to_dataset(X, np.ones(n, dtype=np.int64), name)
    u = teacher_vector(spec)
    X = rng.standard_normal((n, d))
    y = np.where(X @ u >= 0.0, 1, -1)
    X += spec.margin * y[:, None] * u[None, :]
    if spec.kind is SynthKind.GAUSSIAN_NOISY:
        flips = rng.random(n) < spec.flip_prob
        y = np.where(flips, -y, y)
    return _rows_to_dataset(X, y, name)


def walk_model(dimension: int) -> "np.ndarray":
    """Weights turning a random-walk example's features into its margin terms."""
    w = np.ones(dimension)
    w[BIAS_INDEX] = 0.0
    return w


def shuffle(dataset: Union[Dataset, Sequence[LabeledExample]], seed: int):
    """Fisher-Yates reordering driven by ``seed``; returns the same container kind."""
    examples = getattr(dataset, "examples", dataset)
    perm = np.random.default_rng(seed).permutation(len(examples))
    out = tuple(examples[i] for i in perm)
    if isinstance(dataset, Dataset):
        return Dataset(out, dataset.dimension, dataset.name)
    return out
