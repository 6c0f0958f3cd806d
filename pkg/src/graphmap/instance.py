"""Problem instances: a machine graph and a program graph of equal order.

The text format is the classic QAP layout: the order n followed by two n x n
integer matrices, all whitespace separated.  The first matrix holds the
machine distances, the second the program communication flows.  Optima for
named instances come from a built-in registry extended by an ``optima.txt``
sidecar next to the instance file.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

import numpy as np

# Best known objective values for the named benchmark instances this package
# is tuned around.  Extend via an optima.txt sidecar, not by editing this.
KNOWN_OPTIMA: dict[str, int] = {
    "tai27e01": 2558,
    "tai45e01": 6412,
    "tai75e01": 14488,
    "tai125e01": 35426,
    "tai175e01": 57540,
    "tai343e01": 145862,
    "tai729e01": 469650,
}


@dataclasses.dataclass
class Instance:
    """An immutable-by-convention problem instance.

    distances[u, v] is the communication cost between machine vertices u, v;
    flows[k, p] the traffic between program vertices k, p.  Both are square,
    non-negative, zero on the diagonal, and stored as C-contiguous int64.
    """

    name: str
    distances: np.ndarray
    flows: np.ndarray
    known_optimum: int | None = None

    def __post_init__(self) -> None:
        self.distances = _checked_matrix(self.distances, "distances")
        self.flows = _checked_matrix(self.flows, "flows")
        if self.distances.shape != self.flows.shape:
            raise ValueError(
                f"matrix orders differ: distances {self.distances.shape[0]}, "
                f"flows {self.flows.shape[0]}"
            )
        if self.n < 2:
            raise ValueError(f"instance order must be at least 2, got {self.n}")

    @property
    def n(self) -> int:
        return self.distances.shape[0]


def _checked_matrix(mat, label: str) -> np.ndarray:
    a = np.ascontiguousarray(mat, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{label} matrix must be square, got shape {a.shape}")
    if (a < 0).any():
        raise ValueError(f"{label} matrix has negative entries")
    if np.diagonal(a).any():
        raise ValueError(f"{label} matrix has nonzero diagonal entries")
    return a


def parse_instance(text: str, name: str = "unnamed") -> Instance:
    """Parse the text format.  Errors report the offending 1-based token index."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty instance text")
    values = []
    for pos, tok in enumerate(tokens, start=1):
        try:
            values.append(int(tok))
        except ValueError:
            raise ValueError(f"token {pos}: expected an integer, got {tok!r}") from None
    n = values[0]
    if n < 2:
        raise ValueError(f"token 1: instance order must be at least 2, got {n}")
    expected = 1 + 2 * n * n
    if len(values) < expected:
        raise ValueError(
            f"truncated instance: expected {expected} tokens for order {n}, "
            f"got {len(values)}"
        )
    if len(values) > expected:
        raise ValueError(
            f"token {expected + 1}: trailing data, expected exactly "
            f"{expected} tokens for order {n}"
        )
    for pos, v in enumerate(values[1:], start=2):
        if v < 0:
            raise ValueError(f"token {pos}: negative entry {v}")
    body = np.asarray(values[1:], dtype=np.int64)
    distances = body[: n * n].reshape(n, n)
    flows = body[n * n :].reshape(n, n)
    return Instance(name, distances, flows, known_optimum=known_optimum(name))


def to_text(inst: Instance) -> str:
    """Serialize in the same format ``parse_instance`` reads."""
    lines = [str(inst.n), ""]
    for mat in (inst.distances, inst.flows):
        lines.extend(" ".join(str(v) for v in row) for row in mat)
        lines.append("")
    return "\n".join(lines)


def known_optimum(name: str) -> int | None:
    """Registered optimum for an exactly matching instance name, if any."""
    return KNOWN_OPTIMA.get(name)


def load_optima(path: str | Path) -> dict[str, int]:
    """Read a ``name value`` sidecar file; '#' starts a comment."""
    table: dict[str, int] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'name value', got {raw!r}")
        try:
            table[parts[0]] = int(parts[1])
        except ValueError:
            raise ValueError(
                f"{path}:{lineno}: optimum must be an integer, got {parts[1]!r}"
            ) from None
    return table


def load_instance(path: str | Path) -> Instance:
    """Load an instance file; its name is the file stem.

    An ``optima.txt`` next to the file may register or override the known
    optimum for that name.
    """
    path = Path(path)
    inst = parse_instance(path.read_text(), name=path.stem)
    sidecar = path.parent / "optima.txt"
    if sidecar.is_file():
        table = load_optima(sidecar)
        if inst.name in table:
            inst.known_optimum = table[inst.name]
    return inst


def _random_symmetric(n: int, max_weight: int, rng: np.random.Generator) -> np.ndarray:
    mat = rng.integers(0, max_weight + 1, size=(n, n), dtype=np.int64)
    mat = np.triu(mat, k=1)
    return mat + mat.T


def generate_random_instance(n: int, max_weight: int, seed: int) -> Instance:
    """Random symmetric instance for oracle-scale tests (2 <= n <= 12)."""
    if not 2 <= n <= 12:
        raise ValueError(f"oracle-scale generator handles 2 <= n <= 12, got {n}")
    if max_weight < 1:
        raise ValueError(f"max_weight must be positive, got {max_weight}")
    rng = np.random.default_rng(seed)
    distances = _random_symmetric(n, max_weight, rng)
    flows = _random_symmetric(n, max_weight, rng)
    return Instance(f"random{n}s{seed}", distances, flows)
