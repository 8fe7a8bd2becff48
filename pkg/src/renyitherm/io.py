"""Plain-text matrix input and output.

One matrix row per line, entries separated by commas. Entries use Python's
complex literal syntax (``0.5``, ``0.2+0.1j``, ``-1e-3j``). Blank lines and
lines starting with ``#`` are skipped.
"""

from pathlib import Path

import numpy as np

from .errors import ConfigError


def parse_matrix(text):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([complex(tok.strip().replace(" ", "")) for tok in line.split(",")])
        except ValueError as exc:
            raise ConfigError(f"bad matrix entry in line {line!r}") from exc
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ConfigError("matrix must be square and non-empty")
    M = np.array(rows, dtype=complex)
    return M.real.copy() if not np.any(M.imag) else M


def format_matrix(M):
    M = np.asarray(M)
    real = not np.iscomplexobj(M) or not np.any(M.imag)

    def fmt(z):
        return repr(float(z.real)) if real else repr(complex(z))

    return "\n".join(",".join(fmt(z) for z in row) for row in M) + "\n"


def read_matrix(path):
    return parse_matrix(Path(path).read_text())


def write_matrix(path, M):
    Path(path).write_text(format_matrix(M))


def parse_hamiltonian(source):
    """``diag:a,b,...`` gives a diagonal matrix; anything else is read as a matrix file."""
    if source.startswith("diag:"):
        try:
            vals = [float(v) for v in source[5:].split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad diagonal {source!r}") from exc
        if not vals:
            raise ConfigError("empty diagonal")
        return np.diag(vals)
    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"no such Hamiltonian file: {source}")
    return read_matrix(path)
