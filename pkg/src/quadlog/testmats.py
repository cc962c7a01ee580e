"""Deterministic test-matrix generators, Matrix Market I/O, and the
spectral-radius preconditioning scale.

The generator corpus: seeded random-rotation SPD matrices with a
prescribed geometric spectrum, plus the parter / frank / vand classics.
"""

import os
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ParseError, PreconditionViolated
from .linalg import householder_qr, spectral_radius, validate_matrix

GENERATOR_KINDS = ("spd", "parter", "frank", "vand")


@dataclass(frozen=True)
class MatrixSpec:
    """Parsed description of a test matrix: a generator or a file."""

    kind: str
    n: int | None = None
    kappa: float | None = None
    seed: int | None = None
    path: str | None = None


def gen_spd(n, kappa, seed):
    """Random-rotation SPD matrix with eigenvalues kappa^(-1/2) * kappa^((i-1)/(n-1)).

    The spectrum runs geometrically from kappa^(-1/2) to kappa^(1/2), so
    the 2-norm condition number is exactly kappa; the eigenvector basis
    comes from the QR factorization of a seeded uniform random matrix,
    sign-fixed for determinism.
    """
    if n < 2:
        raise PreconditionViolated(f"order must be at least 2, got {n}")
    if not (kappa > 1.0):
        raise PreconditionViolated(f"condition number must exceed 1, got {kappa!r}")
    rng = np.random.default_rng(seed)
    q, r = householder_qr(rng.random((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    q = q * signs
    d = kappa ** (-0.5) * kappa ** (np.arange(n) / (n - 1))
    a = (q * d) @ q.T
    return 0.5 * (a + a.T)


def gen_parter(n):
    """Parter matrix A[i, j] = 1/(i - j + 0.5), 1-based."""
    if n < 2:
        raise PreconditionViolated(f"order must be at least 2, got {n}")
    i = np.arange(1, n + 1)[:, None]
    j = np.arange(1, n + 1)[None, :]
    return 1.0 / (i - j + 0.5)


def gen_frank(n):
    """Frank matrix A[i, j] = n+1-max(i, j) on and above the subdiagonal, else 0."""
    if n < 2:
        raise PreconditionViolated(f"order must be at least 2, got {n}")
    i = np.arange(1, n + 1)[:, None]
    j = np.arange(1, n + 1)[None, :]
    return np.where(j >= i - 1, (n + 1 - np.maximum(i, j)).astype(np.float64), 0.0)


def gen_vand(n):
    """Vandermonde matrix on the points 1..n: A[i, j] = i^(j-1), 1-based."""
    if n < 2:
        raise PreconditionViolated(f"order must be at least 2, got {n}")
    p = np.arange(1, n + 1, dtype=np.float64)[:, None]
    return p ** np.arange(n)[None, :]


def _mm_parse_error(message, line_no):
    return ParseError(message, line=line_no)


def read_matrix_market(path):
    """Read a real general/symmetric Matrix Market file (coordinate or array)
    into a dense matrix, expanding symmetric storage to full."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise _mm_parse_error("empty file", 1)
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket" or header[1].lower() != "matrix":
        raise _mm_parse_error("expected header '%%MatrixMarket matrix <format> <field> <symmetry>'", 1)
    fmt, field, sym = header[2].lower(), header[3].lower(), header[4].lower()
    if fmt not in ("coordinate", "array"):
        raise _mm_parse_error(f"unsupported format {fmt!r} (need coordinate or array)", 1)
    if field != "real":
        raise _mm_parse_error(f"unsupported field {field!r} (need real)", 1)
    if sym not in ("general", "symmetric"):
        raise _mm_parse_error(f"unsupported symmetry {sym!r} (need general or symmetric)", 1)

    body = []  # (line_no, text) with comments and blanks dropped
    for idx, text in enumerate(lines[1:], start=2):
        stripped = text.strip()
        if not stripped or stripped.startswith("%"):
            continue
        body.append((idx, stripped))
    if not body:
        raise _mm_parse_error("missing size line", len(lines) + 1)

    size_no, size_text = body[0]
    size_tok = size_text.split()
    want = 3 if fmt == "coordinate" else 2
    if len(size_tok) != want:
        raise _mm_parse_error(f"size line needs {want} integers", size_no)
    try:
        dims = [int(t) for t in size_tok]
    except ValueError:
        raise _mm_parse_error("size line needs integers", size_no) from None
    nrows, ncols = dims[0], dims[1]
    if nrows != ncols:
        raise DimensionMismatch(f"matrix is {nrows}x{ncols}, not square")
    n = nrows
    a = np.zeros((n, n))

    if fmt == "coordinate":
        nnz = dims[2]
        entries = body[1:]
        if len(entries) < nnz:
            raise _mm_parse_error(
                f"expected {nnz} entries, file ends after {len(entries)}", len(lines) + 1
            )
        if len(entries) > nnz:
            raise _mm_parse_error(f"expected {nnz} entries, found more", entries[nnz][0])
        for line_no, text in entries:
            tok = text.split()
            if len(tok) != 3:
                raise _mm_parse_error("coordinate entry needs 'row col value'", line_no)
            try:
                i, j, v = int(tok[0]), int(tok[1]), float(tok[2])
            except ValueError:
                raise _mm_parse_error(f"cannot parse entry {text!r}", line_no) from None
            if not (1 <= i <= n and 1 <= j <= n):
                raise DimensionMismatch(f"entry ({i}, {j}) outside order {n} (line {line_no})")
            if sym == "symmetric":
                if i < j:
                    raise _mm_parse_error(
                        "symmetric storage must hold the lower triangle (row >= col)", line_no
                    )
                a[i - 1, j - 1] = v
                a[j - 1, i - 1] = v
            else:
                a[i - 1, j - 1] = v
        return a

    count = n * n if sym == "general" else n * (n + 1) // 2
    values = []
    for line_no, text in body[1:]:
        for tok in text.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise _mm_parse_error(f"cannot parse value {tok!r}", line_no) from None
            if len(values) > count:
                raise _mm_parse_error(f"expected {count} values, found more", line_no)
    if len(values) < count:
        raise _mm_parse_error(
            f"expected {count} values, file ends after {len(values)}", len(lines) + 1
        )
    it = iter(values)
    if sym == "general":
        for j in range(n):
            for i in range(n):
                a[i, j] = next(it)
    else:
        for j in range(n):
            for i in range(j, n):
                v = next(it)
                a[i, j] = v
                a[j, i] = v
    return a


def write_matrix_market(path, a):
    """Write a dense matrix in Matrix Market array format (real, general)."""
    a = validate_matrix(a)
    n = a.shape[0]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix array real general\n")
        fh.write(f"{n} {n}\n")
        for j in range(n):
            for i in range(n):
                fh.write(f"{float(a[i, j])!r}\n")


def precondition_scale(a, param_mode="exact"):
    """Scale A so its spectral radius becomes 10.

    Returns (A_scaled, scale) with A_scaled = scale * A and scale =
    10/rho(A); log A = log(A_scaled) - log(scale) * I recovers the
    original logarithm.
    """
    a = validate_matrix(a)
    rho = spectral_radius(a, mode=param_mode)
    if not (rho > 0.0):
        raise PreconditionViolated("spectral radius must be positive")
    scale = 10.0 / rho
    return scale * a, scale


def _parse_kv(parts, line_text):
    out = {}
    for part in parts:
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"expected key=value, got {part!r} in {line_text!r}")
        key, _, value = part.partition("=")
        out[key.strip()] = value.strip()
    return out


def parse_matrix_spec(text):
    """Parse a generator spec like 'spd:n=50,kappa=1e4,seed=7' or
    'parter:n=10'; anything without a known kind prefix is a file path."""
    text = text.strip()
    if not text:
        raise ParseError("empty matrix spec")
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower()
    if not sep or kind not in GENERATOR_KINDS + ("file",):
        return MatrixSpec(kind="file", path=text)
    if kind == "file":
        kv = _parse_kv(rest.split(","), text)
        path = kv.pop("path", None)
        if kv:
            raise ParseError(f"unknown keys {sorted(kv)} in {text!r}")
        if not path:
            raise ParseError(f"file spec needs path=..., got {text!r}")
        return MatrixSpec(kind="file", path=path)
    kv = _parse_kv(rest.split(","), text)
    if "n" not in kv:
        raise ParseError(f"{kind} spec needs n=..., got {text!r}")
    try:
        n = int(kv.pop("n"))
    except ValueError:
        raise ParseError(f"n must be an integer in {text!r}") from None
    if n < 2:
        raise ParseError(f"n must be at least 2, got {n}")
    if kind == "spd":
        if "kappa" not in kv:
            raise ParseError(f"spd spec needs kappa=..., got {text!r}")
        try:
            kappa = float(kv.pop("kappa"))
        except ValueError:
            raise ParseError(f"kappa must be a number in {text!r}") from None
        if not (kappa > 1.0):
            raise ParseError(f"kappa must exceed 1, got {kappa!r}")
        try:
            seed = int(kv.pop("seed", "0"))
        except ValueError:
            raise ParseError(f"seed must be an integer in {text!r}") from None
        if kv:
            raise ParseError(f"unknown keys {sorted(kv)} in {text!r}")
        return MatrixSpec(kind="spd", n=n, kappa=kappa, seed=seed)
    if kv:
        raise ParseError(f"unknown keys {sorted(kv)} in {text!r}")
    return MatrixSpec(kind=kind, n=n)


def realize(spec):
    """Materialize a MatrixSpec into a dense matrix."""
    if spec.kind == "spd":
        return gen_spd(spec.n, spec.kappa, spec.seed)
    if spec.kind == "parter":
        return gen_parter(spec.n)
    if spec.kind == "frank":
        return gen_frank(spec.n)
    if spec.kind == "vand":
        return gen_vand(spec.n)
    if spec.kind == "file":
        return read_matrix_market(spec.path)
    raise ParseError(f"unknown matrix kind {spec.kind!r}")


def spec_name(spec):
    """Short display name for CSV rows and stats records."""
    if spec.kind == "spd":
        return f"spd:n={spec.n},kappa={spec.kappa:g},seed={spec.seed}"
    if spec.kind == "file":
        return os.path.basename(spec.path)
    return f"{spec.kind}:n={spec.n}"
