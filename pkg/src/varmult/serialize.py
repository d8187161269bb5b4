"""JSON forms of signals, spectra, multipliers and decompositions."""
from __future__ import annotations

import json

import numpy as np

from .decomposition import Decomposition, LevelPiece
from .grid import FreqInterval, GridFunction, Spectrum, freq_offset
from .variation import Multiplier


class FormatError(ValueError):
    """Input document does not match the expected JSON layout."""


def load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc


def grid_to_json(obj):
    """``{"n": N, "re": [...], "im": [...]}`` for a signal or a spectrum."""
    arr = obj.values if isinstance(obj, GridFunction) else obj.coeffs
    return {"n": int(arr.size), "re": arr.real.tolist(), "im": arr.imag.tolist()}


def _complex_from_json(doc):
    try:
        n = int(doc["n"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc.get("im", np.zeros(n)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad signal document: {exc}") from exc
    if re.shape != (n,) or im.shape != (n,):
        raise FormatError(f"expected arrays of length {n}")
    return re + 1j * im


def grid_from_json(doc) -> GridFunction:
    return GridFunction(_complex_from_json(doc))


def spectrum_from_json(doc) -> Spectrum:
    return Spectrum(_complex_from_json(doc))


def multiplier_to_json(m):
    return {"n": int(m.size), "values": m.values.tolist()}


def _expand_pieces(pieces, n):
    off = freq_offset(n)
    out = np.zeros(n)
    for piece in pieces:
        try:
            iv = FreqInterval(piece["lo"], piece["hi"])
            value = float(piece["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad piece {piece!r}: {exc}") from exc
        iv.check_range(n)
        out[iv.lo + off:iv.hi + off + 1] = value
    return out


def multiplier_from_json(doc, n=None) -> Multiplier:
    """Grid form ``{"n", "values"}`` or piecewise form.

    Piecewise input is ``{"n": N, "pieces": [{"lo", "hi", "value"}, ...]}`` or
    a bare list of pieces together with ``n``; uncovered frequencies are 0.
    """
    if isinstance(doc, list):
        if n is None:
            raise FormatError("piecewise multiplier list needs the grid size")
        return Multiplier(_expand_pieces(doc, int(n)))
    if not isinstance(doc, dict) or "n" not in doc and n is None:
        raise FormatError("multiplier document needs 'n'")
    size = int(doc.get("n", n))
    if "values" in doc:
        vals = np.asarray(doc["values"], dtype=float)
        if vals.shape != (size,):
            raise FormatError(f"expected {size} values, got {vals.size}")
        return Multiplier(vals)
    if "pieces" in doc:
        return Multiplier(_expand_pieces(doc["pieces"], size))
    raise FormatError("multiplier document needs 'values' or 'pieces'")


def decomposition_to_json(d: Decomposition):
    return {
        "n": d.n,
        "r": d.r,
        "rho": d.rho,
        "residual_sup": d.residual_sup,
        "levels": [[{"lo": p.interval.lo, "hi": p.interval.hi, "b": p.coeff}
                    for p in level] for level in d.levels],
        "residual": d.residual.tolist(),
    }


def decomposition_from_json(doc) -> Decomposition:
    try:
        n = int(doc["n"])
        levels = tuple(
            tuple(LevelPiece(FreqInterval(p["lo"], p["hi"]), float(p["b"]))
                  for p in level)
            for level in doc["levels"])
        residual = np.asarray(doc.get("residual", np.zeros(n)), dtype=float)
        return Decomposition(n, float(doc["r"]), float(doc["rho"]), levels,
                             residual)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad decomposition document: {exc}") from exc
