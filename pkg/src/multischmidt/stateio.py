"""JSON state files: ``{"dims": [d1, ...], "amplitudes": [[re, im], ...]}``.

Amplitudes are listed in C order (last index fastest).
"""
import json
import math

import numpy as np

from .tensor import NormalizationError, StateTensor


class StateFormatError(ValueError):
    pass


def state_to_json(psi) -> dict:
    amps = np.asarray(psi.amplitudes if isinstance(psi, StateTensor) else psi).ravel()
    dims = psi.dims if isinstance(psi, StateTensor) else np.shape(psi)
    return {"dims": [int(d) for d in dims],
            "amplitudes": [[float(z.real), float(z.imag)] for z in amps]}


def matrix_to_json(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def state_from_json(obj, normalize: bool = False) -> StateTensor:
    if not isinstance(obj, dict):
        raise StateFormatError("top level: expected an object with 'dims' and 'amplitudes'")
    dims = obj.get("dims")
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)):
        raise StateFormatError("field 'dims': expected a non-empty list of positive integers")
    amps = obj.get("amplitudes")
    if not isinstance(amps, list):
        raise StateFormatError("field 'amplitudes': expected a list of [re, im] pairs")
    expected = math.prod(dims)
    if len(amps) != expected:
        raise StateFormatError(
            f"field 'amplitudes': expected {expected} entries for dims {dims}, got {len(amps)}")
    vals = np.empty(expected, dtype=np.complex128)
    for k, pair in enumerate(amps):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise StateFormatError(f"field 'amplitudes': entry {k} is not a [re, im] pair")
        vals[k] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(vals)):
        raise StateFormatError("field 'amplitudes': non-finite value")
    try:
        return StateTensor.from_amplitudes(dims, vals, normalize=normalize)
    except NormalizationError as exc:
        raise StateFormatError(f"field 'amplitudes': {exc} (use --normalize)") from exc


def load_state(path, normalize: bool = False) -> StateTensor:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"malformed JSON: {exc}") from exc
    return state_from_json(obj, normalize=normalize)


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float printed to 17 significant digits."""
    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(not isinstance(x, (dict, list, tuple)) for x in o):
                return "[" + ", ".join(enc(x, level + 1) for x in o) + "]"
            return "[\n" + ",\n".join(pad + enc(x, level + 1) for x in o) + "\n" + end + "]"
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if o is None:
            return "null"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            x = float(o)
            if not math.isfinite(x):
                raise ValueError("non-finite float in output")
            return format(x, ".17g")
        if isinstance(o, str):
            return json.dumps(o)
        raise TypeError(f"cannot serialise {type(o).__name__}")
    return enc(obj, 0) + "\n"


def save_state(path, psi) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(state_to_json(psi)))
