"""JSON state files and decomposition reports.

A state file is {"label": ..., "matrix": rows} where every entry is a
[re, im] pair. Reports use the same encoding for matrices and vectors. Floats
are written with 17 significant digits, so reading a report back yields the
exact numbers that were written.
"""
import json
import math
import os
import time

import numpy as np

from picolsd.decomposition import CaseTag, LsdDecomposition, entanglement_measure
from picolsd.errors import RankMismatch, StateFileError, WrongCase
from picolsd.linalg import dagger, fro_norm, hermitian
from picolsd.logging import logger
from picolsd.lsd import decompose, rank3_frame
from picolsd.qubits import density_matrix

ANTI_HERMITIAN_TOL = 1e-8


def encode_matrix(a):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a)]


def encode_vector(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v)]


def _entry(z):
    if (
        not isinstance(z, list)
        or len(z) != 2
        or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in z)
    ):
        raise StateFileError("parse error: entries must be [re, im] pairs")
    return complex(z[0], z[1])


def decode_matrix(rows, dim=4):
    if not isinstance(rows, list) or len(rows) != dim:
        raise StateFileError("parse error: expected {} matrix rows".format(dim))
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise StateFileError(
                "parse error: row {} must have {} entries".format(i, dim)
            )
        for j, z in enumerate(row):
            out[i, j] = _entry(z)
    return out


def decode_vector(entries, dim=4):
    if not isinstance(entries, list) or len(entries) != dim:
        raise StateFileError("parse error: expected {} amplitudes".format(dim))
    return np.array([_entry(z) for z in entries], dtype=complex)


def _load_json(path):
    logger.debug("Reading {}".format(path))
    try:
        with open(path, "r", encoding="utf-8") as fd:
            data = json.load(fd)
    except UnicodeDecodeError as e:
        raise StateFileError("parse error: not valid UTF-8 ({})".format(e.reason))
    except ValueError as e:
        raise StateFileError("parse error: {}".format(e))
    except OSError as e:
        raise StateFileError("cannot read {}: {}".format(path, e.strerror))
    if not isinstance(data, dict):
        raise StateFileError("parse error: top level must be an object")
    return data


def parse_state(data, name="<state>"):
    """Return (label, rho) from a decoded state document."""
    if "matrix" not in data:
        raise StateFileError("parse error: missing key 'matrix'")
    a = decode_matrix(data["matrix"])
    if not np.all(np.isfinite(a)):
        raise StateFileError("parse error: non-finite matrix entries")
    anti = fro_norm(0.5 * (a - dagger(a)))
    if anti > ANTI_HERMITIAN_TOL:
        raise StateFileError(
            "matrix in {} is not Hermitian (anti-Hermitian part {:.3e})".format(
                name, anti
            )
        )
    label = data.get("label", os.path.splitext(os.path.basename(name))[0])
    if not isinstance(label, str):
        raise StateFileError("parse error: label must be a string")
    return label, density_matrix(hermitian(a))


def read_state(path):
    return parse_state(_load_json(path), str(path))


def state_document(rho, label=None):
    doc = {}
    if label is not None:
        doc["label"] = label
    doc["matrix"] = encode_matrix(rho)
    return doc


INDENT = "    "


def _float_text(x):
    if not math.isfinite(x):
        return json.dumps(x)
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _to_json(obj, level):
    if isinstance(obj, float):
        return _float_text(float(obj))
    if isinstance(obj, dict):
        items = [
            "{}: {}".format(json.dumps(str(k)), _to_json(v, level + 1))
            for k, v in obj.items()
        ]
    elif isinstance(obj, (list, tuple)):
        items = [_to_json(v, level + 1) for v in obj]
    else:
        return json.dumps(obj)
    open_, close = "{}" if isinstance(obj, dict) else "[]"
    if not items:
        return open_ + close
    inner = "\n" + INDENT * (level + 1)
    return "{}{}\n{}{}".format(
        open_, ",".join(inner + item for item in items), INDENT * level, close
    )


def dumps(doc):
    """`doc` as indented JSON with every float printed to 17 significant
    digits."""
    return _to_json(doc, 0) + "\n"


def write_state(path, rho, label=None):
    logger.debug("Writing state to {}".format(path))
    dirname = os.path.dirname(os.path.abspath(path))
    os.makedirs(dirname, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fd:
        fd.write(dumps(state_document(rho, label)))


def _opt_matrix(a):
    return None if a is None else encode_matrix(a)


def build_report(label, dec, timing_ms=None):
    sol = dec.solution
    solver = None
    if sol is not None:
        solver = {
            "iterations": sol.iterations,
            "gap": sol.gap,
            "status": str(sol.status),
        }
    return {
        "label": label,
        "case": str(dec.case),
        "S": dec.separability,
        "rho_sep": encode_matrix(dec.rho_sep),
        "rho_pure": encode_matrix(dec.rho_pure),
        "pure_vector": None
        if dec.pure_vector is None
        else encode_vector(dec.pure_vector),
        "witness": _opt_matrix(dec.witness),
        "entanglement_measure": entanglement_measure(dec),
        "theta": dec.theta,
        "dual": {
            "z1": encode_matrix(dec.z1),
            "z2": encode_matrix(dec.z2),
            "z3": encode_matrix(dec.z3),
            "a": dec.a,
            "b": dec.b,
        },
        "wk_report": None if dec.residuals is None else dec.residuals.to_dict(),
        "solver": solver,
        "timing_ms": timing_ms,
    }


def read_report(path):
    return _load_json(path)


def _number(data, key, optional=False):
    value = data.get(key)
    if value is None and optional:
        return None
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise StateFileError("parse error: '{}' must be a number".format(key))
    return float(value)


def decomposition_from_report(rho, data):
    """Rebuild a decomposition of `rho` from a report document.

    The support projector and the fixed operators Gamma8, Gamma9 are derived
    from `rho` itself. A report whose case does not fit the rank of `rho`
    raises WrongCase.
    """
    for key in ("case", "S", "rho_sep", "rho_pure", "dual"):
        if key not in data:
            raise StateFileError("parse error: report lacks '{}'".format(key))
    try:
        case = CaseTag(data["case"])
    except ValueError:
        raise StateFileError("parse error: unknown case {!r}".format(data["case"]))
    dual = data["dual"]
    if not isinstance(dual, dict):
        raise StateFileError("parse error: 'dual' must be an object")

    support = np.eye(4, dtype=complex)
    gamma8 = gamma9 = None
    if case.is_rank3:
        try:
            frame = rank3_frame(rho)
        except RankMismatch as e:
            raise WrongCase("report case {} does not fit the state: {}".format(case, e))
        back = dagger(frame.local)
        support = back @ frame.basis.projector @ frame.local
        if case.is_product:
            gamma8 = back @ frame.basis.gammas[-2] @ frame.local
            gamma9 = back @ frame.basis.gammas[-1] @ frame.local

    a = _number(dual, "a", optional=not case.is_product)
    b = _number(dual, "b", optional=not case.is_product)
    pure = data.get("pure_vector")
    witness = data.get("witness")
    return LsdDecomposition(
        case=case,
        separability=_number(data, "S"),
        rho_sep=decode_matrix(data["rho_sep"]),
        rho_pure=decode_matrix(data["rho_pure"]),
        pure_vector=None if pure is None else decode_vector(pure),
        z1=decode_matrix(dual.get("z1")),
        z2=decode_matrix(dual.get("z2")),
        z3=decode_matrix(dual.get("z3")),
        support=support,
        witness=None if witness is None else decode_matrix(witness),
        a=a,
        b=b,
        theta=_number(data, "theta", optional=True),
        gamma8=gamma8,
        gamma9=gamma9,
    )


def decompose_file(path, cfg=None, case="auto", samples=None, seed=0):
    """Read a state file, decompose it and return (report, decomposition)."""
    label, rho = read_state(path)
    start = time.perf_counter()
    dec = decompose(rho, cfg, case=case, samples=samples, seed=seed)
    elapsed = (time.perf_counter() - start) * 1000.0
    return build_report(label, dec, timing_ms=elapsed), dec
