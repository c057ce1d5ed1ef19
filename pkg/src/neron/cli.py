"""Command line front end: ``neron {jacobian,torus,semistable} FILE``.

Exit codes: 0 success, 1 malformed or invalid input, 2 internal
inconsistency (the two independent computations disagree).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import jsonschema

from .errors import NeronError, ValidationError
from .fibre import SpecialFibre, validate
from .jacobian import RationalReport, theorem_pipeline
from .semistable import (
    SemistableReport,
    UniformizationDatum,
    action_from_data,
    semistable_report,
    validate_datum,
)
from .torus import CharacterLattice, TorusSummary, torus_summary
from .zlattice import FinAbGroup

KINDS = ("jacobian", "torus", "semistable")

_int_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_action = {"oneOf": [_int_matrix, {"type": "array", "items": _int_matrix, "minItems": 1}]}
_options = {
    "type": "object",
    "properties": {
        "format": {"enum": ["text", "json"]},
        "strict": {"type": "boolean"},
        "oracle": {"type": "boolean"},
    },
    "additionalProperties": False,
}

SCHEMAS = {
    "jacobian": {
        "type": "object",
        "required": ["kind", "components", "sigma", "intersections"],
        "properties": {
            "kind": {"const": "jacobian"},
            "components": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["d", "e"],
                    "properties": {
                        "d": {"type": "integer", "minimum": 1},
                        "e": {"type": "integer", "minimum": 1},
                    },
                },
            },
            "sigma": {
                "oneOf": [
                    {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    {
                        "type": "array",
                        "minItems": 1,
                        "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    },
                ]
            },
            "intersections": _int_matrix,
            "genus": {"type": ["integer", "null"], "minimum": 0},
            "hypothesis_ok": {"type": "boolean"},
            "options": _options,
        },
        "additionalProperties": False,
    },
    "torus": {
        "type": "object",
        "required": ["kind", "rank", "sigma"],
        "properties": {
            "kind": {"const": "torus"},
            "rank": {"type": "integer", "minimum": 0},
            "sigma": _action,
            "options": _options,
        },
        "additionalProperties": False,
    },
    "semistable": {
        "type": "object",
        "required": ["kind", "rank", "sigma_X", "sigma_M", "pairing"],
        "properties": {
            "kind": {"const": "semistable"},
            "rank": {"type": "integer", "minimum": 0},
            "sigma_X": _action,
            "sigma_M": _action,
            "pairing": _int_matrix,
            "options": _options,
        },
        "additionalProperties": False,
    },
}


@dataclass(frozen=True)
class InputDocument:
    kind: str
    payload: object
    options: dict = field(default_factory=dict)


def _schema_error(message, path):
    return NeronError("SCHEMA", message, path=path)


def _check_square(matrix, size, path):
    if len(matrix) != size:
        raise _schema_error(f"expected {size} rows, got {len(matrix)}", path)
    for i, row in enumerate(matrix):
        if len(row) != size:
            raise _schema_error(f"row of length {len(row)}, expected {size}", f"{path}/{i}")


def _check_action(action, size, path):
    if action and action[0] and isinstance(action[0][0], list):
        for j, gen in enumerate(action):
            _check_square(gen, size, f"{path}/{j}")
    else:
        _check_square(action, size, path)


def parse_input(text: str, kind: Optional[str] = None) -> InputDocument:
    """Parse and schema-check a JSON input document.

    Raises NeronError with code PARSE or SCHEMA (``path`` is a JSON pointer),
    or ValidationError for structural problems found while building the datum.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise NeronError("PARSE", f"malformed JSON: {err.msg} (line {err.lineno})") from None
    if not isinstance(data, dict):
        raise _schema_error("document must be a JSON object", "/")
    doc_kind = data.get("kind")
    if doc_kind not in KINDS:
        raise _schema_error(f"kind must be one of {', '.join(KINDS)}", "/kind")
    if kind is not None and doc_kind != kind:
        raise _schema_error(f"document kind {doc_kind!r} does not match command {kind!r}", "/kind")

    validator = jsonschema.Draft202012Validator(SCHEMAS[doc_kind])
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        path = "".join(f"/{p}" for p in err.absolute_path)
        if err.validator == "required":
            missing = [p for p in err.validator_value if p not in err.instance]
            path += f"/{missing[0]}"
        raise _schema_error(err.message, path or "/")

    options = dict(data.get("options", {}))
    if doc_kind == "jacobian":
        n = len(data["components"])
        _check_square(data["intersections"], n, "/intersections")
        sig = data["sigma"]
        gens = sig if sig and isinstance(sig[0], list) else [sig]
        for j, p in enumerate(gens):
            if len(p) != n:
                where = "/sigma" if gens is not sig else f"/sigma/{j}"
                raise _schema_error(f"permutation of length {len(p)}, expected {n}", where)
        payload = SpecialFibre.from_data(
            data["intersections"],
            sig,
            [c["d"] for c in data["components"]],
            [c["e"] for c in data["components"]],
            data.get("genus"),
            data.get("hypothesis_ok", True),
        )
    elif doc_kind == "torus":
        r = data["rank"]
        _check_action(data["sigma"], r, "/sigma")
        payload = CharacterLattice(r, action_from_data(data["sigma"], r))
    else:
        r = data["rank"]
        for key in ("sigma_X", "sigma_M"):
            _check_action(data[key], r, f"/{key}")
        _check_square(data["pairing"], r, "/pairing")
        payload = UniformizationDatum.from_data(r, data["sigma_X"], data["sigma_M"], data["pairing"])
    return InputDocument(doc_kind, payload, options)


# ---------------------------------------------------------------------------
# reports

_RESULT_TYPES = {"jacobian": RationalReport, "torus": TorusSummary, "semistable": SemistableReport}


@dataclass(frozen=True)
class Report:
    kind: str
    result: object = None
    warnings: tuple = ()
    errors: tuple = ()
    exit_code: int = 0

    @property
    def status(self) -> str:
        return {0: "ok", 1: "invalid", 2: "inconsistent"}[self.exit_code]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "status": self.status,
            "exit_code": self.exit_code,
            "result": self.result.to_dict() if self.result is not None else None,
            "warnings": [dict(w) for w in self.warnings],
            "errors": [dict(e) for e in self.errors],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        result = data["result"]
        if result is not None:
            result = _RESULT_TYPES[data["kind"]].from_dict(result)
        return cls(
            data["kind"],
            result,
            tuple(dict(w) for w in data["warnings"]),
            tuple(dict(e) for e in data["errors"]),
            data["exit_code"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        d = self.to_dict()
        lines = [f"kind: {self.kind}", f"status: {self.status}", f"exit_code: {self.exit_code}"]
        if d["result"] is not None:
            lines.append("result:")
            for key in sorted(d["result"]):
                lines.append(f"  {key}: {_text_value(d['result'][key])}")
        for name in ("warnings", "errors"):
            lines.append(f"{name}:" + ("" if d[name] else " none"))
            for entry in d[name]:
                where = f" at {entry['path']}" if entry.get("path") else ""
                lines.append(f"  - {entry['code']}: {entry['message']}{where}")
        return "\n".join(lines) + "\n"


def _entry(code, message, path=None):
    e = {"code": code, "message": message}
    if path:
        e["path"] = path
    return e


def _text_value(v):
    if isinstance(v, dict) and set(v) == {"free_rank", "invariant_factors"}:
        return str(FinAbGroup.from_dict(v))
    if isinstance(v, dict):
        return ", ".join(f"{k}={_text_value(x)}" for k, x in sorted(v.items())) or "-"
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v).lower() if isinstance(v, bool) else str(v)


def run(doc: InputDocument, strict: Optional[bool] = None, use_oracle: Optional[bool] = None) -> Report:
    strict = doc.options.get("strict", False) if strict is None else strict
    use_oracle = doc.options.get("oracle", True) if use_oracle is None else use_oracle
    warnings = []
    try:
        if doc.kind == "jacobian":
            rep = validate(doc.payload)
            warnings = [_entry(c, m) for c, m in rep.warnings]
            rep.raise_for_errors(strict)
            result = theorem_pipeline(doc.payload, use_oracle=use_oracle)
            warnings += [_entry("NOTE", note) for note in result.notes]
            code = 0 if result.consistent else 2
            errors = () if code == 0 else (
                _entry("INCONSISTENT", "failed checks: " + ", ".join(k for k, ok in result.checks.items() if not ok)),
            )
            return Report(doc.kind, result, tuple(warnings), errors, code)
        if doc.kind == "torus":
            result = torus_summary(doc.payload)
            code = 0 if result.duals_agree else 2
            errors = () if code == 0 else (_entry("INCONSISTENT", "Hom(X_G, Z) != Hom(X, Z)^G"),)
            return Report(doc.kind, result, (), errors, code)
        validate_datum(doc.payload).raise_for_errors(strict)
        result = semistable_report(doc.payload, raise_on_inconsistent=False)
        code = 0 if result.bounds_ok else 2
        errors = () if code == 0 else (_entry("INCONSISTENT", "Sigma / H^1 bounds violated"),)
        return Report(doc.kind, result, (), errors, code)
    except ValidationError as err:
        return Report(doc.kind, None, tuple(warnings), tuple(_entry(c, m) for c, m in err.issues), 1)
    except NeronError as err:
        code = 2 if err.code in ("INCONSISTENT", "EMBED_FAIL") else 1
        return Report(doc.kind, None, tuple(warnings), (_entry(err.code, err.message, err.path),), code)


def _failure(kind, err) -> Report:
    if isinstance(err, ValidationError):
        return Report(kind, None, (), tuple(_entry(c, m) for c, m in err.issues), 1)
    return Report(kind, None, (), (_entry(err.code, err.message, err.path),), 1)


def run_text(text: str, kind: Optional[str] = None, strict=None, use_oracle=None) -> Report:
    """parse_input + run, with parse failures turned into exit-code-1 reports."""
    try:
        doc = parse_input(text, kind)
    except NeronError as err:
        return _failure(kind or "unknown", err)
    return run(doc, strict, use_oracle)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="neron", description="Component groups of Neron models.")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("files", nargs="+", help="input JSON documents ('-' for stdin)")
    parser.add_argument("--format", choices=["text", "json"], default=None)
    parser.add_argument("--strict", action="store_true", default=None)
    parser.add_argument("--no-oracle", dest="oracle", action="store_false", default=None,
                        help="skip the Galois-invariants oracle (jacobian only)")
    args = parser.parse_args(argv)

    outputs = []
    for path in args.files:
        fmt = args.format
        try:
            text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
            doc = parse_input(text, args.kind)
        except OSError as err:
            report = Report(args.kind, None, (), (_entry("PARSE", f"cannot read {path}: {err.strerror}"),), 1)
        except NeronError as err:
            report = _failure(args.kind, err)
        else:
            fmt = fmt or doc.options.get("format")
            report = run(doc, args.strict, args.oracle)
        outputs.append((path, fmt or "text", report))

    multi = len(outputs) > 1
    if multi and all(fmt == "json" for _, fmt, _ in outputs):
        sys.stdout.write(json.dumps([r.to_dict() for _, _, r in outputs], indent=2, sort_keys=True) + "\n")
    else:
        for path, fmt, report in outputs:
            if multi:
                sys.stdout.write(f"== {path}\n")
            sys.stdout.write(report.to_json() if fmt == "json" else report.to_text())
    return max(r.exit_code for _, _, r in outputs)


if __name__ == "__main__":
    sys.exit(main())
