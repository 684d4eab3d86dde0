"""Problem-file ingestion, the index pipeline driver, and the corpus runner.

Problem files are UTF-8 and line-oriented, with `#` comments:

    ring: x, y, z
    field: complex            # or: real
    f: x^2+y^2+z^2; x*y
    X: z*(x-y)*x; z*(x-y)*y; z*(x-y)*z
    C: [2*z*(x-y), 0; 0, 2*z*(x-y)]

Classical-map files declare `g:` instead of f/X/C. Polynomial grammar
(multiplication always explicit):

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := rational | var | '(' expr ')' | factor '^' nat
    rational := int ('/' nat)?
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, index as index_mod
from .errors import (
    C1ClassZeroError,
    DegreeCapExceededError,
    GsvError,
    InfiniteDimensionError,
    JacobianZeroClassError,
    NormalizationError,
    ParseError,
    ShapeError,
    TangencyError,
    VerificationError,
)
from .index import Problem, eisenbud_levine_index, poincare_hopf_complex
from .poly import Polynomial, PolyMatrix


# ---------------------------------------------------------------- tokenizer

_SYMBOLS = set("+-*/^()")


def _tokenize(text: str):
    """Tokens as (kind, value, position); kind in {num, name, sym, end}."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in _SYMBOLS:
            tokens.append(("sym", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", position=i)
    tokens.append(("end", None, n))
    return tokens


class _PolyParser:
    def __init__(self, text: str, names):
        self.text = text
        self.names = list(names)
        self.index_of = {v: i for i, v in enumerate(self.names)}
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message):
        raise ParseError(message, position=self.peek()[2])

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"trailing input {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[:2] in (("sym", "+"), ("sym", "-")):
            op = self.advance()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[:2] == ("sym", "*"):
            self.advance()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        kind, value, pos = self.peek()
        if kind == "sym" and value == "-" and self.tokens[self.pos + 1][0] == "num":
            self.advance()
            p = self._rational(negative=True)
        elif kind == "num":
            p = self._rational(negative=False)
        elif kind == "name":
            self.advance()
            if value not in self.index_of:
                raise ParseError(f"unknown variable {value!r}", position=pos)
            p = Polynomial.variable(len(self.names), self.index_of[value])
        elif kind == "sym" and value == "(":
            self.advance()
            p = self.expr()
            if self.peek()[:2] != ("sym", ")"):
                self.fail("expected ')'")
            self.advance()
        else:
            self.fail(
                "expected a rational, a variable, or '('"
                if kind != "end"
                else "unexpected end of input"
            )
        while self.peek()[:2] == ("sym", "^"):
            self.advance()
            kind, value, pos = self.peek()
            if kind != "num":
                raise ParseError("exponent must be a natural number", position=pos)
            self.advance()
            p = p ** value
        return p

    def _rational(self, negative: bool) -> Polynomial:
        kind, value, pos = self.advance()
        num = -value if negative else value
        if self.peek()[:2] == ("sym", "/"):
            self.advance()
            kind, den, dpos = self.peek()
            if kind != "num" or den == 0:
                raise ParseError(
                    "denominator must be a nonzero natural number", position=dpos
                )
            self.advance()
            return Polynomial.constant(len(self.names), Fraction(num, den))
        return Polynomial.constant(len(self.names), num)


def parse_poly(text: str, variables) -> Polynomial:
    """Parse one polynomial over the named variables (total on the grammar)."""
    return _PolyParser(text, variables).parse()


# ------------------------------------------------------------ problem files

@dataclass(frozen=True)
class ProblemFile:
    """A parsed problem file: either a tangency problem or a square map."""

    path: "str | None"
    problem: "Problem | None"
    map_components: "tuple | None"
    variables: tuple
    field: str


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _parse_name_list(value: str, lineno: int):
    names = [v.strip() for v in value.split(",")]
    if not names or any(not n for n in names):
        raise ParseError("empty variable name in ring declaration", line=lineno)
    for n in names:
        if not (n[0].isalpha() or n[0] == "_") or not all(
            c.isalnum() or c == "_" for c in n
        ):
            raise ParseError(f"bad variable name {n!r}", line=lineno)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names", line=lineno)
    return tuple(names)


def parse_problem_text(text: str, path: "str | None" = None) -> ProblemFile:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", line=lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        if key not in ("ring", "field", "f", "X", "C", "g"):
            raise ParseError(f"unknown key {key!r}", line=lineno)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        entries[key] = (value.strip(), lineno)

    if "ring" not in entries:
        raise ParseError("missing 'ring' declaration")
    variables = _parse_name_list(*entries["ring"])
    field = "complex"
    if "field" in entries:
        field, lineno = entries["field"]
        if field not in ("complex", "real"):
            raise ParseError(f"field must be complex or real, got {field!r}",
                             line=lineno)

    def polys(key):
        value, lineno = entries[key]
        try:
            return tuple(
                parse_poly(part, variables) for part in value.split(";")
            )
        except ParseError as exc:
            raise ParseError(f"in {key!r}: {exc}", line=lineno)

    if "g" in entries:
        if any(k in entries for k in ("f", "X", "C")):
            raise ParseError("'g' files must not declare f, X, or C")
        g = polys("g")
        if len(g) != len(variables):
            raise ShapeError(
                f"map has {len(g)} components for {len(variables)} variables"
            )
        return ProblemFile(path=path, problem=None, map_components=g,
                           variables=variables, field=field)

    for key in ("f", "X", "C"):
        if key not in entries:
            raise ParseError(f"missing '{key}' declaration")
    f = polys("f")
    X = polys("X")
    value, lineno = entries["C"]
    if not (value.startswith("[") and value.endswith("]")):
        raise ParseError("C must be a bracketed matrix [a, b; c, d]", line=lineno)
    rows = value[1:-1].split(";")
    try:
        centries = [
            [parse_poly(cell, variables) for cell in row.split(",")]
            for row in rows
        ]
    except ParseError as exc:
        raise ParseError(f"in 'C': {exc}", line=lineno)
    width = len(centries[0])
    if any(len(r) != width for r in centries):
        raise ParseError("ragged tangency matrix", line=lineno)
    C = PolyMatrix(len(centries), width,
                   [e for row in centries for e in row])
    problem = Problem(vars=variables, f=f, X=X, C=C, field=field)
    return ProblemFile(path=path, problem=problem, map_components=None,
                       variables=variables, field=field)


def parse_problem_file(path) -> ProblemFile:
    text = Path(path).read_text(encoding="utf-8")
    return parse_problem_text(text, path=str(path))


def render_problem_file(pf: ProblemFile) -> str:
    """Canonical text for a parsed file; re-parsing yields an equal problem."""
    names = list(pf.variables)
    lines = [f"ring: {', '.join(names)}", f"field: {pf.field}"]
    if pf.map_components is not None:
        lines.append("g: " + "; ".join(p.render(names) for p in pf.map_components))
    else:
        pr = pf.problem
        lines.append("f: " + "; ".join(p.render(names) for p in pr.f))
        lines.append("X: " + "; ".join(p.render(names) for p in pr.X))
        rows = [
            ", ".join(pr.C.entry(i, j).render(names) for j in range(pr.C.cols))
            for i in range(pr.C.rows)
        ]
        lines.append("C: [" + "; ".join(rows) + "]")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ reports

def _frac_str(x: Fraction) -> str:
    return str(x)


class ReportDocument:
    """JSON-friendly rendering of a computation; all numbers exact."""

    def __init__(self, payload: dict):
        self.payload = payload

    def to_json(self) -> str:
        return json.dumps(self.payload, sort_keys=True, indent=2)

    def to_text(self) -> str:
        p = self.payload
        lines = [f"field: {p['field']}", f"index: {p['index']}"]
        for key in ("dim_B0", "dim_B0_mod_DF", "dim_C0"):
            if p.get(key) is not None:
                lines.append(f"{key}: {p[key]}")
        if p.get("signature") is not None:
            s = p["signature"]
            lines.append(
                f"signature: {p['index']} (plus={s['plus']}, minus={s['minus']},"
                f" rank={s['rank']})"
            )
        if p.get("transform") is not None:
            rows = ["[" + ", ".join(r) + "]" for r in p["transform"]]
            lines.append("transform: " + "; ".join(rows))
        if p.get("c1") is not None:
            lines.append(f"c1: {p['c1']}")
        if p.get("goodness") is not None:
            lines.append(f"goodness: {p['goodness']['status']}")
        if p.get("deformation") is not None:
            comps = "; ".join(p["deformation"]["components"])
            lines.append(
                f"deformation ({', '.join(p['deformation']['vars'])}): {comps}"
            )
        return "\n".join(lines) + "\n"


def _transform_json(transform):
    return [[_frac_str(x) for x in row] for row in transform]


def _goodness_json(goodness, names):
    if goodness is None:
        return None
    if goodness.status != "satisfied":
        return {"status": "unknown"}
    witnesses = []
    for (row, col) in sorted(goodness.witnesses):
        w = goodness.witnesses[(row, col)]
        witnesses.append(
            {
                "row": row,
                "col": col,
                "denominator": w.denominator.render(names),
                "coefficients": [c.render(names) for c in w.coefficients],
            }
        )
    return {
        "status": "satisfied",
        "minor_columns": [list(cols) for cols in goodness.minor_columns],
        "minors": [m.render(names) for m in goodness.minors],
        "witnesses": witnesses,
    }


def build_report(pf: ProblemFile, rep, problem_hash: str, seed,
                 elapsed_ms: int) -> ReportDocument:
    names = list(pf.variables)
    sig = None
    if rep.signature is not None:
        sig = {
            "plus": rep.signature.p_plus,
            "minus": rep.signature.p_minus,
            "rank": rep.signature.rank,
        }
    deformation = None
    if rep.deformation is not None:
        dnames = list(rep.deformation_vars)
        deformation = {
            "vars": dnames,
            "components": [p.render(dnames) for p in rep.deformation],
        }
    payload = {
        "problem_hash": problem_hash,
        "field": pf.field,
        "transform": _transform_json(rep.normalization.transform),
        "dim_B0": rep.dim_B0,
        "dim_B0_mod_DF": rep.dim_B0_mod_DF,
        "dim_C0": rep.dim_C0,
        "index": rep.index,
        "signature": sig,
        "c1": rep.c1.render(names),
        "goodness": _goodness_json(rep.goodness, names),
        "deformation": deformation,
        "seed": seed,
        "version": __version__,
        "timing": elapsed_ms,
    }
    return ReportDocument(payload)


def build_el_report(pf: ProblemFile, idx: int, sig, problem_hash: str, seed,
                    dim: int, elapsed_ms: int) -> ReportDocument:
    payload = {
        "problem_hash": problem_hash,
        "field": pf.field,
        "transform": None,
        "dim_B0": dim,
        "dim_B0_mod_DF": None,
        "dim_C0": None,
        "index": idx,
        "signature": None
        if sig is None
        else {"plus": sig.p_plus, "minus": sig.p_minus, "rank": sig.rank},
        "c1": None,
        "goodness": None,
        "deformation": None,
        "seed": seed,
        "version": __version__,
        "timing": elapsed_ms,
    }
    return ReportDocument(payload)


# ----------------------------------------------------------------- commands

EXIT_OK = 0
EXIT_MISMATCH = 1  # verify: some expectation failed
EXIT_FAILURE = 1  # compute/el: uncategorized computation failure
EXIT_PARSE = 2
EXIT_SHAPE = 3
EXIT_NORMALIZATION = 4
EXIT_TANGENCY = 5


def _hash_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def cmd_compute(path, *, json_output=False, seed=None, max_attempts=25,
                check_good=False, deform=False):
    """Run the tangency pipeline on one file. Returns (exit_code, output)."""
    try:
        pf = parse_problem_file(path)
    except (ParseError, ShapeError, OSError) as exc:
        code = EXIT_SHAPE if isinstance(exc, ShapeError) else EXIT_PARSE
        return code, f"error: {exc}\n"
    if pf.problem is None:
        return EXIT_SHAPE, "error: this file declares a map 'g'; use the el command\n"
    started = time.perf_counter()
    try:
        if pf.field == "real":
            rep = index_mod.real_gsv_index(
                pf.problem, seed=seed, max_attempts=max_attempts,
                check_goodness=check_good, build_deformation=deform,
            )
        else:
            rep = index_mod.complex_gsv_index(
                pf.problem, seed=seed if seed is not None else 0,
                max_attempts=max_attempts,
                check_goodness=check_good, build_deformation=deform,
            )
    except TangencyError as exc:
        names = list(pf.variables)
        lines = ["error: the vector field is not tangent; residuals of Xf - Cf:"]
        lines += [f"  [{i}] {r.render(names)}"
                  for i, r in enumerate(exc.residuals)]
        return EXIT_TANGENCY, "\n".join(lines) + "\n"
    except ShapeError as exc:
        return EXIT_SHAPE, f"error: {exc}\n"
    except (NormalizationError, InfiniteDimensionError,
            DegreeCapExceededError) as exc:
        return EXIT_NORMALIZATION, f"error: {exc}\n"
    except (C1ClassZeroError, VerificationError) as exc:
        return EXIT_FAILURE, f"error: {exc}\n"
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    doc = build_report(pf, rep, _hash_file(path), seed, elapsed_ms)
    return EXIT_OK, (doc.to_json() + "\n") if json_output else doc.to_text()


def cmd_el(path, *, json_output=False, seed=None, mode=None):
    """Classical-map index of a square map file. Returns (exit_code, output)."""
    try:
        pf = parse_problem_file(path)
    except (ParseError, ShapeError, OSError) as exc:
        code = EXIT_SHAPE if isinstance(exc, ShapeError) else EXIT_PARSE
        return code, f"error: {exc}\n"
    if pf.map_components is None:
        return EXIT_SHAPE, "error: this file declares f/X/C; use the compute command\n"
    field = mode or pf.field
    started = time.perf_counter()
    try:
        dim = poincare_hopf_complex(list(pf.map_components))
        if field == "real":
            idx, sig = eisenbud_levine_index(list(pf.map_components), seed=seed)
        else:
            idx, sig = dim, None
    except (InfiniteDimensionError, DegreeCapExceededError,
            JacobianZeroClassError) as exc:
        return EXIT_NORMALIZATION, f"error: {exc}\n"
    except ShapeError as exc:
        return EXIT_SHAPE, f"error: {exc}\n"
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    pf = ProblemFile(path=pf.path, problem=None,
                     map_components=pf.map_components,
                     variables=pf.variables, field=field)
    doc = build_el_report(pf, idx, sig, _hash_file(path), seed, dim, elapsed_ms)
    return EXIT_OK, (doc.to_json() + "\n") if json_output else doc.to_text()


def _parse_expectations(path):
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", line=lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        if key not in ("index", "dim_B0", "dim_B0_mod_DF", "signature"):
            raise ParseError(f"unknown expectation key {key!r}", line=lineno)
        try:
            out[key] = int(value.strip())
        except ValueError:
            raise ParseError(f"expectation {key!r} is not an integer",
                             line=lineno)
    return out


def _verify_case(prob_path: str):
    """Evaluate one corpus case. Returns (name, ok, detail)."""
    prob = Path(prob_path)
    name = prob.name
    expect_path = prob.with_suffix(".expect")
    if not expect_path.exists():
        return name, False, "missing expectation record"
    try:
        expected = _parse_expectations(expect_path)
    except ParseError as exc:
        return name, False, f"bad expectation record: {exc}"
    try:
        pf = parse_problem_file(prob)
    except (ParseError, ShapeError) as exc:
        return name, False, f"bad problem file: {exc}"
    try:
        if pf.map_components is not None:
            dim = poincare_hopf_complex(list(pf.map_components))
            if pf.field == "real":
                idx, sig = eisenbud_levine_index(list(pf.map_components))
            else:
                idx, sig = dim, None
            actual = {"index": idx, "dim_B0": dim}
            if sig is not None:
                actual["signature"] = sig.signature
        else:
            if pf.field == "real":
                rep = index_mod.real_gsv_index(pf.problem)
            else:
                rep = index_mod.complex_gsv_index(pf.problem)
            actual = {
                "index": rep.index,
                "dim_B0": rep.dim_B0,
                "dim_B0_mod_DF": rep.dim_B0_mod_DF,
            }
            if rep.signature is not None:
                actual["signature"] = rep.signature.signature
    except GsvError as exc:
        return name, False, f"evaluation failed: {exc}"
    mismatches = [
        f"{key}: expected {want}, got {actual.get(key)}"
        for key, want in sorted(expected.items())
        if actual.get(key) != want
    ]
    if mismatches:
        return name, False, "; ".join(mismatches)
    summary = ", ".join(f"{k}={v}" for k, v in sorted(expected.items()))
    return name, True, summary


def cmd_verify(directory, jobs: int = 1):
    """Evaluate every problem in a corpus directory against expectations."""
    root = Path(directory)
    if not root.is_dir():
        return EXIT_PARSE, f"error: {directory} is not a directory\n"
    cases = sorted(str(p) for p in root.glob("*.prob"))
    if not cases:
        return EXIT_OK, f"warning: no problem files in {directory}\n"
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_case, cases))
    else:
        results = [_verify_case(c) for c in cases]
    results.sort(key=lambda r: r[0])
    lines = []
    failures = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        lines.append(f"{status}  {name}  {detail}")
    lines.append(
        f"{len(results) - failures}/{len(results)} cases passed"
    )
    return (EXIT_MISMATCH if failures else EXIT_OK), "\n".join(lines) + "\n"


def _build_arg_parser():
    parser = argparse.ArgumentParser(
        prog="gsvindex",
        description="Exact indices of vector fields tangent to curve "
        "singularities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="tangency-problem index pipeline")
    compute.add_argument("file")
    compute.add_argument("--json", action="store_true")
    compute.add_argument("--seed", type=int, default=None)
    compute.add_argument("--max-attempts", type=int, default=25)
    compute.add_argument("--check-good", action="store_true")
    compute.add_argument("--deform", action="store_true")

    el = sub.add_parser("el", help="classical index of a square map germ")
    el.add_argument("file")
    el.add_argument("--json", action="store_true")
    el.add_argument("--seed", type=int, default=None)
    el.add_argument("--mode", choices=("real", "complex"), default=None)

    verify = sub.add_parser("verify", help="run a corpus of expected values")
    verify.add_argument("directory")
    verify.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = _build_arg_parser().parse_args(argv)
    if args.command == "compute":
        code, output = cmd_compute(
            args.file, json_output=args.json, seed=args.seed,
            max_attempts=args.max_attempts, check_good=args.check_good,
            deform=args.deform,
        )
    elif args.command == "el":
        code, output = cmd_el(
            args.file, json_output=args.json, seed=args.seed, mode=args.mode
        )
    else:
        code, output = cmd_verify(args.directory, jobs=args.jobs)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    stream.write(output)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
