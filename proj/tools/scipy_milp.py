#!/usr/bin/env python3
"""External MILP backend for netprice: reads an LP file, solves it with
scipy.optimize.milp (HiGHS) and writes a netprice solution file.

Usage: scipy_milp.py MODEL.lp SOLUTION.sol [BUDGET_SECONDS]

Handles the LP subset netprice emits (plus Minimize and General).
"""

import math
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix

SECTIONS = {
    "maximize": "obj", "maximum": "obj", "max": "obj",
    "minimize": "obj", "minimum": "obj", "min": "obj",
    "subject to": "rows", "such that": "rows", "st": "rows", "s.t.": "rows",
    "bounds": "bounds", "binaries": "bin", "binary": "bin",
    "generals": "gen", "general": "gen", "end": "end",
}

TOKEN = re.compile(r"\s*(<=|>=|=<|=>|=|<|>|[+-]|[0-9.]+e[+-]?[0-9]+|[^\s+\-<>=]+)", re.I)
NUMBER = re.compile(r"^[0-9.]+(e[+-]?[0-9]+)?$|^inf(inity)?$", re.I)


class Model:
    def __init__(self):
        self.names = []
        self.index = {}
        self.sense = 1.0
        self.obj = {}
        self.rows = []  # (coefs, op, rhs)
        self.lo = {}
        self.hi = {}
        self.integer = set()

    def var(self, name):
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
        return self.index[name]


def parse_linear(tokens):
    """Parses `[+|-] [coef] name ...` into {name: coef} and a constant."""
    coefs, constant = {}, 0.0
    i, sign = 0, 1.0
    while i < len(tokens):
        tok = tokens[i]
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
            i += 1
            continue
        coef = 1.0
        if NUMBER.match(tok):
            coef = float(tok)
            if i + 1 >= len(tokens) or tokens[i + 1] in "+-":
                constant += sign * coef
                i += 1
                sign = 1.0
                continue
            i += 1
            tok = tokens[i]
        coefs[tok] = coefs.get(tok, 0.0) + sign * coef
        sign = 1.0
        i += 1
    return coefs, constant


def split_relation(tokens):
    for i, tok in enumerate(tokens):
        if tok in ("<=", ">=", "=<", "=>", "=", "<", ">"):
            op = {"=<": "<=", "<": "<=", "=>": ">=", ">": ">="}.get(tok, tok)
            return tokens[:i], op, tokens[i + 1:]
    raise ValueError("missing relation in: " + " ".join(tokens))


def signed_number(tokens):
    text = "".join(tokens).lower()
    if text in ("+inf", "inf", "+infinity", "infinity"):
        return math.inf
    if text in ("-inf", "-infinity"):
        return -math.inf
    return float(text)


def read_lp(text):
    model = Model()
    section = None
    statements = {"obj": [], "rows": [], "bounds": [], "bin": [], "gen": []}
    current = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in SECTIONS:
            if current:
                statements[section].append(" ".join(current))
                current = []
            if key.startswith("min"):
                model.sense = -1.0
            section = SECTIONS[key]
            continue
        if section is None or section == "end":
            raise ValueError("text outside a section: " + line)
        if section == "obj":
            current.append(line)
        elif section == "rows":
            # A named row starts a new statement; other lines continue one.
            if current and re.match(r"^[^\s:]+:", line):
                statements["rows"].append(" ".join(current))
                current = []
            current.append(line)
        else:
            statements[section].append(line)
    if current:
        statements[section].append(" ".join(current))

    for stmt in statements["obj"]:
        body = stmt.split(":", 1)[1] if re.match(r"^[^\s:]+:", stmt) else stmt
        coefs, _ = parse_linear(TOKEN.findall(body))
        for name, c in coefs.items():
            model.obj[model.var(name)] = model.obj.get(model.var(name), 0.0) + c
    for stmt in statements["rows"]:
        body = stmt.split(":", 1)[1] if re.match(r"^[^\s:]+:", stmt) else stmt
        lhs, op, rhs = split_relation(TOKEN.findall(body))
        coefs, constant = parse_linear(lhs)
        row = {model.var(n): c for n, c in coefs.items()}
        model.rows.append((row, op, signed_number(rhs) - constant))
    for stmt in statements["bounds"]:
        toks = TOKEN.findall(stmt)
        if len(toks) == 2 and toks[1].lower() == "free":
            j = model.var(toks[0])
            model.lo[j], model.hi[j] = -math.inf, math.inf
            continue
        rels = [i for i, t in enumerate(toks) if t in ("<=", ">=", "=<", "=>", "=", "<", ">")]
        if len(rels) == 2:
            lo = signed_number(toks[:rels[0]])
            j = model.var(toks[rels[0] + 1])
            hi = signed_number(toks[rels[1] + 1:])
            model.lo[j], model.hi[j] = lo, hi
            continue
        lhs, op, rhs = split_relation(toks)
        if len(lhs) == 1 and not NUMBER.match(lhs[0]):
            j, value = model.var(lhs[0]), signed_number(rhs)
        else:
            j, value = model.var(rhs[0]), signed_number(lhs)
            op = {"<=": ">=", ">=": "<="}.get(op, op)
        if op == "<=":
            model.hi[j] = value
        elif op == ">=":
            model.lo[j] = value
        else:
            model.lo[j] = model.hi[j] = value
    for name in statements["bin"]:
        for n in name.split():
            j = model.var(n)
            model.integer.add(j)
            model.lo.setdefault(j, 0.0)
            model.hi[j] = min(model.hi.get(j, 1.0), 1.0)
    for name in statements["gen"]:
        for n in name.split():
            model.integer.add(model.var(n))
    return model


def solve(model, budget):
    n = len(model.names)
    c = np.zeros(n)
    for j, v in model.obj.items():
        c[j] = -model.sense * v  # scipy minimizes
    lo = np.array([model.lo.get(j, 0.0) for j in range(n)])
    hi = np.array([model.hi.get(j, math.inf) for j in range(n)])
    integrality = np.array([1 if j in model.integer else 0 for j in range(n)])
    constraints = []
    if model.rows:
        r, cidx, vals, rlo, rhi = [], [], [], [], []
        for i, (row, op, rhs) in enumerate(model.rows):
            for j, v in row.items():
                r.append(i)
                cidx.append(j)
                vals.append(v)
            rlo.append(rhs if op in (">=", "=") else -math.inf)
            rhi.append(rhs if op in ("<=", "=") else math.inf)
        A = coo_matrix((vals, (r, cidx)), shape=(len(model.rows), n)).tocsr()
        constraints.append(LinearConstraint(A, rlo, rhi))
    options = {"disp": False, "mip_rel_gap": 1e-9}
    if budget is not None:
        options["time_limit"] = max(budget, 1e-3)
    return milp(c, constraints=constraints, integrality=integrality, bounds=Bounds(lo, hi), options=options)


def main(argv):
    if len(argv) not in (3, 4):
        sys.stderr.write(__doc__)
        return 2
    with open(argv[1]) as f:
        model = read_lp(f.read())
    budget = float(argv[3]) if len(argv) == 4 else None
    res = solve(model, budget)
    lines = []
    has_x = res.x is not None
    if res.status == 0:
        status = "optimal"
    elif res.status == 2:
        status = "infeasible"
    elif res.status == 3:
        sys.stderr.write("model is unbounded\n")
        return 1
    elif res.status == 1:
        status = "budget-exhausted"
    else:
        sys.stderr.write("solver failed: %s\n" % res.message)
        return 1
    lines.append("# status " + status)
    if has_x:
        objective = -res.fun * model.sense
        lines.append("# objective %.17g" % objective)
        bound = getattr(res, "mip_dual_bound", None)
        if bound is not None and math.isfinite(bound):
            lines.append("# bound %.17g" % (-bound * model.sense))
        elif status == "optimal":
            lines.append("# bound %.17g" % objective)
        for j, name in enumerate(model.names):
            value = float(res.x[j])
            if j in model.integer:
                value = float(round(value))
            lines.append("%s %.17g" % (name, value))
    with open(argv[2], "w") as f:
        f.write("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
