"""A small LL(1) script language for declaring algebras and modules and
running computations on them.

    field Fp 101;
    ring R = poly x / (x^2);
    algebra A = koszul R (x);
    audit A window 10;
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

KEYWORDS = {
    "field", "ring", "algebra", "module", "koszul", "exterior", "fiber", "dual", "shift",
    "audit", "bass", "ext", "depth", "projdim", "injdim", "gorenstein", "mcm", "resolve",
    "condition7", "poly", "adjoin", "validate", "cohomology",
}

# command -> kinds of its positional arguments
COMMANDS = {
    "audit": ("algebra",),
    "gorenstein": ("algebra",),
    "condition7": ("algebra",),
    "bass": ("module",),
    "depth": ("module",),
    "projdim": ("module",),
    "injdim": ("module",),
    "mcm": ("module",),
    "resolve": ("module",),
    "ext": ("module", "module"),
    "validate": ("any",),
    "cohomology": ("any",),
}

MODULE_BUILTINS = ("residue", "regular", "maximal")
FAMILY_BUILTINS = ("A", "k", "dual", "koszul", "maximal")


class DslSyntaxError(SyntaxError):
    def __init__(self, line: int, col: int, expected, got: str):
        self.line = line
        self.col = col
        self.expected = sorted(set(expected))
        self.got = got
        super().__init__(f"line {line}, column {col}: expected {' or '.join(self.expected)}, got {got}")


class DslNameError(NameError):
    def __init__(self, name: str, line: int, col: int, kind: str = "name"):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: undeclared {kind} {name!r}", name=name)


# ---------------------------------------------------------------------------
# lexer


@dataclass
class Token:
    kind: str          # IDENT INT STRING KW PUNCT EOF
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<punct>[;=(),/+\-*^:])
""", re.VERBOSE)


def tokenize(text: str) -> list:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DslSyntaxError(line, col, ["a token"], repr(text[pos]))
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "int":
            out.append(Token("INT", s, line, col))
        elif kind == "ident":
            out.append(Token("KW" if s in KEYWORDS else "IDENT", s, line, col))
        elif kind == "string":
            out.append(Token("STRING", s[1:-1], line, col))
        elif kind == "punct":
            out.append(Token("PUNCT", s, line, col))
        pos = m.end()
    out.append(Token("EOF", "", line, pos - line_start + 1))
    return out


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Item:
    kind: str
    name: str | None
    body: tuple
    opts: tuple = ()
    line: int = dc_field(default=0, compare=False)
    col: int = dc_field(default=0, compare=False)


@dataclass
class Script:
    items: list

    def __len__(self):
        return len(self.items)

    def commands(self) -> list:
        return [it for it in self.items if it.kind in COMMANDS]


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        raise DslSyntaxError(t.line, t.col, expected, t.describe())

    def at(self, kind, text=None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def eat(self, kind, text=None) -> Token:
        if not self.at(kind, text):
            self.fail([repr(text) if text else kind.lower()])
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        return self.eat("IDENT").text

    def sint(self) -> int:
        neg = False
        if self.at("PUNCT", "-"):
            self.i += 1
            neg = True
        if not self.at("INT"):
            self.fail(["int"])
        v = int(self.eat("INT").text)
        return -v if neg else v

    def ident_list(self) -> tuple:
        out = [self.ident()]
        while self.at("PUNCT", ","):
            self.i += 1
            out.append(self.ident())
        return tuple(out)

    def family_member(self) -> str:
        # builtin members may collide with keywords
        if self.tok.kind == "KW" and self.tok.text in FAMILY_BUILTINS:
            return self.eat("KW").text
        return self.ident()

    def family_list(self) -> tuple:
        out = [self.family_member()]
        while self.at("PUNCT", ","):
            self.i += 1
            out.append(self.family_member())
        return tuple(out)

    # expressions
    def expr(self):
        left = self.term()
        while self.at("PUNCT", "+") or self.at("PUNCT", "-"):
            op = self.eat("PUNCT").text
            right = self.term()
            if op == "+":
                left = ("add", tuple(left[1]) + (right,)) if left[0] == "add" else ("add", (left, right))
            else:
                left = ("sub", left, right)
        return left

    def term(self):
        fs = [self.factor()]
        while self.at("PUNCT", "*"):
            self.i += 1
            fs.append(self.factor())
        return fs[0] if len(fs) == 1 else ("mul", tuple(fs))

    def factor(self):
        base = self.atom()
        if self.at("PUNCT", "^"):
            self.i += 1
            base = ("pow", base, int(self.eat("INT").text))
        return base

    def atom(self):
        t = self.tok
        if t.kind == "INT":
            self.i += 1
            return ("num", int(t.text))
        if t.kind == "IDENT":
            self.i += 1
            return ("var", t.text)
        if self.at("PUNCT", "("):
            self.i += 1
            e = self.expr()
            self.eat("PUNCT", ")")
            return e
        if self.at("PUNCT", "-"):
            self.i += 1
            return ("neg", self.atom())
        self.fail(["int", "ident", "'('", "'-'"])

    def expr_list(self) -> tuple:
        self.eat("PUNCT", "(")
        out = [self.expr()]
        while self.at("PUNCT", ","):
            self.i += 1
            out.append(self.expr())
        self.eat("PUNCT", ")")
        return tuple(out)

    def paren_idents(self) -> tuple:
        self.eat("PUNCT", "(")
        out = self.ident_list()
        self.eat("PUNCT", ")")
        return out

    # declarations
    def algexpr(self):
        t = self.tok
        if self.at("KW", "koszul"):
            self.i += 1
            src = self.ident()
            elems = self.expr_list() if self.at("PUNCT", "(") else None
            return ("koszul", src, elems)
        if self.at("KW", "exterior"):
            self.i += 1
            names = self.paren_idents()
            deg = -1
            if self.at("IDENT", "degree"):
                self.i += 1
                deg = self.sint()
            return ("exterior", names, deg)
        if self.at("KW", "fiber"):
            self.i += 1
            method = self.eat("KW").text if self.at("KW", "koszul") else self.ident()
            names = self.paren_idents()
            self.eat("PUNCT", "/")
            return ("fiber", method, names, self.expr_list())
        if self.at("KW", "adjoin"):
            self.i += 1
            src = self.ident()
            self.eat("PUNCT", "(")
            gens = [self.gen()]
            while self.at("PUNCT", ","):
                self.i += 1
                gens.append(self.gen())
            self.eat("PUNCT", ")")
            return ("adjoin", src, tuple(gens))
        if t.kind == "IDENT":
            self.i += 1
            if self.at("STRING"):
                if t.text != "fixture":
                    self.fail(["';'"])
                return ("fixture", self.eat("STRING").text)
            return ("ref", t.text)
        self.fail(["'koszul'", "'exterior'", "'fiber'", "'adjoin'", "ident"])

    def gen(self):
        name = self.ident()
        self.eat("PUNCT", ":")
        deg = self.sint()
        nil = None
        if self.at("IDENT", "nil"):
            self.i += 1
            nil = int(self.eat("INT").text)
        d = None
        if self.at("PUNCT", "="):
            self.i += 1
            d = self.expr()
        return (name, deg, nil, d)

    def modexpr(self):
        if self.at("KW", "dual"):
            self.i += 1
            return ("dual", self.modexpr())
        if self.at("KW", "shift"):
            self.i += 1
            inner = self.modexpr()
            return ("shift", inner, self.sint())
        if self.at("KW", "koszul"):
            self.i += 1
            return ("koszul", self.ident())
        if self.at("IDENT"):
            first = self.ident()
            if self.at("IDENT"):
                return ("builtin", first, self.ident())
            return ("ref", first)
        self.fail(["'dual'", "'shift'", "'koszul'", "ident"])

    def opts(self) -> tuple:
        out = []
        while self.at("IDENT") and self.tok.text in ("window", "seed", "family"):
            key = self.ident()
            if key == "family":
                out.append((key, self.family_list()))
            else:
                out.append((key, int(self.eat("INT").text)))
        return tuple(out)

    def item(self) -> Item:
        t = self.tok
        if t.kind != "KW":
            self.fail(["declaration or command"])
        kw = t.text
        self.i += 1
        if kw == "field":
            kind = self.ident()
            if kind == "Fp":
                body = ("Fp", int(self.eat("INT").text))
            elif kind == "Q":
                body = ("Q",)
            else:
                self.i -= 1
                self.fail(["'Fp'", "'Q'"])
            return Item("field", None, body, (), t.line, t.col)
        if kw == "ring":
            name = self.ident()
            self.eat("PUNCT", "=")
            self.eat("KW", "poly")
            names = self.ident_list()
            self.eat("PUNCT", "/")
            return Item("ring", name, (names, self.expr_list()), (), t.line, t.col)
        if kw == "algebra":
            name = self.ident()
            self.eat("PUNCT", "=")
            return Item("algebra", name, self.algexpr(), (), t.line, t.col)
        if kw == "module":
            name = self.ident()
            self.eat("PUNCT", "=")
            return Item("module", name, self.modexpr(), (), t.line, t.col)
        if kw in COMMANDS:
            args = tuple(self.ident() for _ in COMMANDS[kw])
            return Item(kw, None, args, self.opts(), t.line, t.col)
        self.i -= 1
        self.fail(["declaration or command"])

    def script(self) -> Script:
        items = []
        while not self.at("EOF"):
            items.append(self.item())
            self.eat("PUNCT", ";")
        return Script(items)


def parse(text: str, check_names: bool = True) -> Script:
    s = _Parser(tokenize(text)).script()
    if check_names:
        resolve_names(s)
    return s


# ---------------------------------------------------------------------------
# name resolution


def _expr_vars(e, out: set):
    tag = e[0]
    if tag == "var":
        out.add(e[1])
    elif tag in ("add", "mul"):
        for x in e[1]:
            _expr_vars(x, out)
    elif tag == "sub":
        _expr_vars(e[1], out)
        _expr_vars(e[2], out)
    elif tag in ("pow", "neg"):
        _expr_vars(e[1], out)
    return out


def resolve_names(script: Script) -> dict:
    """Check every reference against earlier declarations; returns the kind
    of each declared name."""
    kinds: dict = {}

    def need(name, allowed, it, what):
        if kinds.get(name) not in allowed:
            raise DslNameError(name, it.line, it.col, what)

    def check_mod(body, it):
        tag = body[0]
        if tag in ("dual", "shift"):
            check_mod(body[1], it)
        elif tag == "koszul":
            need(body[1], ("ring", "algebra"), it, "algebra")
        elif tag == "builtin":
            if body[1] not in MODULE_BUILTINS:
                raise DslNameError(body[1], it.line, it.col, "module constructor")
            need(body[2], ("ring", "algebra"), it, "algebra")
        else:
            need(body[1], ("module",), it, "module")

    for it in script.items:
        if it.kind == "algebra":
            b = it.body
            if b[0] in ("koszul", "adjoin", "ref"):
                need(b[1], ("ring", "algebra"), it, "algebra")
        elif it.kind == "module":
            check_mod(it.body, it)
        elif it.kind in COMMANDS:
            for arg, want in zip(it.body, COMMANDS[it.kind]):
                allowed = {"algebra": ("ring", "algebra"), "module": ("module",),
                           "any": ("ring", "algebra", "module")}[want]
                need(arg, allowed, it, want if want != "any" else "name")
            for key, val in it.opts:
                if key == "family":
                    for nm in val:
                        if nm not in FAMILY_BUILTINS:
                            need(nm, ("module",), it, "module")
        if it.name is not None:
            kinds[it.name] = it.kind
    return kinds


# ---------------------------------------------------------------------------
# pretty printer


def _atomic(e) -> bool:
    return e[0] in ("num", "var")


def format_expr(e) -> str:
    tag = e[0]
    if tag == "num":
        return str(e[1])
    if tag == "var":
        return e[1]
    if tag == "add":
        parts = [format_expr(e[1][0])]
        for x in e[1][1:]:
            parts.append(_wrap_if(x, ("add", "sub")))
        return " + ".join(parts)
    if tag == "sub":
        return f"{format_expr(e[1])} - {_wrap_if(e[2], ('add', 'sub'))}"
    if tag == "mul":
        return "*".join(_wrap_if(x, ("add", "sub", "neg", "mul")) for x in e[1])
    if tag == "pow":
        base = format_expr(e[1]) if _atomic(e[1]) else f"({format_expr(e[1])})"
        return f"{base}^{e[2]}"
    if tag == "neg":
        inner = format_expr(e[1]) if _atomic(e[1]) or e[1][0] == "neg" else f"({format_expr(e[1])})"
        return f"-{inner}"
    raise ValueError(f"unknown expression node {tag!r}")


def _wrap_if(e, tags) -> str:
    s = format_expr(e)
    return f"({s})" if e[0] in tags else s


def _format_mod(b) -> str:
    tag = b[0]
    if tag == "dual":
        return f"dual {_format_mod(b[1])}"
    if tag == "shift":
        return f"shift {_format_mod(b[1])} {b[2]}"
    if tag == "koszul":
        return f"koszul {b[1]}"
    if tag == "builtin":
        return f"{b[1]} {b[2]}"
    return b[1]


def _format_gen(g) -> str:
    name, deg, nil, d = g
    s = f"{name} : {deg}"
    if nil is not None:
        s += f" nil {nil}"
    if d is not None:
        s += f" = {format_expr(d)}"
    return s


def format_item(it: Item) -> str:
    k, b = it.kind, it.body
    if k == "field":
        return f"field {' '.join(str(x) for x in b)};"
    if k == "ring":
        names, rels = b
        return f"ring {it.name} = poly {', '.join(names)} / ({', '.join(format_expr(r) for r in rels)});"
    if k == "algebra":
        tag = b[0]
        if tag == "koszul":
            tail = f" ({', '.join(format_expr(x) for x in b[2])})" if b[2] is not None else ""
            rhs = f"koszul {b[1]}{tail}"
        elif tag == "exterior":
            rhs = f"exterior ({', '.join(b[1])})" + (f" degree {b[2]}" if b[2] != -1 else "")
        elif tag == "fiber":
            rhs = f"fiber {b[1]} ({', '.join(b[2])}) / ({', '.join(format_expr(x) for x in b[3])})"
        elif tag == "adjoin":
            rhs = f"adjoin {b[1]} ({', '.join(_format_gen(g) for g in b[2])})"
        elif tag == "fixture":
            rhs = f'fixture "{b[1]}"'
        else:
            rhs = b[1]
        return f"algebra {it.name} = {rhs};"
    if k == "module":
        return f"module {it.name} = {_format_mod(b)};"
    parts = [k, *b]
    for key, val in it.opts:
        parts.append(key)
        parts.append(", ".join(val) if key == "family" else str(val))
    return " ".join(parts) + ";"


def format_script(script: Script) -> str:
    return "".join(format_item(it) + "\n" for it in script.items)
