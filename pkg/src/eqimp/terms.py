"""Terms and equations over a single binary operation.

Variables are numbered; the surface syntax spells them x, y, z, w, u, v and
then v6, v7, ... for higher indexes.  Constants never appear in parsed
equations, they enter later when a conjecture is grounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

VAR_LETTERS = "xyzwuv"
CONST_LETTERS = "abcdef"


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    index: int


@dataclass(frozen=True)
class Op:
    left: "Term"
    right: "Term"


Term = Union[Var, Const, Op]


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    # corpus ordinal; not part of structural identity
    id: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Corpus:
    equations: tuple[Equation, ...]

    @property
    def count(self) -> int:
        return len(self.equations)

    def by_id(self, eq_id: int) -> Equation:
        if not 1 <= eq_id <= len(self.equations):
            raise ValueError(f"no equation with id {eq_id}")
        return self.equations[eq_id - 1]


def var_name(index: int) -> str:
    if index < 0:
        raise ValueError(f"negative variable index {index}")
    return VAR_LETTERS[index] if index < 6 else f"v{index}"


def const_name(index: int) -> str:
    if index < 0:
        raise ValueError(f"negative constant index {index}")
    return CONST_LETTERS[index] if index < 6 else f"c{index}"


def _var_index(name: str) -> int | None:
    if name in VAR_LETTERS and len(name) == 1:
        return VAR_LETTERS.index(name)
    if name[0] == "v" and name[1:].isdigit():
        index = int(name[1:])
        if index >= 6:
            return index
    return None


def _const_index(name: str) -> int | None:
    if name in CONST_LETTERS and len(name) == 1:
        return CONST_LETTERS.index(name)
    if name[0] == "c" and name[1:].isdigit():
        index = int(name[1:])
        if index >= 6:
            return index
    return None


# --- parsing ---------------------------------------------------------------

_TOKEN_CHARS = set("*=()")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, column) tokens; kind is one of sym/name."""
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append(("sym", ch, i + 1))
            i += 1
            continue
        if ch.isalpha() and ch.islower():
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("name", text[i:j], i + 1))
            i = j
            continue
        raise ValueError(f"unknown token {ch!r} at column {i + 1}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], length: int):
        self.tokens = tokens
        self.pos = 0
        self.length = length

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ValueError(f"unexpected end of input at column {self.length + 1}")
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.take()
        if tok[1] != text:
            raise ValueError(f"expected {text!r} at column {tok[2]}, found {tok[1]!r}")

    def atom(self) -> Term:
        kind, text, col = self.take()
        if text == "(":
            term = self.side()
            self.expect(")")
            return term
        if kind == "name":
            index = _var_index(text)
            if index is None:
                raise ValueError(f"unknown variable {text!r} at column {col}")
            return Var(index)
        raise ValueError(f"expected a term at column {col}, found {text!r}")

    def side(self) -> Term:
        # a side is an atom or a single product; '*' does not associate,
        # nested products need explicit parentheses
        left = self.atom()
        tok = self.peek()
        if tok is not None and tok[1] == "*":
            self.take()
            right = self.atom()
            return Op(left, right)
        return left


def parse_equation(text: str) -> Equation:
    """Parse one equation such as '(x*y)*z=x*(y*z)'.

    Raises ValueError with a column position on malformed input.
    """
    tokens = _tokenize(text)
    eq_positions = [tok[2] for tok in tokens if tok[1] == "="]
    if len(eq_positions) == 0:
        raise ValueError("missing '=' in equation")
    if len(eq_positions) > 1:
        raise ValueError(f"second '=' at column {eq_positions[1]}")
    parser = _Parser(tokens, len(text))
    lhs = parser.side()
    parser.expect("=")
    rhs = parser.side()
    trailing = parser.peek()
    if trailing is not None:
        raise ValueError(f"unexpected {trailing[1]!r} at column {trailing[2]}")
    return Equation(lhs, rhs)


# --- printing --------------------------------------------------------------


def format_term(term: Term, top: bool = True) -> str:
    """Surface form of a term; only the outermost product drops parentheses."""
    match term:
        case Var(index):
            return var_name(index)
        case Const(index):
            return const_name(index)
        case Op(left, right):
            body = f"{format_term(left, top=False)}*{format_term(right, top=False)}"
            return body if top else f"({body})"
    raise TypeError(f"not a term: {term!r}")


def print_equation(eq: Equation) -> str:
    return f"{format_term(eq.lhs)}={format_term(eq.rhs)}"


# --- canonical form --------------------------------------------------------


def _collect_vars(term: Term, order: list[int], seen: set[int]) -> None:
    match term:
        case Var(index):
            if index not in seen:
                seen.add(index)
                order.append(index)
        case Op(left, right):
            _collect_vars(left, order, seen)
            _collect_vars(right, order, seen)
        case Const():
            pass


def _rename_vars(term: Term, mapping: dict[int, int]) -> Term:
    match term:
        case Var(index):
            return Var(mapping[index])
        case Op(left, right):
            return Op(_rename_vars(left, mapping), _rename_vars(right, mapping))
        case _:
            return term


def canonicalize(eq: Equation) -> Equation:
    """Renumber variables by first occurrence, lhs before rhs, preorder."""
    order: list[int] = []
    seen: set[int] = set()
    _collect_vars(eq.lhs, order, seen)
    _collect_vars(eq.rhs, order, seen)
    mapping = {old: new for new, old in enumerate(order)}
    return Equation(_rename_vars(eq.lhs, mapping), _rename_vars(eq.rhs, mapping), id=eq.id)


def variables(term: Term) -> list[int]:
    order: list[int] = []
    _collect_vars(term, order, set())
    return order


def equation_variables(eq: Equation) -> list[int]:
    order: list[int] = []
    seen: set[int] = set()
    _collect_vars(eq.lhs, order, seen)
    _collect_vars(eq.rhs, order, seen)
    return order


def term_size(term: Term) -> int:
    match term:
        case Op(left, right):
            return 1 + term_size(left) + term_size(right)
        case _:
            return 1


# --- term positions --------------------------------------------------------


def subterm_at(term: Term, pos: tuple[int, ...]) -> Term:
    """Subterm at a path of 0 (left) / 1 (right) steps; () is the root."""
    for step in pos:
        if not isinstance(term, Op):
            raise ValueError(f"position {pos} does not exist")
        term = term.left if step == 0 else term.right
    return term


def replace_at(term: Term, pos: tuple[int, ...], replacement: Term) -> Term:
    if not pos:
        return replacement
    if not isinstance(term, Op):
        raise ValueError(f"position {pos} does not exist")
    step, rest = pos[0], pos[1:]
    if step == 0:
        return Op(replace_at(term.left, rest, replacement), term.right)
    return Op(term.left, replace_at(term.right, rest, replacement))


def positions(term: Term) -> Iterator[tuple[tuple[int, ...], Term]]:
    """All positions in preorder, root first."""
    yield (), term
    if isinstance(term, Op):
        for pos, sub in positions(term.left):
            yield (0,) + pos, sub
        for pos, sub in positions(term.right):
            yield (1,) + pos, sub


# --- corpus files ----------------------------------------------------------


def load_corpus(path: str) -> Corpus:
    """Load a .eqs file: one equation per line, '#' comments and blanks skipped.

    Ids are assigned 1..m in file order; duplicate equations keep their own ids.
    """
    equations: list[Equation] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                eq = parse_equation(stripped)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            eq = canonicalize(eq)
            equations.append(Equation(eq.lhs, eq.rhs, id=len(equations) + 1))
    return Corpus(tuple(equations))


def enumerate_pairs(corpus: Corpus) -> Iterator[tuple[int, int]]:
    """All ordered id pairs (i, j) with i != j, in lexicographic order."""
    m = corpus.count
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i != j:
                yield (i, j)


def pair_count(m: int) -> int:
    return m * m - m
