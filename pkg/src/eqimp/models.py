"""Finite countermodel search over multiplication tables.

A countermodel for the pair (premise, conclusion) is a finite table in which
the premise holds under every assignment while the conclusion fails under at
least one.  The search fills table cells in row-major order, breaks value
symmetry with the least-number rule, and prunes any partial table that
already violates a premise instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .budget import Budget, BudgetMeter, UNLIMITED
from .terms import Equation, Op, Term, Var, var_name

FOUND = "found"
EXHAUSTED = "exhausted"
OUT_OF_BUDGET = "out-of-budget"


@dataclass(frozen=True)
class MagmaTable:
    size: int
    entries: tuple[int, ...]  # row-major, entries[i*size + j] = i*j

    def __post_init__(self):
        n = self.size
        if n < 1:
            raise ValueError(f"table size must be at least 1, got {n}")
        if len(self.entries) != n * n:
            raise ValueError(f"expected {n * n} entries, got {len(self.entries)}")
        if any(not 0 <= v < n for v in self.entries):
            raise ValueError("table entry out of range")

    @classmethod
    def from_rows(cls, rows) -> "MagmaTable":
        rows = [list(r) for r in rows]
        return cls(len(rows), tuple(v for row in rows for v in row))

    def op(self, i: int, j: int) -> int:
        return self.entries[i * self.size + j]

    def rows(self) -> list[list[int]]:
        n = self.size
        return [list(self.entries[i * n : (i + 1) * n]) for i in range(n)]


@dataclass(frozen=True)
class Countermodel:
    table: MagmaTable
    assignment: tuple[int, ...]  # element per conclusion variable, index order


@dataclass(frozen=True)
class SearchOutcome:
    status: str  # FOUND | EXHAUSTED | OUT_OF_BUDGET
    countermodel: Countermodel | None
    max_size_searched: int
    steps_used: int


def eval_term(term: Term, table: MagmaTable, env) -> int:
    match term:
        case Var(index):
            return env[index]
        case Op(left, right):
            return table.op(eval_term(left, table, env), eval_term(right, table, env))
    raise TypeError(f"cannot evaluate {term!r} in a finite table")


def _env_width(eq: Equation) -> int:
    width = 0
    stack = [eq.lhs, eq.rhs]
    while stack:
        term = stack.pop()
        if isinstance(term, Var):
            width = max(width, term.index + 1)
        elif isinstance(term, Op):
            stack.extend((term.left, term.right))
    return width


def verify_equation(table: MagmaTable, eq: Equation):
    """None when the equation holds; otherwise the first violating assignment
    in lexicographic order."""
    width = _env_width(eq)
    for env in itertools.product(range(table.size), repeat=width):
        if eval_term(eq.lhs, table, env) != eval_term(eq.rhs, table, env):
            return env
    return None


# --- backtracking search ----------------------------------------------------


def _compile(term: Term, prog: list) -> None:
    # postfix program: (True, var_index) pushes a value, (False, 0) applies the op
    match term:
        case Var(index):
            prog.append((True, index))
        case Op(left, right):
            _compile(left, prog)
            _compile(right, prog)
            prog.append((False, 0))
        case _:
            raise TypeError(f"cannot compile {term!r}")


def _run(prog, env, table, n):
    """Evaluate a postfix program against a partial table.

    Returns (value, blocking_cell, max_cell_touched); value is None when some
    required cell is unassigned, and blocking_cell names the first such cell.
    """
    stack = []
    touched = -1
    for is_var, arg in prog:
        if is_var:
            stack.append(env[arg])
        else:
            right = stack.pop()
            cell = stack.pop() * n + right
            if cell > touched:
                touched = cell
            value = table[cell]
            if value < 0:
                return None, cell, touched
            stack.append(value)
    return stack[0], None, touched


def _search_size(n, premise, conclusion, meter):
    """Search all size-n tables modulo the least-number rule.

    Returns ('found', Countermodel) / ('exhausted', None) / ('budget', None).
    """
    lhs_prog: list = []
    rhs_prog: list = []
    _compile(premise.lhs, lhs_prog)
    _compile(premise.rhs, rhs_prog)
    width = _env_width(premise)
    envs = list(itertools.product(range(n), repeat=width))

    cells = n * n
    table = [-1] * cells
    # watch[c] holds premise instances whose next re-check happens when cell c
    # is assigned; instances that are satisfied without touching any cell are
    # dropped, ones violated without touching any cell kill the whole size
    watch: list[list[int]] = [[] for _ in range(cells)]

    def recheck(idx: int, trigger: int | None):
        """Re-evaluate one premise instance and park it on the cell whose next
        assignment should re-check it; False when the instance is violated."""
        env = envs[idx]
        left, blocked, touched_l = _run(lhs_prog, env, table, n)
        if left is None:
            watch[blocked].append(idx)
            return True
        right, blocked, touched_r = _run(rhs_prog, env, table, n)
        if right is None:
            watch[blocked].append(idx)
            return True
        if left != right:
            if trigger is not None:
                watch[trigger].append(idx)
            return False
        touched = max(touched_l, touched_r)
        if touched >= 0:
            watch[touched].append(idx)
        return True

    for idx in range(len(envs)):
        if not recheck(idx, None):
            # a premise instance fails with no table lookups at all, so no
            # table of this size can satisfy the premise
            return "exhausted", None

    # least-number rule: a value v > 0 is allowed only when v-1 is already
    # designated by an earlier cell value or by an element index in play
    arg_max = [0] * cells
    for cell in range(cells):
        high = max(cell // n, cell % n)
        arg_max[cell] = high if cell == 0 else max(arg_max[cell - 1], high)

    next_val = [0] * cells
    value_max = [0] * (cells + 1)
    value_max[0] = -1
    pos = 0
    while pos >= 0:
        if pos == cells:
            full = MagmaTable(n, tuple(table))
            violation = verify_equation(full, conclusion)
            if violation is not None and verify_equation(full, premise) is None:
                return "found", Countermodel(full, violation)
            pos -= 1
            table[pos] = -1
            continue
        limit = max(arg_max[pos], value_max[pos]) + 1
        if limit >= n:
            limit = n - 1
        value = next_val[pos]
        if value > limit:
            next_val[pos] = 0
            pos -= 1
            if pos >= 0:
                table[pos] = -1
            continue
        next_val[pos] = value + 1
        if not meter.tick():
            return "budget", None
        table[pos] = value
        watchers = watch[pos]
        watch[pos] = []
        consistent = True
        for idx in watchers:
            if not recheck(idx, pos):
                consistent = False
        if not consistent:
            table[pos] = -1
            continue
        value_max[pos + 1] = value if value > value_max[pos] else value_max[pos]
        pos += 1
        if pos < cells:
            next_val[pos] = 0
    return "exhausted", None


def find_countermodel(
    premise: Equation,
    conclusion: Equation,
    max_size: int = 6,
    budget: Budget = UNLIMITED,
) -> SearchOutcome:
    """Search sizes 2..max_size in order; size 1 never separates a pair."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    meter = BudgetMeter(budget)
    searched = 1
    for n in range(2, max_size + 1):
        status, model = _search_size(n, premise, conclusion, meter)
        if status == "found":
            return SearchOutcome(FOUND, model, n, meter.steps_used)
        if status == "budget":
            return SearchOutcome(OUT_OF_BUDGET, None, searched, meter.steps_used)
        searched = n
    return SearchOutcome(EXHAUSTED, None, searched, meter.steps_used)


# --- enumeration oracle ------------------------------------------------------


def count_models(eq: Equation, size: int, cap: int = 10_000_000) -> int:
    """Count all size-n tables satisfying eq by plain enumeration.

    Refuses when n^(n*n) exceeds the cap; this is a test oracle, not a search.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    total = size ** (size * size)
    if total > cap:
        raise ValueError(f"enumeration of {total} tables exceeds cap {cap}")
    count = 0
    for entries in itertools.product(range(size), repeat=size * size):
        if verify_equation(MagmaTable(size, entries), eq) is None:
            count += 1
    return count


# --- witness serialization ---------------------------------------------------


def format_countermodel(cm: Countermodel) -> str:
    """Size line, n table rows, then the violating assignment as var=elem pairs."""
    lines = [str(cm.table.size)]
    lines.extend(" ".join(str(v) for v in row) for row in cm.table.rows())
    lines.append(" ".join(f"{var_name(i)}={v}" for i, v in enumerate(cm.assignment)))
    return "\n".join(lines)


def parse_countermodel(text: str) -> Countermodel:
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) < 2:
        raise ValueError("countermodel text too short")
    try:
        size = int(lines[0])
    except ValueError:
        raise ValueError(f"bad countermodel size line {lines[0]!r}") from None
    if len(lines) != size + 2:
        raise ValueError(f"expected {size} rows plus an assignment line")
    rows = []
    for line in lines[1 : size + 1]:
        row = [int(v) for v in line.split()]
        if len(row) != size:
            raise ValueError(f"bad countermodel row {line!r}")
        rows.append(row)
    assignment = []
    for index, item in enumerate(lines[size + 1].split()):
        name, _, value = item.partition("=")
        if name != var_name(index):
            raise ValueError(f"unexpected assignment entry {item!r}")
        assignment.append(int(value))
    return Countermodel(MagmaTable.from_rows(rows), tuple(assignment))
