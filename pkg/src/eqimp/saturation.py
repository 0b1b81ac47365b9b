"""Unit-equality saturation for one axiom against a ground disequation.

The prover runs unfailing completion: equations are oriented with a
Knuth-Bendix ordering where possible, critical pairs are drawn between the
maximal sides, and the goal's two ground sides are kept normalized under
ordered rewriting.  The goal is proved when its sides meet; a saturated set
with the goal still open refutes the implication.

Every derived equation carries a conversion chain whose individual steps are
instances of the original axiom, so a successful run yields a proof object
that an independent replayer can check by matching and substitution alone.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, NamedTuple

from .budget import Budget, BudgetMeter, UNLIMITED
from .terms import (
    Const,
    Equation,
    Op,
    Term,
    Var,
    canonicalize,
    const_name,
    format_term,
    positions,
    replace_at,
    subterm_at,
    term_size,
    var_name,
    _tokenize,
)
from .tptp import GroundDiseq

PROVED = "proved"
SATURATED = "saturated"
OUT_OF_BUDGET = "out-of-budget"


class Cmp(Enum):
    GT = "gt"
    LT = "lt"
    EQ = "eq"
    INC = "inc"


GT, LT, EQ, INC = Cmp.GT, Cmp.LT, Cmp.EQ, Cmp.INC


@dataclass(frozen=True)
class KboConfig:
    """Uniform symbol weights; constants are ordered by index below the op."""

    var_weight: int = 1
    const_weight: int = 1
    op_weight: int = 1

    def __post_init__(self):
        if min(self.var_weight, self.const_weight, self.op_weight) <= 0:
            raise ValueError("weights must be positive")
        if self.const_weight < self.var_weight:
            # admissibility: every constant weighs at least as much as a variable
            raise ValueError("constant weight must be at least the variable weight")


DEFAULT_KBO = KboConfig()


@lru_cache(maxsize=None)
def _shape(term: Term) -> tuple[int, int, tuple[tuple[int, int], ...]]:
    """(op count, const count, sorted (var index, occurrences))."""
    ops = consts = 0
    var_counts: dict[int, int] = {}
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            var_counts[t.index] = var_counts.get(t.index, 0) + 1
        elif isinstance(t, Const):
            consts += 1
        else:
            ops += 1
            stack.append(t.left)
            stack.append(t.right)
    return ops, consts, tuple(sorted(var_counts.items()))


def is_ground(term: Term) -> bool:
    return not _shape(term)[2]


def _head_rank(term: Term) -> tuple[int, int]:
    # precedence: a < b < c < ... < op
    if isinstance(term, Const):
        return (0, term.index)
    return (1, 0)


def kbo_compare(s: Term, t: Term, config: KboConfig = DEFAULT_KBO) -> Cmp:
    if s == t:
        return EQ
    ops_s, consts_s, vars_s = _shape(s)
    ops_t, consts_t, vars_t = _shape(t)
    vs = dict(vars_s)
    vt = dict(vars_t)
    s_covers = all(vs.get(i, 0) >= k for i, k in vt.items())
    t_covers = all(vt.get(i, 0) >= k for i, k in vs.items())
    ws = (
        config.op_weight * ops_s
        + config.const_weight * consts_s
        + config.var_weight * sum(vs.values())
    )
    wt = (
        config.op_weight * ops_t
        + config.const_weight * consts_t
        + config.var_weight * sum(vt.values())
    )
    if ws > wt:
        return GT if s_covers else INC
    if wt > ws:
        return LT if t_covers else INC
    if isinstance(s, Var) or isinstance(t, Var):
        # equal weight but distinct: a variable against a constant or
        # another variable is incomparable
        return INC
    rank_s, rank_t = _head_rank(s), _head_rank(t)
    if rank_s > rank_t:
        return GT if s_covers else INC
    if rank_s < rank_t:
        return LT if t_covers else INC
    # same head; equal constants were caught by the identity test
    sub = kbo_compare(s.left, t.left, config)
    if sub == EQ:
        sub = kbo_compare(s.right, t.right, config)
    if sub == GT:
        return GT if s_covers else INC
    if sub == LT:
        return LT if t_covers else INC
    return INC


# --- substitutions, matching, unification ------------------------------------

Subst = dict[int, Term]


def apply_subst(term: Term, subst: Subst) -> Term:
    match term:
        case Var(index):
            return subst.get(index, term)
        case Op(left, right):
            return Op(apply_subst(left, subst), apply_subst(right, subst))
        case _:
            return term


def match(pattern: Term, subject: Term) -> Subst | None:
    """One-way matching: a substitution s with s(pattern) == subject."""
    subst: Subst = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = subst.get(p.index)
            if bound is None:
                subst[p.index] = s
            elif bound != s:
                return None
        elif isinstance(p, Const):
            if p != s:
                return None
        else:
            if not isinstance(s, Op):
                return None
            stack.append((p.left, s.left))
            stack.append((p.right, s.right))
    return subst


def _occurs(index: int, term: Term, subst: Subst) -> bool:
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t.index == index:
                return True
            if t.index in subst:
                stack.append(subst[t.index])
        elif isinstance(t, Op):
            stack.append(t.left)
            stack.append(t.right)
    return False


def _resolve(term: Term, subst: Subst) -> Term:
    while isinstance(term, Var) and term.index in subst:
        term = subst[term.index]
    return term


def unify(s: Term, t: Term) -> Subst | None:
    """Most general unifier with occurs check, or None."""
    subst: Subst = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a = _resolve(a, subst)
        b = _resolve(b, subst)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.index, b, subst):
                return None
            subst[a.index] = b
        elif isinstance(b, Var):
            if _occurs(b.index, a, subst):
                return None
            subst[b.index] = a
        elif isinstance(a, Op) and isinstance(b, Op):
            stack.append((a.left, b.left))
            stack.append((a.right, b.right))
        else:
            return None
    # flatten the triangular bindings into an idempotent substitution
    def deep(term: Term) -> Term:
        match term:
            case Var(index):
                return deep(subst[index]) if index in subst else term
            case Op(left, right):
                return Op(deep(left), deep(right))
            case _:
                return term

    return {index: deep(value) for index, value in subst.items()}


def _shift_vars(term: Term, offset: int) -> Term:
    match term:
        case Var(index):
            return Var(index + offset)
        case Op(left, right):
            return Op(_shift_vars(left, offset), _shift_vars(right, offset))
        case _:
            return term


def _max_var(term: Term) -> int:
    vars_ = _shape(term)[2]
    return max((i for i, _ in vars_), default=-1)


# --- proof steps --------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One rewrite: before == after up to an axiom instance at pos.

    The substitution maps the axiom's variables to terms; the replayer accepts
    the step in either orientation of the axiom.
    """

    pos: tuple[int, ...]
    subst: tuple[tuple[int, Term], ...]
    before: Term
    after: Term
    eq_id: int


@dataclass(frozen=True)
class Proof:
    steps: tuple[Step, ...]


class ReplayResult(NamedTuple):
    accepted: bool
    failed_step: int | None


def _subst_step(step: Step, subst: Subst) -> Step:
    return Step(
        pos=step.pos,
        subst=tuple((i, apply_subst(v, subst)) for i, v in step.subst),
        before=apply_subst(step.before, subst),
        after=apply_subst(step.after, subst),
        eq_id=step.eq_id,
    )


def _rename_step(step: Step, mapping: dict[int, int]) -> Step:
    subst = {i: Var(j) for i, j in mapping.items()}
    return _subst_step(step, subst)


def _embed_step(step: Step, context: Term, pos: tuple[int, ...]) -> Step:
    return Step(
        pos=pos + step.pos,
        subst=step.subst,
        before=replace_at(context, pos, step.before),
        after=replace_at(context, pos, step.after),
        eq_id=step.eq_id,
    )


def _flip_step(step: Step) -> Step:
    return Step(step.pos, step.subst, step.after, step.before, step.eq_id)


def _reverse_chain(chain: tuple[Step, ...]) -> tuple[Step, ...]:
    return tuple(_flip_step(s) for s in reversed(chain))


# --- rewriting ----------------------------------------------------------------


class Orientation(Enum):
    LEFT_TO_RIGHT = "left-to-right"
    RIGHT_TO_LEFT = "right-to-left"
    UNORIENTABLE = "unorientable"


@dataclass(frozen=True)
class ProcessedEq:
    lhs: Term
    rhs: Term
    orientation: Orientation
    chain: tuple[Step, ...]  # axiom-level conversion lhs => rhs

    def directed(self):
        """(source, target, chain source=>target) views usable for rewriting."""
        if self.orientation == Orientation.LEFT_TO_RIGHT:
            return ((self.lhs, self.rhs, self.chain),)
        if self.orientation == Orientation.RIGHT_TO_LEFT:
            return ((self.rhs, self.lhs, _reverse_chain(self.chain)),)
        return (
            (self.lhs, self.rhs, self.chain),
            (self.rhs, self.lhs, _reverse_chain(self.chain)),
        )


def _try_rewrite_root(term, rules, config):
    for src, tgt, chain, ordered in rules:
        subst = match(src, term)
        if subst is None:
            continue
        extra = [i for i, _ in _shape(tgt)[2] if i not in subst]
        if extra:
            # fill unmatched target variables with the least constant; only
            # safe to decide termination by ordering when the redex is ground
            if not is_ground(term):
                continue
            for i in extra:
                subst[i] = Const(0)
        replacement = apply_subst(tgt, subst)
        if not ordered or extra:
            if kbo_compare(term, replacement, config) != GT:
                continue
        steps = tuple(_subst_step(s, subst) for s in chain)
        return replacement, steps
    return None


def _rewrite_once(term, rules, config):
    """Rewrite the innermost-leftmost redex; None when term is in normal form."""
    if isinstance(term, Op):
        hit = _rewrite_once(term.left, rules, config)
        if hit is not None:
            new_left, steps = hit
            return Op(new_left, term.right), tuple(
                Step(
                    (0,) + s.pos,
                    s.subst,
                    Op(s.before, term.right),
                    Op(s.after, term.right),
                    s.eq_id,
                )
                for s in steps
            )
        hit = _rewrite_once(term.right, rules, config)
        if hit is not None:
            new_right, steps = hit
            return Op(term.left, new_right), tuple(
                Step(
                    (1,) + s.pos,
                    s.subst,
                    Op(term.left, s.before),
                    Op(term.left, s.after),
                    s.eq_id,
                )
                for s in steps
            )
    return _try_rewrite_root(term, rules, config)


def _directed_rules(eqs: Iterable[ProcessedEq]):
    rules = []
    for eq in eqs:
        ordered = eq.orientation != Orientation.UNORIENTABLE
        for src, tgt, chain in eq.directed():
            rules.append((src, tgt, chain, ordered))
    return rules


def _normalize_traced(term, rules, config, cap):
    steps: list[Step] = []
    rewrites = 0
    while True:
        hit = _rewrite_once(term, rules, config)
        if hit is None:
            return term, tuple(steps)
        rewrites += 1
        if rewrites > cap:
            raise ValueError(f"rewrite step cap {cap} exceeded")
        term, new_steps = hit
        steps.extend(new_steps)


_ORIENTATION_OF_CMP = {
    GT: Orientation.LEFT_TO_RIGHT,
    LT: Orientation.RIGHT_TO_LEFT,
    INC: Orientation.UNORIENTABLE,
}


def orient_equation(
    eq: Equation, eq_id: int | None = None, config: KboConfig = DEFAULT_KBO
) -> ProcessedEq | None:
    """Canonicalize and orient an equation; None when it is trivial (s = s)."""
    eq = canonicalize(eq)
    if eq.lhs == eq.rhs:
        return None
    if eq_id is None:
        eq_id = eq.id if eq.id is not None else 1
    identity = tuple(
        (i, Var(i))
        for i in sorted(dict(_shape(eq.lhs)[2] + _shape(eq.rhs)[2]))
    )
    chain = (Step((), identity, eq.lhs, eq.rhs, eq_id),)
    cmp = kbo_compare(eq.lhs, eq.rhs, config)
    return ProcessedEq(eq.lhs, eq.rhs, _ORIENTATION_OF_CMP[cmp], chain)


def _coerce_processed(eqs, config) -> list[ProcessedEq]:
    procs = []
    for k, eq in enumerate(eqs, 1):
        if isinstance(eq, ProcessedEq):
            procs.append(eq)
            continue
        proc = orient_equation(eq, eq.id or k, config)
        if proc is not None:
            procs.append(proc)
    return procs


def normalize(
    term: Term,
    eqs: Iterable[ProcessedEq | Equation],
    config: KboConfig = DEFAULT_KBO,
    cap: int = 10_000,
) -> Term:
    """Normal form under ordered rewriting with the given equations."""
    procs = _coerce_processed(eqs, config)
    nf, _ = _normalize_traced(term, _directed_rules(procs), config, cap)
    return nf


# --- critical pairs -----------------------------------------------------------


def _canonical_triple(left, right, chain):
    order: list[int] = []
    seen: set[int] = set()

    def collect(term):
        for _, sub in positions(term):
            if isinstance(sub, Var) and sub.index not in seen:
                seen.add(sub.index)
                order.append(sub.index)

    collect(left)
    collect(right)
    for step in chain:
        collect(step.before)
        collect(step.after)
        for _, value in step.subst:
            collect(value)
    mapping = {old: new for new, old in enumerate(order)}
    rename = {old: Var(new) for old, new in mapping.items()}
    return (
        apply_subst(left, rename),
        apply_subst(right, rename),
        tuple(_subst_step(s, rename) for s in chain),
    )


def _overlaps(inner, outer, config, include_root):
    s_in, t_in, ch_in = inner
    s_out, t_out, ch_out = outer
    found = []
    for pos, sub in positions(s_out):
        if isinstance(sub, Var):
            continue
        if not include_root and pos == ():
            continue
        mgu = unify(sub, s_in)
        if mgu is None:
            continue
        # discard overlaps whose instances flip against the ordering
        if kbo_compare(apply_subst(t_out, mgu), apply_subst(s_out, mgu), config) == GT:
            continue
        if kbo_compare(apply_subst(t_in, mgu), apply_subst(s_in, mgu), config) == GT:
            continue
        peak = apply_subst(s_out, mgu)
        left = apply_subst(t_out, mgu)
        right = replace_at(peak, pos, apply_subst(t_in, mgu))
        if left == right:
            continue
        back = _reverse_chain(tuple(_subst_step(s, mgu) for s in ch_out))
        forward = tuple(
            _embed_step(_subst_step(s, mgu), peak, pos) for s in ch_in
        )
        found.append(_canonical_triple(left, right, back + forward))
    return found


def _critical_pair_triples(e1: ProcessedEq, e2: ProcessedEq, config):
    offset = max(_max_var(e1.lhs), _max_var(e1.rhs)) + 1
    shifted = ProcessedEq(
        _shift_vars(e2.lhs, offset),
        _shift_vars(e2.rhs, offset),
        e2.orientation,
        tuple(
            Step(
                s.pos,
                tuple((i, _shift_vars(v, offset)) for i, v in s.subst),
                _shift_vars(s.before, offset),
                _shift_vars(s.after, offset),
                s.eq_id,
            )
            for s in e2.chain
        ),
    )
    triples = []
    for d1 in e1.directed():
        for d2 in shifted.directed():
            triples.extend(_overlaps(d1, d2, config, include_root=True))
            triples.extend(_overlaps(d2, d1, config, include_root=False))
    return triples


def critical_pairs(
    e1: ProcessedEq | Equation,
    e2: ProcessedEq | Equation,
    config: KboConfig = DEFAULT_KBO,
) -> list[Equation]:
    """All critical pairs between two equations, canonicalized, duplicates and
    trivial pairs removed.  Overlap positions are non-variable; directions are
    limited to sides not smaller than their partner.  Renaming apart is done
    internally, so the same equation may be passed twice."""
    coerced = _coerce_processed([e1, e2], config)
    if len(coerced) < 2:
        return []
    p1, p2 = coerced
    result = []
    seen = set()
    for left, right, _ in _critical_pair_triples(p1, p2, config):
        key = (left, right)
        flipped = _canonical_triple(right, left, ())[:2]
        if key in seen or flipped in seen:
            continue
        seen.add(key)
        seen.add(flipped)
        result.append(Equation(left, right))
    return result


# --- the given-clause loop ------------------------------------------------------


@dataclass(frozen=True)
class SaturationOutcome:
    status: str  # PROVED | SATURATED | OUT_OF_BUDGET
    proof: Proof | None
    steps_used: int


def _canonical_key(left, right):
    l, r, _ = _canonical_triple(left, right, ())
    return (l, r)


def saturate(
    axiom: Equation,
    goal: GroundDiseq,
    budget: Budget = UNLIMITED,
    config: KboConfig = DEFAULT_KBO,
    cap: int = 10_000,
) -> SaturationOutcome:
    """Prove or refute goal.left = goal.right from one universally
    quantified axiom.  Returns Proved with a replayable proof, Saturated when
    the equation set closes without joining the goal, or OutOfBudget."""
    ax_id = axiom.id if axiom.id is not None else 1
    meter = BudgetMeter(budget)

    queue: list[tuple[int, int, Term, Term, tuple[Step, ...]]] = []
    serial = 0
    seen: set[tuple[Term, Term]] = set()

    def enqueue(left, right, chain):
        nonlocal serial
        key = _canonical_key(left, right)
        if key in seen or _canonical_key(right, left) in seen:
            return
        seen.add(key)
        heapq.heappush(
            queue, (term_size(left) + term_size(right), serial, left, right, chain)
        )
        serial += 1

    base = orient_equation(axiom, ax_id, config)
    if base is not None:
        enqueue(base.lhs, base.rhs, base.chain)

    processed: list[ProcessedEq] = []
    rules = _directed_rules(processed)
    goal_left, goal_right = goal.left, goal.right
    left_steps: list[Step] = []
    right_steps: list[Step] = []

    while meter.tick():
        goal_left, steps = _normalize_traced(goal_left, rules, config, cap)
        left_steps.extend(steps)
        goal_right, steps = _normalize_traced(goal_right, rules, config, cap)
        right_steps.extend(steps)
        if goal_left == goal_right:
            conversion = tuple(left_steps) + _reverse_chain(tuple(right_steps))
            return SaturationOutcome(PROVED, Proof(conversion), meter.steps_used)
        if not queue:
            return SaturationOutcome(SATURATED, None, meter.steps_used)

        _, _, left, right, chain = heapq.heappop(queue)
        left2, steps_l = _normalize_traced(left, rules, config, cap)
        right2, steps_r = _normalize_traced(right, rules, config, cap)
        if left2 == right2:
            continue
        chain = _reverse_chain(steps_l) + chain + steps_r
        left2, right2, chain = _canonical_triple(left2, right2, chain)
        if (left2, right2) != (left, right):
            key = (left2, right2)
            if key in seen or _canonical_key(right2, left2) in seen:
                continue
            seen.add(key)
        given = ProcessedEq(
            left2, right2, _ORIENTATION_OF_CMP[kbo_compare(left2, right2, config)], chain
        )

        new_triples = []
        for other in processed:
            new_triples.extend(_critical_pair_triples(given, other, config))
        new_triples.extend(_critical_pair_triples(given, given, config))

        # inter-reduction: simplify stored equations with the new one
        given_rules = _directed_rules([given])
        survivors = []
        for other in processed:
            l2, sl = _normalize_traced(other.lhs, given_rules, config, cap)
            r2, sr = _normalize_traced(other.rhs, given_rules, config, cap)
            if l2 == other.lhs and r2 == other.rhs:
                survivors.append(other)
                continue
            if l2 == r2:
                continue
            enqueue(l2, r2, _reverse_chain(sl) + other.chain + sr)
        processed = survivors + [given]
        rules = _directed_rules(processed)

        for left3, right3, chain3 in new_triples:
            enqueue(left3, right3, chain3)

    return SaturationOutcome(OUT_OF_BUDGET, None, meter.steps_used)


# --- proof replay and serialization ---------------------------------------------


def replay_proof(proof: Proof, axiom: Equation, goal: GroundDiseq) -> ReplayResult:
    """Re-execute a proof by matching and substitution only.

    Each step must rewrite the current term at the stated position with the
    stated axiom instance (in either orientation), and the final term must be
    the goal's right side.  The failed step index is reported otherwise; index
    len(steps) means the conversion stopped short of the goal."""
    axiom = canonicalize(axiom)
    current = goal.left
    for index, step in enumerate(proof.steps):
        if step.before != current:
            return ReplayResult(False, index)
        try:
            sub = subterm_at(current, step.pos)
        except ValueError:
            return ReplayResult(False, index)
        subst = dict(step.subst)
        inst_l = apply_subst(axiom.lhs, subst)
        inst_r = apply_subst(axiom.rhs, subst)
        forward = sub == inst_l and step.after == replace_at(current, step.pos, inst_r)
        backward = sub == inst_r and step.after == replace_at(current, step.pos, inst_l)
        if not (forward or backward):
            return ReplayResult(False, index)
        current = step.after
    if current != goal.right:
        return ReplayResult(False, len(proof.steps))
    return ReplayResult(True, None)


def _format_pos(pos: tuple[int, ...]) -> str:
    return "e" if not pos else ".".join(str(p) for p in pos)


def _parse_pos(text: str) -> tuple[int, ...]:
    if text == "e":
        return ()
    return tuple(int(p) for p in text.split("."))


def format_proof(proof: Proof) -> str:
    lines = []
    for k, step in enumerate(proof.steps, 1):
        subst = ",".join(
            f"{var_name(i)}={format_term(v)}" for i, v in sorted(step.subst)
        )
        lines.append(
            f"step {k}: rewrite at {_format_pos(step.pos)} with eq {step.eq_id} "
            f"under {{{subst}}}: {format_term(step.before)} ==> {format_term(step.after)}"
        )
    return "\n".join(lines)


def _parse_term(text: str) -> Term:
    tokens = _tokenize(text)

    def atom(pos):
        if pos >= len(tokens):
            raise ValueError("unexpected end of term")
        kind, tok, col = tokens[pos]
        if tok == "(":
            term, pos = side(pos + 1)
            if pos >= len(tokens) or tokens[pos][1] != ")":
                raise ValueError(f"missing ')' near column {col}")
            return term, pos + 1
        if kind == "name":
            if tok in "xyzwuv" and len(tok) == 1:
                return Var("xyzwuv".index(tok)), pos + 1
            if tok[0] == "v" and tok[1:].isdigit():
                return Var(int(tok[1:])), pos + 1
            if tok in "abcdef" and len(tok) == 1:
                return Const("abcdef".index(tok)), pos + 1
            if tok[0] == "c" and tok[1:].isdigit():
                return Const(int(tok[1:])), pos + 1
        raise ValueError(f"bad term token {tok!r} at column {col}")

    def side(pos):
        left, pos = atom(pos)
        if pos < len(tokens) and tokens[pos][1] == "*":
            right, pos = atom(pos + 1)
            return Op(left, right), pos
        return left, pos

    term, end = side(0)
    if end != len(tokens):
        raise ValueError(f"trailing input in term {text!r}")
    return term


_STEP_RE = re.compile(
    r"step (\d+): rewrite at (\S+) with eq (\d+) under \{(.*)\}: (.*) ==> (.*)$"
)

_NAME_RE = re.compile(r"^(?:[xyzwuv]|v\d+)$")


def parse_proof(text: str) -> Proof:
    steps = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        m = _STEP_RE.match(line.strip())
        if m is None:
            raise ValueError(f"bad proof line {lineno}")
        _, pos_text, eq_id, subst_text, before, after = m.groups()
        subst = []
        if subst_text:
            for item in subst_text.split(","):
                name, _, value = item.partition("=")
                if not _NAME_RE.match(name):
                    raise ValueError(f"bad substitution entry {item!r} on line {lineno}")
                if len(name) == 1:
                    index = "xyzwuv".index(name)
                else:
                    index = int(name[1:])
                subst.append((index, _parse_term(value)))
        steps.append(
            Step(
                pos=_parse_pos(pos_text),
                subst=tuple(subst),
                before=_parse_term(before),
                after=_parse_term(after),
                eq_id=int(eq_id),
            )
        )
    return Proof(tuple(steps))
