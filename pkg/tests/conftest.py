"""Shared generators and the brute-force magma oracle; everything is seeded."""

from __future__ import annotations

import itertools
import random

from eqimp.terms import Const, Equation, Op, Term, Var, canonicalize

# The oracle evaluates equations over plain row lists and enumerates tables
# without any symmetry breaking, so tests check the package against an
# independent implementation rather than against itself.


def oracle_eval(term, rows, env):
    if isinstance(term, Var):
        return env[term.index]
    return rows[oracle_eval(term.left, rows, env)][oracle_eval(term.right, rows, env)]


def oracle_width(eq):
    width = 0
    todo = [eq.lhs, eq.rhs]
    while todo:
        t = todo.pop()
        if isinstance(t, Var):
            width = max(width, t.index + 1)
        elif isinstance(t, Op):
            todo.extend((t.left, t.right))
    return width


def oracle_holds(rows, eq):
    n = len(rows)
    for env in itertools.product(range(n), repeat=oracle_width(eq)):
        if oracle_eval(eq.lhs, rows, env) != oracle_eval(eq.rhs, rows, env):
            return False
    return True


def oracle_tables(n):
    for entries in itertools.product(range(n), repeat=n * n):
        yield [list(entries[i * n : (i + 1) * n]) for i in range(n)]


def oracle_countermodel_exists(premise, conclusion, sizes):
    for n in sizes:
        for rows in oracle_tables(n):
            if oracle_holds(rows, premise) and not oracle_holds(rows, conclusion):
                return True
    return False


def random_term(rng: random.Random, max_depth: int, num_vars: int, num_consts: int = 0) -> Term:
    if max_depth <= 0 or rng.random() < 0.4:
        if num_consts > 0 and (num_vars == 0 or rng.random() < 0.5):
            return Const(rng.randrange(num_consts))
        return Var(rng.randrange(num_vars))
    return Op(
        random_term(rng, max_depth - 1, num_vars, num_consts),
        random_term(rng, max_depth - 1, num_vars, num_consts),
    )


def random_equation(rng: random.Random, max_depth: int = 3, num_vars: int = 4) -> Equation:
    return canonicalize(
        Equation(
            random_term(rng, max_depth, num_vars),
            random_term(rng, max_depth, num_vars),
        )
    )


def random_ground_term(rng: random.Random, max_depth: int, num_consts: int = 2) -> Term:
    if max_depth <= 0 or rng.random() < 0.4:
        return Const(rng.randrange(num_consts))
    return Op(
        random_ground_term(rng, max_depth - 1, num_consts),
        random_ground_term(rng, max_depth - 1, num_consts),
    )
