"""End-to-end acceptance gate, one test per shipped guarantee.

Each test prints one PASS line on success (visible with -s); a failing
assertion is the corresponding FAIL.  The desk corpus of twenty laws stands in
for the full 4694-law campaign: everything checkable at this scale is checked
against independent brute-force oracles, and the full-scale headline figures
are explicitly declared out of scope rather than imitated.
"""

import dataclasses
import random
import time

import pytest

from conftest import oracle_holds, oracle_tables, random_term
from eqimp.budget import UNLIMITED
from eqimp.cli import main as cli_main
from eqimp.closure import PROVEN, REFUTED, StatusEntry, propagate
from eqimp.models import (
    EXHAUSTED,
    FOUND,
    eval_term,
    find_countermodel,
    parse_countermodel,
    verify_equation,
)
from eqimp.report import FORMAT_CSV, histogram, render, summarize
from eqimp.runner import RunConfig, UNSOLVED, attempt_pair, default_schedule, run
from eqimp.saturation import Cmp, apply_subst, kbo_compare, parse_proof, replay_proof
from eqimp.terms import Const, Op, enumerate_pairs, load_corpus, pair_count, variables
from eqimp.tptp import export_pair, skolemize

import pathlib

DESK = str(pathlib.Path(__file__).parent / "data" / "desk.eqs")

GOLDEN_PROBLEM = (
    "cnf(lhs, axiom, m(X, Y) = m(Y, X)).\n"
    "cnf(rhs, negated_conjecture, m(a, m(b, c)) != m(m(a, b), c)).\n"
)

# desk-corpus ids used below
COMM = 3  # x*y = y*x
ASSOC = 4  # (x*y)*z = x*(y*z)
ASSOC_FLIPPED = 5  # x*(y*z) = (x*y)*z
ALL_PRODUCTS_EQUAL = 6  # x*y = u*w


def _report(num: int, message: str) -> None:
    print(f"PASS {num:2d}/10: {message}")


@pytest.fixture(scope="module")
def desk_corpus():
    return load_corpus(DESK)


@pytest.fixture(scope="module")
def desk_run(desk_corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("desk") / "results.jsonl"
    started = time.perf_counter()
    records = run(desk_corpus, default_schedule(), RunConfig(str(out), workers=1))
    elapsed = time.perf_counter() - started
    return records, str(out), elapsed


@pytest.fixture(scope="module")
def sat_tables(desk_corpus):
    # per law: which multiplication tables of size 1..3 satisfy it, by plain
    # unbroken enumeration (19700 tables, no symmetry breaking)
    all_rows = []
    for n in (1, 2, 3):
        all_rows.extend(oracle_tables(n))
    return {
        eq.id: {k for k, rows in enumerate(all_rows) if oracle_holds(rows, eq)}
        for eq in desk_corpus.equations
    }


def test_01_pair_counting_at_campaign_scale(tmp_path, capsys):
    path = tmp_path / "big.eqs"
    path.write_text("x*y = y*x\n" * 4694)  # ids are ordinal, duplicates allowed
    started = time.perf_counter()
    assert cli_main(["pairs", "--eqs", str(path)]) == 0
    elapsed = time.perf_counter() - started
    out = capsys.readouterr().out
    assert "equations: 4694" in out
    assert "pairs: 22028942" in out
    assert elapsed < 1.0
    assert pair_count(4694) == 22_028_942
    _report(1, f"4694 laws -> 22028942 ordered pairs in {elapsed:.3f}s")


def test_02_problem_export_is_byte_identical(desk_corpus, tmp_path, capsys):
    text = export_pair(desk_corpus.by_id(COMM), desk_corpus.by_id(ASSOC_FLIPPED))
    assert text == GOLDEN_PROBLEM
    out_dir = tmp_path / "problems"
    code = cli_main(
        ["export-tptp", "--eqs", DESK, "--out", str(out_dir), "--pair", f"{COMM},{ASSOC_FLIPPED}"]
    )
    assert code == 0
    capsys.readouterr()
    assert (out_dir / f"p{COMM}_{ASSOC_FLIPPED}.p").read_bytes() == GOLDEN_PROBLEM.encode()
    _report(2, "commutativity->associativity CNF export matches the frozen golden bytes")


def test_03_flagship_triple(desk_corpus):
    schedule = default_schedule()
    started = time.perf_counter()
    assoc_to_comm = attempt_pair(desk_corpus, ASSOC, COMM, schedule)
    comm_to_assoc = attempt_pair(desk_corpus, COMM, ASSOC, schedule)
    squash_to_comm = attempt_pair(desk_corpus, ALL_PRODUCTS_EQUAL, COMM, schedule)
    elapsed = time.perf_counter() - started

    for record in (assoc_to_comm, comm_to_assoc):
        assert record.status == REFUTED
        cm = parse_countermodel(record.witness)
        assert cm.table.size == 2
        premise = desk_corpus.by_id(record.lhs)
        conclusion = desk_corpus.by_id(record.rhs)
        # exhaustive re-verification: premise everywhere, conclusion broken
        assert verify_equation(cm.table, premise) is None
        left = eval_term(conclusion.lhs, cm.table, cm.assignment)
        right = eval_term(conclusion.rhs, cm.table, cm.assignment)
        assert left != right

    assert squash_to_comm.status == PROVEN
    assert squash_to_comm.method == "satur-500i"  # first saturation pass settles it
    proof = parse_proof(squash_to_comm.witness)
    goal = skolemize(desk_corpus.by_id(COMM))
    assert replay_proof(proof, desk_corpus.by_id(ALL_PRODUCTS_EQUAL), goal).accepted

    assert elapsed < 5.0
    _report(3, f"two size-2 countermodels re-verified and one proof replayed in {elapsed:.2f}s")


def test_04_transitivity_derives_the_missing_refutation():
    statuses = {
        (1120, 511): StatusEntry(PROVEN, "satur-500i"),
        (1120, 3079): StatusEntry(REFUTED, "fmb-500i"),
    }
    closed = propagate(statuses)
    entry = closed[(511, 3079)]
    assert entry.status == REFUTED
    assert entry.provenance == "closure:R2"
    assert entry.premises == ((1120, 511), (1120, 3079))
    _report(4, "1120->511 proven with 1120-/->3079 refuted yields 511-/->3079 refuted")


def test_05_desk_scale_oracle_agreement(desk_corpus, desk_run, sat_tables):
    records, _, elapsed = desk_run
    assert len(records) == 380
    assert all(record.status != UNSOLVED for record in records)
    assert elapsed < 60.0
    for record in records:
        premise_tables = sat_tables[record.lhs]
        conclusion_tables = sat_tables[record.rhs]
        pair = (record.lhs, record.rhs)
        if record.status == PROVEN:
            # must hold in every magma of size <= 3 that satisfies the premise
            assert premise_tables <= conclusion_tables, f"{pair}: oracle found a countermodel"
        elif record.witness == "saturation" or (record.method or "").startswith("closure:"):
            # witness-free refutation: a small countermodel must exist
            assert premise_tables - conclusion_tables, f"{pair}: refuted without any backing"
        else:
            cm = parse_countermodel(record.witness)
            premise = desk_corpus.by_id(record.lhs)
            conclusion = desk_corpus.by_id(record.rhs)
            assert verify_equation(cm.table, premise) is None, f"{pair}: premise fails"
            left = eval_term(conclusion.lhs, cm.table, cm.assignment)
            right = eval_term(conclusion.rhs, cm.table, cm.assignment)
            assert left != right, f"{pair}: conclusion not violated"
    _report(5, f"all 380 pairs decided in {elapsed:.1f}s; 100% witness/oracle agreement")


def test_06_search_matches_unbroken_enumeration(desk_corpus, sat_tables):
    checked = 0
    for lhs, rhs in enumerate_pairs(desk_corpus):
        outcome = find_countermodel(
            desk_corpus.by_id(lhs), desk_corpus.by_id(rhs), max_size=3, budget=UNLIMITED
        )
        assert outcome.status in (FOUND, EXHAUSTED)
        expected = bool(sat_tables[lhs] - sat_tables[rhs])
        assert (outcome.status == FOUND) == expected, f"pair {(lhs, rhs)}"
        checked += 1
    assert checked == 380
    _report(6, "Found/Exhausted verdicts match plain enumeration on all 380 pairs")


def test_07_determinism_and_parallel_soundness(desk_corpus, desk_run, tmp_path_factory):
    records, _, _ = desk_run
    base = tmp_path_factory.mktemp("determinism")
    rerun = run(desk_corpus, default_schedule(), RunConfig(str(base / "b.jsonl"), workers=1))
    parallel = run(desk_corpus, default_schedule(), RunConfig(str(base / "c.jsonl"), workers=8))

    def canonical(rs):
        return sorted(
            (dataclasses.replace(r, seconds=0.0) for r in rs), key=lambda r: (r.lhs, r.rhs)
        )

    assert canonical(records) == canonical(rerun) == canonical(parallel)
    _report(7, "repeat run and workers=1 vs workers=8 agree record-for-record")


def test_08_reporting_conserves_counts(desk_run):
    records, _, _ = desk_run
    decided = [record for record in records if record.status != UNSOLVED]
    stage_names = [stage.name for stage in default_schedule().stages]
    table = summarize(records, method_order=stage_names)
    assert table.footer.total == len(decided)
    assert table.footer.refuted + table.footer.proven == table.footer.total
    for row in table.rows:
        assert row.total == row.refuted + row.proven
    hist = histogram(records)
    assert sum(hist.totals) == len(decided)
    text = render(table, FORMAT_CSV)
    assert text.splitlines()[0] == "Method,Refuted,Proven,Total"
    _report(8, f"summary and histogram both account for exactly {len(decided)} decided records")


def test_09_full_scale_figures_declared_out_of_scope(desk_run):
    # The full campaign decides 22,027,880 of the 22,028,942 pairs, with
    # 13,837,151 refutations attributed to fmb-500i, 22 extra pairs decided by
    # transitive closure, and 310 implications that need an infinite
    # countermodel.  Those figures require the 4694-law corpus and hundreds of
    # CPU-days; they are NOT reproduced at desk scale.  The desk suite
    # substitutes exhaustive-oracle agreement (tests 04, 05 and 06 above) for
    # them.
    records, _, _ = desk_run
    full_scale_decided = 22_027_880
    assert full_scale_decided < pair_count(4694) == 22_028_942
    assert len(records) == 380
    assert len(records) != full_scale_decided  # deliberately not imitated
    _report(
        9,
        "full-scale figures (13,837,151 fmb refutations; 22,027,880 decided; "
        "22 closure extras; 310 infinite-model implications) stated as out of "
        "scope; oracle checks substitute",
    )


def test_10_ordering_property_suite():
    # every ground term over two constants of depth <= 3
    terms = [Const(0), Const(1)]
    for _ in range(3):
        terms = [Const(0), Const(1)] + [Op(a, b) for a in terms for b in terms]
    assert len(terms) == 1446

    for term in terms:
        assert kbo_compare(term, term) == Cmp.EQ  # irreflexivity of the strict order

    non_strict = 0
    for i, s in enumerate(terms):
        for t in terms[i + 1 :]:
            if kbo_compare(s, t) not in (Cmp.GT, Cmp.LT):
                non_strict += 1
    assert non_strict == 0  # ground totality

    rng = random.Random(20260815)
    checked = 0
    violations = 0
    for _ in range(100_000):
        if checked >= 10_000:
            break
        s = random_term(rng, 3, 3, 2)
        t = random_term(rng, 3, 3, 2)
        direction = kbo_compare(s, t)
        if direction == Cmp.LT:
            s, t = t, s
        elif direction != Cmp.GT:
            continue
        sub = {
            v: random_term(rng, 2, 2, 2) for v in set(variables(s)) | set(variables(t))
        }
        if kbo_compare(apply_subst(s, sub), apply_subst(t, sub)) != Cmp.GT:
            violations += 1  # stability under substitution broken
        filler = random_term(rng, 2, 3, 2)
        if rng.random() < 0.5:
            bigger, smaller = Op(s, filler), Op(t, filler)
        else:
            bigger, smaller = Op(filler, s), Op(filler, t)
        if kbo_compare(bigger, smaller) != Cmp.GT:
            violations += 1  # context compatibility broken
        checked += 1
    assert checked >= 10_000
    assert violations == 0
    _report(10, f"irreflexivity, ground totality over 1446 terms, {checked} stability/context samples, zero violations")
