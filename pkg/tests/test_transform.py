import pytest
from hypothesis import given, settings, strategies as st

from dccasp.cli import load_program
from dccasp.engine import run_query
from dccasp.output import render_clause, render_compiled
from dccasp.syntax import Clause, Lit, parse_program, parse_query
from dccasp.transform import (
    NMR_CHECK,
    build_dependency_graph,
    canonical,
    compile_program,
    detect_olon_denials,
    dualize,
    is_helper,
    parse_compiled,
    synthesize_dcc_rules,
    synthesize_nmr_check,
)
from oracle import embedding_counterexamples, ground_program, stable_models
from randprog import WITH_ARGS, random_program

from conftest import PROGRAMS


def texts(clauses):
    return [render_clause(c) for c in clauses]


def dcc_texts(rules):
    from dccasp.output import Namer, TermWriter

    out = []
    for r in rules:
        w = TermWriter(Namer(), annotate=False)
        out.append(f"dcc({w.goal(r.trigger)}, [{', '.join(w.goal(g) for g in r.residual)}])")
    return out


def hamiltonian():
    return load_program([PROGRAMS / "hamiltonian.pl", PROGRAMS / "graph_4.pl"])


# ------------------------------------------------------------ dualize


def test_prefix_goals_kept_in_denial_negation():
    prog = parse_program(":- p(X), q(X, Y).")
    nmr = texts(synthesize_nmr_check(prog.denials))
    assert "'$chk1' :- forall(A, forall(B, not '$chk1_1'(A, B)))." in nmr
    assert "not '$chk1_1'(A, B) :- not p(A)." in nmr
    assert "not '$chk1_1'(A, B) :- p(A), not q(A, B)." in nmr


def test_predicate_without_clauses_gets_negation_fact():
    prog = parse_program("p(X) :- r(X).")
    duals = texts(dualize(prog))
    assert "not r(A)." in duals


def test_fact_dual_is_a_disequality():
    prog = parse_program("d(1).\np(X) :- not d(X).")
    duals = texts(dualize(prog))
    assert "not d(A) :- not '$d/1_1'(A)." in duals
    assert "not '$d/1_1'(A) :- A \\= 1." in duals
    (answer,), _ = run_query(compile_program(prog), parse_query("p(X)"))
    from dccasp.output import render_bindings

    assert render_bindings(answer) == "X \\= 1"


def test_body_only_variables_are_quantified():
    prog = parse_program("p(X) :- q(X, Y), not r(Y).")
    duals = texts(dualize(prog))
    assert "not '$p/1_1'(A) :- forall(B, not '$p/1_1_body'(A, B))." in duals
    assert "not '$p/1_1_body'(A, B) :- not q(A, B)." in duals
    assert "not '$p/1_1_body'(A, B) :- q(A, B), r(B)." in duals


def test_top_dual_conjoins_every_clause():
    prog = parse_program("p :- q.\np :- not r.")
    duals = texts(dualize(prog))
    assert "not p :- not '$p/0_1', not '$p/0_2'." in duals
    assert "not '$p/0_2' :- r." in duals


def test_repeated_head_variable_normalized():
    prog = parse_program("same(X, X).")
    duals = texts(dualize(prog))
    assert "not '$same/2_1'(A, B) :- B \\= A." in duals


def test_constraint_negation_in_dual():
    prog = parse_program("q(X, a) :- X #> 5.")
    duals = texts(dualize(prog))
    assert "not '$q/2_1'(A, B) :- B \\= a." in duals
    assert "not '$q/2_1'(A, B) :- B = a, A #=< 5." in duals


def test_every_called_predicate_has_a_definition():
    prog = hamiltonian()
    cp = compile_program(prog)
    procs = cp.procedures()
    for clause in list(prog.clauses) + list(prog.denials):
        for g in clause.body:
            if type(g) is Lit:
                name = g.atom.name if hasattr(g.atom, "name") else g.atom
                arity = len(g.atom.args) if hasattr(g.atom, "args") else 0
                assert (False, name, arity) in procs


# ------------------------------------------------------------ dependency graph


def test_graph_edges_even_and_odd():
    g = build_dependency_graph(parse_program("p :- not q.\nq :- not p.\nr :- not r."))
    assert g.edges == {(("q", 0), ("p", 0), "neg"), (("p", 0), ("q", 0), "neg"), (("r", 0), ("r", 0), "neg")}


def test_graph_single_negative_cycle():
    g = build_dependency_graph(parse_program("p :- q.\nq :- not r.\nr :- p."))
    assert g.edges == {(("q", 0), ("p", 0), "pos"), (("r", 0), ("q", 0), "neg"), (("p", 0), ("r", 0), "pos")}


def test_graph_empty():
    g = build_dependency_graph(parse_program(""))
    assert not g.nodes and not g.edges


# ------------------------------------------------------------ OLON


def test_self_odd_loop_denial():
    prog = parse_program("r :- not r.")
    assert texts(detect_olon_denials(prog)) == [":- not r."]


def test_even_loop_has_no_denials():
    assert detect_olon_denials(parse_program("p :- not q.\nq :- not p.")) == []


def test_guarded_odd_loop():
    prog = parse_program("r :- q, not r.")
    assert texts(detect_olon_denials(prog)) == [":- q, not r."]


def test_three_step_odd_loop():
    prog = parse_program("p :- q.\nq :- not r.\nr :- p.")
    assert sorted(texts(detect_olon_denials(prog))) == [":- not r, not q.", ":- p, not r.", ":- q, not p."]


def test_olon_idempotent():
    prog = parse_program("p :- not q.\nq :- not p.\nr :- not r.\ns :- t, not s.")
    first = detect_olon_denials(prog)
    prog.denials.extend(first)
    again = detect_olon_denials(prog)
    assert {canonical(d) for d in again} <= {canonical(d) for d in first}


# ------------------------------------------------------------ nmr_check


def test_hamiltonian_reachability_check():
    nmr = texts(synthesize_nmr_check(hamiltonian().denials))
    assert "'$chk1' :- forall(A, not '$chk1_1'(A))." in nmr
    assert "not '$chk1_1'(A) :- not vertex(A)." in nmr
    assert "not '$chk1_1'(A) :- vertex(A), reachable(A)." in nmr
    assert "'$nmr_check' :- '$chk1', '$chk2', '$chk3'." in nmr


def test_no_denials_gives_fact():
    (clause,) = synthesize_nmr_check([])
    assert clause == Clause(Lit(True, NMR_CHECK), ())


def test_exactly_one_nmr_check_clause():
    cp = compile_program(hamiltonian())
    heads = [c for c in cp.nmr_clauses if c.head.atom == NMR_CHECK]
    assert len(heads) == 1


# ------------------------------------------------------------ DCC rules


def test_dcc_rules_pair():
    rules = dcc_texts(synthesize_dcc_rules(parse_program(":- p(X), q(X, Y).").denials))
    assert rules == ["dcc(p(A), [q(A, B)])", "dcc(q(A, B), [p(A)])"]


def test_dcc_rules_skip_constraints():
    rules = dcc_texts(synthesize_dcc_rules(parse_program(":- chosen(U, W), U \\= V, chosen(V, W).").denials))
    assert rules == ["dcc(chosen(A, B), [A \\= C, chosen(C, B)])", "dcc(chosen(A, B), [chosen(C, B), C \\= A])"]


def test_dcc_rules_negated_trigger():
    rules = dcc_texts(synthesize_dcc_rules(parse_program(":- vertex(U), not reachable(U).").denials))
    assert rules == ["dcc(vertex(A), [not reachable(A)])", "dcc(not reachable(A), [vertex(A)])"]


def test_dcc_rule_count_matches_user_literals():
    prog = hamiltonian()
    cp = compile_program(prog)
    expected = sum(sum(1 for g in d.body if type(g) is Lit) for d in cp.denials)
    assert len(cp.dcc_rules) == expected == 6


def test_dcc_residual_shares_variables():
    (rule, _) = synthesize_dcc_rules(parse_program(":- p(X), q(X, Y).").denials)
    assert rule.trigger.atom.args[0] is rule.residual[0].atom.args[0]


def test_olon_denials_get_dcc_rules():
    cp = compile_program(parse_program("r :- q, not r.\nq."))
    assert len(cp.dcc_rules) == 2
    assert not any(is_helper(r.trigger.atom if isinstance(r.trigger.atom, str) else r.trigger.atom.name) for r in cp.dcc_rules)


# ------------------------------------------------------------ --code dump


@pytest.mark.parametrize("files", [["hamiltonian.pl", "graph_4.pl"], ["n_queens.pl"], ["constraint_negation.pl"]])
def test_code_dump_reparses(files):
    cp = compile_program(load_program([PROGRAMS / f for f in files]))
    again = parse_compiled(render_compiled(cp))
    for attr in ("dual_clauses", "nmr_clauses", "denials"):
        assert [canonical(c) for c in getattr(cp, attr)] == [canonical(c) for c in getattr(again, attr)]
    assert [canonical(r) for r in cp.dcc_rules] == [canonical(r) for r in again.dcc_rules]
    assert {k: [canonical(c) for c in v] for k, v in cp.user_clauses.items()} == {
        k: [canonical(c) for c in v] for k, v in again.user_clauses.items()
    }
    assert render_compiled(again) == render_compiled(cp)


# ------------------------------------------------------------ oracle properties


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["a", "b", "c", "d", "e", "f"]))
def test_dual_soundness(seed, atom):
    prog = parse_program(random_program(seed, n_atoms=6, n_rules=9, n_denials=seed % 3))
    models = stable_models(ground_program(prog))
    answers, _ = run_query(compile_program(prog), parse_query(f"not {atom}"))
    assert bool(answers) == any(atom not in m for m in models)
    assert embedding_counterexamples(answers, models, [(False, atom)]) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(WITH_ARGS[:8]))
def test_head_normalization_preserves_answers(seed, query):
    prog = parse_program(random_program(seed, n_atoms=8, n_rules=10, n_denials=1, atoms=WITH_ARGS))
    models = stable_models(ground_program(prog))
    (goal,) = parse_query(query)
    answers, _ = run_query(compile_program(prog), [goal])
    from dccasp.terms import resolve

    assert embedding_counterexamples(answers, models, [(True, resolve(goal.atom))]) == []
