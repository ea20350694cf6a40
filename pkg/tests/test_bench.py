import math

from greente.bench import (
    CSV_HEADER,
    ExperimentConfig,
    RepetitaInstance,
    emit_report,
    make_row,
    parse_report_json,
    run_experiment,
)
from greente.model import SIMPLEX
from greente.repetita import parse_repetita_demands, parse_repetita_graph

RING_GRAPH = """\
NODES 4
label x y
n0 0 0
n1 1 0
n2 1 1
n3 0 1

EDGES 8
label src dest weight bw delay
e0 0 1 1 10 0
e1 1 0 1 10 0
e2 1 2 1 10 0
e3 2 1 1 10 0
e4 2 3 1 10 0
e5 3 2 1 10 0
e6 3 0 1 10 0
e7 0 3 1 10 0
"""

def ring_instance(n_matrices=2):
    g = parse_repetita_graph(RING_GRAPH)
    matrices = []
    for k in range(n_matrices):
        text = f"DEMANDS 2\nlabel src dest bw\nd0 0 2 {4 + k}\nd1 1 3 {2 + k}\n"
        matrices.append(parse_repetita_demands(text, num_nodes=4))
    return RepetitaInstance("ring", g, tuple(matrices))


def test_single_cell_single_algorithm():
    config = ExperimentConfig(
        algorithms=("f-mspnd",), rhos=(0.5,), mus=(1,), modes=(SIMPLEX,), time_limit=60
    )
    rows = run_experiment(config, [ring_instance(1)])
    assert len(rows) == 1
    row = rows[0]
    assert row.status == "optimal"
    assert row.algorithm == "f-mspnd"
    assert len(row.mlu) == 1
    assert row.mlu[0] <= 1.0
    assert row.active_connections is not None
    assert row.deactivated_fraction is not None


def test_traffic_aware_rows_per_matrix_and_mlu_across_all():
    config = ExperimentConfig(
        algorithms=("f-mspnd", "mcf"), rhos=(0.5,), mus=(1,), modes=(SIMPLEX,),
        time_limit=60,
    )
    rows = run_experiment(config, [ring_instance(2)])
    aware = [r for r in rows if r.algorithm == "f-mspnd"]
    oblivious = [r for r in rows if r.algorithm == "mcf"]
    assert [r.matrix for r in aware] == ["0", "1"]
    assert [r.matrix for r in oblivious] == ["-"]
    for r in rows:
        assert len(r.mlu) == 2  # evaluated against every matrix of the instance


def test_forced_timeout_reports_status_and_bound():
    config = ExperimentConfig(
        algorithms=("mspnd",), rhos=(0.5,), mus=(1,), modes=(SIMPLEX,),
        time_limit=0.001,
    )
    rows = run_experiment(config, [ring_instance(1)])
    assert rows[0].status == "timeout"
    assert rows[0].bound is not None


def test_oblivious_rows_ignore_matrix_content():
    config = ExperimentConfig(
        algorithms=("mcf",), rhos=(0.5,), mus=(1,), modes=(SIMPLEX,), time_limit=60
    )
    inst = ring_instance(2)
    swapped = RepetitaInstance("ring", inst.precursor, tuple(reversed(inst.matrices)))
    a = run_experiment(config, [inst])[0]
    b = run_experiment(config, [swapped])[0]
    assert a.active_connections == b.active_connections
    assert sorted(a.mlu) == sorted(b.mlu)


def test_error_rows_do_not_abort_the_batch():
    # a demand against the arc direction cannot be routed at all
    from fractions import Fraction
    from greente.repetita import GraphPrecursor

    line = GraphPrecursor(("a", "b"), (("e0", 0, 1, 1, Fraction(1)),))
    broken = RepetitaInstance(
        "broken",
        line,
        (parse_repetita_demands("DEMANDS 1\nheader\nd0 1 0 2\n", num_nodes=2),),
    )
    config = ExperimentConfig(
        algorithms=("f-mspnd", "mcf"), rhos=(0.5,), mus=(1,), modes=(SIMPLEX,),
        time_limit=60,
    )
    rows = run_experiment(config, [broken, ring_instance(1)])
    broken_rows = [r for r in rows if r.instance == "broken"]
    good_rows = [r for r in rows if r.instance == "ring"]
    assert broken_rows and all(r.status.startswith("error:") for r in broken_rows)
    assert good_rows and all(not r.status.startswith("error:") for r in good_rows)


def test_rows_sorted_deterministically():
    config = ExperimentConfig(
        algorithms=("mcf", "f-mspnd"), rhos=(0.5, 0.3), mus=(1,), modes=(SIMPLEX,),
        time_limit=60,
    )
    rows = run_experiment(config, [ring_instance(1)])
    keys = [r.sort_key() for r in rows]
    assert keys == sorted(keys)


def test_csv_report_is_deterministic_modulo_runtime():
    config = ExperimentConfig(
        algorithms=("f-mspnd", "mcf"), rhos=(0.5,), mus=(1,), modes=(SIMPLEX,),
        time_limit=60,
    )
    a = emit_report(run_experiment(config, [ring_instance(2)]), "csv")
    b = emit_report(run_experiment(config, [ring_instance(2)]), "csv")
    lines_a, lines_b = a.splitlines(), b.splitlines()
    assert len(lines_a) == len(lines_b)
    for la, lb in zip(lines_a, lines_b):
        ca, cb = la.split(","), lb.split(",")
        ca[9] = cb[9] = "T"  # mask the runtime column
        assert ca == cb


def test_csv_header_and_empty_report():
    assert emit_report([], "csv") == CSV_HEADER + "\n"


def test_infinite_utilization_renders_inf():
    row = make_row(
        "i", "0", "f-mspnd", 0.5, 1, SIMPLEX, "optimal",
        mlus=[math.inf, 0.25],
    )
    text = emit_report([row], "csv")
    assert "inf;0.250000" in text


def test_json_report_round_trips():
    config = ExperimentConfig(
        algorithms=("f-mspnd", "mcf"), rhos=(0.5,), mus=(1,), modes=(SIMPLEX,),
        time_limit=60,
    )
    rows = run_experiment(config, [ring_instance(1)])
    rows.append(
        make_row("i", "0", "mcf", 0.3, 1, SIMPLEX, "optimal", mlus=[math.inf])
    )
    text = emit_report(rows, "json")
    assert parse_report_json(text) == rows
