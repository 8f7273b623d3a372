import json

import pytest

from strongedge import Graph, InputError, make_params, strong_color
from strongedge.cli import parse_seeds, run
from strongedge.genlab import CASE1_RICH, gen_class_instance, gen_named
from strongedge.io import format_coloring, format_edge_list, parse_coloring, parse_edge_list
from strongedge.trace import read_trace, write_trace


def put(tmp_path, name: str, text: str) -> str:
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def report(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestFormats:
    def test_named_tokens(self):
        g, names = parse_edge_list("# tri\na b\nb c\nc a\n")
        assert g.number_of_edges() == 3 and names.name(0) == "a"

    def test_isolated_header_round_trip(self):
        g = Graph([(0, 3)], range(6))
        text = format_edge_list(g)
        assert text.splitlines()[0] == "v 6"
        assert parse_edge_list(text)[0] == g

    @pytest.mark.parametrize("bad", ["0 0\n", "0 1 2 3\n", "0\n", "v x\n", "0 1\n1 0\n"])
    def test_rejected(self, bad):
        with pytest.raises(InputError):
            parse_edge_list(bad)

    def test_coloring_round_trip(self):
        g, names = parse_edge_list("x y\ny z\n")
        c = parse_coloring("x y 1\nz y 2\n", g, names)
        assert parse_coloring(format_coloring(c, names), g, names) == c

    def test_coloring_on_missing_edge(self):
        g, names = parse_edge_list("0 1\n1 2\n")
        with pytest.raises(InputError):
            parse_coloring("0 2 1\n", g, names)

    def test_seed_ranges(self):
        assert parse_seeds("3..5") == [3, 4, 5] and parse_seeds("1,7") == [1, 7]


class TestCommands:
    def test_exact_c5(self, tmp_path, capsys):
        f = put(tmp_path, "c5.el", format_edge_list(gen_named("cycle", 5)))
        assert run(["exact", "-i", f]) == 0
        assert capsys.readouterr().out.strip() == "5"

    def test_exact_over_limit(self, tmp_path):
        f = put(tmp_path, "p.el", format_edge_list(gen_named("path", 30)))
        assert run(["exact", "-i", f, "--max-edges", "16"]) == 1

    def test_color_k23(self, tmp_path, capsys):
        f = put(tmp_path, "k23.el", format_edge_list(gen_named("k2n", 3)))
        assert run(["color", "-i", f, "--D", "4", "--eps", "0.5"]) == 0
        rep = report(capsys)
        assert rep["colorsUsed"] <= 21 and rep["budgetMet"] and rep["valid"]
        assert list(rep) == ["n", "m", "delta", "degeneracy", "capacity", "D", "eps", "K",
                             "colorsUsed", "budgetMet", "valid", "runtimeMs"]

    def test_verify_p4_violation(self, tmp_path, capsys):
        f = put(tmp_path, "p4.el", "0 1\n1 2\n2 3\n")
        c = put(tmp_path, "c.txt", "0 1 1\n1 2 2\n2 3 1\n")
        assert run(["verify", "-i", f, "-c", c]) == 2
        assert capsys.readouterr().out.startswith("violation")

    def test_verify_ok_and_incomplete(self, tmp_path):
        f = put(tmp_path, "p4.el", "0 1\n1 2\n2 3\n")
        assert run(["verify", "-i", f, "-c", put(tmp_path, "a", "0 1 1\n1 2 2\n2 3 3\n")]) == 0
        assert run(["verify", "-i", f, "-c", put(tmp_path, "b", "0 1 1\n")]) == 2

    def test_gen_color_round_trip(self, tmp_path, capsys):
        g_path = str(tmp_path / "g.el")
        assert run(["gen", "--model", "classinstance", "--seed", "5", "--D", "16",
                    "--eps", "1/4", "--regime", "Case1Rich", "-o", g_path]) == 0
        g = gen_class_instance(make_params(16, "1/4"), CASE1_RICH, 5)
        capsys.readouterr()
        run(["color", "-i", g_path, "--D", "16", "--eps", "1/4"])
        rep = report(capsys)
        assert (rep["n"], rep["m"], rep["delta"]) == (
            g.number_of_vertices(), g.number_of_edges(), g.max_degree())

    def test_gen_random(self, tmp_path, capsys):
        assert run(["gen", "--model", "random2deg", "--n", "12", "--m", "15", "--seed", "4"]) == 0
        g, _ = parse_edge_list(capsys.readouterr().out)
        assert g.number_of_edges() == 15

    def test_trace_then_replay(self, tmp_path, capsys):
        g = gen_class_instance(make_params(9, "1/2"), "Case2Rich", 2)
        f = put(tmp_path, "g.el", format_edge_list(g))
        t = str(tmp_path / "t.jsonl")
        c = str(tmp_path / "c.txt")
        code = run(["color", "-i", f, "--D", "9", "--eps", "1/2", "--trace", t, "-c", c])
        rep = report(capsys)
        assert code in (0, 3) and rep["tracePath"] == t
        assert run(["replay", "-i", f, "--trace", t]) == 0
        assert run(["verify", "-i", f, "-c", c]) == 0

    def test_replay_on_wrong_graph(self, tmp_path):
        g = gen_class_instance(make_params(9, "1/2"), "Case2Rich", 2)
        t = str(tmp_path / "t.jsonl")
        run(["color", "-i", put(tmp_path, "g.el", format_edge_list(g)), "--D", "9", "--eps", "1/2",
             "--trace", t, "--report", str(tmp_path / "r.json")])
        g.add_edge(0, g.new_vertex())
        assert run(["replay", "-i", put(tmp_path, "h.el", format_edge_list(g)), "--trace", t]) == 2

    def test_bench_small(self, tmp_path, capsys):
        code = run(["bench", "--corpus", str(tmp_path / "corpus"), "--D-list", "4,9",
                    "--eps", "0.5", "--seeds", "1..3", "--workers", "1"])
        out = report(capsys)
        assert out["instances"] == 6 and out["valid"] == 6 == out["budgetMet"]
        assert code == (3 if out["certificates"] else 0)
        assert len(list((tmp_path / "corpus").iterdir())) == 6

    @pytest.mark.parametrize("argv", [
        ["color", "-i", "/nonexistent.el", "--D", "4", "--eps", "0.5"],
        ["color", "--D", "4"],
        ["gen", "--model", "nonsense"],
    ])
    def test_usage_errors(self, argv):
        assert run(argv) == 1

    def test_below_threshold_params(self, tmp_path):
        f = put(tmp_path, "k23.el", format_edge_list(gen_named("k2n", 3)))
        assert run(["color", "-i", f, "--D", "3", "--eps", "0.5"]) == 1

    def test_out_of_class(self, tmp_path):
        f = put(tmp_path, "s.el", format_edge_list(gen_named("star", 8)))
        assert run(["color", "-i", f, "--D", "4", "--eps", "0.5"]) == 1


class TestTraceFile:
    def test_round_trip(self, tmp_path):
        p = make_params(16, "1/4")
        g = gen_class_instance(p, CASE1_RICH, 8)
        r = strong_color(g, p)
        path = tmp_path / "t.jsonl"
        write_trace(r, g.number_of_vertices(), g.number_of_edges(), path)
        head, back = read_trace(path)
        assert head["K"] == p.K and head["colorsUsed"] == r.colors_used
        assert back.trace == r.trace

    def test_malformed(self, tmp_path):
        path = tmp_path / "t.jsonl"
        path.write_text('{"type": "step"}\n')
        with pytest.raises(ValueError):
            read_trace(path)
