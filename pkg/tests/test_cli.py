import json
import subprocess
import sys

import pytest

from clintempeval.cli import main
from clintempeval.corpus_io import dumps_corpus, read_corpus, write_corpus
from clintempeval.model import ContainerRelation, Corpus


@pytest.fixture
def gold_path(tmp_path, small_synthetic):
    path = tmp_path / "gold.txt"
    write_corpus(small_synthetic, path)
    return path


def run(*args):
    return main([str(a) for a in args])


def test_score_identity_tsv(gold_path, capsysbinary):
    assert run("score", "--scenario", 1, "--gold", gold_path, "--system", gold_path) == 0
    out = capsysbinary.readouterr().out.decode().splitlines()
    assert out[0].startswith("subtask\tmetric")
    assert len(out) == 14
    assert all(line.endswith("1.000000\t1.000000\t1.000000") for line in out[1:])


def test_score_json_and_plot(gold_path, tmp_path):
    out, fig = tmp_path / "r.json", tmp_path / "r.png"
    assert run("score", "--scenario", 2, "--gold", gold_path, "--system", gold_path,
               "--format", "json", "--out", out, "--plot", fig) == 0
    payload = json.loads(out.read_text())
    assert payload["metadata"]["scenario"] == 2
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_plot_bytes_are_stable(gold_path, tmp_path):
    for name in ("a.svg", "b.svg"):
        run("score", "--scenario", 3, "--gold", gold_path, "--system", gold_path,
            "--out", tmp_path / "r.tsv", "--plot", tmp_path / name)
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_usage_errors(gold_path, capsys):
    assert run("score", "--scenario", 3, "--gold", gold_path, "--system", gold_path,
               "--subtasks", "TS") == 1
    assert "does not evaluate" in capsys.readouterr().err
    assert run("score", "--scenario", 7, "--gold", gold_path, "--system", gold_path) == 1
    assert run("bogus") == 1
    assert run("split", "--in", gold_path, "--seed", 1, "--fractions", "1,2", "--out-prefix", "x") == 1
    assert run("generate", "--patients", 3, "--seed", 1, "--density", 2, "--out", "x") == 1
    assert run("baseline", "--train", gold_path, "--input", gold_path, "--out", "x",
               "--components", "magic") == 1


def test_data_errors(gold_path, tmp_path, small_synthetic, capsys):
    missing = tmp_path / "missing"
    assert run("score", "--scenario", 1, "--gold", missing, "--system", gold_path) == 2
    truncated = tmp_path / "trunc"
    truncated.write_bytes(gold_path.read_bytes()[:-50])
    assert run("validate", "--in", truncated) == 2
    # spans differ from gold, not allowed when spans are given
    empty = tmp_path / "empty"
    write_corpus(Corpus(tuple(d.replace(events=(), relations=()) for d in small_synthetic)), empty)
    assert run("score", "--scenario", 2, "--gold", gold_path, "--system", empty) == 2
    assert "aligned" in capsys.readouterr().err


def test_cyclic_gold_is_a_data_error(tmp_path, small_synthetic):
    doc = next(d for d in small_synthetic if d.relations)
    r = doc.relations[0]
    cyclic = doc.replace(relations=doc.relations + (ContainerRelation(r.target, r.source),))
    path = tmp_path / "cyclic"
    write_corpus(Corpus((cyclic,)), path)
    assert run("score", "--scenario", 1, "--gold", path, "--system", path, "--closure", "off",
               "--out", tmp_path / "r") == 0
    assert run("score", "--scenario", 1, "--gold", path, "--system", path, "--out", tmp_path / "r") == 2
    assert run("closure", "--in", path, "--out", tmp_path / "c") == 2
    assert run("closure", "--in", path, "--out", tmp_path / "c", "--repair") == 0


def test_validate(gold_path, tmp_path, capsys):
    assert run("validate", "--in", gold_path) == 0
    bad = tmp_path / "bad"
    data = gold_path.read_bytes()
    first_rel = data.index(b"\nR ") + 1
    line_end = data.index(b"\n", first_rel)
    bad.write_bytes(data[:first_rel] + b"R t0 CONTAINS nowhere" + data[line_end:])
    assert run("validate", "--in", bad) == 2
    assert "nowhere" in capsys.readouterr().out


def test_closure_subcommand(gold_path, tmp_path, small_synthetic):
    out = tmp_path / "closed"
    assert run("closure", "--in", gold_path, "--out", out) == 0
    closed = read_corpus(out)
    for before, after in zip(small_synthetic, closed):
        assert set(before.relations) <= set(after.relations)
        assert before.events == after.events


def test_split_subcommand(tmp_path):
    src = tmp_path / "all"
    assert run("generate", "--patients", 8, "--seed", 3, "--out", src) == 0
    assert run("split", "--in", src, "--seed", 99, "--out-prefix", tmp_path / "fold") == 0
    folds = [read_corpus(tmp_path / f"fold.{n}") for n in ("train", "dev", "test")]
    assert [len(f.patient_ids) for f in folds] == [4, 2, 2]
    assert run("split", "--in", src, "--seed", 99, "--fractions", "0.5,0.25,0.25",
               "--out-prefix", tmp_path / "again") == 0
    assert (tmp_path / "again.test").read_bytes() == (tmp_path / "fold.test").read_bytes()


def test_generate_is_deterministic(tmp_path):
    for name in ("a", "b"):
        run("generate", "--patients", 3, "--seed", 12345678901234567890, "--unambiguous",
            "--out", tmp_path / name)
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
    assert run("generate", "--patients", 3, "--seed", 2**64, "--out", tmp_path / "c") == 1


def test_baseline_then_score(tmp_path):
    data = tmp_path / "data"
    run("generate", "--patients", 6, "--seed", 8, "--unambiguous", "--out", data)
    out, lex = tmp_path / "sys", tmp_path / "lex.tsv"
    assert run("baseline", "--train", data, "--input", data, "--out", out, "--lexicon", lex) == 0
    assert lex.read_text().count("\t") > 0
    report = tmp_path / "report.tsv"
    assert run("score", "--scenario", 1, "--gold", data, "--system", out, "--out", report) == 0
    rows = {tuple(l.split("\t")[:2]): l.split("\t") for l in report.read_text().splitlines()[1:]}
    for key in [("TS", "span-F1"), ("ES", "span-F1"), ("TA", "overall-F1"), ("EA", "overall-F1")]:
        assert rows[key][-1] == "1.000000"


def test_report_bytes_are_a_function_of_inputs(tmp_path, small_synthetic):
    # the same corpus written with its documents in reverse order
    g1, g2 = tmp_path / "g1", tmp_path / "g2"
    write_corpus(small_synthetic, g1)
    g2.write_bytes(b"".join(
        dumps_corpus(Corpus((d,))) for d in reversed(small_synthetic.documents)
    ))
    assert g1.read_bytes() != g2.read_bytes()
    outs = []
    for gold in (g1, g2, g1):
        out = tmp_path / f"r{len(outs)}"
        run("score", "--scenario", 1, "--gold", gold, "--system", gold, "--format", "json", "--out", out)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_module_entry_point(gold_path):
    proc = subprocess.run([sys.executable, "-m", "clintempeval", "validate", "--in", str(gold_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "ok" in proc.stderr
