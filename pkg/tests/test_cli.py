import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from citegraph.cli import main

FIXTURE = Path(__file__).parent / "fixtures" / "wos_small.txt"


@pytest.fixture()
def workdir(tmp_path, monkeypatch, capsys):
    shutil.copy(FIXTURE, tmp_path / "wos.txt")
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *args: str) -> tuple[int, str]:
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


def test_ingest_summary_and_output(workdir, capsys):
    code, out = run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    assert code == 0
    assert out.startswith("10 records, 10 edges, 1 dropped")
    assert (workdir / "g.cng").exists()


def test_ingest_missing_file(workdir, capsys):
    code = main(["ingest", "--wos", "absent.txt", "--out", "g.cng"])
    assert code == 1


def test_unknown_flag_usage_error(workdir):
    with pytest.raises(SystemExit) as exc:
        main(["ingest", "--nope"])
    assert exc.value.code == 2


def test_stats_table(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    code, out = run(
        capsys, "stats", "--graph", "g.cng", "--blocks", "1998-2000,2001-2003,2004-2006"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Block\tLinks\tPublications"
    assert lines[1] == "1998-2000\t2\t3"
    assert lines[2] == "2001-2003\t2\t4"
    assert lines[3] == "2004-2006\t1\t3"


def test_cores_k0_reports_all(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    code, out = run(capsys, "cores", "--graph", "g.cng", "--k", "0")
    assert code == 0
    assert out.strip() == "10 of 10 publications in 0-core"


def test_cores_writes_subgraph(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    code, out = run(capsys, "cores", "--graph", "g.cng", "--k", "1", "--out", "core.cng")
    assert code == 0
    assert (workdir / "core.cng").exists()


def test_cluster_writes_sidecar(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    code, out = run(
        capsys,
        "cluster", "--graph", "g.cng", "--resolution", "1.0",
        "--min-size", "1", "--seed", "0", "--out", "clusters.json",
    )
    assert code == 0
    data = json.loads((workdir / "clusters.json").read_text())
    assert data["resolution"] == 1.0
    assert set(data["assignment"]) == {f"r{i:02d}" for i in range(1, 11)}


def test_drill_query_and_up(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    code, out = run(
        capsys,
        "drill", "--graph", "g.cng", "--query", "title:carbon*",
        "--session", "s.json", "--out", "sub.cng",
    )
    assert code == 0
    code, out = run(capsys, "drill", "--up", "--session", "s.json", "--out", "back.cng")
    assert code == 0
    assert "back to 10 publications" in out
    code = main(["drill", "--up", "--session", "s.json"])
    assert code == 1  # already at full network


def test_drill_title_only_vs_default(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    _, out_default = run(
        capsys, "drill", "--graph", "g.cng", "--query", "nanotri*", "--out", "d1.cng"
    )
    assert out_default.startswith("marked 2")
    _, out_title = run(
        capsys,
        "drill", "--graph", "g.cng", "--query", "nanotri*", "--title-only",
        "--out", "d2.cng",
    )
    assert out_title.startswith("marked 1")


def test_layout_and_svg(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    run(capsys, "cluster", "--graph", "g.cng", "--resolution", "1.0", "--min-size", "1",
        "--out", "clusters.json")
    code, out = run(
        capsys,
        "layout", "--graph", "g.cng", "--n", "40", "--clusters", "clusters.json",
        "--out", "layout.json", "--svg", "map.svg",
    )
    assert code == 0
    svg = (workdir / "map.svg").read_text()
    assert svg.startswith("<svg")
    assert "circle" in svg
    data = json.loads((workdir / "layout.json").read_text())
    assert len(data["nodes"]) == 10


def test_export_tsv_stdout(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    run(capsys, "layout", "--graph", "g.cng", "--out", "layout.json")
    code = main(["export", "--graph", "g.cng", "--layout", "layout.json", "--format", "tsv"])
    assert code == 0


def test_export_unknown_format(workdir, capsys):
    run(capsys, "ingest", "--wos", "wos.txt", "--out", "g.cng")
    run(capsys, "layout", "--graph", "g.cng", "--out", "layout.json")
    code = main(["export", "--graph", "g.cng", "--layout", "layout.json", "--format", "xlsx"])
    assert code == 1


def test_cli_byte_determinism(workdir):
    script = (
        "from citegraph.cli import main;"
        "main(['ingest','--wos','wos.txt','--out','G.cng']);"
        "main(['cluster','--graph','G.cng','--resolution','0.75','--min-size','2',"
        "'--seed','7','--out','C.json']);"
        "main(['layout','--graph','G.cng','--clusters','C.json','--out','L.json',"
        "'--svg','M.svg']);"
        "main(['export','--graph','G.cng','--layout','L.json','--clusters','C.json',"
        "'--format','tsv','--out','E.tsv'])"
    )
    outputs = {}
    for attempt in ("one", "two"):
        subprocess.run([sys.executable, "-c", script], cwd=workdir, check=True,
                       capture_output=True)
        outputs[attempt] = tuple(
            (workdir / name).read_bytes() for name in ("G.cng", "C.json", "L.json", "M.svg", "E.tsv")
        )
    assert outputs["one"] == outputs["two"]
