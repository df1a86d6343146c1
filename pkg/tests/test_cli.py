import json

import pytest

from bruhat_flows import cache, cli
from bruhat_flows.cells import CellSpec, compute_bracket_table
from bruhat_flows.rootdata import cartan_type


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv(cache.ENV_VAR, raising=False)


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_brackets_a1(capsys):
    code, out, _ = run(capsys, "brackets", "--type", "A1", "--word", "1,1")
    assert code == 0
    data = json.loads(out)
    assert "x1*x2 - 1" in json.dumps(data)


def test_brackets_text_and_csv(capsys):
    _, out, _ = run(capsys, "brackets", "--type", "A1", "--word", "1,1,1", "--format", "text")
    assert "{x1, x3} = -x1*x3" in out.splitlines()
    _, out, _ = run(capsys, "brackets", "--type", "A2", "--word", "1,2", "--torus", "--format", "csv")
    assert out.splitlines()[0] == "f,g,bracket"
    assert any(line.startswith("xi1,") for line in out.splitlines())


def test_leafdim(capsys):
    code, out, _ = run(capsys, "leafdim", "--type", "A2", "--word", "1,2")
    assert code == 0 and out.strip() == '{"stabilizer_dim":2,"leaf_dim":4}'


def test_rootinfo(capsys):
    code, out, _ = run(capsys, "rootinfo", "--type", "G2")
    data = json.loads(out)
    assert code == 0 and len(data["positive_roots"]) == 6


def test_minors(capsys):
    _, out, _ = run(capsys, "minors", "--type", "A1", "--word", "1,1,1", "--lambda", "1", "--interval", "1,3")
    assert json.loads(out)["minors"][0]["poly"] == "x1*x2*x3 - x1 - x3"
    _, out, _ = run(capsys, "minors", "--type", "G2", "--u", "2,1,2", "--format", "text")
    assert out.splitlines()[0] == "y_1 = x3*x4 - 1"


def test_usage_and_domain_errors(capsys):
    assert run(capsys, "brackets", "--type", "A1")[0] == 2
    assert run(capsys, "brackets", "--type", "A1", "--word", "a,b")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    code, _, err = run(capsys, "brackets", "--type", "Q7", "--word", "1")
    assert code == 1 and err.startswith("error:")
    assert run(capsys, "brackets", "--type", "A2", "--word", "1,3")[0] == 1
    assert run(capsys, "minors", "--type", "A2", "--word", "1,2", "--lambda=-1,1")[0] == 1
    assert run(capsys, "fz-embed", "--type", "A2", "--u", "1,2,1", "--v", "1,2,1",
               "--matrix", "1,0,0;0,1,0;0,0,1")[0] == 1


def test_output_is_deterministic(capsys):
    argv = ["flow", "--type", "G2", "--u", "2,1,2", "--hamiltonian", "1"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_flow_sampling_plot_and_check(capsys, tmp_path):
    png = tmp_path / "flow.png"
    code, out, _ = run(capsys, "flow", "--type", "A1", "--u", "1,1", "--hamiltonian", "1",
                       "--point", "1/2,-1,3/2,2", "--sample", "8", "--plot", str(png), "--check")
    assert code == 0
    data = json.loads(out)
    assert data["numeric_check"]["max_deviation"] < 1e-8
    assert len(data["samples"]) == 10
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    code, out, _ = run(capsys, "flow", "--type", "A1", "--u", "1,1", "--point", "1/2,-1,3/2,2",
                       "--sample", "4", "--format", "csv")
    assert out.splitlines()[0] == "c,x1,x2,x3,x4" and len(out.splitlines()) == 6


def test_flow_needs_point_for_samples(capsys):
    assert run(capsys, "flow", "--type", "A1", "--u", "1,1", "--sample", "4")[0] == 1


def test_kz_flow_and_zero_branch(capsys):
    code, out, _ = run(capsys, "flow", "--type", "A2", "--u", "1,2,1", "--kz", "5", "--zero-branch")
    assert code == 0
    data = json.loads(out)
    assert data["y0"] == "0"


def test_kz_command(capsys):
    code, out, _ = run(capsys, "kz", "--type", "A2", "--u", "1,2,1")
    data = json.loads(out)
    assert code == 0 and data["oracle"]["pairs"] == 36 and data["oracle"]["mismatches"] == []
    assert data["hamiltonians"] == [1, 3, 5]


def test_fz_embed_round_trip(capsys):
    m = "1,1,1;1,2,3;1,3,6"
    code, out, _ = run(capsys, "fz-embed", "--type", "A2", "--u", "1,2,1", "--v", "1,2,1", "--matrix", m)
    assert code == 0
    data = json.loads(out)
    point = ",".join(list(data["torus"].values()) + list(data["coordinates"].values()))
    code, out, _ = run(capsys, "fz-embed", "--type", "A2", "--u", "1,2,1", "--v", "1,2,1",
                       "--inverse", "--point", point)
    assert code == 0
    assert json.loads(out)["matrix"] == [["1", "1", "1"], ["1", "2", "3"], ["1", "3", "6"]]


def test_fz_embed_from_generators(capsys):
    code, out, _ = run(capsys, "fz-embed", "--type", "A1", "--u", "1", "--v", "1", "--gens", "e1=2,f1=3,h1=5")
    assert code == 0 and set(json.loads(out)["coordinates"]) == {"x1", "x2"}


def test_cache_store_load_and_hit(capsys, tmp_path):
    argv = ["brackets", "--type", "A2", "--word", "1,2,1", "--cache-dir", str(tmp_path), "--verbose"]
    code, first, err = run(capsys, *argv)
    assert code == 0 and "computed, stored" in err
    code, second, err = run(capsys, *argv)
    assert code == 0 and "cache hit" in err and second == first


def test_cache_env_var_wins(capsys, tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    monkeypatch.setenv(cache.ENV_VAR, str(env_dir))
    run(capsys, "brackets", "--type", "A1", "--word", "1,1", "--cache-dir", str(tmp_path / "cli"))
    assert list((env_dir / "brackets").glob("*.json"))
    assert not (tmp_path / "cli").exists()


def test_cache_round_trip_is_byte_identical(tmp_path):
    spec = CellSpec(cartan_type("A2"), (1, 2, 1))
    bt = compute_bracket_table(spec)
    key = cache.cache_key(spec, "interp")
    path = cache.store(tmp_path, key, bt)
    loaded = cache.load(tmp_path, key)
    assert cache.dumps(loaded) == path.read_text()


def test_tampered_entry_is_rejected_and_recomputed(tmp_path, caplog):
    spec = CellSpec(cartan_type("A2"), (1, 2, 1))
    table, hit = cache.cached_bracket_table(spec, "interp", tmp_path)
    assert not hit
    key = cache.cache_key(spec, "interp")
    path = cache.entry_path(tmp_path, key)
    data = json.loads(path.read_text())
    # flipping the sign of {x1, x2} breaks the Jacobi identity
    data["brackets"]["1,2"] = _negate(data["brackets"]["1,2"])
    path.write_text(json.dumps(data))
    assert cache.load(tmp_path, key) is None
    assert "rejecting" in caplog.text
    again, hit = cache.cached_bracket_table(spec, "interp", tmp_path)
    assert not hit and again.entries == table.entries
    assert cache.load(tmp_path, key) is not None


def _negate(text):
    from bruhat_flows.exactalg import parse_poly

    return str(-parse_poly(text))


def test_verify_suite(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "paper-fixtures", "--report-dir", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1] == f"{len(lines) - 1}/{len(lines) - 1} checks passed"
    assert (tmp_path / "verify.csv").exists() and (tmp_path / "verify.png").exists()
