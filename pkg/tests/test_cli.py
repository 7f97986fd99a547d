"""Source/scheme documents, unit handling, argument dispatch and exit statuses."""

import io
import json
from pathlib import Path

import pytest

from app import WorkbenchApp
from helpers import LN2
from src.cli import (
    RunReport,
    build_parser,
    build_scheme,
    convert_units,
    dispatch,
    emit,
    parse_scheme,
    parse_source,
    run,
    to_nats,
    u_preset,
)
from src.errors import (
    MassSumError,
    NegativeMassError,
    OmniscientMismatchError,
    SourceFormatError,
    UsageError,
)
from src.probkit import mutual_information
from src.utils.config_loader import _deep_merge, load_config, load_settings

REPO = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG = str(REPO / "config" / "default.yaml")


def document(**overrides):
    base = {"m": 1, "z_size": 2, "x_sizes": [2], "pmf": [0.45, 0.05, 0.05, 0.45]}
    base.update(overrides)
    return base


@pytest.fixture
def app():
    return WorkbenchApp([DEFAULT_CONFIG])


@pytest.fixture
def src(source_file):
    """Example source path as a CLI string."""
    return lambda name: str(source_file(name))


class TestSourceDocuments:
    def test_examples_parse(self, source_file):
        xor = parse_source(source_file("xor_helper"))
        assert xor.omniscient and xor.z_size == 4 and xor.name == "xor-helper"
        assert parse_source(source_file("noiseless")).m == 1
        pair = parse_source(source_file("bsc_pair"))
        assert pair.x_sizes == (2, 2)
        assert mutual_information(pair.pmf, 1, 2) > 0
        assert parse_source(str(source_file("dsbs"))).name == "dsbs-0.1"

    def test_yaml_text(self):
        source = parse_source("m: 1\nz_size: 2\nx_sizes: [2]\npmf: [0.5, 0, 0, 0.5]\n")
        assert mutual_information(source.pmf, 0, 1) == pytest.approx(LN2)

    def test_tiny_mass_error_is_renormalized(self):
        source = parse_source(document(pmf=[0.45, 0.05, 0.05, 0.45 + 5e-10]))
        assert source.pmf.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_mass_sum(self):
        with pytest.raises(MassSumError) as info:
            parse_source(document(pmf=[0.4, 0.05, 0.05, 0.4]))
        assert info.value.total == pytest.approx(0.9)
        assert info.value.exit_status == 3

    def test_negative_mass(self):
        with pytest.raises(NegativeMassError):
            parse_source(document(pmf=[0.55, -0.05, 0.05, 0.45]))

    @pytest.mark.parametrize(
        "overrides",
        [
            {"x_sizes": [2, 2]},
            {"pmf": [0.5, 0.5]},
            {"pmf": [float("nan"), 0.5, 0.0, 0.5]},
            {"extra": 1},
            {"z_size": None},
            {"m": 0},
        ],
    )
    def test_malformed(self, overrides):
        with pytest.raises(SourceFormatError):
            parse_source(document(**overrides))

    def test_not_a_mapping(self):
        with pytest.raises(SourceFormatError):
            parse_source("- 1\n- 2\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(SourceFormatError):
            parse_source(tmp_path / "absent.yaml")

    def test_omniscient_contradicted(self):
        with pytest.raises(OmniscientMismatchError):
            parse_source(document(m=2, z_size=4, x_sizes=[2, 2], omniscient=True, pmf=[1 / 16] * 16))

    def test_omniscient_full_table(self):
        table = [0.0] * 16
        for z in range(4):
            table[z * 4 + z] = 0.25
        source = parse_source(document(m=2, z_size=4, x_sizes=[2, 2], omniscient=True, pmf=table))
        assert source.omniscient


class TestSchemes:
    def test_receiver_preset(self, xor_source):
        rows = u_preset(xor_source, "x2").rows
        assert rows.tolist() == [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]

    @pytest.mark.parametrize("name", ["x3", "x0", "half"])
    def test_bad_u_preset(self, xor_source, name):
        with pytest.raises(UsageError):
            u_preset(xor_source, name)

    def test_receiver_preset_needs_omniscience(self, bsc_source):
        with pytest.raises(UsageError):
            u_preset(bsc_source, "x1")

    def test_per_receiver_s_presets(self, copy_bsc_source):
        aux = build_scheme(copy_bsc_source, u="z", s="const,z")
        assert aux.s_cards == (1, 2)
        with pytest.raises(UsageError):
            build_scheme(copy_bsc_source, s="const,z,z")

    def test_document_without_s(self, bsc_source):
        aux = parse_scheme({"u_given_z": [[1, 0], [0, 1]]}, bsc_source)
        assert aux.s_cards == (1,)

    def test_document_file(self, bsc_source, tmp_path):
        path = tmp_path / "scheme.yaml"
        path.write_text("u_given_z: [[1, 0], [0, 1]]\ns_given_uz:\n  - [[1, 0], [0, 1], [1, 0], [0, 1]]\n")
        aux = parse_scheme(str(path), bsc_source)
        assert aux.s_cards == (2,)

    def test_bad_documents(self, bsc_source, tmp_path):
        with pytest.raises(UsageError):
            parse_scheme({"u_given_z": [[1, 0], [0]]}, bsc_source)
        with pytest.raises(UsageError):
            parse_scheme({"u_given_z": [[1, 0], [0, 1], [1, 0]]}, bsc_source)
        with pytest.raises(UsageError):
            parse_scheme({"u_given_z": [[0.5, 0.4], [0, 1]]}, bsc_source)
        with pytest.raises(UsageError):
            parse_scheme(str(tmp_path / "none.yaml"), bsc_source)


class TestUnits:
    def test_convert_to_bits(self):
        payload = {"R": LN2, "R_l": [LN2, 0.0], "flag": True, "n": 3, "note": None}
        out = convert_units(payload, frozenset({"R", "R_l", "flag", "note"}), "bits")
        assert out["R"] == pytest.approx(1.0)
        assert out["R_l"] == [pytest.approx(1.0), 0.0]
        assert out["flag"] is True and out["note"] is None and out["n"] == 3

    def test_nats_are_untouched(self):
        payload = {"R": 0.3}
        assert convert_units(payload, frozenset({"R"}), "nats") == payload

    def test_to_nats(self):
        assert to_nats(1.0, "bits") == pytest.approx(LN2)
        assert to_nats(1.0, "nats") == 1.0
        assert to_nats(None, "bits") is None

    def test_emit(self):
        report = RunReport(command=["x"], subcommand="a.b", resolved_config={}, units="bits", results={}, wall_time=0.0)
        stream = io.StringIO()
        emit(report, stream, indent=0)
        text = stream.getvalue()
        assert text.endswith("\n") and text.count("\n") == 1
        assert json.loads(text)["subcommand"] == "a.b"


class TestParser:
    def test_lists(self):
        args = build_parser().parse_args(["simulate", "exact", "--source", "s.yaml", "--I", "2,1", "--J", "1"])
        assert args.I_list == [2, 1] and args.J_list == [1] and args.n == 1 and args.order == []

    def test_function_tables(self):
        args = build_parser().parse_args(["hc", "functional", "--source", "s.yaml", "--p", "2,2", "--functions", "1,0;0,1"])
        assert args.functions == [[1.0, 0.0], [0.0, 1.0]]

    @pytest.mark.parametrize(
        "argv",
        [[], ["region"], ["teleport", "now"], ["converse", "theorem4", "--K", "4"], ["simulate", "exact", "--source", "s", "--I", "a", "--J", "1"]],
    )
    def test_usage_errors(self, argv):
        with pytest.raises(UsageError):
            build_parser().parse_args(argv)


class TestDispatch:
    def test_converse_example(self, app):
        report = dispatch(["converse", "theorem4", "--K", "100", "--W", "2,2", "--p", "1,1"], app)
        assert report.subcommand == "converse.theorem4"
        assert report.results["bound"] == pytest.approx(0.79)
        assert report.units == "bits"

    def test_units(self, app, src):
        bits = dispatch(["region", "theorem1", "--source", src("noiseless")], app)
        nats = dispatch(["region", "theorem1", "--source", src("noiseless"), "--units", "nats"], app)
        assert bits.results["R"] == pytest.approx(1.0)
        assert nats.results["R"] == pytest.approx(LN2)
        assert nats.resolved_config["settings"]["output"]["units"] == "nats"

    def test_helper_preset(self, app, src):
        report = dispatch(["region", "theorem2", "--source", src("xor_helper"), "--u", "x1"], app)
        assert report.results["R"] == pytest.approx(1.0)
        assert report.results["R_l"] == [pytest.approx(0.0, abs=1e-12), pytest.approx(1.0)]

    def test_maximize_in_bits(self, app, src):
        argv = ["region", "maximize", "--source", src("xor_helper"), "--budgets", "0,1", "--restarts", "2", "--iterations", "20"]
        report = dispatch(argv, app)
        assert report.results["R"] >= 0.98
        assert report.seeds == {"search": 0}
        assert report.resolved_config["settings"]["search"]["restarts"] == 2
        assert report.resolved_config["settings"]["hc_search"]["restarts"] == 32

    def test_reports_are_deterministic(self, app, src):
        argv = ["simulate", "mc", "--source", src("bsc_pair"), "--I", "2,1,1", "--J", "1,1", "--n", "2", "--trials", "200"]
        a, b = dispatch(argv, app), dispatch(argv, app)
        assert a.model_dump(exclude={"wall_time"}) == b.model_dump(exclude={"wall_time"})
        assert a.seeds == {"codebook": 0, "source": 0}

    def test_exact_simulation(self, app, src):
        report = dispatch(["simulate", "exact", "--source", src("noiseless"), "--I", "2,1", "--J", "1"], app)
        assert report.results["key_size"] == 2
        assert report.results["mode"] == "exact"

    def test_exact_simulation_lists_receivers_by_label(self, app, tmp_path):
        source = tmp_path / "copy_bsc.yaml"
        source.write_text("m: 2\nz_size: 2\nx_sizes: [2, 2]\npmf: [0.445, 0.055, 0, 0, 0, 0, 0.055, 0.445]\n")
        argv = ["simulate", "exact", "--source", str(source), "--I", "2,1,1", "--J", "1,1", "--n", "2"]
        plain = dispatch(argv, app).results
        swapped = dispatch(argv + ["--order", "2,1"], app).results
        assert plain["order"] == [1, 2]
        assert swapped["order"] == [2, 1]
        for key in ("error", "leakage", "tv"):
            assert swapped[key] == pytest.approx(plain[key], abs=1e-12)

    def test_params_with_nats(self, app, src):
        argv = ["oneshot", "params", "--source", src("noiseless"), "--n", "10", "--beta", str(0.1 * LN2), "--units", "nats"]
        assert dispatch(argv, app).results["I_list"] == [512, 1]

    def test_params_with_bits(self, app, src):
        argv = ["oneshot", "params", "--source", src("noiseless"), "--n", "10", "--beta", "0.1"]
        report = dispatch(argv, app)
        assert report.results["I_list"] == [512, 1]
        assert report.results["beta"] == pytest.approx(0.1)

    def test_hc_check(self, app, src):
        argv = ["hc", "check", "--source", src("xor_helper"), "--p", "2,2", "--restarts", "1", "--iterations", "10"]
        report = dispatch(argv, app)
        assert report.results["status"] == "holds-up-to-search"
        assert report.resolved_config["settings"]["hc_search"]["restarts"] == 1

    def test_config_file_and_flag_precedence(self, app, src, tmp_path):
        extra = tmp_path / "nats.yaml"
        extra.write_text("output:\n  units: nats\n")
        argv = ["region", "capacity", "--source", src("dsbs"), "--config", str(extra)]
        assert dispatch(argv, app).units == "nats"
        assert dispatch(argv + ["--units", "bits"], app).units == "bits"

    def test_invalid_flag_value(self, app, src):
        with pytest.raises(UsageError):
            dispatch(["region", "maximize", "--source", src("xor_helper"), "--budgets", "0,1", "--restarts", "-1"], app)


class TestExitStatus:
    def run(self, app, argv):
        out, err = io.StringIO(), io.StringIO()
        status = run(argv, app, stdout=out, stderr=err)
        return status, out.getvalue(), err.getvalue()

    def test_success_prints_report(self, app):
        status, out, _ = self.run(app, ["converse", "margin", "--K", "100", "--W", "2,2", "--p", "1,1"])
        assert status == 0
        data = json.loads(out)
        assert data["results"]["margin"] == pytest.approx(-3.219 / LN2, abs=1e-3)

    def test_usage(self, app):
        status, out, err = self.run(app, ["region"])
        assert status == 2
        assert out == ""
        assert "usage error" in err

    def test_helper_region_needs_omniscient_source(self, app, src):
        assert self.run(app, ["region", "theorem2", "--source", src("noiseless")])[0] == 2

    def test_invalid_source(self, app, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text("m: 1\nz_size: 2\nx_sizes: [2]\npmf: [0.6, -0.1, 0.0, 0.5]\n")
        status, _, err = self.run(app, ["region", "capacity", "--source", str(bad)])
        assert status == 3
        assert "NegativeMassError" in err

    def test_budget_exceeded(self, app, src, tmp_path):
        tight = tmp_path / "tight.yaml"
        tight.write_text("simulation:\n  max_enumeration_states: 1\n")
        argv = ["simulate", "exact", "--source", src("noiseless"), "--I", "2,1", "--J", "1", "--config", str(tight)]
        assert self.run(app, argv)[0] == 4

    def test_overflow(self, app, src):
        argv = ["oneshot", "params", "--source", src("noiseless"), "--n", "5000", "--beta", "0.1"]
        assert self.run(app, argv)[0] == 4


class TestConfig:
    def test_deep_merge(self):
        merged = _deep_merge({"search": {"restarts": 64, "iterations": 500}}, {"search": {"restarts": 2}, "output": {}})
        assert merged == {"search": {"restarts": 2, "iterations": 500}, "output": {}}

    def test_environment_is_expanded(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SKWB_TEST_RESTARTS", "3")
        path = tmp_path / "env.yaml"
        path.write_text("search:\n  restarts: ${SKWB_TEST_RESTARTS}\n")
        assert load_config([str(path)]) == {"search": {"restarts": "3"}}
        assert load_settings([str(path)]).search.restarts == 3

    def test_default_file(self):
        settings = load_settings([DEFAULT_CONFIG])
        assert settings.output.units == "bits"
        assert settings.search.restarts == 64
        assert settings.hc_search.iterations == 400

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(UsageError):
            load_config([str(tmp_path / "nope.yaml")])

    def test_unknown_keys_are_rejected(self, tmp_path):
        path = tmp_path / "typo.yaml"
        path.write_text("serch:\n  restarts: 2\n")
        with pytest.raises(UsageError):
            load_settings([str(path)])
