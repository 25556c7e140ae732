# test_main.py
#
# Copyright 2026 The badapprox contributors.
#
# SPDX-License-Identifier: GPL-3.0-or-later

import json

from badapprox.main import BadApproxApplication, main
from badapprox.models.certificate import RunStatus
from badapprox.services.settings_service import SettingsService


def run_to_file(tmp_path, *args):
    path = tmp_path / "cert.json"
    code = main(["--out-cert", str(path), *args])
    return code, json.loads(path.read_text(encoding="utf-8"))


def test_default_run_passes(tmp_path):
    code, document = run_to_file(tmp_path, "--oracle")
    assert code == 0
    assert document["status"] == "pass"
    assert document["survivors"]["counts"] == [1, 6, 96, 1536]
    assert document["badness"]["minimizer"] == [0, 1, 0]
    assert document["badness"]["xi_left"] == "27/256000"
    assert document["badness"]["h_max"] == 256
    assert document["oracle"]["matches_sieve"]
    assert document["condition0"]["passes"]
    assert len(document["diagnostics"]) == 3
    assert "timings" not in document


def test_r32_run(tmp_path):
    code, document = run_to_file(tmp_path, "--R", "32", "--diag", "off")
    assert code == 0
    assert document["survivors"]["counts"] == [1, 15, 480, 15360]
    assert document["params"]["kappa"] == "4/625"
    assert "diagnostics" not in document


def test_certificates_are_reproducible(tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert main(["--out-cert", str(first)]) == 0
    assert main(["--out-cert", str(second), "--workers", "3"]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_depth_zero_reports_condition0_only(tmp_path):
    code, document = run_to_file(tmp_path, "--depth", "0")
    assert code == 0
    assert document["J1"] == {"left": "0/1", "right": "27/160000"}
    assert "badness" not in document


def test_timings_only_when_requested(tmp_path):
    code, document = run_to_file(tmp_path, "--depth", "1", "--timings")
    assert code == 0
    assert "sieve" in document["timings"]


def test_empty_sieve_exits_with_two(tmp_path):
    code, document = run_to_file(tmp_path, "--delta", "1/10", "--kappa", "1", "--depth", "1")
    assert code == 2
    assert document["status"] == "empty"
    assert document["xi"] is None


def test_failing_condition0_exits_with_two(tmp_path):
    code, document = run_to_file(tmp_path, "--theta", "quad:-1,1,1,2", "--delta", "1/2",
                                 "--kappa", "1", "--depth", "0")
    assert code == 2
    assert not document["condition0"]["passes"]


def test_rejections_exit_with_three(tmp_path):
    assert main(["--theta", "quad:1,0,1,4"]) == 3
    assert main(["--cap", "10"]) == 3
    assert main(["--delta", "zero"]) == 3
    assert main(["--strict"]) == 3
    assert main(["--start", "1"]) == 3


def test_intervals_are_written(tmp_path):
    intervals = tmp_path / "intervals.csv"
    assert main(["--out-cert", str(tmp_path / "c.json"), "--out-intervals", str(intervals),
                 "--depth", "1"]) == 0
    assert intervals.read_text(encoding="utf-8").splitlines()[1] == "1,,0,1,27,160000"


def test_check_cert_round_trip(tmp_path):
    path = tmp_path / "cert.json"
    assert main(["--out-cert", str(path), "--diag", "off"]) == 0
    assert main(["--check-cert", str(path)]) == 0
    document = json.loads(path.read_text(encoding="utf-8"))
    document["badness"]["minimizer"] = [1, 1, -1]
    path.write_text(json.dumps(document), encoding="utf-8")
    assert main(["--check-cert", str(path)]) == 2


def test_stdout_certificate_without_out_cert(capsys):
    assert main(["--depth", "1", "--diag", "off"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["format"] == "badapprox-certificate/1"


def test_application_run_returns_certificate():
    config = SettingsService({"depth": 2, "diag": "full"}).build_run_config()
    certificate = BadApproxApplication().run(config)
    assert certificate.status is RunStatus.PASS
    assert "group_details" in certificate.to_dict()["diagnostics"][0]


def test_kappa_paper_is_the_standard_choice(tmp_path):
    code, document = run_to_file(tmp_path, "--kappa", "paper", "--depth", "1")
    assert code == 0
    assert document["params"]["kappa"] == "27/10000"
    assert document["params"]["kappa_mode"] == "standard"


def test_final_survivors_are_listed(tmp_path):
    code, document = run_to_file(tmp_path, "--depth", "1", "--diag", "off")
    assert code == 0
    final = document["survivors"]["final"]
    assert len(final) == 6
    assert final[0] == {"lineage": "11", "left": "27/256000", "right": "297/2560000"}
    assert final[-1]["lineage"] == "16"
    assert final[-1]["right"] == "27/160000"


def test_unwritable_certificate_path_is_an_error(tmp_path, capsys):
    blocker = tmp_path / "plain-file"
    blocker.write_text("", encoding="utf-8")
    code = main(["--out-cert", str(blocker / "sub" / "c.json"), "--depth", "1", "--diag", "off"])
    assert code == 3
    assert "Cannot write certificate" in capsys.readouterr().err


def test_unwritable_intervals_path_is_an_error(tmp_path):
    blocker = tmp_path / "plain-file"
    blocker.write_text("", encoding="utf-8")
    assert main(["--out-cert", str(tmp_path / "c.json"), "--out-intervals",
                 str(blocker / "i.csv"), "--depth", "1", "--diag", "off"]) == 3


def test_backup_keeps_previous_outputs(tmp_path):
    path = tmp_path / "cert.json"
    intervals = tmp_path / "intervals.csv"
    args = ["--out-cert", str(path), "--out-intervals", str(intervals), "--depth", "1", "--diag", "off"]
    assert main(args) == 0
    assert main(args) == 0
    assert not (tmp_path / "cert.json.backup").exists()
    assert main([*args, "--backup"]) == 0
    assert (tmp_path / "cert.json.backup").read_bytes() == path.read_bytes()
    assert (tmp_path / "intervals.csv.backup").exists()


def test_check_cert_detects_altered_enclosure(tmp_path):
    path = tmp_path / "cert.json"
    assert main(["--out-cert", str(path), "--depth", "2", "--diag", "off"]) == 0
    assert main(["--check-cert", str(path)]) == 0
    document = json.loads(path.read_text(encoding="utf-8"))
    document["badness"]["enclosure"] = ["1/2", "1/2"]
    path.write_text(json.dumps(document), encoding="utf-8")
    assert main(["--check-cert", str(path)]) == 2


def test_log_file_path_is_reported():
    path = BadApproxApplication().logger_service.get_log_file_path()
    assert path is None or path.endswith("badapprox.log")
