# test_file_service.py
#
# Copyright 2026 The badapprox contributors.
#
# SPDX-License-Identifier: GPL-3.0-or-later

import json
from fractions import Fraction

import pytest

from badapprox.errors import ConfigError
from badapprox.services.file_service import INTERVAL_COLUMNS, FileService


def test_certificate_round_trip(tmp_path):
    path = tmp_path / "out" / "cert.json"
    document = {"format": "badapprox-certificate/1", "config": {"R": 16}, "status": "pass"}
    assert FileService.write_certificate(str(path), document)
    assert FileService.read_certificate(str(path)) == document
    text = path.read_bytes()
    assert b"\r\n" not in text
    assert list(json.loads(text)) == ["format", "config", "status"]


def test_read_certificate_rejects_other_json(tmp_path):
    path = tmp_path / "other.json"
    path.write_text("[1, 2, 3]", encoding="utf-8")
    with pytest.raises(ConfigError):
        FileService.read_certificate(str(path))
    with pytest.raises(ConfigError):
        FileService.read_certificate(str(tmp_path / "missing.json"))


def test_backup_existing_file(tmp_path):
    path = tmp_path / "cert.json"
    assert FileService.backup_existing_file(str(path)) is None
    path.write_text("{}", encoding="utf-8")
    first = FileService.backup_existing_file(str(path))
    second = FileService.backup_existing_file(str(path))
    assert first.endswith(".backup")
    assert second.endswith(".backup.1")


def test_emit_intervals(tmp_path, state16):
    path = tmp_path / "intervals.csv"
    assert FileService.emit_intervals(state16, str(path))
    lines = path.read_bytes().decode("utf-8").split("\n")
    assert lines[0] == ",".join(INTERVAL_COLUMNS)
    assert lines[1] == "1,,0,1,27,160000"
    assert lines[2] == "2,11,27,256000,27,2560000"
    assert lines[-1] == ""
    assert len(lines) == 2 + sum(state16.counts)


def test_read_intervals_round_trip(tmp_path, state16):
    path = tmp_path / "intervals.csv"
    FileService.emit_intervals(state16, str(path))
    segments = FileService.read_intervals(str(path), Fraction(0), state16.params.kappa, 16)
    expected = [segment for level in range(1, state16.level + 1)
                for segment in state16.segments_at(level)]
    assert segments == expected
    assert segments[-1].lineage == (16, 16, 16)


def test_read_intervals_detects_tampering(tmp_path, state16):
    path = tmp_path / "intervals.csv"
    FileService.emit_intervals(state16, str(path))
    text = path.read_text(encoding="utf-8").replace("2,11,27,256000", "2,11,28,256000")
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError):
        FileService.read_intervals(str(path), Fraction(0), state16.params.kappa, 16)


def test_write_certificate_with_backup(tmp_path):
    path = tmp_path / "cert.json"
    assert FileService.write_certificate(str(path), {"config": {"R": 16}})
    assert FileService.write_certificate(str(path), {"config": {"R": 32}}, create_backup=True)
    assert FileService.read_certificate(str(path) + ".backup") == {"config": {"R": 16}}
    assert FileService.read_certificate(str(path)) == {"config": {"R": 32}}


def test_write_failures_return_false(tmp_path, state16):
    blocker = tmp_path / "plain-file"
    blocker.write_text("", encoding="utf-8")
    assert not FileService.write_certificate(str(blocker / "c.json"), {"config": {}})
    assert not FileService.emit_intervals(state16, str(blocker / "i.csv"))
