"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals

import pytest
from flexmock import flexmock

import nlfd.cli.render
from nlfd.cli.render import TablePrinter, get_terminal_size, render_report
from nlfd.verify.report import CheckRecord, DiagnosticsReport


LONGEST_VAL1 = "l" * 10
LONGEST_VAL2 = "l" * 100

SAMPLE_DATA = [
    {"x": "X", "y": "Y"},
    {"x": "H" * 8, "y": "H" * 20},
    {"x": LONGEST_VAL1, "y": LONGEST_VAL2},
]

SHORT_DATA = [
    {"x": "H1", "y": "Header2"},
    {"x": "abc", "y": "yy"},
]


def test_get_terminal_size():
    result = get_terminal_size()
    assert isinstance(result, tuple)
    assert isinstance(result[0], int)
    assert isinstance(result[1], int)


def test_no_terminal():
    (flexmock(nlfd.cli.render.subprocess)
        .should_receive('check_output')
        .and_raise(OSError))
    assert get_terminal_size() == (0, 0)


def test_longest_value():
    p = TablePrinter(SAMPLE_DATA, ["x", "y"])
    assert p.longest_value("x") == len(LONGEST_VAL1) + 2
    assert p.longest_value("y") == len(LONGEST_VAL2) + 2


def test_unknown_column():
    with pytest.raises(KeyError):
        TablePrinter(SAMPLE_DATA, ["x", "w"])


def test_empty_table():
    with pytest.raises(ValueError):
        TablePrinter([], ["x"])


def test_print_table_without_terminal(capsys):
    (flexmock(nlfd.cli.render)
        .should_receive('get_terminal_size')
        .and_return(0, 0)
        .once())
    TablePrinter(SHORT_DATA, ["x", "y"]).render()
    out, err = capsys.readouterr()
    assert err == " H1  | Header2\n" + "-" * 5 + "+" + "-" * 9 + "\n"
    assert out == " abc | yy\n"


def test_print_table_with_mocked_terminal(capsys):
    (flexmock(nlfd.cli.render)
        .should_receive('get_terminal_size')
        .and_return(25, 40)
        .once())
    TablePrinter(SHORT_DATA, ["x", "y"]).render()
    out, err = capsys.readouterr()
    assert err == " H1" + " " * 15 + "| Header2\n" + "-" * 18 + "+" + "-" * 21 + "\n"
    assert out == " abc" + " " * 14 + "| yy\n"


class TestRenderReport(object):
    def test_rows(self, capsys):
        flexmock(nlfd.cli.render).should_receive('get_terminal_size').and_return(0, 0)
        report = DiagnosticsReport()
        report.add(CheckRecord.from_flag("mass_conservation", "mass-conservation", True,
                                         measured={"headline": 2.5e-13}, tolerance=1e-3))
        report.add(CheckRecord.not_applicable("smoothing", "smoothing-effect", "no data"))
        render_report(report)
        out, err = capsys.readouterr()
        assert err.split()[:5] == ["NAME", "|", "TAG", "|", "STATUS"]
        lines = out.splitlines()
        assert len(lines) == 2
        assert [cell.strip() for cell in lines[0].split("|")] == [
            "mass_conservation", "mass-conservation", "passed", "2.5e-13", "0.001"]
        assert [cell.strip() for cell in lines[1].split("|")][2:] == [
            "not_applicable", "-", "-"]

    def test_columns(self, capsys):
        flexmock(nlfd.cli.render).should_receive('get_terminal_size').and_return(0, 0)
        report = DiagnosticsReport()
        report.add(CheckRecord.from_flag("a", "t", False))
        render_report(report, col_list=["status"])
        out, err = capsys.readouterr()
        assert err.split()[0] == "STATUS"
        assert out.strip() == "failed"

    def test_empty_report(self, capsys):
        render_report(DiagnosticsReport())
        out, err = capsys.readouterr()
        assert out == ""
        assert err == ""
