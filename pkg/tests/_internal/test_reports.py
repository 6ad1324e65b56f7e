#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
import json
import os
import pathlib

from fractions import Fraction
from unittest import TestCase, mock

import numpy as np

from spectral_index._internal.reports import (
    OUTPUT_DIR_ENV_VAR,
    load_schema,
    render_csv,
    render_json,
    render_table,
    resolve_output_path,
    write_output,
)
from spectral_index.comparison import ComparisonBranch
from tests.factories import patchfs


class TestRenderJson(TestCase):
    def test_envelope_with_sorted_keys_and_trailing_newline(self):
        text = render_json("spectrum", {"cutoff": Fraction(9)}, {"entries": [[0.0, 1]], "cutoff": 9.0})

        self.assertTrue(text.endswith("}\n"))
        self.assertLess(text.index('"command"'), text.index('"config"'))
        self.assertLess(text.index('"config"'), text.index('"result"'))
        self.assertEqual(json.loads(text)["config"], {"cutoff": 9.0})

    def test_converts_numpy_enum_and_path_values(self):
        config = {"n": np.int64(3), "x": np.float64(0.5), "v": np.arange(2), "branch": ComparisonBranch.CONSTANT}
        config["path"] = pathlib.Path("out.json")

        document = json.loads(render_json("compare", config, {}))

        self.assertEqual(
            document["config"], {"n": 3, "x": 0.5, "v": [0, 1], "branch": "constant", "path": "out.json"}
        )

    def test_rejects_unknown_objects(self):
        with self.assertRaises(TypeError):
            render_json("compare", {"x": object()}, {})


class TestRenderTabular(TestCase):
    def test_csv_writes_header_and_exact_values(self):
        text = render_csv(("eigenvalue", "multiplicity"), [[Fraction(1, 2), 4], [Fraction(2), 1]])

        self.assertEqual(text, "eigenvalue,multiplicity\n1/2,4\n2,1\n")

    def test_table_contains_headers_and_cells(self):
        text = render_table(("quantity", "value"), [["n", 2], ["cutoff", float("inf")]])

        self.assertIn("quantity", text)
        self.assertIn("inf", text)


class TestWriteOutput(TestCase):
    def test_returns_none_without_output(self):
        self.assertIsNone(write_output("text", None))

    @patchfs
    def test_bare_file_names_go_to_default_directory(self, fs):
        with mock.patch.dict(os.environ, {OUTPUT_DIR_ENV_VAR: str(pathlib.Path(fs, "reports"))}):
            path = write_output("text", "report.json")

        self.assertEqual(path, pathlib.Path(fs, "reports", "report.json"))
        self.assertEqual(path.read_text(), "text")

    @patchfs
    def test_paths_with_directories_are_kept(self, fs):
        target = str(pathlib.Path(fs, "report.csv"))

        with mock.patch.dict(os.environ, {OUTPUT_DIR_ENV_VAR: "elsewhere"}):
            self.assertEqual(resolve_output_path(target), pathlib.Path(target))


class TestSchemas(TestCase):
    def test_every_command_has_a_schema_with_the_envelope(self):
        for name in ("spectrum", "index", "r-index", "compare", "converge"):
            schema = load_schema(name)

            self.assertEqual(schema["required"], ["command", "config", "result"])
            self.assertEqual(schema["properties"]["command"]["const"], name)
