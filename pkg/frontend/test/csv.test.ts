import assert from "node:assert/strict";
import { test } from "node:test";

import {
  columnUnit,
  columnValues,
  EmptyDatasetError,
  parseCsv,
  SchemaError,
} from "../src/csv.js";

const SAMPLE =
  "medium_length_cm,n15_coherent,n15_bsv\n" +
  "# units: cm,arb,arb\n" +
  "0.0,0.0,0.0\n" +
  "0.1,2.5e24,1.5e25\n";

test("parses header, units and numeric rows", () => {
  const table = parseCsv(SAMPLE);
  assert.deepEqual(table.columns, [
    "medium_length_cm",
    "n15_coherent",
    "n15_bsv",
  ]);
  assert.deepEqual(table.units, ["cm", "arb", "arb"]);
  assert.equal(table.rows.length, 2);
  assert.equal(table.rows[1]![1], 2.5e24);
});

test("column helpers resolve by name", () => {
  const table = parseCsv(SAMPLE);
  assert.deepEqual(columnValues(table, "medium_length_cm"), [0.0, 0.1]);
  assert.equal(columnUnit(table, "n15_bsv"), "arb");
});

test("missing column fails loudly with its name", () => {
  const table = parseCsv(SAMPLE);
  assert.throws(
    () => columnValues(table, "n15_vacuum"),
    (err: Error) => err instanceof SchemaError && /n15_vacuum/.test(err.message),
  );
});

test("units row is mandatory", () => {
  assert.throws(
    () => parseCsv("a,b\n1,2\n"),
    (err: Error) => err instanceof SchemaError,
  );
});

test("empty dataset is rejected", () => {
  assert.throws(
    () => parseCsv("a,b\n# units: x,y\n"),
    (err: Error) => err instanceof EmptyDatasetError,
  );
});

test("ragged rows are rejected", () => {
  assert.throws(
    () => parseCsv("a,b\n# units: x,y\n1,2,3\n"),
    (err: Error) => err instanceof SchemaError,
  );
});
