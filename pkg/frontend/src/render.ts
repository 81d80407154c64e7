/**
 * Reads a scenario bundle directory, applies a figure recipe, and writes
 * one SVG per figure. Inputs are never mutated; output files are written
 * only after the full document is assembled, so failures leave nothing
 * partial behind.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { columnUnit, columnValues, parseCsv, SchemaError } from "./csv.js";
import { FigureRecipe, RECIPES } from "./recipes.js";
import { Marker, renderSvg, Series } from "./svg.js";

export class ManifestError extends Error {}

function loadMeta(dir: string, id: string): Record<string, unknown> {
  const metaPath = path.join(dir, `${id}.meta.json`);
  if (!fs.existsSync(metaPath)) return {};
  return JSON.parse(fs.readFileSync(metaPath, "utf-8")) as Record<
    string,
    unknown
  >;
}

function checkManifest(dir: string, id: string): void {
  const manifestPath = path.join(dir, "manifest.json");
  if (!fs.existsSync(manifestPath)) {
    throw new ManifestError(`manifest.json not found in ${dir}`);
  }
  const manifest = JSON.parse(fs.readFileSync(manifestPath, "utf-8")) as {
    files?: Record<string, { columns?: string[] }>;
  };
  if (!manifest.files) {
    throw new ManifestError("manifest.json carries no file table");
  }
  const entry = manifest.files[`${id}.csv`];
  if (entry === undefined) {
    throw new ManifestError(`manifest does not list ${id}.csv`);
  }
}

function resolveMarkers(
  recipe: FigureRecipe,
  meta: Record<string, unknown>,
): Marker[] {
  const out: Marker[] = [];
  for (const m of recipe.markers) {
    let value = m.value;
    if (m.metaKey !== undefined) {
      const raw = meta[m.metaKey];
      if (typeof raw !== "number") {
        throw new SchemaError(
          `meta key '${m.metaKey}' missing for marker '${m.label}'`,
        );
      }
      value = raw;
    }
    if (value === undefined) {
      throw new SchemaError(`marker '${m.label}' has no value`);
    }
    out.push({ axis: m.axis, value, label: m.label });
  }
  return out;
}

export function renderFigureSvg(dir: string, id: string): string {
  const recipe = RECIPES[id];
  if (recipe === undefined) {
    throw new SchemaError(
      `unknown figure id '${id}'; known: ${Object.keys(RECIPES).join(", ")}`,
    );
  }
  checkManifest(dir, id);
  const csvPath = path.join(dir, `${id}.csv`);
  const table = parseCsv(fs.readFileSync(csvPath, "utf-8"));
  const meta = loadMeta(dir, id);
  const xs = columnValues(table, recipe.xColumn);
  const series: Series[] = recipe.series.map((s) => ({
    label: s.label,
    color: s.color,
    x: xs,
    y: columnValues(table, s.column),
  }));
  const xUnit = columnUnit(table, recipe.xColumn);
  return renderSvg({
    title: recipe.title,
    xLabel: `${recipe.xColumn} [${xUnit}]`,
    yLabel: recipe.yLabel,
    xScale: recipe.xScale,
    yScale: recipe.yScale,
    series,
    markers: resolveMarkers(recipe, meta),
  });
}

export function renderFigures(
  inputDir: string,
  ids: string[],
  outputDir: string,
  format: string,
): string[] {
  if (format !== "svg") {
    throw new SchemaError(
      `unsupported format '${format}': this renderer emits svg`,
    );
  }
  // assemble everything first so an error writes no partial output
  const documents = ids.map((id) => ({
    id,
    svg: renderFigureSvg(inputDir, id),
  }));
  fs.mkdirSync(outputDir, { recursive: true });
  const written: string[] = [];
  for (const doc of documents) {
    const outPath = path.join(outputDir, `${doc.id}.svg`);
    fs.writeFileSync(outPath, doc.svg, "utf-8");
    written.push(outPath);
  }
  return written;
}
