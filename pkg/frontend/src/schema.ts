/**
 * CSV parsing against the documented svadf output schemas.
 *
 * Every reader validates its header and fails with a SchemaError naming
 * the first missing column. Lines starting with '#' are provenance
 * comments emitted by the CLI and are skipped.
 */

import Papa from "papaparse";

export class SchemaError extends Error {
  readonly column: string;

  constructor(column: string, context: string) {
    super(`missing column '${column}' in ${context}`);
    this.name = "SchemaError";
    this.column = column;
  }
}

export interface StatPathRow {
  index: number;
  date: string | null;
  r: number;
  statistic: number | null;
  cvOrigination: number | null;
  cvCollapse: number | null;
}

export interface EpisodeRow {
  label: string;
  originDate: string | null;
  collapseDate: string | null;
  rEHat: number;
  rFHat: number | null;
  ongoing: boolean;
  maxStat: number | null;
}

export interface GapRow {
  n: number;
  regime: string;
  meanGap: number;
  meanResetGap: number;
}

export interface CalibrationRow {
  hypothesis: string;
  variant: string;
  n: number;
  q: number;
  value: number;
}

export interface PriceRow {
  date: string;
  price: number;
}

function stripComments(text: string): string {
  return text
    .split(/\r?\n/)
    .filter((line) => !line.startsWith("#"))
    .join("\n");
}

interface ParsedCsv {
  rows: Record<string, string>[];
  fields: string[];
}

function parseCsvText(text: string): ParsedCsv {
  const parsed = Papa.parse<Record<string, string>>(stripComments(text), {
    header: true,
    skipEmptyLines: true,
  });
  return { rows: parsed.data, fields: parsed.meta.fields ?? [] };
}

function requireColumns(parsed: ParsedCsv, columns: string[], context: string): void {
  const present = new Set(parsed.fields);
  for (const column of columns) {
    if (!present.has(column)) {
      throw new SchemaError(column, context);
    }
  }
}

function num(value: string | undefined): number | null {
  if (value === undefined || value.trim() === "") return null;
  const parsed = Number(value);
  return Number.isFinite(parsed) ? parsed : null;
}

function numStrict(value: string | undefined, column: string, context: string): number {
  const parsed = num(value);
  if (parsed === null) {
    throw new SchemaError(column, `${context} (unparseable value '${value ?? ""}')`);
  }
  return parsed;
}

export function parseStatPath(text: string, context = "statistic path csv"): StatPathRow[] {
  const parsed = parseCsvText(text);
  requireColumns(
    parsed,
    ["index", "r", "statistic", "cv_origination", "cv_collapse"],
    context,
  );
  return parsed.rows.map((row) => ({
    index: numStrict(row.index, "index", context),
    date: row.date?.trim() ? row.date.trim() : null,
    r: numStrict(row.r, "r", context),
    statistic: num(row.statistic),
    cvOrigination: num(row.cv_origination),
    cvCollapse: num(row.cv_collapse),
  }));
}

export function parseEpisodes(text: string, context = "episode csv"): EpisodeRow[] {
  const parsed = parseCsvText(text);
  requireColumns(
    parsed,
    ["label", "origin_date", "collapse_date", "r_e_hat", "r_f_hat", "ongoing", "max_stat"],
    context,
  );
  return parsed.rows
    .filter((row) => (row.r_e_hat ?? "").trim() !== "")
    .map((row) => ({
      label: row.label ?? "",
      originDate: row.origin_date?.trim() ? row.origin_date.trim() : null,
      collapseDate: row.collapse_date?.trim() ? row.collapse_date.trim() : null,
      rEHat: numStrict(row.r_e_hat, "r_e_hat", context),
      rFHat: num(row.r_f_hat),
      ongoing: (row.ongoing ?? "").trim().toLowerCase() === "true",
      maxStat: num(row.max_stat),
    }));
}

export function parseGapCurve(text: string, context = "gap csv"): GapRow[] {
  const parsed = parseCsvText(text);
  requireColumns(parsed, ["n", "regime", "mean_gap", "mean_reset_gap"], context);
  return parsed.rows.map((row) => ({
    n: numStrict(row.n, "n", context),
    regime: row.regime ?? "",
    meanGap: numStrict(row.mean_gap, "mean_gap", context),
    meanResetGap: numStrict(row.mean_reset_gap, "mean_reset_gap", context),
  }));
}

export function parseCalibration(text: string, context = "calibration csv"): CalibrationRow[] {
  const parsed = parseCsvText(text);
  requireColumns(parsed, ["hypothesis", "variant", "n", "q", "value"], context);
  return parsed.rows.map((row) => ({
    hypothesis: row.hypothesis ?? "",
    variant: row.variant ?? "",
    n: numStrict(row.n, "n", context),
    q: numStrict(row.q, "q", context),
    value: numStrict(row.value, "value", context),
  }));
}

export function parsePrices(
  text: string,
  context = "price csv",
  dateColumn = "date",
  priceColumn = "price",
): PriceRow[] {
  const parsed = parseCsvText(text);
  requireColumns(parsed, [dateColumn, priceColumn], context);
  return parsed.rows.map((row) => ({
    date: row[dateColumn] ?? "",
    price: numStrict(row[priceColumn], priceColumn, context),
  }));
}
