/**
 * Figure renderers over the documented CSV schemas. Renders are pure
 * string-in/string-out: no recomputation of statistics ever happens here.
 */

import { scaleLinear, scaleLog } from "d3-scale";

import {
  parseCalibration,
  parseEpisodes,
  parseGapCurve,
  parsePrices,
  parseStatPath,
  type EpisodeRow,
  type StatPathRow,
} from "./schema.js";
import { DEFAULT_MARGIN, document as svgDocument, el, polyline, xAxis, yAxis } from "./svg.js";

export interface OverlayInputs {
  statsCsv: string;
  pricesCsv?: string;
  episodeCsv?: string;
  title?: string;
  width?: number;
  height?: number;
}

const COLORS = {
  statistic: "#1f77b4",
  price: "#d62728",
  origination: "#ff9900",
  collapse: "#7b2d8b",
  originationMarker: "#2ca02c",
  collapseMarker: "#7b2d8b",
  gap: "#1f77b4",
  reset: "#888888",
  h0: "#d62728",
  rule: "#444444",
};

function finitePairs(
  rows: StatPathRow[],
  pick: (row: StatPathRow) => number | null,
  x: (r: number) => number,
  y: (v: number) => number,
): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  for (const row of rows) {
    const v = pick(row);
    if (v !== null && Number.isFinite(v)) pts.push([x(row.r), y(v)]);
  }
  return pts;
}

function episodeMarker(
  episode: EpisodeRow,
  kind: "origination" | "collapse",
  r: number,
  x: (r: number) => number,
  top: number,
  bottom: number,
): string {
  return el("line", {
    class: `episode-marker ${kind}`,
    "data-r": String(r),
    x1: x(r),
    x2: x(r),
    y1: top,
    y2: bottom,
    stroke: kind === "origination" ? COLORS.originationMarker : COLORS.collapseMarker,
    "stroke-width": 2,
    "stroke-dasharray": "6 3",
  });
}

/**
 * Statistic path with both threshold boundary curves, the price series on
 * a secondary axis, and dashed vertical markers at the recorded
 * origination/collapse fractions.
 */
export function renderPathOverlay(inputs: OverlayInputs): string {
  const width = inputs.width ?? 900;
  const height = inputs.height ?? 420;
  const m = DEFAULT_MARGIN;
  const rows = parseStatPath(inputs.statsCsv);
  if (rows.length === 0) throw new Error("statistic path csv has no rows");
  const episodes = inputs.episodeCsv ? parseEpisodes(inputs.episodeCsv) : [];
  const prices = inputs.pricesCsv ? parsePrices(inputs.pricesCsv) : [];

  const rMin = rows[0].r;
  const rMax = rows[rows.length - 1].r;
  const x = scaleLinear().domain([rMin, rMax]).range([m.left, width - m.right]);

  const statValues = rows
    .flatMap((row) => [row.statistic, row.cvOrigination, row.cvCollapse])
    .filter((v): v is number => v !== null && Number.isFinite(v));
  const yLo = Math.min(...statValues);
  const yHi = Math.max(...statValues);
  const pad = 0.05 * (yHi - yLo || 1);
  const y = scaleLinear()
    .domain([yLo - pad, yHi + pad])
    .range([height - m.bottom, m.top]);

  const children: string[] = [];
  children.push(
    polyline(finitePairs(rows, (r) => r.statistic, x, y), {
      class: "statistic",
      stroke: COLORS.statistic,
      "stroke-width": 1.5,
    }),
  );
  children.push(
    polyline(finitePairs(rows, (r) => r.cvOrigination, x, y), {
      class: "threshold origination",
      stroke: COLORS.origination,
      "stroke-width": 1.2,
    }),
  );
  children.push(
    polyline(finitePairs(rows, (r) => r.cvCollapse, x, y), {
      class: "threshold collapse",
      stroke: COLORS.collapse,
      "stroke-width": 1.2,
    }),
  );

  // price overlay on the right-hand axis, aligned on the fraction grid of
  // the recursion (observation index / n)
  if (prices.length > 0) {
    const n = prices.length;
    const pLo = Math.min(...prices.map((p) => p.price));
    const pHi = Math.max(...prices.map((p) => p.price));
    const pPad = 0.05 * (pHi - pLo || 1);
    const py = scaleLinear()
      .domain([pLo - pPad, pHi + pPad])
      .range([height - m.bottom, m.top]);
    const pts: Array<[number, number]> = [];
    for (let i = 0; i < n; i += 1) {
      const frac = (i + 1) / n;
      if (frac >= rMin && frac <= rMax) pts.push([x(frac), py(prices[i].price)]);
    }
    children.push(
      polyline(pts, { class: "price", stroke: COLORS.price, "stroke-width": 1 }),
    );
    children.push(
      yAxis(py.ticks(6), py, width - m.right, m.top, height - m.bottom, {
        anchor: "start",
        color: COLORS.price,
        format: (v) => v.toPrecision(3),
      }),
    );
  }

  for (const episode of episodes) {
    children.push(
      episodeMarker(episode, "origination", episode.rEHat, x, m.top, height - m.bottom),
    );
    if (episode.rFHat !== null) {
      children.push(
        episodeMarker(episode, "collapse", episode.rFHat, x, m.top, height - m.bottom),
      );
    }
  }

  children.push(
    xAxis(x.ticks(8), x, height - m.bottom, m.left, width - m.right, (v) =>
      v.toFixed(2),
    ),
  );
  children.push(
    yAxis(y.ticks(6), y, m.left, m.top, height - m.bottom, {
      format: (v) => v.toPrecision(3),
    }),
  );
  return svgDocument(width, height, children, inputs.title ?? "recursive statistic overlay");
}

/**
 * Calibration scatter: simulated quantiles by sample size next to the
 * log(n)/divisor reference curves.
 */
export function renderCalibration(
  tableCsv: string,
  divisors: number[] = [10, 2],
  width = 720,
  height = 420,
): string {
  const rows = parseCalibration(tableCsv);
  if (rows.length === 0) throw new Error("calibration csv has no rows");
  const m = DEFAULT_MARGIN;
  const ns = rows.map((r) => r.n);
  const nLo = Math.min(...ns);
  const nHi = Math.max(...ns);
  const x = scaleLinear().domain([nLo, nHi]).range([m.left, width - m.right]);
  const ruleValues = divisors.flatMap((d) => [Math.log(nLo) / d, Math.log(nHi) / d]);
  const values = rows.map((r) => r.value).concat(ruleValues);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const pad = 0.08 * (hi - lo || 1);
  const y = scaleLinear()
    .domain([lo - pad, hi + pad])
    .range([height - m.bottom, m.top]);

  const children: string[] = [];
  for (const divisor of divisors) {
    const pts: Array<[number, number]> = [];
    const steps = 64;
    for (let i = 0; i <= steps; i += 1) {
      const n = nLo + ((nHi - nLo) * i) / steps;
      pts.push([x(n), y(Math.log(n) / divisor)]);
    }
    children.push(
      polyline(pts, {
        class: `log-rule divisor-${divisor}`,
        stroke: COLORS.rule,
        "stroke-dasharray": "4 3",
      }),
    );
  }
  for (const row of rows) {
    children.push(
      el("circle", {
        class: `quantile ${row.hypothesis}`,
        cx: x(row.n),
        cy: y(row.value),
        r: 3.5,
        fill: row.hypothesis === "null" ? COLORS.h0 : COLORS.statistic,
      }),
    );
  }
  children.push(xAxis(x.ticks(6), x, height - m.bottom, m.left, width - m.right));
  children.push(
    yAxis(y.ticks(6), y, m.left, m.top, height - m.bottom, {
      format: (v) => v.toPrecision(3),
    }),
  );
  return svgDocument(width, height, children, "calibrated quantiles vs log rules");
}

/**
 * Collapse-gap curves on a log y axis: the explosive-window gap per
 * regime, with the re-initialization reset gap for contrast.
 */
export function renderGapCurve(gapCsv: string, width = 720, height = 420): string {
  const rows = parseGapCurve(gapCsv);
  if (rows.length === 0) throw new Error("gap csv has no rows");
  const m = DEFAULT_MARGIN;
  const ns = rows.map((r) => r.n);
  const x = scaleLinear()
    .domain([Math.min(...ns), Math.max(...ns)])
    .range([m.left, width - m.right]);
  const gaps = rows.flatMap((r) => [r.meanGap, r.meanResetGap]).filter((v) => v > 0);
  const y = scaleLog()
    .domain([Math.min(...gaps) / 1.5, Math.max(...gaps) * 1.5])
    .range([height - m.bottom, m.top]);

  const regimes = [...new Set(rows.map((r) => r.regime))];
  const children: string[] = [];
  regimes.forEach((regime, i) => {
    const series = rows.filter((r) => r.regime === regime).sort((a, b) => a.n - b.n);
    children.push(
      polyline(
        series.map((r) => [x(r.n), y(r.meanGap)] as [number, number]),
        {
          class: `gap regime-${regime}`,
          stroke: COLORS.gap,
          "stroke-width": 1.6,
          "stroke-dasharray": i === 0 ? undefined : "5 3",
        },
      ),
    );
    children.push(
      polyline(
        series.map((r) => [x(r.n), y(r.meanResetGap)] as [number, number]),
        {
          class: `reset-gap regime-${regime}`,
          stroke: COLORS.reset,
          "stroke-width": 1.2,
          "stroke-dasharray": i === 0 ? undefined : "5 3",
        },
      ),
    );
  });
  children.push(xAxis(x.ticks(6), x, height - m.bottom, m.left, width - m.right));
  children.push(
    yAxis(y.ticks(5), y, m.left, m.top, height - m.bottom, {
      format: (v) => v.toPrecision(2),
    }),
  );
  return svgDocument(width, height, children, "explosive-window gap vs sample size (log scale)");
}
