/**
 * Minimal SVG scene construction: everything is emitted as a string, no
 * DOM required, so figures render identically in CI and on a desk.
 */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 28, right: 64, bottom: 44, left: 64 };

export function escapeText(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function el(
  tag: string,
  attrs: Record<string, string | number | undefined>,
  children: string[] = [],
  text?: string,
): string {
  const parts = Object.entries(attrs)
    .filter(([, v]) => v !== undefined)
    .map(([k, v]) => `${k}="${typeof v === "number" ? round(v) : escapeText(String(v))}"`);
  const open = `<${tag}${parts.length ? " " + parts.join(" ") : ""}`;
  const inner = (text !== undefined ? escapeText(text) : "") + children.join("");
  return inner ? `${open}>${inner}</${tag}>` : `${open}/>`;
}

function round(v: number): string {
  return Number.isFinite(v) ? String(Math.round(v * 100) / 100) : "0";
}

export function polyline(
  points: Array<[number, number]>,
  attrs: Record<string, string | number | undefined>,
): string {
  const pts = points
    .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y))
    .map(([x, y]) => `${round(x)},${round(y)}`)
    .join(" ");
  return el("polyline", { ...attrs, points: pts, fill: "none" });
}

export function document(
  width: number,
  height: number,
  children: string[],
  title?: string,
): string {
  const head = title ? [el("title", {}, [], title)] : [];
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="11">` +
    head.join("") +
    children.join("") +
    `</svg>`
  );
}

export function xAxis(
  ticks: number[],
  scale: (v: number) => number,
  y: number,
  x0: number,
  x1: number,
  format: (v: number) => string = (v) => String(v),
): string {
  const parts = [
    el("line", { x1: x0, x2: x1, y1: y, y2: y, stroke: "#222", "stroke-width": 1 }),
  ];
  for (const t of ticks) {
    const x = scale(t);
    parts.push(el("line", { x1: x, x2: x, y1: y, y2: y + 5, stroke: "#222" }));
    parts.push(
      el("text", { x, y: y + 18, "text-anchor": "middle", fill: "#222" }, [], format(t)),
    );
  }
  return el("g", { class: "x-axis" }, parts);
}

export function yAxis(
  ticks: number[],
  scale: (v: number) => number,
  x: number,
  y0: number,
  y1: number,
  opts: { anchor?: "end" | "start"; color?: string; format?: (v: number) => string } = {},
): string {
  const anchor = opts.anchor ?? "end";
  const color = opts.color ?? "#222";
  const fmt = opts.format ?? ((v: number) => String(v));
  const dx = anchor === "end" ? -8 : 8;
  const parts = [
    el("line", { x1: x, x2: x, y1: y0, y2: y1, stroke: color, "stroke-width": 1 }),
  ];
  for (const t of ticks) {
    const y = scale(t);
    const tick = anchor === "end" ? -5 : 5;
    parts.push(el("line", { x1: x, x2: x + tick, y1: y, y2: y, stroke: color }));
    parts.push(
      el(
        "text",
        { x: x + dx, y: y + 3, "text-anchor": anchor, fill: color },
        [],
        fmt(t),
      ),
    );
  }
  return el("g", { class: "y-axis" }, parts);
}
