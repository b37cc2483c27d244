// Pure string renderers: SVG scenes and HTML cards. No DOM access, so
// the snapshot suite runs in plain node and byte-compares output.

import {
  clampToView,
  displayPoint,
  displayPolygon,
  toScreen,
  Viewport,
} from "./geometry.js";
import {
  displayValue,
  exactTooltip,
  fixed2,
  negate as negateJson,
} from "./rational.js";
import type { PolyhedronJson, SessionJson } from "./types.js";

export interface SceneLayer {
  label: string;
  color: string;
  poly: PolyhedronJson;
  visible?: boolean;
}

export const LAYER_COLORS = [
  "#c8c8c8",
  "#d9706f",
  "#e0a050",
  "#b8b84a",
  "#6f94d9",
  "#9a6fd9",
  "#5fb890",
];

const fmt = (x: number) => {
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

function axisTicks(lo: number, hi: number, step: number): number[] {
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9; t += step) {
    out.push(t);
  }
  return out;
}

export function renderScene(
  layers: SceneLayer[],
  view: Viewport,
  flipGain = true,
): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${view.width}" ` +
      `height="${view.height}" viewBox="0 0 ${view.width} ${view.height}">`,
  );
  parts.push('<rect width="100%" height="100%" fill="white"/>');
  const axisY = toScreen({ x: view.xMin, y: view.yMin }, view).y;
  const origin = toScreen({ x: view.xMin, y: view.yMin }, view);
  const corner = toScreen({ x: view.xMax, y: view.yMax }, view);
  parts.push(
    `<line x1="${fmt(origin.x)}" y1="${fmt(axisY)}" x2="${fmt(corner.x)}" ` +
      `y2="${fmt(axisY)}" stroke="#333"/>`,
  );
  parts.push(
    `<line x1="${fmt(origin.x)}" y1="${fmt(origin.y)}" ` +
      `x2="${fmt(origin.x)}" y2="${fmt(corner.y)}" stroke="#333"/>`,
  );
  for (const t of axisTicks(view.xMin, view.xMax, 200)) {
    const s = toScreen({ x: t, y: view.yMin }, view);
    parts.push(
      `<text x="${fmt(s.x)}" y="${fmt(axisY + 14)}" font-size="10" ` +
        `text-anchor="middle" fill="#333">${t}</text>`,
    );
  }
  for (const t of axisTicks(view.yMin, view.yMax, 100)) {
    const s = toScreen({ x: view.xMin, y: t }, view);
    parts.push(
      `<text x="${fmt(origin.x - 6)}" y="${fmt(s.y + 3)}" font-size="10" ` +
        `text-anchor="end" fill="#333">${t}</text>`,
    );
  }
  const xLabel = flipGain ? "gain (€)" : "objective 1";
  const yLabel = flipGain ? "work time (minutes)" : "objective 2";
  parts.push(
    `<text x="${fmt((origin.x + corner.x) / 2)}" ` +
      `y="${fmt(view.height - 8)}" font-size="11" text-anchor="middle" ` +
      `fill="#333">${xLabel}</text>`,
  );
  parts.push(
    `<text x="12" y="${fmt((origin.y + corner.y) / 2)}" font-size="11" ` +
      `text-anchor="middle" fill="#333" transform="rotate(-90 12 ` +
      `${fmt((origin.y + corner.y) / 2)})">${yLabel}</text>`,
  );

  for (const layer of layers) {
    if (layer.visible === false || layer.poly.empty) continue;
    const ring = displayPolygon(layer.poly, flipGain, view).map((p) =>
      toScreen(clampToView(p, view), view),
    );
    if (ring.length === 0) continue;
    const pts = ring.map((p) => `${fmt(p.x)},${fmt(p.y)}`).join(" ");
    if (ring.length === 1) {
      parts.push(
        `<circle cx="${fmt(ring[0].x)}" cy="${fmt(ring[0].y)}" r="4" ` +
          `fill="${layer.color}"><title>${layer.label}</title></circle>`,
      );
      continue;
    }
    parts.push(
      `<polygon points="${pts}" fill="${layer.color}" fill-opacity="0.72" ` +
        `stroke="${layer.color}" stroke-width="1.5">` +
        `<title>${layer.label}</title></polygon>`,
    );
    for (const v of layer.poly.vertices ?? []) {
      const s = toScreen(clampToView(displayPoint(v, flipGain), view), view);
      const shown = v
        .map((c, i) => displayValue(flipGain && i === 0 ? negateJson(c) : c))
        .join(", ");
      const exact = v
        .map((c, i) => exactTooltip(flipGain && i === 0 ? negateJson(c) : c))
        .join(", ");
      parts.push(
        `<circle cx="${fmt(s.x)}" cy="${fmt(s.y)}" r="2.8" fill="#222">` +
          `<title>(${shown}) = (${exact})</title></circle>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}


export function renderOutcomeCard(session: SessionJson): string {
  if (session.stage !== "Done" || !session.outcome_gain_convention) {
    return `<div class="card">walkthrough in progress (${session.stage})</div>`;
  }
  const [gain, time] = session.outcome_gain_convention;
  const minimal = session.outcome_minimal
    ? '<span class="badge ok">efficient under the realized scenario</span>'
    : '<span class="badge warn">dominated under the realized scenario</span>';
  return (
    '<div class="card outcome">' +
    `<h3>outcome</h3>` +
    `<p>scenario <strong>${session.omega}</strong>, second stage y = ` +
    `(${(session.y ?? []).map(displayValue).join(", ")})</p>` +
    `<p class="headline">gain ${fixed2(gain)} / time ${fixed2(time)}</p>` +
    minimal +
    "</div>"
  );
}

export function renderCoverList(
  outcome: string,
  covering: { x: string; covers: boolean }[],
): string {
  const items = covering
    .filter((c) => c.covers)
    .map((c) => `<li>x = (${c.x})</li>`)
    .join("");
  return (
    `<div class="card"><h3>decisions covering (${outcome})</h3>` +
    (items ? `<ul>${items}</ul>` : "<p>none</p>") +
    "</div>"
  );
}
