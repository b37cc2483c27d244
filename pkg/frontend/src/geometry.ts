// Presentation-space polygon assembly. Vertices come verbatim from the
// service; the only transforms applied are the gain-axis sign flip and
// the affine world-to-screen map. Unbounded upper sets are closed off
// along their unit recession rays at the viewport border.

import { negate, toNumber } from "./rational.js";
import type { PointJson, PolyhedronJson } from "./types.js";

export interface Viewport {
  // data ranges in display coordinates (gain right, time up)
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  width: number;
  height: number;
  margin: { left: number; right: number; top: number; bottom: number };
}

export const DEFAULT_VIEW: Viewport = {
  xMin: -700,
  xMax: 700,
  yMin: -60,
  yMax: 420,
  width: 640,
  height: 460,
  margin: { left: 58, right: 14, top: 14, bottom: 44 },
};

export interface Pt {
  x: number;
  y: number;
}

export function displayPoint(v: PointJson, flipGain: boolean): Pt {
  const first = flipGain ? negate(v[0]) : v[0];
  return { x: toNumber(first), y: toNumber(v[1]) };
}

export function toScreen(p: Pt, view: Viewport): Pt {
  const { margin } = view;
  const plotW = view.width - margin.left - margin.right;
  const plotH = view.height - margin.top - margin.bottom;
  return {
    x: margin.left + ((p.x - view.xMin) / (view.xMax - view.xMin)) * plotW,
    y: view.height - margin.bottom -
      ((p.y - view.yMin) / (view.yMax - view.yMin)) * plotH,
  };
}

function isUnitRays(poly: PolyhedronJson): boolean {
  const rays = poly.rays ?? [];
  if (rays.length !== 2) return false;
  const key = rays.map((r) => r.map((c) => String(c)).join(",")).sort();
  return key[0] === "0,1" && key[1] === "1,0";
}

/**
 * Closed polygon (display coordinates) for a served planar set.
 *
 * Upper sets (recession rays e1, e2 in storage space) are drawn as the
 * frontier polyline extended to the viewport border: upward from the
 * highest-gain vertex and leftward (toward worse gain) from the other
 * end.  Bounded regions are drawn as the convex ring of their vertices.
 */
export function displayPolygon(
  poly: PolyhedronJson,
  flipGain: boolean,
  view: Viewport,
): Pt[] {
  if (poly.empty || !poly.vertices || poly.vertices.length === 0) return [];
  const pts = poly.vertices.map((v) => displayPoint(v, flipGain));
  if (!isUnitRays(poly)) {
    if (pts.length <= 2) return pts;
    const cx = pts.reduce((s, p) => s + p.x, 0) / pts.length;
    const cy = pts.reduce((s, p) => s + p.y, 0) / pts.length;
    return [...pts].sort(
      (a, b) => Math.atan2(a.y - cy, a.x - cx) - Math.atan2(b.y - cy, b.x - cx),
    );
  }
  // storage lex order sorts by loss ascending = gain descending
  const frontier = [...pts].sort((a, b) => b.x - a.x || a.y - b.y);
  const top = view.yMax;
  const ring: Pt[] = [];
  ring.push({ x: frontier[0].x, y: top });
  ring.push(...frontier);
  const last = frontier[frontier.length - 1];
  const borderX = flipGain ? view.xMin : view.xMax;
  ring.push({ x: borderX, y: last.y });
  ring.push({ x: borderX, y: top });
  return ring;
}

export function clampToView(p: Pt, view: Viewport): Pt {
  return {
    x: Math.min(view.xMax, Math.max(view.xMin, p.x)),
    y: Math.min(view.yMax, Math.max(view.yMin, p.y)),
  };
}

/** Inverse of the screen map, for pointer interactions. */
export function fromScreen(p: Pt, view: Viewport): Pt {
  const { margin } = view;
  const plotW = view.width - margin.left - margin.right;
  const plotH = view.height - margin.top - margin.bottom;
  return {
    x: view.xMin + ((p.x - margin.left) / plotW) * (view.xMax - view.xMin),
    y: view.yMin +
      ((view.height - margin.bottom - p.y) / plotH) * (view.yMax - view.yMin),
  };
}
