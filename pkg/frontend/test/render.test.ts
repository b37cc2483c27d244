import { describe, expect, it } from "vitest";

import { DEFAULT_VIEW, displayPoint, displayPolygon } from "../src/geometry.js";
import { LAYER_COLORS, renderScene } from "../src/render.js";
import type { PolyhedronJson, SetSolutionJson } from "../src/types.js";
import { fixture } from "./helpers.js";

const image = fixture<PolyhedronJson>("upper-image");
const solution = fixture<SetSolutionJson>("solution");

function layersUnderTest() {
  const layers = [
    { label: "upper image", color: LAYER_COLORS[0], poly: image },
  ];
  solution.entries.forEach((entry, i) => {
    layers.push({
      label: `F(${entry.x.join(",")})`,
      color: LAYER_COLORS[(i + 1) % LAYER_COLORS.length],
      poly: entry.flexibility,
    });
  });
  return layers;
}

describe("scene rendering", () => {
  it("renders the upper image and flexibility sets (snapshot)", () => {
    const svg = renderScene(layersUnderTest(), DEFAULT_VIEW, true);
    expect(svg).toMatchSnapshot();
  });

  it("is byte-stable across repeated renders", () => {
    const a = renderScene(layersUnderTest(), DEFAULT_VIEW, true);
    const b = renderScene(layersUnderTest(), DEFAULT_VIEW, true);
    expect(a).toBe(b);
  });

  it("snapshots each flexibility set separately", () => {
    for (const entry of solution.entries) {
      const svg = renderScene(
        [{ label: "F", color: LAYER_COLORS[1], poly: entry.flexibility }],
        DEFAULT_VIEW,
        true,
      );
      expect(svg).toMatchSnapshot(`F(${entry.x.join(",")})`);
    }
  });

  it("labels axes per convention", () => {
    const svg = renderScene(layersUnderTest(), DEFAULT_VIEW, true);
    expect(svg).toContain("gain (€)");
    expect(svg).toContain("work time (minutes)");
    const raw = renderScene(layersUnderTest(), DEFAULT_VIEW, false);
    expect(raw).toContain("objective 1");
  });
});

describe("axis inversion is a pure presentation transform", () => {
  it("display gain equals negated served loss on every vertex", () => {
    for (const v of image.vertices ?? []) {
      const flipped = displayPoint(v, true);
      const raw = displayPoint(v, false);
      expect(flipped.x).toBe(raw.x === 0 ? 0 : -raw.x);
      expect(flipped.y).toBe(raw.y);
    }
  });

  it("gain_vertices mirror from the service matches the local flip", () => {
    const mirrored = (image.gain_vertices ?? []).map((v) =>
      displayPoint(v, false),
    );
    const local = (image.vertices ?? []).map((v) => displayPoint(v, true));
    expect(mirrored).toEqual(local);
  });

  it("polygon rings never invent vertices", () => {
    const ring = displayPolygon(image, true, DEFAULT_VIEW);
    const served = (image.vertices ?? []).map((v) => displayPoint(v, true));
    // every served vertex appears in the ring; extra points only close
    // the region at the viewport border
    for (const v of served) {
      expect(
        ring.some((p) => p.x === v.x && p.y === v.y),
      ).toBe(true);
    }
    for (const p of ring) {
      const isServed = served.some((v) => p.x === v.x && p.y === v.y);
      const onBorder = p.x === DEFAULT_VIEW.xMin ||
        p.x === DEFAULT_VIEW.xMax || p.y === DEFAULT_VIEW.yMax;
      expect(isServed || onBorder).toBe(true);
    }
  });
});
